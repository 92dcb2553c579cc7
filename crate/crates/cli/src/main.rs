fn main() -> std::process::ExitCode {
    sphosc_cli::run(std::env::args_os())
}
