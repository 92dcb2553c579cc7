//! Acceptance suite. Runs every criterion, prints one line each and exits
//! non-zero if any of them failed.

use std::process::ExitCode;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use sphosc_core::chiral::{chiral_partition, lambda_kmn, ExponentMode};
use sphosc_core::eigenfunctions::{build_eigenfunction, ode_residual, weighted_inner_product};
use sphosc_core::oracle::{lowest_eigenvalues, DiscretizationConfig};
use sphosc_core::partition::{
    heat_trace_leading_check, mulholland_coeffs, mulholland_sum, partition_function, poisson_dual_d1,
};
use sphosc_core::special::{binomial, Rational};
use sphosc_core::spectrum::{
    eigenvalue, enumerate_spectrum, find_degenerate_omega, group_degeneracies, multiplicity,
    DEFAULT_GROUPING_TOL,
};
use sphosc_core::{Error, ModeIndex, ModelParams};
use sphosc_validation::{run_all, Criterion, Verdict};

type Outcome = Result<Verdict, Error>;

fn degeneracy() -> Outcome {
    let w = 2.0 * 3f64.sqrt();
    let p = ModelParams::new(2, w)?;
    let a = eigenvalue(&p, ModeIndex::new(3, 1))?;
    let b = eigenvalue(&p, ModeIndex::new(1, 4))?;
    let w1 = find_degenerate_omega(2, ModeIndex::new(3, 1), ModeIndex::new(1, 4), (1.0, 5.0))?;
    let w2 = find_degenerate_omega(2, ModeIndex::new(9, 6), ModeIndex::new(1, 15), (1.0, 8.0))?;
    let e1 = w1.map_or(f64::INFINITY, |x| (x - w).abs());
    let e2 = w2.map_or(f64::INFINITY, |x| (x - 4.0).abs());
    let ok = (a - 44.0).abs() <= 1e-11 && (b - 44.0).abs() <= 1e-11 && e1 <= 1e-9 && e2 <= 1e-9;
    Ok(Verdict::new(
        ok,
        format!("lambda(3,1)-44={:.1e} lambda(1,4)-44={:.1e} |dw|={e1:.1e},{e2:.1e}", a - 44.0, b - 44.0),
    ))
}

fn zero_frequency() -> Outcome {
    let mut checked = 0;
    for d in 2..=5u32 {
        let p = ModelParams::new(d, 0.0)?;
        let top = f64::from(10 * (10 + d - 1));
        let groups = group_degeneracies(&enumerate_spectrum(&p, top)?, DEFAULT_GROUPING_TOL);
        if groups.len() != 11 {
            return Ok(Verdict::new(false, format!("d={d}: {} levels below {top}", groups.len())));
        }
        for (level, g) in (0..=10i64).zip(&groups) {
            let want = level * (level + i64::from(d) - 1);
            let dd = i64::from(d);
            let mult = binomial(level + dd, dd).unwrap() - binomial(level + dd - 2, dd).unwrap();
            if g.value != want as f64 || u128::from(g.total_multiplicity) != mult {
                return Ok(Verdict::new(
                    false,
                    format!("d={d} N={level}: {} x{} vs {want} x{mult}", g.value, g.total_multiplicity),
                ));
            }
            checked += 1;
        }
    }
    Ok(Verdict::new(true, format!("{checked} levels exact")))
}

fn oracle_agreement() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut worst_at = String::new();
    for d in 1..=3u32 {
        for omega in [0.0, 1.0, 2.0 * 3f64.sqrt()] {
            let p = ModelParams::new(d, omega)?;
            let degrees: &[u32] = if d == 1 { &[0] } else { &[0, 1, 2] };
            for &n in degrees {
                let mut exact = Vec::new();
                let mut m = 0;
                while exact.len() < 5 {
                    let mode = ModeIndex::new(m, n);
                    let copies = if d == 1 { multiplicity(&p, mode)? } else { 1 };
                    for _ in 0..copies {
                        exact.push(eigenvalue(&p, mode)?);
                    }
                    m += 1;
                }
                let s = lowest_eigenvalues(&DiscretizationConfig::new(p, n, 4000)?, 5)?;
                for (x, want) in s.eigenvalues.iter().zip(&exact) {
                    let err = (x - want).abs() / want.abs().max(1.0);
                    if err > worst {
                        worst = err;
                        worst_at = format!("d={d} w={omega:.3} n={n} lambda={want:.4}");
                    }
                }
            }
        }
    }
    Ok(Verdict::new(worst <= 1e-3, format!("max rel err {worst:.2e} ({worst_at})")))
}

fn poisson() -> Outcome {
    let p = ModelParams::new(1, 0.0)?;
    let mut worst: f64 = 0.0;
    for t in [0.1, 0.5, 1.0, 5.0, 10.0] {
        let dual = poisson_dual_d1(t)?;
        let direct = partition_function(&p, t, 1e-14 * dual)?.value;
        worst = worst.max(((direct - dual) / dual).abs());
    }
    Ok(Verdict::new(worst <= 1e-12, format!("max rel diff {worst:.2e}")))
}

fn mulholland() -> Outcome {
    let c = mulholland_coeffs(10)?;
    let exact_ok =
        c.exact[0] == Rational::new(1.into(), 12.into()) && c.exact[1] == Rational::new(7.into(), 480.into());
    let positive = c.coefficients.iter().all(|&a| a > 0.0);
    let mut residuals = Vec::new();
    for t in [0.2, 0.1, 0.05] {
        let s = mulholland_sum(t, 1e-12)?.value;
        residuals.push((t, s - 1.0 / t - 1.0 / 12.0));
    }
    let bounded = residuals.iter().all(|&(t, r)| r.abs() <= 0.02 * t);
    // halving t should roughly halve the residual
    let linear = residuals.windows(2).all(|w| (1.7..2.3).contains(&(w[0].1 / w[1].1)));
    let detail = residuals.iter().map(|(t, r)| format!("R({t})={r:.3e}")).collect::<Vec<_>>().join(" ");
    Ok(Verdict::new(
        exact_ok && positive && bounded && linear,
        format!("a0={} a1={} positive={positive} {detail}", c.exact[0], c.exact[1]),
    ))
}

fn heat_trace() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (d, omega) in [(1, 0.0), (1, 1.0), (2, 0.0), (2, 1.0)] {
        let ratio = heat_trace_leading_check(&ModelParams::new(d, omega)?, &[0.01])?[0];
        ok &= (ratio - 1.0).abs() <= 0.01;
        parts.push(format!("({d},{omega})={ratio:.4}"));
    }
    Ok(Verdict::new(ok, format!("ratios at t=0.01: {}", parts.join(" "))))
}

fn eigenfunctions() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    let omegas = [0.5, 1.0, 2.0 * 3f64.sqrt()];
    let grid: Vec<f64> = (0..200).map(|i| 10f64.powf(-2.0 + 4.0 * f64::from(i) / 199.0)).collect();
    let mut worst_res: f64 = 0.0;
    let mut worst_dot: f64 = 0.0;
    for _ in 0..20 {
        let d = rng.gen_range(2..=3);
        let omega = omegas[rng.gen_range(0..3)];
        let p = ModelParams::new(d, omega)?;
        let m = rng.gen_range(0..=5);
        let n = rng.gen_range(0..=3);
        let f = build_eigenfunction(&p, ModeIndex::new(m, n))?;
        worst_res = worst_res.max(ode_residual(&f, &grid)?);
        let other = (m + rng.gen_range(1..=4)) % 6;
        let g = build_eigenfunction(&p, ModeIndex::new(other, n))?;
        let ff = weighted_inner_product(&f.profile, &f.profile, 0.0)?;
        let gg = weighted_inner_product(&g.profile, &g.profile, 0.0)?;
        let fg = weighted_inner_product(&f.profile, &g.profile, 1e-12 * (ff * gg).sqrt())?;
        worst_dot = worst_dot.max(fg.abs() / (ff * gg).sqrt());
    }
    Ok(Verdict::new(
        worst_res <= 1e-8 && worst_dot <= 1e-8,
        format!("max residual {worst_res:.2e}, max overlap {worst_dot:.2e}"),
    ))
}

fn certified_tails() -> Outcome {
    let mut rng = StdRng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let p = ModelParams::new(rng.gen_range(1..=3), rng.gen_range(0.0..4.0))?;
        let t = rng.gen_range(0.05..5.0);
        let tol = 10f64.powf(rng.gen_range(-9.0..-4.0));
        let coarse = partition_function(&p, t, tol)?;
        let fine = partition_function(&p, t, tol / 100.0)?;
        let used = (coarse.value - fine.value).abs() / coarse.tail_bound.max(f64::MIN_POSITIVE);
        worst = worst.max(used);
    }
    Ok(Verdict::new(worst <= 1.0, format!("max |change|/tail_bound {worst:.5}")))
}

fn chiral() -> Outcome {
    let mut rng = StdRng::seed_from_u64(13);
    let mut worst_id: f64 = 0.0;
    for _ in 0..100 {
        let (k, m, n) = (rng.gen_range(1..=10), rng.gen_range(0..=20), rng.gen_range(0..=20));
        let lhs = lambda_kmn(k, m, n)?;
        let rhs =
            eigenvalue(&ModelParams::new(2, 2.0 * f64::from(k))?, ModeIndex::new(m, n))? - 2.0 * f64::from(k);
        worst_id = worst_id.max((lhs - rhs).abs() / rhs.abs().max(1.0));
    }
    let mut stable = true;
    let mut parts = Vec::new();
    for t in [1.0, 2.0, 5.0] {
        for k_max in [2, 4] {
            let a = chiral_partition(t, k_max, 1e-12, ExponentMode::Shifted)?;
            let b = chiral_partition(t, 2 * k_max, 1e-12, ExponentMode::Shifted)?;
            let change = ((b.value - a.value) / a.value).abs();
            let allowed = a.level_truncation + a.rel_error_bound + b.rel_error_bound;
            stable &= change <= allowed;
            if k_max == 2 {
                parts.push(format!("t={t}: {change:.1e}<={allowed:.1e}"));
            }
        }
    }
    let verbatim = chiral_partition(1.0, 4, 1e-12, ExponentMode::Verbatim)?;
    let flagged = !verbatim.converged;
    Ok(Verdict::new(
        worst_id <= 1e-12 && stable && flagged,
        format!(
            "identity err {worst_id:.1e}; shifted {}; verbatim flagged non-converged={flagged}",
            parts.join(" ")
        ),
    ))
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { name: "degeneracy reproduction", check: degeneracy as fn() -> Outcome },
        Criterion { name: "zero-frequency reductions", check: zero_frequency },
        Criterion { name: "oracle agreement", check: oracle_agreement },
        Criterion { name: "Poisson identity", check: poisson },
        Criterion { name: "Mulholland expansion", check: mulholland },
        Criterion { name: "heat-trace leading term", check: heat_trace },
        Criterion { name: "eigenfunction residuals", check: eigenfunctions },
        Criterion { name: "certified tails", check: certified_tails },
        Criterion { name: "chiral identity", check: chiral },
    ];
    let reports = run_all(&criteria);
    let passed = reports.iter().filter(|r| r.verdict.passed).count();
    println!("{passed} of {} criteria passed", reports.len());
    if passed == reports.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
