//! Acceptance suite. Prints one line per criterion and exits nonzero if any fails.

use std::f64::consts::TAU;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use primesum::arith::{sieve_table, ArithTable, FnKind};
use primesum::characters::{reconstruct_additive, CharacterTable};
use primesum::dioph::{realize_alpha, AlphaSource, AlphaSpec, Fraction};
use primesum::experiments::{floor_pow, run_and_write, ExperimentConfig, YRule};
use primesum::expsum::{
    expsum_at_rational, expsum_full, window_l2_average, ComplexAcc, PhaseContext, DEFAULT_RESYNC,
};
use primesum::verify::{
    check_grh_decomposition, check_hyperbola, check_initial_chain, check_large_sieve,
    check_sup_lower_bound, check_tau_rational, check_window_transform,
};

type Criterion = (&'static str, u64, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn trial_factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut k = 0;
        while n.is_multiple_of(p) {
            n /= p;
            k += 1;
        }
        if k > 0 {
            out.push((p, k));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn mu(n: u64) -> i64 {
    let f = trial_factor(n);
    if f.iter().any(|&(_, k)| k > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn sieves() -> Outcome {
    const N: u64 = 10_000;
    let tables: Vec<ArithTable> = [
        FnKind::VonMangoldt,
        FnKind::Divisor,
        FnKind::Moebius,
        FnKind::EulerPhi,
        FnKind::OmegaDistinct,
    ]
    .into_iter()
    .map(|k| sieve_table(k, 1, N).unwrap())
    .collect();
    let mut bad = Vec::new();
    for n in 1..=N {
        let f = trial_factor(n);
        let lambda = if f.len() == 1 {
            (f[0].0 as f64).ln()
        } else {
            0.0
        };
        let tau: u64 = f.iter().map(|&(_, k)| u64::from(k) + 1).product();
        let phi: u64 = f.iter().map(|&(p, k)| (p - 1) * p.pow(k - 1)).product();
        let omega = f.len() as f64;
        if (tables[0].get(n).unwrap() - lambda).abs() > 1e-12
            || tables[1].get(n).unwrap() != tau as f64
            || tables[2].get(n).unwrap() != mu(n) as f64
            || tables[3].get(n).unwrap() != phi as f64
            || tables[4].get(n).unwrap() != omega
        {
            bad.push(n);
        }
    }
    Outcome {
        passed: bad.is_empty(),
        detail: format!(
            "n <= {N}, 5 functions, mismatches {}, Λ tol 1e-12",
            bad.len()
        ),
    }
}

fn phase_f64(alpha: &AlphaSpec) -> f64 {
    let v = alpha.value();
    let frac = v - BigRational::from_integer(v.floor().to_integer());
    num_traits::ToPrimitive::to_f64(&frac).unwrap()
}

fn sums() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let lambda = sieve_table(FnKind::VonMangoldt, 1, 1_000_000).unwrap();
    let tau = sieve_table(FnKind::Divisor, 1, 1_000_000).unwrap();
    let mut worst_rational = 0.0f64;
    for i in 0..200 {
        let table = if i % 2 == 0 { &lambda } else { &tau };
        let q = rng.gen_range(1..=1000u64);
        let a = loop {
            let a = rng.gen_range(0..q);
            if gcd(a, q) == 1 {
                break a;
            }
        };
        let x = rng.gen_range(q.max(2)..=1_000_000);
        let frac = Fraction::new(a as i64, q).unwrap();
        let r = expsum_at_rational(table, frac, x).unwrap();
        let f = expsum_full(
            table,
            &PhaseContext::new(&AlphaSpec::from_fraction(a as i64, q)),
            x,
        )
        .unwrap();
        let mass: f64 = table.slice(1, x).iter().sum();
        worst_rational =
            worst_rational.max((r - f).norm() / r.norm().max(f.norm()).max(mass.sqrt()));
    }
    let sources = [
        AlphaSource::GoldenRatio,
        AlphaSource::Sqrt(2),
        AlphaSource::Sqrt(7),
        AlphaSource::EulerE,
    ];
    let mut worst_window = 0.0f64;
    for i in 0..50 {
        let table = if i % 2 == 0 { &lambda } else { &tau };
        let x = rng.gen_range(100..=10_000u64);
        let y = rng.gen_range(1..=x.min(400));
        let alpha = if i % 5 == 4 {
            AlphaSpec::from_fraction(rng.gen_range(0..97), 97)
        } else {
            realize_alpha(sources[i % 4].clone(), x * x).unwrap()
        };
        let ctx = PhaseContext::new(&alpha);
        let resync = [1, 7, 1000, DEFAULT_RESYNC][i % 4];
        let got = window_l2_average(table, &ctx, x, y, resync).unwrap().s;
        let t = phase_f64(&alpha);
        let units: Vec<Complex64> = (0..=x)
            .map(|m| {
                Complex64::from_polar(table.get(m.max(1)).unwrap(), TAU * (t * m as f64).fract())
            })
            .collect();
        let mut sum_sq = 0.0;
        for n in 1 - y as i64..=x as i64 {
            let mut w = ComplexAcc::new();
            for m in (n + 1).max(1)..=(n + y as i64).min(x as i64) {
                w.add(units[m as usize]);
            }
            sum_sq += w.value().norm_sqr();
        }
        let want = sum_sq / x as f64;
        worst_window = worst_window.max((got - want).abs() / want.abs().max(f64::MIN_POSITIVE));
    }
    Outcome {
        passed: worst_rational <= 1e-8 && worst_window <= 1e-6,
        detail: format!(
            "200 rational cases worst rel {worst_rational:.2e} (tol 1e-8); 50 window cases worst rel {worst_window:.2e} (tol 1e-6)"
        ),
    }
}

fn identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut failures = Vec::new();
    let mut cases = 0;
    let lambda = sieve_table(FnKind::VonMangoldt, 1, 100_000).unwrap();
    for src in [
        AlphaSource::Sqrt(2),
        AlphaSource::GoldenRatio,
        AlphaSource::EulerE,
    ] {
        for x in [1000u64, 10_000] {
            let table = lambda.restrict(1, x).unwrap();
            let alpha = realize_alpha(src.clone(), x * x).unwrap();
            let ctx = PhaseContext::new(&alpha);
            for y in [1u64, 50, 300] {
                let q = rng.gen_range(1..=1000i64);
                for beta in [
                    BigRational::from_integer(0.into()),
                    BigRational::new(rng.gen_range(0..q).into(), q.into()),
                ] {
                    cases += 1;
                    let r = check_window_transform(&table, &ctx, x, y, &beta).unwrap();
                    if !r.passed {
                        failures.push(format!("window-transform {src} x={x} y={y} β={beta}"));
                    }
                }
            }
        }
    }
    for (x, q_max) in [(16u64, 4u64), (1000, 31), (10_000, 12), (100_000, 5)] {
        for q in 1..=q_max {
            for a in (0..q).filter(|&a| gcd(a, q) == 1) {
                cases += 1;
                if !check_hyperbola(x, Fraction::new(a as i64, q).unwrap())
                    .unwrap()
                    .passed
                {
                    failures.push(format!("hyperbola x={x} {a}/{q}"));
                }
            }
        }
    }
    for (q, x) in [
        (1u64, 100_000u64),
        (4, 100),
        (30, 10_000),
        (97, 100_000),
        (105, 100_000),
        (1024, 50_000),
        (9_999, 100_000),
    ] {
        for a in (1..q.max(2)).filter(|&a| gcd(a, q) == 1).take(4) {
            cases += 1;
            let table = lambda.restrict(1, x).unwrap();
            if !check_grh_decomposition(&table, q, a as i64, x)
                .unwrap()
                .passed
            {
                failures.push(format!("grh-decomposition q={q} a={a} x={x}"));
            }
        }
    }
    let mut worst = 0.0f64;
    for q in 1..=200u64 {
        let tab = CharacterTable::new(q).unwrap();
        for a in (0..q).filter(|&a| gcd(a, q) == 1) {
            for n in (0..q).filter(|&n| gcd(n, q) == 1) {
                let z = reconstruct_additive(&tab, a as i64, n as i64).unwrap();
                let want = Complex64::from_polar(1.0, TAU * ((a * n) % q) as f64 / q as f64);
                worst = worst.max((z - want).norm());
            }
        }
    }
    if worst > 1e-6 {
        failures.push(format!("reconstruct_additive worst {worst:.2e}"));
    }
    Outcome {
        passed: failures.is_empty(),
        detail: format!(
            "{cases} check cases + reconstruct_additive q <= 200 (worst {worst:.2e}); tol 1e-6 (hyperbola 1e-8); failures {:?}",
            failures
        ),
    }
}

fn farey(order: u64) -> Vec<BigRational> {
    let mut out = Vec::new();
    for q in 1..=order {
        for a in (0..q).filter(|&a| gcd(a, q) == 1) {
            out.push(BigRational::new(BigInt::from(a), BigInt::from(q)));
        }
    }
    out
}

fn theorems() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut failures = Vec::new();
    let mut worst_sieve = 0.0f64;
    for i in 0..1000 {
        let n = rng.gen_range(1..=4096usize);
        let offset = rng.gen_range(0..1_000_000u64);
        let coeffs: Vec<f64> = match i % 3 {
            0 => (0..n)
                .map(|_| if rng.gen_bool(0.5) { 1.0 } else { -1.0 })
                .collect(),
            1 => (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            _ => vec![1.0; n],
        };
        let (points, delta) = if i % 2 == 0 {
            let order = rng.gen_range(1..=24u64);
            (farey(order), 1.0 / (order * order) as f64)
        } else {
            // K equally spaced points shifted by a random rational
            let k = rng.gen_range(1..=300i64);
            let shift = BigRational::new(rng.gen_range(0..1000).into(), 1000.into());
            let pts = (0..k)
                .map(|j| BigRational::new(j.into(), k.into()) + &shift / BigInt::from(k))
                .collect();
            (pts, 1.0 / k as f64)
        };
        let r = check_large_sieve(&coeffs, offset, &points, delta).unwrap();
        worst_sieve = worst_sieve.max(r.lhs / r.rhs);
        if !r.passed {
            failures.push(format!("large-sieve instance {i}"));
        }
    }
    let lambda = sieve_table(FnKind::VonMangoldt, 1, 1_000_000).unwrap();
    let mut grid = 0;
    for src in [
        AlphaSource::GoldenRatio,
        AlphaSource::Sqrt(2),
        AlphaSource::EulerE,
    ] {
        for x in [10_000u64, 100_000, 1_000_000] {
            let table = lambda.restrict(1, x).unwrap();
            let alpha = realize_alpha(src.clone(), x * x).unwrap();
            let ctx = PhaseContext::new(&alpha);
            for theta in [0.25, 0.30] {
                grid += 1;
                let y = floor_pow(x, theta);
                let q_max = floor_pow(x, 0.4);
                if !check_initial_chain(&table, &ctx, x, y, q_max, DEFAULT_RESYNC)
                    .unwrap()
                    .passed
                {
                    failures.push(format!("initial-chain {src} x={x} θ={theta}"));
                }
                if !check_sup_lower_bound(&table, &ctx, x, y, DEFAULT_RESYNC)
                    .unwrap()
                    .passed
                {
                    failures.push(format!("sup-lower-bound {src} x={x} θ={theta}"));
                }
            }
        }
    }
    Outcome {
        passed: failures.is_empty(),
        detail: format!(
            "1000 large-sieve instances (max lhs/rhs {worst_sieve:.4}), {grid} chain + sup grid points; slack 1e-6; failures {failures:?}"
        ),
    }
}

fn gauss_sums() -> Outcome {
    let mut worst_principal = 0.0f64;
    for q in 1..=10_000u64 {
        let g = CharacterTable::new(q).unwrap().gauss_sum(0);
        worst_principal = worst_principal.max((g - mu(q) as f64).norm());
    }
    let mut worst_modulus = 0.0f64;
    for p in (2..=200u64).filter(|&p| trial_factor(p).len() == 1 && trial_factor(p)[0].1 == 1) {
        let tab = CharacterTable::new(p).unwrap();
        for idx in 1..tab.len() {
            worst_modulus =
                worst_modulus.max((tab.gauss_sum(idx).norm() - (p as f64).sqrt()).abs());
        }
    }
    Outcome {
        passed: worst_principal <= 1e-9 && worst_modulus <= 1e-8,
        detail: format!(
            "G(χ0) = μ(q), q <= 1e4: worst {worst_principal:.2e} (tol 1e-9); |G| = √p, p <= 200: worst {worst_modulus:.2e} (tol 1e-8)"
        ),
    }
}

fn divisor_asymptotic() -> Outcome {
    let tau = sieve_table(FnKind::Divisor, 1, 1_000_000).unwrap();
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for x in [10_000u64, 100_000, 1_000_000] {
        let q_grid: Vec<u64> = (1..=100u64.min((x as f64).sqrt() as u64)).collect();
        for r in check_tau_rational(&tau, x, &q_grid, 0).unwrap() {
            worst = worst.max(r.lhs);
            if !r.passed {
                failures.push(format!("x={x} q={}", r.parameters["q"]));
            }
        }
    }
    Outcome {
        passed: failures.is_empty(),
        detail: format!("max normalized error {worst:.4} (ceiling 10); failures {failures:?}"),
    }
}

fn results_dir() -> PathBuf {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../results");
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn scaling() -> Outcome {
    let mut lines = Vec::new();
    let mut passed = true;
    for (src, tag) in [
        (AlphaSource::GoldenRatio, "golden"),
        (AlphaSource::Sqrt(2), "sqrt2"),
    ] {
        let mut cfg = ExperimentConfig::new(
            src,
            FnKind::VonMangoldt,
            vec![10_000, 31_623, 100_000, 316_228, 1_000_000],
        );
        cfg.y_rule = Some(YRule::PowerOfX(0.28));
        cfg.out_path = results_dir().join(format!("scaling_lambda_{tag}_theta028.csv"));
        let rows = run_and_write("scaling-lambda", &cfg).unwrap();
        let min = rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
        passed &= rows.len() == 5 && min > 0.05;
        lines.push(format!("{tag} min ratio {min:.4}"));
    }
    Outcome {
        passed,
        detail: format!(
            "S/(y log x) floor 0.05, θ = 0.28, x <= 1e6: {}; CSV in results/",
            lines.join(", ")
        ),
    }
}

fn csv_body(path: &Path) -> String {
    let text = fs::read_to_string(path).unwrap();
    text.lines()
        .map(|l| l.rsplit_once(',').map_or(l, |(head, _)| head))
        .collect::<Vec<_>>()
        .join("\n")
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut same = true;
    let mut compared = 0;
    let mut rows = Vec::new();
    for (name, kind, y_rule) in [
        (
            "scaling-lambda",
            FnKind::VonMangoldt,
            Some(YRule::PowerOfX(0.28)),
        ),
        (
            "sup-growth",
            FnKind::VonMangoldt,
            Some(YRule::PowerOfX(0.3)),
        ),
        (
            "scaling-tau",
            FnKind::Divisor,
            Some(YRule::FromConvergent("1/24".into())),
        ),
        ("vinogradov-envelope", FnKind::VonMangoldt, None),
    ] {
        let mut bodies = Vec::new();
        for (run, threads) in [(0, None), (1, Some(1)), (2, Some(2))] {
            let mut cfg =
                ExperimentConfig::new(AlphaSource::Sqrt(3), kind, vec![10_000, 50_000, 200_000]);
            cfg.y_rule = y_rule.clone();
            cfg.seed = 17;
            cfg.threads = threads;
            cfg.resync = 4096;
            cfg.out_path = dir.path().join(format!("{name}_{run}.csv"));
            run_and_write(name, &cfg).unwrap();
            bodies.push(csv_body(&cfg.out_path));
        }
        compared += bodies.len();
        rows.push(format!("{name} {}", bodies[0].lines().count() - 1));
        same &= bodies[0].lines().count() > 1;
        same &= bodies.windows(2).all(|w| w[0] == w[1]);
    }
    Outcome {
        passed: same,
        detail: format!(
            "{compared} runs across 1-2 threads, rows per experiment [{}], CSV bodies without wall_time compared byte-for-byte",
            rows.join(", ")
        ),
    }
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("sieves match trial division", 5, sieves),
        ("rational and window sums match oracles", 120, sums),
        ("exact identities", 180, identities),
        ("large sieve, initial chain, sup bound", 600, theorems),
        ("Gauss sums", 60, gauss_sums),
        ("divisor sums at rationals", 300, divisor_asymptotic),
        ("scaling ratio floor", 600, scaling),
        ("determinism", 600, determinism),
    ];
    let mut out = std::io::stdout().lock();
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*budget);
        let ok = o.passed && in_time;
        if !ok {
            failed += 1;
        }
        writeln!(
            out,
            "{} criterion {}: {name} [{:.1}s of {budget}s] {}",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            elapsed.as_secs_f64(),
            o.detail
        )
        .unwrap();
        out.flush().unwrap();
    }
    writeln!(
        out,
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    )
    .unwrap();
    if failed > 0 {
        std::process::exit(1);
    }
}
