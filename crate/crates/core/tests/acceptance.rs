//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#![allow(clippy::needless_range_loop)]

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rand::Rng;
use ysys::cluster::{preset, random_y, run_mutation_cycle, ClusterSeed, TropicalSeed};
use ysys::dilog::{dilog_oracle, rogers_dilog, L_ONE};
use ysys::identities::{
    expected_constant, table_closed_form, verify_cf_identity, verify_flat_specialization,
    verify_folding, verify_level_identity,
};
use ysys::qsolve::solve_constant_y;
use ysys::ydynamics::{
    check_periodicity, evolve, period, periodic_dilog_sum, periodic_sum_target, random_slice,
};
use ysys::{seeded_rng, ExactRational, Family, GramVariant, RootSystem, TypeLabel};

type Criterion = (&'static str, fn() -> Outcome);

const VARIANTS: [GramVariant; 2] = [GramVariant::A, GramVariant::AFlat];

struct Outcome {
    passed: bool,
    summary: String,
    failures: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            passed: true,
            summary: String::new(),
            failures: Vec::new(),
        }
    }

    fn require(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.passed = false;
            if self.failures.len() < 10 {
                self.failures.push(what());
            }
        }
    }
}

fn label(s: &str) -> TypeLabel {
    s.parse().unwrap()
}

fn table_reproduction() -> Outcome {
    let mut out = Outcome::new();
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut count = 0;
    for t in TypeLabel::sweep(8) {
        for v in VARIANTS {
            count += 1;
            match verify_cf_identity(t, v, 1e-9) {
                Ok(r) => {
                    worst = worst.max(r.deviation);
                    out.require(r.passed, || r.to_line());
                    out.require(r.expected == table_closed_form(t, v), || {
                        format!("{t}/{v}: target mismatch")
                    });
                }
                Err(e) => out.require(false, || format!("{t}/{v}: {e}")),
            }
        }
    }
    let elapsed = start.elapsed();
    out.require(elapsed < Duration::from_secs(10), || {
        format!("sweep took {elapsed:?}")
    });
    for (s, v, n, d) in [
        ("E8", GramVariant::A, 15, 2),
        ("G2", GramVariant::AFlat, 8, 3),
        ("B3", GramVariant::A, 15, 4),
    ] {
        out.require(
            expected_constant(label(s), v) == ExactRational::new(n, d),
            || format!("{s}/{v} != {n}/{d}"),
        );
    }
    out.summary = format!(
        "{count} instances, max deviation {worst:.2e} (tol 1e-9), sweep {:.2}s",
        elapsed.as_secs_f64()
    );
    out
}

fn exact_targets() -> Outcome {
    let mut out = Outcome::new();
    let mut count = 0;
    for t in TypeLabel::sweep(8) {
        for v in VARIANTS {
            count += 1;
            let (unified, table) = (expected_constant(t, v), table_closed_form(t, v));
            out.require(unified == table, || {
                format!("{t}/{v}: {unified} != {table}")
            });
            if t.family() == Family::T {
                let a2n = TypeLabel::new(Family::A, 2 * t.rank()).unwrap();
                let half = expected_constant(a2n, v) / ExactRational::from_integer(2);
                out.require(unified == half, || format!("{t}/{v}: halving fails"));
            }
        }
    }
    out.summary = format!("{count} exact rational equalities, tadpole halving for T1..T8");
    out
}

fn level_identity() -> Outcome {
    let mut out = Outcome::new();
    let mut worst = 0.0f64;
    let mut count = 0;
    for t in TypeLabel::sweep(6)
        .into_iter()
        .filter(|t| t.family().is_simply_laced())
    {
        for level in 2..=5 {
            count += 1;
            match verify_level_identity(t, level, 1e-8) {
                Ok(r) => {
                    worst = worst.max(r.deviation);
                    out.require(r.passed, || r.to_line());
                }
                Err(e) => out.require(false, || format!("{t} level {level}: {e}")),
            }
        }
    }
    out.summary = format!("{count} instances, max deviation {worst:.2e} (tol 1e-8)");
    out
}

fn folding_checks() -> Outcome {
    let mut out = Outcome::new();
    let mut worst = 0.0f64;
    let mut count = 0;
    for t in TypeLabel::sweep(8)
        .into_iter()
        .filter(|t| t.family().is_foldable())
    {
        count += 1;
        match verify_folding(t, 1e-10) {
            Ok(r) => {
                worst = worst.max(r.deviation);
                out.require(r.passed, || r.to_line());
            }
            Err(e) => out.require(false, || format!("{t}: {e}")),
        }
    }
    out.summary = format!("{count} folded types, max deviation {worst:.2e} (tol 1e-10)");
    out
}

fn flat_specialization() -> Outcome {
    let mut out = Outcome::new();
    let mut worst = 0.0f64;
    let mut count = 0;
    for t in TypeLabel::sweep(6)
        .into_iter()
        .filter(|t| t.family().is_simply_laced())
    {
        count += 1;
        match verify_flat_specialization(t, 1e-10) {
            Ok(r) => {
                worst = worst.max(r.deviation);
                out.require(r.passed, || r.to_line());
            }
            Err(e) => out.require(false, || format!("{t}: {e}")),
        }
    }
    out.summary = format!("{count} simply-laced types, max deviation {worst:.2e} (tol 1e-10)");
    out
}

fn dynamics() -> Outcome {
    let mut out = Outcome::new();
    let (mut worst_period, mut worst_sum, mut worst_drift) = (0.0f64, 0.0f64, 0.0f64);
    let mut runs = 0;
    for s in ["A1", "A2", "A3", "A4", "D4"] {
        let rs = RootSystem::new(label(s));
        for level in [2, 3] {
            let p = period(&rs, level).unwrap();
            let target = periodic_sum_target(&rs, level).unwrap() as f64;
            for seed in 0..100 {
                runs += 1;
                let mut rng = seeded_rng(seed);
                let s0 = random_slice(&rs, level, &mut rng);
                let s1 = random_slice(&rs, level, &mut rng);
                let traj = evolve(&rs, level, s0, s1, p + 2).unwrap();
                let dev = check_periodicity(&traj).unwrap();
                let sum_dev = (periodic_dilog_sum(&traj).unwrap() - target).abs();
                worst_period = worst_period.max(dev);
                worst_sum = worst_sum.max(sum_dev);
                out.require(dev <= 1e-8, || {
                    format!("{s} l={level} seed={seed}: periodicity {dev:.2e}")
                });
                out.require(sum_dev <= 1e-8, || {
                    format!("{s} l={level} seed={seed}: sum deviation {sum_dev:.2e}")
                });
            }

            let g = solve_constant_y(&rs, level).unwrap();
            let traj = evolve(&rs, level, g.y.clone(), g.y.clone(), p + 2).unwrap();
            for slice in &traj.slices {
                for (row, g_row) in slice.iter().zip(&g.y) {
                    for (v, w) in row.iter().zip(g_row) {
                        worst_drift = worst_drift.max((v - w).abs() / w);
                    }
                }
            }
        }
    }
    out.require(worst_drift <= 1e-12, || {
        format!("constant-solution drift {worst_drift:.2e}")
    });
    out.summary = format!(
        "{runs} orbits, periodicity {worst_period:.2e}, sum {worst_sum:.2e} (tol 1e-8), constant drift {worst_drift:.2e} (tol 1e-12)"
    );
    out
}

/// Plain exchange relation on `f64`, no log form, no BigInt.
fn naive_mutate(b: &mut [Vec<i64>], y: &mut [f64], k: usize) {
    let n = y.len();
    let yk = y[k];
    for j in 0..n {
        if j != k {
            let bkj = b[k][j] as i32;
            y[j] *= yk.powi(bkj.max(0)) * (1.0 + yk).powi(-bkj);
        }
    }
    y[k] = 1.0 / yk;
    let old = b.to_vec();
    for i in 0..n {
        for j in 0..n {
            b[i][j] = if i == k || j == k {
                -old[i][j]
            } else {
                old[i][j] + old[i][k].signum() * (old[i][k] * old[k][j]).max(0)
            };
        }
    }
}

/// Pre-mutation values and tropical signs by brute force. In the tropical
/// limit `y = exp(−λ w)`, `λ → ∞`, `w > 0` generic, `c_k` is positive
/// exactly when `y_k → 0`.
fn naive_cycle(b0: &[Vec<i64>], seq: &[usize], y0: &[f64]) -> (Vec<f64>, Vec<bool>) {
    let mut b = b0.to_vec();
    let mut y = y0.to_vec();
    let mut values = Vec::new();
    for &k in seq {
        values.push(y[k]);
        naive_mutate(&mut b, &mut y, k);
    }
    let weights = [1.0, std::f64::consts::SQRT_2, PI / 2.0, std::f64::consts::E];
    let mut b = b0.to_vec();
    let mut y: Vec<f64> = (0..y0.len()).map(|i| (-40.0 * weights[i]).exp()).collect();
    let mut minus = Vec::new();
    for &k in seq {
        minus.push(y[k] > 1.0);
        naive_mutate(&mut b, &mut y, k);
    }
    (values, minus)
}

fn random_skew<R: Rng>(n: usize, rng: &mut R) -> Vec<Vec<i64>> {
    let mut b = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = rng.random_range(-3..=3);
            b[i][j] = v;
            b[j][i] = -v;
        }
    }
    b
}

fn cluster() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = seeded_rng(2024);
    let l = |x: f64| rogers_dilog(x).unwrap() / L_ONE;

    // Rank one.
    let mut worst_rank1 = 0.0f64;
    for _ in 0..100 {
        let y0 = random_y(1, &mut rng);
        let r = run_mutation_cycle(&[vec![0]], &[0, 0], &y0).unwrap();
        let t = y0[0];
        let oracle = l(t / (1.0 + t)) + l(1.0 / (1.0 + t));
        worst_rank1 = worst_rank1.max((r.normalized_sum - 1.0).abs());
        out.require(r.is_periodic && r.period == 2 && r.n_minus == 1, || {
            format!("rank1 y0={t}: {r:?}")
        });
        out.require((r.normalized_sum - 1.0).abs() <= 1e-12, || {
            format!("rank1 sum {}", r.normalized_sum)
        });
        out.require((r.normalized_sum - oracle).abs() <= 1e-12, || {
            format!("rank1 oracle {oracle}")
        });
    }

    // Pentagon, checked against the naive recomputation.
    let p = preset("pentagon").unwrap();
    let mut worst_pentagon = 0.0f64;
    let mut n_minus_seen = Vec::new();
    for _ in 0..100 {
        let y0 = random_y(2, &mut rng);
        let r = run_mutation_cycle(&p.b, &p.sequence, &y0).unwrap();
        let (values, minus) = naive_cycle(&p.b, &p.sequence, &y0);
        let dev = (r.normalized_sum - r.n_minus as f64).abs();
        worst_pentagon = worst_pentagon.max(dev);
        out.require(r.is_periodic && r.period == 5, || {
            format!("pentagon y0={y0:?} not periodic")
        });
        out.require(dev <= 1e-10, || {
            format!("pentagon y0={y0:?}: deviation {dev:.2e}")
        });
        out.require(r.n_minus == minus.iter().filter(|&&m| m).count(), || {
            "pentagon N_- disagrees with oracle".into()
        });
        let close = r
            .steps
            .iter()
            .zip(&values)
            .all(|(s, v)| (s.y - v).abs() <= 1e-12 * v);
        out.require(close, || "pentagon y-values disagree with oracle".into());
        n_minus_seen.push(r.n_minus);
    }
    n_minus_seen.dedup();
    out.require(n_minus_seen.len() == 1, || {
        format!("N_- depends on y0: {n_minus_seen:?}")
    });

    // Involutivity on random seeds.
    let mut involution_failures = 0;
    for _ in 0..10_000 {
        let n = rng.random_range(1..=4);
        let b = random_skew(n, &mut rng);
        let seed = ClusterSeed::new(&b, random_y(n, &mut rng)).unwrap();
        let k = rng.random_range(0..n);
        let back = seed.mutate(k).and_then(|s| s.mutate(k)).unwrap();
        let y_ok = back
            .y
            .iter()
            .zip(&seed.y)
            .all(|(a, b)| (a - b).abs() <= 1e-12 * b);
        if back.b != seed.b || back.c != seed.c || !y_ok {
            involution_failures += 1;
        }
    }
    out.require(involution_failures == 0, || {
        format!("{involution_failures} involution failures")
    });

    // Sign coherence along random sequences.
    let mut coherence_failures = 0;
    for _ in 0..10_000 {
        let n = rng.random_range(1..=4);
        let mut seed = TropicalSeed::new(&random_skew(n, &mut rng)).unwrap();
        let len = rng.random_range(1..=20);
        for _ in 0..len {
            match seed.mutate(rng.random_range(0..n)) {
                Ok(s) if s.is_sign_coherent() => seed = s,
                _ => {
                    coherence_failures += 1;
                    break;
                }
            }
        }
    }
    out.require(coherence_failures == 0, || {
        format!("{coherence_failures} sign-coherence failures")
    });

    out.summary = format!(
        "rank1 |sum-1| {worst_rank1:.2e}, pentagon |sum-N_-| {worst_pentagon:.2e} with N_-={:?}, \
         involution failures {involution_failures}/10000, coherence failures {coherence_failures}/10000",
        n_minus_seen
    );
    out
}

fn dilogarithm() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = seeded_rng(99);
    let (mut worst_oracle, mut worst_reflection) = (0.0f64, 0.0f64);
    for k in 0..1000 {
        // Half on a uniform grid, half random.
        let x = if k < 500 {
            (k as f64 + 0.5) / 500.0
        } else {
            rng.random_range(0.0..1.0)
        };
        let d = (rogers_dilog(x).unwrap() - dilog_oracle(x).unwrap()).abs();
        worst_oracle = worst_oracle.max(d);
        out.require(d <= 1e-10, || format!("x={x}: oracle deviation {d:.2e}"));
        let r = (rogers_dilog(x).unwrap() + rogers_dilog(1.0 - x).unwrap() - PI * PI / 6.0).abs();
        worst_reflection = worst_reflection.max(r);
        out.require(r <= 1e-12, || {
            format!("x={x}: reflection deviation {r:.2e}")
        });
    }
    let half = (rogers_dilog(0.5).unwrap() - PI * PI / 12.0).abs();
    out.require(half <= 1e-13, || format!("L(1/2) deviation {half:.2e}"));
    out.summary = format!(
        "oracle {worst_oracle:.2e} (tol 1e-10), reflection {worst_reflection:.2e} (tol 1e-12), L(1/2) {half:.2e} (tol 1e-13)"
    );
    out
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("cf identity sweep", table_reproduction),
        ("exact targets", exact_targets),
        ("level identity", level_identity),
        ("folding", folding_checks),
        ("flat specialization", flat_specialization),
        ("Y-system dynamics", dynamics),
        ("cluster mutation cycles", cluster),
        ("dilogarithm kernel", dilogarithm),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        println!(
            "{} [{}] {name}: {}",
            if o.passed { "PASS" } else { "FAIL" },
            i + 1,
            o.summary
        );
        for f in &o.failures {
            println!("    {f}");
        }
        all &= o.passed;
    }
    if !all {
        std::process::exit(1);
    }
}
