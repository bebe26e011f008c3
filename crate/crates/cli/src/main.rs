//! `ysys`: verify dilogarithm identities, solve Q-systems, evolve Y-systems
//! and run mutation cycles from the command line.

mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ysys::cluster::{self, parse_exchange_matrix, run_mutation_cycle, TropicalSign};
use ysys::identities::{
    verify_cf_identity, verify_flat_specialization, verify_folding, verify_level_identity,
};
use ysys::qsolve::{change_vars, solve_constant_y, solve_q_system, Direction, SolverConfig};
use ysys::ydynamics::{
    check_periodicity, evolve, period, periodic_dilog_sum, periodic_sum_target, random_slice,
};
use ysys::{seeded_rng, ExactRational, GramVariant, RootSystem, TypeLabel};

use report::{write_rows, Format, Row};

#[derive(Parser, Debug)]
#[command(
    name = "ysys",
    version,
    about = "Dilogarithm identities for Y-systems and Q-systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check dilogarithm identities against their exact rational values.
    Verify(VerifyArgs),
    /// Solve the constant Q-system (or the level-ℓ Y-system with --level).
    Solve(SolveArgs),
    /// Evolve the Y-system from random data and check periodicity and the period sum.
    Dynamics(DynamicsArgs),
    /// Run a mutation cycle and check its dilogarithm identity.
    Cluster(ClusterArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum VariantSel {
    A,
    Aflat,
    Both,
}

impl VariantSel {
    fn variants(self) -> Vec<GramVariant> {
        match self {
            VariantSel::A => vec![GramVariant::A],
            VariantSel::Aflat => vec![GramVariant::AFlat],
            VariantSel::Both => vec![GramVariant::A, GramVariant::AFlat],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
enum Check {
    Cf,
    Level,
    Folding,
    Flat,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Type label such as E8, B3 or T2; repeatable. Defaults to every type up to rank 8.
    #[arg(long = "type", value_parser = parse_label, conflicts_with = "all")]
    types: Vec<TypeLabel>,
    /// Every type up to rank 8 and every check.
    #[arg(long)]
    all: bool,
    #[arg(long, value_enum, default_value = "both")]
    variant: VariantSel,
    /// Check to run; repeatable. Defaults to cf.
    #[arg(long = "check", value_enum)]
    checks: Vec<Check>,
    /// Level for the level check.
    #[arg(long, default_value_t = 2, value_parser = parse_level)]
    level: usize,
    /// Override the per-check tolerance.
    #[arg(long, value_parser = parse_tol)]
    tol: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long = "type", value_parser = parse_label, required = true)]
    types: Vec<TypeLabel>,
    #[arg(long, value_enum, default_value = "both", conflicts_with = "level")]
    variant: VariantSel,
    /// Solve the level-ℓ constant Y-system instead (simply-laced types).
    #[arg(long, value_parser = parse_level)]
    level: Option<usize>,
    /// Residual bound for a row to pass.
    #[arg(long, value_parser = parse_tol)]
    tol: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct DynamicsArgs {
    #[arg(long = "type", value_parser = parse_label, required = true)]
    types: Vec<TypeLabel>,
    #[arg(long, default_value_t = 2, value_parser = parse_level)]
    level: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-8, value_parser = parse_tol)]
    tol: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct ClusterArgs {
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(cluster::PRESET_NAMES),
          required_unless_present = "b_matrix", conflicts_with = "b_matrix")]
    preset: Option<String>,
    /// Exchange matrix file: one row per line, space-separated integers.
    #[arg(long, requires = "sequence")]
    b_matrix: Option<PathBuf>,
    /// Comma-separated 1-based mutation sequence, e.g. 1,2,1,2,1.
    #[arg(long, value_delimiter = ',')]
    sequence: Vec<usize>,
    /// Seed for the random initial y-values.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-10, value_parser = parse_tol)]
    tol: f64,
    #[command(flatten)]
    output: OutputArgs,
}

fn parse_label(s: &str) -> Result<TypeLabel, String> {
    s.parse::<TypeLabel>().map_err(|e| e.to_string())
}

fn parse_level(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(l) if l >= 2 => Ok(l),
        _ => Err(format!("level must be an integer ≥ 2, got {s:?}")),
    }
}

fn parse_tol(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
        _ => Err(format!("tolerance must be a positive number, got {s:?}")),
    }
}

/// Every supported label with rank ≤ 8, ordered by family then rank.
fn default_types() -> Vec<TypeLabel> {
    TypeLabel::sweep(8)
}

fn applies(check: Check, label: TypeLabel) -> bool {
    match check {
        Check::Cf | Check::Flat => true,
        Check::Level => label.family().is_simply_laced(),
        Check::Folding => label.family().is_foldable(),
    }
}

fn cmd_verify(args: &VerifyArgs) -> Result<Vec<Row>> {
    let types = if args.types.is_empty() {
        default_types()
    } else {
        args.types.clone()
    };
    let mut checks = if args.all {
        vec![Check::Cf, Check::Level, Check::Folding, Check::Flat]
    } else if args.checks.is_empty() {
        vec![Check::Cf]
    } else {
        args.checks.clone()
    };
    checks.sort();
    checks.dedup();

    let mut rows = Vec::new();
    for &label in &types {
        for &check in &checks {
            if !applies(check, label) {
                continue;
            }
            let result = match check {
                Check::Cf => {
                    for variant in args.variant.variants() {
                        let tol = args.tol.unwrap_or(1e-9);
                        rows.push(match verify_cf_identity(label, variant, tol) {
                            Ok(r) => Row::from_report(&r),
                            Err(e) => Row::failure("verify", "cf", format!("{label}/{variant}"), e),
                        });
                    }
                    continue;
                }
                Check::Level => verify_level_identity(label, args.level, args.tol.unwrap_or(1e-8)),
                Check::Folding => verify_folding(label, args.tol.unwrap_or(1e-10)),
                Check::Flat => verify_flat_specialization(label, args.tol.unwrap_or(1e-10)),
            };
            rows.push(match result {
                Ok(r) => Row::from_report(&r),
                Err(e) => Row::failure(
                    "verify",
                    format!("{check:?}").to_lowercase(),
                    label.to_string(),
                    e,
                ),
            });
        }
    }
    if rows.is_empty() {
        bail!("no selected check applies to the selected types");
    }
    Ok(rows)
}

fn solve_row(instance: String, computed: f64, residual: f64, bound: f64, detail: String) -> Row {
    Row {
        command: "solve",
        tag: "solve".into(),
        instance,
        computed,
        expected: None,
        deviation: residual,
        passed: residual <= bound,
        detail,
    }
}

fn cmd_solve(args: &SolveArgs) -> Result<Vec<Row>> {
    let config = SolverConfig::default();
    let bound = args.tol.unwrap_or(config.residual_bound);
    let mut rows = Vec::new();
    for &label in &args.types {
        let rs = RootSystem::new(label);
        if let Some(level) = args.level {
            let instance = format!("{label}/l={level}");
            match solve_constant_y(&rs, level) {
                Ok(grid) => {
                    for (i, row) in grid.y.iter().enumerate() {
                        for (m, &y) in row.iter().enumerate() {
                            rows.push(solve_row(
                                format!("{instance}/Y[{},{}]", i + 1, m + 1),
                                y,
                                grid.residual,
                                bound,
                                format!("iterations={}", grid.iterations),
                            ));
                        }
                    }
                }
                Err(e) => rows.push(Row::failure("solve", "solve", instance, e)),
            }
            continue;
        }
        for variant in args.variant.variants() {
            let instance = format!("{label}/{variant}");
            match solve_q_system(&rs, variant) {
                Ok(sol) => {
                    for (i, &q) in sol.q.iter().enumerate() {
                        let y = change_vars(q, Direction::QtoY)?;
                        rows.push(solve_row(
                            format!("{instance}/Q{}", i + 1),
                            q,
                            sol.residual,
                            bound,
                            format!("Y={y:.12} iterations={}", sol.iterations),
                        ));
                    }
                }
                Err(e) => rows.push(Row::failure("solve", "solve", instance, e)),
            }
        }
    }
    Ok(rows)
}

fn cmd_dynamics(args: &DynamicsArgs) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    for &label in &args.types {
        let rs = RootSystem::new(label);
        if !label.family().is_simply_laced() {
            bail!("dynamics needs a simply-laced type, got {label}");
        }
        let instance = format!("{label}/l={}/seed={}", args.level, args.seed);
        let mut rng = seeded_rng(args.seed);
        let s0 = random_slice(&rs, args.level, &mut rng);
        let s1 = random_slice(&rs, args.level, &mut rng);
        let p = period(&rs, args.level)?;
        let outcome = evolve(&rs, args.level, s0, s1, p + 2).and_then(|traj| {
            Ok((
                check_periodicity(&traj)?,
                periodic_dilog_sum(&traj)?,
                periodic_sum_target(&rs, args.level)?,
            ))
        });
        match outcome {
            Ok((dev, sum, target)) => {
                rows.push(Row {
                    command: "dynamics",
                    tag: "periodicity".into(),
                    instance: format!("{instance}/periodicity"),
                    computed: dev,
                    expected: Some(ExactRational::zero()),
                    deviation: dev,
                    passed: dev <= args.tol,
                    detail: format!("shift={p}"),
                });
                let expected = ExactRational::from_integer(target);
                let deviation = (sum - expected.to_f64()).abs();
                rows.push(Row {
                    command: "dynamics",
                    tag: "sum".into(),
                    instance: format!("{instance}/sum"),
                    computed: sum,
                    expected: Some(expected),
                    deviation,
                    passed: deviation <= args.tol,
                    detail: format!("slices={p}"),
                });
            }
            Err(e) => rows.push(Row::failure("dynamics", "dynamics", instance, e)),
        }
    }
    Ok(rows)
}

fn cmd_cluster(args: &ClusterArgs) -> Result<Vec<Row>> {
    let (name, b, sequence) = if let Some(name) = &args.preset {
        let p = cluster::preset(name).context("unknown preset")?;
        let seq = if args.sequence.is_empty() {
            p.sequence
        } else {
            to_zero_based(&args.sequence)?
        };
        (p.name.to_string(), p.b, seq)
    } else {
        let path = args
            .b_matrix
            .as_ref()
            .context("--b-matrix or --preset is required")?;
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let b = parse_exchange_matrix(&text)?;
        (
            path.display().to_string(),
            b,
            to_zero_based(&args.sequence)?,
        )
    };
    if let Some(&k) = sequence.iter().find(|&&k| k >= b.len()) {
        bail!("sequence node {} exceeds rank {}", k + 1, b.len());
    }
    let mut rng = seeded_rng(args.seed);
    let y0 = cluster::random_y(b.len(), &mut rng);
    let instance = format!("{name}/seed={}", args.seed);
    let row = match run_mutation_cycle(&b, &sequence, &y0) {
        Ok(r) => {
            let expected = ExactRational::from_integer(r.n_minus as i64);
            let deviation = (r.normalized_sum - expected.to_f64()).abs();
            let signs: String = r
                .steps
                .iter()
                .map(|s| {
                    if s.sign == TropicalSign::Plus {
                        '+'
                    } else {
                        '-'
                    }
                })
                .collect();
            Row {
                command: "cluster",
                tag: "cluster".into(),
                instance,
                computed: r.normalized_sum,
                expected: Some(expected),
                deviation,
                passed: r.is_periodic && deviation <= args.tol,
                detail: format!(
                    "p={} periodic={} n_minus={} signs={signs}",
                    r.period, r.is_periodic, r.n_minus
                ),
            }
        }
        Err(e) => Row::failure("cluster", "cluster", instance, e),
    };
    Ok(vec![row])
}

fn to_zero_based(seq: &[usize]) -> Result<Vec<usize>> {
    if seq.is_empty() {
        bail!("--sequence must not be empty");
    }
    seq.iter()
        .map(|&k| k.checked_sub(1).context("sequence nodes are 1-based"))
        .collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (rows, format) = match &cli.command {
        Command::Verify(a) => (cmd_verify(a), a.output.format),
        Command::Solve(a) => (cmd_solve(a), a.output.format),
        Command::Dynamics(a) => (cmd_dynamics(a), a.output.format),
        Command::Cluster(a) => (cmd_cluster(a), a.output.format),
    };
    let rows = match rows {
        Ok(rows) => rows,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    if let Err(e) = write_rows(&mut out, &rows, format).and_then(|_| Ok(out.flush()?)) {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    if rows.iter().all(|r| r.passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ysys::Family;

    #[test]
    fn applicability() {
        let l = |s: &str| s.parse::<TypeLabel>().unwrap();
        assert!(applies(Check::Level, l("E6")));
        assert!(!applies(Check::Level, l("B3")));
        assert!(applies(Check::Folding, l("T2")));
        assert!(!applies(Check::Folding, l("D4")));
        assert_eq!(
            default_types()
                .iter()
                .filter(|t| t.family() == Family::D)
                .count(),
            5
        );
    }

    #[test]
    fn arg_parsers() {
        assert!(parse_level("1").is_err());
        assert_eq!(parse_level("3"), Ok(3));
        assert!(parse_tol("0").is_err());
        assert!(parse_tol("-1e-9").is_err());
        assert!(parse_label("Q3").is_err());
        assert_eq!(to_zero_based(&[1, 2, 1]).unwrap(), vec![0, 1, 0]);
        assert!(to_zero_based(&[0]).is_err());
    }
}
