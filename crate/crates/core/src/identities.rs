//! Exact targets and numerical checks of the dilogarithm identities.
//!
//! Expected constants come from the Langlands-dual data,
//! `L = m h* / (h* + ℓ)` with `ℓ = 2` for `A` and `ℓ = 3` for `A♭`, and half the
//! `A_{2n}` value for the tadpole `T_n`. [`table_closed_form`] carries the
//! per-family closed forms independently; tests require the two to agree exactly.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dilog::normalized_weighted_sum;
use crate::error::{Error, Result};
use crate::qsolve::{
    change_vars, solve_constant_y, solve_q_system, solve_y_form, y_form_residual, Direction,
};
use crate::rational::ExactRational;
use crate::rootsys::{folding, langlands_dual, Family, GramVariant, RootSystem, TypeLabel};

/// Default tolerance for binary64 values compared against exact rationals.
pub const ACCEPTANCE_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckKind {
    /// `(6/π²) Σ ν_i L(Q_i) = L_{A'}`.
    Cf,
    /// Level-ℓ constant Y-system sum.
    Level,
    Folding,
    FlatSpecialization,
    Dynamics,
    Cluster,
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckKind::Cf => "cf",
            CheckKind::Level => "level",
            CheckKind::Folding => "folding",
            CheckKind::FlatSpecialization => "flat",
            CheckKind::Dynamics => "dynamics",
            CheckKind::Cluster => "cluster",
        })
    }
}

/// Outcome of one check: a binary64 value compared with an exact target.
///
/// `passed` is true exactly when `deviation <= tolerance`. Structural failures
/// (a wrong orbit size, an inexact rational relation) set `deviation` to
/// infinity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub instance: String,
    pub kind: CheckKind,
    pub computed: f64,
    pub expected: ExactRational,
    pub deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
}

impl VerificationReport {
    pub fn new(
        instance: impl Into<String>,
        kind: CheckKind,
        computed: f64,
        expected: ExactRational,
        deviation: f64,
        tolerance: f64,
        detail: impl Into<String>,
    ) -> Self {
        let deviation = if deviation.is_nan() {
            f64::INFINITY
        } else {
            deviation
        };
        VerificationReport {
            instance: instance.into(),
            kind,
            computed,
            expected,
            deviation,
            tolerance,
            passed: deviation <= tolerance,
            detail: detail.into(),
        }
    }

    /// `PASS cf E8/A computed=7.500000000000 expected=15/2 deviation=1.2e-15`
    pub fn to_line(&self) -> String {
        let mut line = format!(
            "{} {} {} computed={:.12} expected={} deviation={:.3e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.kind,
            self.instance,
            self.computed,
            self.expected,
            self.deviation
        );
        if !self.detail.is_empty() {
            line.push_str(" ; ");
            line.push_str(&self.detail);
        }
        line
    }
}

fn rat(n: i64, d: i64) -> ExactRational {
    ExactRational::new(n, d)
}

/// `m h* / (h* + ℓ)` for the simply-laced type `S_m` with Coxeter number `h*`.
fn unified(m: usize, coxeter: u32, level: u32) -> ExactRational {
    rat(m as i64 * coxeter as i64, coxeter as i64 + level as i64)
}

pub fn expected_constant(label: TypeLabel, variant: GramVariant) -> ExactRational {
    let dual = langlands_dual(label);
    let value = unified(dual.rank, dual.coxeter, variant.level());
    if label.family() == Family::T {
        value / ExactRational::from_integer(2)
    } else {
        value
    }
}

/// Per-family closed forms of `L_A` and `L_{A♭}`.
pub fn table_closed_form(label: TypeLabel, variant: GramVariant) -> ExactRational {
    let n = label.rank() as i64;
    match (label.family(), variant) {
        (Family::A, GramVariant::A) => rat(n * (n + 1), n + 3),
        (Family::A, GramVariant::AFlat) => rat(n * (n + 1), n + 4),
        (Family::B, GramVariant::A) => rat(n * (2 * n - 1), n + 1),
        (Family::B, GramVariant::AFlat) => rat(2 * n * (2 * n - 1), 2 * n + 3),
        (Family::C, GramVariant::A) => rat(n, 1),
        (Family::C, GramVariant::AFlat) => rat(2 * n * (n + 1), 2 * n + 3),
        (Family::D, GramVariant::A) => rat(n - 1, 1),
        (Family::D, GramVariant::AFlat) => rat(2 * (n - 1) * n, 2 * n + 1),
        (Family::E, GramVariant::A) => match n {
            6 => rat(36, 7),
            7 => rat(63, 10),
            _ => rat(15, 2),
        },
        (Family::E, GramVariant::AFlat) => match n {
            6 => rat(24, 5),
            7 => rat(6, 1),
            _ => rat(80, 11),
        },
        (Family::F, GramVariant::A) => rat(36, 7),
        (Family::F, GramVariant::AFlat) => rat(24, 5),
        (Family::G, GramVariant::A) => rat(3, 1),
        (Family::G, GramVariant::AFlat) => rat(8, 3),
        (Family::T, GramVariant::A) => rat(n * (2 * n + 1), 2 * n + 3),
        (Family::T, GramVariant::AFlat) => rat(n * (2 * n + 1), 2 * n + 4),
    }
}

/// `(ℓ − 1) n h / (h + ℓ)` for a simply-laced type.
pub fn level_constant(label: TypeLabel, level: usize) -> Result<ExactRational> {
    let rs = RootSystem::new(label);
    match (label.family().is_simply_laced(), rs.coxeter) {
        (true, Some(h)) if level >= 2 => {
            let (l, n, h) = (level as i64, label.rank() as i64, h as i64);
            Ok(rat((l - 1) * n * h, h + l))
        }
        (false, _) | (_, None) => Err(Error::Unsupported(format!("{label} is not simply laced"))),
        _ => Err(Error::InvalidInput(format!(
            "level must be ≥ 2, got {level}"
        ))),
    }
}

fn to_q(y: &[f64]) -> Result<Vec<f64>> {
    y.iter().map(|&v| change_vars(v, Direction::YtoQ)).collect()
}

pub fn verify_cf_identity(
    label: TypeLabel,
    variant: GramVariant,
    tol: f64,
) -> Result<VerificationReport> {
    let rs = RootSystem::new(label);
    let sol = solve_q_system(&rs, variant)?;
    let computed = normalized_weighted_sum(&sol.q, &rs.nu)?;
    let expected = expected_constant(label, variant);
    let deviation = (computed - expected.to_f64()).abs();
    Ok(VerificationReport::new(
        format!("{label}/{variant}"),
        CheckKind::Cf,
        computed,
        expected,
        deviation,
        tol,
        format!(
            "residual={:.1e} iterations={}",
            sol.residual, sol.iterations
        ),
    ))
}

pub fn verify_level_identity(
    label: TypeLabel,
    level: usize,
    tol: f64,
) -> Result<VerificationReport> {
    let expected = level_constant(label, level)?;
    let rs = RootSystem::new(label);
    let grid = solve_constant_y(&rs, level)?;
    let flat: Vec<f64> = grid.y.iter().flatten().copied().collect();
    let computed = normalized_weighted_sum(&to_q(&flat)?, &vec![1; flat.len()])?;
    let deviation = (computed - expected.to_f64()).abs();
    Ok(VerificationReport::new(
        format!("{label}/l={level}"),
        CheckKind::Level,
        computed,
        expected,
        deviation,
        tol,
        format!(
            "residual={:.1e} iterations={}",
            grid.residual, grid.iterations
        ),
    ))
}

/// Level-2 source solution, σ-invariance, collapsed Y-form residual, orbit
/// sizes against ν, and the weighted sum of the collapsed solution against
/// `L_A`. For `T_n` the orbit check is replaced by the exact halving relation.
pub fn verify_folding(label: TypeLabel, tol: f64) -> Result<VerificationReport> {
    let target = RootSystem::new(label);
    if label.family() == Family::C && label.rank() < 3 {
        // Source would be D3; check the level-2 Y-form directly.
        let expected = expected_constant(label, GramVariant::A);
        let sol = solve_y_form(&target, GramVariant::A)?;
        let residual = y_form_residual(&target.cartan, GramVariant::A, &sol.y);
        let computed = normalized_weighted_sum(&to_q(&sol.y)?, &target.nu)?;
        let deviation = residual.max((computed - expected.to_f64()).abs());
        return Ok(VerificationReport::new(
            format!("{label}/direct"),
            CheckKind::Folding,
            computed,
            expected,
            deviation,
            tol,
            format!("folded_residual={residual:.1e} (no folding source)"),
        ));
    }
    let fd = folding(label)?;
    let source = RootSystem::new(fd.source);
    let grid = solve_constant_y(&source, 2)?;
    let source_y: Vec<f64> = grid.y.iter().map(|r| r[0]).collect();

    let spread = fd.orbit_spread(&source_y);
    let collapsed = fd.collapse(&source_y);
    let residual = y_form_residual(&target.cartan, GramVariant::A, &collapsed);
    let computed = normalized_weighted_sum(&to_q(&collapsed)?, &target.nu)?;
    let expected = expected_constant(label, GramVariant::A);

    let structural = if label.family() == Family::T {
        let a2n = TypeLabel::new(Family::A, 2 * label.rank())?;
        expected == expected_constant(a2n, GramVariant::A) / ExactRational::from_integer(2)
    } else {
        fd.orbit_sizes()
            .iter()
            .zip(&target.nu)
            .all(|(&s, &nu)| s == nu as usize)
    };
    let deviation = if structural {
        spread
            .max(residual)
            .max((computed - expected.to_f64()).abs())
    } else {
        f64::INFINITY
    };
    Ok(VerificationReport::new(
        format!("{label}<-{}", fd.source),
        CheckKind::Folding,
        computed,
        expected,
        deviation,
        tol,
        format!(
            "orbit_spread={spread:.1e} folded_residual={residual:.1e} {}",
            if label.family() == Family::T {
                "halving=exact"
            } else {
                "orbits=nu"
            }
        ),
    ))
}

/// Level-3 solution with `Y_1 = Y_2`, the `A♭` Y-form residual of the common
/// value, and the exact halving of the level-3 constant.
pub fn verify_flat_specialization(label: TypeLabel, tol: f64) -> Result<VerificationReport> {
    let target = RootSystem::new(label);
    let expected = expected_constant(label, GramVariant::AFlat);

    if label.family() == Family::C && label.rank() < 3 {
        // Source would be D3; check the A♭ Y-form directly.
        let sol = solve_y_form(&target, GramVariant::AFlat)?;
        let residual = y_form_residual(&target.cartan, GramVariant::AFlat, &sol.y);
        let computed = normalized_weighted_sum(&to_q(&sol.y)?, &target.nu)?;
        let deviation = residual.max((computed - expected.to_f64()).abs());
        return Ok(VerificationReport::new(
            format!("{label}/direct"),
            CheckKind::FlatSpecialization,
            computed,
            expected,
            deviation,
            tol,
            format!("flat_residual={residual:.1e} (no folding source)"),
        ));
    }

    let folded = if label.family().is_simply_laced() {
        None
    } else {
        Some(folding(label)?)
    };
    let source_label = folded.as_ref().map_or(label, |fd| fd.source);
    let source = RootSystem::new(source_label);
    let grid = solve_constant_y(&source, 3)?;
    let split = grid
        .y
        .iter()
        .map(|r| (r[0] - r[1]).abs())
        .fold(0.0, f64::max);
    let common: Vec<f64> = grid.y.iter().map(|r| 0.5 * (r[0] + r[1])).collect();
    let (values, spread) = match &folded {
        Some(fd) => (fd.collapse(&common), fd.orbit_spread(&common)),
        None => (common, 0.0),
    };
    let residual = y_form_residual(&target.cartan, GramVariant::AFlat, &values);
    let computed = normalized_weighted_sum(&to_q(&values)?, &target.nu)?;

    let mut halving = level_constant(source_label, 3)? / ExactRational::from_integer(2);
    if label.family() == Family::T {
        halving = halving / ExactRational::from_integer(2);
    }
    let halving_exact = halving == expected;
    let deviation = if halving_exact {
        split
            .max(spread)
            .max(residual)
            .max((computed - expected.to_f64()).abs())
    } else {
        f64::INFINITY
    };
    Ok(VerificationReport::new(
        format!("{label}<-{source_label}/l=3"),
        CheckKind::FlatSpecialization,
        computed,
        expected,
        deviation,
        tol,
        format!(
            "level_split={split:.1e} orbit_spread={spread:.1e} flat_residual={residual:.1e} halving={}",
            if halving_exact { "exact" } else { "MISMATCH" }
        ),
    ))
}
