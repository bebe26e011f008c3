//! Solvers for the constant systems.
//!
//! * the Q-system `(1 − Q_i)^{ν_i} = Π_j Q_j^{a'_ij}` on `(0, 1)^n`, by Newton's
//!   method in logit coordinates with a halving line search;
//! * its Y-forms `Y_i² = Π_j (1 + Y_j)^{2δ_ij − c_ij}` (optionally divided by
//!   `1 + Y_i⁻¹`), and the level-ℓ constant Y-system, by damped fixed-point
//!   iteration in log space.
//!
//! The two routes share no code, so agreement between them (through
//! `Q = Y / (1 + Y)`) is a genuine cross-check.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootsys::{weight_gram, GramVariant, RootSystem};

/// Iteration controls shared by both solvers.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Stopping threshold on the max log-defect.
    pub tolerance: f64,
    /// Largest residual a returned solution may carry.
    pub residual_bound: f64,
    pub max_iterations: usize,
    /// Fixed-point damping θ in `log Y ← (1 − θ) log Y + θ · ½ log RHS`.
    pub damping: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tolerance: 1e-14,
            residual_bound: 1e-12,
            max_iterations: 1_000_000,
            damping: 0.5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QSolution {
    pub q: Vec<f64>,
    /// `max_i |ν_i log(1 − Q_i) − Σ_j a'_ij log Q_j|`.
    pub residual: f64,
    pub iterations: usize,
}

/// Positive solution of a single-level Y-form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct YSolution {
    pub y: Vec<f64>,
    /// Max of `|2 log Y_i − log RHS_i|`.
    pub residual: f64,
    pub iterations: usize,
}

/// Positive solution of the level-ℓ constant Y-system; `y[i][m - 1]` holds `Y_m^{(i)}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct YGrid {
    pub y: Vec<Vec<f64>>,
    pub level: usize,
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    YtoQ,
    QtoY,
}

pub fn change_vars(value: f64, direction: Direction) -> Result<f64> {
    match direction {
        Direction::YtoQ => {
            if value > 0.0 && value.is_finite() {
                Ok(value / (1.0 + value))
            } else {
                Err(Error::OutOfRange { what: "Y", value })
            }
        }
        Direction::QtoY => {
            if value > 0.0 && value < 1.0 {
                Ok(value / (1.0 - value))
            } else {
                Err(Error::OutOfRange { what: "Q", value })
            }
        }
    }
}

/// `log(1 + e^z)` without overflow.
pub(crate) fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

// ---------------------------------------------------------------------------
// Q-system: Newton in logit coordinates
// ---------------------------------------------------------------------------

struct QSystem {
    nu: Vec<f64>,
    gram: Vec<Vec<f64>>,
}

impl QSystem {
    fn residual_vec(&self, x: &[f64]) -> Vec<f64> {
        // log Q = −softplus(−x), log(1 − Q) = −softplus(x)
        let log_q: Vec<f64> = x.iter().map(|&t| -softplus(-t)).collect();
        x.iter()
            .enumerate()
            .map(|(i, &t)| {
                let lhs = -self.nu[i] * softplus(t);
                let rhs: f64 = self.gram[i].iter().zip(&log_q).map(|(a, l)| a * l).sum();
                lhs - rhs
            })
            .collect()
    }

    fn jacobian(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let n = x.len();
        let q: Vec<f64> = x.iter().map(|&t| 1.0 / (1.0 + (-t).exp())).collect();
        let one_minus_q: Vec<f64> = x.iter().map(|&t| 1.0 / (1.0 + t.exp())).collect();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let diag = if i == j { -self.nu[i] * q[i] } else { 0.0 };
                        diag - self.gram[i][j] * one_minus_q[j]
                    })
                    .collect()
            })
            .collect()
    }
}

/// Solves `m · x = b` by Gaussian elimination with partial pivoting.
fn solve_linear(mut m: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&r, &s| m[r][col].abs().total_cmp(&m[s][col].abs()))?;
        if m[pivot][col] == 0.0 {
            return None;
        }
        m.swap(col, pivot);
        b.swap(col, pivot);
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            if f == 0.0 {
                continue;
            }
            for c in col..n {
                m[r][c] -= f * m[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| m[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / m[r][r];
    }
    Some(x)
}

pub fn solve_q_system(rs: &RootSystem, variant: GramVariant) -> Result<QSolution> {
    solve_q_system_with(rs, variant, &SolverConfig::default())
}

pub fn solve_q_system_with(
    rs: &RootSystem,
    variant: GramVariant,
    config: &SolverConfig,
) -> Result<QSolution> {
    let system = QSystem {
        nu: rs.nu.iter().map(|&v| v as f64).collect(),
        gram: weight_gram(rs, variant)
            .iter()
            .map(|row| row.iter().map(|a| a.to_f64()).collect())
            .collect(),
    };
    let n = rs.rank();
    let mut x = vec![0.0; n];
    let mut f = system.residual_vec(&x);
    let mut norm = max_abs(&f);
    let mut iterations = 0;
    while norm > config.tolerance && iterations < config.max_iterations {
        iterations += 1;
        let rhs: Vec<f64> = f.iter().map(|v| -v).collect();
        let Some(step) = solve_linear(system.jacobian(&x), rhs) else {
            break;
        };
        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let trial: Vec<f64> = x.iter().zip(&step).map(|(a, d)| a + alpha * d).collect();
            let ft = system.residual_vec(&trial);
            let nt = max_abs(&ft);
            if nt < norm {
                accepted = Some((trial, ft, nt));
                break;
            }
            alpha *= 0.5;
        }
        match accepted {
            Some((trial, ft, nt)) => {
                x = trial;
                f = ft;
                norm = nt;
            }
            // No descent left: roundoff floor.
            None => break,
        }
    }
    if norm.is_nan() || norm > config.residual_bound {
        return Err(Error::NonConvergence {
            iterations,
            residual: norm,
        });
    }
    let q: Vec<f64> = x.iter().map(|&t| 1.0 / (1.0 + (-t).exp())).collect();
    if q.iter().any(|&v| !(v > 0.0 && v < 1.0)) {
        return Err(Error::NonConvergence {
            iterations,
            residual: norm,
        });
    }
    Ok(QSolution {
        q,
        residual: norm,
        iterations,
    })
}

/// `max_i |ν_i log(1 − Q_i) − Σ_j a'_ij log Q_j|` for an arbitrary `Q`.
pub fn q_residual(rs: &RootSystem, variant: GramVariant, q: &[f64]) -> f64 {
    let gram = weight_gram(rs, variant);
    (0..rs.rank())
        .map(|i| {
            let lhs = rs.nu[i] as f64 * (-q[i]).ln_1p();
            let rhs: f64 = (0..rs.rank())
                .map(|j| gram[i][j].to_f64() * q[j].ln())
                .sum();
            (lhs - rhs).abs()
        })
        .fold(0.0, f64::max)
}

// ---------------------------------------------------------------------------
// Y-forms: damped fixed point in log space
// ---------------------------------------------------------------------------

/// Iterates `s ← (1 − θ)s + θ · ½ log_rhs(s)` from `s = 0` until the
/// defect `|½ log_rhs(s) − s|` drops below tolerance.
fn damped_fixed_point<F>(len: usize, config: &SolverConfig, log_rhs: F) -> Result<(Vec<f64>, usize)>
where
    F: Fn(&[f64], &mut [f64]),
{
    let theta = config.damping;
    let mut s = vec![0.0; len];
    let mut rhs = vec![0.0; len];
    for iteration in 0..config.max_iterations {
        log_rhs(&s, &mut rhs);
        let mut defect = 0.0f64;
        for (si, ri) in s.iter_mut().zip(&rhs) {
            let target = 0.5 * ri;
            defect = defect.max((target - *si).abs());
            *si = (1.0 - theta) * *si + theta * target;
        }
        if !defect.is_finite() {
            return Err(Error::NonConvergence {
                iterations: iteration,
                residual: defect,
            });
        }
        if defect <= config.tolerance {
            return Ok((s, iteration + 1));
        }
    }
    log_rhs(&s, &mut rhs);
    let defect = s
        .iter()
        .zip(&rhs)
        .fold(0.0f64, |m, (a, r)| m.max((0.5 * r - a).abs()));
    Err(Error::NonConvergence {
        iterations: config.max_iterations,
        residual: defect,
    })
}

fn y_form_log_rhs(cartan: &[Vec<i64>], flat: bool, s: &[f64], out: &mut [f64]) {
    let sp: Vec<f64> = s.iter().map(|&v| softplus(v)).collect();
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc: f64 = cartan[i]
            .iter()
            .zip(&sp)
            .enumerate()
            .map(|(j, (&c, &p))| (if i == j { 2 - c } else { -c }) as f64 * p)
            .sum();
        if flat {
            acc -= softplus(-s[i]);
        }
        *o = acc;
    }
}

/// `max_i |2 log Y_i − log RHS_i|` for the Y-form with the given Cartan matrix.
pub fn y_form_residual(cartan: &[Vec<i64>], variant: GramVariant, y: &[f64]) -> f64 {
    let s: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let mut rhs = vec![0.0; y.len()];
    y_form_log_rhs(cartan, variant == GramVariant::AFlat, &s, &mut rhs);
    s.iter()
        .zip(&rhs)
        .fold(0.0, |m, (a, r)| m.max((2.0 * a - r).abs()))
}

pub fn solve_y_form(rs: &RootSystem, variant: GramVariant) -> Result<YSolution> {
    solve_y_form_with(rs, variant, &SolverConfig::default())
}

pub fn solve_y_form_with(
    rs: &RootSystem,
    variant: GramVariant,
    config: &SolverConfig,
) -> Result<YSolution> {
    let flat = variant == GramVariant::AFlat;
    let (s, iterations) = damped_fixed_point(rs.rank(), config, |s, out| {
        y_form_log_rhs(&rs.cartan, flat, s, out)
    })?;
    let y: Vec<f64> = s.iter().map(|v| v.exp()).collect();
    let residual = y_form_residual(&rs.cartan, variant, &y);
    if residual.is_nan() || residual > config.residual_bound {
        return Err(Error::NonConvergence {
            iterations,
            residual,
        });
    }
    Ok(YSolution {
        y,
        residual,
        iterations,
    })
}

fn level_log_rhs(cartan: &[Vec<i64>], width: usize, s: &[f64], out: &mut [f64]) {
    let n = cartan.len();
    let sp: Vec<f64> = s.iter().map(|&v| softplus(v)).collect();
    for i in 0..n {
        for m in 0..width {
            let mut acc = 0.0;
            for j in 0..n {
                let e = if i == j {
                    2 - cartan[i][j]
                } else {
                    -cartan[i][j]
                };
                if e != 0 {
                    acc += e as f64 * sp[j * width + m];
                }
            }
            if m > 0 {
                acc -= softplus(-s[i * width + m - 1]);
            }
            if m + 1 < width {
                acc -= softplus(-s[i * width + m + 1]);
            }
            out[i * width + m] = acc;
        }
    }
}

/// Max log-defect `|2 log Y − log RHS|` of a level-ℓ grid.
pub fn constant_y_residual(rs: &RootSystem, y: &[Vec<f64>]) -> f64 {
    let width = y.first().map_or(0, Vec::len);
    let s: Vec<f64> = y.iter().flatten().map(|v| v.ln()).collect();
    let mut rhs = vec![0.0; s.len()];
    level_log_rhs(&rs.cartan, width, &s, &mut rhs);
    s.iter()
        .zip(&rhs)
        .fold(0.0, |m, (a, r)| m.max((2.0 * a - r).abs()))
}

pub fn solve_constant_y(rs: &RootSystem, level: usize) -> Result<YGrid> {
    solve_constant_y_with(rs, level, &SolverConfig::default())
}

pub fn solve_constant_y_with(
    rs: &RootSystem,
    level: usize,
    config: &SolverConfig,
) -> Result<YGrid> {
    if !rs.label.family().is_simply_laced() {
        return Err(Error::Unsupported(format!(
            "level-ℓ constant Y-system needs a simply-laced type, got {}",
            rs.label
        )));
    }
    if level < 2 {
        return Err(Error::InvalidInput(format!(
            "level must be ≥ 2, got {level}"
        )));
    }
    let width = level - 1;
    let (s, iterations) = damped_fixed_point(rs.rank() * width, config, |s, out| {
        level_log_rhs(&rs.cartan, width, s, out)
    })?;
    let y: Vec<Vec<f64>> = s
        .chunks(width)
        .map(|c| c.iter().map(|v| v.exp()).collect())
        .collect();
    let residual = constant_y_residual(rs, &y);
    if residual.is_nan() || residual > config.residual_bound {
        return Err(Error::NonConvergence {
            iterations,
            residual,
        });
    }
    Ok(YGrid {
        y,
        level,
        residual,
        iterations,
    })
}
