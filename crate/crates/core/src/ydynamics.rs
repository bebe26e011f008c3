//! The Y-system with spectral parameter,
//!
//! `Y_m^(i)(u+1) Y_m^(i)(u−1) = Π_j (1 + Y_m^(j)(u))^{2δ_ij − c_ij}
//!     / ((1 + Y_{m−1}^(i)(u)⁻¹)(1 + Y_{m+1}^(i)(u)⁻¹))`,
//!
//! with `Y_0⁻¹ = Y_ℓ⁻¹ = 0`, iterated forward from two consecutive slices.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dilog::normalized_weighted_sum;
use crate::error::{Error, Result};
use crate::qsolve::softplus;
use crate::rootsys::RootSystem;

/// Values `Y_m^(i)(u)` at one `u`, indexed `[i][m - 1]`.
pub type Slice = Vec<Vec<f64>>;

/// Entries outside this range switch the update to log space.
const DIRECT_RANGE: (f64, f64) = (1e-12, 1e12);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub rs: RootSystem,
    pub level: usize,
    /// `slices[u]` for `u = 0, 1, …`.
    pub slices: Vec<Slice>,
}

/// One exported value `(u, i, m, Y_m^(i)(u))`, with `i` and `m` 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub u: usize,
    pub i: usize,
    pub m: usize,
    pub value: f64,
}

/// `2(h + ℓ)`.
pub fn period(rs: &RootSystem, level: usize) -> Result<usize> {
    let h = rs
        .coxeter
        .ok_or_else(|| Error::Unsupported(format!("{} has no Coxeter number", rs.label)))?;
    Ok(2 * (h as usize + level))
}

fn check_slice(rs: &RootSystem, level: usize, slice: &Slice) -> Result<()> {
    if slice.len() != rs.rank() || slice.iter().any(|r| r.len() != level - 1) {
        return Err(Error::InvalidInput(format!(
            "slice must be {}×{}",
            rs.rank(),
            level - 1
        )));
    }
    if let Some(&bad) = slice
        .iter()
        .flatten()
        .find(|v| !(**v > 0.0 && v.is_finite()))
    {
        return Err(Error::OutOfRange {
            what: "Y-system entry",
            value: bad,
        });
    }
    Ok(())
}

/// `Y(u+1) = RHS(u) / Y(u−1)`.
fn step(cartan: &[Vec<i64>], prev: &Slice, cur: &Slice) -> Slice {
    let n = cartan.len();
    let width = cur[0].len();
    let direct = cur
        .iter()
        .chain(prev)
        .flatten()
        .all(|v| (DIRECT_RANGE.0..=DIRECT_RANGE.1).contains(v));
    let mut next = vec![vec![0.0; width]; n];
    for i in 0..n {
        for m in 0..width {
            if direct {
                let mut num = 1.0;
                for j in 0..n {
                    let e = if i == j {
                        2 - cartan[i][j]
                    } else {
                        -cartan[i][j]
                    };
                    if e != 0 {
                        num *= (1.0 + cur[j][m]).powi(e as i32);
                    }
                }
                let mut den = 1.0;
                if m > 0 {
                    den *= 1.0 + 1.0 / cur[i][m - 1];
                }
                if m + 1 < width {
                    den *= 1.0 + 1.0 / cur[i][m + 1];
                }
                next[i][m] = num / den / prev[i][m];
            } else {
                let mut log_rhs = 0.0;
                for j in 0..n {
                    let e = if i == j {
                        2 - cartan[i][j]
                    } else {
                        -cartan[i][j]
                    };
                    if e != 0 {
                        log_rhs += e as f64 * softplus(cur[j][m].ln());
                    }
                }
                if m > 0 {
                    log_rhs -= softplus(-cur[i][m - 1].ln());
                }
                if m + 1 < width {
                    log_rhs -= softplus(-cur[i][m + 1].ln());
                }
                next[i][m] = (log_rhs - prev[i][m].ln()).exp();
            }
        }
    }
    next
}

/// Builds the trajectory `Y(0), …, Y(steps − 1)` from its first two slices.
pub fn evolve(
    rs: &RootSystem,
    level: usize,
    slice0: Slice,
    slice1: Slice,
    steps: usize,
) -> Result<Trajectory> {
    if !rs.label.family().is_simply_laced() {
        return Err(Error::Unsupported(format!(
            "{} is not simply laced",
            rs.label
        )));
    }
    if level < 2 {
        return Err(Error::InvalidInput(format!(
            "level must be ≥ 2, got {level}"
        )));
    }
    if steps < 2 {
        return Err(Error::InvalidInput(format!(
            "need at least 2 slices, got {steps}"
        )));
    }
    check_slice(rs, level, &slice0)?;
    check_slice(rs, level, &slice1)?;
    let mut slices = Vec::with_capacity(steps);
    slices.push(slice0);
    slices.push(slice1);
    while slices.len() < steps {
        let u = slices.len();
        let next = step(&rs.cartan, &slices[u - 2], &slices[u - 1]);
        slices.push(next);
    }
    Ok(Trajectory {
        rs: rs.clone(),
        level,
        slices,
    })
}

/// A slice with entries drawn log-uniformly from `[e⁻¹, e]`.
pub fn random_slice<R: Rng + ?Sized>(rs: &RootSystem, level: usize, rng: &mut R) -> Slice {
    (0..rs.rank())
        .map(|_| {
            (0..level.saturating_sub(1))
                .map(|_| rng.random_range(-1.0f64..=1.0).exp())
                .collect()
        })
        .collect()
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.slices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slices.is_empty()
    }

    pub fn records(&self) -> Vec<TrajectoryRecord> {
        let mut out = Vec::new();
        for (u, slice) in self.slices.iter().enumerate() {
            for (i, row) in slice.iter().enumerate() {
                for (m, &value) in row.iter().enumerate() {
                    out.push(TrajectoryRecord {
                        u,
                        i: i + 1,
                        m: m + 1,
                        value,
                    });
                }
            }
        }
        out
    }

    /// Largest `|log(Y(u+1) Y(u−1)) − log RHS(u)|` along the trajectory.
    pub fn recursion_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for u in 1..self.slices.len().saturating_sub(1) {
            let (prev, cur, next) = (&self.slices[u - 1], &self.slices[u], &self.slices[u + 1]);
            let width = cur[0].len();
            for i in 0..cur.len() {
                for m in 0..width {
                    let mut log_rhs = 0.0;
                    for (j, &c) in self.rs.cartan[i].iter().enumerate() {
                        let e = if i == j { 2 - c } else { -c };
                        log_rhs += e as f64 * cur[j][m].ln_1p();
                    }
                    if m > 0 {
                        log_rhs -= (1.0 / cur[i][m - 1]).ln_1p();
                    }
                    if m + 1 < width {
                        log_rhs -= (1.0 / cur[i][m + 1]).ln_1p();
                    }
                    let lhs = next[i][m].ln() + prev[i][m].ln();
                    worst = worst.max((lhs - log_rhs).abs());
                }
            }
        }
        worst
    }

    /// Smallest entry; positive for every valid trajectory.
    pub fn min_entry(&self) -> f64 {
        self.slices
            .iter()
            .flatten()
            .flatten()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

/// Max relative deviation `|Y(u + 2(h+ℓ)) − Y(u)| / Y(u)` over the trajectory.
pub fn check_periodicity(traj: &Trajectory) -> Result<f64> {
    let p = period(&traj.rs, traj.level)?;
    shifted_deviation(traj, p, p + 2)
}

/// Same as [`check_periodicity`] for an arbitrary shift.
pub fn shifted_deviation(traj: &Trajectory, shift: usize, min_len: usize) -> Result<f64> {
    let needed = min_len.max(shift + 1);
    if traj.len() < needed {
        return Err(Error::TrajectoryTooShort {
            needed,
            have: traj.len(),
        });
    }
    let mut worst = 0.0f64;
    for u in 0..traj.len() - shift {
        for (a, b) in traj.slices[u]
            .iter()
            .flatten()
            .zip(traj.slices[u + shift].iter().flatten())
        {
            worst = worst.max((b - a).abs() / a);
        }
    }
    Ok(worst)
}

/// `(6/π²) Σ_{u=0}^{2(h+ℓ)−1} Σ_{i,m} L(Y/(1+Y))`; expected `2(ℓ−1)nh`.
pub fn periodic_dilog_sum(traj: &Trajectory) -> Result<f64> {
    let p = period(&traj.rs, traj.level)?;
    if traj.len() < p {
        return Err(Error::TrajectoryTooShort {
            needed: p,
            have: traj.len(),
        });
    }
    let args: Vec<f64> = traj.slices[..p]
        .iter()
        .flatten()
        .flatten()
        .map(|&y| y / (1.0 + y))
        .collect();
    normalized_weighted_sum(&args, &vec![1; args.len()])
}

/// `2(ℓ − 1) n h`.
pub fn periodic_sum_target(rs: &RootSystem, level: usize) -> Result<u64> {
    let h = rs
        .coxeter
        .ok_or_else(|| Error::Unsupported(format!("{} has no Coxeter number", rs.label)))?;
    Ok(2 * (level as u64 - 1) * rs.rank() as u64 * h as u64)
}
