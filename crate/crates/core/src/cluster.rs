//! y-seed mutation with c-vector tracking.
//!
//! Mutation at `k`:
//!
//! * `y'_k = y_k⁻¹`, and `y'_j = y_j · y_k^{[b_kj]₊} · (1 + y_k)^{−b_kj}` for `j ≠ k`;
//! * `b'_ij = −b_ij` if `i = k` or `j = k`, else `b_ij + sgn(b_ik) [b_ik b_kj]₊`;
//! * `c'_k = −c_k`, and `c'_j = c_j + [ε b_kj]₊ c_k` where `ε` is the tropical
//!   sign of `c_k`.
//!
//! Node indices are 0-based. Exchange and c-matrices use big integers since
//! their entries grow without bound along generic mutation sequences.

use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dilog::normalized_weighted_sum;
use crate::error::{Error, Result};

pub type IntMatrix = Vec<Vec<BigInt>>;

/// Relative tolerance for matching y-variables when detecting a period.
pub const PERIOD_Y_TOLERANCE: f64 = 1e-10;

/// Largest rank for which periods are detected up to an arbitrary permutation.
pub const MAX_PERMUTATION_RANK: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TropicalSign {
    Plus,
    Minus,
}

impl TropicalSign {
    pub fn as_i32(self) -> i32 {
        match self {
            TropicalSign::Plus => 1,
            TropicalSign::Minus => -1,
        }
    }
}

impl fmt::Display for TropicalSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TropicalSign::Plus => "+",
            TropicalSign::Minus => "-",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClusterSeed {
    /// Skew-symmetric exchange matrix.
    pub b: IntMatrix,
    pub y: Vec<f64>,
    /// Column `j` is the c-vector of `y_j`.
    pub c: IntMatrix,
}

pub fn to_big(m: &[Vec<i64>]) -> IntMatrix {
    m.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

fn big_identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect())
        .collect()
}

fn validate_exchange(b: &IntMatrix) -> Result<()> {
    let n = b.len();
    if b.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidInput("exchange matrix must be square".into()));
    }
    for i in 0..n {
        for j in 0..n {
            if b[i][j] != -&b[j][i] {
                return Err(Error::InvalidInput(format!(
                    "exchange matrix not skew-symmetric at ({}, {})",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(())
}

fn big_to_f64(e: &BigInt) -> f64 {
    e.to_f64().unwrap_or(if e.is_positive() {
        f64::INFINITY
    } else {
        f64::NEG_INFINITY
    })
}

impl ClusterSeed {
    /// Initial seed with `c = I`.
    pub fn new(b: &[Vec<i64>], y: Vec<f64>) -> Result<Self> {
        Self::from_big(to_big(b), y)
    }

    pub fn from_big(b: IntMatrix, y: Vec<f64>) -> Result<Self> {
        validate_exchange(&b)?;
        if y.len() != b.len() {
            return Err(Error::LengthMismatch {
                left: y.len(),
                right: b.len(),
            });
        }
        if let Some(&bad) = y.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
            return Err(Error::OutOfRange {
                what: "y-variable",
                value: bad,
            });
        }
        let c = big_identity(b.len());
        Ok(ClusterSeed { b, y, c })
    }

    pub fn rank(&self) -> usize {
        self.y.len()
    }

    fn check_index(&self, k: usize) -> Result<()> {
        if k < self.rank() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: k,
                rank: self.rank(),
            })
        }
    }

    pub fn c_vector(&self, k: usize) -> Vec<BigInt> {
        self.c.iter().map(|row| row[k].clone()).collect()
    }

    pub fn tropical_sign(&self, k: usize) -> Result<TropicalSign> {
        self.check_index(k)?;
        column_sign(&self.c, k)
    }

    pub fn is_sign_coherent(&self) -> bool {
        (0..self.rank()).all(|k| column_sign(&self.c, k).is_ok())
    }

    pub fn mutate(&self, k: usize) -> Result<ClusterSeed> {
        self.check_index(k)?;
        let eps = column_sign(&self.c, k)?;
        let n = self.rank();

        // y_k / (1 + y_k) and 1 + y_k raised to integer powers, in log form.
        let yk = self.y[k];
        let log_ratio = -(1.0 / yk).ln_1p();
        let log_sum = yk.ln_1p();
        let y: Vec<f64> = (0..n)
            .map(|j| {
                let bkj = &self.b[k][j];
                if j == k {
                    1.0 / yk
                } else if bkj.is_positive() {
                    self.y[j] * (big_to_f64(bkj) * log_ratio).exp()
                } else if bkj.is_negative() {
                    self.y[j] * (-big_to_f64(bkj) * log_sum).exp()
                } else {
                    self.y[j]
                }
            })
            .collect();
        if let Some(&bad) = y.iter().find(|v| !(v.is_normal() && **v > 0.0)) {
            return Err(Error::OutOfRange {
                what: "mutated y-variable",
                value: bad,
            });
        }

        Ok(ClusterSeed {
            b: mutate_exchange(&self.b, k),
            y,
            c: mutate_c(&self.b, &self.c, k, eps),
        })
    }
}

fn column_sign(c: &IntMatrix, k: usize) -> Result<TropicalSign> {
    let nonneg = c.iter().all(|row| !row[k].is_negative());
    let nonpos = c.iter().all(|row| !row[k].is_positive());
    match (nonneg, nonpos) {
        (true, false) => Ok(TropicalSign::Plus),
        (false, true) => Ok(TropicalSign::Minus),
        _ => Err(Error::SignIncoherent(k)),
    }
}

fn mutate_exchange(b: &IntMatrix, k: usize) -> IntMatrix {
    let n = b.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == k || j == k {
                        return -&b[i][j];
                    }
                    let prod = &b[i][k] * &b[k][j];
                    if !prod.is_positive() {
                        b[i][j].clone()
                    } else if b[i][k].is_positive() {
                        &b[i][j] + prod
                    } else {
                        &b[i][j] - prod
                    }
                })
                .collect()
        })
        .collect()
}

fn mutate_c(b: &IntMatrix, c: &IntMatrix, k: usize, eps: TropicalSign) -> IntMatrix {
    let mut out = c.clone();
    for row in out.iter_mut() {
        row[k] = -&row[k];
    }
    for j in (0..b.len()).filter(|&j| j != k) {
        let coeff = match eps {
            TropicalSign::Plus => b[k][j].clone(),
            TropicalSign::Minus => -&b[k][j],
        };
        if coeff.is_positive() {
            for (row, orig) in out.iter_mut().zip(c) {
                row[j] = &orig[j] + &coeff * &orig[k];
            }
        }
    }
    out
}

/// Exchange matrix and c-vectors only; no floating-point state, so
/// arbitrarily long mutation sequences stay exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalSeed {
    pub b: IntMatrix,
    pub c: IntMatrix,
}

impl TropicalSeed {
    /// Initial seed with `c = I`.
    pub fn new(b: &[Vec<i64>]) -> Result<Self> {
        let b = to_big(b);
        validate_exchange(&b)?;
        let c = big_identity(b.len());
        Ok(TropicalSeed { b, c })
    }

    pub fn rank(&self) -> usize {
        self.b.len()
    }

    pub fn tropical_sign(&self, k: usize) -> Result<TropicalSign> {
        if k >= self.rank() {
            return Err(Error::IndexOutOfRange {
                index: k,
                rank: self.rank(),
            });
        }
        column_sign(&self.c, k)
    }

    pub fn is_sign_coherent(&self) -> bool {
        (0..self.rank()).all(|k| column_sign(&self.c, k).is_ok())
    }

    pub fn mutate(&self, k: usize) -> Result<TropicalSeed> {
        let eps = self.tropical_sign(k)?;
        Ok(TropicalSeed {
            b: mutate_exchange(&self.b, k),
            c: mutate_c(&self.b, &self.c, k, eps),
        })
    }
}

pub fn mutate(seed: &ClusterSeed, k: usize) -> Result<ClusterSeed> {
    seed.mutate(k)
}

pub fn tropical_sign(seed: &ClusterSeed, k: usize) -> Result<TropicalSign> {
    seed.tropical_sign(k)
}

/// One mutation step: the node, the pre-mutation `y_k` and its tropical sign.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub node: usize,
    pub y: f64,
    pub sign: TropicalSign,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleReport {
    /// Final seed equals the initial one up to a node permutation.
    pub is_periodic: bool,
    /// Number of mutations applied.
    pub period: usize,
    /// `permutation[i]` is the final node matching initial node `i`.
    pub permutation: Option<Vec<usize>>,
    pub n_minus: usize,
    /// `(6/π²) Σ_t L(y_t / (1 + y_t))`.
    pub normalized_sum: f64,
    pub steps: Vec<StepRecord>,
}

fn rel_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= PERIOD_Y_TOLERANCE * a.abs().max(b.abs())
}

fn matches_under(initial: &ClusterSeed, last: &ClusterSeed, perm: &[usize]) -> bool {
    let n = initial.rank();
    (0..n).all(|i| rel_close(initial.y[i], last.y[perm[i]]))
        && (0..n).all(|i| (0..n).all(|j| initial.b[i][j] == last.b[perm[i]][perm[j]]))
        && (0..n).all(|i| (0..n).all(|r| initial.c[r][i] == last.c[r][perm[i]]))
}

/// Finds `σ` with the final seed equal to the initial one after relabelling.
pub fn find_period_permutation(initial: &ClusterSeed, last: &ClusterSeed) -> Option<Vec<usize>> {
    let n = initial.rank();
    let identity: Vec<usize> = (0..n).collect();
    if matches_under(initial, last, &identity) {
        return Some(identity);
    }
    if n > MAX_PERMUTATION_RANK {
        return None;
    }
    (0..n)
        .permutations(n)
        .find(|perm| matches_under(initial, last, perm))
}

/// Positive values drawn log-uniformly from `[e⁻¹, e]`.
pub fn random_y<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    (0..n)
        .map(|_| rng.random_range(-1.0f64..=1.0).exp())
        .collect()
}

pub fn run_mutation_cycle(b0: &[Vec<i64>], sequence: &[usize], y0: &[f64]) -> Result<CycleReport> {
    if sequence.is_empty() {
        return Err(Error::InvalidInput("mutation sequence is empty".into()));
    }
    let initial = ClusterSeed::new(b0, y0.to_vec())?;
    let mut seed = initial.clone();
    let mut steps = Vec::with_capacity(sequence.len());
    for &k in sequence {
        let sign = seed.tropical_sign(k)?;
        steps.push(StepRecord {
            node: k,
            y: seed.y[k],
            sign,
        });
        seed = seed.mutate(k)?;
    }
    let permutation = find_period_permutation(&initial, &seed);
    let n_minus = steps
        .iter()
        .filter(|s| s.sign == TropicalSign::Minus)
        .count();
    let args: Vec<f64> = steps.iter().map(|s| s.y / (1.0 + s.y)).collect();
    let normalized_sum = normalized_weighted_sum(&args, &vec![1; args.len()])?;
    Ok(CycleReport {
        is_periodic: permutation.is_some(),
        period: sequence.len(),
        permutation,
        n_minus,
        normalized_sum,
        steps,
    })
}

/// Parses rows of whitespace-separated integers; blank lines and `#` comments are skipped.
pub fn parse_exchange_matrix(text: &str) -> Result<Vec<Vec<i64>>> {
    let rows: Vec<Vec<i64>> = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.split_whitespace()
                .map(|t| {
                    t.parse::<i64>()
                        .map_err(|_| Error::InvalidInput(format!("not an integer: {t:?}")))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    if rows.is_empty() {
        return Err(Error::InvalidInput("empty exchange matrix".into()));
    }
    validate_exchange(&to_big(&rows))?;
    Ok(rows)
}

/// A named exchange matrix with a mutation sequence (0-based nodes).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Preset {
    pub name: &'static str,
    pub b: Vec<Vec<i64>>,
    pub sequence: Vec<usize>,
}

pub fn preset(name: &str) -> Option<Preset> {
    let (name, b, sequence) = match name.to_ascii_lowercase().as_str() {
        "rank1" => ("rank1", vec![vec![0]], vec![0, 0]),
        "pentagon" | "a2" => (
            "pentagon",
            vec![vec![0, 1], vec![-1, 0]],
            vec![0, 1, 0, 1, 0],
        ),
        "a1xa1" => ("a1xa1", vec![vec![0, 0], vec![0, 0]], vec![0, 1, 0, 1]),
        _ => return None,
    };
    Some(Preset { name, b, sequence })
}

pub const PRESET_NAMES: [&str; 3] = ["rank1", "pentagon", "a1xa1"];
