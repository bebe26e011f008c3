//! Cartan data for finite root systems and the tadpole family.
//!
//! Cartan entries follow `c_ij = 2(α_i, α_j) / (α_i, α_i)` with Bourbaki node
//! numbering. Short roots have `(α, α) = 2`, so the symmetrizer
//! `ν_i = (α_i, α_i) / 2` lies in `{1, 2, 3}` and `C · diag(ν)⁻¹` is symmetric.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{invert, ExactRational, RationalMatrix};

/// Largest rank accepted by [`TypeLabel::new`].
pub const DEFAULT_MAX_RANK: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    /// Tadpole: `A_n` with the last diagonal Cartan entry replaced by 1.
    T,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::A,
        Family::B,
        Family::C,
        Family::D,
        Family::E,
        Family::F,
        Family::G,
        Family::T,
    ];

    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
            Family::T => 'T',
        }
    }

    pub fn from_letter(c: char) -> Option<Family> {
        Some(match c.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            'T' => Family::T,
            _ => return None,
        })
    }

    pub fn is_simply_laced(self) -> bool {
        matches!(self, Family::A | Family::D | Family::E)
    }

    /// Families whose identities come from folding a simply-laced system.
    pub fn is_foldable(self) -> bool {
        matches!(
            self,
            Family::B | Family::C | Family::F | Family::G | Family::T
        )
    }

    fn admits(self, rank: usize) -> bool {
        match self {
            Family::A | Family::T => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        }
    }
}

/// A validated `(family, rank)` pair such as `E8` or `T3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TypeLabel {
    family: Family,
    rank: usize,
}

impl TypeLabel {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        Self::with_max_rank(family, rank, DEFAULT_MAX_RANK)
    }

    pub fn with_max_rank(family: Family, rank: usize, max_rank: usize) -> Result<Self> {
        if !family.admits(rank) {
            return Err(Error::InvalidLabel(format!(
                "{}{} is not a supported type",
                family.letter(),
                rank
            )));
        }
        if rank > max_rank {
            return Err(Error::InvalidLabel(format!(
                "{}{} exceeds the rank cap {}",
                family.letter(),
                rank,
                max_rank
            )));
        }
        Ok(TypeLabel { family, rank })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Every supported label with rank in `1..=max_rank`, ordered by family then rank.
    pub fn sweep(max_rank: usize) -> Vec<TypeLabel> {
        Family::ALL
            .iter()
            .flat_map(|&f| (1..=max_rank).filter_map(move |n| TypeLabel::new(f, n).ok()))
            .collect()
    }
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

impl FromStr for TypeLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let family = chars
            .next()
            .and_then(Family::from_letter)
            .ok_or_else(|| Error::InvalidLabel(format!("{s:?}: unknown family")))?;
        let digits = chars.as_str();
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::InvalidLabel(format!(
                "{s:?}: expected a decimal rank"
            )));
        }
        let rank = digits
            .parse()
            .map_err(|_| Error::InvalidLabel(format!("{s:?}: rank too large")))?;
        TypeLabel::new(family, rank)
    }
}

/// Which weight Gram matrix enters the Q-system: `A = 2(ω_i, ω_j)` or `A♭ = (ω_i, ω_j)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GramVariant {
    A,
    AFlat,
}

impl GramVariant {
    /// The Y-system level the variant is tied to.
    pub fn level(self) -> u32 {
        match self {
            GramVariant::A => 2,
            GramVariant::AFlat => 3,
        }
    }
}

impl fmt::Display for GramVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GramVariant::A => "A",
            GramVariant::AFlat => "Aflat",
        })
    }
}

impl FromStr for GramVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a" => Ok(GramVariant::A),
            "aflat" | "a-flat" | "flat" => Ok(GramVariant::AFlat),
            _ => Err(Error::InvalidInput(format!("unknown variant {s:?}"))),
        }
    }
}

/// Cartan matrix, symmetrizers and Coxeter number of a labelled type.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootSystem {
    pub label: TypeLabel,
    pub cartan: Vec<Vec<i64>>,
    pub nu: Vec<u32>,
    /// `None` for the tadpole family.
    pub coxeter: Option<u32>,
}

impl RootSystem {
    pub fn new(label: TypeLabel) -> Self {
        build_root_system(label)
    }

    pub fn rank(&self) -> usize {
        self.label.rank
    }
}

fn chain(n: usize) -> Vec<Vec<i64>> {
    let mut c = vec![vec![0i64; n]; n];
    for i in 0..n {
        c[i][i] = 2;
        if i + 1 < n {
            c[i][i + 1] = -1;
            c[i + 1][i] = -1;
        }
    }
    c
}

fn link(c: &mut [Vec<i64>], i: usize, j: usize) {
    c[i - 1][j - 1] = -1;
    c[j - 1][i - 1] = -1;
}

pub fn build_root_system(label: TypeLabel) -> RootSystem {
    let n = label.rank;
    let (cartan, nu, coxeter) = match label.family {
        Family::A => (chain(n), vec![1; n], Some(n as u32 + 1)),
        Family::B => {
            let mut c = chain(n);
            c[n - 1][n - 2] = -2;
            let mut nu = vec![2; n];
            nu[n - 1] = 1;
            (c, nu, Some(2 * n as u32))
        }
        Family::C => {
            let mut c = chain(n);
            c[n - 2][n - 1] = -2;
            let mut nu = vec![1; n];
            nu[n - 1] = 2;
            (c, nu, Some(2 * n as u32))
        }
        Family::D => {
            let mut c = chain(n - 1);
            c.iter_mut().for_each(|row| row.push(0));
            c.push(vec![0; n]);
            c[n - 1][n - 1] = 2;
            link(&mut c, n - 2, n);
            (c, vec![1; n], Some(2 * n as u32 - 2))
        }
        Family::E => {
            let mut c = vec![vec![0i64; n]; n];
            for (i, row) in c.iter_mut().enumerate() {
                row[i] = 2;
            }
            link(&mut c, 1, 3);
            link(&mut c, 2, 4);
            for i in 3..n {
                link(&mut c, i, i + 1);
            }
            let h = match n {
                6 => 12,
                7 => 18,
                _ => 30,
            };
            (c, vec![1; n], Some(h))
        }
        Family::F => {
            let mut c = chain(4);
            c[2][1] = -2;
            (c, vec![2, 2, 1, 1], Some(12))
        }
        Family::G => (vec![vec![2, -3], vec![-1, 2]], vec![1, 3], Some(6)),
        Family::T => {
            let mut c = chain(n);
            c[n - 1][n - 1] = 1;
            (c, vec![1; n], None)
        }
    };
    RootSystem {
        label,
        cartan,
        nu,
        coxeter,
    }
}

/// `C · diag(ν)⁻¹` as an exact rational matrix; this is `(A♭)⁻¹`.
pub fn symmetrized_cartan(rs: &RootSystem) -> RationalMatrix {
    rs.cartan
        .iter()
        .map(|row| {
            row.iter()
                .zip(&rs.nu)
                .map(|(&c, &nu)| ExactRational::new(c, nu as i64))
                .collect()
        })
        .collect()
}

/// The weight Gram matrix `A` or `A♭`, computed exactly.
pub fn weight_gram(rs: &RootSystem, variant: GramVariant) -> RationalMatrix {
    let n = rs.rank();
    let flat: RationalMatrix = if rs.label.family == Family::T {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| ExactRational::from_integer(i.min(j) as i64 + 1))
                    .collect()
            })
            .collect()
    } else {
        invert(&symmetrized_cartan(rs)).expect("finite-type Cartan matrices are invertible")
    };
    match variant {
        GramVariant::AFlat => flat,
        GramVariant::A => {
            let two = ExactRational::from_integer(2);
            flat.into_iter()
                .map(|row| row.iter().map(|x| &two * x).collect())
                .collect()
        }
    }
}

/// The Langlands dual `S_m^(r)` of the untwisted affine type over a label,
/// together with the rank and Coxeter number of the simply-laced `S_m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualType {
    pub family: Family,
    pub rank: usize,
    pub twist: u32,
    pub coxeter: u32,
}

impl fmt::Display for DualType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}^({})", self.family.letter(), self.rank, self.twist)
    }
}

fn simply_laced_coxeter(family: Family, rank: usize) -> u32 {
    let n = rank as u32;
    match family {
        Family::A => n + 1,
        Family::D => 2 * n - 2,
        Family::E => match n {
            6 => 12,
            7 => 18,
            _ => 30,
        },
        _ => unreachable!("not simply laced"),
    }
}

pub fn langlands_dual(label: TypeLabel) -> DualType {
    let n = label.rank;
    let (family, rank, twist) = match label.family {
        Family::A => (Family::A, n, 1),
        Family::B => (Family::A, 2 * n - 1, 2),
        Family::C => (Family::D, n + 1, 2),
        Family::D => (Family::D, n, 1),
        Family::E => (Family::E, n, 1),
        Family::F => (Family::E, 6, 2),
        Family::G => (Family::D, 4, 3),
        Family::T => (Family::A, 2 * n, 2),
    };
    DualType {
        family,
        rank,
        twist,
        coxeter: simply_laced_coxeter(family, rank),
    }
}

/// Orbit data for realising a foldable type from a simply-laced source.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldingData {
    pub source: TypeLabel,
    pub target: TypeLabel,
    /// `orbit_map[s]` is the target node (0-based) of source node `s`.
    pub orbit_map: Vec<usize>,
    pub automorphism_order: u32,
}

impl FoldingData {
    /// Source nodes in each target orbit, in increasing order.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut orbits = vec![Vec::new(); self.target.rank];
        for (s, &t) in self.orbit_map.iter().enumerate() {
            orbits[t].push(s);
        }
        orbits
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.orbits().iter().map(Vec::len).collect()
    }

    /// Cartan matrix obtained by collapsing the source equations along orbits:
    /// `c_ij = Σ_{j' ∈ orbit(j)} c^src_{i' j'}` for the first representative `i'`.
    pub fn folded_cartan(&self, source_cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let orbits = self.orbits();
        orbits
            .iter()
            .map(|oi| {
                let rep = oi[0];
                orbits
                    .iter()
                    .map(|oj| oj.iter().map(|&s| source_cartan[rep][s]).sum())
                    .collect()
            })
            .collect()
    }

    /// Checks the folded Cartan relation for every representative, not just the first.
    pub fn relation_holds(&self, source_cartan: &[Vec<i64>], target_cartan: &[Vec<i64>]) -> bool {
        let orbits = self.orbits();
        orbits.iter().enumerate().all(|(i, oi)| {
            oi.iter().all(|&rep| {
                orbits.iter().enumerate().all(|(j, oj)| {
                    oj.iter().map(|&s| source_cartan[rep][s]).sum::<i64>() == target_cartan[i][j]
                })
            })
        })
    }

    /// Restricts a source-indexed vector to target nodes by averaging each orbit.
    pub fn collapse(&self, values: &[f64]) -> Vec<f64> {
        self.orbits()
            .iter()
            .map(|o| o.iter().map(|&s| values[s]).sum::<f64>() / o.len() as f64)
            .collect()
    }

    /// Largest spread `max - min` of a source-indexed vector within any orbit.
    pub fn orbit_spread(&self, values: &[f64]) -> f64 {
        self.orbits()
            .iter()
            .map(|o| {
                let (lo, hi) = o
                    .iter()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &s| {
                        (lo.min(values[s]), hi.max(values[s]))
                    });
                hi - lo
            })
            .fold(0.0, f64::max)
    }
}

pub fn folding(label: TypeLabel) -> Result<FoldingData> {
    let n = label.rank;
    let (source, orbit_map, order) = match label.family {
        Family::B => {
            // A_{2n-1}: i and 2n-i pair up, the middle node n is fixed.
            let m = 2 * n - 1;
            let map = (0..m).map(|s| s.min(m - 1 - s)).collect();
            (TypeLabel::new(Family::A, m)?, map, 2)
        }
        Family::C => {
            if n < 3 {
                return Err(Error::Unsupported(format!(
                    "{label} would fold from D{}, below the supported D rank",
                    n + 1
                )));
            }
            // D_{n+1}: the two fork nodes n, n+1 form one orbit.
            let map = (0..=n).map(|s| s.min(n - 1)).collect();
            (TypeLabel::new(Family::D, n + 1)?, map, 2)
        }
        Family::F => {
            // E6 chain 1-3-4-5-6 with 2 on 4; orbits {1,6}, {3,5}, {4}, {2}.
            (TypeLabel::new(Family::E, 6)?, vec![0, 3, 1, 2, 1, 0], 2)
        }
        Family::G => {
            // D4 with centre 2; the three outer nodes form one orbit.
            (TypeLabel::new(Family::D, 4)?, vec![1, 0, 1, 1], 3)
        }
        Family::T => {
            let m = 2 * n;
            let map = (0..m).map(|s| s.min(m - 1 - s)).collect();
            (TypeLabel::new(Family::A, m)?, map, 2)
        }
        _ => {
            return Err(Error::Unsupported(format!(
                "{label} is simply laced; no folding"
            )))
        }
    };
    Ok(FoldingData {
        source,
        target: label,
        orbit_map,
        automorphism_order: order,
    })
}
