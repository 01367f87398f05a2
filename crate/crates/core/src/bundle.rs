//! Numerical invariants of torsion-free sheaves and the slope calculus on them.

use num::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Rank and degree of a torsion-free sheaf with respect to a fixed
/// polarization, plus optional semistability attestations.
///
/// Semistability is never computed from the numbers; the flags are input.
/// Flag combinations that no sheaf with these invariants can realize are
/// rejected at construction:
///
/// * `stable` implies `semistable`;
/// * a rank-one sheaf is always stable, so a `false` flag there is refused;
/// * strictly semistable (`semistable`, not `stable`) needs a proper subsheaf
///   of equal slope, which exists numerically only when `gcd(rank, degree) > 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawBundle", into = "RawBundle")]
pub struct BundleData {
    rank: u64,
    degree: i64,
    semistable: Option<bool>,
    stable: Option<bool>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBundle {
    rank: u64,
    degree: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    semistable: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    stable: Option<bool>,
}

impl TryFrom<RawBundle> for BundleData {
    type Error = Error;
    fn try_from(raw: RawBundle) -> Result<Self> {
        BundleData::with_flags(raw.rank, raw.degree, raw.semistable, raw.stable)
    }
}

impl From<BundleData> for RawBundle {
    fn from(b: BundleData) -> Self {
        RawBundle {
            rank: b.rank,
            degree: b.degree,
            semistable: b.semistable,
            stable: b.stable,
        }
    }
}

impl BundleData {
    /// Unflagged bundle data.
    pub fn new(rank: u64, degree: i64) -> Result<Self> {
        Self::with_flags(rank, degree, None, None)
    }

    pub fn with_flags(
        rank: u64,
        degree: i64,
        semistable: Option<bool>,
        stable: Option<bool>,
    ) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidBundle("rank must be at least 1".into()));
        }
        if stable == Some(true) && semistable == Some(false) {
            return Err(Error::InvalidBundle(
                "stable bundle flagged as not semistable".into(),
            ));
        }
        // A stable flag fixes semistability.
        let semistable = if stable == Some(true) { Some(true) } else { semistable };
        if rank == 1 && (semistable == Some(false) || stable == Some(false)) {
            return Err(Error::InvalidBundle(
                "a rank-one sheaf is always stable".into(),
            ));
        }
        if semistable == Some(true)
            && stable == Some(false)
            && rank.gcd(&degree.unsigned_abs()) == 1
        {
            return Err(Error::InvalidBundle(format!(
                "({rank}, {degree}) cannot be strictly semistable: no proper subsheaf can have equal slope"
            )));
        }
        Ok(BundleData {
            rank,
            degree,
            semistable,
            stable,
        })
    }

    pub fn semistable(rank: u64, degree: i64) -> Result<Self> {
        Self::with_flags(rank, degree, Some(true), None)
    }

    pub fn stable(rank: u64, degree: i64) -> Result<Self> {
        Self::with_flags(rank, degree, Some(true), Some(true))
    }

    /// Semistable but not stable.
    pub fn strictly_semistable(rank: u64, degree: i64) -> Result<Self> {
        Self::with_flags(rank, degree, Some(true), Some(false))
    }

    pub fn rank(&self) -> u64 {
        self.rank
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn semistable_flag(&self) -> Option<bool> {
        self.semistable
    }

    pub fn stable_flag(&self) -> Option<bool> {
        self.stable
    }

    pub fn is_flagged_semistable(&self) -> bool {
        self.semistable == Some(true)
    }

    pub fn is_flagged_stable(&self) -> bool {
        self.stable == Some(true)
    }

    /// Same invariants, flags dropped.
    pub fn unflagged(&self) -> Self {
        BundleData {
            rank: self.rank,
            degree: self.degree,
            semistable: None,
            stable: None,
        }
    }

    /// Same invariants with the given flags; re-validated.
    pub fn reflagged(&self, semistable: Option<bool>, stable: Option<bool>) -> Result<Self> {
        Self::with_flags(self.rank, self.degree, semistable, stable)
    }
}

/// `deg / rank` in lowest terms.
pub fn slope(b: &BundleData) -> Rational {
    Rational::new(b.degree, b.rank)
}

pub fn direct_sum(parts: &[BundleData]) -> Result<BundleData> {
    if parts.is_empty() {
        return Err(Error::EmptyDirectSum);
    }
    let mut rank: u64 = 0;
    let mut degree: i64 = 0;
    for p in parts {
        rank = rank
            .checked_add(p.rank)
            .ok_or(Error::Overflow("direct sum rank"))?;
        degree = degree
            .checked_add(p.degree)
            .ok_or(Error::Overflow("direct sum degree"))?;
    }
    BundleData::new(rank, degree)
}

/// Invariants of `a ⊗ b`: ranks multiply and slopes add.
pub fn tensor(a: &BundleData, b: &BundleData) -> Result<BundleData> {
    let rank = a
        .rank
        .checked_mul(b.rank)
        .ok_or(Error::Overflow("tensor rank"))?;
    let degree = (b.rank as i128 * a.degree as i128) + (a.rank as i128 * b.degree as i128);
    let degree = i64::try_from(degree).map_err(|_| Error::Overflow("tensor degree"))?;
    BundleData::new(rank, degree)
}

/// Which inequality a subsheaf of a (semi)stable sheaf obeys.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubsheafBound {
    /// `deg F ≤ rk F · μ`.
    Semistable,
    /// `deg F < rk F · μ` for proper `F`.
    Stable,
}

impl SubsheafBound {
    pub fn as_str(self) -> &'static str {
        match self {
            SubsheafBound::Semistable => "semistable",
            SubsheafBound::Stable => "stable",
        }
    }
}

/// Largest degree a rank-`sub_rank` subsheaf of `ambient` can have, given
/// that `ambient` is flagged semistable (resp. stable).
///
/// In `Stable` mode a full-rank subsheaf is bounded by `degree(ambient)`
/// itself; callers decide whether the full profile counts.
pub fn max_subsheaf_degree(sub_rank: u64, ambient: &BundleData, mode: SubsheafBound) -> Result<i64> {
    if sub_rank == 0 || sub_rank > ambient.rank {
        return Err(Error::SubRankOutOfRange {
            sub_rank,
            rank: ambient.rank,
        });
    }
    match mode {
        SubsheafBound::Semistable if !ambient.is_flagged_semistable() => {
            return Err(Error::FlagPrecondition(format!(
                "ambient ({}, {}) is not flagged semistable",
                ambient.rank, ambient.degree
            )))
        }
        SubsheafBound::Stable if !ambient.is_flagged_stable() => {
            return Err(Error::FlagPrecondition(format!(
                "ambient ({}, {}) is not flagged stable",
                ambient.rank, ambient.degree
            )))
        }
        _ => {}
    }
    Ok(subsheaf_degree_bound(sub_rank, ambient.rank, ambient.degree, mode))
}

/// Flag-free core of [`max_subsheaf_degree`]; `1 ≤ sub_rank ≤ rank` assumed.
pub(crate) fn subsheaf_degree_bound(sub_rank: u64, rank: u64, degree: i64, mode: SubsheafBound) -> i64 {
    if sub_rank == rank {
        return degree;
    }
    let scaled = sub_rank as i128 * degree as i128;
    let (q, r) = scaled.div_mod_floor(&(rank as i128));
    let bound = match mode {
        SubsheafBound::Semistable => q,
        SubsheafBound::Stable if r == 0 => q - 1,
        SubsheafBound::Stable => q,
    };
    // |bound| ≤ |degree| + 1 because sub_rank < rank.
    bound as i64
}

/// Ambient data of the base variety: characteristic of the ground field,
/// `d = dim X = rk Ω¹`, `deg Ω¹` and the stability flags of `Ω¹`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawContext", into = "RawContext")]
pub struct GeometricContext {
    characteristic: u64,
    dim: u64,
    omega_degree: i64,
    omega_semistable: bool,
    omega_stable: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawContext {
    characteristic: u64,
    dim: u64,
    omega_degree: i64,
    omega_semistable: bool,
    omega_stable: bool,
}

impl TryFrom<RawContext> for GeometricContext {
    type Error = Error;
    fn try_from(raw: RawContext) -> Result<Self> {
        GeometricContext::new(
            raw.characteristic,
            raw.dim,
            raw.omega_degree,
            raw.omega_semistable,
            raw.omega_stable,
        )
    }
}

impl From<GeometricContext> for RawContext {
    fn from(c: GeometricContext) -> Self {
        RawContext {
            characteristic: c.characteristic,
            dim: c.dim,
            omega_degree: c.omega_degree,
            omega_semistable: c.omega_semistable,
            omega_stable: c.omega_stable,
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut k = 2u64;
    while k.saturating_mul(k) <= p {
        if p.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

impl GeometricContext {
    pub fn new(
        characteristic: u64,
        dim: u64,
        omega_degree: i64,
        omega_semistable: bool,
        omega_stable: bool,
    ) -> Result<Self> {
        if characteristic != 0 && !is_prime(characteristic) {
            return Err(Error::InvalidContext(format!(
                "characteristic {characteristic} is neither 0 nor a prime"
            )));
        }
        if dim == 0 {
            return Err(Error::InvalidContext("dimension must be at least 1".into()));
        }
        if omega_stable && !omega_semistable {
            return Err(Error::InvalidContext(
                "Ω¹ flagged stable but not semistable".into(),
            ));
        }
        Ok(GeometricContext {
            characteristic,
            dim,
            omega_degree,
            omega_semistable,
            omega_stable,
        })
    }

    /// A smooth projective curve of genus `genus` over a field of
    /// characteristic `characteristic`: `Ω¹ = K` is a line bundle of degree `2g − 2`.
    pub fn curve(characteristic: u64, genus: u64) -> Result<Self> {
        let omega_degree = 2 * i64::try_from(genus).map_err(|_| Error::Overflow("genus"))? - 2;
        Self::new(characteristic, 1, omega_degree, true, true)
    }

    pub fn characteristic(&self) -> u64 {
        self.characteristic
    }

    pub fn dim(&self) -> u64 {
        self.dim
    }

    pub fn omega_degree(&self) -> i64 {
        self.omega_degree
    }

    pub fn omega_semistable(&self) -> bool {
        self.omega_semistable
    }

    pub fn omega_stable(&self) -> bool {
        self.omega_stable
    }

    /// `Ω¹` as bundle data.
    pub fn omega(&self) -> BundleData {
        let stable = if self.omega_stable { Some(true) } else { None };
        let semistable = if self.omega_semistable { Some(true) } else { None };
        BundleData {
            rank: self.dim,
            degree: self.omega_degree,
            semistable,
            stable,
        }
    }
}
