//! Harder–Narasimhan profiles: the semistable quotients `V_i / V_{i+1}` of
//! the HN filtration, listed from the top slope down.

use serde::{Deserialize, Serialize};

use crate::bundle::{slope, tensor, BundleData};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<BundleData>", into = "Vec<BundleData>")]
pub struct HnProfile {
    quotients: Vec<BundleData>,
}

impl TryFrom<Vec<BundleData>> for HnProfile {
    type Error = Error;
    fn try_from(quotients: Vec<BundleData>) -> Result<Self> {
        HnProfile::new(quotients)
    }
}

impl From<HnProfile> for Vec<BundleData> {
    fn from(p: HnProfile) -> Self {
        p.quotients
    }
}

impl HnProfile {
    /// Quotients are semistable by definition; unflagged entries are flagged
    /// on the way in and an explicit `semistable: false` is refused.
    /// Slope order is *not* enforced here, see [`validate_hn`].
    pub fn new(quotients: Vec<BundleData>) -> Result<Self> {
        if quotients.is_empty() {
            return Err(Error::InvalidParameter("HN profile needs at least one quotient".into()));
        }
        let quotients = quotients
            .into_iter()
            .enumerate()
            .map(|(i, q)| match q.semistable_flag() {
                Some(false) => Err(Error::FlagPrecondition(format!(
                    "HN quotient {i} flagged not semistable"
                ))),
                Some(true) => Ok(q),
                None => q.reflagged(Some(true), q.stable_flag()),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(HnProfile { quotients })
    }

    pub fn quotients(&self) -> &[BundleData] {
        &self.quotients
    }

    pub fn rank(&self) -> u64 {
        self.quotients.iter().map(BundleData::rank).sum()
    }

    pub fn degree(&self) -> i64 {
        self.quotients.iter().map(BundleData::degree).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HnValidation {
    pub valid: bool,
    /// Index `i` of the first pair `(i, i+1)` whose slopes fail to decrease.
    pub first_violation: Option<usize>,
}

pub fn validate_hn(p: &HnProfile) -> HnValidation {
    let first_violation = p
        .quotients
        .windows(2)
        .position(|w| slope(&w[0]) <= slope(&w[1]));
    HnValidation {
        valid: first_violation.is_none(),
        first_violation,
    }
}

fn require_valid(p: &HnProfile) -> Result<()> {
    match validate_hn(p).first_violation {
        Some(index) => Err(Error::InvalidHnProfile { index }),
        None => Ok(()),
    }
}

/// HN profile of `V ⊗ W` for semistable `W`: quotient-wise tensor product.
/// Every slope shifts by `μ(W)`, so the order is preserved.
pub fn tensor_hn(p: &HnProfile, w: &BundleData) -> Result<HnProfile> {
    if !w.is_flagged_semistable() {
        return Err(Error::FlagPrecondition(format!(
            "tensor factor ({}, {}) is not flagged semistable",
            w.rank(),
            w.degree()
        )));
    }
    require_valid(p)?;
    let quotients = p
        .quotients
        .iter()
        .map(|q| tensor(q, w).and_then(|t| t.reflagged(Some(true), None)))
        .collect::<Result<Vec<_>>>()?;
    HnProfile::new(quotients)
}

/// Partial sums `(Σ_{j<i} rk, Σ_{j<i} deg)` starting at the origin, with no
/// validity requirement.
pub fn cumulative_points(quotients: &[BundleData]) -> Vec<(u64, i64)> {
    let mut points = Vec::with_capacity(quotients.len() + 1);
    let (mut r, mut d) = (0u64, 0i64);
    points.push((r, d));
    for q in quotients {
        r += q.rank();
        d += q.degree();
        points.push((r, d));
    }
    points
}

/// Consecutive segment slopes strictly decrease.
pub fn is_strictly_concave(points: &[(u64, i64)]) -> bool {
    points.windows(3).all(|w| {
        let (dx1, dy1) = ((w[1].0 - w[0].0) as i128, (w[1].1 - w[0].1) as i128);
        let (dx2, dy2) = ((w[2].0 - w[1].0) as i128, (w[2].1 - w[1].1) as i128);
        // dy2/dx2 < dy1/dx1 with positive dx.
        dy2 * dx1 < dy1 * dx2
    })
}

/// HN polygon of a valid profile.
pub fn hn_polygon(p: &HnProfile) -> Result<Vec<(u64, i64)>> {
    require_valid(p)?;
    Ok(cumulative_points(&p.quotients))
}
