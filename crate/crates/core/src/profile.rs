//! Profiles `(rk F_i, deg F_i)_{i=0..r}` of θ-invariant subobjects of a
//! system of Hodge bundles, with contiguous support starting at index 0.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bundle::BundleData;
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<(u64, i64)>", into = "Vec<(u64, i64)>")]
pub struct SubsystemProfile {
    entries: Vec<(u64, i64)>,
}

impl TryFrom<Vec<(u64, i64)>> for SubsystemProfile {
    type Error = Error;
    fn try_from(entries: Vec<(u64, i64)>) -> Result<Self> {
        SubsystemProfile::new(entries)
    }
}

impl From<SubsystemProfile> for Vec<(u64, i64)> {
    fn from(p: SubsystemProfile) -> Self {
        p.entries
    }
}

impl SubsystemProfile {
    pub fn new(entries: Vec<(u64, i64)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidProfile("profile must have at least one entry".into()));
        }
        if let Some(i) = entries.iter().position(|&(r, _)| r == 0) {
            return Err(Error::InvalidProfile(format!(
                "rank vanishes at index {i}; support must be contiguous from 0"
            )));
        }
        Ok(SubsystemProfile { entries })
    }

    pub fn entries(&self) -> &[(u64, i64)] {
        &self.entries
    }

    /// Largest index `r` with `F_r ≠ 0`.
    pub fn support_top(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn rank(&self) -> u64 {
        self.entries.iter().map(|&(r, _)| r).sum()
    }

    pub fn degree(&self) -> i64 {
        self.entries.iter().map(|&(_, d)| d).sum()
    }

    pub fn slope(&self) -> Rational {
        Rational::new(self.degree(), self.rank())
    }

    /// `rk F_r ≤ rk F_{r−1} ≤ … ≤ rk F_0`.
    pub fn is_rank_nonincreasing(&self) -> bool {
        self.entries.windows(2).all(|w| w[1].0 <= w[0].0)
    }

    pub fn as_bundles(&self) -> Vec<BundleData> {
        self.entries
            .iter()
            .map(|&(r, d)| BundleData::new(r, d).expect("profile ranks are positive"))
            .collect()
    }
}

impl fmt::Display for SubsystemProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (r, d)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({r}, {d})")?;
        }
        write!(f, "]")
    }
}
