use std::fmt;

use serde::{Deserialize, Serialize};

use crate::profile::SubsystemProfile;
use crate::rational::Rational;

/// Three-valued answer. `Unknown` means no applicable theorem or search
/// settles the question; it is never a soft `No`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    Yes,
    No,
    Unknown,
}

impl Answer {
    pub fn is_definite(self) -> bool {
        self != Answer::Unknown
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Answer::Yes => "yes",
            Answer::No => "no",
            Answer::Unknown => "unknown",
        }
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A destabilizing (or slope-equal) invariant subobject, together with the
/// two slopes it is compared on.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub profile: SubsystemProfile,
    pub slope: Rational,
    pub mu_total: Rational,
}

impl Certificate {
    pub fn new(profile: SubsystemProfile, mu_total: Rational) -> Self {
        let slope = profile.slope();
        Certificate {
            profile,
            slope,
            mu_total,
        }
    }

    /// `μ(F) − μ(E)`.
    pub fn gap(&self) -> Rational {
        &self.slope - &self.mu_total
    }

    pub fn destabilizes(&self) -> bool {
        self.slope > self.mu_total
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Verdict {
    pub semistable: Answer,
    pub stable: Answer,
    pub certificate: Option<Certificate>,
    pub provenance: String,
}

impl Verdict {
    pub fn new(
        semistable: Answer,
        stable: Answer,
        certificate: Option<Certificate>,
        provenance: impl Into<String>,
    ) -> Self {
        debug_assert!(stable != Answer::Yes || semistable == Answer::Yes);
        debug_assert!(semistable != Answer::No || stable == Answer::No);
        Verdict {
            semistable,
            stable,
            certificate,
            provenance: provenance.into(),
        }
    }

    pub fn unknown(provenance: impl Into<String>) -> Self {
        Verdict::new(Answer::Unknown, Answer::Unknown, None, provenance)
    }

    /// Not semistable, witnessed by `certificate`.
    pub fn unstable(certificate: Certificate, provenance: impl Into<String>) -> Self {
        Verdict::new(Answer::No, Answer::No, Some(certificate), provenance)
    }

    /// True when both definite answers are consistent with the invariants
    /// the verdict type promises.
    pub fn is_well_formed(&self) -> bool {
        if self.stable == Answer::Yes && self.semistable != Answer::Yes {
            return false;
        }
        if self.semistable == Answer::No {
            return matches!(&self.certificate, Some(c) if c.destabilizes());
        }
        match &self.certificate {
            Some(c) if self.stable == Answer::No => c.slope >= c.mu_total,
            _ => true,
        }
    }

    /// Two verdicts conflict when some field is definite in both and differs.
    pub fn conflicts_with(&self, other: &Verdict) -> bool {
        let clash = |a: Answer, b: Answer| a.is_definite() && b.is_definite() && a != b;
        clash(self.semistable, other.semistable) || clash(self.stable, other.stable)
    }
}
