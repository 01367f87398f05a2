//! Brute-force destabilizer search over θ-invariant sub-profiles.
//!
//! A θ-invariant subsheaf `F ⊆ E` of an isomorphism-mode system splits as
//! `F = ⊕_{i≤r} F_i` with `F_i ⊆ E_i` and `F_i ≅ θ(F_i) ⊆ F_{i−1} ⊗ Ω¹`. The
//! oracle enumerates every rank profile compatible with those inclusions
//! and gives each `F_i` the largest degree the flags on `E_i` allow. Slope
//! is increasing in every `deg F_i`, so the maximum over this finite set is
//! the maximum over the whole profile class.
//!
//! Profiles are produced in lexicographic order of their entry lists
//! (a prefix sorts before its extensions), which fixes every tie-break.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bundle::{subsheaf_degree_bound, BundleData, SubsheafBound};
use crate::error::{Error, Result};
use crate::hodge::{total_slope, HodgeSystem};
use crate::profile::SubsystemProfile;
use crate::rational::Rational;
use crate::verdict::{Answer, Certificate, Verdict};

pub const DEFAULT_BUDGET: u64 = 10_000_000;
pub const PROV_ORACLE: &str = "oracle:profile-search";
pub const PROV_DECLARED: &str = "declared-subobject";

/// Rank chain imposed on `rk F_i` relative to `rk F_{i−1}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConstraintMode {
    /// `rk F_i ≤ rk F_{i−1}`.
    #[default]
    #[serde(rename = "paper")]
    PaperMonotone,
    /// `rk F_i ≤ d · rk F_{i−1}`, which is all `F_i ↪ F_{i−1} ⊗ Ω¹` gives.
    #[serde(rename = "conservative")]
    Conservative,
}

impl ConstraintMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ConstraintMode::PaperMonotone => "paper",
            ConstraintMode::Conservative => "conservative",
        }
    }

    fn chain_cap(self, d: u64, prev: u64) -> u64 {
        match self {
            ConstraintMode::PaperMonotone => prev,
            ConstraintMode::Conservative => prev.saturating_mul(d),
        }
    }

    /// Whether the ranks of `profile` fit inside `sys` under this chain rule.
    pub fn admits_ranks(self, sys: &HodgeSystem, profile: &SubsystemProfile) -> bool {
        let comps = sys.components();
        if profile.len() > comps.len() {
            return false;
        }
        let d = sys.context().dim();
        profile.entries().iter().enumerate().all(|(i, &(r, _))| {
            r <= comps[i].rank() && (i == 0 || r <= self.chain_cap(d, profile.entries()[i - 1].0))
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub mode: ConstraintMode,
    pub budget: u64,
    pub parallel: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            mode: ConstraintMode::PaperMonotone,
            budget: DEFAULT_BUDGET,
            parallel: false,
        }
    }
}

/// Preorder walk of the rank tree; see the module docs for the order.
pub struct ProfileEnumerator<'a> {
    components: &'a [BundleData],
    bounds: Vec<SubsheafBound>,
    d: u64,
    mode: ConstraintMode,
    root: Option<u64>,
    ranks: Vec<u64>,
    started: bool,
    done: bool,
}

impl<'a> ProfileEnumerator<'a> {
    fn new(sys: &'a HodgeSystem, mode: ConstraintMode, bounds: Vec<SubsheafBound>, root: Option<u64>) -> Self {
        ProfileEnumerator {
            components: sys.components(),
            bounds,
            d: sys.context().dim(),
            mode,
            root,
            ranks: Vec::with_capacity(sys.components().len()),
            started: false,
            done: false,
        }
    }

    fn cap(&self, i: usize) -> u64 {
        let own = self.components[i].rank();
        if i == 0 {
            own
        } else {
            own.min(self.mode.chain_cap(self.d, self.ranks[i - 1]))
        }
    }

    fn advance(&mut self) -> bool {
        if !self.started {
            self.started = true;
            self.ranks.push(self.root.unwrap_or(1));
            return true;
        }
        if self.ranks.len() < self.components.len() {
            // Every chain cap is at least 1, so a child always exists.
            self.ranks.push(1);
            return true;
        }
        loop {
            let i = self.ranks.len() - 1;
            if i == 0 && self.root.is_some() {
                return false;
            }
            if self.ranks[i] < self.cap(i) {
                self.ranks[i] += 1;
                return true;
            }
            self.ranks.pop();
            if self.ranks.is_empty() {
                return false;
            }
        }
    }

    fn is_full(&self) -> bool {
        self.ranks.len() == self.components.len()
            && self.ranks.iter().zip(self.components).all(|(&r, c)| r == c.rank())
    }

    fn current(&self) -> SubsystemProfile {
        let entries = self
            .ranks
            .iter()
            .enumerate()
            .map(|(i, &r)| {
                let c = &self.components[i];
                (r, subsheaf_degree_bound(r, c.rank(), c.degree(), self.bounds[i]))
            })
            .collect();
        SubsystemProfile::new(entries).expect("enumerated ranks are positive")
    }
}

impl Iterator for ProfileEnumerator<'_> {
    type Item = SubsystemProfile;

    fn next(&mut self) -> Option<SubsystemProfile> {
        while !self.done {
            if !self.advance() {
                self.done = true;
                break;
            }
            if !self.is_full() {
                return Some(self.current());
            }
        }
        None
    }
}

fn check_budget(sys: &HodgeSystem, budget: u64) -> Result<()> {
    let required = sys
        .components()
        .iter()
        .fold(1u128, |acc, c| acc.saturating_mul(c.rank() as u128 + 1));
    if required > budget as u128 {
        return Err(Error::BudgetExceeded { required, budget });
    }
    Ok(())
}

fn check_flags(sys: &HodgeSystem, bounds: &[SubsheafBound]) -> Result<()> {
    for (i, (c, b)) in sys.components().iter().zip(bounds).enumerate() {
        let ok = match b {
            SubsheafBound::Semistable => c.is_flagged_semistable(),
            SubsheafBound::Stable => c.is_flagged_stable(),
        };
        if !ok {
            return Err(Error::FlagPrecondition(format!(
                "component {i} is not flagged {}",
                b.as_str()
            )));
        }
    }
    Ok(())
}

fn prepare(sys: &HodgeSystem, bounds: &[SubsheafBound], budget: u64) -> Result<()> {
    if !sys.is_isomorphisms() {
        return Err(Error::RequiresIsomorphisms);
    }
    check_flags(sys, bounds)?;
    check_budget(sys, budget)
}

/// Every proper profile of `sys` under `mode`, each `F_i` at the largest
/// degree allowed by `subsheaf` bounds on `E_i`, in lexicographic order.
pub fn enumerate_profiles(
    sys: &HodgeSystem,
    mode: ConstraintMode,
    subsheaf: SubsheafBound,
) -> Result<ProfileEnumerator<'_>> {
    enumerate_with_budget(sys, mode, subsheaf, DEFAULT_BUDGET)
}

pub fn enumerate_with_budget(
    sys: &HodgeSystem,
    mode: ConstraintMode,
    subsheaf: SubsheafBound,
    budget: u64,
) -> Result<ProfileEnumerator<'_>> {
    let bounds = vec![subsheaf; sys.components().len()];
    prepare(sys, &bounds, budget)?;
    Ok(ProfileEnumerator::new(sys, mode, bounds, None))
}

/// Result of a max-slope search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxSlope {
    /// Best profile and its slope; `None` when no proper profile exists.
    pub best: Option<(SubsystemProfile, Rational)>,
    pub examined: u64,
}

fn better(candidate: &(SubsystemProfile, Rational), incumbent: &(SubsystemProfile, Rational)) -> bool {
    candidate.1 > incumbent.1 || (candidate.1 == incumbent.1 && candidate.0 < incumbent.0)
}

fn merge(a: MaxSlope, b: MaxSlope) -> MaxSlope {
    let best = match (a.best, b.best) {
        (Some(x), Some(y)) => Some(if better(&y, &x) { y } else { x }),
        (x, y) => x.or(y),
    };
    MaxSlope {
        best,
        examined: a.examined + b.examined,
    }
}

fn scan(iter: ProfileEnumerator<'_>) -> MaxSlope {
    let mut out = MaxSlope { best: None, examined: 0 };
    for profile in iter {
        out.examined += 1;
        let slope = profile.slope();
        // Strict: the first of equal slopes is the lexicographically smallest.
        if out.best.as_ref().is_none_or(|(_, s)| slope > *s) {
            out.best = Some((profile, slope));
        }
    }
    out
}

fn max_slope_with_bounds(sys: &HodgeSystem, bounds: Vec<SubsheafBound>, opts: &SearchOptions) -> Result<MaxSlope> {
    prepare(sys, &bounds, opts.budget)?;
    if !opts.parallel {
        return Ok(scan(ProfileEnumerator::new(sys, opts.mode, bounds, None)));
    }
    let roots: Vec<u64> = (1..=sys.components()[0].rank()).collect();
    let parts: Vec<MaxSlope> = roots
        .par_iter()
        .map(|&root| scan(ProfileEnumerator::new(sys, opts.mode, bounds.clone(), Some(root))))
        .collect();
    Ok(parts
        .into_iter()
        .fold(MaxSlope { best: None, examined: 0 }, merge))
}

/// Profile of maximal slope (lexicographically smallest among ties).
pub fn max_slope_profile(sys: &HodgeSystem, subsheaf: SubsheafBound, opts: &SearchOptions) -> Result<MaxSlope> {
    max_slope_with_bounds(sys, vec![subsheaf; sys.components().len()], opts)
}

/// Oracle verdict plus search statistics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchReport {
    pub verdict: Verdict,
    pub mu_total: Rational,
    pub semistable_search: MaxSlope,
    pub stable_search: Option<MaxSlope>,
}

/// Decide (semi)stability within the profile class.
///
/// Semistability is decided with semistable bounds on every component.
/// Stability is decided with each component's own tightest flag: stable
/// bounds where `E_i` is flagged stable, semistable bounds elsewhere.
/// Requires every component flagged semistable.
pub fn search_verdict(sys: &HodgeSystem, opts: &SearchOptions) -> Result<SearchReport> {
    let n = sys.components().len();
    let ss = max_slope_with_bounds(sys, vec![SubsheafBound::Semistable; n], opts)?;
    let mu = total_slope(sys);
    let prov = format!("{PROV_ORACLE}/{}", opts.mode.as_str());

    if let Some((p, s)) = &ss.best {
        if *s > mu {
            let verdict = Verdict::unstable(Certificate::new(p.clone(), mu.clone()), prov);
            return Ok(SearchReport {
                verdict,
                mu_total: mu,
                semistable_search: ss,
                stable_search: None,
            });
        }
    }

    let mixed: Vec<SubsheafBound> = sys
        .components()
        .iter()
        .map(|c| if c.is_flagged_stable() { SubsheafBound::Stable } else { SubsheafBound::Semistable })
        .collect();
    let st = if mixed.iter().all(|b| *b == SubsheafBound::Semistable) {
        None
    } else {
        Some(max_slope_with_bounds(sys, mixed, opts)?)
    };
    let best = st.as_ref().unwrap_or(&ss).best.as_ref();
    let (stable, certificate) = match best {
        Some((p, s)) if *s == mu => (Answer::No, Some(Certificate::new(p.clone(), mu.clone()))),
        _ => (Answer::Yes, None),
    };
    Ok(SearchReport {
        verdict: Verdict::new(Answer::Yes, stable, certificate, prov),
        mu_total: mu,
        semistable_search: ss,
        stable_search: st,
    })
}

pub fn verdict_from_search(sys: &HodgeSystem, opts: &SearchOptions) -> Result<Verdict> {
    search_verdict(sys, opts).map(|r| r.verdict)
}

/// Compare a declared θ-invariant subobject against `μ(E)`.
///
/// Ranks must be dominated by the components; degrees are checked against
/// the subsheaf bound wherever a component carries a flag.
pub fn check_declared(sys: &HodgeSystem, profile: &SubsystemProfile) -> Result<Verdict> {
    let comps = sys.components();
    if profile.len() > comps.len() {
        return Err(Error::InvalidProfile(format!(
            "profile {profile} extends beyond the top component"
        )));
    }
    for (i, (&(r, deg), c)) in profile.entries().iter().zip(comps).enumerate() {
        if r > c.rank() {
            return Err(Error::RankDomination {
                index: i,
                rank: r,
                ambient: c.rank(),
            });
        }
        let bound = if c.is_flagged_stable() {
            Some(SubsheafBound::Stable)
        } else if c.is_flagged_semistable() {
            Some(SubsheafBound::Semistable)
        } else {
            None
        };
        if let Some(mode) = bound {
            let max = subsheaf_degree_bound(r, c.rank(), c.degree(), mode);
            if deg > max {
                return Err(Error::DegreeBound {
                    index: i,
                    degree: deg,
                    bound: max,
                });
            }
        }
    }
    let mu = total_slope(sys);
    let proper = profile.rank() < sys.total().rank();
    let cert = Certificate::new(profile.clone(), mu);
    if cert.destabilizes() {
        Ok(Verdict::unstable(cert, PROV_DECLARED))
    } else if proper && cert.slope == cert.mu_total {
        Ok(Verdict::new(Answer::Unknown, Answer::No, Some(cert), PROV_DECLARED))
    } else {
        Ok(Verdict::unknown(PROV_DECLARED))
    }
}

/// A profile that violates `μ(E)` under the conservative chain rule while
/// the monotone chain finds none.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModeDiscrepancy {
    pub conservative: Certificate,
    pub monotone_max: Option<Rational>,
}

pub fn mode_discrepancy(sys: &HodgeSystem, subsheaf: SubsheafBound, opts: &SearchOptions) -> Result<Option<ModeDiscrepancy>> {
    let mu = total_slope(sys);
    let monotone = max_slope_profile(sys, subsheaf, &SearchOptions { mode: ConstraintMode::PaperMonotone, ..*opts })?;
    let cons = max_slope_profile(sys, subsheaf, &SearchOptions { mode: ConstraintMode::Conservative, ..*opts })?;
    let monotone_max = monotone.best.map(|(_, s)| s);
    let monotone_ok = monotone_max.as_ref().is_none_or(|s| *s <= mu);
    match cons.best {
        Some((p, s)) if s > mu && monotone_ok => Ok(Some(ModeDiscrepancy {
            conservative: Certificate::new(p, mu),
            monotone_max,
        })),
        _ => Ok(None),
    }
}
