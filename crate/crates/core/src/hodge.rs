//! Systems of Hodge bundles `E = ⊕_{i=0}^n E_i` with `θ(E_i) ⊆ E_{i−1} ⊗ Ω¹`.
//!
//! In [`ThetaMode::Isomorphisms`] every `θ|E_i` is an isomorphism onto
//! `E_{i−1} ⊗ Ω¹`, so the whole tower is determined by `E_0`:
//!
//! ```text
//! rk E_i  = d^i · rk E_0
//! deg E_i = i · d^(i−1) · deg Ω¹ · rk E_0 + d^i · deg E_0
//! ```
//!
//! Both relations are enforced when such a system is built.

use serde::{Deserialize, Serialize};

use crate::bundle::{direct_sum, slope, BundleData, GeometricContext};
use crate::error::{Error, Result};
use crate::inequalities::{derivative_sum, geometric_sum};
use crate::profile::SubsystemProfile;
use crate::rational::Rational;
use crate::verdict::{Answer, Certificate, Verdict};

pub const PROV_SEMISTABLE_COMPONENTS: &str = "criterion:semistable-components";
pub const PROV_CHAR0_CONVERSE: &str = "criterion:char0-converse";
pub const PROV_STABLE_COMPONENTS: &str = "criterion:stable-components";
pub const PROV_CURVE_CONVERSE: &str = "criterion:curve-converse";
pub const PROV_INCONCLUSIVE: &str = "criterion:inconclusive";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThetaMode {
    /// `θ|E_i : E_i ≅ E_{i−1} ⊗ Ω¹` for all `i ≥ 1`.
    Isomorphisms,
    /// θ is only known through subobjects declared θ-invariant.
    Declared(Vec<SubsystemProfile>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSystem", into = "RawSystem")]
pub struct HodgeSystem {
    context: GeometricContext,
    components: Vec<BundleData>,
    theta: ThetaMode,
    e0_subsheaf: Option<BundleData>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSystem {
    context: GeometricContext,
    components: Vec<BundleData>,
    theta: ThetaMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    e0_subsheaf: Option<BundleData>,
}

impl TryFrom<RawSystem> for HodgeSystem {
    type Error = Error;
    fn try_from(raw: RawSystem) -> Result<Self> {
        HodgeSystem::new(raw.context, raw.components, raw.theta)?.with_e0_subsheaf(raw.e0_subsheaf)
    }
}

impl From<HodgeSystem> for RawSystem {
    fn from(s: HodgeSystem) -> Self {
        RawSystem {
            context: s.context,
            components: s.components,
            theta: s.theta,
            e0_subsheaf: s.e0_subsheaf,
        }
    }
}

/// `(rk E_i, deg E_i)` of `E_0 ⊗ (Ω¹)^{⊗i}`.
pub(crate) fn tower_entry(rank0: u64, degree0: i64, context: &GeometricContext, i: usize) -> Result<(u64, i64)> {
    let d = context.dim() as i128;
    let i32_i = u32::try_from(i).map_err(|_| Error::Overflow("tower index"))?;
    let d_pow = d.checked_pow(i32_i).ok_or(Error::Overflow("d^i"))?;
    let d_pow_prev = if i == 0 { 0 } else { d.checked_pow(i32_i - 1).ok_or(Error::Overflow("d^(i-1)"))? };
    let rank = d_pow
        .checked_mul(rank0 as i128)
        .ok_or(Error::Overflow("tower rank"))?;
    let degree = (i as i128)
        .checked_mul(d_pow_prev)
        .and_then(|x| x.checked_mul(context.omega_degree() as i128))
        .and_then(|x| x.checked_mul(rank0 as i128))
        .and_then(|x| x.checked_add(d_pow.checked_mul(degree0 as i128)?))
        .ok_or(Error::Overflow("tower degree"))?;
    Ok((
        u64::try_from(rank).map_err(|_| Error::Overflow("tower rank"))?,
        i64::try_from(degree).map_err(|_| Error::Overflow("tower degree"))?,
    ))
}

impl HodgeSystem {
    pub fn new(context: GeometricContext, components: Vec<BundleData>, theta: ThetaMode) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidParameter("a Hodge system needs at least one component".into()));
        }
        match &theta {
            ThetaMode::Isomorphisms => {
                let e0 = &components[0];
                for (i, c) in components.iter().enumerate().skip(1) {
                    let (rank, degree) = tower_entry(e0.rank(), e0.degree(), &context, i)?;
                    if (c.rank(), c.degree()) != (rank, degree) {
                        return Err(Error::InconsistentComponent {
                            index: i,
                            expected_rank: rank,
                            expected_degree: degree,
                            rank: c.rank(),
                            degree: c.degree(),
                        });
                    }
                }
            }
            ThetaMode::Declared(profiles) => {
                for p in profiles {
                    if p.len() > components.len() {
                        return Err(Error::InvalidProfile(format!(
                            "declared profile {p} extends beyond the top component"
                        )));
                    }
                }
            }
        }
        Ok(HodgeSystem {
            context,
            components,
            theta,
            e0_subsheaf: None,
        })
    }

    /// Attach the invariants of a proper subsheaf of `E_0` supplied by the
    /// caller: a maximal destabilizing subsheaf when `E_0` is unstable, or an
    /// equal-slope subsheaf when `E_0` is strictly semistable. The converse
    /// criteria build their certificates from it.
    pub fn with_e0_subsheaf(mut self, sub: Option<BundleData>) -> Result<Self> {
        if let Some(f0) = &sub {
            let r0 = self.components[0].rank();
            if f0.rank() >= r0 {
                return Err(Error::SubRankOutOfRange {
                    sub_rank: f0.rank(),
                    rank: r0 - 1,
                });
            }
        }
        self.e0_subsheaf = sub;
        Ok(self)
    }

    pub fn context(&self) -> &GeometricContext {
        &self.context
    }

    pub fn components(&self) -> &[BundleData] {
        &self.components
    }

    pub fn theta(&self) -> &ThetaMode {
        &self.theta
    }

    pub fn e0_subsheaf(&self) -> Option<&BundleData> {
        self.e0_subsheaf.as_ref()
    }

    /// Top index `n`.
    pub fn top(&self) -> usize {
        self.components.len() - 1
    }

    pub fn is_isomorphisms(&self) -> bool {
        self.theta == ThetaMode::Isomorphisms
    }

    /// `E` as a plain bundle.
    pub fn total(&self) -> BundleData {
        direct_sum(&self.components).expect("components are nonempty and validated")
    }

    fn require_isomorphisms(&self) -> Result<()> {
        if self.is_isomorphisms() {
            Ok(())
        } else {
            Err(Error::HypothesisViolated(
                "θ-structure must consist of isomorphisms".into(),
            ))
        }
    }
}

/// The system `E_i = E_0 ⊗ (Ω¹)^{⊗i}`, `i = 0..=n`, with θ the tautological
/// isomorphisms.
///
/// Flags of `base` propagate to higher components only where tensoring is
/// known to preserve them: semistability when `Ω¹` is semistable and either
/// the characteristic is 0 or `Ω¹` is a line bundle; stability when `Ω¹` is
/// a line bundle.
pub fn derive_components(base: &BundleData, context: &GeometricContext, n: usize) -> Result<HodgeSystem> {
    let line = context.dim() == 1;
    let pass_semistable = context.omega_semistable() && (context.characteristic() == 0 || line);
    let mut components = Vec::with_capacity(n + 1);
    components.push(base.clone());
    for i in 1..=n {
        let (rank, degree) = tower_entry(base.rank(), base.degree(), context, i)?;
        let semistable = if pass_semistable { base.semistable_flag() } else { None };
        let stable = if line { base.stable_flag() } else { None };
        components.push(BundleData::with_flags(rank, degree, semistable, stable)?);
    }
    HodgeSystem::new(context.clone(), components, ThetaMode::Isomorphisms)
}

/// `μ(E_0 ⊕ … ⊕ E_k)` via `μ(E_0) + deg Ω¹ · (Σ_{i≤k} i·d^{i−1}) / (Σ_{i≤k} d^i)`.
pub fn partial_slope(sys: &HodgeSystem, k: usize) -> Result<Rational> {
    sys.require_isomorphisms()?;
    if k > sys.top() {
        return Err(Error::IndexOutOfRange { index: k, max: sys.top() });
    }
    let d = sys.context.dim();
    let correction = Rational::from(derivative_sum(d, k)) / Rational::from(geometric_sum(d, k));
    Ok(slope(&sys.components[0]) + Rational::from(sys.context.omega_degree()) * correction)
}

/// `μ(E)`; valid in either θ-mode.
pub fn total_slope(sys: &HodgeSystem) -> Rational {
    slope(&sys.total())
}

/// Push a subsheaf `F_0 ⊆ E_0` up the tower: `F_p = θ^{-p}(F_0 ⊗ (Ω¹)^{⊗p})`.
///
/// The resulting profile satisfies `μ(F) − μ(E) = μ(F_0) − μ(E_0)` exactly.
pub fn transport_subsystem(sys: &HodgeSystem, f0: &BundleData) -> Result<SubsystemProfile> {
    sys.require_isomorphisms()?;
    let r0 = sys.components[0].rank();
    if f0.rank() > r0 {
        return Err(Error::SubRankOutOfRange {
            sub_rank: f0.rank(),
            rank: r0,
        });
    }
    let entries = (0..=sys.top())
        .map(|p| tower_entry(f0.rank(), f0.degree(), &sys.context, p))
        .collect::<Result<Vec<_>>>()?;
    SubsystemProfile::new(entries)
}

fn check_semistable_hypotheses(sys: &HodgeSystem) -> Result<()> {
    sys.require_isomorphisms()?;
    if sys.context.omega_degree() < 0 {
        return Err(Error::HypothesisViolated(format!(
            "deg Ω¹ = {} must be nonnegative",
            sys.context.omega_degree()
        )));
    }
    Ok(())
}

/// Semistability verdict from component flags.
///
/// * every `E_i` flagged semistable ⇒ semistable;
/// * characteristic 0, `Ω¹` semistable, `E_0` flagged unstable and a
///   destabilizing subsheaf of `E_0` supplied ⇒ not semistable, certified by
///   the transported profile.
///
/// Anything else is `Unknown`.
pub fn criterion_semistable(sys: &HodgeSystem) -> Result<Verdict> {
    check_semistable_hypotheses(sys)?;
    if sys.components.iter().all(BundleData::is_flagged_semistable) {
        return Ok(Verdict::new(Answer::Yes, Answer::Unknown, None, PROV_SEMISTABLE_COMPONENTS));
    }
    let ctx = &sys.context;
    let e0 = &sys.components[0];
    if ctx.characteristic() == 0 && ctx.omega_semistable() && e0.semistable_flag() == Some(false) {
        if let Some(f0) = sys.e0_subsheaf.as_ref().filter(|f0| slope(f0) > slope(e0)) {
            let profile = transport_subsystem(sys, f0)?;
            let cert = Certificate::new(profile, total_slope(sys));
            debug_assert!(cert.destabilizes());
            return Ok(Verdict::unstable(cert, PROV_CHAR0_CONVERSE));
        }
    }
    Ok(Verdict::unknown(PROV_INCONCLUSIVE))
}

/// Stability verdict from component flags; requires `deg Ω¹ > 0`.
///
/// * every `E_i` flagged stable ⇒ stable;
/// * characteristic 0 on a curve with some `E_p` flagged not stable ⇒ not
///   stable, certified when an equal-slope subsheaf of `E_0` is supplied.
///
/// The semistable field is taken from [`criterion_semistable`].
pub fn criterion_stable(sys: &HodgeSystem) -> Result<Verdict> {
    sys.require_isomorphisms()?;
    if sys.context.omega_degree() <= 0 {
        return Err(Error::HypothesisViolated(format!(
            "deg Ω¹ = {} must be positive",
            sys.context.omega_degree()
        )));
    }
    if sys.components.iter().all(BundleData::is_flagged_stable) {
        return Ok(Verdict::new(Answer::Yes, Answer::Yes, None, PROV_STABLE_COMPONENTS));
    }
    let semistable = criterion_semistable(sys)?;
    if semistable.semistable == Answer::No {
        return Ok(semistable);
    }
    let ctx = &sys.context;
    let some_unstable = sys
        .components
        .iter()
        .any(|c| c.stable_flag() == Some(false) || c.semistable_flag() == Some(false));
    if ctx.characteristic() == 0 && ctx.dim() == 1 && some_unstable {
        let e0 = &sys.components[0];
        let certificate = match sys.e0_subsheaf.as_ref().filter(|f0| slope(f0) == slope(e0)) {
            Some(g0) => Some(Certificate::new(transport_subsystem(sys, g0)?, total_slope(sys))),
            None => None,
        };
        return Ok(Verdict::new(semistable.semistable, Answer::No, certificate, PROV_CURVE_CONVERSE));
    }
    Ok(Verdict::new(semistable.semistable, Answer::Unknown, None, semistable.provenance))
}

/// Everything the criteria can say about `sys`: [`criterion_stable`] when
/// `deg Ω¹ > 0`, otherwise [`criterion_semistable`].
pub fn criteria_verdict(sys: &HodgeSystem) -> Result<Verdict> {
    if sys.context.omega_degree() > 0 {
        criterion_stable(sys)
    } else {
        criterion_semistable(sys)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx(d: u64, w: i64) -> GeometricContext {
        GeometricContext::new(0, d, w, true, true).unwrap()
    }

    fn b(r: u64, d: i64) -> BundleData {
        BundleData::new(r, d).unwrap()
    }

    fn degrees(sys: &HodgeSystem) -> Vec<i64> {
        sys.components().iter().map(BundleData::degree).collect()
    }

    fn ranks(sys: &HodgeSystem) -> Vec<u64> {
        sys.components().iter().map(BundleData::rank).collect()
    }

    /// Strictly semistable tower on a genus-2 curve.
    fn strictly_semistable_g2() -> HodgeSystem {
        let c = GeometricContext::curve(0, 2).unwrap();
        derive_components(&BundleData::strictly_semistable(2, -2).unwrap(), &c, 1).unwrap()
    }

    #[test]
    fn derive_examples() {
        let s = derive_components(&b(1, 0), &ctx(1, 2), 3).unwrap();
        assert_eq!(degrees(&s), vec![0, 2, 4, 6]);
        assert_eq!(ranks(&s), vec![1, 1, 1, 1]);

        let s = derive_components(&b(3, 5), &ctx(2, 7), 0).unwrap();
        assert_eq!(s.components(), &[b(3, 5)]);

        let s = strictly_semistable_g2();
        assert_eq!(ranks(&s), vec![2, 2]);
        assert_eq!(degrees(&s), vec![-2, 2]);
    }

    #[test]
    fn derive_higher_dimension() {
        // d = 2, deg Ω¹ = 3, E_0 = (1, 1): E_1 = (2, 3 + 2), E_2 = (4, 2·2·3 + 4).
        let s = derive_components(&b(1, 1), &ctx(2, 3), 2).unwrap();
        assert_eq!(ranks(&s), vec![1, 2, 4]);
        assert_eq!(degrees(&s), vec![1, 5, 16]);
    }

    #[test]
    fn flag_propagation() {
        let base = BundleData::stable(2, 1).unwrap();
        let curve = derive_components(&base, &GeometricContext::curve(0, 3).unwrap(), 2).unwrap();
        assert!(curve.components().iter().all(BundleData::is_flagged_stable));

        let surface = derive_components(&base, &ctx(2, 4), 1).unwrap();
        assert!(surface.components()[1].is_flagged_semistable());
        assert_eq!(surface.components()[1].stable_flag(), None);

        let unstable_omega = GeometricContext::new(0, 2, 4, false, false).unwrap();
        let s = derive_components(&base, &unstable_omega, 1).unwrap();
        assert_eq!(s.components()[1].semistable_flag(), None);

        let char_p = GeometricContext::new(3, 2, 4, true, false).unwrap();
        let s = derive_components(&base, &char_p, 1).unwrap();
        assert_eq!(s.components()[1].semistable_flag(), None);
    }

    #[test]
    fn construction_rejects_inconsistent_tower() {
        let err = HodgeSystem::new(ctx(1, 2), vec![b(1, 0), b(1, 1)], ThetaMode::Isomorphisms).unwrap_err();
        assert!(matches!(err, Error::InconsistentComponent { index: 1, expected_degree: 2, .. }));
        let err = HodgeSystem::new(ctx(2, 2), vec![b(1, 0), b(1, 2)], ThetaMode::Isomorphisms).unwrap_err();
        assert!(matches!(err, Error::InconsistentComponent { expected_rank: 2, .. }));
        // The same data is fine when θ is only declared.
        assert!(HodgeSystem::new(ctx(1, 2), vec![b(1, 0), b(1, 1)], ThetaMode::Declared(vec![])).is_ok());
    }

    #[test]
    fn partial_slope_examples() {
        let s = derive_components(&b(1, 0), &ctx(1, 2), 3).unwrap();
        assert_eq!(partial_slope(&s, 1).unwrap(), 1);
        assert_eq!(partial_slope(&s, 0).unwrap(), 0);
        assert_eq!(partial_slope(&strictly_semistable_g2(), 1).unwrap(), 0);
        assert!(matches!(partial_slope(&s, 4), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn total_slope_examples() {
        assert_eq!(total_slope(&strictly_semistable_g2()), 0);
        let single = derive_components(&b(3, 5), &ctx(1, 2), 0).unwrap();
        assert_eq!(total_slope(&single), Rational::new(5, 3));
        let declared = HodgeSystem::new(ctx(1, 2), vec![b(1, 3), b(2, 1)], ThetaMode::Declared(vec![])).unwrap();
        assert_eq!(total_slope(&declared), Rational::new(4, 3));
    }

    #[test]
    fn transport_examples() {
        let s = strictly_semistable_g2();
        let full = transport_subsystem(&s, &s.components()[0].clone()).unwrap();
        assert_eq!(full.entries(), &[(2, -2), (2, 2)]);
        assert_eq!(full.slope(), total_slope(&s));

        let p = transport_subsystem(&s, &b(1, 0)).unwrap();
        assert_eq!(p.entries(), &[(1, 0), (1, 2)]);
        assert_eq!(p.slope(), 1);

        let flat = derive_components(&b(2, 0), &ctx(1, 0), 1).unwrap();
        let p = transport_subsystem(&flat, &b(1, 1)).unwrap();
        assert_eq!(p.entries(), &[(1, 1), (1, 1)]);
        assert_eq!(p.slope(), 1);

        assert!(matches!(
            transport_subsystem(&s, &b(3, 0)),
            Err(Error::SubRankOutOfRange { .. })
        ));
    }

    #[test]
    fn criterion_semistable_examples() {
        let v = criterion_semistable(&strictly_semistable_g2()).unwrap();
        assert_eq!(v.semistable, Answer::Yes);
        assert_eq!(v.provenance, PROV_SEMISTABLE_COMPONENTS);

        let single = derive_components(&BundleData::semistable(3, 1).unwrap(), &ctx(1, 2), 0).unwrap();
        assert_eq!(criterion_semistable(&single).unwrap().semistable, Answer::Yes);

        // E_0 = (2,1) unstable with destabilizer (1,1), d = 1, deg Ω¹ = 2.
        let e0 = BundleData::with_flags(2, 1, Some(false), Some(false)).unwrap();
        let s = derive_components(&e0, &ctx(1, 2), 1)
            .unwrap()
            .with_e0_subsheaf(Some(b(1, 1)))
            .unwrap();
        let v = criterion_semistable(&s).unwrap();
        assert_eq!(v.semistable, Answer::No);
        assert_eq!(v.stable, Answer::No);
        let cert = v.certificate.as_ref().unwrap();
        assert_eq!(cert.profile.entries(), &[(1, 1), (1, 3)]);
        assert_eq!(cert.slope, 2);
        assert_eq!(cert.mu_total, Rational::new(3, 2));
        assert!(v.is_well_formed());
    }

    #[test]
    fn criterion_semistable_unknown_paths() {
        let e0 = BundleData::with_flags(2, 1, Some(false), None).unwrap();
        // No destabilizing datum supplied.
        let s = derive_components(&e0, &ctx(1, 2), 1).unwrap();
        assert_eq!(criterion_semistable(&s).unwrap().semistable, Answer::Unknown);
        // Positive characteristic: the converse is not available.
        let cp = GeometricContext::new(5, 1, 2, true, true).unwrap();
        let s = derive_components(&e0, &cp, 1).unwrap().with_e0_subsheaf(Some(b(1, 1))).unwrap();
        assert_eq!(criterion_semistable(&s).unwrap().semistable, Answer::Unknown);
        // Unflagged components.
        let s = derive_components(&b(2, 1), &ctx(1, 2), 1).unwrap();
        assert_eq!(criterion_semistable(&s).unwrap(), Verdict::unknown(PROV_INCONCLUSIVE));
    }

    #[test]
    fn criterion_errors() {
        let neg = GeometricContext::new(0, 1, -2, true, true).unwrap();
        let s = derive_components(&BundleData::semistable(1, 0).unwrap(), &neg, 1).unwrap();
        let err = criterion_semistable(&s).unwrap_err();
        assert!(err.to_string().starts_with("hypothesis violated"));
        let declared = HodgeSystem::new(ctx(1, 2), vec![b(1, 0)], ThetaMode::Declared(vec![])).unwrap();
        assert!(criterion_semistable(&declared).is_err());
        let flat = derive_components(&BundleData::stable(1, 0).unwrap(), &ctx(1, 0), 1).unwrap();
        assert!(matches!(criterion_stable(&flat), Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn criterion_stable_examples() {
        let all_stable = derive_components(&BundleData::stable(2, 1).unwrap(), &ctx(1, 2), 2).unwrap();
        let v = criterion_stable(&all_stable).unwrap();
        assert_eq!((v.semistable, v.stable), (Answer::Yes, Answer::Yes));

        let s = strictly_semistable_g2();
        let v = criterion_stable(&s).unwrap();
        assert_eq!((v.semistable, v.stable), (Answer::Yes, Answer::No));
        assert!(v.certificate.is_none());
        let s = s.with_e0_subsheaf(Some(b(1, -1))).unwrap();
        let v = criterion_stable(&s).unwrap();
        let cert = v.certificate.unwrap();
        assert_eq!(cert.profile.entries(), &[(1, -1), (1, 1)]);
        assert_eq!(cert.gap(), 0);

        let single = derive_components(&BundleData::stable(3, 1).unwrap(), &ctx(1, 2), 0).unwrap();
        assert_eq!(criterion_stable(&single).unwrap().stable, Answer::Yes);

        // Surfaces: no converse.
        let surf = derive_components(&BundleData::strictly_semistable(2, 0).unwrap(), &ctx(2, 2), 1).unwrap();
        assert_eq!(criterion_stable(&surf).unwrap().stable, Answer::Unknown);
    }

    #[test]
    fn e0_subsheaf_must_be_proper() {
        let s = strictly_semistable_g2();
        assert!(s.clone().with_e0_subsheaf(Some(b(2, -2))).is_err());
        assert!(s.with_e0_subsheaf(Some(b(1, -1))).is_ok());
    }

    #[test]
    fn system_json_round_trip() {
        let s = strictly_semistable_g2().with_e0_subsheaf(Some(b(1, -1))).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.contains(r#""theta":"isomorphisms""#));
        let back: HodgeSystem = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);

        let declared = HodgeSystem::new(
            ctx(1, 2),
            vec![b(1, 4), b(1, -4)],
            ThetaMode::Declared(vec![SubsystemProfile::new(vec![(1, 4)]).unwrap()]),
        )
        .unwrap();
        let json = serde_json::to_string(&declared).unwrap();
        assert!(json.contains(r#""theta":{"declared":[[[1,4]]]}"#));
        assert_eq!(serde_json::from_str::<HodgeSystem>(&json).unwrap(), declared);

        let bad = r#"{"context":{"characteristic":0,"dim":1,"omega_degree":2,"omega_semistable":true,"omega_stable":true},
                      "components":[{"rank":1,"degree":0},{"rank":1,"degree":1}],"theta":"isomorphisms"}"#;
        assert!(serde_json::from_str::<HodgeSystem>(bad).is_err());
    }

    proptest! {
        #[test]
        fn closed_form_matches_direct_sum(r0 in 1u64..4, e0 in -6i64..6, d in 1u64..4, w in -3i64..6, n in 0usize..5) {
            let s = derive_components(&b(r0, e0), &ctx(d, w), n).unwrap();
            for k in 0..=n {
                let direct = slope(&direct_sum(&s.components()[..=k]).unwrap());
                prop_assert_eq!(partial_slope(&s, k).unwrap(), direct);
            }
            prop_assert_eq!(partial_slope(&s, n).unwrap(), total_slope(&s));
        }

        #[test]
        fn partial_slopes_increase(r0 in 1u64..4, e0 in -6i64..6, d in 1u64..4, w in 0i64..6, n in 0usize..6) {
            let s = derive_components(&b(r0, e0), &ctx(d, w), n).unwrap();
            let slopes: Vec<Rational> = (0..=n).map(|k| partial_slope(&s, k).unwrap()).collect();
            for pair in slopes.windows(2) {
                if w > 0 {
                    prop_assert!(pair[0] < pair[1]);
                } else {
                    prop_assert!(pair[0] <= pair[1]);
                }
            }
            prop_assert!(slopes.iter().all(|x| x <= &total_slope(&s)));
        }

        #[test]
        fn transport_shifts_slope_exactly(r0 in 1u64..5, e0 in -6i64..6, d in 1u64..3, w in -2i64..5, n in 0usize..4,
                                          fr in 1u64..5, fd in -10i64..10) {
            prop_assume!(fr <= r0);
            let s = derive_components(&b(r0, e0), &ctx(d, w), n).unwrap();
            let f0 = b(fr, fd);
            let p = transport_subsystem(&s, &f0).unwrap();
            prop_assert_eq!(p.slope() - total_slope(&s), slope(&f0) - slope(&b(r0, e0)));
        }
    }
}
