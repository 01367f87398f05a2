//! Filtered bundles with a connection: Griffiths-transversal filtrations,
//! their graded Higgs bundles, generalized opers and semistability of the
//! pair `(E, ∇)`.
//!
//! The connection itself never appears. Transversality, `θ_∇ ∧ θ_∇ = 0`,
//! flatness and the isomorphism property of the graded maps are attested
//! by flags; only ranks and degrees are computed with.

use serde::{Deserialize, Serialize};

use crate::bundle::{direct_sum, BundleData, GeometricContext};
use crate::error::{Error, Result};
use crate::hn::HnProfile;
use crate::hodge::{criteria_verdict, tower_entry, HodgeSystem, ThetaMode};
use crate::verdict::{Answer, Verdict};

pub const PROV_GENERALIZED_OPER: &str = "generalized-oper";
pub const PROV_GRADED_TRANSFER: &str = "connection:graded-transfer";
pub const PROV_FLAT_CHAR0: &str = "connection:flat-char0";
pub const PROV_NO_THEOREM: &str = "connection:inconclusive";

/// Graded pieces `gr^i = F^i(E) / F^{i+1}(E)`, `i = 0..n−1`, of a filtration
/// of `E`, with the attestations the theorems consume.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawFiltration", into = "RawFiltration")]
pub struct GriffithsFiltration {
    context: GeometricContext,
    graded: Vec<BundleData>,
    transversal: bool,
    theta_squares_to_zero: bool,
    theta_iso: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFiltration {
    context: GeometricContext,
    graded: Vec<BundleData>,
    transversal: bool,
    theta_squares_to_zero: bool,
    theta_iso: bool,
}

impl TryFrom<RawFiltration> for GriffithsFiltration {
    type Error = Error;
    fn try_from(r: RawFiltration) -> Result<Self> {
        GriffithsFiltration::new(r.context, r.graded, r.transversal, r.theta_squares_to_zero, r.theta_iso)
    }
}

impl From<GriffithsFiltration> for RawFiltration {
    fn from(f: GriffithsFiltration) -> Self {
        RawFiltration {
            context: f.context,
            graded: f.graded,
            transversal: f.transversal,
            theta_squares_to_zero: f.theta_squares_to_zero,
            theta_iso: f.theta_iso,
        }
    }
}

impl GriffithsFiltration {
    /// When `theta_iso` is set, `gr^i ≅ gr^{i−1} ⊗ Ω¹` must hold numerically:
    /// `rk gr^i = d · rk gr^{i−1}` and
    /// `deg gr^i = d · deg gr^{i−1} + rk gr^{i−1} · deg Ω¹`.
    pub fn new(
        context: GeometricContext,
        graded: Vec<BundleData>,
        transversal: bool,
        theta_squares_to_zero: bool,
        theta_iso: bool,
    ) -> Result<Self> {
        if graded.is_empty() {
            return Err(Error::InvalidParameter("a filtration needs at least one graded piece".into()));
        }
        if theta_iso {
            for i in 1..graded.len() {
                let prev = &graded[i - 1];
                let (rank, degree) = tower_entry(prev.rank(), prev.degree(), &context, 1)?;
                let cur = &graded[i];
                if (cur.rank(), cur.degree()) != (rank, degree) {
                    return Err(Error::InconsistentComponent {
                        index: i,
                        expected_rank: rank,
                        expected_degree: degree,
                        rank: cur.rank(),
                        degree: cur.degree(),
                    });
                }
            }
        }
        Ok(GriffithsFiltration {
            context,
            graded,
            transversal,
            theta_squares_to_zero,
            theta_iso,
        })
    }

    pub fn context(&self) -> &GeometricContext {
        &self.context
    }

    pub fn graded(&self) -> &[BundleData] {
        &self.graded
    }

    pub fn transversal(&self) -> bool {
        self.transversal
    }

    pub fn theta_squares_to_zero(&self) -> bool {
        self.theta_squares_to_zero
    }

    pub fn theta_iso(&self) -> bool {
        self.theta_iso
    }

    /// `gr(F•(E))` as a plain bundle.
    pub fn graded_total(&self) -> BundleData {
        direct_sum(&self.graded).expect("graded pieces are nonempty")
    }
}

/// A bundle with a (not necessarily flat) connection and, optionally, a
/// filtration of it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPair", into = "RawPair")]
pub struct ConnectionPair {
    total: BundleData,
    flat: bool,
    characteristic: Option<u64>,
    filtration: Option<GriffithsFiltration>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPair {
    total: BundleData,
    flat: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    characteristic: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    filtration: Option<GriffithsFiltration>,
}

impl TryFrom<RawPair> for ConnectionPair {
    type Error = Error;
    fn try_from(r: RawPair) -> Result<Self> {
        ConnectionPair::new(r.total, r.flat, r.characteristic, r.filtration)
    }
}

impl From<ConnectionPair> for RawPair {
    fn from(p: ConnectionPair) -> Self {
        RawPair {
            total: p.total,
            flat: p.flat,
            characteristic: p.characteristic,
            filtration: p.filtration,
        }
    }
}

impl ConnectionPair {
    /// `characteristic` may be omitted when a filtration (whose context
    /// carries it) is present; if both are given they must agree.
    pub fn new(
        total: BundleData,
        flat: bool,
        characteristic: Option<u64>,
        filtration: Option<GriffithsFiltration>,
    ) -> Result<Self> {
        if let Some(f) = &filtration {
            let g = f.graded_total();
            if (g.rank(), g.degree()) != (total.rank(), total.degree()) {
                return Err(Error::InvalidParameter(format!(
                    "graded pieces sum to ({}, {}) but the bundle is ({}, {})",
                    g.rank(),
                    g.degree(),
                    total.rank(),
                    total.degree()
                )));
            }
            if let Some(c) = characteristic {
                if c != f.context.characteristic() {
                    return Err(Error::InvalidParameter(format!(
                        "characteristic {c} disagrees with the filtration context ({})",
                        f.context.characteristic()
                    )));
                }
            }
        }
        if let Some(c) = characteristic {
            // Reuse the context check for "0 or prime".
            GeometricContext::new(c, 1, 0, false, false)?;
        }
        Ok(ConnectionPair {
            total,
            flat,
            characteristic,
            filtration,
        })
    }

    pub fn total(&self) -> &BundleData {
        &self.total
    }

    pub fn flat(&self) -> bool {
        self.flat
    }

    pub fn filtration(&self) -> Option<&GriffithsFiltration> {
        self.filtration.as_ref()
    }

    pub fn characteristic(&self) -> Option<u64> {
        self.characteristic
            .or_else(|| self.filtration.as_ref().map(|f| f.context.characteristic()))
    }
}

/// `(gr(F•(E)), θ_∇)` as a system of Hodge bundles.
pub fn graded_of_filtration(f: &GriffithsFiltration) -> Result<HodgeSystem> {
    let mut missing = Vec::new();
    if !f.transversal {
        missing.push("filtration is not Griffiths transversal");
    }
    if !f.theta_squares_to_zero {
        missing.push("θ ∧ θ ≠ 0");
    }
    if !missing.is_empty() {
        return Err(Error::NotHiggsInducing(missing.join("; ")));
    }
    let theta = if f.theta_iso {
        ThetaMode::Isomorphisms
    } else {
        ThetaMode::Declared(Vec::new())
    };
    HodgeSystem::new(f.context.clone(), f.graded.clone(), theta)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OperCheck {
    pub generalized_oper: bool,
    /// Generalized oper whose graded pieces are all line bundles.
    pub classical_oper: bool,
    pub reasons: Vec<String>,
}

pub fn is_generalized_oper(f: &GriffithsFiltration) -> OperCheck {
    let mut reasons = Vec::new();
    if !f.transversal {
        reasons.push("filtration not Griffiths transversal".to_string());
    }
    if !f.theta_squares_to_zero {
        reasons.push("θ ∧ θ ≠ 0".to_string());
    }
    if !f.theta_iso {
        reasons.push("θ not isomorphism".to_string());
    }
    for (i, g) in f.graded.iter().enumerate() {
        if !g.is_flagged_semistable() {
            reasons.push(format!("gr^{i} not flagged semistable"));
        }
    }
    let generalized_oper = reasons.is_empty();
    OperCheck {
        generalized_oper,
        classical_oper: generalized_oper && f.graded.iter().all(|g| g.rank() == 1),
        reasons,
    }
}

/// Verdict on the graded Higgs bundle of a generalized oper; semistable
/// whenever `deg Ω¹ ≥ 0`.
pub fn oper_semistability(f: &GriffithsFiltration) -> Result<Verdict> {
    let check = is_generalized_oper(f);
    if !check.generalized_oper {
        return Err(Error::NotGeneralizedOper(check.reasons.join("; ")));
    }
    if f.context.omega_degree() < 0 {
        return Err(Error::HypothesisViolated(format!(
            "deg Ω¹ = {} must be nonnegative",
            f.context.omega_degree()
        )));
    }
    let v = criteria_verdict(&graded_of_filtration(f)?)?;
    debug_assert_eq!(v.semistable, Answer::Yes);
    Ok(Verdict {
        provenance: format!("{PROV_GENERALIZED_OPER} via {}", v.provenance),
        ..v
    })
}

/// Criterion verdict on the graded Higgs bundle when the filtration induces
/// one; `None` otherwise.
pub fn graded_verdict(f: &GriffithsFiltration) -> Result<Option<Verdict>> {
    let sys = match graded_of_filtration(f) {
        Ok(sys) => sys,
        Err(Error::NotHiggsInducing(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    if !sys.is_isomorphisms() || sys.context().omega_degree() < 0 {
        return Ok(Some(Verdict::unknown(crate::hodge::PROV_INCONCLUSIVE)));
    }
    criteria_verdict(&sys).map(Some)
}

/// Transfer (semi)stability from the graded Higgs bundle to `(E, ∇)`.
///
/// * graded semistable (resp. stable) ⇒ pair semistable (resp. stable);
/// * characteristic 0 and `∇` flat ⇒ pair semistable: every ∇-invariant
///   subsheaf carries a flat connection and so has degree 0.
///
/// `graded` is ignored when the pair carries no filtration.
pub fn connection_verdict(p: &ConnectionPair, graded: Option<&Verdict>) -> Verdict {
    let graded = graded.filter(|_| p.filtration.is_some());
    let graded_ss = graded.is_some_and(|v| v.semistable == Answer::Yes);
    let graded_st = graded.is_some_and(|v| v.stable == Answer::Yes);
    let stable = if graded_st { Answer::Yes } else { Answer::Unknown };
    if p.characteristic() == Some(0) && p.flat {
        return Verdict::new(Answer::Yes, stable, None, PROV_FLAT_CHAR0);
    }
    if graded_ss {
        return Verdict::new(Answer::Yes, stable, None, PROV_GRADED_TRANSFER);
    }
    Verdict::unknown(PROV_NO_THEOREM)
}

/// For a generalized oper with `deg Ω¹ > 0` the graded slopes strictly
/// increase with `i`, so the filtration is the HN filtration; its quotients
/// listed from the top slope down are the graded pieces in reverse.
pub fn oper_hn_profile(f: &GriffithsFiltration) -> Result<HnProfile> {
    let check = is_generalized_oper(f);
    if !check.generalized_oper {
        return Err(Error::NotGeneralizedOper(check.reasons.join("; ")));
    }
    if f.context.omega_degree() <= 0 {
        return Err(Error::HypothesisViolated(format!(
            "deg Ω¹ = {} must be positive",
            f.context.omega_degree()
        )));
    }
    HnProfile::new(f.graded.iter().rev().cloned().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::slope;
    use crate::hn::validate_hn;
    use crate::hodge::total_slope;

    fn ctx(c: u64, d: u64, w: i64) -> GeometricContext {
        GeometricContext::new(c, d, w, true, true).unwrap()
    }

    fn ss(r: u64, d: i64) -> BundleData {
        BundleData::semistable(r, d).unwrap()
    }

    fn filt(c: GeometricContext, graded: Vec<BundleData>) -> GriffithsFiltration {
        GriffithsFiltration::new(c, graded, true, true, true).unwrap()
    }

    #[test]
    fn graded_examples() {
        let f = filt(ctx(0, 1, 2), vec![ss(1, 0), ss(1, 2)]);
        let sys = graded_of_filtration(&f).unwrap();
        assert!(sys.is_isomorphisms());
        assert_eq!((sys.total().rank(), sys.total().degree()), (2, 2));

        let single = filt(ctx(0, 2, 5), vec![ss(3, 1)]);
        assert_eq!(graded_of_filtration(&single).unwrap().top(), 0);

        let err = GriffithsFiltration::new(ctx(0, 1, 2), vec![ss(1, 0), ss(1, 1)], true, true, true).unwrap_err();
        assert!(matches!(err, Error::InconsistentComponent { expected_degree: 2, .. }));
    }

    #[test]
    fn graded_requires_higgs_flags() {
        let f = GriffithsFiltration::new(ctx(0, 1, 2), vec![ss(1, 0)], true, false, true).unwrap();
        let err = graded_of_filtration(&f).unwrap_err();
        assert!(err.to_string().starts_with("not a Higgs-inducing filtration"));
        let f = GriffithsFiltration::new(ctx(0, 1, 2), vec![ss(1, 0)], false, true, true).unwrap();
        assert!(matches!(graded_of_filtration(&f), Err(Error::NotHiggsInducing(_))));
        // Without θ-isomorphisms the graded system is declared-only.
        let f = GriffithsFiltration::new(ctx(0, 1, 2), vec![ss(1, 0), ss(1, 1)], true, true, false).unwrap();
        assert!(!graded_of_filtration(&f).unwrap().is_isomorphisms());
    }

    #[test]
    fn oper_recognition() {
        let c = is_generalized_oper(&filt(ctx(0, 1, 2), vec![ss(1, -1), ss(1, 1), ss(1, 3)]));
        assert!(c.generalized_oper && c.classical_oper && c.reasons.is_empty());

        let f = GriffithsFiltration::new(ctx(0, 1, 2), vec![ss(1, 0), ss(1, 5)], true, true, false).unwrap();
        let c = is_generalized_oper(&f);
        assert!(!c.generalized_oper);
        assert_eq!(c.reasons, vec!["θ not isomorphism".to_string()]);

        let c = is_generalized_oper(&filt(ctx(0, 1, 1), vec![ss(2, 0), ss(2, 2)]));
        assert!(c.generalized_oper);
        assert!(!c.classical_oper);

        let unflagged = filt(ctx(0, 1, 1), vec![BundleData::new(2, 0).unwrap(), ss(2, 2)]);
        assert_eq!(is_generalized_oper(&unflagged).reasons, vec!["gr^0 not flagged semistable".to_string()]);
    }

    #[test]
    fn oper_semistability_examples() {
        let g2 = GeometricContext::curve(0, 2).unwrap();
        let f = filt(
            g2,
            vec![BundleData::strictly_semistable(2, -2).unwrap(), BundleData::strictly_semistable(2, 2).unwrap()],
        );
        assert_eq!(oper_semistability(&f).unwrap().semistable, Answer::Yes);

        let single = filt(ctx(0, 2, 0), vec![ss(2, 1)]);
        assert_eq!(oper_semistability(&single).unwrap().semistable, Answer::Yes);

        let tower = filt(ctx(0, 1, 2), vec![ss(1, 0), ss(1, 2), ss(1, 4)]);
        let v = oper_semistability(&tower).unwrap();
        assert_eq!(v.semistable, Answer::Yes);
        assert!(v.provenance.starts_with(PROV_GENERALIZED_OPER));
    }

    #[test]
    fn oper_semistability_errors() {
        let f = GriffithsFiltration::new(ctx(0, 1, 2), vec![ss(1, 0), ss(1, 2)], true, true, false).unwrap();
        let err = oper_semistability(&f).unwrap_err();
        assert!(err.to_string().contains("θ not isomorphism"));
        let neg = filt(ctx(0, 1, -2), vec![ss(1, 0), ss(1, -2)]);
        assert!(matches!(oper_semistability(&neg), Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn connection_examples() {
        let c0 = ConnectionPair::new(ss(2, 0), true, Some(0), None).unwrap();
        assert_eq!(connection_verdict(&c0, None).semistable, Answer::Yes);

        let f = filt(ctx(5, 1, 2), vec![ss(1, -1), ss(1, 1)]);
        let graded = graded_verdict(&f).unwrap().unwrap();
        assert_eq!(graded.semistable, Answer::Yes);
        let pair = ConnectionPair::new(BundleData::new(2, 0).unwrap(), false, None, Some(f)).unwrap();
        let v = connection_verdict(&pair, Some(&graded));
        assert_eq!(v.semistable, Answer::Yes);
        assert_eq!(v.provenance, PROV_GRADED_TRANSFER);

        let bare = ConnectionPair::new(ss(2, 0), true, Some(5), None).unwrap();
        assert_eq!(connection_verdict(&bare, Some(&graded)), Verdict::unknown(PROV_NO_THEOREM));
    }

    #[test]
    fn stable_graded_transfers_stability() {
        let f = filt(ctx(3, 1, 2), vec![BundleData::stable(2, 1).unwrap(), BundleData::stable(2, 5).unwrap()]);
        let graded = graded_verdict(&f).unwrap().unwrap();
        assert_eq!(graded.stable, Answer::Yes);
        let pair = ConnectionPair::new(BundleData::new(4, 6).unwrap(), false, None, Some(f)).unwrap();
        let v = connection_verdict(&pair, Some(&graded));
        assert_eq!((v.semistable, v.stable), (Answer::Yes, Answer::Yes));
    }

    #[test]
    fn pair_validation() {
        let f = filt(ctx(0, 1, 2), vec![ss(1, 0), ss(1, 2)]);
        assert!(ConnectionPair::new(BundleData::new(2, 3).unwrap(), true, None, Some(f.clone())).is_err());
        assert!(ConnectionPair::new(BundleData::new(2, 2).unwrap(), true, Some(7), Some(f.clone())).is_err());
        assert!(ConnectionPair::new(BundleData::new(2, 2).unwrap(), true, Some(4), None).is_err());
        let p = ConnectionPair::new(BundleData::new(2, 2).unwrap(), true, None, Some(f)).unwrap();
        assert_eq!(p.characteristic(), Some(0));
        let sys = graded_of_filtration(p.filtration().unwrap()).unwrap();
        assert_eq!(total_slope(&sys), slope(p.total()));
    }

    #[test]
    fn oper_filtration_is_hn() {
        let f = filt(ctx(0, 2, 1), vec![ss(1, 0), ss(2, 1), ss(4, 4)]);
        let hn = oper_hn_profile(&f).unwrap();
        assert!(validate_hn(&hn).valid);
        assert_eq!(hn.quotients()[0].rank(), 4);
        let flat = filt(ctx(0, 1, 0), vec![ss(1, 0), ss(1, 0)]);
        assert!(oper_hn_profile(&flat).is_err());
    }

    #[test]
    fn json_shapes() {
        let f = filt(ctx(0, 1, 2), vec![ss(1, 0), ss(1, 2)]);
        let p = ConnectionPair::new(BundleData::new(2, 2).unwrap(), true, None, Some(f)).unwrap();
        let json = serde_json::to_string(&p).unwrap();
        assert!(json.starts_with(r#"{"total":{"rank":2,"degree":2},"flat":true,"filtration":{"context""#));
        assert_eq!(serde_json::from_str::<ConnectionPair>(&json).unwrap(), p);
        let bad = json.replace(r#""degree":2},"flat""#, r#""degree":3},"flat""#);
        assert!(serde_json::from_str::<ConnectionPair>(&bad).is_err());
    }
}
