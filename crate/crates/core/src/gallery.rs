//! Worked examples on curves, each with the subobject that decides it and
//! the verdict it must produce.
//!
//! | family | θ | outcome |
//! |---|---|---|
//! | [`example_strictly_semistable`] | isomorphisms | semistable, not stable |
//! | [`example_surjective_not_iso`] | surjective, not injective | not semistable |
//! | [`example_injective_not_iso`] | injective, not surjective | not semistable |
//! | [`example_unstable_component`] | surjective, `E_1` unstable | not semistable |
//!
//! The families that produce a line subbundle through a nonzero section of
//! some `Hom` (e.g. "choose `deg L_0` large enough") are modeled only by the
//! resulting degrees; existence of the section is not checked.

use serde::Serialize;

use crate::bundle::{direct_sum, BundleData, GeometricContext};
use crate::error::{Error, Result};
use crate::hn::HnProfile;
use crate::hodge::{derive_components, total_slope, HodgeSystem, ThetaMode};
use crate::profile::SubsystemProfile;
use crate::search::{check_declared, verdict_from_search, SearchOptions};
use crate::verdict::{Answer, Certificate, Verdict};

pub const PROV_GALLERY: &str = "gallery";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GalleryEntry {
    pub name: String,
    pub system: HodgeSystem,
    pub declared_subobject: Option<SubsystemProfile>,
    pub expected: Verdict,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GalleryParams {
    pub g: Option<u64>,
    pub d: Option<i64>,
    pub d0: Option<i64>,
}

pub const FAMILIES: [&str; 4] = [
    "strictly-semistable",
    "surjective-not-iso",
    "injective-not-iso",
    "unstable-component",
];

fn profile(entries: Vec<(u64, i64)>) -> SubsystemProfile {
    SubsystemProfile::new(entries).expect("gallery profiles have positive ranks")
}

fn genus_at_least(g: u64, min: u64) -> Result<()> {
    if g < min {
        return Err(Error::InvalidParameter(format!("genus {g} must be at least {min}")));
    }
    Ok(())
}

fn positive_d0(d0: i64) -> Result<()> {
    if d0 < 1 {
        return Err(Error::InvalidParameter(format!("d0 = {d0} must be at least 1")));
    }
    Ok(())
}

fn canonical_degree(g: u64) -> i64 {
    2 * g as i64 - 2
}

fn declared_entry(name: String, context: GeometricContext, components: Vec<BundleData>, sub: SubsystemProfile) -> Result<GalleryEntry> {
    let system = HodgeSystem::new(context, components, ThetaMode::Declared(vec![sub.clone()]))?;
    let expected = Verdict::unstable(Certificate::new(sub.clone(), total_slope(&system)), PROV_GALLERY);
    Ok(GalleryEntry {
        name,
        system,
        declared_subobject: Some(sub),
        expected,
    })
}

/// `E_1 = Q ⊕ Q` with `deg Q = g − 1`, `E_0 = E_1 ⊗ K^{-1}`, θ the identity
/// `E_1 ≅ E_0 ⊗ K`. A line subbundle `L_1 ⊆ E_1` of degree `g − 1` and its
/// image `L_0 ⊆ E_0` give a subobject of slope `0 = μ(E)`.
pub fn example_strictly_semistable(g: u64) -> Result<GalleryEntry> {
    genus_at_least(g, 1)?;
    let half = g as i64 - 1;
    let context = GeometricContext::curve(0, g)?;
    let e0 = BundleData::strictly_semistable(2, -canonical_degree(g))?;
    let system = derive_components(&e0, &context, 1)?.with_e0_subsheaf(Some(BundleData::new(1, -half)?))?;
    let sub = profile(vec![(1, -half), (1, half)]);
    let expected = Verdict::new(
        Answer::Yes,
        Answer::No,
        Some(Certificate::new(sub.clone(), total_slope(&system))),
        PROV_GALLERY,
    );
    Ok(GalleryEntry {
        name: format!("strictly-semistable(g={g})"),
        system,
        declared_subobject: Some(sub),
        expected,
    })
}

/// `E_0 = L_0` of degree `d > 2g − 2`, `E_1` an extension of `L_0 ⊗ K` by
/// `O`, θ the quotient map. `L_0` is θ-invariant of slope `d > μ(E)`.
pub fn example_surjective_not_iso(g: u64, d_line: i64) -> Result<GalleryEntry> {
    genus_at_least(g, 2)?;
    if d_line <= canonical_degree(g) {
        return Err(Error::HypothesisViolated(format!(
            "hypothesis d > 2g−2 violated (d = {d_line}, 2g−2 = {})",
            canonical_degree(g)
        )));
    }
    let context = GeometricContext::curve(0, g)?;
    let components = vec![
        BundleData::stable(1, d_line)?,
        BundleData::semistable(2, d_line + canonical_degree(g))?,
    ];
    declared_entry(
        format!("surjective-not-iso(g={g},d={d_line})"),
        context,
        components,
        profile(vec![(1, d_line)]),
    )
}

/// `E = L_0 ⊕ L_0^∨` with a nonzero `θ_1 : L_0^∨ → L_0 ⊗ K`.
pub fn example_injective_not_iso(g: u64, d0: i64) -> Result<GalleryEntry> {
    genus_at_least(g, 2)?;
    positive_d0(d0)?;
    let context = GeometricContext::curve(0, g)?;
    let components = vec![BundleData::stable(1, d0)?, BundleData::stable(1, -d0)?];
    declared_entry(
        format!("injective-not-iso(g={g},d0={d0})"),
        context,
        components,
        profile(vec![(1, d0)]),
    )
}

fn unstable_component_lines(g: u64, d0: i64) -> (BundleData, BundleData) {
    let k = canonical_degree(g);
    let l1 = BundleData::stable(1, -2 * d0 - k).expect("rank one");
    let l2 = BundleData::stable(1, d0 + k).expect("rank one");
    (l1, l2)
}

/// `E_0 = L_0`, `E_1 = L_1 ⊕ L_0 ⊗ K` with `L_1 = (L_0^∨ ⊗ K^{-1/2})^{⊗2}`,
/// θ the projection onto the second summand. `E_1` is unstable.
pub fn example_unstable_component(g: u64, d0: i64) -> Result<GalleryEntry> {
    genus_at_least(g, 2)?;
    positive_d0(d0)?;
    let context = GeometricContext::curve(0, g)?;
    let (l1, l2) = unstable_component_lines(g, d0);
    let e1 = direct_sum(&[l1, l2])?;
    let components = vec![
        BundleData::stable(1, d0)?,
        e1.reflagged(Some(false), Some(false))?,
    ];
    declared_entry(
        format!("unstable-component(g={g},d0={d0})"),
        context,
        components,
        profile(vec![(1, d0)]),
    )
}

/// HN profile of `E_1` in [`example_unstable_component`]: `L_0 ⊗ K` over `L_1`.
pub fn unstable_component_hn(g: u64, d0: i64) -> Result<HnProfile> {
    genus_at_least(g, 2)?;
    positive_d0(d0)?;
    let (l1, l2) = unstable_component_lines(g, d0);
    HnProfile::new(vec![l2, l1])
}

/// Build a family member by name; missing parameters take the defaults
/// `g = 2`, `d = 3`, `d0 = 4` (injective) or `d0 = 1` (unstable component).
pub fn by_name(name: &str, params: GalleryParams) -> Result<GalleryEntry> {
    let g = params.g.unwrap_or(2);
    match name {
        "strictly-semistable" => example_strictly_semistable(g),
        "surjective-not-iso" => example_surjective_not_iso(g, params.d.unwrap_or(3)),
        "injective-not-iso" => example_injective_not_iso(g, params.d0.unwrap_or(4)),
        "unstable-component" => example_unstable_component(g, params.d0.unwrap_or(1)),
        other => Err(Error::InvalidParameter(format!(
            "unknown gallery entry `{other}` (expected one of {})",
            FAMILIES.join(", ")
        ))),
    }
}

/// The regression set: each family at its default point and two more.
pub fn full_gallery() -> Result<Vec<GalleryEntry>> {
    Ok(vec![
        example_strictly_semistable(2)?,
        example_strictly_semistable(1)?,
        example_strictly_semistable(3)?,
        example_surjective_not_iso(2, 3)?,
        example_surjective_not_iso(2, 5)?,
        example_surjective_not_iso(3, 5)?,
        example_injective_not_iso(2, 4)?,
        example_injective_not_iso(2, 1)?,
        example_injective_not_iso(5, 2)?,
        example_unstable_component(2, 1)?,
        example_unstable_component(2, 3)?,
        example_unstable_component(3, 2)?,
    ])
}

/// Verdict recomputed from the entry: the search oracle for isomorphism
/// systems, the declared-subobject check otherwise.
pub fn recompute(entry: &GalleryEntry, opts: &SearchOptions) -> Result<Verdict> {
    if entry.system.is_isomorphisms() {
        return verdict_from_search(&entry.system, opts);
    }
    let sub = entry
        .declared_subobject
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter(format!("{} has no declared subobject", entry.name)))?;
    check_declared(&entry.system, sub)
}

/// Same answers and, where present, certificates of the same slope against
/// the same `μ(E)`. Equal-slope profiles are interchangeable.
pub fn reproduces(expected: &Verdict, got: &Verdict) -> bool {
    expected.semistable == got.semistable
        && expected.stable == got.stable
        && match (&expected.certificate, &got.certificate) {
            (Some(a), Some(b)) => a.slope == b.slope && a.mu_total == b.mu_total,
            (None, None) => true,
            _ => false,
        }
}
