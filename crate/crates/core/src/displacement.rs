//! Displacement `d(C, φC)` of building automorphisms, the displacement
//! improvement step, unbounded-displacement traces and the rank-2 and
//! symplectic bounds.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::buildings::{
    AutomorphismSpec, Building, BuildingAutomorphism, BuildingError, MgonBuilding, SymplecticBuilding, ThinBuilding, Vertex,
};
use crate::coxeter::{CoxeterError, CoxeterSystem, Element};
use crate::par::{self, Execution};
use crate::witness;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DisplacementError {
    #[error("no generator s satisfies l(sw) > l(w) and w⁻¹sw ≠ σ(s) for w = {w}, σ = {sigma:?}")]
    NoGenerator { w: String, sigma: Vec<usize> },
    #[error("thickness violation: the {generator}-panel of {chamber} has {size} chambers")]
    Thickness { chamber: String, generator: String, size: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("soundness violation: {0}")]
    Soundness(String),
    #[error("automorphism does not match the expected shape: {0}")]
    SpecMismatch(String),
    #[error("m = {0} is odd")]
    OddM(usize),
    #[error("an infinite building needs an explicit radius")]
    RadiusRequired,
    #[error(transparent)]
    Building(#[from] BuildingError),
    #[error(transparent)]
    Engine(#[from] CoxeterError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scope {
    /// Every chamber was examined; `disp` is the supremum.
    Exhaustive,
    /// Only chambers within the radius were examined; `disp` is a lower bound.
    LowerBound { radius: usize },
    /// Chambers along an improvement trace.
    Trace,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DisplacementEntry {
    pub chamber: String,
    /// `δ(C, φC)`
    pub delta: String,
    pub displacement: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Lemma5Case {
    /// `l(wt) < l(w)`, `u = w`
    Shorter,
    /// `l(wt) > l(w)`, `u = wt`
    Longer,
}

/// Everything needed to recheck one improvement step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma5Certificate {
    pub chamber: String,
    pub next: String,
    pub w: String,
    pub s: String,
    pub t: String,
    pub u: String,
    pub case: Lemma5Case,
    /// How `s` was found: a witness path, or `hypothesis-search`.
    pub generator_source: String,
    pub avoided: Option<String>,
    pub before: usize,
    pub after: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct DisplacementReport {
    pub automorphism: String,
    pub scope: Scope,
    pub entries: Vec<DisplacementEntry>,
    pub disp: usize,
    /// `l(w₀)` when the building is spherical.
    pub diam: Option<usize>,
    pub equals_diam: Option<bool>,
    /// A chamber mapped to an opposite chamber, when one exists.
    pub opposite_witness: Option<(String, String)>,
    pub steps: Vec<Lemma5Certificate>,
}

impl DisplacementReport {
    pub fn values(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.displacement).collect()
    }

    /// Counts of chambers per displacement value.
    pub fn histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for e in &self.entries {
            *h.entry(e.displacement).or_insert(0) += 1;
        }
        h
    }

    pub fn strictly_increasing(&self) -> bool {
        self.entries.windows(2).all(|p| p[1].displacement > p[0].displacement)
    }
}

/// `d(C, φC) = l(δ(C, φC))`.
pub fn displacement<B: Building>(b: &B, phi: &BuildingAutomorphism<B::Chamber>, c: &B::Chamber) -> Result<usize, DisplacementError> {
    let image = phi.apply(c);
    b.expand_to(c);
    b.expand_to(&image);
    Ok(b.gallery_distance(c, &image)?)
}

fn entry<B: Building>(b: &B, phi: &BuildingAutomorphism<B::Chamber>, c: &B::Chamber) -> Result<DisplacementEntry, DisplacementError> {
    let image = phi.apply(c);
    b.expand_to(c);
    b.expand_to(&image);
    let w = b.weyl_distance(c, &image)?;
    Ok(DisplacementEntry {
        chamber: b.label(c),
        delta: b.system().format(&w),
        displacement: w.len(),
    })
}

fn diameter(sys: &CoxeterSystem) -> Result<Option<usize>, DisplacementError> {
    Ok(if sys.is_finite() { Some(sys.longest_element()?.len()) } else { None })
}

/// The displacement table of `φ`: over every chamber of a finite building,
/// or over the chambers within `radius` of an infinite one.
pub fn disp_sup<B: Building>(
    b: &B,
    phi: &BuildingAutomorphism<B::Chamber>,
    radius: Option<usize>,
    exec: Execution,
) -> Result<DisplacementReport, DisplacementError> {
    let (chambers, scope) = if b.is_finite() {
        (b.chambers_within(usize::MAX)?, Scope::Exhaustive)
    } else {
        let r = radius.ok_or(DisplacementError::RadiusRequired)?;
        (b.chambers_within(r)?, Scope::LowerBound { radius: r })
    };
    let entries: Vec<DisplacementEntry> = par::map(exec, &chambers, |c| entry(b, phi, c))
        .into_iter()
        .collect::<Result<_, _>>()?;
    let disp = entries.iter().map(|e| e.displacement).max().unwrap_or(0);
    let diam = if scope == Scope::Exhaustive { diameter(b.system())? } else { None };
    let opposite_witness = diam.and_then(|d| {
        entries
            .iter()
            .zip(&chambers)
            .find(|(e, _)| e.displacement == d)
            .map(|(e, c)| (e.chamber.clone(), b.label(&phi.apply(c))))
    });
    Ok(DisplacementReport {
        automorphism: phi.name().to_string(),
        scope,
        entries,
        disp,
        diam,
        equals_diam: diam.map(|d| d == disp),
        opposite_witness,
        steps: Vec::new(),
    })
}

/// Looks for `s` with `l(sw) > l(w)` and `w⁻¹sw ≠ σ(s)`.
fn choose_generator(sys: &CoxeterSystem, w: &Element, sigma: &[usize]) -> Result<Option<(usize, String)>, DisplacementError> {
    if !w.is_identity() && sys.is_purely_infinite() {
        match witness::find_witness(sys, w) {
            Ok(found) => return Ok(Some((found.generator, found.path.to_string()))),
            Err(e) => return Err(DisplacementError::Soundness(format!("witness search failed: {e}"))),
        }
    }
    for s in 0..sys.rank() {
        if sys.left_descent(s, w) {
            continue;
        }
        let conj = sys.conjugate_by(w, s)?;
        if conj != sys.generator_element(sigma[s]) {
            return Ok(Some((s, "hypothesis-search".into())));
        }
    }
    Ok(None)
}

/// One improvement step: a chamber `D` `s`-adjacent to `C` with
/// `d(D, φD) > d(C, φC)`, together with its certificate.
pub fn lemma5_step<B: Building>(
    b: &B,
    phi: &BuildingAutomorphism<B::Chamber>,
    c: &B::Chamber,
) -> Result<(B::Chamber, Lemma5Certificate), DisplacementError> {
    let sys = b.system();
    let sigma = phi.sigma();
    let fc = phi.apply(c);
    b.expand_to(c);
    b.expand_to(&fc);
    let w = b.weyl_distance(c, &fc)?;
    let (s, source) = choose_generator(sys, &w, sigma)?.ok_or_else(|| DisplacementError::NoGenerator {
        w: sys.format(&w),
        sigma: sigma.to_vec(),
    })?;
    let t = sigma[s];
    let panel = b.panel(c, s)?;
    if panel.len() < 3 {
        return Err(DisplacementError::Thickness {
            chamber: b.label(c),
            generator: sys.labels()[s].clone(),
            size: panel.len(),
        });
    }
    let wt = sys.mul_gen(&w, t)?;
    let (case, u, avoided) = if wt.len() < w.len() {
        let mut e0 = None;
        for e in b.panel(&fc, t)? {
            if b.weyl_distance(c, &e)? == wt {
                if e0.is_some() {
                    return Err(DisplacementError::Soundness(format!(
                        "two chambers t-adjacent to {} at distance {}",
                        b.label(&fc),
                        sys.format(&wt)
                    )));
                }
                e0 = Some(e);
            }
        }
        let e0 = e0.ok_or_else(|| DisplacementError::Soundness(format!("no projection of {} onto the t-panel", b.label(c))))?;
        (Lemma5Case::Shorter, w.clone(), Some(e0))
    } else {
        (Lemma5Case::Longer, wt, None)
    };
    let d = panel
        .into_iter()
        .find(|d| d != c && avoided.as_ref().is_none_or(|e0| phi.apply(d) != *e0))
        .ok_or_else(|| DisplacementError::Soundness("every panel chamber maps onto the avoided chamber".into()))?;
    let fd = phi.apply(&d);
    b.expand_to(&fd);
    let su = sys.gen_mul(s, &u)?;
    let delta = b.weyl_distance(&d, &fd)?;
    if delta != su || delta.len() <= w.len() {
        return Err(DisplacementError::Soundness(format!(
            "δ(D, φD) = {} but s·u = {} (d(C, φC) = {})",
            sys.format(&delta),
            sys.format(&su),
            w.len()
        )));
    }
    let cert = Lemma5Certificate {
        chamber: b.label(c),
        next: b.label(&d),
        w: sys.format(&w),
        s: sys.labels()[s].clone(),
        t: sys.labels()[t].clone(),
        u: sys.format(&u),
        case,
        generator_source: source,
        avoided: avoided.map(|e| b.label(&e)),
        before: w.len(),
        after: delta.len(),
    };
    Ok((d, cert))
}

/// Iterates the improvement step `k` times from `C0`.
pub fn displacement_trace<B: Building>(
    b: &B,
    phi: &BuildingAutomorphism<B::Chamber>,
    c0: &B::Chamber,
    k: usize,
) -> Result<DisplacementReport, DisplacementError> {
    if !b.system().is_purely_infinite() {
        return Err(DisplacementError::Precondition("the Coxeter system is not purely infinite".into()));
    }
    if phi.apply(c0) == *c0 {
        return Err(DisplacementError::Precondition(format!("φ fixes the start chamber {}", b.label(c0))));
    }
    let mut c = c0.clone();
    let mut entries = vec![entry(b, phi, &c)?];
    let mut steps = Vec::with_capacity(k);
    for i in 0..k {
        let (d, cert) = lemma5_step(b, phi, &c).map_err(|e| DisplacementError::Soundness(format!("step {}: {e}", i + 1)))?;
        entries.push(entry(b, phi, &d)?);
        steps.push(cert);
        c = d;
    }
    let disp = entries.iter().map(|e| e.displacement).max().unwrap_or(0);
    Ok(DisplacementReport {
        automorphism: phi.name().to_string(),
        scope: Scope::Trace,
        entries,
        disp,
        diam: None,
        equals_diam: None,
        opposite_witness: None,
        steps,
    })
}

fn is_trivial(phi: &BuildingAutomorphism<usize>, n: usize) -> bool {
    (0..n).all(|c| phi.apply(&c) == c)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParityCase {
    TypePreservingOddM,
    TypeReversingEvenM,
    /// Only `disp ≥ m − 1` is asserted.
    LowerBoundOnly,
}

#[derive(Clone, Debug, Serialize)]
pub struct Corollary3Report {
    pub automorphism: String,
    pub m: usize,
    pub type_preserving: bool,
    pub parity_case: ParityCase,
    pub disp: usize,
    pub histogram: BTreeMap<usize, usize>,
    pub lower_bound_holds: bool,
    pub equality_holds: Option<bool>,
    pub passed: bool,
}

/// Checks `disp φ ≥ m − 1`, and `disp φ = m` in the two parity cases.
pub fn corollary3_verify(b: &MgonBuilding, phi: &BuildingAutomorphism<usize>) -> Result<Corollary3Report, DisplacementError> {
    let n = b.finite().len();
    if is_trivial(phi, n) {
        return Err(DisplacementError::Precondition("φ is the identity".into()));
    }
    if !b.claims_thick() {
        return Err(DisplacementError::Precondition("the polygon is not thick".into()));
    }
    let m = b.m();
    let report = disp_sup(b, phi, None, Execution::default())?;
    let type_preserving = phi.is_type_preserving();
    let parity_case = match (type_preserving, m % 2 == 1) {
        (true, true) => ParityCase::TypePreservingOddM,
        (false, false) => ParityCase::TypeReversingEvenM,
        _ => ParityCase::LowerBoundOnly,
    };
    let lower_bound_holds = report.disp + 1 >= m;
    let equality_holds = (parity_case != ParityCase::LowerBoundOnly).then_some(report.disp == m);
    Ok(Corollary3Report {
        automorphism: phi.name().to_string(),
        m,
        type_preserving,
        parity_case,
        disp: report.disp,
        histogram: report.histogram(),
        lower_bound_holds,
        equality_holds,
        passed: lower_bound_holds && equality_holds != Some(false),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Remark5Report {
    pub automorphism: String,
    pub centre: String,
    pub m: usize,
    pub ball_radius: usize,
    pub ball_size: usize,
    pub other_type_vertices: usize,
    /// Largest `d(y, φy)` over vertices `y` of the other type.
    pub max_vertex_displacement: usize,
    pub bound: usize,
    pub trivial: bool,
    pub disp: usize,
    /// `m − 1` when `φ ≠ id`.
    pub concluded: Option<usize>,
    pub passed: bool,
}

/// The vertex map induced by a type-preserving flag automorphism.
fn vertex_map<'a>(b: &'a MgonBuilding, phi: &BuildingAutomorphism<usize>) -> impl Fn(Vertex) -> Vertex + 'a {
    let geom = b.geometry();
    let flags = geom.flags().to_vec();
    let images: Vec<(usize, usize)> = (0..flags.len()).map(|c| flags[phi.apply(&c)]).collect();
    move |v| match v {
        Vertex::Point(p) => {
            let c = flags.iter().position(|&(q, _)| q == p).expect("every point lies on a line");
            Vertex::Point(images[c].0)
        }
        Vertex::Line(l) => {
            let c = flags.iter().position(|&(_, k)| k == l).expect("every line has a point");
            Vertex::Line(images[c].1)
        }
    }
}

/// Checks that `φ` fixes `B(x, n)` pointwise, that every vertex of the other
/// type moves at most `2n − 2`, and that then `disp φ = m − 1` for `φ ≠ id`.
pub fn remark5_check(b: &MgonBuilding, phi: &BuildingAutomorphism<usize>, x: Vertex) -> Result<Remark5Report, DisplacementError> {
    let m = b.m();
    if m % 2 == 1 {
        return Err(DisplacementError::OddM(m));
    }
    if !phi.is_type_preserving() {
        return Err(DisplacementError::Precondition("φ is not type preserving".into()));
    }
    let n = m / 2;
    let geom = b.geometry();
    let image = vertex_map(b, phi);
    let ball = geom.vertex_ball(x, n);
    if let Some(&v) = ball.iter().find(|&&v| image(v) != v) {
        return Err(DisplacementError::SpecMismatch(format!(
            "vertex {} of B({}, {n}) is moved",
            geom.vertex_name(v),
            geom.vertex_name(x)
        )));
    }
    let others: Vec<Vertex> = geom.vertices().filter(|v| v.is_point() != x.is_point()).collect();
    let max_vertex_displacement = others.iter().map(|&y| geom.distance(y, image(y))).max().unwrap_or(0);
    let bound = 2 * n - 2;
    let trivial = is_trivial(phi, b.finite().len());
    let report = disp_sup(b, phi, None, Execution::default())?;
    let concluded = (!trivial).then_some(m - 1);
    let passed = max_vertex_displacement <= bound && concluded.is_none_or(|d| d == report.disp) && (!trivial || report.disp == 0);
    Ok(Remark5Report {
        automorphism: phi.name().to_string(),
        centre: geom.vertex_name(x).to_string(),
        m,
        ball_radius: n,
        ball_size: ball.len(),
        other_type_vertices: others.len(),
        max_vertex_displacement,
        bound,
        trivial,
        disp: report.disp,
        concluded,
        passed,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Example1Report {
    pub n: usize,
    pub chambers: usize,
    /// Chambers `C` with `δ(C, φC) = w₀`.
    pub opposite_by_weyl: usize,
    /// Chambers `C` with `U_i + U′_{2n−i} = V` for all `i`.
    pub opposite_by_subspaces: usize,
    /// Chambers with `U₁ ⊆ U₁^⊥`.
    pub containment_holds: usize,
    /// Chamber pairs on which the two opposition criteria disagree.
    pub criteria_disagreements: usize,
    pub diam: usize,
    pub max_displacement: usize,
    pub histogram: BTreeMap<usize, usize>,
    pub passed: bool,
}

/// The polarity `U ↦ U^⊥` of the symplectic flag building maps no chamber
/// to an opposite one.
pub fn example1_verify(n: usize, exec: Execution) -> Result<Example1Report, DisplacementError> {
    if n != 2 {
        return Err(DisplacementError::Precondition(format!("only n = 2 is supported, got {n}")));
    }
    let b = SymplecticBuilding::with_execution(n, exec)?;
    let phi = b.make_automorphism(&AutomorphismSpec::SymplecticPolarity)?;
    let chambers = b.finite().len();
    let report = disp_sup(&b, &phi, None, exec)?;
    let diam = report.diam.expect("spherical");
    let opposite_by_weyl = report.entries.iter().filter(|e| e.displacement == diam).count();
    let opposite_by_subspaces = (0..chambers).filter(|&c| b.subspace_opposite(c, phi.apply(&c))).count();
    let space = b.space();
    let containment_holds = (0..chambers)
        .filter(|&c| {
            let u1 = &b.flag(c)[0];
            u1.is_subspace_of(&space.perp(u1))
        })
        .count();
    let criteria_disagreements = b.opposition_disagreements(exec)?;
    let passed = opposite_by_weyl == 0
        && opposite_by_subspaces == 0
        && containment_holds == chambers
        && criteria_disagreements == 0
        && report.disp < diam;
    Ok(Example1Report {
        n,
        chambers,
        opposite_by_weyl,
        opposite_by_subspaces,
        containment_holds,
        criteria_disagreements,
        diam,
        max_displacement: report.disp,
        histogram: report.histogram(),
        passed,
    })
}

pub const THIN_DEMO_MAX_LEN: usize = 10;

#[derive(Clone, Debug, Serialize)]
pub struct Remark2Report {
    pub translation: String,
    pub examined: usize,
    pub values: Vec<usize>,
    pub constant: Option<usize>,
    pub moves_base_chamber: bool,
    /// Chambers at which the improvement step reported a thickness error.
    pub thickness_errors: usize,
    pub first_error: Option<String>,
    pub passed: bool,
}

/// Left translation by `st` on the thin D∞ building has constant
/// displacement 2, and the improvement step fails for lack of thickness.
pub fn remark2_demo() -> Result<Remark2Report, DisplacementError> {
    let sys = CoxeterSystem::infinite_dihedral();
    let st = sys.reduce(&sys.parse_word("s t")?)?;
    let b = ThinBuilding::new(sys.clone(), THIN_DEMO_MAX_LEN + 2 * st.len() + 4);
    let phi = b.make_automorphism(&AutomorphismSpec::LeftTranslation(st.clone()))?;
    let chambers = b.chambers_within(THIN_DEMO_MAX_LEN)?;
    let mut values = Vec::with_capacity(chambers.len());
    let mut thickness_errors = 0;
    let mut first_error = None;
    for c in &chambers {
        values.push(displacement(&b, &phi, c)?);
        match lemma5_step(&b, &phi, c) {
            Err(e @ DisplacementError::Thickness { .. }) => {
                thickness_errors += 1;
                first_error.get_or_insert_with(|| e.to_string());
            }
            Err(e) => return Err(e),
            Ok((d, _)) => {
                return Err(DisplacementError::Soundness(format!(
                    "improvement step succeeded on a thin building at {}",
                    b.label(&d)
                )))
            }
        }
    }
    let constant = values.first().copied().filter(|v| values.iter().all(|x| x == v));
    let moves_base_chamber = phi.apply(&b.base_chamber()) != b.base_chamber();
    Ok(Remark2Report {
        translation: sys.format(&st),
        examined: chambers.len(),
        constant,
        moves_base_chamber,
        thickness_errors,
        first_error,
        passed: constant == Some(2) && moves_base_chamber && thickness_errors == chambers.len(),
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::buildings::{IncidenceGeometry, TreeBuilding, TreeEdge};

    fn fano() -> MgonBuilding {
        MgonBuilding::new(IncidenceGeometry::fano()).unwrap()
    }

    #[test]
    fn identity_has_zero_displacement() {
        let b = fano();
        let id = b.make_automorphism(&AutomorphismSpec::Identity).unwrap();
        let r = disp_sup(&b, &id, None, Execution::Sequential).unwrap();
        assert_eq!(r.disp, 0);
        assert_eq!(r.equals_diam, Some(false));
        assert!(corollary3_verify(&b, &id).is_err());
    }

    #[test]
    fn fano_collineation_reaches_diameter() {
        let b = fano();
        // x ↦ 2x permutes the lines {i, i+1, i+3} of the cyclic model.
        let map = b.geometry().collineation_from_points((0..7).map(|p| (2 * p) % 7).collect()).unwrap();
        let phi = b.make_automorphism(&AutomorphismSpec::Incidence(map)).unwrap();
        let r = corollary3_verify(&b, &phi).unwrap();
        assert_eq!(r.parity_case, ParityCase::TypePreservingOddM);
        assert_eq!(r.disp, 3);
        assert!(r.passed);
        let sup = disp_sup(&b, &phi, None, Execution::Sequential).unwrap();
        assert!(sup.opposite_witness.is_some());
        for (c, e) in sup.entries.iter().enumerate() {
            assert_eq!(e.displacement, displacement(&b, &phi, &c).unwrap());
        }
    }

    #[test]
    fn step_at_full_displacement_has_no_generator() {
        let g = IncidenceGeometry::symplectic_quadrangle_f2();
        let b = MgonBuilding::new(g.clone()).unwrap();
        let duality = g.find_duality().unwrap();
        let phi = b.make_automorphism(&AutomorphismSpec::Incidence(duality)).unwrap();
        let sup = disp_sup(&b, &phi, None, Execution::Sequential).unwrap();
        assert_eq!(sup.disp, 4);
        let c = sup.entries.iter().position(|e| e.displacement == 4).unwrap();
        assert!(matches!(lemma5_step(&b, &phi, &c), Err(DisplacementError::NoGenerator { .. })));
    }

    #[test]
    fn steps_on_polygons_are_sound() {
        let g = IncidenceGeometry::symplectic_quadrangle_f2();
        let b = MgonBuilding::new(g.clone()).unwrap();
        let phi = b
            .make_automorphism(&AutomorphismSpec::Incidence(g.find_duality().unwrap()))
            .unwrap();
        for c in 0..b.finite().len() {
            match lemma5_step(&b, &phi, &c) {
                Ok((d, cert)) => {
                    assert!(cert.after > cert.before);
                    assert_eq!(displacement(&b, &phi, &d).unwrap(), cert.after);
                }
                Err(DisplacementError::NoGenerator { .. }) => {}
                Err(e) => panic!("{e}"),
            }
        }
    }

    #[test]
    fn tree_trace_increases() {
        let t = TreeBuilding::new(2, 4).unwrap();
        let phi = t
            .make_automorphism(&AutomorphismSpec::SubtreeSwap {
                vertex: vec![],
                first: 1,
                second: 2,
            })
            .unwrap();
        let r = displacement_trace(&t, &phi, &TreeEdge(vec![1]), 12).unwrap();
        assert_eq!(r.entries.len(), 13);
        assert!(r.strictly_increasing());
        let zero = displacement_trace(&t, &phi, &TreeEdge(vec![1, 1]), 0).unwrap();
        assert_eq!(zero.entries.len(), 1);
        assert!(matches!(
            displacement_trace(&t, &phi, &TreeEdge(vec![0]), 3),
            Err(DisplacementError::Precondition(_))
        ));
    }

    #[test]
    fn thin_demo_reports_thickness() {
        let r = remark2_demo().unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.examined, 21);
    }

    #[test]
    fn symplectic_polarity_has_no_opposites() {
        let r = example1_verify(2, Execution::default()).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.chambers, 315);
        assert!(example1_verify(3, Execution::default()).is_err());
    }

    #[test]
    fn vertex_moves_on_quadrangle() {
        let g = IncidenceGeometry::symplectic_quadrangle_f2();
        let b = MgonBuilding::new(g).unwrap();
        let elation = b.symplectic_elation(0).unwrap();
        let phi = b.make_automorphism(&AutomorphismSpec::Incidence(elation)).unwrap();
        let r = remark5_check(&b, &phi, Vertex::Point(0)).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.disp, 3);
        assert!(r.max_vertex_displacement <= 2);
        // The elation does not fix the ball around a point off its centre's perp.
        let far = (0..15).find(|&p| b.geometry().distance(Vertex::Point(0), Vertex::Point(p)) == 4).unwrap();
        assert!(matches!(
            remark5_check(&b, &phi, Vertex::Point(far)),
            Err(DisplacementError::SpecMismatch(_))
        ));
        let id = b.make_automorphism(&AutomorphismSpec::Identity).unwrap();
        let r = remark5_check(&b, &id, Vertex::Line(0)).unwrap();
        assert!(r.passed && r.trivial && r.concluded.is_none());
        assert!(matches!(remark5_check(&fano(), &id, Vertex::Point(0)), Err(DisplacementError::OddM(3))));
    }
}
