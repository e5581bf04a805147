//! W-metric buildings: chamber systems with typed panels and a Weyl distance
//! `δ` valued in the Coxeter group.
//!
//! Four families are provided: the thin Coxeter complex ([`ThinBuilding`]),
//! the lazy regular tree ([`TreeBuilding`]), generalized polygons built from
//! incidence geometries ([`MgonBuilding`]) and the complete-flag building of
//! a symplectic space over F₂ ([`SymplecticBuilding`]).

use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::coxeter::{CoxeterError, CoxeterSystem, Element};

mod finite;
mod incidence;
mod symplectic;
mod thin;
mod tree;

pub use finite::{FiniteBuilding, ValidationReport, Violation};
pub use incidence::{IncidenceGeometry, IncidenceMap, MgonBuilding, PolygonParameters, Vertex};
pub use symplectic::{Subspace, SymplecticBuilding, SymplecticSpace};
pub use thin::{ThinBuilding, DEFAULT_THIN_RADIUS};
pub use tree::{TreeBuilding, TreeEdge};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildingError {
    #[error("chamber {0} lies outside the generated region")]
    OutsideRegion(String),
    #[error("chamber {0} does not exist")]
    UnknownChamber(String),
    #[error("chambers {0} and {1} are not connected by a gallery")]
    Unreachable(String, String),
    #[error("building is not spherical")]
    NonSpherical,
    #[error("not a generalized polygon: girth {girth}, diameter {diameter}")]
    NotPolygon { girth: usize, diameter: usize },
    #[error("enumeration cap exceeded: {count} chambers (cap {cap})")]
    EnumerationCap { count: u64, cap: u64 },
    #[error("invalid geometry: {0}")]
    Geometry(String),
    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("automorphism spec `{0}` does not apply to this building")]
    UnsupportedSpec(String),
    #[error("opposition criteria disagree on {0} and {1}")]
    CriteriaDisagree(String, String),
    #[error(transparent)]
    Engine(#[from] CoxeterError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Thin,
    Tree,
    Mgon,
    SymplecticFlags,
}

/// A chamber system with Weyl distance.
pub trait Building: Sync {
    type Chamber: Clone + Eq + Ord + Hash + Debug + Send + Sync;

    fn system(&self) -> &CoxeterSystem;
    fn family(&self) -> Family;
    fn base_chamber(&self) -> Self::Chamber;
    /// Whether the chamber set is finite (and so can be swept exhaustively).
    fn is_finite(&self) -> bool;
    /// Whether every panel is claimed to have at least three chambers.
    fn claims_thick(&self) -> bool;
    /// The `s`-panel of `c`, sorted, including `c`.
    fn panel(&self, c: &Self::Chamber, s: usize) -> Result<Vec<Self::Chamber>, BuildingError>;
    fn weyl_distance(&self, c: &Self::Chamber, d: &Self::Chamber) -> Result<Element, BuildingError>;
    /// Chambers within gallery distance `radius` of the base chamber (the
    /// tree uses address depth instead), sorted.
    fn chambers_within(&self, radius: usize) -> Result<Vec<Self::Chamber>, BuildingError>;
    /// Grows a lazily generated region so that `c` and its panels are inside it.
    fn expand_to(&self, _c: &Self::Chamber) {}
    fn label(&self, c: &Self::Chamber) -> String;
    fn make_automorphism(&self, spec: &AutomorphismSpec) -> Result<BuildingAutomorphism<Self::Chamber>, BuildingError>;

    /// Gallery distance `d(C, D) = l(δ(C, D))`.
    fn gallery_distance(&self, c: &Self::Chamber, d: &Self::Chamber) -> Result<usize, BuildingError> {
        self.weyl_distance(c, d).map(|w| w.len())
    }
}

/// Constructions accepted by [`Building::make_automorphism`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AutomorphismSpec {
    Identity,
    /// Swap the subtrees hanging below children `first` and `second` of the
    /// tree vertex addressed by `vertex`.
    SubtreeSwap { vertex: Vec<u8>, first: u8, second: u8 },
    /// Collineation or duality of an incidence geometry.
    Incidence(IncidenceMap),
    /// `U ↦ U^⊥` on the symplectic flag building.
    SymplecticPolarity,
    /// `C ↦ gC` on the thin building.
    LeftTranslation(Element),
}

impl AutomorphismSpec {
    pub fn name(&self) -> String {
        match self {
            AutomorphismSpec::Identity => "identity".into(),
            AutomorphismSpec::SubtreeSwap { vertex, first, second } => {
                format!("subtree-swap({vertex:?}, {first}, {second})")
            }
            AutomorphismSpec::Incidence(m) if m.duality => "incidence-duality".into(),
            AutomorphismSpec::Incidence(_) => "incidence-permutation".into(),
            AutomorphismSpec::SymplecticPolarity => "symplectic-polarity".into(),
            AutomorphismSpec::LeftTranslation(_) => "left-translation".into(),
        }
    }
}

/// A chamber map together with the diagram automorphism `σ` it induces.
#[derive(Clone)]
pub struct BuildingAutomorphism<C> {
    name: String,
    sigma: Vec<usize>,
    map: Arc<dyn Fn(&C) -> C + Send + Sync>,
}

impl<C> Debug for BuildingAutomorphism<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BuildingAutomorphism")
            .field("name", &self.name)
            .field("sigma", &self.sigma)
            .finish()
    }
}

impl<C> BuildingAutomorphism<C> {
    pub(crate) fn new(name: impl Into<String>, sigma: Vec<usize>, map: impl Fn(&C) -> C + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            sigma,
            map: Arc::new(map),
        }
    }

    pub fn apply(&self, c: &C) -> C {
        (self.map)(c)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn is_type_preserving(&self) -> bool {
        self.sigma.iter().enumerate().all(|(i, &s)| i == s)
    }
}

/// Whether `C` and `D` are opposite: `δ(C, D) = w₀`.
pub fn opposite<B: Building>(b: &B, c: &B::Chamber, d: &B::Chamber) -> Result<bool, BuildingError> {
    let sys = b.system();
    if !sys.is_finite() {
        return Err(BuildingError::NonSpherical);
    }
    Ok(b.weyl_distance(c, d)? == sys.longest_element()?)
}

/// Checks `δ(φC, φD) = σ(δ(C, D))` on the given pairs.
pub fn check_equivariance<B: Building>(
    b: &B,
    phi: &BuildingAutomorphism<B::Chamber>,
    pairs: &[(B::Chamber, B::Chamber)],
) -> Result<(), BuildingError> {
    let sys = b.system();
    for (c, d) in pairs {
        let (fc, fd) = (phi.apply(c), phi.apply(d));
        b.expand_to(&fc);
        b.expand_to(&fd);
        let lhs = b.weyl_distance(&fc, &fd)?;
        let rhs = sys.apply_permutation(phi.sigma(), &b.weyl_distance(c, d)?);
        if lhs != rhs {
            return Err(BuildingError::NotAutomorphism(format!(
                "δ(φC, φD) = {} but σ(δ(C, D)) = {} for C = {}, D = {}",
                sys.format(&lhs),
                sys.format(&rhs),
                b.label(c),
                b.label(d)
            )));
        }
    }
    Ok(())
}

/// `count` seeded random chamber pairs from the region of the given radius.
pub fn sample_pairs<B: Building>(b: &B, radius: usize, count: usize, seed: u64) -> Result<Vec<(B::Chamber, B::Chamber)>, BuildingError> {
    let pool = b.chambers_within(radius)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count)
        .map(|_| {
            let c = pool[rng.gen_range(0..pool.len())].clone();
            let d = pool[rng.gen_range(0..pool.len())].clone();
            (c, d)
        })
        .collect())
}

pub(crate) fn check_sigma(sys: &CoxeterSystem, sigma: &[usize]) -> Result<(), BuildingError> {
    if sys.is_diagram_automorphism(sigma) {
        Ok(())
    } else {
        Err(BuildingError::NotAutomorphism(format!(
            "{sigma:?} does not preserve the Coxeter matrix"
        )))
    }
}
