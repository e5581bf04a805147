use super::{check_equivariance, sample_pairs, AutomorphismSpec, Building, BuildingAutomorphism, BuildingError, Family};
use crate::coxeter::{CoxeterSystem, Element};

pub const DEFAULT_THIN_RADIUS: usize = 32;

/// The Coxeter complex of `(W, S)` viewed as a thin building: chambers are
/// group elements, `D` is `s`-adjacent to `C` iff `D = Cs`, and
/// `δ(C, D) = C⁻¹D`. Chambers are restricted to length at most `radius`.
#[derive(Clone, Debug)]
pub struct ThinBuilding {
    system: CoxeterSystem,
    radius: usize,
}

impl ThinBuilding {
    pub fn new(system: CoxeterSystem, radius: usize) -> Self {
        Self { system, radius }
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    fn check(&self, c: &Element) -> Result<(), BuildingError> {
        if c.len() > self.radius {
            Err(BuildingError::OutsideRegion(self.system.format(c)))
        } else {
            Ok(())
        }
    }
}

impl Building for ThinBuilding {
    type Chamber = Element;

    fn system(&self) -> &CoxeterSystem {
        &self.system
    }

    fn family(&self) -> Family {
        Family::Thin
    }

    fn base_chamber(&self) -> Element {
        Element::identity()
    }

    fn is_finite(&self) -> bool {
        self.system.is_finite()
    }

    fn claims_thick(&self) -> bool {
        false
    }

    fn panel(&self, c: &Element, s: usize) -> Result<Vec<Element>, BuildingError> {
        self.check(c)?;
        let mut p = vec![c.clone(), self.system.mul_gen(c, s)?];
        p.sort();
        Ok(p)
    }

    fn weyl_distance(&self, c: &Element, d: &Element) -> Result<Element, BuildingError> {
        self.check(c)?;
        self.check(d)?;
        Ok(self.system.mul(&self.system.inverse(c), d)?)
    }

    fn chambers_within(&self, radius: usize) -> Result<Vec<Element>, BuildingError> {
        let mut all = self.system.elements_up_to(radius.min(self.radius))?;
        all.sort();
        Ok(all)
    }

    fn label(&self, c: &Element) -> String {
        self.system.format(c)
    }

    fn make_automorphism(&self, spec: &AutomorphismSpec) -> Result<BuildingAutomorphism<Element>, BuildingError> {
        let g = match spec {
            AutomorphismSpec::Identity => Element::identity(),
            AutomorphismSpec::LeftTranslation(g) => g.clone(),
            other => return Err(BuildingError::UnsupportedSpec(other.name())),
        };
        let sys = self.system.clone();
        let identity: Vec<usize> = (0..sys.rank()).collect();
        let phi = BuildingAutomorphism::new(spec.name(), identity, move |c: &Element| {
            sys.mul(&g, c).expect("translate stays within the word cap")
        });
        let radius = (self.radius.saturating_sub(2 * spec_len(spec))).min(6);
        let pairs = sample_pairs(self, radius, 200, 0)?;
        check_equivariance(self, &phi, &pairs)?;
        Ok(phi)
    }
}

fn spec_len(spec: &AutomorphismSpec) -> usize {
    match spec {
        AutomorphismSpec::LeftTranslation(g) => g.len(),
        _ => 0,
    }
}
