//! Witness generators: for `w ≠ 1` in a purely infinite system, find `s ∈ S`
//! with `w⁻¹sw ∉ S` and `l(sw) > l(w)`.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::coxeter::{CoxeterError, CoxeterSystem, Element};
use crate::par::{self, Execution};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("the identity has no witness")]
    Identity,
    #[error("system is not purely infinite (component {component} is {class})")]
    NotPurelyInfinite { component: usize, class: String },
    #[error("system must be irreducible and infinite")]
    NotIrreducibleInfinite,
    #[error("soundness violation: {0}")]
    Soundness(String),
    #[error(transparent)]
    Engine(#[from] CoxeterError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessPath {
    ComponentReduction,
    Lemma4FastPath,
    ExhaustiveSearch,
}

impl fmt::Display for WitnessPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WitnessPath::ComponentReduction => "component-reduction",
            WitnessPath::Lemma4FastPath => "lemma4-fast-path",
            WitnessPath::ExhaustiveSearch => "exhaustive-search",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessResult {
    pub generator: usize,
    pub path: WitnessPath,
    /// `l(w)`
    pub length_w: usize,
    /// `l(sw)`
    pub length_sw: usize,
    /// `w⁻¹sw`
    pub conjugate: Element,
}

impl WitnessResult {
    /// Both conditions hold: `l(sw) > l(w)` and `w⁻¹sw ∉ S`.
    pub fn certified(&self) -> bool {
        self.length_sw > self.length_w && self.conjugate.len() != 1
    }
}

/// Checks both witness conditions for `s` against `w` with the word engine.
pub fn certify(sys: &CoxeterSystem, w: &Element, s: usize, path: WitnessPath) -> Result<WitnessResult, CoxeterError> {
    let sw = sys.gen_mul(s, w)?;
    let conjugate = sys.conjugate_by(w, s)?;
    Ok(WitnessResult {
        generator: s,
        path,
        length_w: w.len(),
        length_sw: sw.len(),
        conjugate,
    })
}

/// Finds a witness generator, following the reduction to an irreducible
/// factor, then the support shortcut, then an ordered exhaustive search.
pub fn find_witness(sys: &CoxeterSystem, w: &Element) -> Result<WitnessResult, WitnessError> {
    if w.is_identity() {
        return Err(WitnessError::Identity);
    }
    if let Some(component) = sys.component_classes().iter().position(|c| c.is_finite()) {
        return Err(WitnessError::NotPurelyInfinite {
            component,
            class: sys.component_classes()[component].to_string(),
        });
    }

    let (generator, path) = if sys.is_irreducible() {
        irreducible_witness(sys, w)?
    } else {
        // The first factor in which w has a nontrivial component.
        let comp = sys
            .components()
            .iter()
            .find(|c| w.word().iter().any(|s| c.contains(s)))
            .expect("nontrivial element touches some component");
        let sub = sys.restrict(comp);
        let local: Vec<usize> = w
            .word()
            .iter()
            .filter_map(|s| comp.iter().position(|g| g == s))
            .collect();
        let w1 = sub.reduce_letters(&local)?;
        let (s, _) = irreducible_witness(&sub, &w1)?;
        (comp[s], WitnessPath::ComponentReduction)
    };

    let result = certify(sys, w, generator, path)?;
    if !result.certified() {
        return Err(WitnessError::Soundness(format!(
            "generator {} failed certification for w = {}",
            sys.labels()[generator],
            sys.format(w)
        )));
    }
    Ok(result)
}

fn irreducible_witness(sys: &CoxeterSystem, w: &Element) -> Result<(usize, WitnessPath), WitnessError> {
    if let Some(s) = lemma4_fast_path(sys, w)? {
        return Ok((s, WitnessPath::Lemma4FastPath));
    }
    for s in 0..sys.rank() {
        if certify(sys, w, s, WitnessPath::ExhaustiveSearch)?.certified() {
            return Ok((s, WitnessPath::ExhaustiveSearch));
        }
    }
    Err(WitnessError::Soundness(format!(
        "no generator satisfies both conditions for w = {}",
        sys.format(w)
    )))
}

/// When `S(w) ≠ S`, returns the first generator outside the support that is
/// joined by a diagram edge to the support. Both conditions are re-verified.
pub fn lemma4_fast_path(sys: &CoxeterSystem, w: &Element) -> Result<Option<usize>, WitnessError> {
    if w.is_identity() {
        return Err(WitnessError::Identity);
    }
    if !sys.is_irreducible() || sys.is_finite() {
        return Err(WitnessError::NotIrreducibleInfinite);
    }
    let support = sys.support(w);
    if support.len() == sys.rank() {
        return Ok(None);
    }
    let candidate = (0..sys.rank())
        .filter(|s| !support.contains(s))
        .find(|&s| support.iter().any(|&t| sys.order(s, t).is_edge()));
    let Some(s) = candidate else {
        return Err(WitnessError::Soundness(format!(
            "irreducible system has no generator adjacent to S(w) for w = {}",
            sys.format(w)
        )));
    };
    if !certify(sys, w, s, WitnessPath::Lemma4FastPath)?.certified() {
        return Err(WitnessError::Soundness(format!(
            "fast-path generator {} failed certification for w = {}",
            sys.labels()[s],
            sys.format(w)
        )));
    }
    Ok(Some(s))
}

/// Whether `wSw⁻¹ = S`.
pub fn normalizer_check(sys: &CoxeterSystem, w: &Element) -> Result<bool, CoxeterError> {
    let winv = sys.inverse(w);
    for s in 0..sys.rank() {
        // w s w⁻¹ = (w⁻¹)⁻¹ s (w⁻¹)
        if sys.conjugate_by(&winv, s)?.len() != 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepFailure {
    pub word: String,
    pub error: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub max_len: usize,
    pub checked: usize,
    pub certified: usize,
    pub failures: Vec<SweepFailure>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.certified == self.checked
    }
}

/// Runs [`find_witness`] on every element `w ≠ 1` with `l(w) ≤ max_len`.
pub fn completeness_sweep(sys: &CoxeterSystem, max_len: usize, exec: Execution) -> Result<SweepReport, CoxeterError> {
    let elements: Vec<Element> = sys
        .elements_up_to(max_len)?
        .into_iter()
        .filter(|w| !w.is_identity())
        .collect();
    let outcomes = par::map(exec, &elements, |w| match find_witness(sys, w) {
        Ok(r) if r.certified() => Ok(()),
        Ok(_) => Err("uncertified witness".to_owned()),
        Err(e) => Err(e.to_string()),
    });
    let failures: Vec<SweepFailure> = elements
        .iter()
        .zip(&outcomes)
        .filter_map(|(w, o)| {
            o.as_ref().err().map(|e| SweepFailure {
                word: sys.format(w),
                error: e.clone(),
            })
        })
        .collect();
    Ok(SweepReport {
        max_len,
        checked: elements.len(),
        certified: elements.len() - failures.len(),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{CoxeterMatrix, Order};

    fn el(sys: &CoxeterSystem, s: &str) -> Element {
        sys.reduce(&sys.parse_word(s).unwrap()).unwrap()
    }

    fn dinf_x_dinf() -> CoxeterSystem {
        let m = CoxeterMatrix::from_edges(&["s", "t", "u", "v"], &[(0, 1, Order::Infinite), (2, 3, Order::Infinite)]).unwrap();
        CoxeterSystem::new(m)
    }

    #[test]
    fn dinf_generator_witness() {
        let sys = CoxeterSystem::infinite_dihedral();
        let r = find_witness(&sys, &el(&sys, "s")).unwrap();
        assert_eq!(r.generator, 1);
        assert_eq!(r.length_sw, 2);
        assert_eq!(sys.format(&r.conjugate), "s t s");
    }

    #[test]
    fn product_uses_component_reduction() {
        let sys = dinf_x_dinf();
        let r = find_witness(&sys, &el(&sys, "s")).unwrap();
        assert_eq!(r.generator, 1);
        assert_eq!(r.path, WitnessPath::ComponentReduction);
        // Element living only in the second factor.
        let r = find_witness(&sys, &el(&sys, "v u")).unwrap();
        assert!(r.generator >= 2 && r.certified());
    }

    #[test]
    fn finite_system_rejected() {
        let a2 = CoxeterSystem::dihedral(Order::Finite(3));
        let e = find_witness(&a2, &el(&a2, "s")).unwrap_err();
        assert!(matches!(e, WitnessError::NotPurelyInfinite { .. }));
        let dinf = CoxeterSystem::infinite_dihedral();
        assert_eq!(find_witness(&dinf, &Element::identity()).unwrap_err(), WitnessError::Identity);
    }

    #[test]
    fn fast_path_examples() {
        let at2 = CoxeterSystem::affine_a2();
        assert_eq!(lemma4_fast_path(&at2, &el(&at2, "a b a")).unwrap(), Some(2));
        assert_eq!(lemma4_fast_path(&at2, &el(&at2, "a")).unwrap(), Some(1));
        let dinf = CoxeterSystem::infinite_dihedral();
        assert_eq!(lemma4_fast_path(&dinf, &el(&dinf, "s t")).unwrap(), None);
    }

    #[test]
    fn normalizer_examples() {
        let dinf = CoxeterSystem::infinite_dihedral();
        assert!(normalizer_check(&dinf, &Element::identity()).unwrap());
        assert!(!normalizer_check(&dinf, &el(&dinf, "s")).unwrap());
        let a1a1 = CoxeterSystem::dihedral(Order::Finite(2));
        assert!(normalizer_check(&a1a1, &el(&a1a1, "s")).unwrap());
    }

    #[test]
    fn normalizer_trivial_in_infinite_irreducible() {
        for sys in [CoxeterSystem::infinite_dihedral(), CoxeterSystem::affine_a2()] {
            for w in sys.elements_up_to(8).unwrap().into_iter().skip(1) {
                assert!(!normalizer_check(&sys, &w).unwrap(), "{}", sys.format(&w));
            }
        }
    }

    #[test]
    fn fast_path_agrees_with_exhaustive() {
        let at2 = CoxeterSystem::affine_a2();
        for w in at2.elements_up_to(6).unwrap().into_iter().skip(1) {
            if let Some(s) = lemma4_fast_path(&at2, &w).unwrap() {
                assert!(certify(&at2, &w, s, WitnessPath::ExhaustiveSearch).unwrap().certified());
            }
        }
    }
}
