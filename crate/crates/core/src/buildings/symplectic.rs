use std::collections::{BTreeSet, HashMap};

use super::finite::{delegate_finite, FiniteBuilding};
use super::{AutomorphismSpec, Building, BuildingAutomorphism, BuildingError, Family};
use crate::coxeter::CoxeterSystem;
use crate::par::{self, Execution};

/// Largest flag count we are willing to tabulate all-pairs distances for.
pub const FLAG_ENUMERATION_CAP: u64 = 20_000;

/// `F₂^{2n}` with the standard alternating form
/// `B(x, y) = Σᵢ xᵢ y_{n+i} + x_{n+i} yᵢ`. Vectors are bit masks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymplecticSpace {
    n: usize,
}

impl SymplecticSpace {
    pub fn new(n: usize) -> Self {
        assert!((1..=15).contains(&n), "half-dimension must be in 1..=15");
        Self { n }
    }

    pub fn half_dimension(&self) -> usize {
        self.n
    }

    pub fn dimension(&self) -> usize {
        2 * self.n
    }

    pub fn form(&self, x: u32, y: u32) -> u32 {
        let low = (1u32 << self.n) - 1;
        let a = (x & low) & (y >> self.n);
        let b = (x >> self.n) & (y & low);
        (a.count_ones() + b.count_ones()) & 1
    }

    pub fn vectors(&self) -> impl Iterator<Item = u32> {
        0..(1u32 << self.dimension())
    }

    pub fn whole(&self) -> Subspace {
        Subspace::span((0..self.dimension()).map(|i| 1u32 << i))
    }

    pub fn perp(&self, u: &Subspace) -> Subspace {
        Subspace::span(
            self.vectors()
                .filter(|&v| u.basis().iter().all(|&b| self.form(v, b) == 0)),
        )
    }

    /// Dimension of the radical of the form.
    pub fn radical_dimension(&self) -> usize {
        self.perp(&self.whole()).dim()
    }

    /// All subspaces of the given dimension.
    pub fn subspaces(&self, dim: usize) -> Vec<Subspace> {
        let mut layer: BTreeSet<Subspace> = BTreeSet::from([Subspace::zero()]);
        for _ in 0..dim {
            layer = layer.iter().flat_map(|u| self.covers(u)).collect();
        }
        layer.into_iter().collect()
    }

    /// Subspaces containing `u` with one more dimension.
    pub fn covers(&self, u: &Subspace) -> BTreeSet<Subspace> {
        self.vectors()
            .filter(|&v| !u.contains(v))
            .map(|v| u.with(v))
            .collect()
    }
}

/// A subspace of `F₂^d` in reduced row-echelon form: basis vectors sorted by
/// descending leading bit, each leading bit cleared from every other row.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    basis: Vec<u32>,
}

impl Subspace {
    pub fn zero() -> Self {
        Self { basis: Vec::new() }
    }

    pub fn span(vectors: impl IntoIterator<Item = u32>) -> Self {
        let mut basis: Vec<u32> = Vec::new();
        for v in vectors {
            let r = reduce_against(&basis, v);
            if r != 0 {
                let lead = 31 - r.leading_zeros();
                for b in basis.iter_mut() {
                    if *b >> lead & 1 == 1 {
                        *b ^= r;
                    }
                }
                basis.push(r);
            }
        }
        basis.sort_unstable_by(|a, b| b.cmp(a));
        Self { basis }
    }

    pub fn basis(&self) -> &[u32] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: u32) -> bool {
        reduce_against(&self.basis, v) == 0
    }

    pub fn with(&self, v: u32) -> Self {
        Self::span(self.basis.iter().copied().chain([v]))
    }

    pub fn sum(&self, other: &Self) -> Self {
        Self::span(self.basis.iter().chain(&other.basis).copied())
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.basis.iter().all(|&b| other.contains(b))
    }
}

fn reduce_against(basis: &[u32], mut v: u32) -> u32 {
    for &b in basis {
        let lead = 31 - b.leading_zeros();
        if v >> lead & 1 == 1 {
            v ^= b;
        }
    }
    v
}

/// Number of complete flags of `F₂^d`: `∏_{k=1}^{d} (2^k − 1)`.
pub fn flag_count(d: usize) -> u64 {
    (1..=d as u32).map(|k| (1u64 << k) - 1).product()
}

/// Complete flags `U₁ < … < U_{2n−1}` of the symplectic space over F₂.
/// Generator `s_i` changes `U_i` only.
#[derive(Clone, Debug)]
pub struct SymplecticBuilding {
    inner: FiniteBuilding,
    space: SymplecticSpace,
    flags: Vec<Vec<Subspace>>,
    index: HashMap<Vec<Subspace>, usize>,
}

impl SymplecticBuilding {
    pub fn new(n: usize) -> Result<Self, BuildingError> {
        Self::with_execution(n, Execution::default())
    }

    pub fn with_execution(n: usize, exec: Execution) -> Result<Self, BuildingError> {
        if n < 2 {
            return Err(BuildingError::Geometry(format!("half-dimension must be at least 2, got {n}")));
        }
        let count = flag_count(2 * n);
        if count > FLAG_ENUMERATION_CAP {
            return Err(BuildingError::EnumerationCap {
                count,
                cap: FLAG_ENUMERATION_CAP,
            });
        }
        let space = SymplecticSpace::new(n);
        let d = space.dimension();
        let mut flags: Vec<Vec<Subspace>> = vec![Vec::new()];
        for _ in 1..d {
            flags = flags
                .iter()
                .flat_map(|f| {
                    let top = f.last().cloned().unwrap_or_else(Subspace::zero);
                    space.covers(&top).into_iter().map(move |u| {
                        let mut g = f.clone();
                        g.push(u);
                        g
                    })
                })
                .collect();
        }
        flags.sort();
        let index: HashMap<Vec<Subspace>, usize> = flags.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
        let keys: Vec<Vec<Vec<Subspace>>> = (0..d - 1)
            .map(|i| {
                flags
                    .iter()
                    .map(|f| {
                        let mut k = f.clone();
                        k.remove(i);
                        k
                    })
                    .collect()
            })
            .collect();
        let labels = flags.iter().map(|f| format_flag(f)).collect();
        let system = CoxeterSystem::type_a(d - 1);
        let inner = FiniteBuilding::from_panel_keys(system, Family::SymplecticFlags, labels, keys, true, exec)?;
        Ok(Self {
            inner,
            space,
            flags,
            index,
        })
    }

    pub fn space(&self) -> &SymplecticSpace {
        &self.space
    }

    pub fn finite(&self) -> &FiniteBuilding {
        &self.inner
    }

    pub fn flag(&self, c: usize) -> &[Subspace] {
        &self.flags[c]
    }

    pub fn flag_index(&self, flag: &[Subspace]) -> Option<usize> {
        self.index.get(flag).copied()
    }

    /// The polarity image: `U′_{2n−i} = U_i^⊥`.
    pub fn polarity_image(&self, c: usize) -> usize {
        let f = &self.flags[c];
        let image: Vec<Subspace> = f.iter().rev().map(|u| self.space.perp(u)).collect();
        self.flag_index(&image).expect("perp of a flag is a flag")
    }

    /// `U_i + U′_{2n−i} = V` for every `i`.
    pub fn subspace_opposite(&self, c: usize, d: usize) -> bool {
        let (f, g) = (&self.flags[c], &self.flags[d]);
        let full = self.space.dimension();
        f.iter().zip(g.iter().rev()).all(|(u, v)| u.sum(v).dim() == full)
    }

    /// Opposition by `δ = w₀`, checked against the subspace criterion.
    pub fn opposite(&self, c: usize, d: usize) -> Result<bool, BuildingError> {
        let weyl = super::opposite(self, &c, &d)?;
        if weyl != self.subspace_opposite(c, d) {
            return Err(BuildingError::CriteriaDisagree(self.label(&c), self.label(&d)));
        }
        Ok(weyl)
    }

    /// Counts chamber pairs on which the two opposition criteria disagree.
    pub fn opposition_disagreements(&self, exec: Execution) -> Result<usize, BuildingError> {
        let n = self.inner.len();
        let w0 = self.inner.system().longest_element()?;
        let w0 = self.inner.group().id(&w0).expect("w0 is in the group");
        let per_row = par::map_range(exec, 0..n, |c| {
            (0..n)
                .filter(|&d| (self.inner.delta_id(c, d) == Some(w0)) != self.subspace_opposite(c, d))
                .count()
        });
        Ok(per_row.into_iter().sum())
    }

    fn automorphism(&self, spec: &AutomorphismSpec) -> Result<BuildingAutomorphism<usize>, BuildingError> {
        let k = self.space.dimension() - 1;
        let (map, sigma) = match spec {
            AutomorphismSpec::Identity => ((0..self.inner.len()).collect(), (0..k).collect()),
            AutomorphismSpec::SymplecticPolarity => (
                (0..self.inner.len()).map(|c| self.polarity_image(c)).collect(),
                (0..k).map(|i| k - 1 - i).collect(),
            ),
            other => return Err(BuildingError::UnsupportedSpec(other.name())),
        };
        self.inner.automorphism_from_map(spec.name(), map, sigma, Execution::default())
    }
}

delegate_finite!(SymplecticBuilding);

fn format_flag(flag: &[Subspace]) -> String {
    let parts: Vec<String> = flag
        .iter()
        .map(|u| {
            let b: Vec<String> = u.basis().iter().map(|v| format!("{v:b}")).collect();
            format!("<{}>", b.join(","))
        })
        .collect();
    parts.join("<")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn form_is_alternating_and_nondegenerate() {
        let v = SymplecticSpace::new(2);
        assert!(v.vectors().all(|x| v.form(x, x) == 0));
        assert_eq!(v.radical_dimension(), 0);
        for x in v.vectors() {
            for y in v.vectors() {
                assert_eq!(v.form(x, y), v.form(y, x));
            }
        }
    }

    #[test]
    fn subspace_counts() {
        let v = SymplecticSpace::new(2);
        let counts: Vec<usize> = (0..=4).map(|k| v.subspaces(k).len()).collect();
        assert_eq!(counts, vec![1, 15, 35, 15, 1]);
    }

    #[test]
    fn perp_dimensions() {
        let v = SymplecticSpace::new(2);
        for k in 0..=4 {
            for u in v.subspaces(k) {
                assert_eq!(v.perp(&u).dim(), 4 - k);
                assert_eq!(v.perp(&v.perp(&u)), u);
            }
        }
    }

    #[test]
    fn flag_building_shape() {
        let b = SymplecticBuilding::new(2).unwrap();
        assert_eq!(b.finite().len(), 315);
        assert_eq!(flag_count(4), 315);
        for c in [0, 100, 314] {
            for s in 0..3 {
                assert_eq!(b.panel(&c, s).unwrap().len(), 3);
            }
        }
        let diam = (0..315).map(|d| b.gallery_distance(&0, &d).unwrap()).max().unwrap();
        assert_eq!(diam, 6);
    }

    #[test]
    fn enumeration_cap() {
        assert!(matches!(
            SymplecticBuilding::new(3),
            Err(BuildingError::EnumerationCap { count: 615195, .. })
        ));
    }

    #[test]
    fn polarity_is_involutive_and_reverses_types() {
        let b = SymplecticBuilding::new(2).unwrap();
        for c in 0..315 {
            assert_eq!(b.polarity_image(b.polarity_image(c)), c);
            let u1 = &b.flag(c)[0];
            assert!(u1.is_subspace_of(&b.space().perp(u1)));
        }
        let phi = b.make_automorphism(&AutomorphismSpec::SymplecticPolarity).unwrap();
        assert_eq!(phi.sigma(), &[2, 1, 0]);
    }

    proptest! {
        #[test]
        fn span_is_canonical(vs in proptest::collection::vec(0u32..16, 0..6), perm_seed in 0usize..720) {
            let mut shuffled = vs.clone();
            let len = shuffled.len();
            if len > 1 {
                shuffled.rotate_left(perm_seed % len);
            }
            let a = Subspace::span(vs.iter().copied());
            let b = Subspace::span(shuffled);
            prop_assert_eq!(&a, &b);
            for &v in &vs {
                prop_assert!(a.contains(v));
            }
            prop_assert_eq!(1usize << a.dim(), (0u32..16).filter(|&x| a.contains(x)).count());
        }
    }
}
