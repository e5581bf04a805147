use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};

use super::{check_equivariance, sample_pairs, AutomorphismSpec, Building, BuildingAutomorphism, BuildingError, Family};
use crate::coxeter::{CoxeterSystem, Element};

/// Word cap for the tree's D∞ system; braid classes there are singletons.
const TREE_WORD_CAP: usize = 4096;

/// Radius of the region sampled when checking tree automorphisms.
pub const EQUIVARIANCE_RADIUS: usize = 12;
pub const EQUIVARIANCE_SAMPLES: usize = 1000;

/// An edge of the tree, addressed by its endpoint farther from the root
/// vertex. The root has children `0..=q`, every other vertex `0..q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeEdge(pub Vec<u8>);

impl fmt::Display for TreeEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join("."))
    }
}

/// The `(q+1)`-regular tree as a building of type D∞. Chambers are edges,
/// vertex types alternate with depth (the root has type `s`), and two edges
/// are `s`-adjacent iff they share their type-`s` endpoint.
///
/// Chambers are generated on demand inside a region of bounded address
/// depth; the region only grows, atomically.
#[derive(Debug)]
pub struct TreeBuilding {
    q: usize,
    system: CoxeterSystem,
    radius: AtomicUsize,
}

impl TreeBuilding {
    pub fn new(q: usize, radius: usize) -> Result<Self, BuildingError> {
        if !(2..=255).contains(&q) {
            return Err(BuildingError::Geometry(format!("branching must be in 2..=255, got {q}")));
        }
        Ok(Self {
            q,
            system: CoxeterSystem::infinite_dihedral().with_word_cap(TREE_WORD_CAP),
            radius: AtomicUsize::new(radius.max(1)),
        })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn radius(&self) -> usize {
        self.radius.load(Ordering::Acquire)
    }

    pub fn expand(&self, radius: usize) {
        self.radius.fetch_max(radius, Ordering::AcqRel);
    }

    fn branching(&self, vertex: &[u8]) -> usize {
        if vertex.is_empty() {
            self.q + 1
        } else {
            self.q
        }
    }

    fn check(&self, e: &TreeEdge) -> Result<(), BuildingError> {
        let valid = !e.0.is_empty()
            && e.0
                .iter()
                .enumerate()
                .all(|(i, &x)| (x as usize) < if i == 0 { self.q + 1 } else { self.q });
        if !valid {
            return Err(BuildingError::UnknownChamber(e.to_string()));
        }
        if e.0.len() > self.radius() {
            return Err(BuildingError::OutsideRegion(e.to_string()));
        }
        Ok(())
    }

    fn vertex_type(vertex: &[u8]) -> usize {
        vertex.len() % 2
    }

    fn vertex_distance(a: &[u8], b: &[u8]) -> usize {
        let common = a.iter().zip(b).take_while(|(x, y)| x == y).count();
        a.len() + b.len() - 2 * common
    }

    /// Edges incident to `vertex`, sorted.
    fn star(&self, vertex: &[u8]) -> Vec<TreeEdge> {
        let mut out: Vec<TreeEdge> = Vec::with_capacity(self.q + 1);
        if !vertex.is_empty() {
            out.push(TreeEdge(vertex.to_vec()));
        }
        for i in 0..self.branching(vertex) {
            let mut child = vertex.to_vec();
            child.push(i as u8);
            out.push(TreeEdge(child));
        }
        out.sort();
        out
    }

    /// The swap of the subtrees below children `first` and `second` of `vertex`.
    pub fn subtree_swap(&self, vertex: &[u8], first: u8, second: u8) -> Result<BuildingAutomorphism<TreeEdge>, BuildingError> {
        let b = self.branching(vertex);
        if first as usize >= b || second as usize >= b {
            return Err(BuildingError::NotAutomorphism(format!(
                "vertex {vertex:?} has only {b} children"
            )));
        }
        let mut a = vertex.to_vec();
        a.push(first);
        let mut c = vertex.to_vec();
        c.push(second);
        let map = move |e: &TreeEdge| {
            if e.0.starts_with(&a) {
                TreeEdge([c.as_slice(), &e.0[a.len()..]].concat())
            } else if e.0.starts_with(&c) {
                TreeEdge([a.as_slice(), &e.0[c.len()..]].concat())
            } else {
                e.clone()
            }
        };
        Ok(BuildingAutomorphism::new(
            AutomorphismSpec::SubtreeSwap {
                vertex: vertex.to_vec(),
                first,
                second,
            }
            .name(),
            vec![0, 1],
            map,
        ))
    }
}

impl Building for TreeBuilding {
    type Chamber = TreeEdge;

    fn system(&self) -> &CoxeterSystem {
        &self.system
    }

    fn family(&self) -> Family {
        Family::Tree
    }

    fn base_chamber(&self) -> TreeEdge {
        TreeEdge(vec![0])
    }

    fn is_finite(&self) -> bool {
        false
    }

    fn claims_thick(&self) -> bool {
        true
    }

    fn panel(&self, c: &TreeEdge, s: usize) -> Result<Vec<TreeEdge>, BuildingError> {
        self.check(c)?;
        let child = c.0.as_slice();
        let parent = &child[..child.len() - 1];
        let vertex = if Self::vertex_type(child) == s { child } else { parent };
        let star = self.star(vertex);
        if let Some(e) = star.iter().find(|e| e.0.len() > self.radius()) {
            return Err(BuildingError::OutsideRegion(e.to_string()));
        }
        Ok(star)
    }

    fn weyl_distance(&self, c: &TreeEdge, d: &TreeEdge) -> Result<Element, BuildingError> {
        self.check(c)?;
        self.check(d)?;
        if c == d {
            return Ok(Element::identity());
        }
        let ends = |e: &TreeEdge| [e.0[..e.0.len() - 1].to_vec(), e.0.clone()];
        let (ec, ed) = (ends(c), ends(d));
        // Closest pair of endpoints; the gallery passes through the vertex
        // path joining them and its letters alternate starting at v0's type.
        let (k, v0) = ec
            .iter()
            .flat_map(|x| ed.iter().map(move |y| (Self::vertex_distance(x, y), x)))
            .min_by_key(|&(k, _)| k)
            .expect("four endpoint pairs");
        let start = Self::vertex_type(v0);
        let letters: Vec<usize> = (0..=k).map(|i| (start + i) % 2).collect();
        Ok(self.system.reduce_letters(&letters)?)
    }

    fn chambers_within(&self, radius: usize) -> Result<Vec<TreeEdge>, BuildingError> {
        self.expand(radius);
        let mut out = Vec::new();
        let mut layer: Vec<Vec<u8>> = vec![Vec::new()];
        for _ in 0..radius {
            layer = layer
                .iter()
                .flat_map(|v| (0..self.branching(v) as u8).map(move |i| [v.as_slice(), &[i]].concat()))
                .collect();
            out.extend(layer.iter().cloned().map(TreeEdge));
        }
        out.sort();
        Ok(out)
    }

    fn expand_to(&self, c: &TreeEdge) {
        self.expand(c.0.len() + 1);
    }

    fn label(&self, c: &TreeEdge) -> String {
        c.to_string()
    }

    fn make_automorphism(&self, spec: &AutomorphismSpec) -> Result<BuildingAutomorphism<TreeEdge>, BuildingError> {
        let phi = match spec {
            AutomorphismSpec::Identity => BuildingAutomorphism::new("identity", vec![0, 1], |e: &TreeEdge| e.clone()),
            AutomorphismSpec::SubtreeSwap { vertex, first, second } => self.subtree_swap(vertex, *first, *second)?,
            other => return Err(BuildingError::UnsupportedSpec(other.name())),
        };
        let pairs = sample_pairs(self, EQUIVARIANCE_RADIUS, EQUIVARIANCE_SAMPLES, 0)?;
        check_equivariance(self, &phi, &pairs)?;
        Ok(phi)
    }
}
