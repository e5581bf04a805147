use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use serde::Serialize;

use super::{check_sigma, AutomorphismSpec, Building, BuildingAutomorphism, BuildingError, Family};
use crate::coxeter::{CoxeterSystem, Element, GroupTable};
use crate::par::{self, Execution};

const UNREACHABLE: u32 = u32::MAX;
const MAX_LISTED_VIOLATIONS: usize = 32;

/// A finite chamber system over a finite Coxeter group, with `δ` tabulated
/// for all pairs by typed breadth-first search.
#[derive(Clone, Debug)]
pub struct FiniteBuilding {
    system: CoxeterSystem,
    family: Family,
    labels: Vec<String>,
    claims_thick: bool,
    group: GroupTable,
    /// `[s][chamber]` → panel index
    panel_of: Vec<Vec<usize>>,
    /// `[s][panel]` → sorted members
    panels: Vec<Vec<Vec<usize>>>,
    delta: Vec<u32>,
    depth: Vec<u32>,
}

impl FiniteBuilding {
    /// Builds the chamber system in which chambers `c`, `d` are `s`-equal iff
    /// `keys[s][c] == keys[s][d]`.
    pub fn from_panel_keys<K: Hash + Eq>(
        system: CoxeterSystem,
        family: Family,
        labels: Vec<String>,
        keys: Vec<Vec<K>>,
        claims_thick: bool,
        exec: Execution,
    ) -> Result<Self, BuildingError> {
        let n = labels.len();
        assert_eq!(keys.len(), system.rank(), "one key column per generator");
        let group = system.group_table()?;
        let mut panel_of = Vec::with_capacity(keys.len());
        let mut panels = Vec::with_capacity(keys.len());
        for column in &keys {
            assert_eq!(column.len(), n, "one key per chamber");
            let mut ids: HashMap<&K, usize> = HashMap::new();
            let mut members: Vec<Vec<usize>> = Vec::new();
            let mut of = Vec::with_capacity(n);
            for (c, k) in column.iter().enumerate() {
                let id = *ids.entry(k).or_insert_with(|| {
                    members.push(Vec::new());
                    members.len() - 1
                });
                members[id].push(c);
                of.push(id);
            }
            panel_of.push(of);
            panels.push(members);
        }
        let mut b = Self {
            system,
            family,
            labels,
            claims_thick,
            group,
            panel_of,
            panels,
            delta: Vec::new(),
            depth: Vec::new(),
        };
        let rows = par::map_range(exec, 0..n, |c| b.bfs_from(c));
        b.delta = Vec::with_capacity(n * n);
        b.depth = Vec::with_capacity(n * n);
        for (d, h) in rows {
            b.delta.extend(d);
            b.depth.extend(h);
        }
        Ok(b)
    }

    fn bfs_from(&self, c: usize) -> (Vec<u32>, Vec<u32>) {
        let n = self.len();
        let mut delta = vec![UNREACHABLE; n];
        let mut depth = vec![UNREACHABLE; n];
        delta[c] = 0;
        depth[c] = 0;
        let mut queue = VecDeque::from([c]);
        while let Some(d) = queue.pop_front() {
            for s in 0..self.system.rank() {
                for &e in self.panel_members(d, s) {
                    if depth[e] == UNREACHABLE {
                        depth[e] = depth[d] + 1;
                        delta[e] = self.group.mul_gen(delta[d], s);
                        queue.push_back(e);
                    }
                }
            }
        }
        (delta, depth)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn group(&self) -> &GroupTable {
        &self.group
    }

    pub fn chamber_label(&self, c: usize) -> &str {
        &self.labels[c]
    }

    pub fn panel_members(&self, c: usize, s: usize) -> &[usize] {
        &self.panels[s][self.panel_of[s][c]]
    }

    /// Group-table id of `δ(c, d)`, or `None` if no gallery joins them.
    pub fn delta_id(&self, c: usize, d: usize) -> Option<u32> {
        let v = self.delta[c * self.len() + d];
        (v != UNREACHABLE).then_some(v)
    }

    /// Length of a minimal gallery from `c` to `d`.
    pub fn gallery_depth(&self, c: usize, d: usize) -> Option<u32> {
        let v = self.depth[c * self.len() + d];
        (v != UNREACHABLE).then_some(v)
    }

    fn check_index(&self, c: usize) -> Result<(), BuildingError> {
        if c < self.len() {
            Ok(())
        } else {
            Err(BuildingError::UnknownChamber(c.to_string()))
        }
    }

    /// Wraps a chamber permutation after checking that it is a bijection and
    /// that `δ(φC, φD) = σ(δ(C, D))` on every pair.
    pub fn automorphism_from_map(
        &self,
        name: impl Into<String>,
        map: Vec<usize>,
        sigma: Vec<usize>,
        exec: Execution,
    ) -> Result<BuildingAutomorphism<usize>, BuildingError> {
        let n = self.len();
        check_sigma(&self.system, &sigma)?;
        if map.len() != n {
            return Err(BuildingError::NotAutomorphism(format!("map has {} entries for {n} chambers", map.len())));
        }
        let mut hit = vec![false; n];
        for &x in &map {
            if x >= n || hit[x] {
                return Err(BuildingError::NotAutomorphism("chamber map is not a bijection".into()));
            }
            hit[x] = true;
        }
        let sigma_ids: Vec<u32> = self
            .group
            .elements()
            .iter()
            .map(|w| {
                self.group
                    .id(&self.system.apply_permutation(&sigma, w))
                    .expect("diagram automorphisms permute the group")
            })
            .collect();
        let bad = par::map_range(exec, 0..n, |c| {
            (0..n).find_map(|d| {
                let lhs = self.delta_id(map[c], map[d]);
                let rhs = self.delta_id(c, d).map(|w| sigma_ids[w as usize]);
                (lhs != rhs).then_some((c, d))
            })
        });
        if let Some((c, d)) = bad.into_iter().flatten().next() {
            return Err(BuildingError::NotAutomorphism(format!(
                "δ(φC, φD) ≠ σ(δ(C, D)) for C = {}, D = {}",
                self.labels[c], self.labels[d]
            )));
        }
        Ok(BuildingAutomorphism::new(name, sigma, move |c: &usize| map[*c]))
    }

    /// Checks the W-metric axioms and the panel structure exhaustively.
    pub fn validate(&self, exec: Execution) -> ValidationReport {
        let n = self.len();
        let rank = self.system.rank();
        let g = &self.group;
        let per_chamber = par::map_range(exec, 0..n, |c| {
            let mut v: Vec<Violation> = Vec::new();
            let mut push = |kind: &'static str, detail: String| v.push(Violation { kind, detail });
            if self.delta_id(c, c) != Some(0) {
                push("self-distance", format!("δ(C, C) ≠ 1 at {}", self.labels[c]));
            }
            for d in 0..n {
                let Some(w) = self.delta_id(c, d) else {
                    push("unreachable", format!("{} to {}", self.labels[c], self.labels[d]));
                    continue;
                };
                if self.delta_id(d, c) != Some(g.inverse(w)) {
                    push("symmetry", format!("δ(D, C) ≠ δ(C, D)⁻¹ for {}, {}", self.labels[c], self.labels[d]));
                }
                let depth = self.gallery_depth(c, d).unwrap_or(UNREACHABLE);
                if depth as usize != g.length(w) {
                    push(
                        "gallery-metric",
                        format!(
                            "gallery distance {depth} but l(δ) = {} for {}, {}",
                            g.length(w),
                            self.labels[c],
                            self.labels[d]
                        ),
                    );
                }
                // Every minimal gallery gives the same product.
                for s in 0..rank {
                    for &e in self.panel_members(d, s) {
                        if e != d && self.gallery_depth(c, e).map(|x| x + 1) == Some(depth) {
                            let via = self.delta_id(c, e).map(|x| g.mul_gen(x, s));
                            if via != Some(w) {
                                push(
                                    "gallery-independence",
                                    format!("galleries from {} to {} disagree", self.labels[c], self.labels[d]),
                                );
                            }
                        }
                    }
                }
            }
            for s in 0..rank {
                for panel in &self.panels[s] {
                    let values: Vec<Option<u32>> = panel.iter().map(|&d| self.delta_id(c, d)).collect();
                    let Some(Some(w)) = values.first().copied() else { continue };
                    let ws = g.mul_gen(w, s);
                    let (short, long) = if g.length(ws) < g.length(w) { (ws, w) } else { (w, ws) };
                    let n_short = values.iter().filter(|&&x| x == Some(short)).count();
                    let n_long = values.iter().filter(|&&x| x == Some(long)).count();
                    if n_short != 1 || n_short + n_long != values.len() {
                        push(
                            "panel-projection",
                            format!(
                                "from {}: {}-panel of {} has {n_short} chambers at the shorter distance",
                                self.labels[c],
                                self.system.labels()[s],
                                self.labels[panel[0]]
                            ),
                        );
                    }
                }
                for t in s + 1..rank {
                    let common = self
                        .panel_members(c, s)
                        .iter()
                        .filter(|x| self.panel_members(c, t).contains(x))
                        .count();
                    if common != 1 {
                        push(
                            "panel-intersection",
                            format!("panels of types {s}, {t} through {} share {common} chambers", self.labels[c]),
                        );
                    }
                }
            }
            v
        });
        let mut report = ValidationReport {
            chambers: n,
            pairs_checked: n * n,
            violation_count: 0,
            violations: Vec::new(),
        };
        let mut add = |v: Violation| {
            report.violation_count += 1;
            if report.violations.len() < MAX_LISTED_VIOLATIONS {
                report.violations.push(v);
            }
        };
        for s in 0..rank {
            for panel in &self.panels[s] {
                let floor = if self.claims_thick { 3 } else { 2 };
                if panel.len() < floor {
                    add(Violation {
                        kind: if floor == 3 { "thickness" } else { "degenerate-panel" },
                        detail: format!(
                            "{}-panel of {} has {} chambers",
                            self.system.labels()[s],
                            self.labels[panel[0]],
                            panel.len()
                        ),
                    });
                }
            }
        }
        per_chamber.into_iter().flatten().for_each(&mut add);
        report
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub kind: &'static str,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub chambers: usize,
    pub pairs_checked: usize,
    pub violation_count: usize,
    /// The first violations found, capped.
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }
}

impl Building for FiniteBuilding {
    type Chamber = usize;

    fn system(&self) -> &CoxeterSystem {
        &self.system
    }

    fn family(&self) -> Family {
        self.family
    }

    fn base_chamber(&self) -> usize {
        0
    }

    fn is_finite(&self) -> bool {
        true
    }

    fn claims_thick(&self) -> bool {
        self.claims_thick
    }

    fn panel(&self, c: &usize, s: usize) -> Result<Vec<usize>, BuildingError> {
        self.check_index(*c)?;
        Ok(self.panel_members(*c, s).to_vec())
    }

    fn weyl_distance(&self, c: &usize, d: &usize) -> Result<Element, BuildingError> {
        self.check_index(*c)?;
        self.check_index(*d)?;
        self.delta_id(*c, *d)
            .map(|w| self.group.element(w).clone())
            .ok_or_else(|| BuildingError::Unreachable(self.labels[*c].clone(), self.labels[*d].clone()))
    }

    fn chambers_within(&self, radius: usize) -> Result<Vec<usize>, BuildingError> {
        Ok((0..self.len())
            .filter(|&d| self.gallery_depth(0, d).is_some_and(|x| x as usize <= radius))
            .collect())
    }

    fn label(&self, c: &usize) -> String {
        self.labels.get(*c).cloned().unwrap_or_else(|| c.to_string())
    }

    fn make_automorphism(&self, spec: &AutomorphismSpec) -> Result<BuildingAutomorphism<usize>, BuildingError> {
        match spec {
            AutomorphismSpec::Identity => self.automorphism_from_map(
                "identity",
                (0..self.len()).collect(),
                (0..self.system.rank()).collect(),
                Execution::default(),
            ),
            other => Err(BuildingError::UnsupportedSpec(other.name())),
        }
    }
}

/// Implements [`Building`] for a wrapper holding a `FiniteBuilding` in
/// field `inner`, with a custom `make_automorphism`.
macro_rules! delegate_finite {
    ($ty:ty) => {
        impl $crate::buildings::Building for $ty {
            type Chamber = usize;

            fn system(&self) -> &$crate::coxeter::CoxeterSystem {
                self.inner.system()
            }
            fn family(&self) -> $crate::buildings::Family {
                self.inner.family()
            }
            fn base_chamber(&self) -> usize {
                0
            }
            fn is_finite(&self) -> bool {
                true
            }
            fn claims_thick(&self) -> bool {
                self.inner.claims_thick()
            }
            fn panel(&self, c: &usize, s: usize) -> Result<Vec<usize>, $crate::buildings::BuildingError> {
                self.inner.panel(c, s)
            }
            fn weyl_distance(&self, c: &usize, d: &usize) -> Result<$crate::coxeter::Element, $crate::buildings::BuildingError> {
                self.inner.weyl_distance(c, d)
            }
            fn chambers_within(&self, radius: usize) -> Result<Vec<usize>, $crate::buildings::BuildingError> {
                self.inner.chambers_within(radius)
            }
            fn label(&self, c: &usize) -> String {
                self.inner.label(c)
            }
            fn make_automorphism(
                &self,
                spec: &$crate::buildings::AutomorphismSpec,
            ) -> Result<$crate::buildings::BuildingAutomorphism<usize>, $crate::buildings::BuildingError> {
                self.automorphism(spec)
            }
        }
    };
}
pub(crate) use delegate_finite;
