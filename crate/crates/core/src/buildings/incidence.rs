use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use super::finite::{delegate_finite, FiniteBuilding};
use super::symplectic::SymplecticSpace;
use super::{AutomorphismSpec, BuildingAutomorphism, BuildingError, Family};
use crate::coxeter::{CoxeterSystem, Order};
use crate::par::Execution;

/// A vertex of the incidence graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Vertex {
    Point(usize),
    Line(usize),
}

impl Vertex {
    pub fn is_point(self) -> bool {
        matches!(self, Vertex::Point(_))
    }
}

/// A rank-2 point-line geometry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceGeometry {
    point_names: Vec<String>,
    line_names: Vec<String>,
    flags: Vec<(usize, usize)>,
    point_lines: Vec<Vec<usize>>,
    line_points: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PolygonParameters {
    pub girth: usize,
    pub diameter: usize,
    pub connected: bool,
    pub min_degree: usize,
}

impl IncidenceGeometry {
    pub fn new(point_names: Vec<String>, line_names: Vec<String>, flags: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, BuildingError> {
        let flags: BTreeSet<(usize, usize)> = flags.into_iter().collect();
        let mut point_lines = vec![Vec::new(); point_names.len()];
        let mut line_points = vec![Vec::new(); line_names.len()];
        for &(p, l) in &flags {
            if p >= point_names.len() || l >= line_names.len() {
                return Err(BuildingError::Geometry(format!("flag ({p}, {l}) out of range")));
            }
            point_lines[p].push(l);
            line_points[l].push(p);
        }
        Ok(Self {
            point_names,
            line_names,
            flags: flags.into_iter().collect(),
            point_lines,
            line_points,
        })
    }

    /// Parses lines `point <id>`, `line <id>`, `flag <point-id> <line-id>`.
    pub fn parse(text: &str) -> Result<Self, BuildingError> {
        let mut points: Vec<String> = Vec::new();
        let mut lines: Vec<String> = Vec::new();
        let mut point_ix = HashMap::new();
        let mut line_ix = HashMap::new();
        let mut flags = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let err = |msg: &str| BuildingError::Geometry(format!("line {}: {msg}", no + 1));
            match toks.as_slice() {
                ["point", id] => {
                    if point_ix.insert(id.to_string(), points.len()).is_some() {
                        return Err(err("duplicate point"));
                    }
                    points.push(id.to_string());
                }
                ["line", id] => {
                    if line_ix.insert(id.to_string(), lines.len()).is_some() {
                        return Err(err("duplicate line"));
                    }
                    lines.push(id.to_string());
                }
                ["flag", p, l] => {
                    let p = *point_ix.get(*p).ok_or_else(|| err("unknown point"))?;
                    let l = *line_ix.get(*l).ok_or_else(|| err("unknown line"))?;
                    flags.push((p, l));
                }
                _ => return Err(err("expected `point <id>`, `line <id>` or `flag <point> <line>`")),
            }
        }
        Self::new(points, lines, flags)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for p in &self.point_names {
            out.push_str(&format!("point {p}\n"));
        }
        for l in &self.line_names {
            out.push_str(&format!("line {l}\n"));
        }
        for &(p, l) in &self.flags {
            out.push_str(&format!("flag {} {}\n", self.point_names[p], self.line_names[l]));
        }
        out
    }

    /// The projective plane of order 2, lines `{i, i+1, i+3} mod 7`.
    pub fn fano() -> Self {
        let flags = (0..7).flat_map(|l| [0, 1, 3].map(|k| ((l + k) % 7, l)));
        Self::new(names("p", 7), names("l", 7), flags).expect("valid Fano plane")
    }

    /// The symplectic generalized quadrangle W(2): points of PG(3, 2) and
    /// the totally isotropic lines of the standard alternating form.
    pub fn symplectic_quadrangle_f2() -> Self {
        let space = SymplecticSpace::new(2);
        let points: Vec<u32> = (1..16).collect();
        let mut lines: BTreeSet<[u32; 3]> = BTreeSet::new();
        for &u in &points {
            for &v in &points {
                if u < v && space.form(u, v) == 0 {
                    let mut l = [u, v, u ^ v];
                    l.sort_unstable();
                    lines.insert(l);
                }
            }
        }
        let lines: Vec<[u32; 3]> = lines.into_iter().collect();
        let flags = lines
            .iter()
            .enumerate()
            .flat_map(|(li, l)| l.iter().map(move |&v| (v as usize - 1, li)));
        let point_names = points.iter().map(|v| format!("{v:04b}")).collect();
        let line_names = lines
            .iter()
            .map(|l| format!("{:04b}-{:04b}-{:04b}", l[0], l[1], l[2]))
            .collect();
        Self::new(point_names, line_names, flags).expect("valid quadrangle")
    }

    /// The ordinary polygon whose incidence graph is a cycle of length `len`.
    pub fn cycle(len: usize) -> Result<Self, BuildingError> {
        if len < 4 || !len.is_multiple_of(2) {
            return Err(BuildingError::Geometry(format!("cycle length must be even and at least 4, got {len}")));
        }
        let m = len / 2;
        let flags = (0..m).flat_map(|i| [(i, i), ((i + 1) % m, i)]);
        Self::new(names("p", m), names("l", m), flags)
    }

    /// Looks up a built-in geometry: `fano`, `symplectic-quadrangle-f2`, `cycle <2m>`.
    pub fn builtin(name: &str) -> Result<Self, BuildingError> {
        let toks: Vec<&str> = name.split_whitespace().collect();
        match toks.as_slice() {
            ["fano"] => Ok(Self::fano()),
            ["symplectic-quadrangle-f2"] | ["quadrangle"] => Ok(Self::symplectic_quadrangle_f2()),
            ["cycle", len] => Self::cycle(
                len.parse()
                    .map_err(|_| BuildingError::Geometry(format!("bad cycle length `{len}`")))?,
            ),
            _ => Err(BuildingError::Geometry(format!("unknown built-in geometry `{name}`"))),
        }
    }

    pub fn num_points(&self) -> usize {
        self.point_names.len()
    }

    pub fn num_lines(&self) -> usize {
        self.line_names.len()
    }

    pub fn flags(&self) -> &[(usize, usize)] {
        &self.flags
    }

    pub fn point_name(&self, p: usize) -> &str {
        &self.point_names[p]
    }

    pub fn line_name(&self, l: usize) -> &str {
        &self.line_names[l]
    }

    pub fn vertex_name(&self, v: Vertex) -> &str {
        match v {
            Vertex::Point(p) => &self.point_names[p],
            Vertex::Line(l) => &self.line_names[l],
        }
    }

    pub fn lines_on(&self, p: usize) -> &[usize] {
        &self.point_lines[p]
    }

    pub fn points_on(&self, l: usize) -> &[usize] {
        &self.line_points[l]
    }

    pub fn incident(&self, p: usize, l: usize) -> bool {
        self.point_lines[p].contains(&l)
    }

    /// Returns a copy with one flag removed.
    pub fn without_flag(&self, index: usize) -> Self {
        let flags = self.flags.iter().enumerate().filter(|&(i, _)| i != index).map(|(_, &f)| f);
        Self::new(self.point_names.clone(), self.line_names.clone(), flags).expect("subset of valid flags")
    }

    fn num_vertices(&self) -> usize {
        self.num_points() + self.num_lines()
    }

    fn index(&self, v: Vertex) -> usize {
        match v {
            Vertex::Point(p) => p,
            Vertex::Line(l) => self.num_points() + l,
        }
    }

    fn vertex(&self, i: usize) -> Vertex {
        if i < self.num_points() {
            Vertex::Point(i)
        } else {
            Vertex::Line(i - self.num_points())
        }
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.num_vertices()).map(|i| self.vertex(i))
    }

    pub fn neighbours(&self, v: Vertex) -> Vec<Vertex> {
        match v {
            Vertex::Point(p) => self.point_lines[p].iter().map(|&l| Vertex::Line(l)).collect(),
            Vertex::Line(l) => self.line_points[l].iter().map(|&p| Vertex::Point(p)).collect(),
        }
    }

    /// Graph distances from `v` (`usize::MAX` when unreachable).
    pub fn distances_from(&self, v: Vertex) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.num_vertices()];
        dist[self.index(v)] = 0;
        let mut queue = VecDeque::from([v]);
        while let Some(x) = queue.pop_front() {
            let dx = dist[self.index(x)];
            for y in self.neighbours(x) {
                let iy = self.index(y);
                if dist[iy] == usize::MAX {
                    dist[iy] = dx + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    pub fn distance(&self, a: Vertex, b: Vertex) -> usize {
        self.distances_from(a)[self.index(b)]
    }

    /// The ball `B(x, n)` in the incidence graph.
    pub fn vertex_ball(&self, x: Vertex, n: usize) -> BTreeSet<Vertex> {
        self.distances_from(x)
            .into_iter()
            .enumerate()
            .filter(|&(_, d)| d <= n)
            .map(|(i, _)| self.vertex(i))
            .collect()
    }

    /// Girth and diameter of the incidence graph.
    pub fn polygon_parameters(&self) -> PolygonParameters {
        let mut girth = usize::MAX;
        let mut diameter = 0;
        let mut connected = true;
        for v in self.vertices() {
            // Shortest cycle through v: BFS, a non-tree edge closes a cycle.
            let n = self.num_vertices();
            let mut dist = vec![usize::MAX; n];
            let mut parent = vec![usize::MAX; n];
            let root = self.index(v);
            dist[root] = 0;
            let mut queue = VecDeque::from([v]);
            while let Some(x) = queue.pop_front() {
                let ix = self.index(x);
                for y in self.neighbours(x) {
                    let iy = self.index(y);
                    if dist[iy] == usize::MAX {
                        dist[iy] = dist[ix] + 1;
                        parent[iy] = ix;
                        queue.push_back(y);
                    } else if parent[ix] != iy {
                        girth = girth.min(dist[ix] + dist[iy] + 1);
                    }
                }
            }
            if dist.contains(&usize::MAX) {
                connected = false;
            } else {
                diameter = diameter.max(*dist.iter().max().unwrap_or(&0));
            }
        }
        let min_degree = self.vertices().map(|v| self.neighbours(v).len()).min().unwrap_or(0);
        PolygonParameters {
            girth,
            diameter,
            connected,
            min_degree,
        }
    }

    /// Checks that `map` sends flags to flags bijectively.
    pub fn check_map(&self, map: &IncidenceMap) -> Result<(), BuildingError> {
        let (np, nl) = (self.num_points(), self.num_lines());
        let (pt, lt) = if map.duality { (nl, np) } else { (np, nl) };
        if map.point_map.len() != np || map.line_map.len() != nl {
            return Err(BuildingError::NotAutomorphism("vertex map has the wrong size".into()));
        }
        if map.duality && np != nl {
            return Err(BuildingError::NotAutomorphism("duality needs as many points as lines".into()));
        }
        if !is_bijection(&map.point_map, pt) || !is_bijection(&map.line_map, lt) {
            return Err(BuildingError::NotAutomorphism("vertex map is not a bijection".into()));
        }
        for &(p, l) in &self.flags {
            let (p2, l2) = map.flag_image(p, l);
            if !self.incident(p2, l2) {
                return Err(BuildingError::NotAutomorphism(format!(
                    "flag ({}, {}) maps to the non-incident pair ({}, {})",
                    self.point_names[p], self.line_names[l], self.point_names[p2], self.line_names[l2]
                )));
            }
        }
        Ok(())
    }

    /// The collineation induced by a permutation of the points.
    pub fn collineation_from_points(&self, point_map: Vec<usize>) -> Result<IncidenceMap, BuildingError> {
        let by_points: HashMap<BTreeSet<usize>, usize> = (0..self.num_lines())
            .map(|l| (self.line_points[l].iter().copied().collect(), l))
            .collect();
        let line_map = (0..self.num_lines())
            .map(|l| {
                let image: BTreeSet<usize> = self.line_points[l].iter().map(|&p| point_map[p]).collect();
                by_points
                    .get(&image)
                    .copied()
                    .ok_or_else(|| BuildingError::NotAutomorphism(format!("line {} does not map to a line", self.line_names[l])))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let map = IncidenceMap {
            point_map,
            line_map,
            duality: false,
        };
        self.check_map(&map)?;
        Ok(map)
    }

    /// Searches for an incidence-graph automorphism swapping points and lines.
    pub fn find_duality(&self) -> Option<IncidenceMap> {
        let n = self.num_vertices();
        if n == 0 || self.num_points() != self.num_lines() {
            return None;
        }
        let adj: Vec<Vec<bool>> = (0..n)
            .map(|i| {
                let mut row = vec![false; n];
                for y in self.neighbours(self.vertex(i)) {
                    row[self.index(y)] = true;
                }
                row
            })
            .collect();
        // BFS order from point 0; every later vertex has an earlier neighbour.
        let mut order = Vec::with_capacity(n);
        let mut parent = vec![usize::MAX; n];
        let mut seen = vec![false; n];
        seen[0] = true;
        order.push(0);
        let mut i = 0;
        while i < order.len() {
            let x = order[i];
            for y in 0..n {
                if adj[x][y] && !seen[y] {
                    seen[y] = true;
                    parent[y] = x;
                    order.push(y);
                }
            }
            i += 1;
        }
        if order.len() != n {
            return None;
        }
        let mut image = vec![usize::MAX; n];
        let mut used = vec![false; n];
        for first in self.num_points()..n {
            image[0] = first;
            used[first] = true;
            if extend_iso(&adj, &order, &parent, 1, &mut image, &mut used) {
                let np = self.num_points();
                return Some(IncidenceMap {
                    point_map: (0..np).map(|p| image[p] - np).collect(),
                    line_map: (0..self.num_lines()).map(|l| image[np + l]).collect(),
                    duality: true,
                });
            }
            used[first] = false;
        }
        None
    }
}

fn extend_iso(adj: &[Vec<bool>], order: &[usize], parent: &[usize], k: usize, image: &mut [usize], used: &mut [bool]) -> bool {
    if k == order.len() {
        return true;
    }
    let v = order[k];
    let anchor = image[parent[v]];
    for cand in 0..adj.len() {
        if used[cand] || !adj[anchor][cand] {
            continue;
        }
        let consistent = order[..k].iter().all(|&u| adj[v][u] == adj[cand][image[u]]);
        if !consistent {
            continue;
        }
        image[v] = cand;
        used[cand] = true;
        if extend_iso(adj, order, parent, k + 1, image, used) {
            return true;
        }
        used[cand] = false;
    }
    image[v] = usize::MAX;
    false
}

fn is_bijection(map: &[usize], target: usize) -> bool {
    map.len() == target && {
        let mut seen = vec![false; target];
        map.iter().all(|&x| x < target && !std::mem::replace(&mut seen[x], true))
    }
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// A collineation (`duality = false`: points to points, lines to lines) or a
/// duality (`duality = true`: `point_map` sends points to lines and
/// `line_map` sends lines to points).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceMap {
    pub point_map: Vec<usize>,
    pub line_map: Vec<usize>,
    pub duality: bool,
}

impl IncidenceMap {
    pub fn identity(geom: &IncidenceGeometry) -> Self {
        Self {
            point_map: (0..geom.num_points()).collect(),
            line_map: (0..geom.num_lines()).collect(),
            duality: false,
        }
    }

    pub fn vertex_image(&self, v: Vertex) -> Vertex {
        match (v, self.duality) {
            (Vertex::Point(p), false) => Vertex::Point(self.point_map[p]),
            (Vertex::Line(l), false) => Vertex::Line(self.line_map[l]),
            (Vertex::Point(p), true) => Vertex::Line(self.point_map[p]),
            (Vertex::Line(l), true) => Vertex::Point(self.line_map[l]),
        }
    }

    /// Image of the flag `(p, l)` as a (point, line) pair.
    pub fn flag_image(&self, p: usize, l: usize) -> (usize, usize) {
        if self.duality {
            (self.line_map[l], self.point_map[p])
        } else {
            (self.point_map[p], self.line_map[l])
        }
    }

    pub fn is_identity(&self) -> bool {
        !self.duality
            && self.point_map.iter().enumerate().all(|(i, &x)| i == x)
            && self.line_map.iter().enumerate().all(|(i, &x)| i == x)
    }
}

/// The generalized `m`-gon built on the flags of an incidence geometry.
/// Generator `s` changes the point of a flag, `t` changes its line.
#[derive(Clone, Debug)]
pub struct MgonBuilding {
    inner: FiniteBuilding,
    geometry: IncidenceGeometry,
    m: usize,
}

impl MgonBuilding {
    /// Validates the geometry as a generalized polygon and builds its flags.
    pub fn new(geometry: IncidenceGeometry) -> Result<Self, BuildingError> {
        let p = geometry.polygon_parameters();
        let m = p.diameter;
        if !p.connected || m < 2 || p.girth != 2 * m || p.min_degree < 2 {
            return Err(BuildingError::NotPolygon {
                girth: p.girth,
                diameter: p.diameter,
            });
        }
        Self::unchecked(geometry, m)
    }

    /// Builds the chamber system without validating the geometry, for use
    /// with the building validator.
    pub fn unchecked(geometry: IncidenceGeometry, m: usize) -> Result<Self, BuildingError> {
        let system = CoxeterSystem::dihedral(Order::Finite(m as u32));
        let flags = geometry.flags();
        let labels = flags
            .iter()
            .map(|&(p, l)| format!("({},{})", geometry.point_name(p), geometry.line_name(l)))
            .collect();
        let keys = vec![
            flags.iter().map(|&(_, l)| l).collect::<Vec<_>>(),
            flags.iter().map(|&(p, _)| p).collect::<Vec<_>>(),
        ];
        let thick = geometry.polygon_parameters().min_degree >= 3;
        let inner = FiniteBuilding::from_panel_keys(system, Family::Mgon, labels, keys, thick, Execution::default())?;
        Ok(Self { inner, geometry, m })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn geometry(&self) -> &IncidenceGeometry {
        &self.geometry
    }

    pub fn finite(&self) -> &FiniteBuilding {
        &self.inner
    }

    pub fn flag_index(&self, p: usize, l: usize) -> Option<usize> {
        self.geometry.flags().binary_search(&(p, l)).ok()
    }

    fn automorphism(&self, spec: &AutomorphismSpec) -> Result<BuildingAutomorphism<usize>, BuildingError> {
        let map = match spec {
            AutomorphismSpec::Identity => IncidenceMap::identity(&self.geometry),
            AutomorphismSpec::Incidence(map) => map.clone(),
            other => return Err(BuildingError::UnsupportedSpec(other.name())),
        };
        self.geometry.check_map(&map)?;
        let chamber_map = self
            .geometry
            .flags()
            .iter()
            .map(|&(p, l)| {
                let (p2, l2) = map.flag_image(p, l);
                self.flag_index(p2, l2).expect("checked flag image")
            })
            .collect();
        let sigma = if map.duality { vec![1, 0] } else { vec![0, 1] };
        self.inner
            .automorphism_from_map(spec.name(), chamber_map, sigma, Execution::default())
    }

    /// The transvection `v ↦ v + B(v, x)·x` of W(2) with centre `x` (a point
    /// index of [`IncidenceGeometry::symplectic_quadrangle_f2`]).
    pub fn symplectic_elation(&self, centre: usize) -> Result<IncidenceMap, BuildingError> {
        let space = SymplecticSpace::new(2);
        let x = centre as u32 + 1;
        let point_map = (0..self.geometry.num_points())
            .map(|p| {
                let v = p as u32 + 1;
                let image = if space.form(v, x) == 1 { v ^ x } else { v };
                image as usize - 1
            })
            .collect();
        self.geometry.collineation_from_points(point_map)
    }
}

delegate_finite!(MgonBuilding);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::buildings::{opposite, Building};

    #[test]
    fn fano_parameters() {
        let g = IncidenceGeometry::fano();
        assert_eq!(g.flags().len(), 21);
        let p = g.polygon_parameters();
        assert_eq!((p.girth, p.diameter, p.min_degree), (6, 3, 3));
        let b = MgonBuilding::new(g).unwrap();
        assert_eq!(b.m(), 3);
        assert_eq!(b.finite().len(), 21);
        for c in 0..21 {
            for s in 0..2 {
                assert_eq!(b.panel(&c, s).unwrap().len(), 3);
            }
        }
    }

    #[test]
    fn quadrangle_parameters() {
        let g = IncidenceGeometry::symplectic_quadrangle_f2();
        assert_eq!((g.num_points(), g.num_lines(), g.flags().len()), (15, 15, 45));
        let p = g.polygon_parameters();
        assert_eq!((p.girth, p.diameter), (8, 4));
        let b = MgonBuilding::new(g).unwrap();
        assert_eq!(b.m(), 4);
        assert!(b.claims_thick());
    }

    #[test]
    fn cycle_is_thin_polygon() {
        let b = MgonBuilding::new(IncidenceGeometry::cycle(8).unwrap()).unwrap();
        assert_eq!(b.m(), 4);
        assert!(!b.claims_thick());
        assert_eq!(b.panel(&0, 0).unwrap().len(), 2);
        assert!(b.finite().validate(Execution::default()).passed());
    }

    #[test]
    fn non_polygon_rejected() {
        let g = IncidenceGeometry::fano().without_flag(0);
        assert!(matches!(MgonBuilding::new(g), Err(BuildingError::NotPolygon { .. })));
    }

    #[test]
    fn parse_round_trip_and_errors() {
        let g = IncidenceGeometry::fano();
        assert_eq!(IncidenceGeometry::parse(&g.to_text()).unwrap(), g);
        assert!(IncidenceGeometry::parse("point a\nflag a b\n").is_err());
        assert!(IncidenceGeometry::parse("pointy a\n").is_err());
        assert!(IncidenceGeometry::parse("point a\npoint a\n").is_err());
    }

    #[test]
    fn vertex_balls() {
        let f = IncidenceGeometry::fano();
        let x = Vertex::Point(0);
        assert_eq!(f.vertex_ball(x, 0), BTreeSet::from([x]));
        let b1 = f.vertex_ball(x, 1);
        assert_eq!(b1.len(), 4);
        assert_eq!(b1.iter().filter(|v| !v.is_point()).count(), 3);
        let q = IncidenceGeometry::symplectic_quadrangle_f2();
        let b2 = q.vertex_ball(Vertex::Point(0), 2);
        assert_eq!(b2.iter().filter(|v| !v.is_point()).count(), 3);
        assert_eq!(b2.iter().filter(|v| v.is_point()).count(), 7);
    }

    #[test]
    fn fano_weyl_distance_table() {
        let b = MgonBuilding::new(IncidenceGeometry::fano()).unwrap();
        let mut max = 0;
        for c in 0..21 {
            let mut opposite_count = 0;
            for d in 0..21 {
                let w = b.weyl_distance(&c, &d).unwrap();
                let back = b.weyl_distance(&d, &c).unwrap();
                assert_eq!(b.system().inverse(&w), back);
                max = max.max(w.len());
                if opposite(&b, &c, &d).unwrap() {
                    opposite_count += 1;
                }
            }
            assert!(opposite_count > 0);
            assert!(!opposite(&b, &c, &c).unwrap());
        }
        assert_eq!(max, 3);
    }

    #[test]
    fn quadrangle_duality_exists() {
        let b = MgonBuilding::new(IncidenceGeometry::symplectic_quadrangle_f2()).unwrap();
        let d = b.geometry().find_duality().expect("W(2) is self-dual");
        let phi = b.make_automorphism(&AutomorphismSpec::Incidence(d)).unwrap();
        assert_eq!(phi.sigma(), &[1, 0]);
        assert!(IncidenceGeometry::fano().find_duality().is_some());
    }

    #[test]
    fn bad_incidence_map_rejected() {
        let b = MgonBuilding::new(IncidenceGeometry::fano()).unwrap();
        let mut map = IncidenceMap::identity(b.geometry());
        map.line_map.swap(0, 1);
        let e = b.make_automorphism(&AutomorphismSpec::Incidence(map)).unwrap_err();
        assert!(matches!(e, BuildingError::NotAutomorphism(_)));
    }

    #[test]
    fn elation_fixes_perp() {
        let b = MgonBuilding::new(IncidenceGeometry::symplectic_quadrangle_f2()).unwrap();
        let e = b.symplectic_elation(0).unwrap();
        let ball = b.geometry().vertex_ball(Vertex::Point(0), 2);
        assert!(ball.iter().all(|&v| e.vertex_image(v) == v));
        assert!(!e.is_identity());
    }
}
