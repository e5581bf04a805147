//! Acceptance suite. Each criterion is checked against an oracle built in
//! this file (permutation Cayley graphs, flag-graph BFS, free reduction in
//! D∞, tree path lengths) and prints one PASS/FAIL line.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use coxdisp::buildings::{
    AutomorphismSpec, Building, IncidenceGeometry, IncidenceMap, MgonBuilding, SymplecticBuilding, TreeBuilding, TreeEdge, Vertex,
};
use coxdisp::displacement::{self, DisplacementError};
use coxdisp::tits_cone::{cross_check, vinberg_probe, ConeChart};
use coxdisp::witness::find_witness;
use coxdisp::{CoxeterMatrix, CoxeterSystem, Element, Execution, Order};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------------------
// 1. Word engine against permutation Cayley graphs

type Perm = Vec<i32>;

/// Signed permutations act on `±1..=±n`; plain permutations are the
/// all-positive case.
fn compose(a: &Perm, b: &Perm) -> Perm {
    // (a ∘ b)(i) = a(b(i)), applying b first.
    b.iter()
        .map(|&x| {
            let y = a[(x.unsigned_abs() - 1) as usize];
            if x < 0 {
                -y
            } else {
                y
            }
        })
        .collect()
}

fn transposition(n: usize, i: usize) -> Perm {
    let mut p: Perm = (1..=n as i32).collect();
    p.swap(i, i + 1);
    p
}

fn cayley_bfs(gens: &[Perm]) -> HashMap<Perm, usize> {
    let id: Perm = (1..=gens[0].len() as i32).collect();
    let mut dist = HashMap::from([(id.clone(), 0)]);
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        let d = dist[&p];
        for g in gens {
            let q = compose(&p, g);
            if !dist.contains_key(&q) {
                dist.insert(q.clone(), d + 1);
                queue.push_back(q);
            }
        }
    }
    dist
}

fn criterion_1() -> Outcome {
    let cases: Vec<(&str, CoxeterSystem, Vec<Perm>, usize)> = vec![
        ("A2", CoxeterSystem::type_a(2), (0..2).map(|i| transposition(3, i)).collect(), 6),
        // I2(4) as the symmetries of a square: swap the coordinates, negate the second.
        ("I2(4)", CoxeterSystem::dihedral(Order::Finite(4)), vec![vec![2, 1], vec![1, -2]], 8),
        ("A3", CoxeterSystem::type_a(3), (0..3).map(|i| transposition(4, i)).collect(), 24),
    ];
    let mut notes = Vec::new();
    for (name, sys, gens, expected) in cases {
        let bfs = cayley_bfs(&gens);
        ensure(bfs.len() == expected, || format!("{name}: oracle has {} elements", bfs.len()))?;
        let elements = sys.elements_up_to(10).map_err(|e| e.to_string())?;
        let distinct: BTreeSet<&Element> = elements.iter().collect();
        ensure(distinct.len() == expected, || format!("{name}: {} distinct elements", distinct.len()))?;
        let mut images = BTreeSet::new();
        for w in &elements {
            let id: Perm = (1..=gens[0].len() as i32).collect();
            let p = w.word().iter().fold(id, |acc, &s| compose(&acc, &gens[s]));
            ensure(bfs[&p] == w.len(), || format!("{name}: length of {} is {} but BFS gives {}", sys.format(w), w.len(), bfs[&p]))?;
            images.insert(p);
        }
        ensure(images.len() == expected, || format!("{name}: two elements share a permutation"))?;
        notes.push(format!("{name} {expected}"));
    }
    Ok(notes.join(", "))
}

// ---------------------------------------------------------------------------
// 2. Witness completeness, certificates checked in the matrix representation

fn word_matrix(chart: &ConeChart, letters: &[usize]) -> nalgebra::DMatrix<f64> {
    let n = chart.dimension();
    letters
        .iter()
        .fold(nalgebra::DMatrix::identity(n, n), |acc, &s| acc * chart.generator_matrix(s))
}

fn criterion_2() -> Outcome {
    let dinf = CoxeterSystem::infinite_dihedral();
    let other = CoxeterSystem::new(CoxeterMatrix::from_edges(&["u", "v"], &[(0, 1, Order::Infinite)]).unwrap());
    let union = CoxeterSystem::disjoint_union(&dinf, &other).unwrap();
    // Non-identity elements up to length 8: 2 per length, 3k per length k,
    // and 4k per length k for the product.
    let cases = [("D∞", dinf, 16), ("Ã2", CoxeterSystem::affine_a2(), 108), ("D∞ ⊔ D∞", union, 144)];
    let mut notes = Vec::new();
    for (name, sys, expected) in cases {
        let chart = ConeChart::build(&sys);
        let x0 = chart.reference_point().clone();
        let elements: Vec<Element> = sys.elements_up_to(8).unwrap().into_iter().filter(|w| !w.is_identity()).collect();
        ensure(elements.len() == expected, || format!("{name}: {} elements", elements.len()))?;
        for w in &elements {
            let r = find_witness(&sys, w).map_err(|e| format!("{name}: {}: {e}", sys.format(w)))?;
            let s = r.generator;
            // l(sw) > l(w) iff wC₀ and C₀ lie on the same side of H_s.
            let inv: Vec<usize> = w.word().iter().rev().copied().collect();
            let point = word_matrix(&chart, &inv).transpose() * &x0;
            ensure(point[s] > 1e-9, || format!("{name}: {} moves to the far side of H_{s}", sys.format(w)))?;
            // w⁻¹sw is not a simple reflection.
            let mut letters = inv.clone();
            letters.push(s);
            letters.extend(w.word());
            let conj = word_matrix(&chart, &letters);
            let is_simple = (0..sys.rank()).any(|t| (&conj - chart.generator_matrix(t)).amax() < 1e-9);
            ensure(!is_simple, || format!("{name}: w⁻¹sw is simple for w = {}", sys.format(w)))?;
        }
        notes.push(format!("{name} {expected}/{expected}"));
    }
    Ok(notes.join(", "))
}

// ---------------------------------------------------------------------------
// 3, 4. Cone chart

fn criterion_3() -> Outcome {
    let mut notes = Vec::new();
    for (name, sys) in [
        ("D∞", CoxeterSystem::infinite_dihedral()),
        ("A2", CoxeterSystem::type_a(2)),
        ("Ã2", CoxeterSystem::affine_a2()),
    ] {
        let chart = ConeChart::build(&sys);
        let r = cross_check(&sys, &chart, 8, Execution::default()).map_err(|e| e.to_string())?;
        let expected_pairs = sys.elements_up_to(8).unwrap().len() * sys.rank();
        ensure(r.pairs_checked == expected_pairs, || format!("{name}: {} pairs", r.pairs_checked))?;
        ensure(r.disagreements.is_empty(), || format!("{name}: {:?}", r.disagreements))?;
        notes.push(format!("{name} 0/{}", r.pairs_checked));
    }
    Ok(notes.join(", "))
}

fn criterion_4() -> Outcome {
    let mut notes = Vec::new();
    for (name, sys, expect_none) in [
        ("D∞", CoxeterSystem::infinite_dihedral(), true),
        ("Ã2", CoxeterSystem::affine_a2(), true),
        ("A2", CoxeterSystem::type_a(2), false),
    ] {
        let chart = ConeChart::build(&sys);
        let r = vinberg_probe(&sys, &chart, 10, 10, 0, Execution::default()).map_err(|e| e.to_string())?;
        ensure(r.points_tested >= 10 * r.cells_sampled, || format!("{name}: too few samples"))?;
        let v = r.violations.len();
        ensure(if expect_none { v == 0 } else { v >= 1 }, || format!("{name}: {v} violations"))?;
        notes.push(format!("{name} {v}"));
    }
    Ok(notes.join(", "))
}

// ---------------------------------------------------------------------------
// 5. Tree traces, displacements recomputed from addresses

fn parse_edge(label: &str) -> Vec<u8> {
    label
        .trim_matches(['[', ']'])
        .split('.')
        .filter(|x| !x.is_empty())
        .map(|x| x.parse().unwrap())
        .collect()
}

fn vertex_distance(a: &[u8], b: &[u8]) -> usize {
    let common = a.iter().zip(b).take_while(|(x, y)| x == y).count();
    a.len() + b.len() - 2 * common
}

/// Gallery distance of two tree edges: one more than the distance between
/// their nearest endpoints.
fn edge_distance(a: &[u8], b: &[u8]) -> usize {
    if a == b {
        return 0;
    }
    let ends = |e: &[u8]| [e[..e.len() - 1].to_vec(), e.to_vec()];
    let mut best = usize::MAX;
    for x in ends(a) {
        for y in ends(b) {
            best = best.min(vertex_distance(&x, &y));
        }
    }
    best + 1
}

fn swap_root_12(e: &[u8]) -> Vec<u8> {
    let mut out = e.to_vec();
    out[0] = match e[0] {
        1 => 2,
        2 => 1,
        x => x,
    };
    out
}

fn criterion_5() -> Outcome {
    let tree = TreeBuilding::new(2, 4).map_err(|e| e.to_string())?;
    let phi = tree
        .make_automorphism(&AutomorphismSpec::SubtreeSwap {
            vertex: vec![],
            first: 1,
            second: 2,
        })
        .map_err(|e| e.to_string())?;
    let starts: [&[u8]; 5] = [&[1], &[2], &[1, 0], &[1, 1], &[2, 0]];
    let mut finals = Vec::new();
    for start in starts {
        ensure(swap_root_12(start) != start, || "start chamber is fixed".into())?;
        let r = displacement::displacement_trace(&tree, &phi, &TreeEdge(start.to_vec()), 20).map_err(|e| e.to_string())?;
        ensure(r.entries.len() == 21, || format!("trace has {} entries", r.entries.len()))?;
        let values: Vec<usize> = r
            .entries
            .iter()
            .map(|e| {
                let c = parse_edge(&e.chamber);
                edge_distance(&c, &swap_root_12(&c))
            })
            .collect();
        ensure(values == r.values(), || format!("recomputed {values:?} vs {:?}", r.values()))?;
        ensure(values.windows(2).all(|p| p[1] > p[0]), || format!("not increasing: {values:?}"))?;
        // Consecutive chambers are adjacent.
        for p in r.entries.windows(2) {
            ensure(edge_distance(&parse_edge(&p[0].chamber), &parse_edge(&p[1].chamber)) == 1, || "trace jumps".into())?;
        }
        finals.push(values[20].to_string());
    }
    Ok(format!("final displacements {}", finals.join(", ")))
}

// ---------------------------------------------------------------------------
// 6. Thin D∞

/// Free reduction in D∞ = Z/2 * Z/2: cancel equal adjacent letters.
fn free_reduce(letters: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    for x in letters {
        if out.last() == Some(&x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

fn criterion_6() -> Outcome {
    let r = displacement::remark2_demo().map_err(|e| e.to_string())?;
    ensure(r.examined == 21, || format!("{} chambers", r.examined))?;
    ensure(r.values.iter().all(|&v| v == 2), || format!("values {:?}", r.values))?;
    ensure(r.thickness_errors == r.examined, || format!("{} thickness errors", r.thickness_errors))?;
    // Oracle: C⁻¹ (s t) C for every C of length ≤ 10.
    for len in 0..=10 {
        for first in 0..2usize {
            let c: Vec<usize> = (0..len).map(|i| (first + i) % 2).collect();
            let conj = free_reduce(c.iter().rev().copied().chain([0, 1]).chain(c.iter().copied()));
            ensure(conj.len() == 2, || format!("conjugate by {c:?} has length {}", conj.len()))?;
        }
    }
    let sys = CoxeterSystem::infinite_dihedral();
    let b = coxdisp::buildings::ThinBuilding::new(sys.clone(), 32);
    let st = sys.reduce(&sys.parse_word("s t").unwrap()).unwrap();
    let phi = b.make_automorphism(&AutomorphismSpec::LeftTranslation(st)).unwrap();
    match displacement::lemma5_step(&b, &phi, &b.base_chamber()) {
        Err(DisplacementError::Thickness { .. }) => {}
        other => return Err(format!("expected a thickness error, got {other:?}")),
    }
    Ok("displacement 2 on 21 chambers, thickness error".into())
}

// ---------------------------------------------------------------------------
// 7. Rank-2 values, displacement recomputed by BFS on the flag graph

fn flag_graph_displacement(geom: &IncidenceGeometry, map: &IncidenceMap) -> usize {
    let flags = geom.flags();
    let index: HashMap<(usize, usize), usize> = flags.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let adjacent = |a: (usize, usize), b: (usize, usize)| a != b && (a.0 == b.0 || a.1 == b.1);
    let mut worst = 0;
    for (i, &(p, l)) in flags.iter().enumerate() {
        let target = index[&map.flag_image(p, l)];
        let mut dist = vec![usize::MAX; flags.len()];
        dist[i] = 0;
        let mut queue = VecDeque::from([i]);
        while let Some(c) = queue.pop_front() {
            for (d, &f) in flags.iter().enumerate() {
                if dist[d] == usize::MAX && adjacent(flags[c], f) {
                    dist[d] = dist[c] + 1;
                    queue.push_back(d);
                }
            }
        }
        worst = worst.max(dist[target]);
    }
    worst
}

fn criterion_7() -> Outcome {
    let fano = IncidenceGeometry::fano();
    ensure(fano.num_points() == 7 && fano.num_lines() == 7 && fano.flags().len() == 21, || "Fano shape".into())?;
    for p in 0..7 {
        for q in p + 1..7 {
            let common = fano.lines_on(p).iter().filter(|l| fano.lines_on(q).contains(l)).count();
            ensure(common == 1, || format!("points {p}, {q} share {common} lines"))?;
        }
    }
    let fano_b = MgonBuilding::new(fano.clone()).map_err(|e| e.to_string())?;
    let coll = fano.collineation_from_points((0..7).map(|p| (2 * p) % 7).collect()).map_err(|e| e.to_string())?;
    let phi = fano_b.make_automorphism(&AutomorphismSpec::Incidence(coll.clone())).map_err(|e| e.to_string())?;
    let a = displacement::corollary3_verify(&fano_b, &phi).map_err(|e| e.to_string())?;
    ensure(a.disp == 3 && flag_graph_displacement(&fano, &coll) == 3, || format!("Fano disp {}", a.disp))?;

    let quad = IncidenceGeometry::symplectic_quadrangle_f2();
    ensure(quad.flags().len() == 45, || "quadrangle has 45 flags".into())?;
    let quad_b = MgonBuilding::new(quad.clone()).map_err(|e| e.to_string())?;
    let duality = quad.find_duality().ok_or("no duality")?;
    let phi = quad_b.make_automorphism(&AutomorphismSpec::Incidence(duality.clone())).map_err(|e| e.to_string())?;
    ensure(!phi.is_type_preserving(), || "duality preserves types".into())?;
    let b = displacement::corollary3_verify(&quad_b, &phi).map_err(|e| e.to_string())?;
    ensure(b.disp == 4 && flag_graph_displacement(&quad, &duality) == 4, || format!("duality disp {}", b.disp))?;

    let elation = quad_b.symplectic_elation(0).map_err(|e| e.to_string())?;
    let phi = quad_b.make_automorphism(&AutomorphismSpec::Incidence(elation.clone())).map_err(|e| e.to_string())?;
    ensure(!elation.is_identity(), || "elation is trivial".into())?;
    let ball = quad.vertex_ball(Vertex::Point(0), 2);
    ensure(ball.iter().all(|&v| elation.vertex_image(v) == v), || "elation moves B(x, 2)".into())?;
    let c = displacement::corollary3_verify(&quad_b, &phi).map_err(|e| e.to_string())?;
    let r5 = displacement::remark5_check(&quad_b, &phi, Vertex::Point(0)).map_err(|e| e.to_string())?;
    ensure(c.disp == 3 && r5.passed && flag_graph_displacement(&quad, &elation) == 3, || format!("elation disp {}", c.disp))?;
    Ok("collineation 3, duality 4, elation 3".into())
}

// ---------------------------------------------------------------------------
// 8. Symplectic polarity

fn criterion_8() -> Outcome {
    let r = displacement::example1_verify(2, Execution::default()).map_err(|e| e.to_string())?;
    // Complete flags of F₂⁴: (2⁴−1)(2³−1)(2²−1) = 315.
    ensure(r.chambers == 15 * 7 * 3, || format!("{} chambers", r.chambers))?;
    ensure(r.opposite_by_weyl == 0 && r.opposite_by_subspaces == 0, || format!("{r:?}"))?;
    ensure(r.containment_holds == 315 && r.criteria_disagreements == 0, || format!("{r:?}"))?;
    ensure(r.max_displacement < 6, || format!("max displacement {}", r.max_displacement))?;
    // The two opposition criteria on all 315 × 315 pairs, counted directly.
    let b = SymplecticBuilding::new(2).map_err(|e| e.to_string())?;
    let mut opposite = 0;
    for c in 0..315 {
        for d in 0..315 {
            let by_weyl = b.weyl_distance(&c, &d).unwrap().len() == 6;
            ensure(by_weyl == b.subspace_opposite(c, d), || format!("criteria disagree at ({c}, {d})"))?;
            opposite += by_weyl as usize;
        }
    }
    // Each chamber of an A3 building over F₂ has q^{l(w₀)} = 64 opposites.
    ensure(opposite == 315 * 64, || format!("{opposite} opposite pairs"))?;
    Ok(format!("315 chambers non-opposite, 99225 pairs agree, max displacement {}", r.max_displacement))
}

// ---------------------------------------------------------------------------
// 9. Validator

fn criterion_9() -> Outcome {
    let exec = Execution::default();
    let fano = MgonBuilding::new(IncidenceGeometry::fano()).map_err(|e| e.to_string())?;
    let quad = MgonBuilding::new(IncidenceGeometry::symplectic_quadrangle_f2()).map_err(|e| e.to_string())?;
    let symp = SymplecticBuilding::new(2).map_err(|e| e.to_string())?;
    for (name, report) in [
        ("Fano", fano.finite().validate(exec)),
        ("quadrangle", quad.finite().validate(exec)),
        ("symplectic", symp.finite().validate(exec)),
    ] {
        ensure(report.passed(), || format!("{name}: {:?}", report.violations))?;
    }
    let broken = MgonBuilding::unchecked(IncidenceGeometry::fano().without_flag(0), 3).map_err(|e| e.to_string())?;
    let control = broken.finite().validate(exec);
    ensure(control.violation_count >= 1, || "corrupted geometry passed".into())?;
    Ok(format!("0 violations on valid buildings, {} on the corrupted control", control.violation_count))
}

fn main() -> ExitCode {
    let criteria: [(u8, &str, u64, fn() -> Outcome); 9] = [
        (1, "word engine vs Cayley graphs", 5, criterion_1),
        (2, "witness completeness", 30, criterion_2),
        (3, "wall predicates vs chart", 30, criterion_3),
        (4, "opposite-point probe", 30, criterion_4),
        (5, "tree traces", 10, criterion_5),
        (6, "thin translation", 5, criterion_6),
        (7, "rank-2 displacement values", 5, criterion_7),
        (8, "symplectic polarity", 60, criterion_8),
        (9, "building validator", 60, criterion_9),
    ];
    let mut failed = 0;
    for (id, name, budget, run) in criteria {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(budget);
        let (ok, detail) = match result {
            Ok(d) if in_time => (true, d),
            Ok(d) => (false, format!("{d}; exceeded {budget} s")),
            Err(e) => (false, e),
        };
        failed += !ok as usize;
        println!(
            "{} criterion {id} ({name}) in {:.2} s: {detail}",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
