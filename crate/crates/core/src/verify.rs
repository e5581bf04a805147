//! The end-to-end verification suite: nine checks covering the word
//! engine, witnesses, the cone chart, and displacement in buildings.

use std::collections::{HashMap, VecDeque};
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use serde::Serialize;

use crate::buildings::{AutomorphismSpec, Building, IncidenceGeometry, MgonBuilding, SymplecticBuilding, TreeBuilding, TreeEdge, Vertex};
use crate::coxeter::{CoxeterMatrix, CoxeterSystem, Order};
use crate::displacement::{corollary3_verify, displacement_trace, example1_verify, remark2_demo, remark5_check};
use crate::par::Execution;
use crate::tits_cone::{cross_check, vinberg_probe, ConeChart};
use crate::witness::completeness_sweep;

pub const CRITERIA: [(u8, &str, u64); 9] = [
    (1, "word engine matches Cayley-graph enumeration", 5),
    (2, "witness completeness", 30),
    (3, "word-exact and numeric wall predicates agree", 30),
    (4, "opposite-point probe", 30),
    (5, "tree displacement traces increase", 10),
    (6, "thin translation has bounded displacement", 5),
    (7, "rank-2 displacement values", 5),
    (8, "symplectic polarity never maps to an opposite chamber", 60),
    (9, "building validator", 60),
];

#[derive(Clone, Debug, Serialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
    pub budget_ms: u128,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        format!(
            "[{}] criterion {}: {} ({} ms / {} ms) {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed_ms,
            self.budget_ms,
            self.detail
        )
    }
}

type Check = Result<(bool, String), String>;

/// Runs one criterion by number (1 to 9).
pub fn run_criterion(id: u8, exec: Execution) -> Option<CriterionOutcome> {
    let &(_, name, budget) = CRITERIA.iter().find(|c| c.0 == id)?;
    let start = Instant::now();
    let result = match id {
        1 => word_engine(),
        2 => witnesses(exec),
        3 => walls(exec),
        4 => probe(exec),
        5 => traces(),
        6 => thin(),
        7 => rank_two(),
        8 => symplectic(exec),
        9 => validator(exec),
        _ => unreachable!(),
    };
    let elapsed = start.elapsed();
    let budget = Duration::from_secs(budget);
    let (ok, mut detail) = result.unwrap_or_else(|e| (false, format!("error: {e}")));
    if elapsed > budget {
        detail.push_str("; over time budget");
    }
    Some(CriterionOutcome {
        id,
        name,
        passed: ok && elapsed <= budget,
        detail,
        elapsed_ms: elapsed.as_millis(),
        budget_ms: budget.as_millis(),
    })
}

pub fn run_all(exec: Execution) -> Vec<CriterionOutcome> {
    CRITERIA.iter().filter_map(|c| run_criterion(c.0, exec)).collect()
}

/// Breadth-first search of the Cayley graph in the chart's matrix group;
/// returns the distance of every group element from the identity, keyed by
/// the rounded matrix entries.
fn matrix_cayley_bfs(chart: &ConeChart, rank: usize, limit: usize) -> HashMap<Vec<i64>, usize> {
    let key = |m: &DMatrix<f64>| m.iter().map(|x| (x * 1e6).round() as i64).collect::<Vec<_>>();
    let id = DMatrix::<f64>::identity(rank, rank);
    let mut dist = HashMap::from([(key(&id), 0usize)]);
    let mut queue = VecDeque::from([id]);
    while let Some(m) = queue.pop_front() {
        let d = dist[&key(&m)];
        if dist.len() > limit {
            break;
        }
        for s in 0..rank {
            let next = &m * chart.generator_matrix(s);
            dist.entry(key(&next)).or_insert_with(|| {
                queue.push_back(next.clone());
                d + 1
            });
        }
    }
    dist
}

fn word_engine() -> Check {
    let systems = [
        ("A2", CoxeterSystem::type_a(2), 6),
        ("I2(4)", CoxeterSystem::dihedral(Order::Finite(4)), 8),
        ("A3", CoxeterSystem::type_a(3), 24),
    ];
    let mut notes = Vec::new();
    let mut ok = true;
    for (name, sys, expected) in systems {
        let elements = sys.elements_up_to(10).map_err(|e| e.to_string())?;
        let chart = ConeChart::build(&sys);
        let bfs = matrix_cayley_bfs(&chart, sys.rank(), 1000);
        let lengths_match = elements.iter().all(|w| {
            let m = chart.matrix_of(w);
            let k: Vec<i64> = m.iter().map(|x| (x * 1e6).round() as i64).collect();
            bfs.get(&k) == Some(&w.len())
        });
        ok &= elements.len() == expected && bfs.len() == expected && lengths_match;
        notes.push(format!("{name}: {} elements", elements.len()));
    }
    Ok((ok, notes.join(", ")))
}

fn witnesses(exec: Execution) -> Check {
    let dinf = CoxeterSystem::infinite_dihedral();
    let other = CoxeterSystem::new(
        CoxeterMatrix::from_edges(&["u", "v"], &[(0, 1, Order::Infinite)]).map_err(|e| e.to_string())?,
    );
    let union = CoxeterSystem::disjoint_union(&dinf, &other).map_err(|e| e.to_string())?;
    let mut notes = Vec::new();
    let mut ok = true;
    for (name, sys) in [("D∞", dinf), ("Ã2", CoxeterSystem::affine_a2()), ("D∞ ⊔ D∞", union)] {
        let r = completeness_sweep(&sys, 8, exec).map_err(|e| e.to_string())?;
        ok &= r.passed();
        notes.push(format!("{name}: {}/{}", r.certified, r.checked));
    }
    Ok((ok, notes.join(", ")))
}

fn walls(exec: Execution) -> Check {
    let mut notes = Vec::new();
    let mut ok = true;
    for (name, sys) in [
        ("D∞", CoxeterSystem::infinite_dihedral()),
        ("A2", CoxeterSystem::type_a(2)),
        ("Ã2", CoxeterSystem::affine_a2()),
    ] {
        let chart = ConeChart::build(&sys);
        let r = cross_check(&sys, &chart, 8, exec).map_err(|e| e.to_string())?;
        ok &= r.passed();
        notes.push(format!("{name}: {} disagreements in {} pairs", r.disagreements.len(), r.pairs_checked));
    }
    Ok((ok, notes.join(", ")))
}

fn probe(exec: Execution) -> Check {
    let mut notes = Vec::new();
    let mut ok = true;
    for (name, sys, expect_none) in [
        ("D∞", CoxeterSystem::infinite_dihedral(), true),
        ("Ã2", CoxeterSystem::affine_a2(), true),
        ("A2", CoxeterSystem::type_a(2), false),
    ] {
        let chart = ConeChart::build(&sys);
        let r = vinberg_probe(&sys, &chart, 10, 10, 0, exec).map_err(|e| e.to_string())?;
        let v = r.violations.len();
        ok &= if expect_none { v == 0 } else { v >= 1 };
        notes.push(format!("{name}: {v} violations in {} points", r.points_tested));
    }
    Ok((ok, notes.join(", ")))
}

pub const TRACE_STARTS: [&[u8]; 5] = [&[1], &[2], &[1, 0], &[1, 1], &[2, 0]];
pub const TRACE_STEPS: usize = 20;

fn traces() -> Check {
    let tree = TreeBuilding::new(2, 4).map_err(|e| e.to_string())?;
    let phi = tree
        .make_automorphism(&AutomorphismSpec::SubtreeSwap {
            vertex: vec![],
            first: 1,
            second: 2,
        })
        .map_err(|e| e.to_string())?;
    let mut finals = Vec::new();
    let mut ok = true;
    for start in TRACE_STARTS {
        let r = displacement_trace(&tree, &phi, &TreeEdge(start.to_vec()), TRACE_STEPS).map_err(|e| e.to_string())?;
        ok &= r.entries.len() == TRACE_STEPS + 1 && r.strictly_increasing();
        finals.push(r.disp.to_string());
    }
    Ok((ok, format!("final displacements {}", finals.join(", "))))
}

fn thin() -> Check {
    let r = remark2_demo().map_err(|e| e.to_string())?;
    Ok((
        r.passed,
        format!(
            "{} chambers, constant {:?}, {} thickness errors",
            r.examined, r.constant, r.thickness_errors
        ),
    ))
}

fn rank_two() -> Check {
    let err = |e: &dyn std::fmt::Display| e.to_string();
    let fano = MgonBuilding::new(IncidenceGeometry::fano()).map_err(|e| err(&e))?;
    let map = fano
        .geometry()
        .collineation_from_points((0..7).map(|p| (2 * p) % 7).collect())
        .map_err(|e| err(&e))?;
    let phi = fano.make_automorphism(&AutomorphismSpec::Incidence(map)).map_err(|e| err(&e))?;
    let a = corollary3_verify(&fano, &phi).map_err(|e| err(&e))?;

    let geom = IncidenceGeometry::symplectic_quadrangle_f2();
    let quad = MgonBuilding::new(geom.clone()).map_err(|e| err(&e))?;
    let duality = geom.find_duality().ok_or("no duality found")?;
    let phi = quad.make_automorphism(&AutomorphismSpec::Incidence(duality)).map_err(|e| err(&e))?;
    let b = corollary3_verify(&quad, &phi).map_err(|e| err(&e))?;

    let elation = quad.symplectic_elation(0).map_err(|e| err(&e))?;
    let phi = quad.make_automorphism(&AutomorphismSpec::Incidence(elation)).map_err(|e| err(&e))?;
    let c = corollary3_verify(&quad, &phi).map_err(|e| err(&e))?;
    let r5 = remark5_check(&quad, &phi, Vertex::Point(0)).map_err(|e| err(&e))?;

    let ok = a.passed && a.disp == 3 && b.passed && b.disp == 4 && c.passed && c.disp == 3 && r5.passed;
    Ok((
        ok,
        format!(
            "Fano collineation {}, quadrangle duality {}, elation {} (vertex moves ≤ {})",
            a.disp, b.disp, c.disp, r5.max_vertex_displacement
        ),
    ))
}

fn symplectic(exec: Execution) -> Check {
    let r = example1_verify(2, exec).map_err(|e| e.to_string())?;
    Ok((
        r.passed,
        format!(
            "{} chambers, {} opposite by δ, {} by subspaces, {} pair disagreements, max displacement {}",
            r.chambers, r.opposite_by_weyl, r.opposite_by_subspaces, r.criteria_disagreements, r.max_displacement
        ),
    ))
}

fn validator(exec: Execution) -> Check {
    let fano = MgonBuilding::new(IncidenceGeometry::fano()).map_err(|e| e.to_string())?;
    let quad = MgonBuilding::new(IncidenceGeometry::symplectic_quadrangle_f2()).map_err(|e| e.to_string())?;
    let symp = SymplecticBuilding::with_execution(2, exec).map_err(|e| e.to_string())?;
    let broken = MgonBuilding::unchecked(IncidenceGeometry::fano().without_flag(0), 3).map_err(|e| e.to_string())?;
    let counts = [
        fano.finite().validate(exec).violation_count,
        quad.finite().validate(exec).violation_count,
        symp.finite().validate(exec).violation_count,
    ];
    let control = broken.finite().validate(exec).violation_count;
    Ok((
        counts.iter().all(|&c| c == 0) && control >= 1,
        format!(
            "violations: Fano {}, quadrangle {}, symplectic {}; corrupted control {}",
            counts[0], counts[1], counts[2], control
        ),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_criteria_pass() {
        for id in [1, 2, 6, 7, 9] {
            let o = run_criterion(id, Execution::default()).unwrap();
            assert!(o.passed, "{}", o.line());
        }
        assert!(run_criterion(10, Execution::default()).is_none());
    }
}
