//! Floating-point realization of the canonical representation and the Tits
//! cone, used to cross-check the word-exact predicates.
//!
//! Points of `V*` are stored by their coordinates `x_t = ⟨x, e_t⟩`, so the
//! fundamental chamber is the open positive orthant and `w` acts on `V*` by
//! `x ↦ M(w⁻¹)ᵀ x`, where `M(w)` is the matrix of `w` on `V`.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::coxeter::{cosine_entry, CoxeterError, CoxeterSystem, Element};
use crate::par::{self, Execution};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Lower end of the sampling interval for positive cell coordinates.
const SAMPLE_FLOOR: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConeError {
    #[error("pairing {pairing:e} is within tolerance of zero at a chamber interior point")]
    Degenerate { pairing: f64 },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("soundness violation: {0}")]
    Soundness(String),
    #[error(transparent)]
    Engine(#[from] CoxeterError),
}

/// Which open halfspace of `H_s` a chamber lies in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Positive,
    Negative,
}

/// Numerical sign of a pairing, with zero inside the tolerance band.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Sign {
    Positive,
    Zero,
    Negative,
}

impl Sign {
    pub fn of(x: f64, tol: f64) -> Self {
        if x > tol {
            Sign::Positive
        } else if x < -tol {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Positive => '+',
            Sign::Zero => '0',
            Sign::Negative => '-',
        }
    }
}

/// Numerical realization of `(W, S)` acting on `V` and `V*`.
#[derive(Clone, Debug)]
pub struct ConeChart {
    form: DMatrix<f64>,
    gens: Vec<DMatrix<f64>>,
    reference: DVector<f64>,
    tol: f64,
}

impl ConeChart {
    pub fn build(sys: &CoxeterSystem) -> Self {
        let n = sys.rank();
        let form = DMatrix::from_fn(n, n, |i, j| cosine_entry(sys.order(i, j)));
        // s(e_t) = e_t - 2 B(e_s, e_t) e_s: only row s differs from the identity.
        let gens = (0..n)
            .map(|s| {
                let mut m = DMatrix::identity(n, n);
                for t in 0..n {
                    m[(s, t)] -= 2.0 * form[(s, t)];
                }
                m
            })
            .collect();
        Self {
            form,
            gens,
            reference: DVector::from_element(n, 1.0),
            tol: DEFAULT_TOLERANCE,
        }
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn dimension(&self) -> usize {
        self.reference.len()
    }

    pub fn bilinear_form(&self) -> &DMatrix<f64> {
        &self.form
    }

    pub fn generator_matrix(&self, s: usize) -> &DMatrix<f64> {
        &self.gens[s]
    }

    pub fn reference_point(&self) -> &DVector<f64> {
        &self.reference
    }

    /// Matrix of `w` acting on `V`.
    pub fn matrix_of(&self, w: &Element) -> DMatrix<f64> {
        let n = self.dimension();
        w.word()
            .iter()
            .fold(DMatrix::identity(n, n), |acc, &s| acc * &self.gens[s])
    }

    /// Matrix of `w⁻¹` acting on `V`.
    pub fn inverse_matrix_of(&self, w: &Element) -> DMatrix<f64> {
        let n = self.dimension();
        w.word()
            .iter()
            .fold(DMatrix::identity(n, n), |acc, &s| &self.gens[s] * acc)
    }

    /// Image of the coordinate vector `x` under the dual action of `w`.
    pub fn act_dual(&self, w: &Element, x: &DVector<f64>) -> DVector<f64> {
        self.inverse_matrix_of(w).transpose() * x
    }

    /// Interior point `w·x₀` of the chamber `wC₀`.
    pub fn chamber_point(&self, w: &Element) -> DVector<f64> {
        self.act_dual(w, &self.reference)
    }

    /// Relative-interior point of the cell `wA_J`: coordinates 0 on `J`, 1
    /// elsewhere, transported by `w`.
    pub fn cell_point(&self, w: &Element, j: &BTreeSet<usize>) -> DVector<f64> {
        let x = DVector::from_fn(self.dimension(), |t, _| if j.contains(&t) { 0.0 } else { 1.0 });
        self.act_dual(w, &x)
    }

    /// Sign of `⟨chamber_point(w), e_s⟩`.
    pub fn side_of_wall(&self, w: &Element, s: usize) -> Result<Side, ConeError> {
        let pairing = self.chamber_point(w)[s];
        match Sign::of(pairing, self.tol) {
            Sign::Positive => Ok(Side::Positive),
            Sign::Negative => Ok(Side::Negative),
            Sign::Zero => Err(ConeError::Degenerate { pairing }),
        }
    }

    /// Whether `H_s` is a wall of `wC₀`, decided by whether some facet sample
    /// point of `wC₀` lies on `H_s`. A cell lies in a wall or strictly on one
    /// side of it, so one interior point decides the whole facet.
    pub fn is_wall_of_chamber(&self, s: usize, w: &Element) -> bool {
        (0..self.dimension()).any(|t| {
            let p = self.cell_point(w, &BTreeSet::from([t]));
            p[s].abs() <= self.tol
        })
    }

    pub fn signs(&self, p: &DVector<f64>) -> Vec<Sign> {
        p.iter().map(|&x| Sign::of(x, self.tol)).collect()
    }

    /// Largest deviation of `M_s²` from the identity over all generators.
    pub fn involution_defect(&self) -> f64 {
        let n = self.dimension();
        self.gens
            .iter()
            .map(|m| (m * m - DMatrix::<f64>::identity(n, n)).amax())
            .fold(0.0, f64::max)
    }

    /// Largest deviation of `M_sᵀ B M_s` from `B`.
    pub fn form_defect(&self) -> f64 {
        self.gens
            .iter()
            .map(|m| (m.transpose() * &self.form * m - &self.form).amax())
            .fold(0.0, f64::max)
    }
}

/// Word-exact side: positive iff `l(sw) > l(w)`.
pub fn side_of_wall(sys: &CoxeterSystem, w: &Element, s: usize) -> Side {
    if sys.left_descent(s, w) {
        Side::Negative
    } else {
        Side::Positive
    }
}

/// Word-exact wall test: `H_s` is a wall of `wC₀` iff `w⁻¹sw ∈ S`.
pub fn is_wall_of_chamber(sys: &CoxeterSystem, s: usize, w: &Element) -> Result<bool, CoxeterError> {
    Ok(sys.conjugate_by(w, s)?.len() == 1)
}

/// A cell `wA_J`, stored by its minimal coset representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Face {
    pub coset_rep: Element,
    pub j: BTreeSet<usize>,
}

impl Face {
    pub fn new(sys: &CoxeterSystem, w: &Element, j: BTreeSet<usize>) -> Self {
        Self {
            coset_rep: sys.min_coset_rep(w, &j),
            j,
        }
    }
}

/// A wall, identified by its reflection `wsw⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WallId {
    pub reflection: Element,
}

impl WallId {
    /// The wall `wH_s`.
    pub fn new(sys: &CoxeterSystem, w: &Element, s: usize) -> Result<Self, CoxeterError> {
        Ok(Self {
            reflection: sys.conjugate_by(&sys.inverse(w), s)?,
        })
    }
}

#[derive(Clone, Debug)]
pub struct Cell {
    pub face: Face,
    pub sample: DVector<f64>,
    pub support: Vec<WallId>,
}

/// Every cell `wA_J` whose minimal coset representative has length at most
/// `max_len`, ordered by representative then `J`.
pub fn enumerate_cells(sys: &CoxeterSystem, chart: &ConeChart, max_len: usize) -> Result<Vec<Cell>, CoxeterError> {
    let n = sys.rank();
    let mut cells = Vec::new();
    for w in sys.elements_up_to(max_len)? {
        let descents = sys.right_descents(&w);
        for mask in 0..(1usize << n) {
            let j: BTreeSet<usize> = (0..n).filter(|t| mask >> t & 1 == 1).collect();
            if !descents.is_disjoint(&j) {
                continue;
            }
            let support = j
                .iter()
                .map(|&s| WallId::new(sys, &w, s))
                .collect::<Result<Vec<_>, _>>()?;
            cells.push(Cell {
                sample: chart.cell_point(&w, &j),
                face: Face {
                    coset_rep: w.clone(),
                    j,
                },
                support,
            });
        }
    }
    Ok(cells)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lemma2Witness {
    pub generator: usize,
    /// Generators `s` with `H_s` a wall of `wC₀`.
    pub shared_walls: BTreeSet<usize>,
    /// Face `wA_K` of `wC₀` whose support is the intersection of the shared walls.
    pub face: BTreeSet<usize>,
}

/// Geometric witness: a wall of `C₀` that is not a wall of `wC₀` and does
/// not separate the two chambers. The result is re-checked word-exactly.
pub fn lemma2_witness(sys: &CoxeterSystem, chart: &ConeChart, w: &Element) -> Result<Lemma2Witness, ConeError> {
    if w.is_identity() {
        return Err(ConeError::Precondition("w must be nontrivial".into()));
    }
    if !sys.is_irreducible() || sys.is_finite() {
        return Err(ConeError::Precondition("system must be irreducible and infinite".into()));
    }
    let n = sys.rank();
    let tol = chart.tolerance();
    let m = chart.matrix_of(w);
    // Columns of M(w) are the roots w·e_t; H_s is the wall wH_t iff w·e_t = ±e_s.
    let mut shared_walls = BTreeSet::new();
    let mut face = BTreeSet::new();
    for t in 0..n {
        let col = m.column(t);
        if let Some(s) = (0..n).find(|&s| (0..n).all(|u| u == s || col[u].abs() <= tol) && col[s].abs() > tol) {
            shared_walls.insert(s);
            face.insert(t);
        }
    }
    if shared_walls.len() == n {
        return Err(ConeError::Soundness(format!(
            "{} shares every wall with the fundamental chamber",
            sys.format(w)
        )));
    }
    let b = chart.cell_point(w, &face);
    let generator = (0..n)
        .filter(|s| !shared_walls.contains(s))
        .find(|&s| b[s] > tol)
        .ok_or_else(|| {
            ConeError::Soundness(format!(
                "face of {} lies in the negative of a face of the fundamental chamber",
                sys.format(w)
            ))
        })?;
    if is_wall_of_chamber(sys, generator, w)? || side_of_wall(sys, w, generator) != Side::Positive {
        return Err(ConeError::Soundness(format!(
            "geometric witness {} fails the word-exact conditions for {}",
            sys.labels()[generator],
            sys.format(w)
        )));
    }
    Ok(Lemma2Witness {
        generator,
        shared_walls,
        face,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Disagreement {
    pub word: String,
    pub generator: String,
    pub predicate: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossCheckReport {
    pub max_len: usize,
    pub pairs_checked: usize,
    pub disagreements: Vec<Disagreement>,
}

impl CrossCheckReport {
    pub fn passed(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// Compares the word-exact side and wall predicates with the chart for every
/// `(w, s)` with `l(w) ≤ max_len`.
pub fn cross_check(sys: &CoxeterSystem, chart: &ConeChart, max_len: usize, exec: Execution) -> Result<CrossCheckReport, CoxeterError> {
    let elements = sys.elements_up_to(max_len)?;
    let per_element = par::map(exec, &elements, |w| -> Result<Vec<Disagreement>, CoxeterError> {
        let mut out = Vec::new();
        for s in 0..sys.rank() {
            let numeric_side = chart.side_of_wall(w, s).ok();
            if numeric_side != Some(side_of_wall(sys, w, s)) {
                out.push(Disagreement {
                    word: sys.format(w),
                    generator: sys.labels()[s].clone(),
                    predicate: "side-of-wall",
                });
            }
            if is_wall_of_chamber(sys, s, w)? != chart.is_wall_of_chamber(s, w) {
                out.push(Disagreement {
                    word: sys.format(w),
                    generator: sys.labels()[s].clone(),
                    predicate: "wall-of-chamber",
                });
            }
        }
        Ok(out)
    });
    let mut disagreements = Vec::new();
    for d in per_element {
        disagreements.extend(d?);
    }
    Ok(CrossCheckReport {
        max_len,
        pairs_checked: elements.len() * sys.rank(),
        disagreements,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeViolation {
    pub cell_rep: String,
    pub cell_j: Vec<String>,
    pub point: Vec<f64>,
    pub chamber: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VinbergReport {
    pub max_len: usize,
    pub samples_per_cell: usize,
    pub seed: u64,
    pub cells_sampled: usize,
    pub points_tested: usize,
    pub chambers: usize,
    pub violations: Vec<ProbeViolation>,
}

/// Samples nonzero points from cells up to `max_len` and reports every `x`
/// for which `-x` lies in one of the enumerated closed chambers.
pub fn vinberg_probe(
    sys: &CoxeterSystem,
    chart: &ConeChart,
    max_len: usize,
    samples_per_cell: usize,
    seed: u64,
    exec: Execution,
) -> Result<VinbergReport, CoxeterError> {
    let n = sys.rank();
    let chambers = sys.elements_up_to(max_len)?;
    let chamber_mats: Vec<DMatrix<f64>> = chambers.iter().map(|u| chart.matrix_of(u).transpose()).collect();
    let cells: Vec<Cell> = enumerate_cells(sys, chart, max_len)?
        .into_iter()
        .filter(|c| c.face.j.len() < n)
        .collect();

    // Points are drawn sequentially so the sample set does not depend on the
    // execution strategy.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<(usize, DVector<f64>)> = Vec::with_capacity(cells.len() * samples_per_cell);
    for (ci, cell) in cells.iter().enumerate() {
        for _ in 0..samples_per_cell {
            let x = DVector::from_fn(n, |t, _| {
                if cell.face.j.contains(&t) {
                    0.0
                } else {
                    rng.gen_range(SAMPLE_FLOOR..=1.0)
                }
            });
            points.push((ci, chart.act_dual(&cell.face.coset_rep, &x)));
        }
    }

    let tol = chart.tolerance();
    let hits = par::map(exec, &points, |(ci, x)| {
        let neg = -x;
        chamber_mats
            .iter()
            .position(|mt| (mt * &neg).iter().all(|&v| v >= -tol))
            .map(|k| (*ci, x.clone(), k))
    });
    let violations = hits
        .into_iter()
        .flatten()
        .map(|(ci, x, k)| ProbeViolation {
            cell_rep: sys.format(&cells[ci].face.coset_rep),
            cell_j: cells[ci].face.j.iter().map(|&s| sys.labels()[s].clone()).collect(),
            point: x.iter().copied().collect(),
            chamber: sys.format(&chambers[k]),
        })
        .collect();
    Ok(VinbergReport {
        max_len,
        samples_per_cell,
        seed,
        cells_sampled: cells.len(),
        points_tested: points.len(),
        chambers: chambers.len(),
        violations,
    })
}
