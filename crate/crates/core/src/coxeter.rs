//! Exact word computations in a Coxeter system `(W, S)`.
//!
//! Group elements are stored as their ShortLex-least reduced word with
//! respect to the declared generator order. Reduction follows Tits's
//! solution to the word problem: a reduced word `w` followed by a letter `s`
//! fails to be reduced exactly when some word in the braid-move class of `w`
//! ends in `s`, and any two reduced words for the same element are joined by
//! braid moves.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Default cap on word lengths accepted by the engine.
pub const DEFAULT_WORD_CAP: usize = 64;

/// Upper bound on the size of a finite group table.
const GROUP_TABLE_LIMIT: usize = 200_000;

/// Entry `m(s, t)` of a Coxeter matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl Order {
    /// Whether the pair is joined by an edge of the Coxeter diagram (`m >= 3`).
    pub fn is_edge(self) -> bool {
        match self {
            Order::Finite(m) => m >= 3,
            Order::Infinite => true,
        }
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Order::Finite(m) => Some(m),
            Order::Infinite => None,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(m) => write!(f, "{m}"),
            Order::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoxeterError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("row {row}, column {col}: entry {found} differs from its mirror entry {mirror}")]
    Asymmetric {
        row: usize,
        col: usize,
        found: Order,
        mirror: Order,
    },
    #[error("row {row}, column {row}: diagonal entry must be 1, found {found}")]
    Diagonal { row: usize, found: Order },
    #[error("row {row}, column {col}: off-diagonal entry must be at least 2, found {found}")]
    OffDiagonal { row: usize, col: usize, found: Order },
    #[error("duplicate generator label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown generator label `{0}`")]
    UnknownLabel(String),
    #[error("generator index {index} out of range for rank {rank}")]
    BadGenerator { index: usize, rank: usize },
    #[error("word length {len} exceeds the cap of {cap}")]
    WordTooLong { len: usize, cap: usize },
    #[error("the system is infinite: {0}")]
    Infinite(String),
}

/// Validated Coxeter matrix together with its generator labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoxeterMatrix {
    labels: Vec<String>,
    m: Vec<Vec<Order>>,
}

impl CoxeterMatrix {
    pub fn new(labels: Vec<String>, m: Vec<Vec<Order>>) -> Result<Self, CoxeterError> {
        let n = labels.len();
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(CoxeterError::DuplicateLabel(l.clone()));
            }
        }
        if m.len() != n {
            return Err(CoxeterError::Malformed {
                line: 0,
                msg: format!("expected {n} rows, found {}", m.len()),
            });
        }
        for (i, row) in m.iter().enumerate() {
            if row.len() != n {
                return Err(CoxeterError::Malformed {
                    line: i + 2,
                    msg: format!("expected {n} entries, found {}", row.len()),
                });
            }
        }
        for i in 0..n {
            if m[i][i] != Order::Finite(1) {
                return Err(CoxeterError::Diagonal { row: i + 1, found: m[i][i] });
            }
            for j in 0..n {
                if i == j {
                    continue;
                }
                if let Order::Finite(v) = m[i][j] {
                    if v < 2 {
                        return Err(CoxeterError::OffDiagonal {
                            row: i + 1,
                            col: j + 1,
                            found: m[i][j],
                        });
                    }
                }
                if m[i][j] != m[j][i] {
                    return Err(CoxeterError::Asymmetric {
                        row: i + 1,
                        col: j + 1,
                        found: m[i][j],
                        mirror: m[j][i],
                    });
                }
            }
        }
        Ok(Self { labels, m })
    }

    /// Parses the text format: a line of labels followed by `n` rows of
    /// integers or `inf`. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, CoxeterError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (_, header) = lines.next().ok_or(CoxeterError::Malformed {
            line: 1,
            msg: "missing generator labels".into(),
        })?;
        let labels: Vec<String> = header.split_whitespace().map(str::to_owned).collect();
        let n = labels.len();
        let mut m = Vec::with_capacity(n);
        for row in 0..n {
            let (line, text) = lines.next().ok_or(CoxeterError::Malformed {
                line: 0,
                msg: format!("expected {n} matrix rows, found {row}"),
            })?;
            let entries = text
                .split_whitespace()
                .enumerate()
                .map(|(col, tok)| parse_entry(tok, line, row + 1, col + 1))
                .collect::<Result<Vec<_>, _>>()?;
            if entries.len() != n {
                return Err(CoxeterError::Malformed {
                    line,
                    msg: format!("row {} has {} entries, expected {n}", row + 1, entries.len()),
                });
            }
            m.push(entries);
        }
        if let Some((line, _)) = lines.next() {
            return Err(CoxeterError::Malformed {
                line,
                msg: "trailing content after the matrix".into(),
            });
        }
        Self::new(labels, m)
    }

    /// Builds a matrix with `m = 2` everywhere except the listed pairs.
    pub fn from_edges(labels: &[&str], edges: &[(usize, usize, Order)]) -> Result<Self, CoxeterError> {
        let n = labels.len();
        let mut m = vec![vec![Order::Finite(2); n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = Order::Finite(1);
        }
        for &(a, b, o) in edges {
            if a >= n || b >= n {
                return Err(CoxeterError::BadGenerator { index: a.max(b), rank: n });
            }
            m[a][b] = o;
            m[b][a] = o;
        }
        Self::new(labels.iter().map(|s| s.to_string()).collect(), m)
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn order(&self, s: usize, t: usize) -> Order {
        self.m[s][t]
    }

    /// Serializes back to the text format accepted by [`CoxeterMatrix::parse`].
    pub fn to_text(&self) -> String {
        let mut out = self.labels.join(" ");
        out.push('\n');
        for row in &self.m {
            let cells: Vec<String> = row.iter().map(|o| o.to_string()).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }
}

fn parse_entry(tok: &str, line: usize, row: usize, col: usize) -> Result<Order, CoxeterError> {
    if tok.eq_ignore_ascii_case("inf") || tok == "∞" {
        return Ok(Order::Infinite);
    }
    tok.parse::<u32>().map(Order::Finite).map_err(|_| CoxeterError::Malformed {
        line,
        msg: format!("row {row}, column {col}: cannot parse entry `{tok}`"),
    })
}

/// Finite irreducible Coxeter types.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum FiniteType {
    A(usize),
    B(usize),
    D(usize),
    E(usize),
    F4,
    H(usize),
    I2(u32),
}

impl fmt::Display for FiniteType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiniteType::A(n) => write!(f, "A{n}"),
            FiniteType::B(n) => write!(f, "B{n}"),
            FiniteType::D(n) => write!(f, "D{n}"),
            FiniteType::E(n) => write!(f, "E{n}"),
            FiniteType::F4 => f.write_str("F4"),
            FiniteType::H(n) => write!(f, "H{n}"),
            FiniteType::I2(m) => write!(f, "I2({m})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ComponentClass {
    Finite(FiniteType),
    Infinite,
}

impl ComponentClass {
    pub fn is_finite(self) -> bool {
        matches!(self, ComponentClass::Finite(_))
    }
}

impl fmt::Display for ComponentClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComponentClass::Finite(t) => write!(f, "finite {t}"),
            ComponentClass::Infinite => f.write_str("infinite"),
        }
    }
}

/// A word in the generators, as a sequence of generator indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn letters(&self) -> &[usize] {
        &self.0
    }
}

impl From<Vec<usize>> for Word {
    fn from(v: Vec<usize>) -> Self {
        Word(v)
    }
}

/// A group element, held as its ShortLex-least reduced word.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element(Vec<usize>);

impl Element {
    pub fn identity() -> Self {
        Element(Vec::new())
    }

    pub fn word(&self) -> &[usize] {
        &self.0
    }

    /// Length `l(w)`.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_word(&self) -> Word {
        Word(self.0.clone())
    }
}

/// A Coxeter system with its diagram components classified.
#[derive(Clone, Debug)]
pub struct CoxeterSystem {
    matrix: CoxeterMatrix,
    components: Vec<Vec<usize>>,
    classes: Vec<ComponentClass>,
    word_cap: usize,
}

impl PartialEq for CoxeterSystem {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

impl CoxeterSystem {
    pub fn new(matrix: CoxeterMatrix) -> Self {
        let components = diagram_components(&matrix);
        let classes = components.iter().map(|c| classify(&matrix, c)).collect();
        Self {
            matrix,
            components,
            classes,
            word_cap: DEFAULT_WORD_CAP,
        }
    }

    pub fn parse(text: &str) -> Result<Self, CoxeterError> {
        CoxeterMatrix::parse(text).map(Self::new)
    }

    pub fn with_word_cap(mut self, cap: usize) -> Self {
        self.word_cap = cap;
        self
    }

    pub fn word_cap(&self) -> usize {
        self.word_cap
    }

    /// The infinite dihedral group on generators `s`, `t`.
    pub fn infinite_dihedral() -> Self {
        Self::dihedral(Order::Infinite)
    }

    /// `I2(m)` on generators `s`, `t`.
    pub fn dihedral(m: Order) -> Self {
        Self::new(CoxeterMatrix::from_edges(&["s", "t"], &[(0, 1, m)]).expect("valid dihedral matrix"))
    }

    /// `A_n` with generators `s1 … sn`.
    pub fn type_a(n: usize) -> Self {
        let labels: Vec<String> = (1..=n).map(|i| format!("s{i}")).collect();
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i, Order::Finite(3))).collect();
        Self::new(CoxeterMatrix::from_edges(&refs, &edges).expect("valid A_n matrix"))
    }

    /// The affine triangle group with all `m = 3`, generators `a`, `b`, `c`.
    pub fn affine_a2() -> Self {
        let three = Order::Finite(3);
        Self::new(
            CoxeterMatrix::from_edges(&["a", "b", "c"], &[(0, 1, three), (1, 2, three), (0, 2, three)])
                .expect("valid affine A2 matrix"),
        )
    }

    /// Direct product of two systems (labels must be distinct).
    pub fn disjoint_union(a: &Self, b: &Self) -> Result<Self, CoxeterError> {
        let (na, nb) = (a.rank(), b.rank());
        let n = na + nb;
        let mut m = vec![vec![Order::Finite(2); n]; n];
        for i in 0..n {
            for j in 0..n {
                m[i][j] = match (i < na, j < na) {
                    (true, true) => a.order(i, j),
                    (false, false) => b.order(i - na, j - na),
                    _ => Order::Finite(2),
                };
            }
        }
        let labels = a.labels().iter().chain(b.labels()).cloned().collect();
        Ok(Self::new(CoxeterMatrix::new(labels, m)?).with_word_cap(a.word_cap.max(b.word_cap)))
    }

    /// The standard parabolic subsystem on `gens`, re-indexed in the given order.
    pub fn restrict(&self, gens: &[usize]) -> Self {
        let labels = gens.iter().map(|&g| self.matrix.labels[g].clone()).collect();
        let m = gens
            .iter()
            .map(|&a| gens.iter().map(|&b| self.order(a, b)).collect())
            .collect();
        Self::new(CoxeterMatrix::new(labels, m).expect("restriction of a valid matrix"))
            .with_word_cap(self.word_cap)
    }

    pub fn matrix(&self) -> &CoxeterMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn labels(&self) -> &[String] {
        self.matrix.labels()
    }

    pub fn order(&self, s: usize, t: usize) -> Order {
        self.matrix.order(s, t)
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn component_classes(&self) -> &[ComponentClass] {
        &self.classes
    }

    pub fn component_of(&self, s: usize) -> usize {
        self.components
            .iter()
            .position(|c| c.contains(&s))
            .expect("every generator lies in a component")
    }

    pub fn is_irreducible(&self) -> bool {
        self.components.len() == 1
    }

    pub fn is_finite(&self) -> bool {
        self.classes.iter().all(|c| c.is_finite())
    }

    /// True iff every irreducible factor is infinite.
    pub fn is_purely_infinite(&self) -> bool {
        self.classes.iter().all(|c| !c.is_finite())
    }

    pub fn generator(&self, label: &str) -> Result<usize, CoxeterError> {
        self.labels()
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| CoxeterError::UnknownLabel(label.to_owned()))
    }

    /// Parses whitespace-separated generator labels.
    pub fn parse_word(&self, text: &str) -> Result<Word, CoxeterError> {
        text.split_whitespace()
            .map(|tok| self.generator(tok))
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }

    pub fn format_word(&self, letters: &[usize]) -> String {
        letters
            .iter()
            .map(|&i| self.labels()[i].as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Formats an element, writing `1` for the identity.
    pub fn format(&self, w: &Element) -> String {
        if w.is_identity() {
            "1".to_owned()
        } else {
            self.format_word(w.word())
        }
    }

    fn check_word(&self, letters: &[usize]) -> Result<(), CoxeterError> {
        if letters.len() > self.word_cap {
            return Err(CoxeterError::WordTooLong {
                len: letters.len(),
                cap: self.word_cap,
            });
        }
        match letters.iter().find(|&&s| s >= self.rank()) {
            Some(&index) => Err(CoxeterError::BadGenerator { index, rank: self.rank() }),
            None => Ok(()),
        }
    }

    /// All words reachable from `word` by braid moves (including `word`).
    pub fn braid_class(&self, word: &[usize]) -> Vec<Vec<usize>> {
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(word.to_vec());
        queue.push_back(word.to_vec());
        let mut out = Vec::new();
        while let Some(w) = queue.pop_front() {
            for i in 0..w.len().saturating_sub(1) {
                let (a, b) = (w[i], w[i + 1]);
                if a == b {
                    continue;
                }
                let Some(m) = self.order(a, b).finite() else {
                    continue;
                };
                let m = m as usize;
                if i + m > w.len() {
                    continue;
                }
                let alternating = (0..m).all(|k| w[i + k] == if k % 2 == 0 { a } else { b });
                if !alternating {
                    continue;
                }
                let mut v = w.clone();
                for (k, x) in v[i..i + m].iter_mut().enumerate() {
                    *x = if k % 2 == 0 { b } else { a };
                }
                if seen.insert(v.clone()) {
                    queue.push_back(v);
                }
            }
            out.push(w);
        }
        out
    }

    fn shortlex_min(&self, reduced: &[usize]) -> Vec<usize> {
        self.braid_class(reduced)
            .into_iter()
            .min()
            .unwrap_or_default()
    }

    /// Right-multiplies a reduced word by `s`, returning a reduced word.
    fn push_right(&self, reduced: Vec<usize>, s: usize) -> Vec<usize> {
        if reduced.is_empty() {
            return vec![s];
        }
        let class = self.braid_class(&reduced);
        match class.into_iter().find(|x| x.last() == Some(&s)) {
            Some(mut x) => {
                x.pop();
                x
            }
            None => {
                let mut x = reduced;
                x.push(s);
                x
            }
        }
    }

    fn push_left(&self, s: usize, reduced: Vec<usize>) -> Vec<usize> {
        if reduced.is_empty() {
            return vec![s];
        }
        let class = self.braid_class(&reduced);
        match class.into_iter().find(|x| x.first() == Some(&s)) {
            Some(mut x) => {
                x.remove(0);
                x
            }
            None => {
                let mut x = Vec::with_capacity(reduced.len() + 1);
                x.push(s);
                x.extend(reduced);
                x
            }
        }
    }

    fn fold(&self, start: Vec<usize>, letters: &[usize]) -> Element {
        let reduced = letters.iter().fold(start, |acc, &s| self.push_right(acc, s));
        Element(self.shortlex_min(&reduced))
    }

    /// Reduces a word to the canonical form of the element it represents.
    pub fn reduce(&self, w: &Word) -> Result<Element, CoxeterError> {
        self.check_word(&w.0)?;
        Ok(self.fold(Vec::new(), &w.0))
    }

    pub fn reduce_letters(&self, letters: &[usize]) -> Result<Element, CoxeterError> {
        self.check_word(letters)?;
        Ok(self.fold(Vec::new(), letters))
    }

    pub fn equal(&self, a: &Word, b: &Word) -> Result<bool, CoxeterError> {
        Ok(self.reduce(a)? == self.reduce(b)?)
    }

    pub fn length(&self, w: &Word) -> Result<usize, CoxeterError> {
        self.reduce(w).map(|e| e.len())
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Result<Element, CoxeterError> {
        self.check_word(&[a.word(), b.word()].concat())?;
        Ok(self.fold(a.0.clone(), &b.0))
    }

    /// `w·s`
    pub fn mul_gen(&self, w: &Element, s: usize) -> Result<Element, CoxeterError> {
        self.check_word(&[w.word(), &[s]].concat())?;
        Ok(Element(self.shortlex_min(&self.push_right(w.0.clone(), s))))
    }

    /// `s·w`
    pub fn gen_mul(&self, s: usize, w: &Element) -> Result<Element, CoxeterError> {
        self.check_word(&[&[s], w.word()].concat())?;
        Ok(Element(self.shortlex_min(&self.push_left(s, w.0.clone()))))
    }

    pub fn inverse(&self, w: &Element) -> Element {
        let rev: Vec<usize> = w.0.iter().rev().copied().collect();
        Element(self.shortlex_min(&rev))
    }

    pub fn generator_element(&self, s: usize) -> Element {
        Element(vec![s])
    }

    /// `w⁻¹·s·w`
    pub fn conjugate_by(&self, w: &Element, s: usize) -> Result<Element, CoxeterError> {
        let sw = self.gen_mul(s, w)?;
        self.mul(&self.inverse(w), &sw)
    }

    /// Whether `l(sw) < l(w)`.
    pub fn left_descent(&self, s: usize, w: &Element) -> bool {
        !w.is_identity() && self.braid_class(w.word()).iter().any(|x| x[0] == s)
    }

    /// Whether `l(ws) < l(w)`.
    pub fn right_descent(&self, w: &Element, s: usize) -> bool {
        !w.is_identity() && self.braid_class(w.word()).iter().any(|x| x.last() == Some(&s))
    }

    pub fn left_descents(&self, w: &Element) -> BTreeSet<usize> {
        self.braid_class(w.word()).iter().filter_map(|x| x.first().copied()).collect()
    }

    pub fn right_descents(&self, w: &Element) -> BTreeSet<usize> {
        self.braid_class(w.word()).iter().filter_map(|x| x.last().copied()).collect()
    }

    /// `S(w)`: the generators occurring in any reduced word for `w`.
    pub fn support(&self, w: &Element) -> BTreeSet<usize> {
        w.word().iter().copied().collect()
    }

    /// The longest element `w₀` of a finite system.
    pub fn longest_element(&self) -> Result<Element, CoxeterError> {
        if !self.is_finite() {
            return Err(CoxeterError::Infinite("no longest element exists".into()));
        }
        let mut w = Element::identity();
        loop {
            let descents = self.right_descents(&w);
            match (0..self.rank()).find(|s| !descents.contains(s)) {
                Some(s) => w = self.mul_gen(&w, s)?,
                None => return Ok(w),
            }
        }
    }

    /// The minimal-length representative of the coset `w·W_J`.
    pub fn min_coset_rep(&self, w: &Element, j: &BTreeSet<usize>) -> Element {
        let mut w = w.clone();
        loop {
            let descents = self.right_descents(&w);
            match descents.intersection(j).next() {
                Some(&s) => {
                    w = self
                        .mul_gen(&w, s)
                        .expect("removing a descent shortens the word");
                }
                None => return w,
            }
        }
    }

    /// Elements grouped by length, for lengths `0..=max_len`.
    pub fn spheres(&self, max_len: usize) -> Result<Vec<Vec<Element>>, CoxeterError> {
        let mut spheres = vec![vec![Element::identity()]];
        for _ in 0..max_len {
            let last = spheres.last().expect("nonempty");
            let mut next = BTreeSet::new();
            for w in last {
                let descents = self.right_descents(w);
                for s in (0..self.rank()).filter(|s| !descents.contains(s)) {
                    next.insert(self.mul_gen(w, s)?);
                }
            }
            if next.is_empty() {
                break;
            }
            spheres.push(next.into_iter().collect());
        }
        Ok(spheres)
    }

    /// All elements of length at most `max_len`, ordered by (length, ShortLex).
    pub fn elements_up_to(&self, max_len: usize) -> Result<Vec<Element>, CoxeterError> {
        Ok(self.spheres(max_len)?.into_iter().flatten().collect())
    }

    /// Applies a permutation of the generators letterwise.
    pub fn apply_permutation(&self, sigma: &[usize], w: &Element) -> Element {
        let mapped: Vec<usize> = w.word().iter().map(|&s| sigma[s]).collect();
        Element(self.shortlex_min(&mapped))
    }

    /// Whether `sigma` is a permutation of `S` preserving the Coxeter matrix.
    pub fn is_diagram_automorphism(&self, sigma: &[usize]) -> bool {
        let n = self.rank();
        if sigma.len() != n {
            return false;
        }
        let mut seen = vec![false; n];
        for &x in sigma {
            if x >= n || seen[x] {
                return false;
            }
            seen[x] = true;
        }
        (0..n).all(|s| (0..n).all(|t| self.order(s, t) == self.order(sigma[s], sigma[t])))
    }

    /// Multiplication table of a finite system.
    pub fn group_table(&self) -> Result<GroupTable, CoxeterError> {
        GroupTable::build(self)
    }

    /// Determinant of the cosine matrix `B(e_s, e_t) = -cos(π/m(s,t))`.
    /// Diagnostic only; finiteness is decided by [`classify`].
    pub fn gram_determinant(&self) -> f64 {
        let n = self.rank();
        let b = nalgebra::DMatrix::from_fn(n, n, |i, j| cosine_entry(self.order(i, j)));
        b.determinant()
    }
}

/// `-cos(π/m)`, with `-1` for `m = ∞`.
pub fn cosine_entry(m: Order) -> f64 {
    match m {
        Order::Finite(1) => 1.0,
        Order::Finite(m) => -(std::f64::consts::PI / m as f64).cos(),
        Order::Infinite => -1.0,
    }
}

fn diagram_components(matrix: &CoxeterMatrix) -> Vec<Vec<usize>> {
    let n = matrix.rank();
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = vec![start];
        comp[start] = id;
        let mut i = 0;
        while i < members.len() {
            let s = members[i];
            for t in 0..n {
                if t != s && comp[t] == usize::MAX && matrix.order(s, t).is_edge() {
                    comp[t] = id;
                    members.push(t);
                }
            }
            i += 1;
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

/// Matches a connected diagram against the finite-type classification.
pub fn classify(matrix: &CoxeterMatrix, component: &[usize]) -> ComponentClass {
    let k = component.len();
    let mut edges = Vec::new();
    for (i, &a) in component.iter().enumerate() {
        for (j, &b) in component.iter().enumerate().skip(i + 1) {
            let o = matrix.order(a, b);
            if o.is_edge() {
                match o.finite() {
                    Some(m) => edges.push((i, j, m)),
                    None => return ComponentClass::Infinite,
                }
            }
        }
    }
    let finite = |t| ComponentClass::Finite(t);
    match k {
        0 => return ComponentClass::Infinite,
        1 => return finite(FiniteType::A(1)),
        2 => {
            return match edges[0].2 {
                3 => finite(FiniteType::A(2)),
                4 => finite(FiniteType::B(2)),
                m => finite(FiniteType::I2(m)),
            }
        }
        _ => {}
    }
    if edges.len() != k - 1 {
        return ComponentClass::Infinite;
    }
    let mut degree = vec![0usize; k];
    for &(a, b, _) in &edges {
        degree[a] += 1;
        degree[b] += 1;
    }
    let heavy: Vec<_> = edges.iter().filter(|e| e.2 > 3).collect();
    if heavy.len() > 1 {
        return ComponentClass::Infinite;
    }
    let max_degree = *degree.iter().max().expect("nonempty");
    if max_degree > 3 {
        return ComponentClass::Infinite;
    }
    if max_degree == 3 {
        if !heavy.is_empty() || degree.iter().filter(|&&d| d == 3).count() != 1 {
            return ComponentClass::Infinite;
        }
        let centre = degree.iter().position(|&d| d == 3).expect("branch node");
        let mut arms: Vec<usize> = neighbours(&edges, centre)
            .into_iter()
            .map(|first| arm_length(&edges, centre, first))
            .collect();
        arms.sort_unstable();
        return match arms.as_slice() {
            [1, 1, _] => finite(FiniteType::D(k)),
            [1, 2, 2] => finite(FiniteType::E(6)),
            [1, 2, 3] => finite(FiniteType::E(7)),
            [1, 2, 4] => finite(FiniteType::E(8)),
            _ => ComponentClass::Infinite,
        };
    }
    // A path.
    let Some(&&(a, b, m)) = heavy.first() else {
        return finite(FiniteType::A(k));
    };
    let at_end = degree[a] == 1 || degree[b] == 1;
    match (m, at_end, k) {
        (4, true, _) => finite(FiniteType::B(k)),
        (4, false, 4) => finite(FiniteType::F4),
        (5, true, 3) => finite(FiniteType::H(3)),
        (5, true, 4) => finite(FiniteType::H(4)),
        _ => ComponentClass::Infinite,
    }
}

fn neighbours(edges: &[(usize, usize, u32)], v: usize) -> Vec<usize> {
    edges
        .iter()
        .filter_map(|&(a, b, _)| {
            if a == v {
                Some(b)
            } else if b == v {
                Some(a)
            } else {
                None
            }
        })
        .collect()
}

fn arm_length(edges: &[(usize, usize, u32)], from: usize, first: usize) -> usize {
    let (mut prev, mut cur, mut len) = (from, first, 1);
    loop {
        let next: Vec<usize> = neighbours(edges, cur).into_iter().filter(|&x| x != prev).collect();
        match next.as_slice() {
            [n] => {
                prev = cur;
                cur = *n;
                len += 1;
            }
            _ => return len,
        }
    }
}

/// Multiplication table for a finite Coxeter group, indexed by dense ids.
#[derive(Clone, Debug)]
pub struct GroupTable {
    rank: usize,
    elements: Vec<Element>,
    index: HashMap<Element, u32>,
    right: Vec<u32>,
    inverse: Vec<u32>,
}

impl GroupTable {
    fn build(sys: &CoxeterSystem) -> Result<Self, CoxeterError> {
        if !sys.is_finite() {
            return Err(CoxeterError::Infinite("group table needs a finite system".into()));
        }
        let rank = sys.rank();
        let mut elements = vec![Element::identity()];
        let mut index = HashMap::from([(Element::identity(), 0u32)]);
        let mut i = 0;
        while i < elements.len() {
            let w = elements[i].clone();
            for s in 0..rank {
                let ws = sys.mul_gen(&w, s)?;
                if !index.contains_key(&ws) {
                    if elements.len() >= GROUP_TABLE_LIMIT {
                        return Err(CoxeterError::Infinite("group table limit reached".into()));
                    }
                    index.insert(ws.clone(), elements.len() as u32);
                    elements.push(ws);
                }
            }
            i += 1;
        }
        let mut right = vec![0u32; elements.len() * rank];
        for (i, w) in elements.iter().enumerate() {
            for s in 0..rank {
                right[i * rank + s] = index[&sys.mul_gen(w, s)?];
            }
        }
        let inverse = elements.iter().map(|w| index[&sys.inverse(w)]).collect();
        Ok(Self {
            rank,
            elements,
            index,
            right,
            inverse,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, id: u32) -> &Element {
        &self.elements[id as usize]
    }

    pub fn id(&self, w: &Element) -> Option<u32> {
        self.index.get(w).copied()
    }

    pub fn length(&self, id: u32) -> usize {
        self.elements[id as usize].len()
    }

    pub fn mul_gen(&self, id: u32, s: usize) -> u32 {
        self.right[id as usize * self.rank + s]
    }

    pub fn inverse(&self, id: u32) -> u32 {
        self.inverse[id as usize]
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.elements[b as usize]
            .word()
            .iter()
            .fold(a, |acc, &s| self.mul_gen(acc, s))
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(sys: &CoxeterSystem, s: &str) -> Word {
        sys.parse_word(s).unwrap()
    }

    #[test]
    fn parse_examples() {
        let dinf = CoxeterSystem::parse("s t\n1 inf\ninf 1\n").unwrap();
        assert_eq!(dinf.components().len(), 1);
        assert!(dinf.is_purely_infinite());
        let a2 = CoxeterSystem::parse("s t\n1 3\n3 1").unwrap();
        assert_eq!(a2.component_classes(), &[ComponentClass::Finite(FiniteType::A(2))]);
        let at2 = CoxeterSystem::parse("a b c\n1 3 3\n3 1 3\n3 3 1").unwrap();
        assert_eq!(at2.component_classes(), &[ComponentClass::Infinite]);
        assert!(at2.gram_determinant().abs() < 1e-12);
    }

    #[test]
    fn parse_errors_carry_positions() {
        let e = CoxeterSystem::parse("s t\n1 3\n4 1").unwrap_err();
        assert_eq!(
            e,
            CoxeterError::Asymmetric {
                row: 1,
                col: 2,
                found: Order::Finite(3),
                mirror: Order::Finite(4)
            }
        );
        let e = CoxeterSystem::parse("s t\n2 3\n3 1").unwrap_err();
        assert!(matches!(e, CoxeterError::Diagonal { row: 1, .. }));
        let e = CoxeterSystem::parse("s t\n1 1\n1 1").unwrap_err();
        assert!(matches!(e, CoxeterError::OffDiagonal { row: 1, col: 2, .. }));
        let e = CoxeterSystem::parse("s t\n1 x\nx 1").unwrap_err();
        assert!(matches!(e, CoxeterError::Malformed { line: 2, .. }));
        let e = CoxeterSystem::parse("s t\n1 3").unwrap_err();
        assert!(matches!(e, CoxeterError::Malformed { .. }));
    }

    #[test]
    fn classification_list() {
        let cases: &[(&[(usize, usize, u32)], usize, Option<FiniteType>)] = &[
            (&[(0, 1, 3), (1, 2, 3), (2, 3, 4)], 4, Some(FiniteType::B(4))),
            (&[(0, 1, 3), (1, 2, 4), (2, 3, 3)], 4, Some(FiniteType::F4)),
            (&[(0, 1, 5), (1, 2, 3)], 3, Some(FiniteType::H(3))),
            (&[(0, 1, 5), (1, 2, 3), (2, 3, 3)], 4, Some(FiniteType::H(4))),
            (&[(0, 1, 3), (1, 2, 3), (1, 3, 3)], 4, Some(FiniteType::D(4))),
            (&[(0, 1, 3), (1, 2, 3), (2, 3, 3), (3, 4, 3), (2, 5, 3)], 6, Some(FiniteType::E(6))),
            (&[(0, 1, 3), (1, 2, 3), (2, 3, 3), (3, 4, 3), (4, 5, 3), (2, 6, 3)], 7, Some(FiniteType::E(7))),
            (&[(0, 1, 4), (1, 2, 4)], 3, None),
            (&[(0, 1, 3), (1, 2, 6)], 3, None),
            (&[(0, 1, 5), (1, 2, 3), (2, 3, 3), (3, 4, 3)], 5, None),
            (&[(0, 1, 3), (1, 2, 3), (1, 3, 3), (1, 4, 3)], 5, None),
            (&[(0, 1, 3), (1, 2, 3), (2, 3, 3), (3, 4, 3), (4, 5, 3), (5, 6, 3), (6, 7, 3), (2, 8, 3)], 9, None),
        ];
        for (edges, k, expected) in cases {
            let labels: Vec<String> = (0..*k).map(|i| format!("g{i}")).collect();
            let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
            let e: Vec<_> = edges.iter().map(|&(a, b, m)| (a, b, Order::Finite(m))).collect();
            let sys = CoxeterSystem::new(CoxeterMatrix::from_edges(&refs, &e).unwrap());
            let got = sys.component_classes()[0];
            let want = expected.map_or(ComponentClass::Infinite, ComponentClass::Finite);
            assert_eq!(got, want, "edges {edges:?}");
            // Positive definiteness of the cosine matrix agrees with the list.
            let det = sys.gram_determinant();
            assert_eq!(det > 1e-9, got.is_finite(), "det {det} for {edges:?}");
        }
    }

    #[test]
    fn reduce_examples() {
        let dinf = CoxeterSystem::infinite_dihedral();
        assert!(dinf.reduce(&word(&dinf, "s t t s")).unwrap().is_identity());
        let a2 = CoxeterSystem::dihedral(Order::Finite(3));
        assert_eq!(a2.reduce(&word(&a2, "s t s t")).unwrap().len(), 2);
        let sts = a2.reduce(&word(&a2, "t s t")).unwrap();
        assert_eq!(a2.format(&sts), "s t s");
    }

    #[test]
    fn equal_and_length_examples() {
        let a2 = CoxeterSystem::dihedral(Order::Finite(3));
        assert!(a2.equal(&word(&a2, "s t s"), &word(&a2, "t s t")).unwrap());
        let dinf = CoxeterSystem::infinite_dihedral();
        assert!(!dinf.equal(&word(&dinf, "s t"), &word(&dinf, "t s")).unwrap());
        assert_eq!(dinf.length(&Word::default()).unwrap(), 0);
        assert_eq!(dinf.length(&word(&dinf, "s t s t s")).unwrap(), 5);
        assert_eq!(a2.length(&word(&a2, "s t s t")).unwrap(), 2);
    }

    #[test]
    fn word_cap_enforced() {
        let dinf = CoxeterSystem::infinite_dihedral().with_word_cap(4);
        let e = dinf.reduce(&Word(vec![0, 1, 0, 1, 0])).unwrap_err();
        assert_eq!(e, CoxeterError::WordTooLong { len: 5, cap: 4 });
        let e = dinf.reduce(&Word(vec![2])).unwrap_err();
        assert!(matches!(e, CoxeterError::BadGenerator { index: 2, .. }));
    }

    #[test]
    fn descents() {
        let dinf = CoxeterSystem::infinite_dihedral();
        let s = dinf.generator_element(0);
        assert!(!dinf.left_descent(0, &Element::identity()));
        assert!(dinf.left_descent(0, &s));
        let st = dinf.reduce(&word(&dinf, "s t")).unwrap();
        assert!(!dinf.left_descent(1, &st));
        assert!(dinf.left_descent(0, &st));
    }

    #[test]
    fn support_examples() {
        let dinf = CoxeterSystem::infinite_dihedral();
        assert!(dinf.support(&Element::identity()).is_empty());
        let tst = dinf.reduce(&word(&dinf, "t s t")).unwrap();
        assert_eq!(dinf.support(&tst), BTreeSet::from([0, 1]));
        let at2 = CoxeterSystem::affine_a2();
        let aba = at2.reduce(&word(&at2, "a b a")).unwrap();
        assert_eq!(aba.len(), 3);
        assert_eq!(at2.support(&aba), BTreeSet::from([0, 1]));
    }

    #[test]
    fn purely_infinite_examples() {
        assert!(CoxeterSystem::infinite_dihedral().is_purely_infinite());
        let a1 = CoxeterSystem::new(CoxeterMatrix::from_edges(&["u"], &[]).unwrap());
        let mixed = CoxeterSystem::disjoint_union(&CoxeterSystem::infinite_dihedral(), &a1).unwrap();
        assert_eq!(mixed.components().len(), 2);
        assert!(!mixed.is_purely_infinite());
        assert!(CoxeterSystem::affine_a2().is_purely_infinite());
    }

    #[test]
    fn longest_elements() {
        let a1 = CoxeterSystem::type_a(1);
        assert_eq!(a1.format(&a1.longest_element().unwrap()), "s1");
        let b2 = CoxeterSystem::dihedral(Order::Finite(4));
        assert_eq!(b2.format(&b2.longest_element().unwrap()), "s t s t");
        assert_eq!(CoxeterSystem::type_a(3).longest_element().unwrap().len(), 6);
        assert!(CoxeterSystem::infinite_dihedral().longest_element().is_err());
    }

    #[test]
    fn coset_reps() {
        let a2 = CoxeterSystem::dihedral(Order::Finite(3));
        let st = a2.reduce(&word(&a2, "s t")).unwrap();
        assert_eq!(a2.min_coset_rep(&st, &BTreeSet::new()), st);
        let s = a2.generator_element(0);
        assert!(a2.min_coset_rep(&s, &BTreeSet::from([0])).is_identity());
        assert_eq!(a2.min_coset_rep(&st, &BTreeSet::from([1])), s);
    }

    #[test]
    fn group_table_sizes() {
        assert_eq!(CoxeterSystem::type_a(3).group_table().unwrap().len(), 24);
        assert_eq!(CoxeterSystem::dihedral(Order::Finite(5)).group_table().unwrap().len(), 10);
        assert!(CoxeterSystem::infinite_dihedral().group_table().is_err());
    }

    #[test]
    fn diagram_automorphisms() {
        let a3 = CoxeterSystem::type_a(3);
        assert!(a3.is_diagram_automorphism(&[2, 1, 0]));
        assert!(!a3.is_diagram_automorphism(&[1, 0, 2]));
        let w = a3.reduce(&Word(vec![0, 1])).unwrap();
        assert_eq!(a3.apply_permutation(&[2, 1, 0], &w).word(), &[2, 1]);
    }

    #[test]
    fn text_round_trip() {
        let at2 = CoxeterSystem::affine_a2();
        let back = CoxeterMatrix::parse(&at2.matrix().to_text()).unwrap();
        assert_eq!(&back, at2.matrix());
    }
}
