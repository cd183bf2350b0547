//! Labelings and the L(p,q) validator for oriented graphs.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Digraph, GridShape, VertexId};

pub type Color = u32;

/// Minimum separations: `p` across an arc, `q` across a directed two-step pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConstraintParams {
    pub p: u32,
    pub q: u32,
}

impl ConstraintParams {
    pub const L21: ConstraintParams = ConstraintParams { p: 2, q: 1 };

    pub fn new(p: u32, q: u32) -> Self {
        Self { p, q }
    }
}

impl Default for ConstraintParams {
    fn default() -> Self {
        Self::L21
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ViolationKind {
    EdgeGap,
    TwoStepGap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Violation {
    pub kind: ViolationKind,
    pub pair: (VertexId, VertexId),
    pub labels: (Color, Color),
    pub required: u32,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ViolationKind::EdgeGap => "edge",
            ViolationKind::TwoStepGap => "two-step",
        };
        write!(
            f,
            "{kind} pair ({}, {}) has labels ({}, {}), needs gap {}",
            self.pair.0, self.pair.1, self.labels.0, self.labels.1, self.required
        )
    }
}

/// Every pair of vertices that carries a separation requirement, with the
/// strongest gap that applies to it. Pairs that are both arcs and two-step
/// pairs get `max(p, q)` and are classified as edge pairs.
pub fn pair_requirements(
    g: &Digraph,
    params: ConstraintParams,
) -> BTreeMap<(VertexId, VertexId), (ViolationKind, u32)> {
    let mut reqs = BTreeMap::new();
    for pair in g.two_step_pairs() {
        reqs.insert(pair, (ViolationKind::TwoStepGap, params.q));
    }
    for pair in g.edge_pairs() {
        let gap = match reqs.get(&pair) {
            Some(&(_, q)) => params.p.max(q),
            None => params.p,
        };
        reqs.insert(pair, (ViolationKind::EdgeGap, gap));
    }
    reqs
}

/// A total map from vertices to colors in `{0, ..., k}`, laid out as a
/// `rows x cols` row-major matrix (a single row for non-grid graphs).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Labeling {
    rows: usize,
    cols: usize,
    colors: Vec<Color>,
    k: Color,
}

impl Labeling {
    pub fn new(rows: usize, cols: usize, colors: Vec<Color>, k: Color) -> Result<Self> {
        if rows * cols != colors.len() {
            return Err(Error::InvalidInput(format!(
                "{} colors do not fill a {rows}x{cols} layout",
                colors.len()
            )));
        }
        if let Some((v, &c)) = colors.iter().enumerate().find(|(_, &c)| c > k) {
            return Err(Error::InvalidInput(format!(
                "vertex {v} has color {c} above the budget {k}"
            )));
        }
        Ok(Self {
            rows,
            cols,
            colors,
            k,
        })
    }

    /// A labeling laid out the way `g` is.
    pub fn for_graph(g: &Digraph, colors: Vec<Color>, k: Color) -> Result<Self> {
        let (rows, cols) = g.layout();
        Self::new(rows, cols, colors, k)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn k_budget(&self) -> Color {
        self.k
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> Color {
        self.colors[i * self.cols + j]
    }

    pub fn max_color(&self) -> Color {
        self.colors.iter().copied().max().unwrap_or(0)
    }

    /// The same colors under a different budget.
    pub fn with_budget(&self, k: Color) -> Result<Self> {
        Self::new(self.rows, self.cols, self.colors.clone(), k)
    }

    pub fn row_vectors(&self) -> Vec<Vec<Color>> {
        self.colors.chunks(self.cols.max(1)).map(<[_]>::to_vec).collect()
    }

    /// Renders the color matrix with row `i` shifted right by `i` cells, so
    /// anti-diagonals line up in columns.
    pub fn grid_string(&self) -> String {
        let width = self.k.to_string().len() + 1;
        let mut out = String::new();
        for i in 0..self.rows {
            out.push_str(&" ".repeat(i * width));
            for j in 0..self.cols {
                out.push_str(&format!("{:>width$}", self.get(i, j)));
            }
            out.push('\n');
        }
        out
    }
}

/// Precomputed separation requirements of one graph, for checking many
/// labelings of it.
#[derive(Debug, Clone)]
pub struct Validator {
    n_vertices: usize,
    requirements: Vec<((VertexId, VertexId), ViolationKind, u32)>,
}

impl Validator {
    pub fn new(g: &Digraph, params: ConstraintParams) -> Self {
        Self {
            n_vertices: g.n_vertices(),
            requirements: pair_requirements(g, params)
                .into_iter()
                .map(|(pair, (kind, gap))| (pair, kind, gap))
                .collect(),
        }
    }

    pub fn check(&self, f: &Labeling) -> Result<Vec<Violation>> {
        if f.len() != self.n_vertices {
            return Err(Error::InvalidInput(format!(
                "labeling has {} colors but the graph has {} vertices",
                f.len(),
                self.n_vertices
            )));
        }
        let colors = f.colors();
        Ok(self
            .requirements
            .iter()
            .filter_map(|&((u, w), kind, required)| {
                let (a, b) = (colors[u], colors[w]);
                (a.abs_diff(b) < required).then_some(Violation {
                    kind,
                    pair: (u, w),
                    labels: (a, b),
                    required,
                })
            })
            .collect())
    }

    pub fn is_valid(&self, f: &Labeling) -> Result<bool> {
        Ok(self.check(f)?.is_empty())
    }
}

/// Lists every violated separation constraint of `f` on `g`, each pair once,
/// in lexicographic pair order. Empty iff `f` is a k-L(p,q)-labeling.
pub fn validate(g: &Digraph, f: &Labeling, params: ConstraintParams) -> Result<Vec<Violation>> {
    if f.len() != g.n_vertices() {
        return Err(Error::InvalidInput(format!(
            "labeling has {} colors but the graph has {} vertices",
            f.len(),
            g.n_vertices()
        )));
    }
    Validator::new(g, params).check(f)
}

/// Replaces every color `c` by `k - c`.
pub fn complement(f: &Labeling, k: Color) -> Result<Labeling> {
    if f.max_color() > k {
        return Err(Error::InvalidInput(format!(
            "color {} exceeds complement budget {k}",
            f.max_color()
        )));
    }
    Labeling::new(
        f.rows,
        f.cols,
        f.colors.iter().map(|&c| k - c).collect(),
        k,
    )
}

fn torus_shape(g: &Digraph, f: &Labeling) -> Result<GridShape> {
    let shape = g
        .torus()
        .ok_or_else(|| Error::InvalidInput("labeling is not on a product of two cycles".into()))?;
    if f.rows != shape.rows || f.cols != shape.cols {
        return Err(Error::InvalidInput(format!(
            "labeling is {}x{} but the torus is {}x{}",
            f.rows, f.cols, shape.rows, shape.cols
        )));
    }
    Ok(shape)
}

/// Whether `f(i, j) = f(i+1 mod m, j-1 mod n)` at every cell of the torus.
pub fn is_diagonal(g: &Digraph, f: &Labeling) -> Result<bool> {
    let GridShape { rows: m, cols: n, .. } = torus_shape(g, f)?;
    Ok((0..m).all(|i| (0..n).all(|j| f.get(i, j) == f.get((i + 1) % m, (j + n - 1) % n))))
}

/// Restricts a valid diagonal labeling of `C_m ∘ C_n` to its first `m - n`
/// rows, giving a valid diagonal labeling of `C_{m-n} ∘ C_n`.
///
/// The result is re-validated; a failure there is reported as
/// [`Error::Internal`].
pub fn reduce_rows(
    g: &Digraph,
    f: &Labeling,
    params: ConstraintParams,
) -> Result<(Digraph, Labeling)> {
    let shape = torus_shape(g, f)?;
    let (m, n) = (shape.rows, shape.cols);
    if m < n + 3 {
        return Err(Error::InvalidInput(format!(
            "row reduction needs m >= n + 3, got m = {m}, n = {n}"
        )));
    }
    if !is_diagonal(g, f)? {
        return Err(Error::InvalidInput("row reduction needs a diagonal labeling".into()));
    }
    let violations = validate(g, f, params)?;
    if !violations.is_empty() {
        return Err(Error::InvalidInput(format!(
            "row reduction needs a valid labeling; found {} violations",
            violations.len()
        )));
    }
    let rows = m - n;
    let reduced_graph = crate::graph::torus(shape.kind, rows, n)?;
    let reduced = Labeling::new(rows, n, f.colors[..rows * n].to_vec(), f.k)?;
    let bad = validate(&reduced_graph, &reduced, params)?;
    if !bad.is_empty() || !is_diagonal(&reduced_graph, &reduced)? {
        return Err(Error::Internal(format!(
            "restriction of a diagonal labeling to {rows}x{n} is not a valid diagonal labeling"
        )));
    }
    Ok((reduced_graph, reduced))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{oriented_cycle, torus, ProductKind};

    fn cycle_labeling(colors: &[Color], k: Color) -> (Digraph, Labeling) {
        let g = oriented_cycle(colors.len()).unwrap();
        let f = Labeling::for_graph(&g, colors.to_vec(), k).unwrap();
        (g, f)
    }

    fn lift(pattern: &[Color], kind: ProductKind, m: usize, n: usize) -> (Digraph, Labeling) {
        let g = torus(kind, m, n).unwrap();
        let l = pattern.len();
        let colors = (0..m * n).map(|v| pattern[(v / n + v % n) % l]).collect();
        let k = *pattern.iter().max().unwrap();
        let f = Labeling::for_graph(&g, colors, k).unwrap();
        (g, f)
    }

    #[test]
    fn block_024_on_c3() {
        let (g, f) = cycle_labeling(&[0, 2, 4], 4);
        assert!(validate(&g, &f, ConstraintParams::L21).unwrap().is_empty());
    }

    #[test]
    fn constant_on_c3_breaks_every_edge() {
        let (g, f) = cycle_labeling(&[0, 0, 0], 4);
        let v = validate(&g, &f, ConstraintParams::L21).unwrap();
        assert_eq!(v.len(), 3);
        assert!(v.iter().all(|v| v.kind == ViolationKind::EdgeGap && v.required == 2));
        let pairs: Vec<_> = v.iter().map(|v| v.pair).collect();
        assert_eq!(pairs, vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn strong_seven_pattern_lift() {
        let (g, f) = lift(&[0, 2, 4, 6, 1, 3, 5], ProductKind::Strong, 7, 7);
        assert!(validate(&g, &f, ConstraintParams::L21).unwrap().is_empty());
    }

    #[test]
    fn size_mismatch_is_input_error() {
        let g = oriented_cycle(4).unwrap();
        let f = Labeling::new(1, 3, vec![0, 2, 4], 4).unwrap();
        assert!(matches!(
            validate(&g, &f, ConstraintParams::L21),
            Err(Error::InvalidInput(_))
        ));
        assert!(Labeling::new(1, 3, vec![0, 2, 5], 4).is_err());
        assert!(Labeling::new(2, 3, vec![0, 2, 4], 4).is_err());
    }

    #[test]
    fn complement_examples() {
        let (g, f) = cycle_labeling(&[0, 2, 4], 4);
        let c = complement(&f, 4).unwrap();
        assert_eq!(c.colors(), &[4, 2, 0]);
        assert_eq!(complement(&c, 4).unwrap(), f);
        assert!(validate(&g, &c, ConstraintParams::L21).unwrap().is_empty());
        assert!(complement(&f, 3).is_err());
    }

    #[test]
    fn diagonal_checks() {
        let (g, f) = lift(&[0, 2, 4, 1, 3], ProductKind::Cartesian, 5, 10);
        assert!(is_diagonal(&g, &f).unwrap());
        let mut colors = f.colors().to_vec();
        colors[7] = (colors[7] + 1) % 5;
        let broken = Labeling::for_graph(&g, colors, 4).unwrap();
        assert!(!is_diagonal(&g, &broken).unwrap());

        let (c, cf) = cycle_labeling(&[0, 2, 4], 4);
        assert!(is_diagonal(&c, &cf).is_err());
    }

    #[test]
    fn reduce_cartesian_rows() {
        let (g, f) = lift(&[0, 2, 4, 1, 3], ProductKind::Cartesian, 10, 5);
        let (rg, rf) = reduce_rows(&g, &f, ConstraintParams::L21).unwrap();
        assert_eq!((rf.rows(), rf.cols()), (5, 5));
        assert_eq!(rg.n_vertices(), 25);
        assert!(validate(&rg, &rf, ConstraintParams::L21).unwrap().is_empty());
        assert!(is_diagonal(&rg, &rf).unwrap());
    }

    #[test]
    fn reduce_needs_three_extra_rows() {
        let g = torus(ProductKind::Cartesian, 7, 5).unwrap();
        let f = Labeling::for_graph(&g, vec![0; 35], 4).unwrap();
        assert!(matches!(
            reduce_rows(&g, &f, ConstraintParams::L21),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn reduce_strong_rows() {
        let (g, f) = lift(&[0, 2, 4, 6, 1, 3, 5], ProductKind::Strong, 21, 7);
        let (rg, rf) = reduce_rows(&g, &f, ConstraintParams::L21).unwrap();
        assert_eq!((rf.rows(), rf.cols()), (14, 7));
        assert!(validate(&rg, &rf, ConstraintParams::L21).unwrap().is_empty());
    }

    #[test]
    fn reduce_rejects_non_diagonal() {
        let (g, f) = lift(&[0, 2, 4, 1, 3], ProductKind::Cartesian, 10, 5);
        let mut colors = f.colors().to_vec();
        colors.swap(0, 1);
        let f = Labeling::for_graph(&g, colors, 4).unwrap();
        assert!(reduce_rows(&g, &f, ConstraintParams::L21).is_err());
    }

    #[test]
    fn grid_rendering_aligns_anti_diagonals() {
        let (_, f) = lift(&[0, 2, 4], ProductKind::Cartesian, 3, 3);
        let text = f.grid_string();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], " 0 2 4");
        assert_eq!(lines[1], "   2 4 0");
    }
}
