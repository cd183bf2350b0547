//! Oriented cycles, oriented paths and their Cartesian and strong products.
//!
//! Vertices are 0-based. A product of a graph with `rows` vertices and a
//! graph with `cols` vertices numbers the vertex `(i, j)` as `i * cols + j`,
//! so the first factor indexes rows and the second indexes columns.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProductKind {
    Cartesian,
    Strong,
}

impl ProductKind {
    pub fn name(self) -> &'static str {
        match self {
            ProductKind::Cartesian => "cartesian",
            ProductKind::Strong => "strong",
        }
    }

    /// Out-step offsets `(di, dj)` of a product of two cycles.
    pub fn steps(self) -> &'static [(usize, usize)] {
        match self {
            ProductKind::Cartesian => &[(1, 0), (0, 1)],
            ProductKind::Strong => &[(1, 0), (0, 1), (1, 1)],
        }
    }
}

impl fmt::Display for ProductKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which family a product's factors both belong to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FactorFamily {
    Cycle,
    Path,
}

/// Grid metadata attached to products whose factors are both cycles or both paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridShape {
    pub kind: ProductKind,
    pub factors: FactorFamily,
    pub rows: usize,
    pub cols: usize,
}

impl GridShape {
    pub fn is_torus(&self) -> bool {
        self.factors == FactorFamily::Cycle
    }

    pub fn id(&self, coord: GridCoord) -> VertexId {
        debug_assert!(coord.i < self.rows && coord.j < self.cols);
        coord.i * self.cols + coord.j
    }

    pub fn coord(&self, v: VertexId) -> GridCoord {
        GridCoord {
            i: v / self.cols,
            j: v % self.cols,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridCoord {
    pub i: usize,
    pub j: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Cycle,
    Path,
    Product(GridShape),
    General,
}

/// An oriented graph: a digraph without loops, parallel arcs or digons.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    out_edges: Vec<Vec<VertexId>>,
    family: Family,
}

impl Digraph {
    /// Builds a digraph from out-neighbor lists, rejecting anything that is
    /// not an oriented graph.
    pub fn from_out_edges(out_edges: Vec<Vec<VertexId>>) -> Result<Self> {
        Self::checked(out_edges, Family::General)
    }

    fn checked(out_edges: Vec<Vec<VertexId>>, family: Family) -> Result<Self> {
        let n = out_edges.len();
        if n == 0 {
            return Err(Error::InvalidGraph("a graph needs at least one vertex".into()));
        }
        let mut arcs = BTreeSet::new();
        for (u, outs) in out_edges.iter().enumerate() {
            for &w in outs {
                if w >= n {
                    return Err(Error::InvalidGraph(format!(
                        "arc {u} -> {w} points outside {n} vertices"
                    )));
                }
                if w == u {
                    return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
                }
                if !arcs.insert((u, w)) {
                    return Err(Error::InvalidGraph(format!("parallel arc {u} -> {w}")));
                }
            }
        }
        if let Some(&(u, w)) = arcs.iter().find(|&&(u, w)| arcs.contains(&(w, u))) {
            return Err(Error::InvalidGraph(format!(
                "digon between {u} and {w}; oriented graphs have a simple underlying graph"
            )));
        }
        Ok(Self { out_edges, family })
    }

    pub fn n_vertices(&self) -> usize {
        self.out_edges.len()
    }

    pub fn n_edges(&self) -> usize {
        self.out_edges.iter().map(Vec::len).sum()
    }

    pub fn out_neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.out_edges[v]
    }

    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.out_edges
            .iter()
            .enumerate()
            .flat_map(|(u, outs)| outs.iter().map(move |&w| (u, w)))
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn grid(&self) -> Option<GridShape> {
        match self.family {
            Family::Product(shape) => Some(shape),
            _ => None,
        }
    }

    /// Grid shape when this graph is a product of two oriented cycles.
    pub fn torus(&self) -> Option<GridShape> {
        self.grid().filter(GridShape::is_torus)
    }

    /// `(rows, cols)` used when a labeling of this graph is laid out as a
    /// matrix: the grid for products, a single row otherwise.
    pub fn layout(&self) -> (usize, usize) {
        match self.grid() {
            Some(g) => (g.rows, g.cols),
            None => (1, self.n_vertices()),
        }
    }

    /// Unordered pairs `(u, w)`, `u < w`, joined by an arc in either direction.
    pub fn edge_pairs(&self) -> BTreeSet<(VertexId, VertexId)> {
        self.edges().map(|(u, w)| (u.min(w), u.max(w))).collect()
    }

    /// Unordered pairs `(u, w)`, `u < w`, joined by a directed path of length two.
    pub fn two_step_pairs(&self) -> BTreeSet<(VertexId, VertexId)> {
        let mut pairs = BTreeSet::new();
        for (u, outs) in self.out_edges.iter().enumerate() {
            for &x in outs {
                for &w in &self.out_edges[x] {
                    if w != u {
                        pairs.insert((u.min(w), u.max(w)));
                    }
                }
            }
        }
        pairs
    }
}

/// The oriented cycle `0 -> 1 -> ... -> n-1 -> 0`.
pub fn oriented_cycle(n: usize) -> Result<Digraph> {
    if n < 3 {
        return Err(Error::InvalidGraph(format!(
            "an oriented cycle needs at least 3 vertices, got {n}"
        )));
    }
    Digraph::checked((0..n).map(|i| vec![(i + 1) % n]).collect(), Family::Cycle)
}

/// The oriented path `0 -> 1 -> ... -> n-1`.
pub fn oriented_path(n: usize) -> Result<Digraph> {
    if n == 0 {
        return Err(Error::InvalidGraph("an oriented path needs at least 1 vertex".into()));
    }
    Digraph::checked(
        (0..n)
            .map(|i| if i + 1 < n { vec![i + 1] } else { vec![] })
            .collect(),
        Family::Path,
    )
}

/// Cartesian or strong product of two oriented graphs. `g` indexes rows and
/// `h` indexes columns.
pub fn product(kind: ProductKind, g: &Digraph, h: &Digraph) -> Result<Digraph> {
    let (rows, cols) = (g.n_vertices(), h.n_vertices());
    let id = |a: usize, x: usize| a * cols + x;
    let mut out = vec![Vec::new(); rows * cols];
    for a in 0..rows {
        for x in 0..cols {
            let v = &mut out[id(a, x)];
            for &b in g.out_neighbors(a) {
                v.push(id(b, x));
            }
            for &y in h.out_neighbors(x) {
                v.push(id(a, y));
            }
            if kind == ProductKind::Strong {
                for &b in g.out_neighbors(a) {
                    for &y in h.out_neighbors(x) {
                        v.push(id(b, y));
                    }
                }
            }
        }
    }
    let factors = match (g.family, h.family) {
        (Family::Cycle, Family::Cycle) => Some(FactorFamily::Cycle),
        (Family::Path, Family::Path) => Some(FactorFamily::Path),
        _ => None,
    };
    let family = match factors {
        Some(factors) => Family::Product(GridShape {
            kind,
            factors,
            rows,
            cols,
        }),
        None => Family::General,
    };
    Digraph::checked(out, family)
}

/// `C_m ∘ C_n` for the given product kind.
pub fn torus(kind: ProductKind, m: usize, n: usize) -> Result<Digraph> {
    product(kind, &oriented_cycle(m)?, &oriented_cycle(n)?)
}

/// `P_m ∘ P_n` for the given product kind.
pub fn path_grid(kind: ProductKind, m: usize, n: usize) -> Result<Digraph> {
    product(kind, &oriented_path(m)?, &oriented_path(n)?)
}
