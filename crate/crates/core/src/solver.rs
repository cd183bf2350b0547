//! Exhaustive backtracking search for k-L(p,q)-labelings.
//!
//! Vertices are assigned in index order (row-major for products) and colors
//! are tried in ascending order, so the first labeling found is the
//! lexicographically least one and enumeration visits labelings in
//! lexicographic order. Every assignment prunes the domains of later
//! constrained vertices (forward checking) and backtracks on a wipe-out.

use std::collections::BTreeMap;
use std::ops::ControlFlow;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Digraph, VertexId};
use crate::labeling::{pair_requirements, Color, ConstraintParams, Labeling};

/// Largest color budget the bitmask domains can represent.
pub const MAX_K: Color = 63;

/// Caps on a single search call.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveBudget {
    pub max_nodes: u64,
    pub time_cap: Option<Duration>,
}

impl Default for SolveBudget {
    fn default() -> Self {
        Self {
            max_nodes: 1_000_000_000,
            time_cap: None,
        }
    }
}

impl SolveBudget {
    pub fn nodes(max_nodes: u64) -> Self {
        Self {
            max_nodes,
            time_cap: None,
        }
    }
}

/// Pairwise separation constraints over vertices `0..n`, stored as the
/// later partners of each vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintSystem {
    later: Vec<Vec<(VertexId, u32)>>,
    self_conflict: bool,
}

impl ConstraintSystem {
    /// Builds a system from `(u, w, gap)` triples. Repeated pairs keep the
    /// largest gap. A triple with `u == w` and a positive gap can never be
    /// satisfied and makes the system infeasible.
    pub fn new(n: usize, pairs: impl IntoIterator<Item = (VertexId, VertexId, u32)>) -> Self {
        let mut gaps: BTreeMap<(VertexId, VertexId), u32> = BTreeMap::new();
        let mut self_conflict = false;
        for (u, w, gap) in pairs {
            assert!(u < n && w < n, "constraint ({u}, {w}) outside {n} vertices");
            if gap == 0 {
                continue;
            }
            if u == w {
                self_conflict = true;
                continue;
            }
            let e = gaps.entry((u.min(w), u.max(w))).or_insert(0);
            *e = (*e).max(gap);
        }
        let mut later = vec![Vec::new(); n];
        for ((u, w), gap) in gaps {
            later[u].push((w, gap));
        }
        Self {
            later,
            self_conflict,
        }
    }

    pub fn from_graph(g: &Digraph, params: ConstraintParams) -> Self {
        Self::new(
            g.n_vertices(),
            pair_requirements(g, params)
                .into_iter()
                .map(|((u, w), (_, gap))| (u, w, gap)),
        )
    }

    pub fn n_vertices(&self) -> usize {
        self.later.len()
    }

    /// Checks a full assignment directly against every constraint.
    pub fn satisfied_by(&self, colors: &[Color]) -> bool {
        !self.self_conflict
            && self.later.iter().enumerate().all(|(u, partners)| {
                partners
                    .iter()
                    .all(|&(w, gap)| colors[u].abs_diff(colors[w]) >= gap)
            })
    }
}

fn full_mask(k: Color) -> u64 {
    if k >= 63 {
        u64::MAX
    } else {
        (1u64 << (k + 1)) - 1
    }
}

/// Colors within distance `gap - 1` of `c`.
fn forbidden(c: Color, gap: u32) -> u64 {
    if gap == 0 {
        return 0;
    }
    let lo = c.saturating_sub(gap - 1);
    let hi = (c + gap - 1).min(63);
    full_mask(hi) & !(if lo == 0 { 0 } else { full_mask(lo - 1) })
}

struct Meter {
    nodes: AtomicU64,
    max_nodes: u64,
    deadline: Option<Instant>,
}

struct OutOfBudget;

impl Meter {
    fn new(budget: SolveBudget) -> Self {
        Self {
            nodes: AtomicU64::new(0),
            max_nodes: budget.max_nodes,
            deadline: budget.time_cap.map(|cap| Instant::now() + cap),
        }
    }

    fn add(&self, local: u64) -> std::result::Result<(), OutOfBudget> {
        let total = self.nodes.fetch_add(local, Ordering::Relaxed) + local;
        if total > self.max_nodes || self.deadline.is_some_and(|d| Instant::now() > d) {
            Err(OutOfBudget)
        } else {
            Ok(())
        }
    }

    fn total(&self) -> u64 {
        self.nodes.load(Ordering::Relaxed)
    }
}

const FLUSH_EVERY: u64 = 1024;

struct Search<'a> {
    cs: &'a ConstraintSystem,
    meter: &'a Meter,
    domains: Vec<u64>,
    colors: Vec<Color>,
    trail: Vec<(VertexId, u64)>,
    pending: u64,
}

impl<'a> Search<'a> {
    fn new(cs: &'a ConstraintSystem, k: Color, meter: &'a Meter, first: u64) -> Self {
        let n = cs.n_vertices();
        let mut domains = vec![full_mask(k); n];
        if n > 0 {
            domains[0] &= first;
        }
        Self {
            cs,
            meter,
            domains,
            colors: vec![0; n],
            trail: Vec::new(),
            pending: 0,
        }
    }

    fn run<F>(&mut self, visit: &mut F) -> std::result::Result<ControlFlow<()>, OutOfBudget>
    where
        F: FnMut(&[Color]) -> ControlFlow<()>,
    {
        if self.cs.self_conflict {
            return Ok(ControlFlow::Continue(()));
        }
        let flow = self.assign(0, visit);
        self.meter.add(std::mem::take(&mut self.pending))?;
        flow
    }

    fn assign<F>(
        &mut self,
        v: VertexId,
        visit: &mut F,
    ) -> std::result::Result<ControlFlow<()>, OutOfBudget>
    where
        F: FnMut(&[Color]) -> ControlFlow<()>,
    {
        if v == self.colors.len() {
            return Ok(visit(&self.colors));
        }
        let mut domain = self.domains[v];
        while domain != 0 {
            let c = domain.trailing_zeros();
            domain &= domain - 1;
            self.pending += 1;
            if self.pending >= FLUSH_EVERY {
                self.meter.add(std::mem::take(&mut self.pending))?;
            }
            self.colors[v] = c;
            let mark = self.trail.len();
            let mut alive = true;
            for &(w, gap) in &self.cs.later[v] {
                let old = self.domains[w];
                let new = old & !forbidden(c, gap);
                if new != old {
                    self.trail.push((w, old));
                    self.domains[w] = new;
                    if new == 0 {
                        alive = false;
                        break;
                    }
                }
            }
            let flow = if alive {
                self.assign(v + 1, visit)?
            } else {
                ControlFlow::Continue(())
            };
            while self.trail.len() > mark {
                let (w, old) = self.trail.pop().unwrap();
                self.domains[w] = old;
            }
            if flow.is_break() {
                return Ok(flow);
            }
        }
        Ok(ControlFlow::Continue(()))
    }
}

/// Minimum `k` together with a labeling that achieves it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaWitness {
    pub lambda: Color,
    pub witness: Labeling,
    /// False when symmetry breaking was on, in which case the witness is not
    /// necessarily the lexicographically least one.
    pub canonical: bool,
}

/// Result of checking a predicate against every valid labeling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub count: u64,
    /// Lexicographically least labeling on which the predicate failed.
    pub counterexample: Option<Vec<Color>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Solver {
    budget: SolveBudget,
    parallel: bool,
    symmetry_breaking: bool,
}

impl Solver {
    pub fn new(budget: SolveBudget) -> Self {
        Self {
            budget,
            ..Self::default()
        }
    }

    /// Split the search over the first vertex's colors across threads.
    /// Answers, counts and witnesses are identical to the sequential search.
    pub fn parallel(mut self, on: bool) -> Self {
        self.parallel = on;
        self
    }

    /// Restrict the first vertex to colors `<= k/2` in existence and λ
    /// queries. Sound because `k - f` is valid whenever `f` is; the returned
    /// witness is then no longer guaranteed to be lexicographically least.
    /// Enumeration and checking never use it.
    pub fn symmetry_breaking(mut self, on: bool) -> Self {
        self.symmetry_breaking = on;
        self
    }

    pub fn budget(&self) -> SolveBudget {
        self.budget
    }

    fn check_k(k: Color) -> Result<()> {
        if k > MAX_K {
            return Err(Error::InvalidInput(format!(
                "color budget {k} exceeds the supported maximum {MAX_K}"
            )));
        }
        Ok(())
    }

    fn first_colors(&self, k: Color, break_symmetry: bool) -> Vec<Color> {
        let top = if break_symmetry { k / 2 } else { k };
        (0..=top).collect()
    }

    fn exists_with(&self, cs: &ConstraintSystem, k: Color, meter: &Meter) -> std::result::Result<Option<Vec<Color>>, OutOfBudget> {
        let find = |first: u64| {
            let mut found = None;
            let mut search = Search::new(cs, k, meter, first);
            let _ = search.run(&mut |colors: &[Color]| {
                found = Some(colors.to_vec());
                ControlFlow::Break(())
            })?;
            Ok(found)
        };
        if self.parallel && cs.n_vertices() > 0 {
            let results: Vec<std::result::Result<Option<Vec<Color>>, OutOfBudget>> = self
                .first_colors(k, self.symmetry_breaking)
                .into_par_iter()
                .map(|c| find(1u64 << c))
                .collect();
            for r in results {
                if let Some(found) = r? {
                    return Ok(Some(found));
                }
            }
            Ok(None)
        } else {
            let first = if self.symmetry_breaking {
                full_mask(k / 2)
            } else {
                u64::MAX
            };
            find(first)
        }
    }

    /// Some valid assignment with colors in `{0, ..., k}`, or `None` once the
    /// search space is exhausted.
    pub fn exists_in(&self, cs: &ConstraintSystem, k: Color) -> Result<Option<Vec<Color>>> {
        Self::check_k(k)?;
        let meter = Meter::new(self.budget);
        self.exists_with(cs, k, &meter)
            .map_err(|_| Error::BudgetExhausted {
                nodes: meter.total(),
                partial_count: 0,
                last_resolved_k: None,
            })
    }

    pub fn exists_labeling(
        &self,
        g: &Digraph,
        k: Color,
        params: ConstraintParams,
    ) -> Result<Option<Labeling>> {
        let cs = ConstraintSystem::from_graph(g, params);
        self.exists_in(&cs, k)?
            .map(|colors| Labeling::for_graph(g, colors, k))
            .transpose()
    }

    /// Smallest `k` admitting an assignment, tried upward from 0.
    pub fn lambda_in(&self, cs: &ConstraintSystem) -> Result<(Color, Vec<Color>)> {
        let meter = Meter::new(self.budget);
        for k in 0..=MAX_K {
            match self.exists_with(cs, k, &meter) {
                Ok(Some(colors)) => return Ok((k, colors)),
                Ok(None) => {}
                Err(OutOfBudget) => {
                    return Err(Error::BudgetExhausted {
                        nodes: meter.total(),
                        partial_count: 0,
                        last_resolved_k: k.checked_sub(1),
                    })
                }
            }
        }
        Err(Error::InvalidInput(format!(
            "no labeling exists with k <= {MAX_K}"
        )))
    }

    pub fn exact_lambda(&self, g: &Digraph, params: ConstraintParams) -> Result<LambdaWitness> {
        let cs = ConstraintSystem::from_graph(g, params);
        let (lambda, colors) = self.lambda_in(&cs)?;
        Ok(LambdaWitness {
            lambda,
            witness: Labeling::for_graph(g, colors, lambda)?,
            canonical: !self.symmetry_breaking,
        })
    }

    /// Calls `visit` once per valid assignment, in lexicographic order, and
    /// returns how many there were. Always sequential, never symmetry-broken.
    pub fn enumerate_in<F>(&self, cs: &ConstraintSystem, k: Color, mut visit: F) -> Result<u64>
    where
        F: FnMut(&[Color]),
    {
        Self::check_k(k)?;
        let meter = Meter::new(self.budget);
        let mut count = 0u64;
        let mut search = Search::new(cs, k, &meter, u64::MAX);
        let outcome = search.run(&mut |colors: &[Color]| {
            count += 1;
            visit(colors);
            ControlFlow::Continue(())
        });
        match outcome {
            Ok(_) => Ok(count),
            Err(OutOfBudget) => Err(Error::BudgetExhausted {
                nodes: meter.total(),
                partial_count: count,
                last_resolved_k: None,
            }),
        }
    }

    pub fn enumerate_labelings<F>(
        &self,
        g: &Digraph,
        k: Color,
        params: ConstraintParams,
        visit: F,
    ) -> Result<u64>
    where
        F: FnMut(&[Color]),
    {
        self.enumerate_in(&ConstraintSystem::from_graph(g, params), k, visit)
    }

    /// Counts every valid assignment and reports the least one failing
    /// `holds`. Runs in parallel when enabled; the outcome does not depend
    /// on it.
    pub fn check_all_in<P>(&self, cs: &ConstraintSystem, k: Color, holds: P) -> Result<CheckOutcome>
    where
        P: Fn(&[Color]) -> bool + Sync,
    {
        Self::check_k(k)?;
        let meter = Meter::new(self.budget);
        let subtree = |first: u64| {
            let mut count = 0u64;
            let mut counterexample = None;
            let mut search = Search::new(cs, k, &meter, first);
            let res = search.run(&mut |colors: &[Color]| {
                count += 1;
                if counterexample.is_none() && !holds(colors) {
                    counterexample = Some(colors.to_vec());
                }
                ControlFlow::Continue(())
            });
            (res.is_ok(), CheckOutcome {
                count,
                counterexample,
            })
        };
        let parts: Vec<(bool, CheckOutcome)> = if self.parallel && cs.n_vertices() > 0 {
            (0..=k).into_par_iter().map(|c| subtree(1u64 << c)).collect()
        } else {
            vec![subtree(u64::MAX)]
        };
        let complete = parts.iter().all(|(ok, _)| *ok);
        let mut total = CheckOutcome {
            count: 0,
            counterexample: None,
        };
        for (_, part) in parts {
            total.count += part.count;
            if total.counterexample.is_none() {
                total.counterexample = part.counterexample;
            }
        }
        if complete {
            Ok(total)
        } else {
            Err(Error::BudgetExhausted {
                nodes: meter.total(),
                partial_count: total.count,
                last_resolved_k: None,
            })
        }
    }

    pub fn check_all_labelings<P>(
        &self,
        g: &Digraph,
        k: Color,
        params: ConstraintParams,
        holds: P,
    ) -> Result<CheckOutcome>
    where
        P: Fn(&[Color]) -> bool + Sync,
    {
        self.check_all_in(&ConstraintSystem::from_graph(g, params), k, holds)
    }
}

pub fn exists_labeling(
    g: &Digraph,
    k: Color,
    params: ConstraintParams,
    budget: SolveBudget,
) -> Result<Option<Labeling>> {
    Solver::new(budget).exists_labeling(g, k, params)
}

pub fn exact_lambda(g: &Digraph, params: ConstraintParams, budget: SolveBudget) -> Result<LambdaWitness> {
    Solver::new(budget).exact_lambda(g, params)
}

pub fn enumerate_labelings<F>(
    g: &Digraph,
    k: Color,
    params: ConstraintParams,
    visit: F,
    budget: SolveBudget,
) -> Result<u64>
where
    F: FnMut(&[Color]),
{
    Solver::new(budget).enumerate_labelings(g, k, params, visit)
}
