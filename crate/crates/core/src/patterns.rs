//! Cyclic color patterns and the constructions built from them.
//!
//! A pattern `g` of length `L` lifts onto `C_m ∘ C_n` as `f(i, j) = g((i + j) mod L)`
//! whenever `L` divides both `m` and `n`. Whether the lift is a valid
//! L(2,1)-labeling is decided by a condition vector on the pattern alone:
//! `(2, 1)` for Cartesian products and `(2, 2, 1, 1)` for strong products.
//!
//! The strong 7-pattern `0246135` here is the 0-based lift; the residue table
//! `0,2,4,6,1,3,5` for `i + j ≡ 2,3,4,5,6,0,1 (mod 7)` on 1-based
//! coordinates is the same labeling, since 1-based `(i, j)` is 0-based
//! `(i-1, j-1)` and the table's residue 2 lands on 0-based residue 0.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{torus, Digraph, ProductKind};
use crate::labeling::{Color, Labeling};
use crate::solver::{ConstraintSystem, SolveBudget, Solver};

pub const STRONG_PATTERN_7: [Color; 7] = [0, 2, 4, 6, 1, 3, 5];
pub const STRONG_PATTERN_8: [Color; 8] = [0, 2, 4, 6, 1, 3, 5, 7];

/// A cyclic color sequence of length at least 3.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Color>", into = "Vec<Color>")]
pub struct Pattern {
    colors: Vec<Color>,
}

impl TryFrom<Vec<Color>> for Pattern {
    type Error = Error;

    fn try_from(colors: Vec<Color>) -> Result<Self> {
        Pattern::new(colors)
    }
}

impl From<Pattern> for Vec<Color> {
    fn from(p: Pattern) -> Self {
        p.colors
    }
}

impl Pattern {
    pub fn new(colors: Vec<Color>) -> Result<Self> {
        if colors.len() < 3 {
            return Err(Error::InvalidInput(format!(
                "a cyclic pattern needs length >= 3, got {}",
                colors.len()
            )));
        }
        Ok(Self { colors })
    }

    /// Parses a digit string such as `"0246135"`.
    pub fn from_digits(s: &str) -> Result<Self> {
        let colors = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != ',')
            .map(|c| {
                c.to_digit(10)
                    .ok_or_else(|| Error::InvalidInput(format!("'{c}' is not a digit")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(colors)
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn span(&self) -> Color {
        self.colors.iter().copied().max().unwrap_or(0)
    }

    pub fn rotated(&self, by: usize) -> Pattern {
        let mut colors = self.colors.clone();
        colors.rotate_left(by % self.len());
        Pattern { colors }
    }

    /// Lexicographically least rotation.
    pub fn canonical(&self) -> Pattern {
        (0..self.len())
            .map(|r| self.rotated(r))
            .min_by(|a, b| a.colors.cmp(&b.colors))
            .unwrap()
    }

    pub fn concat(&self, other: &Pattern) -> Pattern {
        let mut colors = self.colors.clone();
        colors.extend_from_slice(&other.colors);
        Pattern { colors }
    }

    fn repeat(block: &[Color], times: usize) -> Vec<Color> {
        block.repeat(times)
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.span() > 9 { "," } else { "" };
        let parts: Vec<String> = self.colors.iter().map(Color::to_string).collect();
        f.write_str(&parts.join(sep))
    }
}

/// Minimum gaps `(c_1, ..., c_r)` by forward cyclic offset.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConditionVector {
    gaps: Vec<u32>,
}

impl ConditionVector {
    pub fn new(gaps: Vec<u32>) -> Result<Self> {
        if gaps.is_empty() {
            return Err(Error::InvalidInput("a condition vector needs at least one gap".into()));
        }
        Ok(Self { gaps })
    }

    pub fn cartesian() -> Self {
        Self { gaps: vec![2, 1] }
    }

    /// L(2,2,1,1).
    pub fn strong() -> Self {
        Self {
            gaps: vec![2, 2, 1, 1],
        }
    }

    pub fn for_kind(kind: ProductKind) -> Self {
        match kind {
            ProductKind::Cartesian => Self::cartesian(),
            ProductKind::Strong => Self::strong(),
        }
    }

    pub fn gaps(&self) -> &[u32] {
        &self.gaps
    }

    /// The constraints this vector puts on a cycle of length `len`, as
    /// `(position, partner, gap)` with `partner = position + offset mod len`.
    /// When an offset wraps all the way round, `partner == position`.
    fn constraints(&self, len: usize) -> impl Iterator<Item = (usize, usize, usize, u32)> + '_ {
        (0..len).flat_map(move |s| {
            self.gaps
                .iter()
                .enumerate()
                .map(move |(t, &gap)| (s, (s + t + 1) % len, t + 1, gap))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PatternViolation {
    pub position: usize,
    pub offset: usize,
    pub colors: (Color, Color),
    pub required: u32,
}

/// Checks `|g(s) - g(s + t mod L)| >= c_t` for every position `s` and
/// offset `t`. An offset that is a multiple of `L` compares a position with
/// itself, which fails whenever its gap is positive: on a torus the two
/// cells are distinct vertices that the lift colors alike.
pub fn validate_pattern(g: &Pattern, cv: &ConditionVector) -> Vec<PatternViolation> {
    cv.constraints(g.len())
        .filter_map(|(s, w, t, gap)| {
            let (a, b) = (g.colors[s], g.colors[w]);
            (a.abs_diff(b) < gap).then_some(PatternViolation {
                position: s,
                offset: t,
                colors: (a, b),
                required: gap,
            })
        })
        .collect()
}

/// A 4-L(2,1)-labeling of `C_d` from blocks `024`, closed by `0314` or `13`
/// according to `d mod 3`.
pub fn l21_cycle_pattern(d: usize) -> Result<Pattern> {
    if d < 3 {
        return Err(Error::InvalidInput(format!("cycle length must be >= 3, got {d}")));
    }
    let colors = match d % 3 {
        0 => Pattern::repeat(&[0, 2, 4], d / 3),
        1 => [Pattern::repeat(&[0, 2, 4], (d - 4) / 3), vec![0, 3, 1, 4]].concat(),
        _ => [Pattern::repeat(&[0, 2, 4], (d - 2) / 3), vec![1, 3]].concat(),
    };
    Pattern::new(colors)
}

/// `t = a*m + b*n` with `a, b >= 0` not both zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SemigroupDecomposition {
    pub t: u64,
    pub m: u64,
    pub n: u64,
    pub a: u64,
    pub b: u64,
}

/// Writes `t` as a member of `S(m, n)`, taking the solution with the
/// smallest `b`; `None` when `t` is not in the semigroup.
pub fn semigroup_decompose(t: u64, m: u64, n: u64) -> Result<Option<SemigroupDecomposition>> {
    if t == 0 || m == 0 || n == 0 {
        return Err(Error::InvalidInput(format!(
            "semigroup decomposition needs positive inputs, got t = {t}, m = {m}, n = {n}"
        )));
    }
    Ok((0..=t / n)
        .find(|b| (t - b * n).is_multiple_of(m))
        .map(|b| SemigroupDecomposition {
            t,
            m,
            n,
            a: (t - b * n) / m,
            b,
        }))
}

/// `a` copies of `0246135` followed by `b` copies of `02461357`, where
/// `len = 7a + 8b` with the fewest 8-blocks.
pub fn concatenated_strong_pattern(len: usize) -> Result<Pattern> {
    let dec = if len == 0 {
        None
    } else {
        semigroup_decompose(len as u64, 7, 8)?
    };
    let dec = dec.ok_or_else(|| {
        Error::InvalidInput(format!("{len} is not in the semigroup generated by 7 and 8"))
    })?;
    Pattern::new(
        [
            Pattern::repeat(&STRONG_PATTERN_7, dec.a as usize),
            Pattern::repeat(&STRONG_PATTERN_8, dec.b as usize),
        ]
        .concat(),
    )
}

/// The diagonal lift `f(i, j) = g((i + j) mod L)` on `C_m ∘ C_n`, with
/// budget equal to the pattern's span.
pub fn lift_diagonal(g: &Pattern, m: usize, n: usize, kind: ProductKind) -> Result<(Digraph, Labeling)> {
    let l = g.len();
    if !m.is_multiple_of(l) || !n.is_multiple_of(l) {
        return Err(Error::InvalidInput(format!(
            "pattern length {l} must divide both m = {m} and n = {n}"
        )));
    }
    let graph = torus(kind, m, n)?;
    let colors = (0..m)
        .flat_map(|i| (0..n).map(move |j| g.colors[(i + j) % l]))
        .collect();
    let labeling = Labeling::new(m, n, colors, g.span())?;
    Ok((graph, labeling))
}

/// Lexicographically least pattern of length `d` with colors in
/// `{0, ..., span}` satisfying `cv`, found by exhaustive backtracking.
pub fn exists_cycle_pattern(d: usize, span: Color, cv: &ConditionVector) -> Result<Option<Pattern>> {
    if d < 3 {
        return Err(Error::InvalidInput(format!("cycle length must be >= 3, got {d}")));
    }
    let cs = ConstraintSystem::new(d, cv.constraints(d).map(|(s, w, _, gap)| (s, w, gap)));
    let found = Solver::new(SolveBudget::nodes(u64::MAX)).exists_in(&cs, span)?;
    found.map(Pattern::new).transpose()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labeling::{validate, ConstraintParams};

    fn p(s: &str) -> Pattern {
        Pattern::from_digits(s).unwrap()
    }

    #[test]
    fn block_patterns() {
        assert_eq!(l21_cycle_pattern(3).unwrap(), p("024"));
        assert_eq!(l21_cycle_pattern(7).unwrap(), p("0240314"));
        assert_eq!(l21_cycle_pattern(5).unwrap(), p("02413"));
        assert_eq!(l21_cycle_pattern(4).unwrap(), p("0314"));
        assert!(l21_cycle_pattern(2).is_err());
        for d in 3..=60 {
            let g = l21_cycle_pattern(d).unwrap();
            assert_eq!(g.len(), d);
            assert_eq!(g.span(), 4);
            assert!(validate_pattern(&g, &ConditionVector::cartesian()).is_empty(), "d = {d}");
        }
    }

    #[test]
    fn strong_patterns() {
        assert_eq!(concatenated_strong_pattern(7).unwrap(), p("0246135"));
        assert_eq!(concatenated_strong_pattern(8).unwrap(), p("02461357"));
        let g = concatenated_strong_pattern(15).unwrap();
        assert_eq!(g, p("024613502461357"));
        assert!(validate_pattern(&g, &ConditionVector::strong()).is_empty());
        assert!(concatenated_strong_pattern(13).is_err());
        assert!(concatenated_strong_pattern(41).is_err());
        assert!(concatenated_strong_pattern(0).is_err());
    }

    #[test]
    fn decompositions() {
        let d = semigroup_decompose(40, 5, 11).unwrap().unwrap();
        assert_eq!((d.a, d.b), (8, 0));
        assert_eq!(semigroup_decompose(39, 5, 11).unwrap(), None);
        let d = semigroup_decompose(45, 7, 8).unwrap().unwrap();
        assert_eq!((d.a, d.b), (3, 3));
        assert!(semigroup_decompose(0, 7, 8).is_err());
        assert!(semigroup_decompose(5, 0, 8).is_err());
    }

    #[test]
    fn pattern_validation_examples() {
        assert!(validate_pattern(&p("0246135"), &ConditionVector::strong()).is_empty());
        assert!(validate_pattern(&p("2053164"), &ConditionVector::strong()).is_empty());
        let v = validate_pattern(&p("0123"), &ConditionVector::cartesian());
        assert!(!v.is_empty());
        assert!(v.iter().any(|v| v.offset == 1 && v.required == 2));
        // 3 -> 0 across the wrap has gap 3, so offset-1 failures are the three inner steps
        assert_eq!(v.iter().filter(|v| v.offset == 1).count(), 3);
    }

    #[test]
    fn wrapped_offsets_compare_a_position_with_itself() {
        // offset 3 on a 3-cycle and offset 4 on a 4-cycle hit the same cell
        assert!(!validate_pattern(&p("024"), &ConditionVector::strong()).is_empty());
        assert!(!validate_pattern(&p("0246"), &ConditionVector::strong()).is_empty());
        let zero_gap = ConditionVector::new(vec![2, 2, 0]).unwrap();
        assert!(validate_pattern(&p("024"), &zero_gap).is_empty());
    }

    #[test]
    fn rotations_and_canonical_form() {
        let g = p("2053164");
        for r in 0..7 {
            assert!(validate_pattern(&g.rotated(r), &ConditionVector::strong()).is_empty());
        }
        assert_eq!(g.canonical(), p("0531642"));
        assert_eq!(p("0246135").canonical(), p("0246135"));
    }

    #[test]
    fn lifts() {
        let (g, f) = lift_diagonal(&p("024"), 3, 3, ProductKind::Cartesian).unwrap();
        assert_eq!(f.colors(), &[0, 2, 4, 2, 4, 0, 4, 0, 2]);
        assert!(validate(&g, &f, ConstraintParams::L21).unwrap().is_empty());
        assert!(lift_diagonal(&p("024"), 4, 4, ProductKind::Cartesian).is_err());
        let (g, f) = lift_diagonal(&p("0246135"), 49, 56, ProductKind::Strong).unwrap();
        assert_eq!(f.k_budget(), 6);
        assert!(validate(&g, &f, ConstraintParams::L21).unwrap().is_empty());
    }

    #[test]
    fn pattern_search() {
        let w = exists_cycle_pattern(7, 6, &ConditionVector::strong()).unwrap().unwrap();
        assert!(validate_pattern(&w, &ConditionVector::strong()).is_empty());
        assert_eq!(exists_cycle_pattern(8, 6, &ConditionVector::strong()).unwrap(), None);
        assert_eq!(
            exists_cycle_pattern(3, 4, &ConditionVector::cartesian()).unwrap(),
            Some(p("024"))
        );
    }

    #[test]
    fn serde_as_plain_array() {
        let g = p("0246135");
        let json = serde_json::to_string(&g).unwrap();
        assert_eq!(json, "[0,2,4,6,1,3,5]");
        let back: Pattern = serde_json::from_str(&json).unwrap();
        assert_eq!(back, g);
        assert!(serde_json::from_str::<Pattern>("[0,1]").is_err());
    }
}
