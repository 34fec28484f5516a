//! The graded poset of fragments of a length-`n` cyclic realization.

use std::cmp::Ordering;
use std::fmt::{self, Write as _};

/// A fragment of a length-`n` realization: either a circular interval
/// `[j, k)` of constraint codes or the whole realization.
///
/// Proper fragments are stored as `(start, level)`; the interval is
/// `[start, start + level + 1)` taken mod `n`. This avoids the endpoint
/// ambiguity between `[j, j)` (level `n - 1`) and `[j, j + 1)` (level 0)
/// when `n = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fragment {
    n: usize,
    kind: FragmentKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FragmentKind {
    Proper { start: usize, level: usize },
    Full,
}

impl Fragment {
    /// The proper fragment `[start, start + level]` (inclusive vertex range).
    ///
    /// Panics unless `start < n` and `level < n`.
    pub fn proper(n: usize, start: usize, level: usize) -> Self {
        assert!(
            start < n && level < n,
            "fragment [{start}; level {level}] out of range for n = {n}"
        );
        Self {
            n,
            kind: FragmentKind::Proper { start, level },
        }
    }

    /// The proper fragment written `[j, k)` with `j, k` in `Z_n`.
    pub fn interval(n: usize, j: usize, k: usize) -> Self {
        let level = (k % n + 2 * n - j % n - 1) % n;
        Self::proper(n, j % n, level)
    }

    pub fn full(n: usize) -> Self {
        assert!(n >= 1);
        Self {
            n,
            kind: FragmentKind::Full,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> FragmentKind {
        self.kind
    }

    pub fn is_full(&self) -> bool {
        matches!(self.kind, FragmentKind::Full)
    }

    /// Number of internal state variables.
    pub fn level(&self) -> usize {
        match self.kind {
            FragmentKind::Proper { level, .. } => level,
            FragmentKind::Full => self.n,
        }
    }

    /// The start `j` of `[j, k)`; 0 for the full fragment.
    pub fn start(&self) -> usize {
        match self.kind {
            FragmentKind::Proper { start, .. } => start,
            FragmentKind::Full => 0,
        }
    }

    /// The end `k` of `[j, k)`; `None` for the full fragment.
    pub fn end(&self) -> Option<usize> {
        match self.kind {
            FragmentKind::Proper { start, level } => Some((start + level + 1) % self.n),
            FragmentKind::Full => None,
        }
    }

    /// Whether constraint code `j` belongs to the fragment.
    pub fn has_vertex(&self, j: usize) -> bool {
        match self.kind {
            FragmentKind::Proper { start, level } => (j % self.n + self.n - start) % self.n <= level,
            FragmentKind::Full => true,
        }
    }

    /// Whether state variable `j` is internal to the fragment.
    pub fn has_edge(&self, j: usize) -> bool {
        match self.kind {
            FragmentKind::Proper { start, level } => {
                let offset = (j % self.n + self.n - start) % self.n;
                (1..=level).contains(&offset)
            }
            FragmentKind::Full => true,
        }
    }

    pub fn vertex_set(&self) -> Vec<usize> {
        (0..self.n).filter(|&j| self.has_vertex(j)).collect()
    }

    pub fn edge_set(&self) -> Vec<usize> {
        (0..self.n).filter(|&j| self.has_edge(j)).collect()
    }

    /// Stable DOT node name: `F_j_k` or `R`.
    pub fn node_name(&self) -> String {
        match self.end() {
            Some(k) => format!("F_{}_{}", self.start(), k),
            None => "R".to_owned(),
        }
    }

    /// Partial order: containment of both vertex and edge sets.
    pub fn leq(&self, other: &Fragment) -> bool {
        assert_eq!(self.n, other.n, "fragments of different realizations");
        (0..self.n).all(|j| (!self.has_vertex(j) || other.has_vertex(j)) && (!self.has_edge(j) || other.has_edge(j)))
    }

    pub fn strictly_below(&self, other: &Fragment) -> bool {
        self != other && self.leq(other)
    }

    /// `self` is covered by `hi`.
    pub fn covered_by(&self, hi: &Fragment) -> bool {
        self.strictly_below(hi) && self.level() + 1 == hi.level()
    }

    /// The fragments covered by `self`, in canonical order.
    ///
    /// A proper fragment `[j, k)` of level at least 1 covers `[j, k - 1)` and
    /// `[j + 1, k)`; the full fragment covers every `[j, j)`.
    pub fn lower_covers(&self) -> Vec<Fragment> {
        match self.kind {
            FragmentKind::Proper { level: 0, .. } => Vec::new(),
            FragmentKind::Proper { start, level } => vec![
                Fragment::proper(self.n, start, level - 1),
                Fragment::proper(self.n, (start + 1) % self.n, level - 1),
            ],
            FragmentKind::Full => (0..self.n).map(|j| Fragment::proper(self.n, j, self.n - 1)).collect(),
        }
    }

    fn sort_key(&self) -> (usize, usize, usize) {
        (self.n, self.level(), self.start())
    }
}

impl Ord for Fragment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for Fragment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.end() {
            Some(k) => write!(f, "[{},{})", self.start(), k),
            None => write!(f, "R"),
        }
    }
}

/// All `n^2 + 1` fragments in `(level, start)` order, full fragment last.
pub fn all_fragments(n: usize) -> Vec<Fragment> {
    assert!(n >= 1, "a realization has at least one section");
    (0..n)
        .flat_map(|level| (0..n).map(move |start| Fragment::proper(n, start, level)))
        .chain(std::iter::once(Fragment::full(n)))
        .collect()
}

/// Covering pairs `(lo, hi)` of the fragment poset, in canonical order.
pub fn covering_pairs(n: usize) -> Vec<(Fragment, Fragment)> {
    let mut pairs: Vec<_> = all_fragments(n)
        .into_iter()
        .flat_map(|hi| hi.lower_covers().into_iter().map(move |lo| (lo, hi)))
        .collect();
    pairs.sort();
    pairs.dedup();
    pairs
}

/// Hasse diagram of the fragment poset as a DOT digraph, one rank per level.
pub fn hasse_dot(n: usize) -> String {
    let fragments = all_fragments(n);
    let mut out = String::new();
    writeln!(out, "digraph fragments {{").unwrap();
    writeln!(out, "  rankdir=BT;").unwrap();
    writeln!(out, "  node [shape=plaintext];").unwrap();
    for level in 0..=n {
        write!(out, "  {{ rank=same;").unwrap();
        for f in fragments.iter().filter(|f| f.level() == level) {
            write!(out, " {};", f.node_name()).unwrap();
        }
        writeln!(out, " }}").unwrap();
    }
    for f in &fragments {
        writeln!(out, "  {} [label=\"{}\"];", f.node_name(), f).unwrap();
    }
    for (lo, hi) in covering_pairs(n) {
        writeln!(out, "  {} -> {};", lo.node_name(), hi.node_name()).unwrap();
    }
    writeln!(out, "}}").unwrap();
    out
}
