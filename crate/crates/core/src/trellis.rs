//! Tail-biting trellis realizations and their behaviors.
//!
//! A trajectory `(a, s)` is stored as a single [`GroupElement`] whose
//! coordinates are all symbol coordinates `a_0, ..., a_{n-1}` followed by all
//! state coordinates `s_0, ..., s_{n-1}`. Each `a_j` and `s_j` occupies as many
//! coordinates as its alphabet's ambient group has. This layout is stable and
//! is the one the command-line tool reads and writes.

use std::collections::HashMap;
use std::ops::Range;

use crate::abelian::{GroupElement, ProductGroup, Subgroup};
use crate::error::{Error, Result};

/// A trajectory of a realization, in [`Layout`] coordinates.
pub type Trajectory = GroupElement;

/// Coordinate bookkeeping for trajectories of a fixed realization shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    symbol_groups: Vec<ProductGroup>,
    state_groups: Vec<ProductGroup>,
    symbol_offsets: Vec<usize>,
    state_offsets: Vec<usize>,
    ambient: ProductGroup,
}

impl Layout {
    pub fn new(symbol_groups: Vec<ProductGroup>, state_groups: Vec<ProductGroup>) -> Self {
        assert_eq!(symbol_groups.len(), state_groups.len());
        let mut offset = 0;
        let mut symbol_offsets = Vec::with_capacity(symbol_groups.len() + 1);
        for g in &symbol_groups {
            symbol_offsets.push(offset);
            offset += g.rank();
        }
        let mut state_offsets = Vec::with_capacity(state_groups.len() + 1);
        for g in &state_groups {
            state_offsets.push(offset);
            offset += g.rank();
        }
        state_offsets.push(offset);
        symbol_offsets.push(state_offsets[0]);
        let ambient = ProductGroup::product(symbol_groups.iter().chain(&state_groups));
        Self {
            symbol_groups,
            state_groups,
            symbol_offsets,
            state_offsets,
            ambient,
        }
    }

    pub fn n(&self) -> usize {
        self.symbol_groups.len()
    }

    /// The group `A x S` that every trajectory lives in.
    pub fn ambient(&self) -> &ProductGroup {
        &self.ambient
    }

    pub fn symbol_group(&self, j: usize) -> &ProductGroup {
        &self.symbol_groups[j % self.n()]
    }

    pub fn state_group(&self, j: usize) -> &ProductGroup {
        &self.state_groups[j % self.n()]
    }

    pub fn symbol_coords(&self, j: usize) -> Range<usize> {
        let j = j % self.n();
        self.symbol_offsets[j]..self.symbol_offsets[j + 1]
    }

    pub fn state_coords(&self, j: usize) -> Range<usize> {
        let j = j % self.n();
        self.state_offsets[j]..self.state_offsets[j + 1]
    }

    pub fn all_symbol_coords(&self) -> Range<usize> {
        0..self.state_offsets[0]
    }

    pub fn all_state_coords(&self) -> Range<usize> {
        self.state_offsets[0]..self.state_offsets[self.n()]
    }

    /// Coordinates of `(s_j, a_j, s_{j+1})`. When `n = 1` the state
    /// coordinates appear twice.
    pub fn window_coords(&self, j: usize) -> Vec<usize> {
        self.state_coords(j)
            .chain(self.symbol_coords(j))
            .chain(self.state_coords(j + 1))
            .collect()
    }

    pub fn symbol<'a>(&self, t: &'a Trajectory, j: usize) -> &'a [u32] {
        &t.residues()[self.symbol_coords(j)]
    }

    pub fn state<'a>(&self, t: &'a Trajectory, j: usize) -> &'a [u32] {
        &t.residues()[self.state_coords(j)]
    }

    /// Ambient group of the branch window `S_j x A_j x S_{j+1}`.
    pub fn window_group(&self, j: usize) -> ProductGroup {
        ProductGroup::product([self.state_group(j), self.symbol_group(j), self.state_group(j + 1)])
    }

    /// Ambient group of the state sequence `S = S_0 x ... x S_{n-1}`.
    pub fn state_space_group(&self) -> ProductGroup {
        ProductGroup::product(&self.state_groups)
    }

    /// Assembles a trajectory from per-index symbol and state residues.
    pub fn assemble(&self, symbols: &[&[u32]], states: &[&[u32]]) -> Trajectory {
        let residues: Vec<u32> = symbols
            .iter()
            .chain(states)
            .flat_map(|part| part.iter().copied())
            .collect();
        debug_assert_eq!(residues.len(), self.ambient.rank());
        GroupElement::new(residues)
    }
}

/// A length-`n` tail-biting trellis realization over finite abelian groups.
///
/// Each alphabet is a subgroup of a declared [`ProductGroup`]; for documents
/// read from disk the alphabets are the whole declared group, while
/// [`reduce`] and controllable subrealizations shrink them to subgroups.
/// Constraint code `C_j` is a subgroup of `S_j x A_j x S_{j+1 mod n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization {
    symbols: Vec<Subgroup>,
    states: Vec<Subgroup>,
    constraints: Vec<Subgroup>,
    layout: Layout,
}

impl Realization {
    /// A realization whose alphabets are the full declared groups.
    pub fn new(
        symbol_groups: Vec<ProductGroup>,
        state_groups: Vec<ProductGroup>,
        constraints: Vec<Subgroup>,
    ) -> Result<Self> {
        Self::with_alphabets(
            symbol_groups.into_iter().map(Subgroup::full).collect(),
            state_groups.into_iter().map(Subgroup::full).collect(),
            constraints,
        )
    }

    /// Constraint codes given by generators, alphabets the full declared
    /// groups.
    pub fn from_generators(
        symbol_groups: Vec<ProductGroup>,
        state_groups: Vec<ProductGroup>,
        generators: Vec<Vec<GroupElement>>,
    ) -> Result<Self> {
        let n = symbol_groups.len();
        if generators.len() != n || state_groups.len() != n {
            return Err(Error::InvalidRealization(format!(
                "{} symbol alphabets, {} state alphabets and {} constraint generator lists",
                n,
                state_groups.len(),
                generators.len()
            )));
        }
        let constraints = generators
            .into_iter()
            .enumerate()
            .map(|(j, gens)| {
                let window = ProductGroup::product([&state_groups[j], &symbol_groups[j], &state_groups[(j + 1) % n]]);
                Subgroup::close(window, gens)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(symbol_groups, state_groups, constraints)
    }

    /// A realization with explicitly restricted alphabets.
    pub fn with_alphabets(symbols: Vec<Subgroup>, states: Vec<Subgroup>, constraints: Vec<Subgroup>) -> Result<Self> {
        let n = symbols.len();
        if n == 0 {
            return Err(Error::InvalidRealization("length must be at least 1".into()));
        }
        if states.len() != n || constraints.len() != n {
            return Err(Error::InvalidRealization(format!(
                "{} symbol alphabets, {} state alphabets and {} constraint codes",
                n,
                states.len(),
                constraints.len()
            )));
        }
        let layout = Layout::new(
            symbols.iter().map(|g| g.ambient().clone()).collect(),
            states.iter().map(|g| g.ambient().clone()).collect(),
        );
        for (j, code) in constraints.iter().enumerate() {
            let window = layout.window_group(j);
            if code.ambient() != &window {
                return Err(Error::InvalidRealization(format!(
                    "constraint {j} lives in {:?}, expected {:?}",
                    code.ambient().moduli(),
                    window.moduli()
                )));
            }
            let s_len = layout.state_group(j).rank();
            let a_len = layout.symbol_group(j).rank();
            for branch in code.elements() {
                let r = branch.residues();
                let parts = [
                    (&states[j], &r[..s_len], "state"),
                    (&symbols[j], &r[s_len..s_len + a_len], "symbol"),
                    (&states[(j + 1) % n], &r[s_len + a_len..], "next state"),
                ];
                for (alphabet, part, what) in parts {
                    if !alphabet.contains_element(&GroupElement::new(part.to_vec())) {
                        return Err(Error::InvalidRealization(format!(
                            "branch {branch} of constraint {j} has a {what} outside its alphabet"
                        )));
                    }
                }
            }
        }
        Ok(Self {
            symbols,
            states,
            constraints,
            layout,
        })
    }

    pub fn n(&self) -> usize {
        self.symbols.len()
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn symbol_alphabet(&self, j: usize) -> &Subgroup {
        &self.symbols[j % self.n()]
    }

    pub fn state_alphabet(&self, j: usize) -> &Subgroup {
        &self.states[j % self.n()]
    }

    pub fn constraint(&self, j: usize) -> &Subgroup {
        &self.constraints[j % self.n()]
    }

    /// `|S| = prod_j |S_j|`.
    pub fn state_space_order(&self) -> u128 {
        self.states.iter().map(|s| u128::from(s.order())).product()
    }

    /// `|U| = prod_j |C_j|`, the size of the configuration universe.
    pub fn universe_order(&self) -> u128 {
        self.constraints.iter().map(|c| u128::from(c.order())).product()
    }

    /// True when `S_0` is trivial.
    pub fn is_conventional(&self) -> bool {
        self.states[0].is_trivial()
    }

    /// Splits a branch of `C_j` into `(s_j, a_j, s_{j+1})` residue slices.
    pub fn split_branch<'a>(&self, j: usize, branch: &'a GroupElement) -> (&'a [u32], &'a [u32], &'a [u32]) {
        let s_len = self.layout.state_group(j).rank();
        let a_len = self.layout.symbol_group(j).rank();
        let r = branch.residues();
        (&r[..s_len], &r[s_len..s_len + a_len], &r[s_len + a_len..])
    }
}

/// `|U| = prod_j |C_j|`.
pub fn universe_order(r: &Realization) -> u128 {
    r.universe_order()
}

/// The extended behavior, behavior and code of a realization.
#[derive(Clone, Debug)]
pub struct BehaviorBundle {
    pub layout: Layout,
    pub universe_order: u128,
    /// Configurations `(s, a, s')` of `prod_j C_j` with `s = s'`, laid out
    /// branch by branch.
    pub extended: Subgroup,
    /// Trajectories `(a, s)`.
    pub behavior: Subgroup,
    /// Projection of the behavior onto the symbols.
    pub code: Subgroup,
}

/// Computes the behavior by composing the constraint relations around the
/// cycle.
///
/// Paths are grown one section at a time from every usable starting state in
/// `S_0`; after `n` sections only the paths that return to their starting
/// state survive. The configuration universe is never materialized.
pub fn compute_behavior(r: &Realization) -> BehaviorBundle {
    let n = r.n();
    let layout = r.layout().clone();

    // Branches of each section indexed by their starting state.
    type Section<'a> = HashMap<&'a [u32], Vec<(&'a [u32], &'a [u32])>>;
    let sections: Vec<Section> = (0..n)
        .map(|j| {
            let mut by_state: HashMap<&[u32], Vec<_>> = HashMap::new();
            for branch in r.constraint(j).elements() {
                let (s, a, s_next) = r.split_branch(j, branch);
                by_state.entry(s).or_default().push((a, s_next));
            }
            by_state
        })
        .collect();

    struct Path {
        symbols: Vec<u32>,
        states: Vec<u32>,
        current: Range<usize>,
    }

    let mut paths: Vec<Path> = sections[0]
        .keys()
        .map(|s| Path {
            symbols: Vec::new(),
            states: s.to_vec(),
            current: 0..s.len(),
        })
        .collect();
    for (j, section) in sections.iter().enumerate() {
        let mut next = Vec::with_capacity(paths.len());
        for path in &paths {
            let Some(branches) = section.get(&path.states[path.current.clone()]) else {
                continue;
            };
            for (a, s_next) in branches {
                let mut symbols = path.symbols.clone();
                symbols.extend_from_slice(a);
                let mut states = path.states.clone();
                let start = states.len();
                states.extend_from_slice(s_next);
                next.push(Path {
                    symbols,
                    states,
                    current: start..start + s_next.len(),
                });
            }
        }
        paths = next;
        if j + 1 < n {
            // Prune paths whose end state has no continuation.
            paths.retain(|p| sections[j + 1].contains_key(&p.states[p.current.clone()]));
        }
    }

    let s0_len = layout.state_group(0).rank();
    let mut trajectories: Vec<Trajectory> = paths
        .into_iter()
        .filter(|p| p.states[..s0_len] == p.states[p.current.clone()])
        .map(|mut p| {
            p.states.truncate(p.current.start);
            p.symbols.extend_from_slice(&p.states);
            GroupElement::new(p.symbols)
        })
        .collect();
    trajectories.sort_unstable();
    trajectories.dedup();
    let behavior = Subgroup::from_sorted_unchecked(layout.ambient().clone(), trajectories);
    let extended = extend(&layout, &behavior);
    let code = behavior
        .project(&layout.all_symbol_coords().collect::<Vec<_>>())
        .expect("symbol coordinates are in range");
    BehaviorBundle {
        layout,
        universe_order: r.universe_order(),
        extended,
        behavior,
        code,
    }
}

/// Maps each trajectory to its configuration `((s_0, a_0, s_1), ..., (s_{n-1}, a_{n-1}, s_0))`.
fn extend(layout: &Layout, behavior: &Subgroup) -> Subgroup {
    let n = layout.n();
    let coords: Vec<usize> = (0..n).flat_map(|j| layout.window_coords(j)).collect();
    let ambient = ProductGroup::product(&(0..n).map(|j| layout.window_group(j)).collect::<Vec<_>>());
    let projected = behavior.project(&coords).expect("window coordinates are in range");
    debug_assert_eq!(projected.order(), behavior.order());
    Subgroup::from_sorted_unchecked(ambient, projected.elements().to_vec())
}

/// Per index `j`: does the behavior visit every state of `S_j`?
pub fn is_state_trim(r: &Realization, bundle: &BehaviorBundle) -> Vec<bool> {
    (0..r.n())
        .map(|j| state_projection(bundle, j).order() == r.state_alphabet(j).order())
        .collect()
}

/// Per index `j`: does the behavior use every branch of `C_j`?
pub fn is_branch_trim(r: &Realization, bundle: &BehaviorBundle) -> Vec<bool> {
    (0..r.n())
        .map(|j| window_projection(&bundle.behavior, &bundle.layout, j).order() == r.constraint(j).order())
        .collect()
}

/// State-trim and branch-trim everywhere.
pub fn is_reduced(r: &Realization, bundle: &BehaviorBundle) -> bool {
    is_state_trim(r, bundle).into_iter().all(|b| b) && is_branch_trim(r, bundle).into_iter().all(|b| b)
}

/// `B|S_j`, as a subgroup of the declared state group.
pub fn state_projection(bundle: &BehaviorBundle, j: usize) -> Subgroup {
    project_state(&bundle.behavior, &bundle.layout, j)
}

pub(crate) fn project_state(g: &Subgroup, layout: &Layout, j: usize) -> Subgroup {
    g.project(&layout.state_coords(j).collect::<Vec<_>>())
        .expect("state coordinates are in range")
}

/// Projection of a set of trajectories onto the branch window of section `j`,
/// as a subgroup of `S_j x A_j x S_{j+1}`.
pub fn window_projection(g: &Subgroup, layout: &Layout, j: usize) -> Subgroup {
    g.project(&layout.window_coords(j))
        .expect("window coordinates are in range")
}

/// Trims unused states and branches. The behavior is unchanged and the
/// result is reduced; reducing twice is the same as reducing once.
pub fn reduce(r: &Realization) -> Realization {
    let bundle = compute_behavior(r);
    restrict_to(r, &bundle.behavior)
}

/// The realization whose alphabets and constraints are the projections of
/// `behavior`, which must be a subgroup of `r`'s behavior.
pub(crate) fn restrict_to(r: &Realization, behavior: &Subgroup) -> Realization {
    let layout = r.layout();
    let states = (0..r.n()).map(|j| project_state(behavior, layout, j)).collect();
    let constraints = (0..r.n()).map(|j| window_projection(behavior, layout, j)).collect();
    Realization {
        symbols: r.symbols.clone(),
        states,
        constraints,
        layout: layout.clone(),
    }
}
