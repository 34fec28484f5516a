//! Unique factorization of a behavior into controller granules, trajectory
//! decomposition, the first-state chain, size formulas and the controller
//! canonical realization.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::abelian::{elementary_divisors, GroupElement, QuotientView, Subgroup};
use crate::control::require_reduced;
use crate::error::{Error, Result};
use crate::fragments::Fragment;
use crate::granules::{GranuleRecord, GranuleTable};
use crate::trellis::{project_state, window_projection, BehaviorBundle, Layout, Realization, Trajectory};

/// Granule products against behavior sizes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationReport {
    /// `P^c`: product of all proper-fragment granule orders.
    pub p_c: u128,
    /// `P = |Gamma_R| P^c`.
    pub p: u128,
    pub controllable_order: u128,
    pub behavior_order: u128,
    /// `|B^c| = P^c`.
    pub holds_c: bool,
    /// `|B| = P`.
    pub holds: bool,
}

/// `(P^c, P)`.
pub fn granule_products(table: &GranuleTable) -> (u128, u128) {
    let p_c: u128 = table
        .records()
        .iter()
        .filter(|rec| !rec.fragment.is_full())
        .map(|rec| rec.granule.order() as u128)
        .product();
    (p_c, p_c * table.top_granule().order() as u128)
}

pub fn verify_unique_factorization(
    r: &Realization,
    bundle: &BehaviorBundle,
    table: &GranuleTable,
) -> Result<FactorizationReport> {
    require_reduced(r, bundle)?;
    let (p_c, p) = granule_products(table);
    let controllable_order = u128::from(table.controllable_subbehavior().order());
    let behavior_order = u128::from(bundle.behavior.order());
    Ok(FactorizationReport {
        p_c,
        p,
        controllable_order,
        behavior_order,
        holds_c: controllable_order == p_c,
        holds: behavior_order == p,
    })
}

/// One stored representative per fragment; they sum to the trajectory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub parts: BTreeMap<Fragment, GroupElement>,
}

impl Decomposition {
    pub fn sum(&self, layout: &Layout) -> Trajectory {
        let g = layout.ambient();
        self.parts.values().fold(g.zero(), |acc, x| g.add(&acc, x))
    }

    /// The parts that are not zero.
    pub fn nonzero(&self) -> impl Iterator<Item = (&Fragment, &GroupElement)> {
        self.parts.iter().filter(|(_, x)| !x.is_zero())
    }
}

/// Top-down peeling of trajectories into granule representatives.
///
/// At each level `l >= 1` the representatives of the level-`l` granules sum
/// to a coset of `B_{l-1}` in `Q_l = B_l / B_{l-1}`, and that correspondence
/// is a bijection when unique factorization holds. The lookup from a `Q_l`
/// coset to the tuple of granule cosets is tabulated once.
#[derive(Clone, Debug)]
pub struct Decomposer<'a> {
    table: &'a GranuleTable,
    /// `lookup[l][q]`: granule coset index for each `j` at level `l`.
    lookup: Vec<Vec<Vec<usize>>>,
}

impl<'a> Decomposer<'a> {
    pub fn new(table: &'a GranuleTable) -> Result<Self> {
        let n = table.n();
        let ambient = table.layout().ambient();
        let mut lookup = vec![Vec::new(); n];
        for (level, slot) in lookup.iter_mut().enumerate().skip(1) {
            let records: Vec<&GranuleRecord> = (0..n).map(|j| table.proper(j, level)).collect();
            let factor = &table.chain().factors[level];
            let mut map: Vec<Option<Vec<usize>>> = vec![None; factor.order()];
            for digits in odometer(records.iter().map(|rec| rec.granule.order())) {
                let sum = records.iter().zip(&digits).fold(ambient.zero(), |acc, (rec, &d)| {
                    ambient.add(&acc, rec.granule.representative(d))
                });
                let q = factor.coset_index(&sum).expect("level-l subbehaviors lie in B_l");
                if map[q].replace(digits).is_some() {
                    return Err(unique_factorization_fails(level));
                }
            }
            *slot = map
                .into_iter()
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| unique_factorization_fails(level))?;
        }
        Ok(Self { table, lookup })
    }

    pub fn decompose(&self, t: &Trajectory) -> Result<Decomposition> {
        let table = self.table;
        let layout = table.layout();
        let ambient = layout.ambient();
        ambient.check(t)?;
        if !table.behavior().contains_element(t) {
            return Err(Error::NotATrajectory);
        }
        let n = table.n();
        let mut parts = BTreeMap::new();
        let full = Fragment::full(n);
        let top = table.top_granule();
        let rep = top.representative(top.coset_index(t).expect("t lies in B")).clone();
        let mut residual = ambient.sub(t, &rep);
        parts.insert(full, rep);
        for level in (1..n).rev() {
            let q = table.chain().factors[level]
                .coset_index(&residual)
                .ok_or_else(|| Error::InvariantViolation(format!("residual escaped B_{level}")))?;
            for (j, &d) in self.lookup[level][q].iter().enumerate() {
                let rec = table.proper(j, level);
                let rep = rec.granule.representative(d).clone();
                residual = ambient.sub(&residual, &rep);
                parts.insert(rec.fragment, rep);
            }
        }
        // What is left lies in B_0, a direct sum of symbol-only pieces.
        for j in 0..n {
            let coords: Vec<usize> = layout.symbol_coords(j).collect();
            let mut residues = vec![0; ambient.rank()];
            for &c in &coords {
                residues[c] = residual.residues()[c];
            }
            let piece = GroupElement::new(residues);
            let rec = table.proper(j, 0);
            if !rec.sub.contains_element(&piece) {
                return Err(Error::InvariantViolation(format!(
                    "level-0 residual at {j} is not in B^[{j},{j}]"
                )));
            }
            residual = ambient.sub(&residual, &piece);
            parts.insert(rec.fragment, piece);
        }
        if !residual.is_zero() {
            return Err(Error::InvariantViolation("nonzero residual after peeling".into()));
        }
        Ok(Decomposition { parts })
    }
}

fn unique_factorization_fails(level: usize) -> Error {
    Error::InvariantViolation(format!("level-{level} granules do not factor Q_{level}"))
}

/// Every digit vector with `digits[i] < bases[i]`, first digit fastest.
pub(crate) fn odometer(bases: impl IntoIterator<Item = usize>) -> impl Iterator<Item = Vec<usize>> {
    let bases: Vec<usize> = bases.into_iter().collect();
    let mut next = if bases.contains(&0) {
        None
    } else {
        Some(vec![0; bases.len()])
    };
    std::iter::from_fn(move || {
        let current = next.take()?;
        let mut digits = current.clone();
        for (i, &b) in bases.iter().enumerate() {
            digits[i] += 1;
            if digits[i] < b {
                next = Some(digits);
                break;
            }
            digits[i] = 0;
        }
        Some(current)
    })
}

/// Convenience wrapper building a [`Decomposer`] for a single trajectory.
pub fn decompose(table: &GranuleTable, t: &Trajectory) -> Result<Decomposition> {
    Decomposer::new(table)?.decompose(t)
}

/// The chains `(B^{[j, j+l]})|S_{j+1}` and `(B^{[j, j+l]})|S_j x A_j x S_{j+1}`
/// for `l = 0, ..., n-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FirstStateChain {
    pub j: usize,
    pub state_sizes: Vec<u64>,
    pub window_sizes: Vec<u64>,
    /// `|Gamma^{[j, j+l]}|`.
    pub granule_orders: Vec<u64>,
    pub nested: bool,
    /// Successive indices equal the granule orders.
    pub indices_match: bool,
    /// `|(B^{[j,j)})|S_{j+1}| = prod_{l>=1} |Gamma^{[j,j+l]}|`.
    pub state_product_holds: bool,
    /// `|(B^{[j,j)})|window| = prod_{l>=0} |Gamma^{[j,j+l]}|`.
    pub window_product_holds: bool,
}

impl FirstStateChain {
    pub fn holds(&self) -> bool {
        self.nested && self.indices_match && self.state_product_holds && self.window_product_holds
    }
}

/// The first-state chain at index `j`. For `n = 1` the chain has a single
/// link and both products are checked all the same.
pub fn first_state_chain(
    r: &Realization,
    bundle: &BehaviorBundle,
    table: &GranuleTable,
    j: usize,
) -> Result<FirstStateChain> {
    require_reduced(r, bundle)?;
    let n = table.n();
    let j = j % n;
    let layout = table.layout();
    let mut states: Vec<Subgroup> = Vec::with_capacity(n);
    let mut windows: Vec<Subgroup> = Vec::with_capacity(n);
    let mut granule_orders = Vec::with_capacity(n);
    for level in 0..n {
        let rec = table.proper(j, level);
        states.push(project_state(&rec.sub, layout, j + 1));
        windows.push(window_projection(&rec.sub, layout, j));
        granule_orders.push(rec.granule.order() as u64);
    }
    let nested = (1..n).all(|l| {
        states[l].contains(&states[l - 1]).unwrap_or(false) && windows[l].contains(&windows[l - 1]).unwrap_or(false)
    });
    let state_sizes: Vec<u64> = states.iter().map(Subgroup::order).collect();
    let window_sizes: Vec<u64> = windows.iter().map(Subgroup::order).collect();
    let indices_match = state_sizes[0] == 1
        && window_sizes[0] == granule_orders[0]
        && (1..n).all(|l| {
            state_sizes[l] == state_sizes[l - 1] * granule_orders[l]
                && window_sizes[l] == window_sizes[l - 1] * granule_orders[l]
        });
    let state_product_holds = state_sizes[n - 1] == granule_orders[1..].iter().product::<u64>();
    let window_product_holds = window_sizes[n - 1] == granule_orders.iter().product::<u64>();
    Ok(FirstStateChain {
        j,
        state_sizes,
        window_sizes,
        granule_orders,
        nested,
        indices_match,
        state_product_holds,
        window_product_holds,
    })
}

/// `|S_j|` and `|C_j|` against products of granule orders over the
/// fragments in which they are active.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SizeFormula {
    pub j: usize,
    pub state_order: u64,
    /// `prod_{F : j in E(F)} |Gamma_F|`.
    pub state_product: u64,
    pub constraint_order: u64,
    /// `prod_{F : j in V(F)} |Gamma_F|`.
    pub constraint_product: u64,
}

impl SizeFormula {
    pub fn holds(&self) -> bool {
        self.state_order == self.state_product && self.constraint_order == self.constraint_product
    }
}

pub fn size_formulas(r: &Realization, bundle: &BehaviorBundle, table: &GranuleTable) -> Result<Vec<SizeFormula>> {
    require_reduced(r, bundle)?;
    Ok((0..r.n())
        .map(|j| {
            let product = |active: &dyn Fn(&Fragment) -> bool| -> u64 {
                table
                    .records()
                    .iter()
                    .filter(|rec| active(&rec.fragment))
                    .map(|rec| rec.granule.order() as u64)
                    .product()
            };
            SizeFormula {
                j,
                state_order: r.state_alphabet(j).order(),
                state_product: product(&|f| f.has_edge(j)),
                constraint_order: r.constraint(j).order(),
                constraint_product: product(&|f| f.has_vertex(j)),
            }
        })
        .collect())
}

/// `|(C_j)^c| = |(S_j)^c| * |(B^{[j,j)})|S_j x A_j x S_{j+1}|` per index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TechnicalLemma {
    pub j: usize,
    pub constraint_c: u64,
    pub state_c: u64,
    pub window: u64,
}

impl TechnicalLemma {
    pub fn holds(&self) -> bool {
        self.constraint_c == self.state_c * self.window
    }
}

pub fn technical_lemma_check(
    r: &Realization,
    bundle: &BehaviorBundle,
    table: &GranuleTable,
) -> Result<Vec<TechnicalLemma>> {
    require_reduced(r, bundle)?;
    let layout = table.layout();
    let n = table.n();
    let bc = table.controllable_subbehavior();
    Ok((0..n)
        .map(|j| TechnicalLemma {
            j,
            constraint_c: window_projection(bc, layout, j).order(),
            state_c: project_state(bc, layout, j).order(),
            window: window_projection(&table.proper(j, n - 1).sub, layout, j).order(),
        })
        .collect())
}

/// A trellis that generates exactly the representatives of one granule.
///
/// Its state at `j` is the granule coset index where `j` is internal to the
/// fragment, and nothing elsewhere.
#[derive(Clone, Debug)]
pub struct AtomicTrellis {
    pub fragment: Fragment,
    pub granule: QuotientView,
}

impl AtomicTrellis {
    pub fn order(&self) -> usize {
        self.granule.order()
    }

    /// Number of states at index `j`.
    pub fn state_count(&self, j: usize) -> usize {
        if self.fragment.has_edge(j) {
            self.order()
        } else {
            1
        }
    }
}

/// A state of a [`SetTrellis`]: one coset index per atomic trellis active at
/// this index, plus the state value it stands for.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetState {
    pub tuple: Vec<usize>,
    pub label: GroupElement,
}

/// A branch between state indices of adjacent sections.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetBranch {
    pub from: usize,
    pub symbol: GroupElement,
    pub to: usize,
}

/// A trellis with explicit state and branch sets; the branch sets need not
/// be groups.
#[derive(Clone, Debug)]
pub struct SetTrellis {
    pub layout: Layout,
    pub atoms: Vec<AtomicTrellis>,
    /// `active_states[j]`: atoms whose state is internal at `j`, by index
    /// into `atoms`.
    pub active_states: Vec<Vec<usize>>,
    pub states: Vec<Vec<SetState>>,
    pub branches: Vec<Vec<SetBranch>>,
}

impl SetTrellis {
    pub fn n(&self) -> usize {
        self.layout.n()
    }

    pub fn state_counts(&self) -> Vec<usize> {
        self.states.iter().map(Vec::len).collect()
    }

    pub fn branch_counts(&self) -> Vec<usize> {
        self.branches.iter().map(Vec::len).collect()
    }

    /// Every closed path around the cycle, as a trajectory in the original
    /// layout with states replaced by their labels. Sorted.
    pub fn trajectories(&self) -> Vec<Trajectory> {
        let n = self.n();
        let mut outgoing: Vec<HashMap<usize, Vec<&SetBranch>>> = vec![HashMap::new(); n];
        for (j, list) in self.branches.iter().enumerate() {
            for b in list {
                outgoing[j].entry(b.from).or_default().push(b);
            }
        }
        let mut out = Vec::new();
        let mut path: Vec<&SetBranch> = Vec::with_capacity(n);
        for start in 0..self.states[0].len() {
            self.walk(&outgoing, start, start, &mut path, &mut out);
        }
        out.sort();
        out
    }

    fn walk<'b>(
        &self,
        outgoing: &[HashMap<usize, Vec<&'b SetBranch>>],
        start: usize,
        at: usize,
        path: &mut Vec<&'b SetBranch>,
        out: &mut Vec<Trajectory>,
    ) {
        let j = path.len();
        let n = self.n();
        if j == n {
            if at == start {
                let symbols: Vec<&[u32]> = path.iter().map(|b| b.symbol.residues()).collect();
                let states: Vec<&[u32]> = path
                    .iter()
                    .enumerate()
                    .map(|(j, b)| self.states[j][b.from].label.residues())
                    .collect();
                out.push(self.layout.assemble(&symbols, &states));
            }
            return;
        }
        for b in outgoing[j].get(&at).into_iter().flatten() {
            path.push(b);
            self.walk(outgoing, start, b.to, path, out);
            path.pop();
        }
    }
}

/// The controller canonical realization: the product of one atomic trellis
/// per nontrivial granule, with symbols and state values summed.
pub fn controller_canonical(r: &Realization, bundle: &BehaviorBundle, table: &GranuleTable) -> Result<SetTrellis> {
    require_reduced(r, bundle)?;
    let layout = table.layout().clone();
    let n = layout.n();
    let ambient = layout.ambient();
    let atoms: Vec<AtomicTrellis> = table
        .nontrivial()
        .map(|rec| AtomicTrellis {
            fragment: rec.fragment,
            granule: rec.granule.clone(),
        })
        .collect();
    let active_states: Vec<Vec<usize>> = (0..n)
        .map(|j| (0..atoms.len()).filter(|&i| atoms[i].fragment.has_edge(j)).collect())
        .collect();
    let state_value = |j: usize, tuple: &[usize]| -> GroupElement {
        let sum = active_states[j]
            .iter()
            .zip(tuple)
            .fold(ambient.zero(), |acc, (&i, &c)| {
                ambient.add(&acc, atoms[i].granule.representative(c))
            });
        GroupElement::new(layout.state(&sum, j).to_vec())
    };
    let mut states = Vec::with_capacity(n);
    let mut state_index: Vec<HashMap<Vec<usize>, usize>> = Vec::with_capacity(n);
    for (j, active) in active_states.iter().enumerate() {
        let list: Vec<SetState> = odometer(active.iter().map(|&i| atoms[i].order()))
            .map(|tuple| SetState {
                label: state_value(j, &tuple),
                tuple,
            })
            .collect();
        state_index.push(list.iter().enumerate().map(|(k, s)| (s.tuple.clone(), k)).collect());
        states.push(list);
    }
    let mut branches = Vec::with_capacity(n);
    for j in 0..n {
        let next = (j + 1) % n;
        let active: Vec<usize> = (0..atoms.len()).filter(|&i| atoms[i].fragment.has_vertex(j)).collect();
        let mut set = BTreeSet::new();
        for tuple in odometer(active.iter().map(|&i| atoms[i].order())) {
            let choice: HashMap<usize, usize> = active.iter().copied().zip(tuple).collect();
            let sum = choice.iter().fold(ambient.zero(), |acc, (&i, &c)| {
                ambient.add(&acc, atoms[i].granule.representative(c))
            });
            let from: Vec<usize> = active_states[j].iter().map(|i| choice[i]).collect();
            let to: Vec<usize> = active_states[next].iter().map(|i| choice[i]).collect();
            set.insert(SetBranch {
                from: state_index[j][&from],
                symbol: GroupElement::new(layout.symbol(&sum, j).to_vec()),
                to: state_index[next][&to],
            });
        }
        branches.push(set.into_iter().collect());
    }
    Ok(SetTrellis {
        layout,
        atoms,
        active_states,
        states,
        branches,
    })
}

/// Whether `tuple -> sum of representatives` is a homomorphism from the
/// product of the granules onto `B`. Since each granule contributes
/// independently, that holds exactly when every granule's representative map
/// is additive.
pub fn is_homomorphic(ct: &SetTrellis) -> bool {
    let ambient = ct.layout.ambient();
    ct.atoms.iter().all(|atom| {
        let g = &atom.granule;
        (0..g.order()).all(|a| {
            (0..g.order())
                .all(|b| &ambient.add(g.representative(a), g.representative(b)) == g.representative(g.add(a, b)))
        })
    })
}

/// Whether every branch set is closed under the componentwise group law of
/// (granule tuple, symbol, granule tuple).
pub fn branch_sets_are_subgroups(ct: &SetTrellis) -> bool {
    let n = ct.n();
    let layout = &ct.layout;
    (0..n).all(|j| {
        let next = (j + 1) % n;
        let add_tuple = |k: usize, x: &[usize], y: &[usize]| -> Vec<usize> {
            ct.active_states[k]
                .iter()
                .zip(x.iter().zip(y))
                .map(|(&i, (&a, &b))| ct.atoms[i].granule.add(a, b))
                .collect()
        };
        let key = |b: &SetBranch| {
            (
                ct.states[j][b.from].tuple.clone(),
                b.symbol.clone(),
                ct.states[next][b.to].tuple.clone(),
            )
        };
        let set: BTreeSet<_> = ct.branches[j].iter().map(key).collect();
        let symbols = layout.symbol_group(j);
        set.iter().all(|(s1, a1, t1)| {
            set.iter()
                .all(|(s2, a2, t2)| set.contains(&(add_tuple(j, s1, s2), symbols.add(a1, a2), add_tuple(next, t1, t2))))
        })
    })
}

/// True when the direct product of the granules is not isomorphic to `B`,
/// so no choice of representatives can make the canonical realization
/// homomorphic.
pub fn structurally_nonhomomorphic(table: &GranuleTable) -> bool {
    let mut granule_factors: Vec<u64> = Vec::new();
    for rec in table.nontrivial() {
        granule_factors.extend(elementary_divisors(&rec.granule.invariant_factors()));
    }
    granule_factors.sort_unstable();
    let mut behavior = elementary_divisors(&table.behavior().invariant_factors());
    behavior.sort_unstable();
    granule_factors != behavior
}
