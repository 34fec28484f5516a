//! Controllability: the syndrome-former test, the controllable subbehavior
//! and subrealization, and how an uncontrollable trellis falls apart into
//! disconnected pieces.

use std::collections::HashMap;

use petgraph::unionfind::UnionFind;

use crate::abelian::{GroupElement, QuotientView, Subgroup};
use crate::error::{Error, Result};
use crate::granules::GranuleTable;
use crate::trellis::{is_reduced, project_state, restrict_to, window_projection, BehaviorBundle, Realization};

/// The image of `(s, a, s') -> s - s'` in `S = prod_j S_j`.
///
/// Generated branch by branch: a branch `(s, a, s')` of `C_j` contributes
/// `+s` at state `j` and `-s'` at state `j + 1`.
pub fn syndrome_image(r: &Realization) -> Subgroup {
    let layout = r.layout();
    let n = r.n();
    let space = layout.state_space_group();
    let base = layout.all_state_coords().start;
    let mut generators = Vec::new();
    for j in 0..n {
        let next = (j + 1) % n;
        let next_group = layout.state_group(next);
        for branch in r.constraint(j).elements() {
            let (s, _, s_next) = r.split_branch(j, branch);
            let mut residues = vec![0u32; space.rank()];
            for (c, &x) in layout.state_coords(j).zip(s) {
                residues[c - base] = x;
            }
            let minus = next_group.neg(&GroupElement::new(s_next.to_vec()));
            for (k, c) in layout.state_coords(next).enumerate() {
                let m = space.moduli()[c - base];
                residues[c - base] = (residues[c - base] + minus.residues()[k]) % m;
            }
            generators.push(GroupElement::new(residues));
        }
    }
    Subgroup::close(space, generators).expect("syndromes lie in the state space")
}

/// The quantities of the controllability test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ControllabilityTest {
    /// `|U|`.
    pub universe_order: u128,
    /// `|B̄|`, equal to `|B|`.
    pub extended_order: u128,
    /// `|S|`.
    pub state_space_order: u128,
    /// `|S^c|`.
    pub syndrome_image_order: u128,
    pub controllable: bool,
}

impl ControllabilityTest {
    /// `(|U| / |B̄|, |S|)`; the first never exceeds the second.
    pub fn ratio(&self) -> (u128, u128) {
        (self.universe_order / self.extended_order, self.state_space_order)
    }
}

/// Runs the test `|U| / |B̄| = |S|` and cross-checks it against
/// `S^c = S` and `U / B̄ ≅ S^c`.
pub fn controllability_test(r: &Realization, bundle: &BehaviorBundle) -> Result<ControllabilityTest> {
    let image = syndrome_image(r);
    let test = ControllabilityTest {
        universe_order: bundle.universe_order,
        extended_order: u128::from(bundle.extended.order()),
        state_space_order: r.state_space_order(),
        syndrome_image_order: u128::from(image.order()),
        controllable: false,
    };
    let (quotient, states) = test.ratio();
    if !test.universe_order.is_multiple_of(test.extended_order) || quotient != test.syndrome_image_order {
        return Err(Error::InvariantViolation(format!(
            "|U| / |B| = {} / {} but |S^c| = {}",
            test.universe_order, test.extended_order, test.syndrome_image_order
        )));
    }
    if quotient > states {
        return Err(Error::InvariantViolation(format!(
            "|U| / |B| = {quotient} exceeds |S| = {states}"
        )));
    }
    Ok(ControllabilityTest {
        controllable: quotient == states,
        ..test
    })
}

/// Everything controllability-related about a reduced realization.
#[derive(Clone, Debug)]
pub struct ControlReport {
    pub test: ControllabilityTest,
    /// `S^c`.
    pub syndrome_image: Subgroup,
    /// `B^c = B_{n-1}`.
    pub controllable_sub: Subgroup,
    /// `Gamma_R = B / B^c`.
    pub top_granule: QuotientView,
    pub component_count: usize,
}

pub fn control_report(r: &Realization, bundle: &BehaviorBundle, table: &GranuleTable) -> Result<ControlReport> {
    Ok(ControlReport {
        test: controllability_test(r, bundle)?,
        syndrome_image: syndrome_image(r),
        controllable_sub: table.controllable_subbehavior().clone(),
        top_granule: table.top_granule().clone(),
        component_count: component_count(r, bundle)?,
    })
}

/// The controllable subrealization `R^c`: alphabets and constraints are the
/// projections of `B^c`. Its behavior is `B^c` and it is reduced.
pub fn controllable_subrealization(r: &Realization, table: &GranuleTable) -> Realization {
    restrict_to(r, table.controllable_subbehavior())
}

/// `S_j / (S_j)^c` and `C_j / (C_j)^c` at one index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaQuotient {
    pub j: usize,
    pub state_index: u64,
    pub state_factors: Vec<u64>,
    pub constraint_index: u64,
    pub constraint_factors: Vec<u64>,
    /// Both quotients are isomorphic to `Gamma_R`.
    pub holds: bool,
}

/// Per-index quotients of the state spaces and constraint codes by their
/// controllable parts; each should be isomorphic to `Gamma_R`.
pub fn lemma_quotients(r: &Realization, bundle: &BehaviorBundle, table: &GranuleTable) -> Result<Vec<LemmaQuotient>> {
    require_reduced(r, bundle)?;
    let layout = r.layout();
    let bc = table.controllable_subbehavior();
    let top = table.top_granule();
    let top_order = top.order() as u64;
    let top_factors = top.invariant_factors();
    (0..r.n())
        .map(|j| {
            let state = r.state_alphabet(j).quotient(&project_state(bc, layout, j))?;
            let constraint = r.constraint(j).quotient(&window_projection(bc, layout, j))?;
            let row = LemmaQuotient {
                j,
                state_index: state.order() as u64,
                state_factors: state.invariant_factors(),
                constraint_index: constraint.order() as u64,
                constraint_factors: constraint.invariant_factors(),
                holds: false,
            };
            let holds = row.state_index == top_order
                && row.constraint_index == top_order
                && row.state_factors == top_factors
                && row.constraint_factors == top_factors;
            Ok(LemmaQuotient { holds, ..row })
        })
        .collect()
}

/// Connected components of the trellis diagram: vertices are the states
/// `(j, s_j)`, edges the branches of every `C_j`.
pub fn component_count(r: &Realization, bundle: &BehaviorBundle) -> Result<usize> {
    require_reduced(r, bundle)?;
    let (index, vertices) = state_vertices(r);
    let mut uf = UnionFind::<usize>::new(vertices);
    let mut merges = 0;
    for j in 0..r.n() {
        let next = (j + 1) % r.n();
        for branch in r.constraint(j).elements() {
            let (s, _, s_next) = r.split_branch(j, branch);
            if uf.union(index[&(j, s)], index[&(next, s_next)]) {
                merges += 1;
            }
        }
    }
    Ok(vertices - merges)
}

fn state_vertices(r: &Realization) -> (HashMap<(usize, &[u32]), usize>, usize) {
    let mut index = HashMap::new();
    for j in 0..r.n() {
        for s in r.state_alphabet(j).elements() {
            let next = index.len();
            index.insert((j, s.residues()), next);
        }
    }
    let count = index.len();
    (index, count)
}

/// Labels each state by the coset of `B^c` of the trajectories through it
/// and checks that no branch joins differently labelled states.
pub fn no_crossing(r: &Realization, bundle: &BehaviorBundle, table: &GranuleTable) -> Result<bool> {
    require_reduced(r, bundle)?;
    let layout = r.layout();
    let top = table.top_granule();
    let mut label: HashMap<(usize, &[u32]), usize> = HashMap::new();
    for t in bundle.behavior.elements() {
        let coset = top.coset_index(t).expect("trajectories lie in B");
        for j in 0..r.n() {
            if *label.entry((j, layout.state(t, j))).or_insert(coset) != coset {
                return Ok(false);
            }
        }
    }
    for j in 0..r.n() {
        let next = (j + 1) % r.n();
        for branch in r.constraint(j).elements() {
            let (s, _, s_next) = r.split_branch(j, branch);
            if label[&(j, s)] != label[&(next, s_next)] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub(crate) fn require_reduced(r: &Realization, bundle: &BehaviorBundle) -> Result<()> {
    if is_reduced(r, bundle) {
        Ok(())
    } else {
        Err(Error::RequiresReduced)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use crate::testing::random;
    use crate::trellis::{compute_behavior, is_reduced, reduce};
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn analyze(r: &Realization) -> (BehaviorBundle, GranuleTable) {
        let bundle = compute_behavior(r);
        let table = GranuleTable::build(&bundle);
        (bundle, table)
    }

    #[test]
    fn syndrome_image_examples() {
        assert!(syndrome_image(&examples::trivial(3)).is_trivial());
        let image = syndrome_image(&examples::two_state_cycle());
        let elems: Vec<_> = image.elements().iter().map(|x| x.residues().to_vec()).collect();
        assert_eq!(elems, vec![vec![0, 0], vec![1, 1]]);
        assert_eq!(syndrome_image(&examples::z4_conventional()).order(), 8);
    }

    #[test]
    fn test_examples() {
        let r = examples::z4_conventional();
        let t = controllability_test(&r, &compute_behavior(&r)).unwrap();
        assert_eq!((t.universe_order, t.extended_order, t.state_space_order), (32, 4, 8));
        assert_eq!(t.ratio(), (8, 8));
        assert!(t.controllable);

        let r = examples::two_state_cycle();
        let t = controllability_test(&r, &compute_behavior(&r)).unwrap();
        assert_eq!((t.universe_order, t.extended_order, t.state_space_order), (4, 2, 4));
        assert_eq!(t.ratio(), (2, 4));
        assert!(!t.controllable);

        let r = examples::trivial(4);
        assert!(controllability_test(&r, &compute_behavior(&r)).unwrap().controllable);
    }

    #[test]
    fn subrealization_examples() {
        let r = examples::two_state_cycle();
        let (_, table) = analyze(&r);
        let rc = controllable_subrealization(&r, &table);
        assert!((0..2).all(|j| rc.state_alphabet(j).is_trivial()));
        assert!(compute_behavior(&rc).behavior.is_trivial());

        let r = examples::z4_overdeclared_state();
        let (_, table) = analyze(&r);
        assert_eq!(controllable_subrealization(&r, &table), reduce(&r));
    }

    #[test]
    fn two_state_cycle_lemma_and_components() {
        let r = examples::two_state_cycle();
        let (bundle, table) = analyze(&r);
        let rows = lemma_quotients(&r, &bundle, &table).unwrap();
        assert!(rows
            .iter()
            .all(|row| row.state_index == 2 && row.constraint_index == 2 && row.holds));
        assert_eq!(component_count(&r, &bundle).unwrap(), 2);
        assert_eq!(table.top_granule().order(), 2);
        assert!(no_crossing(&r, &bundle, &table).unwrap());
    }

    #[test]
    fn z4_is_connected() {
        let r = examples::z4_conventional();
        let (bundle, table) = analyze(&r);
        let report = control_report(&r, &bundle, &table).unwrap();
        assert_eq!(report.component_count, 1);
        assert!(report.test.controllable);
        assert!(report.top_granule.is_trivial());
        assert_eq!(report.controllable_sub, bundle.behavior);
    }

    #[test]
    fn unreduced_input_is_refused() {
        let r = examples::z4_overdeclared_state();
        let (bundle, table) = analyze(&r);
        assert!(matches!(component_count(&r, &bundle), Err(Error::RequiresReduced)));
        assert!(matches!(
            lemma_quotients(&r, &bundle, &table),
            Err(Error::RequiresReduced)
        ));
    }

    #[test]
    fn random_reduced_realizations() {
        let mut rng = StdRng::seed_from_u64(11);
        let params = random::Params {
            max_universe: 20_000,
            ..random::Params::default()
        };
        let mut uncontrollable = 0;
        for _ in 0..150 {
            let r = random::reduced_realization(&mut rng, &params);
            let (bundle, table) = analyze(&r);
            assert!(is_reduced(&r, &bundle));
            let report = control_report(&r, &bundle, &table).unwrap();
            let top = report.top_granule.order();
            assert_eq!(report.test.controllable, top == 1);
            assert_eq!(report.component_count, top);
            assert!(lemma_quotients(&r, &bundle, &table)
                .unwrap()
                .iter()
                .all(|row| row.holds));
            assert!(no_crossing(&r, &bundle, &table).unwrap());
            let rc = controllable_subrealization(&r, &table);
            let bc = compute_behavior(&rc);
            assert_eq!(bc.behavior, report.controllable_sub);
            assert!(is_reduced(&rc, &bc));
            assert!(controllability_test(&rc, &bc).unwrap().controllable);
            uncontrollable += usize::from(!report.test.controllable);
        }
        assert!(
            uncontrollable > 0,
            "generator never produced an uncontrollable instance"
        );
    }
}
