use granule_core::control::{component_count, controllability_test};
use granule_core::factorize::{decompose, granule_products, verify_unique_factorization};
use granule_core::granules::GranuleTable;
use granule_core::trellis::{is_reduced, window_projection};
use granule_core::{compute_behavior, examples, reduce, GroupElement, Layout, ProductGroup, Realization, Subgroup};
use proptest::prelude::*;

/// Realizations whose constraints are the window projections of a group
/// spanned by a few random trajectories.
fn spanned_realization() -> impl Strategy<Value = Realization> {
    let moduli = prop::sample::select(vec![1u32, 2, 3, 4]);
    (2usize..=4)
        .prop_flat_map(move |n| {
            (
                prop::collection::vec(moduli.clone(), n),
                prop::collection::vec(moduli.clone(), n),
            )
        })
        .prop_flat_map(|(symbols, states)| {
            let width = symbols.len() + states.len();
            let seeds = prop::collection::vec(prop::collection::vec(0u32..12, width), 1..=3);
            (Just(symbols), Just(states), seeds)
        })
        .prop_map(|(symbols, states, seeds)| {
            let group = |m: &u32| ProductGroup::new(vec![*m]).unwrap();
            let symbols: Vec<_> = symbols.iter().map(group).collect();
            let states: Vec<_> = states.iter().map(group).collect();
            let layout = Layout::new(symbols.clone(), states.clone());
            let moduli = layout.ambient().moduli().to_vec();
            let seeds = seeds
                .into_iter()
                .map(|s| GroupElement::new(s.iter().zip(&moduli).map(|(x, m)| x % m).collect()));
            let spanned = Subgroup::close(layout.ambient().clone(), seeds).unwrap();
            let constraints = (0..layout.n()).map(|j| window_projection(&spanned, &layout, j)).collect();
            Realization::new(symbols, states, constraints).unwrap()
        })
}

/// Every point of the ambient group that satisfies every constraint.
fn enumerated_behavior(r: &Realization) -> Vec<GroupElement> {
    let layout = r.layout();
    let mut out: Vec<_> = layout
        .ambient()
        .elements()
        .filter(|t| {
            (0..r.n()).all(|j| {
                let window: Vec<u32> = layout.window_coords(j).iter().map(|&c| t.residues()[c]).collect();
                r.constraint(j).contains_element(&GroupElement::new(window))
            })
        })
        .collect();
    out.sort();
    out
}

#[test]
fn z4_example_end_to_end() {
    let r = examples::z4_conventional();
    let bundle = compute_behavior(&r);
    assert!(is_reduced(&r, &bundle));
    assert_eq!(bundle.behavior.order(), 4);
    let table = GranuleTable::build(&bundle);
    assert_eq!(granule_products(&table), (4, 4));
    assert!(controllability_test(&r, &bundle).unwrap().controllable);
    assert_eq!(component_count(&r, &bundle).unwrap(), 1);
    for t in bundle.behavior.elements() {
        let d = decompose(&table, t).unwrap();
        assert_eq!(&d.sum(table.layout()), t);
    }
}

#[test]
fn overdeclared_example_reduces_to_the_conventional_one() {
    let reduced = reduce(&examples::z4_overdeclared_state());
    let bundle = compute_behavior(&reduced);
    assert!(is_reduced(&reduced, &bundle));
    assert_eq!(reduced.state_space_order(), 8);
    assert_eq!(bundle.behavior.order(), 4);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn behavior_matches_enumeration(r in spanned_realization()) {
        let bundle = compute_behavior(&r);
        prop_assert_eq!(bundle.behavior.elements().to_vec(), enumerated_behavior(&r));
    }

    #[test]
    fn reduction_keeps_the_behavior(r in spanned_realization()) {
        let reduced = reduce(&r);
        let before = compute_behavior(&r);
        let after = compute_behavior(&reduced);
        prop_assert!(is_reduced(&reduced, &after));
        prop_assert_eq!(before.behavior.elements(), after.behavior.elements());
        prop_assert_eq!(&reduce(&reduced), &reduced);
    }

    #[test]
    fn factorization_and_decomposition(r in spanned_realization()) {
        let r = reduce(&r);
        let bundle = compute_behavior(&r);
        let table = GranuleTable::build(&bundle);
        let report = verify_unique_factorization(&r, &bundle, &table).unwrap();
        prop_assert!(report.holds && report.holds_c);
        prop_assert_eq!(report.p, u128::from(bundle.behavior.order()));
        let test = controllability_test(&r, &bundle).unwrap();
        prop_assert_eq!(test.controllable, table.top_granule().is_trivial());
        if test.controllable {
            prop_assert_eq!(component_count(&r, &bundle).unwrap(), 1);
        }
        for t in bundle.behavior.elements() {
            prop_assert_eq!(&decompose(&table, t).unwrap().sum(table.layout()), t);
        }
    }
}
