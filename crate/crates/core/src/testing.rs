//! Brute-force oracles and random instance generators.
//!
//! Everything here is deliberately naive and shares no code path with the
//! algorithms it checks. Enabled for this crate's own tests and through the
//! `testing` feature for downstream test suites and benches.

pub mod oracle {
    use std::collections::BTreeMap;

    use crate::abelian::{GroupElement, ProductGroup, Subgroup};
    use crate::fragments::{all_fragments, Fragment};
    use crate::granules::{subbehavior, GranuleTable};
    use crate::trellis::{BehaviorBundle, Realization};

    /// Enumerates every configuration of `prod_j C_j` and keeps those whose
    /// shared states agree.
    pub fn brute_force_behavior(r: &Realization) -> Subgroup {
        let n = r.n();
        let codes: Vec<&[GroupElement]> = (0..n).map(|j| r.constraint(j).elements()).collect();
        let mut index = vec![0usize; n];
        let mut found = Vec::new();
        'outer: loop {
            let consistent = (0..n).all(|j| {
                let (_, _, next) = r.split_branch(j, &codes[j][index[j]]);
                let (start, _, _) = r.split_branch((j + 1) % n, &codes[(j + 1) % n][index[(j + 1) % n]]);
                next == start
            });
            if consistent {
                let mut residues = Vec::new();
                for j in 0..n {
                    residues.extend_from_slice(r.split_branch(j, &codes[j][index[j]]).1);
                }
                for j in 0..n {
                    residues.extend_from_slice(r.split_branch(j, &codes[j][index[j]]).0);
                }
                found.push(GroupElement::new(residues));
            }
            for j in (0..n).rev() {
                index[j] += 1;
                if index[j] < codes[j].len() {
                    continue 'outer;
                }
                index[j] = 0;
            }
            break;
        }
        found.sort();
        Subgroup::close(r.layout().ambient().clone(), found.iter().cloned())
            .inspect(|g| {
                assert_eq!(g.order() as usize, found.len(), "configuration set is not a group");
            })
            .expect("configurations lie in the trajectory group")
    }

    /// `B_{<F}` as the sum over every strictly smaller fragment.
    pub fn below_by_definition(bundle: &BehaviorBundle, f: &Fragment) -> Subgroup {
        all_fragments(f.n())
            .iter()
            .filter(|g| g.strictly_below(f))
            .fold(Subgroup::trivial(bundle.layout.ambient().clone()), |acc, g| {
                acc.sum(&subbehavior(bundle, g)).expect("same ambient")
            })
    }

    /// All tuples of stored granule representatives whose sum is `t`.
    ///
    /// Unique factorization means exactly one tuple for each trajectory.
    pub fn representative_tuples(table: &GranuleTable, t: &GroupElement) -> Vec<Vec<(Fragment, GroupElement)>> {
        let ambient: &ProductGroup = table.layout().ambient();
        let records = table.records();
        let mut digits = vec![0usize; records.len()];
        let mut hits = Vec::new();
        'outer: loop {
            let sum = records.iter().zip(&digits).fold(ambient.zero(), |acc, (rec, &d)| {
                ambient.add(&acc, rec.granule.representative(d))
            });
            if &sum == t {
                hits.push(
                    records
                        .iter()
                        .zip(&digits)
                        .map(|(rec, &d)| (rec.fragment, rec.granule.representative(d).clone()))
                        .collect(),
                );
            }
            for (i, rec) in records.iter().enumerate() {
                digits[i] += 1;
                if digits[i] < rec.granule.order() {
                    continue 'outer;
                }
                digits[i] = 0;
            }
            break;
        }
        hits
    }

    /// Every tuple of stored granule representatives, grouped by its sum.
    ///
    /// Enumerates all `P` tuples once; unique factorization means every key
    /// has exactly one tuple and the keys are exactly the behavior.
    pub fn factorization_map(table: &GranuleTable) -> BTreeMap<GroupElement, Vec<BTreeMap<Fragment, GroupElement>>> {
        let ambient = table.layout().ambient();
        let records = table.records();
        let mut digits = vec![0usize; records.len()];
        let mut map: BTreeMap<GroupElement, Vec<BTreeMap<Fragment, GroupElement>>> = BTreeMap::new();
        'outer: loop {
            let parts: BTreeMap<Fragment, GroupElement> = records
                .iter()
                .zip(&digits)
                .map(|(rec, &d)| (rec.fragment, rec.granule.representative(d).clone()))
                .collect();
            let sum = parts.values().fold(ambient.zero(), |acc, x| ambient.add(&acc, x));
            map.entry(sum).or_default().push(parts);
            for (i, rec) in records.iter().enumerate() {
                digits[i] += 1;
                if digits[i] < rec.granule.order() {
                    continue 'outer;
                }
                digits[i] = 0;
            }
            break;
        }
        map
    }
}

pub mod random {
    use rand::seq::IndexedRandom;
    use rand::Rng;

    use crate::abelian::{GroupElement, ProductGroup, Subgroup};
    use crate::trellis::{reduce, window_projection, Layout, Realization};

    /// Shape limits for generated realizations.
    #[derive(Clone, Debug)]
    pub struct Params {
        pub min_n: usize,
        pub max_n: usize,
        pub max_state_order: u64,
        pub max_symbol_order: u64,
        pub max_generators: usize,
        pub max_universe: u128,
    }

    impl Default for Params {
        fn default() -> Self {
            Self {
                min_n: 1,
                max_n: 6,
                max_state_order: 16,
                max_symbol_order: 4,
                max_generators: 3,
                max_universe: 1_000_000,
            }
        }
    }

    const PALETTES: &[&[u32]] = &[&[2], &[4], &[2, 4], &[3], &[2, 3, 4]];

    fn random_group(rng: &mut impl Rng, palette: &[u32], max_rank: usize, max_order: u64) -> ProductGroup {
        let rank = rng.random_range(0..=max_rank);
        let mut moduli = Vec::new();
        let mut order = 1u64;
        for _ in 0..rank {
            let m = *palette.choose(rng).unwrap();
            if order * u64::from(m) <= max_order {
                order *= u64::from(m);
                moduli.push(m);
            }
        }
        if moduli.is_empty() {
            moduli.push(1);
        }
        ProductGroup::new(moduli).unwrap()
    }

    fn random_element(rng: &mut impl Rng, g: &ProductGroup) -> GroupElement {
        GroupElement::new(g.moduli().iter().map(|&m| rng.random_range(0..m)).collect())
    }

    /// A random realization; not necessarily reduced.
    pub fn realization(rng: &mut impl Rng, params: &Params) -> Realization {
        loop {
            let n = rng.random_range(params.min_n..=params.max_n);
            let palette = *PALETTES.choose(rng).unwrap();
            let symbols: Vec<_> = (0..n)
                .map(|_| random_group(rng, palette, 2, params.max_symbol_order))
                .collect();
            let states: Vec<_> = (0..n)
                .map(|_| random_group(rng, palette, 3, params.max_state_order))
                .collect();
            let r = if rng.random_bool(0.5) {
                let generators = (0..n)
                    .map(|j| {
                        let window = ProductGroup::product([&states[j], &symbols[j], &states[(j + 1) % n]]);
                        let count = rng.random_range(1..=params.max_generators);
                        (0..count).map(|_| random_element(rng, &window)).collect()
                    })
                    .collect();
                Realization::from_generators(symbols, states, generators).unwrap()
            } else {
                // Constraints read off a few random trajectories, so the
                // cycle closes far more often than with independent codes.
                let layout = Layout::new(symbols.clone(), states.clone());
                let count = rng.random_range(1..=params.max_generators);
                let seeds: Vec<_> = (0..count).map(|_| random_element(rng, layout.ambient())).collect();
                let spanned = Subgroup::close(layout.ambient().clone(), seeds).unwrap();
                let constraints = (0..n).map(|j| window_projection(&spanned, &layout, j)).collect();
                Realization::new(symbols, states, constraints).unwrap()
            };
            if r.universe_order() <= params.max_universe {
                return r;
            }
        }
    }

    /// A random realization, reduced.
    pub fn reduced_realization(rng: &mut impl Rng, params: &Params) -> Realization {
        reduce(&realization(rng, params))
    }
}
