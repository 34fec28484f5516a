//! The analysis report: every quantity the library computes for one
//! realization, flattened into plain serializable records.

use granule_core::control::{control_report, lemma_quotients, no_crossing};
use granule_core::factorize::{
    branch_sets_are_subgroups, controller_canonical, first_state_chain, is_homomorphic, size_formulas,
    structurally_nonhomomorphic, technical_lemma_check, verify_unique_factorization, Decomposer,
};
use granule_core::granules::GranuleTable;
use granule_core::trellis::{is_branch_trim, is_state_trim};
use granule_core::{BehaviorBundle, Realization};
use serde::Serialize;

use crate::CliError;

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub length: usize,
    pub reduced_on_load: bool,
    pub trim: Trim,
    pub behavior: BehaviorSizes,
    pub controllability: Controllability,
    pub granules: Vec<GranuleEntry>,
    pub chain: Chain,
    pub factorization: Factorization,
    pub size_formulas: Vec<SizeRow>,
    pub lemma_quotients: Vec<LemmaRow>,
    pub first_state_chains: Vec<ChainRow>,
    pub technical_lemma: Vec<TechnicalRow>,
    pub canonical: Canonical,
}

#[derive(Clone, Debug, Serialize)]
pub struct Trim {
    pub state: Vec<bool>,
    pub branch: Vec<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BehaviorSizes {
    pub universe_order: u128,
    pub extended_order: u64,
    pub behavior_order: u64,
    pub code_order: u64,
    pub state_space_order: u128,
    pub invariant_factors: Vec<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Controllability {
    pub controllable: bool,
    /// `[|U| / |B̄|, |S|]`.
    pub ratio: [u128; 2],
    pub syndrome_image_order: u128,
    pub controllable_order: u64,
    pub top_granule_order: usize,
    pub top_granule_invariant_factors: Vec<u64>,
    pub component_count: usize,
    pub no_crossing: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GranuleEntry {
    pub fragment: String,
    pub node: String,
    pub level: usize,
    pub order: usize,
    pub invariant_factors: Vec<u64>,
    pub subbehavior_order: u64,
    pub below_order: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Chain {
    pub orders: Vec<u64>,
    pub factor_orders: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Factorization {
    pub p_c: u128,
    pub p: u128,
    pub controllable_order: u128,
    pub behavior_order: u128,
    pub holds_c: bool,
    pub holds: bool,
    pub decompositions_round_trip: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SizeRow {
    pub j: usize,
    pub state_order: u64,
    pub state_product: u64,
    pub constraint_order: u64,
    pub constraint_product: u64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaRow {
    pub j: usize,
    pub state_index: u64,
    pub state_factors: Vec<u64>,
    pub constraint_index: u64,
    pub constraint_factors: Vec<u64>,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainRow {
    pub j: usize,
    pub state_sizes: Vec<u64>,
    pub window_sizes: Vec<u64>,
    pub granule_orders: Vec<u64>,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TechnicalRow {
    pub j: usize,
    pub constraint_c: u64,
    pub state_c: u64,
    pub window: u64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Canonical {
    pub atoms: Vec<String>,
    pub state_counts: Vec<usize>,
    pub branch_counts: Vec<usize>,
    pub trajectories_match: bool,
    pub minimal: bool,
    pub is_homomorphic: bool,
    pub branch_sets_are_subgroups: bool,
    pub structurally_nonhomomorphic: bool,
}

impl AnalysisReport {
    /// Runs the whole pipeline on a reduced realization.
    pub fn build(r: &Realization, bundle: &BehaviorBundle, reduced_on_load: bool) -> Result<Self, CliError> {
        let n = r.n();
        let table = GranuleTable::build(bundle);
        let control = control_report(r, bundle, &table).map_err(CliError::from_core)?;
        let factor = verify_unique_factorization(r, bundle, &table).map_err(CliError::from_core)?;
        let decomposer = Decomposer::new(&table).map_err(CliError::from_core)?;
        let decompositions_round_trip = bundle
            .behavior
            .elements()
            .iter()
            .all(|t| decomposer.decompose(t).is_ok_and(|d| &d.sum(&bundle.layout) == t));
        let canonical = controller_canonical(r, bundle, &table).map_err(CliError::from_core)?;
        let state_counts = canonical.state_counts();
        Ok(Self {
            length: n,
            reduced_on_load,
            trim: Trim {
                state: is_state_trim(r, bundle),
                branch: is_branch_trim(r, bundle),
            },
            behavior: BehaviorSizes {
                universe_order: bundle.universe_order,
                extended_order: bundle.extended.order(),
                behavior_order: bundle.behavior.order(),
                code_order: bundle.code.order(),
                state_space_order: r.state_space_order(),
                invariant_factors: bundle.behavior.invariant_factors(),
            },
            controllability: Controllability {
                controllable: control.test.controllable,
                ratio: {
                    let (a, b) = control.test.ratio();
                    [a, b]
                },
                syndrome_image_order: control.test.syndrome_image_order,
                controllable_order: control.controllable_sub.order(),
                top_granule_order: control.top_granule.order(),
                top_granule_invariant_factors: control.top_granule.invariant_factors(),
                component_count: control.component_count,
                no_crossing: no_crossing(r, bundle, &table).map_err(CliError::from_core)?,
            },
            granules: table
                .records()
                .iter()
                .map(|rec| GranuleEntry {
                    fragment: rec.fragment.to_string(),
                    node: rec.fragment.node_name(),
                    level: rec.fragment.level(),
                    order: rec.granule.order(),
                    invariant_factors: rec.granule.invariant_factors(),
                    subbehavior_order: rec.sub.order(),
                    below_order: rec.below.order(),
                })
                .collect(),
            chain: Chain {
                orders: table.chain().orders(),
                factor_orders: table.chain().factor_orders(),
            },
            factorization: Factorization {
                p_c: factor.p_c,
                p: factor.p,
                controllable_order: factor.controllable_order,
                behavior_order: factor.behavior_order,
                holds_c: factor.holds_c,
                holds: factor.holds,
                decompositions_round_trip,
            },
            size_formulas: size_formulas(r, bundle, &table)
                .map_err(CliError::from_core)?
                .into_iter()
                .map(|row| SizeRow {
                    holds: row.holds(),
                    j: row.j,
                    state_order: row.state_order,
                    state_product: row.state_product,
                    constraint_order: row.constraint_order,
                    constraint_product: row.constraint_product,
                })
                .collect(),
            lemma_quotients: lemma_quotients(r, bundle, &table)
                .map_err(CliError::from_core)?
                .into_iter()
                .map(|row| LemmaRow {
                    j: row.j,
                    state_index: row.state_index,
                    state_factors: row.state_factors,
                    constraint_index: row.constraint_index,
                    constraint_factors: row.constraint_factors,
                    holds: row.holds,
                })
                .collect(),
            first_state_chains: (0..n)
                .map(|j| {
                    first_state_chain(r, bundle, &table, j).map(|c| ChainRow {
                        holds: c.holds(),
                        j: c.j,
                        state_sizes: c.state_sizes,
                        window_sizes: c.window_sizes,
                        granule_orders: c.granule_orders,
                    })
                })
                .collect::<Result<_, _>>()
                .map_err(CliError::from_core)?,
            technical_lemma: technical_lemma_check(r, bundle, &table)
                .map_err(CliError::from_core)?
                .into_iter()
                .map(|row| TechnicalRow {
                    holds: row.holds(),
                    j: row.j,
                    constraint_c: row.constraint_c,
                    state_c: row.state_c,
                    window: row.window,
                })
                .collect(),
            canonical: Canonical {
                atoms: canonical.atoms.iter().map(|a| a.fragment.to_string()).collect(),
                trajectories_match: canonical.trajectories() == bundle.behavior.elements(),
                minimal: (0..n).all(|j| state_counts[j] as u64 == r.state_alphabet(j).order()),
                branch_counts: canonical.branch_counts(),
                state_counts,
                is_homomorphic: is_homomorphic(&canonical),
                branch_sets_are_subgroups: branch_sets_are_subgroups(&canonical),
                structurally_nonhomomorphic: structurally_nonhomomorphic(&table),
            },
        })
    }

    /// Named pass/fail checks of every theorem the report covers.
    pub fn checks(&self) -> Vec<(&'static str, bool)> {
        let c = &self.controllability;
        let top_trivial = c.top_granule_order == 1;
        vec![
            (
                "controllability test agrees with the top granule",
                c.controllable == top_trivial,
            ),
            (
                "component count equals the top granule order",
                c.component_count == c.top_granule_order,
            ),
            (
                "no branch crosses between cosets of the controllable subbehavior",
                c.no_crossing,
            ),
            (
                "unique factorization of the controllable subbehavior",
                self.factorization.holds_c,
            ),
            ("unique factorization of the behavior", self.factorization.holds),
            (
                "decomposition round-trips every trajectory",
                self.factorization.decompositions_round_trip,
            ),
            (
                "state and constraint quotients match the top granule",
                self.lemma_quotients.iter().all(|r| r.holds),
            ),
            (
                "first-state chain products",
                self.first_state_chains.iter().all(|r| r.holds),
            ),
            (
                "state and constraint size formulas",
                self.size_formulas.iter().all(|r| r.holds),
            ),
            (
                "controllable constraint sizes",
                self.technical_lemma.iter().all(|r| r.holds),
            ),
            (
                "canonical realization generates the behavior",
                self.canonical.trajectories_match,
            ),
            ("canonical realization has minimal state spaces", self.canonical.minimal),
        ]
    }
}
