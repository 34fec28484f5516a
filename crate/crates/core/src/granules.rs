//! Subbehaviors, controller granules and the chain of `l`-controllable
//! behaviors.

use std::collections::HashMap;

use crate::abelian::{QuotientView, Subgroup};
use crate::error::{Error, Result};
use crate::fragments::{all_fragments, Fragment};
use crate::trellis::{BehaviorBundle, Layout, Realization};

/// Trajectories that vanish on and outside the boundary of `f`: every state
/// not internal to `f` is zero, and every symbol outside `f` is zero.
pub fn subbehavior(bundle: &BehaviorBundle, f: &Fragment) -> Subgroup {
    let layout = &bundle.layout;
    assert_eq!(f.n(), layout.n(), "fragment length differs from realization length");
    if f.is_full() {
        return bundle.behavior.clone();
    }
    let vanishing: Vec<usize> = (0..layout.n())
        .filter(|&j| !f.has_vertex(j))
        .flat_map(|j| layout.symbol_coords(j))
        .chain(
            (0..layout.n())
                .filter(|&j| !f.has_edge(j))
                .flat_map(|j| layout.state_coords(j)),
        )
        .collect();
    bundle
        .behavior
        .vanishing_on(&vanishing)
        .expect("layout coordinates are distinct and in range")
}

/// `B_{<F}`: the sum of the subbehaviors of the fragments `f` covers.
pub fn below(bundle: &BehaviorBundle, f: &Fragment) -> Result<Subgroup> {
    if f.level() == 0 && !f.is_full() {
        return Err(Error::UndefinedBelow);
    }
    Ok(sum_all(bundle, f.lower_covers().iter().map(|g| subbehavior(bundle, g))))
}

fn sum_all(bundle: &BehaviorBundle, parts: impl IntoIterator<Item = Subgroup>) -> Subgroup {
    parts
        .into_iter()
        .fold(Subgroup::trivial(bundle.layout.ambient().clone()), |acc, g| {
            acc.sum(&g).expect("subbehaviors share the trajectory group")
        })
}

/// The granule `B_F / B_{<F}`; for a level-0 fragment, `B_F` itself.
pub fn granule(bundle: &BehaviorBundle, f: &Fragment) -> QuotientView {
    let sub = subbehavior(bundle, f);
    let lower = below(bundle, f).unwrap_or_else(|_| Subgroup::trivial(bundle.layout.ambient().clone()));
    sub.quotient(&lower).expect("B_<F is contained in B_F")
}

/// Symbols `a` with `(0, a, 0)` in `C_j`.
pub fn nondynamical_alphabet(r: &Realization, j: usize) -> Subgroup {
    let layout = r.layout();
    let s_len = layout.state_group(j).rank();
    let a_len = layout.symbol_group(j).rank();
    r.constraint(j)
        .cross_section(&(s_len..s_len + a_len).collect::<Vec<_>>())
        .expect("symbol coordinates are in range")
}

/// The chain `B_0 <= B_1 <= ... <= B_n = B` and its factor groups.
#[derive(Clone, Debug)]
pub struct EllChain {
    /// `levels[l] = B_l`.
    pub levels: Vec<Subgroup>,
    /// `factors[0] = B_0`, `factors[l] = B_l / B_{l-1}`.
    pub factors: Vec<QuotientView>,
}

impl EllChain {
    fn from_subbehaviors(bundle: &BehaviorBundle, sub: impl Fn(&Fragment) -> Subgroup) -> Self {
        let n = bundle.layout.n();
        let mut levels: Vec<Subgroup> = (0..n)
            .map(|level| sum_all(bundle, (0..n).map(|j| sub(&Fragment::proper(n, j, level)))))
            .collect();
        levels.push(bundle.behavior.clone());
        let zero = Subgroup::trivial(bundle.layout.ambient().clone());
        let factors = levels
            .iter()
            .enumerate()
            .map(|(l, g)| {
                let prev = if l == 0 { &zero } else { &levels[l - 1] };
                g.quotient(prev).expect("the chain is nested")
            })
            .collect();
        Self { levels, factors }
    }

    pub fn orders(&self) -> Vec<u64> {
        self.levels.iter().map(Subgroup::order).collect()
    }

    pub fn factor_orders(&self) -> Vec<usize> {
        self.factors.iter().map(QuotientView::order).collect()
    }
}

/// `B_l = sum_j B^{[j, j+l]}` for `l < n`, and `B_n = B`.
pub fn ell_chain(bundle: &BehaviorBundle) -> EllChain {
    EllChain::from_subbehaviors(bundle, |f| subbehavior(bundle, f))
}

/// Everything known about one fragment.
#[derive(Clone, Debug)]
pub struct GranuleRecord {
    pub fragment: Fragment,
    /// `B_F`.
    pub sub: Subgroup,
    /// `B_{<F}`; trivial at level 0.
    pub below: Subgroup,
    /// `B_F / B_{<F}` with lexicographically minimal representatives.
    pub granule: QuotientView,
}

/// Granule records for all `n^2 + 1` fragments plus the `l`-controllable
/// chain, computed once per behavior.
#[derive(Clone, Debug)]
pub struct GranuleTable {
    layout: Layout,
    behavior: Subgroup,
    records: Vec<GranuleRecord>,
    index: HashMap<Fragment, usize>,
    chain: EllChain,
}

impl GranuleTable {
    pub fn build(bundle: &BehaviorBundle) -> Self {
        let n = bundle.layout.n();
        let fragments = all_fragments(n);
        let subs: Vec<Subgroup> = fragments.iter().map(|f| subbehavior(bundle, f)).collect();
        let index: HashMap<Fragment, usize> = fragments.iter().enumerate().map(|(i, f)| (*f, i)).collect();
        let zero = Subgroup::trivial(bundle.layout.ambient().clone());
        let records = fragments
            .iter()
            .zip(&subs)
            .map(|(f, sub)| {
                let below = f
                    .lower_covers()
                    .iter()
                    .fold(zero.clone(), |acc, g| acc.sum(&subs[index[g]]).expect("same ambient"));
                let granule = sub.quotient(&below).expect("B_<F is contained in B_F");
                GranuleRecord {
                    fragment: *f,
                    sub: sub.clone(),
                    below,
                    granule,
                }
            })
            .collect();
        let chain = EllChain::from_subbehaviors(bundle, |f| subs[index[f]].clone());
        Self {
            layout: bundle.layout.clone(),
            behavior: bundle.behavior.clone(),
            records,
            index,
            chain,
        }
    }

    pub fn n(&self) -> usize {
        self.layout.n()
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn behavior(&self) -> &Subgroup {
        &self.behavior
    }

    /// Records in `(level, start)` order, the full fragment last.
    pub fn records(&self) -> &[GranuleRecord] {
        &self.records
    }

    pub fn record(&self, f: &Fragment) -> &GranuleRecord {
        &self.records[self.index[f]]
    }

    pub fn granule_order(&self, f: &Fragment) -> u64 {
        self.record(f).granule.order() as u64
    }

    /// `Gamma_R = B / B^c`.
    pub fn top_granule(&self) -> &QuotientView {
        &self.record(&Fragment::full(self.n())).granule
    }

    /// `B^c = B_{n-1}`.
    pub fn controllable_subbehavior(&self) -> &Subgroup {
        &self.chain.levels[self.n() - 1]
    }

    pub fn chain(&self) -> &EllChain {
        &self.chain
    }

    /// The proper fragment `[j, j + level]`.
    pub fn proper(&self, j: usize, level: usize) -> &GranuleRecord {
        let n = self.n();
        self.record(&Fragment::proper(n, j % n, level))
    }

    /// Fragments whose granule is nontrivial.
    pub fn nontrivial(&self) -> impl Iterator<Item = &GranuleRecord> {
        self.records.iter().filter(|r| !r.granule.is_trivial())
    }
}
