//! Small reference realizations used throughout the tests and the CLI
//! sample documents.

use crate::abelian::{GroupElement, ProductGroup};
use crate::trellis::Realization;

fn group(moduli: &[u32]) -> ProductGroup {
    ProductGroup::new(moduli.to_vec()).expect("nonzero moduli")
}

fn gens(list: &[&[u32]]) -> Vec<GroupElement> {
    list.iter().map(|r| GroupElement::new(r.to_vec())).collect()
}

/// Length-`n` realization with every alphabet and constraint trivial.
pub fn trivial(n: usize) -> Realization {
    Realization::from_generators(vec![group(&[1]); n], vec![group(&[1]); n], vec![Vec::new(); n])
        .expect("valid realization")
}

/// Conventional length-3 realization over `Z4` whose behavior is generated
/// by `a = (1, 1, 2)`, `s = (0, 1, 2)`.
///
/// `S_0 = Z1`, `S_1 = Z4`, and `S_2` is the subgroup `{0, 2}` of `Z4`
/// relabelled as `Z2` (2 becomes 1). The constraint codes are
/// `C_0 = {(0, a, a)}`, `C_1 = <(1, 1, 1)>` and `C_2 = <(1, 2, 0)>`.
pub fn z4_conventional() -> Realization {
    Realization::from_generators(
        vec![group(&[4]); 3],
        vec![group(&[1]), group(&[4]), group(&[2])],
        vec![gens(&[&[0, 1, 1]]), gens(&[&[1, 1, 1]]), gens(&[&[1, 2, 0]])],
    )
    .expect("valid realization")
}

/// The same behavior with `S_2` declared as all of `Z4`; only `{0, 2}` is
/// ever visited, so the realization is not state-trim at index 2.
pub fn z4_overdeclared_state() -> Realization {
    Realization::from_generators(
        vec![group(&[4]); 3],
        vec![group(&[1]), group(&[4]), group(&[4])],
        vec![gens(&[&[0, 1, 1]]), gens(&[&[1, 1, 2]]), gens(&[&[2, 2, 0]])],
    )
    .expect("valid realization")
}

/// The `Z4` example with `S_1` widened to `Z4 x Z2` and `C_0` padded with
/// branches into the unused `Z2` half, which `C_1` never accepts.
pub fn z4_branch_padded() -> Realization {
    Realization::from_generators(
        vec![group(&[4]); 3],
        vec![group(&[1]), group(&[4, 2]), group(&[2])],
        vec![
            gens(&[&[0, 1, 1, 0], &[0, 0, 0, 1]]),
            gens(&[&[1, 0, 1, 1]]),
            gens(&[&[1, 2, 0]]),
        ],
    )
    .expect("valid realization")
}

/// Length-2 tail-biting realization with trivial symbols and
/// `C_j = {(s, 0, s) : s in Z2}`: two disconnected state cycles.
pub fn two_state_cycle() -> Realization {
    Realization::from_generators(vec![group(&[1]); 2], vec![group(&[2]); 2], vec![gens(&[&[1, 0, 1]]); 2])
        .expect("valid realization")
}
