//! Finite abelian groups presented as products of cyclic groups.
//!
//! Subgroups are materialized as explicit, lexicographically sorted element
//! lists. That is the right trade-off for the desk-scale groups this crate
//! works with (ambient orders up to roughly a million) and keeps every
//! computation exact.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};

/// A finite abelian group `Z_{m_0} x Z_{m_1} x ...`.
///
/// A modulus of 1 is a trivial coordinate; the empty product is the trivial
/// group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductGroup {
    moduli: Vec<u32>,
}

/// A residue vector. Its meaning depends on the ambient [`ProductGroup`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement(Vec<u32>);

impl GroupElement {
    pub fn new(residues: Vec<u32>) -> Self {
        Self(residues)
    }

    pub fn residues(&self) -> &[u32] {
        &self.0
    }

    pub fn into_residues(self) -> Vec<u32> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&r| r == 0)
    }
}

impl From<Vec<u32>> for GroupElement {
    fn from(residues: Vec<u32>) -> Self {
        Self(residues)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, r) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

impl ProductGroup {
    pub fn new(moduli: Vec<u32>) -> Result<Self> {
        if let Some(i) = moduli.iter().position(|&m| m == 0) {
            return Err(Error::InvalidGroup(format!("modulus {i} is zero")));
        }
        Ok(Self { moduli })
    }

    pub fn trivial() -> Self {
        Self { moduli: Vec::new() }
    }

    pub fn cyclic(m: u32) -> Result<Self> {
        Self::new(vec![m])
    }

    /// Direct product, coordinates concatenated in argument order.
    pub fn product<'a>(factors: impl IntoIterator<Item = &'a ProductGroup>) -> Self {
        Self {
            moduli: factors.into_iter().flat_map(|g| g.moduli.iter().copied()).collect(),
        }
    }

    pub fn moduli(&self) -> &[u32] {
        &self.moduli
    }

    /// Number of cyclic coordinates.
    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn order(&self) -> u64 {
        self.moduli.iter().map(|&m| u64::from(m)).product()
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(vec![0; self.moduli.len()])
    }

    pub fn check(&self, x: &GroupElement) -> Result<()> {
        if x.len() != self.rank() {
            return Err(Error::MalformedElement(format!(
                "{x} has {} coordinates, expected {}",
                x.len(),
                self.rank()
            )));
        }
        for (i, (&r, &m)) in x.0.iter().zip(&self.moduli).enumerate() {
            if r >= m {
                return Err(Error::MalformedElement(format!(
                    "{x}: residue {r} at coordinate {i} is not below modulus {m}"
                )));
            }
        }
        Ok(())
    }

    pub fn element(&self, residues: Vec<u32>) -> Result<GroupElement> {
        let x = GroupElement(residues);
        self.check(&x)?;
        Ok(x)
    }

    pub fn add(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        GroupElement(
            x.0.iter()
                .zip(&y.0)
                .zip(&self.moduli)
                .map(|((&a, &b), &m)| ((u64::from(a) + u64::from(b)) % u64::from(m)) as u32)
                .collect(),
        )
    }

    pub fn neg(&self, x: &GroupElement) -> GroupElement {
        GroupElement(x.0.iter().zip(&self.moduli).map(|(&a, &m)| (m - a) % m).collect())
    }

    pub fn sub(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        self.add(x, &self.neg(y))
    }

    pub fn scale(&self, k: u64, x: &GroupElement) -> GroupElement {
        GroupElement(
            x.0.iter()
                .zip(&self.moduli)
                .map(|(&a, &m)| ((u64::from(a) * (k % u64::from(m))) % u64::from(m)) as u32)
                .collect(),
        )
    }

    /// Order of `x` as an element of this group.
    pub fn element_order(&self, x: &GroupElement) -> u64 {
        x.0.iter().zip(&self.moduli).fold(1, |acc, (&a, &m)| {
            let m = u64::from(m);
            lcm(acc, m / gcd(u64::from(a), m))
        })
    }

    /// The group on the selected coordinates, in the order given.
    pub fn restrict(&self, coords: &[usize]) -> Result<ProductGroup> {
        let mut moduli = Vec::with_capacity(coords.len());
        for &c in coords {
            moduli.push(*self.moduli.get(c).ok_or(Error::CoordinateOutOfRange {
                index: c,
                len: self.rank(),
            })?);
        }
        Ok(ProductGroup { moduli })
    }

    /// Every element, in lexicographic order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        let total = self.order();
        let mut current = self.zero();
        (0..total).map(move |i| {
            if i > 0 {
                for (r, &m) in current.0.iter_mut().zip(&self.moduli).rev() {
                    *r += 1;
                    if *r < m {
                        break;
                    }
                    *r = 0;
                }
            }
            current.clone()
        })
    }
}

/// An explicitly materialized subgroup of a [`ProductGroup`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    ambient: ProductGroup,
    elements: Vec<GroupElement>,
}

impl Subgroup {
    pub fn trivial(ambient: ProductGroup) -> Self {
        let zero = ambient.zero();
        Self {
            ambient,
            elements: vec![zero],
        }
    }

    pub fn full(ambient: ProductGroup) -> Self {
        let elements = ambient.elements().collect();
        Self { ambient, elements }
    }

    /// The smallest subgroup of `ambient` containing every generator.
    pub fn close(ambient: ProductGroup, generators: impl IntoIterator<Item = GroupElement>) -> Result<Self> {
        let mut acc = Saturation::new(&ambient);
        for g in generators {
            ambient.check(&g)?;
            acc.absorb(&ambient, &g);
        }
        Ok(acc.finish(ambient))
    }

    /// Wraps an element list already known to be a sorted, duplicate-free
    /// subgroup.
    pub(crate) fn from_sorted_unchecked(ambient: ProductGroup, elements: Vec<GroupElement>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(elements.first().is_some_and(GroupElement::is_zero));
        Self { ambient, elements }
    }

    fn from_unsorted(ambient: ProductGroup, mut elements: Vec<GroupElement>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        Self::from_sorted_unchecked(ambient, elements)
    }

    pub fn ambient(&self) -> &ProductGroup {
        &self.ambient
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn contains_element(&self, x: &GroupElement) -> bool {
        self.elements.binary_search(x).is_ok()
    }

    fn same_ambient(&self, other: &Subgroup) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch {
                left: self.ambient.moduli.clone(),
                right: other.ambient.moduli.clone(),
            });
        }
        Ok(())
    }

    /// True iff `h` is a subset of `self`.
    pub fn contains(&self, h: &Subgroup) -> Result<bool> {
        self.same_ambient(h)?;
        Ok(h.order() <= self.order() && h.elements.iter().all(|x| self.contains_element(x)))
    }

    /// `self + other = {x + y}`.
    pub fn sum(&self, other: &Subgroup) -> Result<Subgroup> {
        self.same_ambient(other)?;
        let (big, small) = if self.order() >= other.order() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc = Saturation::seeded(big);
        for y in &small.elements {
            acc.absorb(&self.ambient, y);
        }
        Ok(acc.finish(self.ambient.clone()))
    }

    /// Image under the coordinate map `x -> (x[c] for c in coords)`.
    ///
    /// Coordinates may repeat; the image is a subgroup of the restricted
    /// ambient either way.
    pub fn project(&self, coords: &[usize]) -> Result<Subgroup> {
        let target = self.ambient.restrict(coords)?;
        let image = self
            .elements
            .iter()
            .map(|x| GroupElement(coords.iter().map(|&c| x.0[c]).collect()))
            .collect();
        Ok(Subgroup::from_unsorted(target, image))
    }

    /// Projection onto `coords` of the elements that vanish on every other
    /// coordinate.
    pub fn cross_section(&self, coords: &[usize]) -> Result<Subgroup> {
        let keep = self.coordinate_mask(coords)?;
        let target = self.ambient.restrict(coords)?;
        let image = self
            .elements
            .iter()
            .filter(|x| x.0.iter().zip(&keep).all(|(&r, &k)| k || r == 0))
            .map(|x| GroupElement(coords.iter().map(|&c| x.0[c]).collect()))
            .collect();
        Ok(Subgroup::from_unsorted(target, image))
    }

    /// Elements vanishing on every coordinate in `coords`, in the same ambient.
    pub fn vanishing_on(&self, coords: &[usize]) -> Result<Subgroup> {
        self.coordinate_mask(coords)?;
        let elements = self
            .elements
            .iter()
            .filter(|x| coords.iter().all(|&c| x.0[c] == 0))
            .cloned()
            .collect();
        Ok(Subgroup::from_sorted_unchecked(self.ambient.clone(), elements))
    }

    fn coordinate_mask(&self, coords: &[usize]) -> Result<Vec<bool>> {
        let mut mask = vec![false; self.ambient.rank()];
        for &c in coords {
            if c >= mask.len() {
                return Err(Error::CoordinateOutOfRange {
                    index: c,
                    len: mask.len(),
                });
            }
            if mask[c] {
                return Err(Error::MalformedElement(format!("coordinate {c} listed twice")));
            }
            mask[c] = true;
        }
        Ok(mask)
    }

    /// Partition into cosets of `normal`, each represented by its
    /// lexicographically smallest element.
    pub fn quotient(&self, normal: &Subgroup) -> Result<QuotientView> {
        if !self.contains(normal)? {
            return Err(Error::NotASubgroupOf(format!(
                "subgroup of order {} is not contained in subgroup of order {}",
                normal.order(),
                self.order()
            )));
        }
        let mut coset_of: HashMap<GroupElement, usize> = HashMap::with_capacity(self.elements.len());
        let mut cosets = Vec::with_capacity(self.elements.len() / normal.elements.len());
        for x in &self.elements {
            if coset_of.contains_key(x) {
                continue;
            }
            let index = cosets.len();
            let mut coset: Vec<GroupElement> = normal.elements.iter().map(|h| self.ambient.add(x, h)).collect();
            coset.sort_unstable();
            for y in &coset {
                coset_of.insert(y.clone(), index);
            }
            cosets.push(coset);
        }
        Ok(QuotientView {
            group: self.clone(),
            normal: normal.clone(),
            cosets,
            coset_of,
        })
    }

    /// Invariant factors `d_1 | d_2 | ... | d_r` of this group; empty when
    /// trivial.
    pub fn invariant_factors(&self) -> Vec<u64> {
        invariant_factors_from_orders(
            self.order(),
            self.elements.iter().map(|x| self.ambient.element_order(x)),
        )
    }
}

/// Incremental subgroup closure: absorbing `g` multiplies the current set by
/// the cyclic group `<g>` modulo what is already present.
struct Saturation {
    members: HashSet<GroupElement>,
    list: Vec<GroupElement>,
}

impl Saturation {
    fn new(ambient: &ProductGroup) -> Self {
        let zero = ambient.zero();
        Self {
            members: HashSet::from([zero.clone()]),
            list: vec![zero],
        }
    }

    fn seeded(start: &Subgroup) -> Self {
        Self {
            members: start.elements.iter().cloned().collect(),
            list: start.elements.clone(),
        }
    }

    fn absorb(&mut self, ambient: &ProductGroup, g: &GroupElement) {
        if self.members.contains(g) {
            return;
        }
        let base = self.list.clone();
        let mut multiple = g.clone();
        while !self.members.contains(&multiple) {
            for x in &base {
                let y = ambient.add(x, &multiple);
                if self.members.insert(y.clone()) {
                    self.list.push(y);
                }
            }
            multiple = ambient.add(&multiple, g);
        }
    }

    fn finish(self, ambient: ProductGroup) -> Subgroup {
        Subgroup::from_unsorted(ambient, self.list)
    }
}

/// The cosets of a subgroup `H` in a group `G`, as a group in its own right.
///
/// Coset 0 is always `H` itself, represented by zero.
#[derive(Clone, Debug)]
pub struct QuotientView {
    group: Subgroup,
    normal: Subgroup,
    cosets: Vec<Vec<GroupElement>>,
    coset_of: HashMap<GroupElement, usize>,
}

impl QuotientView {
    pub fn group(&self) -> &Subgroup {
        &self.group
    }

    pub fn normal_sub(&self) -> &Subgroup {
        &self.normal
    }

    pub fn cosets(&self) -> &[Vec<GroupElement>] {
        &self.cosets
    }

    pub fn order(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.cosets.len() == 1
    }

    pub fn representative(&self, coset: usize) -> &GroupElement {
        &self.cosets[coset][0]
    }

    pub fn representatives(&self) -> impl Iterator<Item = &GroupElement> {
        self.cosets.iter().map(|c| &c[0])
    }

    /// Index of the coset containing `x`, if `x` lies in the group.
    pub fn coset_index(&self, x: &GroupElement) -> Option<usize> {
        self.coset_of.get(x).copied()
    }

    /// Group law on coset indices.
    pub fn add(&self, a: usize, b: usize) -> usize {
        let sum = self.group.ambient.add(self.representative(a), self.representative(b));
        self.coset_of[&sum]
    }

    pub fn coset_order(&self, a: usize) -> u64 {
        let mut k = 1;
        let mut current = a;
        while current != 0 {
            current = self.add(current, a);
            k += 1;
        }
        k
    }

    pub fn invariant_factors(&self) -> Vec<u64> {
        invariant_factors_from_orders(self.order() as u64, (0..self.order()).map(|i| self.coset_order(i)))
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Prime factorization by trial division, ascending.
pub(crate) fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Recovers the invariant factors of a finite abelian group from the orders
/// of all of its elements.
///
/// For each prime `p`, the number of elements killed by `p^k` is
/// `p^(sum_i min(lambda_i, k))`, where `lambda` is the partition of exponents
/// of the `p`-primary part; successive differences of the logarithms give the
/// conjugate partition.
pub fn invariant_factors_from_orders(group_order: u64, orders: impl IntoIterator<Item = u64>) -> Vec<u64> {
    let mut census: HashMap<u64, u64> = HashMap::new();
    for o in orders {
        *census.entry(o).or_default() += 1;
    }
    let mut partitions: Vec<(u64, Vec<u32>)> = Vec::new();
    for (p, e) in factorize(group_order) {
        let mut killed_log = vec![0u32; e as usize + 1];
        let mut pk = 1u64;
        for slot in killed_log.iter_mut().skip(1) {
            pk *= p;
            let count: u64 = census
                .iter()
                .filter(|(&o, _)| pk.is_multiple_of(o))
                .map(|(_, &c)| c)
                .sum();
            *slot = exact_log(count, p);
        }
        // parts_at_least[k] = #{i : lambda_i >= k}
        let parts_at_least: Vec<u32> = (1..=e as usize).map(|k| killed_log[k] - killed_log[k - 1]).collect();
        let rank = parts_at_least.first().copied().unwrap_or(0);
        let lambda: Vec<u32> = (1..=rank)
            .map(|i| parts_at_least.iter().filter(|&&r| r >= i).count() as u32)
            .collect();
        partitions.push((p, lambda));
    }
    let rank = partitions.iter().map(|(_, l)| l.len()).max().unwrap_or(0);
    // lambda is descending, so index 0 feeds the largest factor.
    let mut factors: Vec<u64> = (0..rank)
        .map(|i| {
            partitions
                .iter()
                .map(|(p, l)| p.pow(l.get(i).copied().unwrap_or(0)))
                .product()
        })
        .collect();
    factors.reverse();
    factors
}

fn exact_log(mut n: u64, p: u64) -> u32 {
    let mut e = 0;
    while n > 1 {
        assert!(n.is_multiple_of(p), "element census is not a prime power");
        n /= p;
        e += 1;
    }
    e
}

/// Elementary divisors (prime powers, ascending) of a group with the given
/// invariant factors.
pub fn elementary_divisors(invariant_factors: &[u64]) -> Vec<u64> {
    let mut out: Vec<u64> = invariant_factors
        .iter()
        .flat_map(|&d| factorize(d).into_iter().map(|(p, e)| p.pow(e)))
        .collect();
    out.sort_unstable();
    out
}
