//! The symmetry group of a deck: an attribute permutation together with
//! one value bijection per attribute.
//!
//! Elements are ranked in a fixed order. Attribute permutations vary
//! slowest, in lexicographic order of their image vectors; for a fixed
//! attribute permutation the value maps follow lexicographically, attribute
//! 0's map being the most significant. Every scan in this crate visits
//! elements by rank, so "first" always means "least rank".

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::deck::{Caps, Card, DeckSpec, Hand};
use crate::error::{Error, Result};

/// Group elements acting on a deck.
///
/// `attr_perm[a]` is the attribute that `a` is sent to, and `value_maps[a]`
/// is the bijection applied to the values of source attribute `a`. Acting on
/// a card `x` gives the card whose digit at `attr_perm[a]` is
/// `value_maps[a][x[a]]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    attr_perm: Vec<u8>,
    value_maps: Vec<Vec<u8>>,
}

fn is_permutation(v: &[u8]) -> bool {
    let mut seen = vec![false; v.len()];
    v.iter().all(|&x| {
        let fresh = (x as usize) < seen.len() && !seen[x as usize];
        if fresh {
            seen[x as usize] = true;
        }
        fresh
    })
}

fn invert(v: &[u8]) -> Vec<u8> {
    let mut inv = vec![0u8; v.len()];
    for (i, &x) in v.iter().enumerate() {
        inv[x as usize] = i as u8;
    }
    inv
}

impl GroupElement {
    pub fn new(spec: &DeckSpec, attr_perm: Vec<u8>, value_maps: Vec<Vec<u8>>) -> Result<Self> {
        let (k, d) = (spec.k() as usize, spec.d() as usize);
        if attr_perm.len() != d || !is_permutation(&attr_perm) {
            return Err(Error::InvalidElement(format!(
                "attribute map {attr_perm:?} is not a permutation of {d} attributes"
            )));
        }
        if value_maps.len() != d {
            return Err(Error::InvalidElement(format!(
                "expected {d} value maps, got {}",
                value_maps.len()
            )));
        }
        if let Some((a, m)) = value_maps
            .iter()
            .enumerate()
            .find(|(_, m)| m.len() != k || !is_permutation(m))
        {
            return Err(Error::InvalidElement(format!(
                "value map {m:?} of attribute {a} is not a permutation of {k} values"
            )));
        }
        Ok(GroupElement { attr_perm, value_maps })
    }

    pub fn identity(spec: &DeckSpec) -> Self {
        let (k, d) = (spec.k() as u8, spec.d() as u8);
        GroupElement {
            attr_perm: (0..d).collect(),
            value_maps: vec![(0..k).collect(); d as usize],
        }
    }

    pub fn attr_perm(&self) -> &[u8] {
        &self.attr_perm
    }

    pub fn value_maps(&self) -> &[Vec<u8>] {
        &self.value_maps
    }

    pub fn spec(&self) -> DeckSpec {
        DeckSpec::new(self.value_maps[0].len() as u32, self.attr_perm.len() as u32)
            .expect("element dimensions form a valid deck")
    }

    fn check_compatible(&self, other: &GroupElement) -> Result<()> {
        if self.attr_perm.len() != other.attr_perm.len()
            || self.value_maps[0].len() != other.value_maps[0].len()
        {
            return Err(Error::SpecMismatch);
        }
        Ok(())
    }

    /// `self ∘ other`: act by `other` first, then by `self`.
    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement> {
        self.check_compatible(other)?;
        let attr_perm = other.attr_perm.iter().map(|&b| self.attr_perm[b as usize]).collect();
        let value_maps = other
            .attr_perm
            .iter()
            .zip(&other.value_maps)
            .map(|(&b, inner)| {
                let outer = &self.value_maps[b as usize];
                inner.iter().map(|&v| outer[v as usize]).collect()
            })
            .collect();
        Ok(GroupElement { attr_perm, value_maps })
    }

    pub fn inverse(&self) -> GroupElement {
        let attr_perm = invert(&self.attr_perm);
        let mut value_maps = vec![Vec::new(); self.value_maps.len()];
        for (a, m) in self.value_maps.iter().enumerate() {
            value_maps[self.attr_perm[a] as usize] = invert(m);
        }
        GroupElement { attr_perm, value_maps }
    }

    pub fn is_identity(&self) -> bool {
        self.attr_perm.iter().enumerate().all(|(i, &p)| i == p as usize)
            && self
                .value_maps
                .iter()
                .all(|m| m.iter().enumerate().all(|(i, &v)| i == v as usize))
    }

    pub fn apply(&self, card: &Card) -> Result<Card> {
        let d = self.attr_perm.len();
        let k = self.value_maps[0].len();
        if card.len() != d {
            return Err(Error::SpecMismatch);
        }
        let mut out = vec![0u8; d];
        for (a, &v) in card.digits().iter().enumerate() {
            if v as usize >= k {
                return Err(Error::ValueOutOfRange { value: v as u32, k: k as u32 });
            }
            out[self.attr_perm[a] as usize] = self.value_maps[a][v as usize];
        }
        Ok(Card::new(out))
    }

    pub(crate) fn apply_index(&self, spec: &DeckSpec, index: u32) -> u32 {
        let digits = spec.digits_of(index);
        let mut out = vec![0u8; digits.len()];
        for (a, &v) in digits.iter().enumerate() {
            out[self.attr_perm[a] as usize] = self.value_maps[a][v as usize];
        }
        spec.index_of_digits(&out)
    }

    pub fn apply_to_hand(&self, hand: &Hand) -> Result<Hand> {
        let spec = hand.spec();
        if spec != self.spec() {
            return Err(Error::SpecMismatch);
        }
        let mut image: Vec<u32> = hand.indices().map(|i| self.apply_index(&spec, i)).collect();
        image.sort_unstable();
        Ok(Hand::from_sorted_unchecked(spec, image))
    }

    /// The permutation of card indices induced on the whole deck.
    pub fn deck_permutation(&self, spec: &DeckSpec) -> Vec<u32> {
        (0..spec.size()).map(|i| self.apply_index(spec, i)).collect()
    }

    /// Cycle lengths of the induced deck permutation, ascending.
    pub fn cycle_lengths(&self, spec: &DeckSpec) -> Vec<usize> {
        cycle_lengths_of(&self.deck_permutation(spec))
    }
}

/// A uniformly random group element.
pub fn random_element<R: rand::Rng + ?Sized>(spec: &DeckSpec, rng: &mut R) -> GroupElement {
    use rand::seq::SliceRandom;
    let (k, d) = (spec.k() as u8, spec.d() as u8);
    let mut attr_perm: Vec<u8> = (0..d).collect();
    attr_perm.shuffle(rng);
    let value_maps = (0..d)
        .map(|_| {
            let mut m: Vec<u8> = (0..k).collect();
            m.shuffle(rng);
            m
        })
        .collect();
    GroupElement { attr_perm, value_maps }
}

pub(crate) fn cycle_lengths_of<T: Copy + Into<u64>>(perm: &[T]) -> Vec<usize> {
    let mut seen = vec![false; perm.len()];
    let mut lengths = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            len += 1;
            i = perm[i].into() as usize;
        }
        lengths.push(len);
    }
    lengths.sort_unstable();
    lengths
}

pub(crate) fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::from(1u32), |acc, i| acc * i)
}

/// `d! * (k!)^d`.
pub fn group_order(spec: &DeckSpec) -> BigUint {
    factorial(spec.d()) * factorial(spec.k()).pow(spec.d())
}

fn checked_order(spec: &DeckSpec, caps: &Caps) -> Result<u64> {
    let order = group_order(spec);
    match u64::try_from(&order) {
        Ok(n) if n <= caps.group => Ok(n),
        _ => Err(Error::Capacity { what: "group enumeration", required: order, cap: caps.group }),
    }
}

/// The `rank`-th permutation of `[0, n)` in lexicographic order.
fn unrank_permutation(n: usize, mut rank: u64) -> Vec<u8> {
    let mut pool: Vec<u8> = (0..n as u8).collect();
    let mut out = Vec::with_capacity(n);
    let mut fact: u64 = (1..n as u64).product();
    for remaining in (1..=n).rev() {
        let idx = (rank / fact) as usize;
        rank %= fact;
        out.push(pool.remove(idx));
        if remaining > 1 {
            fact /= remaining as u64 - 1;
        }
    }
    out
}

/// Element of the given rank; `rank` must be below the group order.
pub(crate) fn element_at(spec: &DeckSpec, rank: u64) -> GroupElement {
    let (k, d) = (spec.k() as usize, spec.d() as usize);
    let kf: u64 = (1..=k as u64).product();
    let block = kf.pow(d as u32);
    let attr_perm = unrank_permutation(d, rank / block);
    let mut rest = rank % block;
    let mut value_maps = vec![Vec::new(); d];
    for a in (0..d).rev() {
        value_maps[a] = unrank_permutation(k, rest % kf);
        rest /= kf;
    }
    GroupElement { attr_perm, value_maps }
}

/// Every group element exactly once, in rank order.
pub fn enumerate_group(
    spec: &DeckSpec,
    caps: &Caps,
) -> Result<impl ExactSizeIterator<Item = GroupElement> + Clone> {
    let order = checked_order(spec, caps)?;
    let spec = *spec;
    Ok((0..order as usize).map(move |r| element_at(&spec, r as u64)))
}

const TABLE_ENTRY_LIMIT: u64 = 1 << 28;

/// The whole group tabulated as deck permutations, indexed by rank.
#[derive(Debug, Clone)]
pub struct SymmetryGroup {
    spec: DeckSpec,
    order: usize,
    size: usize,
    table: Vec<u16>,
    to_zero: Vec<Vec<u32>>,
}

impl SymmetryGroup {
    pub fn new(spec: &DeckSpec, caps: &Caps) -> Result<Self> {
        let order = checked_order(spec, caps)?;
        let size = spec.size() as u64;
        if size > u16::MAX as u64 + 1 || order * size > TABLE_ENTRY_LIMIT {
            return Err(Error::capacity("group table entries", order * size, TABLE_ENTRY_LIMIT));
        }
        let (order, size) = (order as usize, size as usize);
        let mut table = vec![0u16; order * size];
        table.par_chunks_mut(size).enumerate().for_each(|(rank, row)| {
            let g = element_at(spec, rank as u64);
            for (i, slot) in row.iter_mut().enumerate() {
                *slot = g.apply_index(spec, i as u32) as u16;
            }
        });
        let mut to_zero = vec![Vec::with_capacity(order / size); size];
        for (rank, row) in table.chunks(size).enumerate() {
            let x = row.iter().position(|&v| v == 0).expect("row is a permutation");
            to_zero[x].push(rank as u32);
        }
        Ok(SymmetryGroup { spec: *spec, order, size, table, to_zero })
    }

    pub fn spec(&self) -> DeckSpec {
        self.spec
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn element(&self, rank: usize) -> GroupElement {
        element_at(&self.spec, rank as u64)
    }

    /// Deck permutation of the element with this rank.
    #[inline]
    pub fn permutation(&self, rank: usize) -> &[u16] {
        &self.table[rank * self.size..(rank + 1) * self.size]
    }

    #[inline]
    pub fn image(&self, rank: usize, card: u32) -> u32 {
        self.table[rank * self.size + card as usize] as u32
    }

    /// Ranks of the elements sending `card` to card 0, ascending.
    pub fn ranks_to_zero(&self, card: u32) -> &[u32] {
        &self.to_zero[card as usize]
    }

    /// Sorted image of `hand` (as sorted indices) under element `rank`, written into `out`.
    #[inline]
    pub(crate) fn image_sorted(&self, rank: usize, hand: &[u32], out: &mut Vec<u32>) {
        let perm = self.permutation(rank);
        out.clear();
        out.extend(hand.iter().map(|&c| perm[c as usize] as u32));
        out.sort_unstable();
    }
}
