//! Hand isomorphism: canonical forms, witnesses, stabilizers and
//! automorphisms, all by exhaustive scans of a tabulated [`SymmetryGroup`].

use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::deck::{Card, Hand};
use crate::error::{Error, Result};
use crate::group::{GroupElement, SymmetryGroup};
use crate::text::{card_to_string, format_element};

pub use crate::deck::common_attribute_count;

/// A bijection between two hands, as `(source, image)` card pairs.
pub type CardMap = Vec<(Card, Card)>;

/// An isomorphism together with a group element inducing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub mapping: CardMap,
    pub element: GroupElement,
}

impl Witness {
    /// True when the element reproduces every pair of the mapping.
    pub fn validates(&self) -> bool {
        self.mapping
            .iter()
            .all(|(x, y)| self.element.apply(x).is_ok_and(|img| &img == y))
    }

    /// The element's text form, then one `x->y` line per card.
    pub fn to_text(&self) -> String {
        let mut out = format_element(&self.element);
        for (x, y) in &self.mapping {
            out.push('\n');
            out.push_str(&card_to_string(x));
            out.push_str("->");
            out.push_str(&card_to_string(y));
        }
        out
    }
}

/// The least image of a hand over the whole group, comparing ascending
/// index sequences lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm(pub Hand);

impl CanonicalForm {
    pub fn hand(&self) -> &Hand {
        &self.0
    }

    pub fn into_hand(self) -> Hand {
        self.0
    }
}

fn check_group(group: &SymmetryGroup, hand: &Hand) -> Result<()> {
    if group.spec() != hand.spec() {
        return Err(Error::SpecMismatch);
    }
    Ok(())
}

/// Sizes of the parts `hand` splits into by the values of `attribute`,
/// largest first, empty parts omitted.
pub fn splitting_signature(hand: &Hand, attribute: usize) -> Result<Vec<usize>> {
    let spec = hand.spec();
    spec.check_attribute(attribute)?;
    let mut counts = vec![0usize; spec.k() as usize];
    for i in hand.indices() {
        counts[spec.digit(i, attribute) as usize] += 1;
    }
    counts.retain(|&c| c > 0);
    counts.sort_unstable_by(|a, b| b.cmp(a));
    Ok(counts)
}

/// Splitting signatures of every attribute, in attribute order.
pub fn splitting_profile(hand: &Hand) -> Vec<Vec<usize>> {
    (0..hand.spec().d() as usize)
        .map(|a| splitting_signature(hand, a).expect("attribute in range"))
        .collect()
}

/// Canonical form of a hand.
///
/// The group is transitive on cards, so the least image always starts with
/// card 0; only elements sending some card of the hand to 0 are scanned.
pub fn canonical_form(group: &SymmetryGroup, hand: &Hand) -> Result<CanonicalForm> {
    check_group(group, hand)?;
    let cards = hand.to_vec();
    Ok(CanonicalForm(Hand::from_sorted_unchecked(hand.spec(), canonical_indices(group, &cards))))
}

/// Least sorted image of the sorted index list `cards`.
pub(crate) fn canonical_indices(group: &SymmetryGroup, cards: &[u32]) -> Vec<u32> {
    if cards.is_empty() {
        return Vec::new();
    }
    let mut best: Option<Vec<u32>> = None;
    let mut image = Vec::with_capacity(cards.len());
    for &x in cards {
        for &rank in group.ranks_to_zero(x) {
            group.image_sorted(rank as usize, cards, &mut image);
            match &best {
                Some(b) if image.as_slice() >= b.as_slice() => {}
                _ => best = Some(image.clone()),
            }
        }
    }
    best.expect("nonempty hand has an image")
}

/// Whether some group element maps `a` onto `b`.
pub fn are_isomorphic(group: &SymmetryGroup, a: &Hand, b: &Hand) -> Result<bool> {
    check_group(group, a)?;
    a.check_same_spec(b)?;
    if a.len() != b.len() {
        return Ok(false);
    }
    Ok(canonical_form(group, a)? == canonical_form(group, b)?)
}

/// The first witness in group order mapping `a` onto `b`, if any.
pub fn find_witness(group: &SymmetryGroup, a: &Hand, b: &Hand) -> Result<Option<Witness>> {
    scan_for_witness(group, a, b, true)
}

pub(crate) fn scan_for_witness(
    group: &SymmetryGroup,
    a: &Hand,
    b: &Hand,
    prune: bool,
) -> Result<Option<Witness>> {
    check_group(group, a)?;
    a.check_same_spec(b)?;
    if a.len() != b.len() {
        return Ok(None);
    }
    let spec = a.spec();
    let d = spec.d() as usize;
    let block = group.order() / (1..=d).product::<usize>();
    let (sig_a, sig_b) = (splitting_profile(a), splitting_profile(b));
    let cards = a.to_vec();

    // one flag per attribute permutation: do the splittings line up?
    let allowed: Vec<bool> = (0..group.order() / block)
        .map(|p| {
            let psi = group.element(p * block);
            let psi = psi.attr_perm();
            !prune || (0..d).all(|attr| sig_a[attr] == sig_b[psi[attr] as usize])
        })
        .collect();

    let found = (0..group.order()).into_par_iter().find_first(|&rank| {
        allowed[rank / block] && cards.iter().all(|&c| b.contains(group.image(rank, c)))
    });
    Ok(found.map(|rank| {
        let element = group.element(rank);
        let mapping = cards
            .iter()
            .map(|&c| {
                let x = spec.card(c).expect("card in deck");
                let y = spec.card(group.image(rank, c)).expect("card in deck");
                (x, y)
            })
            .collect();
        Witness { mapping, element }
    }))
}

fn stabilizes(group: &SymmetryGroup, rank: usize, hand: &Hand, cards: &[u32]) -> bool {
    let perm = group.permutation(rank);
    cards.iter().all(|&c| hand.contains(perm[c as usize] as u32))
}

/// Number of group elements fixing `hand` setwise.
pub fn stabilizer_order(group: &SymmetryGroup, hand: &Hand) -> Result<u64> {
    check_group(group, hand)?;
    let cards = hand.to_vec();
    Ok((0..group.order())
        .into_par_iter()
        .filter(|&rank| stabilizes(group, rank, hand, &cards))
        .count() as u64)
}

/// Number of hands isomorphic to `hand`.
pub fn orbit_size(group: &SymmetryGroup, hand: &Hand) -> Result<u64> {
    Ok(group.order() as u64 / stabilizer_order(group, hand)?)
}

/// A permutation of a hand's cards by position: entry `i` is the position
/// (in ascending card order) of the image of the `i`-th card.
pub type HandPermutation = Vec<usize>;

/// The distinct self-isomorphisms of `hand`, ascending.
pub fn automorphisms(group: &SymmetryGroup, hand: &Hand) -> Result<Vec<HandPermutation>> {
    check_group(group, hand)?;
    let cards = hand.to_vec();
    let maps: BTreeSet<HandPermutation> = (0..group.order())
        .into_par_iter()
        .filter_map(|rank| {
            if !stabilizes(group, rank, hand, &cards) {
                return None;
            }
            let perm = group.permutation(rank);
            Some(
                cards
                    .iter()
                    .map(|&c| {
                        cards
                            .binary_search(&(perm[c as usize] as u32))
                            .expect("stabilizer keeps cards in hand")
                    })
                    .collect(),
            )
        })
        .collect();
    Ok(maps.into_iter().collect())
}

fn resolve_map(group: &SymmetryGroup, a: &Hand, b: &Hand, map: &[(Card, Card)]) -> Result<Vec<(u32, u32)>> {
    let spec = group.spec();
    if map.len() != a.len() || a.len() != b.len() {
        return Err(Error::MalformedMap(format!(
            "map has {} pairs for hands of {} and {} cards",
            map.len(),
            a.len(),
            b.len()
        )));
    }
    let mut sources = HashSet::new();
    let mut targets = HashSet::new();
    let mut pairs = Vec::with_capacity(map.len());
    for (x, y) in map {
        let (xi, yi) = (spec.index(x)?, spec.index(y)?);
        if !a.contains(xi) || !b.contains(yi) {
            return Err(Error::MalformedMap(format!(
                "{}->{} leaves the hands",
                card_to_string(x),
                card_to_string(y)
            )));
        }
        if !sources.insert(xi) || !targets.insert(yi) {
            return Err(Error::MalformedMap(format!(
                "{}->{} repeats a card",
                card_to_string(x),
                card_to_string(y)
            )));
        }
        pairs.push((xi, yi));
    }
    Ok(pairs)
}

/// Every group element whose action on `a` is exactly `map`, in group order.
pub fn inducers(
    group: &SymmetryGroup,
    a: &Hand,
    b: &Hand,
    map: &[(Card, Card)],
) -> Result<Vec<GroupElement>> {
    check_group(group, a)?;
    a.check_same_spec(b)?;
    let pairs = resolve_map(group, a, b, map)?;
    let ranks: Vec<usize> = (0..group.order())
        .into_par_iter()
        .filter(|&rank| pairs.iter().all(|&(x, y)| group.image(rank, x) == y))
        .collect();
    Ok(ranks.into_iter().map(|r| group.element(r)).collect())
}

/// Number of elements inducing `map`, without materializing them.
pub fn inducer_count(group: &SymmetryGroup, a: &Hand, b: &Hand, map: &[(Card, Card)]) -> Result<u64> {
    check_group(group, a)?;
    a.check_same_spec(b)?;
    let pairs = resolve_map(group, a, b, map)?;
    Ok((0..group.order())
        .into_par_iter()
        .filter(|&rank| pairs.iter().all(|&(x, y)| group.image(rank, x) == y))
        .count() as u64)
}

/// The card map on `hand` described by a [`HandPermutation`].
pub fn permutation_to_map(hand: &Hand, perm: &[usize]) -> CardMap {
    let cards: Vec<Card> = hand.cards().collect();
    perm.iter().enumerate().map(|(i, &j)| (cards[i].clone(), cards[j].clone())).collect()
}

/// A compact summary used to reject non-isomorphic hands cheaply.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Invariant {
    splits: Vec<Vec<usize>>,
    pair_overlaps: Vec<usize>,
}

/// Multiset of splitting signatures plus the histogram of pairwise common
/// attribute counts. Equal for isomorphic hands.
pub fn invariant(hand: &Hand) -> Invariant {
    let spec = hand.spec();
    let mut splits = splitting_profile(hand);
    splits.sort();
    let d = spec.d() as usize;
    let digits: Vec<Vec<u8>> = hand.indices().map(|i| spec.digits_of(i)).collect();
    let mut pair_overlaps = vec![0usize; d + 1];
    for (i, x) in digits.iter().enumerate() {
        for y in &digits[i + 1..] {
            pair_overlaps[x.iter().zip(y).filter(|(p, q)| p == q).count()] += 1;
        }
    }
    Invariant { splits, pair_overlaps }
}
