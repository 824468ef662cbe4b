//! Decks, cards and hands.
//!
//! A deck `D(k^d)` has `k^d` cards, one for every `d`-tuple of values in
//! `[0, k)`. Card indices are the base-`k` numeral of the digit tuple read
//! with attribute 0 as the most significant digit, so index order, digit
//! lexicographic order and the text form's string order all coincide.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hands over decks up to this many cards are stored as bitsets.
pub const BITSET_THRESHOLD: u32 = 4096;

/// Attribute names of the physical deck, in index order.
pub const ATTRIBUTE_NAMES: [&str; 4] = ["color", "shape", "fill", "number"];

/// Value names of the physical deck, indexed `[attribute][value]`.
pub const VALUE_NAMES: [[&str; 3]; 4] = [
    ["red", "green", "purple"],
    ["oval", "diamond", "squiggle"],
    ["solid", "empty", "stripe"],
    ["single", "double", "triple"],
];

/// Parameters of a deck `D(k^d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DeckSpec {
    k: u32,
    d: u32,
}

impl DeckSpec {
    pub fn new(k: u32, d: u32) -> Result<Self> {
        if k == 0 || d == 0 {
            return Err(Error::InvalidSpec { k, d, reason: "k and d must be at least 1" });
        }
        if k > 255 {
            return Err(Error::InvalidSpec { k, d, reason: "k must be at most 255" });
        }
        if (k as u64).checked_pow(d).is_none_or(|n| n > u32::MAX as u64) {
            return Err(Error::InvalidSpec { k, d, reason: "k^d does not fit in 32 bits" });
        }
        Ok(DeckSpec { k, d })
    }

    /// The 81-card deck `D(3^4)`.
    pub fn standard() -> Self {
        DeckSpec { k: 3, d: 4 }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    /// Number of cards, `k^d`.
    pub fn size(&self) -> u32 {
        self.k.pow(self.d)
    }

    pub fn is_standard(&self) -> bool {
        *self == DeckSpec::standard()
    }

    /// Digit of card `index` at `attribute`, without bounds checks.
    #[inline]
    pub(crate) fn digit(&self, index: u32, attribute: usize) -> u32 {
        let shift = self.d as usize - 1 - attribute;
        (index / self.k.pow(shift as u32)) % self.k
    }

    pub(crate) fn digits_of(&self, mut index: u32) -> Vec<u8> {
        let mut digits = vec![0u8; self.d as usize];
        for slot in digits.iter_mut().rev() {
            *slot = (index % self.k) as u8;
            index /= self.k;
        }
        digits
    }

    pub(crate) fn index_of_digits(&self, digits: &[u8]) -> u32 {
        digits.iter().fold(0, |acc, &v| acc * self.k + v as u32)
    }

    /// The card with the given index.
    pub fn card(&self, index: u32) -> Result<Card> {
        if index >= self.size() {
            return Err(Error::ValueOutOfRange { value: index, k: self.size() });
        }
        Ok(Card { digits: self.digits_of(index) })
    }

    /// Index of `card` in this deck.
    pub fn index(&self, card: &Card) -> Result<u32> {
        self.check_card(card)?;
        Ok(self.index_of_digits(&card.digits))
    }

    pub fn check_card(&self, card: &Card) -> Result<()> {
        if card.digits.len() != self.d as usize {
            return Err(Error::SpecMismatch);
        }
        if let Some(&v) = card.digits.iter().find(|&&v| v as u32 >= self.k) {
            return Err(Error::ValueOutOfRange { value: v as u32, k: self.k });
        }
        Ok(())
    }

    pub(crate) fn check_attribute(&self, attribute: usize) -> Result<()> {
        if attribute >= self.d as usize {
            return Err(Error::AttributeOutOfRange { attribute, d: self.d });
        }
        Ok(())
    }
}

impl Default for DeckSpec {
    fn default() -> Self {
        DeckSpec::standard()
    }
}

impl fmt::Display for DeckSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D({}^{})", self.k, self.d)
    }
}

/// Size limits for exhaustive computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Largest deck that may be materialized.
    pub deck: u64,
    /// Largest group that may be enumerated or tabulated.
    pub group: u64,
    /// Largest number of subsets an exhaustive scan may visit.
    pub subsets: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            deck: 1 << 20,
            group: 1_000_000,
            subsets: 5_000_000,
        }
    }
}

/// A card as its tuple of value indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Card {
    digits: Vec<u8>,
}

impl Card {
    pub fn new(digits: impl Into<Vec<u8>>) -> Self {
        Card { digits: digits.into() }
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }
}

impl From<&[u8]> for Card {
    fn from(digits: &[u8]) -> Self {
        Card::new(digits)
    }
}

/// Value of `card` at `attribute`.
pub fn value_of(card: &Card, attribute: usize) -> Result<u8> {
    card.digits
        .get(attribute)
        .copied()
        .ok_or(Error::AttributeOutOfRange { attribute, d: card.digits.len() as u32 })
}

/// Number of attributes where two distinct cards agree.
pub fn common_attribute_count(x: &Card, y: &Card) -> Result<usize> {
    if x.len() != y.len() {
        return Err(Error::SpecMismatch);
    }
    if x == y {
        return Err(Error::DegeneratePair);
    }
    Ok(x.digits.iter().zip(&y.digits).filter(|(a, b)| a == b).count())
}

/// The third card of the unique Set through `x` and `y` in a `k = 3` deck.
pub fn complete_set(spec: &DeckSpec, x: &Card, y: &Card) -> Result<Card> {
    if spec.k != 3 {
        return Err(Error::UnsupportedSpec { op: "complete_set", k: spec.k, d: spec.d });
    }
    spec.check_card(x)?;
    spec.check_card(y)?;
    if x == y {
        return Err(Error::DegeneratePair);
    }
    let digits = x
        .digits
        .iter()
        .zip(&y.digits)
        .map(|(&a, &b)| if a == b { a } else { 3 - a - b })
        .collect::<Vec<u8>>();
    Ok(Card { digits })
}

/// All `k^d` cards of the deck.
pub fn make_deck(spec: &DeckSpec, caps: &Caps) -> Result<Hand> {
    let size = spec.size() as u64;
    if size > caps.deck {
        return Err(Error::capacity("deck", size, caps.deck));
    }
    Ok(Hand::full(*spec))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum CardSet {
    Bits(Vec<u64>),
    Sorted(Vec<u32>),
}

/// A set of distinct cards of one deck. Iteration is in ascending index order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hand {
    spec: DeckSpec,
    len: usize,
    cards: CardSet,
}

impl Hand {
    pub fn empty(spec: DeckSpec) -> Self {
        let cards = if spec.size() <= BITSET_THRESHOLD {
            CardSet::Bits(vec![0; (spec.size() as usize).div_ceil(64)])
        } else {
            CardSet::Sorted(Vec::new())
        };
        Hand { spec, len: 0, cards }
    }

    pub fn full(spec: DeckSpec) -> Self {
        Hand::from_sorted_unchecked(spec, (0..spec.size()).collect())
    }

    /// Builds a hand from card indices; duplicates and out-of-range indices are errors.
    pub fn from_indices(spec: DeckSpec, indices: impl IntoIterator<Item = u32>) -> Result<Self> {
        let mut v: Vec<u32> = indices.into_iter().collect();
        if let Some(&bad) = v.iter().find(|&&i| i >= spec.size()) {
            return Err(Error::ValueOutOfRange { value: bad, k: spec.size() });
        }
        v.sort_unstable();
        if let Some(w) = v.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateCard(crate::text::format_card(&spec, w[0])));
        }
        Ok(Hand::from_sorted_unchecked(spec, v))
    }

    pub fn from_cards<'a>(spec: DeckSpec, cards: impl IntoIterator<Item = &'a Card>) -> Result<Self> {
        let indices = cards
            .into_iter()
            .map(|c| spec.index(c))
            .collect::<Result<Vec<_>>>()?;
        Hand::from_indices(spec, indices)
    }

    /// `sorted` must be strictly increasing and in range.
    pub(crate) fn from_sorted_unchecked(spec: DeckSpec, sorted: Vec<u32>) -> Self {
        debug_assert!(sorted.windows(2).all(|w| w[0] < w[1]));
        let len = sorted.len();
        if spec.size() <= BITSET_THRESHOLD {
            let mut words = vec![0u64; (spec.size() as usize).div_ceil(64)];
            for i in sorted {
                words[(i / 64) as usize] |= 1 << (i % 64);
            }
            Hand { spec, len, cards: CardSet::Bits(words) }
        } else {
            Hand { spec, len, cards: CardSet::Sorted(sorted) }
        }
    }

    pub fn spec(&self) -> DeckSpec {
        self.spec
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, index: u32) -> bool {
        match &self.cards {
            CardSet::Bits(w) => {
                index < self.spec.size() && w[(index / 64) as usize] >> (index % 64) & 1 == 1
            }
            CardSet::Sorted(v) => v.binary_search(&index).is_ok(),
        }
    }

    pub fn contains_card(&self, card: &Card) -> bool {
        self.spec.index(card).is_ok_and(|i| self.contains(i))
    }

    /// Card indices in ascending order.
    pub fn indices(&self) -> impl Iterator<Item = u32> + '_ {
        let (bits, sorted) = match &self.cards {
            CardSet::Bits(w) => (Some(BitIter::new(w)), None),
            CardSet::Sorted(v) => (None, Some(v.iter().copied())),
        };
        bits.into_iter().flatten().chain(sorted.into_iter().flatten())
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.indices().collect()
    }

    pub fn cards(&self) -> impl Iterator<Item = Card> + '_ {
        self.indices().map(|i| Card { digits: self.spec.digits_of(i) })
    }

    /// The cards of the deck not in this hand.
    pub fn complement(&self) -> Hand {
        let rest = (0..self.spec.size()).filter(|&i| !self.contains(i)).collect();
        Hand::from_sorted_unchecked(self.spec, rest)
    }

    pub(crate) fn check_same_spec(&self, other: &Hand) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::SpecMismatch);
        }
        Ok(())
    }
}

impl PartialOrd for Hand {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Hands order by their ascending index sequences.
impl Ord for Hand {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.indices()
            .cmp(other.indices())
            .then_with(|| (self.spec.k, self.spec.d).cmp(&(other.spec.k, other.spec.d)))
    }
}

struct BitIter<'a> {
    words: &'a [u64],
    word: usize,
    current: u64,
}

impl<'a> BitIter<'a> {
    fn new(words: &'a [u64]) -> Self {
        BitIter { words, word: 0, current: words.first().copied().unwrap_or(0) }
    }
}

impl Iterator for BitIter<'_> {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        while self.current == 0 {
            self.word += 1;
            self.current = *self.words.get(self.word)?;
        }
        let bit = self.current.trailing_zeros();
        self.current &= self.current - 1;
        Some(self.word as u32 * 64 + bit)
    }
}
