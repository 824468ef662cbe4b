//! Goal predicates and board searches for Set, Stun, Soot and Quad style games.

use std::fmt;

use num_rational::Ratio;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classification::{binomial, next_combination, Symbol3};
use crate::deck::{Caps, Card, DeckSpec, Hand};
use crate::error::{Error, Result};
use crate::group::SymmetryGroup;
use crate::isomorphism::{canonical_indices, invariant, Invariant};
use crate::text::parse_hand;

/// Distinct values shown by `cards` at each attribute.
fn distinct_per_attribute<'a>(spec: &DeckSpec, cards: &'a [u32]) -> impl Iterator<Item = usize> + 'a {
    let spec = *spec;
    (0..spec.d() as usize).map(move |a| {
        let mut seen = 0u64;
        for &c in cards {
            seen |= 1 << spec.digit(c, a);
        }
        seen.count_ones() as usize
    })
}

fn set_indices(spec: &DeckSpec, cards: &[u32]) -> bool {
    distinct_per_attribute(spec, cards).all(|n| n != 2)
}

fn stun_indices(spec: &DeckSpec, cards: &[u32]) -> bool {
    distinct_per_attribute(spec, cards).all(|n| n == 2)
}

fn quad_indices(spec: &DeckSpec, cards: &[u32]) -> bool {
    (0..spec.d() as usize).all(|a| {
        let mut counts = [0u8; 4];
        for &c in cards {
            counts[spec.digit(c, a) as usize] += 1;
        }
        let mut counts: Vec<u8> = counts.into_iter().filter(|&n| n > 0).collect();
        counts.sort_unstable();
        matches!(counts.as_slice(), [4] | [1, 1, 1, 1] | [2, 2])
    })
}

fn checked_indices(spec: &DeckSpec, cards: &[Card], arity: usize, k: u32, op: &'static str) -> Result<Vec<u32>> {
    if spec.k() != k {
        return Err(Error::UnsupportedSpec { op, k: spec.k(), d: spec.d() });
    }
    if cards.len() != arity {
        return Err(Error::Arity { expected: arity, found: cards.len() });
    }
    let indices = cards.iter().map(|c| spec.index(c)).collect::<Result<Vec<_>>>()?;
    let hand = Hand::from_indices(*spec, indices.iter().copied())?;
    Ok(hand.to_vec())
}

/// Three distinct cards showing one or three values, never two, in every attribute.
pub fn is_set(spec: &DeckSpec, cards: &[Card]) -> Result<bool> {
    Ok(set_indices(spec, &checked_indices(spec, cards, 3, 3, "is_set")?))
}

/// Three distinct cards showing exactly two values in every attribute.
pub fn is_stun(spec: &DeckSpec, cards: &[Card]) -> Result<bool> {
    Ok(stun_indices(spec, &checked_indices(spec, cards, 3, 3, "is_stun")?))
}

/// Four distinct cards of a `k = 4` deck that are all alike, all different
/// or split 2-2 in every attribute.
pub fn is_quad(spec: &DeckSpec, cards: &[Card]) -> Result<bool> {
    Ok(quad_indices(spec, &checked_indices(spec, cards, 4, 4, "is_quad")?))
}

/// What players are looking for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GoalSpec {
    Set,
    Stun,
    Quad,
    /// Any hand isomorphic to the given one.
    ClassOf(Hand),
}

impl GoalSpec {
    /// The Soot goal: hands of symbol `(0;0,1,2)`.
    pub fn soot() -> Self {
        let s = Symbol3::new(0, [0, 1, 2]).expect("valid symbol");
        GoalSpec::ClassOf(s.representative())
    }

    pub fn size(&self) -> usize {
        match self {
            GoalSpec::Set | GoalSpec::Stun => 3,
            GoalSpec::Quad => 4,
            GoalSpec::ClassOf(h) => h.len(),
        }
    }

    /// Parses `set`, `stun`, `quad`, `soot`, `symbol:(t;p,p,p)` or
    /// `class:<hand text>`.
    pub fn parse(spec: &DeckSpec, text: &str) -> Result<Self> {
        let text = text.trim();
        match text.to_ascii_lowercase().as_str() {
            "set" => return Ok(GoalSpec::Set),
            "stun" => return Ok(GoalSpec::Stun),
            "quad" => return Ok(GoalSpec::Quad),
            "soot" => return Ok(GoalSpec::soot()),
            _ => {}
        }
        if let Some(symbol) = text.strip_prefix("symbol:") {
            let s: Symbol3 = symbol.parse()?;
            return Ok(GoalSpec::ClassOf(s.representative()));
        }
        if let Some(hand) = text.strip_prefix("class:") {
            return Ok(GoalSpec::ClassOf(parse_hand(spec, hand)?));
        }
        Err(Error::parse(0, format!("unknown goal {text:?}")))
    }
}

impl fmt::Display for GoalSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GoalSpec::Set => f.write_str("set"),
            GoalSpec::Stun => f.write_str("stun"),
            GoalSpec::Quad => f.write_str("quad"),
            GoalSpec::ClassOf(h) => write!(f, "class:{}", crate::text::format_hand(h)),
        }
    }
}

#[derive(Debug, Clone)]
enum Matcher<'g> {
    Set,
    Stun,
    Quad,
    Class {
        group: &'g SymmetryGroup,
        invariant: Invariant,
        canonical: Vec<u32>,
    },
}

/// A goal prepared for matching against hands of one deck.
#[derive(Debug, Clone)]
pub struct Goal<'g> {
    spec: DeckSpec,
    size: usize,
    matcher: Matcher<'g>,
}

impl<'g> Goal<'g> {
    /// `group` is required for class goals and must belong to `spec`.
    pub fn new(spec: &DeckSpec, goal: &GoalSpec, group: Option<&'g SymmetryGroup>) -> Result<Self> {
        let unsupported = |op| Error::UnsupportedSpec { op, k: spec.k(), d: spec.d() };
        let matcher = match goal {
            GoalSpec::Set if spec.k() == 3 => Matcher::Set,
            GoalSpec::Set => return Err(unsupported("set goal")),
            GoalSpec::Stun if spec.k() == 3 => Matcher::Stun,
            GoalSpec::Stun => return Err(unsupported("stun goal")),
            GoalSpec::Quad if spec.k() == 4 => Matcher::Quad,
            GoalSpec::Quad => return Err(unsupported("quad goal")),
            GoalSpec::ClassOf(hand) => {
                if hand.is_empty() {
                    return Err(Error::InvalidGoal("class goal needs a nonempty hand".into()));
                }
                if hand.spec() != *spec {
                    return Err(Error::SpecMismatch);
                }
                let group = group.ok_or_else(|| Error::InvalidGoal("class goal needs the symmetry group".into()))?;
                if group.spec() != *spec {
                    return Err(Error::SpecMismatch);
                }
                Matcher::Class {
                    group,
                    invariant: invariant(hand),
                    canonical: canonical_indices(group, &hand.to_vec()),
                }
            }
        };
        Ok(Goal { spec: *spec, size: goal.size(), matcher })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn spec(&self) -> DeckSpec {
        self.spec
    }

    /// Whether the sorted, distinct card indices form a goal hand.
    pub fn matches(&self, cards: &[u32]) -> bool {
        if cards.len() != self.size {
            return false;
        }
        match &self.matcher {
            Matcher::Set => set_indices(&self.spec, cards),
            Matcher::Stun => stun_indices(&self.spec, cards),
            Matcher::Quad => quad_indices(&self.spec, cards),
            Matcher::Class { group, invariant: inv, canonical } => {
                let hand = Hand::from_sorted_unchecked(self.spec, cards.to_vec());
                invariant(&hand) == *inv && canonical_indices(group, cards) == *canonical
            }
        }
    }

    pub fn matches_hand(&self, hand: &Hand) -> bool {
        hand.spec() == self.spec && self.matches(&hand.to_vec())
    }
}

fn check_scan(board_len: usize, size: usize, caps: &Caps) -> Result<()> {
    let total = binomial(board_len as u64, size as u64);
    if total > caps.subsets.into() {
        return Err(Error::Capacity { what: "board scan", required: total, cap: caps.subsets });
    }
    Ok(())
}

/// All goal hands inside `board`, in lexicographic order.
pub fn find_matches(board: &Hand, goal: &Goal, caps: &Caps) -> Result<Vec<Hand>> {
    if board.spec() != goal.spec {
        return Err(Error::SpecMismatch);
    }
    let cards = board.to_vec();
    let m = goal.size;
    if m > cards.len() {
        return Ok(Vec::new());
    }
    check_scan(cards.len(), m, caps)?;
    let mut out = Vec::new();
    let mut pick: Vec<u32> = (0..m as u32).collect();
    let mut chosen = Vec::with_capacity(m);
    loop {
        chosen.clear();
        chosen.extend(pick.iter().map(|&p| cards[p as usize]));
        if goal.matches(&chosen) {
            out.push(Hand::from_sorted_unchecked(board.spec(), chosen.clone()));
        }
        if m == 0 || !next_combination(&mut pick, cards.len() as u32) {
            break;
        }
    }
    Ok(out)
}

/// Goal triples inside `board`, in lexicographic order.
pub fn find_triples(board: &Hand, goal: &Goal, caps: &Caps) -> Result<Vec<Hand>> {
    if goal.size != 3 {
        return Err(Error::InvalidGoal(format!("has {} cards, not 3", goal.size)));
    }
    find_matches(board, goal, caps)
}

/// Sub-hands of `board` isomorphic to `goal_hand`, in lexicographic order.
pub fn find_goal_hands(group: &SymmetryGroup, board: &Hand, goal_hand: &Hand, caps: &Caps) -> Result<Vec<Hand>> {
    let goal = Goal::new(&board.spec(), &GoalSpec::ClassOf(goal_hand.clone()), Some(group))?;
    find_matches(board, &goal, caps)
}

/// Deck-wide count of goal hands and the chance that a random hand of the
/// goal's size is one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoalCount {
    pub count: u64,
    pub total: u64,
    pub probability: Ratio<u64>,
}

impl GoalCount {
    pub fn approx(&self) -> f64 {
        self.count as f64 / self.total as f64
    }
}

pub fn count_over_deck(goal: &Goal, caps: &Caps) -> Result<GoalCount> {
    let deck = Hand::full(goal.spec);
    let count = find_matches(&deck, goal, caps)?.len() as u64;
    let total = u64::try_from(binomial(deck.len() as u64, goal.size as u64))
        .expect("scan cap keeps the total small");
    Ok(GoalCount { count, total, probability: Ratio::new(count, total.max(1)) })
}

/// Splits `board` into disjoint goal hands, if possible.
///
/// Backtracks on the least uncovered card, trying its partners in
/// lexicographic order, so the answer is deterministic.
pub fn partition_into_goals(board: &Hand, goal: &Goal) -> Result<Option<Vec<Hand>>> {
    if board.spec() != goal.spec {
        return Err(Error::SpecMismatch);
    }
    let m = goal.size;
    if m == 0 || !board.len().is_multiple_of(m) {
        return Err(Error::Divisibility { size: board.len(), block: m });
    }
    let mut blocks = Vec::new();
    let found = search(&board.to_vec(), goal, &mut blocks);
    Ok(found.then(|| {
        blocks
            .into_iter()
            .map(|b| Hand::from_sorted_unchecked(board.spec(), b))
            .collect()
    }))
}

fn search(remaining: &[u32], goal: &Goal, blocks: &mut Vec<Vec<u32>>) -> bool {
    let Some((&first, rest)) = remaining.split_first() else {
        return true;
    };
    let m = goal.size;
    if rest.len() < m - 1 {
        return false;
    }
    let mut pick: Vec<u32> = (0..(m - 1) as u32).collect();
    loop {
        let mut block = Vec::with_capacity(m);
        block.push(first);
        block.extend(pick.iter().map(|&p| rest[p as usize]));
        if goal.matches(&block) {
            let left: Vec<u32> = rest.iter().copied().filter(|c| !block.contains(c)).collect();
            blocks.push(block);
            if search(&left, goal, blocks) {
                return true;
            }
            blocks.pop();
        }
        if m == 1 || !next_combination(&mut pick, rest.len() as u32) {
            return false;
        }
    }
}

/// A seeded random board.
///
/// The generator is ChaCha8 seeded through `seed_from_u64(seed)`. Starting
/// from the deck in index order, for `i` in `0..board_size` position `i` is
/// swapped with position `i + r % (k^d - i)`, `r` being the next `u64`
/// output; the board is the first `board_size` positions.
pub fn deal(spec: &DeckSpec, board_size: usize, seed: u64, caps: &Caps) -> Result<Hand> {
    let n = spec.size() as usize;
    if board_size > n {
        return Err(Error::Arity { expected: n, found: board_size });
    }
    if n as u64 > caps.deck {
        return Err(Error::capacity("deck", n as u64, caps.deck));
    }
    let mut deck: Vec<u32> = (0..n as u32).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..board_size {
        let j = i + (rng.next_u64() % (n - i) as u64) as usize;
        deck.swap(i, j);
    }
    Hand::from_indices(*spec, deck.into_iter().take(board_size))
}

/// The `k^(d-1)` cards with `value` at `attribute`.
pub fn monochrome(spec: &DeckSpec, attribute: usize, value: u32) -> Result<Hand> {
    spec.check_attribute(attribute)?;
    if value >= spec.k() {
        return Err(Error::ValueOutOfRange { value, k: spec.k() });
    }
    let cards = (0..spec.size()).filter(|&i| spec.digit(i, attribute) == value).collect();
    Ok(Hand::from_sorted_unchecked(*spec, cards))
}
