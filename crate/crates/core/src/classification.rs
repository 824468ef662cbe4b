//! Three-card symbols, class sizes and exhaustive class enumeration.

use std::fmt;
use std::str::FromStr;

use crate::deck::{Caps, DeckSpec, Hand};
use crate::error::{Error, Result};
use crate::group::SymmetryGroup;
use crate::isomorphism::{canonical_form, orbit_size};
use crate::text::{format_hand, parse_hand};

/// Symbol `(t; p1, p2, p3)` of a three-card hand of the standard deck:
/// `t` attributes are shared by all three cards and each `p` counts the
/// further attributes shared by one pair. Parts are kept ascending.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol3 {
    t: u8,
    parts: [u8; 3],
}

impl Symbol3 {
    /// A valid symbol; the parts may be given in any order.
    pub fn new(t: u8, parts: [u8; 3]) -> Result<Self> {
        let mut parts = parts;
        parts.sort_unstable();
        let s = Symbol3 { t, parts };
        let sum: u32 = t as u32 + parts.iter().map(|&p| p as u32).sum::<u32>();
        let ok = t <= 3 && parts.iter().all(|&p| p <= 3 && p + t <= 3) && sum <= 4;
        if !ok {
            return Err(Error::InvalidSymbol(s.to_string()));
        }
        Ok(s)
    }

    pub fn t(&self) -> u8 {
        self.t
    }

    pub fn parts(&self) -> [u8; 3] {
        self.parts
    }

    pub fn is_set(&self) -> bool {
        self.parts == [0, 0, 0]
    }

    pub fn is_stun(&self) -> bool {
        self.t == 0 && self.parts.iter().sum::<u8>() == 4
    }

    /// Number of distinct self-isomorphisms: 6, 2 or 1 as the parts are
    /// all equal, take two values, or are all different.
    pub fn symmetry_count(&self) -> u64 {
        let [p, q, r] = self.parts;
        match (p == q, q == r) {
            (true, true) => 6,
            (false, false) if p != r => 1,
            _ => 2,
        }
    }

    /// A hand with this symbol: the `t` shared attributes come first, then
    /// the attributes shared by cards (2,3), (1,3) and (1,2), then the
    /// attributes where all three differ.
    pub fn representative(&self) -> Hand {
        let [p1, p2, p3] = self.parts;
        let mut cards = [[0u8; 4]; 3];
        let mut a = self.t as usize;
        for (lonely, count) in [(0usize, p1), (1, p2), (2, p3)] {
            for _ in 0..count {
                cards[lonely][a] = 1;
                a += 1;
            }
        }
        for attr in a..4 {
            for (v, card) in cards.iter_mut().enumerate() {
                card[attr] = v as u8;
            }
        }
        let spec = DeckSpec::standard();
        Hand::from_indices(spec, cards.iter().map(|c| spec.index_of_digits(c)))
            .expect("symbol conditions keep the cards distinct")
    }
}

impl fmt::Display for Symbol3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [p, q, r] = self.parts;
        write!(f, "({};{},{},{})", self.t, p, q, r)
    }
}

impl FromStr for Symbol3 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidSymbol(s.to_string());
        let inner = s.trim().strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
        let (t, rest) = inner.split_once(';').ok_or_else(bad)?;
        let nums: Vec<u8> = rest
            .split(',')
            .map(|p| p.trim().parse().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        let parts: [u8; 3] = nums.try_into().map_err(|_| bad())?;
        Symbol3::new(t.trim().parse().map_err(|_| bad())?, parts)
    }
}

/// Symbol of a three-card hand of the standard deck.
pub fn symbol3(hand: &Hand) -> Result<Symbol3> {
    let spec = hand.spec();
    if !spec.is_standard() {
        return Err(Error::UnsupportedSpec { op: "symbol3", k: spec.k(), d: spec.d() });
    }
    if hand.len() != 3 {
        return Err(Error::Arity { expected: 3, found: hand.len() });
    }
    let cards: Vec<Vec<u8>> = hand.indices().map(|i| spec.digits_of(i)).collect();
    let mut t = 0;
    // parts[i] counts attributes shared only by the pair not containing card i
    let mut parts = [0u8; 3];
    for a in 0..4 {
        let (x, y, z) = (cards[0][a], cards[1][a], cards[2][a]);
        match (x == y, x == z, y == z) {
            (true, true, _) => t += 1,
            (false, false, true) => parts[0] += 1,
            (false, true, false) => parts[1] += 1,
            (true, false, false) => parts[2] += 1,
            _ => {}
        }
    }
    Symbol3::new(t, parts)
}

/// Every symbol a three-card hand can have, ascending.
pub fn valid_symbols() -> Vec<Symbol3> {
    let mut out = Vec::new();
    for t in 0..=3u8 {
        for p in 0..=3u8 {
            for q in p..=3 {
                for r in q..=3 {
                    if let Ok(s) = Symbol3::new(t, [p, q, r]) {
                        out.push(s);
                    }
                }
            }
        }
    }
    out
}

/// Ways to pick the shared attributes with their values (`a`) and the
/// first card (`b`), indexed by `t`.
const SHARED_FACTORS: [(u64, u64); 4] = [(1, 81), (12, 27), (54, 9), (108, 3)];

/// The factors of the ordered-choice count `a * b * c * d / e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeFactors {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
    pub e: u64,
}

impl SizeFactors {
    pub fn size(&self) -> u64 {
        self.a * self.b * self.c * self.d / self.e
    }
}

/// Computes `c` and `d` by counting admissible second and third cards.
///
/// The shared attributes are the first `t`, held at value 0, and the first
/// card is card 0. The second card must share exactly `t + p3` attributes
/// with it; the third card then must share `t + p2` with the first,
/// `t + p1` with the second, and nothing further with both.
pub fn symbol_factors(s: &Symbol3) -> SizeFactors {
    let spec = DeckSpec::standard();
    let t = s.t as usize;
    let [p1, p2, p3] = s.parts.map(|p| p as usize);
    let common = |x: &[u8], y: &[u8]| x.iter().zip(y).filter(|(a, b)| a == b).count();
    let deck: Vec<Vec<u8>> = (0..81).map(|i| spec.digits_of(i)).collect();
    let in_shared_block = |x: &Vec<u8>| x[..t].iter().all(|&v| v == 0);
    let first = &deck[0];

    let seconds: Vec<&Vec<u8>> = deck
        .iter()
        .filter(|x| in_shared_block(x) && common(first, x) == t + p3)
        .collect();
    let c = seconds.len() as u64;
    let d = seconds.first().map_or(0, |second| {
        deck.iter()
            .filter(|x| {
                let all_three = (0..4).filter(|&a| first[a] == second[a] && second[a] == x[a]).count();
                in_shared_block(x)
                    && all_three == t
                    && common(first, x) == t + p2
                    && common(second, x) == t + p1
            })
            .count() as u64
    });
    let (a, b) = SHARED_FACTORS[t];
    SizeFactors { a, b, c, d, e: s.symmetry_count() }
}

/// Number of three-card hands with symbol `s`.
pub fn symbol_class_size(s: &Symbol3) -> u64 {
    symbol_factors(s).size()
}

/// One isomorphism class of hands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassRecord {
    /// Canonical form of the class.
    pub representative: Hand,
    pub size: u64,
    /// Present exactly for three-card hands of the standard deck.
    pub symbol: Option<Symbol3>,
}

impl ClassRecord {
    /// `symbol=<(t;p,p,p)|-> rep=<hand text> size=<integer>`.
    pub fn to_line(&self) -> String {
        let symbol = self.symbol.map_or_else(|| "-".to_string(), |s| s.to_string());
        format!("symbol={symbol} rep={} size={}", format_hand(&self.representative), self.size)
    }

    pub fn from_line(spec: &DeckSpec, line: &str) -> Result<Self> {
        let line = line.trim();
        let err = |msg: &str| Error::parse(0, msg.to_string());
        let rest = line.strip_prefix("symbol=").ok_or_else(|| err("expected symbol="))?;
        let (symbol, rest) = rest.split_once(" rep=").ok_or_else(|| err("expected rep="))?;
        let (rep, size) = rest.rsplit_once("size=").ok_or_else(|| err("expected size="))?;
        let symbol = match symbol {
            "-" => None,
            s => Some(s.parse()?),
        };
        let size = size.trim().parse().map_err(|_| err("size is not an integer"))?;
        Ok(ClassRecord { representative: parse_hand(spec, rep)?, size, symbol })
    }
}

fn symbol_for(hand: &Hand) -> Option<Symbol3> {
    (hand.len() == 3 && hand.spec().is_standard()).then(|| symbol3(hand).expect("checked shape"))
}

/// The class record of `hand`.
pub fn class_of(group: &SymmetryGroup, hand: &Hand) -> Result<ClassRecord> {
    let representative = canonical_form(group, hand)?.into_hand();
    let size = orbit_size(group, hand)?;
    Ok(ClassRecord { symbol: symbol_for(hand), representative, size })
}

pub(crate) fn binomial_table(n: usize, k: usize) -> Vec<Vec<u64>> {
    let mut table = vec![vec![0u64; k + 1]; n + 1];
    for i in 0..=n {
        table[i][0] = 1;
        for j in 1..=k.min(i) {
            table[i][j] = table[i - 1][j - 1].saturating_add(if j < i { table[i - 1][j] } else { 0 });
        }
    }
    table
}

/// `C(n, k)` as an exact integer.
pub fn binomial(n: u64, k: u64) -> num_bigint::BigUint {
    if k > n {
        return 0u32.into();
    }
    let k = k.min(n - k);
    let mut acc = num_bigint::BigUint::from(1u32);
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Advances `comb` to the next `n`-subset of `[0, size)` in lexicographic order.
pub(crate) fn next_combination(comb: &mut [u32], size: u32) -> bool {
    let n = comb.len();
    let mut i = n;
    while i > 0 {
        i -= 1;
        if comb[i] < size - (n - i) as u32 {
            comb[i] += 1;
            for j in i + 1..n {
                comb[j] = comb[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Every isomorphism class of `n`-card hands, in order of representative.
///
/// Hands are visited in lexicographic order; each hand not yet covered is
/// the least member of a new class, and the class is swept out by applying
/// the whole group. Requires `C(k^d, n)` within `caps.subsets`.
pub fn enumerate_classes(group: &SymmetryGroup, n: usize, caps: &Caps) -> Result<Vec<ClassRecord>> {
    let spec = group.spec();
    let size = spec.size() as usize;
    let total = binomial(size as u64, n as u64);
    let total = match u64::try_from(&total) {
        Ok(t) if t <= caps.subsets => t,
        _ => return Err(Error::Capacity { what: "subset enumeration", required: total, cap: caps.subsets }),
    };
    if total == 0 {
        return Ok(Vec::new());
    }
    if n == 0 {
        let empty = Hand::empty(spec);
        return Ok(vec![ClassRecord { representative: empty, size: 1, symbol: None }]);
    }

    let binom = binomial_table(size, n);
    let rank = |comb: &[u32]| -> usize {
        comb.iter().enumerate().map(|(i, &c)| binom[c as usize][i + 1] as usize).sum()
    };
    let mut seen = vec![0u64; (total as usize).div_ceil(64)];
    let mut comb: Vec<u32> = (0..n as u32).collect();
    let mut image = Vec::with_capacity(n);
    let mut classes = Vec::new();
    loop {
        let r = rank(&comb);
        if seen[r / 64] >> (r % 64) & 1 == 0 {
            let mut members = 0u64;
            for g in 0..group.order() {
                group.image_sorted(g, &comb, &mut image);
                let ri = rank(&image);
                if seen[ri / 64] >> (ri % 64) & 1 == 0 {
                    seen[ri / 64] |= 1 << (ri % 64);
                    members += 1;
                }
            }
            let representative = Hand::from_sorted_unchecked(spec, comb.clone());
            classes.push(ClassRecord { symbol: symbol_for(&representative), representative, size: members });
        }
        if !next_combination(&mut comb, size as u32) {
            break;
        }
    }
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isomorphism::automorphisms;
    use std::sync::OnceLock;

    fn standard() -> &'static SymmetryGroup {
        static G: OnceLock<SymmetryGroup> = OnceLock::new();
        G.get_or_init(|| SymmetryGroup::new(&DeckSpec::standard(), &Caps::default()).unwrap())
    }

    fn hand(s: &str) -> Hand {
        parse_hand(&DeckSpec::standard(), s).unwrap()
    }

    fn sym(s: &str) -> Symbol3 {
        s.parse().unwrap()
    }

    #[test]
    fn symbols_of_small_hands() {
        assert_eq!(symbol3(&hand("0000 1111 2222")).unwrap(), sym("(0;0,0,0)"));
        assert_eq!(symbol3(&hand("0000 0111 0222")).unwrap(), sym("(1;0,0,0)"));
        assert_eq!(symbol3(&hand("0000 0011 0102")).unwrap(), sym("(1;0,1,1)"));
        assert!(matches!(symbol3(&hand("0000 1111")), Err(Error::Arity { .. })));
    }

    #[test]
    fn the_twenty_symbols() {
        let all = valid_symbols();
        assert_eq!(all.len(), 20);
        for s in ["(0;1,1,2)", "(0;0,2,2)", "(0;0,1,3)"] {
            assert!(all.contains(&sym(s)));
        }
        assert!(Symbol3::new(1, [3, 0, 0]).is_err());
        assert!("(1;3,0,0)".parse::<Symbol3>().is_err());
    }

    #[test]
    fn shared_factor_table_is_choice_count() {
        for (t, &(a, b)) in SHARED_FACTORS.iter().enumerate() {
            let choose = binomial(4, t as u64);
            assert_eq!(num_bigint::BigUint::from(a), choose * 3u64.pow(t as u32));
            assert_eq!(b, 3u64.pow(4 - t as u32));
        }
    }

    #[test]
    fn worked_class_sizes() {
        let f = symbol_factors(&sym("(0;0,0,0)"));
        assert_eq!((f.a, f.b, f.c, f.d, f.e), (1, 81, 16, 1, 6));
        assert_eq!(f.size(), 216);
        let f = symbol_factors(&sym("(1;0,1,2)"));
        assert_eq!((f.a, f.b, f.c, f.d, f.e), (12, 27, 6, 4, 1));
        assert_eq!(f.size(), 7_776);
        assert_eq!(symbol_class_size(&sym("(3;0,0,0)")), 108);
    }

    #[test]
    fn representatives_have_their_symbols() {
        for s in valid_symbols() {
            assert_eq!(symbol3(&s.representative()).unwrap(), s);
        }
    }

    #[test]
    fn symmetry_counts_match_automorphisms() {
        for s in valid_symbols() {
            let autos = automorphisms(standard(), &s.representative()).unwrap();
            assert_eq!(autos.len() as u64, s.symmetry_count(), "{s}");
        }
    }

    #[test]
    fn small_class_tables() {
        let caps = Caps::default();
        let zero = enumerate_classes(standard(), 0, &caps).unwrap();
        assert_eq!(zero.len(), 1);
        assert_eq!(zero[0].size, 1);
        let two = enumerate_classes(standard(), 2, &caps).unwrap();
        let mut sizes: Vec<u64> = two.iter().map(|c| c.size).collect();
        sizes.sort();
        assert_eq!(sizes, vec![324, 648, 972, 1296]);
    }

    #[test]
    fn subset_cap() {
        let caps = Caps { subsets: 85_319, ..Caps::default() };
        assert!(matches!(enumerate_classes(standard(), 3, &caps), Err(Error::Capacity { .. })));
    }

    #[test]
    fn small_deck_classes_sum_to_binomials() {
        let spec = DeckSpec::new(2, 3).unwrap();
        let group = SymmetryGroup::new(&spec, &Caps::default()).unwrap();
        for n in 0..=8 {
            let classes = enumerate_classes(&group, n, &Caps::default()).unwrap();
            let total: u64 = classes.iter().map(|c| c.size).sum();
            assert_eq!(num_bigint::BigUint::from(total), binomial(8, n as u64));
        }
    }

    #[test]
    fn class_records() {
        let g = standard();
        let r = class_of(g, &hand("0000 0011 0022")).unwrap();
        assert_eq!((r.size, r.symbol), (324, Some(sym("(2;0,0,0)"))));
        assert_eq!(class_of(g, &Hand::empty(DeckSpec::standard())).unwrap().size, 1);
        let one = class_of(g, &hand("2121")).unwrap();
        assert_eq!((one.size, one.symbol), (81, None));
        assert_eq!(one.representative.to_vec(), vec![0]);
        let line = r.to_line();
        assert_eq!(line, "symbol=(2;0,0,0) rep=0000 0011 0022 size=324");
        assert_eq!(ClassRecord::from_line(&DeckSpec::standard(), &line).unwrap(), r);
    }

    #[test]
    fn combinations_in_lex_order() {
        let mut c = vec![0, 1];
        let mut all = vec![c.clone()];
        while next_combination(&mut c, 4) {
            all.push(c.clone());
        }
        assert_eq!(all, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
    }
}
