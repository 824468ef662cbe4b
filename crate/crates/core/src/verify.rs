//! The standard-deck check battery behind the `verify` command.

use num_bigint::BigUint;
use num_rational::Ratio;

use crate::burnside::count_classes_burnside;
use crate::classification::{enumerate_classes, symbol_class_size, valid_symbols, Symbol3};
use crate::deck::{Caps, DeckSpec, Hand};
use crate::error::Result;
use crate::games::{count_over_deck, find_triples, monochrome, Goal, GoalSpec};
use crate::group::SymmetryGroup;
use crate::isomorphism::{automorphisms, inducer_count, stabilizer_order};

/// Class sizes of three-card hands by symbol, as tabulated for `D(3^4)`.
pub const THREE_CARD_TABLE: [(&str, u64); 20] = [
    ("(0;0,0,0)", 216),
    ("(0;0,0,1)", 2_592),
    ("(0;0,0,2)", 3_888),
    ("(0;0,0,3)", 2_592),
    ("(0;0,1,1)", 7_776),
    ("(0;0,1,2)", 15_552),
    ("(0;0,1,3)", 5_184),
    ("(0;0,2,2)", 3_888),
    ("(0;1,1,1)", 5_184),
    ("(0;1,1,2)", 7_776),
    ("(1;0,0,0)", 432),
    ("(1;0,0,1)", 3_888),
    ("(1;0,0,2)", 3_888),
    ("(1;0,1,1)", 7_776),
    ("(1;0,1,2)", 7_776),
    ("(1;1,1,1)", 2_592),
    ("(2;0,0,0)", 324),
    ("(2;0,0,1)", 1_944),
    ("(2;0,1,1)", 1_944),
    ("(3;0,0,0)", 108),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: String) -> Check {
    Check { name, passed, detail }
}

/// Runs every check on `D(3^4)`. Failures are reported, not returned as errors.
pub fn run_battery(caps: &Caps) -> Result<Vec<Check>> {
    let spec = DeckSpec::standard();
    let group = SymmetryGroup::new(&spec, caps)?;
    let mut out = Vec::new();

    let two = enumerate_classes(&group, 2, caps)?;
    let mut sizes: Vec<u64> = two.iter().map(|c| c.size).collect();
    sizes.sort_unstable();
    let total: u64 = sizes.iter().sum();
    out.push(check(
        "two-card classes",
        sizes == [324, 648, 972, 1_296] && total == 3_240,
        format!("{} classes, sizes {sizes:?}, total {total}", two.len()),
    ));

    let three = enumerate_classes(&group, 3, caps)?;
    let total: u64 = three.iter().map(|c| c.size).sum();
    let table_ok = three.len() == 20
        && THREE_CARD_TABLE.iter().all(|&(s, size)| {
            let s: Symbol3 = s.parse().expect("table symbols are valid");
            three.iter().any(|c| c.symbol == Some(s) && c.size == size)
        });
    out.push(check(
        "three-card classes",
        table_ok && total == 85_320,
        format!("{} classes, total {total}", three.len()),
    ));

    let formula_ok = valid_symbols().iter().all(|s| {
        three.iter().any(|c| c.symbol == Some(*s) && c.size == symbol_class_size(s))
    });
    out.push(check("class-size formula", formula_ok, "a*b*c*d/e against enumeration".into()));

    let sets = count_over_deck(&Goal::new(&spec, &GoalSpec::Set, None)?, caps)?;
    out.push(check(
        "sets",
        sets.count == 1_080 && sets.probability == Ratio::new(1, 79),
        format!("{} ({})", sets.count, sets.probability),
    ));
    let stuns = count_over_deck(&Goal::new(&spec, &GoalSpec::Stun, None)?, caps)?;
    out.push(check(
        "stuns",
        stuns.count == 16_848,
        format!("{} (~{:.4})", stuns.count, stuns.approx()),
    ));
    let soots = count_over_deck(&Goal::new(&spec, &GoalSpec::soot(), Some(&group))?, caps)?;
    out.push(check(
        "soots",
        soots.count == 15_552,
        format!("{} (~{:.4})", soots.count, soots.approx()),
    ));

    let single = Hand::from_indices(spec, [0])?;
    let empty = Hand::empty(spec);
    let stab = stabilizer_order(&group, &single)?;
    let empty_inducers = inducer_count(&group, &empty, &empty, &[])?;
    out.push(check(
        "group and stabilizers",
        group.order() == 31_104 && stab == 384 && empty_inducers == 31_104,
        format!("order {}, single-card stabilizer {stab}, empty-map inducers {empty_inducers}", group.order()),
    ));

    let counts = count_classes_burnside(&group);
    let head: Vec<BigUint> = counts.iter().take(5).cloned().collect();
    let expected: Vec<BigUint> = [1u32, 1, 4, 20, 144].into_iter().map(BigUint::from).collect();
    let palindrome = counts.iter().eq(counts.iter().rev());
    out.push(check(
        "burnside table",
        head == expected && counts.len() == 82,
        format!("n=0..4: {}", head.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")),
    ));
    out.push(check("palindrome", palindrome, format!("{} entries", counts.len())));

    let four = enumerate_classes(&group, 4, caps)?;
    out.push(check(
        "burnside vs enumeration at n=4",
        counts.get(4) == Some(&BigUint::from(four.len())),
        format!("{} = {}", counts.get(4).map_or("-".into(), |c| c.to_string()), four.len()),
    ));

    let stun = Goal::new(&spec, &GoalSpec::Stun, None)?;
    let mut stun_free = true;
    for attribute in 0..4 {
        for value in 0..3 {
            stun_free &= find_triples(&monochrome(&spec, attribute, value)?, &stun, caps)?.is_empty();
        }
    }
    out.push(check("monochrome boards are stun-free", stun_free, "27 cards per board".into()));

    let mut e_rule = true;
    for s in valid_symbols() {
        e_rule &= automorphisms(&group, &s.representative())?.len() as u64 == s.symmetry_count();
    }
    out.push(check("symmetry counts", e_rule, "|Aut| in {6,2,1} by parts".into()));

    Ok(out)
}
