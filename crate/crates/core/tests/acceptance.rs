//! Acceptance battery for the standard deck. Prints one PASS/FAIL line per
//! criterion and exits nonzero if any required criterion fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use setdeck::burnside::{count_classes_burnside, count_classes_cycle_index};
use setdeck::classification::{
    enumerate_classes, symbol3, symbol_class_size, valid_symbols, ClassRecord, Symbol3,
};
use setdeck::games::{count_over_deck, deal, find_triples, is_set, is_stun, monochrome, Goal, GoalSpec};
use setdeck::isomorphism::{automorphisms, canonical_form, inducer_count, orbit_size, stabilizer_order};
use setdeck::{group_order, random_element, Caps, Card, DeckSpec, Hand, SymmetryGroup};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Box<dyn Fn(&Ctx) -> Outcome>);

// Three-card class sizes by symbol, copied from the published table.
const TABLE: [(&str, u64); 20] = [
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

struct Ctx {
    spec: DeckSpec,
    caps: Caps,
    group: SymmetryGroup,
    build_time: Duration,
    three: Vec<ClassRecord>,
}

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn digits(spec: &DeckSpec, index: u32) -> Vec<u8> {
    spec.card(index).unwrap().digits().to_vec()
}

fn sizes_by_symbol(records: &[ClassRecord]) -> BTreeMap<String, u64> {
    records
        .iter()
        .map(|r| (r.symbol.map(|s| s.to_string()).unwrap_or_default(), r.size))
        .collect()
}

/// Symbol computed straight from the digits: shared-by-all count, then
/// pairwise extras sorted ascending.
fn oracle_symbol(cards: [&[u8]; 3]) -> (u8, [u8; 3]) {
    let d = cards[0].len();
    let t = (0..d).filter(|&a| cards[0][a] == cards[1][a] && cards[1][a] == cards[2][a]).count() as u8;
    let common = |x: &[u8], y: &[u8]| x.iter().zip(y).filter(|(p, q)| p == q).count() as u8;
    let mut parts = [
        common(cards[1], cards[2]) - t,
        common(cards[0], cards[2]) - t,
        common(cards[0], cards[1]) - t,
    ];
    parts.sort_unstable();
    (t, parts)
}

fn random_hand(rng: &mut ChaCha8Rng, spec: DeckSpec, n: usize) -> Hand {
    let mut picked = Vec::with_capacity(n);
    while picked.len() < n {
        let c = rng.random_range(0..spec.size());
        if !picked.contains(&c) {
            picked.push(c);
        }
    }
    Hand::from_indices(spec, picked).unwrap()
}

fn c1_two_card(ctx: &Ctx) -> Outcome {
    let start = Instant::now();
    let two = enumerate_classes(&ctx.group, 2, &ctx.caps).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed() + ctx.build_time;
    let mut sizes: Vec<u64> = two.iter().map(|r| r.size).collect();
    sizes.sort_unstable();
    let total: u64 = sizes.iter().sum();
    ensure(
        sizes == [324, 648, 972, 1_296] && total == 3_240 && elapsed < Duration::from_secs(1),
        format!("{} classes, sizes {sizes:?}, total {total}, {elapsed:.2?}", two.len()),
    )
}

fn c2_three_card(ctx: &Ctx, elapsed: Duration) -> Outcome {
    let by_symbol = sizes_by_symbol(&ctx.three);
    let mismatched: Vec<&str> = TABLE
        .iter()
        .filter(|(s, size)| by_symbol.get(*s) != Some(size))
        .map(|(s, _)| *s)
        .collect();
    let total: u64 = ctx.three.iter().map(|r| r.size).sum();
    ensure(
        ctx.three.len() == 20 && mismatched.is_empty() && total == 85_320 && elapsed < Duration::from_secs(10),
        format!("{} classes, total {total}, mismatched rows {mismatched:?}, {elapsed:.2?}", ctx.three.len()),
    )
}

fn c3_sets(ctx: &Ctx) -> Outcome {
    let goal = Goal::new(&ctx.spec, &GoalSpec::Set, None).map_err(|e| e.to_string())?;
    let count = count_over_deck(&goal, &ctx.caps).map_err(|e| e.to_string())?;
    let mut set_classes: Vec<u64> = ctx
        .three
        .iter()
        .filter(|r| r.symbol.is_some_and(|s| s.is_set()))
        .map(|r| r.size)
        .collect();
    set_classes.sort_unstable();
    let sum: u64 = set_classes.iter().sum();
    ensure(
        count.count == 1_080 && set_classes == [108, 216, 324, 432] && sum == 1_080 && count.probability == Ratio::new(1, 79),
        format!("{} Sets, classes {set_classes:?} sum {sum}, probability {}", count.count, count.probability),
    )
}

fn c4_stuns(ctx: &Ctx) -> Outcome {
    let goal = Goal::new(&ctx.spec, &GoalSpec::Stun, None).map_err(|e| e.to_string())?;
    let count = count_over_deck(&goal, &ctx.caps).map_err(|e| e.to_string())?;
    let classes: BTreeMap<String, u64> = ctx
        .three
        .iter()
        .filter(|r| r.symbol.is_some_and(|s| s.is_stun()))
        .map(|r| (r.symbol.unwrap().to_string(), r.size))
        .collect();
    let expected: BTreeMap<String, u64> =
        [("(0;0,1,3)", 5_184), ("(0;0,2,2)", 3_888), ("(0;1,1,2)", 7_776)].map(|(s, n)| (s.to_string(), n)).into();
    let sum: u64 = classes.values().sum();
    ensure(
        count.count == 16_848 && classes == expected && sum == 16_848 && count.probability == Ratio::new(16_848, 85_320),
        format!("{} Stuns, classes {classes:?}, probability {} (~{:.4})", count.count, count.probability, count.approx()),
    )
}

fn c5_soots(ctx: &Ctx) -> Outcome {
    let by_symbol = sizes_by_symbol(&ctx.three);
    let goal = Goal::new(&ctx.spec, &GoalSpec::soot(), Some(&ctx.group)).map_err(|e| e.to_string())?;
    let count = count_over_deck(&goal, &ctx.caps).map_err(|e| e.to_string())?;
    let class = by_symbol.get("(0;0,1,2)").copied();
    ensure(
        class == Some(15_552) && count.count == 15_552,
        format!("class (0;0,1,2) size {class:?}, deck scan {}", count.count),
    )
}

fn c6_group(ctx: &Ctx) -> Outcome {
    let expected_order = 24 * 6u64.pow(4);
    let card = Hand::from_indices(ctx.spec, [0]).unwrap();
    let stab = stabilizer_order(&ctx.group, &card).map_err(|e| e.to_string())?;
    let empty = Hand::empty(ctx.spec);
    let inducers = inducer_count(&ctx.group, &empty, &empty, &[]).map_err(|e| e.to_string())?;
    let order = group_order(&ctx.spec);
    ensure(
        order == BigUint::from(expected_order) && ctx.group.order() as u64 == expected_order && stab == 24 * 16 && inducers == expected_order,
        format!("order {order}, stabilizer {stab}, empty-map inducers {inducers}"),
    )
}

fn c7_burnside(ctx: &Ctx) -> Outcome {
    let start = Instant::now();
    let counts = count_classes_burnside(&ctx.group);
    let elapsed = start.elapsed();
    let head: Vec<String> = counts.iter().take(5).map(|c| c.to_string()).collect();
    let palindrome = counts.iter().eq(counts.iter().rev());
    ensure(
        head == ["1", "1", "4", "20", "144"] && counts.len() == 82 && palindrome && elapsed < Duration::from_secs(60),
        format!("head {}, {} entries, palindrome {palindrome}, {elapsed:.2?}", head.join(" "), counts.len()),
    )
}

fn c8_oracles(ctx: &Ctx) -> Outcome {
    let n = ctx.spec.size();
    let cards: Vec<Vec<u8>> = (0..n).map(|i| digits(&ctx.spec, i)).collect();
    let mut exhaustive: BTreeMap<(u8, [u8; 3]), u64> = BTreeMap::new();
    for x in 0..n as usize {
        for y in x + 1..n as usize {
            for z in y + 1..n as usize {
                *exhaustive.entry(oracle_symbol([&cards[x], &cards[y], &cards[z]])).or_default() += 1;
            }
        }
    }
    let mut bad = Vec::new();
    for s in valid_symbols() {
        let formula = symbol_class_size(&s);
        let orbit = orbit_size(&ctx.group, &s.representative()).map_err(|e| e.to_string())?;
        let counted = exhaustive.get(&(s.t(), s.parts())).copied().unwrap_or(0);
        if formula != orbit || orbit != counted {
            bad.push(format!("{s}: {formula}/{orbit}/{counted}"));
        }
    }
    ensure(
        bad.is_empty() && exhaustive.len() == 20,
        format!("20 symbols, {} symbols seen exhaustively, disagreements {bad:?}", exhaustive.len()),
    )
}

fn c9_theorem(ctx: &Ctx) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut pairs: Vec<(Hand, Hand)> = (0..10_000)
        .map(|_| (random_hand(&mut rng, ctx.spec, 3), random_hand(&mut rng, ctx.spec, 3)))
        .collect();
    let reps: Vec<Hand> = valid_symbols().iter().map(Symbol3::representative).collect();
    for a in &reps {
        for b in &reps {
            pairs.push((a.clone(), b.clone()));
        }
    }
    let mut counterexamples = 0;
    let mut equal = 0;
    for (a, b) in &pairs {
        let same_symbol = symbol3(a).map_err(|e| e.to_string())? == symbol3(b).map_err(|e| e.to_string())?;
        let same_form = canonical_form(&ctx.group, a).map_err(|e| e.to_string())?
            == canonical_form(&ctx.group, b).map_err(|e| e.to_string())?;
        equal += same_form as usize;
        counterexamples += (same_symbol != same_form) as usize;
    }
    ensure(
        counterexamples == 0,
        format!("{} pairs ({equal} isomorphic), {counterexamples} counterexamples", pairs.len()),
    )
}

fn c10_invariance(ctx: &Ctx) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut predicate_failures = 0;
    let (mut sets, mut stuns) = (0, 0);
    for _ in 0..1_000 {
        let g = random_element(&ctx.spec, &mut rng);
        let triple: Vec<Card> = random_hand(&mut rng, ctx.spec, 3).cards().collect();
        let image: Vec<Card> = triple.iter().map(|c| g.apply(c).unwrap()).collect();
        let before = (is_set(&ctx.spec, &triple).unwrap(), is_stun(&ctx.spec, &triple).unwrap());
        let after = (is_set(&ctx.spec, &image).unwrap(), is_stun(&ctx.spec, &image).unwrap());
        sets += before.0 as usize;
        stuns += before.1 as usize;
        predicate_failures += (before != after) as usize;
    }
    let mut canonical_failures = 0;
    for _ in 0..1_000 {
        let g = random_element(&ctx.spec, &mut rng);
        let size = rng.random_range(0..=12);
        let hand = random_hand(&mut rng, ctx.spec, size);
        let moved = g.apply_to_hand(&hand).map_err(|e| e.to_string())?;
        let same = canonical_form(&ctx.group, &moved).map_err(|e| e.to_string())?
            == canonical_form(&ctx.group, &hand).map_err(|e| e.to_string())?;
        canonical_failures += (!same) as usize;
    }
    ensure(
        predicate_failures == 0 && canonical_failures == 0,
        format!(
            "predicates: {predicate_failures} failures ({sets} Sets, {stuns} Stuns drawn); canonical forms: {canonical_failures} failures"
        ),
    )
}

fn c11_stun_free(ctx: &Ctx) -> Outcome {
    let goal = Goal::new(&ctx.spec, &GoalSpec::Stun, None).map_err(|e| e.to_string())?;
    let mut found = 0;
    let mut boards = 0;
    for attribute in 0..4 {
        for value in 0..3 {
            let board = monochrome(&ctx.spec, attribute, value).map_err(|e| e.to_string())?;
            if board.len() != 27 {
                return Err(format!("board for attribute {attribute} value {value} has {} cards", board.len()));
            }
            found += find_triples(&board, &goal, &ctx.caps).map_err(|e| e.to_string())?.len();
            boards += 1;
        }
    }
    ensure(found == 0, format!("{boards} boards of 27 cards, {found} Stuns"))
}

fn c12_e_rule(ctx: &Ctx) -> Outcome {
    let mut bad = Vec::new();
    let mut tally: BTreeMap<usize, usize> = BTreeMap::new();
    for s in valid_symbols() {
        let [p, q, r] = s.parts();
        let expected = if p == q && q == r {
            6
        } else if p == q || q == r {
            2
        } else {
            1
        };
        let found = automorphisms(&ctx.group, &s.representative()).map_err(|e| e.to_string())?.len();
        *tally.entry(found).or_default() += 1;
        if found != expected {
            bad.push(format!("{s}: {found} != {expected}"));
        }
    }
    ensure(bad.is_empty(), format!("|Aut| tally {tally:?}, mismatches {bad:?}"))
}

fn c13_monte_carlo(ctx: &Ctx) -> Outcome {
    let goal = Goal::new(&ctx.spec, &GoalSpec::Stun, None).map_err(|e| e.to_string())?;
    let mut total = 0usize;
    for seed in 0..1_000u64 {
        let board = deal(&ctx.spec, 9, seed, &ctx.caps).map_err(|e| e.to_string())?;
        total += find_triples(&board, &goal, &ctx.caps).map_err(|e| e.to_string())?.len();
    }
    let mean = total as f64 / 1_000.0;
    let expected = 84.0 * 16_848.0 / 85_320.0;
    let ratio = mean / expected;
    ensure(
        (0.9..=1.1).contains(&ratio),
        format!("mean {mean:.3} Stuns per 9-card board, expected {expected:.3}, ratio {ratio:.4}"),
    )
}

fn c14_large_deck() -> Outcome {
    let start = Instant::now();
    let spec = DeckSpec::new(4, 9).map_err(|e| e.to_string())?;
    let counts = count_classes_cycle_index(&spec, 11).map_err(|e| e.to_string())?;
    let value = counts[11].to_string();
    let leading: f64 = format!("{}.{}", &value[..1], &value[1..4]).parse().unwrap();
    let rounded = format!("{leading:.2}e{}", value.len() - 1);
    ensure(rounded == "1.08e34", format!("{value} ~ {rounded}, {:.2?}", start.elapsed()))
}

fn main() {
    let spec = DeckSpec::standard();
    let caps = Caps::default();
    let start = Instant::now();
    let group = SymmetryGroup::new(&spec, &caps).expect("standard group fits default caps");
    let build_time = start.elapsed();
    let start = Instant::now();
    let three = enumerate_classes(&group, 3, &caps).expect("three-card classes fit default caps");
    let three_time = start.elapsed() + build_time;
    let ctx = Ctx { spec, caps, group, build_time, three };

    let required: Vec<Criterion> = vec![
        ("two-card classes", Box::new(c1_two_card)),
        ("three-card classes", Box::new(move |c| c2_three_card(c, three_time))),
        ("Set counts", Box::new(c3_sets)),
        ("Stun counts", Box::new(c4_stuns)),
        ("Soot count", Box::new(c5_soots)),
        ("group and stabilizers", Box::new(c6_group)),
        ("Burnside table", Box::new(c7_burnside)),
        ("oracle agreement", Box::new(c8_oracles)),
        ("symbol vs canonical form", Box::new(c9_theorem)),
        ("group invariance", Box::new(c10_invariance)),
        ("stun-free certificate", Box::new(c11_stun_free)),
        ("automorphism e-rule", Box::new(c12_e_rule)),
        ("Monte Carlo Stuns per board", Box::new(c13_monte_carlo)),
    ];

    let mut failures = 0;
    for (i, (name, run)) in required.iter().enumerate() {
        match run(&ctx) {
            Ok(detail) => println!("PASS criterion {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL criterion {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    match c14_large_deck() {
        Ok(detail) => println!("PASS criterion 14 D(4^9) eleven-card classes (stretch): {detail}"),
        Err(detail) => println!("FAIL criterion 14 D(4^9) eleven-card classes (stretch): {detail}"),
    }

    if failures > 0 {
        println!("{failures} required criteria failed");
        std::process::exit(1);
    }
    println!("all required criteria passed");
}
