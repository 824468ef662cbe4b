use std::fmt::Write as _;
use std::io::Read as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use setdeck::burnside::{count_classes_burnside, count_classes_cycle_index};
use setdeck::classification::{class_of, enumerate_classes, ClassRecord};
use setdeck::games::{count_over_deck, deal, find_matches, partition_into_goals, Goal, GoalCount, GoalSpec};
use setdeck::isomorphism::{find_witness, inducers, splitting_profile};
use setdeck::text::{card_to_string, format_element, format_hand, parse_card_at, parse_hand};
use setdeck::verify::run_battery;
use setdeck::{Caps, Card, DeckSpec, Error, Hand, SymmetryGroup};

/// Isomorphism classes, orbit counts and goal games for SET-style decks.
#[derive(Debug, Parser)]
#[command(name = "setdeck", version)]
struct Cli {
    /// Values per attribute.
    #[arg(long, global = true, default_value_t = 3)]
    k: u32,
    /// Number of attributes.
    #[arg(long, global = true, default_value_t = 4)]
    d: u32,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for dealing.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest group that may be tabulated.
    #[arg(long, global = true)]
    cap_group: Option<u64>,
    /// Largest number of subsets an exhaustive scan may visit.
    #[arg(long, global = true)]
    cap_subsets: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Canonical representative, class size and (for triples) symbol of a hand.
    Classify {
        /// Card tokens, e.g. `0000 1111 2222`.
        #[arg(required = true, num_args = 1..)]
        hand: Vec<String>,
    },
    /// Decide whether two hands are isomorphic and print a witness.
    Iso {
        /// First hand, quoted.
        a: String,
        /// Second hand, quoted.
        b: String,
    },
    /// Number of n-card classes for a range such as `0..4` or `3`.
    Table {
        #[arg(default_value = "0..4")]
        range: String,
        /// Also list every class by exhaustive enumeration.
        #[arg(long)]
        classes: bool,
    },
    /// Class counts for every hand size.
    Burnside {
        /// Use the cycle index of the group and stop at this hand size.
        #[arg(long)]
        max_n: Option<usize>,
    },
    /// Goal hands on a board.
    Find {
        /// Board file (`-` for stdin).
        board: String,
        #[arg(long, default_value = "set")]
        goal: String,
    },
    /// Deal a board from the seeded generator.
    Deal {
        #[arg(default_value_t = 12)]
        size: usize,
    },
    /// Split a board into disjoint goal hands.
    Partition {
        /// Board file (`-` for stdin).
        board: String,
        #[arg(long, default_value = "set")]
        goal: String,
    },
    /// Deck-wide count and probability of a goal.
    Count {
        /// set, stun, quad, soot, symbol:(t;p,q,r) or class:<hand>
        goal: String,
    },
    /// Every group element inducing a given card map.
    Inducers {
        a: String,
        b: String,
        /// File of `x->y` lines (`-` for stdin).
        mapping: String,
        /// Print only the number of inducers.
        #[arg(long)]
        count_only: bool,
    },
    /// Run the check battery for the standard deck.
    Verify,
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Usage(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Run = Result<String, Failure>;

struct Env {
    spec: DeckSpec,
    caps: Caps,
    json: bool,
    seed: u64,
}

impl Env {
    fn group(&self) -> Result<SymmetryGroup, Failure> {
        Ok(SymmetryGroup::new(&self.spec, &self.caps)?)
    }

    fn goal_spec(&self, text: &str) -> Result<GoalSpec, Failure> {
        Ok(GoalSpec::parse(&self.spec, text)?)
    }
}

fn read_input(path: &str) -> Result<String, Failure> {
    let mut text = String::new();
    let res = if path == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| Failure::Usage(format!("cannot read {path}: {e}")))?;
    Ok(text)
}

fn parse_mapping(spec: &DeckSpec, text: &str) -> Result<Vec<(Card, Card)>, Failure> {
    let mut pairs = Vec::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let body = line.split('#').next().unwrap_or("");
        if !body.trim().is_empty() {
            let (x, y) = body
                .split_once("->")
                .ok_or_else(|| Error::Parse { pos: offset, msg: "expected x->y".into() })?;
            let y_pos = offset + x.len() + 2;
            pairs.push((parse_card_at(spec, x.trim(), offset)?, parse_card_at(spec, y.trim(), y_pos)?));
        }
        offset += line.len();
    }
    Ok(pairs)
}

fn parse_range(text: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::Usage(format!("invalid range {text:?}; expected n or a..b"));
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().trim_start_matches('=').parse().map_err(|_| bad())?),
        None => {
            let n = text.trim().parse().map_err(|_| bad())?;
            (n, n)
        }
    };
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn record_json(r: &ClassRecord) -> Value {
    json!({
        "representative": format_hand(&r.representative),
        "size": r.size,
        "symbol": r.symbol.map(|s| s.to_string()),
    })
}

fn hands_json(hands: &[Hand]) -> Value {
    Value::Array(hands.iter().map(|h| Value::String(format_hand(h))).collect())
}

fn render(value: Value) -> String {
    serde_json::to_string_pretty(&value).expect("values serialize") + "\n"
}

fn classify(env: &Env, tokens: &[String]) -> Run {
    let hand = parse_hand(&env.spec, &tokens.join(" "))?;
    let group = env.group()?;
    let record = class_of(&group, &hand)?;
    if env.json {
        return Ok(render(record_json(&record)));
    }
    let mut out = String::new();
    writeln!(out, "representative: {}", format_hand(&record.representative)).unwrap();
    writeln!(out, "size: {}", record.size).unwrap();
    if let Some(s) = record.symbol {
        writeln!(out, "symbol: {s}").unwrap();
    }
    Ok(out)
}

/// One attribute splitting of `a` that `b` lacks (or vice versa).
fn distinguishing_split(a: &Hand, b: &Hand) -> Option<(char, Vec<usize>)> {
    let mut pa = splitting_profile(a);
    let mut pb = splitting_profile(b);
    pa.sort();
    pb.sort();
    for split in &pa {
        let (ca, cb) = (pa.iter().filter(|s| *s == split).count(), pb.iter().filter(|s| *s == split).count());
        if ca > cb {
            return Some(('A', split.clone()));
        }
    }
    pb.into_iter().find(|s| !pa.contains(s)).map(|s| ('B', s))
}

fn split_text(split: &[usize]) -> String {
    let parts: Vec<String> = split.iter().map(|p| p.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

fn iso(env: &Env, a: &str, b: &str) -> Run {
    let a = parse_hand(&env.spec, a)?;
    let b = parse_hand(&env.spec, b)?;
    let group = env.group()?;
    let witness = find_witness(&group, &a, &b)?;
    let reason = match (&witness, a.len() == b.len()) {
        (Some(_), _) => None,
        (None, false) => Some(format!("hands have {} and {} cards", a.len(), b.len())),
        (None, true) => Some(match distinguishing_split(&a, &b) {
            Some((side, split)) => format!(
                "hand {side} has more attributes splitting as {} than the other hand",
                split_text(&split)
            ),
            None => "no splitting signature distinguishes them".to_string(),
        }),
    };
    if env.json {
        return Ok(render(match &witness {
            Some(w) => json!({
                "isomorphic": true,
                "element": format_element(&w.element),
                "mapping": w.mapping.iter().map(|(x, y)| json!([card_to_string(x), card_to_string(y)])).collect::<Vec<_>>(),
            }),
            None => json!({ "isomorphic": false, "reason": reason }),
        }));
    }
    Ok(match witness {
        Some(w) => format!("isomorphic\n{}\n", w.to_text()),
        None => format!("not isomorphic\n{}\n", reason.unwrap_or_default()),
    })
}

fn table(env: &Env, range: &str, list: bool) -> Run {
    let (lo, hi) = parse_range(range)?;
    let size = env.spec.size() as usize;
    if hi > size {
        return Err(Failure::Usage(format!("hand size {hi} exceeds the {size}-card deck")));
    }
    let group = env.group()?;
    let counts = count_classes_burnside(&group);
    let mut rows = Vec::new();
    for n in lo..=hi {
        let classes = if list { Some(enumerate_classes(&group, n, &env.caps)?) } else { None };
        rows.push((n, counts[n].clone(), classes));
    }
    if env.json {
        let rows: Vec<Value> = rows
            .iter()
            .map(|(n, c, classes)| {
                let mut row = json!({ "n": n, "classes": c.to_string() });
                if let Some(list) = classes {
                    row["list"] = Value::Array(list.iter().map(record_json).collect());
                }
                row
            })
            .collect();
        return Ok(render(Value::Array(rows)));
    }
    let mut out = String::new();
    for (n, c, classes) in rows {
        writeln!(out, "{n} {c}").unwrap();
        for r in classes.iter().flatten() {
            writeln!(out, "  {}", r.to_line()).unwrap();
        }
    }
    Ok(out)
}

fn burnside(env: &Env, max_n: Option<usize>) -> Run {
    let counts = match max_n {
        Some(n) => count_classes_cycle_index(&env.spec, n)?,
        None => count_classes_burnside(&env.group()?),
    };
    if env.json {
        return Ok(render(Value::Array(counts.iter().map(|c| Value::String(c.to_string())).collect())));
    }
    let mut out = String::new();
    for (n, c) in counts.iter().enumerate() {
        writeln!(out, "{n} {c}").unwrap();
    }
    Ok(out)
}

/// Group for class goals only; the built-in predicates need none.
fn goal_group(env: &Env, goal: &GoalSpec) -> Result<Option<SymmetryGroup>, Failure> {
    match goal {
        GoalSpec::ClassOf(_) => Ok(Some(env.group()?)),
        _ => Ok(None),
    }
}

fn find(env: &Env, board: &str, goal: &str) -> Run {
    let board = parse_hand(&env.spec, &read_input(board)?)?;
    let goal = env.goal_spec(goal)?;
    let group = goal_group(env, &goal)?;
    let goal = Goal::new(&env.spec, &goal, group.as_ref())?;
    let found = find_matches(&board, &goal, &env.caps)?;
    if env.json {
        return Ok(render(hands_json(&found)));
    }
    Ok(found.iter().map(|h| format_hand(h) + "\n").collect())
}

fn deal_board(env: &Env, size: usize) -> Run {
    let board = deal(&env.spec, size, env.seed, &env.caps)?;
    if env.json {
        return Ok(render(json!({ "seed": env.seed, "board": format_hand(&board) })));
    }
    Ok(format_hand(&board) + "\n")
}

fn partition(env: &Env, board: &str, goal: &str) -> Run {
    let board = parse_hand(&env.spec, &read_input(board)?)?;
    let goal = env.goal_spec(goal)?;
    let group = goal_group(env, &goal)?;
    let goal = Goal::new(&env.spec, &goal, group.as_ref())?;
    let parts = partition_into_goals(&board, &goal)?;
    if env.json {
        return Ok(render(parts.as_deref().map_or(Value::Null, hands_json)));
    }
    Ok(match parts {
        Some(parts) => parts.iter().map(|h| format_hand(h) + "\n").collect(),
        None => "none\n".to_string(),
    })
}

fn count_line(c: &GoalCount) -> String {
    format!("{} ({}) (~{:.4})", c.count, c.probability, c.approx())
}

fn count(env: &Env, goal: &str) -> Run {
    let goal = env.goal_spec(goal)?;
    let group = goal_group(env, &goal)?;
    let goal = Goal::new(&env.spec, &goal, group.as_ref())?;
    let c = count_over_deck(&goal, &env.caps)?;
    if env.json {
        return Ok(render(json!({
            "count": c.count,
            "total": c.total,
            "probability": c.probability.to_string(),
            "approx": format!("{:.4}", c.approx()),
        })));
    }
    Ok(count_line(&c) + "\n")
}

fn list_inducers(env: &Env, a: &str, b: &str, mapping: &str, count_only: bool) -> Run {
    let a = parse_hand(&env.spec, a)?;
    let b = parse_hand(&env.spec, b)?;
    let map = parse_mapping(&env.spec, &read_input(mapping)?)?;
    let group = env.group()?;
    let found = inducers(&group, &a, &b, &map)?;
    if env.json {
        let mut v = json!({ "count": found.len() });
        if !count_only {
            v["elements"] = Value::Array(found.iter().map(|g| Value::String(format_element(g))).collect());
        }
        return Ok(render(v));
    }
    let mut out = format!("{}\n", found.len());
    if !count_only {
        for g in &found {
            writeln!(out, "{}", format_element(g)).unwrap();
        }
    }
    Ok(out)
}

fn verify(env: &Env) -> Run {
    let checks = run_battery(&env.caps)?;
    let all = checks.iter().all(|c| c.passed);
    let out = if env.json {
        render(Value::Array(
            checks
                .iter()
                .map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail }))
                .collect(),
        ))
    } else {
        checks
            .iter()
            .map(|c| format!("{} {}: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail))
            .collect()
    };
    print!("{out}");
    if all {
        Ok(String::new())
    } else {
        Err(Failure::Verification)
    }
}

fn run(cli: Cli) -> Run {
    let spec = DeckSpec::new(cli.k, cli.d)?;
    let mut caps = Caps::default();
    if let Some(g) = cli.cap_group {
        caps.group = g;
    }
    if let Some(s) = cli.cap_subsets {
        caps.subsets = s;
    }
    let env = Env { spec, caps, json: cli.json, seed: cli.seed };
    match &cli.command {
        Command::Classify { hand } => classify(&env, hand),
        Command::Iso { a, b } => iso(&env, a, b),
        Command::Table { range, classes } => table(&env, range, *classes),
        Command::Burnside { max_n } => burnside(&env, *max_n),
        Command::Find { board, goal } => find(&env, board, goal),
        Command::Deal { size } => deal_board(&env, *size),
        Command::Partition { board, goal } => partition(&env, board, goal),
        Command::Count { goal } => count(&env, goal),
        Command::Inducers { a, b, mapping, count_only } => list_inducers(&env, a, b, mapping, *count_only),
        Command::Verify => verify(&env),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if matches!(e, Error::Capacity { .. }) { 3 } else { 2 })
        }
    }
}
