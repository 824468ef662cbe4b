use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use setdeck::text::{parse_element, parse_hand};
use setdeck::{DeckSpec, GroupElement};

fn run_with(args: &[&str], stdin: Option<&str>, threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_setdeck"));
    cmd.args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped());
    if let Some(t) = threads {
        cmd.env("RAYON_NUM_THREADS", t);
    }
    let mut child = cmd.spawn().expect("binary runs");
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn run(args: &[&str]) -> Output {
    run_with(args, None, None)
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn classify_examples() {
    let set = stdout(&run(&["classify", "0000", "1111", "2222"]));
    assert!(set.contains("symbol: (0;0,0,0)"));
    assert!(set.contains("size: 216"));

    let single = stdout(&run(&["classify", "0000"]));
    assert!(single.contains("size: 81"));

    // |G| / |Stab| with the stabilizer counted by brute force in the library's own tests.
    let four = stdout(&run(&["classify", "0000 0001 0002 1110"]));
    assert!(!four.contains("symbol"));
    assert!(four.contains("representative: "));
    let size: u64 = four.lines().find_map(|l| l.strip_prefix("size: ")).unwrap().parse().unwrap();
    assert_eq!(31_104 % size, 0);
}

#[test]
fn iso_constructed_pair_has_valid_witness() {
    let spec = DeckSpec::standard();
    let g = parse_element(&spec, "psi=2013;theta_0=012;theta_1=210;theta_2=201;theta_3=201").unwrap();
    let h = parse_hand(&spec, "0000 0121 1202 2220 1111").unwrap();
    let gh = g.apply_to_hand(&h).unwrap();
    let a = setdeck::text::format_hand(&h);
    let b = setdeck::text::format_hand(&gh);
    let out = stdout(&run(&["iso", &a, &b]));
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("isomorphic"));
    let element: GroupElement = parse_element(&spec, lines.next().unwrap()).unwrap();
    let mut mapped = 0;
    for line in lines {
        let (x, y) = line.split_once("->").unwrap();
        let x = setdeck::text::parse_card(&spec, x).unwrap();
        let y = setdeck::text::parse_card(&spec, y).unwrap();
        assert!(h.contains_card(&x) && gh.contains_card(&y));
        assert_eq!(element.apply(&x).unwrap(), y);
        mapped += 1;
    }
    assert_eq!(mapped, 5);
}

#[test]
fn iso_rejects_sets_of_different_type() {
    // (1;0,0,0) and (2;0,0,0)
    let out = stdout(&run(&["iso", "0000 0111 0222", "0000 0011 0022"]));
    assert!(out.starts_with("not isomorphic\n"));
    assert!(out.contains("splitting"));
}

#[test]
fn iso_self_is_identity() {
    let out = stdout(&run(&["iso", "0102 2211", "0102 2211"]));
    assert!(out.contains("psi=0123;theta_0=012;theta_1=012;theta_2=012;theta_3=012"));
}

#[test]
fn table_and_burnside() {
    assert_eq!(stdout(&run(&["table", "0..4"])), "0 1\n1 1\n2 4\n3 20\n4 144\n");
    assert_eq!(stdout(&run(&["--k", "1", "--d", "1", "burnside"])), "0 1\n1 1\n");

    let quads = stdout(&run(&["--k", "4", "--d", "3", "burnside"]));
    let counts: Vec<&str> = quads.lines().map(|l| l.split_once(' ').unwrap().1).collect();
    assert_eq!(counts.len(), 65);
    assert!(counts.iter().eq(counts.iter().rev()));

    let listed = stdout(&run(&["table", "2", "--classes"]));
    assert_eq!(listed.lines().count(), 5);
}

#[test]
fn cycle_index_matches_elementwise() {
    let full = stdout(&run(&["burnside"]));
    let head = stdout(&run(&["burnside", "--max-n", "6"]));
    assert!(full.starts_with(&head));
}

#[test]
fn count_formats() {
    assert!(stdout(&run(&["count", "set"])).starts_with("1080 (1/79)"));
    let stun = stdout(&run(&["count", "stun"]));
    assert!(stun.starts_with("16848 "));
    assert!(stun.contains("(~0.1975)"));
    assert!(stdout(&run(&["count", "symbol:(0;0,1,2)"])).starts_with("15552 "));
}

#[test]
fn inducers_on_empty_map() {
    let map = temp_file("empty.map", "# nothing\n");
    let out = stdout(&run(&["inducers", "", "", map.to_str().unwrap(), "--count-only"]));
    assert_eq!(out, "31104\n");
}

#[test]
fn inducers_for_single_card() {
    let map = temp_file("one.map", "0000->1212\n");
    let out = stdout(&run(&["inducers", "0000", "1212", map.to_str().unwrap()]));
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("384"));
    let spec = DeckSpec::standard();
    let x = setdeck::text::parse_card(&spec, "0000").unwrap();
    let y = setdeck::text::parse_card(&spec, "1212").unwrap();
    let elements: Vec<GroupElement> = lines.map(|l| parse_element(&spec, l).unwrap()).collect();
    assert_eq!(elements.len(), 384);
    assert!(elements.iter().all(|g| g.apply(&x).unwrap() == y));
}

#[test]
fn find_and_partition_from_stdin() {
    let board = "0000 0111 1011 2222 2100 1200 1111 1222 2122 # three Stuns\n";
    let found = stdout(&run_with(&["find", "-", "--goal", "stun"], Some(board), None));
    let spec = DeckSpec::standard();
    for line in found.lines() {
        let cards: Vec<_> = parse_hand(&spec, line).unwrap().cards().collect();
        assert!(setdeck::games::is_stun(&spec, &cards).unwrap());
    }
    let parts = stdout(&run_with(&["partition", "-", "--goal", "stun"], Some(board), None));
    assert_eq!(parts.lines().count(), 3);
    let none = stdout(&run_with(&["partition", "-", "--goal", "set"], Some(board), None));
    assert_eq!(none, "none\n");
}

#[test]
fn json_hands_round_trip() {
    let spec = DeckSpec::standard();
    let out = stdout(&run(&["--json", "deal", "15", "--seed", "3"]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let text = v["board"].as_str().unwrap();
    let board = parse_hand(&spec, text).unwrap();
    assert_eq!(board.len(), 15);
    assert_eq!(setdeck::text::format_hand(&board), text);

    let found = stdout(&run_with(&["--json", "find", "-"], Some(text), None));
    let hands: Vec<String> = serde_json::from_str(&found).unwrap();
    for h in hands {
        assert_eq!(setdeck::text::format_hand(&parse_hand(&spec, &h).unwrap()), h);
    }

    let rec: serde_json::Value = serde_json::from_str(&stdout(&run(&["--json", "classify", "0000 1111 2222"]))).unwrap();
    assert_eq!(rec["size"], 216);
    assert_eq!(rec["symbol"], "(0;0,0,0)");
    let rep = rec["representative"].as_str().unwrap();
    assert_eq!(setdeck::text::format_hand(&parse_hand(&spec, rep).unwrap()), rep);
}

#[test]
fn output_is_independent_of_thread_count() {
    let board = stdout(&run(&["deal", "12", "--seed", "11"]));
    for args in [&["find", "-", "--goal", "soot"][..], &["iso", "0000 0112 2101", "1111 1220 0212"][..]] {
        let one = run_with(args, Some(&board), Some("1"));
        let many = run_with(args, Some(&board), Some("4"));
        assert_eq!(stdout(&one), stdout(&many));
    }
    assert_eq!(board, stdout(&run(&["deal", "12", "--seed", "11"])));
    assert_ne!(board, stdout(&run(&["deal", "12", "--seed", "12"])));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["classify", "0003"]).status.code(), Some(2));
    assert_eq!(run(&["classify", "0000", "0000"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["--cap-group", "100", "classify", "0000"]).status.code(), Some(3));
    assert_eq!(run(&["--k", "4", "--d", "9", "burnside"]).status.code(), Some(3));
    let bad = temp_file("bad.map", "0000 1111\n");
    assert_eq!(run(&["inducers", "0000", "1111", bad.to_str().unwrap()]).status.code(), Some(2));
    let err = String::from_utf8(run(&["classify", "0000 0003"]).stderr).unwrap();
    assert!(err.contains("parse error at 8"), "{err}");
}

#[test]
fn verify_passes() {
    let out = stdout(&run(&["verify"]));
    assert!(out.lines().all(|l| l.starts_with("PASS ")));
    assert!(out.contains("3240") && out.contains("85320") && out.contains("1080") && out.contains("16848"));
    assert!(out.contains("144 = 144"));
}
