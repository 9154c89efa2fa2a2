use std::path::PathBuf;

use proptest::prelude::*;
use serde_json::Value;
use sieveforge::fixtures;
use sieveforge_cli::model::{assignment_rows, lattice_block, AssignmentBody, Block, BlockKind, Body};
use sieveforge_cli::{parse_document, parse_model, run, serialize, ModelDocument, ModelError};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .display()
        .to_string()
}

fn json(args: &[&str]) -> (i32, Value) {
    let out = run(args.iter().copied());
    let v = serde_json::from_str(&out.stdout).unwrap_or(Value::Null);
    (out.code, v)
}

#[test]
fn every_fixture_round_trips() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    for entry in std::fs::read_dir(dir).unwrap() {
        let text = std::fs::read_to_string(entry.unwrap().path()).unwrap();
        let doc = parse_document(&text).unwrap();
        assert_eq!(parse_document(&serialize(&doc)).unwrap(), doc);
        assert_eq!(serialize(&parse_document(&serialize(&doc)).unwrap()), serialize(&doc));
    }
}

#[test]
fn fixture_models_match_library_fixtures() {
    let ws = parse_model(&std::fs::read_to_string(fixture("twopt.model")).unwrap(), 1 << 20).unwrap();
    assert_eq!(ws.carrier("TWOPT").unwrap().cat(), &fixtures::twopt());
    let ws = parse_model(&std::fs::read_to_string(fixture("sq.model")).unwrap(), 1 << 20).unwrap();
    assert_eq!(ws.carrier("SQ").unwrap().lattice().unwrap(), &fixtures::sq());
}

#[test]
fn exit_codes() {
    let chain = fixture("chain3.model");
    let twopt = fixture("twopt.model");
    assert_eq!(json(&["check", "topology", &chain]).0, 0);
    assert_eq!(json(&["check", "topology", &twopt, "--name", "J0"]).0, 0);
    assert_eq!(json(&["check", "topology", &twopt, "--name", "JX"]).0, 1);
    assert_eq!(json(&["check", "category", &fixture("broken.model")]).0, 1);
    assert_eq!(json(&["check", "lattice", &fixture("m3.model")]).0, 0);
    assert_eq!(json(&["check", "topology", &fixture("missing.model")]).0, 2);
    assert_eq!(json(&["check", "topology", &chain, "--name", "NOPE"]).0, 2);
    assert_eq!(run(["frobnicate"]).code, 2);
    assert_eq!(run(["--help"]).code, 0);
}

#[test]
fn failures_carry_witness_and_replay() {
    let twopt = fixture("twopt.model");
    let (code, v) = json(&["check", "topology", &twopt, "--name", "JX"]);
    assert_eq!(code, 1);
    let check = &v["checks"][0];
    assert_eq!(check["status"], "fail");
    assert_eq!(check["witness"]["axiom"], "T2-stability");
    let replay = check["replay"].as_str().unwrap();
    let args: Vec<&str> = replay.split(' ').skip(1).collect();
    assert_eq!(run(args).code, 1);
}

#[test]
fn syntax_and_validation_errors_exit_two() {
    let dir = std::env::temp_dir().join(format!("sieveforge-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.model");
    std::fs::write(&bad, "lattice L\n  elements 0 1\n  order 0\nend\n").unwrap();
    let (code, v) = json(&["check", "lattice", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "SyntaxError");
    std::fs::write(&bad, "lattice L\n  elements 0 1\n  order 0 1\nend\ntopology J on L\n  sieve 1 : 1\nend\n").unwrap();
    let (code, v) = json(&["check", "topology", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "ValidationError");
    assert_eq!(v["error"]["witness"]["axiom"], "sieve-closure");
}

#[test]
fn compactness_and_convergence_reports() {
    let twopt = fixture("twopt.model");
    let (code, v) = json(&["compact", &twopt, "--topology", "JXY", "--object", "C"]);
    assert_eq!(code, 0);
    assert_eq!(v["data"]["hausdorff"], true);
    let (code, v) = json(&["compact", &twopt, "--topology", "J0", "--object", "C", "--method", "exhaustive"]);
    assert_eq!(code, 1);
    assert_eq!(v["data"]["hausdorff"], false);
    let (_, v) = json(&["cluster", &twopt, "--topology", "JXY", "--filter", "TRIVIAL", "--object", "C"]);
    assert_eq!(v["data"]["cluster_points"], serde_json::json!(["x", "y"]));
    let (_, v) = json(&["closure", &twopt, "--topology", "JXY", "--object", "C", "--sieve", "x,a"]);
    assert_eq!(v["data"]["closure"], serde_json::json!(["x"]));
    let (code, _) = json(&["converge", &twopt, "--topology", "J0", "--filter", "TRIVIAL", "--object", "C", "--point", "px"]);
    assert_eq!(code, 0);
}

#[test]
fn enumeration_counts() {
    let (_, v) = json(&["enumerate", "filters", &fixture("twopt.model")]);
    assert_eq!(v["data"]["count"], 2);
    let (_, v) = json(&["enumerate", "ultrafilters", &fixture("twopt.model")]);
    assert_eq!(v["data"]["count"], 1);
    let (_, v) = json(&["enumerate", "points", &fixture("sq.model"), "--element", "bot"]);
    assert_eq!(v["data"]["points"]["bot"].as_array().unwrap().len(), 2);
}

#[test]
fn timing_only_on_request() {
    let chain = fixture("chain3.model");
    let (_, v) = json(&["check", "topology", &chain]);
    assert!(v.get("timing_ms").is_none());
    let (_, v) = json(&["check", "topology", &chain, "--timing"]);
    assert!(v["timing_ms"].is_number());
}

#[test]
fn budget_env_and_flag() {
    let twopt = fixture("twopt.model");
    let (code, v) = json(&["enumerate", "filters", &twopt, "--budget", "0"]);
    assert_eq!(code, 2, "{v}");
    assert_eq!(json(&["enumerate", "filters", &twopt, "--budget", "1000"]).0, 0);
}

#[test]
fn unresolved_reference() {
    let err = parse_model("topology J on NOWHERE\nend\n", 16).unwrap_err();
    assert!(matches!(err, ModelError::UnresolvedReference { line: 1, .. }));
}

fn random_doc(seed: u64, n: usize, bits: u64) -> Option<ModelDocument> {
    let l = sieveforge::laws::random_locales(seed, 1, n).into_iter().next()?;
    let mut blocks = vec![lattice_block("L", &l)];
    let car = sieveforge::Carrier::locale(l, 1 << 20).ok()?;
    let mut a = sieveforge::CoverAssignment::empty(&car);
    for c in car.objects() {
        for s in car.sieve_ids(c) {
            if bits >> ((c.0 * 7 + s) % 64) & 1 == 1 {
                a.insert(c, s);
            }
        }
    }
    blocks.push(Block {
        name: "A".into(),
        body: Body::Assignment {
            kind: BlockKind::Filter,
            on: "L".into(),
            body: AssignmentBody::Rows(assignment_rows(&a)),
        },
        line: 0,
    });
    Some(ModelDocument { blocks })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn random_documents_round_trip(seed in any::<u64>(), n in 1usize..=6, bits in any::<u64>()) {
        let Some(doc) = random_doc(seed, n, bits) else { return Ok(()) };
        let text = serialize(&doc);
        let parsed = parse_document(&text).unwrap();
        prop_assert_eq!(&parsed, &doc);
        let ws = parse_model(&text, 1 << 20).unwrap();
        prop_assert_eq!(ws.document, doc);
    }
}
