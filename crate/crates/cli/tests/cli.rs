use std::path::{Path, PathBuf};
use std::process::{Command as Process, Output};

use coarsekit::Distance;
use coarsekit_cli::{parse_input, run_command, Command, ExportKind, Options, ProblemSpec};

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name)
}

fn load(name: &str) -> ProblemSpec {
    parse_input(&std::fs::read_to_string(corpus(name)).unwrap()).unwrap()
}

fn run(args: &[&str]) -> Output {
    Process::new(env!("CARGO_BIN_EXE_coarsekit")).args(args).output().unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn z12_cycle_golden_parse() {
    let spec = load("z12-cycle.cgk");
    assert_eq!(spec.group.name(), "Z12");
    let space = spec.space.as_ref().unwrap();
    assert_eq!(space.len(), 12);
    assert!(space.is_genuine());
    let labels: Vec<&str> = (0..12).map(|i| space.label(i)).collect();
    assert_eq!(labels, ["0", "1", "2", "3", "4", "5", "6", "7", "8", "9", "10", "11"]);
    assert_eq!(space.distance(0, 6), Distance::from_int(6));
    assert_eq!(space.distance(1, 11), Distance::from_int(2));
    let a = spec.action.as_ref().unwrap();
    assert_eq!(a.elements().len(), 12);
    let rot3 = spec.group.parse_element("g1^3").unwrap();
    assert_eq!(a.act(&rot3, 2).unwrap(), 5);
    assert_eq!(spec.param("M"), Some("3/2"));
    assert_eq!(spec.param("x"), Some("0"));
    assert_eq!(spec.set("E").unwrap().len(), 1);
}

#[test]
fn every_corpus_file_parses() {
    for entry in std::fs::read_dir(corpus("")).unwrap() {
        let p = entry.unwrap().path();
        if p.extension().is_some_and(|e| e == "cgk") {
            let text = std::fs::read_to_string(&p).unwrap();
            parse_input(&text).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
        }
    }
}

#[test]
fn word_metric_csv_on_s3() {
    let spec = load("s3.cgk");
    let r = run_command(&spec, Command::WordMetric, &Options::default()).unwrap();
    assert!(r.passed());
    let csv = r.export(ExportKind::Csv).unwrap();
    let d = coarsekit::PseudoMetric::<String>::from_csv(csv).unwrap();
    let e = d.points().iter().position(|p| p == "e").unwrap();
    let t = d.points().iter().position(|p| p == "(1 3)").unwrap();
    assert_eq!(d.get(e, t), Distance::from_int(3));
}

#[test]
fn ray_tree_on_z8_reports_six() {
    let spec = load("z8-chain.cgk");
    let r = run_command(&spec, Command::RayTree, &Options::default()).unwrap();
    let one = spec.group.generators()[0].to_string();
    let text = r.full_report().to_text();
    let line = text
        .lines()
        .find(|l| l.trim_start().starts_with(&format!("- {one}:")))
        .unwrap();
    assert!(line.contains("distance 6"), "{line}");
    assert!(line.contains("display 14"), "{line}");
}

#[test]
fn validate_passes_on_every_produced_metric() {
    for name in ["s3.cgk", "z12-cycle.cgk", "s4-chain.cgk", "z-interval.cgk"] {
        let r = run_command(&load(name), Command::Validate, &Options::default()).unwrap();
        assert!(r.passed(), "{name}: {:?}", r.checks);
        assert!(!r.checks.is_empty());
    }
}

#[test]
fn missing_sections_are_usage_errors() {
    let spec = load("z12-cycle.cgk");
    let err = run_command(&spec, Command::RayTree, &Options::default()).unwrap_err();
    assert!(err.to_string().contains("@chain"), "{err}");
    let err = run_command(&spec, Command::BkMetric, &Options::default()).unwrap_err();
    assert!(err.to_string().contains("@filtration"), "{err}");
}

#[test]
fn radius_flag_overrides_parameter() {
    let spec = load("z12-cycle.cgk");
    let opts = Options {
        radius: Some("0".into()),
        ..Options::default()
    };
    let r = run_command(&spec, Command::Macbeath, &opts).unwrap();
    assert_eq!(r.report.get("macbeath-set").unwrap(), "{e}");
    assert!(!r.passed());
}

#[test]
fn exit_codes() {
    let ok = run(&["word-metric", path_str(&corpus("s3.cgk"))]);
    assert_eq!(ok.status.code(), Some(0));
    let text = String::from_utf8(ok.stdout).unwrap();
    assert!(text.ends_with("verdict: pass\n"), "{text}");

    // A Macbeath set at radius 0 does not generate: a finding, not a crash.
    let fail = run(&["macbeath", path_str(&corpus("z12-cycle.cgk")), "--radius", "0"]);
    assert_eq!(fail.status.code(), Some(1));

    let usage = run(&["ray-tree", path_str(&corpus("z12-cycle.cgk"))]);
    assert_eq!(usage.status.code(), Some(2));
    assert!(String::from_utf8(usage.stderr).unwrap().contains("@chain"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cgk");
    std::fs::write(&bad, "@group\nperm 3\ngen (1 4)\n").unwrap();
    let parse = run(&["validate", path_str(&bad)]);
    assert_eq!(parse.status.code(), Some(2));
    assert!(String::from_utf8(parse.stderr).unwrap().contains("line 3"));
}

#[test]
fn out_directory_holds_report_and_exports() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = run(&[
        "coset-graph",
        path_str(&corpus("s3-coset.cgk")),
        "--out",
        path_str(&out),
        "--export",
        "dot,csv,json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let dot = std::fs::read_to_string(out.join("coset-graph.dot")).unwrap();
    assert!(dot.starts_with("graph \"S3\" {"), "{dot}");
    let csv = std::fs::read_to_string(out.join("coset-graph.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("source,target,weight"));
    assert_eq!(csv.lines().count(), 4);
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("coset-graph.json")).unwrap()).unwrap();
    assert_eq!(json["verdict"], "pass");
    let report = std::fs::read_to_string(out.join("report.txt")).unwrap();
    assert!(report.starts_with("command: coset-graph\n"));
}

#[test]
fn stdout_exports_follow_the_report() {
    let o = run(&["ray-tree", path_str(&corpus("z8-chain.cgk")), "--export", "dot"]);
    let text = String::from_utf8(o.stdout).unwrap();
    let (report, dot) = text.split_once("=== ray-tree.dot ===\n").unwrap();
    assert!(report.contains("verdict: pass"));
    assert!(dot.contains("\"[1,2,3,4,5,6,7,8]G2\" -- \"[1,2,3,4,5,6,7,8]G3\" [weight=\"2\"];"));
}

#[test]
fn resolve_on_a_point() {
    // The trivial group on its one-point Cayley graph.
    let doc = "@group\nname trivial\nperm 1\ngen e\n@set E subgroup\ne\n@space\ncayley E\n@action\nleft-regular\n@params\nM 1\n";
    let spec = parse_input(doc).unwrap();
    assert_eq!(spec.space.as_ref().unwrap().len(), 1);
    let r = run_command(&spec, Command::Resolve, &Options::default()).unwrap();
    assert!(r.passed(), "{:?}", r.checks);
    let stages = r.report.get_section("stages").unwrap();
    assert_eq!(stages.get_section("graph").unwrap().get("vertices"), Some("1"));
    assert_eq!(stages.get("proper-set-diameter"), Some("0"));
}
