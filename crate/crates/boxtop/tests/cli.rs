//! End-to-end tests of the `boxtop` binary: exit codes, JSON witnesses on
//! standard output, determinism of generation, and the guarantee that an
//! independent `check` run reproduces a `refine` certificate byte for
//! byte.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_boxtop")
}

struct Workdir(PathBuf);

impl Workdir {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("boxtop-cli-{tag}-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        Workdir(dir)
    }

    fn file(&self, name: &str, content: &str) -> PathBuf {
        let path = self.0.join(name);
        fs::write(&path, content).unwrap();
        path
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.join(name)
    }
}

impl Drop for Workdir {
    fn drop(&mut self) {
        fs::remove_dir_all(&self.0).ok();
    }
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

fn run_paths<I: IntoIterator<Item = S>, S: AsRef<std::ffi::OsStr>>(args: I) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

fn stdout_json(output: &Output) -> serde_json::Value {
    serde_json::from_slice(&output.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {:?}",
            String::from_utf8_lossy(&output.stdout)
        )
    })
}

#[test]
fn check_passes_on_a_dense_antichain() {
    let dir = Workdir::new("check-ok");
    let family = dir.file("fam.txt", "0-\n1-\n");
    let out = run_paths([Path::new("check"), &family]);
    assert_eq!(out.status.code(), Some(0));
    let json = stdout_json(&out);
    assert_eq!(json["dense_ok"], true);
    assert_eq!(json["antichain_ok"], true);
}

#[test]
fn check_reports_antichain_witness() {
    let dir = Workdir::new("check-anti");
    let family = dir.file("fam.txt", "0-\n-1\n");
    let out = run_paths([
        Path::new("check"),
        Path::new("--props"),
        Path::new("antichain"),
        &family,
    ]);
    assert_eq!(out.status.code(), Some(1));
    let json = stdout_json(&out);
    assert_eq!(json["antichain_ok"], false);
    let pair = json["witnesses"]["antichain"].as_array().unwrap();
    assert_eq!(pair.len(), 2);
}

#[test]
fn check_reports_refinement_witness() {
    let dir = Workdir::new("check-ref");
    let base = dir.file("s.txt", "0-\n");
    let target = dir.file("r.txt", "1-\n");
    let out = run_paths([
        Path::new("check"),
        Path::new("--props"),
        Path::new("refines"),
        Path::new("--base"),
        &base,
        &target,
    ]);
    assert_eq!(out.status.code(), Some(1));
    let json = stdout_json(&out);
    assert_eq!(json["refines_ok"], false);
    assert_eq!(json["witnesses"]["refines"], "1-");
}

#[test]
fn malformed_input_exits_two() {
    let dir = Workdir::new("check-bad");
    let family = dir.file("fam.txt", "0-x\n");
    let out = run_paths([Path::new("check"), &family]);
    assert_eq!(out.status.code(), Some(2));
    let json = stdout_json(&out);
    assert_eq!(json["kind"], "input");

    let missing = dir.path("nope.txt");
    let out = run_paths([Path::new("check"), &missing]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn enumeration_limit_exits_three() {
    let dir = Workdir::new("check-limit");
    let family = dir.file("fam.txt", "0-----\n1-----\n");
    let out = Command::new(bin())
        .args(["check", "--mode", "exhaustive"])
        .arg(&family)
        .env("BOXTOP_ENUM_LIMIT", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let json = stdout_json(&out);
    assert_eq!(json["kind"], "resource");
}

#[test]
fn refine_certificate_is_reproduced_by_check() {
    let dir = Workdir::new("refine-check");
    let input = dir.file("in.txt", "1-\n-1\n00\n");
    let output = dir.path("out.txt");
    let refine = run_paths([
        Path::new("refine"),
        Path::new("--algo"),
        Path::new("disjointify"),
        Path::new("--out"),
        &output,
        &input,
    ]);
    assert_eq!(refine.status.code(), Some(0), "{refine:?}");
    assert_eq!(fs::read_to_string(&output).unwrap(), "1-\n01\n00\n");

    let check = run_paths([Path::new("check"), Path::new("--base"), &input, &output]);
    assert_eq!(check.status.code(), Some(0));
    assert_eq!(
        refine.stdout, check.stdout,
        "check must reproduce the refine certificate bit for bit"
    );
}

#[test]
fn refine_ladder_rejects_non_dense_input() {
    let dir = Workdir::new("refine-ladder");
    let input = dir.file("in.txt", "0-\n11\n");
    let output = dir.path("out.txt");
    let out = run_paths([
        Path::new("refine"),
        Path::new("--algo"),
        Path::new("ladder"),
        Path::new("--out"),
        &output,
        &input,
    ]);
    assert_eq!(out.status.code(), Some(1));
    let json = stdout_json(&out);
    assert_eq!(json["witness"], "10");
    assert_eq!(json["kind"], "semantic");
}

#[test]
fn refine_ladder_respects_the_order() {
    let dir = Workdir::new("refine-order");
    let input = dir.file("in.txt", "--1\n--0\n");
    let output = dir.path("out.txt");
    let out = run_paths([
        Path::new("refine"),
        Path::new("--algo"),
        Path::new("ladder"),
        Path::new("--order"),
        Path::new("2,0,1"),
        Path::new("--out"),
        &output,
        &input,
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(fs::read_to_string(&output).unwrap(), "--0\n--1\n");
}

#[test]
fn refine_rudin_end_to_end() {
    let dir = Workdir::new("refine-rudin");
    let input = dir.file(
        "cover.json",
        "{\"coords\":[2],\"boxes\":[[{\"t\":\"T\",\"a\":1}],[{\"t\":\"S\",\"v\":0}],[{\"t\":\"S\",\"v\":1}]]}",
    );
    let output = dir.path("boxes.json");
    let out = run_paths([
        Path::new("refine"),
        Path::new("--algo"),
        Path::new("rudin"),
        Path::new("--out"),
        &output,
        &input,
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let json = stdout_json(&out);
    assert_eq!(json["certificate"]["disjoint_ok"], true);
    assert_eq!(json["certificate"]["cover_ok"], true);
    let boxes: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&output).unwrap()).unwrap();
    assert_eq!(boxes["boxes"].as_array().unwrap().len(), 2);
}

#[test]
fn refine_sikorski_end_to_end() {
    let dir = Workdir::new("refine-sik");
    // Ordinal-style witness on {0, 1, top}.
    let witness = dir.file(
        "witness.json",
        concat!(
            "{\"points\":[\"0\",\"1\",\"top\"],\"levels\":3,\"U\":{",
            "\"0\":{\"0\":[\"0\",\"1\",\"top\"],\"1\":[\"0\"],\"2\":[\"0\"]},",
            "\"1\":{\"0\":[\"0\",\"1\",\"top\"],\"1\":[\"1\",\"top\"],\"2\":[\"1\"]},",
            "\"top\":{\"0\":[\"0\",\"1\",\"top\"],\"1\":[\"1\",\"top\"],\"2\":[\"top\"]}}}",
        ),
    );
    let cover = dir.file(
        "cover.json",
        "{\"points\":[\"0\",\"1\",\"top\"],\"sets\":[[\"0\"],[\"1\",\"top\"]]}",
    );
    let output = dir.path("cells.json");
    let out = run_paths([
        Path::new("refine"),
        Path::new("--algo"),
        Path::new("sikorski"),
        Path::new("--cover"),
        &cover,
        Path::new("--out"),
        &output,
        &witness,
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let json = stdout_json(&out);
    assert_eq!(json["disjoint_ok"], true);
    assert_eq!(json["cover_ok"], true);
    assert_eq!(json["refines_ok"], true);
    let cells: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&output).unwrap()).unwrap();
    assert_eq!(cells["cells"].as_array().unwrap().len(), 2);
}

#[test]
fn gen_is_deterministic_per_seed() {
    let dir = Workdir::new("gen-det");
    let first = dir.path("a.txt");
    let second = dir.path("b.txt");
    let third = dir.path("c.txt");
    for (path, seed) in [(&first, "7"), (&second, "7"), (&third, "8")] {
        let out = run_paths([
            Path::new("gen"),
            Path::new("--kind"),
            Path::new("random-dense"),
            Path::new("--lambda"),
            Path::new("8"),
            Path::new("--count"),
            Path::new("20"),
            Path::new("--seed"),
            Path::new(seed),
            Path::new("--out"),
            path,
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(fs::read(&first).unwrap(), fs::read(&second).unwrap());
    assert_ne!(fs::read(&first).unwrap(), fs::read(&third).unwrap());
}

#[test]
fn gen_singular_worked_instance() {
    let dir = Workdir::new("gen-sing");
    let output = dir.path("cover.txt");
    let out = run_paths([
        Path::new("gen"),
        Path::new("--kind"),
        Path::new("singular"),
        Path::new("--theta"),
        Path::new("2"),
        Path::new("--ladder"),
        Path::new("2,4"),
        Path::new("--dim"),
        Path::new("6"),
        Path::new("--out"),
        &output,
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let json = stdout_json(&out);
    assert_eq!(json["cubes"], 40);
    assert_eq!(
        fs::read_to_string(&output).unwrap().lines().count(),
        40
    );
}

#[test]
fn gen_prefix_cover() {
    let dir = Workdir::new("gen-prefix");
    let output = dir.path("prefix.txt");
    let out = run_paths([
        Path::new("gen"),
        Path::new("--kind"),
        Path::new("prefix"),
        Path::new("--theta"),
        Path::new("2"),
        Path::new("--dim"),
        Path::new("5"),
        Path::new("--out"),
        &output,
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        fs::read_to_string(&output).unwrap(),
        "00---\n01---\n10---\n11---\n"
    );
}

#[test]
fn gen_rejects_bad_parameters() {
    let dir = Workdir::new("gen-bad");
    let output = dir.path("x.txt");
    let out = run_paths([
        Path::new("gen"),
        Path::new("--kind"),
        Path::new("singular"),
        Path::new("--theta"),
        Path::new("3"),
        Path::new("--ladder"),
        Path::new("2,4"),
        Path::new("--dim"),
        Path::new("8"),
        Path::new("--out"),
        &output,
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn convert_preserves_budget_in_json() {
    let dir = Workdir::new("convert");
    let family = dir.file(
        "fam.json",
        "{\"lambda\":3,\"cubes\":[\"0-1\",\"1--\"],\"support_budget\":2}",
    );
    let out = run_paths([
        Path::new("convert"),
        Path::new("--to"),
        Path::new("json"),
        &family,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json = stdout_json(&out);
    assert_eq!(json["support_budget"], 2);
    assert_eq!(json["lambda"], 3);
}

#[test]
fn selftest_exits_zero() {
    let out = run(&["selftest"]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let json = stdout_json(&out);
    assert_eq!(json["failed"], 0);
    assert_eq!(json["passed"], 10);
}
