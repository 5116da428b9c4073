//! A scripted command-line session over the fixture documents.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub struct Outcome {
    pub args: String,
    pub expected: i32,
    pub code: i32,
    pub stdout: String,
}

impl Outcome {
    pub fn ok(&self) -> bool {
        self.code == self.expected
    }
}

pub fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_cylgrid")).args(args).output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn p(path: &Path) -> String {
    path.to_string_lossy().into_owned()
}

/// Runs every step and returns what each one exited with.
pub fn scripted_session(dir: &Path) -> Vec<Outcome> {
    let cyl2 = p(&fixture("cyl2.dgf"));
    let cyl6 = p(&fixture("cyl6.dgf"));
    let k3 = p(&fixture("k3rep.dgf"));
    let cert = p(&dir.join("k3.cert"));
    let bad_cert = p(&dir.join("bad.cert"));
    let digon = p(&dir.join("digon.dgf"));
    let dag = p(&dir.join("dag.dgf"));
    let k5 = p(&dir.join("k5.dgf"));
    let broken = p(&dir.join("broken.dgf"));
    let generated = p(&dir.join("gen.dgf"));
    let config = p(&dir.join("bad.cfg"));
    std::fs::write(&digon, "digraph digon\nv 0\nv 1\ne 0 0 1\ne 1 1 0\n").unwrap();
    std::fs::write(&dag, "digraph dag\nv 0\nv 1\nv 2\ne 0 0 1\ne 1 1 2\ne 2 0 2\n").unwrap();
    let mut k5_text = String::from("digraph k5\n");
    for v in 0..5 {
        k5_text += &format!("v {v}\n");
    }
    let mut id = 0;
    for a in 0..5 {
        for b in 0..5 {
            if a != b {
                k5_text += &format!("e {id} {a} {b}\n");
                id += 1;
            }
        }
    }
    std::fs::write(&k5, k5_text).unwrap();
    std::fs::write(&broken, "digraph x\nv 0\ne 0 0 9\n").unwrap();
    std::fs::write(&config, "cut_order = seven\n").unwrap();

    let steps: Vec<(Vec<String>, i32)> = vec![
        (vec!["gen", "cyl", "--n", "2"], 0),
        (vec!["scc", &cyl2], 0),
        (vec!["scc", &dag], 0),
        (vec!["menger", &cyl2, "--from", "0,1", "--to", "4,5", "--k", "2"], 0),
        (vec!["menger", &cyl2, "--from", "0,1", "--to", "6,7", "--k", "2"], 1),
        (vec!["haven-order", &k3, "--cap", "3", "--emit", &cert], 0),
        (vec!["check-haven", &k3, &cert], 0),
        (vec!["check-haven", &k3, &bad_cert], 1),
        (vec!["haven-order", &k5, "--cap", "5", "--budget", "3"], 3),
        (vec!["linked-set", &k5, "--n", "1"], 0),
        (vec!["linked-set", &dag, "--n", "1"], 1),
        (vec!["contract", &cyl2, "--edge", "0"], 0),
        (vec!["contract", &cyl2, "--edge", "8"], 1),
        (vec!["find-minor", &cyl2, &digon], 0),
        (vec!["find-minor", &dag, &digon], 1),
        (vec!["find-minor", &cyl2, &digon, "--budget", "0"], 3),
        (vec!["reroute", &p(&fixture("bounce.dgf")), "--mode", "exact"], 0),
        (vec!["reroute", &p(&fixture("grid2x2.dgf")), "--mode", "local"], 0),
        (vec!["reroute", &cyl2, "--mode", "exact"], 2),
        (vec!["extract-acyclic", &p(&fixture("segregated.dgf")), "--n", "2"], 0),
        (vec!["extract-acyclic", &p(&fixture("zigzag.dgf")), "--n", "2", "--bubble"], 0),
        (vec!["extract-acyclic", &p(&fixture("zigzag.dgf")), "--n", "3"], 1),
        (vec!["assemble", &cyl6, "--n", "1"], 0),
        (vec!["assemble", &cyl6, "--n", "2"], 1),
        (vec!["pipeline", &p(&fixture("pipeline12.dgf")), "--n", "2"], 0),
        (vec!["pipeline", &p(&fixture("pipeline12.dgf")), "--config", &config], 2),
        (vec!["scc", &broken], 2),
        (vec!["scc", &p(&dir.join("missing.dgf"))], 2),
        (vec!["frobnicate"], 2),
        (vec!["menger", &cyl2, "--from", "x", "--to", "1", "--k", "1"], 2),
        (vec!["--help"], 0),
    ]
    .into_iter()
    .map(|(a, c)| (a.into_iter().map(String::from).collect(), c))
    .collect();

    let mut out = Vec::new();
    for (args, expected) in steps {
        if args.first().map(String::as_str) == Some("check-haven") && args[2] == bad_cert {
            let text = std::fs::read_to_string(&cert).unwrap();
            std::fs::write(&bad_cert, text.replacen("Z: -> 0\n", "", 1)).unwrap();
        }
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let (code, stdout) = run(&refs);
        if args[0] == "gen" {
            std::fs::write(&generated, &stdout).unwrap();
        }
        out.push(Outcome {
            args: args.join(" "),
            expected,
            code,
            stdout,
        });
    }
    out
}
