//! Runs the twelve acceptance criteria and prints one line per criterion.

#[path = "../../core/tests/support/mod.rs"]
mod support;

mod common;

use std::collections::BTreeSet;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use cylgrid::digraph::{menger_paths, MengerOutcome};
use cylgrid::embedding::MeetingKind;
use cylgrid::gridextract::{assemble_cylindrical_grid, get_acyclic_grid, get_bubble_grid, AssemblyInput};
use cylgrid::havens::{check_haven, find_haven, haven_from_representation, haven_order, HavenSearch};
use cylgrid::linkages::{extract_linked_set, is_linked_set, pair_relation, LinkedVerdict};
use cylgrid::minors::{
    find_butterfly_minor, generate_cylindrical_grid, validate_acyclic_grid, validate_cylindrical_grid, MinorSearch,
};
use cylgrid::rerouting::{RerouteMode, RoutedSystem};
use cylgrid::{Digraph, Vertex, VertexSet};
use cylgrid_cli::{parse_dgf, serialize_dgf};
use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use support::disk::{
    bounce_fixture, check_output, grid_2x2, min_union_oracle, random_suite, shared_edge_fixture, shortcut_fixture,
    union_size,
};
use support::oracles::{brute_has_haven, brute_relation, k3_representation, permutations, sigma_linkages};
use support::sketch::{canonical, integrated, segregated, zigzag};

const BUDGET: u64 = 1 << 22;

/// Haven order of the size-2 cylindrical grid, found by exhaustive search.
const PINNED_CYL2_HAVEN_ORDER: usize = 2;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, u64);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_dag(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Digraph {
    let mut order: Vec<Vertex> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let mut arcs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                arcs.push((order[i], order[j]));
            }
        }
    }
    Digraph::from_edges(n, &arcs)
}

fn grid_construction() -> Outcome {
    for n in 1..=6 {
        let g = generate_cylindrical_grid(n).map_err(|e| e.to_string())?;
        ensure(g.digraph.vertex_count() == 2 * n * n, || format!("n={n}: vertex count"))?;
        ensure(g.digraph.edge_count() == 2 * n * n + 2 * n * (n - 1), || format!("n={n}: edge count"))?;
        let r = validate_cylindrical_grid(&g.digraph, &g.witness);
        ensure(r.is_valid(), || format!("n={n}: {r}"))?;
        let r = g.embedding.validate();
        ensure(r.is_valid(), || format!("n={n}: embedding {r}"))?;
    }
    Ok("n = 1..6".into())
}

fn haven_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut cases: Vec<(String, Digraph, usize)> = Vec::new();
    for i in 0..50 {
        let n = rng.gen_range(1..=8);
        cases.push((format!("dag {i}"), random_dag(&mut rng, n, 0.4), 1));
    }
    for k in 3..=8 {
        cases.push((format!("cycle {k}"), Digraph::directed_cycle(k), 2));
    }
    for k in 1..=5 {
        cases.push((format!("K{k}"), Digraph::bidirected_complete(k), k));
    }
    for (name, d, want) in &cases {
        let h = haven_order(d, d.vertex_count(), BUDGET).map_err(|e| format!("{name}: {e}"))?;
        ensure(h.order == *want, || format!("{name}: order {} expected {want}", h.order))?;
        let r = check_haven(d, &h.certificate);
        ensure(r.is_valid(), || format!("{name}: {r}"))?;
        if d.vertex_count() <= 4 {
            ensure(brute_has_haven(d, *want) && !brute_has_haven(d, want + 1), || format!("{name}: oracle"))?;
        }
    }
    Ok(format!("{} digraphs", cases.len()))
}

fn regression_pin() -> Outcome {
    let g = generate_cylindrical_grid(2).map_err(|e| e.to_string())?;
    let h = haven_order(&g.digraph, g.digraph.vertex_count(), BUDGET).map_err(|e| e.to_string())?;
    ensure(h.order == PINNED_CYL2_HAVEN_ORDER, || format!("order {} != pinned", h.order))?;
    ensure(h.order >= 2, || "order below 2".into())?;
    ensure(brute_has_haven(&g.digraph, 2), || "oracle finds no order-2 haven".into())?;
    let r = check_haven(&g.digraph, &h.certificate);
    ensure(r.is_valid(), || r.to_string())?;
    Ok(format!("order {}", h.order))
}

fn linked_sets() -> Outcome {
    for n in 1..=2 {
        let d = Digraph::bidirected_complete(3 * n);
        let HavenSearch::Found(cert) = find_haven(&d, 3 * n, BUDGET).map_err(|e| e.to_string())? else {
            return Err(format!("no haven of order {}", 3 * n));
        };
        let x = extract_linked_set(&d, &cert, n, BUDGET).map_err(|e| e.to_string())?.set;
        ensure(x.len() == 2 * n, || format!("|X| = {}", x.len()))?;
        let verdict = is_linked_set(&d, &x, BUDGET).map_err(|e| e.to_string())?;
        ensure(verdict == LinkedVerdict::Linked, || format!("{verdict:?}"))?;
        let members: Vec<Vertex> = x.iter().copied().collect();
        for k in 1..=members.len() {
            for a in members.iter().copied().combinations(k) {
                for b in members.iter().copied().combinations(k) {
                    let (a, b): (VertexSet, VertexSet) = (a.iter().copied().collect(), b.iter().copied().collect());
                    let linked = menger_paths(&d, &a, &b, k).map_err(|e| e.to_string())?.paths().is_some();
                    ensure(linked, || format!("{a:?} to {b:?} not linked"))?;
                }
            }
        }
    }
    Ok("n = 1, 2".into())
}

/// Simple paths from `a` to `b` meeting `a` only at the start and `b` only at
/// the end.
fn minimal_paths(d: &Digraph, a: &VertexSet, b: &VertexSet) -> Vec<Vec<Vertex>> {
    fn grow(d: &Digraph, path: &mut Vec<Vertex>, a: &VertexSet, b: &VertexSet, out: &mut Vec<Vec<Vertex>>) {
        let last = *path.last().unwrap();
        if b.contains(&last) {
            out.push(path.clone());
            return;
        }
        for w in d.successors(last).collect::<BTreeSet<_>>() {
            if !path.contains(&w) && !a.contains(&w) {
                path.push(w);
                grow(d, path, a, b, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    for &s in a {
        grow(d, &mut vec![s], a, b, &mut out);
    }
    out
}

fn max_packing(paths: &[Vec<Vertex>], used: &mut BTreeSet<Vertex>, from: usize) -> usize {
    let mut best = 0;
    for i in from..paths.len() {
        if paths[i].iter().all(|v| !used.contains(v)) {
            used.extend(paths[i].iter().copied());
            best = best.max(1 + max_packing(paths, used, i + 1));
            for v in &paths[i] {
                used.remove(v);
            }
        }
    }
    best
}

fn menger_correctness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut with_paths, mut with_sep) = (0, 0);
    for i in 0..200 {
        let n = rng.gen_range(2..=10);
        let mut arcs = Vec::new();
        for u in 0..n {
            for v in 0..n {
                if u != v && rng.gen_bool(0.2) {
                    arcs.push((u, v));
                }
            }
        }
        let d = Digraph::from_edges(n, &arcs);
        let pick = |rng: &mut ChaCha8Rng| -> VertexSet { (0..n).filter(|_| rng.gen_bool(0.3)).collect() };
        let (a, b) = (pick(&mut rng), pick(&mut rng));
        let k = rng.gen_range(1..=3);
        let best = max_packing(&minimal_paths(&d, &a, &b), &mut BTreeSet::new(), 0);
        match menger_paths(&d, &a, &b, k).map_err(|e| format!("case {i}: {e}"))? {
            MengerOutcome::Paths(ps) => {
                with_paths += 1;
                ensure(best >= k && ps.len() == k, || format!("case {i}: paths but oracle {best} < {k}"))?;
                let mut seen = BTreeSet::new();
                for p in &ps {
                    p.check(&d).map_err(|e| format!("case {i}: {e}"))?;
                    ensure(a.contains(&p.start()) && b.contains(&p.finish()), || format!("case {i}: ends"))?;
                    for &v in p.vertices() {
                        ensure(seen.insert(v), || format!("case {i}: paths share {v}"))?;
                    }
                }
            }
            MengerOutcome::Separator(s) => {
                with_sep += 1;
                ensure(best < k && s.len() < k, || format!("case {i}: separator but oracle {best} >= {k}"))?;
                let rest: VertexSet = a.difference(&s).copied().collect();
                let reach = d.without(&s).reachable_from(rest.iter().copied());
                ensure(reach.iter().all(|v| !b.contains(v) || s.contains(v)), || format!("case {i}: not separating"))?;
            }
        }
    }
    Ok(format!("{with_paths} linked, {with_sep} separated"))
}

fn minor_suite() -> Outcome {
    let digon = Digraph::directed_cycle(2);
    let g = generate_cylindrical_grid(2).map_err(|e| e.to_string())?;
    let MinorSearch::Found(m) = find_butterfly_minor(&g.digraph, &digon, BUDGET) else {
        return Err("digon not found in the size-2 cylindrical grid".into());
    };
    m.verify(&g.digraph, &digon).map_err(|e| e.to_string())?;
    let mut dags = 0;
    for n in 1..=4usize {
        let pairs: Vec<(Vertex, Vertex)> = (0..n).tuple_combinations().collect();
        for mask in 0u32..1 << pairs.len() {
            let arcs: Vec<_> = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).collect();
            let d = Digraph::from_edges(n, &arcs);
            ensure(find_butterfly_minor(&d, &digon, BUDGET) == MinorSearch::NotFound, || format!("dag {arcs:?}"))?;
            dags += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..100 {
        let n = rng.gen_range(5..=8);
        let d = random_dag(&mut rng, n, 0.35);
        ensure(find_butterfly_minor(&d, &digon, BUDGET) == MinorSearch::NotFound, || format!("dag {:?}", d.arc_multiset()))?;
        dags += 1;
    }
    for (host, pattern) in [
        (Digraph::directed_cycle(5), Digraph::directed_cycle(3)),
        (Digraph::bidirected_complete(4), Digraph::bidirected_complete(3)),
        (g.digraph.clone(), Digraph::directed_cycle(4)),
    ] {
        let MinorSearch::Found(m) = find_butterfly_minor(&host, &pattern, BUDGET) else {
            return Err("expected minor missing".into());
        };
        m.verify(&host, &pattern).map_err(|e| e.to_string())?;
    }
    Ok(format!("{dags} DAGs without a digon"))
}

fn rerouting_suite() -> Outcome {
    let mut suite: Vec<RoutedSystem> = vec![grid_2x2(), shared_edge_fixture(), bounce_fixture(), shortcut_fixture()];
    suite.extend(random_suite());
    let (mut bounce, mut cross, mut shared, mut exact_checked) = (0, 0, 0, 0);
    for (i, sys) in suite.iter().enumerate() {
        for v in &sys.verticals {
            for h in &sys.horizontals {
                shared += usize::from(!v.edge_set().is_disjoint(&h.edge_set()));
                for &u in v.vertices() {
                    match sys.embedding.classify_meeting(h, v, u) {
                        Ok(MeetingKind::Bounce) => bounce += 1,
                        Ok(MeetingKind::Cross) => cross += 1,
                        Err(_) => {}
                    }
                }
            }
        }
        for mode in [RerouteMode::Exact, RerouteMode::Local] {
            let out = catch_unwind(AssertUnwindSafe(|| check_output(sys, mode)))
                .map_err(|_| format!("fixture {i}: {mode:?} output failed its checks"))?;
            if mode == RerouteMode::Exact && sys.embedding.host().edge_count() <= 14 {
                let want = min_union_oracle(sys);
                ensure(union_size(&out.routing) == want, || format!("fixture {i}: not minimal"))?;
                exact_checked += 1;
            }
        }
    }
    ensure(suite.len() >= 20, || "suite too small".into())?;
    ensure(bounce > 0 && cross > 0 && shared > 0, || "suite lacks a meeting kind".into())?;
    Ok(format!("{} fixtures, {exact_checked} minimality checks", suite.len()))
}

fn grid_extraction() -> Outcome {
    let fixtures = [
        ("segregated", segregated(4)),
        ("integrated", integrated()),
        ("property-p", zigzag()),
        ("all-passes-1", canonical(3, 3)),
    ];
    for (name, fx) in &fixtures {
        for bubble in [false, true] {
            let g = if bubble {
                get_bubble_grid(&fx.sys, 2, BUDGET)
            } else {
                get_acyclic_grid(&fx.sys, 2, BUDGET)
            }
            .map_err(|e| format!("{name} (bubble {bubble}): {e}"))?;
            ensure(g.witness.size() == 2, || format!("{name}: size"))?;
            let r = validate_acyclic_grid(&g.digraph, &g.witness);
            ensure(r.is_valid(), || format!("{name}: {r}"))?;
            let replayed = g.model.replay(fx.sys.host()).map_err(|e| e.to_string())?;
            ensure(replayed == g.digraph, || format!("{name}: replay differs"))?;
        }
    }
    Ok("4 fixtures, both flavours".into())
}

fn end_to_end() -> Outcome {
    let m = 12;
    let input = AssemblyInput::from_cylindrical_grid(m).map_err(|e| e.to_string())?;
    let a = assemble_cylindrical_grid(&input, 2, BUDGET).map_err(|e| e.to_string())?;
    ensure(a.witness.n == 2, || "size".into())?;
    let r = validate_cylindrical_grid(&a.digraph, &a.witness);
    ensure(r.is_valid(), || r.to_string())?;
    let replayed = a.model.replay(input.host()).map_err(|e| e.to_string())?;
    ensure(replayed == a.digraph, || "replay differs".into())?;
    Ok(format!("m = {m}, {:?}", a.branch))
}

fn representation_haven() -> Outcome {
    let rep = k3_representation();
    let g = rep.pattern();
    let cg = haven_order(&g, 3, BUDGET).map_err(|e| e.to_string())?;
    let cert = haven_from_representation(&rep, &cg.certificate).map_err(|e| e.to_string())?;
    ensure(cert.order == 2, || format!("order {}", cert.order))?;
    let r = check_haven(&rep.host, &cert);
    ensure(r.is_valid(), || r.to_string())?;
    Ok("order 2".into())
}

fn pair_relations() -> Outcome {
    let mut count = 0;
    for k in 1..=5 {
        for sigma in permutations(k) {
            let (_, f, g) = sigma_linkages(&sigma);
            let got = pair_relation(&f, &g).map_err(|e| e.to_string())?;
            ensure(got == brute_relation(&sigma), || format!("sigma {sigma:?}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} matchings"))
}

fn format_and_cli() -> Outcome {
    let dir = common::fixture("");
    let mut files = 0;
    for entry in std::fs::read_dir(&dir).map_err(|e| e.to_string())? {
        let path = entry.map_err(|e| e.to_string())?.path();
        if path.extension().is_some_and(|x| x == "dgf") {
            let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
            let doc = parse_dgf(&text).map_err(|e| format!("{}: {e}", path.display()))?;
            ensure(serialize_dgf(&doc) == text, || format!("{} changed", path.display()))?;
            files += 1;
        }
    }
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let session = common::scripted_session(tmp.path());
    for o in &session {
        ensure(o.ok(), || format!("`{}` exited {} (expected {})", o.args, o.code, o.expected))?;
    }
    Ok(format!("{files} documents, {} commands", session.len()))
}

/// Writes one line to stdout, bypassing the harness's output capture.
fn report(line: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
    let _ = out.flush();
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 12] = [
        ("grid construction", grid_construction, 1),
        ("haven oracle", haven_oracle, 60),
        ("regression pin", regression_pin, 600),
        ("linked sets", linked_sets, 300),
        ("menger correctness", menger_correctness, 120),
        ("butterfly minors", minor_suite, 300),
        ("rerouting", rerouting_suite, 600),
        ("grid extraction", grid_extraction, 300),
        ("cylindrical grid assembly", end_to_end, 900),
        ("representation haven", representation_haven, 10),
        ("pair relation", pair_relations, 60),
        ("format and cli", format_and_cli, 30),
    ];
    let mut failed = Vec::new();
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let result = result.and_then(|detail| {
            if took <= Duration::from_secs(*limit) {
                Ok(detail)
            } else {
                Err(format!("took {:.1}s, limit {limit}s", took.as_secs_f64()))
            }
        });
        match &result {
            Ok(detail) => report(&format!("criterion {:>2} {name}: PASS ({detail}; {:.2}s)", i + 1, took.as_secs_f64())),
            Err(why) => {
                report(&format!("criterion {:>2} {name}: FAIL ({why}; {:.2}s)", i + 1, took.as_secs_f64()));
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
