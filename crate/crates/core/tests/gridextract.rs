mod support;


use cylgrid::embedding::Role;
use cylgrid::generators::random_disk_system;
use cylgrid::gridextract::{
    debubble, get_acyclic_grid, get_bubble_grid, mixing_analysis, Branch, GridExtraction, Mix, SubpathDecomposition,
};
use cylgrid::minors::{validate_acyclic_grid, AcyclicGridWitness, GridFlavor};
use cylgrid::rerouting::RoutedSystem;
use cylgrid::{Error, Vertex};
use itertools::Itertools;
use proptest::prelude::*;
use support::sketch::*;

const BUDGET: u64 = 1 << 20;

/// Checks the common guarantees of an extraction against the input system.
fn check_extraction(sys: &RoutedSystem, g: &GridExtraction, n: usize, flavor: GridFlavor) {
    assert_eq!(g.model.replay(sys.host()).unwrap(), g.digraph);
    assert_eq!(g.witness.flavor, flavor);
    assert_eq!(g.witness.size(), n);
    let r = validate_acyclic_grid(&g.digraph, &g.witness);
    assert!(r.is_valid(), "{r}");
    for v in g.digraph.vertices() {
        assert!(sys.host().has_vertex(v));
    }
}

fn decomposition(sys: &RoutedSystem) -> SubpathDecomposition {
    let emb = &sys.embedding;
    let hs = emb.bottom_top_order(&sys.horizontals).unwrap().into_iter().map(|i| sys.horizontals[i].clone()).collect();
    let vs = emb.left_right_order(&sys.verticals).unwrap().into_iter().map(|i| sys.verticals[i].clone()).collect();
    SubpathDecomposition::new(hs, vs)
}

#[test]
fn decomposition_of_segregated_fixture() {
    let fx = segregated(4);
    let dec = decomposition(&fx.sys);
    let at = |v: Option<Vertex>| fx.coords[&v.unwrap()];
    // Left vertical departs at x = 3 and arrives at x = 1; right one departs
    // at x = 4 and arrives at x = 2. The bottom piece starts below level 1.
    for (i, depart, arrive) in [(0, 3.0, 1.0), (1, 4.0, 2.0)] {
        assert_eq!(at(dec.first(i, 0)), (depart, 0.0));
        for j in 1..=4 {
            assert_eq!(at(dec.first(i, j)), (depart, j as f64));
            assert_eq!(at(dec.last(i, j - 1)), (arrive, j as f64));
        }
        assert_eq!(at(dec.last(i, 4)), (arrive, 5.0));
    }
}

#[test]
fn mixing_matches_coordinate_order() {
    for (fx, subset, expect_int, expect_seg) in [
        (segregated(4), vec![0, 1], false, true),
        (integrated(), vec![0, 1, 2, 3], true, false),
    ] {
        let dec = decomposition(&fx.sys);
        let x = |v: Option<Vertex>| fx.coords[&v.unwrap()].0;
        for j in 2..=dec.height() {
            let m = mixing_analysis(&dec, j).unwrap();
            // Horizontals run leftwards, so order along them is decreasing x.
            let fs: Vec<f64> = subset.iter().rev().map(|&i| x(dec.first(i, j))).collect();
            let ls: Vec<f64> = subset.iter().rev().map(|&i| x(dec.last(i, j - 1))).collect();
            let inter: Vec<f64> = fs.iter().zip(&ls).flat_map(|(&f, &l)| [f, l]).collect();
            let seg: Vec<f64> = fs.iter().chain(&ls).copied().collect();
            let oracle = |seq: &[f64]| seq.windows(2).all(|w| w[0] >= w[1]);
            assert_eq!(oracle(&inter), expect_int);
            assert_eq!(oracle(&seg), expect_seg);
            assert_eq!(m.is_integrated(&subset), expect_int, "level {j}");
            assert_eq!(m.is_segregated(&subset), expect_seg, "level {j}");
            assert_eq!(m.order.len(), 2 * subset.len());
        }
    }
}

#[test]
fn nine_mixed_verticals_have_a_uniform_subset() {
    let fx = nine_mixed();
    let dec = decomposition(&fx.sys);
    let x = |v: Option<Vertex>| fx.coords[&v.unwrap()].0;
    let descending = |seq: &[f64]| seq.windows(2).all(|w| w[0] >= w[1]);
    let uniform = |s: &[usize]| {
        let fs: Vec<f64> = s.iter().rev().map(|&i| x(dec.first(i, 2))).collect();
        let ls: Vec<f64> = s.iter().rev().map(|&i| x(dec.last(i, 1))).collect();
        let inter: Vec<f64> = fs.iter().zip(&ls).flat_map(|(&f, &l)| [f, l]).collect();
        let seg: Vec<f64> = fs.iter().chain(&ls).copied().collect();
        descending(&inter) || descending(&seg)
    };
    let all: Vec<usize> = (0..9).collect();
    assert!(!uniform(&all));
    let best = (1..=9).rev().find(|&k| all.iter().copied().combinations(k).any(|s| uniform(&s))).unwrap();
    assert_eq!(best, 5);
    let m = mixing_analysis(&dec, 2).unwrap();
    assert_eq!(m.classify(&all), None);
    let (subset, mix) = m.uniform_subset(&all, 3).unwrap();
    assert_eq!(subset.len(), best);
    assert!(uniform(&subset));
    assert_eq!(mix, Mix::Integrated);
    assert_eq!(m.uniform_subset(&all, 6), None);
}

#[test]
fn mixing_rejects_out_of_range_levels() {
    let dec = decomposition(&segregated(2).sys);
    assert!(matches!(mixing_analysis(&dec, 0), Err(Error::InvalidArgument(_))));
    assert!(matches!(mixing_analysis(&dec, 3), Err(Error::InvalidArgument(_))));
}

fn roles_ok(fx: &Fixture, g: &GridExtraction) {
    let emb = &fx.sys.embedding;
    let r = emb.vertices_with_role(Role::R);
    let t = emb.vertices_with_role(Role::T);
    assert!(g.witness.horizontals.iter().all(|h| r.contains(&h.start())));
    assert!(g.witness.verticals.iter().all(|v| t.contains(&v.finish())));
}

#[test]
fn canonical_grid_is_a_fixed_point() {
    let fx = canonical(3, 3);
    let g = get_acyclic_grid(&fx.sys, 2, BUDGET).unwrap();
    assert_eq!(g.branch, Branch::FixedPoint);
    assert!(g.model.steps.is_empty());
    check_extraction(&fx.sys, &g, 2, GridFlavor::Plain);
    for p in g.witness.horizontals.iter().chain(&g.witness.verticals) {
        assert!(fx.sys.horizontals.contains(p) || fx.sys.verticals.contains(p));
    }
}

#[test]
fn segregated_fixture_uses_the_staircase() {
    let fx = segregated(4);
    let g = get_acyclic_grid(&fx.sys, 2, BUDGET).unwrap();
    assert_eq!(g.branch, Branch::Segregated);
    assert!(!g.model.steps.is_empty());
    check_extraction(&fx.sys, &g, 2, GridFlavor::Plain);
    roles_ok(&fx, &g);
}

#[test]
fn integrated_fixture_uses_diagonal_walks() {
    let fx = integrated();
    let g = get_acyclic_grid(&fx.sys, 2, BUDGET).unwrap();
    assert_eq!(g.branch, Branch::Integrated);
    check_extraction(&fx.sys, &g, 2, GridFlavor::Plain);
    roles_ok(&fx, &g);
}

#[test]
fn size_one_grids_exist_everywhere() {
    for fx in [segregated(1), integrated(), zigzag()] {
        let g = get_acyclic_grid(&fx.sys, 1, BUDGET).unwrap();
        check_extraction(&fx.sys, &g, 1, GridFlavor::Plain);
        let g = get_bubble_grid(&fx.sys, 1, BUDGET).unwrap();
        check_extraction(&fx.sys, &g, 1, GridFlavor::Bubble);
    }
}

#[test]
fn too_few_paths_is_a_precondition_error() {
    let fx = segregated(3);
    assert!(matches!(get_acyclic_grid(&fx.sys, 3, BUDGET), Err(Error::Precondition(_))));
    assert!(matches!(get_acyclic_grid(&fx.sys, 2, BUDGET), Err(Error::Precondition(_))));
    assert!(matches!(get_acyclic_grid(&fx.sys, 0, BUDGET), Err(Error::InvalidArgument(_))));
}

#[test]
fn tiny_budget_is_reported() {
    let fx = integrated();
    assert!(matches!(get_acyclic_grid(&fx.sys, 2, 3), Err(Error::BudgetExhausted)));
}

#[test]
fn zigzag_triggers_property_p() {
    let fx = zigzag();
    let g = get_bubble_grid(&fx.sys, 2, BUDGET).unwrap();
    assert_eq!(g.branch, Branch::PropertyP);
    check_extraction(&fx.sys, &g, 2, GridFlavor::Bubble);
    let plain = AcyclicGridWitness {
        flavor: GridFlavor::Plain,
        ..g.witness.clone()
    };
    assert!(validate_acyclic_grid(&g.digraph, &plain).is_valid());
    for h in &g.witness.horizontals {
        assert!(fx.sys.horizontals.contains(h));
    }
}

#[test]
fn zigzag_gives_a_plain_grid_through_alternations() {
    let fx = zigzag();
    let g = get_acyclic_grid(&fx.sys, 2, BUDGET).unwrap();
    assert_eq!(g.branch, Branch::PropertyP);
    check_extraction(&fx.sys, &g, 2, GridFlavor::Plain);
}

#[test]
fn single_pass_fixture_returns_an_input_subset() {
    let fx = segregated(4);
    let g = get_bubble_grid(&fx.sys, 2, BUDGET).unwrap();
    assert_eq!(g.branch, Branch::Truncation);
    assert!(g.model.steps.is_empty());
    check_extraction(&fx.sys, &g, 2, GridFlavor::Bubble);
    for h in &g.witness.horizontals {
        assert!(fx.sys.horizontals.contains(h));
    }
    for v in &g.witness.verticals {
        assert!(fx.sys.verticals.iter().any(|o| o.vertices().starts_with(v.vertices())));
    }
}

fn bubble_witness(fx: &Fixture) -> AcyclicGridWitness {
    let dec = decomposition(&fx.sys);
    AcyclicGridWitness {
        horizontals: dec.horizontals.clone(),
        verticals: dec.verticals.clone(),
        flavor: GridFlavor::Bubble,
    }
}

#[test]
fn debubble_needs_three_k_minus_one_horizontals() {
    let fx = bubbly(5, 5);
    let w = bubble_witness(&fx);
    assert!(validate_acyclic_grid(fx.sys.host(), &w).is_valid());
    let g = debubble(fx.sys.host(), &w, 2).unwrap();
    assert_eq!(g.branch, Branch::Debubble);
    check_extraction(&fx.sys, &g, 2, GridFlavor::Plain);
    let short = bubbly(4, 4);
    assert!(matches!(
        debubble(short.sys.host(), &bubble_witness(&short), 2),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn debubble_paths_come_from_the_input_union() {
    let fx = bubbly(5, 5);
    let g = debubble(fx.sys.host(), &bubble_witness(&fx), 2).unwrap();
    let input: std::collections::BTreeSet<usize> = fx
        .sys
        .horizontals
        .iter()
        .chain(&fx.sys.verticals)
        .flat_map(|p| p.edges().iter().copied())
        .collect();
    assert!(g.digraph.edge_ids().all(|e| input.contains(&e)));
    assert!(g.witness.verticals.iter().all(|v| fx.sys.verticals.iter().any(|o| o.edge_set().is_superset(&v.edge_set()))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn canonical_grids_give_fixed_points(cols in 1usize..5, rows in 1usize..5, n in 1usize..4) {
        prop_assume!(n <= cols && n <= rows);
        let fx = canonical(cols, rows);
        let g = get_acyclic_grid(&fx.sys, n, BUDGET).unwrap();
        prop_assert_eq!(g.branch, Branch::FixedPoint);
        prop_assert!(validate_acyclic_grid(&g.digraph, &g.witness).is_valid());
    }

    #[test]
    fn pieces_avoid_other_horizontals(seed in 0u64..400) {
        let Some(sys) = random_disk_system(seed, 3, 3, 0.3) else { return Ok(()) };
        let dec = decomposition(&sys);
        for i in 0..dec.verticals.len() {
            for j in 0..=dec.height() {
                if let Some(seg) = dec.segment(i, j) {
                    let inner = &seg.vertices()[1..seg.vertices().len() - 1];
                    prop_assert!(inner.iter().all(|&x| dec.horizontals.iter().all(|h| !h.contains(x))));
                    if j > 0 {
                        prop_assert!(dec.horizontals[j - 1].contains(seg.start()));
                    }
                    if j < dec.height() {
                        prop_assert!(dec.horizontals[j].contains(seg.finish()));
                    }
                }
            }
        }
    }

    #[test]
    fn segregation_survives_removing_the_horizontal_below(kind in 0usize..3, h in 2usize..6, k in 1usize..5) {
        let fx = match kind {
            0 => segregated(h),
            1 => bubbly(k, h),
            _ => nine_mixed(),
        };
        let dec = decomposition(&fx.sys);
        let all: Vec<usize> = (0..dec.verticals.len()).collect();
        let mut checked = 0;
        for j0 in 1..dec.height() {
            let m = mixing_analysis(&dec, j0 + 1).unwrap();
            let mut hs = dec.horizontals.clone();
            hs.remove(j0 - 1);
            let reduced = SubpathDecomposition::new(hs, dec.verticals.clone());
            let after = mixing_analysis(&reduced, j0).unwrap();
            for size in 2..=all.len().min(4) {
                for s in all.iter().copied().combinations(size) {
                    if m.is_segregated(&s) {
                        checked += 1;
                        prop_assert!(after.is_segregated(&s), "level {j0} subset {s:?}");
                    }
                }
            }
        }
        prop_assert!(kind != 0 || checked > 0);
    }

    #[test]
    fn random_systems_give_valid_grids_or_clean_errors(seed in 0u64..400) {
        let Some(sys) = random_disk_system(seed, 3, 3, 0.3) else { return Ok(()) };
        match get_acyclic_grid(&sys, 1, BUDGET) {
            Ok(g) => prop_assert!(validate_acyclic_grid(&g.digraph, &g.witness).is_valid()),
            Err(e) => prop_assert!(matches!(e, Error::Precondition(_)), "{e}"),
        }
        let g = get_bubble_grid(&sys, 1, BUDGET).unwrap();
        prop_assert!(validate_acyclic_grid(&g.digraph, &g.witness).is_valid());
    }
}
