mod support;

use cylgrid::embedding::{MeetingKind, Role, Surface};
use cylgrid::generators::cylinder_system;
use cylgrid::rerouting::{
    cylinder_violations, hits_in_reverse, reroute_cylinder, reroute_disk, RerouteMode, RoutedSystem,
};
use cylgrid::{Digraph, DirectedPath, Error};
use support::disk::*;


#[test]
fn hits_in_reverse_basic_cases() {
    let d = Digraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
    let p = DirectedPath::from_vertices(&d, &[0, 1, 2]).unwrap();
    let q = DirectedPath::from_vertices(&d, &[3, 0]).unwrap();
    assert!(hits_in_reverse(&p, &p.slice(2, 2)));
    assert!(!hits_in_reverse(&p, &p));
    assert!(hits_in_reverse(&p, &q));
    let r = DirectedPath::trivial(3);
    assert!(hits_in_reverse(&p, &r));
}

#[test]
fn grid_is_a_fixed_point() {
    let sys = grid_2x2();
    for mode in [RerouteMode::Exact, RerouteMode::Local] {
        let out = check_output(&sys, mode);
        assert!(out.model.steps.is_empty());
        assert_eq!(out.system, sys);
    }
}

#[test]
fn shared_edges_are_contracted() {
    let sys = shared_edge_fixture();
    assert!(!hits_in_reverse(&sys.horizontals[0], &sys.verticals[0]));
    let out = check_output(&sys, RerouteMode::Exact);
    assert_eq!(union_size(&out.routing), min_union_oracle(&sys));
    assert!(out
        .model
        .steps
        .iter()
        .any(|s| matches!(s, cylgrid::minors::Step::Contract(_))));
}

#[test]
fn bounce_is_removed() {
    let sys = bounce_fixture();
    let v = &sys.verticals[0];
    let h = &sys.horizontals[0];
    assert_eq!(sys.embedding.classify_meeting(h, v, 1).unwrap(), MeetingKind::Bounce);
    let out = check_output(&sys, RerouteMode::Exact);
    assert_eq!(union_size(&out.routing), min_union_oracle(&sys));
    check_output(&sys, RerouteMode::Local);
}

#[test]
fn shortcut_strictly_reduces_edges() {
    let sys = shortcut_fixture();
    let out = check_output(&sys, RerouteMode::Exact);
    assert!(union_size(&out.routing) < union_size(&sys));
    assert_eq!(union_size(&out.routing), min_union_oracle(&sys));
}

#[test]
fn rerouting_is_idempotent() {
    for sys in [shared_edge_fixture(), bounce_fixture(), shortcut_fixture()] {
        for mode in [RerouteMode::Exact, RerouteMode::Local] {
            let once = reroute_disk(&sys, mode).unwrap();
            let twice = reroute_disk(&once.system, mode).unwrap();
            assert!(twice.model.steps.is_empty());
            assert_eq!(twice.system, once.system);
        }
    }
}


#[test]
fn random_suite_exact_mode() {
    let suite = random_suite();
    assert_eq!(suite.len(), 24);
    let mut checked = 0;
    for sys in &suite {
        let out = check_output(sys, RerouteMode::Exact);
        if sys.embedding.host().edge_count() <= 14 {
            assert_eq!(union_size(&out.routing), min_union_oracle(sys));
            checked += 1;
        }
        let again = reroute_disk(&out.system, RerouteMode::Exact).unwrap();
        assert!(again.model.steps.is_empty());
    }
    assert!(checked > 0);
}

#[test]
fn random_suite_local_mode() {
    for sys in random_suite() {
        let out = check_output(&sys, RerouteMode::Local);
        assert!(union_size(&out.routing) <= union_size(&sys));
    }
}

#[test]
fn cylinder_grid_already_has_the_property() {
    let sys = cylinder_system(2).unwrap();
    assert!(sys.validate().is_valid(), "{}", sys.validate());
    assert!(cylinder_violations(&sys).unwrap().is_empty());
    let out = reroute_cylinder(&sys).unwrap();
    assert!(out.model.steps.is_empty());
    assert_eq!(out.system, sys);
}

/// One ring circuit and a path that leaves it, runs around outside it in the
/// circuit's direction and comes back.
fn wrapping_fixture(reverse_circuit: bool) -> RoutedSystem {
    let ring = |k: usize, r: f64| {
        let a = std::f64::consts::TAU * k as f64 / 6.0;
        (r * a.cos(), r * a.sin())
    };
    let polar = |deg: f64, r: f64| {
        let a = deg.to_radians();
        (r * a.cos(), r * a.sin())
    };
    let mut pts: Vec<Pt> = (0..6).map(|k| ring(k, 2.0)).collect();
    pts.push(polar(0.0, 4.0)); // 6: t
    pts.push(polar(40.0, 3.0)); // 7
    pts.push(polar(80.0, 3.0)); // 8
    pts.push(polar(120.0, 1.0)); // 9: b
    let mut arcs: Vec<(usize, usize)> = (0..6)
        .map(|k| if reverse_circuit { ((k + 1) % 6, k) } else { (k, (k + 1) % 6) })
        .collect();
    arcs.extend([(6, 0), (0, 7), (7, 8), (8, 2), (2, 9)]);
    let circuit: Vec<usize> = if reverse_circuit {
        vec![0, 5, 4, 3, 2, 1, 0]
    } else {
        vec![0, 1, 2, 3, 4, 5, 0]
    };
    build(
        &pts,
        &arcs,
        &[(6, Role::T), (9, Role::B)],
        Surface::Cylinder,
        &[&[6, 0, 7, 8, 2, 9]],
        &[&circuit],
        Some((0.0, 0.0)),
    )
}

#[test]
fn wrapping_path_is_rerouted() {
    let sys = wrapping_fixture(false);
    assert_eq!(cylinder_violations(&sys).unwrap(), vec![(0, 0)]);
    let out = reroute_cylinder(&sys).unwrap();
    assert!(out.system.validate().is_valid(), "{}", out.system.validate());
    assert!(cylinder_violations(&out.system).unwrap().is_empty());
    assert_eq!(out.model.replay(sys.embedding.host()).unwrap(), *out.system.embedding.host());
    assert_eq!(out.system.verticals.len(), 1);
    assert_eq!(out.system.horizontals.len(), 1);
}

#[test]
fn path_against_the_circuit_is_left_alone() {
    let sys = wrapping_fixture(true);
    assert!(cylinder_violations(&sys).unwrap().is_empty());
    assert!(reroute_cylinder(&sys).unwrap().model.steps.is_empty());
}

fn polar(deg: f64, r: f64) -> Pt {
    let a = deg.to_radians();
    (r * a.cos(), r * a.sin())
}

/// Two concentric rings joined by one radial path from the outside into the hole.
fn two_rings(outer_clockwise: bool) -> RoutedSystem {
    let mut pts: Vec<Pt> = (0..6).map(|k| polar(60.0 * k as f64, 2.0)).collect();
    pts.extend((0..6).map(|k| polar(60.0 * k as f64, 3.0)));
    pts.push(polar(0.0, 4.0)); // 12: t
    pts.push(polar(0.0, 1.0)); // 13: b
    let mut arcs: Vec<(usize, usize)> = (0..6).map(|k| (k, (k + 1) % 6)).collect();
    arcs.extend((0..6).map(|k| {
        if outer_clockwise {
            (6 + (k + 1) % 6, 6 + k)
        } else {
            (6 + k, 6 + (k + 1) % 6)
        }
    }));
    arcs.extend([(12, 6), (6, 0), (0, 13)]);
    let outer: Vec<usize> = if outer_clockwise {
        vec![6, 11, 10, 9, 8, 7, 6]
    } else {
        vec![6, 7, 8, 9, 10, 11, 6]
    };
    build(
        &pts,
        &arcs,
        &[(12, Role::T), (13, Role::B)],
        Surface::Cylinder,
        &[&[12, 6, 0, 13]],
        &[&[0, 1, 2, 3, 4, 5, 0], &outer],
        Some((0.0, 0.0)),
    )
}

#[test]
fn consistent_rings_need_nothing() {
    let out = reroute_cylinder(&two_rings(false)).unwrap();
    assert!(out.model.steps.is_empty());
}

#[test]
fn mixed_orientations_rejected() {
    assert!(matches!(reroute_cylinder(&two_rings(true)), Err(Error::Precondition(_))));
}

#[test]
fn non_separating_circuit_rejected() {
    let mut pts: Vec<Pt> = (0..6).map(|k| polar(60.0 * k as f64, 2.0)).collect();
    pts.push(polar(60.0, 4.0)); // 6: t
    pts.push(polar(60.0, 1.0)); // 7: b
    pts.extend([polar(230.0, 3.0), polar(250.0, 3.0), polar(240.0, 3.6)]); // 8, 9, 10
    let mut arcs: Vec<(usize, usize)> = (0..6).map(|k| (k, (k + 1) % 6)).collect();
    arcs.extend([(6, 1), (1, 7), (8, 9), (9, 10), (10, 8)]);
    let sys = build(
        &pts,
        &arcs,
        &[(6, Role::T), (7, Role::B)],
        Surface::Cylinder,
        &[&[6, 1, 7]],
        &[&[0, 1, 2, 3, 4, 5, 0], &[8, 9, 10, 8]],
        Some((0.0, 0.0)),
    );
    assert!(matches!(reroute_cylinder(&sys), Err(Error::Precondition(_))));
}

#[test]
fn random_suite_covers_bounce_cross_and_shared_edges() {
    let (mut bounce, mut cross, mut shared) = (0, 0, 0);
    for sys in random_suite() {
        for v in &sys.verticals {
            for h in &sys.horizontals {
                if !v.edge_set().is_disjoint(&h.edge_set()) {
                    shared += 1;
                }
                for &u in v.vertices() {
                    match sys.embedding.classify_meeting(h, v, u) {
                        Ok(MeetingKind::Bounce) => bounce += 1,
                        Ok(MeetingKind::Cross) => cross += 1,
                        Err(_) => {}
                    }
                }
            }
        }
    }
    eprintln!("bounce {bounce} cross {cross} shared {shared}");
    assert!(bounce > 0 && cross > 0 && shared > 0);
}
