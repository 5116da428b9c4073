use cylgrid::digraph::menger_paths;
use cylgrid::embedding::{Role, RotationEmbedding, Surface};
use cylgrid::generators::random_disk_system;
use cylgrid::rerouting::{hits_in_reverse, reroute_disk, stays_inside, RerouteMode, Rerouted, RoutedSystem};
use cylgrid::{Digraph, DirectedPath, EdgeId, VertexSet};

pub type Pt = (f64, f64);

/// Builds a system from coordinates, arcs, roles and path vertex lists.
pub fn build(
    pts: &[Pt],
    arcs: &[(usize, usize)],
    roles: &[(usize, Role)],
    surface: Surface,
    verticals: &[&[usize]],
    horizontals: &[&[usize]],
    hole: Option<Pt>,
) -> RoutedSystem {
    let d = Digraph::from_edges(pts.len(), arcs);
    let coords = pts.iter().copied().enumerate().collect();
    let roles = roles.iter().copied().collect();
    let embedding = RotationEmbedding::from_coordinates(d, &coords, surface, roles, hole).unwrap();
    let path = |vs: &&[usize]| DirectedPath::from_vertices(embedding.host(), vs).unwrap();
    let sys = RoutedSystem {
        verticals: verticals.iter().map(path).collect(),
        horizontals: horizontals.iter().map(path).collect(),
        embedding: embedding.clone(),
    };
    assert!(sys.validate().is_valid(), "{}", sys.validate());
    sys
}

pub fn union_size(sys: &RoutedSystem) -> usize {
    sys.verticals
        .iter()
        .chain(&sys.horizontals)
        .flat_map(|p| p.edges().iter().copied())
        .collect::<std::collections::BTreeSet<_>>()
        .len()
}

/// Smallest edge set carrying full families inside the allowed regions,
/// by exhaustion over edge subsets checked with flows.
pub fn min_union_oracle(sys: &RoutedSystem) -> usize {
    let emb = &sys.embedding;
    let d = emb.host();
    let rv = emb.left_right_order(&sys.verticals).unwrap();
    let rh = emb.bottom_top_order(&sys.horizontals).unwrap();
    let region_v = emb.left_region(&sys.verticals[*rv.last().unwrap()]).unwrap();
    let region_h = emb.below_region(&sys.horizontals[*rh.last().unwrap()]).unwrap();
    let edges: Vec<EdgeId> = d.edge_ids().collect();
    assert!(edges.len() <= 14);
    let b = emb.vertices_with_role(Role::B);
    let t = emb.vertices_with_role(Role::T);
    let r = emb.vertices_with_role(Role::R);
    let l = emb.vertices_with_role(Role::L);
    let carries = |mask: u32, region: &VertexSet, from: &VertexSet, to: &VertexSet| {
        let chosen: Vec<EdgeId> = edges
            .iter()
            .enumerate()
            .filter(|&(i, e)| {
                let e = d.edge(*e).unwrap();
                mask >> i & 1 == 1 && region.contains(&e.tail) && region.contains(&e.head)
            })
            .map(|(_, &e)| e)
            .collect();
        let sub = d.subgraph(region, &chosen).unwrap();
        menger_paths(&sub, from, to, from.len()).unwrap().paths().is_some()
    };
    let mut best = edges.len();
    for mask in 0u32..(1 << edges.len()) {
        let size = mask.count_ones() as usize;
        if size >= best {
            continue;
        }
        if carries(mask, &region_v, &b, &t) && carries(mask, &region_h, &r, &l) {
            best = size;
        }
    }
    best
}

pub fn check_output(input: &RoutedSystem, mode: RerouteMode) -> Rerouted {
    let out = reroute_disk(input, mode).unwrap();
    assert!(out.system.validate().is_valid(), "{}", out.system.validate());
    assert_eq!(out.system.verticals.len(), input.verticals.len());
    assert_eq!(out.system.horizontals.len(), input.horizontals.len());
    for v in &out.system.verticals {
        for h in &out.system.horizontals {
            assert!(hits_in_reverse(h, v));
            assert!(v.edge_set().is_disjoint(&h.edge_set()));
        }
    }
    assert!(stays_inside(input, &out.routing).unwrap());
    let replayed = out.model.replay(input.embedding.host()).unwrap();
    assert_eq!(&replayed, out.system.embedding.host());
    out
}

pub fn grid_2x2() -> RoutedSystem {
    let pts = [
        (1.0, 1.0),
        (2.0, 1.0),
        (1.0, 2.0),
        (2.0, 2.0),
        (1.0, 0.0),
        (2.0, 0.0),
        (1.0, 3.0),
        (2.0, 3.0),
        (3.0, 1.0),
        (3.0, 2.0),
        (0.0, 1.0),
        (0.0, 2.0),
    ];
    let arcs = [
        (4, 0),
        (0, 2),
        (2, 6),
        (5, 1),
        (1, 3),
        (3, 7),
        (8, 1),
        (1, 0),
        (0, 10),
        (9, 3),
        (3, 2),
        (2, 11),
    ];
    let roles = [
        (4, Role::B),
        (5, Role::B),
        (6, Role::T),
        (7, Role::T),
        (8, Role::R),
        (9, Role::R),
        (10, Role::L),
        (11, Role::L),
    ];
    build(
        &pts,
        &arcs,
        &roles,
        Surface::Disk,
        &[&[4, 0, 2, 6], &[5, 1, 3, 7]],
        &[&[8, 1, 0, 10], &[9, 3, 2, 11]],
        None,
    )
}

/// A vertical that enters the horizontal, runs along one of its edges, dips
/// below it and comes back up further left.
pub fn shared_edge_fixture() -> RoutedSystem {
    // r p2 p1 k l b c t
    let pts = [(3.0, 2.0), (2.0, 2.0), (1.0, 2.0), (0.5, 2.0), (0.0, 2.0), (2.0, 0.0), (1.0, 1.0), (0.5, 3.0)];
    let arcs = [(0, 1), (1, 2), (2, 3), (3, 4), (5, 1), (2, 6), (6, 3), (3, 7)];
    let roles = [(0, Role::R), (4, Role::L), (5, Role::B), (7, Role::T)];
    build(&pts, &arcs, &roles, Surface::Disk, &[&[5, 1, 2, 6, 3, 7]], &[&[0, 1, 2, 3, 4]], None)
}

/// A vertical that touches the horizontal, bounces back below it and
/// crosses further left.
pub fn bounce_fixture() -> RoutedSystem {
    // r u w l b x y t
    let pts = [(3.0, 2.0), (2.0, 2.0), (1.0, 2.0), (0.0, 2.0), (2.0, 0.0), (2.0, 1.0), (1.5, 1.0), (1.0, 3.0)];
    let arcs = [(0, 1), (1, 2), (2, 3), (4, 5), (5, 1), (1, 6), (6, 2), (2, 7)];
    let roles = [(0, Role::R), (3, Role::L), (4, Role::B), (7, Role::T)];
    build(&pts, &arcs, &roles, Surface::Disk, &[&[4, 5, 1, 6, 2, 7]], &[&[0, 1, 2, 3]], None)
}

/// A horizontal that detours left of the vertical between two of its vertices.
pub fn shortcut_fixture() -> RoutedSystem {
    // b a c t r e l
    let pts = [(1.0, 0.0), (1.0, 1.0), (1.0, 2.0), (1.0, 3.0), (3.0, 1.0), (0.5, 1.5), (0.0, 2.0)];
    let arcs = [(0, 1), (1, 2), (2, 3), (4, 1), (1, 5), (5, 2), (2, 6)];
    let roles = [(0, Role::B), (3, Role::T), (4, Role::R), (6, Role::L)];
    build(&pts, &arcs, &roles, Surface::Disk, &[&[0, 1, 2, 3]], &[&[4, 1, 5, 2, 6]], None)
}

pub fn random_suite() -> Vec<RoutedSystem> {
    let mut out = Vec::new();
    let shapes = [(2, 2, 0.3), (3, 2, 0.2), (2, 3, 0.2), (3, 3, 0.0)];
    for seed in 0..400u64 {
        let (c, r, extra) = shapes[seed as usize % shapes.len()];
        if let Some(sys) = random_disk_system(seed, c, r, extra) {
            out.push(sys);
        }
        if out.len() == 24 {
            break;
        }
    }
    out
}
