use cylgrid::gridextract::{assemble_cylindrical_grid, AssemblyBranch, AssemblyInput};
use cylgrid::minors::{generate_cylindrical_grid, validate_cylindrical_grid};
use cylgrid::DirectedPath;
use cylgrid::Error;
use proptest::prelude::*;

const BUDGET: u64 = 1 << 20;

#[test]
fn canonical_input_validates() {
    let input = AssemblyInput::from_cylindrical_grid(6).unwrap();
    let r = input.validate();
    assert!(r.is_valid(), "{r}");
    assert_eq!(input.in_paths.len(), 6);
    assert_eq!(input.out_paths.len(), 6);
}

#[test]
fn disjoint_outer_parts_give_a_grid() {
    for (m, n) in [(6, 1), (12, 2)] {
        let input = AssemblyInput::from_cylindrical_grid(m).unwrap();
        let a = assemble_cylindrical_grid(&input, n, BUDGET).unwrap();
        assert_eq!(a.branch, AssemblyBranch::DisjointOuterParts);
        assert_eq!(a.witness.n, n);
        assert_eq!(a.model.replay(input.host()).unwrap(), a.digraph);
        let r = validate_cylindrical_grid(&a.digraph, &a.witness);
        assert!(r.is_valid(), "{r}");
        assert_eq!(a.digraph.vertex_count(), 2 * n * n);
        assert_eq!(a.digraph.edge_count(), 2 * n * n + 2 * n * (n - 1));
    }
}

#[test]
fn sizes_are_monotone() {
    let input = AssemblyInput::from_cylindrical_grid(12).unwrap();
    assert!(assemble_cylindrical_grid(&input, 2, BUDGET).is_ok());
    assert!(assemble_cylindrical_grid(&input, 1, BUDGET).is_ok());
}

#[test]
fn too_few_circuits_is_a_precondition_error() {
    let input = AssemblyInput::from_cylindrical_grid(8).unwrap();
    assert!(matches!(
        assemble_cylindrical_grid(&input, 2, BUDGET),
        Err(Error::Precondition(_))
    ));
    assert!(matches!(
        assemble_cylindrical_grid(&input, 0, BUDGET),
        Err(Error::InvalidArgument(_))
    ));
}

#[test]
fn misordered_circuits_are_rejected() {
    let mut input = AssemblyInput::from_cylindrical_grid(4).unwrap();
    input.circuits.swap(0, 1);
    assert!(!input.validate().is_valid());
    assert!(matches!(
        assemble_cylindrical_grid(&input, 1, BUDGET),
        Err(Error::Verification(_))
    ));
}

#[test]
fn swapped_path_families_are_rejected() {
    let mut input = AssemblyInput::from_cylindrical_grid(4).unwrap();
    std::mem::swap(&mut input.in_paths, &mut input.out_paths);
    assert!(!input.validate().is_valid());
}

#[test]
fn meeting_outer_parts_use_the_intersecting_branch() {
    let m = 8;
    let g = generate_cylindrical_grid(m).unwrap();
    let w = &g.witness;
    let mut canon = AssemblyInput::from_cylindrical_grid(m).unwrap();
    // The out-path of column m climbs to ring m - 1, runs around it through
    // the in-path's vertex and leaves outward at column 1.
    let mut q: Vec<_> = (1..m).map(|i| w.vertex(i, m)).collect();
    q.extend((m + 1..=2 * m).map(|j| w.vertex(m - 1, j)));
    q.extend([w.vertex(m - 1, 1), w.vertex(m, 1)]);
    let q = DirectedPath::from_vertices(&g.digraph, &q).unwrap();
    canon.in_paths.truncate(1);
    canon.out_paths = vec![q];
    assert!(!canon.in_paths[0].is_vertex_disjoint(&canon.out_paths[0]));
    let r = canon.validate();
    assert!(r.is_valid(), "{r}");
    let a = assemble_cylindrical_grid(&canon, 1, BUDGET).unwrap();
    assert_eq!(a.branch, AssemblyBranch::Intersecting);
    assert_eq!(a.model.replay(canon.host()).unwrap(), a.digraph);
    assert!(validate_cylindrical_grid(&a.digraph, &a.witness).is_valid());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn success_is_monotone_in_size(m in 4usize..19) {
        let input = AssemblyInput::from_cylindrical_grid(m).unwrap();
        let ok: Vec<bool> = (1..=3).map(|n| assemble_cylindrical_grid(&input, n, BUDGET).is_ok()).collect();
        for w in ok.windows(2) {
            prop_assert!(w[0] || !w[1], "m = {m}: {ok:?}");
        }
    }
}
