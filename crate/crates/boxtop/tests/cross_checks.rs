//! Cross-module consistency checks: the witness machinery and the cube
//! refinement algorithms describe the same refinements when pointed at the
//! same covers.

use std::collections::BTreeSet;

use boxtop::covers::{is_antichain, is_dense, union_preserved, DensityMode};
use boxtop::cube::CubeFamily;
use boxtop::gen;
use boxtop::metrisable::{bounded_box_witness, sikorski_refine, BaseFamily};
use boxtop::pointset::PointSet;
use boxtop::refine::{disjointify, identity_order, prefix_ladder_refine};
use boxtop::Config;

/// Point sets of a cube family as label sets, for comparing against
/// witness cells.
fn family_point_sets(family: &CubeFamily) -> BTreeSet<BTreeSet<String>> {
    family
        .iter()
        .map(|c| {
            c.points(24)
                .unwrap()
                .iter()
                .map(|p| p.to_string())
                .collect()
        })
        .collect()
}

fn cells_as_label_sets(labels: &[String], cells: &[PointSet]) -> BTreeSet<BTreeSet<String>> {
    cells
        .iter()
        .map(|cell| cell.iter().map(|i| labels[i].clone()).collect())
        .collect()
}

/// When a prefix-cube cover decides exactly at the witness ladder depths,
/// the level-picking refinement and the trie refinement produce the same
/// partition.
#[test]
fn sikorski_on_cylinder_witness_matches_ladder_refinement() {
    for (n, ladder, cover_patterns) in [
        (3usize, vec![1usize, 2], vec!["0--", "10-", "11-"]),
        (4, vec![1, 2, 3], vec!["0---", "10--", "110-", "111-"]),
    ] {
        let witness = bounded_box_witness(n, &ladder).unwrap();
        let cover_family = CubeFamily::parse(&cover_patterns).unwrap();
        let cover_sets: Vec<PointSet> = cover_family
            .iter()
            .map(|c| {
                PointSet::from_indices(
                    1 << n,
                    c.points(24).unwrap().iter().map(|p| p.index() as usize),
                )
            })
            .collect();
        let cover = BaseFamily::new(witness.labels().to_vec(), cover_sets).unwrap();

        let cells = sikorski_refine(&witness, &cover).unwrap();
        let ladder_out = prefix_ladder_refine(&cover_family, &identity_order(n)).unwrap();

        assert_eq!(
            cells_as_label_sets(witness.labels(), &cells),
            family_point_sets(&ladder_out),
            "partitions differ for n={n}, ladder {ladder:?}"
        );
    }
}

/// A dense antichain refinement pushes density back to the refined family.
#[test]
fn dense_refinement_implies_dense_base() {
    let cfg = Config::default();
    let mut rng = gen::rng_for_seed(0xCC01);
    let mut dense_seen = 0;
    for _ in 0..300 {
        let family = gen::random_family(&mut rng, 6, 10, 3);
        let refined = disjointify(&family, &cfg).unwrap();
        assert!(is_antichain(&refined).antichain);
        if is_dense(&refined, DensityMode::Exhaustive, &cfg).unwrap().dense {
            dense_seen += 1;
            assert!(
                is_dense(&family, DensityMode::Exhaustive, &cfg).unwrap().dense,
                "dense refinement of a non-dense family"
            );
        }
    }
    assert!(dense_seen > 0, "generator never produced a dense family");
}

/// Permuting the input order changes the cubes but not the covered set.
#[test]
fn disjointify_is_order_invariant_in_point_sets() {
    let cfg = Config::default();
    let mut rng = gen::rng_for_seed(0xCC02);
    for _ in 0..100 {
        let family = gen::random_family(&mut rng, 7, 8, 3);
        let mut reversed: Vec<_> = family.cubes().to_vec();
        reversed.reverse();
        let reversed = CubeFamily::new(family.dim(), reversed).unwrap();
        let a = disjointify(&family, &cfg).unwrap();
        let b = disjointify(&reversed, &cfg).unwrap();
        assert!(
            union_preserved(&a, &b, DensityMode::Exhaustive, &cfg)
                .unwrap()
                .preserved
        );
    }
}
