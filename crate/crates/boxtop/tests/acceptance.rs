//! Acceptance suite: one test per verification criterion, each printing a
//! PASS line with its instance count and elapsed time (visible with
//! `cargo test --test acceptance -- --nocapture`).
//!
//! Where a criterion demands exhaustive point verification, the checks here
//! go through a small oracle that works directly on pattern strings and
//! bit indices, independent of the library's cube representation and
//! decision procedures.

use std::collections::BTreeSet;
use std::time::Instant;

use boxtop::covers::{
    certify_with_union, is_dense, union_preserved, DensityMode,
};
use boxtop::cube::{CubeFamily, Point};
use boxtop::gen;
use boxtop::metrisable::{
    check_witness, check_witness_structure, product_box_base, product_witness, sikorski_refine,
    ultrametric_to_witness, witness_to_ultrametric, MetrisabilityWitness,
};
use boxtop::refine::{diagonal_witness, disjointify, identity_order, prefix_ladder_refine};
use boxtop::singular::{singular_cover_cube, singular_disjoint_cover, SingularParams};
use boxtop::tailbox::{rudin_refine_trace, verify_box_refinement};
use boxtop::Config;

// ---------------------------------------------------------------------
// Pattern-string oracle: exhaustive point enumeration from the text form.
// ---------------------------------------------------------------------

/// Per-point coverage counts for a family given as pattern strings, point
/// index big-endian in coordinate 0.
fn oracle_counts(patterns: &[String], dim: usize) -> Vec<u32> {
    let mut counts = vec![0u32; 1 << dim];
    for p in patterns {
        assert_eq!(p.len(), dim, "oracle pattern length");
        let mut base = 0usize;
        let mut free_mask = 0usize;
        for (i, ch) in p.chars().enumerate() {
            let bit = 1usize << (dim - 1 - i);
            match ch {
                '1' => base |= bit,
                '0' => {}
                '-' => free_mask |= bit,
                _ => panic!("bad oracle pattern {p:?}"),
            }
        }
        let mut sub = 0usize;
        loop {
            counts[base | sub] += 1;
            sub = sub.wrapping_sub(free_mask) & free_mask;
            if sub == 0 {
                break;
            }
        }
    }
    counts
}

/// Textual subfunction test: `coarse` assigns a subset of `fine`'s
/// coordinates with equal values.
fn oracle_extends(fine: &str, coarse: &str) -> bool {
    fine.chars()
        .zip(coarse.chars())
        .all(|(f, c)| c == '-' || c == f)
}

fn oracle_refines(base: &[String], refinement: &[String]) -> bool {
    refinement
        .iter()
        .all(|r| base.iter().any(|s| oracle_extends(r, s)))
}

fn oracle_point_in(pattern: &str, point: &str) -> bool {
    pattern
        .chars()
        .zip(point.chars())
        .all(|(c, p)| c == '-' || c == p)
}

struct OracleVerdict {
    dense: bool,
    disjoint: bool,
}

fn oracle_family_checks(patterns: &[String], dim: usize) -> OracleVerdict {
    let counts = oracle_counts(patterns, dim);
    OracleVerdict {
        dense: counts.iter().all(|&c| c >= 1),
        disjoint: counts.iter().all(|&c| c <= 1),
    }
}

fn pass(criterion: &str, instances: usize, started: Instant) {
    println!(
        "{criterion}: PASS ({instances} instances, {:.2?})",
        started.elapsed()
    );
}

// ---------------------------------------------------------------------
// 1. Dense families: both refinement algorithms produce certified dense
//    antichains, confirmed by exhaustive point enumeration.
// ---------------------------------------------------------------------
#[test]
fn criterion_01_refinement_certificates() {
    let started = Instant::now();
    let cfg = Config::default();
    let mut rng = gen::rng_for_seed(0xACC1);
    let count = 1000;
    for i in 0..count {
        let family = gen::dense_instance(&mut rng, 4..=16);
        assert!(family.len() <= 64, "instance {i}: too many cubes");
        let dim = family.dim();
        let input_patterns = family.patterns();
        let ladder = prefix_ladder_refine(&family, &identity_order(dim))
            .unwrap_or_else(|e| panic!("instance {i}: ladder failed: {e}"));
        let disjoint = disjointify(&family, &cfg)
            .unwrap_or_else(|e| panic!("instance {i}: disjointify failed: {e}"));
        for (algo, output) in [("ladder", &ladder), ("disjointify", &disjoint)] {
            let cert = certify_with_union(&family, output, DensityMode::Exhaustive, &cfg)
                .unwrap_or_else(|e| panic!("instance {i}: {algo} certify failed: {e}"));
            assert!(
                cert.dense_ok && cert.antichain_ok && cert.refines_ok,
                "instance {i}: {algo} certificate not all-true: {cert:?}"
            );
            let patterns = output.patterns();
            let verdict = oracle_family_checks(&patterns, dim);
            assert!(verdict.dense, "instance {i}: {algo} oracle density");
            assert!(verdict.disjoint, "instance {i}: {algo} oracle disjointness");
            assert!(
                oracle_refines(&input_patterns, &patterns),
                "instance {i}: {algo} oracle refinement"
            );
        }
    }
    pass("criterion 1 (dense antichain refinements)", count, started);
}

// ---------------------------------------------------------------------
// 2. Union preservation on arbitrary (not necessarily dense) inputs.
// ---------------------------------------------------------------------
#[test]
fn criterion_02_union_preservation() {
    let started = Instant::now();
    let cfg = Config::default();
    let mut rng = gen::rng_for_seed(0xACC2);
    let count = 1000;
    for i in 0..count {
        let dim = rng_range(&mut rng, 4, 16);
        let cubes = rng_range(&mut rng, 0, 24);
        let budget = rng_range(&mut rng, 0, 3);
        let family = gen::random_family(&mut rng, dim, cubes, budget);
        let output = disjointify(&family, &cfg)
            .unwrap_or_else(|e| panic!("instance {i}: disjointify failed: {e}"));
        let in_counts = oracle_counts(&family.patterns(), dim);
        let out_counts = oracle_counts(&output.patterns(), dim);
        assert!(
            out_counts.iter().all(|&c| c <= 1),
            "instance {i}: output overlaps"
        );
        for (p, (&a, &b)) in in_counts.iter().zip(&out_counts).enumerate() {
            assert_eq!(a > 0, b > 0, "instance {i}: union differs at point {p:b}");
        }
        assert!(
            oracle_refines(&family.patterns(), &output.patterns()),
            "instance {i}: output does not refine the input"
        );
    }
    pass("criterion 2 (union preservation)", count, started);
}

// ---------------------------------------------------------------------
// 3. Symbolic density agrees with exhaustive density.
// ---------------------------------------------------------------------
#[test]
fn criterion_03_density_cross_validation() {
    let started = Instant::now();
    let cfg = Config::default();
    let mut rng = gen::rng_for_seed(0xACC3);
    let count = 10_000;
    for i in 0..count {
        let dim = rng_range(&mut rng, 4, 16);
        let cubes = rng_range(&mut rng, 0, 24);
        let budget = rng_range(&mut rng, 0, 3);
        let family = gen::random_family(&mut rng, dim, cubes, budget);
        let symbolic = is_dense(&family, DensityMode::Symbolic, &cfg).unwrap();
        let exhaustive = is_dense(&family, DensityMode::Exhaustive, &cfg).unwrap();
        assert_eq!(
            symbolic.dense, exhaustive.dense,
            "instance {i}: modes disagree on {:?}",
            family.patterns()
        );
        // Any witness from either mode must be genuinely uncovered.
        for p in [&symbolic.witness, &exhaustive.witness].into_iter().flatten() {
            let text = p.to_string();
            assert!(
                family.patterns().iter().all(|c| !oracle_point_in(c, &text)),
                "instance {i}: witness {text} is covered"
            );
        }
    }
    pass("criterion 3 (density oracle cross-validation)", count, started);
}

// ---------------------------------------------------------------------
// 4. Ultrametrics: witness validity, strong triangle inequality of the
//    recovered metric, and exact round-trip of the level partitions.
// ---------------------------------------------------------------------
#[test]
fn criterion_04_ultrametric_suite() {
    let started = Instant::now();
    let mut rng = gen::rng_for_seed(0xACC4);
    let count = 500;
    for i in 0..count {
        let metric = gen::random_ultrametric(&mut rng, 32);
        let witness = ultrametric_to_witness(&metric);
        let report = check_witness(&witness, &witness.cell_base()).unwrap();
        assert!(report.ok, "instance {i}: ball witness rejected: {report:?}");

        let recovered = witness_to_ultrametric(&witness)
            .unwrap_or_else(|e| panic!("instance {i}: recovery failed: {e}"));
        // Independent strong-triangle check over the returned matrix.
        let n = recovered.point_count();
        for x in 0..n {
            assert_eq!(recovered.distance(x, x), 0.0);
            for y in 0..n {
                assert_eq!(recovered.distance(x, y), recovered.distance(y, x));
                if x != y {
                    assert!(recovered.distance(x, y) > 0.0);
                }
                for z in 0..n {
                    assert!(
                        recovered.distance(x, y)
                            <= recovered.distance(x, z).max(recovered.distance(z, y)),
                        "instance {i}: strong triangle fails at ({x},{y},{z})"
                    );
                }
            }
        }
        // Round trip: the level partitions coincide exactly.
        let again = ultrametric_to_witness(&recovered);
        assert_eq!(again.levels(), witness.levels(), "instance {i}: level count");
        for x in 0..n {
            for level in 0..witness.levels() {
                assert_eq!(
                    again.set(x, level),
                    witness.set(x, level),
                    "instance {i}: partition drifted at ({x}, {level})"
                );
            }
        }
    }
    pass("criterion 4 (ultrametric witnesses)", count, started);
}

// ---------------------------------------------------------------------
// 5. Sikorski refinement: disjoint cover refining the input.
// ---------------------------------------------------------------------
#[test]
fn criterion_05_sikorski_refinement() {
    let started = Instant::now();
    let mut rng = gen::rng_for_seed(0xACC5);
    let count = 500;
    for i in 0..count {
        let (witness, cover) = gen::witness_and_cover(&mut rng, 64);
        let cells = sikorski_refine(&witness, &cover)
            .unwrap_or_else(|e| panic!("instance {i}: refine failed: {e}"));
        // Independent set checks over plain BTreeSets.
        let n = witness.point_count();
        let as_sets: Vec<BTreeSet<usize>> =
            cells.iter().map(|c| c.iter().collect()).collect();
        let mut seen: BTreeSet<usize> = BTreeSet::new();
        for (a, cell) in as_sets.iter().enumerate() {
            for x in cell {
                assert!(seen.insert(*x), "instance {i}: cells overlap at {x} (cell {a})");
            }
        }
        assert_eq!(seen.len(), n, "instance {i}: cells miss a point");
        let cover_sets: Vec<BTreeSet<usize>> = cover
            .sets()
            .iter()
            .map(|s| s.iter().collect())
            .collect();
        for (a, cell) in as_sets.iter().enumerate() {
            assert!(
                cover_sets.iter().any(|o| cell.is_subset(o)),
                "instance {i}: cell {a} escapes the cover"
            );
        }
        // Chosen cells are equal or disjoint by construction; dedup means
        // pairwise disjoint here, which the overlap scan above verified.
    }
    pass("criterion 5 (disjoint witness refinements)", count, started);
}

// ---------------------------------------------------------------------
// 6. Product witnesses pass, and any single corrupted factor fails.
// ---------------------------------------------------------------------
#[test]
fn criterion_06_product_witnesses() {
    let started = Instant::now();
    let mut rng = gen::rng_for_seed(0xACC6);
    let count = 200;
    for i in 0..count {
        let n = rng_range(&mut rng, 2, 4);
        let factors = gen::product_factors(&mut rng, n, 6);
        let product = product_witness(&factors)
            .unwrap_or_else(|e| panic!("instance {i}: product failed: {e}"));
        let base = product_box_base(&factors).unwrap();
        let report = check_witness(&product, &base).unwrap();
        assert!(report.ok, "instance {i}: valid product rejected: {report:?}");
        for (index, factor) in factors.iter().enumerate() {
            let broken = gen::corrupt_factor(&mut rng, factor, index)
                .unwrap_or_else(|| panic!("instance {i}: factor {index} not corruptible"));
            assert!(
                !check_witness_structure(&broken).ok,
                "instance {i}: corruption of factor {index} is invisible locally"
            );
            let mut tampered = factors.clone();
            tampered[index] = broken;
            let bad_product = product_witness(&tampered).unwrap();
            assert!(
                !check_witness_structure(&bad_product).ok,
                "instance {i}: corrupted factor {index} left the product valid"
            );
        }
    }
    pass("criterion 6 (product witnesses and corruption)", count, started);
}

// ---------------------------------------------------------------------
// 7. Interval-box refinement: termination, strictly decreasing rank,
//    full-enumeration certificate.
// ---------------------------------------------------------------------
#[test]
fn criterion_07_interval_box_refinement() {
    let started = Instant::now();
    let mut rng = gen::rng_for_seed(0xACC7);
    let count = 1000;
    for i in 0..count {
        let cover = gen::random_tailbox_cover(&mut rng, 4, 5);
        let trace = rudin_refine_trace(&cover)
            .unwrap_or_else(|e| panic!("instance {i}: refine failed: {e}"));
        for pair in trace.ranks.windows(2) {
            assert!(pair[1] < pair[0], "instance {i}: rank did not decrease");
        }
        let cert = verify_box_refinement(&cover, &trace.family).unwrap();
        assert!(cert.all_ok(), "instance {i}: certificate failed: {cert:?}");
        // Independent point scan: every point in exactly one output box.
        for point in cover.profile().points() {
            let holders = trace
                .family
                .iter()
                .filter(|b| b.contains(&point).unwrap())
                .count();
            assert_eq!(holders, 1, "instance {i}: point {point:?} in {holders} boxes");
        }
    }
    pass("criterion 7 (interval-box partitions)", count, started);
}

// ---------------------------------------------------------------------
// 8. Segment covers: disjoint cover of the whole space, point membership,
//    and the worked 40-cube instance.
// ---------------------------------------------------------------------
#[test]
fn criterion_08_segment_covers() {
    let started = Instant::now();
    let mut rng = gen::rng_for_seed(0xACC8);
    let count = 200;
    for i in 0..count {
        let params = gen::random_singular_params(&mut rng, 16);
        let dim = params.total_dim();
        let family = singular_disjoint_cover(&params, 24)
            .unwrap_or_else(|e| panic!("instance {i}: cover failed: {e}"));
        let counts = oracle_counts(&family.patterns(), dim);
        assert!(
            counts.iter().all(|&c| c == 1),
            "instance {i}: not a disjoint cover"
        );
        // f lands in its own cube, for every point of the space.
        for idx in 0..1u64 << dim {
            let f = Point::from_index(dim, idx);
            let cube = singular_cover_cube(&params, &f).unwrap();
            assert!(
                oracle_point_in(&cube.pattern(), &f.to_string()),
                "instance {i}: point {f} escapes its cube"
            );
        }
    }
    let worked = SingularParams::new(2, vec![2, 4], 6, vec![0, 0, 1, 1]).unwrap();
    let family = singular_disjoint_cover(&worked, 24).unwrap();
    assert_eq!(family.len(), 40, "worked instance must have 40 cubes");
    let counts = oracle_counts(&family.patterns(), 6);
    assert!(counts.iter().all(|&c| c == 1));
    pass("criterion 8 (segment covers)", count + 1, started);
}

// ---------------------------------------------------------------------
// 9. Diagonal witnesses: contains the centre, escapes every input cube.
// ---------------------------------------------------------------------
#[test]
fn criterion_09_diagonal_witnesses() {
    let started = Instant::now();
    let mut rng = gen::rng_for_seed(0xACC9);
    let count = 500;
    for i in 0..count {
        let (x, cubes) = gen::diagonal_instance(&mut rng);
        let witness = diagonal_witness(&x, &cubes)
            .unwrap_or_else(|e| panic!("instance {i}: construction failed: {e}"));
        let w_pattern = witness.pattern();
        let x_text = x.to_string();
        assert!(
            oracle_point_in(&w_pattern, &x_text),
            "instance {i}: witness misses the centre"
        );
        for (j, u) in cubes.iter().enumerate() {
            // Exhibit an escape point: flip the centre at a coordinate the
            // witness fixes but the cube leaves free.
            let u_pattern = u.pattern();
            let coord = w_pattern
                .chars()
                .zip(u_pattern.chars())
                .position(|(w, c)| w != '-' && c == '-')
                .unwrap_or_else(|| panic!("instance {i}: no escape coordinate for cube {j}"));
            let mut escape: Vec<char> = x_text.chars().collect();
            escape[coord] = if escape[coord] == '0' { '1' } else { '0' };
            let escape: String = escape.into_iter().collect();
            assert!(
                oracle_point_in(&u_pattern, &escape),
                "instance {i}: escape point left cube {j}"
            );
            assert!(
                !oracle_point_in(&w_pattern, &escape),
                "instance {i}: cube {j} does not escape the witness"
            );
        }
    }
    pass("criterion 9 (diagonal witnesses)", count, started);
}

// ---------------------------------------------------------------------
// 10. CLI end-to-end: selftest passes and formats round-trip bit-exactly.
// ---------------------------------------------------------------------
#[test]
fn criterion_10_cli_selftest() {
    let started = Instant::now();
    let bin = env!("CARGO_BIN_EXE_boxtop");
    let dir = std::env::temp_dir().join(format!("boxtop-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();

    let status = std::process::Command::new(bin)
        .arg("selftest")
        .stdout(std::process::Stdio::null())
        .stderr(std::process::Stdio::null())
        .status()
        .expect("selftest runs");
    assert_eq!(status.code(), Some(0), "selftest must exit 0");

    // Text -> JSON -> text is the identity on canonical files.
    let text_path = dir.join("family.txt");
    let json_path = dir.join("family.json");
    let back_path = dir.join("family-back.txt");
    std::fs::write(&text_path, "0-1-\n1---\n--0-\n").unwrap();
    for (input, to, out) in [
        (&text_path, "json", &json_path),
        (&json_path, "text", &back_path),
    ] {
        let status = std::process::Command::new(bin)
            .args(["convert", "--to", to, "--out"])
            .arg(out)
            .arg(input)
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(0));
    }
    assert_eq!(
        std::fs::read(&text_path).unwrap(),
        std::fs::read(&back_path).unwrap(),
        "text round trip must be byte identical"
    );
    let json_again = dir.join("family-again.json");
    let status = std::process::Command::new(bin)
        .args(["convert", "--to", "json", "--out"])
        .arg(&json_again)
        .arg(&back_path)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    assert_eq!(
        std::fs::read(&json_path).unwrap(),
        std::fs::read(&json_again).unwrap(),
        "JSON round trip must be byte identical"
    );
    std::fs::remove_dir_all(&dir).ok();
    pass("criterion 10 (CLI selftest and round trips)", 1, started);
}

fn rng_range(rng: &mut rand_chacha::ChaCha8Rng, lo: usize, hi: usize) -> usize {
    use rand::RngExt;
    rng.random_range(lo..=hi)
}

// The library must have been compiled with the family formats available;
// keep one import-level sanity check so acceptance fails loudly if the
// toolchain misbehaves.
#[test]
fn acceptance_sanity() {
    let family = CubeFamily::parse(&["0-", "1-"]).unwrap();
    let check = union_preserved(&family, &family, DensityMode::Exhaustive, &Config::default());
    assert!(check.unwrap().preserved);
    assert!(MetrisabilityWitness::new(vec![], 0, vec![]).is_err());
}
