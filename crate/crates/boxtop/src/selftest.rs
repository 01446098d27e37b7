//! Reduced-count self-checks covering every capability, wired to the
//! `selftest` subcommand. Each check mirrors one of the full verification
//! suites at a fraction of the instance count, so a binary can vouch for
//! itself in seconds.

use crate::covers::{
    certify_with_union, is_antichain, is_dense, union_bitmap, union_preserved, DensityMode,
};
use crate::cube::{CubeFamily, Point};
use crate::error::Result;
use crate::gen;
use crate::io;
use crate::metrisable::{
    check_witness, check_witness_structure, product_box_base, product_witness, sikorski_refine,
    ultrametric_to_witness, witness_to_ultrametric,
};
use crate::pointset::PointSet;
use crate::refine::{diagonal_witness, disjointify, identity_order, prefix_ladder_refine};
use crate::singular::singular_disjoint_cover;
use crate::tailbox::{rudin_refine_trace, verify_box_refinement};
use crate::Config;

#[derive(Debug)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn outcome(name: &'static str, result: Result<()>) -> CheckOutcome {
    match result {
        Ok(()) => CheckOutcome {
            name,
            passed: true,
            detail: "ok".into(),
        },
        Err(e) => CheckOutcome {
            name,
            passed: false,
            detail: e.to_string(),
        },
    }
}

fn fail(reason: String) -> crate::Error {
    crate::Error::Params { reason }
}

fn mode_for(dim: usize, cfg: &Config) -> DensityMode {
    if dim <= cfg.enum_limit.min(32) {
        DensityMode::Exhaustive
    } else {
        DensityMode::Symbolic
    }
}

/// Run every self-check; deterministic in the seed.
pub fn run_all(seed: u64, cfg: &Config) -> Vec<CheckOutcome> {
    vec![
        outcome("refinement-certificates", dense_refinements(seed, cfg, 60)),
        outcome("union-preservation", union_preservation(seed, cfg, 60)),
        outcome("density-cross-validation", density_cross_validation(seed, cfg, 300)),
        outcome("ultrametric-round-trip", ultrametric_round_trip(seed, 40)),
        outcome("sikorski-refinement", sikorski(seed, 40)),
        outcome("product-witnesses", products(seed, 12)),
        outcome("interval-box-refinement", rudin(seed, 60)),
        outcome("segment-covers", singular(seed, cfg, 20)),
        outcome("diagonal-witnesses", diagonal(seed, 50)),
        outcome("format-round-trips", formats(seed)),
    ]
}

fn dense_refinements(seed: u64, cfg: &Config, count: usize) -> Result<()> {
    let mut rng = gen::rng_for_seed(seed ^ 0x01);
    for i in 0..count {
        let family = gen::dense_instance(&mut rng, 4..=12);
        let mode = mode_for(family.dim(), cfg);
        let ladder = prefix_ladder_refine(&family, &identity_order(family.dim()))?;
        let disjoint = disjointify(&family, cfg)?;
        for (algo, output) in [("ladder", &ladder), ("disjointify", &disjoint)] {
            let cert = certify_with_union(&family, output, mode, cfg)?;
            if !cert.all_ok() {
                return Err(fail(format!("instance {i}: {algo} certificate not all-true")));
            }
        }
    }
    Ok(())
}

fn union_preservation(seed: u64, cfg: &Config, count: usize) -> Result<()> {
    let mut rng = gen::rng_for_seed(seed ^ 0x02);
    for i in 0..count {
        let dim = rng_range(&mut rng, 4, 12);
        let cubes = rng_range(&mut rng, 0, 20);
        let family = gen::random_family(&mut rng, dim, cubes, 3);
        let output = disjointify(&family, cfg)?;
        if !is_antichain(&output).antichain {
            return Err(fail(format!("instance {i}: output not an antichain")));
        }
        let check = union_preserved(&family, &output, mode_for(dim, cfg), cfg)?;
        if !check.preserved {
            return Err(fail(format!("instance {i}: union changed")));
        }
    }
    Ok(())
}

fn density_cross_validation(seed: u64, cfg: &Config, count: usize) -> Result<()> {
    let mut rng = gen::rng_for_seed(seed ^ 0x03);
    for i in 0..count {
        let dim = rng_range(&mut rng, 4, 12);
        let cubes = rng_range(&mut rng, 0, 24);
        let family = gen::random_family(&mut rng, dim, cubes, 3);
        let sym = is_dense(&family, DensityMode::Symbolic, cfg)?;
        let exh = is_dense(&family, DensityMode::Exhaustive, cfg)?;
        if sym.dense != exh.dense {
            return Err(fail(format!("instance {i}: modes disagree")));
        }
    }
    Ok(())
}

fn ultrametric_round_trip(seed: u64, count: usize) -> Result<()> {
    let mut rng = gen::rng_for_seed(seed ^ 0x04);
    for i in 0..count {
        let metric = gen::random_ultrametric(&mut rng, 16);
        let witness = ultrametric_to_witness(&metric);
        let report = check_witness(&witness, &witness.cell_base())?;
        if !report.ok {
            return Err(fail(format!("instance {i}: ball witness rejected")));
        }
        let recovered = witness_to_ultrametric(&witness)?; // validates on construction
        let again = ultrametric_to_witness(&recovered);
        if again != witness {
            return Err(fail(format!("instance {i}: level partitions changed")));
        }
    }
    Ok(())
}

fn sikorski(seed: u64, count: usize) -> Result<()> {
    let mut rng = gen::rng_for_seed(seed ^ 0x05);
    for i in 0..count {
        let (witness, cover) = gen::witness_and_cover(&mut rng, 24);
        let cells = sikorski_refine(&witness, &cover)?;
        let n = witness.point_count();
        let mut union = PointSet::empty(n);
        for (a, cell) in cells.iter().enumerate() {
            for other in &cells[a + 1..] {
                if !cell.is_disjoint(other) {
                    return Err(fail(format!("instance {i}: cells overlap")));
                }
            }
            if !cover.sets().iter().any(|o| cell.is_subset(o)) {
                return Err(fail(format!("instance {i}: cell escapes the cover")));
            }
            union.union_with(cell);
        }
        if union != PointSet::full(n) {
            return Err(fail(format!("instance {i}: cells miss a point")));
        }
    }
    Ok(())
}

fn products(seed: u64, count: usize) -> Result<()> {
    let mut rng = gen::rng_for_seed(seed ^ 0x06);
    for i in 0..count {
        let n = rng_range(&mut rng, 2, 3);
        let factors = gen::product_factors(&mut rng, n, 5);
        let product = product_witness(&factors)?;
        let base = product_box_base(&factors)?;
        if !check_witness(&product, &base)?.ok {
            return Err(fail(format!("instance {i}: valid product rejected")));
        }
        for (index, factor) in factors.iter().enumerate() {
            let Some(broken) = gen::corrupt_factor(&mut rng, factor, index) else {
                return Err(fail(format!("instance {i}: factor {index} not corruptible")));
            };
            let mut tampered = factors.clone();
            tampered[index] = broken;
            let product = product_witness(&tampered)?;
            if check_witness_structure(&product).ok {
                return Err(fail(format!(
                    "instance {i}: corrupted factor {index} went unnoticed"
                )));
            }
        }
    }
    Ok(())
}

fn rudin(seed: u64, count: usize) -> Result<()> {
    let mut rng = gen::rng_for_seed(seed ^ 0x07);
    for i in 0..count {
        let cover = gen::random_tailbox_cover(&mut rng, 4, 5);
        let trace = rudin_refine_trace(&cover)?;
        for pair in trace.ranks.windows(2) {
            if pair[1] >= pair[0] {
                return Err(fail(format!("instance {i}: rank did not decrease")));
            }
        }
        let cert = verify_box_refinement(&cover, &trace.family)?;
        if !cert.all_ok() {
            return Err(fail(format!("instance {i}: box certificate not all-true")));
        }
    }
    Ok(())
}

fn singular(seed: u64, cfg: &Config, count: usize) -> Result<()> {
    let mut rng = gen::rng_for_seed(seed ^ 0x08);
    for i in 0..count {
        let params = gen::random_singular_params(&mut rng, 14);
        let family = singular_disjoint_cover(&params, cfg.enum_limit)?;
        let bitmap = union_bitmap(&family, cfg.enum_limit)?;
        let total: u128 = family.iter().map(|c| c.cardinality()).sum();
        let full = 1u128 << params.total_dim();
        if bitmap.count() as u128 != full || total != full {
            return Err(fail(format!("instance {i}: not a disjoint cover")));
        }
    }
    Ok(())
}

fn diagonal(seed: u64, count: usize) -> Result<()> {
    let mut rng = gen::rng_for_seed(seed ^ 0x09);
    for i in 0..count {
        let (x, cubes) = gen::diagonal_instance(&mut rng);
        let witness = diagonal_witness(&x, &cubes)?;
        if !witness.contains_point(&x)? {
            return Err(fail(format!("instance {i}: witness misses the centre")));
        }
        for (j, u) in cubes.iter().enumerate() {
            let escape_coord = witness
                .support()
                .into_iter()
                .find(|&c| u.state(c).is_none());
            let Some(c) = escape_coord else {
                return Err(fail(format!("instance {i}: no escape from cube {j}")));
            };
            let mut escape = x.clone();
            escape.set(c, !x.bit(c));
            if !u.contains_point(&escape)? || witness.contains_point(&escape)? {
                return Err(fail(format!("instance {i}: escape point invalid for cube {j}")));
            }
        }
    }
    Ok(())
}

fn formats(seed: u64) -> Result<()> {
    let mut rng = gen::rng_for_seed(seed ^ 0x0a);
    let family = gen::random_family(&mut rng, 6, 12, 3);

    let text = io::emit_family_text(&family);
    if io::emit_family_text(&io::parse_family_text(&text)?) != text {
        return Err(fail("family text round trip drifted".into()));
    }
    let json = io::emit_family_json(&family);
    if io::emit_family_json(&io::parse_family_json(&json)?) != json {
        return Err(fail("family JSON round trip drifted".into()));
    }

    let witness = ultrametric_to_witness(&gen::random_ultrametric(&mut rng, 10));
    let json = io::emit_witness_json(&witness);
    if io::emit_witness_json(&io::parse_witness_json(&json)?) != json {
        return Err(fail("witness JSON round trip drifted".into()));
    }

    let metric = gen::random_ultrametric(&mut rng, 10);
    let json = io::emit_ultrametric_json(&metric);
    if io::emit_ultrametric_json(&io::parse_ultrametric_json(&json)?) != json {
        return Err(fail("ultrametric JSON round trip drifted".into()));
    }

    let cover = gen::random_tailbox_cover(&mut rng, 3, 4);
    let json = io::emit_tailbox_json(cover.profile(), cover.boxes());
    let reparsed = io::parse_tailbox_json(&json)?;
    if io::emit_tailbox_json(reparsed.profile(), reparsed.boxes()) != json {
        return Err(fail("tail box JSON round trip drifted".into()));
    }

    let (_, base) = gen::witness_and_cover(&mut rng, 8);
    let json = io::emit_base_family_json(&base);
    let reparsed = io::parse_base_family_json(&json)?;
    if io::emit_base_family_json(&reparsed) != json {
        return Err(fail("base family JSON round trip drifted".into()));
    }

    // Point code round trip at full width.
    let p = Point::parse("101001")?;
    if Point::parse(&p.to_string())? != p {
        return Err(fail("point text round trip drifted".into()));
    }
    let f = CubeFamily::parse(&["0-1"])?;
    if f.dim() != 3 {
        return Err(fail("pattern parse drifted".into()));
    }
    Ok(())
}

fn rng_range(rng: &mut rand_chacha::ChaCha8Rng, lo: usize, hi: usize) -> usize {
    use rand::RngExt;
    rng.random_range(lo..=hi)
}
