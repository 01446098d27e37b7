//! Seeded instance generation: random families with density repair,
//! hierarchical ultrametrics, tail-box covers. Same seed, same instances,
//! on any platform.
//!
//! ```bash
//! cargo run --example random_instances
//! ```

use boxtop::covers::{is_dense, DensityMode};
use boxtop::gen;
use boxtop::Config;

fn main() -> Result<(), boxtop::Error> {
    let cfg = Config::default();
    let mut rng = gen::rng_for_seed(7);

    let raw = gen::random_family(&mut rng, 8, 6, 3);
    let check = is_dense(&raw, DensityMode::Exhaustive, &cfg)?;
    println!(
        "raw family: {} cubes, dense: {}, first gap: {:?}",
        raw.len(),
        check.dense,
        check.witness.map(|p| p.to_string())
    );

    let mut rng = gen::rng_for_seed(7);
    let repaired = gen::random_dense_family(&mut rng, 8, 6, 3, 64).expect("repair fits");
    println!(
        "repaired:   {} cubes ({} point cubes added), dense: {}",
        repaired.len(),
        repaired.len() - raw.len(),
        is_dense(&repaired, DensityMode::Exhaustive, &cfg)?.dense
    );

    let metric = gen::random_ultrametric(&mut rng, 8);
    println!("\nhierarchical ultrametric on {} points", metric.point_count());

    let cover = gen::random_tailbox_cover(&mut rng, 3, 4);
    println!(
        "tail-box cover: {} coordinates, {} boxes",
        cover.profile().coords(),
        cover.boxes().len()
    );
    Ok(())
}
