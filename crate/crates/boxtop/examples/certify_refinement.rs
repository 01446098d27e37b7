//! Check the three refinement properties of one family against another
//! and print the machine-readable certificate.
//!
//! ```bash
//! cargo run --example certify_refinement
//! ```

use boxtop::covers::{certify_with_union, DensityMode};
use boxtop::{Config, CubeFamily};

fn main() -> Result<(), boxtop::Error> {
    let cfg = Config::default();
    let base = CubeFamily::parse(&["1-", "-1", "00"])?;
    let refinement = CubeFamily::parse(&["1-", "01", "00"])?;

    let cert = certify_with_union(&base, &refinement, DensityMode::Exhaustive, &cfg)?;
    println!("base:       {:?}", base.patterns());
    println!("refinement: {:?}", refinement.patterns());
    println!("certificate: {}", serde_json::to_string_pretty(&cert)?);

    // A failing refinement carries witnesses for exactly the failed parts.
    let not_dense = CubeFamily::parse(&["00", "01"])?;
    let cert = certify_with_union(&base, &not_dense, DensityMode::Exhaustive, &cfg)?;
    println!(
        "\ndropping the upper half: dense_ok={}, uncovered point: {:?}",
        cert.dense_ok, cert.witnesses.dense
    );
    Ok(())
}
