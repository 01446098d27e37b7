//! Disjointify a family in its listed order: each member keeps what the
//! earlier members did not already cover, expanded over the accumulated
//! support.
//!
//! ```bash
//! cargo run --example disjointify
//! ```

use boxtop::covers::{certify_with_union, DensityMode};
use boxtop::refine::{coalesce, disjointify};
use boxtop::{Config, CubeFamily};

fn main() -> Result<(), boxtop::Error> {
    let cfg = Config::default();
    let family = CubeFamily::parse(&["1-", "-1", "00"])?;
    let output = disjointify(&family, &cfg)?;
    println!("{:?} -> {:?}", family.patterns(), output.patterns());

    let cert = certify_with_union(&family, &output, DensityMode::Exhaustive, &cfg)?;
    println!(
        "dense: {}, antichain: {}, refines: {}, union preserved: {:?}",
        cert.dense_ok, cert.antichain_ok, cert.refines_ok, cert.union_preserved_ok
    );

    // Density is not required: the union is preserved either way.
    let sparse = CubeFamily::parse(&["01-", "0-1"])?;
    let output = disjointify(&sparse, &cfg)?;
    println!("\n{:?} -> {:?}", sparse.patterns(), output.patterns());

    // The optional post-pass merges sibling cubes back together.
    let merged = coalesce(&output);
    println!("coalesced -> {:?}", merged.patterns());
    Ok(())
}
