//! Refine a dense family into disjoint prefix cubes, and show how the
//! coordinate order decides how fine the output has to be.
//!
//! ```bash
//! cargo run --example prefix_ladder
//! ```

use boxtop::refine::{identity_order, prefix_ladder_refine};
use boxtop::CubeFamily;

fn main() -> Result<(), boxtop::Error> {
    let family = CubeFamily::parse(&["--1", "--0"])?;
    println!("input: {:?}", family.patterns());

    // The natural order cannot decide anything before coordinate 2, so the
    // trie bottoms out in all eight points.
    let natural = prefix_ladder_refine(&family, &identity_order(3))?;
    println!("order 0,1,2 -> {} cubes: {:?}", natural.len(), natural.patterns());

    // Splitting on coordinate 2 first decides at depth one.
    let smart = prefix_ladder_refine(&family, &[2, 0, 1])?;
    println!("order 2,0,1 -> {} cubes: {:?}", smart.len(), smart.patterns());

    // Non-dense input fails with the first point the trie cannot cover.
    let gappy = CubeFamily::parse(&["0-", "11"])?;
    match prefix_ladder_refine(&gappy, &identity_order(2)) {
        Err(e) => println!("gappy input: {e}"),
        Ok(_) => unreachable!("the family misses 10"),
    }
    Ok(())
}
