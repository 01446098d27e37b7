//! Given a point and a short list of cubes around it, build a neighbourhood
//! of the point containing none of them: pick one fresh coordinate per
//! cube and pin the point there.
//!
//! ```bash
//! cargo run --example diagonal_witness
//! ```

use boxtop::refine::diagonal_witness;
use boxtop::{Cube, Point};

fn main() -> Result<(), boxtop::Error> {
    let x = Point::parse("0000")?;
    let around = vec![Cube::parse("00--")?, Cube::parse("0-0-")?];
    let o = diagonal_witness(&x, &around)?;
    println!("x = {x}");
    for u in &around {
        println!("  given neighbourhood {u}");
    }
    println!("witness O = {o}  (contains x, contains no given cube)");

    // With every coordinate pinned by one cube, no fresh coordinate is
    // left and the construction reports which set blocks it.
    let x = Point::parse("11")?;
    match diagonal_witness(&x, &[Cube::parse("11")?]) {
        Err(e) => println!("too-small dimension: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
