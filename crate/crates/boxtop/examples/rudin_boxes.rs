//! Partition a product of tail spaces against a cover of interval boxes by
//! repeated splitting, and verify the result by full enumeration.
//!
//! ```bash
//! cargo run --example rudin_boxes
//! ```

use boxtop::tailbox::{
    rudin_refine_trace, verify_box_refinement, BasicFactor::*, IntervalBox, TailBoxCover,
    TailProfile,
};

fn main() -> Result<(), boxtop::Error> {
    // Two coordinates {0, 1, 2, top} each.
    let profile = TailProfile::new(vec![3, 3])?;
    let mut boxes = vec![IntervalBox::new(vec![Tail(2), Tail(2)])];
    for v in 0..3 {
        boxes.push(IntervalBox::new(vec![Singleton(v), Tail(0)]));
        boxes.push(IntervalBox::new(vec![Tail(0), Singleton(v)]));
    }
    let cover = TailBoxCover::new(profile, boxes)?;

    let trace = rudin_refine_trace(&cover)?;
    println!(
        "{} iterations, ranks {:?}, {} boxes:",
        trace.iterations,
        trace.ranks,
        trace.family.len()
    );
    for b in &trace.family {
        println!("  {}", b.display(cover.profile()));
    }

    let cert = verify_box_refinement(&cover, &trace.family)?;
    println!(
        "disjoint: {}, covers: {}, refines: {}",
        cert.disjoint_ok, cert.cover_ok, cert.refines_ok
    );
    Ok(())
}
