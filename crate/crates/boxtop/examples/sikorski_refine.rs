//! Refine a cover into disjoint cells using a level witness: each point
//! takes its first cell that fits inside a cover member, and the chosen
//! cells automatically partition the space.
//!
//! ```bash
//! cargo run --example sikorski_refine
//! ```

use boxtop::metrisable::{ordinal_witness, sikorski_refine, BaseFamily};
use boxtop::pointset::PointSet;

fn main() -> Result<(), boxtop::Error> {
    // The ordinal surrogate {0, 1, 2, top}: isolated points plus a top
    // whose neighbourhoods are tails.
    let witness = ordinal_witness(3)?;
    let labels = witness.labels().to_vec();
    println!("points: {:?}", labels);

    let cover = BaseFamily::new(
        labels.clone(),
        vec![
            PointSet::from_indices(4, [0]),
            PointSet::from_indices(4, [1, 2, 3]),
            PointSet::from_indices(4, [0, 1]), // redundant member
        ],
    )?;

    let cells = sikorski_refine(&witness, &cover)?;
    println!("disjoint refinement:");
    for cell in &cells {
        let members: Vec<&str> = cell.iter().map(|i| labels[i].as_str()).collect();
        println!("  {{{}}}", members.join(", "));
    }

    // A cover with no cell small enough at some point is rejected with
    // that point's name.
    let hopeless = BaseFamily::new(labels.clone(), vec![PointSet::from_indices(4, [0])])?;
    match sikorski_refine(&witness, &hopeless) {
        Err(e) => println!("unrefinable cover: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
