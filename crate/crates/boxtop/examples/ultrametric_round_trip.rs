//! Ultrametrics and level witnesses are two views of the same hierarchy:
//! convert one into the other and back.
//!
//! ```bash
//! cargo run --example ultrametric_round_trip
//! ```

use boxtop::metrisable::{ultrametric_to_witness, witness_to_ultrametric, Ultrametric};

fn main() -> Result<(), boxtop::Error> {
    let labels: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
    let metric = Ultrametric::new(
        labels,
        vec![
            vec![0.0, 0.5, 1.0],
            vec![0.5, 0.0, 1.0],
            vec![1.0, 1.0, 0.0],
        ],
    )?;

    let witness = ultrametric_to_witness(&metric);
    println!("levels: {}", witness.levels());
    for level in 0..witness.levels() {
        for (i, label) in witness.labels().iter().enumerate() {
            let members: Vec<&str> = witness
                .set(i, level)
                .iter()
                .map(|j| witness.labels()[j].as_str())
                .collect();
            println!("  U({label}, {level}) = {{{}}}", members.join(", "));
        }
    }

    let recovered = witness_to_ultrametric(&witness)?;
    println!("recovered distances (reindexed to 1/level):");
    for i in 0..recovered.point_count() {
        for j in i + 1..recovered.point_count() {
            println!(
                "  d({}, {}) = {}",
                recovered.labels()[i],
                recovered.labels()[j],
                recovered.distance(i, j)
            );
        }
    }

    // The strong triangle inequality has teeth: this matrix is rejected.
    let bad = Ultrametric::new(
        ["a", "b", "c"].iter().map(|s| s.to_string()).collect(),
        vec![
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 0.5],
            vec![2.0, 0.5, 0.0],
        ],
    );
    println!("\ninvalid matrix: {}", bad.unwrap_err());
    Ok(())
}
