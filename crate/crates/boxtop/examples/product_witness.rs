//! Combine one level witness per factor into a witness on the product,
//! and watch the product check catch a corrupted factor.
//!
//! ```bash
//! cargo run --example product_witness
//! ```

use boxtop::gen;
use boxtop::metrisable::{
    check_witness, check_witness_structure, product_box_base, product_witness,
};

fn main() -> Result<(), boxtop::Error> {
    let mut rng = gen::rng_for_seed(42);
    // Three factors for three levels: factor a participates from level a on.
    let factors = gen::product_factors(&mut rng, 3, 5);
    let product = product_witness(&factors)?;
    println!(
        "product of {} factors: {} points, {} levels",
        factors.len(),
        product.point_count(),
        product.levels()
    );

    let base = product_box_base(&factors)?;
    let report = check_witness(&product, &base)?;
    println!("product check: {}", if report.ok { "ok" } else { "failed" });

    // Corrupt one factor's separation condition at a level the product can
    // see; the assembled table now fails.
    let broken = gen::corrupt_factor(&mut rng, &factors[1], 1).expect("factor is corruptible");
    let mut tampered = factors.clone();
    tampered[1] = broken;
    let bad = product_witness(&tampered)?;
    let report = check_witness_structure(&bad);
    println!(
        "after corrupting factor 1: ok = {}, first finding: {}",
        report.ok,
        report.violations.first().map(|v| v.to_string()).unwrap_or_default()
    );
    Ok(())
}
