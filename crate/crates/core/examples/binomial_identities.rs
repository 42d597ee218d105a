// The determinant formula for `A_r` and the binomial reduction identity,
// both checked in exact rational arithmetic.

use jetsplit::binomsys::{binomial_lemma_check, det_formula_check};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for (n, k, r) in [(4, 2, 1), (6, 3, 2), (10, 5, 5)] {
        let (det, product) = det_formula_check(n, k, r)?;
        println!("n={n} k={k} r={r}: |A_r| = {det}, product = {product}");
        assert!(det == product || det == -product);
    }
    let mut count = 0;
    for n in 0..=8 {
        for k in 0..=n {
            for a in 0..=k {
                for b in 0..=k {
                    assert!(binomial_lemma_check(n, k, a, b)?);
                    count += 1;
                }
            }
        }
    }
    println!("reduction identity holds in {count} cases");
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
