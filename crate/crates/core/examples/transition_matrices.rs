// Transition matrices of `P^k(O(n))` in both module structures, and how
// reduction modulo a prime kills binomial entries.

use jetsplit::{untwisted_transition, FieldSpec, JetParams, ModuleSide};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let q = FieldSpec::RATIONALS;
    let f3 = FieldSpec::new(3)?;

    println!("untwisted P^2:        {}", untwisted_transition(2, q)?);

    let left = JetParams::new(3, 1, q, ModuleSide::Left)?.transition();
    println!("P^1(O(3)) left, Q:    {left}");
    assert_eq!(left.to_string(), "[[t^3, 0], [3*t^2, -t^1]]");

    // 3 = 0 in F_3
    let left3 = JetParams::new(3, 1, f3, ModuleSide::Left)?.transition();
    println!("P^1(O(3)) left, F_3:  {left3}");
    assert!(left3.get(1, 0).is_zero());

    let right = JetParams::new(2, 1, q, ModuleSide::Right)?.transition();
    println!("P^1(O(2)) right, Q:   {right}");

    let big = JetParams::left(4, 2, q)?.transition();
    println!("P^2(O(4)) left, Q:    {big}");
    println!("  det = {}", big.det());
    println!("  canonical rows: {:?}", big.canonical_rows());

    assert!(JetParams::new(4, 2, q, ModuleSide::Right).is_err());
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
