// The independent oracle: count global sections `h0(E(m))` by exact linear
// algebra and read the splitting type off the jumps.

use jetsplit::{h0_dimension, oracle_split, FieldSpec, JetParams};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let f = FieldSpec::new(2)?;
    let m = JetParams::left(4, 1, f)?.transition();
    println!("P^1(O(4)) over {f}");
    for twist in -6..=0 {
        println!("  h0(E({twist:>2})) = {}", h0_dimension(&m, twist)?);
    }
    let s = oracle_split(&m)?;
    println!("oracle splitting: {s}");
    assert_eq!(s.degrees(), &[4, 2]);
    for twist in -6..=0 {
        assert_eq!(h0_dimension(&m, twist)?, s.h0(twist));
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
