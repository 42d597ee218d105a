// Left and right splitting types of `P^1(O(n))` over several fields: the
// left type jumps when the characteristic divides `n`.

use jetsplit::report::split_report;
use jetsplit::{FieldSpec, JetParams, ModuleSide};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for p in [0, 2, 3, 5] {
        let f = FieldSpec::new(p)?;
        for n in [4, 5, 6] {
            let left = split_report(&JetParams::new(n, 1, f, ModuleSide::Left)?)?;
            let right = split_report(&JetParams::new(n, 1, f, ModuleSide::Right)?)?;
            println!("{f:>4} n={n}: left {:<12} right {}", left.splitting.to_string(), right.splitting);
            let expected = if f.divides(n) { vec![n, n - 2] } else { vec![n - 1, n - 1] };
            assert_eq!(left.degrees, expected);
            assert_eq!(right.degrees, vec![n, n - 2]);
        }
    }
    let json = serde_json::to_string(&split_report(&JetParams::left(4, 1, FieldSpec::new(2)?)?)?)?;
    println!("{json}");
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
