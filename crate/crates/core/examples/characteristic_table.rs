// Sweep `n` against several characteristics; cells are computed in
// parallel and laid out in axis order.

use jetsplit::report::table_report;
use jetsplit::ModuleSide;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let t = table_report(1, 1, 10, &[0, 2, 3, 5], &[ModuleSide::Left, ModuleSide::Right])?;
    println!("{t}");
    for (n, p) in &t.differing {
        assert!(*p == 0 || n % *p as i64 != 0);
    }

    let t2 = table_report(2, 2, 7, &[0, 2, 3], &[ModuleSide::Left])?;
    println!("{t2}");
    println!("{}", serde_json::to_string(&t2.axes)?);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
