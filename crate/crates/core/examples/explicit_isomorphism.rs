// Solve the binomial systems `A_r x = b_r`, assemble the chart maps
// `phi0`, `phi1` and check that they glue to `O(n-k)^{k+1} -> P^k(O(n))`.

use jetsplit::binomsys::{
    build_system, explicit_isomorphism, gluing_identity_holds, solve_system, IsomorphismOutcome,
};
use jetsplit::FieldSpec;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let q = FieldSpec::RATIONALS;
    let (n, k) = (5, 2);
    for r in 1..=k {
        let sol = solve_system(&build_system(n, k, r, q)?);
        let x: Vec<String> = sol.x.iter().map(ToString::to_string).collect();
        println!("r={r}: {:?}, x = ({})", sol.status, x.join(", "));
    }
    match explicit_isomorphism(n, k, q)? {
        IsomorphismOutcome::Isomorphism { phi0, phi1, splitting } => {
            println!("phi0 = {phi0}");
            println!("phi1 = {phi1}");
            println!("P^{k}(O({n})) = {splitting}");
            assert!(gluing_identity_holds(n, k, &phi0, &phi1)?);
        }
        other => return Err(format!("unexpected outcome {other:?}").into()),
    }

    // over F_2 the construction breaks down for n = 4
    let f2 = FieldSpec::new(2)?;
    for k in [1, 2] {
        println!("n=4 k={k} over F_2: {:?}", explicit_isomorphism(4, k, f2)?);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
