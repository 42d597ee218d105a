// Factor a disguised diagonal matrix `P * diag(t^a) * Q` and check the
// returned certificate `P' M Q' = D` by exact multiplication.

use jetsplit::{
    birkhoff_split, random_unimodular, verify_certificate, FieldSpec, LaurentMatrix, LaurentPoly, PolySide,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let f = FieldSpec::new(5)?;
    let a = [3, -1, 3, 0];
    let p = random_unimodular(f, 4, PolySide::Plus, 2, 11)?;
    let q = random_unimodular(f, 4, PolySide::Minus, 2, 12)?;
    let m = &(&p * &LaurentMatrix::monomial_diagonal(f, &a)) * &q;
    println!("M = {m}");

    let (splitting, cert) = birkhoff_split(&m)?;
    println!("splitting type: {splitting}");
    println!("D = {}", cert.d);
    assert_eq!(splitting.degrees(), &[3, 3, 0, -1]);
    assert!(verify_certificate(&m, &cert));
    assert!(cert.p.side_check(PolySide::Plus));
    assert!(cert.q.side_check(PolySide::Minus));

    // a tampered certificate is rejected
    let mut bad = cert.clone();
    let e = bad.d.get(0, 0).clone();
    bad.d.set(0, 0, e.checked_add(&LaurentPoly::one(f))?);
    assert!(!verify_certificate(&m, &bad));
    println!("tampered certificate rejected");
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
