//! Binomial linear systems whose solutions glue chart-local maps
//! `O(n-k) -> P^k(O(n))`, and the determinant identities behind them.
//!
//! For `r = 1..=k` the unknowns `x_{0,r}, ..., x_{r,r}` define, on the `1/t`
//! chart, `phi_r = sum_j x_{j,r} t^{j-r} ds^j`. Rewritten in the `t` chart the
//! coefficient of `dt^l` is `t^{k-r-l} c^r_l` with
//!
//! ```text
//! c^r_l = sum_{j=0}^{r} (-1)^j C(n-j, l-j) x_{j,r}
//! ```
//!
//! and the map is regular on the `t` chart iff `c^r_k = ... = c^r_{k-r+1} = 0`
//! and `c^r_{k-r} = 1`. Those `r + 1` conditions are the system `A_r x = b_r`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{binom, binomial, FieldElement, FieldSpec};
use crate::jet::{left_transition, JetParams};
use crate::laurent::{LaurentMatrix, LaurentPoly};
use crate::linalg::{self, SolveStatus};
use crate::splitting::{birkhoff_split, SplittingType};

fn check_nkr(n: i64, k: i64, r: i64) -> Result<()> {
    if 1 <= r && r <= k && k <= n {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("need 1 <= r <= k <= n, got n = {n}, k = {k}, r = {r}")))
    }
}

fn sign(j: i64) -> BigInt {
    if j % 2 == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// Integer entry `(-1)^j C(n-j, (k-i)-j)` of `A_r`; row `i` is the condition
/// on `c^r_{k-i}`.
fn system_entry(n: i64, k: i64, i: i64, j: i64) -> BigInt {
    sign(j) * binom(n - j, k - i - j)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinomialSystem {
    pub n: i64,
    pub k: i64,
    pub r: i64,
    pub field: FieldSpec,
    pub a: Vec<Vec<FieldElement>>,
    pub b: Vec<FieldElement>,
}

pub fn build_system(n: i64, k: i64, r: i64, field: FieldSpec) -> Result<BinomialSystem> {
    check_nkr(n, k, r)?;
    let a = (0..=r).map(|i| (0..=r).map(|j| field.reduce(&system_entry(n, k, i, j))).collect()).collect();
    let mut b = vec![field.zero(); r as usize + 1];
    b[r as usize] = field.one();
    Ok(BinomialSystem { n, k, r, field, a, b })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemSolution {
    pub r: i64,
    pub status: SolveStatus,
    /// `x_{0,r}, ..., x_{r,r}`; empty unless the solution is unique.
    pub x: Vec<FieldElement>,
}

impl SystemSolution {
    /// The trivial `r = 0` solution `x_{0,0} = 1`.
    pub fn base(field: FieldSpec) -> Self {
        SystemSolution { r: 0, status: SolveStatus::Unique, x: vec![field.one()] }
    }

    pub fn is_unique(&self) -> bool {
        self.status == SolveStatus::Unique
    }

    /// `x_{r,r}`, when solved.
    pub fn last(&self) -> Option<&FieldElement> {
        self.x.last()
    }
}

pub fn solve_system(sys: &BinomialSystem) -> SystemSolution {
    let (status, x) = linalg::solve(sys.field, &sys.a, &sys.b);
    SystemSolution { r: sys.r, status, x: x.unwrap_or_default() }
}

/// One row `c^r_0, ..., c^r_k` computed from a solution vector.
pub fn gluing_row(n: i64, k: i64, x: &[FieldElement], field: FieldSpec) -> Vec<FieldElement> {
    (0..=k)
        .map(|l| {
            x.iter().enumerate().fold(field.zero(), |acc, (j, xj)| {
                let j = j as i64;
                &acc + &(&field.reduce(&(sign(j) * binom(n - j, l - j))) * xj)
            })
        })
        .collect()
}

/// Gluing coefficients `c^r_l`, row `r` present when a unique solution for
/// `r` was supplied (row 0 always is: `c^0_l = C(n, l)`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingCoefficients {
    pub n: i64,
    pub k: i64,
    pub rows: Vec<Option<Vec<FieldElement>>>,
}

impl GluingCoefficients {
    pub fn get(&self, r: usize, l: usize) -> Option<&FieldElement> {
        self.rows.get(r)?.as_ref()?.get(l)
    }
}

fn check_gluing_conditions(k: i64, r: i64, row: &[FieldElement]) -> Result<()> {
    for l in k - r + 1..=k {
        if !row[l as usize].is_zero() {
            return Err(Error::GluingFailed {
                r: r as usize,
                reason: format!("c^{r}_{l} = {} != 0", row[l as usize]),
            });
        }
    }
    let pivot = &row[(k - r) as usize];
    if !pivot.is_one() {
        return Err(Error::GluingFailed { r: r as usize, reason: format!("c^{r}_{} = {pivot} != 1", k - r) });
    }
    Ok(())
}

pub fn gluing_coefficients(
    n: i64,
    k: i64,
    solutions: &[SystemSolution],
    field: FieldSpec,
) -> Result<GluingCoefficients> {
    if k < 1 || k > n {
        return Err(Error::InvalidParams(format!("need 1 <= k <= n, got n = {n}, k = {k}")));
    }
    let mut rows = vec![None; k as usize + 1];
    rows[0] = Some((0..=k).map(|l| field.reduce(&binom(n, l))).collect());
    for sol in solutions.iter().filter(|s| s.r >= 1) {
        if sol.r > k {
            return Err(Error::InvalidParams(format!("solution for r = {} exceeds k = {k}", sol.r)));
        }
        if !sol.is_unique() {
            return Err(Error::MissingSolution(sol.r as usize));
        }
        let row = gluing_row(n, k, &sol.x, field);
        check_gluing_conditions(k, sol.r, &row)?;
        rows[sol.r as usize] = Some(row);
    }
    Ok(GluingCoefficients { n, k, rows })
}

/// The `t`-chart and `1/t`-chart matrices of `phi = sum_r phi_r`:
/// `[phi0]` has `t^{k-r-l} c^r_l` at `(l, r)` and `[phi1]` has
/// `x_{j,r} t^{j-r}` at `(j, r)`.
pub fn assemble_phi(
    coeffs: &GluingCoefficients,
    solutions: &[SystemSolution],
    field: FieldSpec,
) -> Result<(LaurentMatrix, LaurentMatrix)> {
    let k = coeffs.k;
    let rank = k as usize + 1;
    let mut phi0 = LaurentMatrix::zero(field, rank);
    let mut phi1 = LaurentMatrix::zero(field, rank);
    let base = SystemSolution::base(field);
    for r in 0..=k {
        let sol = if r == 0 {
            &base
        } else {
            solutions.iter().find(|s| s.r == r && s.is_unique()).ok_or(Error::MissingSolution(r as usize))?
        };
        let row = coeffs.rows[r as usize].as_ref().ok_or(Error::MissingSolution(r as usize))?;
        for l in 0..=k {
            phi0.set(l as usize, r as usize, LaurentPoly::monomial(row[l as usize].clone(), k - r - l));
        }
        for (j, xj) in sol.x.iter().enumerate() {
            phi1.set(j, r as usize, LaurentPoly::monomial(xj.clone(), j as i64 - r));
        }
    }
    Ok((phi0, phi1))
}

/// `[phi0] * t^{n-k} == L * [phi1]`: the two chart maps agree on the
/// overlap, where `O(n-k)^{k+1}` has transition `t^{n-k}`.
pub fn gluing_identity_holds(n: i64, k: i64, phi0: &LaurentMatrix, phi1: &LaurentMatrix) -> Result<bool> {
    let l = left_transition(&JetParams::left(n, k, phi0.field())?)?;
    Ok(phi0.shift(n - k) == l.checked_mul(phi1)?)
}

/// What the systems say about `P^k(O(n))` over one field.
#[derive(Clone, Debug)]
pub enum IsomorphismOutcome {
    /// All systems solved with `prod x_{i,i} != 0`: `phi` is an isomorphism
    /// onto `O(n-k)^{k+1}`.
    Isomorphism { phi0: LaurentMatrix, phi1: LaurentMatrix, splitting: SplittingType },
    /// Every `phi_r` exists but some `x_{r,r}` vanishes, so `phi` is not an
    /// isomorphism.
    DegenerateMaps { zero_diagonal: Vec<i64> },
    /// The system for `r` has no unique solution.
    Unsolvable { r: i64, status: SolveStatus },
}

pub fn explicit_isomorphism(n: i64, k: i64, field: FieldSpec) -> Result<IsomorphismOutcome> {
    let mut solutions = Vec::with_capacity(k as usize);
    for r in 1..=k {
        let sol = solve_system(&build_system(n, k, r, field)?);
        if !sol.is_unique() {
            return Ok(IsomorphismOutcome::Unsolvable { r, status: sol.status });
        }
        solutions.push(sol);
    }
    let zero_diagonal: Vec<i64> =
        solutions.iter().filter(|s| s.last().is_some_and(FieldElement::is_zero)).map(|s| s.r).collect();
    if !zero_diagonal.is_empty() {
        return Ok(IsomorphismOutcome::DegenerateMaps { zero_diagonal });
    }
    let coeffs = gluing_coefficients(n, k, &solutions, field)?;
    let (phi0, phi1) = assemble_phi(&coeffs, &solutions, field)?;
    if !gluing_identity_holds(n, k, &phi0, &phi1)? {
        return Err(Error::GluingFailed {
            r: k as usize,
            reason: "chart maps disagree on the overlap".into(),
        });
    }
    let splitting = SplittingType::new(vec![n - k; k as usize + 1]);
    Ok(IsomorphismOutcome::Isomorphism { phi0, phi1, splitting })
}

/// Splitting type of `P^k(O(n))` over `Q` from the linear systems, checked
/// against the factorization of the transition matrix.
pub fn char0_split(n: i64, k: i64) -> Result<SplittingType> {
    let q = FieldSpec::RATIONALS;
    if k < 1 || k > n {
        return Err(Error::InvalidParams(format!("need 1 <= k <= n, got n = {n}, k = {k}")));
    }
    let splitting = match explicit_isomorphism(n, k, q)? {
        IsomorphismOutcome::Isomorphism { splitting, .. } => splitting,
        IsomorphismOutcome::Unsolvable { r, .. } => return Err(Error::UnexpectedSingular { n, k, r }),
        IsomorphismOutcome::DegenerateMaps { zero_diagonal } => {
            return Err(Error::UnexpectedSingular { n, k, r: zero_diagonal[0] })
        }
    };
    let (factored, _) = birkhoff_split(&left_transition(&JetParams::left(n, k, q)?)?)?;
    if factored != splitting {
        return Err(Error::CertificateRejected(format!(
            "linear systems give {splitting}, factorization gives {factored}"
        )));
    }
    Ok(splitting)
}

fn integer_matrix_det(n: i64, k: i64, r: i64) -> BigRational {
    let q = FieldSpec::RATIONALS;
    let sys = build_system(n, k, r, q).expect("validated");
    let det = linalg::determinant(q, &sys.a);
    det.as_rational().expect("rational field").clone()
}

/// `(|A_r|, prod_{l=0}^{r} C(n-l, k-r) / C(k-l, r-l))` over `Q`; the two agree
/// up to sign.
pub fn det_formula_check(n: i64, k: i64, r: i64) -> Result<(BigRational, BigRational)> {
    check_nkr(n, k, r)?;
    let mut product = BigRational::one();
    for l in 0..=r {
        let den = binomial(k - l, r - l)?;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        product *= BigRational::new(binomial(n - l, k - r)?, den);
    }
    Ok((integer_matrix_det(n, k, r), product))
}

/// The binomial reduction identity
/// `C(n-a+1, k-a-b+2) - (n-k+b)/(k-b+1) C(n-a+1, k-a-b+1)
///  = (a-1) C(n-a+1, k-a-b+2) / (k-b+1)` as exact rationals.
pub fn binomial_lemma_check(n: i64, k: i64, a: i64, b: i64) -> Result<bool> {
    if n < 0 || k < 0 || a < 0 || b < 0 {
        return Err(Error::InvalidParams(format!("need n, k, a, b >= 0, got {n}, {k}, {a}, {b}")));
    }
    let denom = k - b + 1;
    if denom == 0 {
        return Err(Error::InvalidParams("k - b + 1 must be nonzero".into()));
    }
    let upper = n - a + 1;
    let c = |lower: i64| -> Result<BigRational> {
        binomial(upper, lower)
            .map(BigRational::from_integer)
            .map_err(|_| Error::InvalidParams(format!("n - a + 1 = {upper} is negative")))
    };
    let ratio = |num: i64| BigRational::new(num.into(), denom.into());
    let lhs = c(k - a - b + 2)? - ratio(n - k + b) * c(k - a - b + 1)?;
    let rhs = ratio(a - 1) * c(k - a - b + 2)?;
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::RATIONALS
    }

    fn fp(p: u64) -> FieldSpec {
        FieldSpec::new(p).unwrap()
    }

    fn ints(f: FieldSpec, rows: &[&[i64]]) -> Vec<Vec<FieldElement>> {
        rows.iter().map(|r| r.iter().map(|&x| f.int(x)).collect()).collect()
    }

    #[test]
    fn build_examples() {
        let s = build_system(2, 1, 1, q()).unwrap();
        assert_eq!(s.a, ints(q(), &[&[2, -1], &[1, 0]]));
        assert_eq!(s.b, vec![q().int(0), q().int(1)]);
        let s = build_system(4, 2, 1, q()).unwrap();
        assert_eq!(s.a, ints(q(), &[&[6, -3], &[4, -1]]));
        for (n, k, r) in [(5, 3, 2), (7, 4, 4), (3, 3, 1)] {
            let s = build_system(n, k, r, fp(3)).unwrap();
            let last = s.b.len() - 1;
            assert!(s.b[last].is_one());
            assert!(s.b[..last].iter().all(FieldElement::is_zero));
        }
        assert!(build_system(2, 3, 1, q()).is_err());
        assert!(build_system(3, 2, 0, q()).is_err());
    }

    #[test]
    fn solve_examples() {
        let sol = solve_system(&build_system(2, 1, 1, q()).unwrap());
        assert_eq!(sol.status, SolveStatus::Unique);
        assert_eq!(sol.x, vec![q().int(1), q().int(2)]);

        let sol = solve_system(&build_system(2, 1, 1, fp(2)).unwrap());
        assert_eq!(sol.status, SolveStatus::Unique);
        assert_eq!(sol.x, vec![fp(2).int(1), fp(2).int(0)]);

        // C(4,1) = 4 and C(4,0) = 1: the second row survives mod 2
        let sys = build_system(4, 1, 1, fp(2)).unwrap();
        assert_eq!(sys.a, ints(fp(2), &[&[0, 1], &[1, 0]]));
        let sol = solve_system(&sys);
        assert_eq!(sol.status, SolveStatus::Unique);
        assert_eq!(sol.x, vec![fp(2).int(1), fp(2).int(0)]);

        // a genuinely singular system: n = 4, k = 2, r = 1 mod 2 is [[6, -3], [4, -1]]
        let sys = build_system(4, 2, 1, fp(2)).unwrap();
        assert_eq!(sys.a, ints(fp(2), &[&[0, 1], &[0, 1]]));
        assert_eq!(solve_system(&sys).status, SolveStatus::None);
    }

    #[test]
    fn gluing_examples() {
        let g = gluing_coefficients(3, 1, &[], q()).unwrap();
        assert_eq!(g.rows[0], Some(vec![q().int(1), q().int(3)]));
        assert!(g.rows[1].is_none());

        let sol = solve_system(&build_system(2, 1, 1, q()).unwrap());
        let g = gluing_coefficients(2, 1, &[sol], q()).unwrap();
        assert_eq!(g.get(1, 0), Some(&q().int(1)));
        assert_eq!(g.get(1, 1), Some(&q().int(0)));
    }

    #[test]
    fn gluing_rejects_bad_solutions() {
        let bogus = SystemSolution { r: 1, status: SolveStatus::Unique, x: vec![q().int(1), q().int(1)] };
        assert!(matches!(gluing_coefficients(2, 1, &[bogus], q()), Err(Error::GluingFailed { r: 1, .. })));
        let none = SystemSolution { r: 1, status: SolveStatus::None, x: vec![] };
        assert_eq!(gluing_coefficients(2, 1, &[none], q()), Err(Error::MissingSolution(1)));
    }

    #[test]
    fn solved_rows_satisfy_gluing_conditions() {
        for p in [0u64, 2, 3, 5, 7] {
            let f = FieldSpec::new(p).unwrap();
            for n in 1..=9 {
                for k in 1..=n {
                    for r in 1..=k {
                        let sol = solve_system(&build_system(n, k, r, f).unwrap());
                        if sol.is_unique() {
                            let row = gluing_row(n, k, &sol.x, f);
                            check_gluing_conditions(k, r, &row).unwrap();
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn phi_matrices() {
        for (n, k) in [(2, 1), (3, 2), (5, 3), (6, 6)] {
            let IsomorphismOutcome::Isomorphism { phi0, phi1, .. } = explicit_isomorphism(n, k, q()).unwrap()
            else {
                panic!("expected an isomorphism over Q for n = {n}, k = {k}");
            };
            let solutions: Vec<_> =
                (1..=k).map(|r| solve_system(&build_system(n, k, r, q()).unwrap())).collect();
            let prod = solutions.iter().fold(q().one(), |acc, s| &acc * s.last().unwrap());
            assert_eq!(phi1.det(), LaurentPoly::constant(prod.clone()));
            // anti-diagonal c^r_{k-r} is 1 for r >= 1 and C(n, k) for r = 0
            let d0 = phi0.det();
            let (c, e) = d0.as_monomial().unwrap();
            assert_eq!(e, 0);
            let cnk = q().reduce(&binom(n, k));
            assert!(c == &cnk || c == &-&cnk);
            assert!(c == &prod || c == &-&prod);
            assert!(gluing_identity_holds(n, k, &phi0, &phi1).unwrap());
        }
    }

    #[test]
    fn missing_solution_in_assembly() {
        let coeffs = gluing_coefficients(3, 2, &[], q()).unwrap();
        assert_eq!(assemble_phi(&coeffs, &[], q()), Err(Error::MissingSolution(1)));
    }

    #[test]
    fn char0_examples() {
        assert_eq!(char0_split(3, 1).unwrap().degrees(), &[2, 2]);
        assert_eq!(char0_split(5, 3).unwrap().degrees(), &[2, 2, 2, 2]);
        assert_eq!(char0_split(1, 1).unwrap().degrees(), &[0, 0]);
    }

    #[test]
    fn char_p_outcomes() {
        assert!(matches!(
            explicit_isomorphism(4, 2, fp(2)).unwrap(),
            IsomorphismOutcome::Unsolvable { r: 1, status: SolveStatus::None }
        ));
        assert!(matches!(
            explicit_isomorphism(4, 1, fp(2)).unwrap(),
            IsomorphismOutcome::DegenerateMaps { .. }
        ));
        assert!(matches!(
            explicit_isomorphism(2, 1, fp(2)).unwrap(),
            IsomorphismOutcome::DegenerateMaps { .. }
        ));
        assert!(matches!(explicit_isomorphism(4, 1, fp(3)).unwrap(), IsomorphismOutcome::Isomorphism { .. }));
    }

    #[test]
    fn det_formula_examples() {
        let r = |a: i64| BigRational::from_integer(a.into());
        assert_eq!(det_formula_check(4, 2, 1).unwrap(), (r(6), r(6)));
        assert_eq!(det_formula_check(2, 1, 1).unwrap(), (r(1), r(1)));
        assert!(det_formula_check(2, 1, 2).is_err());
    }

    #[test]
    fn lemma_examples() {
        assert!(binomial_lemma_check(4, 2, 1, 1).unwrap());
        assert!(binomial_lemma_check(5, 3, 2, 1).unwrap());
        assert!(binomial_lemma_check(3, 2, 0, 3).is_err());
        assert!(binomial_lemma_check(3, -1, 0, 0).is_err());
    }
}
