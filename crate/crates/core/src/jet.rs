//! Transition matrices of principal-parts bundles `P^k(O(n))` on the
//! projective line, and the explicit rank-2 base changes that diagonalize
//! `P^1(O(n))` when the characteristic does not divide `n`.
//!
//! Conventions: everything is written in the chart coordinate `t`. Column
//! `p` of a transition matrix expresses the `p`-th frame vector of the
//! `1/t` chart in the frame of the `t` chart, so a section is a pair
//! `(f, g)` with `f = M * g`. For `O(m)` the matrix is `[t^m]`.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::field::{binom, FieldSpec};
use crate::laurent::{LaurentMatrix, LaurentPoly};

/// Which of the two module structures on the principal parts is meant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModuleSide {
    Left,
    Right,
}

impl std::str::FromStr for ModuleSide {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(ModuleSide::Left),
            "right" => Ok(ModuleSide::Right),
            other => Err(Error::InvalidParams(format!("unknown side {other:?}"))),
        }
    }
}

impl std::fmt::Display for ModuleSide {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ModuleSide::Left => "left",
            ModuleSide::Right => "right",
        })
    }
}

/// Validated parameters of `P^k(O(n))`: `1 <= k <= n`, and the right module
/// structure only for `k = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub struct JetParams {
    pub n: i64,
    pub k: i64,
    #[serde(rename = "characteristic")]
    pub field: FieldSpec,
    pub side: ModuleSide,
}

impl JetParams {
    pub fn new(n: i64, k: i64, field: FieldSpec, side: ModuleSide) -> Result<Self> {
        if k < 1 || k > n {
            return Err(Error::InvalidParams(format!("need 1 <= k <= n, got n = {n}, k = {k}")));
        }
        if side == ModuleSide::Right && k != 1 {
            return Err(Error::InvalidParams(format!(
                "the right module structure is only available for k = 1 (got k = {k})"
            )));
        }
        Ok(JetParams { n, k, field, side })
    }

    pub fn left(n: i64, k: i64, field: FieldSpec) -> Result<Self> {
        Self::new(n, k, field, ModuleSide::Left)
    }

    pub fn rank(&self) -> usize {
        (self.k + 1) as usize
    }

    /// The transition matrix for this module structure.
    pub fn transition(&self) -> LaurentMatrix {
        match self.side {
            ModuleSide::Left => left_matrix(self.n, self.k, self.field),
            ModuleSide::Right => right_matrix(self.n, self.field),
        }
    }
}

fn signed_monomial(field: FieldSpec, negative: bool, coeff: &BigInt, e: i64) -> LaurentPoly {
    let c = field.reduce(coeff);
    LaurentPoly::monomial(if negative { -c } else { c }, e)
}

/// Transition matrix of the untwisted principal parts `P^k`: column `p`
/// expresses `ds^p` in the frame `dt^0, ..., dt^k`, where `s = 1/t`.
pub fn untwisted_transition(k: i64, field: FieldSpec) -> Result<LaurentMatrix> {
    if k < 1 {
        return Err(Error::InvalidParams(format!("need k >= 1, got {k}")));
    }
    let r = (k + 1) as usize;
    let mut m = LaurentMatrix::zero(field, r);
    // ds^0 = 1 = dt^0
    m.set(0, 0, LaurentPoly::one(field));
    for p in 1..=k {
        for i in 0..=k - p {
            let entry = signed_monomial(field, (i + p) % 2 == 1, &binom(i + p - 1, p - 1), -(i + 2 * p));
            m.set((i + p) as usize, p as usize, entry);
        }
    }
    Ok(m)
}

fn left_matrix(n: i64, k: i64, field: FieldSpec) -> LaurentMatrix {
    let r = (k + 1) as usize;
    let mut m = LaurentMatrix::zero(field, r);
    for p in 0..=k {
        for i in 0..=k - p {
            let entry = signed_monomial(field, p % 2 == 1, &binom(n - p, i), n - i - 2 * p);
            m.set((i + p) as usize, p as usize, entry);
        }
    }
    m
}

fn right_matrix(n: i64, field: FieldSpec) -> LaurentMatrix {
    LaurentMatrix::diagonal(
        field,
        vec![LaurentPoly::int_monomial(field, 1, n), LaurentPoly::int_monomial(field, -1, n - 2)],
    )
    .expect("single field")
}

/// Transition matrix of `P^k(O(n))` as a left module: column `p` has
/// `(-1)^p C(n-p, i) t^(n-i-2p)` in row `i + p`. Lower triangular.
pub fn left_transition(params: &JetParams) -> Result<LaurentMatrix> {
    if params.side != ModuleSide::Left {
        return Err(Error::InvalidParams("left_transition needs side = left".into()));
    }
    Ok(left_matrix(params.n, params.k, params.field))
}

/// Transition matrix of `P^1(O(n))` as a right module: `diag(t^n, -t^(n-2))`.
pub fn right_transition(n: i64, field: FieldSpec) -> Result<LaurentMatrix> {
    if n < 1 {
        return Err(Error::InvalidParams(format!("need n >= 1, got {n}")));
    }
    Ok(right_matrix(n, field))
}

/// The base changes `C -> D` on the `t` chart and `D' -> C'` on the `1/t`
/// chart that turn the left transition matrix of `P^1(O(n))` into
/// `diag(t^(n-1), t^(n-1))`. They exist iff the characteristic does not
/// divide `n`.
pub fn balancing_factors(n: i64, field: FieldSpec) -> Result<(LaurentMatrix, LaurentMatrix)> {
    if n < 1 {
        return Err(Error::InvalidParams(format!("need n >= 1, got {n}")));
    }
    if field.divides(n) {
        return Err(Error::CharacteristicDividesN { n, characteristic: field.characteristic() });
    }
    let inv_n = field.int(n).inverse()?;
    let zero = LaurentPoly::zero(field);
    let one = LaurentPoly::one(field);
    let to_d = LaurentMatrix::from_rows(
        field,
        vec![
            vec![one.clone(), LaurentPoly::monomial(-&inv_n, 1)],
            vec![zero.clone(), LaurentPoly::constant(inv_n)],
        ],
    )?;
    let from_d_prime = LaurentMatrix::from_rows(
        field,
        vec![
            vec![LaurentPoly::int_monomial(field, 1, -1), one],
            vec![LaurentPoly::int_monomial(field, n, 0), zero],
        ],
    )?;
    Ok((to_d, from_d_prime))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::PolySide;

    fn q() -> FieldSpec {
        FieldSpec::RATIONALS
    }

    fn fp(p: u64) -> FieldSpec {
        FieldSpec::new(p).unwrap()
    }

    fn mono(f: FieldSpec, c: i64, e: i64) -> LaurentPoly {
        LaurentPoly::int_monomial(f, c, e)
    }

    #[test]
    fn untwisted_small_cases() {
        let m = untwisted_transition(1, q()).unwrap();
        let expect =
            LaurentMatrix::from_int_monomials(q(), &[vec![(1, 0), (0, 0)], vec![(0, 0), (-1, -2)]]).unwrap();
        assert_eq!(m, expect);

        let m = untwisted_transition(2, q()).unwrap();
        assert!(m.get(0, 1).is_zero());
        assert_eq!(m.get(1, 1), &mono(q(), -1, -2));
        assert_eq!(m.get(2, 1), &mono(q(), 1, -3));
        for k in 1..6 {
            let m = untwisted_transition(k, q()).unwrap();
            assert_eq!(m.get(0, 0), &LaurentPoly::one(q()));
            assert!((1..=k as usize).all(|i| m.get(i, 0).is_zero()));
        }
        assert!(untwisted_transition(0, q()).is_err());
    }

    #[test]
    fn left_k1_matches_closed_form() {
        for n in 1..=20 {
            let m = left_transition(&JetParams::left(n, 1, q()).unwrap()).unwrap();
            let expect = LaurentMatrix::from_int_monomials(
                q(),
                &[vec![(1, n), (0, 0)], vec![(n, n - 1), (-1, n - 2)]],
            )
            .unwrap();
            assert_eq!(m, expect);
        }
    }

    #[test]
    fn left_k2_n2() {
        let m = left_transition(&JetParams::left(2, 2, q()).unwrap()).unwrap();
        let expect = LaurentMatrix::from_int_monomials(
            q(),
            &[vec![(1, 2), (0, 0), (0, 0)], vec![(2, 1), (-1, 0), (0, 0)], vec![(1, 0), (-1, -1), (1, -2)]],
        )
        .unwrap();
        assert_eq!(m, expect);
        // (n - k)(k + 1) = 0
        let d = m.det();
        assert_eq!(d.as_monomial().unwrap().1, 0);
        assert!(d.as_monomial().unwrap().0.is_sign());
    }

    #[test]
    fn determinant_exponent_and_shape() {
        for p in [0u64, 2, 3, 5] {
            let f = FieldSpec::new(p).unwrap();
            for n in 1..=12 {
                for k in 1..=n {
                    let m = left_transition(&JetParams::left(n, k, f).unwrap()).unwrap();
                    assert!(m.is_lower_triangular());
                    for pp in 0..=k {
                        let sign = if pp % 2 == 0 { 1 } else { -1 };
                        assert_eq!(m.get(pp as usize, pp as usize), &mono(f, sign, n - 2 * pp));
                    }
                    let d = m.det();
                    let (c, e) = d.as_monomial().expect("unit determinant");
                    assert_eq!(e, (n - k) * (k + 1));
                    assert!(c.is_sign());
                }
            }
        }
    }

    #[test]
    fn char3_kills_n_entry() {
        let m = left_transition(&JetParams::left(3, 1, fp(3)).unwrap()).unwrap();
        assert!(m.get(1, 0).is_zero());
        assert_eq!(m.to_string(), "[[t^3, 0], [0, -t^1]]");
        let m = left_transition(&JetParams::left(3, 1, q()).unwrap()).unwrap();
        assert_eq!(m.to_string(), "[[t^3, 0], [3*t^2, -t^1]]");
    }

    #[test]
    fn right_examples() {
        let m = right_transition(3, q()).unwrap();
        assert_eq!(
            m,
            LaurentMatrix::from_int_monomials(q(), &[vec![(1, 3), (0, 0)], vec![(0, 0), (-1, 1)]]).unwrap()
        );
        let m = right_transition(2, q()).unwrap();
        assert_eq!(m.to_string(), "[[t^2, 0], [0, -1]]");
        for n in 1..10 {
            let m = right_transition(n, fp(7)).unwrap();
            assert!(m.is_diagonal());
            assert_eq!(m.det(), mono(fp(7), -1, 2 * n - 2));
        }
        assert!(right_transition(0, q()).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(JetParams::left(3, 4, q()).is_err());
        assert!(JetParams::left(3, 0, q()).is_err());
        assert!(JetParams::new(3, 2, q(), ModuleSide::Right).is_err());
        let p = JetParams::new(3, 1, q(), ModuleSide::Right).unwrap();
        assert!(left_transition(&p).is_err());
        assert_eq!(p.transition(), right_transition(3, q()).unwrap());
    }

    #[test]
    fn balancing_sandwich() {
        for (n, p) in [(3, 0u64), (3, 2), (5, 3), (7, 5), (1, 2)] {
            let f = FieldSpec::new(p).unwrap();
            let (to_d, from_dp) = balancing_factors(n, f).unwrap();
            let l = left_transition(&JetParams::left(n, 1, f).unwrap()).unwrap();
            let prod = &(&to_d * &l) * &from_dp;
            assert_eq!(prod, LaurentMatrix::monomial_diagonal(f, &[n - 1, n - 1]));
            assert!(to_d.side_check(PolySide::Plus));
            assert!(to_d.det().is_unit());
            assert!(from_dp.det().is_unit());
        }
        assert_eq!(
            balancing_factors(4, fp(2)),
            Err(Error::CharacteristicDividesN { n: 4, characteristic: 2 })
        );
    }
}
