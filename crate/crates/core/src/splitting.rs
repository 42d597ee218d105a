//! Splitting types of vector bundles on the projective line, given by an
//! invertible transition matrix `M` over `F[t, 1/t]`.
//!
//! Two independent routes:
//!
//! * [`birkhoff_split`] factors `P * M * Q = diag(t^{a_1}, ..., t^{a_r})` with
//!   `P` invertible over `F[t]` and `Q` invertible over `F[1/t]`, and returns
//!   the factors as a [`BirkhoffCertificate`] that [`verify_certificate`]
//!   re-checks by exact multiplication.
//! * [`oracle_split`] only counts global sections: `h0(E(m))` is the
//!   dimension of `{g in F[1/t]^r : t^m M g in F[t]^r}`, and its first
//!   differences in `m` count the summands `O(a)` with `a >= -m`.
//!
//! The factorization works on `N = t^{-lo} M`, a polynomial matrix, and
//! row-reduces it over `F[t]`: while the matrix of leading row coefficients
//! is singular, a left null vector names a row whose degree can be lowered
//! by adding `F[t]`-multiples of rows of no larger degree. Row degrees sum to
//! at least the degree of `det N`, so this stops. A row-reduced `N` factors as
//! `diag(t^delta) * L` with `L` over `F[1/t]` and invertible at infinity, hence
//! unimodular there, and `Q = L^{-1}`.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::laurent::{LaurentMatrix, LaurentPoly, PolySide};
use crate::linalg;

/// Twist degrees `a_1 >= ... >= a_r` of `O(a_1) + ... + O(a_r)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(transparent)]
pub struct SplittingType {
    degrees: Vec<i64>,
}

impl SplittingType {
    pub fn new(mut degrees: Vec<i64>) -> Self {
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        SplittingType { degrees }
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn degree_sum(&self) -> i64 {
        self.degrees.iter().sum()
    }

    /// `(degree, count)` pairs in descending degree order.
    pub fn multiplicities(&self) -> Vec<(i64, usize)> {
        let mut out: Vec<(i64, usize)> = Vec::new();
        for &d in &self.degrees {
            match out.last_mut() {
                Some((last, count)) if *last == d => *count += 1,
                _ => out.push((d, 1)),
            }
        }
        out
    }

    /// `h0(E(m))` of the split bundle: `sum max(0, a_i + m + 1)`.
    pub fn h0(&self, m: i64) -> usize {
        self.degrees.iter().map(|&a| (a + m + 1).max(0) as usize).sum()
    }
}

impl fmt::Display for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.degrees.iter().map(|a| format!("O({a})")).collect();
        f.write_str(&parts.join("+"))
    }
}

/// `P * M * Q = D` with `P` unimodular over `F[t]`, `Q` unimodular over
/// `F[1/t]` and `D` diagonal with monomial entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BirkhoffCertificate {
    pub p: LaurentMatrix,
    pub q: LaurentMatrix,
    pub d: LaurentMatrix,
}

impl BirkhoffCertificate {
    /// Diagonal exponents of `D`, in diagonal order. `None` if some diagonal
    /// entry is not a monomial.
    pub fn exponents(&self) -> Option<Vec<i64>> {
        (0..self.d.rank()).map(|i| self.d.get(i, i).as_monomial().map(|(_, e)| e)).collect()
    }
}

fn is_constant_unit(p: &LaurentPoly) -> bool {
    matches!(p.as_monomial(), Some((_, 0)))
}

/// Checks every certificate invariant by exact computation.
pub fn verify_certificate(m: &LaurentMatrix, cert: &BirkhoffCertificate) -> bool {
    let r = m.rank();
    if [&cert.p, &cert.q, &cert.d].iter().any(|x| x.rank() != r || x.field() != m.field()) {
        return false;
    }
    if !cert.p.side_check(PolySide::Plus) || !cert.q.side_check(PolySide::Minus) {
        return false;
    }
    if !cert.d.is_diagonal() || cert.exponents().is_none() {
        return false;
    }
    if !is_constant_unit(&cert.p.det()) || !is_constant_unit(&cert.q.det()) {
        return false;
    }
    &(&cert.p * m) * &cert.q == cert.d
}

type Dense = Vec<Vec<FieldElement>>;

fn row_degree(n: &LaurentMatrix, i: usize) -> i64 {
    (0..n.rank())
        .filter_map(|j| n.get(i, j).highest_exponent())
        .max()
        .expect("rows of an invertible matrix are nonzero")
}

fn leading_row_coefficients(n: &LaurentMatrix, degrees: &[i64]) -> Dense {
    (0..n.rank()).map(|i| (0..n.rank()).map(|j| n.get(i, j).coeff(degrees[i])).collect()).collect()
}

/// Row-reduces the polynomial matrix `n` over `F[t]` in place, applying the
/// same row operations to `p`. Returns the final row degrees.
fn row_reduce(n: &mut LaurentMatrix, p: &mut LaurentMatrix) -> Vec<i64> {
    let field = n.field();
    loop {
        let degrees: Vec<i64> = (0..n.rank()).map(|i| row_degree(n, i)).collect();
        let lead = leading_row_coefficients(n, &degrees);
        let Some(c) = linalg::kernel_vector(field, &linalg::transpose(&lead)) else {
            return degrees;
        };
        // highest degree among the rows in the relation; lowest index on ties
        let target = (0..c.len())
            .filter(|&i| !c[i].is_zero())
            .max_by(|&a, &b| degrees[a].cmp(&degrees[b]).then(b.cmp(&a)))
            .expect("kernel vector is nonzero");
        let inv = c[target].inverse().expect("nonzero");
        for i in 0..c.len() {
            if i == target || c[i].is_zero() {
                continue;
            }
            let factor = LaurentPoly::monomial(&c[i] * &inv, degrees[target] - degrees[i]);
            n.add_row_multiple(target, i, &factor);
            p.add_row_multiple(target, i, &factor);
        }
    }
}

/// Inverse of `l`, a matrix over `F[1/t]` whose constant term is invertible
/// and whose determinant is a constant, by inverting the power series in
/// `1/t` up to the adjugate degree bound.
fn invert_minus_unimodular(l: &LaurentMatrix) -> Result<LaurentMatrix> {
    let field = l.field();
    let r = l.rank();
    let depth = l.exponent_range().map_or(0, |(lo, _)| -lo).max(0) as usize;
    let coeff_matrix = |j: usize| -> Dense {
        (0..r).map(|a| (0..r).map(|b| l.get(a, b).coeff(-(j as i64))).collect()).collect()
    };
    let layers: Vec<Dense> = (0..=depth).map(coeff_matrix).collect();
    let x0 = linalg::inverse(field, &layers[0])
        .ok_or_else(|| Error::NotInvertible("leading coefficient matrix is singular".into()))?;
    let bound = depth * (r - 1);
    let mut xs: Vec<Dense> = vec![x0.clone()];
    for m in 1..=bound {
        let mut acc: Dense = vec![vec![field.zero(); r]; r];
        for j in 1..=m.min(depth) {
            let prod = linalg::mat_mul(field, &layers[j], &xs[m - j]);
            for (row, prow) in acc.iter_mut().zip(prod) {
                for (x, y) in row.iter_mut().zip(prow) {
                    *x = &*x + &y;
                }
            }
        }
        let next = linalg::mat_mul(field, &x0, &acc);
        xs.push(next.into_iter().map(|row| row.into_iter().map(|x| -x).collect()).collect());
    }
    let mut q = LaurentMatrix::zero(field, r);
    for a in 0..r {
        for b in 0..r {
            let terms = xs.iter().enumerate().map(|(m, x)| (-(m as i64), x[a][b].clone()));
            q.set(a, b, LaurentPoly::from_terms(field, terms)?);
        }
    }
    Ok(q)
}

fn require_invertible(m: &LaurentMatrix) -> Result<LaurentPoly> {
    let det = m.det();
    if det.is_unit() {
        Ok(det)
    } else {
        Err(Error::NotInvertible(det.canonical()))
    }
}

/// Splitting type of the bundle with transition matrix `m`, together with a
/// certificate `P * m * Q = diag(t^{a_i})` whose diagonal is sorted
/// descending. The certificate is verified before it is returned.
pub fn birkhoff_split(m: &LaurentMatrix) -> Result<(SplittingType, BirkhoffCertificate)> {
    require_invertible(m)?;
    let field = m.field();
    let r = m.rank();
    let (lo, _) = m.exponent_range().expect("invertible matrix is nonzero");

    let mut n = m.shift(-lo);
    let mut p = LaurentMatrix::identity(field, r);
    let row_degrees = row_reduce(&mut n, &mut p);

    // n = diag(t^delta) * l
    let mut l = n.clone();
    for (i, &d) in row_degrees.iter().enumerate() {
        for j in 0..r {
            let v = l.get(i, j).shift(-d);
            l.set(i, j, v);
        }
    }
    let mut q = invert_minus_unimodular(&l)?;

    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&a, &b| row_degrees[b].cmp(&row_degrees[a]).then(a.cmp(&b)));
    let degrees: Vec<i64> = order.iter().map(|&i| row_degrees[i] + lo).collect();
    let mut p_sorted = LaurentMatrix::zero(field, r);
    let mut q_sorted = LaurentMatrix::zero(field, r);
    for (new, &old) in order.iter().enumerate() {
        for j in 0..r {
            p_sorted.set(new, j, p.get(old, j).clone());
            q_sorted.set(j, new, q.get(j, old).clone());
        }
    }
    p = p_sorted;
    q = q_sorted;

    let cert = BirkhoffCertificate { p, q, d: LaurentMatrix::monomial_diagonal(field, &degrees) };
    if !verify_certificate(m, &cert) {
        return Err(Error::CertificateRejected(format!("factorization of {m}")));
    }
    Ok((SplittingType::new(degrees), cert))
}

/// Inverse of an invertible Laurent matrix through its adjugate.
fn laurent_inverse(m: &LaurentMatrix, det: &LaurentPoly) -> LaurentMatrix {
    let field = m.field();
    let r = m.rank();
    let det_inv = det.unit_inverse().expect("unit determinant");
    if r == 1 {
        return LaurentMatrix::diagonal(field, vec![det_inv]).expect("single field");
    }
    let mut inv = LaurentMatrix::zero(field, r);
    for i in 0..r {
        for j in 0..r {
            let mut minor = LaurentMatrix::zero(field, r - 1);
            for (a, ra) in (0..r).filter(|&x| x != i).enumerate() {
                for (b, cb) in (0..r).filter(|&x| x != j).enumerate() {
                    minor.set(a, b, m.get(ra, cb).clone());
                }
            }
            let cof = &minor.det() * &det_inv;
            inv.set(j, i, if (i + j) % 2 == 0 { cof } else { -cof });
        }
    }
    inv
}

/// Precomputed data for repeated `h0` evaluations of one bundle.
struct SectionCounter<'a> {
    m: &'a LaurentMatrix,
    /// Lowest exponent of `m^{-1}`; sections of `E(k)` have `g` supported
    /// in `[k_floor(k), 0]` where `k_floor(k) = -k + inv_lo`.
    inv_lo: i64,
}

impl<'a> SectionCounter<'a> {
    fn new(m: &'a LaurentMatrix) -> Result<Self> {
        let det = require_invertible(m)?;
        let inv = laurent_inverse(m, &det);
        let (inv_lo, _) = inv.exponent_range().expect("inverse is nonzero");
        Ok(SectionCounter { m, inv_lo })
    }

    fn window(&self, twist: i64) -> i64 {
        (twist - self.inv_lo).max(0)
    }

    fn h0(&self, twist: i64, depth: i64) -> usize {
        let m = self.m;
        let field = m.field();
        let r = m.rank();
        if depth < 0 {
            return 0;
        }
        let width = (depth + 1) as usize;
        let unknowns = r * width;
        let (lo, _) = m.exponent_range().expect("nonzero");
        // f_i = sum_j t^twist m_ij g_j ; exponents of f_i lie in
        // [twist + lo - depth, ...]; every negative one must vanish.
        let low = twist + lo - depth;
        if low >= 0 {
            return unknowns;
        }
        let neg_span = (-low) as usize;
        let mut rows: Vec<Vec<FieldElement>> = vec![vec![field.zero(); unknowns]; r * neg_span];
        for i in 0..r {
            for j in 0..r {
                for (ex, c) in m.get(i, j).terms() {
                    for d in 0..=depth {
                        let e = twist + ex - d;
                        if e < 0 {
                            let row = i * neg_span + (e - low) as usize;
                            let col = j * width + d as usize;
                            rows[row][col] = &rows[row][col] + c;
                        }
                    }
                }
            }
        }
        rows.retain(|row| row.iter().any(|x| !x.is_zero()));
        unknowns - linalg::rank(&rows)
    }
}

/// Dimension of the global sections of `E(twist)`, where `E` has transition
/// matrix `m`: pairs `(f, g)` with `f` over `F[t]`, `g` over `F[1/t]` and
/// `f = t^twist * m * g`.
pub fn h0_dimension(m: &LaurentMatrix, twist: i64) -> Result<usize> {
    let counter = SectionCounter::new(m)?;
    Ok(counter.h0(twist, counter.window(twist)))
}

/// Splitting type from section counts alone.
///
/// The summand degrees of a bundle lie within the exponent range `[lo, hi]`
/// of its transition matrix, so the scan covers `twist` in `[-hi - 1, -lo]`
/// widened by `margin` on both sides. Saturation is checked at both ends:
/// `h0` must vanish at the bottom and grow by exactly the rank at the top;
/// otherwise [`Error::WindowTooSmall`] is raised.
pub fn oracle_split_with_margin(m: &LaurentMatrix, margin: i64) -> Result<SplittingType> {
    let counter = SectionCounter::new(m)?;
    let r = m.rank();
    let (lo, hi) = m.exponent_range().expect("nonzero");
    let bottom = -hi - 1 - margin;
    let top = -lo + margin;
    let h0 = |k: i64| counter.h0(k, counter.window(k));

    let mut prev = h0(bottom);
    if prev != 0 {
        return Err(Error::WindowTooSmall {
            bound: margin,
            reason: format!("h0(E({bottom})) = {prev}, expected 0"),
        });
    }
    let mut prev_slope = 0usize;
    let mut degrees = Vec::with_capacity(r);
    for k in bottom + 1..=top {
        let cur = h0(k);
        let slope = cur.checked_sub(prev).ok_or_else(|| Error::WindowTooSmall {
            bound: margin,
            reason: format!("h0 decreased at twist {k}"),
        })?;
        // `slope - prev_slope` summands have degree exactly -k
        if slope < prev_slope || slope > r {
            return Err(Error::WindowTooSmall {
                bound: margin,
                reason: format!("slope {slope} at twist {k} out of range"),
            });
        }
        degrees.extend(std::iter::repeat_n(-k, slope - prev_slope));
        prev = cur;
        prev_slope = slope;
        if slope == r {
            break;
        }
    }
    if prev_slope != r {
        return Err(Error::WindowTooSmall {
            bound: margin,
            reason: format!("slope {prev_slope} at twist {top}, expected rank {r}"),
        });
    }
    Ok(SplittingType::new(degrees))
}

/// [`oracle_split_with_margin`] starting from margin 2 and doubling on
/// [`Error::WindowTooSmall`], up to four attempts.
pub fn oracle_split(m: &LaurentMatrix) -> Result<SplittingType> {
    let mut margin = 2;
    let mut last = None;
    for _ in 0..4 {
        match oracle_split_with_margin(m, margin) {
            Err(e @ Error::WindowTooSmall { .. }) => {
                last = Some(e);
                margin *= 2;
            }
            other => return other,
        }
    }
    Err(last.expect("at least one attempt"))
}

/// Exponent of the (unit) determinant of `m`.
pub fn det_exponent(m: &LaurentMatrix) -> Result<i64> {
    let det = require_invertible(m)?;
    Ok(det.as_monomial().expect("unit").1)
}

/// A fully checked split: certificate verified, oracle agreement and
/// degree-sum conservation asserted.
#[derive(Clone, Debug)]
pub struct CheckedSplit {
    pub splitting: SplittingType,
    pub certificate: BirkhoffCertificate,
    pub oracle: SplittingType,
}

pub fn checked_split(m: &LaurentMatrix) -> Result<CheckedSplit> {
    let (splitting, certificate) = birkhoff_split(m)?;
    let oracle = oracle_split(m)?;
    if oracle != splitting {
        return Err(Error::CertificateRejected(format!(
            "oracle {oracle} disagrees with factorization {splitting}"
        )));
    }
    let e = det_exponent(m)?;
    if splitting.degree_sum() != e {
        return Err(Error::CertificateRejected(format!(
            "degree sum {} differs from determinant exponent {e}",
            splitting.degree_sum()
        )));
    }
    Ok(CheckedSplit { splitting, certificate, oracle })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::jet::{balancing_factors, left_transition, right_transition, JetParams};
    use crate::laurent::random_unimodular;

    fn q() -> FieldSpec {
        FieldSpec::RATIONALS
    }

    fn fp(p: u64) -> FieldSpec {
        FieldSpec::new(p).unwrap()
    }

    fn left(n: i64, k: i64, f: FieldSpec) -> LaurentMatrix {
        left_transition(&JetParams::left(n, k, f).unwrap()).unwrap()
    }

    #[test]
    fn one_by_one() {
        let m = LaurentMatrix::from_int_monomials(q(), &[vec![(-7, 4)]]).unwrap();
        let (s, cert) = birkhoff_split(&m).unwrap();
        assert_eq!(s.degrees(), &[4]);
        assert!(verify_certificate(&m, &cert));
        assert_eq!(oracle_split(&m).unwrap().degrees(), &[4]);
    }

    #[test]
    fn rank_two_cases() {
        assert_eq!(birkhoff_split(&left(3, 1, q())).unwrap().0.degrees(), &[2, 2]);
        assert_eq!(birkhoff_split(&left(4, 1, fp(2))).unwrap().0.degrees(), &[4, 2]);
        for p in [0u64, 2, 3, 5] {
            let m = right_transition(4, fp(p)).unwrap();
            assert_eq!(birkhoff_split(&m).unwrap().0.degrees(), &[4, 2]);
        }
    }

    #[test]
    fn balancing_triple_is_a_certificate() {
        let (to_d, from_dp) = balancing_factors(3, q()).unwrap();
        let m = left(3, 1, q());
        let cert =
            BirkhoffCertificate { p: to_d, q: from_dp, d: LaurentMatrix::monomial_diagonal(q(), &[2, 2]) };
        assert!(verify_certificate(&m, &cert));
        let mut bad = cert.clone();
        let v = bad.p.get(0, 0) + &LaurentPoly::one(q());
        bad.p.set(0, 0, v);
        assert!(!verify_certificate(&m, &bad));
    }

    #[test]
    fn not_invertible() {
        let m = LaurentMatrix::from_rows(
            q(),
            vec![vec![LaurentPoly::from_terms(q(), [(0, q().one()), (1, q().one())]).unwrap()]],
        )
        .unwrap();
        assert!(matches!(birkhoff_split(&m), Err(Error::NotInvertible(_))));
        assert!(matches!(h0_dimension(&m, 0), Err(Error::NotInvertible(_))));
        assert!(matches!(oracle_split(&m), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn h0_examples() {
        let m = LaurentMatrix::monomial_diagonal(q(), &[2, -1]);
        assert_eq!(h0_dimension(&m, 0).unwrap(), 3);
        assert_eq!(h0_dimension(&m, 1).unwrap(), 5);
        assert_eq!(h0_dimension(&left(4, 1, fp(2)), -4).unwrap(), 1);
    }

    #[test]
    fn h0_is_monotone_and_saturates() {
        let m = left(5, 2, fp(3));
        let r = m.rank();
        let e = det_exponent(&m).unwrap();
        let vals: Vec<usize> = (-8..=4).map(|k| h0_dimension(&m, k).unwrap()).collect();
        assert_eq!(vals[0], 0);
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        // Riemann-Roch once h1 vanishes
        assert_eq!(vals[vals.len() - 1] as i64, e + r as i64 * 5);
    }

    #[test]
    fn oracle_diagonal() {
        let m = LaurentMatrix::monomial_diagonal(q(), &[3, 3]);
        assert_eq!(oracle_split(&m).unwrap().degrees(), &[3, 3]);
    }

    #[test]
    fn sandwich_invariance() {
        for p in [0u64, 2, 5] {
            let f = fp(p);
            for seed in 0..20 {
                let u = random_unimodular(f, 2, PolySide::Plus, 2, seed).unwrap();
                let v = random_unimodular(f, 2, PolySide::Minus, 2, seed + 1000).unwrap();
                let m = &(&u * &LaurentMatrix::monomial_diagonal(f, &[5, -2])) * &v;
                let (s, cert) = birkhoff_split(&m).unwrap();
                assert_eq!(s.degrees(), &[5, -2]);
                assert!(verify_certificate(&m, &cert));
                assert_eq!(oracle_split(&m).unwrap().degrees(), &[5, -2]);
            }
        }
    }

    #[test]
    fn splitting_type_text() {
        let s = SplittingType::new(vec![2, 4, 2]);
        assert_eq!(s.to_string(), "O(4)+O(2)+O(2)");
        assert_eq!(s.multiplicities(), vec![(4, 1), (2, 2)]);
        assert_eq!(s.h0(-3), 2);
    }

    #[test]
    fn deterministic() {
        let m = left(6, 3, fp(2));
        let a = birkhoff_split(&m).unwrap();
        let b = birkhoff_split(&m).unwrap();
        assert_eq!(a.0, b.0);
        assert_eq!(a.1, b.1);
    }
}
