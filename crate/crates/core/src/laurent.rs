//! Laurent polynomials `F[t, 1/t]` and square matrices over them.
//!
//! Coefficients are stored sparsely, keyed by exponent, and zero
//! coefficients are never stored. Every transition and base-change matrix in
//! this crate is a [`LaurentMatrix`] in the single chart coordinate `t`; the
//! other chart's polynomial ring is `F[1/t]`, i.e. entries with support `<= 0`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    field: FieldSpec,
    terms: BTreeMap<i64, FieldElement>,
}

impl LaurentPoly {
    pub fn zero(field: FieldSpec) -> Self {
        LaurentPoly { field, terms: BTreeMap::new() }
    }

    pub fn one(field: FieldSpec) -> Self {
        Self::monomial(field.one(), 0)
    }

    pub fn constant(c: FieldElement) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * t^e`.
    pub fn monomial(c: FieldElement, e: i64) -> Self {
        let mut p = LaurentPoly::zero(c.spec());
        if !c.is_zero() {
            p.terms.insert(e, c);
        }
        p
    }

    /// `z * t^e` with `z` an integer reduced into `field`.
    pub fn int_monomial(field: FieldSpec, z: i64, e: i64) -> Self {
        Self::monomial(field.int(z), e)
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, summing
    /// repeated exponents.
    pub fn from_terms(
        field: FieldSpec,
        terms: impl IntoIterator<Item = (i64, FieldElement)>,
    ) -> Result<Self> {
        let mut p = LaurentPoly::zero(field);
        for (e, c) in terms {
            if c.spec() != field {
                return Err(Error::FieldMismatch { left: field, right: c.spec() });
            }
            p.add_term(e, &c);
        }
        Ok(p)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &FieldElement)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: i64) -> FieldElement {
        self.terms.get(&e).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn lowest_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn highest_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    fn add_term(&mut self, e: i64, c: &FieldElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(existing) => {
                let sum = &*existing + c;
                if sum.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(e, c.clone());
            }
        }
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch { left: self.field, right: other.field })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let mut out = LaurentPoly::zero(self.field);
        for (ea, ca) in self.terms() {
            for (eb, cb) in other.terms() {
                out.add_term(ea + eb, &(ca * cb));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        if c.is_zero() {
            return LaurentPoly::zero(self.field);
        }
        LaurentPoly { field: self.field, terms: self.terms().map(|(e, x)| (e, x * c)).collect() }
    }

    /// Multiplies by `t^m`.
    pub fn shift(&self, m: i64) -> Self {
        LaurentPoly { field: self.field, terms: self.terms().map(|(e, c)| (e + m, c.clone())).collect() }
    }

    /// The pair `(c, e)` when this polynomial is `c * t^e` with `c != 0`.
    pub fn as_monomial(&self) -> Option<(&FieldElement, i64)> {
        if self.terms.len() == 1 {
            self.terms().next().map(|(e, c)| (c, e))
        } else {
            None
        }
    }

    /// Units of `F[t, 1/t]` are exactly the nonzero monomials.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1
    }

    /// Inverse in `F[t, 1/t]`, when this is a unit.
    pub fn unit_inverse(&self) -> Option<Self> {
        let (c, e) = self.as_monomial()?;
        Some(LaurentPoly::monomial(c.inverse().ok()?, -e))
    }

    pub fn is_on_side(&self, side: PolySide) -> bool {
        match side {
            PolySide::Plus => self.lowest_exponent().is_none_or(|e| e >= 0),
            PolySide::Minus => self.highest_exponent().is_none_or(|e| e <= 0),
        }
    }

    /// Exact quotient `self / divisor` in `F[t, 1/t]`; fails when the
    /// division leaves a remainder.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        self.same_field(divisor)?;
        let (Some(d_hi), Some(d_lo)) = (divisor.highest_exponent(), divisor.lowest_exponent()) else {
            return Err(Error::DivisionByZero);
        };
        let lead_inv = divisor.coeff(d_hi).inverse()?;
        let mut rem = self.clone();
        let mut quot = LaurentPoly::zero(self.field);
        let floor = self.lowest_exponent().map(|lo| lo - d_lo);
        while let Some(hi) = rem.highest_exponent() {
            let e = hi - d_hi;
            if floor.is_some_and(|f| e < f) {
                return Err(Error::Unsupported("inexact Laurent division".into()));
            }
            let c = &rem.coeff(hi) * &lead_inv;
            for (de, dc) in divisor.terms() {
                rem.add_term(de + e, &-(dc * &c));
            }
            quot.add_term(e, &c);
        }
        Ok(quot)
    }

    /// Bit-exact text: terms in increasing exponent order joined by `" + "`,
    /// each written `c*t^e` (the exponent-0 term is written `c`), e.g.
    /// `-1*t^-2 + 3 + 1*t^1`. The zero polynomial is `0`.
    pub fn canonical(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.terms()
            .map(|(e, c)| if e == 0 { c.to_string() } else { format!("{c}*t^{e}") })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Parses [`canonical`](Self::canonical) text.
    pub fn parse(field: FieldSpec, s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(LaurentPoly::zero(field));
        }
        let mut terms = Vec::new();
        for term in s.split(" + ") {
            let (c, e) = match term.split_once("*t^") {
                Some((c, e)) => {
                    let e: i64 = e.parse().map_err(|_| Error::Parse(format!("bad exponent in {term:?}")))?;
                    (c, e)
                }
                None => (term, 0),
            };
            terms.push((e, field.parse(c)?));
        }
        LaurentPoly::from_terms(field, terms)
    }
}

/// Human-oriented rendering, highest exponent first: `t^3`, `3*t^2 - t^1`,
/// `-1`. Residues above `p / 2` are written as negatives.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms().rev().enumerate() {
            let neg = c.prefers_minus();
            let mag = if neg { -c } else { c.clone() };
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if e == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "t^{e}")?;
            } else {
                write!(f, "{mag}*t^{e}")?;
            }
        }
        Ok(())
    }
}

macro_rules! poly_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
    };
}

poly_binop!(Add, add, checked_add);
poly_binop!(Sub, sub, checked_sub);
poly_binop!(Mul, mul, checked_mul);

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { field: self.field, terms: self.terms().map(|(e, c)| (e, -c)).collect() }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

/// Which chart a matrix is regular on: `Plus` is `F[t]`, `Minus` is `F[1/t]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PolySide {
    Plus,
    Minus,
}

impl PolySide {
    pub fn opposite(self) -> Self {
        match self {
            PolySide::Plus => PolySide::Minus,
            PolySide::Minus => PolySide::Plus,
        }
    }
}

/// A square matrix over `F[t, 1/t]`, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentMatrix {
    field: FieldSpec,
    rank: usize,
    entries: Vec<LaurentPoly>,
}

impl LaurentMatrix {
    pub fn zero(field: FieldSpec, rank: usize) -> Self {
        LaurentMatrix { field, rank, entries: vec![LaurentPoly::zero(field); rank * rank] }
    }

    pub fn identity(field: FieldSpec, rank: usize) -> Self {
        let mut m = Self::zero(field, rank);
        for i in 0..rank {
            m.set(i, i, LaurentPoly::one(field));
        }
        m
    }

    pub fn diagonal(field: FieldSpec, diag: Vec<LaurentPoly>) -> Result<Self> {
        let mut m = Self::zero(field, diag.len());
        for (i, d) in diag.into_iter().enumerate() {
            if d.field() != field {
                return Err(Error::FieldMismatch { left: field, right: d.field() });
            }
            m.set(i, i, d);
        }
        Ok(m)
    }

    /// `diag(t^{a_1}, ..., t^{a_r})`.
    pub fn monomial_diagonal(field: FieldSpec, exponents: &[i64]) -> Self {
        let diag = exponents.iter().map(|&a| LaurentPoly::monomial(field.one(), a)).collect();
        Self::diagonal(field, diag).expect("single field")
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<LaurentPoly>>) -> Result<Self> {
        let rank = rows.len();
        if rank == 0 {
            return Err(Error::InvalidParams("matrix must have rank >= 1".into()));
        }
        let mut entries = Vec::with_capacity(rank * rank);
        for row in rows {
            if row.len() != rank {
                return Err(Error::ShapeMismatch { left: rank, right: row.len() });
            }
            for p in row {
                if p.field() != field {
                    return Err(Error::FieldMismatch { left: field, right: p.field() });
                }
                entries.push(p);
            }
        }
        Ok(LaurentMatrix { field, rank, entries })
    }

    /// Convenience constructor from integer-coefficient monomials
    /// `(coefficient, exponent)`; a zero coefficient gives a zero entry.
    pub fn from_int_monomials(field: FieldSpec, rows: &[Vec<(i64, i64)>]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|row| row.iter().map(|&(c, e)| LaurentPoly::int_monomial(field, c, e)).collect())
            .collect();
        Self::from_rows(field, rows)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i * self.rank + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: LaurentPoly) {
        debug_assert_eq!(p.field(), self.field);
        self.entries[i * self.rank + j] = p;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[LaurentPoly]> + '_ {
        self.entries.chunks(self.rank)
    }

    pub fn entries(&self) -> impl Iterator<Item = &LaurentPoly> + '_ {
        self.entries.iter()
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zero(self.field, self.rank);
        for i in 0..self.rank {
            for j in 0..self.rank {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Multiplies every entry by `t^m`.
    pub fn shift(&self, m: i64) -> Self {
        LaurentMatrix {
            field: self.field,
            rank: self.rank,
            entries: self.entries.iter().map(|p| p.shift(m)).collect(),
        }
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        LaurentMatrix {
            field: self.field,
            rank: self.rank,
            entries: self.entries.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// Lowest and highest exponent over all entries; `None` for the zero matrix.
    pub fn exponent_range(&self) -> Option<(i64, i64)> {
        let lo = self.entries.iter().filter_map(LaurentPoly::lowest_exponent).min()?;
        let hi = self.entries.iter().filter_map(LaurentPoly::highest_exponent).max()?;
        Some((lo, hi))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rank).all(|i| (0..self.rank).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.rank).all(|i| (i + 1..self.rank).all(|j| self.get(i, j).is_zero()))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.field != other.field {
            return Err(Error::FieldMismatch { left: self.field, right: other.field });
        }
        if self.rank != other.rank {
            return Err(Error::ShapeMismatch { left: self.rank, right: other.rank });
        }
        let r = self.rank;
        let mut out = Self::zero(self.field, r);
        for i in 0..r {
            for j in 0..r {
                let mut acc = LaurentPoly::zero(self.field);
                for l in 0..r {
                    let (a, b) = (self.get(i, l), other.get(l, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Exact determinant: cofactor expansion up to rank 4, fraction-free
    /// (Bareiss) elimination above that.
    pub fn det(&self) -> LaurentPoly {
        if self.rank <= 4 {
            let idx: Vec<usize> = (0..self.rank).collect();
            self.cofactor_det(&idx, 0)
        } else {
            self.bareiss_det()
        }
    }

    fn cofactor_det(&self, cols: &[usize], row: usize) -> LaurentPoly {
        if cols.len() == 1 {
            return self.get(row, cols[0]).clone();
        }
        let mut acc = LaurentPoly::zero(self.field);
        for (pos, &c) in cols.iter().enumerate() {
            let entry = self.get(row, c);
            if entry.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = entry * &self.cofactor_det(&rest, row + 1);
            acc = if pos % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }

    pub(crate) fn bareiss_det(&self) -> LaurentPoly {
        let r = self.rank;
        let mut a: Vec<Vec<LaurentPoly>> = self.rows().map(<[LaurentPoly]>::to_vec).collect();
        let mut prev = LaurentPoly::one(self.field);
        let mut negate = false;
        for k in 0..r {
            if a[k][k].is_zero() {
                match (k + 1..r).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(k, i);
                        negate = !negate;
                    }
                    None => return LaurentPoly::zero(self.field),
                }
            }
            for i in k + 1..r {
                for j in k + 1..r {
                    let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
                }
            }
            prev = a[k][k].clone();
        }
        let d = a[r - 1][r - 1].clone();
        if negate {
            -d
        } else {
            d
        }
    }

    pub fn side_check(&self, side: PolySide) -> bool {
        self.entries.iter().all(|p| p.is_on_side(side))
    }

    /// `row[dst] += factor * row[src]`.
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, factor: &LaurentPoly) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.rank {
            let s = self.get(src, j);
            if s.is_zero() {
                continue;
            }
            let v = self.get(dst, j) + &(s * factor);
            self.set(dst, j, v);
        }
    }

    /// `col[dst] += factor * col[src]`.
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, factor: &LaurentPoly) {
        if factor.is_zero() {
            return;
        }
        for i in 0..self.rank {
            let s = self.get(i, src);
            if s.is_zero() {
                continue;
            }
            let v = self.get(i, dst) + &(s * factor);
            self.set(i, dst, v);
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.rank {
            self.entries.swap(a * self.rank + j, b * self.rank + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rank {
            self.entries.swap(i * self.rank + a, i * self.rank + b);
        }
    }

    pub fn scale_row(&mut self, i: usize, c: &FieldElement) {
        for j in 0..self.rank {
            let v = self.get(i, j).scale(c);
            self.set(i, j, v);
        }
    }

    /// Entries in canonical text, row by row.
    pub fn canonical_rows(&self) -> Vec<Vec<String>> {
        self.rows().map(|row| row.iter().map(LaurentPoly::canonical).collect()).collect()
    }
}

impl fmt::Display for LaurentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, p) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl Mul<&LaurentMatrix> for &LaurentMatrix {
    type Output = LaurentMatrix;
    fn mul(self, rhs: &LaurentMatrix) -> LaurentMatrix {
        self.checked_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

pub fn mat_mul(a: &LaurentMatrix, b: &LaurentMatrix) -> Result<LaurentMatrix> {
    a.checked_mul(b)
}

pub fn mat_det(a: &LaurentMatrix) -> LaurentPoly {
    a.det()
}

pub fn side_check(a: &LaurentMatrix, side: PolySide) -> bool {
    a.side_check(side)
}

pub fn is_unit(a: &LaurentPoly) -> bool {
    a.is_unit()
}

pub(crate) fn random_nonzero(field: FieldSpec, rng: &mut impl Rng) -> FieldElement {
    match field.characteristic() {
        0 => {
            let v = rng.gen_range(1..=4i64);
            field.int(if rng.gen_bool(0.5) { v } else { -v })
        }
        p => {
            let hi = p.min(1 << 20);
            field.int(rng.gen_range(1..hi) as i64)
        }
    }
}

fn random_element(field: FieldSpec, rng: &mut impl Rng) -> FieldElement {
    if rng.gen_bool(0.25) {
        field.zero()
    } else {
        random_nonzero(field, rng)
    }
}

/// A seeded random matrix, invertible over the chosen side: a product of
/// elementary row additions whose multipliers have at most `degree_bound`
/// as exponent magnitude, a row permutation and a constant diagonal scaling.
/// Its determinant is a nonzero constant.
pub fn random_unimodular(
    field: FieldSpec,
    rank: usize,
    side: PolySide,
    degree_bound: u32,
    seed: u64,
) -> Result<LaurentMatrix> {
    if rank == 0 {
        return Err(Error::InvalidParams("rank must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let diag = (0..rank).map(|_| LaurentPoly::constant(random_nonzero(field, &mut rng))).collect();
    let mut m = LaurentMatrix::diagonal(field, diag)?;
    if rank == 1 {
        return Ok(m);
    }
    let sign = match side {
        PolySide::Plus => 1,
        PolySide::Minus => -1,
    };
    for _ in 0..2 * rank {
        let dst = rng.gen_range(0..rank);
        let src = (dst + rng.gen_range(1..rank)) % rank;
        let terms: Vec<_> =
            (0..=degree_bound as i64).map(|e| (sign * e, random_element(field, &mut rng))).collect();
        let factor = LaurentPoly::from_terms(field, terms)?;
        m.add_row_multiple(dst, src, &factor);
    }
    for i in (1..rank).rev() {
        let j = rng.gen_range(0..=i);
        m.swap_rows(i, j);
    }
    Ok(m)
}
