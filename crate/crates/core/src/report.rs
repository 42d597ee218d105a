//! Serializable reports, `(n, characteristic)` sweeps and the verification
//! suites run by the `jetsplit` binary.
//!
//! Every check function is deterministic for fixed arguments; the random
//! sandwich check takes an explicit seed.

use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::binomsys::{binomial_lemma_check, char0_split, det_formula_check};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::jet::{balancing_factors, left_transition, JetParams, ModuleSide};
use crate::laurent::{random_unimodular, LaurentMatrix, LaurentPoly, PolySide};
use crate::splitting::{
    birkhoff_split, checked_split, det_exponent, oracle_split, verify_certificate, SplittingType,
};

/// Result of a certified split. Only constructed after the certificate has
/// been verified and the oracle agreed, so both flags are always `true`.
#[derive(Clone, Debug, Serialize)]
pub struct SplitReport {
    pub params: JetParams,
    pub degrees: Vec<i64>,
    pub multiplicities: Vec<(i64, usize)>,
    pub certificate_verified: bool,
    pub oracle_checked: bool,
    pub ms: u64,
    #[serde(skip)]
    pub splitting: SplittingType,
}

/// Splits the transition matrix of `params`, verifying the certificate and
/// the oracle. Any disagreement is an error, never a report.
pub fn split_report(params: &JetParams) -> Result<SplitReport> {
    let start = Instant::now();
    let m = params.transition();
    let checked = checked_split(&m)?;
    if !verify_certificate(&m, &checked.certificate) {
        return Err(Error::CertificateRejected("certificate identity does not hold".into()));
    }
    let splitting = checked.splitting;
    Ok(SplitReport {
        params: *params,
        degrees: splitting.degrees().to_vec(),
        multiplicities: splitting.multiplicities(),
        certificate_verified: true,
        oracle_checked: true,
        ms: start.elapsed().as_millis() as u64,
        splitting,
    })
}

impl fmt::Display for SplitReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.params;
        writeln!(f, "P^{}(O({})) over {}, {} module", p.k, p.n, p.field, p.side)?;
        writeln!(f, "splitting: {}", self.splitting)?;
        writeln!(f, "degrees: {:?}", self.degrees)?;
        writeln!(f, "certificate verified: {}", self.certificate_verified)?;
        writeln!(f, "oracle agrees: {}", self.oracle_checked)?;
        write!(f, "time: {} ms", self.ms)
    }
}

/// Axes of a table sweep.
#[derive(Clone, Debug, Serialize)]
pub struct TableAxes {
    pub k: i64,
    pub n_min: i64,
    pub n_max: i64,
    pub characteristics: Vec<u64>,
    pub sides: Vec<ModuleSide>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableCell {
    pub n: i64,
    pub characteristic: u64,
    /// Splitting type as left module, when computed.
    pub left: Option<String>,
    /// Splitting type as right module, when computed.
    pub right: Option<String>,
}

impl TableCell {
    pub fn differs(&self) -> bool {
        matches!((&self.left, &self.right), (Some(l), Some(r)) if l != r)
    }
}

/// `grid[i][j]` is the cell for `n = n_min + i` and `characteristics[j]`.
#[derive(Clone, Debug, Serialize)]
pub struct TableReport {
    pub axes: TableAxes,
    pub grid: Vec<Vec<TableCell>>,
    /// `(n, characteristic)` of cells whose left and right types differ.
    pub differing: Vec<(i64, u64)>,
}

impl TableReport {
    pub fn cell(&self, n: i64, characteristic: u64) -> Option<&TableCell> {
        let j = self.axes.characteristics.iter().position(|&c| c == characteristic)?;
        self.grid.get(usize::try_from(n - self.axes.n_min).ok()?)?.get(j)
    }
}

/// Sweeps `n_min..=n_max` against `characteristics`. Cells are computed in
/// parallel; their order follows the axes.
pub fn table_report(
    k: i64,
    n_min: i64,
    n_max: i64,
    characteristics: &[u64],
    sides: &[ModuleSide],
) -> Result<TableReport> {
    if !(1 <= k && k <= n_min && n_min <= n_max) {
        return Err(Error::InvalidParams(format!(
            "need 1 <= k <= n-min <= n-max, got k = {k}, n-min = {n_min}, n-max = {n_max}"
        )));
    }
    if sides.is_empty() {
        return Err(Error::InvalidParams("no module side selected".into()));
    }
    if k != 1 && sides.contains(&ModuleSide::Right) {
        return Err(Error::InvalidParams(format!(
            "the right module structure is only available for k = 1 (got k = {k})"
        )));
    }
    let fields = characteristics.iter().map(|&c| FieldSpec::new(c)).collect::<Result<Vec<_>>>()?;
    let coords: Vec<(i64, FieldSpec)> =
        (n_min..=n_max).flat_map(|n| fields.iter().map(move |&f| (n, f))).collect();
    let split = |n: i64, f: FieldSpec, side: ModuleSide| -> Result<Option<String>> {
        if !sides.contains(&side) {
            return Ok(None);
        }
        let report = split_report(&JetParams::new(n, k, f, side)?)?;
        Ok(Some(report.splitting.to_string()))
    };
    let cells = coords
        .par_iter()
        .map(|&(n, f)| {
            Ok(TableCell {
                n,
                characteristic: f.characteristic(),
                left: split(n, f, ModuleSide::Left)?,
                right: split(n, f, ModuleSide::Right)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let differing = cells.iter().filter(|c| c.differs()).map(|c| (c.n, c.characteristic)).collect();
    let grid = cells.chunks(fields.len()).map(<[TableCell]>::to_vec).collect();
    let axes =
        TableAxes { k, n_min, n_max, characteristics: characteristics.to_vec(), sides: sides.to_vec() };
    Ok(TableReport { axes, grid, differing })
}

impl fmt::Display for TableReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut header = vec!["n".to_string()];
        for &c in &self.axes.characteristics {
            for side in &self.axes.sides {
                header.push(format!("char {c} {side}"));
            }
        }
        let mut rows = vec![header];
        for (i, line) in self.grid.iter().enumerate() {
            let mut row = vec![(self.axes.n_min + i as i64).to_string()];
            for cell in line {
                for side in &self.axes.sides {
                    let s = match side {
                        ModuleSide::Left => &cell.left,
                        ModuleSide::Right => &cell.right,
                    };
                    let mark = if cell.differs() { " *" } else { "" };
                    row.push(format!("{}{mark}", s.as_deref().unwrap_or("-")));
                }
            }
            rows.push(row);
        }
        let widths: Vec<usize> =
            (0..rows[0].len()).map(|j| rows.iter().map(|r| r[j].len()).max().unwrap_or(0)).collect();
        for row in &rows {
            let cols: Vec<String> = row.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}")).collect();
            writeln!(f, "{}", cols.join("  ").trim_end())?;
        }
        if self.axes.sides.len() < 2 {
            write!(f, "single side computed; no left/right comparison")
        } else if self.differing.is_empty() {
            write!(f, "left and right agree in every cell")
        } else {
            let cells: Vec<String> =
                self.differing.iter().map(|(n, c)| format!("(n={n}, char {c})")).collect();
            write!(f, "* left differs from right at {}", cells.join(", "))
        }
    }
}

/// Outcome of one verification check.
#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub label: String,
    pub cases: usize,
    pub failed_cases: usize,
    /// The first few failure descriptions.
    pub failures: Vec<String>,
    /// Number of factorizations performed and how many of them violated
    /// `sum of degrees == determinant exponent`.
    pub splits: usize,
    pub conservation_failures: usize,
    pub ms: u64,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failed_cases == 0 && self.conservation_failures == 0
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{status}  {} ({} cases, {} ms)", self.label, self.cases, self.ms)?;
        if let Some(first) = self.failures.first() {
            write!(f, ": {first}")?;
            if self.failed_cases > 1 {
                write!(f, " (and {} more)", self.failed_cases - 1)?;
            }
        }
        if self.conservation_failures > 0 {
            write!(f, "; degree sum broken in {} splits", self.conservation_failures)?;
        }
        Ok(())
    }
}

const MAX_RECORDED: usize = 8;

struct Check {
    outcome: CheckOutcome,
    start: Instant,
}

impl Check {
    fn new(label: impl Into<String>) -> Self {
        let outcome = CheckOutcome {
            label: label.into(),
            cases: 0,
            failed_cases: 0,
            failures: Vec::new(),
            splits: 0,
            conservation_failures: 0,
            ms: 0,
        };
        Check { outcome, start: Instant::now() }
    }

    fn case(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.outcome.cases += 1;
        if !ok {
            self.fail(describe());
        }
    }

    fn fail(&mut self, msg: String) {
        self.outcome.failed_cases += 1;
        if self.outcome.failures.len() < MAX_RECORDED {
            self.outcome.failures.push(msg);
        }
    }

    /// Factors `m` with a verified certificate, recording degree-sum
    /// conservation. Failures are recorded and yield `None`.
    fn split(&mut self, m: &LaurentMatrix, what: &str) -> Option<SplittingType> {
        let (s, cert) = match birkhoff_split(m) {
            Ok(x) => x,
            Err(e) => {
                self.fail(format!("{what}: {e}"));
                return None;
            }
        };
        self.outcome.splits += 1;
        if det_exponent(m).ok() != Some(s.degree_sum()) {
            self.outcome.conservation_failures += 1;
        }
        if !verify_certificate(m, &cert) {
            self.fail(format!("{what}: certificate rejected"));
            return None;
        }
        Some(s)
    }

    fn finish(mut self) -> CheckOutcome {
        self.outcome.ms = self.start.elapsed().as_millis() as u64;
        self.outcome
    }
}

fn fields(chars: &[u64]) -> Vec<FieldSpec> {
    chars.iter().map(|&c| FieldSpec::new(c).expect("prime or 0")).collect()
}

fn left(n: i64, k: i64, f: FieldSpec) -> LaurentMatrix {
    left_transition(&JetParams::left(n, k, f).expect("1 <= k <= n")).expect("valid")
}

/// For `1 <= n <= n_max`: the left splitting of `P^1(O(n))` is
/// `[n-1, n-1]` unless the characteristic divides `n`, then `[n, n-2]`; the
/// right splitting is always `[n, n-2]`.
pub fn check_left_right_grid(n_max: i64, chars: &[u64]) -> CheckOutcome {
    let mut c = Check::new(format!("left/right splitting of P^1(O(n)), n <= {n_max}, chars {chars:?}"));
    for f in fields(chars) {
        for n in 1..=n_max {
            let want_left = if f.divides(n) { vec![n, n - 2] } else { vec![n - 1, n - 1] };
            let l = c.split(&left(n, 1, f), &format!("left n={n} over {f}"));
            if let Some(s) = l {
                c.case(s.degrees() == want_left, || format!("left n={n} over {f}: got {s}"));
            }
            let m = JetParams::new(n, 1, f, ModuleSide::Right).expect("valid").transition();
            if let Some(s) = c.split(&m, &format!("right n={n} over {f}")) {
                c.case(s.degrees() == [n, n - 2], || format!("right n={n} over {f}: got {s}"));
            }
        }
    }
    c.finish()
}

/// Over `Q`, for `1 <= k <= n <= n_max`, the linear systems and the
/// factorization both give `(k+1) x O(n-k)`.
pub fn check_char0_systems(n_max: i64) -> CheckOutcome {
    let mut c = Check::new(format!("P^k(O(n)) = (k+1) O(n-k) over Q, n <= {n_max}"));
    let q = FieldSpec::RATIONALS;
    for n in 1..=n_max {
        for k in 1..=n {
            let want = vec![n - k; k as usize + 1];
            match char0_split(n, k) {
                Ok(s) => c.case(s.degrees() == want, || format!("systems n={n} k={k}: got {s}")),
                Err(e) => c.case(false, || format!("systems n={n} k={k}: {e}")),
            }
            if let Some(s) = c.split(&left(n, k, q), &format!("factorization n={n} k={k}")) {
                c.case(s.degrees() == want, || format!("factorization n={n} k={k}: got {s}"));
            }
        }
    }
    c.finish()
}

/// `det(left_transition)` is `+-t^{(n-k)(k+1)}`.
pub fn check_det_exponent(n_max: i64, chars: &[u64]) -> CheckOutcome {
    let mut c =
        Check::new(format!("det of P^k(O(n)) transition is +-t^((n-k)(k+1)), n <= {n_max}, chars {chars:?}"));
    for f in fields(chars) {
        for n in 1..=n_max {
            for k in 1..=n {
                let det = left(n, k, f).det();
                let ok = det.as_monomial().is_some_and(|(co, e)| co.is_sign() && e == (n - k) * (k + 1));
                c.case(ok, || format!("n={n} k={k} over {f}: det = {det}"));
            }
        }
    }
    c.finish()
}

/// `P^1(O(n))` has transition `[[t^n, 0], [n t^{n-1}, -t^{n-2}]]`, and the
/// explicit base change brings it to `diag(t^{n-1}, t^{n-1})` whenever the
/// characteristic does not divide `n`.
pub fn check_rank_two_examples(n_max: i64, chars: &[u64]) -> CheckOutcome {
    let mut c = Check::new(format!("P^1(O(n)) transition and base change, n <= {n_max}, chars {chars:?}"));
    for f in fields(chars) {
        for n in 1..=n_max {
            let m = left(n, 1, f);
            let expected = LaurentMatrix::from_rows(
                f,
                vec![
                    vec![LaurentPoly::int_monomial(f, 1, n), LaurentPoly::zero(f)],
                    vec![LaurentPoly::int_monomial(f, n, n - 1), LaurentPoly::int_monomial(f, -1, n - 2)],
                ],
            )
            .expect("square");
            c.case(m == expected, || format!("n={n} over {f}: transition {m}"));
            if f.divides(n) {
                continue;
            }
            match balancing_factors(n, f) {
                Ok((to_d, from_d)) => {
                    let prod = &(&to_d * &m) * &from_d;
                    let ok = prod == LaurentMatrix::monomial_diagonal(f, &[n - 1, n - 1]);
                    c.case(ok, || format!("n={n} over {f}: base change gives {prod}"));
                }
                Err(e) => c.case(false, || format!("n={n} over {f}: {e}")),
            }
        }
    }
    c.finish()
}

/// `|A_r| = +- prod_{l=0}^{r} C(n-l, k-r) / C(k-l, r-l)` over `Q`.
pub fn check_det_formula(n_max: i64) -> CheckOutcome {
    let mut c = Check::new(format!("|A_r| binomial product formula, n <= {n_max}"));
    for n in 1..=n_max {
        for k in 1..=n {
            for r in 1..=k {
                match det_formula_check(n, k, r) {
                    Ok((det, prod)) => c.case(det == prod || det == -prod.clone(), || {
                        format!("n={n} k={k} r={r}: |A_r| = {det}, product = {prod}")
                    }),
                    Err(e) => c.case(false, || format!("n={n} k={k} r={r}: {e}")),
                }
            }
        }
    }
    c.finish()
}

/// The binomial reduction identity for `0 <= a, b <= k <= n <= n_max`.
pub fn check_binomial_lemma(n_max: i64) -> CheckOutcome {
    let mut c = Check::new(format!("binomial reduction identity, n <= {n_max}"));
    for n in 0..=n_max {
        for k in 0..=n {
            for a in 0..=k {
                for b in 0..=k {
                    match binomial_lemma_check(n, k, a, b) {
                        Ok(ok) => c.case(ok, || format!("n={n} k={k} a={a} b={b}")),
                        Err(e) => c.case(false, || format!("n={n} k={k} a={a} b={b}: {e}")),
                    }
                }
            }
        }
    }
    c.finish()
}

/// Splits `P * diag(t^{a_i}) * Q` for random unimodular `P` (over `F[t]`)
/// and `Q` (over `F[1/t]`), rank `<= 4`, `|a_i| <= 5`, and compares with the
/// sorted `a_i` and the oracle.
pub fn check_random_sandwiches(trials: usize, chars: &[u64], seed: u64) -> CheckOutcome {
    let mut c = Check::new(format!("random unimodular sandwiches, {trials} per char {chars:?}, seed {seed}"));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for f in fields(chars) {
        for trial in 0..trials {
            let rank = rng.gen_range(1..=4usize);
            let mut a: Vec<i64> = (0..rank).map(|_| rng.gen_range(-5..=5)).collect();
            let p = random_unimodular(f, rank, PolySide::Plus, 1, rng.gen()).expect("rank >= 1");
            let q = random_unimodular(f, rank, PolySide::Minus, 1, rng.gen()).expect("rank >= 1");
            let m = &(&p * &LaurentMatrix::monomial_diagonal(f, &a)) * &q;
            a.sort_unstable_by(|x, y| y.cmp(x));
            let what = format!("trial {trial} over {f}, a = {a:?}");
            let Some(s) = c.split(&m, &what) else { continue };
            c.case(s.degrees() == a, || format!("{what}: got {s}"));
            match oracle_split(&m) {
                Ok(o) => c.case(o == s, || format!("{what}: oracle {o}, factorization {s}")),
                Err(e) => c.case(false, || format!("{what}: oracle {e}")),
            }
        }
    }
    c.finish()
}

/// Factorization and oracle agree on `left_transition(k, n)` for
/// `1 <= k <= k_max`, `k <= n <= n_max`.
pub fn check_oracle_agreement(k_max: i64, n_max: i64, chars: &[u64]) -> CheckOutcome {
    let mut c = Check::new(format!(
        "factorization matches section counts on P^k(O(n)), k <= {k_max}, n <= {n_max}, chars {chars:?}"
    ));
    for f in fields(chars) {
        for k in 1..=k_max {
            for n in k..=n_max {
                let m = left(n, k, f);
                let what = format!("n={n} k={k} over {f}");
                let Some(s) = c.split(&m, &what) else { continue };
                match oracle_split(&m) {
                    Ok(o) => c.case(o == s, || format!("{what}: oracle {o}, factorization {s}")),
                    Err(e) => c.case(false, || format!("{what}: oracle {e}")),
                }
            }
        }
    }
    c.finish()
}

/// Aggregates degree-sum conservation over every split in `outcomes`.
pub fn check_degree_sum(outcomes: &[CheckOutcome]) -> CheckOutcome {
    let mut c = Check::new("sum of split degrees equals determinant exponent");
    for o in outcomes {
        let broken = o.conservation_failures;
        c.outcome.cases += o.splits;
        if broken > 0 {
            c.fail(format!("{broken} of {} splits in '{}'", o.splits, o.label));
        }
    }
    if c.outcome.cases == 0 {
        c.fail("no splits were performed".into());
    }
    c.finish()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    All,
    Transition,
    Split,
    Systems,
    Lemmas,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Suite::All,
            "transition" => Suite::Transition,
            "split" => Suite::Split,
            "systems" => Suite::Systems,
            "lemmas" => Suite::Lemmas,
            _ => return Err(Error::Parse(format!("unknown suite {s:?}"))),
        })
    }
}

/// Runs a suite at full acceptance scale.
pub fn run_suite(suite: Suite, seed: u64) -> Vec<CheckOutcome> {
    let runs = |s: Suite| suite == Suite::All || suite == s;
    let mut out = Vec::new();
    if runs(Suite::Transition) {
        out.push(check_det_exponent(12, &[0, 2, 3, 5]));
        out.push(check_rank_two_examples(20, &[0, 2, 3, 5, 7]));
    }
    if runs(Suite::Split) {
        out.push(check_left_right_grid(30, &[0, 2, 3, 5, 7, 11]));
        out.push(check_oracle_agreement(4, 8, &[0, 2, 3, 5]));
        out.push(check_random_sandwiches(100, &[0, 2, 5], seed));
    }
    if runs(Suite::Systems) {
        out.push(check_char0_systems(10));
        out.push(check_det_formula(10));
    }
    if runs(Suite::Lemmas) {
        out.push(check_binomial_lemma(12));
    }
    if out.iter().any(|o| o.splits > 0) {
        let sum = check_degree_sum(&out);
        out.push(sum);
    }
    out
}
