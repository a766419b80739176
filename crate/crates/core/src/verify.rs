//! Closed-form weight distributions (Tables 1-13) and their comparison with
//! computed codes.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::code::{
    build_code_via_walsh, build_gold_code_via_weil, build_half_code_via_walsh, CodeError, CodeSummary,
};
use crate::families::{
    all_quad_triples, check_gold, check_monomial_admissible, check_quadproduct_case,
    gold_admissible_lambdas, monomial_admissible_lambdas, sample_quad_triples, QuadCase,
};
use crate::field::{Fe, FieldCtx, PrimeScalar};
use crate::walsh::{tabulate, FunctionSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum TableId {
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
    T7,
    T8,
    T9,
    T10,
    T11,
    T12,
    T13,
}

impl TableId {
    pub const ALL: [TableId; 13] = [
        TableId::T1,
        TableId::T2,
        TableId::T3,
        TableId::T4,
        TableId::T5,
        TableId::T6,
        TableId::T7,
        TableId::T8,
        TableId::T9,
        TableId::T10,
        TableId::T11,
        TableId::T12,
        TableId::T13,
    ];

    pub fn number(self) -> u32 {
        TableId::ALL.iter().position(|&t| t == self).unwrap() as u32 + 1
    }

    /// Half-set tables and the full-set table they halve.
    pub fn halves(self) -> Option<TableId> {
        match self {
            TableId::T8 => Some(TableId::T4),
            TableId::T9 => Some(TableId::T5),
            TableId::T10 => Some(TableId::T6),
            TableId::T11 => Some(TableId::T7),
            _ => None,
        }
    }

    fn family(self) -> Family {
        match self.number() {
            1..=3 => Family::Monomial,
            4..=11 => Family::Quad,
            _ => Family::Gold,
        }
    }

    fn quad_case(self) -> QuadCase {
        match self {
            TableId::T4 | TableId::T5 | TableId::T8 | TableId::T9 => QuadCase::I,
            _ => QuadCase::II,
        }
    }

    fn is_half(self) -> bool {
        self.halves().is_some()
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Family {
    Monomial,
    Quad,
    Gold,
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{}", self.number())
    }
}

impl FromStr for TableId {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().trim_start_matches(['T', 't']);
        t.parse::<usize>()
            .ok()
            .and_then(|n| n.checked_sub(1))
            .and_then(|i| TableId::ALL.get(i).copied())
            .ok_or_else(|| VerifyError::UnknownTable(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("unknown table '{0}' (expected T1..T13)")]
    UnknownTable(String),
    #[error("{table}: hypothesis unmet: {reason}")]
    HypothesisUnmet { table: TableId, reason: String },
    #[error("{table}: cell '{cell}' is not an exact integer")]
    InexactDivision { table: TableId, cell: &'static str },
    #[error("{table}: prediction is degenerate: {reason}")]
    Degenerate { table: TableId, reason: String },
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// Numeric parameters a table depends on.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Params {
    pub p: u32,
    pub m: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<i8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<PrimeScalar>,
}

impl Params {
    pub fn new(p: u32, m: u32) -> Self {
        Params {
            p,
            m,
            ..Default::default()
        }
    }

    pub fn with_eta(mut self, eta: i8) -> Self {
        self.eta = Some(eta);
        self
    }

    pub fn with_h(mut self, h: u32) -> Self {
        self.h = Some(h);
        self
    }

    pub fn with_b(mut self, b: PrimeScalar) -> Self {
        self.b = Some(b);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Prediction {
    pub source: TableId,
    pub params: Params,
    pub n: u64,
    pub dim: u32,
    pub dist: BTreeMap<u64, u64>,
    /// Dual weight-2 count used for the moment identities.
    pub a2_dual: u64,
    /// Multiplicities re-derived from the printed weights and the Pless
    /// moments; `None` when the system is singular or non-integral.
    pub moment_solved: Option<BTreeMap<u64, i128>>,
}

impl Prediction {
    /// Printed multiplicities agree with the moment-solved ones.
    pub fn pless_consistent(&self) -> bool {
        self.moment_solved.as_ref().is_some_and(|ms| {
            ms.len() == self.dist.len() && ms.iter().all(|(w, &a)| self.dist.get(w).map(|&x| x as i128) == Some(a))
        })
    }

    pub fn min_distance(&self) -> u64 {
        *self.dist.keys().next().expect("predictions are nonempty")
    }
}

fn hyp(table: TableId, ok: bool, reason: &str) -> Result<(), VerifyError> {
    if ok {
        Ok(())
    } else {
        Err(VerifyError::HypothesisUnmet {
            table,
            reason: reason.to_string(),
        })
    }
}

/// `+1` when `m` is 1 or 0 mod 4 (depending on parity), `-1` otherwise.
fn epsilon(m: u32) -> i128 {
    match m % 4 {
        0 | 1 => 1,
        _ => -1,
    }
}

fn need_eta(table: TableId, params: &Params) -> Result<i128, VerifyError> {
    match params.eta {
        Some(e @ (1 | -1)) => Ok(e as i128),
        _ => Err(VerifyError::HypothesisUnmet {
            table,
            reason: "eta(lambda) must be given as +1 or -1".into(),
        }),
    }
}

/// Every cell of `table` at `params`, evaluated exactly.
pub fn predict(table: TableId, params: &Params) -> Result<Prediction, VerifyError> {
    let Params { p, m, .. } = *params;
    let pp = p as i128;
    let pw = |e: i64| -> i128 {
        assert!(e >= 0, "negative exponent");
        pp.pow(e as u32)
    };
    let t = |e: i64| pw(e);
    let m_ = m as i64;
    let div = |num: i128, den: i128, cell: &'static str| -> Result<i128, VerifyError> {
        if num % den == 0 {
            Ok(num / den)
        } else {
            Err(VerifyError::InexactDivision { table, cell })
        }
    };
    let mut a2_scaled = true;
    let (n, rows): (i128, Vec<(i128, i128)>) = match table.family() {
        Family::Monomial => {
            hyp(table, p == 3, "p = 3")?;
            hyp(table, m % 2 == 0, "m = 2k even")?;
            let k = m_ / 2;
            hyp(table, k % 3 != 0, "gcd(k, 3) = 1")?;
            let b = params.b.unwrap_or(if table == TableId::T1 { 0 } else { 1 }) % 3;
            match table {
                TableId::T1 => {
                    hyp(table, b == 0, "b = 0")?;
                    let n = div(t(m_) - 1, 2, "n")?;
                    (n, vec![(t(m_ - 1) - t(k - 1), n), (t(m_ - 1) + t(k - 1), n)])
                }
                _ => {
                    hyp(table, b != 0, "b != 0")?;
                    let k_even = k % 2 == 0;
                    hyp(
                        table,
                        k_even == (table == TableId::T2),
                        if table == TableId::T2 { "k even" } else { "k odd" },
                    )?;
                    let n = div(t(m_) - 1, 4, "n")?;
                    let big = div(t(m_ + 1) - 3, 4, "A_1")?;
                    let rows = if k_even {
                        vec![
                            (div(t(m_ - 1) - t(k - 1), 2, "w_1")?, big),
                            (div(t(m_ - 1) + t(k), 2, "w_2")?, n),
                        ]
                    } else {
                        vec![
                            (div(t(m_ - 1) + t(k - 1), 2, "w_1")?, big),
                            (div(t(m_ - 1) - t(k), 2, "w_2")?, n),
                        ]
                    };
                    (n, rows)
                }
            }
        }
        Family::Quad => {
            hyp(table, p == 3, "p = 3")?;
            let eta = need_eta(table, params)?;
            let even = matches!(
                table,
                TableId::T4 | TableId::T6 | TableId::T8 | TableId::T10
            );
            hyp(table, (m % 2 == 0) == even, if even { "m even" } else { "m odd" })?;
            match table.quad_case() {
                QuadCase::I => hyp(table, m > 3, "m > 3")?,
                _ => hyp(
                    table,
                    m > 4 || (m == 4 && eta == -1),
                    "m > 4, or m = 4 with eta(lambda) = -1",
                )?,
            }
            let half = table.is_half();
            a2_scaled = !half;
            let base = table.halves().unwrap_or(table);
            let (n_full, rows) = match base {
                TableId::T4 => {
                    let s = eta * t(m_ / 2 - 1);
                    (
                        t(m_ - 1) - 1,
                        vec![
                            (2 * t(m_ - 2) - 2 * s, t(m_ - 2) + s),
                            (2 * t(m_ - 2), t(m_) - 1 - 2 * t(m_ - 2)),
                            (2 * t(m_ - 2) + 2 * s, t(m_ - 2) - s),
                        ],
                    )
                }
                TableId::T5 => {
                    let s = epsilon(m) * eta * t((m_ - 3) / 2);
                    (
                        t(m_ - 1) + 2 * epsilon(m) * eta * t((m_ - 1) / 2) - 1,
                        vec![
                            (2 * t(m_ - 2) + 4 * s, 2 * t(m_ - 1)),
                            (2 * t(m_ - 2), t(m_ - 2) + 2 * s - 1),
                            (2 * t(m_ - 2) + 6 * s, 2 * t(m_ - 2) - 2 * s),
                        ],
                    )
                }
                TableId::T6 => {
                    let se = epsilon(m) * eta;
                    let s = se * t(m_ / 2 - 1);
                    let s2 = se * t(m_ / 2 - 2);
                    (
                        t(m_ - 1) - 2 * se * t(m_ / 2) - 1,
                        vec![
                            (2 * t(m_ - 2) - 4 * s, t(m_) - t(m_ - 2)),
                            (2 * t(m_ - 2), t(m_ - 3) - 2 * s2 - 1),
                            (2 * t(m_ - 2) - 6 * s, 2 * t(m_ - 3) + 2 * s2),
                        ],
                    )
                }
                _ => {
                    let s = eta * t((m_ + 1) / 2 - 1);
                    let s3 = eta * t((m_ - 3) / 2);
                    (
                        t(m_ - 1) - 1,
                        vec![
                            (2 * t(m_ - 2) - 2 * s, t(m_ - 3) + s3),
                            (2 * t(m_ - 2), t(m_) - 2 * t(m_ - 3) - 1),
                            (2 * t(m_ - 2) + 2 * s, t(m_ - 3) - s3),
                        ],
                    )
                }
            };
            if half {
                // half-set tables, as printed
                let rows = match table {
                    TableId::T8 => {
                        let s = eta * t(m_ / 2 - 1);
                        vec![
                            (t(m_ - 2) - s, t(m_ - 2) + s),
                            (t(m_ - 2), t(m_) - 1 - 2 * t(m_ - 2)),
                            (t(m_ - 2) + s, t(m_ - 2) - s),
                        ]
                    }
                    TableId::T9 => {
                        let s = epsilon(m) * eta * t((m_ - 3) / 2);
                        vec![
                            (t(m_ - 2) + 2 * s, 2 * t(m_ - 1)),
                            (t(m_ - 2), t(m_ - 2) + 2 * s - 1),
                            (t(m_ - 2) + 3 * s, 2 * t(m_ - 2) - 2 * s),
                        ]
                    }
                    TableId::T10 => {
                        let se = epsilon(m) * eta;
                        let s = se * t(m_ / 2 - 1);
                        let s2 = se * t(m_ / 2 - 2);
                        vec![
                            (t(m_ - 2) - 2 * s, t(m_) - t(m_ - 2)),
                            (t(m_ - 2), t(m_ - 3) - 2 * s2 - 1),
                            (t(m_ - 2) - 3 * s, 2 * t(m_ - 3) + 2 * s2),
                        ]
                    }
                    _ => {
                        let s = eta * t((m_ + 1) / 2 - 1);
                        let s3 = eta * t((m_ - 3) / 2);
                        vec![
                            (t(m_ - 2) - s, t(m_ - 3) + s3),
                            (t(m_ - 2), t(m_) - 2 * t(m_ - 3) - 1),
                            (t(m_ - 2) + s, t(m_ - 3) - s3),
                        ]
                    }
                };
                let n = match table {
                    TableId::T8 | TableId::T11 => div(t(m_ - 1) - 1, 2, "n")?,
                    TableId::T9 => div(t(m_ - 1) - 1, 2, "n")? + epsilon(m) * eta * t((m_ - 1) / 2),
                    _ => div(t(m_ - 1) - 1, 2, "n")? - epsilon(m) * eta * t(m_ / 2),
                };
                (n, rows)
            } else {
                (n_full, rows)
            }
        }
        Family::Gold => {
            hyp(table, p % 2 == 1, "p odd")?;
            hyp(table, m % 2 == 0 && m > 4, "m = 2k > 4 even")?;
            let k = m / 2;
            let h = params.h.ok_or_else(|| VerifyError::HypothesisUnmet {
                table,
                reason: "h must be given".into(),
            })?;
            hyp(table, (1..k).contains(&h), "1 <= h < k")?;
            let d = FieldCtx::gcd(h, m);
            hyp(table, (m / d) % 2 == 0, "m/d even")?;
            let k_odd = (k / d) % 2 == 1;
            hyp(
                table,
                k_odd == (table == TableId::T12),
                if table == TableId::T12 { "k/d odd" } else { "k/d even" },
            )?;
            let (k_, d_) = (k as i64, d as i64);
            let den = t(m_ + 2 * d_ - 3);
            let base = (pp - 1) * t(m_ - 2);
            let q1 = t(m_) - 1;
            if k_odd {
                let n = t(m_ - 1) + (pp - 1) * t(k_ + d_ - 1) - 1;
                let a1 = div((t(m_ - 2) + t(k_ + d_ - 1)) * (t(m_ - 2) - t(k_ + d_ - 2)), den, "A_1")?;
                let a2 = q1 - div((t(m_ - 1) + t(k_ + d_ - 1)) * (t(m_ - 2) - t(k_ + d_ - 2)), den, "A_2")?;
                let a3 = div((pp - 1) * t(m_ - 2) * (t(m_ - 2) - t(k_ + d_ - 2)), den, "A_3")?;
                (
                    n,
                    vec![
                        (base, a1),
                        (base + (pp - 1) * (pp - 1) * t(k_ + d_ - 2), a2),
                        (base + pp * (pp - 1) * t(k_ + d_ - 2), a3),
                    ],
                )
            } else {
                let n = t(m_ - 1) - (pp - 1) * t(k_ + d_ - 1) - 1;
                let a1 = div((pp - 1) * t(m_ - 2) * (t(m_ - 2) + t(k_ + d_ - 2)), den, "A_1")?;
                let a2 = q1 - div((t(m_ - 1) - t(k_ + d_ - 1)) * (t(m_ - 2) + t(k_ + d_ - 2)), den, "A_2")?;
                let a3 = div((t(m_ - 2) - t(k_ + d_ - 1)) * (t(m_ - 2) + t(k_ + d_ - 2)), den, "A_3")?;
                (
                    n,
                    vec![
                        (base - pp * (pp - 1) * t(k_ + d_ - 2), a1),
                        (base - (pp - 1) * (pp - 1) * t(k_ + d_ - 2), a2),
                        (base, a3),
                    ],
                )
            }
        }
    };
    let degenerate = |reason: String| VerifyError::Degenerate { table, reason };
    if n <= 0 {
        return Err(degenerate(format!("length {n}")));
    }
    let mut dist = BTreeMap::new();
    for &(w, a) in &rows {
        if w <= 0 || a < 0 {
            return Err(degenerate(format!("row ({w}, {a})")));
        }
        if dist.insert(w as u64, a as u64).is_some() {
            return Err(degenerate(format!("weight {w} repeated")));
        }
    }
    dist.retain(|_, a| *a > 0);
    let total: i128 = rows.iter().map(|r| r.1).sum();
    if total != t(m_) - 1 {
        return Err(degenerate(format!("multiplicities sum to {total}, not p^m - 1")));
    }
    let a2_dual = if a2_scaled {
        (n * (pp - 1) * (pp - 2) / 2) as u64
    } else {
        0
    };
    let weights: Vec<i128> = rows.iter().map(|r| r.0).collect();
    let moment_solved = solve_moments(&weights, n, pp, m, a2_dual as i128);
    Ok(Prediction {
        source: table,
        params: params.clone(),
        n: n as u64,
        dim: m,
        dist,
        a2_dual,
        moment_solved,
    })
}

/// Solves `sum_j w_j^r A_j = M_r` for `r < weights.len()` using the first
/// Pless moments of an `[n, m]` code with `A_1^perp = 0` and the given
/// `A_2^perp`.
pub fn solve_moments(weights: &[i128], n: i128, p: i128, m: u32, a2: i128) -> Option<BTreeMap<u64, i128>> {
    let s = weights.len();
    if s == 0 || s > 3 {
        return None;
    }
    let pm = |e: i32| Ratio::from_integer(p).pow(m as i32 + e);
    let rhs = [
        pm(0) - 1,
        Ratio::from_integer((p - 1) * n) * pm(-1),
        Ratio::from_integer((p - 1) * n * ((p - 1) * n + 1) + 2 * a2) * pm(-2),
    ];
    let mut a: Vec<Vec<Ratio<i128>>> = (0..s)
        .map(|r| {
            let mut row: Vec<Ratio<i128>> = weights.iter().map(|&w| Ratio::from_integer(w.pow(r as u32))).collect();
            row.push(rhs[r]);
            row
        })
        .collect();
    for c in 0..s {
        let piv = (c..s).find(|&r| a[r][c] != Ratio::from_integer(0))?;
        a.swap(c, piv);
        let inv = a[c][c].recip();
        for v in a[c].iter_mut() {
            *v *= inv;
        }
        for r in 0..s {
            if r != c {
                let f = a[r][c];
                for j in 0..=s {
                    let sub = f * a[c][j];
                    a[r][j] -= sub;
                }
            }
        }
    }
    let mut out = BTreeMap::new();
    for (j, &w) in weights.iter().enumerate() {
        let v = a[j][s];
        if !v.is_integer() {
            return None;
        }
        out.insert(w as u64, v.to_integer());
    }
    Some(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Match,
    LengthMismatch,
    DistributionMismatch,
    HypothesisUnmet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightDiff {
    pub weight: u64,
    pub expected: u64,
    pub got: u64,
}

/// One concrete parameter choice within a family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Instance {
    Monomial { lambda: Fe, b: PrimeScalar },
    Quad { lambda: Fe, u: Fe, v: Fe },
    Gold { lambda: Fe, h: u32 },
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub source: TableId,
    pub params: Params,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<Instance>,
    pub verdict: Verdict,
    pub expected: Option<Prediction>,
    pub got: Option<CodeSummary>,
    pub details: Vec<WeightDiff>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

pub fn verify(pred: &Prediction, computed: &CodeSummary) -> VerificationReport {
    let mut details = Vec::new();
    let weights: std::collections::BTreeSet<u64> =
        pred.dist.keys().chain(computed.dist.keys()).copied().collect();
    for w in weights {
        let e = pred.dist.get(&w).copied().unwrap_or(0);
        let g = computed.dist.get(&w).copied().unwrap_or(0);
        if e != g {
            details.push(WeightDiff {
                weight: w,
                expected: e,
                got: g,
            });
        }
    }
    let verdict = if pred.n != computed.n {
        Verdict::LengthMismatch
    } else if !details.is_empty() || pred.dim != computed.dim {
        Verdict::DistributionMismatch
    } else {
        Verdict::Match
    };
    VerificationReport {
        source: pred.source,
        params: pred.params.clone(),
        instance: None,
        verdict,
        expected: Some(pred.clone()),
        got: Some(computed.clone()),
        details,
        reason: None,
    }
}

fn unmet(table: TableId, params: Params, instance: Instance, reason: String) -> VerificationReport {
    VerificationReport {
        source: table,
        params,
        instance: Some(instance),
        verdict: Verdict::HypothesisUnmet,
        expected: None,
        got: None,
        details: Vec::new(),
        reason: Some(reason),
    }
}

/// Checks the instance-level hypotheses of `table` and returns the numeric
/// parameters the table needs.
pub fn instance_params(ctx: &FieldCtx, table: TableId, inst: &Instance) -> Result<Params, VerifyError> {
    let fail = |reason: String| VerifyError::HypothesisUnmet { table, reason };
    let base = Params::new(ctx.p(), ctx.m());
    match (table.family(), inst) {
        (Family::Monomial, &Instance::Monomial { lambda, b }) => {
            let spec = check_monomial_admissible(ctx, lambda).map_err(|e| fail(e.to_string()))?;
            if !spec.admissible {
                return Err(fail("Tr_2^m(lambda) is not a square of F_9^*".into()));
            }
            Ok(base.with_b(b))
        }
        (Family::Quad, &Instance::Quad { lambda, u, v }) => {
            let spec = check_quadproduct_case(ctx, lambda, u, v).map_err(|e| fail(e.to_string()))?;
            if spec.case != table.quad_case() {
                return Err(fail(format!("trace conditions give case {:?}", spec.case)));
            }
            Ok(base.with_eta(spec.eta_lambda))
        }
        (Family::Gold, &Instance::Gold { lambda, h }) => {
            let spec = check_gold(ctx, lambda, h).map_err(|e| fail(e.to_string()))?;
            if !spec.admissible {
                return Err(fail(
                    "lambda^((p^m-1)/(p^d+1)) != (-1)^(k/d) or m/d odd".into(),
                ));
            }
            Ok(base.with_h(h))
        }
        _ => Err(fail("instance belongs to a different family".into())),
    }
}

/// Builds the code of `inst` by the fast path of its family.
pub fn build_fast(ctx: &Arc<FieldCtx>, table: TableId, inst: &Instance) -> Result<CodeSummary, VerifyError> {
    let walsh = |spec: FunctionSpec, b: PrimeScalar| -> Result<CodeSummary, VerifyError> {
        let f = tabulate(&spec, ctx.clone()).expect("instance parameters lie in the field");
        Ok(if table.is_half() {
            build_half_code_via_walsh(&f, b)?
        } else {
            build_code_via_walsh(&f, b)?
        })
    };
    match *inst {
        Instance::Monomial { lambda, b } => walsh(FunctionSpec::MonomialQuarter { lambda }, b),
        Instance::Quad { lambda, u, v } => walsh(FunctionSpec::QuadProduct { lambda, u, v }, 0),
        Instance::Gold { lambda, h } => Ok(build_gold_code_via_weil(ctx, lambda, h)?),
    }
}

/// Checks hypotheses, predicts, builds and compares one instance.
pub fn verify_instance(ctx: &Arc<FieldCtx>, table: TableId, inst: &Instance) -> VerificationReport {
    let base = Params::new(ctx.p(), ctx.m());
    let params = match instance_params(ctx, table, inst) {
        Ok(p) => p,
        Err(e) => return unmet(table, base, inst.clone(), e.to_string()),
    };
    let pred = match predict(table, &params) {
        Ok(p) => p,
        Err(e) => return unmet(table, params, inst.clone(), e.to_string()),
    };
    match build_fast(ctx, table, inst) {
        Ok(cs) => VerificationReport {
            instance: Some(inst.clone()),
            ..verify(&pred, &cs)
        },
        Err(e) => VerificationReport {
            instance: Some(inst.clone()),
            verdict: Verdict::DistributionMismatch,
            reason: Some(e.to_string()),
            expected: Some(pred),
            ..unmet(table, params, inst.clone(), String::new())
        },
    }
}

/// How instances are drawn for a sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SamplerConfig {
    /// Every admissible instance, ignoring `samples`.
    pub exhaustive: bool,
    pub samples: usize,
    pub seed: u64,
    /// Gold exponent; `None` tries every `h` in `1..k`.
    pub h: Option<u32>,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            exhaustive: false,
            samples: 100,
            seed: 0x5eed,
            h: None,
        }
    }
}

fn spread<T: Clone>(items: &[T], count: usize) -> Vec<T> {
    if count >= items.len() {
        return items.to_vec();
    }
    (0..count).map(|i| items[i * items.len() / count].clone()).collect()
}

/// The deterministic instance list a sweep of `table` over `ctx` visits.
pub fn sample_instances(ctx: &FieldCtx, table: TableId, cfg: &SamplerConfig) -> Vec<Instance> {
    match table.family() {
        Family::Monomial => {
            let lambdas = match monomial_admissible_lambdas(ctx) {
                Ok(l) => l,
                Err(_) => return Vec::new(),
            };
            let bs: &[PrimeScalar] = if table == TableId::T1 { &[0] } else { &[1, 2] };
            let all: Vec<Instance> = lambdas
                .iter()
                .flat_map(|&lambda| bs.iter().map(move |&b| Instance::Monomial { lambda, b }))
                .collect();
            if cfg.exhaustive {
                all
            } else {
                spread(&all, cfg.samples)
            }
        }
        Family::Quad => {
            if ctx.p() != 3 || ctx.m() < 4 {
                return Vec::new();
            }
            let case = table.quad_case();
            let eta = (case == QuadCase::II && ctx.m() == 4).then_some(-1);
            let specs = if cfg.exhaustive {
                all_quad_triples(ctx, case, eta)
            } else {
                sample_quad_triples(ctx, case, eta, cfg.samples, cfg.seed)
            };
            specs
                .into_iter()
                .map(|s| Instance::Quad {
                    lambda: s.lambda,
                    u: s.u,
                    v: s.v,
                })
                .collect()
        }
        Family::Gold => {
            if ctx.m() % 2 != 0 {
                return Vec::new();
            }
            let k = ctx.m() / 2;
            let hs: Vec<u32> = match cfg.h {
                Some(h) => vec![h],
                None => (1..k).collect(),
            };
            let mut out = Vec::new();
            for h in hs {
                let params = Params::new(ctx.p(), ctx.m()).with_h(h);
                if predict(table, &params).is_err() {
                    continue;
                }
                let lambdas = gold_admissible_lambdas(ctx, h).unwrap_or_default();
                let chosen = if cfg.exhaustive {
                    lambdas
                } else {
                    spread(&lambdas, cfg.samples)
                };
                out.extend(chosen.into_iter().map(|lambda| Instance::Gold { lambda, h }));
            }
            out
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub source: TableId,
    pub p: u32,
    pub m: u32,
    pub total: usize,
    pub matched: usize,
    /// Distinct predictions exercised, keyed by their parameters.
    pub predictions: Vec<Prediction>,
    pub counterexamples: Vec<VerificationReport>,
}

impl SweepReport {
    /// At least one instance ran and every one matched.
    pub fn passed(&self) -> bool {
        self.total > 0 && self.matched == self.total
    }
}

pub fn sweep(table: TableId, ctx: &Arc<FieldCtx>, cfg: &SamplerConfig) -> SweepReport {
    let instances = sample_instances(ctx, table, cfg);
    let reports: Vec<VerificationReport> = instances
        .par_iter()
        .map(|inst| verify_instance(ctx, table, inst))
        .collect();
    let matched = reports.iter().filter(|r| r.verdict == Verdict::Match).count();
    let mut predictions: Vec<Prediction> = Vec::new();
    for r in &reports {
        if let Some(p) = &r.expected {
            if !predictions.iter().any(|q| q.params == p.params) {
                predictions.push(p.clone());
            }
        }
    }
    let counterexamples = reports.into_iter().filter(|r| r.verdict != Verdict::Match).collect();
    SweepReport {
        source: table,
        p: ctx.p(),
        m: ctx.m(),
        total: instances.len(),
        matched,
        predictions,
        counterexamples,
    }
}

/// A half-set table equals its full-set table with weights halved.
pub fn check_halving(table: TableId, params: &Params) -> Result<bool, VerifyError> {
    let Some(full) = table.halves() else {
        return Ok(false);
    };
    let h = predict(table, params)?;
    let f = predict(full, params)?;
    let halved: BTreeMap<u64, u64> = f.dist.iter().map(|(&w, &a)| (w / 2, a)).collect();
    Ok(f.n % 2 == 0 && f.n / 2 == h.n && f.dist.keys().all(|w| w % 2 == 0) && halved == h.dist)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(pairs: &[(u64, u64)]) -> BTreeMap<u64, u64> {
        pairs.iter().copied().collect()
    }

    #[test]
    fn parse_table_ids() {
        assert_eq!("T13".parse::<TableId>().unwrap(), TableId::T13);
        assert_eq!("t4".parse::<TableId>().unwrap(), TableId::T4);
        assert!("T14".parse::<TableId>().is_err());
        assert!("T0".parse::<TableId>().is_err());
        assert_eq!(TableId::T7.to_string(), "T7");
    }

    #[test]
    fn printed_example_values() {
        let t2 = predict(TableId::T2, &Params::new(3, 4)).unwrap();
        assert_eq!((t2.n, t2.dist.clone()), (20, dist(&[(12, 60), (18, 20)])));
        let t13 = predict(TableId::T13, &Params::new(3, 8).with_h(2)).unwrap();
        assert_eq!(t13.n, 1700);
        assert_eq!(t13.dist, dist(&[(972, 60), (1134, 6480), (1458, 20)]));
        let t12 = predict(TableId::T12, &Params::new(5, 6).with_h(1)).unwrap();
        assert_eq!(t12.n, 3624);
        assert_eq!(t12.dist, dist(&[(2500, 144), (2900, 15000), (3000, 480)]));
        let t3 = predict(TableId::T3, &Params::new(3, 10)).unwrap();
        assert_eq!(t3.dist, dist(&[(9720, 14762), (9882, 44286)]));
        let t5 = predict(TableId::T5, &Params::new(3, 5).with_eta(-1)).unwrap();
        assert_eq!((t5.n, t5.dist.clone()), (62, dist(&[(36, 60), (42, 162), (54, 20)])));
        let t10 = predict(TableId::T10, &Params::new(3, 4).with_eta(-1)).unwrap();
        assert_eq!((t10.n, t10.dist.clone()), (22, dist(&[(9, 4), (15, 72), (18, 4)])));
        let t11 = predict(TableId::T11, &Params::new(3, 5).with_eta(1)).unwrap();
        assert_eq!((t11.n, t11.dist.clone()), (40, dist(&[(18, 12), (27, 224), (36, 6)])));
    }

    #[test]
    fn hypotheses_are_named() {
        let e = predict(TableId::T6, &Params::new(3, 4).with_eta(1)).unwrap_err();
        assert!(matches!(e, VerifyError::HypothesisUnmet { table: TableId::T6, .. }));
        assert!(predict(TableId::T2, &Params::new(3, 6)).is_err());
        assert!(predict(TableId::T12, &Params::new(3, 8).with_h(2)).is_err());
        assert!(matches!(
            predict(TableId::T3, &Params::new(3, 2)),
            Err(VerifyError::Degenerate { .. })
        ));
    }

    #[test]
    fn predictions_are_pless_consistent() {
        for m in 4..=9 {
            for eta in [1, -1] {
                for t in &TableId::ALL[..11] {
                    let params = Params::new(3, m).with_eta(eta);
                    if let Ok(pred) = predict(*t, &params) {
                        assert!(pred.pless_consistent(), "{t} m={m} eta={eta}");
                    }
                }
            }
        }
        for (p, m, h) in [(3, 6, 1), (3, 8, 1), (3, 8, 2), (3, 8, 3), (5, 6, 1), (5, 8, 2), (7, 6, 1)] {
            for t in [TableId::T12, TableId::T13] {
                if let Ok(pred) = predict(t, &Params::new(p, m).with_h(h)) {
                    assert!(pred.pless_consistent(), "{t} p={p} m={m} h={h}");
                }
            }
        }
    }

    #[test]
    fn half_set_tables_halve() {
        for m in 4..=9 {
            for eta in [1, -1] {
                for t in [TableId::T8, TableId::T9, TableId::T10, TableId::T11] {
                    let params = Params::new(3, m).with_eta(eta);
                    if predict(t, &params).is_ok() {
                        assert!(check_halving(t, &params).unwrap(), "{t} m={m}");
                    }
                }
            }
        }
    }

    #[test]
    fn mismatch_is_reported() {
        let pred = predict(TableId::T2, &Params::new(3, 4)).unwrap();
        let wrong = CodeSummary {
            n: 20,
            p: 3,
            dim: 4,
            dist: dist(&[(12, 59), (18, 21)]),
            injective: true,
        };
        let r = verify(&pred, &wrong);
        assert_eq!(r.verdict, Verdict::DistributionMismatch);
        assert_eq!(r.details.len(), 2);
    }

    #[test]
    fn small_sweeps_pass() {
        let ctx = Arc::new(FieldCtx::new(3, 4, None).unwrap());
        let cfg = SamplerConfig {
            samples: 10,
            ..Default::default()
        };
        for t in [TableId::T1, TableId::T2, TableId::T4, TableId::T6, TableId::T8, TableId::T10] {
            let r = sweep(t, &ctx, &cfg);
            assert!(r.passed(), "{t}: {:?}", r.counterexamples.first());
        }
    }
}
