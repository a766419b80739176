//! Trace codes `C_D = {(Tr(a d_1), ..., Tr(a d_n)) : a in F_{p^m}}` and their
//! weight distributions.
//!
//! Codes are never materialized: a code is summarized by its length,
//! dimension and weight distribution. Three independent ways of computing
//! the distribution are provided: direct enumeration, counting through one
//! Walsh spectrum, and counting through closed-form Weil sums.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::cyclotomic::CycInt;
use crate::families::{FamilyError, WeilClosedForm};
use crate::field::{Fe, FieldCtx, PrimeScalar};
use crate::walsh::{walsh_full, PFunction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("the defining set is empty")]
    EmptyDefiningSet,
    #[error("the defining set contains zero")]
    ZeroInDefiningSet,
    #[error("the defining set is not closed under negation (missing -{0:?})")]
    NotNegationClosed(Fe),
    #[error("the function is not even")]
    NotEven,
    #[error("the function is nonzero at the origin")]
    NonzeroAtOrigin,
    #[error("this construction needs characteristic {expected}, got {got}")]
    WrongCharacteristic { expected: u32, got: u32 },
    #[error("Pless moment {moment} fails: expected {expected}, got {got}")]
    MomentViolation { moment: u8, expected: String, got: i128 },
    #[error("the gold defining set needs a gold function")]
    NotGold,
    #[error("counting formula produced a non-integer ({0})")]
    NonIntegral(String),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Provenance {
    /// `{x != 0 : f(x) = b}`.
    Db { b: PrimeScalar },
    /// `{x != 0 : Tr(lambda x^{p^h+1}) = 0}`.
    Gold { lambda: Fe, h: u32 },
    HalfSet(Box<Provenance>),
    Explicit,
}

/// Distinct nonzero elements in canonical order.
#[derive(Debug, Clone)]
pub struct DefiningSet {
    ctx: Arc<FieldCtx>,
    elements: Vec<Fe>,
    provenance: Provenance,
}

impl DefiningSet {
    /// Sorts and deduplicates; rejects zero.
    pub fn explicit(ctx: Arc<FieldCtx>, mut elements: Vec<Fe>) -> Result<Self, CodeError> {
        elements.sort();
        elements.dedup();
        if elements.first() == Some(&Fe::ZERO) {
            return Err(CodeError::ZeroInDefiningSet);
        }
        Ok(DefiningSet {
            ctx,
            elements,
            provenance: Provenance::Explicit,
        })
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn elements(&self) -> &[Fe] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn contains(&self, x: Fe) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_negation_closed(&self) -> bool {
        self.elements.iter().all(|&x| self.contains(self.ctx.neg(x)))
    }
}

pub fn defining_set_db(f: &PFunction, b: PrimeScalar) -> DefiningSet {
    let ctx = f.ctx().clone();
    let elements = ctx.nonzero_elements().filter(|&x| f.eval(x) == b).collect();
    DefiningSet {
        ctx,
        elements,
        provenance: Provenance::Db { b },
    }
}

pub fn defining_set_gold(ctx: Arc<FieldCtx>, lambda: Fe, h: u32) -> DefiningSet {
    let e = (ctx.p() as u64).pow(h) + 1;
    let elements = ctx
        .nonzero_elements()
        .filter(|&x| ctx.trace_mul(lambda, ctx.pow(x, e)) == 0)
        .collect();
    DefiningSet {
        ctx,
        elements,
        provenance: Provenance::Gold { lambda, h },
    }
}

/// Keeps the smaller of each `{x, -x}` pair.
pub fn half_set(d: &DefiningSet) -> Result<DefiningSet, CodeError> {
    let ctx = &d.ctx;
    let mut elements = Vec::with_capacity(d.len() / 2);
    for &x in &d.elements {
        let nx = ctx.neg(x);
        if !d.contains(nx) {
            return Err(CodeError::NotNegationClosed(x));
        }
        if x < nx {
            elements.push(x);
        }
    }
    Ok(DefiningSet {
        ctx: ctx.clone(),
        elements,
        provenance: Provenance::HalfSet(Box::new(d.provenance.clone())),
    })
}

/// Length, dimension and weight distribution of a trace code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeSummary {
    pub n: u64,
    pub p: u32,
    pub dim: u32,
    /// Weight -> number of nonzero codewords of that weight.
    pub dist: BTreeMap<u64, u64>,
    /// `a -> c_a` is injective.
    pub injective: bool,
}

impl CodeSummary {
    /// Builds a summary from `wt(c_a)` for every nonzero `a` (any order).
    /// Codewords reached from several `a` are counted once.
    pub fn from_weights(n: u64, p: u32, m: u32, weights: impl IntoIterator<Item = u64>) -> Self {
        let mut raw: BTreeMap<u64, u64> = BTreeMap::new();
        for w in weights {
            *raw.entry(w).or_default() += 1;
        }
        // a with wt(c_a) = 0 form the kernel of a -> c_a, zero included
        let kernel = raw.remove(&0).unwrap_or(0) + 1;
        let mut kdim = 0;
        let mut t = kernel;
        while t > 1 {
            debug_assert_eq!(t % p as u64, 0, "kernel size is a power of p");
            t /= p as u64;
            kdim += 1;
        }
        let dist = raw.into_iter().map(|(w, a)| (w, a / kernel)).collect();
        CodeSummary {
            n,
            p,
            dim: m - kdim,
            dist,
            injective: kernel == 1,
        }
    }

    pub fn min_distance(&self) -> Option<u64> {
        self.dist.keys().next().copied()
    }

    pub fn total(&self) -> u64 {
        self.dist.values().sum()
    }

    pub fn enumerator(&self) -> WeightEnumerator {
        WeightEnumerator(self.dist.iter().map(|(&w, &a)| (w, a)).collect())
    }

    /// `[n, k, d]` or `[n, k]` for the zero code.
    pub fn params(&self) -> String {
        match self.min_distance() {
            Some(d) => format!("[{}, {}, {}]", self.n, self.dim, d),
            None => format!("[{}, {}]", self.n, self.dim),
        }
    }

    /// Same code with every weight halved; panics on an odd weight.
    pub fn halved(&self) -> CodeSummary {
        assert!(self.n % 2 == 0 && self.dist.keys().all(|w| w % 2 == 0));
        CodeSummary {
            n: self.n / 2,
            dist: self.dist.iter().map(|(&w, &a)| (w / 2, a)).collect(),
            ..self.clone()
        }
    }
}

impl Serialize for CodeSummary {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let dist: Vec<[u64; 2]> = self.dist.iter().map(|(&w, &a)| [w, a]).collect();
        let mut st = s.serialize_struct("CodeSummary", 5)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("dim", &self.dim)?;
        st.serialize_field("dist", &dist)?;
        st.serialize_field("injective", &self.injective)?;
        st.end()
    }
}

/// `(weight, multiplicity)` pairs of nonzero weights in increasing order;
/// the constant term 1 is implicit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightEnumerator(pub Vec<(u64, u64)>);

impl fmt::Display for WeightEnumerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1")?;
        for &(w, a) in &self.0 {
            write!(f, " + {a}z^{w}")?;
        }
        Ok(())
    }
}

/// Enumerates every codeword. With log tables the inner loop is a lookup of
/// `Tr(g^e)` at shifted exponents.
pub fn build_code_direct(d: &DefiningSet) -> Result<CodeSummary, CodeError> {
    if d.is_empty() {
        return Err(CodeError::EmptyDefiningSet);
    }
    let ctx = &d.ctx;
    let order = ctx.size() - 1;
    let weights: Vec<u64> = if ctx.has_tables() {
        let logs: Vec<usize> = d
            .elements
            .iter()
            .map(|&x| ctx.log(x).expect("defining set has no zero") as usize)
            .collect();
        // doubled so that (i + l) never needs a modulo
        let tr_pow: Vec<u8> = (0..2 * order)
            .map(|e| (ctx.trace(ctx.gen_pow(e as i64)) != 0) as u8)
            .collect();
        (0..order)
            .into_par_iter()
            .map(|i| {
                let row = &tr_pow[i..i + order];
                logs.iter().map(|&l| row[l] as u64).sum()
            })
            .collect()
    } else {
        ctx.nonzero_elements()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|a| d.elements.iter().filter(|&&x| ctx.trace_mul(a, x) != 0).count() as u64)
            .collect()
    };
    Ok(CodeSummary::from_weights(d.len() as u64, ctx.p(), ctx.m(), weights))
}

fn exact_div(v: &CycInt, den: i64, what: &str) -> Result<i64, CodeError> {
    v.is_rational()
        .filter(|r| r % den == 0)
        .map(|r| r / den)
        .ok_or_else(|| CodeError::NonIntegral(format!("{what} = ({v})/{den}")))
}

/// Ternary code on `D_b` from the Walsh spectrum of an even `f` with
/// `f(0) = 0`:
/// `3 n_b = 3^m - 3[b=0] + w^{-b} W(0) + w^b conj W(0)` and
/// `9 N_a = 3^m - 9[b=0] + w^{-b} W(0) + w^b conj W(0) + 2(w^{-b} W(a) + w^b conj W(a))`,
/// with `wt(c_a) = n_b - N_a`.
pub fn build_code_via_walsh(f: &PFunction, b: PrimeScalar) -> Result<CodeSummary, CodeError> {
    let ctx = f.ctx();
    if ctx.p() != 3 {
        return Err(CodeError::WrongCharacteristic {
            expected: 3,
            got: ctx.p(),
        });
    }
    if !f.is_even() {
        return Err(CodeError::NotEven);
    }
    if f.eval(Fe::ZERO) != 0 {
        return Err(CodeError::NonzeroAtOrigin);
    }
    let b = b % 3;
    let q = ctx.size() as i64;
    let spectrum = walsh_full(f);
    let twist = |w: &CycInt| &w.mul_root(-(b as i64)) + &w.conj().mul_root(b as i64);
    let origin = twist(spectrum.at(Fe::ZERO));
    let at_zero = if b == 0 { 1 } else { 0 };
    let n3 = &origin + &CycInt::from_int(3, q - 3 * at_zero);
    let n = exact_div(&n3, 3, "3 n_b")?;
    if n == 0 {
        return Err(CodeError::EmptyDefiningSet);
    }
    let base = &origin + &CycInt::from_int(3, q - 9 * at_zero);
    let weights: Result<Vec<u64>, CodeError> = ctx
        .nonzero_elements()
        .map(|a| {
            let t = twist(spectrum.at(a));
            let big_n = exact_div(&(&base + &(&t + &t)), 9, "9 N_a")?;
            Ok((n - big_n) as u64)
        })
        .collect();
    Ok(CodeSummary::from_weights(n as u64, 3, ctx.m(), weights?))
}

/// The code on `half_set(D_b)`: every weight of the `D_b` code halves since
/// `Tr(-ax) = 0` exactly when `Tr(ax) = 0`.
pub fn build_half_code_via_walsh(f: &PFunction, b: PrimeScalar) -> Result<CodeSummary, CodeError> {
    Ok(build_code_via_walsh(f, b)?.halved())
}

/// Gold code from closed-form Weil sums:
/// `n_D = p^{m-1} + (1/p) sum_y S(y lambda, 0)` (zero included),
/// `N_a = p^{m-2} + (1/p^2) sum_y S(y lambda, 0) + (1/p^2) sum_{y,z} S(y lambda, z a)`.
pub fn build_gold_code_via_weil(ctx: &FieldCtx, lambda: Fe, h: u32) -> Result<CodeSummary, CodeError> {
    let w = WeilClosedForm::new(ctx, lambda, h)?;
    let p = ctx.p();
    let pi = p as i64;
    let q = ctx.size() as i64;
    let mut origin = CycInt::zero(p);
    for y in 1..p {
        origin = &origin + &w.sum_scaled(y, Fe::ZERO)?;
    }
    let n_d = exact_div(&(&origin + &CycInt::from_int(p, q)), pi, "p n_D")?;
    let base = &origin + &CycInt::from_int(p, q);
    let allowed = w.triple_sum_values();
    let nonzero: Vec<Fe> = ctx.nonzero_elements().collect();
    let weights: Result<Vec<u64>, CodeError> = nonzero
        .into_par_iter()
        .map(|a| {
            let t = w.triple_sum(a)?;
            match t.is_rational() {
                Some(v) if allowed.contains(&v) => {}
                _ => return Err(CodeError::NonIntegral(format!("triple sum {t} at {a:?}"))),
            }
            let big_n = exact_div(&(&base + &t), pi * pi, "p^2 N_a")?;
            Ok((n_d - big_n) as u64)
        })
        .collect();
    Ok(CodeSummary::from_weights(n_d as u64 - 1, p, ctx.m(), weights?))
}

/// Weight-2 codewords of the dual: each unordered pair of positions with
/// `d_j in F_p^* d_i` contributes `p - 1`.
pub fn dual_a2(d: &DefiningSet) -> u64 {
    let ctx = &d.ctx;
    let p = ctx.p();
    let mut classes: BTreeMap<Fe, u64> = BTreeMap::new();
    for &x in &d.elements {
        let rep = (1..p).map(|c| ctx.scale(c, x)).min().expect("p >= 3");
        *classes.entry(rep).or_default() += 1;
    }
    classes.values().map(|&c| c * c.saturating_sub(1) / 2).sum::<u64>() * (p as u64 - 1)
}

/// Checks the first three Pless power moments exactly, with `k = dim`.
/// Both sides are scaled by `p^2` so small `k` stays integral.
pub fn pless_check(cs: &CodeSummary, a2_dual: u64) -> Result<(), CodeError> {
    let p = cs.p as i128;
    let n = cs.n as i128;
    let pk = p.pow(cs.dim);
    let s0: i128 = cs.dist.values().map(|&a| a as i128).sum();
    let s1: i128 = cs.dist.iter().map(|(&w, &a)| w as i128 * a as i128).sum();
    let s2: i128 = cs.dist.iter().map(|(&w, &a)| (w as i128).pow(2) * a as i128).sum();
    let moments = [
        (0, (pk - 1) * p * p, s0),
        (1, (p - 1) * n * pk * p, s1),
        (2, ((p - 1) * n * ((p - 1) * n + 1) + 2 * a2_dual as i128) * pk, s2),
    ];
    for (moment, expected, got) in moments {
        if expected != got * p * p {
            let expected = if expected % (p * p) == 0 {
                (expected / (p * p)).to_string()
            } else {
                format!("{expected}/{}", p * p)
            };
            return Err(CodeError::MomentViolation { moment, expected, got });
        }
    }
    Ok(())
}

/// `sum_{i<k} ceil(d / p^i)`.
pub fn griesmer_sum(d: u64, k: u32, p: u32) -> u64 {
    (0..k).map(|i| d.div_ceil((p as u64).pow(i))).sum()
}

/// Largest `d` allowed by the Griesmer bound for an `[n, k]` code over F_p.
pub fn griesmer_max_d(n: u64, k: u32, p: u32) -> u64 {
    // the sum is increasing in d and at least d
    (0..=n).rev().find(|&d| griesmer_sum(d, k, p) <= n).unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walsh::{tabulate, FunctionSpec};

    fn field(p: u32, m: u32) -> Arc<FieldCtx> {
        Arc::new(FieldCtx::new(p, m, None).unwrap())
    }

    fn dual_a2_brute(d: &DefiningSet) -> u64 {
        let ctx = d.ctx();
        let xs = d.elements();
        let p = ctx.p();
        let mut count = 0;
        for i in 0..xs.len() {
            for j in i + 1..xs.len() {
                for ci in 1..p {
                    for cj in 1..p {
                        if ctx.add(ctx.scale(ci, xs[i]), ctx.scale(cj, xs[j])).is_zero() {
                            count += 1;
                        }
                    }
                }
            }
        }
        count
    }

    #[test]
    fn griesmer_values() {
        assert_eq!(griesmer_max_d(20, 4, 3), 12);
        assert_eq!(griesmer_max_d(13, 4, 3), 8);
        assert_eq!(griesmer_max_d(31, 5, 3), 19);
        assert_eq!(griesmer_max_d(7, 1, 5), 7);
    }

    #[test]
    fn enumerator_text() {
        let e = WeightEnumerator(vec![(12, 12), (18, 62), (24, 6)]);
        assert_eq!(e.to_string(), "1 + 12z^12 + 62z^18 + 6z^24");
    }

    #[test]
    fn summary_json() {
        let cs = CodeSummary::from_weights(4, 3, 2, [2, 2, 4, 4, 4, 4, 2, 2]);
        assert_eq!(
            serde_json::to_string(&cs).unwrap(),
            r#"{"n":4,"p":3,"dim":2,"dist":[[2,4],[4,4]],"injective":true}"#
        );
    }

    #[test]
    fn non_injective_dimension() {
        // D inside F_3 gives a one-dimensional image at m = 2
        let c = field(3, 2);
        let d = DefiningSet::explicit(c.clone(), vec![c.one(), c.from_int(2)]).unwrap();
        let cs = build_code_direct(&d).unwrap();
        assert!(!cs.injective);
        assert_eq!(cs.dim, 1);
        assert_eq!(cs.total(), 2);
    }

    #[test]
    fn half_set_basics() {
        let c = field(3, 3);
        let x = c.x();
        let d = DefiningSet::explicit(c.clone(), vec![x, c.neg(x)]).unwrap();
        assert_eq!(half_set(&d).unwrap().elements(), &[x]);
        let odd = DefiningSet::explicit(c.clone(), vec![x, c.neg(x), c.one()]).unwrap();
        assert!(matches!(half_set(&odd), Err(CodeError::NotNegationClosed(_))));
    }

    #[test]
    fn example_2_4_both_paths() {
        let c = field(3, 4);
        let f = tabulate(&FunctionSpec::MonomialQuarter { lambda: Fe::ONE }, c).unwrap();
        let d1 = defining_set_db(&f, 1);
        assert_eq!(d1.len(), 20);
        let direct = build_code_direct(&d1).unwrap();
        assert_eq!(direct.enumerator().to_string(), "1 + 60z^12 + 20z^18");
        assert_eq!(build_code_via_walsh(&f, 1).unwrap(), direct);
        let d0 = defining_set_db(&f, 0);
        let c0 = build_code_direct(&d0).unwrap();
        assert_eq!(c0.enumerator().to_string(), "1 + 40z^24 + 40z^30");
        assert_eq!(build_code_via_walsh(&f, 0).unwrap(), c0);
        pless_check(&c0, dual_a2(&d0)).unwrap();
        pless_check(&direct, dual_a2(&d1)).unwrap();
    }

    #[test]
    fn zero_function_sets() {
        let c = field(3, 3);
        let f = tabulate(&FunctionSpec::Zero, c).unwrap();
        assert!(defining_set_db(&f, 1).is_empty());
        assert_eq!(build_code_direct(&defining_set_db(&f, 1)), Err(CodeError::EmptyDefiningSet));
        assert_eq!(build_code_via_walsh(&f, 1), Err(CodeError::EmptyDefiningSet));
    }

    #[test]
    fn walsh_path_guards() {
        let c = field(3, 3);
        let f = tabulate(&FunctionSpec::Linear { c: Fe::ONE }, c.clone()).unwrap();
        assert_eq!(build_code_via_walsh(&f, 0), Err(CodeError::NotEven));
        let mut t = vec![0u32; 27];
        t[0] = 1;
        let g = PFunction::from_table(c, t).unwrap();
        assert_eq!(build_code_via_walsh(&g, 0), Err(CodeError::NonzeroAtOrigin));
        let f5 = tabulate(&FunctionSpec::Zero, field(5, 2)).unwrap();
        assert!(matches!(
            build_code_via_walsh(&f5, 0),
            Err(CodeError::WrongCharacteristic { .. })
        ));
    }

    #[test]
    fn dual_a2_matches_brute_force() {
        for (p, m) in [(3, 2), (3, 3), (5, 2)] {
            let c = field(p, m);
            for lam in c.nonzero_elements().take(4) {
                let d = defining_set_gold(c.clone(), lam, 1);
                if d.is_empty() {
                    continue;
                }
                assert_eq!(dual_a2(&d), dual_a2_brute(&d));
                let h = DefiningSet::explicit(c.clone(), d.elements().iter().step_by(2).copied().collect())
                    .unwrap();
                assert_eq!(dual_a2(&h), dual_a2_brute(&h));
            }
        }
    }

    #[test]
    fn pless_detects_perturbation() {
        let c = field(3, 4);
        let f = tabulate(&FunctionSpec::MonomialQuarter { lambda: Fe::ONE }, c).unwrap();
        let d = defining_set_db(&f, 1);
        let mut cs = build_code_direct(&d).unwrap();
        *cs.dist.get_mut(&12).unwrap() += 1;
        assert!(matches!(
            pless_check(&cs, dual_a2(&d)),
            Err(CodeError::MomentViolation { moment: 0, .. })
        ));
    }

    #[test]
    fn gold_weil_matches_direct_small() {
        for (p, m) in [(3u32, 4u32), (5, 4)] {
            let c = field(p, m);
            let lams = crate::families::gold_admissible_lambdas(&c, 1).unwrap();
            for &lam in lams.iter().take(3) {
                let d = defining_set_gold(c.clone(), lam, 1);
                let direct = build_code_direct(&d).unwrap();
                assert_eq!(build_gold_code_via_weil(&c, lam, 1).unwrap(), direct);
                pless_check(&direct, dual_a2(&d)).unwrap();
            }
        }
    }
}
