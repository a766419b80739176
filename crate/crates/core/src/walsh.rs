//! Walsh transforms `W_f(a) = sum_x w^{f(x) - Tr(ax)}` of tabulated
//! functions `F_{p^m} -> F_p`, computed exactly in `Z[w_p]`.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cyclotomic::CycInt;
use crate::field::{Fe, FieldCtx, PrimeScalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WalshError {
    #[error("parameter {0} is not an element of the field")]
    ParameterOutsideField(String),
    #[error("table has {got} entries, the field has {expected}")]
    TableLength { expected: usize, got: usize },
    #[error("table value {0} is not in [0, p)")]
    TableValue(u32),
    #[error("{0}")]
    BadParameters(String),
}

/// Which formula a tabulated function came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FunctionSpec {
    Zero,
    /// `Tr(c x)`.
    Linear { c: Fe },
    /// `Tr(lambda x^e)` for an arbitrary exponent.
    Monomial { lambda: Fe, exponent: u64 },
    /// `Tr(lambda x^{(p^m - 1)/4})`.
    MonomialQuarter { lambda: Fe },
    /// `Tr(lambda x^2) + Tr(u x) Tr(v x)`.
    QuadProduct { lambda: Fe, u: Fe, v: Fe },
    /// `Tr(lambda x^{p^h + 1})`.
    Gold { lambda: Fe, h: u32 },
    /// Values supplied directly.
    Table,
}

/// A function `F_{p^m} -> F_p` stored as its full value table in canonical
/// element order.
#[derive(Debug, Clone)]
pub struct PFunction {
    ctx: Arc<FieldCtx>,
    table: Vec<PrimeScalar>,
    spec: FunctionSpec,
    even: bool,
}

impl PFunction {
    pub fn from_table(ctx: Arc<FieldCtx>, table: Vec<PrimeScalar>) -> Result<Self, WalshError> {
        if table.len() != ctx.size() {
            return Err(WalshError::TableLength {
                expected: ctx.size(),
                got: table.len(),
            });
        }
        if let Some(&bad) = table.iter().find(|&&v| v >= ctx.p()) {
            return Err(WalshError::TableValue(bad));
        }
        Ok(Self::assemble(ctx, table, FunctionSpec::Table))
    }

    fn assemble(ctx: Arc<FieldCtx>, table: Vec<PrimeScalar>, spec: FunctionSpec) -> Self {
        let even = ctx
            .elements()
            .all(|x| table[x.index()] == table[ctx.neg(x).index()]);
        PFunction {
            ctx,
            table,
            spec,
            even,
        }
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn spec(&self) -> &FunctionSpec {
        &self.spec
    }

    /// `f(-x) = f(x)` for every `x`.
    pub fn is_even(&self) -> bool {
        self.even
    }

    #[inline]
    pub fn eval(&self, x: Fe) -> PrimeScalar {
        self.table[x.index()]
    }

    pub fn table(&self) -> &[PrimeScalar] {
        &self.table
    }
}

/// Evaluates `spec` at every field element.
pub fn tabulate(spec: &FunctionSpec, ctx: Arc<FieldCtx>) -> Result<PFunction, WalshError> {
    let q = ctx.size();
    let check = |e: Fe, name: &str| {
        if e.index() < q {
            Ok(())
        } else {
            Err(WalshError::ParameterOutsideField(format!("{name}={}", e.index())))
        }
    };
    let p = ctx.p();
    let c = &*ctx;
    let table: Vec<PrimeScalar> = match *spec {
        FunctionSpec::Zero => vec![0; q],
        FunctionSpec::Table => {
            return Err(WalshError::BadParameters(
                "table functions are built with PFunction::from_table".into(),
            ))
        }
        FunctionSpec::Linear { c: coef } => {
            check(coef, "c")?;
            c.elements().map(|x| c.trace_mul(coef, x)).collect()
        }
        FunctionSpec::Monomial { lambda, exponent } => {
            check(lambda, "lambda")?;
            c.elements()
                .map(|x| c.trace_mul(lambda, c.pow(x, exponent)))
                .collect()
        }
        FunctionSpec::MonomialQuarter { lambda } => {
            check(lambda, "lambda")?;
            if (q - 1) % 4 != 0 {
                return Err(WalshError::BadParameters(format!(
                    "4 does not divide {}",
                    q - 1
                )));
            }
            let e = (q as u64 - 1) / 4;
            c.elements().map(|x| c.trace_mul(lambda, c.pow(x, e))).collect()
        }
        FunctionSpec::QuadProduct { lambda, u, v } => {
            check(lambda, "lambda")?;
            check(u, "u")?;
            check(v, "v")?;
            c.elements()
                .map(|x| {
                    let sq = c.trace_mul(lambda, c.mul(x, x));
                    let prod = c.trace_mul(u, x) * c.trace_mul(v, x);
                    (sq + prod) % p
                })
                .collect()
        }
        FunctionSpec::Gold { lambda, h } => {
            check(lambda, "lambda")?;
            let e = (p as u64).pow(h) + 1;
            c.elements()
                .map(|x| c.trace_mul(lambda, c.pow(x, e)))
                .collect()
        }
    };
    Ok(PFunction::assemble(ctx, table, spec.clone()))
}

/// All Walsh coefficients, indexed by `a` in canonical element order.
#[derive(Debug, Clone)]
pub struct WalshSpectrum {
    ctx: Arc<FieldCtx>,
    values: Vec<CycInt>,
}

impl WalshSpectrum {
    pub fn new(ctx: Arc<FieldCtx>, values: Vec<CycInt>) -> Self {
        assert_eq!(values.len(), ctx.size());
        WalshSpectrum { ctx, values }
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn at(&self, a: Fe) -> &CycInt {
        &self.values[a.index()]
    }

    pub fn values(&self) -> &[CycInt] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [CycInt] {
        &mut self.values
    }
}

/// One coefficient straight from the definition, `O(p^m)`.
pub fn walsh_naive(f: &PFunction, a: Fe) -> CycInt {
    let ctx = &f.ctx;
    let p = ctx.p();
    let mut counts = vec![0i64; p as usize];
    for x in ctx.elements() {
        let e = (f.eval(x) + p - ctx.trace_mul(a, x)) % p;
        counts[e as usize] += 1;
    }
    CycInt::from_full(p, &counts).expect("counts are bounded by the field size")
}

/// Element whose coordinates in the trace-dual basis are the base-`p` digits
/// of `i`, for every `i < p^m`.
fn dual_coordinate_elements(ctx: &FieldCtx) -> Vec<Fe> {
    let p = ctx.p() as usize;
    let dual = ctx.dual_basis();
    let mut out = vec![Fe::ZERO; ctx.size()];
    // out[i] = out[i - p^j] + dual[j] where j is the lowest nonzero digit
    let mut place = 1usize;
    for &g in dual {
        for i in place..place * p {
            out[i] = ctx.add(out[i - place], g);
        }
        place *= p;
    }
    out
}

/// Full spectrum with the `m`-dimensional length-`p` DFT, `O(m p^{m+2})`
/// integer operations. Writing `x` in the trace-dual basis of the power basis
/// turns `Tr(ax)` into the dot product of `a`'s power-basis digits with `x`'s
/// dual digits, so the transform factors axis by axis.
pub fn walsh_full(f: &PFunction) -> WalshSpectrum {
    let ctx = f.ctx.clone();
    let p = ctx.p() as usize;
    let q = ctx.size();
    let coords = dual_coordinate_elements(&ctx);

    // buf[c * p + j] is the coefficient of w^j at grid point c
    let mut buf = vec![0i64; q * p];
    for (c, &x) in coords.iter().enumerate() {
        buf[c * p + f.eval(x) as usize] += 1;
    }

    let mut stride = 1usize;
    for _axis in 0..ctx.m() {
        let block = stride * p;
        buf.par_chunks_mut(block * p).for_each(|chunk| {
            let mut line = vec![0i64; p * p];
            let mut out = vec![0i64; p * p];
            for off in 0..stride {
                for s in 0..p {
                    let at = (off + s * stride) * p;
                    line[s * p..(s + 1) * p].copy_from_slice(&chunk[at..at + p]);
                }
                out.iter_mut().for_each(|v| *v = 0);
                // y_r = sum_s w^{-rs} z_s, so y_r[k] = sum_s z_s[k + rs]
                for r in 0..p {
                    let y = &mut out[r * p..(r + 1) * p];
                    for s in 0..p {
                        let z = &line[s * p..(s + 1) * p];
                        let shift = (r * s) % p;
                        for (k, yk) in y.iter_mut().enumerate() {
                            let mut idx = k + shift;
                            if idx >= p {
                                idx -= p;
                            }
                            *yk += z[idx];
                        }
                    }
                }
                for r in 0..p {
                    let at = (off + r * stride) * p;
                    chunk[at..at + p].copy_from_slice(&out[r * p..(r + 1) * p]);
                }
            }
        });
        stride = block;
    }

    let values = buf
        .par_chunks(p)
        .map(|full| CycInt::from_full(p as u32, full).expect("bounded by p^m"))
        .collect();
    WalshSpectrum { ctx, values }
}

/// Multiset of coefficient values with their counts.
pub fn spectrum_distribution(s: &WalshSpectrum) -> BTreeMap<CycInt, u64> {
    let mut dist = BTreeMap::new();
    for v in &s.values {
        *dist.entry(v.clone()).or_insert(0) += 1;
    }
    dist
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Classification {
    /// Every `|W_f(a)|^2 = p^m`.
    Bent,
    /// Every `|W_f(a)|^2` is `0` or `p^{m+l}`, `1 <= l <= m`. `l = m` only
    /// occurs for affine functions and is flagged as degenerate.
    Plateaued { l: u32, degenerate: bool },
    Neither,
}

impl Classification {
    /// Plateau order with bent as order 0.
    pub fn order(&self) -> Option<u32> {
        match *self {
            Classification::Bent => Some(0),
            Classification::Plateaued { l, .. } => Some(l),
            Classification::Neither => None,
        }
    }
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            Classification::Bent => write!(f, "bent"),
            Classification::Plateaued { l: 1, .. } => write!(f, "1-plateaued (near-bent)"),
            Classification::Plateaued { l, degenerate: true } => {
                write!(f, "{l}-plateaued (degenerate: affine)")
            }
            Classification::Plateaued { l, .. } => write!(f, "{l}-plateaued"),
            Classification::Neither => write!(f, "not plateaued"),
        }
    }
}

pub fn classify(s: &WalshSpectrum) -> Classification {
    let p = s.ctx.p() as i64;
    let m = s.ctx.m();
    let mut level: Option<i64> = None;
    for v in &s.values {
        let Some(n) = v.norm_squared() else {
            return Classification::Neither;
        };
        if n == 0 {
            continue;
        }
        match level {
            None => level = Some(n),
            Some(l) if l != n => return Classification::Neither,
            _ => {}
        }
    }
    let Some(level) = level else {
        return Classification::Neither;
    };
    let mut l = None;
    for cand in 0..=m {
        if p.checked_pow(m + cand) == Some(level) {
            l = Some(cand);
        }
    }
    match l {
        Some(0) if s.values.iter().all(|v| !v.is_zero()) => Classification::Bent,
        Some(l) if l > 0 => Classification::Plateaued {
            l,
            degenerate: l == m,
        },
        _ => Classification::Neither,
    }
}

/// `sum_a W(a) conj(W(a)) = p^{2m}`, checked exactly.
pub fn parseval_check(s: &WalshSpectrum) -> bool {
    let p = s.ctx.p() as usize;
    let mut acc = vec![0i128; p];
    for v in &s.values {
        let c = v.coeffs();
        let cc = v.conj();
        let d = cc.coeffs();
        for (i, &x) in c.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in d.iter().enumerate() {
                acc[(i + j) % p] += x as i128 * y as i128;
            }
        }
    }
    let top = acc[p - 1];
    let target = (p as i128).pow(2 * s.ctx.m());
    acc[0] - top == target && acc[1..p - 1].iter().all(|&c| c == top)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ctx(p: u32, m: u32) -> Arc<FieldCtx> {
        Arc::new(FieldCtx::new(p, m, None).unwrap())
    }

    fn random_fn(ctx: &Arc<FieldCtx>, seed: u64) -> PFunction {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let table = (0..ctx.size()).map(|_| rng.gen_range(0..ctx.p())).collect();
        PFunction::from_table(ctx.clone(), table).unwrap()
    }

    #[test]
    fn zero_function() {
        let c = ctx(3, 4);
        let f = tabulate(&FunctionSpec::Zero, c.clone()).unwrap();
        assert!(f.is_even());
        assert_eq!(walsh_naive(&f, Fe::ZERO), CycInt::from_int(3, 81));
        assert!(walsh_naive(&f, c.generator()).is_zero());
        let s = walsh_full(&f);
        let dist = spectrum_distribution(&s);
        assert_eq!(dist.len(), 2);
        assert_eq!(dist[&CycInt::from_int(3, 81)], 1);
        assert_eq!(dist[&CycInt::zero(3)], 80);
        assert_eq!(
            classify(&s),
            Classification::Plateaued { l: 4, degenerate: true }
        );
        assert!(parseval_check(&s));
    }

    #[test]
    fn trace_function_hits_at_one() {
        let c = ctx(3, 3);
        let f = tabulate(&FunctionSpec::Linear { c: Fe::ONE }, c.clone()).unwrap();
        assert_eq!(walsh_naive(&f, Fe::ONE), CycInt::from_int(3, 27));
    }

    #[test]
    fn fast_matches_naive_exhaustively() {
        for (p, m) in [(3, 2), (3, 3), (3, 4), (5, 2), (7, 2), (5, 3)] {
            let c = ctx(p, m);
            for seed in 0..3 {
                let f = random_fn(&c, seed);
                let s = walsh_full(&f);
                for a in c.elements() {
                    assert_eq!(s.at(a), &walsh_naive(&f, a), "p={p} m={m} a={a:?}");
                }
                assert!(parseval_check(&s));
            }
        }
    }

    #[test]
    fn parseval_detects_corruption() {
        let c = ctx(3, 3);
        let mut s = walsh_full(&random_fn(&c, 9));
        assert!(parseval_check(&s));
        s.values_mut()[4] = &s.values()[4] + &CycInt::from_int(3, 1);
        assert!(!parseval_check(&s));
    }

    #[test]
    fn even_functions_have_symmetric_spectra() {
        let c = ctx(3, 4);
        let f = tabulate(&FunctionSpec::Monomial { lambda: c.gen_pow(3), exponent: 2 }, c.clone())
            .unwrap();
        assert!(f.is_even());
        let s = walsh_full(&f);
        for a in c.elements() {
            assert_eq!(s.at(a), s.at(c.neg(a)));
        }
    }

    #[test]
    fn shift_property() {
        let c = ctx(5, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for seed in 0..5 {
            let f = random_fn(&c, seed);
            let shift = c.from_index(rng.gen_range(0..c.size())).unwrap();
            let g_table = c
                .elements()
                .map(|x| (f.eval(x) + c.trace_mul(shift, x)) % c.p())
                .collect();
            let g = PFunction::from_table(c.clone(), g_table).unwrap();
            let sf = walsh_full(&f);
            let sg = walsh_full(&g);
            for a in c.elements() {
                assert_eq!(sg.at(a), sf.at(c.sub(a, shift)));
            }
        }
    }

    #[test]
    fn quadratic_form_is_bent() {
        // Tr(x^2) is a nondegenerate quadratic form, hence bent
        let c = ctx(3, 3);
        let f = tabulate(&FunctionSpec::Monomial { lambda: Fe::ONE, exponent: 2 }, c).unwrap();
        let s = walsh_full(&f);
        assert_eq!(classify(&s), Classification::Bent);
        assert_eq!(s.values()[0].norm_squared(), Some(27));
    }

    #[test]
    fn table_validation() {
        let c = ctx(3, 2);
        assert_eq!(
            PFunction::from_table(c.clone(), vec![0; 8]).unwrap_err(),
            WalshError::TableLength { expected: 9, got: 8 }
        );
        assert_eq!(
            PFunction::from_table(c, vec![3; 9]).unwrap_err(),
            WalshError::TableValue(3)
        );
    }
}
