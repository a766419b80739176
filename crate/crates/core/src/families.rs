//! The three function families and their closed-form spectra:
//!
//! * `Tr(lambda x^{(3^m-1)/4})` over `F_{3^m}`, `m = 2k`, with its four-valued
//!   Walsh distribution;
//! * `Tr(lambda x^2) + Tr(ux) Tr(vx)` over `F_{3^m}`, near-bent or
//!   2-plateaued depending on three trace conditions;
//! * the Gold functions `Tr(lambda x^{p^h+1})` and their Weil sums
//!   `S_h(lambda, a) = sum_x w^{Tr(lambda x^{p^h+1} + a x)}`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::cyclotomic::{sqrt_minus_three, CycInt};
use crate::field::linalg::AffineSolver;
use crate::field::{Fe, FieldCtx, FieldError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("this family needs characteristic {expected}, got {got}")]
    WrongCharacteristic { expected: u32, got: u32 },
    #[error("extension degree {0} must be even")]
    OddDegree(u32),
    #[error("k = {0} is divisible by 3")]
    KDivisibleBy3(u32),
    #[error("extension degree {got} is too small (need at least {min})")]
    DegreeTooSmall { got: u32, min: u32 },
    #[error("parameter {0} must be nonzero")]
    ZeroParameter(&'static str),
    #[error("parameters are not admissible: {0}")]
    NotAdmissible(String),
    #[error("trace conditions match neither near-bent nor 2-plateaued case")]
    CaseOther,
    #[error("solutions of the linearized equation disagree on Tr(lambda x^(p^h+1))")]
    InconsistentSolutions,
    #[error(transparent)]
    Field(#[from] FieldError),
}

fn pow_i64(b: i64, e: u32) -> i64 {
    b.checked_pow(e).expect("power fits in i64")
}

// ---------------------------------------------------------------------------
// Tr(lambda x^{(3^m - 1)/4})

#[derive(Debug, Clone, Serialize)]
pub struct MonomialQuarterSpec {
    pub lambda: Fe,
    pub m: u32,
    pub k: u32,
    pub exponent: u64,
    pub k_even: bool,
    /// `Tr_2^m(lambda)` is a nonzero square of `F_9`.
    pub admissible: bool,
    /// `Tr_2^m(lambda)` lies in `F_3^*` and is a square there; recorded only
    /// to compare with the stricter reading of the hypothesis.
    pub square_in_f3: bool,
}

pub fn check_monomial_admissible(
    ctx: &FieldCtx,
    lambda: Fe,
) -> Result<MonomialQuarterSpec, FamilyError> {
    if ctx.p() != 3 {
        return Err(FamilyError::WrongCharacteristic {
            expected: 3,
            got: ctx.p(),
        });
    }
    let m = ctx.m();
    if m % 2 != 0 {
        return Err(FamilyError::OddDegree(m));
    }
    let k = m / 2;
    if k % 3 == 0 {
        return Err(FamilyError::KDivisibleBy3(k));
    }
    if lambda.is_zero() {
        return Err(FamilyError::ZeroParameter("lambda"));
    }
    let t = ctx.rel_trace(lambda, 2)?;
    let admissible = !t.is_zero() && ctx.is_square_in_subfield(t, 2)?;
    let square_in_f3 = t == ctx.one();
    Ok(MonomialQuarterSpec {
        lambda,
        m,
        k,
        exponent: (ctx.size() as u64 - 1) / 4,
        k_even: k % 2 == 0,
        admissible,
        square_in_f3,
    })
}

/// The four-valued Walsh distribution of an admissible monomial.
pub fn predicted_quarter_distribution(
    spec: &MonomialQuarterSpec,
) -> Result<BTreeMap<CycInt, u64>, FamilyError> {
    if !spec.admissible {
        return Err(FamilyError::NotAdmissible(
            "Tr_2^m(lambda) is not a square in F_9^*".into(),
        ));
    }
    let q = pow_i64(3, spec.m);
    let tk = pow_i64(3, spec.k);
    let w = |j: i64| CycInt::root_power(3, j);
    let int = |c: i64| CycInt::from_int(3, c);
    let (sign, shift) = if spec.k_even {
        (-1, (tk + 3) / 4)
    } else {
        (1, -(tk - 3) / 4)
    };
    let mut d = BTreeMap::new();
    d.insert(int((q + 3) / 4), 1u64);
    d.insert(int(sign * tk + shift), ((q - 1) / 2) as u64);
    d.insert(&w(1).checked_scale(sign * tk).unwrap() + &int(shift), ((q - 1) / 4) as u64);
    d.insert(&w(2).checked_scale(sign * tk).unwrap() + &int(shift), ((q - 1) / 4) as u64);
    Ok(d)
}

/// Nonzero `lambda` in generator-power order (`g^0, g^1, ...`) that satisfy
/// the square condition.
pub fn monomial_admissible_lambdas(ctx: &FieldCtx) -> Result<Vec<Fe>, FamilyError> {
    let mut out = Vec::new();
    for e in 0..ctx.size() as i64 - 1 {
        let l = ctx.gen_pow(e);
        if check_monomial_admissible(ctx, l)?.admissible {
            out.push(l);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Tr(lambda x^2) + Tr(ux) Tr(vx)

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum QuadCase {
    /// `(Tr(uv/l), Tr(u^2/l), Tr(v^2/l)) = (2, 1, 1)`: near-bent.
    I,
    /// `(1, 0, 0)`: 2-plateaued.
    II,
    Other,
}

#[derive(Debug, Clone, Serialize)]
pub struct QuadProductSpec {
    pub lambda: Fe,
    pub u: Fe,
    pub v: Fe,
    pub m: u32,
    pub case: QuadCase,
    pub eta_lambda: i8,
}

pub fn check_quadproduct_case(
    ctx: &FieldCtx,
    lambda: Fe,
    u: Fe,
    v: Fe,
) -> Result<QuadProductSpec, FamilyError> {
    if ctx.p() != 3 {
        return Err(FamilyError::WrongCharacteristic {
            expected: 3,
            got: ctx.p(),
        });
    }
    if ctx.m() < 4 {
        return Err(FamilyError::DegreeTooSmall { got: ctx.m(), min: 4 });
    }
    for (name, val) in [("lambda", lambda), ("u", u), ("v", v)] {
        if val.is_zero() {
            return Err(FamilyError::ZeroParameter(name));
        }
    }
    Ok(quad_spec_unchecked(ctx, lambda, u, v))
}

fn quad_spec_unchecked(ctx: &FieldCtx, lambda: Fe, u: Fe, v: Fe) -> QuadProductSpec {
    let li = ctx.inv(lambda).expect("lambda is nonzero");
    let tr = |a: Fe, b: Fe| ctx.trace(ctx.mul(ctx.mul(a, b), li));
    let case = match (tr(u, v), tr(u, u), tr(v, v)) {
        (2, 1, 1) => QuadCase::I,
        (1, 0, 0) => QuadCase::II,
        _ => QuadCase::Other,
    };
    QuadProductSpec {
        lambda,
        u,
        v,
        m: ctx.m(),
        case,
        eta_lambda: ctx.eta(lambda),
    }
}

/// `c` or `c * sqrt(-3)` as an element of `Z[w_3]`.
fn prefactor(c: i64, with_sqrt: bool) -> CycInt {
    if with_sqrt {
        sqrt_minus_three().checked_scale(c).expect("prefactor fits")
    } else {
        CycInt::from_int(3, c)
    }
}

/// Reduces the `eta (-1)^m i^{m+1} 3^{(m+1)/2}` (case I) and
/// `eta (-1)^{m-1} i^m 3^{m/2+1}` (case II) prefactors to an integer times
/// an optional `sqrt(-3) = i sqrt(3)`.
fn quad_prefactor(case: QuadCase, m: u32, eta: i8) -> CycInt {
    let eta = eta as i64;
    let parity = |e: u32| if e % 2 == 0 { 1 } else { -1 };
    match case {
        QuadCase::I if m % 2 == 1 => {
            // (-1)^m = -1, i^{m+1} = (-1)^{(m+1)/2}
            prefactor(-eta * parity((m + 1) / 2) * pow_i64(3, (m + 1) / 2), false)
        }
        QuadCase::I => {
            // i^{m+1} 3^{(m+1)/2} = (-1)^{m/2} 3^{m/2} sqrt(-3)
            prefactor(eta * parity(m / 2) * pow_i64(3, m / 2), true)
        }
        QuadCase::II if m % 2 == 0 => {
            // (-1)^{m-1} = -1, i^m = (-1)^{m/2}
            prefactor(-eta * parity(m / 2) * pow_i64(3, m / 2 + 1), false)
        }
        QuadCase::II => {
            // i^m 3^{m/2+1} = (-1)^{(m-1)/2} 3^{(m+1)/2} sqrt(-3)
            prefactor(eta * parity((m - 1) / 2) * pow_i64(3, (m + 1) / 2), true)
        }
        QuadCase::Other => CycInt::zero(3),
    }
}

/// Closed-form Walsh coefficient of `Tr(lambda x^2) + Tr(ux)Tr(vx)` at `a`.
pub fn predicted_quadprod_walsh(
    ctx: &FieldCtx,
    spec: &QuadProductSpec,
    a: Fe,
) -> Result<CycInt, FamilyError> {
    if spec.case == QuadCase::Other {
        return Err(FamilyError::CaseOther);
    }
    let li = ctx.inv(spec.lambda)?;
    let tau = ctx.trace(ctx.mul(ctx.mul(a, a), li)) as i64;
    let branch = (
        ctx.trace(ctx.mul(ctx.mul(a, spec.u), li)),
        ctx.trace(ctx.mul(ctx.mul(a, spec.v), li)),
    );
    let pre = quad_prefactor(spec.case, spec.m, spec.eta_lambda);
    let exponent = match (spec.case, branch) {
        (_, (0, 0)) => -tau,
        (QuadCase::I, (1, 1)) | (QuadCase::I, (2, 2)) => 1 - tau,
        _ => return Ok(CycInt::zero(3)),
    };
    Ok(pre.mul_root(exponent))
}

/// Random triples with the requested case, from a fixed seed. With
/// `eta = Some(s)` only `lambda` with `eta(lambda) = s` are kept.
pub fn sample_quad_triples(
    ctx: &FieldCtx,
    case: QuadCase,
    eta: Option<i8>,
    count: usize,
    seed: u64,
) -> Vec<QuadProductSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = ctx.size() as i64 - 1;
    let mut out = Vec::with_capacity(count);
    let mut seen = std::collections::BTreeSet::new();
    let mut attempts = 0u64;
    while out.len() < count && attempts < 10_000_000 {
        attempts += 1;
        let (l, u, v) = (
            ctx.gen_pow(rng.gen_range(0..n)),
            ctx.gen_pow(rng.gen_range(0..n)),
            ctx.gen_pow(rng.gen_range(0..n)),
        );
        if eta.is_some_and(|s| ctx.eta(l) != s) {
            continue;
        }
        let spec = quad_spec_unchecked(ctx, l, u, v);
        if spec.case == case && seen.insert((l, u, v)) {
            out.push(spec);
        }
    }
    out
}

/// Every triple of nonzero elements with the requested case, in canonical
/// order. Only sensible for small fields.
pub fn all_quad_triples(ctx: &FieldCtx, case: QuadCase, eta: Option<i8>) -> Vec<QuadProductSpec> {
    let mut out = Vec::new();
    for l in ctx.nonzero_elements() {
        if eta.is_some_and(|s| ctx.eta(l) != s) {
            continue;
        }
        for u in ctx.nonzero_elements() {
            for v in ctx.nonzero_elements() {
                let spec = quad_spec_unchecked(ctx, l, u, v);
                if spec.case == case {
                    out.push(spec);
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Gold functions and Weil sums

#[derive(Debug, Clone, Serialize)]
pub struct GoldSpec {
    pub lambda: Fe,
    pub h: u32,
    pub m: u32,
    pub k: u32,
    pub d: u32,
    /// `m/d` even and `lambda^{(p^m-1)/(p^d+1)} = (-1)^{k/d}`.
    pub admissible: bool,
    /// `1 <= h < k` and `m > 4`, the range of the three-weight construction.
    pub construction_range: bool,
}

impl GoldSpec {
    /// `(-1)^{k/d}`.
    pub fn sign(&self) -> i64 {
        if (self.k / self.d) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// `p^{k+d}`.
    pub fn magnitude(&self, p: u32) -> i64 {
        pow_i64(p as i64, self.k + self.d)
    }
}

pub fn check_gold(ctx: &FieldCtx, lambda: Fe, h: u32) -> Result<GoldSpec, FamilyError> {
    let m = ctx.m();
    if m % 2 != 0 {
        return Err(FamilyError::OddDegree(m));
    }
    if lambda.is_zero() {
        return Err(FamilyError::ZeroParameter("lambda"));
    }
    if h == 0 {
        return Err(FamilyError::ZeroParameter("h"));
    }
    let k = m / 2;
    let d = FieldCtx::gcd(h, m);
    let p = ctx.p() as u64;
    let q = ctx.size() as u64;
    let admissible = (m / d) % 2 == 0 && {
        let e = (q - 1) / (p.pow(d) + 1);
        let target = if (k / d) % 2 == 0 {
            ctx.one()
        } else {
            ctx.from_int(-1)
        };
        ctx.pow(lambda, e) == target
    };
    Ok(GoldSpec {
        lambda,
        h,
        m,
        k,
        d,
        admissible,
        construction_range: h < k && m > 4,
    })
}

fn require_admissible(spec: &GoldSpec) -> Result<(), FamilyError> {
    if spec.admissible {
        Ok(())
    } else {
        Err(FamilyError::NotAdmissible(format!(
            "need m/d even and lambda^((p^m-1)/(p^d+1)) = (-1)^(k/d) (m={}, h={}, d={})",
            spec.m, spec.h, spec.d
        )))
    }
}

/// Admissible `lambda` in generator-power order.
pub fn gold_admissible_lambdas(ctx: &FieldCtx, h: u32) -> Result<Vec<Fe>, FamilyError> {
    let mut out = Vec::new();
    for e in 0..ctx.size() as i64 - 1 {
        let l = ctx.gen_pow(e);
        if check_gold(ctx, l, h)?.admissible {
            out.push(l);
        }
    }
    Ok(out)
}

/// `S_h(lambda, a)` by summing over the whole field.
pub fn weil_sum_direct(ctx: &FieldCtx, lambda: Fe, h: u32, a: Fe) -> CycInt {
    let p = ctx.p();
    let e = (p as u64).pow(h) + 1;
    let mut counts = vec![0i64; p as usize];
    for x in ctx.elements() {
        let t = ctx.add(ctx.mul(lambda, ctx.pow(x, e)), ctx.mul(a, x));
        counts[ctx.trace(t) as usize] += 1;
    }
    CycInt::from_full(p, &counts).expect("counts are bounded by the field size")
}

/// The F_p-linear map `g(x) = lambda^{p^h} x^{p^{2h}} + lambda x`.
#[derive(Debug, Clone)]
pub struct Linearized<'a> {
    ctx: &'a FieldCtx,
    lambda: Fe,
    lambda_ph: Fe,
    h: u32,
    solver: AffineSolver,
    kernel: Vec<Fe>,
}

impl<'a> Linearized<'a> {
    pub fn new(ctx: &'a FieldCtx, lambda: Fe, h: u32) -> Self {
        let lambda_ph = ctx.frobenius(lambda, h);
        let apply = |x: Fe| ctx.add(ctx.mul(lambda_ph, ctx.frobenius(x, 2 * h)), ctx.mul(lambda, x));
        let images: Vec<Fe> = (0..ctx.m() as u64).map(|i| apply(ctx.pow(ctx.x(), i))).collect();
        let solver = ctx.linear_solver(&images);
        let basis: Vec<Fe> = solver
            .kernel()
            .iter()
            .map(|v| ctx.from_coeffs(v).expect("kernel vector has m coordinates"))
            .collect();
        let mut kernel = vec![Fe::ZERO];
        for b in basis {
            let mut next = Vec::with_capacity(kernel.len() * ctx.p() as usize);
            for c in 0..ctx.p() {
                let cb = ctx.scale(c, b);
                next.extend(kernel.iter().map(|&x| ctx.add(x, cb)));
            }
            kernel = next;
        }
        kernel.sort();
        Linearized {
            ctx,
            lambda,
            lambda_ph,
            h,
            solver,
            kernel,
        }
    }

    pub fn apply(&self, x: Fe) -> Fe {
        let c = self.ctx;
        c.add(
            c.mul(self.lambda_ph, c.frobenius(x, 2 * self.h)),
            c.mul(self.lambda, x),
        )
    }

    /// All kernel elements, sorted.
    pub fn kernel(&self) -> &[Fe] {
        &self.kernel
    }

    pub fn is_permutation(&self) -> bool {
        self.kernel.len() == 1
    }

    /// Smallest solution of `g(x) = rhs`, if any.
    pub fn solve_one(&self, rhs: Fe) -> Option<Fe> {
        self.solutions(rhs).into_iter().next()
    }

    /// Every solution of `g(x) = rhs`, sorted; empty when unsolvable.
    pub fn solutions(&self, rhs: Fe) -> Vec<Fe> {
        let Some(x) = self.solver.solve(&self.ctx.coeffs(rhs)) else {
            return Vec::new();
        };
        let x0 = self.ctx.from_coeffs(&x).expect("solution has m coordinates");
        let mut all: Vec<Fe> = self.kernel.iter().map(|&k| self.ctx.add(x0, k)).collect();
        all.sort();
        all
    }
}

/// Every solution of `lambda^{p^h} x^{p^{2h}} + lambda x = rhs`.
pub fn solve_linearized(ctx: &FieldCtx, lambda: Fe, h: u32, rhs: Fe) -> Vec<Fe> {
    Linearized::new(ctx, lambda, h).solutions(rhs)
}

/// Closed-form Weil sums for a fixed admissible `(lambda, h)` and all of its
/// `F_p^*` multiples, with the linear solvers built once.
#[derive(Debug, Clone)]
pub struct WeilClosedForm<'a> {
    ctx: &'a FieldCtx,
    spec: GoldSpec,
    /// Index `y - 1` holds the map for `y * lambda`.
    maps: Vec<Linearized<'a>>,
}

impl<'a> WeilClosedForm<'a> {
    pub fn new(ctx: &'a FieldCtx, lambda: Fe, h: u32) -> Result<Self, FamilyError> {
        let spec = check_gold(ctx, lambda, h)?;
        require_admissible(&spec)?;
        let maps: Vec<Linearized> = (1..ctx.p())
            .map(|y| Linearized::new(ctx, ctx.scale(y, lambda), h))
            .collect();
        if maps[0].is_permutation() {
            return Err(FamilyError::NotAdmissible(
                "the linearized polynomial is a permutation".into(),
            ));
        }
        Ok(WeilClosedForm { ctx, spec, maps })
    }

    pub fn spec(&self) -> &GoldSpec {
        &self.spec
    }

    /// `S_h(y lambda, a)` for `y` in `F_p^*`.
    pub fn sum_scaled(&self, y: u32, a: Fe) -> Result<CycInt, FamilyError> {
        let ctx = self.ctx;
        let p = ctx.p();
        let y = y % p;
        assert!(y != 0, "scaling must be nonzero");
        let mag = self.spec.magnitude(p);
        let sign = self.spec.sign();
        if a.is_zero() {
            // p^{k+d} when k/d is odd, -p^{k+d} when even
            return Ok(CycInt::from_int(p, -sign * mag));
        }
        let map = &self.maps[y as usize - 1];
        let lam = ctx.scale(y, self.spec.lambda);
        let rhs = ctx.neg(ctx.frobenius(a, self.spec.h));
        let sols = map.solutions(rhs);
        let Some(&x0) = sols.first() else {
            return Ok(CycInt::zero(p));
        };
        let e = (p as u64).pow(self.spec.h) + 1;
        let tr = |x: Fe| ctx.trace_mul(lam, ctx.pow(x, e));
        let t0 = tr(x0);
        if sols.iter().any(|&x| tr(x) != t0) {
            return Err(FamilyError::InconsistentSolutions);
        }
        Ok(CycInt::root_power(p, -(t0 as i64)).checked_scale(-sign * mag).expect("fits"))
    }

    pub fn sum(&self, a: Fe) -> Result<CycInt, FamilyError> {
        self.sum_scaled(1, a)
    }

    /// `sum_{y, z in F_p^*} S_h(y lambda, z a)`.
    pub fn triple_sum(&self, a: Fe) -> Result<CycInt, FamilyError> {
        if a.is_zero() {
            return Err(FamilyError::ZeroParameter("a"));
        }
        let p = self.ctx.p();
        let mut acc = CycInt::zero(p);
        for y in 1..p {
            for z in 1..p {
                acc = &acc + &self.sum_scaled(y, self.ctx.scale(z, a))?;
            }
        }
        Ok(acc)
    }

    /// The three values the triple sum may take:
    /// `0`, `-(-1)^{k/d}(p-1)^2 p^{k+d}`, `(-1)^{k/d}(p-1) p^{k+d}`.
    pub fn triple_sum_values(&self) -> [i64; 3] {
        let p = self.ctx.p() as i64;
        let mag = self.spec.magnitude(self.ctx.p());
        let s = self.spec.sign();
        [0, -s * (p - 1) * (p - 1) * mag, s * (p - 1) * mag]
    }
}

pub fn weil_sum_closed(ctx: &FieldCtx, lambda: Fe, h: u32, a: Fe) -> Result<CycInt, FamilyError> {
    WeilClosedForm::new(ctx, lambda, h)?.sum(a)
}

/// Whether `S_h(c lambda, 0)` is the same for every `c` in `F_p^*`, by
/// direct summation.
pub fn scaled_sums_agree(ctx: &FieldCtx, lambda: Fe, h: u32) -> bool {
    let base = weil_sum_direct(ctx, lambda, h, Fe::ZERO);
    (2..ctx.p()).all(|c| weil_sum_direct(ctx, ctx.scale(c, lambda), h, Fe::ZERO) == base)
}

pub fn gold_triple_sum(ctx: &FieldCtx, lambda: Fe, h: u32, a: Fe) -> Result<CycInt, FamilyError> {
    WeilClosedForm::new(ctx, lambda, h)?.triple_sum(a)
}
