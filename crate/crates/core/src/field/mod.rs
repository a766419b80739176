//! Arithmetic in `F_{p^m}` for odd `p`.
//!
//! Elements are handles ([`Fe`]) holding the integer `sum c_i p^i` of their
//! power-basis coordinates, so the canonical element order is plain integer
//! order and enumeration is `0..p^m`. Multiplication goes through log/antilog
//! tables when the field is small enough, otherwise through polynomial
//! multiplication modulo the defining polynomial.

pub mod linalg;
pub mod poly;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use linalg::AffineSolver;

/// Largest field accepted unless overridden.
pub const DEFAULT_SIZE_CAP: u64 = 1 << 26;
/// Log/antilog and trace tables are built up to this many elements.
const TABLE_LIMIT: u64 = 1 << 20;

/// An element of the prime field, always reduced into `[0, p)`.
pub type PrimeScalar = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("characteristic 2 is not supported")]
    EvenCharacteristic,
    #[error("extension degree must be at least 2, got {0}")]
    DegreeTooSmall(u32),
    #[error("modulus must be monic of degree {expected}")]
    BadModulus { expected: u32 },
    #[error("modulus {0} is reducible")]
    ReducibleModulus(String),
    #[error("field of size {size} exceeds the size cap {cap}")]
    SizeCapExceeded { size: u64, cap: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    MixedContexts,
    #[error("{k} does not divide the extension degree {m}")]
    NotADivisor { k: u32, m: u32 },
    #[error("element is not in the subfield of degree {0}")]
    NotInSubfield(u32),
    #[error("zero is not allowed here")]
    ZeroInput,
    #[error("expected {expected} coordinates in [0, p), got {got:?}")]
    BadCoordinates { expected: u32, got: Vec<u32> },
    #[error("cannot parse '{0}'")]
    Parse(String),
}

/// Handle to an element of a particular [`FieldCtx`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Fe(u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    /// Position in the canonical enumeration.
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Debug)]
struct LogTables {
    log: Vec<u32>,
    /// `exp[i] = g^i` for `0 <= i < 2(q-1)` so sums of two logs need no reduction.
    exp: Vec<u32>,
}

/// A concrete realisation of `F_{p^m}`. Immutable once built.
#[derive(Debug)]
pub struct FieldCtx {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    place: Vec<u32>,
    generator: Fe,
    tables: Option<LogTables>,
    trace_basis: Vec<u32>,
    trace_table: Option<Vec<u16>>,
    dual_basis: Vec<Fe>,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn gcd_u32(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd_u32(b, a % b)
    }
}

impl FieldCtx {
    /// Builds `F_{p^m}`. Without a modulus the smallest monic irreducible of
    /// degree `m` is used (see [`poly::smallest_irreducible`]).
    pub fn new(p: u32, m: u32, modulus: Option<&[u32]>) -> Result<Self, FieldError> {
        Self::with_cap(p, m, modulus, DEFAULT_SIZE_CAP)
    }

    pub fn with_cap(
        p: u32,
        m: u32,
        modulus: Option<&[u32]>,
        cap: u64,
    ) -> Result<Self, FieldError> {
        if p == 2 {
            return Err(FieldError::EvenCharacteristic);
        }
        if !is_prime(p as u64) {
            return Err(FieldError::NotPrime(p as u64));
        }
        if m < 2 {
            return Err(FieldError::DegreeTooSmall(m));
        }
        let size = (p as u64).checked_pow(m).unwrap_or(u64::MAX);
        if size > cap || size > u32::MAX as u64 {
            return Err(FieldError::SizeCapExceeded { size, cap });
        }
        let modulus = match modulus {
            Some(f) => {
                let f: Vec<u32> = f.iter().map(|&c| c % p).collect();
                if f.len() != m as usize + 1 || f[m as usize] != 1 {
                    return Err(FieldError::BadModulus { expected: m });
                }
                if !poly::is_irreducible(&f, p) {
                    return Err(FieldError::ReducibleModulus(poly::format_polynomial(&f)));
                }
                f
            }
            None => poly::smallest_irreducible(p, m),
        };
        let q = size as u32;
        let place = (0..m).map(|i| p.pow(i)).collect();
        let mut ctx = FieldCtx {
            p,
            m,
            q,
            modulus,
            place,
            generator: Fe::ONE,
            tables: None,
            trace_basis: Vec::new(),
            trace_table: None,
            dual_basis: Vec::new(),
        };
        ctx.generator = ctx.search_generator();
        if size <= TABLE_LIMIT {
            ctx.build_log_tables();
        }
        ctx.trace_basis = (0..m)
            .map(|i| {
                let t = ctx.trace_slow(ctx.pow(ctx.x(), i as u64));
                t
            })
            .collect();
        if size <= TABLE_LIMIT {
            let table = (0..q).map(|i| ctx.trace_from_digits(Fe(i)) as u16).collect();
            ctx.trace_table = Some(table);
        }
        ctx.dual_basis = ctx.compute_dual_basis();
        Ok(ctx)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Number of elements, `p^m`.
    pub fn size(&self) -> usize {
        self.q as usize
    }

    /// The defining polynomial, little-endian and monic.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> Fe {
        self.generator
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    // --- conversions ---------------------------------------------------

    pub fn zero(&self) -> Fe {
        Fe::ZERO
    }

    pub fn one(&self) -> Fe {
        Fe::ONE
    }

    /// The class of the polynomial variable (root of the modulus).
    pub fn x(&self) -> Fe {
        Fe(self.p)
    }

    /// Embeds an integer into the prime subfield.
    pub fn from_int(&self, v: i64) -> Fe {
        Fe(v.rem_euclid(self.p as i64) as u32)
    }

    pub fn from_index(&self, i: usize) -> Result<Fe, FieldError> {
        if i < self.q as usize {
            Ok(Fe(i as u32))
        } else {
            Err(FieldError::BadCoordinates {
                expected: self.m,
                got: vec![i as u32],
            })
        }
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Fe, FieldError> {
        if coeffs.len() > self.m as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(FieldError::BadCoordinates {
                expected: self.m,
                got: coeffs.to_vec(),
            });
        }
        Ok(Fe(coeffs.iter().zip(&self.place).map(|(c, w)| c * w).sum()))
    }

    /// Power-basis coordinates, low degree first, always `m` long.
    pub fn coeffs(&self, x: Fe) -> Vec<u32> {
        let mut r = x.0;
        (0..self.m)
            .map(|_| {
                let d = r % self.p;
                r /= self.p;
                d
            })
            .collect()
    }

    /// If `x` lies in the prime field, its value.
    pub fn as_prime(&self, x: Fe) -> Option<PrimeScalar> {
        (x.0 < self.p).then_some(x.0)
    }

    /// `g^k` for the context generator.
    pub fn gen_pow(&self, k: i64) -> Fe {
        let order = (self.q - 1) as i64;
        self.pow(self.generator, k.rem_euclid(order) as u64)
    }

    /// Discrete log base the context generator.
    pub fn log(&self, x: Fe) -> Result<u32, FieldError> {
        if x.is_zero() {
            return Err(FieldError::ZeroInput);
        }
        match &self.tables {
            Some(t) => Ok(t.log[x.index()]),
            None => {
                let mut acc = Fe::ONE;
                for k in 0..self.q - 1 {
                    if acc == x {
                        return Ok(k);
                    }
                    acc = self.mul(acc, self.generator);
                }
                unreachable!("generator spans the multiplicative group")
            }
        }
    }

    /// Every element exactly once, in canonical order starting at zero.
    pub fn elements(&self) -> impl Iterator<Item = Fe> + Clone {
        (0..self.q).map(Fe)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Fe> + Clone {
        (1..self.q).map(Fe)
    }

    // --- arithmetic ----------------------------------------------------

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let (mut x, mut y, mut r) = (a.0, b.0, 0);
        for &w in &self.place {
            let s = x % self.p + y % self.p;
            r += if s >= self.p { s - self.p } else { s } * w;
            x /= self.p;
            y /= self.p;
        }
        Fe(r)
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        self.scale(self.p - 1, a)
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    /// Multiplication by a prime-field scalar.
    #[inline]
    pub fn scale(&self, c: PrimeScalar, a: Fe) -> Fe {
        let c = c % self.p;
        let (mut x, mut r) = (a.0, 0);
        for &w in &self.place {
            r += (x % self.p * c % self.p) * w;
            x /= self.p;
        }
        Fe(r)
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.is_zero() || b.is_zero() {
            return Fe::ZERO;
        }
        match &self.tables {
            Some(t) => Fe(t.exp[(t.log[a.index()] + t.log[b.index()]) as usize]),
            None => self.mul_slow(a, b),
        }
    }

    pub fn inv(&self, a: Fe) -> Result<Fe, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match &self.tables {
            Some(t) => {
                let l = t.log[a.index()];
                Fe(t.exp[((self.q - 1 - l) % (self.q - 1)) as usize])
            }
            None => self.pow(a, (self.q - 2) as u64),
        })
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e`, with `0^0 = 1`.
    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if a.is_zero() {
            return Fe::ZERO;
        }
        match &self.tables {
            Some(t) => {
                let l = t.log[a.index()] as u64 * (e % (self.q as u64 - 1)) % (self.q as u64 - 1);
                Fe(t.exp[l as usize])
            }
            None => self.pow_slow(a, e),
        }
    }

    /// `a^{p^k}`.
    pub fn frobenius(&self, a: Fe, k: u32) -> Fe {
        let mut r = a;
        for _ in 0..k % self.m {
            r = self.pow(r, self.p as u64);
        }
        r
    }

    /// Absolute trace into F_p.
    #[inline]
    pub fn trace(&self, a: Fe) -> PrimeScalar {
        match &self.trace_table {
            Some(t) => t[a.index()] as u32,
            None => self.trace_from_digits(a),
        }
    }

    /// `Tr(a b)`, the trace bilinear form.
    #[inline]
    pub fn trace_mul(&self, a: Fe, b: Fe) -> PrimeScalar {
        self.trace(self.mul(a, b))
    }

    /// Relative trace onto the subfield of degree `k`.
    pub fn rel_trace(&self, a: Fe, k: u32) -> Result<Fe, FieldError> {
        if k == 0 || self.m % k != 0 {
            return Err(FieldError::NotADivisor { k, m: self.m });
        }
        let mut acc = Fe::ZERO;
        let mut term = a;
        for _ in 0..self.m / k {
            acc = self.add(acc, term);
            term = self.frobenius(term, k);
        }
        Ok(acc)
    }

    /// Whether `a` lies in the subfield of order `p^k`.
    pub fn in_subfield(&self, a: Fe, k: u32) -> Result<bool, FieldError> {
        if k == 0 || self.m % k != 0 {
            return Err(FieldError::NotADivisor { k, m: self.m });
        }
        Ok(self.frobenius(a, k) == a)
    }

    /// Quadratic character: 0 at zero, +1 on nonzero squares, -1 otherwise.
    pub fn eta(&self, a: Fe) -> i8 {
        if a.is_zero() {
            return 0;
        }
        let r = self.pow(a, (self.q as u64 - 1) / 2);
        if r == Fe::ONE {
            1
        } else {
            debug_assert_eq!(r, self.from_int(-1));
            -1
        }
    }

    /// Squareness inside the subfield of order `p^k`, i.e.
    /// `a^{(p^k - 1)/2} = 1`.
    pub fn is_square_in_subfield(&self, a: Fe, k: u32) -> Result<bool, FieldError> {
        if a.is_zero() {
            return Err(FieldError::ZeroInput);
        }
        if !self.in_subfield(a, k)? {
            return Err(FieldError::NotInSubfield(k));
        }
        Ok(self.pow(a, (self.p as u64).pow(k).saturating_sub(1) / 2) == Fe::ONE)
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: Fe) -> Result<u64, FieldError> {
        if a.is_zero() {
            return Err(FieldError::ZeroInput);
        }
        let mut ord = self.q as u64 - 1;
        for r in prime_factors(ord) {
            while ord % r == 0 && self.pow(a, ord / r) == Fe::ONE {
                ord /= r;
            }
        }
        Ok(ord)
    }

    /// Basis `{g_j}` with `Tr(x^i g_j) = [i == j]` against the power basis.
    pub fn dual_basis(&self) -> &[Fe] {
        &self.dual_basis
    }

    /// Divisors of `m`, i.e. the degrees of the subfields.
    pub fn subfield_degrees(&self) -> Vec<u32> {
        (1..=self.m).filter(|k| self.m % k == 0).collect()
    }

    /// Matrix (row `i` = output coordinate `i`) of an F_p-linear map given by
    /// its images of the power basis.
    pub fn linear_map_matrix(&self, images: &[Fe]) -> Vec<Vec<u32>> {
        let cols: Vec<Vec<u32>> = images.iter().map(|&e| self.coeffs(e)).collect();
        (0..self.m as usize)
            .map(|i| cols.iter().map(|c| c[i]).collect())
            .collect()
    }

    /// Binds a handle to this context for checked arithmetic.
    pub fn bind(&self, fe: Fe) -> FieldElement<'_> {
        FieldElement { ctx: self, fe }
    }

    // --- construction helpers -----------------------------------------

    fn mul_slow(&self, a: Fe, b: Fe) -> Fe {
        let m = self.m as usize;
        let p = self.p as u64;
        let ca = self.coeffs(a);
        let cb = self.coeffs(b);
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in ca.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in cb.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for d in (m..2 * m - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (i, &f) in self.modulus.iter().enumerate().take(m) {
                let t = d - m + i;
                prod[t] = (prod[t] + (p - c) * f as u64) % p;
            }
        }
        let digits: Vec<u32> = prod[..m].iter().map(|&v| v as u32).collect();
        Fe(digits.iter().zip(&self.place).map(|(c, w)| c * w).sum())
    }

    fn pow_slow(&self, a: Fe, mut e: u64) -> Fe {
        let mut acc = Fe::ONE;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, b);
            }
            b = self.mul_slow(b, b);
            e >>= 1;
        }
        acc
    }

    fn search_generator(&self) -> Fe {
        let n = self.q as u64 - 1;
        let factors = prime_factors(n);
        (1..self.q)
            .map(Fe)
            .find(|&g| factors.iter().all(|&r| self.pow_slow(g, n / r) != Fe::ONE))
            .expect("the multiplicative group is cyclic")
    }

    fn build_log_tables(&mut self) {
        let n = (self.q - 1) as usize;
        let mut exp = vec![0u32; 2 * n];
        let mut log = vec![0u32; self.q as usize];
        let mut cur = Fe::ONE;
        for i in 0..n {
            exp[i] = cur.0;
            exp[i + n] = cur.0;
            log[cur.index()] = i as u32;
            cur = self.mul_slow(cur, self.generator);
        }
        self.tables = Some(LogTables { log, exp });
    }

    fn trace_slow(&self, a: Fe) -> u32 {
        let mut acc = Fe::ZERO;
        let mut t = a;
        for _ in 0..self.m {
            acc = self.add(acc, t);
            t = self.pow(t, self.p as u64);
        }
        debug_assert!(acc.0 < self.p, "trace must land in the prime field");
        acc.0
    }

    fn trace_from_digits(&self, a: Fe) -> u32 {
        let mut r = a.0;
        let mut acc = 0u64;
        for &t in &self.trace_basis {
            acc += (r % self.p) as u64 * t as u64;
            r /= self.p;
        }
        (acc % self.p as u64) as u32
    }

    fn compute_dual_basis(&self) -> Vec<Fe> {
        let m = self.m as usize;
        let basis: Vec<Fe> = (0..m).map(|i| self.pow(self.x(), i as u64)).collect();
        let gram: Vec<Vec<u32>> = basis
            .iter()
            .map(|&bi| basis.iter().map(|&bj| self.trace_mul(bi, bj)).collect())
            .collect();
        let inv = linalg::invert(&gram, self.p).expect("the trace form is non-degenerate");
        // gamma_j = sum_k inv[k][j] beta_k
        (0..m)
            .map(|j| {
                let coords: Vec<u32> = (0..m).map(|k| inv[k][j]).collect();
                basis
                    .iter()
                    .zip(&coords)
                    .fold(Fe::ZERO, |acc, (&b, &c)| self.add(acc, self.scale(c, b)))
            })
            .collect()
    }

    /// Solver for the F_p-linear map whose power-basis images are `images`.
    pub fn linear_solver(&self, images: &[Fe]) -> AffineSolver {
        AffineSolver::new(&self.linear_map_matrix(images), self.p)
    }

    /// gcd helper exposed for callers computing `gcd(h, m)`.
    pub fn gcd(a: u32, b: u32) -> u32 {
        gcd_u32(a, b)
    }
}

/// Arithmetic operations accepted by [`arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Neg,
    Mul,
    Inv,
    Pow(u64),
}

/// An element together with its field, for context-checked arithmetic.
#[derive(Debug, Clone, Copy)]
pub struct FieldElement<'a> {
    ctx: &'a FieldCtx,
    fe: Fe,
}

impl<'a> FieldElement<'a> {
    pub fn fe(&self) -> Fe {
        self.fe
    }

    pub fn ctx(&self) -> &'a FieldCtx {
        self.ctx
    }

    pub fn coeffs(&self) -> Vec<u32> {
        self.ctx.coeffs(self.fe)
    }

    fn same_field(&self, other: &FieldElement<'_>) -> Result<(), FieldError> {
        if std::ptr::eq(self.ctx, other.ctx) {
            Ok(())
        } else {
            Err(FieldError::MixedContexts)
        }
    }
}

impl PartialEq for FieldElement<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.ctx, other.ctx) && self.fe == other.fe
    }
}

/// Applies `op` to one (Neg, Inv, Pow) or two (Add, Sub, Mul) operands.
pub fn arith<'a>(op: ArithOp, operands: &[FieldElement<'a>]) -> Result<FieldElement<'a>, FieldError> {
    let first = operands.first().ok_or(FieldError::ZeroInput)?;
    let ctx = first.ctx;
    let binary = |f: fn(&FieldCtx, Fe, Fe) -> Fe| -> Result<FieldElement<'a>, FieldError> {
        let second = operands.get(1).ok_or(FieldError::ZeroInput)?;
        first.same_field(second)?;
        Ok(ctx.bind(f(ctx, first.fe, second.fe)))
    };
    match op {
        ArithOp::Add => binary(FieldCtx::add),
        ArithOp::Sub => binary(FieldCtx::sub),
        ArithOp::Mul => binary(FieldCtx::mul),
        ArithOp::Neg => Ok(ctx.bind(ctx.neg(first.fe))),
        ArithOp::Inv => Ok(ctx.bind(ctx.inv(first.fe)?)),
        ArithOp::Pow(e) => Ok(ctx.bind(ctx.pow(first.fe, e))),
    }
}
