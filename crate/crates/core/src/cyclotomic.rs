//! Exact arithmetic in `Z[w]`, `w` a primitive `p`-th root of unity.
//!
//! An element is stored as `sum_{j < p-1} c_j w^j`; the `w^{p-1}` coefficient
//! is eliminated with `1 + w + ... + w^{p-1} = 0`, which makes the
//! representation unique. Coefficients are `i64` and every operation checks
//! for overflow.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycError {
    #[error("operands live in Z[w_{0}] and Z[w_{1}]")]
    MixedPrime(u32, u32),
    #[error("integer overflow in cyclotomic arithmetic")]
    Overflow,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CycInt {
    p: u32,
    coeffs: Vec<i64>,
}

impl PartialOrd for CycInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Arbitrary but total: by prime, then by coefficients from `w^0` upward.
impl Ord for CycInt {
    fn cmp(&self, other: &Self) -> Ordering {
        self.p
            .cmp(&other.p)
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

fn ck(v: Option<i64>) -> Result<i64, CycError> {
    v.ok_or(CycError::Overflow)
}

impl CycInt {
    pub fn zero(p: u32) -> Self {
        CycInt {
            p,
            coeffs: vec![0; p as usize - 1],
        }
    }

    pub fn from_int(p: u32, c: i64) -> Self {
        let mut z = Self::zero(p);
        z.coeffs[0] = c;
        z
    }

    /// `w^{j mod p}` in normal form.
    pub fn root_power(p: u32, j: i64) -> Self {
        let j = j.rem_euclid(p as i64) as usize;
        let mut z = Self::zero(p);
        if j == p as usize - 1 {
            z.coeffs.iter_mut().for_each(|c| *c = -1);
        } else {
            z.coeffs[j] = 1;
        }
        z
    }

    /// Normalises a full length-`p` coefficient vector (`counts[j]` is the
    /// coefficient of `w^j`).
    pub fn from_full(p: u32, full: &[i64]) -> Result<Self, CycError> {
        assert_eq!(full.len(), p as usize);
        let top = full[p as usize - 1];
        let coeffs = full[..p as usize - 1]
            .iter()
            .map(|&c| ck(c.checked_sub(top)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CycInt { p, coeffs })
    }

    /// Builds from normal-form coefficients (length `p - 1`).
    pub fn from_coeffs(p: u32, coeffs: Vec<i64>) -> Self {
        assert_eq!(coeffs.len(), p as usize - 1, "normal form has p-1 coefficients");
        CycInt { p, coeffs }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// Normal-form coefficients of `w^0 .. w^{p-2}`.
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn same_prime(&self, other: &Self) -> Result<(), CycError> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(CycError::MixedPrime(self.p, other.p))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, CycError> {
        self.same_prime(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| ck(a.checked_add(b)))
            .collect::<Result<_, _>>()?;
        Ok(CycInt { p: self.p, coeffs })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, CycError> {
        self.checked_add(&other.checked_neg()?)
    }

    pub fn checked_neg(&self) -> Result<Self, CycError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|&a| ck(a.checked_neg()))
            .collect::<Result<_, _>>()?;
        Ok(CycInt { p: self.p, coeffs })
    }

    pub fn checked_scale(&self, k: i64) -> Result<Self, CycError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|&a| ck(a.checked_mul(k)))
            .collect::<Result<_, _>>()?;
        Ok(CycInt { p: self.p, coeffs })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, CycError> {
        self.same_prime(other)?;
        let p = self.p as usize;
        let mut full = vec![0i128; p];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                full[(i + j) % p] += a as i128 * b as i128;
            }
        }
        let top = full[p - 1];
        let coeffs = full[..p - 1]
            .iter()
            .map(|&c| i64::try_from(c - top).map_err(|_| CycError::Overflow))
            .collect::<Result<_, _>>()?;
        Ok(CycInt { p: self.p, coeffs })
    }

    /// Galois automorphism `w -> w^t` for `t` prime to `p`.
    pub fn galois(&self, t: i64) -> Self {
        let p = self.p as usize;
        let t = t.rem_euclid(p as i64) as usize;
        assert!(t != 0, "w -> 1 is not an automorphism");
        let mut full = vec![0i64; p];
        for (j, &c) in self.coeffs.iter().enumerate() {
            full[(j * t) % p] = c;
        }
        Self::from_full(self.p, &full).expect("a permutation of coefficients cannot overflow")
    }

    /// Complex conjugation, `w -> w^{-1}`.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    /// `self * w^j`.
    pub fn mul_root(&self, j: i64) -> Self {
        let p = self.p as usize;
        let j = j.rem_euclid(p as i64) as usize;
        let mut full = vec![0i64; p];
        for (i, &c) in self.coeffs.iter().enumerate() {
            full[(i + j) % p] = c;
        }
        Self::from_full(self.p, &full).expect("a rotation of coefficients cannot overflow")
    }

    /// The integer `c` when `self = c * 1`.
    pub fn is_rational(&self) -> Option<i64> {
        self.coeffs[1..].iter().all(|&c| c == 0).then_some(self.coeffs[0])
    }

    /// `|z|^2 = z * conj(z)` when that is a rational integer.
    pub fn norm_squared(&self) -> Option<i64> {
        self.checked_mul(&self.conj()).ok()?.is_rational()
    }

    /// Exact division by an integer, if every coefficient is divisible.
    pub fn div_exact(&self, k: i64) -> Option<Self> {
        if k == 0 || self.coeffs.iter().any(|&c| c % k != 0) {
            return None;
        }
        Some(CycInt {
            p: self.p,
            coeffs: self.coeffs.iter().map(|&c| c / k).collect(),
        })
    }

    /// Floating point value, for display only.
    pub fn approx(&self) -> (f64, f64) {
        let p = self.p as f64;
        self.coeffs.iter().enumerate().fold((0.0, 0.0), |(re, im), (j, &c)| {
            let ang = 2.0 * std::f64::consts::PI * j as f64 / p;
            (re + c as f64 * ang.cos(), im + c as f64 * ang.sin())
        })
    }
}

macro_rules! forward_op {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl std::ops::$tr<&CycInt> for &CycInt {
            type Output = CycInt;
            fn $method(self, rhs: &CycInt) -> CycInt {
                self.$checked(rhs)
                    .unwrap_or_else(|e| panic!("cyclotomic {}: {e}", stringify!($method)))
            }
        }
        impl std::ops::$tr for CycInt {
            type Output = CycInt;
            fn $method(self, rhs: CycInt) -> CycInt {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_op!(Add, add, checked_add);
forward_op!(Sub, sub, checked_sub);
forward_op!(Mul, mul, checked_mul);

impl std::ops::Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        self.checked_neg().expect("cyclotomic negation overflow")
    }
}

impl std::ops::Neg for CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        -&self
    }
}

/// `3 - 9w`, `12 + 9w^2`, `0`.
impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mag = c.unsigned_abs();
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            match (j, mag) {
                (0, _) => write!(f, "{mag}")?,
                (1, 1) => write!(f, "w")?,
                (1, _) => write!(f, "{mag}w")?,
                (_, 1) => write!(f, "w^{j}")?,
                _ => write!(f, "{mag}w^{j}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `sqrt(-3) = 1 + 2w` in `Z[w_3]`, consistent with `w = e^{2 pi i / 3}`.
pub fn sqrt_minus_three() -> CycInt {
    CycInt::from_coeffs(3, vec![1, 2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sqrt_minus_three_squares() {
        let s = sqrt_minus_three();
        assert_eq!(&s * &s, CycInt::from_int(3, -3));
        let (re, im) = s.approx();
        assert!(re.abs() < 1e-12 && (im - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn root_powers() {
        assert_eq!(CycInt::root_power(3, 0), CycInt::from_int(3, 1));
        assert_eq!(CycInt::root_power(3, 2), CycInt::from_coeffs(3, vec![-1, -1]));
        for p in [3u32, 5, 7] {
            let total = (0..p as i64).fold(CycInt::zero(p), |acc, j| acc + CycInt::root_power(p, j));
            assert!(total.is_zero());
        }
        assert_eq!(CycInt::root_power(5, 1).conj(), CycInt::root_power(5, 4));
    }

    #[test]
    fn rationality() {
        assert_eq!(CycInt::from_int(3, 5).is_rational(), Some(5));
        assert_eq!(CycInt::root_power(3, 1).is_rational(), None);
        let s = CycInt::root_power(3, 1) + CycInt::root_power(3, 2);
        assert_eq!(s.is_rational(), Some(-1));
    }

    #[test]
    fn norms_over_z_w3() {
        assert_eq!(CycInt::zero(3).norm_squared(), Some(0));
        for a in -6i64..=6 {
            for b in -6i64..=6 {
                let z = CycInt::from_coeffs(3, vec![a, b]);
                assert_eq!(z.norm_squared(), Some(a * a - a * b + b * b));
            }
        }
    }

    #[test]
    fn norm_can_be_irrational_for_p5() {
        // 1 + w has |1 + w|^2 = 2 + w + w^4, not rational
        let z = CycInt::from_coeffs(5, vec![1, 1, 0, 0]);
        assert_eq!(z.norm_squared(), None);
    }

    #[test]
    fn mixed_and_overflow_errors() {
        let a = CycInt::from_int(3, 1);
        let b = CycInt::from_int(5, 1);
        assert_eq!(a.checked_add(&b), Err(CycError::MixedPrime(3, 5)));
        let big = CycInt::from_int(3, i64::MAX);
        assert_eq!(big.checked_add(&a), Err(CycError::Overflow));
        assert_eq!(big.checked_mul(&big), Err(CycError::Overflow));
    }

    #[test]
    fn display() {
        assert_eq!(CycInt::from_coeffs(3, vec![3, -9]).to_string(), "3 - 9w");
        assert_eq!(CycInt::zero(5).to_string(), "0");
        assert_eq!(CycInt::from_coeffs(5, vec![0, 1, 0, -2]).to_string(), "w - 2w^3");
    }

    fn arb_cyc(p: u32) -> impl Strategy<Value = CycInt> {
        prop::collection::vec(-1000i64..1000, p as usize - 1)
            .prop_map(move |c| CycInt::from_coeffs(p, c))
    }

    fn arb_triple() -> impl Strategy<Value = (CycInt, CycInt, CycInt)> {
        prop_oneof![Just(3u32), Just(5u32), Just(7u32)]
            .prop_flat_map(|p| (arb_cyc(p), arb_cyc(p), arb_cyc(p)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn ring_laws((a, b, c) in arb_triple()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a + &(-&a)).is_zero());
        }

        #[test]
        fn conjugation_is_an_involutive_automorphism((a, b, _c) in arb_triple()) {
            prop_assert_eq!(a.conj().conj(), a.clone());
            prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
            prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
        }

        #[test]
        fn norm_is_multiplicative_and_definite((a, b, _c) in arb_triple()) {
            if let (Some(na), Some(nb)) = (a.norm_squared(), b.norm_squared()) {
                prop_assert_eq!((&a * &b).norm_squared(), Some(na * nb));
            }
            if a.norm_squared() == Some(0) {
                prop_assert!(a.is_zero());
            }
            if !a.is_zero() {
                prop_assert_ne!(a.norm_squared(), Some(0));
            }
        }
    }
}
