//! Dense polynomials over a prime field, stored little-endian (`c[i]` is the
//! coefficient of `x^i`). Only what the extension-field layer needs:
//! irreducibility testing, modulus search and a small text format.

use super::FieldError;

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn degree(a: &[u32]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

fn inv_mod(a: u32, p: u32) -> u32 {
    pow_mod(a, p - 2, p)
}

pub(crate) fn pow_mod(base: u32, mut e: u32, p: u32) -> u32 {
    let p64 = p as u64;
    let mut acc = 1u64;
    let mut b = base as u64 % p64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p64;
        }
        b = b * b % p64;
        e >>= 1;
    }
    acc as u32
}

/// Remainder of `a` modulo `f` (f nonzero).
fn rem(a: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    let df = degree(f).expect("division by zero polynomial");
    let lead_inv = inv_mod(f[df], p) as u64;
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let p64 = p as u64;
    while let Some(dr) = r.iter().rposition(|&c| c % p64 != 0) {
        if dr < df {
            break;
        }
        let factor = (r[dr] % p64) * lead_inv % p64;
        let shift = dr - df;
        for (i, &fc) in f.iter().enumerate().take(df + 1) {
            let sub = factor * fc as u64 % p64;
            r[shift + i] = (r[shift + i] % p64 + p64 - sub) % p64;
        }
    }
    trim(r.into_iter().map(|c| (c % p64) as u32).collect())
}

fn mul_mod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let p64 = p as u64;
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p64;
        }
    }
    rem(
        &prod.into_iter().map(|c| c as u32).collect::<Vec<_>>(),
        f,
        p,
    )
}

fn pow_poly_mod(base: &[u32], mut e: u64, f: &[u32], p: u32) -> Vec<u32> {
    let mut acc = vec![1u32];
    let mut b = rem(base, f, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(&acc, &b, f, p);
        }
        b = mul_mod(&b, &b, f, p);
        e >>= 1;
    }
    acc
}

fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Ben-Or irreducibility test: `f` of degree `m` is irreducible iff
/// `gcd(x^{p^i} - x, f) = 1` for every `1 <= i <= m/2`.
pub fn is_irreducible(f: &[u32], p: u32) -> bool {
    let Some(m) = degree(f) else { return false };
    if m == 0 {
        return false;
    }
    if m == 1 {
        return true;
    }
    let x = vec![0u32, 1];
    let mut xp = x.clone();
    for _ in 1..=m / 2 {
        xp = pow_poly_mod(&xp, p as u64, f, p);
        let mut diff = xp.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        let g = gcd(f, &trim(diff), p);
        if degree(&g) != Some(0) {
            return false;
        }
    }
    true
}

/// Smallest monic irreducible polynomial of degree `m`, where the lower
/// coefficients `c_0..c_{m-1}` are ranked by the integer `sum c_i p^i`.
pub fn smallest_irreducible(p: u32, m: u32) -> Vec<u32> {
    let count = (p as u64).pow(m);
    for idx in 0..count {
        let mut f = Vec::with_capacity(m as usize + 1);
        let mut r = idx;
        for _ in 0..m {
            f.push((r % p as u64) as u32);
            r /= p as u64;
        }
        f.push(1);
        if f[0] != 0 && is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

/// All monic irreducible polynomials of degree `m` in the same ranking,
/// lazily. Used to pick alternative moduli.
pub fn irreducibles(p: u32, m: u32) -> impl Iterator<Item = Vec<u32>> {
    let count = (p as u64).pow(m);
    (0..count).filter_map(move |idx| {
        let mut f = Vec::with_capacity(m as usize + 1);
        let mut r = idx;
        for _ in 0..m {
            f.push((r % p as u64) as u32);
            r /= p as u64;
        }
        f.push(1);
        (f[0] != 0 && is_irreducible(&f, p)).then_some(f)
    })
}

/// Parses `c0 + c1*x + ... + cm*x^m` (any term order, `-` allowed, `2x^3`
/// or `2*x^3`) or a bracketed little-endian list `[c0,c1,...,cm]`.
/// Coefficients are reduced modulo `p`.
pub fn parse_polynomial(text: &str, p: u32) -> Result<Vec<u32>, FieldError> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || FieldError::Parse(text.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    let reduce = |v: i64| v.rem_euclid(p as i64) as u32;
    if let Some(inner) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
        let coeffs = inner
            .split(',')
            .map(|t| t.parse::<i64>().map(reduce).map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(coeffs);
    }
    let mut terms: Vec<(i64, usize)> = Vec::new();
    let mut rest = s.as_str();
    while !rest.is_empty() {
        let (sign, body) = match rest.as_bytes()[0] {
            b'+' => (1i64, &rest[1..]),
            b'-' => (-1i64, &rest[1..]),
            _ if terms.is_empty() => (1i64, rest),
            _ => return Err(bad()),
        };
        let end = body.find(['+', '-']).unwrap_or(body.len());
        let term = &body[..end];
        rest = &body[end..];
        if term.is_empty() {
            return Err(bad());
        }
        let (coef, exp) = match term.find('x') {
            None => (term.parse::<i64>().map_err(|_| bad())?, 0usize),
            Some(pos) => {
                let c = term[..pos].trim_end_matches('*');
                let coef = if c.is_empty() {
                    1
                } else {
                    c.parse::<i64>().map_err(|_| bad())?
                };
                let e = &term[pos + 1..];
                let exp = if e.is_empty() {
                    1
                } else {
                    e.strip_prefix('^')
                        .ok_or_else(bad)?
                        .parse::<usize>()
                        .map_err(|_| bad())?
                };
                (coef, exp)
            }
        };
        terms.push((sign * coef, exp));
    }
    let deg = terms.iter().map(|t| t.1).max().unwrap_or(0);
    let mut acc = vec![0i64; deg + 1];
    for (c, e) in terms {
        acc[e] += c;
    }
    Ok(acc.into_iter().map(reduce).collect())
}

/// Descending-degree text form with coefficients in `[0, p)`, e.g.
/// `x^4 + 2x^3 + 2`.
pub fn format_polynomial(coeffs: &[u32]) -> String {
    let mut parts = Vec::new();
    for (e, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let coef = if c == 1 && e > 0 {
            String::new()
        } else {
            c.to_string()
        };
        let var = match e {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{e}"),
        };
        parts.push(format!("{coef}{var}"));
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}
