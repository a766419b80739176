//! Text forms for field elements, functions and defining-set selectors.
//!
//! Element literals: an integer (`-1`, `2`) for a prime-field value, `a^k`
//! (or `a`) for a power of the context generator, `x^k` for a power of the
//! modulus root, or a coefficient list `[c0, c1, ...]`.
//!
//! Functions: `zero`, `linear c=<el>`, `monomial lambda=<el> e=<int>`,
//! `quarter lambda=<el>` (alias `monomial24`), `quadprod lambda=<el> u=<el>
//! v=<el>`, `gold lambda=<el> h=<int>`, `table file=<path>`.
//!
//! Defining sets: `Db b=<int>`, `gold`, `halfset [b=<int>]`.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::field::{Fe, FieldCtx, FieldError, PrimeScalar};
use crate::walsh::{tabulate, FunctionSpec, PFunction, WalshError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("cannot parse element literal '{0}'")]
    BadElement(String),
    #[error("unknown function '{0}'")]
    UnknownFunction(String),
    #[error("unknown defining set '{0}'")]
    UnknownSet(String),
    #[error("missing parameter '{0}'")]
    Missing(&'static str),
    #[error("unexpected parameter '{0}'")]
    Unexpected(String),
    #[error("bad value for '{key}': {value}")]
    BadValue { key: String, value: String },
    #[error("cannot read table file {path}: {msg}")]
    Io { path: String, msg: String },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Walsh(#[from] WalshError),
}

pub fn parse_element(ctx: &FieldCtx, text: &str) -> Result<Fe, DslError> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || DslError::BadElement(text.to_string());
    if let Ok(v) = s.parse::<i64>() {
        return Ok(ctx.from_int(v));
    }
    if let Some(inner) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
        let coeffs = inner
            .split(',')
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<i64>().map(|v| v.rem_euclid(ctx.p() as i64) as u32))
            .collect::<Result<Vec<u32>, _>>()
            .map_err(|_| bad())?;
        let mut padded = coeffs;
        if padded.len() > ctx.m() as usize {
            return Err(bad());
        }
        padded.resize(ctx.m() as usize, 0);
        return Ok(ctx.from_coeffs(&padded)?);
    }
    let (base, exp) = match s.split_once('^') {
        Some((b, e)) => (b, e.parse::<i64>().map_err(|_| bad())?),
        None => (s.as_str(), 1),
    };
    match base {
        "a" | "alpha" | "g" => Ok(ctx.gen_pow(exp)),
        "x" => {
            let x = ctx.x();
            if exp >= 0 {
                Ok(ctx.pow(x, exp as u64))
            } else {
                Ok(ctx.pow(ctx.inv(x)?, exp.unsigned_abs()))
            }
        }
        _ => Err(bad()),
    }
}

/// Splits `name k1=v1 k2=v2` into the name and its arguments.
fn split_args(text: &str) -> Result<(String, BTreeMap<String, String>), DslError> {
    let mut parts = text.split_whitespace();
    let name = parts.next().unwrap_or("").to_ascii_lowercase();
    let mut args = BTreeMap::new();
    for part in parts {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| DslError::Unexpected(part.to_string()))?;
        args.insert(k.to_ascii_lowercase(), v.to_string());
    }
    Ok((name, args))
}

struct Args(BTreeMap<String, String>);

impl Args {
    fn take(&mut self, key: &'static str) -> Result<String, DslError> {
        self.0.remove(key).ok_or(DslError::Missing(key))
    }

    fn element(&mut self, ctx: &FieldCtx, key: &'static str) -> Result<Fe, DslError> {
        parse_element(ctx, &self.take(key)?)
    }

    fn int<T: std::str::FromStr>(&mut self, key: &'static str) -> Result<T, DslError> {
        let v = self.take(key)?;
        v.parse().map_err(|_| DslError::BadValue {
            key: key.to_string(),
            value: v,
        })
    }

    fn finish(self) -> Result<(), DslError> {
        match self.0.into_keys().next() {
            Some(k) => Err(DslError::Unexpected(k)),
            None => Ok(()),
        }
    }
}

/// A parsed function description. Tables are kept as raw values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FunctionDesc {
    Spec(FunctionSpec),
    Table(Vec<PrimeScalar>),
}

/// Parses a function description; `table file=...` is read through `load`.
pub fn parse_function_with(
    ctx: &FieldCtx,
    text: &str,
    load: impl FnOnce(&str) -> Result<String, DslError>,
) -> Result<FunctionDesc, DslError> {
    let (name, args) = split_args(text)?;
    let mut args = Args(args);
    let spec = match name.as_str() {
        "zero" => FunctionSpec::Zero,
        "linear" => FunctionSpec::Linear {
            c: args.element(ctx, "c")?,
        },
        "monomial" => FunctionSpec::Monomial {
            lambda: args.element(ctx, "lambda")?,
            exponent: args.int("e")?,
        },
        "quarter" | "monomial24" => FunctionSpec::MonomialQuarter {
            lambda: args.element(ctx, "lambda")?,
        },
        "quadprod" => FunctionSpec::QuadProduct {
            lambda: args.element(ctx, "lambda")?,
            u: args.element(ctx, "u")?,
            v: args.element(ctx, "v")?,
        },
        "gold" => FunctionSpec::Gold {
            lambda: args.element(ctx, "lambda")?,
            h: args.int("h")?,
        },
        "table" => {
            let path = args.take("file")?;
            args.finish()?;
            let content = load(&path)?;
            return Ok(FunctionDesc::Table(parse_table(ctx, &content)?));
        }
        other => return Err(DslError::UnknownFunction(other.to_string())),
    };
    args.finish()?;
    Ok(FunctionDesc::Spec(spec))
}

/// Parses a function description, reading table files from disk.
pub fn parse_function(ctx: &FieldCtx, text: &str) -> Result<FunctionDesc, DslError> {
    parse_function_with(ctx, text, |path| {
        std::fs::read_to_string(path).map_err(|e| DslError::Io {
            path: path.to_string(),
            msg: e.to_string(),
        })
    })
}

/// Table files list `f(x)` for every `x` in canonical order, separated by
/// whitespace or commas; `#` starts a comment.
pub fn parse_table(ctx: &FieldCtx, content: &str) -> Result<Vec<PrimeScalar>, DslError> {
    let mut out = Vec::with_capacity(ctx.size());
    for line in content.lines() {
        let line = line.split('#').next().unwrap_or("");
        for tok in line.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
            let v: i64 = tok.parse().map_err(|_| DslError::BadValue {
                key: "table".into(),
                value: tok.to_string(),
            })?;
            out.push(v.rem_euclid(ctx.p() as i64) as u32);
        }
    }
    Ok(out)
}

/// Evaluates a description into a value table.
pub fn instantiate(ctx: Arc<FieldCtx>, desc: &FunctionDesc) -> Result<PFunction, DslError> {
    Ok(match desc {
        FunctionDesc::Spec(s) => tabulate(s, ctx)?,
        FunctionDesc::Table(t) => PFunction::from_table(ctx, t.clone())?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetSelector {
    Db(PrimeScalar),
    Gold,
    HalfSet(PrimeScalar),
}

pub fn parse_set(text: &str) -> Result<SetSelector, DslError> {
    let (name, args) = split_args(text)?;
    let mut args = Args(args);
    let b = |args: &mut Args| -> Result<PrimeScalar, DslError> {
        if args.0.contains_key("b") {
            args.int("b")
        } else {
            Ok(0)
        }
    };
    let sel = match name.as_str() {
        "db" => SetSelector::Db(b(&mut args)?),
        "gold" => SetSelector::Gold,
        "halfset" | "half" => SetSelector::HalfSet(b(&mut args)?),
        other => return Err(DslError::UnknownSet(other.to_string())),
    };
    args.finish()?;
    Ok(sel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::poly::parse_polynomial;

    fn f81() -> FieldCtx {
        FieldCtx::new(3, 4, Some(&parse_polynomial("x^4-x^3-1", 3).unwrap())).unwrap()
    }

    #[test]
    fn element_literals() {
        let c = f81();
        assert_eq!(parse_element(&c, "-1").unwrap(), c.from_int(2));
        assert_eq!(parse_element(&c, "a^16").unwrap(), c.gen_pow(16));
        assert_eq!(parse_element(&c, "a").unwrap(), c.generator());
        assert_eq!(parse_element(&c, "x^3").unwrap(), c.from_coeffs(&[0, 0, 0, 1]).unwrap());
        assert_eq!(parse_element(&c, "[1, 2]").unwrap(), c.from_coeffs(&[1, 2, 0, 0]).unwrap());
        assert_eq!(parse_element(&c, "a^-1").unwrap(), c.inv(c.generator()).unwrap());
        assert!(parse_element(&c, "b^2").is_err());
        assert!(parse_element(&c, "[1,2,3,4,5]").is_err());
    }

    #[test]
    fn function_descriptions() {
        let c = f81();
        assert_eq!(
            parse_function(&c, "quadprod lambda=a u=a^16 v=a^8").unwrap(),
            FunctionDesc::Spec(FunctionSpec::QuadProduct {
                lambda: c.gen_pow(1),
                u: c.gen_pow(16),
                v: c.gen_pow(8)
            })
        );
        assert_eq!(
            parse_function(&c, "monomial24 lambda=1").unwrap(),
            FunctionDesc::Spec(FunctionSpec::MonomialQuarter { lambda: Fe::ONE })
        );
        assert_eq!(parse_function(&c, "gold lambda=1"), Err(DslError::Missing("h")));
        assert!(matches!(
            parse_function(&c, "gold lambda=1 h=1 q=2"),
            Err(DslError::Unexpected(_))
        ));
        assert!(matches!(parse_function(&c, "sin"), Err(DslError::UnknownFunction(_))));
    }

    #[test]
    fn table_through_loader() {
        let c = FieldCtx::new(3, 2, None).unwrap();
        let d = parse_function_with(&c, "table file=t.txt", |_| Ok("0 1 2 # row\n0,1,2\n0 1 -1".into())).unwrap();
        assert_eq!(d, FunctionDesc::Table(vec![0, 1, 2, 0, 1, 2, 0, 1, 2]));
        assert!(instantiate(Arc::new(c), &d).is_ok());
    }

    #[test]
    fn set_selectors() {
        assert_eq!(parse_set("Db b=1").unwrap(), SetSelector::Db(1));
        assert_eq!(parse_set("Db").unwrap(), SetSelector::Db(0));
        assert_eq!(parse_set("halfset").unwrap(), SetSelector::HalfSet(0));
        assert_eq!(parse_set("gold").unwrap(), SetSelector::Gold);
        assert!(parse_set("all").is_err());
    }
}
