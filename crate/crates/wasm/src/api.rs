//! The demo operations as ordinary Rust, so they can be tested natively.

use std::sync::Arc;

use fewweight::catalog::{self, EXAMPLES};
use fewweight::dsl::{instantiate, parse_function_with, parse_set, DslError};
use fewweight::field::poly::{format_polynomial, parse_polynomial};
use fewweight::field::{FieldCtx, FieldError};
use fewweight::pipeline::{analyze_spectrum, default_selector};
use fewweight::walsh::PFunction;
use serde_json::json;

/// Fields above this size are refused; the page runs on one thread.
pub const BROWSER_SIZE_CAP: u64 = 200_000;

#[derive(Debug, thiserror::Error)]
pub enum DemoError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Dsl(#[from] DslError),
    #[error(transparent)]
    Code(#[from] fewweight::code::CodeError),
    #[error(transparent)]
    Example(#[from] catalog::ExampleError),
    #[error("unknown example '{0}'")]
    UnknownExample(String),
}

fn function(p: u32, m: u32, modulus: &str, text: &str) -> Result<PFunction, DemoError> {
    let modulus = match modulus.trim() {
        "" => None,
        s => Some(parse_polynomial(s, p)?),
    };
    let ctx = Arc::new(FieldCtx::with_cap(p, m, modulus.as_deref(), BROWSER_SIZE_CAP)?);
    let desc = parse_function_with(&ctx, text, |path| {
        Err(DslError::Io {
            path: path.into(),
            msg: "files are not available in the browser".into(),
        })
    })?;
    Ok(instantiate(ctx, &desc)?)
}

fn to_string<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("reports serialize")
}

pub fn spectrum(p: u32, m: u32, modulus: &str, text: &str) -> Result<String, DemoError> {
    let f = function(p, m, modulus, text)?;
    let report = analyze_spectrum(&f);
    Ok(to_string(&json!({
        "modulus": format_polynomial(f.ctx().modulus()),
        "ok": report.ok(),
        "report": report,
    })))
}

pub fn construct(p: u32, m: u32, modulus: &str, text: &str, set: &str) -> Result<String, DemoError> {
    let f = function(p, m, modulus, text)?;
    let sel = match set.trim() {
        "" => default_selector(&f),
        s => parse_set(s)?,
    };
    let report = fewweight::pipeline::construct(&f, sel, false)?;
    Ok(to_string(&json!({
        "modulus": format_polynomial(f.ctx().modulus()),
        "ok": report.ok(),
        "report": report,
    })))
}

pub fn list_examples() -> String {
    to_string(&EXAMPLES)
}

pub fn run_example(id: &str) -> Result<String, DemoError> {
    let spec = catalog::find_example(id).ok_or_else(|| DemoError::UnknownExample(id.into()))?;
    let out = catalog::run_example(spec, false, false)?;
    Ok(to_string(&json!({ "matched": out.matched(), "outcome": out })))
}
