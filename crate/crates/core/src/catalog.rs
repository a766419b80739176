//! The twelve worked examples with their stated parameters and weight
//! enumerators.

use std::sync::Arc;

use serde::Serialize;

use crate::dsl::{instantiate, parse_function, parse_set, DslError};
use crate::field::poly::{format_polynomial, irreducibles, parse_polynomial};
use crate::field::{FieldCtx, FieldError};
use crate::pipeline::{construct, ConstructReport};
use crate::verify::TableId;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ExamplePart {
    pub label: &'static str,
    pub set: &'static str,
    pub table: TableId,
    pub params: &'static str,
    pub enumerator: &'static str,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ExampleSpec {
    pub id: &'static str,
    pub p: u32,
    pub m: u32,
    pub modulus: Option<&'static str>,
    pub function: &'static str,
    pub parts: &'static [ExamplePart],
}

const fn part(
    label: &'static str,
    set: &'static str,
    table: TableId,
    params: &'static str,
    enumerator: &'static str,
) -> ExamplePart {
    ExamplePart {
        label,
        set,
        table,
        params,
        enumerator,
    }
}

pub const EXAMPLES: [ExampleSpec; 12] = [
    ExampleSpec {
        id: "2.4",
        p: 3,
        m: 4,
        modulus: None,
        function: "quarter lambda=1",
        parts: &[
            part("i", "Db b=0", TableId::T1, "[40, 4, 24]", "1 + 40z^24 + 40z^30"),
            part("ii", "Db b=1", TableId::T2, "[20, 4, 12]", "1 + 60z^12 + 20z^18"),
        ],
    },
    ExampleSpec {
        id: "2.5",
        p: 3,
        m: 10,
        modulus: None,
        function: "quarter lambda=1",
        parts: &[
            part("i", "Db b=0", TableId::T1, "[29524, 10, 19602]", "1 + 29524z^19602 + 29524z^19764"),
            part("ii", "Db b=1", TableId::T3, "[14762, 10, 9720]", "1 + 14762z^9720 + 44286z^9882"),
        ],
    },
    ExampleSpec {
        id: "2.8",
        p: 3,
        m: 4,
        modulus: None,
        function: "quadprod lambda=1 u=-1 v=1",
        parts: &[part("", "Db b=0", TableId::T4, "[26, 4, 12]", "1 + 12z^12 + 62z^18 + 6z^24")],
    },
    ExampleSpec {
        id: "2.9",
        p: 3,
        m: 5,
        modulus: None,
        function: "quadprod lambda=-1 u=-1 v=1",
        parts: &[part("", "Db b=0", TableId::T5, "[62, 5, 36]", "1 + 60z^36 + 162z^42 + 20z^54")],
    },
    ExampleSpec {
        id: "2.12",
        p: 3,
        m: 4,
        modulus: Some("x^4-x^3-1"),
        function: "quadprod lambda=a u=a^16 v=a^8",
        parts: &[part("", "Db b=0", TableId::T6, "[44, 4, 18]", "1 + 4z^18 + 72z^30 + 4z^36")],
    },
    ExampleSpec {
        id: "2.13",
        p: 3,
        m: 7,
        modulus: Some("x^7+2x^2+1"),
        function: "quadprod lambda=a u=a v=a^17",
        parts: &[part("", "Db b=0", TableId::T7, "[728, 7, 432]", "1 + 90z^432 + 2024z^486 + 72z^540")],
    },
    ExampleSpec {
        id: "2.15",
        p: 3,
        m: 4,
        modulus: None,
        function: "quadprod lambda=1 u=-1 v=1",
        parts: &[part("", "halfset", TableId::T8, "[13, 4, 6]", "1 + 12z^6 + 62z^9 + 6z^12")],
    },
    ExampleSpec {
        id: "2.16",
        p: 3,
        m: 5,
        modulus: None,
        function: "quadprod lambda=-1 u=-1 v=1",
        parts: &[part("", "halfset", TableId::T9, "[31, 5, 18]", "1 + 60z^18 + 162z^21 + 20z^27")],
    },
    ExampleSpec {
        id: "2.18",
        p: 3,
        m: 4,
        modulus: Some("x^4-x^3-1"),
        function: "quadprod lambda=a u=a^16 v=a^8",
        parts: &[part("", "halfset", TableId::T10, "[22, 4, 9]", "1 + 4z^9 + 72z^15 + 4z^18")],
    },
    ExampleSpec {
        id: "2.19",
        p: 3,
        m: 5,
        modulus: Some("x^5-x+1"),
        function: "quadprod lambda=a u=a v=a^4",
        parts: &[part("", "halfset", TableId::T11, "[40, 5, 18]", "1 + 12z^18 + 224z^27 + 6z^36")],
    },
    ExampleSpec {
        id: "3.7",
        p: 3,
        m: 8,
        modulus: None,
        function: "gold lambda=1 h=2",
        parts: &[part("", "gold", TableId::T13, "[1700, 8, 972]", "1 + 60z^972 + 6480z^1134 + 20z^1458")],
    },
    ExampleSpec {
        id: "3.8",
        p: 5,
        m: 6,
        modulus: Some("x^6+x^4-x^3+x^2+2"),
        function: "gold lambda=a^3 h=1",
        parts: &[part("", "gold", TableId::T12, "[3624, 6, 2500]", "1 + 144z^2500 + 15000z^2900 + 480z^3000")],
    },
];

pub fn find_example(id: &str) -> Option<&'static ExampleSpec> {
    EXAMPLES.iter().find(|e| e.id == id.trim())
}

#[derive(Debug, Clone, Serialize)]
pub struct PartOutcome {
    pub label: &'static str,
    pub table: TableId,
    pub expected_params: &'static str,
    pub expected_enumerator: &'static str,
    pub got_params: Option<String>,
    pub got_enumerator: Option<String>,
    pub matched: bool,
    pub report: ConstructReport,
    /// Enumerator under a second modulus, for examples with none stated.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cross_modulus: Option<CrossModulus>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossModulus {
    pub modulus: String,
    pub enumerator: Option<String>,
    pub matched: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExampleOutcome {
    pub id: &'static str,
    pub p: u32,
    pub m: u32,
    pub modulus: String,
    pub function: &'static str,
    pub parts: Vec<PartOutcome>,
}

impl ExampleOutcome {
    pub fn matched(&self) -> bool {
        self.parts
            .iter()
            .all(|p| p.matched && p.cross_modulus.as_ref().is_none_or(|c| c.matched))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ExampleError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Dsl(#[from] DslError),
    #[error(transparent)]
    Code(#[from] crate::code::CodeError),
}

fn context(spec: &ExampleSpec, modulus: Option<&[u32]>) -> Result<Arc<FieldCtx>, ExampleError> {
    Ok(Arc::new(FieldCtx::new(spec.p, spec.m, modulus)?))
}

fn run_part(ctx: &Arc<FieldCtx>, spec: &ExampleSpec, part: &ExamplePart, check_direct: bool) -> Result<ConstructReport, ExampleError> {
    let desc = parse_function(ctx, spec.function)?;
    let f = instantiate(ctx.clone(), &desc)?;
    Ok(construct(&f, parse_set(part.set)?, check_direct)?)
}

/// Runs every part of an example; with `cross_modulus`, examples without a
/// stated modulus are repeated under the next irreducible polynomial.
pub fn run_example(spec: &ExampleSpec, cross_modulus: bool, check_direct: bool) -> Result<ExampleOutcome, ExampleError> {
    let stated = spec.modulus.map(|s| parse_polynomial(s, spec.p)).transpose()?;
    let ctx = context(spec, stated.as_deref())?;
    let other = if cross_modulus && spec.modulus.is_none() {
        let second = irreducibles(spec.p, spec.m)
            .find(|f| f.as_slice() != ctx.modulus())
            .expect("more than one irreducible of each degree");
        Some(context(spec, Some(&second))?)
    } else {
        None
    };
    let mut parts = Vec::new();
    for part in spec.parts {
        let report = run_part(&ctx, spec, part, check_direct)?;
        let got_enumerator = report.enumerator.clone();
        let got_params = report.params.clone();
        let matched = got_enumerator.as_deref() == Some(part.enumerator)
            && got_params.as_deref() == Some(part.params)
            && report.ok();
        let cross = match &other {
            Some(c2) => {
                let r2 = run_part(c2, spec, part, false)?;
                Some(CrossModulus {
                    modulus: format_polynomial(c2.modulus()),
                    matched: r2.enumerator.as_deref() == Some(part.enumerator),
                    enumerator: r2.enumerator,
                })
            }
            None => None,
        };
        parts.push(PartOutcome {
            label: part.label,
            table: part.table,
            expected_params: part.params,
            expected_enumerator: part.enumerator,
            got_params,
            got_enumerator,
            matched,
            report,
            cross_modulus: cross,
        });
    }
    Ok(ExampleOutcome {
        id: spec.id,
        p: spec.p,
        m: spec.m,
        modulus: format_polynomial(ctx.modulus()),
        function: spec.function,
        parts,
    })
}
