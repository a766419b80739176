//! End-to-end construction of one code from a function and a defining-set
//! selector, with the checks reported alongside.

use std::sync::Arc;

use serde::Serialize;

use crate::code::{
    build_code_direct, build_code_via_walsh, build_gold_code_via_weil, defining_set_db, defining_set_gold,
    dual_a2, griesmer_max_d, half_set, pless_check, CodeError, CodeSummary, DefiningSet,
};
use crate::dsl::SetSelector;
use crate::families::{
    check_gold, check_monomial_admissible, check_quadproduct_case, predicted_quarter_distribution,
    predicted_quadprod_walsh, QuadCase, WeilClosedForm,
};
use crate::field::{Fe, FieldCtx};
use crate::walsh::{classify, parseval_check, spectrum_distribution, walsh_full, FunctionSpec, PFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Walsh,
    Weil,
    Direct,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstructReport {
    pub set: String,
    pub set_size: usize,
    pub method: Method,
    /// `None` when the defining set is empty.
    pub summary: Option<CodeSummary>,
    pub params: Option<String>,
    pub enumerator: Option<String>,
    pub griesmer_max_d: Option<u64>,
    pub griesmer_optimal: Option<bool>,
    pub a2_dual: u64,
    pub pless: Result<(), String>,
    /// Agreement with direct enumeration, when requested.
    pub direct_match: Option<bool>,
}

impl ConstructReport {
    /// Every performed check passed and a code exists.
    pub fn ok(&self) -> bool {
        self.summary.is_some() && self.pless.is_ok() && self.direct_match != Some(false)
    }
}

/// The selector used when none is given: `gold` for Gold functions,
/// `Db b=0` otherwise.
pub fn default_selector(f: &PFunction) -> SetSelector {
    match f.spec() {
        FunctionSpec::Gold { .. } => SetSelector::Gold,
        _ => SetSelector::Db(0),
    }
}

fn describe(sel: SetSelector) -> String {
    match sel {
        SetSelector::Db(b) => format!("Db b={b}"),
        SetSelector::Gold => "gold".into(),
        SetSelector::HalfSet(b) => format!("halfset of Db b={b}"),
    }
}

fn walsh_applicable(f: &PFunction) -> bool {
    f.ctx().p() == 3 && f.is_even() && f.eval(Fe::ZERO) == 0
}

pub fn construct(f: &PFunction, sel: SetSelector, check_direct: bool) -> Result<ConstructReport, CodeError> {
    let ctx: &Arc<FieldCtx> = f.ctx();
    let (set, fast): (DefiningSet, Option<(Method, Result<CodeSummary, CodeError>)>) = match sel {
        SetSelector::Db(b) => {
            let d = defining_set_db(f, b % ctx.p());
            let fast = walsh_applicable(f).then(|| (Method::Walsh, build_code_via_walsh(f, b)));
            (d, fast)
        }
        SetSelector::HalfSet(b) => {
            let d = half_set(&defining_set_db(f, b % ctx.p()))?;
            let fast = walsh_applicable(f)
                .then(|| (Method::Walsh, build_code_via_walsh(f, b).map(|c| c.halved())));
            (d, fast)
        }
        SetSelector::Gold => {
            let FunctionSpec::Gold { lambda, h } = *f.spec() else {
                return Err(CodeError::NotGold);
            };
            let d = defining_set_gold(ctx.clone(), lambda, h);
            let admissible = check_gold(ctx, lambda, h).map(|s| s.admissible).unwrap_or(false);
            let fast = admissible.then(|| (Method::Weil, build_gold_code_via_weil(ctx, lambda, h)));
            (d, fast)
        }
    };
    let a2 = dual_a2(&set);
    let mut report = ConstructReport {
        set: describe(sel),
        set_size: set.len(),
        method: Method::Direct,
        summary: None,
        params: None,
        enumerator: None,
        griesmer_max_d: None,
        griesmer_optimal: None,
        a2_dual: a2,
        pless: Err("no code".into()),
        direct_match: None,
    };
    if set.is_empty() {
        return Ok(report);
    }
    let (method, summary) = match fast {
        Some((m, r)) => (m, r?),
        None => (Method::Direct, build_code_direct(&set)?),
    };
    if check_direct {
        let direct = if method == Method::Direct {
            summary.clone()
        } else {
            build_code_direct(&set)?
        };
        report.direct_match = Some(direct == summary);
    }
    let gm = griesmer_max_d(summary.n, summary.dim, summary.p);
    report.method = method;
    report.params = Some(summary.params());
    report.enumerator = Some(summary.enumerator().to_string());
    report.griesmer_max_d = Some(gm);
    report.griesmer_optimal = summary.min_distance().map(|d| d == gm);
    report.pless = pless_check(&summary, a2).map_err(|e| e.to_string());
    report.summary = Some(summary);
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct ValueCount {
    pub value: String,
    pub coeffs: Vec<i64>,
    /// Position in the complex plane, for display only.
    pub re: f64,
    pub im: f64,
    pub count: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PredictionCheck {
    pub family: &'static str,
    /// Closed form available for these parameters.
    pub applicable: bool,
    pub matched: bool,
    /// Points (or distinct values) where prediction and computation differ.
    pub mismatches: usize,
    pub note: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub p: u32,
    pub m: u32,
    pub even: bool,
    pub distribution: Vec<ValueCount>,
    pub classification: String,
    pub plateau_order: Option<u32>,
    pub parseval: bool,
    pub prediction: Option<PredictionCheck>,
}

impl SpectrumReport {
    pub fn ok(&self) -> bool {
        self.parseval && self.prediction.as_ref().is_none_or(|c| !c.applicable || c.matched)
    }
}

fn not_applicable(family: &'static str, note: String) -> PredictionCheck {
    PredictionCheck {
        family,
        applicable: false,
        matched: false,
        mismatches: 0,
        note,
    }
}

/// Full spectrum, its classification, Parseval, and the family's closed form
/// when one applies.
pub fn analyze_spectrum(f: &PFunction) -> SpectrumReport {
    let ctx = f.ctx();
    let spectrum = walsh_full(f);
    let dist = spectrum_distribution(&spectrum);
    let class = classify(&spectrum);
    let pointwise = |family: &'static str, pred: &dyn Fn(Fe) -> Option<crate::cyclotomic::CycInt>| {
        let bad = ctx
            .elements()
            .filter(|&a| pred(a).as_ref() != Some(spectrum.at(a)))
            .count();
        PredictionCheck {
            family,
            applicable: true,
            matched: bad == 0,
            mismatches: bad,
            note: "pointwise comparison at every a".into(),
        }
    };
    let prediction = match *f.spec() {
        FunctionSpec::MonomialQuarter { lambda } => Some(match check_monomial_admissible(ctx, lambda) {
            Ok(spec) if spec.admissible => {
                let pred = predicted_quarter_distribution(&spec).expect("admissible");
                let bad = pred
                    .keys()
                    .chain(dist.keys())
                    .collect::<std::collections::BTreeSet<_>>()
                    .into_iter()
                    .filter(|v| pred.get(*v) != dist.get(*v))
                    .count();
                PredictionCheck {
                    family: "quarter",
                    applicable: true,
                    matched: bad == 0,
                    mismatches: bad,
                    note: "four-value distribution".into(),
                }
            }
            Ok(_) => not_applicable("quarter", "Tr_2^m(lambda) is not a square of F_9^*".into()),
            Err(e) => not_applicable("quarter", e.to_string()),
        }),
        FunctionSpec::QuadProduct { lambda, u, v } => Some(match check_quadproduct_case(ctx, lambda, u, v) {
            Ok(spec) if spec.case != QuadCase::Other => {
                let mut check = pointwise("quadprod", &|a| predicted_quadprod_walsh(ctx, &spec, a).ok());
                check.note = format!("case {:?}, eta(lambda) = {}", spec.case, spec.eta_lambda);
                check
            }
            Ok(_) => not_applicable("quadprod", "trace conditions match neither case".into()),
            Err(e) => not_applicable("quadprod", e.to_string()),
        }),
        FunctionSpec::Gold { lambda, h } => Some(match WeilClosedForm::new(ctx, lambda, h) {
            Ok(w) => {
                let mut check = pointwise("gold", &|a| w.sum(ctx.neg(a)).ok());
                check.note = format!("W(a) = S_h(lambda, -a), d = {}", w.spec().d);
                check
            }
            Err(e) => not_applicable("gold", e.to_string()),
        }),
        _ => None,
    };
    SpectrumReport {
        p: ctx.p(),
        m: ctx.m(),
        even: f.is_even(),
        distribution: dist
            .iter()
            .map(|(v, &count)| {
                let (re, im) = v.approx();
                ValueCount {
                    value: v.to_string(),
                    coeffs: v.coeffs().to_vec(),
                    re,
                    im,
                    count,
                }
            })
            .collect(),
        classification: class.to_string(),
        plateau_order: class.order(),
        parseval: parseval_check(&spectrum),
        prediction,
    }
}
