//! `fewweight`: construct few-weight codes, inspect Walsh spectra and check
//! closed-form weight distributions.
//!
//! Exit status: 0 when every requested check matched, 1 on a verification
//! mismatch, 2 on a configuration error.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use fewweight::catalog::{find_example, run_example, ExampleOutcome, EXAMPLES};
use fewweight::dsl::{instantiate, parse_function, parse_set};
use fewweight::field::poly::{format_polynomial, parse_polynomial};
use fewweight::field::{FieldCtx, DEFAULT_SIZE_CAP};
use fewweight::pipeline::{analyze_spectrum, construct, default_selector};
use fewweight::verify::{sweep, SamplerConfig, SweepReport, TableId};

#[derive(Parser)]
#[command(name = "fewweight", version, about = "Few-weight linear codes from functions with low Walsh spectrum")]
struct Cli {
    /// Also write the report as JSON to this path.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = "FEWWEIGHT_JOBS")]
    jobs: Option<usize>,
    /// Largest field size accepted.
    #[arg(long, global = true, default_value_t = DEFAULT_SIZE_CAP)]
    size_cap: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct FieldArgs {
    /// Characteristic (odd prime).
    #[arg(short, default_value_t = 3)]
    p: u32,
    /// Extension degree.
    #[arg(short)]
    m: u32,
    /// Defining polynomial, e.g. "x^4-x^3-1"; defaults to the smallest
    /// irreducible.
    #[arg(long)]
    modulus: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Show the modulus, generator and subfields of F_{p^m}.
    FieldInfo(FieldArgs),
    /// Walsh spectrum distribution and classification of a function.
    Spectrum {
        #[command(flatten)]
        field: FieldArgs,
        /// Function, e.g. "quarter lambda=1" or "quadprod lambda=-1 u=-1 v=1".
        #[arg(long = "fn", value_name = "SPEC")]
        function: String,
    },
    /// Build the code of a defining set and report its weight distribution.
    Construct {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long = "fn", value_name = "SPEC")]
        function: String,
        /// "Db b=<b>", "gold" or "halfset"; defaults to gold for gold
        /// functions and "Db b=0" otherwise.
        #[arg(long)]
        set: Option<String>,
        /// Cross-check against enumeration of every codeword.
        #[arg(long)]
        check_direct: bool,
    },
    /// Sweep parameters of one table and compare predicted and computed codes.
    Verify {
        /// T1 .. T13.
        #[arg(long)]
        table: String,
        #[command(flatten)]
        field: FieldArgs,
        /// Every admissible parameter choice.
        #[arg(long)]
        exhaustive: bool,
        /// Number of sampled parameter choices.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        /// Gold exponent h (default: every h with 1 <= h < m/2).
        #[arg(long)]
        h: Option<u32>,
    },
    /// Reproduce the worked examples.
    Examples {
        /// Run one example, e.g. "2.13".
        #[arg(long)]
        only: Option<String>,
        /// Repeat examples without a stated modulus under a second modulus.
        #[arg(long)]
        cross_modulus: bool,
        #[arg(long)]
        check_direct: bool,
    },
}

/// A configuration error; reported with exit status 2.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

struct Output {
    ok: bool,
    json: Value,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match &cli.command {
        Command::FieldInfo(f) => field_info(&cli, f),
        Command::Spectrum { field, function } => spectrum(&cli, field, function),
        Command::Construct {
            field,
            function,
            set,
            check_direct,
        } => construct_cmd(&cli, field, function, set.as_deref(), *check_direct),
        Command::Verify {
            table,
            field,
            exhaustive,
            samples,
            seed,
            h,
        } => verify_cmd(
            &cli,
            table,
            field,
            SamplerConfig {
                exhaustive: *exhaustive,
                samples: *samples,
                seed: *seed,
                h: *h,
            },
        ),
        Command::Examples {
            only,
            cross_modulus,
            check_direct,
        } => examples(only.as_deref(), *cross_modulus, *check_direct),
    };
    let out = match result {
        Ok(out) => out,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    if let Some(path) = &cli.json {
        let text = serde_json::to_string_pretty(&out.json).expect("reports serialize");
        if let Err(e) = std::fs::write(path, text + "\n") {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if out.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn context(cli: &Cli, f: &FieldArgs) -> Result<Arc<FieldCtx>, Failure> {
    let modulus = f.modulus.as_deref().map(|s| parse_polynomial(s, f.p)).transpose()?;
    Ok(Arc::new(FieldCtx::with_cap(f.p, f.m, modulus.as_deref(), cli.size_cap)?))
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn field_info(cli: &Cli, f: &FieldArgs) -> Result<Output, Failure> {
    let ctx = context(cli, f)?;
    let g = ctx.generator();
    let modulus = format_polynomial(ctx.modulus());
    let generator = format_polynomial(&ctx.coeffs(g));
    let subfields = ctx.subfield_degrees();
    println!("field      F_{}^{} ({} elements)", ctx.p(), ctx.m(), ctx.size());
    println!("modulus    {modulus}");
    println!("generator  {generator} (index {})", g.index());
    println!(
        "subfields  {}",
        subfields
            .iter()
            .map(|d| format!("F_{}^{d}", ctx.p()))
            .collect::<Vec<_>>()
            .join(", ")
    );
    println!("log tables {}", if ctx.has_tables() { "yes" } else { "no" });
    Ok(Output {
        ok: true,
        json: json!({
            "p": ctx.p(),
            "m": ctx.m(),
            "size": ctx.size(),
            "modulus": modulus,
            "modulus_coeffs": ctx.modulus(),
            "generator": generator,
            "generator_index": g.index(),
            "subfield_degrees": subfields,
        }),
    })
}

fn spectrum(cli: &Cli, f: &FieldArgs, function: &str) -> Result<Output, Failure> {
    let ctx = context(cli, f)?;
    let func = instantiate(ctx.clone(), &parse_function(&ctx, function)?)?;
    let report = analyze_spectrum(&func);
    println!("function       {function}");
    println!("even           {}", report.even);
    println!("classification {}", report.classification);
    println!("parseval       {}", if report.parseval { "ok" } else { "FAILED" });
    println!("distribution   ({} distinct values)", report.distribution.len());
    for v in &report.distribution {
        println!("  {:>24}  x{}", v.value, v.count);
    }
    if let Some(c) = &report.prediction {
        let status = match (c.applicable, c.matched) {
            (false, _) => "not applicable".to_string(),
            (true, true) => "match".to_string(),
            (true, false) => format!("MISMATCH at {} points", c.mismatches),
        };
        println!("closed form    {status} ({})", c.note);
    }
    Ok(Output {
        ok: report.ok(),
        json: to_json(&report),
    })
}

fn construct_cmd(
    cli: &Cli,
    f: &FieldArgs,
    function: &str,
    set: Option<&str>,
    check_direct: bool,
) -> Result<Output, Failure> {
    let ctx = context(cli, f)?;
    let func = instantiate(ctx.clone(), &parse_function(&ctx, function)?)?;
    let sel = match set {
        Some(s) => parse_set(s)?,
        None => default_selector(&func),
    };
    let report = construct(&func, sel, check_direct)?;
    println!("defining set {} ({} elements)", report.set, report.set_size);
    match (&report.params, &report.enumerator) {
        (Some(params), Some(en)) => {
            println!("code         {params}");
            println!("enumerator   {en}");
            let gm = report.griesmer_max_d.unwrap_or(0);
            if report.griesmer_optimal == Some(true) {
                println!("griesmer     optimal (max d = {gm})");
            } else {
                println!("griesmer     bound allows d = {gm}");
            }
            match &report.pless {
                Ok(()) => println!("pless        ok (A2 of dual = {})", report.a2_dual),
                Err(e) => println!("pless        FAILED: {e}"),
            }
            if let Some(m) = report.direct_match {
                println!("direct       {}", if m { "agrees" } else { "DISAGREES" });
            }
        }
        _ => println!("code         none: the defining set is empty, checks skipped"),
    }
    let ok = report.ok() || report.set_size == 0;
    Ok(Output {
        ok,
        json: to_json(&report),
    })
}

fn print_sweep(r: &SweepReport) {
    println!("{} p={} m={}: {}/{} matched", r.source, r.p, r.m, r.matched, r.total);
    for pred in &r.predictions {
        let printed: Vec<String> = pred.dist.iter().map(|(w, a)| format!("{a}z^{w}")).collect();
        println!("  prediction {:?}: n={} 1 + {}", pred.params, pred.n, printed.join(" + "));
        if !pred.pless_consistent() {
            match &pred.moment_solved {
                Some(ms) => println!("    printed multiplicities differ from moment-solved {ms:?}"),
                None => println!("    moment system has no integral solution"),
            }
        }
    }
    for c in &r.counterexamples {
        println!(
            "  counterexample {:?} {:?}: {}",
            c.instance,
            c.verdict,
            c.reason.clone().unwrap_or_default()
        );
        for d in &c.details {
            println!("    weight {}: expected {} got {}", d.weight, d.expected, d.got);
        }
    }
}

fn verify_cmd(cli: &Cli, table: &str, f: &FieldArgs, cfg: SamplerConfig) -> Result<Output, Failure> {
    let table: TableId = table.parse()?;
    let ctx = context(cli, f)?;
    let report = sweep(table, &ctx, &cfg);
    print_sweep(&report);
    if report.total == 0 {
        println!("  no admissible parameters for this table in F_{}^{}", ctx.p(), ctx.m());
    }
    Ok(Output {
        ok: report.passed(),
        json: json!({ "config": to_json(&cfg), "sweep": to_json(&report) }),
    })
}

fn print_example(o: &ExampleOutcome) {
    for part in &o.parts {
        let label = if part.label.is_empty() {
            o.id.to_string()
        } else {
            format!("{}({})", o.id, part.label)
        };
        println!(
            "{:<9} {:<20} {:<40} {}",
            label,
            part.got_params.as_deref().unwrap_or("-"),
            part.got_enumerator.as_deref().unwrap_or("-"),
            if part.matched { "match" } else { "MISMATCH" }
        );
        if !part.matched {
            println!("          expected {} {}", part.expected_params, part.expected_enumerator);
        }
        if let (Some(gm), Some(d)) = (
            part.report.griesmer_max_d,
            part.report.summary.as_ref().and_then(|s| s.min_distance()),
        ) {
            if d == gm {
                println!("          Griesmer-optimal");
            } else {
                println!("          Griesmer bound allows d = {gm}");
            }
        }
        if let Some(c) = &part.cross_modulus {
            println!(
                "          under {}: {}",
                c.modulus,
                if c.matched { "same enumerator" } else { "DIFFERENT enumerator" }
            );
        }
    }
}

fn examples(only: Option<&str>, cross: bool, check_direct: bool) -> Result<Output, Failure> {
    let specs: Vec<_> = match only {
        Some(id) => vec![find_example(id).ok_or_else(|| Failure(format!("unknown example '{id}'")))?],
        None => EXAMPLES.iter().collect(),
    };
    let mut outcomes = Vec::new();
    for spec in specs {
        let o = run_example(spec, cross, check_direct)?;
        print_example(&o);
        outcomes.push(o);
    }
    let matched = outcomes.iter().filter(|o| o.matched()).count();
    println!("{matched}/{} examples match", outcomes.len());
    Ok(Output {
        ok: matched == outcomes.len(),
        json: to_json(&outcomes),
    })
}
