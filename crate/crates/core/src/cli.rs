//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on usage or validation errors, 2 when a
//! `verify` comparison fails. Big integers are emitted as decimal strings in
//! JSON output.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use serde_json::{json, Map, Value};

use crate::code::{export, generator_matrix, CodeParams, Format};
use crate::counting::{rank_count, CountTable};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::oracle::{verify, Tier};
use crate::weights::{min_distance, min_weight_count, weight_report, weight_report_with, WeightCalculator};

#[derive(Debug, Parser)]
#[command(name = "skewcode", version, about = "Codes from skew-symmetric determinantal varieties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Field order: a prime `p` or a prime power `p^k`, p odd
    #[arg(long)]
    q: String,
    /// Matrix size
    #[arg(long)]
    m: usize,
    /// Rank bound 2t of the variety
    #[arg(long)]
    t: Option<usize>,
    /// Output format: plain, json or csv
    #[arg(long, default_value = "plain")]
    format: String,
    /// Print the field modulus and extra detail to stderr
    #[arg(long, short)]
    verbose: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rank counts, number of variety points and code length
    Counts(Common),
    /// Class weights, minimum distance and minimum-weight count
    Weights(Common),
    /// Minimum distance and number of minimum-weight codewords
    Mindist(Common),
    /// Weight enumerator of the projective code
    Spectrum(Common),
    /// Generator matrix
    Genmat {
        #[command(flatten)]
        common: Common,
        /// Output file (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive brute-force comparison of every formula
    Verify {
        #[command(flatten)]
        common: Common,
        /// Allow the slow tier enumeration budget
        #[arg(long)]
        slow: bool,
        /// Worker threads (0 = all cores)
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Seed for sampled checks
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Projective class weights for every t at fixed m
    Table(Common),
}

struct Ctx {
    field: FieldSpec,
    m: usize,
    t: Option<usize>,
    format: Format,
}

impl Ctx {
    fn from(common: &Common, err: &mut dyn Write) -> Result<Ctx> {
        let field = FieldSpec::parse(&common.q)?;
        let format = common.format.parse()?;
        if common.verbose {
            let _ = writeln!(err, "field GF({}) with modulus {}", field.order(), field.modulus_string());
        }
        Ok(Ctx { field, m: common.m, t: common.t, format })
    }

    fn q(&self) -> u64 {
        self.field.order() as u64
    }

    fn params(&self) -> Result<CodeParams> {
        let t = self.t.ok_or_else(|| Error::InvalidParams("--t is required".into()))?;
        CodeParams::new(self.field.clone(), self.m, t)
    }
}

fn big_map<K: ToString>(map: &BTreeMap<K, BigUint>) -> Value {
    Value::Object(map.iter().map(|(k, v)| (k.to_string(), Value::String(v.to_string()))).collect::<Map<_, _>>())
}

fn emit_json(out: &mut dyn Write, v: &Value) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string(v).expect("serializable"))?;
    Ok(())
}

fn counts(ctx: &Ctx, out: &mut dyn Write) -> Result<()> {
    let p = ctx.params()?;
    let table = CountTable::new(ctx.q(), p.m as u64, p.t as u64)?;
    match ctx.format {
        Format::Plain => {
            writeln!(out, "q = {}, m = {}, t = {}", table.q, table.m, table.t)?;
            for (r, n) in &table.rank_counts {
                writeln!(out, "n_a({r}) = {n}")?;
            }
            writeln!(out, "N_a = {}", table.cumulative)?;
            writeln!(out, "length = {}", table.length)?;
        }
        Format::Json => emit_json(
            out,
            &json!({
                "q": table.q, "m": table.m, "t": table.t,
                "n_a": big_map(&table.rank_counts),
                "N_a": table.cumulative.to_string(),
                "length": table.length.to_string(),
            }),
        )?,
        Format::Csv => {
            writeln!(out, "quantity,value")?;
            for (r, n) in &table.rank_counts {
                writeln!(out, "n_a({r}),{n}")?;
            }
            writeln!(out, "N_a,{}", table.cumulative)?;
            writeln!(out, "length,{}", table.length)?;
        }
    }
    Ok(())
}

fn weights(ctx: &Ctx, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let p = ctx.params()?;
    let (q, m) = (ctx.q(), p.m as i64);
    let r = weight_report(q, p.t as i64, m)?;
    let class_size = |k: u64| rank_count(q, 2 * k as i64, m);
    if !r.monotone {
        let _ = writeln!(err, "note: projective weights are not monotone in k");
    }
    match ctx.format {
        Format::Plain => {
            writeln!(out, "q = {}, m = {}, t = {}: length {}, dimension {}", q, m, p.t, p.length(), p.dimension())?;
            writeln!(out, "k rank affine_weight projective_weight codewords")?;
            for (k, w) in &r.affine_weights {
                writeln!(out, "{k} {} {w} {} {}", 2 * k, r.projective_weights[k], class_size(*k))?;
            }
            writeln!(out, "minimum distance: {}", r.min_distance)?;
            writeln!(out, "min-weight codewords: {} ({})", r.min_weight_count, r.min_weight_regime)?;
            writeln!(out, "distinct nonzero weights: {}", r.distinct_weight_count)?;
        }
        Format::Json => emit_json(
            out,
            &json!({
                "q": q, "m": m, "t": p.t,
                "length": p.length().to_string(),
                "dimension": p.dimension(),
                "affine_weights": big_map(&r.affine_weights),
                "projective_weights": big_map(&r.projective_weights),
                "class_sizes": big_map(&r.affine_weights.keys().map(|&k| (k, class_size(k))).collect()),
                "min_distance": r.min_distance.to_string(),
                "min_weight_count": r.min_weight_count.to_string(),
                "min_weight_regime": r.min_weight_regime.label(),
                "distinct_weight_count": r.distinct_weight_count,
                "monotone": r.monotone,
            }),
        )?,
        Format::Csv => {
            writeln!(out, "k,rank,affine_weight,projective_weight,codewords")?;
            for (k, w) in &r.affine_weights {
                writeln!(out, "{k},{},{w},{},{}", 2 * k, r.projective_weights[k], class_size(*k))?;
            }
        }
    }
    Ok(())
}

fn mindist(ctx: &Ctx, out: &mut dyn Write) -> Result<()> {
    let p = ctx.params()?;
    let (t, m) = (p.t as i64, p.m as i64);
    let d = min_distance(ctx.q(), t, m)?;
    let (count, regime) = min_weight_count(ctx.q(), t, m)?;
    match ctx.format {
        Format::Plain => writeln!(out, "d = {d}, min-weight codewords = {count} ({regime})")?,
        Format::Json => emit_json(
            out,
            &json!({"d": d.to_string(), "min_weight_count": count.to_string(), "regime": regime.label()}),
        )?,
        Format::Csv => writeln!(out, "d,min_weight_count,regime\n{d},{count},{regime}")?,
    }
    Ok(())
}

fn spectrum(ctx: &Ctx, out: &mut dyn Write) -> Result<()> {
    let p = ctx.params()?;
    let spec = weight_report(ctx.q(), p.t as i64, p.m as i64)?.weight_enumerator();
    match ctx.format {
        Format::Plain => {
            for (w, n) in &spec {
                writeln!(out, "{w} {n}")?;
            }
        }
        Format::Json => {
            let rows: Vec<Value> =
                spec.iter().map(|(w, n)| json!({"weight": w.to_string(), "count": n.to_string()})).collect();
            emit_json(out, &json!({"q": ctx.q(), "m": p.m, "t": p.t, "spectrum": rows}))?;
        }
        Format::Csv => {
            writeln!(out, "weight,count")?;
            for (w, n) in &spec {
                writeln!(out, "{w},{n}")?;
            }
        }
    }
    Ok(())
}

fn genmat(ctx: &Ctx, path: Option<&PathBuf>, out: &mut dyn Write) -> Result<()> {
    let g = generator_matrix(&ctx.params()?)?;
    match path {
        Some(path) => {
            export(&g, ctx.format, path)?;
            if ctx.format == Format::Plain {
                writeln!(out, "wrote {}x{} generator matrix to {}", g.rows(), g.cols(), path.display())?;
            }
        }
        None => {
            let mut buf = Vec::new();
            g.write(ctx.format, &mut buf)?;
            out.write_all(&buf)?;
        }
    }
    Ok(())
}

fn run_verify(ctx: &Ctx, tier: Tier, workers: usize, seed: u64, out: &mut dyn Write) -> Result<bool> {
    let checks = verify(&ctx.params()?, tier, workers, seed)?;
    let passed = checks.iter().all(|c| c.pass);
    match ctx.format {
        Format::Json => {
            let rows: Vec<Value> = checks
                .iter()
                .map(|c| json!({"name": c.name, "pass": c.pass, "expected": c.expected, "actual": c.actual}))
                .collect();
            emit_json(out, &json!({"pass": passed, "checks": rows}))?;
        }
        Format::Csv => {
            writeln!(out, "check,result")?;
            for c in &checks {
                writeln!(out, "{},{}", c.name, if c.pass { "PASS" } else { "FAIL" })?;
            }
        }
        Format::Plain => {
            for c in &checks {
                writeln!(out, "{}", c.line())?;
            }
            let failed = checks.iter().filter(|c| !c.pass).count();
            if failed == 0 {
                writeln!(out, "all {} checks passed", checks.len())?;
            } else {
                writeln!(out, "{failed} of {} checks FAILED", checks.len())?;
            }
        }
    }
    Ok(passed)
}

fn table(ctx: &Ctx, out: &mut dyn Write) -> Result<()> {
    let m = ctx.m as i64;
    if m < 2 {
        return Err(Error::InvalidParams("need m >= 2".into()));
    }
    let mut calc = WeightCalculator::new(ctx.q());
    let reports = (1..=m / 2).map(|t| weight_report_with(&mut calc, t, m)).collect::<Result<Vec<_>>>()?;
    let ks: Vec<i64> = (1..=m / 2).collect();
    match ctx.format {
        Format::Plain => {
            writeln!(out, "projective class weights, q = {}, m = {m}", ctx.q())?;
            let head: Vec<String> = ks.iter().map(|k| format!("W{}", 2 * k)).collect();
            writeln!(out, "t {} d", head.join(" "))?;
            for r in &reports {
                let ws: Vec<String> = r.projective_weights.values().map(|w| w.to_string()).collect();
                writeln!(out, "{} {} {}", r.t, ws.join(" "), r.min_distance)?;
            }
        }
        Format::Json => {
            let rows: Vec<Value> = reports
                .iter()
                .map(|r| {
                    json!({"t": r.t, "projective_weights": big_map(&r.projective_weights), "d": r.min_distance.to_string()})
                })
                .collect();
            emit_json(out, &json!({"q": ctx.q(), "m": m, "rows": rows}))?;
        }
        Format::Csv => {
            let head: Vec<String> = ks.iter().map(|k| format!("W{}", 2 * k)).collect();
            writeln!(out, "t,{},d", head.join(","))?;
            for r in &reports {
                let ws: Vec<String> = r.projective_weights.values().map(|w| w.to_string()).collect();
                writeln!(out, "{},{},{}", r.t, ws.join(","), r.min_distance)?;
            }
        }
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs the subcommand.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{rendered}");
                0
            } else {
                let _ = write!(err, "{rendered}");
                1
            };
        }
    };

    let result = (|| -> Result<bool> {
        match &cli.command {
            Command::Counts(c) => counts(&Ctx::from(c, err)?, out).map(|_| true),
            Command::Weights(c) => weights(&Ctx::from(c, err)?, out, err).map(|_| true),
            Command::Mindist(c) => mindist(&Ctx::from(c, err)?, out).map(|_| true),
            Command::Spectrum(c) => spectrum(&Ctx::from(c, err)?, out).map(|_| true),
            Command::Genmat { common, out: path } => genmat(&Ctx::from(common, err)?, path.as_ref(), out).map(|_| true),
            Command::Verify { common, slow, workers, seed } => {
                let tier = if *slow { Tier::Slow } else { Tier::Fast };
                run_verify(&Ctx::from(common, err)?, tier, *workers, *seed, out)
            }
            Command::Table(c) => table(&Ctx::from(c, err)?, out).map(|_| true),
        }
    })();

    match result {
        Ok(true) => 0,
        Ok(false) => 2,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}
