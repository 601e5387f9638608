use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use uqsl21::catops::decompose;
use uqsl21::charb::character_table;
use uqsl21::mtrace::mdim_json;
use uqsl21::repmod::{build_typical_rep, tensor, SimpleLabel};
use uqsl21::scalar::{parse_rational, Rational, RootConfig};
use uqsl21::sixjtv::{tv_state_sum, HTriangulation, HTriangulationData, SixJContext};
use uqsl21::verify::{run_suite, Suite, VerifyOptions};
use uqsl21::Error;

#[derive(Parser)]
#[command(name = "uqsl21", version, about = "Exact computations for quantum sl(2|1) at roots of unity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and report every check.
    Verify(VerifyArgs),
    /// Print one exact result as JSON.
    Compute {
        kind: Kind,
        #[command(flatten)]
        args: ComputeArgs,
    },
    /// The character table: chi, b and D for the given l.
    Char {
        #[command(flatten)]
        args: ComputeArgs,
    },
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_parser = parse_integer)]
    l: u64,
    #[arg(long = "denom-bound", value_parser = parse_integer)]
    denom_bound: Option<u64>,
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value = "0", value_parser = parse_integer)]
    seed: u64,
    /// Print the full report as JSON instead of a summary.
    #[arg(long)]
    json: bool,
    /// Also write the JSON report to this file.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Mdim,
    #[value(alias = "char")]
    Chi,
    Decompose,
    Sixj,
    Tv,
}

#[derive(Args)]
struct ComputeArgs {
    #[arg(long, value_parser = parse_integer)]
    l: Option<u64>,
    #[arg(long = "denom-bound", value_parser = parse_integer)]
    denom_bound: Option<u64>,
    #[arg(long, value_parser = parse_integer)]
    n: Option<u64>,
    #[arg(long, value_parser = parse_rational_arg)]
    alpha: Option<Rational>,
    /// A label "n,alpha".
    #[arg(long)]
    left: Option<String>,
    /// A label "n,alpha".
    #[arg(long)]
    right: Option<String>,
    /// Six labels "n,alpha" separated by ';' in the order i;j;k;l;m;n.
    #[arg(long)]
    labels: Option<String>,
    /// Compute the mirror tensor instead of the direct one.
    #[arg(long)]
    mirror: bool,
    /// Triangulation JSON for `tv`.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

fn parse_rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// Integers, also accepted in "a/b" form when b divides a.
fn parse_integer(s: &str) -> Result<u64, String> {
    let r = parse_rational_arg(s)?;
    if !r.is_integer() {
        return Err(format!("{s} is not an integer"));
    }
    u64::try_from(r.to_integer()).map_err(|_| format!("{s} is not a nonnegative integer"))
}

fn parse_label(s: &str, l: u32) -> Result<SimpleLabel, Error> {
    let (n, a) = s
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("label {s:?} must have the form n,alpha")))?;
    let n = parse_integer(n.trim()).map_err(Error::Parse)?;
    let n = u32::try_from(n).map_err(|_| Error::Parse(format!("n = {n} is too large")))?;
    Ok(SimpleLabel::new(n, parse_rational(a)?, l))
}

fn root_l(l: Option<u64>) -> Result<u32, Error> {
    let l = l.ok_or_else(|| Error::Precondition("--l is required".into()))?;
    let l = u32::try_from(l).map_err(|_| Error::Config(format!("l = {l} is too large")))?;
    if l < 3 {
        return Err(Error::Config(format!("l must satisfy l >= 3, got {l}")));
    }
    Ok(l)
}

fn config(l: u32, bound: Option<u64>, exponents: &[&Rational]) -> Result<RootConfig, Error> {
    match bound {
        Some(b) => {
            let cfg = RootConfig::new(l, b)?;
            for e in exponents {
                cfg.check_exponent(e)?;
            }
            Ok(cfg)
        }
        None => RootConfig::covering(l, exponents.iter().copied()),
    }
}

fn required<T: Clone>(v: &Option<T>, flag: &str) -> Result<T, Error> {
    v.clone().ok_or_else(|| Error::Precondition(format!("--{flag} is required")))
}

fn compute(kind: Kind, a: &ComputeArgs) -> Result<Value, Error> {
    match kind {
        Kind::Tv => {
            let path = required(&a.input, "input")?;
            let text = std::fs::read_to_string(&path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            let tri = HTriangulation::from_data(&HTriangulationData::from_json(&text)?)?;
            let ctx = SixJContext::new(&tri.cfg);
            Ok(tv_state_sum(&ctx, &tri)?.to_json())
        }
        Kind::Chi => {
            let l = root_l(a.l)?;
            character_table(&config(l, a.denom_bound, &[])?)
        }
        Kind::Mdim => {
            let l = root_l(a.l)?;
            let alpha = required(&a.alpha, "alpha")?;
            let n = u32::try_from(required(&a.n, "n")?).map_err(|_| Error::Config("n is too large".into()))?;
            let cfg = config(l, a.denom_bound, &[&alpha])?;
            mdim_json(&cfg, &SimpleLabel::new(n, alpha, l))
        }
        Kind::Decompose => {
            let l = root_l(a.l)?;
            let left = parse_label(&required(&a.left, "left")?, l)?;
            let right = parse_label(&required(&a.right, "right")?, l)?;
            let cfg = config(l, a.denom_bound, &[&left.alpha, &right.alpha])?;
            let vl = Arc::new(build_typical_rep(&cfg, left.n, &left.alpha)?);
            let vr = Arc::new(build_typical_rep(&cfg, right.n, &right.alpha)?);
            let rec = decompose(&Arc::new(tensor(&vl, &vr)?))?;
            let mut out = rec.to_json();
            out["left"] = json!(left.to_string());
            out["right"] = json!(right.to_string());
            Ok(out)
        }
        Kind::Sixj => {
            let l = root_l(a.l)?;
            let text = required(&a.labels, "labels")?;
            let labels = text.split(';').map(|s| parse_label(s.trim(), l)).collect::<Result<Vec<_>, _>>()?;
            let labels: [SimpleLabel; 6] = labels
                .try_into()
                .map_err(|v: Vec<SimpleLabel>| Error::Parse(format!("--labels needs six labels, got {}", v.len())))?;
            let alphas: Vec<&Rational> = labels.iter().map(|x| &x.alpha).collect();
            let cfg = config(l, a.denom_bound, &alphas)?;
            let ctx = SixJContext::new(&cfg);
            Ok(ctx.sixj(&labels, a.mirror)?.to_json())
        }
    }
}

fn emit(value: &Value, output: &Option<PathBuf>) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(value).expect("JSON values serialize");
    if let Some(path) = output {
        std::fs::write(path, format!("{text}\n")).map_err(|e| Error::Validation(format!("{}: {e}", path.display())))?;
    }
    print_out(&text);
    Ok(())
}

/// Prints to stdout, treating a closed pipe as the reader having had enough.
fn print_out(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn verify(a: &VerifyArgs) -> Result<bool, Error> {
    let l = root_l(Some(a.l))?;
    let suite: Suite = a.suite.parse()?;
    let mut opts = VerifyOptions::new(l, a.seed)?;
    if let Some(b) = a.denom_bound {
        opts = opts.with_denom_bound(b)?;
    }
    let report = run_suite(&opts, suite)?;
    let value = report.to_json();
    if let Some(path) = &a.output {
        let text = serde_json::to_string_pretty(&value).expect("JSON values serialize");
        std::fs::write(path, format!("{text}\n")).map_err(|e| Error::Validation(format!("{}: {e}", path.display())))?;
    }
    if a.json {
        print_out(&serde_json::to_string_pretty(&value).expect("JSON values serialize"));
    } else {
        for c in report.checks().iter().filter(|c| !c.pass) {
            print_out(&format!("FAIL {} {}", c.id, c.witness));
        }
        print_out(&report.summary());
    }
    if let Some(t) = report.elapsed {
        eprintln!("elapsed {:.2}s", t.as_secs_f64());
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Verify(a) => verify(a),
        Command::Compute { kind, args } => compute(*kind, args).and_then(|v| emit(&v, &args.output)).map(|_| true),
        Command::Char { args } => compute(Kind::Chi, args).and_then(|v| emit(&v, &args.output)).map(|_| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
