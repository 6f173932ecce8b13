//! `tautjac` command-line tool.
//!
//! Exit status: 0 on success, 1 when a verification fails (details on
//! stderr), 2 on usage errors.

mod cache;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use tautjac::ideal::FORMAT_VERSION;
use tautjac::lie::verify_all;
use tautjac::newton::{d_to_w_rational, w_to_d_rational};
use tautjac::{
    parse_poly, Exec, FourierMap, LieContext, Operator, Poly, Rational, RelationIdeal, Report,
};

use cache::Cache;

const CACHE_ENV: &str = "TAUTJAC_CACHE_DIR";

#[derive(Parser)]
#[command(
    name = "tautjac",
    version,
    about = "Exact computations in the tautological ring of a Jacobian"
)]
struct Cli {
    /// Run every sweep on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify operator identities.
    Verify {
        #[command(subcommand)]
        target: VerifyTarget,
    },
    /// Print the relation ideal.
    Relations(RelationsArgs),
    /// Reduce an expression modulo the relation ideal.
    NormalForm(ExprArgs),
    /// Test whether an expression lies in the relation ideal.
    Member(ExprArgs),
    /// Check Fourier transform identities on the quotient.
    Fourier(FourierArgs),
    /// Convert between special-divisor classes and p_k - q_k.
    Newton(NewtonArgs),
    /// Inspect or clear the relation-ideal cache.
    Cache(CacheArgs),
    /// Print one of the differential operators.
    Operator(OperatorArgs),
}

#[derive(Subcommand)]
enum VerifyTarget {
    /// All bracket identities of X, Y, the sl2 triple and D.
    Lie(LieArgs),
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Md,
    Json,
}

#[derive(Args)]
struct LieArgs {
    #[arg(long)]
    genus: u32,
    #[arg(long)]
    max_order: u32,
    #[arg(long)]
    window: u32,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args)]
struct IdealArgs {
    #[arg(long)]
    genus: u32,
    /// Highest starting weight of the closure; defaults to genus + 3.
    #[arg(long)]
    source_cap: Option<u32>,
    /// Cache directory; the TAUTJAC_CACHE_DIR variable takes precedence.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

#[derive(Args)]
struct RelationsArgs {
    #[command(flatten)]
    ideal: IdealArgs,
    #[arg(long)]
    weight: Option<u32>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args)]
struct ExprArgs {
    #[command(flatten)]
    ideal: IdealArgs,
    #[arg(long)]
    expr: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum FourierCheck {
    S2,
    Conj,
}

#[derive(Args)]
struct FourierArgs {
    #[command(flatten)]
    ideal: IdealArgs,
    #[arg(long, value_enum)]
    check: FourierCheck,
    #[arg(long)]
    m: Option<i64>,
    #[arg(long)]
    n: Option<i64>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args)]
#[command(group(ArgGroup::new("direction").required(true).args(["to_d", "to_w"])))]
struct NewtonArgs {
    #[arg(long)]
    genus: usize,
    /// Comma-separated w_1..w_g.
    #[arg(long, allow_hyphen_values = true)]
    to_d: Option<String>,
    /// Comma-separated d_1..d_g.
    #[arg(long, allow_hyphen_values = true)]
    to_w: Option<String>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args)]
struct CacheArgs {
    #[arg(long)]
    dir: Option<PathBuf>,
    /// Delete all cache entries.
    #[arg(long)]
    clear: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    X,
    Y,
    /// X~_{m,n} = X_{m,n} + m n Y_{m-1,n-1}
    Xt,
    D,
    H,
    E,
    F,
}

#[derive(Args)]
struct OperatorArgs {
    #[arg(long)]
    genus: u32,
    #[arg(long)]
    window: u32,
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    m: i64,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    n: i64,
    /// One term per line as `c * multiplier * d(..)d(..)`.
    #[arg(long)]
    dump_operator: bool,
}

enum CliError {
    Usage(String),
    /// Stdout that was still produced, and the failure detail.
    Failure(String, String),
}

type CliResult = Result<String, CliError>;

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

fn cache_dir(flag: Option<PathBuf>) -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
        .or(flag)
}

fn load_ideal(args: &IdealArgs) -> Result<RelationIdeal, CliError> {
    let cap = args
        .source_cap
        .unwrap_or(RelationIdeal::default_cap(args.genus));
    match cache_dir(args.cache_dir.clone()) {
        Some(dir) => Cache::new(dir)
            .get_or_build(args.genus, cap)
            .map(|(i, _)| i)
            .map_err(usage),
        None => RelationIdeal::build(args.genus, cap).map_err(usage),
    }
}

fn report_output(report: &Report, format: Format, header: serde_json::Value) -> CliResult {
    let out = match format {
        Format::Md => report.to_markdown(),
        Format::Json => {
            let mut doc = header;
            doc["format-version"] = json!(FORMAT_VERSION);
            doc["records"] = serde_json::to_value(&report.records).expect("records serialize");
            serde_json::to_string_pretty(&doc).expect("json") + "\n"
        }
    };
    match report.first_failure() {
        Some(f) => Err(CliError::Failure(out, f.to_string())),
        None => Ok(out),
    }
}

fn exec(sequential: bool) -> Exec {
    if sequential {
        Exec::Sequential
    } else {
        Exec::Parallel
    }
}

fn verify_lie(a: &LieArgs, exec: Exec) -> CliResult {
    let ctx = LieContext::new(a.genus, a.window).map_err(usage)?;
    let report = verify_all(a.max_order, &ctx, exec);
    report_output(
        &report,
        a.format,
        json!({"genus": a.genus, "window": a.window, "max_order": a.max_order}),
    )
}

fn relations(a: &RelationsArgs) -> CliResult {
    let ideal = load_ideal(&a.ideal)?;
    let doc = ideal.to_document(a.weight).map_err(usage)?;
    Ok(match a.format {
        Format::Json => serde_json::to_string_pretty(&doc).expect("json") + "\n",
        Format::Md => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "# Relations, genus {}, source cap {}\n",
                doc.genus, doc.source_cap
            );
            s.push_str("| weight | quotient dim | relations |\n|---|---|---|\n");
            for w in &doc.weights {
                let _ = writeln!(
                    s,
                    "| {} | {} | {} |",
                    w.w,
                    w.quotient_dim,
                    w.relations.len()
                );
            }
            for w in &doc.weights {
                let _ = writeln!(s, "\n## Weight {}\n", w.w);
                for r in ideal.relations(w.w).map_err(usage)? {
                    let _ = writeln!(s, "- `{r}`");
                }
            }
            s
        }
    })
}

fn parse_expr(src: &str) -> Result<Poly, CliError> {
    parse_poly(src).map_err(usage)
}

fn normal_form(a: &ExprArgs) -> CliResult {
    let f = parse_expr(&a.expr)?;
    let ideal = load_ideal(&a.ideal)?;
    Ok(format!("{}\n", ideal.normal_form(&f).map_err(usage)?))
}

fn member(a: &ExprArgs) -> CliResult {
    let f = parse_expr(&a.expr)?;
    let ideal = load_ideal(&a.ideal)?;
    if ideal.contains(&f).map_err(usage)? {
        Ok("true\n".into())
    } else {
        let nf = ideal.normal_form(&f).map_err(usage)?;
        Err(CliError::Failure(
            "false\n".into(),
            format!("normal form is {nf}"),
        ))
    }
}

fn fourier(a: &FourierArgs, exec: Exec) -> CliResult {
    let map = FourierMap::new(load_ideal(&a.ideal)?);
    let report = match a.check {
        FourierCheck::S2 => map.verify_s2(exec),
        FourierCheck::Conj => {
            let (Some(m), Some(n)) = (a.m, a.n) else {
                return Err(usage("--check conj needs --m and --n"));
            };
            map.verify_conjugation(m, n, exec)
        }
    }
    .map_err(usage)?;
    let header = json!({"genus": map.genus(), "source_cap": map.ideal().source_cap()});
    let out = report_output(&report, a.format, header)?;
    for r in report
        .records
        .iter()
        .filter(|r| r.status == tautjac::Status::Informative)
    {
        if let Some(c) = &r.counterexample {
            eprintln!("informative: {} does not hold: {c}", r.identity);
        }
    }
    Ok(out)
}

fn parse_rationals(list: &str, genus: usize) -> Result<Vec<Rational>, CliError> {
    let values = list
        .split(',')
        .map(|s| {
            Rational::from_str(s.trim())
                .map_err(|_| usage(format!("not a rational number: {:?}", s.trim())))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if values.len() != genus {
        return Err(usage(format!(
            "expected {genus} values, got {}",
            values.len()
        )));
    }
    Ok(values)
}

fn newton(a: &NewtonArgs) -> CliResult {
    let (name, out) = match (&a.to_d, &a.to_w) {
        (Some(w), None) => ("d", w_to_d_rational(&parse_rationals(w, a.genus)?)),
        (None, Some(d)) => ("w", d_to_w_rational(&parse_rationals(d, a.genus)?)),
        _ => return Err(usage("give exactly one of --to-d and --to-w")),
    };
    Ok(match a.format {
        Format::Md => out
            .iter()
            .enumerate()
            .map(|(i, v)| format!("{name}{} = {v}\n", i + 1))
            .collect(),
        Format::Json => {
            let values: Vec<String> = out.iter().map(ToString::to_string).collect();
            serde_json::to_string_pretty(&json!({"format-version": FORMAT_VERSION, name: values}))
                .expect("json")
                + "\n"
        }
    })
}

fn cache_cmd(a: &CacheArgs) -> CliResult {
    let dir = cache_dir(a.dir.clone())
        .ok_or_else(|| usage("no cache directory: pass --dir or set TAUTJAC_CACHE_DIR"))?;
    let cache = Cache::new(dir);
    if a.clear {
        let n = cache.clear().map_err(usage)?;
        return Ok(format!("removed {n} entries\n"));
    }
    let entries = cache.entries().map_err(usage)?;
    Ok(entries
        .iter()
        .map(|p| format!("{}\n", p.display()))
        .collect())
}

fn operator(a: &OperatorArgs) -> CliResult {
    let ctx = LieContext::new(a.genus, a.window).map_err(usage)?;
    let op: Operator = match a.family {
        Family::X => ctx.make_x(a.m, a.n),
        Family::Y => ctx.make_y(a.m, a.n),
        Family::Xt => ctx.make_tilde_x(a.m, a.n),
        Family::D => ctx.make_d(),
        Family::H => ctx.make_h(),
        Family::E => ctx.make_sl2().e,
        Family::F => ctx.make_sl2().f,
    };
    Ok(if a.dump_operator {
        op.dump()
    } else {
        format!("{op}\n")
    })
}

fn run(cli: &Cli) -> CliResult {
    let exec = exec(cli.sequential);
    match &cli.command {
        Command::Verify {
            target: VerifyTarget::Lie(a),
        } => verify_lie(a, exec),
        Command::Relations(a) => relations(a),
        Command::NormalForm(a) => normal_form(a),
        Command::Member(a) => member(a),
        Command::Fourier(a) => fourier(a, exec),
        Command::Newton(a) => newton(a),
        Command::Cache(a) => cache_cmd(a),
        Command::Operator(a) => operator(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(CliError::Failure(out, detail)) => {
            print!("{out}");
            eprintln!("{detail}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
