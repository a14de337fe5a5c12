//! `mackey`: compute, tabulate and cross-check `H^α_{C_{p^n}}(S^0; Z)`.
//!
//! Exit codes: 0 success, 1 a check failed, 2 bad input, 3 the engine has no
//! answer for a requested grading.

mod check;
mod render;
mod range;
mod store;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mackey_cpn::cohomology::{engine_version, CohomResult, Engine};
use mackey_cpn::families::{recognize, CatalogExpr};
use mackey_cpn::grading::Grading;
use mackey_cpn::mackey::is_prime;

use range::GradingRange;
use render::Named;
use store::{Record, SaveOutcome, Store, STORE_ENV};

#[derive(Parser)]
#[command(name = "mackey", version, about = "RO(G)-graded cohomology of a point for cyclic p-groups")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute one grading.
    Compute(ComputeArgs),
    /// Name every grading in a box.
    Table(TableArgs),
    /// Run the consistency checks.
    Check(CheckArgs),
}

#[derive(Args)]
struct Group {
    /// The prime p.
    #[arg(long)]
    p: u64,
    /// The exponent n in C_{p^n}.
    #[arg(long)]
    n: usize,
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    group: Group,
    /// Grading such as "2 - 2*L0 + L1" or "L(3)".
    #[arg(long, allow_hyphen_values = true)]
    grading: String,
    #[arg(long, value_enum, default_value_t = Format::Ascii)]
    format: Format,
    /// Result store directory (defaults to $MACKEY_STORE when set).
    #[arg(long)]
    store: Option<PathBuf>,
}

#[derive(Args)]
struct TableArgs {
    #[command(flatten)]
    group: Group,
    /// Box such as "a0=-4..4,a1=-4..4,c=-10..10"; missing coordinates are 0.
    #[arg(long, allow_hyphen_values = true)]
    range: String,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    format: TableFormat,
    #[arg(long)]
    store: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(value_enum)]
    kind: check::Kind,
    #[command(flatten)]
    group: Group,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "range")]
    grading: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    range: Option<String>,
    /// Print only failing assertions and the summary.
    #[arg(long)]
    failures_only: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Ascii,
    Json,
    Latex,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Latex,
}

/// An input problem: reported and mapped to exit code 2.
struct Usage(String);

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match cli.cmd {
        Cmd::Compute(a) => compute(a),
        Cmd::Table(a) => table(a),
        Cmd::Check(a) => check::run(a),
    };
    match out {
        Ok(code) => ExitCode::from(code),
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn prime(p: u64) -> Result<u64, Usage> {
    if is_prime(p) {
        Ok(p)
    } else {
        Err(Usage(format!("{p} is not prime")))
    }
}

fn parse_grading(text: &str, p: u64, n: usize) -> Result<Grading, Usage> {
    let (g, notes) = Grading::parse_with_notes(text, p, n).map_err(|e| Usage(e.to_string()))?;
    for note in notes {
        eprintln!("note: {note}");
    }
    Ok(g)
}

fn open_store(dir: Option<PathBuf>) -> Result<Option<Store>, Usage> {
    let dir = dir.or_else(|| std::env::var_os(STORE_ENV).map(PathBuf::from));
    dir.map(|d| {
        Store::open(&d).map_err(|e| Usage(format!("cannot open store {}: {e}", d.display())))
    })
    .transpose()
}

fn remember(store: Option<&Store>, r: &CohomResult, version: &str) -> Result<(), Usage> {
    let Some(store) = store else { return Ok(()) };
    let rec = Record::from_result(r, version);
    match store.save(&rec) {
        Ok(SaveOutcome::Conflict) => eprintln!(
            "warning: {} holds a different value under the same version; left unchanged",
            store.path(r.p, &r.grading).display()
        ),
        Ok(_) => {}
        Err(e) => return Err(Usage(format!("store write failed: {e}"))),
    }
    Ok(())
}

/// The catalog name carried by the rules, or found by search.
fn name_of(r: &CohomResult) -> Option<CatalogExpr> {
    r.expr.clone().or_else(|| r.functor().and_then(recognize))
}

fn compute(a: ComputeArgs) -> Result<u8, Usage> {
    let p = prime(a.group.p)?;
    let g = parse_grading(&a.grading, p, a.group.n)?;
    let store = open_store(a.store)?;
    let version = engine_version();
    let engine = Engine::new();
    let r = engine.compute(p, &g).map_err(|e| Usage(e.to_string()))?;
    remember(store.as_ref(), &r, &version)?;
    let named = Named {
        name: name_of(&r),
        result: &r,
        version: &version,
    };
    match a.format {
        Format::Ascii => print!("{}", render::ascii(&named)),
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&render::json(&named)).expect("JSON value")
        ),
        Format::Latex => print!("{}", render::latex(&named)),
    }
    Ok(if r.is_known() { 0 } else { 3 })
}

fn table(a: TableArgs) -> Result<u8, Usage> {
    let p = prime(a.group.p)?;
    let n = a.group.n;
    let range = GradingRange::parse(&a.range, n).map_err(Usage)?;
    let store = open_store(a.store)?;
    let version = engine_version();
    let engine = Engine::new();
    let gradings = range.gradings();
    let rows = check::par_map(&gradings, |g| {
        let r = engine.compute(p, g).expect("p was checked");
        let name = name_of(&r);
        (r, name)
    });
    for (r, _) in &rows {
        remember(store.as_ref(), r, &version)?;
    }
    match a.format {
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(std::io::stdout());
            let mut header = vec!["grading".to_string(), "c".into()];
            header.extend((0..n).map(|i| format!("a{i}")));
            header.extend(["name".into(), "levels".into()]);
            w.write_record(&header).map_err(|e| Usage(e.to_string()))?;
            for (r, name) in &rows {
                let g = &r.grading;
                let mut rec = vec![g.to_string(), g.c().to_string()];
                rec.extend(g.a().iter().map(|x| x.to_string()));
                let (name, levels) = match r.functor() {
                    Some(m) => (
                        name.as_ref().map_or("none".into(), |e| e.to_string()),
                        m.levels().iter().map(|l| l.to_string()).collect::<Vec<_>>().join(";"),
                    ),
                    None => ("unknown".into(), String::new()),
                };
                rec.extend([name, levels]);
                w.write_record(&rec).map_err(|e| Usage(e.to_string()))?;
            }
            w.flush().map_err(|e| Usage(e.to_string()))?;
        }
        TableFormat::Latex => {
            println!("\\begin{{tabular}}{{|l|l|}}\n\\hline");
            println!("$\\alpha$ & $\\underline{{H}}^\\alpha_{{C_{{{p}^{n}}}}}(S^0)$ \\\\\n\\hline");
            for (r, name) in &rows {
                let cell = match (r.functor(), name) {
                    (Some(_), Some(e)) => format!("${}$", render::latex_expr(e)),
                    (Some(_), None) => "none".into(),
                    (None, _) => "unknown".into(),
                };
                println!("${}$ & {cell} \\\\", r.grading.to_string().replace('*', "").replace('L', "\\lambda_"));
            }
            println!("\\hline\n\\end{{tabular}}");
        }
    }
    Ok(0)
}
