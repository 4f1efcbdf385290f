//! `hall`: catalogs, Hall multiplication tables, verification sweeps and
//! locally finite push-forwards from the command line.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 usage or input
//! error, 3 an enumeration cap was exceeded.

use std::collections::BTreeSet;
use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use hall_core::derived::DerivedClass;
use hall_core::hall::{ClassicalContext, DerivedContext, HallAlgebra, HallElement, DEFAULT_HOM_CLASS_CAP};
use hall_core::hom::DEFAULT_ENUMERATION_CAP;
use hall_core::io::{catalog_json, catalog_pretty, csv_field, format_rational, to_pretty, with_schema};
use hall_core::lf::{check_base_change, pushforward, BaseChangeSquare, FiniteSupportFn, ProperMapData};
use hall_core::verify::{verify_suite, with_workers, Check, SuiteInput};
use hall_core::{Catalog, ClassId, HallError, Quiver};

#[derive(Parser, Debug)]
#[command(name = "hall", version, about = "Classical and derived Hall algebras of quiver representations over F_p")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build and print the catalog of isomorphism classes.
    Catalog(ContextArgs),
    /// Multiplication table of the classical Hall algebra.
    HallTable(ContextArgs),
    /// Multiplication table of the derived Hall algebra.
    DerivedTable {
        #[command(flatten)]
        ctx: ContextArgs,
        #[command(flatten)]
        derived: DerivedArgs,
    },
    /// Run the consistency sweeps.
    Verify {
        #[command(flatten)]
        ctx: ContextArgs,
        #[command(flatten)]
        derived: DerivedArgs,
        /// Comma-separated subset of unit,assoc,riedtmann,span,stalk,orbit, or `all`.
        #[arg(long, default_value = "all")]
        checks: String,
        /// Skip the derived context even when the quiver is acyclic.
        #[arg(long)]
        no_derived: bool,
    },
    /// Push a finite-support function forward along a proper map.
    LfEval {
        /// Proper map data (JSON).
        #[arg(long)]
        map: PathBuf,
        /// Function on the source of the map (JSON).
        #[arg(long = "fn")]
        function: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Check `u^* f_! = g_! v^*` on a pullback square.
    BaseChange {
        /// Square data with fiber witness (JSON).
        #[arg(long)]
        square: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Args, Debug)]
struct ContextArgs {
    /// Quiver file: {"vertices": n, "arrows": [{"src": i, "dst": j}, ...]}.
    #[arg(long)]
    quiver: PathBuf,
    /// Prime field size.
    #[arg(short = 'p', long = "modulus", default_value_t = 2)]
    p: u32,
    /// Per-vertex dimension bound, e.g. `2,2`.
    #[arg(long, value_parser = parse_dims)]
    bound: Dims,
    /// Cap on any single exhaustive enumeration.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: u64,
    /// Worker threads for table cells.
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, value_enum, default_value_t = Format::Pretty)]
    format: Format,
}

#[derive(Args, Debug)]
struct DerivedArgs {
    /// Degree window `lo,hi` for derived classes.
    #[arg(long, value_parser = parse_window, default_value = "-2,2", allow_hyphen_values = true)]
    window: (i32, i32),
    /// Bound on the total homology dimension vector; defaults to `--bound`.
    #[arg(long, value_parser = parse_dims)]
    derived_bound: Option<Dims>,
    /// Cap on the number of classes in one derived Hom space.
    #[arg(long, default_value_t = DEFAULT_HOM_CLASS_CAP)]
    hom_cap: u64,
}

/// A comma-separated dimension vector, kept whole so clap treats it as one value.
#[derive(Clone, Debug)]
struct Dims(Vec<usize>);

fn parse_dims(s: &str) -> Result<Dims, String> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|e| format!("bad dimension {t:?}: {e}")))
        .collect::<Result<_, _>>()
        .map(Dims)
}

fn parse_window(s: &str) -> Result<(i32, i32), String> {
    let parts: Vec<i32> = s
        .split(',')
        .map(|t| t.trim().parse::<i32>().map_err(|e| format!("bad degree {t:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [lo, hi] if lo <= hi => Ok((lo, hi)),
        _ => Err(format!("window must be `lo,hi` with lo <= hi, got {s:?}")),
    }
}

enum Failure {
    Hall(HallError),
    Io(String),
}

impl From<HallError> for Failure {
    fn from(e: HallError) -> Self {
        Failure::Hall(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Hall(HallError::CapExceeded { .. }) => 3,
            _ => 2,
        }
    }
}

impl Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Hall(e) => write!(f, "{e}"),
            Failure::Io(s) => f.write_str(s),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))
}

fn build_catalog(args: &ContextArgs) -> CliResult<Arc<Catalog>> {
    let quiver = Arc::new(Quiver::from_json(&read(&args.quiver)?)?);
    if args.cap == 0 {
        return Err(Failure::Io("--cap must be positive".into()));
    }
    Ok(Arc::new(Catalog::build_with_cap(quiver, args.p, args.bound.0.clone(), args.cap)?))
}

fn build_derived(cat: &Arc<Catalog>, args: &DerivedArgs, bound: &[usize]) -> CliResult<DerivedContext> {
    let dbound = args.derived_bound.as_ref().map_or_else(|| bound.to_vec(), |d| d.0.clone());
    Ok(DerivedContext::with_cap(cat.clone(), args.window, dbound, args.hom_cap)?)
}

fn classical_label(id: &ClassId) -> Value {
    json!(id.0)
}

fn derived_label(d: &DerivedClass) -> Value {
    serde_json::to_value(d).expect("derived classes serialize")
}

type Row<B> = (B, B, HallElement<B>);

/// Every in-bound product `χ_x · χ_y`, computed on the worker pool, in basis order.
fn table<A: HallAlgebra>(alg: &A) -> CliResult<Vec<Row<A::Basis>>> {
    let basis = alg.basis();
    let pairs: Vec<(A::Basis, A::Basis)> = basis
        .iter()
        .flat_map(|x| basis.iter().map(move |y| (x.clone(), y.clone())))
        .filter(|(x, y)| alg.fits(x, y))
        .collect();
    let rows = pairs
        .par_iter()
        .map(|(x, y)| Ok((x.clone(), y.clone(), alg.product(x, y)?)))
        .collect::<Result<Vec<_>, HallError>>()?;
    Ok(rows)
}

fn render_table<B: Ord + Display + Clone>(
    rows: &[Row<B>],
    label: impl Fn(&B) -> Value,
    context: Value,
    format: Format,
) -> String {
    match format {
        Format::Json => {
            let entries: Vec<Value> = rows
                .iter()
                .map(|(x, y, prod)| {
                    json!({
                        "x": label(x),
                        "y": label(y),
                        "terms": prod.terms().map(|(z, c)| json!({
                            "z": label(z),
                            "coeff_num": c.numer().to_string(),
                            "coeff_den": c.denom().to_string(),
                        })).collect::<Vec<_>>(),
                    })
                })
                .collect();
            to_pretty(&with_schema(json!({ "context": context, "table": entries })))
        }
        Format::Csv => {
            let mut out = String::from("x,y,z,coeff\n");
            for (x, y, prod) in rows {
                for (z, c) in prod.terms() {
                    out.push_str(&format!(
                        "{},{},{},{}\n",
                        csv_field(&x.to_string()),
                        csv_field(&y.to_string()),
                        csv_field(&z.to_string()),
                        format_rational(c)
                    ));
                }
            }
            out
        }
        Format::Pretty => {
            let mut out = String::new();
            for (x, y, prod) in rows {
                out.push_str(&format!("[{x}]·[{y}] = {prod}\n"));
            }
            out
        }
    }
}

fn catalog_context(cat: &Catalog) -> Value {
    json!({
        "quiver": serde_json::from_str::<Value>(&cat.quiver().to_json()).expect("quiver json"),
        "modulus": cat.modulus(),
        "bound": cat.bound(),
    })
}

fn run(cli: Cli) -> CliResult<(String, u8)> {
    match cli.command {
        Command::Catalog(args) => {
            let cat = build_catalog(&args)?;
            let text = match args.format {
                Format::Json => to_pretty(&catalog_json(&cat)?),
                Format::Csv => {
                    let mut out = String::from("id,dim_vector,aut_order,indecomposable\n");
                    for id in cat.ids() {
                        let dims: Vec<String> = cat.dims(id)?.iter().map(|d| d.to_string()).collect();
                        out.push_str(&format!(
                            "{},{},{},{}\n",
                            id.0,
                            csv_field(&dims.join(",")),
                            cat.aut_order(id)?,
                            cat.entry(id)?.indecomposable
                        ));
                    }
                    out
                }
                Format::Pretty => catalog_pretty(&cat)?,
            };
            Ok((text, 0))
        }
        Command::HallTable(args) => {
            let cat = build_catalog(&args)?;
            let ctx = ClassicalContext::new(cat.clone());
            let rows = with_workers(args.workers, || table(&ctx))??;
            Ok((render_table(&rows, classical_label, catalog_context(&cat), args.format), 0))
        }
        Command::DerivedTable { ctx: args, derived } => {
            let cat = build_catalog(&args)?;
            let dctx = build_derived(&cat, &derived, &args.bound.0)?;
            let rows = with_workers(args.workers, || table(&dctx))??;
            let mut context = catalog_context(&cat);
            context["window"] = json!([dctx.window().0, dctx.window().1]);
            context["derived_bound"] = json!(dctx.bound());
            Ok((render_table(&rows, derived_label, context, args.format), 0))
        }
        Command::Verify {
            ctx: args,
            derived,
            checks,
            no_derived,
        } => {
            let checks: BTreeSet<Check> = Check::parse_list(&checks)?;
            if checks.is_empty() {
                return Err(Failure::Io("--checks selects nothing".into()));
            }
            let cat = build_catalog(&args)?;
            let ctx = ClassicalContext::new(cat.clone());
            let dctx = if no_derived || !cat.quiver().is_acyclic() {
                None
            } else {
                Some(build_derived(&cat, &derived, &args.bound.0)?)
            };
            let report = with_workers(args.workers, || {
                verify_suite(&SuiteInput {
                    classical: &ctx,
                    derived: dctx.as_ref(),
                    checks,
                })
            })??;
            let text = match args.format {
                Format::Json => to_pretty(&report.to_json()),
                Format::Csv => {
                    let mut out = String::from("check,mode,cases,status,failures\n");
                    for o in &report.outcomes {
                        out.push_str(&format!(
                            "{},{},{},{},{}\n",
                            o.check,
                            csv_field(&o.mode),
                            o.cases,
                            if o.passed() { "pass" } else { "fail" },
                            o.failures.len()
                        ));
                    }
                    out
                }
                Format::Pretty => report.to_pretty_text(),
            };
            Ok((text, if report.passed() { 0 } else { 1 }))
        }
        Command::LfEval { map, function, format } => {
            let f = ProperMapData::from_json(&read(&map)?)?;
            let alpha = FiniteSupportFn::from_json(&read(&function)?)?;
            let out = pushforward(&f, &alpha)?;
            let text = match format {
                Format::Json => to_pretty(&out.to_json()),
                Format::Csv => {
                    let mut s = String::from("component,value\n");
                    for (c, v) in out.support() {
                        s.push_str(&format!("{c},{}\n", format_rational(v)));
                    }
                    s
                }
                Format::Pretty => {
                    let mut s = String::new();
                    for (c, v) in out.support() {
                        s.push_str(&format!("{c}: {}\n", format_rational(v)));
                    }
                    s
                }
            };
            Ok((text, 0))
        }
        Command::BaseChange { square, format } => {
            let sq = BaseChangeSquare::from_json(&read(&square)?)?;
            let report = check_base_change(&sq)?;
            let text = match format {
                Format::Pretty => format!(
                    "{}: {} characteristic functions, max deviation {}\n",
                    if report.equal { "equal" } else { "DIFFERENT" },
                    report.functions_checked,
                    format_rational(&report.max_deviation)
                ),
                _ => to_pretty(&with_schema(json!({
                    "equal": report.equal,
                    "functions_checked": report.functions_checked,
                    "max_deviation": format_rational(&report.max_deviation),
                }))),
            };
            Ok((text, if report.equal { 0 } else { 1 }))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((text, code)) => {
            print!("{text}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("hall: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
