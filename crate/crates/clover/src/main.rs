use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use clover::{
    parse_tuple_arg, read_table_csv, report_lines, summary_table, table_from_json, table_to_json,
    write_report_lines, write_table_csv, ReportLine, TableJson,
};
use clover_core::analytics::{
    check_cubic_bounds, check_growth_sandwich, check_quasilinear_bounds, estimate_exponent, gk_density_scan,
    gk_periodic, kappa_constant, FitLevel,
};
use clover_core::closure::{
    clover_generators, nil_sampling, restricted_closure, trusted_bound, verify_basis_theorem, verify_grading,
};
use clover_core::derivations::relation_suite;
use clover_core::dpalgebra::DpContext;
use clover_core::monomials::{growth_table, sample_weights, sampled_table, GrowthTable, DEFAULT_ROW_CAP};
use clover_core::params::{ParameterTuple, TupleRule};
use num_bigint::BigUint;
use serde_json::json;

#[derive(Parser)]
#[command(name = "clover", version, about = "Exact computations in clover restricted Lie algebras")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct TupleArgs {
    /// The prime p.
    #[arg(long)]
    p: Option<u32>,
    /// `constant:S,R`, `periodic:S0,R0;…`, `kappa:K`, `qkappa:q,K`, `explicit:S0,R0;…`, inline JSON or a .json file.
    #[arg(long)]
    tuple: String,
}

impl TupleArgs {
    fn resolve(&self) -> Result<ParameterTuple> {
        parse_tuple_arg(self.p, &self.tuple)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Period,
    Quasilinear,
}

#[derive(Subcommand)]
enum Cmd {
    /// Growth table of the monomial counts up to a weight.
    Growth {
        #[command(flatten)]
        tuple: TupleArgs,
        #[arg(long)]
        max_weight: BigUint,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Restricted closure in the depth-N truncation; `--check` runs the basis, grading and relation suites.
    Basis {
        #[command(flatten)]
        tuple: TupleArgs,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        check: bool,
    },
    /// GK dimension of a periodic tuple, or a scan over constant tuples.
    Gk {
        #[arg(long)]
        p: u32,
        #[arg(long = "S", requires = "r", conflicts_with_all = ["tuple", "scan"])]
        s: Option<u32>,
        #[arg(long = "R", requires = "s")]
        r: Option<u32>,
        #[arg(long, conflicts_with = "scan")]
        tuple: Option<String>,
        /// Scan all constant tuples with 1 <= S, R <= max.
        #[arg(long, requires = "max")]
        scan: bool,
        #[arg(long)]
        max: Option<u32>,
        /// Window `a,b` for the gap measurement; the scan fails if some gap exceeds 0.1.
        #[arg(long, requires = "scan")]
        interval: Option<String>,
    },
    /// Nil-index sampling in the closure.
    Nil {
        #[command(flatten)]
        tuple: TupleArgs,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        max_terms: usize,
        /// Draw terms only from basis vectors of at most this weight (diagnostic).
        #[arg(long)]
        max_weight: Option<u64>,
    },
    /// Explicit finite-m growth bounds.
    Bounds {
        #[command(flatten)]
        tuple: TupleArgs,
        #[arg(long)]
        max_weight: BigUint,
        /// Defaults to `period` for periodic tuples and `quasilinear` otherwise.
        #[arg(long, value_enum)]
        suite: Option<Suite>,
    },
    /// Fits the growth exponent of a table written by `growth`.
    Fit {
        #[arg(long = "in")]
        input: PathBuf,
        /// `gk` or a level q >= 0.
        #[arg(long)]
        level: String,
        #[arg(long, requires = "tuple")]
        p: Option<u32>,
        /// Tuple used for the reference constant (JSON tables carry their own).
        #[arg(long)]
        tuple: Option<String>,
    },
}

fn params_str(tuple: &ParameterTuple, extra: &str) -> String {
    format!("p={} tuple={}{extra}", tuple.p(), tuple.rule())
}

/// Dense rows when they fit, otherwise a sampled set of weights.
fn table_for(tuple: &ParameterTuple, max: &BigUint) -> Result<GrowthTable> {
    match u64::try_from(max) {
        Ok(m) if m <= DEFAULT_ROW_CAP => Ok(growth_table(tuple, m)?),
        _ => {
            eprintln!("max weight above {DEFAULT_ROW_CAP}: using sampled rows");
            Ok(sampled_table(tuple, &sample_weights(tuple, max, 4096, 16)?)?)
        }
    }
}

fn emit_reports(lines: &[ReportLine]) -> Result<bool> {
    write_report_lines(io::stdout().lock(), lines)?;
    eprint!("{}", summary_table(lines));
    Ok(lines.iter().all(|l| l.status != "fail"))
}

fn print_json(v: &serde_json::Value) -> Result<bool> {
    println!("{}", serde_json::to_string(v)?);
    Ok(true)
}

fn parse_interval(s: &str) -> Result<(f64, f64)> {
    let (a, b) = s.split_once(',').context("--interval takes `a,b`")?;
    let (a, b): (f64, f64) = (a.trim().parse()?, b.trim().parse()?);
    if a.partial_cmp(&b) != Some(std::cmp::Ordering::Less) {
        bail!("--interval needs a < b");
    }
    Ok((a, b))
}

fn run(cmd: Cmd) -> Result<bool> {
    match cmd {
        Cmd::Growth { tuple, max_weight, format, out } => {
            let t = tuple.resolve()?;
            let table = table_for(&t, &max_weight)?;
            let sink: Box<dyn Write> = match &out {
                Some(path) => {
                    Box::new(File::create(path).with_context(|| format!("creating {}", path.display()))?)
                }
                None => Box::new(io::stdout().lock()),
            };
            let mut sink = BufWriter::new(sink);
            match format {
                Format::Csv => write_table_csv(&table, &mut sink)?,
                Format::Json => {
                    serde_json::to_writer_pretty(&mut sink, &table_to_json(&table))?;
                    sink.write_all(b"\n")?;
                }
            }
            sink.flush()?;
            Ok(true)
        }
        Cmd::Basis { tuple, depth, check } => {
            let t = tuple.resolve()?;
            let params = params_str(&t, &format!(" depth={depth}"));
            if check {
                let mut lines = report_lines("basis", &params, &verify_basis_theorem(&t, depth)?);
                lines.extend(report_lines("grading", &params, &verify_grading(&t, depth)?));
                let ctx = DpContext::new(&t, depth)?;
                lines.extend(report_lines("relations", &params, &relation_suite(&ctx)?));
                return emit_reports(&lines);
            }
            let ctx = DpContext::new(&t, depth)?;
            let cap = trusted_bound(&ctx)?;
            let basis = restricted_closure(&ctx, &clover_generators(&ctx)?, cap)?;
            let mut out = io::stdout().lock();
            for (w, d) in basis.dims_by_weight() {
                writeln!(out, "{}", json!({ "weight": w, "dim": d }))?;
            }
            eprintln!("{} basis vectors up to weight {cap}", basis.dim());
            Ok(true)
        }
        Cmd::Gk { p, s, r, tuple, scan, max, interval } => {
            if scan {
                let g = max.context("--scan needs --max")?;
                let window = interval.as_deref().map(parse_interval).transpose()?;
                let res = gk_density_scan(p, g, g, window.unwrap_or((1.0, 3.0)))?;
                let (lo, hi) = (res.min(), res.max());
                let gap_ok = window.is_none() || res.max_gap <= 0.1;
                print_json(&json!({
                    "p": p, "max": g, "count": res.values.len(),
                    "min": { "S": lo.0, "R": lo.1, "lambda": [lo.2.lo, lo.2.hi] },
                    "max_lambda": { "S": hi.0, "R": hi.1, "lambda": [hi.2.lo, hi.2.hi] },
                    "all_in_range": res.all_in_range,
                    "window": [res.window.0, res.window.1],
                    "max_gap": res.max_gap,
                }))?;
                return Ok(res.all_in_range && gap_ok);
            }
            let t = match (s, r, tuple) {
                (Some(s), Some(r), None) => ParameterTuple::constant(p, s, r)?,
                (None, None, Some(spec)) => parse_tuple_arg(Some(p), &spec)?,
                _ => bail!("gk needs either --S and --R, or --tuple, or --scan"),
            };
            let g = gk_periodic(&t)?;
            print_json(&json!({
                "p": g.p, "tuple": t.rule().to_string(),
                "mu": g.mu.to_string(), "sigma": g.sigma,
                "lambda": [g.lambda.lo, g.lambda.hi],
                "in_unit_to_three": g.lambda_in_unit_to_three(),
            }))?;
            Ok(g.lambda_in_unit_to_three())
        }
        Cmd::Nil { tuple, depth, samples, seed, max_terms, max_weight } => {
            let t = tuple.resolve()?;
            let s = nil_sampling(&t, depth, samples, max_terms, seed, max_weight)?;
            print_json(&json!({
                "p": t.p(), "tuple": t.rule().to_string(), "depth": depth, "seed": seed,
                "samples": s.samples, "conclusive": s.conclusive(), "inconclusive": s.inconclusive,
                "conclusive_fraction": s.conclusive_fraction(),
                "index_histogram": s.histogram,
            }))
        }
        Cmd::Bounds { tuple, max_weight, suite } => {
            let t = tuple.resolve()?;
            let suite =
                suite.unwrap_or(if t.rule().period().is_some() { Suite::Period } else { Suite::Quasilinear });
            let table = table_for(&t, &max_weight)?;
            let params = params_str(&t, &format!(" max_weight={max_weight} rows={}", table.rows.len()));
            let lines = match suite {
                Suite::Period => {
                    let mut l = report_lines("sandwich", &params, &check_growth_sandwich(&t, &table)?);
                    l.extend(report_lines("cubic", &params, &check_cubic_bounds(&t, &table)?));
                    l
                }
                Suite::Quasilinear => {
                    report_lines("quasilinear", &params, &check_quasilinear_bounds(&t, &table)?)
                }
            };
            emit_reports(&lines)
        }
        Cmd::Fit { input, level, p, tuple } => {
            let level = match level.as_str() {
                "gk" => FitLevel::Gk,
                q => FitLevel::Level(q.parse().context("--level takes `gk` or a non-negative integer")?),
            };
            let file = File::open(&input).with_context(|| format!("opening {}", input.display()))?;
            let given = tuple.map(|spec| parse_tuple_arg(p, &spec)).transpose()?;
            let table = if input.extension().is_some_and(|e| e == "json") {
                let doc: TableJson = serde_json::from_reader(file).context("parsing table JSON")?;
                table_from_json(&doc)?
            } else {
                // CSV tables carry no tuple; fitting only reads m and the totals.
                let t = match &given {
                    Some(t) => t.clone(),
                    None => ParameterTuple::constant(2, 1, 1)?,
                };
                GrowthTable { tuple: t, rows: read_table_csv(file)? }
            };
            let fit = estimate_exponent(&table, level)?;
            let reference =
                given.as_ref().or((!input.extension().is_some_and(|e| e == "csv")).then_some(&table.tuple));
            let reference_c = match (level, reference.map(|t| (t.p(), t.rule()))) {
                (FitLevel::Level(0), Some((p, TupleRule::Kappa(k)))) => Some(kappa_constant(p, k.to_f64())),
                _ => None,
            };
            print_json(&json!({
                "level": level.to_string(), "beta": fit.beta, "intercept": fit.intercept, "C": fit.scale,
                "reference_C": reference_c,
                "window": [fit.window.0.to_string(), fit.window.1.to_string()],
                "rows": fit.rows, "rms_residual": fit.rms_residual, "max_residual": fit.max_residual,
            }))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if e.downcast_ref::<io::Error>().is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe) => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
