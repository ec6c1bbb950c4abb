//! File formats for the `clover` command line: tuple configs, growth tables
//! and verification reports.

use std::io::{Read, Write};

use anyhow::{bail, Context, Result};
use clover_core::monomials::{FamilyCounts, GrowthRow, GrowthTable};
use clover_core::params::{ParameterTuple, Ratio, TupleRule};
use clover_core::report::VerificationReport;
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

/// JSON form of a tuple: `{"p": 2, "kind": "constant", "params": {"S": 1, "R": 1}, "length": 8}`.
///
/// `params` by kind: `constant` takes `S`, `R`; `periodic` and `explicit` take
/// `pairs: [[S, R], …]`; `kappa` takes `kappa`; `qkappa` takes `q`, `kappa`.
/// `kappa` may be a number or a string such as `"1/2"`. `length`, when present,
/// is the number of entries materialized eagerly to validate the rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TupleConfig {
    pub p: u32,
    pub kind: String,
    #[serde(default)]
    pub params: Map<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<usize>,
}

fn field<'a>(params: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    params.get(key).with_context(|| format!("missing params.{key}"))
}

fn as_u32(v: &Value, key: &str) -> Result<u32> {
    v.as_u64()
        .and_then(|x| u32::try_from(x).ok())
        .with_context(|| format!("params.{key} must be a non-negative integer"))
}

fn as_ratio(v: &Value) -> Result<Ratio> {
    let s = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        _ => bail!("params.kappa must be a number or a string"),
    };
    Ok(s.parse()?)
}

fn as_pairs(v: &Value) -> Result<Vec<(u32, u32)>> {
    let bad = || anyhow::anyhow!("params.pairs must be a list of [S, R] pairs");
    v.as_array()
        .ok_or_else(bad)?
        .iter()
        .map(|pair| match pair.as_array().map(Vec::as_slice) {
            Some([s, r]) => Ok((as_u32(s, "pairs")?, as_u32(r, "pairs")?)),
            _ => Err(bad()),
        })
        .collect()
}

impl TupleConfig {
    pub fn to_tuple(&self) -> Result<ParameterTuple> {
        let ps = &self.params;
        let rule = match self.kind.as_str() {
            "constant" => {
                TupleRule::Constant { s: as_u32(field(ps, "S")?, "S")?, r: as_u32(field(ps, "R")?, "R")? }
            }
            "periodic" => TupleRule::Periodic(as_pairs(field(ps, "pairs")?)?),
            "explicit" => TupleRule::Explicit(as_pairs(field(ps, "pairs")?)?),
            "kappa" => TupleRule::Kappa(as_ratio(field(ps, "kappa")?)?),
            "qkappa" => {
                TupleRule::QKappa { q: as_u32(field(ps, "q")?, "q")?, kappa: as_ratio(field(ps, "kappa")?)? }
            }
            other => bail!("unknown tuple kind `{other}`"),
        };
        let tuple = ParameterTuple::new(self.p, rule)?;
        if let Some(len) = self.length {
            tuple.materialized(len)?;
        }
        Ok(tuple)
    }

    pub fn from_tuple(tuple: &ParameterTuple) -> Self {
        let pairs = |v: &[(u32, u32)]| json!({ "pairs": v.iter().map(|&(s, r)| [s, r]).collect::<Vec<_>>() });
        let (kind, params) = match tuple.rule() {
            TupleRule::Constant { s, r } => ("constant", json!({ "S": s, "R": r })),
            TupleRule::Periodic(v) => ("periodic", pairs(v)),
            TupleRule::Explicit(v) => ("explicit", pairs(v)),
            TupleRule::Kappa(k) => ("kappa", json!({ "kappa": k.to_string() })),
            TupleRule::QKappa { q, kappa } => ("qkappa", json!({ "q": q, "kappa": kappa.to_string() })),
        };
        let Value::Object(params) = params else { unreachable!() };
        TupleConfig { p: tuple.p(), kind: kind.into(), params, length: None }
    }
}

/// Reads `--tuple`: a spec string such as `constant:1,1`, inline JSON, or a path to a JSON file.
/// The prime comes from `p` unless the JSON form carries its own.
pub fn parse_tuple_arg(p: Option<u32>, arg: &str) -> Result<ParameterTuple> {
    let arg = arg.trim();
    let json_text = if arg.starts_with('{') {
        Some(arg.to_string())
    } else if arg.ends_with(".json") {
        Some(std::fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?)
    } else {
        None
    };
    match json_text {
        Some(text) => {
            let cfg: TupleConfig = serde_json::from_str(&text).context("parsing tuple JSON")?;
            if let Some(p) = p.filter(|&p| p != cfg.p) {
                bail!("--p {p} disagrees with the tuple config (p = {})", cfg.p);
            }
            cfg.to_tuple()
        }
        None => {
            let p = p.context("--p is required with a tuple spec string")?;
            Ok(ParameterTuple::parse(p, arg)?)
        }
    }
}

pub const CSV_HEADER: [&str; 7] =
    ["m", "gamma_total", "first", "second", "power_first", "power_second", "log_gamma_over_log_m"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRecord {
    pub m: String,
    pub gamma_total: String,
    pub first: String,
    pub second: String,
    pub power_first: String,
    pub power_second: String,
    pub log_gamma_over_log_m: String,
}

impl TableRecord {
    pub fn from_row(row: &GrowthRow) -> Self {
        let c = &row.counts;
        TableRecord {
            m: row.m.to_string(),
            gamma_total: row.total().to_string(),
            first: c.first.to_string(),
            second: c.second.to_string(),
            power_first: c.power_first().to_string(),
            power_second: c.power_second().to_string(),
            log_gamma_over_log_m: row.log_ratio().map(|x| format!("{x:.12}")).unwrap_or_default(),
        }
    }

    /// Rebuilds a row. The split of `power_first` into `v` and `w` powers is not
    /// stored, so it all lands on `power_v`; totals are unaffected.
    pub fn to_row(&self) -> Result<GrowthRow> {
        let big = |name: &str, s: &str| -> Result<BigUint> {
            s.trim().parse().with_context(|| format!("column {name}: `{s}` is not a non-negative integer"))
        };
        let counts = FamilyCounts {
            first: big("first", &self.first)?,
            second: big("second", &self.second)?,
            power_v: big("power_first", &self.power_first)?,
            power_w: BigUint::default(),
            power_u: big("power_second", &self.power_second)?,
        };
        let row = GrowthRow { m: big("m", &self.m)?, counts };
        if row.total() != big("gamma_total", &self.gamma_total)? {
            bail!("row m={}: gamma_total is not the sum of the family columns", self.m);
        }
        Ok(row)
    }
}

pub fn write_table_csv<W: Write>(table: &GrowthTable, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if table.rows.is_empty() {
        w.write_record(CSV_HEADER)?;
    }
    for row in &table.rows {
        w.serialize(TableRecord::from_row(row))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_table_csv<R: Read>(input: R) -> Result<Vec<GrowthRow>> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != CSV_HEADER {
        bail!("unexpected CSV header {header:?}");
    }
    let mut rows: Vec<GrowthRow> = Vec::new();
    for rec in r.deserialize::<TableRecord>() {
        let row = rec?.to_row()?;
        if rows.last().is_some_and(|prev| prev.m >= row.m) {
            bail!("rows must be strictly increasing in m (at m={})", row.m);
        }
        rows.push(row);
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableJson {
    pub tuple: TupleConfig,
    pub spec: String,
    pub rows: Vec<TableRecord>,
}

pub fn table_to_json(table: &GrowthTable) -> TableJson {
    TableJson {
        tuple: TupleConfig::from_tuple(&table.tuple),
        spec: table.tuple.rule().to_string(),
        rows: table.rows.iter().map(TableRecord::from_row).collect(),
    }
}

pub fn table_from_json(doc: &TableJson) -> Result<GrowthTable> {
    let tuple = doc.tuple.to_tuple()?;
    let rows = doc.rows.iter().map(TableRecord::to_row).collect::<Result<Vec<_>>>()?;
    if rows.windows(2).any(|w| w[0].m >= w[1].m) {
        bail!("rows must be strictly increasing in m");
    }
    Ok(GrowthTable { tuple, rows })
}

/// One JSON line per check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportLine {
    pub suite: String,
    #[serde(rename = "check-id")]
    pub check_id: String,
    pub params: String,
    pub status: String,
    pub witness: String,
}

pub fn report_lines(suite: &str, params: &str, report: &VerificationReport) -> Vec<ReportLine> {
    report
        .records
        .iter()
        .map(|r| ReportLine {
            suite: suite.into(),
            check_id: r.id.clone(),
            params: params.into(),
            status: r.status.as_str().into(),
            witness: r.detail.clone(),
        })
        .collect()
}

pub fn write_report_lines<W: Write>(mut out: W, lines: &[ReportLine]) -> Result<()> {
    for line in lines {
        serde_json::to_writer(&mut out, line)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Human summary: one row per suite with pass, fail and outside-zone counts.
pub fn summary_table(lines: &[ReportLine]) -> String {
    let mut suites: Vec<(&str, [usize; 3])> = Vec::new();
    for l in lines {
        let k = match l.status.as_str() {
            "pass" => 0,
            "fail" => 1,
            _ => 2,
        };
        match suites.iter_mut().find(|s| s.0 == l.suite) {
            Some(s) => s.1[k] += 1,
            None => {
                let mut c = [0; 3];
                c[k] = 1;
                suites.push((&l.suite, c));
            }
        }
    }
    let mut s = format!("{:<16} {:>6} {:>6} {:>8}\n", "suite", "pass", "fail", "outside");
    for (name, [p, f, o]) in suites {
        s += &format!("{name:<16} {p:>6} {f:>6} {o:>8}\n");
    }
    s
}
