//! Command-line front end. Every command produces a table of records with a
//! fixed column set, written as CSV or as a JSON array of flat objects.
//!
//! Reals are printed with 12 significant digits. Run metadata (seed, summary
//! statistics, warnings) goes to standard error so the tables stay clean.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, ValueEnum};

use crate::counterexample::{eps_sweep, inverse_image_state};
use crate::lu::lu_equality_check;
use crate::optimize::SearchOptions;
use crate::state::{dicke, overlap, sym_to_dense};
use crate::symfid::{
    brute_force_sym_fidelity, closed_form_k1, default_search, fig1_search, limit_k1,
    max_f_dn1_with, max_sym_fidelity_with, y_minus_one_warning,
};

/// Significant digits of every real in the output.
pub const SIG_DIGITS: usize = 12;

/// The nine `(N, k)` entries of the `k' = 1` table.
pub const TABLE1_ENTRIES: [(usize, usize); 9] = [
    (4, 2),
    (5, 2),
    (6, 2),
    (6, 3),
    (7, 2),
    (7, 3),
    (8, 2),
    (8, 3),
    (8, 4),
];

/// `N` at which the closed form is compared with its limit.
pub const LARGE_N: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Closed form against numeric maximum for the nine tabulated entries.
    Table1,
    /// Symmetric fidelity with |D_N^(1)> for N = 4..n-max, k = 2..N/2.
    Fig1,
    /// Large-N limits against the closed form at N = 10^4.
    Limits,
    /// Fidelity of the counterexample family along a log-spaced eps range.
    CeSweep,
    /// Fidelity of the inverse-image state with |D_N^(k)>.
    Inverse,
    /// Independent against symmetric local unitary optimization.
    LuCheck,
    /// Maximal fidelity of |D_N^(k)> with symmetric members of class k'.
    Symfid,
    /// The reduced formula against a dense brute-force maximization.
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Parser)]
#[command(
    name = "symfid",
    version,
    about = "Fidelities of symmetric multiqubit states"
)]
pub struct RunConfig {
    #[arg(value_enum)]
    pub command: Command,
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 1)]
    pub kp: usize,
    #[arg(long, default_value_t = 100)]
    pub n_max: usize,
    #[arg(long, default_value_t = 8)]
    pub k_max: usize,
    #[arg(long, default_value_t = 1e-4)]
    pub eps_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub eps_max: f64,
    #[arg(long, default_value_t = 20)]
    pub points: usize,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(long, default_value_t = 20)]
    pub restarts: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Search grid as `θ,θ',y` point counts (default depends on the command).
    #[arg(long, value_parser = parse_grid)]
    pub grid: Option<[usize; 3]>,
    /// Simplex termination diameter.
    #[arg(long)]
    pub xtol: Option<f64>,
    /// Points per axis of the brute-force oracle grid.
    #[arg(long, default_value_t = 9)]
    pub oracle_grid: usize,
}

impl RunConfig {
    /// Parses flags from an argument list whose first item is the program name.
    pub fn try_from_args<I, T>(args: I) -> Result<Self, clap::Error>
    where
        I: IntoIterator<Item = T>,
        T: Into<std::ffi::OsString> + Clone,
    {
        RunConfig::try_parse_from(args)
    }

    fn search(&self, base: SearchOptions<3>) -> SearchOptions<3> {
        let mut opts = base;
        if let Some(g) = self.grid {
            opts.grid = g;
        }
        if let Some(x) = self.xtol {
            opts.xtol = x;
        }
        opts
    }
}

fn parse_grid(s: &str) -> Result<[usize; 3], String> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match parts.as_slice() {
        &[a, b, c] if a > 0 && b > 0 && c > 0 => Ok([a, b, c]),
        _ => Err(format!("expected three positive counts, got {s:?}")),
    }
}

/// One cell of a record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value {
    Int(i64),
    Real(f64),
    Bool(bool),
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Real(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl Value {
    fn text(&self) -> String {
        match *self {
            Value::Int(v) => v.to_string(),
            Value::Real(v) => format_real(v),
            Value::Bool(v) => v.to_string(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match *self {
            Value::Int(v) => v.into(),
            Value::Bool(v) => v.into(),
            Value::Real(v) => format_real(v)
                .parse::<f64>()
                .ok()
                .and_then(serde_json::Number::from_f64)
                .map_or(serde_json::Value::Null, serde_json::Value::Number),
        }
    }
}

/// A table with a fixed header, plus lines for standard error.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
    pub notes: Vec<String>,
}

impl Table {
    fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            ..Table::default()
        }
    }

    fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Column `name` of every row, as reals.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| *c == name)?;
        Some(
            self.rows
                .iter()
                .map(|r| match r[idx] {
                    Value::Int(v) => v as f64,
                    Value::Real(v) => v,
                    Value::Bool(v) => f64::from(u8::from(v)),
                })
                .collect(),
        )
    }

    pub fn write_csv<W: Write>(&self, w: W) -> anyhow::Result<()> {
        let mut out = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(w);
        out.write_record(&self.columns)?;
        for row in &self.rows {
            out.write_record(row.iter().map(Value::text))?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn write_json<W: Write>(&self, mut w: W) -> anyhow::Result<()> {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.to_string(), v.json()))
                    .collect();
                serde_json::Value::Object(obj)
            })
            .collect();
        serde_json::to_writer_pretty(&mut w, &rows)?;
        writeln!(w)?;
        Ok(())
    }
}

/// `%.12g`-style formatting.
pub fn format_real(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= SIG_DIGITS as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn run_table1(cfg: &RunConfig) -> anyhow::Result<Table> {
    let opts = cfg.search(default_search());
    let mut t = Table::new(&["N", "k", "fs_closed", "fs_numeric", "abs_diff"]);
    for (n, k) in TABLE1_ENTRIES {
        let closed = closed_form_k1(n, k)?;
        let numeric = max_sym_fidelity_with(n, k, 1, &opts)?.value;
        t.push(vec![
            n.into(),
            k.into(),
            closed.into(),
            numeric.into(),
            (closed - numeric).abs().into(),
        ]);
    }
    Ok(t)
}

pub fn run_fig1(cfg: &RunConfig) -> anyhow::Result<Table> {
    if cfg.n_max < 4 {
        bail!("--n-max must be at least 4 (got {})", cfg.n_max);
    }
    let opts = cfg.search(fig1_search());
    let mut t = Table::new(&["N", "k", "fs_symmetric", "f_full"]);
    for n in 4..=cfg.n_max {
        for k in 2..=n / 2 {
            let fs = max_f_dn1_with(n, k, &opts)?.value;
            t.push(vec![n.into(), k.into(), fs.into(), 1.0.into()]);
        }
    }
    Ok(t)
}

pub fn run_limits(cfg: &RunConfig) -> anyhow::Result<Table> {
    if cfg.k_max < 2 {
        bail!("--k-max must be at least 2 (got {})", cfg.k_max);
    }
    let mut t = Table::new(&["k", "limit", "fs_at_large_n", "abs_diff"]);
    for k in 2..=cfg.k_max {
        let lim = limit_k1(k)?;
        let large = closed_form_k1(LARGE_N, k)?;
        t.push(vec![
            k.into(),
            lim.into(),
            large.into(),
            (lim - large).abs().into(),
        ]);
    }
    Ok(t)
}

pub fn run_ce_sweep(cfg: &RunConfig) -> anyhow::Result<Table> {
    let sweep = eps_sweep(cfg.n, cfg.k, cfg.eps_min, cfg.eps_max, cfg.points)?;
    let mut t = Table::new(&["eps", "fidelity", "residual_norm"]);
    for r in sweep.records {
        t.push(vec![
            r.eps.into(),
            r.fidelity.into(),
            r.residual_norm.into(),
        ]);
    }
    Ok(t)
}

pub fn run_inverse(cfg: &RunConfig) -> anyhow::Result<Table> {
    let state = inverse_image_state(cfg.n, cfg.k)?;
    let target = sym_to_dense(&dicke(cfg.n, cfg.k)?)?;
    let f = overlap(&target, &state)?.fidelity;
    let mut t = Table::new(&["N", "k", "fidelity"]);
    t.push(vec![cfg.n.into(), cfg.k.into(), f.into()]);
    Ok(t)
}

pub fn run_lu_check(cfg: &RunConfig) -> anyhow::Result<Table> {
    let results = lu_equality_check(cfg.n, cfg.trials, cfg.restarts, cfg.seed)?;
    let mut t = Table::new(&["trial", "value_independent", "value_symmetric", "gap"]);
    let mut max_gap = 0.0f64;
    for r in &results {
        max_gap = max_gap.max(r.gap.abs());
        t.push(vec![
            r.trial.into(),
            r.value_independent.into(),
            r.value_symmetric.into(),
            r.gap.into(),
        ]);
    }
    t.notes.push(format!("max_gap={}", format_real(max_gap)));
    Ok(t)
}

pub fn run_symfid(cfg: &RunConfig) -> anyhow::Result<Table> {
    let r = max_sym_fidelity_with(cfg.n, cfg.k, cfg.kp, &cfg.search(default_search()))?;
    let mut t = Table::new(&["N", "k", "kp", "fs", "x", "xp", "y", "converged"]);
    t.push(vec![
        cfg.n.into(),
        cfg.k.into(),
        cfg.kp.into(),
        r.value.into(),
        r.argmax.x.into(),
        r.argmax.xp.into(),
        r.argmax.y.into(),
        r.converged.into(),
    ]);
    if let Some(w) = y_minus_one_warning(cfg.n, cfg.k, cfg.kp, &r) {
        t.notes.push(w);
    }
    Ok(t)
}

pub fn run_oracle(cfg: &RunConfig) -> anyhow::Result<Table> {
    let formula = max_sym_fidelity_with(cfg.n, cfg.k, cfg.kp, &cfg.search(default_search()))?.value;
    let brute = brute_force_sym_fidelity(&dicke(cfg.n, cfg.k)?, cfg.n, cfg.kp, cfg.oracle_grid)?;
    let mut t = Table::new(&["N", "k", "kp", "fs_formula", "fs_brute_force", "abs_diff"]);
    t.push(vec![
        cfg.n.into(),
        cfg.k.into(),
        cfg.kp.into(),
        formula.into(),
        brute.into(),
        (formula - brute).abs().into(),
    ]);
    Ok(t)
}

/// Runs the selected command and returns its table.
pub fn execute(cfg: &RunConfig) -> anyhow::Result<Table> {
    let mut t = match cfg.command {
        Command::Table1 => run_table1(cfg),
        Command::Fig1 => run_fig1(cfg),
        Command::Limits => run_limits(cfg),
        Command::CeSweep => run_ce_sweep(cfg),
        Command::Inverse => run_inverse(cfg),
        Command::LuCheck => run_lu_check(cfg),
        Command::Symfid => run_symfid(cfg),
        Command::Oracle => run_oracle(cfg),
    }?;
    if cfg.command == Command::LuCheck {
        t.notes.insert(0, format!("seed={}", cfg.seed));
    }
    Ok(t)
}

/// Executes and writes to `--out` or standard output.
pub fn run(cfg: &RunConfig) -> anyhow::Result<Table> {
    let table = execute(cfg)?;
    match &cfg.out {
        Some(path) => {
            let file =
                File::create(path).with_context(|| format!("creating {}", path.display()))?;
            write_table(&table, cfg.format, BufWriter::new(file))?;
        }
        None => write_table(&table, cfg.format, io::stdout().lock())?,
    }
    Ok(table)
}

fn write_table<W: Write>(table: &Table, format: Format, w: W) -> anyhow::Result<()> {
    match format {
        Format::Csv => table.write_csv(w),
        Format::Json => table.write_json(w),
    }
}

/// Entry point for the binary: 0 on success, 1 on runtime failure, 2 on
/// usage errors.
pub fn main() -> ExitCode {
    let cfg = match RunConfig::try_parse() {
        Ok(cfg) => cfg,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cfg) {
        Ok(table) => {
            for note in &table.notes {
                eprintln!("{note}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(args: &[&str]) -> RunConfig {
        RunConfig::try_from_args(std::iter::once("symfid").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn real_formatting() {
        assert_eq!(format_real(1.0 / 14.0), "0.0714285714286");
        assert_eq!(format_real(0.5), "0.5");
        assert_eq!(format_real(1.0), "1");
        assert_eq!(format_real(0.0), "0");
        assert_eq!(format_real(1e-5), "1e-05");
        assert_eq!(format_real(1.2345e-7), "1.2345e-07");
        assert_eq!(format_real(-2.5), "-2.5");
        assert_eq!(format_real(123456.0), "123456");
        assert_eq!(format_real(1e13), "1e+13");
        assert_eq!(format_real(std::f64::consts::PI), "3.14159265359");
    }

    #[test]
    fn unknown_command_is_usage_error() {
        let err = RunConfig::try_from_args(["symfid", "bogus"]).unwrap_err();
        assert!(err.use_stderr());
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn grid_override() {
        let c = cfg(&["symfid", "--grid", "5,6,7", "--xtol", "1e-6"]);
        let o = c.search(default_search());
        assert_eq!(o.grid, [5, 6, 7]);
        assert_eq!(o.xtol, 1e-6);
        let bad = RunConfig::try_from_args(["symfid", "symfid", "--grid", "5,6"]).unwrap_err();
        assert_eq!(bad.exit_code(), 2);
    }

    #[test]
    fn inverse_prints_one_fourteenth() {
        let t = execute(&cfg(&["inverse", "--n", "4", "--k", "2"])).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "N,k,fidelity\n4,2,0.0714285714286\n"
        );
    }

    #[test]
    fn json_rows_are_flat_objects() {
        let t = execute(&cfg(&["limits", "--k-max", "3"])).unwrap();
        let mut buf = Vec::new();
        t.write_json(&mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        let rows = v.as_array().unwrap();
        assert_eq!(rows.len(), 2);
        let keys: Vec<&str> = rows[0]
            .as_object()
            .unwrap()
            .keys()
            .map(String::as_str)
            .collect();
        assert_eq!(keys, ["k", "limit", "fs_at_large_n", "abs_diff"]);
    }

    #[test]
    fn runtime_errors_surface() {
        assert!(execute(&cfg(&["fig1", "--n-max", "3"])).is_err());
        assert!(execute(&cfg(&["ce-sweep", "--eps-min", "0"])).is_err());
    }

    #[test]
    fn table1_columns_and_agreement() {
        let t = execute(&cfg(&["table1"])).unwrap();
        assert_eq!(t.columns, ["N", "k", "fs_closed", "fs_numeric", "abs_diff"]);
        assert_eq!(t.rows.len(), 9);
        assert!(t.column("abs_diff").unwrap().iter().all(|d| *d < 1e-6));
    }
}
