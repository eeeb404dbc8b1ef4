//! Command line front end: argument handling, caching and output formatting
//! on top of the `modunits` library.

pub mod cache;
pub mod record;

use std::fmt;
use std::io::{self, Write};
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use modunits::classgroup::{conjecture_report_for, p_primary, GroupStructure};
use modunits::corpus::corpus;
use modunits::numtheory::is_prime;
use modunits::qexpansion::{expand_product, DEFAULT_TRUNCATION};
use modunits::{basis, Int};
use rayon::prelude::*;
use serde_json::json;

use cache::Cache;
use record::ResultRecord;

pub const CACHE_ENV: &str = "MODUNITS_CACHE_DIR";

#[derive(Debug, Parser)]
#[command(name = "modunits", version, about = "Cuspidal class groups of X1(N) from Siegel units")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Generator of (Z/p^k)^x/{±1} to use for prime-power levels.
    #[arg(long, global = true, value_name = "a")]
    pub generator: Option<u64>,
    /// Directory for cached results.
    #[arg(long, global = true, env = CACHE_ENV, value_name = "PATH")]
    pub cache_dir: Option<PathBuf>,
    /// Ignore the cache entirely.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Include wall-clock timings in JSON records.
    #[arg(long, global = true)]
    pub timings: bool,
}

fn level(s: &str) -> Result<u64, String> {
    let n: u64 = s.parse().map_err(|_| format!("{s:?} is not a level"))?;
    if n < 5 {
        return Err(format!("level must be at least 5, got {n}"));
    }
    Ok(n)
}

/// Inclusive range written `A..B` or `A..=B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelRange {
    pub start: u64,
    pub end: u64,
}

impl FromStr for LevelRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s.split_once("..").ok_or_else(|| format!("expected A..B, got {s:?}"))?;
        let b = b.strip_prefix('=').unwrap_or(b);
        let (start, end) = (level(a)?, level(b)?);
        if start > end {
            return Err(format!("empty range {s}"));
        }
        Ok(LevelRange { start, end })
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Class number of the cuspidal divisor class group.
    Classnum {
        #[arg(value_parser = level)]
        n: u64,
    },
    /// Invariant factors of the class group.
    Structure {
        #[arg(value_parser = level)]
        n: u64,
        /// Also list generators with their orders.
        #[arg(long)]
        generators: bool,
    },
    /// Basis of the modular units, one element per line.
    Basis {
        #[arg(value_parser = level)]
        n: u64,
    },
    /// The p-primary part of the class group.
    Primary {
        #[arg(value_parser = level)]
        n: u64,
        p: u64,
    },
    /// Predicted against computed p-primary part at level p^n.
    Conjecture { p: u64, n: u32 },
    /// Class groups over a range of levels.
    Table {
        range: LevelRange,
        /// Compare with the embedded reference tables.
        #[arg(long)]
        check: bool,
        /// Worker threads (defaults to the number of CPUs).
        #[arg(long)]
        jobs: Option<usize>,
        /// Largest level accepted.
        #[arg(long, default_value_t = 400)]
        max_level: u64,
    },
    /// Run every internal cross-check at one level.
    Verify {
        #[arg(value_parser = level)]
        n: u64,
    },
    /// q-expansions of the basis elements.
    Qcheck {
        #[arg(value_parser = level)]
        n: u64,
        #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
        trunc: usize,
    },
    /// p-primary parts for prime-power levels against the reference table.
    PrimaryTable {
        /// Largest level p^n included.
        #[arg(long, default_value_t = 243)]
        max_level: u64,
    },
}

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments.
    Usage(String),
    /// A cross-check or reference comparison failed.
    Inconsistent(String),
    Io(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Inconsistent(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Inconsistent(m) => write!(f, "consistency failure: {m}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<modunits::Error> for CliError {
    fn from(e: modunits::Error) -> Self {
        if e.is_user_error() {
            CliError::Usage(e.to_string())
        } else {
            CliError::Inconsistent(e.to_string())
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

type Out<'a> = &'a mut dyn Write;

pub struct App {
    global: Global,
    cache: Option<Cache>,
}

impl App {
    pub fn new(global: Global) -> Self {
        let cache = match (&global.cache_dir, global.no_cache) {
            (Some(dir), false) => Some(Cache::new(dir)),
            _ => None,
        };
        App { global, cache }
    }

    /// The record for `N`, from the cache when possible.
    pub fn record(&self, n: u64) -> Result<ResultRecord, CliError> {
        let g = self.global.generator;
        if let Some(r) = self.cache.as_ref().and_then(|c| c.load(n, g)) {
            return Ok(r);
        }
        let r = ResultRecord::compute(n, g)?;
        if let Some(c) = &self.cache {
            if let Err(e) = c.store(&r) {
                eprintln!("warning: could not write cache under {}: {e}", c.root().display());
            }
        }
        Ok(r)
    }

    fn json(&self, out: Out, v: &impl serde::Serialize) -> Result<(), CliError> {
        serde_json::to_writer_pretty(&mut *out, v).map_err(io::Error::other)?;
        writeln!(out)?;
        Ok(())
    }

    fn print_record(&self, out: Out, r: &ResultRecord) -> Result<(), CliError> {
        self.json(out, &r.for_output(self.global.timings))
    }

    pub fn run(&self, command: &Command, out: Out) -> Result<(), CliError> {
        match *command {
            Command::Classnum { n } => self.classnum(n, out),
            Command::Structure { n, generators } => self.structure(n, generators, out),
            Command::Basis { n } => self.basis(n, out),
            Command::Primary { n, p } => self.primary(n, p, out),
            Command::Conjecture { p, n } => self.conjecture(p, n, out),
            Command::Table { range, check, jobs, max_level } => self.table(range, check, jobs, max_level, out),
            Command::Verify { n } => self.verify(n, out),
            Command::Qcheck { n, trunc } => self.qcheck(n, trunc, out),
            Command::PrimaryTable { max_level } => self.primary_table(max_level, out),
        }
    }

    fn classnum(&self, n: u64, out: Out) -> Result<(), CliError> {
        let r = self.record(n)?;
        if self.global.json {
            self.print_record(out, &r)?;
        } else {
            writeln!(out, "{}", r.class_number)?;
        }
        dual_route(&r)
    }

    fn structure(&self, n: u64, generators: bool, out: Out) -> Result<(), CliError> {
        let r = self.record(n)?;
        if self.global.json {
            self.print_record(out, &r)?;
        } else {
            writeln!(out, "{}", r.structure_string())?;
            if generators {
                for g in &r.generators {
                    writeln!(out, "  order {}: {}", g.order, g.divisor)?;
                }
            }
        }
        dual_route(&r)
    }

    fn basis(&self, n: u64, out: Out) -> Result<(), CliError> {
        if self.global.json {
            let r = self.record(n)?;
            return self.print_record(out, &r);
        }
        // the basis alone is cheap, so skip the class group unless it is cached
        let cached = self.cache.as_ref().and_then(|c| c.load(n, self.global.generator));
        let lines: Vec<String> = match cached {
            Some(r) => r.basis.into_iter().map(|b| b.display).collect(),
            None => basis::basis(n, self.global.generator)?.iter().map(|e| e.display()).collect(),
        };
        for l in lines {
            writeln!(out, "{l}")?;
        }
        Ok(())
    }

    fn group(&self, n: u64) -> Result<(ResultRecord, GroupStructure), CliError> {
        let r = self.record(n)?;
        let invariants = r
            .invariants
            .iter()
            .map(|s| Int::from_str(s).map_err(|_| CliError::Inconsistent(format!("cached invariant {s:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let s = GroupStructure::from_invariants(invariants)?;
        Ok((r, s))
    }

    fn primary(&self, n: u64, p: u64, out: Out) -> Result<(), CliError> {
        if !is_prime(p) {
            return Err(CliError::Usage(format!("{p} is not prime")));
        }
        let (r, s) = self.group(n)?;
        let part = p_primary(&s, p);
        if self.global.json {
            let v = json!({"n": n, "p": p, "parts": part.to_string(), "exponents": part.exponents, "rank": part.rank()});
            self.json(out, &v)?;
        } else {
            writeln!(out, "{part}")?;
        }
        dual_route(&r)
    }

    fn conjecture(&self, p: u64, n: u32, out: Out) -> Result<(), CliError> {
        if !is_prime(p) {
            return Err(CliError::Usage(format!("{p} is not prime")));
        }
        let lvl = p.checked_pow(n).filter(|&l| l >= 5).ok_or_else(|| CliError::Usage(format!("{p}^{n} is not a valid level")))?;
        let (r, s) = self.group(lvl)?;
        let report = conjecture_report_for(p, n, p_primary(&s, p))?;
        if self.global.json {
            let rows: Vec<_> = report
                .rows
                .iter()
                .map(|m| json!({"exponent": m.exponent, "predicted": m.predicted, "computed": m.computed}))
                .collect();
            let v = json!({
                "p": p,
                "n": n,
                "regular": report.regular,
                "predicted_rank": report.predicted_rank,
                "computed_rank": report.computed.rank(),
                "computed": report.computed.to_string(),
                "rows": rows,
                "agrees": report.agrees(),
            });
            self.json(out, &v)?;
        } else {
            let regular = match report.regular {
                Some(true) => "regular",
                Some(false) => "irregular",
                None => "regularity unknown",
            };
            writeln!(out, "level {p}^{n} = {lvl} ({regular})")?;
            writeln!(out, "computed {}", report.computed)?;
            writeln!(out, "rank: predicted {}, computed {}", report.predicted_rank, report.computed.rank())?;
            writeln!(out, "{:>4} {:>10} {:>10}", "e", "predicted", "computed")?;
            for m in &report.rows {
                let mark = if m.predicted == m.computed as i64 { "" } else { "  *" };
                writeln!(out, "{:>4} {:>10} {:>10}{mark}", m.exponent, m.predicted, m.computed)?;
            }
            writeln!(out, "{}", if report.agrees() { "agrees" } else { "differs" })?;
        }
        dual_route(&r)
    }

    fn table(&self, range: LevelRange, check: bool, jobs: Option<usize>, max: u64, out: Out) -> Result<(), CliError> {
        if range.end > max {
            return Err(CliError::Usage(format!("range ends at {} beyond --max-level {max}", range.end)));
        }
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(j) = jobs {
            builder = builder.num_threads(j.max(1));
        }
        let pool = builder.build().map_err(|e| CliError::Usage(e.to_string()))?;
        let records: Vec<Result<ResultRecord, CliError>> =
            pool.install(|| (range.start..=range.end).into_par_iter().map(|n| self.record(n)).collect());
        let records = records.into_iter().collect::<Result<Vec<_>, _>>()?;

        let mut checked = 0usize;
        let mut diffs = Vec::new();
        let mut rows = Vec::new();
        for r in &records {
            let expected = if check { corpus().expected_structure(r.n) } else { None };
            let status = expected.map(|e| {
                checked += 1;
                let want: Vec<String> = e.invariants.iter().map(ToString::to_string).collect();
                if want == r.invariants {
                    "ok".to_string()
                } else {
                    let msg = format!("expected {e}");
                    diffs.push(format!("N={}: got {}, {msg}", r.n, r.structure_string()));
                    msg
                }
            });
            rows.push((r, status));
        }
        let split: Vec<u64> = records.iter().filter(|r| !r.checks.yu_vs_lattice).map(|r| r.n).collect();

        if self.global.json {
            let v = json!({
                "rows": records.iter().map(|r| r.for_output(self.global.timings)).collect::<Vec<_>>(),
                "checked": checked,
                "matched": checked - diffs.len(),
                "diffs": diffs,
            });
            self.json(out, &v)?;
        } else {
            for (r, status) in rows {
                let status = status.map(|s| format!("  {s}")).unwrap_or_default();
                writeln!(out, "{:>4}  {}  {}{status}", r.n, r.class_number, r.structure_string())?;
            }
            if check {
                writeln!(out, "{}/{} match", checked - diffs.len(), checked)?;
            }
        }
        if !split.is_empty() {
            return Err(CliError::Inconsistent(format!("class number routes disagree at N = {split:?}")));
        }
        if !diffs.is_empty() {
            return Err(CliError::Inconsistent(diffs.join("; ")));
        }
        Ok(())
    }

    fn verify(&self, n: u64, out: Out) -> Result<(), CliError> {
        let r = self.record(n)?;
        let c = &r.checks;
        if self.global.json {
            self.print_record(out, &r)?;
        } else {
            let word = |b: bool| if b { "ok" } else { "FAILED" };
            writeln!(out, "N = {n}, h = {}", r.class_number)?;
            let yu = r.class_number_formula.as_deref().unwrap_or(&r.class_number);
            writeln!(out, "yu_vs_lattice: {} (formula {yu})", word(c.yu_vs_lattice))?;
            let orbit = if is_prime(n) { "ok (not applicable at prime level)" } else { word(c.orbit) };
            writeln!(out, "orbit: {orbit}")?;
            writeln!(out, "q_integrality: {}", word(c.q_integrality))?;
        }
        if c.all() {
            Ok(())
        } else {
            Err(CliError::Inconsistent(format!("level {n}: {:?}", c)))
        }
    }

    fn qcheck(&self, n: u64, trunc: usize, out: Out) -> Result<(), CliError> {
        if trunc == 0 {
            return Err(CliError::Usage("--trunc must be positive".into()));
        }
        let b = basis::basis(n, self.global.generator)?;
        let mut rows = Vec::new();
        for e in &b {
            let s = expand_product(&e.unit, trunc)?;
            rows.push((e.display(), s.to_string(), s.has_integral_exponents()));
        }
        let ok = rows.iter().all(|r| r.2);
        if self.global.json {
            let elements: Vec<_> =
                rows.iter().map(|(d, s, i)| json!({"element": d, "series": s, "integral": i})).collect();
            self.json(out, &json!({"n": n, "trunc": trunc, "elements": elements, "ok": ok}))?;
        } else {
            for (d, s, i) in &rows {
                writeln!(out, "{d} = {s}{}", if *i { "" } else { "  [non-integral]" })?;
            }
        }
        if ok {
            Ok(())
        } else {
            Err(CliError::Inconsistent(format!("level {n}: non-integral q-expansion")))
        }
    }

    fn primary_table(&self, max: u64, out: Out) -> Result<(), CliError> {
        let rows: Vec<_> = corpus().prime_power_primary.iter().filter(|r| r.level() <= max).collect();
        let computed = rows
            .par_iter()
            .map(|row| {
                let (r, s) = self.group(row.level())?;
                dual_route(&r)?;
                Ok(p_primary(&s, row.p).to_string())
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let mut diffs = Vec::new();
        let mut entries = Vec::new();
        for (row, got) in rows.iter().zip(&computed) {
            let ok = *got == row.parts;
            if !ok {
                diffs.push(format!("{}^{}: got {got}, expected {}", row.p, row.n, row.parts));
            }
            entries.push(json!({"p": row.p, "n": row.n, "parts": got, "expected": row.parts, "match": ok}));
        }
        if self.global.json {
            self.json(out, &json!({"rows": entries}))?;
        } else {
            for (row, got) in rows.iter().zip(&computed) {
                let mark = if *got == row.parts { "ok".to_string() } else { format!("expected {}", row.parts) };
                writeln!(out, "{}^{}  {got}  {mark}", row.p, row.n)?;
            }
        }
        if diffs.is_empty() {
            Ok(())
        } else {
            Err(CliError::Inconsistent(diffs.join("; ")))
        }
    }
}

fn dual_route(r: &ResultRecord) -> Result<(), CliError> {
    match &r.class_number_formula {
        None if r.checks.yu_vs_lattice => Ok(()),
        other => Err(CliError::Inconsistent(format!(
            "level {}: lattice index {} but formula gives {}",
            r.n,
            r.class_number,
            other.as_deref().unwrap_or("?")
        ))),
    }
}

/// Parse arguments, run, and return the process exit code.
pub fn main_with_args<I, T>(args: I, out: Out) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let app = App::new(cli.global);
    match app.run(&cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = out.flush();
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!("11..50".parse::<LevelRange>(), Ok(LevelRange { start: 11, end: 50 }));
        assert_eq!("5..=5".parse::<LevelRange>(), Ok(LevelRange { start: 5, end: 5 }));
        assert!("3..9".parse::<LevelRange>().is_err());
        assert!("9..7".parse::<LevelRange>().is_err());
        assert!("9".parse::<LevelRange>().is_err());
    }

    #[test]
    fn library_errors_map_to_exit_codes() {
        assert_eq!(CliError::from(modunits::Error::InvalidInput("x".into())).exit_code(), 2);
        assert_eq!(CliError::from(modunits::Error::NotInvertible { a: 2, m: 4 }).exit_code(), 2);
        assert_eq!(CliError::from(modunits::Error::Inconsistent("x".into())).exit_code(), 3);
    }

    #[test]
    fn in_process_run() {
        let mut out = Vec::new();
        assert_eq!(main_with_args(["modunits", "--no-cache", "classnum", "16"], &mut out), 0);
        assert_eq!(String::from_utf8(out).unwrap(), "10\n");
        let mut out = Vec::new();
        assert_eq!(main_with_args(["modunits", "conjecture", "4", "3"], &mut out), 2);
    }
}
