//! Commands behind the `wk` binary. Each command writes its report to the
//! given sink and returns the process exit status.

use std::fs::{self, File};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use thiserror::Error;
use wk_core::arith::format_rat;
use wk_core::intersect::{a_gn, a_gn_from_table, tau, tau_from_table};
use wk_core::oracle::{a_gn_oracle, check_admissible, clear_memo, virasoro_tau};
use wk_core::partition::enumerate;
use wk_core::pengine::{allowed_partitions, d_rn, elementary_coefficients, r_max};
use wk_core::{Basis, DTable, Route, SymPoly};

/// Name of the table file inside the cache directory.
pub const TABLE_FILE: &str = "dtable.txt";
/// Name of the lock file taken while the table file is rewritten.
pub const LOCK_FILE: &str = "dtable.lock";

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] wk_core::Error),
    #[error("cache {}: {source}", path.display())]
    Cache { path: PathBuf, source: wk_core::Error },
    #[error("{0}")]
    Usage(String),
    #[error("write failed: {0}")]
    Output(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(wk_core::Error::Io(_)) | CliError::Cache { .. } | CliError::Output(_) => EXIT_IO,
            CliError::Core(wk_core::Error::Consistency(_)) => EXIT_MISMATCH,
            CliError::Core(_) | CliError::Usage(_) => EXIT_DOMAIN,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Human,
    Tsv,
}

/// The on-disk table cache. Without a directory every command works on an
/// in-memory table.
#[derive(Clone, Debug, Default)]
pub struct Cache {
    pub dir: Option<PathBuf>,
}

impl Cache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Cache { dir }
    }

    pub fn table_path(&self) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(TABLE_FILE))
    }

    /// The cached table, or an empty one when there is no cache file.
    pub fn load(&self) -> CliResult<DTable> {
        match self.table_path() {
            Some(path) if path.exists() => {
                DTable::load(&path).map_err(|source| CliError::Cache { path, source })
            }
            _ => Ok(DTable::new()),
        }
    }
}

fn cache_io(path: &Path, e: io::Error) -> CliError {
    CliError::Cache { path: path.to_path_buf(), source: e.into() }
}

fn check_n(n: usize) -> CliResult<()> {
    if n < 3 {
        return Err(CliError::Usage(format!("coefficient tables exist for n >= 3, got n = {n}")));
    }
    Ok(())
}

fn check_r(r: u32, n: usize) -> CliResult<()> {
    check_n(n)?;
    if r > r_max(n) {
        return Err(CliError::Usage(format!("r = {r} exceeds the top component {} for n = {n}", r_max(n))));
    }
    Ok(())
}

fn write_poly(out: &mut dyn Write, p: &SymPoly, format: Format) -> CliResult<()> {
    match format {
        Format::Human => write!(out, "{p}")?,
        Format::Tsv => {
            writeln!(out, "basis\tpartition\tcoefficient")?;
            for (lam, c) in p.terms() {
                writeln!(out, "{}\t{lam}\t{}", p.basis().letter(), format_rat(c))?;
            }
        }
    }
    Ok(())
}

/// `⟨τ_{d_1} ⋯ τ_{d_n}⟩_g`.
pub fn cmd_tau(out: &mut dyn Write, cache: &Cache, g: u32, powers: &[u32], format: Format) -> CliResult<i32> {
    check_admissible(g, powers.len())?;
    let mut table = cache.load()?;
    let v = tau(g, powers, &mut table)?;
    match format {
        Format::Human => writeln!(out, "{}", format_rat(&v))?,
        Format::Tsv => {
            let d: Vec<String> = powers.iter().map(u32::to_string).collect();
            writeln!(out, "g\tpowers\tvalue")?;
            writeln!(out, "{g}\t{}\t{}", d.join(","), format_rat(&v))?;
        }
    }
    Ok(EXIT_OK)
}

/// `A_{g,n}` in the requested basis.
pub fn cmd_agn(out: &mut dyn Write, cache: &Cache, g: u32, n: usize, basis: Basis, format: Format) -> CliResult<i32> {
    let mut table = cache.load()?;
    let p = a_gn(g, n, basis, &mut table)?;
    write_poly(out, &p, format)?;
    Ok(EXIT_OK)
}

/// `P_{r,n}` in the requested basis.
pub fn cmd_pn(out: &mut dyn Write, cache: &Cache, n: usize, r: u32, basis: Basis, format: Format) -> CliResult<i32> {
    check_r(r, n)?;
    let mut table = cache.load()?;
    table.ensure(n, r, Route::Auto)?;
    let p = table.p_rn(r, n).expect("block was just ensured").to_basis(basis)?;
    write_poly(out, &p, format)?;
    Ok(EXIT_OK)
}

/// Fills the cached table with every block `(n, r)`, `r <= r_max`, under an
/// exclusive lock, and rewrites the file in canonical form.
pub fn cmd_dtable(out: &mut dyn Write, cache: &Cache, n: usize, r_upto: u32, route: Route) -> CliResult<i32> {
    check_n(n)?;
    let dir = cache
        .dir
        .as_ref()
        .ok_or_else(|| CliError::Usage("no cache directory: pass --cache or set WK_CACHE_DIR".into()))?;
    fs::create_dir_all(dir).map_err(|e| cache_io(dir, e))?;
    let lock_path = dir.join(LOCK_FILE);
    let lock = File::create(&lock_path).map_err(|e| cache_io(&lock_path, e))?;
    lock.lock().map_err(|e| cache_io(&lock_path, e))?;
    let mut table = cache.load()?;
    let added = table.ensure(n, r_upto, route)?;
    let path = dir.join(TABLE_FILE);
    table.save(&path).map_err(|source| CliError::Cache { path: path.clone(), source })?;
    drop(lock);
    let top = r_upto.min(r_max(n));
    writeln!(
        out,
        "{} n={n} r=0..={top} in {} ({} blocks)",
        if added { "filled" } else { "unchanged" },
        path.display(),
        table.len()
    )?;
    Ok(EXIT_OK)
}

/// One disagreement found by `cmd_verify`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub g: u32,
    pub d: Vec<u32>,
    pub formula: String,
    pub oracle: String,
}

/// Compares the closed formula with the recursion on every admissible index
/// with `n <= n_max`, `g <= g_max` and `|d| = d_{g,n}`.
pub fn verify(cache: &Cache, g_max: u32, n_max: usize) -> CliResult<(usize, Vec<Mismatch>)> {
    let mut table = cache.load()?;
    let mut checked = 0;
    let mut bad = Vec::new();
    for n in 1..=n_max {
        if n >= 3 {
            table.ensure(n, g_max, Route::Auto)?;
        }
        for g in 0..=g_max {
            if check_admissible(g, n).is_err() {
                continue;
            }
            for lam in enumerate(d_rn(g, n), n) {
                let d = lam.padded(n)?;
                let formula = if n >= 3 { tau_from_table(g, &d, &table)? } else { tau(g, &d, &mut table)? };
                let oracle = virasoro_tau(g, &d)?;
                checked += 1;
                if formula != oracle {
                    bad.push(Mismatch { g, d, formula: format_rat(&formula), oracle: format_rat(&oracle) });
                }
            }
        }
    }
    Ok((checked, bad))
}

pub fn cmd_verify(out: &mut dyn Write, cache: &Cache, g_max: u32, n_max: usize, format: Format) -> CliResult<i32> {
    let (checked, bad) = verify(cache, g_max, n_max)?;
    match format {
        Format::Human => {
            for m in &bad {
                let d: Vec<String> = m.d.iter().map(u32::to_string).collect();
                writeln!(out, "MISMATCH g={} d={} formula={} oracle={}", m.g, d.join(","), m.formula, m.oracle)?;
            }
            if bad.is_empty() {
                writeln!(out, "checked {checked} indices: all equal")?;
            } else {
                writeln!(out, "checked {checked} indices: {} mismatches", bad.len())?;
            }
        }
        Format::Tsv => {
            writeln!(out, "g\tpowers\tformula\toracle")?;
            for m in &bad {
                let d: Vec<String> = m.d.iter().map(u32::to_string).collect();
                writeln!(out, "{}\t{}\t{}\t{}", m.g, d.join(","), m.formula, m.oracle)?;
            }
        }
    }
    Ok(if bad.is_empty() { EXIT_OK } else { EXIT_MISMATCH })
}

/// Per component: the number of nonzero elementary coefficients and the
/// number of allowed slots of full length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EloRow {
    pub r: u32,
    pub appearing: usize,
    pub allowed: usize,
    /// Partitions that break the length bound `ℓ(ν) <= r`.
    pub violations: Vec<String>,
}

pub fn elo_rows(cache: &Cache, n: usize, r_upto: Option<u32>) -> CliResult<Vec<EloRow>> {
    check_n(n)?;
    let top = r_upto.unwrap_or(r_max(n)).min(r_max(n));
    let mut table = cache.load()?;
    table.ensure(n, top, Route::Auto)?;
    let mut rows = Vec::new();
    for r in 0..=top {
        let c = elementary_coefficients(&table.p_rn(r, n).expect("block was just ensured"))?;
        let violations = c.keys().filter(|nu| nu.len() as u32 > r).map(|nu| nu.to_string()).collect();
        rows.push(EloRow { r, appearing: c.len(), allowed: allowed_partitions(r, n).len(), violations });
    }
    Ok(rows)
}

pub fn cmd_elo(out: &mut dyn Write, cache: &Cache, n: usize, r_upto: Option<u32>, format: Format) -> CliResult<i32> {
    let rows = elo_rows(cache, n, r_upto)?;
    match format {
        Format::Human => {
            writeln!(out, "{:>3} {:>9} {:>7}", "r", "appearing", "allowed")?;
            for row in &rows {
                writeln!(out, "{:>3} {:>9} {:>7}", row.r, row.appearing, row.allowed)?;
            }
        }
        Format::Tsv => {
            writeln!(out, "r\tappearing\tallowed")?;
            for row in &rows {
                writeln!(out, "{}\t{}\t{}", row.r, row.appearing, row.allowed)?;
            }
        }
    }
    let mut status = EXIT_OK;
    for row in &rows {
        if !row.violations.is_empty() {
            eprintln!("length bound broken at r={}: {}", row.r, row.violations.join(" "));
            status = EXIT_MISMATCH;
        }
    }
    Ok(status)
}

/// One line of the timing table, in seconds.
#[derive(Clone, Debug)]
pub struct BenchRow {
    pub g: u32,
    pub setup: f64,
    pub formula: f64,
    pub oracle: f64,
}

fn median(mut v: Vec<Duration>) -> f64 {
    v.sort();
    v[v.len() / 2].as_secs_f64()
}

/// Times all genus-`g` intersection numbers with `n` points, `g = 1..=g_max`:
/// table setup (once), the closed formula on the warm table and the cold
/// recursion (medians of `runs`).
pub fn bench_rows(cache: &Cache, n: usize, g_max: u32, runs: usize) -> CliResult<Vec<BenchRow>> {
    check_n(n)?;
    if runs == 0 {
        return Err(CliError::Usage("need at least one run".into()));
    }
    let mut table = cache.load()?;
    let mut rows = Vec::new();
    for g in 1..=g_max {
        let t = Instant::now();
        table.ensure(n, g, Route::Auto)?;
        let setup = t.elapsed().as_secs_f64();
        let mut tf = Vec::with_capacity(runs);
        let mut to = Vec::with_capacity(runs);
        for _ in 0..runs {
            let t = Instant::now();
            let a = a_gn_from_table(g, n, &table)?;
            tf.push(t.elapsed());
            clear_memo();
            let t = Instant::now();
            let b = a_gn_oracle(g, n)?;
            to.push(t.elapsed());
            if a != b {
                return Err(wk_core::Error::Consistency(format!("formula and recursion differ at g={g} n={n}")).into());
            }
        }
        rows.push(BenchRow { g, setup, formula: median(tf), oracle: median(to) });
    }
    Ok(rows)
}

pub fn cmd_bench(out: &mut dyn Write, cache: &Cache, n: usize, g_max: u32, runs: usize, format: Format) -> CliResult<i32> {
    let rows = bench_rows(cache, n, g_max, runs)?;
    match format {
        Format::Human => {
            writeln!(out, "{:>3} {:>12} {:>12} {:>12}", "g", "t_setup", "t_formula", "t_oracle")?;
            for r in &rows {
                writeln!(out, "{:>3} {:>12.6} {:>12.6} {:>12.6}", r.g, r.setup, r.formula, r.oracle)?;
            }
        }
        Format::Tsv => {
            writeln!(out, "g\tt_setup\tt_formula\tt_oracle")?;
            for r in &rows {
                writeln!(out, "{}\t{:.6}\t{:.6}\t{:.6}", r.g, r.setup, r.formula, r.oracle)?;
            }
        }
    }
    Ok(EXIT_OK)
}
