use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use wk_cli::{Cache, CliError, Format, EXIT_DOMAIN};
use wk_core::{Basis, Route};

/// Exact Witten-Kontsevich intersection numbers from genus-independent
/// coefficient tables.
#[derive(Parser, Debug)]
#[command(name = "wk", version)]
struct Cli {
    /// Directory holding the coefficient table cache.
    #[arg(long, global = true, env = "WK_CACHE_DIR")]
    cache: Option<PathBuf>,
    /// Worker threads for partition sums (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Human)]
    format: FormatArg,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// One intersection number ⟨τ_{d_1} ⋯ τ_{d_n}⟩_g.
    Tau {
        #[arg(long, short = 'g')]
        genus: u32,
        /// Comma-separated powers d_1,...,d_n.
        #[arg(long, short = 'd', value_delimiter = ',', required = true)]
        powers: Vec<u32>,
    },
    /// The generating polynomial A_{g,n}.
    Agn {
        #[arg(long, short = 'g')]
        genus: u32,
        #[arg(short = 'n')]
        n: usize,
        #[arg(long, value_enum, default_value_t = BasisArg::Monomial)]
        basis: BasisArg,
    },
    /// The genus-independent polynomial P_{r,n}.
    Pn {
        #[arg(short = 'n')]
        n: usize,
        #[arg(short = 'r')]
        r: u32,
        #[arg(long, value_enum, default_value_t = BasisArg::Schur)]
        basis: BasisArg,
    },
    /// Fills the cached table with the blocks of P_{r,n}, r <= r-max.
    Dtable {
        #[arg(short = 'n')]
        n: usize,
        #[arg(long)]
        r_max: u32,
        #[arg(long, value_enum, default_value_t = RouteArg::Auto)]
        route: RouteArg,
    },
    /// Checks the closed formula against the recursion.
    Verify {
        #[arg(long)]
        g_max: u32,
        #[arg(long)]
        n_max: usize,
    },
    /// Appearing versus allowed elementary coefficients of P_{r,n}.
    Elo {
        #[arg(short = 'n')]
        n: usize,
        #[arg(long)]
        r_max: Option<u32>,
    },
    /// Timing table for the closed formula and the recursion.
    Bench {
        #[arg(short = 'n', default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 8)]
        g_max: u32,
        #[arg(long, default_value_t = 3)]
        runs: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Human,
    Tsv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BasisArg {
    Monomial,
    Schur,
    Elementary,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RouteArg {
    Auto,
    Bootstrap,
    Direct,
}

fn run(cli: Cli) -> Result<i32, CliError> {
    if let Some(k) = cli.threads {
        if k == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let cache = Cache::new(cli.cache);
    let format = match cli.format {
        FormatArg::Human => Format::Human,
        FormatArg::Tsv => Format::Tsv,
    };
    let basis = |b: BasisArg| match b {
        BasisArg::Monomial => Basis::Monomial,
        BasisArg::Schur => Basis::Schur,
        BasisArg::Elementary => Basis::Elementary,
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let code = match cli.command {
        Command::Tau { genus, powers } => wk_cli::cmd_tau(&mut out, &cache, genus, &powers, format)?,
        Command::Agn { genus, n, basis: b } => wk_cli::cmd_agn(&mut out, &cache, genus, n, basis(b), format)?,
        Command::Pn { n, r, basis: b } => wk_cli::cmd_pn(&mut out, &cache, n, r, basis(b), format)?,
        Command::Dtable { n, r_max, route } => {
            let route = match route {
                RouteArg::Auto => Route::Auto,
                RouteArg::Bootstrap => Route::Bootstrap,
                RouteArg::Direct => Route::Direct,
            };
            wk_cli::cmd_dtable(&mut out, &cache, n, r_max, route)?
        }
        Command::Verify { g_max, n_max } => wk_cli::cmd_verify(&mut out, &cache, g_max, n_max, format)?,
        Command::Elo { n, r_max } => wk_cli::cmd_elo(&mut out, &cache, n, r_max, format)?,
        Command::Bench { n, g_max, runs } => wk_cli::cmd_bench(&mut out, &cache, n, g_max, runs, format)?,
    };
    out.flush()?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_DOMAIN as u8 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("wk: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
