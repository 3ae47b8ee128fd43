//! `skelcollar`: command-line front end for `skelcollar-core`.

mod commands;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::Report;

#[derive(Debug, Parser)]
#[command(name = "skelcollar", version, about = "Skeleta of T*P^n and bundles on collars of Z_n")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, global = true, env = "SKELCOLLAR_SEED", default_value_t = skelcollar_core::birmaps::DEFAULT_SEED)]
    pub seed: u64,
    /// Ext^1 window cutoff; defaults to max(3, 2j).
    #[arg(long, global = true)]
    pub cutoff: Option<i64>,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Svg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stable manifolds of the torus action on T*P^n.
    Skeleton {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        weights: Option<Vec<i64>>,
    },
    /// Hamiltonian potential of the action on the chart V_0.
    Potential {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        weights: Option<Vec<i64>>,
        #[arg(long, default_value = "2", allow_hyphen_values = true)]
        kappa: String,
    },
    /// Minimal resolution of 1/n(1,a).
    Resolve {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        a: u32,
    },
    /// Fan of X_n or its dual, optionally subdivided.
    Fan {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        dual: bool,
        #[arg(long)]
        resolved: bool,
    },
    /// P^a x P^b --> P^(a+b) through the Segre embedding.
    Birmap {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// The bir arrow between consecutive skeleton components.
    Birstep {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        j: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Line bundles on the collar of Z_n.
    Collar {
        #[command(subcommand)]
        what: CollarCommand,
    },
    /// Splitting type of a rank-2 transition matrix read from JSON.
    Splitting {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Expected dimension of the instanton moduli on Z_n.
    ModuliDim {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        j: i64,
    },
    /// Monomial basis of Ext^1(O(j), O(-j)) on Z_n.
    Ext1 {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        j: i64,
    },
    /// Family jumping from splitting j+s at tau = 0 to j elsewhere.
    Deform {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        j: i64,
        #[arg(long, default_value_t = 1)]
        s: i64,
        #[arg(long, value_delimiter = ',', default_value = "0,1,2,1/3")]
        taus: Vec<String>,
    },
    /// Correspondence table and square checks for collar n.
    Duality {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Step of the def family used in the squares.
        #[arg(long, default_value_t = 1)]
        def_s: i64,
    },
}

#[derive(Debug, Subcommand)]
pub enum CollarCommand {
    /// Tensor table of the Picard group.
    Pic {
        #[arg(long)]
        n: u32,
    },
    /// Isomorphism test for L_n(j1), L_n(j2).
    Iso {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        j1: i64,
        #[arg(long, allow_hyphen_values = true)]
        j2: i64,
        #[arg(long)]
        bound: Option<i64>,
    },
}

const EXIT_ERROR: u8 = 1;
const EXIT_UNVERIFIED: u8 = 3;

fn emit(report: &Report, common: &Common) -> std::io::Result<()> {
    let body = report.render(common.format);
    match &common.output {
        Some(p) => fs::write(p, body),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())?;
            out.flush()
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match commands::dispatch(&cli.command, &cli.common) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("skelcollar: {e}");
            return ExitCode::from(EXIT_ERROR);
        }
    };
    if let Err(e) = emit(&report, &cli.common) {
        eprintln!("skelcollar: writing report: {e}");
        return ExitCode::from(EXIT_ERROR);
    }
    if report.verified {
        ExitCode::SUCCESS
    } else {
        eprintln!("skelcollar: verification failed");
        ExitCode::from(EXIT_UNVERIFIED)
    }
}
