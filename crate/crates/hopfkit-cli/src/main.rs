mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "hopfkit", version, about = "Exact checks for Hopf algebras, bicrossed products, deformations and Galois objects")]
struct Cli {
    /// Print JSON instead of a summary tree.
    #[arg(long, global = true)]
    json: bool,
    /// Write JSON to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for parallel sweeps.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Catalog items and their parameters.
    Catalog {
        #[command(subcommand)]
        cmd: CatalogCmd,
    },
    /// Run one verification on a catalog item.
    Verify {
        what: VerifyWhat,
        #[command(flatten)]
        common: Common,
    },
    /// Solve κ = can⁻¹(1⊗h) on generators and check it.
    Kappa {
        #[command(flatten)]
        common: Common,
    },
    /// Generate the constraint system for generator values of a skew pairing or ψ.
    Classify {
        #[arg(long, value_enum)]
        target: commands::TargetArg,
        /// Assumptions like `lambda^2=1` or `t_ba=0`; each one is added to a single branch.
        #[arg(long = "assume")]
        assume: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Run one deformation case end to end.
    SummarizeCorollary {
        #[arg(long)]
        case: String,
        #[command(flatten)]
        common: Common,
    },
    /// Semidirect products with k[X] and the unrolled quantum group.
    Unrolled {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    List,
    Build {
        name: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, ValueEnum)]
pub enum VerifyWhat {
    Hopf,
    MatchedPair,
    Cocycle,
    SkewPairing,
    Psi,
    Twisting,
    Comodule,
    Galois,
}

#[derive(Args, Clone, Default)]
pub struct Common {
    /// Catalog item name.
    #[arg(long)]
    item: Option<String>,
    /// Item parameter, `name=value`.
    #[arg(long = "param")]
    params: Vec<String>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    zeta: Option<String>,
    /// Window as `D,G`.
    #[arg(long)]
    window: Option<String>,
    /// Scalars live in Q(q) with q a primitive n-th root of unity; 8 unless the item has ℓ.
    #[arg(long = "cyclotomic-order")]
    cyclotomic_order: Option<u32>,
    /// Run downstream stages even when a gating check fails.
    #[arg(long)]
    unchecked: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    }
    match run(&cli) {
        Ok(passed) => ExitCode::from(if passed { 0 } else { 1 }),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if commands::is_usage(&e) { 2 } else { 3 })
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    let out = match &cli.cmd {
        Cmd::Catalog { cmd: CatalogCmd::List } => commands::catalog_list(),
        Cmd::Catalog { cmd: CatalogCmd::Build { name, common } } => commands::catalog_build(name, common)?,
        Cmd::Verify { what, common } => commands::verify(*what, common)?.into(),
        Cmd::Kappa { common } => commands::kappa(common)?.into(),
        Cmd::Classify { target, assume, common } => commands::classify(*target, assume, common)?.into(),
        Cmd::SummarizeCorollary { case, common } => commands::corollary(case, common)?.into(),
        Cmd::Unrolled { common } => commands::unrolled(common)?.into(),
    };
    commands::emit(out, cli.json, cli.out.as_deref())
}
