use std::path::PathBuf;
use std::process::ExitCode;

use chern_positivity::generators::{derive_seed, indefinite_control, GeneratorSpec};
use chernpos::config::{Command, RunConfig};
use chernpos::report::Cone;
use chernpos::{curvature_io, run_with_threads, CliError, THREADS_ENV};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "chernpos", version, about = "Pointwise positivity checks for Chern and Schur forms")]
struct Cli {
    /// Worker threads (0: one per core).
    #[arg(long, global = true, env = THREADS_ENV, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Sub,
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, default_value_t = 64)]
    starts: usize,
    #[arg(long, default_value_t = 200)]
    iters: usize,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Relative tolerance for numeric identities.
    #[arg(long, default_value_t = 1e-10)]
    identity_tol: f64,
    /// JSON report path (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Flat CSV summary path.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct Battery {
    #[command(flatten)]
    common: Common,
    /// Samples per (rank, dimension) pair.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Base dimensions, comma separated.
    #[arg(long, value_delimiter = ',')]
    dim: Vec<usize>,
    /// Ranks, comma separated.
    #[arg(long, value_delimiter = ',')]
    rank: Vec<usize>,
    /// Use indefinite negative controls; refutations are then expected.
    #[arg(long)]
    negative: bool,
}

#[derive(Subcommand)]
enum Sub {
    /// c1*c2 - c3 on rank-3 Griffiths-semipositive samples.
    VerifyMain(Battery),
    /// c2 in ranks 2..5 plus the 2x2-minor identity.
    VerifyC2(Battery),
    /// c1^3 >= c1*c2 >= c3 and the signed Segre form s2.
    VerifyIneq(Battery),
    /// Exact symbolic push-forward and Jacobi-Trudi suite.
    VerifyPushforwards(Common),
    /// Forms and verdicts for a curvature file.
    CheckForm {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        input: PathBuf,
        /// Forms such as c2, c1*s2, S(2,1,0), s(-2,1,4).
        #[arg(long = "form")]
        forms: Vec<String>,
        /// Cones to test: weak, hermitian, strong.
        #[arg(long = "cone", value_delimiter = ',')]
        cones: Vec<String>,
        /// Count refutations as failures.
        #[arg(long)]
        expect_positive: bool,
    },
    /// Writes one generated curvature as JSON.
    Generate {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        rank: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        index: u64,
        #[arg(long)]
        negative: bool,
        #[arg(long)]
        out: PathBuf,
    },
}

fn config(command: Command, c: &Common) -> RunConfig {
    let mut cfg = RunConfig::new(command);
    cfg.budget.starts = c.starts;
    cfg.budget.iters = c.iters;
    cfg.budget.tol = c.tol;
    cfg.seed = c.seed;
    cfg.identity_tol = c.identity_tol;
    cfg
}

fn battery(command: Command, b: &Battery) -> RunConfig {
    let mut cfg = config(command, &b.common);
    cfg.samples = b.samples;
    cfg.negative = b.negative;
    if !b.dim.is_empty() {
        cfg.dims = b.dim.clone();
    }
    if !b.rank.is_empty() {
        cfg.ranks = b.rank.clone();
    }
    cfg
}

fn execute(cli: Cli) -> Result<bool, CliError> {
    let (cfg, common) = match &cli.command {
        Sub::VerifyMain(b) => (battery(Command::VerifyMain, b), &b.common),
        Sub::VerifyC2(b) => (battery(Command::VerifyC2, b), &b.common),
        Sub::VerifyIneq(b) => (battery(Command::VerifyIneq, b), &b.common),
        Sub::VerifyPushforwards(c) => (config(Command::VerifyPushforwards, c), c),
        Sub::CheckForm { common, input, forms, cones, expect_positive } => {
            let mut cfg = config(Command::CheckForm, common);
            cfg.input = Some(input.clone());
            cfg.forms = forms.clone();
            cfg.cones = cones.iter().map(|s| s.parse()).collect::<Result<Vec<Cone>, _>>()?;
            cfg.expect_positive = *expect_positive;
            (cfg, common)
        }
        Sub::Generate { dim, rank, seed, index, negative, out } => {
            if *dim == 0 || *rank == 0 {
                return Err(CliError::Usage("dimension and rank must be positive".into()));
            }
            let c = if *negative {
                indefinite_control(*dim, *rank, derive_seed(*seed, *index))
            } else {
                GeneratorSpec::positive_control(*dim, *rank, *index, *seed).generate()
            };
            curvature_io::write_curvature(out, &c)?;
            return Ok(true);
        }
    };
    let report = run_with_threads(&cfg, cli.threads)?;
    match &common.out {
        Some(path) => report.write_json(path)?,
        None => println!("{}", report.to_json()),
    }
    if let Some(path) = &common.csv {
        report.write_csv_file(path)?;
    }
    let s = &report.summary;
    eprintln!(
        "{}: {} samples, {} checks ({} certified, {} refuted, {} unknown), {} unexpected refutations, {}/{} identities failed",
        report.command,
        s.samples,
        s.checks,
        s.certified,
        s.refuted,
        s.unknown,
        s.unexpected_refutations,
        s.identity_failures,
        s.identities
    );
    Ok(report.success())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("chernpos: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
