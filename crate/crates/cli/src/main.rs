//! `twdp` -- command-line front end for the TWDP fading toolkit.
//!
//! Subcommands: convert, moments, sample, estimate, asv, crb, perf,
//! sweep, figure. All numeric output carries 17 significant digits and
//! seeded runs are byte-reproducible. Exit codes: 0 success, 1 usage
//! error (bad flags or argument domains), 2 numerical/runtime failure.

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use twdp_core::error::Error as CoreError;
use twdp_core::figures::{emit_figure_data, FigureConfig, FigureKind};
use twdp_core::io;
use twdp_core::model::{
    delta_to_gamma, gamma_to_delta, moment_ratios, GammaParams, MomentSet,
};
use twdp_core::perf;
use twdp_core::sampler;
use twdp_core::sweep::{run_sweep_with_raw, SweepConfig};

#[derive(Parser)]
#[command(
    name = "twdp",
    about = "TWDP fading model: moments, sampling, estimation, AsV/CRB, Monte-Carlo sweeps",
    version
)]
struct Cli {
    /// RNG seed (falls back to $TWDP_SEED, then 1)
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Mean received power Omega
    #[arg(long, global = true, default_value_t = 1.0)]
    omega: f64,

    /// Output file (stdout when omitted, where applicable)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output format (only `csv` is supported)
    #[arg(long, global = true, default_value = "csv")]
    format: String,

    /// Worker threads for sweeps (defaults to the number of cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convert between parameterizations (gamma <-> delta, full tuples)
    Convert(ConvertArgs),
    /// Exact even moments and moment ratios at a parameter point
    Moments(MomentsArgs),
    /// Generate envelope samples to CSV
    Sample(SampleArgs),
    /// Estimate (K, Gamma, Delta) from a sample CSV
    Estimate(EstimateArgs),
    /// Asymptotic variance coefficients at a parameter point
    Asv(PointArgs),
    /// Cramer-Rao bound coefficients at a parameter point
    Crb(PointArgs),
    /// Performance table (AsV + CRB + normalized errors) over a grid
    Perf(GridArgs),
    /// Monte-Carlo estimation sweep over a grid
    Sweep(SweepArgs),
    /// Emit data for one of the five standard figures
    Figure(FigureArgs),
}

#[derive(Args)]
struct ConvertArgs {
    /// Specular ratio Gamma = V2/V1 to convert to Delta
    #[arg(long)]
    gamma: Option<f64>,
    /// Conventional Delta to convert to Gamma
    #[arg(long)]
    delta: Option<f64>,
    /// With --gamma and --k: also print the physical components
    #[arg(long)]
    k: Option<f64>,
}

#[derive(Args)]
struct MomentsArgs {
    #[arg(long)]
    k: f64,
    #[arg(long)]
    gamma: f64,
    /// Even orders to evaluate
    #[arg(long, value_delimiter = ',', default_value = "2,4,6")]
    orders: Vec<u32>,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    k: f64,
    #[arg(long)]
    gamma: f64,
    /// Number of samples
    #[arg(long, default_value_t = 10_000)]
    n: usize,
}

#[derive(Args)]
struct EstimateArgs {
    /// Input sample CSV (as produced by `twdp sample`)
    #[arg(long = "in")]
    input: PathBuf,
}

#[derive(Args)]
struct PointArgs {
    #[arg(long)]
    k: f64,
    #[arg(long)]
    gamma: f64,
    /// For `crb`: bound with Omega treated as known (2x2 information)
    #[arg(long, default_value_t = false)]
    known_omega: bool,
}

#[derive(Args)]
struct GridArgs {
    /// K grid: comma list and/or start:step:end ranges
    #[arg(long, default_value = "1,2,3,5,10")]
    k: String,
    /// Gamma grid
    #[arg(long, default_value = "0.1,0.3,0.5,0.7,0.9")]
    gamma: String,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value = "1,2,3,5,10")]
    k: String,
    #[arg(long, default_value = "0.1,0.3,0.5,0.7,0.9")]
    gamma: String,
    /// Samples per realization
    #[arg(long, default_value_t = 10_000)]
    n: usize,
    /// Realizations per grid point
    #[arg(long, default_value_t = 500)]
    reps: usize,
    /// Also write every per-realization estimate to this CSV
    #[arg(long)]
    dump_raw: Option<PathBuf>,
}

#[derive(Args)]
struct FigureArgs {
    /// fig1 | fig2 | fig3 | fig4 | fig5
    #[arg(long)]
    which: String,
    #[arg(long, default_value_t = 10_000)]
    n: usize,
    #[arg(long, default_value_t = 500)]
    reps: usize,
    /// Optional K grid override
    #[arg(long)]
    k: Option<String>,
    /// Optional Gamma (or V2/V1) grid override
    #[arg(long)]
    gamma: Option<String>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints its own message; --help/--version are successes
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("twdp: {e}");
            match e.downcast_ref::<CoreError>() {
                Some(CoreError::Domain(_)) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn resolve_seed(cli_seed: Option<u64>) -> anyhow::Result<u64> {
    if let Some(s) = cli_seed {
        return Ok(s);
    }
    match std::env::var("TWDP_SEED") {
        Ok(text) => text
            .trim()
            .parse::<u64>()
            .map_err(|_| CoreError::Domain(format!("TWDP_SEED=`{text}` is not a u64")).into()),
        Err(_) => Ok(1),
    }
}

/// Parse `1,2,3` lists and `start:step:end` ranges (mixable by comma is
/// not supported inside a range; ranges stand alone).
fn parse_grid(text: &str) -> anyhow::Result<Vec<f64>> {
    let parse_one = |t: &str| -> anyhow::Result<f64> {
        t.trim()
            .parse::<f64>()
            .map_err(|_| CoreError::Domain(format!("cannot parse `{t}` as a number")).into())
    };
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(CoreError::Domain(format!(
                "range must be start:step:end, got `{text}`"
            ))
            .into());
        }
        let (start, step, end) = (parse_one(parts[0])?, parse_one(parts[1])?, parse_one(parts[2])?);
        if step <= 0.0 || end < start {
            return Err(
                CoreError::Domain(format!("bad range `{text}`: need step > 0, end >= start"))
                    .into(),
            );
        }
        let mut out = Vec::new();
        let mut i = 0u32;
        loop {
            let v = start + step * i as f64;
            if v > end + 1e-9 {
                break;
            }
            out.push(v);
            i += 1;
        }
        return Ok(out);
    }
    text.split(',').filter(|t| !t.trim().is_empty()).map(parse_one).collect()
}

fn emit(out: &Option<PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => io::write_text(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    if cli.format != "csv" {
        return Err(CoreError::Domain(format!(
            "unsupported --format `{}` (only csv)",
            cli.format
        ))
        .into());
    }
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(CoreError::Domain("--jobs must be >= 1".into()).into());
        }
        // ignore the error if a pool already exists (tests call run twice)
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    let seed = resolve_seed(cli.seed)?;

    match cli.command {
        Command::Convert(args) => {
            let mut lines = Vec::new();
            match (args.gamma, args.delta) {
                (Some(g), None) => {
                    lines.push(format!("delta={}", io::fmt_g17(gamma_to_delta(g)?)));
                    if let Some(k) = args.k {
                        let p = GammaParams::new(k, g, cli.omega)?;
                        let c = p.to_physical();
                        lines.push(format!(
                            "v1={} v2={} sigma2={} k_rice={}",
                            io::fmt_g17(c.v1),
                            io::fmt_g17(c.v2),
                            io::fmt_g17(c.sigma2),
                            io::fmt_g17(p.k_rice().k_rice)
                        ));
                    }
                }
                (None, Some(d)) => {
                    lines.push(format!("gamma={}", io::fmt_g17(delta_to_gamma(d)?)));
                }
                _ => {
                    return Err(CoreError::Domain(
                        "convert needs exactly one of --gamma or --delta".into(),
                    )
                    .into())
                }
            }
            emit(&cli.out, &(lines.join("\n") + "\n"))?;
        }
        Command::Moments(args) => {
            let p = GammaParams::new(args.k, args.gamma, cli.omega)?;
            let set = MomentSet::exact(&p, &args.orders)?;
            let mut text = String::new();
            for (&n, &value) in set.orders().iter().zip(set.values()) {
                text.push_str(&format!("mu{n}={}\n", io::fmt_g17(value)));
            }
            let (r4, r6) = moment_ratios(args.k, args.gamma)?;
            text.push_str(&format!("r4={}\nr6={}\n", io::fmt_g17(r4), io::fmt_g17(r6)));
            emit(&cli.out, &text)?;
        }
        Command::Sample(args) => {
            let p = GammaParams::new(args.k, args.gamma, cli.omega)?;
            let s = sampler::generate(&p, args.n, seed)?;
            emit(&cli.out, &io::samples_to_csv(&s))?;
        }
        Command::Estimate(args) => {
            let values = io::read_samples_csv(&args.input)?;
            let moments = sampler::moments_of(&values)?;
            if values.len() < 3 {
                return Err(CoreError::Domain("need at least 3 samples".into()).into());
            }
            let r = twdp_core::estimators::estimate_joint_from_moments(&moments);
            let text = format!("{}\n{}\n", io::ESTIMATE_HEADER, io::estimate_to_csv_row(&r));
            emit(&cli.out, &text)?;
        }
        Command::Asv(args) => {
            let p = GammaParams::new(args.k, args.gamma, cli.omega)?;
            let a = perf::asv(&p)?;
            let text = format!(
                "asv_k={} asv_gamma={} asv_delta={}\n",
                io::fmt_g17(a.asv_k),
                io::fmt_g17(a.asv_gamma),
                io::fmt_g17(a.asv_delta)
            );
            emit(&cli.out, &text)?;
        }
        Command::Crb(args) => {
            let p = GammaParams::new(args.k, args.gamma, cli.omega)?;
            let (ck, cg) =
                if args.known_omega { perf::crb_known_omega(&p)? } else { perf::crb(&p)? };
            let text = format!("crb_k={} crb_gamma={}\n", io::fmt_g17(ck), io::fmt_g17(cg));
            emit(&cli.out, &text)?;
        }
        Command::Perf(args) => {
            let mut text = String::from(io::PERF_HEADER);
            text.push('\n');
            for k in parse_grid(&args.k)? {
                for g in parse_grid(&args.gamma)? {
                    let pp = perf::perf_point(&GammaParams::new(k, g, cli.omega)?)?;
                    text.push_str(&io::perf_to_csv_row(&pp));
                    text.push('\n');
                }
            }
            emit(&cli.out, &text)?;
        }
        Command::Sweep(args) => {
            let mut cfg =
                SweepConfig::new(parse_grid(&args.k)?, parse_grid(&args.gamma)?, seed);
            cfg.n_samples = args.n;
            cfg.n_realizations = args.reps;
            cfg.omega = cli.omega;
            let (rows, raw) = run_sweep_with_raw(&cfg)?;
            if let Some(raw_path) = &args.dump_raw {
                let mut text = String::from(io::RAW_SWEEP_HEADER);
                text.push('\n');
                for rec in &raw {
                    text.push_str(&io::raw_record_to_csv_row(rec));
                    text.push('\n');
                }
                io::write_text(raw_path, &text)?;
            }
            let mut text = String::from(io::SWEEP_HEADER);
            text.push('\n');
            for row in &rows {
                text.push_str(&io::sweep_to_csv_row(row));
                text.push('\n');
            }
            emit(&cli.out, &text)?;
        }
        Command::Figure(args) => {
            let which: FigureKind = args.which.parse()?;
            let cfg = FigureConfig {
                n_samples: args.n,
                n_realizations: args.reps,
                omega: cli.omega,
                seed,
                k_values: args.k.as_deref().map(parse_grid).transpose()?,
                gamma_values: args.gamma.as_deref().map(parse_grid).transpose()?,
            };
            match &cli.out {
                Some(path) => emit_figure_data(which, &cfg, path)?,
                None => print!("{}", twdp_core::figures::figure_csv(which, &cfg)?),
            }
        }
    }
    Ok(())
}
