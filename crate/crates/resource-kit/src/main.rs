//! Command-line front end.  All numerics live in the library; this
//! binary parses inputs, orchestrates runs, and emits reports.
//!
//! Exit codes: 0 success, 1 check failed, 2 parse error, 3 invariant
//! violation, 4 resource/sampling limit.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_complex::Complex64 as C64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use resource_kit::asymptotic::{simulate_distillation, simulate_formation, SimulationReport};
use resource_kit::channels::{
    apply, is_dio, is_mio, mc_extend, random_dio, CheckReport, MCDCSpec,
};
use resource_kit::error::Error;
use resource_kit::io::{
    load_channel, load_density, to_json_string, ChannelJson, MatrixJson,
};
use resource_kit::matrix::ComplexMatrix;
use resource_kit::monotones::{
    l1_coherence, mc_distillable, negativity, rel_entropy_coherence,
    renyi_entanglement, vn_entropy,
};
use resource_kit::states::{mc_recognize, DensityMatrix};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "resource-kit", version, about = "coherence/MC resource toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute a coherence or entanglement monotone of a state.
    Monotone {
        input: PathBuf,
        /// cr | l1 | vn | negativity | renyi | mc-distillable
        #[arg(long)]
        measure: String,
        /// Renyi order for --measure renyi.
        #[arg(long)]
        alpha: Option<f64>,
        /// Tensor factor dimensions, e.g. 2,2.
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// text | json
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Verify CPTP / DIO / MIO membership of a channel.
    CheckChannel {
        input: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Checks that must pass for exit code 0.
        #[arg(long, value_delimiter = ',', default_value = "cptp,dio")]
        require: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extend a DIO channel to its MCDC channel on the MC blocks.
    McExtend {
        input: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded finite-n protocol sweeps (distill | form).
    Simulate {
        input: PathBuf,
        /// distill | form
        #[arg(long)]
        protocol: String,
        /// Block lengths, e.g. 4,6,8.
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Directory for per-n JSON reports and the combined CSV.
        #[arg(long)]
        out: Option<PathBuf>,
        /// csv | json
        #[arg(long, default_value = "csv")]
        format: String,
    },
    /// Random search for l1-coherence increases under sampled DIO maps.
    SearchL1 {
        #[arg(long, default_value_t = 2)]
        dims: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Re-verify the witness recorded in an earlier report.
        #[arg(long)]
        replay: Option<PathBuf>,
    },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Io(_) | Error::Json(_) | Error::ShapeMismatch(..) => 2,
        Error::TooLarge { .. } | Error::SamplingFailed(_) => 4,
        _ => 3,
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

#[derive(Serialize)]
struct MonotoneReport {
    measure: String,
    value: f64,
    alpha: Option<f64>,
    dims: Option<Vec<usize>>,
    tol: f64,
    input: String,
    version: &'static str,
}

fn cmd_monotone(
    input: &Path,
    measure: &str,
    alpha: Option<f64>,
    dims: Option<Vec<usize>>,
    tol: f64,
    out: Option<&Path>,
    format: &str,
) -> Result<u8, Error> {
    let rho = load_density(input, dims.as_deref())?;
    let value = match measure {
        "cr" => rel_entropy_coherence(&rho)?,
        "l1" => l1_coherence(&rho),
        "vn" => vn_entropy(&rho)?,
        "negativity" => negativity(&rho, rho.subs())?,
        "renyi" => {
            let a = alpha.ok_or_else(|| {
                Error::DomainViolation("--measure renyi requires --alpha".into())
            })?;
            renyi_entanglement(&rho, a)?
        }
        "mc-distillable" => {
            let mc = mc_recognize(&rho).ok_or_else(|| {
                Error::NotADensityMatrix("state is not MC in the canonical bases".into())
            })?;
            mc_distillable(&mc)?
        }
        other => {
            return Err(Error::DomainViolation(format!("unknown measure '{other}'")))
        }
    };
    let text = match format {
        "json" => to_json_string(&MonotoneReport {
            measure: measure.into(),
            value,
            alpha,
            dims,
            tol,
            input: input.display().to_string(),
            version: VERSION,
        })?,
        _ => format!("{value:.10}\n"),
    };
    emit(&text, out)?;
    Ok(0)
}

#[derive(Serialize)]
struct ChannelCheckReport {
    cptp: CheckReport,
    dio: CheckReport,
    mio: CheckReport,
    required: Vec<String>,
    passed: bool,
    tol: f64,
    input: String,
    version: &'static str,
}

fn cmd_check_channel(
    input: &Path,
    tol: f64,
    require: &[String],
    out: Option<&Path>,
) -> Result<u8, Error> {
    let ch = load_channel(input)?;
    let report = ChannelCheckReport {
        cptp: ch.is_cptp(tol),
        dio: is_dio(&ch, tol),
        mio: is_mio(&ch, tol),
        required: require.to_vec(),
        passed: false,
        tol,
        input: input.display().to_string(),
        version: VERSION,
    };
    let mut passed = true;
    for name in require {
        let ok = match name.as_str() {
            "cptp" => report.cptp.ok,
            "dio" => report.dio.ok,
            "mio" => report.mio.ok,
            other => {
                return Err(Error::DomainViolation(format!("unknown check '{other}'")))
            }
        };
        passed = passed && ok;
    }
    let report = ChannelCheckReport { passed, ..report };
    emit(&to_json_string(&report)?, out)?;
    Ok(if passed { 0 } else { 1 })
}

#[derive(Serialize)]
struct McExtendReport {
    channel: ChannelJson,
    verification: CheckReport,
    input_dio: CheckReport,
    tol: f64,
    version: &'static str,
}

fn cmd_mc_extend(input: &Path, tol: f64, out: Option<&Path>) -> Result<u8, Error> {
    let dio = load_channel(input)?;
    let input_dio = is_dio(&dio, tol);
    if !input_dio.ok {
        eprintln!(
            "input channel is not DIO: residual {:.3e} > {tol:.3e}",
            input_dio.max_residual
        );
        return Ok(3);
    }
    let ext = mc_extend(&MCDCSpec::canonical(dio))?;
    // canonical MC bases: product-basis covariance is DIO of the big map
    let verification = is_dio(&ext, tol);
    let report = McExtendReport {
        channel: ChannelJson::from_channel(&ext),
        verification,
        input_dio,
        tol,
        version: VERSION,
    };
    emit(&to_json_string(&report)?, out)?;
    Ok(0)
}

fn csv_lines(reports: &[SimulationReport]) -> String {
    let mut text = String::from("n,rate,fidelity_or_distance,epsilon,delta,tau_slack,seed\n");
    for r in reports {
        text.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.n, r.rate, r.fidelity_or_distance, r.epsilon, r.delta, r.tau_slack, r.seed
        ));
    }
    text
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    input: &Path,
    protocol: &str,
    ns: &[usize],
    eps: f64,
    delta: f64,
    seed: u64,
    out: Option<&Path>,
    format: &str,
) -> Result<u8, Error> {
    if ns.is_empty() {
        return Err(Error::DomainViolation("--n requires at least one value".into()));
    }
    let rho = load_density(input, None)?;
    let mut reports = Vec::with_capacity(ns.len());
    for &n in ns {
        let rep = match protocol {
            "distill" => simulate_distillation(&rho, n, eps, delta, seed)?,
            "form" => simulate_formation(&rho, n, eps, delta, seed)?,
            other => {
                return Err(Error::DomainViolation(format!(
                    "unknown protocol '{other}' (expected distill|form)"
                )))
            }
        };
        reports.push(rep);
    }
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        for rep in &reports {
            let path = dir.join(format!("{}_n{}.json", protocol, rep.n));
            std::fs::write(path, to_json_string(rep)?)?;
        }
        std::fs::write(dir.join("sweep.csv"), csv_lines(&reports))?;
    }
    match format {
        "json" => print!("{}", to_json_string(&reports)?),
        _ => print!("{}", csv_lines(&reports)),
    }
    Ok(0)
}

#[derive(Serialize, Deserialize)]
struct L1Witness {
    channel: ChannelJson,
    state: MatrixJson,
    increase: f64,
}

#[derive(Serialize, Deserialize)]
struct SearchReport {
    dims: usize,
    samples: usize,
    seed: u64,
    sampler_failures: usize,
    /// Largest observed increase, clamped at zero when none was found.
    max_increase: f64,
    witness: Option<L1Witness>,
    version: String,
}

fn random_density(d: usize, rng: &mut impl Rng) -> Result<DensityMatrix, Error> {
    let g = ComplexMatrix::from_fn(d, d, |_, _| {
        C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    let pos = g.matmul(&g.adjoint())?;
    let tr = pos.trace().re;
    DensityMatrix::new(pos.scale_re(1.0 / tr))
}

fn cmd_search_l1(
    dims: usize,
    samples: usize,
    seed: u64,
    out: Option<&Path>,
    replay: Option<&Path>,
) -> Result<u8, Error> {
    if let Some(path) = replay {
        let text = std::fs::read_to_string(path)?;
        let report: SearchReport = serde_json::from_str(&text)?;
        return match report.witness {
            None => {
                println!("no witness recorded; nothing to replay");
                Ok(0)
            }
            Some(w) => {
                let ch = w.channel.to_channel()?;
                let rho = DensityMatrix::new(w.state.to_matrix()?)?;
                let replayed = l1_coherence(&apply(&ch, &rho)?) - l1_coherence(&rho);
                let gap = (replayed - w.increase).abs();
                println!(
                    "recorded {} replayed {} gap {:.3e}",
                    w.increase, replayed, gap
                );
                Ok(if gap < 1e-10 { 0 } else { 1 })
            }
        };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0usize;
    let mut best: Option<L1Witness> = None;
    for _ in 0..samples {
        let channel_seed = rng.gen::<u64>();
        let ch = match random_dio(dims, dims, channel_seed) {
            Ok(ch) => ch,
            Err(_) => {
                failures += 1;
                continue;
            }
        };
        let rho = random_density(dims, &mut rng)?;
        let increase = l1_coherence(&apply(&ch, &rho)?) - l1_coherence(&rho);
        let better = best.as_ref().is_none_or(|b| increase > b.increase);
        if better {
            best = Some(L1Witness {
                channel: ChannelJson::from_channel(&ch),
                state: MatrixJson::from_matrix(rho.mat()),
                increase,
            });
        }
    }
    if failures * 2 > samples {
        return Err(Error::SamplingFailed(failures));
    }
    let report = SearchReport {
        dims,
        samples,
        seed,
        sampler_failures: failures,
        max_increase: best.as_ref().map_or(0.0, |b| b.increase.max(0.0)),
        witness: best,
        version: VERSION.to_string(),
    };
    emit(&to_json_string(&report)?, out)?;
    Ok(0)
}

fn run() -> Result<u8, Error> {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Monotone { input, measure, alpha, dims, tol, out, format } => {
            cmd_monotone(&input, &measure, alpha, dims, tol, out.as_deref(), &format)
        }
        Cmd::CheckChannel { input, tol, require, out } => {
            cmd_check_channel(&input, tol, &require, out.as_deref())
        }
        Cmd::McExtend { input, tol, out } => cmd_mc_extend(&input, tol, out.as_deref()),
        Cmd::Simulate { input, protocol, n, eps, delta, seed, out, format } => {
            cmd_simulate(&input, &protocol, &n, eps, delta, seed, out.as_deref(), &format)
        }
        Cmd::SearchL1 { dims, samples, seed, out, replay } => {
            cmd_search_l1(dims, samples, seed, out.as_deref(), replay.as_deref())
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
