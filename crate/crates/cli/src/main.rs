//! `dof-align`: DoF regions, scheme synthesis, rate simulation and audit
//! suites from the command line.
//!
//! Exit status: 0 on success, 1 when a verification suite fails, 2 on usage
//! or domain errors.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dof_align::regions::polytope::to_f64;
use dof_align::regions::{build_region, DofRegion};
use dof_align::scheme::{build_full_mode_scheme, build_space_freq_scheme, Scheme};
use dof_align::sim::{draw_block, estimate_slopes, snr_sweep};
use dof_align::verify::{run_suites, SuiteChoice};
use dof_align::{classify, Channel, Error, Governing, Scenario, Side, SystemConfig};

#[derive(Parser)]
#[command(name = "dof-align", version, about = "DoF regions and blind interference alignment with reconfigurable antennas")]
struct Cli {
    /// Worker threads for simulations and suites (default: all cores).
    #[arg(long, global = true, env = "DOF_ALIGN_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ChannelArg {
    Zic,
    Fic,
}

impl From<ChannelArg> for Channel {
    fn from(c: ChannelArg) -> Self {
        match c {
            ChannelArg::Zic => Channel::Zic,
            ChannelArg::Fic => Channel::Fic,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum YesNo {
    Yes,
    No,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Regions,
    Schemes,
    Slopes,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Print the exact DoF region of a configuration.
    Region {
        /// Antennas as M1,N1,M2,N2.
        #[arg(long, value_parser = parse_system)]
        system: SystemConfig,
        #[arg(long, value_enum, default_value = "zic")]
        channel: ChannelArg,
        /// Whether transmitters know the channel.
        #[arg(long, value_enum, default_value = "no")]
        csit: YesNo,
        /// Antenna modes at the reconfigurable transmitter.
        #[arg(long)]
        modes: Option<usize>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Emit the beamforming and nulling matrices of the mode-switching scheme.
    Synthesize {
        #[arg(long, value_parser = parse_system)]
        system: SystemConfig,
        #[arg(long)]
        modes: usize,
        #[arg(long, value_enum, default_value = "zic")]
        channel: ChannelArg,
        /// Seed of the cross channel used when fewer than N1 modes exist.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo rate sweep with slope estimates.
    Simulate {
        #[arg(long, value_parser = parse_system)]
        system: SystemConfig,
        #[arg(long)]
        modes: Option<usize>,
        #[arg(long, value_enum, default_value = "zic")]
        channel: ChannelArg,
        /// Inclusive SNR grid in dB as A:STEP:B.
        #[arg(long = "snr-db", value_parser = parse_grid, default_value = "0:10:50")]
        snr_db: Grid,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Lowest SNR (dB) used for slope estimation.
        #[arg(long = "min-snr-db", default_value_t = 30.0)]
        min_snr_db: f64,
        /// CSV destination (standard output when absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run audit suites; exits 1 when any check fails.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        #[arg(long = "max-antennas", default_value_t = 6)]
        max_antennas: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random blocks per scheme arm.
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Debug)]
struct Grid(Vec<f64>);

fn parse_system(s: &str) -> Result<SystemConfig, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, step, b] = parts.as_slice() else {
        return Err(format!("expected A:STEP:B, got {s:?}"));
    };
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("bad number {t:?} in {s:?}"));
    let (a, step, b) = (num(a)?, num(step)?, num(b)?);
    if !(a.is_finite() && b.is_finite() && step.is_finite()) || step <= 0.0 || b < a {
        return Err(format!("need finite A <= B and STEP > 0, got {s:?}"));
    }
    let n = ((b - a) / step + 1e-9).floor() as usize;
    Ok(Grid((0..=n).map(|i| a + i as f64 * step).collect()))
}

/// Failure modes mapped onto exit codes.
enum Fail {
    Usage(String),
    Suite,
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Usage(e.to_string())
    }
}

impl From<io::Error> for Fail {
    fn from(e: io::Error) -> Self {
        Fail::Usage(format!("I/O: {e}"))
    }
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>, Fail> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Fail::Usage(format!("cannot create {}: {e}", p.display())))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn json(v: Result<serde_json::Value, serde_json::Error>) -> Result<String, Fail> {
    v.and_then(|v| serde_json::to_string_pretty(&v))
        .map_err(|e| Fail::Usage(format!("serialization: {e}")))
}

fn region_table(config: &SystemConfig, scenario: &Scenario, region: &DofRegion) -> Result<String, Fail> {
    let label = classify(config, scenario)?;
    let mut s = format!("system {config}  scenario {scenario}  case {label}\n\ninequalities (d1, d2 >= 0):\n");
    for h in region.inequalities() {
        s.push_str(&format!("  {h}\n"));
    }
    s.push_str("\nvertices:\n");
    for v in region.vertices() {
        let d1 = format!("{}", v.d1);
        let d2 = format!("{}", v.d2);
        s.push_str(&format!("  ({d1:>5}, {d2:>5})   ({:.4}, {:.4})\n", to_f64(v.d1), to_f64(v.d2)));
    }
    Ok(s)
}

fn synthesize(config: &SystemConfig, scenario: &Scenario, seed: u64) -> Result<Scheme, Fail> {
    let label = classify(config, scenario)?;
    match label.governing {
        Governing::ZicFullModes | Governing::FicFullModesTx1 | Governing::FicFullModesTx2 | Governing::LimitedModes | Governing::IidNoSwitching => {}
        other => {
            return Err(Fail::Usage(format!(
                "{config} under {scenario} is governed by {}, which needs no mode-switching scheme",
                other.as_str()
            )))
        }
    }
    let eff = if label.side == Side::Tx2 { config.swapped() } else { *config };
    let k = label.modes.unwrap_or(eff.m1()).min(eff.n1());
    if k == eff.n1() {
        Ok(build_full_mode_scheme(&eff)?)
    } else {
        let block = draw_block(&eff, Channel::Zic, k, seed)?;
        Ok(build_space_freq_scheme(&eff, k, &block.h12)?)
    }
}

fn execute(cli: Cli) -> Result<(), Fail> {
    match cli.command {
        Command::Region { system, channel, csit, modes, format } => {
            let scenario = match csit {
                YesNo::Yes => Scenario::with_csit(channel.into()),
                YesNo::No => Scenario::without_csit(channel.into(), modes),
            };
            let region = build_region(&system, &scenario)?;
            let text = match format {
                Format::Json => serde_json::to_string(&region).map_err(|e| Fail::Usage(e.to_string()))?,
                Format::Table => region_table(&system, &scenario, &region)?,
            };
            let mut out = io::stdout().lock();
            writeln!(out, "{}", text.trim_end())?;
        }
        Command::Synthesize { system, modes, channel, seed, out } => {
            let scheme = synthesize(&system, &Scenario::without_csit(channel.into(), Some(modes)), seed)?;
            let mut w = open_out(out.as_deref())?;
            writeln!(w, "{}", serde_json::to_string(&scheme).map_err(|e| Fail::Usage(e.to_string()))?)?;
            w.flush()?;
        }
        Command::Simulate { system, modes, channel, snr_db, trials, seed, min_snr_db, out } => {
            let scenario = Scenario::without_csit(channel.into(), modes);
            let curve = snr_sweep(&system, &scenario, &snr_db.0, trials, seed)?;
            let to_file = out.is_some();
            let mut w = open_out(out.as_deref())?;
            curve.write_csv(&mut w)?;
            w.flush()?;
            drop(w);
            let summary = match estimate_slopes(&curve, min_snr_db) {
                Ok(e) => {
                    let se = e
                        .stderr
                        .map(|(a, b)| format!("  stderr ({a:.4}, {b:.4})"))
                        .unwrap_or_default();
                    format!(
                        "slopes over {:?} dB: d1 = {:.4}, d2 = {:.4}{se}",
                        e.window, e.d1_hat, e.d2_hat
                    )
                }
                Err(e) => format!("slopes unavailable: {e}"),
            };
            if to_file {
                println!("{summary}");
            } else {
                eprintln!("{summary}");
            }
        }
        Command::Verify { suite, max_antennas, seed, trials, out } => {
            let choice = match suite {
                SuiteArg::Regions => SuiteChoice::Regions,
                SuiteArg::Schemes => SuiteChoice::Schemes,
                SuiteArg::Slopes => SuiteChoice::Slopes,
                SuiteArg::All => SuiteChoice::All,
            };
            let reports = run_suites(choice, max_antennas, trials, seed)?;
            let passed = reports.iter().all(|r| r.passed());
            for r in &reports {
                eprintln!(
                    "{}: {} ({} cases, {} failures, {:.2?})",
                    r.suite,
                    if r.passed() { "pass" } else { "FAIL" },
                    r.cases,
                    r.failures.len(),
                    r.wall_time
                );
            }
            let body = serde_json::json!({ "passed": passed, "suites": reports });
            let mut w = open_out(out.as_deref())?;
            writeln!(w, "{}", json(Ok(body))?)?;
            w.flush()?;
            if !passed {
                return Err(Fail::Suite);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let text = e.to_string();
            let line = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments");
            eprintln!("dof-align: {}", line.trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("dof-align: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("dof-align: cannot size thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Suite) => ExitCode::from(1),
        Err(Fail::Usage(msg)) => {
            eprintln!("dof-align: {}", msg.lines().next().unwrap_or("error"));
            ExitCode::from(2)
        }
    }
}
