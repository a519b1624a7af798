//! `nnops`: experiment drivers for Boltzmann-machine quantum states.

use clap::{Args, Parser, Subcommand, ValueEnum};
use nnops::error::ExitClass;
use nnops::evolve::{Boundary, EvolveConfig, Trajectory};
use nnops::experiments::{
    csv_float, run_evolve_sweep, run_fig5, run_gate_verify, run_trotter_ubm, write_atomic, Fig5Config,
    GateVerifyConfig, Manifest, TrotterUbmConfig,
};
use nnops::oracle::densify;
use nnops::sampler::{estimate_observable, Observable, SamplerConfig};
use nnops::{Error, Exec, RbmNns, Result, UbmNns};
use serde::de::DeserializeOwned;
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const CSV_HELP: &str = "\
Output files (all floats printed with 17 significant digits):
  fig5         fig5.csv      x_scale,seed,infidelity_numeric,infidelity_weak,infidelity_strong
               fig5_summary.json
  evolve       trajectory.csv (or trajectory_tau_<tau>.csv per swept tau)
                             step,time,energy_per_spin,sx,hidden_count,oracle_fidelity
               final_state.json, best_state.json
  sample       samples.csv   chain,batch,value   (per-chain batch means)
               estimate.json
  gate-verify  report.json
  trotter-ubm  state.json, report.json
  state-info   info on stdout; dense.csv (index,re,im) with --dense
Every command also writes manifest.json with the effective configuration.

Exit codes: 0 success, 2 configuration error, 3 numeric failure, 4 resource cap.";

#[derive(Parser)]
#[command(name = "nnops", version, about = "Neural-network quantum states: gates, projections, Trotter evolution", after_help = CSV_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// JSON configuration for the subcommand.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the seed in the configuration.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; 1 runs everything sequentially.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum ObservableArg {
    Energy,
    Sx,
}

#[derive(Subcommand)]
enum Command {
    /// Method I projection infidelity on random star networks.
    Fig5,
    /// Trotterized imaginary- or real-time evolution of the Ising chain.
    Evolve {
        /// Comma-separated time steps to sweep at fixed total time.
        #[arg(long, value_delimiter = ',')]
        taus: Vec<f64>,
    },
    /// Metropolis estimate of an observable for a stored RBM state.
    Sample {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, value_enum)]
        observable: ObservableArg,
        #[arg(long, default_value_t = 1.0)]
        j_coupling: f64,
        #[arg(long, default_value_t = 0.0)]
        h_field: f64,
        #[arg(long, value_enum, default_value = "periodic")]
        boundary: BoundaryArg,
    },
    /// Checks every rewrite rule against dense gate application.
    GateVerify,
    /// Builds the unprojected layered network of a Trotter evolution.
    TrotterUbm,
    /// Summary of a stored state.
    StateInfo {
        #[arg(long)]
        state: PathBuf,
        /// Also write the normalized dense vector.
        #[arg(long)]
        dense: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundaryArg {
    Open,
    Periodic,
}

impl From<BoundaryArg> for Boundary {
    fn from(b: BoundaryArg) -> Self {
        match b {
            BoundaryArg::Open => Boundary::Open,
            BoundaryArg::Periodic => Boundary::Periodic,
        }
    }
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))
}

fn load<T: DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_str(&read_text(path)?).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn load_or_default<T: DeserializeOwned + Default>(path: Option<&PathBuf>) -> Result<T> {
    path.map_or_else(|| Ok(T::default()), |p| load(p))
}

fn require_config(c: &Common, what: &str) -> Result<PathBuf> {
    c.config.clone().ok_or_else(|| Error::Config(format!("{what} needs --config <file>")))
}

fn pretty<T: Serialize>(v: &T) -> Result<Vec<u8>> {
    Ok(serde_json::to_string_pretty(v)?.into_bytes())
}

struct Run<'a> {
    common: &'a Common,
    manifest: Manifest,
}

impl<'a> Run<'a> {
    fn new<T: Serialize>(common: &'a Common, command: &str, seed: u64, config: &T) -> Result<Self> {
        let threads = common.threads.unwrap_or(0);
        Ok(Run { common, manifest: Manifest::new(command, seed, threads, serde_json::to_value(config)?) })
    }

    fn write(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        write_atomic(&self.common.out.join(name), bytes)?;
        self.manifest.outputs.push(name.to_string());
        Ok(())
    }

    fn finish(self) -> Result<()> {
        self.manifest.write(&self.common.out)
    }
}

fn exec_for(common: &Common) -> Exec {
    if common.threads == Some(1) {
        Exec::Sequential
    } else {
        Exec::default()
    }
}

fn write_trajectory(run: &mut Run, name: &str, t: &Trajectory, states: bool) -> Result<()> {
    run.write(name, t.to_csv().as_bytes())?;
    if states {
        run.write("final_state.json", t.final_state.to_json().as_bytes())?;
        run.write("best_state.json", t.best_state.to_json().as_bytes())?;
    }
    Ok(())
}

fn execute(cli: &Cli) -> Result<()> {
    let c = &cli.common;
    let exec = exec_for(c);
    match &cli.command {
        Command::Fig5 => {
            let mut cfg: Fig5Config = load_or_default(c.config.as_ref())?;
            cfg.seed = c.seed.unwrap_or(cfg.seed);
            cfg.validate()?;
            let mut run = Run::new(c, "fig5", cfg.seed, &cfg)?;
            let res = run_fig5(&cfg, exec)?;
            run.write("fig5.csv", res.to_csv().as_bytes())?;
            run.write("fig5_summary.json", &pretty(&res.summary)?)?;
            run.finish()
        }
        Command::Evolve { taus } => {
            let mut cfg: EvolveConfig = load(&require_config(c, "evolve")?)?;
            cfg.seed = c.seed.unwrap_or(cfg.seed);
            cfg.validate()?;
            let mut run = Run::new(c, "evolve", cfg.seed, &serde_json::json!({ "evolve": cfg, "taus": taus }))?;
            if taus.is_empty() {
                let t = run_evolve_sweep(&cfg, &[cfg.tau], exec)?.pop().expect("one trajectory");
                write_trajectory(&mut run, "trajectory.csv", &t, true)?;
            } else {
                for (tau, t) in taus.iter().zip(run_evolve_sweep(&cfg, taus, exec)?) {
                    write_trajectory(&mut run, &format!("trajectory_tau_{tau}.csv"), &t, false)?;
                }
            }
            run.finish()
        }
        Command::Sample { state, observable, j_coupling, h_field, boundary } => {
            let mut cfg: SamplerConfig = load_or_default(c.config.as_ref())?;
            cfg.seed = c.seed.unwrap_or(cfg.seed);
            cfg.validate()?;
            let rbm = RbmNns::from_json(&read_text(state)?)?;
            let obs = match observable {
                ObservableArg::Sx => Observable::Sx,
                ObservableArg::Energy => {
                    Observable::Energy { j: *j_coupling, h: *h_field, periodic: Boundary::from(*boundary).periodic() }
                }
            };
            let mut run = Run::new(
                c,
                "sample",
                cfg.seed,
                &serde_json::json!({ "sampler": cfg, "observable": obs, "state": state }),
            )?;
            let res = estimate_observable(&rbm, obs, &cfg, exec)?;
            let mut csv = String::from("chain,batch,value\n");
            for (ch, batches) in res.batches.iter().enumerate() {
                for (b, v) in batches.iter().enumerate() {
                    csv.push_str(&format!("{ch},{b},{}\n", csv_float(*v)));
                }
            }
            run.write("samples.csv", csv.as_bytes())?;
            run.write("estimate.json", &pretty(&res.estimate)?)?;
            run.finish()
        }
        Command::GateVerify => {
            let mut cfg: GateVerifyConfig = load_or_default(c.config.as_ref())?;
            cfg.seed = c.seed.unwrap_or(cfg.seed);
            let mut run = Run::new(c, "gate-verify", cfg.seed, &cfg)?;
            let report = run_gate_verify(&cfg, exec)?;
            run.write("report.json", &pretty(&report)?)?;
            run.finish()?;
            if report.all_passed {
                Ok(())
            } else {
                Err(Error::Numeric("some rewrite cases disagree with the dense reference".into()))
            }
        }
        Command::TrotterUbm => {
            let cfg: TrotterUbmConfig = load(&require_config(c, "trotter-ubm")?)?;
            let mut run = Run::new(c, "trotter-ubm", 0, &cfg)?;
            let r = run_trotter_ubm(&cfg)?;
            run.write("state.json", r.state.to_json().as_bytes())?;
            let report = serde_json::json!({
                "n_hidden": r.state.n_hidden(),
                "w_v": [r.w_v.re, r.w_v.im],
                "w_h": r.w_h,
                "oracle_fidelity": r.oracle_fidelity,
            });
            run.write("report.json", &pretty(&report)?)?;
            run.finish()
        }
        Command::StateInfo { state, dense } => {
            let u = UbmNns::from_json(&read_text(state)?)?;
            let kind = if u.is_rbm() {
                "rbm"
            } else if u.is_star() {
                "star"
            } else {
                "ubm"
            };
            let lp = u.log_prefactor();
            let info = serde_json::json!({
                "n_visible": u.n_visible(),
                "n_hidden": u.n_hidden(),
                "kind": kind,
                "real_parameters": u.is_real(1e-12),
                "max_abs_parameter": u.max_abs_param(),
                "log_prefactor": [lp.re, lp.im],
            });
            println!("{}", serde_json::to_string_pretty(&info)?);
            if *dense {
                let mut run = Run::new(c, "state-info", 0, &serde_json::json!({ "state": state }))?;
                run.write("dense.csv", densify(&u)?.to_csv()?.as_bytes())?;
                run.finish()?;
            }
            Ok(())
        }
    }
}

fn setup_threads(common: &Common) -> Result<()> {
    if let Some(t) = common.threads {
        if t == 0 {
            return Err(Error::Config("--threads must be at least 1".into()));
        }
        #[cfg(feature = "parallel")]
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match setup_threads(&cli.common).and_then(|_| execute(&cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e.exit_class() {
        ExitClass::Config => 2,
        ExitClass::Numeric => 3,
        ExitClass::Resource => 4,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;

    /// Runs a command in-process and returns its exit code. Arguments ending in
    /// `.json` or starting with `o` (output dirs) are resolved inside `dir`.
    fn run(dir: &Path, args: &[&str]) -> u8 {
        let abs: Vec<String> = args
            .iter()
            .map(|a| if a.ends_with(".json") || a.starts_with("o") { dir.join(a).display().to_string() } else { a.to_string() })
            .collect();
        let cli = Cli::try_parse_from(std::iter::once("nnops".to_string()).chain(abs)).unwrap();
        execute(&cli).err().map_or(0, |e| exit_code(&e))
    }

    #[test]
    fn invalid_configs_are_config_errors_and_write_nothing() {
        let d = tempfile::tempdir().unwrap();
        fs::write(d.path().join("bad.json"), r#"{"n":4,"h_field":0.5,"tau":0.1,"steps":3,"mode":"real","projector":"method1-numeric"}"#)
            .unwrap();
        fs::write(d.path().join("typo.json"), r#"{"n":4,"hfield":0.5}"#).unwrap();
        for cfg in ["bad.json", "typo.json", "missing.json"] {
            assert_eq!(run(d.path(), &["evolve", "--config", cfg, "--out", "o"]), 2, "{cfg}");
        }
        assert!(!d.path().join("o").exists());
    }

    #[test]
    fn oversized_dense_request_hits_the_resource_cap() {
        let d = tempfile::tempdir().unwrap();
        fs::write(d.path().join("big.json"), r#"{"n":40,"steps":2,"tau":0.1,"h_field":0.5}"#).unwrap();
        assert_eq!(run(d.path(), &["trotter-ubm", "--config", "big.json", "--out", "o"]), 4);
    }

    #[test]
    fn evolve_writes_documented_outputs() {
        let d = tempfile::tempdir().unwrap();
        fs::write(
            d.path().join("e.json"),
            r#"{"n":4,"h_field":0.5,"tau":0.05,"steps":4,"mode":"imaginary","projector":"method1-numeric","oracle_checks":true}"#,
        )
        .unwrap();
        assert_eq!(run(d.path(), &["evolve", "--config", "e.json", "--out", "o", "--threads", "2", "--seed", "3"]), 0);
        let csv = fs::read_to_string(d.path().join("o/trajectory.csv")).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "step,time,energy_per_spin,sx,hidden_count,oracle_fidelity");
        assert_eq!(lines.count(), 5);
        let manifest: serde_json::Value = serde_json::from_str(&fs::read_to_string(d.path().join("o/manifest.json")).unwrap()).unwrap();
        assert_eq!(manifest["seed"], 3);
        assert_eq!(manifest["threads"], 2);

        let state = d.path().join("o/final_state.json").display().to_string();
        assert_eq!(run(d.path(), &["state-info", "--state", &state, "--dense", "--out", "oi"]), 0);
        let dense = fs::read_to_string(d.path().join("oi/dense.csv")).unwrap();
        assert_eq!(dense.lines().next().unwrap(), "index,re,im");
        assert_eq!(dense.lines().count(), 17);
    }

    #[test]
    fn gate_verify_trotter_ubm_and_sample() {
        let d = tempfile::tempdir().unwrap();
        fs::write(d.path().join("g.json"), r#"{"cases":20}"#).unwrap();
        assert_eq!(run(d.path(), &["gate-verify", "--config", "g.json", "--out", "og"]), 0);
        assert!(d.path().join("og/report.json").exists());

        fs::write(d.path().join("t.json"), r#"{"n":4,"steps":2,"tau":0.1,"h_field":0.5}"#).unwrap();
        assert_eq!(run(d.path(), &["trotter-ubm", "--config", "t.json", "--out", "ot"]), 0);

        // the layered network has hidden-hidden couplings, so the RBM sampler rejects it
        fs::write(d.path().join("s.json"), r#"{"n_chains":2,"n_sweeps":200,"n_burnin":20}"#).unwrap();
        let state = d.path().join("ot/state.json").display().to_string();
        assert_eq!(run(d.path(), &["sample", "--config", "s.json", "--state", &state, "--observable", "sx", "--out", "os"]), 2);
    }
}
