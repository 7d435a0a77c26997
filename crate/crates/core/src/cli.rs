//! The `fw` experiment runner.
//!
//! Every subcommand writes its artifacts to `--out-dir` together with a
//! `manifest.json` holding the parameter echo and SHA-256 checksums. Exit
//! status is 0 on success, 2 for invalid input and 1 when a computation fails.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::evolve::{self, SimConfig};
use crate::functionals;
use crate::io::{fmt_f64, write_json, Manifest};
use crate::profile::{build_profile, derive_constants, sample_potential, turning_points, ProfileGrid};
use crate::spectral;
use crate::stability::{self, DEFAULT_FD_STEP};

#[derive(Debug, Parser)]
#[command(name = "fw", version, about = "Fornberg-Whitham solitary-wave laboratory")]
pub struct Cli {
    /// Directory receiving the artifacts.
    #[arg(long, global = true, default_value = "out")]
    pub out_dir: PathBuf,

    /// Worker threads for parallel sweeps (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solitary-wave profile, potential samples and functionals.
    Profile(ProfileArgs),
    /// Essential spectrum, negative eigenvalue and kernel of the linearization.
    Spectrum(SpectrumArgs),
    /// Closed-form and finite-difference stability index at one speed.
    Stability(StabilityArgs),
    /// Critical speed where the stability index vanishes.
    FindC0,
    /// Stability index over a range of speeds.
    SweepD2(SweepArgs),
    /// Evolve a perturbed wave and record its orbital distance.
    Evolve(EvolveArgs),
    /// Every artifact for one speed.
    All(AllArgs),
}

#[derive(Debug, Args, Clone)]
pub struct ProfileArgs {
    #[arg(long, default_value_t = 1.2)]
    pub c: f64,
    #[arg(long, default_value_t = 0.0)]
    pub k: f64,
    /// Half-width of the grid (default `max(100, 40/mu)`).
    #[arg(long = "L")]
    pub half_width: Option<f64>,
    /// Number of grid intervals.
    #[arg(long)]
    pub n: Option<usize>,
    /// Samples of the potential written to potential.csv.
    #[arg(long, default_value_t = 400)]
    pub potential_samples: usize,
}

#[derive(Debug, Args, Clone)]
pub struct SpectrumArgs {
    #[arg(long, default_value_t = 1.2)]
    pub c: f64,
    /// Also run the dense matrix check with this many nodes.
    #[arg(long)]
    pub oracle_n: Option<usize>,
}

#[derive(Debug, Args, Clone)]
pub struct StabilityArgs {
    #[arg(long, default_value_t = 1.2)]
    pub c: f64,
    /// Finite-difference step in c.
    #[arg(long, default_value_t = DEFAULT_FD_STEP)]
    pub h: f64,
}

#[derive(Debug, Args, Clone)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 1.01)]
    pub cmin: f64,
    #[arg(long, default_value_t = 1.33)]
    pub cmax: f64,
    #[arg(long, default_value_t = 33)]
    pub steps: usize,
    #[arg(long, default_value_t = DEFAULT_FD_STEP)]
    pub h: f64,
}

#[derive(Debug, Args, Clone, Default)]
pub struct EvolveArgs {
    /// TOML file with keys c, k, rho, shape, L, n, dt, T, stride, seed.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long)]
    pub rho: Option<f64>,
    /// even, odd or noise.
    #[arg(long)]
    pub shape: Option<String>,
    #[arg(long = "L")]
    pub half_width: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long = "T")]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub stride: Option<f64>,
    /// Overrides FW_SEED and the config file.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args, Clone)]
pub struct AllArgs {
    #[arg(long, default_value_t = 1.2)]
    pub c: f64,
    /// Perturbation size for the evolution run.
    #[arg(long, default_value_t = 0.01)]
    pub rho: f64,
    #[arg(long = "T", default_value_t = 100.0)]
    pub t_end: f64,
}

impl EvolveArgs {
    /// Config file, then `FW_SEED`, then flags.
    pub fn resolve(&self, env_seed: Option<&str>) -> Result<SimConfig> {
        let mut cfg = match &self.config {
            Some(p) => SimConfig::load(p)?,
            None => SimConfig::default(),
        };
        if let Some(s) = env_seed {
            cfg.seed = s
                .trim()
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("FW_SEED = {s:?} is not an unsigned integer")))?;
        }
        macro_rules! set {
            ($($flag:ident => $field:ident),*) => {
                $(if let Some(v) = self.$flag { cfg.$field = v; })*
            };
        }
        set!(c => c, k => k, rho => rho, n => n, dt => dt, t_end => t_end, stride => stride, seed => seed);
        if let Some(l) = self.half_width {
            cfg.half_width = Some(l);
        }
        if let Some(s) = &self.shape {
            cfg.shape = s.parse()?;
        }
        Ok(cfg)
    }
}

/// Writes artifacts and records them in the manifest.
struct Output {
    dir: PathBuf,
    manifest: Manifest,
}

impl Output {
    fn new(dir: &Path, command: &str, parameters: serde_json::Value) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            manifest: Manifest::new(command, parameters),
        })
    }

    fn path(&self, file: &str) -> PathBuf {
        self.dir.join(file)
    }

    fn json<T: Serialize>(&mut self, file: &str, value: &T) -> Result<()> {
        write_json(&self.path(file), value)?;
        self.manifest.record(&self.dir, file)
    }

    fn record(&mut self, file: &str) -> Result<()> {
        self.manifest.record(&self.dir, file)
    }

    fn finish(self) -> Result<()> {
        self.manifest.write(&self.dir)?;
        Ok(())
    }
}

fn profile_for(args: &ProfileArgs) -> Result<ProfileGrid> {
    let params = derive_constants(args.c, args.k)?;
    let (l, n) = crate::profile::default_resolution(&params);
    build_profile(&params, args.half_width.unwrap_or(l), args.n.unwrap_or(n))
}

fn write_potential(out: &mut Output, p: &ProfileGrid, samples: usize) -> Result<()> {
    if samples < 2 {
        return Err(Error::InvalidConfig("need at least two potential samples".into()));
    }
    let mut text = String::from("phi,F\n");
    for (phi, f) in sample_potential(&p.params, samples) {
        text.push_str(&format!("{},{}\n", fmt_f64(phi), fmt_f64(f)));
    }
    std::fs::write(out.path("potential.csv"), text)?;
    out.record("potential.csv")?;
    let tp = turning_points(&p.params)?;
    let meta = json!({
        "c": p.params.c,
        "k": p.params.k,
        "alpha": p.params.alpha,
        "beta": p.params.beta,
        "phi1": tp.phi1,
        "phi2": tp.phi2,
        "phi_minus": tp.phi_minus,
        "phi_plus": tp.phi_plus,
    });
    out.json("potential.meta.json", &meta)
}

fn cmd_profile(out: &mut Output, args: &ProfileArgs) -> Result<()> {
    let p = profile_for(args)?;
    p.write_csv(&out.path("profile.csv"))?;
    out.record("profile.csv")?;
    out.json("profile.meta.json", &p.meta())?;
    write_potential(out, &p, args.potential_samples)?;
    if p.params.k == 0.0 {
        out.json("functionals.json", &functionals::report(&p)?)?;
    }
    println!("profile c = {} k = {}: phi_max = {}", args.c, args.k, fmt_f64(p.max_value()));
    Ok(())
}

fn cmd_spectrum(out: &mut Output, args: &SpectrumArgs) -> Result<()> {
    if let Some(n) = args.oracle_n {
        if n < 16 || n % 2 != 0 {
            return Err(Error::InvalidConfig(format!("oracle size {n} must be even and at least 16")));
        }
    }
    derive_constants(args.c, 0.0)?;
    let report = spectral::spectral_report(args.c, args.oracle_n)?;
    out.json("spectrum.json", &report)?;
    println!("spectrum c = {}: lambda* = {}", args.c, fmt_f64(report.lambda_star));
    Ok(())
}

fn cmd_stability(out: &mut Output, args: &StabilityArgs) -> Result<()> {
    let report = stability::stability_report(args.c, args.h)?;
    out.json("stability.json", &report)?;
    println!("stability c = {}: d2 = {} ({})", args.c, fmt_f64(report.d2_closed), report.verdict);
    Ok(())
}

fn cmd_find_c0(out: &mut Output) -> Result<()> {
    let r = stability::find_c0();
    out.json("c0.json", &r)?;
    println!("c0 = {}", fmt_f64(r.c0));
    Ok(())
}

fn cmd_sweep(out: &mut Output, args: &SweepArgs) -> Result<()> {
    let rows = stability::sweep_d2(args.cmin, args.cmax, args.steps, args.h)?;
    stability::write_sweep_csv(&out.path("d2_sweep.csv"), &rows)?;
    out.record("d2_sweep.csv")?;
    let failed = rows.iter().filter(|r| r.outcome.is_err()).count();
    println!("sweep-d2: {} rows, {failed} failed", rows.len());
    Ok(())
}

fn cmd_evolve(out: &mut Output, cfg: &SimConfig) -> Result<()> {
    let trace = evolve::run(cfg)?;
    trace.write_csv(&out.path("trace.csv"))?;
    out.record("trace.csv")?;
    let (de, dq) = trace.max_drift();
    let summary = json!({
        "config": cfg,
        "dist0": trace.initial_distance(),
        "dist_max": trace.max_distance(),
        "dE_rel_max": de,
        "dQ_rel_max": dq,
        "blowup": trace.blowup,
    });
    out.json("trace.meta.json", &summary)?;
    match trace.blowup {
        Some(t) => println!("evolve: blow-up at t = {}", fmt_f64(t)),
        None => println!(
            "evolve: dist0 = {} max = {}",
            fmt_f64(trace.initial_distance()),
            fmt_f64(trace.max_distance())
        ),
    }
    Ok(())
}

fn cmd_all(out: &mut Output, args: &AllArgs) -> Result<()> {
    cmd_profile(
        out,
        &ProfileArgs {
            c: args.c,
            k: 0.0,
            half_width: None,
            n: None,
            potential_samples: 400,
        },
    )?;
    cmd_spectrum(out, &SpectrumArgs { c: args.c, oracle_n: None })?;
    cmd_stability(out, &StabilityArgs { c: args.c, h: DEFAULT_FD_STEP })?;
    cmd_find_c0(out)?;
    cmd_sweep(
        out,
        &SweepArgs {
            cmin: 1.01,
            cmax: 1.33,
            steps: 33,
            h: DEFAULT_FD_STEP,
        },
    )?;
    let cfg = SimConfig {
        c: args.c,
        rho: args.rho,
        t_end: args.t_end,
        ..SimConfig::default()
    };
    cmd_evolve(out, &cfg)
}

fn parameters(cli: &Cli, evolve_cfg: Option<&SimConfig>) -> serde_json::Value {
    let cmd = match &cli.command {
        Command::Profile(a) => json!({"c": a.c, "k": a.k, "L": a.half_width, "n": a.n, "potential_samples": a.potential_samples}),
        Command::Spectrum(a) => json!({"c": a.c, "oracle_n": a.oracle_n}),
        Command::Stability(a) => json!({"c": a.c, "h": a.h}),
        Command::FindC0 => json!({}),
        Command::SweepD2(a) => json!({"cmin": a.cmin, "cmax": a.cmax, "steps": a.steps, "h": a.h}),
        Command::Evolve(_) => json!(evolve_cfg),
        Command::All(a) => json!({"c": a.c, "rho": a.rho, "T": a.t_end}),
    };
    json!({"out_dir": cli.out_dir, "threads": cli.threads, "command": cmd})
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Profile(_) => "profile",
        Command::Spectrum(_) => "spectrum",
        Command::Stability(_) => "stability",
        Command::FindC0 => "find-c0",
        Command::SweepD2(_) => "sweep-d2",
        Command::Evolve(_) => "evolve",
        Command::All(_) => "all",
    }
}

/// Runs a parsed command line.
pub fn execute(cli: &Cli) -> Result<()> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(Error::InvalidConfig("--threads must be positive".into()));
        }
        // a pool may already exist when called repeatedly in one process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let evolve_cfg = match &cli.command {
        Command::Evolve(a) => {
            let cfg = a.resolve(std::env::var("FW_SEED").ok().as_deref())?;
            cfg.validate()?;
            Some(cfg)
        }
        _ => None,
    };
    let mut out = Output::new(&cli.out_dir, command_name(&cli.command), parameters(cli, evolve_cfg.as_ref()))?;
    match &cli.command {
        Command::Profile(a) => cmd_profile(&mut out, a)?,
        Command::Spectrum(a) => cmd_spectrum(&mut out, a)?,
        Command::Stability(a) => cmd_stability(&mut out, a)?,
        Command::FindC0 => cmd_find_c0(&mut out)?,
        Command::SweepD2(a) => cmd_sweep(&mut out, a)?,
        Command::Evolve(_) => cmd_evolve(&mut out, evolve_cfg.as_ref().expect("resolved above"))?,
        Command::All(a) => cmd_all(&mut out, a)?,
    }
    out.finish()
}

/// Maps an error to the process exit status.
pub fn exit_code(e: &Error) -> u8 {
    if e.is_validation() {
        2
    } else {
        1
    }
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolve::Shape;

    #[test]
    fn flags_beat_env_and_file() {
        let dir = std::env::temp_dir().join(format!("fw-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.toml");
        std::fs::write(&path, "c = 1.25\nseed = 3\nshape = \"noise\"\n").unwrap();
        let args = EvolveArgs {
            config: Some(path),
            rho: Some(0.02),
            ..EvolveArgs::default()
        };
        let cfg = args.resolve(Some("11")).unwrap();
        assert_eq!((cfg.c, cfg.seed, cfg.rho, cfg.shape), (1.25, 11, 0.02, Shape::Noise));
        let pinned = EvolveArgs { seed: Some(5), ..args };
        assert_eq!(pinned.resolve(Some("11")).unwrap().seed, 5);
        assert!(pinned.resolve(Some("x")).is_err());
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::DomainError(0.9)), 2);
        assert_eq!(exit_code(&Error::IntegrationFailure("x".into())), 1);
    }

    #[test]
    fn parses_subcommands() {
        let cli = Cli::try_parse_from(["fw", "sweep-d2", "--cmin", "1.1", "--cmax", "1.2", "--steps", "3"]).unwrap();
        assert!(matches!(cli.command, Command::SweepD2(SweepArgs { steps: 3, .. })));
        let cli = Cli::try_parse_from(["fw", "--out-dir", "x", "evolve", "--T", "5", "--shape", "odd"]).unwrap();
        assert_eq!(cli.out_dir, PathBuf::from("x"));
        assert!(Cli::try_parse_from(["fw", "nope"]).is_err());
    }
}
