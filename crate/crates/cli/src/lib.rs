//! `akl`: solve, transform and verify from the command line.
//!
//! Exit codes: 0 when every selected verdict passes, 1 when any fails, 2 on
//! configuration, cache or numerical errors.

pub mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use anharmonic::spectral::{load_basis, save_basis};
use anharmonic::verify::*;
use anharmonic::{conjugate_exponent, OscillatorSpec, SpectralBasis};
use clap::{Parser, Subcommand};

pub use config::{ConfigError, Overrides, RunConfig, Suite, CACHE_DIR_ENV};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

/// Report file used when `--out` is not given.
pub const DEFAULT_OUT: &str = "akl-report.json";

#[derive(Debug, Parser)]
#[command(
    name = "akl",
    version,
    about = "Anharmonic oscillator spectral toolkit",
    args_override_self = true
)]
pub struct Cli {
    /// `key = value` config file; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub flags: Overrides,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve and report the Weyl slope, eigenvalue growth and sup-norms.
    Spectrum,
    /// Round-trip, Plancherel and Hausdorff–Young checks.
    Transform,
    /// Run verification suites (default: the config's `suites`, else all).
    Verify { suites: Vec<Suite> },
    /// Manage the basis cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Clone, Copy, Debug, Subcommand)]
pub enum CacheAction {
    /// Solve and write the basis for the current spec.
    Save,
    /// Load the cached basis, failing if its spec differs.
    Load,
    /// Describe the cached file without checking it against the spec.
    Info,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Core(#[from] anharmonic::Error),
    #[error("cache {path} holds a different spec ({found}); pass --recompute to overwrite")]
    CacheMismatch { path: String, found: String },
    #[error("{0}")]
    Usage(String),
}

/// Cache file name for a spec; the remaining fields are checked on load.
pub fn cache_file_name(spec: &OscillatorSpec) -> String {
    format!("akl-n{}-k{}-l{}-N{}.aklb", spec.n, spec.k, spec.l, spec.grid_points)
}

fn describe(spec: &OscillatorSpec) -> String {
    format!(
        "n={} k={} l={} N={} L={} modes={} stencil={:?}",
        spec.n, spec.k, spec.l, spec.grid_points, spec.domain_half_width, spec.modes, spec.stencil
    )
}

/// Solves bases on demand, going through the cache directory when set.
pub struct Bases<'a> {
    config: &'a RunConfig,
    base: Option<Arc<SpectralBasis>>,
    stability: Option<StabilityBases>,
}

impl<'a> Bases<'a> {
    pub fn new(config: &'a RunConfig) -> Self {
        Self {
            config,
            base: None,
            stability: None,
        }
    }

    fn obtain(&self, spec: &OscillatorSpec) -> Result<SpectralBasis, CliError> {
        let Some(dir) = &self.config.cache else {
            return Ok(SpectralBasis::solve(spec)?);
        };
        let path = dir.join(cache_file_name(spec));
        if path.exists() && !self.config.recompute {
            let basis = load_basis(&path)?;
            if basis.spec() != spec {
                return Err(CliError::CacheMismatch {
                    path: path.display().to_string(),
                    found: describe(basis.spec()),
                });
            }
            log::info!("loaded {}", path.display());
            return Ok(basis);
        }
        let basis = SpectralBasis::solve(spec)?;
        std::fs::create_dir_all(dir).map_err(anharmonic::Error::from)?;
        save_basis(&basis, &path)?;
        log::info!("cached {}", path.display());
        Ok(basis)
    }

    pub fn base(&mut self) -> Result<Arc<SpectralBasis>, CliError> {
        if self.base.is_none() {
            self.base = Some(Arc::new(self.obtain(&self.config.spec())?));
        }
        Ok(self.base.clone().unwrap())
    }

    pub fn stability(&mut self) -> Result<&StabilityBases, CliError> {
        if self.stability.is_none() {
            let base = (*self.base()?).clone();
            let mut fine = self.config.spec();
            fine.grid_points = 2 * fine.grid_points - 1;
            let refined = self.obtain(&fine)?;
            self.stability = Some(StabilityBases::from_bases(base, refined)?);
        }
        Ok(self.stability.as_ref().unwrap())
    }
}

fn spectrum_report(basis: &SpectralBasis) -> VerificationReport {
    let mut r = VerificationReport::new("eigenvalues", SpecEcho::new(basis.spec(), basis.trusted()));
    r.measure(Measurement::info("lambda1", basis.eigenvalues()[0]));
    r.measure(Measurement::info(
        "maxTrustedEigenvalue",
        basis.max_trusted_eigenvalue(),
    ));
    r.measure(Measurement::at_least(
        "lambda1MinusOne",
        basis.eigenvalues()[0] - 1.0,
        0.0,
    ));
    r.series(
        "j vs lambda_j",
        basis
            .trusted_eigenvalues()
            .iter()
            .enumerate()
            .map(|(j, l)| ((j + 1) as f64, *l))
            .collect(),
    );
    r.series(
        "j vs sup|u_j|",
        basis
            .sup_norms()
            .iter()
            .enumerate()
            .map(|(j, s)| ((j + 1) as f64, *s))
            .collect(),
    );
    r
}

/// Reports of one verification suite.
pub fn run_suite(suite: Suite, c: &RunConfig, bases: &mut Bases) -> Result<Vec<VerificationReport>, CliError> {
    let phi = Phi::inverse_eigenvalue();
    Ok(match suite {
        Suite::Paley => vec![verify_paley(bases.stability()?, c.p, &phi, c.trials, c.seed)?],
        Suite::Hyp => {
            let pd = conjugate_exponent(c.p);
            let mut bs = vec![c.p, 0.5 * (c.p + pd), pd];
            bs.dedup();
            let st = bases.stability()?;
            bs.into_iter()
                .map(|b| verify_hyp(st, c.p, b, &phi, c.trials, c.seed))
                .collect::<Result<_, _>>()?
        }
        Suite::Multiplier => vec![verify_multiplier_theorem(
            bases.stability()?,
            &SymbolSpec::Power(-c.m),
            c.p,
            c.q,
            c.trials,
            c.seed,
        )?],
        Suite::Heat => vec![verify_heat_decay(
            &bases.base()?,
            c.p,
            c.q,
            &default_heat_times(),
            c.trials,
            c.seed,
        )?],
        Suite::Sobolev => vec![verify_sobolev_estimate(
            bases.stability()?,
            c.m,
            0.0,
            c.p,
            c.q,
            c.trials,
            c.seed,
        )?],
        Suite::Trace => vec![verify_trace(&*bases.base()?, c.t)?],
        Suite::Modulation => {
            let params = ModulationParams {
                p: c.p,
                q: c.q,
                s: c.weight_s,
                r: c.r,
                trials: c.trials,
                seed: c.seed,
                ..ModulationParams::default()
            };
            vec![verify_modulation(&bases.base()?, params)?]
        }
        Suite::All => unreachable!("expanded before dispatch"),
    })
}

fn emit(reports: &[VerificationReport], c: &RunConfig, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let path = c.out.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    let refs: Vec<&VerificationReport> = reports.iter().collect();
    for r in &refs {
        let _ = writeln!(stdout, "{}", r.summary());
    }
    write_report_files(&refs, &path)?;
    let _ = writeln!(stdout, "wrote {} and {}", path.display(), series_path(&path).display());
    let failed = reports.iter().filter(|r| !r.passed()).count();
    let _ = writeln!(stdout, "{} of {} reports passed", reports.len() - failed, reports.len());
    Ok(if failed == 0 { EXIT_PASS } else { EXIT_FAIL })
}

fn cache_command(action: CacheAction, c: &RunConfig, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let dir = c
        .cache
        .as_ref()
        .ok_or_else(|| CliError::Usage(format!("no cache directory: pass --cache or set {CACHE_DIR_ENV}")))?;
    let spec = c.spec();
    let path = dir.join(cache_file_name(&spec));
    let show = |b: &SpectralBasis, out: &mut dyn Write| {
        let _ = writeln!(out, "{}", path.display());
        let _ = writeln!(out, "spec: {}", describe(b.spec()));
        let _ = writeln!(
            out,
            "trusted modes: {} of {}, lambda in [{}, {}]",
            b.trusted(),
            b.modes(),
            b.eigenvalues()[0],
            b.max_trusted_eigenvalue()
        );
    };
    match action {
        CacheAction::Save => {
            let recompute = RunConfig {
                recompute: true,
                ..c.clone()
            };
            let b = Bases::new(&recompute).obtain(&spec)?;
            show(&b, stdout);
        }
        CacheAction::Load => {
            if !path.exists() {
                return Err(CliError::Usage(format!("no cache file {}", path.display())));
            }
            let strict = RunConfig {
                recompute: false,
                ..c.clone()
            };
            let b = Bases::new(&strict).obtain(&spec)?;
            show(&b, stdout);
        }
        CacheAction::Info => show(&load_basis(&path)?, stdout),
    }
    Ok(EXIT_PASS)
}

fn execute(cli: &Cli, c: &RunConfig, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let mut bases = Bases::new(c);
    let reports = match &cli.command {
        Command::Spectrum => {
            let base = bases.base()?;
            let window = SlopeWindow::default();
            vec![
                spectrum_report(&base),
                verify_weyl_slope(&base, window)?,
                verify_growth_slope(&base, window)?,
                verify_sup_norm_bound(bases.stability()?)?,
            ]
        }
        Command::Transform => {
            let base = bases.base()?;
            vec![
                verify_plancherel(&base, c.trials, c.seed)?,
                verify_hausdorff_young(&base, &[1.0, 1.25, 1.5, 2.0], c.trials, c.seed)?,
            ]
        }
        Command::Verify { suites } => {
            let list = if suites.is_empty() { &c.suites } else { suites };
            let mut out = Vec::new();
            for s in Suite::expand(list) {
                log::info!("running {s:?}");
                out.extend(run_suite(s, c, &mut bases)?);
            }
            out
        }
        Command::Cache { action } => return cache_command(*action, c, stdout),
    };
    emit(&reports, c, stdout)
}

/// Parses `args` (program name first) and runs, returning the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(stderr, "{text}")
            } else {
                write!(stdout, "{text}")
            };
            return code;
        }
    };
    let env_cache = std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from);
    let result = RunConfig::resolve(cli.config.as_deref(), &cli.flags, env_cache)
        .map_err(CliError::from)
        .and_then(|c| execute(&cli, &c, stdout));
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_ERROR
        }
    }
}

/// Resolves the configuration a command line would run with.
pub fn resolve_config<I, T>(args: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::Usage(e.to_string()))?;
    let env_cache = std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from);
    Ok(RunConfig::resolve(cli.config.as_deref(), &cli.flags, env_cache)?)
}
