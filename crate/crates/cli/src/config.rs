//! Run configuration: defaults, `key = value` config files and flag overrides.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use anharmonic::OscillatorSpec;

/// Environment variable supplying the default cache directory.
pub const CACHE_DIR_ENV: &str = "AKL_CACHE_DIR";

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("{path}:{line}: unknown key `{key}`")]
    UnknownKey { path: String, line: usize, key: String },
    #[error("{path}:{line}: expected `key = value`, found {text:?}")]
    Syntax { path: String, line: usize, text: String },
    #[error("{origin}: invalid value {value:?} for `{key}`: {reason}")]
    Value {
        origin: String,
        key: String,
        value: String,
        reason: String,
    },
    #[error("cannot read config file {path}: {reason}")]
    Read { path: String, reason: String },
}

/// A verification suite selectable on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, clap::ValueEnum)]
pub enum Suite {
    Paley,
    Hyp,
    Multiplier,
    Heat,
    Sobolev,
    Trace,
    Modulation,
    All,
}

impl Suite {
    pub const EVERY: [Suite; 7] = [
        Suite::Paley,
        Suite::Hyp,
        Suite::Multiplier,
        Suite::Heat,
        Suite::Sobolev,
        Suite::Trace,
        Suite::Modulation,
    ];

    /// Expands `all` and removes duplicates, keeping the canonical order.
    pub fn expand(list: &[Suite]) -> Vec<Suite> {
        Suite::EVERY
            .into_iter()
            .filter(|s| list.contains(s) || list.contains(&Suite::All))
            .collect()
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <Suite as clap::ValueEnum>::from_str(s.trim(), true)
    }
}

/// Everything a run needs. Fields mirror the long flag names.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub k: u32,
    pub l: u32,
    pub n_dim: usize,
    pub grid_n: usize,
    pub domain_l: f64,
    pub modes: usize,
    pub p: f64,
    pub q: f64,
    pub t: f64,
    pub m: f64,
    pub r: f64,
    pub weight_s: f64,
    pub trials: usize,
    pub seed: u64,
    pub cache: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub recompute: bool,
    pub suites: Vec<Suite>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            k: 1,
            l: 1,
            n_dim: 1,
            grid_n: 2001,
            domain_l: 10.0,
            modes: 40,
            p: 1.5,
            q: 3.0,
            t: 1.0,
            m: 1.5,
            r: 1.0,
            weight_s: 0.0,
            trials: 200,
            seed: 42,
            cache: None,
            out: None,
            recompute: false,
            suites: vec![Suite::All],
        }
    }
}

/// Optional overrides, one per key; `None` leaves the current value.
#[derive(Clone, Debug, Default, PartialEq, clap::Args)]
pub struct Overrides {
    #[arg(long, global = true)]
    pub k: Option<u32>,
    #[arg(long, global = true)]
    pub l: Option<u32>,
    #[arg(long = "n-dim", global = true)]
    pub n_dim: Option<usize>,
    #[arg(long = "grid-n", global = true)]
    pub grid_n: Option<usize>,
    #[arg(long = "domain-l", global = true)]
    pub domain_l: Option<f64>,
    #[arg(long, global = true)]
    pub modes: Option<usize>,
    #[arg(long, global = true)]
    pub p: Option<f64>,
    /// Target exponent; `inf` is accepted.
    #[arg(long, global = true)]
    pub q: Option<f64>,
    #[arg(long, global = true)]
    pub t: Option<f64>,
    #[arg(long, global = true)]
    pub m: Option<f64>,
    #[arg(long, global = true)]
    pub r: Option<f64>,
    #[arg(long = "weight-s", global = true)]
    pub weight_s: Option<f64>,
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Cache directory (default: $AKL_CACHE_DIR).
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Report file; CSV series go to `<out>.series.csv`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Re-solve and overwrite cached bases instead of failing on mismatch.
    #[arg(long, global = true)]
    pub recompute: bool,
}

impl Overrides {
    fn apply(&self, c: &mut RunConfig) {
        macro_rules! set {
            ($($f:ident),*) => {$(if let Some(v) = &self.$f { c.$f = v.clone().into(); })*};
        }
        set!(k, l, n_dim, grid_n, domain_l, modes, p, q, t, m, r, weight_s, trials, seed);
        if let Some(v) = &self.cache {
            c.cache = Some(v.clone());
        }
        if let Some(v) = &self.out {
            c.out = Some(v.clone());
        }
        c.recompute |= self.recompute;
    }
}

fn parse<T: FromStr>(origin: &str, key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e: T::Err| ConfigError::Value {
        origin: origin.to_string(),
        key: key.to_string(),
        value: value.to_string(),
        reason: e.to_string(),
    })
}

impl RunConfig {
    /// Sets one key from its textual value. Underscores and dashes are
    /// interchangeable in key names.
    pub fn set(&mut self, key: &str, value: &str, origin: &str) -> Result<bool, ConfigError> {
        let key = key.trim().replace('_', "-");
        let v = value.trim();
        let o = origin;
        match key.as_str() {
            "k" => self.k = parse(o, &key, v)?,
            "l" => self.l = parse(o, &key, v)?,
            "n-dim" => self.n_dim = parse(o, &key, v)?,
            "grid-n" => self.grid_n = parse(o, &key, v)?,
            "domain-l" => self.domain_l = parse(o, &key, v)?,
            "modes" => self.modes = parse(o, &key, v)?,
            "p" => self.p = parse(o, &key, v)?,
            "q" => self.q = parse(o, &key, v)?,
            "t" => self.t = parse(o, &key, v)?,
            "m" => self.m = parse(o, &key, v)?,
            "r" => self.r = parse(o, &key, v)?,
            "weight-s" => self.weight_s = parse(o, &key, v)?,
            "trials" => self.trials = parse(o, &key, v)?,
            "seed" => self.seed = parse(o, &key, v)?,
            "cache" => self.cache = Some(PathBuf::from(v)),
            "out" => self.out = Some(PathBuf::from(v)),
            "recompute" => self.recompute = parse(o, &key, v)?,
            "suites" => {
                self.suites = v
                    .split(',')
                    .map(|s| parse::<Suite>(o, &key, s))
                    .collect::<Result<_, _>>()?;
            }
            _ => return Ok(false),
        }
        Ok(true)
    }

    /// Applies a config file's text. Blank lines and `#` comments are ignored.
    pub fn apply_config_text(&mut self, text: &str, path: &str) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::Syntax {
                    path: path.to_string(),
                    line: i + 1,
                    text: raw.to_string(),
                });
            };
            let origin = format!("{path}:{}", i + 1);
            if !self.set(key, value, &origin)? {
                return Err(ConfigError::UnknownKey {
                    path: path.to_string(),
                    line: i + 1,
                    key: key.trim().to_string(),
                });
            }
        }
        Ok(())
    }

    /// Defaults, then the cache-directory environment default, then the
    /// config file, then flags.
    pub fn resolve(config: Option<&Path>, flags: &Overrides, env_cache: Option<PathBuf>) -> Result<Self, ConfigError> {
        let mut c = RunConfig {
            cache: env_cache,
            ..RunConfig::default()
        };
        if let Some(path) = config {
            let shown = path.display().to_string();
            let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Read {
                path: shown.clone(),
                reason: e.to_string(),
            })?;
            c.apply_config_text(&text, &shown)?;
        }
        flags.apply(&mut c);
        Ok(c)
    }

    pub fn spec(&self) -> OscillatorSpec {
        OscillatorSpec::new(self.k, self.l, self.domain_l, self.grid_n, self.modes).with_dim(self.n_dim)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_accept_dashes_and_underscores() {
        let mut c = RunConfig::default();
        c.apply_config_text("grid_n = 101\ndomain-l=5 # trailing\n\n# comment\nq = inf\n", "x")
            .unwrap();
        assert_eq!((c.grid_n, c.domain_l, c.q), (101, 5.0, f64::INFINITY));
    }

    #[test]
    fn malformed_lines_are_rejected() {
        let mut c = RunConfig::default();
        assert!(matches!(
            c.apply_config_text("grid-n 101", "x"),
            Err(ConfigError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            c.apply_config_text("\ncolour = red", "x"),
            Err(ConfigError::UnknownKey { line: 2, .. })
        ));
        assert!(matches!(
            c.apply_config_text("k = two", "x"),
            Err(ConfigError::Value { .. })
        ));
    }

    #[test]
    fn suites_expand_in_canonical_order() {
        let mut c = RunConfig::default();
        c.apply_config_text("suites = trace, heat, trace", "x").unwrap();
        assert_eq!(Suite::expand(&c.suites), vec![Suite::Heat, Suite::Trace]);
        assert_eq!(Suite::expand(&[Suite::All]).len(), 7);
    }
}
