//! Run configuration: defaults, a `key = value` file, then flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_rational::BigRational;

use crate::error::{Backend, Error, Result};
use crate::literal::parse_rational;
use crate::region::{Sampler, Window};
use crate::series::DEFAULT_DEGREE_CAP;

pub const KEYS: [&str; 7] = ["backend", "seed", "window", "grid_step", "random_points", "cap", "out"];

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub backend: Backend,
    pub seed: u64,
    pub window: Window,
    pub grid_step: Option<BigRational>,
    pub random_points: usize,
    pub cap: usize,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let s = Sampler::default();
        RunConfig {
            backend: Backend::Exact,
            seed: 0,
            window: s.window,
            grid_step: s.grid_step,
            random_points: s.random_points,
            cap: DEFAULT_DEGREE_CAP,
            out: None,
        }
    }
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let l = raw.split('#').next().unwrap_or("").trim();
        if l.is_empty() {
            continue;
        }
        let (k, v) = l
            .split_once('=')
            .ok_or_else(|| Error::Usage(format!("config line {}: expected `key = value`", i + 1)))?;
        let k = k.trim().replace('-', "_");
        if !KEYS.contains(&k.as_str()) {
            return Err(Error::Usage(format!("config line {}: unknown key `{k}`", i + 1)));
        }
        out.insert(k, v.trim().to_string());
    }
    Ok(out)
}

pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config_text(&text)
}

fn bad(key: &str, v: &str) -> Error {
    Error::Usage(format!("invalid value `{v}` for {key}"))
}

impl RunConfig {
    /// Applies one setting.
    pub fn set(&mut self, key: &str, v: &str) -> Result<()> {
        match key {
            "backend" => self.backend = v.parse()?,
            "seed" => self.seed = v.parse().map_err(|_| bad(key, v))?,
            "window" => self.window = v.parse()?,
            "grid_step" => {
                let q = parse_rational(v)?;
                self.grid_step = if q == BigRational::from_integer(0.into()) { None } else { Some(q) };
                if self.grid_step.as_ref().is_some_and(|q| *q < BigRational::from_integer(0.into())) {
                    return Err(bad(key, v));
                }
            }
            "random_points" => self.random_points = v.parse().map_err(|_| bad(key, v))?,
            "cap" => {
                self.cap = v.parse().map_err(|_| bad(key, v))?;
                if self.cap == 0 {
                    return Err(bad(key, v));
                }
            }
            "out" => self.out = Some(PathBuf::from(v)),
            _ => return Err(Error::Usage(format!("unknown setting `{key}`"))),
        }
        Ok(())
    }

    /// Defaults, then the file, then the flags.
    pub fn resolve(file: &BTreeMap<String, String>, flags: &[(&str, Option<String>)]) -> Result<RunConfig> {
        let mut c = RunConfig::default();
        for (k, v) in file {
            c.set(k, v)?;
        }
        for (k, v) in flags {
            if let Some(v) = v {
                c.set(k, v)?;
            }
        }
        Ok(c)
    }

    pub fn sampler(&self) -> Sampler {
        Sampler {
            window: self.window.clone(),
            grid_step: self.grid_step.clone(),
            random_points: self.random_points,
            seed: self.seed,
            exact_fallback: true,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn flags_override_file() {
        let file = parse_config_text("seed = 5\ngrid-step = 1/8  # coarse\nbackend = float\n").unwrap();
        let c = RunConfig::resolve(&file, &[("seed", Some("9".into())), ("cap", None)]).unwrap();
        assert_eq!(c.seed, 9);
        assert_eq!(c.grid_step, Some(rat(1, 8)));
        assert_eq!(c.backend, Backend::Float);
        assert_eq!(c.cap, DEFAULT_DEGREE_CAP);
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(parse_config_text("colour = red").is_err());
        assert!(parse_config_text("seed 3").is_err());
    }
}
