//! Experiment configuration: flat `key=value` files with flag overrides.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "ENSEMBLE_PF_WORKERS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Lorenz63,
    Fhn,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Lorenz63 => "lorenz63",
            ModelKind::Fhn => "fhn",
        })
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lorenz63" | "lorenz" => Ok(ModelKind::Lorenz63),
            "fhn" | "fitzhugh-nagumo" => Ok(ModelKind::Fhn),
            other => Err(Error::Config(format!("unknown model `{other}`"))),
        }
    }
}

/// A filtering scheme compared in a sweep. Centralised schemes use
/// `K = M N` particles in one filter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    CentralisedBf,
    CentralisedApf,
    EnsembleBf,
    EnsembleApf,
    DoubleBf,
}

impl Variant {
    pub const ALL: [Variant; 5] = [
        Variant::CentralisedBf,
        Variant::CentralisedApf,
        Variant::EnsembleBf,
        Variant::EnsembleApf,
        Variant::DoubleBf,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::CentralisedBf => "centralised-bf",
            Variant::CentralisedApf => "centralised-apf",
            Variant::EnsembleBf => "ensemble-bf",
            Variant::EnsembleApf => "ensemble-apf",
            Variant::DoubleBf => "double-bf",
        }
    }

    pub fn is_centralised(self) -> bool {
        matches!(self, Variant::CentralisedBf | Variant::CentralisedApf)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.replace("centralized", "centralised");
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown variant `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub model: ModelKind,
    /// FH-N grid side.
    pub side: usize,
    /// Observation count; `None` picks the model default (200 for Lorenz 63,
    /// 100 for FH-N).
    pub steps: Option<usize>,
    pub variants: Vec<Variant>,
    pub m_values: Vec<usize>,
    pub n_values: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
    pub workers: usize,
    pub island_period: usize,
    /// Particles in the Lorenz 63 reference filter.
    pub reference_particles: usize,
    /// Existing observation file to filter instead of simulating.
    pub observations: Option<PathBuf>,
    /// Existing ground-truth trajectory matching `observations`.
    pub trajectory: Option<PathBuf>,
    pub out: PathBuf,
    pub trajectory_out: PathBuf,
    pub observations_out: PathBuf,
}

fn default_workers() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&w| w >= 1)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            model: ModelKind::Lorenz63,
            side: 16,
            steps: None,
            variants: vec![Variant::CentralisedBf, Variant::EnsembleBf],
            m_values: vec![8],
            n_values: vec![100, 400, 800],
            reps: 10,
            seed: 1,
            workers: default_workers(),
            island_period: 5,
            reference_particles: 10_000,
            observations: None,
            trajectory: None,
            out: PathBuf::from("results.csv"),
            trajectory_out: PathBuf::from("trajectory.csv"),
            observations_out: PathBuf::from("observations.csv"),
        }
    }
}

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("`{key}`: cannot parse `{value}`")))
}

fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_num(key, s))
        .collect()
}

impl ExperimentConfig {
    /// Reads a config file on top of the defaults.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::default();
        cfg.apply_str(&text)?;
        Ok(cfg)
    }

    /// Applies `key=value` lines. Blank lines and `#` comments are skipped.
    pub fn apply_str(&mut self, text: &str) -> Result<()> {
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key=value", lineno + 1)))?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }

    /// Sets one key. Keys match the command-line flags.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "model" => self.model = value.parse()?,
            "side" => self.side = parse_num(key, value)?,
            "steps" | "T" => self.steps = Some(parse_num(key, value)?),
            "variant" | "variants" => {
                self.variants = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(str::parse)
                    .collect::<Result<_>>()?
            }
            "M" => self.m_values = parse_list(key, value)?,
            "N" => self.n_values = parse_list(key, value)?,
            "reps" => self.reps = parse_num(key, value)?,
            "seed" => self.seed = parse_num(key, value)?,
            "workers" => self.workers = parse_num(key, value)?,
            "island_period" => self.island_period = parse_num(key, value)?,
            "reference_particles" => self.reference_particles = parse_num(key, value)?,
            "observations" => self.observations = Some(value.into()),
            "trajectory" => self.trajectory = Some(value.into()),
            "out" => self.out = value.into(),
            "trajectory_out" => self.trajectory_out = value.into(),
            "observations_out" => self.observations_out = value.into(),
            other => return Err(Error::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    pub fn horizon(&self) -> usize {
        self.steps.unwrap_or(match self.model {
            ModelKind::Lorenz63 => 200,
            ModelKind::Fhn => 100,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.variants.is_empty() || self.m_values.is_empty() || self.n_values.is_empty() {
            return Err(Error::Config("variant, M and N lists must be non-empty".into()));
        }
        if self.m_values.iter().chain(&self.n_values).any(|&v| v == 0) {
            return Err(Error::Config("sweep values must be at least 1".into()));
        }
        if self.reps == 0 {
            return Err(Error::Config("reps must be at least 1".into()));
        }
        if self.workers == 0 || self.island_period == 0 || self.reference_particles == 0 {
            return Err(Error::Config(
                "workers, island_period and reference_particles must be at least 1".into(),
            ));
        }
        if self.model == ModelKind::Fhn && self.side < 2 {
            return Err(Error::Config("FH-N grid side must be at least 2".into()));
        }
        if self.trajectory.is_some() && self.observations.is_none() {
            return Err(Error::Config("a trajectory file needs its observation file".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_flags() {
        let mut cfg = ExperimentConfig::default();
        cfg.apply_str("# sweep\nmodel = fhn\nM=4\nN = 100, 250,500\nvariant=ensemble-apf,centralised-bf\n")
            .unwrap();
        cfg.set("N", "50").unwrap();
        assert_eq!(cfg.model, ModelKind::Fhn);
        assert_eq!(cfg.m_values, vec![4]);
        assert_eq!(cfg.n_values, vec![50]);
        assert_eq!(cfg.variants, vec![Variant::EnsembleApf, Variant::CentralisedBf]);
        assert_eq!(cfg.horizon(), 100);
        cfg.validate().unwrap();
    }

    #[test]
    fn empty_sweeps_are_config_errors() {
        let mut cfg = ExperimentConfig::default();
        cfg.set("M", "").unwrap();
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
        let mut cfg = ExperimentConfig::default();
        cfg.set("variant", " ").unwrap();
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn rejects_bad_input() {
        let mut cfg = ExperimentConfig::default();
        assert!(cfg.set("colour", "blue").is_err());
        assert!(cfg.set("N", "ten").is_err());
        assert!(cfg.set("variant", "ensemble-xyz").is_err());
        assert!(cfg.apply_str("no equals sign").is_err());
        cfg.set("N", "0").unwrap();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn variant_names_round_trip() {
        for v in Variant::ALL {
            assert_eq!(v.name().parse::<Variant>().unwrap(), v);
        }
        assert_eq!("centralized-bf".parse::<Variant>().unwrap(), Variant::CentralisedBf);
    }
}
