//! Experiment configuration: a single JSON document describing one batch of
//! seeded runs.

use std::fmt;
use std::path::{Path, PathBuf};

use relapprox_core::numeric::Rat;
use relapprox_core::{Caps, Constants, Dim, FamilyKind};

/// Point-set generators. All coordinates are exact decimals with at most six
/// fractional digits, stored as integers scaled by 10^6.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    /// Independent uniform coordinates in the unit square (2D only).
    UniformSquare,
    /// Independent uniform coordinates in the unit cube (3D only).
    UniformCube,
    /// The first `n` cells of a square or cubic lattice spanning the unit box.
    Grid,
    /// Points near a common circle, in exactly verified convex position
    /// (2D only).
    ConvexCircle,
    /// Bell-shaped clusters around `ceil(sqrt(n))` uniform centers.
    Clustered,
}

impl GeneratorKind {
    /// Stable lowercase name used in configs and reports.
    pub fn name(self) -> &'static str {
        match self {
            GeneratorKind::UniformSquare => "uniform_square",
            GeneratorKind::UniformCube => "uniform_cube",
            GeneratorKind::Grid => "grid",
            GeneratorKind::ConvexCircle => "convex_circle",
            GeneratorKind::Clustered => "clustered",
        }
    }

    /// Parses a generator name as written in configs.
    pub fn parse(name: &str) -> Option<GeneratorKind> {
        match name {
            "uniform_square" => Some(GeneratorKind::UniformSquare),
            "uniform_cube" => Some(GeneratorKind::UniformCube),
            "grid" => Some(GeneratorKind::Grid),
            "convex_circle" => Some(GeneratorKind::ConvexCircle),
            "clustered" => Some(GeneratorKind::Clustered),
            _ => None,
        }
    }

    /// The ambient dimension this generator requires, if it is fixed.
    pub fn fixed_dim(self) -> Option<Dim> {
        match self {
            GeneratorKind::UniformSquare | GeneratorKind::ConvexCircle => Some(Dim::Two),
            GeneratorKind::UniformCube => Some(Dim::Three),
            GeneratorKind::Grid | GeneratorKind::Clustered => None,
        }
    }
}

/// Errors from loading or validating a configuration.
#[derive(Debug)]
pub enum ConfigError {
    /// The file could not be read.
    Io(std::io::Error),
    /// The document is not valid JSON for this schema.
    Json(serde_json::Error),
    /// The fields are readable but inconsistent.
    Invalid(String),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Io(e) => write!(f, "config io: {e}"),
            ConfigError::Json(e) => write!(f, "config json: {e}"),
            ConfigError::Invalid(msg) => write!(f, "config invalid: {msg}"),
        }
    }
}

impl std::error::Error for ConfigError {}

/// One batch of seeded end-to-end runs over a generated point set.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ExperimentConfig {
    /// Report schema version this config targets.
    #[serde(default = "default_schema_version")]
    pub schema_version: u32,
    /// Point-set generator.
    pub generator: GeneratorKind,
    /// Ground set size.
    pub n: u32,
    /// Range family.
    pub family: FamilyKind,
    /// Measure cutoff, as an exact `"num/den"` or decimal string.
    #[serde(with = "relapprox_core::numeric::rat_string")]
    pub p: Rat,
    /// Tolerance, as an exact `"num/den"` or decimal string.
    #[serde(with = "relapprox_core::numeric::rat_string")]
    pub eps: Rat,
    /// Scale constant overrides.
    #[serde(default)]
    pub constants: Constants,
    /// Iteration cap overrides.
    #[serde(default)]
    pub caps: Caps,
    /// Master seeds, one end-to-end run each.
    pub seeds: Vec<u64>,
    /// Directory for `report.json` and the CSV tables; no files are written
    /// when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
    /// Allows `n` beyond the family's enumeration cap.
    #[serde(default)]
    pub force_large_n: bool,
}

fn default_schema_version() -> u32 {
    1
}

impl ExperimentConfig {
    /// Reads and validates a config from a JSON file.
    pub fn load(path: &Path) -> Result<ExperimentConfig, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(ConfigError::Io)?;
        let config: ExperimentConfig =
            serde_json::from_str(&text).map_err(ConfigError::Json)?;
        config.validate()?;
        Ok(config)
    }

    /// Checks cross-field consistency.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.schema_version != 1 {
            return Err(ConfigError::Invalid(format!(
                "unsupported schema_version {}",
                self.schema_version
            )));
        }
        if self.n == 0 {
            return Err(ConfigError::Invalid(String::from("n must be at least 1")));
        }
        if self.seeds.is_empty() {
            return Err(ConfigError::Invalid(String::from("no seeds")));
        }
        if let Some(dim) = self.generator.fixed_dim() {
            if dim != self.family.dim() {
                return Err(ConfigError::Invalid(format!(
                    "generator {} produces {:?} points but family {} needs {:?}",
                    self.generator.name(),
                    dim,
                    self.family.name(),
                    self.family.dim()
                )));
            }
        }
        if !self.force_large_n && self.n as usize > self.family.enumeration_cap() {
            return Err(ConfigError::Invalid(format!(
                "n = {} exceeds the {} enumeration cap {}; set force_large_n",
                self.n,
                self.family.name(),
                self.family.enumeration_cap()
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use relapprox_core::numeric::rat;

    fn base() -> ExperimentConfig {
        ExperimentConfig {
            schema_version: 1,
            generator: GeneratorKind::UniformSquare,
            n: 50,
            family: FamilyKind::Halfplanes2d,
            p: rat(1, 16),
            eps: rat(1, 4),
            constants: Constants::default(),
            caps: Caps::default(),
            seeds: vec![0, 1],
            out_dir: None,
            force_large_n: false,
        }
    }

    #[test]
    fn json_round_trip_preserves_the_config() {
        let config = base();
        let text = serde_json::to_string_pretty(&config).unwrap();
        let back: ExperimentConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, config);
        assert!(text.contains("\"1/16\""));
        assert!(text.contains("\"uniform_square\""));
    }

    #[test]
    fn defaults_fill_in_missing_sections() {
        let text = r#"{
            "generator": "grid",
            "n": 9,
            "family": "rects2d",
            "p": "0.25",
            "eps": "1/2",
            "seeds": [7]
        }"#;
        let config: ExperimentConfig = serde_json::from_str(text).unwrap();
        config.validate().unwrap();
        assert_eq!(config.schema_version, 1);
        assert_eq!(config.constants, Constants::default());
        assert_eq!(config.p, rat(1, 4));
        assert!(!config.force_large_n);
    }

    #[test]
    fn validation_rejects_inconsistent_fields() {
        let mut no_seeds = base();
        no_seeds.seeds.clear();
        assert!(no_seeds.validate().unwrap_err().to_string().contains("no seeds"));

        let mut wrong_dim = base();
        wrong_dim.family = FamilyKind::Boxes3d;
        assert!(wrong_dim.validate().is_err());

        let mut too_big = base();
        too_big.n = 401;
        assert!(too_big.validate().is_err());
        too_big.force_large_n = true;
        too_big.validate().unwrap();
    }

    #[test]
    fn generator_names_round_trip() {
        for kind in [
            GeneratorKind::UniformSquare,
            GeneratorKind::UniformCube,
            GeneratorKind::Grid,
            GeneratorKind::ConvexCircle,
            GeneratorKind::Clustered,
        ] {
            assert_eq!(GeneratorKind::parse(kind.name()), Some(kind));
        }
        assert_eq!(GeneratorKind::parse("spiral"), None);
    }
}
