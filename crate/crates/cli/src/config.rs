//! TOML run configuration. Every key is optional; unknown keys are rejected.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use phlo_core::field::Sign;
use phlo_core::numerics::TolerancePolicy;
use phlo_core::solutions::{Amplitude, AmplitudeKind, PhLOConfig, SolutionGrid};
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;
use crate::suites::Suite;

/// `"PHLO"` in ASCII.
pub const DEFAULT_SEED: u64 = 0x5048_4C4F;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunFile {
    pub seed: Option<u64>,
    pub suites: Option<Vec<Suite>>,
    pub report: Option<PathBuf>,
    #[serde(default)]
    pub solution: SolutionFile,
    #[serde(default)]
    pub tolerances: TolerancesFile,
    #[serde(default)]
    pub sweep: SweepFile,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionFile {
    pub epsilon: Option<i8>,
    pub kappa: Option<i8>,
    pub l0: Option<f64>,
    pub phase_const: Option<f64>,
    pub c_light: Option<f64>,
    pub xi0: Option<f64>,
    #[serde(default)]
    pub amplitude: AmplitudeFile,
    #[serde(default)]
    pub grid: GridFile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KindFile {
    ProductMollifier,
    TruncatedGaussian,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmplitudeFile {
    pub kind: Option<KindFile>,
    pub phi0: Option<f64>,
    pub r0: Option<f64>,
    pub s0: Option<f64>,
    pub s_center: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridFile {
    pub points: Option<[usize; 3]>,
    pub xi_points: Option<usize>,
    pub half_widths: Option<[f64; 3]>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TolerancesFile {
    pub algebraic_tol: Option<f64>,
    pub jet_oracle_tol: Option<f64>,
    pub fd_divergence_tol: Option<f64>,
    pub quadrature_rel_tol: Option<f64>,
    pub phase_floor: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepFile {
    pub field_pairs: Option<usize>,
    pub points_per_pair: Option<usize>,
    pub support_points: Option<usize>,
    pub fd_step: Option<f64>,
}

/// Sizes of the randomized sweeps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub field_pairs: usize,
    pub points_per_pair: usize,
    pub support_points: usize,
    pub fd_step: f64,
}

impl Default for Sweep {
    fn default() -> Self {
        Sweep {
            field_pairs: 20,
            points_per_pair: 100,
            support_points: 1000,
            fd_step: 1e-3,
        }
    }
}

/// A validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub seed: u64,
    pub suites: Vec<Suite>,
    pub report: Option<PathBuf>,
    pub solution: PhLOConfig,
    pub sweep: Sweep,
    /// Hex SHA-256 of the configuration file bytes.
    pub config_hash: String,
}

fn sign(name: &str, v: Option<i8>) -> Result<Sign, CliError> {
    match v.unwrap_or(1) {
        1 => Ok(Sign::Plus),
        -1 => Ok(Sign::Minus),
        other => Err(CliError::Config(format!("{name} must be 1 or -1, got {other}"))),
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let bytes = fs::read(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_bytes(&bytes)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, CliError> {
        let text = std::str::from_utf8(bytes).map_err(|e| CliError::Config(format!("config is not UTF-8: {e}")))?;
        let file: RunFile = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        let hash = hex::encode(Sha256::digest(bytes));
        Self::from_file(file, hash)
    }

    fn from_file(file: RunFile, config_hash: String) -> Result<Self, CliError> {
        let s = &file.solution;
        let l0 = s.l0.unwrap_or(1.0);
        let a = &s.amplitude;
        let kind = match a.kind.unwrap_or(KindFile::ProductMollifier) {
            KindFile::ProductMollifier => AmplitudeKind::ProductMollifier,
            KindFile::TruncatedGaussian => AmplitudeKind::TruncatedGaussian,
        };
        let defaults = SolutionGrid::default();
        let t = &file.tolerances;
        let td = TolerancePolicy::default();
        let solution = PhLOConfig {
            epsilon: sign("epsilon", s.epsilon)?,
            kappa: sign("kappa", s.kappa)?,
            l0,
            phase_const: s.phase_const.unwrap_or(0.0),
            c_light: s.c_light.unwrap_or(1.0),
            xi0: s.xi0.unwrap_or(0.0),
            amplitude: Amplitude {
                kind,
                phi0: a.phi0.unwrap_or(1.0),
                r0: a.r0.unwrap_or(1.0),
                s0: a.s0.unwrap_or(PI * l0),
                s_center: a.s_center.unwrap_or(0.0),
            },
            grid: SolutionGrid {
                points: s.grid.points.unwrap_or(defaults.points),
                xi_points: s.grid.xi_points.unwrap_or(defaults.xi_points),
                half_widths: s.grid.half_widths,
            },
            tolerances: TolerancePolicy {
                algebraic_tol: t.algebraic_tol.unwrap_or(td.algebraic_tol),
                jet_oracle_tol: t.jet_oracle_tol.unwrap_or(td.jet_oracle_tol),
                fd_divergence_tol: t.fd_divergence_tol.unwrap_or(td.fd_divergence_tol),
                quadrature_rel_tol: t.quadrature_rel_tol.unwrap_or(td.quadrature_rel_tol),
                phase_floor: t.phase_floor.unwrap_or(td.phase_floor),
            },
        };
        solution.validate()?;

        let sd = Sweep::default();
        let sweep = Sweep {
            field_pairs: file.sweep.field_pairs.unwrap_or(sd.field_pairs),
            points_per_pair: file.sweep.points_per_pair.unwrap_or(sd.points_per_pair),
            support_points: file.sweep.support_points.unwrap_or(sd.support_points),
            fd_step: file.sweep.fd_step.unwrap_or(sd.fd_step),
        };
        if sweep.field_pairs == 0 || sweep.points_per_pair == 0 || sweep.support_points == 0 {
            return Err(CliError::Config("sweep sizes must be positive".into()));
        }
        if !(sweep.fd_step.is_finite() && sweep.fd_step > 0.0) {
            return Err(CliError::Config(format!(
                "sweep.fd_step must be positive, got {}",
                sweep.fd_step
            )));
        }

        let mut suites = file.suites.unwrap_or_else(|| Suite::ALL.to_vec());
        if suites.is_empty() {
            return Err(CliError::Config("suites must name at least one suite".into()));
        }
        suites.sort();
        suites.dedup();

        Ok(RunConfig {
            seed: file.seed.unwrap_or(DEFAULT_SEED),
            suites,
            report: file.report,
            solution,
            sweep,
            config_hash,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        let c = RunConfig::from_bytes(b"").unwrap();
        assert_eq!(c.seed, DEFAULT_SEED);
        assert_eq!(c.suites, Suite::ALL.to_vec());
        assert_eq!(c.solution, PhLOConfig::default());
        assert_eq!(c.config_hash.len(), 64);
    }

    #[test]
    fn negative_length_is_rejected() {
        let e = RunConfig::from_bytes(b"[solution]\nl0 = -1.0\n").unwrap_err();
        assert!(matches!(e, CliError::Config(_)));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(RunConfig::from_bytes(b"sed = 3\n").is_err());
        assert!(RunConfig::from_bytes(b"[solution.amplitude]\nradius = 2.0\n").is_err());
    }

    #[test]
    fn bad_sign_and_kind_are_rejected() {
        assert!(RunConfig::from_bytes(b"[solution]\nkappa = 0\n").is_err());
        assert!(RunConfig::from_bytes(b"[solution.amplitude]\nkind = \"uniform\"\n").is_err());
    }

    #[test]
    fn hex_seed_and_suite_selection() {
        let c = RunConfig::from_bytes(b"seed = 0x10\nsuites = [\"strain\", \"exterior\", \"strain\"]\n").unwrap();
        assert_eq!(c.seed, 16);
        assert_eq!(c.suites, vec![Suite::Exterior, Suite::Strain]);
    }

    #[test]
    fn s0_defaults_to_half_turn_of_the_configured_length() {
        let c = RunConfig::from_bytes(b"[solution]\nl0 = 2.5\n").unwrap();
        assert!((c.solution.amplitude.s0 - PI * 2.5).abs() < 1e-15);
    }
}
