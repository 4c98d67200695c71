//! Parameter sweeps, separability thresholds and the claim checks.

mod sweep;
mod table;
mod threshold;
mod verify;

use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

pub use sweep::{discord_comparison, figure_table, run_sweep, FigureId, FigureOptions, SweepSpec};
pub use table::{format_sig12, SweepMetadata, SweepTable};
pub use threshold::{critical_p, critical_r, extremal_beta, negativity_gap, CriticalR, ExtremalBeta, Threshold};
pub use verify::{verify_claims, ClaimResult};

pub const DEFAULT_GRID_POINTS: usize = 65;
/// Grid used by the cross-validation claims.
pub const CHECK_GRID_POINTS: usize = 21;

/// State family a sweep walks over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    /// Alice–Rob, `ρ_{A,I}(p, r)`.
    AI,
    /// Alice–antiRob, `ρ_{A,II}(p, r)`.
    AII,
    /// Rob–antiRob, `ρ_{I,II}(r)`.
    III,
    /// `ρ_{I,B}` and its `σx`-equivalent partner over `(β, r)`.
    IBPair,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::AI => "AI",
            Family::AII => "AII",
            Family::III => "III",
            Family::IBPair => "IB_pair",
        }
    }

    /// Name of the second grid coordinate.
    pub fn parameter_name(self) -> &'static str {
        match self {
            Family::IBPair => "beta",
            _ => "p",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_uppercase().replace(['-', '_'], "").as_str() {
            "AI" => Ok(Family::AI),
            "AII" => Ok(Family::AII),
            "III" => Ok(Family::III),
            "IB" | "IBPAIR" => Ok(Family::IBPair),
            _ => Err(Error::Unknown {
                kind: "family",
                name: s.to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Measure {
    Negativity,
    Eof,
    Discord,
    MutualInfo,
    ClassicalCorr,
}

impl Measure {
    pub fn column(self) -> &'static str {
        match self {
            Measure::Negativity => "negativity",
            Measure::Eof => "eof",
            Measure::Discord => "discord",
            Measure::MutualInfo => "mutual_info",
            Measure::ClassicalCorr => "classical_corr",
        }
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "negativity" | "n" => Ok(Measure::Negativity),
            "eof" => Ok(Measure::Eof),
            "discord" | "d" => Ok(Measure::Discord),
            "mutual_info" | "mi" => Ok(Measure::MutualInfo),
            "classical_corr" | "cc" => Ok(Measure::ClassicalCorr),
            _ => Err(Error::Unknown {
                kind: "measure",
                name: s.to_string(),
            }),
        }
    }
}

/// `n` evenly spaced points from `lo` to `hi` inclusive; the endpoints are exact.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|k| {
                if k == n - 1 {
                    hi
                } else {
                    lo + (hi - lo) * (k as f64 / (n - 1) as f64)
                }
            })
            .collect(),
    }
}

pub fn r_grid(n: usize) -> Vec<f64> {
    linspace(0.0, FRAC_PI_4, n)
}

pub fn unit_grid(n: usize) -> Vec<f64> {
    linspace(0.0, 1.0, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linspace_endpoints_exact() {
        let g = r_grid(65);
        assert_eq!(g.len(), 65);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[64], FRAC_PI_4);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(unit_grid(1), vec![0.0]);
        assert!(unit_grid(0).is_empty());
    }

    #[test]
    fn parse_names() {
        assert_eq!("ai".parse::<Family>().unwrap(), Family::AI);
        assert_eq!("IB_pair".parse::<Family>().unwrap(), Family::IBPair);
        assert!("AB".parse::<Family>().is_err());
        assert_eq!("mutual-info".parse::<Measure>().unwrap(), Measure::MutualInfo);
        assert!("entropy".parse::<Measure>().is_err());
    }
}
