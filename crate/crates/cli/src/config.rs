//! Run configuration: every option exists both as a flag and as a key in the
//! optional TOML file. Flags win over the file; built-in defaults apply last.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use spinon_core::formfactor::QuadratureSpec;
use spinon_core::table::Format;

use crate::CliError;

pub const OUTPUT_DIR_ENV: &str = "SPINON_OUTPUT_DIR";

macro_rules! overlay {
    ($t:ident { $($f:ident),* $(,)? }) => {
        impl $t {
            /// Field-wise `self` (flags) over `file`.
            pub fn or(self, file: Self) -> Self {
                Self { $($f: self.$f.or(file.$f)),* }
            }
        }
    };
}

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureOpts {
    /// Relative tolerance of every quadrature.
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,
    /// Absolute tolerance of every quadrature.
    #[arg(long, global = true)]
    pub abs_tol: Option<f64>,
    /// Split point of the amplitude integrals.
    #[arg(long, global = true)]
    pub split_point: Option<f64>,
    /// Subdivision budget per integral.
    #[arg(long, global = true)]
    pub max_subdivisions: Option<usize>,
}
overlay!(QuadratureOpts { rel_tol, abs_tol, split_point, max_subdivisions });

impl QuadratureOpts {
    pub fn spec(&self) -> Result<QuadratureSpec, CliError> {
        let d = QuadratureSpec::default();
        let spec = QuadratureSpec {
            rel_tol: self.rel_tol.unwrap_or(d.rel_tol),
            abs_tol: self.abs_tol.unwrap_or(d.abs_tol),
            split_point: self.split_point.unwrap_or(d.split_point),
            max_subdivisions: self.max_subdivisions.unwrap_or(d.max_subdivisions),
        };
        spec.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Xxx,
    Xxz,
}

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DispersionOpts {
    /// xxx tabulates against β, xxz against α.
    #[arg(long, value_enum)]
    pub model: Option<Model>,
    /// Deformation parameter in (-1, 0), xxz only.
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub max: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}
overlay!(DispersionOpts { model, q, min, max, points, output });

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridOpts {
    #[arg(long)]
    pub k_min: Option<f64>,
    #[arg(long)]
    pub k_max: Option<f64>,
    #[arg(long)]
    pub n_k: Option<usize>,
    #[arg(long)]
    pub w_min: Option<f64>,
    #[arg(long)]
    pub w_max: Option<f64>,
    #[arg(long)]
    pub n_w: Option<usize>,
    /// Worker threads; changes speed only.
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}
overlay!(GridOpts { k_min, k_max, n_k, w_min, w_max, n_w, workers, output });

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SumruleOpts {
    /// Momenta, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub k: Option<Vec<f64>>,
    /// Also integrate over the zone (slow).
    #[arg(long)]
    pub total: Option<bool>,
    /// Relative tolerance of the zone integral.
    #[arg(long)]
    pub total_rel_tol: Option<f64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}
overlay!(SumruleOpts { k, total, total_rel_tol, output });

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EdOpts {
    #[arg(long)]
    pub sites: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<f64>,
    /// Lorentzian half-width of the broadened curve.
    #[arg(long)]
    pub eta: Option<f64>,
    /// Compare in-band weight with the analytic fixed-k weight.
    #[arg(long)]
    pub analytic: Option<bool>,
}
overlay!(EdOpts { sites, delta, eta, analytic });

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LimitOpts {
    /// ε values, strictly decreasing, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub eps: Option<Vec<f64>>,
    /// Rapidities, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 1.., allow_hyphen_values = true)]
    pub beta: Option<Vec<f64>>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}
overlay!(LimitOpts { eps, beta, output });

/// Everything a config file may set.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub format: Option<Format>,
    pub output_dir: Option<PathBuf>,
    pub quadrature: QuadratureOpts,
    pub dispersion: DispersionOpts,
    pub dcf_grid: GridOpts,
    pub sumrule: SumruleOpts,
    pub ed: EdOpts,
    pub limit_check: LimitOpts,
}

impl RunConfig {
    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
    }

    #[cfg(test)]
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config always serializes")
    }
}
