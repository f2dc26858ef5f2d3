//! Run configuration: presets, config-file loading and flag merging.

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct GridConfig {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            x_min: -10.0,
            x_max: 10.0,
            n_points: 1001,
        }
    }
}

/// Everything a partner/scan run needs. All fields optional so that presets,
/// config files and command-line flags can be layered; `resolve` checks
/// completeness.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct RunConfig {
    pub model: Option<String>,
    pub kappa: Option<f64>,
    pub m: Option<f64>,
    pub epsilon: Option<f64>,
    pub d: Option<f64>,
    pub x0: Option<f64>,
    pub branch: Option<String>,
    pub grid: Option<GridConfig>,
}

impl RunConfig {
    pub fn preset(name: &str) -> Result<Self> {
        Ok(match name {
            "fig1" => Self {
                model: Some("free".into()),
                epsilon: Some(-1.0),
                x0: Some(3.0),
                ..Default::default()
            },
            "fig3" => Self {
                model: Some("lame".into()),
                m: Some(0.5),
                epsilon: Some(0.1),
                d: Some(-45.0),
                ..Default::default()
            },
            "fig4" => Self {
                model: Some("lame".into()),
                m: Some(0.1),
                epsilon: Some(1.05),
                d: Some(20.0),
                ..Default::default()
            },
            other => bail!("unknown preset '{other}' (expected fig1, fig3 or fig4)"),
        })
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    /// Layer `over` on top of self: any field set in `over` wins.
    pub fn merged(self, over: Self) -> Self {
        Self {
            model: over.model.or(self.model),
            kappa: over.kappa.or(self.kappa),
            m: over.m.or(self.m),
            epsilon: over.epsilon.or(self.epsilon),
            d: over.d.or(self.d),
            x0: over.x0.or(self.x0),
            branch: over.branch.or(self.branch),
            grid: over.grid.or(self.grid),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub enum BranchChoice {
    Auto,
    Beta,
    Inverse,
}

/// A fully specified run.
#[derive(Clone, Debug)]
pub enum ResolvedModel {
    Free {
        kappa: f64,
        d: f64,
        x0: f64,
    },
    Lame {
        m: f64,
        epsilon: f64,
        d: f64,
        x0: f64,
        branch: BranchChoice,
    },
}

pub struct ResolvedRun {
    pub model: ResolvedModel,
    pub grid: GridConfig,
}

pub fn resolve(cfg: &RunConfig) -> Result<ResolvedRun> {
    let grid = cfg.grid.unwrap_or_default();
    if grid.n_points < 5 || !(grid.x_min < grid.x_max) {
        bail!(
            "invalid grid [{}, {}] with {} points",
            grid.x_min,
            grid.x_max,
            grid.n_points
        );
    }
    let model = match cfg.model.as_deref() {
        Some("free") => {
            let kappa = match (cfg.kappa, cfg.epsilon) {
                (Some(k), _) => k,
                (None, Some(e)) if e < 0.0 => (-e).sqrt(),
                (None, Some(e)) => bail!("free model needs epsilon < 0, got {e}"),
                (None, None) => bail!("free model needs --kappa or --epsilon"),
            };
            if !(kappa > 0.0) {
                bail!("kappa must be positive, got {kappa}");
            }
            let x0 = cfg.x0.unwrap_or(0.0);
            let d = cfg
                .d
                .unwrap_or_else(|| darboux::models::poschl_teller_d(kappa, x0));
            ResolvedModel::Free { kappa, d, x0 }
        }
        Some("lame") => {
            let m = cfg.m.context("lame model needs --m")?;
            let epsilon = cfg.epsilon.context("lame model needs --epsilon")?;
            let d = cfg.d.context("lame model needs --d")?;
            let branch = match cfg.branch.as_deref() {
                None | Some("auto") => BranchChoice::Auto,
                Some("beta") => BranchChoice::Beta,
                Some("inverse") => BranchChoice::Inverse,
                Some(other) => bail!("unknown branch '{other}' (expected auto, beta or inverse)"),
            };
            ResolvedModel::Lame {
                m,
                epsilon,
                d,
                x0: cfg.x0.unwrap_or(0.0),
                branch,
            }
        }
        Some(other) => bail!("unknown model '{other}' (expected free or lame)"),
        None => bail!("no model selected; pass --model or --preset"),
    };
    Ok(ResolvedRun { model, grid })
}
