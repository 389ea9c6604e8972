//! Run configuration shared by the CLI subcommands.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bargaining::Concept;
use crate::eurozone::EurozoneParams;
use crate::expr::{ExprError, GameDefinition};
use crate::game::{CoopetitiveGame, GridSpec};

pub const EUROZONE: &str = "eurozone";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("invalid config field `{field}`: {msg}")]
    Field { field: &'static str, msg: String },
    #[error(transparent)]
    Definition(#[from] ExprError),
}

fn field_err<T>(field: &'static str, msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError::Field {
        field,
        msg: msg.into(),
    })
}

/// Cooperative-strategy sampling: a count of equally spaced values over `C`,
/// or explicit values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZGrid {
    Count(usize),
    Values(Vec<f64>),
}

impl Default for ZGrid {
    fn default() -> Self {
        ZGrid::Count(11)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    /// `"eurozone"` or the path of a game-definition file.
    pub model: String,
    pub m: f64,
    pub n: f64,
    pub grid: usize,
    pub zgrid: ZGrid,
    pub concepts: Vec<Concept>,
    pub out: Option<PathBuf>,
    pub plot_out: Option<PathBuf>,
    pub strict: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            model: EUROZONE.into(),
            m: 0.0,
            n: 1.0,
            grid: GridSpec::DEFAULT_RESOLUTION,
            zgrid: ZGrid::default(),
            concepts: Concept::ALL.to_vec(),
            out: None,
            plot_out: None,
            strict: false,
        }
    }
}

/// The game a configuration refers to.
#[derive(Debug, Clone)]
pub enum LoadedModel {
    Eurozone(EurozoneParams),
    File(GameDefinition),
}

impl LoadedModel {
    pub fn game(&self) -> CoopetitiveGame {
        match self {
            LoadedModel::Eurozone(p) => crate::eurozone::build_model(*p),
            LoadedModel::File(def) => def.to_game(),
        }
    }
}

impl RunConfig {
    pub fn is_eurozone(&self) -> bool {
        self.model == EUROZONE
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.grid < 2 {
            return field_err("grid", format!("resolution must be >= 2, got {}", self.grid));
        }
        match &self.zgrid {
            ZGrid::Count(k) if *k < 2 => {
                return field_err("zgrid", format!("size must be >= 2, got {k}"));
            }
            ZGrid::Values(v) if v.is_empty() => return field_err("zgrid", "no values given"),
            ZGrid::Values(v) if v.iter().any(|z| !z.is_finite()) => {
                return field_err("zgrid", "values must be finite");
            }
            _ => {}
        }
        if self.concepts.is_empty() {
            return field_err("concepts", "at least one concept is required");
        }
        if self.is_eurozone() {
            if !(self.m.is_finite() && self.m >= 0.0) {
                return field_err("m", format!("must be >= 0, got {}", self.m));
            }
            if !(self.n.is_finite() && self.n > 0.0) {
                return field_err("n", format!("must be > 0, got {}", self.n));
            }
        }
        Ok(())
    }

    pub fn grid_spec(&self) -> Result<GridSpec, ConfigError> {
        GridSpec::new(self.grid).or_else(|e| field_err("grid", e.to_string()))
    }

    pub fn load_model(&self) -> Result<LoadedModel, ConfigError> {
        if self.is_eurozone() {
            let params = EurozoneParams::new(self.m, self.n)
                .or_else(|e| field_err(if self.m < 0.0 { "m" } else { "n" }, e.to_string()))?;
            Ok(LoadedModel::Eurozone(params))
        } else {
            Ok(LoadedModel::File(GameDefinition::load(self.model.as_ref())?))
        }
    }

    /// Concrete cooperative strategies for `game`.
    pub fn zvalues(&self, game: &CoopetitiveGame) -> Result<Vec<f64>, ConfigError> {
        let c = game.cube().c;
        let values = match &self.zgrid {
            ZGrid::Count(k) => c.sample(*k),
            ZGrid::Values(v) => v.clone(),
        };
        if let Some(z) = values.iter().find(|z| !c.contains(**z)) {
            return field_err("zgrid", format!("value {z} outside the cooperative interval [{}, {}]", c.lo, c.hi));
        }
        if values.len() >= 2 && !(values.contains(&c.lo) && values.contains(&c.hi)) {
            return field_err(
                "zgrid",
                format!("explicit values must include both endpoints {} and {}", c.lo, c.hi),
            );
        }
        Ok(values)
    }
}
