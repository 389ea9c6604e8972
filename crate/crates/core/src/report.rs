//! Solution reports: everything `solve` computes, in one serializable value.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bargaining::{
    compromises_from, nash_bargaining, properly_coopetitive_from_path, rebalancing_from, tu_boundary,
    tu_solution, Concept, ProblemRecord, RebalancingTrace, SolutionEntry, TuBoundary, UtopiaMode,
};
use crate::config::{ConfigError, LoadedModel, RunConfig};
use crate::error::Error;
use crate::eurozone::{
    printed_jacobian, reference_solution, win_win_procedure, EurozoneParams, ReferenceSolution,
    WinWinPlan,
};
use crate::game::{
    conservative_bivalue, nash_path, payoff_core_supremum, section, GridSpec, NashPathEntry,
    StrategyCube,
};
use crate::geometry::{PayoffPoint, Segment};
use crate::payoff_space::{
    coopetitive_payoff_region, critical_zone, payoff_region, RegionSource, CRITICAL_TOL,
};

#[derive(Debug, Error)]
pub enum SolveError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("solver failed: {0}")]
    Solver(#[from] Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArtifactInfo {
    pub name: String,
    pub version: String,
}

impl ArtifactInfo {
    pub fn current() -> Self {
        Self {
            name: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelInfo {
    pub kind: String,
    pub name: Option<String>,
    pub params: Option<EurozoneParams>,
    pub cube: StrategyCube,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionReport {
    pub vertices: Vec<PayoffPoint>,
    pub front: Vec<PayoffPoint>,
    /// False when the region is only known to be contained in the hull.
    pub hull_exact: bool,
    pub source: RegionSource,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalReport {
    pub finite_difference_points: usize,
    /// All finite-difference critical points lie on the `x = min E` edge.
    pub finite_difference_left_edge_only: bool,
    /// Critical points under the analytic Jacobian printed with the model.
    pub printed_jacobian_points: Option<usize>,
}

/// The initial game `G(z0)`, `z0 = min C`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitialReport {
    pub z: f64,
    pub region: RegionReport,
    pub conservative_bivalue: PayoffPoint,
    pub payoff_core_supremum: Option<PayoffPoint>,
    pub critical_zone: CriticalReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZValue {
    pub z: f64,
    pub value: PayoffPoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuReport {
    #[serde(flatten)]
    pub boundary: TuBoundary,
    /// The line restricted to the payoff-space extrema box.
    pub clipped: Option<Segment>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub artifact: ArtifactInfo,
    pub config: RunConfig,
    pub grid: GridSpec,
    pub zgrid: Vec<f64>,
    pub model: ModelInfo,
    pub notes: Vec<String>,
    pub region: RegionReport,
    pub initial: InitialReport,
    pub nash_path: Vec<NashPathEntry>,
    pub conservative_bivalues: Vec<ZValue>,
    pub tu_boundary: TuReport,
    pub solutions: Vec<SolutionEntry>,
    pub rebalancing: Option<RebalancingTrace>,
    pub reference_solution: Option<ReferenceSolution>,
    pub win_win_plan: Option<WinWinPlan>,
}

impl SolveReport {
    pub fn solution(&self, concept: Concept) -> Option<&SolutionEntry> {
        self.solutions.iter().find(|s| s.concept == concept)
    }

    /// Requested concepts without a solution.
    pub fn missing(&self) -> Vec<Concept> {
        self.solutions.iter().filter(|s| !s.exists).map(|s| s.concept).collect()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

fn requested(config: &RunConfig) -> Vec<Concept> {
    let mut out: Vec<Concept> = Vec::new();
    for c in &config.concepts {
        if !out.contains(c) {
            out.push(*c);
        }
    }
    out
}

pub fn solve(config: &RunConfig) -> Result<SolveReport, SolveError> {
    config.validate()?;
    let grid = config.grid_spec()?;
    let model = config.load_model()?;
    let game = model.game();
    let zgrid = config.zvalues(&game)?;
    let cube = *game.cube();

    let mut notes = vec![
        "all grid Nash equilibria are treated as reasonable; no refinement is applied".to_string(),
    ];
    let (model_info, hull_exact) = match &model {
        LoadedModel::Eurozone(p) => {
            if p.m != 0.0 {
                notes.push(
                    "m > 0: rebalancing band generalized to [1+m, 2+m+n] for Greece (extension of the m = 0 construction); no closed-form reference".into(),
                );
            }
            (
                ModelInfo {
                    kind: "eurozone".into(),
                    name: None,
                    params: Some(*p),
                    cube,
                },
                true,
            )
        }
        LoadedModel::File(def) => {
            notes.push("hull over-approximation: payoff regions are convex hulls of sampled images".into());
            (
                ModelInfo {
                    kind: "file".into(),
                    name: def.name.clone(),
                    params: None,
                    cube,
                },
                false,
            )
        }
    };

    // initial game
    let z0 = cube.c.lo;
    let initial_section = section(&game, z0)?;
    let initial_region = payoff_region(&initial_section, grid)?;
    let threat = payoff_core_supremum(&initial_section, grid).ok();
    let fd_zone = critical_zone(&initial_section, None, grid, CRITICAL_TOL);
    let printed_points = match &model {
        LoadedModel::Eurozone(p) => {
            let jac = printed_jacobian(*p);
            Some(critical_zone(&initial_section, Some(&jac), grid, CRITICAL_TOL).points.len())
        }
        LoadedModel::File(_) => None,
    };
    let initial = InitialReport {
        z: z0,
        region: RegionReport {
            vertices: initial_region.hull.vertices().to_vec(),
            front: initial_region.front.points().to_vec(),
            hull_exact,
            source: initial_region.source.clone(),
        },
        conservative_bivalue: conservative_bivalue(&initial_section, grid),
        payoff_core_supremum: threat,
        critical_zone: CriticalReport {
            finite_difference_points: fd_zone.points.len(),
            finite_difference_left_edge_only: fd_zone.points.iter().all(|&(x, _)| x == cube.e.lo),
            printed_jacobian_points: printed_points,
        },
    };

    let region = coopetitive_payoff_region(&game, &zgrid, grid)?;
    let path = nash_path(&game, &zgrid, grid)?;
    let conservative: Vec<ZValue> = zgrid
        .iter()
        .map(|&z| {
            section(&game, z).map(|g| ZValue {
                z,
                value: conservative_bivalue(&g, grid),
            })
        })
        .collect::<Result<_, _>>()?;
    let tu = tu_boundary(&region);
    let rebalancing = threat.and_then(|l| rebalancing_from(&region, &initial_region, l).ok());

    let concepts = requested(config);
    let cons_values: Vec<PayoffPoint> = conservative.iter().map(|c| c.value).collect();
    let compromises = compromises_from(&region, &path, &cons_values);
    let m_record = |utopia| ProblemRecord {
        candidate_set: region.front.points().to_vec(),
        disagreement: region.front.extrema().lo,
        utopia,
    };

    let mut solutions = Vec::new();
    for concept in concepts {
        let entry = match concept {
            Concept::ProperlyCoopetitive => match properly_coopetitive_from_path(&path) {
                Ok(s) => SolutionEntry::found(concept, s),
                Err(e) => SolutionEntry::missing(concept, None, e.to_string()),
            },
            Concept::ParetoCompromise
            | Concept::NashParetoCompromise
            | Concept::ConservativeParetoCompromise => compromises
                .iter()
                .find(|e| e.concept == concept)
                .cloned()
                .expect("all compromise concepts computed"),
            Concept::NashBargaining => {
                let inf = region.front.extrema().lo;
                let record = m_record(region.front.extrema().hi);
                match nash_bargaining(&region.front, inf) {
                    Ok(point) => SolutionEntry::found(
                        concept,
                        crate::bargaining::Solution { point, problem: record },
                    ),
                    Err(e) => SolutionEntry::missing(concept, Some(record), e.to_string()),
                }
            }
            Concept::TuStandard | Concept::TuNonstandard => match threat {
                None => SolutionEntry::missing(concept, None, Error::EmptyPayoffCore.to_string()),
                Some(l) => {
                    let mode = if concept == Concept::TuStandard {
                        UtopiaMode::Standard
                    } else {
                        UtopiaMode::NonStandard {
                            initial: &initial_region,
                        }
                    };
                    match tu_solution(&region, &tu, l, mode) {
                        Ok(s) => SolutionEntry::found(concept, s),
                        Err(e) => SolutionEntry::missing(concept, None, e.to_string()),
                    }
                }
            },
            Concept::RebalancingWinWin => match (&rebalancing, threat) {
                (Some(t), _) => SolutionEntry::found(
                    concept,
                    crate::bargaining::Solution {
                        point: t.k,
                        problem: ProblemRecord {
                            candidate_set: vec![t.s.a, t.s.b],
                            disagreement: t.threat,
                            utopia: t.s.sup(),
                        },
                    },
                ),
                (None, Some(l)) => {
                    let reason = rebalancing_from(&region, &initial_region, l)
                        .err()
                        .map(|e| e.to_string())
                        .unwrap_or_default();
                    SolutionEntry::missing(concept, None, reason)
                }
                (None, None) => SolutionEntry::missing(concept, None, Error::EmptyPayoffCore.to_string()),
            },
        };
        solutions.push(match threat {
            Some(l) => entry.with_win_win(l),
            None => entry,
        });
    }

    let (reference, plan) = match &model {
        LoadedModel::Eurozone(p) if p.m == 0.0 => (Some(reference_solution(*p)?), Some(win_win_procedure(*p)?)),
        _ => (None, None),
    };

    let clipped = tu.clipped();
    Ok(SolveReport {
        artifact: ArtifactInfo::current(),
        config: config.clone(),
        grid,
        zgrid,
        model: model_info,
        notes,
        region: RegionReport {
            vertices: region.hull.vertices().to_vec(),
            front: region.front.points().to_vec(),
            hull_exact,
            source: region.source.clone(),
        },
        initial,
        nash_path: path,
        conservative_bivalues: conservative,
        tu_boundary: TuReport { boundary: tu, clipped },
        solutions,
        rebalancing,
        reference_solution: reference,
        win_win_plan: plan,
    })
}

/// One row of a parameter sweep over `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub n: f64,
    pub k1: f64,
    pub k2: f64,
    pub pie: f64,
    pub transfer: f64,
}

/// Sweeps the eurozone model over `ns`. At `m = 0` rows come from the
/// closed-form plan (cross-checked); otherwise from the generic solver.
pub fn scan(config: &RunConfig, ns: &[f64]) -> Result<Vec<ScanRow>, SolveError> {
    if !config.is_eurozone() {
        return Err(ConfigError::Field {
            field: "model",
            msg: "scan is defined for the eurozone model only".into(),
        }
        .into());
    }
    if ns.len() < 2 {
        return Err(ConfigError::Field {
            field: "n",
            msg: "need ≥2 samples".into(),
        }
        .into());
    }
    if let Some(n) = ns.iter().find(|n| !(n.is_finite() && **n > 0.0)) {
        return Err(ConfigError::Field {
            field: "n",
            msg: format!("scan values must lie in (0, inf), got {n}"),
        }
        .into());
    }
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let cfg = RunConfig { n, ..config.clone() };
        cfg.validate()?;
        let params = EurozoneParams::new(cfg.m, n).map_err(SolveError::Solver)?;
        if params.m == 0.0 {
            let plan = win_win_procedure(params)?;
            rows.push(ScanRow {
                n,
                k1: plan.split.p1,
                k2: plan.split.p2,
                pie: plan.social_pie,
                transfer: plan.transfer,
            });
        } else {
            let game = crate::eurozone::build_model(params);
            let zgrid = cfg.zvalues(&game)?;
            let trace = crate::bargaining::rebalancing_win_win(&game, &zgrid, cfg.grid_spec()?)?;
            let raw = game.payoff(1.0, 1.0, 1.0);
            rows.push(ScanRow {
                n,
                k1: trace.k.p1,
                k2: trace.k.p2,
                pie: trace.tu_level,
                transfer: trace.k.p1 - raw.p1,
            });
        }
    }
    Ok(rows)
}

pub fn scan_csv(rows: &[ScanRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("in-memory csv write");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv flush")).expect("csv is utf-8")
}
