//! Coopetitive games, their normal-form sections, and grid solvers for the
//! sections: pure Nash equilibria, conservative bi-values, payoff core.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{extrema, pareto_front_tol, PayoffPoint, DEFAULT_TOL};

/// Closed real interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_finite() && hi.is_finite() && lo <= hi {
            Ok(Self { lo, hi })
        } else {
            Err(Error::InvalidInterval { lo, hi })
        }
    }

    pub const fn unit() -> Self {
        Self { lo: 0.0, hi: 1.0 }
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// `n` equally spaced points; both endpoints are hit exactly.
    pub fn sample(&self, n: usize) -> Vec<f64> {
        match n {
            0 => vec![],
            1 => vec![self.lo],
            _ => (0..n)
                .map(|i| {
                    if i == n - 1 {
                        self.hi
                    } else {
                        self.lo + self.width() * (i as f64 / (n - 1) as f64)
                    }
                })
                .collect(),
        }
    }
}

/// Strategy sets `E`, `F` of the two players and the shared set `C`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrategyCube {
    pub e: Interval,
    pub f: Interval,
    pub c: Interval,
}

impl StrategyCube {
    pub const fn unit() -> Self {
        Self {
            e: Interval::unit(),
            f: Interval::unit(),
            c: Interval::unit(),
        }
    }
}

impl Default for StrategyCube {
    fn default() -> Self {
        Self::unit()
    }
}

/// Number of sample points per strategy axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct GridSpec {
    resolution: usize,
}

impl GridSpec {
    pub const DEFAULT_RESOLUTION: usize = 101;

    pub fn new(resolution: usize) -> Result<Self> {
        if resolution < 2 {
            return Err(Error::InvalidGrid(resolution));
        }
        Ok(Self { resolution })
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            resolution: Self::DEFAULT_RESOLUTION,
        }
    }
}

impl TryFrom<usize> for GridSpec {
    type Error = Error;
    fn try_from(r: usize) -> Result<Self> {
        Self::new(r)
    }
}

impl From<GridSpec> for usize {
    fn from(g: GridSpec) -> usize {
        g.resolution
    }
}

pub type GamePayoff = Arc<dyn Fn(f64, f64, f64) -> PayoffPoint + Send + Sync>;
pub type SectionPayoff = Arc<dyn Fn(f64, f64) -> PayoffPoint + Send + Sync>;

/// Two-player coopetitive gain game: a payoff map on `E x F x C`.
#[derive(Clone)]
pub struct CoopetitiveGame {
    cube: StrategyCube,
    payoff: GamePayoff,
}

impl fmt::Debug for CoopetitiveGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoopetitiveGame")
            .field("cube", &self.cube)
            .finish_non_exhaustive()
    }
}

impl CoopetitiveGame {
    pub fn new<F>(cube: StrategyCube, payoff: F) -> Self
    where
        F: Fn(f64, f64, f64) -> PayoffPoint + Send + Sync + 'static,
    {
        Self {
            cube,
            payoff: Arc::new(payoff),
        }
    }

    pub fn cube(&self) -> &StrategyCube {
        &self.cube
    }

    pub fn payoff(&self, x: f64, y: f64, z: f64) -> PayoffPoint {
        (self.payoff)(x, y, z)
    }
}

/// The normal-form game obtained by fixing the cooperative strategy `z`.
#[derive(Clone)]
pub struct NormalFormSection {
    e: Interval,
    f: Interval,
    z: f64,
    payoff: SectionPayoff,
}

impl fmt::Debug for NormalFormSection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NormalFormSection")
            .field("e", &self.e)
            .field("f", &self.f)
            .field("z", &self.z)
            .finish_non_exhaustive()
    }
}

impl NormalFormSection {
    pub fn new<F>(e: Interval, f: Interval, z: f64, payoff: F) -> Self
    where
        F: Fn(f64, f64) -> PayoffPoint + Send + Sync + 'static,
    {
        Self {
            e,
            f,
            z,
            payoff: Arc::new(payoff),
        }
    }

    pub fn e(&self) -> Interval {
        self.e
    }

    pub fn f(&self) -> Interval {
        self.f
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn payoff(&self, x: f64, y: f64) -> PayoffPoint {
        (self.payoff)(x, y)
    }

    /// Payoffs on the `resolution x resolution` bistrategy grid.
    pub fn sample(&self, grid: GridSpec) -> SampledSection {
        let xs = self.e.sample(grid.resolution());
        let ys = self.f.sample(grid.resolution());
        let payoffs = xs
            .iter()
            .flat_map(|&x| ys.iter().map(move |&y| (x, y)))
            .map(|(x, y)| self.payoff(x, y))
            .collect();
        SampledSection { xs, ys, payoffs }
    }
}

/// Payoff table of a section on a grid; `payoffs[i * ys.len() + j]` is the
/// payoff at `(xs[i], ys[j])`.
#[derive(Debug, Clone)]
pub struct SampledSection {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub payoffs: Vec<PayoffPoint>,
}

impl SampledSection {
    pub fn at(&self, i: usize, j: usize) -> PayoffPoint {
        self.payoffs[i * self.ys.len() + j]
    }
}

pub fn section(game: &CoopetitiveGame, z: f64) -> Result<NormalFormSection> {
    let c = game.cube.c;
    if !c.contains(z) {
        return Err(Error::CooperativeStrategyOutOfRange { z, lo: c.lo, hi: c.hi });
    }
    let payoff = game.payoff.clone();
    Ok(NormalFormSection {
        e: game.cube.e,
        f: game.cube.f,
        z,
        payoff: Arc::new(move |x, y| payoff(x, y, z)),
    })
}

/// Rebuilds a coopetitive game from a family of sections.
///
/// At a section's own `z` the result is that section exactly; between two
/// sections it interpolates linearly in `z`, outside the range it holds the
/// nearest section. The cooperative interval is `[min z, max z]`.
pub fn reassemble(sections: &[NormalFormSection]) -> Result<CoopetitiveGame> {
    let first = sections
        .first()
        .ok_or_else(|| Error::InconsistentSections("no sections".into()))?;
    let (e, f) = (first.e, first.f);
    if let Some(bad) = sections.iter().find(|s| s.e != e || s.f != f) {
        return Err(Error::InconsistentSections(format!(
            "section at z = {} has a different strategy rectangle",
            bad.z
        )));
    }
    let mut family: Vec<NormalFormSection> = sections.to_vec();
    family.sort_by(|a, b| a.z.total_cmp(&b.z));
    if let Some(w) = family.windows(2).find(|w| w[0].z == w[1].z) {
        return Err(Error::InconsistentSections(format!(
            "duplicate cooperative strategy z = {}",
            w[0].z
        )));
    }
    if let Some(s) = family.iter().find(|s| !s.z.is_finite()) {
        return Err(Error::InconsistentSections(format!("non-finite z = {}", s.z)));
    }
    let c = Interval::new(family[0].z, family[family.len() - 1].z)?;
    let cube = StrategyCube { e, f, c };

    let payoff = move |x: f64, y: f64, z: f64| {
        let idx = family.partition_point(|s| s.z < z);
        if idx < family.len() && family[idx].z == z {
            return family[idx].payoff(x, y);
        }
        if idx == 0 {
            return family[0].payoff(x, y);
        }
        if idx == family.len() {
            return family[idx - 1].payoff(x, y);
        }
        let (lo, hi) = (&family[idx - 1], &family[idx]);
        let t = (z - lo.z) / (hi.z - lo.z);
        lo.payoff(x, y).lerp(hi.payoff(x, y), t)
    };
    Ok(CoopetitiveGame::new(cube, payoff))
}

pub fn nash_equilibria(g: &NormalFormSection, grid: GridSpec) -> Vec<(f64, f64)> {
    nash_equilibria_tol(g, grid, DEFAULT_TOL)
}

/// Pure Nash equilibria on the grid: bistrategies where each player's grid
/// strategy is a best response (within `tol`) to the other's. Results come
/// in row-major grid order.
#[allow(clippy::needless_range_loop)]
pub fn nash_equilibria_tol(g: &NormalFormSection, grid: GridSpec, tol: f64) -> Vec<(f64, f64)> {
    let table = g.sample(grid);
    let (nx, ny) = (table.xs.len(), table.ys.len());

    // best payoff of player 1 against each y, of player 2 against each x
    let best1: Vec<f64> = (0..ny)
        .map(|j| (0..nx).map(|i| table.at(i, j).p1).fold(f64::NEG_INFINITY, f64::max))
        .collect();
    let best2: Vec<f64> = (0..nx)
        .map(|i| (0..ny).map(|j| table.at(i, j).p2).fold(f64::NEG_INFINITY, f64::max))
        .collect();

    let mut out = Vec::new();
    for i in 0..nx {
        for j in 0..ny {
            let p = table.at(i, j);
            if p.p1 >= best1[j] - tol && p.p2 >= best2[i] - tol {
                out.push((table.xs[i], table.ys[j]));
            }
        }
    }
    out
}

/// Maximin value of each player over the grid.
pub fn conservative_bivalue(g: &NormalFormSection, grid: GridSpec) -> PayoffPoint {
    let table = g.sample(grid);
    let (nx, ny) = (table.xs.len(), table.ys.len());
    let v1 = (0..nx)
        .map(|i| (0..ny).map(|j| table.at(i, j).p1).fold(f64::INFINITY, f64::min))
        .fold(f64::NEG_INFINITY, f64::max);
    let v2 = (0..ny)
        .map(|j| (0..nx).map(|i| table.at(i, j).p2).fold(f64::INFINITY, f64::min))
        .fold(f64::NEG_INFINITY, f64::max);
    PayoffPoint::new(v1, v2)
}

/// Supremum `L` of the payoff core: the part of the sampled Pareto front
/// that dominates the conservative bi-value.
pub fn payoff_core_supremum(g: &NormalFormSection, grid: GridSpec) -> Result<PayoffPoint> {
    let table = g.sample(grid);
    let front = pareto_front_tol(&table.payoffs, DEFAULT_TOL)?;
    let guard = conservative_bivalue(g, grid);
    let core: Vec<PayoffPoint> = front
        .points()
        .iter()
        .filter(|p| p.weakly_dominates(guard, DEFAULT_TOL))
        .copied()
        .collect();
    if core.is_empty() {
        return Err(Error::EmptyPayoffCore);
    }
    Ok(extrema(&core)?.hi)
}

/// Nash equilibria and their payoffs for one cooperative strategy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NashPathEntry {
    pub z: f64,
    pub equilibria: Vec<(f64, f64)>,
    pub payoffs: Vec<PayoffPoint>,
}

pub fn nash_path(
    game: &CoopetitiveGame,
    zgrid: &[f64],
    grid: GridSpec,
) -> Result<Vec<NashPathEntry>> {
    zgrid
        .iter()
        .map(|&z| {
            let g = section(game, z)?;
            let equilibria = nash_equilibria(&g, grid);
            let payoffs = equilibria.iter().map(|&(x, y)| g.payoff(x, y)).collect();
            Ok(NashPathEntry { z, equilibria, payoffs })
        })
        .collect()
}

/// Union of the Nash path: every equilibrium payoff over all `z`.
pub fn nash_zone(path: &[NashPathEntry]) -> Vec<PayoffPoint> {
    path.iter().flat_map(|e| e.payoffs.iter().copied()).collect()
}
