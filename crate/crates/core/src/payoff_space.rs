//! Payoff regions of sections and of the whole coopetitive game.
//!
//! A section's payoff space is the image of the boundary of its strategy
//! rectangle together with the image of its critical zone (where the
//! Jacobian is singular). Regions are stored as convex hulls; for
//! non-convex images this over-approximates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{section, CoopetitiveGame, GridSpec, NormalFormSection};
use crate::geometry::{convex_hull_tol, ParetoFront, PayoffPoint, Polygon, DEFAULT_TOL};

/// Step of the central finite-difference Jacobian.
pub const FD_STEP: f64 = 1e-5;
/// `|det J|` below this marks a critical bistrategy.
pub const CRITICAL_TOL: f64 = 1e-6;

pub type Jacobian<'a> = &'a dyn Fn(f64, f64) -> [[f64; 2]; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `y = f.lo`, x increasing: the side `[0, e1]` on the unit square.
    Bottom,
    /// `x = e.hi`, y increasing.
    Right,
    /// `y = f.hi`, x decreasing.
    Top,
    /// `x = e.lo`, y decreasing.
    Left,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::Bottom, Side::Right, Side::Top, Side::Left];
}

/// Payoff images of one side of the strategy rectangle, `resolution` samples.
pub fn transform_side(g: &NormalFormSection, side: Side, grid: GridSpec) -> Vec<PayoffPoint> {
    let n = grid.resolution();
    let (e, f) = (g.e(), g.f());
    let xs = e.sample(n);
    let ys = f.sample(n);
    match side {
        Side::Bottom => xs.iter().map(|&x| g.payoff(x, f.lo)).collect(),
        Side::Right => ys.iter().map(|&y| g.payoff(e.hi, y)).collect(),
        Side::Top => xs.iter().rev().map(|&x| g.payoff(x, f.hi)).collect(),
        Side::Left => ys.iter().rev().map(|&y| g.payoff(e.lo, y)).collect(),
    }
}

/// Payoff images of the whole topological boundary, sides in
/// counter-clockwise order.
pub fn transform_boundary(g: &NormalFormSection, grid: GridSpec) -> Vec<PayoffPoint> {
    Side::ALL
        .iter()
        .flat_map(|&side| transform_side(g, side, grid))
        .collect()
}

/// Central-difference Jacobian of the section payoff at `(x, y)`.
/// Rows are payoff components, columns are `(d/dx, d/dy)`.
pub fn finite_difference_jacobian(g: &NormalFormSection, x: f64, y: f64, h: f64) -> [[f64; 2]; 2] {
    let dx = (g.payoff(x + h, y) - g.payoff(x - h, y)) * (0.5 / h);
    let dy = (g.payoff(x, y + h) - g.payoff(x, y - h)) * (0.5 / h);
    [[dx.p1, dy.p1], [dx.p2, dy.p2]]
}

fn det(j: &[[f64; 2]; 2]) -> f64 {
    j[0][0] * j[1][1] - j[0][1] * j[1][0]
}

/// Grid bistrategies where the Jacobian determinant vanishes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalZone {
    pub points: Vec<(f64, f64)>,
    pub tol: f64,
}

impl CriticalZone {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Critical zone on the grid. Without an analytic `jacobian` the central
/// finite-difference Jacobian with step [`FD_STEP`] is used.
pub fn critical_zone(
    g: &NormalFormSection,
    jacobian: Option<Jacobian<'_>>,
    grid: GridSpec,
    tol: f64,
) -> CriticalZone {
    let xs = g.e().sample(grid.resolution());
    let ys = g.f().sample(grid.resolution());
    let mut points = Vec::new();
    for &x in &xs {
        for &y in &ys {
            let j = match jacobian {
                Some(jac) => jac(x, y),
                None => finite_difference_jacobian(g, x, y, FD_STEP),
            };
            if det(&j).abs() < tol {
                points.push((x, y));
            }
        }
    }
    CriticalZone { points, tol }
}

/// What a region was computed from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionSource {
    /// `"section"` or `"coopetitive"`.
    pub kind: String,
    /// Cooperative strategies whose sections contributed.
    pub z: Vec<f64>,
    pub grid: GridSpec,
    pub critical_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PayoffRegion {
    pub hull: Polygon,
    pub front: ParetoFront,
    pub source: RegionSource,
}

impl PayoffRegion {
    fn from_points(points: &[PayoffPoint], source: RegionSource) -> Result<Self> {
        let hull = convex_hull_tol(points, DEFAULT_TOL)?;
        let front = hull.pareto_front(DEFAULT_TOL);
        Ok(Self { hull, front, source })
    }

    /// Largest value of player `i` (1 or 2) over the region.
    pub fn max_component(&self, player: usize) -> f64 {
        let hi = self.hull.extrema().hi;
        if player == 1 {
            hi.p1
        } else {
            hi.p2
        }
    }
}

/// Payoff region of a section using the finite-difference critical zone.
pub fn payoff_region(g: &NormalFormSection, grid: GridSpec) -> Result<PayoffRegion> {
    payoff_region_with(g, grid, None, CRITICAL_TOL)
}

pub fn payoff_region_with(
    g: &NormalFormSection,
    grid: GridSpec,
    jacobian: Option<Jacobian<'_>>,
    tol: f64,
) -> Result<PayoffRegion> {
    let mut points = transform_boundary(g, grid);
    let zone = critical_zone(g, jacobian, grid, tol);
    points.extend(zone.points.iter().map(|&(x, y)| g.payoff(x, y)));
    PayoffRegion::from_points(
        &points,
        RegionSource {
            kind: "section".into(),
            z: vec![g.z()],
            grid,
            critical_points: zone.points.len(),
        },
    )
}

/// Checks a cooperative grid: non-empty, inside `C`, and, with two or more
/// values, containing both endpoints of `C`.
pub fn validate_zgrid(game: &CoopetitiveGame, zgrid: &[f64]) -> Result<()> {
    let c = game.cube().c;
    if zgrid.is_empty() {
        return Err(Error::InvalidZGrid("empty".into()));
    }
    if let Some(&z) = zgrid.iter().find(|z| !c.contains(**z)) {
        return Err(Error::CooperativeStrategyOutOfRange { z, lo: c.lo, hi: c.hi });
    }
    if zgrid.len() >= 2 && !(zgrid.contains(&c.lo) && zgrid.contains(&c.hi)) {
        return Err(Error::InvalidZGrid(format!(
            "must contain both endpoints {} and {} of the cooperative interval",
            c.lo, c.hi
        )));
    }
    Ok(())
}

/// Hull of the union of section regions over `zgrid`.
pub fn coopetitive_payoff_region(
    game: &CoopetitiveGame,
    zgrid: &[f64],
    grid: GridSpec,
) -> Result<PayoffRegion> {
    validate_zgrid(game, zgrid)?;
    let mut points = Vec::new();
    let mut critical_points = 0;
    for &z in zgrid {
        let region = payoff_region(&section(game, z)?, grid)?;
        critical_points += region.source.critical_points;
        points.extend_from_slice(region.hull.vertices());
    }
    PayoffRegion::from_points(
        &points,
        RegionSource {
            kind: "coopetitive".into(),
            z: zgrid.to_vec(),
            grid,
            critical_points,
        },
    )
}
