//! Bargaining problems on Pareto boundaries and the solution concepts of a
//! coopetitive game built from them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{
    conservative_bivalue, nash_path, nash_zone, payoff_core_supremum, section, CoopetitiveGame,
    GridSpec, NashPathEntry,
};
use crate::geometry::{
    extrema, pareto_front_tol, polyline_intersection, segment_intersection_tol, OrderInterval,
    ParetoFront, PayoffPoint, Segment, DEFAULT_TOL,
};
use crate::payoff_space::{coopetitive_payoff_region, payoff_region, validate_zgrid, PayoffRegion};

/// A candidate set with a disagreement (threat) point and a utopia point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BargainingProblem {
    pub candidates: ParetoFront,
    pub disagreement: PayoffPoint,
    pub utopia: PayoffPoint,
}

impl BargainingProblem {
    /// Requires `disagreement <= utopia` component-wise. Equal points give a
    /// degenerate problem whose only possible solution is the point itself.
    pub fn new(candidates: ParetoFront, disagreement: PayoffPoint, utopia: PayoffPoint) -> Result<Self> {
        for p in [disagreement, utopia] {
            PayoffPoint::try_new(p.p1, p.p2)?;
        }
        if !utopia.weakly_dominates(disagreement, 0.0) {
            return Err(Error::InvalidProblem(format!(
                "utopia ({}, {}) is not above disagreement ({}, {})",
                utopia.p1, utopia.p2, disagreement.p1, disagreement.p2
            )));
        }
        Ok(Self {
            candidates,
            disagreement,
            utopia,
        })
    }

    pub fn is_degenerate(&self, tol: f64) -> bool {
        self.disagreement.approx_eq(self.utopia, tol)
    }

    /// Whether both reference points lie in the smallest order interval
    /// containing the candidate set.
    pub fn within_bounds(&self, tol: f64) -> bool {
        let box_ = self.candidates.extrema();
        box_.contains(self.disagreement, tol) && box_.contains(self.utopia, tol)
    }

    pub fn record(&self) -> ProblemRecord {
        ProblemRecord {
            candidate_set: self.candidates.points().to_vec(),
            disagreement: self.disagreement,
            utopia: self.utopia,
        }
    }
}

/// Kalai-Smorodinsky (best compromise) solution: the point where the
/// segment from disagreement to utopia meets the candidate polyline.
pub fn kalai_smorodinsky(p: &BargainingProblem) -> Result<PayoffPoint> {
    kalai_smorodinsky_tol(p, DEFAULT_TOL)
}

pub fn kalai_smorodinsky_tol(p: &BargainingProblem, tol: f64) -> Result<PayoffPoint> {
    if p.is_degenerate(tol) {
        return if p.candidates.distance_to(p.disagreement) <= tol {
            Ok(p.disagreement)
        } else {
            Err(Error::KsDoesNotExist)
        };
    }
    let ray = Segment::new(p.disagreement, p.utopia);
    polyline_intersection(&p.candidates, &ray, tol)?.ok_or(Error::KsDoesNotExist)
}

/// Point of the front polyline maximizing `(p1 - a1)(p2 - a2)` among points
/// that weakly dominate `a`. Ties go to the larger `p1`.
pub fn nash_bargaining(front: &ParetoFront, disagreement: PayoffPoint) -> Result<PayoffPoint> {
    let a = disagreement;
    let mut best: Option<(f64, PayoffPoint)> = None;

    for edge in front.segments() {
        let d = edge.direction();
        let c = edge.a - a;
        // t-range where both gains are non-negative
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        for (ci, di) in [(c.p1, d.p1), (c.p2, d.p2)] {
            if di > 0.0 {
                lo = lo.max(-ci / di);
            } else if di < 0.0 {
                hi = hi.min(-ci / di);
            } else if ci < 0.0 {
                hi = -1.0;
            }
        }
        if lo > hi {
            continue;
        }
        let mut ts = vec![lo, hi];
        let quad = d.p1 * d.p2;
        if quad != 0.0 {
            let t = -(c.p1 * d.p2 + c.p2 * d.p1) / (2.0 * quad);
            if t > lo && t < hi {
                ts.push(t);
            }
        }
        for t in ts {
            let p = edge.at(t);
            let gain = (p.p1 - a.p1) * (p.p2 - a.p2);
            if !(p.p1 > a.p1 && p.p2 > a.p2) {
                continue;
            }
            best = match best {
                None => Some((gain, p)),
                Some((g, q)) => {
                    let scale = g.abs().max(gain.abs()).max(1.0);
                    if gain > g + 1e-12 * scale || ((gain - g).abs() <= 1e-12 * scale && p.p1 > q.p1) {
                        Some((gain, p))
                    } else {
                        Some((g, q))
                    }
                }
            };
        }
    }
    best.map(|(_, p)| p).ok_or(Error::DegenerateNashBargaining)
}

/// Solution concepts computed by the solver, by registry name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Concept {
    ProperlyCoopetitive,
    ParetoCompromise,
    NashParetoCompromise,
    ConservativeParetoCompromise,
    NashBargaining,
    TuStandard,
    TuNonstandard,
    RebalancingWinWin,
}

impl Concept {
    pub const ALL: [Concept; 8] = [
        Concept::ProperlyCoopetitive,
        Concept::ParetoCompromise,
        Concept::NashParetoCompromise,
        Concept::ConservativeParetoCompromise,
        Concept::NashBargaining,
        Concept::TuStandard,
        Concept::TuNonstandard,
        Concept::RebalancingWinWin,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Concept::ProperlyCoopetitive => "properly-coopetitive",
            Concept::ParetoCompromise => "pareto-compromise",
            Concept::NashParetoCompromise => "nash-pareto-compromise",
            Concept::ConservativeParetoCompromise => "conservative-pareto-compromise",
            Concept::NashBargaining => "nash-bargaining",
            Concept::TuStandard => "tu-standard",
            Concept::TuNonstandard => "tu-nonstandard",
            Concept::RebalancingWinWin => "rebalancing-win-win",
        }
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Concept {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Concept::ALL
            .iter()
            .find(|c| c.name() == s)
            .copied()
            .ok_or_else(|| {
                let names: Vec<_> = Concept::ALL.iter().map(|c| c.name()).collect();
                format!("unknown concept `{s}` (expected one of: {})", names.join(", "))
            })
    }
}

/// The bargaining problem a solution point was derived from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemRecord {
    pub candidate_set: Vec<PayoffPoint>,
    pub disagreement: PayoffPoint,
    pub utopia: PayoffPoint,
}

/// A solution point together with its defining problem.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub point: PayoffPoint,
    pub problem: ProblemRecord,
}

/// One concept in a solution report. Non-existence is recorded, not raised.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionEntry {
    pub concept: Concept,
    pub exists: bool,
    pub point: Option<PayoffPoint>,
    pub problem: Option<ProblemRecord>,
    /// Strict dominance over the initial payoff-core supremum, when known.
    pub win_win: Option<bool>,
    pub note: Option<String>,
}

impl SolutionEntry {
    pub fn found(concept: Concept, solution: Solution) -> Self {
        Self {
            concept,
            exists: true,
            point: Some(solution.point),
            problem: Some(solution.problem),
            win_win: None,
            note: None,
        }
    }

    pub fn missing(concept: Concept, problem: Option<ProblemRecord>, reason: impl Into<String>) -> Self {
        Self {
            concept,
            exists: false,
            point: None,
            problem,
            win_win: None,
            note: Some(reason.into()),
        }
    }

    pub fn with_win_win(mut self, threat: PayoffPoint) -> Self {
        self.win_win = self.point.map(|p| win_win_check(p, threat));
        self
    }
}

fn solve_ks(candidates: ParetoFront, a: PayoffPoint, b: PayoffPoint) -> (Option<ProblemRecord>, Result<Solution>) {
    let problem = match BargainingProblem::new(candidates.clone(), a, b) {
        Ok(p) => p,
        Err(e) => {
            let record = ProblemRecord {
                candidate_set: candidates.points().to_vec(),
                disagreement: a,
                utopia: b,
            };
            return (Some(record), Err(e));
        }
    };
    let record = problem.record();
    let result = kalai_smorodinsky(&problem).map(|point| Solution {
        point,
        problem: record.clone(),
    });
    (Some(record), result)
}

fn entry_from(concept: Concept, solved: (Option<ProblemRecord>, Result<Solution>)) -> SolutionEntry {
    match solved {
        (_, Ok(s)) => SolutionEntry::found(concept, s),
        (record, Err(e)) => {
            let degenerate = record
                .as_ref()
                .is_some_and(|r| r.disagreement.approx_eq(r.utopia, DEFAULT_TOL));
            let reason = if degenerate {
                format!("disagreement point equals utopia point (a < b fails): {e}")
            } else {
                e.to_string()
            };
            SolutionEntry::missing(concept, record, reason)
        }
    }
}

/// KS solution on the Pareto boundary of the Nash zone, with the boundary's
/// own extrema as disagreement and utopia points.
pub fn properly_coopetitive_from_path(path: &[NashPathEntry]) -> Result<Solution> {
    let zone = nash_zone(path);
    let front = pareto_front_tol(&zone, DEFAULT_TOL)?;
    let OrderInterval { lo, hi } = front.extrema();
    solve_ks(front, lo, hi).1
}

pub fn properly_coopetitive_solution(
    game: &CoopetitiveGame,
    zgrid: &[f64],
    grid: GridSpec,
) -> Result<Solution> {
    validate_zgrid(game, zgrid)?;
    properly_coopetitive_from_path(&nash_path(game, zgrid, grid)?)
}

/// Pareto, Nash-Pareto and conservative-Pareto compromises on the maximal
/// boundary `M` of the payoff space.
pub fn compromises_from(
    region: &PayoffRegion,
    path: &[NashPathEntry],
    conservative: &[PayoffPoint],
) -> Vec<SolutionEntry> {
    let m = region.front.clone();
    let OrderInterval { lo: a_m, hi: b_m } = m.extrema();
    let mut out = vec![entry_from(Concept::ParetoCompromise, solve_ks(m.clone(), a_m, b_m))];

    let zone = nash_zone(path);
    out.push(match extrema(&zone) {
        Ok(nz) => entry_from(Concept::NashParetoCompromise, solve_ks(m.clone(), nz.hi, b_m)),
        Err(_) => SolutionEntry::missing(Concept::NashParetoCompromise, None, "empty Nash zone"),
    });

    out.push(match extrema(conservative) {
        Ok(cv) => entry_from(Concept::ConservativeParetoCompromise, solve_ks(m, cv.hi, b_m)),
        Err(_) => SolutionEntry::missing(Concept::ConservativeParetoCompromise, None, "no conservative bi-values"),
    });
    out
}

pub fn compromise_solutions(
    game: &CoopetitiveGame,
    zgrid: &[f64],
    grid: GridSpec,
) -> Result<Vec<SolutionEntry>> {
    let region = coopetitive_payoff_region(game, zgrid, grid)?;
    let path = nash_path(game, zgrid, grid)?;
    let conservative = zgrid
        .iter()
        .map(|&z| section(game, z).map(|g| conservative_bivalue(&g, grid)))
        .collect::<Result<Vec<_>>>()?;
    Ok(compromises_from(&region, &path, &conservative))
}

/// The transferable-utility line `p1 + p2 = vmax`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuBoundary {
    pub vmax: f64,
    /// Region vertices attaining `vmax`.
    pub argmax: Vec<PayoffPoint>,
    /// Extrema box of the payoff space; the clipped boundary lies inside it.
    pub clip: OrderInterval,
}

impl TuBoundary {
    /// The part of the line inside the clip box, if any.
    pub fn clipped(&self) -> Option<Segment> {
        let OrderInterval { lo, hi } = self.clip;
        let p1_lo = lo.p1.max(self.vmax - hi.p2);
        let p1_hi = hi.p1.min(self.vmax - lo.p2);
        (p1_lo <= p1_hi + DEFAULT_TOL).then(|| self.between_p1(p1_lo, p1_hi.max(p1_lo)))
    }

    fn between_p1(&self, p1_lo: f64, p1_hi: f64) -> Segment {
        Segment::new(
            PayoffPoint::new(p1_hi, self.vmax - p1_hi),
            PayoffPoint::new(p1_lo, self.vmax - p1_lo),
        )
    }

    /// `{p on the line : p >= a}`, from the low-`p2` end to the high one.
    pub fn portion_above(&self, a: PayoffPoint) -> Result<Segment> {
        let p1_hi = self.vmax - a.p2;
        if a.p1 > p1_hi + DEFAULT_TOL {
            return Err(Error::EmptyPortion);
        }
        Ok(self.between_p1(a.p1, p1_hi.max(a.p1)))
    }

    /// Points of the line whose coordinate for `player` lies in `[lo, hi]`,
    /// ordered from `lo` to `hi`.
    pub fn portion_band(&self, player: usize, lo: f64, hi: f64) -> Result<Segment> {
        if lo > hi {
            return Err(Error::EmptyPortion);
        }
        Ok(if player == 1 {
            Segment::new(
                PayoffPoint::new(lo, self.vmax - lo),
                PayoffPoint::new(hi, self.vmax - hi),
            )
        } else {
            Segment::new(
                PayoffPoint::new(self.vmax - lo, lo),
                PayoffPoint::new(self.vmax - hi, hi),
            )
        })
    }
}

/// Maximum collective payoff over a convex polygonal region (attained at a
/// vertex).
pub fn tu_boundary(region: &PayoffRegion) -> TuBoundary {
    let vertices = region.hull.vertices();
    let vmax = vertices.iter().map(|p| p.sum()).fold(f64::NEG_INFINITY, f64::max);
    let argmax = vertices
        .iter()
        .filter(|p| p.sum() >= vmax - DEFAULT_TOL)
        .copied()
        .collect();
    TuBoundary {
        vmax,
        argmax,
        clip: region.hull.extrema(),
    }
}

#[derive(Debug, Clone, Copy)]
pub enum UtopiaMode<'a> {
    /// Supremum of the line portion above the threat point.
    Standard,
    /// Supremum of the line portion spanned by the values of the player who
    /// gains more from cooperation, measured against the initial region.
    NonStandard { initial: &'a PayoffRegion },
}

/// The player with the larger increase of maximum payoff from the initial
/// region to the whole payoff space, with that player's band
/// `[initial max, overall max]`.
pub fn bigger_gainer(region: &PayoffRegion, initial: &PayoffRegion) -> Result<(usize, f64, f64)> {
    let gain = |i| region.max_component(i) - initial.max_component(i);
    let (g1, g2) = (gain(1), gain(2));
    if (g1 - g2).abs() <= DEFAULT_TOL {
        return Err(Error::UtopiaTie);
    }
    let i = if g1 > g2 { 1 } else { 2 };
    Ok((i, initial.max_component(i), region.max_component(i)))
}

/// The TU candidate set used with the given utopia mode.
pub fn tu_portion(
    region: &PayoffRegion,
    tu: &TuBoundary,
    threat: PayoffPoint,
    mode: UtopiaMode<'_>,
) -> Result<Segment> {
    match mode {
        UtopiaMode::Standard => tu.portion_above(threat),
        UtopiaMode::NonStandard { initial } => {
            let (i, lo, hi) = bigger_gainer(region, initial)?;
            tu.portion_band(i, lo, hi)
        }
    }
}

pub fn utopia_point(
    region: &PayoffRegion,
    tu: &TuBoundary,
    threat: PayoffPoint,
    mode: UtopiaMode<'_>,
) -> Result<PayoffPoint> {
    tu_portion(region, tu, threat, mode).map(|s| s.sup())
}

fn segment_front(s: &Segment) -> Result<ParetoFront> {
    if s.is_degenerate(DEFAULT_TOL) {
        ParetoFront::from_polyline(vec![s.a])
    } else {
        ParetoFront::from_polyline(vec![s.a, s.b])
    }
}

/// KS solution of the TU problem `(portion, (threat, sup portion))`.
pub fn tu_solution(
    region: &PayoffRegion,
    tu: &TuBoundary,
    threat: PayoffPoint,
    mode: UtopiaMode<'_>,
) -> Result<Solution> {
    let portion = tu_portion(region, tu, threat, mode)?;
    solve_ks(segment_front(&portion)?, threat, portion.sup()).1
}

/// Intermediate objects of the rebalancing compromise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RebalancingTrace {
    /// Payoff-core supremum `L` of the initial section.
    pub threat: PayoffPoint,
    pub tu_level: f64,
    /// Player whose maximum payoff grows more under cooperation.
    pub gainer: usize,
    /// That player's band `[max in the initial game, max in the whole game]`.
    pub band: (f64, f64),
    /// TU line cut by the band.
    pub s: Segment,
    /// From the threat point to `sup s`.
    pub s_prime: Segment,
    pub k: PayoffPoint,
    pub win_win: bool,
}

/// Rebalancing compromise from precomputed regions and initial threat `L`:
/// `K` is the crossing of the banded TU segment `s` with the segment from
/// `L` to `sup s`.
pub fn rebalancing_from(
    region: &PayoffRegion,
    initial: &PayoffRegion,
    threat: PayoffPoint,
) -> Result<RebalancingTrace> {
    let tu = tu_boundary(region);
    if tu.vmax <= threat.sum() + DEFAULT_TOL {
        return Err(Error::NoCoopetitiveGain);
    }
    let (gainer, lo, hi) = bigger_gainer(region, initial)?;
    let s = tu.portion_band(gainer, lo, hi)?;
    let s_prime = Segment::new(threat, s.sup());
    let k = segment_intersection_tol(&s, &s_prime, DEFAULT_TOL)?.ok_or(Error::KsDoesNotExist)?;
    Ok(RebalancingTrace {
        threat,
        tu_level: tu.vmax,
        gainer,
        band: (lo, hi),
        s,
        s_prime,
        k,
        win_win: win_win_check(k, threat),
    })
}

/// Rebalancing win-win compromise with the initial game at `z = min C`.
pub fn rebalancing_win_win(
    game: &CoopetitiveGame,
    zgrid: &[f64],
    grid: GridSpec,
) -> Result<RebalancingTrace> {
    let initial_section = section(game, game.cube().c.lo)?;
    let threat = payoff_core_supremum(&initial_section, grid)?;
    let initial = payoff_region(&initial_section, grid)?;
    let region = coopetitive_payoff_region(game, zgrid, grid)?;
    rebalancing_from(&region, &initial, threat)
}

/// Strict component-wise dominance of the payoff-core supremum `l`.
pub fn win_win_check(candidate: PayoffPoint, l: PayoffPoint) -> bool {
    candidate.strictly_greater(l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{Interval, StrategyCube};
    use crate::geometry::convex_hull;
    use crate::payoff_space::RegionSource;

    fn pt(a: f64, b: f64) -> PayoffPoint {
        PayoffPoint::new(a, b)
    }

    fn front(points: &[PayoffPoint]) -> ParetoFront {
        ParetoFront::from_polyline(points.to_vec()).unwrap()
    }

    fn greek(m: f64, n: f64) -> CoopetitiveGame {
        CoopetitiveGame::new(StrategyCube::unit(), move |x, y, z| {
            pt(x + 1.0 / (x + 1.0) - z, (1.0 + m) * y + (1.0 + n) * z)
        })
    }

    fn region_of(points: &[PayoffPoint]) -> PayoffRegion {
        let hull = convex_hull(points).unwrap();
        PayoffRegion {
            front: hull.pareto_front(DEFAULT_TOL),
            hull,
            source: RegionSource {
                kind: "test".into(),
                z: vec![],
                grid: GridSpec::default(),
                critical_points: 0,
            },
        }
    }

    fn grid(r: usize) -> GridSpec {
        GridSpec::new(r).unwrap()
    }

    #[test]
    fn ks_single_point_on_diagonal() {
        let p = BargainingProblem::new(front(&[pt(1.0, 1.0)]), pt(0.0, 0.0), pt(2.0, 2.0)).unwrap();
        assert_eq!(kalai_smorodinsky(&p).unwrap(), pt(1.0, 1.0));
        assert!(!p.within_bounds(DEFAULT_TOL));
    }

    #[test]
    fn ks_on_pareto_segment_is_midpoint() {
        let f = front(&[pt(1.5, 1.0), pt(0.5, 3.0)]);
        let p = BargainingProblem::new(f, pt(0.5, 1.0), pt(1.5, 3.0)).unwrap();
        let k = kalai_smorodinsky(&p).unwrap();
        assert!(k.approx_eq(pt(1.0, 2.0), 1e-12));
        assert!(p.within_bounds(0.0));
    }

    #[test]
    fn ks_on_tu_segment() {
        let s = front(&[pt(2.5, 1.0), pt(0.5, 3.0)]);
        let p = BargainingProblem::new(s, pt(1.5, 1.0), pt(2.5, 3.0)).unwrap();
        let k = kalai_smorodinsky(&p).unwrap();
        assert!(k.approx_eq(pt(11.0 / 6.0, 5.0 / 3.0), 1e-12));
    }

    #[test]
    fn ks_missing_and_invalid() {
        let f = front(&[pt(1.5, 1.0), pt(0.5, 3.0)]);
        let p = BargainingProblem::new(f.clone(), pt(0.0, 0.0), pt(0.2, 0.2)).unwrap();
        assert_eq!(kalai_smorodinsky(&p).unwrap_err().to_string(), "KS solution does not exist");
        let p = BargainingProblem::new(f.clone(), pt(1.5, 3.0), pt(1.5, 3.0)).unwrap();
        assert_eq!(kalai_smorodinsky(&p), Err(Error::KsDoesNotExist));
        assert!(BargainingProblem::new(f, pt(1.0, 1.0), pt(0.0, 2.0)).is_err());
    }

    #[test]
    fn nash_bargaining_examples() {
        let f = front(&[pt(1.5, 1.0), pt(0.5, 3.0)]);
        assert!(nash_bargaining(&f, pt(0.5, 1.0)).unwrap().approx_eq(pt(1.0, 2.0), 1e-12));
        assert_eq!(nash_bargaining(&front(&[pt(2.0, 2.0)]), pt(0.0, 0.0)).unwrap(), pt(2.0, 2.0));
        let sym = front(&[pt(0.0, 2.0), pt(2.0, 0.0)]);
        assert!(nash_bargaining(&sym, pt(0.0, 0.0)).unwrap().approx_eq(pt(1.0, 1.0), 1e-12));
    }

    #[test]
    fn nash_bargaining_degenerate() {
        let f = front(&[pt(1.5, 1.0), pt(0.5, 3.0)]);
        assert_eq!(nash_bargaining(&f, pt(2.0, 2.0)), Err(Error::DegenerateNashBargaining));
        // only touching the disagreement point is not enough
        assert_eq!(nash_bargaining(&f, pt(1.5, 1.0)), Err(Error::DegenerateNashBargaining));
    }

    #[test]
    fn nash_bargaining_tie_prefers_larger_p1() {
        // two vertices with equal product 1 * 4 = 4 * 1
        let f = front(&[pt(1.0, 4.0), pt(4.0, 1.0)]);
        let p = nash_bargaining(&f, pt(0.0, 0.0)).unwrap();
        assert!(p.approx_eq(pt(2.5, 2.5), 1e-12));
        let kinked = front(&[pt(1.0, 4.0), pt(1.1, 1.1), pt(4.0, 1.0)]);
        assert!(nash_bargaining(&kinked, pt(0.0, 0.0)).unwrap().approx_eq(pt(4.0, 1.0), 1e-12));
    }

    #[test]
    fn properly_coopetitive_greek_midpoint() {
        for (m, n) in [(0.0, 1.0), (0.3, 2.0)] {
            let s = properly_coopetitive_solution(&greek(m, n), &Interval::unit().sample(11), grid(11)).unwrap();
            let mid = pt(1.5, 1.0 + m).lerp(pt(0.5, 2.0 + m + n), 0.5);
            assert!(s.point.approx_eq(mid, 1e-9), "{:?} vs {:?}", s.point, mid);
        }
    }

    #[test]
    fn properly_coopetitive_constant_game() {
        let g = CoopetitiveGame::new(StrategyCube::unit(), |_, _, _| pt(1.0, 2.0));
        let s = properly_coopetitive_solution(&g, &[0.0, 1.0], grid(3)).unwrap();
        assert_eq!(s.point, pt(1.0, 2.0));
    }

    #[test]
    fn greek_compromises() {
        let entries = compromise_solutions(&greek(0.0, 1.0), &[0.0, 0.5, 1.0], grid(11)).unwrap();
        assert_eq!(entries[0].concept, Concept::ParetoCompromise);
        assert!(entries[0].point.unwrap().approx_eq(pt(1.0, 2.0), 1e-12));
        let prob = entries[0].problem.as_ref().unwrap();
        assert_eq!((prob.disagreement, prob.utopia), (pt(0.5, 1.0), pt(1.5, 3.0)));
        for e in &entries[1..] {
            assert!(!e.exists, "{:?}", e.concept);
            let prob = e.problem.as_ref().unwrap();
            assert_eq!(prob.disagreement, pt(1.5, 3.0));
            assert_eq!(prob.utopia, pt(1.5, 3.0));
            assert!(e.note.as_ref().unwrap().contains("a < b fails"));
        }
    }

    #[test]
    fn tu_boundary_examples() {
        let hex = region_of(&[pt(1.0, 0.0), pt(1.5, 0.0), pt(1.5, 1.0), pt(0.5, 3.0), pt(0.0, 3.0), pt(0.0, 2.0)]);
        let tu = tu_boundary(&hex);
        assert_eq!(tu.vmax, 3.5);
        assert_eq!(tu.argmax, vec![pt(0.5, 3.0)]);
        assert_eq!(tu.clip.lo, pt(0.0, 0.0));
        assert_eq!(tu.clip.hi, pt(1.5, 3.0));
        // clipped to the extrema box: p1 in [0.5, 1.5]
        let c = tu.clipped().unwrap();
        assert_eq!((c.a, c.b), (pt(1.5, 2.0), pt(0.5, 3.0)));

        let square = region_of(&[pt(0.0, 0.0), pt(1.0, 0.0), pt(1.0, 1.0), pt(0.0, 1.0)]);
        let tu = tu_boundary(&square);
        assert_eq!((tu.vmax, tu.argmax.clone()), (2.0, vec![pt(1.0, 1.0)]));
    }

    #[test]
    fn utopia_standard_and_nonstandard() {
        let hex = region_of(&[pt(1.0, 0.0), pt(1.5, 0.0), pt(1.5, 1.0), pt(0.5, 3.0), pt(0.0, 3.0), pt(0.0, 2.0)]);
        let initial = region_of(&[pt(1.0, 0.0), pt(1.5, 0.0), pt(1.5, 1.0), pt(1.0, 1.0)]);
        let tu = tu_boundary(&hex);
        let l = pt(1.5, 1.0);
        assert_eq!(utopia_point(&hex, &tu, l, UtopiaMode::Standard).unwrap(), pt(2.5, 2.0));
        let ns = utopia_point(&hex, &tu, l, UtopiaMode::NonStandard { initial: &initial }).unwrap();
        assert_eq!(ns, pt(2.5, 3.0));
        assert_eq!(
            utopia_point(&hex, &tu, pt(3.0, 3.0), UtopiaMode::Standard),
            Err(Error::EmptyPortion)
        );
        let std = tu_solution(&hex, &tu, l, UtopiaMode::Standard).unwrap();
        assert!(std.point.approx_eq(pt(2.0, 1.5), 1e-12));
    }

    #[test]
    fn nonstandard_tie_is_reported() {
        let big = region_of(&[pt(0.0, 0.0), pt(2.0, 0.0), pt(2.0, 2.0), pt(0.0, 2.0)]);
        let small = region_of(&[pt(0.0, 0.0), pt(1.0, 0.0), pt(1.0, 1.0), pt(0.0, 1.0)]);
        let tu = tu_boundary(&big);
        assert_eq!(
            utopia_point(&big, &tu, pt(1.0, 1.0), UtopiaMode::NonStandard { initial: &small }),
            Err(Error::UtopiaTie)
        );
    }

    #[test]
    fn rebalancing_greek_n1() {
        let trace = rebalancing_win_win(&greek(0.0, 1.0), &[0.0, 1.0], grid(11)).unwrap();
        assert_eq!(trace.threat, pt(1.5, 1.0));
        assert_eq!(trace.tu_level, 3.5);
        assert_eq!(trace.gainer, 2);
        assert_eq!((trace.s.a, trace.s.b), (pt(2.5, 1.0), pt(0.5, 3.0)));
        assert_eq!(trace.s_prime.b, pt(2.5, 3.0));
        assert!(trace.k.approx_eq(pt(11.0 / 6.0, 5.0 / 3.0), 1e-12));
        assert!(trace.win_win);
    }

    #[test]
    fn rebalancing_without_gain_fails() {
        for n in [0.0, -0.5] {
            let err = rebalancing_win_win(&greek(0.0, n), &[0.0, 1.0], grid(11)).unwrap_err();
            assert_eq!(err.to_string(), "no coopetitive gain");
        }
    }

    #[test]
    fn win_win_examples() {
        assert!(win_win_check(pt(11.0 / 6.0, 5.0 / 3.0), pt(1.5, 1.0)));
        assert!(!win_win_check(pt(1.5, 1.0), pt(1.5, 1.0)));
        assert!(!win_win_check(pt(2.0, 0.5), pt(1.5, 1.0)));
    }

    #[test]
    fn concept_names_round_trip() {
        for c in Concept::ALL {
            assert_eq!(c.name().parse::<Concept>().unwrap(), c);
            assert_eq!(serde_json::to_string(&c).unwrap(), format!("\"{}\"", c.name()));
        }
        assert!("kalai".parse::<Concept>().is_err());
    }
}
