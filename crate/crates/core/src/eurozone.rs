//! The Germany-Greece coopetitive model.
//!
//! Germany (player 1) chooses domestic consumption `x`, Greece (player 2)
//! chooses investment `y`, and both agree on a cooperative level `z`
//! (German imports from Greece). All three live in `[0, 1]`. Payoffs are
//! gross domestic demand, `c + I + X - M`:
//!
//! ```text
//! f(x, y, z) = (x + 1/(x+1) - z, (1+m) y + (1+n) z)
//!            = (x + 1/(x+1), (1+m) y) + z (-1, 1+n)
//! ```
//!
//! so every section is the `z = 0` section translated by `v(z) = z (-1, 1+n)`.

use num_traits::Num;
use serde::{Deserialize, Serialize};

use crate::bargaining::rebalancing_win_win;
use crate::error::{Error, Result};
use crate::game::{nash_equilibria, section, CoopetitiveGame, GridSpec, Interval, StrategyCube};
use crate::geometry::{PayoffPoint, Segment};

/// `m`: effect of Greek investment on Greek exports; `n`: investment
/// cross-effect of the cooperative strategy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EurozoneParams {
    pub m: f64,
    pub n: f64,
}

impl EurozoneParams {
    pub fn new(m: f64, n: f64) -> Result<Self> {
        let p = Self { m, n };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.m.is_finite() && self.m >= 0.0) {
            return Err(Error::InvalidParams(format!("m must be >= 0, got {}", self.m)));
        }
        if !(self.n.is_finite() && self.n > 0.0) {
            return Err(Error::InvalidParams(format!("n must be > 0, got {}", self.n)));
        }
        Ok(())
    }
}

/// Closed-form payoff, generic so it can be evaluated exactly.
pub fn payoff_closed_form<T: Num + Clone>(m: T, n: T, x: T, y: T, z: T) -> (T, T) {
    let one = T::one();
    let f1 = x.clone() + one.clone() / (x + one.clone()) - z.clone();
    let f2 = (one.clone() + m) * y + (one + n) * z;
    (f1, f2)
}

/// `v(z) = z (-1, 1+n)`.
pub fn translation_closed_form<T: Num + Clone>(n: T, z: T) -> (T, T) {
    (T::zero() - z.clone(), (T::one() + n) * z)
}

/// Rebalancing compromise `K` at `m = 0`:
/// `(3/2 + n^2/(1+2n), 1 + n(1+n)/(1+2n))`.
pub fn rebalancing_closed_form<T: Num + Clone>(n: T) -> (T, T) {
    let one = T::one();
    let two = one.clone() + one.clone();
    let three_halves = (two.clone() + one.clone()) / two.clone();
    let denom = one.clone() + two * n.clone();
    let k1 = three_halves + n.clone() * n.clone() / denom.clone();
    let k2 = one.clone() + n.clone() * (one + n) / denom;
    (k1, k2)
}

/// GDP components of both countries. Constant components are kept as
/// explicit zero maps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelComponents {
    pub params: EurozoneParams,
}

impl ModelComponents {
    pub fn new(params: EurozoneParams) -> Self {
        Self { params }
    }

    /// German consumption.
    pub fn c1(&self, x: f64, _y: f64, _z: f64) -> f64 {
        x
    }

    pub fn i1(&self, _x: f64, _y: f64, _z: f64) -> f64 {
        0.0
    }

    /// German exports as a decreasing reaction to consumption.
    pub fn x1(&self, x: f64, _y: f64, _z: f64) -> f64 {
        1.0 / (x + 1.0)
    }

    /// German imports from Greece.
    pub fn m1(&self, _x: f64, _y: f64, z: f64) -> f64 {
        z
    }

    pub fn c2(&self, _x: f64, _y: f64, _z: f64) -> f64 {
        0.0
    }

    /// Greek investment.
    pub fn i2(&self, _x: f64, y: f64, z: f64) -> f64 {
        y + self.params.n * z
    }

    /// Greek exports.
    pub fn x2(&self, _x: f64, y: f64, z: f64) -> f64 {
        z + self.params.m * y
    }

    pub fn m2(&self, _x: f64, _y: f64, _z: f64) -> f64 {
        0.0
    }

    pub fn f1(&self, x: f64, y: f64, z: f64) -> f64 {
        self.c1(x, y, z) + self.i1(x, y, z) + self.x1(x, y, z) - self.m1(x, y, z)
    }

    pub fn f2(&self, x: f64, y: f64, z: f64) -> f64 {
        self.c2(x, y, z) + self.i2(x, y, z) + self.x2(x, y, z) - self.m2(x, y, z)
    }
}

pub fn build_model(params: EurozoneParams) -> CoopetitiveGame {
    let EurozoneParams { m, n } = params;
    CoopetitiveGame::new(StrategyCube::unit(), move |x, y, z| {
        let (f1, f2) = payoff_closed_form(m, n, x, y, z);
        PayoffPoint::new(f1, f2)
    })
}

pub fn translation_vector(params: EurozoneParams, z: f64) -> PayoffPoint {
    let (v1, v2) = translation_closed_form(params.n, z);
    PayoffPoint::new(v1, v2)
}

/// Jacobian of the section payoff as printed with the original model, with
/// `1 + (1+x)^-2` on the diagonal. It is invertible everywhere.
pub fn printed_jacobian(params: EurozoneParams) -> impl Fn(f64, f64) -> [[f64; 2]; 2] {
    move |x, _y| [[1.0 + (1.0 + x).powi(-2), 0.0], [0.0, 1.0 + params.m]]
}

/// The derivative of `x + 1/(x+1)` is `1 - (1+x)^-2`, which vanishes at `x = 0`.
pub fn exact_jacobian(params: EurozoneParams) -> impl Fn(f64, f64) -> [[f64; 2]; 2] {
    move |x, _y| [[1.0 - (1.0 + x).powi(-2), 0.0], [0.0, 1.0 + params.m]]
}

/// Closed-form rebalancing construction at `m = 0`, cross-checked against
/// the generic solver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceSolution {
    pub params: EurozoneParams,
    /// Supremum of the initial game `G(0)`.
    pub initial_supremum: PayoffPoint,
    pub tu_level: f64,
    pub s: Segment,
    pub s_prime: Segment,
    pub k: PayoffPoint,
    pub generic_k: PayoffPoint,
    pub deviation: f64,
    pub grid: GridSpec,
}

pub const CROSS_CHECK_TOL: f64 = 1e-9;

fn require_worked_case(params: EurozoneParams) -> Result<()> {
    params.validate()?;
    if params.m != 0.0 {
        return Err(Error::InvalidParams(format!(
            "closed-form reference is only available for m = 0, got m = {}",
            params.m
        )));
    }
    Ok(())
}

pub fn reference_solution(params: EurozoneParams) -> Result<ReferenceSolution> {
    reference_solution_with(params, GridSpec::new(11)?, 11)
}

pub fn reference_solution_with(
    params: EurozoneParams,
    grid: GridSpec,
    zgrid_size: usize,
) -> Result<ReferenceSolution> {
    require_worked_case(params)?;
    let n = params.n;
    let initial_supremum = PayoffPoint::new(1.5, 1.0);
    let tu_level = 2.5 + n;
    let s = Segment::new(PayoffPoint::new(1.5 + n, 1.0), PayoffPoint::new(0.5, 2.0 + n));
    let s_prime = Segment::new(initial_supremum, PayoffPoint::new(1.5 + n, 2.0 + n));
    let (k1, k2) = rebalancing_closed_form(n);
    let k = PayoffPoint::new(k1, k2);

    let zgrid = Interval::unit().sample(zgrid_size.max(2));
    let trace = rebalancing_win_win(&build_model(params), &zgrid, grid)?;
    let deviation = [
        trace.k.distance(k),
        trace.threat.distance(initial_supremum),
        (trace.tu_level - tu_level).abs(),
        trace.s.a.distance(s.a),
        trace.s.b.distance(s.b),
        trace.s_prime.b.distance(s_prime.b),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    if deviation > CROSS_CHECK_TOL {
        return Err(Error::CrossCheckFailed(deviation));
    }
    Ok(ReferenceSolution {
        params,
        initial_supremum,
        tu_level,
        s,
        s_prime,
        k,
        generic_k: trace.k,
        deviation,
        grid,
    })
}

/// How the social pie is realized and shared.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WinWinPlan {
    pub z_star: f64,
    pub bistrategy: (f64, f64),
    /// Payoff actually produced at `(x, y, z_star)` before any transfer.
    pub raw_payoff: PayoffPoint,
    pub social_pie: f64,
    pub split: PayoffPoint,
    /// `split.p1 - raw_payoff.p1`; positive means Greece pays Germany.
    pub transfer: f64,
}

pub fn win_win_procedure(params: EurozoneParams) -> Result<WinWinPlan> {
    let reference = reference_solution(params)?;
    let game = build_model(params);
    let z_star = 1.0;
    let equilibria = nash_equilibria(&section(&game, z_star)?, GridSpec::default());
    let bistrategy = match equilibria.as_slice() {
        [only] => *only,
        _ => {
            return Err(Error::InvalidParams(format!(
                "expected a unique equilibrium of G(1), found {}",
                equilibria.len()
            )))
        }
    };
    let raw_payoff = game.payoff(bistrategy.0, bistrategy.1, z_star);
    Ok(WinWinPlan {
        z_star,
        bistrategy,
        raw_payoff,
        social_pie: 2.5 + params.n,
        split: reference.k,
        transfer: reference.k.p1 - raw_payoff.p1,
    })
}
