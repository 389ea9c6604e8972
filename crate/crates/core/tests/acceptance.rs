//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;

use coopetition::bargaining::{kalai_smorodinsky, nash_bargaining, tu_boundary, win_win_check, BargainingProblem};
use coopetition::eurozone::{
    build_model, exact_jacobian, payoff_closed_form, printed_jacobian, rebalancing_closed_form,
    reference_solution, translation_closed_form, EurozoneParams,
};
use coopetition::game::{nash_equilibria, reassemble, section, CoopetitiveGame, GridSpec, Interval, NormalFormSection};
use coopetition::geometry::{convex_hull, hausdorff_distance, pareto_front, PayoffPoint};
use coopetition::payoff_space::{coopetitive_payoff_region, critical_zone, payoff_region, PayoffRegion, CRITICAL_TOL};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

const MS: [f64; 2] = [0.0, 0.3];
const NS: [f64; 3] = [0.5, 1.0, 2.0];

fn pt(a: f64, b: f64) -> PayoffPoint {
    PayoffPoint::new(a, b)
}

fn model(m: f64, n: f64) -> CoopetitiveGame {
    build_model(EurozoneParams::new(m, n).unwrap())
}

fn zgrid() -> Vec<f64> {
    Interval::unit().sample(11)
}

fn region(m: f64, n: f64) -> PayoffRegion {
    coopetitive_payoff_region(&model(m, n), &zgrid(), GridSpec::default()).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn nash_equilibrium() -> Check {
    for m in MS {
        for n in NS {
            let g = model(m, n);
            for z in zgrid() {
                let eq = nash_equilibria(&section(&g, z).unwrap(), GridSpec::default());
                ensure(eq == vec![(1.0, 1.0)], || format!("m={m} n={n} z={z}: {eq:?}"))?;
            }
        }
    }
    Ok(())
}

fn section_payoff_space() -> Check {
    let g0 = section(&model(0.0, 1.0), 0.0).unwrap();
    let r = payoff_region(&g0, GridSpec::default()).unwrap();
    let expected = [pt(1.0, 0.0), pt(1.5, 0.0), pt(1.5, 1.0), pt(1.0, 1.0)];
    let v = r.hull.vertices();
    ensure(v.len() == 4, || format!("{} vertices", v.len()))?;
    for e in expected {
        ensure(v.iter().any(|p| p.approx_eq(e, 1e-6)), || format!("vertex {e:?} missing from {v:?}"))?;
    }
    Ok(())
}

fn coopetitive_payoff_space() -> Check {
    let r = region(0.0, 1.0);
    let hexagon = convex_hull(&[
        pt(1.0, 0.0),
        pt(1.5, 0.0),
        pt(1.5, 1.0),
        pt(0.5, 3.0),
        pt(0.0, 3.0),
        pt(0.0, 2.0),
    ])
    .unwrap();
    let d = hausdorff_distance(&r.hull, &hexagon);
    ensure(hexagon.len() == 6 && d <= 1e-6, || format!("Hausdorff distance {d:e}"))
}

fn pareto_segment() -> Check {
    for m in MS {
        for n in NS {
            let r = region(m, n);
            let f = r.front.points();
            let (q, p) = (pt(0.5, 2.0 + m + n), pt(1.5, 1.0 + m));
            ensure(f.len() == 2 && f[0].approx_eq(q, 1e-9) && f[1].approx_eq(p, 1e-9), || {
                format!("m={m} n={n}: front {f:?}")
            })?;
            let slope = ((f[1].p2 - f[0].p2) / (f[1].p1 - f[0].p1)).abs();
            ensure((slope - (1.0 + n)).abs() <= 1e-9, || format!("m={m} n={n}: slope {slope}"))?;
        }
    }
    Ok(())
}

fn midpoint_coincidence() -> Check {
    for m in MS {
        for n in NS {
            let r = region(m, n);
            let ext = r.front.extrema();
            let mid = pt(1.0, 1.5 + m + n / 2.0);
            let ks = kalai_smorodinsky(&BargainingProblem::new(r.front.clone(), ext.lo, ext.hi).unwrap())
                .map_err(|e| e.to_string())?;
            let nb = nash_bargaining(&r.front, ext.lo).map_err(|e| e.to_string())?;
            ensure(ks.approx_eq(mid, 1e-9) && nb.approx_eq(mid, 1e-9), || {
                format!("m={m} n={n}: KS {ks:?}, Nash {nb:?}, midpoint {mid:?}")
            })?;
        }
    }
    Ok(())
}

fn tu_maximum() -> Check {
    for m in MS {
        for n in NS {
            let tu = tu_boundary(&region(m, n));
            let q = pt(0.5, 2.0 + m + n);
            ensure((tu.vmax - (2.5 + m + n)).abs() <= 1e-9, || format!("m={m} n={n}: vmax {}", tu.vmax))?;
            ensure(tu.argmax.iter().any(|p| p.approx_eq(q, 1e-9)), || {
                format!("m={m} n={n}: maximum at {:?}", tu.argmax)
            })?;
            if m == 0.0 {
                let pie = model(m, n).payoff(1.0, 1.0, 1.0).sum();
                ensure((pie - (2.5 + n)).abs() <= 1e-9 && (pie - tu.vmax).abs() <= 1e-9, || {
                    format!("n={n}: pie {pie}")
                })?;
            }
        }
    }
    Ok(())
}

fn rebalancing_compromise() -> Check {
    let reference = reference_solution(EurozoneParams::new(0.0, 1.0).unwrap()).map_err(|e| e.to_string())?;
    let expected = pt(11.0 / 6.0, 5.0 / 3.0);
    ensure(
        reference.k.approx_eq(expected, 1e-9) && reference.generic_k.approx_eq(expected, 1e-9),
        || format!("closed form {:?}, generic {:?}", reference.k, reference.generic_k),
    )?;
    for n in [0.1, 0.5, 1.0, 2.0] {
        let (k1, k2) = rebalancing_closed_form(n);
        ensure(win_win_check(pt(k1, k2), pt(1.5, 1.0)), || format!("n={n}: K=({k1}, {k2}) not win-win"))?;
    }
    Ok(())
}

fn property_suites() -> Check {
    let mut rng = StdRng::seed_from_u64(2024);
    let random_point = |rng: &mut StdRng| pt(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));

    for trial in 0..1000 {
        let size = rng.gen_range(1..80);
        let cloud: Vec<_> = (0..size).map(|_| random_point(&mut rng)).collect();
        let f = pareto_front(&cloud).unwrap();
        for (i, a) in f.points().iter().enumerate() {
            for b in &f.points()[i + 1..] {
                ensure(!a.weakly_dominates(*b, 0.0) && !b.weakly_dominates(*a, 0.0), || {
                    format!("cloud {trial}: {a:?} and {b:?} comparable")
                })?;
            }
        }
    }

    for trial in 0..200 {
        let size = rng.gen_range(2..40);
        let cloud: Vec<_> = (0..size).map(|_| random_point(&mut rng)).collect();
        let f = pareto_front(&cloud).unwrap();
        let ext = f.extrema();
        let a = ext.lo - pt(rng.gen_range(0.01..5.0), rng.gen_range(0.01..5.0));
        let b = ext.hi;
        let k = kalai_smorodinsky(&BargainingProblem::new(f.clone(), a, b).unwrap()).map_err(|e| e.to_string())?;
        let r1 = (k.p1 - a.p1) / (b.p1 - a.p1);
        let r2 = (k.p2 - a.p2) / (b.p2 - a.p2);
        ensure((r1 - r2).abs() <= 1e-9 && f.distance_to(k) <= 1e-9, || {
            format!("KS problem {trial}: ratios {r1} vs {r2}")
        })?;
    }

    for trial in 0..100 {
        let c: Vec<f64> = (0..6).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let mut zs: Vec<f64> = (0..rng.gen_range(1..6)).map(|_| rng.gen_range(0..100) as f64 / 10.0).collect();
        zs.sort_by(f64::total_cmp);
        zs.dedup();
        let sections: Vec<_> = zs
            .iter()
            .map(|&z| {
                let c = c.clone();
                NormalFormSection::new(Interval::unit(), Interval::unit(), z, move |x, y| {
                    pt(c[0] * x.powi(2) + c[1] * y * z, c[2] * x * y + c[3] * z + c[4] * y + c[5])
                })
            })
            .collect();
        let game = reassemble(&sections).map_err(|e| e.to_string())?;
        for s in &sections {
            for x in Interval::unit().sample(9) {
                for y in Interval::unit().sample(9) {
                    ensure(game.payoff(x, y, s.z()) == s.payoff(x, y), || {
                        format!("game {trial}: mismatch at ({x}, {y}, {})", s.z())
                    })?;
                }
            }
        }
    }

    let rat = |num: i64, den: i64| BigRational::new(BigInt::from(num), BigInt::from(den));
    for _ in 0..1000 {
        let (x, y, z) = (
            rat(rng.gen_range(0..=1000), 1000),
            rat(rng.gen_range(0..=1000), 1000),
            rat(rng.gen_range(0..=1000), 1000),
        );
        let (m, n) = (rat(rng.gen_range(0..=500), 100), rat(rng.gen_range(1..=500), 100));
        let (a1, a2) = payoff_closed_form(m.clone(), n.clone(), x.clone(), y.clone(), z.clone());
        let (b1, b2) = payoff_closed_form(m, n.clone(), x.clone(), y.clone(), rat(0, 1));
        let (v1, v2) = translation_closed_form(n, z.clone());
        ensure(a1 - b1 == v1 && a2 - b2 == v2, || format!("translation identity fails at ({x}, {y}, {z})"))?;
    }
    Ok(())
}

fn critical_zone_dual() -> Check {
    let params = EurozoneParams::new(0.0, 1.0).unwrap();
    let g0 = section(&build_model(params), 0.0).unwrap();
    let grid = GridSpec::default();
    let printed = printed_jacobian(params);
    let zone = critical_zone(&g0, Some(&printed), grid, CRITICAL_TOL);
    ensure(zone.is_empty(), || format!("printed Jacobian: {} critical points", zone.points.len()))?;

    let fd = critical_zone(&g0, None, grid, CRITICAL_TOL);
    ensure(!fd.is_empty() && fd.points.iter().all(|&(x, _)| x == 0.0), || {
        format!("finite differences: {} points, not all on x = 0", fd.points.len())
    })?;

    // the exact derivative agrees with the finite-difference result
    let exact = exact_jacobian(params);
    let ez = critical_zone(&g0, Some(&exact), grid, CRITICAL_TOL);
    ensure(ez.points == fd.points, || "exact and finite-difference zones differ".into())
}

fn cli_determinism() -> Check {
    let run = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_coopetition"))
            .args(args)
            .output()
            .map_err(|e| e.to_string())
    };
    let a = run(&["solve", "--m", "0", "--n", "1"])?;
    let b = run(&["solve", "--m", "0", "--n", "1"])?;
    ensure(a.status.success() && b.status.success(), || "solve failed".into())?;
    ensure(!a.stdout.is_empty() && a.stdout == b.stdout, || "solve output differs between runs".into())?;

    let svg = run(&["plot", "--m", "0", "--n", "1"])?;
    let golden = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/eurozone_m0_n1.svg");
    let expected = std::fs::read(&golden).map_err(|e| format!("{}: {e}", golden.display()))?;
    ensure(svg.stdout == expected, || "SVG differs from golden file".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("Nash equilibrium is (1,1) on every section", nash_equilibrium),
        ("section payoff space G(0) is the rectangle [1,3/2]x[0,1]", section_payoff_space),
        ("coopetitive payoff space is the hexagon", coopetitive_payoff_space),
        ("Pareto segment [P',Q'] with slope 1+n", pareto_segment),
        ("KS and Nash bargaining coincide with the midpoint", midpoint_coincidence),
        ("TU maximum 5/2+m+n at Q', social pie 5/2+n", tu_maximum),
        ("rebalancing compromise K = (11/6, 5/3), win-win", rebalancing_compromise),
        ("property suites", property_suites),
        ("critical zone: empty (printed) vs x = 0 edge (finite differences)", critical_zone_dual),
        ("CLI determinism and golden SVG", cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(()) => println!("[PASS] {}. {name}", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {}. {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
