//! SVG rendering of a solve report.

use std::fmt::Write;

use crate::geometry::{PayoffPoint, Segment};
use crate::report::SolveReport;

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 0.05;

/// Affine map from payoff space to the viewport, `p2` pointing up.
#[derive(Debug, Clone, Copy)]
struct Frame {
    lo: PayoffPoint,
    hi: PayoffPoint,
}

impl Frame {
    fn covering(points: &[PayoffPoint]) -> Self {
        let mut lo = points[0];
        let mut hi = points[0];
        for p in points {
            lo = lo.inf(*p);
            hi = hi.sup(*p);
        }
        // widen degenerate axes so the map stays finite
        if hi.p1 - lo.p1 <= 0.0 {
            lo.p1 -= 0.5;
            hi.p1 += 0.5;
        }
        if hi.p2 - lo.p2 <= 0.0 {
            lo.p2 -= 0.5;
            hi.p2 += 0.5;
        }
        Self { lo, hi }
    }

    fn map(&self, p: PayoffPoint) -> (f64, f64) {
        let (mx, my) = (WIDTH * MARGIN, HEIGHT * MARGIN);
        let u = (p.p1 - self.lo.p1) / (self.hi.p1 - self.lo.p1);
        let v = (p.p2 - self.lo.p2) / (self.hi.p2 - self.lo.p2);
        (mx + u * (WIDTH - 2.0 * mx), HEIGHT - my - v * (HEIGHT - 2.0 * my))
    }

    fn points_attr(&self, pts: &[PayoffPoint]) -> String {
        pts.iter()
            .map(|p| {
                let (x, y) = self.map(*p);
                format!("{x:.3},{y:.3}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// The line `p1 + p2 = v` restricted to the frame box.
    fn tu_line(&self, v: f64) -> Option<Segment> {
        let p1_lo = self.lo.p1.max(v - self.hi.p2);
        let p1_hi = self.hi.p1.min(v - self.lo.p2);
        (p1_lo <= p1_hi).then(|| {
            Segment::new(
                PayoffPoint::new(p1_lo, v - p1_lo),
                PayoffPoint::new(p1_hi, v - p1_hi),
            )
        })
    }
}

fn line(out: &mut String, frame: &Frame, s: &Segment, class: &str, style: &str) {
    let (x1, y1) = frame.map(s.a);
    let (x2, y2) = frame.map(s.b);
    let _ = writeln!(
        out,
        r#"  <line class="{class}" x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" {style}/>"#
    );
}

fn marker(out: &mut String, frame: &Frame, p: PayoffPoint, label: &str, below: bool) {
    let (x, y) = frame.map(p);
    let _ = writeln!(out, r#"  <circle class="point" cx="{x:.3}" cy="{y:.3}" r="4" fill="black"/>"#);
    let _ = writeln!(
        out,
        r#"  <text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="14">{label}</text>"#,
        x + 6.0,
        if below { y + 18.0 } else { y - 6.0 }
    );
}

pub fn render(report: &SolveReport) -> String {
    let mut data: Vec<PayoffPoint> = report.region.vertices.clone();
    if let Some(t) = &report.rebalancing {
        data.extend([t.threat, t.s.a, t.s.b, t.s_prime.a, t.s_prime.b, t.k]);
    }
    let frame = Frame::covering(&data);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"  <rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r##"  <polygon class="region" points="{}" fill="#dde8f4" stroke="#4a6d8c" stroke-width="1"/>"##,
        frame.points_attr(&report.region.vertices)
    );
    let _ = writeln!(
        out,
        r##"  <polyline class="front" points="{}" fill="none" stroke="#c0392b" stroke-width="3"/>"##,
        frame.points_attr(&report.region.front)
    );
    if let Some(tu) = frame.tu_line(report.tu_boundary.boundary.vmax) {
        line(&mut out, &frame, &tu, "tu", r##"stroke="#555555" stroke-dasharray="6 4""##);
    }
    if let Some(t) = &report.rebalancing {
        line(&mut out, &frame, &t.s, "s", r##"stroke="#27ae60" stroke-width="2""##);
        line(&mut out, &frame, &t.s_prime, "s-prime", r##"stroke="#8e44ad" stroke-width="2""##);
    }

    let front = &report.region.front;
    if let (Some(q), Some(p)) = (front.first(), front.last()) {
        marker(&mut out, &frame, *p, "P′", false);
        if front.len() > 1 {
            marker(&mut out, &frame, *q, "Q′", false);
        }
    }
    if let Some(t) = &report.rebalancing {
        marker(&mut out, &frame, t.threat, "L", true);
        marker(&mut out, &frame, t.k, "K", false);
    }
    out.push_str("</svg>\n");
    out
}
