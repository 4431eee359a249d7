//! Planar profile curves and their differential geometry: evaluation,
//! slope functions, angle lifts, winding numbers, contact and twisting
//! diagnostics.
//!
//! A profile curve is a map `h: [a,b] -> R^2`. It encodes a torus-invariant
//! 1-form `h_1 dtheta + h_2 dphi` on `[a,b] x T^2` (unit-period torus);
//! all fiber integrals therefore carry a factor 1.

use crate::error::{Error, Result};
use crate::geom::{ipair, v2, wrap_angle, Vec2};
use crate::num::{nearest_rational, rational_directions};
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

/// Default claimed lower bound on |h'|.
pub const DEFAULT_ETA: f64 = 1e-8;
/// Default denominator bound for rational slope detection.
pub const DEFAULT_Q: u32 = 64;
/// Angular tolerance for rational slope detection (radians).
pub const RATIONAL_ANGLE_TOL: f64 = 1e-9;
/// Hard cap on angle-lift samples.
pub const LIFT_MAX_SAMPLES: usize = 1 << 20;

/// Value + derivative sample of a curve at a grid position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HermiteNode {
    pub r: f64,
    pub h: Vec2,
    pub dh: Vec2,
}

/// Closed-form curve families, evaluated exactly.
#[derive(Debug, Clone, PartialEq)]
pub enum NamedCurve {
    /// `scale * (r^2, 1 - r^2)` — the standard contact profile.
    Standard { scale: f64 },
    /// `(cos(2 pi turns r), sin(2 pi turns r))`.
    Circle { turns: f64 },
    /// `(r, r^2 / 2)`.
    Parabola,
    /// `p0 + r * v`.
    Linear { p0: Vec2, v: Vec2 },
}

impl NamedCurve {
    fn eval(&self, r: f64, order: u8) -> Vec2 {
        match *self {
            NamedCurve::Standard { scale } => match order {
                0 => v2(scale * r * r, scale * (1.0 - r * r)),
                1 => v2(2.0 * scale * r, -2.0 * scale * r),
                _ => v2(2.0 * scale, -2.0 * scale),
            },
            NamedCurve::Circle { turns } => {
                let w = TAU * turns;
                let (s, c) = (w * r).sin_cos();
                match order {
                    0 => v2(c, s),
                    1 => v2(-w * s, w * c),
                    _ => v2(-w * w * c, -w * w * s),
                }
            }
            NamedCurve::Parabola => match order {
                0 => v2(r, 0.5 * r * r),
                1 => v2(1.0, r),
                _ => v2(0.0, 1.0),
            },
            NamedCurve::Linear { p0, v } => match order {
                0 => p0 + v * r,
                1 => v,
                _ => Vec2::ZERO,
            },
        }
    }

    fn name(&self) -> &'static str {
        match self {
            NamedCurve::Standard { .. } => "standard",
            NamedCurve::Circle { .. } => "circle",
            NamedCurve::Parabola => "parabola",
            NamedCurve::Linear { .. } => "linear",
        }
    }

    fn params(&self) -> Vec<f64> {
        match *self {
            NamedCurve::Standard { scale } => vec![scale],
            NamedCurve::Circle { turns } => vec![turns],
            NamedCurve::Parabola => vec![],
            NamedCurve::Linear { p0, v } => vec![p0.x, p0.y, v.x, v.y],
        }
    }

    fn from_name(name: &str, params: &[f64]) -> Result<Self> {
        match (name, params) {
            ("standard", [scale]) => Ok(NamedCurve::Standard { scale: *scale }),
            ("circle", [turns]) => Ok(NamedCurve::Circle { turns: *turns }),
            ("parabola", []) => Ok(NamedCurve::Parabola),
            ("linear", [x0, y0, vx, vy]) => Ok(NamedCurve::Linear {
                p0: v2(*x0, *y0),
                v: v2(*vx, *vy),
            }),
            _ => Err(Error::domain(format!(
                "unknown named curve '{name}' with {} parameter(s)",
                params.len()
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Rep {
    Hermite(Vec<HermiteNode>),
    Named(NamedCurve),
}

/// A planar profile curve `h: [a,b] -> R^2`, represented either as a
/// piecewise cubic Hermite spline (value and derivative at nodes, so `h'`
/// is exactly representable) or as a named analytic family.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileCurve {
    interval: (f64, f64),
    rep: Rep,
    /// Claimed lower bound on |h'| on the open interval; 0 = no claim.
    eta: f64,
}

impl ProfileCurve {
    /// Build a Hermite curve. The node grid must be strictly increasing;
    /// if `eta > 0`, |h'| is checked at every node and segment midpoint.
    pub fn hermite(nodes: Vec<HermiteNode>, eta: f64) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::domain("need at least two Hermite nodes"));
        }
        if !nodes.windows(2).all(|w| w[0].r < w[1].r) {
            return Err(Error::domain("Hermite node grid must be strictly increasing"));
        }
        let interval = (nodes[0].r, nodes[nodes.len() - 1].r);
        let c = ProfileCurve {
            interval,
            rep: Rep::Hermite(nodes),
            eta,
        };
        if eta > 0.0 {
            c.check_immersion_floor()?;
        }
        Ok(c)
    }

    /// Build a named analytic curve on `[a, b]`.
    pub fn named(family: NamedCurve, interval: (f64, f64), eta: f64) -> Result<Self> {
        if !(interval.0 < interval.1) {
            return Err(Error::domain("interval must be nondegenerate"));
        }
        let c = ProfileCurve {
            interval,
            rep: Rep::Named(family),
            eta,
        };
        if eta > 0.0 {
            c.check_immersion_floor()?;
        }
        Ok(c)
    }

    /// The standard contact profile `scale * (r^2, 1 - r^2)` on `[a, b]`.
    pub fn standard(scale: f64, interval: (f64, f64)) -> ProfileCurve {
        ProfileCurve::named(NamedCurve::Standard { scale }, interval, 0.0).unwrap()
    }

    fn check_immersion_floor(&self) -> Result<()> {
        for r in self.check_grid() {
            let d = self.eval(r, 1)?;
            if d.norm() < self.eta {
                return Err(Error::domain(format!(
                    "immersion violation: |h'({r})| = {:.3e} < eta = {:.3e}",
                    d.norm(),
                    self.eta
                )));
            }
        }
        Ok(())
    }

    fn check_grid(&self) -> Vec<f64> {
        let g = self.sample_grid(128);
        let mut out = g.clone();
        out.extend(g.windows(2).map(|w| 0.5 * (w[0] + w[1])));
        out.sort_by(f64::total_cmp);
        out
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    pub fn span(&self) -> f64 {
        self.interval.1 - self.interval.0
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta = eta;
        self
    }

    /// Node positions (Hermite) or an empty slice (named).
    pub fn node_positions(&self) -> Vec<f64> {
        match &self.rep {
            Rep::Hermite(nodes) => nodes.iter().map(|n| n.r).collect(),
            Rep::Named(_) => Vec::new(),
        }
    }

    pub fn nodes(&self) -> Option<&[HermiteNode]> {
        match &self.rep {
            Rep::Hermite(nodes) => Some(nodes),
            Rep::Named(_) => None,
        }
    }

    /// Union of node positions and `n` uniform subdivisions, sorted and
    /// deduplicated. Always contains both endpoints.
    pub fn sample_grid(&self, n: usize) -> Vec<f64> {
        let (a, b) = self.interval;
        let mut g: Vec<f64> = (0..=n)
            .map(|i| a + (b - a) * i as f64 / n as f64)
            .collect();
        g.extend(self.node_positions());
        g.sort_by(f64::total_cmp);
        g.dedup_by(|x, y| (*x - *y).abs() < 1e-14 * (b - a));
        g
    }

    /// Evaluate `h`, `h'` or `h''` at `r`. The second derivative of a
    /// Hermite curve is the piecewise-polynomial one (discontinuous at
    /// nodes; the right-sided piece is used at interior nodes).
    pub fn eval(&self, r: f64, order: u8) -> Result<Vec2> {
        let (a, b) = self.interval;
        let tol = 1e-12 * (b - a).max(1.0);
        if r < a - tol || r > b + tol {
            return Err(Error::domain(format!(
                "parameter {r} outside curve interval [{a}, {b}]"
            )));
        }
        let r = r.clamp(a, b);
        match &self.rep {
            Rep::Named(f) => Ok(f.eval(r, order)),
            Rep::Hermite(nodes) => Ok(hermite_eval(nodes, r, order)),
        }
    }

    /// Effective immersion floor used for singularity detection.
    pub(crate) fn immersion_floor(&self) -> f64 {
        self.eta.max(1e-13)
    }

    /// Unit tangent direction at `r`; errors on immersion violation.
    pub fn direction(&self, r: f64) -> Result<Vec2> {
        let d = self.eval(r, 1)?;
        if d.norm() < self.immersion_floor() {
            return Err(Error::domain(format!(
                "immersion violation at r = {r}: |h'| = {:.3e}",
                d.norm()
            )));
        }
        Ok(d.normalize())
    }

    /// Resample any curve to a Hermite spline on the union of its nodes
    /// and `n` uniform subdivisions (exact for Hermite input at its own
    /// nodes; exact reproduction if the grid refines the original one).
    pub fn to_hermite(&self, n: usize) -> Result<ProfileCurve> {
        let nodes = self
            .sample_grid(n)
            .into_iter()
            .map(|r| {
                Ok(HermiteNode {
                    r,
                    h: self.eval(r, 0)?,
                    dh: self.eval(r, 1)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        ProfileCurve::hermite(nodes, 0.0).map(|c| c.with_eta(self.eta))
    }

    /// Restrict the curve to `[a', b']` (resampling Hermite nodes).
    pub fn restrict(&self, a2: f64, b2: f64) -> Result<ProfileCurve> {
        let (a, b) = self.interval;
        if a2 < a - 1e-12 || b2 > b + 1e-12 || a2 >= b2 {
            return Err(Error::domain(format!(
                "restriction [{a2}, {b2}] not inside [{a}, {b}]"
            )));
        }
        match &self.rep {
            Rep::Named(f) => ProfileCurve::named(f.clone(), (a2, b2), 0.0).map(|c| c.with_eta(self.eta)),
            Rep::Hermite(nodes) => {
                let mut grid: Vec<f64> = nodes
                    .iter()
                    .map(|n| n.r)
                    .filter(|&r| r > a2 + 1e-14 && r < b2 - 1e-14)
                    .collect();
                grid.insert(0, a2);
                grid.push(b2);
                let new_nodes = grid
                    .into_iter()
                    .map(|r| {
                        Ok(HermiteNode {
                            r,
                            h: self.eval(r, 0)?,
                            dh: self.eval(r, 1)?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                ProfileCurve::hermite(new_nodes, 0.0).map(|c| c.with_eta(self.eta))
            }
        }
    }
}

fn hermite_eval(nodes: &[HermiteNode], r: f64, order: u8) -> Vec2 {
    // Segment lookup: last node whose position is <= r (right-closed at the end).
    let idx = match nodes.binary_search_by(|n| n.r.total_cmp(&r)) {
        Ok(i) => i.min(nodes.len() - 2),
        Err(i) => i.saturating_sub(1).min(nodes.len() - 2),
    };
    let (n0, n1) = (&nodes[idx], &nodes[idx + 1]);
    let dt = n1.r - n0.r;
    let t = (r - n0.r) / dt;
    match order {
        0 => {
            let h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
            let h10 = t * (1.0 - t) * (1.0 - t);
            let h01 = t * t * (3.0 - 2.0 * t);
            let h11 = t * t * (t - 1.0);
            n0.h * h00 + n0.dh * (dt * h10) + n1.h * h01 + n1.dh * (dt * h11)
        }
        1 => {
            let h00 = 6.0 * t * (t - 1.0);
            let h10 = (1.0 - t) * (1.0 - 3.0 * t);
            let h01 = -h00;
            let h11 = t * (3.0 * t - 2.0);
            n0.h * (h00 / dt) + n0.dh * h10 + n1.h * (h01 / dt) + n1.dh * h11
        }
        _ => {
            let h00 = 12.0 * t - 6.0;
            let h10 = 6.0 * t - 4.0;
            let h01 = -h00;
            let h11 = 6.0 * t - 2.0;
            n0.h * (h00 / (dt * dt)) + n0.dh * (h10 / dt) + n1.h * (h01 / (dt * dt)) + n1.dh * (h11 / dt)
        }
    }
}

/// A unit slope direction with an optional rational tag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlopeValue {
    pub direction: Vec2,
    /// Coprime (p, q) with the direction parallel to (p, q), if one exists
    /// within the angular tolerance and denominator bound.
    pub rational_tag: Option<(i64, i64)>,
}

/// Slope `k(r) = h'(r)/|h'(r)|` with rational detection up to
/// denominator bound `q_max`.
pub fn slope(c: &ProfileCurve, r: f64, q_max: u32) -> Result<SlopeValue> {
    let dir = c.direction(r)?;
    let dirs = rational_directions(q_max);
    let (best, dist) = nearest_rational(&dirs, dir.angle());
    let rational_tag = (dist <= RATIONAL_ANGLE_TOL).then_some((best.p, best.q));
    Ok(SlopeValue {
        direction: dir,
        rational_tag,
    })
}

/// A continuous angle lift `sigma` of the slope function:
/// `h'(r)/|h'(r)| = exp(i sigma(r))`, sampled with per-step angle
/// increments below pi/2.
#[derive(Debug, Clone)]
pub struct AngleLift {
    /// (r, sigma) samples, strictly increasing in r.
    samples: Vec<(f64, f64)>,
}

impl AngleLift {
    /// Build the lift by adaptive bisection refinement. Endpoints where
    /// |h'| vanishes (e.g. standardized binding ends) are nudged inward.
    pub fn build(c: &ProfileCurve) -> Result<AngleLift> {
        let (mut a, mut b) = c.interval();
        let span = b - a;
        // Nudge degenerate endpoints inward; the slope extends continuously
        // over such ends for every curve this crate constructs.
        for _ in 0..60 {
            if c.direction(a).is_ok() {
                break;
            }
            a += span * 1e-9;
        }
        for _ in 0..60 {
            if c.direction(b).is_ok() {
                break;
            }
            b -= span * 1e-9;
        }
        let mut grid: Vec<f64> = c
            .sample_grid(128)
            .into_iter()
            .map(|r| r.clamp(a, b))
            .collect();
        grid.sort_by(f64::total_cmp);
        grid.dedup_by(|x, y| (*x - *y).abs() < span * 1e-13);

        let mut dirs: Vec<(f64, f64)> = grid
            .iter()
            .map(|&r| Ok((r, c.direction(r)?.angle())))
            .collect::<Result<Vec<_>>>()?;

        // Refine until every consecutive wrapped step is < pi/2.
        let step_bound = PI / 2.0;
        let mut i = 0;
        while i + 1 < dirs.len() {
            let (r0, t0) = dirs[i];
            let (r1, t1) = dirs[i + 1];
            if wrap_angle(t1 - t0).abs() < step_bound || r1 - r0 < span * 1e-12 {
                i += 1;
                continue;
            }
            if dirs.len() >= LIFT_MAX_SAMPLES {
                return Err(Error::numerical(
                    "undersampled curve: angle lift refinement exceeded sample cap".to_string(),
                ));
            }
            let rm = 0.5 * (r0 + r1);
            let tm = c.direction(rm)?.angle();
            dirs.insert(i + 1, (rm, tm));
        }

        let mut samples = Vec::with_capacity(dirs.len());
        let mut sigma = dirs[0].1;
        samples.push((dirs[0].0, sigma));
        for w in dirs.windows(2) {
            sigma += wrap_angle(w[1].1 - w[0].1);
            samples.push((w[1].0, sigma));
        }
        Ok(AngleLift { samples })
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn sigma_start(&self) -> f64 {
        self.samples[0].1
    }

    pub fn sigma_end(&self) -> f64 {
        self.samples[self.samples.len() - 1].1
    }

    /// Total turning in radians.
    pub fn total_turning(&self) -> f64 {
        self.sigma_end() - self.sigma_start()
    }

    /// Lift value at `r` by local re-evaluation relative to the nearest
    /// sample on the left (valid because per-step increments are < pi/2).
    pub fn sigma_at(&self, c: &ProfileCurve, r: f64) -> Result<f64> {
        let r = r.clamp(self.samples[0].0, self.samples[self.samples.len() - 1].0);
        let idx = self
            .samples
            .partition_point(|&(rs, _)| rs <= r)
            .saturating_sub(1);
        let (r0, s0) = self.samples[idx];
        let _ = r0;
        let theta = c.direction(r)?.angle();
        Ok(s0 + wrap_angle(theta - s0))
    }
}

/// Winding number `(sigma(b) - sigma(a)) / 2 pi` in units of full turns.
pub fn winding(c: &ProfileCurve) -> Result<f64> {
    Ok(AngleLift::build(c)?.total_turning() / TAU)
}

/// Sign classification of the contact density `<h, i h'>` on the
/// evaluation grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContactSign {
    Positive,
    Negative,
    Mixed,
}

/// Classify the sign of `r -> <h(r), i h'(r)>` over the interval. `Mixed`
/// means the density changes sign or vanishes at an interior grid point
/// beyond tolerance.
pub fn contact_sign(c: &ProfileCurve) -> Result<ContactSign> {
    let grid = c.sample_grid(512);
    let vals: Vec<f64> = grid
        .iter()
        .map(|&r| Ok(ipair(c.eval(r, 0)?, c.eval(r, 1)?)))
        .collect::<Result<Vec<_>>>()?;
    let sup = vals.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let tol = 1e-9 * sup.max(1e-300);
    let has_pos = vals.iter().any(|&v| v > tol);
    let has_neg = vals.iter().any(|&v| v < -tol);
    let interior_zero = vals[1..vals.len() - 1].iter().any(|&v| v.abs() <= tol);
    if (has_pos && has_neg) || interior_zero || (!has_pos && !has_neg) {
        Ok(ContactSign::Mixed)
    } else if has_pos {
        Ok(ContactSign::Positive)
    } else {
        Ok(ContactSign::Negative)
    }
}

/// Twisting / nowhere-constancy report for the slope function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistReport {
    /// True iff the slope makes one full clockwise and one full
    /// counterclockwise turn somewhere along the interval (the lift has
    /// both a drawdown and a drawup of at least 2 pi).
    pub twists: bool,
    /// True iff the lift is nonconstant beyond tolerance on every
    /// subinterval of length >= the window parameter.
    pub nowhere_constant: bool,
}

/// Compute the twisting report with the given constancy window.
pub fn twist_report(c: &ProfileCurve, window: f64) -> Result<TwistReport> {
    if window > c.span() {
        return Err(Error::domain(format!(
            "window {window} larger than curve interval length {}",
            c.span()
        )));
    }
    let lift = AngleLift::build(c)?;
    let samples = lift.samples();
    let angle_tol = 1e-9;

    // Full clockwise turn: some point lies >= 2 pi below a running max;
    // full counterclockwise turn: some point lies >= 2 pi above a running min.
    let mut run_max = f64::NEG_INFINITY;
    let mut run_min = f64::INFINITY;
    let mut cw = false;
    let mut ccw = false;
    for &(_, s) in samples {
        run_max = run_max.max(s);
        run_min = run_min.min(s);
        if run_max - s >= TAU - angle_tol {
            cw = true;
        }
        if s - run_min >= TAU - angle_tol {
            ccw = true;
        }
    }

    // Two-pointer scan for a subinterval of length >= window on which the
    // lift oscillates by at most const_tol; monotonic deques track the
    // running min/max of sigma over the current sample window.
    let const_tol = 1e-8;
    let mut nowhere_constant = true;
    let mut max_dq: std::collections::VecDeque<usize> = Default::default();
    let mut min_dq: std::collections::VecDeque<usize> = Default::default();
    let mut i = 0;
    for j in 0..samples.len() {
        let s = samples[j].1;
        while max_dq.back().is_some_and(|&k| samples[k].1 <= s) {
            max_dq.pop_back();
        }
        max_dq.push_back(j);
        while min_dq.back().is_some_and(|&k| samples[k].1 >= s) {
            min_dq.pop_back();
        }
        min_dq.push_back(j);
        while samples[max_dq[0]].1 - samples[min_dq[0]].1 > const_tol {
            if max_dq[0] == i {
                max_dq.pop_front();
            }
            if min_dq[0] == i {
                min_dq.pop_front();
            }
            i += 1;
        }
        if samples[j].0 - samples[i].0 >= window - 1e-12 * c.span() {
            nowhere_constant = false;
            break;
        }
    }

    Ok(TwistReport {
        twists: cw && ccw,
        nowhere_constant,
    })
}

/// Pointwise linear combination of curves sharing one interval. Hermite
/// nodes of the result are the union of the operands' node grids (named
/// operands contribute a uniform 128-segment grid).
pub fn combine(terms: &[(f64, &ProfileCurve)]) -> Result<ProfileCurve> {
    let Some(&(_, first)) = terms.first() else {
        return Err(Error::domain("combine needs at least one curve"));
    };
    let (a, b) = first.interval();
    let tol = 1e-12 * (b - a).max(1.0);
    for &(_, c) in terms {
        let (a2, b2) = c.interval();
        if (a2 - a).abs() > tol || (b2 - b).abs() > tol {
            return Err(Error::domain(format!(
                "combine: mismatched intervals [{a}, {b}] vs [{a2}, {b2}]"
            )));
        }
    }
    let mut grid: Vec<f64> = (0..=128).map(|i| a + (b - a) * i as f64 / 128.0).collect();
    for &(_, c) in terms {
        grid.extend(c.node_positions().into_iter().map(|r| r.clamp(a, b)));
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup_by(|x, y| (*x - *y).abs() < tol);
    let nodes = grid
        .into_iter()
        .map(|r| {
            let mut h = Vec2::ZERO;
            let mut dh = Vec2::ZERO;
            for &(coef, c) in terms {
                h = h + c.eval(r, 0)? * coef;
                dh = dh + c.eval(r, 1)? * coef;
            }
            Ok(HermiteNode { r, h, dh })
        })
        .collect::<Result<Vec<_>>>()?;
    ProfileCurve::hermite(nodes, 0.0)
}

// ---------------------------------------------------------------------------
// JSON schema (normative field names).

#[derive(Serialize, Deserialize)]
struct NodeJson {
    r: f64,
    h: [f64; 2],
    dh: [f64; 2],
}

#[derive(Serialize, Deserialize)]
struct CurveJson {
    interval: [f64; 2],
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    nodes: Option<Vec<NodeJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    params: Option<Vec<f64>>,
    eta: f64,
}

impl Serialize for ProfileCurve {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let json = match &self.rep {
            Rep::Hermite(nodes) => CurveJson {
                interval: [self.interval.0, self.interval.1],
                kind: "hermite".to_string(),
                nodes: Some(
                    nodes
                        .iter()
                        .map(|n| NodeJson {
                            r: n.r,
                            h: [n.h.x, n.h.y],
                            dh: [n.dh.x, n.dh.y],
                        })
                        .collect(),
                ),
                name: None,
                params: None,
                eta: self.eta,
            },
            Rep::Named(f) => CurveJson {
                interval: [self.interval.0, self.interval.1],
                kind: "named".to_string(),
                nodes: None,
                name: Some(f.name().to_string()),
                params: Some(f.params()),
                eta: self.eta,
            },
        };
        json.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProfileCurve {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        let json = CurveJson::deserialize(d)?;
        let interval = (json.interval[0], json.interval[1]);
        match json.kind.as_str() {
            "hermite" => {
                let nodes = json
                    .nodes
                    .ok_or_else(|| DeError::custom("hermite curve requires \"nodes\""))?
                    .into_iter()
                    .map(|n| HermiteNode {
                        r: n.r,
                        h: v2(n.h[0], n.h[1]),
                        dh: v2(n.dh[0], n.dh[1]),
                    })
                    .collect();
                let c = ProfileCurve::hermite(nodes, json.eta).map_err(DeError::custom)?;
                let (a, b) = c.interval();
                if (a - interval.0).abs() > 1e-12 || (b - interval.1).abs() > 1e-12 {
                    return Err(DeError::custom(
                        "\"interval\" does not match the Hermite node range",
                    ));
                }
                Ok(c)
            }
            "named" => {
                let name = json
                    .name
                    .ok_or_else(|| DeError::custom("named curve requires \"name\""))?;
                let params = json.params.unwrap_or_default();
                let fam = NamedCurve::from_name(&name, &params).map_err(DeError::custom)?;
                ProfileCurve::named(fam, interval, json.eta).map_err(DeError::custom)
            }
            k => Err(DeError::custom(format!("unknown curve kind '{k}'"))),
        }
    }
}
