//! Named example pairs and the classification of torus-invariant stable
//! Hamiltonian structures by binding signs and winding number.
//!
//! On the solid-torus-glued sphere the class of a pair is determined by
//! the signs of the curve's end behavior at the two binding circles and
//! by the winding number of its tangent direction after the ends are
//! deformed to canonical germs; on the three-torus only the winding
//! number remains. `is_homotopic` realizes equal invariants by an
//! explicit 33-sample stable homotopy.

use crate::curve::{self, AngleLift, ContactSign, HermiteNode, ProfileCurve};
use crate::error::{Error, Result};
use crate::geom::{ipair, v2, wrap_angle, Vec2};
use crate::homotopy::StableHomotopy;
use crate::num::{bisect, bump, smoothstep, smoothstep_deriv, BISECT_TOL};
use crate::shs::{self, ShsPair};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI, TAU};

/// A sign, serialized as `"+"` / `"-"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn of(x: f64) -> Sign {
        if x >= 0.0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// The ambient three-manifold determining which invariants apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Manifold {
    T3,
    S3,
}

/// Homotopy invariants of a pair: binding signs (sphere only) and
/// winding number of the standardized curve.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ClassInvariant {
    pub manifold: Manifold,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s0: Option<Sign>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s1: Option<Sign>,
    pub w: f64,
}

impl ClassInvariant {
    /// Equality of invariants (winding compared within 1e-6).
    pub fn same_class(&self, other: &ClassInvariant) -> bool {
        self.manifold == other.manifold
            && self.s0 == other.s0
            && self.s1 == other.s1
            && (self.w - other.w).abs() <= 1e-6 * self.w.abs().max(1.0)
    }
}

/// Names of the built-in example pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum NamedPair {
    /// The standard contact sphere `h = g = (r^2, 1 - r^2)`.
    StandardContact,
    /// A curve whose slope is nowhere constant and makes one full turn
    /// clockwise and one full turn counterclockwise; its kernel field is
    /// stabilizable but not contact.
    Twist,
    /// A sphere pair carrying an overtwisted disk: the curve agrees with
    /// the standard one near both ends, crosses the negative vertical
    /// axis once, and keeps `<h, i h'>` positive along the way.
    Overtwisted,
    /// A pair with a rational invariant torus of vanishing omega-energy,
    /// so the structure is not weakly tame.
    Nontame,
    /// Sphere pair realizing the class `(s0, s1, w)`.
    S3Canonical { s0: Sign, s1: Sign, w: i32 },
    /// Torus pair realizing winding `w`.
    T3Canonical { w: i32 },
}

/// Number of Hermite nodes used by the closed-form constructions.
const CATALOG_NODES: usize = 2049;

/// Build a curve from a tangent field `r -> (h', h'')` by cumulative
/// Simpson quadrature from `h(a) = h0`.
fn curve_from_tangent(
    interval: (f64, f64),
    h0: Vec2,
    f: &dyn Fn(f64) -> (Vec2, Vec2),
    n: usize,
) -> Result<ProfileCurve> {
    let (a, b) = interval;
    let mut nodes = Vec::with_capacity(n);
    let mut acc = h0;
    for j in 0..n {
        let r = a + (b - a) * j as f64 / (n - 1) as f64;
        if j > 0 {
            let r0 = a + (b - a) * (j - 1) as f64 / (n - 1) as f64;
            let m = 0.5 * (r0 + r);
            let (d0, _) = f(r0);
            let (dm, _) = f(m);
            let (d1, _) = f(r);
            acc = acc + (d0 + dm * 4.0 + d1) * ((r - r0) / 6.0);
        }
        let (dh, _) = f(r);
        nodes.push(HermiteNode { r, h: acc, dh });
    }
    ProfileCurve::hermite(nodes, 0.0)
}

fn construction_bug(name: &str, what: impl std::fmt::Display) -> Error {
    Error::numerical(format!("construction bug in `{name}`: {what}"))
}

/// Build a named pair and re-check its defining constraints.
pub fn make_named(name: NamedPair) -> Result<ShsPair> {
    let pair = match name {
        NamedPair::StandardContact => {
            let h = ProfileCurve::standard(1.0, (0.0, 1.0));
            ShsPair::new(h.clone(), h)?
        }
        NamedPair::Twist => make_twist()?,
        NamedPair::Overtwisted => make_overtwisted()?,
        NamedPair::Nontame => make_nontame()?,
        NamedPair::S3Canonical { s0, s1, w } => make_s3_canonical(s0, s1, w)?,
        NamedPair::T3Canonical { w } => make_t3_canonical(w)?,
    };
    let report = shs::verify(&pair)?;
    if !report.ok {
        return Err(construction_bug(
            &format!("{name:?}"),
            format!(
                "pair fails verification (residual {:.3e}, min pairing {:.3e})",
                report.residual_sup, report.min_pairing
            ),
        ));
    }
    Ok(pair)
}

/// Twist curve: unit speed, tangent angle `sigma(r) = -A sin^2(pi r)`
/// with `A = 2 pi + 0.2`, so the slope descends a bit more than a full
/// turn and climbs back. Starting at `(0, 1)` puts the rotation center
/// away from the origin, forcing `<h, i h'>` to change sign.
fn make_twist() -> Result<ShsPair> {
    let amp = TAU + 0.2;
    let sigma = |r: f64| -amp * (PI * r).sin().powi(2);
    let dsigma = |r: f64| -amp * PI * (2.0 * PI * r).sin();
    let f = |r: f64| -> (Vec2, Vec2) {
        let d = Vec2::from_angle(sigma(r));
        (d, d.rot90() * dsigma(r))
    };
    let h = curve_from_tangent((0.0, 1.0), v2(0.0, 1.0), &f, CATALOG_NODES)?;
    let g = crate::stabilize::special_stabilizer(&h, 1.0)?;
    let pair = ShsPair::new(h, g)?;

    let tw = curve::twist_report(&pair.h, 0.1)?;
    if !(tw.twists && tw.nowhere_constant) {
        return Err(construction_bug("twist", format!("{tw:?}")));
    }
    if curve::contact_sign(&pair.h)? != ContactSign::Mixed {
        return Err(construction_bug("twist", "contact sign is not mixed"));
    }
    Ok(pair)
}

/// Overtwisted-disk curve in polar form: radius of the standard curve
/// with an extra full clockwise turn of the position angle inserted on
/// `(eps0, r0)`, so the curve crosses the negative vertical axis at one
/// `r*` while `<h, i h'> > 0` throughout the interior.
fn make_overtwisted() -> Result<ShsPair> {
    let (eps0, r0, r1) = (0.1, 0.6, 0.8);
    let rho = |r: f64| -> (f64, f64) {
        let sq = r * r * r * r + (1.0 - r * r) * (1.0 - r * r);
        let v = sq.sqrt();
        (v, 2.0 * r * (2.0 * r * r - 1.0) / v)
    };
    let theta = |r: f64| -> (f64, f64) {
        let t_st = (1.0 - r * r).atan2(r * r);
        let dt_st = if r == 0.0 {
            0.0
        } else {
            -2.0 * r / (r * r * r * r + (1.0 - r * r) * (1.0 - r * r))
        };
        let u = (r - eps0) / (r0 - eps0);
        (
            t_st - TAU * smoothstep(u),
            dt_st - TAU * smoothstep_deriv(u.clamp(0.0, 1.0)) / (r0 - eps0),
        )
    };
    let n = CATALOG_NODES;
    let mut nodes = Vec::with_capacity(n);
    for j in 0..n {
        let r = j as f64 / (n - 1) as f64;
        let (p, dp) = rho(r);
        let (t, dt) = theta(r);
        let e = Vec2::from_angle(t);
        nodes.push(HermiteNode {
            r,
            h: e * p,
            dh: e * dp + e.rot90() * (p * dt),
        });
    }
    let h = ProfileCurve::hermite(nodes, 0.0)?;
    let pair = ShsPair::new(h.clone(), h.clone())?;

    // Re-checks: positivity of <h, i h'> on (0, r1]; the axis crossing.
    for j in 1..=512 {
        let r = r1 * j as f64 / 512.0;
        if ipair(h.eval(r, 0)?, h.eval(r, 1)?) <= 0.0 {
            return Err(construction_bug(
                "overtwisted",
                format!("<h, i h'> not positive at r = {r}"),
            ));
        }
    }
    let cross = |r: f64| theta(r).0 + FRAC_PI_2;
    let r_star = bisect(cross, 1e-6, r0, BISECT_TOL)
        .map_err(|e| construction_bug("overtwisted", format!("no axis crossing: {e}")))?;
    let at = h.eval(r_star, 0)?;
    if at.x.abs() > 1e-9 || at.y >= 0.0 {
        return Err(construction_bug(
            "overtwisted",
            format!("axis crossing check failed at r* = {r_star}: h = {at:?}"),
        ));
    }
    Ok(pair)
}

/// Non-tame pair: `h = (u, u + u^3)` with `u = r - 1/2`, so the curve
/// passes through the origin at `r* = 1/2` where its slope is the
/// rational direction `(1, 1)` — the corresponding invariant torus has
/// vanishing omega-energy.
fn make_nontame() -> Result<ShsPair> {
    let f = |r: f64| -> (Vec2, Vec2) {
        let u = r - 0.5;
        (v2(1.0, 1.0 + 3.0 * u * u), v2(0.0, 6.0 * u))
    };
    let h = curve_from_tangent((0.0, 1.0), v2(-0.5, -0.625), &f, 1025)?;
    let g = crate::stabilize::special_stabilizer(&h, 1.0)?;
    let pair = ShsPair::new(h, g)?;
    let orbit = shs::closed_orbit(&pair, 0.5, curve::DEFAULT_Q)?;
    if orbit.e_omega.abs() > 1e-9 {
        return Err(construction_bug(
            "nontame",
            format!("omega-energy at r* is {:.3e}", orbit.e_omega),
        ));
    }
    Ok(pair)
}

/// Canonical tangent angle at the left binding for sign `s0`.
fn canonical_angle_left(s0: Sign) -> f64 {
    match s0 {
        Sign::Plus => 0.0,
        Sign::Minus => PI,
    }
}

/// Canonical tangent angle at the right binding for sign `s1`.
fn canonical_angle_right(s1: Sign) -> f64 {
    match s1 {
        Sign::Plus => -FRAC_PI_2,
        Sign::Minus => FRAC_PI_2,
    }
}

/// Sphere pair realizing `(s0, s1, w)`: speed `4 r (1 - r)` vanishing
/// linearly at both bindings, tangent angle sweeping from the canonical
/// left angle to the canonical right angle plus `w` full turns, flat on
/// the end germs; the stabilizer is the rotated unit tangent.
fn make_s3_canonical(s0: Sign, s1: Sign, w: i32) -> Result<ShsPair> {
    let a0 = canonical_angle_left(s0);
    let a1 = canonical_angle_right(s1);
    let turn = wrap_angle(a1 - a0) + TAU * w as f64;
    let eps = 0.1;
    let sigma = move |r: f64| a0 + turn * smoothstep((r - eps) / (1.0 - 2.0 * eps));
    let dsigma = move |r: f64| {
        turn * smoothstep_deriv(((r - eps) / (1.0 - 2.0 * eps)).clamp(0.0, 1.0))
            / (1.0 - 2.0 * eps)
    };
    let f = move |r: f64| -> (Vec2, Vec2) {
        let v = 4.0 * r * (1.0 - r);
        let dv = 4.0 - 8.0 * r;
        let e = Vec2::from_angle(sigma(r));
        (e * v, e * dv + e.rot90() * (v * dsigma(r)))
    };
    let h = curve_from_tangent((0.0, 1.0), v2(1.0, 0.0), &f, CATALOG_NODES)?;
    let g = rotated_direction_stabilizer(&sigma, &dsigma, (0.0, 1.0))?;
    let pair = ShsPair::new(h, g)?;
    let inv = classify(&pair, Manifold::S3)?;
    let want = ClassInvariant {
        manifold: Manifold::S3,
        s0: Some(s0),
        s1: Some(s1),
        w: w as f64,
    };
    if !inv.same_class(&want) {
        return Err(construction_bug(
            "s3_canonical",
            format!("classifies as {inv:?}, wanted {want:?}"),
        ));
    }
    Ok(pair)
}

/// Torus pair realizing winding `w`: unit speed, tangent angle
/// `2 pi w r + 0.3 sin(2 pi r)` (the wiggle keeps the slope nonconstant
/// for `w = 0` without changing the winding).
fn make_t3_canonical(w: i32) -> Result<ShsPair> {
    let sigma = move |r: f64| TAU * w as f64 * r + 0.3 * (TAU * r).sin();
    let dsigma = move |r: f64| TAU * w as f64 + 0.3 * TAU * (TAU * r).cos();
    let f = move |r: f64| -> (Vec2, Vec2) {
        let e = Vec2::from_angle(sigma(r));
        (e, e.rot90() * dsigma(r))
    };
    let h = curve_from_tangent((0.0, 1.0), v2(1.5, 0.5), &f, CATALOG_NODES)?;
    let g = rotated_direction_stabilizer(&sigma, &dsigma, (0.0, 1.0))?;
    let pair = ShsPair::new(h, g)?;
    let inv = classify(&pair, Manifold::T3)?;
    if (inv.w - w as f64).abs() > 1e-6 {
        return Err(construction_bug(
            "t3_canonical",
            format!("winding is {} instead of {w}", inv.w),
        ));
    }
    Ok(pair)
}

/// The stabilizer `g = i e^{i sigma}` for a curve given by a tangent
/// angle `sigma`: perpendicularity is exact and the pairing equals the
/// curve speed.
fn rotated_direction_stabilizer(
    sigma: &dyn Fn(f64) -> f64,
    dsigma: &dyn Fn(f64) -> f64,
    interval: (f64, f64),
) -> Result<ProfileCurve> {
    let (a, b) = interval;
    let n = CATALOG_NODES;
    let mut nodes = Vec::with_capacity(n);
    for j in 0..n {
        let r = a + (b - a) * j as f64 / (n - 1) as f64;
        let e = Vec2::from_angle(sigma(r));
        nodes.push(HermiteNode {
            r,
            h: e.rot90(),
            dh: e * (-dsigma(r)),
        });
    }
    ProfileCurve::hermite(nodes, 0.0)
}

/// Relative offsets used to probe end limits.
const END_OFFSETS: [f64; 3] = [1e-2, 1e-3, 1e-4];

/// Binding sign at one end: the sign of `q(eps) = c(eps) / eps` where
/// `c` is the collapsing-circle component of `h'` at distance `eps` from
/// the end (`h_1'` at the left end, `-h_2'` at the right end). The limit
/// may be finite or infinite; compatibility only requires a stable sign
/// and a nondegenerate magnitude across the probe offsets.
fn end_sign(h: &ProfileCurve, left: bool) -> Result<Sign> {
    let (a, b) = h.interval();
    let span = b - a;
    let mut qs = Vec::new();
    let mut scale = 0.0_f64;
    for eps in END_OFFSETS {
        let r = if left {
            a + eps * span
        } else {
            b - eps * span
        };
        let d = h.eval(r, 1)?;
        let c = if left { d.x } else { -d.y };
        scale = scale.max(d.norm() / (eps * span));
        qs.push(c / (eps * span));
    }
    let which = if left { "left" } else { "right" };
    let sign = Sign::of(qs[0]);
    for &q in &qs {
        if !q.is_finite() || q.abs() < 1e-6 * scale.max(1e-12) || Sign::of(q) != sign {
            return Err(Error::domain(format!(
                "classification undefined: {which} end is not binding-compatible"
            )));
        }
    }
    Ok(sign)
}

/// Classify a pair by binding signs and standardized winding.
pub fn classify(pair: &ShsPair, manifold: Manifold) -> Result<ClassInvariant> {
    classify_with_eps(pair, manifold, 0.05)
}

/// [`classify`] with an explicit relative end-germ width for the winding
/// standardization (the result must not depend on it).
pub fn classify_with_eps(pair: &ShsPair, manifold: Manifold, eps: f64) -> Result<ClassInvariant> {
    let h = &pair.h;
    let (a, b) = h.interval();
    let span = b - a;
    match manifold {
        Manifold::T3 => {
            let da = h.eval(a, 1)?;
            let db = h.eval(b, 1)?;
            let scale = da.norm().max(db.norm());
            if (da - db).norm() > 1e-6 * scale.max(1.0) {
                return Err(Error::domain(
                    "classification undefined: h' is not periodic".to_string(),
                ));
            }
            let w = curve::winding(h)?;
            Ok(ClassInvariant {
                manifold,
                s0: None,
                s1: None,
                w,
            })
        }
        Manifold::S3 => {
            let s0 = end_sign(h, true)?;
            let s1 = end_sign(h, false)?;
            // Standardized winding: lift the tangent angle between the
            // end germs, then rotate each end to its canonical angle by
            // the shortest rotation; subtract the zero-winding turning.
            let lift = AngleLift::build(h)?;
            let sa = lift.sigma_at(h, a + eps * span)?;
            let sb = lift.sigma_at(h, b - eps * span)?;
            let c0 = canonical_angle_left(s0);
            let c1 = canonical_angle_right(s1);
            let total = wrap_angle(c1 - sb) + (sb - sa) + wrap_angle(sa - c0);
            let w = (total - wrap_angle(c1 - c0)) / TAU;
            Ok(ClassInvariant {
                manifold,
                s0: Some(s0),
                s1: Some(s1),
                w,
            })
        }
    }
}

/// Result of [`is_homotopic`].
#[derive(Debug)]
pub enum HomotopyVerdict {
    Yes(Box<StableHomotopy>),
    No(String),
}

/// Number of samples in a homotopy witness.
const WITNESS_SAMPLES: usize = 33;

/// Decide whether two pairs are stably homotopic; equal invariants are
/// certified by an explicit witness homotopy.
pub fn is_homotopic(a: &ShsPair, b: &ShsPair, manifold: Manifold) -> Result<HomotopyVerdict> {
    let ia = classify(a, manifold)?;
    let ib = classify(b, manifold)?;
    if !ia.same_class(&ib) {
        return Ok(HomotopyVerdict::No(format!(
            "invariants differ: {} vs {}",
            describe(&ia),
            describe(&ib)
        )));
    }
    let (a0, b0) = a.interval();
    let (a1, b1) = b.interval();
    let tol = 1e-9 * (b0 - a0).max(1.0);
    if (a0 - a1).abs() > tol || (b0 - b1).abs() > tol {
        return Err(Error::domain(
            "pairs must share one parameter interval".to_string(),
        ));
    }
    let witness = build_witness(a, b).map_err(|e| {
        Error::numerical(format!(
            "internal error: witness construction failed despite equal invariants ({e})"
        ))
    })?;
    Ok(HomotopyVerdict::Yes(Box::new(witness)))
}

fn describe(inv: &ClassInvariant) -> String {
    match (inv.s0, inv.s1) {
        (Some(s0), Some(s1)) => format!("({s0}, {s1}, w = {})", inv.w),
        _ => format!("(w = {})", inv.w),
    }
}

/// Scalar multiplier of a verifying pair: `rho = <g', h'> / |h'|^2`
/// (perpendicularity forces `g'` parallel to `h'` up to the residual
/// tolerance).
fn multiplier_of(pair: &ShsPair, r: f64) -> Result<f64> {
    let dg = pair.g.eval(r, 1)?;
    let dh = pair.h.eval(r, 1)?;
    let floor = pair.h.immersion_floor();
    Ok(dg.dot(dh) / dh.norm_sq().max(floor * floor))
}

/// The stabilizer `p + Int rho h'` as a Hermite curve on the grid of `h`.
fn integrated_stabilizer(
    h: &ProfileCurve,
    p: Vec2,
    rho: &dyn Fn(f64) -> Result<f64>,
) -> Result<ProfileCurve> {
    let grid = h.sample_grid(1025);
    let mut nodes = Vec::with_capacity(grid.len());
    let mut acc = p;
    let mut prev: Option<f64> = None;
    for r in grid {
        if let Some(r0) = prev {
            let m = 0.5 * (r0 + r);
            let f0 = h.eval(r0, 1)? * rho(r0)?;
            let fm = h.eval(m, 1)? * rho(m)?;
            let f1 = h.eval(r, 1)? * rho(r)?;
            acc = acc + (f0 + fm * 4.0 + f1) * ((r - r0) / 6.0);
        }
        nodes.push(HermiteNode {
            r,
            h: acc,
            dh: h.eval(r, 1)? * rho(r)?,
        });
        prev = Some(r);
    }
    ProfileCurve::hermite(nodes, 0.0)
}

/// Witness homotopy between pairs with equal invariants.
///
/// The 33 samples alternate two exactly-verification-preserving moves:
/// stabilizer moves (the curve fixed, the stabilizer a convex
/// combination of two stabilizers of it) and curve moves (two curves
/// sharing one scalar multiplier and one base point, so every convex
/// combination satisfies the perpendicularity equation identically).
/// The endpoints are the given pairs themselves; the samples adjacent to
/// them replace each stabilizer by its integrated-multiplier projection.
fn build_witness(a: &ShsPair, b: &ShsPair) -> Result<StableHomotopy> {
    let stages = (WITNESS_SAMPLES - 3) / 2; // curve moves
    let (ra, rb) = a.interval();
    let span = rb - ra;
    let mut scale = 0.0_f64;
    for j in 0..=128 {
        let r = ra + span * j as f64 / 128.0;
        scale = scale.max(a.h.eval(r, 0)?.norm()).max(b.h.eval(r, 0)?.norm());
    }
    let pa = a.g.eval(ra, 0)?;
    let pb = b.g.eval(ra, 0)?;

    let mut last = Error::numerical("no witness attempt succeeded".to_string());
    for attempt in 0..6u32 {
        let amp = attempt as f64 * 0.01 * scale.max(1e-6);
        let xi = witness_perturbation(&a.h, amp)?;
        let stage = |k: usize| -> Result<ProfileCurve> {
            let v = k as f64 / stages as f64;
            curve::combine(&[(1.0 - v, &a.h), (v, &b.h), (v * (1.0 - v), &xi)])
        };
        let rho_at = |k: usize, r: f64| -> Result<f64> {
            let v = k as f64 / stages as f64;
            Ok((1.0 - v) * multiplier_of(a, r)? + v * multiplier_of(b, r)?)
        };
        let p_at = |k: usize| -> Vec2 {
            let v = k as f64 / stages as f64;
            pa * (1.0 - v) + pb * v
        };

        let result = (|| -> Result<StableHomotopy> {
            let n = WITNESS_SAMPLES;
            let t_of = |j: usize| j as f64 / (n - 1) as f64;
            let mut samples = Vec::with_capacity(n);
            samples.push((t_of(0), a.clone()));
            let k0 = stage(0)?;
            samples.push((
                t_of(1),
                ShsPair::new(
                    k0.clone(),
                    integrated_stabilizer(&k0, p_at(0), &|r| rho_at(0, r))?,
                )?,
            ));
            for k in 0..stages {
                let next = stage(k + 1)?;
                samples.push((
                    t_of(2 * k + 2),
                    ShsPair::new(
                        next.clone(),
                        integrated_stabilizer(&next, p_at(k), &|r| rho_at(k, r))?,
                    )?,
                ));
                samples.push((
                    t_of(2 * k + 3),
                    ShsPair::new(
                        next.clone(),
                        integrated_stabilizer(&next, p_at(k + 1), &|r| rho_at(k + 1, r))?,
                    )?,
                ));
            }
            samples.push((t_of(n - 1), b.clone()));
            StableHomotopy::from_samples(samples)
        })();
        match result {
            Ok(w) => return Ok(w),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// Small interior two-bump perturbation keeping straight-line curve
/// interpolation immersed.
fn witness_perturbation(h: &ProfileCurve, amp: f64) -> Result<ProfileCurve> {
    let (a, b) = h.interval();
    let span = b - a;
    let grid = h.sample_grid(257);
    let mut nodes = Vec::with_capacity(grid.len());
    for r in grid {
        let u1 = bump(r, a + 0.35 * span, 0.2 * span);
        let u2 = bump(r, a + 0.68 * span, 0.2 * span);
        let du1 = bump_deriv(r, a + 0.35 * span, 0.2 * span);
        let du2 = bump_deriv(r, a + 0.68 * span, 0.2 * span);
        nodes.push(HermiteNode {
            r,
            h: v2(amp * u1, -amp * u2),
            dh: v2(amp * du1, -amp * du2),
        });
    }
    ProfileCurve::hermite(nodes, 0.0)
}

fn bump_deriv(r: f64, center: f64, half_width: f64) -> f64 {
    let u = (r - center) / half_width;
    if u.abs() >= 1.0 {
        return 0.0;
    }
    let w = 1.0 - u * u;
    -6.0 * u * w * w / half_width
}
