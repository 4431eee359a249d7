//! Constructive synthesis of stabilizing curves `g` for a given immersion
//! `h`: the special unit-normal solution, constant-slope boundary matching,
//! boundary-value synthesis via a two-bump correction of the endpoint
//! defect, homotopy stabilization, and same-winding connecting homotopies.
//!
//! The workhorse ansatz is `g' = rho(r) h'` for a scalar multiplier `rho`:
//! such a `g` satisfies the perpendicularity equation exactly, and the
//! residual two-dimensional endpoint defect is absorbed by a 2x2 solve
//! against two interior bump functions.

use crate::curve::{self, AngleLift, HermiteNode, ProfileCurve};
use crate::error::{Error, Result};
use crate::geom::{ipair, v2, Vec2};
use crate::homotopy::StableHomotopy;
use crate::num::{bump, integrate_vec2, smoothstep, smoothstep_deriv, solve2, QUAD_TOL};
use crate::shs::{verify, ShsPair};

/// Node count for synthesized stabilizer curves.
const SYNTH_NODES: usize = 1025;
/// Condition-number ceiling for the 2x2 correction system.
const GRAM_COND_MAX: f64 = 1e8;
/// Number of time samples used by [`stabilize_homotopy`] and
/// [`connect_same_winding`].
pub const HOMOTOPY_SAMPLES: usize = 33;

/// Unit tangent of `h` and its derivative at `r`.
fn unit_tangent(h: &ProfileCurve, r: f64) -> Result<(Vec2, Vec2)> {
    let dh = h.eval(r, 1)?;
    let ddh = h.eval(r, 2)?;
    let n = dh.norm();
    if n < h.immersion_floor() {
        return Err(Error::domain(format!("immersion violation at r = {r}")));
    }
    let t = dh * (1.0 / n);
    let tp = (ddh - t * ddh.dot(t)) * (1.0 / n);
    Ok((t, tp))
}

/// The special stabilizer `g = c * i * h' / |h'|` (the rotated unit
/// tangent), sampled as a dense Hermite curve.
pub fn special_stabilizer(h: &ProfileCurve, c: f64) -> Result<ProfileCurve> {
    if c <= 0.0 {
        return Err(Error::domain("special stabilizer scale must be positive"));
    }
    let grid = h.sample_grid(SYNTH_NODES);
    let mut nodes = Vec::with_capacity(grid.len());
    for r in grid {
        let (t, tp) = unit_tangent(h, r)?;
        nodes.push(HermiteNode {
            r,
            h: t.rot90() * c,
            dh: tp.rot90() * c,
        });
    }
    ProfileCurve::hermite(nodes, 0.0)
}

/// Boundary germs for stabilizer synthesis: curve germs on
/// `[a, a+eps]` and `[b-eps, b]` that already stabilize `h` there.
#[derive(Debug, Clone)]
pub struct BoundaryData {
    pub left: ProfileCurve,
    pub right: ProfileCurve,
    pub eps: f64,
}

impl BoundaryData {
    pub fn new(left: ProfileCurve, right: ProfileCurve) -> Result<BoundaryData> {
        let el = left.span();
        let er = right.span();
        if (el - er).abs() > 1e-9 * el.max(er) {
            return Err(Error::domain(format!(
                "boundary germs must have equal width: {el} vs {er}"
            )));
        }
        Ok(BoundaryData {
            left,
            right,
            eps: el,
        })
    }

    /// Germs cut from the special stabilizer of `h` with scale `c`.
    pub fn special(h: &ProfileCurve, c: f64, eps: f64) -> Result<BoundaryData> {
        let (a, b) = h.interval();
        if !(eps > 0.0 && 2.0 * eps < b - a) {
            return Err(Error::domain("germ width must satisfy 0 < eps < (b-a)/2"));
        }
        let g = special_stabilizer(h, c)?;
        BoundaryData::new(g.restrict(a, a + eps)?, g.restrict(b - eps, b)?)
    }

    /// Check the germ invariant: each germ, paired with `h`, satisfies the
    /// perpendicularity equation on its subinterval.
    pub fn validate(&self, h: &ProfileCurve) -> Result<()> {
        let (a, b) = h.interval();
        let (la, _) = self.left.interval();
        let (_, rb) = self.right.interval();
        let tol = 1e-9 * (b - a).max(1.0);
        if (la - a).abs() > tol || (rb - b).abs() > tol {
            return Err(Error::domain(
                "boundary germs must sit at the ends of the curve interval".to_string(),
            ));
        }
        for germ in [&self.left, &self.right] {
            let (ga, gb) = germ.interval();
            let mut resid = 0.0_f64;
            let mut sup_dg = 0.0_f64;
            let mut sup_dh = 0.0_f64;
            for &r in &germ.sample_grid(64) {
                let r = r.clamp(ga, gb);
                let dg = germ.eval(r, 1)?;
                let dh = h.eval(r, 1)?;
                resid = resid.max(ipair(dg, dh).abs());
                sup_dg = sup_dg.max(dg.norm());
                sup_dh = sup_dh.max(dh.norm());
            }
            if resid > 1e-6 * sup_dh * sup_dg.max(sup_dh) {
                return Err(Error::domain(format!(
                    "boundary germ on [{ga}, {gb}] does not stabilize the curve (residual {resid:.3e})"
                )));
            }
        }
        Ok(())
    }
}

/// Pairing of a germ against the fixed end direction `k`; the germ
/// invariant forces this to be constant on the germ.
fn germ_level(germ: &ProfileCurve, k: Vec2) -> Result<f64> {
    let (ga, gb) = germ.interval();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &r in &germ.sample_grid(64) {
        let c = ipair(germ.eval(r.clamp(ga, gb), 0)?, k);
        lo = lo.min(c);
        hi = hi.max(c);
    }
    if hi - lo > 1e-6 * (1.0 + hi.abs().max(lo.abs())) {
        return Err(Error::domain(format!(
            "germ pairing against the end direction is not constant ({lo} .. {hi})"
        )));
    }
    Ok(0.5 * (lo + hi))
}

/// Stabilizer extension for curves whose slope is constant on both
/// boundary germs: `g = (1 - rho) gbar + rho * c * i h'/|h'|`, equal to
/// the germs on `[a, a+delta]` and `[b-delta, b]`.
///
/// Fails with an obstruction when the two germ levels `c_minus`, `c_plus`
/// disagree — the necessary condition for constant-slope stabilization.
pub fn constant_slope_stabilizer(
    h: &ProfileCurve,
    bd: &BoundaryData,
    delta: f64,
) -> Result<ProfileCurve> {
    let (a, b) = h.interval();
    let eps = bd.eps;
    if !(delta > 0.0 && delta < eps) {
        return Err(Error::domain("need 0 < delta < germ width"));
    }
    bd.validate(h)?;
    // Constant slope on each germ.
    for (ga, gb) in [(a, a + eps), (b - eps, b)] {
        let k0 = h.direction(ga.max(a) + 1e-12 * (b - a))?;
        for j in 0..=16 {
            let r = ga + (gb - ga) * j as f64 / 16.0;
            let k = h.direction(r.clamp(a, b))?;
            if (1.0 - k.dot(k0)).abs() > 1e-9 {
                return Err(Error::domain(format!(
                    "slope is not constant on the boundary germ near r = {r}"
                )));
            }
        }
    }
    let k_minus = h.direction(a)?;
    let k_plus = h.direction(b)?;
    let c_minus = germ_level(&bd.left, k_minus)?;
    let c_plus = germ_level(&bd.right, k_plus)?;
    let scale = 1.0_f64.max(c_minus.abs()).max(c_plus.abs());
    if (c_minus - c_plus).abs() > 1e-9 * scale {
        return Err(Error::obstruction(format!(
            "constant-slope obstruction: boundary levels differ (c_minus = {c_minus}, c_plus = {c_plus})"
        )));
    }
    let c = 0.5 * (c_minus + c_plus);
    if c <= 0.0 {
        return Err(Error::domain(
            "boundary germs have nonpositive pairing level; no positive stabilizer".to_string(),
        ));
    }

    // Cutoff: 0 on [a, a+delta] and [b-delta, b], 1 on [a+eps, b-eps],
    // quintic smoothstep transitions inside the germs.
    let w = eps - delta;
    let rho = |r: f64| -> (f64, f64) {
        if r < a + eps {
            (
                smoothstep((r - a - delta) / w),
                smoothstep_deriv((r - a - delta) / w) / w,
            )
        } else if r > b - eps {
            (
                smoothstep((b - delta - r) / w),
                -smoothstep_deriv((b - delta - r) / w) / w,
            )
        } else {
            (1.0, 0.0)
        }
    };

    let mut grid = h.sample_grid(SYNTH_NODES);
    grid.extend([a + delta, a + eps, b - eps, b - delta]);
    grid.extend(bd.left.node_positions());
    grid.extend(bd.right.node_positions());
    grid.sort_by(f64::total_cmp);
    grid.dedup_by(|x, y| (*x - *y).abs() < 1e-13 * (b - a));

    let mut nodes = Vec::with_capacity(grid.len());
    for r in grid {
        let (p, dp) = rho(r);
        let (t, tp) = unit_tangent(h, r)?;
        let special = t.rot90() * c;
        let dspecial = tp.rot90() * c;
        let (gbar, dgbar) = if p < 1.0 {
            let germ = if r < 0.5 * (a + b) {
                &bd.left
            } else {
                &bd.right
            };
            let (ga, gb) = germ.interval();
            let rc = r.clamp(ga, gb);
            (germ.eval(rc, 0)?, germ.eval(rc, 1)?)
        } else {
            (Vec2::ZERO, Vec2::ZERO)
        };
        nodes.push(HermiteNode {
            r,
            h: gbar * (1.0 - p) + special * p,
            dh: dgbar * (1.0 - p) + dspecial * p + (special - gbar) * dp,
        });
    }
    ProfileCurve::hermite(nodes, 0.0)
}

/// Two smooth bumps used to absorb the two-dimensional endpoint defect of
/// the integrated multiplier ansatz `g' = rho h'`.
#[derive(Debug, Clone, Copy)]
pub struct CorrectionBasis {
    pub centers: [f64; 2],
    pub half_width: f64,
}

impl CorrectionBasis {
    /// Pick the two interior points of largest slope-derivative magnitude
    /// (separated by at least 20% of the interval); bump widths cover 10%
    /// of the interval each. `skip` shifts to the next-best candidates.
    pub fn select(h: &ProfileCurve, lo: f64, hi: f64, skip: usize) -> Result<CorrectionBasis> {
        let (a, b) = h.interval();
        let half_width = 0.05 * (b - a);
        let clo = lo + half_width;
        let chi = hi - half_width;
        if chi <= clo {
            return Err(Error::domain(
                "interior region too narrow for correction bumps",
            ));
        }
        let lift = AngleLift::build(h)?;
        // Slope-derivative magnitude by central differences of the lift.
        let n = 256;
        let dr = (chi - clo) / n as f64;
        let mut cand: Vec<(f64, f64)> = Vec::new();
        for j in 0..=n {
            let r = clo + dr * j as f64;
            let r0 = (r - 0.5 * dr).max(a);
            let r1 = (r + 0.5 * dr).min(b);
            let s0 = lift.sigma_at(h, r0)?;
            let s1 = lift.sigma_at(h, r1)?;
            cand.push((r, ((s1 - s0) / (r1 - r0)).abs()));
        }
        cand.sort_by(|x, y| y.1.total_cmp(&x.1));
        let sep = 0.2 * (b - a);
        let mut centers = Vec::new();
        let mut skipped = 0;
        for (r, _) in cand {
            if centers.iter().any(|&c: &f64| (c - r).abs() < sep) {
                continue;
            }
            if skipped < skip {
                skipped += 1;
                continue;
            }
            centers.push(r);
            if centers.len() == 2 {
                break;
            }
        }
        if centers.len() < 2 {
            return Err(Error::numerical(
                "could not place two separated correction bumps".to_string(),
            ));
        }
        Ok(CorrectionBasis {
            centers: [centers[0], centers[1]],
            half_width,
        })
    }

    fn eval(&self, i: usize, r: f64) -> f64 {
        bump(r, self.centers[i], self.half_width)
    }

    /// Gram columns `L_i = Int sigma_i(s) h'(s) ds`.
    pub fn gram(&self, h: &ProfileCurve) -> Result<[Vec2; 2]> {
        let mut out = [Vec2::ZERO; 2];
        for (i, slot) in out.iter_mut().enumerate() {
            let (a, b) = h.interval();
            let lo = (self.centers[i] - self.half_width).max(a);
            let hi = (self.centers[i] + self.half_width).min(b);
            *slot = integrate_vec2(|r| h.eval(r, 1).unwrap() * self.eval(i, r), lo, hi, QUAD_TOL)?;
        }
        Ok(out)
    }
}

/// Interior slope variation (radians) of `h` on `[lo, hi]`.
pub(crate) fn slope_variation(h: &ProfileCurve, lo: f64, hi: f64) -> Result<f64> {
    let lift = AngleLift::build(h)?;
    let mut smin = f64::INFINITY;
    let mut smax = f64::NEG_INFINITY;
    for j in 0..=128 {
        let r = lo + (hi - lo) * j as f64 / 128.0;
        let s = lift.sigma_at(h, r)?;
        smin = smin.min(s);
        smax = smax.max(s);
    }
    Ok(smax - smin)
}

/// Multiplier of a germ: `rho = <gbar', h'> / |h'|^2` (the germ equation
/// forces `gbar'` parallel to `h'`).
fn germ_multiplier(germ: &ProfileCurve, h: &ProfileCurve, r: f64) -> Result<f64> {
    let (ga, gb) = germ.interval();
    let dg = germ.eval(r.clamp(ga, gb), 1)?;
    let dh = h.eval(r, 1)?;
    Ok(dg.dot(dh) / dh.norm_sq().max(1e-300))
}

/// Cumulative Simpson integration of `f` between consecutive grid nodes.
fn cumulative(grid: &[f64], mut f: impl FnMut(f64) -> Vec2, start: Vec2) -> Vec<Vec2> {
    let mut out = Vec::with_capacity(grid.len());
    let mut acc = start;
    out.push(acc);
    for w in grid.windows(2) {
        let (r0, r1) = (w[0], w[1]);
        let m = 0.5 * (r0 + r1);
        acc = acc + (f(r0) + f(m) * 4.0 + f(r1)) * ((r1 - r0) / 6.0);
        out.push(acc);
    }
    out
}

/// A solved multiplier: germ multipliers at the junctions, the smooth
/// blend between them, and the two bump coefficients fixing the endpoint
/// defect. Two curves sharing one ansatz interpolate linearly through
/// exactly-verifying pairs.
#[derive(Debug, Clone, Copy)]
pub struct MultiplierAnsatz {
    rl: f64,
    rr: f64,
    rho_l: f64,
    rho_r: f64,
    u: Vec2,
    basis: CorrectionBasis,
}

impl MultiplierAnsatz {
    /// Value on the middle region `[rl, rr]`.
    fn eval_mid(&self, r: f64) -> f64 {
        let t = (r - self.rl) / (self.rr - self.rl);
        self.rho_l
            + (self.rho_r - self.rho_l) * smoothstep(t)
            + self.u.x * self.basis.eval(0, r)
            + self.u.y * self.basis.eval(1, r)
    }
}

/// Solve the endpoint-defect system for the multiplier ansatz on `h`.
pub fn solve_multiplier(
    h: &ProfileCurve,
    bd: &BoundaryData,
    basis: &CorrectionBasis,
) -> Result<MultiplierAnsatz> {
    let (a, b) = h.interval();
    let (rl, rr) = (a + bd.eps, b - bd.eps);
    let gram = basis.gram(h)?;
    let rho_l = germ_multiplier(&bd.left, h, rl)?;
    let rho_r = germ_multiplier(&bd.right, h, rr)?;
    let base = |r: f64| -> f64 {
        let t = (r - rl) / (rr - rl);
        rho_l + (rho_r - rho_l) * smoothstep(t)
    };
    let g_l = bd.left.eval(rl, 0)?;
    let g_r = bd.right.eval(rr, 0)?;
    let base_end = g_l + integrate_vec2(|r| h.eval(r, 1).unwrap() * base(r), rl, rr, QUAD_TOL)?;
    let (u, cond) = solve2(gram[0], gram[1], g_r - base_end)?;
    if cond > GRAM_COND_MAX {
        return Err(Error::numerical(format!(
            "correction basis is ill-conditioned (cond = {cond:.3e})"
        )));
    }
    Ok(MultiplierAnsatz {
        rl,
        rr,
        rho_l,
        rho_r,
        u,
        basis: *basis,
    })
}

/// Assemble the stabilizer curve of a multiplier ansatz on `h`.
///
/// With `snap_right` the nodes on the right germ take the exact germ data
/// (the defect solve makes the junction continuous up to quadrature
/// tolerance); without it the integration continues through the right
/// germ with the germ's own multiplier, yielding a smooth curve parallel
/// to the germ (used for intermediate samples of connecting homotopies,
/// where the ansatz of the previous stage is applied to the next curve).
pub fn apply_multiplier(
    h: &ProfileCurve,
    bd: &BoundaryData,
    m: &MultiplierAnsatz,
    snap_right: bool,
) -> Result<ProfileCurve> {
    let (a, b) = h.interval();
    let (rl, rr) = (m.rl, m.rr);
    let mut grid = h.sample_grid(SYNTH_NODES);
    grid.extend([rl, rr]);
    grid.extend(bd.left.node_positions());
    grid.extend(bd.right.node_positions());
    grid.sort_by(f64::total_cmp);
    grid.dedup_by(|x, y| (*x - *y).abs() < 1e-13 * (b - a));

    let rho = |r: f64| -> Result<f64> {
        if r < rl {
            germ_multiplier(&bd.left, h, r)
        } else if r > rr {
            germ_multiplier(&bd.right, h, r)
        } else {
            Ok(m.eval_mid(r))
        }
    };
    let hi = if snap_right { rr } else { b };
    let mid: Vec<f64> = grid
        .iter()
        .copied()
        .filter(|&r| r >= rl && r <= hi)
        .collect();
    let start = bd.left.eval(rl, 0)?;
    let values = cumulative(&mid, |r| h.eval(r, 1).unwrap() * rho(r).unwrap(), start);

    let mut nodes = Vec::with_capacity(grid.len());
    let mut k = 0usize;
    for r in grid {
        let node = if r < rl {
            HermiteNode {
                r,
                h: bd.left.eval(r, 0)?,
                dh: bd.left.eval(r, 1)?,
            }
        } else if r > hi {
            HermiteNode {
                r,
                h: bd.right.eval(r, 0)?,
                dh: bd.right.eval(r, 1)?,
            }
        } else {
            let v = values[k];
            k += 1;
            let v = if r == rl {
                start
            } else if snap_right && r == rr {
                bd.right.eval(rr, 0)?
            } else {
                v
            };
            HermiteNode {
                r,
                h: v,
                dh: h.eval(r, 1)? * rho(r)?,
            }
        };
        nodes.push(node);
    }
    ProfileCurve::hermite(nodes, 0.0)
}

/// Synthesize a global stabilizer matching the boundary germs, for curves
/// with nonconstant interior slope.
pub fn boundary_value_stabilizer(h: &ProfileCurve, bd: &BoundaryData) -> Result<ProfileCurve> {
    bd.validate(h)?;
    let (a, b) = h.interval();
    let (rl, rr) = (a + bd.eps, b - bd.eps);
    if slope_variation(h, rl, rr)? < 1e-6 {
        return Err(Error::domain(
            "not synthesizable: slope is constant on the interior (the multiplier ansatz has no leverage there)"
                .to_string(),
        ));
    }
    let mut last = None;
    for skip in 0..2 {
        let basis = CorrectionBasis::select(h, rl, rr, skip)?;
        match synthesize_with(h, bd, &basis) {
            Ok(g) => return Ok(g),
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap())
}

/// [`boundary_value_stabilizer`] with an explicitly chosen correction
/// basis (used to keep the basis fixed across a time window).
pub fn synthesize_with(
    h: &ProfileCurve,
    bd: &BoundaryData,
    basis: &CorrectionBasis,
) -> Result<ProfileCurve> {
    let m = solve_multiplier(h, bd, basis)?;
    let g = apply_multiplier(h, bd, &m, true)?;
    let report = verify(&ShsPair::new(h.clone(), g.clone())?)?;
    if report.ok {
        return Ok(g);
    }
    if report.min_pairing > 0.0 {
        return Err(Error::numerical(format!(
            "synthesized stabilizer misses the residual bound ({:.3e})",
            report.residual_sup
        )));
    }
    piecewise_fallback(h, bd, basis)
}

/// Fallback multiplier: two mollified plateaus solving the endpoint
/// equation directly, then a final bump correction for the mollification
/// defect.
fn piecewise_fallback(
    h: &ProfileCurve,
    bd: &BoundaryData,
    basis: &CorrectionBasis,
) -> Result<ProfileCurve> {
    let (a, b) = h.interval();
    let (rl, rr) = (a + bd.eps, b - bd.eps);
    let gram = basis.gram(h)?;
    let g_l = bd.left.eval(rl, 0)?;
    let g_r = bd.right.eval(rr, 0)?;
    let delta = g_r - g_l;
    let rho_l = germ_multiplier(&bd.left, h, rl)?;
    let rho_r = germ_multiplier(&bd.right, h, rr)?;
    let w = bd.eps / 4.0;

    let mut last = Error::numerical("no usable plateau split".to_string());
    for frac in [0.5, 0.35, 0.65, 0.25, 0.75] {
        let m = rl + (rr - rl) * frac;
        let i0 = integrate_vec2(|r| h.eval(r, 1).unwrap(), rl, m, QUAD_TOL)?;
        let i1 = integrate_vec2(|r| h.eval(r, 1).unwrap(), m, rr, QUAD_TOL)?;
        let Ok((s, cond)) = solve2(i0, i1, delta) else {
            continue;
        };
        if cond > GRAM_COND_MAX {
            continue;
        }
        // Mollified two-plateau multiplier matching the germ multipliers
        // at the junctions.
        let rho0 = move |r: f64| -> f64 {
            let plateau = s.x + (s.y - s.x) * smoothstep((r - (m - w)) / (2.0 * w));
            let rise = smoothstep((r - rl) / w) * smoothstep((rr - r) / w);
            let germ_side = if r < m { rho_l } else { rho_r };
            germ_side + (plateau - germ_side) * rise
        };
        let end0 = g_l + integrate_vec2(|r| h.eval(r, 1).unwrap() * rho0(r), rl, rr, QUAD_TOL)?;
        let (u, cond2) = solve2(gram[0], gram[1], g_r - end0)?;
        if cond2 > GRAM_COND_MAX {
            continue;
        }
        let rho = move |r: f64| rho0(r) + u.x * basis.eval(0, r) + u.y * basis.eval(1, r);
        let g = assemble_explicit(h, bd, &rho)?;
        let report = verify(&ShsPair::new(h.clone(), g.clone())?)?;
        if report.ok {
            return Ok(g);
        }
        last = Error::numerical(format!(
            "fallback stabilizer fails verification (residual {:.3e}, min pairing {:.3e})",
            report.residual_sup, report.min_pairing
        ));
    }
    Err(last)
}

/// Assemble a stabilizer from an explicit multiplier function on the
/// middle region, with germ data on both germs.
fn assemble_explicit(
    h: &ProfileCurve,
    bd: &BoundaryData,
    rho: &dyn Fn(f64) -> f64,
) -> Result<ProfileCurve> {
    let (a, b) = h.interval();
    let (rl, rr) = (a + bd.eps, b - bd.eps);
    let mut grid = h.sample_grid(SYNTH_NODES);
    grid.extend([rl, rr]);
    grid.extend(bd.left.node_positions());
    grid.extend(bd.right.node_positions());
    grid.sort_by(f64::total_cmp);
    grid.dedup_by(|x, y| (*x - *y).abs() < 1e-13 * (b - a));

    let mid: Vec<f64> = grid
        .iter()
        .copied()
        .filter(|&r| r >= rl && r <= rr)
        .collect();
    let start = bd.left.eval(rl, 0)?;
    let values = cumulative(&mid, |r| h.eval(r, 1).unwrap() * rho(r), start);

    let mut nodes = Vec::with_capacity(grid.len());
    let mut k = 0usize;
    for r in grid {
        let node = if r < rl {
            HermiteNode {
                r,
                h: bd.left.eval(r, 0)?,
                dh: bd.left.eval(r, 1)?,
            }
        } else if r > rr {
            HermiteNode {
                r,
                h: bd.right.eval(r, 0)?,
                dh: bd.right.eval(r, 1)?,
            }
        } else {
            let v = values[k];
            k += 1;
            let v = if r == rl {
                start
            } else if r == rr {
                bd.right.eval(rr, 0)?
            } else {
                v
            };
            HermiteNode {
                r,
                h: v,
                dh: h.eval(r, 1)? * rho(r),
            }
        };
        nodes.push(node);
    }
    ProfileCurve::hermite(nodes, 0.0)
}

/// Stabilize a time family of curves: per-time solves on a 33-sample
/// grid, with the correction basis frozen per 3-sample window and the
/// window solutions blended by a partition of unity (convex combinations
/// of stabilizers with common germs remain stabilizers).
pub fn stabilize_homotopy(
    hs: &dyn Fn(f64) -> Result<ProfileCurve>,
    bds: &dyn Fn(f64) -> Result<BoundaryData>,
) -> Result<Vec<(f64, ProfileCurve)>> {
    let n = HOMOTOPY_SAMPLES;
    let ts: Vec<f64> = (0..n).map(|j| j as f64 / (n - 1) as f64).collect();
    let curves: Vec<ProfileCurve> = ts
        .iter()
        .map(|&t| hs(t).map_err(|e| Error::numerical(format!("curve family at t = {t}: {e}"))))
        .collect::<Result<_>>()?;
    let germs: Vec<BoundaryData> = ts
        .iter()
        .map(|&t| bds(t).map_err(|e| Error::numerical(format!("germ family at t = {t}: {e}"))))
        .collect::<Result<_>>()?;

    // Windows of 3 samples overlapping at even indices.
    let nw = (n - 1) / 2;
    let mut window_solutions: Vec<Vec<(usize, ProfileCurve)>> = Vec::with_capacity(nw);
    for i in 0..nw {
        let idx = [2 * i, 2 * i + 1, 2 * i + 2];
        let center = &curves[idx[1]];
        let (a, b) = center.interval();
        let eps = germs[idx[1]].eps;
        let basis = CorrectionBasis::select(center, a + eps, b - eps, 0)?;
        let mut sols = Vec::with_capacity(3);
        for &j in &idx {
            let g = synthesize_with(&curves[j], &germs[j], &basis).map_err(|e| {
                Error::numerical(format!("stabilization failed at t = {}: {e}", ts[j]))
            })?;
            sols.push((j, g));
        }
        window_solutions.push(sols);
    }

    // Partition of unity over windows: a C^2 tent in t, normalized.
    let dt = ts[1] - ts[0];
    let mut out = Vec::with_capacity(n);
    for (j, &t) in ts.iter().enumerate() {
        let mut terms: Vec<(f64, &ProfileCurve)> = Vec::new();
        let mut total = 0.0;
        for (i, sols) in window_solutions.iter().enumerate() {
            let tc = ts[2 * i + 1];
            let u = (t - tc).abs() / (2.0 * dt);
            if u >= 1.0 - 1e-12 {
                continue;
            }
            let wgt = smoothstep(1.0 - u);
            if let Some((_, g)) = sols.iter().find(|(k, _)| *k == j) {
                terms.push((wgt, g));
                total += wgt;
            }
        }
        if terms.is_empty() {
            return Err(Error::numerical(format!("no window covers t = {t}")));
        }
        let scaled: Vec<(f64, &ProfileCurve)> =
            terms.iter().map(|(w, g)| (*w / total, *g)).collect();
        out.push((t, curve::combine(&scaled)?));
    }
    Ok(out)
}

/// Connect two curves with equal boundary germs and equal winding by a
/// stabilized homotopy with exact endpoints.
///
/// The 33 samples alternate curve moves and stabilizer moves: on a curve
/// move the two samples share one multiplier ansatz, and on a stabilizer
/// move the curve is fixed while the stabilizer interpolates between two
/// solutions. Both move types keep the piecewise-linear interpolant
/// exactly inside the SHS set, so the homotopy invariants (including the
/// midpoint guard) hold without refinement.
pub fn connect_same_winding(
    h0: &ProfileCurve,
    h1: &ProfileCurve,
    bd: &BoundaryData,
) -> Result<StableHomotopy> {
    let (a, b) = h0.interval();
    let (a1, b1) = h1.interval();
    let span = b - a;
    if (a - a1).abs() > 1e-12 * span.max(1.0) || (b - b1).abs() > 1e-12 * span.max(1.0) {
        return Err(Error::domain("curves must share one interval".to_string()));
    }
    let mut scale = 0.0_f64;
    for j in 0..=256 {
        let r = a + span * j as f64 / 256.0;
        scale = scale.max(h0.eval(r, 0)?.norm()).max(h0.eval(r, 1)?.norm());
    }
    for (lo, hi) in [(a, a + bd.eps), (b - bd.eps, b)] {
        for j in 0..=32 {
            let r = lo + (hi - lo) * j as f64 / 32.0;
            let d0 = (h0.eval(r, 0)? - h1.eval(r, 0)?).norm();
            let d1 = (h0.eval(r, 1)? - h1.eval(r, 1)?).norm();
            if d0.max(d1) > 1e-7 * scale.max(1.0) {
                return Err(Error::domain(format!(
                    "curves differ on the boundary germ at r = {r}"
                )));
            }
        }
    }
    let w0 = curve::winding(h0)?;
    let w1 = curve::winding(h1)?;
    if (w0 - w1).abs() > 1e-6 {
        return Err(Error::obstruction(format!(
            "winding mismatch: {w0} vs {w1} — no regular homotopy rel boundary exists"
        )));
    }

    let (rl, rr) = (a + bd.eps, b - bd.eps);
    let stages = (HOMOTOPY_SAMPLES - 1) / 2; // curve moves
    let mut last = Error::numerical("connecting homotopy failed".to_string());
    for attempt in 0..8u32 {
        let xi = interior_perturbation(h0, attempt, scale, rl, rr)?;
        let amp = if attempt == 0 { 0.0 } else { 1.0 };
        let stage_curve = |k: usize| -> Result<ProfileCurve> {
            let t = k as f64 / stages as f64;
            curve::combine(&[(1.0 - t, h0), (t, h1), (amp * t * (1.0 - t), &xi)])
        };
        // Screen the stage curves for immersion and slope variation.
        let mut curves = Vec::with_capacity(stages + 1);
        let mut good = true;
        for k in 0..=stages {
            let c = stage_curve(k)?;
            let floor = c.immersion_floor().max(1e-9 * scale);
            let mut min_speed = f64::INFINITY;
            for &r in &c.sample_grid(256) {
                if r > a && r < b {
                    min_speed = min_speed.min(c.eval(r, 1)?.norm());
                }
            }
            if min_speed < floor || slope_variation(&c, rl, rr)? < 1e-3 {
                good = false;
                break;
            }
            curves.push(c);
        }
        if !good {
            continue;
        }
        match assemble_connection(&curves, bd) {
            Ok(homotopy) => return Ok(homotopy),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// Build the alternating sample sequence for a screened stage family.
fn assemble_connection(curves: &[ProfileCurve], bd: &BoundaryData) -> Result<StableHomotopy> {
    let stages = curves.len() - 1;
    let mid = &curves[stages / 2];
    let (a, b) = mid.interval();
    let basis = CorrectionBasis::select(mid, a + bd.eps, b - bd.eps, 0)?;
    let ansatz: Vec<MultiplierAnsatz> = curves
        .iter()
        .map(|c| solve_multiplier(c, bd, &basis))
        .collect::<Result<_>>()?;

    let n = 2 * stages + 1;
    let mut samples = Vec::with_capacity(n);
    let t_of = |j: usize| j as f64 / (n - 1) as f64;
    samples.push((
        t_of(0),
        ShsPair::new(
            curves[0].clone(),
            apply_multiplier(&curves[0], bd, &ansatz[0], true)?,
        )?,
    ));
    for k in 0..stages {
        // Curve move with the stage-k ansatz carried to the next curve.
        samples.push((
            t_of(2 * k + 1),
            ShsPair::new(
                curves[k + 1].clone(),
                apply_multiplier(&curves[k + 1], bd, &ansatz[k], false)?,
            )?,
        ));
        // Stabilizer move to the stage-(k+1) solution.
        samples.push((
            t_of(2 * k + 2),
            ShsPair::new(
                curves[k + 1].clone(),
                apply_multiplier(&curves[k + 1], bd, &ansatz[k + 1], true)?,
            )?,
        ));
    }
    StableHomotopy::from_samples(samples)
}

/// Deterministic interior perturbation used to keep the straight-line
/// homotopy immersed with nonconstant slope.
fn interior_perturbation(
    h: &ProfileCurve,
    attempt: u32,
    scale: f64,
    rl: f64,
    rr: f64,
) -> Result<ProfileCurve> {
    let span = rr - rl;
    let k = attempt.max(1) as f64;
    let c1 = rl + span * (0.30 + 0.05 * ((k * 7.0) % 3.0) / 3.0);
    let c2 = rl + span * (0.65 + 0.05 * ((k * 5.0) % 3.0) / 3.0);
    let hw = span * 0.18;
    let amp = 0.02 * scale.max(1e-6) * k;
    let grid = h.sample_grid(257);
    let mut nodes = Vec::with_capacity(grid.len());
    for r in grid {
        let b1 = bump(r, c1, hw);
        let b2 = bump(r, c2, hw);
        let db1 = bump_deriv(r, c1, hw);
        let db2 = bump_deriv(r, c2, hw);
        nodes.push(HermiteNode {
            r,
            h: v2(amp * b1, -amp * b2),
            dh: v2(amp * db1, -amp * db2),
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
