//! Shared numerical kernels: adaptive Simpson quadrature, bisection,
//! primitive (Farey) direction enumeration, and small dense solves.

use crate::error::{Error, Result};
use crate::geom::{v2, Vec2};

/// Default absolute tolerance for quadrature.
pub const QUAD_TOL: f64 = 1e-9;
/// Maximum recursion depth for adaptive Simpson.
pub const QUAD_MAX_DEPTH: u32 = 40;
/// Default tolerance (in the abscissa) for bisection root finding.
pub const BISECT_TOL: f64 = 1e-10;

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adapt(
    f: &mut dyn FnMut(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let err = left + right - whole;
    if err.abs() <= 15.0 * tol {
        return Ok(left + right + err / 15.0);
    }
    if depth == 0 {
        return Err(Error::numerical(format!(
            "quadrature did not converge on [{a}, {b}]; achieved tolerance {:.3e}",
            err.abs() / 15.0
        )));
    }
    let l = adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?;
    let r = adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?;
    Ok(l + r)
}

/// Adaptive composite Simpson quadrature with absolute tolerance `tol`.
pub fn integrate(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let fb = f(b);
    let whole = simpson(fa, fm, fb, b - a);
    adapt(&mut f, a, b, fa, fm, fb, whole, tol, QUAD_MAX_DEPTH)
}

/// Componentwise adaptive quadrature of a plane-valued integrand.
pub fn integrate_vec2(mut f: impl FnMut(f64) -> Vec2, a: f64, b: f64, tol: f64) -> Result<Vec2> {
    let x = integrate(|r| f(r).x, a, b, tol)?;
    let y = integrate(|r| f(r).y, a, b, tol)?;
    Ok(v2(x, y))
}

/// Bisection on a bracketing interval: `f(a)` and `f(b)` must have opposite
/// signs. Returns the root location to within `tol` in the abscissa.
pub fn bisect(mut f: impl FnMut(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> Result<f64> {
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::numerical(format!(
            "bisection bracket [{a}, {b}] does not straddle a sign change"
        )));
    }
    while (b - a).abs() > tol {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

/// A primitive integer direction (p, q) together with its angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RationalDir {
    pub p: i64,
    pub q: i64,
    pub angle: f64,
}

/// All primitive directions (p, q) with |p|, |q| <= q_max, sorted by angle
/// in (-pi, pi]. Opposite directions are distinct entries.
pub fn rational_directions(q_max: u32) -> Vec<RationalDir> {
    let q_max = q_max as i64;
    let mut out = Vec::new();
    for p in -q_max..=q_max {
        for q in -q_max..=q_max {
            if (p, q) == (0, 0) || gcd(p, q) != 1 {
                continue;
            }
            out.push(RationalDir {
                p,
                q,
                angle: (q as f64).atan2(p as f64),
            });
        }
    }
    out.sort_by(|a, b| a.angle.total_cmp(&b.angle).then(a.p.cmp(&b.p)));
    out
}

/// Nearest rational direction to `angle` among `dirs` (sorted by angle),
/// together with the absolute angular distance.
pub fn nearest_rational(dirs: &[RationalDir], angle: f64) -> (RationalDir, f64) {
    use crate::geom::wrap_angle;
    let idx = dirs.partition_point(|d| d.angle < angle);
    let mut best = dirs[0];
    let mut best_d = f64::INFINITY;
    for j in [
        idx.wrapping_sub(1).min(dirs.len() - 1),
        idx % dirs.len(),
        (idx + 1) % dirs.len(),
    ] {
        let d = wrap_angle(angle - dirs[j].angle).abs();
        if d < best_d {
            best_d = d;
            best = dirs[j];
        }
    }
    (best, best_d)
}

/// Solve a 2x2 linear system `m * x = rhs`; `m` is given by columns.
/// Also returns the spectral condition number of `m`.
pub fn solve2(col0: Vec2, col1: Vec2, rhs: Vec2) -> Result<(Vec2, f64)> {
    let det = col0.x * col1.y - col1.x * col0.y;
    // Singular values of the 2x2 matrix via its Gram invariants.
    let t = col0.norm_sq() + col1.norm_sq();
    let disc = (t * t - 4.0 * det * det).max(0.0).sqrt();
    let smax = ((t + disc) / 2.0).sqrt();
    let smin = ((t - disc) / 2.0).max(0.0).sqrt();
    let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if det == 0.0 {
        return Err(Error::numerical("singular 2x2 system".to_string()));
    }
    let x = (rhs.x * col1.y - col1.x * rhs.y) / det;
    let y = (col0.x * rhs.y - rhs.x * col0.y) / det;
    Ok((v2(x, y), cond))
}

/// C^2 quintic smoothstep: 0 for x <= 0, 1 for x >= 1.
pub fn smoothstep(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    x * x * x * (10.0 + x * (-15.0 + 6.0 * x))
}

/// Derivative of [`smoothstep`].
pub fn smoothstep_deriv(x: f64) -> f64 {
    if !(0.0..=1.0).contains(&x) {
        return 0.0;
    }
    30.0 * x * x * (1.0 - x) * (1.0 - x)
}

/// Smooth bump supported on [center - half_width, center + half_width],
/// normalized to unit peak value.
pub fn bump(r: f64, center: f64, half_width: f64) -> f64 {
    let u = (r - center) / half_width;
    if u.abs() >= 1.0 {
        return 0.0;
    }
    let w = 1.0 - u * u;
    w * w * w
}
