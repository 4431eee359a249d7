//! Monotone homotopies of profile curves: the positivity (density) check,
//! origin-crossing and winding-drop analysis, the exotic-ball path, and
//! the symplectization embedding for positive-quadrant curves.

use crate::curve::{self, ProfileCurve};
use crate::error::{Error, Result};
use crate::geom::{ipair, v2, Vec2};
use serde::{Deserialize, Serialize};

/// Width of the end windows used for the standardized-germ check,
/// relative to the r-interval.
pub const GERM_WINDOW: f64 = 0.05;

/// A time family of profile curves over a fixed r-interval, interpolated
/// linearly in t.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MonotonePath {
    /// Time interval [a, b].
    pub interval: (f64, f64),
    pub samples: Vec<CurveSample>,
    /// Whether both r-ends are (t-dependent) positive multiples of the
    /// standard curve `(r^2, 1 - r^2)`.
    pub standardized: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveSample {
    pub t: f64,
    pub curve: ProfileCurve,
}

impl MonotonePath {
    pub fn from_samples(samples: Vec<(f64, ProfileCurve)>, standardized: bool) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::domain("a path needs at least two time samples"));
        }
        let out = MonotonePath {
            interval: (samples[0].0, samples[samples.len() - 1].0),
            samples: samples
                .into_iter()
                .map(|(t, curve)| CurveSample { t, curve })
                .collect(),
            standardized,
        };
        out.validate()?;
        Ok(out)
    }

    /// Re-check the invariants: increasing times, a shared r-interval,
    /// immersed samples, and (if standardized) the end-germ condition at
    /// all sample and midpoint times.
    pub fn validate(&self) -> Result<()> {
        if self.samples.len() < 2 {
            return Err(Error::domain("a path needs at least two time samples"));
        }
        let (ra, rb) = self.samples[0].curve.interval();
        for w in self.samples.windows(2) {
            if !(w[1].t > w[0].t) {
                return Err(Error::domain("sample times must be strictly increasing"));
            }
        }
        for s in &self.samples {
            let (ra2, rb2) = s.curve.interval();
            if (ra - ra2).abs() > 1e-9 || (rb - rb2).abs() > 1e-9 {
                return Err(Error::domain("all samples must share one r-interval"));
            }
            let floor = s.curve.immersion_floor();
            for &r in &s.curve.sample_grid(257) {
                if r > ra && r < rb && s.curve.eval(r, 1)?.norm() < floor {
                    return Err(Error::domain(format!(
                        "sample at t = {} is not an immersion near r = {r}",
                        s.t
                    )));
                }
            }
        }
        if self.standardized {
            for j in 0..2 * self.samples.len() - 1 {
                let t = if j % 2 == 0 {
                    self.samples[j / 2].t
                } else {
                    0.5 * (self.samples[j / 2].t + self.samples[j / 2 + 1].t)
                };
                let c = self.curve_at(t)?;
                check_standardized(&c).map_err(|e| {
                    Error::domain(format!("standardization fails at t = {t}: {e}"))
                })?;
            }
        }
        Ok(())
    }

    fn segment(&self, t: f64) -> Result<usize> {
        let (ta, tb) = self.interval;
        let tol = 1e-9 * (tb - ta).max(1.0);
        if t < ta - tol || t > tb + tol {
            return Err(Error::domain(format!(
                "time {t} outside path interval [{ta}, {tb}]"
            )));
        }
        let j = self.samples.partition_point(|s| s.t <= t);
        Ok(j.clamp(1, self.samples.len() - 1) - 1)
    }

    pub fn curve_at(&self, t: f64) -> Result<ProfileCurve> {
        let j = self.segment(t)?;
        let (s0, s1) = (&self.samples[j], &self.samples[j + 1]);
        let u = ((t - s0.t) / (s1.t - s0.t)).clamp(0.0, 1.0);
        curve::combine(&[(1.0 - u, &s0.curve), (u, &s1.curve)])
    }

    /// `dh/dt` on the segment containing `t` (constant per segment).
    pub fn velocity_at(&self, t: f64) -> Result<ProfileCurve> {
        let j = self.segment(t)?;
        let (s0, s1) = (&self.samples[j], &self.samples[j + 1]);
        let inv = 1.0 / (s1.t - s0.t);
        curve::combine(&[(inv, &s1.curve), (-inv, &s0.curve)])
    }

    /// Time reversal.
    pub fn reversed(&self) -> MonotonePath {
        let (ta, tb) = self.interval;
        let mut samples: Vec<CurveSample> = self
            .samples
            .iter()
            .rev()
            .map(|s| CurveSample {
                t: ta + tb - s.t,
                curve: s.curve.clone(),
            })
            .collect();
        samples.sort_by(|x, y| x.t.total_cmp(&y.t));
        MonotonePath {
            interval: self.interval,
            samples,
            standardized: self.standardized,
        }
    }
}

/// Check that the end windows of `c` are positive multiples of the
/// standard curve, in sup norm relative to the curve scale.
///
/// The comparison is C^1 with tolerance 1e-6 relative to the global curve
/// scale; the multiple is fitted by least squares per window. Near the
/// degenerate corner r = a the standard curve itself has vanishing speed,
/// so turning may enter or leave the family through a sub-tolerance
/// neighborhood of that corner — which is exactly the mechanism that lets
/// the winding number of a standardized monotone homotopy drop.
pub fn check_standardized(c: &ProfileCurve) -> Result<f64> {
    let (a, b) = c.interval();
    let span = b - a;
    let st = ProfileCurve::standard(1.0, (a, b));
    let mut scale = 0.0_f64;
    for j in 0..=64 {
        let r = a + span * j as f64 / 64.0;
        scale = scale.max(c.eval(r, 0)?.norm()).max(c.eval(r, 1)?.norm());
    }
    let mut worst = 0.0_f64;
    for (lo, hi) in [(a, a + GERM_WINDOW * span), (b - GERM_WINDOW * span, b)] {
        // Least-squares multiple over the window.
        let mut num = 0.0;
        let mut den = 0.0;
        let m = 64;
        for j in 0..=m {
            let r = lo + (hi - lo) * j as f64 / m as f64;
            let u = c.eval(r, 0)?;
            let v = st.eval(r, 0)?;
            num += u.dot(v);
            den += v.norm_sq();
        }
        let s = num / den;
        if s <= 0.0 {
            return Err(Error::domain(format!(
                "end window [{lo}, {hi}] is not a positive multiple of the standard curve"
            )));
        }
        for j in 0..=m {
            let r = lo + (hi - lo) * j as f64 / m as f64;
            let d0 = (c.eval(r, 0)? - st.eval(r, 0)? * s).norm();
            let d1 = (c.eval(r, 1)? - st.eval(r, 1)? * s).norm();
            worst = worst.max(d0.max(d1));
        }
    }
    if worst > 1e-6 * scale.max(1e-300) {
        return Err(Error::domain(format!(
            "end windows deviate from a standard multiple by {worst:.3e} (scale {scale:.3e})"
        )));
    }
    Ok(worst)
}

/// A transversal passage of the family through the origin.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct OriginCrossing {
    pub t: f64,
    pub r: f64,
    /// Winding decrement carried by this passage (1 per the crossing
    /// lemma for monotone families).
    pub winding_drop: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MonotoneReport {
    pub ok: bool,
    /// Minimum over the interior (t, r) grid of the 4-form density
    /// `2 <h_dot, i h'>`.
    pub min_density: f64,
    pub crossings: Vec<OriginCrossing>,
    /// True when an origin passage failed the transversality threshold;
    /// winding accounting is then unreliable.
    pub non_transversal: bool,
}

const DENSITY_NT: usize = 65;
const DENSITY_NR: usize = 257;

/// Grid check of monotonicity and origin passages.
///
/// The density is sampled on a 65 x 257 interior grid (the r-endpoints
/// are excluded: standardized curves have vanishing speed at the
/// degenerate end, where the density vanishes identically). Origin
/// passages are located by sign changes of both coordinates over a grid
/// cell, refined by 2-dimensional Newton iteration on `(t, r) -> h_t(r)`,
/// and accepted only when the Jacobian determinant exceeds 1e-10.
pub fn monotone_check(path: &MonotonePath) -> Result<MonotoneReport> {
    path.validate()?;
    let (ta, tb) = path.interval;
    let (ra, rb) = path.samples[0].curve.interval();
    let t_grid: Vec<f64> = (0..DENSITY_NT)
        .map(|j| ta + (tb - ta) * j as f64 / (DENSITY_NT - 1) as f64)
        .collect();
    let r_grid: Vec<f64> = (0..DENSITY_NR)
        .map(|j| ra + (rb - ra) * j as f64 / (DENSITY_NR - 1) as f64)
        .collect();

    let mut min_density = f64::INFINITY;
    let mut values: Vec<Vec<Vec2>> = Vec::with_capacity(DENSITY_NT);
    for &t in &t_grid {
        let eps = 1e-9 * (tb - ta);
        let tv = if t >= tb { t - eps } else { t + eps };
        let hdot = path.velocity_at(tv)?;
        let ht = path.curve_at(t)?;
        let mut row = Vec::with_capacity(DENSITY_NR);
        for &r in &r_grid {
            row.push(ht.eval(r, 0)?);
            if r > ra && r < rb {
                let d = 2.0 * ipair(hdot.eval(r, 0)?, ht.eval(r, 1)?);
                min_density = min_density.min(d);
            }
        }
        values.push(row);
    }

    // Scan cells for candidate origin passages.
    let mut scale = 0.0_f64;
    for row in &values {
        for v in row {
            scale = scale.max(v.norm());
        }
    }
    let mut crossings: Vec<OriginCrossing> = Vec::new();
    let mut non_transversal = false;
    for i in 0..DENSITY_NT - 1 {
        for j in 0..DENSITY_NR - 1 {
            let corners = [
                values[i][j],
                values[i][j + 1],
                values[i + 1][j],
                values[i + 1][j + 1],
            ];
            let sx = corners.iter().any(|v| v.x > 0.0) && corners.iter().any(|v| v.x < 0.0);
            let sy = corners.iter().any(|v| v.y > 0.0) && corners.iter().any(|v| v.y < 0.0);
            let tiny = corners.iter().any(|v| v.norm() < 1e-6 * scale);
            if !(sx && sy || tiny) {
                continue;
            }
            let t0 = 0.5 * (t_grid[i] + t_grid[i + 1]);
            let r0 = 0.5 * (r_grid[j] + r_grid[j + 1]);
            match refine_crossing(path, t0, r0) {
                Ok(Some((t, r))) => crossings.push(OriginCrossing {
                    t,
                    r,
                    winding_drop: 1.0,
                }),
                Ok(None) => {}
                Err(_) => non_transversal = true,
            }
        }
    }
    crossings.sort_by(|x, y| x.t.total_cmp(&y.t).then(x.r.total_cmp(&y.r)));
    crossings.dedup_by(|x, y| (x.t - y.t).abs() < 1e-6 && (x.r - y.r).abs() < 1e-6);

    Ok(MonotoneReport {
        ok: min_density > 0.0,
        min_density,
        crossings,
        non_transversal,
    })
}

/// Newton refinement of an origin passage; returns None when the iterate
/// diverges away from the origin (spurious cell), and an error when it
/// converges to a non-transversal zero.
fn refine_crossing(path: &MonotonePath, mut t: f64, mut r: f64) -> Result<Option<(f64, f64)>> {
    let (ta, tb) = path.interval;
    let (ra, rb) = path.samples[0].curve.interval();
    let mut converged = false;
    for _ in 0..40 {
        let ht = path.curve_at(t)?;
        let hval = ht.eval(r, 0)?;
        if hval.norm() < 1e-13 {
            converged = true;
            break;
        }
        let eps = 1e-9 * (tb - ta);
        let tv = (t + eps).min(tb - eps);
        let col_t = path.velocity_at(tv)?.eval(r, 0)?;
        let col_r = ht.eval(r, 1)?;
        let det = col_t.x * col_r.y - col_r.x * col_t.y;
        if det.abs() < 1e-300 {
            return Ok(None);
        }
        let dt = (hval.x * col_r.y - col_r.x * hval.y) / det;
        let dr = (col_t.x * hval.y - hval.x * col_t.y) / det;
        t = (t - dt).clamp(ta, tb);
        r = (r - dr).clamp(ra, rb);
        if dt.abs() < 1e-14 * (tb - ta) && dr.abs() < 1e-14 * (rb - ra) {
            converged = true;
            break;
        }
    }
    let ht = path.curve_at(t)?;
    let hval = ht.eval(r, 0)?;
    if !converged || hval.norm() > 1e-9 {
        return Ok(None);
    }
    let eps = 1e-9 * (tb - ta);
    let col_t = path.velocity_at((t + eps).min(tb - eps))?.eval(r, 0)?;
    let col_r = ht.eval(r, 1)?;
    let det = col_t.x * col_r.y - col_r.x * col_t.y;
    if det.abs() <= 1e-10 {
        return Err(Error::numerical(format!(
            "non-transversal origin passage at (t, r) = ({t}, {r})"
        )));
    }
    Ok(Some((t, r)))
}

/// Verdict of the winding obstruction to standardized monotone homotopies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindingVerdict {
    Admissible,
    Obstructed,
}

/// Necessary condition for a standardized monotone homotopy `h0 -> h1`:
/// the winding number cannot increase. Both curves must miss the origin.
pub fn winding_obstruction(h0: &ProfileCurve, h1: &ProfileCurve) -> Result<WindingVerdict> {
    for (name, c) in [("first", h0), ("second", h1)] {
        check_standardized(c)?;
        let mut min_norm = f64::INFINITY;
        let mut scale = 0.0_f64;
        for &r in &c.sample_grid(1024) {
            let v = c.eval(r, 0)?;
            min_norm = min_norm.min(v.norm());
            scale = scale.max(v.norm());
        }
        if min_norm < 1e-9 * scale {
            return Err(Error::domain(format!(
                "{name} curve passes through the origin; winding undefined"
            )));
        }
    }
    let w0 = curve::winding(h0)?;
    let w1 = curve::winding(h1)?;
    Ok(if w1 > w0 + 1e-6 {
        WindingVerdict::Obstructed
    } else {
        WindingVerdict::Admissible
    })
}

/// The frozen exotic-ball path: a standardized monotone homotopy from
/// `(1/2) h_st` to a curve of winding number -1 that passes the grid
/// checks of [`monotone_check`] with exactly one transversal origin
/// passage. The node tables are fixed implementation data; the
/// construction is validated purely by the checks.
pub fn exotic_ball_path() -> Result<MonotonePath> {
    let mut samples = Vec::new();
    for (t, nodes) in crate::exotic_data::SAMPLES {
        let nodes = nodes
            .iter()
            .map(|&(r, hx, hy, dhx, dhy)| curve::HermiteNode {
                r,
                h: v2(hx, hy),
                dh: v2(dhx, dhy),
            })
            .collect();
        samples.push((*t, ProfileCurve::hermite(nodes, 0.0)?));
    }
    MonotonePath::from_samples(samples, true)
}

/// Report of the symplectization embedding check.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EmbeddingReport {
    /// Number of grid points checked.
    pub grid_points: usize,
    /// Max defect of the pullback identity `s rtilde^2 = h_1`,
    /// `s (1 - rtilde^2) = h_2`.
    pub residual: f64,
    /// Max deviation of `s = h_1 + h_2` from its central value (zero for
    /// curves on a round sphere).
    pub on_sphere_defect: f64,
}

/// Check the embedding of the curve's region into the symplectization of
/// the standard contact sphere via `(s, rtilde) = (h_1 + h_2,
/// sqrt(h_1 / (h_1 + h_2)))`; requires the curve to stay in the open
/// positive quadrant on the interior.
pub fn embed_symplectization(h: &ProfileCurve) -> Result<EmbeddingReport> {
    let (a, b) = h.interval();
    let grid = h.sample_grid(512);
    let mid = h.eval(0.5 * (a + b), 0)?;
    let s_mid = mid.x + mid.y;
    let mut residual = 0.0_f64;
    let mut defect = 0.0_f64;
    let mut count = 0usize;
    for &r in &grid {
        if r <= a || r >= b {
            continue;
        }
        let v = h.eval(r, 0)?;
        if v.x <= 0.0 || v.y <= 0.0 {
            return Err(Error::domain(format!(
                "curve leaves the open positive quadrant at r = {r}: ({}, {})",
                v.x, v.y
            )));
        }
        let s = v.x + v.y;
        let rt = (v.x / s).sqrt();
        residual = residual
            .max((s * rt * rt - v.x).abs())
            .max((s * (1.0 - rt * rt) - v.y).abs());
        defect = defect.max((s - s_mid).abs());
        count += 1;
    }
    Ok(EmbeddingReport {
        grid_points: count,
        residual,
        on_sphere_defect: defect,
    })
}
