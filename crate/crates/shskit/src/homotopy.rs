//! Stable homotopies of torus-invariant SHS: the length functional
//! `L = (A + B/delta)(b - a)`, the operation calculus (reparametrize,
//! rescale, restrict, reverse, concatenate), and strong symplectic
//! cobordisms built from short homotopies.

use crate::curve::{self, ProfileCurve};
use crate::error::{Error, Result};
use crate::geom::ipair;
use crate::shs::{delta_bounds, verify, ShsPair};
use serde::{Deserialize, Serialize};

/// A stable homotopy: time samples of verifying pairs over a shared
/// r-interval, interpolated linearly in t on both curves.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StableHomotopy {
    /// Time interval [a, b].
    pub interval: (f64, f64),
    pub samples: Vec<TimeSample>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TimeSample {
    pub t: f64,
    pub pair: ShsPair,
}

/// Constants of the length functional.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct HomotopyConstants {
    /// `A = max |<g_dot, i h'> / D|` — the lambda-velocity bound.
    pub a_max: f64,
    /// `B = max |<h_dot, i h'> / D|` — the omega-velocity bound.
    pub b_max: f64,
    /// `delta = min_t min(delta_minus, delta_plus)`; may be infinite.
    pub delta: f64,
    /// `L = (A + B/delta)(b - a)`, with `B/delta := 0` when `B = 0` and
    /// `delta` is infinite.
    pub length: f64,
}

impl StableHomotopy {
    /// Build from time samples, checking the invariants: increasing times,
    /// a shared r-interval, and verification of every sample and every
    /// midpoint interpolant.
    pub fn from_samples(samples: Vec<(f64, ShsPair)>) -> Result<StableHomotopy> {
        let samples: Vec<TimeSample> = samples
            .into_iter()
            .map(|(t, pair)| TimeSample { t, pair })
            .collect();
        if samples.len() < 2 {
            return Err(Error::domain("a homotopy needs at least two time samples"));
        }
        let out = StableHomotopy {
            interval: (samples[0].t, samples[samples.len() - 1].t),
            samples,
        };
        out.validate()?;
        Ok(out)
    }

    /// Re-check all invariants (used after deserialization).
    pub fn validate(&self) -> Result<()> {
        let (ta, tb) = self.interval;
        if !(tb > ta) || self.samples.len() < 2 {
            return Err(Error::domain("empty or unordered time interval"));
        }
        let tol = 1e-9 * (tb - ta).max(1.0);
        if (self.samples[0].t - ta).abs() > tol
            || (self.samples[self.samples.len() - 1].t - tb).abs() > tol
        {
            return Err(Error::domain("samples must span the time interval"));
        }
        let (ra, rb) = self.samples[0].pair.interval();
        for w in self.samples.windows(2) {
            if !(w[1].t > w[0].t) {
                return Err(Error::domain("sample times must be strictly increasing"));
            }
        }
        for s in &self.samples {
            let (ra2, rb2) = s.pair.interval();
            if (ra - ra2).abs() > 1e-9 || (rb - rb2).abs() > 1e-9 {
                return Err(Error::domain("all samples must share one r-interval"));
            }
            let rep = verify(&s.pair)?;
            if !rep.ok {
                return Err(Error::domain(format!(
                    "sampled pair at t = {} fails verification (residual {:.3e}, min pairing {:.3e})",
                    s.t, rep.residual_sup, rep.min_pairing
                )));
            }
        }
        // Midpoint guard: linear interpolation must stay inside the SHS set.
        for w in self.samples.windows(2) {
            let tm = 0.5 * (w[0].t + w[1].t);
            let pair = self.pair_at(tm)?;
            let rep = verify(&pair)?;
            if !rep.ok {
                return Err(Error::domain(format!(
                    "midpoint interpolant at t = {tm} leaves the SHS set (residual {:.3e}, min pairing {:.3e})",
                    rep.residual_sup, rep.min_pairing
                )));
            }
        }
        Ok(())
    }

    /// Index of the segment containing `t`.
    fn segment(&self, t: f64) -> Result<usize> {
        let (ta, tb) = self.interval;
        let tol = 1e-9 * (tb - ta).max(1.0);
        if t < ta - tol || t > tb + tol {
            return Err(Error::domain(format!(
                "time {t} outside homotopy interval [{ta}, {tb}]"
            )));
        }
        let j = self.samples.partition_point(|s| s.t <= t);
        Ok(j.clamp(1, self.samples.len() - 1) - 1)
    }

    /// Linearly interpolated pair at time `t`.
    pub fn pair_at(&self, t: f64) -> Result<ShsPair> {
        let j = self.segment(t)?;
        let (s0, s1) = (&self.samples[j], &self.samples[j + 1]);
        let u = ((t - s0.t) / (s1.t - s0.t)).clamp(0.0, 1.0);
        let h = curve::combine(&[(1.0 - u, &s0.pair.h), (u, &s1.pair.h)])?;
        let g = curve::combine(&[(1.0 - u, &s0.pair.g), (u, &s1.pair.g)])?;
        let mut pair = ShsPair::new(h, g)?;
        pair.verify_tol = s0.pair.verify_tol.max(s1.pair.verify_tol);
        pair.boundary_exempt = s0.pair.boundary_exempt.max(s1.pair.boundary_exempt);
        Ok(pair)
    }

    /// Time-derivative curves `(h_dot, g_dot)` on the segment containing
    /// `t` (constant per segment under linear interpolation).
    pub fn velocity_at(&self, t: f64) -> Result<(ProfileCurve, ProfileCurve)> {
        let j = self.segment(t)?;
        let (s0, s1) = (&self.samples[j], &self.samples[j + 1]);
        let inv = 1.0 / (s1.t - s0.t);
        let hdot = curve::combine(&[(inv, &s1.pair.h), (-inv, &s0.pair.h)])?;
        let gdot = curve::combine(&[(inv, &s1.pair.g), (-inv, &s0.pair.g)])?;
        Ok((hdot, gdot))
    }
}

/// Compute the constants `(A, B, delta, L)` of a homotopy by maximizing
/// the torus-invariant velocity formulas
/// `lambda_dot(R) = <g_dot, i h'> / D` and `mu_dot(R) = <h_dot, i h'> / D`
/// over a (t, r) grid, with `delta` the minimum of the deformation bounds
/// over sample and midpoint times.
pub fn homotopy_constants(gamma: &StableHomotopy) -> Result<HomotopyConstants> {
    let (ta, tb) = gamma.interval;
    let mut a_max = 0.0_f64;
    let mut b_max = 0.0_f64;
    let mut delta = f64::INFINITY;
    for w in gamma.samples.windows(2) {
        let tm = 0.5 * (w[0].t + w[1].t);
        let (hdot, gdot) = gamma.velocity_at(tm)?;
        for t in [w[0].t, tm, w[1].t] {
            let pair = gamma.pair_at(t)?;
            for r in pair.interior_grid(257) {
                let dh = pair.h.eval(r, 1)?;
                let d = pair.pairing(r)?;
                a_max = a_max.max((ipair(gdot.eval(r, 0)?, dh) / d).abs());
                b_max = b_max.max((ipair(hdot.eval(r, 0)?, dh) / d).abs());
            }
        }
        delta = delta.min(delta_bounds(&gamma.pair_at(tm)?)?.symmetric());
    }
    for s in &gamma.samples {
        delta = delta.min(delta_bounds(&s.pair)?.symmetric());
    }
    if delta <= 1e-12 {
        return Err(Error::numerical(format!(
            "degenerate homotopy: deformation bound delta = {delta:.3e}"
        )));
    }
    let ratio = if b_max == 0.0 && delta.is_infinite() {
        0.0
    } else {
        b_max / delta
    };
    let length = (a_max + ratio) * (tb - ta);
    Ok(HomotopyConstants {
        a_max,
        b_max,
        delta,
        length,
    })
}

/// Operations of the homotopy calculus.
#[derive(Debug, Clone)]
pub enum TransformOp {
    /// Affine reparametrization onto `[t0, t1]` (with `t1 < t0` meaning
    /// reversal composed with the affine map).
    Reparametrize { t0: f64, t1: f64 },
    /// `lambda -> c lambda`, i.e. `g -> c g` at every time.
    RescaleLambda(f64),
    /// `omega -> c omega`, i.e. `h -> c h` at every time.
    RescaleOmega(f64),
    /// Restriction to a time subinterval.
    Restrict { a2: f64, b2: f64 },
    Reverse,
    /// Append another homotopy whose first pair matches our last.
    Concatenate(StableHomotopy),
}

fn scale_pair(pair: &ShsPair, ch: f64, cg: f64) -> Result<ShsPair> {
    let h = curve::combine(&[(ch, &pair.h)])?;
    let g = curve::combine(&[(cg, &pair.g)])?;
    let mut out = ShsPair::new(h, g)?;
    out.verify_tol = pair.verify_tol;
    out.boundary_exempt = pair.boundary_exempt;
    Ok(out)
}

fn pair_distance(p: &ShsPair, q: &ShsPair) -> Result<f64> {
    let mut d = 0.0_f64;
    for r in p.grid(128) {
        d = d.max((p.h.eval(r, 0)? - q.h.eval(r, 0)?).norm());
        d = d.max((p.g.eval(r, 0)? - q.g.eval(r, 0)?).norm());
    }
    Ok(d)
}

/// Apply one calculus operation and assert the corresponding length rule
/// from the calculus (relative tolerance 1e-9 on the grid quantities).
pub fn transform(gamma: &StableHomotopy, op: &TransformOp) -> Result<StableHomotopy> {
    let before = homotopy_constants(gamma)?;
    let (ta, tb) = gamma.interval;
    let out = match op {
        TransformOp::Reparametrize { t0, t1 } => {
            if t0 == t1 {
                return Err(Error::domain("reparametrization must be nonconstant"));
            }
            let map = |t: f64| t0 + (t - ta) * (t1 - t0) / (tb - ta);
            let mut samples: Vec<TimeSample> = gamma
                .samples
                .iter()
                .map(|s| TimeSample {
                    t: map(s.t),
                    pair: s.pair.clone(),
                })
                .collect();
            if t1 < t0 {
                samples.reverse();
            }
            StableHomotopy {
                interval: (t0.min(*t1), t0.max(*t1)),
                samples,
            }
        }
        TransformOp::RescaleLambda(c) => {
            if *c <= 0.0 {
                return Err(Error::domain("rescaling factor must be positive"));
            }
            let samples = gamma
                .samples
                .iter()
                .map(|s| {
                    Ok(TimeSample {
                        t: s.t,
                        pair: scale_pair(&s.pair, 1.0, *c)?,
                    })
                })
                .collect::<Result<_>>()?;
            StableHomotopy {
                interval: gamma.interval,
                samples,
            }
        }
        TransformOp::RescaleOmega(c) => {
            if *c <= 0.0 {
                return Err(Error::domain("rescaling factor must be positive"));
            }
            let samples = gamma
                .samples
                .iter()
                .map(|s| {
                    Ok(TimeSample {
                        t: s.t,
                        pair: scale_pair(&s.pair, *c, 1.0)?,
                    })
                })
                .collect::<Result<_>>()?;
            StableHomotopy {
                interval: gamma.interval,
                samples,
            }
        }
        TransformOp::Restrict { a2, b2 } => {
            if !(a2 < b2) || *a2 < ta - 1e-12 || *b2 > tb + 1e-12 {
                return Err(Error::domain(format!(
                    "restriction [{a2}, {b2}] must sit inside [{ta}, {tb}]"
                )));
            }
            let mut samples = vec![TimeSample {
                t: *a2,
                pair: gamma.pair_at(*a2)?,
            }];
            for s in &gamma.samples {
                if s.t > *a2 + 1e-12 && s.t < *b2 - 1e-12 {
                    samples.push(s.clone());
                }
            }
            samples.push(TimeSample {
                t: *b2,
                pair: gamma.pair_at(*b2)?,
            });
            StableHomotopy {
                interval: (*a2, *b2),
                samples,
            }
        }
        TransformOp::Reverse => {
            let mut samples: Vec<TimeSample> = gamma
                .samples
                .iter()
                .rev()
                .map(|s| TimeSample {
                    t: ta + tb - s.t,
                    pair: s.pair.clone(),
                })
                .collect();
            samples.sort_by(|x, y| x.t.total_cmp(&y.t));
            StableHomotopy {
                interval: gamma.interval,
                samples,
            }
        }
        TransformOp::Concatenate(other) => {
            let last = &gamma.samples[gamma.samples.len() - 1].pair;
            let first = &other.samples[0].pair;
            if pair_distance(last, first)? > 1e-9 {
                return Err(Error::domain(
                    "concatenation endpoints do not match".to_string(),
                ));
            }
            let (oa, ob) = other.interval;
            let mut samples = gamma.samples.clone();
            for s in other.samples.iter().skip(1) {
                samples.push(TimeSample {
                    t: tb + (s.t - oa),
                    pair: s.pair.clone(),
                });
            }
            StableHomotopy {
                interval: (ta, tb + (ob - oa)),
                samples,
            }
        }
    };
    let after = homotopy_constants(&out)?;
    assert_rules(op, &before, &after, gamma, &out)?;
    Ok(out)
}

fn close(x: f64, y: f64, tol: f64) -> bool {
    if x.is_infinite() || y.is_infinite() {
        return x == y;
    }
    (x - y).abs() <= tol * (1.0 + x.abs().max(y.abs()))
}

fn assert_rules(
    op: &TransformOp,
    before: &HomotopyConstants,
    after: &HomotopyConstants,
    gamma: &StableHomotopy,
    out: &StableHomotopy,
) -> Result<()> {
    let tol = 1e-9;
    let ok = match op {
        TransformOp::Reparametrize { .. } | TransformOp::Reverse => {
            close(after.length, before.length, tol)
        }
        TransformOp::RescaleLambda(c) => {
            close(after.length, before.length, tol)
                && close(after.a_max, before.a_max, tol)
                && close(after.b_max, before.b_max / c, tol)
                && close(after.delta, before.delta / c, tol)
        }
        TransformOp::RescaleOmega(c) => {
            close(after.length, before.length, tol)
                && close(after.a_max, before.a_max, tol)
                && close(after.b_max, before.b_max * c, tol)
                && close(after.delta, before.delta * c, tol)
        }
        TransformOp::Restrict { .. } => {
            let frac = (out.interval.1 - out.interval.0) / (gamma.interval.1 - gamma.interval.0);
            after.length <= frac * before.length + tol * (1.0 + before.length)
        }
        TransformOp::Concatenate(other) => {
            let oc = homotopy_constants(other)?;
            close(after.a_max, before.a_max.max(oc.a_max), tol)
                && close(after.b_max, before.b_max.max(oc.b_max), tol)
                && close(after.delta, before.delta.min(oc.delta), tol)
        }
    };
    if ok {
        Ok(())
    } else {
        Err(Error::numerical(format!(
            "calculus rule violated by {}: before L = {}, after L = {}",
            op_name(op),
            before.length,
            after.length
        )))
    }
}

fn op_name(op: &TransformOp) -> &'static str {
    match op {
        TransformOp::Reparametrize { .. } => "reparametrize",
        TransformOp::RescaleLambda(_) => "rescale_lambda",
        TransformOp::RescaleOmega(_) => "rescale_omega",
        TransformOp::Restrict { .. } => "restrict",
        TransformOp::Reverse => "reverse",
        TransformOp::Concatenate(_) => "concatenate",
    }
}

/// Split into pieces of length below `l_max` by uniform restriction,
/// re-splitting adaptively when a piece still exceeds the bound.
pub fn split_short(gamma: &StableHomotopy, l_max: f64) -> Result<Vec<StableHomotopy>> {
    if l_max <= 0.0 {
        return Err(Error::domain("l_max must be positive"));
    }
    let c = homotopy_constants(gamma)?;
    let n0 = (c.length / l_max).ceil() as usize + 1;
    let (ta, tb) = gamma.interval;
    let mut queue: Vec<(f64, f64)> = (0..n0)
        .map(|j| {
            (
                ta + (tb - ta) * j as f64 / n0 as f64,
                ta + (tb - ta) * (j + 1) as f64 / n0 as f64,
            )
        })
        .collect();
    let mut out: Vec<(f64, StableHomotopy)> = Vec::new();
    while let Some((lo, hi)) = queue.pop() {
        if out.len() + queue.len() > 1 << 16 {
            return Err(Error::numerical(
                "degenerate homotopy: adaptive splitting exceeded 65536 pieces".to_string(),
            ));
        }
        let piece = transform(gamma, &TransformOp::Restrict { a2: lo, b2: hi })?;
        if homotopy_constants(&piece)?.length < l_max {
            out.push((lo, piece));
        } else {
            let mid = 0.5 * (lo + hi);
            queue.push((lo, mid));
            queue.push((mid, hi));
        }
    }
    out.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(out.into_iter().map(|(_, p)| p).collect())
}

/// A strong symplectic cobordism built over a homotopy: the linear slope
/// function `f` and the positivity grid of the 4-form density.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CobordismForm {
    pub homotopy: StableHomotopy,
    /// Sampled (t, f(t)).
    pub f_samples: Vec<(f64, f64)>,
    /// Slope of the linear profile `f(t) = slope * (t - (a+b)/2)`.
    pub f_slope: f64,
    /// Density grid: rows indexed by t, columns by r.
    pub t_grid: Vec<f64>,
    pub r_grid: Vec<f64>,
    pub density: Vec<Vec<f64>>,
    pub min_density: f64,
}

/// Density `2 <h_dot + f_dot g + f g_dot, i (h' + f g')>` of the
/// candidate symplectic form at `(t, r)`.
fn density_at(
    pair: &ShsPair,
    hdot: &ProfileCurve,
    gdot: &ProfileCurve,
    f: f64,
    fdot: f64,
    r: f64,
) -> Result<f64> {
    let nu_dot = hdot.eval(r, 0)? + pair.g.eval(r, 0)? * fdot + gdot.eval(r, 0)? * f;
    let nu_r = pair.h.eval(r, 1)? + pair.g.eval(r, 1)? * f;
    Ok(2.0 * ipair(nu_dot, nu_r))
}

fn cobordism_grid(
    gamma: &StableHomotopy,
    slope: f64,
    nt: usize,
    nr: usize,
) -> Result<(Vec<f64>, Vec<f64>, Vec<Vec<f64>>, f64)> {
    let (ta, tb) = gamma.interval;
    let mid = 0.5 * (ta + tb);
    let t_grid: Vec<f64> = (0..nt)
        .map(|j| ta + (tb - ta) * j as f64 / (nt - 1) as f64)
        .collect();
    let (ra, rb) = gamma.samples[0].pair.interval();
    let r_grid: Vec<f64> = (0..nr)
        .map(|j| ra + (rb - ra) * j as f64 / (nr - 1) as f64)
        .collect();
    let mut density = Vec::with_capacity(nt);
    let mut min_density = f64::INFINITY;
    for &t in &t_grid {
        // Velocities come from the segment interior to avoid the
        // ambiguity at shared sample times.
        let eps = 1e-9 * (tb - ta);
        let tv = if t >= tb { t - eps } else { t + eps };
        let (hdot, gdot) = gamma.velocity_at(tv)?;
        let pair = gamma.pair_at(t)?;
        let f = slope * (t - mid);
        let mut row = Vec::with_capacity(nr);
        for &r in &r_grid {
            let d = density_at(&pair, &hdot, &gdot, f, slope, r)?;
            min_density = min_density.min(d);
            row.push(d);
        }
        density.push(row);
    }
    Ok((t_grid, r_grid, density, min_density))
}

/// Build the strong cobordism of a short homotopy (`L < 1`): the linear
/// profile `f(t) = (A delta + B + delta/(b-a)) (t - (a+b)/2)`, with the
/// two positivity conditions re-verified on the t-grid and the 4-form
/// density checked on a 65 x 257 grid (doubled once on failure).
pub fn cobordism_from_short(gamma: &StableHomotopy) -> Result<CobordismForm> {
    let c = homotopy_constants(gamma)?;
    if c.length >= 1.0 {
        return Err(Error::obstruction(format!(
            "homotopy too long for a cobordism: L = {} >= 1",
            c.length
        )));
    }
    let (ta, tb) = gamma.interval;
    // An infinite deformation bound gives unbounded slack; cap it so the
    // linear profile stays finite.
    let delta_eff = if c.delta.is_finite() {
        c.delta
    } else {
        (c.a_max + c.b_max + 1.0) * (tb - ta) + 1.0
    };
    let slope = c.a_max * delta_eff + c.b_max + delta_eff / (tb - ta);
    let mid = 0.5 * (ta + tb);

    // Re-verify the two displayed conditions on the t-grid.
    let nt = 65;
    let mut f_samples = Vec::with_capacity(nt);
    for j in 0..nt {
        let t = ta + (tb - ta) * j as f64 / (nt - 1) as f64;
        let f = slope * (t - mid);
        if f.abs() >= c.delta {
            return Err(Error::numerical(format!(
                "profile violates |f| < delta at t = {t}: |{f}| >= {}",
                c.delta
            )));
        }
        if slope <= c.a_max * f.abs() + c.b_max {
            return Err(Error::numerical(format!(
                "profile violates f_dot > A|f| + B at t = {t}"
            )));
        }
        f_samples.push((t, f));
    }

    for (nt, nr) in [(65, 257), (129, 513)] {
        let (t_grid, r_grid, density, min_density) = cobordism_grid(gamma, slope, nt, nr)?;
        if min_density > 0.0 {
            return Ok(CobordismForm {
                homotopy: gamma.clone(),
                f_samples,
                f_slope: slope,
                t_grid,
                r_grid,
                density,
                min_density,
            });
        }
    }
    Err(Error::numerical(
        "cobordism density not positive on the refined grid".to_string(),
    ))
}

/// Build the back-and-forth cobordism over `[0, 3]` realizing both
/// homotopy directions: precompose with `tau = t, 2-t, t-2` and apply
/// [`cobordism_from_short`]; requires `L < 1/3`. Integer-time slices are
/// checked to land in the deformation class of `(omega_tau(t), lambda_tau(t))`.
pub fn triple_cobordism(gamma: &StableHomotopy) -> Result<CobordismForm> {
    let c = homotopy_constants(gamma)?;
    if c.length >= 1.0 / 3.0 {
        return Err(Error::obstruction(format!(
            "homotopy too long for the back-and-forth cobordism: L = {} >= 1/3",
            c.length
        )));
    }
    // Normalize time to [0, 1].
    let unit = transform(gamma, &TransformOp::Reparametrize { t0: 0.0, t1: 1.0 })?;
    let tau = |t: f64| -> f64 {
        if t <= 1.0 {
            t
        } else if t <= 2.0 {
            2.0 - t
        } else {
            t - 2.0
        }
    };
    let mut times: Vec<f64> = Vec::new();
    for s in &unit.samples {
        times.extend([s.t, 2.0 - s.t, 2.0 + s.t]);
    }
    times.sort_by(f64::total_cmp);
    times.dedup_by(|x, y| (*x - *y).abs() < 1e-12);
    let mut samples = Vec::with_capacity(times.len());
    for t in times {
        samples.push((t, unit.pair_at(tau(t))?));
    }
    let folded = StableHomotopy::from_samples(samples)?;
    let form = cobordism_from_short(&folded)?;

    // Slice checks at integer times: |f| < delta of the slice pair, the
    // deformed 2-form stays maximally nondegenerate, and the slice curve
    // is exactly h + f g.
    let slope = form.f_slope;
    for t in [0.0, 1.0, 2.0, 3.0] {
        let pair = unit.pair_at(tau(t))?;
        let f = slope * (t - 1.5);
        let bounds = delta_bounds(&pair)?;
        if !(-bounds.minus < f && f < bounds.plus) {
            return Err(Error::numerical(format!(
                "slice at t = {t} leaves the deformation interval (f = {f})"
            )));
        }
        let slice = curve::combine(&[(1.0, &pair.h), (f, &pair.g)])?;
        let expect = |r: f64| -> Result<f64> {
            Ok((slice.eval(r, 0)? - (pair.h.eval(r, 0)? + pair.g.eval(r, 0)? * f)).norm())
        };
        for r in pair.grid(64) {
            if expect(r)? > 1e-9 {
                return Err(Error::numerical(format!(
                    "slice at t = {t} deviates from omega + f d lambda at r = {r}"
                )));
            }
        }
    }
    Ok(form)
}
