//! Verification and invariants of torus-invariant stable Hamiltonian
//! structures `(h, g)`, plus Reeb dynamics on invariant tori.
//!
//! Throughout, `D(r) = <g, i h'> = h_1' g_2 - h_2' g_1` is the volume
//! density of the structure and must be positive on the interior.

use crate::curve::{AngleLift, ProfileCurve};
use crate::error::{Error, Result};
use crate::geom::{ipair, Vec2};
use crate::num::{bisect, integrate, rational_directions, RationalDir, BISECT_TOL, QUAD_TOL};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Default residual bound for [`verify`].
pub const DEFAULT_VERIFY_TOL: f64 = 1e-7;

/// A torus-invariant SHS candidate: curves `(h, g)` plus tolerances.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ShsPair {
    pub h: ProfileCurve,
    pub g: ProfileCurve,
    /// Residual bound for the first stabilization condition.
    #[serde(default = "default_verify_tol")]
    pub verify_tol: f64,
    /// Margin: strict positivity of `<g, i h'>` is only required on
    /// `[a + margin, b - margin]` (binding-adjacent regions may vanish).
    #[serde(default)]
    pub boundary_exempt: f64,
}

fn default_verify_tol() -> f64 {
    DEFAULT_VERIFY_TOL
}

impl ShsPair {
    pub fn new(h: ProfileCurve, g: ProfileCurve) -> Result<ShsPair> {
        let (a, b) = h.interval();
        let (a2, b2) = g.interval();
        let tol = 1e-12 * (b - a).max(1.0);
        if (a - a2).abs() > tol || (b - b2).abs() > tol {
            return Err(Error::domain(format!(
                "curves must share one interval: [{a}, {b}] vs [{a2}, {b2}]"
            )));
        }
        Ok(ShsPair {
            h,
            g,
            verify_tol: DEFAULT_VERIFY_TOL,
            boundary_exempt: 0.0,
        })
    }

    pub fn with_boundary_exempt(mut self, margin: f64) -> Self {
        self.boundary_exempt = margin;
        self
    }

    pub fn interval(&self) -> (f64, f64) {
        self.h.interval()
    }

    /// Shared evaluation grid for pair-level checks.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        let mut g = self.h.sample_grid(n);
        g.extend(self.g.node_positions());
        g.sort_by(f64::total_cmp);
        g.dedup_by(|x, y| (*x - *y).abs() < 1e-14 * self.h.span().max(1.0));
        g
    }

    /// Grid points strictly inside `[a + margin, b - margin]`.
    pub fn interior_grid(&self, n: usize) -> Vec<f64> {
        let (a, b) = self.interval();
        let m = self.boundary_exempt;
        self.grid(n)
            .into_iter()
            .filter(|&r| r > a + m && r < b - m)
            .collect()
    }

    /// The pairing `D(r) = <g, i h'>`.
    pub fn pairing(&self, r: f64) -> Result<f64> {
        Ok(ipair(self.g.eval(r, 0)?, self.h.eval(r, 1)?))
    }
}

/// Report of the two stabilization conditions.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct VerifyReport {
    /// `sup |<g', i h'>|` over the grid, normalized by `sup|g'| sup|h'|`.
    pub residual_sup: f64,
    /// `min <g, i h'>` over the interior grid.
    pub min_pairing: f64,
    pub ok: bool,
}

/// Check both stabilization conditions on a 512-point grid.
pub fn verify(pair: &ShsPair) -> Result<VerifyReport> {
    let grid = pair.grid(512);
    let mut residual_raw = 0.0_f64;
    let mut sup_dg = 0.0_f64;
    let mut sup_dh = 0.0_f64;
    let mut sup_g = 0.0_f64;
    for &r in &grid {
        let dh = pair.h.eval(r, 1)?;
        let dg = pair.g.eval(r, 1)?;
        residual_raw = residual_raw.max(ipair(dg, dh).abs());
        sup_dg = sup_dg.max(dg.norm());
        sup_dh = sup_dh.max(dh.norm());
        sup_g = sup_g.max(pair.g.eval(r, 0)?.norm());
    }
    // Normalize by the derivative scales; for (nearly) constant `g` the
    // derivative scale degenerates to rounding noise, so floor it by the
    // value scale of `g` per unit length.
    let (a, b) = pair.interval();
    let dg_scale = sup_dg.max(sup_g / (b - a));
    let residual_sup = residual_raw / (dg_scale * sup_dh).max(1e-300);
    let mut min_pairing = f64::INFINITY;
    for r in pair.interior_grid(512) {
        min_pairing = min_pairing.min(pair.pairing(r)?);
    }
    Ok(VerifyReport {
        residual_sup,
        min_pairing,
        ok: residual_sup <= pair.verify_tol && min_pairing > 0.0,
    })
}

/// Sampled proportionality coefficient `f` with `d lambda = f omega`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Proportionality {
    /// (r, f(r)) samples over the interior grid.
    pub samples: Vec<(f64, f64)>,
    pub min: f64,
    pub max: f64,
    /// Whether `f` is constant within tolerance.
    pub constant: bool,
}

/// `f(r) = <g', h'> / |h'|^2` on the interior grid, with a constancy report.
pub fn proportionality(pair: &ShsPair) -> Result<Proportionality> {
    let mut samples = Vec::new();
    let floor = pair.h.immersion_floor();
    for r in pair.interior_grid(512) {
        let dh = pair.h.eval(r, 1)?;
        if dh.norm() < floor {
            return Err(Error::domain(format!(
                "immersion violation at r = {r} while sampling the proportionality coefficient"
            )));
        }
        let dg = pair.g.eval(r, 1)?;
        samples.push((r, dg.dot(dh) / dh.norm_sq()));
    }
    let min = samples.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
    let max = samples.iter().map(|s| s.1).fold(f64::NEG_INFINITY, f64::max);
    let constant = max - min <= 1e-9 * (1.0 + max.abs().max(min.abs()));
    Ok(Proportionality {
        samples,
        min,
        max,
        constant,
    })
}

/// Deformation interval bounds: `omega + t d lambda` stays maximally
/// nondegenerate for `t` in `(-minus, plus)`; entries may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaBounds {
    pub minus: f64,
    pub plus: f64,
}

impl DeltaBounds {
    /// `min(minus, plus)` — the symmetric bound used by the length
    /// functional of stable homotopies.
    pub fn symmetric(&self) -> f64 {
        self.minus.min(self.plus)
    }
}

/// Closed form for the deformation bounds: since
/// `omega + t d lambda = (1 + t f(r)) omega`, degeneration first occurs
/// where `1 + t f(r) = 0`.
pub fn delta_bounds(pair: &ShsPair) -> Result<DeltaBounds> {
    let f = proportionality(pair)?;
    let plus = if f.min >= 0.0 { f64::INFINITY } else { -1.0 / f.min };
    let minus = if f.max <= 0.0 { f64::INFINITY } else { 1.0 / f.max };
    Ok(DeltaBounds { minus, plus })
}

/// Helicity data of the pair on the region `[a,b] x T^2`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct HelicityData {
    /// `Hc = Int <h, i h'> dr` — helicity contribution of the 2-form.
    pub hc: f64,
    /// `P = Int <g, i h'> dr` — the `lambda ^ omega` coefficient.
    pub p: f64,
    /// `Q2 = Int <g, i g'> dr` — the `lambda ^ d lambda` coefficient.
    pub q2: f64,
}

impl HelicityData {
    /// `Hel(omega + t d lambda) - Hel(omega) = 2 t P + t^2 Q2`.
    pub fn helicity_shift(&self, t: f64) -> f64 {
        2.0 * t * self.p + t * t * self.q2
    }
}

/// Adaptive quadrature of the three helicity integrals.
pub fn helicity_data(pair: &ShsPair) -> Result<HelicityData> {
    let (a, b) = pair.interval();
    let h = &pair.h;
    let g = &pair.g;
    let hc = integrate(
        |r| ipair(h.eval(r, 0).unwrap(), h.eval(r, 1).unwrap()),
        a,
        b,
        QUAD_TOL,
    )?;
    let p = integrate(
        |r| ipair(g.eval(r, 0).unwrap(), h.eval(r, 1).unwrap()),
        a,
        b,
        QUAD_TOL,
    )?;
    let q2 = integrate(
        |r| ipair(g.eval(r, 0).unwrap(), g.eval(r, 1).unwrap()),
        a,
        b,
        QUAD_TOL,
    )?;
    Ok(HelicityData { hc, p, q2 })
}

/// Helicity contribution of a single curve: `Int <h, i h'> dr`.
pub fn helicity_contribution(h: &ProfileCurve) -> Result<f64> {
    let (a, b) = h.interval();
    integrate(
        |r| ipair(h.eval(r, 0).unwrap(), h.eval(r, 1).unwrap()),
        a,
        b,
        QUAD_TOL,
    )
}

/// A parameter value where the slope crosses a rational direction.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CensusPoint {
    pub r: f64,
    pub p: i64,
    pub q: i64,
}

/// A parameter band on which the slope is constantly equal to a rational
/// direction.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CensusBand {
    pub r0: f64,
    pub r1: f64,
    pub p: i64,
    pub q: i64,
}

/// All rational-slope loci with denominator bound `q_max`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RationalCensus {
    pub points: Vec<CensusPoint>,
    pub bands: Vec<CensusBand>,
}

/// Enumerate all parameter values (and constancy bands) where the slope
/// direction is rational with `|p|, |q| <= q_max`. Crossings are found by
/// bracketing the angle lift against the rational angles and refined by
/// bisection to 1e-10 in r.
pub fn rational_census(h: &ProfileCurve, q_max: u32) -> Result<RationalCensus> {
    let lift = AngleLift::build(h)?;
    let dirs = rational_directions(q_max);
    let samples = lift.samples();
    let span = h.span();

    let band_tol = 1e-9;
    let mut bands: Vec<CensusBand> = Vec::new();
    let mut in_band: Option<(usize, RationalDir)> = None;
    // Maximal runs of constant rational slope.
    for i in 0..samples.len() {
        let still = i > 0 && (samples[i].1 - samples[i - 1].1).abs() <= band_tol;
        match (&in_band, still) {
            (Some(_), true) => {}
            (state, _) => {
                if let Some((start, d)) = state {
                    if i > start + 1 && samples[i - 1].0 - samples[*start].0 > 1e-6 * span {
                        bands.push(CensusBand {
                            r0: samples[*start].0,
                            r1: samples[i - 1].0,
                            p: d.p,
                            q: d.q,
                        });
                    }
                }
                let theta = samples[i].1;
                let (best, dist) = crate::num::nearest_rational(&dirs, theta);
                in_band = (dist <= band_tol).then_some((i, best));
            }
        }
    }
    if let Some((start, d)) = in_band {
        let last = samples.len() - 1;
        if last > start && samples[last].0 - samples[start].0 > 1e-6 * span {
            bands.push(CensusBand {
                r0: samples[start].0,
                r1: samples[last].0,
                p: d.p,
                q: d.q,
            });
        }
    }

    // Transversal crossings: for each lift step, collect the lifted copies
    // of every rational angle inside the step's sigma range.
    let mut points: Vec<CensusPoint> = Vec::new();
    for w in samples.windows(2) {
        let (r0, s0) = w[0];
        let (r1, s1) = w[1];
        if (s1 - s0).abs() <= band_tol {
            continue;
        }
        let (lo, hi) = if s0 < s1 { (s0, s1) } else { (s1, s0) };
        for d in &dirs {
            // Lifted copies d.angle + 2 pi k inside (lo, hi].
            let kmin = ((lo - d.angle) / TAU).ceil() as i64 - 1;
            let kmax = ((hi - d.angle) / TAU).floor() as i64 + 1;
            for k in kmin..=kmax {
                let target = d.angle + TAU * k as f64;
                if target <= lo - band_tol || target > hi + band_tol {
                    continue;
                }
                let f = |r: f64| lift.sigma_at(h, r).unwrap_or(f64::NAN) - target;
                let r = if (f(r0)).abs() <= band_tol {
                    r0
                } else if (f(r1)).abs() <= band_tol {
                    r1
                } else {
                    match bisect(f, r0, r1, BISECT_TOL) {
                        Ok(r) => r,
                        Err(_) => continue,
                    }
                };
                points.push(CensusPoint { r, p: d.p, q: d.q });
            }
        }
    }
    points.sort_by(|a, b| a.r.total_cmp(&b.r));
    points.dedup_by(|a, b| (a.r - b.r).abs() < 1e-9 * span && (a.p, a.q) == (b.p, b.q));
    // Drop points that lie inside reported constancy bands.
    points.retain(|pt| {
        !bands
            .iter()
            .any(|b| pt.r >= b.r0 - 1e-9 * span && pt.r <= b.r1 + 1e-9 * span)
    });
    Ok(RationalCensus { points, bands })
}

/// Reeb field `(theta, phi)` components at `r`:
/// `R = (-h_2', h_1') / D` with `D = <g, i h'> > 0`.
pub fn reeb_field(pair: &ShsPair, r: f64) -> Result<Vec2> {
    let d = pair.pairing(r)?;
    if d <= 0.0 {
        return Err(Error::obstruction(format!(
            "stabilization violation: <g, i h'>({r}) = {d:.3e} <= 0"
        )));
    }
    let dh = pair.h.eval(r, 1)?;
    Ok(dh.rot90() * (1.0 / d))
}

/// Closed Reeb orbit data on a rational invariant torus.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct OrbitData {
    pub r: f64,
    /// Primitive homology direction of the orbit on the torus: the Reeb
    /// field is parallel to `(-q, p)` when the slope is tagged `(p, q)`.
    pub direction: (i64, i64),
    /// Minimal period `T > 0` with `T * R` integral.
    pub period: f64,
    /// `E_lambda = T` (since `lambda(R) = 1`).
    pub e_lambda: f64,
    /// `E_omega = T <h, i h'> / D`.
    pub e_omega: f64,
}

/// Minimal closed Reeb orbit at `r`; requires a rational slope with
/// denominator bound `q_max`.
pub fn closed_orbit(pair: &ShsPair, r: f64, q_max: u32) -> Result<OrbitData> {
    let sl = crate::curve::slope(&pair.h, r, q_max)?;
    let Some((p, q)) = sl.rational_tag else {
        return Err(Error::domain(format!(
            "no closed orbit: slope at r = {r} is not rational with denominator bound {q_max}"
        )));
    };
    let d = pair.pairing(r)?;
    if d <= 0.0 {
        return Err(Error::obstruction(format!(
            "stabilization violation: <g, i h'>({r}) = {d:.3e} <= 0"
        )));
    }
    let dh = pair.h.eval(r, 1)?;
    let len = ((p * p + q * q) as f64).sqrt();
    let period = d * len / dh.norm();
    let beta = ipair(pair.h.eval(r, 0)?, dh);
    Ok(OrbitData {
        r,
        direction: (-q, p),
        period,
        e_lambda: period,
        e_omega: period * beta / d,
    })
}

/// Linearized return map of the closed orbit at `r` in the coordinates
/// `(r, theta, phi)`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LinearizedReturn {
    pub matrix: [[f64; 3]; 3],
    /// Dimension of the fixed space `ker(M - 1)`: 2 at Morse-Bott tori,
    /// 3 on constant-slope bands.
    pub kernel_dim: u8,
}

/// `D Phi_T = [[1,0,0], [-k_2' T, 1, 0], [k_1' T, 0, 1]]` with
/// `k_i = h_i' / D`.
pub fn linearized_return(pair: &ShsPair, r: f64, q_max: u32) -> Result<LinearizedReturn> {
    let orbit = closed_orbit(pair, r, q_max)?;
    let t = orbit.period;
    let d = pair.pairing(r)?;
    let dh = pair.h.eval(r, 1)?;
    let ddh = pair.h.eval(r, 2)?;
    let dg = pair.g.eval(r, 1)?;
    let g0 = pair.g.eval(r, 0)?;
    // D' = <g', i h'> + <g, i h''>.
    let dprime = ipair(dg, dh) + ipair(g0, ddh);
    let k1p = (ddh.x * d - dh.x * dprime) / (d * d);
    let k2p = (ddh.y * d - dh.y * dprime) / (d * d);
    let matrix = [
        [1.0, 0.0, 0.0],
        [-k2p * t, 1.0, 0.0],
        [k1p * t, 0.0, 1.0],
    ];
    let scale = (dh.norm() / d).max(1e-300);
    let kernel_dim = if (k1p.abs() + k2p.abs()) * t > 1e-9 * scale {
        2
    } else {
        3
    };
    Ok(LinearizedReturn { matrix, kernel_dim })
}

/// Morse-Bott verdict over the rational census.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MorseBottVerdict {
    MorseBott,
    Degenerate,
    /// No rational slope in range — the criterion is vacuously true.
    Vacuous,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MorseBottReport {
    pub verdict: MorseBottVerdict,
    /// (r, (p, q), determinant `h_1'' h_2' - h_1' h_2''`) per census point.
    pub witnesses: Vec<(f64, (i64, i64), f64)>,
    /// Bands of constant rational slope; on such a band the determinant
    /// vanishes identically but the family is nondegenerate in the family
    /// sense, so bands are flagged rather than counted as degeneracy.
    pub constant_bands: Vec<CensusBand>,
}

/// Evaluate the Morse-Bott determinant criterion at every rational-slope
/// parameter with denominator bound `q_max`.
pub fn morse_bott_check(pair: &ShsPair, q_max: u32) -> Result<MorseBottReport> {
    let census = rational_census(&pair.h, q_max)?;
    let grid = pair.h.sample_grid(512);
    let mut scale = 0.0_f64;
    for &r in &grid {
        let dh = pair.h.eval(r, 1)?;
        let ddh = pair.h.eval(r, 2)?;
        scale = scale.max(dh.norm() * ddh.norm());
    }
    let tol = 1e-9 * scale.max(1.0);
    let mut witnesses = Vec::new();
    let mut degenerate = false;
    for pt in &census.points {
        let dh = pair.h.eval(pt.r, 1)?;
        let ddh = pair.h.eval(pt.r, 2)?;
        let det = ddh.x * dh.y - dh.x * ddh.y;
        if det.abs() < tol {
            degenerate = true;
        }
        witnesses.push((pt.r, (pt.p, pt.q), det));
    }
    let verdict = if degenerate {
        MorseBottVerdict::Degenerate
    } else if witnesses.is_empty() && census.bands.is_empty() {
        MorseBottVerdict::Vacuous
    } else {
        MorseBottVerdict::MorseBott
    };
    Ok(MorseBottReport {
        verdict,
        witnesses,
        constant_bands: census.bands,
    })
}

/// Tameness diagnostics: zeros of `beta(R)` and the `E_lambda / |E_omega|`
/// ratio table over the rational census.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TamenessScan {
    /// Interior roots of `r -> <h, i h'>` (vanishing tori of `alpha_h(R)`).
    pub zeros_of_alpha_r: Vec<f64>,
    /// (r, E_lambda / |E_omega|) over rational tori; infinite entries mark
    /// tori with vanishing omega-energy.
    pub ratio_table: Vec<(f64, f64)>,
}

/// Scan for non-tameness: roots of `<h, i h'>` by sign bracketing, and
/// energy ratios on the rational tori of the census.
pub fn tameness_scan(pair: &ShsPair, q_max: u32) -> Result<TamenessScan> {
    let (a, b) = pair.interval();
    let h = &pair.h;
    let beta = |r: f64| ipair(h.eval(r, 0).unwrap(), h.eval(r, 1).unwrap());
    let grid = pair.interior_grid(1024);
    let mut zeros = Vec::new();
    for w in grid.windows(2) {
        let (f0, f1) = (beta(w[0]), beta(w[1]));
        if f0 == 0.0 {
            zeros.push(w[0]);
        } else if f0.signum() != f1.signum() && f1 != 0.0 {
            zeros.push(bisect(beta, w[0], w[1], BISECT_TOL)?);
        }
    }
    zeros.dedup_by(|x, y| (*x - *y).abs() < 1e-8 * (b - a));

    let census = rational_census(h, q_max)?;
    let mut ratio_table = Vec::new();
    for pt in &census.points {
        let orbit = closed_orbit(pair, pt.r, q_max)?;
        let ratio = if orbit.e_omega == 0.0 {
            f64::INFINITY
        } else {
            orbit.e_lambda / orbit.e_omega.abs()
        };
        ratio_table.push((pt.r, ratio));
    }
    Ok(TamenessScan {
        zeros_of_alpha_r: zeros,
        ratio_table,
    })
}
