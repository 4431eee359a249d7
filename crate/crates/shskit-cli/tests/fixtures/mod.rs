//! Shared fixtures for the CLI-side integration tests.
#![allow(dead_code)]

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use shskit::curve::{HermiteNode, ProfileCurve};
use shskit::geom::{v2, Vec2};
use shskit::homotopy::StableHomotopy;
use shskit::shs::ShsPair;
use std::f64::consts::PI;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Cumulative per-interval Simpson integration of a tangent field into a
/// dense Hermite curve.
pub fn curve_from_tangent(
    interval: (f64, f64),
    n: usize,
    h0: Vec2,
    dh: impl Fn(f64) -> Vec2,
) -> ProfileCurve {
    let (a, b) = interval;
    let mut nodes = Vec::with_capacity(n);
    let mut acc = h0;
    for j in 0..n {
        let r = a + (b - a) * j as f64 / (n - 1) as f64;
        if j > 0 {
            let r0 = a + (b - a) * (j - 1) as f64 / (n - 1) as f64;
            let m = 0.5 * (r0 + r);
            acc = acc + (dh(r0) + dh(m) * 4.0 + dh(r)) * ((r - r0) / 6.0);
        }
        nodes.push(HermiteNode {
            r,
            h: acc,
            dh: dh(r),
        });
    }
    ProfileCurve::hermite(nodes, 0.0).unwrap()
}

/// Random immersed curve on [0, 1] with interior slope variation of at
/// least ~0.15 rad and smooth onset.
pub fn random_wiggle_curve(rng: &mut ChaCha8Rng) -> ProfileCurve {
    let theta0: f64 = rng.gen_range(-PI..PI);
    let amp = rng.gen_range(0.15..1.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let speed0 = rng.gen_range(0.5..1.5);
    let h0 = v2(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let dh = move |r: f64| -> Vec2 {
        let u = ((r - 0.1) / 0.8).clamp(0.0, 1.0);
        let s = (PI * u).sin();
        let sigma = theta0 + amp * s * s * s * s;
        Vec2::from_angle(sigma) * speed0
    };
    curve_from_tangent((0.0, 1.0), 513, h0, dh)
}

/// Immersed curve on [0, 1], straight on [0, 0.1] and [0.9, 1], with an
/// interior slope wiggle of size `amp`.
pub fn straight_germ_curve(amp: f64) -> ProfileCurve {
    let n = 513;
    let mut nodes = Vec::with_capacity(n);
    for j in 0..n {
        let r = j as f64 / (n - 1) as f64;
        let u = ((r - 0.1) / 0.8).clamp(0.0, 1.0);
        let s = (PI * u).sin();
        let w = amp * s * s * s * s;
        let dw = if r > 0.1 && r < 0.9 {
            4.0 * amp * PI * s * s * s * (PI * u).cos() / 0.8
        } else {
            0.0
        };
        nodes.push(HermiteNode {
            r,
            h: v2(r, 0.5 - r + w),
            dh: v2(1.0, -1.0 + dw),
        });
    }
    ProfileCurve::hermite(nodes, 0.0).unwrap()
}

/// Graph curve `h(r) = (r, c0 + c1 r + sum_k a_k sin(k pi r))`; curves
/// sharing `(c0, c1)` share both endpoints.
pub fn graph_curve(c0: f64, c1: f64, amps: &[f64]) -> ProfileCurve {
    let n = 513;
    let mut nodes = Vec::with_capacity(n);
    for j in 0..n {
        let r = j as f64 / (n - 1) as f64;
        let mut phi = c0 + c1 * r;
        let mut dphi = c1;
        for (k, &a) in amps.iter().enumerate() {
            let w = (k + 1) as f64 * PI;
            phi += a * (w * r).sin();
            dphi += a * w * (w * r).cos();
        }
        nodes.push(HermiteNode {
            r,
            h: v2(r, phi),
            dh: v2(1.0, dphi),
        });
    }
    ProfileCurve::hermite(nodes, 0.0).unwrap()
}

/// Signed area of the closed polygon `h0` forward then `h1` backward.
pub fn loop_shoelace_area(h0: &ProfileCurve, h1: &ProfileCurve, n: usize) -> f64 {
    let (a, b) = h0.interval();
    let mut pts: Vec<Vec2> = Vec::with_capacity(2 * n);
    for j in 0..n {
        let r = a + (b - a) * j as f64 / (n - 1) as f64;
        pts.push(h0.eval(r, 0).unwrap());
    }
    for j in (0..n).rev() {
        let r = a + (b - a) * j as f64 / (n - 1) as f64;
        pts.push(h1.eval(r, 0).unwrap());
    }
    let mut twice = 0.0;
    for i in 0..pts.len() {
        let p = pts[i];
        let q = pts[(i + 1) % pts.len()];
        twice += p.x * q.y - q.x * p.y;
    }
    0.5 * twice
}

/// Brute-force deformation bounds: largest |t| per sign keeping
/// `h' + t g'` a positive multiple of `h'` on a 512-point interior grid;
/// values above `t_cap` are reported as infinite.
pub fn brute_delta(pair: &ShsPair, t_cap: f64) -> (f64, f64) {
    let rs = pair.interior_grid(512);
    let data: Vec<(Vec2, Vec2)> = rs
        .iter()
        .map(|&r| (pair.h.eval(r, 1).unwrap(), pair.g.eval(r, 1).unwrap()))
        .collect();
    let degenerate =
        |t: f64| -> bool { data.iter().any(|&(dh, dg)| (dh + dg * t).dot(dh) <= 0.0) };
    let side = |sign: f64| -> f64 {
        let mut good = 0.0;
        let mut bad = None;
        let n = 4096;
        for j in 1..=n {
            let t = 1e-4 * (t_cap / 1e-4_f64).powf(j as f64 / n as f64);
            if degenerate(sign * t) {
                bad = Some(t);
                break;
            }
            good = t;
        }
        let Some(mut bad) = bad else {
            return f64::INFINITY;
        };
        if good == 0.0 {
            return 0.0;
        }
        for _ in 0..60 {
            let m = 0.5 * (good + bad);
            if degenerate(sign * m) {
                bad = m;
            } else {
                good = m;
            }
        }
        0.5 * (good + bad)
    };
    (side(-1.0), side(1.0))
}

/// An interior-perturbed standard pair: same ends as the standard pair,
/// different curve; kernel field still contact (g = h).
pub fn perturbed_standard(amp: f64) -> ShsPair {
    let n = 513;
    let mut nodes = Vec::with_capacity(n);
    for j in 0..n {
        let r = j as f64 / (n - 1) as f64;
        let s = (PI * r).sin();
        let w = amp * s * s;
        let dw = amp * PI * (2.0 * PI * r).sin();
        nodes.push(HermiteNode {
            r,
            h: v2(r * r + w, 1.0 - r * r),
            dh: v2(2.0 * r + dw, -2.0 * r),
        });
    }
    let h = ProfileCurve::hermite(nodes, 0.0).unwrap();
    let g = h.clone();
    ShsPair::new(h, g).unwrap()
}

/// Random homotopy of scaled standard pairs `(c(t) h_st, d(t) h_st)` on
/// `t` in [0, 1], with log-amplitudes bounded by `amp` (which bounds the
/// homotopy length roughly by `3.7 * amp * pi`).
pub fn random_scaled_homotopy(
    rng: &mut ChaCha8Rng,
    r_interval: (f64, f64),
    amp: f64,
) -> StableHomotopy {
    let a = rng.gen_range(0.2..1.0) * amp;
    let b = rng.gen_range(0.2..1.0) * amp;
    let (w1, p1) = (rng.gen_range(1.0..PI), rng.gen_range(0.0..PI));
    let (w2, p2) = (rng.gen_range(1.0..PI), rng.gen_range(0.0..PI));
    let c = move |t: f64| (a * (w1 * t + p1).sin()).exp();
    let d = move |t: f64| (b * (w2 * t + p2).sin()).exp();
    let samples: Vec<(f64, ShsPair)> = (0..17)
        .map(|j| {
            let t = j as f64 / 16.0;
            let h = ProfileCurve::standard(c(t), r_interval);
            let g = ProfileCurve::standard(d(t), r_interval);
            (t, ShsPair::new(h, g).unwrap())
        })
        .collect();
    StableHomotopy::from_samples(samples).unwrap()
}
