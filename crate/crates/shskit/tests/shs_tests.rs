//! Verification, invariants, and Reeb dynamics of torus-invariant pairs.

mod common;

use common::{brute_delta, graph_curve, loop_shoelace_area, standard_pair};
use shskit::curve::{NamedCurve, ProfileCurve};
use shskit::error::Error;
use shskit::geom::v2;
use shskit::shs::{self, MorseBottVerdict, ShsPair};
use shskit::stabilize::{self, BoundaryData};
use rand::Rng;

fn parabola_pair() -> ShsPair {
    let h = ProfileCurve::named(NamedCurve::Parabola, (0.0, 1.0), 0.0).unwrap();
    let g = stabilize::special_stabilizer(&h, 1.0).unwrap();
    ShsPair::new(h, g).unwrap()
}

#[test]
fn verify_accepts_standard_pair() {
    let rep = shs::verify(&standard_pair()).unwrap();
    assert!(rep.ok, "{rep:?}");
    assert!(rep.residual_sup < 1e-12);
    assert!(rep.min_pairing > 0.0);
}

#[test]
fn verify_rejects_nonperpendicular_stabilizer() {
    let h = ProfileCurve::standard(1.0, (0.0, 1.0));
    let g = ProfileCurve::named(
        NamedCurve::Linear {
            p0: v2(0.0, 1.0),
            v: v2(1.0, 1.0),
        },
        (0.0, 1.0),
        0.0,
    )
    .unwrap();
    let rep = shs::verify(&ShsPair::new(h, g).unwrap()).unwrap();
    assert!(!rep.ok);
    assert!(rep.residual_sup > 1e-2);
}

#[test]
fn verify_rejects_negative_pairing() {
    let h = ProfileCurve::standard(1.0, (0.1, 1.0));
    let g = stabilize::special_stabilizer(&h, 1.0).unwrap();
    let neg = shskit::curve::combine(&[(-1.0, &g)]).unwrap();
    let rep = shs::verify(&ShsPair::new(h, neg).unwrap()).unwrap();
    assert!(!rep.ok);
    assert!(rep.min_pairing < 0.0);
    assert!(rep.residual_sup < 1e-6, "perpendicularity is unaffected");
}

#[test]
fn proportionality_of_scaled_standard_is_constant() {
    let h = ProfileCurve::standard(1.0, (0.0, 1.0));
    let g = ProfileCurve::standard(2.0, (0.0, 1.0));
    let f = shs::proportionality(&ShsPair::new(h.clone(), g).unwrap()).unwrap();
    assert!(f.constant);
    assert!((f.min - 2.0).abs() < 1e-9 && (f.max - 2.0).abs() < 1e-9);

    // Rotated-tangent stabilizer: g' is perpendicular to h', so f = 0.
    let h = ProfileCurve::standard(1.0, (0.1, 0.9));
    let g = stabilize::special_stabilizer(&h, 0.7).unwrap();
    let f = shs::proportionality(&ShsPair::new(h, g).unwrap()).unwrap();
    assert!(f.min.abs() < 1e-8 && f.max.abs() < 1e-8);
}

#[test]
fn delta_bounds_closed_form_for_scaled_standard() {
    let h = ProfileCurve::standard(1.0, (0.0, 1.0));
    let g = ProfileCurve::standard(2.0, (0.0, 1.0));
    let b = shs::delta_bounds(&ShsPair::new(h, g).unwrap()).unwrap();
    assert!((b.minus - 0.5).abs() < 1e-9);
    assert!(b.plus.is_infinite());
    assert!((b.symmetric() - 0.5).abs() < 1e-9);
}

#[test]
fn delta_bounds_match_brute_force_scan() {
    let mut rng = common::rng(42);
    for case in 0..6 {
        let h = common::random_wiggle_curve(&mut rng);
        let c = rng.gen_range(0.5..1.5);
        let bd = BoundaryData::special(&h, c, 0.08).unwrap();
        let g = stabilize::boundary_value_stabilizer(&h, &bd).unwrap();
        let pair = ShsPair::new(h, g).unwrap();
        let closed = shs::delta_bounds(&pair).unwrap();
        let cap = 1e4;
        let (bm, bp) = brute_delta(&pair, cap);
        // Bounds beyond the scan cap are indistinguishable from infinite.
        let eff = |x: f64| if x > cap { f64::INFINITY } else { x };
        for (name, a, b) in [
            ("minus", eff(closed.minus), eff(bm)),
            ("plus", eff(closed.plus), eff(bp)),
        ] {
            if a.is_infinite() || b.is_infinite() {
                assert!(
                    a.is_infinite() && b.is_infinite(),
                    "case {case} {name}: {a} vs {b}"
                );
            } else {
                assert!(
                    (a - b).abs() <= 1e-3 * (1.0 + a.abs()),
                    "case {case} {name}: {a} vs {b}"
                );
            }
        }
    }
}

#[test]
fn helicity_of_standard_curve_is_one() {
    let h = ProfileCurve::standard(1.0, (0.0, 1.0));
    let hc = shs::helicity_contribution(&h).unwrap();
    assert!((hc - 1.0).abs() < 1e-9, "Hc = {hc}");
}

#[test]
fn helicity_data_of_special_pair() {
    // h = h_st, g = c i h'/|h'|: P = c Int |h'| = c sqrt(2), Q2 = 0
    // (g is constant), and the shift polynomial follows.
    let c = 0.8;
    let h = ProfileCurve::standard(1.0, (0.0, 1.0));
    // The rotated unit tangent of the standard curve is constant.
    let dir = v2(1.0, -1.0).normalize().rot90() * c;
    let nodes = (0..=8)
        .map(|j| shskit::curve::HermiteNode {
            r: j as f64 / 8.0,
            h: dir,
            dh: v2(0.0, 0.0),
        })
        .collect();
    let g = ProfileCurve::hermite(nodes, 0.0).unwrap();
    let pair = ShsPair::new(h, g).unwrap();
    let data = shs::helicity_data(&pair).unwrap();
    assert!((data.hc - 1.0).abs() < 1e-9);
    assert!((data.p - c * std::f64::consts::SQRT_2).abs() < 1e-8, "P = {}", data.p);
    assert!(data.q2.abs() < 1e-9);
    let t = 0.3;
    assert!((data.helicity_shift(t) - (2.0 * t * data.p + t * t * data.q2)).abs() < 1e-15);
}

#[test]
fn helicity_difference_is_twice_enclosed_area() {
    // Two graph curves with equal endpoints bound a loop; the difference
    // of their helicity contributions is (twice) its signed area.
    let h0 = graph_curve(0.5, -1.0, &[0.2, -0.1]);
    let h1 = graph_curve(0.5, -1.0, &[-0.15, 0.05, 0.08]);
    let d = shs::helicity_contribution(&h1).unwrap() - shs::helicity_contribution(&h0).unwrap();
    let area = loop_shoelace_area(&h0, &h1, 4096);
    assert!(
        (d.abs() - 2.0 * area.abs()).abs() < 1e-6,
        "|dHc| = {}, 2|A| = {}",
        d.abs(),
        2.0 * area.abs()
    );
}

#[test]
fn rational_census_of_parabola() {
    let h = ProfileCurve::named(NamedCurve::Parabola, (0.0, 1.0), 0.0).unwrap();
    let census = shs::rational_census(&h, 3).unwrap();
    assert!(census.bands.is_empty());
    let expect = [(0.0, 1, 0), (1.0 / 3.0, 3, 1), (0.5, 2, 1), (2.0 / 3.0, 3, 2), (1.0, 1, 1)];
    assert_eq!(census.points.len(), expect.len(), "{:?}", census.points);
    for (pt, (r, p, q)) in census.points.iter().zip(expect) {
        assert!((pt.r - r).abs() < 1e-8, "{pt:?} vs r = {r}");
        assert_eq!((pt.p, pt.q), (p, q));
    }
}

#[test]
fn rational_census_reports_constant_bands() {
    let h = ProfileCurve::named(
        NamedCurve::Linear {
            p0: v2(1.0, 0.5),
            v: v2(1.0, 1.0),
        },
        (0.0, 1.0),
        0.0,
    )
    .unwrap();
    let census = shs::rational_census(&h, 4).unwrap();
    assert!(census.points.is_empty());
    assert_eq!(census.bands.len(), 1);
    let b = &census.bands[0];
    assert_eq!((b.p, b.q), (1, 1));
    assert!(b.r0 < 0.01 && b.r1 > 0.99);
}

#[test]
fn reeb_field_of_standard_pair() {
    let pair = standard_pair();
    // D(1/2) = 2r = 1 and h'(1/2) = (1, -1), so R = i h' / D = (1, 1).
    let f = shs::reeb_field(&pair, 0.5).unwrap();
    assert!((f - v2(1.0, 1.0)).norm() < 1e-12, "{f:?}");
}

#[test]
fn closed_orbit_oracle_on_parabola_pair() {
    let pair = parabola_pair();
    let orbit = shs::closed_orbit(&pair, 0.5, 8).unwrap();
    let sqrt5 = 5.0_f64.sqrt();
    assert_eq!(orbit.direction, (-1, 2));
    assert!((orbit.period - sqrt5).abs() < 1e-8, "T = {}", orbit.period);
    assert!((orbit.e_lambda - sqrt5).abs() < 1e-8);
    assert!((orbit.e_omega + 0.25).abs() < 1e-8, "E_omega = {}", orbit.e_omega);

    // Cross-check by direct integration of the (constant) Reeb field on
    // the invariant torus: after time T both angles advance by integers,
    // and by no smaller rational fraction of T.
    let f = shs::reeb_field(&pair, 0.5).unwrap();
    let advance = f * orbit.period;
    assert!((advance.x - advance.x.round()).abs() < 1e-8);
    assert!((advance.y - advance.y.round()).abs() < 1e-8);
    assert_eq!((advance.x.round() as i64, advance.y.round() as i64), orbit.direction);
    for k in 2..=6 {
        let partial = f * (orbit.period / k as f64);
        let frac = |x: f64| (x - x.round()).abs();
        assert!(
            frac(partial.x) > 1e-3 || frac(partial.y) > 1e-3,
            "period is not minimal: divisible by {k}"
        );
    }
}

#[test]
fn closed_orbit_requires_rational_slope() {
    let pair = parabola_pair();
    match shs::closed_orbit(&pair, 0.123_456_7, 8) {
        Err(Error::Domain(_)) => {}
        other => panic!("expected a domain error, got {other:?}"),
    }
}

#[test]
fn contact_pair_orbits_have_equal_energies() {
    // For g = h the pairing equals <h, i h'>, so E_omega = E_lambda on
    // every rational torus.
    let pair = common::perturbed_standard(0.04);
    let census = shs::rational_census(&pair.h, 12).unwrap();
    let mut checked = 0;
    for pt in census
        .points
        .iter()
        .filter(|p| p.r > 1e-3 && p.r < 1.0 - 1e-3)
    {
        // The census refines crossings in r; keep only those that round
        // back onto the rational direction within the slope tolerance.
        if shskit::curve::slope(&pair.h, pt.r, 12).unwrap().rational_tag.is_none() {
            continue;
        }
        let orbit = shs::closed_orbit(&pair, pt.r, 12).unwrap();
        assert!(
            (orbit.e_lambda - orbit.e_omega).abs() <= 1e-9 * orbit.e_lambda.abs().max(1.0),
            "r = {}: {} vs {}",
            pt.r,
            orbit.e_lambda,
            orbit.e_omega
        );
        checked += 1;
    }
    assert!(checked >= 5, "census too sparse: {checked} usable tori");
}

#[test]
fn linearized_return_on_parabola_pair() {
    // Closed forms at r = 1/2: k = h'/|h'|, so k' T = (-4/5, 8/5) and the
    // return map is unipotent with a two-dimensional fixed space.
    let pair = parabola_pair();
    let lin = shs::linearized_return(&pair, 0.5, 8).unwrap();
    assert_eq!(lin.kernel_dim, 2);
    let m = lin.matrix;
    assert_eq!(m[0], [1.0, 0.0, 0.0]);
    assert!((m[1][0] + 1.6).abs() < 1e-6, "{:?}", m[1]);
    assert!((m[2][0] + 0.8).abs() < 1e-6, "{:?}", m[2]);
    assert!((m[1][1] - 1.0).abs() < 1e-12 && (m[2][2] - 1.0).abs() < 1e-12);
}

#[test]
fn morse_bott_check_on_parabola_pair() {
    let pair = parabola_pair();
    let rep = shs::morse_bott_check(&pair, 6).unwrap();
    assert_eq!(rep.verdict, MorseBottVerdict::MorseBott);
    assert!(!rep.witnesses.is_empty());
    for (r, _, det) in &rep.witnesses {
        assert!((det + 1.0).abs() < 1e-6, "det at r = {r} is {det}");
        let lin = shs::linearized_return(&pair, *r, 6).unwrap();
        assert_eq!(lin.kernel_dim, 2, "kernel at r = {r}");
    }
}

#[test]
fn morse_bott_check_flags_degenerate_tangency() {
    // h = (r, (r - 1/2)^3): the slope touches the direction (1, 0) at
    // r = 1/2 where the curvature determinant vanishes.
    let nodes = (0..=512)
        .map(|j| {
            let r = j as f64 / 512.0;
            let u = r - 0.5;
            shskit::curve::HermiteNode {
                r,
                h: v2(r, u * u * u),
                dh: v2(1.0, 3.0 * u * u),
            }
        })
        .collect();
    let h = ProfileCurve::hermite(nodes, 0.0).unwrap();
    let g = stabilize::special_stabilizer(&h, 1.0).unwrap();
    let pair = ShsPair::new(h, g).unwrap();
    let rep = shs::morse_bott_check(&pair, 2).unwrap();
    assert_eq!(rep.verdict, MorseBottVerdict::Degenerate, "{rep:?}");
}

#[test]
fn morse_bott_check_reports_constant_bands() {
    let h = ProfileCurve::named(
        NamedCurve::Linear {
            p0: v2(1.0, 0.5),
            v: v2(1.0, 1.0),
        },
        (0.0, 1.0),
        0.0,
    )
    .unwrap();
    let g = stabilize::special_stabilizer(&h, 1.0).unwrap();
    let pair = ShsPair::new(h, g).unwrap();
    let rep = shs::morse_bott_check(&pair, 4).unwrap();
    assert_eq!(rep.verdict, MorseBottVerdict::MorseBott);
    assert!(rep.witnesses.is_empty());
    assert_eq!(rep.constant_bands.len(), 1);
    // On the band the return map is the identity.
    let lin = shs::linearized_return(&pair, 0.5, 4).unwrap();
    assert_eq!(lin.kernel_dim, 3);
}

#[test]
fn tameness_scan_is_clean_for_standard_pair() {
    let scan = shs::tameness_scan(&standard_pair(), 8).unwrap();
    assert!(scan.zeros_of_alpha_r.is_empty(), "{:?}", scan.zeros_of_alpha_r);
}
