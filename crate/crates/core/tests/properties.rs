mod common;

use std::f64::consts::PI;

use nalgebra::{Matrix2, Vector2};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use planar_santalo::affine::{bm_distance_disk, certify_disk, john_ellipse};
use planar_santalo::grid::synthesize;
use planar_santalo::lab::{exponent_fit, FamilySpec};
use planar_santalo::minkowski::{lambda_body, lambda_transform, lutwak_gap, minkowski_residual, solve_minkowski, MinkowskiData};
use planar_santalo::santalo::{
    deficit_from_product, groemer_gap, minkowski_excess, santalo_point, volume_product, DeficitRecord, DISK_AREA,
};
use planar_santalo::symmetrize::{asymmetry, meyer_pajor_gap, steiner_symmetral};
use planar_santalo::{AffineMap, AngleGrid, Body, FourierBody, Polygon};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn blaschke_santalo_holds(seed in any::<u64>()) {
        let b = random_body(&mut rng(seed));
        let vp = volume_product(&b).unwrap();
        prop_assert!(vp <= DISK_AREA * DISK_AREA * (1.0 + 1e-8), "{vp}");
        prop_assert!(deficit_from_product(vp) >= 0.0);
    }

    #[test]
    fn volume_product_is_affine_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let v = rng(seed ^ 1).gen_range(3..9);
        let p: Body = planar_santalo::lab::random_polygon(v, &mut r).unwrap().into();
        let img = p.affine_image(&random_affine(&mut r)).unwrap();
        prop_assert!(rel(volume_product(&img).unwrap(), volume_product(&p).unwrap()) < 1e-9);
    }

    #[test]
    fn santalo_point_minimizes_polar_area(seed in any::<u64>(), dx in -0.05f64..0.05, dy in -0.05f64..0.05) {
        let b = random_body(&mut rng(seed));
        let s = santalo_point(&b).unwrap();
        prop_assert!(s.gradient_norm <= 1e-10);
        let scale = b.area().sqrt();
        let other = s.point + Vector2::new(dx, dy) * scale;
        if let Ok(a) = b.polar_area_about(&other) {
            prop_assert!(a >= s.polar_area * (1.0 - 1e-12));
        }
    }

    #[test]
    fn polar_of_polar_is_the_polygon(seed in any::<u64>()) {
        let p = random_symmetric_polygon(&mut rng(seed));
        let pp = p.polar().unwrap().polar().unwrap();
        let (a, b) = (p.as_polygon().unwrap(), pp.as_polygon().unwrap());
        prop_assert_eq!(a.len(), b.len());
        for v in a.vertices() {
            prop_assert!(b.vertices().iter().any(|w| (v - w).norm() < 1e-9));
        }
    }

    #[test]
    fn minkowski_inequality(s1 in any::<u64>(), s2 in any::<u64>()) {
        let (k, l) = (random_body(&mut rng(s1)), random_body(&mut rng(s2)));
        prop_assert!(minkowski_excess(&k, &l) >= -1e-9);
        prop_assert!(rel(k.mixed_area(&k), k.area()) < 1e-6);
    }

    #[test]
    fn groemer_holds_for_symmetric_pairs(s1 in any::<u64>(), s2 in any::<u64>()) {
        let (k, l) = (random_symmetric_body(&mut rng(s1)), random_symmetric_body(&mut rng(s2)));
        prop_assert!(groemer_gap(&k, &l).unwrap() >= -1e-8);
    }

    #[test]
    fn lambda_shrinks_area_and_lutwak_holds(seed in any::<u64>()) {
        let b = random_body(&mut rng(seed));
        let lam = lambda_transform(&b).unwrap();
        let v = lam.source.area();
        prop_assert!(lam.body.area() <= v * (1.0 + 1e-8));
        prop_assert!(lutwak_gap(&b).unwrap() >= -1e-8);
    }

    #[test]
    fn lambda_commutes_with_linear_maps(seed in any::<u64>()) {
        let mut r = rng(seed);
        let b = random_fourier(&mut r, true, AngleGrid::default());
        let m = AffineMap::linear(random_linear(&mut r)).unwrap();
        let lhs = lambda_body(&b.affine_image(&m).unwrap()).unwrap();
        let rhs = lambda_body(&b).unwrap().affine_image(&m).unwrap();
        let g = AngleGrid::default();
        let (x, y) = (lhs.sample_support(&g), rhs.sample_support(&g));
        let err = x.iter().zip(&y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(err < 1e-6, "{err}");
    }

    #[test]
    fn minkowski_solver_inverts_curvature(seed in any::<u64>()) {
        let b = random_fourier(&mut rng(seed), false, AngleGrid::default());
        let f = b.as_fourier().unwrap();
        let g = f.grid();
        let data = MinkowskiData::new(g, f.curvature_samples(&g).unwrap()).unwrap();
        let h = solve_minkowski(&data).unwrap();
        prop_assert!(minkowski_residual(h.values(), data.f_values()) <= 1e-10 * 2.0);
        // The solver fixes the Steiner point at the origin.
        let mut cos = f.cos_coeffs().to_vec();
        let mut sin = f.sin_coeffs().to_vec();
        cos[0] = 0.0;
        sin[0] = 0.0;
        let expect = synthesize(f.a0(), &cos, &sin, g.len());
        let err = expect.iter().zip(h.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(err < 1e-11, "{err}");
    }

    #[test]
    fn steiner_keeps_area_and_polar_area_grows(seed in any::<u64>(), axis in 0.0f64..PI) {
        let mut r = rng(seed);
        let v = rng(seed ^ 2).gen_range(3..9);
        let p: Body = planar_santalo::lab::random_polygon(v, &mut r).unwrap().into();
        let s = steiner_symmetral(&p, axis).unwrap();
        prop_assert!(rel(s.area(), p.area()) < 1e-10);
        let (c, sn) = (axis.cos(), axis.sin());
        let reflect = Matrix2::new(c * c - sn * sn, 2.0 * c * sn, 2.0 * c * sn, sn * sn - c * c);
        for q in s.as_polygon().unwrap().vertices() {
            let mirrored = reflect * q;
            prop_assert!(s.as_polygon().unwrap().vertices().iter().any(|w| (w - mirrored).norm() < 1e-9));
        }
        prop_assert!(meyer_pajor_gap(&p, axis).unwrap() >= -1e-7);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn bm_estimate_is_a_certified_john_bound(seed in any::<u64>()) {
        let b = random_body(&mut rng(seed));
        let est = bm_distance_disk(&b).unwrap();
        prop_assert!(est.distance >= 1.0);
        let cap = if b.is_symmetric() { 2f64.sqrt() } else { 2.0 };
        prop_assert!(est.distance <= cap + 1e-6, "{}", est.distance);
        prop_assert!(certify_disk(&b, &est, &AngleGrid::default()).unwrap());
    }

    #[test]
    fn bm_to_disk_is_affine_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let b = random_symmetric_polygon(&mut r);
        let img = b.affine_image(&random_affine(&mut r)).unwrap();
        let (d0, d1) = (bm_distance_disk(&b).unwrap().distance, bm_distance_disk(&img).unwrap().distance);
        prop_assert!((d0 - d1).abs() < 1e-6, "{d0} {d1}");
    }

    #[test]
    fn john_ellipse_is_inscribed(seed in any::<u64>()) {
        let b = random_body(&mut rng(seed));
        let e = john_ellipse(&b).unwrap();
        for u in AngleGrid::new(256).unwrap().units() {
            prop_assert!(e.support(&u) <= b.support_dir(&u) + 1e-9);
        }
        prop_assert!(e.area() <= b.area());
    }
}

proptest! {
    #[test]
    fn fit_recovers_power_laws(a in 0.1f64..1.5, c in 0.1f64..5.0, e0 in -8.0f64..-4.0) {
        let recs: Vec<DeficitRecord> = (0..6)
            .map(|i| {
                let eps = 10f64.powf(e0 + 0.5 * i as f64);
                DeficitRecord {
                    body_id: format!("r{i}"),
                    epsilon: eps,
                    delta: c * eps.powf(a),
                    volume_product: DISK_AREA * DISK_AREA / (1.0 + eps),
                    diagnostics: Default::default(),
                }
            })
            .collect();
        let fit = exponent_fit(&recs, 0.5).unwrap();
        prop_assert!((fit.slope - a).abs() < 1e-9);
        prop_assert!((fit.intercept - c.ln()).abs() < 1e-8);
        prop_assert!(fit.residual_spread < 1e-9);
    }

    #[test]
    fn mode_families_are_convex_exactly_below_the_threshold(k in 2usize..9, frac in 0.05f64..1.5) {
        let t = frac / ((k * k - 1) as f64);
        let spec: FamilySpec = format!("mode:{k}:{t}").parse().unwrap();
        let res = spec.generate(AngleGrid::default(), 0);
        if frac < 0.999 {
            let b = &res.unwrap()[0].body;
            prop_assert_eq!(b.is_symmetric(), k % 2 == 0);
        } else if frac > 1.001 {
            prop_assert!(res.is_err());
        }
    }

    #[test]
    fn random_families_are_deterministic(seed in any::<u64>(), v in 3usize..10) {
        let spec: FamilySpec = format!("polygon:{v}:2").parse().unwrap();
        let g = AngleGrid::default();
        let a = spec.generate(g, seed).unwrap();
        let b = spec.generate(g, seed).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert_eq!(&x.body, &y.body);
        }
    }

    #[test]
    fn symmetric_bodies_have_no_asymmetry(seed in any::<u64>()) {
        let b = random_symmetric_polygon(&mut rng(seed));
        prop_assert!(asymmetry(&b) < 1e-9);
    }
}

#[test]
fn ellipses_are_extremal() {
    for (a, b) in [(1.0, 1.0), (2.0, 0.5), (3.0, 0.7)] {
        let e = Body::ellipse(a, b, AngleGrid::default()).unwrap();
        assert!(rel(volume_product(&e).unwrap(), PI * PI) < 1e-12);
    }
    let sq = Polygon::from_xy(&[(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)]).unwrap();
    let smooth: Body = FourierBody::smoothed_polygon(&sq, AngleGrid::default(), 1e-6).unwrap().into();
    assert!(volume_product(&smooth).unwrap() < PI * PI);
}
