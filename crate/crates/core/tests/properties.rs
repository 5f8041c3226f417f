//! Property tests over random points, maps and parameters.

use std::f64::consts::PI;

use hqc_core::corpus::builtin;
use hqc_core::geometry::{hyp_dist, Density};
use hqc_core::hmap::{normalize, qc_constant};
use hqc_core::johndisk::{criterion_ii, criterion_ii_grid};
use hqc_core::poisson::{hardy_mean, poisson_functional, BoundaryProfile};
use hqc_core::transforms::{koebe_transform, shear_qc};
use hqc_core::{AnalyticPart, CatalogFn, Complex64, MapDescriptor, MapFlags};
use proptest::prelude::*;

fn disk_point(rmax: f64) -> impl Strategy<Value = Complex64> {
    (0.0..rmax, 0.0..2.0 * PI).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn corpus_map() -> impl Strategy<Value = MapDescriptor> {
    let maps = builtin().maps().to_vec();
    (0..maps.len()).prop_map(move |i| maps[i].clone())
}

fn mobius(a: Complex64, rot: f64) -> impl Fn(Complex64) -> Complex64 {
    let u = Complex64::from_polar(1.0, rot);
    move |z| u * (z - a) / (Complex64::new(1.0, 0.0) - a.conj() * z)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn hyperbolic_triangle_inequality(a in disk_point(0.999), b in disk_point(0.999), c in disk_point(0.999)) {
        let lhs = hyp_dist(a, c).unwrap();
        let rhs = hyp_dist(a, b).unwrap() + hyp_dist(b, c).unwrap();
        prop_assert!(lhs <= rhs + 1e-12 * rhs.max(1.0));
    }

    #[test]
    fn hyperbolic_distance_is_symmetric_and_mobius_invariant(
        a in disk_point(0.99), b in disk_point(0.99), m in disk_point(0.9), rot in 0.0..2.0 * PI
    ) {
        let d = hyp_dist(a, b).unwrap();
        prop_assert!((d - hyp_dist(b, a).unwrap()).abs() <= 1e-12 * d.max(1.0));
        let phi = mobius(m, rot);
        prop_assert!((hyp_dist(phi(a), phi(b)).unwrap() - d).abs() < 1e-10);
    }

    #[test]
    fn dnorm_dominates_dmin_and_jacobian_factors(map in corpus_map(), z in disk_point(0.99)) {
        let p = map.wirtinger(z).unwrap();
        prop_assert!(p.dnorm() >= p.dmin());
        let prod = p.dnorm() * p.dmin();
        prop_assert!((p.jacobian() - prod).abs() <= 1e-12 * prod.max(1.0));
        prop_assert!(p.dilatation() < 1.0);
    }

    #[test]
    fn wirtinger_derivatives_match_finite_differences(map in corpus_map(), z in disk_point(0.9)) {
        let h = 1e-6;
        let dx = Complex64::new(h, 0.0);
        let dy = Complex64::new(0.0, h);
        let fx = (map.eval(z + dx).unwrap() - map.eval(z - dx).unwrap()) / (2.0 * h);
        let fy = (map.eval(z + dy).unwrap() - map.eval(z - dy).unwrap()) / (2.0 * h);
        let i = Complex64::new(0.0, 1.0);
        let p = map.wirtinger(z).unwrap();
        let scale = p.dnorm().max(1.0);
        prop_assert!(((fx - i * fy) / 2.0 - p.fz).norm() <= 1e-5 * scale);
        prop_assert!(((fx + i * fy) / 2.0 - p.fzb).norm() <= 1e-5 * scale);
    }

    #[test]
    fn normalize_is_idempotent(c1 in -0.5..0.5f64, c2 in -0.1..0.1f64, b in disk_point(0.5), z in disk_point(0.9)) {
        let one = Complex64::new(1.0, 0.0);
        let h = AnalyticPart::series(vec![Complex64::new(0.3, -0.2), Complex64::new(2.0, 1.0), Complex64::new(c1, c2)]).unwrap();
        let g = AnalyticPart::linear(Complex64::new(0.1, 0.0), vec![(b * Complex64::new(2.0, -1.0), AnalyticPart::identity())]);
        let map = MapDescriptor::new("m", h, g, MapFlags::default()).unwrap();
        let once = normalize(&map).unwrap();
        let twice = normalize(&once).unwrap();
        let (a, b) = (once.eval(z).unwrap(), twice.eval(z).unwrap());
        prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1.0));
        let p = once.wirtinger(Complex64::new(0.0, 0.0)).unwrap();
        prop_assert!((p.fz - one).norm() < 1e-12 && p.fzb.norm() < 1e-12);
    }

    #[test]
    fn shear_has_constant_distortion(big_k in 1.0..20.0f64, z in disk_point(0.99), which in 0usize..4) {
        let h = [CatalogFn::Identity, CatalogFn::Koebe, CatalogFn::Halfplane, CatalogFn::Identity][which];
        let map = shear_qc(&AnalyticPart::catalog(h), big_k).unwrap();
        let p = map.wirtinger(z).unwrap();
        prop_assert!((p.distortion() - big_k).abs() <= 1e-9 * big_k);
    }

    #[test]
    fn koebe_transform_preserves_qc_constant(zeta in disk_point(0.9), big_k in 1.0..6.0f64) {
        let map = shear_qc(&AnalyticPart::polynomial(&[0.0, 1.0, 0.125]).unwrap(), big_k).unwrap();
        let pts: Vec<Complex64> = (0..60).map(|k| Complex64::from_polar(0.1 + 0.8 * (k % 6) as f64 / 5.0, k as f64 * 0.7)).collect();
        let t = koebe_transform(&map, zeta).unwrap();
        prop_assert!((qc_constant(&t, &pts).unwrap() - big_k).abs() <= 1e-8 * big_k);
        let p0 = t.wirtinger(Complex64::new(0.0, 0.0)).unwrap();
        prop_assert!((p0.fz - Complex64::new(1.0, 0.0)).norm() < 1e-9);
        prop_assert!(t.eval(Complex64::new(0.0, 0.0)).unwrap().norm() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn criterion_ii_is_rotation_invariant(phi in 0.0..2.0 * PI, x in 0.2..0.9f64) {
        let rot = Complex64::from_polar(1.0, phi);
        let base = builtin().get("koebe").unwrap().clone();
        let rotated = MapDescriptor::analytic("rot", AnalyticPart::rotated(CatalogFn::Koebe, rot).unwrap(), MapFlags::default()).unwrap();
        let rays: Vec<Complex64> = (0..16).map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 16.0)).collect();
        let turned: Vec<Complex64> = rays.iter().map(|&xi| xi * rot).collect();
        let grid = criterion_ii_grid(x, 0.999, 32);
        let a = criterion_ii(&base, x, &turned, &grid).unwrap().sup;
        let b = criterion_ii(&rotated, x, &rays, &grid).unwrap().sup;
        prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0));
    }

    #[test]
    fn poisson_functional_is_scale_invariant(
        scale in disk_point(4.0).prop_filter("nonzero", |s| s.norm() > 0.1), zeta in disk_point(0.8), map in corpus_map()
    ) {
        let scaled = MapDescriptor::new(
            "scaled",
            AnalyticPart::linear(Complex64::new(0.0, 0.0), vec![(scale, map.h.clone())]),
            AnalyticPart::linear(Complex64::new(0.0, 0.0), vec![(scale.conj(), map.g.clone())]),
            MapFlags::default(),
        ).unwrap();
        let p1 = BoundaryProfile::new(&map, 0.05, 256).unwrap();
        let p2 = BoundaryProfile::new(&scaled, 0.05, 256).unwrap();
        let a = poisson_functional(&map, zeta, &p1).unwrap();
        let b = poisson_functional(&scaled, zeta, &p2).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a);
    }

    #[test]
    fn hardy_means_increase_with_radius(map in corpus_map(), p in 1.0..4.0f64, r in 0.05..0.9f64, dr in 0.01..0.09f64) {
        let f = |z: Complex64| map.eval(z).map(|w| w.norm());
        let a = hardy_mean(f, p, r, 512).unwrap();
        let b = hardy_mean(f, p, r + dr, 512).unwrap();
        prop_assert!(b >= a * (1.0 - 1e-12));
    }
}

#[test]
fn density_refinement_doubles_both_axes() {
    let d = Density::new(3, 5).refined();
    assert_eq!((d.radial, d.angular), (6, 10));
}
