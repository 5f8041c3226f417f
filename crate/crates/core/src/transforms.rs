//! Map constructions: Koebe transform, affine family, constant-dilatation
//! shears, and the `S_H2` pre-Schwarzian margin.

use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::geometry::{disk_grid, one_minus_sq, Density};
use crate::hmap::{AnalyticPart, MapDescriptor, MapFlags};

/// JSON record `{"transform": kind, "param": value, "source": label}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransformRecord {
    pub transform: String,
    pub param: serde_json::Value,
    pub source: String,
}

impl TransformRecord {
    pub fn koebe(source: &MapDescriptor, zeta: Complex64) -> Self {
        TransformRecord {
            transform: "koebe".into(),
            param: json!([zeta.re, zeta.im]),
            source: source.label.clone(),
        }
    }

    pub fn affine(source: &MapDescriptor, mu: Complex64) -> Self {
        TransformRecord {
            transform: "affine".into(),
            param: json!([mu.re, mu.im]),
            source: source.label.clone(),
        }
    }

    pub fn shear(source: &str, big_k: f64) -> Self {
        TransformRecord {
            transform: "shear".into(),
            param: json!(big_k),
            source: source.to_string(),
        }
    }

    pub fn normalize(source: &MapDescriptor) -> Self {
        TransformRecord {
            transform: "normalize".into(),
            param: serde_json::Value::Null,
            source: source.label.clone(),
        }
    }
}

/// `F(z) = [f(phi(z)) - f(zeta)] / (h'(zeta)(1 - |zeta|^2))` with
/// `phi(z) = (z + zeta)/(1 + conj(zeta) z)`, composed lazily.
pub fn koebe_transform(map: &MapDescriptor, zeta: Complex64) -> Result<MapDescriptor> {
    let hj = map.h_jet(zeta)?;
    let gj = map.g_jet(zeta)?;
    if hj.d1.norm() == 0.0 {
        return Err(Error::CriticalPoint(zeta));
    }
    let c = hj.d1 * one_minus_sq(zeta);
    let one = Complex64::new(1.0, 0.0);
    let h = AnalyticPart::Automorphism {
        inner: Box::new(map.h.clone()),
        zeta,
        offset: hj.value,
        scale: one / c,
    };
    let g = AnalyticPart::Automorphism {
        inner: Box::new(map.g.clone()),
        zeta,
        offset: gj.value,
        scale: one / c.conj(),
    };
    let flags = MapFlags {
        sh: map.flags.sh,
        sh0: map.flags.sh0 && zeta == Complex64::new(0.0, 0.0),
        ..MapFlags::default()
    };
    MapDescriptor::new(format!("koebe({},{})", map.label, zeta), h, g, flags)
}

/// `f + mu conj(f) = (h + mu g) + conj(g + conj(mu) h)`.
///
/// Fails with a witness when the result is not sense-preserving on a disk
/// grid reaching `|z| = 0.999`.
pub fn affine(map: &MapDescriptor, mu: Complex64) -> Result<MapDescriptor> {
    if !(mu.norm() < 1.0) {
        return Err(Error::Parameter(format!("affine parameter needs |mu| < 1, got {mu}")));
    }
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let h = AnalyticPart::linear(zero, vec![(one, map.h.clone()), (mu, map.g.clone())]);
    let g = AnalyticPart::linear(zero, vec![(one, map.g.clone()), (mu.conj(), map.h.clone())]);
    let flags = MapFlags {
        bounded: map.flags.bounded,
        ..MapFlags::default()
    };
    let out = MapDescriptor::new(format!("affine({},{})", map.label, mu), h, g, flags)?;
    out.check_sense_preserving(&disk_grid(0.999, Density::new(24, 48)).points)?;
    Ok(out)
}

/// `f = h + ((K - 1)/(K + 1)) conj(h)`, whose dilatation has constant
/// modulus `(K - 1)/(K + 1)`.
pub fn shear_qc(h: &AnalyticPart, big_k: f64) -> Result<MapDescriptor> {
    if !(big_k >= 1.0) || !big_k.is_finite() {
        return Err(Error::Parameter(format!("shear needs K >= 1, got {big_k}")));
    }
    let mu = (big_k - 1.0) / (big_k + 1.0);
    let g = AnalyticPart::linear(Complex64::new(0.0, 0.0), vec![(Complex64::new(mu, 0.0), h.clone())]);
    let j = h.jet(Complex64::new(0.0, 0.0));
    let normalized = j.value.norm() < 1e-12 && (j.d1 - 1.0).norm() < 1e-12;
    let flags = MapFlags {
        sh: normalized,
        sh0: normalized && big_k == 1.0,
        ..MapFlags::default()
    };
    MapDescriptor::new(format!("shear(K={big_k})"), h.clone(), g, flags)
}

/// `(1 - |z|^2) h''(z)/h'(z) - 2 conj(z)`.
pub fn pre_schwarzian(map: &MapDescriptor, z: Complex64) -> Result<Complex64> {
    let j = map.h_jet(z)?;
    if j.d1.norm() == 0.0 {
        return Err(Error::CriticalPoint(z));
    }
    Ok(one_minus_sq(z) * j.d2 / j.d1 - 2.0 * z.conj())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sh2Margin {
    pub sup: f64,
    pub witness: Complex64,
}

/// Grid supremum of `|(1 - |z|^2) h''/h' - 2 conj(z)|`.
pub fn sh2_margin(map: &MapDescriptor, points: &[Complex64]) -> Result<Sh2Margin> {
    let mut best = Sh2Margin {
        sup: f64::NEG_INFINITY,
        witness: Complex64::new(0.0, 0.0),
    };
    for &z in points {
        let v = pre_schwarzian(map, z)?.norm();
        if v > best.sup {
            best = Sh2Margin { sup: v, witness: z };
        }
    }
    Ok(best)
}

/// Boundary limit of the `S_H2` supremum.
#[derive(Debug, Clone, PartialEq)]
pub struct Sh2Limit {
    /// `(cap, grid sup)` per refinement level.
    pub trace: Vec<(f64, f64)>,
    /// Linear extrapolation of the last two levels in `1 - cap` to the circle.
    pub limit: f64,
}

/// Guard band below 4 for declaring `S_H2` membership.
pub const SH2_GUARD: f64 = 1e-3;

impl Sh2Limit {
    pub fn is_member(&self) -> bool {
        self.limit < 4.0 - SH2_GUARD
    }
}

/// Evaluates [`sh2_margin`] on disk grids whose outer radius approaches
/// `cap` (halving `1 - cap` backwards from it), then extrapolates linearly in
/// the distance to the circle.
pub fn sh2_boundary_limit(map: &MapDescriptor, density: Density, cap: f64, levels: usize) -> Result<Sh2Limit> {
    if levels < 2 {
        return Err(Error::Parameter("need at least two refinement levels".into()));
    }
    let mut trace = Vec::with_capacity(levels);
    for k in (0..levels).rev() {
        let gap = (1.0 - cap) * f64::powi(2.0, k as i32);
        let c = 1.0 - gap;
        let grid = disk_grid(c, density);
        trace.push((c, sh2_margin(map, &grid.points)?.sup));
    }
    let (c1, s1) = trace[trace.len() - 2];
    let (c2, s2) = trace[trace.len() - 1];
    let (d1, d2) = (1.0 - c1, 1.0 - c2);
    let limit = (d1 * s2 - d2 * s1) / (d1 - d2);
    Ok(Sh2Limit { trace, limit })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hmap::{qc_constant, CatalogFn};
    use crate::radial::radial_length;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sh0() -> MapFlags {
        MapFlags { sh: true, sh0: true, ..MapFlags::default() }
    }

    fn sample_points() -> Vec<Complex64> {
        disk_grid(0.95, Density::new(12, 16)).points
    }

    #[test]
    fn koebe_transform_at_origin_is_identity_on_sh0() {
        let k = MapDescriptor::analytic("koebe", AnalyticPart::catalog(CatalogFn::Koebe), sh0()).unwrap();
        let f = koebe_transform(&k, c(0.0, 0.0)).unwrap();
        for z in sample_points() {
            assert!((f.eval(z).unwrap() - k.eval(z).unwrap()).norm() <= 1e-12 * (1.0 + k.eval(z).unwrap().norm()));
        }
    }

    #[test]
    fn koebe_transform_of_identity_is_a_mobius_map() {
        let id = MapDescriptor::analytic("identity", AnalyticPart::identity(), sh0()).unwrap();
        let f = koebe_transform(&id, c(0.5, 0.0)).unwrap();
        for z in sample_points() {
            let expected = z / (1.0 + 0.5 * z);
            assert!((f.eval(z).unwrap() - expected).norm() < 1e-14);
        }
        let j = f.h.jet(c(0.2, -0.3));
        let den = 1.0 + 0.5 * c(0.2, -0.3);
        assert!((j.d1 - 1.0 / (den * den)).norm() < 1e-14);
        assert!((j.d2 + 1.0 / (den * den * den)).norm() < 1e-14);
    }

    #[test]
    fn koebe_transform_preserves_qc_constant() {
        let s = shear_qc(&AnalyticPart::identity(), 3.0).unwrap();
        let f = koebe_transform(&s, c(0.4, 0.0)).unwrap();
        assert!((qc_constant(&f, &sample_points()).unwrap() - 3.0).abs() < 1e-12);
        assert!(f.flags.sh);
        let crit = MapDescriptor::analytic("sq", AnalyticPart::polynomial(&[0.0, 0.0, 1.0]).unwrap(), MapFlags::default()).unwrap();
        assert!(matches!(koebe_transform(&crit, c(0.0, 0.0)), Err(Error::CriticalPoint(_))));
    }

    #[test]
    fn affine_examples() {
        let k = MapDescriptor::analytic("koebe", AnalyticPart::catalog(CatalogFn::Koebe), sh0()).unwrap();
        let same = affine(&k, c(0.0, 0.0)).unwrap();
        assert_eq!(same.eval(c(0.3, 0.2)).unwrap(), k.eval(c(0.3, 0.2)).unwrap());

        let id = MapDescriptor::analytic("identity", AnalyticPart::identity(), sh0()).unwrap();
        let f = affine(&id, c(0.5, 0.0)).unwrap();
        let z = c(0.3, 0.4);
        assert!((f.eval(z).unwrap() - (z + 0.5 * z.conj())).norm() < 1e-15);

        // dilatation matches |g' + mu h'| / |h' + mu g'|
        let base = MapDescriptor::new(
            "harm",
            AnalyticPart::catalog(CatalogFn::Halfplane),
            AnalyticPart::polynomial(&[0.0, 0.0, 0.05]).unwrap(),
            MapFlags::default(),
        )
        .unwrap();
        let mu = c(0.3, -0.2);
        let f = affine(&base, mu).unwrap();
        for z in sample_points() {
            let hp = base.h.jet(z).d1;
            let gp = base.g.jet(z).d1;
            let expected = (gp + mu.conj() * hp).norm() / (hp + mu * gp).norm();
            let got = f.wirtinger(z).unwrap().dilatation();
            assert!((got - expected).abs() < 1e-12 * (1.0 + expected));
        }
        assert!(affine(&id, c(1.0, 0.0)).is_err());
    }

    #[test]
    fn affine_rejects_sense_reversing_result() {
        // (1 - |mu|^2) J_f is the Jacobian of f + mu conj(f), so only a
        // sense-reversing input can fail.
        let m = MapDescriptor::new(
            "reversing",
            AnalyticPart::polynomial(&[0.0, 0.5]).unwrap(),
            AnalyticPart::identity(),
            MapFlags::default(),
        )
        .unwrap();
        assert!(matches!(affine(&m, c(0.2, 0.0)), Err(Error::SenseReversing { .. })));
    }

    #[test]
    fn shear_examples() {
        let k1 = shear_qc(&AnalyticPart::catalog(CatalogFn::Koebe), 1.0).unwrap();
        assert!(k1.is_analytic());
        let s = shear_qc(&AnalyticPart::identity(), 3.0).unwrap();
        let z = c(0.5, 0.0);
        assert!((s.eval(z).unwrap() - c(0.75, 0.0)).norm() < 1e-15);
        for z in sample_points() {
            assert!((s.wirtinger(z).unwrap().distortion() - 3.0).abs() < 1e-12);
        }
        assert!(shear_qc(&AnalyticPart::identity(), 0.5).is_err());

        let sk = shear_qc(&AnalyticPart::catalog(CatalogFn::Koebe), 3.0).unwrap();
        let l = radial_length(&sk, 0.0, 0.5, 1e-13).unwrap();
        assert!((l.value - 3.0).abs() < 1e-10);
    }

    #[test]
    fn sh2_examples() {
        let id = MapDescriptor::analytic("identity", AnalyticPart::identity(), sh0()).unwrap();
        let m = sh2_margin(&id, &[c(0.5, 0.0), c(0.0, 0.9)]).unwrap();
        assert!((m.sup - 1.8).abs() < 1e-15);
        let k = MapDescriptor::analytic("koebe", AnalyticPart::catalog(CatalogFn::Koebe), sh0()).unwrap();
        for r in [0.1, 0.5, 0.9, 0.999] {
            assert!((pre_schwarzian(&k, c(r, 0.0)).unwrap() - c(4.0, 0.0)).norm() < 1e-9);
        }
        let hp = MapDescriptor::analytic("halfplane", AnalyticPart::catalog(CatalogFn::Halfplane), sh0()).unwrap();
        for r in [0.1, 0.5, 0.9] {
            assert!((pre_schwarzian(&hp, c(r, 0.0)).unwrap() - c(2.0, 0.0)).norm() < 1e-12);
        }
        // grid-scan oracle: sup over a fine grid is at least the real-axis value
        let grid = disk_grid(0.99, Density::new(40, 64));
        let s = sh2_margin(&hp, &grid.points).unwrap();
        assert!(s.sup >= 2.0 - 1e-12 && s.sup < 4.0);
    }

    #[test]
    fn sh2_limits() {
        let id = MapDescriptor::analytic("identity", AnalyticPart::identity(), sh0()).unwrap();
        let l = sh2_boundary_limit(&id, Density::new(16, 32), 0.999, 3).unwrap();
        assert!((l.limit - 2.0).abs() < 1e-9);
        assert!(l.is_member());
        let k = MapDescriptor::analytic("koebe", AnalyticPart::catalog(CatalogFn::Koebe), sh0()).unwrap();
        let l = sh2_boundary_limit(&k, Density::new(16, 32), 0.999, 3).unwrap();
        assert!((l.limit - 4.0).abs() < 1e-6);
        assert!(!l.is_member());
    }
}
