//! Harmonic maps `f = h + conj(g)` of the unit disk and their pointwise
//! derivative functionals.
//!
//! Each analytic part is a small expression tree: closed-form catalog
//! functions and polynomials at the leaves, linear combinations and
//! disk-automorphism precompositions above them. Every node returns a
//! [`Jet`] (value, first and second derivative) computed in closed form or
//! by the exact chain rule, so no derivative in the crate is ever a finite
//! difference.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Radius past which power-series evaluation carries a warning.
pub const SAFE_RADIUS: f64 = 0.999;

const NORMALIZATION_TOL: f64 = 1e-12;

/// Value and first two complex derivatives of an analytic function at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: Complex64,
    pub d1: Complex64,
    pub d2: Complex64,
}

impl Jet {
    fn zero() -> Self {
        let z = Complex64::new(0.0, 0.0);
        Jet { value: z, d1: z, d2: z }
    }

    fn scaled(self, c: Complex64) -> Self {
        Jet {
            value: self.value * c,
            d1: self.d1 * c,
            d2: self.d2 * c,
        }
    }

    fn add(self, other: Jet) -> Self {
        Jet {
            value: self.value + other.value,
            d1: self.d1 + other.d1,
            d2: self.d2 + other.d2,
        }
    }
}

/// Closed-form members of the catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CatalogFn {
    /// `z`
    Identity,
    /// `z / (1 - z)^2`
    Koebe,
    /// `z / (1 - z)`, the conformal map onto the half-plane `Re w > -1/2`.
    Halfplane,
}

impl CatalogFn {
    pub fn name(self) -> &'static str {
        match self {
            CatalogFn::Identity => "identity",
            CatalogFn::Koebe => "koebe",
            CatalogFn::Halfplane => "halfplane",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "identity" => Some(CatalogFn::Identity),
            "koebe" => Some(CatalogFn::Koebe),
            "halfplane" => Some(CatalogFn::Halfplane),
            _ => None,
        }
    }

    fn jet(self, z: Complex64) -> Jet {
        let one = Complex64::new(1.0, 0.0);
        match self {
            CatalogFn::Identity => Jet {
                value: z,
                d1: one,
                d2: Complex64::new(0.0, 0.0),
            },
            CatalogFn::Koebe => {
                let w = one - z;
                let w2 = w * w;
                let w3 = w2 * w;
                Jet {
                    value: z / w2,
                    d1: (one + z) / w3,
                    d2: (4.0 + 2.0 * z) / (w3 * w),
                }
            }
            CatalogFn::Halfplane => {
                let w = one - z;
                let w2 = w * w;
                Jet {
                    value: z / w,
                    d1: one / w2,
                    d2: 2.0 / (w2 * w),
                }
            }
        }
    }
}

/// One analytic part (`h` or `g`) of a harmonic map.
#[derive(Debug, Clone, PartialEq)]
pub enum AnalyticPart {
    /// `conj(rotation) * F(rotation * z)` for a catalog function `F`.
    Catalog { name: CatalogFn, rotation: Complex64 },
    /// Polynomial `sum coeffs[k] z^k`; `coeffs` is never empty.
    Series { coeffs: Vec<Complex64> },
    /// `constant + sum c_i p_i(z)`.
    Combination {
        constant: Complex64,
        terms: Vec<(Complex64, AnalyticPart)>,
    },
    /// `scale * (inner(phi(z)) - inner(zeta))` with `phi(z) = (z + zeta) / (1 + conj(zeta) z)`.
    Automorphism {
        inner: Box<AnalyticPart>,
        zeta: Complex64,
        offset: Complex64,
        scale: Complex64,
    },
}

impl AnalyticPart {
    pub fn catalog(name: CatalogFn) -> Self {
        AnalyticPart::Catalog {
            name,
            rotation: Complex64::new(1.0, 0.0),
        }
    }

    pub fn rotated(name: CatalogFn, rotation: Complex64) -> Result<Self> {
        if (rotation.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::Parameter(format!(
                "rotation factor must be unimodular, got |{rotation}| = {}",
                rotation.norm()
            )));
        }
        Ok(AnalyticPart::Catalog { name, rotation })
    }

    pub fn identity() -> Self {
        Self::catalog(CatalogFn::Identity)
    }

    pub fn zero() -> Self {
        AnalyticPart::Series {
            coeffs: vec![Complex64::new(0.0, 0.0)],
        }
    }

    pub fn series(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Descriptor(
                "power series needs at least one coefficient".into(),
            ));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::Descriptor("non-finite series coefficient".into()));
        }
        Ok(AnalyticPart::Series { coeffs })
    }

    /// Real-coefficient polynomial convenience constructor.
    pub fn polynomial(coeffs: &[f64]) -> Result<Self> {
        Self::series(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// `constant + sum c_i p_i`, flattened into a polynomial when every term
    /// is polynomial.
    pub fn linear(constant: Complex64, terms: Vec<(Complex64, AnalyticPart)>) -> Self {
        let mut flat: Vec<Complex64> = vec![constant];
        let mut all_poly = true;
        for (c, part) in &terms {
            match part.as_polynomial() {
                Some(coeffs) => {
                    if flat.len() < coeffs.len() {
                        flat.resize(coeffs.len(), Complex64::new(0.0, 0.0));
                    }
                    for (slot, a) in flat.iter_mut().zip(coeffs.iter()) {
                        *slot += c * a;
                    }
                }
                None => {
                    all_poly = false;
                    break;
                }
            }
        }
        if all_poly {
            while flat.len() > 1 && flat.last().is_some_and(|c| c.norm() == 0.0) {
                flat.pop();
            }
            return AnalyticPart::Series { coeffs: flat };
        }
        let terms = terms
            .into_iter()
            .filter(|(c, p)| *c != Complex64::new(0.0, 0.0) && !p.is_zero())
            .collect();
        AnalyticPart::Combination { constant, terms }
    }

    fn as_polynomial(&self) -> Option<Vec<Complex64>> {
        match self {
            AnalyticPart::Series { coeffs } => Some(coeffs.clone()),
            AnalyticPart::Catalog {
                name: CatalogFn::Identity,
                ..
            } => Some(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]),
            _ => None,
        }
    }

    /// True when the part is identically zero.
    pub fn is_zero(&self) -> bool {
        match self {
            AnalyticPart::Series { coeffs } => coeffs.iter().all(|c| c.norm() == 0.0),
            AnalyticPart::Combination { constant, terms } => {
                constant.norm() == 0.0 && terms.iter().all(|(c, p)| c.norm() == 0.0 || p.is_zero())
            }
            AnalyticPart::Automorphism { inner, scale, .. } => {
                scale.norm() == 0.0 || inner.is_zero()
            }
            AnalyticPart::Catalog { .. } => false,
        }
    }

    /// Value and first two derivatives at `z`. Callers validate `|z| < 1`.
    pub fn jet(&self, z: Complex64) -> Jet {
        match self {
            AnalyticPart::Catalog { name, rotation } => {
                let inner = name.jet(rotation * z);
                Jet {
                    value: rotation.conj() * inner.value,
                    d1: inner.d1 * (rotation.conj() * rotation),
                    d2: inner.d2 * rotation,
                }
            }
            AnalyticPart::Series { coeffs } => horner_jet(coeffs, z),
            AnalyticPart::Combination { constant, terms } => {
                let mut acc = Jet::zero();
                acc.value = *constant;
                for (c, part) in terms {
                    acc = acc.add(part.jet(z).scaled(*c));
                }
                acc
            }
            AnalyticPart::Automorphism {
                inner,
                zeta,
                offset,
                scale,
            } => {
                let (w, dw, d2w) = automorphism_jet(*zeta, z);
                let j = inner.jet(w);
                Jet {
                    value: (j.value - offset) * scale,
                    d1: j.d1 * dw * scale,
                    d2: (j.d2 * dw * dw + j.d1 * d2w) * scale,
                }
            }
        }
    }

    /// True when evaluating at `z` touches a power series beyond [`SAFE_RADIUS`].
    pub fn beyond_safe_radius(&self, z: Complex64) -> bool {
        match self {
            AnalyticPart::Catalog { .. } => false,
            AnalyticPart::Series { coeffs } => coeffs.len() > 1 && z.norm() > SAFE_RADIUS,
            AnalyticPart::Combination { terms, .. } => {
                terms.iter().any(|(_, p)| p.beyond_safe_radius(z))
            }
            AnalyticPart::Automorphism { inner, zeta, .. } => {
                inner.beyond_safe_radius(automorphism_jet(*zeta, z).0)
            }
        }
    }
}

/// `phi(z) = (z + zeta) / (1 + conj(zeta) z)` with its first two derivatives.
pub(crate) fn automorphism_jet(zeta: Complex64, z: Complex64) -> (Complex64, Complex64, Complex64) {
    let one = Complex64::new(1.0, 0.0);
    let den = one + zeta.conj() * z;
    let k = 1.0 - zeta.norm_sqr();
    let w = (z + zeta) / den;
    let dw = k / (den * den);
    let d2w = -2.0 * zeta.conj() * k / (den * den * den);
    (w, dw, d2w)
}

fn horner_jet(coeffs: &[Complex64], z: Complex64) -> Jet {
    let zero = Complex64::new(0.0, 0.0);
    let (mut p, mut dp, mut d2p) = (zero, zero, zero);
    for &a in coeffs.iter().rev() {
        d2p = d2p * z + 2.0 * dp;
        dp = dp * z + p;
        p = p * z + a;
    }
    Jet {
        value: p,
        d1: dp,
        d2: d2p,
    }
}

/// Membership flags carried by a corpus map.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MapFlags {
    /// Normalized member of `S_H`.
    pub sh: bool,
    /// Member of `S_H^0` (additionally `g'(0) = 0`).
    pub sh0: bool,
    pub starlike: bool,
    pub convex: bool,
    /// Image of the disk is bounded.
    pub bounded: bool,
}

impl MapFlags {
    pub fn to_names(self) -> Vec<String> {
        let mut out = Vec::new();
        if self.sh {
            out.push("SH".to_string());
        }
        if self.sh0 {
            out.push("SH0".to_string());
        }
        if self.starlike {
            out.push("starlike".to_string());
        }
        if self.convex {
            out.push("convex".to_string());
        }
        if self.bounded {
            out.push("bounded".to_string());
        }
        out
    }

    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let mut flags = MapFlags::default();
        for n in names {
            match n.as_ref() {
                "SH" => flags.sh = true,
                "SH0" => flags.sh0 = true,
                "starlike" => flags.starlike = true,
                "convex" => flags.convex = true,
                "bounded" => flags.bounded = true,
                other => return Err(Error::Descriptor(format!("unknown flag `{other}`"))),
            }
        }
        Ok(flags)
    }
}

/// A harmonic map `f = h + conj(g)` on the unit disk.
#[derive(Debug, Clone, PartialEq)]
pub struct MapDescriptor {
    pub label: String,
    pub h: AnalyticPart,
    pub g: AnalyticPart,
    pub flags: MapFlags,
}

impl MapDescriptor {
    /// Builds a descriptor, enforcing the `S_H` / `S_H^0` normalizations when
    /// the corresponding flags are set.
    pub fn new(
        label: impl Into<String>,
        h: AnalyticPart,
        g: AnalyticPart,
        mut flags: MapFlags,
    ) -> Result<Self> {
        if flags.sh0 {
            flags.sh = true;
        }
        let map = MapDescriptor {
            label: label.into(),
            h,
            g,
            flags,
        };
        map.verify_normalization()?;
        Ok(map)
    }

    /// An analytic map (`g = 0`).
    pub fn analytic(label: impl Into<String>, h: AnalyticPart, flags: MapFlags) -> Result<Self> {
        Self::new(label, h, AnalyticPart::zero(), flags)
    }

    fn verify_normalization(&self) -> Result<()> {
        if !self.flags.sh {
            return Ok(());
        }
        let origin = Complex64::new(0.0, 0.0);
        let hj = self.h.jet(origin);
        let gj = self.g.jet(origin);
        let fail = |detail: String| Error::Normalization {
            label: self.label.clone(),
            detail,
        };
        if hj.value.norm() > NORMALIZATION_TOL {
            return Err(fail(format!("h(0) = {}", hj.value)));
        }
        if gj.value.norm() > NORMALIZATION_TOL {
            return Err(fail(format!("g(0) = {}", gj.value)));
        }
        if (hj.d1 - 1.0).norm() > NORMALIZATION_TOL {
            return Err(fail(format!("h'(0) = {}", hj.d1)));
        }
        if self.flags.sh0 && gj.d1.norm() > NORMALIZATION_TOL {
            return Err(fail(format!("g'(0) = {}", gj.d1)));
        }
        Ok(())
    }

    /// True when the co-analytic part vanishes identically.
    pub fn is_analytic(&self) -> bool {
        self.g.is_zero()
    }

    fn check_domain(z: Complex64) -> Result<()> {
        if !(z.norm() < 1.0) {
            return Err(Error::OutsideDisk(z));
        }
        Ok(())
    }

    /// `f(z) = h(z) + conj(g(z))`.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        Self::check_domain(z)?;
        Ok(self.h.jet(z).value + self.g.jet(z).value.conj())
    }

    /// Evaluation plus the list of diagnostics raised at `z`.
    pub fn eval_with_warnings(&self, z: Complex64) -> Result<(Complex64, Vec<String>)> {
        let value = self.eval(z)?;
        Ok((value, self.warnings(z)))
    }

    pub fn warnings(&self, z: Complex64) -> Vec<String> {
        if self.h.beyond_safe_radius(z) || self.g.beyond_safe_radius(z) {
            vec![format!(
                "series evaluated at |z| = {:.6} beyond safe radius {SAFE_RADIUS}",
                z.norm()
            )]
        } else {
            Vec::new()
        }
    }

    /// `(f_z, f_zbar) = (h'(z), conj(g'(z)))`.
    pub fn wirtinger(&self, z: Complex64) -> Result<WirtingerPair> {
        Self::check_domain(z)?;
        Ok(WirtingerPair {
            fz: self.h.jet(z).d1,
            fzb: self.g.jet(z).d1.conj(),
        })
    }

    /// `||D_f(z)||`.
    pub fn dnorm(&self, z: Complex64) -> Result<f64> {
        Ok(self.wirtinger(z)?.dnorm())
    }

    pub fn h_jet(&self, z: Complex64) -> Result<Jet> {
        Self::check_domain(z)?;
        Ok(self.h.jet(z))
    }

    pub fn g_jet(&self, z: Complex64) -> Result<Jet> {
        Self::check_domain(z)?;
        Ok(self.g.jet(z))
    }

    /// Fails with a witness at the first sample where the Jacobian is not positive.
    pub fn check_sense_preserving(&self, points: &[Complex64]) -> Result<()> {
        for &z in points {
            let jac = self.wirtinger(z)?.jacobian();
            if !(jac > 0.0) {
                return Err(Error::SenseReversing {
                    witness: z,
                    jacobian: jac,
                });
            }
        }
        Ok(())
    }

    /// Returns a copy carrying a new label.
    pub fn relabeled(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

impl fmt::Display for MapDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)
    }
}

/// The Wirtinger derivatives `(f_z, f_zbar)` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WirtingerPair {
    pub fz: Complex64,
    pub fzb: Complex64,
}

impl WirtingerPair {
    pub fn new(fz: Complex64, fzb: Complex64) -> Self {
        WirtingerPair { fz, fzb }
    }

    /// Operator norm `|f_z| + |f_zbar|`.
    pub fn dnorm(&self) -> f64 {
        self.fz.norm() + self.fzb.norm()
    }

    /// Minimum stretch `||f_z| - |f_zbar||`.
    pub fn dmin(&self) -> f64 {
        (self.fz.norm() - self.fzb.norm()).abs()
    }

    pub fn jacobian(&self) -> f64 {
        self.fz.norm_sqr() - self.fzb.norm_sqr()
    }

    /// `|f_zbar| / |f_z|`; infinite when `f_z = 0`.
    pub fn dilatation(&self) -> f64 {
        let a = self.fz.norm();
        if a == 0.0 {
            f64::INFINITY
        } else {
            self.fzb.norm() / a
        }
    }

    pub fn is_sense_preserving(&self) -> bool {
        self.jacobian() > 0.0
    }

    /// Pointwise distortion `dnorm / dmin`.
    pub fn distortion(&self) -> f64 {
        let m = self.dmin();
        if m == 0.0 {
            f64::INFINITY
        } else {
            self.dnorm() / m
        }
    }
}

/// Supremum of `dnorm / dmin` over `points`.
pub fn qc_constant(map: &MapDescriptor, points: &[Complex64]) -> Result<f64> {
    let mut k: f64 = 1.0;
    for &z in points {
        let p = map.wirtinger(z)?;
        let jac = p.jacobian();
        if !(jac > 0.0) {
            return Err(Error::SenseReversing {
                witness: z,
                jacobian: jac,
            });
        }
        k = k.max(p.distortion());
    }
    Ok(k)
}

/// Affine renormalization into `S_H^0`: constants removed, `h'(0)` scaled to
/// one, then `(f - conj(b) conj(f)) / (1 - |b|^2)` with `b = g'(0)`.
pub fn normalize(map: &MapDescriptor) -> Result<MapDescriptor> {
    let origin = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let hj = map.h.jet(origin);
    let gj = map.g.jet(origin);
    if hj.d1.norm() == 0.0 {
        return Err(Error::CriticalPoint(origin));
    }
    let b = gj.d1 / hj.d1.conj();
    if b.norm() >= 1.0 {
        return Err(Error::DegenerateNormalization(b.norm()));
    }

    let (mut h, mut g) = (map.h.clone(), map.g.clone());
    if hj.value != origin || hj.d1 != one {
        let s = one / hj.d1;
        h = AnalyticPart::linear(-hj.value * s, vec![(s, h)]);
    }
    if gj.value != origin || hj.d1 != one {
        let s = one / hj.d1.conj();
        g = AnalyticPart::linear(-gj.value * s, vec![(s, g)]);
    }
    if b != origin {
        let d = 1.0 - b.norm_sqr();
        let new_h = AnalyticPart::linear(origin, vec![(one / d, h.clone()), (-b.conj() / d, g.clone())]);
        let new_g = AnalyticPart::linear(origin, vec![(one / d, g), (-b / d, h)]);
        h = new_h;
        g = new_g;
    }
    let mut flags = map.flags;
    flags.sh = true;
    flags.sh0 = true;
    MapDescriptor::new(map.label.clone(), h, g, flags)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn shear3() -> MapDescriptor {
        MapDescriptor::new(
            "shear-k3",
            AnalyticPart::identity(),
            AnalyticPart::polynomial(&[0.0, 0.5]).unwrap(),
            MapFlags {
                sh: true,
                ..Default::default()
            },
        )
        .unwrap()
    }

    #[test]
    fn eval_examples() {
        let id = MapDescriptor::analytic("identity", AnalyticPart::identity(), MapFlags::default()).unwrap();
        assert_eq!(id.eval(c(0.5, 0.0)).unwrap(), c(0.5, 0.0));
        let k = MapDescriptor::analytic("koebe", AnalyticPart::catalog(CatalogFn::Koebe), MapFlags::default()).unwrap();
        assert!((k.eval(c(0.5, 0.0)).unwrap() - c(2.0, 0.0)).norm() < 1e-15);
        assert!((shear3().eval(c(0.5, 0.0)).unwrap() - c(0.75, 0.0)).norm() < 1e-15);
        assert!(matches!(id.eval(c(1.0, 0.0)), Err(Error::OutsideDisk(_))));
        assert!(matches!(id.eval(c(0.8, 0.7)), Err(Error::OutsideDisk(_))));
    }

    #[test]
    fn wirtinger_examples() {
        let k = MapDescriptor::analytic("koebe", AnalyticPart::catalog(CatalogFn::Koebe), MapFlags::default()).unwrap();
        let p = k.wirtinger(c(0.5, 0.0)).unwrap();
        assert!((p.fz - c(12.0, 0.0)).norm() < 1e-12);
        assert_eq!(p.fzb, c(0.0, 0.0));
        let p = shear3().wirtinger(c(-0.3, 0.6)).unwrap();
        assert_eq!(p, WirtingerPair::new(c(1.0, 0.0), c(0.5, 0.0)));
    }

    #[test]
    fn pair_functionals() {
        let p = WirtingerPair::new(c(1.0, 0.0), c(0.5, 0.0));
        assert_eq!(p.dnorm(), 1.5);
        assert_eq!(p.dmin(), 0.5);
        assert_eq!(p.jacobian(), 0.75);
        assert_eq!(p.dilatation(), 0.5);
        let p = WirtingerPair::new(c(12.0, 0.0), c(0.0, 0.0));
        assert_eq!((p.dnorm(), p.dmin(), p.jacobian(), p.dilatation()), (12.0, 12.0, 144.0, 0.0));
        let p = WirtingerPair::new(c(0.5, 0.0), c(1.0, 0.0));
        assert_eq!(p.jacobian(), -0.75);
        assert!(!p.is_sense_preserving());
        let p = WirtingerPair::new(c(0.0, 0.0), c(0.3, 0.0));
        assert!(p.dilatation().is_infinite());
    }

    #[test]
    fn catalog_derivatives_match_difference_quotients() {
        for name in [CatalogFn::Identity, CatalogFn::Koebe, CatalogFn::Halfplane] {
            let part = AnalyticPart::rotated(name, Complex64::from_polar(1.0, 0.7)).unwrap();
            let z = c(0.31, -0.42);
            let hstep = 1e-5;
            let j = part.jet(z);
            let fd1 = (part.jet(z + hstep).value - part.jet(z - hstep).value) / (2.0 * hstep);
            let fd2 = (part.jet(z + hstep).d1 - part.jet(z - hstep).d1) / (2.0 * hstep);
            assert!((j.d1 - fd1).norm() < 1e-8 * (1.0 + j.d1.norm()), "{name:?}");
            assert!((j.d2 - fd2).norm() < 1e-7 * (1.0 + j.d2.norm()), "{name:?}");
        }
    }

    #[test]
    fn series_flags_warning_beyond_safe_radius() {
        let m = MapDescriptor::analytic("p", AnalyticPart::polynomial(&[0.0, 1.0, 0.125]).unwrap(), MapFlags::default()).unwrap();
        assert!(m.warnings(c(0.5, 0.0)).is_empty());
        let (_, w) = m.eval_with_warnings(c(0.9995, 0.0)).unwrap();
        assert_eq!(w.len(), 1);
    }

    #[test]
    fn normalization_is_enforced() {
        let bad = MapDescriptor::analytic(
            "twice",
            AnalyticPart::polynomial(&[0.0, 2.0]).unwrap(),
            MapFlags { sh: true, ..Default::default() },
        );
        assert!(matches!(bad, Err(Error::Normalization { .. })));
        let bad0 = MapDescriptor::new(
            "shear",
            AnalyticPart::identity(),
            AnalyticPart::polynomial(&[0.0, 0.5]).unwrap(),
            MapFlags { sh0: true, ..Default::default() },
        );
        assert!(matches!(bad0, Err(Error::Normalization { .. })));
    }

    #[test]
    fn qc_constant_examples() {
        let pts: Vec<Complex64> = (0..50)
            .map(|k| Complex64::from_polar(0.999 * k as f64 / 49.0, k as f64))
            .collect();
        let id = MapDescriptor::analytic("identity", AnalyticPart::identity(), MapFlags::default()).unwrap();
        assert_eq!(qc_constant(&id, &pts).unwrap(), 1.0);
        assert!((qc_constant(&shear3(), &pts).unwrap() - 3.0).abs() < 1e-12);

        // g' = z h' / 2 for h = z, so g = z^2 / 4 and |omega| = |z| / 2.
        let m = MapDescriptor::new(
            "half-z",
            AnalyticPart::identity(),
            AnalyticPart::polynomial(&[0.0, 0.0, 0.25]).unwrap(),
            MapFlags::default(),
        )
        .unwrap();
        let k = qc_constant(&m, &[c(0.999, 0.0)]).unwrap();
        assert!((k - 1.4995 / 0.5005).abs() < 1e-12);

        let rev = MapDescriptor::new("rev", AnalyticPart::polynomial(&[0.0, 0.5]).unwrap(), AnalyticPart::identity(), MapFlags::default()).unwrap();
        assert!(matches!(qc_constant(&rev, &pts), Err(Error::SenseReversing { .. })));
    }

    #[test]
    fn normalize_examples() {
        let f = normalize(&shear3()).unwrap();
        for z in [c(0.3, 0.1), c(-0.7, 0.2)] {
            assert!((f.eval(z).unwrap() - z).norm() < 1e-14);
        }
        assert!(f.flags.sh0);

        let twice = MapDescriptor::analytic("twice", AnalyticPart::polynomial(&[0.0, 2.0]).unwrap(), MapFlags::default()).unwrap();
        let n = normalize(&twice).unwrap();
        assert!((n.eval(c(0.4, 0.2)).unwrap() - c(0.4, 0.2)).norm() < 1e-15);

        let k = MapDescriptor::analytic("koebe", AnalyticPart::catalog(CatalogFn::Koebe), MapFlags { sh0: true, ..Default::default() }).unwrap();
        assert_eq!(normalize(&k).unwrap(), k);

        let degenerate = MapDescriptor::new("deg", AnalyticPart::identity(), AnalyticPart::identity(), MapFlags::default()).unwrap();
        assert!(matches!(normalize(&degenerate), Err(Error::DegenerateNormalization(_))));
    }

    #[test]
    fn normalize_general_affine_map_and_idempotence() {
        // f = (2 + i) koebe + 0.3 + conj(0.4 i koebe + 0.1)
        let h = AnalyticPart::linear(c(0.3, 0.0), vec![(c(2.0, 1.0), AnalyticPart::catalog(CatalogFn::Koebe))]);
        let g = AnalyticPart::linear(c(0.1, 0.0), vec![(c(0.0, 0.4), AnalyticPart::catalog(CatalogFn::Koebe))]);
        let m = MapDescriptor::new("mixed", h, g, MapFlags::default()).unwrap();
        let n1 = normalize(&m).unwrap();
        let j = n1.g.jet(c(0.0, 0.0));
        assert!(j.d1.norm() < 1e-15 && j.value.norm() < 1e-15);
        let n2 = normalize(&n1).unwrap();
        for z in [c(0.2, 0.5), c(-0.6, -0.1), c(0.9, 0.0)] {
            assert!((n1.eval(z).unwrap() - n2.eval(z).unwrap()).norm() < 1e-12);
        }
    }
}
