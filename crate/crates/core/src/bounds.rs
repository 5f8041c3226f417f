//! Distortion and growth inequalities as margin-reporting predicates, plus
//! the explicit constants `C8`, `M(a1, a2, a3)` and `C36`.
//!
//! Margins are `(RHS - LHS) / max(1, RHS)`; a report passes when its worst
//! margin is at least `-slack`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::geometry::{arc_i, diameter, exp_two_hyp, one_minus_sq, BoundaryImage};
use crate::hmap::MapDescriptor;
use crate::quad::golden_max;
use crate::radial::m_f;

fn finite_or_tag<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else if v.is_nan() {
        s.serialize_str("nan")
    } else if *v > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}

fn finite_map<S: Serializer>(m: &BTreeMap<String, f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut out = s.serialize_map(Some(m.len()))?;
    for (k, v) in m {
        if v.is_finite() {
            out.serialize_entry(k, v)?;
        } else {
            out.serialize_entry(k, &format!("{v}"))?;
        }
    }
    out.end()
}

/// Outcome of one inequality over a sample set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub predicate: String,
    pub map: String,
    pub alpha: f64,
    #[serde(rename = "K")]
    pub big_k: f64,
    pub samples: usize,
    #[serde(serialize_with = "finite_or_tag")]
    pub worst_margin: f64,
    pub witness: [f64; 2],
    pub pass: bool,
    pub slack: f64,
    /// Set for genuinely harmonic maps, where `alpha` is a guess and a failure
    /// is informative rather than a defect.
    pub advisory: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", serialize_with = "finite_map")]
    pub estimates: BTreeMap<String, f64>,
}

impl CheckReport {
    /// Whether a failure of this report should fail a suite.
    pub fn is_failure(&self) -> bool {
        !self.pass && !self.advisory
    }

    /// A report whose margin was computed elsewhere.
    pub(crate) fn single(predicate: &str, map: &MapDescriptor, s: Setting, samples: usize, margin: f64, witness: Complex64) -> Self {
        let mut t = Tally::new();
        t.push(margin, witness);
        let mut rep = t.report(predicate, map, s);
        rep.samples = samples;
        rep
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Model parameters shared by all predicates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Setting {
    pub alpha: f64,
    pub big_k: f64,
    pub slack: f64,
}

impl Setting {
    pub fn new(alpha: f64, big_k: f64, slack: f64) -> Result<Self> {
        if !(alpha >= 2.0 && alpha.is_finite()) {
            return Err(Error::Parameter(format!("alpha must be >= 2, got {alpha}")));
        }
        if !(big_k >= 1.0 && big_k.is_finite()) {
            return Err(Error::Parameter(format!("K must be >= 1, got {big_k}")));
        }
        if !(slack >= 0.0) {
            return Err(Error::Parameter("slack must be nonnegative".into()));
        }
        Ok(Setting { alpha, big_k, slack })
    }

    /// `alpha = 2`, `K = 1`, slack `1e-9`.
    pub fn classical() -> Self {
        Setting {
            alpha: 2.0,
            big_k: 1.0,
            slack: 1e-9,
        }
    }
}

impl From<&Config> for Setting {
    fn from(c: &Config) -> Self {
        Setting {
            alpha: c.alpha,
            big_k: c.big_k,
            slack: c.slack,
        }
    }
}

/// Min-reduction of margins with the witness that attains the minimum.
#[derive(Debug, Clone)]
struct Tally {
    samples: usize,
    worst: f64,
    witness: Complex64,
}

impl Tally {
    fn new() -> Self {
        Tally {
            samples: 0,
            worst: f64::INFINITY,
            witness: Complex64::new(0.0, 0.0),
        }
    }

    fn push(&mut self, margin: f64, at: Complex64) {
        self.samples += 1;
        let m = if margin.is_nan() { f64::NEG_INFINITY } else { margin };
        if m < self.worst {
            self.worst = m;
            self.witness = at;
        }
    }

    /// Records `rhs >= lhs`.
    fn upper(&mut self, lhs: f64, rhs: f64, at: Complex64) {
        self.push(margin(lhs, rhs), at);
    }

    fn report(self, predicate: &str, map: &MapDescriptor, s: Setting) -> CheckReport {
        let mut notes = Vec::new();
        let worst = if self.samples == 0 {
            notes.push("no qualifying samples".to_string());
            0.0
        } else {
            self.worst
        };
        let advisory = !map.is_analytic();
        if advisory {
            notes.push("harmonic map: alpha is not known to be admissible".to_string());
        }
        CheckReport {
            predicate: predicate.to_string(),
            map: map.label.clone(),
            alpha: s.alpha,
            big_k: s.big_k,
            samples: self.samples,
            worst_margin: worst,
            witness: [self.witness.re, self.witness.im],
            pass: worst >= -s.slack,
            slack: s.slack,
            advisory,
            notes,
            estimates: BTreeMap::new(),
        }
    }
}

/// `(rhs - lhs) / max(1, rhs)`.
pub fn margin(lhs: f64, rhs: f64) -> f64 {
    (rhs - lhs) / rhs.max(1.0)
}

fn require_sh(map: &MapDescriptor) -> Result<()> {
    if !map.flags.sh {
        return Err(Error::Precondition(format!("map `{}` is not flagged SH", map.label)));
    }
    Ok(())
}

fn require_sh0(map: &MapDescriptor) -> Result<()> {
    if !map.flags.sh0 {
        return Err(Error::Precondition(format!("map `{}` is not flagged SH0", map.label)));
    }
    Ok(())
}

/// `(1-|z|)^(a-1)/(1+|z|)^(a+1) <= |h'(z)| <= (1+|z|)^(a-1)/(1-|z|)^(a+1)`.
pub fn check_sheilsmall(map: &MapDescriptor, s: Setting, points: &[Complex64]) -> Result<CheckReport> {
    require_sh(map)?;
    let a = s.alpha;
    let mut t = Tally::new();
    for &z in points {
        let d = map.h_jet(z)?.d1.norm();
        let r = z.norm();
        let lower = (1.0 - r).powf(a - 1.0) / (1.0 + r).powf(a + 1.0);
        let upper = (1.0 + r).powf(a - 1.0) / (1.0 - r).powf(a + 1.0);
        t.upper(d, upper, z);
        t.upper(lower, d, z);
    }
    Ok(t.report("sheil-small", map, s))
}

/// Two-sided growth bound on `|f(z1) - f(z0)| / ((1 - |z0|^2) |f_z(z0)|)`
/// in terms of `exp(2 alpha lambda(z1, z0))`, over pairs `(z0, z1)`.
/// The witness is `z1`; `estimates` holds the worst upper-bound margin alone.
pub fn check_lemma11(map: &MapDescriptor, s: Setting, pairs: &[(Complex64, Complex64)]) -> Result<CheckReport> {
    require_sh(map)?;
    let (a, k) = (s.alpha, s.big_k);
    let mut t = Tally::new();
    let mut upper_only = Tally::new();
    for &(z0, z1) in pairs {
        let fz0 = map.wirtinger(z0)?.fz;
        if fz0.norm() == 0.0 {
            return Err(Error::CriticalPoint(z0));
        }
        let lhs = (map.eval(z1)? - map.eval(z0)?).norm() / (one_minus_sq(z0) * fz0.norm());
        let e = exp_two_hyp(z1, z0)?.powf(a);
        let upper = k / (a * (1.0 + k)) * (e - 1.0);
        let lower = 1.0 / (a * (1.0 + k)) * (1.0 - 1.0 / e);
        t.upper(lhs, upper, z1);
        t.upper(lower, lhs, z1);
        upper_only.upper(lhs, upper, z1);
    }
    let worst_upper = upper_only.worst;
    let mut rep = t.report("growth", map, s);
    rep.estimates.insert("worst_upper_margin".into(), worst_upper);
    Ok(rep)
}

/// `C8 = 2 alpha K sup_{t in (0,1)} t (1+t)^(alpha-1) / ((1+t)^alpha - (1-t)^alpha)`.
pub fn c8_constant(alpha: f64, big_k: f64) -> Result<f64> {
    Setting::new(alpha, big_k, 0.0)?;
    let phi = |t: f64| t * (1.0 + t).powf(alpha - 1.0) / ((1.0 + t).powf(alpha) - (1.0 - t).powf(alpha));
    let n = 1000;
    let mut best = (1usize, phi(1.0 / n as f64));
    for k in 2..=n {
        let v = phi(k as f64 / n as f64);
        if v > best.1 {
            best = (k, v);
        }
    }
    let lo = (best.0 - 1) as f64 / n as f64;
    let hi = ((best.0 + 1).min(n)) as f64 / n as f64;
    let (_, refined) = golden_max(|t| if t > 0.0 { phi(t) } else { f64::NEG_INFINITY }, lo.max(1e-12), hi, 1e-13);
    let sup = best.1.max(refined);
    Ok(2.0 * alpha * big_k * sup)
}

/// `||D_f(z)|| |z| <= C8 |f(z)| / (1 - |z|)`.
pub fn check_lemma_cpu1(map: &MapDescriptor, s: Setting, points: &[Complex64]) -> Result<CheckReport> {
    require_sh(map)?;
    let c8 = c8_constant(s.alpha, s.big_k)?;
    let mut t = Tally::new();
    for &z in points {
        let lhs = map.dnorm(z)? * z.norm();
        let rhs = c8 * map.eval(z)?.norm() / (1.0 - z.norm());
        t.upper(lhs, rhs, z);
    }
    let mut rep = t.report("norm-modulus", map, s);
    rep.estimates.insert("C8".into(), c8);
    Ok(rep)
}

/// `(1 - rho^2) ||D_f(rho xi)|| / ((1 - r^2) ||D_f(r xi)||) <= exp(2 alpha lambda(rho, r))`
/// over triples `(xi, rho, r)` with `|xi| = 1`, `0 <= rho <= r < 1`.
pub fn check_eq_w2(map: &MapDescriptor, s: Setting, triples: &[(Complex64, f64, f64)]) -> Result<CheckReport> {
    require_sh0(map)?;
    let mut t = Tally::new();
    for &(xi, rho, r) in triples {
        if !(0.0 <= rho && rho <= r && r < 1.0) || (xi.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::Parameter(format!("bad triple ({xi}, {rho}, {r})")));
        }
        let d_rho = map.dnorm(xi * rho)?;
        let d_r = map.dnorm(xi * r)?;
        if d_r == 0.0 {
            return Err(Error::ZeroNorm(xi * r));
        }
        let lhs = (1.0 - rho * rho) * d_rho / ((1.0 - r * r) * d_r);
        let rhs = ((1.0 + r) * (1.0 - rho) / ((1.0 - r) * (1.0 + rho))).powf(s.alpha);
        t.upper(lhs, rhs, xi * r);
    }
    Ok(t.report("radial-norm-ratio", map, s))
}

/// `d_Omega(f(z)) >= ||D_f(z)|| (1 - |z|^2) / (16 K)`, with the boundary
/// distance taken to the image of the ring `|z| = 1 - eps` sampled at `n`
/// points. That distance never exceeds the true one, so a pass is conservative.
pub fn check_dist_lower(map: &MapDescriptor, s: Setting, points: &[Complex64], eps: f64, n: usize) -> Result<CheckReport> {
    require_sh(map)?;
    let ring = BoundaryImage::new(map, eps, n)?;
    let mut t = Tally::new();
    for &z in points {
        if z.norm() >= 1.0 - eps {
            return Err(Error::Precondition(format!("point {z} is outside the sampling ring")));
        }
        let d = ring.distance(map.eval(z)?);
        let rhs = map.dnorm(z)? * one_minus_sq(z) / (16.0 * s.big_k);
        t.upper(rhs, d, z);
    }
    let mut rep = t.report("distance-lower", map, s);
    rep.estimates.insert("eps".into(), eps);
    Ok(rep)
}

/// `M(a1, a2, a3) = 2 exp((1 + alpha)(a3 + log((2 a2 - a1)/a1) / 2))`.
pub fn m_constant(a1: f64, a2: f64, a3: f64, alpha: f64) -> Result<f64> {
    if !(a1 > 0.0 && a2 >= a1 && a3 >= 0.0) {
        return Err(Error::Parameter(format!("need 0 < a1 <= a2 and a3 >= 0, got ({a1}, {a2}, {a3})")));
    }
    Ok(2.0 * ((1.0 + alpha) * (a3 + 0.5 * ((2.0 * a2 - a1) / a1).ln())).exp())
}

/// Box parameters `(a1, a2, a3)` of the Harnack-type comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarnackBox {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl HarnackBox {
    /// Tensor sample of `{ 1 - a2 d <= |z| <= 1 - a1 d, |arg z - arg z0| <= a3 d }`
    /// with `d = 1 - |z0|`.
    pub fn sample(&self, z0: Complex64, radial: usize, angular: usize) -> Result<Vec<Complex64>> {
        let r0 = z0.norm();
        if !(r0 > 0.0 && r0 < 1.0) {
            return Err(Error::Parameter(format!("need 0 < |z0| < 1, got {z0}")));
        }
        let d = 1.0 - r0;
        let inner = 1.0 - self.a2 * d;
        let outer = 1.0 - self.a1 * d;
        if inner < 0.0 {
            return Err(Error::Precondition(format!("1 - a2 (1 - |z0|) = {inner} is negative")));
        }
        let (radial, angular) = (radial.max(2), angular.max(2));
        let half = self.a3 * d;
        let mut out = Vec::with_capacity(radial * angular);
        for i in 0..radial {
            let rho = inner + (outer - inner) * i as f64 / (radial - 1) as f64;
            for j in 0..angular {
                let t = -half + 2.0 * half * j as f64 / (angular - 1) as f64;
                out.push(Complex64::from_polar(rho, z0.arg() + t));
            }
        }
        Ok(out)
    }
}

/// `||D_f(z0)|| / M <= ||D_f(z)|| <= M ||D_f(z0)||` on the box around `z0`.
pub fn check_harnack(map: &MapDescriptor, s: Setting, z0: Complex64, b: HarnackBox, points: &[Complex64]) -> Result<CheckReport> {
    require_sh(map)?;
    let m = m_constant(b.a1, b.a2, b.a3, s.alpha)?;
    let d0 = map.dnorm(z0)?;
    if d0 == 0.0 {
        return Err(Error::ZeroNorm(z0));
    }
    let mut t = Tally::new();
    for &z in points {
        let ratio = map.dnorm(z)? / d0;
        t.upper(ratio, m, z);
        t.upper(1.0 / m, ratio, z);
    }
    let mut rep = t.report("harnack", map, s);
    rep.estimates.insert("M".into(), m);
    Ok(rep)
}

/// `|f(z) - f(z0)| <= K/(alpha (1+K)) [(M/2)^(2 alpha/(1+alpha)) - 1] (1 - |z0|^2) |f_z(z0)|`.
pub fn check_lemma12(map: &MapDescriptor, s: Setting, z0: Complex64, b: HarnackBox, points: &[Complex64]) -> Result<CheckReport> {
    require_sh(map)?;
    let (a, k) = (s.alpha, s.big_k);
    let m = m_constant(b.a1, b.a2, b.a3, a)?;
    let fz0 = map.wirtinger(z0)?.fz.norm();
    if fz0 == 0.0 {
        return Err(Error::CriticalPoint(z0));
    }
    let rhs = k / (a * (1.0 + k)) * ((m / 2.0).powf(2.0 * a / (1.0 + a)) - 1.0) * one_minus_sq(z0) * fz0;
    let w0 = map.eval(z0)?;
    let mut t = Tally::new();
    for &z in points {
        t.upper((map.eval(z)? - w0).norm(), rhs, z);
    }
    let mut rep = t.report("box-oscillation", map, s);
    rep.estimates.insert("M".into(), m);
    Ok(rep)
}

/// Empirical constant of `|f(rho e^{it})| / rho <= C9 m_f(r, t)` on `(0, r]`,
/// together with the two pieces the constant is assembled from:
/// on `[rho0, r]` the bound `m_f(r)/rho0`, and on `(0, rho0]` the growth
/// bound `K/(alpha(1+K)) (exp(2 alpha lambda(rho0, 0)) - 1) / rho0`.
pub fn check_lemma_cpu3(map: &MapDescriptor, s: Setting, rho0: f64, r: f64, theta: f64, n: usize) -> Result<CheckReport> {
    require_sh(map)?;
    if !(0.0 < rho0 && rho0 <= r && r < 1.0) {
        return Err(Error::Parameter(format!("need 0 < rho0 <= r < 1, got rho0={rho0}, r={r}")));
    }
    let (a, k) = (s.alpha, s.big_k);
    let mf = m_f(map, r, theta, n.max(64))?;
    let dir = Complex64::from_polar(1.0, theta);
    let inner_bound = k / (a * (1.0 + k)) * (((1.0 + rho0) / (1.0 - rho0)).powf(a) - 1.0) / rho0;
    let n = n.max(8);
    let mut t = Tally::new();
    // rho -> 0 limit of |f(rho e^{it})| / rho
    let p0 = map.wirtinger(Complex64::new(0.0, 0.0))?;
    let q0 = (p0.fz + p0.fzb * dir.conj() * dir.conj()).norm();
    let mut c9 = q0 / mf;
    t.upper(q0, inner_bound, Complex64::new(0.0, 0.0));
    for i in 1..=n {
        let rho = r * i as f64 / n as f64;
        let q = map.eval(dir * rho)?.norm() / rho;
        c9 = c9.max(q / mf);
        if rho >= rho0 {
            t.upper(q, mf / rho0, dir * rho);
        } else {
            t.upper(q, inner_bound, dir * rho);
        }
    }
    let mut rep = t.report("radial-derivative", map, s);
    rep.estimates.insert("C9".into(), c9);
    rep.estimates.insert("C10".into(), inner_bound / mf);
    rep.estimates.insert("m_f".into(), mf);
    Ok(rep)
}

/// `C36 = 2 pi e^((1+alpha) pi) + (2 C35 e^((1+alpha) pi) + C35) / delta13`.
pub fn c36_constant(alpha: f64, c35: f64, delta13: f64) -> Result<f64> {
    if !(c35 > 0.0 && delta13 > 0.0 && delta13 < 1.0 + 1e-12) {
        return Err(Error::Precondition(format!(
            "decay hypothesis needs C35 > 0 and delta13 in (0,1), got ({c35}, {delta13})"
        )));
    }
    let e = ((1.0 + alpha) * PI).exp();
    Ok(2.0 * PI * e + (2.0 * c35 * e + c35) / delta13)
}

/// `diam f(I(a)) <= 32 K C36 d_G(f(a))` for each anchor `a`, with `f(I(a))`
/// sampled on the ring `|z| = 1 - eps`.
pub fn check_diam_i(
    map: &MapDescriptor,
    s: Setting,
    anchors: &[Complex64],
    c35: f64,
    delta13: f64,
    eps: f64,
    n: usize,
) -> Result<CheckReport> {
    if !map.flags.bounded {
        return Err(Error::Precondition(format!("map `{}` is not flagged bounded", map.label)));
    }
    let c36 = c36_constant(s.alpha, c35, delta13)?;
    let ring = BoundaryImage::new(map, eps, n.max(64))?;
    let mut t = Tally::new();
    for &a in anchors {
        let arc = arc_i(a, n.max(64), 1.0 - eps)?;
        let image: Vec<Complex64> = arc.points.iter().map(|&z| map.eval(z)).collect::<Result<_>>()?;
        let diam = diameter(&image);
        let d_g = ring.distance(map.eval(a)?);
        t.upper(diam, 32.0 * s.big_k * c36 * d_g, a);
    }
    let mut rep = t.report("arc-diameter", map, s);
    rep.estimates.insert("C36".into(), c36);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{disk_grid, Density};
    use crate::hmap::{AnalyticPart, CatalogFn, MapFlags};
    use crate::transforms::shear_qc;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sh0() -> MapFlags {
        MapFlags { sh: true, sh0: true, ..Default::default() }
    }

    fn catalog(name: CatalogFn) -> MapDescriptor {
        MapDescriptor::analytic(name.name(), AnalyticPart::catalog(name), sh0()).unwrap()
    }

    fn poly2() -> MapDescriptor {
        MapDescriptor::analytic("poly2", AnalyticPart::polynomial(&[0.0, 1.0, 0.125]).unwrap(), MapFlags { bounded: true, ..sh0() }).unwrap()
    }

    fn grid() -> Vec<Complex64> {
        disk_grid(0.999, Density::new(24, 32)).points
    }

    #[test]
    fn report_json_has_fixed_fields() {
        let r = check_sheilsmall(&catalog(CatalogFn::Identity), Setting::classical(), &grid()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json_line()).unwrap();
        for key in ["predicate", "alpha", "K", "samples", "worst_margin", "witness", "pass"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["witness"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn sheilsmall_examples() {
        let s = Setting::classical();
        let id = check_sheilsmall(&catalog(CatalogFn::Identity), s, &grid()).unwrap();
        assert!(id.pass && id.worst_margin >= 0.0);
        let axis: Vec<Complex64> = (1..100).map(|k| c(k as f64 / 100.0, 0.0)).collect();
        let k = check_sheilsmall(&catalog(CatalogFn::Koebe), s, &axis).unwrap();
        assert!(k.pass && k.worst_margin.abs() < 1e-12);
        let hp = check_sheilsmall(&catalog(CatalogFn::Halfplane), s, &axis).unwrap();
        assert!(hp.pass && hp.worst_margin > 0.0);
    }

    #[test]
    fn growth_bound_koebe_is_sharp_on_both_sides() {
        let k = catalog(CatalogFn::Koebe);
        let s = Setting::classical();
        let plus: Vec<_> = (1..10).map(|i| (c(0.0, 0.0), c(i as f64 / 10.0, 0.0))).collect();
        let rep = check_lemma11(&k, s, &plus).unwrap();
        assert!(rep.pass);
        assert!(rep.estimates["worst_upper_margin"].abs() < 1e-12);
        let minus: Vec<_> = (1..10).map(|i| (c(0.0, 0.0), c(-(i as f64) / 10.0, 0.0))).collect();
        let rep = check_lemma11(&k, s, &minus).unwrap();
        assert!(rep.pass && rep.worst_margin.abs() < 1e-12);
        let same = check_lemma11(&k, s, &[(c(0.3, 0.2), c(0.3, 0.2))]).unwrap();
        assert_eq!(same.worst_margin, 0.0);
    }

    #[test]
    fn growth_upper_value_matches_growth_formula() {
        // (1/4)[((1+r)/(1-r))^2 - 1] = r/(1-r)^2
        let r: f64 = 0.7;
        let e = exp_two_hyp(c(r, 0.0), c(0.0, 0.0)).unwrap().powi(2);
        assert!((0.25 * (e - 1.0) - r / (1.0 - r).powi(2)).abs() < 1e-12);
    }

    #[test]
    fn c8_examples() {
        assert!((c8_constant(2.0, 1.0).unwrap() - 2.0).abs() < 1e-9);
        assert!((c8_constant(2.0, 2.0).unwrap() - 4.0).abs() < 1e-9);
        for alpha in [2.0, 3.0, 5.0] {
            for k in [1.0, 2.0, 10.0] {
                assert!(c8_constant(alpha, k).unwrap() >= k);
            }
        }
        assert!(c8_constant(1.0, 1.0).is_err());
    }

    #[test]
    fn norm_modulus_examples() {
        let s = Setting::classical();
        for name in [CatalogFn::Identity, CatalogFn::Koebe, CatalogFn::Halfplane] {
            let rep = check_lemma_cpu1(&catalog(name), s, &grid()).unwrap();
            assert!(rep.pass, "{name:?}: {rep:?}");
        }
    }

    #[test]
    fn eq_w2_examples() {
        let s = Setting::classical();
        let mut triples = Vec::new();
        for j in 0..8 {
            let xi = Complex64::from_polar(1.0, j as f64 * PI / 4.0);
            for a in 0..10 {
                for b in a..10 {
                    triples.push((xi, a as f64 / 10.0, b as f64 / 10.0));
                }
            }
        }
        for name in [CatalogFn::Identity, CatalogFn::Koebe] {
            let rep = check_eq_w2(&catalog(name), s, &triples).unwrap();
            assert!(rep.pass, "{rep:?}");
        }
        let diag = check_eq_w2(&catalog(CatalogFn::Identity), s, &[(c(1.0, 0.0), 0.4, 0.4)]).unwrap();
        assert_eq!(diag.worst_margin, 0.0);
    }

    #[test]
    fn dist_lower_examples() {
        let s = Setting::classical();
        let id = check_dist_lower(&catalog(CatalogFn::Identity), s, &grid(), 1e-5, 4096).unwrap();
        assert!(id.pass);
        let shear = shear_qc(&AnalyticPart::identity(), 3.0).unwrap();
        let rep = check_dist_lower(&shear, Setting::new(2.0, 3.0, 1e-9).unwrap(), &grid(), 1e-5, 4096).unwrap();
        assert!(rep.pass);
    }

    #[test]
    fn m_constant_examples() {
        for a in [0.5, 1.0, 2.0] {
            for alpha in [2.0, 3.0, 7.5] {
                assert_eq!(m_constant(a, a, 0.0, alpha).unwrap(), 2.0);
            }
        }
        let direct = 2.0 * (3.0 * (PI + 0.5 * 3f64.ln())).exp();
        assert!((m_constant(1.0, 2.0, PI, 2.0).unwrap() / direct - 1.0).abs() < 1e-12);
        assert!((direct - 1.2886e5).abs() / 1.2886e5 < 1e-3);
        assert!(m_constant(2.0, 1.0, 0.0, 2.0).is_err());
    }

    #[test]
    fn harnack_and_box_oscillation_examples() {
        let s = Setting::classical();
        let b = HarnackBox { a1: 0.5, a2: 2.0, a3: 1.0 };
        for name in [CatalogFn::Identity, CatalogFn::Koebe] {
            let map = catalog(name);
            for z0 in [c(0.9, 0.0), Complex64::from_polar(0.99, 2.0), c(-0.5, 0.0)] {
                let pts = b.sample(z0, 12, 12).unwrap();
                assert!(check_harnack(&map, s, z0, b, &pts).unwrap().pass);
                assert!(check_lemma12(&map, s, z0, b, &pts).unwrap().pass);
            }
        }
        let id = catalog(CatalogFn::Identity);
        let at = check_lemma12(&id, s, c(0.9, 0.0), b, &[c(0.9, 0.0)]).unwrap();
        assert!(at.worst_margin > 0.0);
    }

    #[test]
    fn radial_derivative_examples() {
        let s = Setting::classical();
        let id = check_lemma_cpu3(&catalog(CatalogFn::Identity), s, 0.2, 0.8, 0.0, 200).unwrap();
        assert!(id.pass);
        assert!((id.estimates["C9"] - 1.0 / 0.8).abs() < 1e-12);
        let r: f64 = 0.8;
        let k = check_lemma_cpu3(&catalog(CatalogFn::Koebe), s, 0.2, r, PI, 200).unwrap();
        assert!(k.pass);
        assert!((k.estimates["C9"] - (1.0 + r).powi(2) / r).abs() < 1e-9);
    }

    #[test]
    fn diam_i_examples() {
        let s = Setting::classical();
        let id = MapDescriptor::analytic("identity", AnalyticPart::identity(), MapFlags { bounded: true, ..sh0() }).unwrap();
        let rep = check_diam_i(&id, s, &[c(0.9, 0.0), c(0.0, 0.0)], 1.0, 1.0, 1e-6, 1024).unwrap();
        assert!(rep.pass && rep.worst_margin > 0.99);
        assert!(check_diam_i(&poly2(), s, &[c(0.5, 0.5), c(-0.95, 0.0)], 1.2, 0.9, 1e-6, 1024).unwrap().pass);
        assert!(check_diam_i(&catalog(CatalogFn::Koebe), s, &[c(0.5, 0.0)], 1.0, 0.5, 1e-6, 1024).is_err());
        assert!(c36_constant(2.0, 1.0, -2.0).is_err());
    }

    #[test]
    fn identity_arc_diameter_is_the_chord() {
        let arc = arc_i(c(0.9, 0.0), 2049, 1.0 - 1e-9).unwrap();
        assert!((diameter(&arc.points) - 2.0 * (0.1 * PI).sin()).abs() < 1e-6);
    }
}
