//! Hyperbolic metric of the disk, the sampled regions used by the
//! estimators, and boundary-distance estimation for image domains.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hmap::MapDescriptor;
use crate::quad::clustered_toward_one;

fn check_disk(z: Complex64) -> Result<()> {
    if !(z.norm() < 1.0) {
        return Err(Error::OutsideDisk(z));
    }
    Ok(())
}

/// `1 - |z|^2` without cancellation near the circle.
pub(crate) fn one_minus_sq(z: Complex64) -> f64 {
    let r = z.norm();
    (1.0 - r) * (1.0 + r)
}

/// `exp(2 lambda(z1, z2))` where `tanh lambda = |(z1 - z2) / (1 - conj(z1) z2)|`.
///
/// Evaluated as `(|1 - conj(z1) z2| + |z1 - z2|)^2 / ((1 - |z1|^2)(1 - |z2|^2))`,
/// which stays accurate when both points approach the circle.
pub fn exp_two_hyp(z1: Complex64, z2: Complex64) -> Result<f64> {
    check_disk(z1)?;
    check_disk(z2)?;
    let a = (Complex64::new(1.0, 0.0) - z1.conj() * z2).norm();
    let b = (z1 - z2).norm();
    Ok((a + b) * (a + b) / (one_minus_sq(z1) * one_minus_sq(z2)))
}

/// Hyperbolic distance `arctanh |(z1 - z2) / (1 - conj(z1) z2)|`.
pub fn hyp_dist(z1: Complex64, z2: Complex64) -> Result<f64> {
    check_disk(z1)?;
    check_disk(z2)?;
    if z1 == z2 {
        return Ok(0.0);
    }
    Ok(0.5 * exp_two_hyp(z1, z2)?.ln())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegionKind {
    BoxB,
    ArcI,
    Stolz,
    Radius,
    Circle,
    BoundaryRing,
    DiskGrid,
}

impl RegionKind {
    pub fn name(self) -> &'static str {
        match self {
            RegionKind::BoxB => "box-B",
            RegionKind::ArcI => "arc-I",
            RegionKind::Stolz => "stolz",
            RegionKind::Radius => "radius",
            RegionKind::Circle => "circle",
            RegionKind::BoundaryRing => "boundary-ring",
            RegionKind::DiskGrid => "disk-grid",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Density {
    pub radial: usize,
    pub angular: usize,
}

impl Density {
    pub fn new(radial: usize, angular: usize) -> Self {
        Density { radial, angular }
    }

    /// Doubles both densities.
    pub fn refined(self) -> Self {
        Density {
            radial: 2 * self.radial,
            angular: 2 * self.angular,
        }
    }
}

/// A deterministic discretization of one region.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionSample {
    pub kind: RegionKind,
    pub anchor: Complex64,
    /// Radius parameter (`r` of a circle, ray or Stolz domain).
    pub r: Option<f64>,
    pub theta: Option<f64>,
    pub eps: Option<f64>,
    pub points: Vec<Complex64>,
    pub density: Density,
    pub note: Option<String>,
}

impl RegionSample {
    fn new(kind: RegionKind, anchor: Complex64, points: Vec<Complex64>, density: Density) -> Self {
        RegionSample {
            kind,
            anchor,
            r: None,
            theta: None,
            eps: None,
            points,
            density,
            note: None,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// CSV rows `kind,anchor_re,anchor_im,point_re,point_im` with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("kind,anchor_re,anchor_im,point_re,point_im\n");
        for p in &self.points {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                self.kind.name(),
                self.anchor.re,
                self.anchor.im,
                p.re,
                p.im
            );
        }
        out
    }
}

/// Angular distance on the circle, in `[0, pi]`.
pub fn angular_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

const MEMBERSHIP_TOL: f64 = 1e-12;

/// Closed-region membership in `B(z) = { zeta : |z| <= |zeta| < 1, |arg z - arg zeta| <= pi (1 - |z|) }`.
pub fn in_box_b(z: Complex64, zeta: Complex64) -> bool {
    let r = z.norm();
    let s = zeta.norm();
    if !(s < 1.0) || s < r - MEMBERSHIP_TOL {
        return false;
    }
    if r == 0.0 {
        return true;
    }
    angular_gap(z.arg(), zeta.arg()) <= PI * (1.0 - r) + MEMBERSHIP_TOL
}

/// Angular half-width `pi (1 - |z|)` of `B(z)` and `I(z)`.
pub fn box_half_width(z: Complex64) -> f64 {
    PI * (1.0 - z.norm())
}

/// Tensor grid of `B(z)`. Radii run from `|z|` to `1 - (1 - |z|) * depth`,
/// geometrically clustered toward the circle; angles are uniform and include
/// both corners.
pub fn box_b_with_depth(z: Complex64, density: Density, depth: f64) -> Result<RegionSample> {
    check_disk(z)?;
    if !(depth > 0.0 && depth < 1.0) {
        return Err(Error::Parameter(format!("relative depth must lie in (0,1), got {depth}")));
    }
    let r = z.norm();
    let half = box_half_width(z);
    let center = if r == 0.0 { 0.0 } else { z.arg() };
    let outer = 1.0 - (1.0 - r) * depth;
    let radii = clustered_toward_one(r, outer, density.radial.max(2));
    let na = density.angular.max(2);
    let mut points = Vec::with_capacity(radii.len() * na);
    for &rho in &radii {
        for k in 0..na {
            let t = -half + 2.0 * half * k as f64 / (na - 1) as f64;
            points.push(Complex64::from_polar(rho, center + t));
        }
    }
    let mut sample = RegionSample::new(RegionKind::BoxB, z, points, density);
    sample.r = Some(r);
    if r == 0.0 {
        sample.note = Some("B(0) is the whole disk; sampled as an annulus grid".into());
    }
    Ok(sample)
}

/// [`box_b_with_depth`] with the innermost ring at `1 - (1 - |z|) / 1000`.
pub fn box_b(z: Complex64, density: Density) -> Result<RegionSample> {
    box_b_with_depth(z, density, 1e-3)
}

/// The arc `I(a)` sampled on the circle of the given radius.
pub fn arc_i(a: Complex64, n: usize, radius: f64) -> Result<RegionSample> {
    check_disk(a)?;
    let half = box_half_width(a);
    let center = if a.norm() == 0.0 { 0.0 } else { a.arg() };
    let n = n.max(2);
    let points = (0..n)
        .map(|k| Complex64::from_polar(radius, center - half + 2.0 * half * k as f64 / (n - 1) as f64))
        .collect();
    let mut s = RegionSample::new(RegionKind::ArcI, a, points, Density::new(1, n));
    s.r = Some(radius);
    Ok(s)
}

/// `n` points on the segment `[0, r e^{i theta}]`, endpoints included.
pub fn radius_sample(theta: f64, r: f64, n: usize) -> RegionSample {
    let n = n.max(2);
    let dir = Complex64::from_polar(1.0, theta);
    let points = (0..n).map(|k| dir * (r * k as f64 / (n - 1) as f64)).collect();
    let mut s = RegionSample::new(RegionKind::Radius, Complex64::new(0.0, 0.0), points, Density::new(n, 1));
    s.r = Some(r);
    s.theta = Some(theta);
    s
}

/// `n` uniform points on the circle of radius `r`.
pub fn circle(r: f64, n: usize) -> RegionSample {
    let points = (0..n)
        .map(|k| Complex64::from_polar(r, 2.0 * PI * k as f64 / n as f64))
        .collect();
    let mut s = RegionSample::new(RegionKind::Circle, Complex64::new(0.0, 0.0), points, Density::new(1, n));
    s.r = Some(r);
    s
}

/// `n` uniform points on the ring `|z| = 1 - eps`.
pub fn boundary_ring(eps: f64, n: usize) -> RegionSample {
    let mut s = circle(1.0 - eps, n);
    s.kind = RegionKind::BoundaryRing;
    s.eps = Some(eps);
    s
}

/// Polar grid of the disk: the origin plus `radial` circles up to `cap`,
/// clustered toward the boundary, with `angular` points each.
pub fn disk_grid(cap: f64, density: Density) -> RegionSample {
    let mut points = vec![Complex64::new(0.0, 0.0)];
    for rho in clustered_toward_one(0.0, cap, density.radial + 1).into_iter().skip(1) {
        for k in 0..density.angular {
            points.push(Complex64::from_polar(rho, 2.0 * PI * k as f64 / density.angular as f64));
        }
    }
    let mut s = RegionSample::new(RegionKind::DiskGrid, Complex64::new(0.0, 0.0), points, density);
    s.r = Some(cap);
    s
}

/// Outcome of the Stolz-domain angle check at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StolzCheck {
    /// Inside the open convex hull of `r` and the disk of radius `r/4`.
    pub in_hull: bool,
    /// In the hull but outside the disk of radius `r/4`.
    pub in_annular_piece: bool,
    /// `4 pi (r - rho) / (r sqrt 15)`.
    pub bound: f64,
    pub bound_satisfied: bool,
    /// `|eta| < 3 pi / sqrt 15`.
    pub coarse_bound_satisfied: bool,
}

/// Open convex hull of the point `r` and the disk `|z| < r/4`.
pub fn in_stolz_hull(r: f64, z: Complex64) -> bool {
    if z.norm() < r / 4.0 {
        return true;
    }
    // Tangent points from r to the circle of radius r/4 sit at angle acos(1/4).
    let tangent = Complex64::from_polar(r / 4.0, (0.25f64).acos());
    let apex = Complex64::new(r, 0.0);
    let cross = |o: Complex64, a: Complex64, p: Complex64| (a - o).re * (p - o).im - (a - o).im * (p - o).re;
    let upper = tangent;
    let lower = tangent.conj();
    // Strictly inside triangle (apex, upper, lower), which together with the
    // small disk covers the hull.
    let s1 = cross(apex, upper, z);
    let s2 = cross(upper, lower, z);
    let s3 = cross(lower, apex, z);
    (s1 > 0.0 && s2 > 0.0 && s3 > 0.0) || (s1 < 0.0 && s2 < 0.0 && s3 < 0.0)
}

pub fn stolz_angle_check(r: f64, z: Complex64) -> StolzCheck {
    let rho = z.norm();
    let eta = z.arg().abs();
    let in_hull = in_stolz_hull(r, z);
    let bound = 4.0 * PI * (r - rho) / (r * 15f64.sqrt());
    StolzCheck {
        in_hull,
        in_annular_piece: in_hull && rho > r / 4.0,
        bound,
        bound_satisfied: eta <= bound,
        coarse_bound_satisfied: eta < 3.0 * PI / 15f64.sqrt(),
    }
}

/// `n` points drawn uniformly from the annular piece of the Stolz domain by
/// rejection from its bounding box.
pub fn stolz_sample(r: f64, n: usize, seed: u64) -> Result<RegionSample> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Parameter(format!("Stolz radius must lie in (0,1), got {r}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(n);
    let ymax = r / 4.0;
    while points.len() < n {
        let z = Complex64::new(rng.gen_range(-r / 4.0..r), rng.gen_range(-ymax..ymax));
        if z.norm() >= r / 4.0 && in_stolz_hull(r, z) {
            points.push(z);
        }
    }
    let mut s = RegionSample::new(RegionKind::Stolz, Complex64::new(r, 0.0), points, Density::new(n, 1));
    s.r = Some(r);
    Ok(s)
}

/// Sampled image of the ring `|z| = 1 - eps`, reusable for many distance queries.
#[derive(Debug, Clone)]
pub struct BoundaryImage {
    pub eps: f64,
    points: Vec<Complex64>,
}

impl BoundaryImage {
    pub fn new(map: &MapDescriptor, eps: f64, n: usize) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::Parameter(format!("eps must lie in (0,1), got {eps}")));
        }
        let points = boundary_ring(eps, n)
            .points
            .into_iter()
            .map(|z| map.eval(z))
            .collect::<Result<Vec<_>>>()?;
        Ok(BoundaryImage { eps, points })
    }

    pub fn distance(&self, w: Complex64) -> f64 {
        self.points
            .iter()
            .map(|p| (p - w).norm())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceEstimate {
    /// Minimum distance to the `n`-point ring image.
    pub value: f64,
    /// Same with `2n` points.
    pub refined: f64,
    /// Relative change between `n` and `2n` below `1e-3`.
    pub converged: bool,
}

/// Estimates the distance from `w` to the boundary of `f(D)` through the
/// image of the circle of radius `1 - eps`.
pub fn boundary_distance(map: &MapDescriptor, w: Complex64, eps: f64, n: usize) -> Result<DistanceEstimate> {
    if n < 64 {
        return Err(Error::Parameter(format!("need at least 64 ring samples, got {n}")));
    }
    let value = BoundaryImage::new(map, eps, n)?.distance(w);
    let refined = BoundaryImage::new(map, eps, 2 * n)?.distance(w);
    let converged = (value - refined).abs() <= 1e-3 * refined.max(f64::MIN_POSITIVE);
    Ok(DistanceEstimate { value, refined, converged })
}

/// Diameter of a finite point set, via a convex-hull prefilter.
pub fn diameter(points: &[Complex64]) -> f64 {
    let hull = convex_hull(points);
    let mut best: f64 = 0.0;
    for (i, a) in hull.iter().enumerate() {
        for b in &hull[i + 1..] {
            best = best.max((a - b).norm());
        }
    }
    best
}

/// Andrew's monotone chain; collinear points are dropped.
pub fn convex_hull(points: &[Complex64]) -> Vec<Complex64> {
    let mut pts: Vec<Complex64> = points.to_vec();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: Complex64, a: Complex64, b: Complex64| (a - o).re * (b - o).im - (a - o).im * (b - o).re;
    let mut lower: Vec<Complex64> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Complex64> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hmap::{AnalyticPart, MapFlags};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hyperbolic_distance_examples() {
        assert_eq!(hyp_dist(c(0.3, 0.2), c(0.3, 0.2)).unwrap(), 0.0);
        assert!((hyp_dist(c(0.0, 0.0), c(0.5, 0.0)).unwrap() - 0.549_306_144_334_054_8).abs() < 1e-12);
        assert!((hyp_dist(c(0.5, 0.0), c(-0.5, 0.0)).unwrap() - 1.098_612_288_668_109_6).abs() < 1e-12);
        assert!(hyp_dist(c(1.0, 0.0), c(0.0, 0.0)).is_err());
    }

    #[test]
    fn box_b_examples() {
        let s = box_b(c(0.9, 0.0), Density::new(8, 9)).unwrap();
        assert!((box_half_width(c(0.9, 0.0)) - PI * 0.1).abs() < 1e-15);
        assert!((box_half_width(c(0.5, 0.0)) - PI / 2.0).abs() < 1e-15);
        assert!(s.points.iter().all(|&p| in_box_b(c(0.9, 0.0), p)));
        // corners are included
        let corner = Complex64::from_polar(0.9, PI * 0.1);
        assert!(s.points.iter().any(|p| (p - corner).norm() < 1e-12));
        assert!(in_box_b(c(0.9, 0.0), Complex64::from_polar(0.95, 0.3)));
        assert!(!in_box_b(c(0.9, 0.0), Complex64::from_polar(0.95, 0.32)));
        assert!(!in_box_b(c(0.9, 0.0), c(0.85, 0.0)));
        let origin = box_b(c(0.0, 0.0), Density::new(4, 8)).unwrap();
        assert!(origin.note.is_some());
    }

    #[test]
    fn stolz_examples() {
        let a = stolz_angle_check(0.8, c(0.2, 0.0));
        assert!(a.in_hull && !a.in_annular_piece);
        let b = stolz_angle_check(0.8, Complex64::from_polar(0.6, 0.1));
        assert!((b.bound - 4.0 * PI * 0.2 / (0.8 * 15f64.sqrt())).abs() < 1e-15);
        assert!((b.bound - 0.8112).abs() < 1e-4);
        assert!(b.bound_satisfied);
        assert!(!in_stolz_hull(0.8, c(0.81, 0.0)));
        assert!(!in_stolz_hull(0.8, c(0.5, 0.3)));
    }

    #[test]
    fn stolz_sample_points_lie_in_annular_piece() {
        let s = stolz_sample(0.8, 500, 7).unwrap();
        assert_eq!(s.len(), 500);
        assert!(s.points.iter().all(|&z| stolz_angle_check(0.8, z).in_annular_piece));
    }

    #[test]
    fn boundary_distance_examples() {
        let id = MapDescriptor::analytic("identity", AnalyticPart::identity(), MapFlags::default()).unwrap();
        let d = boundary_distance(&id, c(0.0, 0.0), 1e-6, 256).unwrap();
        assert!((d.value - 1.0).abs() < 1e-5);
        assert!(d.converged);
        let d = boundary_distance(&id, c(0.5, 0.0), 1e-4, 4096).unwrap();
        assert!((d.value - 0.5).abs() < 1e-3);
        let twice = MapDescriptor::analytic("twice", AnalyticPart::polynomial(&[0.0, 2.0]).unwrap(), MapFlags::default()).unwrap();
        let d = boundary_distance(&twice, c(0.0, 0.0), 1e-6, 256).unwrap();
        assert!((d.value - 2.0).abs() < 1e-5);
        assert!(boundary_distance(&id, c(0.0, 0.0), 1e-3, 32).is_err());
    }

    #[test]
    fn diameter_matches_brute_force() {
        let pts: Vec<Complex64> = (0..200)
            .map(|k| Complex64::from_polar(0.3 + 0.001 * k as f64, 0.37 * k as f64))
            .collect();
        let mut brute: f64 = 0.0;
        for a in &pts {
            for b in &pts {
                brute = brute.max((a - b).norm());
            }
        }
        assert!((diameter(&pts) - brute).abs() < 1e-15);
    }

    #[test]
    fn region_csv_has_fixed_columns() {
        let csv = circle(0.5, 3).to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("kind,anchor_re,anchor_im,point_re,point_im"));
        assert_eq!(lines.count(), 3);
    }
}
