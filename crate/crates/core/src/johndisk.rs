//! Estimators for the radial John-disk criteria, the derivative-decay fit,
//! and the diameter-ratio and Hölder distortion checks.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::bounds::{CheckReport, Setting};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::geometry::{box_b, box_b_with_depth, diameter, disk_grid, in_box_b, one_minus_sq, BoundaryImage, Density};
use crate::hmap::MapDescriptor;
use crate::quad::clustered_toward_one;

/// Parameters `x` tried for criterion (ii).
pub const CRITERION_II_XS: [f64; 4] = [0.3, 0.5, 0.7, 0.9];

/// Largest relative change between consecutive levels of a stable trace.
pub const STABLE_DRIFT: f64 = 1e-2;

/// Per-level growth factor that marks a trace as blowing up.
pub const BLOW_UP_FACTOR: f64 = 1.5;

fn unit_rays(n: usize) -> Vec<Complex64> {
    (0..n).map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriterionII {
    pub x: f64,
    pub sup: f64,
    pub witness: [f64; 2],
}

/// `sup (1 - rho^2) ||D_f(rho xi)|| / ((1 - r^2) ||D_f(r xi)||)` over unit
/// `rays` and `r_grid`, with `rho = (x + r)/(1 + x r)`.
pub fn criterion_ii(map: &MapDescriptor, x: f64, rays: &[Complex64], r_grid: &[f64]) -> Result<CriterionII> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::Parameter(format!("x must lie in (0,1), got {x}")));
    }
    let mut best = CriterionII { x, sup: f64::NEG_INFINITY, witness: [0.0, 0.0] };
    for &xi in rays {
        for &r in r_grid {
            let rho = (x + r) / (1.0 + x * r);
            let d_r = map.dnorm(xi * r)?;
            if d_r == 0.0 {
                return Err(Error::ZeroNorm(xi * r));
            }
            let v = (1.0 - rho * rho) * map.dnorm(xi * rho)? / ((1.0 - r * r) * d_r);
            if v > best.sup {
                let w = xi * r;
                best = CriterionII { x, sup: v, witness: [w.re, w.im] };
            }
        }
    }
    Ok(best)
}

/// Radii `r` in `[0, r_max]`, clustered toward the circle, where `r_max`
/// keeps `rho = (x + r)/(1 + x r)` at or below `cap`.
pub fn criterion_ii_grid(x: f64, cap: f64, n: usize) -> Vec<f64> {
    let r_max = (cap - x) / (1.0 - x * cap);
    clustered_toward_one(0.0, r_max.max(0.0), n.max(2))
}

/// `sup |f(z) - f(w)| / ((1 - |z|^2) ||D_f(z)||)` over `z` in `z_points` and
/// `w` in the sample of `B(z)` whose outer ring sits at `1 - (1 - |z|) depth`.
/// The angular count is rounded up to odd so the ray through `z` is sampled.
/// Returns `(sup, z, w)`.
pub fn criterion_iii(map: &MapDescriptor, z_points: &[Complex64], box_density: Density, depth: f64) -> Result<(f64, Complex64, Complex64)> {
    let box_density = Density::new(box_density.radial, box_density.angular | 1);
    let zero = Complex64::new(0.0, 0.0);
    let mut best = (f64::NEG_INFINITY, zero, zero);
    for &z in z_points {
        let fz = map.eval(z)?;
        let denom = one_minus_sq(z) * map.dnorm(z)?;
        if denom == 0.0 {
            return Err(Error::ZeroNorm(z));
        }
        for w in box_b_with_depth(z, box_density, depth)?.points {
            let v = (fz - map.eval(w)?).norm() / denom;
            if v > best.0 {
                best = (v, z, w);
            }
        }
    }
    Ok(best)
}

/// Criterion (iii) across boundary-approach levels.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionIII {
    pub sup: f64,
    /// Sup per level; level `L` samples `B(z)` out to relative depth `1e-3 / 4^L`.
    pub trace: Vec<f64>,
    pub stable: bool,
    pub blow_up: bool,
}

impl CriterionIII {
    pub fn from_trace(trace: Vec<f64>) -> Self {
        let steps: Vec<f64> = trace.windows(2).map(|w| w[1] / w[0]).collect();
        let stable = !steps.is_empty() && steps.iter().all(|q| (q - 1.0).abs() <= STABLE_DRIFT);
        let blow_up = trace.len() >= 3 && steps.iter().all(|&q| q >= BLOW_UP_FACTOR);
        let sup = trace.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        CriterionIII { sup, trace, stable, blow_up }
    }
}

pub fn criterion_iii_trace(map: &MapDescriptor, z_points: &[Complex64], box_density: Density, levels: usize) -> Result<CriterionIII> {
    if levels < 2 {
        return Err(Error::Parameter("need at least two refinement levels".into()));
    }
    let trace = (0..levels)
        .map(|l| criterion_iii(map, z_points, box_density, 1e-3 * 0.25f64.powi(l as i32)).map(|t| t.0))
        .collect::<Result<Vec<_>>>()?;
    Ok(CriterionIII::from_trace(trace))
}

/// Log-log fit of `||D_f(rho xi)||` against `1 - rho` along one ray.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RayFit {
    pub theta: f64,
    pub slope: f64,
    pub intercept: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayFit {
    #[serde(rename = "C")]
    pub c: f64,
    pub delta: f64,
    /// Largest RMS residual over the rays.
    pub residual: f64,
    pub slope: f64,
    #[serde(skip)]
    pub rays: Vec<RayFit>,
}

/// Residual beyond which a profile is not treated as a power law.
pub const LOG_LINEAR_RESIDUAL: f64 = 0.1;

impl DecayFit {
    /// `delta` in `(0, 1]`: the decay hypothesis holds.
    pub fn hypothesis_holds(&self) -> bool {
        self.delta > 0.0 && self.delta <= 1.0 + 1e-9
    }

    pub fn is_log_linear(&self) -> bool {
        self.residual <= LOG_LINEAR_RESIDUAL
    }
}

fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let rss: f64 = xs.iter().zip(ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    (slope, intercept, (rss / n).sqrt())
}

/// Fits `log ||D_f(rho xi)|| = b + s log(1 - rho)` on `n_rays` uniform rays
/// with radii geometric in `1 - rho` over `window`. `delta = 1 + min s`; `C`
/// is the smallest constant making the decay inequality hold for every sampled
/// pair on every ray with that `delta`.
pub fn decay_fit(map: &MapDescriptor, n_rays: usize, window: (f64, f64), n_points: usize) -> Result<DecayFit> {
    let (lo, hi) = window;
    if !(0.5 <= lo && lo < hi && hi <= 0.999) {
        return Err(Error::Parameter(format!("decay window must lie in [0.5, 0.999], got ({lo}, {hi})")));
    }
    let radii = clustered_toward_one(lo, hi, n_points.max(3));
    let xs: Vec<f64> = radii.iter().map(|r| (1.0 - r).ln()).collect();
    let mut fits = Vec::with_capacity(n_rays);
    let mut profiles = Vec::with_capacity(n_rays);
    for xi in unit_rays(n_rays.max(1)) {
        let norms = radii.iter().map(|&r| map.dnorm(xi * r)).collect::<Result<Vec<_>>>()?;
        if let Some(k) = norms.iter().position(|&d| d == 0.0) {
            return Err(Error::ZeroNorm(xi * radii[k]));
        }
        let ys: Vec<f64> = norms.iter().map(|d| d.ln()).collect();
        let (slope, intercept, residual) = least_squares(&xs, &ys);
        fits.push(RayFit { theta: xi.arg().rem_euclid(2.0 * PI), slope, intercept, residual });
        profiles.push(norms);
    }
    let slope = fits.iter().map(|f| f.slope).fold(f64::INFINITY, f64::min);
    let residual = fits.iter().map(|f| f.residual).fold(0.0, f64::max);
    let delta = 1.0 + slope;
    let mut c: f64 = 1.0;
    for norms in &profiles {
        for i in 0..radii.len() {
            for j in i + 1..radii.len() {
                let scale = ((1.0 - radii[j]) / (1.0 - radii[i])).powf(delta - 1.0);
                c = c.max(norms[j] / (norms[i] * scale));
            }
        }
    }
    Ok(DecayFit { c, delta, residual, slope, rays: fits })
}

/// Compares `diam f(B(a1)) / diam f(B(a2))` with `(l1 / l2)^alpha`, where
/// `l = 2 pi (1 - |a|)` is the boundary arc length of `B(a)`. The empirical
/// constant `C3` is recomputed at doubled density; the report passes when it
/// moves by less than 5%.
pub fn diam_ratio_check(map: &MapDescriptor, s: Setting, a1: Complex64, a2: Complex64, density: Density) -> Result<CheckReport> {
    let b1 = box_b(a1, density)?;
    if let Some(p) = b1.points.iter().find(|&&p| !in_box_b(a2, p)) {
        return Err(Error::Precondition(format!("B({a1}) is not inside B({a2}): {p} escapes")));
    }
    let arc = |a: Complex64| 2.0 * PI * (1.0 - a.norm());
    let arc_ratio = arc(a1) / arc(a2);
    let image_diam = |a: Complex64, d: Density| -> Result<f64> {
        let pts = box_b(a, d)?.points.iter().map(|&z| map.eval(z)).collect::<Result<Vec<_>>>()?;
        Ok(diameter(&pts))
    };
    let c3_at = |d: Density| -> Result<(f64, f64, f64)> {
        let (d1, d2) = (image_diam(a1, d)?, image_diam(a2, d)?);
        Ok((d1, d2, d1 / d2 / arc_ratio.powf(s.alpha)))
    };
    let (d1, d2, c3) = c3_at(density)?;
    let (_, _, c3_fine) = c3_at(density.refined())?;
    let drift = (c3_fine - c3).abs() / c3;
    let mut rep = CheckReport::single("diam-ratio", map, s, b1.len(), 0.05 - drift, a1);
    rep.estimates = BTreeMap::from([
        ("diam1".to_string(), d1),
        ("diam2".to_string(), d2),
        ("arc_ratio".to_string(), arc_ratio),
        ("C3".to_string(), c3),
        ("C3_refined".to_string(), c3_fine),
    ]);
    Ok(rep)
}

/// Hölder envelope `|f(z1) - f(z2)| <= C4 d_Omega(f(z)) (|z1 - z2| / (1 - |z|))^delta1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HolderFit {
    pub delta1: f64,
    #[serde(rename = "C4")]
    pub c4: f64,
    pub d_omega: f64,
    pub pairs: usize,
    /// Largest `y / (C4 x^delta1)` over the refined pair set.
    pub worst_excess: f64,
    pub envelope_holds: bool,
}

/// Fits `(delta1, C4)` on pairs from a `B(z)` sample by log-log regression,
/// `C4` being the tightest constant for the fitted exponent, then checks the
/// envelope (within 5%) on pairs from the doubled-density sample.
pub fn holder_check(map: &MapDescriptor, z: Complex64, density: Density, eps: f64, n: usize) -> Result<HolderFit> {
    let r = z.norm();
    if !(r >= 0.5 && r < 1.0) {
        return Err(Error::Parameter(format!("need 1/2 <= |z| < 1, got {z}")));
    }
    let d_omega = BoundaryImage::new(map, eps, n)?.distance(map.eval(z)?);
    if !(d_omega > 0.0) {
        return Err(Error::Precondition(format!("boundary distance at f({z}) is zero")));
    }
    let pairs_of = |d: Density| -> Result<Vec<(f64, f64)>> {
        let pts = box_b(z, d)?.points;
        let vals = pts.iter().map(|&p| map.eval(p)).collect::<Result<Vec<_>>>()?;
        let mut out = Vec::new();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let x = (pts[i] - pts[j]).norm() / (1.0 - r);
                if x > 0.0 {
                    out.push((x, (vals[i] - vals[j]).norm() / d_omega));
                }
            }
        }
        Ok(out)
    };
    let coarse = pairs_of(density)?;
    let lx: Vec<f64> = coarse.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = coarse.iter().map(|p| p.1.ln()).collect();
    let (delta1, _, _) = least_squares(&lx, &ly);
    let c4 = coarse.iter().map(|&(x, y)| y / x.powf(delta1)).fold(0.0, f64::max);
    let fine = pairs_of(density.refined())?;
    let worst_excess = fine.iter().map(|&(x, y)| y / (c4 * x.powf(delta1))).fold(0.0, f64::max);
    Ok(HolderFit {
        delta1,
        c4,
        d_omega,
        pairs: fine.len(),
        worst_excess,
        envelope_holds: worst_excess <= 1.05,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    JohnPositive,
    JohnNegative,
    Inconclusive,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::JohnPositive => "john-positive",
            Verdict::JohnNegative => "john-negative",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Sampling plan for [`john_estimate`].
#[derive(Debug, Clone, PartialEq)]
pub struct JohnOptions {
    pub cap: f64,
    pub rays: usize,
    pub r_count: usize,
    pub z_density: Density,
    pub box_density: Density,
    pub levels: usize,
    pub decay_window: (f64, f64),
    pub decay_points: usize,
}

impl Default for JohnOptions {
    fn default() -> Self {
        JohnOptions {
            cap: 0.999,
            rays: 64,
            r_count: 48,
            z_density: Density::new(12, 24),
            box_density: Density::new(16, 16),
            levels: 4,
            decay_window: (0.6, 0.99),
            decay_points: 40,
        }
    }
}

impl From<&Config> for JohnOptions {
    fn from(c: &Config) -> Self {
        JohnOptions {
            cap: c.boundary_cap,
            rays: c.angular_count,
            r_count: c.radial_count,
            ..JohnOptions::default()
        }
    }
}

/// Verdicts of the three criteria taken separately.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CriterionVerdicts {
    /// Some tested `x` has criterion (ii) sup below 1.
    pub ii: bool,
    /// Criterion (iii) trace stable under refinement.
    pub iii: bool,
    /// Decay exponent in `(0, 1]`.
    pub decay: bool,
}

impl CriterionVerdicts {
    pub fn agree(&self) -> bool {
        self.ii == self.iii && self.iii == self.decay
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JohnEstimate {
    pub map: String,
    pub criterion_ii: Vec<CriterionII>,
    pub criterion_iii: CriterionIII,
    pub decay: DecayFit,
    pub criteria: CriterionVerdicts,
    pub verdict: Verdict,
}

impl JohnEstimate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("estimate serializes")
    }
}

pub fn john_estimate(map: &MapDescriptor, opts: &JohnOptions) -> Result<JohnEstimate> {
    let rays = unit_rays(opts.rays);
    let criterion_ii = CRITERION_II_XS
        .iter()
        .map(|&x| criterion_ii(map, x, &rays, &criterion_ii_grid(x, opts.cap, opts.r_count)))
        .collect::<Result<Vec<_>>>()?;
    let z_points = disk_grid(opts.cap, opts.z_density).points;
    let iii = criterion_iii_trace(map, &z_points, opts.box_density, opts.levels)?;
    let decay = decay_fit(map, opts.rays, opts.decay_window, opts.decay_points)?;
    let criteria = CriterionVerdicts {
        ii: criterion_ii.iter().any(|c| c.sup < 1.0),
        iii: iii.stable,
        decay: decay.hypothesis_holds(),
    };
    let verdict = if criteria.ii && iii.stable {
        Verdict::JohnPositive
    } else if iii.blow_up {
        Verdict::JohnNegative
    } else {
        Verdict::Inconclusive
    };
    Ok(JohnEstimate {
        map: map.label.clone(),
        criterion_ii,
        criterion_iii: iii,
        decay,
        criteria,
        verdict,
    })
}
