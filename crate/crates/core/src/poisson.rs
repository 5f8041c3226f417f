//! Boundary samples of `||D_f||`, the Poisson-kernel functional and its
//! supremum trace, Hardy means, and the ratio bracket for Pommerenke interior
//! domains.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::diameter;
use crate::hmap::MapDescriptor;
use crate::quad::integrate;

/// `||D_f((1 - eps) e^{i t_k})||` at `n` uniform angles `t_k = 2 pi k / n`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryProfile {
    pub eps: f64,
    pub n: usize,
    pub values: Vec<f64>,
    /// Largest relative change of the values when `eps` is halved is below 1e-2.
    pub converged: bool,
}

fn ring_norms(map: &MapDescriptor, eps: f64, n: usize) -> Result<Vec<f64>> {
    (0..n)
        .map(|k| map.dnorm(Complex64::from_polar(1.0 - eps, 2.0 * PI * k as f64 / n as f64)))
        .collect()
}

impl BoundaryProfile {
    pub fn new(map: &MapDescriptor, eps: f64, n: usize) -> Result<Self> {
        if !(eps > 0.0 && eps <= 0.5) {
            return Err(Error::Parameter(format!("eps must lie in (0, 0.5], got {eps}")));
        }
        if n < 256 || !n.is_power_of_two() {
            return Err(Error::Parameter(format!("profile size must be a power of two >= 256, got {n}")));
        }
        let values = ring_norms(map, eps, n)?;
        if let Some(k) = values.iter().position(|&v| !(v > 0.0)) {
            return Err(Error::ZeroNorm(Complex64::from_polar(1.0 - eps, 2.0 * PI * k as f64 / n as f64)));
        }
        let half = ring_norms(map, eps / 2.0, n)?;
        let drift = values
            .iter()
            .zip(&half)
            .map(|(a, b)| (a - b).abs() / a)
            .fold(0.0, f64::max);
        Ok(BoundaryProfile { eps, n, values, converged: drift < 1e-2 })
    }

    /// Size used for a given `eps`: at least `base` and at least `16 / eps`,
    /// rounded up to a power of two, so the kernel peak is resolved.
    pub fn size_for(eps: f64, base: usize) -> usize {
        base.max((16.0 / eps).ceil() as usize).max(256).next_power_of_two()
    }
}

/// `(1/2 pi) sum_k ||D_f(xi_k)|| / ||D_f(zeta)|| P(zeta, e^{i t_k}) dt`, with
/// the norms taken on the ring `1 - eps` and the Poisson kernel
/// `P = (1 - |zeta|^2)/|e^{it} - zeta|^2` on the unit circle.
pub fn poisson_functional(map: &MapDescriptor, zeta: Complex64, profile: &BoundaryProfile) -> Result<f64> {
    if !(zeta.norm() <= 1.0 - 2.0 * profile.eps) {
        return Err(Error::Precondition(format!(
            "|zeta| = {} is within 2 eps of the sampling ring",
            zeta.norm()
        )));
    }
    let d0 = map.dnorm(zeta)?;
    if d0 == 0.0 {
        return Err(Error::ZeroNorm(zeta));
    }
    let p = 1.0 - zeta.norm_sqr();
    let n = profile.n as f64;
    let sum: f64 = profile
        .values
        .iter()
        .enumerate()
        .map(|(k, v)| v * p / (Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n) - zeta).norm_sqr())
        .sum();
    Ok(sum / (n * d0))
}

/// Supremum of [`poisson_functional`] over a `zeta` grid at several `eps`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoissonSup {
    pub map: String,
    pub sup: f64,
    pub witness: [f64; 2],
    /// `(eps, n, sup)` per level.
    pub trace: Vec<(f64, usize, f64)>,
    /// Relative change between consecutive levels stays below 1e-2.
    pub stable: bool,
    /// Each level at least 1.5 times the previous.
    pub increasing: bool,
    #[serde(skip)]
    pub rows: Vec<PoissonRow>,
}

/// One CSV row: `zeta_re,zeta_im,functional,eps,n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonRow {
    pub zeta: Complex64,
    pub functional: f64,
    pub eps: f64,
    pub n: usize,
}

impl PoissonSup {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("zeta_re,zeta_im,functional,eps,n\n");
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{},{},{}", r.zeta.re, r.zeta.im, r.functional, r.eps, r.n);
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }
}

/// `zeta` grid for the supremum: the origin plus `radial` circles up to `cap`
/// with `angular` points each.
pub fn zeta_grid(cap: f64, radial: usize, angular: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0)];
    for i in 1..=radial {
        let r = cap * i as f64 / radial as f64;
        for j in 0..angular {
            out.push(Complex64::from_polar(r, 2.0 * PI * j as f64 / angular as f64));
        }
    }
    out
}

pub fn poisson_sup(map: &MapDescriptor, zetas: &[Complex64], eps_levels: &[f64], base_n: usize) -> Result<PoissonSup> {
    if eps_levels.is_empty() {
        return Err(Error::Parameter("need at least one eps level".into()));
    }
    let mut trace = Vec::new();
    let mut rows = Vec::new();
    let mut best = (f64::NEG_INFINITY, Complex64::new(0.0, 0.0));
    for &eps in eps_levels {
        let n = BoundaryProfile::size_for(eps, base_n);
        let profile = BoundaryProfile::new(map, eps, n)?;
        let mut level = f64::NEG_INFINITY;
        for &zeta in zetas {
            let v = poisson_functional(map, zeta, &profile)?;
            rows.push(PoissonRow { zeta, functional: v, eps, n });
            level = level.max(v);
            if v > best.0 {
                best = (v, zeta);
            }
        }
        trace.push((eps, n, level));
    }
    let steps: Vec<f64> = trace.windows(2).map(|w| w[1].2 / w[0].2).collect();
    Ok(PoissonSup {
        map: map.label.clone(),
        sup: best.0,
        witness: [best.1.re, best.1.im],
        stable: steps.iter().all(|q| (q - 1.0).abs() < 1e-2),
        increasing: !steps.is_empty() && steps.iter().all(|&q| q >= 1.5),
        trace,
        rows,
    })
}

/// `M_p(r, F) = ((1/2 pi) int |F(r e^{it})|^p dt)^(1/p)` by the `n`-point
/// trapezoidal rule, for any nonnegative functional `F`.
pub fn hardy_mean<F: Fn(Complex64) -> Result<f64>>(f: F, p: f64, r: f64, n: usize) -> Result<f64> {
    if !(p > 0.0) {
        return Err(Error::Parameter(format!("p must be positive, got {p}")));
    }
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Parameter(format!("r must lie in (0,1), got {r}")));
    }
    let n = n.max(1);
    let mut sum = 0.0;
    for k in 0..n {
        sum += f(Complex64::from_polar(r, 2.0 * PI * k as f64 / n as f64))?.powf(p);
    }
    Ok((sum / n as f64).powf(1.0 / p))
}

/// Bracket `[lower, upper]` on `l(gamma_r[w1, w2]) / d_{G_r}(w1, w2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PommerenkeBracket {
    pub arc_length: f64,
    /// `|w1 - w2|`, a lower bound for `d_{G_r}`.
    pub d_lower: f64,
    /// Diameter of the image of the chord, an upper bound for `d_{G_r}`.
    pub d_upper: f64,
    pub lower: f64,
    pub upper: f64,
}

/// `w_j = f(r e^{i theta_j})`; the arc runs along the smaller of the two arcs
/// of the circle `|z| = r` between the preimages.
pub fn pommerenke_bracket(map: &MapDescriptor, r: f64, theta1: f64, theta2: f64, n: usize) -> Result<PommerenkeBracket> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Parameter(format!("r must lie in (0,1), got {r}")));
    }
    let z1 = Complex64::from_polar(r, theta1);
    let z2 = Complex64::from_polar(r, theta2);
    let (w1, w2) = (map.eval(z1)?, map.eval(z2)?);
    // signed smaller-arc sweep from theta1
    let mut sweep = (theta2 - theta1).rem_euclid(2.0 * PI);
    if sweep > PI {
        sweep -= 2.0 * PI;
    }
    if sweep == 0.0 {
        return Ok(PommerenkeBracket { arc_length: 0.0, d_lower: 0.0, d_upper: 0.0, lower: 0.0, upper: 0.0 });
    }
    let speed = |t: f64| {
        let e = Complex64::from_polar(1.0, theta1 + t);
        let p = map.wirtinger(e * r).expect("circle lies inside the disk");
        // d/dt f(r e^{it}) = i r (e^{it} f_z - e^{-it} f_zbar)
        r * (e * p.fz - e.conj() * p.fzb).norm()
    };
    let (a, b) = if sweep > 0.0 { (0.0, sweep) } else { (sweep, 0.0) };
    let arc_length = integrate(speed, a, b, &[], 1e-12, 1e-12, 2000).value;
    let n = n.max(2);
    let chord = (0..=n)
        .map(|k| map.eval(z1 + (z2 - z1) * (k as f64 / n as f64)))
        .collect::<Result<Vec<_>>>()?;
    let d_lower = (w1 - w2).norm();
    let d_upper = diameter(&chord).max(d_lower);
    Ok(PommerenkeBracket {
        arc_length,
        d_lower,
        d_upper,
        lower: arc_length / d_upper,
        upper: arc_length / d_lower,
    })
}
