//! Radial length `l_f(theta, r)`, the growth gauge `psi`, the running
//! maximum `m_f`, and the growth-ratio harness.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hmap::MapDescriptor;
use crate::quad::{golden_max, integrate, QuadResult};

const MAX_SEGMENTS: usize = 4000;
const REL_FLOOR: f64 = 1e-13;

fn check_radius(r: f64) -> Result<()> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Parameter(format!("radius must lie in (0,1), got {r}")));
    }
    Ok(())
}

/// Breakpoints `1 - (1 - r) 2^k` inside `(0, r)`, used when the integrand's
/// blow-up at `rho = 1` is close to the endpoint.
fn clustered_breakpoints(r: f64) -> Vec<f64> {
    let mut out = Vec::new();
    if r <= 0.9 {
        return out;
    }
    let mut gap = 2.0 * (1.0 - r);
    while 1.0 - gap > 0.0 {
        out.push(1.0 - gap);
        gap *= 2.0;
    }
    out
}

/// `l_f(theta, r) = int_0^r |f_z(rho e^{i theta}) + e^{-2 i theta} f_zbar(rho e^{i theta})| d rho`.
///
/// The error target is `max(tol, 1e-13 * l)`; `converged` is false when the
/// subdivision budget ran out first.
pub fn radial_length(map: &MapDescriptor, theta: f64, r: f64, tol: f64) -> Result<QuadResult> {
    check_radius(r)?;
    if !(tol > 0.0) {
        return Err(Error::Parameter(format!("tolerance must be positive, got {tol}")));
    }
    let dir = Complex64::from_polar(1.0, theta);
    let rot = Complex64::from_polar(1.0, -2.0 * theta);
    let integrand = |rho: f64| {
        let p = map
            .wirtinger(dir * rho)
            .expect("radial samples stay inside the disk");
        (p.fz + rot * p.fzb).norm()
    };
    Ok(integrate(integrand, 0.0, r, &clustered_breakpoints(r), tol, REL_FLOOR, MAX_SEGMENTS))
}

/// `psi(r) = sqrt(log(1 / (1 - r)))`.
pub fn psi(r: f64) -> Result<f64> {
    if !(r >= 0.0 && r < 1.0) {
        return Err(Error::Parameter(format!("psi needs r in [0,1), got {r}")));
    }
    Ok((-(-r).ln_1p()).sqrt())
}

/// `max_{rho in [0, r]} |f(rho e^{i theta})|` from `n` grid points, refined by
/// golden-section search around the best grid cell.
pub fn m_f(map: &MapDescriptor, r: f64, theta: f64, n: usize) -> Result<f64> {
    check_radius(r)?;
    let n = n.max(4);
    let dir = Complex64::from_polar(1.0, theta);
    let abs_f = |rho: f64| map.eval(dir * rho).map(|w| w.norm());
    let mut best = (0usize, f64::NEG_INFINITY);
    for k in 0..=n {
        let v = abs_f(r * k as f64 / n as f64)?;
        if v > best.1 {
            best = (k, v);
        }
    }
    let lo = r * best.0.saturating_sub(1) as f64 / n as f64;
    let hi = r * (best.0 + 1).min(n) as f64 / n as f64;
    let (_, refined) = golden_max(|rho| abs_f(rho).unwrap_or(f64::NEG_INFINITY), lo, hi, 1e-12 * r);
    Ok(best.1.max(refined))
}

/// One row of a [`RadialProfile`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialRow {
    pub r: f64,
    pub ell: f64,
    pub abs_f: f64,
    pub m_f: f64,
    pub psi: f64,
    /// `ell / (m_f psi)`.
    pub ratio: f64,
    pub quad_err: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    pub theta: f64,
    pub rows: Vec<RadialRow>,
}

impl RadialProfile {
    /// Evaluates every functional along the ray at the increasing radii `r_grid`.
    pub fn build(map: &MapDescriptor, theta: f64, r_grid: &[f64], tol: f64) -> Result<Self> {
        if r_grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Parameter("radial grid must be strictly increasing".into()));
        }
        let mut rows = Vec::with_capacity(r_grid.len());
        let dir = Complex64::from_polar(1.0, theta);
        let mut running_max: f64 = 0.0;
        for &r in r_grid {
            let q = radial_length(map, theta, r, tol)?;
            let abs_f = map.eval(dir * r)?.norm();
            running_max = running_max.max(m_f(map, r, theta, 256)?);
            let p = psi(r)?;
            rows.push(RadialRow {
                r,
                ell: q.value,
                abs_f,
                m_f: running_max,
                psi: p,
                ratio: q.value / (running_max * p),
                quad_err: q.error,
                converged: q.converged,
            });
        }
        Ok(RadialProfile { theta, rows })
    }

    /// CSV with columns `theta,r,ell,abs_f,m_f,psi,ratio,quad_err`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("theta,r,ell,abs_f,m_f,psi,ratio,quad_err\n");
        for row in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                self.theta, row.r, row.ell, row.abs_f, row.m_f, row.psi, row.ratio, row.quad_err
            );
        }
        out
    }
}

/// Ratio series `l_f / (m_f psi)` with its boundedness verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthRatio {
    pub ratios: Vec<(f64, f64)>,
    pub max: f64,
    pub median: f64,
    /// `max <= 10 * median`: no blow-up across the grid.
    pub bounded: bool,
}

impl GrowthRatio {
    fn from_ratios(ratios: Vec<(f64, f64)>) -> Self {
        let mut values: Vec<f64> = ratios.iter().map(|&(_, v)| v).collect();
        values.sort_by(f64::total_cmp);
        let n = values.len();
        let median = if n % 2 == 1 {
            values[n / 2]
        } else {
            0.5 * (values[n / 2 - 1] + values[n / 2])
        };
        let max = *values.last().expect("nonempty grid");
        GrowthRatio {
            ratios,
            max,
            median,
            bounded: max.is_finite() && max <= 10.0 * median,
        }
    }
}

/// Growth ratio over an r-grid inside `(0.5, 1)`.
pub fn growth_ratio(map: &MapDescriptor, theta: f64, r_grid: &[f64], tol: f64) -> Result<GrowthRatio> {
    if r_grid.is_empty() || r_grid.iter().any(|&r| !(r > 0.5 && r < 1.0)) {
        return Err(Error::Parameter("growth grid must be nonempty and inside (0.5, 1)".into()));
    }
    let profile = RadialProfile::build(map, theta, r_grid, tol)?;
    Ok(GrowthRatio::from_ratios(
        profile.rows.iter().map(|row| (row.r, row.ratio)).collect(),
    ))
}

/// Keogh form for bounded maps: `l_f / (M psi)` with a fixed bound `M` on `|f|`.
pub fn bounded_growth_ratio(
    map: &MapDescriptor,
    theta: f64,
    r_grid: &[f64],
    sup_abs: f64,
    tol: f64,
) -> Result<GrowthRatio> {
    if !(sup_abs > 0.0) {
        return Err(Error::Parameter("image bound must be positive".into()));
    }
    if r_grid.is_empty() || r_grid.iter().any(|&r| !(r > 0.5 && r < 1.0)) {
        return Err(Error::Parameter("growth grid must be nonempty and inside (0.5, 1)".into()));
    }
    let ratios = r_grid
        .iter()
        .map(|&r| Ok((r, radial_length(map, theta, r, tol)?.value / (sup_abs * psi(r)?))))
        .collect::<Result<Vec<_>>>()?;
    Ok(GrowthRatio::from_ratios(ratios))
}

/// Starlike / convex radial-length bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalBounds {
    /// `l_f(theta, r) / |f(r e^{i theta})|`.
    pub ratio: f64,
    /// `1 + r`, present for maps flagged starlike.
    pub starlike_bound: Option<f64>,
    /// `arcsin(r) / r`, present for maps flagged convex.
    pub convex_bound: Option<f64>,
    /// `None` when the map carries neither flag.
    pub pass: Option<bool>,
}

pub fn classical_bounds(map: &MapDescriptor, theta: f64, r: f64, tol: f64) -> Result<ClassicalBounds> {
    let ell = radial_length(map, theta, r, tol)?.value;
    let abs_f = map.eval(Complex64::from_polar(r, theta))?.norm();
    let ratio = ell / abs_f;
    let starlike_bound = map.flags.starlike.then_some(1.0 + r);
    let convex_bound = map.flags.convex.then(|| r.asin() / r);
    // Relative round-off allowance on a ratio that is exactly 1 for the extremal maps.
    let fits = |b: f64| ratio <= b * (1.0 + 1e-12);
    let pass = match (starlike_bound, convex_bound) {
        (None, None) => None,
        (s, c) => Some(s.map_or(true, fits) && c.map_or(true, fits)),
    };
    Ok(ClassicalBounds {
        ratio,
        starlike_bound,
        convex_bound,
        pass,
    })
}
