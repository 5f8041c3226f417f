//! Named check suites, the run manifest, and the deterministic report writer
//! behind the `hqc` command line.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, CheckReport, HarnackBox, Setting};
use crate::config::Config;
use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::geometry::{disk_grid, stolz_angle_check, stolz_sample, Density};
use crate::hmap::{qc_constant, MapDescriptor};
use crate::johndisk::{self, JohnOptions};
use crate::poisson::{self, PoissonSup};
use crate::quad::clustered_toward_one;
use crate::radial::RadialProfile;

pub const SUITES: [&str; 5] = ["analytic-classical", "harmonic", "geometry", "full", "empty"];

/// Everything that determines the outputs of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    /// Corpus file, or `None` for the built-in corpus.
    pub corpus: Option<PathBuf>,
    pub config: Config,
    pub suites: Vec<String>,
    /// Not written into `manifest.json`, so a run can be replayed elsewhere.
    #[serde(skip)]
    pub out: PathBuf,
    pub seed: u64,
}

impl RunManifest {
    pub fn load_corpus(&self) -> Result<Corpus> {
        match &self.corpus {
            Some(p) => Corpus::load(p),
            None => Ok(crate::corpus::builtin()),
        }
    }
}

fn grid(cfg: &Config) -> Vec<Complex64> {
    disk_grid(cfg.boundary_cap, Density::new(cfg.radial_count, cfg.angular_count)).points
}

/// Offset of the ring used for boundary distances: well outside every grid point.
fn distance_ring_eps(cfg: &Config) -> f64 {
    (1.0 - cfg.boundary_cap) / 100.0
}

const DISTANCE_RING_SIZE: usize = 1 << 15;

fn growth_pairs(cfg: &Config) -> Vec<(Complex64, Complex64)> {
    let anchors = [
        Complex64::new(0.0, 0.0),
        Complex64::new(0.5, 0.0),
        Complex64::from_polar(0.9, 2.0),
        Complex64::new(-0.95, 0.0),
        Complex64::new(0.0, 0.99),
    ];
    let targets = disk_grid(cfg.boundary_cap, Density::new(cfg.radial_count / 2, cfg.angular_count / 2)).points;
    anchors
        .iter()
        .flat_map(|&z0| targets.iter().map(move |&z1| (z0, z1)))
        .collect()
}

fn w2_triples(cfg: &Config) -> Vec<(Complex64, f64, f64)> {
    let radii = clustered_toward_one(0.0, cfg.boundary_cap, 24);
    let mut out = Vec::new();
    for k in 0..16 {
        let xi = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 16.0);
        for (i, &rho) in radii.iter().enumerate() {
            for &r in &radii[i..] {
                out.push((xi, rho, r));
            }
        }
    }
    out
}

const HARNACK_BOX: HarnackBox = HarnackBox { a1: 0.5, a2: 2.0, a3: 1.0 };

fn harnack_anchors() -> [Complex64; 4] {
    [
        Complex64::new(0.9, 0.0),
        Complex64::from_polar(0.99, 1.0),
        Complex64::new(-0.95, 0.0),
        Complex64::new(0.0, 0.5),
    ]
}

/// Per-map predicate battery shared by the classical and harmonic suites.
fn map_checks(map: &MapDescriptor, s: Setting, cfg: &Config) -> Result<Vec<CheckReport>> {
    let pts = grid(cfg);
    let mut out = vec![
        bounds::check_sheilsmall(map, s, &pts)?,
        bounds::check_lemma11(map, s, &growth_pairs(cfg))?,
        bounds::check_lemma_cpu1(map, s, &pts)?,
        bounds::check_dist_lower(map, s, &pts, distance_ring_eps(cfg), DISTANCE_RING_SIZE)?,
    ];
    if map.flags.sh0 {
        out.push(bounds::check_eq_w2(map, s, &w2_triples(cfg))?);
    }
    for z0 in harnack_anchors() {
        let sample = HARNACK_BOX.sample(z0, 12, 12)?;
        out.push(bounds::check_harnack(map, s, z0, HARNACK_BOX, &sample)?);
        out.push(bounds::check_lemma12(map, s, z0, HARNACK_BOX, &sample)?);
    }
    for k in 0..8 {
        let theta = 2.0 * PI * k as f64 / 8.0;
        out.push(bounds::check_lemma_cpu3(map, s, 0.25, 0.9, theta, 200)?);
    }
    if map.flags.bounded {
        let fit = johndisk::decay_fit(map, 32, (0.6, 0.99), 40)?;
        if fit.hypothesis_holds() {
            let anchors = disk_grid(0.99, Density::new(6, 12)).points;
            out.push(bounds::check_diam_i(map, s, &anchors, fit.c, fit.delta.min(0.99), 1e-6, 2048)?);
        }
    }
    Ok(out)
}

/// Rejects maps that are not sense-preserving on the run grid.
pub fn validate_corpus(corpus: &Corpus, cfg: &Config) -> Result<()> {
    let pts = grid(cfg);
    for map in corpus.maps() {
        map.check_sense_preserving(&pts)?;
    }
    Ok(())
}

fn geometry_reports(seed: u64) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for (i, r) in [0.5, 0.8, 0.95].into_iter().enumerate() {
        let sample = stolz_sample(r, 10_000, seed.wrapping_add(i as u64))?;
        let mut worst = f64::INFINITY;
        let mut witness = Complex64::new(0.0, 0.0);
        for &z in &sample.points {
            let chk = stolz_angle_check(r, z);
            let coarse = 3.0 * PI / 15f64.sqrt() - z.arg().abs();
            let m = (chk.bound - z.arg().abs()).min(coarse);
            if m < worst {
                worst = m;
                witness = z;
            }
        }
        out.push(CheckReport {
            predicate: "stolz-angle".into(),
            map: format!("stolz(r={r})"),
            alpha: 2.0,
            big_k: 1.0,
            samples: sample.len(),
            worst_margin: worst,
            witness: [witness.re, witness.im],
            pass: worst >= 0.0,
            slack: 0.0,
            advisory: false,
            notes: Vec::new(),
            estimates: BTreeMap::new(),
        });
    }
    Ok(out)
}

/// Runs a named suite. Reports come back in canonical order: predicate, map,
/// then witness.
pub fn run_suite(name: &str, corpus: &Corpus, cfg: &Config, seed: u64) -> Result<Vec<CheckReport>> {
    cfg.validate()?;
    let mut out = Vec::new();
    match name {
        "empty" => {}
        "analytic-classical" => {
            validate_corpus(corpus, cfg)?;
            for map in corpus.maps().iter().filter(|m| m.is_analytic() && m.flags.sh) {
                out.extend(map_checks(map, Setting::classical(), cfg)?);
            }
        }
        "harmonic" => {
            validate_corpus(corpus, cfg)?;
            let pts = grid(cfg);
            for map in corpus.maps().iter().filter(|m| m.flags.sh) {
                let k = cfg.big_k.max(qc_constant(map, &pts)?);
                let s = Setting::new(cfg.alpha, k, cfg.slack)?;
                out.extend(map_checks(map, s, cfg)?);
            }
        }
        "geometry" => out.extend(geometry_reports(seed)?),
        "full" => {
            for part in ["analytic-classical", "harmonic", "geometry"] {
                out.extend(run_suite(part, corpus, cfg, seed)?);
            }
        }
        other => return Err(Error::Parameter(format!("unknown suite `{other}`; known: {}", SUITES.join(", ")))),
    }
    out.sort_by(|a, b| {
        a.predicate
            .cmp(&b.predicate)
            .then_with(|| a.map.cmp(&b.map))
            .then_with(|| a.witness[0].total_cmp(&b.witness[0]))
            .then_with(|| a.witness[1].total_cmp(&b.witness[1]))
    });
    Ok(out)
}

/// JSON lines, one report per line.
pub fn reports_to_jsonl(reports: &[CheckReport]) -> String {
    reports.iter().map(|r| r.to_json_line() + "\n").collect()
}

/// `eps` levels `10 eps, eps, eps/10` used for Poisson supremum traces.
pub fn poisson_levels(eps: f64) -> [f64; 3] {
    [10.0 * eps, eps, eps / 10.0]
}

pub fn poisson_summary(map: &MapDescriptor, cfg: &Config) -> Result<PoissonSup> {
    let levels = poisson_levels(cfg.eps);
    let cap = (1.0 - 2.0 * levels[0]).min(0.9);
    poisson::poisson_sup(map, &poisson::zeta_grid(cap, 4, 6), &levels, 2048)
}

/// Radii used for exported radial profiles.
pub fn radial_grid(cfg: &Config) -> Vec<f64> {
    clustered_toward_one(0.55, cfg.boundary_cap, cfg.radial_count.max(2))
}

/// What [`write_report`] produced.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportSummary {
    /// File names inside the output directory, sorted.
    pub files: Vec<String>,
    pub checks: usize,
    pub failures: usize,
}

/// Writes every report of a run into `manifest.out`. Content depends only on
/// the manifest.
pub fn write_report(manifest: &RunManifest) -> Result<ReportSummary> {
    let corpus = manifest.load_corpus()?;
    let cfg = &manifest.config;
    let dir = &manifest.out;
    let io = |e: std::io::Error| Error::Precondition(format!("cannot write report: {e}"));
    fs::create_dir_all(dir).map_err(io)?;
    let mut files = BTreeMap::new();

    let mut reports = Vec::new();
    for suite in &manifest.suites {
        reports.extend(run_suite(suite, &corpus, cfg, manifest.seed)?);
    }
    files.insert("checks.jsonl".to_string(), reports_to_jsonl(&reports));

    let opts = JohnOptions::from(cfg);
    for map in corpus.maps() {
        let est = johndisk::john_estimate(map, &opts)?;
        files.insert(format!("john-{}.json", map.label), est.to_json() + "\n");
        let sup = poisson_summary(map, cfg)?;
        files.insert(format!("poisson-{}.json", map.label), sup.to_json() + "\n");
        files.insert(format!("poisson-{}.csv", map.label), sup.to_csv());
        let profile = RadialProfile::build(map, 0.0, &radial_grid(cfg), cfg.abs_tol.max(1e-10))?;
        files.insert(format!("radial-{}.csv", map.label), profile.to_csv());
    }
    files.insert(
        "manifest.json".to_string(),
        serde_json::to_string_pretty(manifest).expect("manifest serializes") + "\n",
    );
    for (name, body) in &files {
        fs::write(dir.join(name), body).map_err(io)?;
    }
    Ok(ReportSummary {
        files: files.into_keys().collect(),
        checks: reports.len(),
        failures: reports.iter().filter(|r| r.is_failure()).count(),
    })
}

/// Reads back every file [`write_report`] produced, for comparisons.
pub fn read_report(dir: &Path, names: &[String]) -> Result<Vec<(String, Vec<u8>)>> {
    names
        .iter()
        .map(|n| {
            fs::read(dir.join(n))
                .map(|b| (n.clone(), b))
                .map_err(|e| Error::Precondition(format!("cannot read {n}: {e}")))
        })
        .collect()
}

/// Parses `a+bi`, `a-bi`, `bi`, `a` or `a,b`.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let bad = || Error::Parameter(format!("cannot parse complex number `{text}`"));
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((a, b)) = t.split_once(',') {
        let re = a.parse::<f64>().map_err(|_| bad())?;
        let im = b.parse::<f64>().map_err(|_| bad())?;
        return Ok(Complex64::new(re, im));
    }
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // Split at the last sign that is not the leading one or part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let coef = |s: &str| match s {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        s => s.parse::<f64>().map_err(|_| bad()),
    };
    match split {
        Some(k) => Ok(Complex64::new(body[..k].parse::<f64>().map_err(|_| bad())?, coef(&body[k..])?)),
        None => Ok(Complex64::new(0.0, coef(body)?)),
    }
}

/// Command-line overrides applied on top of a configuration file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub alpha: Option<f64>,
    pub big_k: Option<f64>,
    pub eps: Option<f64>,
    pub tol: Option<f64>,
    /// Each level doubles both grid densities.
    pub grid_level: Option<u32>,
}

impl Overrides {
    pub fn apply(&self, mut cfg: Config) -> Result<Config> {
        if let Some(a) = self.alpha {
            cfg.alpha = a;
        }
        if let Some(k) = self.big_k {
            cfg.big_k = k;
        }
        if let Some(e) = self.eps {
            cfg.eps = e;
        }
        if let Some(t) = self.tol {
            cfg.abs_tol = t;
            cfg.rel_tol = t;
        }
        if let Some(n) = self.grid_level {
            let scale = 1usize
                .checked_shl(n)
                .filter(|_| n <= 8)
                .ok_or_else(|| Error::Parameter(format!("grid level {n} exceeds 8")))?;
            cfg.radial_count *= scale;
            cfg.angular_count *= scale;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Loads a JSON configuration document, or the defaults when `path` is `None`.
pub fn load_config(path: Option<&Path>) -> Result<Config> {
    let Some(p) = path else {
        return Ok(Config::default());
    };
    let text = fs::read_to_string(p).map_err(|e| Error::Parameter(format!("cannot read {}: {e}", p.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parameter(format!("bad config {}: {e}", p.display())))
}
