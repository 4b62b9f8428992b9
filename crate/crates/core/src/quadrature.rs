//! Deterministic product quadrature on the disc, the 4-ball and circles.
//!
//! Every rule evaluates a fixed set of nodes, collects panel sums in order and
//! reduces them pairwise, so results do not depend on the number of workers.

use crate::error::{CoreError, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
                p1 = z;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

fn gl16() -> &'static (Vec<f64>, Vec<f64>) {
    static R: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    R.get_or_init(|| gauss_legendre(16))
}

fn gl8() -> &'static (Vec<f64>, Vec<f64>) {
    static R: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    R.get_or_init(|| gauss_legendre(8))
}

/// Nodes and weights of a rule mapped onto `[a, b]`.
fn mapped(rule: &(Vec<f64>, Vec<f64>), a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
    let h = 0.5 * (b - a);
    let m = 0.5 * (a + b);
    rule.0.iter().zip(&rule.1).map(move |(x, w)| (m + h * x, h * w))
}

/// Sum in a fixed binary tree.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        1 => v[0],
        n if n <= 8 => v.iter().sum(),
        n => pairwise_sum(&v[..n / 2]) + pairwise_sum(&v[n / 2..]),
    }
}

/// Resolution and extrapolation settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadConfig {
    /// Panels per unit-length stretch of the uniform radial grid.
    pub radial_panels: usize,
    /// Geometric panels toward each graded end point.
    pub graded_panels: usize,
    /// Angular Gauss panels on the circle.
    pub angular_panels: usize,
    /// Boundary cutoffs `1 − r`, strictly decreasing.
    pub deltas: Vec<f64>,
    /// Radius of the balls excluded around declared singular points.
    pub exclusion: f64,
    pub tol: f64,
    /// Outer radius of the 4-ball before tail extrapolation.
    pub ball_radius: f64,
    /// Whether to add the `a R⁻⁴` tail model.
    pub tail: bool,
    /// Gauss nodes in the polar angle ψ of the 3-sphere.
    pub psi_nodes: usize,
    /// Gauss nodes in the second angle θ.
    pub theta_nodes: usize,
    /// Trapezoid nodes in the azimuth φ.
    pub phi_nodes: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            radial_panels: 4,
            graded_panels: 24,
            angular_panels: 16,
            deltas: vec![1e-2, 1e-3, 1e-4],
            exclusion: crate::potentials::POLE_EXCLUSION,
            tol: 1e-3,
            ball_radius: 60.0,
            tail: true,
            psi_nodes: 32,
            theta_nodes: 8,
            phi_nodes: 8,
        }
    }
}

impl QuadConfig {
    pub fn validate(&self) -> Result<()> {
        if self.deltas.is_empty()
            || self.deltas.iter().any(|d| !(*d > 0.0 && *d < 1.0))
            || self.deltas.windows(2).any(|w| w[1] >= w[0])
        {
            return Err(CoreError::InvalidData(
                "deltas must be positive, below 1 and strictly decreasing".into(),
            ));
        }
        if self.radial_panels == 0
            || self.angular_panels == 0
            || self.psi_nodes == 0
            || self.theta_nodes == 0
            || self.phi_nodes == 0
        {
            return Err(CoreError::InvalidData("resolutions must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
    /// Truncated integrals, one per boundary cutoff.
    pub per_delta: Vec<f64>,
}

impl QuadResult {
    /// Converts a non-converged result into an error.
    pub fn require(self) -> Result<QuadResult> {
        if self.converged {
            Ok(self)
        } else {
            Err(CoreError::QuadratureNotConverged {
                value: self.value,
                error: self.error,
            })
        }
    }

    pub fn scale(mut self, s: f64) -> Self {
        self.value *= s;
        self.error *= s.abs();
        self.per_delta.iter_mut().for_each(|v| *v *= s);
        self
    }
}

/// Radial break points on `[0, 1 − δ_last]`, graded toward both ends.
fn radial_breaks(cfg: &QuadConfig, stop: f64) -> Vec<f64> {
    let mut b = vec![0.0];
    let g = cfg.graded_panels;
    // geometric toward 0: 0.25·2^{-k}
    for k in (0..g).rev() {
        b.push(0.25 * 0.5f64.powi(k as i32));
    }
    let n = cfg.radial_panels.max(1);
    for k in 1..n {
        b.push(0.25 + 0.5 * k as f64 / n as f64);
    }
    b.push(0.75);
    // geometric toward 1: 1 − 0.25·2^{-k}
    let mut k = 1;
    loop {
        let r = 1.0 - 0.25 * 0.5f64.powi(k);
        if r >= stop {
            break;
        }
        b.push(r);
        k += 1;
    }
    b.push(stop);
    b.dedup_by(|a, b| (*a - *b).abs() < 1e-300);
    b
}

/// Integral over the annulus `r ∈ [r0, r1]` with the area element `r dr dθ`.
fn annulus<F>(f: &F, r0: f64, r1: f64, breaks: &[f64], theta0: f64, cfg: &QuadConfig) -> f64
where
    F: Fn(Complex64) -> f64 + Sync,
{
    let panels: Vec<(f64, f64)> = breaks
        .windows(2)
        .map(|w| (w[0].max(r0), w[1].min(r1)))
        .filter(|(a, b)| b > a)
        .collect();
    let na = cfg.angular_panels;
    let dth = 2.0 * PI / na as f64;
    let sums: Vec<f64> = panels
        .par_iter()
        .map(|&(a, b)| {
            let mut acc = Vec::with_capacity(16 * na);
            for (r, wr) in mapped(gl16(), a, b) {
                let mut ring = Vec::with_capacity(16 * na);
                for p in 0..na {
                    let t0 = theta0 + p as f64 * dth;
                    for (t, wt) in mapped(gl16(), t0, t0 + dth) {
                        let w = Complex64::from_polar(r, t);
                        ring.push(wt * f(w));
                    }
                }
                acc.push(wr * r * pairwise_sum(&ring));
            }
            pairwise_sum(&acc)
        })
        .collect();
    pairwise_sum(&sums)
}

/// `∫_{|w|<radius} f dA` with radial panels graded toward the origin.
pub fn integrate_polar<F>(f: &F, radius: f64, cfg: &QuadConfig, theta0: f64) -> f64
where
    F: Fn(Complex64) -> f64 + Sync,
{
    let mut breaks = vec![0.0];
    for k in (0..cfg.graded_panels.max(1)).rev() {
        breaks.push(radius * 0.5f64.powi(k as i32));
    }
    annulus(f, 0.0, radius, &breaks, theta0, cfg)
}

/// Richardson extrapolation in `h` with error terms `h, h², …`; returns the
/// final estimate and the difference between the last two diagonal entries.
pub fn richardson(hs: &[f64], vals: &[f64]) -> (f64, f64) {
    let n = vals.len();
    let mut t = vals.to_vec();
    let mut diag = vec![t[n - 1]];
    for k in 1..n {
        for i in (k..n).rev() {
            let r = hs[i - k] / hs[i];
            t[i] = (r * t[i] - t[i - 1]) / (r - 1.0);
        }
        diag.push(t[n - 1]);
    }
    let last = diag[diag.len() - 1];
    let err = if n >= 2 {
        (last - diag[diag.len() - 2]).abs()
    } else {
        f64::INFINITY
    };
    (last, err)
}

/// `∫_{|w|<1} f dA` (Euclidean area element) with the boundary cut off at
/// `1 − δ` for each configured δ and extrapolated to `δ → 0`.
///
/// `theta0` aligns the angular panels with a branch cut of the integrand.
pub fn integrate_disc<F>(f: &F, cfg: &QuadConfig, theta0: f64) -> Result<QuadResult>
where
    F: Fn(Complex64) -> f64 + Sync,
{
    cfg.validate()?;
    let stop = 1.0 - cfg.deltas[cfg.deltas.len() - 1];
    let breaks = radial_breaks(cfg, stop);
    let mut per_delta = Vec::with_capacity(cfg.deltas.len());
    let mut acc = annulus(f, 0.0, 1.0 - cfg.deltas[0], &breaks, theta0, cfg);
    per_delta.push(acc);
    for w in cfg.deltas.windows(2) {
        acc += annulus(f, 1.0 - w[0], 1.0 - w[1], &breaks, theta0, cfg);
        per_delta.push(acc);
    }
    let (value, mut error) = richardson(&cfg.deltas, &per_delta);
    if !value.is_finite() {
        error = f64::INFINITY;
    }
    // successive truncations must approach the limit from one side
    let diffs: Vec<f64> = per_delta.windows(2).map(|w| w[1] - w[0]).collect();
    let monotone = diffs.windows(2).all(|d| {
        d[0] * d[1] >= 0.0 || d[1].abs() <= cfg.tol * 1e-3 || d[0].abs() <= cfg.tol * 1e-3
    });
    Ok(QuadResult {
        value,
        error,
        converged: error <= cfg.tol && monotone,
        per_delta,
    })
}

/// `∫_{R⁴} f dμ` over spherical shells around the origin up to
/// `cfg.ball_radius`, plus an `a R⁻⁴` tail fitted to the last two shells.
/// Points within `cfg.exclusion` of any `singular` point contribute zero.
/// The error estimate sums the tail and the changes under halving each of the
/// φ, θ, ψ and radial resolutions.
pub fn integrate_ball4<F>(f: &F, cfg: &QuadConfig, singular: &[[f64; 4]]) -> Result<QuadResult>
where
    F: Fn([f64; 4]) -> f64 + Sync,
{
    cfg.validate()?;
    let big = singular
        .iter()
        .map(|c| c.iter().map(|v| v * v).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    let rmax = cfg.ball_radius;
    // uniform panels of width 0.5 through the singular region, then geometric
    let mut breaks = vec![0.0];
    let inner = (big + 3.0).min(rmax);
    let nu = ((inner / 0.5).ceil() as usize).max(1);
    for k in 1..=nu {
        breaks.push(inner * k as f64 / nu as f64);
    }
    while *breaks.last().unwrap() < rmax {
        let r = (breaks.last().unwrap() * 1.5).min(rmax);
        breaks.push(r);
    }
    let psi = angular_rule(cfg.psi_nodes, PI);
    let th = angular_rule(cfg.theta_nodes, PI);
    let psi_half = angular_rule(cfg.psi_nodes.div_ceil(2), PI);
    let th_half = angular_rule(cfg.theta_nodes.div_ceil(2), PI);
    let nphi = cfg.phi_nodes;
    let excl2 = cfg.exclusion * cfg.exclusion;
    type Rule = (Vec<f64>, Vec<f64>);
    let shell = |r: f64, phi_stride: usize, (psi_x, psi_w): &Rule, (th_x, th_w): &Rule| -> f64 {
        let mut sp = Vec::with_capacity(psi_x.len());
        for (ps, pw) in psi_x.iter().zip(psi_w) {
            let (sps, cps) = ps.sin_cos();
            let mut st = Vec::with_capacity(th_x.len());
            for (th, tw) in th_x.iter().zip(th_w) {
                let (sth, cth) = th.sin_cos();
                let mut sf = Vec::with_capacity(nphi);
                for k in (0..nphi).step_by(phi_stride) {
                    let ph = 2.0 * PI * (k as f64 + 0.5) / nphi as f64;
                    let (sph, cph) = ph.sin_cos();
                    let x = [r * cps, r * sps * cth, r * sps * sth * cph, r * sps * sth * sph];
                    let excluded = singular.iter().any(|c| {
                        (0..4).map(|m| (x[m] - c[m]).powi(2)).sum::<f64>() < excl2
                    });
                    sf.push(if excluded { 0.0 } else { f(x) });
                }
                let dphi = 2.0 * PI * phi_stride as f64 / nphi as f64;
                st.push(tw * sth * dphi * pairwise_sum(&sf));
            }
            sp.push(pw * sps * sps * pairwise_sum(&st));
        }
        r * r * r * pairwise_sum(&sp)
    };
    let phi_half = if nphi >= 2 { 2 } else { 1 };
    // per panel: full resolution, then one coarsening at a time in φ, θ, ψ and r
    let panels: Vec<(f64, [f64; 5])> = breaks
        .windows(2)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|w| {
            let mut acc = [const { Vec::new() }; 5];
            for (r, wr) in mapped(gl16(), w[0], w[1]) {
                acc[0].push(wr * shell(r, 1, &psi, &th));
                acc[1].push(wr * shell(r, phi_half, &psi, &th));
                acc[2].push(wr * shell(r, 1, &psi, &th_half));
                acc[3].push(wr * shell(r, 1, &psi_half, &th));
            }
            for (r, wr) in mapped(gl8(), w[0], w[1]) {
                acc[4].push(wr * shell(r, 1, &psi, &th));
            }
            (w[1], acc.map(|v| pairwise_sum(&v)))
        })
        .collect();
    let level = |i: usize| -> Vec<f64> { panels.iter().map(|p| p.1[i]).collect() };
    let full = level(0);
    let body = pairwise_sum(&full);
    let mut tail = 0.0;
    if cfg.tail && panels.len() >= 2 {
        // last panel [R1, R2] holds a(R1⁻⁴ − R2⁻⁴) under the R⁻⁸ density model
        let r2 = panels[panels.len() - 1].0;
        let r1 = panels[panels.len() - 2].0;
        let last = full[full.len() - 1];
        let a = last / (r1.powi(-4) - r2.powi(-4));
        tail = a * r2.powi(-4);
    }
    let value = body + tail;
    let error = tail.abs() + (1..5).map(|i| (body - pairwise_sum(&level(i))).abs()).sum::<f64>();
    Ok(QuadResult {
        value,
        error,
        converged: value.is_finite() && error <= cfg.tol.max(1e-12) * value.abs().max(1.0),
        per_delta: vec![body],
    })
}

/// Gauss rule on `[0, len]` split into 16-node panels.
fn angular_rule(n: usize, len: f64) -> (Vec<f64>, Vec<f64>) {
    let panels = n.div_ceil(16).max(1);
    let per = n.div_ceil(panels);
    let rule = gauss_legendre(per);
    let mut x = Vec::new();
    let mut w = Vec::new();
    for p in 0..panels {
        let a = len * p as f64 / panels as f64;
        let b = len * (p + 1) as f64 / panels as f64;
        for (xi, wi) in mapped(&rule, a, b) {
            x.push(xi);
            w.push(wi);
        }
    }
    (x, w)
}

/// `∫_{θ0}^{θ0+2π} g(θ) dθ` by midpoint rules with `n`, `2n`, `4n` nodes and
/// Richardson in `h²`. Midpoints keep samples off a cut at `θ0`.
pub fn loop_integral<G>(g: &G, theta0: f64, n: usize) -> QuadResult
where
    G: Fn(f64) -> f64 + Sync,
{
    let mid = |m: usize| -> f64 {
        let h = 2.0 * PI / m as f64;
        let vals: Vec<f64> = (0..m)
            .into_par_iter()
            .map(|k| g(theta0 + (k as f64 + 0.5) * h))
            .collect();
        h * pairwise_sum(&vals)
    };
    let n = n.max(2);
    let m = [mid(n), mid(2 * n), mid(4 * n)];
    let hs2: Vec<f64> = [1.0, 0.25, 0.0625].to_vec();
    let (value, error) = richardson(&hs2, &m);
    QuadResult {
        value,
        error,
        converged: error.is_finite(),
        per_delta: m.to_vec(),
    }
}
