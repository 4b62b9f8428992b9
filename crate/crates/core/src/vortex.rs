//! Hyperbolic vortices built from positive harmonic potentials.
//!
//! On the half-plane (coordinate `z = t + i r`, metric `(dt² + dr²)/r²`) a
//! potential φ gives the Higgs field `Φ = i (z − z̄) ∂_z log φ`; on the disc
//! `Φ = −i (1 − |w|²)(1 + w)/(1 + w̄) ∂_w log φ`. The connection is stored as
//! the real 1-form `a = a_x dx + a_y dy` in the coordinates of the model:
//! with `B = conj(∂_ζ log φ) + M`, `a_x = 2 Im B` and `a_y = −2 Re B`, where
//! `M = 1/(z − z̄)` on the half-plane and `M = (1 + w)/((1 − |w|²)(1 + w̄))`
//! on the disc. Anti-vortices are `(−a, −Φ̄)`.

use crate::error::{CoreError, Result};
use crate::potentials::{coordinate_series, CTaylor, SuperPotential};
use crate::quadrature::{integrate_disc, QuadConfig, QuadResult};
use crate::taylor::Taylor;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    HalfPlane,
    Disc,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::HalfPlane => "half-plane",
            Model::Disc => "disc",
        }
    }
}

/// A point of the hyperbolic plane in one of its two models.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperPoint {
    pub model: Model,
    pub coord: Complex64,
}

impl HyperPoint {
    pub fn new(model: Model, coord: Complex64) -> Self {
        HyperPoint { model, coord }
    }

    pub fn half_plane(t: f64, r: f64) -> Self {
        Self::new(Model::HalfPlane, Complex64::new(t, r))
    }

    pub fn disc(w: Complex64) -> Self {
        Self::new(Model::Disc, w)
    }

    pub fn is_interior(&self) -> bool {
        match self.model {
            Model::HalfPlane => self.coord.im > 0.0 && self.coord.re.is_finite(),
            Model::Disc => self.coord.norm_sqr() < 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.is_interior() {
            Ok(())
        } else {
            Err(CoreError::OutsideDomain(format!(
                "{} in the {} model",
                self.coord,
                self.model.name()
            )))
        }
    }

    /// `Ω` in `h = Ω (dx² + dy²)`.
    pub fn conformal_factor(&self) -> f64 {
        match self.model {
            Model::HalfPlane => 1.0 / (self.coord.im * self.coord.im),
            Model::Disc => 4.0 / (1.0 - self.coord.norm_sqr()).powi(2),
        }
    }

    pub fn to_model(&self, model: Model) -> HyperPoint {
        if model == self.model {
            *self
        } else {
            disc_map(*self)
        }
    }

    pub fn to_half_plane(&self) -> Complex64 {
        self.to_model(Model::HalfPlane).coord
    }

    pub fn to_disc(&self) -> Complex64 {
        self.to_model(Model::Disc).coord
    }
}

/// Swaps models: `w = (i − z)/(i + z)`, `z = i(1 − w)/(1 + w)`.
pub fn disc_map(p: HyperPoint) -> HyperPoint {
    match p.model {
        Model::HalfPlane => HyperPoint::disc((I - p.coord) / (I + p.coord)),
        Model::Disc => HyperPoint::new(Model::HalfPlane, I * (ONE - p.coord) / (ONE + p.coord)),
    }
}

/// Derivative of the coordinate change at `p` toward the other model:
/// `dw/dz = −2i/(i + z)²` or `dz/dw = −2i/(1 + w)²`.
pub fn disc_map_jacobian(p: HyperPoint) -> Complex64 {
    match p.model {
        Model::HalfPlane => -2.0 * I / (I + p.coord).powi(2),
        Model::Disc => -2.0 * I / (ONE + p.coord).powi(2),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Vortex,
    AntiVortex,
}

/// Connection and Higgs field at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VortexSample {
    pub point: HyperPoint,
    /// `(a_x, a_y)` in the coordinates of `point.model`.
    pub a: [f64; 2],
    pub phi: Complex64,
    pub kind: Kind,
}

impl VortexSample {
    /// `A` in `a = A dζ + Ā dζ̄`.
    fn a_holomorphic(&self) -> Complex64 {
        Complex64::new(self.a[0], -self.a[1]) * 0.5
    }

    /// Same fields in the other model's coordinates; Φ is a scalar, `a` a 1-form.
    pub fn to_model(&self, model: Model) -> VortexSample {
        if model == self.point.model {
            return *self;
        }
        let jac = disc_map_jacobian(self.point);
        let big_a = self.a_holomorphic() / jac;
        VortexSample {
            point: disc_map(self.point),
            a: [2.0 * big_a.re, -2.0 * big_a.im],
            phi: self.phi,
            kind: self.kind,
        }
    }
}

/// Series of the fields around a point, enough to evaluate the equations.
#[derive(Debug, Clone, Copy)]
pub struct VortexJet {
    pub point: HyperPoint,
    pub kind: Kind,
    pub ax: Taylor<f64>,
    pub ay: Taylor<f64>,
    pub phi: CTaylor,
}

impl VortexJet {
    pub fn sample(&self) -> VortexSample {
        VortexSample {
            point: self.point,
            a: [self.ax.value(), self.ay.value()],
            phi: self.phi.value(),
            kind: self.kind,
        }
    }

    /// `(|covariant (anti-)holomorphicity|, |∗_h F − (±)(1 − |Φ|²)|)`; needs order ≥ 1.
    pub fn residuals(&self) -> (f64, f64) {
        let phi = self.phi.value();
        let dphi_x = self.phi.partial(0).value();
        let dphi_y = self.phi.partial(1).value();
        let (ax, ay) = (self.ax.value(), self.ay.value());
        let r1 = match self.kind {
            Kind::Vortex => {
                let dbar = (dphi_x + I * dphi_y) * 0.5;
                dbar + I * Complex64::new(ax, ay) * 0.5 * phi
            }
            Kind::AntiVortex => {
                let d = (dphi_x - I * dphi_y) * 0.5;
                d + I * Complex64::new(ax, -ay) * 0.5 * phi
            }
        }
        .norm();
        let curl = self.ay.d(&[0]) - self.ax.d(&[1]);
        let s = -curl / self.point.conformal_factor();
        let target = 1.0 - phi.norm_sqr();
        let r2 = match self.kind {
            Kind::Vortex => (s - target).abs(),
            Kind::AntiVortex => (s + target).abs(),
        };
        (r1, r2)
    }
}

/// `M` of the model, as a series in that model's coordinates.
fn metric_term(zeta: &CTaylor, model: Model) -> CTaylor {
    let zb = zeta.conj();
    match model {
        Model::HalfPlane => (*zeta - zb).recip(),
        Model::Disc => (*zeta + ONE) / ((-(*zeta * zb) + ONE) * (zb + ONE)),
    }
}

/// Prefactor `P` in `Φ = P ∂_ζ log φ`.
fn higgs_prefactor(zeta: &CTaylor, model: Model) -> CTaylor {
    let zb = zeta.conj();
    match model {
        Model::HalfPlane => (*zeta - zb).mul_i(),
        Model::Disc => -((-(*zeta * zb) + ONE) * (*zeta + ONE) / (zb + ONE)).mul_i(),
    }
}

/// Assembles the fields from `G = ∂_ζ log φ` given as a series.
pub fn vortex_jet_from_gradient(g: &CTaylor, p: HyperPoint, kind: Kind) -> VortexJet {
    let zeta = coordinate_series(p.coord, g.order());
    let b = g.conj() + metric_term(&zeta, p.model);
    let mut ax = b.im() * 2.0;
    let mut ay = b.re() * -2.0;
    let mut phi = higgs_prefactor(&zeta, p.model) * *g;
    if kind == Kind::AntiVortex {
        ax = -ax;
        ay = -ay;
        phi = -phi.conj();
    }
    VortexJet {
        point: p,
        kind,
        ax,
        ay,
        phi,
    }
}

/// Series of the vortex fields of φ to the given order.
pub fn vortex_jet(phi: &SuperPotential, p: HyperPoint, kind: Kind, order: usize) -> Result<VortexJet> {
    let g = phi.log_gradient(p, order)?;
    Ok(vortex_jet_from_gradient(&g, p, kind))
}

pub fn vortex_from_potential(phi: &SuperPotential, p: HyperPoint, kind: Kind) -> Result<VortexSample> {
    Ok(vortex_jet(phi, p, kind, 0)?.sample())
}

pub fn vortex_residuals(phi: &SuperPotential, p: HyperPoint, kind: Kind) -> Result<(f64, f64)> {
    Ok(vortex_jet(phi, p, kind, 1)?.residuals())
}

/// `c₁ = (1/2π) ∫ (Ω − 4|∂_ζ log φ|²) dA`, evaluated with the coordinates
/// of `model` and integrated over the disc (half-plane integrands pick up
/// `|dz/dw|²`).
pub fn chern1(phi: &SuperPotential, cfg: &QuadConfig, model: Model) -> Result<QuadResult> {
    let theta0 = phi.cut().map_or(0.0, |c| c.start());
    let f = |w: Complex64| -> f64 {
        let pd = HyperPoint::disc(w);
        let p = pd.to_model(model);
        let val = match phi.log_gradient(p, 0) {
            Ok(g) => p.conformal_factor() - 4.0 * g.value().norm_sqr(),
            Err(_) => return f64::NAN,
        };
        match model {
            Model::Disc => val,
            Model::HalfPlane => val * disc_map_jacobian(pd).norm_sqr(),
        }
    };
    let res = integrate_disc(&f, cfg, theta0)?;
    if !res.value.is_finite() {
        return Err(CoreError::QuadratureNotConverged {
            value: res.value,
            error: res.error,
        });
    }
    Ok(res.scale(1.0 / (2.0 * PI)))
}

/// Search region for Higgs zeros.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    /// Half-plane rectangle between two corners.
    Rect { lo: Complex64, hi: Complex64 },
    /// Disc model points with `|w| ≤ radius`.
    Disc { radius: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HiggsZero {
    pub point: HyperPoint,
    pub multiplicity: i32,
}

/// Zeros of Φ from a `seeds × seeds` grid of Newton starts on `∂_ζ log φ`.
pub fn higgs_zeros(phi: &SuperPotential, region: Region, seeds: usize) -> Result<Vec<HiggsZero>> {
    let n = seeds.max(2);
    let mut starts = Vec::with_capacity(n * n);
    let model = match region {
        Region::Rect { lo, hi } => {
            for i in 0..n {
                for j in 0..n {
                    let x = lo.re + (hi.re - lo.re) * (i as f64 + 0.5) / n as f64;
                    let y = lo.im + (hi.im - lo.im) * (j as f64 + 0.5) / n as f64;
                    starts.push(Complex64::new(x, y));
                }
            }
            Model::HalfPlane
        }
        Region::Disc { radius } => {
            for i in 0..n {
                for j in 0..n {
                    let x = -radius + 2.0 * radius * (i as f64 + 0.5) / n as f64;
                    let y = -radius + 2.0 * radius * (j as f64 + 0.5) / n as f64;
                    if x * x + y * y <= radius * radius {
                        starts.push(Complex64::new(x, y));
                    }
                }
            }
            Model::Disc
        }
    };
    let inside = |z: Complex64| match region {
        Region::Rect { lo, hi } => {
            z.re >= lo.re && z.re <= hi.re && z.im >= lo.im && z.im <= hi.im && z.im > 0.0
        }
        Region::Disc { radius } => z.norm() <= radius,
    };
    let mut found: Vec<Complex64> = Vec::new();
    for s in starts {
        let Some(z) = newton_zero(phi, model, s) else {
            continue;
        };
        if !inside(z) || found.iter().any(|f| (f - z).norm() < 1e-6) {
            continue;
        }
        let p = HyperPoint::new(model, z);
        let v = vortex_from_potential(phi, p, Kind::Vortex)?;
        if v.phi.norm() < 1e-10 {
            found.push(z);
        }
    }
    found.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    found
        .into_iter()
        .map(|z| {
            let p = HyperPoint::new(model, z);
            let scale = match model {
                Model::HalfPlane => z.im,
                Model::Disc => 1.0 - z.norm(),
            };
            let w = winding(
                &|q: Complex64| {
                    vortex_from_potential(phi, HyperPoint::new(model, q), Kind::Vortex)
                        .map(|v| v.phi)
                        .unwrap_or(Complex64::new(f64::NAN, 0.0))
                },
                z,
                1e-3 * scale,
                0.0,
                2.0 * PI,
                256,
            );
            Ok(HiggsZero {
                point: p,
                multiplicity: w.round() as i32,
            })
        })
        .collect()
}

fn newton_zero(phi: &SuperPotential, model: Model, start: Complex64) -> Option<Complex64> {
    let mut z = start;
    for _ in 0..60 {
        let p = HyperPoint::new(model, z);
        if !p.is_interior() {
            return None;
        }
        let g = phi.log_gradient(p, 1).ok()?;
        let g0 = g.value();
        if g0.norm() < 1e-15 {
            return Some(z);
        }
        let gx = g.d(&[0]);
        let gy = g.d(&[1]);
        // [Re gx Re gy; Im gx Im gy] δ = −g
        let det = gx.re * gy.im - gy.re * gx.im;
        if det.abs() < 1e-300 {
            return None;
        }
        let dx = (-g0.re * gy.im + g0.im * gy.re) / det;
        let dy = (-gx.re * g0.im + gx.im * g0.re) / det;
        let step = Complex64::new(dx, dy);
        let mut t = 1.0;
        let limit = match model {
            Model::HalfPlane => 0.5 * z.im,
            Model::Disc => 0.5 * (1.0 - z.norm()),
        };
        if step.norm() > limit {
            t = limit / step.norm();
        }
        z += step * t;
        if step.norm() * t < 1e-14 * (1.0 + z.norm()) {
            return Some(z);
        }
    }
    None
}

/// Winding of `f` along the arc `θ ∈ (θ0, θ1)` of a circle, in turns.
pub fn winding<F>(f: &F, center: Complex64, radius: f64, theta0: f64, theta1: f64, n: usize) -> f64
where
    F: Fn(Complex64) -> Complex64,
{
    let mut total = 0.0;
    let pt = |k: usize| {
        let t = theta0 + (theta1 - theta0) * k as f64 / n as f64;
        f(center + Complex64::from_polar(radius, t))
    };
    let mut prev = pt(0);
    for k in 1..=n {
        let cur = pt(k);
        total += (cur / prev).arg();
        prev = cur;
    }
    total / (2.0 * PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::{named_generic, Cut};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn basic() -> SuperPotential {
        SuperPotential::halfplane(vec![0.0], vec![1.0]).unwrap()
    }

    fn random_half(r: &mut ChaCha8Rng) -> HyperPoint {
        HyperPoint::half_plane(r.gen_range(-3.0..3.0), r.gen_range(0.1..3.0))
    }

    fn random_disc(r: &mut ChaCha8Rng) -> HyperPoint {
        let rad = 0.95 * r.gen::<f64>().sqrt() + 0.01;
        let mut th: f64 = r.gen_range(-PI..PI);
        if th.abs() < 0.02 || PI - th.abs() < 0.02 {
            th += 0.05;
        }
        HyperPoint::disc(Complex64::from_polar(rad, th))
    }

    #[test]
    fn cayley_map_fixed_points_and_round_trip() {
        assert!(disc_map(HyperPoint::half_plane(0.0, 1.0)).coord.norm() < 1e-16);
        let w = (I - Complex64::new(1e-300, 0.0)) / (I + Complex64::new(1e-300, 0.0));
        assert!((w - ONE).norm() < 1e-15);
        let mut r = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let p = random_half(&mut r);
            let back = disc_map(disc_map(p));
            assert!((back.coord - p.coord).norm() < 1e-14 * (1.0 + p.coord.norm()));
            assert!(disc_map(p).is_interior());
            // the metric is invariant: Ω_h |dz|² = Ω_d |dw|²
            let q = disc_map(p);
            let ratio = q.conformal_factor() * disc_map_jacobian(p).norm_sqr() / p.conformal_factor();
            assert!((ratio - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn basic_vortex_higgs_field_closed_form() {
        let phi = basic();
        let mut r = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let p = random_half(&mut r);
            let z = p.coord;
            let want = I * z.conj() * (ONE + z * z) / (z * (ONE + z * z.conj()));
            let got = vortex_from_potential(&phi, p, Kind::Vortex).unwrap().phi;
            assert!((got - want).norm() < 1e-13, "{got} vs {want}");
        }
        let at_i = vortex_from_potential(&phi, HyperPoint::half_plane(0.0, 1.0), Kind::Vortex).unwrap();
        assert!(at_i.phi.norm() < 1e-15);
    }

    #[test]
    fn flat_disc_vortex_has_unit_higgs_field() {
        let phi = SuperPotential::disc_family(1.0, ONE, Cut::P2).unwrap();
        let mut r = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let p = random_disc(&mut r);
            let w = p.coord;
            let want = -I * ((ONE + w) / (ONE + w.conj())) * ((ONE - w.conj()) / (ONE - w));
            let v = vortex_from_potential(&phi, p, Kind::Vortex).unwrap();
            assert!((v.phi - want).norm() < 1e-12);
            assert!((v.phi.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn residuals_vanish_for_harmonic_potentials() {
        let fams = [
            basic(),
            SuperPotential::halfplane_from_zeros(&[Complex64::new(0.0, 1.0), Complex64::new(1.0, 2.0)])
                .unwrap(),
            SuperPotential::Fhp1,
            SuperPotential::Fhp2,
            SuperPotential::disc_family(2.5, ONE, Cut::P2).unwrap(),
        ];
        let mut r = ChaCha8Rng::seed_from_u64(4);
        for f in &fams {
            for kind in [Kind::Vortex, Kind::AntiVortex] {
                for _ in 0..40 {
                    let pd = random_disc(&mut r);
                    for p in [pd, disc_map(pd)] {
                        let (a, b) = vortex_residuals(f, p, kind).unwrap();
                        assert!(a < 1e-9 && b < 1e-9, "{f:?} {kind:?} {p:?}: {a:e} {b:e}");
                    }
                }
            }
        }
    }

    #[test]
    fn samples_transport_between_models() {
        let f = SuperPotential::Fhp2;
        let mut r = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let pd = random_disc(&mut r);
            let d = vortex_from_potential(&f, pd, Kind::Vortex).unwrap();
            let h = vortex_from_potential(&f, disc_map(pd), Kind::Vortex).unwrap();
            // the two models use different gauges only through their frames; |Φ| and the
            // transported connection's curvature agree, Φ itself differs by a phase
            assert!((d.phi.norm() - h.phi.norm()).abs() < 1e-10);
            let back = h.to_model(Model::Disc).to_model(Model::HalfPlane);
            assert!((back.a[0] - h.a[0]).abs() < 1e-10 && (back.a[1] - h.a[1]).abs() < 1e-10);
        }
    }

    #[test]
    fn non_harmonic_potential_breaks_the_curvature_equation() {
        let f = named_generic("nonharmonic-cubic").unwrap();
        let p = HyperPoint::half_plane(0.3, 0.8);
        let (r1, r2) = vortex_residuals(&f, p, Kind::Vortex).unwrap();
        let lap = crate::potentials::harmonic_residual_hyp(&f, p).unwrap();
        let val = f.value2(p).unwrap();
        assert!(r2 > 1e-2);
        // the defect is Δ_h φ / φ up to the finite-difference error
        assert!((r2 - (lap / val).abs()).abs() < 1e-4, "{r2} vs {}", lap / val);
        assert!(r1 > 1e-2);
    }

    #[test]
    fn boundary_condition_along_rays() {
        let phi = basic();
        for th in [0.3, 1.7, -2.2] {
            let d1 = vortex_from_potential(&phi, HyperPoint::disc(Complex64::from_polar(0.99, th)), Kind::Vortex)
                .unwrap();
            let d2 = vortex_from_potential(&phi, HyperPoint::disc(Complex64::from_polar(0.999, th)), Kind::Vortex)
                .unwrap();
            let e1 = (d1.phi.norm() - 1.0).abs();
            let e2 = (d2.phi.norm() - 1.0).abs();
            assert!(e2 < e1 && e2 < 1e-2, "{e1} {e2}");
        }
    }

    #[test]
    fn zeros_of_the_basic_and_shifted_vortex() {
        // (λ, a) = (2, 1): Φ vanishes at 1 + i√2
        let phi = SuperPotential::halfplane(vec![1.0], vec![2.0]).unwrap();
        let zs = higgs_zeros(
            &phi,
            Region::Rect {
                lo: Complex64::new(-2.0, 0.1),
                hi: Complex64::new(4.0, 4.0),
            },
            6,
        )
        .unwrap();
        assert_eq!(zs.len(), 1);
        assert!((zs[0].point.coord - Complex64::new(1.0, 2f64.sqrt())).norm() < 1e-10);
        assert_eq!(zs[0].multiplicity, 1);
        let flat = SuperPotential::halfplane(vec![], vec![]).unwrap();
        let none = higgs_zeros(&flat, Region::Disc { radius: 0.9 }, 6).unwrap();
        assert!(none.is_empty());
    }

    #[test]
    fn fractional_winding_around_the_branch_point() {
        let phi = SuperPotential::Fhp2;
        let f = |w: Complex64| {
            vortex_from_potential(&phi, HyperPoint::disc(w), Kind::Vortex)
                .unwrap()
                .phi
        };
        let eta = 1e-6;
        let w = winding(&f, Complex64::new(0.0, 0.0), 1e-3, -PI + eta, PI - eta, 4096);
        assert!((w - 1.5).abs() < 1e-3, "{w}");
    }
}
