//! Abelian gauge transformations of vortices, gauge-equivalent pairs from a
//! harmonic χ, the two-patch construction with fractional charge, and the
//! singular family with its monodromy gauge and holonomy.
//!
//! A gauge transformation is the unit field `E = e^{2iχ}` acting by
//! `a ↦ a + i dE/E = a − 2dχ`, `Φ ↦ E Φ`.

use crate::error::{CoreError, Result};
use crate::potentials::{coordinate_series, power_series, CTaylor, Cut, SuperPotential};
use crate::quadrature::{integrate_polar, loop_integral, QuadConfig, QuadResult};
use crate::vortex::{vortex_jet, vortex_jet_from_gradient, HyperPoint, Kind, Model, VortexJet, VortexSample};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A harmonic χ on one hyperbolic model.
#[derive(Debug, Clone, PartialEq)]
pub enum GaugeChi {
    /// `χ = Im Σ c_k ζ^k` in the coordinates of the point's model.
    ImPoly(Vec<Complex64>),
    /// The two-patch gauge on the disc, `e^{2iχ} = i(1 − f̄)(1 + if)/((1 − f)(1 − if̄))`.
    Fhp,
}

impl GaugeChi {
    /// Series of `E = e^{2iχ}` around `p`.
    pub fn unit_series(&self, p: HyperPoint, order: usize) -> Result<CTaylor> {
        p.validate()?;
        let zeta = coordinate_series(p.coord, order);
        match self {
            GaugeChi::ImPoly(c) => {
                let mut h = zeta * Complex64::new(0.0, 0.0);
                let mut pw = zeta.map(|_| Complex64::new(0.0, 0.0)) + ONE;
                for ck in c {
                    h = h + pw * *ck;
                    pw = pw * zeta;
                }
                // 2iχ = h − h̄
                Ok((h - h.conj()).exp())
            }
            GaugeChi::Fhp => {
                let w = match p.model {
                    Model::Disc => zeta,
                    Model::HalfPlane => {
                        return Err(CoreError::InvalidData(
                            "the two-patch gauge is defined on the disc".into(),
                        ))
                    }
                };
                let f = fhp_f_series(&w)?;
                Ok(exp2ichi_of_f(&f))
            }
        }
    }

    pub fn unit(&self, p: HyperPoint) -> Result<Complex64> {
        Ok(self.unit_series(p, 0)?.value())
    }
}

/// `i(1 − f̄)(1 + if)/((1 − f)(1 − if̄))`.
fn exp2ichi_of_f(f: &CTaylor) -> CTaylor {
    let fb = f.conj();
    let num = (-fb + ONE) * (f.mul_i() + ONE);
    let den = (-*f + ONE) * (-fb.mul_i() + ONE);
    (num / den).mul_i()
}

/// `f = w^{5/2}` on the upper half-disc and `conj(w^{5/2})` on the lower half
/// (principal branch), so that `f = T₂ + i T₁`.
fn fhp_f_series(w: &CTaylor) -> Result<CTaylor> {
    let w0 = w.value();
    if w0.im == 0.0 {
        return Err(CoreError::BranchCut(format!("{w0} on the real axis")));
    }
    let p = power_series(w, 2.5, Cut::P2)?;
    Ok(if w0.im > 0.0 { p } else { p.conj() })
}

/// Gauge-transformed sample: `a + i dE/E`, `E Φ`; `E` must have order ≥ 1.
pub fn apply_gauge_jet(jet: &VortexJet, e: &CTaylor) -> VortexJet {
    let order = jet.ax.order();
    let einv = e.recip();
    let da = |v: usize| (e.partial(v) * einv.truncate(order)).im();
    VortexJet {
        point: jet.point,
        kind: jet.kind,
        ax: jet.ax - da(0),
        ay: jet.ay - da(1),
        phi: jet.phi * e.truncate(order),
    }
}

/// Gauge-transformed sample at a point.
pub fn apply_gauge(sample: &VortexSample, chi: &GaugeChi) -> Result<VortexSample> {
    let e = chi.unit_series(sample.point, 1)?;
    let ev = e.value();
    let dx = e.d(&[0]) / ev;
    let dy = e.d(&[1]) / ev;
    Ok(VortexSample {
        point: sample.point,
        a: [sample.a[0] - dx.im, sample.a[1] - dy.im],
        phi: ev * sample.phi,
        kind: sample.kind,
    })
}

/// `∂_ζ` of a complex series in `(x, y)`.
fn d_zeta(f: &CTaylor) -> CTaylor {
    (f.partial(0) - f.partial(1).mul_i()) * Complex64::new(0.5, 0.0)
}

/// The two gauge-equivalent vortices built from `log(e^{±2iχ} − 1)`.
///
/// `Φ± = P ∂ log(e^{∓2iχ} − 1)` and `∂̄_{a±} = ∂̄ + ∂̄ log(e^{±2iχ} − 1) + M dζ̄`;
/// the gauge `e^{2iχ}` maps the first to the second.
pub fn pair_from_chi(chi: &GaugeChi, p: HyperPoint, order: usize) -> Result<(VortexJet, VortexJet)> {
    let e = chi.unit_series(p, order + 1)?;
    if (e.value() - ONE).norm() < 1e-12 {
        return Err(CoreError::DegenerateGauge);
    }
    let plus = e - ONE;
    let minus = e.recip() - ONE;
    let g_plus = d_zeta(&minus.ln());
    let g_minus = d_zeta(&plus.ln());
    Ok((
        vortex_jet_from_gradient(&g_plus, p, Kind::Vortex),
        vortex_jet_from_gradient(&g_minus, p, Kind::Vortex),
    ))
}

/// `(T₁, T₂)` from the original half-plane expressions in `S = |z + i|`,
/// `S₋ = |z − i|`, evaluated at `z = i(1 − w)/(1 + w)`.
pub fn fhp_t(w: Complex64) -> Result<(f64, f64)> {
    check_fhp_point(w)?;
    let z = I * (ONE - w) / (ONE + w);
    let s = (z + I).norm();
    let sm = (z - I).norm();
    let zz = 2.0 * z.re;
    let brace = |u: f64| 0.25 * (4.0 - u * u).powi(2) + s * s * sm * sm - 3.0 * zz * zz;
    let root1 = ((s + sm).powi(2) - 4.0).max(0.0).sqrt();
    let root2 = (4.0 - (s - sm).powi(2)).max(0.0).sqrt();
    let t1 = root1 * brace(s - sm) / (2.0 * s.powi(5));
    let t2 = root2 * brace(s + sm) / (2.0 * s.powi(5));
    Ok((t1, t2))
}

/// `(T₁, T₂) = ((Im w^{5/2}) sign Im w^{1/2}, (Re w^{5/2}) sign Re w^{1/2})`.
pub fn fhp_t_simplified(w: Complex64) -> Result<(f64, f64)> {
    check_fhp_point(w)?;
    let h = w.sqrt();
    let p = w.powf(2.5);
    Ok((p.im * h.im.signum(), p.re * h.re.signum()))
}

fn check_fhp_point(w: Complex64) -> Result<()> {
    if w.im == 0.0 {
        return Err(CoreError::BranchCut(format!("{w} on the real axis")));
    }
    if w.norm() >= 1.0 {
        return Err(CoreError::OutsideDomain(format!("{w}")));
    }
    Ok(())
}

/// `f = T₂ + i T₁`.
pub fn fhp_f(w: Complex64) -> Result<Complex64> {
    let (t1, t2) = fhp_t_simplified(w)?;
    Ok(Complex64::new(t2, t1))
}

/// `e^{2iχ}` of the two-patch construction at `w`.
pub fn fhp_gauge(w: Complex64) -> Result<Complex64> {
    GaugeChi::Fhp.unit(HyperPoint::disc(w))
}

/// The arctangent form `2χ = π/2 + 2 arctan(T₂/(1 − T₁)) + 2 arctan(T₁/(1 − T₂))`.
pub fn fhp_two_chi_arctan(w: Complex64) -> Result<f64> {
    let (t1, t2) = fhp_t(w)?;
    Ok(PI / 2.0 + 2.0 * (t2 / (1.0 - t1)).atan() + 2.0 * (t1 / (1.0 - t2)).atan())
}

/// The patch gauge `g = e^{+2iχ}` on the upper half-disc, `e^{−2iχ}` on the lower.
pub fn fhp_patch_gauge(w: Complex64) -> Result<Complex64> {
    let e = fhp_gauge(w)?;
    Ok(if w.im > 0.0 { e } else { e.inv() })
}

/// The singular family `φ = (1 − |w|^{2c})/|1 − w^c|²` on a cut disc, and its
/// continuation `φ'` with `ε` in the denominator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonodromyFamily {
    pub c: f64,
    pub eps: Complex64,
    pub cut: Cut,
}

impl MonodromyFamily {
    /// `ε = e^{2πic}`, cut along the positive real axis.
    pub fn new(c: f64) -> Result<Self> {
        Self::with_eps(c, Complex64::from_polar(1.0, 2.0 * PI * c), Cut::P1)
    }

    pub fn with_eps(c: f64, eps: Complex64, cut: Cut) -> Result<Self> {
        if c == 0.0 || !c.is_finite() {
            return Err(CoreError::InvalidData("c must be nonzero and finite".into()));
        }
        if (eps.norm() - 1.0).abs() > 1e-12 {
            return Err(CoreError::InvalidData("|ε| must be 1".into()));
        }
        Ok(MonodromyFamily { c, eps, cut })
    }

    pub fn phi(&self) -> SuperPotential {
        SuperPotential::DiscFamily {
            c: self.c,
            eps: ONE,
            cut: self.cut,
        }
    }

    pub fn phi_prime(&self) -> SuperPotential {
        SuperPotential::DiscFamily {
            c: self.c,
            eps: self.eps,
            cut: self.cut,
        }
    }

    /// Series of `g = ε (1 − ε̄ w̄^c)(1 − w^c)/((1 − ε w^c)(1 − w̄^c))`.
    pub fn gauge_series(&self, w: Complex64, order: usize) -> Result<CTaylor> {
        let p = HyperPoint::disc(w);
        p.validate()?;
        let ws = coordinate_series(w, order);
        let u = power_series(&ws, self.c, self.cut)?;
        let ub = u.conj();
        let d1 = -(u * self.eps) + ONE;
        let d2 = -ub + ONE;
        if d1.value().norm() < 1e-14 || d2.value().norm() < 1e-14 {
            return Err(CoreError::Pole(format!("{w}")));
        }
        let num = (-(ub * self.eps.conj()) + ONE) * (-u + ONE);
        Ok(num / (d1 * d2) * self.eps)
    }
}

pub fn monodromy_gauge(fam: &MonodromyFamily, w: Complex64) -> Result<Complex64> {
    Ok(fam.gauge_series(w, 0)?.value())
}

/// Residuals of `∂ log φ' = g ∂ log φ` and `∂̄ log φ' = ∂̄ log φ − ∂̄ log g` at `w`.
pub fn monodromy_relations(fam: &MonodromyFamily, w: Complex64) -> Result<(f64, f64)> {
    let p = HyperPoint::disc(w);
    let g = fam.gauge_series(w, 1)?;
    let gp = fam.phi().log_gradient(p, 0)?.value();
    let gq = fam.phi_prime().log_gradient(p, 0)?.value();
    let gv = g.value();
    let dbar_log_g = (g.d(&[0]) + I * g.d(&[1])) * 0.5 / gv;
    let fields = (gq - gv * gp).norm();
    let conns = (gq.conj() - (gp.conj() - dbar_log_g)).norm();
    Ok((fields, conns))
}

/// `∮_{|w|=r} a` for the vortex of `φ`, integrated from the cut around once.
pub fn loop_connection_integral(fam: &MonodromyFamily, r: f64, n: usize) -> Result<QuadResult> {
    if !(r > 0.0 && r < 1.0) {
        return Err(CoreError::OutsideDomain(format!("radius {r}")));
    }
    let phi = fam.phi();
    let failed = std::sync::atomic::AtomicBool::new(false);
    let g = |th: f64| -> f64 {
        let w = Complex64::from_polar(r, th);
        match vortex_jet(&phi, HyperPoint::disc(w), Kind::Vortex, 0) {
            Ok(j) => {
                let (ax, ay) = (j.ax.value(), j.ay.value());
                r * (-ax * th.sin() + ay * th.cos())
            }
            Err(_) => {
                failed.store(true, std::sync::atomic::Ordering::Relaxed);
                f64::NAN
            }
        }
    };
    let res = loop_integral(&g, fam.cut.start(), n);
    if failed.into_inner() || !res.value.is_finite() {
        return Err(CoreError::QuadratureNotConverged {
            value: res.value,
            error: res.error,
        });
    }
    Ok(res)
}

/// `ε · exp(i ∮ a)`.
pub fn holonomy(fam: &MonodromyFamily, r: f64, n: usize) -> Result<Complex64> {
    let l = loop_connection_integral(fam, r, n)?;
    Ok(fam.eps * Complex64::from_polar(1.0, l.value))
}

/// `∫_{|w|<r} (1 − |Φ|²) dμ_h`, the curvature enclosed by the loop.
pub fn enclosed_flux(fam: &MonodromyFamily, r: f64, cfg: &QuadConfig) -> Result<f64> {
    let phi = fam.phi();
    let f = |w: Complex64| -> f64 {
        let p = HyperPoint::disc(w);
        match vortex_jet(&phi, p, Kind::Vortex, 0) {
            Ok(j) => (1.0 - j.phi.value().norm_sqr()) * p.conformal_factor(),
            Err(_) => f64::NAN,
        }
    };
    let v = integrate_polar(&f, r, cfg, fam.cut.start());
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CoreError::QuadratureNotConverged {
            value: v,
            error: f64::INFINITY,
        })
    }
}

/// Boundary term left after removing the enclosed flux from the loop integral:
/// `−2 r^c sin 2πc` for the positive-axis cut, `−4 r^c sin πc` for the negative.
pub fn loop_integral_leading(fam: &MonodromyFamily, r: f64) -> f64 {
    let c = fam.c;
    match fam.cut {
        Cut::P1 => -2.0 * r.powf(c) * (2.0 * PI * c).sin(),
        Cut::P2 => -4.0 * r.powf(c) * (PI * c).sin(),
    }
}

/// `α = (c − ⌊c⌋)/2`.
pub fn holonomy_parameter(c: f64) -> f64 {
    (c - c.floor()) / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vortex::vortex_from_potential;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_disc(r: &mut ChaCha8Rng, upper: Option<bool>) -> Complex64 {
        loop {
            let w = Complex64::new(r.gen_range(-0.95..0.95), r.gen_range(-0.95..0.95));
            let ok_half = match upper {
                Some(true) => w.im > 0.02,
                Some(false) => w.im < -0.02,
                None => w.im.abs() > 0.02,
            };
            if w.norm() < 0.95 && w.norm() > 0.02 && ok_half {
                return w;
            }
        }
    }

    fn close(a: &VortexSample, b: &VortexSample, tol: f64) -> bool {
        (a.a[0] - b.a[0]).abs() < tol * (1.0 + a.a[0].abs())
            && (a.a[1] - b.a[1]).abs() < tol * (1.0 + a.a[1].abs())
            && (a.phi - b.phi).norm() < tol * (1.0 + a.phi.norm())
    }

    #[test]
    fn trivial_and_constant_gauges() {
        let phi = SuperPotential::halfplane(vec![0.0], vec![1.0]).unwrap();
        let s = vortex_from_potential(&phi, HyperPoint::disc(Complex64::new(0.3, 0.2)), Kind::Vortex).unwrap();
        let same = apply_gauge(&s, &GaugeChi::ImPoly(vec![])).unwrap();
        assert!(close(&s, &same, 1e-15));
        let kappa = 0.4;
        let rot = apply_gauge(&s, &GaugeChi::ImPoly(vec![Complex64::new(0.0, kappa)])).unwrap();
        assert!((rot.a[0] - s.a[0]).abs() < 1e-15 && (rot.a[1] - s.a[1]).abs() < 1e-15);
        assert!((rot.phi - s.phi * Complex64::from_polar(1.0, 2.0 * kappa)).norm() < 1e-15);
    }

    #[test]
    fn gauge_preserves_residuals() {
        // χ = Im log w on the disc cut along the negative axis, applied to the basic vortex
        let phi = SuperPotential::halfplane(vec![0.0], vec![1.0]).unwrap();
        let mut r = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..50 {
            let w = random_disc(&mut r, None);
            let p = HyperPoint::disc(w);
            let j = vortex_jet(&phi, p, Kind::Vortex, 1).unwrap();
            let ws = coordinate_series(w, 2);
            let e = (ws.ln() - ws.conj().ln()).exp();
            let g = apply_gauge_jet(&j, &e);
            let (r1, r2) = g.residuals();
            assert!(r1 < 1e-10 && r2 < 1e-10, "{r1:e} {r2:e}");
            let chi = (g.phi.value() / j.phi.value()).arg();
            assert!((chi - 2.0 * w.arg()).sin().abs() < 1e-12);
        }
    }

    #[test]
    fn pairs_from_chi_are_gauge_equivalent_vortices() {
        let chi = GaugeChi::ImPoly(vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), ONE]);
        let mut r = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..100 {
            let p = HyperPoint::disc(random_disc(&mut r, None));
            let Ok((plus, minus)) = pair_from_chi(&chi, p, 1) else { continue };
            for j in [&plus, &minus] {
                let (r1, r2) = j.residuals();
                assert!(r1 < 1e-9 && r2 < 1e-9, "{r1:e} {r2:e}");
            }
            let moved = apply_gauge(&plus.sample(), &chi).unwrap();
            assert!(close(&moved, &minus.sample(), 1e-10));
            // Φ₋/Φ₊ recovers the gauge
            let e = chi.unit(p).unwrap();
            if plus.phi.value().norm() > 1e-8 {
                assert!((minus.phi.value() / plus.phi.value() - e).norm() < 1e-9);
            }
            assert!((plus.phi.value().norm() - minus.phi.value().norm()).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_gauge_is_reported() {
        let chi = GaugeChi::ImPoly(vec![]);
        let res = pair_from_chi(&chi, HyperPoint::disc(Complex64::new(0.1, 0.1)), 1);
        assert!(matches!(res, Err(CoreError::DegenerateGauge)));
    }

    #[test]
    fn fhp_t_forms_agree() {
        let mut r = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..500 {
            let w = random_disc(&mut r, None);
            let (a1, a2) = fhp_t(w).unwrap();
            let (b1, b2) = fhp_t_simplified(w).unwrap();
            assert!((a1 - b1).abs() < 1e-10 && (a2 - b2).abs() < 1e-10, "{w}");
        }
        assert!(matches!(fhp_t(Complex64::new(0.5, 0.0)), Err(CoreError::BranchCut(_))));
    }

    #[test]
    fn fhp_gauge_properties() {
        let mut r = ChaCha8Rng::seed_from_u64(34);
        for _ in 0..200 {
            let w = random_disc(&mut r, None);
            assert!((fhp_gauge(w).unwrap().norm() - 1.0).abs() < 1e-12);
            let f = fhp_f(w).unwrap();
            let fs = fhp_f_series(&coordinate_series(w, 0)).unwrap().value();
            assert!((f - fs).norm() < 1e-12);
        }
        // on the unit circle |f| = 1 and the gauge is trivial
        for th in [0.3, 1.2, 2.5, -0.7, -2.9] {
            let w = Complex64::from_polar(1.0, th);
            let f = if w.im > 0.0 { w.powf(2.5) } else { w.powf(2.5).conj() };
            let e = exp2ichi_of_f(&(coordinate_series(f, 0)));
            assert!((f.norm() - 1.0).abs() < 1e-14);
            assert!((e.value() - ONE).norm() < 1e-12);
        }
        // f is continuous across the negative real axis
        for rho in [0.2, 0.5, 0.9] {
            let up = fhp_f(Complex64::new(-rho, 1e-9)).unwrap();
            let down = fhp_f(Complex64::new(-rho, -1e-9)).unwrap();
            assert!((up - down).norm() < 1e-8);
        }
    }

    #[test]
    fn fhp_patches_are_gauge_equivalent() {
        let mut r = ChaCha8Rng::seed_from_u64(35);
        for _ in 0..100 {
            let w = random_disc(&mut r, None);
            let p = HyperPoint::disc(w);
            let v1 = vortex_from_potential(&SuperPotential::Fhp1, p, Kind::Vortex).unwrap();
            let v2 = vortex_from_potential(&SuperPotential::Fhp2, p, Kind::Vortex).unwrap();
            let g = fhp_patch_gauge(w).unwrap();
            assert!((v2.phi - g * v1.phi).norm() < 1e-9 * (1.0 + v1.phi.norm()), "{w}");
            // the connection relation with the exact differential of the patch gauge
            let e = GaugeChi::Fhp.unit_series(p, 1).unwrap();
            let e = if w.im > 0.0 { e } else { e.recip() };
            let moved = apply_gauge_jet(&vortex_jet(&SuperPotential::Fhp1, p, Kind::Vortex, 1).unwrap(), &e);
            assert!(close(&moved.sample(), &v2, 1e-9), "{w}");
        }
    }

    #[test]
    fn fhp_patches_are_continuous_across_their_open_axes() {
        for rho in [0.1, 0.4, 0.8] {
            let eta = 1e-7;
            let at = |phi: &SuperPotential, w: Complex64| vortex_from_potential(phi, HyperPoint::disc(w), Kind::Vortex).unwrap();
            let a = at(&SuperPotential::Fhp1, Complex64::new(-rho, eta));
            let b = at(&SuperPotential::Fhp1, Complex64::new(-rho, -eta));
            assert!(close(&a, &b, 1e-5));
            let a = at(&SuperPotential::Fhp2, Complex64::new(rho, eta));
            let b = at(&SuperPotential::Fhp2, Complex64::new(rho, -eta));
            assert!(close(&a, &b, 1e-5));
        }
    }

    #[test]
    fn monodromy_gauge_relations() {
        let mut r = ChaCha8Rng::seed_from_u64(36);
        for c in [2.5, 3.7, 1.5, 0.6] {
            let fam = MonodromyFamily::new(c).unwrap();
            for _ in 0..100 {
                let w = random_disc(&mut r, None);
                let Ok((f, a)) = monodromy_relations(&fam, w) else { continue };
                assert!(f < 1e-9 && a < 1e-9, "c={c} {w}: {f:e} {a:e}");
                assert!((monodromy_gauge(&fam, w).unwrap().norm() - 1.0).abs() < 1e-12);
            }
        }
        let int = MonodromyFamily::new(3.0).unwrap();
        assert!((monodromy_gauge(&int, Complex64::new(0.3, -0.4)).unwrap() - ONE).norm() < 1e-12);
    }

    #[test]
    fn monodromy_gauge_reproduces_the_patch_gauge() {
        // c = 5/2, ε = −i on the negative-axis cut maps φ₂ to φ₁: the inverse of e^{2iχ}
        let fam = MonodromyFamily::with_eps(2.5, -I, Cut::P2).unwrap();
        let mut r = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..100 {
            let w = random_disc(&mut r, Some(true));
            let g = monodromy_gauge(&fam, w).unwrap();
            assert!((g * fhp_gauge(w).unwrap() - ONE).norm() < 1e-10, "{w}");
        }
    }

    #[test]
    fn holonomy_limits() {
        assert_eq!(holonomy_parameter(2.5), 0.25);
        assert_eq!(holonomy_parameter(3.0), 0.0);
        assert!((holonomy_parameter(3.7) - 0.35).abs() < 1e-15);
        for c in [2.0, 2.5, 3.7] {
            let fam = MonodromyFamily::new(c).unwrap();
            let lim = Complex64::from_polar(1.0, 2.0 * PI * c);
            let errs: Vec<f64> = [0.1, 0.01, 1e-3]
                .iter()
                .map(|&r| (holonomy(&fam, r, 256).unwrap() - lim).norm())
                .collect();
            assert!(errs[0] > errs[1] && errs[1] > errs[2] && errs[2] < 0.02, "{c}: {errs:?}");
        }
    }

    #[test]
    fn loop_integral_is_flux_plus_cut_term() {
        let cfg = QuadConfig::default();
        for (c, cut) in [(2.0, Cut::P1), (2.5, Cut::P1), (3.7, Cut::P1), (2.5, Cut::P2), (3.7, Cut::P2)] {
            let eps = Complex64::from_polar(1.0, 2.0 * PI * c);
            let fam = MonodromyFamily::with_eps(c, eps, cut).unwrap();
            for r in [0.3, 0.2, 0.1] {
                let l = loop_connection_integral(&fam, r, 256).unwrap().value;
                let flux = enclosed_flux(&fam, r, &cfg).unwrap();
                let lead = loop_integral_leading(&fam, r);
                let rest = l + flux - lead;
                assert!(rest.abs() < 5.0 * r.powf(2.0 * c).max(1e-12), "c={c} r={r}: {l} {flux} {lead}");
            }
        }
    }
}
