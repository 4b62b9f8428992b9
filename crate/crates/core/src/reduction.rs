//! SO(3)-invariant connections on R⁴ and pairs `(a, Φ)` on the half-plane.
//!
//! Writing `x = t + rQ` with `Q` a unit imaginary quaternion, an invariant
//! connection has the form `A = ½(Q a + Φ₁ dQ + Φ₂ Q dQ)` with
//! `a = a_t dt + a_r dr` and `Φ = Φ₁ + i(Φ₂ + 1)`. At `Q = i` the four
//! components are
//!
//! ```text
//! A₀ = ½ i a_t,  A₁ = ½ i a_r,  A₂ = (Φ₁ j + Φ₂ k)/2r,  A₃ = (Φ₁ k − Φ₂ j)/2r.
//! ```

use crate::error::{CoreError, Result};
use crate::instanton::{chern2, Duality};
use crate::potentials::{lift_potential, SuperPotential};
use crate::quadrature::{integrate_disc, QuadConfig, QuadResult};
use crate::quaternion::{QOneForm, Quaternion};
use crate::vortex::{chern1, vortex_jet, HyperPoint, Kind, Model, VortexSample};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Tolerance on the components an invariant connection must not have.
pub const SYMMETRY_TOL: f64 = 1e-9;

/// `x = t + r Q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricFrame {
    pub t: f64,
    pub r: f64,
    pub q: Quaternion,
}

impl SymmetricFrame {
    pub fn new(t: f64, r: f64, q: Quaternion) -> Result<Self> {
        if !(r > 0.0) {
            return Err(CoreError::Axis);
        }
        if q.re().abs() > 1e-12 || (q.norm() - 1.0).abs() > 1e-12 {
            return Err(CoreError::InvalidData("Q must be a unit imaginary quaternion".into()));
        }
        Ok(SymmetricFrame { t, r, q })
    }

    pub fn from_point(x: [f64; 4]) -> Result<Self> {
        let r = (x[1] * x[1] + x[2] * x[2] + x[3] * x[3]).sqrt();
        if r < 1e-12 {
            return Err(CoreError::Axis);
        }
        Ok(SymmetricFrame {
            t: x[0],
            r,
            q: Quaternion::new(0.0, x[1] / r, x[2] / r, x[3] / r),
        })
    }

    pub fn point(&self) -> [f64; 4] {
        (Quaternion::real(self.t) + self.q * self.r).to_array()
    }
}

/// `(a_t, a_r, Φ)` with the affine shift kept inside `Φ = Φ₁ + i(Φ₂ + 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedPair {
    pub a_t: f64,
    pub a_r: f64,
    pub phi: Complex64,
}

impl ReducedPair {
    /// The pair of the zero connection.
    pub const TRIVIAL: ReducedPair = ReducedPair {
        a_t: 0.0,
        a_r: 0.0,
        phi: Complex64::new(0.0, 1.0),
    };

    pub fn from_sample(s: &VortexSample) -> Self {
        let h = s.to_model(Model::HalfPlane);
        ReducedPair {
            a_t: h.a[0],
            a_r: h.a[1],
            phi: h.phi,
        }
    }
}

/// Extracts the pair from `A` at `x = (t, r, 0, 0)`, checking the components
/// that invariance forces.
pub fn reduce_connection<A>(a: &A, t: f64, r: f64) -> Result<ReducedPair>
where
    A: Fn([f64; 4]) -> Result<QOneForm>,
{
    if !(r > 0.0) {
        return Err(CoreError::Axis);
    }
    let f = a([t, r, 0.0, 0.0])?.a;
    let a_t = 2.0 * f[0].x1;
    let a_r = 2.0 * f[1].x1;
    let p1 = 2.0 * r * f[2].x2;
    let p2 = 2.0 * r * f[2].x3;
    let expect3 = Quaternion::new(0.0, 0.0, -p2, p1) / (2.0 * r);
    let off = [
        f[0].x2, f[0].x3, f[1].x2, f[1].x3, f[2].x1,
    ]
    .iter()
    .fold((f[3] - expect3).max_abs(), |m, v| m.max(v.abs()));
    let scale = f.iter().map(|q| q.max_abs()).fold(1.0, f64::max);
    if off > SYMMETRY_TOL * scale {
        return Err(CoreError::NotSymmetric(format!("residual {off:e}")));
    }
    Ok(ReducedPair {
        a_t,
        a_r,
        phi: Complex64::new(p1, p2 + 1.0),
    })
}

/// `A = ½(Q a + Φ₁ dQ + Φ₂ Q dQ)` at `x`, for the pair evaluated at `(t, r)`.
pub fn lift_vortex(pair: &ReducedPair, x: [f64; 4]) -> Result<QOneForm> {
    let fr = SymmetricFrame::from_point(x)?;
    let q = fr.q;
    let qc = q.to_array();
    let p1 = pair.phi.re;
    let p2 = pair.phi.im - 1.0;
    let mut a = [Quaternion::ZERO; 4];
    a[0] = q * (0.5 * pair.a_t);
    for k in 1..4 {
        // dQ along dx^k is (e_k − Q Q_k)/r
        let dq = (Quaternion::BASIS[k] - q * qc[k]) / fr.r;
        a[k] = (q * (pair.a_r * qc[k]) + dq * p1 + (q * dq) * p2) * 0.5;
    }
    QOneForm::new(a)
}

/// Yang–Mills–Higgs functional `‖F_a‖² + 2‖d_aΦ‖² + ‖1 − |Φ|²‖²` of the
/// vortex of φ, integrated over the disc model with `d_a = d + i a`.
pub fn reduced_action(phi: &SuperPotential, kind: Kind, cfg: &QuadConfig) -> Result<QuadResult> {
    let theta0 = phi.cut().map_or(0.0, |c| c.start());
    let f = |w: Complex64| -> f64 {
        let p = HyperPoint::disc(w);
        let Ok(j) = vortex_jet(phi, p, kind, 1) else {
            return f64::NAN;
        };
        let omega = p.conformal_factor();
        let curl = j.ay.d(&[0]) - j.ax.d(&[1]);
        let ph = j.phi.value();
        let i = Complex64::new(0.0, 1.0);
        let dx = j.phi.d(&[0]) + i * j.ax.value() * ph;
        let dy = j.phi.d(&[1]) + i * j.ay.value() * ph;
        let pot = 1.0 - ph.norm_sqr();
        curl * curl / omega + 2.0 * (dx.norm_sqr() + dy.norm_sqr()) + pot * pot * omega
    };
    let res = integrate_disc(&f, cfg, theta0)?;
    if !res.value.is_finite() {
        return Err(CoreError::QuadratureNotConverged {
            value: res.value,
            error: res.error,
        });
    }
    Ok(res)
}

/// `(c₂ of the lifted self-dual instanton, c₁ of the vortex)`.
pub fn chern_reduction_check(phi: &SuperPotential, cfg: &QuadConfig) -> Result<(QuadResult, QuadResult)> {
    let rho = lift_potential(phi);
    let c2 = chern2(&rho, Duality::SD, cfg)?;
    let c1 = chern1(phi, cfg, Model::Disc)?;
    Ok((c2, c1))
}
