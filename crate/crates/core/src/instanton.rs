//! Four-dimensional connections from a positive super-potential ρ.
//!
//! With `L = log ρ` and `G = Σ ∂_μL e_μ` (`e = (1, i, j, k)`), the
//! self-dual connection is `A_ν = −½ Im(Ḡ e_ν)` and the anti-self-dual one
//! `A_ν = −½ Im(G ē_ν)`. Connections are carried as quaternion-valued Taylor
//! series, so curvature `F_μν = ∂_μA_ν − ∂_νA_μ + [A_μ, A_ν]` is exact.

use crate::error::{CoreError, Result};
use crate::potentials::{SuperPotential, POLE_EXCLUSION};
use crate::quadrature::{integrate_ball4, QuadConfig, QuadResult};
use crate::quaternion::{density, sd_asd_split, QOneForm, QTwoForm, Quaternion, PAIRS};
use crate::taylor::Taylor;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Duality {
    SD,
    ASD,
}

impl Duality {
    /// Sign of the second Chern number of the connection.
    pub fn sign(self) -> f64 {
        match self {
            Duality::SD => 1.0,
            Duality::ASD => -1.0,
        }
    }
}

/// A quaternion whose components are Taylor series in the coordinates of R⁴.
#[derive(Debug, Clone, Copy)]
pub struct QJet {
    pub q: [Taylor<f64>; 4],
}

impl QJet {
    pub fn constant(order: usize, q: Quaternion) -> Self {
        let a = q.to_array();
        QJet {
            q: std::array::from_fn(|m| Taylor::constant(4, order, a[m])),
        }
    }

    /// `x = x⁰ + i x¹ + j x² + k x³` around `x`.
    pub fn coordinate(order: usize, x: [f64; 4]) -> Self {
        QJet {
            q: std::array::from_fn(|m| Taylor::variable(4, order, m, x[m])),
        }
    }

    pub fn from_real(t: Taylor<f64>) -> Self {
        let z = t * 0.0;
        QJet { q: [t, z, z, z] }
    }

    pub fn value(&self) -> Quaternion {
        Quaternion::from_array(std::array::from_fn(|m| self.q[m].value()))
    }

    pub fn order(&self) -> usize {
        self.q[0].order()
    }

    pub fn partial(&self, v: usize) -> Self {
        QJet {
            q: self.q.map(|t| t.partial(v)),
        }
    }

    pub fn conj(&self) -> Self {
        QJet {
            q: [self.q[0], -self.q[1], -self.q[2], -self.q[3]],
        }
    }

    pub fn im(&self) -> Self {
        let z = self.q[0] * 0.0;
        QJet {
            q: [z, self.q[1], self.q[2], self.q[3]],
        }
    }

    pub fn norm_sqr(&self) -> Taylor<f64> {
        self.q[0] * self.q[0] + self.q[1] * self.q[1] + self.q[2] * self.q[2] + self.q[3] * self.q[3]
    }

    pub fn scale(&self, s: &Taylor<f64>) -> Self {
        QJet {
            q: self.q.map(|t| t * *s),
        }
    }

    pub fn scale_f(&self, s: f64) -> Self {
        QJet {
            q: self.q.map(|t| t * s),
        }
    }

    pub fn inv(&self) -> Self {
        self.conj().scale(&self.norm_sqr().recip())
    }

    /// Right product with a constant quaternion.
    pub fn mul_q(&self, e: Quaternion) -> Self {
        *self * QJet::constant(self.order(), e)
    }
}

impl Add for QJet {
    type Output = QJet;
    fn add(self, o: QJet) -> QJet {
        QJet {
            q: std::array::from_fn(|m| self.q[m] + o.q[m]),
        }
    }
}

impl Sub for QJet {
    type Output = QJet;
    fn sub(self, o: QJet) -> QJet {
        QJet {
            q: std::array::from_fn(|m| self.q[m] - o.q[m]),
        }
    }
}

impl Neg for QJet {
    type Output = QJet;
    fn neg(self) -> QJet {
        QJet { q: self.q.map(|t| -t) }
    }
}

impl Mul for QJet {
    type Output = QJet;
    fn mul(self, o: QJet) -> QJet {
        let [a0, a1, a2, a3] = self.q;
        let [b0, b1, b2, b3] = o.q;
        QJet {
            q: [
                a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
                a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
                a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
                a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
            ],
        }
    }
}

/// A connection 1-form as series: `A = Σ A_μ dx^μ`.
#[derive(Debug, Clone, Copy)]
pub struct ConnectionJet {
    pub a: [QJet; 4],
}

impl ConnectionJet {
    pub fn value(&self) -> QOneForm {
        QOneForm::project(std::array::from_fn(|m| self.a[m].value()))
    }

    /// `F_μν = ∂_μA_ν − ∂_νA_μ + A_μA_ν − A_νA_μ`; needs order ≥ 1.
    pub fn curvature(&self) -> QTwoForm {
        let a: [Quaternion; 4] = std::array::from_fn(|m| self.a[m].value());
        let f = PAIRS.map(|(m, n)| {
            let d = self.a[n].partial(m).value() - self.a[m].partial(n).value();
            d + a[m] * a[n] - a[n] * a[m]
        });
        QTwoForm::project(f)
    }
}

/// Connection series of the ansatz to the given order (needs ρ to order + 1).
pub fn ansatz_jet(rho: &SuperPotential, x: [f64; 4], d: Duality, order: usize) -> Result<ConnectionJet> {
    let jet = rho.jet4(x, order + 1)?;
    if !(jet.value() > 0.0) {
        return Err(CoreError::OutsideDomain(format!("ρ({x:?}) = {}", jet.value())));
    }
    let l = jet.taylor.ln();
    let g = QJet {
        q: std::array::from_fn(|m| l.partial(m)),
    };
    let a = Quaternion::BASIS.map(|e| {
        let prod = match d {
            Duality::SD => g.conj().mul_q(e),
            Duality::ASD => g.mul_q(e.conj()),
        };
        prod.im().scale_f(-0.5)
    });
    Ok(ConnectionJet { a })
}

pub fn ansatz_connection(rho: &SuperPotential, x: [f64; 4], d: Duality) -> Result<QOneForm> {
    Ok(ansatz_jet(rho, x, d, 0)?.value())
}

pub fn curvature(rho: &SuperPotential, x: [f64; 4], d: Duality) -> Result<QTwoForm> {
    Ok(ansatz_jet(rho, x, d, 1)?.curvature())
}

/// `(|F⁺|², |F⁻|²)` of the ansatz connection.
pub fn curvature_densities(rho: &SuperPotential, x: [f64; 4], d: Duality) -> Result<(f64, f64)> {
    let (p, m) = sd_asd_split(&curvature(rho, x, d)?);
    Ok((density(&p), density(&m)))
}

/// Singular points a potential declares for quadrature exclusion.
pub fn singular_points(rho: &SuperPotential) -> Vec<[f64; 4]> {
    match rho {
        SuperPotential::Thooft4 { centers, .. } => centers.iter().map(|c| c.to_array()).collect(),
        _ => vec![],
    }
}

/// `c₂ = ±(−1/16π²) ∫ ΔΔ log ρ dμ`, positive for self-dual connections.
pub fn chern2(rho: &SuperPotential, d: Duality, cfg: &QuadConfig) -> Result<QuadResult> {
    let sing = singular_points(rho);
    let f = |x: [f64; 4]| crate::potentials::biharmonic_log4(rho, x).unwrap_or(f64::NAN);
    let res = integrate_ball4(&f, cfg, &sing)?;
    if !res.value.is_finite() {
        return Err(CoreError::QuadratureNotConverged {
            value: res.value,
            error: res.error,
        });
    }
    Ok(res.scale(-d.sign() / (16.0 * PI * PI)))
}

/// `g(A)_μ = Im(g A_μ g⁻¹ − ∂_μg g⁻¹)` with `g` normalized to unit length.
///
/// `g` is given as a function of the coordinate series so that `∂g` is exact.
pub fn gauge_transform4<G>(a: &ConnectionJet, g: G, x: [f64; 4]) -> Result<ConnectionJet>
where
    G: Fn(&QJet) -> Result<QJet>,
{
    let order = a.a[0].order();
    let xs = QJet::coordinate(order + 1, x);
    let graw = g(&xs)?;
    let n = graw.value().norm();
    if n < 1e-9 {
        return Err(CoreError::SingularGauge(n));
    }
    let gu = graw.scale(&graw.norm_sqr().powf(-0.5));
    let ginv = gu.conj();
    let trunc = |q: &QJet| QJet {
        q: q.q.map(|t| t.truncate(order)),
    };
    let gt = trunc(&gu);
    let git = trunc(&ginv);
    let out = std::array::from_fn(|m| {
        let dg = gu.partial(m);
        (gt * a.a[m] * git - dg * git).im()
    });
    Ok(ConnectionJet { a: out })
}

/// Real ADHM data: distinct centers on the real axis with positive scales.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdhmData {
    pub b: Vec<f64>,
    pub lambda: Vec<f64>,
}

impl AdhmData {
    pub fn new(b: Vec<f64>, lambda: Vec<f64>) -> Result<Self> {
        if b.len() != lambda.len() {
            return Err(CoreError::InvalidData("b and λ differ in length".into()));
        }
        for (i, x) in b.iter().enumerate() {
            if b[..i].iter().any(|y| (x - y).abs() < 1e-12) {
                return Err(CoreError::InvalidData(format!("repeated center {x}")));
            }
        }
        if let Some(l) = lambda.iter().find(|l| !(**l > 0.0) || !l.is_finite()) {
            return Err(CoreError::InvalidData(format!("scale {l} must be positive")));
        }
        Ok(AdhmData { b, lambda })
    }

    pub fn k(&self) -> usize {
        self.b.len()
    }

    /// The matching 't Hooft potential `1 + Σ λᵢ²/|x − bᵢ|²`.
    pub fn potential(&self) -> SuperPotential {
        SuperPotential::Thooft4 {
            centers: self.b.iter().map(|&b| Quaternion::real(b)).collect(),
            scales: self.lambda.clone(),
        }
    }
}

/// Pullback connection `A = Im(Σ f̄ᵢ df_i)/|f|²` of `f = (1, λᵢ (x − bᵢ)⁻¹)`.
pub fn adhm_jet(data: &AdhmData, x: [f64; 4], order: usize) -> Result<ConnectionJet> {
    let xs = QJet::coordinate(order + 1, x);
    let mut fs = Vec::with_capacity(data.k());
    for (b, l) in data.b.iter().zip(&data.lambda) {
        let y = xs - QJet::constant(order + 1, Quaternion::real(*b));
        if y.value().norm() < POLE_EXCLUSION * 1e-9 {
            return Err(CoreError::Pole(format!("x = {b}")));
        }
        fs.push(y.inv().scale_f(*l));
    }
    let mut norm = Taylor::constant(4, order, 1.0);
    for f in &fs {
        norm = norm + f.norm_sqr().truncate(order);
    }
    let inv_norm = norm.recip();
    let a = std::array::from_fn(|m| {
        let mut s = QJet::constant(order, Quaternion::ZERO);
        for f in &fs {
            let ft = QJet {
                q: f.q.map(|t| t.truncate(order)),
            };
            s = s + ft.conj() * f.partial(m);
        }
        s.im().scale(&inv_norm)
    });
    Ok(ConnectionJet { a })
}

pub fn adhm_connection(data: &AdhmData, x: [f64; 4]) -> Result<QOneForm> {
    Ok(adhm_jet(data, x, 0)?.value())
}

/// Curvature of a pointwise connection by Richardson-refined central differences.
pub fn fd_curvature<A>(conn: &A, x: [f64; 4], h: f64) -> Result<QTwoForm>
where
    A: Fn([f64; 4]) -> Result<QOneForm>,
{
    let at = |m: usize, s: f64| -> Result<QOneForm> {
        let mut y = x;
        y[m] += s;
        conn(y)
    };
    let mut da = [[Quaternion::ZERO; 4]; 4];
    for (m, row) in da.iter_mut().enumerate() {
        let d = |h: f64| -> Result<[Quaternion; 4]> {
            let (p, q) = (at(m, h)?, at(m, -h)?);
            Ok(std::array::from_fn(|n| (p.a[n] - q.a[n]) / (2.0 * h)))
        };
        let (d1, d2) = (d(h)?, d(h / 2.0)?);
        for n in 0..4 {
            row[n] = d2[n] + (d2[n] - d1[n]) / 3.0;
        }
    }
    let a = conn(x)?.a;
    Ok(QTwoForm::project(PAIRS.map(|(m, n)| {
        da[m][n] - da[n][m] + a[m] * a[n] - a[n] * a[m]
    })))
}
