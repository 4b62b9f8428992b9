//! Quaternions and quaternion-valued 1- and 2-forms on R⁴.
//!
//! 2-forms store the six components in the order (01, 02, 03, 12, 13, 23).
//! Under this layout the Euclidean Hodge star is a signed permutation.

use crate::error::{CoreError, Result};
use serde::{Deserialize, Serialize};
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

/// `w + i·x1 + j·x2 + k·x3`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Quaternion {
    pub w: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);
    /// `1, i, j, k`: the coefficients of `dx = Σ e_μ dx^μ`.
    pub const BASIS: [Quaternion; 4] = [Self::ONE, Self::I, Self::J, Self::K];

    pub const fn new(w: f64, x1: f64, x2: f64, x3: f64) -> Self {
        Quaternion { w, x1, x2, x3 }
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Quaternion::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x1, self.x2, self.x3]
    }

    pub fn real(w: f64) -> Self {
        Quaternion::new(w, 0.0, 0.0, 0.0)
    }

    pub fn conj(self) -> Self {
        Quaternion::new(self.w, -self.x1, -self.x2, -self.x3)
    }

    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Multiplicative inverse; infinite components for zero.
    pub fn inv(self) -> Self {
        self.conj() * (1.0 / self.norm_sqr())
    }

    pub fn re(self) -> f64 {
        self.w
    }

    pub fn im(self) -> Self {
        Quaternion::new(0.0, self.x1, self.x2, self.x3)
    }

    /// Euclidean inner product on R⁴.
    pub fn dot(self, o: Quaternion) -> f64 {
        self.w * o.w + self.x1 * o.x1 + self.x2 * o.x2 + self.x3 * o.x3
    }

    pub fn max_abs(self) -> f64 {
        self.w.abs().max(self.x1.abs()).max(self.x2.abs()).max(self.x3.abs())
    }
}

/// Hamilton product.
pub fn qmul(p: Quaternion, q: Quaternion) -> Quaternion {
    Quaternion::new(
        p.w * q.w - p.x1 * q.x1 - p.x2 * q.x2 - p.x3 * q.x3,
        p.w * q.x1 + p.x1 * q.w + p.x2 * q.x3 - p.x3 * q.x2,
        p.w * q.x2 - p.x1 * q.x3 + p.x2 * q.w + p.x3 * q.x1,
        p.w * q.x3 + p.x1 * q.x2 - p.x2 * q.x1 + p.x3 * q.w,
    )
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, rhs: Quaternion) -> Quaternion {
        qmul(self, rhs)
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, s: f64) -> Quaternion {
        Quaternion::new(self.w * s, self.x1 * s, self.x2 * s, self.x3 * s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl Div<f64> for Quaternion {
    type Output = Quaternion;
    fn div(self, s: f64) -> Quaternion {
        self * (1.0 / s)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w + o.w, self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, o: Quaternion) {
        *self = *self + o;
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w - o.w, self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        self * -1.0
    }
}

/// Real parts up to this size are treated as rounding and zeroed.
pub const IMAGINARY_TOL: f64 = 1e-12;

fn enforce_imaginary(q: Quaternion) -> Result<Quaternion> {
    if q.w.abs() > IMAGINARY_TOL * (1.0 + q.norm()) {
        return Err(CoreError::NotImaginary(q.w));
    }
    Ok(q.im())
}

/// Ordered index pairs μ<ν of the 2-form basis.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Storage slot of the pair (μ, ν) with μ<ν.
pub fn pair_index(mu: usize, nu: usize) -> usize {
    PAIRS
        .iter()
        .position(|&p| p == (mu, nu))
        .expect("pair must satisfy mu < nu < 4")
}

/// Imaginary-quaternion coefficients of `Σ a_μ dx^μ`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct QOneForm {
    pub a: [Quaternion; 4],
}

impl QOneForm {
    pub const ZERO: QOneForm = QOneForm {
        a: [Quaternion::ZERO; 4],
    };

    /// Checked constructor: rejects components with a real part above tolerance.
    pub fn new(a: [Quaternion; 4]) -> Result<Self> {
        let mut out = [Quaternion::ZERO; 4];
        for (o, q) in out.iter_mut().zip(a) {
            *o = enforce_imaginary(q)?;
        }
        Ok(QOneForm { a: out })
    }

    /// Drops real parts without checking.
    pub fn project(a: [Quaternion; 4]) -> Self {
        QOneForm {
            a: a.map(Quaternion::im),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.a.iter().map(|q| q.max_abs()).fold(0.0, f64::max)
    }

    pub fn sub(&self, o: &QOneForm) -> QOneForm {
        QOneForm {
            a: std::array::from_fn(|m| self.a[m] - o.a[m]),
        }
    }
}

/// Imaginary-quaternion coefficients of `Σ_{μ<ν} f_μν dx^μ∧dx^ν`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct QTwoForm {
    pub f: [Quaternion; 6],
}

impl QTwoForm {
    pub const ZERO: QTwoForm = QTwoForm {
        f: [Quaternion::ZERO; 6],
    };

    pub fn new(f: [Quaternion; 6]) -> Result<Self> {
        let mut out = [Quaternion::ZERO; 6];
        for (o, q) in out.iter_mut().zip(f) {
            *o = enforce_imaginary(q)?;
        }
        Ok(QTwoForm { f: out })
    }

    pub fn project(f: [Quaternion; 6]) -> Self {
        QTwoForm { f: f.map(Quaternion::im) }
    }

    /// Euclidean Hodge star.
    pub fn star(&self) -> QTwoForm {
        QTwoForm {
            f: hodge_star(&self.f),
        }
    }

    pub fn add(&self, o: &QTwoForm) -> QTwoForm {
        QTwoForm {
            f: std::array::from_fn(|i| self.f[i] + o.f[i]),
        }
    }

    pub fn sub(&self, o: &QTwoForm) -> QTwoForm {
        QTwoForm {
            f: std::array::from_fn(|i| self.f[i] - o.f[i]),
        }
    }

    pub fn scale(&self, s: f64) -> QTwoForm {
        QTwoForm {
            f: self.f.map(|q| q * s),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.f.iter().map(|q| q.max_abs()).fold(0.0, f64::max)
    }
}

/// Hodge star on raw 2-form coefficients (any quaternion values).
pub fn hodge_star(f: &[Quaternion; 6]) -> [Quaternion; 6] {
    [f[5], -f[4], f[3], f[2], -f[1], f[0]]
}

/// Wedge product of two quaternion-valued 1-forms with the product taken in order.
pub fn wedge(a: &[Quaternion; 4], b: &[Quaternion; 4]) -> [Quaternion; 6] {
    PAIRS.map(|(m, n)| a[m] * b[n] - a[n] * b[m])
}

/// `dx = dx⁰ + i dx¹ + j dx² + k dx³`.
pub fn dx() -> [Quaternion; 4] {
    Quaternion::BASIS
}

/// `dx̄ = dx⁰ − i dx¹ − j dx² − k dx³`.
pub fn dx_bar() -> [Quaternion; 4] {
    Quaternion::BASIS.map(Quaternion::conj)
}

/// Splits `F` into its self-dual and anti-self-dual parts `(F⁺, F⁻)`.
pub fn sd_asd_split(f: &QTwoForm) -> (QTwoForm, QTwoForm) {
    let s = f.star();
    (f.add(&s).scale(0.5), f.sub(&s).scale(0.5))
}

/// Pointwise curvature density `|F|² = Σ_{μ<ν} |f_μν|²`.
///
/// With this normalization `|d x̄∧dx|² = 24` and the instanton number is
/// `(1/4π²)∫|F|²`.
pub fn density(f: &QTwoForm) -> f64 {
    f.f.iter().map(|q| q.norm_sqr()).sum()
}
