//! Super-potential families and their jets.
//!
//! Four-dimensional potentials ρ live on R⁴; hyperbolic potentials φ live on
//! the upper half-plane (coordinates `t + i r`) or the unit disc (`w`), and
//! can be evaluated in either model through the Cayley map. Built-in families
//! are expanded with exact Taylor arithmetic; black-box fields fall back to
//! Richardson-refined central differences up to second order.

use crate::error::{CoreError, Result};
use crate::quaternion::Quaternion;
use crate::taylor::{Taylor, MAX_ORDER};
use crate::vortex::{HyperPoint, Model};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

pub type CTaylor = Taylor<Complex64>;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Highest order the finite-difference fallback supports.
pub const GENERIC_MAX_ORDER: usize = 2;

/// Default exclusion radius around poles for quadrature callers.
pub const POLE_EXCLUSION: f64 = 1e-3;

/// Branch cut for non-integer powers of the disc coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cut {
    /// Cut along the positive real axis, `arg w ∈ (0, 2π)`.
    P1,
    /// Cut along the negative real axis, `arg w ∈ (−π, π)`.
    P2,
}

impl Cut {
    /// Angle at which the cut sits; the branch covers `(start, start + 2π)`.
    pub fn start(self) -> f64 {
        match self {
            Cut::P1 => 0.0,
            Cut::P2 => -PI,
        }
    }

    pub fn arg(self, w: Complex64) -> f64 {
        let a = w.arg();
        match self {
            Cut::P1 if a < 0.0 => a + 2.0 * PI,
            _ => a,
        }
    }

    pub fn ln(self, w: Complex64) -> Complex64 {
        Complex64::new(w.norm().ln(), self.arg(w))
    }

    pub fn on_cut(self, w: Complex64) -> bool {
        let tol = 1e-13 * w.norm().max(1e-300);
        w.im.abs() <= tol
            && match self {
                Cut::P1 => w.re >= 0.0,
                Cut::P2 => w.re <= 0.0,
            }
    }
}

/// A black-box scalar field on R⁴.
#[derive(Clone)]
pub struct GenericField4 {
    pub name: String,
    pub f: Arc<dyn Fn([f64; 4]) -> f64 + Send + Sync>,
}

/// A black-box scalar field on one hyperbolic model.
#[derive(Clone)]
pub struct GenericField2 {
    pub name: String,
    pub model: Model,
    pub f: Arc<dyn Fn(Complex64) -> f64 + Send + Sync>,
}

impl fmt::Debug for GenericField4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GenericField4({})", self.name)
    }
}

impl fmt::Debug for GenericField2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GenericField2({}, {:?})", self.name, self.model)
    }
}

/// Positive scalar fields feeding the ansatz.
#[derive(Debug, Clone)]
pub enum SuperPotential {
    /// `1 + Σ λᵢ² / |x − aᵢ|²` on R⁴.
    Thooft4 {
        centers: Vec<Quaternion>,
        scales: Vec<f64>,
    },
    /// `c0 + c2 |x|²`; harmonic only when `c2 = 0`. Used as a control.
    Quadric { c0: f64, c2: f64 },
    /// `Im(z − Σ qᵢ / (z − bᵢ))` on the half-plane, `qᵢ > 0`, `bᵢ` real.
    HalfPlaneSym { centers: Vec<f64>, weights: Vec<f64> },
    /// `(1 − |w|^{2c}) / |1 − ε w^c|²` on the disc cut along `cut`.
    DiscFamily { c: f64, eps: Complex64, cut: Cut },
    /// `(1 − |w|⁵) / |1 + i w^{5/2}|²` on the disc cut along the positive axis.
    Fhp1,
    /// `(1 − |w|⁵) / |1 − w^{5/2}|²` on the disc cut along the negative axis.
    Fhp2,
    /// `ρ(t + rQ) = φ(t + i r) / r` for a hyperbolic potential φ.
    Lifted(Box<SuperPotential>),
    Generic4(GenericField4),
    Generic2(GenericField2),
}

/// Where a potential lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    R4,
    Hyperbolic(Model),
}

/// Partial derivatives of a field on R⁴ at a point.
#[derive(Debug, Clone, Copy)]
pub struct Jet4 {
    pub x: [f64; 4],
    pub taylor: Taylor<f64>,
    /// Estimated absolute error of the derivatives; zero for analytic jets.
    pub error: f64,
}

impl Jet4 {
    pub fn value(&self) -> f64 {
        self.taylor.value()
    }

    pub fn order(&self) -> usize {
        self.taylor.order()
    }

    pub fn d(&self, vars: &[usize]) -> f64 {
        self.taylor.d(vars)
    }

    pub fn gradient(&self) -> [f64; 4] {
        std::array::from_fn(|m| self.taylor.d(&[m]))
    }

    pub fn hessian(&self) -> [[f64; 4]; 4] {
        std::array::from_fn(|m| std::array::from_fn(|n| self.taylor.d(&[m, n])))
    }

    /// `Δ = −Σ ∂²_ν`.
    pub fn laplacian(&self) -> f64 {
        -(0..4).map(|m| self.taylor.d(&[m, m])).sum::<f64>()
    }
}

/// Partial derivatives of a field on a hyperbolic model at a point.
#[derive(Debug, Clone, Copy)]
pub struct Jet2 {
    pub point: HyperPoint,
    pub taylor: Taylor<f64>,
    pub error: f64,
}

impl Jet2 {
    pub fn value(&self) -> f64 {
        self.taylor.value()
    }

    pub fn order(&self) -> usize {
        self.taylor.order()
    }

    pub fn d(&self, vars: &[usize]) -> f64 {
        self.taylor.d(vars)
    }

    /// `Δ_h = −Ω⁻¹(∂²_x + ∂²_y)` where `h = Ω (dx² + dy²)`.
    pub fn laplacian_h(&self) -> f64 {
        -(self.taylor.d(&[0, 0]) + self.taylor.d(&[1, 1])) / self.point.conformal_factor()
    }
}

/// Complex coordinate `x + i y` of a model as a series in `(x, y)`.
pub fn coordinate_series(p: Complex64, order: usize) -> CTaylor {
    Taylor::variable(2, order, 0, Complex64::new(p.re, 0.0))
        + Taylor::variable(2, order, 1, Complex64::new(p.im, 0.0)).mul_i()
}

/// `w = (i − z)/(i + z)` on series.
pub fn half_to_disc_series(z: &CTaylor) -> CTaylor {
    (-*z + I) / (*z + I)
}

/// `z = i (1 − w)/(1 + w)` on series.
pub fn disc_to_half_series(w: &CTaylor) -> CTaylor {
    ((-*w + ONE) / (*w + ONE)) * I
}

fn is_integer(c: f64) -> bool {
    (c - c.round()).abs() < 1e-15 * c.abs().max(1.0)
}

/// `w^c` on the branch fixed by `cut` (exact repeated product for integer `c > 0`).
pub(crate) fn power_series(w: &CTaylor, c: f64, cut: Cut) -> Result<CTaylor> {
    let w0 = w.value();
    if is_integer(c) && c > 0.0 {
        let n = c.round() as u32;
        let mut out = *w;
        for _ in 1..n {
            out = out * *w;
        }
        return Ok(out);
    }
    if w0.norm() == 0.0 {
        return Err(CoreError::Pole(format!("w = 0 for w^{c}")));
    }
    if cut.on_cut(w0) {
        return Err(CoreError::BranchCut(format!("{w0}")));
    }
    Ok((w.ln_with(cut.ln(w0)) * Complex64::new(c, 0.0)).exp())
}

/// `(1 − u ū) / ((1 − a u)(1 − ā ū))` for the disc families.
fn disc_quotient(u: &CTaylor, a: Complex64) -> CTaylor {
    let ub = u.conj();
    let num = -(*u * ub) + ONE;
    let den = (-(*u * a) + ONE) * (-(ub * a.conj()) + ONE);
    num / den
}

impl SuperPotential {
    /// 't Hooft potential; scales must be positive and as many as centers.
    pub fn thooft(centers: Vec<Quaternion>, scales: Vec<f64>) -> Result<Self> {
        if centers.len() != scales.len() {
            return Err(CoreError::InvalidData(
                "centers and scales differ in length".into(),
            ));
        }
        if let Some(s) = scales.iter().find(|s| !(**s > 0.0) || !s.is_finite()) {
            return Err(CoreError::InvalidData(format!("scale {s} must be positive")));
        }
        Ok(SuperPotential::Thooft4 { centers, scales })
    }

    /// `1 + λ²/|x − a|²` with `a` real.
    pub fn basic_instanton(a: f64, lambda: f64) -> Result<Self> {
        Self::thooft(vec![Quaternion::real(a)], vec![lambda])
    }

    /// Symmetric 't Hooft potential on the half-plane from centers and weights `qᵢ = λᵢ²`.
    pub fn halfplane(centers: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if centers.len() != weights.len() {
            return Err(CoreError::InvalidData(
                "centers and weights differ in length".into(),
            ));
        }
        if let Some(q) = weights.iter().find(|q| !(**q > 0.0) || !q.is_finite()) {
            return Err(CoreError::InvalidData(format!("weight {q} must be positive")));
        }
        for (i, a) in centers.iter().enumerate() {
            if centers[..i].iter().any(|b| (a - b).abs() < 1e-12) {
                return Err(CoreError::InvalidData(format!("repeated center {a}")));
            }
        }
        Ok(SuperPotential::HalfPlaneSym { centers, weights })
    }

    /// Half-plane potential whose Higgs field vanishes exactly at `zeros`.
    ///
    /// The Higgs zeros are the roots of `h'(z) = 1 + Σ qᵢ/(z − bᵢ)²`. The
    /// starting guess `bᵢ = Re zᵢ`, `qᵢ = (Im zᵢ)²` is exact for one zero;
    /// Newton's method corrects it for several.
    pub fn halfplane_from_zeros(zeros: &[Complex64]) -> Result<Self> {
        if let Some(z) = zeros.iter().find(|z| !(z.im > 0.0)) {
            return Err(CoreError::OutsideDomain(format!("zero {z} not in upper half-plane")));
        }
        let (b, q) = solve_thooft_data(zeros)?;
        Self::halfplane(b, q)
    }

    pub fn disc_family(c: f64, eps: Complex64, cut: Cut) -> Result<Self> {
        if c == 0.0 || !c.is_finite() {
            return Err(CoreError::InvalidData("c must be nonzero and finite".into()));
        }
        if (eps.norm() - 1.0).abs() > 1e-12 {
            return Err(CoreError::InvalidData("|ε| must be 1".into()));
        }
        Ok(SuperPotential::DiscFamily { c, eps, cut })
    }

    pub fn domain(&self) -> Domain {
        match self {
            SuperPotential::Thooft4 { .. }
            | SuperPotential::Quadric { .. }
            | SuperPotential::Lifted(_)
            | SuperPotential::Generic4(_) => Domain::R4,
            SuperPotential::HalfPlaneSym { .. } => Domain::Hyperbolic(Model::HalfPlane),
            SuperPotential::DiscFamily { .. } | SuperPotential::Fhp1 | SuperPotential::Fhp2 => {
                Domain::Hyperbolic(Model::Disc)
            }
            SuperPotential::Generic2(g) => Domain::Hyperbolic(g.model),
        }
    }

    /// Whether the family is harmonic by construction.
    pub fn is_harmonic(&self) -> bool {
        match self {
            SuperPotential::Quadric { c2, .. } => *c2 == 0.0,
            SuperPotential::Generic4(_) | SuperPotential::Generic2(_) => false,
            SuperPotential::Lifted(inner) => inner.is_harmonic(),
            _ => true,
        }
    }

    /// Branch cut of a disc family, if any.
    pub fn cut(&self) -> Option<Cut> {
        match self {
            SuperPotential::DiscFamily { c, cut, .. } if !is_integer(*c) => Some(*cut),
            SuperPotential::Fhp1 => Some(Cut::P1),
            SuperPotential::Fhp2 => Some(Cut::P2),
            _ => None,
        }
    }

    /// Evaluates a hyperbolic family on a series of its native coordinate.
    fn eval_native(&self, zeta: &CTaylor) -> Result<CTaylor> {
        match self {
            SuperPotential::HalfPlaneSym { centers, weights } => {
                let z0 = zeta.value();
                let mut h = *zeta;
                for (b, q) in centers.iter().zip(weights) {
                    if (z0 - b).norm() < 1e-300 {
                        return Err(CoreError::Pole(format!("z = {b}")));
                    }
                    h = h - (*zeta - Complex64::new(*b, 0.0)).recip() * Complex64::new(*q, 0.0);
                }
                Ok(h.im().to_complex())
            }
            SuperPotential::DiscFamily { c, eps, cut } => {
                let u = power_series(zeta, *c, *cut)?;
                Ok(disc_quotient(&u, *eps).re().to_complex())
            }
            SuperPotential::Fhp1 => {
                let u = power_series(zeta, 2.5, Cut::P1)?;
                Ok(disc_quotient(&u, -I).re().to_complex())
            }
            SuperPotential::Fhp2 => {
                let u = power_series(zeta, 2.5, Cut::P2)?;
                Ok(disc_quotient(&u, ONE).re().to_complex())
            }
            _ => unreachable!("eval_native on a non-hyperbolic family"),
        }
    }

    /// Series of a hyperbolic potential given the coordinate series `zeta` of `model`.
    fn eval_hyperbolic(&self, zeta: &CTaylor, model: Model) -> Result<CTaylor> {
        let native = match self.domain() {
            Domain::Hyperbolic(m) => m,
            Domain::R4 => {
                return Err(CoreError::InvalidData(
                    "four-dimensional potential used as a hyperbolic one".into(),
                ))
            }
        };
        let z = match (model, native) {
            (a, b) if a == b => *zeta,
            (Model::HalfPlane, Model::Disc) => half_to_disc_series(zeta),
            (Model::Disc, Model::HalfPlane) => disc_to_half_series(zeta),
            _ => unreachable!(),
        };
        self.eval_native(&z)
    }

    /// Value of a hyperbolic potential.
    pub fn value2(&self, p: HyperPoint) -> Result<f64> {
        Ok(self.jet2(p, 0)?.value())
    }

    /// Value of a four-dimensional potential.
    pub fn value4(&self, x: [f64; 4]) -> Result<f64> {
        Ok(self.jet4(x, 0)?.value())
    }

    /// Jet of a hyperbolic potential in the coordinates of `p.model`.
    pub fn jet2(&self, p: HyperPoint, order: usize) -> Result<Jet2> {
        p.validate()?;
        if order > MAX_ORDER {
            return Err(CoreError::OrderUnsupported {
                requested: order,
                max: MAX_ORDER,
            });
        }
        if let SuperPotential::Generic2(g) = self {
            return generic_jet2(g, p, order);
        }
        let zeta = coordinate_series(p.coord, order);
        let phi = self.eval_hyperbolic(&zeta, p.model)?.re();
        if !(phi.value() > 0.0) {
            return Err(CoreError::OutsideDomain(format!(
                "potential not positive at {} (value {})",
                p.coord,
                phi.value()
            )));
        }
        Ok(Jet2 {
            point: p,
            taylor: phi,
            error: 0.0,
        })
    }

    /// `∂_ζ log φ` as a series of the given order in the coordinates of `p.model`.
    pub fn log_gradient(&self, p: HyperPoint, order: usize) -> Result<CTaylor> {
        let jet = self.jet2(p, order + 1)?;
        Ok(complex_gradient(&jet.taylor.ln()))
    }

    /// Jet of a four-dimensional potential; hyperbolic families are lifted.
    pub fn jet4(&self, x: [f64; 4], order: usize) -> Result<Jet4> {
        if order > MAX_ORDER {
            return Err(CoreError::OrderUnsupported {
                requested: order,
                max: MAX_ORDER,
            });
        }
        let vars: [Taylor<f64>; 4] = std::array::from_fn(|m| Taylor::variable(4, order, m, x[m]));
        let taylor = match self {
            SuperPotential::Thooft4 { centers, scales } => {
                let mut rho = Taylor::constant(4, order, 1.0);
                for (a, l) in centers.iter().zip(scales) {
                    let a = a.to_array();
                    let d2: f64 = (0..4).map(|m| (x[m] - a[m]).powi(2)).sum();
                    if d2 < 1e-300 {
                        return Err(CoreError::Pole(format!("{a:?}")));
                    }
                    let mut s = Taylor::constant(4, order, 0.0);
                    for m in 0..4 {
                        let y = vars[m] - a[m];
                        s = s + y * y;
                    }
                    rho = rho + s.recip() * (l * l);
                }
                rho
            }
            SuperPotential::Quadric { c0, c2 } => {
                let mut s = Taylor::constant(4, order, *c0);
                for v in &vars {
                    s = s + *v * *v * *c2;
                }
                s
            }
            SuperPotential::Lifted(inner) => return inner.lifted_jet4(x, order),
            SuperPotential::Generic4(g) => return generic_jet4(g, x, order),
            _ => return self.lifted_jet4(x, order),
        };
        Ok(Jet4 {
            x,
            taylor,
            error: 0.0,
        })
    }

    /// `ρ = φ(t + i r)/r` with `t = x⁰`, `r = |(x¹, x², x³)|`.
    fn lifted_jet4(&self, x: [f64; 4], order: usize) -> Result<Jet4> {
        let r0 = (x[1] * x[1] + x[2] * x[2] + x[3] * x[3]).sqrt();
        if r0 < 1e-12 {
            return Err(CoreError::Axis);
        }
        if let SuperPotential::Generic2(_) = self {
            return Err(CoreError::OrderUnsupported {
                requested: order,
                max: 0,
            });
        }
        let vars: [Taylor<f64>; 4] = std::array::from_fn(|m| Taylor::variable(4, order, m, x[m]));
        let r = (vars[1] * vars[1] + vars[2] * vars[2] + vars[3] * vars[3]).sqrt();
        let z = vars[0].to_complex() + r.to_complex().mul_i();
        let native = match self.domain() {
            Domain::Hyperbolic(m) => m,
            Domain::R4 => return Err(CoreError::InvalidData("lift of a 4D potential".into())),
        };
        let zeta = match native {
            Model::HalfPlane => z,
            Model::Disc => half_to_disc_series(&z),
        };
        if native == Model::Disc && zeta.value().norm() >= 1.0 {
            return Err(CoreError::OutsideDomain(format!("{x:?}")));
        }
        let phi = self.eval_native(&zeta)?.re();
        Ok(Jet4 {
            x,
            taylor: phi / r,
            error: 0.0,
        })
    }

    /// Descriptor `{family, params}` for JSON round trips.
    pub fn to_spec(&self) -> Result<PotentialSpec> {
        let (family, params) = match self {
            SuperPotential::Thooft4 { centers, scales } => (
                "thooft4",
                json!({"centers": centers.iter().map(|q| q.to_array()).collect::<Vec<_>>(), "scales": scales}),
            ),
            SuperPotential::Quadric { c0, c2 } => ("quadric", json!({"c0": c0, "c2": c2})),
            SuperPotential::HalfPlaneSym { centers, weights } => (
                "halfplane-sym",
                json!({"centers": centers, "weights": weights}),
            ),
            SuperPotential::DiscFamily { c, eps, cut } => (
                "disc-family",
                json!({"c": c, "eps": [eps.re, eps.im], "cut": cut}),
            ),
            SuperPotential::Fhp1 => ("fhp1", Value::Null),
            SuperPotential::Fhp2 => ("fhp2", Value::Null),
            SuperPotential::Lifted(inner) => {
                ("lifted", json!({"potential": inner.to_spec()?}))
            }
            SuperPotential::Generic4(g) => ("generic", json!({"name": g.name})),
            SuperPotential::Generic2(g) => ("generic", json!({"name": g.name})),
        };
        Ok(PotentialSpec {
            family: family.to_string(),
            params,
        })
    }

    pub fn from_spec(spec: &PotentialSpec) -> Result<Self> {
        let p = &spec.params;
        let bad = |e: serde_json::Error| CoreError::InvalidData(format!("{}: {e}", spec.family));
        match spec.family.as_str() {
            "thooft4" => {
                #[derive(Deserialize)]
                struct P {
                    centers: Vec<[f64; 4]>,
                    scales: Vec<f64>,
                }
                let p: P = serde_json::from_value(p.clone()).map_err(bad)?;
                Self::thooft(
                    p.centers.into_iter().map(Quaternion::from_array).collect(),
                    p.scales,
                )
            }
            "quadric" => {
                #[derive(Deserialize)]
                struct P {
                    c0: f64,
                    c2: f64,
                }
                let p: P = serde_json::from_value(p.clone()).map_err(bad)?;
                Ok(SuperPotential::Quadric { c0: p.c0, c2: p.c2 })
            }
            "halfplane-sym" => {
                #[derive(Deserialize)]
                struct P {
                    #[serde(default)]
                    zeros: Option<Vec<[f64; 2]>>,
                    #[serde(default)]
                    centers: Option<Vec<f64>>,
                    #[serde(default)]
                    weights: Option<Vec<f64>>,
                }
                let p: P = serde_json::from_value(p.clone()).map_err(bad)?;
                match (p.zeros, p.centers, p.weights) {
                    (Some(z), None, None) => Self::halfplane_from_zeros(
                        &z.iter().map(|z| Complex64::new(z[0], z[1])).collect::<Vec<_>>(),
                    ),
                    (None, Some(c), Some(w)) => Self::halfplane(c, w),
                    _ => Err(CoreError::InvalidData(
                        "halfplane-sym needs either zeros or centers+weights".into(),
                    )),
                }
            }
            "disc-family" => {
                #[derive(Deserialize)]
                struct P {
                    c: f64,
                    #[serde(default)]
                    eps: Option<[f64; 2]>,
                    #[serde(default)]
                    cut: Option<Cut>,
                }
                let p: P = serde_json::from_value(p.clone()).map_err(bad)?;
                let eps = p.eps.map_or(ONE, |e| Complex64::new(e[0], e[1]));
                Self::disc_family(p.c, eps, p.cut.unwrap_or(Cut::P2))
            }
            "fhp1" => Ok(SuperPotential::Fhp1),
            "fhp2" => Ok(SuperPotential::Fhp2),
            "lifted" => {
                #[derive(Deserialize)]
                struct P {
                    potential: PotentialSpec,
                }
                let p: P = serde_json::from_value(p.clone()).map_err(bad)?;
                Ok(lift_potential(&Self::from_spec(&p.potential)?))
            }
            "generic" => {
                #[derive(Deserialize)]
                struct P {
                    name: String,
                }
                let p: P = serde_json::from_value(p.clone()).map_err(bad)?;
                named_generic(&p.name)
            }
            other => Err(CoreError::InvalidData(format!("unknown family {other}"))),
        }
    }
}

/// JSON descriptor of a potential.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialSpec {
    pub family: String,
    #[serde(default)]
    pub params: Value,
}

/// Registered black-box fields, addressable by name from descriptors.
pub fn named_generic(name: &str) -> Result<SuperPotential> {
    match name {
        // 1 + |x|², the non-harmonic control on R⁴
        "nonharmonic-quadric" => Ok(SuperPotential::Generic4(GenericField4 {
            name: name.into(),
            f: Arc::new(|x: [f64; 4]| 1.0 + x.iter().map(|v| v * v).sum::<f64>()),
        })),
        // the 't Hooft basic potential, as a black box
        "basic-instanton" => Ok(SuperPotential::Generic4(GenericField4 {
            name: name.into(),
            f: Arc::new(|x: [f64; 4]| 1.0 + 1.0 / x.iter().map(|v| v * v).sum::<f64>()),
        })),
        // Im z + (Im z)³ on the half-plane, not harmonic
        "nonharmonic-cubic" => Ok(SuperPotential::Generic2(GenericField2 {
            name: name.into(),
            model: Model::HalfPlane,
            f: Arc::new(|z: Complex64| z.im + z.im.powi(3)),
        })),
        _ => Err(CoreError::InvalidData(format!("unknown generic field {name}"))),
    }
}

/// `∂_ζ f = ½(∂_x − i ∂_y) f` for a real series in two variables.
pub fn complex_gradient(f: &Taylor<f64>) -> CTaylor {
    let fx = f.partial(0).to_complex();
    let fy = f.partial(1).to_complex();
    (fx - fy.mul_i()) * Complex64::new(0.5, 0.0)
}

/// Central-difference derivative of order ≤ 2 along `dirs`, refined by one
/// Richardson step. Returns the estimate and its error.
fn fd_derivative(f: &dyn Fn(&[f64]) -> f64, x: &[f64], dirs: &[usize], h: f64) -> (f64, f64) {
    let eval = |h: f64| -> f64 {
        let shifted = |offs: &[(usize, f64)]| {
            let mut y = x.to_vec();
            for &(k, d) in offs {
                y[k] += d;
            }
            f(&y)
        };
        match dirs {
            [] => f(x),
            [k] => (shifted(&[(*k, h)]) - shifted(&[(*k, -h)])) / (2.0 * h),
            [k, l] if k == l => {
                (shifted(&[(*k, h)]) - 2.0 * f(x) + shifted(&[(*k, -h)])) / (h * h)
            }
            [k, l] => {
                (shifted(&[(*k, h), (*l, h)]) - shifted(&[(*k, h), (*l, -h)])
                    - shifted(&[(*k, -h), (*l, h)])
                    + shifted(&[(*k, -h), (*l, -h)]))
                    / (4.0 * h * h)
            }
            _ => unreachable!(),
        }
    };
    if dirs.is_empty() {
        return (f(x), 0.0);
    }
    let d1 = eval(h);
    let d2 = eval(h / 2.0);
    let rich = d2 + (d2 - d1) / 3.0;
    (rich, (d2 - d1).abs() / 3.0)
}

fn fd_step(order: usize, scale: f64) -> f64 {
    let eps = f64::EPSILON;
    let base = if order <= 1 { eps.cbrt() } else { eps.powf(0.25) };
    // the Richardson step halves it again
    4.0 * base * (1.0 + scale)
}

fn fd_jet(
    nvars: usize,
    order: usize,
    x: &[f64],
    f: &dyn Fn(&[f64]) -> f64,
) -> Result<(Taylor<f64>, f64)> {
    if order > GENERIC_MAX_ORDER {
        return Err(CoreError::OrderUnsupported {
            requested: order,
            max: GENERIC_MAX_ORDER,
        });
    }
    let scale = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut err = 0.0f64;
    let mut vals = std::collections::HashMap::new();
    let sp = crate::taylor::Space::get(nvars, order);
    for e in sp.exponents() {
        let mut dirs = Vec::new();
        for (v, &k) in e.iter().enumerate() {
            for _ in 0..k {
                dirs.push(v);
            }
        }
        let h = fd_step(dirs.len(), scale);
        let (d, de) = fd_derivative(f, x, &dirs, h);
        err = err.max(de);
        vals.insert(*e, d);
    }
    let t = Taylor::from_derivatives(nvars, order, |e| vals[e]);
    Ok((t, err))
}

fn generic_jet4(g: &GenericField4, x: [f64; 4], order: usize) -> Result<Jet4> {
    let f = |y: &[f64]| (g.f)([y[0], y[1], y[2], y[3]]);
    let (taylor, error) = fd_jet(4, order, &x, &f)?;
    Ok(Jet4 { x, taylor, error })
}

fn generic_jet2(g: &GenericField2, p: HyperPoint, order: usize) -> Result<Jet2> {
    let model = p.model;
    let native = g.model;
    let f = |y: &[f64]| {
        let q = HyperPoint::new(model, Complex64::new(y[0], y[1])).to_model(native);
        (g.f)(q.coord)
    };
    let (taylor, error) = fd_jet(2, order, &[p.coord.re, p.coord.im], &f)?;
    Ok(Jet2 {
        point: p,
        taylor,
        error,
    })
}

/// Solves `1 + Σ qᵢ/(zⱼ − bᵢ)² = 0` for the 't Hooft data `(b, q)`.
fn solve_thooft_data(zeros: &[Complex64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let k = zeros.len();
    let mut b: Vec<f64> = zeros.iter().map(|z| z.re).collect();
    let mut q: Vec<f64> = zeros.iter().map(|z| z.im * z.im).collect();
    let residual = |b: &[f64], q: &[f64]| -> Vec<f64> {
        let mut out = Vec::with_capacity(2 * k);
        for z in zeros {
            let mut v = ONE;
            for i in 0..k {
                v += Complex64::new(q[i], 0.0) / (z - b[i]).powi(2);
            }
            out.push(v.re);
            out.push(v.im);
        }
        out
    };
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut res = residual(&b, &q);
    for _ in 0..100 {
        if norm(&res) < 1e-15 {
            break;
        }
        // Jacobian columns: ∂/∂bᵢ = 2qᵢ/(z − bᵢ)³, ∂/∂qᵢ = 1/(z − bᵢ)²
        let mut jac = vec![vec![0.0; 2 * k]; 2 * k];
        for (j, z) in zeros.iter().enumerate() {
            for i in 0..k {
                let d = z - b[i];
                let db = Complex64::new(2.0 * q[i], 0.0) / d.powi(3);
                let dq = ONE / d.powi(2);
                jac[2 * j][2 * i] = db.re;
                jac[2 * j + 1][2 * i] = db.im;
                jac[2 * j][2 * i + 1] = dq.re;
                jac[2 * j + 1][2 * i + 1] = dq.im;
            }
        }
        let step = solve_dense(jac, res.iter().map(|r| -r).collect())
            .ok_or_else(|| CoreError::NoConvergence("singular Jacobian".into()))?;
        let mut t = 1.0;
        loop {
            let nb: Vec<f64> = (0..k).map(|i| b[i] + t * step[2 * i]).collect();
            let nq: Vec<f64> = (0..k).map(|i| q[i] + t * step[2 * i + 1]).collect();
            let nres = residual(&nb, &nq);
            if nq.iter().all(|&x| x > 0.0) && norm(&nres) < norm(&res) {
                b = nb;
                q = nq;
                res = nres;
                break;
            }
            t *= 0.5;
            if t < 1e-10 {
                return Err(CoreError::NoConvergence(
                    "no descent step for prescribed zeros".into(),
                ));
            }
        }
    }
    if norm(&res) > 1e-12 {
        return Err(CoreError::NoConvergence(format!(
            "prescribed zeros residual {:e}",
            norm(&res)
        )));
    }
    Ok((b, q))
}

/// Gaussian elimination with partial pivoting for the small Newton systems.
fn solve_dense(mut a: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Option<Vec<f64>> {
    let n = rhs.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        rhs.swap(col, piv);
        for row in col + 1..n {
            let m = a[row][col] / a[col][col];
            for c in col..n {
                a[row][c] -= m * a[col][c];
            }
            rhs[row] -= m * rhs[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|c| a[row][c] * x[c]).sum();
        x[row] = (rhs[row] - s) / a[row][row];
    }
    Some(x)
}

/// `Δρ` at `x`, with `Δ = −Σ ∂²_ν`.
pub fn harmonic_residual4(p: &SuperPotential, x: [f64; 4]) -> Result<f64> {
    Ok(p.jet4(x, 2)?.laplacian())
}

/// `ΔΔ log ρ` at `x`.
pub fn biharmonic_log4(p: &SuperPotential, x: [f64; 4]) -> Result<f64> {
    let jet = p.jet4(x, 4)?;
    let l = jet.taylor.ln();
    let mut s = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            s += l.d(&[i, i, j, j]);
        }
    }
    Ok(s)
}

/// `Δ_h φ` at `p` in the model of `p`.
pub fn harmonic_residual_hyp(phi: &SuperPotential, p: HyperPoint) -> Result<f64> {
    Ok(phi.jet2(p, 2)?.laplacian_h())
}

/// `φ(t, r) = r ρ(t + r Q)` for an SO(3)-invariant ρ.
pub fn reduce_potential(rho: &SuperPotential) -> Result<SuperPotential> {
    match rho {
        SuperPotential::Thooft4 { centers, scales } => {
            if let Some(a) = centers.iter().find(|a| a.im().norm() > 0.0) {
                return Err(CoreError::NotSymmetric(format!(
                    "center {:?} is off the real axis",
                    a.to_array()
                )));
            }
            SuperPotential::halfplane(
                centers.iter().map(|a| a.w).collect(),
                scales.iter().map(|l| l * l).collect(),
            )
        }
        SuperPotential::Lifted(inner) => Ok((**inner).clone()),
        SuperPotential::Quadric { .. } | SuperPotential::Generic4(_) => Err(
            CoreError::NotSymmetric("no hyperbolic family represents this potential".into()),
        ),
        _ => Err(CoreError::InvalidData(
            "reduce_potential expects a four-dimensional potential".into(),
        )),
    }
}

/// `ρ(x) = φ(t + i r)/r`; half-plane 't Hooft data lifts to real centers exactly.
pub fn lift_potential(phi: &SuperPotential) -> SuperPotential {
    match phi {
        SuperPotential::HalfPlaneSym { centers, weights } => SuperPotential::Thooft4 {
            centers: centers.iter().map(|&b| Quaternion::real(b)).collect(),
            scales: weights.iter().map(|q| q.sqrt()).collect(),
        },
        SuperPotential::Lifted(_)
        | SuperPotential::Thooft4 { .. }
        | SuperPotential::Quadric { .. }
        | SuperPotential::Generic4(_) => phi.clone(),
        other => SuperPotential::Lifted(Box::new(other.clone())),
    }
}

/// Scalar curvature `R' = 6 ρ⁻³ Δρ` of the metric `ρ² g` on R⁴.
pub fn scalar_curvature_conformal(rho: &SuperPotential, x: [f64; 4]) -> Result<f64> {
    let jet = rho.jet4(x, 2)?;
    let v = jet.value();
    if !(v > 0.0) {
        return Err(CoreError::OutsideDomain(format!("ρ({x:?}) = {v}")));
    }
    Ok(6.0 * jet.laplacian() / (v * v * v))
}
