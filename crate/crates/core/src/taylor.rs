//! Truncated multivariate Taylor arithmetic.
//!
//! A [`Taylor`] stores the normalized coefficients `f_α / α!` of a field for
//! every multi-index `|α| ≤ order` in up to four real variables. Arithmetic and
//! the elementary functions act on whole series, so composing closed-form
//! expressions yields exact partial derivatives (up to rounding) without finite
//! differences.

use num_complex::Complex64;
use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::OnceLock;

pub const MAX_VARS: usize = 4;
pub const MAX_ORDER: usize = 4;
/// Number of monomials of degree ≤ 4 in 4 variables.
pub const MAX_TERMS: usize = 70;

const BASE: usize = MAX_ORDER + 1;
const CODES: usize = BASE * BASE * BASE * BASE;
const ABSENT: u8 = u8::MAX;

/// Coefficient field of a series.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(x: f64) -> Self;
    fn ln(self) -> Self;
    fn exp(self) -> Self;
    fn powf(self, p: f64) -> Self;
    fn conj(self) -> Self;
    fn modulus(self) -> f64;
    fn scale(self, s: f64) -> Self;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn powf(self, p: f64) -> Self {
        f64::powf(self, p)
    }
    fn conj(self) -> Self {
        self
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn ln(self) -> Self {
        Complex64::ln(self)
    }
    fn exp(self) -> Self {
        Complex64::exp(self)
    }
    fn powf(self, p: f64) -> Self {
        Complex64::powf(self, p)
    }
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
}

/// Monomial layout for a given number of variables and truncation order.
///
/// Monomials are graded by total degree, so the layout for order `n - 1` is a
/// prefix of the layout for order `n`.
pub struct Space {
    nvars: usize,
    order: usize,
    exps: Vec<[u8; MAX_VARS]>,
    fact: Vec<f64>,
    pairs: Vec<(u8, u8, u8)>,
    lookup: Vec<u8>,
    up: [Vec<u8>; MAX_VARS],
}

fn code(e: &[u8; MAX_VARS]) -> usize {
    e.iter().rev().fold(0, |acc, &d| acc * BASE + d as usize)
}

fn degree(e: &[u8; MAX_VARS]) -> usize {
    e.iter().map(|&d| d as usize).sum()
}

impl Space {
    fn build(nvars: usize, order: usize) -> Space {
        let mut exps = Vec::new();
        for deg in 0..=order {
            let mut e = [0u8; MAX_VARS];
            push_degree(&mut exps, &mut e, 0, nvars, deg);
        }
        let mut lookup = vec![ABSENT; CODES];
        for (i, e) in exps.iter().enumerate() {
            lookup[code(e)] = i as u8;
        }
        let fact = exps
            .iter()
            .map(|e| e.iter().map(|&d| factorial(d as usize)).product())
            .collect();
        let mut pairs = Vec::new();
        for (i, a) in exps.iter().enumerate() {
            for (j, b) in exps.iter().enumerate() {
                if degree(a) + degree(b) > order {
                    continue;
                }
                let mut s = [0u8; MAX_VARS];
                for v in 0..MAX_VARS {
                    s[v] = a[v] + b[v];
                }
                pairs.push((i as u8, j as u8, lookup[code(&s)]));
            }
        }
        let up = std::array::from_fn(|v| {
            exps.iter()
                .map(|e| {
                    if v >= nvars || degree(e) >= order {
                        return ABSENT;
                    }
                    let mut s = *e;
                    s[v] += 1;
                    lookup[code(&s)]
                })
                .collect()
        });
        Space {
            nvars,
            order,
            exps,
            fact,
            pairs,
            lookup,
            up,
        }
    }

    /// Shared layout for `nvars` variables truncated at `order`.
    pub fn get(nvars: usize, order: usize) -> &'static Space {
        static SPACES: OnceLock<Vec<Space>> = OnceLock::new();
        assert!((1..=MAX_VARS).contains(&nvars), "nvars out of range");
        assert!(order <= MAX_ORDER, "order out of range");
        let all = SPACES.get_or_init(|| {
            let mut v = Vec::new();
            for n in 1..=MAX_VARS {
                for o in 0..=MAX_ORDER {
                    v.push(Space::build(n, o));
                }
            }
            v
        });
        &all[(nvars - 1) * (MAX_ORDER + 1) + order]
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Multi-indices in storage order.
    pub fn exponents(&self) -> &[[u8; MAX_VARS]] {
        &self.exps
    }

    pub fn index_of(&self, e: &[u8; MAX_VARS]) -> Option<usize> {
        if degree(e) > self.order || e[self.nvars..].iter().any(|&d| d != 0) {
            return None;
        }
        match self.lookup[code(e)] {
            ABSENT => None,
            i => Some(i as usize),
        }
    }
}

fn push_degree(
    out: &mut Vec<[u8; MAX_VARS]>,
    e: &mut [u8; MAX_VARS],
    var: usize,
    nvars: usize,
    remaining: usize,
) {
    if var == nvars - 1 {
        e[var] = remaining as u8;
        out.push(*e);
        e[var] = 0;
        return;
    }
    for d in (0..=remaining).rev() {
        e[var] = d as u8;
        push_degree(out, e, var + 1, nvars, remaining - d);
    }
    e[var] = 0;
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Truncated Taylor series with coefficients in `T`.
#[derive(Clone, Copy)]
pub struct Taylor<T: Scalar> {
    sp: &'static Space,
    c: [T; MAX_TERMS],
}

impl<T: Scalar> Debug for Taylor<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Taylor")
            .field("nvars", &self.sp.nvars)
            .field("order", &self.sp.order)
            .field("coeffs", &&self.c[..self.sp.len()])
            .finish()
    }
}

impl<T: Scalar> Taylor<T> {
    pub fn constant(nvars: usize, order: usize, v: T) -> Self {
        let mut c = [T::zero(); MAX_TERMS];
        c[0] = v;
        Taylor {
            sp: Space::get(nvars, order),
            c,
        }
    }

    /// The coordinate function `x_k` expanded around `x_k = v`.
    pub fn variable(nvars: usize, order: usize, k: usize, v: T) -> Self {
        let mut t = Self::constant(nvars, order, v);
        if order > 0 {
            let mut e = [0u8; MAX_VARS];
            e[k] = 1;
            let i = t.sp.index_of(&e).expect("variable index");
            t.c[i] = T::one();
        }
        t
    }

    /// Builds a series from partial derivatives `∂^α f` given per multi-index.
    pub fn from_derivatives(nvars: usize, order: usize, d: impl Fn(&[u8; MAX_VARS]) -> T) -> Self {
        let sp = Space::get(nvars, order);
        let mut c = [T::zero(); MAX_TERMS];
        for (i, e) in sp.exps.iter().enumerate() {
            c[i] = d(e).scale(1.0 / sp.fact[i]);
        }
        Taylor { sp, c }
    }

    pub fn space(&self) -> &'static Space {
        self.sp
    }

    pub fn nvars(&self) -> usize {
        self.sp.nvars
    }

    pub fn order(&self) -> usize {
        self.sp.order
    }

    pub fn value(&self) -> T {
        self.c[0]
    }

    pub fn coeffs(&self) -> &[T] {
        &self.c[..self.sp.len()]
    }

    /// Partial derivative `∂^α f` at the expansion point.
    pub fn derivative(&self, alpha: [u8; MAX_VARS]) -> T {
        match self.sp.index_of(&alpha) {
            Some(i) => self.c[i].scale(self.sp.fact[i]),
            None => panic!("multi-index {alpha:?} outside series of order {}", self.sp.order),
        }
    }

    /// Derivative along the listed variables, e.g. `d(&[0, 0, 2])` is `∂₀²∂₂`.
    pub fn d(&self, vars: &[usize]) -> T {
        let mut a = [0u8; MAX_VARS];
        for &v in vars {
            a[v] += 1;
        }
        self.derivative(a)
    }

    /// The series of `∂f/∂x_v`, one order lower.
    pub fn partial(&self, v: usize) -> Self {
        assert!(self.sp.order > 0, "cannot differentiate an order-0 series");
        assert!(v < self.sp.nvars, "variable out of range");
        let lower = Space::get(self.sp.nvars, self.sp.order - 1);
        let mut c = [T::zero(); MAX_TERMS];
        for (k, e) in lower.exps.iter().enumerate() {
            let src = self.sp.up[v][k] as usize;
            c[k] = self.c[src].scale((e[v] + 1) as f64);
        }
        Taylor { sp: lower, c }
    }

    pub fn truncate(&self, order: usize) -> Self {
        if order >= self.sp.order {
            return *self;
        }
        let sp = Space::get(self.sp.nvars, order);
        let mut c = self.c;
        for x in c.iter_mut().skip(sp.len()) {
            *x = T::zero();
        }
        Taylor { sp, c }
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        let mut out = *self;
        for x in out.c.iter_mut().take(self.sp.len()) {
            *x = f(*x);
        }
        out
    }

    /// Coefficientwise conjugate; the conjugate field since the variables are real.
    pub fn conj(&self) -> Self {
        self.map(T::conj)
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|x| x.scale(s))
    }

    fn binary_space(&self, other: &Self) -> &'static Space {
        assert_eq!(self.sp.nvars, other.sp.nvars, "series over different variables");
        if self.sp.order <= other.sp.order {
            self.sp
        } else {
            other.sp
        }
    }

    /// `f(a0 + h)` for `f` given by its normalized derivatives `fk[k] = f⁽ᵏ⁾(a0)/k!`.
    fn compose(&self, fk: &[T]) -> Self {
        let n = self.sp.order;
        let mut h = *self;
        h.c[0] = T::zero();
        let mut out = Self::constant(self.sp.nvars, n, fk[n]);
        for k in (0..n).rev() {
            out = out * h;
            out.c[0] += fk[k];
        }
        out
    }

    pub fn recip(&self) -> Self {
        let a = self.c[0];
        let inv = T::one() / a;
        let mut fk = [T::zero(); MAX_ORDER + 1];
        let mut p = inv;
        for (k, f) in fk.iter_mut().enumerate().take(self.sp.order + 1) {
            *f = if k % 2 == 0 { p } else { -p };
            p *= inv;
        }
        self.compose(&fk)
    }

    /// Logarithm with the constant term supplied by the caller (branch choice).
    pub fn ln_with(&self, log_value: T) -> Self {
        let inv = T::one() / self.c[0];
        let mut fk = [T::zero(); MAX_ORDER + 1];
        fk[0] = log_value;
        let mut p = inv;
        for (k, f) in fk.iter_mut().enumerate().take(self.sp.order + 1).skip(1) {
            let s = if k % 2 == 1 { 1.0 } else { -1.0 };
            *f = p.scale(s / k as f64);
            p *= inv;
        }
        self.compose(&fk)
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        self.ln_with(self.c[0].ln())
    }

    pub fn exp(&self) -> Self {
        let e = self.c[0].exp();
        let mut fk = [T::zero(); MAX_ORDER + 1];
        for (k, f) in fk.iter_mut().enumerate().take(self.sp.order + 1) {
            *f = e.scale(1.0 / factorial(k));
        }
        self.compose(&fk)
    }

    /// Real power with the principal branch at the expansion point.
    pub fn powf(&self, p: f64) -> Self {
        let a = self.c[0];
        let inv = T::one() / a;
        let mut fk = [T::zero(); MAX_ORDER + 1];
        let mut binom = 1.0;
        let mut term = a.powf(p);
        for (k, f) in fk.iter_mut().enumerate().take(self.sp.order + 1) {
            if k > 0 {
                binom *= (p - (k as f64 - 1.0)) / k as f64;
                term *= inv;
            }
            *f = term.scale(binom);
        }
        self.compose(&fk)
    }

    pub fn sqrt(&self) -> Self {
        self.powf(0.5)
    }

    pub fn square(&self) -> Self {
        *self * *self
    }
}

impl Taylor<Complex64> {
    pub fn re(&self) -> Taylor<f64> {
        let mut c = [0.0; MAX_TERMS];
        for (o, x) in c.iter_mut().zip(self.coeffs()) {
            *o = x.re;
        }
        Taylor { sp: self.sp, c }
    }

    pub fn im(&self) -> Taylor<f64> {
        let mut c = [0.0; MAX_TERMS];
        for (o, x) in c.iter_mut().zip(self.coeffs()) {
            *o = x.im;
        }
        Taylor { sp: self.sp, c }
    }

    /// `|f|²` as a real series.
    pub fn norm_sqr(&self) -> Taylor<f64> {
        (*self * self.conj()).re()
    }

    pub fn mul_i(&self) -> Self {
        self.map(|x| Complex64::new(-x.im, x.re))
    }
}

impl Taylor<f64> {
    pub fn to_complex(&self) -> Taylor<Complex64> {
        let mut c = [Complex64::new(0.0, 0.0); MAX_TERMS];
        for (o, &x) in c.iter_mut().zip(self.coeffs()) {
            *o = Complex64::new(x, 0.0);
        }
        Taylor { sp: self.sp, c }
    }
}

impl<T: Scalar> Add for Taylor<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let sp = self.binary_space(&rhs);
        let mut c = [T::zero(); MAX_TERMS];
        for (i, x) in c.iter_mut().enumerate().take(sp.len()) {
            *x = self.c[i] + rhs.c[i];
        }
        Taylor { sp, c }
    }
}

impl<T: Scalar> Sub for Taylor<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let sp = self.binary_space(&rhs);
        let mut c = [T::zero(); MAX_TERMS];
        for (i, x) in c.iter_mut().enumerate().take(sp.len()) {
            *x = self.c[i] - rhs.c[i];
        }
        Taylor { sp, c }
    }
}

impl<T: Scalar> Mul for Taylor<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let sp = self.binary_space(&rhs);
        let mut c = [T::zero(); MAX_TERMS];
        for &(i, j, k) in &sp.pairs {
            c[k as usize] += self.c[i as usize] * rhs.c[j as usize];
        }
        Taylor { sp, c }
    }
}

impl<T: Scalar> Div for Taylor<T> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * rhs.recip()
    }
}

impl<T: Scalar> Neg for Taylor<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|x| -x)
    }
}

impl<T: Scalar> Add<T> for Taylor<T> {
    type Output = Self;
    fn add(mut self, rhs: T) -> Self {
        self.c[0] += rhs;
        self
    }
}

impl<T: Scalar> Sub<T> for Taylor<T> {
    type Output = Self;
    fn sub(mut self, rhs: T) -> Self {
        self.c[0] -= rhs;
        self
    }
}

impl<T: Scalar> Mul<T> for Taylor<T> {
    type Output = Self;
    fn mul(self, rhs: T) -> Self {
        self.map(|x| x * rhs)
    }
}

impl<T: Scalar> Div<T> for Taylor<T> {
    type Output = Self;
    fn div(self, rhs: T) -> Self {
        let inv = T::one() / rhs;
        self.map(|x| x * inv)
    }
}
