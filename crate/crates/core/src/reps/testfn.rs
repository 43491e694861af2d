//! Test functions on N7 built from separable polynomial-Gaussian atoms.
//!
//! Group elements are written in the split chart
//! `n = exp(a1 X1 + a2 X2) exp(y3 X3 + ... + y7 X7)`, where
//! `P = exp(span{X3..X7})` is the normal abelian subgroup used as polarization.
//! Haar measure is `da dy` and the Fourier convention is `e^{-2 pi i <q, y>}`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// `x . p = Ad*(exp(x1 X1 + x2 X2)) p` for `p = (p3, ..., p7)` in `p*`.
pub fn act(x: [f64; 2], p: &[f64; 5]) -> [f64; 5] {
    let [x1, x2] = x;
    let [p3, p4, p5, p6, p7] = *p;
    [
        p3 - p5 * x1 + p6 * x2 + 0.5 * p7 * (x1 * x1 - x2 * x2),
        p4 - p5 * x2 - p6 * x1 + p7 * x1 * x2,
        p5 - p7 * x1,
        p6 - p7 * x2,
        p7,
    ]
}

/// One-variable factor `p(t) exp(-a (t - b)^2)` with `a > 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Factor {
    /// Coefficients of `p`, constant term first.
    pub poly: Vec<f64>,
    pub a: f64,
    pub b: f64,
}

impl Factor {
    pub fn new(poly: Vec<f64>, a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) || !b.is_finite() || poly.iter().any(|c| !c.is_finite()) {
            return Err(Error::Invalid(format!("bad factor a={a}, b={b}")));
        }
        Ok(Factor { poly, a, b })
    }

    pub fn gaussian(a: f64) -> Self {
        Factor { poly: vec![1.0], a, b: 0.0 }
    }

    fn p(&self, t: f64) -> f64 {
        self.poly.iter().rev().fold(0.0, |acc, c| acc * t + c)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let d = t - self.b;
        self.p(t) * (-self.a * d * d).exp()
    }

    /// `int p(t) e^{-a(t-b)^2} e^{-2 pi i w t} dt`, in closed form through
    /// Gaussian moments around the complex center `b - i pi w / a`.
    pub fn fourier(&self, w: f64) -> C64 {
        use std::f64::consts::PI;
        let a = self.a;
        let c0 = C64::new(self.b, -PI * w / a);
        // q_m = sum_{n >= m} p_n C(n, m) c0^(n-m); E[u^m] for weight e^{-a u^2}
        let deg = self.poly.len();
        let mut total = C64::new(0.0, 0.0);
        let mut moment = 1.0; // E[u^m] for even m
        let mut m = 0;
        while m < deg {
            let mut q = C64::new(0.0, 0.0);
            let mut binom = 1.0;
            let mut pow = C64::new(1.0, 0.0);
            for n in m..deg {
                if n > m {
                    binom = binom * n as f64 / (n - m) as f64;
                    pow *= c0;
                }
                q += pow * (self.poly[n] * binom);
            }
            total += q * moment;
            moment *= (m + 1) as f64 / (2.0 * a);
            m += 2;
        }
        let phase = C64::from_polar(1.0, -2.0 * PI * w * self.b);
        phase * (-(PI * PI) * w * w / a).exp() * (PI / a).sqrt() * total
    }

    pub fn integral(&self) -> f64 {
        self.fourier(0.0).re
    }

    /// `int |p(t)| e^{-a (t-b)^2} dt`.
    pub fn abs_integral(&self) -> f64 {
        if self.poly.len() <= 1 {
            return self.poly.first().map_or(0.0, |c| c.abs()) * (std::f64::consts::PI / self.a).sqrt();
        }
        let r = self.radius(1e-16);
        let n = 4001;
        let h = 2.0 * r / (n - 1) as f64;
        let mut s = 0.0;
        for i in 0..n {
            let t = self.b - r + i as f64 * h;
            let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
            s += w * self.eval(t).abs();
        }
        s * h
    }

    /// Half-width around `b` beyond which `|factor| < tol * max|factor|`,
    /// allowing for polynomial growth.
    pub fn radius(&self, tol: f64) -> f64 {
        let deg = self.poly.len().saturating_sub(1) as f64;
        let base = (-tol.ln() / self.a).sqrt();
        let scale = self.poly.iter().fold(0.0f64, |m, c| m.max(c.abs())).max(1.0);
        base * (1.0 + 0.5 * deg) + scale.ln() / (2.0 * self.a * base)
    }

    /// Half-width of `|fourier|` in frequency, estimated from the Gaussian
    /// envelope `exp(-pi^2 w^2 / a)` with the same polynomial allowance.
    pub fn frequency_radius(&self, tol: f64) -> f64 {
        let deg = self.poly.len().saturating_sub(1) as f64;
        let base = (-tol.ln() * self.a).sqrt() / std::f64::consts::PI;
        base * (1.0 + 0.5 * deg)
    }
}

/// `coef * prod_i factor_i(t_i)` with `t = (a1, a2, y3, ..., y7)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Atom {
    pub coef: C64,
    pub factors: Vec<Factor>,
}

impl Atom {
    pub fn new(coef: C64, factors: Vec<Factor>) -> Result<Self> {
        if factors.len() != 7 {
            return Err(Error::DimensionMismatch { expected: 7, got: factors.len() });
        }
        Ok(Atom { coef, factors })
    }

    /// `exp(-pi alpha (a1^2 + a2^2) - pi beta |y|^2)`.
    pub fn gaussian(alpha: f64, beta: f64) -> Self {
        use std::f64::consts::PI;
        let mut factors = vec![Factor::gaussian(PI * alpha); 2];
        factors.extend(std::iter::repeat(Factor::gaussian(PI * beta)).take(5));
        Atom { coef: C64::new(1.0, 0.0), factors }
    }

    pub fn eval(&self, a: [f64; 2], y: &[f64; 5]) -> C64 {
        let mut v = self.coef * self.factors[0].eval(a[0]) * self.factors[1].eval(a[1]);
        for i in 0..5 {
            v *= self.factors[2 + i].eval(y[i]);
        }
        v
    }

    /// The `a`-dependent part of the partial transform.
    pub fn base(&self, a: [f64; 2]) -> C64 {
        self.coef * self.factors[0].eval(a[0]) * self.factors[1].eval(a[1])
    }

    /// The `q`-dependent part of the partial transform.
    pub fn fiber(&self, q: &[f64; 5]) -> C64 {
        let mut v = C64::new(1.0, 0.0);
        for i in 0..5 {
            v *= self.factors[2 + i].fourier(q[i]);
        }
        v
    }

    pub fn partial(&self, a: [f64; 2], q: &[f64; 5]) -> C64 {
        self.base(a) * self.fiber(q)
    }

    pub fn character(&self, xi: &[f64; 4]) -> C64 {
        let mut v = self.coef;
        for i in 0..4 {
            v *= self.factors[i].fourier(xi[i]);
        }
        for i in 4..7 {
            v *= self.factors[i].integral();
        }
        v
    }

    pub fn abs_integral(&self) -> f64 {
        self.coef.norm() * self.factors.iter().map(Factor::abs_integral).product::<f64>()
    }
}

/// A term of a test function: an atom `A`, or its involution image
/// `A*(n) = conj(A(n^-1))`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Term {
    pub atom: Atom,
    pub reflected: bool,
}

impl Term {
    /// `A*^P(a, q) = conj(A^P(-a, a . q))`.
    pub fn partial(&self, a: [f64; 2], q: &[f64; 5]) -> C64 {
        if self.reflected {
            self.atom.partial([-a[0], -a[1]], &act(a, q)).conj()
        } else {
            self.atom.partial(a, q)
        }
    }

    pub fn eval(&self, a: [f64; 2], y: &[f64; 5]) -> C64 {
        if self.reflected {
            // n^-1 = exp(-a) exp(-Ad(exp a) y)
            let y = ad_split(a, y);
            let ny = [-y[0], -y[1], -y[2], -y[3], -y[4]];
            self.atom.eval([-a[0], -a[1]], &ny).conj()
        } else {
            self.atom.eval(a, y)
        }
    }

    pub fn character(&self, xi: &[f64; 4]) -> C64 {
        let v = self.atom.character(xi);
        if self.reflected {
            v.conj()
        } else {
            v
        }
    }
}

/// `Ad(exp(a1 X1 + a2 X2)) (y3 X3 + ... + y7 X7)` in coordinates 3..7.
pub fn ad_split(a: [f64; 2], y: &[f64; 5]) -> [f64; 5] {
    let [a1, a2] = a;
    let [y3, y4, y5, y6, y7] = *y;
    // ad(a) y = (0, 0, a1 y3 + a2 y4, a1 y4 - a2 y3, a1 y5 + a2 y6)
    let b5 = a1 * y3 + a2 * y4;
    let b6 = a1 * y4 - a2 * y3;
    let b7 = a1 * y5 + a2 * y6;
    let c7 = a1 * b5 + a2 * b6;
    [y3, y4, y5 + b5, y6 + b6, y7 + b7 + 0.5 * c7]
}

/// Anything with a partial Fourier transform along `P`.
pub trait Symbol: Sync {
    /// `F^P(a, q) = int F(exp(a) exp(y)) e^{-2 pi i <q, y>} dy`.
    fn partial(&self, a: [f64; 2], q: &[f64; 5]) -> C64;

    /// Radius in the `a` variables outside which `F^P` is negligible.
    fn decay_radius(&self) -> f64;
}

/// Finite sum of terms.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct TestFunction {
    terms: Vec<Term>,
}

impl TestFunction {
    pub fn zero() -> Self {
        TestFunction { terms: Vec::new() }
    }

    pub fn from_atom(atom: Atom) -> Self {
        TestFunction { terms: vec![Term { atom, reflected: false }] }
    }

    pub fn gaussian(alpha: f64, beta: f64) -> Self {
        Self::from_atom(Atom::gaussian(alpha, beta))
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &TestFunction) -> TestFunction {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        TestFunction { terms }
    }

    pub fn scale(&self, c: C64) -> TestFunction {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut t = t.clone();
                t.atom.coef *= if t.reflected { c.conj() } else { c };
                t
            })
            .collect();
        TestFunction { terms }
    }

    /// `F*(n) = conj(F(n^-1))`.
    pub fn star(&self) -> TestFunction {
        let terms = self.terms.iter().map(|t| Term { atom: t.atom.clone(), reflected: !t.reflected }).collect();
        TestFunction { terms }
    }

    /// `F + F*`.
    pub fn hermitian_part(&self) -> TestFunction {
        self.add(&self.star())
    }

    /// Pointwise conjugate; defined for sums of plain atoms only.
    pub fn conj(&self) -> Result<TestFunction> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            if t.reflected {
                return Err(Error::Invalid("pointwise conjugate of a reflected term".into()));
            }
            let mut t = t.clone();
            t.atom.coef = t.atom.coef.conj();
            terms.push(t);
        }
        Ok(TestFunction { terms })
    }

    pub fn eval(&self, a: [f64; 2], y: &[f64; 5]) -> C64 {
        self.terms.iter().map(|t| t.eval(a, y)).sum()
    }

    /// `chi_xi(F) = int F(n) e^{-2 pi i (xi1 x1 + ... + xi4 x4)} dn`.
    pub fn character_transform(&self, xi: &[f64; 4]) -> C64 {
        self.terms.iter().map(|t| t.character(xi)).sum()
    }

    /// Upper bound for `||F||_1` by the triangle inequality over terms.
    pub fn l1_bound(&self) -> f64 {
        self.terms.iter().map(|t| t.atom.abs_integral()).sum()
    }

    /// Largest frequency radius over the fiber coordinates `3..7`.
    pub fn fiber_radius(&self, tol: f64) -> f64 {
        self.terms
            .iter()
            .flat_map(|t| t.atom.factors[2..].iter().map(move |f| f.frequency_radius(tol)))
            .fold(0.0, f64::max)
    }

    /// Largest frequency radius over the coordinates `1..4`.
    pub fn frequency_radius(&self, tol: f64) -> f64 {
        self.terms
            .iter()
            .flat_map(|t| t.atom.factors[..4].iter().map(move |f| f.frequency_radius(tol)))
            .fold(0.0, f64::max)
    }
}

/// Tolerance used for decay radii.
pub const DECAY_TOL: f64 = 1e-8;

impl Symbol for TestFunction {
    fn partial(&self, a: [f64; 2], q: &[f64; 5]) -> C64 {
        self.terms.iter().map(|t| t.partial(a, q)).sum()
    }

    fn decay_radius(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let f = &t.atom.factors;
                let r1 = f[0].b.abs() + f[0].radius(DECAY_TOL);
                let r2 = f[1].b.abs() + f[1].radius(DECAY_TOL);
                r1.hypot(r2)
            })
            .fold(0.0, f64::max)
    }
}

/// `F * G (n) = int F(m) G(m^-1 n) dm`, evaluated through
/// `(F*G)^P(a, q) = int F^P(b, (a - b) . q) G^P(a - b, q) db` with a
/// trapezoid rule over `b` in `[-half_width, half_width]^2`.
#[derive(Clone, Debug)]
pub struct Convolution<'a> {
    pub f: &'a TestFunction,
    pub g: &'a TestFunction,
    pub half_width: f64,
    pub n: usize,
}

impl<'a> Convolution<'a> {
    pub fn new(f: &'a TestFunction, g: &'a TestFunction, n: usize) -> Self {
        let half_width = f.decay_radius().max(g.decay_radius());
        Convolution { f, g, half_width, n }
    }
}

impl Symbol for Convolution<'_> {
    fn partial(&self, a: [f64; 2], q: &[f64; 5]) -> C64 {
        let n = self.n.max(2);
        let h = 2.0 * self.half_width / (n - 1) as f64;
        let mut s = C64::new(0.0, 0.0);
        for i in 0..n {
            let b1 = -self.half_width + i as f64 * h;
            for j in 0..n {
                let b2 = -self.half_width + j as f64 * h;
                let d = [a[0] - b1, a[1] - b2];
                let g = self.g.partial(d, q);
                if g == C64::new(0.0, 0.0) {
                    continue;
                }
                s += self.f.partial([b1, b2], &act(d, q)) * g;
            }
        }
        s * h * h
    }

    fn decay_radius(&self) -> f64 {
        self.f.decay_radius() + self.g.decay_radius()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_transform() {
        use std::f64::consts::PI;
        let f = Factor::gaussian(PI);
        for w in [0.0, 0.3, -1.2] {
            let v = f.fourier(w);
            assert!((v.re - (-PI * w * w).exp()).abs() < 1e-14);
            assert!(v.im.abs() < 1e-14);
        }
    }

    #[test]
    fn polynomial_transform_against_quadrature() {
        let f = Factor::new(vec![0.5, -1.0, 2.0, 0.25], 1.3, 0.4).unwrap();
        for w in [0.0, 0.35, -0.8] {
            let n = 20001;
            let (lo, hi) = (-12.0, 12.0);
            let h = (hi - lo) / (n - 1) as f64;
            let mut s = C64::new(0.0, 0.0);
            for i in 0..n {
                let t = lo + i as f64 * h;
                s += C64::from_polar(f.eval(t), -2.0 * std::f64::consts::PI * w * t);
            }
            s *= h;
            assert!((s - f.fourier(w)).norm() < 1e-10, "{s} vs {}", f.fourier(w));
        }
    }

    #[test]
    fn split_adjoint_is_unipotent() {
        let a = [0.7, -1.1];
        let y = [0.2, 0.5, -0.3, 1.0, 2.0];
        let back = ad_split([-a[0], -a[1]], &ad_split(a, &y));
        for (u, v) in back.iter().zip(y) {
            assert!((u - v).abs() < 1e-14);
        }
    }
}
