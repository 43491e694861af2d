//! Uniform tensor grids with trapezoid weights.

use serde::Serialize;

use crate::error::{Error, Result};

/// `n` points per axis on `center_i + [-L, L]`, row-major with the first
/// axis slowest.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Grid {
    pub center: Vec<f64>,
    pub half_width: f64,
    pub n: usize,
}

impl Grid {
    pub fn new(half_width: f64, n: usize, axes: usize) -> Result<Self> {
        Self::centered(vec![0.0; axes], half_width, n)
    }

    pub fn centered(center: Vec<f64>, half_width: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Invalid(format!("grid needs n >= 2, got {n}")));
        }
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::Invalid(format!("grid half-width must be positive, got {half_width}")));
        }
        if center.is_empty() || center.iter().any(|c| !c.is_finite()) {
            return Err(Error::Invalid("grid center must be finite and non-empty".into()));
        }
        Ok(Grid { center, half_width, n })
    }

    pub fn plane(center: [f64; 2], half_width: f64, n: usize) -> Result<Self> {
        Self::centered(center.to_vec(), half_width, n)
    }

    pub fn axes(&self) -> usize {
        self.center.len()
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.n - 1) as f64
    }

    /// Quadrature weight `spacing^axes`. End points carry the same weight:
    /// grids are sized so that integrands vanish at the boundary.
    pub fn weight(&self) -> f64 {
        self.spacing().powi(self.axes() as i32)
    }

    pub fn len(&self) -> usize {
        self.n.pow(self.axes() as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn axis(&self, i: usize) -> Vec<f64> {
        let h = self.spacing();
        (0..self.n).map(|k| self.center[i] - self.half_width + k as f64 * h).collect()
    }

    pub fn point(&self, mut idx: usize) -> Vec<f64> {
        let h = self.spacing();
        let mut p = vec![0.0; self.axes()];
        for a in (0..self.axes()).rev() {
            let k = idx % self.n;
            idx /= self.n;
            p[a] = self.center[a] - self.half_width + k as f64 * h;
        }
        p
    }

    /// Points of a two-axis grid.
    pub fn points2(&self) -> Vec<[f64; 2]> {
        assert_eq!(self.axes(), 2, "points2 on a {}-axis grid", self.axes());
        let xs = self.axis(0);
        let ys = self.axis(1);
        let mut out = Vec::with_capacity(self.len());
        for &x in &xs {
            for &y in &ys {
                out.push([x, y]);
            }
        }
        out
    }

    /// Same window with spacing halved.
    pub fn refined(&self) -> Grid {
        Grid { center: self.center.clone(), half_width: self.half_width, n: 2 * self.n - 1 }
    }

    /// Indices on the outermost ring of a two-axis grid.
    pub fn boundary2(&self) -> Vec<usize> {
        let n = self.n;
        (0..n * n).filter(|i| i / n == 0 || i / n == n - 1 || i % n == 0 || i % n == n - 1).collect()
    }
}
