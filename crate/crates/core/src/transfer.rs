//! Fundamental solutions of `-y'' + q y = λ y` on a unit edge.
//!
//! `c` solves the equation with `c(0) = 1, c'(0) = 0` and `s` with
//! `s(0) = 0, s'(0) = 1`. For a piecewise-constant potential both are
//! obtained exactly by multiplying the constant-coefficient transfer
//! matrices of the pieces.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `|ω²|·h²` below which the trigonometric entries switch to their Taylor series.
const SERIES_THRESHOLD: f64 = 1e-8;

/// Piecewise-constant potential on `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgePotential {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl EdgePotential {
    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn constant(value: f64) -> Self {
        Self {
            breakpoints: vec![0.0, 1.0],
            values: vec![value],
        }
    }

    /// Breakpoints must run strictly increasing from 0 to 1, with one value per piece.
    pub fn piecewise(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::InvalidPotential(
                "at least two breakpoints required".into(),
            ));
        }
        if values.len() + 1 != breakpoints.len() {
            return Err(Error::InvalidPotential(format!(
                "{} breakpoints need {} values, got {}",
                breakpoints.len(),
                breakpoints.len() - 1,
                values.len()
            )));
        }
        if breakpoints[0] != 0.0 || *breakpoints.last().unwrap() != 1.0 {
            return Err(Error::InvalidPotential(
                "breakpoints must start at 0 and end at 1".into(),
            ));
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidPotential(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidPotential("values must be finite".into()));
        }
        Ok(Self {
            breakpoints,
            values,
        })
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Pieces as `(length, value)` pairs.
    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.breakpoints
            .windows(2)
            .zip(&self.values)
            .map(|(w, &v)| (w[1] - w[0], v))
    }

    /// `∫₀¹ q`.
    pub fn integral(&self) -> f64 {
        self.pieces().map(|(h, v)| h * v).sum()
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    /// The potential `q + c`.
    pub fn shifted(&self, c: f64) -> Self {
        Self {
            breakpoints: self.breakpoints.clone(),
            values: self.values.iter().map(|v| v + c).collect(),
        }
    }
}

impl Default for EdgePotential {
    fn default() -> Self {
        Self::zero()
    }
}

/// Endpoint values `c(1,λ), c'(1,λ), s(1,λ), s'(1,λ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferData {
    pub c1: f64,
    pub c1p: f64,
    pub s1: f64,
    pub s1p: f64,
}

impl TransferData {
    pub const IDENTITY: Self = Self {
        c1: 1.0,
        c1p: 0.0,
        s1: 0.0,
        s1p: 1.0,
    };

    pub fn wronskian(&self) -> f64 {
        self.c1 * self.s1p - self.c1p * self.s1
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.c1, self.c1p, self.s1, self.s1p]
    }

    /// Composition: propagate through `self` first, then `next`.
    fn then(self, next: Self) -> Self {
        Self {
            c1: next.c1 * self.c1 + next.s1 * self.c1p,
            c1p: next.c1p * self.c1 + next.s1p * self.c1p,
            s1: next.c1 * self.s1 + next.s1 * self.s1p,
            s1p: next.c1p * self.s1 + next.s1p * self.s1p,
        }
    }
}

/// Transfer matrix of `y'' = -z y` over length `h`, as `(cos, sin/ω, -ω sin)` with `ω² = z`.
fn piece(z: f64, h: f64) -> TransferData {
    let zh2 = z * h * h;
    let (cos_part, sin_over) = if zh2.abs() < SERIES_THRESHOLD {
        let c = 1.0 - zh2 / 2.0 + zh2 * zh2 / 24.0 - zh2 * zh2 * zh2 / 720.0;
        let s = h * (1.0 - zh2 / 6.0 + zh2 * zh2 / 120.0 - zh2 * zh2 * zh2 / 5040.0);
        (c, s)
    } else if z > 0.0 {
        let w = z.sqrt();
        ((w * h).cos(), (w * h).sin() / w)
    } else {
        let k = (-z).sqrt();
        ((k * h).cosh(), (k * h).sinh() / k)
    };
    TransferData {
        c1: cos_part,
        c1p: -z * sin_over,
        s1: sin_over,
        s1p: cos_part,
    }
}

/// Exact endpoint data for a piecewise-constant potential at real `lambda`.
pub fn propagate(q: &EdgePotential, lambda: f64) -> TransferData {
    q.pieces().fold(TransferData::IDENTITY, |acc, (h, v)| {
        acc.then(piece(lambda - v, h))
    })
}

/// Number of Dirichlet eigenvalues of the edge strictly below `lambda`, i.e. the
/// number of zeros of `s(·, λ)` in `(0, 1)`. Meaningful when `s(1, λ) ≠ 0`.
///
/// Tracks the Prüfer phase of `s`: `half_turns` counts the multiples of π
/// already passed. On a piece with `ωh ≥ π/2` the phase of `(ω y, y')` turns
/// by exactly `ωh`; on shorter or non-oscillatory pieces at most one zero can
/// occur and a sign change of `y` detects it.
pub fn dirichlet_count(q: &EdgePotential, lambda: f64) -> usize {
    let phase = |a: f64, b: f64| a.atan2(b).rem_euclid(PI);
    let (mut y, mut yp) = (0.0f64, 1.0f64);
    let mut half_turns = 0i64;
    for (h, v) in q.pieces() {
        let z = lambda - v;
        let t = piece(z, h);
        let (y1, yp1) = (t.c1 * y + t.s1 * yp, t.c1p * y + t.s1p * yp);
        let w = z.max(0.0).sqrt();
        if w * h >= PI / 2.0 {
            let start = half_turns as f64 * PI + phase(w * y, yp);
            let end = start + w * h;
            half_turns = ((end - phase(w * y1, yp1)) / PI).round() as i64;
        } else if y1 == 0.0 || (y != 0.0 && y.signum() != y1.signum()) {
            half_turns += 1;
        }
        (y, yp) = (y1, yp1);
    }
    if y == 0.0 {
        (half_turns - 1).max(0) as usize
    } else {
        half_turns as usize
    }
}

/// Closed-form endpoint data for the zero potential.
pub fn transfer_zero_oracle(lambda: f64) -> TransferData {
    if lambda == 0.0 {
        return TransferData {
            c1: 1.0,
            c1p: 0.0,
            s1: 1.0,
            s1p: 1.0,
        };
    }
    if lambda > 0.0 {
        let w = lambda.sqrt();
        TransferData {
            c1: w.cos(),
            c1p: -w * w.sin(),
            s1: w.sin() / w,
            s1p: w.cos(),
        }
    } else {
        let k = (-lambda).sqrt();
        TransferData {
            c1: k.cosh(),
            c1p: k * k.sinh(),
            s1: k.sinh() / k,
            s1p: k.cosh(),
        }
    }
}

/// Leading-order values near the odd-multiple cluster `λ = (2k+1)²π² + d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferPrediction {
    pub k: u32,
    pub d: f64,
    pub lambda: f64,
    /// `(1/√λ)·c'(1,λ)`
    pub scaled_c1p: f64,
    pub s1p: f64,
    pub c1: f64,
    /// `√λ·s(1,λ)`
    pub scaled_s1: f64,
}

impl TransferPrediction {
    /// Predicted quantities in the order `(1/√λ)c', s', c, √λ s`.
    pub fn as_array(&self) -> [f64; 4] {
        [self.scaled_c1p, self.s1p, self.c1, self.scaled_s1]
    }
}

pub fn cluster_center(k: u32) -> f64 {
    let m = (2 * k + 1) as f64 * PI;
    m * m
}

pub fn asymptotic_predictions(q: &EdgePotential, k: u32, d: f64) -> TransferPrediction {
    let lambda = cluster_center(k) + d;
    let root = lambda.sqrt();
    let mean = q.integral();
    TransferPrediction {
        k,
        d,
        lambda,
        scaled_c1p: (d - mean) / (2.0 * root),
        s1p: -1.0,
        c1: -1.0,
        scaled_s1: (mean - d) / (2.0 * root),
    }
}

/// `√λ·|actual − predicted|` for the four quantities in [`TransferPrediction::as_array`] order.
pub fn asymptotic_residuals(q: &EdgePotential, k: u32, d: f64) -> [f64; 4] {
    let pred = asymptotic_predictions(q, k, d);
    let t = propagate(q, pred.lambda);
    let root = pred.lambda.sqrt();
    let actual = [t.c1p / root, t.s1p, t.c1, root * t.s1];
    let p = pred.as_array();
    std::array::from_fn(|i| root * (actual[i] - p[i]).abs())
}
