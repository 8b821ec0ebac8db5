//! Truncation functions `κ` that flatten `ρ` near the origin while keeping
//! `κ(0) = 0` and `κ'(0) = 1` at the boundary.

use std::f64::consts::E;

use crate::disc::quad;
use crate::error::{DiscError, Result};

/// `κ(t) = c + exp(−a / (t − c)^b)` for `t > c` and `κ(t) = c` otherwise,
/// with `a = −ln(−c)/e` and `b = −1/ln(−c)`.
///
/// These constants give `κ(0) = 0` and `κ'(0) = 1`. The function is not
/// convex on `[c, 0]`: `κ''(0) = b/c < 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothingKappa {
    c: f64,
    a: f64,
    b: f64,
}

impl SmoothingKappa {
    pub fn new(c: f64) -> Result<Self> {
        if !(c > -1.0 && c < 0.0) {
            return Err(DiscError::InvalidLevel(c));
        }
        let l = (-c).ln();
        Ok(Self {
            c,
            a: -l / E,
            b: -1.0 / l,
        })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Evaluates the formula for any `t`; values for `t > 0` continue the
    /// analytic branch.
    pub fn value(&self, t: f64) -> f64 {
        if t <= self.c {
            return self.c;
        }
        if t == 0.0 {
            return 0.0;
        }
        // c + e^{-a s^{-b}} written as (−c)·expm1(·) so that κ(0) cancels cleanly
        let s = t - self.c;
        (-self.c) * (-self.a * (s.powf(-self.b) - E)).exp_m1()
    }

    pub fn deriv(&self, t: f64) -> f64 {
        if t <= self.c {
            return 0.0;
        }
        let s = t - self.c;
        let sb = s.powf(-self.b);
        (-self.a * sb).exp() * sb / (E * s)
    }

    pub fn second_deriv(&self, t: f64) -> f64 {
        if t <= self.c {
            return 0.0;
        }
        let s = t - self.c;
        let sb = s.powf(-self.b);
        let e = (-self.a * sb).exp();
        e / E * (sb * sb / (E * s * s) - (self.b + 1.0) * sb / (s * s))
    }
}

/// Convex smooth step: `κ'` rises from 0 at `τ` to 1 at `τ/2` through the
/// `C^∞` step `S(x) = 1/(1 + exp(1/x − 1/(1−x)))`.
///
/// `κ(t) = t` on `[τ/2, 0]` and `κ(t) = 3τ/4` for `t ≤ τ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothStepKappa {
    tau: f64,
}

fn step(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let g = 1.0 / x - 1.0 / (1.0 - x);
        1.0 / (1.0 + g.exp())
    }
}

fn step_deriv(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    let s = step(x);
    s * (1.0 - s) * (1.0 / (x * x) + 1.0 / ((1.0 - x) * (1.0 - x)))
}

/// `∫₀ˣ S` for `x ∈ [0, 1]`, using `S(y) + S(1 − y) = 1`.
fn step_integral(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 0.5;
    }
    if x > 0.5 {
        // ∫₀ˣ S = x − ∫₀ˣ S(1−y) dy = x − (1/2 − ∫₀^{1−x} S)
        return x - 0.5 + step_integral(1.0 - x);
    }
    let mut rule = Vec::with_capacity(128);
    quad::panels(0.0, x, 16, &mut rule);
    rule.iter().map(|&(y, w)| w * step(y)).sum()
}

impl SmoothStepKappa {
    pub fn new(tau: f64) -> Result<Self> {
        if !(tau < 0.0 && tau.is_finite()) {
            return Err(DiscError::InvalidLevel(tau));
        }
        Ok(Self { tau })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    fn width(&self) -> f64 {
        -self.tau / 2.0
    }

    fn x(&self, t: f64) -> f64 {
        (t - self.tau) / self.width()
    }

    pub fn value(&self, t: f64) -> f64 {
        let x = self.x(t);
        if x >= 1.0 {
            t
        } else {
            0.75 * self.tau + self.width() * step_integral(x)
        }
    }

    pub fn deriv(&self, t: f64) -> f64 {
        step(self.x(t))
    }

    pub fn second_deriv(&self, t: f64) -> f64 {
        step_deriv(self.x(t)) / self.width()
    }
}

/// Which truncation to apply to `ρ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kappa {
    Smoothing(SmoothingKappa),
    SmoothStep(SmoothStepKappa),
}

impl Kappa {
    pub fn value(&self, t: f64) -> f64 {
        match self {
            Kappa::Smoothing(k) => k.value(t),
            Kappa::SmoothStep(k) => k.value(t),
        }
    }

    pub fn deriv(&self, t: f64) -> f64 {
        match self {
            Kappa::Smoothing(k) => k.deriv(t),
            Kappa::SmoothStep(k) => k.deriv(t),
        }
    }

    pub fn second_deriv(&self, t: f64) -> f64 {
        match self {
            Kappa::Smoothing(k) => k.second_deriv(t),
            Kappa::SmoothStep(k) => k.second_deriv(t),
        }
    }

    /// Level below which `κ` is constant.
    pub fn threshold(&self) -> f64 {
        match self {
            Kappa::Smoothing(k) => k.c(),
            Kappa::SmoothStep(k) => k.tau(),
        }
    }

    /// The constant value taken below [`Kappa::threshold`].
    pub fn flat_level(&self) -> f64 {
        match self {
            Kappa::Smoothing(k) => k.c(),
            Kappa::SmoothStep(k) => 0.75 * k.tau(),
        }
    }

    /// Levels where `κ` changes regime; used to split quadrature panels.
    pub(crate) fn breakpoints(&self) -> Vec<f64> {
        match self {
            Kappa::Smoothing(k) => vec![k.c()],
            Kappa::SmoothStep(k) => vec![k.tau(), 0.5 * k.tau()],
        }
    }
}
