use std::f64::consts::TAU;

use num_complex::Complex64;

use super::analytic::{AnalyticFunction, Factorization};
use super::factors::is_outer;
use super::norms::membership;
use super::series;
use crate::disc::{analytic_completion, AngleGrid, CircleFunction, PolarGrid};
use crate::error::{DiscError, Result};
use crate::exhaustion::{construct_exhaustion_c2, construct_exhaustion_lsc, Exhaustion};

/// Samples with `|φ*| < ZERO_FLOOR·max|φ*|` are treated as boundary zeros.
const ZERO_FLOOR: f64 = 1e-8;

/// Number of weights in the increasing sequence used for unbounded weights.
const LSC_DEPTH: usize = 8;

/// `sgn α = |α|/α` with `sgn 0 = 0`.
pub fn sgn(a: Complex64) -> Complex64 {
    let r = a.norm();
    if r == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        a.conj() / r
    }
}

/// A weight `V ≥ 1` with its outer function `φ`, `|φ*|²V = 1`, and an
/// exponent `p ∈ [1, ∞)`.
///
/// Powers `φ^s` use the branch `exp(s·log φ)` with `φ(0) > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct HardyContext {
    weight: CircleFunction,
    phi: AnalyticFunction,
    log_phi: CircleFunction,
    log_phi_taylor: Vec<Complex64>,
    p: f64,
    scale: f64,
    excluded: Vec<usize>,
    unbounded: bool,
    outer_residual: f64,
}

fn check_exponent(p: f64) -> Result<()> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(DiscError::InvalidExponent(p));
    }
    Ok(())
}

impl HardyContext {
    pub fn grid(&self) -> AngleGrid {
        self.weight.grid()
    }

    pub fn weight(&self) -> &CircleFunction {
        &self.weight
    }

    pub fn phi(&self) -> &AnalyticFunction {
        &self.phi
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Factor `t` with `V = t·V_input`, recorded when `min V_input < 1`.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Samples where `φ*` vanishes to working precision.
    pub fn excluded_samples(&self) -> &[usize] {
        &self.excluded
    }

    /// `true` when `∫V dν` fails to converge under refinement.
    pub fn is_unbounded(&self) -> bool {
        self.unbounded
    }

    /// [`is_outer`] residual of `φ` recorded at construction.
    pub fn outer_residual(&self) -> f64 {
        self.outer_residual
    }

    /// The same weight with another exponent.
    pub fn with_exponent(&self, p: f64) -> Result<Self> {
        check_exponent(p)?;
        let mut ctx = self.clone();
        ctx.p = p;
        Ok(ctx)
    }

    /// Boundary values of `log φ`.
    pub fn log_phi(&self) -> &CircleFunction {
        &self.log_phi
    }

    /// `φ^s = exp(s·log φ)`.
    pub fn phi_power(&self, s: f64) -> AnalyticFunction {
        let boundary = self.log_phi.map(|l| (l * s).exp());
        let scaled: Vec<Complex64> = self.log_phi_taylor.iter().map(|&l| l * s).collect();
        let taylor = series::exp(&scaled, scaled.len());
        let factored = Factorization {
            blaschke_zeros: Vec::new(),
            singular_atoms: Vec::new(),
            outer_log_modulus: self.log_phi.map_to_real(|l| s * l.re),
        };
        AnalyticFunction::from_parts(taylor, boundary, Some(factored))
    }

    /// `sgn(φ*²)` on the grid.
    pub fn sgn_phi_squared(&self) -> CircleFunction {
        self.phi.boundary().map(|v| sgn(v * v))
    }

    /// `sup ||φ*|²V − 1|` over non-excluded samples.
    pub fn u_inner_defect(&self) -> f64 {
        let phi = self.phi.boundary();
        (0..self.weight.len())
            .filter(|k| !self.excluded.contains(k))
            .map(|k| (phi.value(k).norm_sqr() * self.weight.value(k).re - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// `(V, excluded)` on another grid, with `V = 1/|φ*|²` from the Taylor
    /// coefficients of `φ`.
    pub(crate) fn weight_on(&self, grid: AngleGrid) -> (Vec<f64>, Vec<bool>) {
        if grid == self.grid() {
            let mut mask = vec![false; grid.len()];
            self.excluded.iter().for_each(|&k| mask[k] = true);
            return (self.weight.real_values(), mask);
        }
        let phi = self.phi.boundary_on(grid);
        let moduli: Vec<f64> = phi.values().iter().map(|v| v.norm()).collect();
        let floor = ZERO_FLOOR * moduli.iter().copied().fold(0.0, f64::max);
        let mask = moduli.iter().map(|&m| m < floor).collect();
        (moduli.iter().map(|m| 1.0 / (m * m)).collect(), mask)
    }
}

/// Context of a weight: `φ = exp(analytic_completion(−½ log V))`.
///
/// Weights with `min V < 1` are multiplied by `1/min V` first.
pub fn context_from_weight(v: &CircleFunction, p: f64) -> Result<HardyContext> {
    check_exponent(p)?;
    if !v.is_real() {
        return Err(DiscError::ComplexInput);
    }
    v.check_finite()?;
    let values = v.real_values();
    if let Some((index, &value)) = values.iter().enumerate().find(|(_, &x)| x <= 0.0) {
        return Err(DiscError::NonPositive { index, value });
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let scale = if min < 1.0 { 1.0 / min } else { 1.0 };
    let weight = v.scale(scale);
    let half_log = weight.map_real(|x| -0.5 * x.ln());
    let log_phi = analytic_completion(&half_log)?;
    let log_phi_taylor = series::from_boundary(&log_phi);
    let len = log_phi_taylor.len();
    let phi = AnalyticFunction::from_parts(
        series::exp(&log_phi_taylor, len),
        log_phi.map(|l| l.exp()),
        Some(Factorization {
            blaschke_zeros: Vec::new(),
            singular_atoms: Vec::new(),
            outer_log_modulus: half_log,
        }),
    );
    let outer_residual = is_outer(&phi)?;
    Ok(HardyContext {
        weight,
        phi,
        log_phi,
        log_phi_taylor,
        p,
        scale,
        excluded: Vec::new(),
        unbounded: false,
        outer_residual,
    })
}

/// `log|v| + i·arg v` with the argument unwrapped along the grid and its
/// mean shifted to the interval `(−π, π]`.
fn unwrapped_log(values: &[Complex64]) -> Vec<Complex64> {
    let mut args = Vec::with_capacity(values.len());
    let mut prev = 0.0;
    for (k, v) in values.iter().enumerate() {
        let mut a = v.arg();
        if k > 0 {
            a += TAU * ((prev - a) / TAU).round();
        }
        args.push(a);
        prev = a;
    }
    let mean = args.iter().sum::<f64>() / args.len() as f64;
    let shift = TAU * (mean / TAU).round();
    values
        .iter()
        .zip(args)
        .map(|(v, a)| Complex64::new(v.norm().ln(), a - shift))
        .collect()
}

/// Context and exhaustion with weight `V = 1/|φ*|²`.
///
/// `φ` is rotated so that `φ(0) > 0` and divided by `max|φ*|` when that
/// exceeds 1. Bounded weights go through [`construct_exhaustion_c2`];
/// weights whose integral diverges under refinement go through
/// [`construct_exhaustion_lsc`] with `ψ_n = 1/(|φ*|² + 2^{−n})` and the
/// Riesz mass is reported infinite. Samples where `φ*` vanishes are capped
/// at the zero floor and listed as excluded.
pub fn context_from_phi(
    phi: &AnalyticFunction,
    p: f64,
    n_radii: usize,
) -> Result<(HardyContext, Exhaustion)> {
    check_exponent(p)?;
    let grid = PolarGrid::new(n_radii, phi.grid().len())?;
    let a0 = phi.value_at_origin();
    if a0.norm() == 0.0 {
        return Err(DiscError::VanishesAtOrigin);
    }
    let winding = phi.winding_number(0.98);
    if winding != 0 {
        return Err(DiscError::ZerosInDisk(winding));
    }
    let rotated = phi.scale(a0.norm() / a0);
    let max = rotated
        .boundary()
        .values()
        .iter()
        .map(|v| v.norm())
        .fold(0.0, f64::max);
    let (phi, scale) = if max > 1.0 {
        (rotated.scale(Complex64::new(1.0 / max, 0.0)), max * max)
    } else {
        (rotated, 1.0)
    };

    let samples = phi.boundary().values();
    let floor = ZERO_FLOOR * max.min(1.0);
    let excluded: Vec<usize> = (0..samples.len())
        .filter(|&k| samples[k].norm() < floor)
        .collect();
    let angles = phi.grid();
    // boundary zeros are capped at the floor so every sample stays finite
    let capped: Vec<Complex64> = samples
        .iter()
        .map(|&v| {
            if v.norm() < floor {
                Complex64::new(floor, 0.0)
            } else {
                v
            }
        })
        .collect();
    let log_phi = CircleFunction::from_complex(angles, unwrapped_log(&capped))?;
    let len = phi.taylor().len().max(angles.len() / 2 + 1);
    let log_phi_taylor = series::log(phi.taylor(), len);
    let weight =
        CircleFunction::from_real(angles, capped.iter().map(|v| 1.0 / v.norm_sqr()).collect())?;
    weight.check_finite()?;
    let outer_residual = is_outer(&phi)?;

    let mut ctx = HardyContext {
        weight,
        phi,
        log_phi,
        log_phi_taylor,
        p,
        scale,
        excluded,
        unbounded: false,
        outer_residual,
    };
    let one = AnalyticFunction::constant(angles, Complex64::new(1.0, 0.0));
    ctx.unbounded = !ctx.excluded.is_empty() || membership(&one, &ctx).divergent;
    if !ctx.unbounded && outer_residual > 1e-6 {
        return Err(DiscError::NotOuter(outer_residual));
    }

    let exhaustion = if ctx.unbounded {
        let moduli: Vec<f64> = samples_modulus_sq(&ctx);
        let seq = (0..LSC_DEPTH)
            .map(|n| {
                let eps = 0.5f64.powi(n as i32);
                CircleFunction::from_real(angles, moduli.iter().map(|m| 1.0 / (m + eps)).collect())
            })
            .collect::<Result<Vec<_>>>()?;
        let mut e = construct_exhaustion_lsc(&seq, LSC_DEPTH, grid)?;
        e.mark_infinite_mass();
        e
    } else {
        construct_exhaustion_c2(&ctx.weight, grid)?
    };
    Ok((ctx, exhaustion))
}

fn samples_modulus_sq(ctx: &HardyContext) -> Vec<f64> {
    ctx.phi
        .boundary()
        .values()
        .iter()
        .map(|v| v.norm_sqr())
        .collect()
}
