use num_complex::Complex64;

use crate::disc::{boundary_integral_complex, CircleFunction};
use crate::error::{DiscError, Result};
use crate::hardy::{
    hp_norm, membership, transfer_lp, transfer_to_classical, AnalyticFunction, HardyContext,
    Transfer,
};

/// `q = p/(p − 1)`, infinite for `p = 1`.
pub fn conjugate_exponent(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else {
        p / (p - 1.0)
    }
}

pub(crate) fn check_conjugate(p: f64, q: f64) -> Result<()> {
    let s = 1.0 / p + 1.0 / q;
    if !(p >= 1.0 && q >= 1.0) || (s - 1.0).abs() > 1e-12 {
        return Err(DiscError::NotConjugate { p, q });
    }
    Ok(())
}

/// `‖G‖_q` on the grid, including `q = ∞`.
pub(crate) fn lq_norm(g: &CircleFunction, q: f64) -> f64 {
    if q.is_infinite() {
        g.values().iter().map(|v| v.norm()).fold(0.0, f64::max)
    } else {
        hp_norm(g, q)
    }
}

/// `‖g‖_{L^q(V dν)}`, samples where `φ*` vanishes skipped.
pub(crate) fn lq_norm_weighted(g: &CircleFunction, ctx: &HardyContext, q: f64) -> f64 {
    let w = ctx.weight();
    skipping_norm(g, ctx.excluded_samples(), q, |k| w.value(k).re)
}

/// `‖G‖_q` over the samples the context admits, so that it is comparable
/// with `lq_norm_weighted`.
pub(crate) fn lq_norm_admissible(g: &CircleFunction, ctx: &HardyContext, q: f64) -> f64 {
    skipping_norm(g, ctx.excluded_samples(), q, |_| 1.0)
}

fn skipping_norm(g: &CircleFunction, skip: &[usize], q: f64, w: impl Fn(usize) -> f64) -> f64 {
    if q.is_infinite() {
        return (0..g.len())
            .filter(|k| !skip.contains(k))
            .map(|k| g.value(k).norm())
            .fold(0.0, f64::max);
    }
    let sum: f64 = (0..g.len())
        .filter(|k| !skip.contains(k))
        .map(|k| g.value(k).norm().powf(q) * w(k))
        .sum();
    (sum / g.len() as f64).powf(1.0 / q)
}

/// `φ^{2/q}·sgn(φ²)` on the grid; `φ⁰ = 1` for `q = ∞`.
pub(crate) fn dual_factor(ctx: &HardyContext, q: f64) -> CircleFunction {
    let s = if q.is_infinite() { 0.0 } else { 2.0 / q };
    let power = ctx.log_phi().map(|l| (l * s).exp());
    power
        .mul(&ctx.sgn_phi_squared())
        .expect("context samples share one grid")
}

/// A functional on `H^p_u` given by `g ∈ L^q(V dν)` and its classical
/// counterpart `G` with `g = φ^{2/q}·sgn(φ²)·G`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryFunctional {
    g: CircleFunction,
    big_g: CircleFunction,
    q: f64,
    ctx: HardyContext,
}

impl BoundaryFunctional {
    /// From the classical side `G ∈ L^q(dν)`; `q` is conjugate to the
    /// context exponent.
    pub fn from_classical(big_g: CircleFunction, ctx: &HardyContext) -> Result<Self> {
        if big_g.grid() != ctx.grid() {
            return Err(DiscError::GridMismatch("functional vs context".into()));
        }
        let q = conjugate_exponent(ctx.p());
        let g = big_g.mul(&dual_factor(ctx, q))?;
        Ok(Self {
            g,
            big_g,
            q,
            ctx: ctx.clone(),
        })
    }

    /// From the weighted side `g ∈ L^q(V dν)`.
    pub fn from_weighted(g: CircleFunction, ctx: &HardyContext) -> Result<Self> {
        let q = conjugate_exponent(ctx.p());
        let factor = dual_factor(ctx, q);
        let big_g = g.zip_with(&factor, |a, b| {
            if b.norm() == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                a / b
            }
        })?;
        Ok(Self {
            g,
            big_g,
            q,
            ctx: ctx.clone(),
        })
    }

    pub fn g(&self) -> &CircleFunction {
        &self.g
    }

    pub fn big_g(&self) -> &CircleFunction {
        &self.big_g
    }

    pub fn p(&self) -> f64 {
        self.ctx.p()
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn ctx(&self) -> &HardyContext {
        &self.ctx
    }

    /// `|‖g‖_{L^q(V dν)} − ‖G‖_q|` over the samples the context admits.
    pub fn transfer_defect(&self) -> f64 {
        (lq_norm_weighted(&self.g, &self.ctx, self.q)
            - lq_norm_admissible(&self.big_g, &self.ctx, self.q))
        .abs()
    }
}

/// `L_G(f)` together with the Hölder bound `‖f‖_{u,p}‖G‖_q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionalValue {
    pub value: Complex64,
    pub bound: f64,
}

impl FunctionalValue {
    pub fn within_bound(&self, tol: f64) -> bool {
        self.value.norm() <= self.bound + tol
    }
}

/// `L_G(f) = ∫ F·G dν` with `F = φ^{−2/p}f`.
pub fn functional_lg(
    big_g: &CircleFunction,
    f: &AnalyticFunction,
    ctx: &HardyContext,
    q: f64,
) -> Result<FunctionalValue> {
    check_conjugate(ctx.p(), q)?;
    let big_f = transfer_to_classical(f, ctx)?;
    let value = boundary_integral_complex(&big_f.boundary().mul(big_g)?);
    Ok(FunctionalValue {
        value,
        bound: hp_norm(big_f.boundary(), ctx.p()) * lq_norm(big_g, q),
    })
}

/// `λ(f) = ∫ F·G·e^{iθ} dν`.
pub fn lambda_functional(f: &AnalyticFunction, bf: &BoundaryFunctional) -> Result<Complex64> {
    let big_f = transfer_to_classical(f, &bf.ctx)?;
    let shifted = bf.big_g.zip_with(
        &CircleFunction::from_frequencies(bf.big_g.grid(), &[(1, Complex64::new(1.0, 0.0))]),
        |a, b| a * b,
    )?;
    Ok(boundary_integral_complex(&big_f.boundary().mul(&shifted)?))
}

/// Largest pairing residual and the norm-transfer error for an annihilator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnihilatorReport {
    pub max_residual: f64,
    pub norm_transfer_error: f64,
}

/// `max |∫ f·g·V dν|` over the test set, with `g = φ^{2/q}·sgn(φ²)·G`.
pub fn annihilator_check(
    big_g: &AnalyticFunction,
    test_set: &[AnalyticFunction],
    ctx: &HardyContext,
    q: f64,
) -> Result<AnnihilatorReport> {
    check_conjugate(ctx.p(), q)?;
    let g0 = big_g.value_at_origin();
    if g0.norm() > 1e-12 {
        return Err(DiscError::Precondition(format!(
            "annihilator requires G(0) = 0, found |G(0)| = {:e}",
            g0.norm()
        )));
    }
    let g = big_g.boundary().mul(&dual_factor(ctx, q))?;
    let gv = g.mul(ctx.weight())?;
    let skip = ctx.excluded_samples();
    let mut max_residual: f64 = 0.0;
    for f in test_set {
        let fb = f.boundary_on(ctx.grid());
        let sum: Complex64 = (0..fb.len())
            .filter(|k| !skip.contains(k))
            .map(|k| fb.value(k) * gv.value(k))
            .sum();
        max_residual = max_residual.max(sum.norm() / fb.len() as f64);
    }
    let norm_transfer_error =
        (lq_norm_weighted(&g, ctx, q) - lq_norm_admissible(big_g.boundary(), ctx, q)).abs();
    Ok(AnnihilatorReport {
        max_residual,
        norm_transfer_error,
    })
}

/// Predual pairing and its largest change under shifts by `e^{inθ}φ^{2/q}`,
/// `n = 1..=4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredualPairing {
    pub value: Complex64,
    pub invariance_residual: f64,
}

/// `∫ [f·φ^{−2/q}]·[G·φ^{−2/p}] dν` for `G ∈ H^p_u` and `f ∈ L^q(V dν)`.
pub fn predual_pairing(
    big_g: &AnalyticFunction,
    f: &CircleFunction,
    ctx: &HardyContext,
    q: f64,
) -> Result<PredualPairing> {
    check_conjugate(ctx.p(), q)?;
    if q.is_infinite() {
        return Err(DiscError::InvalidExponent(q));
    }
    if !membership(big_g, ctx).is_member() {
        return Err(DiscError::Precondition("G is not in H^p_u".into()));
    }
    let g_classical = transfer_to_classical(big_g, ctx)?;
    let ctx_q = ctx.with_exponent(q)?;
    let pair = |f: &CircleFunction| -> Result<Complex64> {
        let fc = transfer_lp(f, &ctx_q, Transfer::ToClassical)?;
        Ok(boundary_integral_complex(&fc.mul(g_classical.boundary())?))
    };
    let value = pair(f)?;
    let phi_q = ctx.phi_power(2.0 / q);
    let mut invariance_residual: f64 = 0.0;
    for n in 1..=4 {
        let shift = CircleFunction::from_frequencies(f.grid(), &[(n, Complex64::new(1.0, 0.0))])
            .mul(phi_q.boundary())?;
        let shifted = f.zip_with(&shift, |a, b| a + b)?;
        invariance_residual = invariance_residual.max((pair(&shifted)? - value).norm());
    }
    Ok(PredualPairing {
        value,
        invariance_residual,
    })
}
