//! Exhaustions with a prescribed boundary weight.

use super::kappa::{Kappa, SmoothStepKappa, SmoothingKappa};
use super::model::{Biharmonic, Model, TruncatedRho};
use super::{ConstructionTag, Exhaustion};
use crate::disc::{fourier, CircleFunction, DiskField, PolarGrid};
use crate::error::{DiscError, Result};

/// Truncation applied to `ρ` by [`construct_exhaustion_c2_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KappaChoice {
    /// Convex smooth step ([`SmoothStepKappa`]).
    #[default]
    SmoothStep,
    /// The explicit exponential formula ([`SmoothingKappa`]); not convex, so
    /// the result is usually rejected as non-subharmonic.
    Smoothing,
}

fn positive_samples(psi: &CircleFunction, grid: PolarGrid) -> Result<Vec<f64>> {
    if psi.grid() != grid.angles() {
        return Err(DiscError::GridMismatch(format!(
            "{} weight samples for {} grid angles",
            psi.len(),
            grid.n_angles()
        )));
    }
    if !psi.is_real() {
        return Err(DiscError::ComplexInput);
    }
    psi.check_finite()?;
    let values = psi.real_values();
    if let Some((index, &value)) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .filter(|(_, &v)| v <= 0.0)
    {
        return Err(DiscError::NonPositive { index, value });
    }
    Ok(values)
}

/// `ρ(re^{iθ}) = ½(r² − 1)ψ(θ)`.
pub fn build_rho(psi: &CircleFunction, grid: PolarGrid) -> Result<DiskField> {
    let values = positive_samples(psi, grid)?;
    let n = grid.n_angles();
    let mut out = Vec::with_capacity(grid.n_radii() * n);
    for i in 0..grid.n_radii() {
        let q = 0.5 * (grid.radius(i).powi(2) - 1.0);
        out.extend(values.iter().map(|p| q * p));
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    DiskField::new(grid, -0.5 * mean, out)
}

/// `Δρ = 2ψ + ((r² − 1)/(2r²))ψ''` with `ψ''` computed spectrally.
///
/// `Δρ` is unbounded at the origin unless `ψ` is constant; the center value
/// is the angular mean `2ψ̄`.
pub fn rho_laplacian(psi: &CircleFunction, grid: PolarGrid) -> Result<DiskField> {
    let values = positive_samples(psi, grid)?;
    let d2 = fourier::derivative(&values, 2);
    let n = grid.n_angles();
    let mut out = Vec::with_capacity(grid.n_radii() * n);
    for i in 0..grid.n_radii() {
        let r = grid.radius(i);
        let q = (r * r - 1.0) / (2.0 * r * r);
        out.extend(values.iter().zip(&d2).map(|(p, pp)| 2.0 * p + q * pp));
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    DiskField::new(grid, 2.0 * mean, out)
}

/// Level `τ < 0` below which `ρ` is flattened.
///
/// Along ray `k`, `Δρ ≤ 0` exactly when `r² ≤ ψ''/(4ψ + ψ'')`, where
/// `ρ ≤ −2ψ²/(4ψ + ψ'')`. The level sits above that and above `−min ψ/2`,
/// so a full neighbourhood of the origin is flat.
fn truncation_level(psi: &[f64], d2: &[f64], grid: PolarGrid) -> Result<f64> {
    let min_psi = psi.iter().copied().fold(f64::INFINITY, f64::min);
    let max_psi = psi.iter().copied().fold(0.0, f64::max);
    let mut worst = -0.5 * min_psi;
    let mut worst_ray = None;
    for (k, (&p, &pp)) in psi.iter().zip(d2).enumerate() {
        if pp > 0.0 {
            let top = -2.0 * p * p / (4.0 * p + pp);
            if top > worst {
                worst = top;
                worst_ray = Some(k);
            }
        }
    }
    if worst >= -1e-12 * max_psi {
        let where_ = worst_ray
            .map(|k| format!("near θ = {:.6}", grid.theta(k)))
            .unwrap_or_else(|| "at the origin".into());
        return Err(DiscError::NoAdmissibleLevel(format!(
            "Δρ ≤ 0 reaches the boundary {where_} (max ρ on that set {worst:e})"
        )));
    }
    Ok(0.9 * worst)
}

fn check_density(e: &Exhaustion) -> Result<()> {
    let d = e.riesz_density();
    let scale = d.max().abs().max(1.0);
    let (ring, angle, min) = d.argmin();
    if min < -1e-9 * scale {
        return Err(DiscError::NotSubharmonic { min, ring, angle });
    }
    Ok(())
}

fn make_kappa(tau: f64, choice: KappaChoice) -> Result<Kappa> {
    Ok(match choice {
        KappaChoice::SmoothStep => Kappa::SmoothStep(SmoothStepKappa::new(tau)?),
        KappaChoice::Smoothing => Kappa::Smoothing(SmoothingKappa::new(tau)?),
    })
}

/// `u = κ ∘ ρ` with weight `V_u = ψ`, using the smooth-step truncation.
pub fn construct_exhaustion_c2(psi: &CircleFunction, grid: PolarGrid) -> Result<Exhaustion> {
    construct_exhaustion_c2_with(psi, grid, KappaChoice::SmoothStep)
}

pub fn construct_exhaustion_c2_with(
    psi: &CircleFunction,
    grid: PolarGrid,
    choice: KappaChoice,
) -> Result<Exhaustion> {
    let values = positive_samples(psi, grid)?;
    let d2 = fourier::derivative(&values, 2);
    let tau = truncation_level(&values, &d2, grid)?;
    let model = Model::Truncated(TruncatedRho::new(values, make_kappa(tau, choice)?));
    let e = Exhaustion::from_model(
        grid,
        model,
        ConstructionTag::KappaRho,
        Vec::new(),
        Some(psi.clone()),
    )?;
    check_density(&e)?;
    Ok(e)
}

/// Truncated telescoping sum `u = Σ_{n<depth} u_n` for a non-decreasing
/// sequence of weights.
///
/// The increments are `d₀ = ψ₀` and `d_n = ψ_n − ψ_{n−1} + 2^{−n}`, so
/// `d_n ≥ 2^{−n}` and the weight of the sum is `ψ_{depth−1} + 1 − 2^{1−depth}`.
/// Each `u_n` is flattened at a level in `[−2^{−n}, 0)`, hence `|u_n| ≤ 2^{−n}`.
pub fn construct_exhaustion_lsc(
    psi_seq: &[CircleFunction],
    depth: usize,
    grid: PolarGrid,
) -> Result<Exhaustion> {
    if depth == 0 || depth > psi_seq.len() {
        return Err(DiscError::Precondition(format!(
            "depth {depth} must lie in 1..={}",
            psi_seq.len()
        )));
    }
    let seq = psi_seq
        .iter()
        .map(|p| {
            if p.grid() != grid.angles() {
                return Err(DiscError::GridMismatch("weight sequence vs grid".into()));
            }
            if !p.is_real() {
                return Err(DiscError::ComplexInput);
            }
            p.check_finite()?;
            Ok(p.real_values())
        })
        .collect::<Result<Vec<_>>>()?;
    positive_samples(&psi_seq[0], grid)?;

    let mut increments = vec![seq[0].clone()];
    for n in 1..seq.len() {
        let shift = 0.5f64.powi(n as i32);
        let mut d = Vec::with_capacity(seq[n].len());
        for (k, (&a, &b)) in seq[n].iter().zip(&seq[n - 1]).enumerate() {
            if a < b - 1e-12 * (1.0 + b.abs()) {
                return Err(DiscError::NotMonotone {
                    index: n,
                    detail: format!("ψ_{n} < ψ_{} at angle index {k} ({a} < {b})", n - 1),
                });
            }
            d.push(a - b + shift);
        }
        increments.push(d);
    }

    let mut parts: Vec<TruncatedRho> = Vec::with_capacity(depth);
    let mut levels: Vec<f64> = Vec::with_capacity(depth);
    for (n, d) in increments.iter().take(depth).enumerate() {
        let d2 = fourier::derivative(d, 2);
        let mut tau = truncation_level(d, &d2, grid)?.max(-(0.5f64.powi(n as i32)));
        if let (Some(prev), Some(&prev_tau)) = (parts.last(), levels.last()) {
            // keep {ρ_{n−1} < τ_{n−1}} inside {ρ_n < τ_n}
            let mut needed = f64::NEG_INFINITY;
            for i in 0..grid.n_radii() {
                let r = grid.radius(i);
                for (k, &dk) in d.iter().enumerate() {
                    if prev.rho(k, r) < prev_tau {
                        needed = needed.max(0.5 * (r * r - 1.0) * dk);
                    }
                }
            }
            if needed >= tau {
                tau = 0.9 * needed;
            }
        }
        levels.push(tau);
        parts.push(TruncatedRho::new(
            d.clone(),
            Kappa::SmoothStep(SmoothStepKappa::new(tau)?),
        ));
    }

    let angles = grid.angles();
    let mut target = vec![0.0; angles.len()];
    for d in increments.iter().take(depth) {
        target.iter_mut().zip(d).for_each(|(t, x)| *t += x);
    }
    let tail: f64 = increments[depth..]
        .iter()
        .map(|d| d.iter().copied().fold(0.0, f64::max))
        .sum::<f64>()
        + 0.5f64.powi(seq.len() as i32 - 1);

    let mut e = Exhaustion::from_model(
        grid,
        Model::Sum(parts),
        ConstructionTag::LscSum,
        Vec::new(),
        Some(CircleFunction::from_real(angles, target)?),
    )?;
    check_density(&e)?;
    e.set_tail_bound(tail);
    Ok(e)
}

/// `u = ½(|z|² − 1)(Pψ + M)`, whose Riesz density `2(Pψ + M) + 2r∂_r Pψ`
/// is harmonic and whose weight is `ψ + M`.
///
/// Without `M` the smallest non-negative constant making the density
/// non-negative on the grid is used, plus `1e−6`.
pub fn construct_biharmonic(
    psi: &CircleFunction,
    m: Option<f64>,
    grid: PolarGrid,
) -> Result<Exhaustion> {
    if psi.grid() != grid.angles() {
        return Err(DiscError::GridMismatch(format!(
            "{} weight samples for {} grid angles",
            psi.len(),
            grid.n_angles()
        )));
    }
    if !psi.is_real() {
        return Err(DiscError::ComplexInput);
    }
    psi.check_finite()?;
    let values = psi.real_values();
    if let Some((index, &value)) = values.iter().enumerate().find(|(_, &v)| v < -1e-12) {
        return Err(DiscError::NonPositive { index, value });
    }
    let base = Biharmonic::new(&values, 0.0);
    // half-density without M: Pψ + r∂_r Pψ
    let mut min_half = base.eval(0, 0.0).laplacian / 2.0;
    let mut at = (0, 0);
    for i in 0..grid.n_radii() {
        let r = grid.radius(i);
        for k in 0..grid.n_angles() {
            let q = base.eval(k, r).laplacian / 2.0;
            if q < min_half {
                min_half = q;
                at = (i, k);
            }
        }
    }
    let m_const = match m {
        None => (-min_half).max(0.0) + 1e-6,
        Some(m) => {
            if !m.is_finite() {
                return Err(DiscError::Precondition("M must be finite".into()));
            }
            let min = 2.0 * (min_half + m);
            let scale = values.iter().copied().fold(1.0, f64::max) + m.abs();
            if min < -1e-9 * scale {
                return Err(DiscError::NotSubharmonic {
                    min,
                    ring: at.0,
                    angle: at.1,
                });
            }
            m
        }
    };
    let weight: Vec<f64> = values.iter().map(|p| p + m_const).collect();
    let floor = weight.iter().copied().fold(f64::INFINITY, f64::min);
    if floor <= 1e-12 {
        return Err(DiscError::Precondition(format!(
            "weight ψ + M is not bounded below by a positive constant (min {floor:e})"
        )));
    }
    Exhaustion::from_model(
        grid,
        Model::Biharmonic(Biharmonic::new(&values, m_const)),
        ConstructionTag::Biharmonic,
        Vec::new(),
        Some(CircleFunction::from_real(grid.angles(), weight)?),
    )
}
