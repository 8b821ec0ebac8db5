use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::analytic::{
    atom_samples, blaschke_value, on_atom, singular_value, AnalyticFunction, Factorization,
    SingularAtom,
};
use super::context::HardyContext;
use super::series;
use crate::disc::{analytic_completion, AngleGrid, CircleFunction};
use crate::error::{DiscError, Result};

fn series_len(grid: AngleGrid) -> usize {
    grid.len() / 2 + 1
}

fn zero_log(grid: AngleGrid) -> CircleFunction {
    CircleFunction::constant(grid, 0.0)
}

/// Outer function with boundary modulus `w`, positive at the origin.
pub fn outer_from_modulus(w: &CircleFunction) -> Result<AnalyticFunction> {
    if !w.is_real() {
        return Err(DiscError::ComplexInput);
    }
    w.check_finite()?;
    let values = w.real_values();
    if let Some((index, &value)) = values.iter().enumerate().find(|(_, &x)| x <= 0.0) {
        return Err(DiscError::NonPositive { index, value });
    }
    let log_w = w.map_real(f64::ln);
    let log_f = analytic_completion(&log_w)?;
    let taylor = series::exp(&series::from_boundary(&log_f), series_len(w.grid()));
    Ok(AnalyticFunction::from_parts(
        taylor,
        log_f.map(|l| l.exp()),
        Some(Factorization {
            blaschke_zeros: Vec::new(),
            singular_atoms: Vec::new(),
            outer_log_modulus: log_w,
        }),
    ))
}

/// Finite Blaschke product with the given zeros.
pub fn blaschke(grid: AngleGrid, zeros: &[Complex64]) -> Result<AnalyticFunction> {
    if let Some(z) = zeros.iter().find(|z| z.norm().is_nan() || z.norm() >= 1.0) {
        return Err(DiscError::OutsideDisk(z.norm()));
    }
    let len = series_len(grid);
    let mut taylor = vec![Complex64::new(1.0, 0.0)];
    for &a in zeros {
        let factor = if a == Complex64::new(0.0, 0.0) {
            vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]
        } else {
            // (|a|/a)(a − z)·Σ (āz)^j
            let u = a.norm() / a;
            let mut geo = Vec::with_capacity(len);
            let mut pow = Complex64::new(1.0, 0.0);
            for _ in 0..len {
                geo.push(pow);
                pow *= a.conj();
            }
            series::mul(&[u * a, -u], &geo, len)
        };
        taylor = series::mul(&taylor, &factor, len);
    }
    let boundary = CircleFunction::from_complex_fn(grid, |t| {
        blaschke_value(zeros, Complex64::from_polar(1.0, t))
    });
    Ok(AnalyticFunction::from_parts(
        taylor,
        boundary,
        Some(Factorization {
            blaschke_zeros: zeros.to_vec(),
            singular_atoms: Vec::new(),
            outer_log_modulus: zero_log(grid),
        }),
    ))
}

/// `S(z) = exp(−Σ m_k (ζ_k + z)/(ζ_k − z))`. Samples sitting on an atom
/// take the radial limit 0.
pub fn singular_inner(grid: AngleGrid, atoms: &[SingularAtom]) -> Result<AnalyticFunction> {
    if let Some(a) = atoms
        .iter()
        .find(|a| !(a.mass >= 0.0 && a.mass.is_finite()))
    {
        return Err(DiscError::Precondition(format!(
            "singular mass {} must be non-negative",
            a.mass
        )));
    }
    let len = series_len(grid);
    // −(ζ + z)/(ζ − z) = −1 − 2Σ_{n≥1} (z/ζ)ⁿ
    let mut h = vec![Complex64::new(0.0, 0.0); len];
    for a in atoms {
        h[0] -= a.mass;
        for (n, c) in h.iter_mut().enumerate().skip(1) {
            *c -= 2.0 * a.mass * Complex64::from_polar(1.0, -(n as f64) * a.angle);
        }
    }
    let taylor = series::exp(&h, len);
    let boundary = CircleFunction::from_complex_fn(grid, |t| {
        if on_atom(atoms, t) {
            Complex64::new(0.0, 0.0)
        } else {
            singular_value(atoms, Complex64::from_polar(1.0, t))
        }
    });
    Ok(AnalyticFunction::from_parts(
        taylor,
        boundary,
        Some(Factorization {
            blaschke_zeros: Vec::new(),
            singular_atoms: atoms.to_vec(),
            outer_log_modulus: zero_log(grid),
        }),
    ))
}

/// `|log|f(0)| − ∫ log|f*| dν|`, averaging over samples off singular atoms.
pub fn is_outer(f: &AnalyticFunction) -> Result<f64> {
    let f0 = f.value_at_origin().norm();
    if f0 == 0.0 {
        return Err(DiscError::VanishesAtOrigin);
    }
    let skip = f
        .factored()
        .map(|fac| atom_samples(&fac.singular_atoms, f.grid()))
        .unwrap_or_default();
    let (sum, count) = f
        .boundary()
        .values()
        .iter()
        .enumerate()
        .filter(|(k, _)| !skip.contains(k))
        .fold((0.0, 0usize), |(s, c), (_, v)| (s + v.norm().ln(), c + 1));
    Ok((f0.ln() - sum / count as f64).abs())
}

fn require_factored<'a>(f: &'a AnalyticFunction, what: &str) -> Result<&'a Factorization> {
    f.factored()
        .ok_or_else(|| DiscError::Precondition(format!("{what} carries no factored form")))
}

/// `f = B·S·φ^{2/p}·F`.
pub fn compose_factorization(
    b: &AnalyticFunction,
    s: &AnalyticFunction,
    ctx: &HardyContext,
    f: &AnalyticFunction,
) -> Result<AnalyticFunction> {
    let bf = require_factored(b, "Blaschke factor")?;
    let sf = require_factored(s, "singular factor")?;
    let phi = ctx.phi_power(2.0 / ctx.p());
    let product = b.mul(s)?.mul(&phi)?.mul(f)?;
    product
        .boundary()
        .check_finite()
        .map_err(|_| DiscError::Branch("non-finite boundary product; φ^{2/p} undefined".into()))?;
    let outer_log_modulus = phi
        .factored()
        .expect("powers of φ are factored")
        .outer_log_modulus
        .zip_with(&f.boundary().abs(), |l, m| l + m.re.ln())?
        .into_real();
    Ok(product.with_factorization(Factorization {
        blaschke_zeros: bf.blaschke_zeros.clone(),
        singular_atoms: sf.singular_atoms.clone(),
        outer_log_modulus,
    }))
}

/// Outer part recovered from a factored function, with the samples that
/// had to be skipped.
#[derive(Debug, Clone, PartialEq)]
pub struct RecoveredOuter {
    pub outer: AnalyticFunction,
    pub excluded: Vec<usize>,
    pub analyticity_defect: f64,
    pub outer_residual: f64,
}

/// `F = f/(B·S·φ^{2/p})` on boundary samples.
///
/// Samples on singular atoms, where `|B·S| < 1e−10`, or where `φ*` vanishes
/// are excluded and filled so that the result stays analytic.
pub fn recover_outer_part(
    f: &AnalyticFunction,
    b: &AnalyticFunction,
    s: &AnalyticFunction,
    ctx: &HardyContext,
) -> Result<RecoveredOuter> {
    let grid = f.grid();
    let n = grid.len();
    let phi = ctx.phi_power(2.0 / ctx.p());
    let atoms: Vec<SingularAtom> = s
        .factored()
        .map(|x| x.singular_atoms.clone())
        .unwrap_or_default();
    let inner = b.boundary().mul(s.boundary())?;
    let denom = inner.mul(phi.boundary())?;
    let mut excluded = Vec::new();
    let mut values = vec![Complex64::new(0.0, 0.0); n];
    for (k, t) in grid.thetas().enumerate() {
        if on_atom(&atoms, t)
            || inner.value(k).norm() < 1e-10
            || ctx.excluded_samples().contains(&k)
        {
            excluded.push(k);
        } else {
            values[k] = f.boundary().value(k) / denom.value(k);
        }
    }
    if excluded.len() * 8 > n {
        return Err(DiscError::TooManyExclusions {
            excluded: excluded.len(),
            total: n,
        });
    }
    fill_gaps(&mut values, &excluded)?;
    let outer = AnalyticFunction::from_boundary(CircleFunction::from_complex(grid, values)?);
    let analyticity_defect = outer.analyticity_defect();
    if analyticity_defect > 1e-8 {
        return Err(DiscError::NotAnalytic(analyticity_defect));
    }
    let outer_residual = is_outer(&outer)?;
    if outer_residual > 1e-6 {
        return Err(DiscError::NotOuter(outer_residual));
    }
    Ok(RecoveredOuter {
        outer,
        excluded,
        analyticity_defect,
        outer_residual,
    })
}

/// Fills excluded samples with the values that minimize the
/// negative-frequency content of the whole sample vector, in least squares.
/// This is exact for band-limited analytic data.
fn fill_gaps(values: &mut [Complex64], excluded: &[usize]) -> Result<()> {
    let n = values.len();
    if excluded.is_empty() {
        return Ok(());
    }
    let rows = n / 2 - 1;
    let angle =
        |j: usize, k: usize| Complex64::from_polar(1.0, TAU * (j * k % n) as f64 / n as f64);
    let a = DMatrix::from_fn(rows, excluded.len(), |r, c| angle(r + 1, excluded[c]));
    let rhs = DVector::from_fn(rows, |r, _| {
        -values
            .iter()
            .enumerate()
            .map(|(k, v)| v * angle(r + 1, k))
            .sum::<Complex64>()
    });
    let x = a
        .svd(true, true)
        .solve(&rhs, 1e-12)
        .map_err(|e| DiscError::Precondition(format!("gap fill: {e}")))?;
    for (&k, v) in excluded.iter().zip(x.iter()) {
        values[k] = *v;
    }
    Ok(())
}
