//! The extremal pair `Λ = sup{|λ(f)| : ‖f‖_{p,u} ≤ 1}` and
//! `Γ = inf{‖G − H‖_q : H ∈ H^q}` over polynomials of degree `N`.
//!
//! Both problems are solved on the classical side, where the weighted
//! problem transfers isometrically. On the grid `|λ(F)| ≤ ‖F‖_p‖G − H‖_q`
//! holds exactly whenever `2N + 1 < n`, so `Λ_N ≤ Γ_N` is a hard check on
//! the solvers.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::functional::{lq_norm, BoundaryFunctional};
use crate::disc::{fourier, CircleFunction};
use crate::error::{DiscError, Result};
use crate::hardy::{transfer_from_classical, AnalyticFunction};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Weak duality is reported violated when `Λ > Γ + WEAK_DUALITY_TOL`.
pub const WEAK_DUALITY_TOL: f64 = 1e-6;

/// Budget and seed shared by both solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub degree: usize,
    pub iterations: usize,
    pub seed: u64,
    /// Gradient-norm target of the primal solver and relative-decrease
    /// target of the dual solver.
    pub tolerance: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            degree: 32,
            iterations: 5000,
            seed: 0,
            tolerance: 1e-12,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrimalSolution {
    pub value: f64,
    /// Coefficients of the classical maximizer `F`, `‖F‖_p = 1`, rotated so
    /// that `λ(F) ≥ 0`.
    pub coefficients: Vec<Complex64>,
    /// `f = φ^{2/p}·F`; absent when `λ` vanishes identically.
    pub maximizer: Option<AnalyticFunction>,
    pub iterations: usize,
    pub gradient_norm: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualSolution {
    pub value: f64,
    pub coefficients: Vec<Complex64>,
    /// The classical minimizer `H`.
    pub minimizer: AnalyticFunction,
    /// `g₀ = φ^{2/q}·sgn(φ²)·H`.
    pub g0: CircleFunction,
    pub iterations: usize,
    pub step_norm: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    pub primal_iterations: usize,
    pub dual_iterations: usize,
    pub primal_gradient_norm: f64,
    pub dual_step_norm: f64,
    /// Both solvers converged and `1 < p < ∞`.
    pub certified: bool,
    /// Coefficient distance between maximizers from two random starts.
    pub uniqueness_distance: Option<f64>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalSolution {
    pub lambda_value: f64,
    pub gamma_value: f64,
    pub maximizer: Option<AnalyticFunction>,
    pub minimizer: Option<AnalyticFunction>,
    pub gap: f64,
    pub weak_duality_violated: bool,
    pub diagnostics: Diagnostics,
}

fn check_degree(bf: &BoundaryFunctional, degree: usize) -> Result<usize> {
    let n = bf.big_g().len();
    if 2 * degree + 2 > n {
        return Err(DiscError::Precondition(format!(
            "degree {degree} too large for {n} samples (need 2N + 2 ≤ n)"
        )));
    }
    Ok(n)
}

/// `c_k = Ĝ(−k−1)`, so that `λ(F) = Σ a_k c_k`.
fn lambda_coefficients(bf: &BoundaryFunctional, degree: usize) -> Vec<Complex64> {
    let n = bf.big_g().len();
    let coeffs = bf.big_g().coefficients();
    (0..=degree)
        .map(|k| coeffs[fourier::slot(-(k as i64) - 1, n)])
        .collect()
}

fn samples(a: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut buf = vec![ZERO; n];
    buf[..a.len()].copy_from_slice(a);
    fourier::inverse(&buf)
}

fn lp(values: &[Complex64], p: f64) -> f64 {
    if p.is_infinite() {
        return values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    }
    (values.iter().map(|v| v.norm().powf(p)).sum::<f64>() / values.len() as f64).powf(1.0 / p)
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn inner(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x.conj() * y).re).sum()
}

fn norm2(a: &[Complex64]) -> f64 {
    inner(a, a).sqrt()
}

struct Primal<'a> {
    c: &'a [Complex64],
    p: f64,
    n: usize,
}

impl Primal<'_> {
    fn normalize(&self, a: &mut [Complex64]) {
        let s = lp(&samples(a, self.n), self.p);
        a.iter_mut().for_each(|x| *x /= s);
    }

    fn ratio(&self, a: &[Complex64]) -> f64 {
        dot(a, self.c).norm() / lp(&samples(a, self.n), self.p)
    }

    /// Gradient of `|λ|/‖F‖_p` at a point with `‖F‖_p = 1`.
    fn gradient(&self, a: &[Complex64]) -> Vec<Complex64> {
        let lam = dot(a, self.c);
        let r = lam.norm();
        let phase = if r > 0.0 {
            lam / r
        } else {
            Complex64::new(1.0, 0.0)
        };
        let f = samples(a, self.n);
        let pm2 = self.p - 2.0;
        let dual: Vec<Complex64> = f
            .iter()
            .map(|&v| {
                let m = v.norm();
                if m == 0.0 {
                    ZERO
                } else {
                    v * m.powf(pm2)
                }
            })
            .collect();
        let coef = fourier::forward(&dual);
        self.c
            .iter()
            .enumerate()
            .map(|(k, ck)| ck.conj() * phase - coef[k] * r)
            .collect()
    }

    /// Gradient ascent with Barzilai–Borwein steps and Armijo backtracking,
    /// renormalizing after every step.
    fn solve(
        &self,
        mut a: Vec<Complex64>,
        iterations: usize,
        tol: f64,
    ) -> (Vec<Complex64>, usize, f64, bool) {
        self.normalize(&mut a);
        let mut g = self.gradient(&a);
        let mut value = self.ratio(&a);
        let mut step = 1.0;
        let mut it = 0;
        while it < iterations {
            let gn = norm2(&g);
            if gn <= tol {
                return (a, it, gn, true);
            }
            it += 1;
            let mut t = step;
            let mut accepted = None;
            for _ in 0..60 {
                let mut trial: Vec<Complex64> = a.iter().zip(&g).map(|(x, d)| x + d * t).collect();
                self.normalize(&mut trial);
                let v = self.ratio(&trial);
                if v >= value + 1e-4 * t * gn * gn || (v >= value && t < 1e-12) {
                    accepted = Some((trial, v));
                    break;
                }
                t *= 0.5;
            }
            let Some((next, v)) = accepted else {
                return (a, it, gn, gn <= tol.sqrt());
            };
            let g_next = self.gradient(&next);
            let s: Vec<Complex64> = next.iter().zip(&a).map(|(x, y)| x - y).collect();
            let y: Vec<Complex64> = g_next.iter().zip(&g).map(|(x, y)| x - y).collect();
            let sy = inner(&s, &y).abs();
            step = if sy > 0.0 {
                (inner(&s, &s) / sy).clamp(1e-6, 1e6)
            } else {
                1.0
            };
            a = next;
            g = g_next;
            value = v;
        }
        let gn = norm2(&g);
        (a, it, gn, gn <= tol)
    }
}

fn rotate_positive(a: &mut [Complex64], c: &[Complex64]) {
    let lam = dot(a, c);
    if lam.norm() > 0.0 {
        let u = lam.conj() / lam.norm();
        a.iter_mut().for_each(|x| *x *= u);
    }
}

fn random_start(rng: &mut ChaCha8Rng, len: usize) -> Vec<Complex64> {
    (0..len)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

fn run_primal(
    bf: &BoundaryFunctional,
    opts: &SolverOptions,
    start: Option<Vec<Complex64>>,
) -> Result<PrimalSolution> {
    let n = check_degree(bf, opts.degree)?;
    let c = lambda_coefficients(bf, opts.degree);
    let cn = norm2(&c);
    let scale = lq_norm(bf.big_g(), f64::INFINITY).max(1.0);
    if cn <= 1e-14 * scale {
        return Ok(PrimalSolution {
            value: 0.0,
            coefficients: vec![ZERO; opts.degree + 1],
            maximizer: None,
            iterations: 0,
            gradient_norm: 0.0,
            converged: true,
        });
    }
    let solver = Primal {
        c: &c,
        p: bf.p(),
        n,
    };
    // the p = 2 maximizer conj(c)/‖c‖ is the default start
    let init = start.unwrap_or_else(|| c.iter().map(|x| x.conj() / cn).collect());
    let (mut a, iterations, gradient_norm, converged) =
        solver.solve(init, opts.iterations, opts.tolerance);
    rotate_positive(&mut a, &c);
    let value = solver.ratio(&a);
    let big_f = AnalyticFunction::from_taylor(bf.big_g().grid(), &a);
    let maximizer = Some(transfer_from_classical(&big_f, bf.ctx())?);
    Ok(PrimalSolution {
        value,
        coefficients: a,
        maximizer,
        iterations,
        gradient_norm,
        converged,
    })
}

/// Maximizes `|λ(F)|/‖F‖_p` over polynomials of degree `N`, started from the
/// `p = 2` maximizer.
pub fn primal_extremal(bf: &BoundaryFunctional, opts: &SolverOptions) -> Result<PrimalSolution> {
    run_primal(bf, opts, None)
}

fn residual(g: &[Complex64], b: &[Complex64], n: usize) -> Vec<Complex64> {
    let h = samples(b, n);
    g.iter().zip(h).map(|(x, y)| x - y).collect()
}

/// Solves `(AᴴWA)b = AᴴWG` for `A_{kj} = e^{ijθ_k}`.
fn weighted_least_squares(w: &[f64], g: &[Complex64], degree: usize) -> Option<Vec<Complex64>> {
    let n = w.len();
    let wc: Vec<Complex64> = w.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let w_hat = fourier::forward(&wc);
    let wg: Vec<Complex64> = w.iter().zip(g).map(|(&x, &y)| y * x).collect();
    let rhs_hat = fourier::forward(&wg);
    let m = degree + 1;
    let mat = DMatrix::from_fn(m, m, |i, j| w_hat[fourier::slot(i as i64 - j as i64, n)]);
    let rhs = DVector::from_fn(m, |i, _| rhs_hat[i]);
    let sol = mat.cholesky()?.solve(&rhs);
    Some(sol.iter().copied().collect())
}

/// Minimizes `‖G − H‖_q` over polynomials `H` of degree `N`.
///
/// `q = 2` is the orthogonal projection. Finite `q` uses iteratively
/// reweighted least squares with weights `|r|^{q−2}` clipped to
/// `[1e−8, 1e8]` and a damped step accepted only on decrease. `q = ∞` uses
/// Lawson's reweighting and is never reported converged.
pub fn dual_extremal(bf: &BoundaryFunctional, opts: &SolverOptions) -> Result<DualSolution> {
    let n = check_degree(bf, opts.degree)?;
    let q = bf.q();
    let g = bf.big_g().values().to_vec();
    let coeffs = bf.big_g().coefficients();
    let projection: Vec<Complex64> = (0..=opts.degree).map(|k| coeffs[k]).collect();
    let objective = |b: &[Complex64]| lp(&residual(&g, b, n), q);

    let (b, iterations, step_norm, converged) = if q == 2.0 {
        (projection, 0, 0.0, true)
    } else if q.is_infinite() {
        lawson(&g, projection, opts, n)
    } else {
        let mut b = projection;
        let mut value = objective(&b);
        let mut it = 0;
        let mut step_norm = 0.0;
        let mut converged = false;
        while it < opts.iterations {
            it += 1;
            let r = residual(&g, &b, n);
            let w: Vec<f64> = r
                .iter()
                .map(|v| v.norm().powf(q - 2.0).clamp(1e-8, 1e8))
                .collect();
            let Some(target) = weighted_least_squares(&w, &g, opts.degree) else {
                break;
            };
            let dir: Vec<Complex64> = target.iter().zip(&b).map(|(x, y)| x - y).collect();
            let mut t = 1.0;
            let mut accepted = None;
            for _ in 0..40 {
                let trial: Vec<Complex64> = b.iter().zip(&dir).map(|(x, d)| x + d * t).collect();
                let v = objective(&trial);
                if v < value {
                    accepted = Some((trial, v));
                    break;
                }
                t *= 0.5;
            }
            let Some((next, v)) = accepted else {
                converged = true;
                break;
            };
            step_norm = t * norm2(&dir);
            let decrease = (value - v) / value.max(f64::MIN_POSITIVE);
            b = next;
            value = v;
            if decrease < opts.tolerance {
                converged = true;
                break;
            }
        }
        (b, it, step_norm, converged)
    };

    let value = objective(&b);
    let minimizer = AnalyticFunction::from_taylor(bf.big_g().grid(), &b);
    let factor = super::functional::dual_factor(bf.ctx(), q);
    let g0 = minimizer.boundary().mul(&factor)?;
    Ok(DualSolution {
        value,
        coefficients: b,
        minimizer,
        g0,
        iterations,
        step_norm,
        converged,
    })
}

fn lawson(
    g: &[Complex64],
    start: Vec<Complex64>,
    opts: &SolverOptions,
    n: usize,
) -> (Vec<Complex64>, usize, f64, bool) {
    let mut w = vec![1.0 / n as f64; n];
    let mut best = start.clone();
    let mut best_value = lp(&residual(g, &start, n), f64::INFINITY);
    let mut b = start;
    let mut step_norm = 0.0;
    let mut it = 0;
    while it < opts.iterations {
        it += 1;
        let Some(next) = weighted_least_squares(&w, g, opts.degree) else {
            break;
        };
        step_norm = norm2(&next.iter().zip(&b).map(|(x, y)| x - y).collect::<Vec<_>>());
        b = next;
        let r = residual(g, &b, n);
        let value = lp(&r, f64::INFINITY);
        if value < best_value {
            best_value = value;
            best = b.clone();
        }
        let total: f64 = w.iter().zip(&r).map(|(x, v)| x * v.norm()).sum();
        if total <= 0.0 {
            break;
        }
        w.iter_mut()
            .zip(&r)
            .for_each(|(x, v)| *x = (*x * v.norm() / total).max(1e-300));
    }
    (best, it, step_norm, false)
}

/// Runs both solvers and reports the duality gap.
///
/// For `1 < p < ∞` the primal solver is rerun from two random starts and
/// the distance between the rotated maximizers is reported.
pub fn duality_certificate(
    bf: &BoundaryFunctional,
    opts: &SolverOptions,
) -> Result<ExtremalSolution> {
    let primal = primal_extremal(bf, opts)?;
    let dual = dual_extremal(bf, opts)?;
    let p = bf.p();
    let mut notes = Vec::new();
    let interior = p > 1.0 && p.is_finite();
    if !interior {
        notes.push(
            "p = 1 / q = ∞ endpoint: existence of an extremal needs G continuous; not certified"
                .to_string(),
        );
    }
    if p == 2.0 {
        let closed = lq_norm(
            &CircleFunction::from_coefficients(
                bf.big_g().grid(),
                &negative_part(&bf.big_g().coefficients(), bf.big_g().len()),
            ),
            2.0,
        );
        if (closed - primal.value).abs() > 1e-10 {
            notes.push(format!(
                "primal value {} differs from the closed form {closed}",
                primal.value
            ));
        }
    }
    let uniqueness_distance = if interior && primal.maximizer.is_some() {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let len = opts.degree + 1;
        let a = run_primal(bf, opts, Some(random_start(&mut rng, len)))?;
        let b = run_primal(bf, opts, Some(random_start(&mut rng, len)))?;
        Some(norm2(
            &a.coefficients
                .iter()
                .zip(&b.coefficients)
                .map(|(x, y)| x - y)
                .collect::<Vec<_>>(),
        ))
    } else {
        None
    };
    if !primal.converged {
        notes.push("primal solver did not reach the gradient tolerance".into());
    }
    if !dual.converged && !bf.q().is_infinite() {
        notes.push("dual solver stagnated before the tolerance".into());
    }
    let gap = (primal.value - dual.value).abs();
    let weak_duality_violated = primal.value > dual.value + WEAK_DUALITY_TOL;
    if weak_duality_violated {
        notes.push(format!(
            "weak duality violated: Λ = {} > Γ = {}",
            primal.value, dual.value
        ));
    }
    Ok(ExtremalSolution {
        lambda_value: primal.value,
        gamma_value: dual.value,
        maximizer: primal.maximizer,
        minimizer: Some(dual.minimizer),
        gap,
        weak_duality_violated,
        diagnostics: Diagnostics {
            primal_iterations: primal.iterations,
            dual_iterations: dual.iterations,
            primal_gradient_norm: primal.gradient_norm,
            dual_step_norm: dual.step_norm,
            certified: interior && primal.converged && dual.converged,
            uniqueness_distance,
            notes,
        },
    })
}

fn negative_part(coeffs: &[Complex64], n: usize) -> Vec<Complex64> {
    coeffs
        .iter()
        .enumerate()
        .map(|(idx, &c)| {
            if fourier::frequency(idx, n) < 0 {
                c
            } else {
                ZERO
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disc::AngleGrid;
    use crate::hardy::{context_from_weight, HardyContext};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn ctx(p: f64, exp_weight: bool) -> HardyContext {
        let grid = AngleGrid::new(256).unwrap();
        let v = if exp_weight {
            CircleFunction::from_real_fn(grid, |t| (2.0 - 2.0 * t.cos()).exp())
        } else {
            CircleFunction::constant(grid, 1.0)
        };
        context_from_weight(&v, p).unwrap()
    }

    fn functional(ctx: &HardyContext, terms: &[(i64, Complex64)]) -> BoundaryFunctional {
        BoundaryFunctional::from_classical(CircleFunction::from_frequencies(ctx.grid(), terms), ctx)
            .unwrap()
    }

    #[test]
    fn closed_form_p2() {
        let ctx = ctx(2.0, false);
        let opts = SolverOptions::default();
        let bf = functional(&ctx, &[(-1, c(1.0))]);
        let sol = duality_certificate(&bf, &opts).unwrap();
        assert!((sol.lambda_value - 1.0).abs() < 1e-12);
        assert!((sol.gamma_value - 1.0).abs() < 1e-12);
        assert!(sol.gap < 1e-12);
        let f = sol.maximizer.unwrap();
        assert!(f
            .boundary()
            .values()
            .iter()
            .all(|v| (v - c(1.0)).norm() < 1e-12));
        assert!(sol
            .minimizer
            .unwrap()
            .taylor()
            .iter()
            .all(|v| v.norm() < 1e-14));
        assert!(sol.diagnostics.certified);
        assert!(sol.diagnostics.uniqueness_distance.unwrap() < 1e-8);

        let bf = functional(&ctx, &[(-2, c(1.0)), (0, c(0.5))]);
        let primal = primal_extremal(&bf, &opts).unwrap();
        let dual = dual_extremal(&bf, &opts).unwrap();
        assert!((primal.value - 1.0).abs() < 1e-12);
        assert!((dual.value - 1.0).abs() < 1e-12);
        assert!((dual.minimizer.value_at_origin() - c(0.5)).norm() < 1e-14);
    }

    #[test]
    fn analytic_functional_vanishes() {
        let ctx = ctx(2.0, true);
        let bf = functional(&ctx, &[(0, c(0.7)), (3, c(-1.0))]);
        let sol = duality_certificate(&bf, &SolverOptions::default()).unwrap();
        assert!(sol.lambda_value < 1e-14);
        assert!(sol.gamma_value < 1e-14);
        assert!(sol.maximizer.is_none());
    }

    #[test]
    fn four_thirds_gap_and_weak_duality() {
        let ctx = ctx(4.0 / 3.0, true);
        let bf = functional(&ctx, &[(-1, c(1.0)), (-2, c(0.3))]);
        let opts = SolverOptions {
            degree: 16,
            ..SolverOptions::default()
        };
        let sol = duality_certificate(&bf, &opts).unwrap();
        assert!(!sol.weak_duality_violated, "{sol:?}");
        assert!(sol.gap < 1e-2, "gap {}", sol.gap);
        assert!(sol.lambda_value <= sol.gamma_value + WEAK_DUALITY_TOL);
    }

    #[test]
    fn context_does_not_change_values() {
        let opts = SolverOptions {
            degree: 8,
            ..SolverOptions::default()
        };
        let terms = [(-1, c(1.0)), (-3, Complex64::new(0.2, 0.4))];
        let a = duality_certificate(&functional(&ctx(3.0, false), &terms), &opts).unwrap();
        let b = duality_certificate(&functional(&ctx(3.0, true), &terms), &opts).unwrap();
        assert!((a.lambda_value - b.lambda_value).abs() < 1e-10);
        assert!((a.gamma_value - b.gamma_value).abs() < 1e-10);
    }

    #[test]
    fn degree_is_bounded_by_grid() {
        let ctx = ctx(2.0, false);
        let bf = functional(&ctx, &[(-1, c(1.0))]);
        let opts = SolverOptions {
            degree: 200,
            ..SolverOptions::default()
        };
        assert!(primal_extremal(&bf, &opts).is_err());
    }
}
