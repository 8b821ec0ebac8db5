use super::analytic::AnalyticFunction;
use super::context::HardyContext;
use crate::disc::CircleFunction;
use crate::error::{DiscError, Result};

/// `(∫|F|^p dν)^{1/p}` by the trapezoid rule.
pub fn hp_norm(f: &CircleFunction, p: f64) -> f64 {
    let sum: f64 = f.values().iter().map(|v| v.norm().powf(p)).sum();
    (sum / f.len() as f64).powf(1.0 / p)
}

/// `∫|g|^p V dν` with excluded samples contributing nothing.
fn weighted_integral(samples: &CircleFunction, weight: &[f64], mask: &[bool], p: f64) -> f64 {
    let sum: f64 = samples
        .values()
        .iter()
        .zip(weight)
        .zip(mask)
        .filter(|(_, &m)| !m)
        .map(|((v, w), _)| v.norm().powf(p) * w)
        .sum();
    sum / samples.len() as f64
}

/// `(∫|g|^p V dν)^{1/p}` for boundary data `g` on the context grid.
pub fn lp_norm_weighted(g: &CircleFunction, ctx: &HardyContext) -> f64 {
    let (weight, mask) = ctx.weight_on(g.grid());
    weighted_integral(g, &weight, &mask, ctx.p()).powf(1.0 / ctx.p())
}

/// `‖f‖_{u,p} = (∫|f*|^p V dν)^{1/p}`.
pub fn weighted_norm(f: &AnalyticFunction, ctx: &HardyContext) -> f64 {
    lp_norm_weighted(&f.boundary_on(ctx.grid()), ctx)
}

/// Classical and weighted norms of `f`, with the weighted integral on `n`,
/// `2n` and `4n` samples.
///
/// The weighted quadrature is flagged divergent when its last increment is
/// not below 0.9 times the previous one.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipReport {
    pub classical_norm: f64,
    pub weighted_norm: f64,
    pub refinement: [f64; 3],
    pub divergent: bool,
    pub excluded: Vec<usize>,
}

impl MembershipReport {
    pub fn is_member(&self) -> bool {
        !self.divergent && self.weighted_norm.is_finite()
    }
}

pub fn membership(f: &AnalyticFunction, ctx: &HardyContext) -> MembershipReport {
    let p = ctx.p();
    let mut grid = ctx.grid();
    let mut refinement = [0.0; 3];
    for slot in refinement.iter_mut() {
        let (weight, mask) = ctx.weight_on(grid);
        *slot = weighted_integral(&f.boundary_on(grid), &weight, &mask, p);
        grid = grid.refined();
    }
    let [a, b, c] = refinement;
    let (d1, d2) = ((b - a).abs(), (c - b).abs());
    let divergent = !refinement.iter().all(|x| x.is_finite())
        || (d2 > 1e-9 * c.abs().max(1.0) && d2 >= 0.9 * d1);
    MembershipReport {
        classical_norm: hp_norm(&f.boundary_on(ctx.grid()), p),
        weighted_norm: a.powf(1.0 / p),
        refinement,
        divergent,
        excluded: ctx.excluded_samples().to_vec(),
    }
}

fn check_finite_transfer(f: &CircleFunction) -> Result<()> {
    f.check_finite()
        .map_err(|_| DiscError::Branch("φ^{∓2/p} is not finite on the grid".into()))
}

/// `F = φ^{−2/p}·f`, an isometry `H^p_u → H^p`.
pub fn transfer_to_classical(f: &AnalyticFunction, ctx: &HardyContext) -> Result<AnalyticFunction> {
    let out = f.mul(&ctx.phi_power(-2.0 / ctx.p()))?;
    check_finite_transfer(out.boundary())?;
    Ok(out)
}

/// `f = φ^{2/p}·F`, the inverse of [`transfer_to_classical`].
pub fn transfer_from_classical(
    f: &AnalyticFunction,
    ctx: &HardyContext,
) -> Result<AnalyticFunction> {
    let out = f.mul(&ctx.phi_power(2.0 / ctx.p()))?;
    check_finite_transfer(out.boundary())?;
    Ok(out)
}

/// Direction of [`transfer_lp`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transfer {
    /// `L^p(V dν) → L^p(dν)`, division by `φ^{2/p}`.
    ToClassical,
    /// `L^p(dν) → L^p(V dν)`, multiplication by `φ^{2/p}`.
    FromClassical,
}

pub fn transfer_lp(
    g: &CircleFunction,
    ctx: &HardyContext,
    direction: Transfer,
) -> Result<CircleFunction> {
    let s = match direction {
        Transfer::ToClassical => -2.0 / ctx.p(),
        Transfer::FromClassical => 2.0 / ctx.p(),
    };
    let factor = ctx.log_phi().map(|l| (l * s).exp());
    g.mul(&factor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disc::AngleGrid;
    use crate::hardy::{context_from_phi, context_from_weight};
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn exp_ctx(n: usize, p: f64) -> HardyContext {
        let grid = AngleGrid::new(n).unwrap();
        let v = CircleFunction::from_real_fn(grid, |t| (2.0 - 2.0 * t.cos()).exp());
        context_from_weight(&v, p).unwrap()
    }

    #[test]
    fn monomials_have_unit_norm_classically() {
        let grid = AngleGrid::new(64).unwrap();
        for &p in &[1.0, 2.0, 3.5] {
            let ctx = context_from_weight(&CircleFunction::constant(grid, 1.0), p).unwrap();
            for n in 0..10 {
                let f = AnalyticFunction::monomial(grid, n);
                assert!((weighted_norm(&f, &ctx) - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn phi_has_unit_weighted_norm() {
        let ctx = exp_ctx(128, 2.0);
        assert!((weighted_norm(ctx.phi(), &ctx) - 1.0).abs() < 1e-13);
        let back = transfer_to_classical(ctx.phi(), &ctx).unwrap();
        assert!(back
            .boundary()
            .values()
            .iter()
            .all(|v| (v - c(1.0)).norm() < 1e-13));
    }

    #[test]
    fn membership_of_constants() {
        let ctx = exp_ctx(64, 2.0);
        let one = AnalyticFunction::constant(ctx.grid(), c(1.0));
        let report = membership(&one, &ctx);
        assert!(report.is_member());
        // ∫ exp(2 − 2cos θ) dν = e² I₀(2)
        let mass = 2f64.exp() * 2.279_585_302_336_067;
        assert!((report.weighted_norm.powi(2) - mass).abs() < 1e-12);
        assert!((report.classical_norm - 1.0).abs() < 1e-15);
    }

    #[test]
    fn unbounded_weight_membership() {
        let grid = AngleGrid::new(128).unwrap();
        let phi = AnalyticFunction::from_taylor(grid, &[c(0.5), c(0.5)]);
        let (ctx, _) = context_from_phi(&phi, 2.0, 32).unwrap();
        let one = AnalyticFunction::constant(grid, c(1.0));
        let r = membership(&one, &ctx);
        assert!(r.divergent && !r.is_member());
        assert!(r.refinement[2] > 1.8 * r.refinement[1]);
        let half = AnalyticFunction::from_taylor(grid, &[c(0.5), c(0.5)]);
        let f = transfer_from_classical(&half, &ctx).unwrap();
        let r = membership(&f, &ctx);
        assert!(r.is_member());
        assert!((r.weighted_norm - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn lp_transfer_round_trip() {
        let ctx = exp_ctx(64, 3.0);
        let g = CircleFunction::from_complex_fn(ctx.grid(), |t| {
            Complex64::new(t.sin(), (3.0 * t).cos())
        });
        let to = transfer_lp(&g, &ctx, Transfer::ToClassical).unwrap();
        assert!((lp_norm_weighted(&g, &ctx) - hp_norm(&to, 3.0)).abs() < 1e-12);
        let back = transfer_lp(&to, &ctx, Transfer::FromClassical).unwrap();
        assert!(back.sup_distance(&g) < 1e-13);
        let phi = ctx.phi_power(2.0 / 3.0);
        let one = transfer_lp(phi.boundary(), &ctx, Transfer::ToClassical).unwrap();
        assert!(one.values().iter().all(|v| (v - c(1.0)).norm() < 1e-13));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn isometry_on_random_polynomials(
            coeffs in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..9),
            p_idx in 0usize..3,
        ) {
            let p = [1.0, 2.0, 4.0][p_idx];
            let ctx = exp_ctx(64, p);
            let taylor: Vec<Complex64> = coeffs.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
            let f = AnalyticFunction::from_taylor(ctx.grid(), &taylor);
            let big_f = transfer_to_classical(&f, &ctx).unwrap();
            let lhs = weighted_norm(&f, &ctx);
            prop_assert!((lhs - hp_norm(big_f.boundary(), p)).abs() <= 1e-9 * lhs.max(1.0));
            let back = transfer_from_classical(&big_f, &ctx).unwrap();
            prop_assert!(back.boundary().sup_distance(f.boundary()) < 1e-10);
        }

        #[test]
        fn norm_axioms(
            a in proptest::collection::vec(-1.0f64..1.0, 4),
            b in proptest::collection::vec(-1.0f64..1.0, 4),
            t in -3.0f64..3.0,
        ) {
            let ctx = exp_ctx(32, 1.5);
            let fa = AnalyticFunction::from_taylor(ctx.grid(), &a.iter().map(|&x| c(x)).collect::<Vec<_>>());
            let fb = AnalyticFunction::from_taylor(ctx.grid(), &b.iter().map(|&x| c(x)).collect::<Vec<_>>());
            let sum = fa.add(&fb).unwrap();
            prop_assert!(weighted_norm(&sum, &ctx) <= weighted_norm(&fa, &ctx) + weighted_norm(&fb, &ctx) + 1e-12);
            let scaled = weighted_norm(&fa.scale(c(t)), &ctx);
            prop_assert!((scaled - t.abs() * weighted_norm(&fa, &ctx)).abs() < 1e-12);
        }
    }
}
