//! Closed-form evaluation of exhaustions along grid rays.
//!
//! Grid fields are kept for display and finite-difference checks, but the
//! quadratures behind balayage, level sets and the Jensen-type identities
//! evaluate `u`, its gradient and its Laplacian from these models.

use std::f64::consts::TAU;

use num_complex::Complex64;

use super::kappa::Kappa;
use crate::disc::{fourier, DiskField};

/// `u`, its polar derivatives and its classical Laplacian at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RayPoint {
    pub u: f64,
    pub u_r: f64,
    pub u_theta: f64,
    pub laplacian: f64,
}

impl RayPoint {
    fn scaled(self, s: f64) -> Self {
        Self {
            u: s * self.u,
            u_r: s * self.u_r,
            u_theta: s * self.u_theta,
            laplacian: s * self.laplacian,
        }
    }

    fn add(self, o: RayPoint) -> Self {
        Self {
            u: self.u + o.u,
            u_r: self.u_r + o.u_r,
            u_theta: self.u_theta + o.u_theta,
            laplacian: self.laplacian + o.laplacian,
        }
    }

    /// `|∇u|` at radius `r`.
    pub fn gradient_norm(&self, r: f64) -> f64 {
        if r == 0.0 {
            self.u_r.abs()
        } else {
            self.u_r.hypot(self.u_theta / r)
        }
    }
}

/// `κ ∘ ρ` with `ρ = ½(r² − 1)ψ(θ)`, sampled on the rays of the grid.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct TruncatedRho {
    pub psi: Vec<f64>,
    pub dpsi: Vec<f64>,
    pub d2psi: Vec<f64>,
    pub kappa: Kappa,
}

impl TruncatedRho {
    pub fn new(psi: Vec<f64>, kappa: Kappa) -> Self {
        let dpsi = fourier::derivative(&psi, 1);
        let d2psi = fourier::derivative(&psi, 2);
        Self {
            psi,
            dpsi,
            d2psi,
            kappa,
        }
    }

    pub fn rho(&self, k: usize, r: f64) -> f64 {
        0.5 * (r * r - 1.0) * self.psi[k]
    }

    pub fn eval(&self, k: usize, r: f64) -> RayPoint {
        let (p, dp, d2p) = (self.psi[k], self.dpsi[k], self.d2psi[k]);
        let q = 0.5 * (r * r - 1.0);
        let rho = q * p;
        let k1 = self.kappa.deriv(rho);
        let k2 = self.kappa.second_deriv(rho);
        let u = self.kappa.value(rho);
        if k1 == 0.0 && k2 == 0.0 {
            return RayPoint {
                u,
                ..RayPoint::default()
            };
        }
        let rho_r = r * p;
        let rho_t = q * dp;
        let lap_rho = 2.0 * p + q * d2p / (r * r);
        let grad2 = rho_r * rho_r + rho_t * rho_t / (r * r);
        RayPoint {
            u,
            u_r: k1 * rho_r,
            u_theta: k1 * rho_t,
            laplacian: k1 * lap_rho + k2 * grad2,
        }
    }

    /// Radii on ray `k` where `κ` changes regime, with the transition
    /// layer between them split into equal panels.
    pub fn breaks(&self, k: usize, out: &mut Vec<f64>) {
        let radius = |t: f64| (1.0 + 2.0 * t / self.psi[k]).clamp(0.0, 1.0).sqrt();
        let levels = self.kappa.breakpoints();
        let radii: Vec<f64> = levels.iter().map(|&t| radius(t)).collect();
        out.extend(radii.iter().copied().filter(|&r| r > 0.0 && r < 1.0));
        if let [a, b] = radii[..] {
            const LAYER_PANELS: usize = 16;
            out.extend((1..LAYER_PANELS).map(|i| a + (b - a) * i as f64 / LAYER_PANELS as f64));
        }
    }
}

/// Poisson extension `Pψ` of real boundary samples as a truncated power
/// series `Re Σ (2 − δ_{m0}) ĉ_m z^m`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct HarmonicSeries {
    /// `(m, ĉ_m)` for `m ≥ 0`; the Nyquist coefficient is halved.
    modes: Vec<(u32, Complex64)>,
    n_angles: usize,
}

impl HarmonicSeries {
    pub fn new(samples: &[f64]) -> Self {
        let n = samples.len();
        let coeffs = fourier::forward_real(samples);
        let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let mut modes = Vec::new();
        for (m, &c) in coeffs.iter().enumerate().take(n / 2 + 1) {
            let c = if m == n / 2 { c * 0.5 } else { c };
            if m == 0 || c.norm() > 1e-18 * scale {
                modes.push((m as u32, c));
            }
        }
        Self { modes, n_angles: n }
    }

    /// `(Pψ, ∂_r Pψ, ∂_θ Pψ)` at `(r, θ_k)`.
    pub fn eval(&self, k: usize, r: f64) -> (f64, f64, f64) {
        let theta = TAU * k as f64 / self.n_angles as f64;
        let w = Complex64::from_polar(1.0, theta);
        let (mut p, mut pr, mut pt) = (0.0, 0.0, 0.0);
        for &(m, c) in &self.modes {
            if m == 0 {
                p += c.re;
                continue;
            }
            let rm1 = r.powi(m as i32 - 1);
            let term = c * w.powu(m);
            p += 2.0 * rm1 * r * term.re;
            pr += 2.0 * m as f64 * rm1 * term.re;
            pt += -2.0 * m as f64 * rm1 * r * term.im;
        }
        (p, pr, pt)
    }

    /// `Pψ(z)` at an arbitrary point of the disk.
    pub fn value_at(&self, z: Complex64) -> f64 {
        self.modes
            .iter()
            .map(|&(m, c)| {
                let t = (c * z.powu(m)).re;
                if m == 0 {
                    t
                } else {
                    2.0 * t
                }
            })
            .sum()
    }
}

/// `½(r² − 1)(Pψ + M)`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Biharmonic {
    series: HarmonicSeries,
    m_const: f64,
}

impl Biharmonic {
    pub fn new(psi: &[f64], m_const: f64) -> Self {
        Self {
            series: HarmonicSeries::new(psi),
            m_const,
        }
    }

    pub fn eval(&self, k: usize, r: f64) -> RayPoint {
        let (p, pr, pt) = self.series.eval(k, r);
        let q = 0.5 * (r * r - 1.0);
        let s = p + self.m_const;
        RayPoint {
            u: q * s,
            u_r: r * s + q * pr,
            u_theta: q * pt,
            laplacian: 2.0 * s + 2.0 * r * pr,
        }
    }
}

/// Sum of point masses `Σ m log|(z − a)/(1 − āz)|`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Green {
    pub masses: Vec<(Complex64, f64)>,
    pub n_angles: usize,
}

impl Green {
    pub fn eval(&self, k: usize, r: f64) -> RayPoint {
        let theta = TAU * k as f64 / self.n_angles as f64;
        let dir = Complex64::from_polar(1.0, theta);
        let z = dir * r;
        let mut out = RayPoint::default();
        for &(a, m) in &self.masses {
            let num = z - a;
            let den = Complex64::new(1.0, 0.0) - a.conj() * z;
            let u = (num.norm() / den.norm()).ln();
            let g = Complex64::new(1.0, 0.0) / num + a.conj() / den;
            out.u += m * u;
            out.u_r += m * (g * dir).re;
            out.u_theta += m * (g * Complex64::i() * z).re;
        }
        out
    }

    /// True when every mass sits at the origin.
    pub fn is_radial(&self) -> bool {
        self.masses.iter().all(|(a, _)| a.norm() == 0.0)
    }
}

/// Piecewise-cubic interpolation of sampled fields.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Sampled {
    pub u: DiskField,
    pub u_theta: DiskField,
    pub laplacian: DiskField,
}

impl Sampled {
    pub fn eval(&self, k: usize, r: f64) -> RayPoint {
        RayPoint {
            u: self.u.ray_value(k, r),
            u_r: self.u.ray_derivative(k, r),
            u_theta: self.u_theta.ray_value(k, r),
            laplacian: self.laplacian.ray_value(k, r),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Model {
    Green(Green),
    Truncated(TruncatedRho),
    Sum(Vec<TruncatedRho>),
    Biharmonic(Biharmonic),
    Sampled(Box<Sampled>),
}

impl Model {
    pub fn eval(&self, k: usize, r: f64, scale: f64) -> RayPoint {
        let p = match self {
            Model::Green(g) => g.eval(k, r),
            Model::Truncated(t) => t.eval(k, r),
            Model::Sum(ts) => ts
                .iter()
                .fold(RayPoint::default(), |acc, t| acc.add(t.eval(k, r))),
            Model::Biharmonic(b) => b.eval(k, r),
            Model::Sampled(s) => s.eval(k, r),
        };
        p.scaled(scale)
    }

    /// Radii on ray `k` where the integrand is not smooth, plus the maximal
    /// panel width that resolves it.
    pub fn breaks(&self, k: usize) -> (Vec<f64>, f64) {
        let mut out = Vec::new();
        let width = match self {
            Model::Green(g) => {
                out.extend(g.masses.iter().map(|(a, _)| a.norm()));
                1.0 / 16.0
            }
            Model::Truncated(t) => {
                t.breaks(k, &mut out);
                1.0 / 64.0
            }
            Model::Sum(ts) => {
                for t in ts {
                    t.breaks(k, &mut out);
                }
                1.0 / 64.0
            }
            Model::Biharmonic(_) => 1.0 / 32.0,
            Model::Sampled(s) => 1.0 / s.u.grid().n_radii() as f64,
        };
        (out, width)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exhaustion::kappa::SmoothStepKappa;

    #[test]
    fn biharmonic_matches_closed_form_for_cosine() {
        let n = 32;
        let psi: Vec<f64> = (0..n)
            .map(|k| 2.0 + (TAU * k as f64 / n as f64).cos())
            .collect();
        let b = Biharmonic::new(&psi, 0.5);
        let (r, k) = (0.6, 5);
        let t = TAU * k as f64 / n as f64;
        let p = 2.0 + r * t.cos();
        let q = 0.5 * (r * r - 1.0);
        let e = b.eval(k, r);
        assert!((e.u - q * (p + 0.5)).abs() < 1e-14);
        assert!((e.u_r - (r * (p + 0.5) + q * t.cos())).abs() < 1e-14);
        assert!((e.u_theta - (-q * r * t.sin())).abs() < 1e-14);
        assert!((e.laplacian - (2.0 * (p + 0.5) + 2.0 * r * t.cos())).abs() < 1e-14);
    }

    #[test]
    fn green_derivatives_match_differences() {
        let g = Green {
            masses: vec![(Complex64::new(0.3, -0.2), 1.5)],
            n_angles: 16,
        };
        let (k, r, h) = (3, 0.7, 1e-6);
        let e = g.eval(k, r);
        let fd = (g.eval(k, r + h).u - g.eval(k, r - h).u) / (2.0 * h);
        assert!((fd - e.u_r).abs() < 1e-8);
        // θ-derivative through the neighbouring rays is too coarse; use the
        // closed form of log|z − a| directly
        let a = Complex64::new(0.3, -0.2);
        let f = |t: f64| {
            let z = Complex64::from_polar(r, t);
            1.5 * ((z - a).norm() / (1.0 - a.conj() * z).norm()).ln()
        };
        let t = TAU * 3.0 / 16.0;
        let fdt = (f(t + h) - f(t - h)) / (2.0 * h);
        assert!((fdt - e.u_theta).abs() < 1e-8);
    }

    #[test]
    fn truncated_rho_laplacian_matches_polar_differences() {
        let n = 64;
        let psi: Vec<f64> = (0..n)
            .map(|k| 2.0 + (TAU * k as f64 / n as f64).cos())
            .collect();
        let kappa = Kappa::SmoothStep(SmoothStepKappa::new(-0.8).unwrap());
        let t = TruncatedRho::new(psi, kappa);
        let k = 9;
        let theta = TAU * k as f64 / n as f64;
        let f = |r: f64, th: f64| {
            let rho = 0.5 * (r * r - 1.0) * (2.0 + th.cos());
            kappa.value(rho)
        };
        for &r in &[0.45, 0.6, 0.8] {
            let h = 1e-4;
            let urr = (f(r + h, theta) - 2.0 * f(r, theta) + f(r - h, theta)) / (h * h);
            let ur = (f(r + h, theta) - f(r - h, theta)) / (2.0 * h);
            let utt = (f(r, theta + h) - 2.0 * f(r, theta) + f(r, theta - h)) / (h * h);
            let lap = urr + ur / r + utt / (r * r);
            let e = t.eval(k, r);
            assert!(
                (e.laplacian - lap).abs() < 1e-5,
                "r={r}: {} vs {lap}",
                e.laplacian
            );
            let d = 1e-6;
            let ur_fine = (f(r + d, theta) - f(r - d, theta)) / (2.0 * d);
            assert!((e.u_r - ur_fine).abs() < 1e-8, "{} vs {ur_fine}", e.u_r);
        }
    }
}
