//! Negative subharmonic exhaustions of the disk, their boundary weights,
//! level-set measures and the Jensen-type identities relating them.

mod construct;
mod identities;
mod kappa;
mod level;
mod model;
mod weight;

use num_complex::Complex64;

use crate::disc::{fourier, quad, CircleFunction, DiskField, PolarGrid};
use crate::error::{DiscError, Result};

pub use construct::{
    build_rho, construct_biharmonic, construct_exhaustion_c2, construct_exhaustion_c2_with,
    construct_exhaustion_lsc, rho_laplacian, KappaChoice,
};
pub use identities::{
    demailly_pairing, dlj_rhs, majorant_norm, monotone_chain, shu_norm, ShuNorm, SubdomainChain,
};
pub use kappa::{Kappa, SmoothStepKappa, SmoothingKappa};
pub use level::{level_set, sublevel_extent, ContourKind, LevelSetData};
pub use model::RayPoint;
pub use weight::{weight_balayage, weight_balayage_truncated, weight_radial};

use model::{Green, Model, Sampled};

/// How an exhaustion was built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstructionTag {
    KappaRho,
    LscSum,
    Biharmonic,
    Green,
    Custom,
}

impl ConstructionTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            ConstructionTag::KappaRho => "kappa_rho",
            ConstructionTag::LscSum => "lsc_sum",
            ConstructionTag::Biharmonic => "biharmonic",
            ConstructionTag::Green => "green",
            ConstructionTag::Custom => "custom",
        }
    }
}

/// Total Riesz mass `∫Δu` in the normalized convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RieszMass {
    Finite(f64),
    Infinite,
}

impl RieszMass {
    pub fn finite(&self) -> Option<f64> {
        match *self {
            RieszMass::Finite(m) => Some(m),
            RieszMass::Infinite => None,
        }
    }
}

/// Atom of the Riesz measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointMass {
    pub location: Complex64,
    pub mass: f64,
}

/// A negative subharmonic exhaustion `u` of the disk.
///
/// `riesz_density` holds the classical Laplacian of the absolutely
/// continuous part; atoms are kept separately in `point_masses`.
#[derive(Debug, Clone, PartialEq)]
pub struct Exhaustion {
    grid: PolarGrid,
    u: DiskField,
    riesz_density: DiskField,
    point_masses: Vec<PointMass>,
    total_mass: RieszMass,
    tag: ConstructionTag,
    model: Model,
    scale: f64,
    prescribed: Option<CircleFunction>,
    tail_bound: f64,
}

impl Exhaustion {
    fn from_model(
        grid: PolarGrid,
        model: Model,
        tag: ConstructionTag,
        point_masses: Vec<PointMass>,
        prescribed: Option<CircleFunction>,
    ) -> Result<Self> {
        let n = grid.n_angles();
        let mut u = Vec::with_capacity(grid.n_radii() * n);
        let mut lap = Vec::with_capacity(grid.n_radii() * n);
        for i in 0..grid.n_radii() {
            let r = grid.radius(i);
            for k in 0..n {
                let p = model.eval(k, r, 1.0);
                u.push(p.u);
                lap.push(p.laplacian);
            }
        }
        let c = model.eval(0, 0.0, 1.0);
        let u = DiskField::new(grid, c.u, u)?;
        let riesz_density = DiskField::new(grid, c.laplacian, lap)?;
        let mut e = Self {
            grid,
            u,
            riesz_density,
            point_masses,
            total_mass: RieszMass::Finite(0.0),
            tag,
            model,
            scale: 1.0,
            prescribed,
            tail_bound: 0.0,
        };
        e.total_mass = RieszMass::Finite(weight::riesz_mass(&e));
        Ok(e)
    }

    /// `u = log|z|`: unit Riesz mass at the origin.
    pub fn green(grid: PolarGrid) -> Self {
        Self::green_potential(
            grid,
            &[PointMass {
                location: Complex64::new(0.0, 0.0),
                mass: 1.0,
            }],
        )
        .expect("unit mass at the origin is admissible")
    }

    /// `u = Σ m_j log|(z − a_j)/(1 − ā_j z)|`.
    pub fn green_potential(grid: PolarGrid, masses: &[PointMass]) -> Result<Self> {
        if masses.is_empty() {
            return Err(DiscError::Precondition("at least one point mass".into()));
        }
        for pm in masses {
            if pm.location.norm() >= 1.0 {
                return Err(DiscError::OutsideDisk(pm.location.norm()));
            }
            if !(pm.mass > 0.0 && pm.mass.is_finite()) {
                return Err(DiscError::Precondition(format!(
                    "point mass {} must be positive",
                    pm.mass
                )));
            }
        }
        let model = Model::Green(Green {
            masses: masses.iter().map(|p| (p.location, p.mass)).collect(),
            n_angles: grid.n_angles(),
        });
        let angles = grid.angles();
        let mut weight = CircleFunction::constant(angles, 0.0);
        for pm in masses {
            let a = pm.location;
            let kernel = CircleFunction::from_real_fn(angles, |t| {
                crate::disc::poisson_kernel(a.norm(), a.arg(), t).expect("|a| < 1") * pm.mass
            });
            weight = weight.zip_with(&kernel, |x, y| x + y)?;
        }
        Self::from_model(
            grid,
            model,
            ConstructionTag::Green,
            masses.to_vec(),
            Some(weight.into_real()),
        )
    }

    /// Wraps a sampled field. Its Riesz density is the finite-difference
    /// Laplacian; `u` must be non-positive.
    pub fn from_field(u: DiskField) -> Result<Self> {
        let max = u.max();
        if max > 1e-12 {
            return Err(DiscError::Precondition(format!(
                "exhaustion must be non-positive, found {max:e}"
            )));
        }
        let grid = u.grid();
        let laplacian = crate::disc::laplacian(&u)?;
        let mut u_theta = u.clone();
        for i in 0..grid.n_radii() {
            let d = fourier::derivative(u.ring(i), 1);
            u_theta.ring_mut(i).copy_from_slice(&d);
        }
        u_theta.set_center(0.0);
        let model = Model::Sampled(Box::new(Sampled {
            u,
            u_theta,
            laplacian,
        }));
        Self::from_model(grid, model, ConstructionTag::Custom, Vec::new(), None)
    }

    pub fn grid(&self) -> PolarGrid {
        self.grid
    }

    pub fn u(&self) -> &DiskField {
        &self.u
    }

    /// Classical Laplacian of `u` on the grid (absolutely continuous part).
    pub fn riesz_density(&self) -> &DiskField {
        &self.riesz_density
    }

    pub fn point_masses(&self) -> &[PointMass] {
        &self.point_masses
    }

    pub fn total_mass(&self) -> RieszMass {
        self.total_mass
    }

    pub fn tag(&self) -> ConstructionTag {
        self.tag
    }

    /// The weight the construction aims at, when it has one.
    pub fn prescribed_weight(&self) -> Option<&CircleFunction> {
        self.prescribed.as_ref()
    }

    /// Sup-norm bound on the weight omitted by a truncated construction.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// Multiplier applied to the underlying construction.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `t·u` for `t > 0`.
    pub fn scaled(&self, t: f64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(DiscError::Precondition(format!(
                "scale {t} must be positive"
            )));
        }
        let mut e = self.clone();
        e.u = self.u.scale(t);
        e.riesz_density = self.riesz_density.scale(t);
        for pm in &mut e.point_masses {
            pm.mass *= t;
        }
        e.total_mass = match self.total_mass {
            RieszMass::Finite(m) => RieszMass::Finite(t * m),
            RieszMass::Infinite => RieszMass::Infinite,
        };
        e.prescribed = self.prescribed.as_ref().map(|w| w.scale(t));
        e.tail_bound *= t;
        e.scale *= t;
        Ok(e)
    }

    /// `u`, `∂u/∂r`, `∂u/∂θ` and the classical Laplacian at `(r, θ_k)`.
    pub fn eval(&self, k: usize, r: f64) -> RayPoint {
        self.model.eval(k, r, self.scale)
    }

    pub(crate) fn mark_infinite_mass(&mut self) {
        self.total_mass = RieszMass::Infinite;
    }

    pub(crate) fn is_radial_green(&self) -> bool {
        matches!(&self.model, Model::Green(g) if g.is_radial())
    }

    /// Gauss–Legendre rule on `[a, b]` along ray `k`, split where the model
    /// is not smooth and graded at the origin.
    pub(crate) fn ray_rule(&self, k: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
        let (breaks, width) = self.model.breaks(k);
        if a > 0.0 || b <= 0.0 {
            return quad::with_breaks(a, b, &breaks, width);
        }
        let first = breaks
            .iter()
            .copied()
            .filter(|&x| x > 0.0 && x < b)
            .fold(b.min(width), f64::min);
        let mut rule = Vec::new();
        quad::graded_from_origin(first, 1, &mut rule);
        rule.extend(quad::with_breaks(first, b, &breaks, width));
        rule
    }

    pub(crate) fn set_tail_bound(&mut self, t: f64) {
        self.tail_bound = t;
    }
}
