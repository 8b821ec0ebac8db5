//! Numerical substrate: grids, circle functions, disk fields, Poisson
//! machinery, quadrature and Laplacians.

mod circle;
mod field;
pub mod fourier;
mod grid;
mod ops;
pub mod quad;

pub use circle::CircleFunction;
pub use field::DiskField;
pub use grid::{AngleGrid, PolarGrid};
pub use ops::{
    analytic_completion, area_integral, boundary_integral, boundary_integral_complex,
    harmonic_extension, harmonic_ring, laplacian, poisson_kernel, radial_boundary_derivative,
};
