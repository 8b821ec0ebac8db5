//! Level sets `S_c = {u = c}`, sublevel sets `B_c = {u < c}` and the
//! measures `μ_{c,u} = V_{c,u} ν_c` carried by the contours.
//!
//! For a regular value the measure is `|∇u| ds / 2π` on `S_c`. We normalize
//! the arclength `ν_c` to total mass one and put `L/2π · |∇u|` into
//! `V_{c,u}`, where `L` is the contour length.

use std::collections::HashMap;
use std::f64::consts::TAU;

use num_complex::Complex64;

use super::Exhaustion;
use crate::disc::DiskField;
use crate::error::{DiscError, Result};

/// Shape of an extracted contour.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContourKind {
    /// A circle about the origin.
    Circle,
    /// One radius per grid angle.
    StarShaped,
    /// Closed polylines from marching squares.
    Polyline { components: usize },
}

/// Discretized `μ_{c,u}` on `S_c`.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSetData {
    c: f64,
    kind: ContourKind,
    /// `(r, θ)` of each contour point.
    points: Vec<(f64, f64)>,
    /// Quadrature weights for `ν_c`, summing to one.
    weights: Vec<f64>,
    v_cu: Vec<f64>,
    radius: Option<f64>,
    mass: f64,
    length: f64,
}

impl LevelSetData {
    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn kind(&self) -> ContourKind {
        self.kind
    }

    /// Contour points as `(r, θ)`.
    pub fn contour(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Density of `μ_{c,u}` with respect to the normalized arclength `ν_c`.
    pub fn v_cu(&self) -> &[f64] {
        &self.v_cu
    }

    /// Radius when the contour is a circle about the origin.
    pub fn radius(&self) -> Option<f64> {
        self.radius
    }

    /// `‖μ_{c,u}‖`.
    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// `∫ f dμ_{c,u}` for `f(r, θ)`.
    pub fn integrate(&self, f: impl Fn(f64, f64) -> f64) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .zip(&self.v_cu)
            .map(|((&(r, t), w), v)| w * v * f(r, t))
            .sum()
    }

    /// `∫ v dμ_{c,u}` with `v` interpolated from the grid.
    pub fn pairing(&self, v: &DiskField) -> f64 {
        self.integrate(|r, t| v.value_at(r, t))
    }
}

/// Refines a sign change of `f` on `[a, b]` by bisection.
fn bisect(mut a: f64, mut b: f64, f: impl Fn(f64) -> f64) -> f64 {
    let fa_neg = f(a) < 0.0;
    for _ in 0..100 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if (f(m) < 0.0) == fa_neg {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Node radii `j/n` for `j = 0..=n` along a ray.
fn node_radius(e: &Exhaustion, j: usize) -> f64 {
    if j == 0 {
        0.0
    } else {
        e.grid().radius(j - 1)
    }
}

/// Intervals of `{r : u(r, θ_k) < c}` on ray `k`.
pub(crate) fn sublevel_intervals(e: &Exhaustion, k: usize, c: f64) -> Vec<(f64, f64)> {
    let n = e.grid().n_radii();
    let f = |r: f64| e.eval(k, r).u - c;
    let mut out = Vec::new();
    let mut start = if f(0.0) < 0.0 { Some(0.0) } else { None };
    let mut prev = f(0.0);
    for j in 1..=n {
        let (r0, r1) = (node_radius(e, j - 1), node_radius(e, j));
        let cur = f(r1);
        if (prev < 0.0) != (cur < 0.0) {
            let root = bisect(r0, r1, f);
            match start.take() {
                Some(s) => out.push((s, root)),
                None => start = Some(root),
            }
        }
        prev = cur;
    }
    if let Some(s) = start {
        out.push((s, 1.0));
    }
    out
}

/// Largest radius reached by `{u < c}` on the grid rays.
pub fn sublevel_extent(e: &Exhaustion, c: f64) -> f64 {
    (0..e.grid().n_angles())
        .flat_map(|k| sublevel_intervals(e, k, c))
        .map(|(_, b)| b)
        .fold(0.0, f64::max)
}

/// `μ_{c,u}` for a regular value `c < 0`.
pub fn level_set(e: &Exhaustion, c: f64) -> Result<LevelSetData> {
    if !(c < 0.0 && c.is_finite()) {
        return Err(DiscError::Precondition(format!(
            "level {c} must be negative"
        )));
    }
    let grid = e.grid();
    let n = grid.n_angles();
    let h = grid.step();
    let mut radii = Vec::with_capacity(n);
    let mut star = true;
    let mut empty = true;
    for k in 0..n {
        let iv = sublevel_intervals(e, k, c);
        if iv.iter().any(|&(_, b)| b > 1.0 - h) {
            return Err(DiscError::TouchesBoundary(c));
        }
        if !iv.is_empty() {
            empty = false;
        }
        match iv.as_slice() {
            [(a, b)] if *a == 0.0 => radii.push(*b),
            _ => star = false,
        }
    }
    if empty {
        return Err(DiscError::NotRegular(c, "the sublevel set is empty".into()));
    }
    if star {
        star_shaped(e, c, radii)
    } else {
        marching(e, c)
    }
}

fn star_shaped(e: &Exhaustion, c: f64, mut radii: Vec<f64>) -> Result<LevelSetData> {
    let grid = e.grid();
    let n = grid.n_angles();
    let dtheta = TAU / n as f64;
    if e.is_radial_green() {
        let m: f64 = e.point_masses().iter().map(|p| p.mass).sum();
        radii.iter_mut().for_each(|r| *r = (c / m).exp());
    }
    let mut ds = Vec::with_capacity(n);
    let mut grad = Vec::with_capacity(n);
    for (k, &r) in radii.iter().enumerate() {
        let p = e.eval(k, r);
        if p.u_r.is_nan() || p.u_r <= 0.0 {
            return Err(DiscError::NotRegular(
                c,
                format!("∂u/∂r = {:e} at θ = {:.6}", p.u_r, grid.theta(k)),
            ));
        }
        let dr = -p.u_theta / p.u_r;
        ds.push(r.hypot(dr) * dtheta);
        grad.push(p.gradient_norm(r));
    }
    let gmax = grad.iter().copied().fold(0.0, f64::max);
    let gmin = grad.iter().copied().fold(f64::INFINITY, f64::min);
    if !(gmin > 1e-8 * gmax && gmin > 1e-300) {
        return Err(DiscError::NotRegular(c, format!("|∇u| drops to {gmin:e}")));
    }
    let length: f64 = ds.iter().sum();
    let coarse: f64 = ds.iter().step_by(2).map(|d| 2.0 * d).sum();
    check_resolution(c, length, coarse)?;
    let weights: Vec<f64> = ds.iter().map(|d| d / length).collect();
    let v_cu: Vec<f64> = grad.iter().map(|g| length * g / TAU).collect();
    let mass = weights.iter().zip(&v_cu).map(|(w, v)| w * v).sum();
    let r0 = radii[0];
    let circular = radii
        .iter()
        .all(|&r| (r - r0).abs() <= 1e-12 * r0.max(1e-300));
    Ok(LevelSetData {
        c,
        kind: if circular {
            ContourKind::Circle
        } else {
            ContourKind::StarShaped
        },
        points: radii
            .iter()
            .enumerate()
            .map(|(k, &r)| (r, grid.theta(k)))
            .collect(),
        weights,
        v_cu,
        radius: circular.then(|| radii.iter().sum::<f64>() / n as f64),
        mass,
        length,
    })
}

fn check_resolution(c: f64, fine: f64, coarse: f64) -> Result<()> {
    let rel = (fine - coarse).abs() / fine;
    if rel > 0.05 {
        return Err(DiscError::NotRegular(
            c,
            format!(
                "contour length changes by {:.1}% under refinement",
                100.0 * rel
            ),
        ));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Edge {
    /// Between nodes `j` and `j + 1` on ray `k`.
    Radial(usize, usize),
    /// Between rays `k` and `k + 1` on node ring `j ≥ 1`.
    Angular(usize, usize),
}

/// Node values on a (possibly coarsened) polar lattice.
struct Lattice<'a> {
    values: &'a [Vec<f64>],
    grad: &'a [Vec<f64>],
    stride: usize,
    n_nodes: usize,
    n_rays: usize,
    radius: Vec<f64>,
}

impl Lattice<'_> {
    fn f(&self, j: usize, k: usize) -> f64 {
        self.values[j * self.stride][(k % self.n_rays) * self.stride]
    }

    fn g(&self, j: usize, k: usize) -> f64 {
        self.grad[j * self.stride][(k % self.n_rays) * self.stride]
    }

    fn theta(&self, k: usize) -> f64 {
        TAU * k as f64 / self.n_rays as f64
    }

    /// Crossing point `(r, θ)` and interpolated `|∇u|` on an edge.
    fn locate(&self, edge: Edge) -> (f64, f64, f64) {
        let ((j0, k0), (j1, k1)) = match edge {
            Edge::Radial(j, k) => ((j, k), (j + 1, k)),
            Edge::Angular(j, k) => ((j, k), (j, k + 1)),
        };
        let (a, b) = (self.f(j0, k0), self.f(j1, k1));
        let t = if a == f64::NEG_INFINITY {
            0.0
        } else {
            (a / (a - b)).clamp(0.0, 1.0)
        };
        let g = (1.0 - t) * self.g(j0, k0) + t * self.g(j1, k1);
        match edge {
            Edge::Radial(j, k) => (
                self.radius[j] + t * (self.radius[j + 1] - self.radius[j]),
                self.theta(k),
                g,
            ),
            Edge::Angular(j, k) => (
                self.radius[j],
                self.theta(k) + t * TAU / self.n_rays as f64,
                g,
            ),
        }
    }

    fn segments(&self) -> Vec<(Edge, Edge)> {
        let inside = |j: usize, k: usize| self.f(j, k) < 0.0;
        let mut segs = Vec::new();
        for j in 0..self.n_nodes - 1 {
            for k in 0..self.n_rays {
                let k1 = (k + 1) % self.n_rays;
                if j == 0 {
                    let (s0, sb, sc) = (inside(0, 0), inside(1, k), inside(1, k1));
                    let mut cut = Vec::new();
                    if s0 != sb {
                        cut.push(Edge::Radial(0, k));
                    }
                    if sb != sc {
                        cut.push(Edge::Angular(1, k));
                    }
                    if sc != s0 {
                        cut.push(Edge::Radial(0, k1));
                    }
                    if cut.len() == 2 {
                        segs.push((cut[0], cut[1]));
                    }
                    continue;
                }
                let corners = [
                    inside(j, k),
                    inside(j + 1, k),
                    inside(j + 1, k1),
                    inside(j, k1),
                ];
                // e_i joins corner i and corner i + 1
                let edges = [
                    Edge::Radial(j, k),
                    Edge::Angular(j + 1, k),
                    Edge::Radial(j, k1),
                    Edge::Angular(j, k),
                ];
                let crossing: Vec<usize> = (0..4)
                    .filter(|&i| corners[i] != corners[(i + 1) % 4])
                    .collect();
                match crossing.len() {
                    2 => segs.push((edges[crossing[0]], edges[crossing[1]])),
                    4 => {
                        let mid =
                            self.f(j, k) + self.f(j + 1, k) + self.f(j + 1, k1) + self.f(j, k1);
                        let center_inside = mid < 0.0;
                        // cut off the corners whose sign differs from the center
                        for corner in 0..4 {
                            if corners[corner] != center_inside {
                                segs.push((edges[(corner + 3) % 4], edges[corner]));
                            }
                        }
                    }
                    _ => {}
                }
            }
        }
        segs
    }

    /// Closed loops of crossing edges, or `None` if a chain is open.
    fn loops(&self) -> Option<Vec<Vec<Edge>>> {
        let segs = self.segments();
        let mut by_edge: HashMap<Edge, Vec<usize>> = HashMap::new();
        for (i, &(a, b)) in segs.iter().enumerate() {
            by_edge.entry(a).or_default().push(i);
            by_edge.entry(b).or_default().push(i);
        }
        let mut used = vec![false; segs.len()];
        let mut loops = Vec::new();
        for start in 0..segs.len() {
            if used[start] {
                continue;
            }
            used[start] = true;
            let first = segs[start].0;
            let mut chain = vec![first];
            let mut cur = segs[start].1;
            loop {
                if cur == first {
                    break;
                }
                chain.push(cur);
                let next = by_edge[&cur].iter().copied().find(|&i| !used[i])?;
                used[next] = true;
                let (a, b) = segs[next];
                cur = if a == cur { b } else { a };
            }
            loops.push(chain);
        }
        Some(loops)
    }

    fn length(&self, loops: &[Vec<Edge>]) -> f64 {
        loops
            .iter()
            .map(|l| {
                let pts: Vec<Complex64> = l
                    .iter()
                    .map(|&e| {
                        let (r, t, _) = self.locate(e);
                        Complex64::from_polar(r, t)
                    })
                    .collect();
                (0..pts.len())
                    .map(|i| (pts[(i + 1) % pts.len()] - pts[i]).norm())
                    .sum::<f64>()
            })
            .sum()
    }
}

fn marching(e: &Exhaustion, c: f64) -> Result<LevelSetData> {
    let grid = e.grid();
    let (nr, n) = (grid.n_radii(), grid.n_angles());
    let mut values = Vec::with_capacity(nr + 1);
    let mut grad = Vec::with_capacity(nr + 1);
    for j in 0..=nr {
        let r = node_radius(e, j);
        let pts: Vec<_> = (0..n).map(|k| e.eval(k, r)).collect();
        values.push(pts.iter().map(|p| p.u - c).collect::<Vec<_>>());
        let g: Vec<f64> = if j == 0 {
            let mean = pts.iter().map(|p| p.u_r.abs()).sum::<f64>() / n as f64;
            vec![mean; n]
        } else {
            pts.iter().map(|p| p.gradient_norm(r)).collect()
        };
        grad.push(g);
    }
    let radius: Vec<f64> = (0..=nr).map(|j| node_radius(e, j)).collect();
    let fine = Lattice {
        values: &values,
        grad: &grad,
        stride: 1,
        n_nodes: nr + 1,
        n_rays: n,
        radius: radius.clone(),
    };
    let loops = fine.loops().ok_or(DiscError::TouchesBoundary(c))?;
    if loops.is_empty() {
        return Err(DiscError::NotRegular(c, "no contour found".into()));
    }
    let coarse = Lattice {
        values: &values,
        grad: &grad,
        stride: 2,
        n_nodes: nr / 2 + 1,
        n_rays: n / 2,
        radius: radius.iter().copied().step_by(2).collect(),
    };
    let length = fine.length(&loops);
    let coarse_len = coarse
        .loops()
        .map(|l| coarse.length(&l))
        .ok_or(DiscError::TouchesBoundary(c))?;
    check_resolution(c, length, coarse_len)?;

    let mut points = Vec::new();
    let mut weights = Vec::new();
    let mut grads = Vec::new();
    for l in &loops {
        let located: Vec<(f64, f64, f64)> = l.iter().map(|&ed| fine.locate(ed)).collect();
        let xy: Vec<Complex64> = located
            .iter()
            .map(|&(r, t, _)| Complex64::from_polar(r, t))
            .collect();
        let m = xy.len();
        for i in 0..m {
            let prev = (xy[i] - xy[(i + m - 1) % m]).norm();
            let next = (xy[(i + 1) % m] - xy[i]).norm();
            points.push((located[i].0, located[i].1));
            weights.push(0.5 * (prev + next) / length);
            grads.push(located[i].2);
        }
    }
    let gmax = grads.iter().copied().fold(0.0, f64::max);
    let gmin = grads.iter().copied().fold(f64::INFINITY, f64::min);
    if gmin.is_nan() || gmin <= 1e-8 * gmax {
        return Err(DiscError::NotRegular(c, format!("|∇u| drops to {gmin:e}")));
    }
    let v_cu: Vec<f64> = grads.iter().map(|g| length * g / TAU).collect();
    let mass = weights.iter().zip(&v_cu).map(|(w, v)| w * v).sum();
    Ok(LevelSetData {
        c,
        kind: ContourKind::Polyline {
            components: loops.len(),
        },
        points,
        weights,
        v_cu,
        radius: None,
        mass,
        length,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disc::{CircleFunction, PolarGrid};
    use crate::exhaustion::{construct_biharmonic, PointMass};

    #[test]
    fn green_level_sets_are_circles() {
        let g = PolarGrid::new(64, 64).unwrap();
        let e = Exhaustion::green(g);
        for &c in &[-0.1, -0.5, -2.0] {
            let ls = level_set(&e, c).unwrap();
            assert_eq!(ls.kind(), ContourKind::Circle);
            assert!((ls.radius().unwrap() - f64::exp(c)).abs() < 1e-15);
            assert!((ls.mass() - 1.0).abs() < 1e-13);
            assert!(ls.v_cu().iter().all(|v| (v - 1.0).abs() < 1e-13));
        }
        assert!(matches!(
            level_set(&e, -1e-3),
            Err(DiscError::TouchesBoundary(_))
        ));
    }

    #[test]
    fn quadratic_level_set() {
        let g = PolarGrid::new(64, 64).unwrap();
        let zero = CircleFunction::constant(g.angles(), 0.0);
        let e = construct_biharmonic(&zero, Some(1.0), g).unwrap();
        let ls = level_set(&e, -0.375).unwrap();
        assert!((ls.radius().unwrap() - 0.5).abs() < 1e-14);
        assert!((ls.mass() - 0.25).abs() < 1e-13);
    }

    #[test]
    fn two_wells_give_two_polylines() {
        let g = PolarGrid::new(64, 128).unwrap();
        let masses = [
            PointMass {
                location: Complex64::new(0.45, 0.0),
                mass: 1.0,
            },
            PointMass {
                location: Complex64::new(-0.45, 0.0),
                mass: 1.0,
            },
        ];
        let e = Exhaustion::green_potential(g, &masses).unwrap();
        let ls = level_set(&e, -2.5).unwrap();
        assert_eq!(ls.kind(), ContourKind::Polyline { components: 2 });
        // each well carries its unit mass
        assert!((ls.mass() - 2.0).abs() < 0.05, "{}", ls.mass());
        let ls = level_set(&e, -0.4).unwrap();
        assert!(matches!(ls.kind(), ContourKind::StarShaped));
        assert!((ls.mass() - 2.0).abs() < 1e-8, "{}", ls.mass());
    }

    #[test]
    fn marching_agrees_with_rays_on_a_smooth_contour() {
        let g = PolarGrid::new(64, 128).unwrap();
        let psi = CircleFunction::from_real_fn(g.angles(), |t| 2.0 + t.cos());
        let e = construct_biharmonic(&psi, None, g).unwrap();
        let rays = level_set(&e, -0.5).unwrap();
        let march = marching(&e, -0.5).unwrap();
        assert!((rays.mass() - march.mass()).abs() < 1e-3 * rays.mass());
        assert!((rays.length() - march.length()).abs() < 1e-3 * rays.length());
    }
}
