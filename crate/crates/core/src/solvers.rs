//! Dirichlet solvers (radial exact-quadrature and grid relaxation), the two
//! eigensolvers, the semilinear fixed point, and the exponent formulas.
//!
//! The radial path integrates the flux identity ρⁿ v′(ρ)ᵐ =
//! (m/C(n−1,m−1)) ∫₀^ρ s^{n−1} σ_m(s) ds with a cubic-exact cumulative rule
//! and is the oracle of record for every m ≥ 2 number. The grid path is a
//! nonlinear Gauss–Seidel/SOR sweep solving σ_m = target in each node's own
//! value (closed forms for n ≤ 2). At ball boundaries the Dirichlet zero is
//! imposed where the boundary actually is, not at the pinned collar nodes:
//! axis second differences shorten their arms to the sphere, and mixed
//! derivatives are built from sphere-shortened second differences along the
//! coordinate-plane diagonals, whose own-value coupling the nodal update
//! absorbs in closed form. The scheme is exact on complex quadratics. The
//! eigensolver is inverse iteration: solve the Dirichlet problem on the
//! previous iterate's right-hand side, renormalise to I_m = 1, read λ off
//! the Rayleigh quotient and stop when λ stalls and the eigenpair residual
//! is small.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::envelope::cone_boundary_candidate;
use crate::fields::{
    beta_weights, Carrier, DensityMeasure, Grid, GridPotential, Potential, RadialPotential, Shape,
    PI,
};
use crate::functionals::RhsFamily;
use crate::hessian::radial_hessian_density_unchecked;
#[cfg_attr(test, allow(unused_imports))]
use crate::math::{binomial, hessian_norm_const, FloatExt};
use crate::{Error, Result};

/// Per-iteration solver statistics handed to an observer (the CLI run log).
#[derive(Debug, Clone, Copy)]
pub struct IterStat {
    pub iter: usize,
    /// current eigenvalue estimate, NaN for plain Dirichlet/semilinear solves
    pub lambda: f64,
    pub residual: f64,
    /// current functional value (E_m, Φ or Φ_G depending on the solver)
    pub functional: f64,
}

pub type Observer<'a> = &'a mut dyn FnMut(IterStat);

/// Cumulative integral of samples on a uniform grid, interpolatory 4-point
/// rule per cell (exact for cubics, which keeps σ_m targets with polynomial
/// Jacobians s^{n−1}, n ≤ 4, quadrature-exact).
pub(crate) fn cumint4(g: &[f64], dx: f64) -> Vec<f64> {
    let n = g.len();
    debug_assert!(n >= 4);
    let mut out = vec![0.0; n];
    let c = dx / 24.0;
    for i in 0..n - 1 {
        let cell = if i == 0 {
            c * (9.0 * g[0] + 19.0 * g[1] - 5.0 * g[2] + g[3])
        } else if i == n - 2 {
            c * (9.0 * g[n - 1] + 19.0 * g[n - 2] - 5.0 * g[n - 3] + g[n - 4])
        } else {
            c * (-g[i - 1] + 13.0 * g[i] + 13.0 * g[i + 1] - g[i + 2])
        };
        out[i + 1] = out[i] + cell;
    }
    out
}

/// Solve (dd^c u)^m ∧ β^{n−m} = f βⁿ on the ball of radius √ρ₁ for a radial
/// density f ≥ 0, by exact quadrature of the flux form.
pub fn dirichlet_solve_radial(
    f: &[f64],
    m: usize,
    n: usize,
    rho_max: f64,
) -> Result<RadialPotential> {
    if m == 0 || m > n {
        return Err(Error::InvalidOrder { m, n });
    }
    if let Some((node, &value)) = f.iter().enumerate().find(|(_, v)| **v < 0.0) {
        return Err(Error::NegativeDensity { node, value });
    }
    let len = f.len();
    let dr = rho_max / (len - 1) as f64;
    let cnm = binomial(n, m);
    // σ_m target and its flux integrand s^{n−1}σ_m
    let integrand: Vec<f64> = f
        .iter()
        .enumerate()
        .map(|(i, fi)| (i as f64 * dr).powi(n as i32 - 1) * cnm * fi)
        .collect();
    let flux_scale = m as f64 / binomial(n - 1, m - 1);
    let j = cumint4(&integrand, dr);
    // v′ = (F/ρⁿ)^{1/m}, with the analytic limit f(0)^{1/m} at the centre
    let mut vprime = vec![0.0; len];
    vprime[0] = f[0].powf(1.0 / m as f64);
    for i in 1..len {
        let rho = i as f64 * dr;
        vprime[i] = (flux_scale * j[i] / rho.powi(n as i32))
            .max(0.0)
            .powf(1.0 / m as f64);
    }
    // v(ρ) = −∫_ρ^{ρ₁} v′
    let jv = cumint4(&vprime, dr);
    let total = jv[len - 1];
    let values: Vec<f64> = jv.into_iter().map(|x| x - total).collect();
    Ok(RadialPotential::from_values_unchecked(n, rho_max, values))
}

/// Grid relaxation controls.
#[derive(Debug, Clone, Copy)]
pub struct GridSolveParams {
    /// relative L¹ residual target
    pub tol: f64,
    pub max_sweeps: usize,
    /// sweeps between residual evaluations
    pub check_every: usize,
    /// SOR factor for m = 1; None picks 2/(1+sin(π/(N−1)))
    pub omega: Option<f64>,
}

impl Default for GridSolveParams {
    fn default() -> Self {
        GridSolveParams {
            tol: 1e-8,
            max_sweeps: 100_000,
            check_every: 25,
            omega: None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct GridSolveInfo {
    pub residual_l1: f64,
    pub sweeps: usize,
    pub converged: bool,
}

/// Second difference along one real axis with sphere-shortened arms:
/// D u = Σ coef·u[read] − c·u_node. Interior nodes use the central 3-point
/// stencil; nodes whose arm crosses the sphere use the cubic-exact 4-point
/// one-sided stencil through two interior neighbours and the sphere zero,
/// falling back to the 3-point shortened stencil in slivers.
#[derive(Debug, Clone, Copy)]
struct AxisTerm {
    reads: [usize; 2],
    coef: [f64; 2],
    c: f64,
}

/// One mixed derivative D_ab written as half the difference of second
/// differences along the two diagonals of the (a,b) plane, each shortened to
/// the sphere where it crosses it:
/// cross(u) = Σ q·u[read] + s·u_node.
#[derive(Debug, Clone, Copy, Default)]
struct CrossTerm {
    reads: [usize; 4], // pp, mm, pm, mp
    q: [f64; 4],
    s: f64,
}

struct NodeStencil {
    node: usize,
    axes: [AxisTerm; 4],     // x_1..x_n then y_1..y_n; unused slots zeroed
    crosses: [CrossTerm; 4], // (x1,x2), (y1,y2), (x1,y2), (y1,x2); n = 2 only
    /// any sphere-shortened arm: relaxed without over-relaxation
    boundary_row: bool,
}

pub(crate) struct GridOperator {
    grid: Arc<Grid>,
    m: usize,
    stencils: Vec<NodeStencil>,
    sigma_target_factor: f64, // C(n,m): density → σ_m target
    norm_const: f64,          // 1/C(n,m): σ_m → density
}

/// Smallest diagonal arm fraction; shorter slivers are snapped outward so the
/// own-value coupling of the crosses never overwhelms the diagonal terms.
const DIAG_ARM_FLOOR: f64 = 0.35;
/// Axis arms are only floored against degenerate 1/θ blow-ups.
const AXIS_ARM_FLOOR: f64 = 0.05;

impl GridOperator {
    pub(crate) fn build(grid: &Arc<Grid>, m: usize) -> Result<GridOperator> {
        let n = grid.n();
        if m == 0 || m > n {
            return Err(Error::InvalidOrder { m, n });
        }
        let radius2 = match grid.domain().shape() {
            Shape::Ball { radius } => Some(radius * radius),
            Shape::Box { .. } => None,
        };
        let axes = grid.num_axes();
        let mut coords = vec![0.0; axes];
        let mut stencils = Vec::with_capacity(grid.interior_count());
        for node in grid.interior_nodes() {
            grid.coords_into(node, &mut coords);
            let rho = coords.iter().map(|x| x * x).sum::<f64>();

            let mut axis_terms = [AxisTerm {
                reads: [node; 2],
                coef: [0.0; 2],
                c: 0.0,
            }; 4];
            for (a, term) in axis_terms.iter_mut().enumerate().take(axes) {
                let h = grid.spacing(a);
                let im = grid.neighbor(node, a, -1);
                let ip = grid.neighbor(node, a, 1);
                // arm length in units of h toward each side; pinned ball
                // neighbours are bypassed in favour of the exact sphere hit
                let arm = |dir: f64, neighbor: usize| -> f64 {
                    match radius2 {
                        Some(r2) if !grid.is_interior(neighbor) => {
                            let x = coords[a];
                            let s = (dir * -x + (x * x + r2 - rho).max(0.0).sqrt()) / h;
                            s.max(AXIS_ARM_FLOOR)
                        }
                        _ => 1.0,
                    }
                };
                let alpha = arm(-1.0, im);
                let beta = arm(1.0, ip);
                let idx = grid.axis_index(node, a);
                let second_inward = |dir: isize| -> Option<usize> {
                    let target = idx as isize - 2 * dir;
                    if target < 0 || target as usize >= grid.points_per_axis() {
                        return None;
                    }
                    let q = grid.neighbor(grid.neighbor(node, a, -dir), a, -dir);
                    grid.is_interior(q).then_some(q)
                };
                *term = if alpha == 1.0 && beta == 1.0 {
                    AxisTerm {
                        reads: [im, ip],
                        coef: [1.0 / (h * h), 1.0 / (h * h)],
                        c: 2.0 / (h * h),
                    }
                } else if alpha == 1.0 && beta != 1.0 && beta <= 2.45 {
                    match second_inward(1) {
                        // cubic through (−2h, −h, 0, βh) with u(βh) = 0
                        Some(im2) => one_sided_axis(im2, im, beta, h),
                        None => three_point_axis(im, ip, alpha, beta, h),
                    }
                } else if beta == 1.0 && alpha != 1.0 && alpha <= 2.45 {
                    match second_inward(-1) {
                        Some(ip2) => one_sided_axis(ip2, ip, alpha, h),
                        None => three_point_axis(im, ip, alpha, beta, h),
                    }
                } else {
                    three_point_axis(im, ip, alpha, beta, h)
                };
            }

            let mut crosses = [CrossTerm::default(); 4];
            if n == 2 && m >= 2 {
                let mut floor = DIAG_ARM_FLOOR;
                loop {
                    let pairs = [(0usize, 1usize), (2, 3), (0, 3), (2, 1)];
                    for (ci, (a, b)) in pairs.into_iter().enumerate() {
                        crosses[ci] = build_cross(grid, node, &coords, rho, radius2, a, b, floor);
                    }
                    // leading coefficient of σ₂ as a quadratic in the node's
                    // own value must stay positive: c₁c₂ > s_re² + s_im²
                    let c1 = 0.25 * (axis_terms[0].c + axis_terms[2].c);
                    let c2 = 0.25 * (axis_terms[1].c + axis_terms[3].c);
                    let s_re = 0.25 * (crosses[0].s + crosses[1].s);
                    let s_im = 0.25 * (crosses[2].s - crosses[3].s);
                    if c1 * c2 - (s_re * s_re + s_im * s_im) > 0.25 * c1 * c2 || floor >= 1.0 {
                        break;
                    }
                    floor = (floor + 0.15).min(1.0);
                }
            }
            let boundary_row = {
                let mut any = false;
                for a in 0..axes {
                    for d in [-1isize, 1] {
                        if !grid.is_interior(grid.neighbor(node, a, d)) {
                            any = true;
                        }
                    }
                }
                any
            };
            stencils.push(NodeStencil {
                node,
                axes: axis_terms,
                crosses,
                boundary_row,
            });
        }
        Ok(GridOperator {
            grid: Arc::clone(grid),
            m,
            stencils,
            sigma_target_factor: binomial(n, m),
            norm_const: hessian_norm_const(m, n),
        })
    }

    fn n(&self) -> usize {
        self.grid.n()
    }

    /// Diagonal A-parts (neighbour sums) and own-value coefficients at a
    /// node: H_jj(u_c) = A_jj − c_j·u_c.
    fn assemble_diag(&self, s: &NodeStencil, v: &[f64]) -> ([f64; 2], [f64; 2]) {
        let n = self.n();
        let mut a_diag = [0.0; 2];
        let mut c_diag = [0.0; 2];
        for j in 0..n {
            let tx = &s.axes[j];
            let ty = &s.axes[n + j];
            a_diag[j] = 0.25
                * (tx.coef[0] * v[tx.reads[0]]
                    + tx.coef[1] * v[tx.reads[1]]
                    + ty.coef[0] * v[ty.reads[0]]
                    + ty.coef[1] * v[ty.reads[1]]);
            c_diag[j] = 0.25 * (tx.c + ty.c);
        }
        (a_diag, c_diag)
    }

    /// Off-diagonal H_12(u_c) = (re0 + s_re·u_c) + i(im0 + s_im·u_c), n = 2.
    fn assemble_cross(&self, s: &NodeStencil, v: &[f64]) -> ([f64; 2], [f64; 2]) {
        if self.n() < 2 || self.m < 2 {
            return ([0.0; 2], [0.0; 2]);
        }
        let mut x = [0.0f64; 4];
        for (ci, xv) in x.iter_mut().enumerate() {
            let cr = &s.crosses[ci];
            *xv = cr.q[0] * v[cr.reads[0]]
                + cr.q[1] * v[cr.reads[1]]
                + cr.q[2] * v[cr.reads[2]]
                + cr.q[3] * v[cr.reads[3]];
        }
        let re0 = 0.25 * (x[0] + x[1]);
        let im0 = 0.25 * (x[2] - x[3]);
        let s_re = 0.25 * (s.crosses[0].s + s.crosses[1].s);
        let s_im = 0.25 * (s.crosses[2].s - s.crosses[3].s);
        ([re0, im0], [s_re, s_im])
    }

    /// σ_m at a node given assembled parts and the node's own value.
    fn sigma_at(&self, a: &[f64; 2], c: &[f64; 2], x0: &[f64; 2], xs: &[f64; 2], u: f64) -> f64 {
        match (self.n(), self.m) {
            (1, _) => a[0] - c[0] * u,
            (2, 1) => (a[0] - c[0] * u) + (a[1] - c[1] * u),
            _ => {
                let re = x0[0] + xs[0] * u;
                let im = x0[1] + xs[1] * u;
                (a[0] - c[0] * u) * (a[1] - c[1] * u) - (re * re + im * im)
            }
        }
    }

    /// Own-value solving σ_m = target on the Γ_m branch.
    fn update_value(
        &self,
        a: &[f64; 2],
        c: &[f64; 2],
        x0: &[f64; 2],
        xs: &[f64; 2],
        target: f64,
    ) -> f64 {
        match (self.n(), self.m) {
            (1, _) => (a[0] - target) / c[0],
            (2, 1) => (a[0] + a[1] - target) / (c[0] + c[1]),
            _ => {
                // σ₂(u) = P u² − Q u + R with the H₁₂(u) coupling included;
                // lower root keeps the eigenvalues on the Γ₂ branch
                let p = c[0] * c[1] - (xs[0] * xs[0] + xs[1] * xs[1]);
                let q = a[0] * c[1] + a[1] * c[0] + 2.0 * (x0[0] * xs[0] + x0[1] * xs[1]);
                let r = a[0] * a[1] - (x0[0] * x0[0] + x0[1] * x0[1]);
                let disc = (q * q - 4.0 * p * (r - target)).max(0.0).sqrt();
                (q - disc) / (2.0 * p)
            }
        }
    }

    /// m-Hessian density of a value field under this operator's stencils
    /// (0 off the interior mask).
    pub(crate) fn density(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.grid.total_nodes()];
        for s in &self.stencils {
            let (a, c) = self.assemble_diag(s, v);
            let (x0, xs) = self.assemble_cross(s, v);
            out[s.node] = self.norm_const * self.sigma_at(&a, &c, &x0, &xs, v[s.node]);
        }
        out
    }

    /// Relaxation sweeps until the relative L¹ residual drops under
    /// params.tol. `start` warm-starts the iteration.
    pub(crate) fn solve(
        &self,
        f: &[f64],
        start: Option<&[f64]>,
        params: &GridSolveParams,
        mut observer: Option<&mut dyn FnMut(IterStat)>,
    ) -> Result<(Vec<f64>, GridSolveInfo)> {
        if f.len() != self.grid.total_nodes() {
            return Err(Error::CarrierMismatch);
        }
        if let Some((node, &value)) = f.iter().enumerate().find(|(_, v)| **v < 0.0) {
            return Err(Error::NegativeDensity { node, value });
        }
        let mut v = match start {
            Some(s) => {
                let mut v = vec![0.0; self.grid.total_nodes()];
                for st in &self.stencils {
                    v[st.node] = s[st.node].min(0.0);
                }
                v
            }
            None => vec![0.0; self.grid.total_nodes()],
        };
        let omega = match (self.m, params.omega) {
            (_, Some(w)) => w,
            (1, None) => 2.0 / (1.0 + (PI / (self.grid.points_per_axis() - 1) as f64).sin()),
            _ => 1.0,
        };
        let weights = beta_weights(&Carrier::Grid(Arc::clone(&self.grid)))?;
        let f_norm: f64 = self
            .stencils
            .iter()
            .map(|s| f[s.node].abs() * weights[s.node])
            .sum();

        let mut best = f64::INFINITY;
        let mut best_sweep = 0usize;
        let mut residual = f64::INFINITY;
        for sweep in 1..=params.max_sweeps {
            for s in &self.stencils {
                let (a, c) = self.assemble_diag(s, &v);
                let (x0, xs) = self.assemble_cross(s, &v);
                let target = self.sigma_target_factor * f[s.node];
                let cand = self.update_value(&a, &c, &x0, &xs, target);
                let w = if s.boundary_row {
                    omega.min(1.0)
                } else {
                    omega
                };
                let new = (v[s.node] + w * (cand - v[s.node])).min(0.0);
                v[s.node] = new;
            }
            if sweep % params.check_every == 0 || sweep == params.max_sweeps {
                let dens = self.density(&v);
                let mut num = 0.0;
                for s in &self.stencils {
                    num += (dens[s.node] - f[s.node]).abs() * weights[s.node];
                }
                residual = if f_norm > 0.0 { num / f_norm } else { num };
                if let Some(obs) = observer.as_deref_mut() {
                    obs(IterStat {
                        iter: sweep,
                        lambda: f64::NAN,
                        residual,
                        functional: f64::NAN,
                    });
                }
                if !residual.is_finite() {
                    return Err(Error::Diverged {
                        sweeps: sweep,
                        residual,
                    });
                }
                if residual <= params.tol {
                    return Ok((
                        v,
                        GridSolveInfo {
                            residual_l1: residual,
                            sweeps: sweep,
                            converged: true,
                        },
                    ));
                }
                if residual < best {
                    best = residual;
                    best_sweep = sweep;
                }
                if residual > 10.0 * best && sweep >= best_sweep + 100 {
                    return Err(Error::Diverged {
                        sweeps: sweep,
                        residual,
                    });
                }
            }
        }
        Ok((
            v,
            GridSolveInfo {
                residual_l1: residual,
                sweeps: params.max_sweeps,
                converged: false,
            },
        ))
    }
}

/// Cubic-exact one-sided second difference: nodes at −2h, −h, 0 and the
/// sphere zero at a·h (a ∈ (0, ~2.5]); the boundary-value term vanishes.
fn one_sided_axis(far: usize, near: usize, a: f64, h: f64) -> AxisTerm {
    let h2 = h * h;
    AxisTerm {
        reads: [far, near],
        coef: [
            (a - 1.0) / ((2.0 + a) * h2),
            2.0 * (2.0 - a) / ((1.0 + a) * h2),
        ],
        c: (3.0 - a) / (a * h2),
    }
}

/// First-order shortened 3-point stencil (used in slivers where the 4-point
/// variant has no second interior neighbour).
fn three_point_axis(im: usize, ip: usize, alpha: f64, beta: f64, h: f64) -> AxisTerm {
    let h2 = h * h;
    AxisTerm {
        reads: [im, ip],
        coef: [
            2.0 / (alpha * (alpha + beta) * h2),
            2.0 / (beta * (alpha + beta) * h2),
        ],
        c: 2.0 / (alpha * beta * h2),
    }
}

/// Mixed derivative D_ab as half the difference of sphere-shortened second
/// differences along the two diagonals of the (a,b) coordinate plane.
#[allow(clippy::too_many_arguments)]
fn build_cross(
    grid: &Grid,
    node: usize,
    coords: &[f64],
    rho: f64,
    radius2: Option<f64>,
    a: usize,
    b: usize,
    arm_floor: f64,
) -> CrossTerm {
    let ha = grid.spacing(a);
    let hb = grid.spacing(b);
    let w2 = ha * ha + hb * hb;
    // arm toward the sphere along the diagonal step (da·h_a, db·h_b), in
    // units of one step; 1 when the diagonal neighbour is interior
    let arm = |da: isize, db: isize| -> (usize, f64) {
        let q = grid.neighbor(grid.neighbor(node, a, da), b, db);
        match radius2 {
            Some(r2) if !grid.is_interior(q) => {
                let xw = coords[a] * da as f64 * ha + coords[b] * db as f64 * hb;
                let t = (-xw + (xw * xw + w2 * (r2 - rho)).max(0.0).sqrt()) / w2;
                (q, t.max(arm_floor))
            }
            _ => (q, 1.0),
        }
    };
    let (pp, beta_p) = arm(1, 1);
    let (mm, alpha_p) = arm(-1, -1);
    let (pm, beta_m) = arm(1, -1);
    let (mp, alpha_m) = arm(-1, 1);
    // D_ab = (D²₊ − D²₋)·|w|²/(4 h_a h_b); the own-value terms of the two
    // directional second differences partially cancel
    let scale = 1.0 / (2.0 * ha * hb);
    let q_pp = scale / (beta_p * (alpha_p + beta_p));
    let q_mm = scale / (alpha_p * (alpha_p + beta_p));
    let q_pm = -scale / (beta_m * (alpha_m + beta_m));
    let q_mp = -scale / (alpha_m * (alpha_m + beta_m));
    let s = scale * (1.0 / (alpha_m * beta_m) - 1.0 / (alpha_p * beta_p));
    CrossTerm {
        reads: [pp, mm, pm, mp],
        q: [q_pp, q_mm, q_pm, q_mp],
        s,
    }
}

/// Solve (dd^c u)^m ∧ β^{n−m} = f βⁿ on a grid carrier by nonlinear
/// relaxation; m = 1 uses SOR, m ≥ 2 plain Gauss–Seidel with cone-safe
/// closed-form updates.
pub fn dirichlet_solve_grid(
    grid: &Arc<Grid>,
    f: &[f64],
    m: usize,
    params: &GridSolveParams,
    observer: Option<&mut dyn FnMut(IterStat)>,
) -> Result<(GridPotential, GridSolveInfo)> {
    let op = GridOperator::build(grid, m)?;
    let (v, info) = op.solve(f, None, params, observer)?;
    Ok((
        GridPotential::from_values_unchecked(Arc::clone(grid), v),
        info,
    ))
}

/// Shared surface of the radial and grid problems that the eigenvalue,
/// descent and semilinear loops drive.
trait Backend {
    fn node_count(&self) -> usize;
    fn solve(&mut self, rhs: &[f64]) -> Result<Vec<f64>>;
    /// Hessian density of a value field under the discretisation actually
    /// being inverted (eigenvalue route radially, stencil operator on grids).
    fn density(&self, u: &[f64]) -> Vec<f64>;
    fn beta_w(&self) -> &[f64];
    /// Weights of the region residual norms are taken over. On grids this is
    /// the stencil-clean interior, where the operator equals plain central
    /// differences and densities carry no boundary-pinning artefacts.
    fn residual_w(&self) -> &[f64];
    fn mu_g(&self) -> &[f64];
    /// E_m of a value field under this backend's discretisation.
    fn energy(&self, u: &[f64]) -> f64;
    /// Admissibility retraction used by the projected descent.
    fn project(&self, u: &mut [f64]);
    fn wrap(&self, values: Vec<f64>) -> Potential;
}

struct RadialBackend {
    n: usize,
    m: usize,
    rho_max: f64,
    g: Vec<f64>,
    bw: Vec<f64>,
}

impl Backend for RadialBackend {
    fn node_count(&self) -> usize {
        self.g.len()
    }

    fn solve(&mut self, rhs: &[f64]) -> Result<Vec<f64>> {
        Ok(dirichlet_solve_radial(rhs, self.m, self.n, self.rho_max)?
            .values()
            .to_vec())
    }

    fn density(&self, u: &[f64]) -> Vec<f64> {
        let v = RadialPotential::from_values_unchecked(self.n, self.rho_max, u.to_vec());
        radial_hessian_density_unchecked(&v, self.m)
    }

    fn beta_w(&self) -> &[f64] {
        &self.bw
    }

    fn residual_w(&self) -> &[f64] {
        &self.bw
    }

    fn mu_g(&self) -> &[f64] {
        &self.g
    }

    fn energy(&self, u: &[f64]) -> f64 {
        // the flux Stieltjes form stays exact when descent iterates carry
        // derivative kinks from the envelope retraction
        crate::hessian::radial_energy_flux(u, self.n, self.m, self.rho_max)
    }

    fn project(&self, u: &mut [f64]) {
        // retract the stepped profile to its m-subharmonic envelope, the
        // largest admissible function below it
        for x in u.iter_mut() {
            *x = x.min(0.0);
        }
        *u.last_mut().unwrap() = 0.0;
        let params = crate::envelope::EnvelopeParams {
            tol: 1e-11,
            max_sweeps: 200_000,
        };
        if let Ok(env) =
            crate::envelope::envelope_pm_radial(self.n, self.rho_max, u, self.m, params)
        {
            u.copy_from_slice(env.values());
        } else {
            // fall back to a slope retraction: clamp v' ≥ 0 and restore the
            // certificate flux by an isotonic projection
            let len = u.len();
            let dr = self.rho_max / (len - 1) as f64;
            let d: Vec<f64> = (0..len - 1)
                .map(|i| ((u[i + 1] - u[i]) / dr).max(0.0))
                .collect();
            let mut flux: Vec<f64> = d
                .iter()
                .enumerate()
                .map(|(i, di)| ((i as f64 + 0.5) * dr).powi(self.n as i32) * di.powi(self.m as i32))
                .collect();
            isotonic_nondecreasing(&mut flux);
            for i in (0..len - 1).rev() {
                let rho_mid = ((i as f64 + 0.5) * dr).powi(self.n as i32);
                let di = (flux[i] / rho_mid).max(0.0).powf(1.0 / self.m as f64);
                u[i] = u[i + 1] - di * dr;
            }
        }
    }

    fn wrap(&self, values: Vec<f64>) -> Potential {
        Potential::Radial(RadialPotential::from_values_unchecked(
            self.n,
            self.rho_max,
            values,
        ))
    }
}

struct GridBackend {
    op: GridOperator,
    params: GridSolveParams,
    g: Vec<f64>,
    bw: Vec<f64>,
    rw: Vec<f64>,
    warm: Option<Vec<f64>>,
}

impl GridBackend {
    fn new(
        grid: &Arc<Grid>,
        mu: &DensityMeasure,
        m: usize,
        params: GridSolveParams,
    ) -> Result<Self> {
        let op = GridOperator::build(grid, m)?;
        let bw = beta_weights(&Carrier::Grid(Arc::clone(grid)))?;
        let clean = grid.stencil_clean_mask();
        let rw: Vec<f64> = bw
            .iter()
            .zip(&clean)
            .map(|(w, c)| if *c { *w } else { 0.0 })
            .collect();
        Ok(GridBackend {
            op,
            params,
            g: mu.density().to_vec(),
            bw,
            rw,
            warm: None,
        })
    }
}

impl Backend for GridBackend {
    fn node_count(&self) -> usize {
        self.g.len()
    }

    fn solve(&mut self, rhs: &[f64]) -> Result<Vec<f64>> {
        let (v, info) = self
            .op
            .solve(rhs, self.warm.as_deref(), &self.params, None)?;
        if !info.converged {
            return Err(Error::SweepBudget {
                sweeps: info.sweeps,
                residual: info.residual_l1,
            });
        }
        self.warm = Some(v.clone());
        Ok(v)
    }

    fn density(&self, u: &[f64]) -> Vec<f64> {
        self.op.density(u)
    }

    fn beta_w(&self) -> &[f64] {
        &self.bw
    }

    fn residual_w(&self) -> &[f64] {
        &self.rw
    }

    fn mu_g(&self) -> &[f64] {
        &self.g
    }

    fn energy(&self, u: &[f64]) -> f64 {
        let dens = self.density(u);
        u.iter()
            .zip(dens.iter().zip(&self.bw))
            .map(|(v, (d, w))| -v * d * w)
            .sum::<f64>()
            / (self.op.m as f64 + 1.0)
    }

    fn project(&self, u: &mut [f64]) {
        let grid = &self.op.grid;
        for node in 0..u.len() {
            if grid.is_interior(node) {
                u[node] = u[node].min(0.0);
            } else {
                u[node] = 0.0;
            }
        }
        let params = crate::envelope::EnvelopeParams {
            tol: 1e-10,
            max_sweeps: 50_000,
        };
        if let Ok(env) = crate::envelope::envelope_pm_grid(grid, u, self.op.m, params) {
            u.copy_from_slice(env.values());
        } else {
            for _ in 0..2 {
                let snap = u.to_vec();
                for node in grid.interior_nodes() {
                    let cand = cone_boundary_candidate(grid, &snap, node, self.op.m);
                    u[node] = u[node].min(cand);
                }
            }
        }
    }

    fn wrap(&self, values: Vec<f64>) -> Potential {
        Potential::Grid(GridPotential::from_values_unchecked(
            Arc::clone(&self.op.grid),
            values,
        ))
    }
}

/// In-place L² projection onto nondecreasing sequences (pool adjacent
/// violators).
fn isotonic_nondecreasing(x: &mut [f64]) {
    let n = x.len();
    // (mean, count) blocks
    let mut means: Vec<f64> = Vec::with_capacity(n);
    let mut counts: Vec<usize> = Vec::with_capacity(n);
    for &xi in x.iter() {
        means.push(xi);
        counts.push(1);
        while means.len() > 1 {
            let k = means.len();
            if means[k - 2] <= means[k - 1] {
                break;
            }
            let total = counts[k - 2] + counts[k - 1];
            let merged = (means[k - 2] * counts[k - 2] as f64
                + means[k - 1] * counts[k - 1] as f64)
                / total as f64;
            means.truncate(k - 1);
            counts.truncate(k - 1);
            *means.last_mut().unwrap() = merged;
            *counts.last_mut().unwrap() = total;
        }
    }
    let mut pos = 0;
    for (mean, count) in means.iter().zip(&counts) {
        for _ in 0..*count {
            x[pos] = *mean;
            pos += 1;
        }
    }
}

/// Eigenvalue, eigenfunction and convergence diagnostics.
#[derive(Debug, Clone)]
pub struct EigenResult {
    pub lambda: f64,
    /// normalised to I_m = 1
    pub eigenfunction: Potential,
    pub residual_l1: f64,
    pub rayleigh_history: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// rescaling constant of the last inverse-iteration step; agrees with
    /// `lambda` at convergence and is recorded as an independent consistency
    /// check
    pub lambda_normalization: f64,
}

fn weighted_l1(values: impl Iterator<Item = f64>, w: &[f64]) -> f64 {
    values.zip(w).map(|(v, wi)| v.abs() * wi).sum()
}

/// E_m and I_m from backend primitives (no cone re-verification in the loop).
fn energy_twist<B: Backend>(backend: &B, u: &[f64], m: usize) -> (f64, f64) {
    let e = backend.energy(u);
    let i = u
        .iter()
        .zip(backend.mu_g().iter().zip(backend.beta_w()))
        .map(|(v, (g, w))| (-v).powi(m as i32 + 1) * g * w)
        .sum::<f64>()
        / (m as f64 + 1.0);
    (e, i)
}

/// Rescale to I_m = 1; returns the factor.
fn normalize_im<B: Backend>(backend: &B, u: &mut [f64], m: usize) -> Result<f64> {
    let (_, i) = energy_twist(backend, u, m);
    if !(i > 0.0) {
        return Err(Error::ZeroTwist);
    }
    let c = i.powf(-1.0 / (m as f64 + 1.0));
    for x in u.iter_mut() {
        *x *= c;
    }
    Ok(c)
}

/// Relative L¹ eigenpair residual ‖density(u) − λᵐ(−u)ᵐ g‖ / ‖λᵐ(−u)ᵐ g‖
/// over the backend's residual region.
fn eigen_residual_backend<B: Backend>(backend: &B, u: &[f64], lambda: f64, m: usize) -> f64 {
    let dens = backend.density(u);
    let lm = lambda.powi(m as i32);
    let rhs: Vec<f64> = u
        .iter()
        .zip(backend.mu_g())
        .map(|(v, g)| lm * (-v).max(0.0).powi(m as i32) * g)
        .collect();
    let num = weighted_l1(
        dens.iter().zip(&rhs).map(|(d, r)| d - r),
        backend.residual_w(),
    );
    let den = weighted_l1(rhs.iter().copied(), backend.residual_w());
    if den > 0.0 {
        num / den
    } else if num > 0.0 {
        f64::INFINITY
    } else {
        0.0
    }
}

fn eigen_loop<B: Backend>(
    backend: &mut B,
    m: usize,
    init: Option<Vec<f64>>,
    tol: f64,
    max_iter: usize,
    mut observer: Option<&mut dyn FnMut(IterStat)>,
) -> Result<EigenResult> {
    let mut u = match init {
        Some(v) => v,
        None => {
            // default: solution of the untwisted problem f = μ-density
            let g = backend.mu_g().to_vec();
            backend.solve(&g)?
        }
    };
    normalize_im(backend, &mut u, m)?;

    let mut history = Vec::new();
    let mut lambda = f64::NAN;
    let mut lambda_norm = f64::NAN;
    let mut residual = f64::INFINITY;
    let mut converged = false;
    let mut iterations = 0;

    for k in 1..=max_iter {
        iterations = k;
        let rhs: Vec<f64> = u
            .iter()
            .zip(backend.mu_g())
            .map(|(v, g)| (-v).max(0.0).powi(m as i32) * g)
            .collect();
        let mut w = backend.solve(&rhs)?;
        lambda_norm = normalize_im(backend, &mut w, m)?;
        u = w;

        let (e, i) = energy_twist(backend, &u, m);
        let lam = (e / i).powf(1.0 / m as f64);
        residual = eigen_residual_backend(backend, &u, lam, m);
        history.push(lam);
        if let Some(obs) = observer.as_deref_mut() {
            obs(IterStat {
                iter: k,
                lambda: lam,
                residual,
                functional: e,
            });
        }
        let stalled = k >= 2 && {
            let prev = history[k - 2];
            (lam - prev).abs() <= tol * lam.abs()
        };
        lambda = lam;
        if stalled && residual <= tol {
            converged = true;
            break;
        }
    }

    Ok(EigenResult {
        lambda,
        eigenfunction: backend.wrap(u),
        residual_l1: residual,
        rayleigh_history: history,
        iterations,
        converged,
        lambda_normalization: lambda_norm,
    })
}

/// Inverse iteration on the radial carrier: exact-quadrature Dirichlet
/// solves, I_m = 1 renormalisation, λ read off the Rayleigh quotient.
pub fn eigen_inverse_iteration_radial(
    mu: &DensityMeasure,
    m: usize,
    init: Option<&RadialPotential>,
    tol: f64,
    max_iter: usize,
    observer: Option<&mut dyn FnMut(IterStat)>,
) -> Result<EigenResult> {
    let mut backend = radial_backend(mu, m)?;
    eigen_loop(
        &mut backend,
        m,
        init.map(|v| v.values().to_vec()),
        tol,
        max_iter,
        observer,
    )
}

/// Inverse iteration on a grid carrier, warm-starting the inner relaxation
/// from the previous iterate.
pub fn eigen_inverse_iteration_grid(
    mu: &DensityMeasure,
    m: usize,
    init: Option<&GridPotential>,
    tol: f64,
    max_iter: usize,
    grid_params: GridSolveParams,
    observer: Option<&mut dyn FnMut(IterStat)>,
) -> Result<EigenResult> {
    let mut backend = grid_backend(mu, m, grid_params)?;
    eigen_loop(
        &mut backend,
        m,
        init.map(|u| u.values().to_vec()),
        tol,
        max_iter,
        observer,
    )
}

fn radial_backend(mu: &DensityMeasure, m: usize) -> Result<RadialBackend> {
    let Carrier::Radial { n, rho_max, len } = mu.carrier() else {
        return Err(Error::CarrierMismatch);
    };
    if m == 0 || m > *n {
        return Err(Error::InvalidOrder { m, n: *n });
    }
    let bw = beta_weights(&Carrier::Radial {
        n: *n,
        rho_max: *rho_max,
        len: *len,
    })?;
    Ok(RadialBackend {
        n: *n,
        m,
        rho_max: *rho_max,
        g: mu.density().to_vec(),
        bw,
    })
}

fn grid_backend(mu: &DensityMeasure, m: usize, params: GridSolveParams) -> Result<GridBackend> {
    let Carrier::Grid(grid) = mu.carrier() else {
        return Err(Error::CarrierMismatch);
    };
    GridBackend::new(grid, mu, m, params)
}

const DESCENT_SLACK: f64 = 1e-10;
const MAX_CONSECUTIVE_REJECTS: usize = 50;

fn descent_loop<B: Backend>(
    backend: &mut B,
    m: usize,
    init: Option<Vec<f64>>,
    steps: usize,
    step_size: f64,
    mut observer: Option<&mut dyn FnMut(IterStat)>,
) -> Result<EigenResult> {
    let mut u = match init {
        Some(v) => v,
        None => {
            let g = backend.mu_g().to_vec();
            backend.solve(&g)?
        }
    };
    backend.project(&mut u);
    normalize_im(backend, &mut u, m)?;
    let (e, i) = energy_twist(backend, &u, m);
    let mut lambda = (e / i).powf(1.0 / m as f64);
    let mut history = alloc::vec![lambda];

    let mut eta = step_size;
    let mut rejects = 0usize;
    let mut iterations = 0usize;
    for step in 1..=steps {
        iterations = step;
        // Φ_λ̂ decreases along u → w with w solving (dd^c w)^m = λ̂ᵐ(−u)ᵐμ:
        // the energy-metric gradient step. (The plain L²-metric step creeps
        // once iterates brush the cone boundary at the rim, where σ_m of the
        // eigenfunction itself degenerates.) The retraction is the envelope
        // P_m; a short line search keeps the Rayleigh history non-increasing
        // within the slack.
        let lm = lambda.powi(m as i32);
        let rhs: Vec<f64> = u
            .iter()
            .zip(backend.mu_g())
            .map(|(v, g)| lm * (-v).max(0.0).powi(m as i32) * g)
            .collect();
        let w = backend.solve(&rhs)?;
        let dir: Vec<f64> = w.iter().zip(&u).map(|(wi, ui)| wi - ui).collect();
        let evaluate = |backend: &mut B, eta: f64| -> Option<(Vec<f64>, f64)> {
            let mut u_try: Vec<f64> = u.iter().zip(&dir).map(|(v, d)| v + eta * d).collect();
            backend.project(&mut u_try);
            normalize_im(backend, &mut u_try, m).ok()?;
            let (e, i) = energy_twist(backend, &u_try, m);
            Some((u_try, (e / i).powf(1.0 / m as f64)))
        };
        loop {
            // short line search around the current step length
            let mut accepted = None;
            for scale in [2.0, 1.0, 0.5] {
                if let Some((u_try, lam_try)) = evaluate(backend, (eta * scale).min(2.0)) {
                    if lam_try <= lambda + DESCENT_SLACK * (1.0 + lambda.abs())
                        && accepted
                            .as_ref()
                            .map(|(_, l, _)| lam_try < *l)
                            .unwrap_or(true)
                    {
                        accepted = Some((u_try, lam_try, (eta * scale).min(2.0)));
                    }
                }
            }
            if let Some((u_new, lam_new, eta_new)) = accepted {
                u = u_new;
                lambda = lam_new;
                eta = eta_new;
                rejects = 0;
                break;
            }
            rejects += 1;
            eta *= 0.25;
            if rejects > MAX_CONSECUTIVE_REJECTS {
                return Err(Error::StepRejected { rejects });
            }
        }
        history.push(lambda);
        let residual = eigen_residual_backend(backend, &u, lambda, m);
        if let Some(obs) = observer.as_deref_mut() {
            obs(IterStat {
                iter: step,
                lambda,
                residual,
                functional: lambda,
            });
        }
    }
    let residual = eigen_residual_backend(backend, &u, lambda, m);
    let converged = history
        .len()
        .checked_sub(2)
        .map(|i| (history[i + 1] - history[i]).abs() <= 1e-8 * (1.0 + lambda.abs()))
        .unwrap_or(false);
    Ok(EigenResult {
        lambda,
        eigenfunction: backend.wrap(u),
        residual_l1: residual,
        rayleigh_history: history,
        iterations,
        converged,
        lambda_normalization: lambda,
    })
}

/// Projected Rayleigh-quotient descent on the radial carrier. The Rayleigh
/// history is non-increasing within a 1e-10 slack by line-search contract.
pub fn eigen_rayleigh_descent_radial(
    mu: &DensityMeasure,
    m: usize,
    init: Option<&RadialPotential>,
    steps: usize,
    step_size: f64,
    observer: Option<&mut dyn FnMut(IterStat)>,
) -> Result<EigenResult> {
    let mut backend = radial_backend(mu, m)?;
    descent_loop(
        &mut backend,
        m,
        init.map(|v| v.values().to_vec()),
        steps,
        step_size,
        observer,
    )
}

/// Projected Rayleigh-quotient descent on a grid carrier.
pub fn eigen_rayleigh_descent_grid(
    mu: &DensityMeasure,
    m: usize,
    init: Option<&GridPotential>,
    steps: usize,
    step_size: f64,
    grid_params: GridSolveParams,
    observer: Option<&mut dyn FnMut(IterStat)>,
) -> Result<EigenResult> {
    let mut backend = grid_backend(mu, m, grid_params)?;
    descent_loop(
        &mut backend,
        m,
        init.map(|u| u.values().to_vec()),
        steps,
        step_size,
        observer,
    )
}

/// Semilinear solve diagnostics.
#[derive(Debug, Clone)]
pub struct SemilinearDiag {
    pub iterations: usize,
    pub sup_update: f64,
    pub residual_l1: f64,
    pub converged: bool,
    pub phi_history: Vec<f64>,
    /// Φ_{G,μ} non-increasing after the burn-in window
    pub phi_monotone_after_burnin: bool,
}

const SEMILINEAR_BURNIN: usize = 3;

fn semilinear_loop<B: Backend>(
    backend: &mut B,
    family: &RhsFamily,
    m: usize,
    lambda1: f64,
    tol: f64,
    max_iter: usize,
    mut observer: Option<&mut dyn FnMut(IterStat)>,
) -> Result<(Potential, SemilinearDiag)> {
    family.validate(m)?;
    let hrep = check_h_hypotheses(family, lambda1, m)?;
    if !hrep.h2_pass {
        return Err(Error::H2Rejected {
            limsup: hrep.h2_limit,
            threshold: hrep.theta,
        });
    }

    let mut u: Vec<f64> = vec![0.0; backend.node_count()];
    let mut phi_history = Vec::new();
    let mut sup_update = f64::INFINITY;
    let mut converged = false;
    let mut iterations = 0;
    for k in 1..=max_iter {
        iterations = k;
        let mut rhs = Vec::with_capacity(u.len());
        for (v, g) in u.iter().zip(backend.mu_g()) {
            rhs.push(family.g((*v).min(0.0), m)? * g);
        }
        let w = backend.solve(&rhs)?;
        sup_update = u
            .iter()
            .zip(&w)
            .fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()));
        u = w;

        let (e, _) = energy_twist(backend, &u, m);
        let mut lh = 0.0;
        for ((v, g), wt) in u.iter().zip(backend.mu_g()).zip(backend.beta_w()) {
            lh += family.h((*v).min(0.0), m)? * g * wt;
        }
        let phi = e - lh;
        phi_history.push(phi);
        if let Some(obs) = observer.as_deref_mut() {
            obs(IterStat {
                iter: k,
                lambda: f64::NAN,
                residual: sup_update,
                functional: phi,
            });
        }
        let sup_u = u.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        if !sup_u.is_finite() || sup_u > 1e9 {
            return Err(Error::Diverged {
                sweeps: k,
                residual: sup_u,
            });
        }
        if sup_update <= tol {
            converged = true;
            break;
        }
    }

    // relative L¹ residual of (dd^c u)^m ∧ β^{n−m} = G(·,u) μ
    let dens = backend.density(&u);
    let mut rhs = Vec::with_capacity(u.len());
    for (v, g) in u.iter().zip(backend.mu_g()) {
        rhs.push(family.g((*v).min(0.0), m)? * g);
    }
    let num = weighted_l1(
        dens.iter().zip(&rhs).map(|(d, r)| d - r),
        backend.residual_w(),
    );
    let den = weighted_l1(rhs.iter().copied(), backend.residual_w());
    let residual_l1 = if den > 0.0 { num / den } else { num };

    let slack = 1e-8;
    let phi_monotone_after_burnin = phi_history
        .iter()
        .skip(SEMILINEAR_BURNIN)
        .zip(phi_history.iter().skip(SEMILINEAR_BURNIN + 1))
        .all(|(a, b)| *b <= *a + slack * (1.0 + a.abs()));

    Ok((
        backend.wrap(u),
        SemilinearDiag {
            iterations,
            sup_update,
            residual_l1,
            converged,
            phi_history,
            phi_monotone_after_burnin,
        },
    ))
}

/// Fixed-point solve of (dd^c u)^m ∧ β^{n−m} = G(·,u) μ on the radial
/// carrier. Refuses to run when the H2 growth check fails against the
/// supplied λ₁ estimate (coercivity would be lost).
pub fn solve_semilinear_radial(
    family: &RhsFamily,
    mu: &DensityMeasure,
    m: usize,
    lambda1: f64,
    tol: f64,
    max_iter: usize,
    observer: Option<&mut dyn FnMut(IterStat)>,
) -> Result<(Potential, SemilinearDiag)> {
    let mut backend = radial_backend(mu, m)?;
    semilinear_loop(&mut backend, family, m, lambda1, tol, max_iter, observer)
}

/// Grid-carrier variant of [`solve_semilinear_radial`].
#[allow(clippy::too_many_arguments)]
pub fn solve_semilinear_grid(
    family: &RhsFamily,
    mu: &DensityMeasure,
    m: usize,
    lambda1: f64,
    tol: f64,
    max_iter: usize,
    grid_params: GridSolveParams,
    observer: Option<&mut dyn FnMut(IterStat)>,
) -> Result<(Potential, SemilinearDiag)> {
    let mut backend = grid_backend(mu, m, grid_params)?;
    semilinear_loop(&mut backend, family, m, lambda1, tol, max_iter, observer)
}

/// Integrability/Hölder exponents attached to (m, n, p, r).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentRecord {
    pub m: usize,
    pub n: usize,
    pub p: f64,
    pub r: f64,
    /// ℓ(m,n) = (m+1)/(n−m); +∞ in the limit case m = n
    pub ell: f64,
    /// Hölder threshold p*(m,n); 1 in the limit case m = n
    pub p_star: f64,
    /// τ(r,p,m) = mrp/(p−r)
    pub tau_at_r: f64,
    /// k(m,n,p) = n(p−1)/(p(n−m)); +∞ for m = n
    pub k_exp: f64,
    /// (n−1)/2 < m ≤ n and p > p*(m,n)
    pub holder_condition: bool,
    /// m = n: ℓ → ∞ and p* → 1
    pub limit_case: bool,
}

impl ExponentRecord {
    pub fn tau(&self, r: f64) -> f64 {
        self.m as f64 * r * self.p / (self.p - r)
    }
}

/// Evaluate ℓ, p*, τ(r) and k(m,n,p), and the Hölder condition.
pub fn compute_exponents(m: usize, n: usize, p: f64, r: f64) -> Result<ExponentRecord> {
    if m == 0 || m > n {
        return Err(Error::InvalidOrder { m, n });
    }
    if !(p > 1.0) {
        return Err(Error::InvalidExponentP(p));
    }
    if !(r > 0.0 && r < p) {
        return Err(Error::InvalidExponentR { r, p });
    }
    let limit_case = m == n;
    let (ell, p_star, k_exp) = if limit_case {
        (f64::INFINITY, 1.0, f64::INFINITY)
    } else {
        let nm = (n - m) as f64;
        let ell = (m as f64 + 1.0) / nm;
        let p_star = if ell > 1.0 {
            let delta = ell * ell * nm * nm + 4.0 * ell * m as f64 * n as f64;
            (ell * (n + m) as f64 + delta.sqrt()) / (2.0 * m as f64 * (ell - 1.0))
        } else {
            // ℓ ≤ 1 ⟺ m ≤ (n−1)/2: no admissible p exists
            f64::INFINITY
        };
        let k_exp = n as f64 * (p - 1.0) / (p * nm);
        (ell, p_star, k_exp)
    };
    let holder_condition = (m as f64 > (n as f64 - 1.0) / 2.0) && p > p_star;
    Ok(ExponentRecord {
        m,
        n,
        p,
        r,
        ell,
        p_star,
        tau_at_r: m as f64 * r * p / (p - r),
        k_exp,
        holder_condition,
        limit_case,
    })
}

/// Empirical H2/H3 growth report for a right-hand-side family.
#[derive(Debug, Clone, Copy)]
pub struct HHypothesesReport {
    /// λ₁ᵐ/(m+1), the growth threshold
    pub theta: f64,
    /// limsup proxy of sup_z H(z,t)/|t|^{m+1} as t → −∞
    pub h2_limit: f64,
    pub h2_stable: bool,
    pub h2_pass: bool,
    /// H3 applies only when G(·,0) ≡ 0
    pub h3_applicable: bool,
    /// liminf proxy of H(z,t)/|t|^{m+1} as t → 0⁻ (NaN when inapplicable)
    pub h3_limit: f64,
    pub h3_pass: bool,
}

/// Evaluate H(t)/|t|^{m+1} on geometric t-grids toward −∞ (H2) and toward 0⁻
/// (H3) and compare against λ₁ᵐ/(m+1).
pub fn check_h_hypotheses(family: &RhsFamily, lambda1: f64, m: usize) -> Result<HHypothesesReport> {
    let theta = lambda1.powi(m as i32) / (m as f64 + 1.0);
    let ratio = |t: f64| -> Result<f64> { Ok(family.h(t, m)? / (-t).powi(m as i32 + 1)) };

    // t = −2^k, k = 0..30
    let mut tail = [0.0f64; 2];
    for k in 0..=30u32 {
        let r = ratio(-((1u64 << k) as f64))?;
        tail[0] = tail[1];
        tail[1] = r;
    }
    let h2_limit = tail[1];
    let h2_stable = (tail[1] - tail[0]).abs() <= 1e-4 * (1.0 + tail[1].abs());
    let h2_pass = h2_stable && h2_limit < theta;

    let h3_applicable = family.g(0.0, m)? == 0.0;
    let (h3_limit, h3_pass) = if h3_applicable {
        let mut min_tail = f64::INFINITY;
        let mut last = f64::NAN;
        for k in 1..=30u32 {
            let r = ratio(-(0.5f64).powi(k as i32))?;
            last = r;
            if k > 25 {
                min_tail = min_tail.min(r);
            }
        }
        let _ = last;
        (min_tail, min_tail > theta)
    } else {
        (f64::NAN, true)
    };

    Ok(HHypothesesReport {
        theta,
        h2_limit,
        h2_stable,
        h2_pass,
        h3_applicable,
        h3_limit,
        h3_pass,
    })
}
