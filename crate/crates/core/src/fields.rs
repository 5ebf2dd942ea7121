//! Domains, grids, potentials, measures and quadrature.
//!
//! Two carriers exist. Tensor grids over a box in ℝ^{2n} (n ≤ 2) sample
//! general potentials; the 1-D radial carrier samples profiles v(ρ), ρ = |z|²,
//! on a ball (n ≤ 8). All masses and densities are relative to the reference
//! volume βⁿ = 4ⁿ n! · Lebesgue, so the conversion constant appears exactly
//! once, in the quadrature weights.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

#[cfg_attr(test, allow(unused_imports))]
use crate::math::FloatExt;
use crate::{Error, Result};

pub const PI: f64 = core::f64::consts::PI;

/// Largest complex dimension served by the radial carrier.
pub const MAX_RADIAL_N: usize = 8;
/// Largest complex dimension served by tensor grids (2n real axes).
pub const MAX_GRID_N: usize = 2;

/// βⁿ mass per unit Lebesgue volume: 4ⁿ n!.
pub fn beta_volume_factor(n: usize) -> f64 {
    let mut f = 1.0;
    for k in 1..=n {
        f *= 4.0 * k as f64;
    }
    f
}

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Ball {
        radius: f64,
    },
    /// Half-extent per real axis (length 2n); the box is Π [−e_a, e_a].
    Box {
        half_extents: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    shape: Shape,
    n: usize,
}

impl Domain {
    pub fn ball(n: usize, radius: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDomain(String::from("n must be >= 1")));
        }
        if !(radius > 0.0) {
            return Err(Error::InvalidDomain(format!(
                "radius must be > 0, got {radius}"
            )));
        }
        Ok(Domain {
            shape: Shape::Ball { radius },
            n,
        })
    }

    pub fn box_uniform(n: usize, half_extent: f64) -> Result<Self> {
        Self::box_extents(n, vec![half_extent; 2 * n])
    }

    pub fn box_extents(n: usize, half_extents: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDomain(String::from("n must be >= 1")));
        }
        if half_extents.len() != 2 * n {
            return Err(Error::InvalidDomain(format!(
                "need one half-extent per real axis (2n = {}), got {}",
                2 * n,
                half_extents.len()
            )));
        }
        if half_extents.iter().any(|e| !(*e > 0.0)) {
            return Err(Error::InvalidDomain(String::from(
                "all box extents must be > 0",
            )));
        }
        Ok(Domain {
            shape: Shape::Box { half_extents },
            n,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn is_ball(&self) -> bool {
        matches!(self.shape, Shape::Ball { .. })
    }

    pub fn radius(&self) -> Option<f64> {
        match self.shape {
            Shape::Ball { radius } => Some(radius),
            Shape::Box { .. } => None,
        }
    }

    /// Half-extent of the bounding box along a real axis.
    pub fn half_extent(&self, axis: usize) -> f64 {
        match &self.shape {
            Shape::Ball { radius } => *radius,
            Shape::Box { half_extents } => half_extents[axis],
        }
    }
}

/// Uniform tensor grid over the bounding box of a domain.
///
/// The interior mask is trimmed by one stencil: a node is interior only when
/// the node and every node its central-difference stencil reads (axis
/// neighbours and the pair diagonals used by mixed derivatives) lie inside the
/// open domain. Values outside the mask are pinned to the zero boundary trace.
#[derive(Debug)]
pub struct Grid {
    domain: Domain,
    points_per_axis: usize,
    spacings: Vec<f64>,
    strides: Vec<usize>,
    interior: Vec<bool>,
    interior_count: usize,
}

impl Grid {
    pub fn new(domain: Domain, points_per_axis: usize) -> Result<Arc<Grid>> {
        if domain.n() > MAX_GRID_N {
            return Err(Error::GridDimensionTooLarge(domain.n()));
        }
        if points_per_axis < 5 {
            return Err(Error::ResolutionTooSmall(points_per_axis));
        }
        if points_per_axis % 2 == 0 {
            return Err(Error::EvenResolution(points_per_axis));
        }
        let axes = 2 * domain.n();
        let spacings: Vec<f64> = (0..axes)
            .map(|a| 2.0 * domain.half_extent(a) / (points_per_axis - 1) as f64)
            .collect();
        let mut strides = vec![1usize; axes];
        for a in (0..axes.saturating_sub(1)).rev() {
            strides[a] = strides[a + 1] * points_per_axis;
        }
        let total = strides[0] * points_per_axis;

        let mut grid = Grid {
            domain,
            points_per_axis,
            spacings,
            strides,
            interior: vec![false; total],
            interior_count: 0,
        };
        grid.build_mask();
        Ok(Arc::new(grid))
    }

    fn build_mask(&mut self) {
        let axes = self.num_axes();
        let total = self.total_nodes();
        let mut coords = vec![0.0; axes];
        let mut count = 0usize;
        for node in 0..total {
            self.coords_into(node, &mut coords);
            let inside = match &self.domain.shape {
                Shape::Ball { radius } => {
                    let r2 = radius * radius;
                    let node_in = norm_sq(&coords) < r2;
                    node_in && self.stencil_inside_ball(&coords, r2)
                }
                Shape::Box { .. } => (0..axes).all(|a| {
                    let i = self.axis_index(node, a);
                    i >= 1 && i + 2 <= self.points_per_axis
                }),
            };
            self.interior[node] = inside;
            if inside {
                count += 1;
            }
        }
        self.interior_count = count;
    }

    fn stencil_inside_ball(&self, coords: &[f64], r2: f64) -> bool {
        let axes = coords.len();
        let probe = |da: usize, sa: f64, db: usize, sb: f64| -> bool {
            let mut s = 0.0;
            for (a, &c) in coords.iter().enumerate() {
                let mut x = c;
                if a == da {
                    x += sa * self.spacings[a];
                }
                if a == db {
                    x += sb * self.spacings[a];
                }
                s += x * x;
            }
            s < r2
        };
        for a in 0..axes {
            if !probe(a, 1.0, a, 0.0) || !probe(a, -1.0, a, 0.0) {
                return false;
            }
        }
        for a in 0..axes {
            for b in (a + 1)..axes {
                for (sa, sb) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                    if !probe(a, sa, b, sb) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn n(&self) -> usize {
        self.domain.n()
    }

    pub fn num_axes(&self) -> usize {
        2 * self.domain.n()
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    pub fn total_nodes(&self) -> usize {
        self.interior.len()
    }

    pub fn interior_count(&self) -> usize {
        self.interior_count
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        self.spacings[axis]
    }

    pub fn is_interior(&self, node: usize) -> bool {
        self.interior[node]
    }

    pub fn interior_mask(&self) -> &[bool] {
        &self.interior
    }

    pub fn axis_index(&self, node: usize, axis: usize) -> usize {
        (node / self.strides[axis]) % self.points_per_axis
    }

    pub fn coord(&self, node: usize, axis: usize) -> f64 {
        -self.domain.half_extent(axis) + self.axis_index(node, axis) as f64 * self.spacings[axis]
    }

    pub fn coords_into(&self, node: usize, out: &mut [f64]) {
        for a in 0..self.num_axes() {
            out[a] = self.coord(node, a);
        }
    }

    /// |z|² of a node.
    pub fn rho(&self, node: usize) -> f64 {
        let mut s = 0.0;
        for a in 0..self.num_axes() {
            let c = self.coord(node, a);
            s += c * c;
        }
        s
    }

    /// Neighbour along an axis. Interior nodes never sit on the bounding-box
    /// edge, so the shift stays on the grid.
    pub fn neighbor(&self, node: usize, axis: usize, dir: isize) -> usize {
        debug_assert!({
            let i = self.axis_index(node, axis) as isize + dir;
            i >= 0 && (i as usize) < self.points_per_axis
        });
        (node as isize + dir * self.strides[axis] as isize) as usize
    }

    pub fn interior_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.total_nodes()).filter(move |&i| self.interior[i])
    }

    /// Nodes whose full stencil reads only interior nodes; the region where
    /// central-difference densities are free of boundary-pinning artefacts.
    pub fn stencil_clean_mask(&self) -> Vec<bool> {
        let axes = self.num_axes();
        let mut clean = vec![false; self.total_nodes()];
        for node in self.interior_nodes() {
            let mut ok = true;
            'probe: for a in 0..axes {
                for da in [-1isize, 1] {
                    if !self.interior[self.neighbor(node, a, da)] {
                        ok = false;
                        break 'probe;
                    }
                    for b in (a + 1)..axes {
                        for db in [-1isize, 1] {
                            let q = self.neighbor(self.neighbor(node, a, da), b, db);
                            if !self.interior[q] {
                                ok = false;
                                break 'probe;
                            }
                        }
                    }
                }
            }
            clean[node] = ok;
        }
        clean
    }

    fn same_carrier(&self, other: &Grid) -> bool {
        core::ptr::eq(self, other)
            || (self.domain == other.domain && self.points_per_axis == other.points_per_axis)
    }
}

fn norm_sq(coords: &[f64]) -> f64 {
    coords.iter().map(|c| c * c).sum()
}

/// Sampled potential on a grid: ≤ 0 on the interior mask, exactly 0 elsewhere.
#[derive(Debug, Clone)]
pub struct GridPotential {
    grid: Arc<Grid>,
    values: Vec<f64>,
}

impl GridPotential {
    pub fn zeros(grid: Arc<Grid>) -> Self {
        let len = grid.total_nodes();
        GridPotential {
            grid,
            values: vec![0.0; len],
        }
    }

    /// Sample f at interior nodes; rejects positive values.
    pub fn from_fn(grid: Arc<Grid>, f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let mut values = vec![0.0; grid.total_nodes()];
        let mut coords = vec![0.0; grid.num_axes()];
        for node in 0..grid.total_nodes() {
            if grid.is_interior(node) {
                grid.coords_into(node, &mut coords);
                let v = f(&coords);
                if v > 0.0 {
                    return Err(Error::InvalidPotential(format!(
                        "positive value {v} at node {node}"
                    )));
                }
                values[node] = v;
            }
        }
        Ok(GridPotential { grid, values })
    }

    /// Sample min(f, 0) at interior nodes.
    pub fn from_fn_clamped(grid: Arc<Grid>, f: impl Fn(&[f64]) -> f64) -> Self {
        let mut values = vec![0.0; grid.total_nodes()];
        let mut coords = vec![0.0; grid.num_axes()];
        for node in 0..grid.total_nodes() {
            if grid.is_interior(node) {
                grid.coords_into(node, &mut coords);
                values[node] = f(&coords).min(0.0);
            }
        }
        GridPotential { grid, values }
    }

    /// Lift a radial profile: u(z) = v(|z|²), linearly interpolated in ρ.
    pub fn from_radial(grid: Arc<Grid>, v: &RadialPotential) -> Self {
        let mut values = vec![0.0; grid.total_nodes()];
        for node in 0..grid.total_nodes() {
            if grid.is_interior(node) {
                values[node] = v.eval(grid.rho(node)).min(0.0);
            }
        }
        GridPotential { grid, values }
    }

    /// Adopt per-node values: must be ≤ 0 on the interior mask; values off
    /// the mask are forced to the zero boundary trace.
    pub fn from_node_values(grid: Arc<Grid>, mut values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.total_nodes() {
            return Err(Error::CarrierMismatch);
        }
        for (node, v) in values.iter_mut().enumerate() {
            if grid.is_interior(node) {
                if *v > 0.0 {
                    return Err(Error::InvalidPotential(format!(
                        "positive value {v} at node {node}"
                    )));
                }
            } else {
                *v = 0.0;
            }
        }
        Ok(GridPotential { grid, values })
    }

    pub(crate) fn from_values_unchecked(grid: Arc<Grid>, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.total_nodes());
        GridPotential { grid, values }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn scaled(&self, c: f64) -> Self {
        GridPotential {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().map(|v| c * v).collect(),
        }
    }
}

/// Radial profile v(ρ) on a uniform grid over [0, ρ₁], ρ = |z|².
///
/// Profiles are nondecreasing, ≤ 0, and vanish at ρ₁; the m-dependent
/// subharmonicity certificate lives in [`crate::hessian`].
#[derive(Debug, Clone, PartialEq)]
pub struct RadialPotential {
    n: usize,
    rho_max: f64,
    values: Vec<f64>,
}

impl RadialPotential {
    pub fn new(n: usize, rho_max: f64, mut values: Vec<f64>) -> Result<Self> {
        if n == 0 || n > MAX_RADIAL_N {
            return Err(Error::RadialDimensionTooLarge(n));
        }
        if !(rho_max > 0.0) {
            return Err(Error::InvalidDomain(format!(
                "rho_max must be > 0, got {rho_max}"
            )));
        }
        if values.len() < 5 {
            return Err(Error::ResolutionTooSmall(values.len()));
        }
        if values.len() % 2 == 0 {
            return Err(Error::EvenResolution(values.len()));
        }
        let scale = values
            .iter()
            .fold(0.0f64, |acc, v| acc.max(v.abs()))
            .max(1.0);
        let slack = 1e-12 * scale;
        let last = *values.last().unwrap();
        if last.abs() > slack {
            return Err(Error::InvalidPotential(format!(
                "v(rho_1) = {last}, expected 0"
            )));
        }
        *values.last_mut().unwrap() = 0.0;
        for (i, w) in values.windows(2).enumerate() {
            if w[1] < w[0] - slack {
                return Err(Error::InvalidPotential(format!(
                    "profile decreases between nodes {i} and {}",
                    i + 1
                )));
            }
        }
        if values.iter().any(|v| *v > slack) {
            return Err(Error::InvalidPotential(String::from(
                "positive profile value",
            )));
        }
        Ok(RadialPotential { n, rho_max, values })
    }

    pub fn from_profile(
        n: usize,
        rho_max: f64,
        len: usize,
        f: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        let dr = rho_max / (len - 1) as f64;
        let values: Vec<f64> = (0..len).map(|i| f(i as f64 * dr)).collect();
        Self::new(n, rho_max, values)
    }

    pub(crate) fn from_values_unchecked(n: usize, rho_max: f64, values: Vec<f64>) -> Self {
        RadialPotential { n, rho_max, values }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rho_max(&self) -> f64 {
        self.rho_max
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn dr(&self) -> f64 {
        self.rho_max / (self.values.len() - 1) as f64
    }

    pub fn rho(&self, i: usize) -> f64 {
        i as f64 * self.dr()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Linear interpolation; 0 beyond ρ₁.
    pub fn eval(&self, rho: f64) -> f64 {
        if rho >= self.rho_max {
            return 0.0;
        }
        let t = (rho.max(0.0)) / self.dr();
        let i = (t as usize).min(self.values.len() - 2);
        let frac = t - i as f64;
        self.values[i] * (1.0 - frac) + self.values[i + 1] * frac
    }

    pub fn scaled(&self, c: f64) -> Self {
        RadialPotential {
            n: self.n,
            rho_max: self.rho_max,
            values: self.values.iter().map(|v| c * v).collect(),
        }
    }
}

/// Identity of the node set a field lives on.
#[derive(Debug, Clone)]
pub enum Carrier {
    Grid(Arc<Grid>),
    Radial { n: usize, rho_max: f64, len: usize },
}

impl Carrier {
    pub fn node_count(&self) -> usize {
        match self {
            Carrier::Grid(g) => g.total_nodes(),
            Carrier::Radial { len, .. } => *len,
        }
    }

    pub fn matches(&self, other: &Carrier) -> bool {
        match (self, other) {
            (Carrier::Grid(a), Carrier::Grid(b)) => a.same_carrier(b),
            (
                Carrier::Radial { n, rho_max, len },
                Carrier::Radial {
                    n: n2,
                    rho_max: r2,
                    len: l2,
                },
            ) => n == n2 && len == l2 && (rho_max - r2).abs() <= 1e-15 * rho_max.abs().max(1.0),
            _ => false,
        }
    }
}

/// A potential on either carrier; the common currency of the variational layer.
#[derive(Debug, Clone)]
pub enum Potential {
    Grid(GridPotential),
    Radial(RadialPotential),
}

impl Potential {
    pub fn values(&self) -> &[f64] {
        match self {
            Potential::Grid(u) => u.values(),
            Potential::Radial(v) => v.values(),
        }
    }

    pub fn carrier(&self) -> Carrier {
        match self {
            Potential::Grid(u) => Carrier::Grid(Arc::clone(u.grid())),
            Potential::Radial(v) => Carrier::Radial {
                n: v.n(),
                rho_max: v.rho_max(),
                len: v.len(),
            },
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Potential::Grid(u) => u.grid().n(),
            Potential::Radial(v) => v.n(),
        }
    }

    pub fn scaled(&self, c: f64) -> Potential {
        match self {
            Potential::Grid(u) => Potential::Grid(u.scaled(c)),
            Potential::Radial(v) => Potential::Radial(v.scaled(c)),
        }
    }

    /// The βⁿ reference measure on this potential's carrier.
    pub fn beta_measure(&self) -> DensityMeasure {
        DensityMeasure::beta(&self.carrier()).expect("beta measure on a valid carrier")
    }

    pub fn sup_abs(&self) -> f64 {
        self.values().iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
    }
}

/// Positive measure μ = g·βⁿ with quadrature weights for its carrier.
#[derive(Debug, Clone)]
pub struct DensityMeasure {
    carrier: Carrier,
    density: Vec<f64>,
    weights: Vec<f64>,
    total_mass: f64,
}

impl DensityMeasure {
    /// βⁿ itself (g ≡ 1).
    pub fn beta(carrier: &Carrier) -> Result<Self> {
        Self::from_samples(carrier.clone(), vec![1.0; carrier.node_count()])
    }

    pub fn on_grid(grid: Arc<Grid>, f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let mut density = vec![0.0; grid.total_nodes()];
        let mut coords = vec![0.0; grid.num_axes()];
        for (node, d) in density.iter_mut().enumerate() {
            grid.coords_into(node, &mut coords);
            *d = f(&coords);
        }
        Self::from_samples(Carrier::Grid(grid), density)
    }

    pub fn on_radial(n: usize, rho_max: f64, len: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let dr = rho_max / (len - 1) as f64;
        let density: Vec<f64> = (0..len).map(|i| f(i as f64 * dr)).collect();
        Self::from_samples(Carrier::Radial { n, rho_max, len }, density)
    }

    pub fn from_samples(carrier: Carrier, density: Vec<f64>) -> Result<Self> {
        if density.len() != carrier.node_count() {
            return Err(Error::CarrierMismatch);
        }
        if let Some((node, &value)) = density.iter().enumerate().find(|(_, v)| **v < 0.0) {
            return Err(Error::NegativeDensity { node, value });
        }
        let weights = beta_weights(&carrier)?;
        let total_mass: f64 = density.iter().zip(&weights).map(|(g, w)| g * w).sum();
        if !(total_mass > 0.0) {
            return Err(Error::ZeroMass);
        }
        Ok(DensityMeasure {
            carrier,
            density,
            weights,
            total_mass,
        })
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn density(&self) -> &[f64] {
        &self.density
    }

    /// βⁿ quadrature weights of the carrier (independent of g).
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    /// ∫ field dμ = Σ field·g·w.
    pub fn integrate(&self, field: &[f64]) -> Result<f64> {
        if field.len() != self.density.len() {
            return Err(Error::CarrierMismatch);
        }
        Ok(field
            .iter()
            .zip(self.density.iter().zip(&self.weights))
            .map(|(f, (g, w))| f * g * w)
            .sum())
    }

    pub fn matches_potential(&self, u: &Potential) -> bool {
        self.carrier.matches(&u.carrier())
    }
}

/// ∫ field dμ; errors on carrier mismatch (length check).
pub fn integrate(field: &[f64], measure: &DensityMeasure) -> Result<f64> {
    measure.integrate(field)
}

/// βⁿ quadrature weights per node of a carrier.
///
/// Grid over a ball: node cells 4ⁿn!·Πh_a wherever |z| < R (the collar keeps
/// its weight; potentials vanish there, densities need not). Grid over a box:
/// tensorised trapezoid over all nodes. Radial: composite Simpson in ρ against
/// the Jacobian ρ^{n−1}, rescaled so the weight sum equals the closed-form
/// βⁿ mass (4πρ₁)ⁿ of the ball.
pub fn beta_weights(carrier: &Carrier) -> Result<Vec<f64>> {
    match carrier {
        Carrier::Grid(grid) => {
            let cell: f64 = (0..grid.num_axes()).map(|a| grid.spacing(a)).product();
            let w = beta_volume_factor(grid.n()) * cell;
            let last = grid.points_per_axis() - 1;
            Ok((0..grid.total_nodes())
                .map(|i| match grid.domain().shape() {
                    Shape::Ball { radius } => {
                        if grid.rho(i) < radius * radius {
                            w
                        } else {
                            0.0
                        }
                    }
                    Shape::Box { .. } => {
                        let mut t = w;
                        for a in 0..grid.num_axes() {
                            let idx = grid.axis_index(i, a);
                            if idx == 0 || idx == last {
                                t *= 0.5;
                            }
                        }
                        t
                    }
                })
                .collect())
        }
        Carrier::Radial { n, rho_max, len } => {
            if *n == 0 || *n > MAX_RADIAL_N {
                return Err(Error::RadialDimensionTooLarge(*n));
            }
            if *len < 5 {
                return Err(Error::ResolutionTooSmall(*len));
            }
            if len % 2 == 0 {
                return Err(Error::EvenResolution(*len));
            }
            let dr = rho_max / (len - 1) as f64;
            let mut weights: Vec<f64> = (0..*len)
                .map(|i| {
                    let simpson = if i == 0 || i == len - 1 {
                        1.0
                    } else if i % 2 == 1 {
                        4.0
                    } else {
                        2.0
                    };
                    let rho = i as f64 * dr;
                    simpson * dr / 3.0 * rho.powi(*n as i32 - 1)
                })
                .collect();
            let raw: f64 = weights.iter().sum();
            let mass = (4.0 * PI * rho_max).powi(*n as i32);
            let scale = mass / raw;
            for w in &mut weights {
                *w *= scale;
            }
            Ok(weights)
        }
    }
}
