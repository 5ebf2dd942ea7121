use alloc::string::String;
use core::fmt;

use crate::hessian::ConeReport;

/// Errors raised by construction, quadrature and solver routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Domain parameters are not usable (radius or extent ≤ 0, n = 0, ...).
    InvalidDomain(String),
    /// Grid resolution must be odd and ≥ 5 (a centre node is required).
    EvenResolution(usize),
    /// Grid resolution below the 5-node minimum.
    ResolutionTooSmall(usize),
    /// Tensor grids are limited to n ≤ 2 (2n real axes).
    GridDimensionTooLarge(usize),
    /// Radial carriers are limited to n ≤ 8.
    RadialDimensionTooLarge(usize),
    /// A density was negative where it must be ≥ 0.
    NegativeDensity { node: usize, value: f64 },
    /// The measure has zero total mass (μ(Ω) > 0 is required).
    ZeroMass,
    /// Field and measure live on different carriers.
    CarrierMismatch,
    /// Potential values must be ≤ 0 with zero boundary trace.
    InvalidPotential(String),
    /// Hessian order m out of 1 ≤ m ≤ n.
    InvalidOrder { m: usize, n: usize },
    /// σ_k index out of range.
    SigmaIndex { k: usize, n: usize },
    /// Input is not m-subharmonic within tolerance; carries the cone report.
    ConeViolation(ConeReport),
    /// The radial m-subharmonicity certificate failed.
    NotMSubharmonic { node: usize, value: f64 },
    /// I_m(u) = 0 for a u that is required to be ≢ 0 μ-a.e.
    ZeroTwist,
    /// Envelope iteration exhausted its sweep budget.
    EnvelopeDiverged { sweeps: usize, residual: f64 },
    /// The condenser set K touches the boundary collar of Ω.
    CondenserTouchesBoundary,
    /// Condenser set K is empty.
    EmptyCondenser,
    /// Iterative solver residual grew past the divergence threshold.
    Diverged { sweeps: usize, residual: f64 },
    /// Grid relaxation exhausted its sweep budget.
    SweepBudget { sweeps: usize, residual: f64 },
    /// Rejected line-search steps exceeded the consecutive limit.
    StepRejected { rejects: usize },
    /// The right-hand-side family failed validation (G < 0, bad exponent...).
    InvalidFamily(String),
    /// The H2 growth hypothesis failed; the semilinear solve is refused.
    H2Rejected { limsup: f64, threshold: f64 },
    /// Exponent formulas need p > 1.
    InvalidExponentP(f64),
    /// Exponent formulas need 0 < r < p.
    InvalidExponentR { r: f64, p: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidDomain(msg) => write!(f, "invalid domain: {msg}"),
            Error::EvenResolution(p) => {
                write!(f, "resolution {p} is even; a centre node is required")
            }
            Error::ResolutionTooSmall(p) => write!(f, "resolution {p} is below the minimum of 5"),
            Error::GridDimensionTooLarge(n) => {
                write!(f, "grid carrier limited to n <= 2, got n = {n}")
            }
            Error::RadialDimensionTooLarge(n) => {
                write!(f, "radial carrier limited to n <= 8, got n = {n}")
            }
            Error::NegativeDensity { node, value } => {
                write!(f, "density is negative at node {node}: {value}")
            }
            Error::ZeroMass => write!(f, "measure has zero mass"),
            Error::CarrierMismatch => write!(f, "field and measure carriers do not match"),
            Error::InvalidPotential(msg) => write!(f, "invalid potential: {msg}"),
            Error::InvalidOrder { m, n } => write!(f, "m = {m} exceeds n = {n} (need 1 <= m <= n)"),
            Error::SigmaIndex { k, n } => write!(f, "sigma_{k} undefined for n = {n}"),
            Error::ConeViolation(report) => write!(
                f,
                "not m-subharmonic: min sigma_k = {} at node {}",
                report.min_sigma, report.worst_node
            ),
            Error::NotMSubharmonic { node, value } => {
                write!(
                    f,
                    "not m-subharmonic: certificate fails at node {node} ({value})"
                )
            }
            Error::ZeroTwist => write!(f, "I_m vanishes: potential is 0 mu-a.e."),
            Error::EnvelopeDiverged { sweeps, residual } => {
                write!(
                    f,
                    "envelope not converged after {sweeps} sweeps (residual {residual:e})"
                )
            }
            Error::CondenserTouchesBoundary => write!(f, "condenser K touches the boundary collar"),
            Error::EmptyCondenser => write!(f, "condenser K is empty"),
            Error::Diverged { sweeps, residual } => {
                write!(
                    f,
                    "solver diverged after {sweeps} sweeps (residual {residual:e})"
                )
            }
            Error::SweepBudget { sweeps, residual } => {
                write!(
                    f,
                    "sweep budget exhausted after {sweeps} sweeps (residual {residual:e})"
                )
            }
            Error::StepRejected { rejects } => {
                write!(f, "descent step rejected {rejects} times consecutively")
            }
            Error::InvalidFamily(msg) => write!(f, "invalid right-hand-side family: {msg}"),
            Error::H2Rejected { limsup, threshold } => write!(
                f,
                "H2 growth check failed: limsup {limsup:e} >= lambda_1^m/(m+1) = {threshold:e}"
            ),
            Error::InvalidExponentP(p) => write!(f, "exponent formulas require p > 1, got {p}"),
            Error::InvalidExponentR { r, p } => {
                write!(
                    f,
                    "exponent formulas require 0 < r < p, got r = {r}, p = {p}"
                )
            }
        }
    }
}

impl core::error::Error for Error {}
