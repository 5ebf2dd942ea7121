//! The variational layer: energy E_m, twisted functional I_m, Rayleigh
//! quotient, Φ = E_m − λᵐ I_m, the semilinear functional Φ_{G,μ}, and the
//! first-variation density.
//!
//! E_m(φ) = (m+1)⁻¹ ∫ (−φ)(dd^c φ)^m ∧ β^{n−m} and
//! I_m(φ) = (m+1)⁻¹ ∫ (−φ)^{m+1} dμ. The Rayleigh quotient (E_m/I_m)^{1/m}
//! is scale-invariant and always an upper bound for the first eigenvalue.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::fields::{DensityMeasure, Potential};
use crate::hessian::{hessian_density, is_m_subharmonic};
#[cfg_attr(test, allow(unused_imports))]
use crate::math::FloatExt;
use crate::{Error, Result};

/// E_m, I_m, the Rayleigh quotient and Φ of one potential/measure pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionalReport {
    pub e_m: f64,
    pub i_m: f64,
    pub lambda_hat: f64,
    pub phi: f64,
}

impl FunctionalReport {
    /// One CSV row: e_m, i_m, lambda_hat, phi at 17 significant digits.
    pub fn to_csv_row(&self) -> String {
        format!(
            "{:.16e},{:.16e},{:.16e},{:.16e}",
            self.e_m, self.i_m, self.lambda_hat, self.phi
        )
    }
}

/// Energy E_m(u). Rejects inputs that are not m-subharmonic within `cone_tol`
/// (a negative Hessian density would make the energy meaningless; retract
/// first).
pub fn energy_em(u: &Potential, m: usize, cone_tol: f64) -> Result<f64> {
    let report = is_m_subharmonic(u, m, cone_tol)?;
    if !report.pass {
        return Err(Error::ConeViolation(report));
    }
    let density = hessian_density(u, m)?;
    let beta = u.beta_measure();
    let integrand: Vec<f64> = u
        .values()
        .iter()
        .zip(&density)
        .map(|(v, d)| -v * d)
        .collect();
    Ok(beta.integrate(&integrand)? / (m as f64 + 1.0))
}

/// Twisted functional I_m(u) against μ.
pub fn twisted_im(u: &Potential, mu: &DensityMeasure, m: usize) -> Result<f64> {
    if !mu.matches_potential(u) {
        return Err(Error::CarrierMismatch);
    }
    let integrand: Vec<f64> = u.values().iter().map(|v| (-v).powi(m as i32 + 1)).collect();
    Ok(mu.integrate(&integrand)? / (m as f64 + 1.0))
}

/// Rayleigh quotient λ̂(u) = (E_m(u)/I_m(u))^{1/m}; an upper bound for λ₁ by
/// the variational principle.
pub fn rayleigh_lambda(u: &Potential, mu: &DensityMeasure, m: usize, cone_tol: f64) -> Result<f64> {
    let i_m = twisted_im(u, mu, m)?;
    if !(i_m > 0.0) {
        return Err(Error::ZeroTwist);
    }
    let e_m = energy_em(u, m, cone_tol)?;
    Ok((e_m / i_m).powf(1.0 / m as f64))
}

/// Φ_{Ω,μ,m}(u) = E_m(u) − λᵐ I_m(u).
pub fn phi_functional(
    u: &Potential,
    mu: &DensityMeasure,
    m: usize,
    lambda: f64,
    cone_tol: f64,
) -> Result<f64> {
    Ok(energy_em(u, m, cone_tol)? - lambda.powi(m as i32) * twisted_im(u, mu, m)?)
}

/// First variation of E_m: the density of (dd^c u)^m ∧ β^{n−m} w.r.t. βⁿ.
///
/// Sign convention E_m′(u) = −(dd^c u)^m ∧ β^{n−m}: the directional derivative
/// of E_m at u along ψ is ∫(−ψ)·field dβⁿ.
pub fn energy_gradient(u: &Potential, m: usize, cone_tol: f64) -> Result<Vec<f64>> {
    let report = is_m_subharmonic(u, m, cone_tol)?;
    if !report.pass {
        return Err(Error::ConeViolation(report));
    }
    hessian_density(u, m)
}

/// Right-hand-side family for the semilinear problem
/// (dd^c u)^m ∧ β^{n−m} = G(·,u) μ, with H(t) = ∫_t^0 G(s) ds normalised so
/// that H(0) = 0.
pub enum RhsFamily {
    /// G(t) = (−λt)ᵐ — the eigenvalue right-hand side.
    Eigen { lambda: f64 },
    /// G(t) = (1−λt)ᵐ; solvable for 0 ≤ λ < λ₁.
    AffineM { lambda: f64 },
    /// G(t) = (a−λt)ᵏ with 0 < k < m; solvable for any λ > 0.
    AffineK { a: f64, lambda: f64, k: usize },
    /// Arbitrary G(t) ≥ 0 for t ≤ 0; H evaluated by adaptive quadrature.
    Custom {
        g: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    },
}

impl core::fmt::Debug for RhsFamily {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            RhsFamily::Eigen { lambda } => write!(f, "Eigen {{ lambda: {lambda} }}"),
            RhsFamily::AffineM { lambda } => write!(f, "AffineM {{ lambda: {lambda} }}"),
            RhsFamily::AffineK { a, lambda, k } => {
                write!(f, "AffineK {{ a: {a}, lambda: {lambda}, k: {k} }}")
            }
            RhsFamily::Custom { .. } => write!(f, "Custom {{ .. }}"),
        }
    }
}

impl RhsFamily {
    pub fn validate(&self, m: usize) -> Result<()> {
        match self {
            RhsFamily::Eigen { lambda } | RhsFamily::AffineM { lambda } => {
                if *lambda < 0.0 {
                    return Err(Error::InvalidFamily(format!(
                        "lambda must be >= 0, got {lambda}"
                    )));
                }
            }
            RhsFamily::AffineK { a, lambda, k } => {
                if *a < 0.0 || *lambda < 0.0 {
                    return Err(Error::InvalidFamily(String::from(
                        "need a >= 0 and lambda >= 0",
                    )));
                }
                if *k == 0 || *k >= m {
                    return Err(Error::InvalidFamily(format!(
                        "affine_k needs 0 < k < m, got k = {k}, m = {m}"
                    )));
                }
            }
            RhsFamily::Custom { .. } => {}
        }
        Ok(())
    }

    /// G(t) for t ≤ 0; errors when a custom G turns negative.
    pub fn g(&self, t: f64, m: usize) -> Result<f64> {
        let v = match self {
            RhsFamily::Eigen { lambda } => (-lambda * t).powi(m as i32),
            RhsFamily::AffineM { lambda } => (1.0 - lambda * t).powi(m as i32),
            RhsFamily::AffineK { a, lambda, k } => (a - lambda * t).powi(*k as i32),
            RhsFamily::Custom { g } => g(t),
        };
        if v < 0.0 {
            return Err(Error::InvalidFamily(format!("G({t}) = {v} < 0")));
        }
        Ok(v)
    }

    /// H(t) = ∫_t^0 G(s) ds, with H(0) = 0 by normalisation.
    pub fn h(&self, t: f64, m: usize) -> Result<f64> {
        debug_assert!(t <= 0.0);
        let v = match self {
            RhsFamily::Eigen { lambda } => {
                lambda.powi(m as i32) * (-t).powi(m as i32 + 1) / (m as f64 + 1.0)
            }
            RhsFamily::AffineM { lambda } => {
                if *lambda == 0.0 {
                    -t
                } else {
                    ((1.0 - lambda * t).powi(m as i32 + 1) - 1.0) / (lambda * (m as f64 + 1.0))
                }
            }
            RhsFamily::AffineK { a, lambda, k } => {
                if *lambda == 0.0 {
                    -t * a.powi(*k as i32)
                } else {
                    ((a - lambda * t).powi(*k as i32 + 1) - a.powi(*k as i32 + 1))
                        / (lambda * (*k as f64 + 1.0))
                }
            }
            RhsFamily::Custom { .. } => return self.h_quadrature(t, m),
        };
        Ok(v)
    }

    /// Adaptive Simpson for custom G.
    fn h_quadrature(&self, t: f64, m: usize) -> Result<f64> {
        if t == 0.0 {
            return Ok(0.0);
        }
        let f = |s: f64| self.g(s, m);
        adaptive_simpson(&f, t, 0.0, 1e-12, 40)
    }
}

fn adaptive_simpson(
    f: &dyn Fn(f64) -> Result<f64>,
    a: f64,
    b: f64,
    tol: f64,
    depth: usize,
) -> Result<f64> {
    let fa = f(a)?;
    let fb = f(b)?;
    let mid = 0.5 * (a + b);
    let fm = f(mid)?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &dyn Fn(f64) -> Result<f64>,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: usize,
) -> Result<f64> {
    let mid = 0.5 * (a + b);
    let lm = 0.5 * (a + mid);
    let rm = 0.5 * (mid + b);
    let flm = f(lm)?;
    let frm = f(rm)?;
    let left = (mid - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - mid) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol * (1.0 + (left + right).abs()) {
        return Ok(left + right + delta / 15.0);
    }
    Ok(
        simpson_step(f, a, mid, fa, flm, fm, left, tol / 2.0, depth - 1)?
            + simpson_step(f, mid, b, fm, frm, fb, right, tol / 2.0, depth - 1)?,
    )
}

/// Semilinear functional Φ_{G,μ}(u) = E_m(u) − ∫ H(·,u) dμ.
pub fn semilinear_functional(
    u: &Potential,
    family: &RhsFamily,
    mu: &DensityMeasure,
    m: usize,
    cone_tol: f64,
) -> Result<f64> {
    family.validate(m)?;
    if !mu.matches_potential(u) {
        return Err(Error::CarrierMismatch);
    }
    let e_m = energy_em(u, m, cone_tol)?;
    let h_of_u: Result<Vec<f64>> = u.values().iter().map(|v| family.h(v.min(0.0), m)).collect();
    Ok(e_m - mu.integrate(&h_of_u?)?)
}

/// E_m, I_m, λ̂ and Φ_{λ̂} in one pass. By construction Φ at λ = λ̂ vanishes.
pub fn functional_report(
    u: &Potential,
    mu: &DensityMeasure,
    m: usize,
    cone_tol: f64,
) -> Result<FunctionalReport> {
    let e_m = energy_em(u, m, cone_tol)?;
    let i_m = twisted_im(u, mu, m)?;
    if !(i_m > 0.0) {
        return Err(Error::ZeroTwist);
    }
    let lambda_hat = (e_m / i_m).powf(1.0 / m as f64);
    Ok(FunctionalReport {
        e_m,
        i_m,
        lambda_hat,
        phi: e_m - (e_m / i_m) * i_m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{DensityMeasure, RadialPotential, PI};
    use alloc::vec;

    const LEN: usize = 801;

    fn cup() -> Potential {
        Potential::Radial(RadialPotential::from_profile(1, 1.0, LEN, |r| r - 1.0).unwrap())
    }

    fn beta_disc() -> DensityMeasure {
        DensityMeasure::on_radial(1, 1.0, LEN, |_| 1.0).unwrap()
    }

    #[test]
    fn energy_examples() {
        let zero = Potential::Radial(RadialPotential::from_values_unchecked(
            1,
            1.0,
            vec![0.0; LEN],
        ));
        assert_eq!(energy_em(&zero, 1, 1e-9).unwrap(), 0.0);

        // E₁(|z|²−1) on the unit disc = ½·∫(1−ρ)dβ = π
        let e = energy_em(&cup(), 1, 1e-9).unwrap();
        assert!((e - PI).abs() < 1e-6 * PI, "{e}");

        // homogeneity E_m(cu) = c^{m+1} E_m(u)
        let u = cup();
        let e1 = energy_em(&u, 1, 1e-9).unwrap();
        let e3 = energy_em(&u.scaled(3.0), 1, 1e-9).unwrap();
        assert!((e3 - 9.0 * e1).abs() < 1e-12 * e3.abs());
    }

    #[test]
    fn energy_rejects_cone_violations() {
        // decreasing profile: v' < 0, not subharmonic
        let vals: Vec<f64> = (0..LEN).map(|i| -(i as f64) / (LEN - 1) as f64).collect();
        let bad = Potential::Radial(RadialPotential::from_values_unchecked(1, 1.0, vals));
        assert!(matches!(
            energy_em(&bad, 1, 1e-9),
            Err(Error::ConeViolation(_))
        ));
    }

    #[test]
    fn twist_examples() {
        let mu = beta_disc();
        // formal field u ≡ −1: I_m = mass/(m+1)
        let flat = Potential::Radial(RadialPotential::from_values_unchecked(
            1,
            1.0,
            vec![-1.0; LEN],
        ));
        let i = twisted_im(&flat, &mu, 1).unwrap();
        assert!((i - mu.total_mass() / 2.0).abs() < 1e-12 * i);

        // I₁(|z|²−1) = ½∫(1−ρ)²dβ = 2π/3, Simpson-exact
        let i = twisted_im(&cup(), &mu, 1).unwrap();
        assert!((i - 2.0 * PI / 3.0).abs() < 1e-12 * i, "{i}");

        let zero = Potential::Radial(RadialPotential::from_values_unchecked(
            1,
            1.0,
            vec![0.0; LEN],
        ));
        assert_eq!(twisted_im(&zero, &mu, 1).unwrap(), 0.0);
    }

    #[test]
    fn rayleigh_examples() {
        let mu = beta_disc();
        let u = cup();
        let lam = rayleigh_lambda(&u, &mu, 1, 1e-9).unwrap();
        assert!((lam - 1.5).abs() < 1e-10, "{lam}");
        // scale invariance
        let lam2 = rayleigh_lambda(&u.scaled(0.25), &mu, 1, 1e-9).unwrap();
        assert!((lam - lam2).abs() < 1e-12);
        // variational upper bound vs the Bessel value j₀₁²/4
        assert!(lam >= 1.4457);

        let zero = Potential::Radial(RadialPotential::from_values_unchecked(
            1,
            1.0,
            vec![0.0; LEN],
        ));
        assert!(matches!(
            rayleigh_lambda(&zero, &mu, 1, 1e-9),
            Err(Error::ZeroTwist)
        ));
    }

    #[test]
    fn phi_examples() {
        let mu = beta_disc();
        let u = cup();
        let e = energy_em(&u, 1, 1e-9).unwrap();
        assert_eq!(phi_functional(&u, &mu, 1, 0.0, 1e-9).unwrap(), e);
        let lam = rayleigh_lambda(&u, &mu, 1, 1e-9).unwrap();
        let phi = phi_functional(&u, &mu, 1, lam, 1e-9).unwrap();
        assert!(phi.abs() < 1e-12 * e);
        // λ below the quotient keeps Φ ≥ 0 on this sample
        assert!(phi_functional(&u, &mu, 1, 1.2, 1e-9).unwrap() > 0.0);
    }

    #[test]
    fn family_closed_forms_match_quadrature() {
        let m = 2;
        let cases: [(RhsFamily, RhsFamily); 2] = [
            (
                RhsFamily::AffineM { lambda: 0.7 },
                RhsFamily::Custom {
                    g: Box::new(|t: f64| (1.0 - 0.7 * t) * (1.0 - 0.7 * t)),
                },
            ),
            (
                RhsFamily::AffineK {
                    a: 1.5,
                    lambda: 0.9,
                    k: 1,
                },
                RhsFamily::Custom {
                    g: Box::new(|t: f64| 1.5 - 0.9 * t),
                },
            ),
        ];
        for (family, custom) in cases {
            for t in [-0.1, -1.0, -4.0] {
                let closed = family.h(t, m).unwrap();
                let quad = custom.h(t, m).unwrap();
                assert!(
                    (closed - quad).abs() < 1e-9 * (1.0 + closed.abs()),
                    "{family:?} t={t}: {closed} vs {quad}"
                );
            }
            assert_eq!(family.h(0.0, m).unwrap(), 0.0);
        }
    }

    #[test]
    fn affine_k_validation() {
        assert!(RhsFamily::AffineK {
            a: 1.0,
            lambda: 1.0,
            k: 2
        }
        .validate(2)
        .is_err());
        assert!(RhsFamily::AffineK {
            a: 1.0,
            lambda: 1.0,
            k: 1
        }
        .validate(2)
        .is_ok());
        assert!(RhsFamily::AffineM { lambda: -0.1 }.validate(1).is_err());
    }

    #[test]
    fn semilinear_functional_examples() {
        let mu = beta_disc();
        let u = cup();
        let e = energy_em(&u, 1, 1e-9).unwrap();

        let zero_g = RhsFamily::Custom {
            g: Box::new(|_| 0.0),
        };
        let phi = semilinear_functional(&u, &zero_g, &mu, 1, 1e-9).unwrap();
        assert!((phi - e).abs() < 1e-12 * e);

        // coercivity witness for λ < λ₁: Φ_G(cu) grows without bound in c
        let fam = RhsFamily::AffineM { lambda: 0.5 };
        let mut last = f64::NEG_INFINITY;
        for c in [1.0, 2.0, 4.0, 8.0, 16.0] {
            let v = semilinear_functional(&u.scaled(c), &fam, &mu, 1, 1e-9).unwrap();
            if c >= 4.0 {
                assert!(v > last, "c={c}: {v} <= {last}");
            }
            last = v;
        }
        assert!(last > 0.0);

        let neg_g = RhsFamily::Custom { g: Box::new(|t| t) };
        assert!(semilinear_functional(&u, &neg_g, &mu, 1, 1e-9).is_err());
    }

    #[test]
    fn gradient_examples() {
        let u = cup();
        let grad = energy_gradient(&u, 1, 1e-9).unwrap();
        assert!(grad.iter().all(|d| (d - 1.0).abs() < 1e-9));

        // directional derivative against central differences: O(eps²) trend.
        // E_m is degree m+1 in u, so the third variation only bites for m ≥ 2.
        let m = 2;
        let u2 =
            Potential::Radial(RadialPotential::from_profile(2, 1.0, LEN, |r| r - 1.0).unwrap());
        let psi = RadialPotential::from_profile(2, 1.0, LEN, |r| 0.5 * (r * r - 1.0)).unwrap();
        let grad2 = energy_gradient(&u2, m, 1e-9).unwrap();
        let beta = u2.beta_measure();
        let integrand: Vec<f64> = psi
            .values()
            .iter()
            .zip(&grad2)
            .map(|(p, d)| -p * d)
            .collect();
        let exact = beta.integrate(&integrand).unwrap();
        let mut errs = vec![];
        for eps in [0.05, 0.025] {
            let up = mix(&u2, &psi, eps);
            let dn = mix(&u2, &psi, -eps);
            let fd =
                (energy_em(&up, m, 1e-9).unwrap() - energy_em(&dn, m, 1e-9).unwrap()) / (2.0 * eps);
            errs.push((fd - exact).abs());
        }
        assert!(errs[0] / errs[1] > 3.5, "O(eps^2) trend: {errs:?}");
    }

    fn mix(u: &Potential, psi: &RadialPotential, eps: f64) -> Potential {
        let Potential::Radial(v) = u else {
            unreachable!()
        };
        let vals: Vec<f64> = v
            .values()
            .iter()
            .zip(psi.values())
            .map(|(a, b)| a + eps * b)
            .collect();
        Potential::Radial(RadialPotential::from_values_unchecked(
            v.n(),
            v.rho_max(),
            vals,
        ))
    }

    #[test]
    fn energy_monotone_and_convex() {
        let u = cup(); // u ≤ u/2 ≤ 0
        let v = u.scaled(0.5);
        let eu = energy_em(&u, 1, 1e-9).unwrap();
        let ev = energy_em(&v, 1, 1e-9).unwrap();
        assert!(ev <= eu * (1.0 + 1e-3));

        // midpoint inequality along the affine path between admissible profiles
        let w = Potential::Radial(
            RadialPotential::from_profile(1, 1.0, LEN, |r| 0.7 * (r * r - 1.0)).unwrap(),
        );
        let Potential::Radial(ur) = &u else {
            unreachable!()
        };
        let Potential::Radial(wr) = &w else {
            unreachable!()
        };
        let mid = Potential::Radial(RadialPotential::from_values_unchecked(
            1,
            1.0,
            ur.values()
                .iter()
                .zip(wr.values())
                .map(|(a, b)| 0.5 * (a + b))
                .collect(),
        ));
        let emid = energy_em(&mid, 1, 1e-9).unwrap();
        let ew = energy_em(&w, 1, 1e-9).unwrap();
        assert!(emid <= 0.5 * (eu + ew) + 1e-10);
    }

    #[test]
    fn report_round_trip() {
        let mu = beta_disc();
        let rep = functional_report(&cup(), &mu, 1, 1e-9).unwrap();
        assert!((rep.lambda_hat - 1.5).abs() < 1e-10);
        assert!(rep.phi.abs() < 1e-12);
        let row = rep.to_csv_row();
        assert_eq!(row.split(',').count(), 4);
    }
}
