//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//!
//! Quantitative targets are checked against independent oracles (Bessel-zero
//! root finding, closed-form integrals, classical condenser capacity) or as
//! property/self-consistency gates. Run with `cargo test --test acceptance`
//! (add `-- --nocapture` to see the per-criterion lines on success).

use std::sync::Arc;
use std::time::Instant;

use hesseig_core::envelope::{capacity_cm, extremal_function, Condenser, EnvelopeParams};
use hesseig_core::fields::{
    DensityMeasure, Domain, Grid, GridPotential, Potential, RadialPotential, PI,
};
use hesseig_core::functionals::{energy_em, rayleigh_lambda, twisted_im, RhsFamily};
use hesseig_core::hessian::{radial_flux_sigma, radial_hessian_density};
use hesseig_core::rng::Rng;
use hesseig_core::solvers::{
    compute_exponents, dirichlet_solve_grid, dirichlet_solve_radial, eigen_inverse_iteration_grid,
    eigen_inverse_iteration_radial, solve_semilinear_radial, GridSolveParams,
};
use hesseig_core::verify::{
    random_admissible_radial, random_smooth_radial, run_blocki_corpus, run_sobolev_corpus,
};
use hesseig_core::Error;

fn report(id: &str, pass: bool, detail: &str) {
    println!("[{id}] {} — {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "[{id}] {detail}");
}

/// J₀ power series; adequate on [0, 4].
fn bessel_j0(x: f64) -> f64 {
    let q = x * x / 4.0;
    let (mut term, mut sum) = (1.0, 1.0);
    for k in 1..60 {
        term *= -q / ((k * k) as f64);
        sum += term;
    }
    sum
}

/// λ₁ of the unit disc for m = 1, μ = β: j₀₁²/4 by bisection on the series.
fn bessel_lambda_oracle() -> f64 {
    let (mut lo, mut hi) = (2.0f64, 3.0f64);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if bessel_j0(lo) * bessel_j0(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let j = 0.5 * (lo + hi);
    j * j / 4.0
}

#[test]
fn ac01_laplacian_limit() {
    let t0 = Instant::now();
    let grid = Grid::new(Domain::ball(1, 1.0).unwrap(), 129).unwrap();
    let mu = DensityMeasure::on_grid(Arc::clone(&grid), |_| 1.0).unwrap();
    let res = eigen_inverse_iteration_grid(
        &mu,
        1,
        None,
        1e-6,
        100,
        GridSolveParams {
            tol: 1e-8,
            ..Default::default()
        },
        None,
    )
    .unwrap();
    let wall = t0.elapsed().as_secs_f64();
    let oracle = bessel_lambda_oracle();
    let rel = (res.lambda - oracle).abs() / oracle;
    report(
        "AC01",
        res.converged && rel < 0.01 && wall <= 60.0,
        &format!(
            "129² disc inverse iteration: lambda {:.6} vs Bessel {:.6} (rel {rel:.2e}), {wall:.1}s",
            res.lambda, oracle
        ),
    );
}

#[test]
fn ac02_quadratic_exactness() {
    let mut worst_density = 0.0f64;
    let mut worst_solve = 0.0f64;
    for n in 1..=4usize {
        for m in 1..=n {
            let v = RadialPotential::from_profile(n, 1.0, 101, |r| r - 1.0).unwrap();
            let d = radial_hessian_density(&v, m).unwrap();
            for di in &d {
                worst_density = worst_density.max((di - 1.0).abs());
            }
            let sol = dirichlet_solve_radial(&vec![1.0; 101], m, n, 1.0).unwrap();
            for (i, vi) in sol.values().iter().enumerate() {
                worst_solve = worst_solve.max((vi - (i as f64 / 100.0 - 1.0)).abs());
            }
        }
    }
    report(
        "AC02",
        worst_density < 1e-10 && worst_solve < 1e-10,
        &format!(
            "u=|z|²−1 for all m ≤ n ≤ 4: density error {worst_density:.2e}, solve error {worst_solve:.2e}"
        ),
    );
}

#[test]
fn ac03_flux_oracle_gate() {
    // the flux form earns oracle status only by agreeing with the per-point
    // eigenvalue σ_m in weighted L¹ on refined grids
    let mut rng = Rng::new(2024);
    let len = 20001;
    let mut worst = 0.0f64;
    let mut samples = 0;
    for _ in 0..100 {
        let n = 1 + rng.next_usize(4);
        let v = random_smooth_radial(&mut rng, n, 1.0, len);
        let weights = hesseig_core::fields::beta_weights(&hesseig_core::fields::Carrier::Radial {
            n,
            rho_max: 1.0,
            len,
        })
        .unwrap();
        for m in 1..=n {
            let eig = radial_hessian_density(&v, m).unwrap();
            let norm = 1.0 / binomial(n, m);
            let flux = radial_flux_sigma(&v, m).unwrap();
            let num: f64 = eig
                .iter()
                .zip(&flux)
                .zip(&weights)
                .map(|((e, s), w)| (e - norm * s).abs() * w)
                .sum();
            let den: f64 = eig.iter().zip(&weights).map(|(e, w)| e.abs() * w).sum();
            worst = worst.max(num / den);
            samples += 1;
        }
    }
    report(
        "AC03",
        worst < 1e-6,
        &format!("{samples} (profile, m, n ≤ 4) cases: worst weighted-L¹ disagreement {worst:.2e}"),
    );
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

#[test]
fn ac04_eigenpair_certificate() {
    let t0 = Instant::now();
    let len = 4001;
    let mu = DensityMeasure::on_radial(2, 1.0, len, |_| 1.0).unwrap();
    let res = eigen_inverse_iteration_radial(&mu, 2, None, 5e-7, 300, None).unwrap();
    let lambda_agree = (res.lambda - res.lambda_normalization).abs() <= 1e-6 * res.lambda.abs();

    // 50 random admissible perturbations: Rayleigh quotient stays above λᵐ
    let Potential::Radial(eigen) = &res.eigenfunction else {
        unreachable!()
    };
    let mut rng = Rng::new(404);
    let mut bound_ok = true;
    let mut min_quotient = f64::INFINITY;
    for _ in 0..50 {
        let w = random_admissible_radial(&mut rng, 2, 1.0, len);
        let t = rng.range(0.1, 0.9);
        let mixed: Vec<f64> = eigen
            .values()
            .iter()
            .zip(w.values())
            .map(|(a, b)| (1.0 - t) * a + t * b)
            .collect();
        let u = Potential::Radial(RadialPotential::new(2, 1.0, mixed).unwrap());
        let lam = rayleigh_lambda(&u, &mu, 2, 1e-6).unwrap();
        min_quotient = min_quotient.min(lam.powi(2));
        if lam.powi(2) < res.lambda.powi(2) * (1.0 - 1e-8) {
            bound_ok = false;
        }
    }
    // the full Rayleigh history also sits above the converged value
    let history_ok = res
        .rayleigh_history
        .iter()
        .all(|l| l.powi(2) >= res.lambda.powi(2) * (1.0 - 1e-9));
    let wall = t0.elapsed().as_secs_f64();
    report(
        "AC04",
        res.converged
            && res.residual_l1 <= 1e-6
            && lambda_agree
            && bound_ok
            && history_ok
            && wall <= 30.0,
        &format!(
            "n=2 m=2 ball: residual {:.2e}, |λ_ray−λ_norm|/λ {:.2e}, min perturbed quotient {:.4} ≥ λ² {:.4}, {wall:.1}s",
            res.residual_l1,
            (res.lambda - res.lambda_normalization).abs() / res.lambda,
            min_quotient,
            res.lambda.powi(2)
        ),
    );
}

#[test]
fn ac05_dilation_law() {
    let mut worst = 0.0f64;
    let mut monotone = true;
    for (m, n) in [(1usize, 1usize), (1, 2), (2, 2), (2, 3)] {
        let lam = |radius: f64| {
            let mu = DensityMeasure::on_radial(n, radius * radius, 2001, |_| 1.0).unwrap();
            let r = eigen_inverse_iteration_radial(&mu, m, None, 1e-6, 300, None).unwrap();
            assert!(r.converged, "(m,n)=({m},{n}) R={radius}");
            r.lambda
        };
        let l_half = lam(0.5);
        let l_one = lam(1.0);
        let l_two = lam(2.0);
        for (ls, s) in [(l_half, 0.5f64), (l_two, 2.0)] {
            let target = l_one / (s * s);
            worst = worst.max((ls - target).abs() / target);
        }
        // domain monotonicity: λ non-increasing in the radius
        if !(l_half >= l_one && l_one >= l_two) {
            monotone = false;
        }
    }
    report(
        "AC05",
        worst < 0.005 && monotone,
        &format!(
            "λ(B_s)·s² vs λ(B₁) over 4 (m,n) pairs: worst rel {worst:.2e}, monotone {monotone}"
        ),
    );
}

#[test]
fn ac06_condenser_capacity() {
    let r: f64 = (-1.0f64).exp(); // K = closed ball of radius 1/e
    let rho0 = r * r;
    let len = 4001;
    let cond = Condenser::RadialBall {
        n: 1,
        rho_inner: rho0,
        rho_outer: 1.0,
        len,
    };
    let params = EnvelopeParams {
        tol: 1e-10,
        max_sweeps: 200_000,
    };
    let cap = capacity_cm(&cond, 1, params).unwrap();
    let mass_ok = (cap.mass_version - 2.0 * PI).abs() < 0.03 * 2.0 * PI;

    // envelope vs the logarithmic closed form, at the true ρ₀ = e⁻²
    let h = extremal_function(&cond, 1, params).unwrap();
    let Potential::Radial(v) = &h else {
        unreachable!()
    };
    let mut sup = 0.0f64;
    for (i, vi) in v.values().iter().enumerate() {
        let rho = i as f64 / (len - 1) as f64;
        let closed = if rho <= rho0 {
            -1.0
        } else {
            ((rho / 1.0).ln() / (1.0f64 / rho0).ln()).max(-1.0)
        };
        sup = sup.max((vi - closed).abs());
    }

    // factor audit: E_m(h_K)/mass must be stable across resolutions
    // (empirically the ratio is 1/(m+1))
    let cap_coarse = capacity_cm(
        &Condenser::RadialBall {
            n: 1,
            rho_inner: rho0,
            rho_outer: 1.0,
            len: 2001,
        },
        1,
        params,
    )
    .unwrap();
    let ratio_stable = (cap.ratio - cap_coarse.ratio).abs() <= 0.01 * cap.ratio.abs();
    report(
        "AC06",
        mass_ok && sup < 1e-3 && ratio_stable,
        &format!(
            "mass {:.5} vs 2π {:.5}, envelope sup-error {sup:.2e}, E/mass ratio {:.5} (coarse {:.5})",
            cap.mass_version,
            2.0 * PI,
            cap.ratio,
            cap_coarse.ratio
        ),
    );
}

#[test]
fn ac07_blocki_and_sobolev_audits() {
    // closed-form spot values on the unit disc
    let u = Potential::Radial(RadialPotential::from_profile(1, 1.0, 1601, |r| r - 1.0).unwrap());
    let mu = DensityMeasure::on_radial(1, 1.0, 1601, |_| 1.0).unwrap();
    let row = hesseig_core::verify::check_blocki(&u, &u, 1).unwrap();
    let spot_lhs = (row.lhs - 4.0 * PI / 3.0).abs() < 0.02 * (4.0 * PI / 3.0);
    let spot_rhs = (row.rhs - 4.0 * PI).abs() < 0.02 * (4.0 * PI);
    let sob = hesseig_core::verify::check_sobolev_poincare(&u, &mu, 1).unwrap();
    let spot_ratio = (sob.ratio - 4.0 / 3.0).abs() < 0.02 * (4.0 / 3.0);

    // seeded 100-sample corpora, zero violations
    let mut violations = 0usize;
    let mut total = 0usize;
    for (n, m) in [(1usize, 1usize), (2, 2)] {
        let rep = run_blocki_corpus(n, m, 100, 7, 801).unwrap();
        total += rep.samples;
        if !rep.pass {
            violations += 1;
        }
        let srep = run_sobolev_corpus(n, m, 100, 7, 801).unwrap();
        total += srep.report.samples;
        if !srep.report.pass {
            violations += 1;
        }
    }
    report(
        "AC07",
        spot_lhs && spot_rhs && spot_ratio && violations == 0,
        &format!(
            "spots: Błocki {:.4}/{:.4} (4π/3, 4π), Sobolev ratio {:.4} (4/3); {total} corpus samples, {violations} violating corpora",
            row.lhs, row.rhs, sob.ratio
        ),
    );
}

#[test]
fn ac08_exponent_formulas() {
    let rec = compute_exponents(2, 3, 4.0, 1.0).unwrap();
    let p_star_exact = rec.p_star == 3.0;

    // 20-case Hölder truth table against an independent evaluation
    let cases = [
        (1usize, 1usize, 1.5f64),
        (1, 1, 5.0),
        (2, 2, 1.2),
        (3, 3, 2.0),
        (1, 2, 2.0),
        (1, 2, 5.3),
        (1, 2, 20.0),
        (2, 3, 2.9),
        (2, 3, 3.0001),
        (2, 3, 10.0),
        (1, 3, 2.0),
        (1, 3, 100.0),
        (2, 4, 3.0),
        (2, 4, 8.0),
        (3, 4, 2.0),
        (3, 4, 4.0),
        (2, 5, 4.0),
        (3, 5, 3.5),
        (4, 5, 2.5),
        (4, 4, 1.01),
    ];
    let mut table_ok = true;
    let mut tau_k_ok = true;
    for (m, n, p) in cases {
        let rec = compute_exponents(m, n, p, 0.5 * p).unwrap();
        // independent evaluation straight from the formulas
        let expected = if m == n {
            p > 1.0 // p* → 1 in the limit case
        } else {
            let mf = m as f64;
            let nf = n as f64;
            let ell = (mf + 1.0) / (nf - mf);
            if 2.0 * mf > nf - 1.0 {
                let delta = ell * ell * (nf - mf) * (nf - mf) + 4.0 * ell * mf * nf;
                p > (ell * (nf + mf) + delta.sqrt()) / (2.0 * mf * (ell - 1.0))
            } else {
                false
            }
        };
        if rec.holder_condition != expected {
            table_ok = false;
        }
        let r = 0.5 * p;
        if (rec.tau_at_r - m as f64 * r * p / (p - r)).abs() > 1e-14 * rec.tau_at_r.abs() {
            tau_k_ok = false;
        }
        if m < n {
            let k = n as f64 * (p - 1.0) / (p * (n - m) as f64);
            if (rec.k_exp - k).abs() > 1e-14 * k.abs() {
                tau_k_ok = false;
            }
        } else if !rec.k_exp.is_infinite() {
            tau_k_ok = false;
        }
    }
    report(
        "AC08",
        p_star_exact && table_ok && tau_k_ok,
        &format!(
            "p*(2,3) = {} (exact 3), 20-case Hölder table consistent: {table_ok}, τ/k machine-exact: {tau_k_ok}",
            rec.p_star
        ),
    );
}

#[test]
fn ac09_semilinear() {
    let len = 2001;
    let mu = DensityMeasure::on_radial(2, 1.0, len, |_| 1.0).unwrap();
    let lam1 = eigen_inverse_iteration_radial(&mu, 2, None, 1e-7, 300, None)
        .unwrap()
        .lambda;

    // λ = 0 reproduces the plain Dirichlet solution
    let (u0, d0) = solve_semilinear_radial(
        &RhsFamily::AffineM { lambda: 0.0 },
        &mu,
        2,
        lam1,
        1e-10,
        100,
        None,
    )
    .unwrap();
    let direct = dirichlet_solve_radial(&vec![1.0; len], 2, 2, 1.0).unwrap();
    let Potential::Radial(v0) = &u0 else {
        unreachable!()
    };
    let sup0 = v0
        .values()
        .iter()
        .zip(direct.values())
        .fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()));

    // 0 < λ < λ₁ converges with Φ_G non-increasing after burn-in
    let (_, diag) = solve_semilinear_radial(
        &RhsFamily::AffineM { lambda: 0.5 * lam1 },
        &mu,
        2,
        lam1,
        1e-9,
        500,
        None,
    )
    .unwrap();

    // λ > λ₁ is refused by the H2 checker
    let refused = matches!(
        solve_semilinear_radial(
            &RhsFamily::AffineM { lambda: 1.5 * lam1 },
            &mu,
            2,
            lam1,
            1e-9,
            500,
            None,
        ),
        Err(Error::H2Rejected { .. })
    );

    report(
        "AC09",
        d0.converged
            && sup0 < 1e-8
            && diag.converged
            && diag.residual_l1 <= 1e-6
            && diag.phi_monotone_after_burnin
            && refused,
        &format!(
            "λ=0 sup-diff {sup0:.2e}; λ=λ₁/2: residual {:.2e}, Φ monotone {}; λ=1.5λ₁ refused {refused}",
            diag.residual_l1, diag.phi_monotone_after_burnin
        ),
    );
}

#[test]
fn ac10_gradient_check() {
    let len = 1601;
    let mut rng = Rng::new(10);
    let mut worst_ratio = f64::INFINITY;
    let mut pairs = 0;
    for (n, m) in [(2usize, 2usize), (3, 2), (3, 3), (4, 3)] {
        for _ in 0..5 {
            let u = random_smooth_radial(&mut rng, n, 1.0, len);
            let psi = random_smooth_radial(&mut rng, n, 1.0, len).scaled(0.3);
            let up = Potential::Radial(u.clone());
            let grad = hesseig_core::functionals::energy_gradient(&up, m, 1e-8).unwrap();
            let beta = up.beta_measure();
            let integrand: Vec<f64> = psi
                .values()
                .iter()
                .zip(&grad)
                .map(|(p, d)| -p * d)
                .collect();
            let exact = beta.integrate(&integrand).unwrap();
            let e_at = |eps: f64| {
                let vals: Vec<f64> = u
                    .values()
                    .iter()
                    .zip(psi.values())
                    .map(|(a, b)| a + eps * b)
                    .collect();
                let p = Potential::Radial(RadialPotential::new(n, 1.0, vals).unwrap());
                energy_em(&p, m, 1e-8).unwrap()
            };
            let fd = |eps: f64| (e_at(eps) - e_at(-eps)) / (2.0 * eps);
            let e1 = (fd(0.05) - exact).abs();
            let e2 = (fd(0.025) - exact).abs();
            worst_ratio = worst_ratio.min(e1 / e2);
            pairs += 1;
        }
    }
    report(
        "AC10",
        pairs == 20 && worst_ratio >= 3.5,
        &format!("20 seeded (u,ψ) pairs: worst halving ratio {worst_ratio:.2} (O(ε²) needs ≥ 3.5)"),
    );
}

#[test]
fn ac11_grid_radial_cross_validation() {
    // (a) n=2, m=2, f ≡ 1 at 13⁴: grid solution vs |z|²−1
    let grid = Grid::new(Domain::ball(2, 1.0).unwrap(), 13).unwrap();
    let f = vec![1.0; grid.total_nodes()];
    let params = GridSolveParams {
        tol: 1e-10,
        ..Default::default()
    };
    let (u, info) = dirichlet_solve_grid(&grid, &f, 2, &params, None).unwrap();
    let sup_m2 = grid.interior_nodes().fold(0.0f64, |acc, i| {
        acc.max((u.values()[i] - (grid.rho(i) - 1.0)).abs())
    });

    // (b) n=2, m=1, f = radial ρ lifted to the grid, vs the lifted radial solve
    let grid17 = Grid::new(Domain::ball(2, 1.0).unwrap(), 17).unwrap();
    let f17: Vec<f64> = (0..grid17.total_nodes()).map(|i| grid17.rho(i)).collect();
    let (u17, info17) = dirichlet_solve_grid(&grid17, &f17, 1, &params, None).unwrap();
    let radial_len = 2001;
    let fr: Vec<f64> = (0..radial_len)
        .map(|i| i as f64 / (radial_len - 1) as f64)
        .collect();
    let vr = dirichlet_solve_radial(&fr, 1, 2, 1.0).unwrap();
    let lift = GridPotential::from_radial(Arc::clone(&grid17), &vr);
    let scale = vr.values().iter().fold(0.0f64, |a, b| a.max(b.abs()));
    let sup_m1 = grid17.interior_nodes().fold(0.0f64, |acc, i| {
        acc.max((u17.values()[i] - lift.values()[i]).abs())
    }) / scale;

    report(
        "AC11",
        info.converged && info17.converged && sup_m2 < 0.10 && sup_m1 < 0.05,
        &format!(
            "13⁴ m=2 sup-err {sup_m2:.2e} (< 0.10); 17⁴ m=1 rel sup-err {sup_m1:.2e} (< 0.05)"
        ),
    );
}

#[test]
fn acceptance_invariants_report() {
    // cross-criterion invariants exercised on one converged radial eigenpair:
    // I_m(u) = 1, λ from E_m since λᵐ·I_m = E_m, eigenfunction admissible
    let mu = DensityMeasure::on_radial(2, 1.0, 2001, |_| 1.0).unwrap();
    let res = eigen_inverse_iteration_radial(&mu, 2, None, 5e-7, 300, None).unwrap();
    let i_m = twisted_im(&res.eigenfunction, &mu, 2).unwrap();
    let e_m = energy_em(&res.eigenfunction, 2, 1e-6).unwrap();
    let lambda_consistent = ((e_m / i_m).sqrt() - res.lambda).abs() < 1e-6 * res.lambda;
    let normalized = (i_m - 1.0).abs() < 1e-10;
    report(
        "AC-INV",
        res.converged && lambda_consistent && normalized,
        &format!(
            "I_m = {i_m:.12}, (E/I)^(1/m) = {:.8} vs λ = {:.8}",
            (e_m / i_m).sqrt(),
            res.lambda
        ),
    );
}

#[test]
fn invariant_grid_refinement_trend() {
    // halving h on the m=1 disc eigenvalue problem shrinks the error against
    // the Bessel oracle by a factor ≥ 3
    let oracle = bessel_lambda_oracle();
    let lam_err = |points: usize| {
        let grid = Grid::new(Domain::ball(1, 1.0).unwrap(), points).unwrap();
        let mu = DensityMeasure::on_grid(Arc::clone(&grid), |_| 1.0).unwrap();
        let res = eigen_inverse_iteration_grid(
            &mu,
            1,
            None,
            1e-7,
            100,
            GridSolveParams {
                tol: 1e-9,
                ..Default::default()
            },
            None,
        )
        .unwrap();
        assert!(res.converged);
        (res.lambda - oracle).abs()
    };
    let coarse = lam_err(65);
    let fine = lam_err(129);
    report(
        "AC-TREND",
        coarse / fine >= 3.0,
        &format!(
            "lambda error 65² {coarse:.3e} vs 129² {fine:.3e}: ratio {:.2}",
            coarse / fine
        ),
    );
}
