//! Command implementations: build the carrier and measure from the config,
//! drive the core solvers, and emit run logs, snapshots and summaries.

use std::fs;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use hesseig_core::envelope::{
    capacity_cm, envelope_pm_grid, envelope_pm_radial, extremal_function, Condenser, EnvelopeParams,
};
use hesseig_core::fields::{Carrier, DensityMeasure, Domain, Grid, Potential};
use hesseig_core::functionals::{functional_report, RhsFamily};
use hesseig_core::solvers::{
    check_h_hypotheses, compute_exponents, dirichlet_solve_grid, dirichlet_solve_radial,
    eigen_inverse_iteration_grid, eigen_inverse_iteration_radial, eigen_rayleigh_descent_grid,
    eigen_rayleigh_descent_radial, solve_semilinear_grid, solve_semilinear_radial, EigenResult,
    GridSolveParams, IterStat,
};
use hesseig_core::verify::{
    check_capacity_energy, check_monotonicity_lambda, diffuseness_integrals,
    random_admissible_radial, run_blocki_corpus, run_sobolev_corpus, DiffusenessProfile, Verdict,
};
use hesseig_core::Error as CoreError;

use crate::config::{
    CarrierKind, Command, CondenserSpec, EigMethod, FamilySpec, MeasureSpec, RunConfig,
};
use crate::report::{write_check_csv, RunLog, Summary};
use crate::snapshot::{self, SnapshotKind};

const CONE_TOL: f64 = 1e-6;

#[derive(Debug)]
pub enum RunOutcome {
    Converged,
    NotConverged(String),
}

#[derive(Debug)]
pub enum RunError {
    /// user/config problem → exit 1
    Input(String),
    /// mathematical non-convergence or refusal → exit 2
    Math(String),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Input(m) | RunError::Math(m) => write!(f, "{m}"),
        }
    }
}

fn classify(e: CoreError) -> RunError {
    match e {
        CoreError::Diverged { .. }
        | CoreError::SweepBudget { .. }
        | CoreError::EnvelopeDiverged { .. }
        | CoreError::StepRejected { .. }
        | CoreError::H2Rejected { .. }
        | CoreError::ConeViolation(_)
        | CoreError::NotMSubharmonic { .. }
        | CoreError::ZeroTwist => RunError::Math(e.to_string()),
        other => RunError::Input(other.to_string()),
    }
}

fn io_err(e: std::io::Error) -> RunError {
    RunError::Input(format!("io: {e}"))
}

/// Execute a command; artifacts land in cfg.out_dir.
pub fn run(
    command: Command,
    check_name: Option<&str>,
    cfg: &RunConfig,
) -> Result<RunOutcome, RunError> {
    if let Some(declared) = cfg.command {
        if declared != command {
            return Err(RunError::Input(format!(
                "config declares command = {}, but '{}' was invoked",
                declared.name(),
                command.name()
            )));
        }
    }
    fs::create_dir_all(&cfg.out_dir).map_err(io_err)?;
    match command {
        Command::Eig => run_eig(cfg),
        Command::Dirichlet => run_dirichlet(cfg),
        Command::Semilinear => run_semilinear(cfg),
        Command::Capacity => run_capacity(cfg),
        Command::Envelope => run_envelope(cfg),
        Command::Exponents => run_exponents(cfg),
        Command::Check => run_check(check_name, cfg),
    }
}

fn build_grid(cfg: &RunConfig) -> Result<Arc<Grid>, RunError> {
    let domain = if cfg.box_domain {
        Domain::box_extents(cfg.n, cfg.extents.clone())
    } else {
        Domain::ball(cfg.n, cfg.radius)
    }
    .map_err(classify)?;
    Grid::new(domain, cfg.resolution).map_err(classify)
}

fn carrier(cfg: &RunConfig) -> Result<Carrier, RunError> {
    Ok(match cfg.carrier {
        CarrierKind::Radial => Carrier::Radial {
            n: cfg.n,
            rho_max: cfg.radius * cfg.radius,
            len: cfg.resolution,
        },
        CarrierKind::Grid => Carrier::Grid(build_grid(cfg)?),
    })
}

/// Density samples of the measure spec on a carrier (g relative to βⁿ).
fn density_samples(cfg: &RunConfig, carrier: &Carrier) -> Result<Vec<f64>, RunError> {
    match &cfg.measure {
        MeasureSpec::BetaN => Ok(vec![1.0; carrier.node_count()]),
        MeasureSpec::Power(alpha) => Ok(match carrier {
            Carrier::Radial { rho_max, len, .. } => {
                let dr = rho_max / (*len as f64 - 1.0);
                (0..*len).map(|i| (i as f64 * dr).powf(*alpha)).collect()
            }
            Carrier::Grid(grid) => (0..grid.total_nodes())
                .map(|i| grid.rho(i).powf(*alpha))
                .collect(),
        }),
        MeasureSpec::File(path) => {
            let snap = snapshot::load(path).map_err(|e| RunError::Input(e.to_string()))?;
            if !snap.carrier.matches(carrier) {
                return Err(RunError::Input(format!(
                    "measure file {} does not match the configured carrier",
                    path.display()
                )));
            }
            Ok(snap.values)
        }
    }
}

fn build_measure(cfg: &RunConfig) -> Result<DensityMeasure, RunError> {
    let carrier = carrier(cfg)?;
    let density = density_samples(cfg, &carrier)?;
    DensityMeasure::from_samples(carrier, density).map_err(classify)
}

fn grid_params(cfg: &RunConfig) -> GridSolveParams {
    GridSolveParams {
        tol: (cfg.tol * 0.1).max(1e-13),
        max_sweeps: 200_000,
        ..Default::default()
    }
}

fn save_potential(dir: &Path, name: &str, u: &Potential) -> Result<(), RunError> {
    snapshot::save(
        &dir.join(name),
        SnapshotKind::Potential,
        &u.carrier(),
        u.values(),
    )
    .map_err(io_err)
}

fn eig_summary(
    cfg: &RunConfig,
    res: &EigenResult,
    mu: &DensityMeasure,
    total_wall: f64,
) -> Summary {
    let mut s = Summary::new("eig");
    s.push(
        "carrier",
        match cfg.carrier {
            CarrierKind::Radial => "radial",
            CarrierKind::Grid => "grid",
        },
    );
    s.push("n", cfg.n.to_string());
    s.push("m", cfg.m.to_string());
    s.push("resolution", cfg.resolution.to_string());
    s.push_f64("lambda", res.lambda);
    s.push_f64("lambda_normalization", res.lambda_normalization);
    s.push_f64("residual_l1", res.residual_l1);
    s.push("iterations", res.iterations.to_string());
    s.push("converged", res.converged.to_string());
    if let Ok(rep) = functional_report(&res.eigenfunction, mu, cfg.m, CONE_TOL) {
        s.push_f64("e_m", rep.e_m);
        s.push_f64("i_m", rep.i_m);
        s.push_f64("rayleigh_lambda", rep.lambda_hat);
    }
    s.push_f64("wall_s", total_wall);
    s
}

fn run_eig(cfg: &RunConfig) -> Result<RunOutcome, RunError> {
    let mu = build_measure(cfg)?;
    let mut log = RunLog::new();
    let t0 = Instant::now();
    let mut obs = |st: IterStat| {
        log.push(
            st.iter,
            st.lambda,
            st.residual,
            st.functional,
            t0.elapsed().as_secs_f64(),
        );
    };
    let res = match (cfg.carrier, cfg.method) {
        (CarrierKind::Radial, EigMethod::Inverse) => {
            eigen_inverse_iteration_radial(&mu, cfg.m, None, cfg.tol, cfg.max_iter, Some(&mut obs))
        }
        (CarrierKind::Radial, EigMethod::Descent) => eigen_rayleigh_descent_radial(
            &mu,
            cfg.m,
            None,
            cfg.max_iter,
            cfg.step_size,
            Some(&mut obs),
        ),
        (CarrierKind::Grid, EigMethod::Inverse) => eigen_inverse_iteration_grid(
            &mu,
            cfg.m,
            None,
            cfg.tol,
            cfg.max_iter,
            grid_params(cfg),
            Some(&mut obs),
        ),
        (CarrierKind::Grid, EigMethod::Descent) => eigen_rayleigh_descent_grid(
            &mu,
            cfg.m,
            None,
            cfg.max_iter,
            cfg.step_size,
            grid_params(cfg),
            Some(&mut obs),
        ),
    }
    .map_err(classify)?;
    let wall = t0.elapsed().as_secs_f64();

    log.write(&cfg.out_dir, "eig", cfg.seed, wall)
        .map_err(io_err)?;
    save_potential(&cfg.out_dir, "eigenfunction.snap", &res.eigenfunction)?;
    eig_summary(cfg, &res, &mu, wall)
        .write(&cfg.out_dir)
        .map_err(io_err)?;
    if res.converged {
        Ok(RunOutcome::Converged)
    } else {
        Ok(RunOutcome::NotConverged(format!(
            "lambda estimate {} after {} iterations, residual {:.3e}",
            res.lambda, res.iterations, res.residual_l1
        )))
    }
}

fn run_dirichlet(cfg: &RunConfig) -> Result<RunOutcome, RunError> {
    let carrier = carrier(cfg)?;
    let f = density_samples(cfg, &carrier)?;
    let mut log = RunLog::new();
    let t0 = Instant::now();
    let (u, residual, converged) = match &carrier {
        Carrier::Radial { n, rho_max, .. } => {
            let v = dirichlet_solve_radial(&f, cfg.m, *n, *rho_max).map_err(classify)?;
            let u = Potential::Radial(v);
            let beta = DensityMeasure::beta(&carrier).map_err(classify)?;
            let dens = hesseig_core::hessian::hessian_density(&u, cfg.m).map_err(classify)?;
            let w = beta.weights();
            let num: f64 = dens
                .iter()
                .zip(&f)
                .zip(w)
                .map(|((d, fi), wi)| (d - fi).abs() * wi)
                .sum();
            let den: f64 = f.iter().zip(w).map(|(fi, wi)| fi.abs() * wi).sum();
            let residual = if den > 0.0 { num / den } else { num };
            (u, residual, true)
        }
        Carrier::Grid(grid) => {
            let mut obs = |st: IterStat| {
                log.push(
                    st.iter,
                    st.lambda,
                    st.residual,
                    st.functional,
                    t0.elapsed().as_secs_f64(),
                );
            };
            let params = GridSolveParams {
                tol: cfg.tol,
                max_sweeps: cfg.max_iter.max(1000) * 100,
                ..Default::default()
            };
            let (u, info) =
                dirichlet_solve_grid(grid, &f, cfg.m, &params, Some(&mut obs)).map_err(classify)?;
            (Potential::Grid(u), info.residual_l1, info.converged)
        }
    };
    let wall = t0.elapsed().as_secs_f64();
    log.write(&cfg.out_dir, "dirichlet", cfg.seed, wall)
        .map_err(io_err)?;
    save_potential(&cfg.out_dir, "solution.snap", &u)?;

    let mut s = Summary::new("dirichlet");
    s.push("n", cfg.n.to_string());
    s.push("m", cfg.m.to_string());
    s.push("resolution", cfg.resolution.to_string());
    s.push_f64("residual_l1", residual);
    s.push("converged", converged.to_string());
    s.push_f64(
        "min_value",
        u.values().iter().fold(0.0f64, |a, b| a.min(*b)),
    );
    s.push_f64("wall_s", wall);
    s.write(&cfg.out_dir).map_err(io_err)?;
    if converged {
        Ok(RunOutcome::Converged)
    } else {
        Ok(RunOutcome::NotConverged(format!("residual {residual:.3e}")))
    }
}

fn lambda1_estimate(cfg: &RunConfig, mu: &DensityMeasure) -> Result<f64, RunError> {
    if let Some(l) = cfg.lambda1_hint {
        return Ok(l);
    }
    let res = match cfg.carrier {
        CarrierKind::Radial => {
            eigen_inverse_iteration_radial(mu, cfg.m, None, 1e-6, 300, None).map_err(classify)?
        }
        CarrierKind::Grid => {
            eigen_inverse_iteration_grid(mu, cfg.m, None, 1e-6, 200, grid_params(cfg), None)
                .map_err(classify)?
        }
    };
    if !res.converged {
        return Err(RunError::Math(format!(
            "lambda_1 estimate did not converge (residual {:.3e}); pass lambda1 = ... explicitly",
            res.residual_l1
        )));
    }
    Ok(res.lambda)
}

fn family_from_spec(spec: &FamilySpec) -> RhsFamily {
    match spec {
        FamilySpec::Eigen { lambda } => RhsFamily::Eigen { lambda: *lambda },
        FamilySpec::AffineM { lambda } => RhsFamily::AffineM { lambda: *lambda },
        FamilySpec::AffineK { a, lambda, k } => RhsFamily::AffineK {
            a: *a,
            lambda: *lambda,
            k: *k,
        },
    }
}

fn run_semilinear(cfg: &RunConfig) -> Result<RunOutcome, RunError> {
    let Some(spec) = &cfg.family else {
        return Err(RunError::Input(
            "semilinear requires a family = ... block".into(),
        ));
    };
    let family = family_from_spec(spec);
    let mu = build_measure(cfg)?;
    let lambda1 = lambda1_estimate(cfg, &mu)?;
    let hrep = check_h_hypotheses(&family, lambda1, cfg.m).map_err(classify)?;

    let mut log = RunLog::new();
    let t0 = Instant::now();
    let mut obs = |st: IterStat| {
        log.push(
            st.iter,
            st.lambda,
            st.residual,
            st.functional,
            t0.elapsed().as_secs_f64(),
        );
    };
    let solved = match cfg.carrier {
        CarrierKind::Radial => solve_semilinear_radial(
            &family,
            &mu,
            cfg.m,
            lambda1,
            cfg.tol,
            cfg.max_iter,
            Some(&mut obs),
        ),
        CarrierKind::Grid => solve_semilinear_grid(
            &family,
            &mu,
            cfg.m,
            lambda1,
            cfg.tol,
            cfg.max_iter,
            grid_params(cfg),
            Some(&mut obs),
        ),
    }
    .map_err(classify)?;
    let (u, diag) = solved;
    let wall = t0.elapsed().as_secs_f64();

    log.write(&cfg.out_dir, "semilinear", cfg.seed, wall)
        .map_err(io_err)?;
    save_potential(&cfg.out_dir, "solution.snap", &u)?;

    let mut s = Summary::new("semilinear");
    s.push("family", format!("{spec:?}"));
    s.push_f64("lambda1_estimate", lambda1);
    s.push_f64("h2_limit", hrep.h2_limit);
    s.push_f64("h2_threshold", hrep.theta);
    s.push_f64("residual_l1", diag.residual_l1);
    s.push_f64("sup_update", diag.sup_update);
    s.push("iterations", diag.iterations.to_string());
    s.push("converged", diag.converged.to_string());
    s.push(
        "phi_monotone_after_burnin",
        diag.phi_monotone_after_burnin.to_string(),
    );
    if let Some(phi) = diag.phi_history.last() {
        s.push_f64("phi_final", *phi);
    }
    s.push_f64(
        "min_value",
        u.values().iter().fold(0.0f64, |a, b| a.min(*b)),
    );
    s.push_f64("wall_s", wall);
    s.write(&cfg.out_dir).map_err(io_err)?;
    if diag.converged {
        Ok(RunOutcome::Converged)
    } else {
        Ok(RunOutcome::NotConverged(format!(
            "sup update {:.3e}",
            diag.sup_update
        )))
    }
}

fn build_condenser(cfg: &RunConfig) -> Result<Condenser, RunError> {
    let Some(spec) = &cfg.condenser else {
        return Err(RunError::Input(
            "capacity/envelope requires condenser_r = ... or condenser_mask = ...".into(),
        ));
    };
    match (cfg.carrier, spec) {
        (CarrierKind::Radial, CondenserSpec::BallInBall { r }) => Ok(Condenser::RadialBall {
            n: cfg.n,
            rho_inner: r * r,
            rho_outer: cfg.radius * cfg.radius,
            len: cfg.resolution,
        }),
        (CarrierKind::Grid, CondenserSpec::BallInBall { r }) => {
            let grid = build_grid(cfg)?;
            let r2 = r * r;
            let k_mask: Vec<bool> = (0..grid.total_nodes())
                .map(|i| grid.is_interior(i) && grid.rho(i) <= r2)
                .collect();
            Ok(Condenser::GridMask { grid, k_mask })
        }
        (CarrierKind::Grid, CondenserSpec::MaskFile(path)) => {
            let grid = build_grid(cfg)?;
            let text = fs::read_to_string(path).map_err(io_err)?;
            let bits: Result<Vec<bool>, RunError> = text
                .split_whitespace()
                .map(|t| match t {
                    "0" => Ok(false),
                    "1" => Ok(true),
                    other => Err(RunError::Input(format!(
                        "mask entries must be 0/1, got '{other}'"
                    ))),
                })
                .collect();
            let k_mask = bits?;
            if k_mask.len() != grid.total_nodes() {
                return Err(RunError::Input(format!(
                    "mask has {} entries, grid has {} nodes",
                    k_mask.len(),
                    grid.total_nodes()
                )));
            }
            Ok(Condenser::GridMask { grid, k_mask })
        }
        (CarrierKind::Radial, CondenserSpec::MaskFile(_)) => Err(RunError::Input(
            "node-mask condensers need a grid carrier".into(),
        )),
    }
}

fn envelope_params(cfg: &RunConfig) -> EnvelopeParams {
    EnvelopeParams {
        tol: cfg.tol.min(1e-8),
        max_sweeps: 200_000,
    }
}

fn run_capacity(cfg: &RunConfig) -> Result<RunOutcome, RunError> {
    let cond = build_condenser(cfg)?;
    let t0 = Instant::now();
    let cap = capacity_cm(&cond, cfg.m, envelope_params(cfg)).map_err(classify)?;
    let h_k = extremal_function(&cond, cfg.m, envelope_params(cfg)).map_err(classify)?;
    let wall = t0.elapsed().as_secs_f64();
    save_potential(&cfg.out_dir, "extremal.snap", &h_k)?;
    let mut s = Summary::new("capacity");
    s.push("n", cfg.n.to_string());
    s.push("m", cfg.m.to_string());
    s.push_f64("mass_version", cap.mass_version);
    s.push_f64("energy_version", cap.energy_version);
    s.push_f64("ratio", cap.ratio);
    s.push_f64("wall_s", wall);
    s.write(&cfg.out_dir).map_err(io_err)?;
    Ok(RunOutcome::Converged)
}

fn run_envelope(cfg: &RunConfig) -> Result<RunOutcome, RunError> {
    let t0 = Instant::now();
    let result = if let Some(path) = &cfg.obstacle_file {
        let snap = snapshot::load(path).map_err(|e| RunError::Input(e.to_string()))?;
        let own = carrier(cfg)?;
        if !snap.carrier.matches(&own) {
            return Err(RunError::Input(format!(
                "obstacle file {} does not match the configured carrier",
                path.display()
            )));
        }
        match &own {
            Carrier::Radial { n, rho_max, .. } => {
                envelope_pm_radial(*n, *rho_max, &snap.values, cfg.m, envelope_params(cfg))
                    .map(Potential::Radial)
            }
            Carrier::Grid(grid) => {
                envelope_pm_grid(grid, &snap.values, cfg.m, envelope_params(cfg))
                    .map(Potential::Grid)
            }
        }
        .map_err(classify)?
    } else {
        let cond = build_condenser(cfg)?;
        extremal_function(&cond, cfg.m, envelope_params(cfg)).map_err(classify)?
    };
    let wall = t0.elapsed().as_secs_f64();
    save_potential(&cfg.out_dir, "envelope.snap", &result)?;
    let mut s = Summary::new("envelope");
    s.push("n", cfg.n.to_string());
    s.push("m", cfg.m.to_string());
    s.push_f64(
        "min_value",
        result.values().iter().fold(0.0f64, |a, b| a.min(*b)),
    );
    s.push_f64("wall_s", wall);
    s.write(&cfg.out_dir).map_err(io_err)?;
    Ok(RunOutcome::Converged)
}

fn run_exponents(cfg: &RunConfig) -> Result<RunOutcome, RunError> {
    let rec = compute_exponents(cfg.m, cfg.n, cfg.p, cfg.r_exp).map_err(classify)?;
    let mut s = Summary::new("exponents");
    s.push("m", cfg.m.to_string());
    s.push("n", cfg.n.to_string());
    s.push_f64("p", cfg.p);
    s.push_f64("r", cfg.r_exp);
    s.push_f64("ell", rec.ell);
    s.push_f64("p_star", rec.p_star);
    s.push_f64("tau", rec.tau_at_r);
    s.push_f64("k_exp", rec.k_exp);
    s.push("holder_condition", rec.holder_condition.to_string());
    s.push("limit_case", rec.limit_case.to_string());
    s.write(&cfg.out_dir).map_err(io_err)?;
    Ok(RunOutcome::Converged)
}

fn run_check(name: Option<&str>, cfg: &RunConfig) -> Result<RunOutcome, RunError> {
    let Some(name) = name else {
        return Err(RunError::Input(
            "check needs a name: blocki | sobolev | capacity-energy | monotonicity | dini".into(),
        ));
    };
    let t0 = Instant::now();
    let (report, mut summary) = match name {
        "blocki" => {
            let rep = run_blocki_corpus(cfg.n, cfg.m, cfg.corpus, cfg.seed, cfg.resolution)
                .map_err(classify)?;
            let s = Summary::new("check-blocki");
            (rep, s)
        }
        "sobolev" => {
            let rep = run_sobolev_corpus(cfg.n, cfg.m, cfg.corpus, cfg.seed, cfg.resolution)
                .map_err(classify)?;
            let mut s = Summary::new("check-sobolev");
            s.push_f64("empirical_a", rep.empirical_a);
            s.push_f64("sup_i_over_e", rep.sup_i_over_e);
            (rep.report, s)
        }
        "capacity-energy" => {
            let mut rng = hesseig_core::rng::Rng::new(cfg.seed);
            let phi = random_admissible_radial(&mut rng, cfg.n, cfg.radius * cfg.radius, cfg.resolution);
            let rep = check_capacity_energy(&phi, &cfg.s_values, cfg.m).map_err(classify)?;
            (rep, Summary::new("check-capacity-energy"))
        }
        "monotonicity" => {
            let rep = check_monotonicity_lambda(&cfg.radii, cfg.m, cfg.n, cfg.resolution, |_| 1.0)
                .map_err(classify)?;
            let mut s = Summary::new("check-monotonicity");
            let lambdas: Vec<String> = rep.rows.iter().map(|r| format!("{}", r.lhs)).collect();
            s.push("lambdas", lambdas.join(" "));
            (rep, s)
        }
        "dini" => {
            let profile = DiffusenessProfile::PowerLaw { a: cfg.gamma_a, tau: cfg.gamma_tau };
            let rep = diffuseness_integrals(&profile, cfg.m, cfg.r_exp);
            let mut s = Summary::new("check-dini");
            let describe = |v: &Verdict| match v {
                Verdict::Finite(x) => format!("finite {x:.16e}"),
                Verdict::Divergent => "divergent".into(),
                Verdict::Indeterminate => "indeterminate".into(),
            };
            s.push("dini_integral", describe(&rep.dini));
            s.push("ell_gamma", describe(&rep.ell_gamma));
            s.push_f64("gamma_a", cfg.gamma_a);
            s.push_f64("gamma_tau", cfg.gamma_tau);
            s.push_f64("wall_s", t0.elapsed().as_secs_f64());
            s.write(&cfg.out_dir).map_err(io_err)?;
            return Ok(RunOutcome::Converged);
        }
        other => {
            return Err(RunError::Input(format!(
                "unknown check '{other}'; expected blocki | sobolev | capacity-energy | monotonicity | dini"
            )))
        }
    };
    write_check_csv(&cfg.out_dir, &report, cfg.seed).map_err(io_err)?;
    summary.push("check", report.name);
    summary.push("samples", report.samples.to_string());
    summary.push_f64("worst_ratio", report.worst_ratio);
    summary.push("pass", report.pass.to_string());
    summary.push_f64("wall_s", t0.elapsed().as_secs_f64());
    summary.write(&cfg.out_dir).map_err(io_err)?;
    if report.pass {
        Ok(RunOutcome::Converged)
    } else {
        Ok(RunOutcome::NotConverged(format!(
            "check {} failed: worst ratio {}",
            report.name, report.worst_ratio
        )))
    }
}
