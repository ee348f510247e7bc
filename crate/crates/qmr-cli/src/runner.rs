//! Sweep execution: one CSV row per (omega, n) grid point, buffered in
//! omega-major, n-minor order regardless of thread completion order.

use crate::config::{ExperimentConfig, FPolicy, Workflow};
use qmr_core::Complex as Complex64;
use qmr_core::analysis::{
    localization_ratios, resonance_ratios, shell_norm_sq_fast, stress_energies, ShellSpec,
};
use qmr_core::design::{design_bounds, regime_check};
use qmr_core::harmonics::{sphere_quadrature, SphereQuadrature};
use qmr_core::media::{derive_parameters, BackgroundMedium, ContrastProfile};
use qmr_core::solver::{solve_mode_exact, transmission_residual, FieldRegion, IncidentSpec};
use qmr_core::QmrError;
use std::fmt::Write as _;

/// Failure modes mapped onto the documented exit codes.
#[derive(Debug)]
pub enum RunError {
    /// Exit 2: the configuration is inconsistent or incomplete.
    Config(String),
    /// Exit 3: a numerical error (near-singular mode, quadrature resolution).
    Numerical(String),
    /// Exit 4: output could not be written.
    Io(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Numerical(_) => 3,
            RunError::Io(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            RunError::Config(m) | RunError::Numerical(m) | RunError::Io(m) => m,
        }
    }
}

fn classify(err: QmrError) -> RunError {
    match err {
        QmrError::NearSingular { .. } | QmrError::QuadratureResolution { .. } => {
            RunError::Numerical(err.to_string())
        }
        // Domain and parameter errors at run time trace back to config values.
        _ => RunError::Config(err.to_string()),
    }
}

fn require(value: Option<f64>, key: &str) -> Result<f64, RunError> {
    value.ok_or_else(|| RunError::Config(format!("missing required key '{key}'")))
}

/// Run a workflow and return the CSV artifact text.
pub fn run(workflow: Workflow, cfg: &ExperimentConfig, threads: usize) -> Result<String, RunError> {
    match workflow {
        Workflow::Design => design_csv(cfg),
        Workflow::Validate => Err(RunError::Config(
            "the validate workflow produces no CSV; run it directly".into(),
        )),
        _ => field_csv(workflow, cfg, threads),
    }
}

fn design_csv(cfg: &ExperimentConfig) -> Result<String, RunError> {
    let eps_loc = require(cfg.eps_loc, "eps_loc")?;
    let gamma1 = require(cfg.gamma1, "gamma1")?;
    let gamma2 = require(cfg.gamma2, "gamma2")?;
    let b = design_bounds(eps_loc, gamma1, gamma2).map_err(classify)?;
    let mut out = String::new();
    if let (Some(delta), false) = (cfg.delta, cfg.n.is_empty()) {
        out.push_str(
            "#schema=eps_loc,gamma1,gamma2,n,delta,n1,n2,beta,n1_clamped,\
             thm31,cor32,thm41,prop41,thm42,prop43,prop44\n",
        );
        for &n in &cfg.n {
            let f = regime_check(n, delta, eps_loc, gamma1, gamma2).map_err(classify)?;
            let _ = writeln!(
                out,
                "{eps_loc},{gamma1},{gamma2},{n},{delta},{},{},{},{},{},{},{},{},{},{},{}",
                b.n1,
                b.n2,
                b.beta,
                b.n1_clamped,
                f.thm31,
                f.cor32,
                f.thm41,
                f.prop41,
                f.thm42,
                f.prop43,
                f.prop44
            );
        }
    } else {
        out.push_str("#schema=eps_loc,gamma1,gamma2,n1,n2,beta,n1_clamped\n");
        let _ = writeln!(
            out,
            "{eps_loc},{gamma1},{gamma2},{},{},{},{}",
            b.n1, b.n2, b.beta, b.n1_clamped
        );
    }
    Ok(out)
}

struct FieldContext<'a> {
    cfg: &'a ExperimentConfig,
    workflow: Workflow,
    shells: ShellSpec,
    quad: SphereQuadrature,
    delta: f64,
    eps_rho: f64,
    eps_loc: Option<f64>,
}

const LN_10: f64 = std::f64::consts::LN_10;

fn field_row(ctx: &FieldContext, omega: f64, n: u32) -> Result<String, RunError> {
    let cfg = ctx.cfg;
    let bg = BackgroundMedium::new(cfg.lambda, cfg.mu, cfg.rho).map_err(classify)?;
    let contrast = ContrastProfile::new(ctx.delta, ctx.eps_rho).map_err(classify)?;
    let p = derive_parameters(bg, contrast, omega).map_err(classify)?;
    let one = Complex64::new(1.0, 0.0);
    let spec = match cfg.f_policy {
        FPolicy::UnitMn => IncidentSpec::sectoral(n, one),
        FPolicy::UnitAllM => IncidentSpec::uniform(n, one),
    }
    .map_err(classify)?;
    let coeffs = solve_mode_exact(&spec, &p).map_err(classify)?;
    let (trace, traction) = transmission_residual(&spec, &p, &coeffs).map_err(classify)?;
    let incident =
        shell_norm_sq_fast(FieldRegion::Incident, &spec, &p, &coeffs, 0.0, 1.0, &ctx.quad)
            .map_err(classify)?
            .normalized();
    let mut row = format!(
        "{omega},{n},{},{},{},{},{},{},{},{},{trace},{traction},{},{}",
        cfg.lambda,
        cfg.mu,
        cfg.rho,
        ctx.delta,
        ctx.eps_rho,
        ctx.shells.gamma1,
        ctx.shells.gamma2,
        ctx.shells.r_outer,
        incident.mantissa,
        incident.log_scale / LN_10,
    );
    match ctx.workflow {
        Workflow::Localization => {
            let eps_loc = ctx.eps_loc.expect("checked upstream");
            let r = localization_ratios(&spec, &p, &coeffs, &ctx.shells, eps_loc, &ctx.quad)
                .map_err(classify)?;
            let _ = write!(
                row,
                ",{eps_loc},{},{},{},{},{}",
                r.interior_ratio, r.exterior_ratio, r.threshold, r.pass_interior, r.pass_exterior
            );
        }
        Workflow::Resonance => {
            let r = resonance_ratios(&spec, &p, &coeffs, &ctx.shells, &ctx.quad)
                .map_err(classify)?;
            let _ = write!(
                row,
                ",{},{},{},{},{},{}",
                r.interior_sq_ratio,
                r.exterior_sq_ratio,
                r.bound_interior,
                r.bound_exterior,
                r.interior_exceeds,
                r.exterior_exceeds
            );
        }
        Workflow::Stress => {
            let r =
                stress_energies(&spec, &p, &coeffs, &ctx.shells, &ctx.quad).map_err(classify)?;
            let _ = write!(
                row,
                ",{},{},{},{},{},{},{}",
                r.e_interior,
                r.e_exterior,
                r.bound_interior,
                r.bound_exterior,
                r.consistency_gap,
                r.interior_exceeds,
                r.exterior_exceeds
            );
        }
        Workflow::Design | Workflow::Validate => unreachable!(),
    }
    row.push('\n');
    Ok(row)
}

fn field_csv(
    workflow: Workflow,
    cfg: &ExperimentConfig,
    threads: usize,
) -> Result<String, RunError> {
    if cfg.omega.is_empty() {
        return Err(RunError::Config("omega sweep must be nonempty".into()));
    }
    if cfg.n.is_empty() {
        return Err(RunError::Config("n sweep must be nonempty".into()));
    }
    if cfg.omega.iter().any(|&w| w <= 0.0) {
        return Err(RunError::Config("omega values must be positive".into()));
    }
    if cfg.n.iter().any(|&n| n == 0) {
        return Err(RunError::Config("n values must be >= 1".into()));
    }
    let delta = require(cfg.delta, "delta")?;
    let eps_rho = require(cfg.eps_rho, "eps_rho")?;
    let gamma1 = require(cfg.gamma1, "gamma1")?;
    let gamma2 = require(cfg.gamma2, "gamma2")?;
    let eps_loc = if workflow == Workflow::Localization {
        Some(require(cfg.eps_loc, "eps_loc")?)
    } else {
        cfg.eps_loc
    };
    let shells = ShellSpec::new(gamma1, gamma2, cfg.r_outer).map_err(classify)?;
    let n_max = *cfg.n.iter().max().expect("nonempty");
    let quad = sphere_quadrature(n_max).map_err(classify)?;
    let ctx = FieldContext { cfg, workflow, shells, quad, delta, eps_rho, eps_loc };

    let jobs: Vec<(f64, u32)> = cfg
        .omega
        .iter()
        .flat_map(|&w| cfg.n.iter().map(move |&n| (w, n)))
        .collect();
    let mut results: Vec<Option<Result<String, RunError>>> = Vec::new();
    results.resize_with(jobs.len(), || None);
    let workers = threads.max(1).min(jobs.len());
    if workers <= 1 {
        for (slot, &(w, n)) in results.iter_mut().zip(jobs.iter()) {
            *slot = Some(field_row(&ctx, w, n));
        }
    } else {
        let chunk = jobs.len().div_ceil(workers);
        std::thread::scope(|scope| {
            for (job_chunk, slot_chunk) in jobs.chunks(chunk).zip(results.chunks_mut(chunk)) {
                let ctx = &ctx;
                scope.spawn(move || {
                    for (slot, &(w, n)) in slot_chunk.iter_mut().zip(job_chunk.iter()) {
                        *slot = Some(field_row(ctx, w, n));
                    }
                });
            }
        });
    }

    let mut out = String::from("#schema=omega,n,lambda,mu,rho,delta,eps_rho,gamma1,gamma2,R,\
                                trace_residual,traction_residual,incident_norm_mantissa,\
                                incident_norm_log10scale");
    out.push_str(match workflow {
        Workflow::Localization => {
            ",eps_loc,interior_ratio,exterior_ratio,threshold,pass_interior,pass_exterior\n"
        }
        Workflow::Resonance => {
            ",interior_sq_ratio,exterior_sq_ratio,bound_interior,bound_exterior,\
             interior_exceeds,exterior_exceeds\n"
        }
        Workflow::Stress => {
            ",e_interior,e_exterior,bound_interior,bound_exterior,consistency_gap,\
             interior_exceeds,exterior_exceeds\n"
        }
        _ => unreachable!(),
    });
    for slot in results {
        out.push_str(&slot.expect("all slots filled")?);
    }
    Ok(out)
}
