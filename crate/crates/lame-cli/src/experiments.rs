//! Reproducible experiment drivers: the area-preserving ellipse sweep, the
//! incompressible-limit sweep in the stiffness ratio, and the scalar-vs-vector
//! bounds report. Sweep points are independent jobs executed on a bounded
//! worker pool; rows are emitted in parameter order regardless of completion
//! order, and every row carries the refinement level and solver residual so
//! unconverged points can be filtered downstream.

use crate::csvout::fmt_sig;
use lame_core::disk::{first_eigenvalue, j11, DEFAULT_K_MAX};
use lame_core::params::ElasticityParams;
use lame_fem::{
    assemble_lame, assemble_scalar_laplace, mesh_for_domain, solve_smallest_seeded, Domain,
};
use rayon::prelude::*;

/// One computed point of a parameter sweep.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub experiment: &'static str,
    pub nu: f64,
    pub mu: f64,
    /// Swept parameter: semi-axis `a` for ellipses, stiffness ratio for the
    /// incompressible-limit sweep.
    pub param: f64,
    pub value: f64,
    pub reference: f64,
    pub refine: u32,
    pub residual: f64,
}

pub const SWEEP_HEADER: &str = "experiment,nu,mu,param,value,reference,refine,residual";

impl SweepRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.experiment,
            fmt_sig(self.nu),
            fmt_sig(self.mu),
            fmt_sig(self.param),
            fmt_sig(self.value),
            fmt_sig(self.reference),
            self.refine,
            fmt_sig(self.residual)
        )
    }
}

/// Default semi-axis grid `1.00, 1.05, ..., 2.00`; the family is symmetric
/// under `a -> 1/a`, so only `a >= 1` is swept.
pub fn default_ellipse_grid() -> Vec<f64> {
    (0..=20).map(|i| 1.0 + 0.05 * i as f64).collect()
}

/// Default stiffness-ratio grid for the incompressible-limit sweep.
pub fn default_ratio_grid() -> Vec<f64> {
    vec![1.0, 3.0, 10.0, 30.0, 100.0, 300.0, 1000.0]
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool, lame_fem::Error> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| lame_fem::Error::Solver(format!("worker pool: {e}")))
}

/// First eigenvalue along the family of area-pi ellipses with semi-axes
/// `(a, 1/a)`, against the analytic disk value as reference.
pub fn ellipse_sweep(
    nu: f64,
    mu: f64,
    a_values: &[f64],
    refine: u32,
    seed: u64,
    jobs: usize,
) -> Result<Vec<SweepRow>, lame_fem::Error> {
    let params = ElasticityParams::from_poisson(nu, mu)?;
    let disk_reference = first_eigenvalue(&params, DEFAULT_K_MAX)?.value;
    let rows: Vec<Result<SweepRow, lame_fem::Error>> = pool(jobs)?.install(|| {
        a_values
            .par_iter()
            .map(|&a| {
                let mesh = mesh_for_domain(&Domain::Ellipse(a), &params, refine)?;
                let pencil = assemble_lame(&mesh, &params)?;
                let sol = solve_smallest_seeded(&pencil, 1, 1e-8, seed)?;
                Ok(SweepRow {
                    experiment: "ellipse_sweep",
                    nu,
                    mu,
                    param: a,
                    value: sol.values[0],
                    reference: disk_reference,
                    refine,
                    residual: sol.residuals[0],
                })
            })
            .collect()
    });
    rows.into_iter().collect()
}

/// Semi-axis at which the sweep attains its minimum, with the minimum value.
pub fn sweep_minimum(rows: &[SweepRow]) -> (f64, f64) {
    let mut best = (rows[0].param, rows[0].value);
    for r in rows {
        if r.value < best.1 {
            best = (r.param, r.value);
        }
    }
    best
}

/// `Lambda^a / mu` on a fixed domain for increasing stiffness ratio
/// `a = (lambda + mu)/mu`, approaching the Stokes eigenvalue from below in the
/// continuum. The reference column is the disk limit `j_{1,1}^2`.
///
/// Iterative tolerances are relaxed over a deterministic ladder: at extreme
/// ratios the attainable residual is limited by the spread of the pencil's
/// spectrum in finite precision, not by the iteration.
pub fn gamma_sweep(
    domain: &Domain,
    mu: f64,
    a_ratios: &[f64],
    refine: u32,
    seed: u64,
    jobs: usize,
) -> Result<Vec<SweepRow>, lame_fem::Error> {
    for &a in a_ratios {
        if a > 1e4 {
            eprintln!(
                "warning: stiffness ratio {a} above 1e4; the pencil is severely ill-conditioned"
            );
        }
    }
    let j2 = j11() * j11();
    let rows: Vec<Result<SweepRow, lame_fem::Error>> = pool(jobs)?.install(|| {
        a_ratios
            .par_iter()
            .map(|&a| {
                if !(a >= 1.0) {
                    return Err(lame_fem::Error::Mesh(format!(
                        "stiffness ratio {a} must be >= 1"
                    )));
                }
                let params = ElasticityParams::from_lame((a - 1.0) * mu, mu)?;
                let mesh = mesh_for_domain(domain, &params, refine)?;
                let pencil = assemble_lame(&mesh, &params)?;
                let mut solution = None;
                let mut last_err = None;
                for tol in [1e-8, 1e-7, 1e-6] {
                    match solve_smallest_seeded(&pencil, 1, tol, seed) {
                        Ok(s) => {
                            solution = Some(s);
                            break;
                        }
                        Err(e) => last_err = Some(e),
                    }
                }
                let sol = match solution {
                    Some(s) => s,
                    None => return Err(last_err.expect("ladder attempted")),
                };
                Ok(SweepRow {
                    experiment: "gamma_sweep",
                    nu: params.nu(),
                    mu,
                    param: a,
                    value: sol.values[0] / mu,
                    reference: j2,
                    refine,
                    residual: sol.residuals[0],
                })
            })
            .collect()
    });
    rows.into_iter().collect()
}

/// One domain's worth of the scalar-vs-vector bounds report.
#[derive(Debug, Clone)]
pub struct BoundsRow {
    pub label: &'static str,
    pub domain: Domain,
    pub lambda1: f64,
    pub value: f64,
}

pub const BOUNDS_HEADER: &str =
    "domain,nu,mu,refine,lambda1,Lambda,lower,upper,korn_constant,lower_ok,upper_ok";

/// Scalar and vector first eigenvalues on the canonical domain list, for the
/// bound `mu lambda_1 < Lambda <= (lambda + 3 mu)/2 lambda_1` and the Korn
/// constant `2 / lambda_1`.
pub fn bounds_report(
    params: &ElasticityParams,
    refine: u32,
    seed: u64,
) -> Result<Vec<BoundsRow>, lame_fem::Error> {
    let domains: [(&'static str, Domain); 5] = [
        ("disk", Domain::Disk),
        ("square", Domain::Rectangle(1.0)),
        ("rectangle_t0.4", Domain::Rectangle(0.4)),
        ("thin_rectangle_t0.05", Domain::Rectangle(0.05)),
        ("rhombus_area_pi", Domain::Rhombus(std::f64::consts::PI)),
    ];
    let mut rows = Vec::new();
    for (label, domain) in domains {
        let mesh = mesh_for_domain(&domain, params, refine)?;
        let scalar = solve_smallest_seeded(&assemble_scalar_laplace(&mesh)?, 1, 1e-9, seed)?;
        let vector = solve_smallest_seeded(&assemble_lame(&mesh, params)?, 1, 1e-8, seed)?;
        rows.push(BoundsRow {
            label,
            domain,
            lambda1: scalar.values[0],
            value: vector.values[0],
        });
    }
    Ok(rows)
}

impl BoundsRow {
    pub fn to_csv(&self, params: &ElasticityParams, refine: u32) -> String {
        let lower = params.mu() * self.lambda1;
        let upper = 0.5 * (params.lambda() + 3.0 * params.mu()) * self.lambda1;
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.label,
            fmt_sig(params.nu()),
            fmt_sig(params.mu()),
            refine,
            fmt_sig(self.lambda1),
            fmt_sig(self.value),
            fmt_sig(lower),
            fmt_sig(upper),
            fmt_sig(2.0 / self.lambda1),
            lower < self.value,
            self.value <= upper * 1.005
        )
    }
}
