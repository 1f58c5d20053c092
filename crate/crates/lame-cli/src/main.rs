//! Command-line interface for the first Dirichlet eigenvalue of the 2-D Lamé
//! system: closed-form disk and rhombus spectra, rectangle variational
//! bounds, shape-derivative certificates at the disk, a P2 finite-element
//! eigensolver, and reproducible parameter sweeps. All output is CSV.
//!
//! Exit codes: 0 success, 2 invalid arguments, 3 numerical failure.

use clap::{Args, Parser, Subcommand};
use lame_cli::csvout::{fmt_sig, write_csv};
use lame_cli::experiments::{
    bounds_report, default_ellipse_grid, default_ratio_grid, ellipse_sweep, gamma_sweep,
    sweep_minimum, BOUNDS_HEADER, SWEEP_HEADER,
};
use lame_core::disk::{first_eigenvalue, j11, nu_star, Regime, DEFAULT_K_MAX};
use lame_core::domains::{
    build_rhombus, rectangle_beats_disk, rectangle_upper_bound, rhombus_disk_threshold,
    rhombus_eigenvalue, RectangleSpec,
};
use lame_core::params::ElasticityParams;
use lame_core::perturbation::{big_c_coefficient, c_coefficient, m11_witness};
use lame_fem::{assemble_lame, mesh_for_domain, solve_smallest_seeded, Domain, MAX_REFINEMENT};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "lame-cli",
    version,
    about = "First Dirichlet eigenvalue of the 2-D Lame system on canonical planar domains"
)]
struct Cli {
    /// Write CSV to this path instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Seed for the eigensolver's random start block
    #[arg(long, global = true, default_value_t = 0x5eed)]
    seed: u64,

    /// Worker threads for parameter sweeps
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    #[command(subcommand)]
    cmd: Cmd,
}

/// Material parameters: `--nu` or `--lambda`, with `--mu` (default 1).
#[derive(Args)]
struct Material {
    /// Poisson ratio in (-1, 1/2)
    #[arg(long, conflicts_with = "lambda")]
    nu: Option<f64>,

    /// First Lame parameter (alternative to --nu)
    #[arg(long)]
    lambda: Option<f64>,

    /// Shear modulus
    #[arg(long, default_value_t = 1.0)]
    mu: f64,
}

impl Material {
    fn resolve(&self) -> Result<ElasticityParams, CliError> {
        match (self.nu, self.lambda) {
            (Some(nu), None) => ElasticityParams::from_poisson(nu, self.mu).map_err(usage_err),
            (None, Some(lambda)) => ElasticityParams::from_lame(lambda, self.mu).map_err(usage_err),
            (None, None) => Err(CliError::Usage(
                "one of --nu or --lambda is required".into(),
            )),
            (Some(_), Some(_)) => unreachable!("clap rejects the conflict"),
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// First eigenvalue of the unit disk with branch classification
    DiskSpectrum {
        #[command(flatten)]
        material: Material,
        /// Angular-mode cap for the transcendental root scan
        #[arg(long = "k-max", default_value_t = DEFAULT_K_MAX)]
        k_max: usize,
    },
    /// Shape-Hessian Fourier coefficients c_k, C_k at the disk
    Perturbation {
        #[command(flatten)]
        material: Material,
        /// Largest Fourier mode to report
        #[arg(long = "k-max", default_value_t = 60)]
        k_max: usize,
    },
    /// Non-optimality witness M_11 for the double regime (nu < nu*)
    Certificate {
        #[command(flatten)]
        material: Material,
        /// Magnitude of the boundary perturbation amplitude
        #[arg(long, default_value_t = 1.0)]
        amplitude: f64,
    },
    /// Closed-form first eigenvalue of the degenerate rhombus
    Rhombus {
        #[command(flatten)]
        material: Material,
        /// Rhombus area
        #[arg(long, default_value_t = std::f64::consts::PI)]
        area: f64,
    },
    /// Variational upper bound for area-pi rectangles
    RectangleBound {
        #[command(flatten)]
        material: Material,
        /// Aspect ratio (width/length) in (0, 1]
        #[arg(long, conflicts_with = "scan")]
        t: Option<f64>,
        /// Sweep the aspect grid 0.30..1.00 instead of a single aspect
        #[arg(long)]
        scan: bool,
    },
    /// Critical constants and disk non-optimality verdicts
    Thresholds,
    /// P2 finite-element eigensolve on a chosen domain
    FemSolve {
        /// disk | ellipse:a | rectangle:t | rhombus:area
        #[arg(long)]
        domain: String,
        #[command(flatten)]
        material: Material,
        /// Refinement level of the mesh ladder
        #[arg(long, default_value_t = 3)]
        refine: u32,
        /// Number of eigenpairs to report
        #[arg(long, default_value_t = 3)]
        modes: usize,
    },
    /// Eigenvalue along the family of area-pi ellipses
    EllipseSweep {
        #[command(flatten)]
        material: Material,
        #[arg(long, default_value_t = 3)]
        refine: u32,
    },
    /// Incompressible-limit sweep in the stiffness ratio a = (lambda+mu)/mu
    GammaSweep {
        /// Shear modulus
        #[arg(long, default_value_t = 1.0)]
        mu: f64,
        /// disk | ellipse:a | rectangle:t | rhombus:area
        #[arg(long, default_value = "disk")]
        domain: String,
        #[arg(long, default_value_t = 4)]
        refine: u32,
    },
    /// Scalar-vs-vector eigenvalue bounds on the canonical domains
    BoundsReport {
        #[command(flatten)]
        material: Material,
        #[arg(long, default_value_t = 2)]
        refine: u32,
    },
}

enum CliError {
    Usage(String),
    Numeric(String),
}

fn usage_err(e: lame_core::Error) -> CliError {
    CliError::Usage(e.to_string())
}

fn core_err(e: lame_core::Error) -> CliError {
    use lame_core::Error as E;
    match e {
        E::Domain(_) | E::Inadmissible { .. } | E::RegimeMismatch(_) | E::UnsupportedOrder(_) => {
            CliError::Usage(e.to_string())
        }
        other => CliError::Numeric(other.to_string()),
    }
}

fn fem_err(e: lame_fem::Error) -> CliError {
    match e {
        lame_fem::Error::Mesh(m) => CliError::Usage(format!("mesh: {m}")),
        lame_fem::Error::Core(c) => core_err(c),
        other => CliError::Numeric(other.to_string()),
    }
}

fn parse_domain(s: &str) -> Result<Domain, CliError> {
    let bad = || {
        CliError::Usage(format!(
            "invalid --domain '{s}' (expected disk | ellipse:a | rectangle:t | rhombus:area)"
        ))
    };
    if s == "disk" {
        return Ok(Domain::Disk);
    }
    let (kind, val) = s.split_once(':').ok_or_else(bad)?;
    let v: f64 = val.parse().map_err(|_| bad())?;
    match kind {
        "ellipse" => Ok(Domain::Ellipse(v)),
        "rectangle" => Ok(Domain::Rectangle(v)),
        "rhombus" => Ok(Domain::Rhombus(v)),
        _ => Err(bad()),
    }
}

fn regime_label(r: Regime) -> &'static str {
    match r {
        Regime::SimpleBranch => "simple_branch",
        Regime::TranscendentalDouble => "transcendental_double",
        Regime::TripleAtThreshold => "triple_at_threshold",
    }
}

fn run(cli: &Cli) -> Result<(String, Vec<String>), CliError> {
    match &cli.cmd {
        Cmd::DiskSpectrum { material, k_max } => {
            let p = material.resolve()?;
            let eig = first_eigenvalue(&p, *k_max).map_err(core_err)?;
            let k = eig.mode_k.map(|k| k.to_string()).unwrap_or_default();
            let row = format!(
                "{},{},{},{},{},{}",
                fmt_sig(p.nu()),
                fmt_sig(p.mu()),
                fmt_sig(p.lambda()),
                regime_label(eig.regime),
                k,
                fmt_sig(eig.value)
            );
            Ok(("nu,mu,lambda,regime,k,Lambda".into(), vec![row]))
        }
        Cmd::Perturbation { material, k_max } => {
            let p = material.resolve()?;
            if *k_max < 1 {
                return Err(CliError::Usage("--k-max must be at least 1".into()));
            }
            let mut rows = Vec::with_capacity(*k_max);
            for k in 1..=*k_max {
                let c = c_coefficient(k, &p).map_err(core_err)?;
                let big = big_c_coefficient(k, &p).map_err(core_err)?;
                rows.push(format!("{k},{},{}", fmt_sig(c), fmt_sig(big)));
            }
            Ok(("k,c_k,C_k".into(), rows))
        }
        Cmd::Certificate {
            material,
            amplitude,
        } => {
            let p = material.resolve()?;
            let eig = first_eigenvalue(&p, DEFAULT_K_MAX).map_err(core_err)?;
            if eig.regime != Regime::TranscendentalDouble {
                return Err(CliError::Usage(format!(
                    "certificate requires nu < nu* = {:.6} (double regime); got nu = {}",
                    nu_star(),
                    p.nu()
                )));
            }
            let k = eig.mode_k.expect("double regime carries a mode");
            let probe = m11_witness(k, &p, &eig, amplitude.abs()).map_err(core_err)?;
            // The witness is linear in the amplitude: pick the sign that makes
            // it negative, certifying a descent direction.
            let signed = if probe.value < 0.0 {
                amplitude.abs()
            } else {
                -amplitude.abs()
            };
            let w = m11_witness(k, &p, &eig, signed).map_err(core_err)?;
            let row = format!(
                "{},{},{k},{},{},{},{}",
                fmt_sig(p.nu()),
                fmt_sig(p.mu()),
                fmt_sig(signed),
                fmt_sig(w.value),
                fmt_sig(w.bracket_factor),
                fmt_sig(w.bracket_relative)
            );
            Ok((
                "nu,mu,k,amplitude,m11,bracket_factor,bracket_relative".into(),
                vec![row],
            ))
        }
        Cmd::Rhombus { material, area } => {
            let p = material.resolve()?;
            let rh = build_rhombus(&p, *area).map_err(core_err)?;
            let value = rhombus_eigenvalue(&p, *area).map_err(core_err)?;
            let row = format!(
                "{},{},{},{},{},{}",
                fmt_sig(p.nu()),
                fmt_sig(p.mu()),
                fmt_sig(*area),
                fmt_sig(rh.theta.0),
                fmt_sig(rh.theta.1),
                fmt_sig(value)
            );
            Ok(("nu,mu,area,theta1,theta2,Lambda".into(), vec![row]))
        }
        Cmd::RectangleBound { material, t, scan } => {
            let p = material.resolve()?;
            let disk = p.mu() * j11() * j11();
            let ts: Vec<f64> = if *scan {
                (30..=100).map(|i| i as f64 / 100.0).collect()
            } else {
                vec![t.unwrap_or(0.4)]
            };
            let mut rows = Vec::with_capacity(ts.len());
            for t in ts {
                let spec = RectangleSpec::new(t).map_err(usage_err)?;
                let bound = rectangle_upper_bound(&p, &spec).map_err(core_err)?;
                rows.push(format!(
                    "{},{},{},{},{},{},{}",
                    fmt_sig(p.nu()),
                    fmt_sig(p.mu()),
                    fmt_sig(t),
                    fmt_sig(spec.l_side),
                    fmt_sig(spec.ell),
                    fmt_sig(bound),
                    bound < disk * (1.0 - 1e-12)
                ));
            }
            Ok(("nu,mu,t,L,ell,bound,beats_disk".into(), rows))
        }
        Cmd::Thresholds => {
            let mut rows = vec![
                format!("nu_star,,{},", fmt_sig(nu_star())),
                format!("rhombus_threshold,,{},", fmt_sig(rhombus_disk_threshold())),
            ];
            for nu in [0.375, 0.39, 0.4] {
                let p = ElasticityParams::from_poisson(nu, 1.0).map_err(core_err)?;
                let (beats, witness) = rectangle_beats_disk(&p).map_err(core_err)?;
                rows.push(format!(
                    "rectangle_beats_disk,{},{},{}",
                    fmt_sig(nu),
                    u8::from(beats),
                    witness.map(fmt_sig).unwrap_or_default()
                ));
            }
            rows.push("disk_nonoptimal_for_nu_below,,0.4,".into());
            Ok(("quantity,nu,value,witness_t".into(), rows))
        }
        Cmd::FemSolve {
            domain,
            material,
            refine,
            modes,
        } => {
            let p = material.resolve()?;
            let dom = parse_domain(domain)?;
            if *refine > MAX_REFINEMENT {
                return Err(CliError::Usage(format!(
                    "--refine {refine} above the ladder maximum {MAX_REFINEMENT}"
                )));
            }
            if *modes == 0 {
                return Err(CliError::Usage("--modes must be at least 1".into()));
            }
            let mesh = mesh_for_domain(&dom, &p, *refine).map_err(fem_err)?;
            let pencil = assemble_lame(&mesh, &p).map_err(fem_err)?;
            let sol = solve_smallest_seeded(&pencil, *modes, 1e-8, cli.seed).map_err(fem_err)?;
            let rows = (0..*modes)
                .map(|m| {
                    format!(
                        "{domain},{},{refine},{m},{},{},{}",
                        fmt_sig(p.nu()),
                        fmt_sig(sol.values[m]),
                        fmt_sig(sol.residuals[m]),
                        fmt_sig(sol.gap)
                    )
                })
                .collect();
            Ok(("domain,nu,refine,mode,value,residual,gap".into(), rows))
        }
        Cmd::EllipseSweep { material, refine } => {
            let p = material.resolve()?;
            let rows = ellipse_sweep(
                p.nu(),
                p.mu(),
                &default_ellipse_grid(),
                *refine,
                cli.seed,
                cli.jobs,
            )
            .map_err(fem_err)?;
            let (a_min, v_min) = sweep_minimum(&rows);
            eprintln!(
                "observed minimum {} at a = {} (grid step 0.05)",
                fmt_sig(v_min),
                fmt_sig(a_min)
            );
            Ok((
                SWEEP_HEADER.into(),
                rows.iter().map(|r| r.to_csv()).collect(),
            ))
        }
        Cmd::GammaSweep { mu, domain, refine } => {
            if !(*mu > 0.0) {
                return Err(CliError::Usage(format!("--mu must be positive, got {mu}")));
            }
            let dom = parse_domain(domain)?;
            let rows = gamma_sweep(
                &dom,
                *mu,
                &default_ratio_grid(),
                *refine,
                cli.seed,
                cli.jobs,
            )
            .map_err(fem_err)?;
            Ok((
                SWEEP_HEADER.into(),
                rows.iter().map(|r| r.to_csv()).collect(),
            ))
        }
        Cmd::BoundsReport { material, refine } => {
            let p = material.resolve()?;
            let rows = bounds_report(&p, *refine, cli.seed).map_err(fem_err)?;
            Ok((
                BOUNDS_HEADER.into(),
                rows.iter().map(|r| r.to_csv(&p, *refine)).collect(),
            ))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((header, rows)) => match write_csv(cli.out.as_deref(), &header, &rows) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: cannot write output: {e}");
                ExitCode::from(2)
            }
        },
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Numeric(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}
