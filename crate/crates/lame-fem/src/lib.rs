//! Conforming P2 finite elements for the first Dirichlet eigenvalue of the
//! planar Lamé system
//!
//! ```text
//!     Lambda(Omega) = min { mu ∫|grad u|^2 + (lambda + mu) ∫(div u)^2 :
//!                           u in H^1_0(Omega)^2, ∫|u|^2 = 1 }
//! ```
//!
//! on mapped structured meshes of disks, ellipses, rectangles and the
//! rhombi of `lame_core::domains`. Quadratic elements keep volumetric
//! locking in check when the divergence penalty `a = (lambda + mu)/mu`
//! is large; Dirichlet conditions are imposed by eliminating boundary
//! nodes, which preserves the conforming upper-bound property
//! `Lambda_h >= Lambda`.
//!
//! The high-level entry point is [`lame_eigenvalue_fem`], which meshes a
//! [`Domain`] at one of six refinement levels, assembles the pencil and
//! returns the smallest discrete eigenvalue with its relative gap to the
//! next mode (a gap below 1e-3 indicates a numerically multiple
//! eigenvalue).

pub mod assemble;
pub mod eigen;
pub mod mesh;
pub mod p2;
pub mod sparse;

pub use assemble::{
    assemble_lame, assemble_scalar_laplace, nodal_field_energies, FieldEnergies,
    SymmetricSparsePencil,
};
pub use eigen::{solve_smallest, solve_smallest_seeded, DeterministicRng, EigenResult};
pub use mesh::{mesh_affine_map, mesh_ellipse, mesh_rectangle, Mesh};

use lame_core::domains::{build_rhombus, RectangleSpec};
use lame_core::params::ElasticityParams;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("mesh error: {0}")]
    Mesh(String),
    #[error("assembly error: {0}")]
    Assembly(String),
    #[error("eigensolver error: {0}")]
    Solver(String),
    #[error(transparent)]
    Core(#[from] lame_core::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Deepest refinement level accepted by the domain drivers.
pub const MAX_REFINEMENT: u32 = 5;

/// Computational domains, all of area π except general rhombi:
/// the unit disk; the ellipse with semi-axes `(a, 1/a)`; the rectangle
/// `(0, L) x (0, ell)` with aspect `t = ell / L` and `L ell = π`; the
/// material-adapted rhombus of the given area.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Disk,
    Ellipse(f64),
    Rectangle(f64),
    Rhombus(f64),
}

/// Mesh a domain at a refinement level.
///
/// The ladder doubles in each direction per level: the disk/ellipse mesh
/// uses `8·2^r` sectors and `max(3, 2·2^r)` rings (boundary vertices are
/// regenerated on the true curve at every level); rectangles and rhombi
/// use about `4·2^r` cells per unit of `sqrt(area)`. The rhombus mesh is
/// the unit-square mesh pushed through the affine frame of the rhombus,
/// so its corners land exactly on `Rhombus::vertices`.
pub fn mesh_for_domain(
    domain: &Domain,
    params: &ElasticityParams,
    refinement: u32,
) -> Result<Mesh> {
    if refinement > MAX_REFINEMENT {
        return Err(Error::Mesh(format!(
            "refinement {refinement} exceeds maximum {MAX_REFINEMENT}"
        )));
    }
    let scale = 1usize << refinement;
    match *domain {
        Domain::Disk => mesh_ellipse(1.0, (2 * scale).max(3), 8 * scale),
        Domain::Ellipse(a) => {
            if !(a > 0.0) || !a.is_finite() {
                return Err(Error::Mesh(format!(
                    "ellipse semi-axis must be positive, got {a}"
                )));
            }
            mesh_ellipse(a, (2 * scale).max(3), 8 * scale)
        }
        Domain::Rectangle(t) => {
            let spec = RectangleSpec::new(t)?;
            let per_unit = (4 * scale) as f64 / std::f64::consts::PI.sqrt();
            let nx = ((spec.l_side * per_unit).ceil() as usize).max(2);
            let ny = ((spec.ell * per_unit).ceil() as usize).max(2);
            mesh_rectangle(spec.l_side, spec.ell, nx, ny)
        }
        Domain::Rhombus(area) => {
            let rh = build_rhombus(params, area)?;
            let n = 4 * scale;
            let square = mesh_rectangle(1.0, 1.0, n, n)?;
            let [a, b, _, d] = rh.vertices;
            let j = [[b[0] - a[0], d[0] - a[0]], [b[1] - a[1], d[1] - a[1]]];
            mesh_affine_map(&square, j, a)
        }
    }
}

/// Smallest discrete Lamé eigenvalue on the domain, with its relative gap
/// to the second mode. Solves three modes at relative residual 1e-8.
pub fn lame_eigenvalue_fem(
    domain: &Domain,
    params: &ElasticityParams,
    refinement: u32,
) -> Result<(f64, f64)> {
    let mesh = mesh_for_domain(domain, params, refinement)?;
    let pencil = assemble_lame(&mesh, params)?;
    let result = solve_smallest(&pencil, 3, 1e-8)?;
    Ok((result.values[0], result.gap))
}

/// Smallest discrete eigenvalue of the scalar Dirichlet Laplacian on the
/// same mesh the elastic solve would use (the membrane eigenvalue
/// `lambda_1^D` entering the sandwich bounds).
pub fn scalar_eigenvalue_fem(
    domain: &Domain,
    params: &ElasticityParams,
    refinement: u32,
) -> Result<f64> {
    let mesh = mesh_for_domain(domain, params, refinement)?;
    let pencil = assemble_scalar_laplace(&mesh)?;
    let result = solve_smallest(&pencil, 2, 1e-8)?;
    Ok(result.values[0])
}
