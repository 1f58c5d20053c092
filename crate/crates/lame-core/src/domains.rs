//! Closed-form and variational eigenvalue results away from the disk:
//! tilted rhombi with an explicit eigenpair, the 4x4 Rayleigh bound on
//! rectangles of unit-disk area, and the thin-cuboid upper bound.
//!
//! These are the comparison domains showing the disk is not always optimal:
//! the rhombus beats the disk for `nu` below ~0.3879, and a rectangle of
//! aspect `t = 2/5` beats it on the whole band `nu` in `[3/8, 2/5]`.

use crate::disk::j11;
use crate::disk::VectorField2D;
use crate::params::ElasticityParams;
use crate::{Error, Result};

/// A rhombus aligned with the characteristic directions of the Lamé
/// operator, on which `sin(w1(x+y)) - sin(w2(x-y))` is an eigenfunction
/// vanishing on all four sides.
///
/// The sides lie on the lines `e1 . X in {xi1, xi1_hat}` and
/// `e2 . X in {xi2, xi2_hat}` with `e1 = (alpha, beta)`, `e2 = (beta,
/// alpha)`, `alpha = 1/sqrt(lambda+2mu) - 1/sqrt(mu)`, `beta =
/// 1/sqrt(lambda+2mu) + 1/sqrt(mu)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rhombus {
    /// Corner points in counterclockwise order.
    pub vertices: [[f64; 2]; 4],
    /// First line-family normal `(alpha, beta)` (not normalized).
    pub e1: [f64; 2],
    /// Second line-family normal `(beta, alpha)`.
    pub e2: [f64; 2],
    /// Line offsets `(xi1, xi1_hat, xi2, xi2_hat)`; both gaps equal
    /// `sqrt(2/Lambda) * 2 pi`.
    pub xi: (f64, f64, f64, f64),
    /// Enclosed area.
    pub area: f64,
    /// Phase convention `(theta1, theta2)`, fixed to `(0, 0)`.
    pub theta: (f64, f64),
}

impl Rhombus {
    /// Whether the point lies in the closed rhombus (up to tolerance `tol`
    /// on the line offsets).
    pub fn contains(&self, x: f64, y: f64, tol: f64) -> bool {
        let s1 = self.e1[0] * x + self.e1[1] * y;
        let s2 = self.e2[0] * x + self.e2[1] * y;
        let (xi1, xi1h, xi2, xi2h) = self.xi;
        s1 >= xi1 - tol && s1 <= xi1h + tol && s2 >= xi2 - tol && s2 <= xi2h + tol
    }

    /// Centroid of the four vertices.
    pub fn centroid(&self) -> (f64, f64) {
        let mut c = (0.0, 0.0);
        for v in &self.vertices {
            c.0 += 0.25 * v[0];
            c.1 += 0.25 * v[1];
        }
        c
    }
}

/// The explicit rhombus eigenvalue `Lambda = 2 pi^2 sqrt(mu (lambda + 2 mu)) / area`.
///
/// This is an eigenvalue of the rhombus produced by [`build_rhombus`] for
/// the same parameters and area; whether it is the *first* one is checked
/// numerically elsewhere, not assumed.
pub fn rhombus_eigenvalue(params: &ElasticityParams, area: f64) -> Result<f64> {
    if !(area > 0.0) || !area.is_finite() {
        return Err(Error::Domain(format!("area must be positive, got {area}")));
    }
    Ok(2.0 * std::f64::consts::PI.powi(2) * (params.mu() * params.p_modulus()).sqrt() / area)
}

/// Build the rhombus of the requested area for the given material.
///
/// Phases are fixed to `theta1 = theta2 = 0`; the first vertex sits on the
/// intersection of the lines `e1 . X = xi1` and `e2 . X = xi2_hat`, and the
/// vertex list is counterclockwise.
pub fn build_rhombus(params: &ElasticityParams, area: f64) -> Result<Rhombus> {
    let lambda_value = rhombus_eigenvalue(params, area)?;
    let sa1 = 1.0 / params.p_modulus().sqrt();
    let sa2 = 1.0 / params.mu().sqrt();
    let alpha = sa1 - sa2;
    let beta = sa1 + sa2;
    if alpha.abs() < 1e-14 {
        return Err(Error::Geometry(
            "degenerate rhombus: 1/sqrt(lambda+2mu) = 1/sqrt(mu) collapses the frame".into(),
        ));
    }
    let e1 = [alpha, beta];
    let e2 = [beta, alpha];
    let gap = (2.0 / lambda_value).sqrt() * 2.0 * std::f64::consts::PI; // xi_hat - xi
    let (xi1, xi1h) = (0.0, gap);
    let (xi2, xi2h) = (0.5 * gap, 1.5 * gap);

    // Anchor A on {e1.X = xi1} ∩ {e2.X = xi2_hat}; sides advance along the
    // perpendiculars e1_perp, e2_perp by the common step s.
    let det = alpha * alpha - beta * beta; // e2 . e1_perp, nonzero since alpha != ±beta
    let a = solve2(e1, e2, xi1, xi2h)?;
    let s = gap / (beta * beta - alpha * alpha);
    let e1p = [-beta, alpha];
    let e2p = [-alpha, beta];
    let b = [a[0] + s * e1p[0], a[1] + s * e1p[1]];
    let c = [b[0] + s * e2p[0], b[1] + s * e2p[1]];
    let d = [a[0] + s * e2p[0], a[1] + s * e2p[1]];
    let mut vertices = [a, b, c, d];
    if shoelace(&vertices) < 0.0 {
        vertices = [a, d, c, b];
    }
    let rh = Rhombus {
        vertices,
        e1,
        e2,
        xi: (xi1, xi1h, xi2, xi2h),
        area: shoelace(&vertices).abs(),
        theta: (0.0, 0.0),
    };
    debug_assert!(det.abs() > 0.0);
    debug_assert!((rh.area - area).abs() <= 1e-9 * area);
    Ok(rh)
}

/// Intersection of `e1 . X = c1` with `e2 . X = c2`.
fn solve2(e1: [f64; 2], e2: [f64; 2], c1: f64, c2: f64) -> Result<[f64; 2]> {
    let det = e1[0] * e2[1] - e1[1] * e2[0];
    if det.abs() < 1e-300 {
        return Err(Error::Geometry("parallel line families".into()));
    }
    Ok([
        (c1 * e2[1] - c2 * e1[1]) / det,
        (e1[0] * c2 - e2[0] * c1) / det,
    ])
}

fn shoelace(v: &[[f64; 2]; 4]) -> f64 {
    let mut twice = 0.0;
    for i in 0..4 {
        let p = v[i];
        let q = v[(i + 1) % 4];
        twice += p[0] * q[1] - p[1] * q[0];
    }
    0.5 * twice
}

/// Scalar profile of the rhombus eigenfunction `U = (u, u)`:
/// `u = sin(w1 (x+y) - theta1) - sin(w2 (x-y) - theta2)` with
/// `w1 = sqrt(Lambda/(2(lambda+2mu)))`, `w2 = sqrt(Lambda/(2mu))`.
pub fn rhombus_eigenfunction(
    params: &ElasticityParams,
    rh: &Rhombus,
    point: (f64, f64),
) -> Result<(f64, f64)> {
    let (x, y) = point;
    let scale = rh.xi.1;
    if !rh.contains(x, y, 1e-9 * scale.max(1.0)) {
        return Err(Error::OutsideDomain { x, y });
    }
    let f = rhombus_field(params, rh)?;
    Ok(f.eval_raw(x, y))
}

/// The rhombus eigenfunction as a [`VectorField2D`] (for residual checks).
pub fn rhombus_field(params: &ElasticityParams, rh: &Rhombus) -> Result<VectorField2D> {
    let lambda_value = rhombus_eigenvalue(params, rh.area)?;
    let w1 = (lambda_value / (2.0 * params.p_modulus())).sqrt();
    let w2 = (lambda_value / (2.0 * params.mu())).sqrt();
    let (t1, t2) = rh.theta;
    let rh_inside = rh.clone();
    let scale = rh.xi.1;
    Ok(VectorField2D::new(
        move |x, y| {
            let u = (w1 * (x + y) - t1).sin() - (w2 * (x - y) - t2).sin();
            (u, u)
        },
        move |x, y| rh_inside.contains(x, y, 1e-9 * scale.max(1.0)),
    ))
}

/// The Poisson-ratio threshold below which the area-`pi` rhombus beats the
/// disk: `(j_{1,1}^4 - 8 pi^2) / (2 (j_{1,1}^4 - 4 pi^2))`, about 0.3879.
pub fn rhombus_disk_threshold() -> f64 {
    let j2 = j11() * j11();
    let j4 = j2 * j2;
    let pi2 = std::f64::consts::PI.powi(2);
    (j4 - 8.0 * pi2) / (2.0 * (j4 - 4.0 * pi2))
}

// --- rectangles ----------------------------------------------------------

/// A rectangle `(0, L) x (0, ell)` of area `pi`, parametrized by the aspect
/// `t in (0, 1]`: `L = sqrt(pi/t)`, `ell = sqrt(t pi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RectangleSpec {
    /// Aspect parameter in `(0, 1]`.
    pub t: f64,
    /// Long side `sqrt(pi / t)`.
    pub l_side: f64,
    /// Short side `sqrt(t pi)`.
    pub ell: f64,
}

impl RectangleSpec {
    /// Build from the aspect parameter.
    pub fn new(t: f64) -> Result<Self> {
        if !(t > 0.0 && t <= 1.0) {
            return Err(Error::Domain(format!(
                "aspect t must lie in (0, 1], got {t}"
            )));
        }
        let pi = std::f64::consts::PI;
        Ok(Self {
            t,
            l_side: (pi / t).sqrt(),
            ell: (t * pi).sqrt(),
        })
    }
}

/// Diagonal entries and coupling of the 4x4 Rayleigh quotient matrix on the
/// span of the four lowest separable trial fields.
fn qform_entries(a_ratio: f64, t: f64) -> (f64, f64, f64, f64, f64) {
    let pi = std::f64::consts::PI;
    let a1 = pi * (1.0 + a_ratio) * t + pi / t;
    let a2 = 4.0 * pi * (1.0 + a_ratio) * t + 4.0 * pi / t;
    let a3 = pi * t + (1.0 + a_ratio) * pi / t;
    let a4 = 4.0 * pi * t + 4.0 * (1.0 + a_ratio) * pi / t;
    let b = -64.0 * a_ratio / (9.0 * pi);
    (a1, a2, a3, a4, b)
}

/// The 4x4 symmetric matrix of the restricted Rayleigh quotient, in the
/// coordinate order `(alpha1, alpha2, beta1, beta2)`:
/// diagonal `(a1, a2, a3, a4)`, couplings `b` between `alpha1 <-> beta2`
/// and `alpha2 <-> beta1`, zeros elsewhere. After permuting to the pairs
/// `(alpha1, beta2)` and `(alpha2, beta1)` it splits into two 2x2 blocks,
/// so its characteristic polynomial factors as
/// `q2(x) * q1(x) = [(a2-x)(a3-x) - b^2] [(a1-x)(a4-x) - b^2]`.
pub fn rectangle_qform(a_ratio: f64, spec: &RectangleSpec) -> Result<nalgebra::Matrix4<f64>> {
    if !(a_ratio > 0.0) {
        return Err(Error::Domain(format!(
            "a_ratio must be positive, got {a_ratio}"
        )));
    }
    let (a1, a2, a3, a4, b) = qform_entries(a_ratio, spec.t);
    Ok(nalgebra::Matrix4::new(
        a1, 0.0, 0.0, b, //
        0.0, a2, b, 0.0, //
        0.0, b, a3, 0.0, //
        b, 0.0, 0.0, a4,
    ))
}

/// `q1(a, t, x) = (a1 - x)(a4 - x) - b^2`, the quadratic factor carrying
/// the smallest eigenvalue of the 4x4 matrix for `t <= 1`.
pub fn q1_value(a_ratio: f64, t: f64, x: f64) -> Result<f64> {
    if !(a_ratio > 0.0) || !(t > 0.0 && t <= 1.0) {
        return Err(Error::Domain(format!(
            "need a_ratio > 0 and t in (0, 1], got ({a_ratio}, {t})"
        )));
    }
    let (a1, _, _, a4, b) = qform_entries(a_ratio, t);
    Ok((a1 - x) * (a4 - x) - b * b)
}

/// Rayleigh upper bound for the area-`pi` rectangle of aspect `spec.t`:
/// `mu` times the smaller root of `q1`.
pub fn rectangle_upper_bound(params: &ElasticityParams, spec: &RectangleSpec) -> Result<f64> {
    let (a1, _, _, a4, b) = qform_entries(params.a_ratio(), spec.t);
    let half_sum = 0.5 * (a1 + a4);
    let disc = (0.5 * (a1 - a4)).powi(2) + b * b;
    Ok(params.mu() * (half_sum - disc.sqrt()))
}

/// Scan the aspect grid `t in {0.30, 0.31, ..., 1.00}` (plus `t = 2/5`
/// exactly) for a rectangle whose Rayleigh bound undercuts the disk value
/// `mu j_{1,1}^2`. Returns the verdict and the best witness aspect.
pub fn rectangle_beats_disk(params: &ElasticityParams) -> Result<(bool, Option<f64>)> {
    let disk = params.mu() * j11() * j11();
    let mut best: Option<(f64, f64)> = None; // (bound, t)
    let mut ts: Vec<f64> = (30..=100).map(|i| i as f64 / 100.0).collect();
    ts.push(2.0 / 5.0);
    for t in ts {
        let bound = rectangle_upper_bound(params, &RectangleSpec::new(t)?)?;
        if best.map_or(true, |(b, _)| bound < b) {
            best = Some((bound, t));
        }
    }
    let (bound, t) = best.expect("grid non-empty");
    if bound < disk * (1.0 - 1e-12) {
        Ok((true, Some(t)))
    } else {
        Ok((false, None))
    }
}

// --- cuboids -------------------------------------------------------------

/// Upper bound for the cuboid `(0, L) x (0, 1)^{N-1}`:
/// `mu pi^2 (N - 1 + 1/L^2) + (lambda + mu) pi^2 / L^2`.
///
/// The ratio to `mu lambda_1^D = mu pi^2 (N - 1 + 1/L^2)` tends to 1 as
/// `L -> inf`: thin cuboids drive `Lambda / lambda_1^D` down to `mu`.
pub fn cuboid_upper_bound(params: &ElasticityParams, l_side: f64, n_dim: usize) -> Result<f64> {
    if !(l_side >= 1.0) {
        return Err(Error::Domain(format!(
            "cuboid length must be >= 1, got {l_side}"
        )));
    }
    if n_dim < 2 {
        return Err(Error::Domain(format!(
            "dimension must be >= 2, got {n_dim}"
        )));
    }
    let pi2 = std::f64::consts::PI.powi(2);
    let lam1 = pi2 * ((n_dim - 1) as f64 + 1.0 / (l_side * l_side));
    Ok(params.mu() * lam1 + (params.lambda() + params.mu()) * pi2 / (l_side * l_side))
}

/// Scalar Dirichlet eigenvalue `pi^2 (N - 1 + 1/L^2)` of the same cuboid.
pub fn cuboid_lambda1_dirichlet(l_side: f64, n_dim: usize) -> Result<f64> {
    if !(l_side >= 1.0) || n_dim < 2 {
        return Err(Error::Domain("cuboid needs L >= 1 and N >= 2".into()));
    }
    Ok(std::f64::consts::PI.powi(2) * ((n_dim - 1) as f64 + 1.0 / (l_side * l_side)))
}
