//! Exact first Dirichlet eigenvalue of the Lamé system on the unit disk.
//!
//! Separation in polar coordinates via the Helmholtz split
//! `u = grad psi1 + curl psi2` reduces the boundary condition on each
//! angular mode `k >= 1` to a transcendental equation in the frequency
//! `omega = sqrt(Lambda)`:
//!
//! ```text
//!   F_k(w) =  (k/(a1 w)) J_k(a1 w) J_{k-1}(a2 w)
//!           + (k/(a2 w)) J_{k-1}(a1 w) J_k(a2 w)
//!           -             J_{k-1}(a1 w) J_{k-1}(a2 w),
//! ```
//!
//! with `a1 = 1/sqrt(lambda + 2 mu)`, `a2 = 1/sqrt(mu)`. The shear-only
//! mode `u = (-sin t, cos t) J_1(j_{1,1} r)` is always an eigenfunction
//! with `Lambda = mu j_{1,1}^2`; whether some `F_k` root undercuts it is
//! governed by the Poisson-ratio threshold [`nu_star`]: above the threshold
//! the first eigenvalue is `mu j_{1,1}^2` and simple, below it the smallest
//! `F_k` root wins and the eigenvalue is (at least) double, at the
//! threshold it is (at least) triple.

use std::sync::OnceLock;

use crate::bessel::{bessel_deriv_zero, bessel_j_over_x, bessel_zero, jn, jn_deriv};
use crate::params::ElasticityParams;
use crate::roots::{find_root_bracketed, BracketedRoot};
use crate::{Error, Result};

/// Spectral regime of the disk's first eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `nu > nu*`: `Lambda = mu j_{1,1}^2`, simple.
    SimpleBranch,
    /// `nu < nu*`: `Lambda = omega^2` for the smallest transcendental root,
    /// at least double.
    TranscendentalDouble,
    /// `|nu - nu*| <= NU_CLASS_TOL`: the branches collide, at least triple.
    TripleAtThreshold,
}

/// First eigenvalue of the disk together with how it was obtained.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskEigenvalue {
    /// The eigenvalue `Lambda`.
    pub value: f64,
    /// Branch classification.
    pub regime: Regime,
    /// Minimizing angular mode in the transcendental regime.
    pub mode_k: Option<usize>,
    /// `omega` with `Lambda = omega^2` when a transcendental root was taken.
    pub omega_root: Option<f64>,
}

/// Eigenfunction selector for [`eigenfunction`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// The normalized shear mode of the simple regime.
    Simple,
    /// Transcendental regime, potentials `(J_k cos k t, J_k sin k t)`.
    DoubleCos,
    /// Transcendental regime, potentials `(J_k sin k t, J_k cos k t)`.
    DoubleSin,
}

/// Width of the triple-point classification band around `nu*`.
pub const NU_CLASS_TOL: f64 = 1e-9;

/// Default angular-mode cap for the transcendental root scan.
pub const DEFAULT_K_MAX: usize = 20;

/// The Poisson-ratio threshold
/// `nu* = (j_{1,1}^2 - 2 j'_{1,1}^2) / (2 j_{1,1}^2 - 2 j'_{1,1}^2)`,
/// approximately 0.349895.
pub fn nu_star() -> f64 {
    static NU_STAR: OnceLock<f64> = OnceLock::new();
    *NU_STAR.get_or_init(|| {
        let j = bessel_zero(1, 1).expect("j_{1,1} is tabulated").value;
        let jp = bessel_deriv_zero(1, 1)
            .expect("j'_{1,1} is tabulated")
            .value;
        (j * j - 2.0 * jp * jp) / (2.0 * j * j - 2.0 * jp * jp)
    })
}

/// `j_{1,1}`, the first positive zero of `J_1`.
pub fn j11() -> f64 {
    static J11: OnceLock<f64> = OnceLock::new();
    *J11.get_or_init(|| bessel_zero(1, 1).expect("j_{1,1} is tabulated").value)
}

/// Classify the regime of `params` relative to [`nu_star`].
pub fn classify(params: &ElasticityParams) -> Regime {
    let nu = params.nu();
    let star = nu_star();
    if (nu - star).abs() <= NU_CLASS_TOL {
        Regime::TripleAtThreshold
    } else if nu > star {
        Regime::SimpleBranch
    } else {
        Regime::TranscendentalDouble
    }
}

/// `F_k(omega)`, the mode-`k` transcendental function whose first positive
/// root below `sqrt(mu) j_{1,1}` determines the eigenvalue in the double
/// regime. Smooth and positive as `omega -> 0+`.
pub fn transcendental_f(k: usize, omega: f64, params: &ElasticityParams) -> Result<f64> {
    Ok(transcendental_f_with_scale(k, omega, params)?.0)
}

/// `F_k` together with the magnitude scale of its three summands.
///
/// As `omega -> 0+` the summands cancel at relative depth `omega^2` while
/// each carries ~`k` ulps of error from the series powers, so the sign of
/// the sum is only trustworthy when `|F_k|` clears a noise floor
/// proportional to the returned scale.
fn transcendental_f_with_scale(
    k: usize,
    omega: f64,
    params: &ElasticityParams,
) -> Result<(f64, f64)> {
    check_mode_freq(k, omega)?;
    let w = params.wave_scalings();
    let (x1, x2) = (w.a1 * omega, w.a2 * omega);
    let kk = k as f64;
    let t1 = kk * bessel_j_over_x(k, x1)? * jn(k - 1, x2);
    let t2 = kk * jn(k - 1, x1) * bessel_j_over_x(k, x2)?;
    let t3 = jn(k - 1, x1) * jn(k - 1, x2);
    Ok((t1 + t2 - t3, t1.abs() + t2.abs() + t3.abs()))
}

/// Determinant form `a1 a2 w^2 J_k'(a1 w) J_k'(a2 w) - k^2 J_k(a1 w) J_k(a2 w)`.
///
/// Cross-check only: identically equal to `-a1 a2 w^2 * F_k(w)`, so its
/// roots coincide with those of [`transcendental_f`] while its sign is
/// flipped.
pub fn transcendental_det(k: usize, omega: f64, params: &ElasticityParams) -> Result<f64> {
    check_mode_freq(k, omega)?;
    let w = params.wave_scalings();
    let (x1, x2) = (w.a1 * omega, w.a2 * omega);
    let kk = k as f64;
    Ok(x1 * x2 * jn_deriv(k, x1) * jn_deriv(k, x2) - kk * kk * jn(k, x1) * jn(k, x2))
}

/// Raised-index form of the transcendental function, using `J_{k+1}` in
/// place of `J_{k-1}`. Cross-check only: identically equal to `F_k`.
pub fn transcendental_raised(k: usize, omega: f64, params: &ElasticityParams) -> Result<f64> {
    check_mode_freq(k, omega)?;
    let w = params.wave_scalings();
    let (x1, x2) = (w.a1 * omega, w.a2 * omega);
    let kk = k as f64;
    Ok(
        kk * bessel_j_over_x(k, x1)? * jn(k + 1, x2) + kk * jn(k + 1, x1) * bessel_j_over_x(k, x2)?
            - jn(k + 1, x1) * jn(k + 1, x2),
    )
}

fn check_mode_freq(k: usize, omega: f64) -> Result<()> {
    if k == 0 || k + 1 > crate::bessel::MAX_ORDER {
        return Err(Error::Domain(format!(
            "transcendental mode index must satisfy 1 <= k <= {}, got {k}",
            crate::bessel::MAX_ORDER - 1
        )));
    }
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::Domain(format!(
            "frequency must be positive and finite, got {omega}"
        )));
    }
    Ok(())
}

/// First positive root of `F_k` below `sqrt(mu) j_{1,1}`, if any.
///
/// Scans `(1e-6, sqrt(mu) j_{1,1})` at step 1e-3 (appending the right
/// endpoint so roots hugging the candidate are not missed), then refines
/// the first sign change by Brent to 1e-12.
pub fn first_mode_root(k: usize, params: &ElasticityParams) -> Result<Option<BracketedRoot>> {
    let omega_hi = params.mu().sqrt() * j11() - 1e-9;
    let f = |w: f64| transcendental_f(k, w, params).expect("validated mode and frequency");
    let mut lo = 1e-6;
    if lo >= omega_hi {
        return Err(Error::Domain(format!(
            "scan interval empty; mu = {} too small",
            params.mu()
        )));
    }
    // Keep at least a few hundred samples even when mu shrinks the interval.
    let step = 1e-3f64.min((omega_hi - lo) / 400.0);
    // A sample's sign only counts when |F_k| clears the rounding noise of
    // its summands; near the left endpoint the summands cancel at relative
    // depth omega^2 and the computed sign of the ~1e-250 remainder is
    // meaningless. No root hides there: a root of F_k is a disk eigenvalue,
    // and those satisfy omega > sqrt(mu) j_{0,1}, where samples adjacent to
    // the crossing clear this floor by many orders of magnitude.
    let noise_floor = 200.0 * k as f64 * f64::EPSILON;
    let resolved = |value: f64, scale: f64| value != 0.0 && value.abs() > noise_floor * scale;
    let (mut flo, mut slo) = transcendental_f_with_scale(k, lo, params)?;
    loop {
        let hi = (lo + step).min(omega_hi);
        let (fhi, shi) = transcendental_f_with_scale(k, hi, params)?;
        if resolved(flo, slo) && resolved(fhi, shi) && flo.signum() != fhi.signum() {
            let root = find_root_bracketed(f, lo, hi, 1e-12)?;
            return Ok(Some(root));
        }
        if hi >= omega_hi {
            return Ok(None);
        }
        lo = hi;
        (flo, slo) = (fhi, shi);
    }
}

/// Assert the absence of transcendental roots below the simple-branch
/// candidate: scans `F_k` on `(1e-6, sqrt(mu) j_{1,1} - 1e-9)` at step 1e-3
/// for every `k <= k_max` and reports whether no sign change occurred.
pub fn no_root_scan(params: &ElasticityParams, k_max: usize) -> Result<bool> {
    for k in 1..=k_max.max(1) {
        if first_mode_root(k, params)?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// First eigenvalue of the unit disk for the given material.
///
/// * `nu > nu* + tol`: `Lambda = mu j_{1,1}^2`, [`Regime::SimpleBranch`];
/// * `nu < nu* - tol`: minimum over `k = 1..=k_max` of the first `F_k`
///   root `omega`, `Lambda = omega^2`, [`Regime::TranscendentalDouble`];
/// * otherwise [`Regime::TripleAtThreshold`] with `Lambda = mu j_{1,1}^2`.
///
/// In the double regime a missing root would indicate a scan bug (the mode
/// `k = 1` provably changes sign below the candidate), so it is an error,
/// never a silent fallback.
pub fn first_eigenvalue(params: &ElasticityParams, k_max: usize) -> Result<DiskEigenvalue> {
    let j = j11();
    let simple_value = params.mu() * j * j;
    match classify(params) {
        Regime::SimpleBranch => Ok(DiskEigenvalue {
            value: simple_value,
            regime: Regime::SimpleBranch,
            mode_k: None,
            omega_root: None,
        }),
        Regime::TripleAtThreshold => Ok(DiskEigenvalue {
            value: simple_value,
            regime: Regime::TripleAtThreshold,
            mode_k: Some(1),
            omega_root: Some(simple_value.sqrt()),
        }),
        Regime::TranscendentalDouble => {
            let mut best: Option<(usize, BracketedRoot)> = None;
            for k in 1..=k_max.max(1) {
                if let Some(root) = first_mode_root(k, params)? {
                    let better = best.as_ref().map_or(true, |(_, b)| root.value < b.value);
                    if better {
                        best = Some((k, root));
                    }
                }
            }
            let (mode_k, root) = best.ok_or_else(|| {
                Error::BracketScanFailed(format!(
                    "no transcendental root found for nu = {} < nu*; scan grid bug",
                    params.nu()
                ))
            })?;
            Ok(DiskEigenvalue {
                value: root.value * root.value,
                regime: Regime::TranscendentalDouble,
                mode_k: Some(mode_k),
                omega_root: Some(root.value),
            })
        }
    }
}

/// A planar vector field given by an evaluator, tagged with its domain.
pub struct VectorField2D {
    eval: Box<dyn Fn(f64, f64) -> (f64, f64) + Send + Sync>,
    inside: Box<dyn Fn(f64, f64) -> bool + Send + Sync>,
}

impl VectorField2D {
    /// Wrap an evaluator and a membership test.
    pub fn new(
        eval: impl Fn(f64, f64) -> (f64, f64) + Send + Sync + 'static,
        inside: impl Fn(f64, f64) -> bool + Send + Sync + 'static,
    ) -> Self {
        Self {
            eval: Box::new(eval),
            inside: Box::new(inside),
        }
    }

    /// Evaluate at a point of the domain.
    pub fn eval(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        if !(self.inside)(x, y) {
            return Err(Error::OutsideDomain { x, y });
        }
        Ok((self.eval)(x, y))
    }

    /// Evaluate the defining formula without the membership check (the
    /// closed forms used here extend smoothly past the boundary; finite
    /// differences near the boundary rely on that).
    pub fn eval_raw(&self, x: f64, y: f64) -> (f64, f64) {
        (self.eval)(x, y)
    }

    /// Domain membership test.
    pub fn contains(&self, x: f64, y: f64) -> bool {
        (self.inside)(x, y)
    }
}

impl std::fmt::Debug for VectorField2D {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("VectorField2D {{ .. }}")
    }
}

/// Eigenfunction evaluator for a disk eigenvalue.
///
/// * [`Branch::Simple`] (regime `SimpleBranch` only): the divergence-free,
///   L2-normalized field `alpha (-sin t, cos t) J_1(j_{1,1} r)` with
///   `alpha = 1/(sqrt(pi) |J_0(j_{1,1})|)`.
/// * [`Branch::DoubleCos`] / [`Branch::DoubleSin`] (regime
///   `TranscendentalDouble` only): the two independent unnormalized fields
///   `grad psi1 + curl psi2` built on the minimizing mode.
pub fn eigenfunction(
    params: &ElasticityParams,
    eig: &DiskEigenvalue,
    which: Branch,
) -> Result<VectorField2D> {
    let inside = |x: f64, y: f64| x * x + y * y <= 1.0 + 1e-12;
    match (which, eig.regime) {
        (Branch::Simple, Regime::SimpleBranch) => {
            let j = j11();
            let alpha = 1.0 / (std::f64::consts::PI.sqrt() * jn(0, j).abs());
            Ok(VectorField2D::new(
                move |x, y| {
                    let r = x.hypot(y);
                    // (-sin t, cos t) J_1(j r) = (-y, x) * J_1(j r)/r
                    let factor = alpha * j * bessel_j_over_x(1, j * r).expect("finite radius");
                    (-y * factor, x * factor)
                },
                inside,
            ))
        }
        (Branch::DoubleCos | Branch::DoubleSin, Regime::TranscendentalDouble) => {
            let k = eig
                .mode_k
                .ok_or_else(|| Error::RegimeMismatch("double regime lacks mode_k".into()))?;
            let (_, o1, o2) = params.wave_numbers(eig.value)?;
            // Potential amplitudes chosen so the boundary trace vanishes
            // identically in the radial component and proportionally to the
            // transcendental function in the tangential one.
            let (amp1, amp2) = (k as f64 * jn(k, o2), o1 * jn_deriv(k, o1));
            let (a, b) = match which {
                Branch::DoubleCos => (amp1, -amp2),
                Branch::DoubleSin => (amp1, amp2),
                Branch::Simple => unreachable!(),
            };
            let cos_branch = which == Branch::DoubleCos;
            Ok(VectorField2D::new(
                move |x, y| {
                    let r = x.hypot(y);
                    let t = y.atan2(x);
                    let (st, ct) = t.sin_cos();
                    let (skt, ckt) = (k as f64 * t).sin_cos();
                    let kf = k as f64;
                    let dj1 = jn_deriv(k, o1 * r);
                    let dj2 = jn_deriv(k, o2 * r);
                    // k J_k(o r)/r, finite at the origin.
                    let kj1r = kf * o1 * bessel_j_over_x(k, o1 * r).expect("finite radius");
                    let kj2r = kf * o2 * bessel_j_over_x(k, o2 * r).expect("finite radius");
                    if cos_branch {
                        // psi1 = a J_k(o1 r) cos kt, psi2 = b J_k(o2 r) sin kt
                        let u1 = a * (o1 * ct * ckt * dj1 + st * skt * kj1r)
                            + b * (o2 * st * skt * dj2 + ct * ckt * kj2r);
                        let u2 = a * (o1 * st * ckt * dj1 - ct * skt * kj1r)
                            + b * (-o2 * ct * skt * dj2 + st * ckt * kj2r);
                        (u1, u2)
                    } else {
                        // psi1 = a J_k(o1 r) sin kt, psi2 = b J_k(o2 r) cos kt
                        let u1 = a * (o1 * ct * skt * dj1 - st * ckt * kj1r)
                            + b * (o2 * st * ckt * dj2 - ct * skt * kj2r);
                        let u2 = a * (o1 * st * skt * dj1 + ct * ckt * kj1r)
                            + b * (-o2 * ct * ckt * dj2 - st * skt * kj2r);
                        (u1, u2)
                    }
                },
                inside,
            ))
        }
        (b, r) => Err(Error::RegimeMismatch(format!(
            "branch {b:?} is not available in regime {r:?}"
        ))),
    }
}

/// Pointwise residual of `-mu Lap u - (lambda+mu) grad(div u) - Lambda u`,
/// by nested central differences with `h = 1e-4`.
///
/// The point must lie strictly inside the field's domain; the stencil uses
/// the formula's smooth extension, so points near the boundary are fine.
pub fn pde_residual(
    field: &VectorField2D,
    params: &ElasticityParams,
    lambda_value: f64,
    point: (f64, f64),
) -> Result<(f64, f64)> {
    let (x, y) = point;
    if !field.contains(x, y) {
        return Err(Error::OutsideDomain { x, y });
    }
    let h = 1e-4;
    let div = |x: f64, y: f64| {
        let (u1p, _) = field.eval_raw(x + h, y);
        let (u1m, _) = field.eval_raw(x - h, y);
        let (_, u2p) = field.eval_raw(x, y + h);
        let (_, u2m) = field.eval_raw(x, y - h);
        (u1p - u1m + u2p - u2m) / (2.0 * h)
    };
    let (u1, u2) = field.eval_raw(x, y);
    let (e1, e2) = field.eval_raw(x + h, y);
    let (w1, w2) = field.eval_raw(x - h, y);
    let (n1, n2) = field.eval_raw(x, y + h);
    let (s1, s2) = field.eval_raw(x, y - h);
    let lap1 = (e1 + w1 + n1 + s1 - 4.0 * u1) / (h * h);
    let lap2 = (e2 + w2 + n2 + s2 - 4.0 * u2) / (h * h);
    let gdx = (div(x + h, y) - div(x - h, y)) / (2.0 * h);
    let gdy = (div(x, y + h) - div(x, y - h)) / (2.0 * h);
    let lp = params.lambda() + params.mu();
    Ok((
        -params.mu() * lap1 - lp * gdx - lambda_value * u1,
        -params.mu() * lap2 - lp * gdy - lambda_value * u2,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p(nu: f64) -> ElasticityParams {
        ElasticityParams::from_poisson(nu, 1.0).unwrap()
    }

    #[test]
    fn nu_star_value() {
        assert_relative_eq!(nu_star(), 0.349895, epsilon = 1e-6);
        assert!(nu_star() > 0.0 && nu_star() < 0.5);
        // At nu = nu*, the frequency ratio equals j'_{1,1}/j_{1,1}.
        let star = p(nu_star());
        let expected = bessel_deriv_zero(1, 1).unwrap().value / j11();
        assert_relative_eq!(star.wave_scalings().omega_ratio, expected, epsilon = 1e-10);
    }

    #[test]
    fn classification_bands() {
        assert_eq!(classify(&p(0.40)), Regime::SimpleBranch);
        assert_eq!(classify(&p(0.30)), Regime::TranscendentalDouble);
        assert_eq!(classify(&p(nu_star())), Regime::TripleAtThreshold);
        assert_eq!(
            classify(&p(nu_star() + 0.5 * NU_CLASS_TOL)),
            Regime::TripleAtThreshold
        );
        assert_eq!(
            classify(&p(nu_star() + 10.0 * NU_CLASS_TOL)),
            Regime::SimpleBranch
        );
    }

    #[test]
    fn simple_branch_value_and_scan() {
        for &nu in &[0.36, 0.40, 0.45, 0.49] {
            let eig = first_eigenvalue(&p(nu), DEFAULT_K_MAX).unwrap();
            assert_eq!(eig.regime, Regime::SimpleBranch);
            assert_relative_eq!(eig.value, j11() * j11(), max_relative = 1e-12);
            assert!(no_root_scan(&p(nu), DEFAULT_K_MAX).unwrap());
        }
    }

    #[test]
    fn transcendental_small_frequency_positivity() {
        for k in 1..=10 {
            let f = transcendental_f(k, 1e-3, &p(0.3)).unwrap();
            assert!(f > 0.0, "F_{k}(1e-3) = {f} should be positive");
        }
    }

    #[test]
    fn f1_nonpositive_at_candidate_below_threshold() {
        let f = transcendental_f(1, j11(), &p(0.3)).unwrap();
        assert!(f <= 0.0, "F_1(j11) = {f}");
    }

    #[test]
    fn double_regime_basics() {
        let eig = first_eigenvalue(&p(0.3), DEFAULT_K_MAX).unwrap();
        assert_eq!(eig.regime, Regime::TranscendentalDouble);
        assert!(eig.value < j11() * j11());
        let k = eig.mode_k.unwrap();
        let w = eig.omega_root.unwrap();
        let res = transcendental_f(k, w, &p(0.3)).unwrap();
        assert!(res.abs() <= 1e-9, "root residual {res}");
    }

    #[test]
    fn cross_check_forms_are_exact_multiples() {
        let params = p(0.25);
        let w = params.wave_scalings();
        for k in 1..=6 {
            for &omega in &[0.5, 1.5, 2.5, 3.5] {
                let f2 = transcendental_f(k, omega, &params).unwrap();
                let f1 = transcendental_det(k, omega, &params).unwrap();
                let f3 = transcendental_raised(k, omega, &params).unwrap();
                let scale = f2.abs().max(1e-6);
                assert!(
                    (f1 + w.a1 * w.a2 * omega * omega * f2).abs() <= 1e-12 * scale.max(f1.abs()),
                    "det form mismatch at k={k}, omega={omega}"
                );
                assert!(
                    (f3 - f2).abs() <= 1e-12 * scale,
                    "raised form mismatch at k={k}, omega={omega}"
                );
            }
        }
    }

    #[test]
    fn psi_form_sign_agreement_below_candidate() {
        // psi_k(a1 w) psi_k(a2 w) - k^2 = 0 is an equivalent root condition:
        // it equals det/(J_k J_k) with J_k J_k > 0 below the candidate, while
        // F_k = -det/(a1 a2 w^2). The conversion factor is negative, so on
        // (0, root) the two forms carry opposite signs and flip together.
        let params = p(0.3);
        let w = params.wave_scalings();
        let k = 1;
        let root = first_mode_root(k, &params).unwrap().unwrap().value;
        for i in 1..10 {
            let omega = root * i as f64 / 10.0;
            let f = transcendental_f(k, omega, &params).unwrap();
            let psi_form = crate::bessel::psi(k, w.a1 * omega).unwrap()
                * crate::bessel::psi(k, w.a2 * omega).unwrap()
                - (k * k) as f64;
            assert_eq!(psi_form.signum(), -f.signum(), "omega = {omega}");
        }
    }

    #[test]
    fn lambda_monotone_in_lambda_coefficient() {
        let mut prev = 0.0;
        for &nu in &[0.1, 0.2, 0.3, 0.34] {
            let val = first_eigenvalue(&p(nu), DEFAULT_K_MAX).unwrap().value;
            assert!(
                val > prev,
                "Lambda should increase with nu: {val} after {prev}"
            );
            prev = val;
        }
    }

    #[test]
    fn homogeneity_in_the_coefficient_pair() {
        for &nu in &[0.2, 0.3, 0.42] {
            let one = ElasticityParams::from_poisson(nu, 1.0).unwrap();
            let two = ElasticityParams::from_poisson(nu, 2.0).unwrap(); // doubles mu and lambda
            let e1 = first_eigenvalue(&one, DEFAULT_K_MAX).unwrap();
            let e2 = first_eigenvalue(&two, DEFAULT_K_MAX).unwrap();
            assert_relative_eq!(e2.value, 2.0 * e1.value, max_relative = 1e-9);
        }
    }

    #[test]
    fn continuity_across_the_threshold() {
        let star = nu_star();
        let simple = j11() * j11();
        let mut prev_gap = f64::INFINITY;
        for &d in &[1e-2, 1e-3, 1e-4] {
            let eig = first_eigenvalue(&p(star - d), DEFAULT_K_MAX).unwrap();
            let gap = simple - eig.value;
            assert!(gap > 0.0 && gap < prev_gap, "gap {gap} should shrink");
            prev_gap = gap;
        }
        assert!(
            prev_gap < 1e-2,
            "at nu* - 1e-4 the branches differ by O(1e-3): {prev_gap}"
        );
    }

    #[test]
    fn simple_eigenfunction_boundary_and_normalization() {
        let params = p(0.4);
        let eig = first_eigenvalue(&params, DEFAULT_K_MAX).unwrap();
        let u = eigenfunction(&params, &eig, Branch::Simple).unwrap();
        for i in 0..32 {
            let t = 2.0 * std::f64::consts::PI * i as f64 / 32.0;
            let (u1, u2) = u.eval(t.cos(), t.sin()).unwrap();
            assert!(u1.hypot(u2) <= 1e-12, "boundary value {}", u1.hypot(u2));
        }
        // L2 norm by midpoint quadrature in polar coordinates.
        let (nr, nt) = (400, 400);
        let mut norm2 = 0.0;
        for i in 0..nr {
            let r = (i as f64 + 0.5) / nr as f64;
            for j in 0..nt {
                let t = 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / nt as f64;
                let (u1, u2) = u.eval_raw(r * t.cos(), r * t.sin());
                norm2 += (u1 * u1 + u2 * u2) * r;
            }
        }
        norm2 *= (1.0 / nr as f64) * (2.0 * std::f64::consts::PI / nt as f64);
        assert_relative_eq!(norm2, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn double_eigenfunction_boundary_vanishes() {
        let params = p(0.3);
        let eig = first_eigenvalue(&params, DEFAULT_K_MAX).unwrap();
        for which in [Branch::DoubleCos, Branch::DoubleSin] {
            let u = eigenfunction(&params, &eig, which).unwrap();
            for i in 0..64 {
                let t = 2.0 * std::f64::consts::PI * i as f64 / 64.0;
                let (u1, u2) = u.eval(t.cos(), t.sin()).unwrap();
                assert!(
                    u1.hypot(u2) <= 1e-9,
                    "{which:?} boundary value {} at t={t}",
                    u1.hypot(u2)
                );
            }
        }
    }

    #[test]
    fn branch_selector_must_match_regime() {
        let simple = first_eigenvalue(&p(0.45), DEFAULT_K_MAX).unwrap();
        let double = first_eigenvalue(&p(0.2), DEFAULT_K_MAX).unwrap();
        assert!(matches!(
            eigenfunction(&p(0.45), &simple, Branch::DoubleCos),
            Err(Error::RegimeMismatch(_))
        ));
        assert!(matches!(
            eigenfunction(&p(0.2), &double, Branch::Simple),
            Err(Error::RegimeMismatch(_))
        ));
    }

    #[test]
    fn pde_residual_simple_branch() {
        let params = p(0.4);
        let eig = first_eigenvalue(&params, DEFAULT_K_MAX).unwrap();
        let u = eigenfunction(&params, &eig, Branch::Simple).unwrap();
        let (r1, r2) = pde_residual(&u, &params, eig.value, (0.3, 0.2)).unwrap();
        assert!(
            r1.hypot(r2) <= 1e-4 * eig.value,
            "residual {}",
            r1.hypot(r2)
        );
        // Wrong eigenvalue shifts the residual by exactly u at the point.
        let (w1, w2) = pde_residual(&u, &params, eig.value + 1.0, (0.3, 0.2)).unwrap();
        let (u1, u2) = u.eval(0.3, 0.2).unwrap();
        assert_relative_eq!(w1 - r1, -u1, max_relative = 1e-9);
        assert_relative_eq!(w2 - r2, -u2, max_relative = 1e-9);
        // Outside point is rejected.
        assert!(matches!(
            pde_residual(&u, &params, eig.value, (1.2, 0.0)),
            Err(Error::OutsideDomain { .. })
        ));
    }

    #[test]
    fn pde_residual_double_branch() {
        let params = p(0.25);
        let eig = first_eigenvalue(&params, DEFAULT_K_MAX).unwrap();
        for which in [Branch::DoubleCos, Branch::DoubleSin] {
            let u = eigenfunction(&params, &eig, which).unwrap();
            // Scale tolerance by the (unnormalized) field size.
            let (u1, u2) = u.eval(0.35, -0.15).unwrap();
            let scale = u1.hypot(u2).max(0.1);
            let (r1, r2) = pde_residual(&u, &params, eig.value, (0.35, -0.15)).unwrap();
            assert!(
                r1.hypot(r2) <= 1e-4 * eig.value * scale.max(1.0),
                "{which:?} residual {}",
                r1.hypot(r2)
            );
        }
    }

    #[test]
    fn zero_field_zero_residual() {
        let params = p(0.4);
        let z = VectorField2D::new(|_, _| (0.0, 0.0), |x, y| x * x + y * y <= 1.0);
        let (r1, r2) = pde_residual(&z, &params, 10.0, (0.1, 0.1)).unwrap();
        assert_eq!((r1, r2), (0.0, 0.0));
    }
}
