//! Smallest eigenpairs of the symmetric pencil `A x = Λ M x` by blocked
//! inverse iteration with Rayleigh-Ritz extraction.
//!
//! The stiffness matrix is factored once (reverse Cuthill-McKee ordering,
//! profile Cholesky); each sweep maps the block through `A^{-1} M`,
//! M-orthonormalizes it, and diagonalizes the small projected matrix.
//! Because the block is M-orthonormal the projected mass matrix is the
//! identity, so the Ritz problem is an ordinary symmetric eigenproblem.
//! Convergence is declared when every requested pair satisfies
//! `‖A v − θ M v‖ ≤ tol · ‖M v‖`.

use crate::assemble::SymmetricSparsePencil;
use crate::sparse::{rcm_order, ProfileCholesky};
use crate::{Error, Result};
use nalgebra::DMatrix;

/// Converged eigenpairs, smallest first.
pub struct EigenResult {
    pub values: Vec<f64>,
    /// `vectors[k]` is the coefficient vector of the k-th mode over the
    /// pencil's degrees of freedom.
    pub vectors: Vec<Vec<f64>>,
    /// Relative residuals `‖A v − θ M v‖ / ‖M v‖` at convergence.
    pub residuals: Vec<f64>,
    /// Relative gap `(Λ_2 − Λ_1) / Λ_1`, infinite if only one pair was
    /// requested. A gap below roughly 1e-3 signals a multiple eigenvalue.
    pub gap: f64,
}

/// Multiplier and increment of the splitmix-style linear congruential
/// generator used for reproducible start blocks.
const LCG_MUL: u64 = 6364136223846793005;
const LCG_INC: u64 = 1442695040888963407;

/// Deterministic uniform samples on `(-1, 1)`.
pub struct DeterministicRng {
    state: u64,
}

impl DeterministicRng {
    pub fn new(seed: u64) -> Self {
        DeterministicRng { state: seed }
    }

    pub fn next_f64(&mut self) -> f64 {
        self.state = self.state.wrapping_mul(LCG_MUL).wrapping_add(LCG_INC);
        ((self.state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
    }
}

/// Solve for the `n_eigs` smallest eigenpairs with the default seed.
pub fn solve_smallest(
    pencil: &SymmetricSparsePencil,
    n_eigs: usize,
    tol: f64,
) -> Result<EigenResult> {
    solve_smallest_seeded(pencil, n_eigs, tol, 0x5eed)
}

const MAX_SWEEPS: usize = 500;

/// Solve for the `n_eigs` smallest eigenpairs of `A x = Λ M x`, seeding the
/// start block from `seed` so that repeated runs are bit-identical.
pub fn solve_smallest_seeded(
    pencil: &SymmetricSparsePencil,
    n_eigs: usize,
    tol: f64,
    seed: u64,
) -> Result<EigenResult> {
    let n = pencil.dof_count;
    if n_eigs == 0 {
        return Err(Error::Solver("asked for zero eigenpairs".into()));
    }
    if n_eigs > n {
        return Err(Error::Solver(format!(
            "asked for {n_eigs} eigenpairs of a {n}-dof pencil"
        )));
    }
    let block = (n_eigs + 2).min(n);
    let chol = ProfileCholesky::factor(&pencil.a, rcm_order(&pencil.a))?;

    let mut rng = DeterministicRng::new(seed);
    let mut q: Vec<Vec<f64>> = (0..block)
        .map(|_| (0..n).map(|_| rng.next_f64()).collect())
        .collect();
    let mut mq: Vec<Vec<f64>> = vec![vec![0.0; n]; block];
    m_orthonormalize(pencil, &mut q, &mut mq, &mut rng)?;

    let mut theta = vec![0.0f64; block];
    let mut work = vec![0.0f64; n];
    for _sweep in 0..MAX_SWEEPS {
        // Power step through A^{-1} M.
        for j in 0..block {
            pencil.m.matvec(&q[j], &mut work);
            q[j] = chol.solve(&work);
        }
        m_orthonormalize(pencil, &mut q, &mut mq, &mut rng)?;

        // Rayleigh-Ritz on the M-orthonormal block: project A, diagonalize,
        // and rotate the block into the Ritz basis.
        let mut aq: Vec<Vec<f64>> = vec![vec![0.0; n]; block];
        for j in 0..block {
            pencil.a.matvec(&q[j], &mut aq[j]);
        }
        let mut projected = DMatrix::<f64>::zeros(block, block);
        for i in 0..block {
            for j in i..block {
                let v = dot(&q[i], &aq[j]);
                projected[(i, j)] = v;
                projected[(j, i)] = v;
            }
        }
        let eig = projected.symmetric_eigen();
        let mut order: Vec<usize> = (0..block).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());
        let mut rotated: Vec<Vec<f64>> = vec![vec![0.0; n]; block];
        for (k, &col) in order.iter().enumerate() {
            theta[k] = eig.eigenvalues[col];
            for j in 0..block {
                let s = eig.eigenvectors[(j, col)];
                if s != 0.0 {
                    axpy(s, &q[j], &mut rotated[k]);
                }
            }
        }
        q = rotated;

        // Residual check on the requested pairs.
        let mut residuals = vec![0.0f64; n_eigs];
        let mut all_converged = true;
        for k in 0..n_eigs {
            pencil.a.matvec(&q[k], &mut work);
            let mut mv = vec![0.0f64; n];
            pencil.m.matvec(&q[k], &mut mv);
            let mut num = 0.0f64;
            let mut den = 0.0f64;
            for i in 0..n {
                let r = work[i] - theta[k] * mv[i];
                num += r * r;
                den += mv[i] * mv[i];
            }
            residuals[k] = (num / den.max(1e-300)).sqrt();
            if !(residuals[k] <= tol) {
                all_converged = false;
            }
        }
        if all_converged {
            let values: Vec<f64> = theta[..n_eigs].to_vec();
            let gap = if n_eigs >= 2 {
                (values[1] - values[0]) / values[0]
            } else {
                f64::INFINITY
            };
            return Ok(EigenResult {
                values,
                vectors: q.into_iter().take(n_eigs).collect(),
                residuals,
                gap,
            });
        }
        // Re-establish M-orthonormality lost in the rotation before the
        // next sweep (the rotation is orthogonal only up to rounding).
        m_orthonormalize(pencil, &mut q, &mut mq, &mut rng)?;
    }
    Err(Error::Solver(format!(
        "inverse iteration did not reach tol {tol} within {MAX_SWEEPS} sweeps"
    )))
}

/// Modified Gram-Schmidt in the M inner product, caching `M q_j` so each
/// column needs one mass product. Columns that collapse numerically are
/// replaced by fresh random vectors and re-orthonormalized.
fn m_orthonormalize(
    pencil: &SymmetricSparsePencil,
    q: &mut [Vec<f64>],
    mq: &mut [Vec<f64>],
    rng: &mut DeterministicRng,
) -> Result<()> {
    for j in 0..q.len() {
        for attempt in 0..3 {
            // Two orthogonalization passes control cancellation.
            for _ in 0..2 {
                for i in 0..j {
                    let c = dot(&mq[i], &q[j]);
                    if c != 0.0 {
                        let (qi, qj) = borrow_two(q, i, j);
                        axpy(-c, qi, qj);
                    }
                }
            }
            pencil.m.matvec(&q[j], &mut mq[j]);
            let norm2 = dot(&q[j], &mq[j]);
            if norm2 > 1e-250 {
                let inv = 1.0 / norm2.sqrt();
                for v in q[j].iter_mut() {
                    *v *= inv;
                }
                for v in mq[j].iter_mut() {
                    *v *= inv;
                }
                break;
            }
            if attempt == 2 {
                return Err(Error::Solver(
                    "orthonormalization collapsed: mass matrix may be singular".into(),
                ));
            }
            for v in q[j].iter_mut() {
                *v = rng.next_f64();
            }
        }
    }
    Ok(())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Split borrow of two distinct columns.
fn borrow_two(q: &mut [Vec<f64>], i: usize, j: usize) -> (&Vec<f64>, &mut Vec<f64>) {
    debug_assert!(i < j);
    let (head, tail) = q.split_at_mut(j);
    (&head[i], &mut tail[0])
}
