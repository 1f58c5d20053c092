//! Assembly of the elastic stiffness/mass pencil on quadratic triangles.
//!
//! For a displacement field u = (u_1, u_2) the bilinear forms are
//!
//! ```text
//! a(u, v) = ∫ μ ∇u : ∇v + (λ + μ) (div u)(div v)
//! m(u, v) = ∫ u · v
//! ```
//!
//! Homogeneous Dirichlet conditions are imposed by elimination: boundary
//! nodes simply receive no degrees of freedom, so the assembled pencil acts
//! on interior nodes only and both matrices are positive definite whenever
//! μ > 0 and λ + μ > 0.

use crate::mesh::Mesh;
use crate::p2::{shape_gradients, shape_values, QUADRATURE};
use crate::sparse::CsrMatrix;
use crate::{Error, Result};
use lame_core::params::ElasticityParams;

/// Stiffness/mass pair restricted to interior nodes, together with the map
/// from degrees of freedom back to (node, component) pairs.
pub struct SymmetricSparsePencil {
    pub a: CsrMatrix,
    pub m: CsrMatrix,
    pub dof_count: usize,
    /// `dof_nodes[dof] = (node, component)`; components interleave as
    /// `2 * interior_index + component`.
    pub dof_nodes: Vec<(usize, usize)>,
}

/// Geometry of one triangle: physical shape gradients and the scale factor
/// turning reference weights into physical measure.
struct ElementGeometry {
    /// `grads[q][i]` = gradient of shape i at quadrature point q.
    grads: [[[f64; 2]; 6]; 6],
    /// `values[q][i]` = value of shape i at quadrature point q.
    values: [[f64; 6]; 6],
    /// Physical area (all maps here are affine, so it is constant).
    area: f64,
}

fn element_geometry(mesh: &Mesh, tri: usize) -> Result<ElementGeometry> {
    let [v0, v1, v2] = mesh.triangles[tri];
    let p0 = mesh.vertices[v0];
    let p1 = mesh.vertices[v1];
    let p2 = mesh.vertices[v2];
    let j = [
        [p1[0] - p0[0], p2[0] - p0[0]],
        [p1[1] - p0[1], p2[1] - p0[1]],
    ];
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    if det <= 0.0 {
        return Err(Error::Assembly(format!(
            "triangle {tri} has nonpositive Jacobian {det}"
        )));
    }
    // J^{-T} columns for the gradient push-forward g = J^{-T} ĝ.
    let jinv_t = [
        [j[1][1] / det, -j[1][0] / det],
        [-j[0][1] / det, j[0][0] / det],
    ];
    let mut grads = [[[0.0; 2]; 6]; 6];
    let mut values = [[0.0; 6]; 6];
    for (q, &(x, y, _)) in QUADRATURE.iter().enumerate() {
        let ghat = shape_gradients(x, y);
        for i in 0..6 {
            grads[q][i] = [
                jinv_t[0][0] * ghat[i][0] + jinv_t[0][1] * ghat[i][1],
                jinv_t[1][0] * ghat[i][0] + jinv_t[1][1] * ghat[i][1],
            ];
        }
        values[q] = shape_values(x, y);
    }
    Ok(ElementGeometry {
        grads,
        values,
        area: 0.5 * det,
    })
}

/// Assemble the elastic pencil with Dirichlet elimination on boundary nodes.
/// Admissibility of the coefficients is guaranteed by the parameter type,
/// so both matrices are positive definite on any mesh with interior nodes.
pub fn assemble_lame(mesh: &Mesh, params: &ElasticityParams) -> Result<SymmetricSparsePencil> {
    let mu = params.mu();
    let lam_plus_mu = params.lambda() + params.mu();

    let (dof_of_node, dof_nodes) = interior_dofs(mesh, 2);
    let dof_count = dof_nodes.len();
    if dof_count == 0 {
        return Err(Error::Assembly("mesh has no interior nodes".into()));
    }

    let mut a_triplets = Vec::new();
    let mut m_triplets = Vec::new();
    for tri in 0..mesh.triangles.len() {
        let geo = element_geometry(mesh, tri)?;
        let nodes = mesh.triangle_nodes(tri);
        let mut ae = [[0.0f64; 12]; 12];
        let mut me = [[0.0f64; 12]; 12];
        for q in 0..QUADRATURE.len() {
            let w = QUADRATURE[q].2 * geo.area;
            for i in 0..6 {
                let gi = geo.grads[q][i];
                let ni = geo.values[q][i];
                for j in 0..6 {
                    let gj = geo.grads[q][j];
                    let nj = geo.values[q][j];
                    let grad_dot = gi[0] * gj[0] + gi[1] * gj[1];
                    for c in 0..2 {
                        for d in 0..2 {
                            let mut v = lam_plus_mu * gi[c] * gj[d];
                            if c == d {
                                v += mu * grad_dot;
                            }
                            ae[2 * i + c][2 * j + d] += w * v;
                        }
                        me[2 * i + c][2 * j + c] += w * ni * nj;
                    }
                }
            }
        }
        scatter(
            &nodes,
            &dof_of_node,
            2,
            &ae,
            &me,
            &mut a_triplets,
            &mut m_triplets,
        );
    }

    Ok(SymmetricSparsePencil {
        a: CsrMatrix::from_triplets(dof_count, a_triplets),
        m: CsrMatrix::from_triplets(dof_count, m_triplets),
        dof_count,
        dof_nodes,
    })
}

/// Assemble the scalar Laplace pencil (one unknown per interior node),
/// used to validate meshes against membrane eigenvalues.
pub fn assemble_scalar_laplace(mesh: &Mesh) -> Result<SymmetricSparsePencil> {
    let (dof_of_node, dof_nodes) = interior_dofs(mesh, 1);
    let dof_count = dof_nodes.len();
    if dof_count == 0 {
        return Err(Error::Assembly("mesh has no interior nodes".into()));
    }
    let mut a_triplets = Vec::new();
    let mut m_triplets = Vec::new();
    for tri in 0..mesh.triangles.len() {
        let geo = element_geometry(mesh, tri)?;
        let nodes = mesh.triangle_nodes(tri);
        let mut ae = [[0.0f64; 12]; 12];
        let mut me = [[0.0f64; 12]; 12];
        for q in 0..QUADRATURE.len() {
            let w = QUADRATURE[q].2 * geo.area;
            for i in 0..6 {
                let gi = geo.grads[q][i];
                let ni = geo.values[q][i];
                for j in 0..6 {
                    let gj = geo.grads[q][j];
                    ae[i][j] += w * (gi[0] * gj[0] + gi[1] * gj[1]);
                    me[i][j] += w * ni * geo.values[q][j];
                }
            }
        }
        scatter(
            &nodes,
            &dof_of_node,
            1,
            &ae,
            &me,
            &mut a_triplets,
            &mut m_triplets,
        );
    }
    Ok(SymmetricSparsePencil {
        a: CsrMatrix::from_triplets(dof_count, a_triplets),
        m: CsrMatrix::from_triplets(dof_count, m_triplets),
        dof_count,
        dof_nodes,
    })
}

/// Number interior nodes: `dof_of_node[node] = Some(interior_index)`.
fn interior_dofs(mesh: &Mesh, components: usize) -> (Vec<Option<usize>>, Vec<(usize, usize)>) {
    let mut dof_of_node = vec![None; mesh.node_count()];
    let mut dof_nodes = Vec::new();
    let mut next = 0usize;
    for node in 0..mesh.node_count() {
        if !mesh.node_is_boundary(node) {
            dof_of_node[node] = Some(next);
            for c in 0..components {
                dof_nodes.push((node, c));
            }
            next += 1;
        }
    }
    (dof_of_node, dof_nodes)
}

#[allow(clippy::too_many_arguments)]
fn scatter(
    nodes: &[usize; 6],
    dof_of_node: &[Option<usize>],
    components: usize,
    ae: &[[f64; 12]; 12],
    me: &[[f64; 12]; 12],
    a_triplets: &mut Vec<(usize, usize, f64)>,
    m_triplets: &mut Vec<(usize, usize, f64)>,
) {
    for i in 0..6 {
        let Some(ri) = dof_of_node[nodes[i]] else {
            continue;
        };
        for c in 0..components {
            let row = components * ri + c;
            for j in 0..6 {
                let Some(rj) = dof_of_node[nodes[j]] else {
                    continue;
                };
                for d in 0..components {
                    let col = components * rj + d;
                    a_triplets.push((row, col, ae[components * i + c][components * j + d]));
                    m_triplets.push((row, col, me[components * i + c][components * j + d]));
                }
            }
        }
    }
}

/// Energy integrals of a nodal displacement field over the whole mesh
/// (boundary nodes included), used by the Korn-identity and patch checks.
pub struct FieldEnergies {
    /// ∫ |∇u|²
    pub grad: f64,
    /// ∫ (div u)²
    pub div: f64,
    /// 2 ∫ |e(u)|², where e(u) is the symmetric gradient.
    pub sym: f64,
    /// ∫ |u|²
    pub l2: f64,
}

/// Evaluate the quadratic energies of a P2 vector field given by its
/// values at every node of the mesh.
pub fn nodal_field_energies(mesh: &Mesh, values: &[[f64; 2]]) -> Result<FieldEnergies> {
    if values.len() != mesh.node_count() {
        return Err(Error::Assembly(format!(
            "field has {} node values, mesh has {} nodes",
            values.len(),
            mesh.node_count()
        )));
    }
    let mut out = FieldEnergies {
        grad: 0.0,
        div: 0.0,
        sym: 0.0,
        l2: 0.0,
    };
    for tri in 0..mesh.triangles.len() {
        let geo = element_geometry(mesh, tri)?;
        let nodes = mesh.triangle_nodes(tri);
        for q in 0..QUADRATURE.len() {
            let w = QUADRATURE[q].2 * geo.area;
            // Gradient tensor g[c][d] = ∂_d u_c and values at this point.
            let mut g = [[0.0f64; 2]; 2];
            let mut u = [0.0f64; 2];
            for i in 0..6 {
                let v = values[nodes[i]];
                for c in 0..2 {
                    u[c] += geo.values[q][i] * v[c];
                    g[c][0] += geo.grads[q][i][0] * v[c];
                    g[c][1] += geo.grads[q][i][1] * v[c];
                }
            }
            let frob =
                g[0][0] * g[0][0] + g[0][1] * g[0][1] + g[1][0] * g[1][0] + g[1][1] * g[1][1];
            let div = g[0][0] + g[1][1];
            let e01 = 0.5 * (g[0][1] + g[1][0]);
            let sym2 = g[0][0] * g[0][0] + g[1][1] * g[1][1] + 2.0 * e01 * e01;
            out.grad += w * frob;
            out.div += w * div * div;
            out.sym += w * 2.0 * sym2;
            out.l2 += w * (u[0] * u[0] + u[1] * u[1]);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::mesh_rectangle;
    use approx::assert_relative_eq;

    fn field_on(mesh: &Mesh, f: impl Fn(f64, f64) -> [f64; 2]) -> Vec<[f64; 2]> {
        (0..mesh.node_count())
            .map(|n| {
                let [x, y] = mesh.node_position(n);
                f(x, y)
            })
            .collect()
    }

    #[test]
    fn linear_patch_fields_have_exact_energies() {
        let mesh = mesh_rectangle(1.0, 1.0, 3, 3).unwrap();
        // u = (x, -y): ∇u = diag(1, -1) is its own symmetric part and
        // div u = 0, so ∫|∇u|² = 2·area while 2∫|e(u)|² = 4·area. (The
        // two differ because the field does not vanish on the boundary.)
        let e = nodal_field_energies(&mesh, &field_on(&mesh, |x, y| [x, -y])).unwrap();
        assert_relative_eq!(e.grad, 2.0, epsilon = 1e-12);
        assert_relative_eq!(e.div, 0.0, epsilon = 1e-12);
        assert_relative_eq!(e.sym, 4.0, epsilon = 1e-12);
        // u = (x + y, x - y): ∇u = [[1, 1], [1, -1]], again symmetric and
        // divergence-free: ∫|∇u|² = 4·area, 2∫|e(u)|² = 8·area.
        let e = nodal_field_energies(&mesh, &field_on(&mesh, |x, y| [x + y, x - y])).unwrap();
        assert_relative_eq!(e.grad, 4.0, epsilon = 1e-12);
        assert_relative_eq!(e.div, 0.0, epsilon = 1e-12);
        assert_relative_eq!(e.sym, 8.0, epsilon = 1e-12);
    }

    #[test]
    fn quadratic_fields_integrate_exactly() {
        // u = (x², xy) on the unit square: the energies are degree-2
        // polynomials of the gradient entries, integrated exactly by the
        // degree-4 rule. ∫4x² = 4/3, ∫y² = 1/3, ∫x² = 1/3;
        // div = 3x, ∫9x² = 3; 2|e|² = 4x² + x² + ... worked out below.
        let mesh = mesh_rectangle(1.0, 1.0, 2, 2).unwrap();
        let e = nodal_field_energies(&mesh, &field_on(&mesh, |x, y| [x * x, x * y])).unwrap();
        // ∇u = [[2x, 0], [y, x]]: frob = 4x² + y² + x².
        assert_relative_eq!(e.grad, 4.0 / 3.0 + 1.0 / 3.0 + 1.0 / 3.0, epsilon = 1e-12);
        assert_relative_eq!(e.div, 3.0, epsilon = 1e-12);
        // 2|e|² = 2(4x² + x² + 2·(y/2)²) = 10x² + y².
        assert_relative_eq!(e.sym, 10.0 / 3.0 + 1.0 / 3.0, epsilon = 1e-12);
        // ∫ x⁴ + x²y² = 1/5 + 1/9.
        assert_relative_eq!(e.l2, 1.0 / 5.0 + 1.0 / 9.0, epsilon = 1e-12);
    }

    #[test]
    fn pencil_is_symmetric_and_mass_has_total_area() {
        let mesh = mesh_rectangle(2.0, 1.0, 3, 2).unwrap();
        let params = ElasticityParams::from_poisson(0.3, 1.0).unwrap();
        let pencil = assemble_lame(&mesh, &params).unwrap();
        assert!(pencil.a.symmetry_defect() < 1e-13);
        assert!(pencil.m.symmetry_defect() < 1e-13);
        assert_eq!(pencil.dof_count, pencil.dof_nodes.len());
        // Interleaving: consecutive dofs share a node with components 0, 1.
        for pair in pencil.dof_nodes.chunks(2) {
            assert_eq!(pair[0].0, pair[1].0);
            assert_eq!((pair[0].1, pair[1].1), (0, 1));
        }
    }

    #[test]
    fn rayleigh_quotient_matches_field_energies() {
        // For a field vanishing on the boundary, x^T A x assembled with
        // elimination must equal μ∫|∇u|² + (λ+μ)∫(div u)² and x^T M x
        // must equal ∫|u|², evaluated on the same P2 interpolant.
        let mesh = mesh_rectangle(1.0, 1.0, 4, 4).unwrap();
        let params = ElasticityParams::from_poisson(0.2, 1.5).unwrap();
        let pencil = assemble_lame(&mesh, &params).unwrap();
        let bubble = |x: f64, y: f64| {
            let b = x * (1.0 - x) * y * (1.0 - y);
            [b, 2.0 * b]
        };
        let values = field_on(&mesh, bubble);
        let mut x = vec![0.0f64; pencil.dof_count];
        for (dof, &(node, comp)) in pencil.dof_nodes.iter().enumerate() {
            x[dof] = values[node][comp];
        }
        let mut ax = vec![0.0; pencil.dof_count];
        pencil.a.matvec(&x, &mut ax);
        let xtax: f64 = x.iter().zip(&ax).map(|(p, q)| p * q).sum();
        pencil.m.matvec(&x, &mut ax);
        let xtmx: f64 = x.iter().zip(&ax).map(|(p, q)| p * q).sum();
        let e = nodal_field_energies(&mesh, &values).unwrap();
        let energy = params.mu() * e.grad + (params.lambda() + params.mu()) * e.div;
        assert_relative_eq!(xtax, energy, max_relative = 1e-12);
        assert_relative_eq!(xtmx, e.l2, max_relative = 1e-12);
    }

    #[test]
    fn scalar_pencil_matches_dirichlet_quotient() {
        let mesh = mesh_rectangle(1.0, 1.0, 3, 3).unwrap();
        let pencil = assemble_scalar_laplace(&mesh).unwrap();
        assert!(pencil.a.symmetry_defect() < 1e-13);
        // One dof per interior node.
        let interior = (0..mesh.node_count())
            .filter(|&n| !mesh.node_is_boundary(n))
            .count();
        assert_eq!(pencil.dof_count, interior);
    }
}
