//! Quadratic Lagrange reference element on the unit triangle and the
//! degree-4 six-point quadrature used for all element integrals.
//!
//! Reference coordinates `(xi, eta)` with barycentrics
//! `l1 = 1 - xi - eta, l2 = xi, l3 = eta`; local node order is the three
//! vertices followed by the midpoints of (0,1), (1,2), (2,0).

/// Six-point symmetric triangle rule, exact for polynomials of degree 4.
/// Entries are `(xi, eta, weight)` with weights summing to 1; integrals
/// over a physical triangle are `area * sum w_q f(x_q)`.
pub const QUADRATURE: [(f64, f64, f64); 6] = {
    const A1: f64 = 0.445948490915965;
    const W1: f64 = 0.223381589678011;
    const A2: f64 = 0.091576213509771;
    const W2: f64 = 0.109951743655322;
    [
        (A1, A1, W1),
        (1.0 - 2.0 * A1, A1, W1),
        (A1, 1.0 - 2.0 * A1, W1),
        (A2, A2, W2),
        (1.0 - 2.0 * A2, A2, W2),
        (A2, 1.0 - 2.0 * A2, W2),
    ]
};

/// Values of the six P2 shape functions at a reference point.
pub fn shape_values(xi: f64, eta: f64) -> [f64; 6] {
    let l1 = 1.0 - xi - eta;
    let (l2, l3) = (xi, eta);
    [
        l1 * (2.0 * l1 - 1.0),
        l2 * (2.0 * l2 - 1.0),
        l3 * (2.0 * l3 - 1.0),
        4.0 * l1 * l2,
        4.0 * l2 * l3,
        4.0 * l3 * l1,
    ]
}

/// Reference gradients `(d/dxi, d/deta)` of the six shape functions.
pub fn shape_gradients(xi: f64, eta: f64) -> [[f64; 2]; 6] {
    let l1 = 1.0 - xi - eta;
    let (l2, l3) = (xi, eta);
    // grad l1 = (-1, -1), grad l2 = (1, 0), grad l3 = (0, 1).
    [
        [-(4.0 * l1 - 1.0), -(4.0 * l1 - 1.0)],
        [4.0 * l2 - 1.0, 0.0],
        [0.0, 4.0 * l3 - 1.0],
        [4.0 * (l1 - l2), -4.0 * l2],
        [4.0 * l3, 4.0 * l2],
        [-4.0 * l3, 4.0 * (l1 - l3)],
    ]
}
