//! Change of basis `A ↦ g⁻¹·A·g − g⁻¹·D(g)`.

use super::fnelem::{mat_derive, mat_inv, mat_mul, mat_sub, FnMatrix};
use super::Connection;
use crate::error::{Error, Result};
use crate::exactmath::FieldElem;

/// The connection in the basis given by the columns of `g`.
///
/// ```
/// use pcurve::connection::{gauge_transform, FnElem};
/// use pcurve::exactmath::{parse_ratfunc, GroundField};
/// use pcurve::registry::example;
///
/// let trivial = example("trivial").unwrap();
/// let x = parse_ratfunc("x", GroundField::Rationals, "x").unwrap();
/// let moved = gauge_transform(&trivial, &vec![vec![FnElem::from_x(x)]]).unwrap();
/// assert_eq!(moved.matrix()[0][0].a.to_expr("x"), "(-1)/(x)");
/// ```
pub fn gauge_transform(conn: &Connection, g: &FnMatrix<FieldElem>) -> Result<Connection> {
    let n = conn.rank();
    if g.len() != n || g.iter().any(|r| r.len() != n) {
        return Err(Error::Connection(format!("gauge matrix must be {n}x{n}")));
    }
    let curve = conn.curve();
    let gi = mat_inv(g, curve).ok_or(Error::Singular)?;
    let conj = mat_mul(&mat_mul(&gi, conn.matrix(), curve), g, curve);
    let drift = mat_mul(&gi, &mat_derive(g, curve), curve);
    Connection::new(
        conn.name().to_string(),
        curve,
        conn.field(),
        conn.variable().to_string(),
        mat_sub(&conj, &drift),
    )
}
