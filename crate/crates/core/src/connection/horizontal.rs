//! Formal horizontal sections `y` with `D(y) = A·y`.
//!
//! On the line curves the local parameter is `x − x₀`. On the elliptic curve
//! it is `y − y₀`: where `3x² − 1` is invertible, `x` is a power series in
//! `y − y₀` and `D = d/dy`.

use super::fnelem::{cubic, etale_factor, CurveDesc, FnElem};
use super::Connection;
use crate::error::{Error, Result};
use crate::exactmath::{series_expand, FieldElem, Scalar, TruncSeries};

/// Expansion point: `x₀`, plus `y₀` on the elliptic curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvePoint {
    pub x: FieldElem,
    pub y: Option<FieldElem>,
}

impl CurvePoint {
    pub fn line(x: FieldElem) -> Self {
        CurvePoint { x, y: None }
    }

    /// A point of `y² = x³ − x`.
    pub fn elliptic(x: FieldElem, y: FieldElem) -> Result<Self> {
        let f = cubic::<FieldElem>(x.field()).eval(&x);
        if y.mul(&y) != f {
            return Err(Error::Domain(format!("({x}, {y}) is not on y^2 = x^3 - x")));
        }
        Ok(CurvePoint { x, y: Some(y) })
    }
}

/// `x` as a series in `u = y − y₀` near `(x₀, y₀)`, by Newton iteration on
/// `x³ − x − (y₀ + u)² = 0`.
fn x_of_u(x0: &FieldElem, y0: &FieldElem, order: usize) -> Result<TruncSeries<FieldElem>> {
    let field = x0.field();
    let e0 = etale_factor::<FieldElem>(field).eval(x0);
    if e0.is_zero() {
        return Err(Error::Domain("3x^2 - 1 vanishes at the center".into()));
    }
    let yu = y_of_u(y0, order);
    let y2 = yu.mul(&yu);
    let f = cubic::<FieldElem>(field);
    let df = etale_factor::<FieldElem>(field);
    let mut x = TruncSeries::one(FieldElem::zero(field), order).scale(x0);
    let mut prec = 1;
    while prec <= order {
        prec *= 2;
        let g = x.apply_poly(&f).sub(&y2);
        let dg = x.apply_poly(&df);
        x = x.sub(&g.mul(&dg.inv()?));
    }
    Ok(x)
}

/// `y₀ + u` as a series in `u`.
fn y_of_u(y0: &FieldElem, order: usize) -> TruncSeries<FieldElem> {
    let field = y0.field();
    let mut c = vec![FieldElem::zero(field); order + 1];
    c[0] = y0.clone();
    if order >= 1 {
        c[1] = FieldElem::one(field);
    }
    TruncSeries::new(FieldElem::zero(field), c)
}

/// The local coordinate at `(0, 0)`: `x(y)` with `x³ − x = y²`.
///
/// ```
/// use pcurve::connection::elliptic_local_coordinate;
/// use pcurve::exactmath::FieldElem;
///
/// let x = elliptic_local_coordinate(7);
/// assert_eq!(x.coeff(2), &FieldElem::rational(-1));
/// assert_eq!(x.coeff(6), &FieldElem::rational(-1));
/// ```
pub fn elliptic_local_coordinate(order: usize) -> TruncSeries<FieldElem> {
    let zero = FieldElem::rational(0);
    x_of_u(&zero, &zero, order.max(2))
        .expect("(0, 0) is an étale point")
        .truncate(order.max(2))
}

/// Entries of `A` as series in the local parameter at `center`.
fn local_matrix(
    conn: &Connection,
    center: &CurvePoint,
    order: usize,
) -> Result<Vec<Vec<TruncSeries<FieldElem>>>> {
    let field = conn.field();
    let zero = FieldElem::zero(field);
    let expand = |e: &FnElem<FieldElem>| -> Result<TruncSeries<FieldElem>> {
        match (conn.curve().is_elliptic(), &center.y) {
            (false, _) => {
                let s = series_expand(&e.a, &center.x, order)?;
                Ok(TruncSeries::new(zero.clone(), s.coeffs().to_vec()))
            }
            (true, Some(y0)) => {
                let xu = x_of_u(&center.x, y0, order)?;
                let yu = y_of_u(y0, order);
                let a = series_expand(&e.a, &center.x, order)?.compose(&xu);
                let b = series_expand(&e.b, &center.x, order)?.compose(&xu);
                Ok(TruncSeries::new(
                    zero.clone(),
                    a.add(&b.mul(&yu)).coeffs().to_vec(),
                ))
            }
            (true, None) => Err(Error::Domain(
                "elliptic expansion needs a point (x, y)".into(),
            )),
        }
    };
    conn.matrix()
        .iter()
        .map(|r| r.iter().map(expand).collect())
        .collect()
}

/// Horizontal section with `y(center) = initial`, to order `N`.
///
/// ```
/// use pcurve::connection::{horizontal_series, CurvePoint};
/// use pcurve::exactmath::FieldElem;
/// use pcurve::registry::example;
///
/// let conn = example("quartic-sqrt").unwrap();
/// let y = horizontal_series(&conn, &CurvePoint::line(FieldElem::rational(0)), &[FieldElem::rational(1)], 8).unwrap();
/// assert_eq!(y[0].coeff(4), &FieldElem::ratio(pcurve::exactmath::GroundField::Rationals, -1, 2));
/// ```
pub fn horizontal_series(
    conn: &Connection,
    center: &CurvePoint,
    initial: &[FieldElem],
    order: usize,
) -> Result<Vec<TruncSeries<FieldElem>>> {
    let n = conn.rank();
    if initial.len() != n {
        return Err(Error::Domain(format!(
            "initial vector has length {}, rank is {n}",
            initial.len()
        )));
    }
    let field = conn.field();
    let a = local_matrix(conn, center, order)?;
    let mut coeffs: Vec<Vec<FieldElem>> = initial.iter().map(|c| vec![c.clone()]).collect();
    // (m+1)·y_{m+1} = Σ_k A_k·y_{m−k}
    for m in 0..order {
        let inv = FieldElem::from_i64(field, m as i64 + 1).inv().unwrap();
        let next: Vec<FieldElem> = (0..n)
            .map(|i| {
                let mut acc = FieldElem::zero(field);
                for (j, aij) in a[i].iter().enumerate() {
                    for k in 0..=m {
                        let c = aij.coeff(k);
                        if !c.is_zero() {
                            acc = acc.add(&c.mul(&coeffs[j][m - k]));
                        }
                    }
                }
                acc.mul(&inv)
            })
            .collect();
        for (i, c) in next.into_iter().enumerate() {
            coeffs[i].push(c);
        }
    }
    let local = match conn.curve() {
        CurveDesc::AffineElliptic => center.y.clone().unwrap(),
        _ => center.x.clone(),
    };
    Ok(coeffs
        .into_iter()
        .map(|c| TruncSeries::new(local.clone(), c))
        .collect())
}

/// `D(y) − A·y` in the local parameter, valid to order `N − 1`.
pub fn ode_residual(
    conn: &Connection,
    center: &CurvePoint,
    y: &[TruncSeries<FieldElem>],
) -> Result<Vec<TruncSeries<FieldElem>>> {
    let order = y.iter().map(TruncSeries::order).min().unwrap_or(0);
    let a = local_matrix(conn, center, order)?;
    let zero = FieldElem::zero(conn.field());
    let local = |s: &TruncSeries<FieldElem>| TruncSeries::new(zero.clone(), s.coeffs().to_vec());
    Ok((0..conn.rank())
        .map(|i| {
            let mut r = local(&y[i]).derivative();
            for (j, aij) in a[i].iter().enumerate() {
                r = r.sub(&aij.mul(&local(&y[j])));
            }
            r
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{parse_ratfunc, GroundField};

    #[test]
    fn local_coordinate_coefficients() {
        let x = elliptic_local_coordinate(11);
        assert_eq!(x.coeff(10), &FieldElem::rational(-3));
        assert!(x.coeffs().iter().skip(1).step_by(2).all(|c| c.is_zero()));
        let x3 = elliptic_local_coordinate(3);
        assert_eq!(x3.coeffs(), &[0, 0, -1, 0].map(FieldElem::rational));
    }

    #[test]
    fn exponential() {
        let q = GroundField::Rationals;
        let one = parse_ratfunc("1", q, "x").unwrap();
        let c = Connection::from_ratfuncs("exp", CurveDesc::P1Minus012Inf, q, "x", vec![vec![one]])
            .unwrap();
        let y = horizontal_series(
            &c,
            &CurvePoint::line(FieldElem::rational(0)),
            &[FieldElem::rational(1)],
            6,
        )
        .unwrap();
        assert_eq!(y[0].coeff(6), &FieldElem::ratio(q, 1, 720));
    }

    #[test]
    fn elliptic_section_of_exact_connection() {
        // A = D(x)/x has the horizontal section x; expand at (−1, 0)
        let q = GroundField::Rationals;
        let c = CurveDesc::AffineElliptic;
        let x = FnElem::from_x(parse_ratfunc("x", q, "x").unwrap());
        let a = x.derive(c).mul(&x.inv(c).unwrap(), c);
        let conn = Connection::new("dlog-x", c, q, "x", vec![vec![a]]).unwrap();
        let pt = CurvePoint::elliptic(FieldElem::rational(-1), FieldElem::rational(0)).unwrap();
        let y = horizontal_series(&conn, &pt, &[FieldElem::rational(-1)], 9).unwrap();
        let xu = x_of_u(&FieldElem::rational(-1), &FieldElem::rational(0), 9).unwrap();
        assert_eq!(y[0].coeffs(), xu.coeffs());
        assert!(ode_residual(&conn, &pt, &y)
            .unwrap()
            .iter()
            .all(|r| r.is_zero()));
    }
}
