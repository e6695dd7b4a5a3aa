//! p-curvature `ψ_p = −∇(D)^p` (the derivation satisfies `D^p = 0` mod p).
//!
//! Columns are computed by iterating `v ← D(v) − A·v` from the standard
//! basis over the residue field. Iterates are kept as `u_k / Q^k` for a fixed
//! polynomial `Q`, so no gcd is taken until the end:
//!
//! `u_{k+1} = Q·D(u_k) − k·D(Q)·u_k − (Q·A)·u_k`.

use rayon::prelude::*;
use serde::Serialize;

use super::fnelem::{cubic, etale_factor, FnElem, FnMatrix};
use super::Connection;
use crate::error::{Error, Result};
use crate::exactmath::{
    gauss_valuation, reduce_ratfunc, GroundField, PlaceId, PlaceKind, Poly, RatFunc, Residue,
    Scalar, Valuation,
};

/// `ψ_p` at one place, as a matrix over the reduced function field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PCurvature {
    pub p: u64,
    pub place: PlaceId,
    pub matrix: FnMatrix<Residue>,
    pub is_zero: bool,
}

/// Outcome of the entrywise divisibility test at a (possibly ramified) place.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Divisibility {
    pub divisible: bool,
    /// Minimum Gauss valuation over all entries.
    pub witness: Valuation,
}

/// Reduction of the connection matrix at an unramified place.
pub fn reduce_matrix(conn: &Connection, place: &PlaceId) -> Result<FnMatrix<Residue>> {
    let zero = Valuation::int(0);
    let mut out = Vec::with_capacity(conn.rank());
    for (i, row) in conn.matrix().iter().enumerate() {
        let mut r = Vec::with_capacity(row.len());
        for (j, e) in row.iter().enumerate() {
            let v = gauss_valuation(&e.a, place)?.min(gauss_valuation(&e.b, place)?);
            if v < zero {
                return Err(Error::BadReduction {
                    place: place.to_string(),
                    row: i,
                    col: j,
                    valuation: v,
                });
            }
            r.push(e.try_map(|f| reduce_ratfunc(f, place))?);
        }
        out.push(r);
    }
    Ok(out)
}

/// p-curvature of `conn` at an unramified finite place.
///
/// ```
/// use pcurve::connection::p_curvature;
/// use pcurve::exactmath::PlaceId;
/// use pcurve::registry::example;
///
/// let quartic = example("quartic-sqrt").unwrap();
/// assert!(p_curvature(&quartic, &PlaceId::rational(3)).unwrap().is_zero);
/// ```
pub fn p_curvature(conn: &Connection, place: &PlaceId) -> Result<PCurvature> {
    let p = place.prime()?;
    place.validate(conn.field())?;
    if let PlaceId::Finite {
        kind: PlaceKind::Ramified,
        ..
    } = place
    {
        return Err(Error::Ramified(place.to_string()));
    }
    let k = place.residue_field(conn.field())?;
    let m = reduce_matrix(conn, place)?;
    let matrix = if conn.curve().is_elliptic() {
        elliptic_psi(&m, p, k)
    } else {
        line_psi(&m, p, k)
    };
    let is_zero = matrix.iter().flatten().all(FnElem::is_zero);
    Ok(PCurvature {
        p,
        place: *place,
        matrix,
        is_zero,
    })
}

fn lcm<S: Scalar>(a: &Poly<S>, b: &Poly<S>) -> Poly<S> {
    a.mul(b).exact_div(&a.gcd(b)).unwrap().monic()
}

/// Numerator of `f` over the common denominator `l`.
fn over<S: Scalar>(f: &RatFunc<S>, l: &Poly<S>) -> Poly<S> {
    f.num().mul(&l.exact_div(f.den()).unwrap())
}

#[allow(clippy::needless_range_loop)]
fn line_psi(m: &FnMatrix<Residue>, p: u64, k: GroundField) -> FnMatrix<Residue> {
    let n = m.len();
    let l = m
        .iter()
        .flatten()
        .fold(Poly::one(k), |acc, e| lcm(&acc, e.a.den()));
    let mm: Vec<Vec<Poly<Residue>>> = m
        .iter()
        .map(|r| r.iter().map(|e| over(&e.a, &l)).collect())
        .collect();
    let dl = l.derivative();
    let mut u: Vec<Vec<Poly<Residue>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Poly::one(k) } else { Poly::zero(k) })
                .collect()
        })
        .collect();
    for step in 0..p {
        let kk = Residue::from_i64(k, step as i64);
        let mut next = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                let mut acc = u[i][j]
                    .derivative()
                    .mul(&l)
                    .sub(&dl.mul(&u[i][j]).scale(&kk));
                for (t, mt) in mm[i].iter().enumerate() {
                    if !mt.is_zero() && !u[t][j].is_zero() {
                        acc = acc.sub(&mt.mul(&u[t][j]));
                    }
                }
                row.push(acc);
            }
            next.push(row);
        }
        u = next;
    }
    let lp = l.pow(p as u32);
    u.into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| FnElem::from_x(RatFunc::new(x.neg(), lp.clone()).unwrap()))
                .collect()
        })
        .collect()
}

/// `α + β·y` with polynomial coordinates.
#[derive(Clone)]
struct Pair {
    a: Poly<Residue>,
    b: Poly<Residue>,
}

fn elliptic_psi(m: &FnMatrix<Residue>, p: u64, k: GroundField) -> FnMatrix<Residue> {
    let n = m.len();
    let l = m
        .iter()
        .flatten()
        .fold(Poly::one(k), |acc, e| lcm(&lcm(&acc, e.a.den()), e.b.den()));
    let f = cubic::<Residue>(k);
    let e = etale_factor::<Residue>(k);
    let e2 = e.mul(&e);
    let q = l.mul(&e2);
    // D(Q) = 2y(L'E + 2LE')
    let two = Residue::from_i64(k, 2);
    let dq = l
        .derivative()
        .mul(&e)
        .add(&l.mul(&e.derivative()).scale(&two))
        .scale(&two);
    let dq_f = dq.mul(&f);
    let le2 = q.clone();
    let two_lef = l.mul(&e).mul(&f).scale(&two);
    let two_le = l.mul(&e).scale(&two);
    // E²·(L·A) split into the x-part and the y-part (the latter also times f)
    let ma: Vec<Vec<Poly<Residue>>> = m
        .iter()
        .map(|r| r.iter().map(|x| over(&x.a, &l).mul(&e2)).collect())
        .collect();
    let mb: Vec<Vec<Poly<Residue>>> = m
        .iter()
        .map(|r| r.iter().map(|x| over(&x.b, &l).mul(&e2)).collect())
        .collect();
    let mbf: Vec<Vec<Poly<Residue>>> = mb
        .iter()
        .map(|r| r.iter().map(|x| x.mul(&f)).collect())
        .collect();

    let mut cols: Vec<Vec<Pair>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| Pair {
                    a: if i == j { Poly::one(k) } else { Poly::zero(k) },
                    b: Poly::zero(k),
                })
                .collect()
        })
        .collect();
    for step in 0..p {
        let kk = Residue::from_i64(k, step as i64);
        for col in cols.iter_mut() {
            let mut next = Vec::with_capacity(n);
            for i in 0..n {
                let u = &col[i];
                // Q·D(u)
                let mut a = le2.mul(&u.b).add(&two_lef.mul(&u.b.derivative()));
                let mut b = two_le.mul(&u.a.derivative());
                // − k·D(Q)·u
                if !kk.is_zero() {
                    a = a.sub(&dq_f.mul(&u.b).scale(&kk));
                    b = b.sub(&dq.mul(&u.a).scale(&kk));
                }
                // − E²·M·u
                for (t, ut) in col.iter().enumerate() {
                    if !ma[i][t].is_zero() {
                        a = a.sub(&ma[i][t].mul(&ut.a));
                        b = b.sub(&ma[i][t].mul(&ut.b));
                    }
                    if !mb[i][t].is_zero() {
                        a = a.sub(&mbf[i][t].mul(&ut.b));
                        b = b.sub(&mb[i][t].mul(&ut.a));
                    }
                }
                next.push(Pair { a, b });
            }
            *col = next;
        }
    }
    let qp = q.pow(p as u32);
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let u = &cols[j][i];
                    FnElem::new(
                        RatFunc::new(u.a.neg(), qp.clone()).unwrap(),
                        RatFunc::new(u.b.neg(), qp.clone()).unwrap(),
                    )
                })
                .collect()
        })
        .collect()
}

/// Entrywise test `gauss_valuation > 0`; valid at ramified places too.
pub fn divisibility_check(conn: &Connection, place: &PlaceId) -> Result<Divisibility> {
    place.prime()?;
    let mut witness = Valuation::Infinity;
    for e in conn.matrix().iter().flatten() {
        witness = witness
            .min(gauss_valuation(&e.a, place)?)
            .min(gauss_valuation(&e.b, place)?);
    }
    Ok(Divisibility {
        divisible: witness > Valuation::int(0),
        witness,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SurveyOutcome {
    Zero,
    Nonzero(Box<PCurvature>),
    Divisible(Valuation),
    NotDivisible(Valuation),
    Failed(Error),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurveyEntry {
    pub place: PlaceId,
    pub outcome: SurveyOutcome,
}

impl SurveyEntry {
    /// Zero p-curvature, or divisibility at a ramified place.
    pub fn vanishes(&self) -> bool {
        matches!(
            self.outcome,
            SurveyOutcome::Zero | SurveyOutcome::Divisible(_)
        )
    }
}

/// `ψ_p` at every place over every prime in `primes`; ramified places get
/// the divisibility test. Places are processed in parallel and reported in
/// (prime, place) order.
pub fn pcurv_survey(conn: &Connection, primes: &[u64]) -> Result<Vec<SurveyEntry>> {
    let mut places = Vec::new();
    for &p in primes {
        places.extend(PlaceId::above(conn.field(), p)?);
    }
    Ok(places
        .par_iter()
        .map(|place| {
            let outcome = match place {
                PlaceId::Finite {
                    kind: PlaceKind::Ramified,
                    ..
                } => match divisibility_check(conn, place) {
                    Ok(d) if d.divisible => SurveyOutcome::Divisible(d.witness),
                    Ok(d) => SurveyOutcome::NotDivisible(d.witness),
                    Err(e) => SurveyOutcome::Failed(e),
                },
                _ => match p_curvature(conn, place) {
                    Ok(c) if c.is_zero => SurveyOutcome::Zero,
                    Ok(c) => SurveyOutcome::Nonzero(Box::new(c)),
                    Err(e) => SurveyOutcome::Failed(e),
                },
            };
            SurveyEntry {
                place: *place,
                outcome,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connection::CurveDesc;
    use crate::exactmath::{parse_ratfunc, FieldElem};

    fn rank1(curve: CurveDesc, s: &str) -> Connection {
        let f = parse_ratfunc(s, GroundField::Rationals, "x").unwrap();
        Connection::from_ratfuncs("t", curve, GroundField::Rationals, "x", vec![vec![f]]).unwrap()
    }

    #[test]
    fn constant_one_gives_one() {
        let c = rank1(CurveDesc::P1Minus012Inf, "1");
        for p in [2, 3, 5, 7] {
            let psi = p_curvature(&c, &PlaceId::rational(p)).unwrap();
            let k = GroundField::prime(p).unwrap();
            assert_eq!(psi.matrix[0][0], FnElem::one(k));
        }
    }

    #[test]
    fn dx_over_x_scaled() {
        // A = a/x has ψ_p = (a − a^p)/x^p, zero iff a ∈ F_p
        let c = rank1(CurveDesc::P1Minus012Inf, "1/(2*x)");
        assert!(p_curvature(&c, &PlaceId::rational(5)).unwrap().is_zero);
        assert!(matches!(
            p_curvature(&c, &PlaceId::rational(2)),
            Err(Error::BadReduction { row: 0, col: 0, .. })
        ));
    }

    #[test]
    fn elliptic_trivial_and_exact() {
        // A = D(g)/g for g = y gives a connection with horizontal section y
        let q = GroundField::Rationals;
        let y = FnElem::<FieldElem>::y(q);
        let dy_over_y = y.derive(CurveDesc::AffineElliptic).mul(
            &y.inv(CurveDesc::AffineElliptic).unwrap(),
            CurveDesc::AffineElliptic,
        );
        let c = Connection::new(
            "log-y",
            CurveDesc::AffineElliptic,
            q,
            "x",
            vec![vec![dy_over_y]],
        )
        .unwrap();
        for p in [3, 5, 7, 11] {
            assert!(
                p_curvature(&c, &PlaceId::rational(p)).unwrap().is_zero,
                "p = {p}"
            );
        }
        // A = y is not exact: D(D(v)) chains never close up
        let c = Connection::new("y", CurveDesc::AffineElliptic, q, "x", vec![vec![y]]).unwrap();
        assert!(!p_curvature(&c, &PlaceId::rational(5)).unwrap().is_zero);
    }
}
