//! Named example connections with their expected behaviour.

use rug::Rational;

use crate::connection::{etale_factor, Connection, CurveDesc, FnElem};
use crate::error::{Error, Result};
use crate::exactmath::{parse_ratfunc, FieldElem, GroundField, RatFunc};
use crate::gaussmanin::gm_connection;

pub const EXAMPLE_NAMES: [&str; 5] = [
    "trivial",
    "exp",
    "legendre-gm",
    "quartic-sqrt",
    "isogeny-pushforward",
];

/// What the example is known to do.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expected {
    /// `ψ_p = 0` at every place of good reduction.
    pub psi_vanishes: bool,
    /// Closed form of a horizontal section, when there is one.
    pub solution: Option<&'static str>,
    pub note: &'static str,
}

/// Looks up an example by name.
///
/// ```
/// let conn = pcurve::registry::example("quartic-sqrt").unwrap();
/// assert_eq!(conn.rank(), 1);
/// assert!(pcurve::registry::example("nope").is_err());
/// ```
pub fn example(name: &str) -> Result<Connection> {
    match name {
        "trivial" => line("trivial", &[&["0"]]),
        "exp" => line("exp", &[&["1"]]),
        "legendre-gm" => gm_connection(),
        "quartic-sqrt" => {
            let a = parse_ratfunc("-2*x^3/(1-x^4)", GroundField::Rationals, "x")?;
            Connection::from_ratfuncs(
                "quartic-sqrt",
                CurveDesc::A1MinusFourthRoots,
                GroundField::Rationals,
                "x",
                vec![vec![a]],
            )
        }
        "isogeny-pushforward" => isogeny_pushforward(),
        _ => Err(Error::UnknownExample(name.to_string())),
    }
}

pub fn expected(name: &str) -> Result<Expected> {
    Ok(match name {
        "trivial" => Expected { psi_vanishes: true, solution: Some("1"), note: "A = 0" },
        "exp" => Expected { psi_vanishes: false, solution: Some("exp(x)"), note: "psi_p = 1 at every p" },
        "legendre-gm" => Expected {
            psi_vanishes: false,
            solution: Some("2F1(1/2, 1/2; 1; t)"),
            note: "bad reduction at 2; psi_p is nilpotent and nonzero at odd p",
        },
        "quartic-sqrt" => Expected { psi_vanishes: true, solution: Some("(1 - x^4)^(1/2)"), note: "A = -2x^3/(1 - x^4)" },
        "isogeny-pushforward" => Expected {
            psi_vanishes: true,
            solution: None,
            note: "pushforward of the structure sheaf under a degree-2 isogeny; divisible at the place over 2",
        },
        _ => return Err(Error::UnknownExample(name.to_string())),
    })
}

fn line(name: &str, rows: &[&[&str]]) -> Result<Connection> {
    let q = GroundField::Rationals;
    let m = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|s| parse_ratfunc(s, q, "x"))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Connection::from_ratfuncs(name, CurveDesc::P1Minus012Inf, q, "x", m)
}

fn gaussian() -> GroundField {
    GroundField::quadratic(-1).expect("-1 is squarefree")
}

fn gi(a: i64, b: i64, d: i64) -> FieldElem {
    FieldElem::new(gaussian(), Rational::from((a, d)), Rational::from((b, d))).unwrap()
}

fn rf(s: &str) -> RatFunc<FieldElem> {
    parse_ratfunc(s, gaussian(), "t").unwrap()
}

/// Coefficients `g0, g1` with `D(x) = s·g0(t) + s·g1(t)·x` on the double
/// cover `x ↦ (t, s)`, for the base derivation `D(t) = 2s/(3t² − 1)`.
fn pushforward_coefficients() -> (RatFunc<FieldElem>, RatFunc<FieldElem>) {
    let g0 = rf("1/((t^2-1)*(3*t^2-1))").scale(&gi(0, -2, 1));
    let g1 = rf("2*t/((t^2-1)*(3*t^2-1))");
    (g0, g1)
}

/// Residuals of the two substitution identities on the cover `y² = x³ − x`:
/// `s² − (t³ − t)` and `D(x) − (c0 + c1·x)`, both as functions of `(x, y)`.
pub fn isogeny_substitution_residual() -> Result<[FnElem<FieldElem>; 2]> {
    let k = gaussian();
    let c = CurveDesc::AffineElliptic;
    let x = RatFunc::<FieldElem>::x(k);
    let xinv = x.inv().unwrap();
    // t = −(i/2)(x − 1/x), s = ((1 + i)/4)(x + 1/x)/x · y
    let t = x.sub(&xinv).scale(&gi(0, -1, 2));
    let s = FnElem::new(
        RatFunc::zero(k),
        x.add(&xinv).mul(&xinv).scale(&gi(1, 1, 4)),
    );
    let t3 = t.mul(&t).mul(&t).sub(&t);
    let r0 = s.mul(&s, c).sub(&FnElem::from_x(t3));

    // D(t) = 2s/E(t) pulled back; D(x) = D(t)/t'(x)
    let e_t = RatFunc::from_poly(etale_factor::<FieldElem>(k)).compose(&t)?;
    let dt = e_t
        .mul(&t.derivative())
        .inv()
        .ok_or(Error::DivisionByZero)?;
    let dx = s.scale(&dt.scale(&gi(2, 0, 1)));
    let (g0, g1) = pushforward_coefficients();
    let expected = s
        .scale(&g0.compose(&t)?)
        .add(&s.scale(&g1.compose(&t)?.mul(&x)));
    Ok([r0, dx.sub(&expected)])
}

/// The connection on `s² = t³ − t` over `Q(i)` obtained by pushing forward
/// the trivial line bundle along `x ↦ (−(i/2)(x − 1/x), ((1 + i)/4)(y/x)(x + 1/x))`,
/// in the basis `{1, x}`.
fn isogeny_pushforward() -> Result<Connection> {
    if isogeny_substitution_residual()?
        .iter()
        .any(|r| !r.is_zero())
    {
        return Err(Error::Connection(
            "isogeny substitution identity fails".into(),
        ));
    }
    let k = gaussian();
    let (g0, g1) = pushforward_coefficients();
    let zero = FnElem::zero(k);
    let y_term = |g: RatFunc<FieldElem>| FnElem::new(RatFunc::zero(k), g.neg());
    let m = vec![vec![zero.clone(), y_term(g0)], vec![zero, y_term(g1)]];
    Connection::new("isogeny-pushforward", CurveDesc::AffineElliptic, k, "t", m)
}
