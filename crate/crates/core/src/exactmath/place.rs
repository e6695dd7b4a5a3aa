//! Places of `Q` and `Q(√d)`, additive valuations and residue maps.
//!
//! Valuations are normalized so that `w(p) = 1` at every place over `p`;
//! values therefore lie in `(1/e)·Z` with `e` the ramification index.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use rug::ops::Pow;
use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use super::field::{legendre, sqrt_mod, FieldElem, GroundField, Residue, Scalar};
use super::poly::Poly;
use super::ratfunc::RatFunc;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlaceKind {
    /// The place of `Q` over `p`.
    Rational,
    /// `p` splits in `Q(√d)`; `√d ↦ root` under reduction.
    Split {
        root: u64,
    },
    Inert,
    Ramified,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlaceId {
    Finite { p: u64, kind: PlaceKind },
    Archimedean { index: usize },
}

impl PlaceId {
    pub fn rational(p: u64) -> Self {
        PlaceId::Finite {
            p,
            kind: PlaceKind::Rational,
        }
    }

    /// All places of `field` above the rational prime `p`, in a fixed order
    /// (split places sorted by root).
    pub fn above(field: GroundField, p: u64) -> Result<Vec<PlaceId>> {
        if !super::field::is_prime(p) {
            return Err(Error::InvalidPlace(format!("{p} is not prime")));
        }
        let d = match field {
            GroundField::Rationals => return Ok(vec![PlaceId::rational(p)]),
            GroundField::Quadratic { d } => d,
            GroundField::PrimeField { .. } => {
                return Err(Error::InvalidPlace("prime fields have no places".into()))
            }
        };
        let kind = |k| PlaceId::Finite { p, kind: k };
        if p == 2 {
            return match d.rem_euclid(8) {
                1 => Err(Error::InvalidPlace(format!(
                    "2 splits in Q(sqrt {d}); dyadic split places are not supported"
                ))),
                5 => Ok(vec![kind(PlaceKind::Inert)]),
                _ => Ok(vec![kind(PlaceKind::Ramified)]),
            };
        }
        let dm = d.rem_euclid(p as i64) as u64;
        match legendre(dm, p) {
            0 => Ok(vec![kind(PlaceKind::Ramified)]),
            -1 => Ok(vec![kind(PlaceKind::Inert)]),
            _ => {
                let r = sqrt_mod(dm, p).expect("residue has a root");
                let mut roots = vec![r, p - r];
                roots.sort_unstable();
                Ok(roots
                    .into_iter()
                    .map(|root| kind(PlaceKind::Split { root }))
                    .collect())
            }
        }
    }

    /// Checks that the place is one of the places of `field`.
    pub fn validate(&self, field: GroundField) -> Result<()> {
        match *self {
            PlaceId::Archimedean { index } => {
                let n = match field {
                    GroundField::Rationals => 1,
                    GroundField::Quadratic { .. } => 2,
                    GroundField::PrimeField { .. } => 0,
                };
                if index < n {
                    Ok(())
                } else {
                    Err(Error::InvalidPlace(format!(
                        "no embedding with index {index}"
                    )))
                }
            }
            PlaceId::Finite { p, .. } => {
                if Self::above(field, p)?.contains(self) {
                    Ok(())
                } else {
                    Err(Error::InvalidPlace(format!(
                        "{self} is not a place of {field:?}"
                    )))
                }
            }
        }
    }

    pub fn prime(&self) -> Result<u64> {
        match *self {
            PlaceId::Finite { p, .. } => Ok(p),
            PlaceId::Archimedean { .. } => Err(Error::Archimedean),
        }
    }

    /// Residue degree `f` and ramification index `e`.
    pub fn local_degrees(&self) -> Result<(u32, u32)> {
        match *self {
            PlaceId::Finite { kind, .. } => Ok(match kind {
                PlaceKind::Rational | PlaceKind::Split { .. } => (1, 1),
                PlaceKind::Inert => (2, 1),
                PlaceKind::Ramified => (1, 2),
            }),
            PlaceId::Archimedean { .. } => Err(Error::Archimedean),
        }
    }

    /// The residue field, for places where reduction is implemented.
    pub fn residue_field(&self, field: GroundField) -> Result<GroundField> {
        let (p, kind) = match *self {
            PlaceId::Finite { p, kind } => (p, kind),
            PlaceId::Archimedean { .. } => return Err(Error::Archimedean),
        };
        match kind {
            PlaceKind::Rational | PlaceKind::Split { .. } => GroundField::prime(p),
            PlaceKind::Inert => {
                if p == 2 {
                    return Err(Error::InvalidPlace(
                        "reduction at the inert dyadic place is not implemented".into(),
                    ));
                }
                let d = field
                    .radicand()
                    .ok_or_else(|| Error::InvalidPlace("inert place of Q".into()))?;
                GroundField::prime_square(p, d.rem_euclid(p as i64) as u64)
            }
            PlaceKind::Ramified => Err(Error::Ramified(self.to_string())),
        }
    }
}

impl fmt::Display for PlaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlaceId::Archimedean { index } => write!(f, "inf[{index}]"),
            PlaceId::Finite { p, kind } => match kind {
                PlaceKind::Rational => write!(f, "{p}"),
                PlaceKind::Split { root } => write!(f, "{p}[sqrtd={root}]"),
                PlaceKind::Inert => write!(f, "{p}[inert]"),
                PlaceKind::Ramified => write!(f, "{p}[ramified]"),
            },
        }
    }
}

/// An additive valuation value: a rational or `+∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Valuation {
    Finite(Rational),
    Infinity,
}

impl Valuation {
    pub fn int(v: i64) -> Self {
        Valuation::Finite(Rational::from(v))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinity)
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Valuation::Finite(q) => Some(q),
            Valuation::Infinity => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Valuation::Finite(q) => q.to_f64(),
            Valuation::Infinity => f64::INFINITY,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Infinity, Valuation::Infinity) => Ordering::Equal,
            (Valuation::Infinity, _) => Ordering::Greater,
            (_, Valuation::Infinity) => Ordering::Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        }
    }
}

impl std::ops::Sub for Valuation {
    type Output = Valuation;
    /// `∞ − v = ∞`; subtracting `∞` is not meaningful and panics.
    fn sub(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a - b),
            (Valuation::Infinity, Valuation::Finite(_)) => Valuation::Infinity,
            (_, Valuation::Infinity) => panic!("subtracting an infinite valuation"),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(q) => write!(f, "{q}"),
            Valuation::Infinity => f.write_str("+inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<Z: serde::Serializer>(&self, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `v_p` of a nonzero integer.
pub fn int_valuation(n: &Integer, p: u64) -> u64 {
    debug_assert!(*n != 0);
    let mut n = n.clone();
    let mut v = 0;
    while n.is_divisible_u(p as u32) {
        n /= p as u32;
        v += 1;
    }
    v
}

/// `v_p` of a rational, `+∞` at zero.
pub fn rational_valuation(q: &Rational, p: u64) -> Valuation {
    if *q == 0 {
        return Valuation::Infinity;
    }
    let v = int_valuation(q.numer(), p) as i64 - int_valuation(q.denom(), p) as i64;
    Valuation::int(v)
}

fn rational_valuation_i64(q: &Rational, p: u64) -> Option<i64> {
    match rational_valuation(q, p) {
        Valuation::Finite(v) => Some(v.numer().to_i64().unwrap()),
        Valuation::Infinity => None,
    }
}

/// `w(e)` at a finite place, normalized by `w(p) = 1`.
pub fn valuation(e: &FieldElem, place: &PlaceId) -> Result<Valuation> {
    let (p, kind) = match *place {
        PlaceId::Finite { p, kind } => (p, kind),
        PlaceId::Archimedean { .. } => return Err(Error::Archimedean),
    };
    if e.is_zero() {
        return Ok(Valuation::Infinity);
    }
    match kind {
        PlaceKind::Rational => {
            if !e.is_rational() {
                return Err(Error::InvalidPlace(
                    "rational place applied to an irrational element".into(),
                ));
            }
            Ok(rational_valuation(e.a(), p))
        }
        PlaceKind::Inert | PlaceKind::Ramified => match rational_valuation(&e.norm(), p) {
            Valuation::Finite(v) => Ok(Valuation::Finite(v / 2)),
            Valuation::Infinity => unreachable!("nonzero element has nonzero norm"),
        },
        PlaceKind::Split { root } => {
            let va = rational_valuation_i64(e.a(), p);
            let vb = rational_valuation_i64(e.b(), p);
            let g = match (va, vb) {
                (Some(a), Some(b)) => a.min(b),
                (Some(a), None) => a,
                (None, Some(b)) => b,
                (None, None) => unreachable!(),
            };
            // scale so that both coordinates are integral and one is a unit
            let scale = pow_rational(p, -g);
            let a = Rational::from(e.a() * &scale);
            let b = Rational::from(e.b() * &scale);
            let at_root = mod_p(&a, p) as u128 + mod_p(&b, p) as u128 * root as u128;
            if !at_root.is_multiple_of(p as u128) {
                return Ok(Valuation::int(g));
            }
            let d = e.field().radicand().unwrap();
            let norm = Rational::from(&a * &a) - Rational::from(&b * &b) * d;
            let vn = rational_valuation_i64(&norm, p).expect("nonzero norm");
            Ok(Valuation::int(g + vn))
        }
    }
}

fn pow_rational(p: u64, e: i64) -> Rational {
    let base = Integer::from(p).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        Rational::from(base)
    } else {
        Rational::from((Integer::from(1), base))
    }
}

/// A `p`-integral rational mod `p`.
fn mod_p(q: &Rational, p: u64) -> u64 {
    mod_pk(q, &Integer::from(p)).to_u64().unwrap()
}

/// A `p`-integral rational mod `m = p^k`.
fn mod_pk(q: &Rational, m: &Integer) -> Integer {
    let den = Integer::from(q.denom() % m);
    let inv = den.invert(m).expect("p-integral rational");
    let num = q.numer() * inv;
    num.modulo(m)
}

/// Square root of `d` modulo `p^k`, lifted from `root` by Newton iteration.
fn hensel_root(d: i64, root: u64, p: u64, k: u32) -> Integer {
    let pk = Integer::from(p).pow(k);
    let d = Integer::from(d);
    let mut r = Integer::from(root);
    let mut prec = 1;
    while prec < k {
        prec = (2 * prec).min(k);
        let m = Integer::from(p).pow(prec);
        let f = Integer::from(&r * &r) - &d;
        let df = Integer::from(2 * &r)
            .invert(&m)
            .expect("p odd and d a unit");
        r = (r - f * df).modulo(&m);
    }
    r.modulo(&pk)
}

/// Gauss valuation of a polynomial: minimum coefficient valuation.
pub fn poly_valuation(f: &Poly<FieldElem>, place: &PlaceId) -> Result<Valuation> {
    let mut v = Valuation::Infinity;
    for c in f.coeffs() {
        v = v.min(valuation(c, place)?);
    }
    Ok(v)
}

/// `gauss(num) − gauss(den)`; `+∞` for the zero function.
pub fn gauss_valuation(f: &RatFunc<FieldElem>, place: &PlaceId) -> Result<Valuation> {
    let vn = poly_valuation(f.num(), place)?;
    if vn.is_infinite() {
        return Ok(Valuation::Infinity);
    }
    Ok(vn - poly_valuation(f.den(), place)?)
}

/// Residue of an element with `w(e) ≥ 0` at `place`.
pub fn reduce_elem(e: &FieldElem, place: &PlaceId) -> Result<Residue> {
    let (p, kind) = match *place {
        PlaceId::Finite { p, kind } => (p, kind),
        PlaceId::Archimedean { .. } => return Err(Error::Archimedean),
    };
    let target = place.residue_field(e.field())?;
    if valuation(e, place)? < Valuation::int(0) {
        return Err(Error::NotIntegral(place.to_string()));
    }
    match kind {
        PlaceKind::Rational | PlaceKind::Inert => {
            let a = Residue::from_rational(target, e.a())
                .ok_or_else(|| Error::NotIntegral(place.to_string()))?;
            let b = Residue::from_rational(target, e.b())
                .ok_or_else(|| Error::NotIntegral(place.to_string()))?;
            let s = match Residue::sqrt_d(target) {
                Some(s) => s,
                None => Residue::zero(target),
            };
            Ok(a.add(&b.mul(&s)))
        }
        PlaceKind::Split { root } => {
            let m = [e.a(), e.b()]
                .iter()
                .filter_map(|q| rational_valuation_i64(q, p))
                .map(|v| (-v).max(0))
                .max()
                .unwrap_or(0);
            let scale = pow_rational(p, m);
            let a = Rational::from(e.a() * &scale);
            let b = Rational::from(e.b() * &scale);
            let k = (m + 1) as u32;
            let pk = Integer::from(p).pow(k);
            let r = hensel_root(e.field().radicand().unwrap(), root, p, k);
            let value = (mod_pk(&a, &pk) + mod_pk(&b, &pk) * r).modulo(&pk);
            let pm = Integer::from(p).pow(m as u32);
            debug_assert!(value.is_divisible(&pm));
            let value = (value / pm) % p;
            Ok(Residue::new(target, value.to_u64().unwrap(), 0))
        }
        PlaceKind::Ramified => Err(Error::Ramified(place.to_string())),
    }
}

/// Element of the form `p^k` with `w(p^k) = k`, used to clear contents.
fn prime_power(field: GroundField, p: u64, k: i64) -> FieldElem {
    FieldElem::from_rational(field, pow_rational(p, k))
}

/// Reduction of a rational function whose Gauss valuation is nonnegative.
pub fn reduce_ratfunc(f: &RatFunc<FieldElem>, place: &PlaceId) -> Result<RatFunc<Residue>> {
    let p = place.prime()?;
    let target = place.residue_field(f.field())?;
    if f.is_zero() {
        return Ok(RatFunc::zero(target));
    }
    let vden = poly_valuation(f.den(), place)?;
    let vden = vden.finite().expect("nonzero denominator");
    // every valuation at an unramified place is an integer
    debug_assert!(*vden.denom() == 1);
    let k = vden.numer().to_i64().unwrap();
    let scale = prime_power(f.field(), p, -k);
    let num = f.num().scale(&scale);
    let den = f.den().scale(&scale);
    let rn = reduce_poly(&num, place, target)?;
    let rd = reduce_poly(&den, place, target)?;
    RatFunc::new(rn, rd)
}

/// Coefficient-wise reduction of a polynomial with integral coefficients.
pub fn reduce_poly(
    f: &Poly<FieldElem>,
    place: &PlaceId,
    target: GroundField,
) -> Result<Poly<Residue>> {
    let coeffs = f
        .coeffs()
        .iter()
        .map(|c| reduce_elem(c, place))
        .collect::<Result<Vec<_>>>()?;
    Ok(Poly::new(target, coeffs))
}
