//! Rational functions in one variable, kept in canonical form.

use std::fmt;

use rug::Integer;

use super::field::{GroundField, Scalar};
use super::poly::Poly;
use crate::error::{Error, Result};

/// `num/den` with `gcd(num, den) = 1` and `den` monic.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc<S: Scalar> {
    num: Poly<S>,
    den: Poly<S>,
}

impl<S: Scalar> RatFunc<S> {
    pub fn new(num: Poly<S>, den: Poly<S>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero(den.field()));
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g)?, den.exact_div(&g)?)
        };
        let l = den.lead().unwrap().clone();
        if !l.is_one() {
            let li = l.inv().unwrap();
            num = num.scale(&li);
            den = den.scale(&li);
        }
        Ok(RatFunc { num, den })
    }

    pub fn from_poly(p: Poly<S>) -> Self {
        let field = p.field();
        RatFunc {
            num: p,
            den: Poly::one(field),
        }
    }

    pub fn constant(c: S) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn zero(field: GroundField) -> Self {
        RatFunc {
            num: Poly::zero(field),
            den: Poly::one(field),
        }
    }

    pub fn one(field: GroundField) -> Self {
        Self::from_poly(Poly::one(field))
    }

    pub fn x(field: GroundField) -> Self {
        Self::from_poly(Poly::x(field))
    }

    pub fn from_i64(field: GroundField, n: i64) -> Self {
        Self::constant(S::from_i64(field, n))
    }

    pub fn field(&self) -> GroundField {
        self.num.field()
    }

    pub fn num(&self) -> &Poly<S> {
        &self.num
    }

    pub fn den(&self) -> &Poly<S> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The value if this is a constant function.
    pub fn as_constant(&self) -> Option<S> {
        if self.den.is_one() && self.num.degree().unwrap_or(0) == 0 {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::new(self.num.add(&o.num), self.den.clone()).unwrap();
        }
        let num = self.num.mul(&o.den).add(&o.num.mul(&self.den));
        Self::new(num, self.den.mul(&o.den)).unwrap()
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.field());
        }
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den)).unwrap()
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::new(self.num.scale(c), self.den.clone()).unwrap()
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::new(self.den.clone(), self.num.clone()).unwrap())
        }
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        let oi = o.inv().ok_or(Error::DivisionByZero)?;
        Ok(self.mul(&oi))
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        let base = if e < 0 {
            self.inv().ok_or(Error::DivisionByZero)?
        } else {
            self.clone()
        };
        let k = e.unsigned_abs();
        Ok(RatFunc {
            num: base.num.pow(k),
            den: base.den.pow(k),
        })
    }

    pub fn derivative(&self) -> Self {
        let num = self
            .num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()));
        Self::new(num, self.den.mul(&self.den)).unwrap()
    }

    /// Value at `c`; a pole is an error carrying its order.
    pub fn eval(&self, c: &S) -> Result<S> {
        let d = self.den.eval(c);
        if d.is_zero() {
            return Err(Error::Pole {
                order: self.pole_order(c),
            });
        }
        Ok(self.num.eval(c).mul(&d.inv().unwrap()))
    }

    /// Multiplicity of `c` as a root of the denominator.
    pub fn pole_order(&self, c: &S) -> usize {
        let shifted = self.den.taylor_shift(c);
        shifted.coeffs().iter().take_while(|a| a.is_zero()).count()
    }

    /// `self(g)`.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        let horner = |p: &Poly<S>| {
            let mut acc = Self::zero(self.field());
            for c in p.coeffs().iter().rev() {
                acc = acc.mul(g).add(&Self::constant(c.clone()));
            }
            acc
        };
        horner(&self.num).div(&horner(&self.den))
    }

    pub fn map<T: Scalar>(&self, field: GroundField, f: impl Fn(&S) -> T) -> Result<RatFunc<T>> {
        RatFunc::new(self.num.map(field, &f), self.den.map(field, &f))
    }

    /// Text readable by the expression parser.
    pub fn to_expr(&self, var: &str) -> String {
        if self.den.is_one() {
            self.num.to_expr(var)
        } else {
            format!("({})/({})", self.num.to_expr(var), self.den.to_expr(var))
        }
    }
}

impl<S: Scalar> fmt::Display for RatFunc<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr("x"))
    }
}

impl<S: Scalar> fmt::Debug for RatFunc<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({})", self.to_expr("x"))
    }
}

/// Rational functions form a field, so they can serve as polynomial
/// coefficients (used for the parameter `t` of a family).
impl<S: Scalar> Scalar for RatFunc<S> {
    fn field(&self) -> GroundField {
        RatFunc::field(self)
    }

    fn zero(field: GroundField) -> Self {
        RatFunc::zero(field)
    }

    fn one(field: GroundField) -> Self {
        RatFunc::one(field)
    }

    fn from_integer(field: GroundField, n: &Integer) -> Self {
        RatFunc::constant(S::from_integer(field, n))
    }

    fn sqrt_d(field: GroundField) -> Option<Self> {
        S::sqrt_d(field).map(RatFunc::constant)
    }

    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }

    fn add(&self, o: &Self) -> Self {
        RatFunc::add(self, o)
    }

    fn sub(&self, o: &Self) -> Self {
        RatFunc::sub(self, o)
    }

    fn mul(&self, o: &Self) -> Self {
        RatFunc::mul(self, o)
    }

    fn neg(&self) -> Self {
        RatFunc::neg(self)
    }

    fn inv(&self) -> Option<Self> {
        RatFunc::inv(self)
    }

    fn to_expr(&self) -> String {
        format!("({})", RatFunc::to_expr(self, "t"))
    }

    fn negative_part(&self) -> Option<Self> {
        self.as_constant()
            .and_then(|c| c.negative_part())
            .map(RatFunc::constant)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::FieldElem;

    fn q(cs: &[i64]) -> Poly<FieldElem> {
        Poly::from_i64s(GroundField::Rationals, cs)
    }

    #[test]
    fn canonical_form() {
        let f = RatFunc::new(q(&[0, 0, 0, 2]), q(&[1, 0, 0, 0, -1])).unwrap();
        assert_eq!(f.num(), &q(&[0, 0, 0, -2]));
        assert_eq!(f.den(), &q(&[-1, 0, 0, 0, 1]));
        let g = RatFunc::new(q(&[-1, 0, 1]), q(&[2, 2])).unwrap();
        assert_eq!(
            g.num(),
            &q(&[-1, 1]).scale(&FieldElem::ratio(GroundField::Rationals, 1, 2))
        );
        assert!(g.den().is_one() || g.den() == &q(&[1]));
    }

    #[test]
    fn derivative_of_inverse() {
        let f = RatFunc::new(q(&[1]), q(&[1, -1])).unwrap();
        let df = f.derivative();
        assert_eq!(df, f.mul(&f));
    }

    #[test]
    fn pole_orders() {
        let f = RatFunc::new(q(&[1]), q(&[0, 0, 1, 1])).unwrap();
        let zero = FieldElem::rational(0);
        assert_eq!(f.eval(&zero), Err(Error::Pole { order: 2 }));
        assert_eq!(
            f.eval(&FieldElem::rational(1)).unwrap(),
            FieldElem::ratio(GroundField::Rationals, 1, 2)
        );
    }

    #[test]
    fn composition() {
        let f = RatFunc::new(q(&[1]), q(&[1, -1])).unwrap();
        let g = RatFunc::new(q(&[1]), q(&[0, 1])).unwrap();
        // 1/(1 - 1/x) = x/(x - 1)
        assert_eq!(
            f.compose(&g).unwrap(),
            RatFunc::new(q(&[0, 1]), q(&[-1, 1])).unwrap()
        );
    }
}
