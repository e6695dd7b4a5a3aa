//! Functions on the supported curves: `a(x) + b(x)·y`, with `b = 0` on the
//! two line curves and `y² = x³ − x` on the elliptic curve.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::exactmath::{GroundField, Poly, RatFunc, Scalar};

/// The three curves connections live on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CurveDesc {
    /// `P¹ − {0, 1, ∞}` with derivation `d/dx`.
    #[serde(rename = "p1")]
    P1Minus012Inf,
    /// `y² = x³ − x` with `D = (2y/(3x²−1))∂_x + ∂_y`.
    #[serde(rename = "elliptic")]
    AffineElliptic,
    /// `A¹ − {±1, ±i}` with derivation `d/dx`.
    #[serde(rename = "a1m4")]
    A1MinusFourthRoots,
}

impl CurveDesc {
    pub fn tag(&self) -> &'static str {
        match self {
            CurveDesc::P1Minus012Inf => "p1",
            CurveDesc::AffineElliptic => "elliptic",
            CurveDesc::A1MinusFourthRoots => "a1m4",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "p1" => Some(CurveDesc::P1Minus012Inf),
            "elliptic" => Some(CurveDesc::AffineElliptic),
            "a1m4" => Some(CurveDesc::A1MinusFourthRoots),
            _ => None,
        }
    }

    pub fn is_elliptic(&self) -> bool {
        matches!(self, CurveDesc::AffineElliptic)
    }
}

/// `x³ − x`.
pub fn cubic<S: Scalar>(field: GroundField) -> Poly<S> {
    Poly::from_i64s(field, &[0, -1, 0, 1])
}

/// `3x² − 1`, the coefficient making `D` regular away from its zeros.
pub fn etale_factor<S: Scalar>(field: GroundField) -> Poly<S> {
    Poly::from_i64s(field, &[-1, 0, 3])
}

/// `a + b·y` with `a`, `b` rational functions of `x`.
#[derive(Clone, PartialEq, Eq)]
pub struct FnElem<S: Scalar> {
    pub a: RatFunc<S>,
    pub b: RatFunc<S>,
}

impl<S: Scalar> FnElem<S> {
    pub fn new(a: RatFunc<S>, b: RatFunc<S>) -> Self {
        FnElem { a, b }
    }

    pub fn from_x(a: RatFunc<S>) -> Self {
        let field = a.field();
        FnElem {
            a,
            b: RatFunc::zero(field),
        }
    }

    pub fn zero(field: GroundField) -> Self {
        FnElem {
            a: RatFunc::zero(field),
            b: RatFunc::zero(field),
        }
    }

    pub fn one(field: GroundField) -> Self {
        FnElem {
            a: RatFunc::one(field),
            b: RatFunc::zero(field),
        }
    }

    /// The coordinate function `y`.
    pub fn y(field: GroundField) -> Self {
        FnElem {
            a: RatFunc::zero(field),
            b: RatFunc::one(field),
        }
    }

    pub fn field(&self) -> GroundField {
        self.a.field()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        FnElem {
            a: self.a.add(&o.a),
            b: self.b.add(&o.b),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        FnElem {
            a: self.a.sub(&o.a),
            b: self.b.sub(&o.b),
        }
    }

    pub fn neg(&self) -> Self {
        FnElem {
            a: self.a.neg(),
            b: self.b.neg(),
        }
    }

    pub fn scale(&self, c: &RatFunc<S>) -> Self {
        FnElem {
            a: self.a.mul(c),
            b: self.b.mul(c),
        }
    }

    pub fn mul(&self, o: &Self, curve: CurveDesc) -> Self {
        if !curve.is_elliptic() {
            return FnElem::from_x(self.a.mul(&o.a));
        }
        let f = RatFunc::from_poly(cubic(self.field()));
        let a = self.a.mul(&o.a).add(&self.b.mul(&o.b).mul(&f));
        let b = self.a.mul(&o.b).add(&self.b.mul(&o.a));
        FnElem { a, b }
    }

    /// `(a − b y)/(a² − b² f)` on the elliptic curve.
    pub fn inv(&self, curve: CurveDesc) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if !curve.is_elliptic() || self.b.is_zero() {
            return Some(FnElem::from_x(self.a.inv()?));
        }
        let f = RatFunc::from_poly(cubic(self.field()));
        let norm = self.a.mul(&self.a).sub(&self.b.mul(&self.b).mul(&f));
        let ni = norm.inv()?;
        Some(FnElem {
            a: self.a.mul(&ni),
            b: self.b.neg().mul(&ni),
        })
    }

    /// The curve's canonical derivation.
    pub fn derive(&self, curve: CurveDesc) -> Self {
        if !curve.is_elliptic() {
            return FnElem::from_x(self.a.derivative());
        }
        // D(a + b y) = (b + 2 f b'/E) + (2 a'/E) y
        let field = self.field();
        let f = RatFunc::from_poly(cubic(field));
        let e_inv = RatFunc::from_poly(etale_factor(field)).inv().unwrap();
        let two = RatFunc::from_i64(field, 2);
        let a = self
            .b
            .add(&two.mul(&f).mul(&self.b.derivative()).mul(&e_inv));
        let b = two.mul(&self.a.derivative()).mul(&e_inv);
        FnElem { a, b }
    }

    /// `(a, b)` mapped coefficient-wise.
    pub fn try_map<T: Scalar>(
        &self,
        f: impl Fn(&RatFunc<S>) -> crate::Result<RatFunc<T>>,
    ) -> crate::Result<FnElem<T>> {
        Ok(FnElem {
            a: f(&self.a)?,
            b: f(&self.b)?,
        })
    }

    pub fn to_expr(&self, var: &str) -> String {
        if self.b.is_zero() {
            return self.a.to_expr(var);
        }
        format!("({}) + ({})*y", self.a.to_expr(var), self.b.to_expr(var))
    }
}

impl<S: Scalar> fmt::Debug for FnElem<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr("x"))
    }
}

impl<S: Scalar> fmt::Display for FnElem<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr("x"))
    }
}

/// A square matrix of curve functions.
pub type FnMatrix<S> = Vec<Vec<FnElem<S>>>;

pub fn identity<S: Scalar>(field: GroundField, n: usize) -> FnMatrix<S> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        FnElem::one(field)
                    } else {
                        FnElem::zero(field)
                    }
                })
                .collect()
        })
        .collect()
}

pub fn mat_mul<S: Scalar>(a: &FnMatrix<S>, b: &FnMatrix<S>, curve: CurveDesc) -> FnMatrix<S> {
    let n = a.len();
    let m = b[0].len();
    let field = a[0][0].field();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut acc = FnElem::zero(field);
                    for (k, bk) in b.iter().enumerate() {
                        if a[i][k].is_zero() || bk[j].is_zero() {
                            continue;
                        }
                        acc = acc.add(&a[i][k].mul(&bk[j], curve));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn mat_sub<S: Scalar>(a: &FnMatrix<S>, b: &FnMatrix<S>) -> FnMatrix<S> {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x.sub(y)).collect())
        .collect()
}

pub fn mat_derive<S: Scalar>(a: &FnMatrix<S>, curve: CurveDesc) -> FnMatrix<S> {
    a.iter()
        .map(|r| r.iter().map(|x| x.derive(curve)).collect())
        .collect()
}

/// Inverse by Gauss–Jordan elimination; `None` if singular.
pub fn mat_inv<S: Scalar>(a: &FnMatrix<S>, curve: CurveDesc) -> Option<FnMatrix<S>> {
    let n = a.len();
    let field = a[0][0].field();
    let mut m = a.clone();
    let mut inv = identity(field, n);
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        inv.swap(col, piv);
        let pi = m[col][col].inv(curve)?;
        for j in 0..n {
            m[col][j] = m[col][j].mul(&pi, curve);
            inv[col][j] = inv[col][j].mul(&pi, curve);
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for j in 0..n {
                let t = factor.mul(&m[col][j], curve);
                m[r][j] = m[r][j].sub(&t);
                let t = factor.mul(&inv[col][j], curve);
                inv[r][j] = inv[r][j].sub(&t);
            }
        }
    }
    Some(inv)
}
