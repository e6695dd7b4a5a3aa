//! Truncated power series with exact coefficients.

use std::fmt;

use super::field::{GroundField, Scalar};
use super::poly::Poly;
use super::ratfunc::RatFunc;
use crate::error::{Error, Result};

/// `Σ_{n ≤ N} a_n (x − c)^n`; nothing is claimed beyond index `N`.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncSeries<S: Scalar> {
    center: S,
    coeffs: Vec<S>,
}

impl<S: Scalar> TruncSeries<S> {
    /// Coefficients `a_0..a_N`; `coeffs` must be nonempty.
    pub fn new(center: S, coeffs: Vec<S>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a truncated series has at least one coefficient"
        );
        TruncSeries { center, coeffs }
    }

    pub fn zero(center: S, order: usize) -> Self {
        let z = S::zero(center.field());
        TruncSeries {
            center,
            coeffs: vec![z; order + 1],
        }
    }

    pub fn one(center: S, order: usize) -> Self {
        let mut s = Self::zero(center, order);
        s.coeffs[0] = S::one(s.field());
        s
    }

    /// A polynomial in `x − c`, truncated or padded to `order`.
    pub fn from_poly(center: S, p: &Poly<S>, order: usize) -> Self {
        let coeffs = (0..=order).map(|i| p.coeff(i)).collect();
        TruncSeries { center, coeffs }
    }

    pub fn field(&self) -> GroundField {
        self.center.field()
    }

    pub fn center(&self) -> &S {
        &self.center
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &S {
        &self.coeffs[n]
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order());
        TruncSeries {
            center: self.center.clone(),
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    /// Polynomial part `Σ a_n u^n` in the local variable `u = x − c`.
    pub fn to_poly(&self) -> Poly<S> {
        Poly::new(self.field(), self.coeffs.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(S::is_zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        let coeffs = (0..=n).map(|i| self.coeffs[i].add(&o.coeffs[i])).collect();
        TruncSeries {
            center: self.center.clone(),
            coeffs,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        let coeffs = (0..=n).map(|i| self.coeffs[i].sub(&o.coeffs[i])).collect();
        TruncSeries {
            center: self.center.clone(),
            coeffs,
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        TruncSeries {
            center: self.center.clone(),
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        let field = self.field();
        let mut out = vec![S::zero(field); n + 1];
        for (i, a) in self.coeffs.iter().take(n + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().take(n + 1 - i).enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        TruncSeries {
            center: self.center.clone(),
            coeffs: out,
        }
    }

    /// Multiplicative inverse; requires an invertible constant term.
    pub fn inv(&self) -> Result<Self> {
        let a0 = self.coeffs[0].inv().ok_or(Error::Pole {
            order: self.valuation().unwrap_or(0),
        })?;
        let n = self.order();
        let mut out: Vec<S> = Vec::with_capacity(n + 1);
        out.push(a0.clone());
        for k in 1..=n {
            let mut acc = S::zero(self.field());
            for j in 1..=k {
                acc = acc.add(&self.coeffs[j].mul(&out[k - j]));
            }
            out.push(acc.neg().mul(&a0));
        }
        Ok(TruncSeries {
            center: self.center.clone(),
            coeffs: out,
        })
    }

    /// Term-wise derivative; the order drops by one.
    pub fn derivative(&self) -> Self {
        let field = self.field();
        let mut coeffs: Vec<S> = (1..self.coeffs.len())
            .map(|i| self.coeffs[i].mul(&S::from_i64(field, i as i64)))
            .collect();
        if coeffs.is_empty() {
            coeffs.push(S::zero(field));
        }
        TruncSeries {
            center: self.center.clone(),
            coeffs,
        }
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// `p(self)` for a polynomial `p`, by Horner's rule.
    pub fn apply_poly(&self, p: &Poly<S>) -> Self {
        let mut acc = Self::zero(self.center.clone(), self.order());
        for c in p.coeffs().iter().rev() {
            acc = acc.mul(self);
            acc.coeffs[0] = acc.coeffs[0].add(c);
        }
        acc
    }

    /// `f(inner)` where `f` is given by its expansion at `inner`'s constant
    /// term; requires `self` to be a series in `u` about that constant.
    pub fn compose(&self, inner: &Self) -> Self {
        let mut shifted = inner.clone();
        shifted.coeffs[0] = S::zero(self.field());
        let n = inner.order().min(self.order());
        let mut acc = Self::zero(inner.center.clone(), n);
        for c in self.coeffs[..=n].iter().rev() {
            acc = acc.mul(&shifted);
            acc.coeffs[0] = acc.coeffs[0].add(c);
        }
        acc
    }
}

impl<S: Scalar> fmt::Debug for TruncSeries<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "TruncSeries(center = {}, {:?})",
            self.center, self.coeffs
        )
    }
}

/// Taylor expansion of `f` at `center` to order `N`.
pub fn series_expand<S: Scalar>(
    f: &RatFunc<S>,
    center: &S,
    order: usize,
) -> Result<TruncSeries<S>> {
    let num = f.num().taylor_shift(center);
    let den = f.den().taylor_shift(center);
    if den.coeff(0).is_zero() {
        return Err(Error::Pole {
            order: f.pole_order(center),
        });
    }
    let n = TruncSeries::from_poly(center.clone(), &num, order);
    let d = TruncSeries::from_poly(center.clone(), &den, order);
    Ok(n.mul(&d.inv()?))
}
