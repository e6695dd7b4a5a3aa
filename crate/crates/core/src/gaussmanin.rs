//! Gauss–Manin connection of the Legendre family `y² = x(x−1)(x−λ)`.
//!
//! Differentiating `x^k dx/2y` in `λ` gives `x^{k+1}(x−1)/4 · dx/y³`. A form
//! `P dx/y³` is rewritten with `P = A f + B f'` as `(A + 2B') dx/y` modulo
//! `d(B/y)`, and `Q dx/y` is brought down to degree ≤ 1 with
//! `d(x^j y) = (j x^{j−1} f + x^j f'/2) dx/y`.
//!
//! Coefficients live in `Q(λ)`; the parameter prints as `t`.

use crate::connection::{Connection, CurveDesc};
use crate::error::Result;
use crate::exactmath::{
    gauss_valuation, FieldElem, GroundField, PlaceId, Poly, RatFunc, TruncSeries, Valuation,
};

/// A rational function of `λ`.
pub type Coeff = RatFunc<FieldElem>;

/// A polynomial in `x` over `Q(λ)`.
pub type XPoly = Poly<Coeff>;

const Q: GroundField = GroundField::Rationals;

fn c(n: i64, d: i64) -> Coeff {
    RatFunc::constant(FieldElem::ratio(Q, n, d))
}

fn lambda() -> Coeff {
    RatFunc::x(Q)
}

/// `f = x(x−1)(x−λ) = x³ − (1+λ)x² + λx`.
pub fn legendre_cubic() -> XPoly {
    let l = lambda();
    Poly::new(Q, vec![c(0, 1), l.clone(), c(-1, 1).sub(&l), c(1, 1)])
}

/// Class `c0·dx/2y + c1·x dx/2y` in de Rham cohomology.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeRhamClass {
    pub c0: Coeff,
    pub c1: Coeff,
}

impl DeRhamClass {
    pub fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.c1.is_zero()
    }

    pub fn as_vector(&self) -> [Coeff; 2] {
        [self.c0.clone(), self.c1.clone()]
    }
}

/// `Q dx/y` reduced to the basis `{dx/2y, x dx/2y}`.
pub fn reduce_dx_over_y(q: &XPoly) -> DeRhamClass {
    let mut q = q.clone();
    while let Some(m) = q.degree().filter(|&m| m >= 2) {
        let j = m - 2;
        let ex = exact_dx_over_y(j);
        // leading coefficient of d(x^j y) is j + 3/2
        let lead = c(2 * j as i64 + 3, 2);
        let factor = q.lead().unwrap().mul(&lead.inv().unwrap());
        q = q.sub(&ex.scale(&factor));
        debug_assert!(q.degree().is_none_or(|d| d < m));
    }
    let two = c(2, 1);
    DeRhamClass {
        c0: q.coeff(0).mul(&two),
        c1: q.coeff(1).mul(&two),
    }
}

/// `P dx/y³` reduced to the basis `{dx/2y, x dx/2y}`.
pub fn reduce_dx_over_y3(p: &XPoly) -> DeRhamClass {
    let f = legendre_cubic();
    let df = f.derivative();
    let (g, _u, v) = f.ext_gcd(&df);
    debug_assert!(g.is_one(), "f is separable over Q(λ)");
    let b = p.mul(&v).div_rem(&f).unwrap().1;
    let a = p.sub(&b.mul(&df)).exact_div(&f).unwrap();
    reduce_dx_over_y(&a.add(&b.derivative().scale(&c(2, 1))))
}

/// `d(x^j y) = (j x^{j−1} f + x^j f'/2) dx/y`, as the `dx/y` coefficient.
pub fn exact_dx_over_y(j: usize) -> XPoly {
    let f = legendre_cubic();
    let xj = Poly::monomial(c(1, 1), j);
    let first = if j == 0 {
        Poly::zero(Q)
    } else {
        Poly::monomial(c(j as i64, 1), j - 1).mul(&f)
    };
    first.add(&xj.mul(&f.derivative()).scale(&c(1, 2)))
}

/// `d(x^k/y) = (k x^{k−1} f − x^k f'/2) dx/y³`, as the `dx/y³` coefficient.
pub fn exact_dx_over_y3(k: usize) -> XPoly {
    let f = legendre_cubic();
    let xk = Poly::monomial(c(1, 1), k);
    let first = if k == 0 {
        Poly::zero(Q)
    } else {
        Poly::monomial(c(k as i64, 1), k - 1).mul(&f)
    };
    first.sub(&xk.mul(&f.derivative()).scale(&c(1, 2)))
}

/// `∂/∂λ (x^k dx/2y)` as the `dx/y³` coefficient `x^{k+1}(x−1)/4`.
pub fn lambda_derivative_of_basis(k: usize) -> XPoly {
    Poly::monomial(c(1, 4), k + 1).mul(&Poly::new(Q, vec![c(-1, 1), c(1, 1)]))
}

/// `M` with column `k` holding the coordinates of `∇_{∂λ}(x^k dx/2y)`.
///
/// ```
/// use pcurve::exactmath::{parse_ratfunc, FieldElem, GroundField};
/// use pcurve::gaussmanin::legendre_gm_matrix;
///
/// let m = legendre_gm_matrix();
/// let q = |s| parse_ratfunc::<FieldElem>(s, GroundField::Rationals, "t").unwrap();
/// assert_eq!(m[0][0], q("1/(2*(1-t))"));
/// assert_eq!(m[1][0], q("1/(2*t*(t-1))"));
/// ```
pub fn legendre_gm_matrix() -> [[Coeff; 2]; 2] {
    let col0 = reduce_dx_over_y3(&lambda_derivative_of_basis(0));
    let col1 = reduce_dx_over_y3(&lambda_derivative_of_basis(1));
    [[col0.c0, col1.c0], [col0.c1, col1.c1]]
}

/// The Gauss–Manin matrix as a connection in `t = λ` on `P¹ − {0, 1, ∞}`.
pub fn gm_connection() -> Result<Connection> {
    let m = legendre_gm_matrix();
    let rows = m.iter().map(|r| r.to_vec()).collect();
    Connection::from_ratfuncs("legendre-gm", CurveDesc::P1Minus012Inf, Q, "t", rows)
}

/// `⟨a, b⟩` for the pairing with `⟨dx/2y, x dx/2y⟩ = 1`.
pub fn pairing(a: &[Coeff; 2], b: &[Coeff; 2]) -> Coeff {
    a[0].mul(&b[1]).sub(&a[1].mul(&b[0]))
}

/// Image of `(dx/2y)^{⊗2}` under Kodaira–Spencer: `⟨ω, ∇ω⟩`.
pub fn kodaira_spencer_image() -> Coeff {
    kodaira_spencer_image_scaled(&FieldElem::rational(1))
}

/// Same, for the rescaled form `c·dx/2y`.
pub fn kodaira_spencer_image_scaled(scale: &FieldElem) -> Coeff {
    let m = legendre_gm_matrix();
    let s = RatFunc::constant(scale.clone());
    let omega = [s.clone(), RatFunc::zero(Q)];
    let nabla = [m[0][0].mul(&s), m[1][0].mul(&s)];
    pairing(&omega, &nabla)
}

/// `Σ binom(2n, n)²/16ⁿ λⁿ`, the hypergeometric period of `dx/2y`.
pub fn hypergeometric_period(order: usize) -> TruncSeries<FieldElem> {
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut a = rug::Rational::from(1);
    for n in 0..=order {
        coeffs.push(FieldElem::rational(a.clone()));
        // a_{n+1} = a_n·((2n+1)/(2n+2))²
        let r = rug::Rational::from((2 * n as i64 + 1, 2 * n as i64 + 2));
        a *= rug::Rational::from(&r * &r);
    }
    TruncSeries::new(FieldElem::rational(0), coeffs)
}

/// Checks that the periods `π = (∫ω₀, ∫ω₁)` satisfy `π' = Mᵀπ` when `π₀` is
/// the hypergeometric series: the first row defines `π₁`, and the residual
/// of the second row (denominators cleared) is returned to order `N`.
pub fn picard_fuchs_residual(order: usize) -> TruncSeries<FieldElem> {
    let m = legendre_gm_matrix();
    let zero = FieldElem::rational(0);
    let poly = |p: &Poly<FieldElem>, n: usize| TruncSeries::from_poly(zero.clone(), p, n);
    let pi0 = hypergeometric_period(order + 2);
    // π₁ = (π₀' − M₀₀π₀)/M₁₀
    let m00 = m[0][0].clone();
    let m10 = m[1][0].clone();
    let n1 = order + 1;
    let pi0d = pi0.derivative();
    let lhs_den = m00.den().mul(m10.num());
    let pi1_num = poly(&m00.den().mul(m10.den()), n1)
        .mul(&pi0d)
        .sub(&poly(&m00.num().mul(m10.den()), n1).mul(&pi0.truncate(n1)));
    let pi1 = pi1_num.mul(
        &poly(&lhs_den, n1)
            .inv()
            .expect("M10·den(M00) has no pole at 0 after clearing"),
    );
    // D·π₁' − (D·M₀₁)·π₀ − (D·M₁₁)·π₁ with D = lcm of the denominators
    let d = m[0][1].den().mul(m[1][1].den());
    let d01 = m[0][1].num().mul(m[1][1].den());
    let d11 = m[1][1].num().mul(m[0][1].den());
    let n = order;
    poly(&d, n)
        .mul(&pi1.derivative())
        .sub(&poly(&d01, n).mul(&pi0.truncate(n)))
        .sub(&poly(&d11, n).mul(&pi1.truncate(n)))
}

/// Minimum Gauss valuation of the matrix entries at `place`.
pub fn gm_gauss_valuation(place: &PlaceId) -> Result<Valuation> {
    let m = legendre_gm_matrix();
    let mut v = Valuation::Infinity;
    for e in m.iter().flatten() {
        v = v.min(gauss_valuation(e, place)?);
    }
    Ok(v)
}
