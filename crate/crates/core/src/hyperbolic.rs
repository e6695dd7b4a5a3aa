//! Disc and half-plane models, the six-arc fundamental domain around
//! `t₀ = (−1 + √3 i)/2`, and the inscribed-disc capacity bound.

use rug::float::Constant;
use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::modular::{lambda_prime, UpperHalfPoint};

const GUARD: u32 = 32;

fn work(prec: u32) -> u32 {
    prec + GUARD
}

fn sqrt3_over_2(w: u32) -> Float {
    Float::with_val(w, 3).sqrt() / 2u32
}

fn abs(z: &Complex) -> Float {
    Float::with_val(z.prec().0, z.abs_ref())
}

/// `α(z) = −1/2 + (√3 i/2)·(z + 1)/(1 − z)`, sending the unit disc onto the
/// upper half-plane with `α(0) = t₀`.
pub fn mobius_alpha(z: &Complex, prec: u32) -> Result<UpperHalfPoint> {
    let w = work(prec);
    if abs(z) >= 1 {
        return Err(Error::Domain("|z| must be < 1".into()));
    }
    let num = Complex::with_val(w, z + 1u32);
    let den = Complex::with_val(w, 1u32 - z);
    let k = Complex::with_val(w, (0, sqrt3_over_2(w)));
    UpperHalfPoint::new(num / den * k - Float::with_val(w, 0.5))
}

/// `α⁻¹(t) = (t − t₀)/(t − t̄₀)`.
pub fn mobius_alpha_inv(t: &UpperHalfPoint, prec: u32) -> Complex {
    let w = work(prec);
    let t0 = UpperHalfPoint::hexagonal(prec);
    let t0bar = Complex::with_val(w, t0.value().conj_ref());
    Complex::with_val(w, t.value() - t0.value()) / Complex::with_val(w, t.value() - &t0bar)
}

/// Hyperbolic distance for `|dz|/Im z`.
///
/// ```
/// use pcurve::hyperbolic::poincare_distance;
/// use pcurve::modular::UpperHalfPoint;
///
/// let i = UpperHalfPoint::i(64);
/// assert_eq!(poincare_distance(&i, &i, 64), 0);
/// ```
pub fn poincare_distance(z1: &UpperHalfPoint, z2: &UpperHalfPoint, prec: u32) -> Float {
    let w = work(prec);
    let d = abs(&Complex::with_val(w, z1.value() - z2.value()));
    let s = Float::with_val(w, z1.im() * z2.im()).sqrt() * 2u32;
    (d / s).asinh() * 2u32
}

/// Hyperbolic distance in the disc for `2|dz|/(1 − |z|²)`.
pub fn disc_distance(z1: &Complex, z2: &Complex, prec: u32) -> Result<Float> {
    let w = work(prec);
    if abs(z1) >= 1 || abs(z2) >= 1 {
        return Err(Error::Domain("points must lie in the unit disc".into()));
    }
    let num = abs(&Complex::with_val(w, z1 - z2));
    let den = abs(&(Complex::with_val(w, 1) - Complex::with_val(w, z1.conj_ref()) * z2));
    Ok((num / den).atanh() * 2u32)
}

/// One boundary edge of the domain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Edge {
    /// `Re t = re`, `Im t ≥ √3/2`.
    Vertical { re: f64 },
    /// `|t − center| = radius` for arguments in `[from, to]` (multiples of π).
    Circle {
        center: (i64, i64),
        radius: (i64, i64),
        from: (i64, i64),
        to: (i64, i64),
    },
}

/// The region cut out by `Re t = −3/2`, `|t + 2| = 1`, `|t + 2/3| = 1/3`,
/// `|t + 1/3| = 1/3`, `|t − 1| = 1`, `Re t = 1/2`, containing `t₀`.
#[derive(Clone, Debug, PartialEq)]
pub struct FundamentalDomain {
    pub edges: [Edge; 6],
}

impl Default for FundamentalDomain {
    fn default() -> Self {
        use Edge::*;
        FundamentalDomain {
            edges: [
                Vertical { re: -1.5 },
                Circle {
                    center: (-2, 1),
                    radius: (1, 1),
                    from: (0, 1),
                    to: (1, 3),
                },
                Circle {
                    center: (-2, 3),
                    radius: (1, 3),
                    from: (1, 3),
                    to: (1, 1),
                },
                Circle {
                    center: (-1, 3),
                    radius: (1, 3),
                    from: (0, 1),
                    to: (2, 3),
                },
                Circle {
                    center: (1, 1),
                    radius: (1, 1),
                    from: (2, 3),
                    to: (1, 1),
                },
                Vertical { re: 0.5 },
            ],
        }
    }
}

fn ratio(w: u32, (n, d): (i64, i64)) -> Float {
    Float::with_val(w, n) / d
}

impl Edge {
    /// Point at parameter `s ∈ [0, 1]`; vertical edges use `Im t = (√3/2)·e^{8s}`.
    pub fn point(&self, s: &Float, w: u32) -> Complex {
        match *self {
            Edge::Vertical { re } => {
                let y = Float::with_val(w, s * 8u32).exp() * sqrt3_over_2(w);
                Complex::with_val(w, (Float::with_val(w, re), y))
            }
            Edge::Circle {
                center,
                radius,
                from,
                to,
            } => {
                let pi = Float::with_val(w, Constant::Pi);
                let a = ratio(w, from) * &pi;
                let b = ratio(w, to) * &pi;
                let theta = Float::with_val(w, &b - &a) * s + a;
                let (sin, cos) = theta.sin_cos(Float::new(w));
                let r = ratio(w, radius);
                Complex::with_val(
                    w,
                    (ratio(w, center) + Float::with_val(w, &r * &cos), r * sin),
                )
            }
        }
    }
}

impl FundamentalDomain {
    /// Closed-region membership.
    pub fn contains(&self, t: &UpperHalfPoint) -> bool {
        let w = t.value().prec().0;
        let re = t.value().real();
        if *re < -1.5 || *re > 0.5 {
            return false;
        }
        self.edges.iter().all(|e| match *e {
            Edge::Vertical { .. } => true,
            Edge::Circle { center, radius, .. } => {
                let d = abs(&Complex::with_val(w, t.value() - ratio(w, center)));
                d >= ratio(w, radius)
            }
        })
    }
}

/// Closest boundary point found by [`domain_boundary_distance`].
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryMin {
    pub distance: Float,
    pub point: Complex,
    pub edge: usize,
}

/// `|t − c|²/Im t`, increasing in the hyperbolic distance from `c`.
fn objective(t: &Complex, c: &Complex, w: u32) -> Float {
    // cusp endpoints can round to Im t ≤ 0
    if *t.imag() <= 0 {
        return Float::with_val(w, rug::float::Special::Infinity);
    }
    let d = Complex::with_val(w, t - c);
    Float::with_val(w, d.norm_ref()) / t.imag()
}

/// Minimum of the distance from `c` over one edge: dense sampling, then
/// golden-section search on the best bracket.
pub fn edge_distance(edge: &Edge, c: &UpperHalfPoint, samples: usize, prec: u32) -> BoundaryMin {
    let w = work(prec);
    let param = |i: usize| Float::with_val(w, i) / samples as u32;
    let eval = |s: &Float| objective(&edge.point(s, w), c.value(), w);
    let mut best = 0;
    let mut best_val = eval(&param(0));
    for i in 1..=samples {
        let v = eval(&param(i));
        if v < best_val {
            best = i;
            best_val = v;
        }
    }
    let mut lo = param(best.saturating_sub(1));
    let mut hi = param((best + 1).min(samples));
    let phi = (Float::with_val(w, 5).sqrt() - 1u32) / 2u32;
    let tol = Float::with_val(w, 1) >> (prec / 2 + 8);
    let mut x1 = Float::with_val(w, &hi - &lo) * &phi;
    x1 = Float::with_val(w, &hi - &x1);
    let mut x2 = Float::with_val(w, &hi - &lo) * &phi + &lo;
    let mut f1 = eval(&x1);
    let mut f2 = eval(&x2);
    while Float::with_val(w, &hi - &lo) > tol {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = Float::with_val(w, &hi - Float::with_val(w, &hi - &lo) * &phi);
            f1 = eval(&x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = Float::with_val(w, &lo + Float::with_val(w, &hi - &lo) * &phi);
            f2 = eval(&x2);
        }
    }
    let mut s = Float::with_val(w, &lo + &hi) / 2u32;
    if best_val < eval(&s) {
        s = param(best);
    }
    let point = edge.point(&s, w);
    let pt = UpperHalfPoint::new(point.clone()).expect("edges stay in the upper half-plane");
    BoundaryMin {
        distance: poincare_distance(c, &pt, prec),
        point,
        edge: 0,
    }
}

/// Hyperbolic distance from `t0` to the boundary of the domain, with the
/// closest point. Ties between edges go to the lowest edge index.
pub fn domain_boundary_distance(t0: &UpperHalfPoint, prec: u32) -> Result<BoundaryMin> {
    domain_boundary_distance_with(t0, 1024, prec)
}

/// As [`domain_boundary_distance`] with `samples` points per edge.
pub fn domain_boundary_distance_with(
    t0: &UpperHalfPoint,
    samples: usize,
    prec: u32,
) -> Result<BoundaryMin> {
    let dom = FundamentalDomain::default();
    if !dom.contains(t0) {
        return Err(Error::Region(
            "point outside the closed fundamental domain".into(),
        ));
    }
    let tie = Float::with_val(work(prec), 1) >> (prec / 2);
    let mut best: Option<BoundaryMin> = None;
    for (i, e) in dom.edges.iter().enumerate() {
        let mut m = edge_distance(e, t0, samples, prec);
        m.edge = i;
        let better = match &best {
            None => true,
            Some(b) => Float::with_val(work(prec), &b.distance - &m.distance) > tie,
        };
        if better {
            best = Some(m);
        }
    }
    Ok(best.expect("six edges"))
}

/// Inscribed-disc lower bound for the capacity of `λ(domain)` seen from
/// `λ(t₀)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CapacityBound {
    /// `|α⁻¹(a)|` for the closest boundary point `a`.
    pub disc_radius: Float,
    /// `|(λ∘α)'(0)| = |λ'(t₀)|·|α'(0)|`.
    pub derivative: Float,
    pub value: Float,
    pub argmin: Complex,
    pub prec: u32,
}

/// `|α⁻¹(a)|·|(λ∘α)'(0)|`.
///
/// ```
/// let b = pcurve::hyperbolic::capacity_lower_bound(96).unwrap();
/// assert!((b.value.to_f64() - 2.5733).abs() < 1e-3);
/// ```
pub fn capacity_lower_bound(prec: u32) -> Result<CapacityBound> {
    let w = work(prec);
    let t0 = UpperHalfPoint::hexagonal(prec);
    let m = domain_boundary_distance(&t0, prec)?;
    let a = UpperHalfPoint::new(m.point.clone())?;
    let disc_radius = abs(&mobius_alpha_inv(&a, prec));
    // |α'(0)| = √3 = 2 Im t₀
    let derivative = lambda_prime(&t0, prec)?.abs() * Float::with_val(w, 3).sqrt();
    let value = Float::with_val(w, &disc_radius * &derivative);
    Ok(CapacityBound {
        disc_radius,
        derivative,
        value,
        argmin: m.point,
        prec,
    })
}
