use proptest::prelude::*;
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float, Rational};

use pcurve::hyperbolic::{
    capacity_lower_bound, domain_boundary_distance, domain_boundary_distance_with, edge_distance,
    mobius_alpha, mobius_alpha_inv, FundamentalDomain,
};
use pcurve::modular::{
    beta, cm_constant, eisenstein_g2_g3, eta, gamma_rational, lambda_fn, lambda_prime, theta,
    thetas, wp_half_period, CmConstant, ThetaKind, UpperHalfPoint,
};
use pcurve::Error;

const PREC: u32 = 256;
const W: u32 = PREC + 64;

fn pi() -> Float {
    Float::with_val(W, Constant::Pi)
}

fn tol(bits: u32) -> Float {
    Float::with_val(W, 1) >> bits
}

fn point(re: f64, im: f64) -> UpperHalfPoint {
    UpperHalfPoint::new(Complex::with_val(W, (re, im))).unwrap()
}

fn shifted(t: &UpperHalfPoint, by: &Complex) -> UpperHalfPoint {
    UpperHalfPoint::new(Complex::with_val(W, t.value() + by)).unwrap()
}

fn dist(a: &Complex, b: &Complex) -> Float {
    Float::with_val(W, Complex::with_val(W, a - b).abs_ref())
}

fn g(n: i32, d: i32) -> Float {
    gamma_rational(&Rational::from((n, d)), PREC).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lambda_transformations(re in -1.0f64..1.0, im in 0.4f64..2.0) {
        let t = point(re, im);
        let l = lambda_fn(&t, PREC).unwrap();
        let l2 = lambda_fn(&shifted(&t, &Complex::with_val(W, (2, 0))), PREC).unwrap();
        prop_assert!(l2.distance(l.value()) < l.abs() * tol(220));
        // λ = θ₀₀⁴/θ₀₁⁴: λ(t + 1) = 1/λ, λ(−1/t) = λ/(λ − 1)
        let l1 = lambda_fn(&shifted(&t, &Complex::with_val(W, (1, 0))), PREC).unwrap();
        let want = Complex::with_val(W, 1u32 / l.value());
        prop_assert!(l1.distance(&want) < l1.abs() * tol(210));
        let inv = UpperHalfPoint::new(Complex::with_val(W, -1) / t.value()).unwrap();
        let linv = lambda_fn(&inv, PREC).unwrap();
        let want = Complex::with_val(W, l.value() / Complex::with_val(W, l.value() - 1u32));
        prop_assert!(linv.distance(&want) < linv.abs() * tol(210));
    }

    #[test]
    fn jacobi_and_eta(re in -1.0f64..1.0, im in 0.4f64..2.0) {
        let t = point(re, im);
        let th = thetas(&t, PREC).unwrap();
        let p4 = |z: &Complex| z.clone().pow(4u32);
        let lhs = p4(th.t00.value());
        let rhs = Complex::with_val(W, p4(th.t01.value()) + p4(th.t10.value()));
        prop_assert!(dist(&lhs, &rhs) < tol(200));
        // 2η³ = θ₀₀θ₀₁θ₁₀
        let e = eta(&t, PREC).unwrap();
        let lhs = e.value().clone().pow(3u32) * 2u32;
        let rhs = Complex::with_val(W, th.t00.value() * th.t01.value()) * th.t10.value();
        prop_assert!(dist(&lhs, &rhs) < tol(200));
        prop_assert_eq!(theta(ThetaKind::T10, &t, PREC).unwrap(), th.t10);
    }

    #[test]
    fn lambda_prime_against_difference_quotient(re in -1.0f64..1.0, im in 0.4f64..2.0) {
        let t = point(re, im);
        let h = Complex::with_val(W, (Float::with_val(W, 1) >> 70u32, 0));
        let fwd = lambda_fn(&shifted(&t, &h), PREC).unwrap();
        let back = lambda_fn(&shifted(&t, &Complex::with_val(W, -&h)), PREC).unwrap();
        let dq = Complex::with_val(W, fwd.value() - back.value()) / Complex::with_val(W, &h * 2u32);
        let lp = lambda_prime(&t, PREC).unwrap();
        let rel = lp.distance(&dq) / lp.abs();
        prop_assert!(rel < tol(120), "relative gap {}", rel.to_f64());
    }

    #[test]
    fn precision_doubling(re in -1.0f64..1.0, im in 0.2f64..2.0) {
        let t = point(re, im);
        let lo = lambda_fn(&t, 128).unwrap();
        let hi = lambda_fn(&t, 256).unwrap();
        prop_assert!(hi.distance(lo.value()) < Float::with_val(W, hi.abs() >> 120u32) + tol(120));
    }

    #[test]
    fn mobius_round_trip(r in 0.0f64..0.95, arg in 0.0f64..std::f64::consts::TAU) {
        let z = Complex::with_val(W, (r * arg.cos(), r * arg.sin()));
        let t = mobius_alpha(&z, PREC).unwrap();
        prop_assert!(dist(&mobius_alpha_inv(&t, PREC), &z) < tol(220));
    }
}

#[test]
fn region_guard() {
    let t = point(0.0, 0.01);
    assert!(matches!(lambda_fn(&t, PREC), Err(Error::Region(_))));
    assert!(UpperHalfPoint::new(Complex::with_val(W, (0, -1))).is_err());
}

#[test]
fn gamma_reflection_and_beta() {
    let p = pi();
    let r3 = Float::with_val(W, 3).sqrt();
    assert!((g(1, 3) * g(2, 3) - Float::with_val(W, &p * 2u32) / &r3).abs() < tol(240));
    let r2 = Float::with_val(W, 2).sqrt();
    assert!((g(1, 4) * g(3, 4) - Float::with_val(W, &p * &r2)).abs() < tol(240));
    assert!((g(7, 3) - g(4, 3) * Float::with_val(W, 4) / 3u32).abs() < tol(240));
    let b = beta(&Rational::from((1, 2)), &Rational::from((1, 2)), PREC).unwrap();
    assert!((b - &p).abs() < tol(240));
    assert!(gamma_rational(&Rational::from(-2), PREC).is_err());
}

#[test]
fn eisenstein_vanishing() {
    let (_, g3) = eisenstein_g2_g3(&UpperHalfPoint::i(PREC), PREC).unwrap();
    assert!(g3.abs() < tol(220));
    let (g2, _) = eisenstein_g2_g3(&UpperHalfPoint::hexagonal(PREC), PREC).unwrap();
    assert!(g2.abs() < tol(220));
    let sq = UpperHalfPoint::square_half(PREC);
    let (g2, g3) = eisenstein_g2_g3(&sq, PREC).unwrap();
    assert!(g3.abs() < tol(210));
    // the half period is a root of 4X³ − g₂X − g₃
    let (wp, _) = wp_half_period(&sq, PREC).unwrap();
    let x = wp.value();
    let cubic = Complex::with_val(W, x.clone().pow(3u32) * 4u32)
        - Complex::with_val(W, g2.value() * x)
        - g3.value();
    assert!(Float::with_val(W, cubic.abs_ref()) < tol(200));
    assert!(g2.abs() > 1);
}

#[test]
fn eta_at_hexagonal_point() {
    let t0 = UpperHalfPoint::hexagonal(PREC);
    let e = eta(&t0, PREC).unwrap();
    let lhs = e.abs().pow(4u32) * t0.im();
    let ratio = g(1, 3) / g(2, 3);
    let rhs = ratio.pow(3u32) / (pi() * 4u32 * Float::with_val(W, 3).sqrt());
    assert!((lhs - rhs).abs() < tol(220));
}

#[test]
fn cm_constants_against_gamma_closed_forms() {
    let p = pi();
    let two = Float::with_val(W, 2);
    let rinf = g(1, 3).pow(6u32) * 3u32
        / (two.clone().pow(Float::with_val(W, 8) / 3u32) * p.clone().pow(3u32));
    let ere = g(1, 4).pow(2u32) / (two.clone().pow(1.5f64) * p.clone().pow(1.5f64));
    let ec = g(1, 4).pow(4u32) / (two.pow(2.5f64) * p.pow(2u32));
    for (which, want) in [
        (CmConstant::Rinf, rinf),
        (CmConstant::Eremenko, ere),
        (CmConstant::EcRinf, ec),
    ] {
        let v = cm_constant(which, PREC).unwrap();
        assert!((v.value.clone() - want).abs() < tol(230), "{}", which.tag());
    }
}

#[test]
fn lambda_injective_on_domain_grid() {
    let dom = FundamentalDomain::default();
    let mut values = Vec::new();
    for i in 0..=16 {
        for j in 0..=10 {
            let t = point(-1.45 + 1.9 * i as f64 / 16.0, 0.1 + 0.25 * j as f64);
            if dom.contains(&t) {
                values.push(lambda_fn(&t, 64).unwrap().to_f64());
            }
        }
    }
    assert!(values.len() > 40);
    for (k, a) in values.iter().enumerate() {
        for b in &values[k + 1..] {
            assert!((a.0 - b.0).hypot(a.1 - b.1) > 1e-6);
        }
    }
}

#[test]
fn boundary_minimum_is_stable_and_symmetric() {
    let t0 = UpperHalfPoint::hexagonal(PREC);
    let coarse = domain_boundary_distance_with(&t0, 512, PREC).unwrap();
    let fine = domain_boundary_distance(&t0, PREC).unwrap();
    assert!((coarse.distance.clone() - &fine.distance).abs() < tol(100));
    assert_eq!(coarse.edge, fine.edge);
    // t ↦ −1 − t̄ fixes t₀ and swaps edges k and 5 − k
    let dom = FundamentalDomain::default();
    let d: Vec<Float> = dom
        .edges
        .iter()
        .map(|e| edge_distance(e, &t0, 1024, PREC).distance)
        .collect();
    for k in 0..3 {
        assert!(
            (d[k].clone() - &d[5 - k]).abs() < tol(100),
            "edges {k} and {}",
            5 - k
        );
    }
    let min = d.iter().min_by(|a, b| a.partial_cmp(b).unwrap()).unwrap();
    assert!((min.clone() - &fine.distance).abs() < tol(100));
}

#[test]
fn boundary_point_has_distance_zero() {
    let t = point(0.5, 2.0);
    let m = domain_boundary_distance(&t, PREC).unwrap();
    assert!(m.distance < tol(60));
    assert_eq!(m.edge, 5);
    assert!(matches!(
        domain_boundary_distance(&point(0.7, 2.0), PREC),
        Err(Error::Region(_))
    ));
}

#[test]
fn capacity_bound_components() {
    let b = capacity_lower_bound(PREC).unwrap();
    assert!((b.disc_radius.to_f64() - 0.456850251748).abs() < 1e-11);
    let want = b.disc_radius.clone() * &b.derivative;
    assert!((want - &b.value).abs() < tol(200));
}
