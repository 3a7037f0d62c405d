use compdiff::series::{parse_symbol, validate_self_map, CoefficientVector, Expr, Symbol};
use compdiff::{Complex64, Error};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn random_series(rng: &mut ChaCha8Rng, order: usize) -> CoefficientVector {
    CoefficientVector::new(
        (0..order)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect(),
    )
}

fn assert_close(a: &[Complex64], b: &[Complex64], tol: f64) {
    assert_eq!(a.len(), b.len());
    for (k, (x, y)) in a.iter().zip(b).enumerate() {
        assert!((x - y).norm() <= tol, "coefficient {k}: {x} vs {y}");
    }
}

#[test]
fn half_map_coefficients() {
    let t = Symbol::half_map().taylor(4).unwrap();
    assert_close(t.as_slice(), &[c(0.5), c(0.5), c(0.0), c(0.0)], 1e-15);
}

#[test]
fn dilation_coefficients() {
    let t = Symbol::dilation(c(0.3)).taylor(3).unwrap();
    assert_close(t.as_slice(), &[c(0.0), c(0.3), c(0.0)], 1e-15);
}

#[test]
fn square_root_series_matches_binomial_oracle() {
    let order = 40;
    let s = CoefficientVector::one_minus_z_pow(0.5, order);
    // (−1)^k C(1/2, k) by the product formula.
    let oracle: Vec<Complex64> = (0..order)
        .map(|k| {
            let mut v = 1.0;
            for j in 0..k {
                v *= (0.5 - j as f64) / (j as f64 + 1.0);
            }
            c(if k % 2 == 0 { v } else { -v })
        })
        .collect();
    assert_close(s.as_slice(), &oracle, 1e-14);
    assert_close(&s.as_slice()[..4], &[c(1.0), c(-0.5), c(-0.125), c(-0.0625)], 1e-15);
    // Squaring gives back 1 − z.
    let sq = s.mul_truncated(&s);
    let mut one_minus_z = vec![c(0.0); order];
    one_minus_z[0] = c(1.0);
    one_minus_z[1] = c(-1.0);
    assert_close(sq.as_slice(), &one_minus_z, 1e-13);
}

#[test]
fn multiplication_is_associative_and_commutative() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let (a, b, d) = (
            random_series(&mut rng, 24),
            random_series(&mut rng, 24),
            random_series(&mut rng, 24),
        );
        let left = a.mul_truncated(&b).mul_truncated(&d);
        let right = a.mul_truncated(&b.mul_truncated(&d));
        assert_close(left.as_slice(), right.as_slice(), 1e-12);
        assert_close(a.mul_truncated(&b).as_slice(), b.mul_truncated(&a).as_slice(), 1e-13);
    }
}

#[test]
fn powi_matches_repeated_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let a = random_series(&mut rng, 16).scale(c(0.5));
    let mut p = CoefficientVector::constant(c(1.0), 16);
    for k in 0..7 {
        assert_close(a.powi(k).as_slice(), p.as_slice(), 1e-12);
        p = p.mul_truncated(&a);
    }
}

#[test]
fn exp_matches_contour_oracle() {
    let order = 20;
    let u = CoefficientVector::new(vec![c(0.1), c(0.3), c(-0.2), Complex64::new(0.0, 0.15)]);
    let u = CoefficientVector::new(
        u.as_slice().iter().copied().chain(std::iter::repeat(c(0.0))).take(order).collect(),
    );
    let e = u.exp().unwrap();
    // Coefficients of exp(p) by the trapezoid rule on the unit circle.
    let m = 256;
    let p = |z: Complex64| c(0.1) + c(0.3) * z + c(-0.2) * z * z + Complex64::new(0.0, 0.15) * z * z * z;
    let oracle: Vec<Complex64> = (0..order)
        .map(|k| {
            (0..m)
                .map(|j| {
                    let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / m as f64);
                    p(w).exp() * w.powi(-(k as i32))
                })
                .sum::<Complex64>()
                / m as f64
        })
        .collect();
    assert_close(e.as_slice(), &oracle, 1e-13);
}

#[test]
fn recip_inverts() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut a = random_series(&mut rng, 18);
    let mut v = a.clone().into_vec();
    v[0] = c(2.0);
    a = CoefficientVector::new(v);
    let prod = a.mul_truncated(&a.recip().unwrap());
    let mut one = vec![c(0.0); 18];
    one[0] = c(1.0);
    assert_close(prod.as_slice(), &one, 1e-10);
    assert!(matches!(
        CoefficientVector::variable(4).recip(),
        Err(Error::DivisionByZeroConstantTerm)
    ));
}

#[test]
fn catalogue_values() {
    assert!((Symbol::half_map().evaluate(c(1.0)).unwrap() - c(1.0)).norm() < 1e-15);
    assert!((Symbol::corner_map().evaluate(c(0.0)).unwrap() - c(0.5)).norm() < 1e-15);
    let oracle = 1.0 / (1.0 + 0.5_f64.sqrt());
    assert!((Symbol::corner_map().evaluate(c(0.5)).unwrap() - c(oracle)).norm() < 1e-12);
    assert!((oracle - 0.585786).abs() < 1e-6);
}

#[test]
fn taylor_agrees_with_evaluation_inside_the_disc() {
    let z = Complex64::new(0.2, -0.1);
    for spec in ["corner_map", "power_perturbation(alpha=3, c=0.005)", "mobius(a=0.3+0.2i, theta=1)"] {
        let s = parse_symbol(spec).unwrap();
        let t = s.taylor(120).unwrap();
        let horner = t.as_slice().iter().rev().fold(c(0.0), |acc, a| acc * z + a);
        assert!((horner - s.evaluate(z).unwrap()).norm() < 1e-12, "{spec}");
    }
}

#[test]
fn self_map_validation() {
    let half = validate_self_map(&Symbol::half_map(), 256);
    assert!(half.pass);
    assert!((half.max_modulus - 1.0).abs() < 1e-12);
    // cos(t/2) rounds to 1 for |t| below about 2e-8.
    assert!(half.argmax_t.abs() < 1e-7);

    let big = validate_self_map(&Symbol::dilation(c(2.0)), 256);
    assert!(!big.pass);
    assert!((big.max_modulus - 2.0).abs() < 1e-12);

    let corner = validate_self_map(&Symbol::corner_perturbation(0.01).unwrap(), 4096);
    assert!(corner.pass, "{corner:?}");
    // Dense boundary sampling oracle, independent of the validator's grid.
    let s = Symbol::corner_perturbation(0.01).unwrap();
    let m = 20_000;
    let max = (1..m)
        .map(|j| {
            let t = -std::f64::consts::PI + 2.0 * std::f64::consts::PI * j as f64 / m as f64;
            s.evaluate(Complex64::from_polar(1.0, t)).unwrap().norm()
        })
        .fold(0.0_f64, f64::max);
    assert!(max <= 1.0 + 1e-12);
}

#[test]
fn parse_errors_name_the_token() {
    match parse_symbol("dilation(b=0.5)") {
        Err(Error::Parse { token, .. }) => assert_eq!(token, "b"),
        other => panic!("{other:?}"),
    }
    match parse_symbol("dilation(a=zz)") {
        Err(Error::Parse { token, .. }) => assert!(token.contains("zz")),
        other => panic!("{other:?}"),
    }
    assert!(matches!(parse_symbol("bogus"), Err(Error::Parse { .. })));
    assert!(parse_symbol("constant(c=0.5-0.25i)").is_ok());
}

#[test]
fn custom_expression_round_trip() {
    let e = Expr::Add(vec![Expr::real(0.25), Expr::scaled(c(0.5), Expr::PowInt(Box::new(Expr::Z), 2))]);
    let s = Symbol::custom("q", e, true);
    let t = s.taylor(4).unwrap();
    assert_close(t.as_slice(), &[c(0.25), c(0.0), c(0.5), c(0.0)], 1e-15);
}
