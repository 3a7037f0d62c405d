use compdiff::bounds::{sequence_boundary_pinch, sequence_radial};
use compdiff::hardy::{
    blaschke_eval, carleson_norm, cumulative_length, hyperbolic_distance, hyperbolic_length,
    hyperbolic_length_of, interpolation_constant_bound, kernel_norm_sq, mobius_involution,
    pseudo_distance, uniform_separation, BlaschkeProduct, PointSequence,
};
use compdiff::{Complex64, Error};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn random_point(rng: &mut ChaCha8Rng) -> Complex64 {
    let r: f64 = rng.gen_range(0.0..0.98);
    Complex64::from_polar(r, rng.gen_range(-3.14..3.14))
}

#[test]
fn pseudo_distance_examples() {
    assert!((pseudo_distance(c(0.0), c(0.5)).unwrap() - 0.5).abs() < 1e-15);
    assert_eq!(pseudo_distance(c(0.5), c(0.5)).unwrap(), 0.0);
    assert!((pseudo_distance(c(0.5), c(-0.5)).unwrap() - 1.0 / 1.25).abs() < 1e-15);
}

#[test]
fn hyperbolic_distance_examples() {
    assert_eq!(hyperbolic_distance(c(0.0), c(0.0)).unwrap(), 0.0);
    assert!((hyperbolic_distance(c(0.0), c(0.5)).unwrap() - 3f64.ln()).abs() < 1e-14);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..50 {
        let (z, w) = (random_point(&mut rng), random_point(&mut rng));
        let (a, b) = (hyperbolic_distance(z, w).unwrap(), hyperbolic_distance(w, z).unwrap());
        assert!((a - b).abs() <= 1e-12 * a.max(1.0));
        let rho = pseudo_distance(z, w).unwrap();
        assert!((a - ((1.0 + rho) / (1.0 - rho)).ln()).abs() <= 1e-10 * a.max(1.0));
    }
}

#[test]
fn metric_is_mobius_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..100 {
        let (a, z, w) = (random_point(&mut rng), random_point(&mut rng), random_point(&mut rng));
        let before = pseudo_distance(z, w).unwrap();
        let after = pseudo_distance(mobius_involution(a, z), mobius_involution(a, w)).unwrap();
        assert!((before - after).abs() < 1e-10, "{before} vs {after}");
        // The involution swaps a and 0 and squares to the identity.
        assert!(mobius_involution(a, a).norm() < 1e-14);
        assert!((mobius_involution(a, mobius_involution(a, z)) - z).norm() < 1e-12);
    }
}

#[test]
fn triangle_inequality_for_hyperbolic_distance() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let (x, y, z) = (random_point(&mut rng), random_point(&mut rng), random_point(&mut rng));
        let d = |a, b| hyperbolic_distance(a, b).unwrap();
        assert!(d(x, z) <= d(x, y) + d(y, z) + 1e-10);
    }
}

#[test]
fn kernel_norms() {
    assert_eq!(kernel_norm_sq(c(0.0)), 1.0);
    assert!((kernel_norm_sq(c(0.5)) - 4.0 / 3.0).abs() < 1e-15);
    assert!((kernel_norm_sq(c(0.9)) - 1.0 / 0.19).abs() < 1e-12);
    // ‖k_w‖² = Σ |w|^{2k}.
    let w = Complex64::new(0.3, 0.4);
    let series: f64 = (0..200).map(|k| w.norm_sqr().powi(k)).sum();
    assert!((kernel_norm_sq(w) - series).abs() < 1e-14);
}

#[test]
fn blaschke_values() {
    let b = BlaschkeProduct::new(vec![c(0.0)]).unwrap();
    assert!((blaschke_eval(&b, c(0.5)) - c(0.5)).norm() < 1e-15);
    let b = BlaschkeProduct::new(vec![c(0.5)]).unwrap();
    assert_eq!(b.modulus(c(0.5)), 0.0);
    let b = BlaschkeProduct::new(vec![c(0.0), c(0.0)]).unwrap();
    assert_eq!(b.degree(), 2);
    assert!((b.modulus(Complex64::from_polar(1.0, 0.7)) - 1.0).abs() < 1e-12);
}

#[test]
fn blaschke_is_unimodular_and_contractive() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let zeros: Vec<Complex64> = (0..12).map(|_| random_point(&mut rng)).collect();
    let b = BlaschkeProduct::new(zeros.clone()).unwrap();
    for k in 0..360 {
        let t = k as f64 * std::f64::consts::TAU / 360.0;
        assert!((b.modulus(Complex64::from_polar(1.0, t)) - 1.0).abs() < 1e-12);
    }
    for _ in 0..100 {
        let z = random_point(&mut rng);
        let direct: f64 = zeros.iter().map(|&a| pseudo_distance(z, a).unwrap()).product();
        assert!((b.modulus(z) - direct).abs() < 1e-12);
        assert!(b.modulus(z) < 1.0);
    }
}

#[test]
fn radial_segment_length() {
    let l = hyperbolic_length_of(c, 0.0, 0.5).unwrap();
    assert!((l - 3f64.ln()).abs() < 1e-5);
    assert_eq!(hyperbolic_length(&[c(0.2)]).unwrap(), 0.0);
}

#[test]
fn length_is_additive_over_concatenation() {
    let pts: Vec<Complex64> = (0..=200)
        .map(|k| Complex64::from_polar(0.3 + 0.5 * k as f64 / 200.0, 2.0 * k as f64 / 200.0))
        .collect();
    let whole = hyperbolic_length(&pts).unwrap();
    let a = hyperbolic_length(&pts[..=90]).unwrap();
    let b = hyperbolic_length(&pts[90..]).unwrap();
    assert!((whole - (a + b)).abs() < 1e-9);
    let running = cumulative_length(&pts).unwrap();
    assert!((running[90] - a).abs() < 1e-12);
    assert!(running.windows(2).all(|w| w[1] >= w[0]));
}

#[test]
fn length_rejects_boundary_points() {
    assert!(matches!(
        hyperbolic_length(&[c(0.0), c(1.0)]),
        Err(Error::CurveTouchesBoundary { index: 1 })
    ));
}

/// Brute force separation: minimum over `j` of the product over `k != j`.
fn separation_oracle(pts: &[Complex64]) -> f64 {
    (0..pts.len())
        .map(|j| {
            (0..pts.len())
                .filter(|&k| k != j)
                .map(|k| pseudo_distance(pts[j], pts[k]).unwrap())
                .product::<f64>()
        })
        .fold(1.0, f64::min)
}

#[test]
fn separation_matches_brute_force() {
    let z = PointSequence::from_real(&[0.0, 0.5]).unwrap();
    assert!((uniform_separation(&z).unwrap() - 0.5).abs() < 1e-15);
    assert_eq!(uniform_separation(&PointSequence::from_real(&[0.3]).unwrap()).unwrap(), 1.0);
    let pts = [c(0.0), c(0.5), c(-0.5)];
    let z = PointSequence::new(pts.to_vec()).unwrap();
    assert!((uniform_separation(&z).unwrap() - separation_oracle(&pts)).abs() < 1e-15);

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let pts: Vec<Complex64> = (0..15).map(|_| random_point(&mut rng)).collect();
    let z = PointSequence::new(pts.clone()).unwrap();
    let oracle = separation_oracle(&pts);
    assert!((uniform_separation(&z).unwrap() - oracle).abs() <= 1e-10 * oracle);
}

#[test]
fn duplicates_are_detected() {
    let z = PointSequence::from_real(&[0.2, 0.2]).unwrap();
    assert!(!z.is_distinct());
    assert!(matches!(uniform_separation(&z), Err(Error::DuplicatePoints { i: 0, j: 1 })));
    assert!(matches!(PointSequence::from_real(&[1.0]), Err(Error::OutsideDisc { index: 0 })));
}

/// Window-sup oracle over a dense grid of sides and centres.
fn carleson_oracle(pts: &[Complex64]) -> f64 {
    let mut best = 0.0_f64;
    for m in 0..=20 {
        let delta = 2f64.powi(-m);
        let centres = (std::f64::consts::TAU / (delta / 2.0)).floor() as i64;
        for k in 0..=centres {
            let theta0 = -std::f64::consts::PI + k as f64 * delta / 2.0;
            let mass: f64 = pts
                .iter()
                .filter(|p| {
                    let d = (p.arg() - theta0).rem_euclid(std::f64::consts::TAU);
                    1.0 - p.norm() <= delta && (p.norm() == 0.0 || d.min(std::f64::consts::TAU - d) <= delta)
                })
                .map(|p| 1.0 - p.norm_sqr())
                .sum();
            best = best.max(mass / delta);
        }
    }
    best
}

#[test]
fn carleson_examples() {
    let one = carleson_norm(&PointSequence::from_real(&[0.0]).unwrap());
    assert!((one.geometric - 1.0).abs() < 1e-15);
    let half = carleson_norm(&PointSequence::from_real(&[0.5]).unwrap());
    assert!((half.geometric - 1.5).abs() < 1e-15);
    assert!((half.argmax_delta - 0.5).abs() < 1e-15);
    let pts = [c(0.0), Complex64::from_polar(0.9, 1.0), Complex64::from_polar(0.99, -2.0)];
    let est = carleson_norm(&PointSequence::new(pts.to_vec()).unwrap());
    assert!((est.geometric - carleson_oracle(&pts)).abs() < 1e-12);
}

#[test]
fn duplicating_points_doubles_the_carleson_value() {
    let pts = vec![c(0.5), Complex64::from_polar(0.8, 2.0)];
    let single = carleson_norm(&PointSequence::new(pts.clone()).unwrap()).geometric;
    let doubled: Vec<Complex64> = pts.iter().chain(pts.iter()).copied().collect();
    let double = carleson_norm(&PointSequence::new(doubled).unwrap());
    assert!((double.geometric - 2.0 * single).abs() < 1e-12);
    assert!(double.log_bound.is_infinite());
}

#[test]
fn carleson_value_is_controlled_by_separation() {
    // Geometric value ≤ 4 (1 + log 1/δ) on the sequences used by the bounds.
    let mut seqs = vec![sequence_radial(100).unwrap().points];
    for n in [8, 32, 128] {
        seqs.push(sequence_boundary_pinch(n).unwrap());
    }
    for z in &seqs {
        let est = carleson_norm(z);
        assert!(est.geometric <= 4.0 * est.log_bound, "{} > 4 * {}", est.geometric, est.log_bound);
    }
}

#[test]
fn interpolation_constant_examples() {
    let z = PointSequence::from_real(&[0.0]).unwrap();
    assert!((interpolation_constant_bound(&z).unwrap() - 1.0).abs() < 1e-15);
    let z = PointSequence::from_real(&[0.0, 0.5]).unwrap();
    let oracle = carleson_norm(&z).geometric.sqrt() / 0.5;
    assert!((interpolation_constant_bound(&z).unwrap() - oracle).abs() < 1e-12);
}
