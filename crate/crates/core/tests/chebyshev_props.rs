mod common;

use common::{norm_nodes, TensorPoly, ROUNDING};
use mz_core::chebyshev::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Integer coefficients of `T_n` in the monomial basis, lowest degree first.
fn cheb_coeffs_exact(n: usize) -> Vec<BigInt> {
    let mut prev = vec![BigInt::one()];
    if n == 0 {
        return prev;
    }
    let mut cur = vec![BigInt::zero(), BigInt::one()];
    for _ in 1..n {
        let mut next = vec![BigInt::zero(); cur.len() + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += c * 2;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= c;
        }
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// `T_n^{(l)}(u)` at a rational point, exactly.
fn cheb_deriv_exact(n: usize, l: usize, u: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for (e, c) in cheb_coeffs_exact(n).iter().enumerate().skip(l).rev() {
        let falling: BigInt = (0..l).map(|t| BigInt::from(e - t)).product();
        acc = acc * u + BigRational::from_integer(c * falling);
    }
    acc
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

#[test]
fn t50_at_1_01_matches_exact_recurrence() {
    let u = rational(101, 100);
    let exact = cheb_deriv_exact(50, 0, &u).to_f64().unwrap();
    let got = cheb_t(50, 1.01);
    assert_eq!(got.sign, 1);
    assert!(rel_err(got.value(), exact) < 1e-12, "{} vs {exact}", got.value());
}

#[test]
fn chebyshev_values_match_exact_rationals() {
    for &(num, den) in &[(7, 2), (-7, 2), (3, 2), (-101, 100), (1, 3), (-5, 7), (9, 8)] {
        let u = rational(num, den);
        let uf = num as f64 / den as f64;
        for n in [0usize, 1, 2, 5, 13, 30, 60] {
            let exact = cheb_deriv_exact(n, 0, &u).to_f64().unwrap();
            let got = cheb_t_value(n as u32, uf);
            assert!((got - exact).abs() <= 1e-11 * exact.abs().max(1.0), "n={n} u={uf}: {got} vs {exact}");
        }
    }
}

#[test]
fn chebyshev_derivatives_match_exact_rationals() {
    for &(num, den) in &[(3, 2), (-9, 4), (5, 1), (1, 2), (-1, 3), (1, 1), (-1, 1)] {
        let u = rational(num, den);
        let uf = num as f64 / den as f64;
        for n in 0..=20usize {
            for l in 0..=n + 1 {
                let exact = cheb_deriv_exact(n, l, &u).to_f64().unwrap();
                let got = cheb_deriv(n as u32, l as u32, uf);
                let scale = if uf.abs() > 1.0 { exact.abs() } else { exact.abs().max(cheb_deriv_exact(n, l, &BigRational::one()).to_f64().unwrap()) };
                assert!(
                    (got - exact).abs() <= 1e-9 * scale.max(1e-300),
                    "n={n} l={l} u={uf}: {got} vs {exact}"
                );
            }
        }
    }
}

#[test]
fn derivative_at_one_is_n_squared() {
    for n in 1..=60u32 {
        assert!(rel_err(cheb_deriv(n, 1, 1.0), f64::from(n * n)) < 1e-12);
    }
}

#[test]
fn derivative_finite_difference_cross_check() {
    let u = 1.5;
    for n in 1..=10u32 {
        for l in 0..=3u32.min(n - 1) {
            let h = 1e-4;
            let fd = (cheb_deriv(n, l, u + h) - cheb_deriv(n, l, u - h)) / (2.0 * h);
            let want = cheb_deriv(n, l + 1, u);
            assert!(rel_err(fd, want) < 1e-6, "n={n} l={l}: {fd} vs {want}");
        }
    }
}

#[test]
fn large_degree_does_not_overflow() {
    let t = cheb_t(10_000, 50.0);
    assert!(t.ln_abs.is_finite() && t.ln_abs > 700.0);
    let d = cheb_deriv_log(60, 30, -40.0);
    assert!(d.ln_abs.is_finite());
    assert_eq!(d.sign, 1);
}

#[test]
fn rate_function_examples() {
    assert!((psi(1.0, 1.0) - 0.532839).abs() < 1e-6);
    assert!((psi(2.0, 1.0) + 0.325601).abs() < 1e-6);
    let g = gamma0(1.0).unwrap();
    assert!(psi(g, 1.0).abs() < 1e-9);
    for b in [0.5, 1.0, 2.0] {
        let t = tau0(b).unwrap();
        assert!(g_tau_b(t, b).abs() < 1e-9);
        assert!(t > g);
        let mut last = f64::INFINITY;
        for i in 0..50 {
            let v = g_tau_b(g + 0.1 * i as f64, b);
            assert!(v < last);
            last = v;
        }
    }
}

#[test]
fn compact_alphas() {
    assert_eq!(alpha_of(CompactKind::Interval).unwrap().alpha, 1.0);
    assert!((alpha_of(CompactKind::Disk { m: 1.0 }).unwrap().alpha - (1.0 + 2f64.sqrt())).abs() < 1e-14);
    assert!((alpha_of(CompactKind::Square).unwrap().alpha - 2.8900536).abs() < 1e-6);
    assert_eq!(alpha_of(CompactKind::Ellipse { r: 1.7 }).unwrap().alpha, 1.7);
}

#[test]
fn coefficient_bound_examples() {
    assert_eq!(coeff_sum_bound_interval(0, 2, 1.0, 3.0).unwrap(), 0.0);
    assert!((coeff_sum_bound_interval(1, 1, 1.0, 3.0).unwrap() - 3f64.ln()).abs() < 1e-15);
    let e1 = std::f64::consts::E;
    assert!((coeff_sum_bound_exp(1, 1, 4.0).unwrap().exp() - (e1 + 1.0 / e1) / (e1 - 1.0 / e1)).abs() < 1e-12);
    assert!(coeff_sum_bound_interval(2, 1, 0.0, 1.0).is_err());
    assert!(coeff_sum_bound_interval(2, 1, 2.0, 1.0).is_err());
}

#[test]
fn extremal_tensor_product_attains_bound() {
    // P(x) = T_n(x₁/λ) T_n(x₂/λ) has sup 1 on the cube and meets the bound.
    let (n, lambda) = (4u32, 0.8f64);
    let x = [1.3, -2.0];
    let k = [1u32, 2];
    let lhs: f64 = k
        .iter()
        .zip(&x)
        .map(|(&kj, &xj)| lambda.powi(-(kj as i32)) * cheb_deriv(n, kj, xj / lambda).abs())
        .product();
    let bound = outside_bound_tensor(n, &k, &x, lambda).unwrap().exp();
    assert!(rel_err(lhs, bound) < 1e-12);
    assert!((outside_bound_tensor(5, &[0], &[2.0], 1.0).unwrap().exp() - cheb_t_value(5, 2.0)).abs() < 1e-9);
    assert!(outside_bound_tensor(3, &[0, 0], &[2.0, 0.5], 1.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn cos_form_consistency(n in 0u32..=100, theta in 0.0f64..=std::f64::consts::PI) {
        prop_assert!((cheb_t_value(n, theta.cos()) - (f64::from(n) * theta).cos()).abs() < 1e-10);
    }

    #[test]
    fn bounded_on_interval(n in 0u32..=100, u in -1.0f64..=1.0) {
        prop_assert!(cheb_t_value(n, u).abs() <= 1.0 + 1e-15);
    }

    #[test]
    fn growth_bound_holds(n in 1u32..=60, u in 1.0f64..10.0) {
        prop_assert!(cheb_t(n, u).ln_abs <= cheb_growth_bound(n, u).unwrap() + 1e-12);
    }

    #[test]
    fn psi_decreasing_and_gamma0_increasing(t in 0.1f64..10.0, dt in 0.01f64..1.0, a in 1.0f64..4.0, da in 0.01f64..1.0) {
        prop_assert!(psi(t + dt, a) < psi(t, a));
        let g = gamma0(a).unwrap();
        prop_assert!(gamma0(a + da).unwrap() > g);
        prop_assert!(psi(g + dt, a) < 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn univariate_outside_derivative_bound(seed in any::<u64>(), n in 1usize..=10, b in 0.5f64..2.0, s in 1.001f64..3.0, neg in any::<bool>(), complex in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = TensorPoly::random(1, n, complex, &mut rng);
        let norm = p.cube_norm(0.0, b, norm_nodes(1));
        let u = if neg { -s * b } else { s * b };
        for l in 0..=n {
            let lhs = p.deriv(&[l], &[u]).norm();
            let rhs = b.powi(-(l as i32)) * cheb_deriv(n as u32, l as u32, u / b).abs() * norm;
            prop_assert!(lhs <= rhs * (1.0 + ROUNDING), "l={} lhs={} rhs={}", l, lhs, rhs);
        }
    }

    #[test]
    fn total_degree_growth_outside_cube(seed in any::<u64>(), m in 1usize..=3, n in 1usize..=5, dir in prop::collection::vec(-1.0f64..1.0, 3), scale in 1.01f64..3.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = TensorPoly::random(m, n, true, &mut rng).restrict_total_degree();
        let norm = p.cube_norm(0.0, 1.0, norm_nodes(m));
        let d = &dir[..m];
        let inf = d.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        prop_assume!(inf > 1e-3);
        let x: Vec<f64> = d.iter().map(|v| v / inf * scale).collect();
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        // Width of [−1, 1]^m is 2.
        let rhs = cheb_t_value(n as u32, 2.0 * r / 2.0) * norm;
        prop_assert!(p.eval(&x).norm() <= rhs * (1.0 + ROUNDING));
    }
}
