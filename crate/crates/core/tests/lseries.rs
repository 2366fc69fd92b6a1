mod common;

use std::f64::consts::PI;
use std::sync::OnceLock;

use maassforge::cyclo::Cyclo;
use maassforge::error::Error;
use maassforge::heckechar::DirichletCharacter;
use maassforge::lseries::*;
use maassforge::maassform::{build_theta, prime_power_coeff, MaassForm};
use num_complex::Complex64;
use proptest::prelude::*;

fn theta229() -> &'static MaassForm {
    static F: OnceLock<MaassForm> = OnceLock::new();
    F.get_or_init(|| build_theta(&common::character(229, 1), 200_000).unwrap())
}

fn series229() -> &'static LSeries {
    static S: OnceLock<LSeries> = OnceLock::new();
    S.get_or_init(|| hecke_l_coeffs(&common::character(229, 1), 2000).unwrap())
}

fn res_zeta_f(d: i64) -> f64 {
    let cg = common::class_group(d);
    2.0 * cg.h_wide() as f64 * cg.unit().regulator / (d as f64).sqrt()
}

#[test]
fn small_hecke_coefficients_229() {
    let l = series229();
    assert_eq!(l.coeff_exact(1).unwrap().to_integer(), Some(1));
    assert_eq!(l.coeff_exact(2).unwrap().to_integer(), Some(0));
    assert_eq!(l.coeff_exact(3).unwrap().to_integer(), Some(-1));
    // 2 is inert and 2 O_F is generated by the totally positive 2.
    assert_eq!(l.coeff_exact(4).unwrap().to_integer(), Some(1));
    assert!((l.coeff(3) - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
}

#[test]
fn rankin_coefficients_229() {
    let form = theta229();
    let r = rankin_coeffs(form, 1000).unwrap();
    assert_eq!(r.coeff(1), Complex64::new(1.0, 0.0));
    assert_eq!(r.coeff(2), Complex64::new(0.0, 0.0));
    // a'(9) = zeta^2 + 1 + zeta = 0.
    assert_eq!(rankin_coeff_exact(form, 9).unwrap().to_integer(), Some(0));
    assert!(r.coeff(9).re < 1e-28);
    for n in 1..=1000 {
        let b = r.coeff(n);
        assert!(b.re >= 0.0 && b.im == 0.0);
        assert!((b.re - form.coeff(n).norm_sqr()).abs() < 1e-12);
        let exact = rankin_coeff_exact(form, n).unwrap().to_complex();
        assert!((exact - b).norm() < 1e-10, "n = {n}");
    }
    assert!(rankin_coeffs(form, form.n_max() + 1).is_err());
}

#[test]
fn hecke_coefficients_multiplicative_exact() {
    for d in [229, 401, 445] {
        let l = hecke_l_coeffs(&common::character(d, 1), 300 * 300).unwrap();
        for m in 1..=300u64 {
            for n in (m..=300u64).step_by(7) {
                if num_integer::gcd(m, n) != 1 {
                    continue;
                }
                let lhs = l.coeff_exact(m * n).unwrap();
                let rhs = &l.coeff_exact(m).unwrap() * &l.coeff_exact(n).unwrap();
                assert_eq!(lhs, rhs, "D = {d}, m = {m}, n = {n}");
            }
        }
    }
}

#[test]
fn satake_expansion_reproduces_prime_powers() {
    for (d, idx, eps) in [(229, 1, 0), (401, 1, 0), (401, 2, 0), (445, 1, 0), (12, 1, 1)] {
        let psi = common::character_eps(d, idx, eps);
        let l = hecke_l_coeffs(&psi, 100_000).unwrap();
        for p in maassforge::arith::primes_up_to(50) {
            let sd = satake(&psi, p).unwrap();
            for r in [sd.alpha, sd.beta].iter().flatten() {
                assert!((r.to_complex().norm() - 1.0).abs() < 1e-15);
            }
            let local = sd.local_coeffs(4);
            for (r, want) in local.iter().enumerate() {
                let got = prime_power_coeff(&psi, p, r as u32).unwrap();
                assert_eq!(&got, want, "D = {d}, p = {p}, r = {r}");
                if p.pow(r as u32) <= l.n_max() {
                    assert_eq!(&l.coeff_exact(p.pow(r as u32)).unwrap(), want);
                }
            }
        }
    }
}

/// Power series of `prod (1 - z_i X)^-1` times `prod (1 - w_j X^2)^-1` times `(1 - X^2)`.
fn local_rankin_series(lin: &[Complex64], quad: &[Complex64], r_max: usize) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(0.0, 0.0); r_max + 1];
    c[0] = Complex64::new(1.0, 0.0);
    let mul_geom = |c: &mut Vec<Complex64>, z: Complex64, step: usize| {
        for i in step..c.len() {
            let prev = c[i - step];
            c[i] += z * prev;
        }
    };
    for &z in lin {
        mul_geom(&mut c, z, 1);
    }
    for &w in quad {
        mul_geom(&mut c, w, 2);
    }
    for i in (2..c.len()).rev() {
        let prev = c[i - 2];
        c[i] -= prev;
    }
    c
}

#[test]
fn rankin_local_factors_match_coefficients() {
    // Independent of the library's Euler product: rebuild each local factor
    // from the split type and the values of psi^2 on the primes above p.
    let psi = common::character(229, 1);
    let form = theta229();
    let chi2 = psi.twisted_square();
    let field = psi.field().clone();
    let one = Complex64::new(1.0, 0.0);
    for p in maassforge::arith::primes_up_to(13) {
        let split = field.split_prime(p).unwrap();
        let v = |i: &maassforge::quadfield::QfIdeal| chi2.value(i).unwrap().to_complex();
        let (lin, quad) = match split.kind {
            maassforge::quadfield::SplitKind::Split => (
                vec![one, one, v(&split.primes_above[0]), v(&split.primes_above[1])],
                vec![],
            ),
            maassforge::quadfield::SplitKind::Inert => (vec![], vec![one, v(&field.rational_ideal(p))]),
            maassforge::quadfield::SplitKind::Ramified => {
                // (1 + X)^-1 (1 - chi_D(p) X) (1 - X)^-1 = (1 - X^2)^-1 since chi_D(p) = 0.
                (vec![v(&split.primes_above[0])], vec![one])
            }
        };
        let series = local_rankin_series(&lin, &quad, 4);
        for (r, want) in series.iter().enumerate() {
            let got = form.coeff(p.pow(r as u32)).norm_sqr();
            assert!((want - got).norm() < 1e-12, "p = {p}, r = {r}: {want} vs {got}");
        }
    }
}

#[test]
fn dirichlet_values_match_closed_forms() {
    let mut chars = vec![
        DirichletCharacter::kronecker(5),
        DirichletCharacter::kronecker(-4),
        DirichletCharacter::kronecker(89),
        DirichletCharacter::kronecker(-23),
    ];
    for (p, j) in [(7, 1), (7, 2), (11, 3), (13, 1), (31, 5)] {
        chars.push(DirichletCharacter::from_prime(p, j).unwrap());
    }
    for chi in &chars {
        assert!(chi.is_primitive());
        let closed = dirichlet_l1_closed_form(chi).unwrap();
        let l = dirichlet_l_coeffs(chi, 2000).unwrap();
        for a in [1.0, 1.2, 0.8] {
            let v = l.value(1.0, a).unwrap().value();
            assert!((v - closed).norm() < 1e-12, "q = {}: {v} vs {closed}", chi.modulus());
        }
    }
}

#[test]
fn dirichlet_at_other_points_matches_oracle() {
    for chi in [DirichletCharacter::kronecker(5), DirichletCharacter::from_prime(11, 3).unwrap()] {
        let l = dirichlet_l_coeffs(&chi, 30_000).unwrap();
        for s in [0.5, 2.0, 3.5] {
            let afe = l.value(s, 1.0).unwrap().value();
            let (direct, err) = l.direct_value(s, 1000.0).unwrap();
            assert!(err < 1e-9);
            assert!((afe - direct).norm() < 1e-9, "s = {s}: {afe} vs {direct}");
        }
    }
}

#[test]
fn hecke_values_cutoff_stable_and_match_oracle() {
    for (d, idx) in [(229, 1), (401, 1), (401, 2), (445, 1)] {
        let psi = common::character(d, idx);
        let report = l_value_at_1(&psi).unwrap();
        assert!(report.discrepancy < 1e-9);
        assert!(report.imag.abs() < 1e-12);
        let l = hecke_l_coeffs(&psi.twisted_square(), 70_000).unwrap();
        let (direct, err) = l.direct_value(1.0, 2500.0).unwrap();
        assert!(err < 1e-8, "D = {d}: {err}");
        assert!((direct.re - report.value).abs() < 1e-8, "D = {d}");
        for s in [0.5, 2.0] {
            let afe = l.value(s, 1.0).unwrap().value();
            let (direct, _) = l.direct_value(s, 2500.0).unwrap();
            assert!((afe - direct).norm() < 1e-8, "D = {d}, s = {s}");
        }
    }
}

#[test]
fn l1_of_445_factors_through_rational_characters() {
    let psi = common::character(445, 1);
    let value = l_value_at_1(&psi).unwrap().value;
    let chi5 = DirichletCharacter::kronecker(5);
    let chi89 = DirichletCharacter::kronecker(89);
    let closed = dirichlet_l1_closed_form(&chi5).unwrap() * dirichlet_l1_closed_form(&chi89).unwrap();
    assert!((closed.re - value).abs() < 1e-8, "{} vs {value}", closed.re);
    // The product series has coefficients sum_{ab = n} chi_5(a) chi_89(b).
    let n = 60_000;
    let prod = dirichlet_l_coeffs(&chi5, n)
        .unwrap()
        .convolve(&dirichlet_l_coeffs(&chi89, n).unwrap());
    let hecke = hecke_l_coeffs(&psi.twisted_square(), 2000).unwrap();
    for k in 1..=2000 {
        assert!((prod.coeff(k) - hecke.coeff(k)).norm() < 1e-12, "n = {k}");
    }
    let (direct, _) = prod.direct_value(1.0, 2000.0).unwrap();
    assert!((direct.re - value).abs() < 1e-8);
}

#[test]
fn norm_induced_has_a_pole() {
    let psi = common::character(40, 1);
    assert!(matches!(l_value_at_1(&psi), Err(Error::NormInduced)));
    let trivial = common::character(229, 0);
    assert!(matches!(l_value_at_1(&trivial), Err(Error::NormInduced)));
}

#[test]
fn missing_coefficients_are_refused() {
    let l = hecke_l_coeffs(&common::character(229, 1), 20).unwrap();
    assert!(l.value(1.0, 1.0).is_err());
    assert!(l.direct_value(1.0, 100.0).is_err());
}

#[test]
fn rankin_residual_halves_with_x() {
    let psi = common::character(229, 1);
    let form = theta229();
    let residue = rankin_residue(229, res_zeta_f(229), l_value_at_1(&psi).unwrap().value);
    let mut prev = f64::INFINITY;
    for x in [12_500u64, 25_000, 50_000, 100_000, 200_000] {
        let r = rankin_euler_identity_residual(form, &psi, 2.0, x, residue).unwrap();
        assert!(r.raw < prev);
        if prev.is_finite() {
            let ratio = prev / r.raw;
            assert!((1.7..2.3).contains(&ratio), "X = {x}: ratio {ratio}");
        }
        // The raw gap is the first-order truncation tails of the two sides.
        let predicted = r.lhs_tail - r.rhs * r.rhs_tail.exp_m1();
        assert!((r.raw / predicted - 1.0).abs() < 0.05, "X = {x}");
        assert!(r.corrected < 1e-7);
        prev = r.raw;
    }
    assert!(rankin_euler_identity_residual(form, &psi, 1.0, 1000, residue).is_err());
}

#[test]
fn rankin_residual_small_for_large_s() {
    let psi = common::character(229, 1);
    let r = rankin_euler_identity_residual(theta229(), &psi, 3.0, 100_000, 0.0).unwrap();
    assert!(r.raw < 1e-10);
}

#[test]
fn rankin_residue_of_229_has_closed_form_pieces() {
    // (1 - chi(229)/229)/(1 + 1/229) = 229/230.
    let r = rankin_residue(229, 1.0, 1.0);
    assert!((r - 229.0 / 230.0 * 6.0 / (PI * PI)).abs() < 1e-15);
}

#[test]
fn satake_of_inert_and_ramified() {
    let psi = common::character(229, 1);
    // 2 is inert in Q(sqrt 229), 229 ramifies.
    let sd = satake(&psi, 2).unwrap();
    let a = sd.alpha.unwrap().to_complex();
    let b = sd.beta.unwrap().to_complex();
    assert!((a + b).norm() < 1e-15);
    assert!((a * b + Complex64::new(1.0, 0.0)).norm() < 1e-15);
    let sd = satake(&psi, 229).unwrap();
    assert!(sd.beta.is_none());
    let local = sd.local_coeffs(3);
    assert_eq!(local[0], Cyclo::one(1));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn prop_multiplicative_pairs(m in 1u64..300, n in 1u64..300) {
        prop_assume!(num_integer::gcd(m, n) == 1 && m * n <= 2000);
        let l = series229();
        let lhs = l.coeff_exact(m * n).unwrap();
        let rhs = &l.coeff_exact(m).unwrap() * &l.coeff_exact(n).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn prop_convolution_with_delta_is_identity(n in 1u64..500) {
        let l = series229();
        let mut delta = vec![Complex64::new(0.0, 0.0); 501];
        delta[1] = Complex64::new(1.0, 0.0);
        let id = LSeries::from_coefficients(delta, None).unwrap();
        prop_assert_eq!(l.convolve(&id).coeff(n), l.coeff(n));
    }

    #[test]
    fn prop_cutoff_independence(a in 0.7f64..1.5, s in 0.3f64..2.5) {
        let l = hecke_l_coeffs(&common::character(229, 1).twisted_square(), 400).unwrap();
        let v1 = l.value(s, 1.0).unwrap().value();
        let v2 = l.value(s, a).unwrap().value();
        prop_assert!((v1 - v2).norm() < 1e-10);
    }
}
