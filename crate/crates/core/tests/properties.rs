//! Property tests. Matrices are drawn by the library's seeded samplers, so
//! proptest shrinks over seeds and dimensions.

use proptest::prelude::*;
use symform::compound::compound;
use symform::forms::{esp, hoelder_sides};
use symform::harness::{MidpointInstance, ProbeConfig, ProbeTarget, TargetKind};
use symform::hermitian::{eigh, matrix_abs, matrix_fn, max_abs, max_abs_diff};
use symform::interp::{check_interpolation, inequality_check, GFamily, IneqInput, InterpolationParams, QuadratureSpec};
use symform::majorization::{
    birkhoff, bridge, ds_from_majorization, eigen_majorization_check, verdict, SpectralRelation,
};
use symform::sample::{random_general, random_hermitian, random_psd, random_unitary, rng_from_seed};
use symform::seed::derive_trial_seed;
use symform::{Form, PsdMatrix, C64};

fn hoelder_forms() -> impl Strategy<Value = Form> {
    prop_oneof![
        Just(Form::Trace),
        (1usize..=2).prop_map(|k| Form::KTrace { k }),
        (1usize..=2).prop_map(|k| Form::Gk { k }),
        (0.1f64..=1.0).prop_map(|p| Form::Seminorm { p }),
    ]
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

fn subset_sum(x: &[f64], k: usize) -> f64 {
    (0u32..1 << x.len())
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..x.len()).filter(|i| m >> i & 1 == 1).map(|i| x[i]).product::<f64>())
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn power_round_trip(seed: u64, n in 1usize..=6, r in 0.05f64..=1.0) {
        let mut rng = rng_from_seed(seed);
        let a = PsdMatrix::new(random_psd(&mut rng, n, 1.0).hermitian().add(&symform::HermitianMatrix::identity(n).scale(0.1))).unwrap();
        let back = a.pow(r).unwrap().pow(1.0 / r).unwrap();
        prop_assert!(max_abs_diff(back.as_matrix(), a.as_matrix()) <= 1e-8 * max_abs(a.as_matrix()));
    }

    #[test]
    fn matrix_fn_is_unitarily_covariant(seed: u64, n in 1usize..=6) {
        let mut rng = rng_from_seed(seed);
        let a = random_hermitian(&mut rng, n, 1.0);
        let u = random_unitary(&mut rng, n);
        let f = |l: f64| C64::new(l.sin() + l * l, 0.0);
        let lhs = matrix_fn(&a.congruence(&u).unwrap(), f).unwrap();
        let rhs = u.adjoint() * matrix_fn(&a, f).unwrap() * &u;
        prop_assert!(max_abs_diff(&lhs, &rhs) <= 1e-9 * max_abs(&rhs).max(1.0));
    }

    #[test]
    fn abs_of_adjoint_has_same_spectrum(seed: u64, n in 1usize..=6) {
        let x = random_general(&mut rng_from_seed(seed), n, n, 1.0);
        let s1 = sorted(matrix_abs(&x).unwrap().spectrum().to_vec());
        let s2 = sorted(matrix_abs(&x.adjoint()).unwrap().spectrum().to_vec());
        for (a, b) in s1.iter().zip(&s2) {
            prop_assert!((a - b).abs() <= 1e-9 * s1.last().unwrap().max(1.0));
        }
    }

    #[test]
    fn eigh_recovers_prescribed_spectrum(seed: u64, values in prop::collection::vec(-5.0f64..5.0, 1..=6)) {
        let n = values.len();
        let u = random_unitary(&mut rng_from_seed(seed), n);
        let d = symform::hermitian::real_diagonal(&values);
        let h = symform::HermitianMatrix::symmetrized(&(&u * d * u.adjoint())).unwrap();
        let got = sorted(eigh(&h).unwrap().values);
        for (a, b) in got.iter().zip(&sorted(values)) {
            prop_assert!((a - b).abs() <= 1e-9 * 5.0);
        }
    }

    #[test]
    fn esp_matches_enumeration(x in prop::collection::vec(0.0f64..4.0, 1..=12), k_frac in 0.0f64..1.0) {
        let k = 1 + ((x.len() as f64 - 1.0) * k_frac).round() as usize;
        let oracle = subset_sum(&x, k);
        let value = esp(&x, k).unwrap();
        prop_assert!((value - oracle).abs() <= 1e-12 * oracle.max(f64::MIN_POSITIVE));
    }

    #[test]
    fn forms_are_unitarily_invariant(form in hoelder_forms(), seed: u64, n in 2usize..=6) {
        let mut rng = rng_from_seed(seed);
        let a = random_psd(&mut rng, n, 1.0);
        let u = random_unitary(&mut rng, n);
        let rotated = PsdMatrix::new(a.hermitian().congruence(&u).unwrap()).unwrap();
        let (x, y) = (form.eval_matrix(&a).unwrap(), form.eval_matrix(&rotated).unwrap());
        prop_assert!((x - y).abs() <= 1e-9 * x.max(1.0));
    }

    #[test]
    fn forms_are_homogeneous(form in hoelder_forms(), x in prop::collection::vec(0.0f64..5.0, 2..=6)) {
        let base = form.eval(&x).unwrap();
        for t in [0.0, 0.5, 3.0] {
            let scaled: Vec<f64> = x.iter().map(|v| t * v).collect();
            prop_assert!((form.eval(&scaled).unwrap() - t * base).abs() <= 1e-10 * (t * base).max(1e-300));
        }
    }

    #[test]
    fn matrix_hoelder_holds(form in hoelder_forms(), seed: u64, n in 2usize..=5, p in 1.0f64..8.0) {
        let mut rng = rng_from_seed(seed);
        let (a, b) = (random_psd(&mut rng, n, 1.0), random_psd(&mut rng, n, 1.0));
        let r = inequality_check(&form, &IneqInput::MatrixHoelder { a, b, p }, &QuadratureSpec::default()).unwrap();
        prop_assert!(r.pass, "{r:?}");
    }

    #[test]
    fn concave_forms_stay_concave_under_powers(form in hoelder_forms(), seed: u64, n in 2usize..=5, r in 0.05f64..=1.0) {
        let mut rng = rng_from_seed(seed);
        let (a, b) = (random_psd(&mut rng, n, 1.0), random_psd(&mut rng, n, 1.0));
        let mid = PsdMatrix::convex_combination(0.5, &a, &b).unwrap();
        let f = |m: &PsdMatrix| form.eval_matrix(&m.pow(r).unwrap()).unwrap();
        let (lhs, rhs) = (0.5 * (f(&a) + f(&b)), f(&mid));
        prop_assert!(lhs <= rhs + 1e-9 + 1e-8 * rhs);
    }

    #[test]
    fn minsum_below_full_dimension_is_not_hoelder(k in 1usize..=3, extra in 1usize..=3) {
        let n = k + extra;
        let report = symform::forms::check_hoelder(&Form::MinSum { k }, n, 2000, 5).unwrap();
        let w = report.hoelder.witness().expect("a witness");
        let (lhs, rhs) = w.reevaluate(&Form::MinSum { k }).unwrap();
        prop_assert!(lhs > rhs);
    }

    #[test]
    fn verdict_is_permutation_invariant(a in prop::collection::vec(-3.0f64..3.0, 1..=8), seed: u64) {
        let n = a.len();
        let mut rng = rng_from_seed(seed);
        let b: Vec<f64> = (0..n).map(|_| rand::Rng::random_range(&mut rng, -3.0..3.0)).collect();
        let perm = symform::sample::random_permutation(&mut rng, n);
        let pa: Vec<f64> = perm.iter().map(|&i| a[i]).collect();
        let pb: Vec<f64> = perm.iter().map(|&i| b[i]).collect();
        let (v1, v2) = (verdict(&a, &b, false).unwrap(), verdict(&pa, &pb, false).unwrap());
        prop_assert_eq!(v1.weak, v2.weak);
        prop_assert_eq!(v1.strict, v2.strict);
    }

    #[test]
    fn witnesses_compose(b in prop::collection::vec(-3.0f64..3.0, 1..=8), seed: u64) {
        let n = b.len();
        let mut rng = rng_from_seed(seed);
        let lower: Vec<f64> = (0..n).map(|_| rand::Rng::random_range(&mut rng, 0.0..1.0)).collect();
        // a mean-preserving contraction of b, lowered entrywise
        let mean = b.iter().sum::<f64>() / n as f64;
        let a: Vec<f64> = b.iter().zip(&lower).map(|(v, l)| 0.5 * (v + mean) - l).collect();
        let c = bridge(&a, &b).unwrap();
        prop_assert!(a.iter().zip(&c).all(|(x, y)| *x <= y + 1e-10));
        prop_assert!(verdict(&c, &b, false).unwrap().strict);
        let d = ds_from_majorization(&c, &b).unwrap();
        let terms = birkhoff(&d).unwrap();
        let mut mixed = vec![0.0; n];
        for t in &terms {
            for (i, v) in t.permutation.apply(&b).iter().enumerate() {
                mixed[i] += t.weight * v;
            }
        }
        let err = mixed.iter().zip(&c).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        prop_assert!(err <= 1e-8, "{err:e}");
        // a ≺ b with concave φ gives φ(a) ≥ φ(b)
        let shift = 3.5;
        let (cs, bs): (Vec<f64>, Vec<f64>) = c.iter().zip(&b).map(|(x, y)| (x + shift, y + shift)).unzip();
        for form in [Form::Trace, Form::KTrace { k: 1 }, Form::Seminorm { p: 0.5 }] {
            let (fc, fb) = (form.eval(&cs).unwrap(), form.eval(&bs).unwrap());
            prop_assert!(fc >= fb - 1e-9 * fb.max(1.0));
        }
    }

    #[test]
    fn product_relation_keeps_determinant(seed: u64, n in 1usize..=6) {
        let mut rng = rng_from_seed(seed);
        let (a, b) = (random_psd(&mut rng, n, 1.0), random_psd(&mut rng, n, 1.0));
        let r = eigen_majorization_check(a.hermitian(), b.hermitian(), SpectralRelation::Product).unwrap();
        prop_assert!(r.verdict.sum_gap.abs() <= 1e-8 * r.verdict.scale.max(1.0));
    }

    #[test]
    fn compound_spectrum_and_abs(seed: u64, n in 2usize..=5, k_frac in 0.0f64..1.0) {
        let k = 1 + ((n as f64 - 1.0) * k_frac).round() as usize;
        let mut rng = rng_from_seed(seed);
        let a = random_psd(&mut rng, n, 1.0);
        let ca = compound(a.as_matrix(), k).unwrap();
        let spectrum = sorted(eigh(&symform::HermitianMatrix::symmetrized(ca.as_matrix()).unwrap()).unwrap().values);
        let lam = a.spectrum();
        let mut products = Vec::new();
        for m in 0u32..1 << n {
            if m.count_ones() as usize == k {
                products.push((0..n).filter(|i| m >> i & 1 == 1).map(|i| lam[i]).product::<f64>());
            }
        }
        let products = sorted(products);
        let top = products.last().copied().unwrap().max(1e-300);
        for (x, y) in spectrum.iter().zip(&products) {
            prop_assert!((x - y).abs() <= 1e-8 * top);
        }
        prop_assert!(spectrum[0] >= -1e-9 * top);

        let x = random_general(&mut rng, n, n, 1.0);
        let lhs = compound(matrix_abs(&x).unwrap().as_matrix(), k).unwrap().into_matrix();
        let rhs = matrix_abs(compound(&x, k).unwrap().as_matrix()).unwrap();
        prop_assert!(max_abs_diff(&lhs, rhs.as_matrix()) <= 1e-8 * max_abs(rhs.as_matrix()).max(1.0));
    }

    #[test]
    fn alt_chain_nondecreasing(form in hoelder_forms(), seed: u64, n in 2usize..=5) {
        let mut rng = rng_from_seed(seed);
        let (a, b) = (random_psd(&mut rng, n, 1.0), random_psd(&mut rng, n, 1.0));
        let r = inequality_check(&form, &IneqInput::Alt { a, b, exponents: vec![0.2, 0.5, 0.9] }, &QuadratureSpec::default()).unwrap();
        prop_assert!(r.pass, "{:?}", r.series);
    }

    #[test]
    fn exp_midpoint_convexity(form in hoelder_forms(), seed: u64, n in 2usize..=5) {
        let mut rng = rng_from_seed(seed);
        let (a, b) = (random_hermitian(&mut rng, n, 1.0), random_hermitian(&mut rng, n, 1.0));
        let r = inequality_check(&form, &IneqInput::ExpConvex { a, b, tau: 0.5 }, &QuadratureSpec::default()).unwrap();
        prop_assert!(r.pass);
    }

    #[test]
    fn interpolation_at_theta_one_is_boundary_term(seed: u64, n in 2usize..=4) {
        let mut rng = rng_from_seed(seed);
        let factors = vec![random_psd(&mut rng, n, 1.0), random_psd(&mut rng, n, 1.0)];
        let family = GFamily::power_product(factors).unwrap();
        let params = InterpolationParams::from_endpoints(1.0, 2.0, 2.0).unwrap();
        let r = check_interpolation(&Form::Trace, &family, &params, &QuadratureSpec::default()).unwrap();
        prop_assert!((r.lhs - r.rhs).abs() <= 1e-8 * r.rhs.max(1.0), "{} vs {}", r.lhs, r.rhs);
    }

    #[test]
    fn scalar_targets_match_closed_forms(a in 0.01f64..10.0, b in 0.01f64..10.0, c in 0.01f64..10.0, d in 0.01f64..10.0,
                                          p in 0.01f64..0.99, frac in 0.0f64..=1.0, s in 0.05f64..=1.0) {
        let q = (1.0 - p) * frac.max(0.01);
        let one = num_complex::Complex::new(1.0, 0.0);
        let k = nalgebra::DMatrix::from_element(1, 1, one);
        let target = ProbeTarget::lieb(k, p, q, s).unwrap();
        let m = |v: f64| PsdMatrix::from_real_diagonal(&[v]).unwrap();
        let f = |x: f64, y: f64| target.eval(&Form::Trace, &[m(x), m(y)]).unwrap();
        prop_assert!((f(a, b) - a.powf(p) * b.powf(q)).abs() <= 1e-10 * f(a, b).max(1.0));
        let mid = f(0.5 * (a + c), 0.5 * (b + d));
        prop_assert!(0.5 * (f(a, b) + f(c, d)) <= mid + 1e-10 * mid.max(1.0));
    }

    #[test]
    fn midpoint_instances_replay_exactly(seed: u64, trial in 0u64..1000) {
        let cfg = ProbeConfig { n: 3, m: 2, seed, ..Default::default() };
        let trial_seed = derive_trial_seed(seed, trial);
        for kind in [TargetKind::Epstein, TargetKind::Lieb, TargetKind::ExpLog] {
            let first = MidpointInstance::generate(kind, &cfg, trial_seed).unwrap();
            let again = MidpointInstance::generate(kind, &cfg, trial_seed).unwrap();
            prop_assert_eq!(first.digest(), again.digest());
            let form = Form::Gk { k: 2 };
            if let (Ok(x), Ok(y)) = (first.sides(&form), again.sides(&form)) {
                prop_assert_eq!(x, y);
            }
        }
    }

    #[test]
    fn hoelder_sides_of_trace_bound_products(x in prop::collection::vec(0.0f64..5.0, 2..=6), seed: u64, p in 1.0f64..6.0) {
        let mut rng = rng_from_seed(seed);
        let y: Vec<f64> = x.iter().map(|_| rand::Rng::random_range(&mut rng, 0.0..5.0)).collect();
        let (lhs, rhs) = hoelder_sides(&Form::Trace, &x, &y, p).unwrap();
        prop_assert!(lhs <= rhs + 1e-10 * rhs.max(1.0));
    }
}
