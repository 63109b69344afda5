use num_bigint::BigInt;
use num_rational::Ratio;
use proptest::prelude::*;

use ocpadic::analytic::amice_from_values;
use ocpadic::distributions::{act_on_quotient, fil_quotient, integrate_k, lk_act, WeightKPolynomial};
use ocpadic::fredholm::{fredholm_det, newton_polygon, PadicMatrix};
use ocpadic::intlinalg::mat_mul;
use ocpadic::sample;
use ocpadic::*;

fn ctx(p: u32, n: u32) -> PadicContext {
    PadicContext::new(p, n).unwrap()
}

fn prime() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![3u32, 5, 7, 11])
}

fn element(c: &PadicContext, unit: i64, v: i64) -> PadicElement {
    let x = PadicElement::from_int(c, unit);
    x.mul_exact_int(&num_traits::pow(BigInt::from(c.p()), v as usize))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(p in prime(), a in -10_000i64..10_000, b in -10_000i64..10_000, c in -10_000i64..10_000) {
        let k = ctx(p, 12);
        let (x, y, z) = (PadicElement::from_int(&k, a), PadicElement::from_int(&k, b), PadicElement::from_int(&k, c));
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
    }

    #[test]
    fn serialization_round_trip(p in prime(), u in 1i64..100_000, v in 0i64..6) {
        let k = ctx(p, 10);
        let x = element(&k, u, v);
        prop_assert_eq!(PadicElement::parse(&k, &x.to_string()).unwrap(), x);
    }

    #[test]
    fn valuation_is_additive(p in prime(), a in 1i64..5_000, b in 1i64..5_000, va in 0i64..4, vb in 0i64..4) {
        let k = ctx(p, 16);
        let x = element(&k, a, va);
        let y = element(&k, b, vb);
        prop_assert_eq!((&x * &y).valuation(), x.valuation() + y.valuation());
    }

    #[test]
    fn unit_inverse(p in prime(), a in 1i64..100_000) {
        let k = ctx(p, 12);
        let x = PadicElement::from_int(&k, a);
        prop_assume!(x.is_unit());
        let inv = x.inverse().unwrap();
        prop_assert_eq!(&x * &inv, PadicElement::one(&k));
    }

    #[test]
    fn amice_values_round_trip(p in prime(), s in 1u32..3, vals in prop::collection::vec(0i64..1_000_000, 1..40)) {
        // integral values give integral coefficients when J <= p^s (the Mahler range)
        let k = ctx(p, 10);
        let len = vals.len().min(p.pow(s) as usize);
        let values: Vec<PadicElement> = vals[..len].iter().map(|&x| PadicElement::from_int(&k, x)).collect();
        let f = amice_from_values(&k, &values, s, None).unwrap();
        let back = f.values().unwrap();
        prop_assert!(f.is_integral());
        for (a, b) in values.iter().zip(&back) {
            prop_assert!(a.agreement(b) >= a.precision().min(b.precision()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fredholm_det_is_a_similarity_invariant(seed in any::<u64>(), n in 1usize..6) {
        let k = ctx(3, 16);
        let mut rng = sample::rng(seed, 100);
        let m: Vec<Vec<BigInt>> = (0..n).map(|_| (0..n).map(|_| sample::random_int(&mut rng, 20)).collect()).collect();
        let (u, ui) = sample::random_unimodular(&mut rng, n);
        let conj = mat_mul(&mat_mul(&u, &m, n, n), &ui, n, n);
        let f = fredholm_det(&PadicMatrix::from_bigints(&k, &m).unwrap()).unwrap();
        let g = fredholm_det(&PadicMatrix::from_bigints(&k, &conj).unwrap()).unwrap();
        prop_assert!(f.agreement(&g) >= f.comparison_precision(&g));
    }

    #[test]
    fn newton_polygon_recovers_prescribed_slopes(seed in any::<u64>()) {
        let mut rng = sample::rng(seed, 101);
        let (m, slopes) = sample::prescribed_matrix(&mut rng, 5, 6);
        let f = fredholm_det(&PadicMatrix::from_bigints(&ctx(5, 40), &m).unwrap()).unwrap();
        let poly = newton_polygon(&f).unwrap();
        prop_assert_eq!(poly.slope_multiset(), slopes);
        prop_assert!(!poly.is_adapted(poly.segments[0].0));
        prop_assert!(poly.is_adapted(poly.segments.last().unwrap().0 + Ratio::new(1, 3)));
    }

    #[test]
    fn weight_k_action_is_a_monoid_action(seed in any::<u64>(), k in 2u32..9) {
        let c = ctx(3, 12);
        let mut rng = sample::rng(seed, 102);
        let coeffs = (0..=k - 2).map(|_| sample::random_integral(&mut rng, &c)).collect();
        let poly = WeightKPolynomial::new(k, coeffs).unwrap();
        let g1 = sample::random_delta0(&mut rng, 3);
        let g2 = sample::random_delta0(&mut rng, 3);
        let lhs = lk_act(&(&g1 * &g2), &poly).unwrap();
        let rhs = lk_act(&g1, &lk_act(&g2, &poly).unwrap()).unwrap();
        prop_assert!(lhs.agreement(&rhs) >= lhs.precision().min(rhs.precision()));
    }

    #[test]
    fn quotient_action_is_compatible_with_reduction(seed in any::<u64>(), k in 2u32..4) {
        // acting on D/Fil^k and then reducing to D/Fil^(k-1) equals reducing first
        let c = ctx(3, 12);
        let mut rng = sample::rng(seed, 103);
        let w = sample::random_weight(&mut rng, &c);
        let mu = sample::random_scalar_distribution(&mut rng, &c, 1, 3 * (k as usize + 1));
        let g = sample::random_delta0(&mut rng, 3);
        let q = fil_quotient(&mu, k).unwrap();
        let a = act_on_quotient(&g, &q, &w).unwrap().reduce_level(k - 1).unwrap();
        let b = act_on_quotient(&g, &q.reduce_level(k - 1).unwrap(), &w).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn integration_is_linear(seed in any::<u64>(), k in 2u32..7) {
        let c = ctx(5, 12);
        let mut rng = sample::rng(seed, 104);
        let len = 5 * (k as usize + 2);
        let a = sample::random_scalar_distribution(&mut rng, &c, 1, len);
        let b = sample::random_scalar_distribution(&mut rng, &c, 1, len);
        let sum = integrate_k(&a.add(&b).unwrap(), k).unwrap();
        let (ia, ib) = (integrate_k(&a, k).unwrap(), integrate_k(&b, k).unwrap());
        for ((s, x), y) in sum.coeffs.iter().zip(&ia.coeffs).zip(&ib.coeffs) {
            let t = x + y;
            prop_assert!(s.agreement(&t) >= s.precision().min(t.precision()));
        }
    }
}
