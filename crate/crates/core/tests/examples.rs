//! Worked examples checked against independent computations.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};

use ocpadic::analytic::{act_right, amice_from_values, restriction_scale};
use ocpadic::complex::{cohomology, instantiate, utilde_fredholm, BSComplexTemplate, FormalEntry};
use ocpadic::distributions::{
    amice_transform, dirac, fil_quotient, integrate_k, pair, quotient_length,
};
use ocpadic::eichler_shimura::{canonical_degree_bound, char_of_mobius_factor, mobius_period, up_shift};
use ocpadic::fredholm::{fredholm_det, newton_polygon, slope_decompose, slope_factor, FredholmSeries, PadicMatrix};
use ocpadic::padic::{eta, teichmuller, valp_factorial, valp_factorial_floor};
use ocpadic::tensor::{is_short_exact, mixed_tensor, mixed_tensor_map, PseudobasisModule};
use ocpadic::intlinalg::{image_presentation, quotient, FiniteModule};
use ocpadic::*;

fn ctx(p: u32, n: u32) -> PadicContext {
    PadicContext::new(p, n).unwrap()
}

fn int(c: &PadicContext, x: i64) -> PadicElement {
    PadicElement::from_int(c, x)
}

/// Legendre's formula computed digit by digit as an independent oracle.
fn legendre(n: u64, p: u64) -> u64 {
    (1..=n).map(|m| {
        let mut m = m;
        let mut v = 0;
        while m % p == 0 {
            m /= p;
            v += 1;
        }
        v
    }).sum()
}

#[test]
fn factorial_valuations() {
    let c3 = ctx(3, 10);
    assert_eq!(valp_factorial_floor(0, 1, &c3), 0);
    assert_eq!(valp_factorial_floor(9, 1, &c3), 1);
    assert_eq!(valp_factorial_floor(25, 0, &ctx(5, 10)), 6);
    for n in 0..200 {
        assert_eq!(valp_factorial(n, 3), legendre(n, 3));
    }
}

#[test]
fn teichmuller_examples() {
    let c = ctx(5, 2);
    assert_eq!(teichmuller(&int(&c, 1)).unwrap(), int(&c, 1));
    let w = teichmuller(&int(&c, 2)).unwrap();
    assert_eq!(w, int(&c, 7));
    // brute force: 7 has order 4 mod 25
    assert_eq!(w.pow(4), int(&c, 1));
}

#[test]
fn eta_examples() {
    let c = ctx(3, 12);
    assert!(eta(&int(&c, 1)).unwrap().is_zero());
    // η divides by log(1 + p), which has valuation 1
    for (b, want) in [(4, 1), (16, 2), (64, 3)] {
        let e = eta(&int(&c, b)).unwrap();
        assert!(e.precision() >= 11);
        assert!(e.agreement(&int(&c, want)) >= e.precision());
    }
}

#[test]
fn integer_weight_examples() {
    let c = ctx(3, 5);
    let w = integer_weight(4, &c);
    assert_eq!(w.c(), &int(&c, 16));
    assert_eq!(w.s_min(), 0);
    let w2 = integer_weight(2, &c);
    assert_eq!(w2.c(), &int(&c, 1));
    assert_eq!(w2.tame_index(), 0);
}

#[test]
fn char_extend_against_binomial_series() {
    // t = 0, c = 1 + p gives χ(z) = <z>; <1 + p^2> = 1 + p^2
    let c = ctx(3, 15);
    let w = Weight::new(int(&c, 4), 0, WeightKind::Small).unwrap();
    let b = int(&c, 10);
    let v = w.char_extend(&b, w.s_min()).unwrap();
    assert!(v.agreement(&b) >= v.precision());
    assert_eq!(w.char_extend(&int(&c, 1), 0).unwrap(), int(&c, 1));
}

#[test]
fn mobius_factor_is_a_cocycle() {
    let c = ctx(3, 12);
    let w = integer_weight(5, &c);
    let z = PeriodPoint::new(int(&c, 3), Ratio::from_integer(1)).unwrap();
    let g1 = MonoidMatrix::new(2, 1, 3, 1).unwrap();
    let g2 = MonoidMatrix::new(1, -1, 6, 5).unwrap();
    let lhs = char_of_mobius_factor(&w, &(&g1 * &g2), &z, 1).unwrap();
    let rhs = char_of_mobius_factor(&w, &g1, &mobius_period(&g2, &z).unwrap(), 1)
        .unwrap()
        .mul(&char_of_mobius_factor(&w, &g2, &z, 1).unwrap());
    assert!(lhs.agreement(&rhs) >= lhs.precision().min(rhs.precision()));
    // integer weight: (b z + d)^(k-2)
    let direct = (&(&int(&c, 1) * z.z()) + &int(&c, 1)).pow(3);
    let f = char_of_mobius_factor(&w, &MonoidMatrix::new(1, 1, 0, 1).unwrap(), &z, 1).unwrap();
    assert!(f.agreement(&direct) >= f.precision());
}

#[test]
fn period_point_moves() {
    let c = ctx(3, 10);
    let z0 = PeriodPoint::new(int(&c, 0), Ratio::from_integer(1)).unwrap();
    let moved = mobius_period(&MonoidMatrix::new(1, 0, 3, 1).unwrap(), &z0).unwrap();
    assert_eq!(moved.z(), &int(&c, 3));
    let zp = PeriodPoint::new(int(&c, 3), Ratio::from_integer(1)).unwrap();
    let up = up_shift(&zp).unwrap();
    assert_eq!(up.z(), &int(&c, 9));
    assert_eq!(up.w(), Ratio::from_integer(2));
}

#[test]
fn amice_basis_examples() {
    let c = ctx(3, 10);
    // f(x) = x with s = 0 is e_1
    let values: Vec<_> = (0..6).map(|x| int(&c, x)).collect();
    let f = amice_from_values(&c, &values, 0, None).unwrap();
    let coeffs = f.coefficients();
    assert_eq!(coeffs[1], int(&c, 1));
    assert!(coeffs.iter().enumerate().all(|(j, x)| j == 1 || x.is_zero()));
    // e_3^1 for p = 3: values 1!·C(x, 3)
    let binom3 = |x: i64| x * (x - 1) * (x - 2) / 6;
    let values: Vec<_> = (0..9).map(|x| int(&c, binom3(x))).collect();
    let f = amice_from_values(&c, &values, 1, None).unwrap();
    for (j, x) in f.coefficients().iter().enumerate() {
        assert_eq!(x.is_zero(), j != 3, "coefficient {j}");
    }
    assert_eq!(restriction_scale(9, 1, 3).unwrap(), BigInt::from(362880 / 6));
}

#[test]
fn right_translation_of_identity_function() {
    let c = ctx(3, 10);
    let f = AmiceFunction::from_coefficients(&c, 0, vec![int(&c, 0), int(&c, 1), int(&c, 0), int(&c, 0)]);
    let g = act_right(&f, &integer_weight(2, &c), &MonoidMatrix::new(1, 1, 0, 1).unwrap()).unwrap();
    let coeffs = g.coefficients();
    assert_eq!(coeffs[0], int(&c, 1));
    assert_eq!(coeffs[1], int(&c, 1));
    assert!(coeffs[2..].iter().all(|x| x.is_zero()));
}

#[test]
fn dirac_examples() {
    let c = ctx(3, 10);
    let d0: Distribution<PadicElement> = dirac(&c, &int(&c, 0), 1, 6).unwrap();
    assert_eq!(d0.moments()[0], int(&c, 1));
    assert!(d0.moments()[1..].iter().all(|m| m.is_zero()));
    let d1: Distribution<PadicElement> = dirac(&c, &int(&c, 1), 0, 4).unwrap();
    let want: Vec<_> = [1, 1, 0, 0].iter().map(|&x| int(&c, x)).collect();
    assert_eq!(d1.moments(), &want[..]);
    // pairing against a function is evaluation
    let f = AmiceFunction::from_coefficients(&c, 0, (0..4).map(|j| int(&c, 2 * j + 1)).collect());
    let a = int(&c, 5);
    let da: Distribution<PadicElement> = dirac(&c, &a, 0, 4).unwrap();
    assert!(pair(&da, &f).unwrap().agreement(&f.eval(&a).unwrap()) >= 10);
}

#[test]
fn filtration_indices_and_exponent() {
    let c = ctx(3, 10);
    assert_eq!(quotient_length(3, 1, 1), 3);
    let mu = Distribution::from_moments(&c, 1, (1..=9).map(|j| int(&c, j)).collect());
    let q = fil_quotient(&mu, 1).unwrap();
    let idx: Vec<usize> = q.entries().iter().filter(|e| e.1 > 0).map(|e| e.0).collect();
    assert_eq!(idx, vec![0, 1, 2]);
    let q2 = fil_quotient(&mu, 2).unwrap();
    assert!(q2.scale_int(&BigInt::from(9)).is_zero());
    assert!(fil_quotient(&mu, 0).unwrap().is_zero());
}

#[test]
fn integration_of_dirac() {
    let c = ctx(3, 10);
    let a = int(&c, 4);
    let mu: Distribution<PadicElement> = dirac(&c, &a, 1, 12).unwrap();
    let poly = integrate_k(&mu, 5).unwrap();
    // (1 + 4X)^3 = 1 + 12X + 48X^2 + 64X^3
    let want = [1, 12, 48, 64];
    for (x, w) in poly.coeffs.iter().zip(want) {
        assert_eq!(x, &int(&c, w));
    }
    assert_eq!(integrate_k(&mu, 2).unwrap().coeffs, vec![mu.moments()[0].clone()]);
}

#[test]
fn amice_transform_of_diracs() {
    let c = ctx(3, 10);
    let d0: Distribution<PadicElement> = dirac(&c, &int(&c, 0), 0, 4).unwrap();
    let d1: Distribution<PadicElement> = dirac(&c, &int(&c, 1), 0, 4).unwrap();
    let one_t = amice_transform(&d1, 4).unwrap();
    assert_eq!(amice_transform(&d0, 4).unwrap()[0], int(&c, 1));
    assert_eq!(&one_t[..2], &[int(&c, 1), int(&c, 1)]);
    assert!(one_t[2..].iter().all(|x| x.is_zero()));
}

#[test]
fn degree_bound_values() {
    assert_eq!(canonical_degree_bound(1, 3).unwrap(), BigRational::new(2.into(), 3.into()));
    assert_eq!(canonical_degree_bound(2, 3).unwrap(), BigRational::new(8.into(), 9.into()));
    let mut last = BigRational::zero();
    for n in 1..20 {
        let d = canonical_degree_bound(n, 5).unwrap();
        assert!(d > last && d < BigRational::one());
        last = d;
    }
}

fn poly_from(c: &PadicContext, coeffs: &[i64]) -> FredholmSeries<PadicElement> {
    FredholmSeries::new(c, coeffs.iter().map(|&x| int(c, x)).collect()).unwrap()
}

#[test]
fn fredholm_examples() {
    let c = ctx(3, 20);
    let zero = PadicMatrix::from_ints(&c, &[vec![0, 0], vec![0, 0]]).unwrap();
    assert_eq!(fredholm_det(&zero).unwrap().render(), "1");
    let diag = PadicMatrix::from_ints(&c, &[vec![3, 0], vec![0, 9]]).unwrap();
    // (1 - 3T)(1 - 9T) = 1 - 12T + 27T^2
    let f = fredholm_det(&diag).unwrap();
    assert_eq!(f.coefficients(), &[int(&c, 1), int(&c, -12), int(&c, 27)]);

    assert!(newton_polygon(&poly_from(&c, &[1])).unwrap().segments.is_empty());
    assert_eq!(newton_polygon(&poly_from(&c, &[1, -3])).unwrap().segments, vec![(Ratio::from_integer(1), 1)]);
    // (1 - T)(1 - 3T)^2 = 1 - 7T + 15T^2 - 9T^3
    let g = poly_from(&c, &[1, -7, 15, -9]);
    assert_eq!(
        newton_polygon(&g).unwrap().segments,
        vec![(Ratio::from_integer(0), 1), (Ratio::from_integer(1), 2)]
    );
    // (1 - T)(1 - 9T) at h = 1
    let h = poly_from(&c, &[1, -10, 9]);
    let (q, s) = slope_factor(&h, Ratio::from_integer(1)).unwrap();
    assert!(q.agreement(&poly_from(&c, &[1, -1])) >= q.precision());
    assert!(s.agreement(&poly_from(&c, &[1, -9])) >= s.precision());
    let (q, s) = slope_factor(&h, Ratio::from_integer(5)).unwrap();
    assert_eq!((q.degree(), s.degree()), (2, 0));
    // (1 - 3T)^2 at h = 1 is not adapted
    assert!(matches!(
        slope_factor(&poly_from(&c, &[1, -6, 9]), Ratio::from_integer(1)),
        Err(Error::NotAdapted { .. })
    ));
}

#[test]
fn conjugated_block_projector() {
    let c = ctx(3, 20);
    // diag(1, 27) conjugated by U = [[2, 1], [1, 1]], U^{-1} = [[1, -1], [-1, 2]]
    // U D U^{-1} = [[2 - 27, -2 + 54], [1 - 27, -1 + 54]]
    let m = PadicMatrix::from_ints(&c, &[vec![-25, 52], vec![-26, 53]]).unwrap();
    let d = slope_decompose(&m, Ratio::from_integer(1)).unwrap();
    assert_eq!(d.rank, 1);
    // projector onto the slope-0 line: U e_11 U^{-1} = [[2, -2], [1, -1]]
    let want = PadicMatrix::from_ints(&c, &[vec![2, -2], vec![1, -1]]).unwrap();
    assert!(d.projector.agreement(&want) >= d.precision);
    let all = slope_decompose(&m, Ratio::from_integer(5)).unwrap();
    assert_eq!(all.rank, 2);
}

#[test]
fn iwasawa_family_dual_path() {
    let c = ctx(3, 12);
    let ring = IwasawaRing::new(&c, 1, 6).unwrap();
    let t = ring.variable(0);
    let one = IwasawaElement::one(&ring);
    let p = IwasawaElement::from_scalar(&ring, &int(&c, 3));
    let zero = IwasawaElement::zero(&ring);
    let m = PadicMatrix::new(&ring, vec![vec![one.add(&t), zero.clone()], vec![zero, p]]).unwrap();
    let point = [int(&c, 3)];
    let via_family = fredholm_det(&m).unwrap().specialize(&point).unwrap();
    let direct = fredholm_det(&ocpadic::fredholm::specialize_family(&m, &point).unwrap()).unwrap();
    // (1 - 4T)(1 - 3T)
    assert!(direct.agreement(&poly_from(&c, &[1, -7, 12])) >= direct.precision());
    assert!(via_family.agreement(&direct) >= via_family.comparison_precision(&direct));
}

#[test]
fn mixed_tensor_examples() {
    let x = FiniteModule::new(3, vec![2]);
    assert_eq!(mixed_tensor(&x, &PseudobasisModule::flat(1)), x);
    assert_eq!(mixed_tensor(&x, &PseudobasisModule::flat(3)).exponents, vec![2, 2, 2]);
    let gens = vec![vec![BigInt::from(3)]];
    let f = image_presentation(&gens, &x);
    let g = quotient(&x, &gens);
    let m = PseudobasisModule::flat(2);
    assert!(is_short_exact(&mixed_tensor_map(&f, &m), &mixed_tensor_map(&g, &m)));
}

fn id() -> MonoidMatrix {
    MonoidMatrix::identity()
}

#[test]
fn multiplication_by_p_complex() {
    // D/Fil^2 over Z_3 with s = 1 has a Z/9 summand; x ↦ 3x kills H^0 = Z/3 and H^1 = Z/3 on it
    let c = ctx(3, 10);
    let t = BSComplexTemplate::new(vec![1, 1], vec![vec![vec![FormalEntry::scalar(3)]]], None).unwrap();
    let cx = instantiate(&t, &integer_weight(2, &c), 1, 2).unwrap();
    let h = cohomology(&cx).unwrap();
    // each Z/9 summand gives Z/3 in both degrees, each Z/3 summand gives Z/3 in both degrees
    let m = &cx.modules[0];
    let count = m.exponents.iter().filter(|&&e| e > 0).count();
    assert_eq!(h[0].invariant_factors.iter().filter(|&&e| e > 0).count(), count);
    assert!(h[0].invariant_factors.iter().all(|&e| e <= 1));
    assert_eq!(h[0].length(), h[1].length());
}

#[test]
fn deep_element_gives_zero_differential() {
    let c = ctx(3, 10);
    let g = MonoidMatrix::new(1 + 27, 27, 27, 1).unwrap();
    let entry = FormalEntry(vec![(BigInt::one(), g), (BigInt::from(-1), id())]);
    let t = BSComplexTemplate::new(vec![1, 1], vec![vec![vec![entry]]], None).unwrap();
    let cx = instantiate(&t, &integer_weight(3, &c), 1, 2).unwrap();
    assert!(cx.differentials[0].iter().flatten().all(|x| x.is_zero()));
    let h = cohomology(&cx).unwrap();
    assert_eq!(h[0].length(), cx.modules[0].length());
}

#[test]
fn utilde_identity_and_scalar() {
    let c = ctx(3, 10);
    let t = BSComplexTemplate::new(
        vec![1],
        vec![],
        Some(vec![vec![vec![FormalEntry::scalar(3)]]]),
    )
    .unwrap();
    let cx = instantiate(&t, &integer_weight(2, &c), 1, 2).unwrap();
    let us = utilde_fredholm(&cx).unwrap();
    assert_eq!(us.len(), 1);
    let u = &us[0];
    // Ũ = 3 on H^0 = D/Fil^2: det(1 - 3T)^r modulo the smallest invariant factor
    let r = u.invariant_factors.iter().filter(|&&e| e > 0).count();
    let cu = ctx(3, u.precision);
    let mut want = vec![int(&cu, 1)];
    for _ in 0..r {
        let mut next = vec![PadicElement::zero(&cu); want.len() + 1];
        for (i, x) in want.iter().enumerate() {
            next[i] = &next[i] + x;
            next[i + 1] = &next[i + 1] - &x.mul_exact_int(&BigInt::from(3));
        }
        want = next;
    }
    while want.len() > 1 && want.last().unwrap().is_zero() {
        want.pop();
    }
    let want = FredholmSeries::new(&cu, want).unwrap();
    assert!(u.series.agreement(&want) >= u.series.comparison_precision(&want));
}
