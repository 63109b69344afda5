//! Seeded random instances for the property suites. The generator is ChaCha8
//! (`rand_chacha::ChaCha8Rng::seed_from_u64`), so a seed fixes every instance.

use num_bigint::{BigInt, RandBigInt};
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::distributions::Distribution;
use crate::error::Result;
use crate::fredholm::PadicMatrix;
use crate::intlinalg::{identity, mat_mul, IntMatrix};
use crate::iwasawa::{IwasawaElement, IwasawaRing};
use crate::monoid::MonoidMatrix;
use crate::padic::{PadicContext, PadicElement};
use crate::ring::{Ring, RingParams};
use crate::weights::{Weight, WeightKind};

pub type SuiteRng = ChaCha8Rng;

/// A generator for one suite: the user seed mixed with a per-suite salt, so
/// suites do not depend on each other's consumption.
pub fn rng(seed: u64, salt: u64) -> SuiteRng {
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Uniform in `[0, p^N)`.
pub fn random_integral(rng: &mut SuiteRng, ctx: &PadicContext) -> PadicElement {
    let q = ctx.pow(ctx.n());
    PadicElement::from_int(ctx, rng.gen_bigint_range(&BigInt::zero(), &q))
}

pub fn random_unit(rng: &mut SuiteRng, ctx: &PadicContext) -> PadicElement {
    loop {
        let x = random_integral(rng, ctx);
        if x.is_unit() {
            return x;
        }
    }
}

pub fn random_int(rng: &mut SuiteRng, bound: i64) -> BigInt {
    BigInt::from(rng.gen_range(-bound..=bound))
}

fn random_prime_to_p(rng: &mut SuiteRng, p: u32, bound: i64) -> BigInt {
    loop {
        let x = random_int(rng, bound);
        if !x.is_multiple_of(&BigInt::from(p)) {
            return x;
        }
    }
}

/// An element of `Δ₀(p)` with small entries.
pub fn random_delta0(rng: &mut SuiteRng, p: u32) -> MonoidMatrix {
    loop {
        let a = random_int(rng, 9);
        let b = random_int(rng, 9);
        let c = random_int(rng, 3) * p;
        let d = random_prime_to_p(rng, p, 9);
        if let Ok(g) = MonoidMatrix::new(a, b, c, d) {
            return g;
        }
    }
}

/// An element of `K₀(p)`: `Δ₀(p)` with unit determinant.
pub fn random_k0(rng: &mut SuiteRng, p: u32) -> MonoidMatrix {
    loop {
        let a = random_prime_to_p(rng, p, 9);
        let b = random_int(rng, 9);
        let c = random_int(rng, 3) * p;
        let d = random_prime_to_p(rng, p, 9);
        if let Ok(g) = MonoidMatrix::new(a, b, c, d) {
            if g.in_k0(p) {
                return g;
            }
        }
    }
}

/// `γ ≡ 1 mod p^n` with integral entries.
pub fn random_deep(rng: &mut SuiteRng, p: u32, n: u32) -> MonoidMatrix {
    let q = num_traits::pow(BigInt::from(p), n as usize);
    loop {
        let a = BigInt::one() + &q * random_int(rng, 3);
        let b = &q * random_int(rng, 3);
        let c = &q * random_int(rng, 3);
        let d = BigInt::one() + &q * random_int(rng, 3);
        if let Ok(g) = MonoidMatrix::new(a, b, c, d) {
            return g;
        }
    }
}

/// `(1, a; 0, 1)`.
pub fn translation(a: &BigInt) -> MonoidMatrix {
    MonoidMatrix::new(BigInt::one(), a.clone(), BigInt::zero(), BigInt::one()).expect("unipotent")
}

/// A small weight over `Q_p`: `c = 1 + p·u`, random tame index.
pub fn random_weight(rng: &mut SuiteRng, ctx: &PadicContext) -> Weight<PadicElement> {
    let p = ctx.p();
    let u = random_integral(rng, ctx);
    let c = &PadicElement::one(ctx) + &u.mul_exact_int(&BigInt::from(p));
    let t = rng.gen_range(0..p as i64 - 1);
    Weight::new(c, t, WeightKind::Small).expect("c - 1 lies in pZ_p")
}

pub fn random_distribution<R: Ring>(rng: &mut SuiteRng, params: &R::Params, s: u32, len: usize, sample: impl Fn(&mut SuiteRng) -> R) -> Distribution<R> {
    let moments = (0..len).map(|_| sample(rng)).collect();
    Distribution::from_moments(params, s, moments)
}

pub fn random_scalar_distribution(rng: &mut SuiteRng, ctx: &PadicContext, s: u32, len: usize) -> Distribution<PadicElement> {
    random_distribution(rng, ctx, s, len, |r| random_integral(r, ctx))
}

/// A random element of a truncated Iwasawa ring with integral coefficients.
pub fn random_iwasawa(rng: &mut SuiteRng, ring: &IwasawaRing) -> Result<IwasawaElement> {
    let coeffs = ring.monomials().iter().map(|_| random_integral(rng, ring.context())).collect();
    IwasawaElement::from_coefficients(ring, coeffs)
}

/// A product of random elementary matrices and a permutation: integral with determinant ±1.
pub fn random_unimodular(rng: &mut SuiteRng, n: usize) -> (IntMatrix, IntMatrix) {
    let mut u = identity(n);
    let mut u_inv = identity(n);
    if n < 2 {
        return (u, u_inv);
    }
    for _ in 0..3 * n {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let f = random_int(rng, 2);
        // E = I + f e_ij, E^{-1} = I - f e_ij
        let mut e = identity(n);
        e[i][j] = f.clone();
        let mut e_inv = identity(n);
        e_inv[i][j] = -f;
        u = mat_mul(&u, &e, n, n);
        u_inv = mat_mul(&e_inv, &u_inv, n, n);
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut pm = vec![vec![BigInt::zero(); n]; n];
    let mut pm_inv = vec![vec![BigInt::zero(); n]; n];
    for (i, &j) in perm.iter().enumerate() {
        pm[i][j] = BigInt::one();
        pm_inv[j][i] = BigInt::one();
    }
    (mat_mul(&pm, &u, n, n), mat_mul(&u_inv, &pm_inv, n, n))
}

/// A block of slope `a/b` (multiplicity `b`): the companion matrix of `X^b - p^a·unit`.
fn slope_block(rng: &mut SuiteRng, p: u32, a: u32, b: usize) -> IntMatrix {
    let unit = random_prime_to_p(rng, p, 4);
    let mut m = vec![vec![BigInt::zero(); b]; b];
    for i in 1..b {
        m[i][i - 1] = BigInt::one();
    }
    m[0][b - 1] = unit * num_traits::pow(BigInt::from(p), a as usize);
    m
}

/// An integer matrix of size at most `max_dim` whose eigenvalue valuations are
/// prescribed, hidden by a unimodular change of basis. Returns the matrix and
/// the sorted slope multiset.
pub fn prescribed_matrix(rng: &mut SuiteRng, p: u32, max_dim: usize) -> (IntMatrix, Vec<Ratio<i64>>) {
    let mut blocks = Vec::new();
    let mut slopes = Vec::new();
    let mut dim = 0;
    let target = rng.gen_range(2..=max_dim);
    while dim < target {
        let room = target - dim;
        let b = if room >= 2 && rng.gen_bool(0.3) { 2 } else { 1 };
        let a = if b == 2 { 2 * rng.gen_range(0..3) + 1 } else { rng.gen_range(0..4) };
        blocks.push(slope_block(rng, p, a, b));
        slopes.extend(std::iter::repeat_n(Ratio::new(a as i64, b as i64), b));
        dim += b;
    }
    let mut m = vec![vec![BigInt::zero(); dim]; dim];
    let mut at = 0;
    for blk in &blocks {
        for (i, row) in blk.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                m[at + i][at + j] = x.clone();
            }
        }
        at += blk.len();
    }
    // strictly upper noise between blocks keeps the characteristic polynomial
    let starts: Vec<usize> = blocks
        .iter()
        .scan(0, |acc, b| {
            let s = *acc;
            *acc += b.len();
            Some(s)
        })
        .collect();
    for (bi, &s0) in starts.iter().enumerate() {
        for &s1 in &starts[bi + 1..] {
            m[s0][s1] = random_int(rng, 3);
        }
    }
    let (u, u_inv) = random_unimodular(rng, dim);
    let conj = mat_mul(&mat_mul(&u, &m, dim, dim), &u_inv, dim, dim);
    slopes.sort();
    (conj, slopes)
}

/// A random `n × n` matrix over a truncated Iwasawa ring.
pub fn random_family(rng: &mut SuiteRng, ring: &IwasawaRing, n: usize) -> Result<PadicMatrix<IwasawaElement>> {
    let rows = (0..n)
        .map(|_| (0..n).map(|_| random_iwasawa(rng, ring)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    PadicMatrix::new(ring, rows)
}

/// A point of the weight space: coordinates in `pZ_p`.
pub fn random_point(rng: &mut SuiteRng, ctx: &PadicContext, vars: usize) -> Vec<PadicElement> {
    (0..vars)
        .map(|_| random_integral(rng, ctx).mul_exact_int(&BigInt::from(ctx.p())))
        .collect()
}
