//! Period points, the Möbius action on them, and the kernel `μ ⊗ f ↦ μ(χ(1+𝔷x))·f`.
//!
//! Convention: `γ = [[a, b], [c, d]]` acts on the right of a period point by
//! `𝔷·γ = (a𝔷 + c)/(b𝔷 + d)`, the Möbius transformation of the transpose, so
//! `mobius_period(γ₁γ₂, 𝔷) = mobius_period(γ₂, mobius_period(γ₁, 𝔷))`.
//! The factor `j(γ, 𝔷) = b𝔷 + d` then satisfies
//! `j(γ₁γ₂, 𝔷) = j(γ₁, 𝔷)·j(γ₂, 𝔷·γ₁)`.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};

use crate::analytic::{self, AmiceFunction};
use crate::distributions::{act_left, integrate_k, pair, Distribution};
use crate::error::{Error, Result};
use crate::monoid::MonoidMatrix;
use crate::padic::{valp_factorial, PadicElement};
use crate::ring::{Ring, RingParams};
use crate::weights::{integer_weight, Weight};

/// A fundamental period `𝔷` together with the radius parameter `w` of `ℙ¹_w`.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodPoint {
    z: PadicElement,
    w: Ratio<i64>,
}

/// Exact `p`-adic distance exponent from `𝔷 ∈ Q_p` to `pZ_p`: `None` when `𝔷 ∈ pZ_p`.
pub fn distance_to_pzp(z: &PadicElement) -> Option<i64> {
    if z.valuation() >= 1 {
        None
    } else {
        Some(z.valuation())
    }
}

impl PeriodPoint {
    pub fn new(z: PadicElement, w: Ratio<i64>) -> Result<Self> {
        if w <= Ratio::zero() {
            return Err(Error::OutsideNeighbourhood(format!("w = {w} must be positive")));
        }
        let pt = PeriodPoint { z, w };
        if !pt.is_member() {
            return Err(Error::OutsideNeighbourhood(format!(
                "{} is not within p^-{} of pZ_p",
                pt.z, pt.w
            )));
        }
        Ok(pt)
    }

    pub fn z(&self) -> &PadicElement {
        &self.z
    }

    pub fn w(&self) -> Ratio<i64> {
        self.w
    }

    /// `∃ s ∈ pZ_p : |𝔷 - s| <= p^{-w}`.
    pub fn is_member(&self) -> bool {
        match distance_to_pzp(&self.z) {
            None => true,
            Some(v) => Ratio::from_integer(v) >= self.w,
        }
    }
}

/// `𝔷 ↦ (a𝔷 + c)/(b𝔷 + d)` for `γ ∈ K₀(p)`.
pub fn mobius_period(gamma: &MonoidMatrix, z: &PeriodPoint) -> Result<PeriodPoint> {
    let ctx = z.z.context();
    gamma.require_k0(ctx.p())?;
    let [a, b, c, d] = gamma.entries(ctx);
    let num = &(&a * &z.z) + &c;
    let den = &(&b * &z.z) + &d;
    if !den.is_unit() {
        return Err(Error::NotUnit(den.to_string()));
    }
    PeriodPoint::new(num.checked_div(&den)?, z.w)
}

/// The action of `diag(p, 1)`: `𝔷 ↦ p𝔷`, `w ↦ w + 1`.
pub fn up_shift(z: &PeriodPoint) -> Result<PeriodPoint> {
    let p = z.z.context().prime();
    PeriodPoint::new(z.z.mul_exact_int(&p), z.w + 1)
}

fn require_radius<R: Ring>(w: &Weight<R>, z: &PeriodPoint) -> Result<()> {
    let need = 1 + w.s_min() as i64;
    if z.w < Ratio::from_integer(need) {
        return Err(Error::OutsideNeighbourhood(format!(
            "period point has w = {}, the weight needs w >= {need}",
            z.w
        )));
    }
    Ok(())
}

/// `χ(b𝔷 + d)`, the transformation factor of the trivializing section.
pub fn char_of_mobius_factor<R: Ring>(w: &Weight<R>, gamma: &MonoidMatrix, z: &PeriodPoint, s: u32) -> Result<R> {
    let ctx = w.ctx();
    gamma.require_delta0(ctx.p())?;
    require_radius(w, z)?;
    let [_, b, _, d] = gamma.entries(ctx);
    w.char_extend(&(&(&b * &z.z) + &d), s)
}

/// The Amice expansion of `x ↦ χ(1 + 𝔷x)` with `len` coefficients at radius `s`.
///
/// With `κ = log c / log(1+p)` integral, `χ(1+𝔷x) = (1+𝔷x)^κ`, whose j-th Amice
/// coefficient has valuation at least `j·v(𝔷)` over `Q_p`; over larger rings the
/// binomial denominators cost at most `v(j!)`.
pub fn kernel_function<R: Ring>(w: &Weight<R>, z: &PeriodPoint, s: u32, len: usize) -> Result<AmiceFunction<R>> {
    require_radius(w, z)?;
    if s < w.s_min() {
        return Err(Error::Precondition(format!("s = {s} is below s_min = {}", w.s_min())));
    }
    let ctx = w.ctx().clone();
    let p = ctx.p();
    let top = analytic::floor_index(len.saturating_sub(1) as u64, s, p);
    let hi = ctx.with_precision(ctx.n() + valp_factorial(top, p) as u32 + 2);
    let whi = w.lift(&hi);
    let zint = z
        .z
        .to_bigint()
        .ok_or_else(|| Error::NonIntegral(z.z.to_string()))?;
    let mut values = Vec::with_capacity(len);
    for x in 0..len {
        let arg = BigInt::one() + &zint * BigInt::from(x);
        values.push(whi.char_extend(&PadicElement::from_int(&hi, arg), s)?);
    }
    let f_hi = analytic::amice_from_values(whi.params(), &values, s, None)?;
    let params = w.params().clone();
    let cap = z.z.precision().min(w.c().precision());
    let coeffs = f_hi
        .coefficients()
        .iter()
        .map(|c| c.reduce(&params).cap_precision(cap))
        .collect();
    let vz = z.z.valuation().min(ctx.n() as i64);
    let mut tail = len as i64 * vz;
    if !R::SCALAR {
        tail -= valp_factorial(len as u64, p) as i64;
    }
    Ok(AmiceFunction::from_coefficients(&params, s, coeffs).with_tail(tail.min(cap)))
}

/// `β(μ ⊗ f) = μ(χ(1 + 𝔷x))·f`.
pub fn es_kernel<R: Ring>(w: &Weight<R>, mu: &Distribution<R>, z: &PeriodPoint, f: &R) -> Result<R> {
    let g = kernel_function(w, z, mu.s(), mu.len())?;
    Ok(pair(mu, &g)?.mul(f))
}

/// Outcome of a dual-path identity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub pass: bool,
    /// Precision at which both sides are certified; equality is tested there.
    pub precision: i64,
}

impl CheckOutcome {
    pub fn compare<R: Ring>(lhs: &R, rhs: &R) -> Self {
        let precision = lhs.precision().min(rhs.precision());
        let pass = lhs.agreement(rhs) >= precision;
        CheckOutcome { pass, precision }
    }
}

/// `β(γ·μ ⊗ f)(𝔷) = χ(b𝔷 + d)·β(μ ⊗ f)(𝔷·γ)` for `γ ∈ K₀(p)`.
pub fn es_equivariance_check<R: Ring>(
    w: &Weight<R>,
    mu: &Distribution<R>,
    gamma: &MonoidMatrix,
    z: &PeriodPoint,
    f: &R,
) -> Result<CheckOutcome> {
    let lhs = es_kernel(w, &act_left(gamma, mu, w)?, z, f)?;
    let factor = char_of_mobius_factor(w, gamma, z, mu.s())?;
    let moved = mobius_period(gamma, z)?;
    let rhs = factor.mul(&es_kernel(w, mu, &moved, f)?);
    Ok(CheckOutcome::compare(&lhs, &rhs))
}

/// `μ(χ_k(1 + 𝔷x)) = Σ_i C(k-2, i) μ(x^i) 𝔷^i`.
pub fn factor_weight_k_check(mu: &Distribution<PadicElement>, k: u32, z: &PeriodPoint) -> Result<CheckOutcome> {
    let ctx = mu.ctx();
    let w = integer_weight(k as i64, ctx);
    let lhs = es_kernel(&w, mu, z, &PadicElement::one(ctx))?;
    let rhs = integrate_k(mu, k)?.eval(z.z());
    Ok(CheckOutcome::compare(&lhs, &rhs))
}

/// `δ'_n` from the recurrence `δ'_1 = (p-1)/p`, `δ'_{n+1} = (p-1)/p + δ'_n/p`.
pub fn canonical_degree_bound(n: u32, p: u32) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::Precondition("the degree bound is defined for n >= 1".into()));
    }
    let pb = BigInt::from(p);
    let base = BigRational::new(&pb - 1, pb.clone());
    let mut delta = base.clone();
    for _ in 1..n {
        delta = &base + &delta / BigRational::from_integer(pb.clone());
    }
    Ok(delta)
}

/// The closed form `1 - p^{-n}`.
pub fn canonical_degree_closed_form(n: u32, p: u32) -> BigRational {
    let pn = num_traits::pow(BigInt::from(p), n as usize);
    BigRational::one() - BigRational::new(BigInt::one(), pn)
}

/// Convenience for callers holding only the ring parameters.
pub fn unit_period<P: RingParams>(params: &P, w: Ratio<i64>) -> Result<PeriodPoint> {
    PeriodPoint::new(PadicElement::zero(params.context()), w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::dirac;
    use crate::padic::PadicContext;

    fn ctx() -> PadicContext {
        PadicContext::new(3, 10).unwrap()
    }

    fn pt(c: &PadicContext, z: i64) -> PeriodPoint {
        PeriodPoint::new(PadicElement::from_int(c, z), Ratio::from_integer(1)).unwrap()
    }

    #[test]
    fn mobius_examples() {
        let c = ctx();
        let g = MonoidMatrix::new(1, 0, 3, 1).unwrap();
        assert_eq!(mobius_period(&g, &pt(&c, 0)).unwrap().z(), &PadicElement::from_int(&c, 3));
        assert_eq!(mobius_period(&MonoidMatrix::identity(), &pt(&c, 6)).unwrap(), pt(&c, 6));
        assert!(mobius_period(&MonoidMatrix::new(3, 0, 0, 1).unwrap(), &pt(&c, 0)).is_err());
    }

    #[test]
    fn membership() {
        let c = ctx();
        assert!(PeriodPoint::new(PadicElement::from_int(&c, 1), Ratio::from_integer(1)).is_err());
        assert!(PeriodPoint::new(PadicElement::from_int(&c, 3), Ratio::new(1, 2)).is_ok());
        let up = up_shift(&pt(&c, 3)).unwrap();
        assert_eq!(up.z(), &PadicElement::from_int(&c, 9));
        assert_eq!(up.w(), Ratio::from_integer(2));
    }

    #[test]
    fn degree_bound() {
        assert_eq!(canonical_degree_bound(2, 3).unwrap(), BigRational::new(8.into(), 9.into()));
        assert_eq!(canonical_degree_bound(1, 5).unwrap(), BigRational::new(4.into(), 5.into()));
        for n in 1..=30 {
            assert_eq!(canonical_degree_bound(n, 7).unwrap(), canonical_degree_closed_form(n, 7));
        }
    }

    #[test]
    fn kernel_at_zero_is_total_mass() {
        let c = ctx();
        let w = integer_weight(5, &c);
        let mu: Distribution<PadicElement> = dirac(&c, &PadicElement::from_int(&c, 4), 1, 30).unwrap();
        let f = PadicElement::from_int(&c, 7);
        let v = es_kernel(&w, &mu, &pt(&c, 0), &f).unwrap();
        assert_eq!(v, &mu.moments()[0] * &f);
    }

    #[test]
    fn factorization_on_dirac() {
        let c = ctx();
        let a = PadicElement::from_int(&c, 5);
        let mu: Distribution<PadicElement> = dirac(&c, &a, 1, 30).unwrap();
        for k in 2..=6 {
            let out = factor_weight_k_check(&mu, k, &pt(&c, 6)).unwrap();
            assert!(out.pass && out.precision == 10, "k = {k}: {out:?}");
        }
    }

    #[test]
    fn equivariance_small_instance() {
        let c = ctx();
        let w = crate::weights::Weight::new(PadicElement::from_int(&c, 13), 1, crate::weights::WeightKind::Small).unwrap();
        let moments: Vec<PadicElement> = (0..60).map(|j| PadicElement::from_int(&c, (j * j + 5) % 17)).collect();
        let mu = Distribution::from_moments(&c, 1, moments);
        let g = MonoidMatrix::new(2, 1, 3, 1).unwrap();
        let out = es_equivariance_check(&w, &mu, &g, &pt(&c, 3), &PadicElement::one(&c)).unwrap();
        assert!(out.pass, "{out:?}");
        assert!(out.precision >= 8, "{out:?}");
    }
}
