//! Distributions as Amice-moment sequences `m_j = μ(e_j^s)`, the dual action,
//! the filtration quotients `D/Fil^k`, and the weight-k integration map.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::analytic::{self, floor_index, parse_sequence, AmiceFunction};
use crate::error::{Error, Result};
use crate::intlinalg::FiniteModule;
use crate::iwasawa::IwasawaElement;
use crate::monoid::MonoidMatrix;
use crate::padic::{factorial, PadicContext, PadicElement};
use crate::ring::{Residue, Ring, RingParams};
use crate::weights::Weight;

/// A truncated distribution: moments `m_j = μ(e_j^s)` for `j < J`.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution<R: Ring> {
    params: R::Params,
    s: u32,
    moments: Vec<R>,
}

impl<R: Ring> Distribution<R> {
    pub fn from_moments(params: &R::Params, s: u32, moments: Vec<R>) -> Self {
        Distribution {
            params: params.clone(),
            s,
            moments,
        }
    }

    pub fn zero(params: &R::Params, s: u32, len: usize) -> Self {
        Self::from_moments(params, s, vec![R::zero(params); len])
    }

    pub fn params(&self) -> &R::Params {
        &self.params
    }

    pub fn ctx(&self) -> &PadicContext {
        self.params.context()
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn len(&self) -> usize {
        self.moments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moments.is_empty()
    }

    pub fn moments(&self) -> &[R] {
        &self.moments
    }

    pub fn precision(&self) -> i64 {
        self.moments.iter().map(Ring::precision).min().unwrap_or(i64::MAX)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other.s, other.len())?;
        Ok(Self::from_moments(
            &self.params,
            self.s,
            self.moments.iter().zip(&other.moments).map(|(a, b)| a.add(b)).collect(),
        ))
    }

    pub fn scale(&self, x: &R) -> Self {
        Self::from_moments(&self.params, self.s, self.moments.iter().map(|m| m.mul(x)).collect())
    }

    fn check_shape(&self, s: u32, len: usize) -> Result<()> {
        if s != self.s || len != self.len() {
            return Err(Error::Mismatch(format!(
                "shapes differ: (s={}, J={}) vs (s={s}, J={len})",
                self.s,
                self.len()
            )));
        }
        Ok(())
    }

    /// Applies a coefficient map to every moment.
    pub fn map_ring<S: Ring>(&self, params: &S::Params, f: impl Fn(&R) -> Result<S>) -> Result<Distribution<S>> {
        Ok(Distribution::from_moments(
            params,
            self.s,
            self.moments.iter().map(f).collect::<Result<Vec<_>>>()?,
        ))
    }

    pub fn to_json(&self) -> Value {
        let ctx = self.ctx();
        json!({
            "p": ctx.p(),
            "N": ctx.n(),
            "s": self.s,
            "J": self.moments.len(),
            "moments": self.moments.iter().map(Ring::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(params: &R::Params, v: &Value) -> Result<Self> {
        let (s, moments) = parse_sequence::<R>(params, v, "moments")?;
        Ok(Self::from_moments(params, s, moments))
    }
}

/// The evaluation functional at `a ∈ Z_p`: `m_j = e_j^s(a)`.
pub fn dirac<R: Ring>(params: &R::Params, a: &PadicElement, s: u32, len: usize) -> Result<Distribution<R>> {
    if len == 0 {
        return Ok(Distribution::zero(params, s, 0));
    }
    let vals = analytic::basis_values(a, len - 1, s)?;
    Ok(Distribution::from_moments(
        params,
        s,
        vals.iter().map(|v| R::from_scalar(params, v)).collect(),
    ))
}

/// `μ(f) = Σ m_j c_j`; discarded coefficients of `f` cap the precision.
pub fn pair<R: Ring>(mu: &Distribution<R>, f: &AmiceFunction<R>) -> Result<R> {
    mu.check_shape(f.s(), f.len())?;
    let acc = mu
        .moments
        .iter()
        .zip(f.coefficients())
        .fold(R::zero(&mu.params), |acc, (m, c)| acc.add(&m.mul(c)));
    Ok(acc.cap_precision(f.certified_tail()))
}

/// `(γ·μ)(f) = μ(f ·_w γ)`.
///
/// Moments whose value depends on the unknown moments beyond the truncation
/// carry correspondingly reduced precision.
pub fn act_left<R: Ring>(gamma: &MonoidMatrix, mu: &Distribution<R>, w: &Weight<R>) -> Result<Distribution<R>> {
    if w.ctx() != mu.ctx() {
        return Err(Error::Mismatch("distribution and weight live in different contexts".into()));
    }
    let moments = analytic::act_left_moments(w, gamma, mu.s, &mu.moments)?;
    Ok(Distribution::from_moments(&mu.params, mu.s, moments))
}

/// An element of `D^{s,◦}/Fil^k`: entry `j` lives in `R/a^{e_j}` with
/// `e_j = k - v_p(λ_j) = k - ⌊j/p^s⌋`; only indices with `e_j > 0` are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteDistribution<R: Ring> {
    params: R::Params,
    s: u32,
    k: u32,
    entries: Vec<(usize, u32, Residue)>,
}

/// Number of stored indices at level `k`: `k·p^s`.
pub fn quotient_length(p: u32, s: u32, k: u32) -> usize {
    k as usize * (p as usize).pow(s)
}

/// `e_j = max(0, k - ⌊j/p^s⌋)`.
pub fn quotient_exponent(j: usize, p: u32, s: u32, k: u32) -> u32 {
    (k as i64 - floor_index(j as u64, s, p) as i64).max(0) as u32
}

fn check_level<R: Ring>(params: &R::Params, s: u32, k: u32) -> Result<()> {
    if s == 0 {
        return Err(Error::Precondition("the filtration needs s >= 1".into()));
    }
    let max = params.max_residue_level();
    if k > max {
        return Err(Error::exhausted(
            "fil_quotient",
            format!("level k = {k} exceeds the ring's residue range {max}"),
        ));
    }
    Ok(())
}

fn generator_list<P: RingParams>(params: &P, s: u32, k: u32) -> Vec<(usize, [u32; 2], u32)> {
    let p = params.context().p();
    let mut out = Vec::new();
    for j in 0..quotient_length(p, s, k) {
        let e = quotient_exponent(j, p, s, k);
        for m in params.residue_monomials(e) {
            out.push((j, m, e - m[0] - m[1]));
        }
    }
    out
}

/// The image of `μ` in `D/Fil^k`.
pub fn fil_quotient<R: Ring>(mu: &Distribution<R>, k: u32) -> Result<FiniteDistribution<R>> {
    check_level::<R>(&mu.params, mu.s, k)?;
    let p = mu.ctx().p();
    let len = quotient_length(p, mu.s, k);
    if mu.len() < len {
        return Err(Error::Precondition(format!(
            "level {k} needs {len} moments, distribution has {}",
            mu.len()
        )));
    }
    let mut entries = Vec::with_capacity(len);
    for j in 0..len {
        let e = quotient_exponent(j, p, mu.s, k);
        entries.push((j, e, mu.moments[j].residue(e)?));
    }
    Ok(FiniteDistribution {
        params: mu.params.clone(),
        s: mu.s,
        k,
        entries,
    })
}

impl<R: Ring> FiniteDistribution<R> {
    pub fn zero(params: &R::Params, s: u32, k: u32) -> Result<Self> {
        check_level::<R>(params, s, k)?;
        let p = params.context().p();
        let entries = (0..quotient_length(p, s, k))
            .map(|j| {
                let e = quotient_exponent(j, p, s, k);
                (j, e, Residue::zero(e))
            })
            .collect();
        Ok(FiniteDistribution {
            params: params.clone(),
            s,
            k,
            entries,
        })
    }

    pub fn params(&self) -> &R::Params {
        &self.params
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn level(&self) -> u32 {
        self.k
    }

    pub fn entries(&self) -> &[(usize, u32, Residue)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|(_, _, r)| r.is_zero())
    }

    /// `log_p` of the order of the whole group `D/Fil^k`.
    pub fn group_length(&self) -> u64 {
        self.entries
            .iter()
            .map(|(_, e, _)| self.params.residue_length(*e))
            .sum()
    }

    /// The largest modulus exponent; the group is killed by `p` to this power.
    pub fn exponent(&self) -> u32 {
        self.entries.iter().map(|(_, e, _)| *e).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = self.params.context().p();
        FiniteDistribution {
            params: self.params.clone(),
            s: self.s,
            k: self.k,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|((j, e, a), (_, _, b))| (*j, *e, a.add(p, b)))
                .collect(),
        }
    }

    pub fn scale_int(&self, m: &BigInt) -> Self {
        let p = self.params.context().p();
        FiniteDistribution {
            params: self.params.clone(),
            s: self.s,
            k: self.k,
            entries: self
                .entries
                .iter()
                .map(|(j, e, a)| (*j, *e, a.scale_int(p, m)))
                .collect(),
        }
    }

    /// Cyclic generators `(j, m, order exponent)`: the monomial `T^m` in slot `j`
    /// generates a factor `Z/p^{e_j - |m|}`.
    pub fn generators(&self) -> Vec<(usize, [u32; 2], u32)> {
        generator_list(&self.params, self.s, self.k)
    }

    /// The finite group `D/Fil^k` as `⊕ Z/p^e`.
    pub fn module(&self) -> FiniteModule {
        FiniteModule::new(
            self.params.context().p(),
            self.generators().into_iter().map(|g| g.2).collect(),
        )
    }

    /// The generator with index `idx` in the order of [`Self::generators`].
    pub fn basis_element(params: &R::Params, s: u32, k: u32, idx: usize) -> Result<Self> {
        let mut out = Self::zero(params, s, k)?;
        let p = params.context().p();
        let (j, m, _) = *generator_list(params, s, k)
            .get(idx)
            .ok_or_else(|| Error::Precondition(format!("no generator with index {idx}")))?;
        let e = out.entries[j].1;
        out.entries[j].2 = Residue::from_terms(p, e, [(m, BigInt::one())]);
        Ok(out)
    }

    /// Coordinates with respect to [`Self::generators`].
    pub fn coordinates(&self) -> Vec<BigInt> {
        self.generators()
            .into_iter()
            .map(|(j, m, _)| self.entries[j].2.terms.get(&m).cloned().unwrap_or_default())
            .collect()
    }

    /// Lifts to a truncated distribution with zero moments beyond level `k`.
    pub fn lift(&self) -> Distribution<R> {
        Distribution::from_moments(
            &self.params,
            self.s,
            self.entries.iter().map(|(_, _, r)| R::from_residue(&self.params, r)).collect(),
        )
    }

    /// The image at a lower level.
    pub fn reduce_level(&self, k: u32) -> Result<Self> {
        if k > self.k {
            return Err(Error::Precondition(format!("cannot raise level {} to {k}", self.k)));
        }
        let p = self.params.context().p();
        let len = quotient_length(p, self.s, k);
        Ok(FiniteDistribution {
            params: self.params.clone(),
            s: self.s,
            k,
            entries: self.entries[..len]
                .iter()
                .map(|(j, _, r)| {
                    let e = quotient_exponent(*j, p, self.s, k);
                    (*j, e, r.truncate(p, e))
                })
                .collect(),
        })
    }

    pub fn to_json(&self) -> Value {
        let ctx = self.params.context();
        json!({
            "p": ctx.p(),
            "N": ctx.n(),
            "s": self.s,
            "k": self.k,
            "entries": self.entries.iter().map(|(j, e, r)| json!([j, e, residue_to_json(r)])).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(params: &R::Params, v: &Value) -> Result<Self> {
        let bad = |w: &str| Error::Parse(format!("finite distribution: {w}"));
        let s = v.get("s").and_then(Value::as_u64).ok_or_else(|| bad("missing s"))? as u32;
        let k = v.get("k").and_then(Value::as_u64).ok_or_else(|| bad("missing k"))? as u32;
        let mut q = Self::zero(params, s, k)?;
        let items = v.get("entries").and_then(Value::as_array).ok_or_else(|| bad("missing entries"))?;
        if items.len() != q.entries.len() {
            return Err(bad("wrong number of entries"));
        }
        let p = params.context().p();
        for (slot, item) in q.entries.iter_mut().zip(items) {
            let arr = item.as_array().filter(|a| a.len() == 3).ok_or_else(|| bad("entry must be [j, e, residue]"))?;
            let j = arr[0].as_u64().ok_or_else(|| bad("index"))? as usize;
            let e = arr[1].as_u64().ok_or_else(|| bad("exponent"))? as u32;
            if j != slot.0 || e != slot.1 {
                return Err(bad("entry index or exponent does not match the level"));
            }
            let r = residue_from_json(p, e, &arr[2])?;
            slot.2 = r;
        }
        Ok(q)
    }
}

pub fn residue_to_json(r: &Residue) -> Value {
    Value::Array(
        r.terms
            .iter()
            .map(|(m, c)| json!([m[0], m[1], c.to_string()]))
            .collect(),
    )
}

pub fn residue_from_json(p: u32, level: u32, v: &Value) -> Result<Residue> {
    let bad = || Error::Parse(format!("residue must be a list of [a, b, \"coefficient\"], got {v}"));
    let mut terms = Vec::new();
    for t in v.as_array().ok_or_else(bad)? {
        let t = t.as_array().filter(|t| t.len() == 3).ok_or_else(bad)?;
        let a = t[0].as_u64().ok_or_else(bad)? as u32;
        let b = t[1].as_u64().ok_or_else(bad)? as u32;
        let c: BigInt = t[2].as_str().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        terms.push(([a, b], c));
    }
    let r = Residue::from_terms(p, level, terms.clone());
    let canonical = terms.len() == r.terms.len() && terms.iter().all(|(m, c)| r.terms.get(m) == Some(c));
    if !canonical {
        return Err(Error::Parse(format!("residue {v} is not in canonical form")));
    }
    Ok(r)
}

/// The exact action of `γ` on `D/Fil^k`.
///
/// Moments beyond index `k·p^s` only reach entry `j` through `A[i][j]`, which is
/// divisible by `p^{⌊i/p^s⌋ - ⌊j/p^s⌋} ⊆ a^{e_j}`, so lifting by zero is harmless.
pub fn act_on_quotient<R: Ring>(gamma: &MonoidMatrix, q: &FiniteDistribution<R>, w: &Weight<R>) -> Result<FiniteDistribution<R>> {
    if q.k == 0 {
        return Ok(q.clone());
    }
    let need = q.k as i64;
    if w.c().precision() < need {
        return Err(Error::exhausted(
            "act_on_quotient",
            format!("weight known to {} digits, level {} needs {need}", w.c().precision(), q.k),
        ));
    }
    let moved = act_left(gamma, &q.lift(), w)?;
    let mut entries = Vec::with_capacity(q.entries.len());
    for ((j, e, _), m) in q.entries.iter().zip(moved.moments()) {
        entries.push((*j, *e, m.residue(*e)?));
    }
    Ok(FiniteDistribution {
        params: q.params.clone(),
        s: q.s,
        k: q.k,
        entries,
    })
}

/// Specializes an Iwasawa-coefficient distribution at a weight point.
pub fn specialize_weight(mu: &Distribution<IwasawaElement>, point: &[PadicElement]) -> Result<Distribution<PadicElement>> {
    let ctx = mu.ctx().clone();
    mu.map_ring(&ctx, |m| m.specialize(point))
}

/// Stirling numbers of the second kind `S(i, j)` for `i, j <= n`.
pub fn stirling2(n: usize) -> Vec<Vec<BigInt>> {
    let mut s = vec![vec![BigInt::zero(); n + 1]; n + 1];
    s[0][0] = BigInt::one();
    for i in 1..=n {
        for j in 1..=i {
            s[i][j] = BigInt::from(j) * &s[i - 1][j] + &s[i - 1][j - 1];
        }
    }
    s
}

/// `μ(x^i) = Σ_j S(i,j)·(j!/⌊j/p^s⌋!)·m_j` for `i <= imax`.
pub fn monomial_moments(mu: &Distribution<PadicElement>, imax: usize) -> Result<Vec<PadicElement>> {
    if imax >= mu.len() {
        return Err(Error::Precondition(format!(
            "need {} moments, distribution has {}",
            imax + 1,
            mu.len()
        )));
    }
    let ctx = mu.ctx().clone();
    let p = ctx.p();
    let st = stirling2(imax);
    let mut out = Vec::with_capacity(imax + 1);
    for row in st.iter() {
        let mut acc = PadicElement::zero(&ctx);
        for (j, sij) in row.iter().enumerate() {
            if sij.is_zero() {
                continue;
            }
            let ratio = factorial(j as u64) / factorial(floor_index(j as u64, mu.s, p));
            acc = &acc + &mu.moments[j].mul_exact_int(&(sij * ratio));
        }
        out.push(acc);
    }
    Ok(out)
}

/// A polynomial of degree at most `k-2`, the weight-k coefficient module.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightKPolynomial {
    pub k: u32,
    pub coeffs: Vec<PadicElement>,
}

impl WeightKPolynomial {
    pub fn new(k: u32, coeffs: Vec<PadicElement>) -> Result<Self> {
        if k < 2 || coeffs.len() != (k - 1) as usize {
            return Err(Error::Precondition(format!(
                "weight {k} polynomials need k >= 2 and k - 1 coefficients"
            )));
        }
        Ok(WeightKPolynomial { k, coeffs })
    }

    pub fn eval(&self, x: &PadicElement) -> PadicElement {
        let ctx = x.context();
        self.coeffs
            .iter()
            .rev()
            .fold(PadicElement::zero(ctx), |acc, c| &(&acc * x) + c)
    }

    pub fn agreement(&self, other: &Self) -> i64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.agreement(b))
            .min()
            .unwrap_or(i64::MAX)
    }

    pub fn precision(&self) -> i64 {
        self.coeffs.iter().map(|c| c.precision()).min().unwrap_or(i64::MAX)
    }

    pub fn to_json(&self) -> Value {
        json!({"k": self.k, "coeffs": self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>()})
    }
}

/// `i_k(μ) = ∫ (1 + Xx)^{k-2} dμ(x) = Σ_j C(k-2, j) μ(x^j) X^j`.
pub fn integrate_k(mu: &Distribution<PadicElement>, k: u32) -> Result<WeightKPolynomial> {
    if k < 2 {
        return Err(Error::Precondition(format!("integration needs k >= 2, got {k}")));
    }
    let n = (k - 2) as usize;
    let mono = monomial_moments(mu, n)?;
    let coeffs = (0..=n)
        .map(|j| mono[j].mul_exact_int(&binom_int(n as u64, j as u64)))
        .collect();
    WeightKPolynomial::new(k, coeffs)
}

fn binom_int(n: u64, j: u64) -> BigInt {
    factorial(n) / (factorial(j) * factorial(n - j))
}

fn poly_mul(a: &[PadicElement], b: &[PadicElement], ctx: &PadicContext) -> Vec<PadicElement> {
    let mut out = vec![PadicElement::zero(ctx); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

/// `(γ·_k P)(X) = (d + bX)^{k-2} P((c + aX)/(d + bX))`.
pub fn lk_act(gamma: &MonoidMatrix, poly: &WeightKPolynomial) -> Result<WeightKPolynomial> {
    let ctx = match poly.coeffs.first() {
        Some(c) => c.context().clone(),
        None => return Err(Error::Precondition("empty polynomial".into())),
    };
    let [a, b, c, d] = gamma.entries(&ctx);
    let n = (poly.k - 2) as usize;
    let num = vec![c, a];
    let den = vec![d, b];
    // powers of the numerator and denominator
    let mut num_pows = vec![vec![PadicElement::one(&ctx)]];
    let mut den_pows = vec![vec![PadicElement::one(&ctx)]];
    for i in 1..=n {
        num_pows.push(poly_mul(&num_pows[i - 1], &num, &ctx));
        den_pows.push(poly_mul(&den_pows[i - 1], &den, &ctx));
    }
    let mut out = vec![PadicElement::zero(&ctx); n + 1];
    for (i, pi) in poly.coeffs.iter().enumerate() {
        let term = poly_mul(&num_pows[i], &den_pows[n - i], &ctx);
        for (t, x) in term.iter().enumerate() {
            out[t] = &out[t] + &(pi * x);
        }
    }
    WeightKPolynomial::new(poly.k, out)
}

/// `A_μ(T) = Σ_j μ(C(x, j)) T^j` with `μ(C(x, j)) = m_j / ⌊j/p^s⌋!`, truncated at `T^len`.
pub fn amice_transform(mu: &Distribution<PadicElement>, len: usize) -> Result<Vec<PadicElement>> {
    if len > mu.len() {
        return Err(Error::Precondition(format!(
            "transform to T^{len} needs {len} moments, distribution has {}",
            mu.len()
        )));
    }
    let p = mu.ctx().p();
    Ok(mu.moments[..len]
        .iter()
        .enumerate()
        .map(|(j, m)| m.div_exact_int(&factorial(floor_index(j as u64, mu.s, p))))
        .collect())
}

/// Truncated product of power series.
pub fn series_mul(a: &[PadicElement], b: &[PadicElement], len: usize) -> Vec<PadicElement> {
    let ctx = a.first().or(b.first()).expect("nonempty series").context().clone();
    let mut out = vec![PadicElement::zero(&ctx); len];
    for (i, x) in a.iter().enumerate().take(len) {
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

/// `(1+T)^a` for an integer `a`, truncated at `T^len`.
pub fn one_plus_t_pow(ctx: &PadicContext, a: &BigInt, len: usize) -> Result<Vec<PadicElement>> {
    crate::padic::binomials_of_rational(ctx, a, &BigInt::one(), len.saturating_sub(1) as u64)
        .map(|mut v| {
            v.truncate(len);
            v
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::integer_weight;

    fn ctx() -> PadicContext {
        PadicContext::new(3, 10).unwrap()
    }

    fn ints(ctx: &PadicContext, xs: &[i64]) -> Vec<PadicElement> {
        xs.iter().map(|&x| PadicElement::from_int(ctx, x)).collect()
    }

    #[test]
    fn dirac_examples() {
        let c = ctx();
        let d0: Distribution<PadicElement> = dirac(&c, &PadicElement::zero(&c), 0, 4).unwrap();
        assert_eq!(d0.moments(), &ints(&c, &[1, 0, 0, 0])[..]);
        let d1: Distribution<PadicElement> = dirac(&c, &PadicElement::one(&c), 0, 4).unwrap();
        assert_eq!(d1.moments(), &ints(&c, &[1, 1, 0, 0])[..]);
    }

    #[test]
    fn fil_census_p3_s1() {
        let c = ctx();
        let mu: Distribution<PadicElement> = dirac(&c, &PadicElement::from_int(&c, 5), 1, 12).unwrap();
        let q = fil_quotient(&mu, 1).unwrap();
        let idx: Vec<usize> = q.entries().iter().map(|e| e.0).collect();
        assert_eq!(idx, vec![0, 1, 2]);
        assert_eq!(fil_quotient(&mu, 0).unwrap().entries().len(), 0);
        assert!(q.scale_int(&BigInt::from(3)).is_zero());
    }

    #[test]
    fn lk_act_example() {
        let c = ctx();
        // k = 3, γ = (1,1;0,1), P = X: (d+bX) P((c+aX)/(d+bX)) = c + aX = X
        let p = WeightKPolynomial::new(3, ints(&c, &[0, 1])).unwrap();
        let g = MonoidMatrix::new(1, 1, 0, 1).unwrap();
        assert_eq!(lk_act(&g, &p).unwrap().coeffs, ints(&c, &[0, 1]));
        // P = 1 maps to d + bX = 1 + X
        let one = WeightKPolynomial::new(3, ints(&c, &[1, 0])).unwrap();
        assert_eq!(lk_act(&g, &one).unwrap().coeffs, ints(&c, &[1, 1]));
    }

    #[test]
    fn integrate_dirac() {
        let c = ctx();
        let a = PadicElement::from_int(&c, 7);
        let mu: Distribution<PadicElement> = dirac(&c, &a, 1, 12).unwrap();
        let poly = integrate_k(&mu, 5).unwrap();
        assert_eq!(poly.coeffs, ints(&c, &[1, 21, 147, 343]));
        assert_eq!(integrate_k(&mu, 2).unwrap().coeffs, ints(&c, &[1]));
    }

    #[test]
    fn integration_is_equivariant() {
        let c = ctx();
        let w = integer_weight(6, &c);
        let moments: Vec<i64> = (0..60).map(|j| (j * j + 7 * j + 3) % 31).collect();
        let mu: Distribution<PadicElement> = Distribution::from_moments(&c, 1, ints(&c, &moments));
        let g = MonoidMatrix::new(2, 1, 3, 4).unwrap();
        let lhs = integrate_k(&act_left(&g, &mu, &w).unwrap(), 6).unwrap();
        let rhs = lk_act(&g, &integrate_k(&mu, 6).unwrap()).unwrap();
        assert!(lhs.agreement(&rhs) >= lhs.precision().min(rhs.precision()));
        assert!(lhs.precision() >= 9);
    }

    #[test]
    fn amice_transform_examples() {
        let c = ctx();
        let d0: Distribution<PadicElement> = dirac(&c, &PadicElement::zero(&c), 0, 4).unwrap();
        assert_eq!(amice_transform(&d0, 3).unwrap(), ints(&c, &[1, 0, 0]));
        let d1: Distribution<PadicElement> = dirac(&c, &PadicElement::one(&c), 0, 4).unwrap();
        let t = amice_transform(&d1, 4).unwrap();
        for (x, y) in t.iter().zip(ints(&c, &[1, 1, 0, 0])) {
            assert!(x.agreement(&y) >= x.precision());
        }
    }

    #[test]
    fn finite_distribution_json_round_trip() {
        let c = ctx();
        let mu: Distribution<PadicElement> = dirac(&c, &PadicElement::from_int(&c, 4), 1, 12).unwrap();
        let q = fil_quotient(&mu, 3).unwrap();
        let back = FiniteDistribution::from_json(&c, &q.to_json()).unwrap();
        assert_eq!(back, q);
    }
}
