//! Locally analytic functions on `Z_p` in the Amice basis `e_j^s(x) = ⌊j/p^s⌋!·C(x, j)`,
//! and the weight-twisted right action of `Δ₀(p)`.

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::monoid::MonoidMatrix;
use crate::padic::{self, factorial, valp_factorial, PadicContext, PadicElement};
use crate::ring::{Ring, RingParams};
use crate::weights::Weight;

/// Default truncation length `2·p^s·N`.
pub fn default_length(ctx: &PadicContext, s: u32) -> usize {
    2 * (ctx.p() as usize).pow(s) * ctx.n() as usize
}

/// `⌊j / p^s⌋`, which is also `v_p(λ_j)` for the restriction scale at radius `s`.
pub fn floor_index(j: u64, s: u32, p: u32) -> u64 {
    j / (p as u64).pow(s)
}

/// `λ_j = ⌊j/p^{s-1}⌋! / ⌊j/p^s⌋!`, so that `e_j^{s-1} = λ_j e_j^s`.
pub fn restriction_scale(j: u64, s: u32, p: u32) -> Result<BigInt> {
    if s == 0 {
        return Err(Error::Precondition("restriction scale needs s >= 1".into()));
    }
    let hi = j / (p as u64).pow(s - 1);
    let lo = j / (p as u64).pow(s);
    Ok(factorial(hi) / factorial(lo))
}

/// `v_p(λ_j)`; by Legendre's formula this is `⌊j/p^s⌋`.
pub fn restriction_valuation(j: u64, s: u32, p: u32) -> u64 {
    floor_index(j, s, p)
}

/// A truncated expansion `Σ_{j<J} c_j e_j^s`.
#[derive(Clone, Debug, PartialEq)]
pub struct AmiceFunction<R: Ring> {
    params: R::Params,
    s: u32,
    coeffs: Vec<R>,
    /// Lower bound for the valuation of every discarded coefficient.
    certified_tail: i64,
    padded: bool,
}

impl<R: Ring> AmiceFunction<R> {
    pub fn from_coefficients(params: &R::Params, s: u32, coeffs: Vec<R>) -> Self {
        AmiceFunction {
            params: params.clone(),
            s,
            coeffs,
            certified_tail: params.context().n() as i64,
            padded: false,
        }
    }

    pub fn with_tail(mut self, tail: i64) -> Self {
        self.certified_tail = tail.min(self.params.context().n() as i64);
        self
    }

    /// The basis function `e_j^s` truncated to length `len`.
    pub fn basis(params: &R::Params, s: u32, j: usize, len: usize) -> Self {
        let mut coeffs = vec![R::zero(params); len];
        if j < len {
            coeffs[j] = R::one(params);
        }
        Self::from_coefficients(params, s, coeffs)
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
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficients(&self) -> &[R] {
        &self.coeffs
    }

    pub fn certified_tail(&self) -> i64 {
        self.certified_tail
    }

    pub fn is_padded(&self) -> bool {
        self.padded
    }

    /// Minimum precision over coefficients and the tail bound.
    pub fn precision(&self) -> i64 {
        self.coeffs
            .iter()
            .map(|c| c.precision())
            .min()
            .unwrap_or(i64::MAX)
            .min(self.certified_tail)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.valuation() >= 0)
    }

    /// `Σ c_j e_j^s(x)` for `x ∈ Z_p`; the tail bound caps the output precision.
    pub fn eval(&self, x: &PadicElement) -> Result<R> {
        let ctx = self.ctx();
        if x.context() != ctx {
            return Err(Error::Mismatch("evaluation point lives in another context".into()));
        }
        if !x.is_integral() {
            return Err(Error::NonIntegral(x.to_string()));
        }
        if self.coeffs.is_empty() {
            return Ok(R::zero(&self.params).cap_precision(self.certified_tail));
        }
        let basis = basis_values(x, self.coeffs.len() - 1, self.s)?;
        let mut acc = R::zero(&self.params);
        for (c, e) in self.coeffs.iter().zip(&basis) {
            acc = acc.add(&c.scale(e));
        }
        Ok(acc.cap_precision(self.certified_tail))
    }

    /// Values at `0, 1, ..., len-1`, computed exactly at the coefficients' precision.
    pub fn values(&self) -> Result<Vec<R>> {
        let ctx = self.ctx().clone();
        (0..self.coeffs.len())
            .map(|x| self.eval(&PadicElement::from_int(&ctx, x as u64)))
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let ctx = self.ctx();
        json!({
            "p": ctx.p(),
            "N": ctx.n(),
            "s": self.s,
            "J": self.coeffs.len(),
            "tail": self.certified_tail,
            "padded": self.padded,
            "coeffs": self.coeffs.iter().map(Ring::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(params: &R::Params, v: &Value) -> Result<Self> {
        let (s, coeffs) = parse_sequence::<R>(params, v, "coeffs")?;
        let mut f = Self::from_coefficients(params, s, coeffs);
        if let Some(t) = v.get("tail").and_then(Value::as_i64) {
            f = f.with_tail(t);
        }
        f.padded = v.get("padded").and_then(Value::as_bool).unwrap_or(false);
        Ok(f)
    }
}

/// Shared parser for `{p, N, s, J, <key>: [...]}` records.
pub(crate) fn parse_sequence<R: Ring>(params: &R::Params, v: &Value, key: &str) -> Result<(u32, Vec<R>)> {
    let ctx = params.context();
    let bad = |w: String| Error::Parse(w);
    let p = v.get("p").and_then(Value::as_u64).ok_or_else(|| bad("missing p".into()))?;
    let n = v.get("N").and_then(Value::as_u64).ok_or_else(|| bad("missing N".into()))?;
    if p != ctx.p() as u64 || n != ctx.n() as u64 {
        return Err(Error::Mismatch(format!("record has p={p}, N={n}; context has p={}, N={}", ctx.p(), ctx.n())));
    }
    let s = v.get("s").and_then(Value::as_u64).ok_or_else(|| bad("missing s".into()))? as u32;
    let items = v
        .get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| bad(format!("missing {key}")))?;
    if let Some(j) = v.get("J").and_then(Value::as_u64) {
        if j as usize != items.len() {
            return Err(bad(format!("J = {j} but {} entries given", items.len())));
        }
    }
    let vals = items.iter().map(|x| R::from_json(params, x)).collect::<Result<Vec<_>>>()?;
    Ok((s, vals))
}

/// `e_j^s(x)` for `j = 0..=jmax`.
pub fn basis_values(x: &PadicElement, jmax: usize, s: u32) -> Result<Vec<PadicElement>> {
    let p = x.context().p();
    let bin = padic::binomials(x, jmax as u64)?;
    Ok(bin
        .into_iter()
        .enumerate()
        .map(|(j, b)| b.mul_exact_int(&factorial(floor_index(j as u64, s, p))))
        .collect())
}

/// Forward differences `(Δ^j g)(0)` of `g(0), ..., g(L-1)`.
fn forward_differences<R: Ring>(values: &[R]) -> Vec<R> {
    let mut table = values.to_vec();
    let mut out = Vec::with_capacity(values.len());
    for j in 0..values.len() {
        out.push(table[0].clone());
        for x in 0..values.len() - j - 1 {
            table[x] = table[x + 1].sub(&table[x]);
        }
    }
    out
}

/// The Amice expansion of the function with the given values at `0..J-1`.
///
/// `len` larger than the number of values zero-pads (and flags) the input.
pub fn amice_from_values<R: Ring>(
    params: &R::Params,
    values: &[R],
    s: u32,
    len: Option<usize>,
) -> Result<AmiceFunction<R>> {
    let target = len.unwrap_or(values.len());
    let mut vals = values.to_vec();
    let padded = vals.len() < target;
    vals.resize(target, R::zero(params));
    vals.truncate(target);
    let ctx = params.context();
    let diffs = forward_differences(&vals);
    let mut coeffs = Vec::with_capacity(target);
    for (j, d) in diffs.into_iter().enumerate() {
        let fac = factorial(floor_index(j as u64, s, ctx.p()));
        let c = d.scale(&PadicElement::one(ctx).div_exact_int(&fac));
        if c.precision() < 1 && !c.is_zero() || c.precision() < 0 {
            return Err(Error::exhausted(
                "amice_from_values",
                format!("coefficient {j} retains precision {} after dividing by ⌊j/p^s⌋!", c.precision()),
            ));
        }
        coeffs.push(c);
    }
    let mut f = AmiceFunction::from_coefficients(params, s, coeffs);
    f.padded = padded;
    Ok(f)
}

/// Samples of `x ↦ χ(cx+d)` and `e_j^s((ax+b)/(cx+d))` at `x = 0..len-1`,
/// exact at the precision of the sampler's context.
struct ActionSamples<R: Ring> {
    chi: Vec<R>,
    basis: Vec<Vec<PadicElement>>,
}

fn sample_action<R: Ring>(w: &Weight<R>, gamma: &MonoidMatrix, s: u32, len: usize) -> Result<ActionSamples<R>> {
    let ctx = w.ctx().clone();
    let p = ctx.p();
    let mut chi = Vec::with_capacity(len);
    let mut basis = Vec::with_capacity(len);
    for x in 0..len {
        let xb = BigInt::from(x);
        let num = &gamma.a * &xb + &gamma.b;
        let den = &gamma.c * &xb + &gamma.d;
        chi.push(w.char_extend(&PadicElement::from_int(&ctx, den.clone()), s)?);
        let bin = padic::binomials_of_rational(&ctx, &num, &den, len.saturating_sub(1) as u64)?;
        basis.push(
            bin.into_iter()
                .enumerate()
                .map(|(j, b)| b.mul_exact_int(&factorial(floor_index(j as u64, s, p))))
                .collect(),
        );
    }
    Ok(ActionSamples { chi, basis })
}

/// Guard digits so that dividing by `⌊j/p^s⌋!` for `j < len` stays above precision `N`.
fn action_context(ctx: &PadicContext, s: u32, len: usize) -> PadicContext {
    let top = floor_index(len.saturating_sub(1) as u64, s, ctx.p());
    ctx.with_precision(ctx.n() + valp_factorial(top, ctx.p()) as u32 + 2)
}

/// Checks the preconditions of the action and reports whether the λ-decay bound
/// `v(A[i][j]) >= ⌊i/p^s⌋ - ⌊j/p^s⌋` is available.
fn check_action<R: Ring>(w: &Weight<R>, gamma: &MonoidMatrix, s: u32) -> Result<bool> {
    gamma.require_delta0(w.ctx().p())?;
    let smin = w.s_min();
    if s < smin {
        return Err(Error::Precondition(format!("s = {s} is below s_min = {smin}")));
    }
    if s >= smin + 1 {
        return Ok(true);
    }
    if gamma.c.is_zero() {
        // upper triangular: polynomials of degree j go to degree j, no tail arises
        return Ok(false);
    }
    Err(Error::Precondition(format!(
        "the action of a non-upper-triangular matrix needs s >= 1 + s_min = {}",
        smin + 1
    )))
}

/// The matrix `A[i][j]` = i-th Amice coefficient of `e_j^s ·_w γ`, for `i, j < len`.
///
/// Entry `(i, j)` only depends on samples `0..=i`, so the truncated block is exact.
pub fn action_matrix<R: Ring>(w: &Weight<R>, gamma: &MonoidMatrix, s: u32, len: usize) -> Result<Vec<Vec<R>>> {
    check_action(w, gamma, s)?;
    let ctx = w.ctx().clone();
    let hi = action_context(&ctx, s, len);
    let whi = w.lift(&hi);
    let params_hi = whi.params().clone();
    let samples = sample_action(&whi, gamma, s, len)?;
    let params = w.params().clone();
    let mut a = vec![vec![R::zero(&params); len]; len];
    for j in 0..len {
        let vals: Vec<R> = (0..len)
            .map(|x| samples.chi[x].scale(&samples.basis[x][j]))
            .collect();
        let col = amice_from_values(&params_hi, &vals, s, None)?;
        for (i, c) in col.coefficients().iter().enumerate() {
            a[i][j] = c.reduce(&params).cap_precision(w.c().precision());
        }
    }
    Ok(a)
}

/// `(f ·_w γ)(x) = χ(cx+d) f((ax+b)/(cx+d))`.
pub fn act_right<R: Ring>(f: &AmiceFunction<R>, w: &Weight<R>, gamma: &MonoidMatrix) -> Result<AmiceFunction<R>> {
    let s = f.s;
    let decay = check_action(w, gamma, s)?;
    let len = f.len();
    let ctx = w.ctx().clone();
    if f.ctx() != &ctx {
        return Err(Error::Mismatch("function and weight live in different contexts".into()));
    }
    let p = ctx.p();
    let hi = action_context(&ctx, s, len);
    let whi = w.lift(&hi);
    let params_hi = whi.params().clone();
    let samples = sample_action(&whi, gamma, s, len)?;
    let coeffs_hi: Vec<R> = f.coeffs.iter().map(|c| c.lift(&params_hi)).collect();
    let values: Vec<R> = (0..len)
        .map(|x| {
            let inner = coeffs_hi
                .iter()
                .zip(&samples.basis[x])
                .fold(R::zero(&params_hi), |acc, (c, e)| acc.add(&c.scale(e)));
            samples.chi[x].mul(&inner)
        })
        .collect();
    let out_hi = amice_from_values(&params_hi, &values, s, None)?;
    let params = f.params.clone();
    let wprec = w.c().precision();
    let idx: Vec<i64> = (0..len).map(|j| floor_index(j as u64, s, p) as i64).collect();
    let mut coeffs = Vec::with_capacity(len);
    for (i, c) in out_hi.coefficients().iter().enumerate() {
        // uncertainty in c_j reaches coefficient i through A[i][j]
        let mut cap = f.certified_tail.min(wprec);
        for (j, cj) in f.coeffs.iter().enumerate() {
            let gain = if decay { (idx[i] - idx[j]).max(0) } else { 0 };
            cap = cap.min(cj.precision().saturating_add(gain));
        }
        coeffs.push(c.reduce(&params).cap_precision(cap));
    }
    let mut tail = f.certified_tail;
    if decay {
        let top = floor_index(len as u64, s, p) as i64;
        for (j, cj) in f.coeffs.iter().enumerate() {
            tail = tail.min(cj.valuation().saturating_add(top - idx[j]));
        }
    }
    Ok(AmiceFunction {
        params,
        s,
        coeffs,
        certified_tail: tail.min(ctx.n() as i64),
        padded: f.padded,
    })
}

/// `μ ↦ (γ·μ)_j = Σ_i m_i A[i][j]` on truncated moment vectors, computed as
/// `Σ_x χ_x e_j(y_x) u_x` with `u = Δ^T D^{-1} m` so the cost stays quadratic.
///
/// Returns the moments together with the certified precision of each.
pub(crate) fn act_left_moments<R: Ring>(
    w: &Weight<R>,
    gamma: &MonoidMatrix,
    s: u32,
    moments: &[R],
) -> Result<Vec<R>> {
    let decay = check_action(w, gamma, s)?;
    let len = moments.len();
    let ctx = w.ctx().clone();
    let p = ctx.p();
    let hi = action_context(&ctx, s, len);
    let whi = w.lift(&hi);
    let params_hi = whi.params().clone();
    let samples = sample_action(&whi, gamma, s, len)?;
    // w_i = m_i / ⌊i/p^s⌋!
    let scaled: Vec<R> = moments
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let fac = factorial(floor_index(i as u64, s, p));
            m.lift(&params_hi)
                .scale(&PadicElement::one(&hi).div_exact_int(&fac))
        })
        .collect();
    let u = transpose_differences(&params_hi, &scaled);
    let params = w.params().clone();
    let wprec = w.c().precision();
    let idx: Vec<i64> = (0..len).map(|j| floor_index(j as u64, s, p) as i64).collect();
    let top = floor_index(len as u64, s, p) as i64;
    // for c = 0 moment j only involves moments i <= j
    let upper = gamma.c.is_zero();
    let mut out = Vec::with_capacity(len);
    for j in 0..len {
        let mut acc = R::zero(&params_hi);
        for x in 0..len {
            acc = acc.add(&samples.chi[x].mul(&u[x]).scale(&samples.basis[x][j]));
        }
        let mut cap = wprec;
        for (i, m) in moments.iter().enumerate() {
            let gain = if decay { (idx[i] - idx[j]).max(0) } else { 0 };
            cap = cap.min(m.precision().saturating_add(gain));
        }
        if decay && !upper {
            // unknown integral moments beyond the truncation
            cap = cap.min(top - idx[j]);
        }
        out.push(acc.reduce(&params).cap_precision(cap));
    }
    Ok(out)
}

/// `u = Δ^T w`: `u_x = Σ_{i>=x} (-1)^{i-x} C(i, x) w_i`.
fn transpose_differences<R: Ring>(params: &R::Params, w: &[R]) -> Vec<R> {
    let n = w.len();
    let ctx = params.context();
    let mut row = vec![BigInt::from(1)];
    let mut u = vec![R::zero(params); n];
    for (i, wi) in w.iter().enumerate() {
        // row holds C(i, x) for x = 0..=i
        for (x, binom) in row.iter().enumerate() {
            let signed = if (i - x) % 2 == 0 { binom.clone() } else { -binom.clone() };
            u[x] = u[x].add(&wi.scale(&PadicElement::from_int(ctx, signed)));
        }
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(BigInt::from(1));
        for x in 1..row.len() {
            next.push(&row[x - 1] + &row[x]);
        }
        next.push(BigInt::from(1));
        row = next;
    }
    u
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::integer_weight;

    fn ctx() -> PadicContext {
        PadicContext::new(3, 8).unwrap()
    }

    fn ints(ctx: &PadicContext, xs: &[i64]) -> Vec<PadicElement> {
        xs.iter().map(|&x| PadicElement::from_int(ctx, x)).collect()
    }

    #[test]
    fn restriction_scale_examples() {
        assert_eq!(restriction_scale(0, 1, 3).unwrap(), BigInt::from(1));
        assert_eq!(restriction_scale(3, 1, 3).unwrap(), BigInt::from(6));
        assert_eq!(restriction_scale(9, 1, 3).unwrap(), factorial(9) / factorial(3));
        for j in 0..60 {
            let v = padic::split_p(&restriction_scale(j, 1, 3).unwrap(), 3).0 as u64;
            assert_eq!(v, restriction_valuation(j, 1, 3));
        }
    }

    #[test]
    fn from_values_examples() {
        let c = ctx();
        let f = amice_from_values(&c, &ints(&c, &[1, 1, 1]), 0, None).unwrap();
        assert_eq!(f.coefficients(), &ints(&c, &[1, 0, 0])[..]);
        // e_j^0 = j! C(x, j), so the zero differences lose v(j!) digits
        let g = amice_from_values(&c, &ints(&c, &[0, 1, 2, 3]), 0, None).unwrap();
        for (j, want) in ints(&c, &[0, 1, 0, 0]).iter().enumerate() {
            assert!(g.coefficients()[j].agreement(want) >= g.coefficients()[j].precision());
        }
        assert_eq!(g.coefficients()[3].precision(), 7);
        // e_3^1 = 1! C(x, 3)
        let vals: Vec<i64> = (0..6).map(|x: i64| x * (x - 1) * (x - 2) / 6).collect();
        let h = amice_from_values(&c, &ints(&c, &vals), 1, None).unwrap();
        assert_eq!(h.coefficients(), &ints(&c, &[0, 0, 0, 1, 0, 0])[..]);
    }

    #[test]
    fn padding_is_flagged() {
        let c = ctx();
        let f = amice_from_values(&c, &ints(&c, &[2, 5]), 0, Some(4)).unwrap();
        assert!(f.is_padded());
        assert_eq!(f.len(), 4);
    }

    #[test]
    fn translation_example() {
        let c = ctx();
        let w = integer_weight(2, &c);
        let f = AmiceFunction::from_coefficients(&c, 0, ints(&c, &[0, 1, 0, 0]));
        let g = act_right(&f, &w, &MonoidMatrix::new(1, 1, 0, 1).unwrap()).unwrap();
        assert_eq!(g.coefficients(), &ints(&c, &[1, 1, 0, 0])[..]);
    }

    #[test]
    fn identity_acts_trivially() {
        let c = ctx();
        let w = integer_weight(5, &c);
        let f = AmiceFunction::from_coefficients(&c, 1, ints(&c, &[3, 1, 4, 1, 5, 9]));
        let g = act_right(&f, &w, &MonoidMatrix::identity()).unwrap();
        assert_eq!(g.coefficients(), f.coefficients());
    }

    #[test]
    fn left_moments_match_matrix() {
        let c = ctx();
        let w = integer_weight(4, &c);
        let gamma = MonoidMatrix::new(2, 1, 3, 1).unwrap();
        let m = ints(&c, &[1, 2, 0, 5, 7, 1]);
        let a = action_matrix(&w, &gamma, 1, 6).unwrap();
        let fast = act_left_moments(&w, &gamma, 1, &m).unwrap();
        for j in 0..6 {
            let mut acc = PadicElement::zero(&c);
            for i in 0..6 {
                acc = &acc + &(&m[i] * &a[i][j]);
            }
            assert!(fast[j].agreement(&acc) >= fast[j].precision(), "j = {j}");
        }
    }

    #[test]
    fn rejects_bad_radius() {
        let c = ctx();
        let w = integer_weight(4, &c);
        let f = AmiceFunction::basis(&c, 0, 1, 4);
        assert!(act_right(&f, &w, &MonoidMatrix::new(1, 0, 3, 1).unwrap()).is_err());
        assert!(act_right(&f, &w, &MonoidMatrix::new(1, 0, 1, 1).unwrap()).is_err());
    }

    #[test]
    fn action_matrix_decay_bound() {
        let c = PadicContext::new(3, 10).unwrap();
        let weights = [
            integer_weight(5, &c),
            crate::weights::Weight::new(PadicElement::from_int(&c, 13), 1, crate::weights::WeightKind::Small).unwrap(),
        ];
        let gammas = [
            MonoidMatrix::new(2, 1, 3, 1).unwrap(),
            MonoidMatrix::new(3, 5, 6, 7).unwrap(),
            MonoidMatrix::new(1, 0, 9, 2).unwrap(),
        ];
        for w in &weights {
            for g in &gammas {
                let a = action_matrix(w, g, 1, 18).unwrap();
                for i in 0..18u64 {
                    for j in 0..18u64 {
                        let bound = (floor_index(i, 1, 3) as i64 - floor_index(j, 1, 3) as i64).max(0);
                        let e = &a[i as usize][j as usize];
                        assert!(e.valuation() >= bound.min(e.precision()), "A[{i}][{j}] = {e} for {g}");
                    }
                }
            }
        }
    }
}
