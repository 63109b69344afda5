//! Precision-tracked p-adic scalars.
//!
//! Elements are stored as `p^val * unit + O(p^prec)` with `unit` reduced
//! modulo `p^(prec - val)`. Absolute precision never exceeds the working
//! precision `N` of the context. Addition keeps the smaller precision and
//! multiplication propagates precision through valuations, so nothing ever
//! claims more digits than its inputs justify.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// The prime `p` and the absolute working precision `N`.
#[derive(Clone)]
pub struct PadicContext {
    p: u32,
    n: u32,
    powers: Arc<Vec<BigInt>>,
}

impl PartialEq for PadicContext {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.n == other.n
    }
}

impl Eq for PadicContext {}

impl fmt::Debug for PadicContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PadicContext(p={}, N={})", self.p, self.n)
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl PadicContext {
    pub fn new(p: u32, n: u32) -> Result<Self> {
        if p == 2 || !is_prime(p) {
            return Err(Error::InvalidContext(format!("p = {p} must be an odd prime")));
        }
        if n == 0 {
            return Err(Error::InvalidContext("precision N must be at least 1".into()));
        }
        let bp = BigInt::from(p);
        let cap = 4 * n as usize + 16;
        let mut powers = Vec::with_capacity(cap + 1);
        let mut acc = BigInt::one();
        for _ in 0..=cap {
            powers.push(acc.clone());
            acc *= &bp;
        }
        Ok(PadicContext {
            p,
            n,
            powers: Arc::new(powers),
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn prime(&self) -> BigInt {
        BigInt::from(self.p)
    }

    /// `p^k` as an integer.
    pub fn pow(&self, k: u32) -> BigInt {
        match self.powers.get(k as usize) {
            Some(v) => v.clone(),
            None => num_traits::pow(BigInt::from(self.p), k as usize),
        }
    }

    /// The same prime at a different working precision.
    pub fn with_precision(&self, n: u32) -> Self {
        if n == self.n {
            return self.clone();
        }
        PadicContext::new(self.p, n.max(1)).expect("prime already validated")
    }
}

/// Exponent of `p` dividing a nonzero integer, together with the cofactor.
pub fn split_p(x: &BigInt, p: u32) -> (u32, BigInt) {
    debug_assert!(!x.is_zero());
    let bp = BigInt::from(p);
    let mut v = 0u32;
    let mut m = x.clone();
    loop {
        let (q, r) = m.div_rem(&bp);
        if !r.is_zero() {
            break;
        }
        m = q;
        v += 1;
    }
    (v, m)
}

pub fn vp_u64(mut n: u64, p: u32) -> u32 {
    assert!(n != 0, "valuation of zero");
    let mut v = 0;
    while n % p as u64 == 0 {
        n /= p as u64;
        v += 1;
    }
    v
}

/// Legendre's formula for `v_p(n!)`.
pub fn valp_factorial(n: u64, p: u32) -> u64 {
    let mut v = 0;
    let mut q = n;
    while q > 0 {
        q /= p as u64;
        v += q;
    }
    v
}

/// `v_p(floor(j / p^s)!)`.
pub fn valp_factorial_floor(j: u64, s: u32, ctx: &PadicContext) -> u64 {
    let ps = (ctx.p as u64).saturating_pow(s);
    valp_factorial(j / ps, ctx.p)
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    if m.is_one() {
        return BigInt::zero();
    }
    let e = a.mod_floor(m).extended_gcd(m);
    debug_assert!(e.gcd.is_one(), "not invertible");
    e.x.mod_floor(m)
}

/// A p-adic number known to a finite absolute precision.
#[derive(Clone)]
pub struct PadicElement {
    ctx: PadicContext,
    unit: BigInt,
    val: i64,
    prec: i64,
}

impl fmt::Debug for PadicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl PartialEq for PadicElement {
    /// Representation equality: same digits at the same precision.
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx
            && self.unit == other.unit
            && self.val == other.val
            && self.prec == other.prec
    }
}

impl Eq for PadicElement {}

impl PadicElement {
    /// The element `raw * p^shift + O(p^prec)` (precision capped at `N`).
    pub fn from_scaled(ctx: &PadicContext, raw: BigInt, shift: i64, prec: i64) -> Self {
        let prec = prec.min(ctx.n as i64);
        if raw.is_zero() {
            return Self::zero_with_precision(ctx, prec);
        }
        let (v, cof) = split_p(&raw, ctx.p);
        let val = shift + v as i64;
        if val >= prec {
            return Self::zero_with_precision(ctx, prec);
        }
        let modulus = ctx.pow((prec - val) as u32);
        PadicElement {
            ctx: ctx.clone(),
            unit: cof.mod_floor(&modulus),
            val,
            prec,
        }
    }

    pub fn zero(ctx: &PadicContext) -> Self {
        Self::zero_with_precision(ctx, ctx.n as i64)
    }

    pub fn zero_with_precision(ctx: &PadicContext, prec: i64) -> Self {
        let prec = prec.min(ctx.n as i64);
        PadicElement {
            ctx: ctx.clone(),
            unit: BigInt::zero(),
            val: prec,
            prec,
        }
    }

    pub fn one(ctx: &PadicContext) -> Self {
        Self::from_int(ctx, 1)
    }

    pub fn from_int(ctx: &PadicContext, x: impl Into<BigInt>) -> Self {
        Self::from_scaled(ctx, x.into(), 0, ctx.n as i64)
    }

    /// `num / den` for integers with `den != 0`.
    pub fn from_rational(ctx: &PadicContext, num: &BigInt, den: &BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::from_int(ctx, num.clone()).div_exact_int(den))
    }

    pub fn context(&self) -> &PadicContext {
        &self.ctx
    }

    /// Valuation; for an element that is zero at its precision this is the precision.
    pub fn valuation(&self) -> i64 {
        self.val
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn relative_precision(&self) -> i64 {
        self.prec - self.val
    }

    pub fn unit(&self) -> &BigInt {
        &self.unit
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        !self.is_zero() && self.val == 0
    }

    pub fn is_integral(&self) -> bool {
        self.val >= 0
    }

    /// Representative in `[0, p^prec)` for integral elements.
    pub fn to_bigint(&self) -> Option<BigInt> {
        if self.val < 0 {
            return None;
        }
        if self.is_zero() {
            return Some(BigInt::zero());
        }
        Some(&self.unit * self.ctx.pow(self.val as u32))
    }

    /// Lowers the absolute precision.
    pub fn with_precision(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        Self::from_scaled(&self.ctx, self.unit.clone(), self.val, prec)
    }

    /// Reinterprets the stored digits as exact and moves to a higher-precision context.
    pub fn lift(&self, hi: &PadicContext) -> Self {
        assert_eq!(hi.p, self.ctx.p);
        Self::from_scaled(hi, self.unit.clone(), self.val, hi.n as i64)
    }

    /// Moves to another working precision, never claiming more digits than known.
    pub fn reduce(&self, ctx: &PadicContext) -> Self {
        assert_eq!(ctx.p, self.ctx.p);
        Self::from_scaled(ctx, self.unit.clone(), self.val, self.prec)
    }

    /// Valuation of the difference (equality modulo `p^result`).
    pub fn agreement(&self, other: &Self) -> i64 {
        (self - other).valuation()
    }

    /// Multiplies by an exact integer.
    pub fn mul_exact_int(&self, m: &BigInt) -> Self {
        if m.is_zero() {
            return Self::zero(&self.ctx);
        }
        let (v, cof) = split_p(m, self.ctx.p);
        if self.is_zero() {
            return Self::zero_with_precision(&self.ctx, self.prec + v as i64);
        }
        Self::from_scaled(
            &self.ctx,
            &self.unit * cof,
            self.val + v as i64,
            self.prec + v as i64,
        )
    }

    /// Divides by an exact nonzero integer.
    pub fn div_exact_int(&self, m: &BigInt) -> Self {
        assert!(!m.is_zero(), "division by zero");
        let (v, cof) = split_p(m, self.ctx.p);
        let v = v as i64;
        if self.is_zero() {
            return Self::zero_with_precision(&self.ctx, self.prec - v);
        }
        let rel = self.prec - self.val;
        let modulus = self.ctx.pow(rel as u32);
        let inv = mod_inverse(&cof, &modulus);
        Self::from_scaled(&self.ctx, &self.unit * inv, self.val - v, self.prec - v)
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let val = self.val - other.val;
        if self.is_zero() {
            return Ok(Self::zero_with_precision(&self.ctx, self.prec - other.val));
        }
        let rel = (self.prec - self.val).min(other.prec - other.val);
        let modulus = self.ctx.pow(rel as u32);
        let inv = mod_inverse(&other.unit, &modulus);
        Ok(Self::from_scaled(&self.ctx, &self.unit * inv, val, val + rel))
    }

    pub fn inverse(&self) -> Result<Self> {
        Self::one(&self.ctx).checked_div(self)
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut result = Self::one(&self.ctx);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Integer power, negative exponents through the inverse.
    pub fn powi(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inverse()?.pow(e.unsigned_abs()))
        }
    }

    /// Parses the canonical form `p^v * m + O(p^n)` or `0 + O(p^n)`.
    pub fn parse(ctx: &PadicContext, s: &str) -> Result<Self> {
        let err = || Error::Parse(format!("malformed p-adic scalar `{s}`"));
        let (head, tail) = s.split_once('+').ok_or_else(err)?;
        let tail = tail.trim();
        let inner = tail
            .strip_prefix("O(")
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(err)?;
        let (pp, prec) = parse_power(inner).ok_or_else(err)?;
        if pp != ctx.p {
            return Err(Error::Mismatch(format!("scalar uses p = {pp}, context has p = {}", ctx.p)));
        }
        if prec > ctx.n as i64 {
            return Err(Error::Parse(format!(
                "precision {prec} exceeds working precision {}",
                ctx.n
            )));
        }
        let head = head.trim();
        let parsed = if head == "0" {
            Self::zero_with_precision(ctx, prec)
        } else {
            let (pw, m) = head.split_once('*').ok_or_else(err)?;
            let (pp2, v) = parse_power(pw.trim()).ok_or_else(err)?;
            if pp2 != ctx.p {
                return Err(err());
            }
            let m = BigInt::from_str(m.trim()).map_err(|_| err())?;
            Self::from_scaled(ctx, m, v, prec)
        };
        if parsed.to_string() != s.trim() {
            return Err(Error::Parse(format!(
                "`{s}` is not in canonical form (expected `{parsed}`)"
            )));
        }
        Ok(parsed)
    }
}

fn parse_power(s: &str) -> Option<(u32, i64)> {
    let (b, e) = s.split_once('^')?;
    Some((b.trim().parse().ok()?, e.trim().parse().ok()?))
}

impl fmt::Display for PadicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.ctx.p;
        if self.is_zero() {
            write!(f, "0 + O({}^{})", p, self.prec)
        } else {
            write!(f, "{}^{} * {} + O({}^{})", p, self.val, self.unit, p, self.prec)
        }
    }
}

impl<'a> Add<&'a PadicElement> for &'a PadicElement {
    type Output = PadicElement;
    fn add(self, rhs: &'a PadicElement) -> PadicElement {
        debug_assert_eq!(self.ctx, rhs.ctx);
        let prec = self.prec.min(rhs.prec);
        let vmin = self.val.min(rhs.val).min(prec);
        let mut raw = BigInt::zero();
        if !self.is_zero() && self.val < prec {
            raw += &self.unit * self.ctx.pow((self.val - vmin) as u32);
        }
        if !rhs.is_zero() && rhs.val < prec {
            raw += &rhs.unit * self.ctx.pow((rhs.val - vmin) as u32);
        }
        PadicElement::from_scaled(&self.ctx, raw, vmin, prec)
    }
}

impl<'a> Sub<&'a PadicElement> for &'a PadicElement {
    type Output = PadicElement;
    fn sub(self, rhs: &'a PadicElement) -> PadicElement {
        self + &(-rhs)
    }
}

impl<'a> Neg for &'a PadicElement {
    type Output = PadicElement;
    fn neg(self) -> PadicElement {
        if self.is_zero() {
            return self.clone();
        }
        PadicElement::from_scaled(&self.ctx, -&self.unit, self.val, self.prec)
    }
}

impl<'a> Mul<&'a PadicElement> for &'a PadicElement {
    type Output = PadicElement;
    fn mul(self, rhs: &'a PadicElement) -> PadicElement {
        debug_assert_eq!(self.ctx, rhs.ctx);
        let prec = (self.val + rhs.prec).min(rhs.val + self.prec);
        if self.is_zero() || rhs.is_zero() {
            return PadicElement::zero_with_precision(&self.ctx, prec);
        }
        PadicElement::from_scaled(&self.ctx, &self.unit * &rhs.unit, self.val + rhs.val, prec)
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<PadicElement> for PadicElement {
            type Output = PadicElement;
            fn $m(self, rhs: PadicElement) -> PadicElement { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a PadicElement> for PadicElement {
            type Output = PadicElement;
            fn $m(self, rhs: &'a PadicElement) -> PadicElement { (&self).$m(rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for PadicElement {
    type Output = PadicElement;
    fn neg(self) -> PadicElement {
        -&self
    }
}

/// The Teichmüller representative: the `(p-1)`-th root of unity congruent to `b` mod `p`.
pub fn teichmuller(b: &PadicElement) -> Result<PadicElement> {
    if !b.is_unit() {
        return Err(Error::NotUnit(b.to_string()));
    }
    let ctx = b.context();
    let modulus = ctx.pow(ctx.n);
    let pb = ctx.prime();
    let mut x = b.unit().mod_floor(&ctx.prime());
    for _ in 1..ctx.n {
        x = x.modpow(&pb, &modulus);
    }
    Ok(PadicElement::from_int(ctx, x))
}

/// `log(x)` for `x ≡ 1 mod p`, by the Mercator series.
///
/// The series runs in a guarded context so the divisions by `m` cost nothing
/// at the working precision; since `|log x - log y| = |x - y|` the output
/// precision is `min(N, prec(x))`.
pub fn log_one_unit(x: &PadicElement) -> Result<PadicElement> {
    let ctx = x.context().clone();
    let u = x - &PadicElement::one(&ctx);
    if u.valuation() < 1 {
        return Err(Error::Precondition(format!(
            "log series needs x ≡ 1 mod p, got {x}"
        )));
    }
    if u.is_zero() {
        return Ok(PadicElement::zero_with_precision(&ctx, u.precision()));
    }
    let hi = ctx.with_precision(ctx.n + log_guard(&ctx));
    let sum = log_series(&x.lift(&hi));
    Ok(sum.reduce(&ctx).with_precision(x.precision()))
}

fn log_guard(ctx: &PadicContext) -> u32 {
    3 + floor_log(4 * ctx.n as u64 + 64, ctx.p)
}

/// Series evaluation at the working precision of `x`, for exact `x ≡ 1 mod p`.
fn log_series(x: &PadicElement) -> PadicElement {
    let ctx = x.context().clone();
    let u = x - &PadicElement::one(&ctx);
    let vu = u.valuation();
    let target = ctx.n as i64;
    let mut sum = PadicElement::zero(&ctx);
    let mut power = u.clone();
    let mut m: u64 = 1;
    loop {
        // every term from m on has valuation >= m*vu - floor(log_p m)
        let bound = m as i64 * vu - floor_log(m, ctx.p) as i64;
        if bound >= target {
            break;
        }
        let term = power.div_exact_int(&BigInt::from(m));
        sum = if m % 2 == 1 { &sum + &term } else { &sum - &term };
        power = &power * &u;
        m += 1;
    }
    sum
}

fn floor_log(m: u64, p: u32) -> u32 {
    let mut k = 0;
    let mut q = m;
    while q >= p as u64 {
        q /= p as u64;
        k += 1;
    }
    k
}

/// `log(1+p)`, the normalising constant of `eta`.
pub fn log_one_plus_p(ctx: &PadicContext) -> PadicElement {
    log_one_unit(&PadicElement::from_int(ctx, ctx.p + 1)).expect("1+p is a principal unit")
}

/// `eta(b) = log(b) / log(1+p)` for `b ≡ 1 mod p`.
///
/// `eta` expands distances by `p`, so the result is known to `prec(b) - 1`.
pub fn eta(b: &PadicElement) -> Result<PadicElement> {
    let ctx = b.context().clone();
    if (b - &PadicElement::one(&ctx)).valuation() < 1 {
        return Err(Error::Precondition(format!(
            "eta needs b ≡ 1 mod p, got {b}"
        )));
    }
    let hi = ctx.with_precision(ctx.n + log_guard(&ctx) + 1);
    let num = log_series(&b.lift(&hi));
    let den = log_series(&PadicElement::from_int(&hi, ctx.p + 1));
    let q = num.checked_div(&den)?;
    Ok(q.reduce(&ctx).with_precision(b.precision() - 1))
}

/// The decomposition `b = ω(b) <b>`.
pub fn unit_decomposition(b: &PadicElement) -> Result<(PadicElement, PadicElement)> {
    let w = teichmuller(b)?;
    let principal = b.checked_div(&w)?;
    Ok((w, principal))
}

/// `binomial(x, j)` for an integral p-adic `x`.
///
/// Precision follows the Lipschitz bound `|C(x,j) - C(y,j)| <= |x-y| / |j!|`.
pub fn binomial(x: &PadicElement, j: u64) -> Result<PadicElement> {
    let ctx = x.context();
    let rep = x
        .to_bigint()
        .ok_or_else(|| Error::NonIntegral(x.to_string()))?;
    let mut num = BigInt::one();
    for i in 0..j {
        num *= &rep - BigInt::from(i);
    }
    let value = num / factorial(j);
    let loss = valp_factorial(j, ctx.p) as i64;
    Ok(PadicElement::from_scaled(ctx, value, 0, x.precision() - loss))
}

/// `binomial(x, j)` for `j = 0..=jmax`, sharing the falling-factorial product.
pub fn binomials(x: &PadicElement, jmax: u64) -> Result<Vec<PadicElement>> {
    let ctx = x.context();
    let rep = x
        .to_bigint()
        .ok_or_else(|| Error::NonIntegral(x.to_string()))?;
    let mut out = Vec::with_capacity(jmax as usize + 1);
    let mut num = BigInt::one();
    let mut fact = BigInt::one();
    for j in 0..=jmax {
        if j > 0 {
            num *= &rep - BigInt::from(j - 1);
            fact *= BigInt::from(j);
        }
        let loss = valp_factorial(j, ctx.p) as i64;
        out.push(PadicElement::from_scaled(ctx, &num / &fact, 0, x.precision() - loss));
    }
    Ok(out)
}

/// `binomial(num/den, j)` for `j = 0..=jmax`, exact to the working precision.
/// `den` must be prime to `p`.
pub fn binomials_of_rational(
    ctx: &PadicContext,
    num: &BigInt,
    den: &BigInt,
    jmax: u64,
) -> Result<Vec<PadicElement>> {
    let pb = ctx.prime();
    if den.is_zero() || den.mod_floor(&pb).is_zero() {
        return Err(Error::NotUnit(format!("denominator {den}")));
    }
    let n = ctx.n;
    let modulus = ctx.pow(n);
    let den_inv = mod_inverse(den, &modulus);
    let mut out = Vec::with_capacity(jmax as usize + 1);
    out.push(PadicElement::one(ctx));
    // running product of (num - i*den) and of i, each as (p-exponent, unit mod p^n)
    let mut top_v: i64 = 0;
    let mut top_u = BigInt::one();
    let mut bot_v: i64 = 0;
    let mut bot_u = BigInt::one();
    let mut den_pow_inv = BigInt::one();
    let mut vanished = false;
    for j in 1..=jmax {
        let factor = num - den * BigInt::from(j - 1);
        if factor.is_zero() {
            vanished = true;
        }
        if vanished {
            out.push(PadicElement::zero(ctx));
            continue;
        }
        let (fv, fu) = split_p(&factor, ctx.p);
        top_v += fv as i64;
        top_u = (top_u * fu).mod_floor(&modulus);
        let (iv, iu) = split_p(&BigInt::from(j), ctx.p);
        bot_v += iv as i64;
        bot_u = (bot_u * iu).mod_floor(&modulus);
        den_pow_inv = (den_pow_inv * &den_inv).mod_floor(&modulus);
        let raw = &top_u * mod_inverse(&bot_u, &modulus) % &modulus * &den_pow_inv;
        out.push(PadicElement::from_scaled(ctx, raw, top_v - bot_v, n as i64));
    }
    Ok(out)
}

/// `e_j^s(x) = floor(j/p^s)! * binomial(x, j)` for an integral p-adic `x`.
pub fn amice_basis_value(x: &PadicElement, j: u64, s: u32) -> Result<PadicElement> {
    let ctx = x.context();
    let ps = (ctx.p as u64).saturating_pow(s);
    Ok(binomial(x, j)?.mul_exact_int(&factorial(j / ps)))
}
