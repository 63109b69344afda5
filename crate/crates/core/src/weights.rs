//! Weights: characters of `Z_p^×` encoded by a tame index and the value at `1+p`.

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::iwasawa::IwasawaElement;
use crate::padic::{self, valp_factorial, PadicContext, PadicElement};
use crate::ring::{Ring, RingParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightKind {
    Small,
    Affinoid,
}

impl WeightKind {
    pub fn name(self) -> &'static str {
        match self {
            WeightKind::Small => "small",
            WeightKind::Affinoid => "affinoid",
        }
    }
}

/// `χ(z) = ω(z)^t · c^{η(<z>)}` with `c = χ(1+p)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Weight<R: Ring> {
    c: R,
    t: u32,
    kind: WeightKind,
}

impl<R: Ring> Weight<R> {
    pub fn new(c: R, t: i64, kind: WeightKind) -> Result<Self> {
        let p = c.ctx().p();
        if kind == WeightKind::Affinoid && !R::SCALAR {
            return Err(Error::InvalidWeight(
                "affinoid weights are only supported over Q_p".into(),
            ));
        }
        let one = R::one(c.params());
        let delta = c.sub(&one);
        if delta.valuation() < 1 {
            return Err(Error::InvalidWeight(format!(
                "c - 1 must lie in pR, but has valuation {}",
                delta.valuation()
            )));
        }
        Ok(Weight {
            c,
            t: t.rem_euclid(p as i64 - 1) as u32,
            kind,
        })
    }

    pub fn c(&self) -> &R {
        &self.c
    }

    pub fn tame_index(&self) -> u32 {
        self.t
    }

    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    pub fn params(&self) -> &R::Params {
        self.c.params()
    }

    pub fn ctx(&self) -> &PadicContext {
        self.c.ctx()
    }

    /// `v(c - 1)`; equals the precision of `c` when `c - 1` vanishes there.
    pub fn nilpotence_valuation(&self) -> i64 {
        self.c.sub(&R::one(self.c.params())).valuation()
    }

    /// The least `s >= 0` with `v(c-1) > 1 / (p^s (p-1))`.
    pub fn s_min(&self) -> u32 {
        let v = self.nilpotence_valuation() as u128;
        let p = self.ctx().p() as u128;
        let mut s = 0u32;
        let mut ps = 1u128;
        while v * ps * (p - 1) <= 1 {
            s += 1;
            ps *= p;
        }
        s
    }

    /// Number of series terms needed at working precision `n`: the least `j`
    /// with `j·v(c-1) - j/(p^s(p-1)) > n`.
    pub fn series_length(&self, s: u32, n: u32) -> u64 {
        let v = self.nilpotence_valuation().max(1) as u128;
        let q = (self.ctx().p() as u128).pow(s) * (self.ctx().p() as u128 - 1);
        // j (v q - 1) > n q
        let slope = v * q - 1;
        let j = (n as u128 * q) / slope + 1;
        j as u64
    }

    /// The same weight at another working precision, digits treated as exact.
    pub fn lift(&self, hi: &PadicContext) -> Self {
        let params = self.params().with_context(hi);
        Weight {
            c: self.c.lift(&params),
            t: self.t,
            kind: self.kind,
        }
    }

    pub fn reduce(&self, lo: &PadicContext) -> Self {
        let params = self.params().with_context(lo);
        Weight {
            c: self.c.reduce(&params),
            t: self.t,
            kind: self.kind,
        }
    }

    /// `χ(b)` for a p-adic unit `b`, via the canonical extension series.
    pub fn char_extend(&self, b: &PadicElement, s: u32) -> Result<R> {
        if s < self.s_min() {
            return Err(Error::Precondition(format!(
                "s = {s} is below s_min = {}",
                self.s_min()
            )));
        }
        if !b.is_unit() {
            return Err(Error::NotUnit(b.to_string()));
        }
        let ctx = self.ctx().clone();
        let jstar = self.series_length(s, ctx.n());
        let guard = valp_factorial(jstar, ctx.p()) as u32 + 2;
        let hi = ctx.with_precision(ctx.n() + guard);
        let whi = self.lift(&hi);
        let value = whi.char_exact(&b.lift(&hi), jstar)?;
        let cap = b.precision().min(self.c.precision());
        Ok(value.reduce(self.params()).cap_precision(cap))
    }

    /// Series evaluation treating `b` and `c` as exact at the current precision.
    fn char_exact(&self, b: &PadicElement, jstar: u64) -> Result<R> {
        let params = self.params();
        let (omega, principal) = padic::unit_decomposition(b)?;
        let eta = padic::eta(&principal)?;
        let delta = self.c.sub(&R::one(params));
        let binoms = padic::binomials(&eta, jstar)?;
        let mut sum = R::zero(params);
        let mut power = R::one(params);
        for bj in binoms.iter() {
            sum = sum.add(&power.scale(bj));
            power = power.mul(&delta);
        }
        Ok(sum.scale(&omega.pow(self.t as u64)))
    }

    pub fn to_json(&self) -> Value {
        let ctx = self.ctx();
        json!({
            "p": ctx.p(),
            "N": ctx.n(),
            "kind": self.kind.name(),
            "t": self.t,
            "c": self.c.to_json(),
        })
    }

    pub fn from_json(params: &R::Params, v: &Value) -> Result<Self> {
        let bad = |w: &str| Error::Parse(format!("weight: {w}"));
        let ctx = params.context();
        let p = v.get("p").and_then(Value::as_u64).ok_or_else(|| bad("missing p"))?;
        let n = v.get("N").and_then(Value::as_u64).ok_or_else(|| bad("missing N"))?;
        if p != ctx.p() as u64 || n != ctx.n() as u64 {
            return Err(Error::Mismatch(format!(
                "weight was serialized with p={p}, N={n}"
            )));
        }
        let kind = match v.get("kind").and_then(Value::as_str) {
            Some("small") => WeightKind::Small,
            Some("affinoid") => WeightKind::Affinoid,
            _ => return Err(bad("kind must be small or affinoid")),
        };
        let t = v.get("t").and_then(Value::as_i64).ok_or_else(|| bad("missing t"))?;
        let c = R::from_json(params, v.get("c").ok_or_else(|| bad("missing c"))?)?;
        Weight::new(c, t, kind)
    }
}

/// The weight `χ_k(z) = z^{k-2}`.
pub fn integer_weight(k: i64, ctx: &PadicContext) -> Weight<PadicElement> {
    let base = PadicElement::from_int(ctx, ctx.p() + 1);
    let c = base.powi(k - 2).expect("1+p is a unit");
    Weight::new(c, k - 2, WeightKind::Small).expect("integer weights are valid")
}

/// The weight `z ↦ ω(z)^t <z>^{κ}` with `κ = log c / log(1+p)`, i.e. an arbitrary
/// Q_p-valued character given by `(t, c)`.
pub fn scalar_weight(c: PadicElement, t: i64, kind: WeightKind) -> Result<Weight<PadicElement>> {
    Weight::new(c, t, kind)
}

impl Weight<IwasawaElement> {
    /// Specializes the coefficient ring at a point with coordinates of positive valuation.
    pub fn specialize(&self, point: &[PadicElement]) -> Result<Weight<PadicElement>> {
        let c = self.c.specialize(point)?;
        Weight::new(c, self.t as i64, WeightKind::Small)
    }
}

/// `(a z + b)` style helper: the unit `x` as a p-adic element, rejecting non-units.
pub fn unit_from_int(ctx: &PadicContext, x: &BigInt) -> Result<PadicElement> {
    if x.is_zero() {
        return Err(Error::NotUnit("0".into()));
    }
    let e = PadicElement::from_int(ctx, x.clone());
    if !e.is_unit() {
        return Err(Error::NotUnit(e.to_string()));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iwasawa::{linear, IwasawaRing};

    #[test]
    fn integer_weight_examples() {
        let ctx = PadicContext::new(3, 5).unwrap();
        let w2 = integer_weight(2, &ctx);
        assert_eq!(w2.tame_index(), 0);
        assert_eq!(w2.c(), &PadicElement::one(&ctx));
        let w4 = integer_weight(4, &ctx);
        assert_eq!(w4.c(), &PadicElement::from_int(&ctx, 16));
        assert_eq!(w4.s_min(), 0);
        assert_eq!(w2.s_min(), 0);
    }

    #[test]
    fn char_extend_matches_powers() {
        let ctx = PadicContext::new(5, 10).unwrap();
        for k in [-3i64, 2, 3, 7] {
            let w = integer_weight(k, &ctx);
            for b in [1i64, 2, 3, 7, 11, 1234] {
                let bb = PadicElement::from_int(&ctx, b);
                let got = w.char_extend(&bb, 0).unwrap();
                let want = bb.powi(k - 2).unwrap();
                assert_eq!(got.precision(), 10);
                assert!(got.agreement(&want) >= 10, "k={k} b={b}");
            }
        }
    }

    #[test]
    fn diamond_character() {
        let ctx = PadicContext::new(3, 10).unwrap();
        let w = Weight::new(PadicElement::from_int(&ctx, 4), 0, WeightKind::Small).unwrap();
        let b = PadicElement::from_int(&ctx, 10);
        assert!(w.char_extend(&b, 0).unwrap().agreement(&b) >= 10);
    }

    #[test]
    fn rejects_invalid_weights() {
        let ctx = PadicContext::new(3, 5).unwrap();
        assert!(Weight::new(PadicElement::from_int(&ctx, 2), 0, WeightKind::Small).is_err());
        let r = IwasawaRing::new(&ctx, 1, 3).unwrap();
        let c = linear(&r, 1, 3, 0);
        assert!(Weight::new(c.clone(), 0, WeightKind::Affinoid).is_err());
        assert!(Weight::new(c, 0, WeightKind::Small).is_ok());
        assert!(Weight::new(linear(&r, 1, 1, 0), 0, WeightKind::Small).is_err());
    }

    #[test]
    fn iwasawa_weight_specializes() {
        let ctx = PadicContext::new(3, 8).unwrap();
        let r = IwasawaRing::new(&ctx, 1, 6).unwrap();
        let w = Weight::new(linear(&r, 1, 3, 0), 1, WeightKind::Small).unwrap();
        let b = PadicElement::from_int(&ctx, 5);
        let family = w.char_extend(&b, 0).unwrap();
        let t = PadicElement::from_int(&ctx, 3);
        let spec = w.specialize(std::slice::from_ref(&t)).unwrap();
        let direct = spec.char_extend(&b, 0).unwrap();
        let via = family.specialize(&[t]).unwrap();
        assert!(via.agreement(&direct) >= via.precision().min(direct.precision()));
    }

    #[test]
    fn json_round_trip() {
        let ctx = PadicContext::new(7, 6).unwrap();
        let w = integer_weight(5, &ctx);
        assert_eq!(Weight::from_json(&ctx, &w.to_json()).unwrap(), w);
    }
}
