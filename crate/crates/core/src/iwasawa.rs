//! Truncated Iwasawa algebras `Z_p[[T_1, ..., T_d]] / (p^N, degree > D)` with `d <= 2`.

use std::fmt;

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::padic::{PadicContext, PadicElement};
use crate::ring::{Residue, Ring, RingParams};

#[derive(Clone, PartialEq)]
pub struct IwasawaRing {
    ctx: PadicContext,
    vars: u32,
    degree: u32,
}

impl fmt::Debug for IwasawaRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "IwasawaRing(p={}, N={}, vars={}, D={})",
            self.ctx.p(),
            self.ctx.n(),
            self.vars,
            self.degree
        )
    }
}

impl IwasawaRing {
    pub fn new(ctx: &PadicContext, vars: u32, degree: u32) -> Result<Self> {
        if !(1..=2).contains(&vars) {
            return Err(Error::InvalidContext(format!(
                "Iwasawa rings support 1 or 2 variables, got {vars}"
            )));
        }
        Ok(IwasawaRing {
            ctx: ctx.clone(),
            vars,
            degree,
        })
    }

    pub fn vars(&self) -> u32 {
        self.vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Monomials of total degree at most `D`, in storage order.
    pub fn monomials(&self) -> Vec<[u32; 2]> {
        let mut out = Vec::new();
        for d in 0..=self.degree {
            if self.vars == 1 {
                out.push([d, 0]);
            } else {
                for b in 0..=d {
                    out.push([d - b, b]);
                }
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        let d = self.degree as usize;
        if self.vars == 1 {
            d + 1
        } else {
            (d + 1) * (d + 2) / 2
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn index(&self, m: [u32; 2]) -> Option<usize> {
        let d = m[0] + m[1];
        if d > self.degree || (self.vars == 1 && m[1] != 0) {
            return None;
        }
        if self.vars == 1 {
            Some(d as usize)
        } else {
            Some((d * (d + 1) / 2 + m[1]) as usize)
        }
    }

    /// The variable `T_i` (0-based).
    pub fn variable(&self, i: u32) -> IwasawaElement {
        assert!(i < self.vars);
        let mut m = [0, 0];
        m[i as usize] = 1;
        IwasawaElement::monomial(self, m, &PadicElement::one(&self.ctx))
    }
}

impl RingParams for IwasawaRing {
    fn context(&self) -> &PadicContext {
        &self.ctx
    }

    fn with_context(&self, ctx: &PadicContext) -> Self {
        IwasawaRing {
            ctx: ctx.clone(),
            vars: self.vars,
            degree: self.degree,
        }
    }

    fn max_residue_level(&self) -> u32 {
        self.ctx.n().min(self.degree + 1)
    }

    fn residue_length(&self, e: u32) -> u64 {
        // sum over monomials m with |m| < e of (e - |m|)
        (0..e)
            .map(|d| {
                let count = if self.vars == 1 { 1 } else { d as u64 + 1 };
                count * (e - d) as u64
            })
            .sum()
    }

    fn residue_monomials(&self, e: u32) -> Vec<[u32; 2]> {
        self.monomials().into_iter().filter(|m| m[0] + m[1] < e).collect()
    }
}

/// A truncated power series with p-adic coefficients.
#[derive(Clone, PartialEq)]
pub struct IwasawaElement {
    ring: IwasawaRing,
    coeffs: Vec<PadicElement>,
}

impl fmt::Debug for IwasawaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (m, c) in self.ring.monomials().iter().zip(&self.coeffs) {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})T^{:?}", m)?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl IwasawaElement {
    pub fn ring(&self) -> &IwasawaRing {
        &self.ring
    }

    pub fn coefficients(&self) -> &[PadicElement] {
        &self.coeffs
    }

    pub fn from_coefficients(ring: &IwasawaRing, coeffs: Vec<PadicElement>) -> Result<Self> {
        if coeffs.len() != ring.len() {
            return Err(Error::Mismatch(format!(
                "expected {} coefficients, got {}",
                ring.len(),
                coeffs.len()
            )));
        }
        Ok(IwasawaElement {
            ring: ring.clone(),
            coeffs,
        })
    }

    pub fn monomial(ring: &IwasawaRing, m: [u32; 2], c: &PadicElement) -> Self {
        let mut out = Self::zero(ring);
        if let Some(i) = ring.index(m) {
            out.coeffs[i] = c.clone();
        }
        out
    }

    pub fn coefficient(&self, m: [u32; 2]) -> Option<&PadicElement> {
        self.ring.index(m).map(|i| &self.coeffs[i])
    }

    pub fn constant_term(&self) -> &PadicElement {
        &self.coeffs[0]
    }

    /// Evaluates at a point with every coordinate of positive valuation.
    ///
    /// Terms beyond the truncation degree are bounded by `(D+1) * min v(t_i)`,
    /// which caps the output precision.
    pub fn specialize(&self, point: &[PadicElement]) -> Result<PadicElement> {
        if point.len() != self.ring.vars as usize {
            return Err(Error::Mismatch(format!(
                "point has {} coordinates, ring has {} variables",
                point.len(),
                self.ring.vars
            )));
        }
        let ctx = &self.ring.ctx;
        let mut vmin = i64::MAX;
        for t in point {
            if t.valuation() < 1 {
                return Err(Error::Precondition(format!(
                    "specialization point {t} must have positive valuation"
                )));
            }
            vmin = vmin.min(t.valuation());
        }
        let mut acc = PadicElement::zero(ctx);
        for (m, c) in self.ring.monomials().iter().zip(&self.coeffs) {
            let mut term = c.clone();
            for (i, t) in point.iter().enumerate() {
                term = &term * &t.pow(m[i] as u64);
            }
            acc = &acc + &term;
        }
        let tail = (self.ring.degree as i64 + 1).saturating_mul(vmin);
        Ok(acc.with_precision(tail))
    }
}

impl Ring for IwasawaElement {
    type Params = IwasawaRing;

    fn params(&self) -> &IwasawaRing {
        &self.ring
    }

    fn zero(params: &IwasawaRing) -> Self {
        IwasawaElement {
            ring: params.clone(),
            coeffs: vec![PadicElement::zero(&params.ctx); params.len()],
        }
    }

    fn one(params: &IwasawaRing) -> Self {
        Self::from_scalar(params, &PadicElement::one(&params.ctx))
    }

    fn from_scalar(params: &IwasawaRing, x: &PadicElement) -> Self {
        let mut out = Self::zero(params);
        out.coeffs[0] = x.clone();
        out
    }

    fn add(&self, other: &Self) -> Self {
        IwasawaElement {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    fn sub(&self, other: &Self) -> Self {
        IwasawaElement {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    fn mul(&self, other: &Self) -> Self {
        let mons = self.ring.monomials();
        let mut out = Self::zero(&self.ring);
        for (i, mi) in mons.iter().enumerate() {
            if self.coeffs[i].is_zero() && self.coeffs[i].precision() >= self.ring.ctx.n() as i64 {
                continue;
            }
            for (j, mj) in mons.iter().enumerate() {
                let m = [mi[0] + mj[0], mi[1] + mj[1]];
                if let Some(k) = self.ring.index(m) {
                    let prod = &self.coeffs[i] * &other.coeffs[j];
                    out.coeffs[k] = &out.coeffs[k] + &prod;
                }
            }
        }
        out
    }

    fn neg(&self) -> Self {
        IwasawaElement {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    fn scale(&self, x: &PadicElement) -> Self {
        IwasawaElement {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|a| a * x).collect(),
        }
    }

    fn precision(&self) -> i64 {
        self.coeffs.iter().map(|c| c.precision()).min().unwrap_or(0)
    }

    fn valuation(&self) -> i64 {
        self.coeffs.iter().map(|c| c.valuation()).min().unwrap_or(0)
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn ideal_valuation(&self) -> i64 {
        let mut best = self.ring.degree as i64 + 1;
        for (m, c) in self.ring.monomials().iter().zip(&self.coeffs) {
            best = best.min(c.valuation() + (m[0] + m[1]) as i64);
        }
        best
    }

    fn residue(&self, e: u32) -> Result<Residue> {
        let p = self.ring.ctx.p();
        if e > self.ring.degree + 1 {
            return Err(Error::exhausted(
                "residue",
                format!("level {e} exceeds truncation degree {}", self.ring.degree),
            ));
        }
        let mut terms = Vec::new();
        for (m, c) in self.ring.monomials().iter().zip(&self.coeffs) {
            let deg = m[0] + m[1];
            if deg >= e {
                continue;
            }
            let need = (e - deg) as i64;
            if c.precision() < need {
                return Err(Error::exhausted(
                    "residue",
                    format!("coefficient of T^{m:?} known to {} digits, need {need}", c.precision()),
                ));
            }
            let x = c.to_bigint().ok_or_else(|| Error::NonIntegral(c.to_string()))?;
            terms.push((*m, x));
        }
        Ok(Residue::from_terms(p, e, terms))
    }

    fn from_residue(params: &IwasawaRing, r: &Residue) -> Self {
        let mut out = Self::zero(params);
        for (m, c) in &r.terms {
            if let Some(i) = params.index(*m) {
                out.coeffs[i] = PadicElement::from_int(&params.ctx, c.clone());
            }
        }
        out
    }

    fn lift(&self, hi: &IwasawaRing) -> Self {
        IwasawaElement {
            ring: hi.clone(),
            coeffs: self.coeffs.iter().map(|c| c.lift(hi.context())).collect(),
        }
    }

    fn reduce(&self, lo: &IwasawaRing) -> Self {
        IwasawaElement {
            ring: lo.clone(),
            coeffs: self.coeffs.iter().map(|c| c.reduce(lo.context())).collect(),
        }
    }

    fn cap_precision(&self, prec: i64) -> Self {
        IwasawaElement {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|c| c.with_precision(prec)).collect(),
        }
    }

    fn to_json(&self) -> Value {
        let full = PadicElement::zero(&self.ring.ctx);
        let terms: Vec<Value> = self
            .ring
            .monomials()
            .iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| **c != full)
            .map(|(m, c)| json!({"m": [m[0], m[1]], "c": c.to_string()}))
            .collect();
        json!({"vars": self.ring.vars, "D": self.ring.degree, "terms": terms})
    }

    fn from_json(params: &IwasawaRing, v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("Iwasawa element: {what}"));
        let vars = v.get("vars").and_then(Value::as_u64).ok_or_else(|| bad("missing vars"))?;
        let deg = v.get("D").and_then(Value::as_u64).ok_or_else(|| bad("missing D"))?;
        if vars != params.vars as u64 || deg != params.degree as u64 {
            return Err(Error::Mismatch("Iwasawa ring shape differs".into()));
        }
        let mut out = Self::zero(params);
        let mut last: Option<usize> = None;
        for t in v.get("terms").and_then(Value::as_array).ok_or_else(|| bad("missing terms"))? {
            let m = t.get("m").and_then(Value::as_array).ok_or_else(|| bad("term without m"))?;
            if m.len() != 2 {
                return Err(bad("monomial must have two exponents"));
            }
            let e0 = m[0].as_u64().ok_or_else(|| bad("exponent"))? as u32;
            let e1 = m[1].as_u64().ok_or_else(|| bad("exponent"))? as u32;
            let idx = params.index([e0, e1]).ok_or_else(|| bad("monomial outside truncation"))?;
            if last.is_some_and(|l| l >= idx) {
                return Err(bad("terms must be listed once in storage order"));
            }
            last = Some(idx);
            let c = t.get("c").and_then(Value::as_str).ok_or_else(|| bad("term without c"))?;
            out.coeffs[idx] = PadicElement::parse(&params.ctx, c)?;
        }
        Ok(out)
    }
}

/// `1 + T` style helper: the element `a + b*T_i`.
pub fn linear(ring: &IwasawaRing, a: i64, b: i64, var: u32) -> IwasawaElement {
    let ctx = ring.context();
    IwasawaElement::from_scalar(ring, &PadicElement::from_int(ctx, a))
        .add(&ring.variable(var).scale(&PadicElement::from_int(ctx, b)))
}

/// The integer representative of a residue coefficient, for callers that need it.
pub fn residue_coefficient(r: &Residue, m: [u32; 2]) -> BigInt {
    r.terms.get(&m).cloned().unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(vars: u32) -> IwasawaRing {
        IwasawaRing::new(&PadicContext::new(3, 8).unwrap(), vars, 4).unwrap()
    }

    #[test]
    fn multiplication_truncates_by_degree() {
        let r = ring(1);
        let t = r.variable(0);
        let t5 = t.pow(5);
        assert!(t5.is_zero());
        let t4 = t.pow(4);
        assert!(!t4.is_zero());
        assert_eq!(t4.ideal_valuation(), 4);
    }

    #[test]
    fn two_variable_product() {
        let r = ring(2);
        let x = linear(&r, 1, 1, 0);
        let y = linear(&r, 1, 1, 1);
        let prod = x.mul(&y);
        let ctx = r.context();
        assert_eq!(prod.coefficient([1, 1]).unwrap(), &PadicElement::one(ctx));
        assert_eq!(prod.coefficient([0, 0]).unwrap(), &PadicElement::one(ctx));
    }

    #[test]
    fn ideal_valuation_counts_p_and_t() {
        let r = ring(1);
        let ctx = r.context();
        let x = r.variable(0).scale(&PadicElement::from_int(ctx, 9));
        assert_eq!(x.ideal_valuation(), 3);
    }

    #[test]
    fn specialization_matches_direct_evaluation() {
        let r = ring(1);
        let ctx = r.context();
        let f = linear(&r, 1, 1, 0).pow(3);
        let t = PadicElement::from_int(ctx, 3);
        let v = f.specialize(&[t]).unwrap();
        assert!(v.agreement(&PadicElement::from_int(ctx, 64)) >= v.precision());
    }

    #[test]
    fn json_round_trip() {
        let r = ring(2);
        let x = linear(&r, 4, -2, 1).pow(2).cap_precision(5);
        let back = IwasawaElement::from_json(&r, &x.to_json()).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn residue_lengths() {
        let r = ring(1);
        assert_eq!(r.residue_length(2), 3);
        let r2 = ring(2);
        assert_eq!(r2.residue_length(2), 2 + 2);
    }
}
