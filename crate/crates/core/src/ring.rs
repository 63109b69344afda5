//! Coefficient rings: `Q_p` itself and truncated Iwasawa algebras.

use std::collections::BTreeMap;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::padic::{PadicContext, PadicElement};

/// Parameters shared by all elements of one coefficient ring.
pub trait RingParams: Clone + Debug + PartialEq {
    fn context(&self) -> &PadicContext;
    /// The same ring at another working precision.
    fn with_context(&self, ctx: &PadicContext) -> Self;
    /// Largest `e` for which residues modulo `a^e` are meaningful.
    fn max_residue_level(&self) -> u32;
    /// `log_p |R / a^e|`.
    fn residue_length(&self, e: u32) -> u64;
    /// Monomials `T^m` with `|m| < e`, each generating a cyclic factor of
    /// order `p^(e - |m|)` in `R / a^e`.
    fn residue_monomials(&self, e: u32) -> Vec<[u32; 2]>;
}

impl RingParams for PadicContext {
    fn context(&self) -> &PadicContext {
        self
    }

    fn with_context(&self, ctx: &PadicContext) -> Self {
        ctx.clone()
    }

    fn max_residue_level(&self) -> u32 {
        self.n()
    }

    fn residue_length(&self, e: u32) -> u64 {
        e as u64
    }

    fn residue_monomials(&self, e: u32) -> Vec<[u32; 2]> {
        if e > 0 {
            vec![[0, 0]]
        } else {
            Vec::new()
        }
    }
}

/// An element of `R / a^e` written canonically: the coefficient of the
/// monomial `T^m` is reduced modulo `p^(e - |m|)`; zero coefficients are omitted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Residue {
    pub level: u32,
    pub terms: BTreeMap<[u32; 2], BigInt>,
}

impl Residue {
    pub fn zero(level: u32) -> Self {
        Residue {
            level,
            terms: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Builds a canonical residue, reducing every coefficient.
    pub fn from_terms(p: u32, level: u32, terms: impl IntoIterator<Item = ([u32; 2], BigInt)>) -> Self {
        let mut out = BTreeMap::new();
        for (m, c) in terms {
            let deg = m[0] + m[1];
            if deg >= level {
                continue;
            }
            let modulus = num_traits::pow(BigInt::from(p), (level - deg) as usize);
            let entry = out.entry(m).or_insert_with(BigInt::zero);
            *entry = (&*entry + c).mod_floor(&modulus);
        }
        out.retain(|_, c| !c.is_zero());
        Residue { level, terms: out }
    }

    /// Multiplies by an integer and reduces.
    pub fn scale_int(&self, p: u32, m: &BigInt) -> Self {
        Residue::from_terms(p, self.level, self.terms.iter().map(|(k, c)| (*k, c * m)))
    }

    pub fn add(&self, p: u32, other: &Residue) -> Self {
        debug_assert_eq!(self.level, other.level);
        let terms = self
            .terms
            .iter()
            .chain(other.terms.iter())
            .map(|(k, c)| (*k, c.clone()));
        Residue::from_terms(p, self.level, terms)
    }

    /// Image in `R / a^e` for `e <= level`.
    pub fn truncate(&self, p: u32, e: u32) -> Self {
        Residue::from_terms(p, e, self.terms.iter().map(|(k, c)| (*k, c.clone())))
    }
}

/// Operations needed by the weight, function and distribution layers.
pub trait Ring: Clone + Debug + PartialEq + Sized {
    type Params: RingParams;

    /// True for `Q_p` itself.
    const SCALAR: bool = false;

    fn params(&self) -> &Self::Params;
    fn zero(params: &Self::Params) -> Self;
    fn one(params: &Self::Params) -> Self;
    fn from_scalar(params: &Self::Params, x: &PadicElement) -> Self;

    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, x: &PadicElement) -> Self;

    /// Minimum absolute precision over all coefficients.
    fn precision(&self) -> i64;
    /// Gauss valuation: minimum p-adic valuation over all coefficients.
    fn valuation(&self) -> i64;
    fn is_zero(&self) -> bool;
    /// Largest `e` with the element in `a^e` (capped by what precision can certify).
    fn ideal_valuation(&self) -> i64;
    fn residue(&self, e: u32) -> Result<Residue>;
    fn from_residue(params: &Self::Params, r: &Residue) -> Self;

    /// Treats stored digits as exact in a higher-precision context.
    fn lift(&self, hi: &Self::Params) -> Self;
    /// Moves to a lower-precision context.
    fn reduce(&self, lo: &Self::Params) -> Self;
    /// Caps the absolute precision of every coefficient.
    fn cap_precision(&self, prec: i64) -> Self;

    /// Valuation of the difference.
    fn agreement(&self, other: &Self) -> i64 {
        self.sub(other).valuation()
    }

    fn to_json(&self) -> Value;
    fn from_json(params: &Self::Params, v: &Value) -> Result<Self>;

    fn ctx(&self) -> &PadicContext {
        self.params().context()
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(self.params());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

impl Ring for PadicElement {
    type Params = PadicContext;

    const SCALAR: bool = true;

    fn params(&self) -> &PadicContext {
        self.context()
    }

    fn zero(params: &PadicContext) -> Self {
        PadicElement::zero(params)
    }

    fn one(params: &PadicContext) -> Self {
        PadicElement::one(params)
    }

    fn from_scalar(_params: &PadicContext, x: &PadicElement) -> Self {
        x.clone()
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn sub(&self, other: &Self) -> Self {
        self - other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn neg(&self) -> Self {
        -self
    }

    fn scale(&self, x: &PadicElement) -> Self {
        self * x
    }

    fn precision(&self) -> i64 {
        PadicElement::precision(self)
    }

    fn valuation(&self) -> i64 {
        PadicElement::valuation(self)
    }

    fn is_zero(&self) -> bool {
        PadicElement::is_zero(self)
    }

    fn ideal_valuation(&self) -> i64 {
        self.valuation()
    }

    fn residue(&self, e: u32) -> Result<Residue> {
        let p = self.context().p();
        if e == 0 {
            return Ok(Residue::zero(0));
        }
        if self.precision() < e as i64 {
            return Err(Error::exhausted(
                "residue",
                format!("need precision {e}, have {}", self.precision()),
            ));
        }
        let x = self
            .to_bigint()
            .ok_or_else(|| Error::NonIntegral(self.to_string()))?;
        Ok(Residue::from_terms(p, e, [([0, 0], x)]))
    }

    fn from_residue(params: &PadicContext, r: &Residue) -> Self {
        let x = r.terms.get(&[0, 0]).cloned().unwrap_or_default();
        PadicElement::from_int(params, x)
    }

    fn lift(&self, hi: &PadicContext) -> Self {
        PadicElement::lift(self, hi)
    }

    fn reduce(&self, lo: &PadicContext) -> Self {
        PadicElement::reduce(self, lo)
    }

    fn cap_precision(&self, prec: i64) -> Self {
        self.with_precision(prec)
    }

    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }

    /// Canonical strings, or integers (JSON numbers or decimal strings) at full precision.
    fn from_json(params: &PadicContext, v: &Value) -> Result<Self> {
        let int = |t: &str| {
            t.trim()
                .parse::<num_bigint::BigInt>()
                .map(|n| PadicElement::from_int(params, n))
                .map_err(|_| Error::Parse(format!("expected a p-adic scalar or an integer, got {v}")))
        };
        match v {
            Value::String(s) if s.contains("O(") => PadicElement::parse(params, s),
            Value::String(s) => int(s),
            Value::Number(n) if n.is_i64() || n.is_u64() => int(&n.to_string()),
            _ => Err(Error::Parse(format!("expected a p-adic scalar or an integer, got {v}"))),
        }
    }
}

/// Dot product `sum a_i * b_i`.
pub fn dot<R: Ring>(params: &R::Params, a: &[R], b: &[R]) -> R {
    a.iter()
        .zip(b)
        .fold(R::zero(params), |acc, (x, y)| acc.add(&x.mul(y)))
}
