//! Integral 2×2 matrices and the monoids `Δ₀(p) ⊇ K₀(p) ⊇ K(p^n)`.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::padic::{PadicContext, PadicElement};

/// `γ = [[a, b], [c, d]]` with exact integer entries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MonoidMatrix {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl fmt::Debug for MonoidMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Display for MonoidMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

fn divisible(x: &BigInt, m: &BigInt) -> bool {
    x.mod_floor(m).is_zero()
}

impl MonoidMatrix {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>, d: impl Into<BigInt>) -> Result<Self> {
        let m = MonoidMatrix {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        };
        if m.det().is_zero() {
            return Err(Error::NotInMonoid(format!("{m} is singular")));
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        MonoidMatrix {
            a: BigInt::one(),
            b: BigInt::zero(),
            c: BigInt::zero(),
            d: BigInt::one(),
        }
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// `c ≡ 0 mod p`, `d` a unit, nonzero determinant.
    pub fn in_delta0(&self, p: u32) -> bool {
        let pb = BigInt::from(p);
        divisible(&self.c, &pb) && !divisible(&self.d, &pb) && !self.det().is_zero()
    }

    /// `Δ₀(p)` with unit determinant.
    pub fn in_k0(&self, p: u32) -> bool {
        self.in_delta0(p) && !divisible(&self.det(), &BigInt::from(p))
    }

    /// Congruent to the identity modulo `p^n`.
    pub fn in_kpn(&self, p: u32, n: u32) -> bool {
        let q = num_traits::pow(BigInt::from(p), n as usize);
        divisible(&(&self.a - 1), &q)
            && divisible(&self.b, &q)
            && divisible(&self.c, &q)
            && divisible(&(&self.d - 1), &q)
            && self.in_k0(p)
    }

    pub fn require_delta0(&self, p: u32) -> Result<()> {
        if self.in_delta0(p) {
            Ok(())
        } else {
            Err(Error::NotInMonoid(format!("{self} is not in Δ₀({p})")))
        }
    }

    pub fn require_k0(&self, p: u32) -> Result<()> {
        if self.in_k0(p) {
            Ok(())
        } else {
            Err(Error::NotInMonoid(format!("{self} is not in K₀({p})")))
        }
    }

    /// Entries as p-adic elements.
    pub fn entries(&self, ctx: &PadicContext) -> [PadicElement; 4] {
        [
            PadicElement::from_int(ctx, self.a.clone()),
            PadicElement::from_int(ctx, self.b.clone()),
            PadicElement::from_int(ctx, self.c.clone()),
            PadicElement::from_int(ctx, self.d.clone()),
        ]
    }

    pub fn to_json(&self) -> Value {
        json!([[self.a.to_string(), self.b.to_string()], [self.c.to_string(), self.d.to_string()]])
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = || Error::Parse(format!("expected [[a, b], [c, d]] with integer entries, got {v}"));
        let rows = v.as_array().filter(|r| r.len() == 2).ok_or_else(bad)?;
        let mut e = Vec::with_capacity(4);
        for r in rows {
            let r = r.as_array().filter(|r| r.len() == 2).ok_or_else(bad)?;
            for x in r {
                let n = match x {
                    Value::Number(n) => n.to_string().parse::<BigInt>().map_err(|_| bad())?,
                    Value::String(s) => s.trim().parse::<BigInt>().map_err(|_| bad())?,
                    _ => return Err(bad()),
                };
                e.push(n);
            }
        }
        let mut it = e.into_iter();
        let (a, b, c, d) = (it.next().unwrap(), it.next().unwrap(), it.next().unwrap(), it.next().unwrap());
        MonoidMatrix::new(a, b, c, d)
    }
}

impl<'a> Mul<&'a MonoidMatrix> for &'a MonoidMatrix {
    type Output = MonoidMatrix;
    fn mul(self, o: &'a MonoidMatrix) -> MonoidMatrix {
        MonoidMatrix {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }
}

impl Mul for MonoidMatrix {
    type Output = MonoidMatrix;
    fn mul(self, o: MonoidMatrix) -> MonoidMatrix {
        &self * &o
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership() {
        let g = MonoidMatrix::new(1, 0, 3, 1).unwrap();
        assert!(g.in_delta0(3) && g.in_k0(3) && g.in_kpn(3, 1) && !g.in_kpn(3, 2));
        let h = MonoidMatrix::new(3, 0, 0, 1).unwrap();
        assert!(h.in_delta0(3) && !h.in_k0(3));
        let bad = MonoidMatrix::new(1, 0, 1, 1).unwrap();
        assert!(!bad.in_delta0(3));
        assert!(MonoidMatrix::new(1, 2, 2, 4).is_err());
    }

    #[test]
    fn json_round_trip() {
        let g = MonoidMatrix::new(4, -7, 9, 2).unwrap();
        assert_eq!(MonoidMatrix::from_json(&g.to_json()).unwrap(), g);
        let v: Value = serde_json::from_str("[[1, 1], [0, 1]]").unwrap();
        assert_eq!(MonoidMatrix::from_json(&v).unwrap(), MonoidMatrix::new(1, 1, 0, 1).unwrap());
    }
}
