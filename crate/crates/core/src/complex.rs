//! Finite cochain complexes `C^i = (D/Fil^k)^{r(i)}` with differentials given by
//! integer combinations of monoid elements, their cohomology, and the Fredholm
//! series of a lifted Hecke operator on cohomology.
//!
//! Convention: `d^i : C^i → C^{i+1}`, and a template's differential `i` is an
//! `r(i+1) × r(i)` matrix whose entry `(a, b)` maps component `b` to component `a`.
//!
//! Template grammar (JSON):
//!
//! ```text
//! template := { "ranks": [r0, r1, ...],
//!               "differentials": [matrix_0, ..., matrix_{n-2}],
//!               "utilde": [matrix_0, ..., matrix_{n-1}] }     ("utilde" optional)
//! matrix   := [[entry, ...], ...]                              (row-major)
//! entry    := [[coeff, [[a, b], [c, d]]], ...]                 ([] is zero)
//! coeff    := integer, as a JSON number or decimal string
//! ```

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Map, Value};

use crate::distributions::{act_on_quotient, FiniteDistribution};
use crate::error::{Error, Result};
use crate::fredholm::{fredholm_det, FredholmSeries, PadicMatrix};
use crate::intlinalg::{kernel_smith, local_smith, mat_mul, mat_vec, pow_p, zeros, FiniteModule, IntMatrix, LocalSmith};
use crate::monoid::MonoidMatrix;
use crate::padic::{PadicContext, PadicElement};
use crate::ring::Ring;
use crate::weights::Weight;

/// A formal integer combination `Σ n_i [γ_i]` in the monoid ring.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FormalEntry(pub Vec<(BigInt, MonoidMatrix)>);

impl FormalEntry {
    pub fn zero() -> Self {
        FormalEntry(Vec::new())
    }

    pub fn scalar(n: i64) -> Self {
        FormalEntry(vec![(BigInt::from(n), MonoidMatrix::identity())])
    }

    pub fn single(n: i64, g: MonoidMatrix) -> Self {
        FormalEntry(vec![(BigInt::from(n), g)])
    }

    fn to_json(&self) -> Value {
        Value::Array(
            self.0
                .iter()
                .map(|(n, g)| json!([n.to_string(), g.to_json()]))
                .collect(),
        )
    }

    fn from_json(v: &Value) -> Result<Self> {
        let bad = |w: &str| Error::Template(format!("entry: {w}"));
        let terms = v.as_array().ok_or_else(|| bad("expected a list of [coeff, matrix] pairs"))?;
        let mut out = Vec::with_capacity(terms.len());
        for t in terms {
            let pair = t.as_array().filter(|a| a.len() == 2).ok_or_else(|| bad("expected [coeff, matrix]"))?;
            let n = match &pair[0] {
                Value::Number(x) => x.as_i64().map(BigInt::from).ok_or_else(|| bad("coefficient must be an integer"))?,
                Value::String(s) => s.parse::<BigInt>().map_err(|_| bad("coefficient must be an integer"))?,
                _ => return Err(bad("coefficient must be an integer")),
            };
            out.push((n, MonoidMatrix::from_json(&pair[1])?));
        }
        Ok(FormalEntry(out))
    }
}

pub type FormalMatrix = Vec<Vec<FormalEntry>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BSComplexTemplate {
    pub ranks: Vec<usize>,
    pub differentials: Vec<FormalMatrix>,
    pub utilde: Option<Vec<FormalMatrix>>,
}

fn check_shape(m: &FormalMatrix, rows: usize, cols: usize, what: &str) -> Result<()> {
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        return Err(Error::Template(format!("{what} must be {rows} x {cols}")));
    }
    Ok(())
}

impl BSComplexTemplate {
    pub fn new(ranks: Vec<usize>, differentials: Vec<FormalMatrix>, utilde: Option<Vec<FormalMatrix>>) -> Result<Self> {
        if ranks.is_empty() {
            return Err(Error::Template("a template needs at least one degree".into()));
        }
        if differentials.len() != ranks.len() - 1 {
            return Err(Error::Template(format!(
                "{} degrees need {} differentials, got {}",
                ranks.len(),
                ranks.len() - 1,
                differentials.len()
            )));
        }
        for (i, d) in differentials.iter().enumerate() {
            check_shape(d, ranks[i + 1], ranks[i], &format!("differential {i}"))?;
        }
        if let Some(u) = &utilde {
            if u.len() != ranks.len() {
                return Err(Error::Template("utilde needs one matrix per degree".into()));
            }
            for (i, m) in u.iter().enumerate() {
                check_shape(m, ranks[i], ranks[i], &format!("utilde {i}"))?;
            }
        }
        Ok(BSComplexTemplate {
            ranks,
            differentials,
            utilde,
        })
    }

    pub fn to_json(&self) -> Value {
        let mat = |m: &FormalMatrix| -> Value {
            Value::Array(m.iter().map(|r| Value::Array(r.iter().map(FormalEntry::to_json).collect())).collect())
        };
        let mut obj = Map::new();
        obj.insert("ranks".into(), json!(self.ranks));
        obj.insert("differentials".into(), Value::Array(self.differentials.iter().map(mat).collect()));
        if let Some(u) = &self.utilde {
            obj.insert("utilde".into(), Value::Array(u.iter().map(mat).collect()));
        }
        Value::Object(obj)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::Template("template must be an object".into()))?;
        for key in obj.keys() {
            if !matches!(key.as_str(), "ranks" | "differentials" | "utilde") {
                return Err(Error::Template(format!("unknown key `{key}`")));
            }
        }
        let ranks = obj
            .get("ranks")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Template("missing ranks".into()))?
            .iter()
            .map(|r| r.as_u64().map(|x| x as usize).ok_or_else(|| Error::Template("ranks must be nonnegative integers".into())))
            .collect::<Result<Vec<_>>>()?;
        let parse_list = |key: &str| -> Result<Option<Vec<FormalMatrix>>> {
            let Some(list) = obj.get(key) else { return Ok(None) };
            let list = list.as_array().ok_or_else(|| Error::Template(format!("{key} must be a list")))?;
            list.iter()
                .map(|m| {
                    m.as_array()
                        .ok_or_else(|| Error::Template(format!("{key}: matrices are lists of rows")))?
                        .iter()
                        .map(|row| {
                            row.as_array()
                                .ok_or_else(|| Error::Template(format!("{key}: rows are lists of entries")))?
                                .iter()
                                .map(FormalEntry::from_json)
                                .collect()
                        })
                        .collect()
                })
                .collect::<Result<Vec<_>>>()
                .map(Some)
        };
        let differentials = parse_list("differentials")?.ok_or_else(|| Error::Template("missing differentials".into()))?;
        let utilde = parse_list("utilde")?;
        Self::new(ranks, differentials, utilde)
    }
}

/// A cochain complex of finite p-groups with integer differentials on coordinates.
#[derive(Clone, Debug)]
pub struct FiniteComplex {
    pub p: u32,
    pub level: u32,
    pub modules: Vec<FiniteModule>,
    pub differentials: Vec<IntMatrix>,
    pub utilde: Option<Vec<IntMatrix>>,
}

impl FiniteComplex {
    pub fn new(p: u32, level: u32, modules: Vec<FiniteModule>, differentials: Vec<IntMatrix>, utilde: Option<Vec<IntMatrix>>) -> Result<Self> {
        let c = FiniteComplex {
            p,
            level,
            modules,
            differentials,
            utilde,
        };
        c.verify()?;
        Ok(c)
    }

    fn verify(&self) -> Result<()> {
        for i in 0..self.differentials.len().saturating_sub(1) {
            let n = self.modules[i].rank();
            let inner = self.modules[i + 1].rank();
            let dd = mat_mul(&self.differentials[i + 1], &self.differentials[i], inner, n);
            if !columns_vanish(&dd, &self.modules[i + 2]) {
                return Err(Error::Template(format!("d^{} d^{i} is not zero on the instantiated module", i + 1)));
            }
        }
        if let Some(u) = &self.utilde {
            for (i, d) in self.differentials.iter().enumerate() {
                let n = self.modules[i].rank();
                let m = self.modules[i + 1].rank();
                let du = mat_mul(d, &u[i], n, n);
                let ud = mat_mul(&u[i + 1], d, m, n);
                let diff: IntMatrix = du.iter().zip(&ud).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect()).collect();
                if !columns_vanish(&diff, &self.modules[i + 1]) {
                    return Err(Error::Template(format!("utilde does not commute with d^{i}")));
                }
            }
        }
        Ok(())
    }

    /// `Σ (-1)^i log_p |C^i|`.
    pub fn euler_characteristic(&self) -> i64 {
        self.modules
            .iter()
            .enumerate()
            .map(|(i, m)| if i % 2 == 0 { m.length() as i64 } else { -(m.length() as i64) })
            .sum()
    }
}

fn columns_vanish(m: &IntMatrix, target: &FiniteModule) -> bool {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).all(|c| {
        let col: Vec<BigInt> = m.iter().map(|r| r[c].clone()).collect();
        target.is_zero_vector(&col)
    })
}

/// Instantiates a template on `D^s/Fil^k` for the weight `w`.
pub fn instantiate<R: Ring>(t: &BSComplexTemplate, w: &Weight<R>, s: u32, k: u32) -> Result<FiniteComplex> {
    let params = w.params().clone();
    let zero = FiniteDistribution::<R>::zero(&params, s, k)?;
    let module = zero.module();
    let g = module.rank();
    let basis = (0..g)
        .map(|i| FiniteDistribution::basis_element(&params, s, k, i))
        .collect::<Result<Vec<_>>>()?;
    let mut cache: HashMap<MonoidMatrix, IntMatrix> = HashMap::new();
    let mut action = |gamma: &MonoidMatrix| -> Result<IntMatrix> {
        if let Some(m) = cache.get(gamma) {
            return Ok(m.clone());
        }
        let mut m = zeros(g, g);
        for (c, b) in basis.iter().enumerate() {
            let img = act_on_quotient(gamma, b, w)?.coordinates();
            for (r, x) in img.into_iter().enumerate() {
                m[r][c] = x;
            }
        }
        cache.insert(gamma.clone(), m.clone());
        Ok(m)
    };
    let mut expand = |fm: &FormalMatrix, rows: usize, cols: usize| -> Result<IntMatrix> {
        let mut out = zeros(rows * g, cols * g);
        for (a, row) in fm.iter().enumerate() {
            for (b, entry) in row.iter().enumerate() {
                for (n, gamma) in &entry.0 {
                    let m = action(gamma)?;
                    for r in 0..g {
                        for c in 0..g {
                            if !m[r][c].is_zero() {
                                out[a * g + r][b * g + c] += n * &m[r][c];
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    };
    let mut differentials = Vec::new();
    for (i, d) in t.differentials.iter().enumerate() {
        differentials.push(expand(d, t.ranks[i + 1], t.ranks[i])?);
    }
    let utilde = match &t.utilde {
        Some(u) => Some(
            u.iter()
                .enumerate()
                .map(|(i, m)| expand(m, t.ranks[i], t.ranks[i]))
                .collect::<Result<Vec<_>>>()?,
        ),
        None => None,
    };
    let modules: Vec<FiniteModule> = t
        .ranks
        .iter()
        .map(|&r| FiniteModule::new(module.p, module.exponents.repeat(r)))
        .collect();
    let differentials = differentials
        .into_iter()
        .enumerate()
        .map(|(i, d)| reduce_matrix(d, &modules[i + 1]))
        .collect();
    let utilde = utilde.map(|u| u.into_iter().enumerate().map(|(i, m)| reduce_matrix(m, &modules[i])).collect());
    FiniteComplex::new(module.p, k, modules, differentials, utilde)
}

fn reduce_matrix(m: IntMatrix, target: &FiniteModule) -> IntMatrix {
    m.into_iter()
        .zip(&target.exponents)
        .map(|(row, &e)| {
            let q = pow_p(target.p, e);
            row.into_iter().map(|x| num_integer::Integer::mod_floor(&x, &q)).collect()
        })
        .collect()
}

/// `H^i = ker d^i / im d^{i-1}` with the data needed to move between cocycles and classes.
struct DegreeCohomology {
    n: usize,
    m: u32,
    kernel: LocalSmith,
    classes: LocalSmith,
}

impl DegreeCohomology {
    fn compute(c: &FiniteComplex, i: usize) -> Result<Self> {
        let here = &c.modules[i];
        let n = here.rank();
        let empty = FiniteModule::new(c.p, Vec::new());
        let next = c.modules.get(i + 1).unwrap_or(&empty);
        let m = here.exponent().max(next.exponent()).max(1);
        let d = if i + 1 < c.modules.len() { c.differentials[i].clone() } else { Vec::new() };
        let kernel = kernel_smith(&d, n, next, m);
        // generators of im d^{i-1} + diag(p^{a_j}), in kernel coordinates
        let mut gens: Vec<Vec<BigInt>> = Vec::new();
        if i > 0 {
            let prev = &c.differentials[i - 1];
            for col in 0..c.modules[i - 1].rank() {
                gens.push(prev.iter().map(|r| r[col].clone()).collect());
            }
        }
        for (j, &a) in here.exponents.iter().enumerate() {
            let mut e = vec![BigInt::zero(); n];
            e[j] = pow_p(c.p, a);
            gens.push(e);
        }
        let mut this = DegreeCohomology {
            n,
            m,
            kernel,
            classes: local_smith(&Vec::new(), 0, 0, c.p, 1),
        };
        let mut cmat = zeros(n, gens.len() + n);
        for (col, g) in gens.iter().enumerate() {
            let y = this.kernel_coordinates(g, c.p)?;
            for r in 0..n {
                cmat[r][col] = y[r].clone();
            }
        }
        for t in 0..n {
            cmat[t][gens.len() + t] = pow_p(c.p, this.kernel.valuation_at(t));
        }
        this.classes = local_smith(&cmat, n, gens.len() + n, c.p, m + 1);
        Ok(this)
    }

    /// Coordinates of a cocycle in the kernel basis `V_t p^{M - d_t}`.
    fn kernel_coordinates(&self, x: &[BigInt], p: u32) -> Result<Vec<BigInt>> {
        let modulus = pow_p(p, self.m);
        let y = mat_vec(&self.kernel.v_inv, x);
        (0..self.n)
            .map(|t| {
                let yt = num_integer::Integer::mod_floor(&y[t], &modulus);
                let q = pow_p(p, self.m - self.kernel.valuation_at(t));
                let (quo, rem) = num_integer::Integer::div_rem(&yt, &q);
                if !rem.is_zero() {
                    return Err(Error::Template("a coboundary is not a cocycle".into()));
                }
                Ok(quo)
            })
            .collect()
    }

    fn exponents(&self) -> Vec<u32> {
        (0..self.n).map(|t| self.classes.valuation_at(t)).collect()
    }

    fn invariant_factors(&self) -> Vec<u32> {
        let mut e: Vec<u32> = self.exponents().into_iter().filter(|&e| e > 0).collect();
        e.sort_unstable();
        e
    }

    /// A cocycle representing class generator `s`.
    fn representative(&self, s: usize, p: u32) -> Vec<BigInt> {
        let col: Vec<BigInt> = (0..self.n)
            .map(|t| &self.classes.u_inv[t][s] * pow_p(p, self.m - self.kernel.valuation_at(t)))
            .collect();
        mat_vec(&self.kernel.v, &col)
    }

    /// Class coordinates of a cocycle.
    fn class_of(&self, x: &[BigInt], p: u32) -> Result<Vec<BigInt>> {
        let y = self.kernel_coordinates(x, p)?;
        let h = mat_vec(&self.classes.u, &y);
        Ok(h.iter()
            .zip(self.exponents())
            .map(|(v, e)| num_integer::Integer::mod_floor(v, &pow_p(p, e)))
            .collect())
    }
}

/// Cohomology of one degree as invariant factors `p^e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyGroup {
    pub degree: usize,
    pub invariant_factors: Vec<u32>,
}

impl CohomologyGroup {
    pub fn length(&self) -> u64 {
        self.invariant_factors.iter().map(|&e| e as u64).sum()
    }
}

pub fn cohomology(c: &FiniteComplex) -> Result<Vec<CohomologyGroup>> {
    (0..c.modules.len())
        .map(|i| {
            Ok(CohomologyGroup {
                degree: i,
                invariant_factors: DegreeCohomology::compute(c, i)?.invariant_factors(),
            })
        })
        .collect()
}

/// `det(1 - Ũ T)` on `H^i`, certified modulo `p^e` with `e` the smallest invariant factor.
#[derive(Clone, Debug)]
pub struct UtildeSeries {
    pub degree: usize,
    pub invariant_factors: Vec<u32>,
    pub series: FredholmSeries<PadicElement>,
    pub precision: u32,
}

pub fn utilde_fredholm(c: &FiniteComplex) -> Result<Vec<UtildeSeries>> {
    let u = c
        .utilde
        .as_ref()
        .ok_or_else(|| Error::Template("the template has no utilde lift".into()))?;
    let mut out = Vec::new();
    for (i, ui) in u.iter().enumerate() {
        let h = DegreeCohomology::compute(c, i)?;
        let exps = h.exponents();
        let live: Vec<usize> = (0..h.n).filter(|&t| exps[t] > 0).collect();
        let precision = live.iter().map(|&t| exps[t]).min().unwrap_or(c.level.max(1));
        let ctx = PadicContext::new(c.p, precision)?;
        let mut rows = vec![vec![PadicElement::zero(&ctx); live.len()]; live.len()];
        for (col, &s) in live.iter().enumerate() {
            let x = h.representative(s, c.p);
            let image = c.modules[i].reduce(&mat_vec(ui, &x));
            let cls = h.class_of(&image, c.p)?;
            for (row, &t) in live.iter().enumerate() {
                rows[row][col] = PadicElement::from_int(&ctx, cls[t].clone());
            }
        }
        let series = fredholm_det(&PadicMatrix::new(&ctx, rows)?)?;
        out.push(UtildeSeries {
            degree: i,
            invariant_factors: h.invariant_factors(),
            series,
            precision,
        });
    }
    Ok(out)
}
