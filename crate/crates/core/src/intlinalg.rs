//! Integer linear algebra localized at `p`: Smith normal form over `Z/p^M`
//! with unimodular transforms, kernels, and presentations of finite p-groups.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
    vec![vec![BigInt::zero(); cols]; rows]
}

pub fn identity(n: usize) -> IntMatrix {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = BigInt::one();
    }
    m
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix, inner: usize, cols: usize) -> IntMatrix {
    let mut out = zeros(a.len(), cols);
    for (i, row) in a.iter().enumerate() {
        for k in 0..inner {
            if row[k].is_zero() {
                continue;
            }
            for j in 0..cols {
                out[i][j] += &row[k] * &b[k][j];
            }
        }
    }
    out
}

pub fn mat_vec(a: &IntMatrix, x: &[BigInt]) -> Vec<BigInt> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(u, v)| u * v).sum())
        .collect()
}

pub fn pow_p(p: u32, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

/// `v_p(x)`, or `cap` when `x ≡ 0 mod p^cap`.
pub fn val_capped(x: &BigInt, p: u32, cap: u32) -> u32 {
    let p = BigInt::from(p);
    let mut x = x.clone();
    let mut v = 0;
    while v < cap {
        if x.is_zero() {
            return cap;
        }
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        x = q;
        v += 1;
    }
    cap
}

/// `U·A·V = diag(p^{d_0}, ..., p^{d_{r-1}}, 0, ...)` over `Z/p^M`.
#[derive(Clone, Debug)]
pub struct LocalSmith {
    pub modulus_exponent: u32,
    /// Pivot valuations, nondecreasing, all `< M`.
    pub diagonal: Vec<u32>,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl LocalSmith {
    /// Pivot valuation at position `t`, with `M` standing for a zero pivot.
    pub fn valuation_at(&self, t: usize) -> u32 {
        self.diagonal.get(t).copied().unwrap_or(self.modulus_exponent)
    }
}

pub fn local_smith(a: &IntMatrix, rows: usize, cols: usize, p: u32, m: u32) -> LocalSmith {
    let modulus = pow_p(p, m);
    let md = |x: &BigInt| x.mod_floor(&modulus);
    let mut a: IntMatrix = a.iter().map(|r| r.iter().map(md).collect()).collect();
    let mut u = identity(rows);
    let mut u_inv = identity(rows);
    let mut v = identity(cols);
    let mut v_inv = identity(cols);
    let mut diagonal = Vec::new();
    for t in 0..rows.min(cols) {
        let mut best: Option<(usize, usize, u32)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                let val = val_capped(x, p, m);
                if val < m && best.is_none_or(|b| val < b.2) {
                    best = Some((i, j, val));
                }
            }
        }
        let Some((i, j, val)) = best else { break };
        // row swap t <-> i: U gets the swap, U^{-1} the column swap
        a.swap(t, i);
        u.swap(t, i);
        for row in u_inv.iter_mut() {
            row.swap(t, i);
        }
        for row in a.iter_mut() {
            row.swap(t, j);
        }
        for row in v.iter_mut() {
            row.swap(t, j);
        }
        v_inv.swap(t, j);
        // normalize the pivot to p^val
        let pv = pow_p(p, val);
        let unit = &a[t][t] / &pv;
        let unit_inv = unit.modinv(&modulus).expect("pivot unit is invertible");
        for x in a[t].iter_mut() {
            *x = md(&(&*x * &unit_inv));
        }
        for x in u[t].iter_mut() {
            *x = md(&(&*x * &unit_inv));
        }
        for row in u_inv.iter_mut() {
            row[t] = md(&(&row[t] * &unit));
        }
        // clear column t: row_r -= f row_t
        for r in 0..rows {
            if r == t || a[r][t].is_zero() {
                continue;
            }
            let f = &a[r][t] / &pv;
            for c in 0..cols {
                let d = &f * &a[t][c];
                a[r][c] = md(&(&a[r][c] - d));
            }
            for c in 0..rows {
                let d = &f * &u[t][c];
                u[r][c] = md(&(&u[r][c] - d));
            }
            // U^{-1}: column t += f column r
            for row in u_inv.iter_mut() {
                let d = &f * &row[r];
                row[t] = md(&(&row[t] + d));
            }
        }
        // clear row t: col_c -= f col_t
        for c in 0..cols {
            if c == t || a[t][c].is_zero() {
                continue;
            }
            let f = &a[t][c] / &pv;
            for row in a.iter_mut() {
                let d = &f * &row[t];
                row[c] = md(&(&row[c] - d));
            }
            for row in v.iter_mut() {
                let d = &f * &row[t];
                row[c] = md(&(&row[c] - d));
            }
            // V^{-1}: row t += f row c
            for k in 0..cols {
                let d = &f * &v_inv[c][k];
                v_inv[t][k] = md(&(&v_inv[t][k] + d));
            }
        }
        diagonal.push(val);
    }
    LocalSmith {
        modulus_exponent: m,
        diagonal,
        u,
        u_inv,
        v,
        v_inv,
    }
}

/// A finite abelian p-group `⊕ Z/p^{e_i}` with generators in order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteModule {
    pub p: u32,
    pub exponents: Vec<u32>,
}

impl FiniteModule {
    pub fn new(p: u32, exponents: Vec<u32>) -> Self {
        FiniteModule { p, exponents }
    }

    pub fn rank(&self) -> usize {
        self.exponents.len()
    }

    /// `log_p` of the order.
    pub fn length(&self) -> u64 {
        self.exponents.iter().map(|&e| e as u64).sum()
    }

    pub fn exponent(&self) -> u32 {
        self.exponents.iter().copied().max().unwrap_or(0)
    }

    /// Canonical coordinates of an integer vector.
    pub fn reduce(&self, x: &[BigInt]) -> Vec<BigInt> {
        x.iter()
            .zip(&self.exponents)
            .map(|(v, &e)| v.mod_floor(&pow_p(self.p, e)))
            .collect()
    }

    pub fn is_zero_vector(&self, x: &[BigInt]) -> bool {
        self.reduce(x).iter().all(Zero::is_zero)
    }

    /// Invariant factors in nondecreasing order, trivial factors removed.
    pub fn invariant_factors(&self) -> Vec<u32> {
        let mut e: Vec<u32> = self.exponents.iter().copied().filter(|&e| e > 0).collect();
        e.sort_unstable();
        e
    }

    /// Every element, as canonical coordinate vectors.
    pub fn elements(&self) -> Vec<Vec<BigInt>> {
        let mut out = vec![Vec::new()];
        for &e in &self.exponents {
            let q = pow_p(self.p, e);
            let mut next = Vec::new();
            for v in &out {
                let mut x = BigInt::zero();
                while x < q {
                    let mut w = v.clone();
                    w.push(x.clone());
                    next.push(w);
                    x += 1;
                }
            }
            out = next;
        }
        out
    }
}

/// A homomorphism between finite modules given by an integer matrix acting on coordinates.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    pub source: FiniteModule,
    pub target: FiniteModule,
    pub matrix: IntMatrix,
}

impl ModuleMap {
    /// Checks that `p^{e_j}` times generator `j` maps to zero.
    pub fn new(source: FiniteModule, target: FiniteModule, matrix: IntMatrix) -> Result<Self> {
        if matrix.len() != target.rank() || matrix.iter().any(|r| r.len() != source.rank()) {
            return Err(Error::Mismatch("map matrix shape does not match modules".into()));
        }
        for (j, &e) in source.exponents.iter().enumerate() {
            let col: Vec<BigInt> = matrix.iter().map(|r| &r[j] * pow_p(source.p, e)).collect();
            if !target.is_zero_vector(&col) {
                return Err(Error::Precondition(format!("generator {j} does not map to a well-defined image")));
            }
        }
        Ok(ModuleMap { source, target, matrix })
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.target.reduce(&mat_vec(&self.matrix, x))
    }
}

/// Smith form over `Z/p^M` of `diag(p^{M - b_i})·A`, where `A` maps `Z^n` into
/// `target = ⊕ Z/p^{b_i}`. The kernel lattice of `A` (which contains `p^M Z^n`) is
/// spanned by the columns `V_t·p^{M - d_t}`.
pub fn kernel_smith(a: &IntMatrix, cols: usize, target: &FiniteModule, m: u32) -> LocalSmith {
    let rows = target.rank();
    let scaled: IntMatrix = a
        .iter()
        .zip(&target.exponents)
        .map(|(r, &b)| r.iter().map(|x| x * pow_p(target.p, m.saturating_sub(b))).collect())
        .collect();
    local_smith(&scaled, rows, cols, target.p, m)
}

/// The subgroup generated by `gens` as an abstract module with its inclusion.
pub fn image_presentation(gens: &[Vec<BigInt>], target: &FiniteModule) -> ModuleMap {
    let n = target.rank();
    let r = gens.len();
    let m = target.exponent().max(1);
    let mut g = zeros(n, r);
    for (c, col) in gens.iter().enumerate() {
        for i in 0..n {
            g[i][c] = col[i].clone();
        }
    }
    let snf = kernel_smith(&g, r, target, m);
    let exponents: Vec<u32> = (0..r).map(|t| m - snf.valuation_at(t)).collect();
    let incl = mat_mul(&g, &snf.v, r, r);
    let matrix = incl
        .iter()
        .zip(&target.exponents)
        .map(|(row, &b)| row.iter().map(|x| x.mod_floor(&pow_p(target.p, b))).collect())
        .collect();
    ModuleMap {
        source: FiniteModule::new(target.p, exponents),
        target: target.clone(),
        matrix,
    }
}

/// `Z^n / (columns of gens + diag(p^{e}))` as a finite module, with the projection.
pub fn quotient(module: &FiniteModule, gens: &[Vec<BigInt>]) -> ModuleMap {
    let n = module.rank();
    let m = module.exponent().max(1) + 1;
    let mut a = zeros(n, gens.len() + n);
    for (c, g) in gens.iter().enumerate() {
        for r in 0..n {
            a[r][c] = g[r].clone();
        }
    }
    for (r, &e) in module.exponents.iter().enumerate() {
        a[r][gens.len() + r] = pow_p(module.p, e);
    }
    let snf = local_smith(&a, n, gens.len() + n, module.p, m);
    let exps: Vec<u32> = (0..n).map(|t| snf.valuation_at(t)).collect();
    let target = FiniteModule::new(module.p, exps);
    ModuleMap {
        source: module.clone(),
        matrix: snf.u.clone(),
        target,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[&[i64]]) -> IntMatrix {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn reduce_mat(a: &IntMatrix, modulus: &BigInt) -> IntMatrix {
        a.iter().map(|r| r.iter().map(|x| x.mod_floor(modulus)).collect()).collect()
    }

    #[test]
    fn smith_transforms_are_consistent() {
        let a = big(&[&[3, 6, 9], &[2, 4, 7], &[9, 0, 18]]);
        let s = local_smith(&a, 3, 3, 3, 5);
        let m = pow_p(3, 5);
        let d = mat_mul(&mat_mul(&s.u, &a, 3, 3), &s.v, 3, 3);
        let d = reduce_mat(&d, &m);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j && i < s.diagonal.len() { pow_p(3, s.diagonal[i]) } else { BigInt::zero() };
                assert_eq!(d[i][j], want);
            }
        }
        assert_eq!(reduce_mat(&mat_mul(&s.u, &s.u_inv, 3, 3), &m), identity(3));
        assert_eq!(reduce_mat(&mat_mul(&s.v, &s.v_inv, 3, 3), &m), identity(3));
    }

    #[test]
    fn quotient_of_cyclic() {
        // Z/9 modulo <3> is Z/3
        let m = FiniteModule::new(3, vec![2]);
        let q = quotient(&m, &[vec![BigInt::from(3)]]);
        assert_eq!(q.target.invariant_factors(), vec![1]);
        // Z/3 + Z/9 modulo the diagonal (1, 1) is Z/3
        let m = FiniteModule::new(3, vec![1, 2]);
        let q = quotient(&m, &[vec![BigInt::one(), BigInt::one()]]);
        assert_eq!(q.target.invariant_factors(), vec![1]);
    }

    #[test]
    fn image_of_subgroup() {
        // <(1, 3)> inside Z/3 + Z/9 has order 3
        let b = FiniteModule::new(3, vec![1, 2]);
        let i = image_presentation(&[vec![BigInt::one(), BigInt::from(3)]], &b);
        assert_eq!(i.source.invariant_factors(), vec![1]);
        // <(0, 1), (1, 0)> is everything
        let i = image_presentation(&[vec![BigInt::zero(), BigInt::one()], vec![BigInt::one(), BigInt::zero()]], &b);
        assert_eq!(i.source.invariant_factors(), vec![1, 2]);
        assert!(ModuleMap::new(i.source.clone(), i.target.clone(), i.matrix.clone()).is_ok());
    }

    #[test]
    fn element_enumeration() {
        let m = FiniteModule::new(3, vec![1, 2]);
        assert_eq!(m.elements().len(), 27);
        assert_eq!(m.length(), 3);
    }
}
