//! Fredholm determinants `det(1 - MT)` of finite matrices, Newton polygons,
//! slope `<= h` factorizations and the matching projectors.

use std::fmt;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::Zero;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::iwasawa::IwasawaElement;
use crate::padic::{PadicContext, PadicElement};
use crate::ring::{Ring, RingParams};

/// A square matrix over a coefficient ring.
#[derive(Clone, Debug, PartialEq)]
pub struct PadicMatrix<R: Ring> {
    params: R::Params,
    rows: Vec<Vec<R>>,
}

impl<R: Ring> PadicMatrix<R> {
    pub fn new(params: &R::Params, rows: Vec<Vec<R>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Mismatch("matrix must be square".into()));
        }
        Ok(PadicMatrix {
            params: params.clone(),
            rows,
        })
    }

    pub fn zero(params: &R::Params, n: usize) -> Self {
        PadicMatrix {
            params: params.clone(),
            rows: vec![vec![R::zero(params); n]; n],
        }
    }

    pub fn identity(params: &R::Params, n: usize) -> Self {
        let mut m = Self::zero(params, n);
        for i in 0..n {
            m.rows[i][i] = R::one(params);
        }
        m
    }

    pub fn params(&self) -> &R::Params {
        &self.params
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<R>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.rows[i][j]
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.dim();
        let mut out = Self::zero(&self.params, n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.rows[i][k];
                for j in 0..n {
                    out.rows[i][j] = out.rows[i][j].add(&a.mul(&other.rows[k][j]));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a.sub(b))
    }

    fn zip(&self, other: &Self, f: impl Fn(&R, &R) -> R) -> Self {
        PadicMatrix {
            params: self.params.clone(),
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(r, s)| r.iter().zip(s).map(|(a, b)| f(a, b)).collect())
                .collect(),
        }
    }

    pub fn scale(&self, x: &R) -> Self {
        self.map(|a| a.mul(x))
    }

    pub fn map(&self, f: impl Fn(&R) -> R) -> Self {
        PadicMatrix {
            params: self.params.clone(),
            rows: self.rows.iter().map(|r| r.iter().map(&f).collect()).collect(),
        }
    }

    pub fn trace(&self) -> R {
        (0..self.dim()).fold(R::zero(&self.params), |acc, i| acc.add(&self.rows[i][i]))
    }

    pub fn precision(&self) -> i64 {
        self.rows
            .iter()
            .flatten()
            .map(Ring::precision)
            .min()
            .unwrap_or(i64::MAX)
    }

    /// Minimum over entries of the valuation of `self - other`.
    pub fn agreement(&self, other: &Self) -> i64 {
        self.rows
            .iter()
            .flatten()
            .zip(other.rows.iter().flatten())
            .map(|(a, b)| a.agreement(b))
            .min()
            .unwrap_or(i64::MAX)
    }

    pub fn lift(&self, hi: &R::Params) -> Self {
        PadicMatrix {
            params: hi.clone(),
            rows: self.rows.iter().map(|r| r.iter().map(|a| a.lift(hi)).collect()).collect(),
        }
    }

    pub fn reduce(&self, lo: &R::Params) -> Self {
        PadicMatrix {
            params: lo.clone(),
            rows: self.rows.iter().map(|r| r.iter().map(|a| a.reduce(lo)).collect()).collect(),
        }
    }

    /// JSON-lines: one row per line, each a JSON array of serialized entries.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            let row: Vec<Value> = r.iter().map(Ring::to_json).collect();
            out.push_str(&Value::Array(row).to_string());
            out.push('\n');
        }
        out
    }

    pub fn from_json_lines(params: &R::Params, text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let v: Value = serde_json::from_str(line)
                .map_err(|e| Error::Parse(format!("matrix line {}: {e}", lineno + 1)))?;
            let arr = v
                .as_array()
                .ok_or_else(|| Error::Parse(format!("matrix line {} is not an array", lineno + 1)))?;
            rows.push(arr.iter().map(|x| R::from_json(params, x)).collect::<Result<Vec<_>>>()?);
        }
        Self::new(params, rows)
    }
}

impl PadicMatrix<PadicElement> {
    pub fn from_ints(ctx: &PadicContext, rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(
            ctx,
            rows.iter()
                .map(|r| r.iter().map(|&x| PadicElement::from_int(ctx, x)).collect())
                .collect(),
        )
    }

    pub fn from_bigints(ctx: &PadicContext, rows: &[Vec<BigInt>]) -> Result<Self> {
        Self::new(
            ctx,
            rows.iter()
                .map(|r| r.iter().map(|x| PadicElement::from_int(ctx, x.clone())).collect())
                .collect(),
        )
    }

    pub fn column(&self, j: usize) -> Vec<PadicElement> {
        self.rows.iter().map(|r| r[j].clone()).collect()
    }
}

/// `det(1 - MT) = 1 + c_1 T + ... + c_n T^n`, with trailing coefficients that
/// vanish at their precision removed.
#[derive(Clone, Debug, PartialEq)]
pub struct FredholmSeries<R: Ring> {
    params: R::Params,
    coeffs: Vec<R>,
    /// Number of trailing coefficients removed because they vanish at precision.
    trimmed: usize,
}

impl<R: Ring> FredholmSeries<R> {
    pub fn new(params: &R::Params, coeffs: Vec<R>) -> Result<Self> {
        match coeffs.first() {
            Some(c) if c.precision() >= 1 && c.agreement(&R::one(params)) >= c.precision() => {}
            _ => return Err(Error::Precondition("Fredholm series must have constant term 1".into())),
        }
        let mut s = FredholmSeries {
            params: params.clone(),
            coeffs,
            trimmed: 0,
        };
        s.coeffs[0] = R::one(params);
        while s.coeffs.len() > 1 && s.coeffs.last().is_some_and(Ring::is_zero) {
            s.coeffs.pop();
            s.trimmed += 1;
        }
        Ok(s)
    }

    pub fn params(&self) -> &R::Params {
        &self.params
    }

    pub fn coefficients(&self) -> &[R] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn trimmed(&self) -> usize {
        self.trimmed
    }

    pub fn precision(&self) -> i64 {
        self.coeffs.iter().map(Ring::precision).min().unwrap_or(i64::MAX)
    }

    /// Agreement of coefficient sequences, padding the shorter with zeros.
    pub fn agreement(&self, other: &Self) -> i64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = R::zero(&self.params);
        (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).unwrap_or(&zero);
                let b = other.coeffs.get(i).unwrap_or(&zero);
                a.agreement(b)
            })
            .min()
            .unwrap_or(i64::MAX)
    }

    /// Certified precision of a comparison with `other`.
    pub fn comparison_precision(&self, other: &Self) -> i64 {
        self.precision().min(other.precision())
    }
}

impl FredholmSeries<PadicElement> {
    /// Text form: coefficients separated by newlines, or `1` for the unit series.
    pub fn render(&self) -> String {
        if self.coeffs.len() == 1 {
            return "1".into();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            parts.push(format!("T^{i}: {c}"));
        }
        parts.join("\n")
    }
}

impl FredholmSeries<IwasawaElement> {
    pub fn specialize(&self, point: &[PadicElement]) -> Result<FredholmSeries<PadicElement>> {
        let ctx = self.params.context().clone();
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.specialize(point))
            .collect::<Result<Vec<_>>>()?;
        FredholmSeries::new(&ctx, coeffs)
    }
}

/// Characteristic polynomial coefficients `[1, c_1, ..., c_n]` of
/// `det(X - M) = X^n + c_1 X^{n-1} + ... + c_n` by Berkowitz's division-free method.
fn berkowitz<R: Ring>(m: &PadicMatrix<R>) -> Vec<R> {
    let params = &m.params;
    let a = &m.rows;
    let mut poly = vec![R::one(params)];
    for r in 1..=m.dim() {
        // leading (r-1)x(r-1) block, last row R, last column C, corner entry
        let k = r - 1;
        let mut t = Vec::with_capacity(r + 1);
        t.push(R::one(params));
        t.push(a[k][k].neg());
        // v = C, then v = M_{k} v repeatedly; t_{i} = -R v
        let mut v: Vec<R> = (0..k).map(|i| a[i][k].clone()).collect();
        for _ in 2..=r {
            let rv = (0..k).fold(R::zero(params), |acc, j| acc.add(&a[k][j].mul(&v[j])));
            t.push(rv.neg());
            v = (0..k)
                .map(|i| (0..k).fold(R::zero(params), |acc, j| acc.add(&a[i][j].mul(&v[j]))))
                .collect();
        }
        let mut next = vec![R::zero(params); r + 1];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, pj) in poly.iter().enumerate() {
                if i >= j {
                    *slot = slot.add(&t[i - j].mul(pj));
                }
            }
        }
        poly = next;
    }
    poly
}

pub fn fredholm_det<R: Ring>(m: &PadicMatrix<R>) -> Result<FredholmSeries<R>> {
    FredholmSeries::new(&m.params, berkowitz(m))
}

/// Slopes with multiplicities, strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub segments: Vec<(Ratio<i64>, u32)>,
    /// Vertices `(i, v)` of the lower hull.
    pub vertices: Vec<(i64, i64)>,
}

impl NewtonPolygon {
    pub fn total_multiplicity(&self) -> u32 {
        self.segments.iter().map(|s| s.1).sum()
    }

    /// Height of the polygon at abscissa `x` (within range).
    pub fn height(&self, x: i64) -> Ratio<i64> {
        for w in self.vertices.windows(2) {
            let (x0, y0) = w[0];
            let (x1, y1) = w[1];
            if x >= x0 && x <= x1 {
                return Ratio::from_integer(y0) + Ratio::new((y1 - y0) * (x - x0), x1 - x0);
            }
        }
        Ratio::from_integer(self.vertices.last().map(|v| v.1).unwrap_or(0))
    }

    /// Slopes listed with repetition.
    pub fn slope_multiset(&self) -> Vec<Ratio<i64>> {
        self.segments
            .iter()
            .flat_map(|(s, m)| std::iter::repeat_n(*s, *m as usize))
            .collect()
    }

    /// Multiplicity of slopes `<= h`.
    pub fn multiplicity_upto(&self, h: Ratio<i64>) -> u32 {
        self.segments.iter().filter(|s| s.0 <= h).map(|s| s.1).sum()
    }

    pub fn is_adapted(&self, h: Ratio<i64>) -> bool {
        self.segments.iter().all(|s| s.0 != h)
    }
}

impl fmt::Display for NewtonPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (s, m) in &self.segments {
            writeln!(f, "{}/{} {}", s.numer(), s.denom(), m)?;
        }
        Ok(())
    }
}

/// The lower convex hull of `(i, v(a_i))`.
///
/// Coefficients that vanish at their precision only give a lower bound; if that
/// bound dips below the hull of the known points the polygon is undetermined.
pub fn newton_polygon<R: Ring>(f: &FredholmSeries<R>) -> Result<NewtonPolygon> {
    let mut known = Vec::new();
    let mut unknown = Vec::new();
    for (i, c) in f.coeffs.iter().enumerate() {
        if c.is_zero() {
            unknown.push((i, c.precision()));
        } else {
            known.push((i as i64, c.valuation()));
        }
    }
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &pt in &known {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            // drop the middle point if it lies on or above the chord
            if (y2 - y1) * (pt.0 - x1) >= (pt.1 - y1) * (x2 - x1) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let mut segments: Vec<(Ratio<i64>, u32)> = Vec::new();
    for w in hull.windows(2) {
        let slope = Ratio::new(w[1].1 - w[0].1, w[1].0 - w[0].0);
        let mult = (w[1].0 - w[0].0) as u32;
        match segments.last_mut() {
            Some(last) if last.0 == slope => last.1 += mult,
            _ => segments.push((slope, mult)),
        }
    }
    let poly = NewtonPolygon {
        segments,
        vertices: hull,
    };
    for (i, bound) in unknown {
        if Ratio::from_integer(bound) < poly.height(i as i64) {
            return Err(Error::UnknownValuation { index: i });
        }
    }
    Ok(poly)
}

/// Whether `h` is slope-adapted for `F`, together with the polygon data.
#[derive(Clone, Debug, PartialEq)]
pub struct SlopeDatum {
    pub weight: String,
    pub h: Ratio<i64>,
    pub adapted: bool,
    pub multiplicity: u32,
}

pub fn slope_datum<R: Ring>(f: &FredholmSeries<R>, h: Ratio<i64>, weight: &str) -> Result<SlopeDatum> {
    let poly = newton_polygon(f)?;
    Ok(SlopeDatum {
        weight: weight.to_string(),
        h,
        adapted: poly.is_adapted(h),
        multiplicity: poly.multiplicity_upto(h),
    })
}

type Poly = Vec<PadicElement>;

fn poly_mul(a: &[PadicElement], b: &[PadicElement], ctx: &PadicContext) -> Poly {
    let mut out = vec![PadicElement::zero(ctx); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

/// Solves `A x = b` over `Q_p` by elimination with minimum-valuation pivots.
pub fn solve(a: &[Vec<PadicElement>], b: &[PadicElement]) -> Result<Vec<PadicElement>> {
    let n = a.len();
    let mut m: Vec<Vec<PadicElement>> = a
        .iter()
        .zip(b)
        .map(|(r, x)| {
            let mut r = r.clone();
            r.push(x.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .filter(|&r| !m[r][col].is_zero())
            .min_by_key(|&r| m[r][col].valuation())
            .ok_or_else(|| Error::exhausted("solve", format!("no usable pivot in column {col}")))?;
        m.swap(col, pivot);
        let inv = m[col][col].inverse()?;
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] * &inv;
            for c in col..=n {
                let t = &factor * &m[col][c];
                m[r][c] = &m[r][c] - &t;
            }
        }
    }
    (0..n).map(|i| m[i][n].checked_div(&m[i][i])).collect()
}

/// Solves `u·q + v·s = e` with `deg u < deg s`, `deg v < deg q` (q, s monic).
fn sylvester_solve(q: &[PadicElement], s: &[PadicElement], e: &[PadicElement], ctx: &PadicContext) -> Result<(Poly, Poly)> {
    let dq = q.len() - 1;
    let ds = s.len() - 1;
    let n = dq + ds;
    let mut a = vec![vec![PadicElement::zero(ctx); n]; n];
    for j in 0..ds {
        for (i, c) in q.iter().enumerate() {
            a[i + j][j] = c.clone();
        }
    }
    for j in 0..dq {
        for (i, c) in s.iter().enumerate() {
            a[i + j][ds + j] = c.clone();
        }
    }
    let mut rhs = vec![PadicElement::zero(ctx); n];
    for (i, c) in e.iter().enumerate().take(n) {
        rhs[i] = c.clone();
    }
    let x = solve(&a, &rhs)?;
    Ok((x[..ds].to_vec(), x[ds..].to_vec()))
}

/// `v_p(Res(Q*, S*))` for the slope split at `m`: `(n - m)·y_m` rounded up.
fn resultant_loss(poly: &NewtonPolygon, m: usize, n: usize) -> i64 {
    let y = poly.height(m as i64);
    let total = y * Ratio::from_integer((n - m) as i64);
    total.ceil().to_integer()
}

/// Reversed monic polynomial `F*(X) = X^d F(1/X)`, low degree first.
fn reversed(f: &[PadicElement]) -> Poly {
    f.iter().rev().cloned().collect()
}

/// The factorization `F = Q·S` with the slopes `<= h` in `Q`, `Q(0) = S(0) = 1`.
///
/// Works on the reversed polynomials `F* = Q*·S*` by Newton iteration on the
/// Sylvester system, started from the polygon split `Q*_0 = top of F*`, `S*_0 = X^{d-m}`,
/// in a context with enough guard digits to absorb the resultant.
pub fn slope_factor(f: &FredholmSeries<PadicElement>, h: Ratio<i64>) -> Result<(FredholmSeries<PadicElement>, FredholmSeries<PadicElement>)> {
    let ctx = f.params.clone();
    let poly = newton_polygon(f)?;
    if !poly.is_adapted(h) {
        return Err(Error::NotAdapted { h: h.to_string() });
    }
    let d = f.degree();
    let m = poly.multiplicity_upto(h) as usize;
    if m == d {
        return Ok((f.clone(), FredholmSeries::new(&ctx, vec![PadicElement::one(&ctx)])?));
    }
    if m == 0 {
        return Ok((FredholmSeries::new(&ctx, vec![PadicElement::one(&ctx)])?, f.clone()));
    }
    let loss = resultant_loss(&poly, m, d);
    let (q, s) = split_reversed(f, m, loss)?;
    let cap = f.precision() - loss;
    if cap < 1 {
        return Err(Error::exhausted("slope_factor", format!("resultant valuation {loss} consumes the precision")));
    }
    let qf = FredholmSeries::new(&ctx, reversed(&q).into_iter().map(|c| c.reduce(&ctx).with_precision(cap)).collect())?;
    let sf = FredholmSeries::new(&ctx, reversed(&s).into_iter().map(|c| c.reduce(&ctx).with_precision(cap)).collect())?;
    let prod = poly_mul(&qf.coeffs, &sf.coeffs, &ctx);
    let check = FredholmSeries::new(&ctx, prod)?;
    if check.agreement(f) < check.comparison_precision(f) {
        return Err(Error::exhausted("slope_factor", "Newton iteration did not reconstitute F"));
    }
    Ok((qf, sf))
}

/// Division by a monic polynomial: `f = q·s + r` with `deg r < deg s`.
fn divide_monic(f: &[PadicElement], s: &[PadicElement], ctx: &PadicContext) -> (Poly, Poly) {
    let ds = s.len() - 1;
    let mut r = f.to_vec();
    let mut q = vec![PadicElement::zero(ctx); f.len().saturating_sub(ds).max(1)];
    for i in (ds..f.len()).rev() {
        let c = r[i].clone();
        if c.is_zero() {
            continue;
        }
        q[i - ds] = c.clone();
        for (j, sj) in s.iter().enumerate() {
            r[i - ds + j] = &r[i - ds + j] - &(&c * sj);
        }
    }
    r.truncate(ds);
    (q, r)
}

/// Returns monic `Q*` (degree m) and `S*` (degree d - m), low degree first, in a guarded context.
///
/// On the disc `v(X) >= h` the roots of `S*` lie inside and `Q*` is dominated by
/// its constant term, so `S ↦ S + R / Q(0)`, with `R` the remainder of `F*` by `S`,
/// contracts; a few Newton steps on the Sylvester system then finish.
fn split_reversed(f: &FredholmSeries<PadicElement>, m: usize, loss: i64) -> Result<(Poly, Poly)> {
    let ctx = f.params.clone();
    let d = f.degree();
    let k = d - m;
    let guard = 2 * loss as u32 + 6;
    let hi = ctx.with_precision(ctx.n() + guard);
    let fstar: Poly = reversed(&f.coeffs).iter().map(|c| c.lift(&hi)).collect();
    let target = hi.n() as i64 - loss;
    let mut s: Poly = vec![PadicElement::zero(&hi); k + 1];
    s[k] = PadicElement::one(&hi);
    let mut q;
    let mut stalled = 0;
    let mut best = i64::MIN;
    loop {
        let (qj, r) = divide_monic(&fstar, &s, &hi);
        q = qj;
        let vr = r.iter().map(|c| c.valuation()).min().unwrap_or(i64::MAX);
        if vr >= target {
            return Ok((q, s));
        }
        if vr > best {
            best = vr;
            stalled = 0;
        } else {
            stalled += 1;
            if stalled > 8 * (d as i64 + 1) as usize {
                break;
            }
        }
        // close enough for Newton to converge quadratically
        if vr > 2 * loss + 2 {
            break;
        }
        let q0 = q[0].clone();
        for (i, c) in r.iter().enumerate() {
            s[i] = &s[i] + &c.checked_div(&q0)?;
        }
    }
    let mut last = i64::MIN;
    for _ in 0..64 {
        let prod = poly_mul(&q, &s, &hi);
        let e: Poly = (0..d).map(|i| &fstar[i] - &prod[i]).collect();
        let ve = e.iter().map(|c| c.valuation()).min().unwrap_or(i64::MAX);
        if ve >= target || ve <= last {
            break;
        }
        last = ve;
        let (u, v) = sylvester_solve(&q, &s, &e, &hi)?;
        for (i, c) in v.iter().enumerate() {
            q[i] = &q[i] + c;
        }
        for (i, c) in u.iter().enumerate() {
            s[i] = &s[i] + c;
        }
    }
    Ok((q, s))
}

/// The projector onto the slope `<= h` part and a basis of its image.
#[derive(Clone, Debug)]
pub struct SlopeDecomposition {
    pub projector: PadicMatrix<PadicElement>,
    pub basis: Vec<Vec<PadicElement>>,
    pub rank: usize,
    /// Precision at which idempotency and commutation were verified.
    pub precision: i64,
}

fn matrix_poly(m: &PadicMatrix<PadicElement>, coeffs: &[PadicElement]) -> PadicMatrix<PadicElement> {
    let ctx = m.params.clone();
    let n = m.dim();
    let mut acc = PadicMatrix::zero(&ctx, n);
    for c in coeffs.iter().rev() {
        acc = acc.mul(m).add(&PadicMatrix::identity(&ctx, n).scale(c));
    }
    acc
}

/// `e = B(M)·S*(M)` from the Bezout identity `A·Q* + B·S* = 1`, where `S*` also
/// carries the factor `X^{n - deg F}` for the eigenvalue zero. On the kernel of
/// `Q*(M)` this is the identity and on the kernel of `S*(M)` it vanishes.
pub fn slope_decompose(m: &PadicMatrix<PadicElement>, h: Ratio<i64>) -> Result<SlopeDecomposition> {
    let ctx = m.params.clone();
    let n = m.dim();
    let f = fredholm_det(m)?;
    let poly = newton_polygon(&f)?;
    if !poly.is_adapted(h) {
        return Err(Error::NotAdapted { h: h.to_string() });
    }
    let d = f.degree();
    let rank = poly.multiplicity_upto(h) as usize;
    if rank == 0 {
        return finish_decomposition(m, PadicMatrix::zero(&ctx, n), 0, m.precision());
    }
    if rank == n {
        return finish_decomposition(m, PadicMatrix::identity(&ctx, n), n, m.precision());
    }
    let loss = resultant_loss(&poly, rank, d);
    let guard = 2 * loss as u32 + 6;
    let hi = ctx.with_precision(ctx.n() + guard);
    let (q, s_part) = if rank == d {
        let fstar: Poly = reversed(&f.coeffs).iter().map(|c| c.lift(&hi)).collect();
        (fstar, vec![PadicElement::one(&hi)])
    } else {
        split_reversed(&f, rank, loss)?
    };
    // S*_full = X^{n-d} S*
    let mut s_full = vec![PadicElement::zero(&hi); n - d];
    s_full.extend(s_part);
    let mut one = vec![PadicElement::zero(&hi); n];
    one[0] = PadicElement::one(&hi);
    let (_, b) = sylvester_solve(&q, &s_full, &one, &hi)?;
    let mhi = m.lift(&hi);
    let e_hi = matrix_poly(&mhi, &b).mul(&matrix_poly(&mhi, &s_full));
    let cap = m.precision() - 2 * loss;
    if cap < 1 {
        return Err(Error::exhausted("slope_decompose", format!("resultant valuation {loss} consumes the precision")));
    }
    let e = e_hi.reduce(&ctx).map(|x| x.with_precision(cap));
    finish_decomposition(m, e, rank, cap)
}

fn finish_decomposition(
    m: &PadicMatrix<PadicElement>,
    e: PadicMatrix<PadicElement>,
    rank: usize,
    cap: i64,
) -> Result<SlopeDecomposition> {
    let ctx = m.params.clone();
    let e2 = e.mul(&e);
    let comm = e.mul(m).sub(&m.mul(&e));
    let idem = e2.agreement(&e).min(e2.precision()).min(e.precision());
    let commutes = comm.rows.iter().flatten().map(|x| x.valuation()).min().unwrap_or(i64::MAX);
    let trace_gap = e.trace().agreement(&PadicElement::from_int(&ctx, rank as u64));
    let precision = idem.min(commutes).min(cap);
    if precision < 1 || trace_gap < 1 {
        return Err(Error::exhausted("slope_decompose", "projector could not be certified"));
    }
    let basis = column_basis(&e, rank)?;
    Ok(SlopeDecomposition {
        projector: e,
        basis,
        rank,
        precision,
    })
}

/// `rank` linearly independent columns of `e`, chosen by minimum-valuation pivoting.
fn column_basis(e: &PadicMatrix<PadicElement>, rank: usize) -> Result<Vec<Vec<PadicElement>>> {
    let n = e.dim();
    let mut work: Vec<Vec<PadicElement>> = (0..n).map(|j| e.column(j)).collect();
    let mut chosen = Vec::new();
    let mut used_rows = vec![false; n];
    for _ in 0..rank {
        let mut best: Option<(usize, usize, i64)> = None;
        for (j, col) in work.iter().enumerate() {
            if chosen.contains(&j) {
                continue;
            }
            for (i, x) in col.iter().enumerate() {
                if used_rows[i] || x.is_zero() {
                    continue;
                }
                if best.is_none_or(|b| x.valuation() < b.2) {
                    best = Some((j, i, x.valuation()));
                }
            }
        }
        let (j, i, _) = best.ok_or_else(|| Error::exhausted("slope_decompose", "projector rank deficient at precision"))?;
        chosen.push(j);
        used_rows[i] = true;
        let pivot_col = work[j].clone();
        let inv = pivot_col[i].inverse()?;
        for (k, col) in work.iter_mut().enumerate() {
            if chosen.contains(&k) || col[i].is_zero() {
                continue;
            }
            let factor = &col[i] * &inv;
            for r in 0..n {
                let t = &factor * &pivot_col[r];
                col[r] = &col[r] - &t;
            }
        }
    }
    chosen.sort_unstable();
    Ok(chosen.into_iter().map(|j| e.column(j)).collect())
}

/// Entrywise specialization of an Iwasawa-coefficient matrix.
pub fn specialize_family(m: &PadicMatrix<IwasawaElement>, point: &[PadicElement]) -> Result<PadicMatrix<PadicElement>> {
    let ctx = m.params.context().clone();
    let rows = m
        .rows
        .iter()
        .map(|r| r.iter().map(|x| x.specialize(point)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    PadicMatrix::new(&ctx, rows)
}

/// Parses `a/b` or `a` as an exact rational.
pub fn parse_ratio(s: &str) -> Result<Ratio<i64>> {
    let bad = || Error::Parse(format!("expected a rational a/b, got `{s}`"));
    match s.split_once('/') {
        Some((a, b)) => {
            let a: i64 = a.trim().parse().map_err(|_| bad())?;
            let b: i64 = b.trim().parse().map_err(|_| bad())?;
            if b.is_zero() {
                return Err(bad());
            }
            Ok(Ratio::new(a, b))
        }
        None => Ok(Ratio::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PadicContext {
        PadicContext::new(3, 12).unwrap()
    }

    fn series(c: &PadicContext, xs: &[i64]) -> FredholmSeries<PadicElement> {
        FredholmSeries::new(c, xs.iter().map(|&x| PadicElement::from_int(c, x)).collect()).unwrap()
    }

    #[test]
    fn det_examples() {
        let c = ctx();
        let zero = PadicMatrix::<PadicElement>::zero(&c, 3);
        assert_eq!(fredholm_det(&zero).unwrap().render(), "1");
        let d = PadicMatrix::from_ints(&c, &[vec![3, 0], vec![0, 9]]).unwrap();
        let f = fredholm_det(&d).unwrap();
        assert_eq!(f, series(&c, &[1, -12, 27]));
    }

    #[test]
    fn polygon_examples() {
        let c = ctx();
        assert!(newton_polygon(&series(&c, &[1])).unwrap().segments.is_empty());
        let p1 = newton_polygon(&series(&c, &[1, -3])).unwrap();
        assert_eq!(p1.segments, vec![(Ratio::from_integer(1), 1)]);
        // (1-T)(1-3T)^2 = 1 - 7T + 15T^2 - 9T^3
        let p2 = newton_polygon(&series(&c, &[1, -7, 15, -9])).unwrap();
        assert_eq!(p2.segments, vec![(Ratio::from_integer(0), 1), (Ratio::from_integer(1), 2)]);
        // 1 + 3T^2: a single segment of slope 1/2
        let p3 = newton_polygon(&series(&c, &[1, 0, 3])).unwrap();
        assert_eq!(p3.segments, vec![(Ratio::new(1, 2), 2)]);
        assert_eq!(p3.to_string(), "1/2 2\n");
    }

    #[test]
    fn factor_examples() {
        let c = ctx();
        // (1-T)(1-9T)
        let f = series(&c, &[1, -10, 9]);
        let (q, s) = slope_factor(&f, Ratio::from_integer(1)).unwrap();
        assert_eq!(q, series(&c, &[1, -1]));
        assert_eq!(s, series(&c, &[1, -9]));
        let (q, s) = slope_factor(&f, Ratio::from_integer(5)).unwrap();
        assert_eq!((q, s.degree()), (f.clone(), 0));
        // (1-3T)^2 and h = 1
        let g = series(&c, &[1, -6, 9]);
        assert!(matches!(slope_factor(&g, Ratio::from_integer(1)), Err(Error::NotAdapted { .. })));
    }

    #[test]
    fn factor_with_fractional_slopes() {
        let c = ctx();
        // (1 - 3T^2)(1 - T)(1 - 27T)
        let a = [1i64, 0, -3];
        let b = [1i64, -28, 27];
        let mut f = vec![0i64; 5];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                f[i + j] += x * y;
            }
        }
        let f = series(&c, &f);
        let (q, s) = slope_factor(&f, Ratio::new(2, 3)).unwrap();
        assert_eq!(newton_polygon(&q).unwrap().slope_multiset(), vec![Ratio::from_integer(0), Ratio::new(1, 2), Ratio::new(1, 2)]);
        assert_eq!(s.degree(), 1);
        assert!(s.coefficients()[1].agreement(&PadicElement::from_int(&c, -27)) >= s.precision());
    }

    #[test]
    fn decompose_diagonal_conjugate() {
        let c = ctx();
        // diag(1, 27) conjugated by [[2, 1], [1, 1]]
        let p = PadicMatrix::from_ints(&c, &[vec![2, 1], vec![1, 1]]).unwrap();
        let pinv = PadicMatrix::from_ints(&c, &[vec![1, -1], vec![-1, 2]]).unwrap();
        let d = PadicMatrix::from_ints(&c, &[vec![1, 0], vec![0, 27]]).unwrap();
        let m = p.mul(&d).mul(&pinv);
        let dec = slope_decompose(&m, Ratio::from_integer(1)).unwrap();
        assert_eq!(dec.rank, 1);
        let expect = p.mul(&PadicMatrix::from_ints(&c, &[vec![1, 0], vec![0, 0]]).unwrap()).mul(&pinv);
        assert!(dec.projector.agreement(&expect) >= dec.precision);
        assert_eq!(dec.precision, 12);
        let full = slope_decompose(&m, Ratio::from_integer(4)).unwrap();
        assert_eq!(full.projector, PadicMatrix::identity(&c, 2));
    }

    #[test]
    fn decompose_with_kernel() {
        let c = ctx();
        let m = PadicMatrix::from_ints(&c, &[vec![1, 1, 0], vec![0, 0, 0], vec![0, 0, 3]]).unwrap();
        let dec = slope_decompose(&m, Ratio::new(1, 2)).unwrap();
        assert_eq!(dec.rank, 1);
        assert_eq!(dec.basis.len(), 1);
    }

    #[test]
    fn json_lines_round_trip() {
        let c = ctx();
        let m = PadicMatrix::from_ints(&c, &[vec![1, -2], vec![9, 0]]).unwrap();
        let back = PadicMatrix::<PadicElement>::from_json_lines(&c, &m.to_json_lines()).unwrap();
        assert_eq!(back, m);
    }
}
