//! Seeded property suites. Each suite checks one mathematical statement on
//! random instances and reports the number of failures together with the
//! smallest certified precision at which the identities were compared.

use std::fmt;

use num_bigint::BigInt;
use num_rational::Ratio;
use rand::Rng;
use serde::Serialize;

use crate::analytic::{act_right, amice_from_values, AmiceFunction};
use crate::distributions::{
    act_left, act_on_quotient, amice_transform, fil_quotient, integrate_k, lk_act, one_plus_t_pow, series_mul,
    FiniteDistribution,
};
use crate::eichler_shimura::{
    canonical_degree_bound, canonical_degree_closed_form, es_equivariance_check, factor_weight_k_check, PeriodPoint,
};
use crate::error::{Error, Result};
use crate::fredholm::{fredholm_det, newton_polygon, slope_decompose, slope_factor, specialize_family, PadicMatrix};
use crate::iwasawa::{linear, IwasawaRing};
use crate::padic::{valp_factorial, PadicContext};
use crate::ring::{Ring, RingParams};
use crate::sample::{self, SuiteRng};
use crate::tensor::{check_tensor_exactness, PseudobasisModule};
use crate::weights::{integer_weight, Weight, WeightKind};

pub const VERSION: &str = concat!("ocpadic ", env!("CARGO_PKG_VERSION"));

/// Digits the Eichler–Shimura comparison may lose below `N`.
pub const ES_SLACK: i64 = 2;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub statement: &'static str,
    pub instances: usize,
    pub failures: usize,
    pub min_precision: Option<i64>,
    pub note: String,
}

impl SuiteResult {
    pub fn pass(&self) -> bool {
        self.failures == 0 && self.instances > 0
    }
}

impl fmt::Display for SuiteResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.pass() { "PASS" } else { "FAIL" };
        let prec = match self.min_precision {
            Some(p) => format!("prec>={p}"),
            None => "exact".to_string(),
        };
        write!(
            f,
            "{status}  {:<26} {:>5} checks  {:<9}  {}",
            self.name, self.instances, prec, self.statement
        )?;
        if !self.note.is_empty() {
            write!(f, "  [{}]", self.note)?;
        }
        Ok(())
    }
}

struct Tally {
    result: SuiteResult,
}

impl Tally {
    fn new(name: &'static str, statement: &'static str) -> Self {
        Tally {
            result: SuiteResult {
                name,
                statement,
                instances: 0,
                failures: 0,
                min_precision: None,
                note: String::new(),
            },
        }
    }

    fn check(&mut self, pass: bool, precision: Option<i64>, what: impl FnOnce() -> String) {
        self.result.instances += 1;
        if let Some(p) = precision {
            self.result.min_precision = Some(self.result.min_precision.map_or(p, |m| m.min(p)));
        }
        if !pass {
            self.fail(what());
        }
    }

    fn fail(&mut self, what: String) {
        self.result.failures += 1;
        if self.result.note.is_empty() {
            self.result.note = what;
        }
    }

    /// Records the outcome of a fallible check; errors count as failures.
    fn run(&mut self, label: impl Fn() -> String, f: impl FnOnce() -> Result<(bool, Option<i64>)>) {
        match f() {
            Ok((pass, prec)) => self.check(pass, prec, label),
            Err(e) => {
                self.result.instances += 1;
                self.fail(format!("{}: {e}", label()));
            }
        }
    }

    fn finish(self) -> SuiteResult {
        self.result
    }
}

/// Shared suite parameters.
#[derive(Clone, Copy, Debug)]
pub struct SuiteParams {
    pub p: u32,
    pub n: u32,
    pub seed: u64,
    pub instances: usize,
}

impl SuiteParams {
    fn ctx(&self) -> Result<PadicContext> {
        PadicContext::new(self.p, self.n)
    }

    fn rng(&self, salt: u64) -> SuiteRng {
        sample::rng(self.seed, salt)
    }
}

fn agree<R: Ring>(a: &R, b: &R) -> (bool, i64) {
    let prec = a.precision().min(b.precision());
    (a.agreement(b) >= prec, prec)
}

fn agree_all<R: Ring>(a: &[R], b: &[R]) -> (bool, i64) {
    if a.len() != b.len() {
        return (false, 0);
    }
    a.iter().zip(b).fold((true, i64::MAX), |(ok, prec), (x, y)| {
        let (o, p) = agree(x, y);
        (ok && o, prec.min(p))
    })
}

/// `χ_k(b) = b^{k-2}` for the canonical extension of the integer weight `k`.
pub fn char_extension(sp: SuiteParams, kmax: u32) -> Result<SuiteResult> {
    let ctx = sp.ctx()?;
    let mut rng = sp.rng(1);
    let mut t = Tally::new("char-extension", "χ_k(b) = b^(k-2) for units b (canonical extension series)");
    for k in 2..=kmax {
        let w = integer_weight(k as i64, &ctx);
        for _ in 0..sp.instances {
            let b = sample::random_unit(&mut rng, &ctx);
            t.run(
                || format!("k={k} b={b}"),
                || {
                    let got = w.char_extend(&b, 0)?;
                    let want = b.powi(k as i64 - 2)?;
                    let (ok, prec) = agree(&got, &want);
                    Ok((ok && prec >= ctx.n() as i64, Some(prec)))
                },
            );
        }
    }
    Ok(t.finish())
}

/// `eval ∘ amice_from_values = id` with integral coefficients.
pub fn amice_roundtrip(sp: SuiteParams) -> Result<SuiteResult> {
    let ctx = sp.ctx()?;
    let p = sp.p as usize;
    let mut rng = sp.rng(2);
    let mut t = Tally::new("amice-roundtrip", "Amice basis e_j^s is orthonormal: values <-> integral coefficients");
    for i in 0..sp.instances {
        let mahler = i % 2 == 0;
        let (s, len) = if mahler {
            (2, rng.gen_range(2..=p * p))
        } else {
            (1, rng.gen_range(2..=3 * p))
        };
        let values = if mahler {
            (0..len).map(|_| sample::random_integral(&mut rng, &ctx)).collect::<Vec<_>>()
        } else {
            let coeffs = (0..len).map(|_| sample::random_integral(&mut rng, &ctx)).collect();
            match AmiceFunction::from_coefficients(&ctx, s, coeffs).values() {
                Ok(v) => v,
                Err(e) => {
                    t.fail(format!("instance {i}: {e}"));
                    continue;
                }
            }
        };
        t.run(
            || format!("instance {i} (s={s}, J={len})"),
            || {
                let f = amice_from_values(&ctx, &values, s, None)?;
                let back = f.values()?;
                let (ok, prec) = agree_all(&back, &values);
                Ok((ok && f.is_integral(), Some(prec)))
            },
        );
    }
    Ok(t.finish())
}

/// `f·(γ₁γ₂) = (f·γ₁)·γ₂` on `A^s`.
pub fn right_action_associativity(sp: SuiteParams) -> Result<SuiteResult> {
    let ctx = sp.ctx()?;
    let mut rng = sp.rng(3);
    let mut t = Tally::new("right-action-assoc", "f·(γ1γ2) = (f·γ1)·γ2 on A^s for γ in Δ0(p)");
    let s = 1;
    let len = sp.p as usize * (sp.n as usize + 2);
    for i in 0..sp.instances {
        let w = sample::random_weight(&mut rng, &ctx);
        // c_j divisible by p^⌊j/p⌋: the truncation tail stays below p^N under the action
        let coeffs = (0..len)
            .map(|j| sample::random_integral(&mut rng, &ctx).mul_exact_int(&num_traits::pow(BigInt::from(sp.p), j / sp.p as usize)))
            .collect();
        let f = AmiceFunction::from_coefficients(&ctx, s, coeffs);
        let g1 = sample::random_delta0(&mut rng, sp.p);
        let g2 = sample::random_delta0(&mut rng, sp.p);
        t.run(
            || format!("instance {i}"),
            || {
                let lhs = act_right(&f, &w, &(&g1 * &g2))?;
                let rhs = act_right(&act_right(&f, &w, &g1)?, &w, &g2)?;
                let (ok, prec) = agree_all(lhs.coefficients(), rhs.coefficients());
                Ok((ok, Some(prec.min(lhs.precision()).min(rhs.precision()))))
            },
        );
    }
    Ok(t.finish())
}

fn quotient_instance<R: Ring>(
    rng: &mut SuiteRng,
    params: &R::Params,
    s: u32,
    k: u32,
    sample_elt: impl Fn(&mut SuiteRng) -> Result<R>,
) -> Result<FiniteDistribution<R>> {
    let len = crate::distributions::quotient_length(params.context().p(), s, k);
    let moments = (0..len).map(|_| sample_elt(rng)).collect::<Result<Vec<_>>>()?;
    fil_quotient(&crate::distributions::Distribution::from_moments(params, s, moments), k)
}

/// `(γ₁γ₂)·μ = γ₁·(γ₂·μ)` on `D/Fil^k`, over `Q_p` and over an Iwasawa ring.
pub fn quotient_action_associativity(sp: SuiteParams) -> Result<SuiteResult> {
    let ctx = sp.ctx()?;
    let mut rng = sp.rng(4);
    let mut t = Tally::new("quotient-action-assoc", "(γ1γ2)·μ = γ1·(γ2·μ) on D/Fil^k, exact");
    let ring = IwasawaRing::new(&ctx, 1, 3)?;
    let wf = Weight::new(linear(&ring, 1, sp.p as i64, 0), 0, WeightKind::Small)?;
    for i in 0..sp.instances {
        let k = rng.gen_range(1..=3.min(sp.n));
        let g1 = sample::random_delta0(&mut rng, sp.p);
        let g2 = sample::random_delta0(&mut rng, sp.p);
        if i % 2 == 0 {
            let w = sample::random_weight(&mut rng, &ctx);
            let q = quotient_instance(&mut rng, &ctx, 1, k, |r| Ok(sample::random_integral(r, &ctx)))?;
            t.run(
                || format!("instance {i} over Q_p, k={k}"),
                || {
                    let lhs = act_on_quotient(&(&g1 * &g2), &q, &w)?;
                    let rhs = act_on_quotient(&g1, &act_on_quotient(&g2, &q, &w)?, &w)?;
                    Ok((lhs == rhs, None))
                },
            );
        } else {
            let q = quotient_instance(&mut rng, &ring, 1, k, |r| sample::random_iwasawa(r, &ring))?;
            t.run(
                || format!("instance {i} over the Iwasawa ring, k={k}"),
                || {
                    let lhs = act_on_quotient(&(&g1 * &g2), &q, &wf)?;
                    let rhs = act_on_quotient(&g1, &act_on_quotient(&g2, &q, &wf)?, &wf)?;
                    Ok((lhs == rhs, None))
                },
            );
        }
    }
    Ok(t.finish())
}

/// Matrices congruent to `1` modulo `p^{s+k}` act trivially on `D/Fil^k`.
pub fn deep_level_triviality(sp: SuiteParams) -> Result<SuiteResult> {
    let ctx = sp.ctx()?;
    let mut rng = sp.rng(5);
    let mut t = Tally::new("deep-level-triviality", "K(p^(s+k)) acts trivially on D/Fil^k, k <= 3");
    let s = 1;
    for i in 0..sp.instances {
        let k = 1 + (i as u32 % 3.min(sp.n));
        let w = sample::random_weight(&mut rng, &ctx);
        let g = sample::random_deep(&mut rng, sp.p, s + k);
        let q = quotient_instance(&mut rng, &ctx, s, k, |r| Ok(sample::random_integral(r, &ctx)))?;
        t.run(
            || format!("instance {i}, k={k}, γ={g}"),
            || Ok((act_on_quotient(&g, &q, &w)? == q, None)),
        );
    }
    Ok(t.finish())
}

/// `i_k(γμ) = γ·_k i_k(μ)`.
pub fn integration_equivariance(sp: SuiteParams, kmax: u32) -> Result<SuiteResult> {
    let ctx = sp.ctx()?;
    let mut rng = sp.rng(6);
    let mut t = Tally::new("integration-equivariance", "i_k(γμ) = γ·_k i_k(μ): integration is Δ0(p)-equivariant");
    let s = 1;
    let len = sp.p as usize * (sp.n as usize + kmax as usize);
    for i in 0..sp.instances {
        let mu = sample::random_scalar_distribution(&mut rng, &ctx, s, len);
        let g = sample::random_delta0(&mut rng, sp.p);
        for k in 2..=kmax {
            let w = integer_weight(k as i64, &ctx);
            t.run(
                || format!("instance {i}, k={k}, γ={g}"),
                || {
                    let lhs = integrate_k(&act_left(&g, &mu, &w)?, k)?;
                    let rhs = lk_act(&g, &integrate_k(&mu, k)?)?;
                    let prec = lhs.precision().min(rhs.precision());
                    Ok((lhs.agreement(&rhs) >= prec, Some(prec)))
                },
            );
        }
    }
    Ok(t.finish())
}

fn random_period(rng: &mut SuiteRng, ctx: &PadicContext, radius: u32) -> Result<PeriodPoint> {
    let z = sample::random_integral(rng, ctx).mul_exact_int(&BigInt::from(ctx.p()));
    PeriodPoint::new(z, Ratio::from_integer(radius as i64))
}

/// `β(γμ ⊗ f)(𝔷) = χ(b𝔷+d)·β(μ ⊗ f)(𝔷·γ)`.
pub fn es_equivariance(sp: SuiteParams) -> Result<SuiteResult> {
    let ctx = sp.ctx()?;
    let mut rng = sp.rng(7);
    let mut t = Tally::new("es-equivariance", "μ⊗f ↦ μ(χ(1+𝔷x))·f is equivariant up to χ(b𝔷+d)");
    for i in 0..sp.instances {
        let w = sample::random_weight(&mut rng, &ctx);
        let s = 1 + w.s_min();
        let len = (sp.p as usize).pow(s) * (sp.n as usize + 2);
        let mu = sample::random_scalar_distribution(&mut rng, &ctx, s, len);
        let g = sample::random_k0(&mut rng, sp.p);
        let z = random_period(&mut rng, &ctx, s)?;
        let f = sample::random_integral(&mut rng, &ctx);
        t.run(
            || format!("instance {i}, γ={g}"),
            || {
                let out = es_equivariance_check(&w, &mu, &g, &z, &f)?;
                Ok((out.pass && out.precision >= sp.n as i64 - ES_SLACK, Some(out.precision)))
            },
        );
    }
    Ok(t.finish())
}

/// `μ(χ_k(1+𝔷x)) = Σ_i C(k-2, i) μ(x^i) 𝔷^i`.
pub fn factorization(sp: SuiteParams, kmax: u32) -> Result<SuiteResult> {
    let ctx = sp.ctx()?;
    let mut rng = sp.rng(8);
    let mut t = Tally::new("factorization-weight-k", "for k >= 2 the kernel factors through X^i ↦ 𝔷^i");
    let s = 1;
    let len = sp.p as usize * (sp.n as usize + 2);
    for i in 0..sp.instances {
        let mu = sample::random_scalar_distribution(&mut rng, &ctx, s, len);
        let z = random_period(&mut rng, &ctx, 1)?;
        let k = 2 + (i as u32 % (kmax - 1));
        t.run(
            || format!("instance {i}, k={k}"),
            || {
                let out = factor_weight_k_check(&mu, k, &z)?;
                Ok((out.pass, Some(out.precision)))
            },
        );
    }
    Ok(t.finish())
}

/// Newton polygons, slope factorizations and projectors on matrices with
/// prescribed eigenvalue valuations.
pub fn slope_machinery(sp: SuiteParams, max_dim: usize) -> Result<SuiteResult> {
    let ctx = sp.ctx()?;
    let mut rng = sp.rng(9);
    let mut t = Tally::new("slope-machinery", "Newton polygon = eigenvalue valuations; slope <= h splitting iff h adapted");
    for i in 0..sp.instances {
        let (m, slopes) = sample::prescribed_matrix(&mut rng, sp.p, max_dim);
        let pick = rng.gen_range(0..slopes.len());
        t.run(
            || format!("instance {i}, slopes {}", render_slopes(&slopes)),
            || {
                let mq = PadicMatrix::from_bigints(&ctx, &m)?;
                let f = fredholm_det(&mq)?;
                let poly = newton_polygon(&f)?;
                if poly.slope_multiset() != slopes {
                    return Ok((false, None));
                }
                let mut distinct = slopes.clone();
                distinct.dedup();
                // an adapted h between two consecutive distinct slopes (or above all)
                let j = distinct.iter().position(|s| *s == slopes[pick]).unwrap_or(0);
                let h = match distinct.get(j + 1) {
                    Some(next) => (distinct[j] + next) / Ratio::from_integer(2),
                    None => distinct[j] + Ratio::new(1, 2),
                };
                let rank = slopes.iter().filter(|s| **s <= h).count();
                let dec = slope_decompose(&mq, h)?;
                let e = &dec.projector;
                let idem = e.mul(e).agreement(e) >= dec.precision;
                let comm = e.mul(&mq).agreement(&mq.mul(e)) >= dec.precision;
                let (q, s) = slope_factor(&f, h)?;
                let split = newton_polygon(&q)?.slope_multiset() == slopes[..rank]
                    && newton_polygon(&s)?.slope_multiset() == slopes[rank..];
                // every slope value is non-adapted
                let refused = distinct.iter().all(|sigma| {
                    matches!(slope_factor(&f, *sigma), Err(Error::NotAdapted { .. }))
                        && matches!(slope_decompose(&mq, *sigma), Err(Error::NotAdapted { .. }))
                });
                Ok((dec.rank == rank && idem && comm && split && refused, Some(dec.precision)))
            },
        );
    }
    Ok(t.finish())
}

fn render_slopes(s: &[Ratio<i64>]) -> String {
    s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// `det(1 - MT)` commutes with specialization of an Iwasawa family.
pub fn family_specialization(sp: SuiteParams) -> Result<SuiteResult> {
    let ctx = sp.ctx()?;
    let mut rng = sp.rng(10);
    let mut t = Tally::new("family-specialization", "Fredholm series of a family specialize to those of its members");
    for i in 0..sp.instances {
        let vars = 1 + (i % 2) as u32;
        let ring = IwasawaRing::new(&ctx, vars, 4)?;
        let m = sample::random_family(&mut rng, &ring, 3)?;
        let point = sample::random_point(&mut rng, &ctx, vars as usize);
        t.run(
            || format!("instance {i} ({vars} variables)"),
            || {
                let via_family = fredholm_det(&m)?.specialize(&point)?;
                let direct = fredholm_det(&specialize_family(&m, &point)?)?;
                let prec = via_family.comparison_precision(&direct);
                Ok((via_family.agreement(&direct) >= prec, Some(prec)))
            },
        );
    }
    Ok(t.finish())
}

/// `A_{u·μ} = (1+T)^a A_μ` for the translation `u = (1 a; 0 1)`.
pub fn amice_transform_translation(sp: SuiteParams) -> Result<SuiteResult> {
    let ctx = sp.ctx()?;
    let mut rng = sp.rng(11);
    let mut t = Tally::new("amice-transform", "A_(u·μ)(T) = (1+T)^a A_μ(T) for u = (1 a; 0 1)");
    let s = 1;
    let len = sp.p as usize * (sp.n as usize + 1);
    let w = integer_weight(2, &ctx);
    for i in 0..sp.instances {
        let mu = sample::random_scalar_distribution(&mut rng, &ctx, s, len);
        let a = sample::random_int(&mut rng, 50);
        t.run(
            || format!("instance {i}, a={a}"),
            || {
                let moved = act_left(&sample::translation(&a), &mu, &w)?;
                let lhs = amice_transform(&moved, len)?;
                let rhs = series_mul(&one_plus_t_pow(&ctx, &a, len)?, &amice_transform(&mu, len)?, len);
                let (ok, prec) = agree_all(&lhs, &rhs);
                Ok((ok, Some(prec)))
            },
        );
    }
    Ok(t.finish())
}

/// The degree recurrence agrees with `1 - p^{-n}`.
pub fn degree_recurrence(p: u32, nmax: u32) -> Result<SuiteResult> {
    let mut t = Tally::new("degree-recurrence", "δ'_(n+1) = (p-1)/p + δ'_n/p equals 1 - p^(-n)");
    for n in 1..=nmax {
        t.run(
            || format!("n={n}"),
            || Ok((canonical_degree_bound(n, p)? == canonical_degree_closed_form(n, p), None)),
        );
    }
    Ok(t.finish())
}

/// `- ⊗̂ M` preserves exactness on finite p-groups.
pub fn tensor_exactness(p: u32, max_len: u32, max_labels: usize) -> Result<SuiteResult> {
    let mut t = Tally::new("mixed-tensor-exactness", "X ↦ X ⊗̂ M is exact for M with a pseudobasis");
    for labels in 1..=max_labels {
        let report = check_tensor_exactness(p, max_len, &PseudobasisModule::flat(labels));
        t.result.instances += report.sequences;
        if report.failures > 0 {
            t.result.failures += report.failures - 1;
            t.fail(format!("{} of {} sequences fail with |I|={labels}", report.failures, report.sequences));
        }
    }
    Ok(t.finish())
}

/// `|D/Fil^k|` against the census `Σ_j length(R/a^{max(0, k - v(λ_j))})`, and the exponent.
pub fn filtration_census(sp: SuiteParams, kmax: u32) -> Result<SuiteResult> {
    let ctx = sp.ctx()?;
    let mut rng = sp.rng(12);
    let mut t = Tally::new("filtration-finiteness", "D/Fil^k is finite abelian of exponent p^k");
    for s in 1..=2u32 {
        for k in 1..=kmax.min(sp.n) {
            census_case(&mut t, &mut rng, &ctx, s, k, "Q_p", |r| Ok(sample::random_integral(r, &ctx)))?;
            for vars in 1..=2 {
                let ring = IwasawaRing::new(&ctx, vars, k)?;
                census_case(&mut t, &mut rng, &ring, s, k, if vars == 1 { "Λ[T]" } else { "Λ[T1,T2]" }, |r| {
                    sample::random_iwasawa(r, &ring)
                })?;
            }
        }
    }
    Ok(t.finish())
}

fn census_case<R: Ring>(
    t: &mut Tally,
    rng: &mut SuiteRng,
    params: &R::Params,
    s: u32,
    k: u32,
    label: &str,
    sample_elt: impl Fn(&mut SuiteRng) -> Result<R>,
) -> Result<()> {
    let p = params.context().p();
    // v(λ_j) from factorial valuations: λ_j = ⌊j/p^{s-1}⌋! / ⌊j/p^s⌋!
    let ps = (p as u64).pow(s);
    let census: u64 = (0..(k as u64 + 1) * ps)
        .map(|j| {
            let v = valp_factorial(j / (ps / p as u64), p) - valp_factorial(j / ps, p);
            let e = (k as i64 - v as i64).max(0) as u32;
            params.residue_length(e)
        })
        .sum();
    let q = quotient_instance(rng, params, s, k, sample_elt)?;
    let length = q.group_length();
    let pk = num_traits::pow(BigInt::from(p), k as usize);
    let killed = q.scale_int(&pk).is_zero();
    let first = FiniteDistribution::<R>::basis_element(params, s, k, 0)?;
    let sharp = !first.scale_int(&(pk / BigInt::from(p))).is_zero();
    t.check(length == census && q.exponent() == k && killed && sharp, None, || {
        format!("{label} s={s} k={k}: length {length} vs census {census}")
    });
    Ok(())
}

/// Every suite at the given prime, precision and seed.
pub fn run_all(p: u32, n: u32, seed: u64) -> Result<Vec<SuiteResult>> {
    let sp = |instances| SuiteParams { p, n, seed, instances };
    let labels = if p == 3 { 3 } else { 2 };
    Ok(vec![
        char_extension(sp(10), 10)?,
        amice_roundtrip(sp(20))?,
        right_action_associativity(sp(5))?,
        quotient_action_associativity(sp(10))?,
        deep_level_triviality(sp(9))?,
        integration_equivariance(sp(5), 8)?,
        es_equivariance(sp(5))?,
        factorization(sp(7), 8)?,
        slope_machinery(SuiteParams { n: n.max(48), ..sp(10) }, 8)?,
        family_specialization(sp(5))?,
        amice_transform_translation(sp(10))?,
        degree_recurrence(p, 30)?,
        tensor_exactness(p, 3, labels)?,
        filtration_census(sp(1), 3)?,
    ])
}

/// The report printed by `suite all`.
pub fn render_report(p: u32, n: u32, seed: u64, results: &[SuiteResult]) -> String {
    let mut out = format!("suite all  p={p} N={n} seed={seed} rng=ChaCha8\n");
    for r in results {
        out.push_str(&r.to_string());
        out.push('\n');
    }
    let failed = results.iter().filter(|r| !r.pass()).count();
    out.push_str(&format!("{} suites, {} failed\n", results.len(), failed));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn result_line_format() {
        let r = SuiteResult {
            name: "x",
            statement: "y",
            instances: 3,
            failures: 0,
            min_precision: Some(5),
            note: String::new(),
        };
        assert!(r.to_string().starts_with("PASS  x "));
        assert!(r.pass());
        
    }
}
