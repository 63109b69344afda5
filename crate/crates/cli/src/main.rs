//! `ocpadic`: batch command line over the p-adic library.
//!
//! Every report ends with the version line. `--out` receives the bare result
//! (a data file where one exists), stdout receives the report.

mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use ocpadic::analytic::amice_from_values;
use ocpadic::complex::{cohomology, instantiate, utilde_fredholm, BSComplexTemplate};
use ocpadic::distributions::{act_left, amice_transform, fil_quotient, integrate_k};
use ocpadic::eichler_shimura::{canonical_degree_bound, es_equivariance_check, es_kernel, factor_weight_k_check};
use ocpadic::fredholm::{
    fredholm_det, newton_polygon, parse_ratio, slope_decompose, slope_factor, specialize_family, PadicMatrix,
};
use ocpadic::suites::{self, SuiteParams};
use ocpadic::{
    integer_weight, AmiceFunction, Distribution, IwasawaRing, MonoidMatrix, PadicContext, PadicElement, PeriodPoint,
    Weight,
};
use serde_json::{json, Value};

use report::{error_report, write_out, CliError, CliResult, Report, EXIT_CHECK, EXIT_OK};

#[derive(Parser)]
#[command(name = "ocpadic", version, about = "Exact p-adic computations: weights, distributions, kernels, slopes")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Global {
    /// The prime p.
    #[arg(long, global = true, default_value_t = 3)]
    p: u32,
    /// Working precision N (digits).
    #[arg(long = "N", global = true, default_value_t = 20)]
    precision: u32,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Machine-readable JSON report.
    #[arg(long, global = true)]
    json: bool,
    /// Input file.
    #[arg(long = "in", global = true)]
    input: Option<PathBuf>,
    /// Output file for the result.
    #[arg(long = "out", global = true)]
    output: Option<PathBuf>,
}

/// The weight used by a command: an integer weight or a serialized weight file.
#[derive(Args, Clone)]
struct WeightArg {
    /// Integer weight k, i.e. z ↦ z^(k-2).
    #[arg(long = "weight-k", conflicts_with = "weight")]
    weight_k: Option<i64>,
    /// Weight file `{p, N, kind, t, c}`.
    #[arg(long)]
    weight: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Weight characters.
    #[command(subcommand)]
    Weight(WeightCmd),
    /// Locally analytic functions in the Amice basis.
    #[command(subcommand)]
    Amice(AmiceCmd),
    /// Distributions, their action and filtration quotients.
    #[command(subcommand)]
    Dist(DistCmd),
    /// The kernel μ ⊗ f ↦ μ(χ(1+𝔷x))·f.
    #[command(subcommand)]
    Es(EsCmd),
    /// Fredholm series, Newton polygons and slope decompositions.
    #[command(subcommand)]
    Fredholm(FredholmCmd),
    /// Finite complexes built from templates.
    #[command(subcommand)]
    Complex(ComplexCmd),
    /// Property suites.
    #[command(subcommand)]
    Suite(SuiteCmd),
}

#[derive(Subcommand)]
enum WeightCmd {
    /// χ(b) for a unit b.
    Extend {
        #[command(flatten)]
        weight: WeightArg,
        /// The unit b: an integer or a canonical scalar `p^v * m + O(p^n)`.
        #[arg(long)]
        b: String,
        /// Radius index s (defaults to s_min of the weight).
        #[arg(long)]
        s: Option<u32>,
    },
}

#[derive(Subcommand)]
enum AmiceCmd {
    /// Values at 0..J then back to coefficients; with no `--in`, a random function.
    Roundtrip {
        #[arg(long, default_value_t = 1)]
        s: u32,
        /// Length J of a random function.
        #[arg(long = "J")]
        len: Option<usize>,
    },
}

#[derive(Subcommand)]
enum DistCmd {
    /// γ·μ for the distribution in `--in`.
    Act {
        #[command(flatten)]
        weight: WeightArg,
        /// γ as `a,b,c,d`.
        #[arg(long, allow_hyphen_values = true)]
        gamma: String,
    },
    /// The weight-k polynomial ∫ (1 + Xx)^(k-2) dμ(x).
    Integrate {
        #[arg(long)]
        k: u32,
    },
    /// The image of μ in D/Fil^k.
    Fil {
        #[arg(long)]
        k: u32,
    },
    /// The Amice transform Σ μ(C(x, j)) T^j.
    AmiceTransform {
        #[arg(long)]
        len: Option<usize>,
    },
}

#[derive(Subcommand)]
enum EsCmd {
    /// μ(χ(1+𝔷x))·f for the distribution in `--in`.
    Kernel {
        #[command(flatten)]
        weight: WeightArg,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        /// Radius w of the period point, a rational `a/b`.
        #[arg(long, default_value = "1")]
        radius: String,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        f: String,
    },
    /// Equivariance of the kernel: explicit (`--in` with `--gamma`, `--z`) or seeded random instances.
    Equivariance {
        #[command(flatten)]
        weight: WeightArg,
        #[arg(long, allow_hyphen_values = true)]
        gamma: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
        #[arg(long, default_value = "1")]
        radius: String,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        f: String,
        /// Number of random instances.
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// The weight-k factorization X^i ↦ 𝔷^i: explicit (`--in`, `--z`) or seeded random instances.
    FactorK {
        #[arg(long)]
        k: u32,
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
        #[arg(long, default_value = "1")]
        radius: String,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// The degree bound δ'_n as an exact rational.
    DegreeBound {
        #[arg(long)]
        n: u32,
    },
}

#[derive(Subcommand)]
enum FredholmCmd {
    /// det(1 - MT) for the matrix in `--in` (JSON lines).
    Det,
    /// Newton polygon of det(1 - MT): `slope multiplicity` lines.
    Polygon,
    /// The slope <= h factorization of det(1 - MT).
    Factor {
        #[arg(long)]
        h: String,
    },
    /// The projector onto the slope <= h part.
    Decompose {
        #[arg(long)]
        h: String,
    },
    /// Specialize an Iwasawa-coefficient family at a point of pZ_p^vars.
    Specialize {
        #[arg(long, default_value_t = 1)]
        vars: u32,
        /// Truncation degree of the Iwasawa ring.
        #[arg(long, default_value_t = 4)]
        degree: u32,
        /// Coordinates, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
}

#[derive(Args, Clone)]
struct LevelArgs {
    #[command(flatten)]
    weight: WeightArg,
    /// Radius index s.
    #[arg(long, default_value_t = 1)]
    s: u32,
    /// Filtration level k.
    #[arg(long)]
    k: u32,
}

#[derive(Subcommand)]
enum ComplexCmd {
    /// Modules and differentials of the instantiated complex.
    Instantiate(LevelArgs),
    /// Cohomology groups as invariant factors.
    Cohomology(LevelArgs),
    /// det(1 - ŨT) on each cohomology group.
    Fredholm(LevelArgs),
}

#[derive(Subcommand)]
enum SuiteCmd {
    /// Every property suite, one line per suite.
    All,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = command_name(&cli.cmd);
    let g = cli.global.clone();
    let outcome = run(&cli);
    match outcome {
        Ok(report) => {
            print!("{}", report.render(g.json));
            if let Err(e) = write_out(&g.output, &report, g.json) {
                eprint!("{}", error_report(&name, &e, g.json));
                return ExitCode::from(e.status() as u8);
            }
            ExitCode::from(if report.pass { EXIT_OK } else { EXIT_CHECK } as u8)
        }
        Err(e) => {
            print!("{}", error_report(&name, &e, g.json));
            ExitCode::from(e.status() as u8)
        }
    }
}

fn command_name(cmd: &Cmd) -> String {
    let s = match cmd {
        Cmd::Weight(WeightCmd::Extend { .. }) => "weight extend",
        Cmd::Amice(AmiceCmd::Roundtrip { .. }) => "amice roundtrip",
        Cmd::Dist(DistCmd::Act { .. }) => "dist act",
        Cmd::Dist(DistCmd::Integrate { .. }) => "dist integrate",
        Cmd::Dist(DistCmd::Fil { .. }) => "dist fil",
        Cmd::Dist(DistCmd::AmiceTransform { .. }) => "dist amice-transform",
        Cmd::Es(EsCmd::Kernel { .. }) => "es kernel",
        Cmd::Es(EsCmd::Equivariance { .. }) => "es equivariance",
        Cmd::Es(EsCmd::FactorK { .. }) => "es factor-k",
        Cmd::Es(EsCmd::DegreeBound { .. }) => "es degree-bound",
        Cmd::Fredholm(FredholmCmd::Det) => "fredholm det",
        Cmd::Fredholm(FredholmCmd::Polygon) => "fredholm polygon",
        Cmd::Fredholm(FredholmCmd::Factor { .. }) => "fredholm factor",
        Cmd::Fredholm(FredholmCmd::Decompose { .. }) => "fredholm decompose",
        Cmd::Fredholm(FredholmCmd::Specialize { .. }) => "fredholm specialize",
        Cmd::Complex(ComplexCmd::Instantiate(_)) => "complex instantiate",
        Cmd::Complex(ComplexCmd::Cohomology(_)) => "complex cohomology",
        Cmd::Complex(ComplexCmd::Fredholm(_)) => "complex fredholm",
        Cmd::Suite(SuiteCmd::All) => "suite all",
    };
    s.to_string()
}

fn run(cli: &Cli) -> CliResult<Report> {
    let g = &cli.global;
    let name = command_name(&cli.cmd);
    match &cli.cmd {
        Cmd::Weight(WeightCmd::Extend { weight, b, s }) => {
            let ctx = context(g)?;
            let w = load_weight(weight, &ctx)?;
            let b = parse_scalar(&ctx, b)?;
            let s = s.unwrap_or(w.s_min());
            let v = w.char_extend(&b, s)?;
            Ok(Report::new(&name)
                .line(v.to_string())
                .json(json!({"b": b.to_string(), "s": s, "value": v.to_string()})))
        }
        Cmd::Amice(AmiceCmd::Roundtrip { s, len }) => amice_roundtrip(g, &name, *s, *len),
        Cmd::Dist(cmd) => dist(g, &name, cmd),
        Cmd::Es(cmd) => es(g, &name, cmd),
        Cmd::Fredholm(cmd) => fredholm(g, &name, cmd),
        Cmd::Complex(cmd) => complex(g, &name, cmd),
        Cmd::Suite(SuiteCmd::All) => {
            let results = suites::run_all(g.p, g.precision, g.seed)?;
            let pass = results.iter().all(|r| r.pass());
            Ok(Report::new(&name)
                .text(&suites::render_report(g.p, g.precision, g.seed, &results))
                .json(json!({
                    "p": g.p, "N": g.precision, "seed": g.seed, "rng": "ChaCha8",
                    "suites": serde_json::to_value(&results).expect("suite results serialize"),
                }))
                .pass(pass))
        }
    }
}

fn context(g: &Global) -> CliResult<PadicContext> {
    Ok(PadicContext::new(g.p, g.precision)?)
}

fn read_input(g: &Global) -> CliResult<String> {
    let path = g.input.as_ref().ok_or_else(|| CliError::Input("this command needs --in <path>".into()))?;
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn read_json(g: &Global) -> CliResult<Value> {
    let text = read_input(g)?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("invalid JSON input: {e}")))
}

fn parse_scalar(ctx: &PadicContext, s: &str) -> CliResult<PadicElement> {
    if s.contains("O(") {
        Ok(PadicElement::parse(ctx, s)?)
    } else {
        let n: BigInt = s
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("`{s}` is neither an integer nor a canonical p-adic scalar")))?;
        Ok(PadicElement::from_int(ctx, n))
    }
}

fn parse_gamma(s: &str) -> CliResult<MonoidMatrix> {
    let parts: Vec<BigInt> = s
        .split(',')
        .map(|x| x.trim().parse::<BigInt>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Input(format!("γ must be `a,b,c,d` with integer entries, got `{s}`")))?;
    let [a, b, c, d]: [BigInt; 4] = parts
        .try_into()
        .map_err(|_| CliError::Input(format!("γ must have four entries, got `{s}`")))?;
    Ok(MonoidMatrix::new(a, b, c, d)?)
}

fn load_weight(arg: &WeightArg, ctx: &PadicContext) -> CliResult<Weight<PadicElement>> {
    match (&arg.weight_k, &arg.weight) {
        (Some(k), _) => Ok(integer_weight(*k, ctx)),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
            let v: Value = serde_json::from_str(&text).map_err(|e| CliError::Input(format!("invalid weight JSON: {e}")))?;
            Ok(Weight::from_json(ctx, &v)?)
        }
        (None, None) => Err(CliError::Input("give a weight with --weight-k <k> or --weight <path>".into())),
    }
}

fn period_point(ctx: &PadicContext, z: &str, radius: &str) -> CliResult<PeriodPoint> {
    Ok(PeriodPoint::new(parse_scalar(ctx, z)?, parse_ratio(radius)?)?)
}

fn load_dist(g: &Global, ctx: &PadicContext) -> CliResult<Distribution<PadicElement>> {
    Ok(Distribution::from_json(ctx, &read_json(g)?)?)
}

fn amice_roundtrip(g: &Global, name: &str, s: u32, len: Option<usize>) -> CliResult<Report> {
    let ctx = context(g)?;
    let f = match &g.input {
        Some(_) => AmiceFunction::from_json(&ctx, &read_json(g)?)?,
        None => {
            let mut rng = ocpadic::sample::rng(g.seed, 2);
            let len = len.unwrap_or(3 * g.p as usize);
            let coeffs = (0..len).map(|_| ocpadic::sample::random_integral(&mut rng, &ctx)).collect();
            AmiceFunction::from_coefficients(&ctx, s, coeffs)
        }
    };
    let values = f.values()?;
    let back = amice_from_values(&ctx, &values, f.s(), None)?;
    let again = back.values()?;
    let precision = values
        .iter()
        .zip(&again)
        .map(|(a, b)| a.precision().min(b.precision()))
        .min()
        .unwrap_or(g.precision as i64);
    let agree = values.iter().zip(&again).all(|(a, b)| a.agreement(b) >= a.precision().min(b.precision()));
    let integral = back.is_integral();
    let pass = agree && integral && again.len() == values.len();
    Ok(Report::new(name)
        .line(format!("J = {}  s = {}", values.len(), f.s()))
        .line(format!("values round-trip: {}", if agree { "yes" } else { "NO" }))
        .line(format!("coefficients integral: {}", if integral { "yes" } else { "NO" }))
        .line(format!("certified precision: {precision}"))
        .json(json!({"J": values.len(), "s": f.s(), "roundtrip": agree, "integral": integral, "precision": precision}))
        .data(format!("{}\n", back.to_json()))
        .pass(pass))
}

fn dist(g: &Global, name: &str, cmd: &DistCmd) -> CliResult<Report> {
    let ctx = context(g)?;
    let mu = load_dist(g, &ctx)?;
    match cmd {
        DistCmd::Act { weight, gamma } => {
            let w = load_weight(weight, &ctx)?;
            let out = act_left(&parse_gamma(gamma)?, &mu, &w)?;
            let v = out.to_json();
            Ok(Report::new(name).line(v.to_string()).json(v.clone()).data(format!("{v}\n")))
        }
        DistCmd::Integrate { k } => {
            let poly = integrate_k(&mu, *k)?;
            let mut r = Report::new(name);
            for (i, c) in poly.coeffs.iter().enumerate() {
                r = r.line(format!("X^{i}: {c}"));
            }
            Ok(r.json(poly.to_json()))
        }
        DistCmd::Fil { k } => {
            let q = fil_quotient(&mu, *k)?;
            let v = q.to_json();
            Ok(Report::new(name)
                .line(format!("length {}  exponent {}", q.group_length(), q.exponent()))
                .line(v.to_string())
                .json(json!({"length": q.group_length(), "exponent": q.exponent(), "quotient": v}))
                .data(format!("{v}\n")))
        }
        DistCmd::AmiceTransform { len } => {
            let series = amice_transform(&mu, len.unwrap_or(mu.len()))?;
            let mut r = Report::new(name);
            for (i, c) in series.iter().enumerate() {
                r = r.line(format!("T^{i}: {c}"));
            }
            Ok(r.json(json!(series.iter().map(|c| c.to_string()).collect::<Vec<_>>())))
        }
    }
}

fn suite_params(g: &Global, instances: usize) -> SuiteParams {
    SuiteParams {
        p: g.p,
        n: g.precision,
        seed: g.seed,
        instances,
    }
}

fn suite_report(name: &str, g: &Global, r: suites::SuiteResult) -> Report {
    let pass = r.pass();
    Report::new(name)
        .line(format!("p={} N={} seed={} rng=ChaCha8", g.p, g.precision, g.seed))
        .line(r.to_string())
        .json(serde_json::to_value(&r).expect("suite results serialize"))
        .pass(pass)
}

fn es(g: &Global, name: &str, cmd: &EsCmd) -> CliResult<Report> {
    match cmd {
        EsCmd::DegreeBound { n } => {
            let r = canonical_degree_bound(*n, g.p)?;
            Ok(Report::new(name).line(r.to_string()).json(json!(r.to_string())))
        }
        EsCmd::Kernel { weight, z, radius, f } => {
            let ctx = context(g)?;
            let w = load_weight(weight, &ctx)?;
            let mu = load_dist(g, &ctx)?;
            let z = period_point(&ctx, z, radius)?;
            let v = es_kernel(&w, &mu, &z, &parse_scalar(&ctx, f)?)?;
            Ok(Report::new(name).line(v.to_string()).json(json!(v.to_string())))
        }
        EsCmd::Equivariance { weight, gamma, z, radius, f, count } => {
            if g.input.is_none() {
                return Ok(suite_report(name, g, suites::es_equivariance(suite_params(g, *count))?));
            }
            let ctx = context(g)?;
            let w = load_weight(weight, &ctx)?;
            let mu = load_dist(g, &ctx)?;
            let gamma = parse_gamma(gamma.as_deref().ok_or_else(|| CliError::Input("--gamma is required with --in".into()))?)?;
            let z = period_point(&ctx, z.as_deref().ok_or_else(|| CliError::Input("--z is required with --in".into()))?, radius)?;
            let out = es_equivariance_check(&w, &mu, &gamma, &z, &parse_scalar(&ctx, f)?)?;
            Ok(check_report(name, out.pass, out.precision))
        }
        EsCmd::FactorK { k, z, radius, count } => {
            if g.input.is_none() {
                return Ok(suite_report(name, g, suites::factorization(suite_params(g, *count), (*k).max(2))?));
            }
            let ctx = context(g)?;
            let mu = load_dist(g, &ctx)?;
            let z = period_point(&ctx, z.as_deref().ok_or_else(|| CliError::Input("--z is required with --in".into()))?, radius)?;
            let out = factor_weight_k_check(&mu, *k, &z)?;
            Ok(check_report(name, out.pass, out.precision))
        }
    }
}

fn check_report(name: &str, pass: bool, precision: i64) -> Report {
    Report::new(name)
        .line(format!("{}  certified precision {precision}", if pass { "PASS" } else { "FAIL" }))
        .json(json!({"pass": pass, "precision": precision}))
        .pass(pass)
}

fn load_matrix(g: &Global) -> CliResult<PadicMatrix<PadicElement>> {
    let ctx = context(g)?;
    Ok(PadicMatrix::from_json_lines(&ctx, &read_input(g)?)?)
}

fn series_json(f: &ocpadic::fredholm::FredholmSeries<PadicElement>) -> Value {
    json!({
        "coefficients": f.coefficients().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "trimmed": f.trimmed(),
    })
}

fn fredholm(g: &Global, name: &str, cmd: &FredholmCmd) -> CliResult<Report> {
    match cmd {
        FredholmCmd::Det => {
            let f = fredholm_det(&load_matrix(g)?)?;
            Ok(Report::new(name).text(&f.render()).json(series_json(&f)).data(format!("{}\n", f.render())))
        }
        FredholmCmd::Polygon => {
            let f = fredholm_det(&load_matrix(g)?)?;
            let poly = newton_polygon(&f)?;
            let text = poly.to_string();
            let segs: Vec<Value> = poly
                .segments
                .iter()
                .map(|(s, m)| json!({"slope": s.to_string(), "multiplicity": m}))
                .collect();
            Ok(Report::new(name).text(&text).json(json!(segs)).data(text))
        }
        FredholmCmd::Factor { h } => {
            let h = parse_ratio(h)?;
            let f = fredholm_det(&load_matrix(g)?)?;
            let (q, s) = slope_factor(&f, h)?;
            Ok(Report::new(name)
                .line(format!("Q (slopes <= {h}):"))
                .text(&q.render())
                .line(format!("S (slopes > {h}):"))
                .text(&s.render())
                .json(json!({"h": h.to_string(), "Q": series_json(&q), "S": series_json(&s)})))
        }
        FredholmCmd::Decompose { h } => {
            let h = parse_ratio(h)?;
            let m = load_matrix(g)?;
            let d = slope_decompose(&m, h)?;
            let lines = d.projector.to_json_lines();
            let basis: Vec<Vec<String>> = d.basis.iter().map(|v| v.iter().map(|x| x.to_string()).collect()).collect();
            Ok(Report::new(name)
                .line(format!("rank {}  certified precision {}", d.rank, d.precision))
                .line("projector:")
                .text(&lines)
                .json(json!({"h": h.to_string(), "rank": d.rank, "precision": d.precision, "projector": lines.lines().collect::<Vec<_>>(), "basis": basis}))
                .data(lines))
        }
        FredholmCmd::Specialize { vars, degree, point } => {
            let ctx = context(g)?;
            let ring = IwasawaRing::new(&ctx, *vars, *degree)?;
            let m = PadicMatrix::from_json_lines(&ring, &read_input(g)?)?;
            let pt = point
                .split(',')
                .map(|x| parse_scalar(&ctx, x))
                .collect::<CliResult<Vec<_>>>()?;
            let sm = specialize_family(&m, &pt)?;
            let via_family = fredholm_det(&m)?.specialize(&pt)?;
            let direct = fredholm_det(&sm)?;
            let prec = via_family.comparison_precision(&direct);
            let agree = via_family.agreement(&direct) >= prec;
            Ok(Report::new(name)
                .line("specialized matrix:")
                .text(&sm.to_json_lines())
                .line("det(1 - M_t T):")
                .text(&direct.render())
                .line(format!(
                    "specialization of the family series agrees: {} (precision {prec})",
                    if agree { "yes" } else { "NO" }
                ))
                .json(json!({"matrix": sm.to_json_lines().lines().collect::<Vec<_>>(), "series": series_json(&direct), "agrees": agree, "precision": prec}))
                .data(sm.to_json_lines())
                .pass(agree))
        }
    }
}

fn complex(g: &Global, name: &str, cmd: &ComplexCmd) -> CliResult<Report> {
    let ctx = context(g)?;
    let template = BSComplexTemplate::from_json(&read_json(g)?)?;
    let args = match cmd {
        ComplexCmd::Instantiate(a) | ComplexCmd::Cohomology(a) | ComplexCmd::Fredholm(a) => a,
    };
    let w = if args.weight.weight_k.is_none() && args.weight.weight.is_none() {
        integer_weight(2, &ctx)
    } else {
        load_weight(&args.weight, &ctx)?
    };
    let c = instantiate(&template, &w, args.s, args.k)?;
    match cmd {
        ComplexCmd::Instantiate(_) => {
            let mut r = Report::new(name);
            for (i, m) in c.modules.iter().enumerate() {
                r = r.line(format!("C^{i}: {} generators, length {}", m.rank(), m.length()));
            }
            for (i, d) in c.differentials.iter().enumerate() {
                r = r.line(format!("d^{i}: {} x {}", d.len(), d.first().map_or(0, Vec::len)));
            }
            r = r.line(format!("euler characteristic (lengths): {}", c.euler_characteristic()));
            let j = json!({
                "modules": c.modules.iter().map(|m| &m.exponents).collect::<Vec<_>>(),
                "differentials": c.differentials.iter().map(|d| d.iter().map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "euler_characteristic": c.euler_characteristic(),
            });
            Ok(r.json(j))
        }
        ComplexCmd::Cohomology(_) => {
            let hs = cohomology(&c)?;
            let mut r = Report::new(name);
            for h in &hs {
                r = r.line(format!("H^{}: {}", h.degree, render_factors(g.p, &h.invariant_factors)));
            }
            Ok(r.json(json!(hs
                .iter()
                .map(|h| json!({"degree": h.degree, "invariant_factors": h.invariant_factors, "length": h.length()}))
                .collect::<Vec<_>>())))
        }
        ComplexCmd::Fredholm(_) => {
            let us = utilde_fredholm(&c)?;
            let mut r = Report::new(name);
            let mut js = Vec::new();
            for u in &us {
                r = r.line(format!(
                    "H^{} = {}  (mod p^{})",
                    u.degree,
                    render_factors(g.p, &u.invariant_factors),
                    u.precision
                ));
                r = r.text(&u.series.render());
                js.push(json!({"degree": u.degree, "invariant_factors": u.invariant_factors, "precision": u.precision, "series": series_json(&u.series)}));
            }
            Ok(r.json(json!(js)))
        }
    }
}

fn render_factors(p: u32, e: &[u32]) -> String {
    let live: Vec<String> = e.iter().filter(|&&x| x > 0).map(|x| format!("Z/{p}^{x}")).collect();
    if live.is_empty() {
        "0".into()
    } else {
        live.join(" + ")
    }
}
