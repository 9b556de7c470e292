//! pelastica: p-elliptic special functions, classification of planar
//! p-elasticae, closed-form curve tracing, closed-solution construction,
//! and a numerical verification suite.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 domain/data error.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pelastica::classify::{
    classify, curvature_of, regularity, sech_amplitude, Family, FlatCoreHint, FlatCoreSpec,
    InitialData, Potential, SolutionClass,
};
use pelastica::curves::{
    closure_check, figure_eight, qstar, trace_canonical, trace_class, trace_flatcore,
    CurveSample, Trace, TraceModel,
};
use pelastica::elliptic::{self, AmplitudeKind, IntegralKind, Modulus};
use pelastica::verify::{
    self, conservation_drift, exponent_probe, first_variation, strong_residual, weak_residual,
    ProbeSide, TestFunction, VectorBump, VerifyReport,
};
use pelastica::Error;

#[derive(Parser)]
#[command(
    name = "pelastica",
    about = "Planar p-elastica toolkit",
    version,
    max_term_width = 100
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a p-elliptic integral or function at one point
    Eval {
        /// One of F1|F2|E1|E2|am1|am2|sn|cn|dn|sech|tanh
        #[arg(long = "fn")]
        function: String,
        #[arg(long)]
        p: f64,
        /// Modulus in [0,1]; required except for sech/tanh
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        x: f64,
    },
    /// Classify curvature initial data into its solution family
    Classify {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        lambda: f64,
        /// w(0) for w = |k|^{p-2} k
        #[arg(long)]
        w0: f64,
        /// w'(0)
        #[arg(long)]
        wdot0: f64,
        /// JSON file {"N":., "signs":[..], "lengths":[..]} resolving the
        /// p > 2 flat-core ambiguity / fixing the loop layout
        #[arg(long = "flatcore-spec")]
        flatcore_spec: Option<PathBuf>,
    },
    /// Sample a family profile as CSV or SVG
    Trace {
        #[arg(long)]
        family: String,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: Option<f64>,
        /// flat-core layout file (family = flatcore)
        #[arg(long)]
        spec: Option<PathBuf>,
        /// arclength range A:B (ignored for flatcore, which spans its
        /// full assembly)
        #[arg(long)]
        range: Option<String>,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
        out: OutFormat,
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Construct a closed solution and report its closure diagnostics
    Closed {
        #[arg(long)]
        p: f64,
        #[arg(long = "n-fold")]
        n_fold: u32,
        #[arg(long, value_enum, default_value_t = ClosedFamily::Eight)]
        family: ClosedFamily,
        /// samples along the trace
        #[arg(long, default_value_t = 257)]
        n: usize,
        #[arg(long, value_enum)]
        out: Option<OutFormat>,
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Special values: figure-eight modulus, complete integrals, regularity
    Special {
        #[arg(long)]
        p: f64,
        /// qstar|kp1|K1|K2|E1c|E2c|regularity
        #[arg(long)]
        what: String,
        #[arg(long)]
        q: Option<f64>,
        /// family for --what regularity
        #[arg(long, default_value = "wavelike")]
        family: String,
        /// whether the curvature vanishes in the interior (regularity)
        #[arg(long = "interior-zero", default_value_t = false)]
        interior_zero: bool,
    },
    /// Run verification suites; exits 1 on any failed check
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long)]
        p: f64,
        /// RNG seed for the randomized test-function supports
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// verify a previously written trace CSV instead of the built-in
        /// family battery (requires --lambda)
        #[arg(long)]
        trace: Option<PathBuf>,
        /// multiplier for --trace verification
        #[arg(long)]
        lambda: Option<f64>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Csv,
    Svg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ClosedFamily {
    Eight,
    Circle,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    All,
    Weak,
    Strong,
    Conserve,
    Variation,
    Exponent,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Domain(_) | Error::Ambiguity(_) => ExitCode::from(3),
                _ => ExitCode::from(3),
            }
        }
    }
}

fn env_tol() -> Option<f64> {
    std::env::var("PELASTICA_TOL").ok()?.parse().ok()
}

fn need_q(q: Option<f64>) -> Result<Modulus, Error> {
    match q {
        Some(v) => Modulus::new(v),
        None => Err(Error::Domain("this function requires --q".to_string())),
    }
}

fn run(cmd: Command) -> Result<ExitCode, Error> {
    match cmd {
        Command::Eval { function, p, q, x } => {
            let tol_i = env_tol().unwrap_or(pelastica::DEFAULT_INTEGRAL_TOL);
            let tol_a = env_tol().unwrap_or(pelastica::DEFAULT_INVERT_TOL);
            let value = match function.to_ascii_lowercase().as_str() {
                "f1" => elliptic::integral_with_tol(IntegralKind::F1, p, x, need_q(q)?, tol_i)?,
                "f2" => elliptic::integral_with_tol(IntegralKind::F2, p, x, need_q(q)?, tol_i)?,
                "e1" => elliptic::integral_with_tol(IntegralKind::E1, p, x, need_q(q)?, tol_i)?,
                "e2" => elliptic::integral_with_tol(IntegralKind::E2, p, x, need_q(q)?, tol_i)?,
                "am1" => {
                    elliptic::amplitude_with_tol(AmplitudeKind::First, p, x, need_q(q)?, tol_a)?
                }
                "am2" => {
                    elliptic::amplitude_with_tol(AmplitudeKind::Second, p, x, need_q(q)?, tol_a)?
                }
                "sn" => elliptic::sn_cn(p, x, need_q(q)?)?.0,
                "cn" => elliptic::sn_cn(p, x, need_q(q)?)?.1,
                "dn" => elliptic::dn(p, x, need_q(q)?)?,
                "sech" => elliptic::sech(p, x)?,
                "tanh" => elliptic::tanh(p, x)?,
                other => {
                    return Err(Error::Domain(format!("unknown function: {other}")));
                }
            };
            println!("{value}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Classify {
            p,
            lambda,
            w0,
            wdot0,
            flatcore_spec,
        } => {
            let hint = match flatcore_spec {
                Some(path) => Some(FlatCoreHint::Spec(load_spec(&path)?)),
                None => None,
            };
            let class = classify(p, lambda, InitialData::new(w0, wdot0), hint.as_ref())?;
            let mut value = serde_json::to_value(&class).expect("class serializes");
            if let Some(obj) = value.as_object_mut() {
                obj.insert("p".into(), p.into());
                obj.insert("lambda".into(), lambda.into());
            }
            println!("{value}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Trace {
            family,
            p,
            q,
            spec,
            range,
            n,
            out,
            file,
        } => {
            let family: Family = family.parse()?;
            let trace = if family == Family::FlatCore {
                let path = spec.ok_or_else(|| {
                    Error::Domain("flatcore traces require --spec FILE".to_string())
                })?;
                trace_flatcore(p, &load_spec(&path)?, n)?
            } else {
                let range = parse_range(range.as_deref().ok_or_else(|| {
                    Error::Domain("this family requires --range A:B".to_string())
                })?)?;
                trace_canonical(family, p, q, range, n)?
            };
            emit_trace(&trace, out, file.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Closed {
            p,
            n_fold,
            family,
            n,
            out,
            file,
        } => {
            let trace = match family {
                ClosedFamily::Eight => figure_eight(p, n_fold, 0.0, n)?,
                ClosedFamily::Circle => trace_canonical(
                    Family::Circular,
                    p,
                    None,
                    (0.0, 2.0 * std::f64::consts::PI * n_fold as f64),
                    n,
                )?,
            };
            let report = closure_check(&trace)?;
            println!("{}", serde_json::to_value(report).expect("report serializes"));
            if let Some(fmt) = out {
                emit_trace(&trace, fmt, file.as_deref())?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Special {
            p,
            what,
            q,
            family,
            interior_zero,
        } => {
            match what.to_ascii_lowercase().as_str() {
                "qstar" => println!("{}", qstar(p)?),
                "kp1" => println!("{}", elliptic::complete(IntegralKind::F1, p, Modulus::new(1.0)?)?),
                "k1" => println!("{}", elliptic::complete(IntegralKind::F1, p, need_q(q)?)?),
                "k2" => println!("{}", elliptic::complete(IntegralKind::F2, p, need_q(q)?)?),
                "e1c" => println!("{}", elliptic::complete(IntegralKind::E1, p, need_q(q)?)?),
                "e2c" => println!("{}", elliptic::complete(IntegralKind::E2, p, need_q(q)?)?),
                "regularity" => {
                    let report = regularity(p, family.parse()?, interior_zero)?;
                    println!("{}", serde_json::to_value(report).expect("report serializes"));
                }
                other => return Err(Error::Domain(format!("unknown special value: {other}"))),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            suite,
            p,
            seed,
            trace,
            lambda,
        } => {
            let reports = match trace {
                Some(path) => {
                    let lambda = lambda.ok_or_else(|| {
                        Error::Domain("--trace verification requires --lambda".to_string())
                    })?;
                    verify_sampled(&read_trace_csv(&path)?, p, lambda, seed, suite)?
                }
                None => battery(p, seed, suite)?,
            };
            println!(
                "{}",
                serde_json::to_string_pretty(&reports).expect("reports serialize")
            );
            if reports.iter().all(|r| r.pass) {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
    }
}

fn parse_range(text: &str) -> Result<(f64, f64), Error> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 2 {
        return Err(Error::Domain(format!("range must be A:B, got {text}")));
    }
    let a: f64 = parts[0]
        .parse()
        .map_err(|_| Error::Domain(format!("bad range start: {}", parts[0])))?;
    let b: f64 = parts[1]
        .parse()
        .map_err(|_| Error::Domain(format!("bad range end: {}", parts[1])))?;
    Ok((a, b))
}

fn load_spec(path: &std::path::Path) -> Result<FlatCoreSpec, Error> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Domain(format!("cannot read {}: {e}", path.display())))?;
    let spec: FlatCoreSpec = serde_json::from_str(&text)
        .map_err(|e| Error::Domain(format!("bad flat-core spec: {e}")))?;
    spec.validate()?;
    Ok(spec)
}

fn emit_trace(trace: &Trace, fmt: OutFormat, file: Option<&std::path::Path>) -> Result<(), Error> {
    let body = match fmt {
        OutFormat::Csv => to_csv(trace),
        OutFormat::Svg => to_svg(trace),
    };
    match file {
        Some(path) => fs::write(path, body)
            .map_err(|e| Error::Domain(format!("cannot write {}: {e}", path.display()))),
        None => {
            std::io::stdout()
                .write_all(body.as_bytes())
                .map_err(|e| Error::Domain(format!("stdout write failed: {e}")))
        }
    }
}

fn to_csv(trace: &Trace) -> String {
    let mut out = String::from("s,x,y,theta,k\n");
    for c in &trace.samples {
        out.push_str(&format!("{},{},{},{},{}\n", c.s, c.x, c.y, c.theta, c.k));
    }
    out
}

/// SVG polyline with the y-axis flipped to mathematical orientation and the
/// viewBox fitted to the curve with a small margin.
fn to_svg(trace: &Trace) -> String {
    let (mut min_x, mut max_x) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut min_y, mut max_y) = (f64::INFINITY, f64::NEG_INFINITY);
    for c in &trace.samples {
        min_x = min_x.min(c.x);
        max_x = max_x.max(c.x);
        min_y = min_y.min(c.y);
        max_y = max_y.max(c.y);
    }
    let w = (max_x - min_x).max(1e-9);
    let h = (max_y - min_y).max(1e-9);
    let pad = 0.05 * w.max(h);
    let stroke = 0.004 * w.max(h);
    let points: Vec<String> = trace
        .samples
        .iter()
        .map(|c| format!("{},{}", c.x, -c.y))
        .collect();
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n\
         <polyline fill=\"none\" stroke=\"black\" stroke-width=\"{}\" points=\"{}\"/>\n</svg>\n",
        min_x - pad,
        -max_y - pad,
        w + 2.0 * pad,
        h + 2.0 * pad,
        stroke,
        points.join(" ")
    )
}

fn read_trace_csv(path: &std::path::Path) -> Result<Trace, Error> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Domain(format!("cannot read {}: {e}", path.display())))?;
    let mut samples = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if i == 0 {
            if line.trim() != "s,x,y,theta,k" {
                return Err(Error::Domain(format!(
                    "expected header s,x,y,theta,k, got {line}"
                )));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<f64> = line
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| Error::Domain(format!("bad CSV row {i}: {e}")))?;
        if f.len() != 5 {
            return Err(Error::Domain(format!("row {i} has {} fields", f.len())));
        }
        samples.push(CurveSample {
            s: f[0],
            x: f[1],
            y: f[2],
            theta: f[3],
            k: f[4],
        });
    }
    if samples.len() < 5 {
        return Err(Error::Domain("trace CSV has fewer than 5 rows".to_string()));
    }
    Ok(Trace {
        model: TraceModel::Sampled,
        samples,
    })
}

fn wants(suite: Suite, which: Suite) -> bool {
    suite == Suite::All || suite == which
}

/// Built-in verification battery: the solution families at this p with their
/// matched multipliers.
fn battery(p: f64, seed: u64, suite: Suite) -> Result<Vec<VerifyReport>, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reports = Vec::new();

    let mut cases: Vec<(String, f64, SolutionClass, (f64, f64))> = vec![
        (
            "wavelike".into(),
            p,
            SolutionClass::Wavelike {
                a: 1.6,
                alpha: 1.0,
                beta: 0.0,
                q: 0.8,
            },
            (0.0, 6.0),
        ),
        (
            "orbitlike".into(),
            p,
            SolutionClass::Orbitlike {
                a: 2.0,
                alpha: 1.0,
                beta: 0.0,
                q: 0.65,
            },
            (0.0, 5.0),
        ),
        (
            "circular".into(),
            p,
            SolutionClass::Circular { k0: 1.2 },
            (0.0, 4.0),
        ),
    ];
    if p <= 2.0 {
        cases.push((
            "borderline".into(),
            p,
            SolutionClass::Borderline {
                sign: 1,
                beta: 0.0,
                a_pl: sech_amplitude(p, 2.0),
            },
            (-3.0, 3.0),
        ));
    } else {
        let a_pl = sech_amplitude(p, 2.0);
        let t_pl = elliptic::complete(IntegralKind::F1, p, Modulus::new(1.0)?)? / a_pl;
        let spec = FlatCoreSpec::new(vec![1, -1], vec![0.3, 0.8])?;
        let len = spec.total_length(t_pl);
        cases.push((
            "flatcore".into(),
            p,
            SolutionClass::FlatCore {
                spec,
                a_pl,
                t_pl,
                s1: 0.3 + t_pl,
            },
            (0.0, len),
        ));
    }

    for (name, p, class, range) in &cases {
        let lambda = class.lambda(*p);
        let length = range.1 - range.0;
        if wants(suite, Suite::Weak) {
            let phis: Vec<TestFunction> = (0..8)
                .map(|_| TestFunction::random(&mut rng, length))
                .collect();
            let k = |s: f64| {
                curvature_of(*p, class, s + range.0)
                    .map(|t| t.0)
                    .unwrap_or(f64::NAN)
            };
            let mut r = weak_residual(k, *p, lambda, &phis, length)?;
            r.name = format!("weak_residual:{name}");
            reports.push(r);
        }
        if wants(suite, Suite::Strong) {
            // the convergence-order study needs four continuous derivatives
            // of w; run it away from the points where w loses them (wavelike
            // curvature zeros when p > 2, flat-core loop edges when p > 3)
            let strong_range = if name == "wavelike" && *p > 2.0 {
                let k1 = elliptic::complete(IntegralKind::F1, *p, Modulus::new(0.8)?)?;
                (-0.85 * k1, 0.85 * k1)
            } else if name == "flatcore" && *p > 3.0 {
                match class {
                    SolutionClass::FlatCore { t_pl, s1, .. } => {
                        (s1 - 0.8 * t_pl, s1 + 0.8 * t_pl)
                    }
                    _ => *range,
                }
            } else {
                *range
            };
            let mut r = strong_residual(*p, lambda, class, strong_range, 201)?;
            r.name = format!("strong_residual:{name}");
            reports.push(r);
        }
        if wants(suite, Suite::Conserve) {
            let mut r = conservation_drift(*p, lambda, class, *range, 201)?;
            r.name = format!("conservation_drift:{name}");
            reports.push(r);
        }
    }

    if wants(suite, Suite::Variation) {
        let two_pi = 2.0 * std::f64::consts::PI;
        let circle = trace_class(p, &SolutionClass::Circular { k0: 1.0 }, (0.0, two_pi), 9)?;
        let line = trace_canonical(Family::Linear, p, None, (0.0, 6.0), 9)?;
        let wl = SolutionClass::Wavelike {
            a: 1.6,
            alpha: 1.0,
            beta: 0.0,
            q: 0.8,
        };
        let wl_lambda = wl.lambda(p);
        let wave = trace_class(p, &wl, (0.0, 6.0), 9)?;
        // the finite-difference cross check loses its quadratic accuracy at
        // curvature zeros when p is small, so the wavelike perturbations
        // live on a zero-free arc
        let k1 = elliptic::complete(IntegralKind::F1, p, Modulus::new(0.8)?)?;
        let mut var_cases: Vec<(String, Trace, f64, f64, f64)> = vec![
            ("circle".into(), circle, p - 1.0, 0.0, two_pi),
            ("line".into(), line, 0.7, 0.0, 6.0),
            ("wavelike".into(), wave, wl_lambda, 0.1 * k1, 0.8 * k1),
        ];
        if p > 2.0 {
            let spec = FlatCoreSpec::new(vec![1, -1], vec![0.5, 0.8])?;
            let flat = trace_flatcore(p, &spec, 33)?;
            let len = flat.arclength_span();
            let lambda = 0.5 * (p - 1.0) * 2.0_f64.powf(p);
            var_cases.push(("flatcore".into(), flat, lambda, 0.0, len));
        }
        for (name, trace, lambda, s0, length) in &var_cases {
            let etas: Vec<VectorBump> = (0..8)
                .map(|_| {
                    let mut eta = VectorBump::random(&mut rng, *length);
                    eta.x.a += s0;
                    eta.x.b += s0;
                    eta.y.a += s0;
                    eta.y.b += s0;
                    eta
                })
                .collect();
            let mut r = first_variation(trace, p, *lambda, &etas)?;
            r.name = format!("first_variation:{name}");
            reports.push(r);
        }
    }

    if wants(suite, Suite::Exponent) {
        let q = 0.6;
        let k1 = elliptic::complete(IntegralKind::F1, p, Modulus::new(q)?)?;
        let k = move |s: f64| {
            elliptic::sn_cn(p, s, Modulus::new(q).unwrap())
                .map(|t| 2.0 * q * t.1)
                .unwrap_or(f64::NAN)
        };
        let slope = exponent_probe(k, k1, ProbeSide::Below, 0.25)?;
        let target = 1.0 / (p - 1.0);
        reports.push(probe_report("exponent_probe:wavelike", slope, target));
        if p > 2.0 {
            let kp1 = elliptic::complete(IntegralKind::F1, p, Modulus::new(1.0)?)?;
            let k = move |s: f64| 2.0 * elliptic::sech(p, s).unwrap_or(f64::NAN);
            let slope = exponent_probe(k, kp1, ProbeSide::Below, 0.25)?;
            let target = 2.0 / (p - 2.0);
            reports.push(probe_report("exponent_probe:flatcore", slope, target));
        }
    }
    Ok(reports)
}

fn probe_report(name: &str, slope: f64, target: f64) -> VerifyReport {
    let rel = (slope - target).abs() / target;
    let mut r = VerifyReport {
        name: name.to_string(),
        residual_norm: rel,
        tolerance: verify::EXPONENT_REL_TOL,
        pass: rel <= verify::EXPONENT_REL_TOL,
        metadata: Default::default(),
    };
    r.metadata.insert("slope".into(), slope);
    r.metadata.insert("target".into(), target);
    r
}

/// Verification of a sampled trace (uniform grid required): weak form by
/// composite Simpson, strong form and conservation by finite differences on
/// the grid. Deterministic for a fixed file and seed.
fn verify_sampled(
    trace: &Trace,
    p: f64,
    lambda: f64,
    seed: u64,
    suite: Suite,
) -> Result<Vec<VerifyReport>, Error> {
    let s = &trace.samples;
    let n = s.len();
    let h = (s[n - 1].s - s[0].s) / (n - 1) as f64;
    for i in 1..n {
        if ((s[i].s - s[i - 1].s) - h).abs() > 1e-9 * h.abs() {
            return Err(Error::Domain(
                "sampled verification requires a uniform arclength grid".to_string(),
            ));
        }
    }
    let w: Vec<f64> = s
        .iter()
        .map(|c| c.k.signum() * c.k.abs().powf(p - 1.0))
        .collect();
    let mut reports = Vec::new();

    if wants(suite, Suite::Weak) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let length = s[n - 1].s - s[0].s;
        let mut worst = 0.0_f64;
        for _ in 0..8 {
            let mut phi = TestFunction::random(&mut rng, length);
            phi.a += s[0].s;
            phi.b += s[0].s;
            let mut integral = 0.0;
            let mut scale = 0.0;
            for i in 0..n {
                // composite Simpson weights (trapezoid at an even tail)
                let wt = if i == 0 || i == n - 1 {
                    1.0
                } else if i % 2 == 1 {
                    4.0
                } else {
                    2.0
                } * h
                    / 3.0;
                let (v, _, vpp) = phi.eval(s[i].s);
                let k = s[i].k;
                let t1 = p * w[i] * vpp;
                let t2 = (p - 1.0) * k.abs().powf(p) * k * v;
                let t3 = -lambda * k * v;
                integral += wt * (t1 + t2 + t3);
                scale += wt * (t1.abs() + t2.abs() + t3.abs());
            }
            if scale > 0.0 {
                worst = worst.max(integral.abs() / scale);
            }
        }
        let tol = verify::WEAK_TOL + h * h;
        reports.push(VerifyReport {
            name: "weak_residual_sampled".into(),
            residual_norm: worst,
            tolerance: tol,
            pass: worst <= tol,
            metadata: [("h".to_string(), h), ("p".to_string(), p)].into(),
        });
    }

    if wants(suite, Suite::Strong) {
        let resid = |stride: usize| -> f64 {
            let hh = h * stride as f64;
            let mut worst = 0.0_f64;
            let mut i = stride;
            while i + stride < n {
                let wpp = (w[i + stride] - 2.0 * w[i] + w[i - stride]) / (hh * hh);
                let wi = w[i];
                let r = p * wpp + (p - 1.0) * wi.abs().powf(2.0 / (p - 1.0)) * wi
                    - lambda * wi.signum() * wi.abs().powf(1.0 / (p - 1.0));
                worst = worst.max(r.abs());
                i += stride;
            }
            worst
        };
        let r_h = resid(1);
        let r_2h = resid(2);
        let (norm, order) = if r_h < 1e-12 && r_2h < 1e-12 {
            (0.0, f64::NAN)
        } else {
            let order = (r_2h / r_h).log2();
            ((order - 2.0).abs(), order)
        };
        let mut metadata: std::collections::BTreeMap<String, f64> =
            [("h".to_string(), h), ("residual_h".to_string(), r_h)].into();
        if order.is_finite() {
            metadata.insert("order".into(), order);
        }
        reports.push(VerifyReport {
            name: "strong_residual_sampled".into(),
            residual_norm: norm,
            tolerance: verify::ORDER_TOL,
            pass: norm <= verify::ORDER_TOL,
            metadata,
        });
    }

    if wants(suite, Suite::Conserve) {
        let pot = Potential::new(p, lambda)?;
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut d0 = 0.0;
        for i in 1..n - 1 {
            let wdot = (w[i + 1] - w[i - 1]) / (2.0 * h);
            let e = p * p * wdot * wdot + pot.eval(w[i]).0;
            if i == 1 {
                d0 = e;
            }
            lo = lo.min(e);
            hi = hi.max(e);
        }
        let drift = (hi - lo) / (1.0 + d0.abs());
        // the FD derivative limits the achievable drift to O(h^2)
        let tol = verify::CONSERVATION_TOL + 40.0 * h * h;
        reports.push(VerifyReport {
            name: "conservation_drift_sampled".into(),
            residual_norm: drift,
            tolerance: tol,
            pass: drift <= tol,
            metadata: [("h".to_string(), h), ("d0".to_string(), d0)].into(),
        });
    }
    Ok(reports)
}
