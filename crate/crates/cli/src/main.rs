use std::fs;
use std::ops::RangeInclusive;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rug::Float;
use serde_json::{json, Value};

use pcurve::certificate::{
    andre_verdict_with, arakelov_capacity_verdict_with, coeff_height_diagnostics,
    faltings_height_cm, primes_up_to, Case, Certificate, RadiusPolicy,
};
use pcurve::connection::{
    divisibility_check, horizontal_series, pcurv_survey, radius_estimate, Connection, CurvePoint,
    SurveyOutcome,
};
use pcurve::exactmath::{parse_ratfunc, FieldElem, PlaceId};
use pcurve::gaussmanin::{kodaira_spencer_image_scaled, legendre_gm_matrix};
use pcurve::hyperbolic::capacity_lower_bound;
use pcurve::modular::{
    cm_constant, decimal, digits_for, error_exponent, eta, lambda_fn, lambda_prime, thetas,
    BigComplex, CmConstant, UpperHalfPoint,
};
use pcurve::registry::{example, EXAMPLE_NAMES};

#[derive(Parser)]
#[command(
    name = "pcurve",
    version,
    about = "p-curvature, modular constants and algebraicity certificates"
)]
struct Cli {
    /// Working precision in bits.
    #[arg(long, global = true, default_value_t = 256)]
    prec: u32,
    /// Largest prime in prime sums.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pmax: u64,
    /// Truncation order of series.
    #[arg(long, global = true, default_value_t = 128)]
    order: usize,
    /// Decimal digits in output (default: what the precision supports, at most 30).
    #[arg(long, global = true)]
    digits: Option<usize>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Source {
    /// Connection file (JSON).
    #[arg(long, conflicts_with = "example")]
    conn: Option<String>,
    /// Named example connection.
    #[arg(long)]
    example: Option<String>,
}

impl Source {
    fn load(&self) -> Result<Connection, String> {
        match (&self.conn, &self.example) {
            (Some(path), _) => {
                let text = fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
                Connection::from_json(&text).map_err(|e| e.to_string())
            }
            (None, Some(name)) => example(name).map_err(|e| e.to_string()),
            (None, None) => Err("one of --conn or --example is required".into()),
        }
    }
}

#[derive(Args)]
struct Center {
    /// Expansion point x₀ (an element of the ground field, e.g. 1/2 or 1+sqrtd).
    #[arg(long, default_value = "0")]
    at: String,
    /// y₀ on the elliptic curve.
    #[arg(long)]
    y: Option<String>,
    /// Initial vector, comma separated (default: first basis vector).
    #[arg(long)]
    initial: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// p-curvature survey over a prime range.
    Pcurv {
        #[command(flatten)]
        source: Source,
        /// Prime range a..b.
        #[arg(long, default_value = "2..50")]
        primes: String,
    },
    /// Divisibility of the connection matrix at the places over a prime.
    Divcheck {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        prime: u64,
    },
    /// Formal horizontal section.
    Expand {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        center: Center,
    },
    /// p-adic radius estimate of a horizontal section.
    Radius {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        center: Center,
        #[arg(long)]
        prime: u64,
    },
    /// Gauss–Manin matrix of the Legendre family.
    Gm,
    /// Kodaira–Spencer image of (c·dx/2y)^{⊗2}.
    Ks {
        #[arg(long, default_value = "1")]
        scale: String,
    },
    /// CM constants (rinf, eremenko, ec_rinf or all).
    Constants {
        #[arg(long, default_value = "all")]
        which: String,
    },
    /// Theta constants, eta, λ and λ' at a point (t0, i, (1+i)/2 or re,im).
    Theta {
        #[arg(long, default_value = "t0")]
        t: String,
    },
    /// Inscribed-disc capacity bound.
    Capacity,
    /// André or Arakelov verdict (p1, elliptic, a1m4, capacity).
    Certify {
        #[arg(long)]
        case: String,
        /// Primes with radius 1 (comma separated); overrides the case policy.
        #[arg(long)]
        exclude: Option<String>,
    },
    /// Height identity at the CM point.
    Heights,
    /// Coefficient-height diagnostics of a horizontal section.
    Diag {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        center: Center,
        /// Prime cutoff l.
        #[arg(long, default_value_t = 3)]
        cutoff: u64,
    },
    /// Print an example connection as JSON, or list the names.
    Example { name: Option<String> },
}

/// Outcome of a command: output plus verdict.
struct Outcome {
    text: String,
    json: Value,
    pass: bool,
}

impl Outcome {
    fn ok(text: String, json: Value) -> Self {
        Outcome {
            text,
            json,
            pass: true,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&out.json).expect("serializable")
                );
            } else {
                print!("{}", out.text);
            }
            if out.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn digits(cli: &Cli) -> usize {
    cli.digits.unwrap_or_else(|| digits_for(cli.prec).min(30))
}

/// Decimal with an error annotation.
fn annotated(x: &Float, digits: usize, prec: u32) -> String {
    format!(
        "{} ± 2^-{}",
        decimal(x, digits, prec),
        error_exponent(x, digits, prec)
    )
}

fn annotated_complex(z: &BigComplex, digits: usize) -> Value {
    json!({
        "re": annotated(z.re(), digits, z.prec()),
        "im": annotated(z.im(), digits, z.prec()),
    })
}

/// Double-precision diagnostics: 6 decimals, error dominated by rounding.
fn annotated_f64(x: f64) -> String {
    if x.is_infinite() {
        return "+inf".into();
    }
    let f = Float::with_val(53, x);
    annotated(&f, 6, 40)
}

/// `< 2^-k` for a nonnegative quantity known to working precision.
fn residual_bound(x: &Float, prec: u32) -> String {
    let k = if x.is_zero() {
        prec as i64
    } else {
        (-x.clone().log2().to_f64()).floor() as i64
    };
    format!("< 2^-{}", k.min(prec as i64))
}

fn parse_range(s: &str) -> Result<RangeInclusive<u64>, String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("bad prime range `{s}`; use a..b"))?;
    let a: u64 = a
        .trim()
        .parse()
        .map_err(|_| format!("bad range start `{a}`"))?;
    let b: u64 = b
        .trim()
        .parse()
        .map_err(|_| format!("bad range end `{b}`"))?;
    if a > b || b > 1 << 20 {
        return Err(format!("prime range {a}..{b} is empty or too large"));
    }
    Ok(a..=b)
}

fn parse_elem(conn: &Connection, s: &str) -> Result<FieldElem, String> {
    let f =
        parse_ratfunc::<FieldElem>(s, conn.field(), conn.variable()).map_err(|e| e.to_string())?;
    f.as_constant()
        .ok_or_else(|| format!("`{s}` is not a constant"))
}

fn parse_center(conn: &Connection, c: &Center) -> Result<(CurvePoint, Vec<FieldElem>), String> {
    let x = parse_elem(conn, &c.at)?;
    let pt = match (&c.y, conn.curve().is_elliptic()) {
        (Some(y), true) => {
            CurvePoint::elliptic(x, parse_elem(conn, y)?).map_err(|e| e.to_string())?
        }
        (None, true) => return Err("--y is required on the elliptic curve".into()),
        (Some(_), false) => return Err("--y only applies to the elliptic curve".into()),
        (None, false) => CurvePoint::line(x),
    };
    let init = match &c.initial {
        Some(s) => s
            .split(',')
            .map(|e| parse_elem(conn, e.trim()))
            .collect::<Result<Vec<_>, _>>()?,
        None => {
            let k = conn.field();
            (0..conn.rank())
                .map(|i| FieldElem::from_rational(k, i64::from(i == 0)))
                .collect()
        }
    };
    Ok((pt, init))
}

fn parse_primes(s: &str) -> Result<Vec<u64>, String> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| format!("bad prime `{t}`"))
        })
        .collect()
}

fn certificate_outcome(c: &Certificate, digits: usize) -> Outcome {
    let d = |x: &Float| annotated(x, digits, c.prec);
    let mut text = format!(
        "case: {}\narchimedean: {}\n",
        c.case.tag(),
        d(&c.archimedean)
    );
    if let Some(cap) = &c.capacity {
        text += &format!("capacity bound: {}\n", d(cap));
    }
    text += &format!(
        "prime sum: [{}, {}] (pmax {}, excluded {:?})\nmargin: {}\nverdict: {}\n",
        decimal(&c.finite.partial, digits, c.prec),
        decimal(&c.finite.upper(), digits, c.prec),
        c.finite.pmax,
        c.finite.exclusions,
        d(&c.margin),
        if c.pass { "pass" } else { "fail" }
    );
    Outcome {
        text,
        json: c.to_json(digits),
        pass: c.pass,
    }
}

fn run(cli: &Cli) -> Result<Outcome, String> {
    let prec = cli.prec;
    if !(16..=1 << 16).contains(&prec) {
        return Err(format!("--prec must lie in 16..=65536, got {prec}"));
    }
    let digits = digits(cli);
    let e = |e: pcurve::Error| e.to_string();
    match &cli.command {
        Command::Pcurv { source, primes } => {
            let conn = source.load()?;
            let range = parse_range(primes)?;
            let ps: Vec<u64> = primes_up_to(*range.end())
                .into_iter()
                .filter(|p| range.contains(p))
                .collect();
            let survey = pcurv_survey(&conn, &ps).map_err(e)?;
            let mut text = String::new();
            let mut rows = Vec::new();
            for s in &survey {
                let (tag, detail) = match &s.outcome {
                    SurveyOutcome::Zero => ("zero", String::new()),
                    SurveyOutcome::Nonzero(c) => {
                        let m: Vec<Vec<String>> = c
                            .matrix
                            .iter()
                            .map(|r| r.iter().map(|x| x.to_expr(conn.variable())).collect())
                            .collect();
                        ("nonzero", format!("{m:?}"))
                    }
                    SurveyOutcome::Divisible(w) => ("divisible", format!("witness {w}")),
                    SurveyOutcome::NotDivisible(w) => ("not divisible", format!("witness {w}")),
                    SurveyOutcome::Failed(err) => ("failed", err.to_string()),
                };
                text += &format!("{}: {tag} {detail}\n", s.place);
                rows.push(json!({"place": s.place.to_string(), "outcome": tag, "detail": detail}));
            }
            let all = survey.iter().all(|s| s.vanishes());
            text += if all { "all zero\n" } else { "not all zero\n" };
            Ok(Outcome {
                text,
                json: json!({"connection": conn.name(), "places": rows, "all_zero": all}),
                pass: all,
            })
        }
        Command::Divcheck { source, prime } => {
            let conn = source.load()?;
            let places = PlaceId::above(conn.field(), *prime).map_err(e)?;
            let mut text = String::new();
            let mut rows = Vec::new();
            let mut pass = true;
            for place in places {
                let d = divisibility_check(&conn, &place).map_err(e)?;
                pass &= d.divisible;
                text += &format!(
                    "{place}: {} (witness {})\n",
                    if d.divisible {
                        "divisible"
                    } else {
                        "not divisible"
                    },
                    d.witness
                );
                rows.push(json!({"place": place.to_string(), "divisible": d.divisible, "witness": d.witness}));
            }
            Ok(Outcome {
                text,
                json: json!(rows),
                pass,
            })
        }
        Command::Expand { source, center } => {
            let conn = source.load()?;
            let (pt, init) = parse_center(&conn, center)?;
            let ys = horizontal_series(&conn, &pt, &init, cli.order).map_err(e)?;
            let mut text = String::new();
            let mut comps = Vec::new();
            for (i, y) in ys.iter().enumerate() {
                let cs: Vec<String> = y.coeffs().iter().map(|c| c.to_string()).collect();
                text += &format!("y[{i}] = [{}]\n", cs.join(", "));
                comps.push(json!(cs));
            }
            Ok(Outcome::ok(
                text,
                json!({"center": center.at, "order": cli.order, "coefficients": comps}),
            ))
        }
        Command::Radius {
            source,
            center,
            prime,
        } => {
            let conn = source.load()?;
            let (pt, init) = parse_center(&conn, center)?;
            let ys = horizontal_series(&conn, &pt, &init, cli.order).map_err(e)?;
            let mut text = String::new();
            let mut rows = Vec::new();
            let mut pass = true;
            for place in PlaceId::above(conn.field(), *prime).map_err(e)? {
                for (i, y) in ys.iter().enumerate() {
                    let r = radius_estimate(y, &place).map_err(e)?;
                    pass &= r.pass;
                    let margin = r
                        .margin
                        .as_ref()
                        .map_or("+inf".to_string(), |m| m.to_string());
                    text += &format!(
                        "{place} y[{i}]: slope {} (threshold {}), log radius {}, margin {margin}: {}\n",
                        r.slope,
                        r.threshold,
                        annotated_f64(r.radius_log),
                        if r.pass { "pass" } else { "fail" }
                    );
                    rows.push(json!({
                        "place": place.to_string(), "component": i, "slope": r.slope.to_string(),
                        "threshold": r.threshold.to_string(), "margin": margin, "pass": r.pass,
                    }));
                }
            }
            Ok(Outcome {
                text,
                json: json!(rows),
                pass,
            })
        }
        Command::Gm => {
            let m = legendre_gm_matrix();
            let rows: Vec<Vec<String>> = m
                .iter()
                .map(|r| r.iter().map(|x| x.to_expr("t")).collect())
                .collect();
            let text = rows
                .iter()
                .map(|r| format!("[{}]\n", r.join(", ")))
                .collect();
            Ok(Outcome::ok(text, json!({"variable": "t", "matrix": rows})))
        }
        Command::Ks { scale } => {
            let q = pcurve::exactmath::GroundField::Rationals;
            let c = parse_ratfunc::<FieldElem>(scale, q, "t").map_err(e)?;
            let c = c
                .as_constant()
                .ok_or("--scale must be a rational constant")?;
            let ks = kodaira_spencer_image_scaled(&c).to_expr("t");
            Ok(Outcome::ok(format!("{ks} dt\n"), json!({"image": ks})))
        }
        Command::Constants { which } => {
            let list: Vec<CmConstant> = if which == "all" {
                CmConstant::ALL.to_vec()
            } else {
                vec![CmConstant::from_tag(which)
                    .ok_or_else(|| format!("unknown constant `{which}`"))?]
            };
            let mut text = String::new();
            let mut obj = serde_json::Map::new();
            for c in list {
                let v = cm_constant(c, prec).map_err(e)?;
                text += &format!("{}: {}\n", c.tag(), v.decimal(digits));
                obj.insert(c.tag().into(), json!(v.decimal(digits)));
            }
            Ok(Outcome::ok(text, Value::Object(obj)))
        }
        Command::Theta { t } => {
            let pt = UpperHalfPoint::parse(t, prec).map_err(e)?;
            let th = thetas(&pt, prec).map_err(e)?;
            let vals = [
                ("theta00", th.t00),
                ("theta01", th.t01),
                ("theta10", th.t10),
                ("eta", eta(&pt, prec).map_err(e)?),
                ("lambda", lambda_fn(&pt, prec).map_err(e)?),
                ("lambda_prime", lambda_prime(&pt, prec).map_err(e)?),
            ];
            let mut text = String::new();
            let mut obj = serde_json::Map::new();
            for (name, v) in vals {
                let j = annotated_complex(&v, digits);
                text += &format!(
                    "{name}: {} + ({})i\n",
                    j["re"].as_str().unwrap(),
                    j["im"].as_str().unwrap()
                );
                obj.insert(name.into(), j);
            }
            Ok(Outcome::ok(text, Value::Object(obj)))
        }
        Command::Capacity => {
            let b = capacity_lower_bound(prec).map_err(e)?;
            let d = |x: &Float| annotated(x, digits, prec);
            let text = format!(
                "disc radius |alpha^-1(a)|: {}\nderivative |(lambda o alpha)'(0)|: {}\ncapacity bound: {}\nclosest point a: {} + ({})i\n",
                d(&b.disc_radius),
                d(&b.derivative),
                d(&b.value),
                decimal(b.argmin.real(), 12, prec),
                decimal(b.argmin.imag(), 12, prec)
            );
            Ok(Outcome::ok(
                text,
                json!({"disc_radius": d(&b.disc_radius), "derivative": d(&b.derivative), "bound": d(&b.value)}),
            ))
        }
        Command::Certify { case, exclude } => {
            let excl = exclude.as_deref().map(parse_primes).transpose()?;
            let cert = if case == "capacity" {
                arakelov_capacity_verdict_with(&excl.unwrap_or_default(), prec, cli.pmax)
                    .map_err(e)?
            } else {
                let c = Case::from_tag(case).ok_or_else(|| format!("unknown case `{case}`"))?;
                let policy = excl.map_or_else(
                    || RadiusPolicy::for_case(c),
                    |v| RadiusPolicy { radius_one_at: v },
                );
                andre_verdict_with(c, &policy, prec, cli.pmax).map_err(e)?
            };
            Ok(certificate_outcome(&cert, digits))
        }
        Command::Heights => {
            let h = faltings_height_cm(prec).map_err(e)?;
            let d = |x: &Float| annotated(x, digits, prec);
            let pass = h.residual < 1e-10;
            let residual = residual_bound(&h.residual, prec);
            let text = format!(
                "deg T: {}\nh_F (theta): {}\nh_F (identity): {}\nresidual: {residual}\n",
                d(&h.deg_t),
                d(&h.h_f_direct),
                d(&h.h_f_identity),
            );
            let json = json!({
                "deg_t": d(&h.deg_t), "h_f_direct": d(&h.h_f_direct), "h_f_identity": d(&h.h_f_identity),
                "residual": residual, "pass": pass,
            });
            Ok(Outcome { text, json, pass })
        }
        Command::Diag {
            source,
            center,
            cutoff,
        } => {
            let conn = source.load()?;
            let (pt, init) = parse_center(&conn, center)?;
            let ys = horizontal_series(&conn, &pt, &init, cli.order).map_err(e)?;
            let mut text = String::new();
            let mut rows = Vec::new();
            for (i, y) in ys.iter().enumerate() {
                let d = coeff_height_diagnostics(y, *cutoff).map_err(e)?;
                text += &format!(
                    "y[{i}]: tau_hat {}, rho_hat {}, primes {:?}{}\n",
                    annotated_f64(d.tau_hat),
                    annotated_f64(d.rho_hat),
                    d.primes,
                    if d.unbounded {
                        ", rho growing (unbounded)"
                    } else {
                        ""
                    }
                );
                rows.push(json!({
                    "component": i, "tau_hat": annotated_f64(d.tau_hat), "rho_hat": annotated_f64(d.rho_hat),
                    "unbounded": d.unbounded, "primes": d.primes,
                }));
            }
            Ok(Outcome::ok(text, json!(rows)))
        }
        Command::Example { name } => match name {
            None => Ok(Outcome::ok(
                EXAMPLE_NAMES.map(|n| format!("{n}\n")).concat(),
                json!(EXAMPLE_NAMES),
            )),
            Some(n) => {
                let c = example(n).map_err(e)?;
                let text = c.to_json();
                let json: Value = serde_json::from_str(&text).expect("valid json");
                Ok(Outcome::ok(text + "\n", json))
            }
        },
    }
}
