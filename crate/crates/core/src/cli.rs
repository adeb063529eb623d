//! Command-line front end. Every subcommand prints one JSON document (or CSV
//! table) and maps failures to exit codes: 2 for invalid input, 3 for numeric
//! failure.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::divisibility::{obstruction_certificate, CertificateRecord};
use crate::error::{Error, Result};
use crate::expansion::{b_coeffs, eval_b};
use crate::model_kernel::{fit_expansion, log_grid, monomial_kernel, KernelConfig, KernelModel, LocalConfig, MonomialKernel};
use crate::monge_ampere::ball_check;
use crate::numerics::QuadSpec;
use crate::poly::{admissible_weight_check, parse_poly, BiPoly, ExactComplex, GaussianRational};
use crate::transforms::{ke_determinant, quadratic_root_check, watson_vs_quadrature, KernelSource};

#[derive(Parser, Debug)]
#[command(name = "bergman", version, about = "Model Bergman kernels of homogeneous subharmonic weights")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct Output {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write to PATH instead of standard output.
    #[arg(long, value_name = "PATH")]
    out: Option<std::path::PathBuf>,
}

#[derive(Args, Debug)]
struct Numerics {
    #[arg(long, default_value_t = 40)]
    dmax: usize,
    #[arg(long = "quad-tol", default_value_t = 1e-10)]
    quad_tol: f64,
    #[arg(long, default_value_t = 256)]
    ntheta: usize,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct WeightSource {
    /// Weight polynomial in z and w (w stands for the conjugate of z).
    #[arg(long)]
    weight: Option<String>,
    /// Monomial weight (c/2)|z|^r given as C,R.
    #[arg(long, value_name = "C,R")]
    monomial: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact expansion coefficients b0..b3 at a point.
    Coeffs {
        #[arg(long)]
        weight: String,
        #[arg(long, value_name = "X,Y")]
        at: String,
        #[command(flatten)]
        output: Output,
    },
    /// Model kernel value or diagonal derivative.
    Kernel {
        #[command(flatten)]
        source: WeightSource,
        /// One point `re,im` or a pair `re,im;re,im`.
        #[arg(long, default_value = "0,0")]
        at: String,
        #[arg(long, value_name = "A1,A2")]
        deriv: Option<String>,
        #[command(flatten)]
        numerics: Numerics,
        #[command(flatten)]
        output: Output,
    },
    /// Least-squares fit of the large-t diagonal expansion.
    Fit {
        #[arg(long)]
        weight: String,
        #[arg(long, value_name = "X,Y")]
        at: String,
        #[arg(long, value_name = "MIN,MAX,COUNT", default_value = "20,200,12")]
        tgrid: String,
        /// Number of coefficients b0, b1, ... to fit.
        #[arg(long, default_value_t = 4)]
        terms: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Exact monomial / nonvanishing certificate for a given q.
    Obstruction {
        #[arg(long = "weight-q")]
        weight_q: String,
        #[arg(long = "hint-a", value_name = "X,Y")]
        hint_a: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Comparing-coefficients determinant against (9π²/2)B̃₀⁴.
    KeCheck {
        #[command(flatten)]
        source: WeightSource,
        #[arg(long, value_name = "X,Y", default_value = "0,0")]
        at: String,
        #[command(flatten)]
        numerics: Numerics,
        #[command(flatten)]
        output: Output,
    },
    /// Exact check of (1+4/r)(2+2/r) = (9/4)(1+2/r)².
    Quadratic {
        #[arg(long)]
        r: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Bergman invariant and Monge-Ampère residual of the unit-ball kernel.
    BallCheck {
        #[arg(long, value_name = "X1,Y1,X2,Y2", default_value = "0,0,0,0")]
        at: String,
        #[arg(long)]
        h: Option<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// Watson-lemma coefficients against quadrature of a synthetic symbol.
    Watson {
        /// Symbol coefficients b0,b1,...
        #[arg(long, value_name = "B0,B1,...", allow_hyphen_values = true)]
        b: String,
        #[arg(long, default_value_t = 0)]
        alpha0: u32,
        #[arg(long, default_value_t = 4)]
        r: u32,
        #[arg(long, value_name = "MIN,MAX,COUNT", default_value = "50,500,12")]
        tgrid: String,
        #[arg(long = "quad-tol", default_value_t = 1e-12)]
        quad_tol: f64,
        #[command(flatten)]
        output: Output,
    },
}

/// Parse, execute and print; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_numeric() {
                3
            } else {
                2
            }
        }
    }
}

/// Output text of a command line, without printing.
pub fn render<I, T>(argv: I) -> Result<String>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| Error::Invalid(e.to_string()))?;
    let (text, _) = produce(cli.command)?;
    Ok(text)
}

fn execute(cli: Cli) -> Result<()> {
    let (text, out) = produce(cli.command)?;
    match out {
        Some(path) => std::fs::write(&path, text).map_err(|e| Error::Invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes()).map_err(|e| Error::Invalid(e.to_string()))
        }
    }
}

fn produce(cmd: Command) -> Result<(String, Option<std::path::PathBuf>)> {
    match cmd {
        Command::Coeffs { weight, at, output } => {
            let p = parse_poly(&weight)?;
            let z = parse_exact_point(&at)?;
            let c = b_coeffs(&p)?;
            let zf = z.to_complex();
            let vals = eval_b(&c, zf)?;
            let zb = z.conj();
            let exact: Vec<ExactComplex> = [
                c.b0.eval(&z, &zb),
                c.b1.eval(&z, &zb)?,
                c.b2.eval(&z, &zb)?,
                c.b3.eval(&z, &zb)?,
            ]
            .iter()
            .map(ExactComplex::from)
            .collect();
            let v = json!({
                "weight": p.to_string(),
                "z": [zf.re, zf.im],
                "q": c.q.to_string(),
                "Q": c.big_q.to_string(),
                "b0": vals[0].re,
                "b1": vals[1].re,
                "b2": vals[2].re,
                "b3": vals[3].re,
                "exact": {"b0": exact[0], "b1": exact[1], "b2": exact[2], "b3": exact[3]},
                "admissible": admissible_weight_check(&p),
            });
            single(v, output)
        }
        Command::Kernel { source, at, deriv, numerics, output } => {
            let pts = parse_points(&at)?;
            let (z, w) = match pts.as_slice() {
                [z] => (*z, *z),
                [z, w] => (*z, *w),
                _ => return Err(Error::Invalid("--at takes one or two points".into())),
            };
            let deriv = deriv.as_deref().map(parse_pair_u32).transpose()?;
            if deriv.is_some() && pts.len() != 1 {
                return Err(Error::Invalid("--deriv needs a single diagonal point".into()));
            }
            let v = match resolve_source(&source)? {
                Resolved::Monomial(c, r) => {
                    let mk = MonomialKernel::new(c, r)?;
                    let value = match deriv {
                        Some((a1, a2)) => mk.diag_derivative(a1, a2, z)?,
                        None => monomial_kernel(c, r, z, w)?,
                    };
                    json!({"value_re": value.re, "value_im": value.im, "dmax": Value::Null, "condition": Value::Null,
                           "validated_radius": Value::Null, "source": "closed_form"})
                }
                Resolved::Weight(p) => {
                    require_admissible(&p)?;
                    let km = KernelModel::new(&p, &kernel_config(&numerics))?;
                    let value = match deriv {
                        Some((a1, a2)) => km.diag_derivative(a1, a2, z)?,
                        None => km.kernel_eval(z, w),
                    };
                    let inside = km.within(z) && km.within(w);
                    let mut v = json!({"value_re": value.re, "value_im": value.im, "dmax": km.dmax(),
                           "condition": km.condition(), "validated_radius": km.validated_radius(),
                           "source": "moments"});
                    if !inside {
                        let msg = "evaluation point lies outside the validated radius";
                        eprintln!("warning: {msg}");
                        v["warning"] = json!(msg);
                    }
                    v
                }
            };
            single(v, output)
        }
        Command::Fit { weight, at, tgrid, terms, output } => {
            let p = parse_poly(&weight)?;
            require_admissible(&p)?;
            let z = parse_point(&at)?;
            let grid = parse_tgrid(&tgrid)?;
            let fit = fit_expansion(&p, z, &grid, terms, &LocalConfig::default())?;
            if fit.flagged {
                eprintln!("warning: fit condition number {:e} exceeds the limit", fit.condition);
            }
            match output.format {
                Format::Json => emit_json(&fit, output),
                Format::Csv => {
                    let rows: Vec<Vec<f64>> = fit.rows.iter().map(|r| vec![r.t, r.value, r.fitted, r.residual]).collect();
                    Ok((emit_csv(&["t", "value", "fitted", "residual"], &rows)?, output.out))
                }
            }
        }
        Command::Obstruction { weight_q, hint_a, output } => {
            let q = parse_poly(&weight_q)?;
            let a = hint_a.as_deref().map(parse_exact_point).transpose()?;
            let cert = obstruction_certificate(&q, a.as_ref())?;
            emit_json(&CertificateRecord::from(&cert), output)
        }
        Command::KeCheck { source, at, numerics, output } => {
            let z = parse_point(&at)?;
            let spec = QuadSpec::with_tol(numerics.quad_tol);
            let res = match resolve_source(&source)? {
                Resolved::Monomial(c, r) => ke_determinant(&KernelSource::Monomial(MonomialKernel::new(c, r)?), z, &spec)?,
                Resolved::Weight(p) => {
                    require_admissible(&p)?;
                    let km = KernelModel::new(&p, &kernel_config(&numerics))?;
                    ke_determinant(&KernelSource::Model(&km), z, &spec)?
                }
            };
            emit_json(&res, output)
        }
        Command::Quadratic { r, output } => emit_json(&quadratic_root_check(r)?, output),
        Command::BallCheck { at, h, output } => {
            let x = parse_floats(&at)?;
            if x.len() != 4 {
                return Err(Error::Invalid("--at for ball-check takes X1,Y1,X2,Y2".into()));
            }
            let z = [Complex64::new(x[0], x[1]), Complex64::new(x[2], x[3])];
            emit_json(&ball_check(&z, h)?, output)
        }
        Command::Watson { b, alpha0, r, tgrid, quad_tol, output } => {
            let b = if b.trim().is_empty() { Vec::new() } else { parse_floats(&b)? };
            let grid = parse_tgrid(&tgrid)?;
            let rep = watson_vs_quadrature(&b, alpha0, r, &grid, &QuadSpec::with_tol(quad_tol))?;
            match output.format {
                Format::Json => emit_json(&rep, output),
                Format::Csv => {
                    let rows: Vec<Vec<f64>> = rep.rows.iter().map(|r| vec![r.t, r.numeric, r.predicted]).collect();
                    Ok((emit_csv(&["t", "numeric", "predicted"], &rows)?, output.out))
                }
            }
        }
    }
}

fn single(v: Value, output: Output) -> Result<(String, Option<std::path::PathBuf>)> {
    if output.format == Format::Csv {
        return Err(Error::Invalid("CSV output is only available for fit and watson".into()));
    }
    Ok((format_json(&v) + "\n", output.out))
}

fn emit_json<T: Serialize>(value: &T, output: Output) -> Result<(String, Option<std::path::PathBuf>)> {
    let v = serde_json::to_value(value).map_err(|e| Error::Invalid(e.to_string()))?;
    single(v, output)
}

/// 17 significant digits, exponent form.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0.0".into();
    }
    format!("{x:.16e}")
}

/// Compact JSON with floats at 17 significant digits.
pub fn format_json(v: &Value) -> String {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(f64::NAN);
            if x.is_finite() {
                format_float(x)
            } else {
                "null".into()
            }
        }
        Value::Array(items) => format!("[{}]", items.iter().map(format_json).collect::<Vec<_>>().join(",")),
        Value::Object(map) => format!(
            "{{{}}}",
            map.iter()
                .map(|(k, v)| format!("{}:{}", Value::String(k.clone()), format_json(v)))
                .collect::<Vec<_>>()
                .join(",")
        ),
        other => other.to_string(),
    }
}

fn emit_csv(header: &[&str], rows: &[Vec<f64>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| Error::Invalid(e.to_string());
    w.write_record(header).map_err(err)?;
    for row in rows {
        w.write_record(row.iter().map(|x| format_float(*x))).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Invalid(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Invalid(e.to_string()))
}

enum Resolved {
    Weight(BiPoly),
    Monomial(f64, u32),
}

fn resolve_source(s: &WeightSource) -> Result<Resolved> {
    match (&s.weight, &s.monomial) {
        (Some(w), None) => Ok(Resolved::Weight(parse_poly(w)?)),
        (None, Some(m)) => {
            let (c, r) = m.split_once(',').ok_or_else(|| Error::Invalid(format!("--monomial expects C,R, got '{m}'")))?;
            let c: f64 = c.trim().parse().map_err(|_| Error::Invalid(format!("bad c in '{m}'")))?;
            let r: u32 = r.trim().parse().map_err(|_| Error::Invalid(format!("bad r in '{m}'")))?;
            Ok(Resolved::Monomial(c, r))
        }
        _ => Err(Error::Invalid("give exactly one of --weight and --monomial".into())),
    }
}

fn require_admissible(p: &BiPoly) -> Result<()> {
    let rep = admissible_weight_check(p);
    if !rep.admissible() {
        return Err(Error::Invalid(format!("weight is not admissible: {rep:?}")));
    }
    Ok(())
}

fn kernel_config(n: &Numerics) -> KernelConfig {
    KernelConfig { dmax: n.dmax, quad: QuadSpec::with_tol(n.quad_tol), ntheta: n.ntheta }
}

fn parse_floats(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| Error::Invalid(format!("bad number '{x}' in '{s}'"))))
        .collect()
}

fn parse_point(s: &str) -> Result<Complex64> {
    match parse_floats(s)?.as_slice() {
        [x, y] => Ok(Complex64::new(*x, *y)),
        _ => Err(Error::Invalid(format!("expected X,Y, got '{s}'"))),
    }
}

fn parse_points(s: &str) -> Result<Vec<Complex64>> {
    s.split(';').map(parse_point).collect()
}

/// `X,Y` with each part a rational or decimal literal, kept exact.
fn parse_exact_point(s: &str) -> Result<GaussianRational> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::Invalid(format!("expected X,Y, got '{s}'")));
    }
    let constant = |t: &str| -> Result<GaussianRational> {
        let p = parse_poly(t)?;
        if p.degree().unwrap_or(0) > 0 {
            return Err(Error::Invalid(format!("'{t}' is not a number")));
        }
        let c = p.coeff(0, 0);
        if !c.is_real() {
            return Err(Error::Invalid(format!("'{t}' is not real")));
        }
        Ok(c)
    };
    let x = constant(parts[0])?;
    let y = constant(parts[1])?;
    Ok(GaussianRational::new(x.re, y.re))
}

fn parse_pair_u32(s: &str) -> Result<(u32, u32)> {
    let (a, b) = s.split_once(',').ok_or_else(|| Error::Invalid(format!("expected A1,A2, got '{s}'")))?;
    let p = |t: &str| t.trim().parse::<u32>().map_err(|_| Error::Invalid(format!("bad order '{t}'")));
    Ok((p(a)?, p(b)?))
}

fn parse_tgrid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(Error::Invalid(format!("--tgrid expects MIN,MAX,COUNT, got '{s}'")));
    }
    let min: f64 = parts[0].trim().parse().map_err(|_| Error::Invalid(format!("bad MIN in '{s}'")))?;
    let max: f64 = parts[1].trim().parse().map_err(|_| Error::Invalid(format!("bad MAX in '{s}'")))?;
    let count: usize = parts[2].trim().parse().map_err(|_| Error::Invalid(format!("bad COUNT in '{s}'")))?;
    log_grid(min, max, count)
}
