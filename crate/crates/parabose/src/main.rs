//! Command-line front end: exact polynomial tables, verification suites,
//! squeezed-state and norm computations, and propagator scans.
//!
//! Output is machine-readable (JSON lines or CSV) and deterministic:
//! identical inputs produce byte-identical bytes, floats are rendered with
//! 17 significant digits, and the only non-data line is an optional version
//! header enabled by `--header`.
//!
//! Exit codes: `0` — success and, for `verify`, every check passed;
//! `1` — at least one verification check failed; `2` — usage error.

use std::collections::HashMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use num_complex::Complex64;

use parabose::algebra::ParaAlgebra;
use parabose::error::{Error, Result};
use parabose::polynomials::{self, Family};
use parabose::report::{fmt_float, run_suite, Scope, SuiteConfig};
use parabose::{amplifier, squeeze};

#[derive(Parser)]
#[command(
    name = "parabose",
    version,
    about = "Verification-grade toolkit for the single-mode parabose oscillator"
)]
struct Cli {
    /// Output format: `json` (one object per line) or `csv`.
    #[arg(long, global = true)]
    format: Option<String>,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Optional `key=value` defaults file; explicit flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Prepend a `# parabose <version>` header line to the output.
    #[arg(long, global = true, default_value_t = false)]
    header: bool,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the exact coefficients of a deformed Hermite or Legendre
    /// polynomial (ascending powers, exact rationals).
    Poly {
        /// `hermite` or `legendre`.
        family: String,
        /// Polynomial index.
        #[arg(long)]
        n: Option<usize>,
        /// Deformation order, a positive rational like `2` or `5/2`.
        #[arg(long)]
        p: Option<String>,
        /// Also evaluate the polynomial at this point (floating point).
        #[arg(long)]
        eval: Option<f64>,
    },

    /// Run the named verification suites; exit 0 iff every check passes.
    Verify {
        /// `algebra`, `polynomials`, `squeeze`, `amplifier`, or `all`.
        #[arg(long)]
        scope: Option<String>,
        /// Comma-separated list of orders, e.g. `1,2,3`.
        #[arg(long)]
        p: Option<String>,
        /// Fock-space dimension.
        #[arg(long)]
        dim: Option<usize>,
        /// Guard band excluded from residual measurements.
        #[arg(long)]
        guard: Option<usize>,
        /// Tolerance for floating-point cross-checks.
        #[arg(long)]
        tol: Option<f64>,
        /// Squeeze parameter exercised by the squeeze checks.
        #[arg(long)]
        r: Option<f64>,
        /// Largest polynomial / state index exercised.
        #[arg(long)]
        nmax: Option<usize>,
        /// Integrator tolerance for the amplifier checks.
        #[arg(long = "ode-tol")]
        ode_tol: Option<f64>,
        /// Testing hook: force the named check to fail.
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },

    /// Excitation-norm table: ladder-built numeric values against the
    /// closed form, one row per level.
    Norms {
        #[arg(long)]
        nmax: Option<usize>,
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        p: Option<u32>,
        /// Lower bound on the internal working dimension.
        #[arg(long)]
        dim: Option<usize>,
    },

    /// Amplitudes of a squeezed number state from the closed formula.
    State {
        /// Level being squeezed.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        p: Option<u32>,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        guard: Option<usize>,
        /// Tail-population tolerance for the returned vector.
        #[arg(long)]
        tol: Option<f64>,
        /// Also build the state by matrix exponential and report the
        /// per-level difference.
        #[arg(long, default_value_t = false)]
        compare: bool,
    },

    /// Cross-validated coherent-state transition amplitudes over a grid of
    /// labels and times, ordered by (z0, t, z).
    Propagator {
        #[arg(long)]
        p: Option<u32>,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        guard: Option<usize>,
        #[arg(long)]
        omega: Option<f64>,
        #[arg(long)]
        k: Option<f64>,
        #[arg(long)]
        t0: Option<f64>,
        /// Comma-separated ascending times, e.g. `0.25,0.5,1`.
        #[arg(long)]
        times: Option<String>,
        /// Comma-separated coherent labels, e.g. `0,0.3,0.5i,-0.2+0.1i`.
        /// The same set is used for both ends of the amplitude.
        #[arg(long)]
        labels: Option<String>,
        #[arg(long = "ode-tol")]
        ode_tol: Option<f64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// `key=value` defaults loaded from `--config`; explicit flags win.
struct Settings(HashMap<String, String>);

impl Settings {
    fn load(path: Option<&PathBuf>) -> Result<Self> {
        let mut map = HashMap::new();
        if let Some(path) = path {
            let text = std::fs::read_to_string(path)?;
            for (lineno, raw) in text.lines().enumerate() {
                let line = raw.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (key, value) = line.split_once('=').ok_or_else(|| {
                    Error::InvalidParameter(format!(
                        "config line {} is not key=value: '{raw}'",
                        lineno + 1
                    ))
                })?;
                map.insert(key.trim().to_string(), value.trim().to_string());
            }
        }
        Ok(Settings(map))
    }

    /// Flag value if given, else config value, else default.
    fn resolve<T>(&self, flag: Option<T>, key: &str, default: T) -> Result<T>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.0.get(key) {
            Some(raw) => raw.parse().map_err(|e| {
                Error::InvalidParameter(format!("config key {key} = '{raw}': {e}"))
            }),
            None => Ok(default),
        }
    }

    /// Flag value if given, else config value, else `None`.
    fn resolve_opt(&self, flag: Option<String>, key: &str) -> Option<String> {
        flag.or_else(|| self.0.get(key).cloned())
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::InvalidParameter(format!(
                "unknown format '{other}' (expected json or csv)"
            ))),
        }
    }
}

fn emit(out: Option<&PathBuf>, header: bool, body: &str) -> Result<()> {
    let mut full = String::new();
    if header {
        full.push_str(concat!("# parabose ", env!("CARGO_PKG_VERSION"), "\n"));
    }
    full.push_str(body);
    match out {
        Some(path) => std::fs::write(path, full)?,
        None => {
            use std::io::Write;
            std::io::stdout().write_all(full.as_bytes())?;
        }
    }
    Ok(())
}

/// Returns `Ok(false)` only when a verification check failed.
fn run(cli: Cli) -> Result<bool> {
    let settings = Settings::load(cli.config.as_ref())?;
    let format: Format = settings
        .resolve(
            cli.format.map(|s| s.parse()).transpose()?,
            "format",
            Format::Json,
        )?;

    match cli.cmd {
        Cmd::Poly { family, n, p, eval } => {
            let family: Family = family.parse()?;
            let n = settings.resolve(n, "n", 2)?;
            let p_str = settings
                .resolve_opt(p, "p")
                .unwrap_or_else(|| parabose::DEFAULT_P.to_string());
            let p_rat = polynomials::parse_positive_rational(&p_str)?;
            let poly = polynomials::family_member(family, n, &p_rat)?;
            let body = match format {
                Format::Json => {
                    let mut value = polynomials::poly_json(family, n, &p_rat, &poly);
                    if let Some(x) = eval {
                        let y = poly.eval_complex(Complex64::new(x, 0.0)).re;
                        let obj = value.as_object_mut().expect("poly_json returns an object");
                        obj.insert("eval_at".into(), fmt_float(x).into());
                        obj.insert("eval".into(), fmt_float(y).into());
                    }
                    format!("{value}\n")
                }
                Format::Csv => {
                    let coeffs = poly.coeff_strings().join(" ");
                    let mut body = String::from("family,n,p,coeffs\n");
                    body.push_str(&format!("{},{n},{p_rat},{coeffs}\n", family.name()));
                    if let Some(x) = eval {
                        let y = poly.eval_complex(Complex64::new(x, 0.0)).re;
                        body.push_str(&format!(
                            "# eval at {} = {}\n",
                            fmt_float(x),
                            fmt_float(y)
                        ));
                    }
                    body
                }
            };
            emit(cli.out.as_ref(), cli.header, &body)?;
            Ok(true)
        }

        Cmd::Verify {
            scope,
            p,
            dim,
            guard,
            tol,
            r,
            nmax,
            ode_tol,
            inject_fault,
        } => {
            let scope: Scope = settings
                .resolve_opt(scope, "scope")
                .unwrap_or_else(|| "all".into())
                .parse()?;
            let p_list = parse_u32_list(
                &settings
                    .resolve_opt(p, "p")
                    .unwrap_or_else(|| parabose::DEFAULT_P.to_string()),
            )?;
            let dim = settings.resolve(dim, "dim", parabose::DEFAULT_DIM)?;
            let cfg = SuiteConfig {
                scope,
                p_list,
                dim,
                guard: settings.resolve(guard, "guard", parabose::default_guard(dim))?,
                tol: settings.resolve(tol, "tol", parabose::DEFAULT_TOL)?,
                r: settings.resolve(r, "r", 0.5)?,
                nmax: settings.resolve(nmax, "nmax", 12)?,
                ode_tol: settings.resolve(ode_tol, "ode_tol", parabose::DEFAULT_ODE_TOL)?,
                inject_fault,
            };
            let report = run_suite(&cfg)?;
            let body = match format {
                Format::Json => report.to_json_lines(),
                Format::Csv => report.to_csv(),
            };
            emit(cli.out.as_ref(), cli.header, &body)?;
            if !report.passed() {
                eprintln!("failed checks: {}", report.failed_ids().join(", "));
            }
            Ok(report.passed())
        }

        Cmd::Norms { nmax, r, p, dim } => {
            let nmax = settings.resolve(nmax, "nmax", 12)?;
            let r = settings.resolve(r, "r", 0.5)?;
            let p = settings.resolve(p, "p", parabose::DEFAULT_P)?;
            let dim = settings.resolve(dim, "dim", parabose::DEFAULT_DIM)?;
            let records = squeeze::excitation_norms(p, nmax, r, dim)?;
            let mut body = String::new();
            if format == Format::Csv {
                body.push_str(squeeze::NormRecord::CSV_HEADER);
                body.push('\n');
            }
            for rec in &records {
                body.push_str(&match format {
                    Format::Json => rec.json_line(),
                    Format::Csv => rec.csv_row(),
                });
                body.push('\n');
            }
            emit(cli.out.as_ref(), cli.header, &body)?;
            Ok(true)
        }

        Cmd::State {
            n,
            r,
            p,
            dim,
            guard,
            tol,
            compare,
        } => {
            let n = settings.resolve(n, "n", 0)?;
            let r = settings.resolve(r, "r", 0.5)?;
            let p = settings.resolve(p, "p", parabose::DEFAULT_P)?;
            let dim = settings.resolve(dim, "dim", parabose::DEFAULT_DIM)?;
            let guard = settings.resolve(guard, "guard", parabose::default_guard(dim))?;
            let tol = settings.resolve(tol, "tol", parabose::DEFAULT_TOL)?;
            let alg = ParaAlgebra::new(p, dim, guard)?;
            let closed = squeeze::state_closed(&alg, n, r, tol)?;
            let numeric = if compare {
                Some(squeeze::state_numeric(&alg, n, r, tol)?)
            } else {
                None
            };
            let body = match format {
                Format::Json => {
                    let amps: Vec<String> = closed
                        .iter()
                        .map(|c| format!("[\"{}\",\"{}\"]", fmt_float(c.re), fmt_float(c.im)))
                        .collect();
                    let mut line = format!(
                        "{{\"p\":{p},\"n\":{n},\"r\":\"{}\",\"dim\":{dim}",
                        fmt_float(r)
                    );
                    if let Some(num) = &numeric {
                        let max_diff = closed
                            .iter()
                            .zip(num.iter())
                            .map(|(a, b)| (a - b).norm())
                            .fold(0.0, f64::max);
                        line.push_str(&format!(",\"max_abs_diff\":\"{}\"", fmt_float(max_diff)));
                    }
                    line.push_str(&format!(",\"amplitudes\":[{}]}}\n", amps.join(",")));
                    line
                }
                Format::Csv => {
                    let mut body = String::from(if numeric.is_some() {
                        "level,re,im,abs_diff_vs_numeric\n"
                    } else {
                        "level,re,im\n"
                    });
                    for (i, c) in closed.iter().enumerate() {
                        match &numeric {
                            Some(num) => body.push_str(&format!(
                                "{i},{},{},{}\n",
                                fmt_float(c.re),
                                fmt_float(c.im),
                                fmt_float((c - num[i]).norm())
                            )),
                            None => body.push_str(&format!(
                                "{i},{},{}\n",
                                fmt_float(c.re),
                                fmt_float(c.im)
                            )),
                        }
                    }
                    body
                }
            };
            emit(cli.out.as_ref(), cli.header, &body)?;
            Ok(true)
        }

        Cmd::Propagator {
            p,
            dim,
            guard,
            omega,
            k,
            t0,
            times,
            labels,
            ode_tol,
        } => {
            let p = settings.resolve(p, "p", parabose::DEFAULT_P)?;
            let dim = settings.resolve(dim, "dim", parabose::DEFAULT_DIM)?;
            let guard = settings.resolve(guard, "guard", parabose::default_guard(dim))?;
            let omega = settings.resolve(omega, "omega", 1.0)?;
            let k = settings.resolve(k, "k", 0.2)?;
            let t0 = settings.resolve(t0, "t0", 0.0)?;
            let ode_tol = settings.resolve(ode_tol, "ode_tol", parabose::DEFAULT_ODE_TOL)?;
            let times = parse_f64_list(
                &settings
                    .resolve_opt(times, "times")
                    .unwrap_or_else(|| "0.25,0.5,0.75,1".into()),
            )?;
            let labels = parse_complex_list(
                &settings
                    .resolve_opt(labels, "labels")
                    .unwrap_or_else(|| "0,0.3,0.5i".into()),
            )?;
            let alg = ParaAlgebra::new(p, dim, guard)?;
            let samples =
                amplifier::propagator_grid(&alg, omega, k, t0, &times, &labels, ode_tol)?;
            let mut body = String::new();
            if format == Format::Csv {
                body.push_str(amplifier::PropagatorSample::CSV_HEADER);
                body.push('\n');
            }
            for s in &samples {
                body.push_str(&match format {
                    Format::Json => s.json_line(),
                    Format::Csv => s.csv_row(),
                });
                body.push('\n');
            }
            emit(cli.out.as_ref(), cli.header, &body)?;
            Ok(true)
        }
    }
}

fn parse_u32_list(s: &str) -> Result<Vec<u32>> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse()
                .map_err(|e| Error::InvalidParameter(format!("order '{tok}': {e}")))
        })
        .collect()
}

fn parse_f64_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse()
                .map_err(|e| Error::InvalidParameter(format!("number '{tok}': {e}")))
        })
        .collect()
}

fn parse_complex_list(s: &str) -> Result<Vec<Complex64>> {
    s.split(',').map(|tok| parse_complex(tok.trim())).collect()
}

/// Parse `a`, `bi`, or `a±bi` (e.g. `0`, `0.3`, `0.5i`, `-0.2+0.1i`).
fn parse_complex(s: &str) -> Result<Complex64> {
    let bad = |detail: &str| {
        Error::InvalidParameter(format!("complex label '{s}': {detail}"))
    };
    if s.is_empty() {
        return Err(bad("empty"));
    }
    let parse_part = |part: &str, imag: bool| -> Result<f64> {
        let core = if imag {
            match part {
                "i" | "+i" => return Ok(1.0),
                "-i" => return Ok(-1.0),
                other => other
                    .strip_suffix('i')
                    .ok_or_else(|| bad("imaginary part must end in i"))?,
            }
        } else {
            part
        };
        core.parse()
            .map_err(|_| bad("not a number"))
    };
    // Split at the last sign that is neither leading nor part of an exponent.
    let split = s
        .char_indices()
        .skip(1)
        .filter(|&(i, c)| {
            (c == '+' || c == '-')
                && !matches!(s.as_bytes()[i - 1], b'e' | b'E')
        })
        .map(|(i, _)| i)
        .last();
    match split {
        Some(i) => Ok(Complex64::new(
            parse_part(&s[..i], false)?,
            parse_part(&s[i..], true)?,
        )),
        None if s.ends_with('i') => Ok(Complex64::new(0.0, parse_part(s, true)?)),
        None => Ok(Complex64::new(parse_part(s, false)?, 0.0)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_label_parsing() {
        assert_eq!(parse_complex("0").unwrap(), Complex64::new(0.0, 0.0));
        assert_eq!(parse_complex("0.3").unwrap(), Complex64::new(0.3, 0.0));
        assert_eq!(parse_complex("0.5i").unwrap(), Complex64::new(0.0, 0.5));
        assert_eq!(parse_complex("-0.2+0.1i").unwrap(), Complex64::new(-0.2, 0.1));
        assert_eq!(parse_complex("1-2i").unwrap(), Complex64::new(1.0, -2.0));
        assert_eq!(parse_complex("i").unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(parse_complex("1e-3").unwrap(), Complex64::new(1e-3, 0.0));
        assert_eq!(
            parse_complex("1e-3+2e-4i").unwrap(),
            Complex64::new(1e-3, 2e-4)
        );
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("").is_err());
    }

    #[test]
    fn list_parsing() {
        assert_eq!(parse_u32_list("1,2,3").unwrap(), vec![1, 2, 3]);
        assert_eq!(parse_f64_list("0.25, 0.5").unwrap(), vec![0.25, 0.5]);
        assert!(parse_u32_list("1,x").is_err());
    }
}
