//! Command-line front end. `run` does all the work so that tests can drive it
//! without spawning a process.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand};
use skewpoly::base_skew::DEFAULT_CAP;
use skewpoly::factor::{factor, hensel_lift_right_factor, is_irreducible};
use skewpoly::newton::{ell_hat, mu_reduction, np_compute};
use skewpoly::series::fmt_rational;
use skewpoly::similarity::{canonical_pair, similarity_twist, CanonicalIrreducible, Twist};
use skewpoly::text::{format_base, format_kpoly, format_skew, parse_base, parse_skew};
use skewpoly::{Error, FieldCtx, Rational, SkewPoly, Valuation};

#[derive(Parser, Debug)]
#[command(
    name = "skewpoly",
    version,
    about = "Arithmetic and factorization in K[T, φ], K = F_q((u))"
)]
struct Cli {
    /// Characteristic of the residue field
    #[arg(long, global = true, default_value_t = 2)]
    p: u32,
    /// Degree of the residue field over F_p
    #[arg(long, global = true, default_value_t = 1)]
    m: u32,
    /// Monic modulus for F_{p^m}, coefficients from the constant term up (e.g. 1,1,1)
    #[arg(long, global = true, value_delimiter = ',')]
    modulus: Option<Vec<u32>>,
    /// σ = Frobenius^s on the residue field (default: 1 mod m)
    #[arg(long = "sigma-power", global = true)]
    sigma_power: Option<u32>,
    /// φ(u) = u^b
    #[arg(long, global = true, default_value_t = 2)]
    b: u32,
    /// Working precision in exponent units
    #[arg(long, global = true, default_value = "20", value_parser = parse_rational)]
    prec: Rational,
    /// Bound on brute-force candidates in the residue ring
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: u64,
    /// Accepted for reproducible tooling; every subcommand is deterministic
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Product A·B
    Mul {
        #[arg(value_name = "A")]
        lhs: String,
        #[arg(value_name = "B")]
        rhs: String,
    },
    /// Right division A = Q·B + R
    Divrem {
        #[arg(value_name = "A")]
        lhs: String,
        #[arg(value_name = "B")]
        rhs: String,
    },
    /// Newton polygon: vertices and slopes
    Np { a: String },
    /// Slope reductions (all slopes, or the one given)
    Reduce {
        a: String,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_rational)]
        mu: Option<Rational>,
    },
    /// Irreducibility test; exit status 0 if irreducible, 1 if not
    Irreducible { a: String },
    /// Factorization into irreducibles
    Factor { a: String },
    /// Lift a right factor P of the reduction along the smallest slope
    Lift {
        a: String,
        #[arg(value_name = "P")]
        factor: String,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_rational)]
        mu: Option<Rational>,
    },
    /// Similarity of two irreducibles; exit status 0 if similar, 1 if not
    Similar {
        #[arg(value_name = "A")]
        lhs: String,
        #[arg(value_name = "B")]
        rhs: String,
    },
    /// Classifying data of an irreducible étale polynomial
    Canonical { a: String },
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    s.trim()
        .parse::<Rational>()
        .map_err(|e| format!("'{s}' is not a rational number: {e}"))
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::InvalidField(_) => Failure::Usage(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

/// Runs the command line `args` (program name first). Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let mut lines = Vec::new();
    match execute(&cli, &mut lines) {
        Ok(code) => {
            for l in lines {
                let _ = writeln!(out, "{l}");
            }
            code
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Domain(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            3
        }
    }
}

fn field(cli: &Cli) -> Result<FieldCtx, Failure> {
    let m = match &cli.modulus {
        Some(f) => f.len().saturating_sub(1) as u32,
        None => cli.m,
    };
    if cli.modulus.is_some() && m != cli.m && cli.m != 1 {
        return Err(Failure::Usage(format!(
            "--m {} disagrees with a modulus of degree {m}",
            cli.m
        )));
    }
    let s = cli.sigma_power.unwrap_or(1 % m.max(1));
    let ctx = match &cli.modulus {
        Some(f) => FieldCtx::with_modulus(cli.p, f, s, cli.b)?,
        None => FieldCtx::new(cli.p, m, s, cli.b)?,
    };
    Ok(ctx)
}

fn valuation_text(v: Valuation) -> String {
    match v {
        Valuation::Finite(x) => fmt_rational(x),
        Valuation::Infinite => "inf".into(),
    }
}

fn canonical_lines(ctx: &FieldCtx, c: &CanonicalIrreducible, tag: &str) -> Vec<String> {
    let digits: String = c
        .slope_class
        .canonical_digits
        .iter()
        .map(|d| char::from_digit(*d, 36).unwrap())
        .collect();
    vec![
        format!("{tag}slope {}", fmt_rational(c.slope)),
        format!("{tag}ell {}", c.slope_class.ell),
        format!(
            "{tag}digits {}",
            if digits.is_empty() {
                "-".into()
            } else {
                digits
            }
        ),
        format!(
            "{tag}representative {}",
            fmt_rational(c.slope_class.representative)
        ),
        format!("{tag}witness {}", format_base(ctx, &c.witness)),
        format!("{tag}norm {}", format_kpoly(ctx, &c.base_invariant, 'Z')),
    ]
}

fn poly(ctx: &FieldCtx, s: &str) -> Result<SkewPoly, Failure> {
    Ok(parse_skew(ctx, s)?)
}

fn execute(cli: &Cli, out: &mut Vec<String>) -> Result<i32, Failure> {
    let ctx = field(cli)?;
    let ctx = &ctx;
    let (prec, cap) = (cli.prec, cli.cap);
    match &cli.command {
        Command::Mul { lhs, rhs } => {
            let r = poly(ctx, lhs)?.mul(ctx, &poly(ctx, rhs)?);
            out.push(format_skew(ctx, &r));
        }
        Command::Divrem { lhs, rhs } => {
            let d = poly(ctx, lhs)?.divrem_right(ctx, &poly(ctx, rhs)?, prec)?;
            out.push(format!("quotient {}", format_skew(ctx, &d.quotient)));
            out.push(format!("remainder {}", format_skew(ctx, &d.remainder)));
            out.push(format!("exact {}", d.exact));
        }
        Command::Np { a } => {
            out.extend(np_compute(ctx, &poly(ctx, a)?)?.records());
        }
        Command::Reduce { a, mu } => {
            let a = poly(ctx, a)?;
            let slopes: Vec<Rational> = match mu {
                Some(mu) => vec![*mu],
                None => np_compute(ctx, &a)?.slopes().iter().map(|s| s.mu).collect(),
            };
            for mu in slopes {
                let r = mu_reduction(ctx, &a, mu)?;
                out.push(format!("slope {}", fmt_rational(mu)));
                out.push(format!("nu {}", fmt_rational(r.nu)));
                out.push(format!("offset {}", r.offset));
                out.push(format!("ell {}", r.reduction.ell()));
                out.push(format!("reduction {}", format_base(ctx, &r.reduction)));
            }
        }
        Command::Irreducible { a } => {
            let yes = is_irreducible(ctx, &poly(ctx, a)?, cap)?;
            out.push(format!("irreducible {yes}"));
            return Ok(if yes { 0 } else { 1 });
        }
        Command::Factor { a } => {
            let f = factor(ctx, &poly(ctx, a)?, prec, cap)?;
            out.extend(f.factors.iter().map(|p| format_skew(ctx, p)));
            out.push(format!(
                "# residual-valuation ≥ {}",
                valuation_text(f.residual)
            ));
        }
        Command::Lift { a, factor: p, mu } => {
            let a = poly(ctx, a)?;
            let mu = match mu {
                Some(mu) => *mu,
                None => {
                    np_compute(ctx, &a)?
                        .smallest_slope()
                        .ok_or_else(|| Failure::Domain("the polynomial has no slope".into()))?
                        .mu
                }
            };
            let p = parse_base(ctx, p, ell_hat(mu, ctx.b()))?;
            let r = hensel_lift_right_factor(ctx, &a, &p, mu, prec)?;
            out.push(format!("G {}", format_skew(ctx, &r.g)));
            out.push(format!("F {}", format_skew(ctx, &r.f)));
            out.push(format!("achieved {}", valuation_text(r.achieved_prec)));
            out.push(format!("exact {}", r.exact));
            out.push(format!("iterations {}", r.residual_history.len()));
        }
        Command::Similar { lhs, rhs } => {
            let (a, b) = (poly(ctx, lhs)?, poly(ctx, rhs)?);
            for (x, tag) in [(&a, "A "), (&b, "B ")] {
                if !is_irreducible(ctx, x, cap)? {
                    return Err(Failure::Domain(format!("{}is not irreducible", tag)));
                }
                if x.is_etale()? {
                    out.extend(canonical_lines(ctx, &canonical_pair(ctx, x, cap)?, tag));
                } else {
                    out.push(format!("{tag}unit-times-T"));
                }
            }
            let twist = similarity_twist(ctx, &a, &b, cap)?;
            out.push(format!("similar {}", twist.is_some()));
            if let Some(t) = twist {
                out.push(match t {
                    Twist::First(i) => format!("twist A {i}"),
                    Twist::Second(i) => format!("twist B {i}"),
                });
            }
            return Ok(if twist.is_some() { 0 } else { 1 });
        }
        Command::Canonical { a } => {
            let c = canonical_pair(ctx, &poly(ctx, a)?, cap)?;
            out.extend(canonical_lines(ctx, &c, ""));
        }
    }
    Ok(0)
}
