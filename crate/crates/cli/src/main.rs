use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use ostro_cli::config::depth_cap;
use ostro_cli::harness::with_growing_depth;
use ostro_cli::{run_suite, CliError, CliResult, SuiteConfig};
use ostro_core::ostrowski::parse_digit_list;
use ostro_core::shiftcalc::lambda_general;
use ostro_core::text::{format_rational, parse_rational, split_radicand};
use ostro_core::{CfExpansion, DigitKind, OstDigits, Rational, DEFAULT_DEPTH};
use serde_json::json;

/// Ostrowski numeration and multiplication by sqrt(d).
#[derive(Parser)]
#[command(name = "ostro", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Tsv,
}

#[derive(Subcommand)]
enum Command {
    /// Continued fraction of sqrt(d).
    Cf(Radicand),
    /// Ostrowski digits of a natural number.
    Encode {
        #[command(flatten)]
        radicand: Radicand,
        n: String,
    },
    /// Natural number from a digit string such as "0,1,0,1@d=3".
    Decode {
        digits: String,
        #[arg(long)]
        d: Option<String>,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// sqrt(d) * x from the digit expansion of x, to within eps.
    Mul {
        #[command(flatten)]
        radicand: Radicand,
        #[arg(long)]
        x: String,
        #[arg(long, default_value = "1e-9")]
        eps: String,
    },
    /// Shift constants v, w and the unit U.
    Constants(Radicand),
    /// Run the verification suite.
    Audit {
        /// Radicands to audit; overrides the config list. Repeatable.
        #[arg(long)]
        d: Vec<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        n_max: Option<u64>,
        #[arg(long)]
        eps: Option<String>,
    },
}

#[derive(Args)]
struct Radicand {
    #[arg(long)]
    d: String,
    #[arg(long)]
    depth: Option<usize>,
}

impl Radicand {
    fn parse(&self) -> CliResult<(Rational, usize)> {
        let d = parse_rational(&self.d)?;
        Ok((d, capped(self.depth.unwrap_or(DEFAULT_DEPTH))?))
    }
}

fn capped(depth: usize) -> CliResult<usize> {
    Ok(depth_cap()?.map_or(depth, |cap| depth.min(cap)))
}

/// Upper limit for automatic deepening.
fn growth_cap() -> CliResult<usize> {
    Ok(depth_cap()?.unwrap_or(1 << 14))
}

/// Rendered output plus the exit code it implies.
struct Outcome {
    text: String,
    code: u8,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, code: 0 }
    }
}

fn run(cli: &Cli) -> CliResult<Outcome> {
    let fmt = cli.format;
    match &cli.command {
        Command::Cf(r) => {
            let (d, depth) = r.parse()?;
            let cf = CfExpansion::expand(&d, depth)?;
            let shown = depth.min(12);
            let p: Vec<String> = (0..shown).map(|k| cf.p(k).to_string()).collect();
            let q: Vec<String> = (0..shown).map(|k| cf.q(k).to_string()).collect();
            let text = match fmt {
                Format::Json => json!({
                    "d": format_rational(&d),
                    "a0": cf.a0().to_string(),
                    "period": cf.period(),
                    "m": cf.m(),
                    "s_max": cf.s_max(),
                    "t": cf.t(),
                    "unit": cf.unit().to_string(),
                    "p": p,
                    "q": q,
                })
                .to_string(),
                _ => format!(
                    "d = {}\na0 = {}\nperiod = [{}]\nm = {}\nU = {}\np = {}\nq = {}",
                    format_rational(&d),
                    cf.a0(),
                    join(cf.period()),
                    cf.m(),
                    cf.unit(),
                    p.join(","),
                    q.join(",")
                ),
            };
            Ok(Outcome::ok(text))
        }
        Command::Encode { radicand, n } => {
            let (d, depth) = radicand.parse()?;
            let n: BigInt = n
                .trim()
                .parse()
                .map_err(|_| ostro_core::Error::Parse(format!("bad natural number {n:?}")))?;
            if n.sign() == num_bigint::Sign::Minus {
                return Err(ostro_core::Error::OutOfDomain(format!("{n} is negative")).into());
            }
            let text = with_growing_depth(&d, depth, growth_cap()?, |cf| {
                OstDigits::encode_nat(&n, cf).map(|x| x.to_string())
            })?;
            Ok(Outcome::ok(render_scalar(fmt, "digits", text)))
        }
        Command::Decode { digits, d, depth } => {
            let (body, inline_d) = split_radicand(digits)?;
            let d = match (inline_d, d) {
                (Some(a), Some(b)) if a != parse_rational(b)? => {
                    return Err(ostro_core::Error::MixedRadicand(a.to_string(), b.clone()).into())
                }
                (Some(a), _) => Some(a),
                (None, Some(b)) => Some(parse_rational(b)?),
                (None, None) => None,
            };
            let (list, _) = parse_digit_list(body)?;
            let n = match d {
                None if list.iter().all(|&b| b == 0) => BigInt::from(0),
                None => {
                    return Err(ostro_core::Error::Parse(
                        "missing radicand: use @d=<d> or --d".into(),
                    )
                    .into())
                }
                Some(d) => {
                    let depth = capped(depth.unwrap_or(DEFAULT_DEPTH).max(list.len() + 1))?;
                    let cf = CfExpansion::expand(&d, depth)?;
                    cf.require(list.len())?;
                    let x = OstDigits::new(&cf, list, DigitKind::Natural);
                    x.ensure_valid()?;
                    x.decode_nat()
                }
            };
            Ok(Outcome::ok(render_scalar(fmt, "n", n.to_string())))
        }
        Command::Mul { radicand, x, eps } => {
            let (d, depth) = radicand.parse()?;
            let x = parse_rational(x)?;
            let eps = parse_rational(eps)?;
            let text = with_growing_depth(&d, depth, growth_cap()?, |cf| {
                let consts = cf.derive_shift_constants()?;
                let xq = cf.sqrt_d().lift(x.clone());
                let res = lambda_general(&xq, &eps, cf, &consts)?;
                let places = decimal_places(&eps);
                Ok(match fmt {
                    Format::Json => json!({
                        "d": format_rational(&d),
                        "x": format_rational(&x),
                        "eps": format_rational(&eps),
                        "value": res.value.to_string(),
                        "decimal": res.value.to_decimal(places),
                        "approximant": res.approximant.to_string(),
                        "integer_part": res.integer_part.to_string(),
                        "digits": res.digits,
                    })
                    .to_string(),
                    _ => format!(
                        "value = {}\ndecimal = {}\napproximant = {}",
                        res.value,
                        res.value.to_decimal(places),
                        res.approximant
                    ),
                })
            })?;
            Ok(Outcome::ok(text))
        }
        Command::Constants(r) => {
            let (d, depth) = r.parse()?;
            let cf = CfExpansion::expand(&d, depth)?;
            let k = cf.derive_shift_constants()?;
            let v: Vec<String> = k.v.iter().map(format_rational).collect();
            let w: Vec<String> = k.w.iter().map(format_rational).collect();
            let text = match fmt {
                Format::Json => json!({
                    "d": format_rational(&d),
                    "t": k.t,
                    "v": v,
                    "w": w,
                    "unit": k.unit.to_string(),
                    "a_const": k.a_const.to_string(),
                    "b_const": k.b_const.to_string(),
                    "norm": format_rational(&k.norm),
                })
                .to_string(),
                _ => format!(
                    "t = {}\nv = ({})\nw = ({})\nU = {}\na = {}\nb = {}\nnorm = {}",
                    k.t,
                    v.join(", "),
                    w.join(", "),
                    k.unit,
                    k.a_const,
                    k.b_const,
                    format_rational(&k.norm)
                ),
            };
            Ok(Outcome::ok(text))
        }
        Command::Audit {
            d,
            config,
            depth,
            n_max,
            eps,
        } => {
            let mut cfg = match config {
                Some(path) => SuiteConfig::load(path)?,
                None => SuiteConfig::default(),
            };
            if !d.is_empty() {
                cfg.radicands = d.clone();
            }
            if let Some(v) = depth {
                cfg.depth = *v;
            }
            if let Some(v) = n_max {
                cfg.n_max = *v;
            }
            if let Some(v) = eps {
                cfg.eps = v.clone();
            }
            cfg.apply_depth_cap()?;
            let report = run_suite(&cfg)?;
            let text = match fmt {
                Format::Json => report.to_json(),
                Format::Tsv => report.to_tsv(),
                Format::Text => report.to_text(),
            };
            Ok(Outcome {
                text,
                code: report.exit_code() as u8,
            })
        }
    }
}

fn join(xs: &[u64]) -> String {
    xs.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

fn render_scalar(fmt: Format, key: &str, value: String) -> String {
    match fmt {
        Format::Json => json!({ key: value }).to_string(),
        _ => value,
    }
}

/// Enough decimal places to show the value at the requested accuracy.
fn decimal_places(eps: &Rational) -> usize {
    let mut places = 0;
    let mut scaled = eps.clone();
    let one = Rational::from_integer(1.into());
    while scaled < one && places < 200 {
        scaled *= Rational::from_integer(10.into());
        places += 1;
    }
    places + 2
}

fn emit(cli: &Cli, text: &str) -> CliResult<()> {
    match &cli.output {
        Some(path) => std::fs::write(path, format!("{}\n", text.trim_end()))?,
        None => {
            let mut out = std::io::stdout().lock();
            writeln!(out, "{}", text.trim_end())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|o| emit(&cli, &o.text).map(|_| o.code));
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &CliError) -> u8 {
    e.exit_code() as u8
}
