//! Command-line front door for the phase-space calculus.
//!
//! Every subcommand parses its expressions with the library grammar,
//! prints deterministically, and exits 0 on success, 1 on a domain error
//! (with a structured diagnostic) and 2 on a usage error. JSON output
//! carries a top-level `"schema": 1` field.

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use starcalc::algebra::{RatSymbol, Variable};
use starcalc::flow::{flow, FlowSign};
use starcalc::genfun::{
    build_u, gradient_t, integrate_gradient, kernel_transform, sl2_u, star_eigen_residuals,
    CanonicalPair, ExpSymbol, KernelKind, Sl2,
};
use starcalc::json as wire;
use starcalc::printer;
use starcalc::star::{check_canonical_pair, moyal_bracket, poisson_bracket, star_product};
use starcalc::weyl::{moyal_lie_vector, weyl_symbol_of_word, GeneratorExpansion, Letter};

const SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(name = "starcalc", version, about = "Exact star products, brackets, flows and generating functions on the (p, q) phase plane")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Plain,
    Latex,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BracketKind {
    Poisson,
    Moyal,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KernelKindArg {
    Position,
    Mixed,
    Momentum,
    Mixed2,
}

impl From<KernelKindArg> for KernelKind {
    fn from(k: KernelKindArg) -> Self {
        match k {
            KernelKindArg::Position => KernelKind::Position,
            KernelKindArg::Mixed => KernelKind::Mixed,
            KernelKindArg::Momentum => KernelKind::Momentum,
            KernelKindArg::Mixed2 => KernelKind::Mixed2,
        }
    }
}

#[derive(clap::Args)]
struct CommonArgs {
    /// Comma-separated parameter names usable in expressions
    #[arg(long, value_delimiter = ',', default_value = "")]
    params: Vec<String>,
    /// Output format
    #[arg(long, value_enum, default_value = "plain")]
    format: OutputFormat,
}

#[derive(Subcommand)]
enum Command {
    /// Star product of two symbols
    Star {
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
        /// Truncation order in hbar for non-terminating series
        #[arg(long)]
        order: Option<u32>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Poisson or Moyal bracket of two symbols
    Bracket {
        #[arg(long, value_enum)]
        kind: BracketKind,
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
        #[arg(long)]
        order: Option<u32>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Verify a transformation (p,q) -> (P,Q) against the canonical
    /// bracket structure
    VerifyCt {
        #[arg(long = "P")]
        p_map: String,
        #[arg(long = "Q")]
        q_map: String,
        /// Expand both maps as gamma-series to this order first
        #[arg(long)]
        order: Option<u32>,
        /// Highest Moyal correction index to examine
        #[arg(long, default_value_t = 2)]
        kmax: u32,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Exponentiate a Moyal-Lie vector field on a symbol
    Flow {
        /// Generator expansion "m,n:coeff;m,n:coeff;..."
        #[arg(long)]
        generator: String,
        #[arg(long)]
        target: String,
        #[arg(long)]
        order: u32,
        /// +1 or -1
        #[arg(long, default_value = "+1", allow_hyphen_values = true)]
        sign: String,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Symbol of an operator word over the letters p and q
    Ordering {
        /// e.g. "pq", "ppq"
        #[arg(long)]
        word: String,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Generating-function pipeline: phase T, symbol u, eigen residuals
    Genfun {
        #[arg(long = "P")]
        p_map: String,
        #[arg(long = "Q")]
        q_map: String,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Integral kernel of the transformation symbol
    Kernel {
        #[arg(long = "P")]
        p_map: String,
        #[arg(long = "Q")]
        q_map: String,
        #[arg(long, value_enum)]
        kind: KernelKindArg,
        #[command(flatten)]
        common: CommonArgs,
    },
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn parse_expr(text: &str, params: &[String]) -> Result<RatSymbol, Failure> {
    let names: Vec<String> = params.iter().filter(|p| !p.is_empty()).cloned().collect();
    Ok(starcalc::parse(text, &names)?)
}

fn print_symbol(f: &RatSymbol, format: OutputFormat) -> String {
    match format {
        OutputFormat::Plain => printer::rat_plain(f),
        OutputFormat::Latex => printer::rat_latex(f),
        OutputFormat::Json => printer::print(f, printer::Format::Json),
    }
}

fn emit_symbol(f: &RatSymbol, format: OutputFormat) {
    match format {
        OutputFormat::Json => {
            let payload = json!({
                "schema": SCHEMA,
                "status": "ok",
                "result": wire::rat_to_json(f),
            });
            println!("{payload}");
        }
        _ => println!("{}", print_symbol(f, format)),
    }
}

fn exp_symbol_plain(u: &ExpSymbol, format: OutputFormat) -> String {
    match format {
        OutputFormat::Latex => {
            // latex of an exponential symbol: prefactor then exp(...)
            let mut out = String::new();
            if !u.pref.is_one() {
                out.push_str(&format!("{} ", u.pref));
            }
            if !u.phase.is_zero() {
                out.push_str(&format!("e^{{{}}}", printer::rat_latex(&u.phase)));
            } else if out.is_empty() {
                out.push('1');
            }
            out
        }
        _ => format!("{u}"),
    }
}

/// Parse "m,n:coeff;..." into a generator expansion.
fn parse_generator(text: &str, params: &[String]) -> Result<GeneratorExpansion, Failure> {
    let mut out = GeneratorExpansion::new();
    for chunk in text.split(';').filter(|c| !c.trim().is_empty()) {
        let (mn, coeff) = chunk
            .split_once(':')
            .ok_or_else(|| Failure(format!("malformed generator entry `{chunk}`; expected m,n:coeff")))?;
        let (m, n) = mn
            .split_once(',')
            .ok_or_else(|| Failure(format!("malformed monomial `{mn}`; expected m,n")))?;
        let m: u32 = m.trim().parse().map_err(|_| Failure(format!("bad exponent `{m}`")))?;
        let n: u32 = n.trim().parse().map_err(|_| Failure(format!("bad exponent `{n}`")))?;
        let value = parse_expr(coeff.trim(), params)?;
        let poly = value
            .as_poly()
            .ok_or_else(|| Failure(format!("generator coefficient `{coeff}` must be polynomial")))?;
        if poly.contains_var(&Variable::P) || poly.contains_var(&Variable::Q) {
            return Err(Failure(format!(
                "generator coefficient `{coeff}` must be free of p and q"
            )));
        }
        out.insert(m, n, poly.clone());
    }
    Ok(out)
}

/// Detect a homogeneous-linear symplectic map and return its matrix.
fn as_linear_symplectic(ct: &CanonicalPair) -> Option<Sl2> {
    let vars = [Variable::P, Variable::Q];
    let a = ct.p_out().partial(&Variable::P);
    let b = ct.p_out().partial(&Variable::Q);
    let c = ct.q_out().partial(&Variable::P);
    let d = ct.q_out().partial(&Variable::Q);
    for coeff in [&a, &b, &c, &d] {
        if !coeff.den_free_of(&vars) || coeff.num().pq_degree() > 0 {
            return None;
        }
    }
    let p = RatSymbol::var(Variable::P);
    let q = RatSymbol::var(Variable::Q);
    let lin_p = &(&a * &p) + &(&b * &q);
    let lin_q = &(&c * &p) + &(&d * &q);
    if lin_p != *ct.p_out() || lin_q != *ct.q_out() {
        return None;
    }
    Sl2::new(a, b, c, d).ok()
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Star { lhs, rhs, order, common } => {
            let f = parse_expr(&lhs, &common.params)?;
            let g = parse_expr(&rhs, &common.params)?;
            let result = star_product(&f, &g, order)?;
            emit_symbol(&result, common.format);
        }
        Command::Bracket { kind, lhs, rhs, order, common } => {
            let f = parse_expr(&lhs, &common.params)?;
            let g = parse_expr(&rhs, &common.params)?;
            let result = match kind {
                BracketKind::Poisson => poisson_bracket(&f, &g),
                BracketKind::Moyal => moyal_bracket(&f, &g, order)?,
            };
            emit_symbol(&result, common.format);
        }
        Command::VerifyCt { p_map, q_map, order, kmax, common } => {
            let p = parse_expr(&p_map, &common.params)?;
            let q = parse_expr(&q_map, &common.params)?;
            let report = check_canonical_pair(&p, &q, kmax, order)?;
            match common.format {
                OutputFormat::Json => {
                    let terms: Vec<_> = report
                        .moyal_terms
                        .iter()
                        .map(|(k, t)| json!({"k": k, "term": wire::rat_to_json(t)}))
                        .collect();
                    let payload = json!({
                        "schema": SCHEMA,
                        "status": "ok",
                        "report": {
                            "poisson": wire::rat_to_json(&report.poisson),
                            "moyal_terms": terms,
                            "is_canonical": report.is_canonical,
                            "first_nonvanishing_correction": report.first_nonvanishing_correction,
                        },
                    });
                    println!("{payload}");
                }
                format => {
                    println!("is_canonical: {}", report.is_canonical);
                    println!("poisson: {}", print_symbol(&report.poisson, format));
                    for (k, term) in &report.moyal_terms {
                        println!("moyal term k={k}: {}", print_symbol(term, format));
                    }
                    match report.first_nonvanishing_correction {
                        Some(k) => println!("first nonvanishing correction: k={k}"),
                        None => println!("first nonvanishing correction: none"),
                    }
                }
            }
        }
        Command::Flow { generator, target, order, sign, common } => {
            let gen = parse_generator(&generator, &common.params)?;
            let f = parse_expr(&target, &common.params)?;
            let sign = match sign.as_str() {
                "+1" | "+" | "1" => FlowSign::Plus,
                "-1" | "-" => FlowSign::Minus,
                other => return Err(Failure(format!("bad sign `{other}`; expected +1 or -1"))),
            };
            let v = moyal_lie_vector(&gen);
            let result = flow(&v, &f, order, sign)?;
            match common.format {
                OutputFormat::Json => {
                    let payload = json!({
                        "schema": SCHEMA,
                        "status": "ok",
                        "series": wire::series_to_json(&result.series),
                        "hbar_free": result.hbar_free,
                        "generator": wire::diff_op_to_json(&result.generator),
                    });
                    println!("{payload}");
                }
                format => {
                    let as_poly = RatSymbol::from(result.series.to_poly());
                    println!("{}", print_symbol(&as_poly, format));
                    println!("hbar-free: {}", result.hbar_free);
                }
            }
        }
        Command::Ordering { word, common } => {
            let letters: Result<Vec<Letter>, Failure> = word
                .chars()
                .map(|ch| match ch {
                    'p' => Ok(Letter::P),
                    'q' => Ok(Letter::Q),
                    other => Err(Failure(format!("word letters are p and q, found `{other}`"))),
                })
                .collect();
            let symbol = weyl_symbol_of_word(&letters?)?;
            emit_symbol(&symbol, common.format);
        }
        Command::Genfun { p_map, q_map, common } => {
            let p = parse_expr(&p_map, &common.params)?;
            let q = parse_expr(&q_map, &common.params)?;
            let ct = CanonicalPair::new(p, q)?;
            let (gp, gq) = gradient_t(&ct)?;
            let t = integrate_gradient(&gp, &gq)?;
            let u = build_u(&t)?;
            let (rq, rp) = star_eigen_residuals(&u, &ct)?;
            match common.format {
                OutputFormat::Json => {
                    let payload = json!({
                        "schema": SCHEMA,
                        "status": "ok",
                        "T": wire::rat_to_json(&t),
                        "u": {
                            "prefactor": wire::prefactor_to_json(&u.pref),
                            "phase": wire::rat_to_json(&u.phase),
                        },
                        "residual_q": wire::rat_to_json(rq.pref.rational()),
                        "residual_p": wire::rat_to_json(rp.pref.rational()),
                    });
                    println!("{payload}");
                }
                format => {
                    println!("T = {}", print_symbol(&t, format));
                    println!("u = {}", exp_symbol_plain(&u, format));
                    println!(
                        "residual (Q): {}",
                        print_symbol(rq.pref.rational(), format)
                    );
                    println!(
                        "residual (P): {}",
                        print_symbol(rp.pref.rational(), format)
                    );
                }
            }
        }
        Command::Kernel { p_map, q_map, kind, common } => {
            let p = parse_expr(&p_map, &common.params)?;
            let q = parse_expr(&q_map, &common.params)?;
            let ct = CanonicalPair::new(p, q)?;
            // linear symplectic maps get the closed-form normalization;
            // everything else goes through the gradient pipeline
            let u = match as_linear_symplectic(&ct) {
                Some(g) => sl2_u(&g)?,
                None => {
                    let (gp, gq) = gradient_t(&ct)?;
                    build_u(&integrate_gradient(&gp, &gq)?)?
                }
            };
            let kernel = kernel_transform(&u, kind.into())?;
            match common.format {
                OutputFormat::Json => {
                    let payload = json!({
                        "schema": SCHEMA,
                        "status": "ok",
                        "kernel": wire::kernel_to_json(&kernel),
                    });
                    println!("{payload}");
                }
                format => {
                    println!("kind: {}", kernel.kind.name());
                    println!("prefactor: {}", kernel.pref);
                    if let Some(delta) = &kernel.delta {
                        println!("delta: {}", print_symbol(delta, format));
                    }
                    println!("exponent: {}", print_symbol(&kernel.phase, format));
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // remember the format before `run` consumes the command
    let wants_json = matches!(
        &cli.command,
        Command::Star { common, .. }
        | Command::Bracket { common, .. }
        | Command::VerifyCt { common, .. }
        | Command::Flow { common, .. }
        | Command::Ordering { common, .. }
        | Command::Genfun { common, .. }
        | Command::Kernel { common, .. }
        if common.format == OutputFormat::Json
    );
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(message)) => {
            if wants_json {
                let payload = json!({
                    "schema": SCHEMA,
                    "status": "error",
                    "diagnostics": [message],
                });
                println!("{payload}");
            } else {
                eprintln!("error: {message}");
            }
            ExitCode::from(1)
        }
    }
}
