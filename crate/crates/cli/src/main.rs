//! Command-line front end for the hilbquot engine.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 invalid input,
//! 3 missing or invalid data file.

use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hilbquot_core::classical::{classical_count, ClassicalCase};
use hilbquot_core::datafile::{load_residuals_file, load_series_files, parse_rational};
use hilbquot_core::hilb::{builtin_tables, euler_char_hilb_with, Rank, SeriesDataTable};
use hilbquot_core::multipoint::{
    builtin_residuals, n_fold_count, MultipointError, ResidualRegistry,
};
use hilbquot_core::p2::{
    corresponding_slope, drezet_resolution, epsilon_slope, moduli_predicates, mukai_pairing,
    specialize_to_p2, CharP2, DelPezzoChar, ResolutionData,
};
use hilbquot_core::symbol::SYMBOLS;
use hilbquot_core::{Poly, Rat};

const EXIT_MISMATCH: i32 = 1;
const EXIT_USAGE: i32 = 2;
const EXIT_DATA: i32 = 3;

#[derive(Parser)]
#[command(
    name = "hilbquot",
    version,
    about = "Exact counts: sections of determinant bundles on Hilbert schemes of points,\n\
             expected lengths of finite quot schemes, and resolutions on the projective plane",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum Surface {
    Delpezzo,
    P2,
}

#[derive(Subcommand)]
enum Cmd {
    /// Euler characteristic of O(L_n - r B/2) on the Hilbert scheme of n points
    Chi {
        /// Number of points (0..=7 with built-in data)
        #[arg(long)]
        n: usize,
        /// Rank parameter: a rational like 2 or 5/2, or "sym"
        #[arg(long)]
        r: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Series data file(s) extending A and/or B past z^7
        #[arg(long = "series")]
        series: Vec<PathBuf>,
    },
    /// Expected number of length-n quotients via the multiple point formula
    Multipoint {
        /// Number of points (1..=7; 4..=7 need a residual data file)
        #[arg(long)]
        n: u32,
        /// Integer rank >= 2
        #[arg(long)]
        r: u32,
        /// Residual data file supplying indices 3..=6
        #[arg(long)]
        residuals: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Cross-check the two counting pipelines over a (n, r) grid
    Verify {
        #[arg(long, default_value_t = 3)]
        nmax: u32,
        #[arg(long, default_value_t = 20)]
        rmax: u32,
        /// Residual data file (required for nmax >= 4)
        #[arg(long)]
        residuals: Option<PathBuf>,
        /// Series data file(s) extending A and/or B
        #[arg(long = "series")]
        series: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Closed-form counts for the cases (2,2), (2,3), (3,2)
    Classical {
        /// Which case: 22, 23 or 32
        #[arg(long)]
        case: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Resolution of a general stable sheaf on the projective plane
    Resolve {
        /// Chern character "r,c1,ch2" with rational entries
        #[arg(long)]
        ch: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Exceptional slope attached to a dyadic rational
    Slope {
        /// Dyadic rational like 3/4
        #[arg(long)]
        dyadic: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Corresponding exceptional slope of a character on the plane
    Gamma {
        /// Chern character "r,c1,ch2"
        #[arg(long)]
        ch: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Mukai pairing chi(e, f) of two characters
    Mukai {
        /// Chern character "r,c1,ch2" (c1 in multiples of L)
        #[arg(long)]
        e: String,
        #[arg(long)]
        f: String,
        /// Keep del Pezzo symbols or specialize to the plane
        #[arg(long, value_enum, default_value_t = Surface::P2)]
        surface: Surface,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: msg.into(),
        }
    }
    fn data(msg: impl Into<String>) -> Self {
        Failure {
            code: EXIT_DATA,
            message: msg.into(),
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{}", e);
                std::process::exit(0);
            }
            let line = e
                .to_string()
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("invalid arguments")
                .to_string();
            eprintln!("{}", line);
            std::process::exit(EXIT_USAGE);
        }
    };
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            std::process::exit(f.code);
        }
    }
}

fn symbols_json() -> Value {
    Value::Array(
        SYMBOLS
            .iter()
            .map(|s| Value::String(s.name().to_string()))
            .collect(),
    )
}

fn poly_json(p: &Poly) -> Value {
    Value::Array(
        p.terms_desc()
            .map(|(m, c)| {
                json!([
                    m.0.iter().map(|&e| e as u64).collect::<Vec<_>>(),
                    c.to_string()
                ])
            })
            .collect(),
    )
}

fn emit_poly(
    format: Format,
    p: &Poly,
    head: &str,
    mut extra: serde_json::Map<String, Value>,
) -> i32 {
    match format {
        Format::Text => println!("{} = {}", head, p),
        Format::Latex => println!("{}", p.to_latex()),
        Format::Json => {
            let mut obj = serde_json::Map::new();
            obj.insert("schema".into(), json!(1));
            obj.append(&mut extra);
            obj.insert("symbols".into(), symbols_json());
            obj.insert("poly".into(), poly_json(p));
            println!("{}", Value::Object(obj));
        }
    }
    0
}

fn read_file(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::data(format!("cannot read {}: {}", path.display(), e)))
}

fn load_tables(series: &[PathBuf]) -> Result<(SeriesDataTable, SeriesDataTable), Failure> {
    if series.is_empty() {
        return Ok(builtin_tables());
    }
    let contents = series
        .iter()
        .map(read_file)
        .collect::<Result<Vec<_>, _>>()?;
    load_series_files(&contents).map_err(|e| Failure::data(e.to_string()))
}

fn load_registry(residuals: &Option<PathBuf>) -> Result<ResidualRegistry, Failure> {
    match residuals {
        None => Ok(builtin_residuals()),
        Some(p) => {
            let content = read_file(p)?;
            load_residuals_file(&content).map_err(|e| Failure::data(e.to_string()))
        }
    }
}

fn parse_rank(s: &str) -> Result<Rank, Failure> {
    if s == "sym" {
        return Ok(Rank::Symbolic);
    }
    parse_rational(s).map(Rank::Numeric).map_err(|_| {
        Failure::usage(format!(
            "invalid rank '{}': expected a rational or 'sym'",
            s
        ))
    })
}

fn parse_char(s: &str) -> Result<CharP2, Failure> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(Failure::usage(format!(
            "invalid character '{}': expected r,c1,ch2",
            s
        )));
    }
    let vals = parts
        .iter()
        .map(|p| parse_rational(p.trim()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::usage(format!("invalid character '{}': {}", s, e)))?;
    Ok(CharP2::new(
        vals[0].clone(),
        vals[1].clone(),
        vals[2].clone(),
    ))
}

fn no_latex(format: Format, cmd: &str) -> Result<(), Failure> {
    if format == Format::Latex {
        return Err(Failure::usage(format!(
            "--format latex is not available for '{}'",
            cmd
        )));
    }
    Ok(())
}

/// Render an exceptional summand: integer slopes are line bundles.
fn summand(slope: &Rat, mult: &num_bigint::BigInt) -> String {
    if slope.is_integer() {
        format!("O({})^{}", slope, mult)
    } else {
        format!("E({})^{}", slope, mult)
    }
}

fn resolution_text(res: &ResolutionData) -> String {
    let kernel = res
        .kernel
        .iter()
        .map(|(s, m)| summand(s, m))
        .collect::<Vec<_>>()
        .join(" + ");
    let middle = res
        .middle
        .iter()
        .map(|(s, m)| summand(s, m))
        .collect::<Vec<_>>()
        .join(" + ");
    format!("0 -> {} -> {} -> G -> 0", kernel, middle)
}

fn resolution_json(res: &ResolutionData) -> Value {
    let row = |v: &Vec<(Rat, num_bigint::BigInt)>| {
        Value::Array(
            v.iter()
                .map(|(s, m)| json!({"slope": s.to_string(), "mult": m.to_string()}))
                .collect(),
        )
    };
    json!({
        "kind": res.kind.as_str(),
        "kernel": row(&res.kernel),
        "middle": row(&res.middle),
    })
}

fn run(cli: Cli) -> Result<i32, Failure> {
    match cli.cmd {
        Cmd::Chi {
            n,
            r,
            format,
            series,
        } => {
            let tables = load_tables(&series)?;
            let rank = parse_rank(&r)?;
            let p = euler_char_hilb_with(n, &rank, &tables)
                .map_err(|e| Failure::usage(e.to_string()))?;
            let mut extra = serde_json::Map::new();
            extra.insert("command".into(), json!("chi"));
            extra.insert("n".into(), json!(n));
            extra.insert("r".into(), json!(r));
            Ok(emit_poly(
                format,
                &p,
                &format!("chi[n={}, r={}]", n, r),
                extra,
            ))
        }
        Cmd::Multipoint {
            n,
            r,
            residuals,
            format,
        } => {
            let registry = load_registry(&residuals)?;
            let p = n_fold_count(n, r, &registry).map_err(|e| match e {
                MultipointError::MissingResidual(_) => Failure::data(e.to_string()),
                other => Failure::usage(other.to_string()),
            })?;
            let mut extra = serde_json::Map::new();
            extra.insert("command".into(), json!("multipoint"));
            extra.insert("n".into(), json!(n));
            extra.insert("r".into(), json!(r));
            Ok(emit_poly(
                format,
                &p,
                &format!("count[n={}, r={}]", n, r),
                extra,
            ))
        }
        Cmd::Verify {
            nmax,
            rmax,
            residuals,
            series,
            format,
        } => {
            no_latex(format, "verify")?;
            verify(nmax, rmax, &residuals, &series, format)
        }
        Cmd::Classical { case, format } => {
            let (case, n, r) = match case.as_str() {
                "22" => (ClassicalCase::Case22, 2usize, 2i64),
                "23" => (ClassicalCase::Case23, 2, 3),
                "32" => (ClassicalCase::Case32, 3, 2),
                other => {
                    return Err(Failure::usage(format!(
                        "invalid case '{}': expected 22, 23 or 32",
                        other
                    )))
                }
            };
            let count = classical_count(case);
            let chi = hilbquot_core::hilb::euler_char_hilb(n, &Rank::numeric(r))
                .expect("built-in truncation covers n <= 3");
            let equal = count == chi;
            match format {
                Format::Text => {
                    println!("count[{},{}] = {}", n, r, count);
                    println!("matches chi: {}", equal);
                }
                Format::Latex => println!("{}", count.to_latex()),
                Format::Json => {
                    println!(
                        "{}",
                        json!({
                            "schema": 1,
                            "command": "classical",
                            "case": format!("{}{}", n, r),
                            "symbols": symbols_json(),
                            "poly": poly_json(&count),
                            "equal": equal,
                        })
                    );
                }
            }
            Ok(if equal { 0 } else { EXIT_MISMATCH })
        }
        Cmd::Resolve { ch, format } => {
            no_latex(format, "resolve")?;
            let xi = parse_char(&ch)?;
            let res = drezet_resolution(&xi).map_err(|e| Failure::usage(e.to_string()))?;
            let rep = moduli_predicates(&xi).map_err(|e| Failure::usage(e.to_string()))?;
            match format {
                Format::Text => {
                    println!("kind: {}", res.kind.as_str());
                    println!("{}", resolution_text(&res));
                    println!("dim M = {}", rep.dim);
                    println!("Delta = {}", rep.discriminant);
                    println!("exists (Delta >= 1 sufficient): {}", rep.exists_sufficient);
                    println!("globally generated: {}", rep.globally_generated);
                }
                Format::Json => {
                    println!(
                        "{}",
                        json!({
                            "schema": 1,
                            "command": "resolve",
                            "ch": ch,
                            "resolution": resolution_json(&res),
                            "dim": rep.dim.to_string(),
                            "discriminant": rep.discriminant.to_string(),
                            "exists_sufficient": rep.exists_sufficient,
                            "globally_generated": rep.globally_generated,
                        })
                    );
                }
                Format::Latex => unreachable!(),
            }
            Ok(0)
        }
        Cmd::Slope { dyadic, format } => {
            no_latex(format, "slope")?;
            let d = parse_rational(&dyadic)
                .map_err(|e| Failure::usage(format!("invalid dyadic '{}': {}", dyadic, e)))?;
            let es = epsilon_slope(&d).map_err(|e| Failure::usage(e.to_string()))?;
            match format {
                Format::Text => println!(
                    "epsilon({}): slope = {}, rank = {}, Delta = {}",
                    d, es.slope, es.rank, es.discriminant
                ),
                Format::Json => println!(
                    "{}",
                    json!({
                        "schema": 1,
                        "command": "slope",
                        "dyadic": d.to_string(),
                        "slope": es.slope.to_string(),
                        "rank": es.rank.to_string(),
                        "discriminant": es.discriminant.to_string(),
                    })
                ),
                Format::Latex => unreachable!(),
            }
            Ok(0)
        }
        Cmd::Gamma { ch, format } => {
            no_latex(format, "gamma")?;
            let xi = parse_char(&ch)?;
            let es = corresponding_slope(&xi).map_err(|e| Failure::usage(e.to_string()))?;
            match format {
                Format::Text => println!(
                    "gamma({}): slope = {}, dyadic = {}, rank = {}, Delta = {}",
                    ch, es.slope, es.dyadic, es.rank, es.discriminant
                ),
                Format::Json => println!(
                    "{}",
                    json!({
                        "schema": 1,
                        "command": "gamma",
                        "ch": ch,
                        "dyadic": es.dyadic.to_string(),
                        "slope": es.slope.to_string(),
                        "rank": es.rank.to_string(),
                        "discriminant": es.discriminant.to_string(),
                    })
                ),
                Format::Latex => unreachable!(),
            }
            Ok(0)
        }
        Cmd::Mukai {
            e,
            f,
            surface,
            format,
        } => {
            let ce = parse_char(&e)?;
            let cf = parse_char(&f)?;
            let to_dp = |c: &CharP2| {
                DelPezzoChar::numeric(
                    c.rank.clone(),
                    c.c1.clone(),
                    hilbquot_core::rat(0),
                    c.ch2.clone(),
                )
            };
            let mut p = mukai_pairing(&to_dp(&ce), &to_dp(&cf));
            if surface == Surface::P2 {
                p = specialize_to_p2(&p);
            }
            let mut extra = serde_json::Map::new();
            extra.insert("command".into(), json!("mukai"));
            extra.insert("e".into(), json!(e));
            extra.insert("f".into(), json!(f));
            extra.insert(
                "surface".into(),
                json!(match surface {
                    Surface::Delpezzo => "delpezzo",
                    Surface::P2 => "p2",
                }),
            );
            Ok(emit_poly(format, &p, &format!("chi({}; {})", e, f), extra))
        }
    }
}

fn verify(
    nmax: u32,
    rmax: u32,
    residuals: &Option<PathBuf>,
    series: &[PathBuf],
    format: Format,
) -> Result<i32, Failure> {
    if nmax >= 4 && residuals.is_none() {
        return Err(Failure::data(format!(
            "orders n >= 4 need residual polynomials beyond the built-in range; \
             pass --residuals FILE (requested nmax = {})",
            nmax
        )));
    }
    if nmax > 7 {
        return Err(Failure::usage(format!(
            "nmax = {} exceeds the supported range 1..=7",
            nmax
        )));
    }
    if rmax < 2 {
        return Err(Failure::usage("rmax must be at least 2".to_string()));
    }
    let registry = load_registry(residuals)?;
    if (registry.max_order() as u32) < nmax {
        return Err(Failure::data(format!(
            "residual data covers n <= {}, requested nmax = {}",
            registry.max_order(),
            nmax
        )));
    }
    let tables = load_tables(series)?;

    struct Entry {
        n: u32,
        r: u32,
        lhs: Poly,
        rhs: Poly,
        equal: bool,
    }
    let mut entries = Vec::new();
    for n in 1..=nmax {
        for r in 2..=rmax {
            let lhs = n_fold_count(n, r, &registry).map_err(|e| Failure::usage(e.to_string()))?;
            let rhs = euler_char_hilb_with(n as usize, &Rank::numeric(r as i64), &tables)
                .map_err(|e| Failure::usage(e.to_string()))?;
            let equal = lhs == rhs;
            entries.push(Entry {
                n,
                r,
                lhs,
                rhs,
                equal,
            });
        }
    }
    let failures = entries.iter().filter(|e| !e.equal).count();
    let first = entries.iter().find(|e| !e.equal);
    let conditional = nmax >= 4;

    match format {
        Format::Text => {
            println!("verify nmax={} rmax={}", nmax, rmax);
            if conditional {
                println!("note: orders n >= 4 are conditional on the supplied residual data");
            }
            for e in &entries {
                if e.equal {
                    println!("n={} r={} equal", e.n, e.r);
                } else {
                    println!("n={} r={} MISMATCH", e.n, e.r);
                    println!("  count = {}", e.lhs);
                    println!("  chi   = {}", e.rhs);
                }
            }
            match first {
                None => println!("summary: total={} failures=0", entries.len()),
                Some(e) => println!(
                    "summary: total={} failures={} first_mismatch=n={},r={}",
                    entries.len(),
                    failures,
                    e.n,
                    e.r
                ),
            }
        }
        Format::Json => {
            let report = json!({
                "schema": 1,
                "command": "verify",
                "nmax": nmax,
                "rmax": rmax,
                "conditional": conditional,
                "symbols": symbols_json(),
                "report": {
                    "entries": entries.iter().map(|e| json!({
                        "n": e.n,
                        "r": e.r,
                        "lhs": poly_json(&e.lhs),
                        "rhs": poly_json(&e.rhs),
                        "equal": e.equal,
                    })).collect::<Vec<_>>(),
                    "summary": {
                        "total": entries.len(),
                        "failures": failures,
                        "first_mismatch": first.map(|e| json!({"n": e.n, "r": e.r})),
                    }
                }
            });
            println!("{}", report);
        }
        Format::Latex => unreachable!(),
    }
    Ok(if failures > 0 { EXIT_MISMATCH } else { 0 })
}
