//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::bounds::{
    brunnian_lower, congruence_lower, hk_upper, m_of_k, multitwist_upper, surgery_lower, tau_cc_infs_upper,
    tau_cc_upper, torelli_lower, BoundResult,
};
use crate::error::{Error, Result};
use crate::families::{
    braid_family, matrix_csv, nnt, parse_matrix, pf_eigenvalue, torelli_family, IntersectionFamily,
};
use crate::interval::{parse_rational, Interval};
use crate::johnson::{lantern_fixture, parse_pairs, tau_bounding_pair, HomologyClass};
use crate::search::{lcs_csv, lcs_table, min_dilatation_search};
use crate::thurston::{dilatation, interval_pair, DilatationReport};
use crate::verify::{checks_csv, checks_text, paper_checks};
use crate::word::Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "dilatation", version, about = "Dilatations of pseudo-Anosov multitwist words and related bounds")]
pub struct RunConfig {
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Bits of relative precision for certified intervals.
    #[arg(long, global = true, default_value_t = 60, value_parser = clap::value_parser!(u64).range(1..))]
    pub precision: u64,
    /// Worker threads for the exhaustive search.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Torelli,
    Braid,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Group {
    /// Torelli group: lower bound and the T_A T_B upper bound.
    Torelli,
    /// Johnson kernel: log 2.
    Johnson,
    /// Level-r congruence subgroup.
    Congruence,
    /// Brunnian mapping classes with p punctures.
    Brunnian,
    /// Hironaka-Kin upper bound for the whole mapping class group.
    HironakaKin,
    /// Johnson filtration term N_k given B(k).
    Filtration,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Trace, isometry class and certified dilatation of a word.
    Dilatation {
        /// Word in a, b, A = a^-1, B = b^-1; empty for the identity.
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long, default_value_t = 64)]
        mu: u64,
    },
    /// Intersection matrix N, N N^t and its Perron-Frobenius data.
    Family {
        #[arg(long)]
        genus: Option<u32>,
        #[arg(long, value_enum, default_value_t = KindArg::Torelli)]
        kind: KindArg,
        /// Rows separated by ';', entries by ',' (custom kind only).
        #[arg(long)]
        matrix: Option<String>,
        /// Bracket width for non-exact eigenvalues.
        #[arg(long, default_value = "1e-12")]
        tol: String,
    },
    /// Closed-form dilatation bounds for a subgroup.
    Bounds {
        #[arg(long, value_enum)]
        group: Group,
        #[arg(long, default_value_t = 2)]
        genus: u32,
        #[arg(long)]
        r: Option<u64>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        b: Option<u64>,
    },
    /// Exhaustive search for the least dilatation among short words.
    Search {
        #[arg(long = "max-len")]
        max_len: usize,
        #[arg(long, default_value_t = 64)]
        mu: u64,
    },
    /// Dilatations of nested commutators of depth 1..K.
    LcsTable {
        #[arg(long = "max-k")]
        max_k: u32,
        #[arg(long, default_value_t = 64)]
        mu: u64,
    },
    /// Johnson homomorphism of a bounding-pair map.
    JohnsonTau {
        #[arg(long)]
        genus: usize,
        /// Symplectic pairs such as "x2,y2;x3,y3".
        #[arg(long, allow_hyphen_values = true, required_unless_present = "lantern")]
        pairs: Option<String>,
        /// Homology class of the bounding curves, such as x1.
        #[arg(long, allow_hyphen_values = true, required_unless_present = "lantern")]
        a: Option<String>,
        /// Run the lantern fixture instead.
        #[arg(long, conflicts_with_all = ["pairs", "a"])]
        lantern: bool,
    },
    /// Upper bounds on curve complex translation length.
    TauCc {
        #[arg(long)]
        genus: u64,
        /// Log dilatation, decimal or p/q; omit for the infimum bound.
        #[arg(long)]
        log_lambda: Option<String>,
    },
    /// Recompute every published constant and report pass/fail per row.
    VerifyPaper,
}

/// Parses `argv` (including the program name), runs the command and
/// writes the report. Returns the process exit code: 0 on success, 1 on a
/// computation error or failed verification, 2 on a usage error.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                2
            } else {
                let _ = write!(out, "{}", e.render());
                0
            };
            return code;
        }
    };
    match execute(&config) {
        Ok((text, ok)) => {
            let _ = out.write_all(text.as_bytes());
            if ok {
                0
            } else {
                1
            }
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Compute(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

enum Failure {
    Usage(String),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

fn usage<T>(msg: impl Into<String>) -> std::result::Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn unsupported(command: &str, format: Format) -> Failure {
    Failure::Usage(format!("{command} does not support --format {format:?}").to_lowercase())
}

fn execute(config: &RunConfig) -> std::result::Result<(String, bool), Failure> {
    let bits = config.precision;
    let fmt = |default: Format| config.format.unwrap_or(default);
    let out = match &config.command {
        Command::Dilatation { word, mu } => {
            let w: Word = match word.parse() {
                Ok(w) => w,
                Err(e) => return usage(format!("{e}")),
            };
            let report = dilatation(&w, *mu, bits)?;
            match fmt(Format::Json) {
                Format::Json => to_json(&report),
                Format::Text => dilatation_text(&report),
                Format::Csv => dilatation_csv(&report),
            }
        }
        Command::Family { genus, kind, matrix, tol } => {
            let family = match (kind, genus, matrix) {
                (KindArg::Custom, _, Some(m)) => IntersectionFamily::custom(parse_matrix(m)?)?,
                (KindArg::Custom, _, None) => return usage("--kind custom needs --matrix"),
                (_, _, Some(_)) => return usage("--matrix is only valid with --kind custom"),
                (_, None, None) => return usage("--genus is required for the built-in families"),
                (KindArg::Torelli, Some(g), None) => torelli_family(*g)?,
                (KindArg::Braid, Some(g), None) => braid_family(*g)?,
            };
            let Some(tol) = parse_rational(tol) else {
                return usage(format!("bad tolerance {tol:?}"));
            };
            family_report(&family, &tol, fmt(Format::Json))?
        }
        Command::Bounds { group, genus, r, p, b } => {
            let results = bounds_for(*group, *genus, *r, *p, *b)?;
            match fmt(Format::Json) {
                Format::Json if results.len() == 1 => to_json(&results[0]),
                Format::Json => to_json(&results),
                Format::Text => results.iter().map(bound_text).collect(),
                Format::Csv => bounds_csv(&results),
            }
        }
        Command::Search { max_len, mu } => {
            let jobs = config.jobs.map(|j| j as usize);
            let report = min_dilatation_search(*max_len, *mu, jobs, bits)?;
            match fmt(Format::Json) {
                Format::Json => to_json(&report),
                Format::Text => {
                    let minima: Vec<String> = report.all_minima.iter().map(ToString::to_string).collect();
                    format!(
                        "{} classes up to length {} at mu = {} ({} hyperbolic)\nminimal |trace| {} attained by {}\n{}",
                        report.classes_examined,
                        report.max_length,
                        report.mu,
                        report.hyperbolic_classes,
                        report.min_abs_trace(),
                        minima.join(", "),
                        dilatation_text(&report.minimum)
                    )
                }
                f => return Err(unsupported("search", f)),
            }
        }
        Command::LcsTable { max_k, mu } => {
            let rows = lcs_table(*max_k, *mu, bits)?;
            match fmt(Format::Csv) {
                Format::Csv | Format::Text => lcs_csv(&rows),
                Format::Json => to_json(&rows),
            }
        }
        Command::JohnsonTau { genus, pairs, a, lantern } => {
            if *lantern {
                let f = lantern_fixture(*genus)?;
                match fmt(Format::Json) {
                    Format::Json => to_json(&f),
                    Format::Text => format!(
                        "tau(T_z T_d^-1) = {}\ntau(T_d T_w^-1) = {}\ndiffer: {}\n",
                        f.tau_zd, f.tau_dw, f.differ
                    ),
                    c => return Err(unsupported("johnson-tau", c)),
                }
            } else {
                let (Some(pairs), Some(a)) = (pairs, a) else {
                    return usage("--pairs and --a are required");
                };
                if *genus < 2 {
                    return usage("--genus must be >= 2");
                }
                let pairs = parse_pairs(pairs, *genus)?;
                let a = HomologyClass::parse(a, *genus)?;
                let coset = tau_bounding_pair(*genus, &pairs, &a)?;
                match fmt(Format::Json) {
                    Format::Json => to_json(&coset),
                    Format::Text => format!("{coset}\n"),
                    c => return Err(unsupported("johnson-tau", c)),
                }
            }
        }
        Command::TauCc { genus, log_lambda } => {
            let result = match log_lambda {
                Some(s) => {
                    let Some(x) = parse_rational(s) else {
                        return usage(format!("bad log dilatation {s:?}"));
                    };
                    tau_cc_upper(*genus, &Interval::point(x))?
                }
                None => tau_cc_infs_upper(*genus)?,
            };
            match fmt(Format::Json) {
                Format::Json => to_json(&result),
                Format::Text => bound_text(&result),
                Format::Csv => bounds_csv(std::slice::from_ref(&result)),
            }
        }
        Command::VerifyPaper => {
            let checks = paper_checks(config.jobs.map(|j| j as usize));
            let ok = checks.iter().all(|c| c.passed);
            let text = match fmt(Format::Text) {
                Format::Text => checks_text(&checks),
                Format::Csv => checks_csv(&checks),
                Format::Json => to_json(&json!({ "all_passed": ok, "rows": checks })),
            };
            return Ok((text, ok));
        }
    };
    Ok((out, true))
}

fn dilatation_text(r: &DilatationReport) -> String {
    if r.word.is_identity() {
        return "identity; no dilatation\n".into();
    }
    let mut s = format!("word {} at mu = {}\ntrace {}\nclass {}\n", r.word, r.mu, r.trace, r.class);
    match (&r.lambda, &r.log_lambda) {
        (Some(l), Some(ll)) => {
            s.push_str(&format!("lambda in [{}, {}]\n", l.lo_decimal(20), l.hi_decimal(20)));
            s.push_str(&format!("log lambda in [{}, {}]\n", ll.lo_decimal(20), ll.hi_decimal(20)));
        }
        _ => s.push_str("not pseudo-Anosov; no dilatation\n"),
    }
    s
}

fn dilatation_csv(r: &DilatationReport) -> String {
    let [lo, hi] = r.log_lambda.as_ref().map(interval_pair).unwrap_or_default();
    format!("word,mu,trace,class,log_lambda_lo,log_lambda_hi\n{},{},{},{},{lo},{hi}\n", r.word, r.mu, r.trace, r.class)
}

fn family_report(family: &IntersectionFamily, tol: &num_rational::BigRational, format: Format) -> Result<String> {
    let product = nnt(family);
    let pf = pf_eigenvalue(&product, tol)?;
    let upper = multitwist_upper(family).ok();
    Ok(match format {
        Format::Json => to_json(&json!({
            "kind": family.kind.to_string(),
            "genus": family.genus,
            "n": family.matrix,
            "nnt": product,
            "pf": pf,
            "mu": family.mu(),
            "upper_bound": upper,
        })),
        Format::Csv | Format::Text => {
            let mut s = String::from("# N\n");
            s.push_str(&matrix_csv(&family.matrix));
            s.push_str("# NN^t\n");
            s.push_str(&matrix_csv(&product));
            s.push_str("# pf\nvalue_lower,value_upper,exact,iterations\n");
            s.push_str(&format!("{},{},{},{}\n", pf.value_lower, pf.value_upper, pf.exact, pf.iterations));
            s
        }
    })
}

fn bounds_for(group: Group, genus: u32, r: Option<u64>, p: Option<u64>, b: Option<u64>) -> std::result::Result<Vec<BoundResult>, Failure> {
    if genus < 2 {
        return usage("--genus must be >= 2");
    }
    Ok(match group {
        Group::Torelli => vec![torelli_lower(), multitwist_upper(&torelli_family(genus)?)?],
        Group::Johnson => {
            let mut k = surgery_lower(4, 1)?;
            k.validity_note = "every pseudo-Anosov element of the Johnson kernel, genus >= 2".into();
            vec![k, multitwist_upper(&torelli_family(genus)?)?]
        }
        Group::Congruence => {
            let Some(r) = r else { return usage("--r is required for the congruence group") };
            vec![congruence_lower(r)?, multitwist_upper(&torelli_family(genus)?)?]
        }
        Group::Brunnian => {
            let Some(p) = p else { return usage("--p is required for the brunnian group") };
            vec![brunnian_lower(p)?]
        }
        Group::HironakaKin => vec![hk_upper(u64::from(genus))?],
        Group::Filtration => {
            let Some(b) = b else { return usage("--b is required for the filtration bound") };
            vec![m_of_k(b)?]
        }
    })
}

fn bound_text(b: &BoundResult) -> String {
    let [lo, hi] = interval_pair(&b.value);
    let case = b.binding_case.as_deref().map(|c| format!(" ({c})")).unwrap_or_default();
    format!("{}: [{lo}, {hi}]{case}\n  {}\n", b.name, b.validity_note)
}

fn bounds_csv(results: &[BoundResult]) -> String {
    let mut s = String::from("name,direction,lo,hi\n");
    for b in results {
        let [lo, hi] = interval_pair(&b.value);
        let direction = serde_json::to_value(b.direction).expect("enum serializes");
        s.push_str(&format!("{},{},{lo},{hi}\n", b.name, direction.as_str().unwrap_or_default()));
    }
    s
}
