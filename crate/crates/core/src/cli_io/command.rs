//! Command-line entry points. Exit codes: 0 success, 1 usage or input
//! error, 2 certification failure, 3 randomized search exhausted.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use super::document::SessionDocument;
use crate::construct::{build_pd_module, rewrite_resolution, SearchConfig, DEFAULT_MAX_ATTEMPTS};
use crate::error::{Error, Result};
use crate::groebner::{prune, resolve, ResolutionData};
use crate::invariants::{
    check_exactness, check_torsionless, minimal_generator_count, ExactnessCertificate,
    TorsionlessCertificate,
};
use crate::koszul::{koszul_complex, koszul_section};
use crate::poly::{MonomialOrder, Ring};
use crate::presented::PresentedModule;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CERTIFICATION: i32 = 2;
pub const EXIT_EXHAUSTED: i32 = 3;

/// Environment variable read when `--seed` is absent.
pub const SEED_ENV: &str = "BRUNS_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "threegen",
    version,
    about = "Certified constructions with finite free resolutions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write the Koszul complex on a list of variables, or a section of it.
    Koszul {
        #[arg(long)]
        p: u32,
        /// Comma-separated variable names.
        #[arg(long)]
        vars: String,
        /// Exterior powers `A..B` of the section `∧^A -> ... -> ∧^B`.
        #[arg(long)]
        section: Option<String>,
        #[arg(long, default_value = "grevlex")]
        order: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Resolve the cokernel of a matrix by iterated syzygies.
    Resolve {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        max_length: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print exactness (and optionally torsionless) certificates as JSON.
    Check {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        complex: String,
        /// Also certify Coker(f_1) at this torsionless level.
        #[arg(long)]
        torsionless: Option<usize>,
    },
    /// Rewrite a resolution past level m so its tail resolves an ideal with
    /// at most three generators.
    Brunsify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        complex: String,
        #[arg(long)]
        m: usize,
        /// Defaults to the BRUNS_SEED environment variable, then 0.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_MAX_ATTEMPTS)]
        max_attempts: usize,
        #[arg(long)]
        out: PathBuf,
        /// Certificate report; defaults to `<out>.certs.json`.
        #[arg(long)]
        certs: Option<PathBuf>,
    },
    /// Build an m-torsionless module of rank m and projective dimension s.
    Pdmod {
        #[arg(long)]
        s: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = crate::poly::DEFAULT_CHARACTERISTIC)]
        p: u32,
        /// Defaults to the BRUNS_SEED environment variable, then 0.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_MAX_ATTEMPTS)]
        max_attempts: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Runs one command with the process environment and standard streams.
/// `argv` excludes the program name.
pub fn run_command<S: AsRef<str>>(argv: &[S]) -> i32 {
    let env_seed = std::env::var(SEED_ENV).ok();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_command_with(
        argv,
        env_seed.as_deref(),
        &mut stdout.lock(),
        &mut stderr.lock(),
    )
}

pub fn run_command_with<S: AsRef<str>>(
    argv: &[S],
    env_seed: Option<&str>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    let args = std::iter::once("threegen").chain(argv.iter().map(AsRef::as_ref));
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    return EXIT_OK;
                }
                _ => EXIT_USAGE,
            };
            let _ = write!(stderr, "{e}");
            return code;
        }
    };
    match execute(cli.command, env_seed, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Certification(_) => EXIT_CERTIFICATION,
        Error::SearchExhausted { .. } => EXIT_EXHAUSTED,
        _ => EXIT_USAGE,
    }
}

fn resolve_seed(flag: Option<u64>, env_seed: Option<&str>) -> Result<u64> {
    match (flag, env_seed) {
        (Some(s), _) => Ok(s),
        (None, Some(text)) => text.trim().parse().map_err(|_| {
            Error::Validation(format!("{SEED_ENV}={text:?} is not an unsigned integer"))
        }),
        (None, None) => Ok(0),
    }
}

fn read_document(path: &Path) -> Result<SessionDocument> {
    SessionDocument::parse(&std::fs::read_to_string(path)?)
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text)?;
    Ok(())
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("certificates serialize");
    s.push('\n');
    s
}

fn parse_section(text: &str) -> Result<(usize, usize)> {
    let bad = || Error::Validation(format!("section {text:?} should look like A..B"));
    let (a, b) = text.split_once("..").ok_or_else(bad)?;
    Ok((
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

#[derive(Serialize)]
struct CheckReport<'a> {
    complex: &'a str,
    exactness: &'a ExactnessCertificate,
    #[serde(skip_serializing_if = "Option::is_none")]
    torsionless: Option<&'a TorsionlessCertificate>,
    verdict: &'static str,
}

#[derive(Serialize)]
struct RewriteReport<'a> {
    seed: u64,
    level: usize,
    ranks: Vec<usize>,
    ideal_generators: usize,
    attempts_used: usize,
    exactness: &'a ExactnessCertificate,
    torsionless: &'a [crate::construct::LabeledCertificate],
}

#[derive(Serialize)]
struct PdReport<'a> {
    s: usize,
    m: usize,
    seed: u64,
    rank: usize,
    minimal_generators: usize,
    ranks: Vec<usize>,
    projective_dimension: usize,
    attempts_used: usize,
    torsionless: Option<&'a TorsionlessCertificate>,
}

fn execute(command: Command, env_seed: Option<&str>, stdout: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Koszul {
            p,
            vars,
            section,
            order,
            out,
        } => {
            let order = MonomialOrder::from_name(&order)
                .ok_or_else(|| Error::Validation(format!("unknown monomial order {order:?}")))?;
            let names: Vec<&str> = vars.split(',').map(str::trim).collect();
            let ring = Ring::new(p, names, order)?;
            let seq = ring.vars();
            let (name, complex) = match section {
                Some(s) => {
                    let (a, b) = parse_section(&s)?;
                    ("section", koszul_section(&seq, a, b)?)
                }
                None => ("koszul", koszul_complex(&seq)?),
            };
            let mut doc = SessionDocument::new(&ring);
            doc.add_resolution(name, "d", &complex)?;
            write_text(&out, &doc.emit())?;
            writeln!(stdout, "{name} ranks {:?}", complex.ranks())?;
            Ok(EXIT_OK)
        }
        Command::Resolve {
            input,
            matrix,
            max_length,
            out,
        } => {
            let doc = read_document(&input)?;
            let f = doc.matrix(&matrix)?;
            let bound = max_length.unwrap_or(usize::MAX);
            let mut res = resolve(f, bound);
            if res.is_graded() {
                res = prune(&res)?;
            }
            let mut out_doc = SessionDocument::new(doc.ring());
            out_doc.add_resolution("res", "f", &res)?;
            write_text(&out, &out_doc.emit())?;
            writeln!(stdout, "res ranks {:?}", res.ranks())?;
            Ok(EXIT_OK)
        }
        Command::Check {
            input,
            complex,
            torsionless,
        } => {
            let doc = read_document(&input)?;
            let res = doc.complex(&complex)?;
            let exactness = check_exactness(&res);
            let tcert = torsionless
                .map(|m| check_torsionless(&PresentedModule::new(res.presentation().clone()), m));
            let pass = exactness.passed() && tcert.as_ref().is_none_or(|c| c.passed());
            let report = CheckReport {
                complex: &complex,
                exactness: &exactness,
                torsionless: tcert.as_ref(),
                verdict: if pass { "pass" } else { "fail" },
            };
            write!(stdout, "{}", json(&report))?;
            Ok(if pass { EXIT_OK } else { EXIT_CERTIFICATION })
        }
        Command::Brunsify {
            input,
            complex,
            m,
            seed,
            max_attempts,
            out,
            certs,
        } => {
            let seed = resolve_seed(seed, env_seed)?;
            let cfg = SearchConfig::new(seed).with_max_attempts(max_attempts)?;
            let doc = read_document(&input)?;
            let res = doc.complex(&complex)?;
            let result = rewrite_resolution(&res, m, &cfg)?;
            let mut out_doc = SessionDocument::new(doc.ring());
            out_doc.add_resolution("rewritten", "f", &result.complex)?;
            out_doc.add_matrix("c", result.compression.clone())?;
            out_doc.add_ideal("a", result.ideal.clone())?;
            write_text(&out, &out_doc.emit())?;
            let report = RewriteReport {
                seed,
                level: m,
                ranks: result.complex.ranks(),
                ideal_generators: result.ideal.generators().len(),
                attempts_used: result.attempts_used,
                exactness: &result.exactness,
                torsionless: &result.certificates,
            };
            let certs = certs.unwrap_or_else(|| {
                let mut p = out.clone().into_os_string();
                p.push(".certs.json");
                PathBuf::from(p)
            });
            write_text(&certs, &json(&report))?;
            writeln!(stdout, "rewritten ranks {:?}", report.ranks)?;
            Ok(EXIT_OK)
        }
        Command::Pdmod {
            s,
            m,
            p,
            seed,
            max_attempts,
            out,
        } => {
            let seed = resolve_seed(seed, env_seed)?;
            let cfg = SearchConfig::new(seed).with_max_attempts(max_attempts)?;
            let built = build_pd_module(s, m, p, &cfg)?;
            let mut doc = SessionDocument::new(&built.ring);
            doc.add_resolution("res", "f", &built.resolution)?;
            write_text(&out, &doc.emit())?;
            let pruned: ResolutionData = prune(&built.resolution)?;
            let report = PdReport {
                s,
                m,
                seed,
                rank: built.module.rank(),
                minimal_generators: minimal_generator_count(&built.module)?,
                ranks: built.resolution.ranks(),
                projective_dimension: pruned.length(),
                attempts_used: built.attempts_used,
                torsionless: built.module.certificate(),
            };
            write!(stdout, "{}", json(&report))?;
            Ok(EXIT_OK)
        }
    }
}
