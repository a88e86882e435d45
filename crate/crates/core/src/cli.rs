//! The `mpinc` command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error,
//! 3 the requested characteristic divides a denominator.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use crate::arith::{rat_mod_p, Rational};
use crate::charp::Admissibility;
use crate::combinatorics::{binomial, gaussian_binomial, q_integer};
use crate::design::{
    build_design_incidence, m1_mpinv_closed_form, ms_mpinv_oracle, read_design, survey_designs,
    ValidatedDesign,
};
use crate::error::{Error, Result};
use crate::format::{write_csv, write_json, write_mtx, Format};
use crate::incidence::IncidenceMatrix;
use crate::linalg::RatMatrix;
use crate::set_incidence::{build_set_incidence, set_admissibility, set_mpinv};
use crate::subspace::{build_subspace_incidence, subspace_admissibility, subspace_mpinv};
use crate::verify::{
    verify_design, verify_set, verify_set_mod_p, verify_subspace, verify_subspace_mod_p, verify_sweep,
    VerifyReport, SUBSPACE_SWEEP,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INADMISSIBLE: i32 = 3;

/// Inclusion matrices and their exact Moore-Penrose inverses.
#[derive(Debug, Parser)]
#[command(name = "mpinc", version, about)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Emit an incidence matrix.
    Build {
        #[command(subcommand)]
        target: Target,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Emit the closed-form pseudoinverse.
    Mpinv {
        #[command(subcommand)]
        target: Target,
        #[command(flatten)]
        output: OutputArgs,
        /// Emit the full matrix instead of one value per intersection class.
        #[arg(long, global = true)]
        expand: bool,
        /// Reduce modulo this prime.
        #[arg(long = "mod", value_name = "P", global = true)]
        modulus: Option<u64>,
        /// Check the result against the oracle before emitting it.
        #[arg(long, global = true)]
        verify: bool,
    },
    /// Check the closed form against the Penrose conditions and the oracle.
    Verify {
        #[command(subcommand)]
        target: VerifyTarget,
        /// Check the reduction modulo this prime over GF(p) instead.
        #[arg(long = "mod", value_name = "P", global = true)]
        modulus: Option<u64>,
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Group the pseudoinverse entries of every design in a directory by intersection size.
    Survey {
        /// Directory of `*.blk` design files sharing parameters.
        #[arg(long)]
        dir: PathBuf,
        #[arg(long)]
        s: usize,
        /// Strength to validate at; defaults to the header, else the largest that holds.
        #[arg(long)]
        t: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integer helpers.
    Calc {
        #[command(subcommand)]
        op: CalcOp,
    },
}

#[derive(Debug, Clone, Subcommand)]
enum Target {
    /// r-subsets against c-subsets of [n].
    Set(SetArgs),
    /// r-subspaces against c-subspaces of GF(q)^n.
    Subspace(SubspaceArgs),
    /// s-subsets of points against blocks of a design file.
    Design(DesignArgs),
}

#[derive(Debug, Clone, Subcommand)]
enum VerifyTarget {
    Set(SetArgs),
    Subspace(SubspaceArgs),
    Design(DesignArgs),
    /// Every set triple up to --max-n and the standard subspace tuples.
    Sweep {
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        #[arg(long, value_enum, default_value_t = SweepKind::All)]
        kind: SweepKind,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepKind {
    All,
    Set,
    Subspace,
}

#[derive(Debug, Clone, Args)]
struct SetArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    c: usize,
}

#[derive(Debug, Clone, Args)]
struct SubspaceArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    q: u64,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    c: usize,
}

#[derive(Debug, Clone, Args)]
struct DesignArgs {
    #[arg(long)]
    file: PathBuf,
    #[arg(long)]
    s: usize,
    #[arg(long)]
    t: Option<usize>,
}

#[derive(Debug, Clone, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Include row and column labels (JSON only).
    #[arg(long, global = true)]
    with_labels: bool,
}

#[derive(Debug, Clone, Subcommand)]
enum CalcOp {
    /// C(n, m).
    Binomial {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
    },
    /// [n, m]_q.
    Gaussian {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long)]
        q: u64,
    },
    /// [n]_q = 1 + q + ... + q^(n-1).
    Qint {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        q: u64,
    },
}

/// How a command ended, before mapping to an exit code.
enum Failure {
    Lib(Error),
    Verify(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type CmdResult = std::result::Result<(), Failure>;

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ =
                if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(()) => EXIT_OK,
        Err(Failure::Verify(msg)) => {
            let _ = writeln!(stderr, "verification failed: {msg}");
            EXIT_VERIFY
        }
        Err(Failure::Lib(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            match e {
                Error::Inadmissible { .. } | Error::NotReducible { .. } => EXIT_INADMISSIBLE,
                _ => EXIT_USAGE,
            }
        }
    }
}

/// Caps rayon's global pool at `MPINC_THREADS` when set.
pub fn configure_threads() {
    if let Some(n) = std::env::var("MPINC_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("could not size the thread pool: {e}");
        }
    }
}

fn dispatch(cmd: Command, stdout: &mut dyn Write) -> CmdResult {
    match cmd {
        Command::Build { target, output } => cmd_build(&target, &output, stdout),
        Command::Mpinv { target, output, expand, modulus, verify } => {
            cmd_mpinv(&target, &output, expand, modulus, verify, stdout)
        }
        Command::Verify { target, modulus, out } => cmd_verify(&target, modulus, out.as_deref(), stdout),
        Command::Survey { dir, s, t, out } => cmd_survey(&dir, s, t, out.as_deref(), stdout),
        Command::Calc { op } => {
            let value = match op {
                CalcOp::Binomial { n, m } => binomial(n, m),
                CalcOp::Gaussian { n, m, q } => {
                    check_q(q)?;
                    gaussian_binomial(n, m, q)
                }
                CalcOp::Qint { n, q } => {
                    check_q(q)?;
                    q_integer(n, q)
                }
            };
            emit(None, &format!("{value}\n"), stdout)
        }
    }
}

fn check_q(q: u64) -> Result<()> {
    if q < 2 {
        return Err(Error::Parameter(format!("q must be at least 2, got {q}")));
    }
    Ok(())
}

fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> CmdResult {
    match out {
        Some(path) => std::fs::write(path, text).map_err(Error::from)?,
        None => stdout.write_all(text.as_bytes()).map_err(Error::from)?,
    }
    Ok(())
}

fn load_design(args: &DesignArgs) -> Result<ValidatedDesign> {
    let name = args.file.display();
    let d = read_design(&args.file).map_err(|e| Error::Format(format!("{name}: {e}")))?;
    match args.t {
        Some(t) => ValidatedDesign::new(d, t),
        None => ValidatedDesign::infer(d),
    }
    .map_err(|e| Error::Format(format!("{name}: {e}")))
}

fn incidence(target: &Target) -> Result<IncidenceMatrix> {
    match target {
        Target::Set(a) => build_set_incidence(a.n, a.r, a.c),
        Target::Subspace(a) => build_subspace_incidence(a.n, a.q, a.r, a.c),
        Target::Design(a) => build_design_incidence(load_design(a)?.design(), a.s),
    }
}

fn cmd_build(target: &Target, output: &OutputArgs, stdout: &mut dyn Write) -> CmdResult {
    let m = incidence(target)?;
    let text = match output.format {
        Format::Mtx => {
            labels_need_json(output)?;
            write_mtx(&m)
        }
        _ => render(&m.to_rational(), output, Some(&m), false)?,
    };
    emit(output.out.as_deref(), &text, stdout)
}

fn labels_need_json(output: &OutputArgs) -> Result<()> {
    if output.with_labels && output.format != Format::Json {
        return Err(Error::Parameter("--with-labels needs --format json".into()));
    }
    Ok(())
}

/// Writes a rational matrix as CSV or JSON. `labels_from` supplies labels when
/// requested; `swap` exchanges its row and column labels (for pseudoinverses).
fn render(
    m: &RatMatrix,
    output: &OutputArgs,
    labels_from: Option<&IncidenceMatrix>,
    swap: bool,
) -> Result<String> {
    labels_need_json(output)?;
    match output.format {
        Format::Csv => Ok(write_csv(m)),
        Format::Json => {
            let labels = match (output.with_labels, labels_from) {
                (true, Some(inc)) if swap => Some((inc.col_labels(), inc.row_labels())),
                (true, Some(inc)) => Some((inc.row_labels(), inc.col_labels())),
                _ => None,
            };
            write_json(m, labels)
        }
        Format::Mtx => {
            Err(Error::Parameter("mtx holds 0/1 patterns only; use csv or json for rational matrices".into()))
        }
    }
}

fn require(adm: Admissibility) -> Result<()> {
    match adm.offending().next() {
        Some(f) => Err(Error::Inadmissible { p: adm.p, factor: format!("{} = {}", f.label, f.value) }),
        None => Ok(()),
    }
}

fn residues(m: &RatMatrix, p: u64) -> Result<RatMatrix> {
    m.try_map(|x| rat_mod_p(x, p).map(|r| Rational::from_integer(r.value())))
}

fn class_json(values: &[Rational], p: Option<u64>) -> Result<String> {
    let mut map = Map::new();
    for (i, v) in values.iter().enumerate().rev() {
        let shown = match p {
            Some(p) => rat_mod_p(v, p)?.value().to_string(),
            None => v.to_string(),
        };
        map.insert(format!("i={i}"), Value::String(shown));
    }
    Ok(format!("{}\n", serde_json::to_string(&Value::Object(map)).expect("plain JSON")))
}

fn fail_unless_passed(rep: &VerifyReport) -> CmdResult {
    match &rep.first_failure {
        None => Ok(()),
        Some(m) => Err(Failure::Verify(format!(
            "{}: {} fails at ({}, {}): expected {}, found {}",
            rep.subject, m.check, m.row, m.col, m.expected, m.found
        ))),
    }
}

fn cmd_mpinv(
    target: &Target,
    output: &OutputArgs,
    expand: bool,
    modulus: Option<u64>,
    verify: bool,
    stdout: &mut dyn Write,
) -> CmdResult {
    if let Some(p) = modulus {
        match target {
            Target::Set(a) => require(set_admissibility(a.n, a.r, a.c, p)?)?,
            Target::Subspace(a) => require(subspace_admissibility(a.n, a.q, a.r, a.c, p)?)?,
            Target::Design(_) => {
                if !crate::arith::is_prime(p) {
                    return Err(Error::NotPrime(p).into());
                }
            }
        }
    }
    if verify {
        let rep = match target {
            Target::Set(a) => verify_set(a.n, a.r, a.c)?,
            Target::Subspace(a) => verify_subspace(a.n, a.q, a.r, a.c)?,
            Target::Design(a) => verify_design(&load_design(a)?, a.s)?,
        };
        fail_unless_passed(&rep)?;
    }
    let (matrix, source) = match target {
        Target::Set(a) => {
            let cm = set_mpinv(a.n, a.r, a.c)?;
            if !expand {
                return emit(output.out.as_deref(), &class_json(&cm.values, modulus)?, stdout);
            }
            (cm.expand(), None)
        }
        Target::Subspace(a) => {
            let cm = subspace_mpinv(a.n, a.q, a.r, a.c)?;
            if !expand {
                return emit(output.out.as_deref(), &class_json(&cm.values, modulus)?, stdout);
            }
            (cm.expand()?, None)
        }
        // Design inverses have no class form in general, so they are always emitted in full.
        Target::Design(a) => {
            let vd = load_design(a)?;
            let p = vd.params();
            let m = if a.s == 1 && p.t >= 2 && p.v > p.k {
                m1_mpinv_closed_form(&vd)?
            } else {
                ms_mpinv_oracle(vd.design(), a.s)?
            };
            (m, Some(vd))
        }
    };
    let matrix = match modulus {
        Some(p) => residues(&matrix, p)?,
        None => matrix,
    };
    let labels = if output.with_labels {
        Some(match (target, &source) {
            (Target::Design(a), Some(vd)) => build_design_incidence(vd.design(), a.s)?,
            _ => incidence(target)?,
        })
    } else {
        None
    };
    let text = render(&matrix, output, labels.as_ref(), true)?;
    emit(output.out.as_deref(), &text, stdout)
}

fn report_json(rep: &VerifyReport) -> String {
    format!("{}\n", serde_json::to_string_pretty(rep).expect("report serializes"))
}

fn cmd_verify(
    target: &VerifyTarget,
    modulus: Option<u64>,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> CmdResult {
    let rep = match (target, modulus) {
        (VerifyTarget::Set(a), None) => verify_set(a.n, a.r, a.c)?,
        (VerifyTarget::Set(a), Some(p)) => verify_set_mod_p(a.n, a.r, a.c, p)?,
        (VerifyTarget::Subspace(a), None) => verify_subspace(a.n, a.q, a.r, a.c)?,
        (VerifyTarget::Subspace(a), Some(p)) => verify_subspace_mod_p(a.n, a.q, a.r, a.c, p)?,
        (VerifyTarget::Design(a), None) => verify_design(&load_design(a)?, a.s)?,
        (VerifyTarget::Design(_), Some(_)) => {
            return Err(Error::Parameter("--mod is not supported for designs".into()).into())
        }
        (VerifyTarget::Sweep { max_n, kind }, _) => {
            if modulus.is_some() {
                return Err(Error::Parameter("--mod is not supported for sweeps".into()).into());
            }
            let sets = (*kind != SweepKind::Subspace).then_some(*max_n);
            let subs: &[(u64, usize)] = if *kind == SweepKind::Set { &[] } else { &SUBSPACE_SWEEP };
            let reports = verify_sweep(sets, subs)?;
            let mut text = String::new();
            for r in &reports {
                let status = if r.passed() { "PASS" } else { "FAIL" };
                text.push_str(&format!("{status} {} regime {}\n", r.subject, r.regime.expected.join(",")));
            }
            let passed = reports.iter().filter(|r| r.passed()).count();
            text.push_str(&format!("{passed} of {} passed\n", reports.len()));
            emit(out, &text, stdout)?;
            return match reports.iter().find(|r| !r.passed()) {
                Some(r) => fail_unless_passed(r),
                None => Ok(()),
            };
        }
    };
    emit(out, &report_json(&rep), stdout)?;
    fail_unless_passed(&rep)
}

fn cmd_survey(
    dir: &Path,
    s: usize,
    t: Option<usize>,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> CmdResult {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "blk"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(Error::Parameter(format!("no .blk files in {}", dir.display())).into());
    }
    let designs = files
        .iter()
        .map(|f| {
            let id = f.file_name().unwrap().to_string_lossy().into_owned();
            load_design(&DesignArgs { file: f.clone(), s, t }).map(|d| (id, d))
        })
        .collect::<Result<Vec<_>>>()?;
    let report = survey_designs(&designs, s)?;
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    emit(out, &format!("{text}\n"), stdout)
}
