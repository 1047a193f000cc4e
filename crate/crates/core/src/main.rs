//! Command-line front end: construct the stock groups, inspect files,
//! reduce central subspaces, decide isoclinism, and run the verification
//! sweeps.
//!
//! Exit codes: 0 for a positive answer (verified, isoclinic, canonical),
//! 1 for a definitive negative, 2 for an inconclusive or incomplete
//! outcome, 64 for usage and parse failures.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use conjtype::budget::{Budgets, BUDGET_ENV};
use conjtype::canon::{canonicalize_line, canonicalize_plane, canonicalize_plane_gf2, CanonResult};
use conjtype::form::{format_conjugate_type, AlternatingMap};
use conjtype::group::GroupModel;
use conjtype::isoclinism::{find_isoclinism, IsoclinismOutcome};
use conjtype::linalg::{Subspace, Vector};
use conjtype::verify::{
    verify_lemma10, verify_lemma4, verify_lemma7, verify_theorem1, verify_theorem2, PlaneScope,
    VerificationReport,
};

#[derive(Parser)]
#[command(
    name = "conjtype",
    version,
    about = "Conjugacy structure of class-2 special p-groups via commutator forms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build one of the stock groups and write its group file
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
    },
    /// Print the conjugate type of the group in a file
    Conjtype { file: PathBuf },
    /// Report whether the group in a file is a Camina group
    Camina { file: PathBuf },
    /// Reduce a central subspace of the universal form to canonical shape
    Canonicalize {
        file: PathBuf,
        /// Subspace generators: semicolon-separated W-vectors of
        /// comma-separated integers, e.g. `1,0,0,0,0,1;0,1,0,0,2,0`
        #[arg(long)]
        subspace: String,
    },
    /// Decide isoclinism of the groups in two files
    Isoclinic {
        a: PathBuf,
        b: PathBuf,
        /// Overrides every scan budget for this run
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Run a verification sweep and emit its report
    Verify {
        target: VerifyTarget,
        /// Prime, where the target allows a choice (default 3)
        #[arg(long)]
        p: Option<u64>,
        /// Generator count for the line sweep (default 4)
        #[arg(long)]
        n: Option<usize>,
        /// Write the JSON report here
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides every scan budget for this run
        #[arg(long)]
        budget: Option<u64>,
        /// Plane-sweep scope (lemma7 only)
        #[arg(long, value_enum, default_value_t = ScopeArg::Auto)]
        scope: ScopeArg,
    },
}

#[derive(Subcommand)]
enum ConstructKind {
    /// The universal special group on r + 1 generators of exponent p
    #[command(name = "g_r", alias = "g-r")]
    GR {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Upper unitriangular 3 x 3 matrices over GF(p^m)
    Heisenberg {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Describe and re-emit an existing group file
    #[command(name = "from-file", alias = "from_file")]
    FromFile {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VerifyTarget {
    Lemma4,
    Lemma7,
    Lemma10,
    Theorem1,
    Theorem2,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ScopeArg {
    Auto,
    Full,
    Family,
}

const EXIT_OK: u8 = 0;
const EXIT_NEGATIVE: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_USAGE: u8 = 64;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // keep clap's rendered help/version on stdout with success,
            // route real usage errors to the scriptable exit code
            use clap::error::ErrorKind;
            let _ = err.print();
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::from(EXIT_OK),
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn budgets_with_override(budget: Option<u64>) -> Budgets {
    match budget {
        Some(n) => Budgets::with_all(n),
        None => Budgets::from_env(),
    }
}

fn read_model(path: &Path) -> Result<GroupModel, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    GroupModel::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Construct { kind } => construct(kind),
        Command::Conjtype { file } => {
            let model = read_model(&file)?;
            let sizes = model.form().conjugate_type();
            println!("conjugate type: {}", format_conjugate_type(&sizes));
            Ok(EXIT_OK)
        }
        Command::Camina { file } => {
            let model = read_model(&file)?;
            if model.dim_w() == 0 {
                eprintln!("warning: abelian input, the Camina property is degenerate here");
            }
            let camina = model.form().is_camina();
            println!("camina: {camina}");
            Ok(if camina { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Canonicalize { file, subspace } => canonicalize_cmd(&file, &subspace),
        Command::Isoclinic { a, b, budget } => {
            let budgets = budgets_with_override(budget);
            let model_a = read_model(&a)?;
            let model_b = read_model(&b)?;
            match find_isoclinism(&model_a.derive_form(), &model_b.derive_form(), &budgets) {
                IsoclinismOutcome::Isoclinic(cert) => {
                    println!("isoclinic: yes");
                    println!("phi (on V):\n{}", cert.phi);
                    println!("theta (on W):\n{}", cert.theta);
                    Ok(EXIT_OK)
                }
                IsoclinismOutcome::NotIsoclinic { reason } => {
                    println!("isoclinic: no ({reason})");
                    Ok(EXIT_NEGATIVE)
                }
                IsoclinismOutcome::Inconclusive { reason } => {
                    println!("isoclinic: inconclusive ({reason})");
                    Ok(EXIT_INCONCLUSIVE)
                }
            }
        }
        Command::Verify {
            target,
            p,
            n,
            out,
            budget,
            scope,
        } => {
            let budgets = budgets_with_override(budget);
            let scope = match scope {
                ScopeArg::Auto => PlaneScope::Auto,
                ScopeArg::Full => PlaneScope::Full,
                ScopeArg::Family => PlaneScope::Family,
            };
            let report = match target {
                VerifyTarget::Lemma4 => {
                    verify_lemma4(p.unwrap_or(3), n.unwrap_or(4), &budgets)
                }
                VerifyTarget::Lemma7 => verify_lemma7(p.unwrap_or(3), &budgets, scope),
                VerifyTarget::Lemma10 => verify_lemma10(&budgets),
                VerifyTarget::Theorem1 => verify_theorem1(p.unwrap_or(3), &budgets),
                VerifyTarget::Theorem2 => verify_theorem2(&budgets),
            }
            .map_err(|e| e.to_string())?;
            emit_report(&report, out.as_deref())?;
            Ok(report.verdict_exit_code() as u8)
        }
    }
}

fn emit_report(report: &VerificationReport, out: Option<&Path>) -> Result<(), String> {
    print!("{}", report.summary_text());
    if let Some(path) = out {
        std::fs::write(path, report.full_json())
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        println!("report written to {}", path.display());
    }
    Ok(())
}

fn construct(kind: ConstructKind) -> Result<u8, String> {
    let budgets = Budgets::from_env();
    let (model, default_name) = match kind {
        ConstructKind::GR { p, r, out } => {
            if r < 1 {
                return Err("need r >= 1".to_string());
            }
            let field = conjtype::field::PrimeField::new(p).map_err(|e| e.to_string())?;
            let form = AlternatingMap::full(r + 1, field);
            let model = GroupModel::default_for(form);
            let name = out.unwrap_or_else(|| PathBuf::from(format!("g{r}_p{p}.group")));
            (model, name)
        }
        ConstructKind::Heisenberg { p, m, out } => {
            if m < 1 {
                return Err("need m >= 1".to_string());
            }
            let form = AlternatingMap::heisenberg(p, m).map_err(|e| e.to_string())?;
            let model = GroupModel::default_for(form);
            let name = out.unwrap_or_else(|| PathBuf::from(format!("heis_p{p}_m{m}.group")));
            (model, name)
        }
        ConstructKind::FromFile { input, out } => {
            let model = read_model(&input)?;
            let name = out.unwrap_or_else(|| {
                let mut p = input.clone();
                p.set_extension("normalized.group");
                p
            });
            (model, name)
        }
    };

    let form = model.form();
    let (p, exp) = form.order_exponent();
    println!("p: {}", p);
    println!("generators (dim V): {}", form.dim_v());
    println!("derived subgroup dimension (dim W): {}", form.dim_w());
    println!("order: {}^{} (= {})", p, exp, model.order());
    println!(
        "conjugate type: {}",
        format_conjugate_type(&form.conjugate_type())
    );
    println!("camina: {}", form.is_camina());
    match model.structural_report(&budgets) {
        Ok(rep) => {
            println!("exponent: {}", rep.exponent);
            println!("special: {}", rep.is_special);
            println!("center order: {}", rep.center_order);
            println!("derived subgroup order: {}", rep.derived_order);
            println!("minimal generators: {}", rep.min_generators);
        }
        Err(conjtype::group::GroupError::BudgetExceeded { needed, budget }) => {
            println!(
                "element-level census skipped: {needed} elements exceed the budget {budget} (raise {BUDGET_ENV} to force)"
            );
        }
        Err(e) => return Err(e.to_string()),
    }

    let text = model.to_text().map_err(|e| e.to_string())?;
    std::fs::write(&default_name, text)
        .map_err(|e| format!("cannot write {}: {e}", default_name.display()))?;
    println!("wrote: {}", default_name.display());
    Ok(EXIT_OK)
}

fn parse_subspace_spec(spec: &str, form: &AlternatingMap) -> Result<Subspace, String> {
    let field = form.field();
    let mut rows = Vec::new();
    for part in spec.split(';') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let mut entries = Vec::new();
        for word in part.split(',') {
            let value: i64 = word
                .trim()
                .parse()
                .map_err(|_| format!("bad subspace entry {word:?}"))?;
            entries.push(field.elem(value));
        }
        if entries.len() != form.dim_w() {
            return Err(format!(
                "subspace vectors need {} entries, got {}",
                form.dim_w(),
                entries.len()
            ));
        }
        rows.push(Vector::new(field, entries));
    }
    if rows.is_empty() {
        return Err("empty subspace spec".to_string());
    }
    Ok(Subspace::from_rows(field, form.dim_w(), &rows))
}

fn canonicalize_cmd(file: &Path, spec: &str) -> Result<u8, String> {
    let model = read_model(file)?;
    let form = model.form();
    let subspace = parse_subspace_spec(spec, form)?;
    let result = match subspace.dim() {
        1 => canonicalize_line(form, &subspace),
        2 => {
            if form.field().p() == 2 {
                canonicalize_plane_gf2(form, &subspace)
            } else {
                canonicalize_plane(form, &subspace)
            }
        }
        d => return Err(format!("canonical forms cover dimensions 1 and 2, got {d}")),
    }
    .map_err(|e| e.to_string())?;

    match result {
        CanonResult::Canonical(s) => {
            println!("status: canonical");
            if let Some(m) = s.m_value {
                println!("m: {m}");
            }
            println!("canonical subspace:");
            for i in 0..s.subspace.dim() {
                println!("{}", s.subspace.basis_row(i));
            }
            println!("transform (on V):\n{}", s.transform);
            println!("induced map (on W):\n{}", s.theta);
            Ok(EXIT_OK)
        }
        CanonResult::Rejected(w) => {
            println!("status: rejected");
            println!("witness x: {}", w.x);
            println!("witness y: {}", w.y);
            println!("commutator value: {}", w.value);
            Ok(EXIT_NEGATIVE)
        }
    }
}
