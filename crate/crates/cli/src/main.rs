use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use gkcalc_core::fuzz::{fuzz_relations, FuzzConfig};
use gkcalc_core::ktheory::{class_with, kgroup};
use gkcalc_core::normalizer::{FusionRule, Normalizer};
use gkcalc_core::oracle::Oracle;
use gkcalc_core::words::expand;
use gkcalc_core::workspace::{max_dim_from_env, Workspace, DEFAULT_CORPUS};
use gkcalc_core::Error;

#[derive(Parser)]
#[command(name = "gkcalc", version, about = "Equivariant K-theory of finite-dimensional G-algebras from morphism words")]
struct Cli {
    /// Workspace file; the built-in corpus is used when omitted.
    #[arg(long, global = true)]
    workspace: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fusion {
    Auto,
    Full,
    Simplified,
    /// Deliberately wrong; for checking that the harness catches errors.
    Broken,
}

impl From<Fusion> for FusionRule {
    fn from(f: Fusion) -> FusionRule {
        match f {
            Fusion::Auto => FusionRule::Auto,
            Fusion::Full => FusionRule::Full,
            Fusion::Simplified => FusionRule::Simplified,
            Fusion::Broken => FusionRule::Broken,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Load the workspace and run every validation check.
    Validate,
    /// Compute the equivariant K₀ group of an algebra with explicit generators.
    Kgroup { algebra: String },
    /// Evaluate a word out of ℂ and report its class.
    Product {
        word: String,
        /// Emit the standard-form certificate of every fold step.
        #[arg(long)]
        emit_certificate: bool,
        /// Emit the typed expression tree.
        #[arg(long)]
        dump_ast: bool,
        #[arg(long, value_enum, default_value_t = Fusion::Auto)]
        fusion: Fusion,
    },
    /// Check every one-step relation rewrite on random words.
    FuzzRelations {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, value_enum, default_value_t = Fusion::Auto, hide = true)]
        fusion: Fusion,
    },
}

/// A finished command: exit code plus both renderings.
struct Report {
    code: u8,
    text: String,
    machine: Value,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Indeterminate(_) => 1,
        Error::Validation(_) | Error::Word(_) | Error::Workspace(_) => 2,
        Error::Internal(_) => 3,
    }
}

fn load(cli: &Cli) -> Result<Workspace, Error> {
    let cap = max_dim_from_env()?;
    let text = match &cli.workspace {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Error::Workspace(format!("{}: {e}", path.display())))?,
        None => DEFAULT_CORPUS.to_string(),
    };
    Workspace::from_json(&text, cap)
}

fn validate(ws: &Workspace) -> Report {
    let mut text = String::from("workspace OK\n");
    let mut algebras = Vec::new();
    for (name, a) in ws.algebras() {
        let decidable = Oracle::new(a).map(|_| "decidable".to_string()).unwrap_or_else(|e| format!("indeterminate: {e}"));
        text.push_str(&format!("  algebra {name}: dim {}, group of order {}, {decidable}\n", a.dim(), a.group().order()));
        algebras.push(json!({ "name": name, "dim": a.dim(), "group_order": a.group().order(), "oracle": decidable }));
    }
    let counts = [
        ("groups", ws.group_count()),
        ("homs", ws.homs().count()),
        ("corners", ws.corners().count()),
        ("homotopies", ws.homotopies().count()),
        ("sequences", ws.sequences().count()),
        ("words", ws.words().count()),
    ];
    for (k, n) in counts {
        text.push_str(&format!("  {k}: {n}\n"));
    }
    let mut machine = json!({ "status": "ok", "algebras": algebras });
    for (k, n) in counts {
        machine[k] = n.into();
    }
    Report { code: 0, text, machine }
}

fn kgroup_report(ws: &Workspace, name: &str) -> Result<Report, Error> {
    let (_, a) = ws.algebras().find(|(n, _)| *n == name).ok_or_else(|| Error::Workspace(format!("unknown algebra {name:?}")))?;
    let k = kgroup(a)?;
    let mut text = format!("K_0^G({name}) = {k}\n");
    let mut gens = Vec::new();
    for g in &k.generators {
        text.push_str(&format!("  block {} irreducible {}: key {} (size {})\n", g.block, g.irreducible, g.key, g.element.size()));
        gens.push(json!({ "block": g.block, "irreducible": g.irreducible, "key": g.key.blocks, "size": g.element.size() }));
    }
    let machine = json!({ "status": "ok", "algebra": name, "group": k.summary(), "rank": k.rank(), "generators": gens });
    Ok(Report { code: 0, text, machine })
}

fn product_report(ws: &Workspace, text: &str, certificates: bool, ast: bool, rule: FusionRule) -> Result<Report, Error> {
    let word = ws.parse_word(text)?;
    let normalizer = Normalizer::new(rule);
    let z = normalizer.phi(&word)?;
    let target = word.target().clone();
    let mut out = format!("word: {text}\ntype: {} -> {}\n", word.source().name(), target.name());
    let mut machine = json!({ "word": text, "source": word.source().name(), "target": target.name(), "size": z.size() });
    if ast {
        out.push_str(&format!("ast: {}\n", word.to_json()));
        machine["ast"] = word.to_json();
    }
    if certificates {
        let mut steps = Vec::new();
        for (t, term) in expand(&word).terms.iter().enumerate() {
            let (_, certs) = normalizer.traced_product(word.source(), &term.letters)?;
            for (k, (label, cert)) in certs.into_iter().enumerate() {
                out.push_str(&format!("certificate: term {t} step {k} ({label}) verified\n"));
                steps.push(json!({ "term": t, "step": k, "letter": label, "certificate": cert.to_json() }));
            }
        }
        machine["certificates"] = Value::Array(steps);
    }
    let verdict = Oracle::new(&target).map_err(Error::from).and_then(|o| class_with(&o, &z));
    let code = match verdict.as_ref().map(|c| c.key()) {
        Ok(Ok(key)) => {
            out.push_str(&format!("class: {key}\n"));
            machine["status"] = "ok".into();
            machine["key"] = json!(key.blocks);
            0
        }
        Ok(Err(reason)) => {
            out.push_str(&format!("class: Indeterminate ({reason})\n"));
            machine["status"] = "indeterminate".into();
            machine["reason"] = reason.to_string().into();
            1
        }
        Err(Error::Indeterminate(reason)) => {
            out.push_str(&format!("class: Indeterminate ({reason})\n"));
            machine["status"] = "indeterminate".into();
            machine["reason"] = reason.to_string().into();
            1
        }
        Err(e) => return Err(e.clone()),
    };
    Ok(Report { code, text: out, machine })
}

fn fuzz_report(ws: &Workspace, seed: u64, count: usize, rule: FusionRule) -> Result<Report, Error> {
    let report = fuzz_relations(ws, &FuzzConfig { seed, count, rule, ..FuzzConfig::default() })?;
    let code = if report.passed() { 0 } else { 2 };
    Ok(Report { code, text: report.to_text(), machine: report.to_json() })
}

fn run(cli: &Cli) -> Result<Report, Error> {
    let ws = load(cli)?;
    match &cli.command {
        Command::Validate => Ok(validate(&ws)),
        Command::Kgroup { algebra } => kgroup_report(&ws, algebra),
        Command::Product { word, emit_certificate, dump_ast, fusion } => {
            product_report(&ws, word, *emit_certificate, *dump_ast, (*fusion).into())
        }
        Command::FuzzRelations { seed, count, fusion } => fuzz_report(&ws, *seed, *count, (*fusion).into()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = run(&cli).unwrap_or_else(|e| {
        let code = exit_code(&e);
        let status = if code == 1 { "indeterminate" } else { "error" };
        Report { code, text: format!("{status}: {e}\n"), machine: json!({ "status": status, "code": code, "message": e.to_string() }) }
    });
    match cli.format {
        Format::Text if report.code == 0 => print!("{}", report.text),
        Format::Text => eprint!("{}", report.text),
        Format::Machine => println!("{}", serde_json::to_string_pretty(&report.machine).expect("report serializes")),
    }
    ExitCode::from(report.code)
}
