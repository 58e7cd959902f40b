//! `bridgelab` — evaluate formulas, decide sequents, check proofs, and run
//! the canned Bridge scenarios from the command line.
//!
//! Exit codes are a stable contract: 0 valid/ok, 1 invalid (or golden
//! mismatch), 2 parse error, 3 semantic error, 4 enumeration cap exceeded.

use std::collections::BTreeSet;
use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use bridgelab::consequence::{
    agreement, valid, ConsequenceError, Relation, Sequent, DEFAULT_CAP,
};
use bridgelab::proofs::{builtin, check_proof, Proof, ProofError};
use bridgelab::scenarios::{golden, scenario_json, ScenarioError, SCENARIO_NAMES};
use bridgelab::semantics::{eval, ConnectiveFamily, Model, SemanticsError};
use bridgelab::syntax::{parse, Formula, SyntaxError};

#[derive(Parser)]
#[command(name = "bridgelab", version, about = "Many-valued logic engine for the Bridge paradox")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonFlags {
    /// Connective family for -> and <->
    #[arg(long, default_value = "strong-kleene")]
    family: ConnectiveFamily,
    /// Enumeration cap in ground atoms (env: BRIDGELAB_CAP)
    #[arg(long, env = "BRIDGELAB_CAP", default_value_t = DEFAULT_CAP)]
    cap: usize,
    /// Emit JSON instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula in a model
    Eval {
        formula: String,
        /// Model file (JSON)
        #[arg(short, long)]
        model: String,
        /// Print a per-subformula value table
        #[arg(long)]
        trace: bool,
        /// Force the transparency constraint on the model
        #[arg(long)]
        transparent: bool,
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Decide a sequent from a JSON file
    Check {
        sequent: String,
        /// Consequence relation
        #[arg(long)]
        relation: Option<Relation>,
        /// Force the transparency constraint
        #[arg(long)]
        transparent: bool,
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Check a proof script, per step, under one or more relations
    Proof {
        /// Path to a proof script, or builtin:<name>
        proof: String,
        /// Comma-separated relations; the first is primary for the exit code
        #[arg(long, value_delimiter = ',', default_value = "cl")]
        relation: Vec<Relation>,
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Run a canned scenario
    Scenario {
        #[command(subcommand)]
        action: ScenarioAction,
    },
    /// Exhaustively compare the five relations on a small formula pool
    Agreement {
        /// Maximum connective depth of the pool
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[command(flatten)]
        flags: CommonFlags,
    },
}

#[derive(Subcommand)]
enum ScenarioAction {
    /// Run one scenario and print its report
    Run {
        name: String,
        /// Emit the full JSON report
        #[arg(long)]
        json: bool,
        /// Compare against the pinned golden report
        #[arg(long)]
        check_golden: bool,
    },
    /// List the available scenarios
    List,
}

#[derive(Debug)]
enum CliError {
    Parse(String),
    Semantic(String),
    CapExceeded(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Parse(_) => ExitCode::from(2),
            CliError::Semantic(_) => ExitCode::from(3),
            CliError::CapExceeded(_) => ExitCode::from(4),
            CliError::Io(_) => ExitCode::from(2),
        }
    }
    fn message(&self) -> &str {
        match self {
            CliError::Parse(m)
            | CliError::Semantic(m)
            | CliError::CapExceeded(m)
            | CliError::Io(m) => m,
        }
    }
}

impl From<SyntaxError> for CliError {
    fn from(e: SyntaxError) -> Self {
        match e {
            SyntaxError::UnboundName { .. } => CliError::Semantic(e.to_string()),
            other => CliError::Parse(other.to_string()),
        }
    }
}

impl From<SemanticsError> for CliError {
    fn from(e: SemanticsError) -> Self {
        match e {
            SemanticsError::Syntax(_) => CliError::Parse(e.to_string()),
            other => CliError::Semantic(other.to_string()),
        }
    }
}

impl From<ConsequenceError> for CliError {
    fn from(e: ConsequenceError) -> Self {
        match e {
            ConsequenceError::CapExceeded { .. } => CliError::CapExceeded(e.to_string()),
            ConsequenceError::Syntax(_) => CliError::Parse(e.to_string()),
            ConsequenceError::Semantics(_) => CliError::Semantic(e.to_string()),
        }
    }
}

impl From<ProofError> for CliError {
    fn from(e: ProofError) -> Self {
        match e {
            ProofError::Consequence(inner) => inner.into(),
            ProofError::Syntax(_) | ProofError::Script { .. } => CliError::Parse(e.to_string()),
            other => CliError::Semantic(other.to_string()),
        }
    }
}

impl From<ScenarioError> for CliError {
    fn from(e: ScenarioError) -> Self {
        match e {
            ScenarioError::Syntax(inner) => inner.into(),
            ScenarioError::Semantics(inner) => inner.into(),
            ScenarioError::Consequence(inner) => inner.into(),
            ScenarioError::Proof(inner) => inner.into(),
            other => CliError::Semantic(other.to_string()),
        }
    }
}

fn read_file(path: &str) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))
}

/// Subformulas in evaluation order (children first, outermost last),
/// deduplicated by rendering.
fn subformulas(f: &Formula, out: &mut Vec<Formula>, seen: &mut BTreeSet<String>) {
    match f {
        // `Fut` over a ground atom is itself a ground atom key, so its body
        // is not separately evaluable.
        Formula::Falsum | Formula::Atom(..) | Formula::TruePred(_) | Formula::Fut(_) => {}
        Formula::Not(a) | Formula::Simp(a) => subformulas(a, out, seen),
        Formula::And(a, b)
        | Formula::Or(a, b)
        | Formula::Cond(a, b)
        | Formula::Bicond(a, b) => {
            subformulas(a, out, seen);
            subformulas(b, out, seen);
        }
        Formula::Forall(_, a) | Formula::Exists(_, a) => subformulas(a, out, seen),
    }
    if seen.insert(f.to_string()) {
        out.push(f.clone());
    }
}

fn cmd_eval(
    formula: &str,
    model_path: &str,
    trace: bool,
    transparent: bool,
    flags: &CommonFlags,
) -> Result<ExitCode, CliError> {
    let mut model = Model::from_json(&read_file(model_path)?)?;
    if transparent {
        model.transparent = true;
    }
    let f = parse(formula, &model.names)?;
    let value = eval(&f, &model, flags.family)?;
    let mut rows = Vec::new();
    if trace {
        let mut subs = Vec::new();
        subformulas(&f, &mut subs, &mut BTreeSet::new());
        for sub in subs {
            rows.push((sub.to_string(), eval(&sub, &model, flags.family)?));
        }
    }
    if flags.json {
        let report = json!({
            "formula": f.to_string(),
            "value": value,
            "trace": rows
                .iter()
                .map(|(s, v)| json!({ "formula": s, "value": v }))
                .collect::<Vec<_>>(),
        });
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
    } else {
        if trace {
            let width = rows.iter().map(|(s, _)| s.len()).max().unwrap_or(0);
            for (s, v) in &rows {
                println!("{s:width$}  {v}");
            }
        } else {
            println!("{value}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_check(
    path: &str,
    relation: Option<Relation>,
    transparent: bool,
    flags: &CommonFlags,
) -> Result<ExitCode, CliError> {
    let (mut seq, file_relation, file_family) = Sequent::from_json(&read_file(path)?)?;
    if transparent {
        seq.transparent = true;
    }
    let relation = relation.or(file_relation).unwrap_or(Relation::Cl);
    let family = file_family.unwrap_or(flags.family);
    let verdict = valid(&seq, relation, family, flags.cap)?;
    if flags.json {
        let mut report = verdict.to_json_value();
        report["relation"] = json!(relation.to_string());
        report["family"] = json!(family.to_string());
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
    } else {
        let status = if verdict.valid { "valid" } else { "invalid" };
        println!(
            "{} under {} ({}; {} models checked)",
            status, relation, family, verdict.models_checked
        );
        if let Some(cm) = &verdict.countermodel {
            println!("countermodel:");
            for (atom, v) in &cm.atoms {
                println!("  {atom} = {v}");
            }
        }
    }
    Ok(if verdict.valid {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_proof(spec: &str, relations: &[Relation], flags: &CommonFlags) -> Result<ExitCode, CliError> {
    let proof = match spec.strip_prefix("builtin:") {
        Some(name) => builtin(name)?,
        None => Proof::from_script(&read_file(spec)?)?,
    };
    let verdicts = check_proof(&proof, relations, flags.family, flags.cap)?;
    let primary = relations[0];
    let all_valid = verdicts.iter().all(|v| v.per_relation[&primary].valid);
    if flags.json {
        let report = json!({
            "relations": relations.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
            "family": flags.family.to_string(),
            "allValidPrimary": all_valid,
            "steps": verdicts.iter().map(|v| v.to_json_value()).collect::<Vec<_>>(),
        });
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
    } else {
        let cols: Vec<String> = relations.iter().map(|r| r.to_string()).collect();
        println!("{:>4}  {:10}  {}  formula", "step", "rule", cols.join("  "));
        for v in &verdicts {
            let marks: Vec<String> = relations
                .iter()
                .map(|r| {
                    let w = &v.per_relation[r];
                    format!("{:>width$}", if w.valid { "ok" } else { "NO" }, width = r.to_string().len())
                })
                .collect();
            println!(
                "{:>4}  {:10}  {}  {}",
                v.id,
                v.rule.to_string(),
                marks.join("  "),
                v.sequent.conclusion
            );
        }
        for v in &verdicts {
            for r in relations {
                if let Some(cm) = &v.per_relation[r].countermodel {
                    println!("step {} fails under {}; countermodel:", v.id, r);
                    for (atom, val) in &cm.atoms {
                        println!("  {atom} = {val}");
                    }
                }
            }
        }
    }
    Ok(if all_valid {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_scenario(action: &ScenarioAction) -> Result<ExitCode, CliError> {
    match action {
        ScenarioAction::List => {
            for name in SCENARIO_NAMES {
                println!("{name}");
            }
            Ok(ExitCode::SUCCESS)
        }
        ScenarioAction::Run {
            name,
            json: as_json,
            check_golden,
        } => {
            let report = scenario_json(name)?;
            if *check_golden {
                match golden(name) {
                    Some(pinned) if pinned == report => {
                        println!("{name}: matches golden report");
                        Ok(ExitCode::SUCCESS)
                    }
                    Some(_) => {
                        eprintln!("{name}: report differs from golden file");
                        Ok(ExitCode::from(1))
                    }
                    None => Err(CliError::Semantic(format!("no golden file for `{name}`"))),
                }
            } else if *as_json {
                print!("{report}");
                Ok(ExitCode::SUCCESS)
            } else {
                let v: serde_json::Value = serde_json::from_str(&report).unwrap();
                println!("{}: {}", name, v["reading"].as_str().unwrap_or(""));
                match name.as_str() {
                    "buridan" => println!(
                        "~phi holds in all {} classical transparent completions",
                        v["classicalTransparentCompletions"]
                    ),
                    "cervantes" => println!(
                        "b = {}, phi = {} in the 1/2 model",
                        v["values"]["b"].as_str().unwrap_or("?"),
                        v["values"]["phi"].as_str().unwrap_or("?")
                    ),
                    "jacquette" => println!(
                        "Simp True(b) = {}, Simp ~True(b) = {}",
                        v["halfModelValues"]["Simp True(b)"].as_str().unwrap_or("?"),
                        v["halfModelValues"]["Simp ~True(b)"].as_str().unwrap_or("?")
                    ),
                    "liar-bridge" => println!(
                        "no classical transparent model; {} half model(s) admitted",
                        v["admittedModels"].as_array().map(|a| a.len()).unwrap_or(0)
                    ),
                    _ => {}
                }
                println!("(use --json for the full report)");
                Ok(ExitCode::SUCCESS)
            }
        }
    }
}

fn cmd_agreement(depth: usize, flags: &CommonFlags) -> Result<ExitCode, CliError> {
    let report = agreement::classical_agreement(depth, flags.family);
    if flags.json {
        let out = json!({
            "poolSize": report.pool_size,
            "sequentsChecked": report.sequents_checked,
            "valid": {
                "cl": report.cl_valid,
                "ss": report.ss_valid,
                "tt": report.tt_valid,
                "st": report.st_valid,
                "ts": report.ts_valid,
            },
            "violations": report.violations,
        });
        println!("{}", serde_json::to_string_pretty(&out).unwrap());
    } else {
        println!(
            "pool: {} formulas (depth <= {}), {} sequents checked",
            report.pool_size, depth, report.sequents_checked
        );
        println!(
            "valid counts: cl={} ss={} tt={} st={} ts={}",
            report.cl_valid, report.ss_valid, report.tt_valid, report.st_valid, report.ts_valid
        );
        if report.violations.is_empty() {
            println!("containments hold: ss <= st, ts <= ss & tt, st = cl");
        } else {
            for v in &report.violations {
                println!("violation: {v}");
            }
        }
    }
    Ok(if report.violations.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn run(cli: &Cli) -> Result<ExitCode, CliError> {
    match &cli.command {
        Command::Eval {
            formula,
            model,
            trace,
            transparent,
            flags,
        } => cmd_eval(formula, model, *trace, *transparent, flags),
        Command::Check {
            sequent,
            relation,
            transparent,
            flags,
        } => cmd_check(sequent, *relation, *transparent, flags),
        Command::Proof {
            proof,
            relation,
            flags,
        } => cmd_proof(proof, relation, flags),
        Command::Scenario { action } => cmd_scenario(action),
        Command::Agreement { depth, flags } => cmd_agreement(*depth, flags),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}
