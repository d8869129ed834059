//! The `jto` binary: parse formulas, check proof scripts, validate and
//! model-check models, run the bounded countermodel search, and drive the
//! built-in case corpus.
//!
//! Exit codes: 0 success (accepted / true / SAT / all expectations pass),
//! 1 semantic rejection (rejected proof, false formula, UNSAT, failed
//! expectations), 2 usage or parse errors, 3 internal budget errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use jto_core::corpus::{load_corpus, run_case, CorpusCase};
use jto_core::cs::ConstantSpecification;
use jto_core::formats::{
    parse_jto, parse_jtom, parse_jtopf, write_jto, write_jtom_neighborhood, write_jtopf, Model,
};
use jto_core::proof::Checker;
use jto_core::search::{bounded_sat, explain_unsat, SearchBounds, SearchError};
use jto_core::semantics::{
    mc_fitting, mc_neighborhood, validate_fitting, validate_neighborhood, Universe,
};
use jto_core::syntax::{parse_formula, pretty, pretty_with};

#[derive(Parser)]
#[command(name = "jto")]
#[command(about = "Reasoning toolkit for the temporal epistemic-deontic justification logic JTO")]
#[command(version)]
struct Cli {
    /// Output style: human text or stable tab-separated lines.
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

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Semantics {
    Fitting,
    Neighborhood,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and print its tree and desugared core form.
    Parse {
        /// The formula text.
        #[arg(short = 'e', long = "expr")]
        expr: String,
    },
    /// Check a proof script against the axiom system.
    CheckProof {
        /// The .jtopf file to check.
        file: PathBuf,
        /// Constant specification: a .jto file of entries.
        #[arg(long)]
        cs: Option<PathBuf>,
        /// Scripts to check and register first (citable by name).
        #[arg(long, num_args = 1..)]
        support: Vec<PathBuf>,
    },
    /// Validate a model's frame/evidence/neighborhood conditions.
    ValidateModel {
        /// The .jtom file.
        file: PathBuf,
        /// Universe of formulas to instantiate the conditions over.
        #[arg(long)]
        universe: PathBuf,
    },
    /// Evaluate a formula at a point of a model.
    ModelCheck {
        /// The .jtom file.
        file: PathBuf,
        /// The formula text.
        #[arg(short = 'e', long = "expr")]
        expr: String,
        /// Run index.
        #[arg(long, default_value_t = 0)]
        run: usize,
        /// Position along the run.
        #[arg(long, default_value_t = 0)]
        pos: usize,
        /// Force an engine; defaults to the model's kind.
        #[arg(long, value_enum)]
        semantics: Option<Semantics>,
    },
    /// Bounded satisfiability search over lasso shapes.
    Search {
        /// Formula list (.jto); all formulas are conjoined.
        #[arg(short = 'f', long)]
        file: PathBuf,
        /// Anchor the query at this instant.
        #[arg(long)]
        at: Option<usize>,
        #[arg(long, default_value_t = 8)]
        max_stem: usize,
        #[arg(long, default_value_t = 2)]
        max_loop: usize,
        /// Also print a conflict diagnosis when UNSAT.
        #[arg(long)]
        explain: bool,
    },
    /// Run, list, or export the built-in case corpus.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Subcommand)]
enum CorpusAction {
    /// Run one case, or all of them.
    Run { name: Option<String> },
    /// List the case names.
    List,
    /// Write every case's assumptions, scripts, and models into a directory.
    Export { dir: PathBuf },
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => usage_error(msg),
    }
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Parse { expr } => match parse_formula(&expr) {
            Ok(f) => {
                let core = f.desugar();
                if cli.format == Format::Machine {
                    println!("parse\t{}\tok", pretty(&f));
                    println!("core\t{}\tok", pretty(&core));
                } else {
                    println!("tree: {f:?}");
                    println!("pretty: {}", pretty(&f));
                    println!("core: {}", pretty(&core));
                }
                Ok(ExitCode::SUCCESS)
            }
            Err(e) => Err(e.to_string()),
        },
        Command::CheckProof { file, cs, support } => {
            let script_file =
                jto_core::formats::parse_jtopf_file(&read(&file)?).map_err(|e| e.to_string())?;
            // The flag wins over the script header's reference, which is
            // resolved relative to the script.
            let cs_path = cs.or_else(|| {
                script_file.cs.as_ref().map(|rel| {
                    file.parent()
                        .map(|d| d.join(rel))
                        .unwrap_or_else(|| PathBuf::from(rel))
                })
            });
            let cs = match cs_path {
                Some(path) => {
                    let parsed = parse_jto(&read(&path)?).map_err(|e| e.to_string())?;
                    let cs = ConstantSpecification::from_formulas(parsed.formulas);
                    let report = jto_core::cs::check_cs(&cs);
                    for v in &report.violations {
                        eprintln!("warning: constant specification: {v}");
                    }
                    cs
                }
                None => ConstantSpecification::empty(),
            };
            let mut checker = Checker::new(cs);
            for path in &support {
                let (script, _) = parse_jtopf(&read(path)?).map_err(|e| e.to_string())?;
                let report = checker.check(&script);
                if !report.accepted {
                    eprintln!("support script rejected:\n{report}");
                    return Ok(ExitCode::from(1));
                }
            }
            let (script, agents) = (script_file.script, script_file.agents);
            let report = checker.check(&script);
            if cli.format == Format::Machine {
                println!(
                    "proof\t{}\t{}",
                    script.name,
                    if report.accepted { "ACCEPT" } else { "REJECT" }
                );
            } else {
                print!("{report}");
                if !report.accepted {
                    if let Some(l) = report.first_failure() {
                        let line = &script.lines[l.index - 1];
                        println!("  at: {}", pretty_with(&line.formula, &agents));
                    }
                }
            }
            Ok(if report.accepted {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::ValidateModel { file, universe } => {
            let model = parse_jtom(&read(&file)?).map_err(|e| e.to_string())?;
            let uni_file = parse_jto(&read(&universe)?).map_err(|e| e.to_string())?;
            let uni = Universe::from_formulas(uni_file.formulas.iter());
            let (name, report) = match &model {
                Model::Neighborhood(m) => (
                    m.name.clone(),
                    validate_neighborhood(m, &uni).map_err(|e| e.to_string())?,
                ),
                Model::Fitting(m) => (m.name.clone(), validate_fitting(m, &uni)),
            };
            if cli.format == Format::Machine {
                println!(
                    "validate\t{name}\t{}",
                    if report.is_valid() {
                        "valid".to_string()
                    } else {
                        format!("{} violations", report.violations.len())
                    }
                );
            } else {
                println!(
                    "{name}: {} over {} formulas and {} terms",
                    if report.is_valid() { "valid" } else { "INVALID" },
                    report.universe_formulas,
                    report.universe_terms
                );
                for v in &report.violations {
                    println!("  {v}");
                }
            }
            Ok(if report.is_valid() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::ModelCheck { file, expr, run, pos, semantics } => {
            let model = parse_jtom(&read(&file)?).map_err(|e| e.to_string())?;
            let mut agents = model.agents().clone();
            let f = jto_core::syntax::parse_formula_with(&expr, &mut agents)
                .map_err(|e| e.to_string())?;
            let value = match (&model, semantics) {
                (Model::Neighborhood(m), None | Some(Semantics::Neighborhood)) => {
                    mc_neighborhood(m, run, pos, &f)
                }
                (Model::Fitting(m), None | Some(Semantics::Fitting)) => {
                    mc_fitting(m, run, pos, &f)
                }
                _ => {
                    return Err("the requested semantics does not match the model kind".into());
                }
            }
            .map_err(|e| e.to_string())?;
            if cli.format == Format::Machine {
                println!("mc\t{}@r{run}:{pos}\t{value}", pretty_with(&f, &agents));
            } else {
                println!("{value}");
            }
            Ok(if value { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Search { file, at, max_stem, max_loop, explain } => {
            if max_loop == 0 {
                return Err("--max-loop must be at least 1".into());
            }
            let parsed = parse_jto(&read(&file)?).map_err(|e| e.to_string())?;
            let bounds = SearchBounds::new(max_stem, max_loop);
            match bounded_sat(&parsed.formulas, at, bounds) {
                Ok(verdict) => {
                    if cli.format == Format::Machine {
                        println!(
                            "search\t{}\t{}",
                            file.display(),
                            if verdict.is_sat() { "SAT" } else { "UNSAT" }
                        );
                    } else {
                        println!("{verdict}");
                        if !verdict.is_sat() {
                            println!(
                                "guarantee: no lasso with stem <= {max_stem} and loop <= {max_loop} \
                                 satisfies the modal-atom abstraction{}; the abstraction \
                                 over-approximates the logic, so no such model of that shape exists",
                                match at {
                                    Some(m) => format!(" at instant {m}"),
                                    None => String::new(),
                                }
                            );
                        }
                    }
                    let sat = verdict.is_sat();
                    if !sat && explain {
                        match explain_unsat(&parsed.formulas, at, bounds) {
                            Ok(report) => println!("{report}"),
                            Err(e) => eprintln!("explain failed: {e}"),
                        }
                    }
                    Ok(if sat { ExitCode::SUCCESS } else { ExitCode::from(1) })
                }
                Err(SearchError::BoundsTooLarge(msg)) => {
                    eprintln!("error: {msg}");
                    Ok(ExitCode::from(3))
                }
                Err(e) => Err(e.to_string()),
            }
        }
        Command::Corpus { action } => corpus_command(action, cli.format),
    }
}

fn corpus_command(action: CorpusAction, format: Format) -> Result<ExitCode, String> {
    let corpus = load_corpus();
    match action {
        CorpusAction::List => {
            for case in &corpus {
                if format == Format::Machine {
                    println!("case\t{}\t{}", case.name, case.expectations.len());
                } else {
                    println!("{}: {}", case.name, case.description);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        CorpusAction::Run { name } => {
            let selected: Vec<&CorpusCase> = match &name {
                Some(n) => {
                    let found = corpus.iter().find(|c| &c.name == n);
                    match found {
                        Some(c) => vec![c],
                        None => return Err(format!("unknown case `{n}`")),
                    }
                }
                None => corpus.iter().collect(),
            };
            let mut all_ok = true;
            for case in selected {
                let report = run_case(case).map_err(|e| e.to_string())?;
                all_ok &= report.all_pass();
                if format == Format::Machine {
                    for line in report.machine_lines() {
                        println!("{line}");
                    }
                } else {
                    print!("{report}");
                }
            }
            Ok(if all_ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        CorpusAction::Export { dir } => {
            export_corpus(&corpus, &dir).map_err(|e| e.to_string())?;
            println!("exported {} cases to {}", corpus.len(), dir.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || matches!(c, '.' | '-' | '_') { c } else { '-' })
        .collect()
}

fn export_corpus(corpus: &[CorpusCase], dir: &Path) -> std::io::Result<()> {
    for case in corpus {
        let base = dir.join(sanitize(&case.name));
        std::fs::create_dir_all(base.join("scripts"))?;
        std::fs::create_dir_all(base.join("support"))?;
        std::fs::create_dir_all(base.join("models"))?;
        let assumptions: Vec<_> = case.assumptions.iter().map(|(_, f)| f.clone()).collect();
        std::fs::write(
            base.join("assumptions.jto"),
            write_jto(&case.agents, &assumptions),
        )?;
        for script in &case.scripts {
            std::fs::write(
                base.join("scripts").join(format!("{}.jtopf", sanitize(&script.name))),
                write_jtopf(script, &case.agents),
            )?;
        }
        for (i, script) in case.support.iter().enumerate() {
            std::fs::write(
                base.join("support")
                    .join(format!("{i:03}-{}.jtopf", sanitize(&script.name))),
                write_jtopf(script, &case.agents),
            )?;
        }
        for (m, uni) in &case.neighborhood_models {
            std::fs::write(
                base.join("models").join(format!("{}.jtom", sanitize(&m.name))),
                write_jtom_neighborhood(m),
            )?;
            std::fs::write(
                base.join("models").join(format!("{}.universe.jto", sanitize(&m.name))),
                write_jto(&case.agents, &uni.formulas),
            )?;
        }
        for (m, uni) in &case.fitting_models {
            std::fs::write(
                base.join("models").join(format!("{}.jtom", sanitize(&m.name))),
                jto_core::formats::write_jtom_fitting(m),
            )?;
            std::fs::write(
                base.join("models").join(format!("{}.universe.jto", sanitize(&m.name))),
                write_jto(&case.agents, &uni.formulas),
            )?;
        }
    }
    Ok(())
}
