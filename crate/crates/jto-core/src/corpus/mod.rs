//! The built-in case study: assumption formulas, the numbered derivations
//! as checkable scripts, the countermodels with their validation universes,
//! and a runner that executes every expectation.

mod cases;

pub use cases::load_corpus;

use std::fmt;

use thiserror::Error;

use crate::cs::ConstantSpecification;
use crate::proof::{Checker, ProofScript};
use crate::search::{bounded_sat, SearchBounds};
use crate::semantics::{
    mc_neighborhood, validate_fitting, validate_neighborhood, FittingModel, NeighborhoodModel,
    Universe,
};
use crate::syntax::{pretty_with, AgentTable, Formula};

/// What a case promises, each checkable by exactly one engine.
#[derive(Debug, Clone)]
pub enum Expectation {
    /// check_proof on a named script of this case.
    Proof { script: String },
    /// mc_neighborhood on a named model at (run, position).
    McNbr {
        model: String,
        run: usize,
        pos: usize,
        formula: Formula,
        expect: bool,
    },
    /// validate_neighborhood over the model's declared universe.
    ValidateNbr { model: String },
    /// validate_fitting over the model's declared universe.
    ValidateFit { model: String },
    /// bounded_sat over the given inputs.
    Search {
        label: String,
        formulas: Vec<Formula>,
        at: Option<usize>,
        bounds: SearchBounds,
        expect_sat: bool,
    },
}

/// A named bundle of assumptions, scripts, models, and expected verdicts.
#[derive(Debug, Clone)]
pub struct CorpusCase {
    pub name: String,
    pub description: String,
    pub agents: AgentTable,
    /// Named assumption formulas, for display and export.
    pub assumptions: Vec<(String, Formula)>,
    /// Scripts that must be registered (in order) before the headline
    /// scripts; their acceptance is asserted, not reported.
    pub support: Vec<ProofScript>,
    /// The scripts expectations refer to.
    pub scripts: Vec<ProofScript>,
    pub neighborhood_models: Vec<(NeighborhoodModel, Universe)>,
    pub fitting_models: Vec<(FittingModel, Universe)>,
    pub expectations: Vec<Expectation>,
}

impl CorpusCase {
    /// A checker with the case's support scripts registered.
    pub fn build_checker(&self) -> Result<Checker, String> {
        let mut checker = Checker::new(ConstantSpecification::empty());
        for s in &self.support {
            let report = checker.check(s);
            if !report.accepted {
                return Err(format!("support script `{}` rejected:\n{report}", s.name));
            }
        }
        Ok(checker)
    }

    pub fn script(&self, name: &str) -> Option<&ProofScript> {
        self.scripts.iter().find(|s| s.name == name)
    }

    pub fn neighborhood_model(&self, name: &str) -> Option<&(NeighborhoodModel, Universe)> {
        self.neighborhood_models.iter().find(|(m, _)| m.name == name)
    }

    pub fn fitting_model(&self, name: &str) -> Option<&(FittingModel, Universe)> {
        self.fitting_models.iter().find(|(m, _)| m.name == name)
    }
}

#[derive(Debug, Clone)]
pub struct ExpectationResult {
    pub target: String,
    pub engine: &'static str,
    pub verdict: String,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct CaseReport {
    pub case: String,
    pub entries: Vec<ExpectationResult>,
}

impl CaseReport {
    pub fn passed(&self) -> usize {
        self.entries.iter().filter(|e| e.pass).count()
    }

    pub fn total(&self) -> usize {
        self.entries.len()
    }

    pub fn all_pass(&self) -> bool {
        self.passed() == self.total()
    }

    /// One stable line per result: KIND, TARGET, VERDICT separated by tabs.
    pub fn machine_lines(&self) -> Vec<String> {
        self.entries
            .iter()
            .map(|e| format!("{}\t{}\t{}", e.engine, e.target, e.verdict))
            .collect()
    }
}

impl fmt::Display for CaseReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "case {}: {}/{} expectations pass", self.case, self.passed(), self.total())?;
        for e in &self.entries {
            writeln!(
                f,
                "  [{}] {} {} -> {}",
                if e.pass { "ok" } else { "FAIL" },
                e.engine,
                e.target,
                e.verdict
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Error)]
pub enum CorpusError {
    #[error("unknown case `{0}`")]
    UnknownCase(String),
    #[error("case setup failed: {0}")]
    Setup(String),
}

/// Execute every expectation of the case, in order.
pub fn run_case(case: &CorpusCase) -> Result<CaseReport, CorpusError> {
    let mut checker = case.build_checker().map_err(CorpusError::Setup)?;
    let mut entries = Vec::new();
    for exp in &case.expectations {
        let entry = match exp {
            Expectation::Proof { script } => {
                let Some(s) = case.script(script) else {
                    return Err(CorpusError::Setup(format!("missing script `{script}`")));
                };
                let report = checker.check(s);
                ExpectationResult {
                    target: script.clone(),
                    engine: "proof",
                    verdict: if report.accepted { "ACCEPT" } else { "REJECT" }.to_string(),
                    pass: report.accepted,
                }
            }
            Expectation::McNbr { model, run, pos, formula, expect } => {
                let Some((m, _)) = case.neighborhood_model(model) else {
                    return Err(CorpusError::Setup(format!("missing model `{model}`")));
                };
                let outcome = mc_neighborhood(m, *run, *pos, formula);
                let (verdict, pass) = match outcome {
                    Ok(v) => (v.to_string(), v == *expect),
                    Err(e) => (format!("error: {e}"), false),
                };
                ExpectationResult {
                    target: format!(
                        "{model}:r{run}@{pos}:{}",
                        pretty_with(formula, &case.agents)
                    ),
                    engine: "mc",
                    verdict,
                    pass,
                }
            }
            Expectation::ValidateNbr { model } => {
                let Some((m, uni)) = case.neighborhood_model(model) else {
                    return Err(CorpusError::Setup(format!("missing model `{model}`")));
                };
                let (verdict, pass) = match validate_neighborhood(m, uni) {
                    Ok(report) if report.is_valid() => ("valid".to_string(), true),
                    Ok(report) => (
                        format!("{} violations", report.violations.len()),
                        false,
                    ),
                    Err(e) => (format!("error: {e}"), false),
                };
                ExpectationResult {
                    target: model.clone(),
                    engine: "validate",
                    verdict,
                    pass,
                }
            }
            Expectation::ValidateFit { model } => {
                let Some((m, uni)) = case.fitting_model(model) else {
                    return Err(CorpusError::Setup(format!("missing model `{model}`")));
                };
                let report = validate_fitting(m, uni);
                ExpectationResult {
                    target: model.clone(),
                    engine: "validate",
                    verdict: if report.is_valid() {
                        "valid".to_string()
                    } else {
                        format!("{} violations", report.violations.len())
                    },
                    pass: report.is_valid(),
                }
            }
            Expectation::Search { label, formulas, at, bounds, expect_sat } => {
                let outcome = bounded_sat(formulas, *at, *bounds);
                let (verdict, pass) = match outcome {
                    Ok(v) => {
                        let sat = v.is_sat();
                        (
                            if sat { "SAT" } else { "UNSAT" }.to_string(),
                            sat == *expect_sat,
                        )
                    }
                    Err(e) => (format!("error: {e}"), false),
                };
                ExpectationResult {
                    target: label.clone(),
                    engine: "search",
                    verdict,
                    pass,
                }
            }
        };
        entries.push(entry);
    }
    Ok(CaseReport { case: case.name.clone(), entries })
}

/// Run a case by name against the built-in corpus.
pub fn run_case_by_name(name: &str) -> Result<CaseReport, CorpusError> {
    let corpus = load_corpus();
    let case = corpus
        .iter()
        .find(|c| c.name == name)
        .ok_or_else(|| CorpusError::UnknownCase(name.to_string()))?;
    run_case(case)
}
