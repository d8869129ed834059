//! The Hilbert-system proof kernel: proof scripts as data, per-line
//! hypothesis tracking, and the checking engine.
//!
//! Beyond modus ponens, the necessitation rules, and axiom/constant lines,
//! the kernel accepts a small set of admissible macro rules so that the
//! shipped derivations can mirror their sources line for line:
//!
//! * `Taut(cites)` concludes any propositional consequence (under boolean
//!   abstraction) of the cited prior lines, cited hypotheses, and cited
//!   registered theorems;
//! * `Deduce(i, h)` discharges hypothesis h of line i into an implication
//!   (the deduction theorem as a rule);
//! * `BoxdotLift(i)` wraps conclusion and hypotheses in the always operator,
//!   leaving hypotheses that already are always-statements unchanged;
//! * `Lemma(name, premises)` cites a previously checked script, discharging
//!   its hypotheses against the current hypothesis set or cited premise
//!   lines (composition of derivations).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::axioms::{match_axiom, AxiomName};
use crate::cs::ConstantSpecification;
use crate::syntax::{as_boxdot, pretty, Formula};
use crate::taut::taut_entails;

/// A citation in a `Taut` line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cite {
    /// A prior line, 1-based.
    Line(usize),
    /// A formula from the current line's hypothesis set.
    Hyp(Formula),
    /// A registered theorem (a previously checked script with no goal
    /// hypotheses).
    Ref(String),
}

/// The justification attached to a proof line. Line references are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Justification {
    Hyp,
    Axiom(AxiomName),
    IaxNec,
    Taut(Vec<Cite>),
    Mp(usize, usize),
    NecNext(usize),
    NecWPrev(usize),
    NecAlways(usize),
    NecSofar(usize),
    BoxdotLift(usize),
    WPrevRm(usize),
    OnceRm(usize),
    Weaken(usize),
    Deduce(usize, Formula),
    Lemma(String, Vec<usize>),
}

#[derive(Debug, Clone)]
pub struct ProofLine {
    pub hypotheses: Vec<Formula>,
    pub formula: Formula,
    pub justification: Justification,
    /// Free-form annotation carried through the file format.
    pub note: Option<String>,
}

#[derive(Debug, Clone)]
pub struct ProofScript {
    pub name: String,
    pub goal_hypotheses: Vec<Formula>,
    pub goal: Formula,
    pub lines: Vec<ProofLine>,
}

/// Why a line was rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagnostic {
    UnknownJustification(String),
    SideConditionFailed(String),
    /// A necessitation-style rule applied under nonempty hypotheses.
    HypothesisLeak,
    /// Final line does not establish the declared goal.
    GoalMismatch(String),
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::UnknownJustification(s) => write!(f, "unknown justification: {s}"),
            Diagnostic::SideConditionFailed(s) => write!(f, "side condition failed: {s}"),
            Diagnostic::HypothesisLeak => {
                write!(f, "necessitation under nonempty hypotheses")
            }
            Diagnostic::GoalMismatch(s) => write!(f, "goal mismatch: {s}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LineResult {
    /// 1-based index.
    pub index: usize,
    pub ok: bool,
    pub diagnostic: Option<Diagnostic>,
}

#[derive(Debug, Clone)]
pub struct CheckReport {
    pub script: String,
    pub accepted: bool,
    pub lines: Vec<LineResult>,
    pub goal_diagnostic: Option<Diagnostic>,
}

impl CheckReport {
    pub fn first_failure(&self) -> Option<&LineResult> {
        self.lines.iter().find(|l| !l.ok)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}: {}",
            self.script,
            if self.accepted { "ACCEPT" } else { "REJECT" }
        )?;
        for l in &self.lines {
            if let Some(d) = &l.diagnostic {
                writeln!(f, "  line {}: {}", l.index, d)?;
            }
        }
        if let Some(d) = &self.goal_diagnostic {
            writeln!(f, "  goal: {}", d)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
struct RegisteredGoal {
    hyps: BTreeSet<Formula>,
    goal: Formula,
}

/// A checking session: a constant specification plus the registry of
/// already-accepted scripts available for citation.
#[derive(Debug, Clone, Default)]
pub struct Checker {
    pub cs: ConstantSpecification,
    registry: BTreeMap<String, RegisteredGoal>,
}

impl Checker {
    pub fn new(cs: ConstantSpecification) -> Self {
        Checker { cs, registry: BTreeMap::new() }
    }

    pub fn is_registered(&self, name: &str) -> bool {
        self.registry.contains_key(name)
    }

    pub fn registered_names(&self) -> impl Iterator<Item = &String> {
        self.registry.keys()
    }

    /// Check a script; on acceptance its goal becomes citable by name.
    pub fn check(&mut self, script: &ProofScript) -> CheckReport {
        let report = self.check_only(script);
        if report.accepted {
            self.registry.insert(
                script.name.clone(),
                RegisteredGoal {
                    hyps: script.goal_hypotheses.iter().map(|h| h.desugar()).collect(),
                    goal: script.goal.desugar(),
                },
            );
        }
        report
    }

    /// Check without registering.
    pub fn check_only(&self, script: &ProofScript) -> CheckReport {
        let cores: Vec<Formula> = script.lines.iter().map(|l| l.formula.desugar()).collect();
        let hyps: Vec<BTreeSet<Formula>> = script
            .lines
            .iter()
            .map(|l| l.hypotheses.iter().map(|h| h.desugar()).collect())
            .collect();
        let mut lines = Vec::with_capacity(script.lines.len());
        for (k, line) in script.lines.iter().enumerate() {
            let res = self.check_line(k, line, &cores, &hyps);
            lines.push(LineResult {
                index: k + 1,
                ok: res.is_ok(),
                diagnostic: res.err(),
            });
        }
        let mut goal_diagnostic = None;
        if let Some(last) = script.lines.len().checked_sub(1) {
            let goal_core = script.goal.desugar();
            let goal_hyps: BTreeSet<Formula> =
                script.goal_hypotheses.iter().map(|h| h.desugar()).collect();
            if cores[last] != goal_core {
                goal_diagnostic = Some(Diagnostic::GoalMismatch(format!(
                    "last line proves {}, goal is {}",
                    pretty(&script.lines[last].formula),
                    pretty(&script.goal)
                )));
            } else if !hyps[last].is_subset(&goal_hyps) {
                goal_diagnostic = Some(Diagnostic::GoalMismatch(
                    "last line uses hypotheses outside the goal set".to_string(),
                ));
            }
        } else {
            goal_diagnostic = Some(Diagnostic::GoalMismatch("empty script".to_string()));
        }
        let accepted = lines.iter().all(|l| l.ok) && goal_diagnostic.is_none();
        CheckReport {
            script: script.name.clone(),
            accepted,
            lines,
            goal_diagnostic,
        }
    }

    fn prior(
        &self,
        k: usize,
        r: usize,
        what: &str,
    ) -> Result<usize, Diagnostic> {
        if r == 0 || r > k {
            return Err(Diagnostic::SideConditionFailed(format!(
                "{what} must reference an earlier line, got {r}"
            )));
        }
        Ok(r - 1)
    }

    fn check_line(
        &self,
        k: usize,
        line: &ProofLine,
        cores: &[Formula],
        hyps: &[BTreeSet<Formula>],
    ) -> Result<(), Diagnostic> {
        let core = &cores[k];
        let myhyps = &hyps[k];
        let fail = |msg: String| Err(Diagnostic::SideConditionFailed(msg));
        match &line.justification {
            Justification::Hyp => {
                if myhyps.contains(core) {
                    Ok(())
                } else {
                    fail("formula is not among the line's hypotheses".to_string())
                }
            }
            Justification::Axiom(name) => {
                if *name == AxiomName::Taut {
                    match crate::taut::taut_check(core) {
                        Ok(true) => Ok(()),
                        Ok(false) => fail("not a propositional tautology".to_string()),
                        Err(e) => fail(e.to_string()),
                    }
                } else if match_axiom(core).contains(name) {
                    Ok(())
                } else {
                    fail(format!("not an instance of {name}"))
                }
            }
            Justification::IaxNec => {
                if self.cs.contains(core) {
                    Ok(())
                } else {
                    fail("formula is not in the constant specification".to_string())
                }
            }
            Justification::Taut(cites) => {
                let mut owned: Vec<Formula> = Vec::new();
                let mut needed: BTreeSet<Formula> = BTreeSet::new();
                for cite in cites {
                    match cite {
                        Cite::Line(r) => {
                            let j = self.prior(k, *r, "taut citation")?;
                            owned.push(cores[j].clone());
                            needed.extend(hyps[j].iter().cloned());
                        }
                        Cite::Hyp(h) => {
                            let hc = h.desugar();
                            if !myhyps.contains(&hc) {
                                return fail(format!(
                                    "cited hypothesis {} is not among the line's hypotheses",
                                    pretty(h)
                                ));
                            }
                            needed.insert(hc.clone());
                            owned.push(hc);
                        }
                        Cite::Ref(name) => {
                            let Some(reg) = self.registry.get(name) else {
                                return fail(format!("unknown reference `{name}`"));
                            };
                            if !reg.hyps.is_subset(myhyps) {
                                return fail(format!(
                                    "reference `{name}` has hypotheses outside this line's set"
                                ));
                            }
                            needed.extend(reg.hyps.iter().cloned());
                            owned.push(reg.goal.clone());
                        }
                    }
                }
                if !needed.is_subset(myhyps) {
                    return fail("line's hypotheses do not cover the cited lines".to_string());
                }
                let premises: Vec<&Formula> = owned.iter().collect();
                match taut_entails(&premises, core) {
                    Ok(true) => Ok(()),
                    Ok(false) => fail("not a propositional consequence of the citations".to_string()),
                    Err(e) => fail(e.to_string()),
                }
            }
            Justification::Mp(i, j) => {
                let i = self.prior(k, *i, "mp minor premise")?;
                let j = self.prior(k, *j, "mp major premise")?;
                match &cores[j] {
                    Formula::Implies(ant, con) => {
                        if **ant != cores[i] {
                            return fail("major premise antecedent differs from minor premise".to_string());
                        }
                        if **con != *core {
                            return fail("major premise consequent differs from this line".to_string());
                        }
                    }
                    _ => return fail("major premise is not an implication".to_string()),
                }
                let union: BTreeSet<_> = hyps[i].union(&hyps[j]).cloned().collect();
                if union.is_subset(myhyps) {
                    Ok(())
                } else {
                    fail("hypotheses do not cover both premises".to_string())
                }
            }
            Justification::NecNext(i)
            | Justification::NecWPrev(i)
            | Justification::NecAlways(i)
            | Justification::NecSofar(i) => {
                let i = self.prior(k, *i, "necessitation premise")?;
                if !hyps[i].is_empty() {
                    return Err(Diagnostic::HypothesisLeak);
                }
                let expected = match &line.justification {
                    Justification::NecNext(_) => Formula::next(cores[i].clone()),
                    Justification::NecWPrev(_) => Formula::weak_prev(cores[i].clone()),
                    Justification::NecAlways(_) => Formula::always(cores[i].clone()).desugar(),
                    Justification::NecSofar(_) => Formula::sofar(cores[i].clone()).desugar(),
                    _ => unreachable!(),
                };
                if *core == expected {
                    Ok(())
                } else {
                    fail("conclusion is not the necessitation of the premise".to_string())
                }
            }
            Justification::BoxdotLift(i) => {
                let i = self.prior(k, *i, "lift premise")?;
                let expected = Formula::boxdot(cores[i].clone()).desugar();
                if *core != expected {
                    return fail("conclusion is not the always-closure of the premise".to_string());
                }
                for h in &hyps[i] {
                    let lifted = if as_boxdot(h).is_some() {
                        h.clone()
                    } else {
                        Formula::boxdot(h.clone()).desugar()
                    };
                    if !myhyps.contains(&lifted) {
                        return fail(format!(
                            "hypothesis {} must be lifted to {}",
                            pretty(h),
                            pretty(&lifted)
                        ));
                    }
                }
                Ok(())
            }
            Justification::WPrevRm(i) | Justification::OnceRm(i) => {
                let i = self.prior(k, *i, "rm premise")?;
                if !hyps[i].is_empty() {
                    return Err(Diagnostic::HypothesisLeak);
                }
                let Formula::Implies(ant, con) = &cores[i] else {
                    return fail("rm premise is not an implication".to_string());
                };
                let expected = match &line.justification {
                    Justification::WPrevRm(_) => Formula::implies(
                        Formula::weak_prev((**ant).clone()),
                        Formula::weak_prev((**con).clone()),
                    ),
                    Justification::OnceRm(_) => Formula::implies(
                        Formula::once((**ant).clone()).desugar(),
                        Formula::once((**con).clone()).desugar(),
                    ),
                    _ => unreachable!(),
                };
                if *core == expected {
                    Ok(())
                } else {
                    fail("conclusion is not the monotone lift of the premise".to_string())
                }
            }
            Justification::Weaken(i) => {
                let i = self.prior(k, *i, "weaken premise")?;
                if cores[i] != *core {
                    return fail("weakening must keep the formula".to_string());
                }
                if hyps[i].is_subset(myhyps) {
                    Ok(())
                } else {
                    fail("weakening must grow the hypothesis set".to_string())
                }
            }
            Justification::Deduce(i, h) => {
                let i = self.prior(k, *i, "deduce premise")?;
                let hc = h.desugar();
                if !hyps[i].contains(&hc) {
                    return fail(format!(
                        "{} is not a hypothesis of the premise line",
                        pretty(h)
                    ));
                }
                let expected = Formula::implies(hc.clone(), cores[i].clone());
                if *core != expected {
                    return fail("conclusion must be hypothesis -> premise".to_string());
                }
                let mut remaining = hyps[i].clone();
                remaining.remove(&hc);
                if remaining.is_subset(myhyps) {
                    Ok(())
                } else {
                    fail("hypotheses must cover the undischarged ones".to_string())
                }
            }
            Justification::Lemma(name, premises) => {
                let Some(reg) = self.registry.get(name) else {
                    return Err(Diagnostic::UnknownJustification(format!(
                        "no registered script named `{name}`"
                    )));
                };
                if reg.goal != *core {
                    return fail(format!(
                        "cited script `{name}` proves {}, not this line",
                        pretty(&reg.goal)
                    ));
                }
                let mut premise_lines = Vec::new();
                for r in premises {
                    let j = self.prior(k, *r, "lemma premise")?;
                    premise_lines.push(j);
                }
                // Each hypothesis of the cited script must be discharged:
                // it is a hypothesis here, a cited premise's formula, or the
                // always-closure of a cited premise whose own hypotheses are
                // all always-statements.
                for h in &reg.hyps {
                    if myhyps.contains(h) {
                        continue;
                    }
                    let mut discharged = false;
                    for &j in &premise_lines {
                        if cores[j] == *h && hyps[j].is_subset(myhyps) {
                            discharged = true;
                            break;
                        }
                        if as_boxdot(h) == Some(cores[j].clone())
                            && hyps[j].iter().all(|g| as_boxdot(g).is_some())
                            && hyps[j].is_subset(myhyps)
                        {
                            discharged = true;
                            break;
                        }
                    }
                    if !discharged {
                        return fail(format!(
                            "hypothesis {} of `{name}` is not discharged",
                            pretty(h)
                        ));
                    }
                }
                Ok(())
            }
        }
    }
}

/// The deduction-theorem utility: from an accepted script for
/// `T, h |- phi`, produce the script for `T |- h -> phi`.
pub fn deduce(script: &ProofScript, h: &Formula) -> ProofScript {
    let mut lines = script.lines.clone();
    let hc = h.desugar();
    let last = lines.len();
    let mut goal_hyps: Vec<Formula> = Vec::new();
    for g in &script.goal_hypotheses {
        if g.desugar() != hc {
            goal_hyps.push(g.clone());
        }
    }
    lines.push(ProofLine {
        hypotheses: goal_hyps.clone(),
        formula: Formula::implies(h.clone(), script.goal.clone()),
        justification: Justification::Deduce(last, h.clone()),
        note: None,
    });
    ProofScript {
        name: format!("{}.deduced", script.name),
        goal_hypotheses: goal_hyps,
        goal: Formula::implies(h.clone(), script.goal.clone()),
        lines,
    }
}

/// Convenience for building scripts programmatically. Lines are appended
/// and referenced by the returned 1-based indices; hypothesis sets are
/// computed from the justification where they are determined by it.
pub struct ScriptBuilder {
    name: String,
    lines: Vec<ProofLine>,
}

impl ScriptBuilder {
    pub fn new(name: &str) -> Self {
        ScriptBuilder { name: name.to_string(), lines: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn formula(&self, idx: usize) -> &Formula {
        &self.lines[idx - 1].formula
    }

    pub fn hypotheses_of(&self, idx: usize) -> Vec<Formula> {
        self.lines[idx - 1].hypotheses.clone()
    }

    fn push(&mut self, line: ProofLine) -> usize {
        self.lines.push(line);
        self.lines.len()
    }

    fn hyps_of(&self, idx: usize) -> Vec<Formula> {
        self.lines[idx - 1].hypotheses.clone()
    }

    fn union_hyps(&self, idxs: &[usize]) -> Vec<Formula> {
        let mut set: BTreeSet<Formula> = BTreeSet::new();
        let mut out = Vec::new();
        for &i in idxs {
            for h in &self.lines[i - 1].hypotheses {
                if set.insert(h.desugar()) {
                    out.push(h.clone());
                }
            }
        }
        out
    }

    pub fn hyp(&mut self, f: Formula) -> usize {
        self.push(ProofLine {
            hypotheses: vec![f.clone()],
            formula: f,
            justification: Justification::Hyp,
            note: None,
        })
    }

    pub fn axiom(&mut self, name: AxiomName, f: Formula) -> usize {
        self.push(ProofLine {
            hypotheses: vec![],
            formula: f,
            justification: Justification::Axiom(name),
            note: None,
        })
    }

    pub fn iaxnec(&mut self, f: Formula) -> usize {
        self.push(ProofLine {
            hypotheses: vec![],
            formula: f,
            justification: Justification::IaxNec,
            note: None,
        })
    }

    /// A propositional consequence of the cited lines/hypotheses/theorems.
    pub fn taut(&mut self, cites: Vec<Cite>, f: Formula) -> usize {
        let mut hyp_set: BTreeSet<Formula> = BTreeSet::new();
        let mut hypotheses = Vec::new();
        for c in &cites {
            match c {
                Cite::Line(i) => {
                    for h in self.hyps_of(*i) {
                        if hyp_set.insert(h.desugar()) {
                            hypotheses.push(h);
                        }
                    }
                }
                Cite::Hyp(h) => {
                    if hyp_set.insert(h.desugar()) {
                        hypotheses.push(h.clone());
                    }
                }
                Cite::Ref(_) => {}
            }
        }
        self.push(ProofLine {
            hypotheses,
            formula: f,
            justification: Justification::Taut(cites),
            note: None,
        })
    }

    pub fn mp(&mut self, minor: usize, major: usize, f: Formula) -> usize {
        let hypotheses = self.union_hyps(&[minor, major]);
        self.push(ProofLine {
            hypotheses,
            formula: f,
            justification: Justification::Mp(minor, major),
            note: None,
        })
    }

    pub fn nec_next(&mut self, i: usize) -> usize {
        let f = Formula::next(self.formula(i).clone());
        self.push(ProofLine {
            hypotheses: vec![],
            formula: f,
            justification: Justification::NecNext(i),
            note: None,
        })
    }

    pub fn nec_wprev(&mut self, i: usize) -> usize {
        let f = Formula::weak_prev(self.formula(i).clone());
        self.push(ProofLine {
            hypotheses: vec![],
            formula: f,
            justification: Justification::NecWPrev(i),
            note: None,
        })
    }

    pub fn nec_always(&mut self, i: usize) -> usize {
        let f = Formula::always(self.formula(i).clone());
        self.push(ProofLine {
            hypotheses: vec![],
            formula: f,
            justification: Justification::NecAlways(i),
            note: None,
        })
    }

    pub fn nec_sofar(&mut self, i: usize) -> usize {
        let f = Formula::sofar(self.formula(i).clone());
        self.push(ProofLine {
            hypotheses: vec![],
            formula: f,
            justification: Justification::NecSofar(i),
            note: None,
        })
    }

    pub fn boxdot_lift(&mut self, i: usize) -> usize {
        let f = Formula::boxdot(self.formula(i).clone());
        let hypotheses = self
            .hyps_of(i)
            .into_iter()
            .map(|h| {
                if as_boxdot(&h.desugar()).is_some() {
                    h
                } else {
                    Formula::boxdot(h)
                }
            })
            .collect();
        self.push(ProofLine {
            hypotheses,
            formula: f,
            justification: Justification::BoxdotLift(i),
            note: None,
        })
    }

    pub fn wprev_rm(&mut self, i: usize) -> usize {
        let (ant, con) = match self.formula(i).desugar() {
            Formula::Implies(a, c) => (*a, *c),
            _ => panic!("wprev_rm needs an implication premise"),
        };
        let f = Formula::implies(Formula::weak_prev(ant), Formula::weak_prev(con));
        self.push(ProofLine {
            hypotheses: vec![],
            formula: f,
            justification: Justification::WPrevRm(i),
            note: None,
        })
    }

    pub fn once_rm(&mut self, i: usize) -> usize {
        let (ant, con) = match self.formula(i).desugar() {
            Formula::Implies(a, c) => (*a, *c),
            _ => panic!("once_rm needs an implication premise"),
        };
        let f = Formula::implies(Formula::once(ant), Formula::once(con));
        self.push(ProofLine {
            hypotheses: vec![],
            formula: f,
            justification: Justification::OnceRm(i),
            note: None,
        })
    }

    pub fn deduce(&mut self, i: usize, h: Formula) -> usize {
        let f = Formula::implies(h.clone(), self.formula(i).clone());
        let hc = h.desugar();
        let hypotheses = self
            .hyps_of(i)
            .into_iter()
            .filter(|g| g.desugar() != hc)
            .collect();
        self.push(ProofLine {
            hypotheses,
            formula: f,
            justification: Justification::Deduce(i, h),
            note: None,
        })
    }

    pub fn lemma(
        &mut self,
        name: &str,
        premises: Vec<usize>,
        hypotheses: Vec<Formula>,
        f: Formula,
    ) -> usize {
        self.push(ProofLine {
            hypotheses,
            formula: f,
            justification: Justification::Lemma(name.to_string(), premises),
            note: None,
        })
    }

    pub fn note(&mut self, idx: usize, text: &str) {
        self.lines[idx - 1].note = Some(text.to_string());
    }

    /// Close the script with the last line as goal.
    pub fn finish(self) -> ProofScript {
        let last = self.lines.last().expect("empty script");
        ProofScript {
            name: self.name,
            goal_hypotheses: last.hypotheses.clone(),
            goal: last.formula.clone(),
            lines: self.lines,
        }
    }

    pub fn finish_with_goal(self, goal_hypotheses: Vec<Formula>, goal: Formula) -> ProofScript {
        ProofScript {
            name: self.name,
            goal_hypotheses,
            goal,
            lines: self.lines,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::until2_instance;
    use crate::syntax::parse_formula;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn check_one(script: &ProofScript) -> CheckReport {
        Checker::new(ConstantSpecification::empty()).check(script)
    }

    #[test]
    fn modus_ponens_chain() {
        let mut b = ScriptBuilder::new("mp-chain");
        let l1 = b.hyp(f("p"));
        let l2 = b.hyp(f("p -> q"));
        b.mp(l1, l2, f("q"));
        let report = check_one(&b.finish());
        assert!(report.accepted, "{report}");
    }

    #[test]
    fn nec_under_hypotheses_leaks() {
        let mut b = ScriptBuilder::new("leak");
        let l1 = b.hyp(f("p"));
        // Force a necessitation over a hypothesis-carrying line.
        b.push(ProofLine {
            hypotheses: vec![f("p")],
            formula: f("G p"),
            justification: Justification::NecAlways(l1),
            note: None,
        });
        let script = b.finish();
        let report = check_one(&script);
        assert!(!report.accepted);
        assert_eq!(
            report.lines[1].diagnostic,
            Some(Diagnostic::HypothesisLeak)
        );
    }

    #[test]
    fn taut_with_citations() {
        let mut b = ScriptBuilder::new("glue");
        let l1 = b.hyp(f("win -> a1"));
        let l2 = b.hyp(f("~win -> b1"));
        let l3 = b.taut(vec![], f("win | ~win"));
        b.taut(
            vec![Cite::Line(l1), Cite::Line(l2), Cite::Line(l3)],
            f("a1 | b1"),
        );
        let report = check_one(&b.finish());
        assert!(report.accepted, "{report}");
    }

    #[test]
    fn taut_rejects_non_consequences() {
        let mut b = ScriptBuilder::new("bad-glue");
        let l1 = b.hyp(f("p"));
        b.taut(vec![Cite::Line(l1)], f("q"));
        assert!(!check_one(&b.finish()).accepted);
    }

    #[test]
    fn axiom_lines() {
        let mut b = ScriptBuilder::new("axioms");
        b.axiom(AxiomName::Factivity, f("[t]_1 p -> p"));
        b.axiom(AxiomName::Until2, until2_instance(&f("p"), &f("q")));
        b.axiom(AxiomName::Taut, f("p | ~p"));
        let report = check_one(&b.finish());
        assert!(report.accepted, "{report}");
    }

    #[test]
    fn deduction_theorem_round_trip() {
        let mut b = ScriptBuilder::new("dt");
        let l1 = b.hyp(f("p"));
        let l2 = b.hyp(f("p -> q"));
        b.mp(l1, l2, f("q"));
        let script = b.finish();
        assert!(check_one(&script).accepted);
        let d = deduce(&script, &f("p"));
        let report = check_one(&d);
        assert!(report.accepted, "{report}");
        assert_eq!(d.goal, f("p -> q"));
        let dd = deduce(&d, &f("p -> q"));
        assert!(check_one(&dd).accepted);
        assert!(dd.goal_hypotheses.is_empty());
    }

    #[test]
    fn boxdot_lift_keeps_always_hypotheses() {
        let mut b = ScriptBuilder::new("lift");
        let h = b.hyp(f("A(p -> q)"));
        let l2 = b.taut(
            vec![Cite::Line(h), Cite::Ref("elim".to_string())],
            f("p -> q"),
        );
        let lifted = b.boxdot_lift(l2);
        assert_eq!(b.hyps_of(lifted), vec![f("A(p -> q)")]);
        // Checking needs the registered elimination lemma; built in the
        // lemmas module, here just assert the builder-side hypothesis math.
    }

    #[test]
    fn lemma_citation_with_premises() {
        let mut checker = Checker::new(ConstantSpecification::empty());
        // Register q, r |- q & r.
        let mut b = ScriptBuilder::new("conj");
        let l1 = b.hyp(f("q"));
        let l2 = b.hyp(f("r"));
        b.taut(vec![Cite::Line(l1), Cite::Line(l2)], f("q & r"));
        assert!(checker.check(&b.finish()).accepted);
        // Use it with q from a derived line and r from a hypothesis.
        let mut b = ScriptBuilder::new("use");
        let l1 = b.hyp(f("p"));
        let l2 = b.hyp(f("p -> q"));
        let l3 = b.mp(l1, l2, f("q"));
        let _l4 = b.hyp(f("r"));
        b.lemma(
            "conj",
            vec![l3],
            vec![f("p"), f("p -> q"), f("r")],
            f("q & r"),
        );
        let report = checker.check(&b.finish());
        assert!(report.accepted, "{report}");
    }

    #[test]
    fn self_citation_is_rejected() {
        // A script may only cite scripts checked earlier in the session,
        // so citing its own name fails.
        let mut checker = Checker::new(ConstantSpecification::empty());
        let mut b = ScriptBuilder::new("ouroboros");
        b.lemma("ouroboros", vec![], vec![], f("p -> p"));
        let report = checker.check(&b.finish());
        assert!(!report.accepted);
        assert!(matches!(
            report.lines[0].diagnostic,
            Some(Diagnostic::UnknownJustification(_))
        ));
    }

    #[test]
    fn iaxnec_requires_cs_membership() {
        let cs = ConstantSpecification::from_formulas([f("[$c]_1 (p -> p)")]);
        let mut checker = Checker::new(cs);
        let mut b = ScriptBuilder::new("iax");
        b.iaxnec(f("[$c]_1 (p -> p)"));
        assert!(checker.check(&b.finish()).accepted);
        let mut b = ScriptBuilder::new("iax-bad");
        b.iaxnec(f("[$c]_1 (q -> q)"));
        assert!(!checker.check(&b.finish()).accepted);
    }

}
