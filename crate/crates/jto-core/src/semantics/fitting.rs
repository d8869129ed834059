//! Relational interpreted systems: accessibility relations plus evidence
//! functions, with truth by the relational clauses.

use std::collections::{BTreeSet, HashMap};

use crate::syntax::{pretty, pretty_term, AgentTable, Formula, Term};

use super::{
    image_of_runs, set_contains, set_members, EvidenceTable, LassoRun, McError, ModelReport,
    StateId, StateSet, Universe, Violation, MAX_STATES,
};

/// A finitely presented relational interpreted system.
#[derive(Debug, Clone)]
pub struct FittingModel {
    pub name: String,
    pub states: Vec<String>,
    pub agents: AgentTable,
    pub runs: Vec<LassoRun>,
    /// Per agent: successor bitmask per state (the epistemic relation).
    pub rel: Vec<Vec<StateSet>>,
    /// Per agent: successor bitmask per state (the normative relation).
    pub rel_o: Vec<Vec<StateSet>>,
    /// Per agent evidence tables.
    pub evidence: Vec<EvidenceTable>,
    pub nevidence: Vec<EvidenceTable>,
    /// Atoms per state.
    pub valuation: Vec<BTreeSet<String>>,
}

impl FittingModel {
    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state_index(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name)
    }

    pub fn image(&self) -> StateSet {
        image_of_runs(&self.runs)
    }

    pub fn assert_well_formed(&self) {
        assert!(self.state_count() <= MAX_STATES);
        assert!(!self.runs.is_empty(), "a system is a nonempty set of runs");
        let n = self.agents.len();
        assert_eq!(self.rel.len(), n);
        assert_eq!(self.rel_o.len(), n);
        assert_eq!(self.evidence.len(), n);
        assert_eq!(self.nevidence.len(), n);
        assert_eq!(self.valuation.len(), self.state_count());
    }

    fn max_stem(&self) -> usize {
        self.runs.iter().map(|r| r.stem_len()).max().unwrap_or(0)
    }

    fn max_cycle(&self) -> usize {
        self.runs.iter().map(|r| r.cycle_len()).max().unwrap_or(1)
    }

    /// Query horizon for a formula of the given temporal depth.
    pub fn horizon(&self, depth: usize) -> usize {
        self.max_stem() + self.max_cycle() * (depth + 2)
    }
}

/// Memoizing evaluator over one relational model.
pub struct FittingEval<'m> {
    pub model: &'m FittingModel,
    memo: HashMap<(Formula, usize, usize), bool>,
    state_memo: HashMap<(Formula, StateId), Result<bool, McError>>,
}

impl<'m> FittingEval<'m> {
    pub fn new(model: &'m FittingModel) -> Self {
        FittingEval { model, memo: HashMap::new(), state_memo: HashMap::new() }
    }

    /// Truth of a core formula at point (run, n) by the relational clauses.
    pub fn truth_at(&mut self, core: &Formula, run: usize, n: usize) -> Result<bool, McError> {
        if run >= self.model.runs.len() {
            return Err(McError::NoSuchRun(run));
        }
        if let Some(&v) = self.memo.get(&(core.clone(), run, n)) {
            return Ok(v);
        }
        let r = &self.model.runs[run];
        let v = match core {
            Formula::Atom(p) => self.model.valuation[r.state_at(n)].contains(p),
            Formula::Bottom => false,
            Formula::Implies(l, rr) => !self.truth_at(l, run, n)? || self.truth_at(rr, run, n)?,
            Formula::Next(g) => self.truth_at(g, run, n + 1)?,
            Formula::WeakPrev(g) => n == 0 || self.truth_at(g, run, n - 1)?,
            Formula::Until(l, rr) => {
                let depth = 1 + l.temporal_depth().max(rr.temporal_depth());
                let bound = n.max(r.stem_len()) + r.cycle_len() * (depth + 2);
                let mut found = false;
                for m in n..=bound {
                    if self.truth_at(rr, run, m)? {
                        found = true;
                        break;
                    }
                    if !self.truth_at(l, run, m)? {
                        break;
                    }
                }
                found
            }
            Formula::Since(l, rr) => {
                let mut found = false;
                for m in (0..=n).rev() {
                    if self.truth_at(rr, run, m)? {
                        found = true;
                        break;
                    }
                    if !self.truth_at(l, run, m)? {
                        break;
                    }
                }
                found
            }
            Formula::JBox(i, t, g) => {
                if i.0 >= self.model.agents.len() {
                    return Err(McError::NoSuchAgent(i.0));
                }
                let state = r.state_at(n);
                self.model.evidence[i.0].contains(state, t, g)
                    && self.box_accessible_truth(self.model.rel[i.0][state], g)?
            }
            Formula::OBox(i, t, g) => {
                if i.0 >= self.model.agents.len() {
                    return Err(McError::NoSuchAgent(i.0));
                }
                let state = r.state_at(n);
                self.model.nevidence[i.0].contains(state, t, g)
                    && self.box_accessible_truth(self.model.rel_o[i.0][state], g)?
            }
            _ => unreachable!("evaluation needs core form"),
        };
        self.memo.insert((core.clone(), run, n), v);
        Ok(v)
    }

    fn box_accessible_truth(&mut self, successors: StateSet, g: &Formula) -> Result<bool, McError> {
        // Accessibility is read as a state relation filtered through the
        // image of the run system.
        let reach = successors & self.model.image();
        for u in set_members(reach, self.model.state_count()) {
            if !self.state_truth(g, u)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// State-level truth: the canonical occurrence decides; disagreement
    /// among occurrences within the horizon is a hard error.
    pub fn state_truth(&mut self, core: &Formula, state: StateId) -> Result<bool, McError> {
        if let Some(res) = self.state_memo.get(&(core.clone(), state)) {
            return res.clone();
        }
        let res = self.state_truth_uncached(core, state);
        self.state_memo.insert((core.clone(), state), res.clone());
        res
    }

    fn state_truth_uncached(&mut self, core: &Formula, state: StateId) -> Result<bool, McError> {
        let depth = core.temporal_depth();
        let mut canonical: Option<bool> = None;
        for run in 0..self.model.runs.len() {
            let r = &self.model.runs[run];
            let horizon = r.stem_len() + r.cycle_len() * (depth + 2);
            for n in 0..=horizon {
                if r.state_at(n) != state {
                    continue;
                }
                let v = self.truth_at(core, run, n)?;
                match canonical {
                    None => canonical = Some(v),
                    Some(c) if c != v => {
                        return Err(McError::PositionDependence {
                            state: self.model.states[state].clone(),
                            formula: pretty(core),
                        });
                    }
                    _ => {}
                }
            }
        }
        // States outside the image never occur; they carry no truth. The
        // callers only ask about image states.
        Ok(canonical.unwrap_or(false))
    }

    /// Truth set of a core formula over the image states.
    pub fn truth_set(&mut self, core: &Formula) -> Result<StateSet, McError> {
        let mut set = 0;
        for s in set_members(self.model.image(), self.model.state_count()) {
            if self.state_truth(core, s)? {
                set |= 1 << s;
            }
        }
        Ok(set)
    }
}

/// Truth of a formula at point (run index, position). The formula is
/// desugared here; the query position must lie within the horizon for its
/// temporal depth.
pub fn mc_fitting(
    model: &FittingModel,
    run: usize,
    n: usize,
    f: &Formula,
) -> Result<bool, McError> {
    let core = f.desugar();
    let cap = model.horizon(core.temporal_depth());
    if n > cap {
        return Err(McError::HorizonExceeded { pos: n, cap });
    }
    FittingEval::new(model).truth_at(&core, run, n)
}

/// Check the frame conditions exactly and the evidence conditions over the
/// supplied universe.
pub fn validate_fitting(model: &FittingModel, universe: &Universe) -> ModelReport {
    model.assert_well_formed();
    let mut report = ModelReport {
        universe_terms: universe.terms.len(),
        universe_formulas: universe.formulas.len(),
        ..Default::default()
    };
    let nstates = model.state_count();
    let mut violate = |condition: &'static str, detail: String| {
        report.violations.push(Violation { condition, detail });
    };

    for (agent, rel) in model.rel.iter().enumerate() {
        for s in 0..nstates {
            if !set_contains(rel[s], s) {
                violate(
                    "reflexivity",
                    format!("agent {agent}: {} not related to itself", model.states[s]),
                );
            }
            for v in set_members(rel[s], nstates) {
                if rel[v] & !rel[s] != 0 {
                    violate(
                        "transitivity",
                        format!(
                            "agent {agent}: successors of {} escape those of {}",
                            model.states[v], model.states[s]
                        ),
                    );
                }
            }
        }
    }
    for (agent, rel_o) in model.rel_o.iter().enumerate() {
        for s in 0..nstates {
            for v in set_members(rel_o[s], nstates) {
                if !set_contains(rel_o[v], v) {
                    violate(
                        "shift-reflexivity",
                        format!(
                            "agent {agent}: {} reached from {} but not related to itself",
                            model.states[v], model.states[s]
                        ),
                    );
                }
            }
        }
    }

    let nagents = model.agents.len();
    let e_terms = universe.epistemic_terms();
    let o_terms = universe.deontic_terms();
    for agent in 0..nagents {
        let ev = &model.evidence[agent];
        let nev = &model.nevidence[agent];
        for f in &universe.formulas {
            for t in &e_terms {
                // monotonicity: E(v,t) within E(w,t) along the relation.
                for v in 0..nstates {
                    if !ev.contains(v, t, f) {
                        continue;
                    }
                    for w in set_members(model.rel[agent][v], nstates) {
                        if !ev.contains(w, t, f) {
                            violate(
                                "monotonicity",
                                format!(
                                    "agent {agent}: {} in E({},{}) but not downstream at {}",
                                    pretty(f),
                                    model.states[v],
                                    pretty_term(t),
                                    model.states[w]
                                ),
                            );
                        }
                    }
                }
                // positive introspection.
                for w in 0..nstates {
                    if ev.contains(w, t, f) {
                        let boxed = Formula::JBox(
                            crate::syntax::Agent(agent),
                            (*t).clone(),
                            Box::new(f.clone()),
                        );
                        if !ev.contains(w, &Term::bang((*t).clone()), &boxed) {
                            violate(
                                "positive-introspection",
                                format!(
                                    "agent {agent}: {} at ({}, {}) not introspected",
                                    pretty(f),
                                    model.states[w],
                                    pretty_term(t)
                                ),
                            );
                        }
                    }
                }
            }
            // application over pairs of terms and formulas.
            for g in &universe.formulas {
                let imp = Formula::implies(f.clone(), g.clone());
                for t in &e_terms {
                    for s in &e_terms {
                        for w in 0..nstates {
                            if ev.contains(w, t, &imp)
                                && ev.contains(w, s, f)
                                && !ev.contains(w, &Term::prod((*t).clone(), (*s).clone()), g)
                            {
                                violate(
                                    "application",
                                    format!(
                                        "agent {agent} at {}: {} via {} * {}",
                                        model.states[w],
                                        pretty(g),
                                        pretty_term(t),
                                        pretty_term(s)
                                    ),
                                );
                            }
                        }
                    }
                }
                for t in &o_terms {
                    for s in &o_terms {
                        for w in 0..nstates {
                            if nev.contains(w, t, &imp)
                                && nev.contains(w, s, f)
                                && !nev.contains(w, &Term::prod((*t).clone(), (*s).clone()), g)
                            {
                                violate(
                                    "application-O",
                                    format!(
                                        "agent {agent} at {}: {} via {} * {}",
                                        model.states[w],
                                        pretty(g),
                                        pretty_term(t),
                                        pretty_term(s)
                                    ),
                                );
                            }
                        }
                    }
                }
            }
            for t in &o_terms {
                for w in 0..nstates {
                    // consistency.
                    let neg = Formula::implies(f.clone(), Formula::Bottom);
                    if nev.contains(w, t, f) && nev.contains(w, t, &neg) {
                        violate(
                            "consistency",
                            format!(
                                "agent {agent} at {}: both {} and its negation via {}",
                                model.states[w],
                                pretty(f),
                                pretty_term(t)
                            ),
                        );
                    }
                    // obligated factivity.
                    let of = Formula::implies(
                        Formula::OBox(
                            crate::syntax::Agent(agent),
                            (*t).clone(),
                            Box::new(f.clone()),
                        ),
                        f.clone(),
                    );
                    if !nev.contains(w, &Term::ddagger((*t).clone()), &of) {
                        violate(
                            "obligated-factivity",
                            format!(
                                "agent {agent} at {}: {} missing via #{}",
                                model.states[w],
                                pretty(&of),
                                pretty_term(t)
                            ),
                        );
                    }
                }
            }
        }
        // constant specification over the CS is checked by the caller with
        // its CS of record; with an empty CS there is nothing to check.
    }
    report
}

/// Constant-specification conditions for a given CS, reported separately so
/// the caller can validate against the specification of record.
pub fn validate_fitting_cs(
    model: &FittingModel,
    cs: &crate::cs::ConstantSpecification,
) -> ModelReport {
    let mut report = ModelReport::default();
    let nstates = model.state_count();
    for entry in cs.entries() {
        let Some(shape) = crate::cs::entry_shape(entry) else { continue };
        let (agent, c) = shape.prefix[0].clone();
        let body = match entry {
            Formula::JBox(_, _, f) | Formula::OBox(_, _, f) => (**f).clone(),
            _ => continue,
        };
        let table = if shape.epistemic {
            &model.evidence[agent.0]
        } else {
            &model.nevidence[agent.0]
        };
        for w in 0..nstates {
            if !table.contains(w, &Term::Const(c.clone()), &body) {
                report.violations.push(Violation {
                    condition: if shape.epistemic {
                        "constant-specification"
                    } else {
                        "constant-specification-O"
                    },
                    detail: format!(
                        "agent {}: {} missing at ({}, ${})",
                        agent.0,
                        pretty(&body),
                        model.states[w],
                        c,
                    ),
                });
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn atom_set(atoms: &[&str]) -> BTreeSet<String> {
        atoms.iter().map(|s| s.to_string()).collect()
    }

    /// Single run w0 w1 w2 (w3)*, p true only at w3's slot... here: build a
    /// tiny model with an identity relation and full evidence.
    fn tiny() -> FittingModel {
        let states = vec!["w0".into(), "w1".into(), "w2".into(), "w3".into()];
        let rel_id: Vec<StateSet> = (0..4).map(|i| 1 << i).collect();
        FittingModel {
            name: "tiny".into(),
            states,
            agents: AgentTable::declared(["i"]),
            runs: vec![LassoRun::new(vec![0, 1, 2], vec![3])],
            rel: vec![rel_id.clone()],
            rel_o: vec![rel_id],
            evidence: vec![EvidenceTable::full()],
            nevidence: vec![EvidenceTable::obligated_factivity_only()],
            valuation: vec![
                atom_set(&[]),
                atom_set(&[]),
                atom_set(&[]),
                atom_set(&["p"]),
            ],
        }
    }

    #[test]
    fn temporal_clauses() {
        let m = tiny();
        // p true from position 3 on.
        assert!(mc_fitting(&m, 0, 0, &parse_formula("F p").unwrap()).unwrap());
        assert!(!mc_fitting(&m, 0, 0, &parse_formula("p").unwrap()).unwrap());
        assert!(mc_fitting(&m, 0, 3, &parse_formula("G p").unwrap()).unwrap());
        assert!(!mc_fitting(&m, 0, 3, &parse_formula("H p").unwrap()).unwrap());
        assert!(mc_fitting(&m, 0, 0, &parse_formula("time=0").unwrap()).unwrap());
        assert!(mc_fitting(&m, 0, 2, &parse_formula("time=2").unwrap()).unwrap());
        assert!(!mc_fitting(&m, 0, 2, &parse_formula("time=1").unwrap()).unwrap());
        assert!(mc_fitting(&m, 0, 1, &parse_formula("X X p").unwrap()).unwrap());
        assert!(mc_fitting(&m, 0, 5, &parse_formula("P- time=2").unwrap()).unwrap());
    }

    #[test]
    fn horizon_guard() {
        let m = tiny();
        let f = parse_formula("p").unwrap();
        assert!(matches!(
            mc_fitting(&m, 0, 1000, &f),
            Err(McError::HorizonExceeded { .. })
        ));
        assert!(matches!(
            mc_fitting(&m, 7, 0, &f),
            Err(McError::NoSuchRun(7))
        ));
    }

    #[test]
    fn factivity_holds_with_reflexive_relation() {
        let m = tiny();
        // [t]_0 p at position 3: E full, relation identity, p true at w3.
        let f = parse_formula("[t]_0 p").unwrap();
        assert!(mc_fitting(&m, 0, 3, &f).unwrap());
        assert!(!mc_fitting(&m, 0, 0, &f).unwrap());
        // Factivity as an implication holds at both.
        let fact = parse_formula("[t]_0 p -> p").unwrap();
        assert!(mc_fitting(&m, 0, 3, &fact).unwrap());
        assert!(mc_fitting(&m, 0, 0, &fact).unwrap());
    }

    #[test]
    fn frame_violations_reported() {
        let mut m = tiny();
        // Break reflexivity and shift reflexivity.
        m.rel[0][1] = 0;
        m.rel_o[0][0] = 1 << 1;
        m.rel_o[0][1] = 0;
        let uni = Universe::from_formulas([&parse_formula("p").unwrap()]);
        let report = validate_fitting(&m, &uni);
        assert!(report.violations.iter().any(|v| v.condition == "reflexivity"));
        assert!(report
            .violations
            .iter()
            .any(|v| v.condition == "shift-reflexivity"));
    }

    #[test]
    fn consistency_violation_reported() {
        let mut m = tiny();
        m.nevidence[0] = EvidenceTable::full();
        let uni = Universe::from_formulas([&parse_formula("O[t]_0 p").unwrap()]);
        let report = validate_fitting(&m, &uni);
        assert!(report.violations.iter().any(|v| v.condition == "consistency"));
    }

    #[test]
    fn tiny_validates_over_its_universe() {
        let m = tiny();
        let uni = Universe::from_formulas([&parse_formula("[t]_0 p -> p").unwrap()]);
        let report = validate_fitting(&m, &uni);
        assert!(report.is_valid(), "{:?}", report.violations);
    }
}
