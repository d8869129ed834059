//! Neighborhood interpreted systems: justification boxes hold when the
//! truth set of the body belongs to the neighborhood family at the current
//! state and term. Non-normal states answer by valuation membership, which
//! is what makes the permission dual and the non-validity countermodels
//! work.

use std::collections::{BTreeSet, HashMap};

use crate::syntax::{pretty, pretty_term, AgentTable, Formula, Term};

use super::{
    image_of_runs, set_contains, set_members, LassoRun, McError, ModelReport, NeighborhoodTable,
    SchemaPattern, StateId, StateSet, Universe, Violation, MAX_STATES,
};

/// Valuation at a non-normal state: an explicit finite formula list plus
/// schema references with decidable membership.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NonNormalValuation {
    /// Core forms.
    pub formulas: BTreeSet<Formula>,
    pub schemas: Vec<SchemaPattern>,
}

impl NonNormalValuation {
    pub fn contains(&self, core: &Formula) -> bool {
        self.formulas.contains(core) || self.schemas.iter().any(|s| s.matches(core))
    }
}

/// A finitely presented neighborhood interpreted system.
#[derive(Debug, Clone)]
pub struct NeighborhoodModel {
    pub name: String,
    pub states: Vec<String>,
    pub agents: AgentTable,
    pub runs: Vec<LassoRun>,
    /// Per agent epistemic neighborhood tables.
    pub nbr: Vec<NeighborhoodTable>,
    /// Per agent normative neighborhood tables.
    pub nbr_o: Vec<NeighborhoodTable>,
    /// Atoms per normal (image) state.
    pub valuation: Vec<BTreeSet<String>>,
    /// Formula valuation per state; only meaningful outside the image.
    pub nonnormal: Vec<NonNormalValuation>,
}

impl NeighborhoodModel {
    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state_index(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name)
    }

    pub fn image(&self) -> StateSet {
        image_of_runs(&self.runs)
    }

    pub fn is_normal(&self, s: StateId) -> bool {
        set_contains(self.image(), s)
    }

    pub fn assert_well_formed(&self) {
        assert!(self.state_count() <= MAX_STATES);
        assert!(!self.runs.is_empty());
        let n = self.agents.len();
        assert_eq!(self.nbr.len(), n);
        assert_eq!(self.nbr_o.len(), n);
        assert_eq!(self.valuation.len(), self.state_count());
        assert_eq!(self.nonnormal.len(), self.state_count());
    }

    fn max_stem(&self) -> usize {
        self.runs.iter().map(|r| r.stem_len()).max().unwrap_or(0)
    }

    fn max_cycle(&self) -> usize {
        self.runs.iter().map(|r| r.cycle_len()).max().unwrap_or(1)
    }

    pub fn horizon(&self, depth: usize) -> usize {
        self.max_stem() + self.max_cycle() * (depth + 2)
    }
}

/// Memoizing evaluator over one neighborhood model.
pub struct NeighborhoodEval<'m> {
    pub model: &'m NeighborhoodModel,
    memo: HashMap<(Formula, usize, usize), bool>,
    state_memo: HashMap<(Formula, StateId), Result<bool, McError>>,
    set_memo: HashMap<Formula, Result<StateSet, McError>>,
}

impl<'m> NeighborhoodEval<'m> {
    pub fn new(model: &'m NeighborhoodModel) -> Self {
        NeighborhoodEval {
            model,
            memo: HashMap::new(),
            state_memo: HashMap::new(),
            set_memo: HashMap::new(),
        }
    }

    /// Truth of a core formula at point (run, n).
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
                let fam = self.model.nbr[i.0].family(r.state_at(n), t).to_vec();
                let ts = self.truth_set(g)?;
                fam.contains(&ts)
            }
            Formula::OBox(i, t, g) => {
                if i.0 >= self.model.agents.len() {
                    return Err(McError::NoSuchAgent(i.0));
                }
                let fam = self.model.nbr_o[i.0].family(r.state_at(n), t).to_vec();
                let ts = self.truth_set(g)?;
                fam.contains(&ts)
            }
            _ => unreachable!("evaluation needs core form"),
        };
        self.memo.insert((core.clone(), run, n), v);
        Ok(v)
    }

    /// Truth at a state: valuation membership outside the image, canonical
    /// occurrence (with the agreement check) inside it.
    pub fn state_truth(&mut self, core: &Formula, state: StateId) -> Result<bool, McError> {
        if !self.model.is_normal(state) {
            return Ok(self.model.nonnormal[state].contains(core));
        }
        if let Some(res) = self.state_memo.get(&(core.clone(), state)) {
            return res.clone();
        }
        let res = self.state_truth_normal(core, state);
        self.state_memo.insert((core.clone(), state), res.clone());
        res
    }

    fn state_truth_normal(&mut self, core: &Formula, state: StateId) -> Result<bool, McError> {
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
        Ok(canonical.unwrap_or(false))
    }

    /// The truth set over all states, normal and non-normal.
    pub fn truth_set(&mut self, core: &Formula) -> Result<StateSet, McError> {
        if let Some(res) = self.set_memo.get(core) {
            return res.clone();
        }
        let mut set = 0;
        let mut err = None;
        for s in 0..self.model.state_count() {
            match self.state_truth(core, s) {
                Ok(true) => set |= 1 << s,
                Ok(false) => {}
                Err(e) => {
                    err = Some(e);
                    break;
                }
            }
        }
        let res = match err {
            Some(e) => Err(e),
            None => Ok(set),
        };
        self.set_memo.insert(core.clone(), res.clone());
        res
    }
}

/// Truth of a formula at point (run index, position) by the neighborhood
/// clauses.
pub fn mc_neighborhood(
    model: &NeighborhoodModel,
    run: usize,
    n: usize,
    f: &Formula,
) -> Result<bool, McError> {
    let core = f.desugar();
    let cap = model.horizon(core.temporal_depth());
    if n > cap {
        return Err(McError::HorizonExceeded { pos: n, cap });
    }
    NeighborhoodEval::new(model).truth_at(&core, run, n)
}

/// The truth set of a formula.
pub fn truth_set(model: &NeighborhoodModel, f: &Formula) -> Result<StateSet, McError> {
    NeighborhoodEval::new(model).truth_set(&f.desugar())
}

/// Truth-set arithmetic for the validator: composite sets are built from
/// the cached sets of the universe members with bit operations on the
/// normal side and syntactic membership on the non-normal side, which
/// matches the evaluation clauses exactly.
struct SetAlgebra<'m> {
    model: &'m NeighborhoodModel,
    image: StateSet,
    all: StateSet,
    /// Non-normal states whose valuation could hold anything at all;
    /// composite formulas are only constructed when this is nonempty.
    nonnormal_content: Vec<StateId>,
}

impl<'m> SetAlgebra<'m> {
    fn new(model: &'m NeighborhoodModel) -> Self {
        let all = (0..model.state_count()).fold(0, |acc, s| acc | (1 << s));
        let image = model.image();
        let nonnormal_content = (0..model.state_count())
            .filter(|&s| {
                !set_contains(image, s)
                    && (!model.nonnormal[s].formulas.is_empty()
                        || !model.nonnormal[s].schemas.is_empty())
            })
            .collect();
        SetAlgebra { model, image, all, nonnormal_content }
    }

    fn nonnormal_members(&self, core: impl FnOnce() -> Formula) -> StateSet {
        if self.nonnormal_content.is_empty() {
            return 0;
        }
        let core = core();
        let mut out = 0;
        for &s in &self.nonnormal_content {
            if self.model.nonnormal[s].contains(&core) {
                out |= 1 << s;
            }
        }
        out
    }

    /// Truth set of `f -> g` from the parts.
    fn implies(&self, f: &Formula, g: &Formula, ts_f: StateSet, ts_g: StateSet) -> StateSet {
        let normal = ((self.all & !ts_f) | ts_g) & self.image;
        normal | self.nonnormal_members(|| Formula::implies(f.clone(), g.clone()))
    }

    fn neg(&self, f: &Formula, ts_f: StateSet) -> StateSet {
        self.implies(f, &Formula::Bottom, ts_f, 0)
    }

    /// Truth set of a justification box from the body's set: state-level
    /// truth of a box depends only on the state.
    fn jbox(&self, agent: usize, t: &Term, f: &Formula, ts_f: StateSet) -> StateSet {
        let mut out = 0;
        for w in set_members(self.image, self.model.state_count()) {
            if self.model.nbr[agent].family(w, t).contains(&ts_f) {
                out |= 1 << w;
            }
        }
        out | self.nonnormal_members(|| {
            Formula::JBox(crate::syntax::Agent(agent), t.clone(), Box::new(f.clone()))
        })
    }

    fn obox(&self, agent: usize, t: &Term, f: &Formula, ts_f: StateSet) -> StateSet {
        let mut out = 0;
        for w in set_members(self.image, self.model.state_count()) {
            if self.model.nbr_o[agent].family(w, t).contains(&ts_f) {
                out |= 1 << w;
            }
        }
        out | self.nonnormal_members(|| {
            Formula::OBox(crate::syntax::Agent(agent), t.clone(), Box::new(f.clone()))
        })
    }
}

/// Check the closure conditions over the supplied universe. Position
/// dependence surfaces as the error, everything else is report-carried.
pub fn validate_neighborhood(
    model: &NeighborhoodModel,
    universe: &Universe,
) -> Result<ModelReport, McError> {
    model.assert_well_formed();
    let mut report = ModelReport {
        universe_terms: universe.terms.len(),
        universe_formulas: universe.formulas.len(),
        ..Default::default()
    };
    let mut eval = NeighborhoodEval::new(model);
    let alg = SetAlgebra::new(model);
    let nstates = model.state_count();
    let nagents = model.agents.len();
    let e_terms = universe.epistemic_terms();
    let o_terms = universe.deontic_terms();
    let image = model.image();

    let mut ts: Vec<StateSet> = Vec::with_capacity(universe.formulas.len());
    for f in &universe.formulas {
        ts.push(eval.truth_set(f)?);
    }

    // Every set any family holds at a universe term: a premise whose truth
    // set never appears can fire no condition.
    let mut premise_sets: std::collections::BTreeSet<StateSet> = Default::default();
    for agent in 0..nagents {
        for w in set_members(image, nstates) {
            for t in e_terms.iter() {
                premise_sets.extend(model.nbr[agent].family(w, t).iter().copied());
            }
            for t in o_terms.iter() {
                premise_sets.extend(model.nbr_o[agent].family(w, t).iter().copied());
            }
        }
    }

    for (fi, f) in universe.formulas.iter().enumerate() {
        let ts_f = ts[fi];
        for agent in 0..nagents {
            let a = crate::syntax::Agent(agent);
            for t in &e_terms {
                if !premise_sets.contains(&ts_f) {
                    break;
                }
                let ts_boxed = alg.jbox(agent, t, f, ts_f);
                let bang = Term::bang((*t).clone());
                for w in set_members(image, nstates) {
                    let fam = model.nbr[agent].family(w, t);
                    if !fam.contains(&ts_f) {
                        continue;
                    }
                    if !set_contains(ts_f, w) {
                        report.violations.push(Violation {
                            condition: "reflexivity-N",
                            detail: format!(
                                "agent {agent} at {}: {} known via {} but false here",
                                model.states[w],
                                pretty(f),
                                pretty_term(t)
                            ),
                        });
                    }
                    for s in &e_terms {
                        for sum in [
                            Term::sum((*t).clone(), (*s).clone()),
                            Term::sum((*s).clone(), (*t).clone()),
                        ] {
                            if !model.nbr[agent].family(w, &sum).contains(&ts_f) {
                                report.violations.push(Violation {
                                    condition: "sum-N",
                                    detail: format!(
                                        "agent {agent} at {}: {} via {} not preserved at {}",
                                        model.states[w],
                                        pretty(f),
                                        pretty_term(t),
                                        pretty_term(&sum)
                                    ),
                                });
                            }
                        }
                    }
                    if !model.nbr[agent].family(w, &bang).contains(&ts_boxed) {
                        report.violations.push(Violation {
                            condition: "positive-introspection-N",
                            detail: format!(
                                "agent {agent} at {}: [{}]_{} {} via !{} missing",
                                model.states[w],
                                pretty_term(t),
                                a.0,
                                pretty(f),
                                pretty_term(t)
                            ),
                        });
                    }
                }
            }
            // Normative conditions.
            for t in &o_terms {
                let ts_obox = alg.obox(agent, t, f, ts_f);
                let obox = Formula::OBox(a, (*t).clone(), Box::new(f.clone()));
                let ts_of = alg.implies(&obox, f, ts_obox, ts_f);
                let ts_neg = alg.neg(f, ts_f);
                let dagger = Term::ddagger((*t).clone());
                for w in set_members(image, nstates) {
                    let fam = model.nbr_o[agent].family(w, t);
                    if fam.contains(&ts_f) && fam.contains(&ts_neg) {
                        report.violations.push(Violation {
                            condition: "noc-N_O",
                            detail: format!(
                                "agent {agent} at {}: {} and its negation both obligatory via {}",
                                model.states[w],
                                pretty(f),
                                pretty_term(t)
                            ),
                        });
                    }
                    if !model.nbr_o[agent].family(w, &dagger).contains(&ts_of) {
                        report.violations.push(Violation {
                            condition: "obligated-factivity-N_O",
                            detail: format!(
                                "agent {agent} at {}: O[{}]_{} {} -> ... via #{} missing",
                                model.states[w],
                                pretty_term(t),
                                a.0,
                                pretty(f),
                                pretty_term(t)
                            ),
                        });
                    }
                }
            }
        }
        // Application conditions over formula pairs.
        if !premise_sets.contains(&ts_f) {
            // The minor premise can never be held, so applications with
            // this antecedent are vacuous.
            continue;
        }
        for (gi, g) in universe.formulas.iter().enumerate() {
            let ts_imp = alg.implies(f, g, ts_f, ts[gi]);
            if !premise_sets.contains(&ts_imp) {
                continue;
            }
            let ts_g = ts[gi];
            for agent in 0..nagents {
                for w in set_members(image, nstates) {
                    for t in &e_terms {
                        if !model.nbr[agent].family(w, t).contains(&ts_imp) {
                            continue;
                        }
                        for s in &e_terms {
                            if model.nbr[agent].family(w, s).contains(&ts_f)
                                && !model.nbr[agent]
                                    .family(w, &Term::prod((*t).clone(), (*s).clone()))
                                    .contains(&ts_g)
                            {
                                report.violations.push(Violation {
                                    condition: "application-N",
                                    detail: format!(
                                        "agent {agent} at {}: {} via {}*{} missing",
                                        model.states[w],
                                        pretty(g),
                                        pretty_term(t),
                                        pretty_term(s)
                                    ),
                                });
                            }
                        }
                    }
                    for t in &o_terms {
                        if !model.nbr_o[agent].family(w, t).contains(&ts_imp) {
                            continue;
                        }
                        for s in &o_terms {
                            if model.nbr_o[agent].family(w, s).contains(&ts_f)
                                && !model.nbr_o[agent]
                                    .family(w, &Term::prod((*t).clone(), (*s).clone()))
                                    .contains(&ts_g)
                            {
                                report.violations.push(Violation {
                                    condition: "application-N_O",
                                    detail: format!(
                                        "agent {agent} at {}: {} via {}*{} missing",
                                        model.states[w],
                                        pretty(g),
                                        pretty_term(t),
                                        pretty_term(s)
                                    ),
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Constant-specification conditions relative to a CS of record.
pub fn validate_neighborhood_cs(
    model: &NeighborhoodModel,
    cs: &crate::cs::ConstantSpecification,
) -> Result<ModelReport, McError> {
    let mut report = ModelReport::default();
    let mut eval = NeighborhoodEval::new(model);
    let image = model.image();
    for entry in cs.entries() {
        let Some(shape) = crate::cs::entry_shape(entry) else { continue };
        let (agent, c) = shape.prefix[0].clone();
        let body = match entry {
            Formula::JBox(_, _, f) | Formula::OBox(_, _, f) => (**f).clone(),
            _ => continue,
        };
        let ts = eval.truth_set(&body)?;
        let table = if shape.epistemic {
            &model.nbr[agent.0]
        } else {
            &model.nbr_o[agent.0]
        };
        for w in set_members(image, model.state_count()) {
            if !table.family(w, &Term::Const(c.clone())).contains(&ts) {
                report.violations.push(Violation {
                    condition: if shape.epistemic {
                        "constant-specification-N"
                    } else {
                        "constant-specification-N_O"
                    },
                    detail: format!(
                        "agent {}: truth set of {} missing at ({}, ${})",
                        agent.0,
                        pretty(&body),
                        model.states[w],
                        c
                    ),
                });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{NeighborhoodRule, StatePattern, TermPattern};
    use crate::syntax::parse_formula;

    /// The regularity-rule countermodel: two states, constant run at w,
    /// v non-normal carrying only the doubled conjunction.
    fn jre_model() -> NeighborhoodModel {
        let w: StateSet = 0b01;
        let s: StateSet = 0b11;
        let nbr = NeighborhoodTable {
            rules: vec![
                NeighborhoodRule {
                    state: StatePattern::Any,
                    term: TermPattern::AnyVar,
                    family: vec![w],
                },
                NeighborhoodRule {
                    state: StatePattern::Any,
                    term: TermPattern::AnyConst,
                    family: vec![w],
                },
                NeighborhoodRule {
                    state: StatePattern::Any,
                    term: TermPattern::AnyTerm,
                    family: vec![w, s],
                },
            ],
        };
        let nbr_o = NeighborhoodTable {
            rules: vec![NeighborhoodRule {
                state: StatePattern::Any,
                term: TermPattern::AnyTerm,
                family: vec![w, s],
            }],
        };
        let pp = parse_formula("p & p").unwrap().desugar();
        NeighborhoodModel {
            name: "jre".into(),
            states: vec!["w".into(), "v".into()],
            agents: AgentTable::declared(["i"]),
            runs: vec![LassoRun::new(vec![], vec![0])],
            nbr: vec![nbr],
            nbr_o: vec![nbr_o],
            valuation: vec![
                ["p".to_string()].into_iter().collect(),
                BTreeSet::new(),
            ],
            nonnormal: vec![
                NonNormalValuation::default(),
                NonNormalValuation {
                    formulas: [pp].into_iter().collect(),
                    schemas: vec![],
                },
            ],
        }
    }

    #[test]
    fn truth_sets_split_on_non_normal_states() {
        let m = jre_model();
        assert_eq!(truth_set(&m, &parse_formula("false").unwrap()).unwrap(), 0);
        assert_eq!(truth_set(&m, &parse_formula("p").unwrap()).unwrap(), 0b01);
        assert_eq!(
            truth_set(&m, &parse_formula("p & p").unwrap()).unwrap(),
            0b11
        );
    }

    #[test]
    fn jre_counterexample() {
        let m = jre_model();
        // p <-> p & p is valid at the run.
        assert!(mc_neighborhood(&m, 0, 0, &parse_formula("p <-> p & p").unwrap()).unwrap());
        // but the boxed versions differ.
        assert!(mc_neighborhood(&m, 0, 0, &parse_formula("[x]_0 p").unwrap()).unwrap());
        assert!(!mc_neighborhood(&m, 0, 0, &parse_formula("[x]_0 (p & p)").unwrap()).unwrap());
        assert!(!mc_neighborhood(
            &m,
            0,
            0,
            &parse_formula("[x]_0 p <-> [x]_0 (p & p)").unwrap()
        )
        .unwrap());
    }

    #[test]
    fn jre_model_validates() {
        let m = jre_model();
        let uni = Universe::from_formulas([
            &parse_formula("[x]_0 p <-> [x]_0 (p & p)").unwrap(),
        ]);
        let report = validate_neighborhood(&m, &uni).unwrap();
        assert!(report.is_valid(), "{:#?}", report.violations);
    }

    #[test]
    fn position_dependence_is_a_hard_error() {
        // A constant run revisits its state at every instant, so the
        // origin formula genuinely disagrees across occurrences.
        let m = jre_model();
        let err = truth_set(&m, &parse_formula("time=0").unwrap()).unwrap_err();
        assert!(matches!(err, McError::PositionDependence { .. }), "{err:?}");
        // Point evaluation stays fine: positions are not states.
        assert!(mc_neighborhood(&m, 0, 0, &parse_formula("time=0").unwrap()).unwrap());
        assert!(!mc_neighborhood(&m, 0, 1, &parse_formula("time=0").unwrap()).unwrap());
    }

    #[test]
    fn duality_falls_out() {
        let m = jre_model();
        for s in ["p", "p & p", "false"] {
            let box_form = format!("[x]_0 ~({s})");
            let dia = format!("<x>_0 ({s})");
            let lhs = mc_neighborhood(&m, 0, 0, &parse_formula(&dia).unwrap()).unwrap();
            let rhs = !mc_neighborhood(&m, 0, 0, &parse_formula(&box_form).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}
