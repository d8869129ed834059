//! Finitely presented interpreted systems over ultimately-periodic runs:
//! relational (Fitting-style) and neighborhood models, model checking at
//! points, condition validation over finite universes, and the relational
//! to neighborhood transform.

mod fitting;
mod neighborhood;
mod transform;

pub use fitting::{mc_fitting, validate_fitting, validate_fitting_cs, FittingEval, FittingModel};
pub use neighborhood::{
    mc_neighborhood, truth_set, validate_neighborhood, validate_neighborhood_cs, NeighborhoodEval,
    NeighborhoodModel, NonNormalValuation,
};
pub use transform::{fitting_to_neighborhood, TransformError};

use std::collections::BTreeSet;

use thiserror::Error;

use crate::syntax::{Formula, Term};

/// Index into a model's state list.
pub type StateId = usize;

/// A set of states as a bitmask; models are capped at 64 states.
pub type StateSet = u64;

pub const MAX_STATES: usize = 64;

pub fn set_of(states: impl IntoIterator<Item = StateId>) -> StateSet {
    states.into_iter().fold(0, |acc, s| acc | (1 << s))
}

pub fn set_contains(set: StateSet, s: StateId) -> bool {
    set & (1 << s) != 0
}

pub fn set_members(set: StateSet, n: usize) -> impl Iterator<Item = StateId> {
    (0..n).filter(move |s| set & (1 << s) != 0)
}

/// An ultimately periodic run: `stem` then `cycle` forever.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LassoRun {
    pub stem: Vec<StateId>,
    pub cycle: Vec<StateId>,
}

impl LassoRun {
    pub fn new(stem: Vec<StateId>, cycle: Vec<StateId>) -> Self {
        assert!(!cycle.is_empty(), "runs are infinite: the cycle must be nonempty");
        LassoRun { stem, cycle }
    }

    pub fn state_at(&self, n: usize) -> StateId {
        if n < self.stem.len() {
            self.stem[n]
        } else {
            self.cycle[(n - self.stem.len()) % self.cycle.len()]
        }
    }

    pub fn stem_len(&self) -> usize {
        self.stem.len()
    }

    pub fn cycle_len(&self) -> usize {
        self.cycle.len()
    }

    /// All states the run visits.
    pub fn image(&self) -> StateSet {
        set_of(self.stem.iter().chain(self.cycle.iter()).copied())
    }
}

/// Image of a run system.
pub fn image_of_runs(runs: &[LassoRun]) -> StateSet {
    runs.iter().fold(0, |acc, r| acc | r.image())
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum McError {
    #[error("state `{state}` has occurrences that disagree on `{formula}`: state-level truth is undefined")]
    PositionDependence { state: String, formula: String },
    #[error("position {pos} is beyond the evaluation horizon {cap}")]
    HorizonExceeded { pos: usize, cap: usize },
    #[error("run index {0} out of range")]
    NoSuchRun(usize),
    #[error("agent index {0} is not declared by the model")]
    NoSuchAgent(usize),
}

/// Pattern over states in table rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StatePattern {
    Any,
    One(StateId),
}

impl StatePattern {
    pub fn matches(&self, s: StateId) -> bool {
        match self {
            StatePattern::Any => true,
            StatePattern::One(w) => *w == s,
        }
    }
}

/// Pattern over justification terms in table rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermPattern {
    Exact(Term),
    AnyVar,
    AnyConst,
    AnyTerm,
    AnyTermExcept(Vec<Term>),
}

impl TermPattern {
    pub fn matches(&self, t: &Term) -> bool {
        match self {
            TermPattern::Exact(u) => u == t,
            TermPattern::AnyVar => matches!(t, Term::Var(_)),
            TermPattern::AnyConst => matches!(t, Term::Const(_)),
            TermPattern::AnyTerm => true,
            TermPattern::AnyTermExcept(list) => !list.contains(t),
        }
    }
}

/// The finite descriptions of infinite formula sets used by the shipped
/// countermodels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemaPattern {
    /// Matches every core formula of the shape `O[t]_i f -> f`.
    ObligatedFactivityInstances,
}

impl SchemaPattern {
    pub fn matches(&self, core: &Formula) -> bool {
        match self {
            SchemaPattern::ObligatedFactivityInstances => match core {
                Formula::Implies(l, r) => match &**l {
                    Formula::OBox(_, _, body) => **body == **r,
                    _ => false,
                },
                _ => false,
            },
        }
    }
}

/// Pattern over formulas in evidence rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormulaPattern {
    /// Structural equality on core forms.
    Exact(Formula),
    Schema(SchemaPattern),
    Any,
}

impl FormulaPattern {
    pub fn matches(&self, core: &Formula) -> bool {
        match self {
            FormulaPattern::Exact(f) => f == core,
            FormulaPattern::Schema(s) => s.matches(core),
            FormulaPattern::Any => true,
        }
    }
}

/// One evidence rule: first match decides membership.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvidenceRule {
    pub state: StatePattern,
    pub term: TermPattern,
    pub formula: FormulaPattern,
    pub member: bool,
}

/// An evidence table for one agent: ordered first-match rules, default
/// non-membership.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EvidenceTable {
    pub rules: Vec<EvidenceRule>,
}

impl EvidenceTable {
    pub fn contains(&self, state: StateId, term: &Term, core: &Formula) -> bool {
        for rule in &self.rules {
            if rule.state.matches(state) && rule.term.matches(term) && rule.formula.matches(core) {
                return rule.member;
            }
        }
        false
    }

    /// Everything at all formulas: handy for generated models.
    pub fn full() -> Self {
        EvidenceTable {
            rules: vec![EvidenceRule {
                state: StatePattern::Any,
                term: TermPattern::AnyTerm,
                formula: FormulaPattern::Any,
                member: true,
            }],
        }
    }

    /// Only the obligated-factivity instances, everywhere: the smallest
    /// table satisfying the normative closure conditions with an empty
    /// constant specification.
    pub fn obligated_factivity_only() -> Self {
        EvidenceTable {
            rules: vec![EvidenceRule {
                state: StatePattern::Any,
                term: TermPattern::AnyTerm,
                formula: FormulaPattern::Schema(SchemaPattern::ObligatedFactivityInstances),
                member: true,
            }],
        }
    }
}

/// One neighborhood rule: (state, term) to an explicit family of state sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborhoodRule {
    pub state: StatePattern,
    pub term: TermPattern,
    pub family: Vec<StateSet>,
}

/// A neighborhood table for one agent: ordered first-match rules, default
/// empty family.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NeighborhoodTable {
    pub rules: Vec<NeighborhoodRule>,
}

impl NeighborhoodTable {
    pub fn family(&self, state: StateId, term: &Term) -> &[StateSet] {
        for rule in &self.rules {
            if rule.state.matches(state) && rule.term.matches(term) {
                return &rule.family;
            }
        }
        &[]
    }
}

/// The finite instantiation domain for condition validation: the conditions
/// quantify over all terms and formulas, which is not computable, so each
/// check runs over this declared universe and says so.
#[derive(Debug, Clone, Default)]
pub struct Universe {
    pub terms: Vec<Term>,
    /// Core forms.
    pub formulas: Vec<Formula>,
}

impl Universe {
    /// Closure of the given formulas: all subformulas of the desugared
    /// forms, plus every justification term (with subterms) occurring.
    pub fn from_formulas<'a, I: IntoIterator<Item = &'a Formula>>(fs: I) -> Universe {
        let mut formulas: BTreeSet<Formula> = BTreeSet::new();
        let mut terms: BTreeSet<Term> = BTreeSet::new();
        for f in fs {
            let core = f.desugar();
            for t in core.terms() {
                terms.insert(t);
            }
            formulas.extend(core.subformulas());
        }
        Universe {
            terms: terms.into_iter().collect(),
            formulas: formulas.into_iter().collect(),
        }
    }

    pub fn deontic_terms(&self) -> Vec<&Term> {
        self.terms
            .iter()
            .filter(|t| t.admits_sort(crate::syntax::TermSort::Deontic))
            .collect()
    }

    pub fn epistemic_terms(&self) -> Vec<&Term> {
        self.terms
            .iter()
            .filter(|t| t.admits_sort(crate::syntax::TermSort::Epistemic))
            .collect()
    }
}

/// A single violated condition instance.
#[derive(Debug, Clone)]
pub struct Violation {
    pub condition: &'static str,
    pub detail: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.condition, self.detail)
    }
}

/// Validation outcome; empty means every checked instance held.
#[derive(Debug, Clone, Default)]
pub struct ModelReport {
    pub violations: Vec<Violation>,
    /// Sizes of the universe the quantifiers ranged over.
    pub universe_terms: usize,
    pub universe_formulas: usize,
}

impl ModelReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lasso_indexing() {
        let r = LassoRun::new(vec![0, 1], vec![2, 3]);
        assert_eq!(r.state_at(0), 0);
        assert_eq!(r.state_at(1), 1);
        assert_eq!(r.state_at(2), 2);
        assert_eq!(r.state_at(3), 3);
        assert_eq!(r.state_at(4), 2);
        assert_eq!(r.state_at(5), 3);
        assert_eq!(r.image(), 0b1111);
    }

    #[test]
    fn term_patterns() {
        let t = Term::var("a");
        assert!(TermPattern::AnyVar.matches(&t));
        assert!(!TermPattern::AnyConst.matches(&t));
        assert!(TermPattern::AnyTermExcept(vec![Term::var("b")]).matches(&t));
        assert!(!TermPattern::AnyTermExcept(vec![Term::var("a")]).matches(&t));
        // Rule ordering realizes "all t outside Var and Const".
        let table = EvidenceTable {
            rules: vec![
                EvidenceRule {
                    state: StatePattern::Any,
                    term: TermPattern::AnyVar,
                    formula: FormulaPattern::Any,
                    member: false,
                },
                EvidenceRule {
                    state: StatePattern::Any,
                    term: TermPattern::AnyConst,
                    formula: FormulaPattern::Any,
                    member: false,
                },
                EvidenceRule {
                    state: StatePattern::Any,
                    term: TermPattern::AnyTerm,
                    formula: FormulaPattern::Any,
                    member: true,
                },
            ],
        };
        let p = Formula::atom("p").desugar();
        assert!(!table.contains(0, &Term::var("x"), &p));
        assert!(!table.contains(0, &Term::cst("c"), &p));
        assert!(table.contains(0, &Term::prod(Term::var("x"), Term::var("y")), &p));
    }

    #[test]
    fn obligated_factivity_schema() {
        let core = Formula::implies(
            Formula::obox(crate::syntax::Agent(0), Term::var("t"), Formula::atom("p")).unwrap(),
            Formula::atom("p"),
        )
        .desugar();
        assert!(SchemaPattern::ObligatedFactivityInstances.matches(&core));
        let wrong = Formula::implies(
            Formula::obox(crate::syntax::Agent(0), Term::var("t"), Formula::atom("p")).unwrap(),
            Formula::atom("q"),
        )
        .desugar();
        assert!(!SchemaPattern::ObligatedFactivityInstances.matches(&wrong));
    }
}
