//! The 23 axiom schemas and instance matching by first-order structural
//! unification of schematic formula/term/agent variables against core forms.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::syntax::{Agent, Formula, Term};
use crate::taut::taut_check;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AxiomName {
    Taut,
    NextK,
    AlwaysK,
    Fun,
    Ind,
    Until1,
    Until2,
    SofarK,
    WPrevK,
    Sw,
    Initial,
    SofarInd,
    Since1,
    Since2,
    Fp,
    Pf,
    Application,
    Sum,
    Factivity,
    PositiveIntrospection,
    ApplicationO,
    NoConflicts,
    ObligatedFactivity,
}

pub const ALL_AXIOMS: [AxiomName; 23] = [
    AxiomName::Taut,
    AxiomName::NextK,
    AxiomName::AlwaysK,
    AxiomName::Fun,
    AxiomName::Ind,
    AxiomName::Until1,
    AxiomName::Until2,
    AxiomName::SofarK,
    AxiomName::WPrevK,
    AxiomName::Sw,
    AxiomName::Initial,
    AxiomName::SofarInd,
    AxiomName::Since1,
    AxiomName::Since2,
    AxiomName::Fp,
    AxiomName::Pf,
    AxiomName::Application,
    AxiomName::Sum,
    AxiomName::Factivity,
    AxiomName::PositiveIntrospection,
    AxiomName::ApplicationO,
    AxiomName::NoConflicts,
    AxiomName::ObligatedFactivity,
];

impl fmt::Display for AxiomName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AxiomName::Taut => "Taut",
            AxiomName::NextK => "NextK",
            AxiomName::AlwaysK => "AlwaysK",
            AxiomName::Fun => "Fun",
            AxiomName::Ind => "Ind",
            AxiomName::Until1 => "Until1",
            AxiomName::Until2 => "Until2",
            AxiomName::SofarK => "SofarK",
            AxiomName::WPrevK => "WPrevK",
            AxiomName::Sw => "SW",
            AxiomName::Initial => "Initial",
            AxiomName::SofarInd => "SofarInd",
            AxiomName::Since1 => "Since1",
            AxiomName::Since2 => "Since2",
            AxiomName::Fp => "FP",
            AxiomName::Pf => "PF",
            AxiomName::Application => "Application",
            AxiomName::Sum => "Sum",
            AxiomName::Factivity => "Factivity",
            AxiomName::PositiveIntrospection => "PositiveIntrospection",
            AxiomName::ApplicationO => "ApplicationO",
            AxiomName::NoConflicts => "NoConflicts",
            AxiomName::ObligatedFactivity => "ObligatedFactivity",
        };
        f.write_str(s)
    }
}

impl FromStr for AxiomName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ALL_AXIOMS
            .iter()
            .copied()
            .find(|a| a.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown axiom name `{s}`"))
    }
}

// Schematic placeholders. Formula metavariables are atoms named `$0`/`$1`,
// term metavariables are variables `$t`/`$s`, the agent slot is AGENT_META.
const AGENT_META: Agent = Agent(usize::MAX);

fn ph(i: usize) -> Formula {
    Formula::atom(&format!("${i}"))
}

fn tv(name: &str) -> Term {
    Term::Var(format!("${name}"))
}

fn schema_patterns() -> &'static Vec<(AxiomName, Vec<Formula>)> {
    static PATTERNS: OnceLock<Vec<(AxiomName, Vec<Formula>)>> = OnceLock::new();
    PATTERNS.get_or_init(|| {
        use Formula as F;
        let p0 = ph(0);
        let p1 = ph(1);
        let t = tv("t");
        let s = tv("s");
        let i = AGENT_META;
        let jbox = |t: Term, f: Formula| F::JBox(i, t, Box::new(f));
        let obox = |t: Term, f: Formula| F::OBox(i, t, Box::new(f));
        let opermit = |t: Term, f: Formula| F::OPermit(i, t, Box::new(f));
        let raw: Vec<(AxiomName, Vec<Formula>)> = vec![
            (
                AxiomName::NextK,
                vec![F::implies(
                    F::next(F::implies(p0.clone(), p1.clone())),
                    F::implies(F::next(p0.clone()), F::next(p1.clone())),
                )],
            ),
            (
                AxiomName::AlwaysK,
                vec![F::implies(
                    F::always(F::implies(p0.clone(), p1.clone())),
                    F::implies(F::always(p0.clone()), F::always(p1.clone())),
                )],
            ),
            (
                AxiomName::Fun,
                vec![F::iff(F::next(F::not(p0.clone())), F::not(F::next(p0.clone())))],
            ),
            (
                AxiomName::Ind,
                vec![F::implies(
                    F::always(F::implies(p0.clone(), F::next(p0.clone()))),
                    F::implies(p0.clone(), F::always(p0.clone())),
                )],
            ),
            (
                AxiomName::Until1,
                vec![F::implies(
                    F::until(p0.clone(), p1.clone()),
                    F::eventually(p1.clone()),
                )],
            ),
            (
                AxiomName::Until2,
                vec![F::iff(
                    F::until(p0.clone(), p1.clone()),
                    F::or(
                        p1.clone(),
                        F::and(p0.clone(), F::next(F::until(p0.clone(), p1.clone()))),
                    ),
                )],
            ),
            (
                AxiomName::SofarK,
                vec![F::implies(
                    F::sofar(F::implies(p0.clone(), p1.clone())),
                    F::implies(F::sofar(p0.clone()), F::sofar(p1.clone())),
                )],
            ),
            (
                AxiomName::WPrevK,
                vec![F::implies(
                    F::weak_prev(F::implies(p0.clone(), p1.clone())),
                    F::implies(F::weak_prev(p0.clone()), F::weak_prev(p1.clone())),
                )],
            ),
            (
                AxiomName::Sw,
                vec![F::implies(F::strong_prev(p0.clone()), F::weak_prev(p0.clone()))],
            ),
            (
                AxiomName::Initial,
                vec![F::once(F::weak_prev(F::Bottom))],
            ),
            (
                AxiomName::SofarInd,
                vec![F::implies(
                    F::sofar(F::implies(p0.clone(), F::weak_prev(p0.clone()))),
                    F::implies(p0.clone(), F::sofar(p0.clone())),
                )],
            ),
            (
                AxiomName::Since1,
                vec![F::implies(F::since(p0.clone(), p1.clone()), F::once(p1.clone()))],
            ),
            (
                AxiomName::Since2,
                vec![F::iff(
                    F::since(p0.clone(), p1.clone()),
                    F::or(
                        p1.clone(),
                        F::and(p0.clone(), F::strong_prev(F::since(p0.clone(), p1.clone()))),
                    ),
                )],
            ),
            (
                AxiomName::Fp,
                vec![F::implies(p0.clone(), F::next(F::strong_prev(p0.clone())))],
            ),
            (
                AxiomName::Pf,
                vec![F::implies(p0.clone(), F::weak_prev(F::next(p0.clone())))],
            ),
            (
                AxiomName::Application,
                vec![F::implies(
                    jbox(t.clone(), F::implies(p0.clone(), p1.clone())),
                    F::implies(
                        jbox(s.clone(), p0.clone()),
                        jbox(Term::prod(t.clone(), s.clone()), p1.clone()),
                    ),
                )],
            ),
            (
                AxiomName::Sum,
                vec![
                    F::implies(
                        jbox(t.clone(), p0.clone()),
                        jbox(Term::sum(t.clone(), s.clone()), p0.clone()),
                    ),
                    F::implies(
                        jbox(s.clone(), p0.clone()),
                        jbox(Term::sum(t.clone(), s.clone()), p0.clone()),
                    ),
                ],
            ),
            (
                AxiomName::Factivity,
                vec![F::implies(jbox(t.clone(), p0.clone()), p0.clone())],
            ),
            (
                AxiomName::PositiveIntrospection,
                vec![F::implies(
                    jbox(t.clone(), p0.clone()),
                    jbox(Term::bang(t.clone()), jbox(t.clone(), p0.clone())),
                )],
            ),
            (
                AxiomName::ApplicationO,
                vec![F::implies(
                    obox(t.clone(), F::implies(p0.clone(), p1.clone())),
                    F::implies(
                        obox(s.clone(), p0.clone()),
                        obox(Term::prod(t.clone(), s.clone()), p1.clone()),
                    ),
                )],
            ),
            (
                AxiomName::NoConflicts,
                vec![F::implies(
                    obox(t.clone(), p0.clone()),
                    opermit(t.clone(), p0.clone()),
                )],
            ),
            (
                AxiomName::ObligatedFactivity,
                vec![obox(
                    Term::ddagger(t.clone()),
                    F::implies(obox(t.clone(), p0.clone()), p0.clone()),
                )],
            ),
        ];
        raw.into_iter()
            .map(|(name, pats)| (name, pats.into_iter().map(|p| p.desugar()).collect()))
            .collect()
    })
}

#[derive(Default)]
struct Bindings {
    formulas: HashMap<String, Formula>,
    terms: HashMap<String, Term>,
    agent: Option<Agent>,
}

fn unify_agent(cand: Agent, b: &mut Bindings) -> bool {
    match b.agent {
        Some(a) => a == cand,
        None => {
            b.agent = Some(cand);
            true
        }
    }
}

fn unify_term(pat: &Term, cand: &Term, b: &mut Bindings) -> bool {
    match pat {
        Term::Var(v) if v.starts_with('$') => match b.terms.get(v) {
            Some(bound) => bound == cand,
            None => {
                b.terms.insert(v.clone(), cand.clone());
                true
            }
        },
        Term::Var(v) => matches!(cand, Term::Var(w) if w == v),
        Term::Const(c) => matches!(cand, Term::Const(d) if d == c),
        Term::Bang(p) => matches!(cand, Term::Bang(c) if unify_term(p, c, b)),
        Term::DoubleDagger(p) => matches!(cand, Term::DoubleDagger(c) if unify_term(p, c, b)),
        Term::Sum(pl, pr) => {
            matches!(cand, Term::Sum(cl, cr) if unify_term(pl, cl, b) && unify_term(pr, cr, b))
        }
        Term::Prod(pl, pr) => {
            matches!(cand, Term::Prod(cl, cr) if unify_term(pl, cl, b) && unify_term(pr, cr, b))
        }
    }
}

fn unify(pat: &Formula, cand: &Formula, b: &mut Bindings) -> bool {
    match pat {
        Formula::Atom(v) if v.starts_with('$') => match b.formulas.get(v) {
            Some(bound) => bound == cand,
            None => {
                b.formulas.insert(v.clone(), cand.clone());
                true
            }
        },
        Formula::Atom(p) => matches!(cand, Formula::Atom(c) if c == p),
        Formula::Bottom => matches!(cand, Formula::Bottom),
        Formula::Implies(pl, pr) => {
            matches!(cand, Formula::Implies(cl, cr) if unify(pl, cl, b) && unify(pr, cr, b))
        }
        Formula::Next(p) => matches!(cand, Formula::Next(c) if unify(p, c, b)),
        Formula::WeakPrev(p) => matches!(cand, Formula::WeakPrev(c) if unify(p, c, b)),
        Formula::Until(pl, pr) => {
            matches!(cand, Formula::Until(cl, cr) if unify(pl, cl, b) && unify(pr, cr, b))
        }
        Formula::Since(pl, pr) => {
            matches!(cand, Formula::Since(cl, cr) if unify(pl, cl, b) && unify(pr, cr, b))
        }
        Formula::JBox(pa, pt, pf) => match cand {
            Formula::JBox(ca, ct, cf) => {
                debug_assert_eq!(*pa, AGENT_META);
                unify_agent(*ca, b) && unify_term(pt, ct, b) && unify(pf, cf, b)
            }
            _ => false,
        },
        Formula::OBox(pa, pt, pf) => match cand {
            Formula::OBox(ca, ct, cf) => {
                debug_assert_eq!(*pa, AGENT_META);
                unify_agent(*ca, b) && unify_term(pt, ct, b) && unify(pf, cf, b)
            }
            _ => false,
        },
        _ => unreachable!("patterns are desugared"),
    }
}

/// Every schema of which the core-form formula is an instance. `Taut` is
/// included when the boolean abstraction is a tautology.
pub fn match_axiom(f: &Formula) -> BTreeSet<AxiomName> {
    debug_assert!(f.is_core(), "match_axiom needs a core-form formula");
    let mut out = BTreeSet::new();
    for (name, patterns) in schema_patterns() {
        for pat in patterns {
            let mut b = Bindings::default();
            if unify(pat, f, &mut b) {
                out.insert(*name);
                break;
            }
        }
    }
    if let Ok(true) = taut_check(f) {
        out.insert(AxiomName::Taut);
    }
    out
}

/// True when the core-form formula instantiates one of the 23 schemas.
pub fn is_axiom_instance(f: &Formula) -> bool {
    !match_axiom(f).is_empty()
}

/// A canonical instance of each schema over fresh atoms, for tests and for
/// schema-driven instantiation elsewhere. `phi`/`psi` fill the formula
/// slots, `t`/`s` the term slots, `i` the agent.
pub fn instantiate(
    name: AxiomName,
    phi: &Formula,
    psi: &Formula,
    t: &Term,
    s: &Term,
    i: Agent,
) -> Formula {
    use Formula as F;
    let jbox = |t: &Term, f: F| F::JBox(i, t.clone(), Box::new(f));
    let obox = |t: &Term, f: F| F::OBox(i, t.clone(), Box::new(f));
    let opermit = |t: &Term, f: F| F::OPermit(i, t.clone(), Box::new(f));
    let phi = phi.clone();
    let psi = psi.clone();
    match name {
        AxiomName::Taut => F::or(phi.clone(), F::not(phi)),
        AxiomName::NextK => F::implies(
            F::next(F::implies(phi.clone(), psi.clone())),
            F::implies(F::next(phi), F::next(psi)),
        ),
        AxiomName::AlwaysK => F::implies(
            F::always(F::implies(phi.clone(), psi.clone())),
            F::implies(F::always(phi), F::always(psi)),
        ),
        AxiomName::Fun => F::iff(F::next(F::not(phi.clone())), F::not(F::next(phi))),
        AxiomName::Ind => F::implies(
            F::always(F::implies(phi.clone(), F::next(phi.clone()))),
            F::implies(phi.clone(), F::always(phi)),
        ),
        AxiomName::Until1 => F::implies(F::until(phi, psi.clone()), F::eventually(psi)),
        AxiomName::Until2 => F::iff(
            F::until(phi.clone(), psi.clone()),
            F::or(
                psi.clone(),
                F::and(phi.clone(), F::next(F::until(phi, psi))),
            ),
        ),
        AxiomName::SofarK => F::implies(
            F::sofar(F::implies(phi.clone(), psi.clone())),
            F::implies(F::sofar(phi), F::sofar(psi)),
        ),
        AxiomName::WPrevK => F::implies(
            F::weak_prev(F::implies(phi.clone(), psi.clone())),
            F::implies(F::weak_prev(phi), F::weak_prev(psi)),
        ),
        AxiomName::Sw => F::implies(F::strong_prev(phi.clone()), F::weak_prev(phi)),
        AxiomName::Initial => F::once(F::weak_prev(F::Bottom)),
        AxiomName::SofarInd => F::implies(
            F::sofar(F::implies(phi.clone(), F::weak_prev(phi.clone()))),
            F::implies(phi.clone(), F::sofar(phi)),
        ),
        AxiomName::Since1 => F::implies(F::since(phi, psi.clone()), F::once(psi)),
        AxiomName::Since2 => F::iff(
            F::since(phi.clone(), psi.clone()),
            F::or(
                psi.clone(),
                F::and(phi.clone(), F::strong_prev(F::since(phi, psi))),
            ),
        ),
        AxiomName::Fp => F::implies(phi.clone(), F::next(F::strong_prev(phi))),
        AxiomName::Pf => F::implies(phi.clone(), F::weak_prev(F::next(phi))),
        AxiomName::Application => F::implies(
            jbox(t, F::implies(phi.clone(), psi.clone())),
            F::implies(jbox(s, phi), jbox(&Term::prod(t.clone(), s.clone()), psi)),
        ),
        AxiomName::Sum => F::implies(
            jbox(t, phi.clone()),
            jbox(&Term::sum(t.clone(), s.clone()), phi),
        ),
        AxiomName::Factivity => F::implies(jbox(t, phi.clone()), phi),
        AxiomName::PositiveIntrospection => F::implies(
            jbox(t, phi.clone()),
            jbox(&Term::bang(t.clone()), jbox(t, phi)),
        ),
        AxiomName::ApplicationO => F::implies(
            obox(t, F::implies(phi.clone(), psi.clone())),
            F::implies(obox(s, phi), obox(&Term::prod(t.clone(), s.clone()), psi)),
        ),
        AxiomName::NoConflicts => F::implies(obox(t, phi.clone()), opermit(t, phi)),
        AxiomName::ObligatedFactivity => obox(
            &Term::ddagger(t.clone()),
            F::implies(obox(t, phi.clone()), phi),
        ),
    }
}

/// The fixpoint-unfolding instance for until, used all over the proof
/// bundles.
pub fn until2_instance(phi: &Formula, psi: &Formula) -> Formula {
    instantiate(
        AxiomName::Until2,
        phi,
        psi,
        &Term::var("$unused"),
        &Term::var("$unused"),
        Agent(0),
    )
}

/// The fixpoint-unfolding instance for since.
pub fn since2_instance(phi: &Formula, psi: &Formula) -> Formula {
    instantiate(
        AxiomName::Since2,
        phi,
        psi,
        &Term::var("$unused"),
        &Term::var("$unused"),
        Agent(0),
    )
}
