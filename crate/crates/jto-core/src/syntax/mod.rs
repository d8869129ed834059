//! Term and formula ASTs, sort checking, desugaring to the core connectives,
//! subformula closures, and the temporal sugar (`time=m`, `true_m`, interval
//! operators, forgetful projection).

mod parse;
mod print;

pub use parse::{parse_formula, parse_formula_with, parse_term, ParseError};
pub use print::{pretty, pretty_term, pretty_with};

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Index into a declared, finite agent list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Agent(pub usize);

impl fmt::Display for Agent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A declared agent list. Formulas reference agents by index; the table maps
/// indices back to names for display.
///
/// An *open* table grows on demand while parsing, so bare formulas can be
/// parsed without declarations. A closed table rejects unknown agents.
#[derive(Debug, Clone, Default)]
pub struct AgentTable {
    names: Vec<String>,
    open: bool,
}

impl AgentTable {
    /// A closed table with the given agent names.
    pub fn declared<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        AgentTable {
            names: names.into_iter().map(Into::into).collect(),
            open: false,
        }
    }

    /// An empty table that auto-registers agents as they are referenced.
    pub fn open() -> Self {
        AgentTable { names: Vec::new(), open: true }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, a: Agent) -> Option<&str> {
        self.names.get(a.0).map(|s| s.as_str())
    }

    pub fn lookup(&self, name: &str) -> Option<Agent> {
        self.names.iter().position(|n| n == name).map(Agent)
    }

    /// Resolve a name, appending it when the table is open.
    pub fn resolve_name(&mut self, name: &str) -> Option<Agent> {
        if let Some(a) = self.lookup(name) {
            return Some(a);
        }
        if self.open {
            self.names.push(name.to_string());
            Some(Agent(self.names.len() - 1))
        } else {
            None
        }
    }

    /// Resolve a numeric index, extending the table when open.
    pub fn resolve_index(&mut self, idx: usize) -> Option<Agent> {
        if idx < self.names.len() {
            return Some(Agent(idx));
        }
        if self.open {
            while self.names.len() <= idx {
                self.names.push(self.names.len().to_string());
            }
            Some(Agent(idx))
        } else {
            None
        }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

/// The two term sorts: epistemic terms may use `!` and `+`, deontic terms may
/// use `#` (the double dagger). Constants, variables and `*` are shared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TermSort {
    Epistemic,
    Deontic,
}

/// Justification terms. A single AST covers both sorts; sort membership is
/// computed from the operators that occur.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Const(String),
    Var(String),
    /// `!t`, epistemic only.
    Bang(Box<Term>),
    /// `t + s`, epistemic only.
    Sum(Box<Term>, Box<Term>),
    /// `t * s`, shared.
    Prod(Box<Term>, Box<Term>),
    /// `#t`, deontic only.
    DoubleDagger(Box<Term>),
}

/// Reserved variable name standing for the erased term of a forgetful
/// projection: `O_i p` is stored as an `OBox` carrying this wildcard.
pub const WILDCARD: &str = "_";

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn cst(name: &str) -> Term {
        Term::Const(name.to_string())
    }

    pub fn wildcard() -> Term {
        Term::Var(WILDCARD.to_string())
    }

    pub fn is_wildcard(&self) -> bool {
        matches!(self, Term::Var(v) if v == WILDCARD)
    }

    pub fn bang(t: Term) -> Term {
        Term::Bang(Box::new(t))
    }

    pub fn sum(l: Term, r: Term) -> Term {
        Term::Sum(Box::new(l), Box::new(r))
    }

    pub fn prod(l: Term, r: Term) -> Term {
        Term::Prod(Box::new(l), Box::new(r))
    }

    pub fn ddagger(t: Term) -> Term {
        Term::DoubleDagger(Box::new(t))
    }

    fn contains_bang_or_sum(&self) -> bool {
        match self {
            Term::Const(_) | Term::Var(_) => false,
            Term::Bang(_) | Term::Sum(_, _) => true,
            Term::Prod(l, r) => l.contains_bang_or_sum() || r.contains_bang_or_sum(),
            Term::DoubleDagger(t) => t.contains_bang_or_sum(),
        }
    }

    fn contains_ddagger(&self) -> bool {
        match self {
            Term::Const(_) | Term::Var(_) => false,
            Term::DoubleDagger(_) => true,
            Term::Prod(l, r) => l.contains_ddagger() || r.contains_ddagger(),
            Term::Bang(t) => t.contains_ddagger(),
            Term::Sum(l, r) => l.contains_ddagger() || r.contains_ddagger(),
        }
    }

    /// True when the term is well-formed in the given sort.
    pub fn admits_sort(&self, sort: TermSort) -> bool {
        match sort {
            TermSort::Epistemic => !self.contains_ddagger(),
            TermSort::Deontic => !self.contains_bang_or_sum(),
        }
    }

    /// Atomic terms (variables and constants) are shared between the sorts.
    pub fn is_atomic(&self) -> bool {
        matches!(self, Term::Const(_) | Term::Var(_))
    }

    /// All subterms, including the term itself.
    pub fn subterms(&self) -> Vec<&Term> {
        let mut out = vec![self];
        match self {
            Term::Const(_) | Term::Var(_) => {}
            Term::Bang(t) | Term::DoubleDagger(t) => out.extend(t.subterms()),
            Term::Sum(l, r) | Term::Prod(l, r) => {
                out.extend(l.subterms());
                out.extend(r.subterms());
            }
        }
        out
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SortError {
    #[error("term `{term}` is not {expected:?}: a knowledge box needs an epistemic term, an obligation box a deontic one")]
    WrongSort { term: String, expected: TermSort },
    #[error("term `{term}` mixes `!`/`+` with `#` and is well-formed in neither sort")]
    MixedSorts { term: String },
}

/// Formulas. Core connectives plus the abbreviation layer; `desugar` maps
/// everything onto {Atom, Bottom, Implies, Next, WeakPrev, Until, Since,
/// JBox, OBox}.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(String),
    Bottom,
    Implies(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    WeakPrev(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Since(Box<Formula>, Box<Formula>),
    /// `[t]_i f`: t is agent i's justification for knowing f.
    JBox(Agent, Term, Box<Formula>),
    /// `O[t]_i f`: t is a reason why f is obligatory for agent i.
    OBox(Agent, Term, Box<Formula>),

    // Abbreviations.
    Not(Box<Formula>),
    Top,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    /// `Ys f`, strong previous.
    StrongPrev(Box<Formula>),
    /// `F f`.
    Eventually(Box<Formula>),
    /// `G f`.
    Always(Box<Formula>),
    /// `P- f`, sometime in the past.
    OnceP(Box<Formula>),
    /// `H f`, has always been.
    Sofar(Box<Formula>),
    /// `A f`, always in the past and the future.
    Boxdot(Box<Formula>),
    /// `f W g`, weak until.
    WeakUntil(Box<Formula>, Box<Formula>),
    /// `<t>_i f`, dual of JBox.
    JDiamond(Agent, Term, Box<Formula>),
    /// `P[t]_i f`, permission: dual of OBox.
    OPermit(Agent, Term, Box<Formula>),
}

use Formula::*;

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Atom(name.to_string())
    }

    pub fn implies(l: Formula, r: Formula) -> Formula {
        Implies(Box::new(l), Box::new(r))
    }

    pub fn not(f: Formula) -> Formula {
        Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Or(Box::new(l), Box::new(r))
    }

    pub fn iff(l: Formula, r: Formula) -> Formula {
        Iff(Box::new(l), Box::new(r))
    }

    pub fn next(f: Formula) -> Formula {
        Next(Box::new(f))
    }

    pub fn weak_prev(f: Formula) -> Formula {
        WeakPrev(Box::new(f))
    }

    pub fn strong_prev(f: Formula) -> Formula {
        StrongPrev(Box::new(f))
    }

    pub fn until(l: Formula, r: Formula) -> Formula {
        Until(Box::new(l), Box::new(r))
    }

    pub fn since(l: Formula, r: Formula) -> Formula {
        Since(Box::new(l), Box::new(r))
    }

    pub fn weak_until(l: Formula, r: Formula) -> Formula {
        WeakUntil(Box::new(l), Box::new(r))
    }

    pub fn eventually(f: Formula) -> Formula {
        Eventually(Box::new(f))
    }

    pub fn always(f: Formula) -> Formula {
        Always(Box::new(f))
    }

    pub fn once(f: Formula) -> Formula {
        OnceP(Box::new(f))
    }

    pub fn sofar(f: Formula) -> Formula {
        Sofar(Box::new(f))
    }

    pub fn boxdot(f: Formula) -> Formula {
        Boxdot(Box::new(f))
    }

    /// Sort-checked knowledge box.
    pub fn jbox(i: Agent, t: Term, f: Formula) -> Result<Formula, SortError> {
        check_sort(&t, TermSort::Epistemic)?;
        Ok(JBox(i, t, Box::new(f)))
    }

    /// Sort-checked obligation box.
    pub fn obox(i: Agent, t: Term, f: Formula) -> Result<Formula, SortError> {
        check_sort(&t, TermSort::Deontic)?;
        Ok(OBox(i, t, Box::new(f)))
    }

    pub fn jdiamond(i: Agent, t: Term, f: Formula) -> Result<Formula, SortError> {
        check_sort(&t, TermSort::Epistemic)?;
        Ok(JDiamond(i, t, Box::new(f)))
    }

    pub fn opermit(i: Agent, t: Term, f: Formula) -> Result<Formula, SortError> {
        check_sort(&t, TermSort::Deontic)?;
        Ok(OPermit(i, t, Box::new(f)))
    }

    /// True when only core constructors occur.
    pub fn is_core(&self) -> bool {
        match self {
            Atom(_) | Bottom => true,
            Implies(l, r) | Until(l, r) | Since(l, r) => l.is_core() && r.is_core(),
            Next(f) | WeakPrev(f) => f.is_core(),
            JBox(_, _, f) | OBox(_, _, f) => f.is_core(),
            _ => false,
        }
    }

    /// Expand every abbreviation. Idempotent; total on well-formed input.
    pub fn desugar(&self) -> Formula {
        fn neg(f: Formula) -> Formula {
            Formula::implies(f, Bottom)
        }
        match self {
            Atom(_) | Bottom => self.clone(),
            Implies(l, r) => Formula::implies(l.desugar(), r.desugar()),
            Next(f) => Formula::next(f.desugar()),
            WeakPrev(f) => Formula::weak_prev(f.desugar()),
            Until(l, r) => Formula::until(l.desugar(), r.desugar()),
            Since(l, r) => Formula::since(l.desugar(), r.desugar()),
            JBox(i, t, f) => JBox(*i, t.clone(), Box::new(f.desugar())),
            OBox(i, t, f) => OBox(*i, t.clone(), Box::new(f.desugar())),
            Not(f) => neg(f.desugar()),
            Top => neg(Bottom),
            Or(l, r) => Formula::implies(neg(l.desugar()), r.desugar()),
            And(l, r) => {
                // l & r == ~(~l | ~r)
                neg(Or(Box::new(Not(l.clone())), Box::new(Not(r.clone()))).desugar())
            }
            Iff(l, r) => And(
                Box::new(Implies(l.clone(), r.clone())),
                Box::new(Implies(r.clone(), l.clone())),
            )
            .desugar(),
            StrongPrev(f) => neg(Formula::weak_prev(neg(f.desugar()))),
            Eventually(f) => Formula::until(Top.desugar(), f.desugar()),
            Always(f) => neg(Eventually(Box::new(Not(f.clone()))).desugar()),
            OnceP(f) => Formula::since(Top.desugar(), f.desugar()),
            Sofar(f) => neg(OnceP(Box::new(Not(f.clone()))).desugar()),
            Boxdot(f) => And(Box::new(Sofar(f.clone())), Box::new(Always(f.clone()))).desugar(),
            WeakUntil(l, r) => Or(
                Box::new(Until(l.clone(), r.clone())),
                Box::new(Always(l.clone())),
            )
            .desugar(),
            JDiamond(i, t, f) => neg(JBox(*i, t.clone(), Box::new(Not(f.clone()))).desugar()),
            OPermit(i, t, f) => neg(OBox(*i, t.clone(), Box::new(Not(f.clone()))).desugar()),
        }
    }

    /// Maximal nesting depth of temporal operators, computed on the core form.
    pub fn temporal_depth(&self) -> usize {
        let f = if self.is_core() { self.clone() } else { self.desugar() };
        fn depth(f: &Formula) -> usize {
            match f {
                Atom(_) | Bottom => 0,
                Implies(l, r) => depth(l).max(depth(r)),
                Next(g) | WeakPrev(g) => 1 + depth(g),
                Until(l, r) | Since(l, r) => 1 + depth(l).max(depth(r)),
                JBox(_, _, g) | OBox(_, _, g) => depth(g),
                _ => unreachable!("core form"),
            }
        }
        depth(&f)
    }

    /// All subformulas of a core formula, including itself.
    pub fn subformulas(&self) -> BTreeSet<Formula> {
        debug_assert!(self.is_core());
        let mut out = BTreeSet::new();
        fn walk(f: &Formula, out: &mut BTreeSet<Formula>) {
            out.insert(f.clone());
            match f {
                Atom(_) | Bottom => {}
                Implies(l, r) | Until(l, r) | Since(l, r) => {
                    walk(l, out);
                    walk(r, out);
                }
                Next(g) | WeakPrev(g) | JBox(_, _, g) | OBox(_, _, g) => walk(g, out),
                _ => {}
            }
        }
        walk(self, &mut out);
        out
    }

    /// Justification terms occurring anywhere in the formula (with subterms).
    pub fn terms(&self) -> BTreeSet<Term> {
        let mut out = BTreeSet::new();
        fn walk(f: &Formula, out: &mut BTreeSet<Term>) {
            match f {
                JBox(_, t, g) | OBox(_, t, g) | JDiamond(_, t, g) | OPermit(_, t, g) => {
                    for s in t.subterms() {
                        out.insert(s.clone());
                    }
                    walk(g, out);
                }
                Atom(_) | Bottom | Top => {}
                Implies(l, r) | Until(l, r) | Since(l, r) | And(l, r) | Or(l, r) | Iff(l, r)
                | WeakUntil(l, r) => {
                    walk(l, out);
                    walk(r, out);
                }
                Next(g) | WeakPrev(g) | Not(g) | StrongPrev(g) | Eventually(g) | Always(g)
                | OnceP(g) | Sofar(g) | Boxdot(g) => walk(g, out),
            }
        }
        walk(self, &mut out);
        out
    }

    /// Atom names occurring in the formula.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        fn walk(f: &Formula, out: &mut BTreeSet<String>) {
            match f {
                Atom(p) => {
                    out.insert(p.clone());
                }
                Bottom | Top => {}
                Implies(l, r) | Until(l, r) | Since(l, r) | And(l, r) | Or(l, r) | Iff(l, r)
                | WeakUntil(l, r) => {
                    walk(l, out);
                    walk(r, out);
                }
                Next(g) | WeakPrev(g) | Not(g) | StrongPrev(g) | Eventually(g) | Always(g)
                | OnceP(g) | Sofar(g) | Boxdot(g) | JBox(_, _, g) | OBox(_, _, g)
                | JDiamond(_, _, g) | OPermit(_, _, g) => walk(g, out),
            }
        }
        walk(self, &mut out);
        out
    }
}

fn check_sort(t: &Term, expected: TermSort) -> Result<(), SortError> {
    if !t.admits_sort(TermSort::Epistemic) && !t.admits_sort(TermSort::Deontic) {
        return Err(SortError::MixedSorts { term: pretty_term(t) });
    }
    if !t.admits_sort(expected) {
        return Err(SortError::WrongSort { term: pretty_term(t), expected });
    }
    Ok(())
}

/// `time=m`: the strong-previous chain `Ys^m Yw false`, expressing that the
/// moment is m. The number is an iteration count, not part of the language.
pub fn time_literal(m: usize) -> Formula {
    let mut f = Formula::weak_prev(Bottom);
    for _ in 0..m {
        f = Formula::strong_prev(f);
    }
    f
}

/// Recognize a `time=m` chain, sugared or core, returning m.
pub fn as_time_literal(f: &Formula) -> Option<usize> {
    let mut m = 0usize;
    let mut cur = f;
    loop {
        match cur {
            StrongPrev(g) => {
                m += 1;
                cur = g;
            }
            // core form of Ys g: ~Yw~g
            Implies(l, r) if **r == Bottom => match &**l {
                WeakPrev(inner) => match &**inner {
                    Implies(g, b) if **b == Bottom => {
                        m += 1;
                        cur = g;
                    }
                    Bottom if m == 0 => return None, // bare ~Yw false is not time=_
                    _ => return None,
                },
                _ => return None,
            },
            WeakPrev(g) if **g == Bottom => return Some(m),
            _ => return None,
        }
    }
}

/// `true_m(f)`: the temporal truth predicate `A(time=m -> f)`, expressing
/// that f holds at instant m.
pub fn true_at(m: usize, f: Formula) -> Formula {
    Formula::boxdot(Formula::implies(time_literal(m), f))
}

/// Recognize `true_m(f)`, returning (m, f).
pub fn as_true_at(f: &Formula) -> Option<(usize, &Formula)> {
    if let Boxdot(inner) = f {
        if let Implies(l, r) = &**inner {
            if let Some(m) = as_time_literal(l) {
                return Some((m, r));
            }
        }
    }
    None
}

/// Interval operator kinds over instants, with the bracket convention in the
/// name: `BoxClosedOpen` is the box over `[m, n)`, and so on. `BoxNow*` and
/// `BoxSince*` take a single endpoint relative to the present.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntervalKind {
    /// box over [now, m)
    BoxNowOpen,
    /// box over [now, m]
    BoxNowClosed,
    /// box over (m, now]
    BoxSinceOpen,
    /// box over [m, now]
    BoxSinceClosed,
    BoxClosedClosed,
    BoxClosedOpen,
    BoxOpenClosed,
    BoxOpenOpen,
    DiamondClosedClosed,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum IntervalError {
    #[error("interval [{m}, {n}] needs m < n")]
    BadInterval { m: usize, n: usize },
    #[error("interval kind {0:?} needs a second endpoint")]
    MissingEndpoint(&'static str),
    #[error("[m, now] needs m >= 1: the encoding refers to instant m-1")]
    SinceClosedAtZero,
}

/// Build the interval encodings over `time=` literals.
pub fn interval_operator(
    kind: IntervalKind,
    m: usize,
    n: Option<usize>,
    f: Formula,
) -> Result<Formula, IntervalError> {
    use IntervalKind::*;
    let two = |n: Option<usize>| -> Result<usize, IntervalError> {
        let n = n.ok_or(IntervalError::MissingEndpoint("two-endpoint box"))?;
        if m < n {
            Ok(n)
        } else {
            Err(IntervalError::BadInterval { m, n })
        }
    };
    Ok(match kind {
        BoxNowOpen => Formula::until(f, time_literal(m)),
        BoxNowClosed => Formula::until(f, time_literal(m + 1)),
        BoxSinceOpen => Formula::since(f, time_literal(m)),
        BoxSinceClosed => {
            if m == 0 {
                return Err(IntervalError::SinceClosedAtZero);
            }
            Formula::since(f, time_literal(m - 1))
        }
        BoxClosedClosed => {
            let n = two(n)?;
            true_at(m, Formula::until(f, time_literal(n + 1)))
        }
        BoxClosedOpen => {
            let n = two(n)?;
            true_at(m, Formula::until(f, time_literal(n)))
        }
        BoxOpenClosed => {
            let n = two(n)?;
            true_at(n, Formula::since(f, time_literal(m)))
        }
        BoxOpenOpen => {
            let n = two(n)?;
            true_at(n - 1, Formula::since(f, time_literal(m)))
        }
        DiamondClosedClosed => {
            let n = two(n)?;
            let mut stamp = time_literal(m);
            for k in m + 1..=n {
                stamp = Formula::or(stamp, time_literal(k));
            }
            let hit = Formula::and(f, stamp);
            Formula::or(Formula::eventually(hit.clone()), Formula::once(hit))
        }
    })
}

/// Erase justification terms from obligations: `O[t]_i f` and `P[t]_i f`
/// become the term-free `O_i f` / `P_i f` (wildcard-term boxes). Knowledge
/// boxes are left unchanged.
pub fn forgetful_projection(f: &Formula) -> Formula {
    match f {
        OBox(i, _, g) => OBox(*i, Term::wildcard(), Box::new(forgetful_projection(g))),
        OPermit(i, _, g) => OPermit(*i, Term::wildcard(), Box::new(forgetful_projection(g))),
        Atom(_) | Bottom | Top => f.clone(),
        Implies(l, r) => Implies(Box::new(forgetful_projection(l)), Box::new(forgetful_projection(r))),
        Until(l, r) => Until(Box::new(forgetful_projection(l)), Box::new(forgetful_projection(r))),
        Since(l, r) => Since(Box::new(forgetful_projection(l)), Box::new(forgetful_projection(r))),
        And(l, r) => And(Box::new(forgetful_projection(l)), Box::new(forgetful_projection(r))),
        Or(l, r) => Or(Box::new(forgetful_projection(l)), Box::new(forgetful_projection(r))),
        Iff(l, r) => Iff(Box::new(forgetful_projection(l)), Box::new(forgetful_projection(r))),
        WeakUntil(l, r) => {
            WeakUntil(Box::new(forgetful_projection(l)), Box::new(forgetful_projection(r)))
        }
        Next(g) => Next(Box::new(forgetful_projection(g))),
        WeakPrev(g) => WeakPrev(Box::new(forgetful_projection(g))),
        Not(g) => Not(Box::new(forgetful_projection(g))),
        StrongPrev(g) => StrongPrev(Box::new(forgetful_projection(g))),
        Eventually(g) => Eventually(Box::new(forgetful_projection(g))),
        Always(g) => Always(Box::new(forgetful_projection(g))),
        OnceP(g) => OnceP(Box::new(forgetful_projection(g))),
        Sofar(g) => Sofar(Box::new(forgetful_projection(g))),
        Boxdot(g) => Boxdot(Box::new(forgetful_projection(g))),
        JBox(i, t, g) => JBox(*i, t.clone(), Box::new(forgetful_projection(g))),
        JDiamond(i, t, g) => JDiamond(*i, t.clone(), Box::new(forgetful_projection(g))),
    }
}

/// The negation-closed subformula workspace of a formula: its subformulas,
/// those of `(true S Yw false)`, and the negations of all of these.
#[derive(Debug, Clone)]
pub struct FormulaClosure {
    pub base: Formula,
    /// Subf(base) together with Subf(true S Yw false).
    pub positive_part: BTreeSet<Formula>,
    /// Negations of the positive part.
    pub negations: BTreeSet<Formula>,
    /// positive_part plus negations.
    pub members: BTreeSet<Formula>,
}

/// Compute the closure. `chi` must be in core form.
pub fn subf_plus(chi: &Formula) -> FormulaClosure {
    assert!(chi.is_core(), "subf_plus needs a core-form formula");
    let anchor = Formula::since(Top.desugar(), Formula::weak_prev(Bottom));
    let mut positive = chi.subformulas();
    positive.extend(anchor.subformulas());
    let negations: BTreeSet<Formula> = positive
        .iter()
        .map(|f| Formula::implies(f.clone(), Bottom))
        .collect();
    let mut members = positive.clone();
    members.extend(negations.iter().cloned());
    FormulaClosure {
        base: chi.clone(),
        positive_part: positive,
        negations,
        members,
    }
}

/// Detect the core shape of `A g` (conjunction of `H g` and `G g`), returning g.
pub fn as_boxdot(core: &Formula) -> Option<Formula> {
    // desugar(A g) == desugar(H g & G g); match structurally by rebuilding.
    // A cheaper exact check: rebuild boxdot around candidate g and compare.
    // The candidate g is recovered from the Sofar half:
    //   desugar(H g) = (true S ~g) -> bot
    if let Implies(l, r) = core {
        if **r != Bottom {
            return None;
        }
        // l = desugar(~ (~(H g) | ~(G g)) ) body ... easier: l is the desugared Or-negation body.
        // Instead of structurally decomposing, search for a Since node and try its right side.
        fn first_since_rhs(f: &Formula) -> Option<&Formula> {
            match f {
                Since(_, r) => {
                    if let Implies(g, b) = &**r {
                        if **b == Bottom {
                            return Some(g);
                        }
                    }
                    None
                }
                Implies(a, b) => first_since_rhs(a).or_else(|| first_since_rhs(b)),
                _ => None,
            }
        }
        if let Some(g) = first_since_rhs(l) {
            let rebuilt = Formula::boxdot(g.clone()).desugar();
            if rebuilt == *core {
                return Some(g.clone());
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::atom("p")
    }

    #[test]
    fn sorts_reject_wrong_operators() {
        let a = Agent(0);
        // O[!x]_i p is not well-formed: ! is epistemic-only.
        let bad = Formula::obox(a, Term::bang(Term::var("x")), p());
        assert!(matches!(bad, Err(SortError::WrongSort { .. })));
        // [#x]_i p is not well-formed either.
        let bad = Formula::jbox(a, Term::ddagger(Term::var("x")), p());
        assert!(matches!(bad, Err(SortError::WrongSort { .. })));
        // Bare variables work in both.
        assert!(Formula::obox(a, Term::var("x"), p()).is_ok());
        assert!(Formula::jbox(a, Term::var("x"), p()).is_ok());
        // A term mixing both is well-formed in neither sort.
        let mixed = Term::prod(Term::bang(Term::var("x")), Term::ddagger(Term::var("y")));
        assert!(matches!(
            Formula::jbox(a, mixed, p()),
            Err(SortError::MixedSorts { .. })
        ));
    }

    #[test]
    fn desugar_is_idempotent_and_core() {
        let a = Agent(1);
        let f = Formula::opermit(a, Term::var("t"), p()).unwrap();
        let d = f.desugar();
        assert!(d.is_core());
        assert_eq!(d, d.desugar());
        // P[t]_1 p -> (O[t]_1 (p -> bot)) -> bot
        let expected = Formula::implies(
            OBox(a, Term::var("t"), Box::new(Formula::implies(p(), Bottom))),
            Bottom,
        );
        assert_eq!(d, expected);
        // Already-core formulas are fixpoints.
        let g = Formula::implies(p(), Bottom);
        assert_eq!(g.desugar(), g);
    }

    #[test]
    fn boxdot_unfolds_fully() {
        let f = Formula::boxdot(p());
        let expected = Formula::and(Formula::sofar(p()), Formula::always(p())).desugar();
        assert_eq!(f.desugar(), expected);
        assert_eq!(as_boxdot(&f.desugar()), Some(p()));
        assert_eq!(as_boxdot(&p().desugar()), None);
    }

    #[test]
    fn duality_is_definitional() {
        let a = Agent(0);
        let lhs = Formula::jdiamond(a, Term::var("t"), p()).unwrap().desugar();
        let rhs = Formula::not(JBox(a, Term::var("t"), Box::new(Formula::not(p())))).desugar();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn time_literals() {
        assert_eq!(time_literal(0), Formula::weak_prev(Bottom));
        assert_eq!(
            time_literal(2),
            Formula::strong_prev(Formula::strong_prev(Formula::weak_prev(Bottom)))
        );
        // desugar(time=1) has exactly one strong-previous unfolding layer.
        let d = time_literal(1).desugar();
        let expected = Formula::implies(
            Formula::weak_prev(Formula::implies(Formula::weak_prev(Bottom), Bottom)),
            Bottom,
        );
        assert_eq!(d, expected);
        for m in [0usize, 1, 3, 10] {
            assert_eq!(as_time_literal(&time_literal(m)), Some(m));
            assert_eq!(as_time_literal(&time_literal(m).desugar()), Some(m));
        }
        assert_eq!(as_time_literal(&p()), None);
    }

    #[test]
    fn true_at_shape() {
        let f = true_at(10, Formula::not(Formula::atom("pay")));
        match &f {
            Boxdot(inner) => match &**inner {
                Implies(l, _) => assert_eq!(as_time_literal(l), Some(10)),
                _ => panic!("expected implication"),
            },
            _ => panic!("expected boxdot"),
        }
        let (m, body) = as_true_at(&f).unwrap();
        assert_eq!(m, 10);
        assert_eq!(*body, Formula::not(Formula::atom("pay")));
    }

    #[test]
    fn intervals() {
        // box [now, 3) p == p U time=3
        let f = interval_operator(IntervalKind::BoxNowOpen, 3, None, p()).unwrap();
        assert_eq!(f, Formula::until(p(), time_literal(3)));
        // box [2, 4] p == true_2(p U time=5)
        let f = interval_operator(IntervalKind::BoxClosedClosed, 2, Some(4), p()).unwrap();
        assert_eq!(f, true_at(2, Formula::until(p(), time_literal(5))));
        assert!(matches!(
            interval_operator(IntervalKind::BoxClosedClosed, 3, Some(3), p()),
            Err(IntervalError::BadInterval { .. })
        ));
    }

    #[test]
    fn forgetful_projection_erases_obligation_terms() {
        let e = Agent(1);
        let pay = Formula::atom("pay");
        let f = Formula::obox(e, Term::var("a"), pay.clone()).unwrap();
        let proj = forgetful_projection(&f);
        assert_eq!(proj, OBox(e, Term::wildcard(), Box::new(pay.clone())));
        // No deontic operators: unchanged.
        let g = Formula::implies(p(), Formula::atom("q"));
        assert_eq!(forgetful_projection(&g), g);
        // contract projects to A(winfirst <-> O_e pay)
        let contract = Formula::boxdot(Formula::iff(
            Formula::atom("winfirst_e"),
            Formula::obox(e, Term::var("a"), pay.clone()).unwrap(),
        ));
        let expected = Formula::boxdot(Formula::iff(
            Formula::atom("winfirst_e"),
            OBox(e, Term::wildcard(), Box::new(pay)),
        ));
        assert_eq!(forgetful_projection(&contract), expected);
    }

    #[test]
    fn closure_of_atom() {
        let clo = subf_plus(&p());
        // A = {p} + Subf(true S Yw false) = {p, (bot->bot) S Yw bot, bot->bot, bot, Yw bot}
        assert_eq!(clo.positive_part.len(), 5);
        assert!(clo.positive_part.contains(&p()));
        assert!(clo.members.contains(&Formula::implies(p(), Bottom)));
        // bot -> bot is both a positive member and the negation of bot.
        assert_eq!(clo.members.len(), 9);
        assert!(clo.members.len() <= 2 * clo.positive_part.len());
    }

    #[test]
    fn closure_of_bottom() {
        let clo = subf_plus(&Bottom);
        assert!(clo.positive_part.contains(&Bottom));
        // Subf(bot) = {bot}; the rest comes from the anchor formula.
        assert_eq!(
            clo.positive_part.len(),
            4 // bot, bot->bot, Yw bot, (bot->bot) S Yw bot
        );
    }

    #[test]
    fn closure_is_subformula_closed_on_positive_part() {
        let a = Agent(0);
        let f = Formula::implies(
            Formula::jbox(a, Term::var("t"), p()).unwrap(),
            Formula::until(p(), Formula::atom("q")),
        )
        .desugar();
        let clo = subf_plus(&f);
        for m in &clo.positive_part {
            for sub in m.subformulas() {
                assert!(
                    clo.positive_part.contains(&sub),
                    "{sub:?} missing from positive part"
                );
            }
        }
    }
}
