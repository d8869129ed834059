//! Bounded satisfiability search over lasso shapes under modal-atom
//! abstraction: every justification assertion becomes an opaque atom
//! constrained by instantiated axiom schemas, and the resulting
//! propositional-temporal problem is decided by exhaustive enumeration with
//! per-position pruning. UNSAT within bounds refutes the abstraction, which
//! over-approximates the logic; SAT produces a labeled lasso witness.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::semantics::{FittingEval, FittingModel, LassoRun};
use crate::syntax::{as_boxdot, as_time_literal, pretty, AgentTable, Formula};

/// The modal-atom abstraction of a formula set.
#[derive(Debug, Clone)]
pub struct Abstraction {
    /// Maximal box-rooted subformulas (core form) and their atom names, in
    /// first-seen order.
    pub atom_map: Vec<(Formula, String)>,
    /// The abstracted inputs, in input order.
    pub formulas: Vec<Formula>,
    /// Schema instances over the mapped atoms; each holds at every instant.
    pub side_constraints: Vec<Formula>,
}

fn box_atom_name(k: usize) -> String {
    format!("$j{k}")
}

struct Abstractor {
    map: Vec<(Formula, String)>,
}

impl Abstractor {
    fn atom_for(&mut self, core: &Formula) -> String {
        if let Some((_, name)) = self.map.iter().find(|(f, _)| f == core) {
            return name.clone();
        }
        let name = box_atom_name(self.map.len());
        self.map.push((core.clone(), name.clone()));
        name
    }

    /// Replace maximal box-rooted subformulas by their atoms.
    fn apply(&mut self, core: &Formula) -> Formula {
        match core {
            Formula::JBox(_, _, _) | Formula::OBox(_, _, _) => {
                Formula::Atom(self.atom_for(core))
            }
            Formula::Atom(_) | Formula::Bottom => core.clone(),
            Formula::Implies(l, r) => Formula::implies(self.apply(l), self.apply(r)),
            Formula::Next(g) => Formula::next(self.apply(g)),
            Formula::WeakPrev(g) => Formula::weak_prev(self.apply(g)),
            Formula::Until(l, r) => Formula::until(self.apply(l), self.apply(r)),
            Formula::Since(l, r) => Formula::since(self.apply(l), self.apply(r)),
            _ => unreachable!("abstraction runs on core forms"),
        }
    }
}

impl Abstraction {
    /// Map a formula through the atom table without extending it.
    pub fn apply(&self, core: &Formula) -> Formula {
        fn go(map: &[(Formula, String)], core: &Formula) -> Formula {
            if let Some((_, name)) = map.iter().find(|(f, _)| f == core) {
                return Formula::Atom(name.clone());
            }
            match core {
                Formula::Atom(_) | Formula::Bottom => core.clone(),
                Formula::Implies(l, r) => Formula::implies(go(map, l), go(map, r)),
                Formula::Next(g) => Formula::next(go(map, g)),
                Formula::WeakPrev(g) => Formula::weak_prev(go(map, g)),
                Formula::Until(l, r) => Formula::until(go(map, l), go(map, r)),
                Formula::Since(l, r) => Formula::since(go(map, l), go(map, r)),
                Formula::JBox(_, _, _) | Formula::OBox(_, _, _) => core.clone(),
                _ => unreachable!(),
            }
        }
        go(&self.atom_map, core)
    }

    /// Invert the atom map on a formula.
    pub fn unapply(&self, f: &Formula) -> Formula {
        fn go(map: &[(Formula, String)], f: &Formula) -> Formula {
            match f {
                Formula::Atom(name) => map
                    .iter()
                    .find(|(_, n)| n == name)
                    .map(|(orig, _)| orig.clone())
                    .unwrap_or_else(|| f.clone()),
                Formula::Bottom => f.clone(),
                Formula::Implies(l, r) => Formula::implies(go(map, l), go(map, r)),
                Formula::Next(g) => Formula::next(go(map, g)),
                Formula::WeakPrev(g) => Formula::weak_prev(go(map, g)),
                Formula::Until(l, r) => Formula::until(go(map, l), go(map, r)),
                Formula::Since(l, r) => Formula::since(go(map, l), go(map, r)),
                _ => f.clone(),
            }
        }
        go(&self.atom_map, f)
    }
}

/// Abstract the (desugared) inputs and generate one level of schema
/// instances over the boxes that occur.
pub fn abstract_formulas(fs: &[Formula]) -> Abstraction {
    let mut ab = Abstractor { map: Vec::new() };
    let formulas: Vec<Formula> = fs.iter().map(|f| ab.apply(&f.desugar())).collect();

    // Collect the boxes that occur, then instantiate schemas with them.
    let boxes: Vec<Formula> = ab.map.iter().map(|(f, _)| f.clone()).collect();
    let mut side = Vec::new();
    let neg = |f: &Formula| Formula::implies(f.clone(), Formula::Bottom);

    for b1 in &boxes {
        match b1 {
            Formula::JBox(i1, t, g) => {
                // factivity: the box entails its body.
                let mut ab2 = Abstractor { map: ab.map.clone() };
                let body = ab2.apply(g);
                ab.map = ab2.map;
                side.push(Formula::implies(ab.apply(b1), body));
                // positive introspection and sum: only when the partner
                // box occurs too.
                for b2 in &boxes {
                    if let Formula::JBox(i2, t2, g2) = b2 {
                        let intro = matches!(t2, crate::syntax::Term::Bang(inner) if **inner == *t)
                            && **g2 == *b1;
                        if intro {
                            side.push(Formula::implies(ab.apply(b1), ab.apply(b2)));
                        }
                        let summed = matches!(
                            t2,
                            crate::syntax::Term::Sum(l, r) if (**l == *t || **r == *t)
                        ) && g2 == g
                            && i2 == i1;
                        if summed {
                            side.push(Formula::implies(ab.apply(b1), ab.apply(b2)));
                        }
                    }
                }
            }
            Formula::OBox(i, t, g) => {
                // no conflicts: not both a body and its negation via the
                // same term.
                for b2 in &boxes {
                    if let Formula::OBox(i2, t2, g2) = b2 {
                        if i2 == i && t2 == t && **g2 == neg(g) {
                            side.push(neg(&Formula::and(ab.apply(b1), ab.apply(b2)).desugar()));
                        }
                    }
                }
                // obligated factivity instances are theorems.
                if crate::semantics::SchemaPattern::ObligatedFactivityInstances.matches(g) {
                    if let crate::syntax::Term::DoubleDagger(inner) = t {
                        if let Formula::Implies(l, _) = &**g {
                            if let Formula::OBox(_, it, _) = &**l {
                                if it == &**inner {
                                    side.push(ab.apply(b1));
                                }
                            }
                        }
                    }
                }
            }
            _ => {}
        }
    }

    // Application closures: conclusion box must already occur.
    for b1 in &boxes {
        for b2 in &boxes {
            for b3 in &boxes {
                let app = match (b1, b2, b3) {
                    (
                        Formula::JBox(i1, t1, g1),
                        Formula::JBox(i2, t2, g2),
                        Formula::JBox(i3, t3, g3),
                    ) => {
                        i1 == i2
                            && i2 == i3
                            && matches!(t3, crate::syntax::Term::Prod(l, r) if **l == *t1 && **r == *t2)
                            && matches!(&**g1, Formula::Implies(l, r) if **l == **g2 && **r == **g3)
                    }
                    (
                        Formula::OBox(i1, t1, g1),
                        Formula::OBox(i2, t2, g2),
                        Formula::OBox(i3, t3, g3),
                    ) => {
                        i1 == i2
                            && i2 == i3
                            && matches!(t3, crate::syntax::Term::Prod(l, r) if **l == *t1 && **r == *t2)
                            && matches!(&**g1, Formula::Implies(l, r) if **l == **g2 && **r == **g3)
                    }
                    _ => false,
                };
                if app {
                    side.push(Formula::implies(
                        Formula::and(ab.apply(b1), ab.apply(b2)).desugar(),
                        ab.apply(b3),
                    ));
                }
            }
        }
    }

    Abstraction {
        atom_map: ab.map,
        formulas,
        side_constraints: side,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBounds {
    pub max_stem: usize,
    pub max_loop: usize,
}

impl SearchBounds {
    pub fn new(max_stem: usize, max_loop: usize) -> Self {
        assert!(max_loop >= 1);
        SearchBounds { max_stem, max_loop }
    }
}

#[derive(Debug, Clone, Error)]
pub enum SearchError {
    #[error("search space too large: {0} (reduce bounds or atoms)")]
    BoundsTooLarge(String),
    #[error("verdict was not UNSAT")]
    NotUnsat,
}

/// A satisfying lasso labeling, or exhaustion of the bounded space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Sat {
        /// True atoms per stem position.
        stem: Vec<BTreeSet<String>>,
        /// True atoms per cycle position.
        cycle: Vec<BTreeSet<String>>,
        /// The instant at which the inputs hold.
        position: usize,
    },
    Unsat {
        max_stem: usize,
        max_loop: usize,
    },
}

impl Verdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, Verdict::Sat { .. })
    }

    /// The induced pure-temporal model of a SAT witness.
    pub fn induced_model(&self) -> Option<FittingModel> {
        match self {
            Verdict::Sat { stem, cycle, .. } => {
                let n = stem.len() + cycle.len();
                Some(FittingModel {
                    name: "witness".into(),
                    states: (0..n).map(|i| format!("s{i}")).collect(),
                    agents: AgentTable::declared(Vec::<String>::new()),
                    runs: vec![LassoRun::new(
                        (0..stem.len()).collect(),
                        (stem.len()..n).collect(),
                    )],
                    rel: vec![],
                    rel_o: vec![],
                    evidence: vec![],
                    nevidence: vec![],
                    valuation: stem.iter().chain(cycle.iter()).cloned().collect(),
                })
            }
            Verdict::Unsat { .. } => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Sat { stem, cycle, position } => {
                let fmt_side = |side: &[BTreeSet<String>]| {
                    side.iter()
                        .map(|labels| {
                            labels.iter().cloned().collect::<Vec<_>>().join(",")
                        })
                        .map(|s| format!("{{{s}}}"))
                        .collect::<Vec<_>>()
                        .join(" ")
                };
                write!(
                    f,
                    "SAT stem=[{}] loop=[{}] labels={{at={position}}}",
                    fmt_side(stem),
                    fmt_side(cycle)
                )
            }
            Verdict::Unsat { max_stem, max_loop } => {
                write!(f, "UNSAT max_stem={max_stem} max_loop={max_loop}")
            }
        }
    }
}

/// Position-local expression: propositional structure over atoms and time
/// literals, decidable per (position, labeling) pair.
#[derive(Debug, Clone)]
enum Local {
    Bottom,
    Time(usize),
    Atom(usize),
    Implies(Box<Local>, Box<Local>),
}

fn localize(core: &Formula, atoms: &BTreeMap<String, usize>) -> Option<Local> {
    if let Some(m) = as_time_literal(core) {
        return Some(Local::Time(m));
    }
    match core {
        Formula::Bottom => Some(Local::Bottom),
        Formula::Atom(p) => atoms.get(p).map(|&i| Local::Atom(i)),
        Formula::Implies(l, r) => Some(Local::Implies(
            Box::new(localize(l, atoms)?),
            Box::new(localize(r, atoms)?),
        )),
        _ => None,
    }
}

fn eval_local(e: &Local, block: u64, instant_time: Option<usize>) -> bool {
    match e {
        Local::Bottom => false,
        Local::Time(m) => instant_time == Some(*m),
        Local::Atom(i) => block & (1 << i) != 0,
        Local::Implies(l, r) => {
            !eval_local(l, block, instant_time) || eval_local(r, block, instant_time)
        }
    }
}

fn max_time_index(e: &Local, acc: &mut usize) {
    match e {
        Local::Time(m) => *acc = (*acc).max(*m),
        Local::Implies(l, r) => {
            max_time_index(l, acc);
            max_time_index(r, acc);
        }
        _ => {}
    }
}

struct Searcher {
    atoms: Vec<String>,
    /// Constraints holding at every instant, position-local form.
    local_always: Vec<Local>,
    /// Source formulas of the local constraints, for diagnostics.
    local_src: Vec<Formula>,
    /// Everything, for the exact final check: (formula, must hold at query
    /// instant) or (formula under always-closure).
    query_formulas: Vec<Formula>,
    always_formulas: Vec<Formula>,
    at: Option<usize>,
    bounds: SearchBounds,
    budget: u64,
    spent: u64,
    /// Diagnostics: deepest position where every block was pruned.
    deepest_conflict: Option<(usize, Vec<(u64, usize)>)>,
    max_time: usize,
    max_depth: usize,
}

const DEFAULT_BUDGET: u64 = 40_000_000;

impl Searcher {
    fn block_count(&self) -> u64 {
        1u64 << self.atoms.len()
    }

    /// Instant classes of an absolute position: which `time=` literal (if
    /// any) can be true at an instant mapping to this position.
    fn classes(&self, pos: usize, stem: usize, cycle: usize) -> Vec<Option<usize>> {
        if pos < stem {
            // A stem position is a single instant.
            return vec![if pos <= self.max_time { Some(pos) } else { None }];
        }
        let mut out = vec![None];
        for m in 0..=self.max_time {
            if m >= stem && (m - stem) % cycle == (pos - stem) % cycle {
                out.push(Some(m));
            }
        }
        out
    }

    fn prune_ok(&self, pos: usize, block: u64, stem: usize, cycle: usize) -> Result<(), usize> {
        for (ci, c) in self.local_always.iter().enumerate() {
            for class in self.classes(pos, stem, cycle) {
                if !eval_local(c, block, class) {
                    return Err(ci);
                }
            }
        }
        // Local anchored query formulas are left to the final exact check.
        Ok(())
    }

    fn final_check(&mut self, stem_blocks: &[u64], cycle_blocks: &[u64]) -> Option<usize> {
        let n = stem_blocks.len() + cycle_blocks.len();
        let model = FittingModel {
            name: "cand".into(),
            states: (0..n).map(|i| format!("s{i}")).collect(),
            agents: AgentTable::declared(Vec::<String>::new()),
            runs: vec![LassoRun::new(
                (0..stem_blocks.len()).collect(),
                (stem_blocks.len()..n).collect(),
            )],
            rel: vec![],
            rel_o: vec![],
            evidence: vec![],
            nevidence: vec![],
            valuation: stem_blocks
                .iter()
                .chain(cycle_blocks.iter())
                .map(|&b| {
                    self.atoms
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| b & (1 << i) != 0)
                        .map(|(_, a)| a.clone())
                        .collect()
                })
                .collect(),
        };
        let mut eval = FittingEval::new(&model);
        // Always-constraints must hold from the origin on.
        for c in &self.always_formulas {
            let closed = Formula::boxdot(c.clone()).desugar();
            if !eval.truth_at(&closed, 0, 0).ok()? {
                return None;
            }
        }
        let candidates: Vec<usize> = match self.at {
            Some(m) => vec![m],
            None => {
                let horizon =
                    stem_blocks.len() + cycle_blocks.len() * (self.max_depth + 2);
                (0..=horizon).collect()
            }
        };
        'cand: for n0 in candidates {
            for f in &self.query_formulas {
                if !eval.truth_at(f, 0, n0).ok()? {
                    continue 'cand;
                }
            }
            return Some(n0);
        }
        None
    }

    fn run(&mut self) -> Result<Verdict, SearchError> {
        let natoms = self.atoms.len();
        if natoms > 24 {
            return Err(SearchError::BoundsTooLarge(format!(
                "{natoms} atoms after abstraction"
            )));
        }
        'shapes: for stem in 0..=self.bounds.max_stem {
            for cycle in 1..=self.bounds.max_loop {
                let total = stem + cycle;
                // The local constraints decouple across positions: compute
                // the admissible blocks per position up front. A position
                // with none kills the whole shape.
                let mut valid: Vec<Vec<u64>> = Vec::with_capacity(total);
                for pos in 0..total {
                    let mut ok = Vec::new();
                    let mut conflicts: Vec<(u64, usize)> = Vec::new();
                    for block in 0..self.block_count() {
                        self.spent += 1;
                        if self.spent > self.budget {
                            return Err(SearchError::BoundsTooLarge(format!(
                                "budget of {} assignments exhausted",
                                self.budget
                            )));
                        }
                        match self.prune_ok(pos, block, stem, cycle) {
                            Ok(()) => ok.push(block),
                            Err(ci) => conflicts.push((block, ci)),
                        }
                    }
                    if ok.is_empty() {
                        let better = match &self.deepest_conflict {
                            None => true,
                            Some((p, _)) => pos > *p,
                        };
                        if better {
                            self.deepest_conflict = Some((pos, conflicts));
                        }
                        continue 'shapes;
                    }
                    valid.push(ok);
                }
                let mut blocks: Vec<u64> = vec![0; total];
                if let Some(v) = self.dfs(0, stem, cycle, &valid, &mut blocks)? {
                    return Ok(v);
                }
            }
        }
        Ok(Verdict::Unsat {
            max_stem: self.bounds.max_stem,
            max_loop: self.bounds.max_loop,
        })
    }

    fn dfs(
        &mut self,
        pos: usize,
        stem: usize,
        cycle: usize,
        valid: &[Vec<u64>],
        blocks: &mut Vec<u64>,
    ) -> Result<Option<Verdict>, SearchError> {
        let total = stem + cycle;
        if pos == total {
            let stem_blocks = blocks[..stem].to_vec();
            let cycle_blocks = blocks[stem..].to_vec();
            if let Some(n0) = self.final_check(&stem_blocks, &cycle_blocks) {
                let to_labels = |b: &u64| -> BTreeSet<String> {
                    self.atoms
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| b & (1 << i) != 0)
                        .map(|(_, a)| a.clone())
                        .collect()
                };
                return Ok(Some(Verdict::Sat {
                    stem: stem_blocks.iter().map(to_labels).collect(),
                    cycle: cycle_blocks.iter().map(to_labels).collect(),
                    position: n0,
                }));
            }
            return Ok(None);
        }
        for &block in &valid[pos] {
            self.spent += 1;
            if self.spent > self.budget {
                return Err(SearchError::BoundsTooLarge(format!(
                    "budget of {} assignments exhausted",
                    self.budget
                )));
            }
            blocks[pos] = block;
            if let Some(v) = self.dfs(pos + 1, stem, cycle, valid, blocks)? {
                return Ok(Some(v));
            }
        }
        Ok(None)
    }
}

fn build_searcher(fs: &[Formula], at: Option<usize>, bounds: SearchBounds) -> (Searcher, Abstraction) {
    let mut inputs: Vec<Formula> = fs.to_vec();
    if let Some(m) = at {
        inputs.push(crate::syntax::time_literal(m));
    }
    let abstraction = abstract_formulas(&inputs);

    // Atom table: propositional atoms of the abstracted formulas and the
    // side constraints.
    let mut names: BTreeSet<String> = BTreeSet::new();
    for f in abstraction
        .formulas
        .iter()
        .chain(abstraction.side_constraints.iter())
    {
        names.extend(f.atoms());
    }
    let atoms: Vec<String> = names.into_iter().collect();
    let index: BTreeMap<String, usize> =
        atoms.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect();

    let mut local_always = Vec::new();
    let mut local_src = Vec::new();
    let mut always_formulas = Vec::new();
    let mut query_formulas = Vec::new();
    let mut max_time = at.unwrap_or(0);
    let mut max_depth = 0usize;
    for (f, orig) in abstraction.formulas.iter().zip(inputs.iter()) {
        max_depth = max_depth.max(f.temporal_depth());
        if let Some(body) = as_boxdot(f) {
            if let Some(local) = localize(&body, &index) {
                max_time_index(&local, &mut max_time);
                local_always.push(local);
                local_src.push(orig.clone());
                // Keep the exact check too: the pruning is only sound, not
                // complete, for anchored constraints across loop classes.
                query_formulas.push(f.clone());
                continue;
            }
        }
        if let Some(local) = localize(f, &index) {
            max_time_index(&local, &mut max_time);
        }
        query_formulas.push(f.clone());
    }
    for c in &abstraction.side_constraints {
        if let Some(local) = localize(c, &index) {
            max_time_index(&local, &mut max_time);
            local_always.push(local);
            local_src.push(abstraction.unapply(c));
        }
        always_formulas.push(c.clone());
    }

    (
        Searcher {
            atoms,
            local_always,
            local_src,
            query_formulas,
            always_formulas,
            at,
            bounds,
            budget: DEFAULT_BUDGET,
            spent: 0,
            deepest_conflict: None,
            max_time,
            max_depth,
        },
        abstraction,
    )
}

/// Exhaustively search lasso labelings for one satisfying the abstraction
/// of the inputs, at the given instant when `at` is set.
pub fn bounded_sat(
    fs: &[Formula],
    at: Option<usize>,
    bounds: SearchBounds,
) -> Result<Verdict, SearchError> {
    let (mut searcher, _) = build_searcher(fs, at, bounds);
    searcher.run()
}

/// First-found conflict diagnostics for an UNSAT verdict.
#[derive(Debug, Clone)]
pub struct UnsatReport {
    pub position: usize,
    /// Atom whose flip moves the failure between two constraints, when one
    /// exists.
    pub pivot_atom: Option<String>,
    pub constraints: Vec<String>,
}

impl fmt::Display for UnsatReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "conflict at position {}", self.position)?;
        if let Some(a) = &self.pivot_atom {
            write!(f, " on atom {a}")?;
        }
        if !self.constraints.is_empty() {
            write!(f, " between: {}", self.constraints.join(" / "))?;
        }
        Ok(())
    }
}

/// Explain an UNSAT verdict: re-run the search with conflict tracking and
/// report the first fully pruned position.
pub fn explain_unsat(
    fs: &[Formula],
    at: Option<usize>,
    bounds: SearchBounds,
) -> Result<UnsatReport, SearchError> {
    let (mut searcher, abstraction) = build_searcher(fs, at, bounds);
    let verdict = searcher.run()?;
    if verdict.is_sat() {
        return Err(SearchError::NotUnsat);
    }
    let describe = |local_idx: usize| -> String {
        searcher
            .local_src
            .get(local_idx)
            .map(pretty)
            .unwrap_or_else(|| format!("constraint #{local_idx}"))
    };
    match &searcher.deepest_conflict {
        None => Ok(UnsatReport {
            position: 0,
            pivot_atom: None,
            constraints: vec!["exhausted without a per-position conflict".into()],
        }),
        Some((pos, conflicts)) => {
            // Find two blocks differing in a single atom with different
            // failing constraints.
            let mut pivot = None;
            let mut pair: BTreeSet<usize> = BTreeSet::new();
            'outer: for (b1, c1) in conflicts {
                for (b2, c2) in conflicts {
                    let diff = b1 ^ b2;
                    if c1 != c2 && diff.count_ones() == 1 {
                        let atom_idx = diff.trailing_zeros() as usize;
                        pivot = Some(searcher.atoms[atom_idx].clone());
                        pair.insert(*c1);
                        pair.insert(*c2);
                        break 'outer;
                    }
                }
            }
            if pair.is_empty() {
                if let Some((_, c)) = conflicts.first() {
                    pair.insert(*c);
                }
            }
            Ok(UnsatReport {
                position: *pos,
                pivot_atom: pivot.map(|p| {
                    // Report the original box for abstraction atoms.
                    abstraction
                        .atom_map
                        .iter()
                        .find(|(_, n)| *n == p)
                        .map(|(f, _)| pretty(f))
                        .unwrap_or(p)
                }),
                constraints: pair.into_iter().map(describe).collect(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::mc_fitting;
    use crate::syntax::parse_formula;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn propositional_clash_is_unsat() {
        let v = bounded_sat(&[f("p"), f("~p")], None, SearchBounds::new(2, 2)).unwrap();
        assert!(matches!(v, Verdict::Unsat { .. }));
    }

    #[test]
    fn eventuality_is_sat_with_witness() {
        let v = bounded_sat(&[f("F q")], None, SearchBounds::new(2, 2)).unwrap();
        let Verdict::Sat { position, .. } = &v else {
            panic!("expected SAT");
        };
        let model = v.induced_model().unwrap();
        assert!(mc_fitting(&model, 0, *position, &f("F q")).unwrap());
    }

    #[test]
    fn atom_map_round_trips() {
        let fs = [
            f("O[a]_1 pay | ~O[a]_1 pay"),
            f("[t]_0 (p -> q) -> ([s]_0 p -> [t*s]_0 q)"),
        ];
        let ab = abstract_formulas(&fs.iter().map(|g| g.clone()).collect::<Vec<_>>());
        for g in &fs {
            let core = g.desugar();
            assert_eq!(ab.unapply(&ab.apply(&core)), core);
        }
        // The two occurrences of O[a]_1 pay share one atom.
        let obox_core = f("O[a]_1 pay").desugar();
        assert_eq!(
            ab.atom_map.iter().filter(|(b, _)| *b == obox_core).count(),
            1
        );
    }

    #[test]
    fn noc_constraint_only_when_partner_occurs() {
        let ab = abstract_formulas(&[f("O[a]_1 pay").desugar()]);
        assert!(ab
            .side_constraints
            .iter()
            .all(|c| !pretty(c).contains('&')));
        let ab2 = abstract_formulas(&[
            f("O[a]_1 pay").desugar(),
            f("O[a]_1 ~pay").desugar(),
        ]);
        assert!(!ab2.side_constraints.is_empty());
        // And the pair is unsatisfiable together under the constraints.
        let v = bounded_sat(
            &[f("O[a]_1 pay"), f("O[a]_1 ~pay")],
            None,
            SearchBounds::new(1, 1),
        )
        .unwrap();
        assert!(matches!(v, Verdict::Unsat { .. }));
        // Different terms conflict no more.
        let v = bounded_sat(
            &[f("O[a]_1 pay"), f("O[b]_1 ~pay")],
            None,
            SearchBounds::new(1, 1),
        )
        .unwrap();
        assert!(v.is_sat());
    }

    #[test]
    fn time_anchoring() {
        // time=2 alone: satisfiable, the query sits at instant 2.
        let v = bounded_sat(&[f("p")], Some(2), SearchBounds::new(3, 1)).unwrap();
        assert!(v.is_sat());
        // A(time=2 -> p) & A(time=2 -> ~p) is unsatisfiable.
        let v = bounded_sat(
            &[f("true_2(p)"), f("true_2(~p)")],
            Some(2),
            SearchBounds::new(3, 1),
        )
        .unwrap();
        assert!(matches!(v, Verdict::Unsat { .. }));
    }

    #[test]
    fn determinism() {
        let fs = [f("F q"), f("G (q -> X r)")];
        let a = bounded_sat(&fs, None, SearchBounds::new(2, 2)).unwrap();
        let b = bounded_sat(&fs, None, SearchBounds::new(2, 2)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn too_many_atoms_is_a_budget_error() {
        let fs: Vec<Formula> = (0..26)
            .map(|i| f(&format!("F a{i}")))
            .collect();
        assert!(matches!(
            bounded_sat(&fs, None, SearchBounds::new(1, 1)),
            Err(SearchError::BoundsTooLarge(_))
        ));
    }

    #[test]
    fn explain_requires_unsat() {
        assert!(matches!(
            explain_unsat(&[f("p")], None, SearchBounds::new(1, 1)),
            Err(SearchError::NotUnsat)
        ));
        let report =
            explain_unsat(&[f("p & ~p")], None, SearchBounds::new(1, 1)).unwrap();
        assert_eq!(report.position, 0);
    }
}
