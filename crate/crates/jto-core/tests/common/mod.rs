//! Shared helpers for the integration suites: a small deterministic RNG and
//! random generators for formulas, terms, and relational models.

use std::collections::BTreeSet;

use jto_core::semantics::{EvidenceTable, FittingModel, LassoRun};
use jto_core::syntax::{Agent, AgentTable, Formula, Term, TermSort};

pub struct Rng(pub u64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(seed.max(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    pub fn flip(&mut self) -> bool {
        self.next_u64() & 1 == 1
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.below(items.len())]
    }
}

pub fn random_term(rng: &mut Rng, sort: TermSort, depth: usize) -> Term {
    if depth == 0 || rng.below(3) == 0 {
        return if rng.flip() {
            Term::var(["x", "y", "t", "s", "a"][rng.below(5)])
        } else {
            Term::cst(["c", "d"][rng.below(2)])
        };
    }
    match (sort, rng.below(3)) {
        (TermSort::Epistemic, 0) => Term::bang(random_term(rng, sort, depth - 1)),
        (TermSort::Epistemic, 1) => Term::sum(
            random_term(rng, sort, depth - 1),
            random_term(rng, sort, depth - 1),
        ),
        (TermSort::Deontic, 0) | (TermSort::Deontic, 1) => {
            Term::ddagger(random_term(rng, sort, depth - 1))
        }
        _ => Term::prod(
            random_term(rng, sort, depth - 1),
            random_term(rng, sort, depth - 1),
        ),
    }
}

pub fn random_formula(rng: &mut Rng, depth: usize, atoms: &[&str], agents: usize) -> Formula {
    if depth == 0 {
        return match rng.below(8) {
            0 => Formula::Top,
            1 => Formula::Bottom,
            _ => Formula::atom(rng.pick(atoms)),
        };
    }
    let sub = |rng: &mut Rng| random_formula(rng, depth - 1, atoms, agents);
    match rng.below(20) {
        0 => Formula::atom(rng.pick(atoms)),
        1 => Formula::implies(sub(rng), sub(rng)),
        2 => Formula::not(sub(rng)),
        3 => Formula::and(sub(rng), sub(rng)),
        4 => Formula::or(sub(rng), sub(rng)),
        5 => Formula::iff(sub(rng), sub(rng)),
        6 => Formula::next(sub(rng)),
        7 => Formula::weak_prev(sub(rng)),
        8 => Formula::strong_prev(sub(rng)),
        9 => Formula::until(sub(rng), sub(rng)),
        10 => Formula::since(sub(rng), sub(rng)),
        11 => Formula::weak_until(sub(rng), sub(rng)),
        12 => Formula::eventually(sub(rng)),
        13 => Formula::always(sub(rng)),
        14 => Formula::once(sub(rng)),
        15 => Formula::sofar(sub(rng)),
        16 => Formula::boxdot(sub(rng)),
        17 => {
            let agent = Agent(rng.below(agents));
            let term = random_term(rng, TermSort::Epistemic, 2);
            let body = sub(rng);
            if rng.flip() {
                Formula::jbox(agent, term, body).unwrap()
            } else {
                Formula::jdiamond(agent, term, body).unwrap()
            }
        }
        18 => {
            let agent = Agent(rng.below(agents));
            let term = random_term(rng, TermSort::Deontic, 2);
            let body = sub(rng);
            if rng.flip() {
                Formula::obox(agent, term, body).unwrap()
            } else {
                Formula::opermit(agent, term, body).unwrap()
            }
        }
        _ => Formula::implies(sub(rng), sub(rng)),
    }
}

fn reflexive_transitive_closure(rel: &mut [u64], n: usize) {
    for (i, row) in rel.iter_mut().enumerate().take(n) {
        *row |= 1 << i;
    }
    loop {
        let mut changed = false;
        for i in 0..n {
            let mut row = rel[i];
            for j in 0..n {
                if rel[i] & (1 << j) != 0 {
                    row |= rel[j];
                }
            }
            if row != rel[i] {
                rel[i] = row;
                changed = true;
            }
        }
        if !changed {
            return;
        }
    }
}

fn shift_reflexive_closure(rel: &mut [u64], n: usize) {
    for i in 0..n {
        for j in 0..n {
            if rel[i] & (1 << j) != 0 {
                rel[j] |= 1 << j;
            }
        }
        let _ = i;
    }
}

/// A random relational model that satisfies the frame and evidence
/// conditions by construction: relations are closed appropriately, the
/// epistemic evidence is total, and the normative evidence carries exactly
/// the obligated-factivity instances.
///
/// Runs are pure loops over distinct states and runs share no states, so
/// every occurrence of a state sees the same suffix. Future-fragment
/// formulas are then position-independent, which is what the state-level
/// clauses need.
pub fn random_fitting_model(rng: &mut Rng, name: &str) -> FittingModel {
    let n = 2 + rng.below(3); // 2..=4 states
    let atoms = ["p", "q", "r"];
    let mut rel: Vec<u64> = (0..n).map(|_| rng.next_u64() % (1 << n)).collect();
    reflexive_transitive_closure(&mut rel, n);
    let mut rel_o: Vec<u64> = (0..n).map(|_| rng.next_u64() % (1 << n)).collect();
    shift_reflexive_closure(&mut rel_o, n);
    // Partition a prefix of the states into one or two disjoint loops.
    let nruns = 1 + rng.below(2.min(n - 1));
    let split = if nruns == 2 { 1 + rng.below(n - 1) } else { n };
    let mut runs = vec![LassoRun::new(vec![], (0..split).collect())];
    if nruns == 2 {
        runs.push(LassoRun::new(vec![], (split..n).collect()));
    }
    let valuation: Vec<BTreeSet<String>> = (0..n)
        .map(|_| {
            atoms
                .iter()
                .filter(|_| rng.flip())
                .map(|a| a.to_string())
                .collect()
        })
        .collect();
    FittingModel {
        name: name.to_string(),
        states: (0..n).map(|i| format!("s{i}")).collect(),
        agents: AgentTable::declared(["0", "1"]),
        runs,
        rel: vec![rel.clone(), rel],
        rel_o: vec![rel_o.clone(), rel_o],
        evidence: vec![EvidenceTable::full(), EvidenceTable::full()],
        nevidence: vec![
            EvidenceTable::obligated_factivity_only(),
            EvidenceTable::obligated_factivity_only(),
        ],
        valuation,
    }
}

/// Random formulas from the future fragment: no past operators, so truth
/// on pure-loop runs is a function of the state alone.
pub fn random_future_formula(
    rng: &mut Rng,
    depth: usize,
    atoms: &[&str],
    agents: usize,
) -> Formula {
    if depth == 0 {
        return match rng.below(8) {
            0 => Formula::Top,
            1 => Formula::Bottom,
            _ => Formula::atom(rng.pick(atoms)),
        };
    }
    let sub = |rng: &mut Rng| random_future_formula(rng, depth - 1, atoms, agents);
    match rng.below(14) {
        0 => Formula::atom(rng.pick(atoms)),
        1 => Formula::implies(sub(rng), sub(rng)),
        2 => Formula::not(sub(rng)),
        3 => Formula::and(sub(rng), sub(rng)),
        4 => Formula::or(sub(rng), sub(rng)),
        5 => Formula::iff(sub(rng), sub(rng)),
        6 => Formula::next(sub(rng)),
        7 => Formula::until(sub(rng), sub(rng)),
        8 => Formula::weak_until(sub(rng), sub(rng)),
        9 => Formula::eventually(sub(rng)),
        10 => Formula::always(sub(rng)),
        11 => {
            let agent = Agent(rng.below(agents));
            let term = random_term(rng, TermSort::Epistemic, 2);
            Formula::jbox(agent, term, sub(rng)).unwrap()
        }
        12 => {
            let agent = Agent(rng.below(agents));
            let term = random_term(rng, TermSort::Deontic, 2);
            Formula::obox(agent, term, sub(rng)).unwrap()
        }
        _ => Formula::implies(sub(rng), sub(rng)),
    }
}
