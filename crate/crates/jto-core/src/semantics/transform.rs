//! Turn a relational model into a neighborhood model with the same runs:
//! the neighborhood of (state, term) collects the truth sets of the
//! evidence formulas that hold throughout the accessible states. Restricted
//! to a finite universe of formulas, truth is preserved pointwise.

use thiserror::Error;

use crate::syntax::{pretty, Formula};

use super::{
    set_members, FittingEval, FittingModel, McError, NeighborhoodModel, NeighborhoodRule,
    NeighborhoodTable, NonNormalValuation, StateId, StatePattern, StateSet, TermPattern, Universe,
};

#[derive(Debug, Clone, Error)]
pub enum TransformError {
    #[error("universe too small: {context} mentions {missing}, which is outside the universe")]
    UniverseTooSmall { context: String, missing: String },
    #[error(transparent)]
    Mc(#[from] McError),
}

/// Build the equivalent neighborhood model over the image states. The
/// universe must be subformula-closed and cover every justification body
/// that will be checked.
pub fn fitting_to_neighborhood(
    model: &FittingModel,
    universe: &Universe,
) -> Result<NeighborhoodModel, TransformError> {
    model.assert_well_formed();
    // Closure check: boxed bodies of universe members must be members.
    for f in &universe.formulas {
        if let Formula::JBox(_, t, g) | Formula::OBox(_, t, g) = f {
            if !universe.formulas.contains(g) {
                return Err(TransformError::UniverseTooSmall {
                    context: pretty(f),
                    missing: pretty(g),
                });
            }
            if !universe.terms.contains(t) {
                return Err(TransformError::UniverseTooSmall {
                    context: pretty(f),
                    missing: crate::syntax::pretty_term(t),
                });
            }
        }
    }

    let image = model.image();
    let nstates = model.state_count();
    // Remap image states to a dense range.
    let mut old_to_new: Vec<Option<StateId>> = vec![None; nstates];
    let mut states = Vec::new();
    for s in set_members(image, nstates) {
        old_to_new[s] = Some(states.len());
        states.push(model.states[s].clone());
    }
    let remap_set = |set: StateSet, old_to_new: &[Option<StateId>]| -> StateSet {
        let mut out = 0;
        for s in set_members(set, nstates) {
            if let Some(ns) = old_to_new[s] {
                out |= 1 << ns;
            }
        }
        out
    };

    let mut eval = FittingEval::new(model);
    let mut nbr: Vec<NeighborhoodTable> = Vec::new();
    let mut nbr_o: Vec<NeighborhoodTable> = Vec::new();
    for agent in 0..model.agents.len() {
        let mut rules = Vec::new();
        let mut rules_o = Vec::new();
        for w in set_members(image, nstates) {
            for t in &universe.terms {
                let mut family = Vec::new();
                let mut family_o = Vec::new();
                for phi in &universe.formulas {
                    let ts = eval.truth_set(phi)?;
                    if t.admits_sort(crate::syntax::TermSort::Epistemic)
                        && model.evidence[agent].contains(w, t, phi)
                        && model.rel[agent][w] & image & !ts == 0
                    {
                        let remapped = remap_set(ts, &old_to_new);
                        if !family.contains(&remapped) {
                            family.push(remapped);
                        }
                    }
                    if t.admits_sort(crate::syntax::TermSort::Deontic)
                        && model.nevidence[agent].contains(w, t, phi)
                        && model.rel_o[agent][w] & image & !ts == 0
                    {
                        let remapped = remap_set(ts, &old_to_new);
                        if !family_o.contains(&remapped) {
                            family_o.push(remapped);
                        }
                    }
                }
                let nw = old_to_new[w].unwrap();
                if !family.is_empty() {
                    rules.push(NeighborhoodRule {
                        state: StatePattern::One(nw),
                        term: TermPattern::Exact(t.clone()),
                        family,
                    });
                }
                if !family_o.is_empty() {
                    rules_o.push(NeighborhoodRule {
                        state: StatePattern::One(nw),
                        term: TermPattern::Exact(t.clone()),
                        family: family_o,
                    });
                }
            }
        }
        nbr.push(NeighborhoodTable { rules });
        nbr_o.push(NeighborhoodTable { rules: rules_o });
    }

    let runs = model
        .runs
        .iter()
        .map(|r| super::LassoRun {
            stem: r.stem.iter().map(|&s| old_to_new[s].unwrap()).collect(),
            cycle: r.cycle.iter().map(|&s| old_to_new[s].unwrap()).collect(),
        })
        .collect();
    let valuation = set_members(image, nstates)
        .map(|s| model.valuation[s].clone())
        .collect();
    let n = states.len();
    Ok(NeighborhoodModel {
        name: format!("{}.neighborhood", model.name),
        states,
        agents: model.agents.clone(),
        runs,
        nbr,
        nbr_o,
        valuation,
        nonnormal: vec![NonNormalValuation::default(); n],
    })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::super::{mc_fitting, mc_neighborhood, EvidenceTable, LassoRun};
    use super::*;
    use crate::syntax::{parse_formula, AgentTable};

    fn demo() -> FittingModel {
        let states = vec!["w0".into(), "w1".into(), "unused".into()];
        FittingModel {
            name: "demo".into(),
            states,
            agents: AgentTable::declared(["i"]),
            runs: vec![LassoRun::new(vec![0], vec![1])],
            rel: vec![vec![0b011, 0b010, 0b100]],
            rel_o: vec![vec![0b010, 0b010, 0b100]],
            evidence: vec![EvidenceTable::full()],
            nevidence: vec![EvidenceTable::obligated_factivity_only()],
            valuation: vec![
                ["p".to_string()].into_iter().collect(),
                ["p".to_string(), "q".to_string()].into_iter().collect(),
                BTreeSet::new(),
            ],
        }
    }

    #[test]
    fn transform_agrees_pointwise() {
        let m = demo();
        let checks = [
            "p",
            "q",
            "[t]_0 p",
            "[t]_0 q",
            "<t>_0 q",
            "X q",
            "p U q",
            "[t]_0 (p U q)",
            "O[t]_0 p",
        ];
        let parsed: Vec<Formula> = checks.iter().map(|s| parse_formula(s).unwrap()).collect();
        let uni = Universe::from_formulas(parsed.iter());
        let nm = fitting_to_neighborhood(&m, &uni).unwrap();
        // unused state dropped
        assert_eq!(nm.states.len(), 2);
        for f in &parsed {
            for n in 0..=3usize {
                let a = mc_fitting(&m, 0, n, f).unwrap();
                let b = mc_neighborhood(&nm, 0, n, f).unwrap();
                assert_eq!(a, b, "disagree on {} at {n}", pretty(f));
            }
        }
    }

    #[test]
    fn empty_evidence_gives_empty_families() {
        let mut m = demo();
        m.evidence = vec![EvidenceTable::default()];
        m.nevidence = vec![EvidenceTable::default()];
        let f = parse_formula("[t]_0 p").unwrap();
        let uni = Universe::from_formulas([&f]);
        let nm = fitting_to_neighborhood(&m, &uni).unwrap();
        for table in nm.nbr.iter().chain(nm.nbr_o.iter()) {
            assert!(table.rules.is_empty());
        }
        assert!(!mc_neighborhood(&nm, 0, 0, &f).unwrap());
    }
}
