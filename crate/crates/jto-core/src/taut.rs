//! Propositional tautology decisions by boolean abstraction: every maximal
//! subformula not rooted in `->` or `false` becomes an opaque atom (identical
//! subformulas share one), then all valuations are enumerated.

use std::collections::HashMap;

use thiserror::Error;

use crate::syntax::Formula;

/// Abstracted atom budget; past this the caller should split the step.
pub const MAX_ABSTRACT_ATOMS: usize = 20;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("boolean abstraction needs {found} atoms, more than the cap of {cap}")]
pub struct TooManyAtoms {
    pub found: usize,
    pub cap: usize,
}

/// Abstraction skeleton: implications over bottom and opaque atoms.
enum Skel {
    Bottom,
    Atom(usize),
    Implies(Box<Skel>, Box<Skel>),
}

fn abstract_core<'f>(
    f: &'f Formula,
    atoms: &mut HashMap<&'f Formula, usize>,
) -> Skel {
    match f {
        Formula::Bottom => Skel::Bottom,
        Formula::Implies(l, r) => Skel::Implies(
            Box::new(abstract_core(l, atoms)),
            Box::new(abstract_core(r, atoms)),
        ),
        other => {
            let next = atoms.len();
            let id = *atoms.entry(other).or_insert(next);
            Skel::Atom(id)
        }
    }
}

fn eval(skel: &Skel, valuation: u32) -> bool {
    match skel {
        Skel::Bottom => false,
        Skel::Atom(i) => valuation & (1 << i) != 0,
        Skel::Implies(l, r) => !eval(l, valuation) || eval(r, valuation),
    }
}

/// Decide whether a core-form formula is a propositional tautology of its
/// boolean abstraction.
pub fn taut_check(f: &Formula) -> Result<bool, TooManyAtoms> {
    debug_assert!(f.is_core(), "taut_check needs a core-form formula");
    let mut atoms = HashMap::new();
    let skel = abstract_core(f, &mut atoms);
    let n = atoms.len();
    if n > MAX_ABSTRACT_ATOMS {
        return Err(TooManyAtoms { found: n, cap: MAX_ABSTRACT_ATOMS });
    }
    for v in 0..(1u32 << n) {
        if !eval(&skel, v) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Decide whether `conclusion` follows propositionally from `premises`
/// (all in core form), sharing the abstraction across all of them.
pub fn taut_entails(premises: &[&Formula], conclusion: &Formula) -> Result<bool, TooManyAtoms> {
    let mut atoms = HashMap::new();
    let premise_skels: Vec<Skel> = premises
        .iter()
        .map(|p| abstract_core(p, &mut atoms))
        .collect();
    let goal = abstract_core(conclusion, &mut atoms);
    let n = atoms.len();
    if n > MAX_ABSTRACT_ATOMS {
        return Err(TooManyAtoms { found: n, cap: MAX_ABSTRACT_ATOMS });
    }
    for v in 0..(1u32 << n) {
        if premise_skels.iter().all(|p| eval(p, v)) && !eval(&goal, v) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, Formula};

    fn core(s: &str) -> Formula {
        parse_formula(s).unwrap().desugar()
    }

    #[test]
    fn excluded_middle() {
        assert!(taut_check(&core("win | ~win")).unwrap());
    }

    #[test]
    fn identity_through_a_box() {
        assert!(taut_check(&core("[t]_1 p -> [t]_1 p")).unwrap());
    }

    #[test]
    fn factivity_is_not_propositional() {
        // Abstraction forgets factivity: [t]_1 p and p are distinct atoms.
        assert!(!taut_check(&core("[t]_1 p -> p")).unwrap());
    }

    #[test]
    fn shared_subformulas_share_atoms() {
        // X p appears twice; the abstraction must identify the occurrences.
        assert!(taut_check(&core("X p -> X p | q")).unwrap());
        assert!(!taut_check(&core("X p -> X ~ ~p")).unwrap());
    }

    #[test]
    fn entailment() {
        let p1 = core("win -> a1");
        let p2 = core("~win -> b1");
        let goal = core("a1 | b1");
        assert!(taut_entails(&[&p1, &p2], &goal).unwrap());
        assert!(!taut_entails(&[&p1], &goal).unwrap());
    }

    #[test]
    fn atom_cap() {
        let mut f = Formula::Bottom;
        for i in 0..=MAX_ABSTRACT_ATOMS {
            f = Formula::implies(Formula::atom(&format!("a{i}")), f);
        }
        assert!(matches!(taut_check(&f), Err(TooManyAtoms { .. })));
    }
}
