//! Constant specifications: downward-closed sets of iterated constant
//! assertions over axiom instances, with the epistemic/deontic projections.

use std::collections::BTreeSet;
use std::fmt;

use crate::axioms::is_axiom_instance;
use crate::syntax::{pretty, Formula, Term};

/// One entry, decomposed: a nonempty homogeneous prefix of constant boxes
/// applied to an inner formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryShape {
    /// True when the prefix is made of knowledge boxes, false for
    /// obligation boxes.
    pub epistemic: bool,
    /// Outermost first: (agent, constant name) per box.
    pub prefix: Vec<(crate::syntax::Agent, String)>,
    pub inner: Formula,
}

/// Decompose a core formula into a constant-specification entry shape.
/// Returns None when the formula does not have the required form.
pub fn entry_shape(core: &Formula) -> Option<EntryShape> {
    let epistemic = match core {
        Formula::JBox(_, _, _) => true,
        Formula::OBox(_, _, _) => false,
        _ => return None,
    };
    let mut prefix = Vec::new();
    let mut cur = core;
    loop {
        match cur {
            Formula::JBox(i, Term::Const(c), f) if epistemic => {
                prefix.push((*i, c.clone()));
                cur = f;
            }
            Formula::OBox(i, Term::Const(c), f) if !epistemic => {
                prefix.push((*i, c.clone()));
                cur = f;
            }
            _ => break,
        }
    }
    if prefix.is_empty() {
        return None;
    }
    Some(EntryShape { epistemic, prefix, inner: cur.clone() })
}

/// A constant specification: the set of formulas the iterated axiom
/// necessitation rules may produce. Entries are stored in core form.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConstantSpecification {
    entries: BTreeSet<Formula>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsViolationKind {
    /// Not a homogeneous constant-box prefix over a formula.
    BadShape,
    /// Inner formula is not an instance of axioms 1-23.
    InnerNotAxiom,
    /// Dropping the outermost box leaves the specification.
    NotDownwardClosed,
}

#[derive(Debug, Clone)]
pub struct CsViolation {
    pub kind: CsViolationKind,
    pub entry: Formula,
    pub detail: String,
}

impl fmt::Display for CsViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {} ({})", self.kind, pretty(&self.entry), self.detail)
    }
}

/// Outcome of validating a constant specification.
#[derive(Debug, Clone, Default)]
pub struct CsReport {
    pub violations: Vec<CsViolation>,
}

impl CsReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl ConstantSpecification {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Collect entries, desugaring each.
    pub fn from_formulas<I: IntoIterator<Item = Formula>>(entries: I) -> Self {
        ConstantSpecification {
            entries: entries.into_iter().map(|f| f.desugar()).collect(),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = &Formula> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Membership of a core-form formula.
    pub fn contains(&self, core: &Formula) -> bool {
        self.entries.contains(core)
    }

    /// The epistemic projection: entries with knowledge-box prefixes.
    pub fn epistemic_part(&self) -> Vec<&Formula> {
        self.entries
            .iter()
            .filter(|e| matches!(entry_shape(e), Some(s) if s.epistemic))
            .collect()
    }

    /// The deontic projection: entries with obligation-box prefixes.
    pub fn deontic_part(&self) -> Vec<&Formula> {
        self.entries
            .iter()
            .filter(|e| matches!(entry_shape(e), Some(s) if !s.epistemic))
            .collect()
    }
}

/// Check shape, inner-axiom-instancehood, and downward closure. Violations
/// are reported per entry; nothing throws.
pub fn check_cs(cs: &ConstantSpecification) -> CsReport {
    let mut report = CsReport::default();
    for entry in cs.entries() {
        let Some(shape) = entry_shape(entry) else {
            report.violations.push(CsViolation {
                kind: CsViolationKind::BadShape,
                entry: entry.clone(),
                detail: "expected a homogeneous prefix of constant boxes".to_string(),
            });
            continue;
        };
        if !is_axiom_instance(&shape.inner) {
            report.violations.push(CsViolation {
                kind: CsViolationKind::InnerNotAxiom,
                entry: entry.clone(),
                detail: format!("inner formula {} matches no axiom schema", pretty(&shape.inner)),
            });
        }
        if shape.prefix.len() > 1 {
            let dropped = match entry {
                Formula::JBox(_, _, f) | Formula::OBox(_, _, f) => (**f).clone(),
                _ => unreachable!(),
            };
            if !cs.contains(&dropped) {
                report.violations.push(CsViolation {
                    kind: CsViolationKind::NotDownwardClosed,
                    entry: entry.clone(),
                    detail: format!("missing {}", pretty(&dropped)),
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

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn empty_cs_is_valid() {
        assert!(check_cs(&ConstantSpecification::empty()).is_valid());
    }

    #[test]
    fn downward_closure_violation_detected() {
        // {[c]_1 [d]_2 (p -> (q -> p))} without the one-box entry.
        let cs = ConstantSpecification::from_formulas([f("[$c]_1 [$d]_2 (p -> (q -> p))")]);
        let report = check_cs(&cs);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].kind, CsViolationKind::NotDownwardClosed);
        // Adding the dropped entry fixes it.
        let cs = ConstantSpecification::from_formulas([
            f("[$c]_1 [$d]_2 (p -> (q -> p))"),
            f("[$d]_2 (p -> (q -> p))"),
        ]);
        assert!(check_cs(&cs).is_valid());
    }

    #[test]
    fn inner_must_be_an_axiom() {
        let cs = ConstantSpecification::from_formulas([f("[$c]_1 (p & q)")]);
        let report = check_cs(&cs);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].kind, CsViolationKind::InnerNotAxiom);
    }

    #[test]
    fn shape_violations() {
        // Variable term in the prefix.
        let cs = ConstantSpecification::from_formulas([f("[x]_1 (p -> p)")]);
        assert_eq!(check_cs(&cs).violations[0].kind, CsViolationKind::BadShape);
        // Mixed prefixes are not entries (homogeneity is enforced).
        let cs = ConstantSpecification::from_formulas([f("[$c]_1 O[$d]_1 (p -> p)")]);
        let report = check_cs(&cs);
        assert_eq!(report.violations[0].kind, CsViolationKind::InnerNotAxiom);
    }

    #[test]
    fn projections() {
        let cs = ConstantSpecification::from_formulas([
            f("[$c]_1 (p -> p)"),
            f("O[$d]_1 (p -> p)"),
        ]);
        assert_eq!(cs.epistemic_part().len(), 1);
        assert_eq!(cs.deontic_part().len(), 1);
    }
}
