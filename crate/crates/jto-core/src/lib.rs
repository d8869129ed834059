//! Reasoning toolkit for the temporal epistemic-deontic justification logic
//! JTO: parse its language, check Hilbert-style derivations, model-check
//! formulas in relational (Fitting-style) and neighborhood interpreted
//! systems over lasso runs, run a bounded countermodel search, and reproduce
//! the Protagoras-versus-Euathlus case study end to end.

pub mod axioms;
pub mod corpus;
pub mod formats;
pub mod cs;
pub mod lemmas;
pub mod proof;
pub mod search;
pub mod semantics;
pub mod syntax;
pub mod taut;

pub use syntax::{
    parse_formula, parse_formula_with, parse_term, pretty, pretty_term, pretty_with, Agent,
    AgentTable, Formula, FormulaClosure, IntervalError, IntervalKind, ParseError, SortError, Term,
    TermSort,
};
pub use syntax::{
    as_boxdot, as_time_literal, as_true_at, forgetful_projection, interval_operator, subf_plus,
    time_literal, true_at,
};
