//! Pretty-printer. `parse_formula(pretty(f))` returns a structurally equal
//! AST; parentheses are emitted only where precedence demands.

use super::{as_time_literal, as_true_at, Agent, AgentTable, Formula, Term};

fn agent_str(a: Agent, table: Option<&AgentTable>) -> String {
    match table.and_then(|t| t.name(a)) {
        Some(name) => name.to_string(),
        None => a.0.to_string(),
    }
}

pub fn pretty_term(t: &Term) -> String {
    // precedence: prefix (!,#) > * > +
    fn go(t: &Term, level: u8, out: &mut String) {
        let my = match t {
            Term::Const(_) | Term::Var(_) => 3,
            Term::Bang(_) | Term::DoubleDagger(_) => 2,
            Term::Prod(_, _) => 1,
            Term::Sum(_, _) => 0,
        };
        let paren = my < level;
        if paren {
            out.push('(');
        }
        match t {
            Term::Const(c) => {
                out.push('$');
                out.push_str(c);
            }
            Term::Var(v) => out.push_str(v),
            Term::Bang(s) => {
                out.push('!');
                go(s, 2, out);
            }
            Term::DoubleDagger(s) => {
                out.push('#');
                go(s, 2, out);
            }
            Term::Prod(l, r) => {
                go(l, 1, out);
                out.push('*');
                go(r, 2, out);
            }
            Term::Sum(l, r) => {
                go(l, 0, out);
                out.push('+');
                go(r, 1, out);
            }
        }
        if paren {
            out.push(')');
        }
    }
    let mut s = String::new();
    go(t, 0, &mut s);
    s
}

const LVL_IFF: u8 = 1;
const LVL_IMP: u8 = 2;
const LVL_OR: u8 = 3;
const LVL_AND: u8 = 4;
const LVL_UNTIL: u8 = 5;
const LVL_UNARY: u8 = 6;
const LVL_ATOM: u8 = 7;

fn level(f: &Formula) -> u8 {
    if as_time_literal(f).is_some() || as_true_at(f).is_some() {
        return LVL_ATOM;
    }
    match f {
        Formula::Atom(_) | Formula::Bottom | Formula::Top => LVL_ATOM,
        Formula::Iff(_, _) => LVL_IFF,
        Formula::Implies(_, _) => LVL_IMP,
        Formula::Or(_, _) => LVL_OR,
        Formula::And(_, _) => LVL_AND,
        Formula::Until(_, _) | Formula::Since(_, _) | Formula::WeakUntil(_, _) => LVL_UNTIL,
        _ => LVL_UNARY,
    }
}

fn go(f: &Formula, min: u8, table: Option<&AgentTable>, out: &mut String) {
    // Render recognizable chains as input sugar; the parser rebuilds the
    // identical tree, so round-tripping is preserved.
    if let Some(m) = as_time_literal(f) {
        out.push_str(&format!("time={m}"));
        return;
    }
    if let Some((m, body)) = as_true_at(f) {
        out.push_str(&format!("true_{m}("));
        go(body, 0, table, out);
        out.push(')');
        return;
    }
    let my = level(f);
    let paren = my < min;
    if paren {
        out.push('(');
    }
    match f {
        Formula::Atom(p) => out.push_str(p),
        Formula::Bottom => out.push_str("false"),
        Formula::Top => out.push_str("true"),
        Formula::Iff(l, r) => {
            go(l, LVL_IFF + 1, table, out);
            out.push_str(" <-> ");
            go(r, LVL_IFF, table, out);
        }
        Formula::Implies(l, r) => {
            go(l, LVL_IMP + 1, table, out);
            out.push_str(" -> ");
            go(r, LVL_IMP, table, out);
        }
        Formula::Or(l, r) => {
            go(l, LVL_OR, table, out);
            out.push_str(" | ");
            go(r, LVL_OR + 1, table, out);
        }
        Formula::And(l, r) => {
            go(l, LVL_AND, table, out);
            out.push_str(" & ");
            go(r, LVL_AND + 1, table, out);
        }
        Formula::Until(l, r) => {
            go(l, LVL_UNTIL + 1, table, out);
            out.push_str(" U ");
            go(r, LVL_UNTIL, table, out);
        }
        Formula::Since(l, r) => {
            go(l, LVL_UNTIL + 1, table, out);
            out.push_str(" S ");
            go(r, LVL_UNTIL, table, out);
        }
        Formula::WeakUntil(l, r) => {
            go(l, LVL_UNTIL + 1, table, out);
            out.push_str(" W ");
            go(r, LVL_UNTIL, table, out);
        }
        Formula::Not(g) => {
            out.push('~');
            go(g, LVL_UNARY, table, out);
        }
        Formula::Next(g) => {
            out.push_str("X ");
            go(g, LVL_UNARY, table, out);
        }
        Formula::WeakPrev(g) => {
            out.push_str("Yw ");
            go(g, LVL_UNARY, table, out);
        }
        Formula::StrongPrev(g) => {
            out.push_str("Ys ");
            go(g, LVL_UNARY, table, out);
        }
        Formula::Eventually(g) => {
            out.push_str("F ");
            go(g, LVL_UNARY, table, out);
        }
        Formula::Always(g) => {
            out.push_str("G ");
            go(g, LVL_UNARY, table, out);
        }
        Formula::OnceP(g) => {
            out.push_str("P- ");
            go(g, LVL_UNARY, table, out);
        }
        Formula::Sofar(g) => {
            out.push_str("H ");
            go(g, LVL_UNARY, table, out);
        }
        Formula::Boxdot(g) => {
            out.push_str("A ");
            go(g, LVL_UNARY, table, out);
        }
        Formula::JBox(i, t, g) => {
            out.push('[');
            out.push_str(&pretty_term(t));
            out.push_str("]_");
            out.push_str(&agent_str(*i, table));
            out.push(' ');
            go(g, LVL_UNARY, table, out);
        }
        Formula::JDiamond(i, t, g) => {
            out.push('<');
            out.push_str(&pretty_term(t));
            out.push_str(">_");
            out.push_str(&agent_str(*i, table));
            out.push(' ');
            go(g, LVL_UNARY, table, out);
        }
        Formula::OBox(i, t, g) => {
            if t.is_wildcard() {
                out.push_str("O_");
            } else {
                out.push_str("O[");
                out.push_str(&pretty_term(t));
                out.push_str("]_");
            }
            out.push_str(&agent_str(*i, table));
            out.push(' ');
            go(g, LVL_UNARY, table, out);
        }
        Formula::OPermit(i, t, g) => {
            if t.is_wildcard() {
                out.push_str("P_");
            } else {
                out.push_str("P[");
                out.push_str(&pretty_term(t));
                out.push_str("]_");
            }
            out.push_str(&agent_str(*i, table));
            out.push(' ');
            go(g, LVL_UNARY, table, out);
        }
    }
    if paren {
        out.push(')');
    }
}

/// Render with numeric agent subscripts.
pub fn pretty(f: &Formula) -> String {
    let mut s = String::new();
    go(f, 0, None, &mut s);
    s
}

/// Render with agent names from the table.
pub fn pretty_with(f: &Formula, table: &AgentTable) -> String {
    let mut s = String::new();
    go(f, 0, Some(table), &mut s);
    s
}

#[cfg(test)]
mod tests {
    use super::super::{parse_formula, time_literal, true_at};
    use super::*;

    #[test]
    fn sugar_chains_render_compactly() {
        assert_eq!(pretty(&time_literal(3)), "time=3");
        assert_eq!(
            pretty(&true_at(5, Formula::atom("p"))),
            "true_5(p)"
        );
        // and they reparse to the same tree
        let f = true_at(5, Formula::atom("p"));
        assert_eq!(parse_formula(&pretty(&f)).unwrap(), f);
    }

    #[test]
    fn parens_only_where_needed() {
        let f = parse_formula("(p -> q) -> r").unwrap();
        assert_eq!(pretty(&f), "(p -> q) -> r");
        let g = parse_formula("p -> (q -> r)").unwrap();
        assert_eq!(pretty(&g), "p -> q -> r");
    }
}
