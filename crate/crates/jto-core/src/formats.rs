//! Text formats: formula lists (`.jto`), proof scripts (`.jtopf`), and
//! models (`.jtom`). All three are line oriented with `#` comments and
//! round-trip through their writers.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::axioms::AxiomName;
use crate::proof::{Cite, Justification, ProofLine, ProofScript};
use crate::semantics::{
    EvidenceRule, EvidenceTable, FittingModel, FormulaPattern, LassoRun, NeighborhoodModel,
    NeighborhoodRule, NeighborhoodTable, NonNormalValuation, SchemaPattern, StateId, StatePattern,
    StateSet, TermPattern,
};
use crate::syntax::{
    parse_formula_with, parse_term, pretty_term, pretty_with, AgentTable, Formula,
};

#[derive(Debug, Clone, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: {source}")]
    BadFormula {
        line: usize,
        #[source]
        source: crate::syntax::ParseError,
    },
}

fn err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Malformed { line: line + 1, message: message.into() }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            None
        } else {
            Some((i, t))
        }
    })
}

// ---------------------------------------------------------------------------
// .jto: formula lists.
// ---------------------------------------------------------------------------

/// A parsed formula list: the declared agents (or an open table) and one
/// formula per content line.
pub struct FormulaFile {
    pub agents: AgentTable,
    pub formulas: Vec<Formula>,
}

pub fn parse_jto(text: &str) -> Result<FormulaFile, FormatError> {
    let mut agents: Option<AgentTable> = None;
    let mut formulas = Vec::new();
    for (i, line) in content_lines(text) {
        if let Some(rest) = line.strip_prefix("agents") {
            let names: Vec<&str> = rest.split_whitespace().collect();
            if agents.is_some() || !formulas.is_empty() {
                return Err(err(i, "agents must be declared once, before any formula"));
            }
            agents = Some(AgentTable::declared(names));
            continue;
        }
        let table = agents.get_or_insert_with(AgentTable::open);
        let f = parse_formula_with(line, table)
            .map_err(|source| FormatError::BadFormula { line: i + 1, source })?;
        formulas.push(f);
    }
    Ok(FormulaFile {
        agents: agents.unwrap_or_else(AgentTable::open),
        formulas,
    })
}

pub fn write_jto(agents: &AgentTable, formulas: &[Formula]) -> String {
    let mut out = String::new();
    if !agents.is_empty() {
        let _ = writeln!(out, "agents {}", agents.names().join(" "));
    }
    for f in formulas {
        let _ = writeln!(out, "{}", pretty_with(f, agents));
    }
    out
}

// ---------------------------------------------------------------------------
// .jtopf: proof scripts.
// ---------------------------------------------------------------------------

fn fmt_cite(c: &Cite, pool_index: impl Fn(&Formula) -> usize) -> String {
    match c {
        Cite::Line(i) => format!("l{i}"),
        Cite::Hyp(h) => format!("h{}", pool_index(h)),
        Cite::Ref(name) => format!("ref({name})"),
    }
}

fn fmt_justification(j: &Justification, pool_index: impl Fn(&Formula) -> usize) -> String {
    match j {
        Justification::Hyp => "hyp".to_string(),
        Justification::Axiom(name) => format!("axiom {name}"),
        Justification::IaxNec => "iaxnec".to_string(),
        Justification::Taut(cites) => {
            if cites.is_empty() {
                "taut".to_string()
            } else {
                let rendered: Vec<String> =
                    cites.iter().map(|c| fmt_cite(c, &pool_index)).collect();
                format!("taut {}", rendered.join(","))
            }
        }
        Justification::Mp(i, j) => format!("mp {i} {j}"),
        Justification::NecNext(i) => format!("necx {i}"),
        Justification::NecWPrev(i) => format!("necyw {i}"),
        Justification::NecAlways(i) => format!("necg {i}"),
        Justification::NecSofar(i) => format!("nech {i}"),
        Justification::BoxdotLift(i) => format!("boxdot {i}"),
        Justification::WPrevRm(i) => format!("wprevrm {i}"),
        Justification::OnceRm(i) => format!("oncerm {i}"),
        Justification::Weaken(i) => format!("weaken {i}"),
        Justification::Deduce(i, h) => format!("deduce {i} h{}", pool_index(h)),
        Justification::Lemma(name, premises) => {
            let mut s = format!("lemma({name})");
            for p in premises {
                let _ = write!(s, " l{p}");
            }
            s
        }
    }
}

/// Serialize a script. The hypothesis pool collects the goal hypotheses and
/// every per-line hypothesis, deduplicated by core form.
pub fn write_jtopf(script: &ProofScript, agents: &AgentTable) -> String {
    write_jtopf_with_cs(script, agents, None)
}

/// Serialize a script with a constant-specification reference in the
/// header (a path to a `.jto` entry list, resolved by the consumer).
pub fn write_jtopf_with_cs(
    script: &ProofScript,
    agents: &AgentTable,
    cs: Option<&str>,
) -> String {
    let mut pool: Vec<Formula> = Vec::new();
    let mut seen: BTreeSet<Formula> = BTreeSet::new();
    let add = |f: &Formula, pool: &mut Vec<Formula>, seen: &mut BTreeSet<Formula>| {
        let core = f.desugar();
        if seen.insert(core) {
            pool.push(f.clone());
        }
    };
    for h in &script.goal_hypotheses {
        add(h, &mut pool, &mut seen);
    }
    for l in &script.lines {
        for h in &l.hypotheses {
            add(h, &mut pool, &mut seen);
        }
        if let Justification::Deduce(_, h) = &l.justification {
            add(h, &mut pool, &mut seen);
        }
        if let Justification::Taut(cites) = &l.justification {
            for c in cites {
                if let Cite::Hyp(h) = c {
                    add(h, &mut pool, &mut seen);
                }
            }
        }
    }
    let pool_index = |f: &Formula| -> usize {
        let core = f.desugar();
        pool.iter().position(|g| g.desugar() == core).unwrap()
    };

    let mut out = String::new();
    let _ = writeln!(out, "jtopf 1");
    let _ = writeln!(out, "name {}", script.name);
    if let Some(path) = cs {
        let _ = writeln!(out, "cs {path}");
    }
    if !agents.is_empty() {
        let _ = writeln!(out, "agents {}", agents.names().join(" "));
    }
    for (i, h) in pool.iter().enumerate() {
        let _ = writeln!(out, "hyp {i} {}", pretty_with(h, agents));
    }
    let goal_refs: Vec<String> = script
        .goal_hypotheses
        .iter()
        .map(|h| pool_index(h).to_string())
        .collect();
    let _ = writeln!(
        out,
        "goal {{{}}} {}",
        goal_refs.join(","),
        pretty_with(&script.goal, agents)
    );
    for (k, l) in script.lines.iter().enumerate() {
        let hyp_refs: Vec<String> =
            l.hypotheses.iter().map(|h| pool_index(h).to_string()).collect();
        let mut line = format!(
            "{} | {{{}}} | {} | {}",
            k + 1,
            hyp_refs.join(","),
            pretty_with(&l.formula, agents),
            fmt_justification(&l.justification, pool_index),
        );
        if let Some(note) = &l.note {
            let _ = write!(line, " | {note}");
        }
        let _ = writeln!(out, "{line}");
    }
    out
}

fn parse_indices(spec: &str, line: usize) -> Result<Vec<usize>, FormatError> {
    let inner = spec
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(|| err(line, "expected {indices}"))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .map_err(|_| err(line, format!("bad index `{part}`")))
        })
        .collect()
}

fn parse_cite(tok: &str, pool: &[Formula], line: usize) -> Result<Cite, FormatError> {
    if let Some(rest) = tok.strip_prefix("ref(") {
        let name = rest
            .strip_suffix(')')
            .ok_or_else(|| err(line, "unclosed ref("))?;
        return Ok(Cite::Ref(name.to_string()));
    }
    if let Some(rest) = tok.strip_prefix('l') {
        if let Ok(i) = rest.parse::<usize>() {
            return Ok(Cite::Line(i));
        }
    }
    if let Some(rest) = tok.strip_prefix('h') {
        if let Ok(i) = rest.parse::<usize>() {
            let f = pool
                .get(i)
                .ok_or_else(|| err(line, format!("no hypothesis {i}")))?;
            return Ok(Cite::Hyp(f.clone()));
        }
    }
    Err(err(line, format!("bad citation `{tok}`")))
}

fn parse_justification(
    text: &str,
    pool: &[Formula],
    line: usize,
) -> Result<Justification, FormatError> {
    let mut parts = text.split_whitespace();
    let head = parts.next().ok_or_else(|| err(line, "missing justification"))?;
    let rest: Vec<&str> = parts.collect();
    let one_index = |rest: &[&str]| -> Result<usize, FormatError> {
        rest.first()
            .and_then(|s| s.parse::<usize>().ok())
            .ok_or_else(|| err(line, "expected one line index"))
    };
    Ok(match head {
        "hyp" => Justification::Hyp,
        "axiom" => {
            let name = rest.first().ok_or_else(|| err(line, "expected an axiom name"))?;
            Justification::Axiom(
                AxiomName::from_str(name).map_err(|e| err(line, e))?,
            )
        }
        "iaxnec" => Justification::IaxNec,
        "taut" => {
            let mut cites = Vec::new();
            if let Some(spec) = rest.first() {
                for tok in spec.split(',') {
                    cites.push(parse_cite(tok.trim(), pool, line)?);
                }
            }
            Justification::Taut(cites)
        }
        "mp" => {
            if rest.len() != 2 {
                return Err(err(line, "mp takes two line indices"));
            }
            Justification::Mp(
                rest[0].parse().map_err(|_| err(line, "bad index"))?,
                rest[1].parse().map_err(|_| err(line, "bad index"))?,
            )
        }
        "necx" => Justification::NecNext(one_index(&rest)?),
        "necyw" => Justification::NecWPrev(one_index(&rest)?),
        "necg" => Justification::NecAlways(one_index(&rest)?),
        "nech" => Justification::NecSofar(one_index(&rest)?),
        "boxdot" => Justification::BoxdotLift(one_index(&rest)?),
        "wprevrm" => Justification::WPrevRm(one_index(&rest)?),
        "oncerm" => Justification::OnceRm(one_index(&rest)?),
        "weaken" => Justification::Weaken(one_index(&rest)?),
        "deduce" => {
            if rest.len() != 2 {
                return Err(err(line, "deduce takes a line index and h<k>"));
            }
            let i = rest[0].parse().map_err(|_| err(line, "bad index"))?;
            let Cite::Hyp(h) = parse_cite(rest[1], pool, line)? else {
                return Err(err(line, "deduce needs a hypothesis citation"));
            };
            Justification::Deduce(i, h)
        }
        other => {
            if let Some(inner) = other.strip_prefix("lemma(") {
                let name = inner
                    .strip_suffix(')')
                    .ok_or_else(|| err(line, "unclosed lemma("))?;
                let mut premises = Vec::new();
                for tok in &rest {
                    match parse_cite(tok, pool, line)? {
                        Cite::Line(i) => premises.push(i),
                        _ => return Err(err(line, "lemma premises are line citations")),
                    }
                }
                Justification::Lemma(name.to_string(), premises)
            } else {
                return Err(err(line, format!("unknown justification `{other}`")));
            }
        }
    })
}

/// A parsed script file: the script, the declared agents, and the optional
/// constant-specification reference from the header.
pub struct ScriptFile {
    pub script: ProofScript,
    pub agents: AgentTable,
    pub cs: Option<String>,
}

pub fn parse_jtopf(text: &str) -> Result<(ProofScript, AgentTable), FormatError> {
    parse_jtopf_file(text).map(|f| (f.script, f.agents))
}

pub fn parse_jtopf_file(text: &str) -> Result<ScriptFile, FormatError> {
    let mut lines = content_lines(text);
    let (i0, header) = lines.next().ok_or_else(|| err(0, "empty file"))?;
    if header != "jtopf 1" {
        return Err(err(i0, "expected header `jtopf 1`"));
    }
    let mut name = String::new();
    let mut cs_ref: Option<String> = None;
    let mut agents = AgentTable::open();
    let mut pool: Vec<Formula> = Vec::new();
    let mut goal: Option<(Vec<usize>, Formula)> = None;
    let mut script_lines: Vec<ProofLine> = Vec::new();
    for (i, line) in lines {
        if let Some(rest) = line.strip_prefix("name ") {
            name = rest.trim().to_string();
        } else if let Some(rest) = line.strip_prefix("cs ") {
            cs_ref = Some(rest.trim().to_string());
        } else if let Some(rest) = line.strip_prefix("agents") {
            agents = AgentTable::declared(rest.split_whitespace().collect::<Vec<_>>());
        } else if let Some(rest) = line.strip_prefix("hyp ") {
            let (idx, formula_text) = rest
                .split_once(' ')
                .ok_or_else(|| err(i, "expected `hyp <index> <formula>`"))?;
            let idx: usize = idx.parse().map_err(|_| err(i, "bad hypothesis index"))?;
            if idx != pool.len() {
                return Err(err(i, "hypotheses must be numbered consecutively"));
            }
            let f = parse_formula_with(formula_text, &mut agents)
                .map_err(|source| FormatError::BadFormula { line: i + 1, source })?;
            pool.push(f);
        } else if let Some(rest) = line.strip_prefix("goal ") {
            let (spec, formula_text) = rest
                .split_once(' ')
                .ok_or_else(|| err(i, "expected `goal {indices} <formula>`"))?;
            let indices = parse_indices(spec, i)?;
            let f = parse_formula_with(formula_text, &mut agents)
                .map_err(|source| FormatError::BadFormula { line: i + 1, source })?;
            goal = Some((indices, f));
        } else {
            // numbered line: n | {hyps} | formula | justification [| note].
            // The formula may itself contain `|`, so the tail is resolved
            // from the right: the last chunk that parses as a
            // justification wins, an unparsable trailing chunk is a note.
            let chunks: Vec<&str> = line.split(" | ").map(str::trim).collect();
            if chunks.len() < 4 {
                return Err(err(i, "expected `n | {hyps} | formula | justification`"));
            }
            let n: usize = chunks[0].parse().map_err(|_| err(i, "bad line number"))?;
            if n != script_lines.len() + 1 {
                return Err(err(i, "lines must be numbered consecutively from 1"));
            }
            let hyp_idx = parse_indices(chunks[1], i)?;
            let mut hypotheses = Vec::new();
            for k in hyp_idx {
                hypotheses.push(
                    pool.get(k)
                        .cloned()
                        .ok_or_else(|| err(i, format!("no hypothesis {k}")))?,
                );
            }
            let last = chunks.len() - 1;
            let (formula_end, justification, note) =
                match parse_justification(chunks[last], &pool, i) {
                    Ok(j) => (last, j, None),
                    Err(_) if chunks.len() >= 5 => {
                        let j = parse_justification(chunks[last - 1], &pool, i)?;
                        (last - 1, j, Some(chunks[last].to_string()))
                    }
                    Err(e) => return Err(e),
                };
            let formula_text = chunks[2..formula_end].join(" | ");
            let formula = parse_formula_with(&formula_text, &mut agents)
                .map_err(|source| FormatError::BadFormula { line: i + 1, source })?;
            script_lines.push(ProofLine { hypotheses, formula, justification, note });
        }
    }
    let (goal_idx, goal_formula) =
        goal.ok_or_else(|| err(0, "missing goal declaration"))?;
    let mut goal_hypotheses = Vec::new();
    for k in goal_idx {
        goal_hypotheses.push(
            pool.get(k)
                .cloned()
                .ok_or_else(|| err(0, format!("no hypothesis {k}")))?,
        );
    }
    Ok(ScriptFile {
        script: ProofScript {
            name,
            goal_hypotheses,
            goal: goal_formula,
            lines: script_lines,
        },
        agents,
        cs: cs_ref,
    })
}

// ---------------------------------------------------------------------------
// .jtom: models.
// ---------------------------------------------------------------------------

fn fmt_term_pattern(p: &TermPattern) -> String {
    match p {
        TermPattern::Exact(t) => format!("term({})", pretty_term(t)),
        TermPattern::AnyVar => "var".to_string(),
        TermPattern::AnyConst => "const".to_string(),
        TermPattern::AnyTerm => "any".to_string(),
        TermPattern::AnyTermExcept(ts) => {
            let rendered: Vec<String> = ts.iter().map(pretty_term).collect();
            format!("except({})", rendered.join(";"))
        }
    }
}

fn parse_term_pattern(tok: &str, line: usize) -> Result<TermPattern, FormatError> {
    Ok(match tok {
        "var" => TermPattern::AnyVar,
        "const" => TermPattern::AnyConst,
        "any" => TermPattern::AnyTerm,
        other => {
            if let Some(inner) = other.strip_prefix("term(").and_then(|s| s.strip_suffix(')')) {
                TermPattern::Exact(parse_term(inner).map_err(|e| err(line, e.to_string()))?)
            } else if let Some(inner) =
                other.strip_prefix("except(").and_then(|s| s.strip_suffix(')'))
            {
                let mut ts = Vec::new();
                for part in inner.split(';') {
                    ts.push(parse_term(part).map_err(|e| err(line, e.to_string()))?);
                }
                TermPattern::AnyTermExcept(ts)
            } else {
                return Err(err(line, format!("bad term pattern `{tok}`")));
            }
        }
    })
}

fn fmt_state_pattern(p: &StatePattern, states: &[String]) -> String {
    match p {
        StatePattern::Any => "*".to_string(),
        StatePattern::One(s) => states[*s].clone(),
    }
}

fn fmt_set(set: StateSet, states: &[String]) -> String {
    let all = (0..states.len()).fold(0u64, |acc, i| acc | (1 << i));
    if set == all {
        return "{*}".to_string();
    }
    let names: Vec<&str> = (0..states.len())
        .filter(|i| set & (1 << i) != 0)
        .map(|i| states[i].as_str())
        .collect();
    format!("{{{}}}", names.join(" "))
}

struct StateNames<'a>(&'a [String]);

impl<'a> StateNames<'a> {
    fn index(&self, name: &str, line: usize) -> Result<StateId, FormatError> {
        self.0
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| err(line, format!("unknown state `{name}`")))
    }

    fn parse_set(&self, tok: &str, line: usize) -> Result<StateSet, FormatError> {
        let inner = tok
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| err(line, format!("bad state set `{tok}`")))?;
        if inner.trim() == "*" {
            return Ok((0..self.0.len()).fold(0, |acc, i| acc | (1 << i)));
        }
        let mut set = 0;
        for name in inner.split_whitespace() {
            set |= 1 << self.index(name, line)?;
        }
        Ok(set)
    }

    fn parse_pattern(&self, tok: &str, line: usize) -> Result<StatePattern, FormatError> {
        if tok == "*" {
            Ok(StatePattern::Any)
        } else {
            Ok(StatePattern::One(self.index(tok, line)?))
        }
    }
}

/// Split `a b c = rest` into the leading tokens and the part after `=`.
fn split_rule(line_text: &str, line: usize) -> Result<(Vec<&str>, &str), FormatError> {
    let (head, tail) = line_text
        .split_once('=')
        .ok_or_else(|| err(line, "expected `=` in rule"))?;
    Ok((head.split_whitespace().collect(), tail.trim()))
}

fn agent_slots(tok: &str, n: usize, line: usize) -> Result<Vec<usize>, FormatError> {
    if tok == "*" {
        Ok((0..n).collect())
    } else {
        let i: usize = tok.parse().map_err(|_| err(line, format!("bad agent `{tok}`")))?;
        if i >= n {
            return Err(err(line, format!("agent index {i} out of range")));
        }
        Ok(vec![i])
    }
}

pub fn write_jtom_neighborhood(m: &NeighborhoodModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "jtom 1");
    let _ = writeln!(out, "kind neighborhood");
    let _ = writeln!(out, "name {}", m.name);
    let _ = writeln!(out, "agents {}", m.agents.names().join(" "));
    let _ = writeln!(out, "states {}", m.states.join(" "));
    let nonnormal: Vec<&str> = (0..m.state_count())
        .filter(|&s| !m.is_normal(s))
        .map(|s| m.states[s].as_str())
        .collect();
    if !nonnormal.is_empty() {
        let _ = writeln!(out, "nonnormal {}", nonnormal.join(" "));
    }
    for r in &m.runs {
        let stem: Vec<&str> = r.stem.iter().map(|&s| m.states[s].as_str()).collect();
        let cycle: Vec<&str> = r.cycle.iter().map(|&s| m.states[s].as_str()).collect();
        let _ = writeln!(out, "run stem {} loop {}", stem.join(" "), cycle.join(" "));
    }
    for (s, atoms) in m.valuation.iter().enumerate() {
        if !atoms.is_empty() {
            let names: Vec<&str> = atoms.iter().map(|a| a.as_str()).collect();
            let _ = writeln!(out, "val {} {}", m.states[s], names.join(" "));
        }
    }
    for (s, nnv) in m.nonnormal.iter().enumerate() {
        for f in &nnv.formulas {
            let _ = writeln!(
                out,
                "nval {} formula {}",
                m.states[s],
                pretty_with(f, &m.agents)
            );
        }
        for schema in &nnv.schemas {
            let SchemaPattern::ObligatedFactivityInstances = schema;
            let _ = writeln!(out, "nval {} schema obligated-factivity", m.states[s]);
        }
    }
    let table = |key: &str, tables: &[NeighborhoodTable], out: &mut String| {
        for (agent, t) in tables.iter().enumerate() {
            for rule in &t.rules {
                let family: Vec<String> =
                    rule.family.iter().map(|&f| fmt_set(f, &m.states)).collect();
                let _ = writeln!(
                    out,
                    "{key} {agent} {} {} = {}",
                    fmt_state_pattern(&rule.state, &m.states),
                    fmt_term_pattern(&rule.term),
                    family.join(" ")
                );
            }
        }
    };
    table("nbr", &m.nbr, &mut out);
    table("nbro", &m.nbr_o, &mut out);
    out
}

pub fn write_jtom_fitting(m: &FittingModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "jtom 1");
    let _ = writeln!(out, "kind fitting");
    let _ = writeln!(out, "name {}", m.name);
    let _ = writeln!(out, "agents {}", m.agents.names().join(" "));
    let _ = writeln!(out, "states {}", m.states.join(" "));
    for r in &m.runs {
        let stem: Vec<&str> = r.stem.iter().map(|&s| m.states[s].as_str()).collect();
        let cycle: Vec<&str> = r.cycle.iter().map(|&s| m.states[s].as_str()).collect();
        let _ = writeln!(out, "run stem {} loop {}", stem.join(" "), cycle.join(" "));
    }
    for (s, atoms) in m.valuation.iter().enumerate() {
        if !atoms.is_empty() {
            let names: Vec<&str> = atoms.iter().map(|a| a.as_str()).collect();
            let _ = writeln!(out, "val {} {}", m.states[s], names.join(" "));
        }
    }
    for (agent, rel) in m.rel.iter().enumerate() {
        for (v, &set) in rel.iter().enumerate() {
            for w in 0..m.state_count() {
                if set & (1 << w) != 0 {
                    let _ = writeln!(out, "rel {agent} {} {}", m.states[v], m.states[w]);
                }
            }
        }
    }
    for (agent, rel) in m.rel_o.iter().enumerate() {
        for (v, &set) in rel.iter().enumerate() {
            for w in 0..m.state_count() {
                if set & (1 << w) != 0 {
                    let _ = writeln!(out, "relo {agent} {} {}", m.states[v], m.states[w]);
                }
            }
        }
    }
    let table = |key: &str, tables: &[EvidenceTable], out: &mut String| {
        for (agent, t) in tables.iter().enumerate() {
            for rule in &t.rules {
                let fp = match &rule.formula {
                    FormulaPattern::Exact(f) => format!("formula({})", pretty_with(f, &m.agents)),
                    FormulaPattern::Schema(SchemaPattern::ObligatedFactivityInstances) => {
                        "schema(obligated-factivity)".to_string()
                    }
                    FormulaPattern::Any => "any".to_string(),
                };
                let _ = writeln!(
                    out,
                    "{key} {agent} {} {} {} = {}",
                    fmt_state_pattern(&rule.state, &m.states),
                    fmt_term_pattern(&rule.term),
                    fp,
                    if rule.member { "in" } else { "out" }
                );
            }
        }
    };
    table("ev", &m.evidence, &mut out);
    table("nev", &m.nevidence, &mut out);
    out
}

/// A parsed model of either kind.
pub enum Model {
    Neighborhood(NeighborhoodModel),
    Fitting(FittingModel),
}

impl Model {
    pub fn name(&self) -> &str {
        match self {
            Model::Neighborhood(m) => &m.name,
            Model::Fitting(m) => &m.name,
        }
    }

    pub fn agents(&self) -> &AgentTable {
        match self {
            Model::Neighborhood(m) => &m.agents,
            Model::Fitting(m) => &m.agents,
        }
    }
}

pub fn parse_jtom(text: &str) -> Result<Model, FormatError> {
    let mut lines = content_lines(text);
    let (i0, header) = lines.next().ok_or_else(|| err(0, "empty file"))?;
    if header != "jtom 1" {
        return Err(err(i0, "expected header `jtom 1`"));
    }
    let (ik, kind_line) = lines.next().ok_or_else(|| err(i0, "missing kind"))?;
    let kind = kind_line
        .strip_prefix("kind ")
        .ok_or_else(|| err(ik, "expected `kind neighborhood|fitting`"))?
        .trim()
        .to_string();

    let mut name = String::from("model");
    let mut agents = AgentTable::declared(Vec::<String>::new());
    let mut states: Vec<String> = Vec::new();
    let mut nonnormal_names: Vec<String> = Vec::new();
    let mut runs: Vec<LassoRun> = Vec::new();
    let mut val: Vec<(String, Vec<String>)> = Vec::new();
    let mut nval: Vec<(String, String, usize)> = Vec::new(); // state, payload, line
    let mut nbr_rules: Vec<(usize, StatePattern, TermPattern, Vec<StateSet>)> = Vec::new();
    let mut nbro_rules: Vec<(usize, StatePattern, TermPattern, Vec<StateSet>)> = Vec::new();
    let mut rel_edges: Vec<(usize, StateId, StateId)> = Vec::new();
    let mut relo_edges: Vec<(usize, StateId, StateId)> = Vec::new();
    let mut ev_rules: Vec<(usize, EvidenceRule)> = Vec::new();
    let mut nev_rules: Vec<(usize, EvidenceRule)> = Vec::new();

    for (i, line) in lines {
        let (key, rest) = line.split_once(' ').unwrap_or((line, ""));
        match key {
            "name" => name = rest.trim().to_string(),
            "agents" => {
                agents = AgentTable::declared(rest.split_whitespace().collect::<Vec<_>>())
            }
            "states" => states = rest.split_whitespace().map(|s| s.to_string()).collect(),
            "nonnormal" => {
                nonnormal_names = rest.split_whitespace().map(|s| s.to_string()).collect()
            }
            "run" => {
                let names = StateNames(&states);
                let rest = rest
                    .strip_prefix("stem")
                    .ok_or_else(|| err(i, "expected `run stem ... loop ...`"))?;
                let (stem_part, cycle_part) = rest
                    .split_once("loop")
                    .ok_or_else(|| err(i, "run needs a loop"))?;
                let stem = stem_part
                    .split_whitespace()
                    .map(|s| names.index(s, i))
                    .collect::<Result<Vec<_>, _>>()?;
                let cycle = cycle_part
                    .split_whitespace()
                    .map(|s| names.index(s, i))
                    .collect::<Result<Vec<_>, _>>()?;
                if cycle.is_empty() {
                    return Err(err(i, "the loop must be nonempty"));
                }
                runs.push(LassoRun::new(stem, cycle));
            }
            "val" => {
                let mut toks = rest.split_whitespace();
                let state = toks.next().ok_or_else(|| err(i, "val needs a state"))?;
                val.push((state.to_string(), toks.map(|s| s.to_string()).collect()));
            }
            "nval" => {
                let (state, payload) = rest
                    .split_once(' ')
                    .ok_or_else(|| err(i, "nval needs a state and payload"))?;
                nval.push((state.to_string(), payload.trim().to_string(), i));
            }
            "nbr" | "nbro" => {
                let names = StateNames(&states);
                let (head, tail) = split_rule(rest, i)?;
                if head.len() != 3 {
                    return Err(err(i, "expected `agent state termpat = family`"));
                }
                let state = names.parse_pattern(head[1], i)?;
                let term = parse_term_pattern(head[2], i)?;
                let mut family = Vec::new();
                let mut rest_t = tail;
                while let Some(start) = rest_t.find('{') {
                    let end = rest_t[start..]
                        .find('}')
                        .ok_or_else(|| err(i, "unclosed state set"))?;
                    family.push(names.parse_set(&rest_t[start..start + end + 1], i)?);
                    rest_t = &rest_t[start + end + 1..];
                }
                for agent in agent_slots(head[0], agents.len(), i)? {
                    let entry = (agent, state.clone(), term.clone(), family.clone());
                    if key == "nbr" {
                        nbr_rules.push(entry);
                    } else {
                        nbro_rules.push(entry);
                    }
                }
            }
            "rel" | "relo" => {
                let names = StateNames(&states);
                let toks: Vec<&str> = rest.split_whitespace().collect();
                if toks.len() != 3 {
                    return Err(err(i, "expected `agent state state`"));
                }
                let v = names.index(toks[1], i)?;
                let w = names.index(toks[2], i)?;
                for agent in agent_slots(toks[0], agents.len(), i)? {
                    if key == "rel" {
                        rel_edges.push((agent, v, w));
                    } else {
                        relo_edges.push((agent, v, w));
                    }
                }
            }
            "ev" | "nev" => {
                let names = StateNames(&states);
                let (head, tail) = split_rule(rest, i)?;
                if head.len() < 4 {
                    return Err(err(i, "expected `agent state termpat formulapat = in|out`"));
                }
                let state = names.parse_pattern(head[1], i)?;
                let term = parse_term_pattern(head[2], i)?;
                let fp_text = head[3..].join(" ");
                let formula = if fp_text == "any" {
                    FormulaPattern::Any
                } else if fp_text == "schema(obligated-factivity)" {
                    FormulaPattern::Schema(SchemaPattern::ObligatedFactivityInstances)
                } else if let Some(inner) =
                    fp_text.strip_prefix("formula(").and_then(|s| s.strip_suffix(')'))
                {
                    let mut table = agents.clone();
                    let f = parse_formula_with(inner, &mut table)
                        .map_err(|source| FormatError::BadFormula { line: i + 1, source })?;
                    FormulaPattern::Exact(f.desugar())
                } else {
                    return Err(err(i, format!("bad formula pattern `{fp_text}`")));
                };
                let member = match tail {
                    "in" => true,
                    "out" => false,
                    other => return Err(err(i, format!("expected in|out, got `{other}`"))),
                };
                for agent in agent_slots(head[0], agents.len(), i)? {
                    let rule = EvidenceRule {
                        state: state.clone(),
                        term: term.clone(),
                        formula: formula.clone(),
                        member,
                    };
                    if key == "ev" {
                        ev_rules.push((agent, rule));
                    } else {
                        nev_rules.push((agent, rule));
                    }
                }
            }
            other => return Err(err(i, format!("unknown directive `{other}`"))),
        }
    }

    let nstates = states.len();
    let nagents = agents.len();
    let names = StateNames(&states);
    let mut valuation: Vec<BTreeSet<String>> = vec![BTreeSet::new(); nstates];
    for (state, atoms) in val {
        let idx = names.index(&state, 0)?;
        valuation[idx].extend(atoms);
    }

    if kind == "neighborhood" {
        let mut nonnormal = vec![NonNormalValuation::default(); nstates];
        for (state, payload, i) in nval {
            let idx = names.index(&state, i)?;
            if let Some(rest) = payload.strip_prefix("formula ") {
                let mut table = agents.clone();
                let f = parse_formula_with(rest, &mut table)
                    .map_err(|source| FormatError::BadFormula { line: i + 1, source })?;
                nonnormal[idx].formulas.insert(f.desugar());
            } else if payload.trim() == "schema obligated-factivity" {
                nonnormal[idx]
                    .schemas
                    .push(SchemaPattern::ObligatedFactivityInstances);
            } else {
                return Err(err(i, format!("bad nval payload `{payload}`")));
            }
        }
        let mut nbr = vec![NeighborhoodTable::default(); nagents];
        let mut nbr_o = vec![NeighborhoodTable::default(); nagents];
        for (agent, state, term, family) in nbr_rules {
            nbr[agent].rules.push(NeighborhoodRule { state, term, family });
        }
        for (agent, state, term, family) in nbro_rules {
            nbr_o[agent].rules.push(NeighborhoodRule { state, term, family });
        }
        let model = NeighborhoodModel {
            name,
            states,
            agents,
            runs,
            nbr,
            nbr_o,
            valuation,
            nonnormal,
        };
        // The declared non-normal states must lie outside the run image.
        for n in nonnormal_names {
            let idx = model.state_index(&n).ok_or_else(|| err(0, format!("unknown state `{n}`")))?;
            if model.is_normal(idx) {
                return Err(err(0, format!("state `{n}` is on a run, so it cannot be non-normal")));
            }
        }
        Ok(Model::Neighborhood(model))
    } else if kind == "fitting" {
        let mut rel = vec![vec![0u64; nstates]; nagents];
        let mut rel_o = vec![vec![0u64; nstates]; nagents];
        for (agent, v, w) in rel_edges {
            rel[agent][v] |= 1 << w;
        }
        for (agent, v, w) in relo_edges {
            rel_o[agent][v] |= 1 << w;
        }
        let mut evidence = vec![EvidenceTable::default(); nagents];
        let mut nevidence = vec![EvidenceTable::default(); nagents];
        for (agent, rule) in ev_rules {
            evidence[agent].rules.push(rule);
        }
        for (agent, rule) in nev_rules {
            nevidence[agent].rules.push(rule);
        }
        Ok(Model::Fitting(FittingModel {
            name,
            states,
            agents,
            runs,
            rel,
            rel_o,
            evidence,
            nevidence,
            valuation,
        }))
    } else {
        Err(err(ik, format!("unknown kind `{kind}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::load_corpus;
    use crate::cs::ConstantSpecification;
    use crate::proof::Checker;

    #[test]
    fn jto_round_trip() {
        let text = "agents p e j\n# a comment\nA(winfirst_e <-> O[a]_e pay)\ntime=10\n";
        let file = parse_jto(text).unwrap();
        assert_eq!(file.formulas.len(), 2);
        let written = write_jto(&file.agents, &file.formulas);
        let re = parse_jto(&written).unwrap();
        assert_eq!(re.formulas, file.formulas);
    }

    #[test]
    fn jtopf_round_trip_on_corpus_scripts() {
        for case in load_corpus() {
            for script in case.scripts.iter().chain(case.support.iter()) {
                let text = write_jtopf(script, &case.agents);
                let (parsed, _) = parse_jtopf(&text).unwrap_or_else(|e| {
                    panic!("script {}: {e}\n{text}", script.name);
                });
                assert_eq!(parsed.name, script.name);
                assert_eq!(parsed.lines.len(), script.lines.len());
                assert_eq!(parsed.goal.desugar(), script.goal.desugar());
                for (a, b) in parsed.lines.iter().zip(script.lines.iter()) {
                    assert_eq!(
                        a.formula.desugar(),
                        b.formula.desugar(),
                        "script {}",
                        script.name
                    );
                }
            }
        }
    }

    #[test]
    fn reparsed_scripts_still_check() {
        let corpus = load_corpus();
        let case = corpus.iter().find(|c| c.name == "arguments-v1").unwrap();
        let mut checker = case.build_checker().unwrap();
        for script in &case.scripts {
            let text = write_jtopf(script, &case.agents);
            let (parsed, _) = parse_jtopf(&text).unwrap();
            let report = checker.check(&parsed);
            assert!(report.accepted, "{report}");
        }
    }

    #[test]
    fn jtom_round_trip_on_corpus_models() {
        for case in load_corpus() {
            for (m, uni) in &case.neighborhood_models {
                let text = write_jtom_neighborhood(m);
                let Model::Neighborhood(parsed) = parse_jtom(&text).unwrap() else {
                    panic!("wrong kind");
                };
                assert_eq!(parsed.states, m.states);
                assert_eq!(parsed.runs, m.runs);
                assert_eq!(parsed.nbr, m.nbr);
                assert_eq!(parsed.nbr_o, m.nbr_o);
                assert_eq!(parsed.valuation, m.valuation);
                assert_eq!(parsed.nonnormal, m.nonnormal);
                // Spot validation agreement.
                let a = crate::semantics::validate_neighborhood(m, uni).unwrap();
                let b = crate::semantics::validate_neighborhood(&parsed, uni).unwrap();
                assert_eq!(a.is_valid(), b.is_valid());
            }
        }
    }

    #[test]
    fn jtom_fitting_round_trip() {
        use crate::semantics::EvidenceTable;
        let m = FittingModel {
            name: "demo".into(),
            states: vec!["w0".into(), "w1".into()],
            agents: AgentTable::declared(["i"]),
            runs: vec![LassoRun::new(vec![0], vec![1])],
            rel: vec![vec![0b11, 0b10]],
            rel_o: vec![vec![0b10, 0b10]],
            evidence: vec![EvidenceTable::full()],
            nevidence: vec![EvidenceTable::obligated_factivity_only()],
            valuation: vec![
                ["p".to_string()].into_iter().collect(),
                BTreeSet::new(),
            ],
        };
        let text = write_jtom_fitting(&m);
        let Model::Fitting(parsed) = parse_jtom(&text).unwrap() else {
            panic!("wrong kind");
        };
        assert_eq!(parsed.states, m.states);
        assert_eq!(parsed.rel, m.rel);
        assert_eq!(parsed.rel_o, m.rel_o);
        assert_eq!(parsed.evidence, m.evidence);
        assert_eq!(parsed.nevidence, m.nevidence);
    }

    #[test]
    fn cs_reference_round_trips() {
        let mut b = crate::proof::ScriptBuilder::new("with-cs");
        b.iaxnec(crate::syntax::parse_formula("[$c]_1 (p -> p)").unwrap());
        let script = b.finish();
        let text = write_jtopf_with_cs(&script, &AgentTable::open(), Some("entries.jto"));
        let file = parse_jtopf_file(&text).unwrap();
        assert_eq!(file.cs.as_deref(), Some("entries.jto"));
        assert_eq!(file.script.name, "with-cs");
        let bare = write_jtopf(&script, &AgentTable::open());
        assert_eq!(parse_jtopf_file(&bare).unwrap().cs, None);
    }

    #[test]
    fn malformed_inputs_error() {
        assert!(parse_jtopf("not a header").is_err());
        assert!(parse_jtom("jtom 1\nkind zebra\n").is_err());
        assert!(parse_jtom("jtom 1\nkind neighborhood\nstates w\nbogus x\n").is_err());
    }

    #[test]
    fn exported_scripts_from_empty_checker_reject_without_support() {
        // A script citing an unregistered name must reject, not panic.
        let corpus = load_corpus();
        let case = corpus.iter().find(|c| c.name == "arguments-v1").unwrap();
        let script = case.script("protagoras-v1").unwrap();
        let report = Checker::new(ConstantSpecification::empty()).check_only(script);
        assert!(!report.accepted);
    }
}
