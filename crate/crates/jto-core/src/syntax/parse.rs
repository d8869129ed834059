//! Recursive-descent parser for the concrete formula syntax.
//!
//! Modalities: `[t]_i`, `O[t]_i`, `<t>_i`, `P[t]_i`, plus the term-free
//! wildcard forms `O_i` and `P_i`. Temporal prefixes: `X`, `Yw`, `Ys`, `F`,
//! `G`, `P-`, `H`, `A`. Binary: `U`, `S`, `W` (right-assoc), then `&`, `|`,
//! `->` (right-assoc), `<->`. Unary operators bind tightest. Terms: `!t`,
//! `t+s`, `t*s`, `#t`, variables `x`, constants `$c`. `time=m` and
//! `true_m(..)` are accepted as input sugar for the corresponding chains.

use std::fmt;

use thiserror::Error;

use super::{time_literal, true_at, AgentTable, Formula, SortError, Term};

/// Time-literal cap for parsed input; the chains are recursion-deep.
const MAX_TIME_INDEX: usize = 4096;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("{line}:{col}: expected {expected}, found {found}")]
    Syntax {
        line: usize,
        col: usize,
        expected: String,
        found: String,
    },
    #[error("{line}:{col}: {source}")]
    Sort {
        line: usize,
        col: usize,
        #[source]
        source: SortError,
    },
    #[error("{line}:{col}: unknown agent `{name}`")]
    UnknownAgent { line: usize, col: usize, name: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(usize),
    TrueAt(usize),
    True,
    False,
    Time,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Less,    // opens <t>_i
    Greater, // closes it
    Underscore,
    Arrow,
    DArrow,
    Amp,
    Pipe,
    Tilde,
    Bang,
    Plus,
    Star,
    Hash,
    Dollar,
    Equals,
    OpNext,
    OpWPrev,
    OpSPrev,
    OpUntil,
    OpSince,
    OpEventually,
    OpAlways,
    OpOnce,
    OpSofar,
    OpBoxdot,
    OpWeakUntil,
    KwO, // obligation box opener
    KwP, // permission box opener
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "`{s}`"),
            Tok::Int(n) => return write!(f, "`{n}`"),
            Tok::TrueAt(n) => return write!(f, "`true_{n}`"),
            Tok::True => "`true`",
            Tok::False => "`false`",
            Tok::Time => "`time`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::LBracket => "`[`",
            Tok::RBracket => "`]`",
            Tok::Less => "`<`",
            Tok::Greater => "`>`",
            Tok::Underscore => "`_`",
            Tok::Arrow => "`->`",
            Tok::DArrow => "`<->`",
            Tok::Amp => "`&`",
            Tok::Pipe => "`|`",
            Tok::Tilde => "`~`",
            Tok::Bang => "`!`",
            Tok::Plus => "`+`",
            Tok::Star => "`*`",
            Tok::Hash => "`#`",
            Tok::Dollar => "`$`",
            Tok::Equals => "`=`",
            Tok::OpNext => "`X`",
            Tok::OpWPrev => "`Yw`",
            Tok::OpSPrev => "`Ys`",
            Tok::OpUntil => "`U`",
            Tok::OpSince => "`S`",
            Tok::OpEventually => "`F`",
            Tok::OpAlways => "`G`",
            Tok::OpOnce => "`P-`",
            Tok::OpSofar => "`H`",
            Tok::OpBoxdot => "`A`",
            Tok::OpWeakUntil => "`W`",
            Tok::KwO => "`O`",
            Tok::KwP => "`P`",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

type Spanned = (Tok, usize, usize);

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src: src.as_bytes(), pos: 0, line: 1, col: 1 }
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.src.get(self.pos).copied()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn peek2(&self) -> Option<u8> {
        self.src.get(self.pos + 1).copied()
    }

    fn err(&self, expected: &str, found: String) -> ParseError {
        ParseError::Syntax {
            line: self.line,
            col: self.col,
            expected: expected.to_string(),
            found,
        }
    }

    fn tokens(mut self) -> Result<Vec<Spanned>, ParseError> {
        let mut out = Vec::new();
        loop {
            while matches!(self.peek(), Some(b' ' | b'\t' | b'\r' | b'\n')) {
                self.bump();
            }
            if self.peek() == Some(b'%') {
                while !matches!(self.peek(), None | Some(b'\n')) {
                    self.bump();
                }
                continue;
            }
            let (line, col) = (self.line, self.col);
            let Some(c) = self.peek() else {
                out.push((Tok::Eof, line, col));
                return Ok(out);
            };
            let tok = match c {
                b'(' => {
                    self.bump();
                    Tok::LParen
                }
                b')' => {
                    self.bump();
                    Tok::RParen
                }
                b'[' => {
                    self.bump();
                    Tok::LBracket
                }
                b']' => {
                    self.bump();
                    Tok::RBracket
                }
                b'>' => {
                    self.bump();
                    Tok::Greater
                }
                b'_' => {
                    self.bump();
                    Tok::Underscore
                }
                b'&' => {
                    self.bump();
                    Tok::Amp
                }
                b'|' => {
                    self.bump();
                    Tok::Pipe
                }
                b'~' => {
                    self.bump();
                    Tok::Tilde
                }
                b'!' => {
                    self.bump();
                    Tok::Bang
                }
                b'+' => {
                    self.bump();
                    Tok::Plus
                }
                b'*' => {
                    self.bump();
                    Tok::Star
                }
                b'#' => {
                    self.bump();
                    Tok::Hash
                }
                b'$' => {
                    self.bump();
                    Tok::Dollar
                }
                b'=' => {
                    self.bump();
                    Tok::Equals
                }
                b'<' => {
                    if self.peek2() == Some(b'-') {
                        self.bump();
                        self.bump();
                        if self.peek() == Some(b'>') {
                            self.bump();
                            Tok::DArrow
                        } else {
                            return Err(self.err("`<->`", "`<-`".to_string()));
                        }
                    } else {
                        self.bump();
                        Tok::Less
                    }
                }
                b'-' => {
                    self.bump();
                    if self.peek() == Some(b'>') {
                        self.bump();
                        Tok::Arrow
                    } else {
                        return Err(self.err("`->`", "`-`".to_string()));
                    }
                }
                b'0'..=b'9' => {
                    let mut n = 0usize;
                    while let Some(d @ b'0'..=b'9') = self.peek() {
                        n = n * 10 + (d - b'0') as usize;
                        self.bump();
                    }
                    Tok::Int(n)
                }
                b'X' => {
                    self.bump();
                    Tok::OpNext
                }
                b'Y' => {
                    self.bump();
                    match self.peek() {
                        Some(b'w') => {
                            self.bump();
                            Tok::OpWPrev
                        }
                        Some(b's') => {
                            self.bump();
                            Tok::OpSPrev
                        }
                        other => {
                            return Err(self.err(
                                "`Yw` or `Ys`",
                                other.map(|c| (c as char).to_string()).unwrap_or_default(),
                            ))
                        }
                    }
                }
                b'U' => {
                    self.bump();
                    Tok::OpUntil
                }
                b'S' => {
                    self.bump();
                    Tok::OpSince
                }
                b'F' => {
                    self.bump();
                    Tok::OpEventually
                }
                b'G' => {
                    self.bump();
                    Tok::OpAlways
                }
                b'H' => {
                    self.bump();
                    Tok::OpSofar
                }
                b'A' => {
                    self.bump();
                    Tok::OpBoxdot
                }
                b'W' => {
                    self.bump();
                    Tok::OpWeakUntil
                }
                b'O' => {
                    self.bump();
                    Tok::KwO
                }
                b'P' => {
                    self.bump();
                    if self.peek() == Some(b'-') && self.peek2() != Some(b'>') {
                        self.bump();
                        Tok::OpOnce
                    } else {
                        Tok::KwP
                    }
                }
                b'a'..=b'z' => {
                    let start = self.pos;
                    while matches!(self.peek(), Some(b'a'..=b'z' | b'A'..=b'Z' | b'0'..=b'9' | b'_'))
                    {
                        // Stop before `_` when it introduces an agent subscript is
                        // impossible to know here; identifiers absorb underscores,
                        // which is what atom names like `winfirst_e` need.
                        self.bump();
                    }
                    let word = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                    match word {
                        "true" => Tok::True,
                        "false" => Tok::False,
                        "time" => Tok::Time,
                        _ => {
                            if let Some(rest) = word.strip_prefix("true_") {
                                if let Ok(m) = rest.parse::<usize>() {
                                    Tok::TrueAt(m)
                                } else {
                                    Tok::Ident(word.to_string())
                                }
                            } else {
                                Tok::Ident(word.to_string())
                            }
                        }
                    }
                }
                other => {
                    return Err(self.err("a token", format!("`{}`", other as char)));
                }
            };
            out.push((tok, line, col));
        }
    }
}

struct Parser<'t> {
    toks: Vec<Spanned>,
    pos: usize,
    agents: &'t mut AgentTable,
}

impl<'t> Parser<'t> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn here(&self) -> (usize, usize) {
        let (_, l, c) = self.toks[self.pos];
        (l, c)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok) -> Result<(), ParseError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(self.err(&t.to_string()))
        }
    }

    fn err(&self, expected: &str) -> ParseError {
        let (line, col) = self.here();
        ParseError::Syntax {
            line,
            col,
            expected: expected.to_string(),
            found: self.peek().to_string(),
        }
    }

    fn sort_err(&self, e: SortError) -> ParseError {
        let (line, col) = self.here();
        ParseError::Sort { line, col, source: e }
    }

    fn agent(&mut self) -> Result<super::Agent, ParseError> {
        self.expect(Tok::Underscore)?;
        let (line, col) = self.here();
        match self.bump() {
            Tok::Int(n) => self
                .agents
                .resolve_index(n)
                .ok_or(ParseError::UnknownAgent { line, col, name: n.to_string() }),
            Tok::Ident(name) => self
                .agents
                .resolve_name(&name)
                .ok_or(ParseError::UnknownAgent { line, col, name }),
            _ => Err(ParseError::Syntax {
                line,
                col,
                expected: "an agent name or index".to_string(),
                found: self.toks[self.pos - 1].0.to_string(),
            }),
        }
    }

    // term := tsum
    // tsum := tprod (`+` tprod)*
    // tprod := tfactor (`*` tfactor)*
    // tfactor := `!` tfactor | `#` tfactor | ident | `$` ident | `(` term `)`
    fn term(&mut self) -> Result<Term, ParseError> {
        let mut t = self.term_prod()?;
        while *self.peek() == Tok::Plus {
            self.bump();
            let r = self.term_prod()?;
            t = Term::sum(t, r);
        }
        Ok(t)
    }

    fn term_prod(&mut self) -> Result<Term, ParseError> {
        let mut t = self.term_factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            let r = self.term_factor()?;
            t = Term::prod(t, r);
        }
        Ok(t)
    }

    fn term_factor(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                Ok(Term::bang(self.term_factor()?))
            }
            Tok::Hash => {
                self.bump();
                Ok(Term::ddagger(self.term_factor()?))
            }
            Tok::Dollar => {
                self.bump();
                match self.bump() {
                    Tok::Ident(name) => Ok(Term::Const(name)),
                    _ => Err(self.err("a constant name after `$`")),
                }
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Term::Var(name))
            }
            Tok::Underscore => {
                self.bump();
                Ok(Term::wildcard())
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            _ => Err(self.err("a term")),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        self.iff()
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let l = self.imp()?;
        if *self.peek() == Tok::DArrow {
            self.bump();
            let r = self.iff()?;
            Ok(Formula::iff(l, r))
        } else {
            Ok(l)
        }
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let l = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let r = self.imp()?;
            Ok(Formula::implies(l, r))
        } else {
            Ok(l)
        }
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut l = self.and()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            let r = self.and()?;
            l = Formula::or(l, r);
        }
        Ok(l)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut l = self.until_level()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let r = self.until_level()?;
            l = Formula::and(l, r);
        }
        Ok(l)
    }

    fn until_level(&mut self) -> Result<Formula, ParseError> {
        let l = self.unary()?;
        match self.peek() {
            Tok::OpUntil => {
                self.bump();
                let r = self.until_level()?;
                Ok(Formula::until(l, r))
            }
            Tok::OpSince => {
                self.bump();
                let r = self.until_level()?;
                Ok(Formula::since(l, r))
            }
            Tok::OpWeakUntil => {
                self.bump();
                let r = self.until_level()?;
                Ok(Formula::weak_until(l, r))
            }
            _ => Ok(l),
        }
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::OpNext => {
                self.bump();
                Ok(Formula::next(self.unary()?))
            }
            Tok::OpWPrev => {
                self.bump();
                Ok(Formula::weak_prev(self.unary()?))
            }
            Tok::OpSPrev => {
                self.bump();
                Ok(Formula::strong_prev(self.unary()?))
            }
            Tok::OpEventually => {
                self.bump();
                Ok(Formula::eventually(self.unary()?))
            }
            Tok::OpAlways => {
                self.bump();
                Ok(Formula::always(self.unary()?))
            }
            Tok::OpOnce => {
                self.bump();
                Ok(Formula::once(self.unary()?))
            }
            Tok::OpSofar => {
                self.bump();
                Ok(Formula::sofar(self.unary()?))
            }
            Tok::OpBoxdot => {
                self.bump();
                Ok(Formula::boxdot(self.unary()?))
            }
            Tok::LBracket => {
                // [t]_i f
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RBracket)?;
                let i = self.agent()?;
                let f = self.unary()?;
                Formula::jbox(i, t, f).map_err(|e| self.sort_err(e))
            }
            Tok::Less => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::Greater)?;
                let i = self.agent()?;
                let f = self.unary()?;
                Formula::jdiamond(i, t, f).map_err(|e| self.sort_err(e))
            }
            Tok::KwO => {
                self.bump();
                match self.peek() {
                    Tok::LBracket => {
                        self.bump();
                        let t = self.term()?;
                        self.expect(Tok::RBracket)?;
                        let i = self.agent()?;
                        let f = self.unary()?;
                        Formula::obox(i, t, f).map_err(|e| self.sort_err(e))
                    }
                    Tok::Underscore => {
                        // wildcard obligation O_i f
                        let i = self.agent()?;
                        let f = self.unary()?;
                        Formula::obox(i, Term::wildcard(), f).map_err(|e| self.sort_err(e))
                    }
                    _ => Err(self.err("`[` or `_` after `O`")),
                }
            }
            Tok::KwP => {
                self.bump();
                match self.peek() {
                    Tok::LBracket => {
                        self.bump();
                        let t = self.term()?;
                        self.expect(Tok::RBracket)?;
                        let i = self.agent()?;
                        let f = self.unary()?;
                        Formula::opermit(i, t, f).map_err(|e| self.sort_err(e))
                    }
                    Tok::Underscore => {
                        let i = self.agent()?;
                        let f = self.unary()?;
                        Formula::opermit(i, Term::wildcard(), f).map_err(|e| self.sort_err(e))
                    }
                    _ => Err(self.err("`[` or `_` after `P`")),
                }
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                Ok(Formula::Atom(name))
            }
            Tok::True => {
                self.bump();
                Ok(Formula::Top)
            }
            Tok::False => {
                self.bump();
                Ok(Formula::Bottom)
            }
            Tok::Time => {
                self.bump();
                self.expect(Tok::Equals)?;
                match self.bump() {
                    Tok::Int(m) if m <= MAX_TIME_INDEX => Ok(time_literal(m)),
                    Tok::Int(_) => Err(self.err("a time index of at most 4096")),
                    _ => Err(self.err("an instant after `time=`")),
                }
            }
            Tok::TrueAt(m) => {
                if m > MAX_TIME_INDEX {
                    return Err(self.err("a time index of at most 4096"));
                }
                self.bump();
                self.expect(Tok::LParen)?;
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(true_at(m, f))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            _ => Err(self.err("a formula")),
        }
    }
}

/// Parse a formula against an agent table (open tables grow on demand).
pub fn parse_formula_with(text: &str, agents: &mut AgentTable) -> Result<Formula, ParseError> {
    let toks = Lexer::new(text).tokens()?;
    let mut p = Parser { toks, pos: 0, agents };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return Err(p.err("end of input"));
    }
    Ok(f)
}

/// Parse a formula with a fresh open agent table. Agents referenced by index
/// (`_0`, `_1`, ...) keep their index; names are registered in order of
/// appearance.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut agents = AgentTable::open();
    parse_formula_with(text, &mut agents)
}

/// Parse a bare justification term.
pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let toks = Lexer::new(text).tokens()?;
    let mut agents = AgentTable::open();
    let mut p = Parser { toks, pos: 0, agents: &mut agents };
    let t = p.term()?;
    if *p.peek() != Tok::Eof {
        return Err(p.err("end of input"));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::super::{pretty, Agent};
    use super::*;

    #[test]
    fn parses_the_basics() {
        let f = parse_formula("[t]_1 p -> p").unwrap();
        let expected = Formula::implies(
            Formula::jbox(Agent(1), Term::var("t"), Formula::atom("p")).unwrap(),
            Formula::atom("p"),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn rejects_wrong_sorts() {
        let e = parse_formula("O[!x]_1 p").unwrap_err();
        assert!(matches!(e, ParseError::Sort { .. }), "{e:?}");
        assert!(parse_formula("O[#x]_1 p").is_ok());
        assert!(parse_formula("[!x]_1 p").is_ok());
        assert!(parse_formula("[#x]_1 p").is_err());
    }

    #[test]
    fn boxdot_contract_example() {
        let f = parse_formula("A(winfirst_e <-> O[a]_e pay)").unwrap();
        match f {
            Formula::Boxdot(inner) => match *inner {
                Formula::Iff(_, _) => {}
                other => panic!("expected iff, got {other:?}"),
            },
            other => panic!("expected boxdot, got {other:?}"),
        }
    }

    #[test]
    fn precedence() {
        // unary > U > & > | > -> (right) > <->
        let f = parse_formula("p U q & r -> s").unwrap();
        let expected = Formula::implies(
            Formula::and(
                Formula::until(Formula::atom("p"), Formula::atom("q")),
                Formula::atom("r"),
            ),
            Formula::atom("s"),
        );
        assert_eq!(f, expected);
        let g = parse_formula("p -> q -> r").unwrap();
        let expected = Formula::implies(
            Formula::atom("p"),
            Formula::implies(Formula::atom("q"), Formula::atom("r")),
        );
        assert_eq!(g, expected);
        // X binds tighter than U
        let h = parse_formula("X p U q").unwrap();
        assert_eq!(
            h,
            Formula::until(Formula::next(Formula::atom("p")), Formula::atom("q"))
        );
    }

    #[test]
    fn time_and_true_sugar() {
        assert_eq!(parse_formula("time=2").unwrap(), time_literal(2));
        assert_eq!(
            parse_formula("true_10(~pay)").unwrap(),
            true_at(10, Formula::not(Formula::atom("pay")))
        );
    }

    #[test]
    fn wildcard_obligation() {
        let f = parse_formula("O_1 pay").unwrap();
        assert_eq!(
            f,
            Formula::OBox(Agent(1), Term::wildcard(), Box::new(Formula::atom("pay")))
        );
    }

    #[test]
    fn terms_with_operators() {
        let f = parse_formula("[t*s + !u]_0 p").unwrap();
        match f {
            Formula::JBox(_, t, _) => {
                assert_eq!(
                    t,
                    Term::sum(
                        Term::prod(Term::var("t"), Term::var("s")),
                        Term::bang(Term::var("u"))
                    )
                );
            }
            _ => panic!(),
        }
        let g = parse_formula("O[#t * $c]_2 q").unwrap();
        match g {
            Formula::OBox(_, t, _) => {
                assert_eq!(t, Term::prod(Term::ddagger(Term::var("t")), Term::cst("c")));
            }
            _ => panic!(),
        }
    }

    #[test]
    fn named_agents_with_declared_table() {
        let mut agents = AgentTable::declared(["p", "e", "j"]);
        let f = parse_formula_with("O[a]_e pay", &mut agents).unwrap();
        match f {
            Formula::OBox(i, _, _) => assert_eq!(i, Agent(1)),
            _ => panic!(),
        }
        let err = parse_formula_with("O[a]_zz pay", &mut agents).unwrap_err();
        assert!(matches!(err, ParseError::UnknownAgent { .. }));
    }

    #[test]
    fn error_positions() {
        let e = parse_formula("p -> ").unwrap_err();
        match e {
            ParseError::Syntax { line, col, .. } => {
                assert_eq!(line, 1);
                assert!(col >= 5);
            }
            _ => panic!(),
        }
    }

    #[test]
    fn pretty_reparses() {
        for s in [
            "p U (q & ~r)",
            "A(winfirst_e <-> O[a]_e pay)",
            "[t]_1 p -> <t>_1 p",
            "P[a]_0 sue_p <-> Ys(~pay S winfirst_e) & ~pay",
            "G ~O[x]_2 q | H p",
            "p W q",
            "O_1 pay -> P_1 pay",
        ] {
            let f = parse_formula(s).unwrap();
            let printed = pretty(&f);
            let g = parse_formula(&printed).unwrap();
            assert_eq!(f, g, "round-trip failed for {s} -> {printed}");
        }
    }
}
