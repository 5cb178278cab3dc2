//! Formulas of the epistemic language with agency modalities, their text
//! syntax and a minimal-parenthesis printer.
//!
//! ```text
//! formula     := implication
//! implication := disjunction ( "->" implication )?
//! disjunction := conjunction ( "|" conjunction )*
//! conjunction := unary ( "&" unary )*
//! unary       := "~" unary | "B[" ident "]" unary
//!              | "C[" ident "," ident "]" | "P[" ident "," ident "]"
//!              | "(" formula ")" | ident
//! ```
//!
//! `B`, `C` and `P` are only keywords when immediately followed by `[`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::ids::{AgentId, PropId};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Prop(PropId),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    /// `B[i] φ`: φ holds at every i-successor.
    Believes(AgentId, Box<Formula>),
    /// `C[i,j]`: every i-successor has a j-successor.
    CertainAgent(AgentId, AgentId),
    /// `P[i,j]`: some i-successor has a j-successor.
    PossibleAgent(AgentId, AgentId),
}

impl Formula {
    pub fn prop(name: &str) -> Result<Self, crate::IdError> {
        Ok(Formula::Prop(PropId::new(name)?))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn believes(agent: AgentId, f: Formula) -> Self {
        Formula::Believes(agent, Box::new(f))
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Prop(_) | Formula::CertainAgent(..) | Formula::PossibleAgent(..) => 0,
            Formula::Not(f) | Formula::Believes(_, f) => 1 + f.depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                1 + a.depth().max(b.depth())
            }
        }
    }

    /// Agents and propositions mentioned anywhere in the formula.
    pub fn symbols(&self) -> Symbols {
        let mut out = Symbols::default();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut Symbols) {
        match self {
            Formula::Prop(p) => {
                out.props.insert(p.clone());
            }
            Formula::Not(f) => f.collect_symbols(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_symbols(out);
                b.collect_symbols(out);
            }
            Formula::Believes(i, f) => {
                out.agents.insert(i.clone());
                f.collect_symbols(out);
            }
            Formula::CertainAgent(i, j) | Formula::PossibleAgent(i, j) => {
                out.agents.insert(i.clone());
                out.agents.insert(j.clone());
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Implies(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            _ => 4,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Symbols {
    pub agents: BTreeSet<AgentId>,
    pub props: BTreeSet<PropId>,
}

pub fn formula_symbols(f: &Formula) -> Symbols {
    f.symbols()
}

struct Child<'a>(&'a Formula, u8);

impl fmt::Display for Child<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.precedence() < self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Prop(p) => write!(f, "{p}"),
            Formula::Not(a) => write!(f, "~{}", Child(a, 4)),
            // `|` and `&` chains associate to the left, `->` to the right.
            Formula::And(a, b) => write!(f, "{} & {}", Child(a, 3), Child(b, 4)),
            Formula::Or(a, b) => write!(f, "{} | {}", Child(a, 2), Child(b, 3)),
            Formula::Implies(a, b) => write!(f, "{} -> {}", Child(a, 2), Child(b, 1)),
            Formula::Believes(i, a) => write!(f, "B[{i}] {}", Child(a, 4)),
            Formula::CertainAgent(i, j) => write!(f, "C[{i},{j}]"),
            Formula::PossibleAgent(i, j) => write!(f, "P[{i},{j}]"),
        }
    }
}

/// Canonical text of `f`; `parse(&print(f)) == Ok(f)`.
pub fn print(f: &Formula) -> String {
    f.to_string()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected character {ch:?} at position {pos}")]
    Lexical { pos: usize, ch: char },
    #[error("syntax error at position {pos}: expected {expected}, found {found}")]
    Syntax {
        pos: usize,
        expected: String,
        found: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    /// `B`, `C` or `P` directly followed by `[`; the bracket is consumed.
    Modal(char),
    Not,
    And,
    Or,
    Arrow,
    LParen,
    RParen,
    RBracket,
    Comma,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Modal(c) => write!(f, "`{c}[`"),
            Tok::Not => f.write_str("`~`"),
            Tok::And => f.write_str("`&`"),
            Tok::Or => f.write_str("`|`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::RBracket => f.write_str("`]`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some((pos, ch)) = chars.next() {
        let tok = match ch {
            c if c.is_whitespace() => continue,
            '~' => Tok::Not,
            '&' => Tok::And,
            '|' => Tok::Or,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            '-' => match chars.next() {
                Some((_, '>')) => Tok::Arrow,
                _ => return Err(ParseError::Lexical { pos, ch }),
            },
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut end = pos + c.len_utf8();
                while let Some(&(p, c)) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        end = p + c.len_utf8();
                        chars.next();
                    } else {
                        break;
                    }
                }
                let word = &text[pos..end];
                match (word, chars.peek()) {
                    ("B" | "C" | "P", Some((_, '['))) => {
                        chars.next();
                        Tok::Modal(word.chars().next().unwrap())
                    }
                    _ => Tok::Ident(word.to_string()),
                }
            }
            c => return Err(ParseError::Lexical { pos, ch: c }),
        };
        out.push((pos, tok));
    }
    out.push((text.len(), Tok::Eof));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn bump(&mut self) -> (usize, Tok) {
        let t = self.toks[self.at].clone();
        if t.1 != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> ParseError {
        let (pos, tok) = &self.toks[self.at];
        ParseError::Syntax {
            pos: *pos,
            expected: expected.to_string(),
            found: tok.to_string(),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&tok.to_string()))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                Ok(name)
            }
            _ => Err(self.error("identifier")),
        }
    }

    fn agent(&mut self) -> Result<AgentId, ParseError> {
        // The lexer only produces valid tokens.
        self.ident()
            .map(|n| AgentId::new(n).expect("lexed identifier"))
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            lhs = Formula::or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Modal('B') => {
                self.bump();
                let i = self.agent()?;
                self.expect(Tok::RBracket)?;
                Ok(Formula::believes(i, self.unary()?))
            }
            Tok::Modal(kind) => {
                self.bump();
                let i = self.agent()?;
                self.expect(Tok::Comma)?;
                let j = self.agent()?;
                self.expect(Tok::RBracket)?;
                Ok(if kind == 'C' {
                    Formula::CertainAgent(i, j)
                } else {
                    Formula::PossibleAgent(i, j)
                })
            }
            Tok::LParen => {
                self.bump();
                let f = self.implication()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Formula::Prop(PropId::new(name).expect("lexed identifier")))
            }
            _ => Err(self.error("formula")),
        }
    }
}

pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
    };
    let f = p.implication()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error("operator or end of input"));
    }
    Ok(f)
}

impl FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ag(s: &str) -> AgentId {
        AgentId::new(s).unwrap()
    }

    fn p(s: &str) -> Formula {
        Formula::prop(s).unwrap()
    }

    #[test]
    fn parses_ontological_formulas() {
        assert_eq!(
            parse("~P[m,g]").unwrap(),
            Formula::not(Formula::PossibleAgent(ag("m"), ag("g")))
        );
        assert_eq!(
            parse("B[m] B[f] C[f,g]").unwrap(),
            Formula::believes(
                ag("m"),
                Formula::believes(ag("f"), Formula::CertainAgent(ag("f"), ag("g")))
            )
        );
        assert_eq!(
            parse("p & ~p").unwrap(),
            Formula::and(p("p"), Formula::not(p("p")))
        );
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(
            parse("a & b | c").unwrap(),
            Formula::or(Formula::and(p("a"), p("b")), p("c"))
        );
        assert_eq!(
            parse("~B[i] p & q").unwrap(),
            Formula::and(Formula::not(Formula::believes(ag("i"), p("p"))), p("q"))
        );
        assert_eq!(
            parse("p -> q -> r").unwrap(),
            Formula::implies(p("p"), Formula::implies(p("q"), p("r")))
        );
        assert_eq!(
            parse("a | b | c").unwrap(),
            Formula::or(Formula::or(p("a"), p("b")), p("c"))
        );
        assert_eq!(parse(" ( p ) ").unwrap(), p("p"));
    }

    #[test]
    fn keywords_need_a_bracket() {
        assert_eq!(parse("B & C").unwrap(), Formula::and(p("B"), p("C")));
        assert_eq!(parse("B[B] P").unwrap(), Formula::believes(ag("B"), p("P")));
        assert!(parse("B [m] p").is_err());
    }

    #[test]
    fn prints_minimal_parentheses() {
        assert_eq!(
            print(&Formula::not(Formula::PossibleAgent(ag("m"), ag("g")))),
            "~P[m,g]"
        );
        assert_eq!(
            print(&Formula::implies(p("p"), Formula::implies(p("q"), p("r")))),
            "p -> q -> r"
        );
        assert_eq!(
            print(&Formula::and(Formula::or(p("p"), p("q")), p("r"))),
            "(p | q) & r"
        );
        assert_eq!(
            print(&Formula::implies(Formula::implies(p("p"), p("q")), p("r"))),
            "(p -> q) -> r"
        );
        assert_eq!(
            print(&Formula::or(p("a"), Formula::or(p("b"), p("c")))),
            "a | (b | c)"
        );
        assert_eq!(
            print(&Formula::believes(ag("i"), Formula::and(p("a"), p("b")))),
            "B[i] (a & b)"
        );
    }

    #[test]
    fn reports_error_positions() {
        assert_eq!(parse("p # q"), Err(ParseError::Lexical { pos: 2, ch: '#' }));
        assert_eq!(parse("p - q"), Err(ParseError::Lexical { pos: 2, ch: '-' }));
        match parse("p & ") {
            Err(ParseError::Syntax { pos, found, .. }) => {
                assert_eq!(pos, 4);
                assert_eq!(found, "end of input");
            }
            other => panic!("unexpected {other:?}"),
        }
        match parse("C[m g]") {
            Err(ParseError::Syntax { pos, expected, .. }) => {
                assert_eq!(pos, 4);
                assert_eq!(expected, "`,`");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse("(p"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse("p q"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse(""), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn collects_symbols() {
        let s = parse("B[m] B[f] C[f,g]").unwrap().symbols();
        assert_eq!(s.agents, [ag("m"), ag("f"), ag("g")].into_iter().collect());
        assert!(s.props.is_empty());

        let s = parse("p & ~p").unwrap().symbols();
        assert!(s.agents.is_empty());
        assert_eq!(s.props, [PropId::new("p").unwrap()].into_iter().collect());

        let s = formula_symbols(&parse("~B[m] p").unwrap());
        assert_eq!(s.agents, [ag("m")].into_iter().collect());
        assert_eq!(s.props.len(), 1);
    }
}
