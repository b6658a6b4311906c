//! The formula language over a graph: dependence atoms `A |> B`,
//! `false`, and right-associative implication `->`.
//!
//! Concrete syntax:
//!
//! ```text
//! formula   := implicand ("->" formula)?
//! implicand := "false" | atom | "(" formula ")"
//! atom      := vlist "|>" vlist
//! vlist     := "." | name ("," name)*
//! ```
//!
//! `.` denotes the empty vertex list; whitespace is insignificant.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// A dependence atom `lhs |> rhs`. Member sets are normalized bitmasks,
/// so equality is structural.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub lhs: VertexSet,
    pub rhs: VertexSet,
}

impl Atom {
    pub fn new(lhs: VertexSet, rhs: VertexSet) -> Self {
        Atom { lhs, rhs }
    }

    pub fn render(&self, g: &Graph) -> String {
        format!("{} |> {}", g.render_set(self.lhs), g.render_set(self.rhs))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Falsum,
    Dep(Atom),
    Implies(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn implies(lhs: Formula, rhs: Formula) -> Formula {
        Formula::Implies(Box::new(lhs), Box::new(rhs))
    }

    /// All `Dep` leaves, deduplicated, in ascending order.
    pub fn atoms(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_atoms(&self, out: &mut Vec<Atom>) {
        match self {
            Formula::Falsum => {}
            Formula::Dep(a) => out.push(*a),
            Formula::Implies(p, q) => {
                p.collect_atoms(out);
                q.collect_atoms(out);
            }
        }
    }

    /// Classical evaluation with `false ↦ false` and each atom looked up
    /// in `truth`. Errors if an atom of the formula has no assignment.
    pub fn eval_prop(&self, g: &Graph, truth: &HashMap<Atom, bool>) -> Result<bool> {
        match self {
            Formula::Falsum => Ok(false),
            Formula::Dep(a) => truth
                .get(a)
                .copied()
                .ok_or_else(|| Error::IncompleteAssignment(a.render(g))),
            Formula::Implies(p, q) => {
                Ok(!p.eval_prop(g, truth)? || q.eval_prop(g, truth)?)
            }
        }
    }

    /// Canonical text; `parse(render(f))` is structurally `f`.
    pub fn render(&self, g: &Graph) -> String {
        match self {
            Formula::Falsum => "false".to_string(),
            Formula::Dep(a) => a.render(g),
            Formula::Implies(p, q) => {
                let lhs = match **p {
                    Formula::Implies(..) => format!("({})", p.render(g)),
                    _ => p.render(g),
                };
                format!("{} -> {}", lhs, q.render(g))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Name(String),
    False,
    Triangle, // |>
    Arrow,    // ->
    Comma,
    Dot,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            ',' => {
                out.push((i, Token::Comma));
                i += 1;
            }
            '.' => {
                out.push((i, Token::Dot));
                i += 1;
            }
            '(' => {
                out.push((i, Token::LParen));
                i += 1;
            }
            ')' => {
                out.push((i, Token::RParen));
                i += 1;
            }
            '|' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    out.push((i, Token::Triangle));
                    i += 2;
                } else {
                    return Err(Error::Syntax {
                        pos: i,
                        msg: "expected `|>`".to_string(),
                    });
                }
            }
            '-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    out.push((i, Token::Arrow));
                    i += 2;
                } else {
                    return Err(Error::Syntax {
                        pos: i,
                        msg: "expected `->`".to_string(),
                    });
                }
            }
            _ if c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_' => {
                let start = i;
                while i < bytes.len() {
                    let c = bytes[i] as char;
                    if c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_' {
                        i += 1;
                    } else {
                        break;
                    }
                }
                let word = &text[start..i];
                if word == "false" {
                    out.push((start, Token::False));
                } else {
                    out.push((start, Token::Name(word.to_string())));
                }
            }
            _ => {
                return Err(Error::Syntax {
                    pos: i,
                    msg: format!("unexpected character `{}`", c),
                })
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    graph: &'a Graph,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.tokens.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Token, what: &str) -> Result<()> {
        let pos = self.here();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            _ => Err(Error::Syntax {
                pos,
                msg: format!("expected {}", what),
            }),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let lhs = self.implicand()?;
        if self.peek() == Some(&Token::Arrow) {
            self.bump();
            let rhs = self.formula()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn implicand(&mut self) -> Result<Formula> {
        match self.peek() {
            Some(Token::False) => {
                self.bump();
                Ok(Formula::Falsum)
            }
            Some(Token::LParen) => {
                self.bump();
                let f = self.formula()?;
                self.expect(Token::RParen, "`)`")?;
                Ok(f)
            }
            _ => {
                let lhs = self.vlist()?;
                self.expect(Token::Triangle, "`|>`")?;
                let rhs = self.vlist()?;
                Ok(Formula::Dep(Atom::new(lhs, rhs)))
            }
        }
    }

    fn vlist(&mut self) -> Result<VertexSet> {
        if self.peek() == Some(&Token::Dot) {
            self.bump();
            return Ok(VertexSet::EMPTY);
        }
        let mut set = VertexSet::EMPTY;
        loop {
            let pos = self.here();
            match self.bump() {
                Some(Token::Name(name)) => {
                    let idx = self
                        .graph
                        .index_of(&name)
                        .map_err(|_| Error::UnknownVertex { pos, name })?;
                    set.insert(idx);
                }
                _ => {
                    return Err(Error::Syntax {
                        pos,
                        msg: "expected a vertex name or `.`".to_string(),
                    })
                }
            }
            if self.peek() == Some(&Token::Comma) {
                self.bump();
            } else {
                return Ok(set);
            }
        }
    }
}

/// Parses a formula over `g`, reporting syntax errors with byte positions
/// and unknown vertices by name.
pub fn parse(text: &str, g: &Graph) -> Result<Formula> {
    let tokens = tokenize(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        graph: g,
        end: text.len(),
    };
    let f = p.formula()?;
    if p.pos != p.tokens.len() {
        return Err(Error::Syntax {
            pos: p.here(),
            msg: "trailing input after formula".to_string(),
        });
    }
    Ok(f)
}

/// Parses a bare dependence atom (`A |> B`).
pub fn parse_atom(text: &str, g: &Graph) -> Result<Atom> {
    match parse(text, g)? {
        Formula::Dep(a) => Ok(a),
        _ => Err(Error::Syntax {
            pos: 0,
            msg: "expected a bare atom `A |> B`".to_string(),
        }),
    }
}
