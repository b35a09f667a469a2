//! Recursive-descent parser for definition files.
//!
//! ```text
//! file    = {binding} expr ;  binding = name "=" expr ";" ;
//! expr    = term {"+" term} ;
//! term    = atom | "S" "(" expr ")" | "U" "(" expr ")" | "(" expr ")"
//!         | "bigoplus" ident "{" "R" "->" expr ";" "_" "->" expr "}" | name ;
//! atom    = "C" | "Zero" | "O" "(" arity ")" | "BS" "(" "1" "," arity ")" ;
//! arity   = nat | "prime" "(" ident ")" "+" nat ;
//! ```
//!
//! `#` starts a comment running to the end of the line. Names are expanded
//! at their use site, so the resulting trees contain no references.

use super::{AlgExpr, Arity};
use crate::error::{ParseError, Position};

const KEYWORDS: &[&str] = &["C", "Zero", "O", "BS", "S", "U", "bigoplus", "prime", "R"];

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Nat(u64),
    Sym(&'static str),
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    pos: Position,
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let pos = Position { line, column: col };
        let mut advance = |n: usize, i: &mut usize| {
            *i += n;
            col += n;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => advance(1, &mut i),
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                out.push(Token { tok: Tok::Sym("->"), pos });
                advance(2, &mut i);
            }
            '=' | ';' | '+' | '(' | ')' | '{' | '}' | ',' => {
                let sym = match c {
                    '=' => "=",
                    ';' => ";",
                    '+' => "+",
                    '(' => "(",
                    ')' => ")",
                    '{' => "{",
                    '}' => "}",
                    _ => ",",
                };
                out.push(Token { tok: Tok::Sym(sym), pos });
                advance(1, &mut i);
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                col += i - start;
                let n = text
                    .parse()
                    .map_err(|_| ParseError::Syntax { pos, message: format!("number `{text}` is too large") })?;
                out.push(Token { tok: Tok::Nat(n), pos });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                col += i - start;
                let tok = if text == "_" { Tok::Sym("_") } else { Tok::Ident(text) };
                out.push(Token { tok, pos });
            }
            other => {
                return Err(ParseError::Syntax { pos, message: format!("unexpected character `{other}`") });
            }
        }
    }
    out.push(Token { tok: Tok::Eof, pos: Position { line, column: col } });
    Ok(out)
}

/// Bindings in file order (each fully expanded) and the final expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Definitions {
    pub bindings: Vec<(String, AlgExpr)>,
    pub main: AlgExpr,
}

impl Definitions {
    pub fn get(&self, name: &str) -> Option<&AlgExpr> {
        self.bindings.iter().rev().find(|(n, _)| n == name).map(|(_, e)| e)
    }

    /// Canonical source text: one binding per line, then the final expression.
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        for (name, e) in &self.bindings {
            out.push_str(&format!("{name} = {e};\n"));
        }
        out.push_str(&format!("{}\n", self.main));
        out
    }
}

struct Parser {
    toks: Vec<Token>,
    at: usize,
    bindings: Vec<(String, AlgExpr)>,
    scopes: Vec<String>,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.at]
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.at + 1).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn describe(tok: &Tok) -> String {
        match tok {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Nat(n) => format!("`{n}`"),
            Tok::Sym(s) => format!("`{s}`"),
            Tok::Eof => "end of input".into(),
        }
    }

    fn error<T>(&self, expected: &str) -> Result<T, ParseError> {
        let t = self.peek();
        Err(ParseError::Syntax { pos: t.pos, message: format!("expected {expected}, found {}", Self::describe(&t.tok)) })
    }

    fn expect_sym(&mut self, sym: &'static str) -> Result<(), ParseError> {
        if self.peek().tok == Tok::Sym(sym) {
            self.bump();
            Ok(())
        } else {
            self.error(&format!("`{sym}`"))
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        match &self.peek().tok {
            Tok::Ident(s) if s == kw => {
                self.bump();
                Ok(())
            }
            _ => self.error(&format!("`{kw}`")),
        }
    }

    fn expect_ident(&mut self) -> Result<(String, Position), ParseError> {
        match &self.peek().tok {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                let pos = self.bump().pos;
                Ok((s, pos))
            }
            _ => self.error("an identifier"),
        }
    }

    fn file(&mut self) -> Result<Definitions, ParseError> {
        while matches!(&self.peek().tok, Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()))
            && *self.peek2() == Tok::Sym("=")
        {
            let (name, _) = self.expect_ident()?;
            self.expect_sym("=")?;
            let e = self.expr()?;
            self.expect_sym(";")?;
            self.bindings.push((name, e));
        }
        let main = self.expr()?;
        if self.peek().tok != Tok::Eof {
            return self.error("`+` or end of input");
        }
        Ok(Definitions { bindings: std::mem::take(&mut self.bindings), main })
    }

    fn expr(&mut self) -> Result<AlgExpr, ParseError> {
        let mut e = self.term()?;
        while self.peek().tok == Tok::Sym("+") {
            self.bump();
            let rhs = self.term()?;
            e = AlgExpr::sum(e, rhs);
        }
        Ok(e)
    }

    fn parenthesized(&mut self) -> Result<AlgExpr, ParseError> {
        self.expect_sym("(")?;
        let e = self.expr()?;
        self.expect_sym(")")?;
        Ok(e)
    }

    fn term(&mut self) -> Result<AlgExpr, ParseError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Sym("(") => self.parenthesized(),
            Tok::Ident(s) => match s.as_str() {
                "C" => {
                    self.bump();
                    Ok(AlgExpr::C)
                }
                "Zero" => {
                    self.bump();
                    Ok(AlgExpr::Zero)
                }
                "S" => {
                    self.bump();
                    Ok(AlgExpr::susp(self.parenthesized()?))
                }
                "U" => {
                    self.bump();
                    Ok(AlgExpr::unit(self.parenthesized()?))
                }
                "O" => {
                    self.bump();
                    self.expect_sym("(")?;
                    let k = self.arity("Cuntz algebras need at least 2 generators")?;
                    self.expect_sym(")")?;
                    Ok(AlgExpr::Cuntz(k))
                }
                "BS" => {
                    self.bump();
                    self.expect_sym("(")?;
                    if self.peek().tok != Tok::Nat(1) {
                        return self.error("`1` (only BS(1, n) is supported)");
                    }
                    self.bump();
                    self.expect_sym(",")?;
                    let n = self.arity("BS index must be ≥ 2")?;
                    self.expect_sym(")")?;
                    Ok(AlgExpr::BS(n))
                }
                "bigoplus" => {
                    self.bump();
                    let (index, _) = self.expect_ident()?;
                    self.expect_sym("{")?;
                    self.expect_keyword("R")?;
                    self.expect_sym("->")?;
                    self.scopes.push(index.clone());
                    let in_r = self.expr()?;
                    self.expect_sym(";")?;
                    self.expect_sym("_")?;
                    self.expect_sym("->")?;
                    let otherwise = self.expr()?;
                    self.scopes.pop();
                    self.expect_sym("}")?;
                    Ok(AlgExpr::big_oplus(index, in_r, otherwise))
                }
                "prime" | "R" => self.error("an expression"),
                name => {
                    let found = self.bindings.iter().rev().find(|(n, _)| n == name).map(|(_, e)| e.clone());
                    match found {
                        Some(e) => {
                            self.bump();
                            Ok(e)
                        }
                        None => Err(ParseError::UnboundName { pos: t.pos, name: name.to_string() }),
                    }
                }
            },
            _ => self.error("an expression"),
        }
    }

    fn arity(&mut self, too_small: &str) -> Result<Arity, ParseError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Nat(k) => {
                self.bump();
                if *k < 2 {
                    return Err(ParseError::Arity { pos: t.pos, message: format!("{too_small}, got {k}") });
                }
                Ok(Arity::Literal(*k))
            }
            Tok::Ident(s) if s == "prime" => {
                self.bump();
                self.expect_sym("(")?;
                let (index, pos) = self.expect_ident()?;
                if self.scopes.last() != Some(&index) {
                    return Err(ParseError::IndexEscape { pos, name: index });
                }
                self.expect_sym(")")?;
                self.expect_sym("+")?;
                match self.peek().tok {
                    Tok::Nat(offset) => {
                        self.bump();
                        Ok(Arity::PrimeShift { index, offset })
                    }
                    _ => self.error("a natural number"),
                }
            }
            _ => self.error("a natural number or `prime(...)`"),
        }
    }
}

/// Parses a definitions file.
pub fn parse_definitions(src: &str) -> Result<Definitions, ParseError> {
    let toks = lex(src)?;
    Parser { toks, at: 0, bindings: Vec::new(), scopes: Vec::new() }.file()
}

/// Parses a file and returns its final expression.
pub fn parse(src: &str) -> Result<AlgExpr, ParseError> {
    parse_definitions(src).map(|d| d.main)
}
