//! Lexer and recursive-descent parser for `.hof` sources.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use super::ast::{Def, Program, Term};
use super::subst::subst;
use crate::types::Ty;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: syntax error: expected {}, found {found}", expected.join(" or "))]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub expected: Vec<String>,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Backslash,
    Colon,
    Dot,
    Arrow,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Eq,
    Nat(u64),
    Ident(String),
    Kw(&'static str),
    Eof,
}

const KEYWORDS: &[&str] = &["def", "main", "succ", "add", "id", "pr", "iter", "comp", "fst", "snd", "N"];

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Backslash => f.write_str("`\\`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBracket => f.write_str("`[`"),
            Tok::RBracket => f.write_str("`]`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Eq => f.write_str("`=`"),
            Tok::Nat(n) => write!(f, "numeral `{n}`"),
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Kw(k) => write!(f, "`{k}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut col) = (1usize, 1usize);
    let bump = |c: char, line: &mut usize, col: &mut usize| {
        if c == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
    };
    while let Some(&c) = chars.peek() {
        let (l, cl) = (line, col);
        if c.is_whitespace() {
            chars.next();
            bump(c, &mut line, &mut col);
            continue;
        }
        if c == '#' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
                bump(c, &mut line, &mut col);
            }
            continue;
        }
        let single = match c {
            '\\' | 'λ' => Some(Tok::Backslash),
            ':' => Some(Tok::Colon),
            '.' => Some(Tok::Dot),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ',' => Some(Tok::Comma),
            ';' => Some(Tok::Semi),
            '=' => Some(Tok::Eq),
            _ => None,
        };
        if let Some(tok) = single {
            chars.next();
            bump(c, &mut line, &mut col);
            out.push(Spanned { tok, line: l, col: cl });
            continue;
        }
        if c == '-' {
            chars.next();
            bump(c, &mut line, &mut col);
            if chars.peek() == Some(&'>') {
                chars.next();
                bump('>', &mut line, &mut col);
                out.push(Spanned { tok: Tok::Arrow, line: l, col: cl });
                continue;
            }
            return Err(ParseError {
                line: l,
                col: cl,
                expected: vec!["`->`".into()],
                found: "`-`".into(),
            });
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                s.push(d);
                chars.next();
                bump(d, &mut line, &mut col);
            }
            let n = s.parse::<u64>().map_err(|_| ParseError {
                line: l,
                col: cl,
                expected: vec!["numeral that fits in 64 bits".into()],
                found: format!("`{s}`"),
            })?;
            out.push(Spanned { tok: Tok::Nat(n), line: l, col: cl });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if !(d.is_alphanumeric() || d == '_' || d == '\'') {
                    break;
                }
                s.push(d);
                chars.next();
                bump(d, &mut line, &mut col);
            }
            let tok = match KEYWORDS.iter().find(|k| **k == s) {
                Some(k) => Tok::Kw(k),
                None => Tok::Ident(s),
            };
            out.push(Spanned { tok, line: l, col: cl });
            continue;
        }
        return Err(ParseError {
            line: l,
            col: cl,
            expected: vec!["a token".into()],
            found: format!("`{c}`"),
        });
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &[&str]) -> Result<T, ParseError> {
        let sp = &self.toks[self.pos];
        Err(ParseError {
            line: sp.line,
            col: sp.col,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: sp.tok.to_string(),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.next();
            Ok(())
        } else {
            self.error(&[&tok.to_string()])
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(s)
            }
            _ => self.error(&["identifier"]),
        }
    }

    fn nat(&mut self) -> Result<u64, ParseError> {
        match *self.peek() {
            Tok::Nat(n) => {
                self.next();
                Ok(n)
            }
            _ => self.error(&["numeral"]),
        }
    }

    fn ty(&mut self) -> Result<Ty, ParseError> {
        let dom = self.ty_atom()?;
        if *self.peek() == Tok::Arrow {
            self.next();
            let cod = self.ty()?;
            Ok(Ty::arrow(dom, cod))
        } else {
            Ok(dom)
        }
    }

    fn ty_atom(&mut self) -> Result<Ty, ParseError> {
        match self.peek() {
            Tok::Kw("N") => {
                self.next();
                Ok(Ty::Nat)
            }
            Tok::LParen => {
                self.next();
                let first = self.ty()?;
                match self.peek() {
                    Tok::Semi => {
                        self.next();
                        let second = self.ty()?;
                        self.expect(Tok::RParen)?;
                        Ok(Ty::prod(first, second))
                    }
                    Tok::RParen => {
                        self.next();
                        Ok(first)
                    }
                    _ => self.error(&["`;`", "`)`"]),
                }
            }
            _ => self.error(&["`N`", "`(`"]),
        }
    }

    fn term(&mut self) -> Result<Arc<Term>, ParseError> {
        if *self.peek() == Tok::Backslash {
            self.next();
            let x = self.ident()?;
            self.expect(Tok::Colon)?;
            let ty = self.ty()?;
            self.expect(Tok::Dot)?;
            let body = self.term()?;
            return Ok(Term::lam(&x, ty, body));
        }
        let mut acc = self.atom()?;
        while self.starts_atom() {
            let arg = self.atom()?;
            acc = Term::app(acc, arg);
        }
        Ok(acc)
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Tok::Nat(_)
                | Tok::Ident(_)
                | Tok::LParen
                | Tok::Kw("succ" | "add" | "id" | "pr" | "iter" | "comp" | "fst" | "snd")
        )
    }

    fn atom(&mut self) -> Result<Arc<Term>, ParseError> {
        const ATOM: &[&str] = &[
            "numeral", "identifier", "`succ`", "`add`", "`id`", "`pr`", "`iter`", "`comp`", "`fst`",
            "`snd`", "`(`",
        ];
        match self.peek().clone() {
            Tok::Nat(0) => self.error(&["numeral >= 1"]),
            Tok::Nat(n) => {
                self.next();
                Ok(Term::lit(n))
            }
            Tok::Ident(x) => {
                self.next();
                Ok(Term::var(&x))
            }
            Tok::Kw("succ") => {
                self.next();
                Ok(Term::succ())
            }
            Tok::Kw("add") => {
                self.next();
                Ok(Term::add())
            }
            Tok::Kw("id") => {
                self.next();
                self.expect(Tok::LBracket)?;
                let ty = self.ty()?;
                self.expect(Tok::RBracket)?;
                Ok(Term::id_at(ty))
            }
            Tok::Kw("iter") => {
                self.next();
                self.expect(Tok::LBracket)?;
                let ty = self.ty()?;
                self.expect(Tok::RBracket)?;
                Ok(Term::iter(ty))
            }
            Tok::Kw("comp") => {
                self.next();
                self.expect(Tok::LBracket)?;
                let a = self.ty()?;
                self.expect(Tok::Comma)?;
                let b = self.ty()?;
                self.expect(Tok::Comma)?;
                let c = self.ty()?;
                self.expect(Tok::RBracket)?;
                Ok(Term::comp(a, b, c))
            }
            Tok::Kw("pr") => {
                self.next();
                self.expect(Tok::LBracket)?;
                // unlike term numerals, the parameter count may be 0
                let k = self.nat()?;
                self.expect(Tok::RBracket)?;
                self.expect(Tok::LParen)?;
                let h = self.term()?;
                self.expect(Tok::Comma)?;
                let g = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(Term::pr(k as usize, h, g))
            }
            Tok::Kw("fst") => {
                self.next();
                Ok(Term::fst(self.atom()?))
            }
            Tok::Kw("snd") => {
                self.next();
                Ok(Term::snd(self.atom()?))
            }
            Tok::LParen => {
                self.next();
                let first = self.term()?;
                match self.peek() {
                    Tok::Comma => {
                        self.next();
                        let second = self.term()?;
                        self.expect(Tok::RParen)?;
                        Ok(Term::pair(first, second))
                    }
                    Tok::RParen => {
                        self.next();
                        Ok(first)
                    }
                    _ => self.error(&["`,`", "`)`"]),
                }
            }
            _ => self.error(ATOM),
        }
    }

    fn def(&mut self) -> Result<Def, ParseError> {
        self.expect(Tok::Kw("def"))?;
        let name = self.ident()?;
        self.expect(Tok::Colon)?;
        let ty = self.ty()?;
        self.expect(Tok::Eq)?;
        let body = self.term()?;
        Ok(Def { name: name.into(), ty, body })
    }

    fn program(&mut self) -> Result<Program, ParseError> {
        let mut defs = Vec::new();
        while *self.peek() == Tok::Kw("def") {
            defs.push(self.def()?);
        }
        if *self.peek() != Tok::Kw("main") {
            return self.error(&["`def`", "`main`"]);
        }
        self.next();
        self.expect(Tok::Eq)?;
        let main = self.term()?;
        self.expect(Tok::Eof)?;
        Ok(Program { defs, main })
    }
}

/// Parses a single term.
pub fn parse_term(src: &str) -> Result<Arc<Term>, ParseError> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let t = p.term()?;
    p.expect(Tok::Eof)?;
    Ok(t)
}

/// Parses a type expression.
pub fn parse_type(src: &str) -> Result<Ty, ParseError> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let t = p.ty()?;
    p.expect(Tok::Eof)?;
    Ok(t)
}

/// Parses a whole program (`def* main = term`).
pub fn parse_program(src: &str) -> Result<Program, ParseError> {
    Parser { toks: lex(src)?, pos: 0 }.program()
}

/// Parses either a program or, if the source has no `main`, a bare term.
pub fn parse(src: &str) -> Result<Arc<Term>, ParseError> {
    let toks = lex(src)?;
    let is_program = toks.iter().any(|t| matches!(t.tok, Tok::Kw("main" | "def")));
    if is_program {
        Ok(parse_program(src)?.inline())
    } else {
        parse_term(src)
    }
}

impl Program {
    /// Substitutes every definition into `main` (and into later definitions),
    /// producing one closed term.
    pub fn inline(&self) -> Arc<Term> {
        let mut bodies: Vec<(String, Arc<Term>)> = Vec::new();
        for def in &self.defs {
            let mut body = def.body.clone();
            for (name, prev) in bodies.iter().rev() {
                body = subst(&body, name, prev);
            }
            bodies.push((def.name.to_string(), body));
        }
        let mut main = self.main.clone();
        for (name, body) in bodies.iter().rev() {
            main = subst(&main, name, body);
        }
        main
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_annotated_lambda() {
        let t = parse_term(r"\y:N->N. \x:N. y x").unwrap();
        let nn = Ty::arrow(Ty::Nat, Ty::Nat);
        let expected = Term::lam(
            "y",
            nn,
            Term::lam("x", Ty::Nat, Term::app(Term::var("y"), Term::var("x"))),
        );
        assert_eq!(t, expected);
    }

    #[test]
    fn parses_comp_on_pair() {
        let t = parse_term("comp[N,N,N] (succ, succ)").unwrap();
        let expected = Term::app(
            Term::comp(Ty::Nat, Ty::Nat, Ty::Nat),
            Term::pair(Term::succ(), Term::succ()),
        );
        assert_eq!(t, expected);
    }

    #[test]
    fn accepts_ill_typed_terms() {
        assert!(parse_term(r"\x:N. x x").is_ok());
    }

    #[test]
    fn application_is_left_associative() {
        let t = parse_term("add 1 2").unwrap();
        assert_eq!(t.to_string(), "((add 1) 2)");
    }

    #[test]
    fn types_parse() {
        assert_eq!(parse_type("N -> N -> N").unwrap(), Ty::nat_fn(2));
        assert_eq!(
            parse_type("((N -> N) ; N)").unwrap(),
            Ty::prod(Ty::arrow(Ty::Nat, Ty::Nat), Ty::Nat)
        );
    }

    #[test]
    fn errors_report_position_and_expectations() {
        let err = parse_term("succ )").unwrap_err();
        assert_eq!((err.line, err.col), (1, 6));
        assert!(err.expected.contains(&"end of input".to_string()));
        let err = parse_term("\\x N. x").unwrap_err();
        assert_eq!(err.expected, vec!["`:`".to_string()]);
        assert!(parse_term("0").is_err());
    }

    #[test]
    fn comments_and_programs() {
        let src = "# sum\n def f : N -> N = pr[0](1, \\n:N. \\r:N. add r (succ n))\n main = f 5\n";
        let t = parse(src).unwrap();
        assert!(t.to_string().starts_with("(pr[0](1, "));
        assert!(parse("main succ").is_err());
    }

    #[test]
    fn later_defs_see_earlier_ones() {
        let src = "def a : N = 2\ndef b : N = succ a\nmain = add a b";
        assert_eq!(parse(src).unwrap().to_string(), "((add 2) (succ 2))");
    }
}
