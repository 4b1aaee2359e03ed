//! Text format for continued-fraction and scaling specifications.
//!
//! ```text
//! spec    := "b0" "=" rat ";" seqdef ";" seqdef
//! seqdef  := name "(" "n" ")" "=" (alt | "{" piece (";" piece)* "}")
//! piece   := alt "for" ("n" "in" int ".." int | "n" ">=" int)
//! alt     := expr ("|" expr)?          -- even | odd branches
//! expr    := term (("+"|"-") term)*
//! term    := factor (("*"|"/") factor)*
//! factor  := "-" factor | atom ("^" uint)*
//! atom    := int | "n" | "(" expr ")"
//! ```
//!
//! Names are `b0`, `a`, `b` (fractions) and `r` (scaling sequences).
//! Whitespace is insignificant. Expressions are normalized into canonical
//! rational functions of `n` while parsing.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::cfengine::ContinuedFraction;
use crate::equivtrans::ScalingSequence;
use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::polyseq::{Piece, PiecewiseSequence, RationalFunction, Rule};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(&'static str),
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

const SYMBOLS: &[&str] = &["..", ">=", "=", ";", "(", ")", "{", "}", "+", "-", "*", "/", "^", "|"];

fn lex(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let (start_line, start_col) = (line, col);
        if c.is_ascii_digit() {
            let begin = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[begin..i].iter().collect();
            col += i - begin;
            out.push(Token {
                tok: Tok::Int(text.parse().unwrap()),
                line: start_line,
                column: start_col,
            });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let begin = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let text: String = chars[begin..i].iter().collect();
            col += i - begin;
            out.push(Token {
                tok: Tok::Ident(text),
                line: start_line,
                column: start_col,
            });
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        let Some(sym) = SYMBOLS.iter().find(|s| rest.starts_with(**s)) else {
            return Err(Error::Parse {
                line,
                column: col,
                message: format!("unexpected character {c:?}"),
            });
        };
        i += sym.len();
        col += sym.len();
        out.push(Token {
            tok: Tok::Sym(sym),
            line: start_line,
            column: start_col,
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

struct SeqDef {
    name: String,
    line: usize,
    column: usize,
    pieces: Vec<Piece>,
    bare: bool,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(t: &Token, message: impl Into<String>) -> Error {
        Error::Parse {
            line: t.line,
            column: t.column,
            message: message.into(),
        }
    }

    fn describe(t: &Tok) -> String {
        match t {
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Int(i) => format!("'{i}'"),
            Tok::Sym(s) => format!("'{s}'"),
            Tok::Eof => "end of input".into(),
        }
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(&self.peek().tok, Tok::Sym(x) if *x == s)
    }

    fn is_ident(&self, s: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(x) if x == s)
    }

    fn expect_sym(&mut self, s: &str) -> Result<Token> {
        if self.is_sym(s) {
            Ok(self.advance())
        } else {
            let t = self.peek().clone();
            Err(Self::error_at(&t, format!("expected '{s}', found {}", Self::describe(&t.tok))))
        }
    }

    fn expect_ident(&mut self, s: &str) -> Result<Token> {
        if self.is_ident(s) {
            Ok(self.advance())
        } else {
            let t = self.peek().clone();
            Err(Self::error_at(&t, format!("expected '{s}', found {}", Self::describe(&t.tok))))
        }
    }

    fn uint(&mut self) -> Result<BigInt> {
        let t = self.advance();
        match &t.tok {
            Tok::Int(i) => Ok(i.clone()),
            other => Err(Self::error_at(&t, format!("expected integer, found {}", Self::describe(other)))),
        }
    }

    fn int(&mut self) -> Result<i64> {
        let neg = self.is_sym("-");
        if neg {
            self.advance();
        }
        let at = self.peek().clone();
        let v = self.uint()?;
        let v = i64::try_from(if neg { -v } else { v })
            .map_err(|_| Self::error_at(&at, "index out of range"))?;
        Ok(v)
    }

    fn rat(&mut self) -> Result<Rational> {
        let neg = self.is_sym("-");
        if neg {
            self.advance();
        }
        let num = self.uint()?;
        let den = if self.is_sym("/") {
            self.advance();
            let at = self.peek().clone();
            let d = self.uint()?;
            if d.is_zero() {
                return Err(Self::error_at(&at, "zero denominator"));
            }
            d
        } else {
            BigInt::from(1)
        };
        let r = Rational::new(num, den);
        Ok(if neg { -r } else { r })
    }

    fn atom(&mut self) -> Result<RationalFunction> {
        let t = self.advance();
        match &t.tok {
            Tok::Int(i) => Ok(RationalFunction::constant(Rational::from_integer(i.clone()))),
            Tok::Ident(s) if s == "n" => Ok(RationalFunction::var()),
            Tok::Sym("(") => {
                let e = self.expr()?;
                self.expect_sym(")")?;
                Ok(e)
            }
            other => Err(Self::error_at(&t, format!("unexpected {}", Self::describe(other)))),
        }
    }

    fn factor(&mut self) -> Result<RationalFunction> {
        if self.is_sym("-") {
            self.advance();
            return Ok(self.factor()?.neg());
        }
        let mut base = self.atom()?;
        while self.is_sym("^") {
            self.advance();
            let at = self.peek().clone();
            let e = self.uint()?;
            let e = u32::try_from(e).map_err(|_| Self::error_at(&at, "exponent too large"))?;
            base = base.pow(e);
        }
        Ok(base)
    }

    fn term(&mut self) -> Result<RationalFunction> {
        let mut acc = self.factor()?;
        loop {
            if self.is_sym("*") {
                self.advance();
                acc = acc.mul(&self.factor()?);
            } else if self.is_sym("/") {
                let at = self.advance();
                let rhs = self.factor()?;
                acc = acc
                    .div(&rhs)
                    .map_err(|_| Self::error_at(&at, "zero-denominator rule (division by zero)"))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn expr(&mut self) -> Result<RationalFunction> {
        let mut acc = self.term()?;
        loop {
            if self.is_sym("+") {
                self.advance();
                acc = acc.add(&self.term()?);
            } else if self.is_sym("-") {
                self.advance();
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn alt(&mut self) -> Result<Rule> {
        let first = self.expr()?;
        if self.is_sym("|") {
            self.advance();
            let second = self.expr()?;
            Ok(Rule::alternating(first, second))
        } else {
            Ok(Rule::Closed(first))
        }
    }

    fn piece(&mut self) -> Result<Piece> {
        let rule = self.alt()?;
        self.expect_ident("for")?;
        self.expect_ident("n")?;
        if self.is_ident("in") {
            self.advance();
            let lo = self.int()?;
            self.expect_sym("..")?;
            let hi = self.int()?;
            Ok(Piece { lo, hi: Some(hi), rule })
        } else if self.is_sym(">=") {
            self.advance();
            let lo = self.int()?;
            Ok(Piece { lo, hi: None, rule })
        } else {
            let t = self.peek().clone();
            Err(Self::error_at(&t, format!("expected 'in' or '>=', found {}", Self::describe(&t.tok))))
        }
    }

    fn seqdef(&mut self) -> Result<SeqDef> {
        let head = self.advance();
        let Tok::Ident(name) = head.tok.clone() else {
            return Err(Self::error_at(&head, format!("expected a sequence name, found {}", Self::describe(&head.tok))));
        };
        self.expect_sym("(")?;
        self.expect_ident("n")?;
        self.expect_sym(")")?;
        self.expect_sym("=")?;
        let (pieces, bare) = if self.is_sym("{") {
            self.advance();
            let mut pieces = vec![self.piece()?];
            while self.is_sym(";") {
                self.advance();
                if self.is_sym("}") {
                    break;
                }
                pieces.push(self.piece()?);
            }
            self.expect_sym("}")?;
            (pieces, false)
        } else {
            let rule = self.alt()?;
            (vec![Piece { lo: i64::MIN, hi: None, rule }], true)
        };
        Ok(SeqDef {
            name,
            line: head.line,
            column: head.column,
            pieces,
            bare,
        })
    }

    fn statements(&mut self) -> Result<(Option<Rational>, Vec<SeqDef>)> {
        let mut b0 = None;
        let mut defs = Vec::new();
        loop {
            if matches!(self.peek().tok, Tok::Eof) {
                break;
            }
            if self.is_ident("b0") {
                let at = self.advance();
                if b0.is_some() {
                    return Err(Self::error_at(&at, "b0 defined twice"));
                }
                self.expect_sym("=")?;
                b0 = Some(self.rat()?);
            } else {
                defs.push(self.seqdef()?);
            }
            if self.is_sym(";") {
                self.advance();
            } else if !matches!(self.peek().tok, Tok::Eof) {
                let t = self.peek().clone();
                return Err(Self::error_at(&t, format!("expected ';', found {}", Self::describe(&t.tok))));
            }
        }
        Ok((b0, defs))
    }
}

fn build_sequence(def: SeqDef, start: i64) -> Result<PiecewiseSequence> {
    let mut pieces = def.pieces;
    if def.bare {
        pieces[0].lo = start;
    }
    PiecewiseSequence::new(start, pieces).map_err(|e| Error::Parse {
        line: def.line,
        column: def.column,
        message: format!("sequence {}: {e}", def.name),
    })
}

fn parse_statements(src: &str) -> Result<(Option<Rational>, Vec<SeqDef>, Token)> {
    let tokens = lex(src)?;
    let end = tokens.last().unwrap().clone();
    let mut p = Parser { tokens, pos: 0 };
    let (b0, defs) = p.statements()?;
    Ok((b0, defs, end))
}

fn take_def(defs: &mut Vec<SeqDef>, name: &str, end: &Token) -> Result<SeqDef> {
    let idx = defs
        .iter()
        .position(|d| d.name == name)
        .ok_or_else(|| Parser::error_at(end, format!("missing definition of {name}(n)")))?;
    let def = defs.remove(idx);
    if let Some(dup) = defs.iter().find(|d| d.name == name) {
        return Err(Error::Parse {
            line: dup.line,
            column: dup.column,
            message: format!("{name}(n) defined twice"),
        });
    }
    Ok(def)
}

/// Parses a fraction specification; `label` names the result.
pub fn parse_cf_spec_labeled(src: &str, label: &str) -> Result<ContinuedFraction> {
    let (b0, mut defs, end) = parse_statements(src)?;
    let b0 = b0.ok_or_else(|| Parser::error_at(&end, "missing b0"))?;
    let a = build_sequence(take_def(&mut defs, "a", &end)?, 1)?;
    let b = build_sequence(take_def(&mut defs, "b", &end)?, 1)?;
    if let Some(extra) = defs.first() {
        return Err(Error::Parse {
            line: extra.line,
            column: extra.column,
            message: format!("unexpected sequence {}(n) in a fraction spec", extra.name),
        });
    }
    ContinuedFraction::new(b0, a, b, label)
}

pub fn parse_cf_spec(src: &str) -> Result<ContinuedFraction> {
    parse_cf_spec_labeled(src, "spec")
}

/// Parses `r(n) = …` into a scaling sequence starting at 0.
pub fn parse_scaling_spec(src: &str) -> Result<ScalingSequence> {
    let (b0, mut defs, end) = parse_statements(src)?;
    if b0.is_some() {
        return Err(Parser::error_at(&end, "b0 is not allowed in a scaling spec"));
    }
    let r = build_sequence(take_def(&mut defs, "r", &end)?, 0)?;
    if let Some(extra) = defs.first() {
        return Err(Error::Parse {
            line: extra.line,
            column: extra.column,
            message: format!("unexpected sequence {}(n) in a scaling spec", extra.name),
        });
    }
    ScalingSequence::new(r)
}

/// Prints a sequence definition body.
pub fn sequence_to_dsl(seq: &PiecewiseSequence) -> String {
    let pieces = seq.pieces();
    if pieces.len() == 1 && pieces[0].lo == seq.start() {
        return pieces[0].rule.to_string();
    }
    let body: Vec<String> = pieces
        .iter()
        .map(|p| match p.hi {
            Some(hi) => format!("{} for n in {}..{}", p.rule, p.lo, hi),
            None => format!("{} for n >= {}", p.rule, p.lo),
        })
        .collect();
    format!("{{ {} }}", body.join("; "))
}

pub fn cf_to_dsl(cf: &ContinuedFraction) -> String {
    format!(
        "b0 = {}; a(n) = {}; b(n) = {}",
        cf.b0(),
        sequence_to_dsl(cf.a()),
        sequence_to_dsl(cf.b())
    )
}

pub fn scaling_to_dsl(r: &ScalingSequence) -> String {
    format!("r(n) = {}", sequence_to_dsl(r.sequence()))
}
