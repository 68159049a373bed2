//! Finitely presented groups and the text format for them.
//!
//! A presentation file looks like
//!
//! ```text
//! # genus-two surface group
//! < a, b, c, d | [a,b] * [c,d] >
//! ```
//!
//! Relator expressions are built from generator names, parenthesized
//! subexpressions and commutators `[x,y] = x^-1 y^-1 x y`; any factor may
//! carry an integer exponent (negative allowed, zero expands to nothing),
//! and `*` between factors is optional. `#` starts a line comment. One
//! presentation per file. All relators are stored freely and cyclically
//! reduced; relators that reduce to the empty word are dropped.

use crate::word::Word;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// A finitely presented group: named generators plus reduced relators.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    generator_names: Vec<String>,
    relators: Vec<Word>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PresentationError {
    #[error("generator names must be unique and nonempty (offender: {0:?})")]
    BadGeneratorName(String),
    #[error("relator uses generator index {index} but there are only {count} generators")]
    LetterOutOfRange { index: usize, count: usize },
}

impl Presentation {
    /// Validates names and words, reduces every relator freely and
    /// cyclically, and drops relators that become empty.
    pub fn new(
        generator_names: Vec<String>,
        relators: Vec<Word>,
    ) -> Result<Self, PresentationError> {
        for (i, name) in generator_names.iter().enumerate() {
            if name.is_empty() || generator_names[..i].contains(name) {
                return Err(PresentationError::BadGeneratorName(name.clone()));
            }
        }
        let count = generator_names.len();
        let mut reduced = Vec::new();
        for r in relators {
            if r.max_index() > count {
                return Err(PresentationError::LetterOutOfRange { index: r.max_index(), count });
            }
            let r = r.cyclically_reduced();
            if !r.is_empty() {
                reduced.push(r);
            }
        }
        Ok(Presentation { generator_names, relators: reduced })
    }

    pub fn generator_count(&self) -> usize {
        self.generator_names.len()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// Checks that a word only uses this presentation's generators.
    pub fn validate_word(&self, w: &Word) -> Result<(), PresentationError> {
        if w.max_index() > self.generator_count() {
            return Err(PresentationError::LetterOutOfRange {
                index: w.max_index(),
                count: self.generator_count(),
            });
        }
        Ok(())
    }

    /// Canonical text form; `parse_presentation` accepts it unchanged.
    pub fn to_dsl(&self) -> String {
        let mut s = String::from("< ");
        s.push_str(&self.generator_names.join(", "));
        s.push_str(" |");
        for (i, r) in self.relators.iter().enumerate() {
            s.push_str(if i == 0 { " " } else { ", " });
            s.push_str(&self.word_to_string(r));
        }
        s.push_str(" >");
        s
    }

    /// Renders a word as `a*b^-1*a`, or `1` for the empty word.
    pub fn word_to_string(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        w.letters()
            .iter()
            .map(|&l| {
                let name = &self.generator_names[(l.unsigned_abs() as usize) - 1];
                if l > 0 { name.clone() } else { format!("{name}^-1") }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl fmt::Debug for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Presentation({})", self.to_dsl())
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_dsl())
    }
}

/// A parse failure, always carrying the 1-based source position.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("parse error at line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// Parses the presentation DSL described in the module docs.
pub fn parse_presentation(text: &str) -> Result<Presentation, ParseError> {
    Parser::new(text)?.parse()
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    Langle,
    Rangle,
    Lparen,
    Rparen,
    Lbracket,
    Rbracket,
    Comma,
    Bar,
    Star,
    Caret,
    Eof,
}

struct Parser {
    tokens: Vec<(Tok, usize, usize)>,
    pos: usize,
    generators: Vec<String>,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, column, message: message.into() }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize, usize)>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tl, tc) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        match c {
            '#' => {
                while let Some(&c) = chars.peek() {
                    bump(&mut chars);
                    if c == '\n' {
                        break;
                    }
                }
            }
            c if c.is_whitespace() => {
                bump(&mut chars);
            }
            '<' => {
                bump(&mut chars);
                out.push((Tok::Langle, tl, tc));
            }
            '>' => {
                bump(&mut chars);
                out.push((Tok::Rangle, tl, tc));
            }
            '(' => {
                bump(&mut chars);
                out.push((Tok::Lparen, tl, tc));
            }
            ')' => {
                bump(&mut chars);
                out.push((Tok::Rparen, tl, tc));
            }
            '[' => {
                bump(&mut chars);
                out.push((Tok::Lbracket, tl, tc));
            }
            ']' => {
                bump(&mut chars);
                out.push((Tok::Rbracket, tl, tc));
            }
            ',' => {
                bump(&mut chars);
                out.push((Tok::Comma, tl, tc));
            }
            '|' => {
                bump(&mut chars);
                out.push((Tok::Bar, tl, tc));
            }
            '*' => {
                bump(&mut chars);
                out.push((Tok::Star, tl, tc));
            }
            '^' => {
                bump(&mut chars);
                out.push((Tok::Caret, tl, tc));
            }
            c if c.is_ascii_digit() || c == '-' => {
                let mut s = String::new();
                s.push(bump(&mut chars));
                while chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                    s.push(bump(&mut chars));
                }
                let n: i64 = s
                    .parse()
                    .map_err(|_| err(tl, tc, format!("invalid integer {s:?}")))?;
                out.push((Tok::Int(n), tl, tc));
            }
            c if c.is_ascii_alphabetic() => {
                let mut s = String::new();
                s.push(bump(&mut chars));
                while chars
                    .peek()
                    .is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_')
                {
                    s.push(bump(&mut chars));
                }
                out.push((Tok::Ident(s), tl, tc));
            }
            c => return Err(err(tl, tc, format!("unexpected character {c:?}"))),
        }
    }
    out.push((Tok::Eof, line, col));
    Ok(out)
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser { tokens: lex(text)?, pos: 0, generators: Vec::new() })
    }

    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].0
    }

    fn here(&self) -> (usize, usize) {
        (self.tokens[self.pos].1, self.tokens[self.pos].2)
    }

    fn advance(&mut self) -> Tok {
        let t = self.tokens[self.pos].0.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == t {
            self.advance();
            Ok(())
        } else {
            let (l, c) = self.here();
            Err(err(l, c, format!("expected {what}, found {:?}", self.peek())))
        }
    }

    fn parse(&mut self) -> Result<Presentation, ParseError> {
        self.expect(Tok::Langle, "'<'")?;
        loop {
            let (l, c) = self.here();
            match self.advance() {
                Tok::Ident(name) => {
                    if self.generators.contains(&name) {
                        return Err(err(l, c, format!("duplicate generator {name:?}")));
                    }
                    self.generators.push(name);
                }
                _ => return Err(err(l, c, "expected generator name")),
            }
            match self.peek() {
                Tok::Comma => {
                    self.advance();
                }
                _ => break,
            }
        }
        self.expect(Tok::Bar, "'|'")?;
        let mut relators = Vec::new();
        if *self.peek() != Tok::Rangle {
            loop {
                relators.push(self.word_expr()?);
                match self.peek() {
                    Tok::Comma => {
                        self.advance();
                    }
                    _ => break,
                }
            }
        }
        self.expect(Tok::Rangle, "'>'")?;
        let (l, c) = self.here();
        if *self.peek() != Tok::Eof {
            return Err(err(l, c, "trailing input after presentation"));
        }
        Presentation::new(self.generators.clone(), relators)
            .map_err(|e| err(l, c, e.to_string()))
    }

    fn word_expr(&mut self) -> Result<Word, ParseError> {
        let mut w = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.advance();
                    let f = self.factor()?;
                    w = w.concat(&f);
                }
                // '*' is optional: a following primary continues the word
                Tok::Ident(_) | Tok::Lparen | Tok::Lbracket => {
                    let f = self.factor()?;
                    w = w.concat(&f);
                }
                _ => return Ok(w),
            }
        }
    }

    fn factor(&mut self) -> Result<Word, ParseError> {
        let base = self.primary()?;
        if *self.peek() == Tok::Caret {
            self.advance();
            let (l, c) = self.here();
            match self.advance() {
                Tok::Int(n) => Ok(base.pow(n)),
                _ => Err(err(l, c, "expected integer exponent after '^'")),
            }
        } else {
            Ok(base)
        }
    }

    fn primary(&mut self) -> Result<Word, ParseError> {
        let (l, c) = self.here();
        match self.advance() {
            Tok::Ident(name) => match self.generators.iter().position(|g| *g == name) {
                Some(i) => Ok(Word::generator(i + 1, false)),
                None => Err(err(l, c, format!("unknown generator {name:?}"))),
            },
            Tok::Lparen => {
                let w = self.word_expr()?;
                self.expect(Tok::Rparen, "')'")?;
                Ok(w)
            }
            Tok::Lbracket => {
                let x = self.word_expr()?;
                self.expect(Tok::Comma, "','")?;
                let y = self.word_expr()?;
                self.expect(Tok::Rbracket, "']'")?;
                Ok(Word::commutator(&x, &y))
            }
            t => Err(err(l, c, format!("expected a word, found {t:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Presentation {
        parse_presentation(s).unwrap()
    }

    #[test]
    fn expands_exponents_and_parentheses() {
        let p = parse("< a, b | a^2, (a*b)^3 >");
        assert_eq!(p.generator_names(), ["a", "b"]);
        assert_eq!(p.relators()[0], Word::new([1, 1]));
        assert_eq!(p.relators()[1], Word::new([1, 2, 1, 2, 1, 2]));
    }

    #[test]
    fn commutator_notation() {
        let p = parse("< a, b | [a,b] >");
        assert_eq!(p.relators(), [Word::new([-1, -2, 1, 2])]);
    }

    #[test]
    fn cyclic_group_of_order_five() {
        let p = parse("< a | a^5 >");
        assert_eq!(p.relators(), [Word::new([1, 1, 1, 1, 1])]);
    }

    #[test]
    fn star_is_optional_and_whitespace_ignored() {
        let p = parse("<a,b|a b a b>");
        assert_eq!(p.relators(), [Word::new([1, 2, 1, 2])]);
        assert_eq!(parse("< a, b | a*b*a*b >"), p);
    }

    #[test]
    fn zero_exponent_expands_to_nothing_and_empty_relators_drop() {
        let p = parse("< a | a^0 >");
        assert!(p.relators().is_empty());
        let q = parse("< a, b | a*a^-1, b^2 >");
        assert_eq!(q.relators(), [Word::new([2, 2])]);
    }

    #[test]
    fn relators_are_cyclically_reduced() {
        let p = parse("< a, b | b*a*b^-1 >");
        assert_eq!(p.relators(), [Word::new([1])]);
    }

    #[test]
    fn free_group_has_no_relators() {
        let p = parse("< a, b | >");
        assert_eq!(p.generator_count(), 2);
        assert!(p.relators().is_empty());
    }

    #[test]
    fn comments_are_skipped() {
        let p = parse("# a comment\n< a | # another\n a^3 >");
        assert_eq!(p.relators(), [Word::new([1, 1, 1])]);
    }

    #[test]
    fn unknown_generator_is_rejected_with_position() {
        let e = parse_presentation("< a |\n  c^2 >").unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        assert!(e.message.contains("unknown generator"));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let e = parse_presentation("< a | a^x >").unwrap_err();
        assert_eq!((e.line, e.column), (1, 9));
        assert!(parse_presentation("< a, a | >").is_err());
        assert!(parse_presentation("< a | a > junk").is_err());
        assert!(parse_presentation("").is_err());
    }

    #[test]
    fn dsl_round_trip_is_a_fixed_point() {
        for src in [
            "< a, b | a^2, b^2, (a*b)^3 >",
            "< a, b, c, d | [a,b][c,d] >",
            "< x1, y_2 | (x1 y_2^-3)^2, [x1, y_2^2] >",
            "< a | >",
        ] {
            let p = parse(src);
            let q = parse(&p.to_dsl());
            assert_eq!(p, q);
            assert_eq!(q.to_dsl(), parse(&q.to_dsl()).to_dsl());
        }
    }

    #[test]
    fn nested_exponents_and_commutators() {
        let p = parse("< a, b | [a^2, b]^-1 >");
        let a2 = Word::new([1, 1]);
        let b = Word::new([2]);
        assert_eq!(p.relators(), [Word::commutator(&a2, &b).inverse()]);
    }
}
