//! Parser for the valuation grammar
//!
//! ```text
//! valuation := "[" "v0" ("," step)* "]" | "[" rational ("," rational)* "]"
//! step      := "v" INT "(" poly ")" "=" rational
//! poly      := term (("+"|"-") term)*
//! term      := rational | rational? "x" ("^" INT)?
//! rational  := INT | INT "/" INT
//! ```
//!
//! Whitespace (including newlines) is insignificant between tokens. Step
//! indices must run 1, 2, 3, ... in order.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::maclane::{BaseField, MacLaneValuation, Polynomial, ValuationShape};
use crate::numeric::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
    Equals,
    Plus,
    Minus,
    Slash,
    Caret,
    Int(BigInt),
    Word(String),
    End,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::LBracket => "'['".into(),
            Token::RBracket => "']'".into(),
            Token::LParen => "'('".into(),
            Token::RParen => "')'".into(),
            Token::Comma => "','".into(),
            Token::Equals => "'='".into(),
            Token::Plus => "'+'".into(),
            Token::Minus => "'-'".into(),
            Token::Slash => "'/'".into(),
            Token::Caret => "'^'".into(),
            Token::Int(n) => format!("integer {n}"),
            Token::Word(w) => format!("{w:?}"),
            Token::End => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    token: Token,
    line: usize,
    column: usize,
}

fn tokenize(text: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let (start_line, start_column) = (line, column);
        let mut advance = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().expect("peeked");
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        if c.is_whitespace() {
            advance(&mut chars);
            continue;
        }
        let token = if c.is_ascii_digit() {
            let mut digits = String::new();
            while chars.peek().is_some_and(char::is_ascii_digit) {
                digits.push(advance(&mut chars));
            }
            Token::Int(digits.parse().expect("ascii digits"))
        } else if c.is_ascii_alphabetic() {
            let mut word = String::new();
            while chars.peek().is_some_and(char::is_ascii_alphabetic) {
                word.push(advance(&mut chars));
            }
            Token::Word(word)
        } else {
            advance(&mut chars);
            match c {
                '[' => Token::LBracket,
                ']' => Token::RBracket,
                '(' => Token::LParen,
                ')' => Token::RParen,
                ',' => Token::Comma,
                '=' => Token::Equals,
                '+' => Token::Plus,
                '-' | '−' => Token::Minus,
                '/' => Token::Slash,
                '^' => Token::Caret,
                other => {
                    return Err(Error::Parse {
                        line: start_line,
                        column: start_column,
                        message: format!("unexpected character {other:?}"),
                    })
                }
            }
        };
        out.push(Spanned {
            token,
            line: start_line,
            column: start_column,
        });
    }
    out.push(Spanned {
        token: Token::End,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self> {
        Ok(Parser {
            tokens: tokenize(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.pos].token
    }

    fn bump(&mut self) -> Spanned {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: impl Into<String>) -> Error {
        let t = &self.tokens[self.pos];
        Error::Parse {
            line: t.line,
            column: t.column,
            message: message.into(),
        }
    }

    fn expect(&mut self, want: Token) -> Result<Spanned> {
        if *self.peek() == want {
            Ok(self.bump())
        } else {
            Err(self.error_here(format!(
                "expected {}, found {}",
                want.describe(),
                self.peek().describe()
            )))
        }
    }

    fn int(&mut self) -> Result<BigInt> {
        match self.peek().clone() {
            Token::Int(n) => {
                self.bump();
                Ok(n)
            }
            other => {
                Err(self.error_here(format!("expected an integer, found {}", other.describe())))
            }
        }
    }

    fn rational(&mut self) -> Result<Rational> {
        let negative = *self.peek() == Token::Minus;
        if negative {
            self.bump();
        }
        let num = self.int()?;
        let value = if *self.peek() == Token::Slash {
            self.bump();
            let at = self.pos;
            let den = self.int()?;
            Rational::reduce(num, den).map_err(|_| {
                self.pos = at;
                self.error_here("zero denominator")
            })?
        } else {
            Rational::from_integer(num)
        };
        Ok(if negative { -value } else { value })
    }

    fn is_x(&self) -> bool {
        matches!(self.peek(), Token::Word(w) if w == "x")
    }

    /// `x` with an optional exponent; the `x` itself is current.
    fn power(&mut self) -> Result<usize> {
        self.bump();
        if *self.peek() != Token::Caret {
            return Ok(1);
        }
        self.bump();
        let at_exponent = self.pos;
        let e = self.int()?;
        e.to_usize().filter(|&e| e <= 1 << 16).ok_or_else(|| {
            self.pos = at_exponent;
            self.error_here(format!("exponent {e} too large"))
        })
    }

    fn term(&mut self) -> Result<Polynomial> {
        if self.is_x() {
            let k = self.power()?;
            return Ok(Polynomial::monomial(Rational::one(), k));
        }
        let c = self.rational()?;
        if self.is_x() {
            let k = self.power()?;
            Ok(Polynomial::monomial(c, k))
        } else {
            Ok(Polynomial::constant(c))
        }
    }

    fn polynomial(&mut self) -> Result<Polynomial> {
        let mut negative = false;
        if *self.peek() == Token::Minus {
            self.bump();
            negative = true;
        }
        if matches!(self.peek(), Token::Minus | Token::Plus) {
            return Err(self.error_here("repeated sign"));
        }
        let first = self.term()?;
        let mut acc = if negative { -&first } else { first };
        loop {
            let sign = match self.peek() {
                Token::Plus => false,
                Token::Minus => true,
                _ => break,
            };
            self.bump();
            if matches!(self.peek(), Token::Minus | Token::Plus) {
                return Err(self.error_here("repeated sign"));
            }
            let t = self.term()?;
            acc = if sign { &acc - &t } else { &acc + &t };
        }
        Ok(acc)
    }

    fn finish(&mut self) -> Result<()> {
        if *self.peek() == Token::End {
            Ok(())
        } else {
            Err(self.error_here(format!("unexpected {}", self.peek().describe())))
        }
    }

    /// `vK` with the expected index `K`.
    fn step_index(&mut self, expected: usize) -> Result<()> {
        match self.peek() {
            Token::Word(w) if w == "v" => {
                self.bump();
            }
            other => {
                return Err(self.error_here(format!(
                    "expected a step 'v{expected}', found {}",
                    other.describe()
                )))
            }
        }
        let at = self.pos;
        let index = self.int()?;
        if index != BigInt::from(expected) {
            self.pos = at;
            return Err(self.error_here(format!(
                "step indices must be consecutive: expected v{expected}, found v{index}"
            )));
        }
        Ok(())
    }
}

/// What a bracketed expression describes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParsedValuation {
    /// Steps with explicit key polynomials.
    Valuation(MacLaneValuation),
    /// The shorthand `[λ1, ..., λn]`.
    Shape(ValuationShape),
}

impl ParsedValuation {
    /// The slope data, whichever form was given.
    pub fn shape(&self) -> Result<ValuationShape> {
        match self {
            ParsedValuation::Valuation(v) => crate::maclane::shape_of(v),
            ParsedValuation::Shape(s) => Ok(s.clone()),
        }
    }
}

/// Parses a valuation over `base`; keys are validated as they are read.
pub fn parse_valuation(text: &str, base: &BaseField) -> Result<ParsedValuation> {
    let mut p = Parser::new(text)?;
    p.expect(Token::LBracket)?;
    let steps_form = matches!(p.peek(), Token::Word(w) if w == "v");
    if !steps_form {
        let mut lambdas = vec![p.rational()?];
        while *p.peek() == Token::Comma {
            p.bump();
            lambdas.push(p.rational()?);
        }
        p.expect(Token::RBracket)?;
        p.finish()?;
        return Ok(ParsedValuation::Shape(ValuationShape::new(lambdas)?));
    }

    p.step_index(0)?;
    let mut steps = Vec::new();
    while *p.peek() == Token::Comma {
        p.bump();
        p.step_index(steps.len() + 1)?;
        p.expect(Token::LParen)?;
        let key = p.polynomial()?;
        p.expect(Token::RParen)?;
        p.expect(Token::Equals)?;
        let lambda = p.rational()?;
        steps.push((key, lambda));
    }
    p.expect(Token::RBracket)?;
    p.finish()?;
    let mut v = MacLaneValuation::gauss(base.clone());
    for (key, lambda) in steps {
        v = v.augment(key, lambda)?;
    }
    Ok(ParsedValuation::Valuation(v))
}

pub fn parse_polynomial(text: &str) -> Result<Polynomial> {
    let mut p = Parser::new(text)?;
    let poly = p.polynomial()?;
    p.finish()?;
    Ok(poly)
}

/// Parses a single rational with the same error positions as the grammar.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let mut p = Parser::new(text)?;
    let q = p.rational()?;
    p.finish()?;
    Ok(q)
}

/// Parses a positive integer argument such as `N` or `p`.
pub fn parse_positive(text: &str) -> Result<BigInt> {
    let mut p = Parser::new(text)?;
    let n = p.int()?;
    p.finish()?;
    if !n.is_positive() {
        return Err(Error::domain(format!(
            "expected a positive integer, got {n}"
        )));
    }
    Ok(n)
}
