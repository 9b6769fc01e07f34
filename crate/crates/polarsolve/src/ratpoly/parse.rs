//! Text grammar for polynomials: terms like `3/2*X1^2*X3 - X2 + 1`,
//! variables `X1…Xn`, `^` for powers, explicit `*`, whitespace insensitive.
//! Errors carry the 1-based line and column of the offending token.

use std::fmt;


use smallvec::smallvec;

use super::multipoly::{Monomial, MultiPoly};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
#[error("parse error at line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        ParseError { line, col, message: message.into() }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Token {
    Literal(String),
    Variable(usize),
    Plus,
    Minus,
    Star,
    Caret,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Literal(s) => write!(f, "`{s}`"),
            Token::Variable(i) => write!(f, "`X{}`", i + 1),
            Token::Plus => write!(f, "`+`"),
            Token::Minus => write!(f, "`-`"),
            Token::Star => write!(f, "`*`"),
            Token::Caret => write!(f, "`^`"),
        }
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer { chars: text.chars().peekable(), line: 1, col: 1 }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn lex(mut self, nvars: usize) -> Result<Vec<(Token, usize, usize)>, ParseError> {
        let mut tokens = Vec::new();
        loop {
            while self.chars.peek().is_some_and(|c| c.is_whitespace()) {
                self.bump();
            }
            let (line, col) = (self.line, self.col);
            let Some(c) = self.bump() else { break };
            let token = match c {
                '+' => Token::Plus,
                '-' => Token::Minus,
                '*' => Token::Star,
                '^' => Token::Caret,
                '0'..='9' => {
                    let mut text = String::from(c);
                    while self.chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                        text.push(self.bump().unwrap());
                    }
                    if self.chars.peek() == Some(&'/') {
                        self.bump();
                        text.push('/');
                        if !self.chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                            return Err(ParseError::new(
                                self.line,
                                self.col,
                                "expected digits after `/` in rational literal",
                            ));
                        }
                        while self.chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                            text.push(self.bump().unwrap());
                        }
                    }
                    Token::Literal(text)
                }
                'X' | 'x' => {
                    if !self.chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                        return Err(ParseError::new(line, col, "expected variable index after `X`"));
                    }
                    let mut digits = String::new();
                    while self.chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                        digits.push(self.bump().unwrap());
                    }
                    let index: usize = digits
                        .parse()
                        .map_err(|_| ParseError::new(line, col, "variable index too large"))?;
                    if index == 0 || index > nvars {
                        return Err(ParseError::new(
                            line,
                            col,
                            format!("unknown variable X{index} (system has {nvars} variables)"),
                        ));
                    }
                    Token::Variable(index - 1)
                }
                other => {
                    return Err(ParseError::new(
                        line,
                        col,
                        format!("unexpected character `{other}`"),
                    ));
                }
            };
            tokens.push((token, line, col));
        }
        Ok(tokens)
    }
}

struct Parser<T: Scalar> {
    tokens: Vec<(Token, usize, usize)>,
    pos: usize,
    nvars: usize,
    _marker: std::marker::PhantomData<T>,
}

impl<T: Scalar> Parser<T> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _, _)| t)
    }

    fn location(&self) -> (usize, usize) {
        self.tokens
            .get(self.pos)
            .or_else(|| self.tokens.last())
            .map_or((1, 1), |&(_, l, c)| (l, c))
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(t, _, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = self.location();
        ParseError::new(line, col, message)
    }

    fn parse_expression(&mut self) -> Result<MultiPoly<T>, ParseError> {
        let mut acc = MultiPoly::zero(self.nvars);
        let mut sign_negative = match self.peek() {
            Some(Token::Minus) => {
                self.bump();
                true
            }
            Some(Token::Plus) => {
                self.bump();
                false
            }
            _ => false,
        };
        loop {
            let term = self.parse_term()?;
            acc = if sign_negative { &acc - &term } else { &acc + &term };
            match self.peek() {
                None => return Ok(acc),
                Some(Token::Plus) => {
                    self.bump();
                    sign_negative = false;
                }
                Some(Token::Minus) => {
                    self.bump();
                    sign_negative = true;
                }
                Some(other) => {
                    return Err(self.error(format!("expected `+` or `-`, found {other}")));
                }
            }
        }
    }

    fn parse_term(&mut self) -> Result<MultiPoly<T>, ParseError> {
        let mut coeff = T::one();
        let mut exps: smallvec::SmallVec<[u32; 8]> = smallvec![0u32; self.nvars];
        loop {
            match self.bump() {
                Some(Token::Literal(text)) => {
                    let value = T::parse_literal(&text)
                        .ok_or_else(|| self.error(format!("malformed rational literal `{text}`")))?;
                    coeff = coeff * &value;
                }
                Some(Token::Variable(index)) => {
                    let mut power = 1u32;
                    if self.peek() == Some(&Token::Caret) {
                        self.bump();
                        match self.bump() {
                            Some(Token::Literal(text)) if !text.contains('/') => {
                                power = text.parse().map_err(|_| {
                                    self.error(format!("exponent `{text}` is not a small integer"))
                                })?;
                            }
                            _ => return Err(self.error("expected integer exponent after `^`")),
                        }
                    }
                    exps[index] += power;
                }
                Some(other) => return Err(self.error(format!("expected a factor, found {other}"))),
                None => return Err(self.error("expected a factor, found end of input")),
            }
            if self.peek() == Some(&Token::Star) {
                self.bump();
            } else {
                break;
            }
        }
        let mut term = MultiPoly::zero(self.nvars);
        term.add_term(Monomial::from_exponents(&exps), coeff);
        Ok(term)
    }
}

/// Parse one polynomial in `nvars` variables.
pub fn parse_poly<T: Scalar>(text: &str, nvars: usize) -> Result<MultiPoly<T>, ParseError> {
    let tokens = Lexer::new(text).lex(nvars)?;
    if tokens.is_empty() {
        return Err(ParseError::new(1, 1, "empty polynomial"));
    }
    let mut parser =
        Parser::<T> { tokens, pos: 0, nvars, _marker: std::marker::PhantomData };
    parser.parse_expression()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use crate::Poly;

    #[test]
    fn parses_the_reference_term_shape() {
        let p: Poly = parse_poly("3/2*X1^2*X3 - X2 + 1", 3).unwrap();
        assert_eq!(p.eval(&[rat(2, 1), rat(5, 1), rat(1, 1)]), rat(2, 1));
        assert_eq!(p.num_terms(), 3);
    }

    #[test]
    fn whitespace_insensitive() {
        let a: Poly = parse_poly("X1^2+X2^2-1", 2).unwrap();
        let b: Poly = parse_poly("  X1^2 +\n X2 ^ 2 - 1 ", 2).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn leading_sign_and_repeated_variables() {
        let p: Poly = parse_poly("-X1*X1 + 2", 1).unwrap();
        assert_eq!(p.eval(&[rat(3, 1)]), rat(-7, 1));
    }

    #[test]
    fn reports_line_and_column() {
        let err = parse_poly::<crate::Rat>("X1 +\n X9", 2).unwrap_err();
        assert_eq!((err.line, err.col), (2, 2));
        assert!(err.message.contains("unknown variable X9"));

        let err = parse_poly::<crate::Rat>("X1 + 3/", 2).unwrap_err();
        assert!(err.message.contains("expected digits"));

        let err = parse_poly::<crate::Rat>("X1 & X2", 2).unwrap_err();
        assert_eq!((err.line, err.col), (1, 4));
    }

    #[test]
    fn rejects_trailing_operators_and_empty_input() {
        assert!(parse_poly::<crate::Rat>("X1 +", 2).is_err());
        assert!(parse_poly::<crate::Rat>("", 2).is_err());
        assert!(parse_poly::<crate::Rat>("X1 ^ 1/2", 2).is_err());
    }
}
