//! Recursive-descent parser for polynomial expressions.
//!
//! Grammar, lowest precedence first:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer ('/' integer)? | ('p' | 'q') integer | '(' expr ')'
//! ```
//!
//! The Unicode minus sign is accepted wherever `-` is.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::poly::{Poly, Rational, Var};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Number(Rational),
    Var(Var),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    pub fn eval(&self) -> Poly {
        match self {
            Expr::Number(c) => Poly::constant(c.clone()),
            Expr::Var(v) => Poly::var(*v),
            Expr::Neg(a) => -a.eval(),
            Expr::Add(a, b) => a.eval() + b.eval(),
            Expr::Sub(a, b) => a.eval() - b.eval(),
            Expr::Mul(a, b) => a.eval() * b.eval(),
            Expr::Pow(a, e) => a.eval().pow(*e),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {position}: expected {expected}, found {found}")]
    Syntax {
        position: usize,
        expected: String,
        found: String,
    },
    #[error(
        "q0 at position {position} is not a variable: it stands for the genus g, write the number instead"
    )]
    IndexZero { position: usize },
    #[error("division by zero at position {position}")]
    ZeroDenominator { position: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Var(char, BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "number {n}"),
            Tok::Var(k, i) => write!(f, "variable {k}{i}"),
            Tok::Plus => f.write_str("'+'"),
            Tok::Minus => f.write_str("'-'"),
            Tok::Star => f.write_str("'*'"),
            Tok::Slash => f.write_str("'/'"),
            Tok::Caret => f.write_str("'^'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let digits = |start: usize| -> (BigInt, usize) {
        let mut j = start;
        while j < chars.len() && chars[j].1.is_ascii_digit() {
            j += 1;
        }
        let s: String = chars[start..j].iter().map(|c| c.1).collect();
        (s.parse().expect("ascii digits"), j)
    };
    while i < chars.len() {
        let (pos, c) = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '0'..='9' => {
                let (n, j) = digits(i);
                out.push((pos, Tok::Int(n)));
                i = j;
            }
            'p' | 'q' => {
                if i + 1 < chars.len() && chars[i + 1].1.is_ascii_digit() {
                    let (n, j) = digits(i + 1);
                    out.push((pos, Tok::Var(c, n)));
                    i = j;
                } else {
                    return Err(ParseError::Syntax {
                        position: pos,
                        expected: "variable index".into(),
                        found: chars
                            .get(i + 1)
                            .map_or("end of input".into(), |c| format!("'{}'", c.1)),
                    });
                }
            }
            _ => {
                let tok = match c {
                    '+' => Tok::Plus,
                    '-' | '\u{2212}' => Tok::Minus,
                    '*' => Tok::Star,
                    '/' => Tok::Slash,
                    '^' => Tok::Caret,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    other => {
                        return Err(ParseError::Syntax {
                            position: pos,
                            expected: "number, variable, operator or parenthesis".into(),
                            found: format!("'{other}'"),
                        })
                    }
                };
                out.push((pos, tok));
                i += 1;
            }
        }
    }
    out.push((src.len(), Tok::End));
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

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> ParseError {
        ParseError::Syntax {
            position: self.pos(),
            expected: expected.into(),
            found: self.peek().to_string(),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Star {
            self.bump();
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        match self.peek().clone() {
            Tok::Int(n) => {
                let e =
                    u32::try_from(n).map_err(|_| self.error("exponent that fits in 32 bits"))?;
                self.bump();
                Ok(Expr::Pow(Box::new(base), e))
            }
            _ => Err(self.error("nonnegative integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                if *self.peek() != Tok::Slash {
                    return Ok(Expr::Number(Rational::from_integer(n)));
                }
                self.bump();
                let dpos = self.pos();
                match self.bump() {
                    Tok::Int(d) if d.is_zero() => {
                        Err(ParseError::ZeroDenominator { position: dpos })
                    }
                    Tok::Int(d) => Ok(Expr::Number(Rational::new(n, d))),
                    _ => {
                        self.at -= 1;
                        Err(self.error("denominator"))
                    }
                }
            }
            Tok::Var(k, i) => {
                self.bump();
                if i.is_zero() {
                    if k == 'q' {
                        return Err(ParseError::IndexZero { position: pos });
                    }
                    return Err(ParseError::Syntax {
                        position: pos,
                        expected: "variable index at least 1".into(),
                        found: "p0".into(),
                    });
                }
                let idx = u32::try_from(i).map_err(|_| ParseError::Syntax {
                    position: pos,
                    expected: "variable index that fits in 32 bits".into(),
                    found: "oversized index".into(),
                })?;
                Ok(Expr::Var(if k == 'p' { Var::p(idx) } else { Var::q(idx) }))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error("')'"));
                }
                self.bump();
                Ok(e)
            }
            _ => Err(self.error("number, variable or '('")),
        }
    }
}

pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        toks: lex(src)?,
        at: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.error("operator or end of input"));
    }
    Ok(e)
}

pub fn parse_poly(src: &str) -> Result<Poly, ParseError> {
    parse_expr(src).map(|e| e.eval())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, rat};

    #[test]
    fn parses_mixed_expression() {
        let f = parse_poly("p2*q1 - 3/4*p1*q1^2").unwrap();
        let expected = Poly::p(2) * Poly::q(1) - (Poly::p(1) * Poly::q(1).pow(2)).scale(&rat(3, 4));
        assert_eq!(f, expected);
        assert_eq!(f.to_string(), "p2*q1 - 3/4*p1*q1^2");
    }

    #[test]
    fn square_of_sum() {
        let f = parse_poly("(p1+q1)^2").unwrap();
        assert_eq!(
            f,
            Poly::p(1).pow(2) + (Poly::p(1) * Poly::q(1)).scale(&int(2)) + Poly::q(1).pow(2)
        );
    }

    #[test]
    fn rejects_q0() {
        assert_eq!(
            parse_poly("p1 + q0"),
            Err(ParseError::IndexZero { position: 5 })
        );
        assert!(parse_poly("q0").unwrap_err().to_string().contains("genus"));
    }

    #[test]
    fn precedence_and_unary_minus() {
        assert_eq!(parse_poly("-p1^2").unwrap(), -Poly::p(1).pow(2));
        assert_eq!(parse_poly("2*p1 - p1 - p1").unwrap(), Poly::zero());
        assert_eq!(
            parse_poly("p1 \u{2212} 1/2").unwrap(),
            Poly::p(1) - Poly::constant(rat(1, 2))
        );
        assert_eq!(parse_poly("--q3").unwrap(), Poly::q(3));
        assert_eq!(parse_poly("p12").unwrap(), Poly::p(12));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse_poly("p1 + * q2") {
            Err(ParseError::Syntax { position, .. }) => assert_eq!(position, 5),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_poly("(p1"),
            Err(ParseError::Syntax { position: 3, .. })
        ));
        assert!(matches!(
            parse_poly("p1^q1"),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(parse_poly("x"), Err(ParseError::Syntax { .. })));
        assert!(matches!(
            parse_poly("1/0"),
            Err(ParseError::ZeroDenominator { .. })
        ));
        assert!(matches!(parse_poly(""), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn canonical_text_is_a_fixed_point() {
        for src in [
            "0",
            "1",
            "-p1",
            "q3 - 1/2",
            "p1^2*q3 + 7/3*p2 - q1",
            "(p1 - q2)^3 * (1/5 + p4)",
        ] {
            let f = parse_poly(src).unwrap();
            let text = f.to_string();
            let g = parse_poly(&text).unwrap();
            assert_eq!(f, g);
            assert_eq!(g.to_string(), text);
        }
    }
}
