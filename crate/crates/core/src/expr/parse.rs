//! Recursive-descent parser.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' ['-' | '+'] integer)?
//! atom   := number | 'x' | 'pi' | 'e' | name '(' expr (',' expr)? ')' | '(' expr ')'
//! ```
//!
//! Unary minus binds looser than `^`, so `-x^2` is `-(x^2)`.

use std::fmt;

use thiserror::Error;

use super::{BinOp, Expr, Func};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    /// Byte offset into the source.
    pub offset: usize,
    pub expected: Vec<&'static str>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "syntax error at byte {}: expected {}, found {}",
            self.offset,
            self.expected.join(" or "),
            self.found
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64, bool),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v, _) => format!("number {v}"),
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Comma => "','".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < src.len() {
        let c = src[i..].chars().next().expect("in bounds");
        let start = i;
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' | '\u{2212}' => Some(Tok::Minus),
            '*' | '\u{00b7}' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(tok) = single {
            out.push((tok, start));
            i += c.len_utf8();
            continue;
        }
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            let mut j = i;
            let mut integral = true;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            if j < bytes.len() && bytes[j] == b'.' {
                integral = false;
                j += 1;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
            }
            // Exponent only when digits follow; otherwise `e` is Euler's number.
            if j < bytes.len() && (bytes[j] == b'e' || bytes[j] == b'E') {
                let mut k = j + 1;
                if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                    k += 1;
                }
                if k < bytes.len() && bytes[k].is_ascii_digit() {
                    while k < bytes.len() && bytes[k].is_ascii_digit() {
                        k += 1;
                    }
                    integral = false;
                    j = k;
                }
            }
            let text = &src[i..j];
            let value: f64 = text.parse().map_err(|_| ParseError {
                offset: start,
                expected: vec!["number"],
                found: format!("'{text}'"),
            })?;
            out.push((Tok::Num(value, integral), start));
            i = j;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut j = i;
            while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                j += 1;
            }
            out.push((Tok::Ident(src[i..j].to_ascii_lowercase()), start));
            i = j;
            continue;
        }
        return Err(ParseError {
            offset: start,
            expected: vec!["expression"],
            found: format!("'{c}'"),
        });
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: Vec<&'static str>) -> ParseError {
        ParseError {
            offset: self.offset(),
            expected,
            found: self.peek().describe(),
        }
    }

    fn expect(&mut self, tok: Tok, name: &'static str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(vec![name]))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
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
        let parenthesized = *self.peek() == Tok::LParen;
        if parenthesized {
            self.bump();
        }
        let negative = match self.peek() {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        let k = match self.peek() {
            Tok::Num(v, true) if *v <= i32::MAX as f64 => *v as i32,
            _ => return Err(self.error(vec!["integer exponent"])),
        };
        self.bump();
        if parenthesized {
            self.expect(Tok::RParen, "')'")?;
        }
        Ok(Expr::Pow(Box::new(base), if negative { -k } else { k }))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let offset = self.offset();
        match self.bump() {
            Tok::Num(v, _) => Ok(Expr::Const(v)),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Tok::Ident(name) => match name.as_str() {
                "x" => Ok(Expr::X),
                "pi" => Ok(Expr::Const(std::f64::consts::PI)),
                "e" => Ok(Expr::Const(std::f64::consts::E)),
                "max" => {
                    self.expect(Tok::LParen, "'('")?;
                    let a = self.expr()?;
                    self.expect(Tok::Comma, "','")?;
                    let b = self.expr()?;
                    self.expect(Tok::RParen, "')'")?;
                    Ok(Expr::Max(Box::new(a), Box::new(b)))
                }
                other => match Func::from_name(other) {
                    Some(func) => {
                        self.expect(Tok::LParen, "'('")?;
                        let arg = self.expr()?;
                        self.expect(Tok::RParen, "')'")?;
                        Ok(Expr::Call(func, Box::new(arg)))
                    }
                    None => Err(ParseError {
                        offset,
                        expected: vec!["x", "pi", "e", "function name"],
                        found: format!("'{other}'"),
                    }),
                },
            },
            tok => {
                self.pos = self.pos.saturating_sub(usize::from(tok != Tok::End));
                Err(ParseError {
                    offset,
                    expected: vec!["number", "x", "function call", "'('"],
                    found: tok.describe(),
                })
            }
        }
    }
}

/// Parses an expression in `x`.
pub fn parse(source: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        toks: lex(source)?,
        pos: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.error(vec!["operator", "end of input"]));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_and_associativity() {
        let e = parse("1 - 2 - 3").unwrap();
        assert_eq!(e.eval(0.0).unwrap(), -4.0);
        let e = parse("8 / 4 / 2").unwrap();
        assert_eq!(e.eval(0.0).unwrap(), 1.0);
        assert_eq!(parse("-x^2").unwrap().eval(3.0).unwrap(), -9.0);
        assert_eq!(parse("2*x^3 + 1").unwrap().eval(2.0).unwrap(), 17.0);
        assert_eq!(
            parse("  ( x+1 ) * ( x-1 )").unwrap().eval(3.0).unwrap(),
            8.0
        );
    }

    #[test]
    fn numbers_and_constants() {
        assert_eq!(parse("1.5e2").unwrap().eval(0.0).unwrap(), 150.0);
        assert_eq!(parse("2e").unwrap_err().offset, 1);
        assert_eq!(
            parse("2*e").unwrap().eval(0.0).unwrap(),
            2.0 * std::f64::consts::E
        );
        assert_eq!(
            parse("pi").unwrap().eval(0.0).unwrap(),
            std::f64::consts::PI
        );
        assert_eq!(parse(".5").unwrap().eval(0.0).unwrap(), 0.5);
    }

    #[test]
    fn unmatched_parenthesis() {
        let err = parse("3/11*(1+x) )").unwrap_err();
        assert_eq!(err.offset, 11);
        assert!(err.expected.contains(&"end of input"));
        let err = parse("(x + 1").unwrap_err();
        assert_eq!(err.offset, 6);
        assert_eq!(err.expected, vec!["')'"]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse("").is_err());
        assert!(parse("x^1.5").is_err());
        assert!(parse("x^y").is_err());
        assert!(parse("foo(x)").is_err());
        assert!(parse("max(x)").is_err());
        assert!(parse("x $ 2").is_err());
        assert!(parse("x +").is_err());
    }

    #[test]
    fn exponent_forms() {
        assert_eq!(parse("x^-2").unwrap().eval(2.0).unwrap(), 0.25);
        assert_eq!(parse("x^(-2)").unwrap().eval(2.0).unwrap(), 0.25);
        assert_eq!(parse("x^+3").unwrap().eval(2.0).unwrap(), 8.0);
    }

    #[test]
    fn unicode_minus() {
        assert_eq!(parse("3 \u{2212} x").unwrap().eval(1.0).unwrap(), 2.0);
    }
}
