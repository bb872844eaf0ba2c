//! Recursive-descent parser for the identity expression language.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := base ('^' sint)? ('@' uint)?  |  '-' factor
//! base   := rational | 'q' | 'J(' uint ')' | 'J(' uint ',' uint ')'
//!         | 'eta(' uint ',' uint ')' | 'X(' uint ',' uint ')' | 'H(' uint ',' uint ')'
//!         | 'sigma(' uint ')' | 'T' | 't' | 'V' uint | 'Y' uint
//!         | ident '(' expr (',' expr)* ')' | '(' expr ')'
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::expr::QExpr;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub expected: Vec<String>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: expected ", self.line, self.column)?;
        match self.expected.len() {
            1 => write!(f, "{}", self.expected[0])?,
            _ => write!(f, "one of {}", self.expected.join(", "))?,
        }
        write!(f, ", found {}", self.found)
    }
}

impl std::error::Error for ParseError {}

impl ParseError {
    /// The offending source line with a caret under the error column.
    pub fn caret(&self, src: &str) -> String {
        let line = src.lines().nth(self.line - 1).unwrap_or("");
        format!("{line}\n{}^", " ".repeat(self.column - 1))
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    At,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("integer {n}"),
            Tok::Ident(s) => format!("'{s}'"),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Comma => "','".into(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::At => "'@'".into(),
            Tok::End => "end of input".into(),
        }
    }
}

struct Lexed {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Lexed>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let tok = if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Lexed {
                tok: Tok::Int(s.parse().expect("digits")),
                line: l0,
                col: c0,
            });
            continue;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            // identifiers are letters and underscores; a trailing digit run
            // belongs to V/Y atoms and is split off by the parser
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Lexed {
                tok: Tok::Ident(s),
                line: l0,
                col: c0,
            });
            continue;
        } else {
            match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                '+' => Tok::Plus,
                '-' | '\u{2212}' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '@' => Tok::At,
                other => {
                    return Err(ParseError {
                        line: l0,
                        column: c0,
                        expected: vec!["a token".into()],
                        found: format!("character '{other}'"),
                    })
                }
            }
        };
        out.push(Lexed {
            tok,
            line: l0,
            col: c0,
        });
        i += 1;
        col += 1;
    }
    out.push(Lexed {
        tok: Tok::End,
        line,
        col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Lexed>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &[&str]) -> PResult<T> {
        let l = &self.toks[self.pos];
        Err(ParseError {
            line: l.line,
            column: l.col,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: l.tok.describe(),
        })
    }

    fn error_at<T>(&self, pos: usize, what: &str) -> PResult<T> {
        let l = &self.toks[pos];
        Err(ParseError {
            line: l.line,
            column: l.col,
            expected: vec![what.to_string()],
            found: l.tok.describe(),
        })
    }

    fn expect(&mut self, t: Tok, name: &str) -> PResult<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.error(&[name])
        }
    }

    fn uint(&mut self) -> PResult<u64> {
        match self.peek().clone() {
            Tok::Int(n) => match n.to_u64() {
                Some(v) => {
                    self.bump();
                    Ok(v)
                }
                None => self.error(&["an integer below 2^64"]),
            },
            _ => self.error(&["unsigned integer"]),
        }
    }

    fn sint(&mut self) -> PResult<i64> {
        let neg = match self.peek() {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            Tok::LParen => {
                self.bump();
                let v = self.sint()?;
                self.expect(Tok::RParen, "')'")?;
                return Ok(v);
            }
            _ => false,
        };
        match self.peek().clone() {
            Tok::Int(n) => match n.to_i64() {
                Some(v) => {
                    self.bump();
                    Ok(if neg { -v } else { v })
                }
                None => self.error(&["a small integer"]),
            },
            _ => self.error(&["integer"]),
        }
    }

    fn expr(&mut self) -> PResult<QExpr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = lhs.add(self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    lhs = lhs.sub(self.term()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> PResult<QExpr> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = lhs.mul(self.factor()?);
                }
                Tok::Slash => {
                    self.bump();
                    lhs = lhs.div(self.factor()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> PResult<QExpr> {
        if *self.peek() == Tok::Minus && !matches!(self.peek_at(1), Tok::Int(_)) {
            self.bump();
            return Ok(self.factor()?.neg());
        }
        let mut e = self.base()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            e = e.pow(self.sint()?);
        }
        if *self.peek() == Tok::At {
            self.bump();
            let at = self.pos;
            let k = self.uint()?;
            if k == 0 {
                return self.error_at(at, "a positive scale factor");
            }
            e = e.scale(k);
        }
        Ok(e)
    }

    fn int_literal(&mut self) -> PResult<BigInt> {
        let neg = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        match self.bump() {
            Tok::Int(n) => Ok(if neg { -n } else { n }),
            _ => unreachable!("checked by caller"),
        }
    }

    fn args2(&mut self) -> PResult<(u64, u64, usize)> {
        self.expect(Tok::LParen, "'('")?;
        let at = self.pos;
        let a = self.uint()?;
        self.expect(Tok::Comma, "','")?;
        let b = self.uint()?;
        self.expect(Tok::RParen, "')'")?;
        Ok((a, b, at))
    }

    fn base(&mut self) -> PResult<QExpr> {
        match self.peek().clone() {
            Tok::Int(_) | Tok::Minus => {
                let n = self.int_literal()?;
                if *self.peek() == Tok::Slash {
                    if let Tok::Int(d) = self.peek_at(1).clone() {
                        let at = self.pos + 1;
                        self.bump();
                        self.bump();
                        if d.is_zero() {
                            return self.error_at(at, "a nonzero denominator");
                        }
                        return Ok(QExpr::Const(BigRational::new(n, d)));
                    }
                }
                Ok(QExpr::Const(BigRational::from_integer(n)))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let at = self.pos;
                self.bump();
                self.ident(&name, at)
            }
            _ => self.error(&["integer", "'q'", "'J'", "'eta'", "'X'", "'H'", "'T'", "'t'", "'V'", "'Y'", "'('"]),
        }
    }

    fn ident(&mut self, name: &str, at: usize) -> PResult<QExpr> {
        match name {
            "q" => Ok(QExpr::Q),
            "T" => Ok(QExpr::BigT),
            "t" => Ok(QExpr::SmallT),
            "J" => {
                self.expect(Tok::LParen, "'('")?;
                let first = self.pos;
                let a = self.uint()?;
                if *self.peek() == Tok::Comma {
                    self.bump();
                    let b = self.uint()?;
                    self.expect(Tok::RParen, "')'")?;
                    if !(0 < a && a < b) {
                        return self.error_at(first, "J(a,b) with 0 < a < b");
                    }
                    Ok(QExpr::Jab(a, b))
                } else {
                    if *self.peek() != Tok::RParen {
                        return self.error(&["','", "')'"]);
                    }
                    self.bump();
                    if a == 0 {
                        return self.error_at(first, "J(a) with a >= 1");
                    }
                    Ok(QExpr::Euler(a))
                }
            }
            "eta" | "X" | "H" => {
                let (a, b, first) = self.args2()?;
                let (lo, hi) = if name == "eta" { (b, a) } else { (a, b) };
                if !(0 < lo && lo < hi) {
                    let msg = match name {
                        "eta" => "eta(d,g) with 0 < g < d",
                        "X" => "X(j,K) with 0 < j < K",
                        _ => "H(j,K) with 0 < j < K",
                    };
                    return self.error_at(first, msg);
                }
                Ok(match name {
                    "eta" => QExpr::Eta(a, b),
                    "X" => QExpr::X(a, b),
                    _ => QExpr::H(a, b),
                })
            }
            "sigma" => {
                self.expect(Tok::LParen, "'('")?;
                let first = self.pos;
                let k = self.uint()?;
                self.expect(Tok::RParen, "')'")?;
                if k == 0 {
                    return self.error_at(first, "sigma(k) with k >= 1");
                }
                Ok(QExpr::Sigma(k))
            }
            _ => {
                if let Some(e) = appendix_atom(name) {
                    return match e {
                        Some(e) => Ok(e),
                        None => self.error_at(at, "V or Y with index 0..10"),
                    };
                }
                if *self.peek() != Tok::LParen {
                    return self.error_at(at, "a known atom or a call name(...)");
                }
                self.bump();
                let mut args = vec![self.expr()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    args.push(self.expr()?);
                }
                self.expect(Tok::RParen, "')'")?;
                Ok(QExpr::Call(name.to_string(), args))
            }
        }
    }
}

/// `V0`..`V10`, `Y0`..`Y10`. Outer `None`: not of that shape.
fn appendix_atom(name: &str) -> Option<Option<QExpr>> {
    let (head, digits) = name.split_at(1);
    if !(head == "V" || head == "Y") || digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let m: u32 = digits.parse().ok()?;
    if m > 10 {
        return Some(None);
    }
    Some(Some(if head == "V" { QExpr::V(m) } else { QExpr::Y(m) }))
}

pub fn parse(src: &str) -> Result<QExpr, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.error(&["an operator", "end of input"]);
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corollary_side() {
        let e = parse("-11*q*J(5,11)*J(11)^5/(J(1,11)*J(3,11)*J(4,11))").unwrap();
        let expected = QExpr::int(-11)
            .mul(QExpr::Q)
            .mul(QExpr::Jab(5, 11))
            .mul(QExpr::Euler(11).pow(5))
            .div(QExpr::Jab(1, 11).mul(QExpr::Jab(3, 11)).mul(QExpr::Jab(4, 11)));
        assert_eq!(e, expected);
    }

    #[test]
    fn truncated_call_reports_column() {
        let err = parse("J(1,").unwrap_err();
        assert_eq!((err.line, err.column), (1, 5));
        assert_eq!(err.found, "end of input");
        assert!(err.expected.contains(&"unsigned integer".to_string()));
    }

    #[test]
    fn rationals_and_division() {
        assert_eq!(parse("9/22*Y0").unwrap(), QExpr::rational(9, 22).mul(QExpr::Y(0)));
        assert_eq!(parse("1/J(1)").unwrap(), QExpr::int(1).div(QExpr::Euler(1)));
        assert_eq!(parse("t^-1@11").unwrap(), QExpr::SmallT.pow(-1).scale(11));
        assert_eq!(parse("V10*T").unwrap(), QExpr::V(10).mul(QExpr::BigT));
    }

    #[test]
    fn unary_minus_and_calls() {
        assert_eq!(parse("-q").unwrap(), QExpr::Q.neg());
        assert_eq!(
            parse("dissect(F(1),11,6)").unwrap(),
            QExpr::Call(
                "dissect".into(),
                vec![QExpr::Call("F".into(), vec![QExpr::int(1)]), QExpr::int(11), QExpr::int(6)]
            )
        );
    }

    #[test]
    fn invalid_atoms() {
        assert!(parse("J(3,2)").is_err());
        assert!(parse("V11").is_err());
        assert!(parse("eta(5,5)").is_err());
        assert!(parse("q q").is_err());
        assert!(parse("q@0").is_err());
    }

    #[test]
    fn multiline_position() {
        let err = parse("1 +\n  J(2,").unwrap_err();
        assert_eq!((err.line, err.column), (2, 7));
    }

    #[test]
    fn printer_round_trip() {
        for s in [
            "-10*V6 - 19*V6*t - 6*V6*t^2 + 9*V6*T + 6*V6*T*t + 6*V6*T*t^2",
            "1/2*(X(11,121) + X(55,121))^2 - q^-1*J(55,121)/J(44,121)",
            "-(q*J(1))",
            "(1/2)^3 - -3 + 2/(3) - -(4)",
            "(t@2)@3 + (t^2)^3 + a(b(1),2)",
            "q*(J(1)/J(2))",
        ] {
            let e = parse(s).unwrap();
            let printed = e.to_string();
            assert_eq!(parse(&printed).unwrap(), e, "{s} -> {printed}");
        }
    }
}
