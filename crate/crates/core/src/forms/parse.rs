//! Two input syntaxes for forms: an ascending coefficient list
//! `"a0,a1,...,ad"` and polynomial text such as `"x^3 - 2*y^3"`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::QForm;
use crate::error::{Error, Result};

/// Parses either syntax. A string containing `x` or `y` is read as a
/// polynomial; anything else as a coefficient list.
///
/// When `degree` is given the input must have exactly that degree.
pub fn parse_form(s: &str, degree: Option<usize>) -> Result<QForm> {
    if s.contains(['x', 'y', 'X', 'Y']) {
        parse_polynomial(s, degree)
    } else {
        let f = parse_coefficients(s)?;
        if let Some(d) = degree {
            if d != f.degree() {
                return Err(Error::Parse {
                    pos: 0,
                    msg: format!("expected {} coefficients, found {}", d + 1, f.degree() + 1),
                });
            }
        }
        Ok(f)
    }
}

fn parse_rational(tok: &str, pos: usize) -> Result<BigRational> {
    let err = |msg: String| Error::Parse { pos, msg };
    let t = tok.trim();
    if t.is_empty() {
        return Err(err("empty coefficient".into()));
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| err(format!("invalid number '{num}'")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| err(format!("invalid number '{den}'")))?;
    if d.is_zero() {
        return Err(err("zero denominator".into()));
    }
    Ok(BigRational::new(n, d))
}

fn parse_coefficients(s: &str) -> Result<QForm> {
    let mut coeffs = Vec::new();
    let mut pos = 0;
    for tok in s.split(',') {
        let lead = tok.len() - tok.trim_start().len();
        coeffs.push(parse_rational(tok, pos + lead)?);
        pos += tok.len() + 1;
    }
    if coeffs.len() < 2 {
        return Err(Error::Parse {
            pos: 0,
            msg: "need at least two coefficients".into(),
        });
    }
    QForm::new(coeffs)
}

struct Lexer<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Lexer<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn digits(&mut self) -> &str {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos]).unwrap()
    }

    fn exponent(&mut self) -> Result<usize> {
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let at = self.pos;
            let d = self.digits();
            if d.is_empty() {
                return self.err("expected exponent after '^'");
            }
            d.parse().map_err(|_| Error::Parse {
                pos: at,
                msg: "exponent too large".into(),
            })
        } else {
            Ok(1)
        }
    }

    /// `[number] [*] factor ([*] factor)*` or a bare number.
    fn term(&mut self) -> Result<(BigRational, usize, usize)> {
        let mut coeff = BigRational::one();
        let (mut i, mut j) = (0usize, 0usize);
        let mut any = false;
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let at = self.pos;
                    let n = self.digits().to_string();
                    let mut v = parse_rational(&n, at)?;
                    if self.peek() == Some(b'/') {
                        self.pos += 1;
                        self.skip_ws();
                        let dat = self.pos;
                        let d = self.digits().to_string();
                        if d.is_empty() {
                            return self.err("expected denominator after '/'");
                        }
                        let d = parse_rational(&d, dat)?;
                        if d.is_zero() {
                            return Err(Error::Parse {
                                pos: dat,
                                msg: "zero denominator".into(),
                            });
                        }
                        v /= d;
                    }
                    coeff *= v;
                }
                Some(b'x' | b'X') => {
                    self.pos += 1;
                    i += self.exponent()?;
                }
                Some(b'y' | b'Y') => {
                    self.pos += 1;
                    j += self.exponent()?;
                }
                Some(b'(') => {
                    return self.err("parentheses are not supported");
                }
                Some(c) if !any => {
                    return self.err(format!("unexpected '{}'", c as char));
                }
                None if !any => return self.err("expected a term"),
                _ => break,
            }
            any = true;
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    if !matches!(self.peek(), Some(b'x' | b'X' | b'y' | b'Y' | b'0'..=b'9')) {
                        return self.err("expected a factor after '*'");
                    }
                }
                Some(b'x' | b'X' | b'y' | b'Y') => {}
                _ => break,
            }
        }
        Ok((coeff, i, j))
    }
}

fn parse_polynomial(s: &str, degree: Option<usize>) -> Result<QForm> {
    let mut lx = Lexer {
        s: s.as_bytes(),
        pos: 0,
    };
    let mut terms: Vec<(BigRational, usize, usize, usize)> = Vec::new();
    let mut sign = match lx.peek() {
        Some(b'-') => {
            lx.pos += 1;
            -1
        }
        Some(b'+') => {
            lx.pos += 1;
            1
        }
        _ => 1,
    };
    loop {
        let start = {
            lx.skip_ws();
            lx.pos
        };
        let (c, i, j) = lx.term()?;
        let c = if sign < 0 { -c } else { c };
        terms.push((c, i, j, start));
        match lx.peek() {
            None => break,
            Some(b'+') => sign = 1,
            Some(b'-') => sign = -1,
            Some(c) => return lx.err(format!("unexpected '{}'", c as char)),
        }
        lx.pos += 1;
    }
    let d = match degree {
        Some(d) => d,
        None => terms.iter().map(|t| t.1 + t.2).max().unwrap_or(0),
    };
    if d == 0 {
        return Err(Error::Parse {
            pos: 0,
            msg: "a form needs positive degree".into(),
        });
    }
    let mut coeffs = vec![BigRational::zero(); d + 1];
    for (c, i, j, at) in terms {
        if i + j != d {
            return Err(Error::Parse {
                pos: at,
                msg: format!("term of degree {} in a form of degree {d}", i + j),
            });
        }
        coeffs[i] += c;
    }
    QForm::new(coeffs)
}
