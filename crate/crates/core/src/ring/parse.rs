//! Text syntax for Laurent polynomials.
//!
//! Terms joined by `+`/`-`; a term is an optional rational coefficient and
//! `*`-separated `var^exp` factors, exponents possibly negative:
//! `-A^3`, `2*y^2`, `a^-2 - b^2`, `1/2*x*y^-1`. Whitespace is free.
//! `parse(render(p)) == p` for every polynomial.

use super::{LaurentPoly, VarSet};
use crate::error::RingError;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    Int(BigInt),
    Ident(String),
    End,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn next(&mut self) -> Result<Tok, RingError> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if self.pos >= self.src.len() {
            return Ok(Tok::End);
        }
        let c = self.src[self.pos];
        self.pos += 1;
        match c {
            b'+' => Ok(Tok::Plus),
            b'-' => Ok(Tok::Minus),
            b'*' => Ok(Tok::Star),
            b'^' => Ok(Tok::Caret),
            b'/' => Ok(Tok::Slash),
            b'0'..=b'9' => {
                let start = self.pos - 1;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Ok(Tok::Int(s.parse().unwrap()))
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos - 1;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                Ok(Tok::Ident(
                    std::str::from_utf8(&self.src[start..self.pos])
                        .unwrap()
                        .to_string(),
                ))
            }
            other => Err(RingError::Parse(format!(
                "unexpected character `{}`",
                other as char
            ))),
        }
    }

    fn peek(&mut self) -> Result<Tok, RingError> {
        let save = self.pos;
        let t = self.next();
        self.pos = save;
        t
    }
}

fn parse_signed_int(lx: &mut Lexer) -> Result<BigInt, RingError> {
    let mut neg = false;
    let mut t = lx.next()?;
    if t == Tok::Minus {
        neg = true;
        t = lx.next()?;
    } else if t == Tok::Plus {
        t = lx.next()?;
    }
    match t {
        Tok::Int(v) => Ok(if neg { -v } else { v }),
        other => Err(RingError::Parse(format!("expected integer, got {other:?}"))),
    }
}

pub(super) fn parse_poly(text: &str, vars: &VarSet) -> Result<LaurentPoly, RingError> {
    let mut lx = Lexer::new(text);
    let mut terms: BTreeMap<Vec<i32>, BigRational> = BTreeMap::new();
    let mut sign = BigRational::one();
    let mut first = true;
    loop {
        // leading sign of the term
        match lx.peek()? {
            Tok::End if first => return Err(RingError::Parse("empty input".into())),
            Tok::End => break,
            Tok::Plus => {
                lx.next()?;
                if first {
                    return Err(RingError::Parse("leading `+`".into()));
                }
            }
            Tok::Minus => {
                lx.next()?;
                sign = -sign;
            }
            _ if first => {}
            other => {
                return Err(RingError::Parse(format!(
                    "expected `+` or `-` between terms, got {other:?}"
                )))
            }
        }
        // one term: optional coefficient, then factors
        let mut coef = sign.clone();
        sign = BigRational::one();
        first = false;
        let mut exps = vec![0i32; vars.len()];
        let mut saw_factor = false;
        // coefficient?
        if let Tok::Int(n) = lx.peek()? {
            lx.next()?;
            let mut c = BigRational::from(n);
            if lx.peek()? == Tok::Slash {
                lx.next()?;
                match lx.next()? {
                    Tok::Int(d) if !d.is_zero() => c /= BigRational::from(d),
                    Tok::Int(_) => return Err(RingError::Parse("division by zero".into())),
                    other => {
                        return Err(RingError::Parse(format!(
                            "expected denominator, got {other:?}"
                        )))
                    }
                }
            }
            coef *= c;
            if lx.peek()? == Tok::Star {
                lx.next()?; // a variable factor must follow
            } else {
                saw_factor = true;
            }
        }
        loop {
            match lx.peek()? {
                Tok::Ident(name) => {
                    lx.next()?;
                    let idx = vars.index_of(&name).ok_or_else(|| {
                        RingError::Parse(format!("unknown variable `{name}` (have {vars})"))
                    })?;
                    let mut e = 1i64;
                    if lx.peek()? == Tok::Caret {
                        lx.next()?;
                        let v = parse_signed_int(&mut lx)?;
                        e = i64::try_from(&v)
                            .map_err(|_| RingError::Parse(format!("exponent {v} out of range")))?;
                    }
                    let e = i32::try_from(e)
                        .map_err(|_| RingError::Parse(format!("exponent {e} out of range")))?;
                    exps[idx] = exps[idx]
                        .checked_add(e)
                        .ok_or_else(|| RingError::Parse("exponent overflow".into()))?;
                    if lx.peek()? == Tok::Star {
                        lx.next()?;
                        saw_factor = false;
                        continue;
                    }
                    break;
                }
                other => {
                    if saw_factor {
                        break;
                    }
                    return Err(RingError::Parse(format!(
                        "expected variable or coefficient, got {other:?}"
                    )));
                }
            }
        }
        if !coef.is_zero() {
            match terms.get_mut(&exps) {
                Some(acc) => {
                    *acc += coef;
                    if acc.is_zero() {
                        terms.remove(&exps);
                    }
                }
                None => {
                    terms.insert(exps, coef);
                }
            }
        }
    }
    Ok(LaurentPoly {
        vars: vars.clone(),
        terms,
    })
}

/// Identifiers appearing in a polynomial string, deduplicated, sorted.
pub(super) fn scan_variables(text: &str) -> Vec<String> {
    let mut lx = Lexer::new(text);
    let mut out = Vec::new();
    while let Ok(t) = lx.next() {
        match t {
            Tok::End => break,
            Tok::Ident(n) => {
                if !out.contains(&n) {
                    out.push(n);
                }
            }
            _ => {}
        }
    }
    out.sort();
    out
}
