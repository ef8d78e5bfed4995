//! Text and JSON forms of a signomial.
//!
//! Text: a signed sum of terms `[coef] [*] x1^e1 * x2^e2 ...`, e.g.
//! `1 + x1^2 + x2^2 + x1^2*x2^2 - x1*x2`. Coefficients are decimal literals
//! (optionally with exponent) or fractions `p/q`; exponents may be negative.
//! JSON: `{"n": 2, "terms": [{"e": [1, 1], "c": -1.0}, ...]}` where `c` is a
//! number or a string holding a decimal or fraction.

use super::Signomial;
use crate::error::{Error, Result};
use crate::exact::{parse_decimal, q_from_f64, Q};
use crate::geometry::LatticePoint;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

struct Lexer {
    chars: Vec<char>,
    pos: usize,
}

impl Lexer {
    fn new(src: &str) -> Self {
        Lexer { chars: src.chars().collect(), pos: 0 }
    }

    fn location(&self, at: usize) -> (usize, usize) {
        let mut line = 1;
        let mut col = 1;
        for &c in &self.chars[..at.min(self.chars.len())] {
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        (line, col)
    }

    fn err(&self, at: usize, msg: impl Into<String>) -> Error {
        let (line, column) = self.location(at);
        Error::Parse { line, column, message: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<Q> {
        self.skip_ws();
        let start = self.pos;
        let mut end = start;
        let digit_or_dot = |c: char| c.is_ascii_digit() || c == '.';
        while end < self.chars.len() && digit_or_dot(self.chars[end]) {
            end += 1;
        }
        if end < self.chars.len() && matches!(self.chars[end], 'e' | 'E') {
            let mut k = end + 1;
            if k < self.chars.len() && matches!(self.chars[k], '+' | '-') {
                k += 1;
            }
            if k < self.chars.len() && self.chars[k].is_ascii_digit() {
                while k < self.chars.len() && self.chars[k].is_ascii_digit() {
                    k += 1;
                }
                end = k;
            }
        }
        let lit: String = self.chars[start..end].iter().collect();
        let mut v = parse_decimal(&lit).ok_or_else(|| self.err(start, format!("bad number '{lit}'")))?;
        self.pos = end;
        if self.peek() == Some('/') {
            let at = self.pos;
            self.pos += 1;
            let den = self.number()?;
            if den.is_zero() {
                return Err(self.err(at, "division by zero"));
            }
            v /= den;
        }
        Ok(v)
    }

    fn integer(&mut self) -> Result<i64> {
        let paren = self.eat('(');
        self.skip_ws();
        let start = self.pos;
        let neg = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        self.skip_ws();
        let ds = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let lit: String = self.chars[ds..self.pos].iter().collect();
        let v: i64 = lit.parse().map_err(|_| self.err(start, "expected an integer exponent"))?;
        if paren && !self.eat(')') {
            return Err(self.err(self.pos, "expected ')'"));
        }
        Ok(if neg { -v } else { v })
    }

    /// `x<k>[^e]`, returning (k - 1, e).
    fn factor(&mut self) -> Result<(usize, i64)> {
        self.skip_ws();
        let start = self.pos;
        if !self.eat('x') {
            return Err(self.err(start, "expected a variable x1, x2, ..."));
        }
        let ds = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let lit: String = self.chars[ds..self.pos].iter().collect();
        let k: usize = lit.parse().map_err(|_| self.err(start, "variable needs an index, e.g. x1"))?;
        if k == 0 {
            return Err(self.err(start, "variables are numbered from x1"));
        }
        let e = if self.eat('^') { self.integer()? } else { 1 };
        Ok((k - 1, e))
    }
}

struct RawTerm {
    at: usize,
    coef: Q,
    exps: BTreeMap<usize, i64>,
}

fn parse_terms(lx: &mut Lexer) -> Result<Vec<RawTerm>> {
    let mut out = Vec::new();
    let mut first = true;
    loop {
        let Some(c) = lx.peek() else {
            if first {
                return Err(lx.err(lx.pos, "empty polynomial"));
            }
            return Ok(out);
        };
        let at = lx.pos;
        let mut sign = Q::one();
        if c == '+' || c == '-' {
            lx.pos += 1;
            if c == '-' {
                sign = -sign;
            }
        } else if !first {
            return Err(lx.err(at, format!("expected '+' or '-', found '{c}'")));
        }
        first = false;
        let mut coef = Q::one();
        let mut exps = BTreeMap::new();
        let mut need_factor = true;
        match lx.peek() {
            Some(ch) if ch.is_ascii_digit() || ch == '.' => {
                coef = lx.number()?;
                need_factor = false;
                if lx.eat('*') {
                    need_factor = true;
                } else if lx.peek() == Some('x') {
                    need_factor = true;
                }
            }
            Some('x') => {}
            Some(ch) => return Err(lx.err(lx.pos, format!("unexpected '{ch}'"))),
            None => return Err(lx.err(lx.pos, "dangling sign")),
        }
        if need_factor {
            loop {
                let (k, e) = lx.factor()?;
                *exps.entry(k).or_insert(0) += e;
                if !lx.eat('*') {
                    break;
                }
            }
        }
        out.push(RawTerm { at, coef: sign * coef, exps });
    }
}

fn assemble(raw: Vec<RawTerm>, n: usize, lx: &Lexer) -> Result<Signomial> {
    let mut seen: BTreeMap<LatticePoint, usize> = BTreeMap::new();
    let mut terms = Vec::new();
    for t in raw {
        let mut e = vec![0i64; n];
        for (&k, &v) in &t.exps {
            if k >= n {
                return Err(lx.err(t.at, format!("variable x{} exceeds n = {n}", k + 1)));
            }
            e[k] = v;
        }
        let p = LatticePoint(e);
        if seen.insert(p.clone(), t.at).is_some() {
            return Err(lx.err(t.at, format!("duplicate monomial with exponent {p}")));
        }
        if t.coef.is_zero() {
            return Err(lx.err(t.at, "zero coefficient"));
        }
        terms.push((p, t.coef));
    }
    Signomial::from_exact(terms)
}

/// Parse the text form with an explicit number of variables (`None`: the
/// largest variable index that appears).
pub fn parse_polynomial(text: &str, n: Option<usize>) -> Result<Signomial> {
    let mut lx = Lexer::new(text);
    let raw = parse_terms(&mut lx)?;
    let max_var = raw.iter().flat_map(|t| t.exps.keys().copied()).max().map_or(0, |k| k + 1);
    let n = n.unwrap_or(max_var);
    if n == 0 {
        return Err(Error::Input("constant polynomial: no variables".into()));
    }
    assemble(raw, n, &lx)
}

/// Parse the text form, inferring the number of variables.
pub fn parse_text(text: &str) -> Result<Signomial> {
    parse_polynomial(text, None)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonPoly {
    n: usize,
    terms: Vec<JsonTerm>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonTerm {
    e: Vec<i64>,
    c: JsonCoef,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum JsonCoef {
    Num(f64),
    Text(String),
}

/// Parse the JSON form.
pub fn parse_json(text: &str) -> Result<Signomial> {
    let jp: JsonPoly = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if jp.n == 0 {
        return Err(Error::Input("n must be positive".into()));
    }
    let mut terms = Vec::new();
    for (i, t) in jp.terms.into_iter().enumerate() {
        if t.e.len() != jp.n {
            return Err(Error::Input(format!("term {i}: exponent has {} entries, n = {}", t.e.len(), jp.n)));
        }
        let c = match t.c {
            JsonCoef::Num(v) => q_from_f64(v).ok_or_else(|| Error::Input(format!("term {i}: bad coefficient")))?,
            JsonCoef::Text(s) => parse_coef_str(&s).ok_or_else(|| Error::Input(format!("term {i}: bad coefficient '{s}'")))?,
        };
        terms.push((LatticePoint(t.e), c));
    }
    let mut sorted: Vec<&LatticePoint> = terms.iter().map(|t| &t.0).collect();
    sorted.sort();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::Input(format!("duplicate monomial with exponent {}", w[0])));
    }
    Signomial::from_exact(terms)
}

fn parse_coef_str(s: &str) -> Option<Q> {
    match s.split_once('/') {
        Some((a, b)) => {
            let d = parse_decimal(b)?;
            (!d.is_zero()).then(|| parse_decimal(a).map(|n| n / d))?
        }
        None => parse_decimal(s),
    }
}

#[derive(Serialize)]
struct JsonOut {
    n: usize,
    terms: Vec<JsonTermOut>,
}

#[derive(Serialize)]
struct JsonTermOut {
    e: Vec<i64>,
    c: f64,
}

/// JSON form of `f` (float coefficients).
pub fn to_json(f: &Signomial) -> serde_json::Value {
    serde_json::to_value(JsonOut {
        n: f.n(),
        terms: f.terms().into_iter().map(|(p, c)| JsonTermOut { e: p.0, c }).collect(),
    })
    .expect("serializable")
}

/// Text form of `f`; coefficients print with round-trip precision.
pub fn to_text(f: &Signomial) -> String {
    let mut s = String::new();
    let exact = f.exact();
    for (i, (p, c)) in f.terms().into_iter().enumerate() {
        let neg = c < 0.0;
        if i == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let mag = match exact {
            Some(e) => e[i].abs().to_string(),
            None => format!("{:e}", c.abs()),
        };
        let mono: Vec<String> = p
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(k, &e)| if e == 1 { format!("x{}", k + 1) } else if e < 0 { format!("x{}^({e})", k + 1) } else { format!("x{}^{e}", k + 1) })
            .collect();
        if mono.is_empty() {
            s.push_str(&mag);
        } else if mag == "1" {
            s.push_str(&mono.join("*"));
        } else {
            s.push_str(&mag);
            s.push('*');
            s.push_str(&mono.join("*"));
        }
    }
    s
}
