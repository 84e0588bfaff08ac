//! Human-writable element literals.
//!
//! An element is a polynomial expression with integer coefficients in the
//! ring's generators. Walking the presentation tower from the top, the
//! quotient-layer generators are named `a`, `x`, `y`, `z` in turn and a
//! truncated layer's uniformizer is `u`. `b` abbreviates `a^2`, so over
//! `F_4` the literals `a` and `b` are the two primitive elements
//! (`a·b = a + b = 1`).
//!
//! Examples: `3`, `1+2a`, `a^2+a`, `(1+x)*a`, `2u`.

use crate::error::{Error, Result};
use crate::ring::{ChainRing, Elem, Layer};

const QUOTIENT_NAMES: [&str; 4] = ["a", "x", "y", "z"];

/// Variable names with their values in `ring`, top layer first.
pub fn variables(ring: &ChainRing) -> Vec<(String, Elem)> {
    let mut out = Vec::new();
    let mut names = QUOTIENT_NAMES.iter();
    let mut cur = ring.clone();
    loop {
        let next = match cur.layer() {
            Layer::Zmod { .. } => break,
            Layer::Quotient { base, .. } => {
                let name = names
                    .next()
                    .map_or_else(|| format!("g{}", out.len()), |n| n.to_string());
                out.push((name, cur.generator().expect("generator")));
                base.clone()
            }
            Layer::Truncated { field } => {
                out.push(("u".to_string(), cur.generator().expect("generator")));
                field.clone()
            }
        };
        cur = next;
    }
    out
}

pub fn format_element(ring: &ChainRing, x: Elem) -> String {
    let names: Vec<String> = variables(ring).into_iter().map(|(n, _)| n).collect();
    format_in(ring, x, &names)
}

fn is_integer(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

fn format_in(ring: &ChainRing, x: Elem, names: &[String]) -> String {
    let (sub, var) = match ring.layer() {
        Layer::Zmod { .. } => return x.0.to_string(),
        Layer::Quotient { base, .. } => (base.clone(), &names[0]),
        Layer::Truncated { field } => (field.clone(), &names[0]),
    };
    let mut terms = Vec::new();
    for (i, c) in ring.coefficients(x).into_iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let cs = format_in(&sub, c, &names[1..]);
        if i == 0 {
            terms.push(cs);
            continue;
        }
        let mono = if i == 1 {
            var.clone()
        } else {
            format!("{var}^{i}")
        };
        let term = if cs == "1" {
            mono
        } else if is_integer(&cs) {
            format!("{cs}{mono}")
        } else if cs.contains('+') {
            format!("({cs})*{mono}")
        } else {
            format!("{cs}*{mono}")
        };
        terms.push(term);
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(i64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Open,
    Close,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => {}
            '+' => out.push(Token::Plus),
            '-' => out.push(Token::Minus),
            '*' => out.push(Token::Star),
            '^' => out.push(Token::Caret),
            '(' => out.push(Token::Open),
            ')' => out.push(Token::Close),
            d if d.is_ascii_digit() => {
                let start = i;
                while i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..=i].iter().collect();
                let v = digits
                    .parse()
                    .map_err(|_| Error::Parse(format!("integer `{digits}` too large")))?;
                out.push(Token::Int(v));
            }
            l if l.is_ascii_alphabetic() => {
                let start = i;
                while i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                    i += 1;
                }
                out.push(Token::Ident(chars[start..=i].iter().collect()));
            }
            other => {
                return Err(Error::Parse(format!(
                    "unexpected character `{other}` in element literal `{text}`"
                )))
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    ring: &'a ChainRing,
    vars: Vec<(String, Elem)>,
    tokens: Vec<Token>,
    pos: usize,
    text: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn error(&self, what: &str) -> Error {
        Error::Parse(format!("{what} in element literal `{}`", self.text))
    }

    fn expr(&mut self) -> Result<Elem> {
        let r = self.ring;
        let negate = if self.peek() == Some(&Token::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        let mut acc = self.term()?;
        if negate {
            acc = r.neg(acc);
        }
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = r.add(acc, t);
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = r.sub(acc, t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Elem> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = self.ring.mul(acc, f);
                }
                Some(Token::Int(_)) | Some(Token::Ident(_)) | Some(Token::Open) => {
                    let f = self.factor()?;
                    acc = self.ring.mul(acc, f);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Elem> {
        let base = self.atom()?;
        if self.peek() == Some(&Token::Caret) {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Token::Int(e)) if e >= 0 => {
                    self.pos += 1;
                    Ok(self.ring.pow(base, e as u64))
                }
                _ => Err(self.error("expected a nonnegative exponent after `^`")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Elem> {
        match self.peek().cloned() {
            Some(Token::Int(v)) => {
                self.pos += 1;
                Ok(self.ring.from_int(v))
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                self.variable(&name)
            }
            Some(Token::Open) => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(&Token::Close) {
                    return Err(self.error("missing `)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.error("expected a number, generator or `(`")),
        }
    }

    fn variable(&self, name: &str) -> Result<Elem> {
        if let Some((_, v)) = self.vars.iter().find(|(n, _)| n == name) {
            return Ok(*v);
        }
        if name == "b" {
            if let Some((_, a)) = self.vars.iter().find(|(n, _)| n == "a") {
                return Ok(self.ring.mul(*a, *a));
            }
        }
        Err(Error::Parse(format!(
            "unknown generator `{name}` for ring {}",
            self.ring.label()
        )))
    }
}

pub fn parse_element(ring: &ChainRing, text: &str) -> Result<Elem> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(Error::Parse("empty element literal".into()));
    }
    let mut parser = Parser {
        ring,
        vars: variables(ring),
        tokens,
        pos: 0,
        text,
    };
    let v = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(parser.error("trailing input"));
    }
    Ok(v)
}

/// Splits on `sep` at parenthesis depth zero.
pub(crate) fn split_top_level(text: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&text[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&text[start..]);
    out
}

/// Parses a vector literal such as `(1,0,a)`.
pub fn parse_vector(ring: &ChainRing, text: &str) -> Result<Vec<Elem>> {
    let t = text.trim();
    let inner = t
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("vector literal `{t}` must be parenthesised")))?;
    split_top_level(inner, ',')
        .into_iter()
        .map(|e| parse_element(ring, e))
        .collect()
}

/// Parses `;`-separated vector literals, e.g. `(1,0,a);(0,1,b)`.
pub fn parse_rows(ring: &ChainRing, text: &str) -> Result<Vec<Vec<Elem>>> {
    split_top_level(text, ';')
        .into_iter()
        .filter(|r| !r.trim().is_empty())
        .map(|r| parse_vector(ring, r))
        .collect()
}

pub fn format_vector(ring: &ChainRing, v: &[Elem]) -> String {
    let parts: Vec<String> = v.iter().map(|&x| format_element(ring, x)).collect();
    format!("({})", parts.join(","))
}
