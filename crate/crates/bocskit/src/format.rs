//! The line-oriented `.bocs` text format.
//!
//! ```text
//! vertices 3
//! solid a: 1 -> 2
//! dashed phi: 1 -> 2
//! relation b*a
//! d(c) = psi*a + b*phi
//! d(chi) = psi @ phi
//! ```

use bocs_core::bocs::display_poly;
use bocs_core::dg::{DgQuiver, DiffBiquiver, Poly, Word};
use bocs_core::koszul::{DualError, DualPresentation};
use bocs_core::scalar::{one, parse_q, Q};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

fn err<T>(line: usize, col: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, col, msg: msg.into() })
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '[' | ']' | '.' | '\'')
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
    base: usize,
}

impl<'a> Cursor<'a> {
    fn col(&self) -> usize {
        self.base + self.text[..self.pos].chars().count() + 1
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if !f(c) {
                break;
            }
            self.pos += c.len_utf8();
        }
        &self.text[start..self.pos]
    }

    fn done(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.text.len()
    }
}

fn letter(q: &DgQuiver, name: &str) -> Option<Word> {
    if let Some(g) = q.index(name) {
        return Some(q.gen_word(g));
    }
    let v: usize = name.strip_prefix('e')?.parse().ok()?;
    (1..=q.n).contains(&v).then(|| Word::trivial(v))
}

fn parse_expr(q: &DgQuiver, cur: &mut Cursor) -> Result<Vec<(Word, Q, usize)>, ParseError> {
    let mut terms = Vec::new();
    if cur.text.trim() == "0" {
        return Ok(terms);
    }
    let mut first = true;
    loop {
        cur.skip_ws();
        let start = cur.col();
        let mut sign = one();
        if cur.eat('-') {
            sign = -sign;
        } else if !cur.eat('+') && !first {
            return err(cur.line, cur.col(), "expected '+' or '-'");
        }
        first = false;
        cur.skip_ws();
        let mut coeff = one();
        if cur.peek().is_some_and(|c| c.is_ascii_digit()) {
            let col = cur.col();
            let num = cur.take_while(|c| c.is_ascii_digit() || c == '/');
            coeff = match parse_q(num) {
                Some(c) => c,
                None => return err(cur.line, col, format!("bad coefficient '{num}'")),
            };
            cur.skip_ws();
            let _ = cur.eat('*');
            if cur.done() || matches!(cur.peek(), Some('+' | '-')) {
                return err(cur.line, cur.col(), "coefficient without a path");
            }
        }
        let mut word: Option<Word> = None;
        loop {
            cur.skip_ws();
            let col = cur.col();
            let name = cur.take_while(is_name_char);
            if name.is_empty() {
                return err(cur.line, col, "expected an arrow name");
            }
            let Some(l) = letter(q, name) else {
                return err(cur.line, col, format!("unknown arrow '{name}'"));
            };
            word = match word {
                None => Some(l),
                Some(w) => match w.compose(&l) {
                    Some(x) => Some(x),
                    None => return err(cur.line, col, format!("'{name}' does not compose with the preceding factors")),
                },
            };
            if !(cur.eat('*') || cur.eat('@')) {
                break;
            }
        }
        terms.push((word.expect("at least one factor"), sign * coeff, start));
        if cur.done() {
            break;
        }
    }
    Ok(terms)
}

fn parse_arrow(line: usize, rest: &str, base: usize) -> Result<(String, usize, usize), ParseError> {
    let Some((name, ends)) = rest.split_once(':') else {
        return err(line, base + 1, "expected '<name>: <source> -> <target>'");
    };
    let name = name.trim();
    if name.is_empty() || !name.chars().all(is_name_char) {
        return err(line, base + 1, format!("bad arrow name '{name}'"));
    }
    let col = base + rest.find(':').unwrap_or(0) + 2;
    let Some((s, t)) = ends.split_once("->") else {
        return err(line, col, "expected '<source> -> <target>'");
    };
    let parse = |x: &str| x.trim().parse::<usize>().ok();
    match (parse(s), parse(t)) {
        (Some(s), Some(t)) => Ok((name.to_string(), s, t)),
        _ => err(line, col, "vertices must be positive integers"),
    }
}

/// Parses a `.bocs` document. Names, endpoints and degrees are checked;
/// `∂² = 0` is left to [`bocs_core::bocs::validate`].
pub fn parse_biquiver(text: &str) -> Result<DiffBiquiver, ParseError> {
    let mut q: Option<DgQuiver> = None;
    let mut diffs = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("");
        let indent = body.len() - body.trim_start().len();
        let body = body.trim();
        if body.is_empty() {
            continue;
        }
        let (head, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
        let rest_col = indent + head.len() + 1 + (rest.len() - rest.trim_start().len());
        let rest = rest.trim_start();
        if head == "vertices" {
            if q.is_some() {
                return err(line, 1, "vertices declared twice");
            }
            match rest.trim().parse::<usize>() {
                Ok(n) if n > 0 => q = Some(DgQuiver::new(n)),
                _ => return err(line, rest_col + 1, "expected a positive vertex count"),
            }
            continue;
        }
        let Some(quiver) = q.as_mut() else {
            return err(line, indent + 1, "'vertices' must come first");
        };
        match head {
            "solid" | "dashed" => {
                let (name, s, t) = parse_arrow(line, rest, rest_col)?;
                if s == 0 || t == 0 || s > quiver.n || t > quiver.n {
                    return err(line, rest_col + 1, format!("arrow {name} has a vertex outside 1..={}", quiver.n));
                }
                if s >= t {
                    return err(line, rest_col + 1, format!("arrow {name}: {s} -> {t} violates directedness"));
                }
                if quiver.index(&name).is_some() {
                    return err(line, rest_col + 1, format!("arrow {name} declared twice"));
                }
                quiver.add_gen(&name, s, t, if head == "solid" { 0 } else { 1 });
            }
            "relation" => diffs.push((line, None, rest.to_string(), rest_col)),
            _ if head.starts_with("d(") || body.starts_with("d(") => {
                let Some(close) = body.find(')') else {
                    return err(line, indent + 1, "expected 'd(<arrow>) = <terms>'");
                };
                let name = body[2..close].trim().to_string();
                let after = &body[close + 1..];
                let Some(eq) = after.find('=') else {
                    return err(line, indent + close + 2, "expected '='");
                };
                let expr = after[eq + 1..].to_string();
                let col = indent + close + 1 + eq + 1;
                diffs.push((line, Some((name, indent + 3)), expr, col));
            }
            _ => return err(line, indent + 1, format!("unknown directive '{head}'")),
        }
    }
    let Some(mut q) = q else {
        return err(1, 1, "missing 'vertices' line");
    };
    for (line, target, expr, col) in diffs {
        let mut cur = Cursor { text: &expr, pos: 0, line, base: col };
        let terms = parse_expr(&q, &mut cur)?;
        let mut p = Poly::zero();
        match target {
            None => {
                let key = terms.first().map(|(w, _, _)| (w.src, w.tgt, w.deg(&q.gens)));
                for (w, c, tcol) in terms {
                    if w.is_trivial() || w.deg(&q.gens) != 0 {
                        return err(line, tcol, "relations must be combinations of nontrivial solid paths");
                    }
                    if Some((w.src, w.tgt, 0)) != key {
                        return err(line, tcol, "relation terms have different endpoints");
                    }
                    p.add_term(w, c);
                }
                q.relations.push(p);
            }
            Some((name, ncol)) => {
                let Some(g) = q.index(&name) else {
                    return err(line, ncol, format!("unknown arrow '{name}'"));
                };
                let gen = q.gens[g].clone();
                for (w, c, tcol) in terms {
                    if w.src != gen.src || w.tgt != gen.tgt {
                        return err(line, tcol, format!("term does not go {} -> {} like {name}", gen.src, gen.tgt));
                    }
                    if w.deg(&q.gens) != gen.deg + 1 {
                        return err(line, tcol, format!("term has degree {}, expected {}", w.deg(&q.gens), gen.deg + 1));
                    }
                    p.add_term(w, c);
                }
                if !q.diff[g].is_zero() {
                    return err(line, 1, format!("d({name}) given twice"));
                }
                q.diff[g] = p;
            }
        }
    }
    Ok(q)
}

/// Writes a biquiver; [`parse_biquiver`] reads the result back unchanged.
pub fn write_biquiver(q: &DiffBiquiver) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "vertices {}", q.n);
    for g in &q.gens {
        let kind = if g.deg == 0 { "solid" } else { "dashed" };
        let _ = writeln!(s, "{kind} {}: {} -> {}", g.name, g.src, g.tgt);
    }
    for r in &q.relations {
        let _ = writeln!(s, "relation {}", display_poly(&q.gens, r));
    }
    for (g, d) in q.diff.iter().enumerate() {
        if !d.is_zero() {
            let _ = writeln!(s, "d({}) = {}", q.gens[g].name, display_poly(&q.gens, d));
        }
    }
    s
}

/// Writes a dual presentation as a biquiver with relations.
pub fn write_presentation(p: &DualPresentation) -> Result<String, DualError> {
    let q = p.as_bocs()?;
    let mut s = String::new();
    if p.ringel {
        let _ = writeln!(s, "# Ringel dual; vertex i here is vertex {}-i of the input", q.n + 1);
    } else {
        s.push_str("# Koszul dual\n");
    }
    s.push_str(&write_biquiver(&q));
    Ok(s)
}
