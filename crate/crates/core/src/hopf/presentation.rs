//! Finite presentations of nilpotent groups in the plain-text format
//!
//! ```text
//! # dihedral group of order 8
//! gens: x y
//! rels: x^4, y^2, (x y)^2
//! class: 2
//! ```
//!
//! Relators are words in the generators: juxtaposition multiplies, `u^n`
//! takes powers (negative allowed), `(..)` groups, `[u,v] = u^-1 v^-1 u v`
//! and `[u,v,w] = [[u,v],w]`, `1` is the empty word and `u = v` stands for the
//! relator `u v^-1`. A word such as `xy` is read letter by letter when every
//! letter is a one-character generator name and `xy` itself is not one.

use std::fmt;

use num_bigint::BigInt;

use crate::abelian::{cokernel_structure, FgAbelianGroup, IntMatrix};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::nilpotent::{FreeNilGroup, NilWord, PcSubgroup};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Word {
    Gen(usize),
    Seq(Vec<Word>),
    Pow(Box<Word>, i64),
    Comm(Box<Word>, Box<Word>),
}

impl Word {
    /// Evaluates the word in any group given by its operations.
    pub fn eval<T: Clone>(
        &self,
        gens: &[T],
        one: &T,
        mul: &dyn Fn(&T, &T) -> T,
        inv: &dyn Fn(&T) -> T,
    ) -> T {
        match self {
            Word::Gen(i) => gens[*i].clone(),
            Word::Seq(ws) => ws.iter().fold(one.clone(), |acc, w| {
                mul(&acc, &w.eval(gens, one, mul, inv))
            }),
            Word::Pow(w, n) => {
                let mut base = w.eval(gens, one, mul, inv);
                if *n < 0 {
                    base = inv(&base);
                }
                let mut e = n.unsigned_abs();
                let mut acc = one.clone();
                while e > 0 {
                    if e & 1 == 1 {
                        acc = mul(&acc, &base);
                    }
                    e >>= 1;
                    if e > 0 {
                        base = mul(&base, &base);
                    }
                }
                acc
            }
            Word::Comm(a, b) => {
                let (a, b) = (a.eval(gens, one, mul, inv), b.eval(gens, one, mul, inv));
                mul(&mul(&inv(&a), &inv(&b)), &mul(&a, &b))
            }
        }
    }

    fn display(&self, names: &[String], out: &mut String) {
        match self {
            Word::Gen(i) => out.push_str(&names[*i]),
            Word::Seq(ws) if ws.is_empty() => out.push('1'),
            Word::Seq(ws) => {
                for (k, w) in ws.iter().enumerate() {
                    if k > 0 {
                        out.push(' ');
                    }
                    w.display(names, out);
                }
            }
            Word::Pow(w, n) => {
                let wrap =
                    matches!(**w, Word::Seq(ref v) if v.len() > 1) || matches!(**w, Word::Pow(..));
                if wrap {
                    out.push('(');
                }
                w.display(names, out);
                if wrap {
                    out.push(')');
                }
                out.push_str(&format!("^{n}"));
            }
            Word::Comm(a, b) => {
                out.push('[');
                a.display(names, out);
                out.push(',');
                b.display(names, out);
                out.push(']');
            }
        }
    }
}

/// A presentation `⟨gens | rels⟩` together with a declared nilpotency class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilPresentation {
    names: Vec<String>,
    relators: Vec<Word>,
    class: usize,
}

impl NilPresentation {
    /// Builds and verifies a presentation: the normal closure of the relators
    /// in `F(d, c+1)` must contain `γ_{c+1}`.
    pub fn new(names: Vec<String>, relators: Vec<Word>, class: usize) -> Result<Self> {
        let p = Self::unverified(names, relators, class)?;
        p.verify_class()?;
        Ok(p)
    }

    pub fn unverified(names: Vec<String>, relators: Vec<Word>, class: usize) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::Invalid(
                "a presentation needs at least one generator".into(),
            ));
        }
        for (i, n) in names.iter().enumerate() {
            if !is_ident(n) || n == "1" {
                return Err(Error::Invalid(format!("bad generator name {n:?}")));
            }
            if names[..i].contains(n) {
                return Err(Error::Invalid(format!("generator {n} listed twice")));
            }
        }
        Ok(NilPresentation {
            names,
            relators,
            class,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let p = Self::parse_unverified(text)?;
        p.verify_class()?;
        Ok(p)
    }

    pub fn parse_unverified(text: &str) -> Result<Self> {
        let mut names: Option<Vec<String>> = None;
        let mut class: Option<usize> = None;
        let mut rel_lines: Vec<(usize, &str)> = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line_no = k + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, rest) = line
                .split_once(':')
                .ok_or_else(|| parse_err(line_no, "expected `key: value`"))?;
            match key.trim() {
                "gens" => {
                    if names.is_some() {
                        return Err(parse_err(line_no, "duplicate gens line"));
                    }
                    names = Some(
                        rest.split(|c: char| c.is_whitespace() || c == ',')
                            .filter(|s| !s.is_empty())
                            .map(String::from)
                            .collect(),
                    );
                }
                "rels" => rel_lines.push((line_no, rest)),
                "class" => {
                    if class.is_some() {
                        return Err(parse_err(line_no, "duplicate class line"));
                    }
                    class =
                        Some(rest.trim().parse().map_err(|_| {
                            parse_err(line_no, "class must be a non-negative integer")
                        })?);
                }
                other => return Err(parse_err(line_no, &format!("unknown key {other:?}"))),
            }
        }
        let names = names.ok_or_else(|| parse_err(0, "missing gens line"))?;
        let class = class.ok_or_else(|| parse_err(0, "missing class line"))?;
        let mut relators = Vec::new();
        for (line_no, text) in rel_lines {
            let mut p = Parser::new(text, &names).map_err(|m| parse_err(line_no, &m))?;
            relators.extend(p.relators().map_err(|m| parse_err(line_no, &m))?);
        }
        Self::unverified(names, relators, class).map_err(|e| match e {
            Error::Invalid(m) => parse_err(0, &m),
            e => e,
        })
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn class(&self) -> usize {
        self.class
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// The relators as elements of a free nilpotent group of the same rank.
    pub fn relator_words(&self, g: &FreeNilGroup) -> Vec<NilWord> {
        assert_eq!(
            g.rank(),
            self.rank(),
            "free group rank must match the presentation"
        );
        let gens: Vec<NilWord> = (0..g.rank()).map(|i| g.generator(i)).collect();
        self.relators
            .iter()
            .map(|r| r.eval(&gens, &g.identity(), &|a, b| a.mul(b), &|a| a.inv()))
            .collect()
    }

    /// Values of the relators in a finite group, generators sent to `images`.
    pub fn relator_values(&self, g: &FiniteGroup, images: &[usize]) -> Vec<usize> {
        assert_eq!(images.len(), self.rank(), "one image per generator");
        self.relators
            .iter()
            .map(|r| r.eval(images, &g.identity(), &|&a, &b| g.mul(a, b), &|&a| g.inv(a)))
            .collect()
    }

    /// `H_1` of the presented group: `Z^d` modulo the exponent-sum vectors of
    /// the relators.
    pub fn abelianization(&self) -> FgAbelianGroup {
        let d = self.rank();
        let add = |a: &Vec<i64>, b: &Vec<i64>| a.iter().zip(b).map(|(x, y)| x + y).collect();
        let neg = |a: &Vec<i64>| a.iter().map(|x| -x).collect();
        let gens: Vec<Vec<i64>> = (0..d)
            .map(|i| (0..d).map(|j| i64::from(i == j)).collect())
            .collect();
        let rows: Vec<Vec<i64>> = self
            .relators
            .iter()
            .map(|r| r.eval(&gens, &vec![0; d], &add, &neg))
            .collect();
        cokernel_structure(&IntMatrix::from_rows(d, &rows))
    }

    /// Checks that the presented group has class at most the declared one.
    pub fn verify_class(&self) -> Result<()> {
        let f = FreeNilGroup::new(self.rank(), self.class + 1)?;
        let r = PcSubgroup::normal_closure_of_words(&f, &self.relator_words(&f));
        if PcSubgroup::lower_central(&f, self.class + 1).is_subgroup_of(&r) {
            Ok(())
        } else {
            Err(Error::ClassVerification(self.class))
        }
    }

    /// Order of the presented group, `None` when it is infinite. Only
    /// meaningful for a verified presentation.
    pub fn order(&self) -> Option<BigInt> {
        let f = FreeNilGroup::new(self.rank(), self.class + 1).ok()?;
        let r = PcSubgroup::normal_closure_of_words(&f, &self.relator_words(&f));
        (r.len() == f.len()).then(|| r.leading_exponents().iter().product())
    }

    /// The same presentation with a different declared class (unverified).
    pub fn with_class(&self, class: usize) -> Self {
        NilPresentation {
            class,
            ..self.clone()
        }
    }
}

/// Canonical text form, which parses back to an equal presentation.
impl fmt::Display for NilPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "gens: {}", self.names.join(" "))?;
        let rels: Vec<String> = self
            .relators
            .iter()
            .map(|r| {
                let mut s = String::new();
                r.display(&self.names, &mut s);
                s
            })
            .collect();
        writeln!(f, "rels: {}", rels.join(", "))?;
        writeln!(f, "class: {}", self.class)
    }
}

fn parse_err(line: usize, msg: &str) -> Error {
    Error::Parse {
        line,
        msg: msg.to_string(),
    }
}

fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    Sym(char),
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    names: &'a [String],
}

impl<'a> Parser<'a> {
    fn new(text: &str, names: &'a [String]) -> std::result::Result<Self, String> {
        let mut toks = Vec::new();
        let cs: Vec<char> = text.chars().collect();
        let mut i = 0;
        while i < cs.len() {
            let c = cs[i];
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                    i += 1;
                }
                toks.push(Tok::Ident(cs[start..i].iter().collect()));
            } else if c.is_ascii_digit() {
                let start = i;
                while i < cs.len() && cs[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = cs[start..i].iter().collect();
                toks.push(Tok::Int(
                    s.parse().map_err(|_| format!("number {s} is too large"))?,
                ));
            } else if "^()[],=-".contains(c) {
                toks.push(Tok::Sym(c));
                i += 1;
            } else {
                return Err(format!("unexpected character {c:?}"));
            }
        }
        Ok(Parser {
            toks,
            pos: 0,
            names,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> std::result::Result<(), String> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(format!("expected {c:?}"))
        }
    }

    fn relators(&mut self) -> std::result::Result<Vec<Word>, String> {
        let mut out = Vec::new();
        if self.peek().is_none() {
            return Ok(out);
        }
        loop {
            let lhs = self.word()?;
            let rel = if self.eat('=') {
                let rhs = self.word()?;
                Word::Seq(vec![lhs, Word::Pow(Box::new(rhs), -1)])
            } else {
                lhs
            };
            out.push(rel);
            if self.peek().is_none() {
                return Ok(out);
            }
            self.expect(',')?;
        }
    }

    fn word(&mut self) -> std::result::Result<Word, String> {
        let mut factors = Vec::new();
        while let Some(t) = self.peek() {
            match t {
                Tok::Ident(_) | Tok::Int(_) | Tok::Sym('(') | Tok::Sym('[') => {
                    factors.push(self.factor()?)
                }
                _ => break,
            }
        }
        if factors.is_empty() {
            return Err("expected a word".into());
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            Word::Seq(factors)
        })
    }

    fn factor(&mut self) -> std::result::Result<Word, String> {
        let mut w = self.atom()?;
        while self.eat('^') {
            let neg = self.eat('-');
            let n = match self.peek() {
                Some(Tok::Int(n)) => *n,
                _ => return Err("expected an integer exponent".into()),
            };
            self.pos += 1;
            w = Word::Pow(Box::new(w), if neg { -n } else { n });
        }
        Ok(w)
    }

    fn atom(&mut self) -> std::result::Result<Word, String> {
        match self.peek().cloned() {
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                self.generator(&s)
            }
            Some(Tok::Int(1)) => {
                self.pos += 1;
                Ok(Word::Seq(Vec::new()))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let w = self.word()?;
                self.expect(')')?;
                Ok(w)
            }
            Some(Tok::Sym('[')) => {
                self.pos += 1;
                let mut w = self.word()?;
                self.expect(',')?;
                loop {
                    let v = self.word()?;
                    w = Word::Comm(Box::new(w), Box::new(v));
                    if !self.eat(',') {
                        break;
                    }
                }
                self.expect(']')?;
                Ok(w)
            }
            Some(t) => Err(format!("unexpected token {t:?}")),
            None => Err("unexpected end of relators".into()),
        }
    }

    fn generator(&self, s: &str) -> std::result::Result<Word, String> {
        if let Some(i) = self.names.iter().position(|n| n == s) {
            return Ok(Word::Gen(i));
        }
        let letters: Option<Vec<Word>> = s
            .chars()
            .map(|c| {
                self.names
                    .iter()
                    .position(|n| n.len() == c.len_utf8() && n.starts_with(c))
                    .map(Word::Gen)
            })
            .collect();
        match letters {
            Some(ws) => Ok(Word::Seq(ws)),
            None => Err(format!("unknown generator {s:?}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::named_group;

    #[test]
    fn parses_the_shipped_formats() {
        let p = NilPresentation::parse("# comment\ngens: x y\nrels: x^4, y^2, (x y)^2\nclass: 2\n")
            .unwrap();
        assert_eq!(p.rank(), 2);
        assert_eq!(p.relators().len(), 3);
        assert_eq!(
            p.relators()[2],
            Word::Pow(Box::new(Word::Seq(vec![Word::Gen(0), Word::Gen(1)])), 2)
        );
        let again = NilPresentation::parse(&p.to_string()).unwrap();
        assert_eq!(again, p);
    }

    #[test]
    fn syntax_variants() {
        let names = vec!["x".to_string(), "y".to_string()];
        let mut p = Parser::new("xy^-1, [x,y,x], x = y, 1, x^2^3", &names).unwrap();
        let r = p.relators().unwrap();
        // the exponent binds to the whole identifier token
        assert_eq!(
            r[0],
            Word::Pow(Box::new(Word::Seq(vec![Word::Gen(0), Word::Gen(1)])), -1)
        );
        assert_eq!(
            r[1],
            Word::Comm(
                Box::new(Word::Comm(Box::new(Word::Gen(0)), Box::new(Word::Gen(1)))),
                Box::new(Word::Gen(0))
            )
        );
        assert_eq!(
            r[2],
            Word::Seq(vec![Word::Gen(0), Word::Pow(Box::new(Word::Gen(1)), -1)])
        );
        assert_eq!(r[3], Word::Seq(vec![]));
        assert_eq!(
            r[4],
            Word::Pow(Box::new(Word::Pow(Box::new(Word::Gen(0)), 2)), 3)
        );
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            NilPresentation::parse("gens: x\nrels: y\nclass: 1"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            NilPresentation::parse("gens: x\nrels: x^\nclass: 1"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            NilPresentation::parse("gens: x\nrels: x^2"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            NilPresentation::parse("gens: x x\nrels: x\nclass: 1"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            NilPresentation::parse("gens: x\nrels: (x\nclass: 1"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            NilPresentation::parse("gens: x\nfoo: 1\nclass: 1"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn class_verification() {
        // D4 has class 2, not 1
        let text = "gens: x y\nrels: x^4, y^2, (x y)^2\nclass: 1";
        assert_eq!(
            NilPresentation::parse(text),
            Err(Error::ClassVerification(1))
        );
        // the free group of rank 2 is not nilpotent
        assert_eq!(
            NilPresentation::parse("gens: x y\nrels:\nclass: 3"),
            Err(Error::ClassVerification(3))
        );
        assert!(NilPresentation::parse("gens: x\nrels:\nclass: 1").is_ok());
    }

    #[test]
    fn relators_hold_in_the_named_groups() {
        for entry in crate::corpus::corpus() {
            let Some(text) = entry.presentation_text() else {
                continue;
            };
            let p = NilPresentation::parse(text).unwrap();
            let g = named_group(&entry.name).unwrap();
            assert_eq!(p.order(), Some(g.order().into()), "{}", entry.name);
            // some generating tuple of the right length satisfies the relators
            // and generates g
            let found = tuples(g.order(), p.rank()).any(|t| {
                p.relator_values(&g, &t).iter().all(|&v| v == g.identity())
                    && crate::group::Subgroup::generated(&g, &t).order() == g.order()
            });
            assert!(found, "{}", entry.name);
        }
    }

    fn tuples(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
        (0..n.pow(k as u32)).map(move |mut x| {
            (0..k)
                .map(|_| {
                    let d = x % n;
                    x /= n;
                    d
                })
                .collect()
        })
    }
}
