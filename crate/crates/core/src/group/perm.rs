use std::fmt;

use crate::error::{Error, Result};

/// A permutation of `{0..degree}` stored as its image array.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation((0..degree as u32).collect())
    }

    /// From 0-based images; rejects non-bijections.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(Error::Invalid(format!("{images:?} is not a permutation")));
            }
        }
        Ok(Permutation(images.into_iter().map(|i| i as u32).collect()))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&i| other.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Permutation(inv)
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation on points `1..=degree`; the identity prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let pts: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
            write!(f, "({})", pts.join(","))?;
        }
        Ok(())
    }
}

/// Parses cycle notation over points `1..=degree`, e.g. `(1,2,3)(4,5)` or
/// `(1 2 3)`. Cycles are composed left to right.
pub fn parse_cycles(degree: usize, s: &str) -> Result<Permutation> {
    let mut perm = Permutation::identity(degree);
    let bad = |msg: &str| Error::Invalid(format!("cycle notation {s:?}: {msg}"));
    let mut rest = s.trim();
    while !rest.is_empty() {
        if !rest.starts_with('(') {
            return Err(bad("expected '('"));
        }
        let close = rest.find(')').ok_or_else(|| bad("unclosed cycle"))?;
        let body = &rest[1..close];
        let pts: Vec<usize> = body
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>().map_err(|_| bad("non-numeric point")))
            .collect::<Result<_>>()?;
        let mut images: Vec<usize> = (0..degree).collect();
        let mut seen = vec![false; degree];
        for (k, &p) in pts.iter().enumerate() {
            if p == 0 || p > degree {
                return Err(bad("point out of range"));
            }
            if std::mem::replace(&mut seen[p - 1], true) {
                return Err(bad("repeated point in a cycle"));
            }
            images[p - 1] = pts[(k + 1) % pts.len()] - 1;
        }
        perm = perm.then(&Permutation::from_images(images)?);
        rest = rest[close + 1..].trim_start();
    }
    Ok(perm)
}
