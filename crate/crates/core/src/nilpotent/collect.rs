//! Collection from the left over the polycyclic presentation of `F(d, c)`.
//!
//! This is a second, independent route to products: it only uses the
//! conjugation relations `b_k^{b_j^{±1}}` (computed once) and moves letters
//! one at a time, so it is slow for large exponents but serves as a check on
//! the Magnus-based arithmetic.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{FreeNilGroup, NilWord};
use crate::error::{Error, Result};

type Letters = Vec<(usize, i64)>;

pub struct Collector {
    group: FreeNilGroup,
    /// `conj[k][j]` for `j < k`: normal forms of `b_j^{-1} b_k b_j` and `b_j b_k b_j^{-1}`.
    conj: Vec<Vec<[Letters; 2]>>,
}

const MAX_BASIS: usize = 300;

fn letters(w: &NilWord) -> Option<Letters> {
    w.coords()
        .iter()
        .enumerate()
        .filter(|(_, e)| !num_traits::Zero::is_zero(*e))
        .map(|(i, e)| e.to_i64().map(|e| (i, e)))
        .collect()
}

impl Collector {
    pub fn new(group: &FreeNilGroup) -> Result<Self> {
        if group.len() > MAX_BASIS {
            return Err(Error::SizeLimit {
                what: "collector basis",
                size: group.len(),
                limit: MAX_BASIS,
            });
        }
        let m = group.len();
        let mut conj = Vec::with_capacity(m);
        for k in 0..m {
            let bk = group.basis_element(k);
            let mut row = Vec::with_capacity(k);
            for j in 0..k {
                if group.weight(j) + group.weight(k) > group.class() {
                    row.push([vec![(k, 1)], vec![(k, 1)]]);
                    continue;
                }
                let bj = group.basis_element(j);
                let plus = letters(&bk.conj(&bj)).expect("small conjugation relation");
                let minus = letters(&bk.conj(&bj.inv())).expect("small conjugation relation");
                row.push([plus, minus]);
            }
            conj.push(row);
        }
        Ok(Collector {
            group: group.clone(),
            conj,
        })
    }

    /// Collects the word `u · x_1^{e_1} x_2^{e_2} ...` (letters are basis
    /// indices with exponents) into normal form.
    pub fn collect(&self, start: &NilWord, word: &[(usize, i64)]) -> Result<NilWord> {
        let m = self.group.len();
        let mut acc: Vec<i64> = start
            .coords()
            .iter()
            .map(|x| x.to_i64())
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Invalid("collection needs machine-size exponents".into()))?;
        let mut stack: Vec<(usize, i64)> = Vec::new();
        push_expanded(&mut stack, word.iter().copied());
        while let Some((j, eps)) = stack.pop() {
            let suffix: Vec<(usize, i64)> = (j + 1..m)
                .filter(|&k| acc[k] != 0)
                .map(|k| (k, acc[k]))
                .collect();
            for &(k, _) in &suffix {
                acc[k] = 0;
            }
            acc[j] += eps;
            if suffix.is_empty() {
                continue;
            }
            // b_k^a b_j^eps = b_j^eps (b_k^{b_j^eps})^a
            let side = if eps > 0 { 0 } else { 1 };
            let mut pending: Vec<(usize, i64)> = Vec::new();
            for (k, a) in suffix {
                let c = &self.conj[k][j][side];
                for _ in 0..a.abs() {
                    if a > 0 {
                        pending.extend(c.iter().copied());
                    } else {
                        pending.extend(c.iter().rev().map(|&(i, e)| (i, -e)));
                    }
                }
            }
            push_expanded(&mut stack, pending.into_iter());
        }
        self.group.word(acc.into_iter().map(BigInt::from).collect())
    }

    pub fn multiply(&self, u: &NilWord, v: &NilWord) -> Result<NilWord> {
        let word = letters(v)
            .ok_or_else(|| Error::Invalid("collection needs machine-size exponents".into()))?;
        self.collect(u, &word)
    }
}

/// Pushes unit letters so that the first letter of `word` ends on top.
fn push_expanded(
    stack: &mut Vec<(usize, i64)>,
    word: impl DoubleEndedIterator<Item = (usize, i64)>,
) {
    for (i, e) in word.rev() {
        for _ in 0..e.abs() {
            stack.push((i, e.signum()));
        }
    }
}
