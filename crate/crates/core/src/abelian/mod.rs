//! Finitely generated abelian groups, integer normal forms, and prime-set torsion.

mod matrix;
mod sparse;

pub use matrix::{hnf, snf, Hnf, IntMatrix, Snf};
pub use sparse::{dense_elimination, sparse_elimination, Elimination, SparseIntMatrix};

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::serde_int;

/// A finitely generated abelian group `Z/d1 + ... + Z/dk + Z^r` with
/// `d1 | d2 | ... | dk` and every `di >= 2`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawAbelian", into = "RawAbelian")]
pub struct FgAbelianGroup {
    factors: Vec<BigInt>,
    free_rank: usize,
}

#[derive(Serialize, Deserialize)]
struct RawAbelian {
    #[serde(with = "serde_int::vec")]
    factors: Vec<BigInt>,
    free_rank: usize,
}

impl TryFrom<RawAbelian> for FgAbelianGroup {
    type Error = String;

    fn try_from(raw: RawAbelian) -> std::result::Result<Self, String> {
        let g = FgAbelianGroup::new(raw.factors.clone(), raw.free_rank);
        if g.factors != raw.factors {
            return Err(format!(
                "factors {:?} are not a canonical divisibility chain",
                raw.factors
            ));
        }
        Ok(g)
    }
}

impl From<FgAbelianGroup> for RawAbelian {
    fn from(g: FgAbelianGroup) -> Self {
        RawAbelian {
            factors: g.factors,
            free_rank: g.free_rank,
        }
    }
}

impl FgAbelianGroup {
    /// Canonicalizes an arbitrary list of cyclic orders: signs are dropped,
    /// zeros become free summands, units disappear.
    pub fn new<T: Into<BigInt>>(
        cyclic_orders: impl IntoIterator<Item = T>,
        free_rank: usize,
    ) -> Self {
        let mut free_rank = free_rank;
        let mut fs: Vec<BigInt> = Vec::new();
        for x in cyclic_orders {
            let x: BigInt = x.into();
            let x = x.abs();
            if x.is_zero() {
                free_rank += 1;
            } else if !x.is_one() {
                fs.push(x);
            }
        }
        // after step i, fs[i] divides every later entry
        for i in 0..fs.len() {
            for j in i + 1..fs.len() {
                let g = fs[i].gcd(&fs[j]);
                let l = fs[i].lcm(&fs[j]);
                fs[i] = g;
                fs[j] = l;
            }
        }
        fs.retain(|x| !x.is_one());
        FgAbelianGroup {
            factors: fs,
            free_rank,
        }
    }

    pub fn trivial() -> Self {
        FgAbelianGroup {
            factors: Vec::new(),
            free_rank: 0,
        }
    }

    pub fn cyclic(n: u64) -> Self {
        Self::new([n], 0)
    }

    pub fn free(rank: usize) -> Self {
        FgAbelianGroup {
            factors: Vec::new(),
            free_rank: rank,
        }
    }

    pub fn factors(&self) -> &[BigInt] {
        &self.factors
    }

    /// Invariant factors as machine integers; `None` if any does not fit.
    pub fn factors_u64(&self) -> Option<Vec<u64>> {
        self.factors.iter().map(ToPrimitive::to_u64).collect()
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty() && self.free_rank == 0
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.factors.iter().product()
    }

    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion_order())
    }

    pub fn direct_sum(&self, other: &FgAbelianGroup) -> FgAbelianGroup {
        Self::new(
            self.factors.iter().chain(&other.factors).cloned(),
            self.free_rank + other.free_rank,
        )
    }
}

impl fmt::Debug for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self.factors.iter().map(|d| format!("Z/{d}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// A finite set of primes. The numbers built from it (products of its
/// members, 1 included) are its "P-numbers".
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct PrimeSet(BTreeSet<u64>);

impl PrimeSet {
    pub fn empty() -> Self {
        PrimeSet(BTreeSet::new())
    }

    pub fn new(primes: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for p in primes {
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            set.insert(p);
        }
        Ok(PrimeSet(set))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, p: u64) -> bool {
        self.0.contains(&p)
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().copied()
    }

    /// True iff `m` is a positive product of members (1 counts).
    pub fn is_p_number(&self, m: &BigInt) -> bool {
        m.is_positive() && self.p_part(m) == *m
    }

    /// The largest divisor of `|m|` that is a P-number. Zero maps to zero.
    pub fn p_part(&self, m: &BigInt) -> BigInt {
        let mut rest = m.abs();
        if rest.is_zero() {
            return rest;
        }
        let mut part = BigInt::one();
        for p in self.iter() {
            let p = BigInt::from(p);
            loop {
                let (q, r) = rest.div_rem(&p);
                if !r.is_zero() {
                    break;
                }
                rest = q;
                part *= &p;
            }
        }
        part
    }
}

impl TryFrom<Vec<u64>> for PrimeSet {
    type Error = Error;

    fn try_from(v: Vec<u64>) -> Result<Self> {
        PrimeSet::new(v)
    }
}

impl From<PrimeSet> for Vec<u64> {
    fn from(p: PrimeSet) -> Self {
        p.0.into_iter().collect()
    }
}

impl fmt::Display for PrimeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

impl FromStr for PrimeSet {
    type Err = Error;

    /// Parses a comma-separated list such as `2,3`; the empty string is the empty set.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('{').trim_end_matches('}');
        if s.trim().is_empty() {
            return Ok(PrimeSet::empty());
        }
        let primes = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::Invalid(format!("bad prime {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        PrimeSet::new(primes)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `Z^cols / rowspace(m)`.
pub fn cokernel_structure(m: &IntMatrix) -> FgAbelianGroup {
    let s = snf(m);
    let diag = s.nonzero_diagonal();
    FgAbelianGroup::new(diag.iter().cloned(), m.cols() - diag.len())
}

/// `Z^cols / rowspace(m)` through sparse elimination.
pub fn cokernel_structure_sparse(m: &SparseIntMatrix) -> FgAbelianGroup {
    let e = sparse_elimination(m);
    FgAbelianGroup::new(e.torsion, m.cols() - e.rank)
}

/// The subgroup of elements whose order is a P-number.
pub fn torsion_part(a: &FgAbelianGroup, primes: &PrimeSet) -> FgAbelianGroup {
    FgAbelianGroup::new(a.factors.iter().map(|d| primes.p_part(d)), 0)
}

/// `A / t_P(A)`.
pub fn quotient_by_torsion(a: &FgAbelianGroup, primes: &PrimeSet) -> FgAbelianGroup {
    FgAbelianGroup::new(a.factors.iter().map(|d| d / primes.p_part(d)), a.free_rank)
}
