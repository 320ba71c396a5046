//! Hopf formulae for the homology of finite nilpotent groups, evaluated in
//! free nilpotent groups of finite class.
//!
//! For a presentation `F → G` with `G` of class `c`, the quotient
//! `([F,F] ∩ R) / [R,F]` can be computed in `F / γ_{c+2}(F)`: `γ_{c+1}(F) ⊆ R`
//! gives `γ_{c+2}(F) ⊆ [R,F]`, so both numerator and denominator contain the
//! kernel of the truncation and the quotient is unchanged. This makes
//! `H_2 = π_1` exact. For `H_3 = π_2` the double presentation lives in a free
//! group of larger rank and no such bound is known; there the value is
//! computed at working classes `k` and `k+1` and only reported when the two
//! agree.

mod presentation;

use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use presentation::{NilPresentation, Word};

use crate::abelian::{FgAbelianGroup, IntMatrix, PrimeSet};
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::nilpotent::{abelian_quotient, FreeNilGroup, NilWord, PcSubgroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Stabilization {
    /// Exact by the truncation argument; no comparison needed.
    None,
    /// Values at working classes `k` and `k + 1` agree.
    Stable { k: usize, next: usize },
    /// No two consecutive working classes up to `max_class` agreed.
    Unstable { max_class: usize },
}

/// Shape of an induced sequence: its length, leading indices and leading
/// exponents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupSummary {
    pub length: usize,
    pub leads: Vec<usize>,
    #[serde(with = "crate::serde_int::vec")]
    pub leading_exponents: Vec<BigInt>,
}

impl SubgroupSummary {
    fn of(s: &PcSubgroup) -> Self {
        SubgroupSummary {
            length: s.len(),
            leads: s.leads().to_vec(),
            leading_exponents: s.leading_exponents(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HopfResult {
    /// Fold count: the result is `π_n = H_{n+1}`.
    pub n: usize,
    /// `None` exactly when the value did not stabilize.
    pub value: Option<FgAbelianGroup>,
    pub primes: PrimeSet,
    pub numerator: SubgroupSummary,
    pub denominator: SubgroupSummary,
    pub working_class: usize,
    pub stabilization: Stabilization,
    pub oracle_checked: Option<bool>,
    pub provenance: Vec<String>,
    pub provenance_hash: String,
}

impl HopfResult {
    /// The value, or [`Error::Unstable`] for an inconclusive run.
    pub fn value(&self) -> Result<&FgAbelianGroup> {
        match (&self.value, self.stabilization) {
            (Some(v), _) => Ok(v),
            (None, Stabilization::Unstable { max_class }) => Err(Error::Unstable { max_class }),
            (None, _) => Err(Error::Consistency("result without value".into())),
        }
    }

    /// Records agreement with an independently computed value.
    pub fn check_against(&mut self, oracle: &FgAbelianGroup) -> bool {
        let ok = self.value.as_ref() == Some(oracle);
        self.oracle_checked = Some(ok);
        ok
    }
}

/// An `n`-fold presentation (`n ≤ 2`) of a group, truncated at a working
/// class: the top vertex is the free nilpotent group `ambient`, and
/// `meets[I]` is `⋂_{i∈I} K_i` for the kernels `K_i` of the top face maps
/// (`meets[∅]` is the whole ambient group).
#[derive(Clone, Debug)]
pub struct PresentationCube {
    n: usize,
    presentation: NilPresentation,
    ambient: FreeNilGroup,
    meets: Vec<PcSubgroup>,
    provenance: Vec<String>,
}

impl PresentationCube {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn presentation(&self) -> &NilPresentation {
        &self.presentation
    }

    pub fn ambient(&self) -> &FreeNilGroup {
        &self.ambient
    }

    pub fn working_class(&self) -> usize {
        self.ambient.class()
    }

    /// Kernels of the top face maps.
    pub fn top_kernels(&self) -> Vec<&PcSubgroup> {
        (0..self.n).map(|i| &self.meets[1 << i]).collect()
    }

    /// `Ker^n`, the intersection of the top kernels.
    pub fn direction(&self) -> &PcSubgroup {
        &self.meets[(1 << self.n) - 1]
    }

    pub fn provenance(&self) -> &[String] {
        &self.provenance
    }
}

/// Builds the `n`-fold presentation of the presented group at working class
/// `k`.
///
/// For `n = 1` this is `F(d, k) → G` with kernel the normal closure of the
/// relators. For `n = 2` the pullback `F ×_G F` is generated by the diagonal
/// pairs `(x_i, x_i)` and the pairs `(1, r_j)`, so it is covered by the free
/// group on letters `a_1..a_d, t_1..t_m` (one `t` per relator) via
/// `a_i ↦ (x_i, x_i)`, `t_j ↦ (1, r_j)`. The two face maps send `a_i ↦ x_i`
/// and `t_j` to `1`, respectively `r_j`; their kernels are the normal closures
/// of the `t_j`, respectively the `t_j r_j(a)^{-1}`.
pub fn build_presentation_cube(
    pres: &NilPresentation,
    n: usize,
    k: usize,
) -> Result<PresentationCube> {
    let c = pres.class();
    if k < c + 1 {
        return Err(Error::Precondition(format!(
            "working class {k} is below class + 1 = {}",
            c + 1
        )));
    }
    let d = pres.rank();
    let mut log = vec![format!(
        "presentation: {}",
        pres.to_string().trim_end().replace('\n', "; ")
    )];
    match n {
        1 => {
            let f = FreeNilGroup::new(d, k)?;
            let r = PcSubgroup::normal_closure_of_words(&f, &pres.relator_words(&f));
            log.push(format!(
                "ambient F({d},{k}); K0 = normal closure of the relators ({} members)",
                r.len()
            ));
            Ok(PresentationCube {
                n,
                presentation: pres.clone(),
                ambient: f.clone(),
                meets: vec![PcSubgroup::whole(&f), r],
                provenance: log,
            })
        }
        2 => {
            let m = pres.relators().len();
            let rank = d + m;
            let limit = Limits::current().max_cover_rank;
            if rank > limit {
                return Err(Error::SizeLimit {
                    what: "pullback cover rank",
                    size: rank,
                    limit,
                });
            }
            let p = FreeNilGroup::new(rank, k)?;
            let base = FreeNilGroup::new(d, k)?;
            let a: Vec<NilWord> = (0..d).map(|i| p.generator(i)).collect();
            let t: Vec<NilWord> = (d..rank).map(|i| p.generator(i)).collect();
            let rel_in_a: Vec<NilWord> = pres
                .relators()
                .iter()
                .map(|w| w.eval(&a, &p.identity(), &|x, y| x.mul(y), &|x| x.inv()))
                .collect();
            log.push(format!(
                "ambient F({rank},{k}): a1..a{d} cover (x_i, x_i), t1..t{m} cover (1, r_j)"
            ));

            let k0 = PcSubgroup::normal_closure_of_words(&p, &t);
            let k1_gens: Vec<NilWord> = t
                .iter()
                .zip(&rel_in_a)
                .map(|(tj, rj)| tj.mul(&rj.inv()))
                .collect();
            let k1 = PcSubgroup::normal_closure_of_words(&p, &k1_gens);
            let proj = p.letter_projection(&base, &(0..d).collect::<Vec<_>>())?;
            let both = k1.kernel_of_projection(&proj)?;
            log.push(format!("K0 = <<t_j>> ({} members), K1 = <<t_j r_j(a)^-1>> ({} members), K0 ∩ K1 ({} members)", k0.len(), k1.len(), both.len()));

            // the comparison to the pullback is onto iff K0 K1 is the whole
            // kernel of P → G
            let mut to_g = t.clone();
            to_g.extend(rel_in_a);
            if !k0
                .join(&k1)
                .same_as(&PcSubgroup::normal_closure_of_words(&p, &to_g))
            {
                return Err(Error::Consistency(
                    "square is not a double extension".into(),
                ));
            }
            log.push("verified: K0 K1 = Ker(P → G), faces onto F".into());
            Ok(PresentationCube {
                n,
                presentation: pres.clone(),
                ambient: p.clone(),
                meets: vec![PcSubgroup::whole(&p), k0, k1, both],
                provenance: log,
            })
        }
        _ => Err(Error::Precondition(format!(
            "presentation cubes are built for n = 1, 2 only, not {n}"
        ))),
    }
}

/// Single-class evaluation of the Hopf formula on a cube.
#[derive(Clone, Debug)]
pub struct CubeValue {
    pub value: FgAbelianGroup,
    pub numerator: PcSubgroup,
    pub denominator: PcSubgroup,
}

/// `([P,P] ∩ Ker^n) / Π_{I ⊆ n} [⋂_{i∈I} K_i, ⋂_{i∉I} K_i]`, with the
/// `𝒫`-closures of numerator and denominator when `primes` is nonempty.
pub fn evaluate(cube: &PresentationCube, primes: &PrimeSet) -> Result<CubeValue> {
    let p = &cube.ambient;
    let full = (1usize << cube.n) - 1;
    let ker = cube.direction();
    // the ambient abelianization is free, so its 𝒫-torsion is trivial and
    // the localized numerator is the plain one
    let numerator = ker.intersect_with_kernel(&IntMatrix::identity(p.rank()))?;
    let mut denominator = PcSubgroup::trivial(p);
    for mask in 0..=full {
        let term = cube.meets[mask].commutator(&cube.meets[full & !mask]);
        denominator = denominator.join(&term);
    }
    if !primes.is_empty() {
        // Ker^n / D is abelian because D ⊇ [Ker^n, P]; adding lifts of the
        // 𝒫-torsion of that quotient gives the preimage of the torsion
        let lifts = abelian_quotient(ker, &denominator)?.torsion_lifts(primes);
        denominator = denominator.join_elements(&lifts);
    }
    if !denominator.is_subgroup_of(&numerator) {
        return Err(Error::Consistency(
            "denominator escapes the numerator".into(),
        ));
    }
    let value = abelian_quotient(&numerator, &denominator)?.group;
    Ok(CubeValue {
        value,
        numerator,
        denominator,
    })
}

/// `H_2` of the presented group.
pub fn hopf_h2(pres: &NilPresentation) -> Result<HopfResult> {
    hopf_pi_n(pres, 1)
}

/// `π_n = H_{n+1}` for `n ∈ {1, 2}`.
pub fn hopf_pi_n(pres: &NilPresentation, n: usize) -> Result<HopfResult> {
    hopf_pi_n_localized(pres, n, &PrimeSet::empty())
}

/// `π_n` relative to the torsion theory of `𝒫`-primary abelian groups.
///
/// `n = 1` is evaluated once at class `c + 1`. For `n = 2` the working class
/// starts at `c + 1` and increases until two consecutive classes agree or the
/// configured maximum is reached; an unstable run has no value.
pub fn hopf_pi_n_localized(
    pres: &NilPresentation,
    n: usize,
    primes: &PrimeSet,
) -> Result<HopfResult> {
    let c = pres.class();
    let mut log = Vec::new();
    if !primes.is_empty() {
        log.push(format!("primes: {:?}", primes.iter().collect::<Vec<_>>()));
    }
    if n == 1 {
        let cube = build_presentation_cube(pres, 1, c + 1)?;
        let v = evaluate(&cube, primes)?;
        log.extend(cube.provenance.iter().cloned());
        log.push(format!("value at class {}: {}", c + 1, v.value));
        return Ok(finish(
            n,
            primes,
            Some(v.value),
            &v.numerator,
            &v.denominator,
            c + 1,
            Stabilization::None,
            log,
        ));
    }
    let max_class = Limits::current().max_working_class;
    let mut k = (c + 1).max(2);
    let first = build_presentation_cube(pres, n, k)?;
    log.extend(first.provenance.iter().cloned());
    let mut prev = evaluate(&first, primes)?;
    log.push(format!("value at class {k}: {}", prev.value));
    while k < max_class {
        let cube = build_presentation_cube(pres, n, k + 1)?;
        let next = evaluate(&cube, primes)?;
        log.push(format!("value at class {}: {}", k + 1, next.value));
        if next.value == prev.value {
            let st = Stabilization::Stable { k, next: k + 1 };
            return Ok(finish(
                n,
                primes,
                Some(next.value),
                &next.numerator,
                &next.denominator,
                k + 1,
                st,
                log,
            ));
        }
        prev = next;
        k += 1;
    }
    let st = Stabilization::Unstable { max_class: k };
    Ok(finish(
        n,
        primes,
        None,
        &prev.numerator,
        &prev.denominator,
        k,
        st,
        log,
    ))
}

#[allow(clippy::too_many_arguments)]
fn finish(
    n: usize,
    primes: &PrimeSet,
    value: Option<FgAbelianGroup>,
    num: &PcSubgroup,
    den: &PcSubgroup,
    working_class: usize,
    stabilization: Stabilization,
    provenance: Vec<String>,
) -> HopfResult {
    let mut r = HopfResult {
        n,
        value,
        primes: primes.clone(),
        numerator: SubgroupSummary::of(num),
        denominator: SubgroupSummary::of(den),
        working_class,
        stabilization,
        oracle_checked: None,
        provenance,
        provenance_hash: String::new(),
    };
    let mut h = Sha256::new();
    let mut text = String::new();
    for line in &r.provenance {
        let _ = writeln!(text, "{line}");
    }
    h.update(text.as_bytes());
    h.update(
        serde_json::to_vec(&(&r.value, &r.numerator, &r.denominator, &r.stabilization))
            .expect("plain data serializes"),
    );
    r.provenance_hash = hex::encode(h.finalize());
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(text: &str) -> NilPresentation {
        NilPresentation::parse(text).unwrap()
    }

    #[test]
    fn klein_four_by_hand() {
        // N = <[y,x]>, D = <[y,x]^2> since [x^2, y] = [x,y]^2 in class 2
        let r = hopf_h2(&pres("gens: x y\nrels: x^2, y^2, [x,y]\nclass: 1")).unwrap();
        assert_eq!(r.value().unwrap(), &FgAbelianGroup::cyclic(2));
        assert_eq!(r.numerator.leading_exponents, vec![BigInt::from(1)]);
        assert_eq!(r.denominator.leading_exponents, vec![BigInt::from(2)]);
        assert_eq!(r.stabilization, Stabilization::None);
        assert_eq!(r.working_class, 2);
    }

    #[test]
    fn cyclic_groups_have_trivial_multiplier() {
        for k in [1, 2, 5, 12] {
            let r = hopf_h2(&pres(&format!("gens: x\nrels: x^{k}\nclass: 1"))).unwrap();
            assert!(r.value().unwrap().is_trivial());
        }
    }

    #[test]
    fn localized_klein_four() {
        let p = pres("gens: x y\nrels: x^2, y^2, [x,y]\nclass: 1");
        let two = PrimeSet::new([2]).unwrap();
        let three = PrimeSet::new([3]).unwrap();
        assert!(hopf_pi_n_localized(&p, 1, &two)
            .unwrap()
            .value()
            .unwrap()
            .is_trivial());
        assert_eq!(
            hopf_pi_n_localized(&p, 1, &three).unwrap().value().unwrap(),
            &FgAbelianGroup::cyclic(2)
        );
    }

    #[test]
    fn square_over_c2() {
        let p = pres("gens: x\nrels: x^2\nclass: 1");
        let cube = build_presentation_cube(&p, 2, 2).unwrap();
        assert_eq!(cube.ambient().rank(), 2);
        assert_eq!(cube.top_kernels().len(), 2);
        let b = build_presentation_cube(&p, 1, 3).unwrap();
        assert_eq!(b.top_kernels().len(), 1);
        assert!(build_presentation_cube(&p, 1, 1).is_err());
        assert!(build_presentation_cube(&p, 3, 2).is_err());
        let r = hopf_pi_n(&p, 2).unwrap();
        assert_eq!(r.value().unwrap(), &FgAbelianGroup::cyclic(2));
        assert_eq!(r.stabilization, Stabilization::Stable { k: 2, next: 3 });
    }

    #[test]
    fn square_over_trivial_group() {
        let r = hopf_pi_n(&pres("gens: x\nrels: x\nclass: 1"), 2).unwrap();
        assert!(r.value().unwrap().is_trivial());
    }

    #[test]
    fn results_are_deterministic() {
        let p = pres("gens: x y\nrels: x^4, y^2, (x y)^2\nclass: 2");
        let a = hopf_h2(&p).unwrap();
        let b = hopf_h2(&p).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.provenance_hash.len(), 64);
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(serde_json::from_str::<HopfResult>(&json).unwrap(), a);
    }
}
