//! JSON descriptions of groups and homomorphisms.

use serde::{Deserialize, Serialize};

use super::{named_group, parse_cycles, quotient, FiniteGroup, GroupHom, Permutation, Subgroup};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupSpec {
    /// A corpus name such as `Q8`, `C6`, `C2xC4`.
    Named(String),
    Cyclic(usize),
    /// Dihedral group of order `2n`.
    Dihedral(usize),
    Quaternion,
    Symmetric(usize),
    Permutations {
        degree: usize,
        generators: Vec<PermSpec>,
    },
    Table {
        table: Vec<Vec<usize>>,
        #[serde(default)]
        labels: Option<Vec<String>>,
    },
    Product(Vec<GroupSpec>),
}

/// A permutation as cycle notation (`"(1,2,3)"`) or as 1-based images (`[2,3,1]`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PermSpec {
    Cycles(String),
    Images(Vec<usize>),
}

impl PermSpec {
    pub fn build(&self, degree: usize) -> Result<Permutation> {
        match self {
            PermSpec::Cycles(s) => parse_cycles(degree, s),
            PermSpec::Images(v) => {
                if v.len() != degree || v.contains(&0) {
                    return Err(Error::Invalid(format!(
                        "{v:?} is not a 1-based permutation of degree {degree}"
                    )));
                }
                Permutation::from_images(v.iter().map(|x| x - 1).collect())
            }
        }
    }
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            GroupSpec::Named(n) => named_group(n),
            GroupSpec::Cyclic(n) if *n >= 1 => Ok(FiniteGroup::cyclic(*n)),
            GroupSpec::Dihedral(n) if *n >= 1 => Ok(FiniteGroup::dihedral(*n)),
            GroupSpec::Cyclic(_) | GroupSpec::Dihedral(_) => {
                Err(Error::Invalid("order parameter must be positive".into()))
            }
            GroupSpec::Quaternion => Ok(FiniteGroup::quaternion()),
            GroupSpec::Symmetric(n) => symmetric(*n),
            GroupSpec::Permutations { degree, generators } => {
                let gens = generators
                    .iter()
                    .map(|g| g.build(*degree))
                    .collect::<Result<Vec<_>>>()?;
                FiniteGroup::from_permutations(*degree, &gens)
            }
            GroupSpec::Table { table, labels } => {
                FiniteGroup::from_table(table.clone(), labels.clone())
            }
            GroupSpec::Product(factors) => {
                let mut g = FiniteGroup::trivial();
                for (i, f) in factors.iter().enumerate() {
                    let h = f.build()?;
                    g = if i == 0 {
                        h
                    } else {
                        super::direct_product(&g, &h)?.group
                    };
                }
                Ok(g)
            }
        }
    }
}

/// The symmetric group on `n` points, generated by `(1,2)` and `(1,...,n)`.
pub fn symmetric(n: usize) -> Result<FiniteGroup> {
    if n <= 1 {
        return Ok(FiniteGroup::trivial());
    }
    let cycle: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let gens = [
        parse_cycles(n, "(1,2)")?,
        parse_cycles(n, &format!("({})", cycle.join(",")))?,
    ];
    FiniteGroup::from_permutations(n, &gens)
}

/// A homomorphism file. Exactly one way of giving the map must be present:
/// a full image array, images of chosen generators, or a list of elements
/// whose normal closure is factored out (the codomain is then the quotient).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomSpec {
    pub domain: GroupSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub codomain: Option<GroupSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub images: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub targets: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quotient_by: Option<Vec<usize>>,
    /// Optional section `s` with `f(s(b)) = b`, as a full image array on the codomain.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub section: Option<Vec<usize>>,
}

impl HomSpec {
    pub fn build(&self) -> Result<GroupHom> {
        let domain = self.domain.build()?;
        let given = [
            self.images.is_some(),
            self.generators.is_some(),
            self.quotient_by.is_some(),
        ];
        if given.iter().filter(|&&b| b).count() != 1 {
            return Err(Error::Invalid(
                "give exactly one of images, generators/targets, quotient_by".into(),
            ));
        }
        if let Some(elems) = &self.quotient_by {
            if elems.iter().any(|&x| x >= domain.order()) {
                return Err(Error::Invalid("quotient_by element out of range".into()));
            }
            let n = Subgroup::normal_closure(&domain, elems);
            return Ok(quotient(&domain, &n)?.projection);
        }
        let codomain = self
            .codomain
            .as_ref()
            .ok_or_else(|| Error::Invalid("homomorphism needs a codomain".into()))?
            .build()?;
        if let Some(images) = &self.images {
            return GroupHom::new(domain, codomain, images.clone());
        }
        let gens = self.generators.as_ref().unwrap();
        let targets = self
            .targets
            .as_ref()
            .ok_or_else(|| Error::Invalid("generators given without targets".into()))?;
        if gens.iter().any(|&x| x >= domain.order())
            || targets.iter().any(|&x| x >= codomain.order())
        {
            return Err(Error::Invalid("generator index out of range".into()));
        }
        GroupHom::from_generators(&domain, &codomain, gens, targets)
    }

    /// The section, checked against the map.
    pub fn build_section(&self, f: &GroupHom) -> Result<Option<GroupHom>> {
        let Some(s) = &self.section else {
            return Ok(None);
        };
        let s = GroupHom::new(f.codomain().clone(), f.domain().clone(), s.clone())?;
        if f.codomain().elements().any(|b| f.apply(s.apply(b)) != b) {
            return Err(Error::NotASection);
        }
        Ok(Some(s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn specs_parse_and_build() {
        let g: GroupSpec =
            serde_json::from_str(r#"{"permutations":{"degree":3,"generators":["(1,2)",[2,3,1]]}}"#)
                .unwrap();
        assert_eq!(g.build().unwrap().order(), 6);
        let g: GroupSpec = serde_json::from_str(r#""quaternion""#).unwrap();
        assert_eq!(g.build().unwrap().order(), 8);
        let g: GroupSpec =
            serde_json::from_str(r#"{"product":[{"cyclic":2},{"named":"S3"}]}"#).unwrap();
        assert_eq!(g.build().unwrap().order(), 12);
        let g: GroupSpec = serde_json::from_str(r#"{"table":{"table":[[0,1],[1,0]]}}"#).unwrap();
        assert_eq!(g.build().unwrap().order(), 2);
        assert_eq!(symmetric(4).unwrap().order(), 24);
    }

    #[test]
    fn hom_specs() {
        let h: HomSpec =
            serde_json::from_str(r#"{"domain":{"named":"Q8"},"quotient_by":[1]}"#).unwrap();
        let f = h.build().unwrap();
        assert_eq!(f.codomain().order(), 4);
        let h: HomSpec = serde_json::from_str(
            r#"{"domain":{"cyclic":4},"codomain":{"cyclic":2},"generators":[1],"targets":[1]}"#,
        )
        .unwrap();
        assert_eq!(h.build().unwrap().images(), &[0, 1, 0, 1]);
        let h: HomSpec = serde_json::from_str(r#"{"domain":{"cyclic":4},"codomain":{"cyclic":2},"images":[0,1,0,1],"quotient_by":[2]}"#).unwrap();
        assert!(h.build().is_err());
    }

    #[test]
    fn sections() {
        let h: HomSpec = serde_json::from_str(
            r#"{"domain":{"product":[{"cyclic":2},{"cyclic":3}]},"codomain":{"cyclic":3},"generators":[1,3],"targets":[1,0],"section":[0,1,2]}"#,
        )
        .unwrap();
        let f = h.build().unwrap();
        assert!(h.build_section(&f).unwrap().is_some());
        let bad = HomSpec {
            section: Some(vec![0, 2, 1]),
            ..h.clone()
        };
        assert!(bad.build_section(&f).is_err());
    }
}
