use super::spec::symmetric;
use super::{direct_product, FiniteGroup};
use crate::corpus;
use crate::error::{Error, Result};

/// Looks up a group by name: corpus entries first, then the patterns
/// `C<n>`/`Z<n>` (cyclic), `D<n>` (dihedral of order 2n), `S<n>`, `Q8`,
/// and products written `AxB`.
pub fn named_group(name: &str) -> Result<FiniteGroup> {
    let name = name.trim();
    if let Some(e) = corpus::entry(name) {
        return e.group.build();
    }
    if name.contains(['x', 'X']) {
        let mut g: Option<FiniteGroup> = None;
        for part in name.split(['x', 'X']) {
            let h = named_group(part)?;
            g = Some(match g {
                None => h,
                Some(g) => direct_product(&g, &h)?.group,
            });
        }
        return g.ok_or_else(|| Error::Invalid(format!("unknown group {name:?}")));
    }
    let unknown = || Error::Invalid(format!("unknown group {name:?}"));
    let (head, tail) = name.split_at(
        name.find(|c: char| c.is_ascii_digit())
            .ok_or_else(unknown)?,
    );
    let n: usize = tail.parse().map_err(|_| unknown())?;
    match head.to_ascii_uppercase().as_str() {
        "C" | "Z" if n >= 1 => Ok(FiniteGroup::cyclic(n)),
        "D" if n >= 1 => Ok(FiniteGroup::dihedral(n)),
        "S" => symmetric(n),
        "Q" if n == 8 => Ok(FiniteGroup::quaternion()),
        _ => Err(unknown()),
    }
}

pub fn corpus_names() -> Vec<&'static str> {
    corpus::corpus().iter().map(|e| e.name.as_str()).collect()
}
