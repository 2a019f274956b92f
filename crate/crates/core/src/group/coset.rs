use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::group::element::Element;
use crate::group::set::ElementSet;

/// A partition of a finite element set into left cosets `gV`.
///
/// Cosets are ordered by their canonical representative, the least member
/// in canonical element order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetPartition {
    subgroup: ElementSet,
    cosets: Vec<ElementSet>,
    index: HashMap<Element, usize>,
}

impl CosetPartition {
    pub fn len(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }

    pub fn subgroup(&self) -> &ElementSet {
        &self.subgroup
    }

    pub fn coset(&self, i: usize) -> &ElementSet {
        &self.cosets[i]
    }

    pub fn cosets(&self) -> &[ElementSet] {
        &self.cosets
    }

    pub fn representative(&self, i: usize) -> &Element {
        self.cosets[i].first().expect("cosets are nonempty")
    }

    pub fn representatives(&self) -> impl Iterator<Item = &Element> {
        self.cosets.iter().map(|c| c.first().expect("cosets are nonempty"))
    }

    /// Index of the coset containing `g`, if `g` was partitioned.
    pub fn coset_of(&self, g: &Element) -> Option<usize> {
        self.index.get(g).copied()
    }

    /// All partitioned elements.
    pub fn elements(&self) -> impl Iterator<Item = &Element> {
        self.cosets.iter().flat_map(|c| c.iter())
    }
}

/// Partitions `elements` into left cosets of the subgroup `v`.
///
/// `v` must be a subgroup (checked by products and inverses over its
/// members) and `elements` must be closed under right multiplication by `v`.
pub fn cosets(elements: &ElementSet, v: &ElementSet) -> Result<CosetPartition> {
    v.ensure_subgroup("coset subgroup")?;
    let mut index: HashMap<Element, usize> = HashMap::with_capacity(elements.len());
    let mut cosets = Vec::new();
    // Canonical order guarantees each coset is first met at its least member.
    for g in elements {
        if index.contains_key(g) {
            continue;
        }
        let mut members = BTreeSet::new();
        for x in v {
            let gx = g.compose(x)?;
            if !elements.contains(&gx) {
                return Err(Error::Precondition(format!(
                    "element set is not closed under right multiplication: {g} * {x} = {gx} is missing"
                )));
            }
            members.insert(gx);
        }
        let id = cosets.len();
        for m in &members {
            index.insert(m.clone(), id);
        }
        cosets.push(ElementSet::from_btree(members));
    }
    Ok(CosetPartition {
        subgroup: v.clone(),
        cosets,
        index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{enumerate_group, GroupModel, DEFAULT_CAP};

    #[test]
    fn s3_partitions() {
        let s3 = GroupModel::symmetric(3);
        let g = enumerate_group(&s3, DEFAULT_CAP).unwrap();
        let p = |l: &str| s3.parse_element(l).unwrap();
        let a3: ElementSet = ["e", "(1 2 3)", "(1 3 2)"].iter().map(|l| p(l)).collect();
        let part = cosets(&g, &a3).unwrap();
        assert_eq!(part.len(), 2);

        let trivial = ElementSet::singleton(s3.identity());
        assert_eq!(cosets(&g, &trivial).unwrap().len(), 6);

        let v: ElementSet = ["e", "(2 3)"].iter().map(|l| p(l)).collect();
        let part = cosets(&g, &v).unwrap();
        assert_eq!(part.len(), 3);
        assert!(part.cosets().iter().all(|c| c.len() == 2));
        // representatives are least members
        for (i, c) in part.cosets().iter().enumerate() {
            assert_eq!(part.representative(i), c.iter().min().unwrap());
        }
    }

    #[test]
    fn rejects_non_subgroup() {
        let s3 = GroupModel::symmetric(3);
        let g = enumerate_group(&s3, DEFAULT_CAP).unwrap();
        let v = ElementSet::new([s3.identity(), s3.parse_element("(1 2 3)").unwrap()]);
        assert!(matches!(cosets(&g, &v), Err(Error::Precondition(_))));
    }
}
