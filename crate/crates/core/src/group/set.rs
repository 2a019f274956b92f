use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::group::element::Element;

/// A finite set of elements of one model, kept in canonical order.
///
/// The `symmetric` and `contains_identity` flags are computed from the
/// members on construction; they are never declared by the caller.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ElementSet {
    members: BTreeSet<Element>,
    symmetric: bool,
    has_identity: bool,
}

impl ElementSet {
    pub fn new(members: impl IntoIterator<Item = Element>) -> Self {
        Self::from_btree(members.into_iter().collect())
    }

    pub fn from_btree(members: BTreeSet<Element>) -> Self {
        let symmetric = members.iter().all(|g| members.contains(&g.invert()));
        let has_identity = members.iter().next().is_some_and(|g| members.contains(&g.identity_like()));
        ElementSet {
            members,
            symmetric,
            has_identity,
        }
    }

    pub fn singleton(g: Element) -> Self {
        Self::new([g])
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, g: &Element) -> bool {
        self.members.contains(g)
    }

    /// Members in canonical (lexicographic payload) order.
    pub fn iter(&self) -> impl ExactSizeIterator<Item = &Element> + DoubleEndedIterator + Clone {
        self.members.iter()
    }

    pub fn members(&self) -> &BTreeSet<Element> {
        &self.members
    }

    pub fn first(&self) -> Option<&Element> {
        self.members.iter().next()
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn contains_identity(&self) -> bool {
        self.has_identity
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn union(&self, other: &ElementSet) -> ElementSet {
        ElementSet::from_btree(self.members.union(&other.members).cloned().collect())
    }

    pub fn difference(&self, other: &ElementSet) -> ElementSet {
        ElementSet::from_btree(self.members.difference(&other.members).cloned().collect())
    }

    pub fn inverses(&self) -> ElementSet {
        ElementSet::new(self.members.iter().map(Element::invert))
    }

    /// Whether the members form a subgroup: identity, inverses and products
    /// all stay inside the set.
    pub fn is_subgroup(&self) -> bool {
        if !self.has_identity || !self.symmetric {
            return false;
        }
        self.members.iter().all(|a| {
            self.members
                .iter()
                .all(|b| a.compose(b).is_ok_and(|ab| self.members.contains(&ab)))
        })
    }

    pub(crate) fn ensure_subgroup(&self, what: &str) -> Result<()> {
        if self.is_subgroup() {
            Ok(())
        } else {
            Err(Error::Precondition(format!("{what} is not a subgroup")))
        }
    }

    pub(crate) fn ensure_symmetric_with_identity(&self, what: &str) -> Result<()> {
        if !self.symmetric {
            return Err(Error::Precondition(format!(
                "{what} is not symmetric (symmetrize it first)"
            )));
        }
        if !self.has_identity {
            return Err(Error::Precondition(format!(
                "{what} does not contain the identity (symmetrize it first)"
            )));
        }
        Ok(())
    }
}

impl FromIterator<Element> for ElementSet {
    fn from_iter<T: IntoIterator<Item = Element>>(iter: T) -> Self {
        ElementSet::new(iter)
    }
}

impl<'a> IntoIterator for &'a ElementSet {
    type Item = &'a Element;
    type IntoIter = std::collections::btree_set::Iter<'a, Element>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, g) in self.members.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str("}")
    }
}

/// The product set `AB = {ab : a ∈ A, b ∈ B}`.
pub fn set_product(a: &ElementSet, b: &ElementSet) -> Result<ElementSet> {
    let mut out = BTreeSet::new();
    for x in a {
        for y in b {
            out.insert(x.compose(y)?);
        }
    }
    Ok(ElementSet::from_btree(out))
}

/// `A ∪ A⁻¹ ∪ {e}`. The empty set has no model to take an identity from and
/// is returned unchanged.
pub fn symmetrize(a: &ElementSet) -> ElementSet {
    let Some(first) = a.first() else {
        return a.clone();
    };
    let mut out = a.members.clone();
    out.extend(a.members.iter().map(Element::invert));
    out.insert(first.identity_like());
    ElementSet::from_btree(out)
}
