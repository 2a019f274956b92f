//! Breadth-first enumeration: word-length balls, word lengths of targets, and
//! capped subgroup closure.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::group::element::Element;
use crate::group::model::GroupModel;
use crate::group::set::ElementSet;

/// Default bound on the number of elements any enumeration may visit.
pub const DEFAULT_CAP: usize = 100_000;

/// All elements of word length at most `radius`, with their exact lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordBall {
    radius: u32,
    lengths: BTreeMap<Element, u32>,
}

impl WordBall {
    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    pub fn length(&self, g: &Element) -> Option<u32> {
        self.lengths.get(g).copied()
    }

    /// `(element, length)` pairs in canonical element order.
    pub fn iter(&self) -> impl Iterator<Item = (&Element, u32)> {
        self.lengths.iter().map(|(g, &l)| (g, l))
    }

    pub fn elements(&self) -> ElementSet {
        ElementSet::new(self.lengths.keys().cloned())
    }

    pub fn lengths(&self) -> &BTreeMap<Element, u32> {
        &self.lengths
    }
}

/// The closed ball of radius `radius` about the identity in the word metric of
/// `s`. `s` must already be symmetric and contain the identity.
pub fn ball(model: &GroupModel, s: &ElementSet, radius: u32, cap: usize) -> Result<WordBall> {
    model.check_set(s)?;
    s.ensure_symmetric_with_identity("generating set")?;
    let mut lengths: HashMap<Element, u32> = HashMap::new();
    let mut frontier = vec![model.identity()];
    lengths.insert(model.identity(), 0);
    for depth in 1..=radius {
        let mut next = Vec::new();
        for g in &frontier {
            for t in s {
                let h = g.compose(t)?;
                if !lengths.contains_key(&h) {
                    lengths.insert(h.clone(), depth);
                    next.push(h);
                    if lengths.len() > cap {
                        return Err(Error::Capacity { cap });
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(WordBall {
        radius,
        lengths: lengths.into_iter().collect(),
    })
}

/// Word length of each target with respect to right multiplication by `s`,
/// searching breadth-first from the identity. Targets not reached before the
/// search visits more than `cap` elements (or exhausts the group) map to
/// `None`.
pub fn word_lengths(
    model: &GroupModel,
    s: &ElementSet,
    targets: &ElementSet,
    cap: usize,
) -> Result<BTreeMap<Element, Option<u32>>> {
    model.check_set(s)?;
    model.check_set(targets)?;
    let mut out: BTreeMap<Element, Option<u32>> = targets.iter().map(|t| (t.clone(), None)).collect();
    let mut remaining = targets.len();
    let id = model.identity();
    let mut seen: HashSet<Element> = HashSet::new();
    seen.insert(id.clone());
    if let Some(slot) = out.get_mut(&id) {
        *slot = Some(0);
        remaining -= 1;
    }
    let mut frontier = vec![id];
    let mut depth = 0u32;
    while remaining > 0 && !frontier.is_empty() {
        depth += 1;
        let mut next = Vec::new();
        'layer: for g in &frontier {
            for t in s {
                let h = g.compose(t)?;
                if seen.insert(h.clone()) {
                    if let Some(slot) = out.get_mut(&h) {
                        *slot = Some(depth);
                        remaining -= 1;
                    }
                    next.push(h);
                    if seen.len() > cap {
                        break 'layer;
                    }
                }
            }
        }
        if seen.len() > cap {
            break;
        }
        frontier = next;
    }
    Ok(out)
}

/// The result of a capped closure computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Closure {
    pub elements: ElementSet,
    /// `true` when the closure terminated within the cap, so `elements` is
    /// the whole generated subgroup.
    pub complete: bool,
}

/// The subgroup generated by `gens`, enumerated breadth-first over
/// `gens ∪ gens⁻¹`. Stops at `cap` elements and flags the result incomplete.
pub fn enumerate_subgroup(model: &GroupModel, gens: &ElementSet, cap: usize) -> Result<Closure> {
    if gens.is_empty() {
        return Err(Error::Precondition("subgroup generators are empty".into()));
    }
    model.check_set(gens)?;
    let step = gens.union(&gens.inverses());
    let id = model.identity();
    let mut seen: HashSet<Element> = HashSet::new();
    seen.insert(id.clone());
    let mut frontier = vec![id];
    let mut complete = true;
    'outer: while !frontier.is_empty() {
        let mut next = Vec::new();
        for g in &frontier {
            for t in &step {
                let h = g.compose(t)?;
                if !seen.contains(&h) {
                    if seen.len() >= cap {
                        complete = false;
                        break 'outer;
                    }
                    seen.insert(h.clone());
                    next.push(h);
                }
            }
        }
        frontier = next;
    }
    Ok(Closure {
        elements: ElementSet::new(seen),
        complete,
    })
}

/// The whole group generated by the model's generators; errors if it is
/// larger than `cap`.
pub fn enumerate_group(model: &GroupModel, cap: usize) -> Result<ElementSet> {
    let closure = enumerate_subgroup(model, &model.generator_set(), cap)?;
    if closure.complete {
        Ok(closure.elements)
    } else {
        Err(Error::Capacity { cap })
    }
}
