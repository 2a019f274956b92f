use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::group::{ball, enumerate_group, symmetrize, Element, ElementSet, GroupModel, ModelKind};
use crate::metrics::{word_metric, PseudoMetric};

use super::space::FiniteMetricSpace;

#[derive(Debug, Clone)]
enum Rule {
    /// Every enumerated element's permutation of the space points.
    Table(HashMap<Element, Box<[usize]>>),
    /// `g.p = p + A g` for a lattice group acting on a lattice window; points
    /// pushed outside the window have no image.
    Translation {
        map: Vec<Vec<i64>>,
        lookup: HashMap<Vec<i64>, usize>,
    },
}

/// An isometric action of a group model on a finite metric space.
///
/// Finite groups act through generator images; the action of every element
/// is tabulated once by breadth-first search, which also verifies that the
/// images define a homomorphism. Lattice groups act on lattice windows by
/// translation, and only a ball of elements is enumerated.
#[derive(Debug, Clone)]
pub struct GroupAction {
    group: GroupModel,
    space: FiniteMetricSpace,
    elements: ElementSet,
    rule: Rule,
}

impl GroupAction {
    /// Builds the action in which generator `k` permutes the points by
    /// `images[k]` (0-based point indices).
    pub fn from_generator_images(
        group: GroupModel,
        space: FiniteMetricSpace,
        images: Vec<Vec<usize>>,
        cap: usize,
    ) -> Result<Self> {
        let n = space.len();
        if images.len() != group.generators().len() {
            return Err(Error::Precondition(format!(
                "{} generator images for {} generators",
                images.len(),
                group.generators().len()
            )));
        }
        for (k, img) in images.iter().enumerate() {
            let distinct: BTreeSet<usize> = img.iter().copied().collect();
            if img.len() != n || distinct.len() != n || img.iter().any(|&p| p >= n) {
                return Err(Error::Invariant(format!(
                    "image of generator {} is not a permutation of the {n} points",
                    k + 1
                )));
            }
            for p in 0..n {
                for q in 0..n {
                    if space.distance(p, q) != space.distance(img[p], img[q]) {
                        return Err(Error::Invariant(format!(
                            "image of generator {} is not an isometry: d({}, {}) changes",
                            k + 1,
                            space.label(p),
                            space.label(q)
                        )));
                    }
                }
            }
        }
        let gens = group.generators();
        for i in 0..gens.len() {
            for j in 0..gens.len() {
                if gens[j] == gens[i].invert() {
                    let inverse_ok = (0..n).all(|p| images[j][images[i][p]] == p);
                    if !inverse_ok {
                        return Err(Error::Invariant(format!(
                            "images of generators {} and {} are not mutually inverse",
                            i + 1,
                            j + 1
                        )));
                    }
                }
            }
        }

        let id = group.identity();
        let mut table: HashMap<Element, Box<[usize]>> = HashMap::new();
        table.insert(id.clone(), (0..n).collect());
        let mut frontier = vec![id];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for g in &frontier {
                let pg = table[g].clone();
                for (k, s) in gens.iter().enumerate() {
                    let h = g.compose(s)?;
                    // (g s).p = g.(s.p)
                    let ph: Box<[usize]> = images[k].iter().map(|&p| pg[p]).collect();
                    match table.get(&h) {
                        Some(existing) if *existing != ph => {
                            return Err(Error::Invariant(format!(
                                "generator images do not define an action: two words for {h} act differently"
                            )));
                        }
                        Some(_) => {}
                        None => {
                            if table.len() >= cap {
                                return Err(Error::Capacity { cap });
                            }
                            table.insert(h.clone(), ph);
                            next.push(h);
                        }
                    }
                }
            }
            frontier = next;
        }
        let elements = ElementSet::new(table.keys().cloned());
        Ok(GroupAction {
            group,
            space,
            elements,
            rule: Rule::Table(table),
        })
    }

    /// The left-regular action of a finite group on itself, with the word
    /// metric of `s` as the space metric (the Cayley graph of `s`).
    pub fn left_regular(group: GroupModel, s: &ElementSet, cap: usize) -> Result<Self> {
        let elements = enumerate_group(&group, cap)?;
        let d = word_metric(&group, s, &elements, cap)?;
        let points: Vec<Element> = d.points().to_vec();
        let index: HashMap<&Element, usize> = points.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let labels: Vec<String> = points.iter().map(Element::to_string).collect();
        let space = FiniteMetricSpace::new(PseudoMetric::from_matrix(labels, d.values().to_vec())?)?;
        let images = group
            .generators()
            .iter()
            .map(|s| {
                points
                    .iter()
                    .map(|p| Ok(index[&s.compose(p)?]))
                    .collect::<Result<Vec<usize>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        GroupAction::from_generator_images(group, space, images, cap)
    }

    /// `Z^n` acting on a lattice window of `Z^m` by `g.p = p + A g`, where
    /// `map` is the `m × n` integer matrix `A`. The enumerated elements are
    /// the word ball of radius `radius` for the standard generators.
    pub fn translation(
        group: GroupModel,
        space: FiniteMetricSpace,
        map: Vec<Vec<i64>>,
        radius: u32,
        cap: usize,
    ) -> Result<Self> {
        let ModelKind::Lattice { rank } = group.kind() else {
            return Err(Error::Precondition("translation actions need a lattice group".into()));
        };
        let lookup = space
            .coord_lookup()
            .ok_or_else(|| Error::Precondition("translation actions need a lattice window space".into()))?;
        let dim = space.coords().and_then(|c| c.first()).map_or(0, Vec::len);
        if map.len() != dim || map.iter().any(|row| row.len() != rank) {
            return Err(Error::Precondition(format!(
                "translation map must be {dim} × {rank}"
            )));
        }
        let s = symmetrize(&group.generator_set());
        let elements = ball(&group, &s, radius, cap)?.elements();
        Ok(GroupAction {
            group,
            space,
            elements,
            rule: Rule::Translation { map, lookup },
        })
    }

    pub fn group(&self) -> &GroupModel {
        &self.group
    }

    pub fn space(&self) -> &FiniteMetricSpace {
        &self.space
    }

    /// The enumerated group elements: the whole group for table actions, a
    /// word ball for translation actions.
    pub fn elements(&self) -> &ElementSet {
        &self.elements
    }

    /// `g.p`, or `None` when `g` was not enumerated or pushes `p` out of a
    /// lattice window.
    pub fn image(&self, g: &Element, p: usize) -> Option<usize> {
        if p >= self.space.len() {
            return None;
        }
        match &self.rule {
            Rule::Table(table) => table.get(g).map(|perm| perm[p]),
            Rule::Translation { map, lookup } => {
                let Element::Lattice(v) = g else { return None };
                let base = &self.space.coords()?[p];
                let moved: Vec<i64> = base
                    .iter()
                    .zip(map)
                    .map(|(x, row)| x + row.iter().zip(v.iter()).map(|(a, b)| a * b).sum::<i64>())
                    .collect();
                lookup.get(&moved).copied()
            }
        }
    }

    /// `g.p`, failing when the image is not available.
    pub fn act(&self, g: &Element, p: usize) -> Result<usize> {
        self.space.check_point(p)?;
        self.group.check(g)?;
        self.image(g, p).ok_or_else(|| match self.rule {
            Rule::Table(_) => Error::NotExpressible(g.to_string()),
            Rule::Translation { .. } => Error::Domain(format!(
                "{g} moves point {} outside the lattice window",
                self.space.label(p)
            )),
        })
    }

    /// Orbit of `x` under the enumerated elements.
    pub fn orbit(&self, x: usize) -> BTreeSet<usize> {
        self.elements.iter().filter_map(|g| self.image(g, x)).collect()
    }
}

/// The orbit pseudometric `d(g,h) = d_X(g.x, h.x)` on `domain`.
pub fn orbit_pseudometric(
    action: &GroupAction,
    x: usize,
    domain: &ElementSet,
) -> Result<PseudoMetric<Element>> {
    action.space().check_point(x)?;
    let points: Vec<Element> = domain.iter().cloned().collect();
    let images: Vec<usize> = points.iter().map(|g| action.act(g, x)).collect::<Result<_>>()?;
    let mut metric = PseudoMetric::from_fn(points, |i, j| action.space().distance(images[i], images[j]))?;
    metric.verify_left_invariance();
    Ok(metric)
}
