use crate::distance::{pow2, Rational};
use crate::error::{Error, Result};
use crate::group::{cosets, CosetPartition, Element, ElementSet};
use crate::metrics::PseudoMetric;
use crate::paths::{all_pairs, Adjacency};

use super::export::{edges_csv, to_dot, WeightedEdge};

/// The tree on cosets of a chain `G_1 ≤ … ≤ G_k = G`, with an edge of
/// weight `2^{n−1}` from each coset `gG_n` to `gG_{n+1}`.
///
/// Vertices are numbered level by level, each level in canonical coset
/// order.
#[derive(Debug, Clone)]
pub struct CosetRayTree {
    levels: Vec<CosetPartition>,
    offsets: Vec<usize>,
    edges: Vec<WeightedEdge>,
    metric: PseudoMetric<String>,
}

/// Builds the ray tree of `chain` over the enumerated group. Consecutive
/// entries may coincide; the top entry must be the whole element set.
pub fn build_ray_tree(chain: &[ElementSet], elements: &ElementSet) -> Result<CosetRayTree> {
    if chain.is_empty() {
        return Err(Error::Precondition("ray tree chain is empty".into()));
    }
    for (n, g) in chain.iter().enumerate() {
        g.ensure_subgroup(&format!("chain entry {}", n + 1))?;
        if n > 0 && !chain[n - 1].is_subset(g) {
            return Err(Error::Precondition(format!(
                "chain is not nested: entry {n} is not contained in entry {}",
                n + 1
            )));
        }
    }
    if chain.last() != Some(elements) {
        return Err(Error::Precondition("top of the chain is not the whole element set".into()));
    }
    let levels: Vec<CosetPartition> = chain.iter().map(|g| cosets(elements, g)).collect::<Result<_>>()?;
    let mut offsets = Vec::with_capacity(levels.len());
    let mut total = 0;
    for l in &levels {
        offsets.push(total);
        total += l.len();
    }
    let mut labels = Vec::with_capacity(total);
    for (n, l) in levels.iter().enumerate() {
        labels.extend(l.representatives().map(|r| format!("{}G{}", r.payload(), n + 1)));
    }
    let mut adj: Adjacency = vec![Vec::new(); total];
    let mut edges = Vec::new();
    for n in 0..levels.len() - 1 {
        let w = pow2(n as i32);
        for (i, rep) in levels[n].representatives().enumerate() {
            let parent = levels[n + 1].coset_of(rep).expect("partitions cover the same elements");
            let (a, b) = (offsets[n] + i, offsets[n + 1] + parent);
            adj[a].push((b, w));
            adj[b].push((a, w));
            edges.push((a, b, Some(w)));
        }
    }
    let metric = PseudoMetric::from_matrix(labels, all_pairs(&adj))?;
    Ok(CosetRayTree {
        levels,
        offsets,
        edges,
        metric,
    })
}

impl CosetRayTree {
    /// Number of chain entries.
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn len(&self) -> usize {
        self.metric.len()
    }

    pub fn is_empty(&self) -> bool {
        self.metric.is_empty()
    }

    /// Cosets of `G_n`, for `n` from 1.
    pub fn level(&self, n: usize) -> &CosetPartition {
        &self.levels[n - 1]
    }

    /// Weight of the edges from level `n` to level `n + 1`.
    pub fn edge_weight(n: usize) -> Rational {
        pow2(n as i32 - 1)
    }

    pub fn edges(&self) -> &[WeightedEdge] {
        &self.edges
    }

    pub fn metric(&self) -> &PseudoMetric<String> {
        &self.metric
    }

    /// Vertex index of `gG_n`.
    pub fn vertex(&self, g: &Element, n: usize) -> Result<usize> {
        if n == 0 || n > self.depth() {
            return Err(Error::Domain(format!("level {n} is outside 1..={}", self.depth())));
        }
        self.levels[n - 1]
            .coset_of(g)
            .map(|i| self.offsets[n - 1] + i)
            .ok_or_else(|| Error::Domain(format!("{g} is not in the enumerated group")))
    }

    /// Least `n ≥ max(a, b)` with `gG_n = hG_n`.
    pub fn meet_level(&self, g: &Element, a: usize, h: &Element, b: usize) -> Result<usize> {
        let start = a.max(b);
        for n in start..=self.depth() {
            if self.vertex(g, n)? == self.vertex(h, n)? {
                return Ok(n);
            }
        }
        Err(Error::Invariant(format!("cosets of {g} and {h} never meet")))
    }

    /// Shortest-path distance between `gG_a` and `hG_b`.
    pub fn distance_between(&self, g: &Element, a: usize, h: &Element, b: usize) -> Result<Rational> {
        let d = self.metric.get(self.vertex(g, a)?, self.vertex(h, b)?);
        d.finite().ok_or_else(|| Error::Invariant("ray tree is disconnected".into()))
    }

    /// The up-and-down path length `Σ_{i=a}^{m−1} 2^{i−1} + Σ_{i=b}^{m−1} 2^{i−1}`
    /// through the meet level `m`.
    pub fn closed_form_between(&self, g: &Element, a: usize, h: &Element, b: usize) -> Result<Rational> {
        let m = self.meet_level(g, a, h, b)?;
        let climb = |from: usize| (from..m).map(Self::edge_weight).sum::<Rational>();
        Ok(climb(a) + climb(b))
    }
}

/// Distance from the base coset `G_1` to `gG_1`.
pub fn ray_tree_distance(t: &CosetRayTree, g: &Element) -> Result<Rational> {
    let id = g.identity_like();
    t.distance_between(&id, 1, g, 1)
}

/// Distance from `G_1` to `gG_1` with the meet level and both closed forms:
/// the one summing the edge weights, `2(2^{m−1} − 1)`, and the display
/// `2(2^m − 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RayDistanceReport {
    pub element: Element,
    pub meet_level: usize,
    pub shortest_path: Rational,
    pub weight_sum: Rational,
    pub display_form: Rational,
}

impl RayDistanceReport {
    pub fn weight_sum_matches(&self) -> bool {
        self.shortest_path == self.weight_sum
    }

    pub fn display_matches(&self) -> bool {
        self.shortest_path == self.display_form
    }
}

pub fn ray_distance_report(t: &CosetRayTree, g: &Element) -> Result<RayDistanceReport> {
    let id = g.identity_like();
    let m = t.meet_level(&id, 1, g, 1)?;
    let two = Rational::from_integer(2);
    let one = Rational::from_integer(1);
    Ok(RayDistanceReport {
        element: g.clone(),
        meet_level: m,
        shortest_path: ray_tree_distance(t, g)?,
        weight_sum: two * (pow2(m as i32 - 1) - one),
        display_form: two * (pow2(m as i32) - one),
    })
}

impl CosetRayTree {
    pub fn labels(&self) -> &[String] {
        self.metric.points()
    }

    pub fn to_dot(&self, name: &str) -> String {
        to_dot(name, self.labels(), &self.edges)
    }

    pub fn edges_csv(&self) -> String {
        edges_csv(self.labels(), &self.edges)
    }

    /// Whether the tree is connected with one edge fewer than vertices.
    pub fn is_tree(&self) -> bool {
        self.metric.disconnected_pairs().is_empty() && self.edges.len() + 1 == self.len()
    }
}
