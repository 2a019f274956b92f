use std::collections::BTreeSet;

use crate::distance::{Distance, Rational};
use crate::error::{Error, Result};
use crate::group::{cosets, set_product, CosetPartition, Element, ElementSet};
use crate::metrics::PseudoMetric;
use crate::paths::bfs;

use super::export::{edges_csv, to_dot, WeightedEdge};

/// The graph on left cosets `G/V` joining `gV` and `hV` when `h⁻¹g ∈ VSV`
/// and the cosets differ.
#[derive(Debug, Clone)]
pub struct CosetGraph {
    partition: CosetPartition,
    generators: ElementSet,
    adjacency: Vec<Vec<usize>>,
    metric: PseudoMetric<Element>,
    base: usize,
}

/// Builds the coset graph of `(V, S)` over the enumerated group.
///
/// Adjacency is computed from every member of each coset and compared, so a
/// relation that depends on representatives is reported as an error.
pub fn build_coset_graph(elements: &ElementSet, v: &ElementSet, s: &ElementSet) -> Result<CosetGraph> {
    s.ensure_symmetric_with_identity("coset graph generating set")?;
    v.ensure_subgroup("coset graph subgroup")?;
    if !v.is_subset(s) {
        let outside = v.difference(s);
        return Err(Error::Precondition(format!(
            "subgroup is not contained in the generating set: {} is missing",
            outside.first().expect("nonempty difference")
        )));
    }
    let partition = cosets(elements, v)?;
    let vsv = set_product(&set_product(v, s)?, v)?;
    let mut adjacency = Vec::with_capacity(partition.len());
    for (i, coset) in partition.cosets().iter().enumerate() {
        let mut reference: Option<BTreeSet<usize>> = None;
        for g in coset {
            let mut nbrs = BTreeSet::new();
            for t in &vsv {
                let h = g.compose(t)?;
                let j = partition.coset_of(&h).ok_or_else(|| {
                    Error::Precondition(format!(
                        "element set is not closed under VSV: {g} * {t} = {h} is missing"
                    ))
                })?;
                if j != i {
                    nbrs.insert(j);
                }
            }
            match &reference {
                None => reference = Some(nbrs),
                Some(r) if *r != nbrs => {
                    return Err(Error::Invariant(format!(
                        "adjacency of coset {} depends on the representative",
                        partition.representative(i)
                    )))
                }
                Some(_) => {}
            }
        }
        adjacency.push(reference.expect("cosets are nonempty").into_iter().collect::<Vec<_>>());
    }
    let points: Vec<Element> = partition.representatives().cloned().collect();
    let rows: Vec<Vec<Option<u32>>> = (0..points.len()).map(|i| bfs(&adjacency, i)).collect();
    let metric = PseudoMetric::from_fn(points, |i, j| {
        rows[i][j].map_or(Distance::Infinite, |d| Distance::from_int(d as i64))
    })?;
    let identity = elements
        .first()
        .map(Element::identity_like)
        .ok_or_else(|| Error::Precondition("empty element set".into()))?;
    let base = partition
        .coset_of(&identity)
        .ok_or_else(|| Error::Precondition("element set does not contain the identity".into()))?;
    Ok(CosetGraph {
        partition,
        generators: s.clone(),
        adjacency,
        metric,
        base,
    })
}

impl CosetGraph {
    pub fn len(&self) -> usize {
        self.partition.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partition.is_empty()
    }

    pub fn partition(&self) -> &CosetPartition {
        &self.partition
    }

    pub fn subgroup(&self) -> &ElementSet {
        self.partition.subgroup()
    }

    pub fn generators(&self) -> &ElementSet {
        &self.generators
    }

    /// The vertex `V` itself.
    pub fn base(&self) -> usize {
        self.base
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    pub fn is_adjacent(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].binary_search(&j).is_ok()
    }

    /// Edges `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(i, nbrs)| nbrs.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
            .collect()
    }

    /// Graph distance between cosets, indexed by representative.
    pub fn metric(&self) -> &PseudoMetric<Element> {
        &self.metric
    }

    pub fn distance(&self, i: usize, j: usize) -> Distance {
        self.metric.get(i, j)
    }

    pub fn is_connected(&self) -> bool {
        self.metric.disconnected_pairs().is_empty()
    }

    /// Canonical payloads of the coset representatives.
    pub fn labels(&self) -> Vec<String> {
        self.partition.representatives().map(Element::payload).collect()
    }

    fn weighted_edges(&self) -> Vec<WeightedEdge> {
        self.edges().into_iter().map(|(a, b)| (a, b, None)).collect()
    }

    pub fn to_dot(&self, name: &str) -> String {
        to_dot(name, &self.labels(), &self.weighted_edges())
    }

    pub fn edges_csv(&self) -> String {
        edges_csv(&self.labels(), &self.weighted_edges())
    }
}

/// A pair of cosets on which an inequality is tight or fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetPair {
    pub from: Element,
    pub to: Element,
    pub graph: Distance,
    pub word: Distance,
}

/// Outcome of [`two_qi_check`].
///
/// Three inequalities are checked between the graph distance `d_Γ` and the
/// word metric `d_S`:
/// * `d_Γ(gV, hV) ≤ d_S(g, h)` for all coset members `g, h`;
/// * `min_{h' ∈ hV} d_S(g, h') ≤ 2 d_Γ(gV, hV)` for every member `g` (the
///   coset word distance);
/// * `d_S(g, h) ≤ 2 d_Γ(gV, hV) + 1` for all members.
///
/// Representative pairs with `d_S(g, h) > 2 d_Γ` are listed separately;
/// they are possible as soon as `V` is nontrivial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoQiReport {
    pub vertices: usize,
    pub lower_violations: Vec<CosetPair>,
    pub upper_violations: Vec<CosetPair>,
    pub orbit_violations: Vec<CosetPair>,
    /// Largest `d_Γ / d_S` over member pairs at positive word distance.
    pub max_lower_ratio: Option<Rational>,
    /// Largest coset word distance over `d_Γ`, over distinct vertices.
    pub max_upper_ratio: Option<Rational>,
    /// Vertex pairs whose coset word distance equals `2 d_Γ`.
    pub tight_pairs: Vec<CosetPair>,
    pub representative_excess: Vec<CosetPair>,
    /// Whether `d_Γ` equals `d_S` on representatives.
    pub coincide: bool,
}

impl TwoQiReport {
    pub fn holds(&self) -> bool {
        self.lower_violations.is_empty() && self.upper_violations.is_empty() && self.orbit_violations.is_empty()
    }
}

fn ratio(num: Distance, den: Distance) -> Option<Rational> {
    match (num, den) {
        (Distance::Finite(a), Distance::Finite(b)) if b != Rational::from_integer(0) => Some(a / b),
        _ => None,
    }
}

/// Compares the coset graph metric with the word metric `ds`, which must
/// contain every coset member.
pub fn two_qi_check(gamma: &CosetGraph, ds: &PseudoMetric<Element>) -> Result<TwoQiReport> {
    let part = gamma.partition();
    let n = part.len();
    let index: Vec<Vec<usize>> = part
        .cosets()
        .iter()
        .map(|c| {
            c.iter()
                .map(|g| {
                    ds.index_of(g).ok_or_else(|| {
                        Error::PointMismatch(format!("representative mismatch: {g} is not a point of the word metric"))
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let two = Rational::from_integer(2);
    let pair = |i: usize, j: usize, word: Distance| CosetPair {
        from: part.representative(i).clone(),
        to: part.representative(j).clone(),
        graph: gamma.distance(i, j),
        word,
    };
    let mut report = TwoQiReport {
        vertices: n,
        lower_violations: vec![],
        upper_violations: vec![],
        orbit_violations: vec![],
        max_lower_ratio: None,
        max_upper_ratio: None,
        tight_pairs: vec![],
        representative_excess: vec![],
        coincide: true,
    };
    for i in 0..n {
        for j in 0..n {
            let dg = gamma.distance(i, j);
            let upper = dg.scale(two);
            let orbit = upper + Distance::from_int(1);
            let mut lower_bad = None;
            let mut orbit_bad = None;
            let mut worst_min = Distance::ZERO;
            for &a in &index[i] {
                let mut min = Distance::Infinite;
                for &b in &index[j] {
                    let w = ds.get(a, b);
                    min = min.min(w);
                    if dg > w && lower_bad.is_none() {
                        lower_bad = Some(w);
                    }
                    if w > orbit && orbit_bad.is_none() {
                        orbit_bad = Some(w);
                    }
                    if let Some(r) = ratio(dg, w) {
                        report.max_lower_ratio = report.max_lower_ratio.max(Some(r));
                    }
                }
                worst_min = worst_min.max(min);
            }
            if let Some(w) = lower_bad {
                report.lower_violations.push(pair(i, j, w));
            }
            if let Some(w) = orbit_bad {
                report.orbit_violations.push(pair(i, j, w));
            }
            if worst_min > upper {
                report.upper_violations.push(pair(i, j, worst_min));
            }
            if i != j {
                if let Some(r) = ratio(worst_min, dg) {
                    report.max_upper_ratio = report.max_upper_ratio.max(Some(r));
                }
                if worst_min == upper {
                    report.tight_pairs.push(pair(i, j, worst_min));
                }
            }
            let rep = ds.get(index[i][0], index[j][0]);
            if rep > upper {
                report.representative_excess.push(pair(i, j, rep));
            }
            if rep != dg {
                report.coincide = false;
            }
        }
    }
    Ok(report)
}

/// Outcome of [`car_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CarReport {
    pub vertices: usize,
    pub connected: bool,
    pub vertex_transitive: bool,
    pub adjacency_invariant: bool,
    pub edge_orbits: usize,
    pub constant_degree: Option<usize>,
    pub stabilizer: ElementSet,
    pub stabilizer_is_subgroup_v: bool,
    pub stabilizer_diameter: Distance,
    pub stabilizer_bound: Rational,
}

impl CarReport {
    pub fn stabilizer_bounded(&self) -> bool {
        self.stabilizer_diameter <= Distance::Finite(self.stabilizer_bound)
    }

    /// Connected, vertex-transitive, finitely many edge orbits (always, for
    /// a finite graph) and a stabilizer within the bound.
    pub fn is_car(&self) -> bool {
        self.connected && self.vertex_transitive && self.adjacency_invariant && self.stabilizer_bounded()
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Checks the conditions for the coset graph to be a Cayley–Abels–Rosendal
/// graph of the enumerated group, measuring the base stabilizer in
/// `reference`.
pub fn car_check(gamma: &CosetGraph, stabilizer_bound: Rational, reference: &PseudoMetric<Element>) -> Result<CarReport> {
    let part = gamma.partition();
    let n = part.len();
    let elements: Vec<&Element> = part.elements().collect();
    // Left multiplication by g on vertex indices.
    let translate = |g: &Element| -> Result<Vec<usize>> {
        (0..n)
            .map(|i| {
                let h = g.compose(part.representative(i))?;
                part.coset_of(&h)
                    .ok_or_else(|| Error::Precondition(format!("element set is not closed: {g} * {} is missing", part.representative(i))))
            })
            .collect()
    };
    let base = gamma.base();
    let mut vertex_transitive = true;
    for j in 0..n {
        let g = part.representative(j);
        let moved: Result<BTreeSet<Element>> = part.coset(base).iter().map(|x| g.compose(x)).collect();
        if moved? != *part.coset(j).members() {
            vertex_transitive = false;
        }
    }
    let edges = gamma.edges();
    let edge_index: std::collections::HashMap<(usize, usize), usize> =
        edges.iter().enumerate().map(|(k, &e)| (e, k)).collect();
    let mut parent: Vec<usize> = (0..edges.len()).collect();
    let mut adjacency_invariant = true;
    let mut stabilizer = BTreeSet::new();
    for g in &elements {
        let t = translate(g)?;
        if t[base] == base {
            stabilizer.insert((*g).clone());
        }
        for (k, &(a, b)) in edges.iter().enumerate() {
            let (x, y) = (t[a].min(t[b]), t[a].max(t[b]));
            match edge_index.get(&(x, y)) {
                Some(&m) => {
                    let (ra, rb) = (find(&mut parent, k), find(&mut parent, m));
                    parent[ra] = rb;
                }
                None => adjacency_invariant = false,
            }
        }
    }
    let edge_orbits = (0..edges.len()).filter(|&k| find(&mut parent, k) == k).count();
    let degrees: BTreeSet<usize> = (0..n).map(|i| gamma.degree(i)).collect();
    let constant_degree = if degrees.len() == 1 { degrees.first().copied() } else { None };
    let stabilizer = ElementSet::from_btree(stabilizer);
    let indices = stabilizer
        .iter()
        .map(|g| {
            reference
                .index_of(g)
                .ok_or_else(|| Error::PointMismatch(format!("{g} is not a point of the reference metric")))
        })
        .collect::<Result<Vec<_>>>()?;
    let (stabilizer_diameter, _) = reference.diameter_of(&indices);
    Ok(CarReport {
        vertices: n,
        connected: gamma.is_connected(),
        vertex_transitive,
        adjacency_invariant,
        edge_orbits,
        constant_degree,
        stabilizer_is_subgroup_v: stabilizer == *gamma.subgroup(),
        stabilizer,
        stabilizer_diameter,
        stabilizer_bound,
    })
}
