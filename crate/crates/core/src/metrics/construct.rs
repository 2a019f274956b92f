use std::collections::BTreeSet;

use crate::distance::{Distance, Rational};
use crate::error::{Error, Result};
use crate::group::{word_lengths, Element, ElementSet, GroupModel};
use crate::metrics::PseudoMetric;
use crate::paths::{all_pairs, metric_closure, Adjacency};

/// The word metric `d_S(g,h) = |g⁻¹h|_S` on a finite domain.
///
/// Word lengths come from a breadth-first search in the whole group that
/// visits at most `cap` elements; pairs it cannot connect are infinite.
pub fn word_metric(
    model: &GroupModel,
    s: &ElementSet,
    domain: &ElementSet,
    cap: usize,
) -> Result<PseudoMetric<Element>> {
    model.check_set(s)?;
    model.check_set(domain)?;
    s.ensure_symmetric_with_identity("generating set")?;
    let points: Vec<Element> = domain.iter().cloned().collect();
    let n = points.len();
    let mut quotients = Vec::with_capacity(n * n);
    for g in &points {
        let inv = g.invert();
        for h in &points {
            quotients.push(inv.compose(h)?);
        }
    }
    let targets: ElementSet = quotients.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let lengths = word_lengths(model, s, &targets, cap)?;
    let values = quotients
        .iter()
        .map(|q| match lengths[q] {
            Some(l) => Distance::from_int(l as i64),
            None => Distance::Infinite,
        })
        .collect();
    let mut metric = PseudoMetric::from_matrix(points, values)?;
    metric.verify_left_invariance();
    Ok(metric)
}

/// Outcome of [`hat_metric`].
#[derive(Debug, Clone)]
pub struct HatMetric {
    pub metric: PseudoMetric<Element>,
    /// `max_{s ∈ S} d(e, s)` over the part of `S` the base metric sees.
    pub generator_diameter: Distance,
    /// Set when some generator has infinite base distance from the identity
    /// or lies outside the base metric's points.
    pub unbounded_generators: bool,
}

/// The rectified metric `d̂_S(g,h) = inf Σ d(x_{i-1}, x_i)` over chains in
/// `domain` whose steps `x_{i-1}⁻¹x_i` lie in `S`.
///
/// Computed as shortest paths on the `S`-Cayley graph of the domain with edge
/// weight `d(x, xs)`. The pointwise bound `d̂_S ≥ d` is checked.
pub fn hat_metric(
    base: &PseudoMetric<Element>,
    s: &ElementSet,
    domain: &ElementSet,
) -> Result<HatMetric> {
    s.ensure_symmetric_with_identity("generating set")?;
    let points: Vec<Element> = domain.iter().cloned().collect();
    let base_idx: Vec<usize> = points.iter().map(|p| base.require_index(p)).collect::<Result<_>>()?;
    let local: std::collections::HashMap<&Element, usize> =
        points.iter().enumerate().map(|(i, p)| (p, i)).collect();

    let mut adj: Adjacency = vec![Vec::new(); points.len()];
    for (i, x) in points.iter().enumerate() {
        for t in s {
            let y = x.compose(t)?;
            let Some(&j) = local.get(&y) else { continue };
            if i == j {
                continue;
            }
            if let Distance::Finite(w) = base.get(base_idx[i], base_idx[j]) {
                adj[i].push((j, w));
            }
        }
    }
    let values = all_pairs(&adj);
    let n = points.len();
    for i in 0..n {
        for j in 0..n {
            if values[i * n + j] < base.get(base_idx[i], base_idx[j]) {
                return Err(Error::Invariant(format!(
                    "rectified metric fell below the base metric at ({}, {})",
                    points[i], points[j]
                )));
            }
        }
    }

    let mut generator_diameter = Distance::ZERO;
    let mut unbounded = false;
    if let Some(id) = s.iter().find(|g| g.is_identity()) {
        for t in s {
            match base.dist(id, t) {
                Some(d) => {
                    generator_diameter = generator_diameter.max(d);
                    unbounded |= !d.is_finite();
                }
                None => unbounded = true,
            }
        }
    }
    let mut metric = PseudoMetric::from_matrix(points, values)?;
    metric.verify_left_invariance();
    Ok(HatMetric {
        metric,
        generator_diameter,
        unbounded_generators: unbounded,
    })
}

/// Outcome of [`rectification_bounds`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RectificationBounds {
    /// `M = max_{s ∈ S} d(e, s)`.
    pub generator_norm: Distance,
    pub eps: Rational,
    /// The closed base ball of radius `2ε` about the identity lies in `S`.
    pub eps_admissible: bool,
    /// Pairs with `d > M·d_S` or `d̂_S > M·d_S`.
    pub upper_violations: Vec<(Element, Element)>,
    /// Pairs with `d_S > (2/ε)·d̂_S + 2/ε + 1`.
    pub lower_violations: Vec<(Element, Element)>,
}

impl RectificationBounds {
    pub fn holds(&self) -> bool {
        self.eps_admissible && self.upper_violations.is_empty() && self.lower_violations.is_empty()
    }
}

/// Checks `d ≤ M·d_S`, `d̂_S ≤ M·d_S` and `d_S ≤ (2/ε)·d̂_S + 2/ε + 1` on
/// every pair of the word metric's points.
pub fn rectification_bounds(
    base: &PseudoMetric<Element>,
    ds: &PseudoMetric<Element>,
    hat: &PseudoMetric<Element>,
    s: &ElementSet,
    eps: Rational,
) -> Result<RectificationBounds> {
    if eps <= Rational::from_integer(0) {
        return Err(Error::Precondition("ε must be positive".into()));
    }
    if !ds.same_points(hat) {
        return Err(Error::PointMismatch("word and rectified metrics must share their points".into()));
    }
    let id = s
        .first()
        .map(Element::identity_like)
        .ok_or_else(|| Error::Precondition("empty generating set".into()))?;
    let e = base.require_index(&id)?;
    let mut generator_norm = Distance::ZERO;
    for t in s {
        generator_norm = generator_norm.max(base.get(e, base.require_index(t)?));
    }
    let radius = Distance::Finite(eps * Rational::from_integer(2));
    let eps_admissible = base
        .points()
        .iter()
        .enumerate()
        .all(|(i, g)| base.get(e, i) > radius || s.contains(g));
    let idx: Vec<usize> = ds.points().iter().map(|p| base.require_index(p)).collect::<Result<_>>()?;
    let slope = Rational::from_integer(2) / eps;
    let offset = Distance::Finite(slope + Rational::from_integer(1));
    let mut upper_violations = Vec::new();
    let mut lower_violations = Vec::new();
    let m = generator_norm.finite();
    for i in 0..ds.len() {
        for j in 0..ds.len() {
            let w = ds.get(i, j);
            let cap = match m {
                Some(m) => w.scale(m),
                None => Distance::Infinite,
            };
            if base.get(idx[i], idx[j]) > cap || hat.get(i, j) > cap {
                upper_violations.push((ds.point(i).clone(), ds.point(j).clone()));
            }
            if w > hat.get(i, j).scale(slope) + offset {
                lower_violations.push((ds.point(i).clone(), ds.point(j).clone()));
            }
        }
    }
    Ok(RectificationBounds {
        generator_norm,
        eps,
        eps_admissible,
        upper_violations,
        lower_violations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombineMode {
    /// Pointwise minimum, repaired to the largest pseudometric below it.
    Meet,
    /// Pointwise sum.
    Sum,
}

#[derive(Debug, Clone)]
pub struct Combined<P> {
    pub metric: PseudoMetric<P>,
    /// Set when the meet's pointwise minimum broke the triangle inequality
    /// and the shortest-path closure changed some entry.
    pub repaired: bool,
}

/// Pointwise meet or sum of two pseudometrics on the same point list.
pub fn combine<P>(a: &PseudoMetric<P>, b: &PseudoMetric<P>, mode: CombineMode) -> Result<Combined<P>>
where
    P: Clone + Eq + std::hash::Hash + std::fmt::Display,
{
    if !a.same_points(b) {
        return Err(Error::PointMismatch("combined metrics must share their point list".into()));
    }
    let mut values: Vec<Distance> = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(&x, &y)| match mode {
            CombineMode::Meet => x.min(y),
            CombineMode::Sum => x + y,
        })
        .collect();
    let repaired = mode == CombineMode::Meet && metric_closure(a.len(), &mut values);
    Ok(Combined {
        metric: PseudoMetric::from_matrix(a.points().to_vec(), values)?,
        repaired,
    })
}
