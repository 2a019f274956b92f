//! Birkhoff–Kakutani construction from a nested filtration of symmetric
//! identity neighborhoods.

use num_traits::Zero;

use crate::distance::{pow2, Distance, Rational};
use crate::error::{Error, Result};
use crate::group::{set_product, Element, ElementSet};
use crate::metrics::PseudoMetric;
use crate::paths::{all_pairs, Adjacency};

/// Nested symmetric identity neighborhoods `U_{n_min} ⊆ ... ⊆ U_{n_max}` with
/// `U_n U_n U_n ⊆ U_{n+1}`.
///
/// Below `n_min` the filtration is extended by `U_n = {e}`, so the identity
/// has norm zero. Elements outside `U_{n_max}` are outside the working group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Filtration {
    n_min: i32,
    levels: Vec<ElementSet>,
}

impl Filtration {
    /// Checks nesting, symmetry, identity membership and the cube condition
    /// at every level, naming the first failing level.
    pub fn new(n_min: i32, levels: Vec<ElementSet>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidFiltration("no levels".into()));
        }
        for (i, u) in levels.iter().enumerate() {
            let n = n_min + i as i32;
            if !u.contains_identity() {
                return Err(Error::InvalidFiltration(format!("U_{n} does not contain the identity")));
            }
            if !u.is_symmetric() {
                return Err(Error::InvalidFiltration(format!("U_{n} is not symmetric")));
            }
        }
        for (i, pair) in levels.windows(2).enumerate() {
            let n = n_min + i as i32;
            if !pair[0].is_subset(&pair[1]) {
                return Err(Error::InvalidFiltration(format!(
                    "U_{n} is not contained in U_{}",
                    n + 1
                )));
            }
            let cube = set_product(&set_product(&pair[0], &pair[0])?, &pair[0])?;
            let missing = cube.iter().find(|g| !pair[1].contains(g)).cloned();
            if let Some(w) = missing {
                return Err(Error::InvalidFiltration(format!(
                    "cube condition fails at level {n}: {w} ∈ U_{n}^3 but not in U_{}",
                    n + 1
                )));
            }
        }
        Ok(Filtration { n_min, levels })
    }

    pub fn n_min(&self) -> i32 {
        self.n_min
    }

    pub fn n_max(&self) -> i32 {
        self.n_min + self.levels.len() as i32 - 1
    }

    pub fn level(&self, n: i32) -> Option<&ElementSet> {
        if n < self.n_min {
            return None;
        }
        self.levels.get((n - self.n_min) as usize)
    }

    pub fn levels(&self) -> impl Iterator<Item = (i32, &ElementSet)> {
        self.levels.iter().enumerate().map(|(i, u)| (self.n_min + i as i32, u))
    }

    /// The working group `U_{n_max}`.
    pub fn top(&self) -> &ElementSet {
        self.levels.last().expect("nonempty")
    }

    /// Least `n` with `g ∈ U_n`, or `None` for the identity.
    pub fn level_of(&self, g: &Element) -> Result<Option<i32>> {
        if g.is_identity() {
            return Ok(None);
        }
        self.levels()
            .find(|(_, u)| u.contains(g))
            .map(|(n, _)| Some(n))
            .ok_or_else(|| Error::OutOfFiltration(g.to_string()))
    }
}

/// `‖g‖ = inf{2^n : g ∈ U_n}`, which is `0` for the identity.
pub fn bk_norm(g: &Element, f: &Filtration) -> Result<Rational> {
    Ok(match f.level_of(g)? {
        None => Rational::zero(),
        Some(n) => pow2(n),
    })
}

/// The chain pseudometric `d(g,h) = inf Σ ‖x_{i-1}⁻¹ x_i‖` over chains in
/// `domain`, computed as all-pairs shortest paths on the complete graph
/// weighted by `‖x⁻¹y‖`.
///
/// The two-sided bound `½‖g⁻¹h‖ ≤ d(g,h) ≤ ‖g⁻¹h‖` is checked on every pair
/// and a violation is returned as an invariant error.
pub fn bk_pseudometric(f: &Filtration, domain: &ElementSet) -> Result<PseudoMetric<Element>> {
    let points: Vec<Element> = domain.iter().cloned().collect();
    let n = points.len();
    let mut norms = vec![Rational::zero(); n * n];
    for i in 0..n {
        let inv = points[i].invert();
        for j in 0..n {
            norms[i * n + j] = bk_norm(&inv.compose(&points[j])?, f)?;
        }
    }
    let adj: Adjacency = (0..n)
        .map(|i| (0..n).filter(|&j| j != i).map(|j| (j, norms[i * n + j])).collect())
        .collect();
    let values = all_pairs(&adj);
    let half = Rational::new(1, 2);
    for i in 0..n {
        for j in 0..n {
            let d = values[i * n + j];
            let norm = norms[i * n + j];
            let ok = matches!(d, Distance::Finite(v) if half * norm <= v && v <= norm);
            if !ok {
                return Err(Error::Invariant(format!(
                    "two-sided norm bound fails for ({}, {}): d = {d}, norm = {norm}",
                    points[i], points[j]
                )));
            }
        }
    }
    let mut metric = PseudoMetric::from_matrix(points, values)?;
    metric.verify_left_invariance();
    Ok(metric)
}
