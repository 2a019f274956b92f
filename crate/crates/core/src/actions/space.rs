use std::collections::HashMap;

use crate::distance::{Distance, Rational};
use crate::error::{Error, Result};
use crate::metrics::{validate, PseudoMetric};
use crate::paths::bfs;

/// A finite metric space with labelled points. Lattice windows also carry
/// integer coordinates so translation actions can be evaluated.
#[derive(Debug, Clone)]
pub struct FiniteMetricSpace {
    metric: PseudoMetric<String>,
    coords: Option<Vec<Vec<i64>>>,
    genuine: bool,
}

impl FiniteMetricSpace {
    /// Wraps a pseudometric on labelled points. The matrix must pass
    /// [`validate`]; `is_genuine` reports whether distinct points are at
    /// positive distance.
    pub fn new(metric: PseudoMetric<String>) -> Result<Self> {
        let report = validate(&metric);
        if let Some(v) = report.violation {
            return Err(Error::Invariant(format!("space metric: {v}")));
        }
        let n = metric.len();
        let genuine = (0..n).all(|i| (0..n).all(|j| i == j || !metric.get(i, j).is_zero()));
        Ok(FiniteMetricSpace {
            metric,
            coords: None,
            genuine,
        })
    }

    /// The `n`-cycle graph with points `0..n` and path distance.
    pub fn cycle(n: usize) -> Self {
        let labels = (0..n).map(|i| i.to_string()).collect();
        let metric = PseudoMetric::from_fn(labels, |i, j| {
            let k = i.abs_diff(j);
            Distance::from_int(k.min(n - k) as i64)
        })
        .expect("distinct labels");
        FiniteMetricSpace::new(metric).expect("cycle metric")
    }

    /// A single point.
    pub fn point() -> Self {
        FiniteMetricSpace::new(PseudoMetric::zero(vec!["*".to_string()]).expect("one label"))
            .expect("point metric")
    }

    /// The integer points of `Z^rank` with `ℓ¹` norm at most `radius`, under
    /// the `ℓ¹` metric, in lexicographic coordinate order.
    pub fn lattice_window(rank: usize, radius: i64) -> Self {
        let mut coords: Vec<Vec<i64>> = vec![vec![]];
        for _ in 0..rank {
            coords = coords
                .into_iter()
                .flat_map(|c| {
                    (-radius..=radius).map(move |x| {
                        let mut c = c.clone();
                        c.push(x);
                        c
                    })
                })
                .collect();
        }
        coords.retain(|c| c.iter().map(|x| x.abs()).sum::<i64>() <= radius);
        coords.sort();
        let labels = coords.iter().map(|c| lattice_label(c)).collect();
        let metric = PseudoMetric::from_fn(labels, |i, j| {
            Distance::from_int(coords[i].iter().zip(&coords[j]).map(|(a, b)| (a - b).abs()).sum())
        })
        .expect("distinct labels");
        FiniteMetricSpace {
            metric,
            coords: Some(coords),
            genuine: true,
        }
    }

    pub fn len(&self) -> usize {
        self.metric.len()
    }

    pub fn is_empty(&self) -> bool {
        self.metric.is_empty()
    }

    pub fn metric(&self) -> &PseudoMetric<String> {
        &self.metric
    }

    pub fn label(&self, i: usize) -> &str {
        self.metric.point(i)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.metric.index_of(&label.to_string())
    }

    pub fn distance(&self, p: usize, q: usize) -> Distance {
        self.metric.get(p, q)
    }

    pub fn is_genuine(&self) -> bool {
        self.genuine
    }

    pub fn coords(&self) -> Option<&[Vec<i64>]> {
        self.coords.as_deref()
    }

    pub(crate) fn coord_lookup(&self) -> Option<HashMap<Vec<i64>, usize>> {
        self.coords
            .as_ref()
            .map(|c| c.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect())
    }

    pub(crate) fn check_point(&self, p: usize) -> Result<()> {
        if p < self.len() {
            Ok(())
        } else {
            Err(Error::Domain(format!("point index {p} is not in the space ({} points)", self.len())))
        }
    }

    /// The closed ball `{y : d(x,y) ≤ r}` as sorted point indices.
    pub fn ball(&self, center: usize, r: Rational) -> Vec<usize> {
        let r = Distance::Finite(r);
        (0..self.len()).filter(|&y| self.distance(center, y) <= r).collect()
    }

    /// Whether any two points are joined by a chain whose steps have length
    /// at most `step`.
    pub fn is_chainable(&self, step: Rational) -> bool {
        if self.is_empty() {
            return true;
        }
        let step = Distance::Finite(step);
        let adj: Vec<Vec<usize>> = (0..self.len())
            .map(|i| (0..self.len()).filter(|&j| j != i && self.distance(i, j) <= step).collect())
            .collect();
        bfs(&adj, 0).iter().all(Option::is_some)
    }
}

pub(crate) fn lattice_label(c: &[i64]) -> String {
    let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}
