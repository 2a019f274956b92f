use std::collections::HashMap;
use std::fmt::{self, Display};
use std::hash::Hash;

use crate::distance::Distance;
use crate::error::{Error, Result};
use crate::group::Element;

/// A pseudometric on a finite ordered point set, stored as a dense row-major
/// matrix of exact distances. `Distance::Infinite` marks pairs that a
/// truncated construction could not connect.
///
/// The metric axioms are *not* enforced by the raw constructors so that
/// [`validate`] can report on arbitrary matrices; every construction in this
/// crate produces matrices that pass it.
#[derive(Debug, Clone)]
pub struct PseudoMetric<P> {
    points: Vec<P>,
    index: HashMap<P, usize>,
    values: Vec<Distance>,
    left_invariant: bool,
}

impl<P: PartialEq> PartialEq for PseudoMetric<P> {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points && self.values == other.values
    }
}

impl<P: Clone + Eq + Hash + Display> PseudoMetric<P> {
    /// Builds a matrix from a row-major value vector.
    pub fn from_matrix(points: Vec<P>, values: Vec<Distance>) -> Result<Self> {
        let n = points.len();
        if values.len() != n * n {
            return Err(Error::PointMismatch(format!(
                "{} values for {n} points (expected {})",
                values.len(),
                n * n
            )));
        }
        let mut index = HashMap::with_capacity(n);
        for (i, p) in points.iter().enumerate() {
            if index.insert(p.clone(), i).is_some() {
                return Err(Error::PointMismatch(format!("duplicate point `{p}`")));
            }
        }
        Ok(PseudoMetric {
            points,
            index,
            values,
            left_invariant: false,
        })
    }

    pub fn from_fn(points: Vec<P>, mut f: impl FnMut(usize, usize) -> Distance) -> Result<Self> {
        let n = points.len();
        let mut values = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                values.push(f(i, j));
            }
        }
        Self::from_matrix(points, values)
    }

    /// The zero pseudometric, i.e. the pull-back of the action on a point.
    pub fn zero(points: Vec<P>) -> Result<Self> {
        Self::from_fn(points, |_, _| Distance::ZERO)
    }

    /// The same matrix on a sub-list of points, in the given order.
    pub fn restrict(&self, subset: &[P]) -> Result<Self> {
        let idx: Vec<usize> = subset
            .iter()
            .map(|p| self.require_index(p))
            .collect::<Result<_>>()?;
        let mut out = Self::from_fn(subset.to_vec(), |i, j| self.get(idx[i], idx[j]))?;
        out.left_invariant = false;
        Ok(out)
    }

    pub fn require_index(&self, p: &P) -> Result<usize> {
        self.index_of(p)
            .ok_or_else(|| Error::PointMismatch(format!("point `{p}` is not in the metric's point set")))
    }

    /// `header row of point ids, then the matrix`, with `inf` for
    /// disconnected pairs. Fields containing commas are quoted.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(self.points.iter().map(|p| p.to_string()))
            .expect("in-memory write");
        for i in 0..self.len() {
            w.write_record(self.row(i).iter().map(|d| d.to_string()))
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 output")
    }
}

impl PseudoMetric<String> {
    /// Parses the CSV layout written by [`PseudoMetric::to_csv`].
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(text.as_bytes());
        let header: Vec<String> = r
            .headers()
            .map_err(|e| Error::Domain(e.to_string()))?
            .iter()
            .map(str::to_string)
            .collect();
        let mut values = Vec::new();
        for rec in r.records() {
            let rec = rec.map_err(|e| Error::Domain(e.to_string()))?;
            for field in rec.iter() {
                values.push(field.parse::<Distance>()?);
            }
        }
        Self::from_matrix(header, values)
    }
}

impl<P> PseudoMetric<P> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[P] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &P {
        &self.points[i]
    }

    pub fn get(&self, i: usize, j: usize) -> Distance {
        self.values[i * self.points.len() + j]
    }

    pub fn row(&self, i: usize) -> &[Distance] {
        let n = self.points.len();
        &self.values[i * n..(i + 1) * n]
    }

    pub fn values(&self) -> &[Distance] {
        &self.values
    }

    /// Whether left-invariance has been verified on this point set.
    pub fn is_left_invariant(&self) -> bool {
        self.left_invariant
    }

    /// Unordered pairs `i < j` at infinite distance.
    pub fn disconnected_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if !self.get(i, j).is_finite() {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Largest entry, with a pair realizing it.
    pub fn diameter(&self) -> (Distance, Option<(usize, usize)>) {
        let all: Vec<usize> = (0..self.len()).collect();
        self.diameter_of(&all)
    }

    /// Largest entry among the given point indices.
    pub fn diameter_of(&self, indices: &[usize]) -> (Distance, Option<(usize, usize)>) {
        let mut best = Distance::ZERO;
        let mut witness = None;
        for (a, &i) in indices.iter().enumerate() {
            for &j in &indices[a..] {
                let d = self.get(i, j);
                if d > best || witness.is_none() {
                    if d > best {
                        best = d;
                    }
                    witness = Some((i, j));
                }
            }
        }
        (best, witness)
    }

    pub fn same_points(&self, other: &PseudoMetric<P>) -> bool
    where
        P: PartialEq,
    {
        self.points == other.points
    }
}

impl<P: Eq + Hash> PseudoMetric<P> {
    pub fn index_of(&self, p: &P) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn dist(&self, p: &P, q: &P) -> Option<Distance> {
        Some(self.get(self.index_of(p)?, self.index_of(q)?))
    }
}

impl PseudoMetric<Element> {
    /// Verifies `d(g,h) = d(kg,kh)` for all `k, g, h` in the point set with
    /// `kg`, `kh` also in the set, and records the result in the
    /// left-invariance flag.
    pub fn verify_left_invariance(&mut self) -> bool {
        self.left_invariant = left_invariance_witness(self).is_none();
        self.left_invariant
    }
}

/// First triple `(k, g, h)` (as indices of `k`, `g`, `h`) breaking
/// left-invariance.
fn left_invariance_witness(d: &PseudoMetric<Element>) -> Option<(usize, usize, usize)> {
    let n = d.len();
    for k in 0..n {
        let shifted: Vec<Option<usize>> = d
            .points
            .iter()
            .map(|g| d.points[k].compose(g).ok().and_then(|kg| d.index_of(&kg)))
            .collect();
        for (g, &kg) in shifted.iter().enumerate() {
            let Some(kg) = kg else { continue };
            for (h, &kh) in shifted.iter().enumerate() {
                let Some(kh) = kh else { continue };
                if d.get(g, h) != d.get(kg, kh) {
                    return Some((k, g, h));
                }
            }
        }
    }
    None
}

/// The first axiom violation found by [`validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NonzeroDiagonal { i: usize },
    Negative { i: usize, j: usize },
    Asymmetric { i: usize, j: usize },
    /// `d(a,c) > d(a,b) + d(b,c)`.
    Triangle { a: usize, b: usize, c: usize },
    LeftInvariance { k: usize, g: usize, h: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonzeroDiagonal { i } => write!(f, "nonzero diagonal at {i}"),
            Violation::Negative { i, j } => write!(f, "negative value at ({i},{j})"),
            Violation::Asymmetric { i, j } => write!(f, "asymmetric at ({i},{j})"),
            Violation::Triangle { a, b, c } => write!(f, "triangle inequality fails on ({a},{b},{c})"),
            Violation::LeftInvariance { k, g, h } => {
                write!(f, "left-invariance fails for k={k}, g={g}, h={h}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub points: usize,
    pub checked_left_invariance: bool,
    pub violation: Option<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks zero diagonal, nonnegativity, symmetry and the triangle inequality
/// on all triples, returning the first violation found.
pub fn validate<P>(d: &PseudoMetric<P>) -> ValidationReport {
    ValidationReport {
        points: d.len(),
        checked_left_invariance: false,
        violation: axiom_violation(d),
    }
}

/// [`validate`] plus the left-invariance check on group-element points.
pub fn validate_left_invariant(d: &PseudoMetric<Element>) -> ValidationReport {
    let violation = axiom_violation(d).or_else(|| {
        left_invariance_witness(d).map(|(k, g, h)| Violation::LeftInvariance { k, g, h })
    });
    ValidationReport {
        points: d.len(),
        checked_left_invariance: true,
        violation,
    }
}

fn axiom_violation<P>(d: &PseudoMetric<P>) -> Option<Violation> {
    let n = d.len();
    for i in 0..n {
        if !d.get(i, i).is_zero() {
            return Some(Violation::NonzeroDiagonal { i });
        }
    }
    for i in 0..n {
        for j in 0..n {
            if let Distance::Finite(v) = d.get(i, j) {
                if v < crate::distance::Rational::from_integer(0) {
                    return Some(Violation::Negative { i, j });
                }
            }
            if d.get(i, j) != d.get(j, i) {
                return Some(Violation::Asymmetric { i, j });
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            let ab = d.get(a, b);
            if !ab.is_finite() {
                continue;
            }
            for c in 0..n {
                if d.get(a, c) > ab + d.get(b, c) {
                    return Some(Violation::Triangle { a, b, c });
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("p{i}")).collect()
    }

    fn ints(v: &[i64]) -> Vec<Distance> {
        v.iter().map(|&x| Distance::from_int(x)).collect()
    }

    #[test]
    fn triangle_witness() {
        let d = PseudoMetric::from_matrix(labels(3), ints(&[0, 5, 10, 5, 0, 1, 10, 1, 0])).unwrap();
        let r = validate(&d);
        assert!(!r.passed());
        assert_eq!(r.violation, Some(Violation::Triangle { a: 0, b: 1, c: 2 }));
    }

    #[test]
    fn zero_matrix_passes() {
        let d: PseudoMetric<String> = PseudoMetric::zero(labels(4)).unwrap();
        assert!(validate(&d).passed());
    }

    #[test]
    fn axioms_reported() {
        let d = PseudoMetric::from_matrix(labels(2), ints(&[1, 0, 0, 0])).unwrap();
        assert_eq!(validate(&d).violation, Some(Violation::NonzeroDiagonal { i: 0 }));
        let d = PseudoMetric::from_matrix(labels(2), ints(&[0, 1, 2, 0])).unwrap();
        assert_eq!(validate(&d).violation, Some(Violation::Asymmetric { i: 0, j: 1 }));
        assert!(PseudoMetric::from_matrix(vec!["a".to_string(), "a".to_string()], ints(&[0, 0, 0, 0])).is_err());
    }

    #[test]
    fn csv_layout() {
        let mut v = ints(&[0, 1, 1, 0]);
        v[1] = Distance::Infinite;
        v[2] = Distance::Infinite;
        let d = PseudoMetric::from_matrix(vec!["(1,0)".to_string(), "b".to_string()], v).unwrap();
        let csv = d.to_csv();
        assert_eq!(csv, "\"(1,0)\",b\n0,inf\ninf,0\n");
        assert_eq!(PseudoMetric::from_csv(&csv).unwrap(), d);
        assert_eq!(d.disconnected_pairs(), vec![(0, 1)]);
    }
}
