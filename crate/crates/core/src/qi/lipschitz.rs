use std::collections::BTreeMap;
use std::fmt::Display;
use std::hash::Hash;

use num_traits::Zero;

use crate::distance::{format_rational, Distance, Rational};
use crate::error::{Error, Result};
use crate::metrics::PseudoMetric;

/// The constraint `K ≥ b − a·L` from a pair with source distance `a` and
/// target distance `b`, with the first pair that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Constraint {
    pub a: Rational,
    pub b: Rational,
    pub pair: (usize, usize),
}

impl Constraint {
    fn value(&self, l: Rational) -> Rational {
        self.b - self.a * l
    }
}

/// A vertex of the feasible region's lower boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrontierPoint {
    pub l: Rational,
    pub k: Rational,
    /// Source index pairs whose constraints are tight here.
    pub witnesses: Vec<(usize, usize)>,
}

/// The feasible coarse Lipschitz constants of a map: all `(L, K)` with
/// `L > 0`, `K ≥ 0` and `d_Y(f x, f y) ≤ L·d_X(x, y) + K` for every pair.
///
/// The least admissible `K` is a convex, piecewise linear, nonincreasing
/// function of `L`; `frontier` lists its breakpoints at `L > 0` in increasing
/// `L` (and strictly decreasing `K`). The last point is the least `L`
/// achieving the least `K`. When no constraint forces a positive `L` the
/// frontier is empty and every `L > 0` works with `K = k_min`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LipschitzFit {
    pub pairs: usize,
    pub constraints: Vec<Constraint>,
    /// Pairs at finite source distance whose images are at infinite distance.
    pub infeasible: Vec<(usize, usize)>,
    pub frontier: Vec<FrontierPoint>,
    pub k_min: Rational,
    /// Supremum of the least `K` as `L → 0`.
    pub k_at_zero: Rational,
}

impl LipschitzFit {
    pub fn is_feasible(&self) -> bool {
        self.infeasible.is_empty()
    }

    /// Whether `L` is left free: the frontier has no vertex at positive `L`.
    pub fn l_unconstrained(&self) -> bool {
        self.frontier.is_empty()
    }

    /// The least `L` at which `K = k_min` suffices.
    pub fn best(&self) -> Option<&FrontierPoint> {
        self.frontier.last()
    }

    /// Least admissible `K` for the given `L`.
    pub fn min_k(&self, l: Rational) -> Rational {
        self.constraints
            .iter()
            .map(|c| c.value(l))
            .fold(Rational::zero(), Rational::max)
    }

    /// Every constraint holds at `(L, K)`.
    pub fn satisfies(&self, l: Rational, k: Rational) -> bool {
        self.is_feasible() && l > Rational::zero() && k >= self.min_k(l)
    }

    /// `(L, K)` is feasible and lowering either coordinate, by any amount,
    /// breaks a constraint: some constraint (including `K ≥ 0`) is tight, and
    /// some tight constraint has positive slope.
    pub fn is_extremal(&self, l: Rational, k: Rational) -> bool {
        if !self.satisfies(l, k) {
            return false;
        }
        let tight: Vec<&Constraint> = self.constraints.iter().filter(|c| c.value(l) == k).collect();
        let k_tight = k.is_zero() || !tight.is_empty();
        let l_tight = tight.iter().any(|c| c.a > Rational::zero());
        k_tight && l_tight
    }

    /// Frontier CSV with columns `L,K,witness`.
    pub fn frontier_csv(&self, label: impl Fn(usize) -> String) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(["L", "K", "witness"]).expect("in-memory write");
        for p in &self.frontier {
            let witness = p
                .witnesses
                .first()
                .map(|&(i, j)| format!("{}~{}", label(i), label(j)))
                .unwrap_or_default();
            w.write_record([format_rational(&p.l), format_rational(&p.k), witness])
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8 fields")
    }
}

/// Fits from raw `(source, target)` distance pairs.
pub(crate) fn fit_pairs(pairs: impl IntoIterator<Item = ((usize, usize), Distance, Distance)>) -> LipschitzFit {
    // For each slope only the largest intercept matters.
    let mut by_slope: BTreeMap<Rational, (Rational, (usize, usize))> = BTreeMap::new();
    let mut infeasible = Vec::new();
    let mut count = 0;
    for (pair, dx, dy) in pairs {
        count += 1;
        let Distance::Finite(a) = dx else { continue };
        let Distance::Finite(b) = dy else {
            infeasible.push(pair);
            continue;
        };
        if b.is_zero() {
            continue;
        }
        let slot = by_slope.entry(a).or_insert((b, pair));
        if b > slot.0 {
            *slot = (b, pair);
        }
    }
    let constraints: Vec<Constraint> = by_slope.into_iter().map(|(a, (b, pair))| Constraint { a, b, pair }).collect();
    let (frontier, k_min, k_at_zero) = envelope(&constraints);
    LipschitzFit {
        pairs: count,
        constraints,
        infeasible,
        frontier,
        k_min,
        k_at_zero,
    }
}

/// Walks the upper envelope of `K = max(0, b_i − a_i L)` from `L = 0`.
fn envelope(constraints: &[Constraint]) -> (Vec<FrontierPoint>, Rational, Rational) {
    let zero = Rational::zero();
    let floor = Constraint {
        a: zero,
        b: zero,
        pair: (usize::MAX, usize::MAX),
    };
    let mut lines: Vec<Constraint> = constraints.to_vec();
    if lines.first().is_none_or(|c| !c.a.is_zero()) {
        lines.insert(0, floor);
    }
    // lines are sorted by slope; at L = 0 the highest intercept wins, ties
    // going to the flattest line.
    let k_at_zero = lines.iter().map(|c| c.b).max().unwrap_or(zero);
    let mut current = lines.iter().position(|c| c.b == k_at_zero).expect("nonempty");
    let mut frontier: Vec<FrontierPoint> = Vec::new();
    while current > 0 {
        let cur = lines[current];
        let mut best: Option<(Rational, usize)> = None;
        for (i, c) in lines[..current].iter().enumerate() {
            let l = (cur.b - c.b) / (cur.a - c.a);
            if best.is_none_or(|(bl, _)| l < bl) {
                best = Some((l, i));
            }
        }
        let (l, next) = best.expect("flatter lines exist");
        let k = lines[next].value(l);
        let witnesses = lines
            .iter()
            .filter(|c| c.value(l) == k && c.pair.0 != usize::MAX)
            .map(|c| c.pair)
            .collect();
        if l > zero {
            frontier.push(FrontierPoint { l, k, witnesses });
        }
        current = next;
    }
    let k_min = lines[0].b.max(zero);
    (frontier, k_min, k_at_zero)
}

/// Coarse Lipschitz constants of `f`, where `f[i]` is the `d_Y` index of the
/// image of the `i`-th `d_X` point.
///
/// Pairs at infinite source distance are unconstrained; a pair at finite
/// source distance mapping to an infinite one makes the fit infeasible.
pub fn fit_coarse_lipschitz<P, Q>(f: &[usize], dx: &PseudoMetric<P>, dy: &PseudoMetric<Q>) -> Result<LipschitzFit>
where
    P: Clone + Eq + Hash + Display,
    Q: Clone + Eq + Hash + Display,
{
    check_map(f, dx.len(), dy.len())?;
    let n = dx.len();
    Ok(fit_pairs(
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| ((i, j), dx.get(i, j), dy.get(f[i], f[j]))),
    ))
}

pub(crate) fn check_map(f: &[usize], domain: usize, codomain: usize) -> Result<()> {
    if f.len() != domain {
        return Err(Error::PointMismatch(format!(
            "map has {} images for {domain} source points",
            f.len()
        )));
    }
    if let Some(&bad) = f.iter().find(|&&y| y >= codomain) {
        return Err(Error::PointMismatch(format!(
            "image index {bad} is outside the target ({codomain} points)"
        )));
    }
    Ok(())
}

/// The identity map between two pseudometrics on the same point list.
pub fn identity_map<P>(dx: &PseudoMetric<P>, dy: &PseudoMetric<P>) -> Result<Vec<usize>>
where
    P: Clone + Eq + Hash + Display,
{
    dx.points()
        .iter()
        .map(|p| dy.require_index(p))
        .collect::<Result<Vec<_>>>()
        .and_then(|f| {
            if f.len() == dy.len() {
                Ok(f)
            } else {
                Err(Error::PointMismatch("point sets differ".into()))
            }
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    fn line_metric(n: i64, scale: i64) -> PseudoMetric<String> {
        PseudoMetric::from_fn((0..n).map(|i| i.to_string()).collect(), |i, j| {
            Distance::from_int(scale * (i as i64 - j as i64).abs())
        })
        .unwrap()
    }

    /// Least K at L by scanning every pair.
    fn brute_min_k(dx: &PseudoMetric<String>, dy: &PseudoMetric<String>, l: Rational) -> Rational {
        let mut k = q(0);
        for i in 0..dx.len() {
            for j in 0..dx.len() {
                let (Distance::Finite(a), Distance::Finite(b)) = (dx.get(i, j), dy.get(i, j)) else { continue };
                k = k.max(b - a * l);
            }
        }
        k
    }

    #[test]
    fn scaling_forces_l() {
        let d = line_metric(6, 1);
        let d2 = line_metric(6, 2);
        let f = identity_map(&d, &d2).unwrap();
        let fit = fit_coarse_lipschitz(&f, &d, &d2).unwrap();
        assert_eq!(fit.frontier.len(), 1);
        let best = fit.best().unwrap();
        assert_eq!((best.l, best.k), (q(2), q(0)));
        assert!(fit.is_extremal(q(2), q(0)));
        assert!(!fit.satisfies(Rational::new(19, 10), q(0)));
        assert_eq!(fit.min_k(q(1)), q(5));
    }

    #[test]
    fn constant_map_leaves_l_free() {
        let d = line_metric(5, 1);
        let f = vec![0; 5];
        let fit = fit_coarse_lipschitz(&f, &d, &d).unwrap();
        assert!(fit.l_unconstrained());
        assert_eq!(fit.k_min, q(0));
        assert!(fit.satisfies(Rational::new(1, 1000), q(0)));
    }

    #[test]
    fn envelope_matches_brute_force() {
        // d_Y = min(d_X, 3) + [d_X odd]: a capped, jittered line.
        let dx = line_metric(9, 1);
        let dy = PseudoMetric::from_fn(dx.points().to_vec(), |i, j| {
            let k = (i as i64 - j as i64).abs();
            Distance::from_int(if k == 0 { 0 } else { k.min(3) + k % 2 })
        })
        .unwrap();
        let f = identity_map(&dx, &dy).unwrap();
        let fit = fit_coarse_lipschitz(&f, &dx, &dy).unwrap();
        for p in &fit.frontier {
            assert_eq!(p.k, brute_min_k(&dx, &dy, p.l));
            assert!(fit.is_extremal(p.l, p.k), "{p:?}");
        }
        for w in fit.frontier.windows(2) {
            assert!(w[0].l < w[1].l && w[0].k > w[1].k);
        }
        for step in 1..60 {
            let l = Rational::new(step, 10);
            assert_eq!(fit.min_k(l), brute_min_k(&dx, &dy, l));
        }
    }

    #[test]
    fn collapsed_pairs_need_k() {
        let dx = PseudoMetric::from_fn(vec!["a".to_string(), "b".to_string()], |_, _| Distance::ZERO).unwrap();
        let dy = line_metric(2, 3);
        let fit = fit_coarse_lipschitz(&[0, 1], &dx, &dy).unwrap();
        assert!(fit.is_feasible());
        assert!(fit.l_unconstrained());
        assert_eq!(fit.k_min, q(3));
    }

    #[test]
    fn infinite_targets_are_infeasible() {
        let dx = line_metric(2, 1);
        let dy = PseudoMetric::from_fn(vec!["a".to_string(), "b".to_string()], |i, j| {
            if i == j { Distance::ZERO } else { Distance::Infinite }
        })
        .unwrap();
        let fit = fit_coarse_lipschitz(&[0, 1], &dx, &dy).unwrap();
        assert!(!fit.is_feasible());
        assert_eq!(fit.infeasible, vec![(0, 1)]);
        let back = fit_coarse_lipschitz(&[0, 1], &dy, &dx).unwrap();
        assert!(back.is_feasible());
    }
}
