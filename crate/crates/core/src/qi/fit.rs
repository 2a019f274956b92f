use std::fmt::Display;
use std::hash::Hash;

use num_traits::One;

use crate::distance::{Distance, Rational};
use crate::error::Result;
use crate::metrics::PseudoMetric;

use super::lipschitz::{check_map, fit_coarse_lipschitz, fit_pairs, identity_map, LipschitzFit};

/// Two-sided constant fit for a map `f : (X, d_X) → (Y, d_Y)`.
///
/// `forward` fits `d_Y ≤ L·d_X + K`. `reverse` fits `d_X ≤ L·d_Y + K'`,
/// where `K' = L·K` in the embedding form `d_X/L − K ≤ d_Y`. `shared` lists
/// the Pareto-minimal pairs `(L, max(K_f(L), K'_r(L)/L))` sampled at the
/// breakpoints of both frontiers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QiReport {
    pub forward: LipschitzFit,
    pub reverse: LipschitzFit,
    pub shared: Vec<(Rational, Rational)>,
    /// `max_y min_x d_Y(y, f x)`.
    pub coarse_surjectivity: Distance,
    /// A target point realizing the surjectivity constant.
    pub farthest: Option<usize>,
}

impl QiReport {
    pub fn is_embedding(&self) -> bool {
        self.forward.is_feasible() && self.reverse.is_feasible()
    }

    pub fn is_quasi_isometry(&self) -> bool {
        self.is_embedding() && self.coarse_surjectivity.is_finite()
    }

    /// The shared pair with the least `K`, and the least `L` among those.
    pub fn best_shared(&self) -> Option<(Rational, Rational)> {
        self.shared.last().copied()
    }
}

/// Fits both directions of `f` (see [`QiReport`]) and its coarse
/// surjectivity constant.
pub fn fit_qi<P, Q>(f: &[usize], dx: &PseudoMetric<P>, dy: &PseudoMetric<Q>) -> Result<QiReport>
where
    P: Clone + Eq + Hash + Display,
    Q: Clone + Eq + Hash + Display,
{
    let forward = fit_coarse_lipschitz(f, dx, dy)?;
    let n = dx.len();
    let reverse = fit_pairs(
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| ((i, j), dy.get(f[i], f[j]), dx.get(i, j))),
    );
    let mut ls: Vec<Rational> = forward.frontier.iter().chain(&reverse.frontier).map(|p| p.l).collect();
    if ls.is_empty() {
        ls.push(Rational::one());
    }
    ls.sort();
    ls.dedup();
    let mut shared: Vec<(Rational, Rational)> = Vec::new();
    if forward.is_feasible() && reverse.is_feasible() {
        for l in ls {
            let k = forward.min_k(l).max(reverse.min_k(l) / l);
            if shared.last().is_none_or(|&(_, prev)| k < prev) {
                shared.push((l, k));
            }
        }
    }
    let mut coarse_surjectivity = Distance::ZERO;
    let mut farthest = None;
    for y in 0..dy.len() {
        let near = f.iter().map(|&fx| dy.get(y, fx)).min().unwrap_or(Distance::Infinite);
        if farthest.is_none() || near > coarse_surjectivity {
            coarse_surjectivity = near;
            farthest = Some(y);
        }
    }
    Ok(QiReport {
        forward,
        reverse,
        shared,
        coarse_surjectivity,
        farthest,
    })
}

/// `max_x d_Y(f x, g x)`: the least `C` for which `f` and `g` are `C`-close.
pub fn closeness<Q>(f: &[usize], g: &[usize], dy: &PseudoMetric<Q>) -> Result<Distance>
where
    Q: Clone + Eq + Hash + Display,
{
    check_map(f, f.len(), dy.len())?;
    check_map(g, f.len(), dy.len())?;
    Ok(f.iter()
        .zip(g)
        .map(|(&a, &b)| dy.get(a, b))
        .max()
        .unwrap_or(Distance::ZERO))
}

/// Outcome of [`dominates`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Domination {
    pub points: usize,
    pub fit: LipschitzFit,
}

impl Domination {
    /// Some `(L, K)` works on this finite domain.
    pub fn holds_at_scale(&self) -> bool {
        self.fit.is_feasible()
    }
}

/// Whether `d ⪰ d2` on their common point set: the identity `(G, d) → (G, d2)`
/// is coarse Lipschitz.
pub fn dominates<P>(d: &PseudoMetric<P>, d2: &PseudoMetric<P>) -> Result<Domination>
where
    P: Clone + Eq + Hash + Display,
{
    let f = identity_map(d, d2)?;
    Ok(Domination {
        points: d.len(),
        fit: fit_coarse_lipschitz(&f, d, d2)?,
    })
}

/// Constants for `d1 ⪰ d3` from `(L1, K1)` for `d1 ⪰ d2` and `(L2, K2)` for
/// `d2 ⪰ d3`.
pub fn compose_constants(first: (Rational, Rational), second: (Rational, Rational)) -> (Rational, Rational) {
    (first.0 * second.0, second.0 * first.1 + second.1)
}

/// A usable `(L, K)` from a fit: the best frontier point, or `(1, k_min)`
/// when `L` is unconstrained.
pub fn some_constants(fit: &LipschitzFit) -> Option<(Rational, Rational)> {
    if !fit.is_feasible() {
        return None;
    }
    Some(match fit.best() {
        Some(p) => (p.l, p.k),
        None => (Rational::one(), fit.k_min),
    })
}

