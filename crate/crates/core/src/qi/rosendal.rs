use std::fmt;

use crate::error::{Error, Result};
use crate::group::{set_product, Element, ElementSet};

/// Verdict of [`rosendal_criterion`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CbVerdict {
    CertifiedBounded,
    /// Even the whole pool fails for every `k ≤ k_max`.
    CertifiedUnboundedAtScale,
    Inconclusive,
}

impl fmt::Display for CbVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CbVerdict::CertifiedBounded => "certified-bounded",
            CbVerdict::CertifiedUnboundedAtScale => "certified-unbounded-at-scale",
            CbVerdict::Inconclusive => "inconclusive",
        })
    }
}

/// `A ⊆ (FU)^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub f: ElementSet,
    pub u: ElementSet,
    pub k: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CbReport {
    pub verdict: CbVerdict,
    pub certificate: Option<Certificate>,
    pub subsets_tried: usize,
    /// An element of `A` outside `(FU)^{k_max}` for the whole pool, when the
    /// pool was searched.
    pub witness: Option<Element>,
}

/// `(FU)^k` as the product of exactly `k` factors from `FU`, built from the
/// left so that it does not share the search's evaluation order.
pub fn fu_power(f: &ElementSet, u: &ElementSet, k: u32) -> Result<ElementSet> {
    let fu = set_product(f, u)?;
    let mut acc = fu.clone();
    for _ in 1..k {
        acc = set_product(&fu, &acc)?;
    }
    Ok(acc)
}

/// Re-checks a certificate against `a` by recomputing the product set.
pub fn verify_certificate(a: &ElementSet, c: &Certificate) -> Result<bool> {
    Ok(c.k >= 1 && a.is_subset(&fu_power(&c.f, &c.u, c.k)?))
}

/// Searches `F ⊆ pool` with `|F| ≤ f_size_max` and `1 ≤ k ≤ k_max` for
/// `A ⊆ (FU)^k`.
///
/// Subsets are tried by increasing size, in lexicographic order of their
/// canonically ordered members; for each subset `k` grows until the power
/// covers `A`, stops changing, or reaches `k_max`. A certificate is verified
/// with [`verify_certificate`] before it is returned.
pub fn rosendal_criterion(
    a: &ElementSet,
    u: &ElementSet,
    pool: &ElementSet,
    k_max: u32,
    f_size_max: usize,
) -> Result<CbReport> {
    if !u.contains_identity() {
        return Err(Error::Precondition("U must contain the identity".into()));
    }
    let pool_vec: Vec<&Element> = pool.iter().collect();
    let max_size = f_size_max.min(pool_vec.len());
    let mut subsets_tried = 0;
    let mut witness = None;
    for size in 1..=max_size {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            subsets_tried += 1;
            let f: ElementSet = idx.iter().map(|&i| pool_vec[i].clone()).collect();
            let fu = set_product(&f, u)?;
            let mut power = fu.clone();
            for k in 1..=k_max {
                if a.is_subset(&power) {
                    let certificate = Certificate { f, u: u.clone(), k };
                    if !verify_certificate(a, &certificate)? {
                        return Err(Error::Invariant(format!(
                            "certificate with k = {k} fails independent recomputation"
                        )));
                    }
                    return Ok(CbReport {
                        verdict: CbVerdict::CertifiedBounded,
                        certificate: Some(certificate),
                        subsets_tried,
                        witness: None,
                    });
                }
                if k == k_max {
                    break;
                }
                let next = set_product(&power, &fu)?;
                if next == power {
                    break;
                }
                power = next;
            }
            if size == pool_vec.len() {
                witness = a.difference(&power).first().cloned();
            }
            // next combination
            let mut i = size;
            while i > 0 && idx[i - 1] == pool_vec.len() - size + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    // A stabilized power at the full pool fails for every larger k as well,
    // but only k ≤ k_max is claimed.
    let verdict = if max_size == pool_vec.len() && !pool_vec.is_empty() {
        CbVerdict::CertifiedUnboundedAtScale
    } else {
        CbVerdict::Inconclusive
    };
    Ok(CbReport {
        verdict,
        certificate: None,
        subsets_tried,
        witness,
    })
}

/// Outcome of [`exhaustion_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExhaustionReport {
    /// Least level `n` with `A ⊆ U_n`.
    pub contained_at: Option<i32>,
    /// An element of `A` outside the top level.
    pub witness: Option<Element>,
}

/// Finds the first level of the chain `U_start ⊆ U_{start+1} ⊆ …` that
/// contains `A`, after checking `U_n ⊆ U_{n+1}` and `U_n U_n ⊆ U_{n+1}`.
pub fn exhaustion_check(a: &ElementSet, chain: &[ElementSet], start: i32) -> Result<ExhaustionReport> {
    for (i, w) in chain.windows(2).enumerate() {
        let n = start + i as i32;
        if !w[0].is_subset(&w[1]) {
            return Err(Error::Precondition(format!("level {n} is not contained in level {}", n + 1)));
        }
        let square = set_product(&w[0], &w[0])?;
        if !square.is_subset(&w[1]) {
            return Err(Error::Precondition(format!(
                "level {n} squared is not contained in level {}: {} is missing",
                n + 1,
                square.difference(&w[1]).first().expect("nonempty difference")
            )));
        }
    }
    if let Some(i) = chain.iter().position(|u| a.is_subset(u)) {
        return Ok(ExhaustionReport {
            contained_at: Some(start + i as i32),
            witness: None,
        });
    }
    let top = chain.last().cloned().unwrap_or_default();
    Ok(ExhaustionReport {
        contained_at: None,
        witness: a.difference(&top).first().cloned(),
    })
}
