use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::distance::{Distance, Rational};
use crate::error::{Error, Result};
use crate::group::{word_lengths, Element, ElementSet, GroupModel};
use crate::metrics::PseudoMetric;

use super::action::GroupAction;

/// Outcome of [`check_cobounded`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoboundedReport {
    pub radius: Rational,
    pub orbit: Vec<usize>,
    pub uncovered: Vec<usize>,
}

impl CoboundedReport {
    pub fn covered(&self) -> bool {
        self.uncovered.is_empty()
    }
}

/// Whether every point lies within `r` of the orbit of `x`.
pub fn check_cobounded(a: &GroupAction, x: usize, r: Rational) -> Result<CoboundedReport> {
    a.space().check_point(x)?;
    let orbit: Vec<usize> = a.orbit(x).into_iter().collect();
    let limit = Distance::Finite(r);
    let uncovered = (0..a.space().len())
        .filter(|&y| orbit.iter().all(|&o| a.space().distance(o, y) > limit))
        .collect();
    Ok(CoboundedReport {
        radius: r,
        orbit,
        uncovered,
    })
}

/// `{g ∈ ball : g.B_r(x) ∩ B_r(x) ≠ ∅}` with closed balls.
fn overlap_set(a: &GroupAction, x: usize, r: Rational, ball: &ElementSet) -> Result<ElementSet> {
    a.space().check_point(x)?;
    a.group().check_set(ball)?;
    let members = a.space().ball(x, r);
    let mut inside = vec![false; a.space().len()];
    for &y in &members {
        inside[y] = true;
    }
    Ok(ball
        .iter()
        .filter(|g| members.iter().any(|&y| a.image(g, y).is_some_and(|z| inside[z])))
        .cloned()
        .collect())
}

/// The Macbeath set of `x` at radius `m`, searched within `ball`.
///
/// The search ball must be symmetric and contain the identity so that the
/// result is too.
pub fn macbeath_set(a: &GroupAction, x: usize, m: Rational, ball: &ElementSet) -> Result<ElementSet> {
    ball.ensure_symmetric_with_identity("macbeath search ball")?;
    let s = overlap_set(a, x, m, ball)?;
    if !s.is_symmetric() || !s.contains_identity() {
        return Err(Error::Invariant(
            "macbeath set is not symmetric with identity".into(),
        ));
    }
    Ok(s)
}

/// Outcome of [`check_generates`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenerationReport {
    pub generates: bool,
    pub missing: ElementSet,
    /// Longest word length needed to reach a target.
    pub depth: u32,
}

/// Whether every element of `target` is a word in `s`. The search stops
/// once all targets are reached or `cap` elements have been seen.
pub fn check_generates(
    model: &GroupModel,
    s: &ElementSet,
    target: &ElementSet,
    cap: usize,
) -> Result<GenerationReport> {
    let lengths = word_lengths(model, s, target, cap)?;
    let missing: ElementSet = lengths
        .iter()
        .filter(|(_, l)| l.is_none())
        .map(|(g, _)| g.clone())
        .collect();
    let depth = lengths.values().flatten().copied().max().unwrap_or(0);
    Ok(GenerationReport {
        generates: missing.is_empty(),
        missing,
        depth,
    })
}

/// One element's line in a [`MilnorSchwarzReport`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MilnorSchwarzRow {
    pub element: Element,
    pub word_length: Option<u32>,
    pub displacement: Distance,
    /// `d(x, g.x)/M + 1`.
    pub bound: Distance,
    pub holds: bool,
}

/// Outcome of [`milnor_schwarz_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MilnorSchwarzReport {
    pub m: Rational,
    pub generating_radius: Rational,
    pub generating_set: ElementSet,
    pub generation: GenerationReport,
    pub rows: Vec<MilnorSchwarzRow>,
}

impl MilnorSchwarzReport {
    pub fn holds(&self) -> bool {
        self.rows.iter().all(|r| r.holds)
    }

    /// Least `bound − word length` over the rows, `None` if some element was
    /// not reached.
    pub fn min_slack(&self) -> Option<Rational> {
        self.slacks().min()
    }

    pub fn max_slack(&self) -> Option<Rational> {
        self.slacks().max()
    }

    fn slacks(&self) -> impl Iterator<Item = Rational> + '_ {
        self.rows.iter().filter_map(|r| match (r.word_length, r.bound) {
            (Some(l), Distance::Finite(b)) => Some(b - Rational::from_integer(l as i64)),
            _ => None,
        })
    }
}

/// Checks `‖g‖_S ≤ d(x, g.x)/M + 1` for every `g` in `ball`, where `S` is
/// the Macbeath set at radius `3M`.
///
/// The space must be `M`-chainable and covered by `B_M` of the orbit.
pub fn milnor_schwarz_check(
    a: &GroupAction,
    x: usize,
    m: Rational,
    ball: &ElementSet,
    cap: usize,
) -> Result<MilnorSchwarzReport> {
    if m <= Rational::zero() {
        return Err(Error::Precondition("M must be positive".into()));
    }
    let cover = check_cobounded(a, x, m)?;
    if !cover.covered() {
        return Err(Error::Precondition(format!(
            "orbit does not cover the space at radius {m}: {} uncovered, first {}",
            cover.uncovered.len(),
            a.space().label(cover.uncovered[0])
        )));
    }
    if !a.space().is_chainable(m) {
        return Err(Error::Precondition(format!("space is not {m}-chainable")));
    }
    let radius = m * Rational::from_integer(3);
    let s = macbeath_set(a, x, radius, ball)?;
    let generation = check_generates(a.group(), &s, ball, cap)?;
    let lengths = word_lengths(a.group(), &s, ball, cap)?;
    let inv_m = Rational::one() / m;
    let rows = ball
        .iter()
        .map(|g| {
            let gx = a.act(g, x)?;
            let displacement = a.space().distance(x, gx);
            let bound = displacement.scale(inv_m) + Distance::from_int(1);
            let word_length = lengths[g];
            let holds = word_length.is_some_and(|l| Distance::from_int(l as i64) <= bound);
            Ok(MilnorSchwarzRow {
                element: g.clone(),
                word_length,
                displacement,
                bound,
                holds,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MilnorSchwarzReport {
        m,
        generating_radius: radius,
        generating_set: s,
        generation,
        rows,
    })
}

/// Outcome of [`coarse_properness_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProperReport {
    pub radius: Rational,
    pub set: ElementSet,
    pub diameter: Distance,
    pub witness: Option<(Element, Element)>,
    pub bound: Rational,
}

impl ProperReport {
    pub fn passes(&self) -> bool {
        self.diameter <= Distance::Finite(self.bound)
    }
}

/// Measures `{g ∈ ball : g.B_r(x) ∩ B_r(x) ≠ ∅}` in the reference
/// pseudometric and compares its diameter with `bound`.
pub fn coarse_properness_check(
    a: &GroupAction,
    x: usize,
    r: Rational,
    ball: &ElementSet,
    bound: Rational,
    reference: &PseudoMetric<Element>,
) -> Result<ProperReport> {
    let set = overlap_set(a, x, r, ball)?;
    let indices = set
        .iter()
        .map(|g| {
            reference
                .index_of(g)
                .ok_or_else(|| Error::PointMismatch(format!("{g} is not a point of the reference metric")))
        })
        .collect::<Result<Vec<_>>>()?;
    let (diameter, pair) = reference.diameter_of(&indices);
    let witness = pair.map(|(i, j)| (reference.point(i).clone(), reference.point(j).clone()));
    Ok(ProperReport {
        radius: r,
        set,
        diameter,
        witness,
        bound,
    })
}

/// A pair `(x, g)` with `d(x, g.x) > ε`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuityViolation {
    pub point: usize,
    pub element: Element,
    pub displacement: Distance,
}

/// Outcome of [`quasi_continuity_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiContinuityReport {
    pub eps: Rational,
    pub checked: usize,
    pub violations: Vec<ContinuityViolation>,
}

impl QuasiContinuityReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `d(x, g.x) ≤ ε` for every point `x` and every `g ∈ U_x`.
pub fn quasi_continuity_check(
    a: &GroupAction,
    eps: Rational,
    neighborhoods: &BTreeMap<usize, ElementSet>,
) -> Result<QuasiContinuityReport> {
    let limit = Distance::Finite(eps);
    let mut checked = 0;
    let mut violations = Vec::new();
    for (&x, u) in neighborhoods {
        a.space().check_point(x)?;
        if !u.is_subset(a.elements()) {
            return Err(Error::Precondition(format!(
                "neighbourhood of {} is not inside the enumerated group",
                a.space().label(x)
            )));
        }
        for g in u {
            checked += 1;
            let displacement = a.space().distance(x, a.act(g, x)?);
            if displacement > limit {
                violations.push(ContinuityViolation {
                    point: x,
                    element: g.clone(),
                    displacement,
                });
            }
        }
    }
    Ok(QuasiContinuityReport {
        eps,
        checked,
        violations,
    })
}
