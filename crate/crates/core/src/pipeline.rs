//! Resolution of an isometric action into a word metric, a rectified metric
//! and a coset graph, with the clause-by-clause verdict.

use std::collections::BTreeMap;

use crate::actions::{
    check_cobounded, coarse_properness_check, milnor_schwarz_check, orbit_pseudometric, quasi_continuity_check,
    GroupAction, MilnorSchwarzReport, ProperReport, QuasiContinuityReport,
};
use crate::distance::Rational;
use crate::error::{Error, Result};
use crate::graphs::{build_coset_graph, car_check, two_qi_check, CarReport, CosetGraph, TwoQiReport};
use crate::group::{ElementSet, DEFAULT_CAP};
use crate::metrics::{hat_metric, validate, word_metric, PseudoMetric};
use crate::qi::{dominates, fit_qi, identity_map, Domination, QiReport};
use crate::Element;

#[derive(Debug, Clone)]
pub struct ResolveParams {
    /// Base point index.
    pub x: usize,
    /// Coboundedness radius `M`; the generating set is the Macbeath set at `3M`.
    pub m: Rational,
    /// The subgroup `V ≤ S` whose cosets are the graph vertices.
    pub v: ElementSet,
    /// `ε` for quasi-continuity with `U_y = V` at every point.
    pub eps: Rational,
    /// Diameter bound for the metrically proper set at radius `3M`; the
    /// domain diameter when unset.
    pub properness_bound: Option<Rational>,
    /// Diameter bound for the base vertex stabilizer; the domain diameter
    /// when unset.
    pub stabilizer_bound: Option<Rational>,
    pub cap: usize,
}

impl ResolveParams {
    pub fn new(x: usize, m: Rational, v: ElementSet) -> Self {
        ResolveParams {
            x,
            m,
            v,
            eps: m,
            properness_bound: None,
            stabilizer_bound: None,
            cap: DEFAULT_CAP,
        }
    }
}

/// One verdict line of [`resolve`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    pub name: &'static str,
    pub statement: &'static str,
    pub held: bool,
}

#[derive(Debug, Clone)]
pub struct ResolveReport {
    pub params: ResolveParams,
    pub word: PseudoMetric<Element>,
    pub orbit: PseudoMetric<Element>,
    pub hat: PseudoMetric<Element>,
    pub covered: bool,
    pub chainable: bool,
    pub orbit_domination: Domination,
    pub milnor_schwarz: MilnorSchwarzReport,
    pub orbit_qi: QiReport,
    pub continuity: QuasiContinuityReport,
    pub hat_valid: bool,
    pub hat_qi: QiReport,
    pub graph: CosetGraph,
    pub two_qi: TwoQiReport,
    pub graph_qi: QiReport,
    pub properness: ProperReport,
    pub car: CarReport,
    pub clauses: Vec<Clause>,
}

impl ResolveReport {
    pub fn all_hold(&self) -> bool {
        self.clauses.iter().all(|c| c.held)
    }

    /// The generating set `S`.
    pub fn generating_set(&self) -> &ElementSet {
        &self.milnor_schwarz.generating_set
    }
}

fn stage<T>(name: &'static str, r: Result<T>) -> Result<T> {
    r.map_err(|e| e.at_stage(name))
}

/// Runs the whole chain on the action's enumerated elements:
///
/// 1. the Macbeath set `S` at `3M`, whether it generates, and `d_S ⪰ d_{X,x}`;
/// 2. the word-length bound and a two-sided fit of `d_S` against `d_{X,x}`;
/// 3. quasi-continuity with `U_y = V`, and `d̂_S` over `d_{X,x}` fitted
///    against `d_S`;
/// 4. the coset graph of `(V, S)` compared with `d_S`;
/// 5. metric properness at radius `3M`, measured in `d_S`;
/// 6. the Cayley–Abels–Rosendal conditions for the coset graph.
///
/// A failed precondition stops the run with the stage name.
pub fn resolve(a: &GroupAction, params: &ResolveParams) -> Result<ResolveReport> {
    let p = params;
    let domain = a.elements().clone();
    let three_m = p.m * Rational::from_integer(3);

    let cover = stage("macbeath", check_cobounded(a, p.x, p.m))?;
    let chainable = a.space().is_chainable(p.m);
    let milnor_schwarz = stage("milnor-schwarz", milnor_schwarz_check(a, p.x, p.m, &domain, p.cap))?;
    let s = milnor_schwarz.generating_set.clone();
    let word = stage("macbeath", word_metric(a.group(), &s, &domain, p.cap))?;
    let orbit = stage("macbeath", orbit_pseudometric(a, p.x, &domain))?;
    let orbit_domination = stage("macbeath", dominates(&word, &orbit))?;
    let id_map = stage("milnor-schwarz", identity_map(&word, &orbit))?;
    let orbit_qi = stage("milnor-schwarz", fit_qi(&id_map, &word, &orbit))?;

    if !p.v.is_subset(&s) {
        return Err(Error::Precondition(format!(
            "V is not inside the generating set: {} is missing",
            p.v.difference(&s).first().expect("nonempty difference")
        ))
        .at_stage("rectify"));
    }
    let neighborhoods: BTreeMap<usize, ElementSet> = (0..a.space().len()).map(|y| (y, p.v.clone())).collect();
    let continuity = stage("rectify", quasi_continuity_check(a, p.eps, &neighborhoods))?;
    let hat = stage("rectify", hat_metric(&orbit, &s, &domain))?.metric;
    let hat_valid = validate(&hat).passed() && hat.is_left_invariant();
    let hat_qi = stage("rectify", fit_qi(&identity_map(&word, &hat)?, &word, &hat))?;

    let graph = stage("coset-graph", build_coset_graph(&domain, &p.v, &s))?;
    let two_qi = stage("coset-graph", two_qi_check(&graph, &word))?;
    let orbit_map: Vec<usize> = domain
        .iter()
        .map(|g| graph.partition().coset_of(g).expect("partition covers the domain"))
        .collect();
    let graph_qi = stage("coset-graph", fit_qi(&orbit_map, &word, graph.metric()))?;

    let (diameter, _) = word.diameter();
    let default_bound = diameter.finite().unwrap_or_else(|| Rational::from_integer(0));
    let properness = stage(
        "properness",
        coarse_properness_check(a, p.x, three_m, &domain, p.properness_bound.unwrap_or(default_bound), &word),
    )?;
    let car = stage("car", car_check(&graph, p.stabilizer_bound.unwrap_or(default_bound), &word))?;

    let generates = milnor_schwarz.generation.generates;
    let clauses = vec![
        Clause {
            name: "connected",
            statement: "S generates G and d_S dominates the orbit pseudometric",
            held: cover.covered() && chainable && generates && orbit_domination.holds_at_scale(),
        },
        Clause {
            name: "geodesic",
            statement: "d_S is quasi-isometric to the orbit pseudometric",
            held: milnor_schwarz.holds() && orbit_qi.is_quasi_isometry(),
        },
        Clause {
            name: "quasi-continuous",
            statement: "S contains V and d_S is quasi-isometric to the left-invariant pseudometric d̂_S",
            held: continuity.passes() && hat_valid && hat_qi.is_quasi_isometry(),
        },
        Clause {
            name: "non-archimedean",
            statement: "d_S is quasi-isometric to the orbit pseudometric of the coset graph G/V",
            held: two_qi.holds()
                && graph.is_connected()
                && car.vertex_transitive
                && graph_qi.is_quasi_isometry(),
        },
        Clause {
            name: "coarsely-proper",
            statement: "the set {g : g.B_3M(x) ∩ B_3M(x) ≠ ∅} is bounded, so S is bounded",
            held: properness.passes() && s.is_subset(&properness.set),
        },
        Clause {
            name: "cayley-abels-rosendal",
            statement: "the coset graph is a Cayley–Abels–Rosendal graph",
            held: car.is_car(),
        },
    ];
    Ok(ResolveReport {
        params: p.clone(),
        word,
        orbit,
        hat,
        covered: cover.covered(),
        chainable,
        orbit_domination,
        milnor_schwarz,
        orbit_qi,
        continuity,
        hat_valid,
        hat_qi,
        graph,
        two_qi,
        graph_qi,
        properness,
        car,
        clauses,
    })
}
