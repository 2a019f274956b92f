//! Acceptance suite: one PASS/FAIL line per criterion, all comparisons exact.
//!
//! Every check recomputes its expected values with a small oracle written
//! here (Floyd–Warshall, breadth-first search, min-plus chain products,
//! brute-force set products) and compares against the library.

#![allow(clippy::needless_range_loop)]

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::path::{Path, PathBuf};
use std::process::Command as Process;
use std::time::{Duration, Instant};

use coarsekit::actions::{milnor_schwarz_check, GroupAction};
use coarsekit::distance::pow2;
use coarsekit::graphs::{build_coset_graph, build_ray_tree, ray_distance_report, ray_tree_distance, two_qi_check};
use coarsekit::group::{enumerate_group, set_product, symmetrize, DEFAULT_CAP};
use coarsekit::metrics::{
    bk_pseudometric, hat_metric, rectification_bounds, validate, validate_left_invariant, word_metric, Filtration,
};
use coarsekit::qi::{fit_coarse_lipschitz, identity_map, rosendal_criterion, LipschitzFit};
use coarsekit::{Distance, Element, ElementSet, GroupModel, PseudoMetric, Rational};
use coarsekit_cli::{parse_input, run_command, Command, Options, ProblemSpec};

type Outcome = Result<String, String>;

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

fn load(name: &str) -> ProblemSpec {
    let path = corpus_dir().join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_input(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn set(spec: &ProblemSpec, name: &str) -> ElementSet {
    spec.set(name).unwrap_or_else(|| panic!("corpus set `{name}` missing")).clone()
}

fn int(v: i64) -> Rational {
    Rational::from_integer(v)
}

fn fin(d: Distance) -> Rational {
    d.finite().expect("finite distance")
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Every pseudometric built by the suite, audited for criterion 9.
#[derive(Default)]
struct Audit {
    checked: usize,
    failures: Vec<String>,
}

impl Audit {
    fn record_group(&mut self, what: &str, d: &PseudoMetric<Element>) {
        self.checked += 1;
        let v = validate(d);
        if !v.passed() {
            self.failures.push(format!("{what}: {:?}", v.violation));
        } else if d.is_left_invariant() && !validate_left_invariant(d).passed() {
            self.failures.push(format!("{what}: declared left-invariant but is not"));
        }
    }

    fn record<P: Clone + std::fmt::Debug>(&mut self, what: &str, d: &PseudoMetric<P>) {
        self.checked += 1;
        let v = validate(d);
        if !v.passed() {
            self.failures.push(format!("{what}: {:?}", v.violation));
        }
    }
}

struct Indexed {
    elements: Vec<Element>,
    index: HashMap<Element, usize>,
}

impl Indexed {
    fn new(set: &ElementSet) -> Self {
        let elements: Vec<Element> = set.iter().cloned().collect();
        let index = elements.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect();
        Indexed { elements, index }
    }

    fn len(&self) -> usize {
        self.elements.len()
    }

    fn at(&self, g: &Element) -> usize {
        self.index[g]
    }
}

/// Floyd–Warshall on hop counts of the right Cayley graph g to gs.
fn cayley_apsp(dom: &Indexed, s: &ElementSet) -> Vec<Vec<Option<u32>>> {
    let n = dom.len();
    let mut d = vec![vec![None; n]; n];
    for (i, g) in dom.elements.iter().enumerate() {
        d[i][i] = Some(0);
        for t in s {
            let h = g.compose(t).unwrap();
            if let Some(&j) = dom.index.get(&h) {
                if i != j {
                    d[i][j] = Some(1);
                }
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            let Some(ik) = d[i][k] else { continue };
            for j in 0..n {
                if let Some(kj) = d[k][j] {
                    if d[i][j].is_none_or(|v| ik + kj < v) {
                        d[i][j] = Some(ik + kj);
                    }
                }
            }
        }
    }
    d
}

/// BFS word lengths from the identity in the full group, one layer at a time,
/// until every target is reached or `max_len` layers have been explored.
fn word_lengths_oracle(s: &ElementSet, targets: &ElementSet, max_len: u32) -> BTreeMap<Element, u32> {
    let id = targets.first().expect("nonempty").identity_like();
    let mut seen: HashMap<Element, u32> = HashMap::from([(id.clone(), 0)]);
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        let l = seen[&g];
        if l == max_len || targets.iter().all(|t| seen.contains_key(t)) {
            continue;
        }
        for t in s {
            let h = g.compose(t).unwrap();
            if !seen.contains_key(&h) {
                seen.insert(h.clone(), l + 1);
                queue.push_back(h);
            }
        }
    }
    targets.iter().filter_map(|t| seen.get(t).map(|&l| (t.clone(), l))).collect()
}

/// `inf{2^n : g ∈ U_n}`, with the identity at 0.
fn norm_oracle(levels: &[(i32, ElementSet)], g: &Element) -> Rational {
    if g.is_identity() {
        return int(0);
    }
    let n = levels
        .iter()
        .find(|(_, u)| u.contains(g))
        .map(|(n, _)| *n)
        .expect("element inside the top level");
    pow2(n)
}

fn filtration_levels(f: &Filtration) -> Vec<(i32, ElementSet)> {
    f.levels().map(|(n, u)| (n, u.clone())).collect()
}

fn criterion_1(audit: &mut Audit) -> Outcome {
    let started = Instant::now();
    let mut pairs = 0usize;
    for file in ["s3.cgk", "z8-chain.cgk", "tree128.cgk"] {
        let spec = load(file);
        let f = spec.filtration.as_ref().expect("corpus filtration");
        let levels = filtration_levels(f);
        let d = bk_pseudometric(f, f.top()).map_err(|e| format!("{file}: {e}"))?;
        audit.record_group(file, &d);
        let half = Rational::new(1, 2);
        for (i, g) in d.points().iter().enumerate() {
            for (j, h) in d.points().iter().enumerate() {
                let norm = norm_oracle(&levels, &g.invert().compose(h).unwrap());
                let v = fin(d.get(i, j));
                ensure(norm * half <= v && v <= norm, || {
                    format!("{file}: d({g},{h}) = {v} outside [{}, {norm}]", norm * half)
                })?;
                pairs += 1;
            }
        }
    }
    let elapsed = started.elapsed();
    ensure(elapsed < Duration::from_secs(5), || format!("took {elapsed:?}"))?;
    Ok(format!("3 filtrations, {pairs} pairs, {:.2}s", elapsed.as_secs_f64()))
}

/// Minimum weight over chains g = x_0, …, x_k = h with k ≤ `max_len`, by
/// min-plus products over all intermediate points.
fn chain_oracle(dom: &Indexed, levels: &[(i32, ElementSet)], max_len: usize) -> Vec<Vec<Rational>> {
    let n = dom.len();
    let w: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| norm_oracle(levels, &dom.elements[i].invert().compose(&dom.elements[j]).unwrap()))
                .collect()
        })
        .collect();
    let mut best = w.clone();
    for _ in 1..max_len {
        let mut next = best.clone();
        for i in 0..n {
            for x in 0..n {
                let bix = best[i][x];
                for j in 0..n {
                    let c = bix + w[x][j];
                    if c < next[i][j] {
                        next[i][j] = c;
                    }
                }
            }
        }
        best = next;
    }
    best
}

fn criterion_2(audit: &mut Audit) -> Outcome {
    let mut bk_groups = 0;
    for file in ["s3.cgk", "z8-chain.cgk", "s4-chain.cgk"] {
        let spec = load(file);
        let f = spec.filtration.as_ref().expect("corpus filtration");
        let dom = Indexed::new(f.top());
        ensure(dom.len() <= 24, || format!("{file}: order {}", dom.len()))?;
        let oracle = chain_oracle(&dom, &filtration_levels(f), 4);
        let d = bk_pseudometric(f, f.top()).map_err(|e| e.to_string())?;
        audit.record_group(file, &d);
        for i in 0..dom.len() {
            for j in 0..dom.len() {
                ensure(fin(d.get(i, j)) == oracle[i][j], || {
                    format!("{file}: chain metric differs at {} ~ {}", dom.elements[i], dom.elements[j])
                })?;
            }
        }
        bk_groups += 1;
    }
    let mut word_checks = 0;
    let cases: [(&str, Option<&str>); 7] = [
        ("s3.cgk", Some("S")),
        ("s4-chain.cgk", Some("T")),
        ("s4-chain.cgk", Some("S")),
        ("z8-chain.cgk", None),
        ("z12-cycle.cgk", None),
        ("tree128.cgk", None),
        ("s3-coset.cgk", Some("S")),
    ];
    for (file, s_name) in cases {
        let spec = load(file);
        let s = s_name.map_or_else(|| symmetrize(&spec.group.generator_set()), |n| set(&spec, n));
        let elements = enumerate_group(&spec.group, DEFAULT_CAP).unwrap();
        let dom = Indexed::new(&elements);
        let apsp = cayley_apsp(&dom, &s);
        let d = word_metric(&spec.group, &s, &elements, DEFAULT_CAP).map_err(|e| e.to_string())?;
        audit.record_group(file, &d);
        for i in 0..dom.len() {
            for j in 0..dom.len() {
                let expected = apsp[i][j].map_or(Distance::Infinite, |v| Distance::from_int(v.into()));
                ensure(d.get(i, j) == expected, || {
                    format!("{file}: word metric differs at {} ~ {}", dom.elements[i], dom.elements[j])
                })?;
            }
        }
        word_checks += 1;
    }
    // Z^2 with the standard generators: the word metric is the l1 distance.
    let z2 = GroupModel::lattice(2);
    let s = symmetrize(&z2.generator_set());
    let window: ElementSet = (-4..=4)
        .flat_map(|a| (-4..=4).map(move |b| Element::lattice(vec![a, b])))
        .collect();
    let d = word_metric(&z2, &s, &window, DEFAULT_CAP).map_err(|e| e.to_string())?;
    audit.record_group("Z^2 word metric", &d);
    for (i, g) in d.points().iter().enumerate() {
        for (j, h) in d.points().iter().enumerate() {
            let (Element::Lattice(a), Element::Lattice(b)) = (g, h) else { unreachable!() };
            let l1: i64 = a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()).sum();
            ensure(d.get(i, j) == Distance::from_int(l1), || format!("Z^2: d({g},{h}) ≠ {l1}"))?;
        }
    }
    Ok(format!(
        "chain metric = exhaustive chains on {bk_groups} groups; word metric = APSP on {word_checks} Cayley graphs and l1 on Z^2"
    ))
}

/// Recomputes the rectification inequalities pairwise.
fn rectification_oracle(
    base: &PseudoMetric<Element>,
    ds: &PseudoMetric<Element>,
    hat: &PseudoMetric<Element>,
    s: &ElementSet,
    eps: Rational,
) -> Result<Rational, String> {
    let id = s.first().unwrap().identity_like();
    let e = base.index_of(&id).unwrap();
    let m = s.iter().map(|t| fin(base.get(e, base.index_of(t).unwrap()))).max().unwrap();
    for (i, g) in base.points().iter().enumerate() {
        if fin(base.get(e, i)) <= eps * int(2) && !s.contains(g) {
            return Err(format!("ε = {eps} not admissible: {g} in the 2ε ball but not in S"));
        }
    }
    let slope = int(2) / eps;
    for i in 0..base.len() {
        for j in 0..base.len() {
            let (d, w, h) = (fin(base.get(i, j)), fin(ds.get(i, j)), fin(hat.get(i, j)));
            ensure(d <= m * w, || format!("d > M·d_S at {} ~ {}", base.point(i), base.point(j)))?;
            ensure(w <= slope * h + slope + int(1), || {
                format!("d_S above the rectified bound at {} ~ {}", base.point(i), base.point(j))
            })?;
        }
    }
    Ok(m)
}

fn criterion_3(audit: &mut Audit) -> Outcome {
    let eps = Rational::new(1, 2);
    let mut notes = Vec::new();

    let z = GroupModel::lattice(1);
    let s = symmetrize(&z.generator_set());
    let dom: ElementSet = (-10..=10).map(|k| Element::lattice(vec![k])).collect();
    let pts: Vec<Element> = dom.iter().cloned().collect();
    let coord = |g: &Element| match g {
        Element::Lattice(v) => v[0],
        Element::Perm(_) => unreachable!(),
    };
    let base = PseudoMetric::from_fn(pts.clone(), |i, j| Distance::from_int((coord(&pts[i]) - coord(&pts[j])).abs()))
        .map_err(|e| e.to_string())?;
    let ds = word_metric(&z, &s, &dom, DEFAULT_CAP).map_err(|e| e.to_string())?;
    let hat = hat_metric(&base, &s, &dom).map_err(|e| e.to_string())?.metric;
    for (what, d) in [("Z base", &base), ("Z word", &ds), ("Z rectified", &hat)] {
        audit.record_group(what, d);
    }
    let m = rectification_oracle(&base, &ds, &hat, &s, eps)?;
    let lib = rectification_bounds(&base, &ds, &hat, &s, eps).map_err(|e| e.to_string())?;
    ensure(lib.holds() && lib.generator_norm == Distance::Finite(m), || {
        "library bounds disagree on Z".into()
    })?;
    notes.push(format!("Z[-10,10] M={m}"));

    let spec = load("s3.cgk");
    let f = spec.filtration.as_ref().unwrap();
    let s = set(&spec, "S");
    let dom = f.top().clone();
    let base = bk_pseudometric(f, &dom).map_err(|e| e.to_string())?;
    let ds = word_metric(&spec.group, &s, &dom, DEFAULT_CAP).map_err(|e| e.to_string())?;
    let hat = hat_metric(&base, &s, &dom).map_err(|e| e.to_string())?.metric;
    for (what, d) in [("S3 chain", &base), ("S3 word", &ds), ("S3 rectified", &hat)] {
        audit.record_group(what, d);
    }
    let m = rectification_oracle(&base, &ds, &hat, &s, eps)?;
    let lib = rectification_bounds(&base, &ds, &hat, &s, eps).map_err(|e| e.to_string())?;
    ensure(lib.holds() && lib.generator_norm == Distance::Finite(m), || {
        "library bounds disagree on S3".into()
    })?;
    notes.push(format!("S3 chain metric M={m}"));
    Ok(format!("{} at ε = 1/2", notes.join(", ")))
}

fn ms_instance(file: &str, audit: &mut Audit) -> Result<usize, String> {
    let spec = load(file);
    let a: &GroupAction = spec.action.as_ref().unwrap();
    let x = a.space().index_of(spec.param("x").unwrap()).unwrap();
    let m = coarsekit::distance::parse_rational(spec.param("M").unwrap()).unwrap();
    let ball = a.elements().clone();
    let report = milnor_schwarz_check(a, x, m, &ball, DEFAULT_CAP).map_err(|e| format!("{file}: {e}"))?;

    let r3 = m * int(3);
    let near: Vec<usize> = (0..a.space().len())
        .filter(|&p| fin(a.space().distance(x, p)) <= r3)
        .collect();
    let expected: ElementSet = ball
        .iter()
        .filter(|g| {
            near.iter()
                .any(|&p| a.image(g, p).is_some_and(|q| fin(a.space().distance(x, q)) <= r3))
        })
        .cloned()
        .collect();
    ensure(report.generating_set == expected, || format!("{file}: Macbeath set differs"))?;
    let lengths = word_lengths_oracle(&expected, &ball, 64);
    ensure(lengths.len() == ball.len(), || format!("{file}: Macbeath set does not generate the ball"))?;
    ensure(report.generation.generates, || format!("{file}: library says no generation"))?;
    for (g, &len) in &lengths {
        let disp = fin(a.space().distance(x, a.image(g, x).unwrap()));
        ensure(Rational::from_integer(len.into()) <= disp / m + int(1), || {
            format!("{file}: ‖{g}‖ = {len} exceeds d(x,gx)/M + 1")
        })?;
    }
    ensure(report.holds() && report.rows.len() == ball.len(), || format!("{file}: library rows disagree"))?;
    audit.record(file, a.space().metric());
    Ok(ball.len())
}

fn criterion_4(audit: &mut Audit) -> Outcome {
    let z12 = ms_instance("z12-cycle.cgk", audit)?;
    let z2 = ms_instance("z2-window.cgk", audit)?;
    Ok(format!("Z/12 on the 12-cycle ({z12} elements), Z^2 on the l1 window ({z2} elements)"))
}

struct CosetCase {
    name: &'static str,
    spec: ProblemSpec,
    v: ElementSet,
    s: ElementSet,
}

fn coset_cases() -> Vec<CosetCase> {
    let s3 = load("s3.cgk");
    let s3c = load("s3-coset.cgk");
    let s4 = load("s4-chain.cgk");
    let z8 = load("z8-chain.cgk");
    let z12 = load("z12-cycle.cgk");
    let e = |spec: &ProblemSpec| ElementSet::singleton(spec.group.identity());
    let z8_s = {
        let h4 = set(&z8, "H4");
        let t = symmetrize(&z8.group.generator_set());
        set_product(&set_product(&h4, &t).unwrap(), &h4).unwrap()
    };
    vec![
        CosetCase { name: "S3/{e}", v: e(&s3), s: set(&s3, "S"), spec: s3.clone() },
        CosetCase { name: "S3/<(2 3)>", v: set(&s3c, "V"), s: set(&s3c, "S"), spec: s3c.clone() },
        CosetCase { name: "S3/S3", v: set(&s3, "G"), s: set(&s3, "G"), spec: s3 },
        CosetCase { name: "S4/V4", v: set(&s4, "V4"), s: set(&s4, "S"), spec: s4.clone() },
        CosetCase { name: "S4/{e}", v: e(&s4), s: set(&s4, "T"), spec: s4 },
        CosetCase { name: "Z8/<4>", v: set(&z8, "H4"), s: z8_s, spec: z8 },
        CosetCase { name: "Z12/{e}", v: e(&z12), s: symmetrize(&z12.group.generator_set()), spec: z12 },
    ]
}

fn criterion_5(audit: &mut Audit) -> Outcome {
    let mut names = Vec::new();
    for case in coset_cases() {
        let name = case.name;
        let elements = enumerate_group(&case.spec.group, DEFAULT_CAP).unwrap();
        let dom = Indexed::new(&elements);
        let gamma = build_coset_graph(&elements, &case.v, &case.s).map_err(|e| format!("{name}: {e}"))?;
        audit.record_group(name, gamma.metric());

        // Own coset partition and adjacency from every member.
        let mut coset_id: HashMap<Element, usize> = HashMap::new();
        let mut cosets: Vec<Vec<Element>> = Vec::new();
        for g in &elements {
            if coset_id.contains_key(g) {
                continue;
            }
            let members: Vec<Element> = case.v.iter().map(|v| g.compose(v).unwrap()).collect();
            for m in &members {
                coset_id.insert(m.clone(), cosets.len());
            }
            cosets.push(members);
        }
        let k = cosets.len();
        let mut adj = vec![vec![false; k]; k];
        for (i, c) in cosets.iter().enumerate() {
            for g in c {
                for t in &case.s {
                    let j = coset_id[&g.compose(t).unwrap()];
                    if i != j {
                        adj[i][j] = true;
                    }
                }
            }
        }
        let mut dg = vec![vec![u32::MAX; k]; k];
        for src in 0..k {
            dg[src][src] = 0;
            let mut queue = VecDeque::from([src]);
            while let Some(u) = queue.pop_front() {
                for w in 0..k {
                    if adj[u][w] && dg[src][w] == u32::MAX {
                        dg[src][w] = dg[src][u] + 1;
                        queue.push_back(w);
                    }
                }
            }
        }
        let ds = cayley_apsp(&dom, &case.s);
        for (i, g) in dom.elements.iter().enumerate() {
            for (j, h) in dom.elements.iter().enumerate() {
                let (cg, ch) = (coset_id[g], coset_id[h]);
                let graph = dg[cg][ch];
                let word = ds[i][j].unwrap();
                ensure(graph <= word, || format!("{name}: d_Γ > d_S at {g} ~ {h}"))?;
                let best = cosets[ch].iter().map(|h2| ds[i][dom.at(h2)].unwrap()).min().unwrap();
                ensure(best <= 2 * graph, || format!("{name}: coset minimum above 2·d_Γ at {g} ~ {h}"))?;
                let lib = gamma.distance(
                    gamma.partition().coset_of(g).unwrap(),
                    gamma.partition().coset_of(h).unwrap(),
                );
                ensure(lib == Distance::from_int(graph.into()), || format!("{name}: graph metric differs"))?;
                if case.v.len() == 1 {
                    ensure(graph == word, || format!("{name}: V = {{e}} but d_Γ ≠ d_S at {g} ~ {h}"))?;
                }
            }
        }
        let dsm = word_metric(&case.spec.group, &case.s, &elements, DEFAULT_CAP).unwrap();
        let report = two_qi_check(&gamma, &dsm).map_err(|e| format!("{name}: {e}"))?;
        ensure(report.holds(), || format!("{name}: library two-sided check fails"))?;
        ensure(case.v.len() > 1 || report.coincide, || format!("{name}: coincidence flag"))?;
        names.push(name);
    }
    Ok(format!("{} coset graphs: {}", names.len(), names.join(", ")))
}

/// Floyd–Warshall on the exported weighted edge list.
fn tree_oracle(n: usize, edges: &[(usize, usize, Option<Rational>)]) -> Vec<Vec<Option<Rational>>> {
    let mut d = vec![vec![None; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = Some(int(0));
    }
    for &(a, b, w) in edges {
        let w = w.unwrap_or(int(1));
        d[a][b] = Some(w);
        d[b][a] = Some(w);
    }
    for k in 0..n {
        for i in 0..n {
            let Some(ik) = d[i][k] else { continue };
            for j in 0..n {
                if let Some(kj) = d[k][j] {
                    if d[i][j].is_none_or(|v| ik + kj < v) {
                        d[i][j] = Some(ik + kj);
                    }
                }
            }
        }
    }
    d
}

fn criterion_6(audit: &mut Audit) -> Outcome {
    let mut compared = 0usize;
    for (file, names) in [
        ("s3.cgk", ["E", "A3", "G"]),
        ("z8-chain.cgk", ["H4", "H2", "G"]),
        ("tree128.cgk", ["St2", "St1", "G"]),
        ("s4-chain.cgk", ["V4", "A4", "G"]),
    ] {
        let spec = load(file);
        let chain: Vec<ElementSet> = names.iter().map(|n| set(&spec, n)).collect();
        let top = chain.last().unwrap().clone();
        let tree = build_ray_tree(&chain, &top).map_err(|e| format!("{file}: {e}"))?;
        audit.record(file, tree.metric());
        let oracle = tree_oracle(tree.len(), tree.edges());
        let id = spec.group.identity();
        for g in &top {
            for a in 1..=chain.len() {
                for b in 1..=chain.len() {
                    let (u, w) = (tree.vertex(&id, a).unwrap(), tree.vertex(g, b).unwrap());
                    let expected = oracle[u][w].ok_or_else(|| format!("{file}: tree disconnected"))?;
                    let closed = tree.closed_form_between(&id, a, g, b).unwrap();
                    ensure(closed == expected, || format!("{file}: closed form differs for {g}, levels {a},{b}"))?;
                    ensure(fin(tree.metric().get(u, w)) == expected, || format!("{file}: tree metric differs"))?;
                    compared += 1;
                }
            }
        }
    }
    let spec = load("z8-chain.cgk");
    let chain: Vec<ElementSet> = ["H4", "H2", "G"].iter().map(|n| set(&spec, n)).collect();
    let tree = build_ray_tree(&chain, chain.last().unwrap()).unwrap();
    let one = spec.group.generators()[0].clone();
    let d = ray_tree_distance(&tree, &one).unwrap();
    ensure(d == int(6), || format!("Z/8 distance for g = 1 is {d}, expected 6"))?;
    let r = ray_distance_report(&tree, &one).unwrap();
    let m = i32::try_from(r.meet_level).unwrap();
    let display = int(2) * (pow2(m) - int(1));
    let weight = int(2) * (pow2(m - 1) - int(1));
    ensure(r.display_form == display && r.weight_sum == weight, || "closed forms misreported".into())?;
    ensure(r.weight_sum_matches() == (weight == d) && r.display_matches() == (display == d), || {
        "match flags disagree with the oracle".into()
    })?;
    let which = match (r.weight_sum_matches(), r.display_matches()) {
        (true, false) => "weight-derived form matches",
        (false, true) => "displayed form matches",
        (true, true) => "both forms match",
        (false, false) => "neither form matches",
    };
    Ok(format!(
        "{compared} vertex pairs on 4 chains; Z/8 g=1: oracle {d}, display {display}, weight-derived {weight} ({which})"
    ))
}

/// Direct check of a fit point against every ordered pair.
fn satisfies_pairs<P, Q>(f: &[usize], dx: &PseudoMetric<P>, dy: &PseudoMetric<Q>, l: Rational, k: Rational) -> bool {
    (0..dx.len()).all(|i| {
        (0..dx.len()).all(|j| match (dx.get(i, j), dy.get(f[i], f[j])) {
            (_, Distance::Infinite) => false,
            (Distance::Infinite, _) => true,
            (Distance::Finite(a), Distance::Finite(b)) => b <= l * a + k,
        })
    })
}

fn check_frontier<P, Q>(what: &str, f: &[usize], dx: &PseudoMetric<P>, dy: &PseudoMetric<Q>, fit: &LipschitzFit) -> Result<usize, String> {
    ensure(fit.is_feasible(), || format!("{what}: infeasible"))?;
    let tiny = Rational::new(1, 1_000_000);
    for p in &fit.frontier {
        ensure(satisfies_pairs(f, dx, dy, p.l, p.k), || format!("{what}: ({}, {}) violates a pair", p.l, p.k))?;
        ensure(!satisfies_pairs(f, dx, dy, p.l - tiny, p.k), || format!("{what}: L can decrease at ({}, {})", p.l, p.k))?;
        ensure(p.k == int(0) || !satisfies_pairs(f, dx, dy, p.l, p.k - tiny), || {
            format!("{what}: K can decrease at ({}, {})", p.l, p.k)
        })?;
        // Exact form of the same two statements: tight constraints exist.
        let tight = |need_slope: bool| {
            (0..dx.len()).any(|i| {
                (0..dx.len()).any(|j| match (dx.get(i, j), dy.get(f[i], f[j])) {
                    (Distance::Finite(a), Distance::Finite(b)) => b == p.l * a + p.k && (!need_slope || a > int(0)),
                    _ => false,
                })
            })
        };
        ensure(tight(true) && (p.k == int(0) || tight(false)), || format!("{what}: ({}, {}) not extremal", p.l, p.k))?;
    }
    Ok(fit.frontier.len())
}

fn criterion_7(audit: &mut Audit) -> Outcome {
    let mut points = 0;

    let spec = load("s3.cgk");
    let f = spec.filtration.as_ref().unwrap();
    let dom = f.top().clone();
    let dw = word_metric(&spec.group, &set(&spec, "S"), &dom, DEFAULT_CAP).unwrap();
    let dbk = bk_pseudometric(f, &dom).unwrap();
    let map = identity_map(&dw, &dbk).unwrap();
    let fit = fit_coarse_lipschitz(&map, &dw, &dbk).map_err(|e| e.to_string())?;
    points += check_frontier("S3 word → chain", &map, &dw, &dbk, &fit)?;
    ensure(fit.min_k(int(4)) == int(0), || "S3: minimal K at L = 4 is not 0".into())?;
    ensure(satisfies_pairs(&map, &dw, &dbk, int(4), int(0)), || "S3: (4, 0) fails".into())?;
    let back = fit_coarse_lipschitz(&map, &dbk, &dw).map_err(|e| e.to_string())?;
    points += check_frontier("S3 chain → word", &map, &dbk, &dw, &back)?;

    let spec = load("z12-cycle.cgk");
    let a = spec.action.as_ref().unwrap();
    let s = symmetrize(&spec.group.generator_set());
    let dw = word_metric(&spec.group, &s, a.elements(), DEFAULT_CAP).unwrap();
    let dorb = coarsekit::actions::orbit_pseudometric(a, 0, a.elements()).unwrap();
    audit.record_group("Z12 orbit", &dorb);
    let map = identity_map(&dw, &dorb).unwrap();
    for (what, x, y) in [("Z12 word → orbit", &dw, &dorb), ("Z12 orbit → word", &dorb, &dw)] {
        let fit = fit_coarse_lipschitz(&map, x, y).map_err(|e| e.to_string())?;
        points += check_frontier(what, &map, x, y, &fit)?;
    }

    // Z on [-6,6]: steps of size 2 against unit steps.
    let z = GroupModel::lattice(1);
    let dom: ElementSet = (-6..=6).map(|k| Element::lattice(vec![k])).collect();
    let two: ElementSet = (-2..=2).map(|k| Element::lattice(vec![k])).collect();
    let d1 = word_metric(&z, &symmetrize(&z.generator_set()), &dom, DEFAULT_CAP).unwrap();
    let d2 = word_metric(&z, &two, &dom, DEFAULT_CAP).unwrap();
    let map = identity_map(&d2, &d1).unwrap();
    let fit = fit_coarse_lipschitz(&map, &d2, &d1).map_err(|e| e.to_string())?;
    points += check_frontier("Z coarse → fine", &map, &d2, &d1, &fit)?;

    // Identity into the metric scaled by 3.
    let scaled = PseudoMetric::from_fn(d1.points().to_vec(), |i, j| d1.get(i, j).scale(int(3))).unwrap();
    let map = identity_map(&d1, &scaled).unwrap();
    let fit = fit_coarse_lipschitz(&map, &d1, &scaled).map_err(|e| e.to_string())?;
    points += check_frontier("Z scaled", &map, &d1, &scaled, &fit)?;
    let best = fit.best().ok_or("scaled fit has an empty frontier")?;
    ensure(best.l == int(3) && best.k == int(0), || format!("scaled fit gave ({}, {})", best.l, best.k))?;
    Ok(format!("{points} frontier points sound and extremal; scaled identity gives L = 3 at K = 0"))
}

/// Independent `(FU)^k`: every word of exactly k factors from FU.
fn fu_power_oracle(f: &ElementSet, u: &ElementSet, k: u32) -> ElementSet {
    let fu: Vec<Element> = f.iter().flat_map(|a| u.iter().map(move |b| a.compose(b).unwrap())).collect();
    let mut acc: Vec<Element> = fu.clone();
    acc.sort();
    acc.dedup();
    for _ in 1..k {
        let mut next: Vec<Element> = acc.iter().flat_map(|a| fu.iter().map(move |b| a.compose(b).unwrap())).collect();
        next.sort();
        next.dedup();
        acc = next;
    }
    acc.into_iter().collect()
}

fn criterion_8(_audit: &mut Audit) -> Outcome {
    let mut lines = Vec::new();
    let mut certified = 0;
    let cases: Vec<(&str, ProblemSpec, Option<u32>)> = vec![
        ("S3", load("s3.cgk"), Some(3)),
        ("Z^2 ball 5", load("z2-window.cgk"), Some(5)),
        ("S4", load("s4-chain.cgk"), None),
        ("Z[-3,3]", load("z-interval.cgk"), None),
    ];
    for (name, spec, want_k) in cases {
        let a = set(&spec, spec.param("A").unwrap());
        let u = spec
            .param("U")
            .map_or_else(|| ElementSet::singleton(spec.group.identity()), |n| set(&spec, n));
        let pool = set(&spec, spec.param("pool").unwrap());
        let k_max: u32 = spec.param("k-max").map_or(8, |v| v.parse().unwrap());
        let r = rosendal_criterion(&a, &u, &pool, k_max, pool.len()).map_err(|e| format!("{name}: {e}"))?;
        let Some(c) = &r.certificate else {
            if want_k.is_some() {
                return Err(format!("{name}: no certificate ({})", r.verdict));
            }
            continue;
        };
        let power = fu_power_oracle(&c.f, &c.u, c.k);
        ensure(a.is_subset(&power), || format!("{name}: certificate fails re-verification"))?;
        if let Some(k) = want_k {
            ensure(c.k == k, || format!("{name}: certified at k = {}, expected {k}", c.k))?;
        }
        certified += 1;
        lines.push(format!("{name} k={}", c.k));
    }
    Ok(format!("{certified} certificates re-verified: {}", lines.join(", ")))
}

fn corpus_files() -> Vec<String> {
    let mut files: Vec<String> = std::fs::read_dir(corpus_dir())
        .unwrap()
        .filter_map(|e| {
            let name = e.unwrap().file_name().into_string().unwrap();
            name.ends_with(".cgk").then_some(name)
        })
        .collect();
    files.sort();
    files
}

fn criterion_9(audit: &mut Audit) -> Outcome {
    for file in corpus_files() {
        let spec = load(&file);
        let run = run_command(&spec, Command::Validate, &Options::default()).map_err(|e| format!("{file}: {e}"))?;
        for (name, ok) in &run.checks {
            audit.checked += 1;
            if !ok {
                audit.failures.push(format!("{file}: validate {name}"));
            }
        }
    }
    if audit.failures.is_empty() {
        Ok(format!("{} pseudometrics pass", audit.checked))
    } else {
        Err(format!("{}/{} fail: {}", audit.failures.len(), audit.checked, audit.failures.join("; ")))
    }
}

fn run_suite(out: &Path) -> Result<Vec<u8>, String> {
    let suite = std::fs::read_to_string(corpus_dir().join("suite.txt")).unwrap();
    let mut transcript = Vec::new();
    for (n, line) in suite.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (cmd, file) = line.split_once(' ').ok_or_else(|| format!("suite line {}: `{line}`", n + 1))?;
        let dir = out.join(format!("{:02}-{cmd}", n));
        let o = Process::new(env!("CARGO_BIN_EXE_coarsekit"))
            .arg(cmd)
            .arg(corpus_dir().join(file))
            .args(["--export", "dot,csv,json", "--out"])
            .arg(&dir)
            .output()
            .map_err(|e| e.to_string())?;
        ensure(o.status.code() == Some(0), || format!("`{line}` exited with {:?}", o.status.code()))?;
        transcript.extend_from_slice(line.as_bytes());
        transcript.push(b'\n');
        transcript.extend_from_slice(&o.stdout);
        let mut names: Vec<PathBuf> = std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
        names.sort();
        for p in names {
            transcript.extend_from_slice(p.file_name().unwrap().to_string_lossy().as_bytes());
            transcript.push(b'\n');
            transcript.extend(std::fs::read(&p).unwrap());
        }
    }
    Ok(transcript)
}

fn criterion_10(_audit: &mut Audit) -> Outcome {
    let started = Instant::now();
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let first = run_suite(a.path())?;
    let second = run_suite(b.path())?;
    let elapsed = started.elapsed();
    ensure(first == second, || "runs differ".into())?;
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("{} bytes identical across two runs, {:.2}s", first.len(), elapsed.as_secs_f64()))
}

fn main() {
    let criteria: [fn(&mut Audit) -> Outcome; 10] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
    ];
    let mut audit = Audit::default();
    let mut failed = 0;
    for (n, run) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| run(&mut audit)))
            .unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {}: PASS ({detail})", n + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL ({detail})", n + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
