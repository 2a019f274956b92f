//! Command dispatch: each command runs module operations on a parsed
//! problem and returns a report, its pass/fail checks and exports.

use std::fmt;
use std::str::FromStr;

use coarsekit::actions::{
    check_generates, macbeath_set, milnor_schwarz_check, orbit_pseudometric, GroupAction,
};
use coarsekit::distance::{format_rational, parse_rational, Distance, Rational};
use coarsekit::graphs::{build_coset_graph, build_ray_tree, car_check, ray_distance_report, two_qi_check, CosetGraph};
use coarsekit::group::{ball, enumerate_group, symmetrize, DEFAULT_CAP};
use coarsekit::metrics::{
    bk_norm, bk_pseudometric, hat_metric, rectification_bounds, validate, word_metric, PseudoMetric,
};
use coarsekit::pipeline::{resolve, ResolveParams};
use coarsekit::qi::{
    dominates, exhaustion_check, fit_qi, identity_map, rosendal_criterion, verify_certificate, CbVerdict, LipschitzFit,
    QiReport,
};
use coarsekit::{Element, ElementSet};

use crate::input::ProblemSpec;
use crate::report::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, clap::ValueEnum)]
pub enum Command {
    WordMetric,
    BkMetric,
    HatMetric,
    OrbitMetric,
    Macbeath,
    MilnorSchwarz,
    CosetGraph,
    CarCheck,
    RayTree,
    QiFit,
    Dominates,
    CbCheck,
    Exhaustion,
    Validate,
    Resolve,
}

impl Command {
    pub const ALL: [Command; 15] = [
        Command::WordMetric,
        Command::BkMetric,
        Command::HatMetric,
        Command::OrbitMetric,
        Command::Macbeath,
        Command::MilnorSchwarz,
        Command::CosetGraph,
        Command::CarCheck,
        Command::RayTree,
        Command::QiFit,
        Command::Dominates,
        Command::CbCheck,
        Command::Exhaustion,
        Command::Validate,
        Command::Resolve,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::WordMetric => "word-metric",
            Command::BkMetric => "bk-metric",
            Command::HatMetric => "hat-metric",
            Command::OrbitMetric => "orbit-metric",
            Command::Macbeath => "macbeath",
            Command::MilnorSchwarz => "milnor-schwarz",
            Command::CosetGraph => "coset-graph",
            Command::CarCheck => "car-check",
            Command::RayTree => "ray-tree",
            Command::QiFit => "qi-fit",
            Command::Dominates => "dominates",
            Command::CbCheck => "cb-check",
            Command::Exhaustion => "exhaustion",
            Command::Validate => "validate",
            Command::Resolve => "resolve",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown command `{s}`"))
    }
}

/// Flag overrides for `@params`.
#[derive(Debug, Clone)]
pub struct Options {
    /// Overrides `M` for action commands and `radius` for lattice domains.
    pub radius: Option<String>,
    pub cap: usize,
    /// Overrides `bound`.
    pub bound: Option<String>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            radius: None,
            cap: DEFAULT_CAP,
            bound: None,
        }
    }
}

/// A command failure that is not a mathematical finding: missing sections,
/// bad parameters or failed preconditions.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] coarsekit::Error),
}

type CliResult<T> = Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

/// A file produced next to the report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Export {
    pub kind: ExportKind,
    pub contents: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, clap::ValueEnum)]
pub enum ExportKind {
    Dot,
    Csv,
    Json,
}

impl ExportKind {
    pub fn extension(self) -> &'static str {
        match self {
            ExportKind::Dot => "dot",
            ExportKind::Csv => "csv",
            ExportKind::Json => "json",
        }
    }
}

/// The outcome of one command.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub command: Command,
    pub report: Report,
    /// Named inequalities and verdicts, all of which must hold for a pass.
    pub checks: Vec<(String, bool)>,
    pub exports: Vec<Export>,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }

    /// The report followed by its check table and overall verdict.
    pub fn full_report(&self) -> Report {
        let mut r = self.report.clone();
        let mut checks = Report::new();
        for (name, ok) in &self.checks {
            checks.value(name, pass(*ok));
        }
        r.section("checks", checks);
        r.value("verdict", pass(self.passed()));
        r
    }

    pub fn export(&self, kind: ExportKind) -> Option<&str> {
        self.exports.iter().find(|e| e.kind == kind).map(|e| e.contents.as_str())
    }
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

struct Ctx<'a> {
    spec: &'a ProblemSpec,
    opts: &'a Options,
    report: Report,
    checks: Vec<(String, bool)>,
    exports: Vec<Export>,
}

fn set_list(s: &ElementSet) -> String {
    s.to_string()
}

fn dist(d: Distance) -> String {
    d.to_string()
}

fn q(r: &Rational) -> String {
    format_rational(r)
}

impl<'a> Ctx<'a> {
    fn check(&mut self, name: &str, ok: bool) {
        self.checks.push((name.to_string(), ok));
    }

    fn export(&mut self, kind: ExportKind, contents: String) {
        self.exports.push(Export { kind, contents });
    }

    fn cap(&self) -> usize {
        self.opts.cap
    }

    fn param(&self, key: &str) -> Option<&'a str> {
        self.spec.param(key)
    }

    fn named_set(&self, name: &str) -> CliResult<ElementSet> {
        if name == "generators" {
            return Ok(self.spec.group.generator_set());
        }
        self.spec
            .set(name)
            .cloned()
            .ok_or_else(|| CliError::Usage(format!("unknown set `{name}`")))
    }

    fn set_param(&self, key: &str) -> CliResult<Option<ElementSet>> {
        self.param(key).map(|n| self.named_set(n)).transpose()
    }

    fn require_set_param(&self, key: &str) -> CliResult<ElementSet> {
        self.set_param(key)?
            .ok_or_else(|| CliError::Usage(format!("@params needs `{key} <set>`")))
    }

    fn rational_param(&self, key: &str) -> CliResult<Option<Rational>> {
        self.param(key)
            .map(|s| parse_rational(s).map_err(|e| CliError::Usage(format!("parameter `{key}`: {e}"))))
            .transpose()
    }

    fn int_param(&self, key: &str) -> CliResult<Option<u32>> {
        self.param(key)
            .map(|s| {
                s.parse::<u32>()
                    .map_err(|_| CliError::Usage(format!("parameter `{key}` must be a nonnegative integer")))
            })
            .transpose()
    }

    /// `S`: the `generators` parameter, or the symmetrized group generators.
    fn generating_set(&self) -> CliResult<ElementSet> {
        Ok(match self.set_param("generators")? {
            Some(s) => s,
            None => symmetrize(&self.spec.group.generator_set()),
        })
    }

    fn subgroup_v(&self) -> CliResult<ElementSet> {
        Ok(self
            .set_param("V")?
            .unwrap_or_else(|| ElementSet::singleton(self.spec.group.identity())))
    }

    fn lattice_radius(&self) -> CliResult<Option<u32>> {
        match &self.opts.radius {
            Some(r) => r
                .parse::<u32>()
                .map(Some)
                .map_err(|_| CliError::Usage("--radius must be an integer for a lattice domain".into())),
            None => self.int_param("radius"),
        }
    }

    /// The `domain` parameter; otherwise the whole finite group, or the word
    /// ball of the generating set at `radius` for lattices.
    fn domain(&self) -> CliResult<ElementSet> {
        if let Some(d) = self.set_param("domain")? {
            return Ok(d);
        }
        if self.spec.group.is_finite() {
            return Ok(enumerate_group(&self.spec.group, self.cap())?);
        }
        let r = self
            .lattice_radius()?
            .ok_or_else(|| CliError::Usage("lattice groups need `domain <set>` or `radius <r>`".into()))?;
        Ok(ball(&self.spec.group, &self.generating_set()?, r, self.cap())?.elements())
    }

    fn action(&self) -> CliResult<&'a GroupAction> {
        self.spec
            .action
            .as_ref()
            .ok_or_else(|| CliError::Usage("this command needs an @action section".into()))
    }

    fn base_point(&self, a: &GroupAction) -> CliResult<usize> {
        match self.param("x") {
            Some(label) => a
                .space()
                .index_of(label)
                .ok_or_else(|| CliError::Usage(format!("base point `{label}` is not a point of the space"))),
            None => Ok(0),
        }
    }

    fn radius_m(&self) -> CliResult<Rational> {
        if let Some(r) = &self.opts.radius {
            return parse_rational(r).map_err(|e| CliError::Usage(format!("--radius: {e}")));
        }
        self.rational_param("M")?
            .ok_or_else(|| CliError::Usage("@params needs `M <rational>` (or pass --radius)".into()))
    }

    fn bound(&self, key: &str) -> CliResult<Option<Rational>> {
        if key == "bound" {
            if let Some(b) = &self.opts.bound {
                return parse_rational(b).map(Some).map_err(|e| CliError::Usage(format!("--bound: {e}")));
            }
        }
        self.rational_param(key)
    }

    fn action_domain(&self, a: &GroupAction) -> CliResult<ElementSet> {
        Ok(self.set_param("domain")?.unwrap_or_else(|| a.elements().clone()))
    }

    /// Builds a metric by kind over `domain`.
    fn metric(&self, kind: &str, domain: &ElementSet) -> CliResult<PseudoMetric<Element>> {
        let cap = self.cap();
        match kind {
            "word" => Ok(word_metric(&self.spec.group, &self.generating_set()?, domain, cap)?),
            "bk" => {
                let f = self
                    .spec
                    .filtration
                    .as_ref()
                    .ok_or_else(|| CliError::Usage("metric `bk` needs a @filtration section".into()))?;
                Ok(bk_pseudometric(f, domain)?)
            }
            "orbit" => {
                let a = self.action()?;
                Ok(orbit_pseudometric(a, self.base_point(a)?, domain)?)
            }
            "hat" => {
                let base_kind = self.hat_base()?;
                let base = self.metric(base_kind, domain)?;
                Ok(hat_metric(&base, &self.generating_set()?, domain)?.metric)
            }
            other => match other.strip_prefix("word:") {
                Some(set) => Ok(word_metric(&self.spec.group, &self.named_set(set)?, domain, cap)?),
                None => usage(format!("unknown metric kind `{other}` (word, word:<set>, bk, orbit, hat)")),
            },
        }
    }

    fn hat_base(&self) -> CliResult<&'a str> {
        if let Some(b) = self.param("base") {
            return Ok(b);
        }
        if self.spec.action.is_some() {
            Ok("orbit")
        } else if self.spec.filtration.is_some() {
            Ok("bk")
        } else {
            usage("hat-metric needs `base <kind>`, an @action or a @filtration")
        }
    }
}

fn metric_summary(d: &PseudoMetric<Element>) -> Report {
    let mut r = Report::new();
    let (diam, pair) = d.diameter();
    r.value("points", d.len()).value("diameter", dist(diam));
    if let Some((i, j)) = pair {
        r.value("diameter-pair", format!("{} ~ {}", d.point(i), d.point(j)));
    }
    r.value("disconnected-pairs", d.disconnected_pairs().len());
    r.value("left-invariant", d.is_left_invariant());
    r
}

fn validation_line(d: &PseudoMetric<Element>) -> (bool, String) {
    let v = validate(d);
    match &v.violation {
        Some(x) => (false, format!("fail ({x})")),
        None => (true, "pass".to_string()),
    }
}

fn fit_report(fit: &LipschitzFit, label: &dyn Fn(usize) -> String) -> Report {
    let mut r = Report::new();
    r.value("pairs", fit.pairs).value("feasible", fit.is_feasible());
    if let Some(&(i, j)) = fit.infeasible.first() {
        r.value("infeasible-witness", format!("{} ~ {}", label(i), label(j)));
    }
    if fit.is_feasible() {
        match fit.best() {
            Some(p) => {
                r.value("L", q(&p.l)).value("K", q(&p.k));
            }
            None => {
                r.value("L", "unconstrained").value("K", q(&fit.k_min));
            }
        }
        r.value("K-as-L-to-0", q(&fit.k_at_zero));
        r.list(
            "frontier",
            fit.frontier.iter().map(|p| {
                let w = p
                    .witnesses
                    .first()
                    .map(|&(i, j)| format!(" witness {} ~ {}", label(i), label(j)))
                    .unwrap_or_default();
                format!("L={} K={}{}", q(&p.l), q(&p.k), w)
            }),
        );
    }
    r
}

fn qi_report(r: &QiReport, label: &dyn Fn(usize) -> String) -> Report {
    let mut out = Report::new();
    out.value("direction", "two-sided");
    out.section("forward", fit_report(&r.forward, label));
    out.section("reverse", fit_report(&r.reverse, label));
    out.list("shared", r.shared.iter().map(|(l, k)| format!("L={} K={}", q(l), q(k))));
    if let Some((l, k)) = r.best_shared() {
        out.value("L", q(&l)).value("K", q(&k));
    }
    out.value("C", dist(r.coarse_surjectivity));
    out.value("quasi-isometry", r.is_quasi_isometry());
    out
}

/// Runs `command` on `spec`.
pub fn run_command(spec: &ProblemSpec, command: Command, opts: &Options) -> CliResult<RunReport> {
    let mut ctx = Ctx {
        spec,
        opts,
        report: Report::new(),
        checks: Vec::new(),
        exports: Vec::new(),
    };
    ctx.report.value("command", command);
    ctx.report.value("group", &spec.group);
    match command {
        Command::WordMetric => word_metric_cmd(&mut ctx)?,
        Command::BkMetric => bk_metric_cmd(&mut ctx)?,
        Command::HatMetric => hat_metric_cmd(&mut ctx)?,
        Command::OrbitMetric => orbit_metric_cmd(&mut ctx)?,
        Command::Macbeath => macbeath_cmd(&mut ctx)?,
        Command::MilnorSchwarz => milnor_schwarz_cmd(&mut ctx)?,
        Command::CosetGraph => coset_graph_cmd(&mut ctx, false)?,
        Command::CarCheck => coset_graph_cmd(&mut ctx, true)?,
        Command::RayTree => ray_tree_cmd(&mut ctx)?,
        Command::QiFit => qi_fit_cmd(&mut ctx)?,
        Command::Dominates => dominates_cmd(&mut ctx)?,
        Command::CbCheck => cb_check_cmd(&mut ctx)?,
        Command::Exhaustion => exhaustion_cmd(&mut ctx)?,
        Command::Validate => validate_cmd(&mut ctx)?,
        Command::Resolve => resolve_cmd(&mut ctx)?,
    }
    let mut run = RunReport {
        command,
        report: ctx.report,
        checks: ctx.checks,
        exports: ctx.exports,
    };
    let json = serde_json::to_string_pretty(&run.full_report().to_json()).expect("string map") + "\n";
    run.exports.push(Export {
        kind: ExportKind::Json,
        contents: json,
    });
    Ok(run)
}

fn metric_cmd(ctx: &mut Ctx, name: &str, d: &PseudoMetric<Element>) {
    ctx.report.section(name, metric_summary(d));
    let (ok, line) = validation_line(d);
    ctx.report.value("validate", line);
    ctx.check("metric-axioms", ok);
    ctx.export(ExportKind::Csv, d.to_csv());
}

fn word_metric_cmd(ctx: &mut Ctx) -> CliResult<()> {
    let s = ctx.generating_set()?;
    let domain = ctx.domain()?;
    let d = word_metric(&ctx.spec.group, &s, &domain, ctx.cap())?;
    ctx.report.value("generating-set", set_list(&s));
    metric_cmd(ctx, "word-metric", &d);
    Ok(())
}

fn bk_metric_cmd(ctx: &mut Ctx) -> CliResult<()> {
    let f = ctx
        .spec
        .filtration
        .clone()
        .ok_or_else(|| CliError::Usage("bk-metric needs a @filtration section".into()))?;
    let domain = match ctx.set_param("domain")? {
        Some(d) => d,
        None => f.top().clone(),
    };
    let mut levels = Report::new();
    for (n, u) in f.levels() {
        levels.value(&format!("U{n}"), format!("{} elements", u.len()));
    }
    ctx.report.section("filtration", levels);
    let d = bk_pseudometric(&f, &domain)?;
    // ½‖g⁻¹h‖ ≤ d(g,h) ≤ ‖g⁻¹h‖, rechecked on the finished matrix.
    let half = Rational::new(1, 2);
    let mut worst = 0usize;
    for (i, g) in d.points().iter().enumerate() {
        for (j, h) in d.points().iter().enumerate() {
            let norm = Distance::Finite(bk_norm(&g.invert().compose(h)?, &f)?);
            let v = d.get(i, j);
            if v > norm || v < norm.scale(half) {
                worst += 1;
            }
        }
    }
    ctx.report.value("norm-bound-violations", worst);
    ctx.check("norm-bound", worst == 0);
    metric_cmd(ctx, "bk-metric", &d);
    Ok(())
}

fn hat_metric_cmd(ctx: &mut Ctx) -> CliResult<()> {
    let s = ctx.generating_set()?;
    let domain = match ctx.spec.action.as_ref() {
        Some(a) if ctx.param("domain").is_none() && ctx.hat_base()? == "orbit" => a.elements().clone(),
        _ => ctx.domain()?,
    };
    let base_kind = ctx.hat_base()?;
    let base = ctx.metric(base_kind, &domain)?;
    let hat = hat_metric(&base, &s, &domain)?;
    ctx.report.value("base", base_kind).value("generating-set", set_list(&s));
    ctx.report
        .value("generator-diameter", dist(hat.generator_diameter))
        .value("unbounded-generators", hat.unbounded_generators);
    if let Some(eps) = ctx.rational_param("eps")? {
        let ds = word_metric(&ctx.spec.group, &s, &domain, ctx.cap())?;
        let b = rectification_bounds(&base, &ds, &hat.metric, &s, eps)?;
        let mut r = Report::new();
        r.value("eps", q(&eps))
            .value("eps-admissible", b.eps_admissible)
            .value("M", dist(b.generator_norm))
            .value("upper-violations", b.upper_violations.len())
            .value("lower-violations", b.lower_violations.len());
        if let Some((g, h)) = b.upper_violations.first().or(b.lower_violations.first()) {
            r.value("first-violation", format!("{g} ~ {h}"));
        }
        ctx.report.section("rectification-bounds", r);
        ctx.check("rectification-bounds", b.holds());
    }
    metric_cmd(ctx, "hat-metric", &hat.metric);
    Ok(())
}

fn orbit_metric_cmd(ctx: &mut Ctx) -> CliResult<()> {
    let a = ctx.action()?;
    let x = ctx.base_point(a)?;
    let domain = ctx.action_domain(a)?;
    let d = orbit_pseudometric(a, x, &domain)?;
    ctx.report.value("base-point", a.space().label(x));
    metric_cmd(ctx, "orbit-metric", &d);
    Ok(())
}

fn macbeath_cmd(ctx: &mut Ctx) -> CliResult<()> {
    let a = ctx.action()?;
    let x = ctx.base_point(a)?;
    let m = ctx.radius_m()?;
    let domain = ctx.action_domain(a)?;
    let s = macbeath_set(a, x, m, &domain)?;
    let g = check_generates(a.group(), &s, a.elements(), ctx.cap())?;
    ctx.report
        .value("base-point", a.space().label(x))
        .value("M", q(&m))
        .value("search-ball", domain.len())
        .value("macbeath-set", set_list(&s))
        .value("size", s.len())
        .value("generates", g.generates)
        .value("missing", g.missing.len())
        .value("word-depth", g.depth);
    ctx.check("macbeath-symmetric", s.is_symmetric() && s.contains_identity());
    ctx.check("generates", g.generates);
    Ok(())
}

fn milnor_schwarz_cmd(ctx: &mut Ctx) -> CliResult<()> {
    let a = ctx.action()?;
    let x = ctx.base_point(a)?;
    let m = ctx.radius_m()?;
    let domain = ctx.action_domain(a)?;
    let r = milnor_schwarz_check(a, x, m, &domain, ctx.cap())?;
    ctx.report
        .value("base-point", a.space().label(x))
        .value("M", q(&m))
        .value("generating-radius", q(&r.generating_radius))
        .value("generating-set", set_list(&r.generating_set))
        .value("generates", r.generation.generates);
    ctx.report.list(
        "rows",
        r.rows.iter().map(|row| {
            format!(
                "{}: length {} displacement {} bound {} {}",
                row.element,
                row.word_length.map_or("none".to_string(), |l| l.to_string()),
                row.displacement,
                row.bound,
                if row.holds { "holds" } else { "FAILS" }
            )
        }),
    );
    let slack = |s: Option<Rational>| s.map_or("n/a".to_string(), |v| q(&v));
    ctx.report.value("min-slack", slack(r.min_slack())).value("max-slack", slack(r.max_slack()));
    ctx.check("generates", r.generation.generates);
    ctx.check("word-length-bound", r.holds());
    Ok(())
}

fn graph_report(gamma: &CosetGraph) -> Report {
    let mut r = Report::new();
    r.value("vertices", gamma.len()).value("edges", gamma.edges().len());
    let degrees: std::collections::BTreeSet<usize> = (0..gamma.len()).map(|i| gamma.degree(i)).collect();
    r.list("degrees", degrees);
    r.value("connected", gamma.is_connected());
    r.list("representatives", gamma.partition().representatives().map(Element::to_string));
    r
}

fn coset_graph_cmd(ctx: &mut Ctx, car: bool) -> CliResult<()> {
    let s = ctx.generating_set()?;
    let v = ctx.subgroup_v()?;
    let domain = ctx.domain()?;
    let gamma = build_coset_graph(&domain, &v, &s)?;
    let ds = word_metric(&ctx.spec.group, &s, &domain, ctx.cap())?;
    ctx.report.value("generating-set", set_list(&s)).value("V", set_list(&v));
    ctx.report.section("graph", graph_report(&gamma));
    let t = two_qi_check(&gamma, &ds)?;
    let mut r = Report::new();
    let ratio = |x: Option<Rational>| x.map_or("n/a".to_string(), |v| q(&v));
    r.value("lower-violations", t.lower_violations.len())
        .value("coset-upper-violations", t.upper_violations.len())
        .value("orbit-upper-violations", t.orbit_violations.len())
        .value("max-lower-ratio", ratio(t.max_lower_ratio))
        .value("max-upper-ratio", ratio(t.max_upper_ratio))
        .value("tight-pairs", t.tight_pairs.len())
        .value("coincide", t.coincide);
    r.list(
        "representative-excess",
        t.representative_excess
            .iter()
            .map(|p| format!("{} ~ {}: graph {} word {}", p.from, p.to, p.graph, p.word)),
    );
    ctx.report.section("two-sided-bound", r);
    ctx.check("graph-below-word", t.lower_violations.is_empty());
    ctx.check("word-below-twice-graph", t.upper_violations.is_empty());
    ctx.check("orbit-form", t.orbit_violations.is_empty());
    if car {
        let bound = match ctx.bound("bound")? {
            Some(b) => b,
            None => ds.diameter().0.finite().unwrap_or_default(),
        };
        let c = car_check(&gamma, bound, &ds)?;
        let mut r = Report::new();
        r.value("vertices", c.vertices)
            .value("connected", c.connected)
            .value("vertex-transitive", c.vertex_transitive)
            .value("adjacency-invariant", c.adjacency_invariant)
            .value("edge-orbits", c.edge_orbits)
            .value("constant-degree", c.constant_degree.map_or("no".to_string(), |d| d.to_string()))
            .value("stabilizer", set_list(&c.stabilizer))
            .value("stabilizer-is-V", c.stabilizer_is_subgroup_v)
            .value("stabilizer-diameter", dist(c.stabilizer_diameter))
            .value("stabilizer-bound", q(&c.stabilizer_bound))
            .value("cayley-abels-rosendal", c.is_car());
        ctx.report.section("car", r);
        ctx.check("cayley-abels-rosendal", c.is_car());
    }
    ctx.export(ExportKind::Dot, gamma.to_dot(ctx.spec.group.name()));
    ctx.export(ExportKind::Csv, gamma.edges_csv());
    Ok(())
}

fn ray_tree_cmd(ctx: &mut Ctx) -> CliResult<()> {
    let names = ctx
        .spec
        .chain
        .clone()
        .ok_or_else(|| CliError::Usage("ray-tree needs a @chain section".into()))?;
    let chain = names.iter().map(|n| ctx.named_set(n)).collect::<CliResult<Vec<_>>>()?;
    let top = chain.last().cloned().unwrap_or_default();
    let tree = build_ray_tree(&chain, &top)?;
    let mut levels = Report::new();
    for (n, name) in names.iter().enumerate() {
        let level = n + 1;
        let weight = if level < names.len() {
            format!(", up-edge weight {}", q(&coarsekit::graphs::CosetRayTree::edge_weight(level)))
        } else {
            String::new()
        };
        levels.value(&format!("G{level}"), format!("{name}, {} vertices{weight}", tree.level(level).len()));
    }
    ctx.report.section("chain", levels);
    ctx.report.value("vertices", tree.len()).value("tree", tree.is_tree());
    let targets = ctx.set_param("elements")?.unwrap_or(top);
    let mut rows = Vec::new();
    let (mut weight_ok, mut display_ok, mut closed_ok) = (0, 0, true);
    for g in &targets {
        let r = ray_distance_report(&tree, g)?;
        let id = g.identity_like();
        closed_ok &= tree.closed_form_between(&id, 1, g, 1)? == r.shortest_path;
        weight_ok += usize::from(r.weight_sum_matches());
        display_ok += usize::from(r.display_matches());
        rows.push(format!(
            "{g}: meet level {} distance {} weight-sum {} display {}",
            r.meet_level,
            q(&r.shortest_path),
            q(&r.weight_sum),
            q(&r.display_form)
        ));
    }
    ctx.report.list("distances", rows);
    ctx.report
        .value("weight-sum-matches", format!("{weight_ok}/{}", targets.len()))
        .value("display-matches", format!("{display_ok}/{}", targets.len()));
    ctx.check("tree", tree.is_tree());
    ctx.check("closed-form", closed_ok);
    ctx.export(ExportKind::Dot, tree.to_dot(ctx.spec.group.name()));
    ctx.export(ExportKind::Csv, tree.edges_csv());
    Ok(())
}

fn qi_fit_cmd(ctx: &mut Ctx) -> CliResult<()> {
    let source = ctx.param("source").unwrap_or("word");
    let target = ctx.param("target").unwrap_or("hat");
    let domain = match (&ctx.spec.action, ctx.param("domain")) {
        (Some(a), None) => a.elements().clone(),
        _ => ctx.domain()?,
    };
    let dx = ctx.metric(source, &domain)?;
    ctx.report.value("source", source).value("target", target).value("points", dx.len());
    let labels: Vec<String> = dx.points().iter().map(Element::to_string).collect();
    let label = |i: usize| labels[i].clone();
    let report = if target == "coset" {
        let gamma = build_coset_graph(&domain, &ctx.subgroup_v()?, &ctx.generating_set()?)?;
        let f: Vec<usize> = dx
            .points()
            .iter()
            .map(|g| gamma.partition().coset_of(g).expect("partition covers the domain"))
            .collect();
        let r = fit_qi(&f, &dx, gamma.metric())?;
        ctx.report.value("map", "g -> gV");
        r
    } else {
        let dy = ctx.metric(target, &domain)?;
        let r = fit_qi(&identity_map(&dx, &dy)?, &dx, &dy)?;
        ctx.report.value("map", "identity");
        r
    };
    ctx.report.section("fit", qi_report(&report, &label));
    for p in report.forward.frontier.iter() {
        if !report.forward.is_extremal(p.l, p.k) {
            ctx.check("frontier-extremal", false);
        }
    }
    ctx.check("quasi-isometry", report.is_quasi_isometry());
    ctx.export(ExportKind::Csv, report.forward.frontier_csv(label));
    Ok(())
}

fn dominates_cmd(ctx: &mut Ctx) -> CliResult<()> {
    let left = ctx.param("left").unwrap_or("word");
    let right = ctx
        .param("right")
        .ok_or_else(|| CliError::Usage("dominates needs `right <kind>` in @params".into()))?;
    let domain = match (&ctx.spec.action, ctx.param("domain")) {
        (Some(a), None) => a.elements().clone(),
        _ => ctx.domain()?,
    };
    let d1 = ctx.metric(left, &domain)?;
    let d2 = ctx.metric(right, &domain)?;
    let r = dominates(&d1, &d2)?;
    let labels: Vec<String> = d1.points().iter().map(Element::to_string).collect();
    let label = |i: usize| labels[i].clone();
    ctx.report
        .value("left", left)
        .value("right", right)
        .value("points", r.points)
        .value("holds-at-scale", r.holds_at_scale());
    ctx.report.section("fit", fit_report(&r.fit, &label));
    ctx.check("dominates", r.holds_at_scale());
    ctx.export(ExportKind::Csv, r.fit.frontier_csv(label));
    Ok(())
}

fn cb_check_cmd(ctx: &mut Ctx) -> CliResult<()> {
    let a = ctx.require_set_param("A")?;
    let u = ctx
        .set_param("U")?
        .unwrap_or_else(|| ElementSet::singleton(ctx.spec.group.identity()));
    let pool = match ctx.set_param("pool")? {
        Some(p) => p,
        None => ctx.generating_set()?,
    };
    let k_max = ctx.int_param("k-max")?.unwrap_or(8);
    let f_max = ctx.int_param("f-size-max")?.map_or(pool.len(), |v| v as usize);
    let r = rosendal_criterion(&a, &u, &pool, k_max, f_max)?;
    ctx.report
        .value("A", format!("{} elements", a.len()))
        .value("U", set_list(&u))
        .value("pool", set_list(&pool))
        .value("k-max", k_max)
        .value("f-size-max", f_max)
        .value("subsets-tried", r.subsets_tried)
        .value("verdict", r.verdict);
    if let Some(c) = &r.certificate {
        let verified = verify_certificate(&a, c)?;
        ctx.report
            .value("F", set_list(&c.f))
            .value("k", c.k)
            .value("reverified", verified);
        ctx.check("certificate-reverifies", verified);
    }
    if let Some(w) = &r.witness {
        ctx.report.value("witness", w);
    }
    ctx.check("certified-bounded", r.verdict == CbVerdict::CertifiedBounded);
    Ok(())
}

fn exhaustion_cmd(ctx: &mut Ctx) -> CliResult<()> {
    let a = ctx.require_set_param("A")?;
    let names = ctx
        .spec
        .chain
        .clone()
        .ok_or_else(|| CliError::Usage("exhaustion needs a @chain section".into()))?;
    let chain = names.iter().map(|n| ctx.named_set(n)).collect::<CliResult<Vec<_>>>()?;
    let start = match ctx.param("start") {
        Some(s) => s
            .parse::<i32>()
            .map_err(|_| CliError::Usage("parameter `start` must be an integer".into()))?,
        None => 0,
    };
    let r = exhaustion_check(&a, &chain, start)?;
    ctx.report.value("A", format!("{} elements", a.len())).list("chain", &names);
    match r.contained_at {
        Some(n) => ctx.report.value("contained-at", n),
        None => ctx.report.value("contained-at", "none"),
    };
    if let Some(w) = &r.witness {
        ctx.report.value("witness", w);
    }
    ctx.check("contained", r.contained_at.is_some());
    Ok(())
}

fn validate_cmd(ctx: &mut Ctx) -> CliResult<()> {
    let mut lines = Report::new();
    let mut record = |ctx: &mut Ctx, name: &str, ok: bool, line: String| {
        lines.value(name, line);
        ctx.check(name, ok);
    };
    if let Some(space) = &ctx.spec.space {
        let v = validate(space.metric());
        let line = v.violation.as_ref().map_or("pass".to_string(), |x| format!("fail ({x})"));
        record(ctx, "space", v.passed(), line);
    }
    let domain = match &ctx.spec.action {
        Some(a) if ctx.param("domain").is_none() => a.elements().clone(),
        _ => ctx.domain()?,
    };
    let mut kinds = vec!["word"];
    if ctx.spec.filtration.is_some() {
        kinds.push("bk");
    }
    if ctx.spec.action.is_some() {
        kinds.push("orbit");
    }
    if ctx.spec.action.is_some() || ctx.spec.filtration.is_some() {
        kinds.push("hat");
    }
    for kind in kinds {
        let domain = if kind == "bk" && ctx.param("domain").is_none() {
            ctx.spec.filtration.as_ref().expect("checked").top().clone()
        } else {
            domain.clone()
        };
        let d = ctx.metric(kind, &domain)?;
        let (mut ok, mut line) = validation_line(&d);
        if ok && !d.is_left_invariant() {
            ok = false;
            line = "fail (left invariance)".into();
        }
        record(ctx, kind, ok, line);
    }
    if let Ok(gamma) = build_coset_graph(&domain, &ctx.subgroup_v()?, &ctx.generating_set()?) {
        let v = validate(gamma.metric());
        let line = v.violation.as_ref().map_or("pass".to_string(), |x| format!("fail ({x})"));
        record(ctx, "coset-graph", v.passed(), line);
    }
    if let Some(names) = ctx.spec.chain.clone() {
        let chain = names.iter().map(|n| ctx.named_set(n)).collect::<CliResult<Vec<_>>>()?;
        let top = chain.last().cloned().unwrap_or_default();
        if let Ok(tree) = build_ray_tree(&chain, &top) {
            let v = validate(tree.metric());
            let line = v.violation.as_ref().map_or("pass".to_string(), |x| format!("fail ({x})"));
            record(ctx, "ray-tree", v.passed(), line);
        }
    }
    ctx.report.section("metrics", lines);
    Ok(())
}

fn resolve_cmd(ctx: &mut Ctx) -> CliResult<()> {
    let a = ctx.action()?;
    let x = ctx.base_point(a)?;
    let m = ctx.radius_m()?;
    let mut params = ResolveParams::new(x, m, ctx.subgroup_v()?);
    params.cap = ctx.cap();
    if let Some(eps) = ctx.rational_param("eps")? {
        params.eps = eps;
    }
    params.properness_bound = ctx.bound("bound")?;
    params.stabilizer_bound = ctx.bound("stabilizer-bound")?;
    let r = resolve(a, &params)?;
    ctx.report
        .value("base-point", a.space().label(x))
        .value("M", q(&m))
        .value("V", set_list(&params.v))
        .value("eps", q(&params.eps));
    let mut stages = Report::new();
    stages
        .value("generating-set", set_list(r.generating_set()))
        .value("covered-at-M", r.covered)
        .value("chainable-at-M", r.chainable)
        .value("generates", r.milnor_schwarz.generation.generates)
        .value("word-length-bound", r.milnor_schwarz.holds());
    let labels: Vec<String> = r.word.points().iter().map(Element::to_string).collect();
    let label = |i: usize| labels[i].clone();
    stages.section("word-dominates-orbit", fit_report(&r.orbit_domination.fit, &label));
    stages.section("word-vs-orbit", qi_report(&r.orbit_qi, &label));
    stages.value("quasi-continuity-violations", r.continuity.violations.len());
    stages.value("rectified-valid", r.hat_valid);
    stages.section("word-vs-rectified", qi_report(&r.hat_qi, &label));
    stages.section("graph", graph_report(&r.graph));
    stages
        .value("graph-below-word", r.two_qi.lower_violations.is_empty())
        .value("word-below-twice-graph", r.two_qi.upper_violations.is_empty())
        .value("graph-coincides", r.two_qi.coincide);
    stages.section("word-vs-graph", qi_report(&r.graph_qi, &label));
    stages
        .value("proper-set-size", r.properness.set.len())
        .value("proper-set-diameter", dist(r.properness.diameter))
        .value("proper-bound", q(&r.properness.bound))
        .value("edge-orbits", r.car.edge_orbits)
        .value("stabilizer-diameter", dist(r.car.stabilizer_diameter))
        .value("stabilizer-bound", q(&r.car.stabilizer_bound));
    ctx.report.section("stages", stages);
    let mut clauses = Report::new();
    for c in &r.clauses {
        clauses.value(c.name, format!("{} ({})", pass(c.held), c.statement));
    }
    ctx.report.section("clauses", clauses);
    for c in &r.clauses {
        ctx.check(c.name, c.held);
    }
    ctx.export(ExportKind::Dot, r.graph.to_dot(ctx.spec.group.name()));
    ctx.export(ExportKind::Csv, r.word.to_csv());
    Ok(())
}
