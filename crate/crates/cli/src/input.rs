//! The sectioned CGK problem format.
//!
//! ```text
//! @group
//! name S3
//! perm 3
//! gen (1 2)
//! gen (2 3)
//!
//! @set S symmetric identity
//! symmetrize generators
//!
//! @params
//! generators S
//! ```
//!
//! Sections are processed in order, so a name must be declared before it is
//! used. `#` starts a comment.

use std::collections::BTreeMap;
use std::fmt;

use coarsekit::actions::{FiniteMetricSpace, GroupAction};
use coarsekit::distance::Distance;
use coarsekit::group::{
    ball, enumerate_group, enumerate_subgroup, parse_cycle_tokens, set_product, symmetrize, ModelKind, DEFAULT_CAP,
};
use coarsekit::metrics::{word_metric, Filtration, PseudoMetric};
use coarsekit::{Element, ElementSet, GroupModel};

/// A syntax or semantic error, with the 1-based line it was found on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(n) => write!(f, "line {n}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for InputError {}

fn err(line: usize, message: impl fmt::Display) -> InputError {
    InputError {
        line: Some(line),
        message: message.to_string(),
    }
}

/// A fully validated problem description.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub group: GroupModel,
    /// Named sets in declaration order.
    pub sets: Vec<(String, ElementSet)>,
    pub filtration: Option<Filtration>,
    pub space: Option<FiniteMetricSpace>,
    pub action: Option<GroupAction>,
    pub chain: Option<Vec<String>>,
    pub params: BTreeMap<String, String>,
}

impl ProblemSpec {
    pub fn set(&self, name: &str) -> Option<&ElementSet> {
        self.sets.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }

    pub fn param(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(String::as_str)
    }
}

struct Line<'a> {
    number: usize,
    text: &'a str,
}

impl Line<'_> {
    fn split(&self) -> (&str, &str) {
        match self.text.split_once(char::is_whitespace) {
            Some((head, rest)) => (head, rest.trim()),
            None => (self.text, ""),
        }
    }
}

struct Section<'a> {
    header: Line<'a>,
    body: Vec<Line<'a>>,
}

/// Parses and validates a CGK document, enumerating with the default cap.
pub fn parse_input(text: &str) -> Result<ProblemSpec, InputError> {
    parse_input_with_cap(text, DEFAULT_CAP)
}

pub fn parse_input_with_cap(text: &str, cap: usize) -> Result<ProblemSpec, InputError> {
    let mut sections: Vec<Section> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let number = i + 1;
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        let line = Line { number, text };
        if text.starts_with('@') {
            sections.push(Section {
                header: line,
                body: Vec::new(),
            });
        } else {
            match sections.last_mut() {
                Some(s) => s.body.push(line),
                None => return Err(err(number, "content before the first section header")),
            }
        }
    }
    let mut iter = sections.into_iter();
    let first = iter.next().ok_or_else(|| InputError {
        line: None,
        message: "empty document: expected an @group section".into(),
    })?;
    if first.header.split().0 != "@group" {
        return Err(err(first.header.number, "the first section must be @group"));
    }
    let group = parse_group(&first)?;
    let mut spec = ProblemSpec {
        group,
        sets: Vec::new(),
        filtration: None,
        space: None,
        action: None,
        chain: None,
        params: BTreeMap::new(),
    };
    let mut cayley: Option<ElementSet> = None;
    for section in iter {
        let (head, rest) = section.header.split();
        let n = section.header.number;
        match head {
            "@group" => return Err(err(n, "duplicate @group section")),
            "@set" => parse_set(&mut spec, &section, rest, cap)?,
            "@filtration" => {
                once(n, spec.filtration.is_some(), "@filtration")?;
                spec.filtration = Some(parse_filtration(&spec, &section)?);
            }
            "@space" => {
                once(n, spec.space.is_some(), "@space")?;
                let (space, gens) = parse_space(&spec, &section, cap)?;
                spec.space = Some(space);
                cayley = gens;
            }
            "@action" => {
                once(n, spec.action.is_some(), "@action")?;
                spec.action = Some(parse_action(&spec, &section, cayley.as_ref(), cap)?);
            }
            "@chain" => {
                once(n, spec.chain.is_some(), "@chain")?;
                let mut names = Vec::new();
                for l in &section.body {
                    for name in l.text.split_whitespace() {
                        spec.set(name).ok_or_else(|| err(l.number, format!("unknown set `{name}`")))?;
                        names.push(name.to_string());
                    }
                }
                spec.chain = Some(names);
            }
            "@params" => {
                for l in &section.body {
                    let (key, value) = l.split();
                    if value.is_empty() {
                        return Err(err(l.number, format!("parameter `{key}` has no value")));
                    }
                    if spec.params.insert(key.to_string(), value.to_string()).is_some() {
                        return Err(err(l.number, format!("duplicate parameter `{key}`")));
                    }
                }
            }
            other => return Err(err(n, format!("unknown section `{other}`"))),
        }
    }
    Ok(spec)
}

fn once(line: usize, seen: bool, name: &str) -> Result<(), InputError> {
    if seen {
        Err(err(line, format!("duplicate {name} section")))
    } else {
        Ok(())
    }
}

fn parse_usize(l: &Line, s: &str, what: &str) -> Result<usize, InputError> {
    s.trim().parse().map_err(|_| err(l.number, format!("{what} must be a nonnegative integer, got `{s}`")))
}

fn parse_group(section: &Section) -> Result<GroupModel, InputError> {
    let mut name = None;
    let mut kind = None;
    let mut gens = Vec::new();
    for l in &section.body {
        let (head, rest) = l.split();
        match head {
            "name" => name = Some(rest.to_string()),
            "perm" => kind = Some(ModelKind::Permutation { degree: parse_usize(l, rest, "degree")? }),
            "lattice" => kind = Some(ModelKind::Lattice { rank: parse_usize(l, rest, "rank")? }),
            "gen" => gens.push((l.number, rest.to_string())),
            other => return Err(err(l.number, format!("unknown @group directive `{other}`"))),
        }
    }
    let kind = kind.ok_or_else(|| err(section.header.number, "@group needs `perm <degree>` or `lattice <rank>`"))?;
    let name = name.unwrap_or_else(|| "G".to_string());
    if gens.is_empty() {
        if let ModelKind::Lattice { rank } = kind {
            return GroupModel::new(kind, GroupModel::lattice(rank).generators().to_vec(), name)
                .map_err(|e| err(section.header.number, e));
        }
        return Err(err(section.header.number, "@group needs at least one `gen` line"));
    }
    // Generators are parsed against a provisional model so that `gen` lines
    // may use cycle or lattice literals.
    let provisional = match kind {
        ModelKind::Permutation { degree } => GroupModel::symmetric(degree.max(1)),
        ModelKind::Lattice { rank } => GroupModel::lattice(rank.max(1)),
    };
    let mut elems = Vec::new();
    for (n, text) in gens {
        elems.push(provisional.parse_element(&text).map_err(|e| err(n, e))?);
    }
    GroupModel::new(kind, elems, name).map_err(|e| err(section.header.number, e))
}

fn resolve_set<'a>(spec: &'a ProblemSpec, l: &Line, name: &str) -> Result<&'a ElementSet, InputError> {
    if name == "generators" {
        return Err(err(l.number, "use `generators` only as a directive on its own"));
    }
    spec.set(name).ok_or_else(|| err(l.number, format!("unknown set `{name}`")))
}

fn named_or_generators(spec: &ProblemSpec, l: &Line, name: &str) -> Result<ElementSet, InputError> {
    if name == "generators" {
        Ok(spec.group.generator_set())
    } else {
        resolve_set(spec, l, name).cloned()
    }
}

fn parse_set(spec: &mut ProblemSpec, section: &Section, header: &str, cap: usize) -> Result<(), InputError> {
    let n = section.header.number;
    let mut words = header.split_whitespace();
    let name = words.next().ok_or_else(|| err(n, "@set needs a name"))?.to_string();
    if name == "generators" || spec.set(&name).is_some() {
        return Err(err(n, format!("set name `{name}` is already taken")));
    }
    let flags: Vec<&str> = words.collect();
    let mut members = ElementSet::default();
    for l in &section.body {
        let (head, rest) = l.split();
        let args: Vec<&str> = rest.split_whitespace().collect();
        let arity = |k: usize| {
            if args.len() == k {
                Ok(())
            } else {
                Err(err(l.number, format!("`{head}` takes {k} argument(s)")))
            }
        };
        let add = match head {
            "group" => {
                arity(0)?;
                enumerate_group(&spec.group, cap).map_err(|e| err(l.number, e))?
            }
            "generators" => {
                arity(0)?;
                spec.group.generator_set()
            }
            "closure" => {
                arity(1)?;
                let gens = named_or_generators(spec, l, args[0])?;
                let c = enumerate_subgroup(&spec.group, &gens, cap).map_err(|e| err(l.number, e))?;
                if !c.complete {
                    return Err(err(l.number, format!("closure of `{}` passed the cap of {cap}", args[0])));
                }
                c.elements
            }
            "symmetrize" => {
                arity(1)?;
                symmetrize(&named_or_generators(spec, l, args[0])?)
            }
            "ball" => {
                arity(2)?;
                let s = named_or_generators(spec, l, args[0])?;
                let r: u32 = args[1].parse().map_err(|_| err(l.number, "ball radius must be an integer"))?;
                ball(&spec.group, &s, r, cap).map_err(|e| err(l.number, e))?.elements()
            }
            "product" => {
                arity(2)?;
                let a = named_or_generators(spec, l, args[0])?;
                let b = named_or_generators(spec, l, args[1])?;
                set_product(&a, &b).map_err(|e| err(l.number, e))?
            }
            "union" => {
                arity(1)?;
                named_or_generators(spec, l, args[0])?
            }
            "range" => {
                arity(2)?;
                if spec.group.kind() != (ModelKind::Lattice { rank: 1 }) {
                    return Err(err(l.number, "`range` needs a rank-one lattice group"));
                }
                let lo: i64 = args[0].parse().map_err(|_| err(l.number, "range bounds must be integers"))?;
                let hi: i64 = args[1].parse().map_err(|_| err(l.number, "range bounds must be integers"))?;
                (lo..=hi).map(|k| Element::lattice(vec![k])).collect()
            }
            _ => ElementSet::singleton(spec.group.parse_element(l.text).map_err(|e| err(l.number, e))?),
        };
        members = members.union(&add);
    }
    spec.group.check_set(&members).map_err(|e| err(n, e))?;
    for flag in flags {
        let ok = match flag {
            "symmetric" => members.is_symmetric(),
            "identity" => members.contains_identity(),
            "subgroup" => members.is_subgroup(),
            other => return Err(err(n, format!("unknown set flag `{other}`"))),
        };
        if !ok {
            return Err(err(n, format!("set `{name}` is declared {flag} but is not")));
        }
    }
    spec.sets.push((name, members));
    Ok(())
}

fn parse_filtration(spec: &ProblemSpec, section: &Section) -> Result<Filtration, InputError> {
    let mut start = None;
    let mut levels = Vec::new();
    for l in &section.body {
        let (head, rest) = l.split();
        if head != "level" {
            return Err(err(l.number, format!("unknown @filtration directive `{head}`")));
        }
        let (idx, name) = rest
            .split_once(char::is_whitespace)
            .ok_or_else(|| err(l.number, "expected `level <n> <set>`"))?;
        let idx: i32 = idx.parse().map_err(|_| err(l.number, "level index must be an integer"))?;
        let expected = start.map(|s: i32| s + levels.len() as i32);
        if let Some(e) = expected {
            if idx != e {
                return Err(err(l.number, format!("expected level {e}, found level {idx}")));
            }
        }
        start.get_or_insert(idx);
        levels.push(resolve_set(spec, l, name.trim())?.clone());
    }
    let start = start.ok_or_else(|| err(section.header.number, "@filtration has no levels"))?;
    Filtration::new(start, levels).map_err(|e| err(section.header.number, e))
}

fn parse_space(
    spec: &ProblemSpec,
    section: &Section,
    cap: usize,
) -> Result<(FiniteMetricSpace, Option<ElementSet>), InputError> {
    let n = section.header.number;
    let mut labels: Option<Vec<String>> = None;
    let mut rows: Vec<Vec<Distance>> = Vec::new();
    let mut built = None;
    for l in &section.body {
        let (head, rest) = l.split();
        let args: Vec<&str> = rest.split_whitespace().collect();
        match head {
            "points" => labels = Some(args.iter().map(|s| s.to_string()).collect()),
            "row" => {
                let row = args
                    .iter()
                    .map(|t| t.parse::<Distance>().map_err(|e| err(l.number, e)))
                    .collect::<Result<Vec<_>, _>>()?;
                rows.push(row);
            }
            "cycle" => built = Some((FiniteMetricSpace::cycle(parse_usize(l, rest, "cycle length")?), None)),
            "point" => built = Some((FiniteMetricSpace::point(), None)),
            "lattice" => {
                if args.len() != 2 {
                    return Err(err(l.number, "expected `lattice <rank> <radius>`"));
                }
                let rank = parse_usize(l, args[0], "rank")?;
                let radius = parse_usize(l, args[1], "radius")? as i64;
                built = Some((FiniteMetricSpace::lattice_window(rank, radius), None));
            }
            "cayley" => {
                let s = named_or_generators(spec, l, rest)?;
                let elements = enumerate_group(&spec.group, cap).map_err(|e| err(l.number, e))?;
                let d = word_metric(&spec.group, &s, &elements, cap).map_err(|e| err(l.number, e))?;
                let labels = d.points().iter().map(Element::to_string).collect();
                let m = PseudoMetric::from_matrix(labels, d.values().to_vec()).map_err(|e| err(l.number, e))?;
                built = Some((FiniteMetricSpace::new(m).map_err(|e| err(l.number, e))?, Some(s)));
            }
            other => return Err(err(l.number, format!("unknown @space directive `{other}`"))),
        }
    }
    if let Some(b) = built {
        if labels.is_some() || !rows.is_empty() {
            return Err(err(n, "@space mixes a named space with an explicit matrix"));
        }
        return Ok(b);
    }
    let labels = labels.ok_or_else(|| err(n, "@space needs `points` and `row` lines or a named space"))?;
    if rows.len() != labels.len() || rows.iter().any(|r| r.len() != labels.len()) {
        return Err(err(n, format!("@space matrix must be {0} × {0}", labels.len())));
    }
    let m = PseudoMetric::from_matrix(labels, rows.into_iter().flatten().collect()).map_err(|e| err(n, e))?;
    Ok((FiniteMetricSpace::new(m).map_err(|e| err(n, e))?, None))
}

fn parse_action(
    spec: &ProblemSpec,
    section: &Section,
    cayley: Option<&ElementSet>,
    cap: usize,
) -> Result<GroupAction, InputError> {
    let n = section.header.number;
    let space = spec.space.clone().ok_or_else(|| err(n, "@action needs an earlier @space section"))?;
    let mut images: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut translate: Vec<Vec<i64>> = Vec::new();
    let mut radius = None;
    let mut left_regular = false;
    for l in &section.body {
        let (head, rest) = l.split();
        match head {
            "image" => {
                let (k, cycles) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
                let k = parse_usize(l, k, "generator index")?;
                if k == 0 || k > spec.group.generators().len() {
                    return Err(err(l.number, format!("generator index {k} is out of range")));
                }
                let perm = label_permutation(&space, cycles).map_err(|m| err(l.number, m))?;
                if images.insert(k, perm).is_some() {
                    return Err(err(l.number, format!("duplicate image for generator {k}")));
                }
            }
            "translate" => {
                let row = rest
                    .split_whitespace()
                    .map(|t| t.parse::<i64>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| err(l.number, "translation entries must be integers"))?;
                translate.push(row);
            }
            "radius" => radius = Some(parse_usize(l, rest, "radius")? as u32),
            "left-regular" => left_regular = true,
            other => return Err(err(l.number, format!("unknown @action directive `{other}`"))),
        }
    }
    let kinds = [!images.is_empty(), !translate.is_empty(), left_regular];
    if kinds.iter().filter(|&&k| k).count() != 1 {
        return Err(err(n, "@action needs exactly one of `image`, `translate` or `left-regular`"));
    }
    if left_regular {
        let s = cayley.ok_or_else(|| err(n, "`left-regular` needs a `cayley` space"))?;
        return GroupAction::left_regular(spec.group.clone(), s, cap).map_err(|e| err(n, e));
    }
    if !translate.is_empty() {
        let radius = radius.ok_or_else(|| err(n, "translation actions need `radius <r>`"))?;
        return GroupAction::translation(spec.group.clone(), space, translate, radius, cap).map_err(|e| err(n, e));
    }
    let count = spec.group.generators().len();
    if images.len() != count {
        return Err(err(n, format!("{} generator images given for {count} generators", images.len())));
    }
    GroupAction::from_generator_images(spec.group.clone(), space, images.into_values().collect(), cap)
        .map_err(|e| err(n, e))
}

/// Reads cycles over point labels as a permutation of point indices.
fn label_permutation(space: &FiniteMetricSpace, text: &str) -> Result<Vec<usize>, String> {
    let mut perm: Vec<usize> = (0..space.len()).collect();
    let mut moved = vec![false; space.len()];
    for cycle in parse_cycle_tokens(text).map_err(|e| e.to_string())? {
        let idx = cycle
            .iter()
            .map(|t| space.index_of(t).ok_or_else(|| format!("unknown point `{t}`")))
            .collect::<Result<Vec<_>, _>>()?;
        for (i, &p) in idx.iter().enumerate() {
            if std::mem::replace(&mut moved[p], true) {
                return Err(format!("point `{}` appears in two cycles", space.label(p)));
            }
            perm[p] = idx[(i + 1) % idx.len()];
        }
    }
    Ok(perm)
}
