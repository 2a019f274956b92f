use std::fmt;

use crate::error::{Error, Result};
use crate::group::element::{Element, Perm};
use crate::group::set::ElementSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    /// Permutations of `{1..degree}`.
    Permutation { degree: usize },
    /// The free abelian group `Z^rank`.
    Lattice { rank: usize },
}

/// A concrete computable group given by a nonempty generator list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupModel {
    kind: ModelKind,
    generators: Vec<Element>,
    name: String,
}

impl GroupModel {
    pub fn new(kind: ModelKind, generators: Vec<Element>, name: impl Into<String>) -> Result<Self> {
        let size = match kind {
            ModelKind::Permutation { degree } => degree,
            ModelKind::Lattice { rank } => rank,
        };
        if size == 0 {
            return Err(Error::InvalidModel("degree or rank must be positive".into()));
        }
        if generators.is_empty() {
            return Err(Error::InvalidModel("generator list is empty".into()));
        }
        let model = GroupModel {
            kind,
            generators,
            name: name.into(),
        };
        for g in &model.generators {
            model.check(g)?;
        }
        Ok(model)
    }

    /// `S_n` generated by the transposition `(1 2)` and the cycle `(1 2 ... n)`.
    pub fn symmetric(degree: usize) -> Self {
        if degree < 2 {
            let id = Element::Perm(Perm::identity(1));
            return GroupModel::new(ModelKind::Permutation { degree: 1 }, vec![id], "S1").expect("valid model");
        }
        let mut gens = vec![Element::Perm(Perm::from_cycles(degree, &[vec![1, 2]]).expect("valid"))];
        if degree > 2 {
            gens.push(Element::Perm(
                Perm::from_cycles(degree, &[(1..=degree).collect()]).expect("valid"),
            ));
        }
        GroupModel::new(ModelKind::Permutation { degree }, gens, format!("S{degree}"))
            .expect("valid model")
    }

    /// `Z/n` as the rotation group of an `n`-cycle, generated by rotation by one.
    pub fn cyclic(n: usize) -> Self {
        let gen = if n == 1 {
            Perm::identity(1)
        } else {
            Perm::from_cycles(n, &[(1..=n).collect()]).expect("valid")
        };
        GroupModel::new(
            ModelKind::Permutation { degree: n },
            vec![Element::Perm(gen)],
            format!("Z{n}"),
        )
        .expect("valid model")
    }

    /// `Z^rank` with the standard basis as generators.
    pub fn lattice(rank: usize) -> Self {
        let gens = (0..rank)
            .map(|i| {
                let mut v = vec![0; rank];
                v[i] = 1;
                Element::lattice(v)
            })
            .collect();
        GroupModel::new(ModelKind::Lattice { rank }, gens, format!("Z^{rank}"))
            .expect("valid model")
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    pub fn generator_set(&self) -> ElementSet {
        ElementSet::new(self.generators.iter().cloned())
    }

    pub fn identity(&self) -> Element {
        match self.kind {
            ModelKind::Permutation { degree } => Element::Perm(Perm::identity(degree)),
            ModelKind::Lattice { rank } => Element::lattice(vec![0; rank]),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.kind, ModelKind::Permutation { .. })
    }

    /// Checks that `g` is a valid element of this model.
    pub fn check(&self, g: &Element) -> Result<()> {
        let ok = match (self.kind, g) {
            (ModelKind::Permutation { degree }, Element::Perm(p)) => p.degree() == degree,
            (ModelKind::Lattice { rank }, Element::Lattice(v)) => v.len() == rank,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::ModelMismatch(format!(
                "element {g} does not belong to {}",
                self.name
            )))
        }
    }

    pub fn check_set(&self, set: &ElementSet) -> Result<()> {
        set.iter().try_for_each(|g| self.check(g))
    }

    pub fn compose(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check(a)?;
        self.check(b)?;
        a.compose(b)
    }

    /// Parses an element literal.
    ///
    /// Accepted atoms: `e` or `()`; cycle notation `(1 2)(3 4)` (permutation
    /// models); `(a,b,...)` or a bare integer for rank one (lattice models);
    /// `g<k>` for the 1-based `k`-th generator. Any atom may carry a power
    /// `^<int>`, and atoms multiply with `*`.
    pub fn parse_element(&self, text: &str) -> Result<Element> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::InvalidElement("empty element literal".into()));
        }
        let mut acc = self.identity();
        for factor in text.split('*') {
            let factor = factor.trim();
            let (atom, power) = match factor.rsplit_once('^') {
                Some((a, p)) => {
                    let p: i64 = p.trim().parse().map_err(|_| {
                        Error::InvalidElement(format!("bad exponent in `{factor}`"))
                    })?;
                    (a.trim(), p)
                }
                None => (factor, 1),
            };
            let g = self.parse_atom(atom)?;
            acc = acc.compose(&g.pow(power))?;
        }
        Ok(acc)
    }

    fn parse_atom(&self, atom: &str) -> Result<Element> {
        let bad = |why: &str| Error::InvalidElement(format!("`{atom}`: {why}"));
        if atom == "e" || atom == "()" {
            return Ok(self.identity());
        }
        if let Some(idx) = atom.strip_prefix('g') {
            let k: usize = idx.parse().map_err(|_| bad("unknown atom"))?;
            return self
                .generators
                .get(k.wrapping_sub(1))
                .cloned()
                .ok_or_else(|| bad("generator index out of range"));
        }
        match self.kind {
            ModelKind::Permutation { degree } => {
                let cycles = parse_cycles(atom)?;
                Ok(Element::Perm(Perm::from_cycles(degree, &cycles)?))
            }
            ModelKind::Lattice { rank } => {
                let inner = match atom.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
                    Some(inner) => inner,
                    None if rank == 1 => atom,
                    None => return Err(bad("expected `(a,b,...)`")),
                };
                let coords: Vec<i64> = inner
                    .split(',')
                    .map(|c| c.trim().parse::<i64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| bad("non-integer coordinate"))?;
                if coords.len() != rank {
                    return Err(bad(&format!("expected {rank} coordinates")));
                }
                Ok(Element::lattice(coords))
            }
        }
    }
}

impl fmt::Display for GroupModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ModelKind::Permutation { degree } => write!(f, "{} (permutations of 1..{degree})", self.name),
            ModelKind::Lattice { rank } => write!(f, "{} (lattice of rank {rank})", self.name),
        }
    }
}

/// Parses cycle notation `(1 2)(3 4 5)` into 1-based cycles.
pub fn parse_cycles(text: &str) -> Result<Vec<Vec<usize>>> {
    parse_cycle_tokens(text)?
        .into_iter()
        .map(|c| {
            c.into_iter()
                .map(|t| {
                    t.parse::<usize>().map_err(|_| {
                        Error::InvalidElement(format!("`{t}` is not a point in `{text}`"))
                    })
                })
                .collect()
        })
        .collect()
}

/// Splits cycle notation into cycles of raw tokens (point labels).
pub fn parse_cycle_tokens(text: &str) -> Result<Vec<Vec<String>>> {
    let mut cycles = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let open = rest
            .strip_prefix('(')
            .ok_or_else(|| Error::InvalidElement(format!("expected `(` in `{text}`")))?;
        let close = open
            .find(')')
            .ok_or_else(|| Error::InvalidElement(format!("unclosed cycle in `{text}`")))?;
        let tokens: Vec<String> = open[..close]
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(str::to_string)
            .collect();
        if !tokens.is_empty() {
            cycles.push(tokens);
        }
        rest = open[close + 1..].trim_start();
    }
    Ok(cycles)
}
