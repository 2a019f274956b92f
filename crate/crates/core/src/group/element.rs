use std::fmt;

use crate::error::{Error, Result};

/// A permutation of `{1, ..., n}` stored as its 0-based image array.
///
/// Composition is right-to-left function application: `a.then_after(b)` is
/// the map `x -> a(b(x))`, written `a ∘ b` or `ab`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Box<[u32]>);

impl Perm {
    pub fn identity(degree: usize) -> Perm {
        Perm((0..degree as u32).collect())
    }

    /// Builds a permutation from 0-based images, checking bijectivity.
    pub fn from_images(images: Vec<u32>) -> Result<Perm> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            let i = i as usize;
            if i >= n || seen[i] {
                return Err(Error::InvalidElement(format!(
                    "image array {:?} is not a bijection on 1..{n}",
                    images.iter().map(|x| x + 1).collect::<Vec<_>>()
                )));
            }
            seen[i] = true;
        }
        Ok(Perm(images.into_boxed_slice()))
    }

    /// Builds a permutation of `{1..degree}` from 1-based disjoint-or-not cycles.
    /// Cycles are composed right-to-left like any other product.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Perm> {
        let mut acc = Perm::identity(degree);
        for cycle in cycles.iter().rev() {
            let mut images: Vec<u32> = (0..degree as u32).collect();
            let mut seen = std::collections::HashSet::new();
            for (i, &p) in cycle.iter().enumerate() {
                if p == 0 || p > degree {
                    return Err(Error::InvalidElement(format!(
                        "point {p} outside 1..{degree}"
                    )));
                }
                if !seen.insert(p) {
                    return Err(Error::InvalidElement(format!(
                        "point {p} repeated within a cycle"
                    )));
                }
                let next = cycle[(i + 1) % cycle.len()];
                images[p - 1] = (next - 1) as u32;
            }
            let c = Perm(images.into_boxed_slice());
            acc = c.then_after(&acc);
        }
        Ok(acc)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// 0-based image of a 0-based point.
    pub fn apply(&self, point: usize) -> usize {
        self.0[point] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    /// `self ∘ inner`: apply `inner` first, then `self`.
    fn then_after(&self, inner: &Perm) -> Perm {
        Perm(inner.0.iter().map(|&x| self.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm(inv.into_boxed_slice())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// Nontrivial cycles, 0-based, each starting at its least point, ordered by
    /// least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut cur = self.0[start] as usize;
            while cur != start {
                seen[cur] = true;
                cycle.push(cur);
                cur = self.0[cur] as usize;
            }
            out.push(cycle);
        }
        out
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("e");
        }
        for c in cycles {
            f.write_str("(")?;
            for (i, p) in c.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", p + 1)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// A group element. The owning [`GroupModel`](crate::group::GroupModel)
/// determines which variant is valid; mixing variants (or degrees/ranks) in
/// one operation is a model-mismatch error.
///
/// Ordering is lexicographic on the payload (permutation image array, or the
/// integer vector), which is the canonical order used for deterministic
/// iteration and coset representatives.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Perm(Perm),
    Lattice(Box<[i64]>),
}

impl Element {
    pub fn lattice(coords: impl Into<Vec<i64>>) -> Element {
        Element::Lattice(coords.into().into_boxed_slice())
    }

    /// The identity of the model this element belongs to.
    pub fn identity_like(&self) -> Element {
        match self {
            Element::Perm(p) => Element::Perm(Perm::identity(p.degree())),
            Element::Lattice(v) => Element::Lattice(vec![0; v.len()].into_boxed_slice()),
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            Element::Perm(p) => p.is_identity(),
            Element::Lattice(v) => v.iter().all(|&x| x == 0),
        }
    }

    fn same_model(&self, other: &Element) -> Result<()> {
        match (self, other) {
            (Element::Perm(a), Element::Perm(b)) if a.degree() == b.degree() => Ok(()),
            (Element::Lattice(a), Element::Lattice(b)) if a.len() == b.len() => Ok(()),
            _ => Err(Error::ModelMismatch(format!(
                "cannot combine {self} with {other}"
            ))),
        }
    }

    /// The group law `self · other`: right-to-left composition for
    /// permutations, componentwise addition for lattice vectors.
    pub fn compose(&self, other: &Element) -> Result<Element> {
        self.same_model(other)?;
        Ok(match (self, other) {
            (Element::Perm(a), Element::Perm(b)) => Element::Perm(a.then_after(b)),
            (Element::Lattice(a), Element::Lattice(b)) => {
                Element::Lattice(a.iter().zip(b.iter()).map(|(x, y)| x + y).collect())
            }
            _ => unreachable!(),
        })
    }

    pub fn invert(&self) -> Element {
        match self {
            Element::Perm(p) => Element::Perm(p.inverse()),
            Element::Lattice(v) => Element::Lattice(v.iter().map(|x| -x).collect()),
        }
    }

    /// `self^k` for any integer `k`.
    pub fn pow(&self, k: i64) -> Element {
        let base = if k < 0 { self.invert() } else { self.clone() };
        let mut acc = self.identity_like();
        for _ in 0..k.unsigned_abs() {
            acc = acc.compose(&base).expect("same model");
        }
        acc
    }

    /// Raw payload encoding: `[2,3,1]` for permutations (1-based images),
    /// `(1,4)` for lattice vectors. Used for canonical vertex names.
    pub fn payload(&self) -> String {
        match self {
            Element::Perm(p) => {
                let parts: Vec<String> = p.images().iter().map(|x| (x + 1).to_string()).collect();
                format!("[{}]", parts.join(","))
            }
            Element::Lattice(_) => self.to_string(),
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Perm(p) => p.fmt(f),
            Element::Lattice(v) => {
                f.write_str("(")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str(")")
            }
        }
    }
}
