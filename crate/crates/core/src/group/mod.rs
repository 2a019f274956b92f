//! Desk-scale group models: permutation groups and integer lattices, with
//! exact element algebra, set products, word balls and coset partitions.
//!
//! Permutations compose right-to-left as functions: `(a·b)(x) = a(b(x))`.

mod coset;
mod element;
mod enumerate;
mod model;
mod set;

pub use coset::{cosets, CosetPartition};
pub use element::{Element, Perm};
pub use enumerate::{
    ball, enumerate_group, enumerate_subgroup, word_lengths, Closure, WordBall, DEFAULT_CAP,
};
pub use model::{parse_cycle_tokens, parse_cycles, GroupModel, ModelKind};
pub use set::{set_product, symmetrize, ElementSet};
