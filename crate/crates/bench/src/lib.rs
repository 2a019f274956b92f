//! Fixtures shared by the criterion benchmarks in `benches/`.

use coarsekit::group::{enumerate_group, enumerate_subgroup, symmetrize, ModelKind, DEFAULT_CAP};
use coarsekit::metrics::Filtration;
use coarsekit::{ElementSet, GroupModel};

/// The automorphism group of the rooted binary tree of depth 3 (order 128),
/// with its level-stabilizer filtration `{e} ⊆ St(2) ⊆ St(1) ⊆ G`.
pub fn tree_group() -> (GroupModel, Filtration) {
    let s8 = GroupModel::symmetric(8);
    let p = |s: &str| s8.parse_element(s).expect("valid cycle");
    let g = GroupModel::new(
        ModelKind::Permutation { degree: 8 },
        vec![p("(1 5)(2 6)(3 7)(4 8)"), p("(1 3)(2 4)"), p("(1 2)")],
        "Aut(T3)",
    )
    .expect("valid model");
    let closure = |gens: &[&str]| {
        let set: ElementSet = gens.iter().map(|s| p(s)).collect();
        enumerate_subgroup(&g, &set, DEFAULT_CAP).expect("finite").elements
    };
    let st2 = closure(&["(1 2)", "(3 4)", "(5 6)", "(7 8)"]);
    let st1 = closure(&["(1 2)", "(3 4)", "(5 6)", "(7 8)", "(1 3)(2 4)", "(5 7)(6 8)"]);
    let all = enumerate_group(&g, DEFAULT_CAP).expect("finite");
    let f = Filtration::new(0, vec![ElementSet::singleton(g.identity()), st2, st1, all]).expect("filtration");
    (g, f)
}

/// `S_n` with its symmetrized standard generators and full element list.
pub fn symmetric_group(n: usize) -> (GroupModel, ElementSet, ElementSet) {
    let g = GroupModel::symmetric(n);
    let s = symmetrize(&g.generator_set());
    let all = enumerate_group(&g, DEFAULT_CAP).expect("finite");
    (g, s, all)
}
