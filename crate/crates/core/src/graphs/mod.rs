//! Coset graphs, their comparison with word metrics, and coset ray trees.

mod coset_graph;
mod export;
mod ray_tree;

pub use coset_graph::{build_coset_graph, car_check, two_qi_check, CarReport, CosetGraph, CosetPair, TwoQiReport};
pub use export::{edges_csv, to_dot, WeightedEdge};
pub use ray_tree::{build_ray_tree, ray_distance_report, ray_tree_distance, CosetRayTree, RayDistanceReport};
