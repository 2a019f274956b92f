use std::fmt::Write;

use crate::distance::{format_rational, Rational};

/// An undirected edge between vertex indices, optionally weighted.
pub type WeightedEdge = (usize, usize, Option<Rational>);

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Renders an undirected graph in DOT. Vertices and edges appear in the
/// given order, so equal inputs give byte-identical output.
pub fn to_dot(name: &str, labels: &[String], edges: &[WeightedEdge]) -> String {
    let mut out = String::new();
    writeln!(out, "graph {} {{", quote(name)).unwrap();
    for l in labels {
        writeln!(out, "  {};", quote(l)).unwrap();
    }
    for (a, b, w) in edges {
        match w {
            Some(w) => writeln!(
                out,
                "  {} -- {} [weight={}];",
                quote(&labels[*a]),
                quote(&labels[*b]),
                quote(&format_rational(w))
            ),
            None => writeln!(out, "  {} -- {};", quote(&labels[*a]), quote(&labels[*b])),
        }
        .unwrap();
    }
    out.push_str("}\n");
    out
}

/// Edge list CSV with header `source,target,weight`; unweighted edges get
/// weight 1.
pub fn edges_csv(labels: &[String], edges: &[WeightedEdge]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(["source", "target", "weight"]).expect("in-memory write");
    for (a, b, weight) in edges {
        let weight = weight.map_or_else(|| "1".to_string(), |x| format_rational(&x));
        w.write_record([labels[*a].as_str(), labels[*b].as_str(), weight.as_str()])
            .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8 fields")
}
