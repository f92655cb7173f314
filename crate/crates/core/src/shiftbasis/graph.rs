use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use petgraph::algo::connected_components;
use petgraph::graph::UnGraph;
use serde::Serialize;
use thiserror::Error;

use super::{classify_shift, good_basis, BasisError, EndRef, GoodBasis, ShiftKind};
use crate::endspace::EndLabel;
use crate::surface::SurfaceSpec;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("nonorientable subtree is disconnected ({0} components)")]
    NontreeNonorientable(usize),
    #[error(transparent)]
    Basis(#[from] BasisError),
}

/// Complete graph on the genus ends at a truncation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EndsGraph {
    pub vertices: Vec<EndRef>,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeEdge {
    /// `ι(h_i) = h_i⁻`
    pub source: usize,
    /// `τ(h_i) = h_i⁺`
    pub target: usize,
    pub shift: u32,
    pub kind: ShiftKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpanningTree {
    pub vertices: Vec<EndRef>,
    pub edges: Vec<TreeEdge>,
}

pub fn ends_graph(s_hat: &SurfaceSpec, depth: usize) -> Result<EndsGraph, GraphError> {
    let basis = good_basis(s_hat, depth)?;
    let n = basis.ends.len();
    let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    Ok(EndsGraph { vertices: basis.ends, edges })
}

fn components(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> usize {
    let mut g = UnGraph::<(), ()>::with_capacity(n, n);
    let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
    for (a, b) in edges {
        g.add_edge(nodes[a], nodes[b], ());
    }
    connected_components(&g)
}

/// Edges are the handle-shifts of the basis. Fails unless they form a
/// spanning tree of the ends.
pub fn teg(basis: &GoodBasis) -> Result<SpanningTree, GraphError> {
    let index: BTreeMap<&EndRef, usize> = basis.ends.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let mut edges = Vec::with_capacity(basis.curves.len());
    for c in &basis.curves {
        let h = classify_shift(c);
        let (Some(&source), Some(&target)) = (index.get(&h.minus_end), index.get(&h.plus_end)) else {
            return Err(GraphError::NotATree(format!("shift {} has an end outside the truncation", h.id)));
        };
        if source == target {
            return Err(GraphError::NotATree(format!("shift {} is a loop at {}", h.id, h.minus_end)));
        }
        edges.push(TreeEdge { source, target, shift: h.id, kind: h.kind });
    }
    let n = basis.ends.len();
    if edges.len() + 1 != n {
        return Err(GraphError::NotATree(format!("{} edges on {} vertices", edges.len(), n)));
    }
    let comps = components(n, edges.iter().map(|e| (e.source, e.target)));
    if comps != 1 {
        return Err(GraphError::NotATree(format!("{comps} components")));
    }
    Ok(SpanningTree { vertices: basis.ends.clone(), edges })
}

/// Nonorientable ends with the nonorientable shifts among them. Must be
/// connected when nonempty.
pub fn nteg(tree: &SpanningTree) -> Result<SpanningTree, GraphError> {
    let keep: Vec<usize> =
        (0..tree.vertices.len()).filter(|&i| tree.vertices[i].label == EndLabel::Nonorientable).collect();
    let remap: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(new, &old)| (old, new)).collect();
    let edges: Vec<TreeEdge> = tree
        .edges
        .iter()
        .filter(|e| e.kind == ShiftKind::Nonorientable)
        .map(|e| TreeEdge { source: remap[&e.source], target: remap[&e.target], ..e.clone() })
        .collect();
    if !keep.is_empty() {
        let comps = components(keep.len(), edges.iter().map(|e| (e.source, e.target)));
        if comps != 1 {
            return Err(GraphError::NontreeNonorientable(comps));
        }
    }
    Ok(SpanningTree { vertices: keep.iter().map(|&i| tree.vertices[i].clone()).collect(), edges })
}

fn dot_vertex(out: &mut String, v: &EndRef) {
    let _ = writeln!(out, "  \"{v}\" [label=\"{v}\", end=\"{}\"];", v.label);
}

impl EndsGraph {
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph EG {\n");
        for v in &self.vertices {
            dot_vertex(&mut out, v);
        }
        for &(a, b) in &self.edges {
            let kind = ShiftKind::between(self.vertices[a].label, self.vertices[b].label);
            let _ = writeln!(out, "  \"{}\" -- \"{}\" [kind={}];", self.vertices[a], self.vertices[b], kind.short());
        }
        out.push_str("}\n");
        out
    }
}

impl SpanningTree {
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("digraph {name} {{\n");
        for v in &self.vertices {
            dot_vertex(&mut out, v);
        }
        for e in &self.edges {
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\" [label=\"h{}\", kind={}];",
                self.vertices[e.source],
                self.vertices[e.target],
                e.shift,
                e.kind.short()
            );
        }
        out.push_str("}\n");
        out
    }

    pub fn kinds(&self) -> BTreeSet<ShiftKind> {
        self.edges.iter().map(|e| e.kind).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{Genus, OrientClass};

    fn hat(orient: OrientClass, ends: &str) -> SurfaceSpec {
        SurfaceSpec::new(Genus::Infinite, orient, 0, ends.parse().unwrap())
    }

    #[test]
    fn three_ends() {
        let s = hat(OrientClass::Orientable, "union(pt(or), pt(or), pt(or))");
        let eg = ends_graph(&s, 4).unwrap();
        assert_eq!(eg.edges.len(), 3);
        let t = teg(&good_basis(&s, 4).unwrap()).unwrap();
        assert_eq!(t.edges.len(), 2);
    }

    #[test]
    fn two_ends_is_an_edge() {
        let s = hat(OrientClass::Orientable, "union(pt(or), pt(or))");
        let eg = ends_graph(&s, 4).unwrap();
        let t = teg(&good_basis(&s, 4).unwrap()).unwrap();
        assert_eq!(eg.edges, vec![(0, 1)]);
        assert_eq!(t.edges.len(), 1);
    }

    #[test]
    fn nonorientable_pair_is_joined() {
        let s = hat(OrientClass::InfinitelyNonorientable, "union(pt(or), pt(nonor), pt(nonor))");
        let t = teg(&good_basis(&s, 4).unwrap()).unwrap();
        let n = nteg(&t).unwrap();
        assert_eq!(n.vertices.len(), 2);
        assert_eq!(n.edges.len(), 1);
    }

    #[test]
    fn dot_marks_kinds() {
        let s = hat(OrientClass::InfinitelyNonorientable, "union(pt(or), pt(nonor), pt(nonor))");
        let t = teg(&good_basis(&s, 4).unwrap()).unwrap();
        let dot = t.to_dot("TEG");
        assert!(dot.contains("kind=semi"));
        assert!(dot.contains("kind=nonor"));
        let eg = ends_graph(&s, 4).unwrap().to_dot();
        assert_eq!(eg.matches(" -- ").count(), 3);
    }

    #[test]
    fn broken_family_is_not_a_tree() {
        let s = hat(OrientClass::Orientable, "union(pt(or), pt(or), pt(or))");
        let mut b = good_basis(&s, 4).unwrap();
        b.curves.pop();
        assert!(matches!(teg(&b), Err(GraphError::NotATree(_))));
    }
}
