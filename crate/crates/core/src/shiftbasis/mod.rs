//! Good bases of separating curves, their handle-shifts, and the ends
//! graph.
//!
//! The end space of `N̂` is unfolded into a rooted tree truncated at a
//! depth: unions branch into their parts, a `seq` into `depth` copies of its
//! body plus a tail leaf carrying the limit label, and a Cantor block into a
//! binary tree of the given depth. A separating curve is a non-root node
//! (it cuts off the ends below it), and a family of curves is good when
//! every complementary component keeps exactly one leaf.

mod graph;
mod homology;
mod strip;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::endspace::{self, EndExpr, EndLabel, EndSpaceError, Multiplicity};
use crate::surface::{forget_planar, OrientClass, SurfaceSpec};

pub use graph::{ends_graph, nteg, teg, EndsGraph, GraphError, SpanningTree, TreeEdge};
pub use homology::{homology_oracle, oracle_rank, smith_normal_form, HomologyReport, WindowSpec};
pub use strip::{
    dyck_normal_form, strip_relation_check, strip_relation_check_without_h3, StripError, StripModel, Token,
    TokenKind,
};

/// `r`, the rank of the separating homology of `N̂`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rank {
    Finite(u64),
    CountablyInfinite,
}

impl Rank {
    /// Whether `i` is a valid shift index.
    pub fn contains(self, i: usize) -> bool {
        match self {
            Rank::Finite(n) => (i as u64) < n,
            Rank::CountablyInfinite => true,
        }
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rank::Finite(n) => write!(f, "{n}"),
            Rank::CountablyInfinite => f.write_str("countably_infinite"),
        }
    }
}

impl Serialize for Rank {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Rank::Finite(n) => serializer.serialize_u64(*n),
            Rank::CountablyInfinite => serializer.serialize_str("countably_infinite"),
        }
    }
}

/// A leaf of the truncated end tree.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EndRef {
    pub address: Vec<u32>,
    pub label: EndLabel,
}

impl fmt::Display for EndRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("e")?;
        for (i, a) in self.address.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl Serialize for EndRef {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisCurve {
    pub id: u32,
    /// (stage of the recursion, component processed at that stage)
    pub level: (u32, u32),
    /// Ends cut off by the curve, and the rest.
    pub sides: (Vec<EndRef>, Vec<EndRef>),
    pub homology_index: u32,
    /// End of the one-ended component just inside the curve.
    pub inner_end: EndRef,
    /// End of the one-ended component just outside the curve.
    pub outer_end: EndRef,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisRoute {
    /// Any generating family works: orientable, even, odd, or all genus
    /// ends nonorientable.
    Direct,
    /// Recursive construction keeping nonorientable ends paired.
    Recursive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoodBasis {
    pub route: BasisRoute,
    pub depth: usize,
    /// Genus ends at this truncation.
    pub ends: Vec<EndRef>,
    pub curves: Vec<BasisCurve>,
    /// Whether `End_g` is infinite, so the curves are a finite prefix.
    pub truncated: bool,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BasisError {
    #[error("at least two ends accumulated by genus are needed, found {0}")]
    FewerThanTwoGenusEnds(usize),
    #[error("depth must be positive")]
    DepthZero,
    #[error(transparent)]
    Ends(#[from] EndSpaceError),
    #[error("good-basis postcondition failed: {0}")]
    Postcondition(String),
}

#[derive(Debug)]
struct Node {
    address: Vec<u32>,
    /// Set on leaves.
    label: Option<EndLabel>,
    children: Vec<usize>,
}

#[derive(Debug)]
struct EndTree {
    nodes: Vec<Node>,
}

impl EndTree {
    fn build(e: &EndExpr, depth: usize) -> EndTree {
        let mut t = EndTree { nodes: Vec::new() };
        t.add(e, Vec::new(), depth);
        t
    }

    fn push(&mut self, address: Vec<u32>, label: Option<EndLabel>) -> usize {
        self.nodes.push(Node { address, label, children: Vec::new() });
        self.nodes.len() - 1
    }

    fn add(&mut self, e: &EndExpr, address: Vec<u32>, depth: usize) -> usize {
        match e {
            EndExpr::Pt(l) => self.push(address, Some(*l)),
            EndExpr::Cantor(l) => self.cantor(*l, address, depth),
            EndExpr::Union(parts) => {
                let me = self.push(address.clone(), None);
                for (i, p) in parts.iter().enumerate() {
                    let mut a = address.clone();
                    a.push(i as u32);
                    let c = self.add(p, a, depth);
                    self.nodes[me].children.push(c);
                }
                me
            }
            EndExpr::Seq { body, limit } => {
                let me = self.push(address.clone(), None);
                for i in 0..depth {
                    let mut a = address.clone();
                    a.push(i as u32);
                    let c = self.add(body, a, depth);
                    self.nodes[me].children.push(c);
                }
                let mut a = address;
                a.push(depth as u32);
                let tail = self.push(a, Some(*limit));
                self.nodes[me].children.push(tail);
                me
            }
        }
    }

    fn cantor(&mut self, l: EndLabel, address: Vec<u32>, left: usize) -> usize {
        if left == 0 {
            return self.push(address, Some(l));
        }
        let me = self.push(address.clone(), None);
        for i in 0..2 {
            let mut a = address.clone();
            a.push(i);
            let c = self.cantor(l, a, left - 1);
            self.nodes[me].children.push(c);
        }
        me
    }

    fn end_ref(&self, leaf: usize) -> EndRef {
        EndRef { address: self.nodes[leaf].address.clone(), label: self.nodes[leaf].label.expect("leaf") }
    }

    /// Leaves below `x` in address order.
    fn leaves(&self, x: usize) -> Vec<usize> {
        let node = &self.nodes[x];
        if node.children.is_empty() {
            return vec![x];
        }
        node.children.iter().flat_map(|&c| self.leaves(c)).collect()
    }
}

struct Selection<'a> {
    tree: &'a EndTree,
    heir: Vec<Option<usize>>,
    parent: Vec<Option<usize>>,
    /// (node, stage, component) in emission order
    selected: Vec<(usize, u32, u32)>,
    is_selected: Vec<bool>,
    components_at_stage: Vec<u32>,
}

impl<'a> Selection<'a> {
    fn new(tree: &'a EndTree) -> Self {
        let n = tree.nodes.len();
        let mut parent = vec![None; n];
        for (i, node) in tree.nodes.iter().enumerate() {
            for &c in &node.children {
                parent[c] = Some(i);
            }
        }
        Selection {
            tree,
            heir: vec![None; n],
            parent,
            selected: Vec::new(),
            is_selected: vec![false; n],
            components_at_stage: Vec::new(),
        }
    }

    fn component_index(&mut self, stage: u32) -> u32 {
        let s = stage as usize;
        if self.components_at_stage.len() <= s {
            self.components_at_stage.resize(s + 1, 0);
        }
        let c = self.components_at_stage[s];
        self.components_at_stage[s] += 1;
        c
    }

    fn select(&mut self, node: usize, stage: u32, comp: u32) {
        self.is_selected[node] = true;
        self.selected.push((node, stage, comp));
    }

    /// First child inherits the parent's component; every other child is
    /// cut off.
    fn heirs_everywhere(&mut self, x: usize, stage: u32, comp: u32) {
        let children = self.tree.nodes[x].children.clone();
        if let Some((&first, rest)) = children.split_first() {
            self.heir[x] = Some(first);
            for &c in rest {
                self.select(c, stage, comp);
            }
            for &c in &children {
                self.heirs_everywhere(c, stage, comp);
            }
        }
    }

    fn labels_below(&self, x: usize) -> (bool, bool) {
        let leaves = self.tree.leaves(x);
        let has = |l: EndLabel| leaves.iter().any(|&v| self.tree.nodes[v].label == Some(l));
        (has(EndLabel::Orientable), has(EndLabel::Nonorientable))
    }

    /// Region below `x`: if it mixes orientable and nonorientable ends,
    /// keep the least nonorientable end in `x`'s component, cut off the
    /// siblings met on the way down and recurse into them.
    fn region(&mut self, x: usize, stage: u32) {
        let comp = self.component_index(stage);
        let (has_or, has_nonor) = self.labels_below(x);
        if !(has_or && has_nonor) {
            self.heirs_everywhere(x, stage, comp);
            return;
        }
        let target = self
            .tree
            .leaves(x)
            .into_iter()
            .find(|&v| self.tree.nodes[v].label == Some(EndLabel::Nonorientable))
            .expect("region has a nonorientable end");
        let mut path = vec![target];
        while let Some(p) = self.parent[*path.last().expect("nonempty")] {
            path.push(p);
            if p == x {
                break;
            }
        }
        path.reverse();
        let mut cut_off = Vec::new();
        for w in path.windows(2) {
            let (y, next) = (w[0], w[1]);
            self.heir[y] = Some(next);
            for &c in &self.tree.nodes[y].children {
                if c != next {
                    cut_off.push(c);
                }
            }
        }
        for &c in &cut_off {
            self.select(c, stage, comp);
        }
        for c in cut_off {
            self.region(c, stage + 1);
        }
    }

    fn representative(&self, mut x: usize) -> usize {
        while let Some(h) = self.heir[x] {
            x = h;
        }
        x
    }

    /// Top node of the component containing `x`.
    fn component_top(&self, mut x: usize) -> usize {
        while !self.is_selected[x] {
            match self.parent[x] {
                Some(p) => x = p,
                None => return x,
            }
        }
        x
    }
}

/// Recursive good-basis construction on the `depth`-truncated end tree of
/// `s_hat` (planar ends are forgotten first if present).
pub fn good_basis(s_hat: &SurfaceSpec, depth: usize) -> Result<GoodBasis, BasisError> {
    if depth == 0 {
        return Err(BasisError::DepthZero);
    }
    endspace::normalize(&s_hat.ends)?;
    let s_hat = forget_planar(s_hat).map_err(|_| BasisError::FewerThanTwoGenusEnds(0))?;
    let tree = EndTree::build(&s_hat.ends, depth);
    let leaves = tree.leaves(0);
    if leaves.len() < 2 {
        return Err(BasisError::FewerThanTwoGenusEnds(leaves.len()));
    }
    let labels = s_hat.ends.labels();
    let mixed = s_hat.orient == OrientClass::InfinitelyNonorientable
        && labels.contains(EndLabel::Orientable)
        && labels.contains(EndLabel::Nonorientable);
    let route = if mixed { BasisRoute::Recursive } else { BasisRoute::Direct };

    let mut sel = Selection::new(&tree);
    match route {
        BasisRoute::Direct => {
            let comp = sel.component_index(0);
            sel.heirs_everywhere(0, 0, comp);
        }
        BasisRoute::Recursive => sel.region(0, 0),
    }

    let all: Vec<EndRef> = leaves.iter().map(|&v| tree.end_ref(v)).collect();
    let mut curves = Vec::with_capacity(sel.selected.len());
    for (i, &(node, stage, comp)) in sel.selected.iter().enumerate() {
        let inner: BTreeSet<usize> = tree.leaves(node).into_iter().collect();
        let parent = sel.parent[node].expect("selected nodes are not the root");
        let outer_top = sel.component_top(parent);
        curves.push(BasisCurve {
            id: i as u32,
            level: (stage, comp),
            sides: (
                leaves.iter().filter(|v| inner.contains(v)).map(|&v| tree.end_ref(v)).collect(),
                leaves.iter().filter(|v| !inner.contains(v)).map(|&v| tree.end_ref(v)).collect(),
            ),
            homology_index: i as u32,
            inner_end: tree.end_ref(sel.representative(node)),
            outer_end: tree.end_ref(sel.representative(outer_top)),
        });
    }
    let basis = GoodBasis {
        route,
        depth,
        ends: all,
        curves,
        truncated: endspace::count_genus_ends(&s_hat.ends) == Multiplicity::Infinite,
    };
    check_postconditions(&basis)?;
    Ok(basis)
}

/// Components of the complement of the curves, as sets of ends: two ends
/// share a component when no curve separates them.
pub fn complement_components(basis: &GoodBasis) -> Vec<Vec<EndRef>> {
    let mut by_signature: std::collections::BTreeMap<Vec<bool>, Vec<EndRef>> = Default::default();
    for end in &basis.ends {
        let sig: Vec<bool> = basis.curves.iter().map(|c| c.sides.0.contains(end)).collect();
        by_signature.entry(sig).or_default().push(end.clone());
    }
    by_signature.into_values().collect()
}

fn check_postconditions(basis: &GoodBasis) -> Result<(), BasisError> {
    let comps = complement_components(basis);
    if comps.len() != basis.curves.len() + 1 || comps.iter().any(|c| c.len() != 1) {
        return Err(BasisError::Postcondition(format!(
            "{} curves leave {} components with end counts {:?}",
            basis.curves.len(),
            comps.len(),
            comps.iter().map(Vec::len).collect::<Vec<_>>()
        )));
    }
    for (i, a) in basis.curves.iter().enumerate() {
        if a.sides.0.is_empty() || a.sides.1.is_empty() {
            return Err(BasisError::Postcondition(format!("curve {} has an empty side", a.id)));
        }
        let sa: BTreeSet<&EndRef> = a.sides.0.iter().collect();
        for b in &basis.curves[i + 1..] {
            let sb: BTreeSet<&EndRef> = b.sides.0.iter().collect();
            let meet = sa.intersection(&sb).count();
            if meet != 0 && meet != sa.len() && meet != sb.len() {
                return Err(BasisError::Postcondition(format!("curves {} and {} cross", a.id, b.id)));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ShiftKind {
    Orientable,
    SemiOrientable,
    /// Exists between two nonorientable ends but is never chosen.
    PseudoOrientable,
    Nonorientable,
}

impl ShiftKind {
    /// Short name used in DOT output.
    pub fn short(self) -> &'static str {
        match self {
            ShiftKind::Orientable => "or",
            ShiftKind::SemiOrientable => "semi",
            ShiftKind::PseudoOrientable => "pseudo",
            ShiftKind::Nonorientable => "nonor",
        }
    }

    /// Kind chosen for a shift between ends with these labels.
    pub fn between(a: EndLabel, b: EndLabel) -> ShiftKind {
        match (a == EndLabel::Nonorientable, b == EndLabel::Nonorientable) {
            (false, false) => ShiftKind::Orientable,
            (true, true) => ShiftKind::Nonorientable,
            _ => ShiftKind::SemiOrientable,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HandleShift {
    pub id: u32,
    /// Repelling end `h⁻`.
    pub minus_end: EndRef,
    /// Attracting end `h⁺`.
    pub plus_end: EndRef,
    pub kind: ShiftKind,
    pub support_curve: u32,
}

/// Handle-shift attached to a basis curve, from the outer end to the inner
/// one.
pub fn classify_shift(c: &BasisCurve) -> HandleShift {
    HandleShift {
        id: c.id,
        minus_end: c.outer_end.clone(),
        plus_end: c.inner_end.clone(),
        kind: ShiftKind::between(c.outer_end.label, c.inner_end.label),
        support_curve: c.id,
    }
}

/// `r`: the number of basis curves, or countably infinite when there are
/// infinitely many genus ends.
pub fn rank_r(basis: &GoodBasis) -> Rank {
    if basis.truncated {
        Rank::CountablyInfinite
    } else {
        Rank::Finite(basis.curves.len() as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::Genus;

    fn hat(orient: OrientClass, ends: &str) -> SurfaceSpec {
        SurfaceSpec::new(Genus::Infinite, orient, 0, ends.parse().unwrap())
    }

    #[test]
    fn one_orientable_two_nonorientable_ends() {
        let s = hat(OrientClass::InfinitelyNonorientable, "union(pt(or), pt(nonor), pt(nonor))");
        let b = good_basis(&s, 4).unwrap();
        assert_eq!(b.route, BasisRoute::Recursive);
        assert_eq!(b.curves.len(), 2);
        let kinds: Vec<ShiftKind> = b.curves.iter().map(|c| classify_shift(c).kind).collect();
        assert!(kinds.contains(&ShiftKind::SemiOrientable));
        assert!(kinds.contains(&ShiftKind::Nonorientable));
        let or_curve = b.curves.iter().find(|c| c.sides.0.len() == 1 && c.sides.0[0].label == EndLabel::Orientable);
        assert!(or_curve.is_some(), "one curve splits off the orientable end");
    }

    #[test]
    fn jacobs_ladder() {
        let b = good_basis(&hat(OrientClass::Orientable, "union(pt(or), pt(or))"), 4).unwrap();
        assert_eq!(b.curves.len(), 1);
        assert_eq!(b.curves[0].sides.0.len(), 1);
        assert_eq!(b.curves[0].sides.1.len(), 1);
        assert_eq!(rank_r(&b), Rank::Finite(1));
    }

    #[test]
    fn one_ended_is_refused() {
        assert_eq!(
            good_basis(&hat(OrientClass::Orientable, "pt(or)"), 4),
            Err(BasisError::FewerThanTwoGenusEnds(1))
        );
    }

    #[test]
    fn cantor_ends_are_truncated() {
        let b = good_basis(&hat(OrientClass::Orientable, "cantor(or)"), 3).unwrap();
        assert_eq!(b.ends.len(), 8);
        assert_eq!(b.curves.len(), 7);
        assert_eq!(rank_r(&b), Rank::CountablyInfinite);
    }

    #[test]
    fn sequences_unroll_to_depth_copies_and_a_tail() {
        let b = good_basis(&hat(OrientClass::Orientable, "seq(pt(or); limit=or)"), 3).unwrap();
        assert_eq!(b.ends.iter().map(ToString::to_string).collect::<Vec<_>>(), vec!["e0", "e1", "e2", "e3"]);
        assert!(b.truncated);
    }

    #[test]
    fn planar_ends_are_forgotten() {
        let s = hat(OrientClass::Orientable, "union(pt(planar), pt(or), cantor(planar), pt(or))");
        assert_eq!(good_basis(&s, 2).unwrap().curves.len(), 1);
    }

    #[test]
    fn mixed_nested_recursion_keeps_nonorientable_ends_together() {
        let s = hat(
            OrientClass::InfinitelyNonorientable,
            "union(seq(union(pt(or), pt(nonor)); limit=nonor), pt(or))",
        );
        let b = good_basis(&s, 2).unwrap();
        assert_eq!(b.curves.len(), 5);
        let stages: BTreeSet<u32> = b.curves.iter().map(|c| c.level.0).collect();
        assert!(stages.len() > 1);
        let tree = teg(&b).unwrap();
        nteg(&tree).unwrap();
    }
}
