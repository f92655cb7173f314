//! Pants decompositions of finite-type surfaces as decorated multigraphs.
//!
//! Nodes are pairs of pants. A two-sided curve is an edge between the two
//! pants it bounds (a loop when both sides are the same pants); a one-sided
//! curve is a half-edge on the pants bounded by its Möbius neighbourhood.
//! Punctures and boundary components are separate stub kinds.

mod enumerate;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use petgraph::graph::{NodeIndex, UnGraph};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::surface::FiniteSurface;

pub use enumerate::{canonical_key, enumerate_pants_decompositions, MAX_ENUMERATED_PANTS};

pub type PantsCurveId = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PantsEdge {
    TwoSided { id: PantsCurveId, a: usize, b: usize, reversing: bool },
    OneSided { id: PantsCurveId, pants: usize },
}

impl PantsEdge {
    pub fn id(&self) -> PantsCurveId {
        match *self {
            PantsEdge::TwoSided { id, .. } | PantsEdge::OneSided { id, .. } => id,
        }
    }

    /// Pants incident to the curve (once per side).
    pub fn ends(&self) -> Vec<usize> {
        match *self {
            PantsEdge::TwoSided { a, b, .. } => vec![a, b],
            PantsEdge::OneSided { pants, .. } => vec![pants],
        }
    }
}

/// Puncture and boundary legs of one pants.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Stub {
    pub punctures: u32,
    pub boundary: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PantsDecomposition {
    pub pants: usize,
    pub edges: Vec<PantsEdge>,
    pub stubs: Vec<Stub>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PantsError {
    #[error("no curve with id {0}")]
    UnknownCurve(PantsCurveId),
    #[error("curve {0} does not separate")]
    NotSeparating(PantsCurveId),
    #[error("-χ = {0} exceeds the enumeration bound {MAX_ENUMERATED_PANTS}")]
    TooLarge(i64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PantsViolation {
    Malformed { detail: String },
    LegCount { pants: usize, legs: u32 },
    PantsCount { found: usize, expected: i64 },
    StubTotals { punctures: u32, boundary: u32, expected_punctures: u32, expected_boundary: u32 },
    Disconnected,
    Orientability { model_orientable: bool },
}

impl fmt::Display for PantsViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PantsViolation::Malformed { detail } => write!(f, "malformed decomposition: {detail}"),
            PantsViolation::LegCount { pants, legs } => write!(f, "pants {pants} has {legs} legs"),
            PantsViolation::PantsCount { found, expected } => {
                write!(f, "{found} pants but -χ = {expected}")
            }
            PantsViolation::StubTotals { punctures, boundary, expected_punctures, expected_boundary } => write!(
                f,
                "stubs give n={punctures}, b={boundary}; surface has n={expected_punctures}, b={expected_boundary}"
            ),
            PantsViolation::Disconnected => f.write_str("pants graph is disconnected"),
            PantsViolation::Orientability { model_orientable } => {
                let what = if *model_orientable { "orientable" } else { "nonorientable" };
                write!(f, "decomposition is {what}, surface is not")
            }
        }
    }
}

impl PantsDecomposition {
    pub fn curve_ids(&self) -> Vec<PantsCurveId> {
        self.edges.iter().map(PantsEdge::id).collect()
    }

    pub fn edge(&self, id: PantsCurveId) -> Result<&PantsEdge, PantsError> {
        self.edges.iter().find(|e| e.id() == id).ok_or(PantsError::UnknownCurve(id))
    }

    fn legs(&self) -> Vec<u32> {
        let mut legs: Vec<u32> = self.stubs.iter().map(|s| s.punctures + s.boundary).collect();
        legs.resize(self.pants, 0);
        for e in &self.edges {
            for p in e.ends() {
                if p < self.pants {
                    legs[p] += 1;
                }
            }
        }
        legs
    }

    /// Components of the pants graph with the curves in `skip` deleted.
    fn components(&self, skip: Option<PantsCurveId>) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.pants];
        let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); self.pants];
        for e in &self.edges {
            if Some(e.id()) == skip {
                continue;
            }
            if let PantsEdge::TwoSided { a, b, .. } = *e {
                nbrs[a].push(b);
                nbrs[b].push(a);
            }
        }
        let mut next = 0;
        for start in 0..self.pants {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = next;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &w in &nbrs[u] {
                    if comp[w] == usize::MAX {
                        comp[w] = next;
                        queue.push_back(w);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    /// Whether pants can be oriented so every two-sided gluing is
    /// orientation-compatible, with no one-sided curves.
    pub fn is_orientable_model(&self) -> bool {
        if self.edges.iter().any(|e| matches!(e, PantsEdge::OneSided { .. })) {
            return false;
        }
        let mut side: Vec<Option<bool>> = vec![None; self.pants];
        let mut nbrs: Vec<Vec<(usize, bool)>> = vec![Vec::new(); self.pants];
        for e in &self.edges {
            if let PantsEdge::TwoSided { a, b, reversing, .. } = *e {
                if a == b {
                    if reversing {
                        return false;
                    }
                    continue;
                }
                nbrs[a].push((b, reversing));
                nbrs[b].push((a, reversing));
            }
        }
        for start in 0..self.pants {
            if side[start].is_some() {
                continue;
            }
            side[start] = Some(false);
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                let su = side[u].expect("visited");
                for &(w, rev) in &nbrs[u] {
                    let want = su ^ rev;
                    match side[w] {
                        None => {
                            side[w] = Some(want);
                            queue.push_back(w);
                        }
                        Some(sw) if sw != want => return false,
                        Some(_) => {}
                    }
                }
            }
        }
        true
    }
}

/// Consistency of `pd` as a pants decomposition of `f`.
pub fn validate_pants(pd: &PantsDecomposition, f: &FiniteSurface) -> Vec<PantsViolation> {
    let mut out = Vec::new();
    if pd.stubs.len() != pd.pants {
        out.push(PantsViolation::Malformed {
            detail: format!("{} stub records for {} pants", pd.stubs.len(), pd.pants),
        });
    }
    let mut ids = BTreeSet::new();
    for e in &pd.edges {
        if !ids.insert(e.id()) {
            out.push(PantsViolation::Malformed { detail: format!("curve id {} repeated", e.id()) });
        }
        if e.ends().iter().any(|&p| p >= pd.pants) {
            out.push(PantsViolation::Malformed { detail: format!("curve {} ends outside the pants", e.id()) });
        }
    }
    if !out.is_empty() {
        return out;
    }
    for (p, legs) in pd.legs().into_iter().enumerate() {
        if legs != 3 {
            out.push(PantsViolation::LegCount { pants: p, legs });
        }
    }
    let expected = -f.euler_characteristic();
    if expected <= 0 || pd.pants as i64 != expected || !f.is_well_formed() {
        out.push(PantsViolation::PantsCount { found: pd.pants, expected });
    }
    let punctures = pd.stubs.iter().map(|s| s.punctures).sum();
    let boundary = pd.stubs.iter().map(|s| s.boundary).sum();
    if punctures != f.punctures || boundary != f.boundary {
        out.push(PantsViolation::StubTotals {
            punctures,
            boundary,
            expected_punctures: f.punctures,
            expected_boundary: f.boundary,
        });
    }
    if pd.pants > 0 && pd.components(None).iter().any(|&c| c != 0) {
        out.push(PantsViolation::Disconnected);
    }
    let model_orientable = pd.is_orientable_model();
    if model_orientable != f.orientable {
        out.push(PantsViolation::Orientability { model_orientable });
    }
    out
}

/// Simple graph on curves; two curves are adjacent when they share a pants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdjacencyGraph {
    pub vertices: Vec<PantsCurveId>,
    pub edges: Vec<(PantsCurveId, PantsCurveId)>,
}

impl AdjacencyGraph {
    pub fn to_petgraph(&self) -> UnGraph<PantsCurveId, ()> {
        let mut g = UnGraph::new_undirected();
        let idx: BTreeMap<PantsCurveId, NodeIndex> = self.vertices.iter().map(|&v| (v, g.add_node(v))).collect();
        for &(a, b) in &self.edges {
            g.add_edge(idx[&a], idx[&b], ());
        }
        g
    }
}

pub fn adjacency_graph(pd: &PantsDecomposition) -> AdjacencyGraph {
    let mut at: Vec<BTreeSet<PantsCurveId>> = vec![BTreeSet::new(); pd.pants];
    for e in &pd.edges {
        for p in e.ends() {
            at[p].insert(e.id());
        }
    }
    let mut edges = BTreeSet::new();
    for curves in &at {
        let list: Vec<PantsCurveId> = curves.iter().copied().collect();
        for (i, &a) in list.iter().enumerate() {
            for &b in &list[i + 1..] {
                edges.insert((a, b));
            }
        }
    }
    let mut vertices = pd.curve_ids();
    vertices.sort_unstable();
    AdjacencyGraph { vertices, edges: edges.into_iter().collect() }
}

/// Brute force: delete the curve and test connectivity.
pub fn is_separating(curve: PantsCurveId, pd: &PantsDecomposition) -> Result<bool, PantsError> {
    match *pd.edge(curve)? {
        PantsEdge::OneSided { .. } => Ok(false),
        PantsEdge::TwoSided { a, b, .. } => Ok(a != b && pd.components(Some(curve))[a] != pd.components(Some(curve))[b]),
    }
}

/// A separating curve bounding a twice-punctured disk.
pub fn is_outer(curve: PantsCurveId, pd: &PantsDecomposition) -> Result<bool, PantsError> {
    if !is_separating(curve, pd)? {
        return Err(PantsError::NotSeparating(curve));
    }
    let PantsEdge::TwoSided { a, b, .. } = *pd.edge(curve)? else {
        unreachable!("one-sided curves never separate")
    };
    let comp = pd.components(Some(curve));
    let twice_punctured_disk = |p: usize| {
        comp.iter().filter(|&&c| c == comp[p]).count() == 1 && pd.stubs[p] == Stub { punctures: 2, boundary: 0 }
    };
    Ok(twice_punctured_disk(a) || twice_punctured_disk(b))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CutVertexReport {
    pub cut_vertices: Vec<PantsCurveId>,
    pub non_outer_separating: Vec<PantsCurveId>,
    pub coincide: bool,
}

/// Compare cut vertices of the adjacency graph with non-outer separating
/// curves found by brute force.
pub fn cut_vertex_check(pd: &PantsDecomposition) -> CutVertexReport {
    let adj = adjacency_graph(pd);
    let g = adj.to_petgraph();
    let mut cut_vertices: Vec<PantsCurveId> =
        petgraph::algo::articulation_points::articulation_points(&g).into_iter().map(|n| g[n]).collect();
    cut_vertices.sort_unstable();
    let mut non_outer_separating: Vec<PantsCurveId> = adj
        .vertices
        .iter()
        .copied()
        .filter(|&c| is_separating(c, pd) == Ok(true) && is_outer(c, pd) == Ok(false))
        .collect();
    non_outer_separating.sort_unstable();
    let coincide = cut_vertices == non_outer_separating;
    CutVertexReport { cut_vertices, non_outer_separating, coincide }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two(id: u32, a: usize, b: usize) -> PantsEdge {
        PantsEdge::TwoSided { id, a, b, reversing: false }
    }

    fn punct(n: u32) -> Stub {
        Stub { punctures: n, boundary: 0 }
    }

    fn s05_path() -> PantsDecomposition {
        PantsDecomposition { pants: 3, edges: vec![two(0, 0, 1), two(1, 1, 2)], stubs: vec![punct(2), punct(1), punct(2)] }
    }

    #[test]
    fn s05_path_is_valid() {
        assert!(validate_pants(&s05_path(), &FiniteSurface::orientable(0, 5, 0)).is_empty());
    }

    #[test]
    fn one_sided_on_orientable_surface() {
        let pd = PantsDecomposition {
            pants: 1,
            edges: vec![PantsEdge::OneSided { id: 0, pants: 0 }],
            stubs: vec![punct(2)],
        };
        assert_eq!(
            validate_pants(&pd, &FiniteSurface::orientable(1, 2, 0)),
            vec![
                PantsViolation::PantsCount { found: 1, expected: 2 },
                PantsViolation::Orientability { model_orientable: false }
            ]
        );
        assert!(validate_pants(&pd, &FiniteSurface::nonorientable(1, 2, 0)).is_empty());
    }

    #[test]
    fn leg_rule() {
        let pd = PantsDecomposition { pants: 1, edges: vec![], stubs: vec![punct(4)] };
        assert!(validate_pants(&pd, &FiniteSurface::orientable(0, 3, 0))
            .contains(&PantsViolation::LegCount { pants: 0, legs: 4 }));
    }

    #[test]
    fn reversing_loop_is_nonorientable() {
        let pd = PantsDecomposition {
            pants: 1,
            edges: vec![PantsEdge::TwoSided { id: 0, a: 0, b: 0, reversing: true }],
            stubs: vec![punct(1)],
        };
        assert!(!pd.is_orientable_model());
        assert!(validate_pants(&pd, &FiniteSurface::nonorientable(2, 1, 0)).is_empty());
    }

    #[test]
    fn gauge_fixable_reversals_are_orientable() {
        // flipping pants 1 turns both gluings non-reversing
        let pd = PantsDecomposition {
            pants: 2,
            edges: vec![
                PantsEdge::TwoSided { id: 0, a: 0, b: 1, reversing: true },
                PantsEdge::TwoSided { id: 1, a: 0, b: 1, reversing: true },
            ],
            stubs: vec![punct(1), punct(1)],
        };
        assert!(pd.is_orientable_model());
        let pd2 = PantsDecomposition {
            edges: vec![
                PantsEdge::TwoSided { id: 0, a: 0, b: 1, reversing: true },
                PantsEdge::TwoSided { id: 1, a: 0, b: 1, reversing: false },
            ],
            ..pd
        };
        assert!(!pd2.is_orientable_model());
    }

    #[test]
    fn adjacency_of_the_path() {
        let adj = adjacency_graph(&s05_path());
        assert_eq!(adj.vertices, vec![0, 1]);
        assert_eq!(adj.edges, vec![(0, 1)]);
    }

    #[test]
    fn one_sided_and_two_sided_on_a_common_pants_are_adjacent() {
        // N_{2,1}: pants 0 carries both one-sided curves and the bridge
        let pd = PantsDecomposition {
            pants: 2,
            edges: vec![two(0, 0, 1), PantsEdge::OneSided { id: 1, pants: 0 }, PantsEdge::OneSided { id: 2, pants: 0 }],
            stubs: vec![punct(0), punct(2)],
        };
        assert!(validate_pants(&pd, &FiniteSurface::nonorientable(2, 2, 0)).is_empty());
        let adj = adjacency_graph(&pd);
        assert!(adj.edges.contains(&(0, 1)));
        assert!(!is_separating(1, &pd).unwrap());
        assert!(is_separating(0, &pd).unwrap());
        assert!(is_outer(0, &pd).unwrap());
    }

    #[test]
    fn separation_and_outer_curves() {
        let pd = s05_path();
        assert!(is_separating(0, &pd).unwrap());
        assert!(is_outer(0, &pd).unwrap());
        assert!(is_outer(1, &pd).unwrap());
        assert_eq!(is_separating(7, &pd), Err(PantsError::UnknownCurve(7)));

        let looped = PantsDecomposition {
            pants: 2,
            edges: vec![two(0, 0, 0), two(1, 0, 1)],
            stubs: vec![punct(0), punct(2)],
        };
        assert!(!is_separating(0, &looped).unwrap());
        assert_eq!(is_outer(0, &looped), Err(PantsError::NotSeparating(0)));
        assert!(is_outer(1, &looped).unwrap());

        let with_boundary = PantsDecomposition {
            pants: 2,
            edges: vec![two(0, 0, 1)],
            stubs: vec![Stub { punctures: 1, boundary: 1 }, punct(2)],
        };
        // the other side is a twice-punctured disk
        assert!(is_outer(0, &with_boundary).unwrap());
        let both_mixed = PantsDecomposition {
            pants: 2,
            edges: vec![two(0, 0, 1)],
            stubs: vec![Stub { punctures: 1, boundary: 1 }, Stub { punctures: 1, boundary: 1 }],
        };
        assert!(!is_outer(0, &both_mixed).unwrap());
    }

    #[test]
    fn cut_vertices_of_a_longer_path() {
        // S_{0,6}: path of four pants; the middle curve is non-outer
        let pd = PantsDecomposition {
            pants: 4,
            edges: vec![two(0, 0, 1), two(1, 1, 2), two(2, 2, 3)],
            stubs: vec![punct(2), punct(1), punct(1), punct(2)],
        };
        let report = cut_vertex_check(&pd);
        assert_eq!(report.cut_vertices, vec![1]);
        assert_eq!(report.non_outer_separating, vec![1]);
        assert!(report.coincide);
        assert!(cut_vertex_check(&s05_path()).coincide);
    }

    #[test]
    fn boundary_stubs_break_the_cut_vertex_characterization() {
        // the bridge cuts off a pants with a puncture and a boundary leg:
        // separating and not outer, yet a leaf of the adjacency graph
        let pd = PantsDecomposition {
            pants: 3,
            edges: vec![two(0, 0, 1), two(1, 1, 2)],
            stubs: vec![Stub { punctures: 1, boundary: 1 }, punct(1), punct(2)],
        };
        assert!(validate_pants(&pd, &FiniteSurface::orientable(0, 4, 1)).is_empty());
        let report = cut_vertex_check(&pd);
        assert!(report.cut_vertices.is_empty());
        assert_eq!(report.non_outer_separating, vec![0]);
        assert!(!report.coincide);
    }
}
