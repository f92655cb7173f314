//! Enumeration of pants decompositions up to decorated-multigraph
//! isomorphism.
//!
//! Underlying multigraphs are grown one vertex at a time (every connected
//! graph has a vertex whose removal keeps it connected) and deduplicated by
//! a canonical code. Decorations are then added: stubs on free legs, and
//! reversing flags on the edges outside a spanning tree, which is exactly
//! one flag assignment per gauge class. Canonical codes come from colour
//! refinement with individualization, minimizing over the remaining gauge
//! freedom at each leaf.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::OnceLock;

use super::{PantsDecomposition, PantsEdge, PantsError, Stub};
use crate::surface::FiniteSurface;

/// Largest `-χ` accepted by [`enumerate_pants_decompositions`].
pub const MAX_ENUMERATED_PANTS: i64 = 8;

const PUNCT: usize = 0;
const BOUND: usize = 1;
const ONESIDED: usize = 2;

/// Labelled decorated multigraph. Edges are `(u, v, reversing)` with `u <= v`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Labeled {
    deco: Vec<[u8; 3]>,
    edges: Vec<(u8, u8, bool)>,
}

impl Labeled {
    fn len(&self) -> usize {
        self.deco.len()
    }

    fn degree(&self) -> Vec<u8> {
        let mut d = vec![0u8; self.len()];
        for &(u, v, _) in &self.edges {
            d[u as usize] += 1;
            d[v as usize] += 1;
        }
        d
    }

    fn from_decomposition(pd: &PantsDecomposition) -> Labeled {
        let mut deco: Vec<[u8; 3]> =
            pd.stubs.iter().map(|s| [s.punctures as u8, s.boundary as u8, 0]).collect();
        deco.resize(pd.pants, [0; 3]);
        let mut edges = Vec::new();
        for e in &pd.edges {
            match *e {
                PantsEdge::TwoSided { a, b, reversing, .. } => {
                    edges.push((a.min(b) as u8, a.max(b) as u8, reversing));
                }
                PantsEdge::OneSided { pants, .. } => deco[pants][ONESIDED] += 1,
            }
        }
        Labeled { deco, edges }
    }

    fn into_decomposition(self) -> PantsDecomposition {
        let mut edges = Vec::new();
        let mut id = 0;
        for (u, v, reversing) in self.edges {
            edges.push(PantsEdge::TwoSided { id, a: u as usize, b: v as usize, reversing });
            id += 1;
        }
        for (p, d) in self.deco.iter().enumerate() {
            for _ in 0..d[ONESIDED] {
                edges.push(PantsEdge::OneSided { id, pants: p });
                id += 1;
            }
        }
        let stubs = self.deco.iter().map(|d| Stub { punctures: d[PUNCT].into(), boundary: d[BOUND].into() }).collect();
        PantsDecomposition { pants: self.deco.len(), edges, stubs }
    }

    /// Code of the relabelled graph: `perm[old] = new`, `gauge[new]`.
    fn encode(&self, perm: &[usize], gauge: &[bool]) -> Vec<u8> {
        let n = self.len();
        let mut out = Vec::with_capacity(1 + 3 * n + 3 * self.edges.len());
        out.push(n as u8);
        let mut deco = vec![[0u8; 3]; n];
        for (old, d) in self.deco.iter().enumerate() {
            deco[perm[old]] = *d;
        }
        for d in deco {
            out.extend(d);
        }
        let mut edges: Vec<(u8, u8, u8)> = self
            .edges
            .iter()
            .map(|&(u, v, f)| {
                let (a, b) = (perm[u as usize], perm[v as usize]);
                let f = if a == b { f } else { f ^ gauge[a] ^ gauge[b] };
                (a.min(b) as u8, a.max(b) as u8, u8::from(f))
            })
            .collect();
        edges.sort_unstable();
        for (a, b, f) in edges {
            out.extend([a, b, f]);
        }
        out
    }

    fn decode(code: &[u8]) -> Labeled {
        let n = code[0] as usize;
        let deco = (0..n).map(|i| [code[1 + 3 * i], code[2 + 3 * i], code[3 + 3 * i]]).collect();
        let edges = code[1 + 3 * n..].chunks(3).map(|c| (c[0], c[1], c[2] == 1)).collect();
        Labeled { deco, edges }
    }

    /// Non-loop edge groups: `(neighbour, multiplicity, gauge-invariant flag count)`.
    fn groups(&self) -> Vec<Vec<(usize, u8, u8)>> {
        let mut by_pair: BTreeMap<(usize, usize), (u8, u8)> = BTreeMap::new();
        for &(u, v, f) in &self.edges {
            if u != v {
                let slot = by_pair.entry((u as usize, v as usize)).or_default();
                slot.0 += 1;
                slot.1 += u8::from(f);
            }
        }
        let mut out = vec![Vec::new(); self.len()];
        for ((u, v), (m, k)) in by_pair {
            let inv = k.min(m - k);
            out[u].push((v, m, inv));
            out[v].push((u, m, inv));
        }
        out
    }
}

fn ranks<T: Ord + Clone>(sigs: &[T]) -> Vec<usize> {
    let sorted: BTreeSet<T> = sigs.iter().cloned().collect();
    let index: BTreeMap<T, usize> = sorted.into_iter().enumerate().map(|(i, s)| (s, i)).collect();
    sigs.iter().map(|s| index[s]).collect()
}

fn refine(groups: &[Vec<(usize, u8, u8)>], colors: &mut Vec<usize>) {
    let mut classes = colors.iter().collect::<BTreeSet<_>>().len();
    loop {
        let sigs: Vec<(usize, Vec<(usize, u8, u8)>)> = (0..colors.len())
            .map(|v| {
                let mut nb: Vec<(usize, u8, u8)> = groups[v].iter().map(|&(w, m, k)| (colors[w], m, k)).collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        *colors = ranks(&sigs);
        let now = colors.iter().collect::<BTreeSet<_>>().len();
        if now == classes {
            return;
        }
        classes = now;
    }
}

struct Canonizer<'a> {
    g: &'a Labeled,
    groups: Vec<Vec<(usize, u8, u8)>>,
    best: Option<Vec<u8>>,
}

impl Canonizer<'_> {
    fn search(&mut self, colors: Vec<usize>) {
        let n = colors.len();
        let mut size = vec![0usize; n];
        for &c in &colors {
            size[c] += 1;
        }
        let Some(target) = (0..n).find(|&c| size[c] > 1) else {
            self.leaf(&colors);
            return;
        };
        for v in (0..n).filter(|&v| colors[v] == target) {
            let mut next: Vec<usize> = colors
                .iter()
                .enumerate()
                .map(|(u, &c)| if c > target || (c == target && u != v) { c + 1 } else { c })
                .collect();
            refine(&self.groups, &mut next);
            self.search(next);
        }
    }

    fn leaf(&mut self, perm: &[usize]) {
        let n = perm.len();
        // relabelled adjacency with raw flags, for the gauge search
        let mut between: BTreeMap<(usize, usize), Vec<bool>> = BTreeMap::new();
        for &(u, v, f) in &self.g.edges {
            let (a, b) = (perm[u as usize], perm[v as usize]);
            if a != b {
                between.entry((a.min(b), a.max(b))).or_default().push(f);
            }
        }
        // BFS tree over the relabelled vertices
        let mut parent = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for w in 0..n {
                if !seen[w] && between.contains_key(&(u.min(w), u.max(w))) {
                    seen[w] = true;
                    parent[w] = u;
                    queue.push_back(w);
                }
            }
        }
        let mut gauge = vec![false; n];
        self.gauge_branch(perm, &between, &parent, &order, 1, &mut gauge);
    }

    /// Fix the gauge top-down so each tree group has no more reversing
    /// than non-reversing edges, branching only on ties.
    fn gauge_branch(
        &mut self,
        perm: &[usize],
        between: &BTreeMap<(usize, usize), Vec<bool>>,
        parent: &[usize],
        order: &[usize],
        at: usize,
        gauge: &mut Vec<bool>,
    ) {
        if at >= order.len() {
            let code = self.g.encode(perm, gauge);
            if self.best.as_ref().is_none_or(|b| code < *b) {
                self.best = Some(code);
            }
            return;
        }
        let c = order[at];
        let p = parent[c];
        let flags = &between[&(p.min(c), p.max(c))];
        let m = flags.len();
        let k = flags.iter().filter(|&&f| f ^ gauge[p]).count();
        let choices: &[bool] = match (2 * k).cmp(&m) {
            std::cmp::Ordering::Less => &[false],
            std::cmp::Ordering::Greater => &[true],
            std::cmp::Ordering::Equal => &[false, true],
        };
        for &choice in choices {
            gauge[c] = choice;
            self.gauge_branch(perm, between, parent, order, at + 1, gauge);
        }
        gauge[c] = false;
    }
}

fn canonical_code(g: &Labeled) -> Vec<u8> {
    if g.len() == 0 {
        return vec![0];
    }
    let degree = g.degree();
    let initial: Vec<([u8; 3], u8, usize, usize)> = (0..g.len())
        .map(|v| {
            let loops: Vec<bool> = g.edges.iter().filter(|e| e.0 as usize == v && e.1 as usize == v).map(|e| e.2).collect();
            (g.deco[v], degree[v], loops.len(), loops.iter().filter(|&&f| f).count())
        })
        .collect();
    let mut colors = ranks(&initial);
    let groups = g.groups();
    refine(&groups, &mut colors);
    let mut canon = Canonizer { g, groups, best: None };
    canon.search(colors);
    canon.best.expect("at least one leaf")
}

/// Isomorphism-invariant code of a decomposition: equal exactly when two
/// decompositions are isomorphic as decorated multigraphs up to gauge.
pub fn canonical_key(pd: &PantsDecomposition) -> Vec<u8> {
    canonical_code(&Labeled::from_decomposition(pd))
}

/// Connected multigraphs with all degrees at most 3 (loops count twice),
/// one per isomorphism class.
fn shapes(p: usize) -> &'static [Labeled] {
    static CACHE: [OnceLock<Vec<Labeled>>; MAX_ENUMERATED_PANTS as usize + 1] =
        [const { OnceLock::new() }; MAX_ENUMERATED_PANTS as usize + 1];
    CACHE[p].get_or_init(|| {
        if p == 1 {
            return vec![
                Labeled { deco: vec![[0; 3]], edges: vec![] },
                Labeled { deco: vec![[0; 3]], edges: vec![(0, 0, false)] },
            ];
        }
        let mut found: BTreeSet<Vec<u8>> = BTreeSet::new();
        for base in shapes(p - 1) {
            let degree = base.degree();
            let cap: Vec<u8> = degree.iter().map(|d| 3 - d).collect();
            let v = (p - 1) as u8;
            for loops in 0..=1u8 {
                for k in 1..=(3 - 2 * loops) {
                    for nbrs in multisets(&cap, k as usize) {
                        let mut g = base.clone();
                        g.deco.push([0; 3]);
                        if loops == 1 {
                            g.edges.push((v, v, false));
                        }
                        for u in nbrs {
                            g.edges.push((u as u8, v, false));
                        }
                        found.insert(canonical_code(&g));
                    }
                }
            }
        }
        found.iter().map(|c| Labeled::decode(c)).collect()
    })
}

/// Non-decreasing index sequences of length `k` respecting capacities.
fn multisets(cap: &[u8], k: usize) -> Vec<Vec<usize>> {
    fn go(cap: &mut [u8], k: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in from..cap.len() {
            if cap[i] > 0 {
                cap[i] -= 1;
                cur.push(i);
                go(cap, k, i, cur, out);
                cur.pop();
                cap[i] += 1;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut cap.to_vec(), k, 0, &mut Vec::new(), &mut out);
    out
}

/// Ways to fill each vertex's free legs with stubs of the three kinds,
/// using exactly `totals` of each.
fn fillings(free: &[u8], totals: [u8; 3]) -> Vec<Vec<[u8; 3]>> {
    fn go(free: &[u8], at: usize, left: [u8; 3], cur: &mut Vec<[u8; 3]>, out: &mut Vec<Vec<[u8; 3]>>) {
        if at == free.len() {
            if left == [0; 3] {
                out.push(cur.clone());
            }
            return;
        }
        let f = free[at];
        for a in 0..=f.min(left[0]) {
            for b in 0..=(f - a).min(left[1]) {
                let c = f - a - b;
                if c > left[2] {
                    continue;
                }
                cur.push([a, b, c]);
                go(free, at + 1, [left[0] - a, left[1] - b, left[2] - c], cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(free, 0, totals, &mut Vec::new(), &mut out);
    out
}

/// Edges not in the BFS spanning tree of a shape (loops included).
fn non_tree_edges(g: &Labeled) -> Vec<usize> {
    let n = g.len();
    let mut seen = vec![false; n];
    let mut tree = BTreeSet::new();
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(u) = queue.pop_front() {
        for (i, &(a, b, _)) in g.edges.iter().enumerate() {
            let (a, b) = (a as usize, b as usize);
            let w = if a == u { b } else if b == u { a } else { continue };
            if !seen[w] {
                seen[w] = true;
                tree.insert(i);
                queue.push_back(w);
            }
        }
    }
    (0..g.edges.len()).filter(|i| !tree.contains(i)).collect()
}

/// All pants decompositions of `f` up to isomorphism, in a fixed order,
/// truncated to `max_count`.
pub fn enumerate_pants_decompositions(
    f: &FiniteSurface,
    max_count: usize,
) -> Result<Vec<PantsDecomposition>, PantsError> {
    let p = -f.euler_characteristic();
    if p > MAX_ENUMERATED_PANTS {
        return Err(PantsError::TooLarge(p));
    }
    if p <= 0 || !f.is_well_formed() {
        return Ok(Vec::new());
    }
    let (n, b) = (f.punctures, f.boundary);
    let mut codes: BTreeSet<Vec<u8>> = BTreeSet::new();
    for shape in shapes(p as usize) {
        let free: Vec<u8> = shape.degree().iter().map(|d| 3 - d).collect();
        let total_free: u32 = free.iter().map(|&x| u32::from(x)).sum();
        if total_free < n + b || (f.orientable && total_free != n + b) {
            continue;
        }
        let onesided = (total_free - n - b) as u8;
        let cycles = non_tree_edges(shape);
        let masks: u32 = if f.orientable { 1 } else { 1 << cycles.len() };
        for deco in fillings(&free, [n as u8, b as u8, onesided]) {
            for mask in 0..masks {
                if !f.orientable && onesided == 0 && mask == 0 {
                    continue;
                }
                let mut g = Labeled { deco: deco.clone(), edges: shape.edges.clone() };
                for (bit, &e) in cycles.iter().enumerate() {
                    g.edges[e].2 = mask & (1 << bit) != 0;
                }
                codes.insert(canonical_code(&g));
            }
        }
    }
    Ok(codes.iter().take(max_count).map(|c| Labeled::decode(c).into_decomposition()).collect())
}

#[cfg(test)]
mod tests {
    use super::super::validate_pants;
    use super::*;

    #[test]
    fn small_shape_counts() {
        assert_eq!(shapes(1).len(), 2);
        // two vertices: single, double, triple edge; single edge with one
        // or two loops
        assert_eq!(shapes(2).len(), 5);
    }

    #[test]
    fn four_punctured_sphere() {
        let all = enumerate_pants_decompositions(&FiniteSurface::orientable(0, 4, 0), 100).unwrap();
        assert_eq!(all.len(), 1);
        let pd = &all[0];
        assert_eq!(pd.pants, 2);
        assert_eq!(pd.edges.len(), 1);
        assert_eq!(pd.stubs, vec![Stub { punctures: 2, boundary: 0 }; 2]);
    }

    #[test]
    fn once_punctured_torus() {
        let all = enumerate_pants_decompositions(&FiniteSurface::orientable(1, 1, 0), 100).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].edges, vec![PantsEdge::TwoSided { id: 0, a: 0, b: 0, reversing: false }]);
    }

    #[test]
    fn twice_punctured_projective_plane() {
        let f = FiniteSurface::nonorientable(1, 2, 0);
        let all = enumerate_pants_decompositions(&f, 100).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].edges, vec![PantsEdge::OneSided { id: 0, pants: 0 }]);
        assert_eq!(all[0].stubs, vec![Stub { punctures: 2, boundary: 0 }]);
    }

    #[test]
    fn every_enumerated_decomposition_validates() {
        for f in [
            FiniteSurface::orientable(0, 6, 0),
            FiniteSurface::orientable(2, 0, 0),
            FiniteSurface::orientable(1, 2, 1),
            FiniteSurface::nonorientable(3, 1, 0),
            FiniteSurface::nonorientable(2, 1, 1),
        ] {
            let all = enumerate_pants_decompositions(&f, usize::MAX).unwrap();
            assert!(!all.is_empty(), "{f}");
            let keys: BTreeSet<Vec<u8>> = all.iter().map(canonical_key).collect();
            assert_eq!(keys.len(), all.len(), "{f}: duplicates");
            for pd in &all {
                assert!(validate_pants(pd, &f).is_empty(), "{f}: {pd:?}");
            }
        }
    }

    #[test]
    fn known_counts() {
        // S_{0,5}: only the path with stubs 2,1,2
        assert_eq!(enumerate_pants_decompositions(&FiniteSurface::orientable(0, 5, 0), 100).unwrap().len(), 1);
        // S_{0,6}: the path and the star
        assert_eq!(enumerate_pants_decompositions(&FiniteSurface::orientable(0, 6, 0), 100).unwrap().len(), 2);
        // closed genus 2: theta graph and the dumbbell
        assert_eq!(enumerate_pants_decompositions(&FiniteSurface::orientable(2, 0, 0), 100).unwrap().len(), 2);
    }

    #[test]
    fn truncation_and_bounds() {
        let f = FiniteSurface::orientable(0, 7, 0);
        assert_eq!(enumerate_pants_decompositions(&f, 1).unwrap().len(), 1);
        assert_eq!(
            enumerate_pants_decompositions(&FiniteSurface::orientable(3, 5, 0), 1),
            Err(PantsError::TooLarge(9))
        );
        assert!(enumerate_pants_decompositions(&FiniteSurface::orientable(0, 3, 0), 5).unwrap().len() == 1);
    }

    #[test]
    fn key_ignores_labels_and_gauge() {
        let a = PantsDecomposition {
            pants: 2,
            edges: vec![
                PantsEdge::TwoSided { id: 0, a: 0, b: 1, reversing: true },
                PantsEdge::TwoSided { id: 1, a: 0, b: 1, reversing: false },
            ],
            stubs: vec![Stub { punctures: 1, boundary: 0 }, Stub { punctures: 0, boundary: 1 }],
        };
        let b = PantsDecomposition {
            pants: 2,
            edges: vec![
                PantsEdge::TwoSided { id: 5, a: 1, b: 0, reversing: false },
                PantsEdge::TwoSided { id: 9, a: 0, b: 1, reversing: true },
            ],
            stubs: vec![Stub { punctures: 0, boundary: 1 }, Stub { punctures: 1, boundary: 0 }],
        };
        assert_eq!(canonical_key(&a), canonical_key(&b));
        let c = PantsDecomposition {
            edges: vec![
                PantsEdge::TwoSided { id: 0, a: 0, b: 1, reversing: false },
                PantsEdge::TwoSided { id: 1, a: 0, b: 1, reversing: false },
            ],
            ..a.clone()
        };
        assert_ne!(canonical_key(&a), canonical_key(&c));
    }
}
