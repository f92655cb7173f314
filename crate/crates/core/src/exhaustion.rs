//! Principal exhaustions built from the Richards model, and the curve
//! system used by the Alexander method for infinite-type surfaces.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::endspace::{self, EndExpr, EndLabel, EndSpaceError, Multiplicity, Verdict};
use crate::surface::{validate_surface, FiniteSurface, Genus, OrientClass, SurfaceSpec, SurfaceViolation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CurveId(pub u32);

impl fmt::Display for CurveId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

impl Serialize for CurveId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A component of `Σ_j \ Σ_{j-1}` (or `Σ_0` itself).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PieceSignature {
    pub surface: FiniteSurface,
    /// Boundary shared with the previous level.
    pub inherited_boundary: Vec<CurveId>,
    pub new_boundary: Vec<CurveId>,
}

/// Complement component of `Σ_j` cut off by `curve`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Complement {
    pub curve: CurveId,
    pub spec: SurfaceSpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExhaustionLevel {
    pub index: usize,
    pub pieces: Vec<PieceSignature>,
    /// `B_j`: boundary curves of `Σ_j`.
    pub curves: Vec<CurveId>,
    pub complements: Vec<Complement>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrincipalExhaustion {
    pub surface: SurfaceSpec,
    pub levels: Vec<ExhaustionLevel>,
}

impl PrincipalExhaustion {
    /// All curves of `B`, level by level.
    pub fn multicurve(&self) -> Vec<CurveId> {
        self.levels.iter().flat_map(|l| l.curves.iter().copied()).collect()
    }

    fn complement_of(&self, curve: CurveId) -> Option<&Complement> {
        self.levels.iter().flat_map(|l| l.complements.iter()).find(|c| c.curve == curve)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExhaustionError {
    #[error("depth must be positive")]
    DepthZero,
    #[error("surface is of finite type")]
    NotInfiniteType,
    #[error("exhaustions are built for surfaces without boundary (b = {0})")]
    BoundaryPresent(u32),
    #[error("invalid surface: {0}")]
    InvalidSurface(String),
    #[error(transparent)]
    Ends(#[from] EndSpaceError),
}

enum Part {
    Punctures(u64),
    Region(EndExpr),
}

/// Flatten nested unions and unwrap singletons at the top.
fn tidy(e: &EndExpr) -> EndExpr {
    match e {
        EndExpr::Union(parts) => {
            let mut flat = Vec::new();
            for p in parts {
                match tidy(p) {
                    EndExpr::Union(inner) => flat.extend(inner),
                    other => flat.push(other),
                }
            }
            if flat.len() == 1 {
                flat.pop().expect("one part")
            } else {
                EndExpr::Union(flat)
            }
        }
        other => other.clone(),
    }
}

fn classify(e: &EndExpr) -> Part {
    let labels = e.labels();
    if !labels.has_genus() {
        if let Multiplicity::Finite(n) = e.count_ends() {
            return Part::Punctures(n);
        }
    }
    Part::Region(tidy(e))
}

fn top_parts(e: &EndExpr) -> Vec<EndExpr> {
    match tidy(e) {
        EndExpr::Union(parts) => parts,
        other => vec![other],
    }
}

/// One refinement step of an infinite-type clopen set of ends: the
/// punctures and infinite-type pieces a compact subsurface cuts it into.
fn split(region: &EndExpr) -> (u64, Vec<EndExpr>) {
    let mut punctures = 0;
    let mut children = Vec::new();
    let mut take = |e: &EndExpr| match classify(e) {
        Part::Punctures(n) => punctures += n,
        Part::Region(r) => children.push(r),
    };
    match tidy(region) {
        EndExpr::Pt(l) => {
            debug_assert!(l.is_genus());
            take(&EndExpr::Pt(l));
        }
        EndExpr::Cantor(l) => {
            take(&EndExpr::Cantor(l));
            take(&EndExpr::Cantor(l));
        }
        EndExpr::Union(parts) => parts.iter().for_each(&mut take),
        seq @ EndExpr::Seq { .. } => {
            let EndExpr::Seq { body, .. } = &seq else { unreachable!() };
            top_parts(body).iter().for_each(&mut take);
            take(&seq);
        }
    }
    (punctures, children)
}

fn ceil_div(a: i64, b: i64) -> i64 {
    (a + b - 1).div_euclid(b)
}

/// Minimal genus meeting the principal-exhaustion bound, respecting a
/// required parity (`Some(0)` even, `Some(1)` odd) and a floor.
fn padded_genus(orientable: bool, nb: i64, parity: Option<u32>, floor: u32) -> u32 {
    let need = if orientable { ceil_div(8 - nb, 3).max(0) } else { (8 - nb).max(1) };
    let mut g = u32::try_from(need).expect("non-negative").max(floor);
    if let Some(p) = parity {
        if g % 2 != p {
            g += 1;
        }
    }
    g
}

fn complement_spec(region: &EndExpr) -> SurfaceSpec {
    let labels = region.labels();
    let genus = if labels.has_genus() { Genus::Infinite } else { Genus::Finite(0) };
    let orient = if labels.contains(EndLabel::Nonorientable) {
        OrientClass::InfinitelyNonorientable
    } else {
        OrientClass::Orientable
    };
    SurfaceSpec::new(genus, orient, 1, region.clone())
}

struct Builder {
    next: u32,
}

impl Builder {
    fn fresh(&mut self) -> CurveId {
        let id = CurveId(self.next);
        self.next += 1;
        id
    }

    /// Piece living in `region`; returns it with the regions of its new
    /// boundary curves.
    fn piece(
        &mut self,
        region: &EndExpr,
        inherited: Option<CurveId>,
        spec: &SurfaceSpec,
    ) -> (PieceSignature, Vec<(CurveId, EndExpr)>) {
        let labels = region.labels();
        let level0 = inherited.is_none();
        let parity = match spec.orient {
            OrientClass::EvenNonorientable if level0 => Some(0),
            OrientClass::OddNonorientable if level0 => Some(1),
            _ => None,
        };
        let orientable = !labels.contains(EndLabel::Nonorientable) && parity.is_none();
        let (mut punctures, mut children) = split(region);
        let inherited_count = i64::from(u8::from(!level0));

        let genus = if labels.has_genus() {
            let nb = punctures as i64 + children.len() as i64 + inherited_count;
            let floor = if parity == Some(0) { 2 } else { 0 };
            padded_genus(orientable, nb, parity, floor)
        } else {
            // Planar region, or all of a finite-genus surface: genus is
            // fixed, so merge refinement steps until the bound holds.
            let g = match spec.genus {
                Genus::Finite(k) if level0 => k,
                _ => 0,
            };
            let bound_ok = |n: u64, b: usize| {
                FiniteSurface { orientable, genus: g, punctures: n as u32, boundary: b as u32 + inherited_count as u32 }
                    .bound_complexity()
                    >= 5
            };
            while !bound_ok(punctures, children.len()) {
                let first = children.remove(0);
                let (n, more) = split(&first);
                punctures += n;
                children.extend(more);
            }
            g
        };

        let tagged: Vec<(CurveId, EndExpr)> = children.into_iter().map(|r| (self.fresh(), r)).collect();
        let surface = FiniteSurface {
            orientable,
            genus,
            punctures: u32::try_from(punctures).expect("puncture count fits"),
            boundary: u32::try_from(tagged.len()).expect("boundary count fits") + inherited_count as u32,
        };
        let piece = PieceSignature {
            surface,
            inherited_boundary: inherited.into_iter().collect(),
            new_boundary: tagged.iter().map(|(c, _)| *c).collect(),
        };
        (piece, tagged)
    }
}

/// A `depth`-level principal exhaustion of `s`.
pub fn build_exhaustion(s: &SurfaceSpec, depth: usize) -> Result<PrincipalExhaustion, ExhaustionError> {
    if depth == 0 {
        return Err(ExhaustionError::DepthZero);
    }
    if s.boundary > 0 {
        return Err(ExhaustionError::BoundaryPresent(s.boundary));
    }
    let violations = validate_surface(s);
    if !violations.is_empty() {
        let text: Vec<String> = violations.iter().map(ToString::to_string).collect();
        return Err(ExhaustionError::InvalidSurface(text.join("; ")));
    }
    if !s.is_infinite_type() {
        return Err(ExhaustionError::NotInfiniteType);
    }
    endspace::normalize(&s.ends)?;

    let mut builder = Builder { next: 0 };
    let mut levels = Vec::with_capacity(depth);
    let mut frontier: Vec<(Option<CurveId>, EndExpr)> = vec![(None, s.ends.clone())];
    for index in 0..depth {
        let mut pieces = Vec::new();
        let mut next = Vec::new();
        for (inherited, region) in &frontier {
            let (piece, children) = builder.piece(region, *inherited, s);
            pieces.push(piece);
            next.extend(children);
        }
        let complements =
            next.iter().map(|(curve, region)| Complement { curve: *curve, spec: complement_spec(region) }).collect();
        levels.push(ExhaustionLevel {
            index,
            pieces,
            curves: next.iter().map(|(c, _)| *c).collect(),
            complements,
        });
        frontier = next.into_iter().map(|(c, r)| (Some(c), r)).collect();
    }
    Ok(PrincipalExhaustion { surface: s.clone(), levels })
}

/// Whether a piece meets the complexity bound of a principal exhaustion.
pub fn piece_meets_bound(f: &FiniteSurface) -> bool {
    if f.orientable {
        f.bound_complexity() >= 5
    } else {
        f.bound_complexity() >= 8
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExhaustionViolation {
    /// Which of the five defining conditions fails (1-based).
    pub condition: u8,
    pub level: usize,
    pub piece: Option<usize>,
    pub detail: String,
}

impl fmt::Display for ExhaustionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "condition {} at level {}", self.condition, self.level)?;
        if let Some(p) = self.piece {
            write!(f, " piece {p}")?;
        }
        write!(f, ": {}", self.detail)
    }
}

/// Check the five defining conditions of a principal exhaustion.
pub fn validate_exhaustion(pe: &PrincipalExhaustion) -> Vec<ExhaustionViolation> {
    let mut out = Vec::new();
    let mut flag = |condition: u8, level: usize, piece: Option<usize>, detail: String| {
        out.push(ExhaustionViolation { condition, level, piece, detail })
    };
    if pe.levels.is_empty() {
        flag(1, 0, None, "no levels".into());
        return out;
    }

    // (1) pieces are essential finite-type surfaces, correctly glued
    for (j, level) in pe.levels.iter().enumerate() {
        if j == 0 && level.pieces.len() != 1 {
            flag(1, 0, None, format!("Σ_0 must be connected, found {} pieces", level.pieces.len()));
        }
        for (k, p) in level.pieces.iter().enumerate() {
            let f = &p.surface;
            if !f.is_well_formed() {
                flag(1, j, Some(k), format!("{f} has no crosscaps"));
            }
            if f.euler_characteristic() >= 0 {
                flag(1, j, Some(k), format!("{f} has χ = {} ≥ 0", f.euler_characteristic()));
            }
            let listed = p.inherited_boundary.len() + p.new_boundary.len();
            if listed != f.boundary as usize {
                flag(1, j, Some(k), format!("{f} lists {listed} boundary curves"));
            }
            let expected = usize::from(j > 0);
            if p.inherited_boundary.len() != expected {
                flag(1, j, Some(k), format!("{} inherited boundary curves", p.inherited_boundary.len()));
            }
        }
    }

    // (2) complements are of infinite type
    for (j, level) in pe.levels.iter().enumerate() {
        for c in &level.complements {
            if !c.spec.is_infinite_type() {
                flag(2, j, None, format!("complement beyond {} is of finite type", c.curve));
            }
            for v in validate_surface(&c.spec) {
                if !matches!(v, SurfaceViolation::BoundaryOnInfiniteType { .. }) {
                    flag(2, j, None, format!("complement beyond {}: {v}", c.curve));
                }
            }
        }
    }

    // (3) complexity bounds
    for (j, level) in pe.levels.iter().enumerate() {
        for (k, p) in level.pieces.iter().enumerate() {
            if !piece_meets_bound(&p.surface) {
                let bound = if p.surface.orientable { "3g-3+n+b ≥ 5" } else { "g+n+b ≥ 8" };
                flag(3, j, Some(k), format!("{} violates {bound}", p.surface));
            }
        }
    }

    // (4) B is a forest of separating curves, one level per curve
    let mut seen: BTreeSet<CurveId> = BTreeSet::new();
    for (j, level) in pe.levels.iter().enumerate() {
        let declared: BTreeSet<CurveId> = level.curves.iter().copied().collect();
        let new: BTreeSet<CurveId> = level.pieces.iter().flat_map(|p| p.new_boundary.iter().copied()).collect();
        let complements: BTreeSet<CurveId> = level.complements.iter().map(|c| c.curve).collect();
        if declared.len() != level.curves.len() {
            flag(4, j, None, "B_j lists a curve twice".into());
        }
        if declared != new {
            flag(4, j, None, "B_j differs from the new boundary of the pieces".into());
        }
        if declared != complements {
            flag(4, j, None, "complements do not match B_j".into());
        }
        for c in &declared {
            if !seen.insert(*c) {
                flag(4, j, None, format!("{c} appears at two levels"));
            }
        }
        if j + 1 < pe.levels.len() {
            let mut inherited: BTreeMap<CurveId, usize> = BTreeMap::new();
            for p in &pe.levels[j + 1].pieces {
                for c in &p.inherited_boundary {
                    *inherited.entry(*c).or_default() += 1;
                }
            }
            for c in &declared {
                match inherited.get(c) {
                    Some(1) => {}
                    Some(m) => flag(4, j, None, format!("{c} bounds {m} pieces of the next level")),
                    None => flag(4, j, None, format!("{c} bounds no piece of the next level")),
                }
            }
            for c in inherited.keys() {
                if !declared.contains(c) {
                    flag(4, j + 1, None, format!("inherited curve {c} is not in B_{j}"));
                }
            }
        }
    }

    // (5) the complements of each piece exhaust the ends of its region
    for (j, level) in pe.levels.iter().enumerate() {
        for (k, p) in level.pieces.iter().enumerate() {
            let region = if j == 0 {
                Some(&pe.surface.ends)
            } else {
                p.inherited_boundary.first().and_then(|c| pe.complement_of(*c)).map(|c| &c.spec.ends)
            };
            let Some(region) = region else {
                flag(5, j, Some(k), "piece has no enclosing complement".into());
                continue;
            };
            let mut parts: Vec<EndExpr> = Vec::new();
            for c in &p.new_boundary {
                match level.complements.iter().find(|x| x.curve == *c) {
                    Some(x) => parts.push(x.spec.ends.clone()),
                    None => flag(5, j, Some(k), format!("no complement recorded beyond {c}")),
                }
            }
            parts.extend((0..p.surface.punctures).map(|_| EndExpr::pt(EndLabel::Planar)));
            if parts.is_empty() {
                flag(5, j, Some(k), "piece carries no ends".into());
                continue;
            }
            let verdict = endspace::equivalent(region, &EndExpr::Union(parts));
            if verdict != Verdict::Homeomorphic {
                flag(5, j, Some(k), format!("ends beyond the piece are {verdict} from its region {region}"));
            }
        }
    }
    out
}

/// Curves of a finite Alexander system for one piece.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PieceSystem {
    pub level: usize,
    pub piece: usize,
    pub curves: Vec<CurveId>,
    pub arcs: Vec<CurveId>,
}

/// `Γ = B ∪ B* ∪ ⋃ Γ_j` with a declared intersection registry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlexanderSystem {
    pub b: Vec<CurveId>,
    pub bstar: BTreeMap<CurveId, CurveId>,
    pub gamma: Vec<PieceSystem>,
    #[serde(skip)]
    intersections: BTreeMap<(CurveId, CurveId), u32>,
    #[serde(skip)]
    registered: BTreeSet<CurveId>,
    #[serde(skip)]
    next: u32,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlexanderError {
    #[error("invalid exhaustion: {0}")]
    InvalidExhaustion(String),
    #[error("curve {0} is not registered")]
    UnknownCurve(CurveId),
}

/// Number of curves in a pants decomposition of `f`.
fn pants_curve_count(f: &FiniteSurface) -> u32 {
    let nb = f.punctures + f.boundary;
    if f.orientable {
        (3 * f.genus + nb).saturating_sub(3)
    } else {
        // one-sided cores of the crosscaps, then a planar remainder
        f.genus + (f.genus + nb).saturating_sub(3)
    }
}

impl AlexanderSystem {
    fn key(a: CurveId, b: CurveId) -> (CurveId, CurveId) {
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }

    fn fresh(&mut self) -> CurveId {
        let id = CurveId(self.next);
        self.next += 1;
        self.registered.insert(id);
        id
    }

    fn declare(&mut self, a: CurveId, b: CurveId, i: u32) {
        if a != b {
            self.intersections.insert(Self::key(a, b), i);
        }
    }

    /// Declared geometric intersection number; undeclared pairs are disjoint.
    pub fn intersection(&self, a: CurveId, b: CurveId) -> u32 {
        if a == b {
            return 0;
        }
        self.intersections.get(&Self::key(a, b)).copied().unwrap_or(0)
    }

    pub fn is_registered(&self, c: CurveId) -> bool {
        self.registered.contains(&c)
    }

    pub fn curves(&self) -> impl Iterator<Item = CurveId> + '_ {
        self.registered.iter().copied()
    }

    /// A fresh curve disjoint from everything in the system.
    pub fn register_probe(&mut self) -> CurveId {
        self.fresh()
    }

    /// Number of curves of the system meeting `probe`.
    pub fn check_local_finiteness(&self, probe: CurveId) -> Result<usize, AlexanderError> {
        if !self.is_registered(probe) {
            return Err(AlexanderError::UnknownCurve(probe));
        }
        Ok(self
            .intersections
            .iter()
            .filter(|((a, b), i)| **i != 0 && (*a == probe || *b == probe))
            .count())
    }
}

/// Build the curve system of the Alexander method from an exhaustion.
pub fn alexander_system(pe: &PrincipalExhaustion) -> Result<AlexanderSystem, AlexanderError> {
    let violations = validate_exhaustion(pe);
    if let Some(v) = violations.first() {
        return Err(AlexanderError::InvalidExhaustion(v.to_string()));
    }
    let b = pe.multicurve();
    let start = b.iter().map(|c| c.0 + 1).max().unwrap_or(0);
    let mut sys = AlexanderSystem {
        b: b.clone(),
        bstar: BTreeMap::new(),
        gamma: Vec::new(),
        intersections: BTreeMap::new(),
        registered: b.iter().copied().collect(),
        next: start,
    };
    for beta in &b {
        let star = sys.fresh();
        sys.bstar.insert(*beta, star);
        sys.declare(*beta, star, 2);
    }
    for (j, level) in pe.levels.iter().enumerate() {
        for (k, p) in level.pieces.iter().enumerate() {
            let kappa = pants_curve_count(&p.surface);
            let mut curves = Vec::with_capacity(2 * kappa as usize);
            for _ in 0..kappa {
                let pc = sys.fresh();
                let dual = sys.fresh();
                sys.declare(pc, dual, 1);
                curves.push(pc);
                curves.push(dual);
            }
            let mut arcs = Vec::new();
            for beta in p.inherited_boundary.iter().chain(&p.new_boundary) {
                let arc = sys.fresh();
                sys.declare(arc, *beta, 2);
                arcs.push(arc);
            }
            sys.gamma.push(PieceSystem { level: j, piece: k, curves, arcs });
        }
    }
    Ok(sys)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(orient: OrientClass, ends: &str) -> SurfaceSpec {
        let ends: EndExpr = ends.parse().unwrap();
        let genus = if ends.labels().has_genus() { Genus::Infinite } else { Genus::Finite(0) };
        SurfaceSpec::new(genus, orient, 0, ends)
    }

    fn loch_ness() -> SurfaceSpec {
        spec(OrientClass::Orientable, "pt(or)")
    }

    #[test]
    fn loch_ness_levels() {
        let pe = build_exhaustion(&loch_ness(), 3).unwrap();
        assert_eq!(pe.levels.len(), 3);
        assert_eq!(pe.levels[0].pieces[0].surface, FiniteSurface::orientable(3, 0, 1));
        for level in &pe.levels[1..] {
            assert_eq!(level.pieces.len(), 1);
            assert_eq!(level.pieces[0].surface, FiniteSurface::orientable(2, 0, 2));
        }
        for level in &pe.levels {
            assert_eq!(level.complements.len(), 1);
            assert_eq!(level.complements[0].spec.ends, EndExpr::pt(EndLabel::Orientable));
        }
        assert!(validate_exhaustion(&pe).is_empty());
    }

    #[test]
    fn jacobs_ladder_two_curves_per_level() {
        let pe = build_exhaustion(&spec(OrientClass::Orientable, "union(pt(or), pt(or))"), 2).unwrap();
        assert_eq!(pe.levels[1].curves.len(), 2);
        assert_eq!(pe.levels[1].pieces.len(), 2);
        assert!(validate_exhaustion(&pe).is_empty());
    }

    #[test]
    fn finite_type_is_refused() {
        let s = SurfaceSpec::new(Genus::Finite(2), OrientClass::Orientable, 0, "union(pt(planar), pt(planar))".parse().unwrap());
        assert_eq!(build_exhaustion(&s, 2), Err(ExhaustionError::NotInfiniteType));
        assert_eq!(build_exhaustion(&loch_ness(), 0), Err(ExhaustionError::DepthZero));
    }

    #[test]
    fn planar_regions_merge_refinements() {
        let pe = build_exhaustion(&spec(OrientClass::Orientable, "cantor(planar)"), 3).unwrap();
        assert!(validate_exhaustion(&pe).is_empty(), "{:?}", validate_exhaustion(&pe));
        for level in &pe.levels {
            for p in &level.pieces {
                assert_eq!(p.surface.genus, 0);
            }
        }
    }

    #[test]
    fn parity_classes_put_crosscaps_in_the_core() {
        for (orient, parity) in [(OrientClass::EvenNonorientable, 0), (OrientClass::OddNonorientable, 1)] {
            let pe = build_exhaustion(&spec(orient, "union(pt(or), seq(pt(planar); limit=or))"), 3).unwrap();
            let core = pe.levels[0].pieces[0].surface;
            assert!(!core.orientable);
            assert_eq!(core.genus % 2, parity);
            assert!(pe.levels[1..].iter().all(|l| l.pieces.iter().all(|p| p.surface.orientable)));
            assert!(validate_exhaustion(&pe).is_empty());
        }
    }

    #[test]
    fn bound_violations_are_flagged() {
        let mut pe = build_exhaustion(&loch_ness(), 2).unwrap();
        pe.levels[1].pieces[0].surface = FiniteSurface::orientable(1, 0, 2);
        let v = validate_exhaustion(&pe);
        assert!(v.iter().any(|x| x.condition == 3 && x.level == 1));

        let mut pe = build_exhaustion(&spec(OrientClass::InfinitelyNonorientable, "pt(nonor)"), 2).unwrap();
        pe.levels[1].pieces[0].surface = FiniteSurface::nonorientable(3, 1, 2);
        assert!(validate_exhaustion(&pe).iter().any(|x| x.condition == 3));
    }

    #[test]
    fn alexander_system_for_loch_ness() {
        let pe = build_exhaustion(&loch_ness(), 1).unwrap();
        let sys = alexander_system(&pe).unwrap();
        assert_eq!(sys.b.len(), 1);
        assert_eq!(sys.bstar.len(), 1);
        assert_eq!(sys.gamma.len(), 1);
        let beta = sys.b[0];
        let star = sys.bstar[&beta];
        assert_eq!(sys.intersection(beta, star), 2);
        assert_eq!(sys.intersection(star, beta), 2);
        assert_eq!(sys.intersection(beta, beta), 0);
        assert_eq!(sys.check_local_finiteness(star), Ok(1));
    }

    #[test]
    fn empty_exhaustion_is_invalid() {
        let pe = PrincipalExhaustion { surface: loch_ness(), levels: vec![] };
        assert!(matches!(alexander_system(&pe), Err(AlexanderError::InvalidExhaustion(_))));
    }

    #[test]
    fn probes() {
        let pe = build_exhaustion(&spec(OrientClass::Orientable, "union(pt(or), pt(or))"), 2).unwrap();
        let mut sys = alexander_system(&pe).unwrap();
        assert_eq!(sys.b.len(), sys.bstar.len());
        assert_eq!(sys.b.len(), 4);
        let probe = sys.register_probe();
        assert_eq!(sys.check_local_finiteness(probe), Ok(0));
        assert_eq!(sys.check_local_finiteness(CurveId(999_999)), Err(AlexanderError::UnknownCurve(CurveId(999_999))));
        for beta in sys.b.clone() {
            let count = sys.check_local_finiteness(beta).unwrap();
            // its dual plus one arc from each adjacent piece
            assert!((2..=3).contains(&count), "{beta}: {count}");
        }
    }
}
