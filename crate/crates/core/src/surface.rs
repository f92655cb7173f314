//! Richards invariants of infinite-type surfaces and numerology of
//! finite-type ones.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::endspace::{self, EndExpr, EndLabel, Multiplicity, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Genus {
    Finite(u32),
    Infinite,
}

impl Genus {
    pub fn is_infinite(self) -> bool {
        self == Genus::Infinite
    }
}

impl fmt::Display for Genus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Genus::Finite(g) => write!(f, "{g}"),
            Genus::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Genus {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Genus::Finite(g) => serializer.serialize_u32(*g),
            Genus::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Genus {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(u32),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Int(g) => Ok(Genus::Finite(g)),
            Raw::Text(t) if t == "inf" => Ok(Genus::Infinite),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("genus must be an integer or \"inf\", got {t:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrientClass {
    #[serde(rename = "or")]
    Orientable,
    #[serde(rename = "even")]
    EvenNonorientable,
    #[serde(rename = "odd")]
    OddNonorientable,
    #[serde(rename = "infnonor")]
    InfinitelyNonorientable,
}

impl OrientClass {
    pub fn as_str(self) -> &'static str {
        match self {
            OrientClass::Orientable => "or",
            OrientClass::EvenNonorientable => "even",
            OrientClass::OddNonorientable => "odd",
            OrientClass::InfinitelyNonorientable => "infnonor",
        }
    }
}

impl fmt::Display for OrientClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Invariant tuple (genus, orientability class, boundary count, ends).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceSpec {
    pub genus: Genus,
    pub orient: OrientClass,
    pub boundary: u32,
    pub ends: EndExpr,
}

impl SurfaceSpec {
    pub fn new(genus: Genus, orient: OrientClass, boundary: u32, ends: EndExpr) -> Self {
        SurfaceSpec { genus, orient, boundary, ends }
    }

    /// Infinite genus or infinitely many ends.
    pub fn is_infinite_type(&self) -> bool {
        self.genus.is_infinite() || self.ends.count_ends() == Multiplicity::Infinite
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SurfaceViolation {
    FiniteGenusWithGenusEnds,
    InfiniteGenusWithoutGenusEnds,
    NonorientableEndsOutsideInfnonor { orient: OrientClass },
    InfnonorWithoutNonorientableEnds,
    ParityClassWithFiniteGenus,
    EndsNotClosed { detail: String },
    BoundaryOnInfiniteType { boundary: u32 },
}

impl fmt::Display for SurfaceViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceViolation::FiniteGenusWithGenusEnds => f.write_str("finite genus but some end is accumulated by genus"),
            SurfaceViolation::InfiniteGenusWithoutGenusEnds => {
                f.write_str("infinite genus but no end is accumulated by genus")
            }
            SurfaceViolation::NonorientableEndsOutsideInfnonor { orient } => {
                write!(f, "class `{orient}` cannot have nonorientable ends")
            }
            SurfaceViolation::InfnonorWithoutNonorientableEnds => {
                f.write_str("infinitely nonorientable but no end is nonorientable")
            }
            SurfaceViolation::ParityClassWithFiniteGenus => f.write_str("even/odd classes require infinite genus"),
            SurfaceViolation::EndsNotClosed { detail } => write!(f, "ends: {detail}"),
            SurfaceViolation::BoundaryOnInfiniteType { boundary } => {
                write!(f, "infinite-type surface with {boundary} boundary components")
            }
        }
    }
}

/// Every broken invariant of `s`; empty when the tuple describes a surface.
pub fn validate_surface(s: &SurfaceSpec) -> Vec<SurfaceViolation> {
    let mut out = Vec::new();
    let labels = s.ends.labels();
    let has_genus = labels.has_genus();
    let has_nonor = labels.contains(EndLabel::Nonorientable);

    match (s.genus, has_genus) {
        (Genus::Finite(_), true) => out.push(SurfaceViolation::FiniteGenusWithGenusEnds),
        (Genus::Infinite, false) => out.push(SurfaceViolation::InfiniteGenusWithoutGenusEnds),
        _ => {}
    }
    match s.orient {
        OrientClass::InfinitelyNonorientable if !has_nonor => {
            out.push(SurfaceViolation::InfnonorWithoutNonorientableEnds)
        }
        OrientClass::InfinitelyNonorientable => {}
        other => {
            if has_nonor {
                out.push(SurfaceViolation::NonorientableEndsOutsideInfnonor { orient: other });
            }
            if matches!(other, OrientClass::EvenNonorientable | OrientClass::OddNonorientable)
                && !s.genus.is_infinite()
            {
                out.push(SurfaceViolation::ParityClassWithFiniteGenus);
            }
        }
    }
    for v in endspace::validate_closedness(&s.ends) {
        out.push(SurfaceViolation::EndsNotClosed { detail: v.to_string() });
    }
    if s.boundary > 0 && s.is_infinite_type() {
        out.push(SurfaceViolation::BoundaryOnInfiniteType { boundary: s.boundary });
    }
    out
}

/// Compare invariant tuples; only the ends comparison can be inconclusive.
pub fn homeomorphic(s1: &SurfaceSpec, s2: &SurfaceSpec) -> Verdict {
    if s1.genus != s2.genus || s1.orient != s2.orient || s1.boundary != s2.boundary {
        return Verdict::Distinct;
    }
    endspace::equivalent(&s1.ends, &s2.ends)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("surface has no end accumulated by genus")]
    NoGenusEnds,
    #[error("rigidity exclusion list is stated for surfaces without boundary (b = {0})")]
    BoundaryNotSupported(u32),
}

/// The surface obtained by forgetting planar ends and capping boundary.
pub fn forget_planar(s: &SurfaceSpec) -> Result<SurfaceSpec, SurfaceError> {
    let ends = drop_planar(&s.ends).ok_or(SurfaceError::NoGenusEnds)?;
    Ok(SurfaceSpec { genus: s.genus, orient: s.orient, boundary: 0, ends })
}

fn drop_planar(e: &EndExpr) -> Option<EndExpr> {
    match e {
        EndExpr::Pt(l) | EndExpr::Cantor(l) => (*l != EndLabel::Planar).then(|| e.clone()),
        EndExpr::Union(parts) => {
            let mut kept: Vec<EndExpr> = Vec::new();
            for part in parts.iter().filter_map(drop_planar) {
                match part {
                    EndExpr::Union(inner) => kept.extend(inner),
                    other => kept.push(other),
                }
            }
            match kept.len() {
                0 => None,
                1 => kept.pop(),
                _ => Some(EndExpr::Union(kept)),
            }
        }
        EndExpr::Seq { body, limit } => {
            if *limit == EndLabel::Planar {
                return None;
            }
            Some(match drop_planar(body) {
                Some(b) => EndExpr::seq(b, *limit),
                None => EndExpr::Pt(*limit),
            })
        }
    }
}

/// Compact surface with finitely many punctures. For nonorientable
/// surfaces `genus` counts crosscaps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteSurface {
    pub orientable: bool,
    pub genus: u32,
    pub punctures: u32,
    pub boundary: u32,
}

impl FiniteSurface {
    pub fn orientable(genus: u32, punctures: u32, boundary: u32) -> Self {
        FiniteSurface { orientable: true, genus, punctures, boundary }
    }

    pub fn nonorientable(genus: u32, punctures: u32, boundary: u32) -> Self {
        FiniteSurface { orientable: false, genus, punctures, boundary }
    }

    pub fn euler_characteristic(&self) -> i64 {
        let g = i64::from(self.genus);
        let nb = i64::from(self.punctures) + i64::from(self.boundary);
        if self.orientable {
            2 - 2 * g - nb
        } else {
            2 - g - nb
        }
    }

    /// `3g-3+n+b` for orientable surfaces, `g+n+b` otherwise: the
    /// quantities the exhaustion and Alexander-method bounds are stated in.
    pub fn bound_complexity(&self) -> i64 {
        let g = i64::from(self.genus);
        let nb = i64::from(self.punctures) + i64::from(self.boundary);
        if self.orientable {
            3 * g - 3 + nb
        } else {
            g + nb
        }
    }

    /// Nonorientable surfaces need at least one crosscap.
    pub fn is_well_formed(&self) -> bool {
        self.orientable || self.genus >= 1
    }
}

impl fmt::Display for FiniteSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letter = if self.orientable { 'S' } else { 'N' };
        write!(f, "{letter}(g={}, n={}, b={})", self.genus, self.punctures, self.boundary)
    }
}

/// Whether the finite Alexander method applies to `f`.
pub fn alexander_applicable(f: &FiniteSurface) -> bool {
    if f.orientable {
        f.bound_complexity() >= 4
    } else {
        f.bound_complexity() >= 5
    }
}

/// Surfaces whose curve-graph automorphisms are not all induced by
/// homeomorphisms.
pub fn excluded_for_rigidity(f: &FiniteSurface) -> Result<bool, SurfaceError> {
    if f.boundary > 0 {
        return Err(SurfaceError::BoundaryNotSupported(f.boundary));
    }
    const EXCLUDED: [(u32, u32); 6] = [(0, 4), (1, 1), (0, 5), (1, 2), (0, 6), (2, 0)];
    Ok(f.orientable && EXCLUDED.contains(&(f.genus, f.punctures)))
}
