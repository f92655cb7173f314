use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Add;

use serde::{Serialize, Serializer};

use super::{EndExpr, EndLabel, EndSpaceError};

/// A cardinality that is either a natural number or countably infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Multiplicity {
    Finite(u64),
    Infinite,
}

impl Multiplicity {
    pub fn is_zero(self) -> bool {
        self == Multiplicity::Finite(0)
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Multiplicity::Finite(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Multiplicity::Finite(n) => Some(n),
            Multiplicity::Infinite => None,
        }
    }
}

impl Add for Multiplicity {
    type Output = Multiplicity;

    fn add(self, rhs: Multiplicity) -> Multiplicity {
        match (self, rhs) {
            (Multiplicity::Finite(a), Multiplicity::Finite(b)) => Multiplicity::Finite(a + b),
            _ => Multiplicity::Infinite,
        }
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplicity::Finite(n) => write!(f, "{n}"),
            Multiplicity::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Multiplicity {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Multiplicity::Finite(n) => serializer.serialize_u64(*n),
            Multiplicity::Infinite => serializer.serialize_str("inf"),
        }
    }
}

/// Germ type of a point: its label and the germ types of the points that
/// accumulate at it. In a scattered space of finite rank this determines a
/// neighbourhood of the point up to label-preserving homeomorphism.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct PointType {
    rank: u32,
    label: EndLabel,
    accumulating: BTreeSet<PointType>,
}

#[derive(Default)]
struct Profile {
    points: BTreeMap<PointType, Multiplicity>,
    cantor: BTreeSet<EndLabel>,
}

impl Profile {
    fn absorb(&mut self, other: Profile) {
        for (t, m) in other.points {
            let slot = self.points.entry(t).or_insert(Multiplicity::Finite(0));
            *slot = *slot + m;
        }
        self.cantor.extend(other.cantor);
    }
}

fn profile(e: &EndExpr, depth: usize, max_depth: usize) -> Result<Profile, EndSpaceError> {
    match e {
        EndExpr::Pt(l) => {
            let mut p = Profile::default();
            p.points.insert(PointType { rank: 0, label: *l, accumulating: BTreeSet::new() }, Multiplicity::Finite(1));
            Ok(p)
        }
        EndExpr::Cantor(l) => {
            if depth > 0 {
                return Err(EndSpaceError::FragmentExceeded(format!(
                    "cantor({l}) inside a seq body has no finite-rank canonical form"
                )));
            }
            let mut p = Profile::default();
            p.cantor.insert(*l);
            Ok(p)
        }
        EndExpr::Union(parts) => {
            if parts.is_empty() {
                return Err(EndSpaceError::FragmentExceeded("empty union".into()));
            }
            let mut acc = Profile::default();
            for part in parts {
                acc.absorb(profile(part, depth, max_depth)?);
            }
            Ok(acc)
        }
        EndExpr::Seq { body, limit } => {
            if depth >= max_depth {
                return Err(EndSpaceError::FragmentExceeded(format!(
                    "seq nesting deeper than the configured bound {max_depth}"
                )));
            }
            let inner = profile(body, depth + 1, max_depth)?;
            debug_assert!(inner.cantor.is_empty());
            let rank = 1 + inner.points.keys().map(|t| t.rank).max().unwrap_or(0);
            let accumulating: BTreeSet<PointType> = inner.points.keys().cloned().collect();
            let mut points: BTreeMap<PointType, Multiplicity> =
                inner.points.into_keys().map(|t| (t, Multiplicity::Infinite)).collect();
            points.insert(PointType { rank, label: *limit, accumulating }, Multiplicity::Finite(1));
            Ok(Profile { points, cantor: BTreeSet::new() })
        }
    }
}

/// One class of points of the countable part.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountableClass {
    /// Cantor–Bendixson rank.
    pub rank: u32,
    pub label: EndLabel,
    pub count: Multiplicity,
    /// Indices of the classes accumulating at every point of this class.
    pub accumulating: Vec<usize>,
}

/// Complete invariant of a fragment end space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalForm {
    pub countable_part: Vec<CountableClass>,
    pub cantor_part: Vec<EndLabel>,
}

pub(super) fn canonical_form(e: &EndExpr, max_depth: usize) -> Result<CanonicalForm, EndSpaceError> {
    let prof = profile(e, 0, max_depth)?;
    let index: BTreeMap<&PointType, usize> = prof.points.keys().enumerate().map(|(i, t)| (t, i)).collect();
    let countable_part = prof
        .points
        .iter()
        .map(|(t, m)| CountableClass {
            rank: t.rank,
            label: t.label,
            count: *m,
            accumulating: t.accumulating.iter().map(|s| index[s]).collect(),
        })
        .collect();
    Ok(CanonicalForm { countable_part, cantor_part: prof.cantor.into_iter().collect() })
}

impl CanonicalForm {
    /// Point counts per (rank, label). Not a complete invariant on its own.
    pub fn rank_profile(&self) -> Vec<(u32, EndLabel, Multiplicity)> {
        let mut acc: BTreeMap<(u32, EndLabel), Multiplicity> = BTreeMap::new();
        for c in &self.countable_part {
            let slot = acc.entry((c.rank, c.label)).or_insert(Multiplicity::Finite(0));
            *slot = *slot + c.count;
        }
        acc.into_iter().map(|((r, l), m)| (r, l, m)).collect()
    }

    /// Cantor–Bendixson rank of the countable part (0 if empty).
    pub fn max_rank(&self) -> u32 {
        self.countable_part.iter().map(|c| c.rank).max().unwrap_or(0)
    }

    /// A representative expression of this form.
    pub fn to_expr(&self) -> EndExpr {
        let mut parts: Vec<EndExpr> = Vec::new();
        for (i, class) in self.countable_part.iter().enumerate() {
            if let Multiplicity::Finite(n) = class.count {
                for _ in 0..n {
                    parts.push(self.model(i));
                }
            }
        }
        parts.extend(self.cantor_part.iter().map(|l| EndExpr::Cantor(*l)));
        if parts.len() == 1 {
            parts.pop().expect("one part")
        } else {
            EndExpr::Union(parts)
        }
    }

    fn model(&self, i: usize) -> EndExpr {
        let class = &self.countable_part[i];
        if class.accumulating.is_empty() {
            return EndExpr::Pt(class.label);
        }
        let mut body: Vec<EndExpr> = class.accumulating.iter().map(|&j| self.model(j)).collect();
        let body = if body.len() == 1 { body.pop().expect("one part") } else { EndExpr::Union(body) };
        EndExpr::seq(body, class.label)
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, c) in self.countable_part.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({},{},{})", c.rank, c.label, c.count)?;
        }
        f.write_str("]")?;
        if !self.cantor_part.is_empty() {
            let labels: Vec<&str> = self.cantor_part.iter().map(|l| l.as_str()).collect();
            write!(f, " + cantor{{{}}}", labels.join(","))?;
        }
        Ok(())
    }
}
