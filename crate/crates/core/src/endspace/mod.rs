//! End spaces of infinite-type surfaces as finite symbolic expressions.
//!
//! An [`EndExpr`] denotes a compact, totally disconnected space together with
//! a labelling of its points as planar, orientable-genus or
//! nonorientable-genus ends. The labelling encodes the nested triple
//! `End ⊇ End_g ⊇ End_n`; the closedness rule on [`EndExpr::Seq`] limits is
//! exactly the requirement that `End_g` and `End_n` be closed.
//!
//! Decisions about homeomorphism type are made through [`normalize`], which
//! is complete on the finite-rank fragment: countable parts of finite
//! Cantor–Bendixson rank plus finitely many uniformly labelled Cantor blocks
//! that do not sit inside a convergent sequence.

mod canonical;
mod parse;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use canonical::{CanonicalForm, CountableClass, Multiplicity};
pub use parse::ParseError;

/// Default bound on nested `seq` depth accepted by [`normalize`].
pub const DEFAULT_MAX_SEQ_DEPTH: usize = 32;

/// The kind of an end. The derived order `Planar < Orientable < Nonorientable`
/// is the domination order used for closedness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EndLabel {
    #[serde(rename = "planar")]
    Planar,
    #[serde(rename = "or")]
    Orientable,
    #[serde(rename = "nonor")]
    Nonorientable,
}

impl EndLabel {
    pub const ALL: [EndLabel; 3] = [EndLabel::Planar, EndLabel::Orientable, EndLabel::Nonorientable];

    /// Accumulated by genus (orientable or not).
    pub fn is_genus(self) -> bool {
        self != EndLabel::Planar
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EndLabel::Planar => "planar",
            EndLabel::Orientable => "or",
            EndLabel::Nonorientable => "nonor",
        }
    }
}

impl fmt::Display for EndLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EndLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "planar" => Ok(EndLabel::Planar),
            "or" => Ok(EndLabel::Orientable),
            "nonor" => Ok(EndLabel::Nonorientable),
            other => Err(format!("unknown end label `{other}`")),
        }
    }
}

/// Set of labels occurring in an expression.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LabelSet(u8);

impl LabelSet {
    fn bit(label: EndLabel) -> u8 {
        match label {
            EndLabel::Planar => 1,
            EndLabel::Orientable => 2,
            EndLabel::Nonorientable => 4,
        }
    }

    pub fn single(label: EndLabel) -> Self {
        LabelSet(Self::bit(label))
    }

    pub fn insert(&mut self, label: EndLabel) {
        self.0 |= Self::bit(label);
    }

    pub fn union(self, other: LabelSet) -> LabelSet {
        LabelSet(self.0 | other.0)
    }

    pub fn contains(self, label: EndLabel) -> bool {
        self.0 & Self::bit(label) != 0
    }

    pub fn has_genus(self) -> bool {
        self.contains(EndLabel::Orientable) || self.contains(EndLabel::Nonorientable)
    }

    /// Least label a limit of these labels may carry.
    pub fn required_limit(self) -> EndLabel {
        if self.contains(EndLabel::Nonorientable) {
            EndLabel::Nonorientable
        } else if self.contains(EndLabel::Orientable) {
            EndLabel::Orientable
        } else {
            EndLabel::Planar
        }
    }
}

/// Symbolic labelled end space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum EndExpr {
    /// A single end.
    Pt(EndLabel),
    /// A Cantor set of ends, all with the same label.
    Cantor(EndLabel),
    /// Disjoint union of finitely many clopen pieces.
    Union(Vec<EndExpr>),
    /// One-point compactification of countably many copies of `body`; the
    /// added point carries `limit`.
    Seq { body: Box<EndExpr>, limit: EndLabel },
}

impl EndExpr {
    pub fn pt(label: EndLabel) -> Self {
        EndExpr::Pt(label)
    }

    pub fn cantor(label: EndLabel) -> Self {
        EndExpr::Cantor(label)
    }

    pub fn union(parts: impl IntoIterator<Item = EndExpr>) -> Self {
        EndExpr::Union(parts.into_iter().collect())
    }

    pub fn seq(body: EndExpr, limit: EndLabel) -> Self {
        EndExpr::Seq { body: Box::new(body), limit }
    }

    /// Labels carried by at least one end of the denoted space.
    pub fn labels(&self) -> LabelSet {
        match self {
            EndExpr::Pt(l) | EndExpr::Cantor(l) => LabelSet::single(*l),
            EndExpr::Union(parts) => parts.iter().fold(LabelSet::default(), |acc, p| acc.union(p.labels())),
            EndExpr::Seq { body, limit } => body.labels().union(LabelSet::single(*limit)),
        }
    }

    /// Maximum nesting depth of `seq` nodes.
    pub fn seq_depth(&self) -> usize {
        match self {
            EndExpr::Pt(_) | EndExpr::Cantor(_) => 0,
            EndExpr::Union(parts) => parts.iter().map(EndExpr::seq_depth).max().unwrap_or(0),
            EndExpr::Seq { body, .. } => 1 + body.seq_depth(),
        }
    }

    /// Number of syntax nodes.
    pub fn size(&self) -> usize {
        match self {
            EndExpr::Pt(_) | EndExpr::Cantor(_) => 1,
            EndExpr::Union(parts) => 1 + parts.iter().map(EndExpr::size).sum::<usize>(),
            EndExpr::Seq { body, .. } => 1 + body.size(),
        }
    }

    /// Cardinality of the whole end space.
    pub fn count_ends(&self) -> Multiplicity {
        self.count_where(|_| true)
    }

    fn count_where(&self, pred: impl Fn(EndLabel) -> bool + Copy) -> Multiplicity {
        match self {
            EndExpr::Pt(l) => Multiplicity::Finite(u64::from(pred(*l))),
            EndExpr::Cantor(l) => {
                if pred(*l) {
                    Multiplicity::Infinite
                } else {
                    Multiplicity::Finite(0)
                }
            }
            EndExpr::Union(parts) => parts
                .iter()
                .fold(Multiplicity::Finite(0), |acc, p| acc + p.count_where(pred)),
            EndExpr::Seq { body, limit } => {
                let in_body = if body.count_where(pred).is_zero() {
                    Multiplicity::Finite(0)
                } else {
                    Multiplicity::Infinite
                };
                in_body + Multiplicity::Finite(u64::from(pred(*limit)))
            }
        }
    }
}

impl fmt::Display for EndExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EndExpr::Pt(l) => write!(f, "pt({l})"),
            EndExpr::Cantor(l) => write!(f, "cantor({l})"),
            EndExpr::Union(parts) => {
                f.write_str("union(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str(")")
            }
            EndExpr::Seq { body, limit } => write!(f, "seq({body}; limit={limit})"),
        }
    }
}

impl FromStr for EndExpr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse::parse_end_expr(s)
    }
}

impl Serialize for EndExpr {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for EndExpr {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// A `seq` node whose limit label does not dominate its body.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosednessViolation {
    /// Child-index path from the root (`seq` bodies are child 0).
    pub address: Vec<usize>,
    pub limit: EndLabel,
    pub required: EndLabel,
}

impl fmt::Display for ClosednessViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "seq at {} has limit `{}` but its body forces at least `{}`",
            format_address(&self.address),
            self.limit,
            self.required
        )
    }
}

pub(crate) fn format_address(address: &[usize]) -> String {
    if address.is_empty() {
        "root".to_string()
    } else {
        address.iter().map(usize::to_string).collect::<Vec<_>>().join(".")
    }
}

/// Every `seq` node whose limit label is below what its body requires.
/// An empty result means `End_n ⊆ End_g ⊆ End` are all closed.
pub fn validate_closedness(e: &EndExpr) -> Vec<ClosednessViolation> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    closedness_walk(e, &mut path, &mut out);
    out
}

fn closedness_walk(e: &EndExpr, path: &mut Vec<usize>, out: &mut Vec<ClosednessViolation>) {
    match e {
        EndExpr::Pt(_) | EndExpr::Cantor(_) => {}
        EndExpr::Union(parts) => {
            for (i, p) in parts.iter().enumerate() {
                path.push(i);
                closedness_walk(p, path, out);
                path.pop();
            }
        }
        EndExpr::Seq { body, limit } => {
            let required = body.labels().required_limit();
            if *limit < required {
                out.push(ClosednessViolation { address: path.clone(), limit: *limit, required });
            }
            path.push(0);
            closedness_walk(body, path, out);
            path.pop();
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EndSpaceError {
    #[error("expression leaves the decidable fragment: {0}")]
    FragmentExceeded(String),
    #[error("end sets are not closed: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    NotClosed(Vec<ClosednessViolation>),
}

/// Canonical form with the default `seq` depth bound.
pub fn normalize(e: &EndExpr) -> Result<CanonicalForm, EndSpaceError> {
    normalize_with_depth(e, DEFAULT_MAX_SEQ_DEPTH)
}

/// Canonical form of `e`; two expressions have equal forms exactly when
/// their labelled end spaces are homeomorphic.
pub fn normalize_with_depth(e: &EndExpr, max_seq_depth: usize) -> Result<CanonicalForm, EndSpaceError> {
    let violations = validate_closedness(e);
    if !violations.is_empty() {
        return Err(EndSpaceError::NotClosed(violations));
    }
    canonical::canonical_form(e, max_seq_depth)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Homeomorphic,
    Distinct,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Homeomorphic => "homeomorphic",
            Verdict::Distinct => "distinct",
            Verdict::Unknown => "unknown",
        })
    }
}

/// Decide whether two labelled end spaces are homeomorphic.
///
/// Sound in both directions on the fragment; `Unknown` only when one side
/// cannot be normalized.
pub fn equivalent(e1: &EndExpr, e2: &EndExpr) -> Verdict {
    match (normalize(e1), normalize(e2)) {
        (Ok(a), Ok(b)) => {
            if a == b {
                Verdict::Homeomorphic
            } else {
                Verdict::Distinct
            }
        }
        _ => Verdict::Unknown,
    }
}

/// Number of ends accumulated by genus.
pub fn count_genus_ends(e: &EndExpr) -> Multiplicity {
    e.count_where(EndLabel::is_genus)
}

/// Number of nonorientable ends.
pub fn count_nonorientable_ends(e: &EndExpr) -> Multiplicity {
    e.count_where(|l| l == EndLabel::Nonorientable)
}
