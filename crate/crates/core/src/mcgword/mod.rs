//! Words over compactly supported classes and handle-shifts.
//!
//! Compact letters are opaque: all that is recorded is a finite support,
//! a formal-inverse marker and, for letters produced by substitution, a
//! slide along one shift's strip. Support ids of the form `s<i>@<k>` name
//! cell `k` of the strip carrying shift `i`; shift `i` moves them to cell
//! `k ± 1` and fixes every other id. The basis curve of shift `i` is
//! `g<i>`.

pub mod random;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::endspace::{count_genus_ends, Multiplicity};
use crate::shiftbasis::{good_basis, rank_r, BasisError, Rank};
use crate::surface::{forget_planar, validate_surface, FiniteSurface, Genus, SurfaceSpec};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    Compact {
        support: BTreeSet<String>,
        inverse: bool,
        /// `(i, ε)`: acts on its strip-`i` cells like `h_i^ε`.
        slide: Option<(usize, i8)>,
    },
    Shift {
        index: usize,
        exponent: i8,
    },
}

impl Generator {
    pub fn compact<I: IntoIterator<Item = S>, S: Into<String>>(support: I) -> Generator {
        Generator::Compact { support: support.into_iter().map(Into::into).collect(), inverse: false, slide: None }
    }

    pub fn shift(index: usize, exponent: i8) -> Generator {
        Generator::Shift { index, exponent }
    }

    pub fn inverse(&self) -> Generator {
        match self {
            Generator::Compact { support, inverse, slide } => {
                Generator::Compact { support: support.clone(), inverse: !inverse, slide: *slide }
            }
            Generator::Shift { index, exponent } => Generator::Shift { index: *index, exponent: -exponent },
        }
    }

    /// Conjugate by `h_i^e`: strip-`i` cells of the support move by `e`.
    pub fn translated(&self, i: usize, e: i64) -> Generator {
        match self {
            Generator::Compact { support, inverse, slide } => Generator::Compact {
                support: support.iter().map(|id| translate_id(id, i, e)).collect(),
                inverse: *inverse,
                slide: *slide,
            },
            shift => shift.clone(),
        }
    }
}

/// Parse `s<i>@<k>`.
pub fn strip_cell(id: &str) -> Option<(usize, i64)> {
    let rest = id.strip_prefix('s')?;
    let (i, k) = rest.split_once('@')?;
    Some((i.parse().ok()?, k.parse().ok()?))
}

pub fn translate_id(id: &str, i: usize, e: i64) -> String {
    match strip_cell(id) {
        Some((j, k)) if j == i => format!("s{i}@{}", k + e),
        _ => id.to_string(),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word {
    pub letters: Vec<Generator>,
}

impl Word {
    pub fn new(letters: Vec<Generator>) -> Word {
        Word { letters }
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word { letters: self.letters.iter().chain(&other.letters).cloned().collect() }
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(Generator::inverse).collect() }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("shift index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: Rank },
    #[error("window contains g{0}, which separates the ends of shift {0}")]
    WindowSeparates(usize),
}

fn write_support(f: &mut fmt::Formatter<'_>, support: &BTreeSet<String>) -> fmt::Result {
    f.write_str("{")?;
    for (k, id) in support.iter().enumerate() {
        if k > 0 {
            f.write_str(",")?;
        }
        f.write_str(id)?;
    }
    f.write_str("}")
}

fn write_shift(f: &mut fmt::Formatter<'_>, index: usize, exponent: i8) -> fmt::Result {
    write!(f, "{}{index}", if exponent > 0 { 'h' } else { 'H' })
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Compact { support, inverse, slide } => {
                f.write_str(if *inverse { "C" } else { "c" })?;
                write_support(f, support)?;
                if let Some((i, e)) = slide {
                    f.write_str("@")?;
                    write_shift(f, *i, *e)?;
                }
                Ok(())
            }
            Generator::Shift { index, exponent } => write_shift(f, *index, *exponent),
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for (k, g) in self.letters.iter().enumerate() {
            if k > 0 {
                f.write_str(".")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

fn parse_shift(s: &str, offset: usize) -> Result<(usize, i8), WordError> {
    let err = |message: &str| WordError::Parse { offset, message: message.into() };
    let (exponent, digits) = match s.as_bytes().first() {
        Some(b'h') => (1, &s[1..]),
        Some(b'H') => (-1, &s[1..]),
        _ => return Err(err("expected h<i> or H<i>")),
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(err("shift index must be a decimal integer"));
    }
    let index = digits.parse().map_err(|_| err("shift index too large"))?;
    Ok((index, exponent))
}

fn parse_letter(s: &str, offset: usize) -> Result<Generator, WordError> {
    let err = |at: usize, message: &str| WordError::Parse { offset: offset + at, message: message.into() };
    match s.as_bytes().first() {
        Some(b'c' | b'C') => {
            let inverse = s.starts_with('C');
            if s.as_bytes().get(1) != Some(&b'{') {
                return Err(err(1, "expected '{'"));
            }
            let close = s.find('}').ok_or_else(|| err(s.len(), "unclosed support"))?;
            let mut support = BTreeSet::new();
            let body = &s[2..close];
            if !body.is_empty() {
                let mut at = 2;
                for id in body.split(',') {
                    let ok = !id.is_empty()
                        && id.bytes().all(|b| b.is_ascii_alphanumeric() || matches!(b, b'_' | b'@' | b'-'));
                    if !ok {
                        return Err(err(at, "bad support id"));
                    }
                    support.insert(id.to_string());
                    at += id.len() + 1;
                }
            }
            let tail = &s[close + 1..];
            let slide = match tail.strip_prefix('@') {
                None if tail.is_empty() => None,
                None => return Err(err(close + 1, "unexpected text after support")),
                Some(sh) => Some(parse_shift(sh, offset + close + 2)?),
            };
            Ok(Generator::Compact { support, inverse, slide })
        }
        Some(b'h' | b'H') => {
            let (index, exponent) = parse_shift(s, offset)?;
            Ok(Generator::Shift { index, exponent })
        }
        _ => Err(err(0, "expected a letter c{..}, C{..}, h<i> or H<i>")),
    }
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Word, WordError> {
        let t = s.trim();
        let lead = s.len() - s.trim_start().len();
        if t.is_empty() || t == "1" {
            return Ok(Word::default());
        }
        let mut letters = Vec::new();
        let mut offset = lead;
        for piece in t.split('.') {
            letters.push(parse_letter(piece, offset)?);
            offset += piece.len() + 1;
        }
        Ok(Word { letters })
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Word, D::Error> {
        String::deserialize(deserializer)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Finitely supported integer vector.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct PhiVector {
    pub coords: BTreeMap<usize, i64>,
}

impl PhiVector {
    pub fn unit(i: usize) -> PhiVector {
        PhiVector { coords: BTreeMap::from([(i, 1)]) }
    }

    pub fn get(&self, i: usize) -> i64 {
        self.coords.get(&i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    fn bump(&mut self, i: usize, by: i64) {
        let v = self.coords.entry(i).or_insert(0);
        *v += by;
        if *v == 0 {
            self.coords.remove(&i);
        }
    }
}

impl Add for PhiVector {
    type Output = PhiVector;

    fn add(mut self, rhs: PhiVector) -> PhiVector {
        for (i, v) in rhs.coords {
            self.bump(i, v);
        }
        self
    }
}

impl fmt::Display for PhiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, (i, v)) in self.coords.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "e{i}:{v}")?;
        }
        f.write_str(")")
    }
}

fn check_index(index: usize, rank: Rank) -> Result<(), WordError> {
    if rank.contains(index) {
        Ok(())
    } else {
        Err(WordError::IndexOutOfRange { index, rank })
    }
}

/// Exponent sum of each shift; compact letters count zero.
pub fn phi(w: &Word, rank: Rank) -> Result<PhiVector, WordError> {
    let mut v = PhiVector::default();
    for g in &w.letters {
        if let Generator::Shift { index, exponent } = g {
            check_index(*index, rank)?;
            v.bump(*index, i64::from(*exponent));
        }
    }
    Ok(v)
}

pub fn psi(w: &Word, i: usize, rank: Rank) -> Result<i64, WordError> {
    check_index(i, rank)?;
    Ok(phi(w, rank)?.get(i))
}

/// Whether `phi(w)` vanishes.
pub fn kernel_coordinate_test(w: &Word) -> bool {
    phi(w, Rank::CountablyInfinite).map(|v| v.is_zero()).unwrap_or(false)
}

/// Cancel adjacent letters against their inverses.
pub fn free_reduce(w: &Word) -> Word {
    let mut out: Vec<Generator> = Vec::with_capacity(w.len());
    for g in &w.letters {
        if out.last() == Some(&g.inverse()) {
            out.pop();
        } else {
            out.push(g.clone());
        }
    }
    Word { letters: out }
}

/// Move every compact letter to the front, conjugating it by the shifts it
/// passes, then collect the shifts by index.
pub fn conjugate_rewrite(w: &Word) -> Word {
    let mut compacts = Vec::new();
    let mut net: BTreeMap<usize, i64> = BTreeMap::new();
    for g in &w.letters {
        match g {
            Generator::Shift { index, exponent } => *net.entry(*index).or_insert(0) += i64::from(*exponent),
            c => compacts.push(net.iter().fold(c.clone(), |c, (&i, &e)| c.translated(i, e))),
        }
    }
    for (i, e) in net {
        let letter = Generator::shift(i, e.signum() as i8);
        compacts.extend(std::iter::repeat_n(letter, e.unsigned_abs() as usize));
    }
    Word { letters: compacts }
}

fn act_letter(g: &Generator, ids: &BTreeSet<String>) -> BTreeSet<String> {
    match g {
        Generator::Shift { index, exponent } => ids.iter().map(|id| translate_id(id, *index, (*exponent).into())).collect(),
        Generator::Compact { support, inverse, slide: Some((i, e)) } => {
            let (moves, by): (BTreeSet<String>, i64) = if *inverse {
                (support.iter().map(|id| translate_id(id, *i, (*e).into())).collect(), -i64::from(*e))
            } else {
                (support.clone(), (*e).into())
            };
            ids.iter().map(|id| if moves.contains(id) { translate_id(id, *i, by) } else { id.clone() }).collect()
        }
        Generator::Compact { .. } => ids.clone(),
    }
}

/// Image of a set of ids under `w`, letters applied right to left.
pub fn act_on_window(w: &Word, window: &BTreeSet<String>) -> BTreeSet<String> {
    w.letters.iter().rev().fold(window.clone(), |ids, g| act_letter(g, &ids))
}

/// Replace each `h_i^{±1}` by a compact letter agreeing with it on the
/// image of `window` under the rest of the word to its right.
pub fn substitute_compact(w: &Word, i: usize, window: &BTreeSet<String>) -> Result<Word, WordError> {
    if window.contains(&format!("g{i}")) {
        return Err(WordError::WindowSeparates(i));
    }
    let mut image = window.clone();
    let mut out = Vec::with_capacity(w.len());
    for g in w.letters.iter().rev() {
        let replaced = match g {
            Generator::Shift { index, exponent } if *index == i => {
                let cells: BTreeSet<String> =
                    image.iter().filter(|id| strip_cell(id).is_some_and(|(j, _)| j == i)).cloned().collect();
                if cells.is_empty() {
                    Generator::compact(Vec::<String>::new())
                } else {
                    Generator::Compact { support: cells, inverse: false, slide: Some((i, *exponent)) }
                }
            }
            other => other.clone(),
        };
        image = act_letter(&replaced, &image);
        out.push(replaced);
    }
    out.reverse();
    Ok(Word { letters: out })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CohomologyResult {
    Trivial,
    FreeAbelian(Rank),
}

impl Serialize for CohomologyResult {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        match self {
            CohomologyResult::Trivial => serializer.serialize_str("trivial"),
            CohomologyResult::FreeAbelian(rank) => {
                let mut m = serializer.serialize_map(Some(1))?;
                match rank {
                    Rank::Finite(n) => m.serialize_entry("free_abelian", n)?,
                    Rank::CountablyInfinite => m.serialize_entry("free_abelian", "countably_infinite_direct_sum")?,
                }
                m.end()
            }
        }
    }
}

impl fmt::Display for CohomologyResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CohomologyResult::Trivial => f.write_str("0"),
            CohomologyResult::FreeAbelian(Rank::Finite(n)) => write!(f, "Z^{n}"),
            CohomologyResult::FreeAbelian(Rank::CountablyInfinite) => f.write_str("countable direct sum of Z"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohomologyError {
    #[error("genus {0} is below 3")]
    GenusTooSmall(u32),
    #[error("invalid surface: {0}")]
    InvalidSurface(String),
    #[error(transparent)]
    Basis(#[from] BasisError),
}

/// First integral cohomology of the pure mapping class group.
pub fn cohomology(s: &SurfaceSpec, depth: usize) -> Result<CohomologyResult, CohomologyError> {
    let violations = validate_surface(s);
    if let Some(v) = violations.first() {
        return Err(CohomologyError::InvalidSurface(format!("{v:?}")));
    }
    if let Genus::Finite(g) = s.genus {
        if g < 3 {
            return Err(CohomologyError::GenusTooSmall(g));
        }
    }
    if count_genus_ends(&s.ends) <= Multiplicity::Finite(1) {
        return Ok(CohomologyResult::Trivial);
    }
    let s_hat = forget_planar(s).map_err(|e| CohomologyError::InvalidSurface(e.to_string()))?;
    Ok(CohomologyResult::FreeAbelian(rank_r(&good_basis(&s_hat, depth)?)))
}

/// Genus at least 3, where the finite-type pure mapping class groups
/// involved have torsion abelianization.
pub fn torsion_abelianization_gate(f: &FiniteSurface) -> bool {
    f.genus >= 3
}
