//! Finite strip model for the relation between three nonorientable
//! shifts on crosscap rows and a handle row plus a crosscap row.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TokenKind {
    Handle,
    Crosscap,
}

/// A handle or crosscap, remembering its row and the column it started in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Token {
    pub kind: TokenKind,
    pub row: u8,
    pub origin: i64,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StripError {
    #[error("window {0} is too small, need at least 4")]
    WindowTooSmall(u32),
    #[error("column {0} cannot be reinterpreted")]
    Misaligned(i64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StripModel {
    pub window: i64,
    pub columns: BTreeMap<i64, Vec<Token>>,
}

const R1: u8 = 1;
const R2: u8 = 2;
const R3: u8 = 3;
const HANDLE_ROW: u8 = 5;
const CROSSCAP_ROW: u8 = 4;

impl StripModel {
    fn filled(window: i64, rows: &[(u8, TokenKind)]) -> StripModel {
        let columns = (-window..=window)
            .map(|x| (x, rows.iter().map(|&(row, kind)| Token { kind, row, origin: x }).collect()))
            .collect();
        StripModel { window, columns }
    }

    /// Three crosscaps per column.
    pub fn n1(window: i64) -> StripModel {
        Self::filled(window, &[(R1, TokenKind::Crosscap), (R2, TokenKind::Crosscap), (R3, TokenKind::Crosscap)])
    }

    /// A handle and a crosscap per column.
    pub fn n2(window: i64) -> StripModel {
        Self::filled(window, &[(HANDLE_ROW, TokenKind::Handle), (CROSSCAP_ROW, TokenKind::Crosscap)])
    }

    /// Move every token of `row` one column up; tokens leaving the window
    /// are dropped.
    pub fn shift(&self, row: u8) -> StripModel {
        let mut columns: BTreeMap<i64, Vec<Token>> = self.columns.keys().map(|&x| (x, Vec::new())).collect();
        for (&x, tokens) in &self.columns {
            for &t in tokens {
                let to = if t.row == row { x + 1 } else { x };
                if let Some(col) = columns.get_mut(&to) {
                    col.push(t);
                }
            }
        }
        columns.values_mut().for_each(|c| c.sort());
        StripModel { window: self.window, columns }
    }

    fn map_columns(&self, f: impl Fn(i64, &[Token]) -> Result<Vec<Token>, StripError>) -> Result<StripModel, StripError> {
        let mut columns = BTreeMap::new();
        for (&x, tokens) in &self.columns {
            let mut out = f(x, tokens)?;
            out.sort();
            columns.insert(x, out);
        }
        Ok(StripModel { window: self.window, columns })
    }

    /// `f`: the first two crosscap rows of a column become one handle.
    pub fn to_n2(&self) -> Result<StripModel, StripError> {
        self.map_columns(|x, tokens| {
            let find = |row| tokens.iter().find(|t| t.row == row).copied();
            match (find(R1), find(R2)) {
                (None, None) => {}
                (Some(a), Some(b)) if a.origin == b.origin => {}
                _ => return Err(StripError::Misaligned(x)),
            }
            let mut out = Vec::new();
            for t in tokens {
                match t.row {
                    R1 => out.push(Token { kind: TokenKind::Handle, row: HANDLE_ROW, origin: t.origin }),
                    R2 => {}
                    R3 => out.push(Token { kind: TokenKind::Crosscap, row: CROSSCAP_ROW, origin: t.origin }),
                    _ => return Err(StripError::Misaligned(x)),
                }
            }
            let before: Vec<TokenKind> = tokens.iter().map(|t| t.kind).collect();
            let after: Vec<TokenKind> = out.iter().map(|t| t.kind).collect();
            if !after.is_empty() && dyck_normal_form(&after) != dyck_normal_form(&before) {
                return Err(StripError::Misaligned(x));
            }
            Ok(out)
        })
    }

    /// `f⁻¹`
    pub fn to_n1(&self) -> Result<StripModel, StripError> {
        self.map_columns(|x, tokens| {
            let mut out = Vec::new();
            for t in tokens {
                match t.row {
                    HANDLE_ROW => {
                        out.push(Token { kind: TokenKind::Crosscap, row: R1, origin: t.origin });
                        out.push(Token { kind: TokenKind::Crosscap, row: R2, origin: t.origin });
                    }
                    CROSSCAP_ROW => out.push(Token { kind: TokenKind::Crosscap, row: R3, origin: t.origin }),
                    _ => return Err(StripError::Misaligned(x)),
                }
            }
            Ok(out)
        })
    }

    fn interior(&self) -> impl Iterator<Item = (&i64, &Vec<Token>)> {
        let w = self.window;
        self.columns.range(-w + 1..=w - 1)
    }

    pub fn agrees_on_interior(&self, other: &StripModel) -> bool {
        self.interior().eq(other.interior())
    }
}

/// Crosscaps-only form when a crosscap is present: each handle becomes two
/// crosscaps.
pub fn dyck_normal_form(column: &[TokenKind]) -> Vec<TokenKind> {
    let mut out: Vec<TokenKind> = if column.contains(&TokenKind::Crosscap) {
        column
            .iter()
            .flat_map(|k| match k {
                TokenKind::Handle => [TokenKind::Crosscap; 2].as_slice(),
                TokenKind::Crosscap => [TokenKind::Crosscap].as_slice(),
            })
            .copied()
            .collect()
    } else {
        column.to_vec()
    };
    out.sort();
    out
}

fn check(window: u32, rows: &[u8]) -> Result<bool, StripError> {
    if window < 4 {
        return Err(StripError::WindowTooSmall(window));
    }
    let w = window as i64;
    let start = StripModel::n1(w);
    let lhs = rows.iter().rev().fold(start.clone(), |m, &r| m.shift(r));
    let rhs = start.to_n2()?.shift(CROSSCAP_ROW).shift(HANDLE_ROW).to_n1()?;
    Ok(lhs.agrees_on_interior(&rhs))
}

/// `h₁h₂h₃ = f⁻¹ h₅h₄ f` on the interior of a window.
pub fn strip_relation_check(window: u32) -> Result<bool, StripError> {
    check(window, &[R1, R2, R3])
}

/// Same comparison with the third crosscap row left in place.
pub fn strip_relation_check_without_h3(window: u32) -> Result<bool, StripError> {
    check(window, &[R1, R2])
}
