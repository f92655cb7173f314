//! Independent rank check on a finite window.
//!
//! The window is a sphere with one tube per genus end. Each tube carries
//! `units` handles or crosscaps and stays open at its far end, and the
//! centre may carry one or two extra crosscaps. The chain complex has a
//! single vertex, so `H_1` is the cokernel of `∂_2`.
//!
//! Separating classes are counted in `H_1(W; F_2)`: a curve bounding a
//! Möbius band is separating and has class `2c`, which is nonzero over the
//! integers, so the integral span is larger than the count of end-splitting
//! curves as soon as crosscaps are present. Both numbers are reported.

use serde::Serialize;

use super::{good_basis, BasisError};
use crate::endspace::EndLabel;
use crate::surface::{forget_planar, OrientClass, SurfaceSpec};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WindowSpec {
    pub arms: Vec<EndLabel>,
    pub units: usize,
    pub center_crosscaps: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyReport {
    pub window: WindowSpec,
    pub h1_rank: usize,
    pub torsion: Vec<i64>,
    pub separating_classes: usize,
    pub separating_rank_f2: usize,
    pub separating_rank_z: usize,
}

impl WindowSpec {
    pub fn from_spec(s_hat: &SurfaceSpec, depth: usize) -> Result<WindowSpec, BasisError> {
        let basis = good_basis(s_hat, depth)?;
        let s_hat = forget_planar(s_hat).map_err(|_| BasisError::FewerThanTwoGenusEnds(0))?;
        let center_crosscaps = match s_hat.orient {
            OrientClass::OddNonorientable => 1,
            OrientClass::EvenNonorientable => 2,
            _ => 0,
        };
        Ok(WindowSpec {
            arms: basis.ends.iter().map(|e| e.label).collect(),
            units: depth.max(1),
            center_crosscaps,
        })
    }
}

struct Cells {
    x: Vec<Vec<usize>>,
    /// (a, b) for handles, (c, c) for crosscaps
    genus: Vec<Vec<(usize, usize)>>,
    center: Vec<usize>,
    count: usize,
}

fn cells(w: &WindowSpec) -> Cells {
    let mut count = 0;
    let mut next = || {
        count += 1;
        count - 1
    };
    let mut x = Vec::new();
    let mut genus = Vec::new();
    for label in &w.arms {
        x.push((0..=w.units).map(|_| next()).collect());
        genus.push(
            (0..w.units)
                .map(|_| match label {
                    EndLabel::Nonorientable => {
                        let c = next();
                        (c, c)
                    }
                    _ => (next(), next()),
                })
                .collect(),
        );
    }
    let center = (0..w.center_crosscaps).map(|_| next()).collect();
    Cells { x, genus, center, count }
}

fn boundary_matrix(w: &WindowSpec, c: &Cells) -> Vec<Vec<i64>> {
    let mut rows = Vec::new();
    for (i, label) in w.arms.iter().enumerate() {
        for j in 0..w.units {
            let mut r = vec![0; c.count];
            r[c.x[i][j]] += 1;
            r[c.x[i][j + 1]] -= 1;
            if *label == EndLabel::Nonorientable {
                r[c.genus[i][j].0] += 2;
            }
            rows.push(r);
        }
    }
    let mut r = vec![0; c.count];
    for xs in &c.x {
        r[xs[0]] += 1;
    }
    for &e in &c.center {
        r[e] += 2;
    }
    rows.push(r);
    rows
}

fn separating_classes(w: &WindowSpec, c: &Cells) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let unit = |i: usize| {
        let mut v = vec![0; c.count];
        v[i] = 1;
        v
    };
    for (i, xs) in c.x.iter().enumerate() {
        for &xi in xs {
            out.push(unit(xi));
        }
        for &(a, b) in &c.genus[i] {
            if a == b {
                let mut v = vec![0; c.count];
                v[a] = 2;
                out.push(v);
            } else {
                out.push(vec![0; c.count]);
            }
        }
    }
    for &e in &c.center {
        let mut v = vec![0; c.count];
        v[e] = 2;
        out.push(v);
    }
    // Curves around a set of tubes together with some centre crosscaps.
    let k = w.arms.len();
    if k <= 12 {
        for arms in 1u32..(1 << k) - 1 {
            for caps in 0u32..(1 << c.center.len()) {
                let mut v = vec![0; c.count];
                for (i, xs) in c.x.iter().enumerate() {
                    if arms >> i & 1 == 1 {
                        v[xs[0]] += 1;
                    }
                }
                for (j, &e) in c.center.iter().enumerate() {
                    if caps >> j & 1 == 1 {
                        v[e] += 2;
                    }
                }
                out.push(v);
            }
        }
    }
    out
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Rank over the rationals by fraction-free elimination.
pub fn rank_z(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][col] != 0) else { continue };
        m.swap(rank, p);
        let pivot = m[rank].clone();
        for r in m.iter_mut().skip(rank + 1) {
            if r[col] == 0 {
                continue;
            }
            let g = gcd(pivot[col], r[col]);
            let (f, h) = (pivot[col] / g, r[col] / g);
            let mut content = 0;
            for (v, &pv) in r.iter_mut().zip(&pivot) {
                *v = *v * f - pv * h;
                content = gcd(content, *v);
            }
            if content > 1 {
                r.iter_mut().for_each(|v| *v /= content);
            }
        }
        rank += 1;
    }
    rank
}

pub fn rank_f2(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<bool>> = rows.iter().map(|r| r.iter().map(|v| v.rem_euclid(2) == 1).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][col]) else { continue };
        m.swap(rank, p);
        let pivot = m[rank].clone();
        for r in m.iter_mut().skip(rank + 1) {
            if r[col] {
                r.iter_mut().zip(&pivot).for_each(|(v, &pv)| *v ^= pv);
            }
        }
        rank += 1;
    }
    rank
}

/// Diagonal of the Smith normal form (nonzero entries only).
pub fn smith_normal_form(rows: &[Vec<i64>]) -> Vec<i64> {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    let (nr, nc) = (m.len(), m.first().map_or(0, Vec::len));
    let mut diag = Vec::new();
    let mut t = 0;
    while t < nr.min(nc) {
        let mut best = None;
        for (i, row) in m.iter().enumerate().skip(t) {
            for (j, &v) in row.iter().enumerate().skip(t) {
                if v != 0 && best.is_none_or(|(_, _, b): (usize, usize, i128)| v.abs() < b) {
                    best = Some((i, j, v.abs()));
                }
            }
        }
        let Some((pi, pj, _)) = best else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = m[t][t];
            let mut dirty = false;
            for i in t + 1..nr {
                let q = m[i][t] / p;
                if q != 0 {
                    for j in t..nc {
                        m[i][j] -= q * m[t][j];
                    }
                }
                if m[i][t] != 0 {
                    dirty = true;
                }
            }
            for j in t + 1..nc {
                let q = m[t][j] / p;
                if q != 0 {
                    for row in m.iter_mut() {
                        row[j] -= q * row[t];
                    }
                }
                if m[t][j] != 0 {
                    dirty = true;
                }
            }
            if !dirty {
                let bad = (t + 1..nr).flat_map(|i| (t + 1..nc).map(move |j| (i, j))).find(|&(i, j)| m[i][j] % p != 0);
                match bad {
                    None => break,
                    Some((i, _)) => {
                        let (a, b) = m.split_at_mut(i);
                        a[t].iter_mut().zip(&b[0]).for_each(|(v, &w)| *v += w);
                        continue;
                    }
                }
            }
            // Move the smallest remaining entry of row/column t to the pivot.
            let mut small = (t, t, m[t][t].abs());
            for i in t + 1..nr {
                if m[i][t] != 0 && m[i][t].abs() < small.2 {
                    small = (i, t, m[i][t].abs());
                }
            }
            for j in t + 1..nc {
                if m[t][j] != 0 && m[t][j].abs() < small.2 {
                    small = (t, j, m[t][j].abs());
                }
            }
            m.swap(t, small.0);
            for row in m.iter_mut() {
                row.swap(t, small.1);
            }
        }
        diag.push(m[t][t].abs() as i64);
        t += 1;
    }
    diag
}

pub fn homology_oracle(w: &WindowSpec) -> HomologyReport {
    let c = cells(w);
    let d2 = boundary_matrix(w, &c);
    let snf = smith_normal_form(&d2);
    let seps = separating_classes(w, &c);
    let stacked: Vec<Vec<i64>> = d2.iter().chain(&seps).cloned().collect();
    HomologyReport {
        window: w.clone(),
        h1_rank: c.count - snf.len(),
        torsion: snf.into_iter().filter(|&d| d > 1).collect(),
        separating_classes: seps.len(),
        separating_rank_f2: rank_f2(&stacked) - rank_f2(&d2),
        separating_rank_z: rank_z(&stacked) - rank_z(&d2),
    }
}

/// Rank of the separating classes on the window built from `s_hat`.
pub fn oracle_rank(s_hat: &SurfaceSpec, depth: usize) -> Result<usize, BasisError> {
    Ok(homology_oracle(&WindowSpec::from_spec(s_hat, depth)?).separating_rank_f2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn window(arms: &[EndLabel], center: usize) -> WindowSpec {
        WindowSpec { arms: arms.to_vec(), units: 3, center_crosscaps: center }
    }

    #[test]
    fn snf_small() {
        assert_eq!(smith_normal_form(&[vec![2, 4], vec![6, 8]]), vec![2, 4]);
        assert_eq!(smith_normal_form(&[vec![2, 3]]), vec![1]);
        assert_eq!(smith_normal_form(&[vec![0, 0]]), Vec::<i64>::new());
    }

    #[test]
    fn ranks() {
        let m = vec![vec![2, 0], vec![0, 2], vec![2, 2]];
        assert_eq!(rank_z(&m), 2);
        assert_eq!(rank_f2(&m), 0);
    }

    #[test]
    fn jacobs_ladder_window() {
        let r = homology_oracle(&window(&[EndLabel::Orientable; 2], 0));
        assert_eq!(r.h1_rank, 2 * 6 + 1);
        assert!(r.torsion.is_empty());
        assert_eq!(r.separating_rank_f2, 1);
        assert_eq!(r.separating_rank_z, 1);
    }

    #[test]
    fn orientable_windows_agree_over_both_rings() {
        for k in 2..=6 {
            let r = homology_oracle(&window(&vec![EndLabel::Orientable; k], 0));
            assert_eq!(r.separating_rank_f2, k - 1);
            assert_eq!(r.separating_rank_z, k - 1);
        }
    }

    #[test]
    fn crosscaps_inflate_the_integral_span() {
        let r = homology_oracle(&window(&[EndLabel::Orientable, EndLabel::Orientable], 1));
        assert!(r.torsion.is_empty());
        assert_eq!(r.h1_rank, 2 * 6 + 1 + 1);
        assert_eq!(r.separating_rank_f2, 1);
        assert_eq!(r.separating_rank_z, 2);
    }
}
