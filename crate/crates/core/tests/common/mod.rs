//! Shared generators for integration tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;

use surfcalc::endspace::{EndExpr, EndLabel};
use surfcalc::surface::{Genus, OrientClass, SurfaceSpec};

pub const LABELS: [EndLabel; 3] = [EndLabel::Planar, EndLabel::Orientable, EndLabel::Nonorientable];

fn label<R: Rng>(rng: &mut R) -> EndLabel {
    LABELS[rng.random_range(0..3)]
}

/// A closed expression inside the decidable fragment. Cantor blocks only
/// appear outside `seq` bodies.
pub fn random_expr<R: Rng>(rng: &mut R, depth: u32) -> EndExpr {
    gen(rng, depth, true)
}

fn gen<R: Rng>(rng: &mut R, depth: u32, cantor_ok: bool) -> EndExpr {
    let pick = if depth == 0 { rng.random_range(0..2) } else { rng.random_range(0..5) };
    match pick {
        0 => EndExpr::Pt(label(rng)),
        1 if cantor_ok => EndExpr::Cantor(label(rng)),
        1 => EndExpr::Pt(label(rng)),
        2 | 3 => {
            let n = rng.random_range(2..=3);
            EndExpr::Union((0..n).map(|_| gen(rng, depth - 1, cantor_ok)).collect())
        }
        _ => {
            let body = gen(rng, depth - 1, false);
            let least = body.labels().required_limit();
            let allowed: Vec<EndLabel> = LABELS.into_iter().filter(|&l| l >= least).collect();
            let limit = allowed[rng.random_range(0..allowed.len())];
            EndExpr::seq(body, limit)
        }
    }
}

/// Same space, different tree: unions are shuffled, split into nested
/// unions or flattened, recursively.
pub fn reassociate<R: Rng>(rng: &mut R, e: &EndExpr) -> EndExpr {
    match e {
        EndExpr::Pt(_) | EndExpr::Cantor(_) => e.clone(),
        EndExpr::Seq { body, limit } => EndExpr::seq(reassociate(rng, body), *limit),
        EndExpr::Union(parts) => {
            let mut flat: Vec<EndExpr> = Vec::new();
            for p in parts {
                match reassociate(rng, p) {
                    EndExpr::Union(inner) if rng.random_bool(0.5) => flat.extend(inner),
                    other => flat.push(other),
                }
            }
            flat.shuffle(rng);
            if flat.len() > 2 && rng.random_bool(0.5) {
                let cut = rng.random_range(1..flat.len() - 1);
                let tail = flat.split_off(cut);
                flat.push(EndExpr::Union(tail));
            }
            if flat.len() == 1 {
                flat.pop().unwrap()
            } else {
                EndExpr::Union(flat)
            }
        }
    }
}

pub fn k_ends(or: usize, nonor: usize, planar: usize) -> EndExpr {
    let mut parts = Vec::new();
    parts.extend((0..or).map(|_| EndExpr::pt(EndLabel::Orientable)));
    parts.extend((0..nonor).map(|_| EndExpr::pt(EndLabel::Nonorientable)));
    parts.extend((0..planar).map(|_| EndExpr::pt(EndLabel::Planar)));
    if parts.len() == 1 {
        parts.pop().unwrap()
    } else {
        EndExpr::Union(parts)
    }
}

pub fn spec(orient: OrientClass, ends: EndExpr) -> SurfaceSpec {
    SurfaceSpec::new(Genus::Infinite, orient, 0, ends)
}

/// Surfaces with 2 to 6 genus ends across the four orientability classes,
/// paired with (orientable, nonorientable) genus-end counts when finite.
pub fn basis_suite() -> Vec<(String, SurfaceSpec, Option<(usize, usize)>)> {
    use OrientClass::*;
    let mut out = Vec::new();
    let mut add = |name: &str, orient, or: usize, nonor: usize, planar: usize| {
        out.push((name.to_string(), spec(orient, k_ends(or, nonor, planar)), Some((or, nonor))));
    };
    add("jacobs_ladder", Orientable, 2, 0, 0);
    for k in 3..=6 {
        add(&format!("orientable_{k}_ends"), Orientable, k, 0, 0);
    }
    add("orientable_3_ends_2_planar", Orientable, 3, 0, 2);
    add("even_2_ends", EvenNonorientable, 2, 0, 0);
    add("even_4_ends", EvenNonorientable, 4, 0, 1);
    add("odd_2_ends", OddNonorientable, 2, 0, 0);
    add("odd_5_ends", OddNonorientable, 5, 0, 0);
    add("nonorientable_2_ends", InfinitelyNonorientable, 0, 2, 0);
    add("nonorientable_4_ends", InfinitelyNonorientable, 0, 4, 1);
    add("mixed_1_2", InfinitelyNonorientable, 1, 2, 0);
    add("mixed_2_2", InfinitelyNonorientable, 2, 2, 0);
    add("mixed_3_3", InfinitelyNonorientable, 3, 3, 0);
    add("mixed_4_1", InfinitelyNonorientable, 4, 1, 1);
    add("mixed_1_5", InfinitelyNonorientable, 1, 5, 0);
    let parse = |s: &str| s.parse::<EndExpr>().unwrap();
    out.push(("orientable_sequence".into(), spec(Orientable, parse("seq(pt(or); limit=or)")), None));
    out.push((
        "mixed_sequence".into(),
        spec(InfinitelyNonorientable, parse("union(seq(union(pt(or), pt(nonor)); limit=nonor), pt(or))")),
        None,
    ));
    out.push(("blooming_cantor".into(), spec(Orientable, parse("cantor(or)")), None));
    out.push((
        "mixed_cantor".into(),
        spec(InfinitelyNonorientable, parse("union(cantor(or), cantor(nonor), pt(planar))")),
        None,
    ));
    out
}
