//! Seeded random words and relator insertion.

use rand::seq::IndexedRandom;
use rand::Rng;

use super::{Generator, Word};

const PLAIN_IDS: [&str; 4] = ["a", "b", "q", "u"];

pub fn random_compact<R: Rng>(rng: &mut R, rank: usize) -> Generator {
    let size = rng.random_range(1..=3);
    let support: Vec<String> = (0..size)
        .map(|_| {
            if rank > 0 && rng.random_bool(0.6) {
                format!("s{}@{}", rng.random_range(0..rank), rng.random_range(-3..=3))
            } else {
                PLAIN_IDS.choose(rng).expect("nonempty").to_string()
            }
        })
        .collect();
    let g = Generator::compact(support);
    if rng.random_bool(0.3) {
        g.inverse()
    } else {
        g
    }
}

pub fn random_letter<R: Rng>(rng: &mut R, rank: usize) -> Generator {
    if rank > 0 && rng.random_bool(0.5) {
        Generator::shift(rng.random_range(0..rank), if rng.random_bool(0.5) { 1 } else { -1 })
    } else {
        random_compact(rng, rank)
    }
}

pub fn random_word<R: Rng>(rng: &mut R, rank: usize, len: usize) -> Word {
    Word::new((0..len).map(|_| random_letter(rng, rank)).collect())
}

/// A word trivial in the group: `g g⁻¹`, or a shift conjugate of a compact
/// letter followed by the inverse of its translate.
pub fn random_relator<R: Rng>(rng: &mut R, rank: usize) -> Word {
    if rank == 0 || rng.random_bool(0.3) {
        let g = random_letter(rng, rank);
        return Word::new(vec![g.clone(), g.inverse()]);
    }
    let i = rng.random_range(0..rank);
    let e: i8 = if rng.random_bool(0.5) { 1 } else { -1 };
    if rng.random_bool(0.3) {
        return Word::new(vec![Generator::shift(i, e), Generator::shift(i, -e)]);
    }
    let c = random_compact(rng, rank);
    let moved = c.translated(i, e.into());
    Word::new(vec![Generator::shift(i, e), c, Generator::shift(i, -e), moved.inverse()])
}

/// Insert `count` relators at random positions.
pub fn insert_relators<R: Rng>(rng: &mut R, w: &Word, count: usize, rank: usize) -> Word {
    let mut letters = w.letters.clone();
    for _ in 0..count {
        let at = rng.random_range(0..=letters.len());
        let r = random_relator(rng, rank);
        letters.splice(at..at, r.letters);
    }
    Word::new(letters)
}
