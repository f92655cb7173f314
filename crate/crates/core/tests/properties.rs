mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use surfcalc::endspace::{self, count_genus_ends, Multiplicity, Verdict};
use surfcalc::mcgword::random::{insert_relators, random_word};
use surfcalc::mcgword::{
    act_on_window, cohomology, conjugate_rewrite, free_reduce, phi, substitute_compact, CohomologyResult, Generator,
    Word,
};
use surfcalc::shiftbasis::{good_basis, EndRef, Rank};
use surfcalc::surface::{Genus, OrientClass, SurfaceSpec};

use common::{k_ends, random_expr, reassociate, spec};

const RANK: usize = 4;

fn word(seed: u64, len: usize) -> Word {
    random_word(&mut ChaCha8Rng::seed_from_u64(seed), RANK, len)
}

fn sides_laminar(a: &BTreeSet<&EndRef>, b: &BTreeSet<&EndRef>) -> bool {
    a.is_disjoint(b) || a.is_subset(b) || b.is_subset(a)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn phi_is_a_homomorphism(sa in any::<u64>(), sb in any::<u64>(), la in 0usize..20, lb in 0usize..20) {
        let (a, b) = (word(sa, la), word(sb, lb));
        let r = Rank::Finite(RANK as u64);
        prop_assert_eq!(phi(&a.concat(&b), r).unwrap(), phi(&a, r).unwrap() + phi(&b, r).unwrap());
        let inv = phi(&a.inverse(), r).unwrap() + phi(&a, r).unwrap();
        prop_assert!(inv.is_zero());
    }

    #[test]
    fn phi_survives_rewrites(seed in any::<u64>(), len in 0usize..20, relators in 0usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_word(&mut rng, RANK, len);
        let noisy = insert_relators(&mut rng, &w, relators, RANK);
        let r = Rank::CountablyInfinite;
        let v = phi(&w, r).unwrap();
        prop_assert_eq!(phi(&noisy, r).unwrap(), v.clone());
        prop_assert_eq!(phi(&free_reduce(&noisy), r).unwrap(), v.clone());
        prop_assert_eq!(phi(&conjugate_rewrite(&noisy), r).unwrap(), v);
    }

    #[test]
    fn shift_pairs_have_their_exponents(i in 0usize..8, j in 0usize..8, a in -5i64..=5, b in -5i64..=5) {
        prop_assume!(i != j);
        let power = |k: usize, e: i64| vec![Generator::shift(k, e.signum() as i8); e.unsigned_abs() as usize];
        let mut letters = power(i, a);
        letters.extend(power(j, b));
        let v = phi(&Word::new(letters), Rank::CountablyInfinite).unwrap();
        prop_assert_eq!((v.get(i), v.get(j)), (a, b));
        prop_assert_eq!(v.coords.len(), usize::from(a != 0) + usize::from(b != 0));
    }

    #[test]
    fn substitution_zeroes_one_coordinate(seed in any::<u64>(), len in 0usize..16, i in 0usize..RANK) {
        let w = word(seed, len);
        let window: BTreeSet<String> = (-4..=4).map(|k| format!("s{i}@{k}")).chain(["a".to_string()]).collect();
        let out = substitute_compact(&w, i, &window).unwrap();
        let r = Rank::Finite(RANK as u64);
        let (before, after) = (phi(&w, r).unwrap(), phi(&out, r).unwrap());
        prop_assert_eq!(after.get(i), 0);
        for j in (0..RANK).filter(|&j| j != i) {
            prop_assert_eq!(after.get(j), before.get(j));
        }
        prop_assert_eq!(act_on_window(&out, &window), act_on_window(&w, &window));
    }

    #[test]
    fn basis_sides_are_laminar(or in 0usize..4, nonor in 0usize..4, planar in 0usize..3, depth in 1usize..4) {
        prop_assume!(or + nonor >= 2);
        let orient = if nonor > 0 { OrientClass::InfinitelyNonorientable } else { OrientClass::Orientable };
        let basis = good_basis(&spec(orient, k_ends(or, nonor, planar)), depth).unwrap();
        let sides: Vec<BTreeSet<&EndRef>> = basis.curves.iter().map(|c| c.sides.0.iter().collect()).collect();
        let all: BTreeSet<&EndRef> = basis.ends.iter().collect();
        for (k, a) in sides.iter().enumerate() {
            let other: BTreeSet<&EndRef> = all.difference(a).copied().collect();
            prop_assert!(!a.is_empty() && !other.is_empty());
            for b in &sides[k + 1..] {
                prop_assert!(sides_laminar(a, b), "curves {} and {} cross", k, k + 1);
            }
        }
    }

    #[test]
    fn trivial_iff_at_most_one_genus_end(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ends = random_expr(&mut rng, 3);
        let labels = ends.labels();
        let orient = if labels.contains(endspace::EndLabel::Nonorientable) {
            OrientClass::InfinitelyNonorientable
        } else {
            OrientClass::Orientable
        };
        let genus = if labels.has_genus() { Genus::Infinite } else { Genus::Finite(4) };
        let s = SurfaceSpec::new(genus, orient, 0, ends.clone());
        let got = cohomology(&s, 3).unwrap();
        let few = count_genus_ends(&ends) <= Multiplicity::Finite(1);
        prop_assert_eq!(got == CohomologyResult::Trivial, few, "{}: {:?}", ends, got);
    }

    #[test]
    fn normalize_is_idempotent(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_expr(&mut rng, 4);
        let cf = endspace::normalize(&e).unwrap();
        prop_assert_eq!(endspace::normalize(&cf.to_expr()).unwrap(), cf);
        let f = reassociate(&mut rng, &e);
        prop_assert_eq!(endspace::equivalent(&e, &f), Verdict::Homeomorphic);
    }
}
