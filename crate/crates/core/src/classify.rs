//! Classification predicates for numerical semigroups.
//!
//! Each predicate is computed along two independent routes, one through
//! relative ideal arithmetic and one through direct gap scans, and the two
//! results are required to agree. A disagreement is a bug in this crate, not
//! a property of the input, so it panics rather than returning an error.

use crate::ideal::RelativeIdeal;
use crate::semigroup::{ClassificationFlags, NumericalSemigroup, SemigroupError};

/// omega inside M - M, equivalently: for every gap a and every minimal
/// generator n, F - a + n is a member.
pub fn is_almost_symmetric(s: &NumericalSemigroup) -> bool {
    let f = s.frobenius();
    let by_scan = s.gaps().all(|a| {
        s.minimal_generators()
            .iter()
            .all(|&n| s.contains(f - a as i64 + n as i64))
    });

    let omega = RelativeIdeal::canonical_ideal(s);
    let m = RelativeIdeal::maximal_ideal(s);
    let by_ideals = m
        .difference(&m)
        .and_then(|mm| mm.contains_ideal(&omega))
        .unwrap();

    assert_eq!(
        by_scan, by_ideals,
        "almost-symmetry routes disagree on {s:?}"
    );
    by_scan
}

/// omega inside M - e, equivalently: F - a + e is a member for every gap a.
pub fn is_positioned(s: &NumericalSemigroup) -> bool {
    let f = s.frobenius();
    let e = s.multiplicity() as i64;
    let by_scan = s.gaps().all(|a| s.contains(f - a as i64 + e));

    let omega = RelativeIdeal::canonical_ideal(s);
    let shifted = RelativeIdeal::maximal_ideal(s).translate(-e);
    let by_ideals = shifted.contains_ideal(&omega).unwrap();

    assert_eq!(by_scan, by_ideals, "positioned routes disagree on {s:?}");
    by_scan
}

/// At most one member below the conductor, equivalently: every positive
/// integer below the conductor is a gap.
pub fn is_ordinary(s: &NumericalSemigroup) -> bool {
    let by_count = s.left_count() <= 1;
    let by_shape = (1..s.conductor()).all(|z| !s.contains(z as i64));
    assert_eq!(by_count, by_shape, "ordinary routes disagree on {s:?}");
    by_count
}

/// Membership in the extremal family: multiples of e below k*e together with
/// everything from k*e on, where k is the member count below the conductor.
/// Equivalent to c = e * n; both routes are checked.
pub fn is_lech_extremal(s: &NumericalSemigroup) -> (bool, Option<u64>) {
    let e = s.multiplicity();
    let n = s.left_count();
    let structural = NumericalSemigroup::lech_family(e, n).unwrap() == *s;
    let numeric = s.conductor() == e * n;
    assert_eq!(
        structural, numeric,
        "extremal-family routes disagree on {s:?}"
    );
    if structural {
        (true, Some(n))
    } else {
        (false, None)
    }
}

/// Smallest minimal generator g other than the multiplicity with
/// g + omega inside M. The full monoid has no generator besides its
/// multiplicity, so the question is ill-posed there.
pub fn wilf_generator(s: &NumericalSemigroup) -> Result<Option<u64>, SemigroupError> {
    if s.is_full_monoid() {
        return Err(SemigroupError::FullMonoid);
    }
    let f = s.frobenius();
    let omega = RelativeIdeal::canonical_ideal(s);
    let m = RelativeIdeal::maximal_ideal(s);
    for &g in &s.minimal_generators()[1..] {
        let by_scan = s.gaps().all(|a| s.contains(g as i64 + f - a as i64));
        let by_ideals = m.contains_ideal(&omega.translate(g as i64)).unwrap();
        assert_eq!(
            by_scan, by_ideals,
            "witness routes disagree on {s:?} at {g}"
        );
        if by_scan {
            return Ok(Some(g));
        }
    }
    Ok(None)
}

/// omega equals S, i.e. the gap count attains (F + 1) / 2.
pub fn is_symmetric(s: &NumericalSemigroup) -> bool {
    let by_ideals =
        RelativeIdeal::canonical_ideal(s) == RelativeIdeal::semigroup_ideal(s);
    let by_count = 2 * s.genus() == s.conductor();
    assert_eq!(by_ideals, by_count, "symmetry routes disagree on {s:?}");
    by_ideals
}

pub(crate) fn classification_flags(s: &NumericalSemigroup) -> ClassificationFlags {
    let (lech_extremal, _) = is_lech_extremal(s);
    let wilf_witness = wilf_generator(s).unwrap_or(None);
    ClassificationFlags {
        almost_symmetric: is_almost_symmetric(s),
        positioned: is_positioned(s),
        ordinary: is_ordinary(s),
        lech_extremal,
        wilf_generator: wilf_witness.is_some(),
        wilf_witness,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sg(gens: &[u64]) -> NumericalSemigroup {
        NumericalSemigroup::from_generators(gens).unwrap()
    }

    #[test]
    fn fixture_7_9_11_19_is_almost_symmetric_and_positioned() {
        let s = sg(&[7, 9, 11, 19]);
        assert!(is_almost_symmetric(&s));
        assert!(is_positioned(&s));
        assert!(!is_symmetric(&s));
        assert!(!is_ordinary(&s));
        let flags = s.invariants().flags.clone();
        assert!(flags.almost_symmetric && flags.positioned);
        assert!(!flags.lech_extremal);
    }

    #[test]
    fn fixture_7_9_11_13_has_witness_nine() {
        let s = sg(&[7, 9, 11, 13]);
        assert!(is_positioned(&s));
        assert!(!is_almost_symmetric(&s));
        assert_eq!(wilf_generator(&s).unwrap(), Some(9));
    }

    #[test]
    fn fixture_17_27_29_has_no_witness() {
        let s = sg(&[17, 27, 29]);
        assert!(is_positioned(&s));
        assert_eq!(wilf_generator(&s).unwrap(), None);
    }

    #[test]
    fn fixture_7_9_11_15_is_not_positioned() {
        let s = sg(&[7, 9, 11, 15]);
        assert!(!is_positioned(&s));
        assert!(!is_almost_symmetric(&s));
    }

    #[test]
    fn full_monoid_classification() {
        let n = NumericalSemigroup::full_monoid();
        assert!(is_almost_symmetric(&n));
        assert!(is_positioned(&n));
        assert!(is_ordinary(&n));
        assert!(is_symmetric(&n));
        assert_eq!(is_lech_extremal(&n), (true, Some(0)));
        assert_eq!(wilf_generator(&n), Err(SemigroupError::FullMonoid));
        let flags = n.invariants().flags.clone();
        assert!(!flags.wilf_generator);
        assert_eq!(flags.wilf_witness, None);
    }

    #[test]
    fn ordinary_semigroups_are_extremal_with_k_one() {
        let s = sg(&[5, 6, 7, 8, 9]);
        assert!(is_ordinary(&s));
        assert_eq!(is_lech_extremal(&s), (true, Some(1)));
        let t = sg(&[2, 3]);
        assert!(is_ordinary(&t));
        assert_eq!(is_lech_extremal(&t), (true, Some(1)));
    }

    #[test]
    fn deeper_extremal_family_member() {
        // Multiples of 3 below 6, then everything: <3,7,8>.
        let s = sg(&[3, 7, 8]);
        assert!(!is_ordinary(&s));
        assert_eq!(is_lech_extremal(&s), (true, Some(2)));
        // A non-member of the family.
        let t = sg(&[3, 5]);
        assert_eq!(is_lech_extremal(&t), (false, None));
    }

    #[test]
    fn symmetric_examples() {
        assert!(is_symmetric(&sg(&[2, 3])));
        assert!(is_symmetric(&sg(&[3, 5])));
        assert!(!is_symmetric(&sg(&[3, 5, 7])));
        // Symmetric implies almost symmetric.
        assert!(is_almost_symmetric(&sg(&[3, 5])));
    }

    #[test]
    fn implications_on_random_semigroups() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xc1a5_0001);
        for _ in 0..300 {
            let mut gens: Vec<u64> = (0..rng.gen_range(2..=5))
                .map(|_| rng.gen_range(2..=25))
                .collect();
            gens.push(gens[0] + 1);
            let s = NumericalSemigroup::from_generators(&gens).unwrap();
            let asym = is_almost_symmetric(&s);
            let pos = is_positioned(&s);
            let sym = is_symmetric(&s);
            let ord = is_ordinary(&s);
            let (lech, k) = is_lech_extremal(&s);
            if sym {
                assert!(asym, "symmetric but not almost symmetric: {s:?}");
            }
            if asym {
                assert!(pos, "almost symmetric but not positioned: {s:?}");
            }
            if ord {
                assert!(lech, "ordinary but not extremal: {s:?}");
            }
            if lech {
                assert_eq!(s.conductor(), s.multiplicity() * k.unwrap());
            }
        }
    }
}
