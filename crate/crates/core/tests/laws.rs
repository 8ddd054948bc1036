use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use trasdim_core::gen;
use trasdim_core::setfamily::{Combinations, FinSet, SetFamily, TriState};
use trasdim_core::strategy::{strategy_from_family, CertificateLimits, CertificateStatus, Strategy as Play};
use trasdim_core::{NatMap, Ordinal};

fn family(ground: u32, members: &[u64]) -> SetFamily {
    let mask = (1u64 << ground) - 1;
    SetFamily::explicit(ground, members.iter().filter_map(|&b| FinSet::from_bits(b & mask))).unwrap()
}

fn arb_family() -> impl Strategy<Value = SetFamily> {
    (1u32..=6, prop::collection::vec(any::<u64>(), 0..14)).prop_map(|(g, m)| family(g, &m))
}

fn arb_inclusive() -> impl Strategy<Value = SetFamily> {
    arb_family().prop_map(|f| f.inclusive_closure().unwrap())
}

fn nat(o: Ordinal) -> u64 {
    o.as_natural().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn ord_less_than_matches_the_derived_families(f in arb_family(), a in 1u64..=4, p in 0usize..=3) {
        let direct = Combinations::new(f.ground().mask(), p).all(|bits| {
            let ord = match FinSet::from_bits(bits) {
                Some(s) => f.derive(s).unwrap().ord().unwrap(),
                None => f.ord().unwrap(),
            };
            ord < Ordinal::nat(a)
        });
        let r = f.ord_less_than(&Ordinal::nat(a), p).unwrap();
        prop_assert_eq!(r.verdict == TriState::Verified, direct);
    }

    #[test]
    fn injective_relabeling_keeps_ord(f in arb_family(), seed in any::<u64>()) {
        let phi = gen::random_injection(&mut ChaCha8Rng::seed_from_u64(seed), f.ground().size());
        let g = f.map_family(|a| phi[a as usize - 1]).unwrap();
        prop_assert_eq!(g.ord().unwrap(), f.ord().unwrap());
        prop_assert_eq!(f.map_family(|a| 2 * a).unwrap().ord().unwrap(), f.ord().unwrap());
    }

    #[test]
    fn chains_exist_exactly_up_to_ord(f in arb_inclusive()) {
        let ord = nat(f.ord().unwrap()) as usize;
        prop_assert!(f.chain_witness(ord).unwrap().is_some());
        prop_assert!(f.chain_witness(ord + 1).unwrap().is_none());
    }

    #[test]
    fn derive_of_a_union_is_iterated_derive(f in arb_family(), s in 1u64..64, t in 1u64..64) {
        let mask = f.ground().mask();
        let (s, t) = (s & mask, t & mask & !s);
        prop_assume!(s != 0 && t != 0);
        let (s, t) = (FinSet::from_bits(s).unwrap(), FinSet::from_bits(t).unwrap());
        prop_assert_eq!(f.derive(s).unwrap().derive(t).unwrap(), f.derive(s.union(t)).unwrap());
    }

    #[test]
    fn strategies_from_families_certify(f in arb_inclusive(), m in 0usize..=2) {
        let ground = f.ground().size();
        let found = (0..=ground as usize).find_map(|n| strategy_from_family(&f, m, n).unwrap());
        let s = found.expect("a finite ground always admits a bound");
        let r = s.check_certificate(&f, ground, CertificateLimits::default()).unwrap();
        prop_assert!(r.passed(), "{:?}", r.status);
    }

    #[test]
    fn counterexamples_are_genuine(f in arb_inclusive(), start in 1usize..=3, a in 0u32..=2, b in 0u32..=2) {
        prop_assume!(a + b > 0);
        let s = Play::uniform(start, vec![NatMap::Affine { a, b }]).unwrap();
        let ground = f.ground().size();
        let r = s.check_certificate(&f, ground, CertificateLimits::default()).unwrap();
        if let CertificateStatus::Counterexample { play } = r.status {
            prop_assert_eq!(play.len(), 2);
            prop_assert!(play[0].is_disjoint(play[1]));
            prop_assert_eq!(play[0].len(), start);
            prop_assert_eq!(play[1].len(), s.next_cardinality(&play[..1]).unwrap());
            prop_assert!(f.contains(play[0].union(play[1])));
        }
    }
}

#[test]
fn strategies_demanding_too_much_are_flagged_vacuous() {
    let f = SetFamily::all_up_to(4, 4).unwrap();
    let s = Play::uniform(2, vec![NatMap::constant(5)]).unwrap();
    let r = s.check_certificate(&f, 4, CertificateLimits::default()).unwrap();
    assert!(r.all_vacuous);
    assert_eq!(r.plays_examined, 0);
    assert_eq!(r.vacuous_plays, 6);
}

#[test]
fn oracle_bounds_grow_with_truncation() {
    use trasdim_core::setfamily::Oracle;
    let mut last = 0;
    for t in 2..=14 {
        let f = SetFamily::oracle(t, Oracle::card_le_min()).unwrap();
        let lower = nat(f.ord_bounds().unwrap().lower);
        assert!(lower >= last);
        // inclusive, so Ord is the largest size k with k ≤ min σ and σ ⊆ {min σ..T}
        assert_eq!(lower, u64::from(t.div_ceil(2)));
        last = lower;
    }
}
