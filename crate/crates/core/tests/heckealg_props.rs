use asai_core::exactnum::qf;
use asai_core::heckealg::{inv_satake, invert_parameters, involution, iota_embed, satake, Group, HeckeElem};
use proptest::prelude::*;

fn elem(group: Group) -> impl Strategy<Value = HeckeElem> {
    let split = group.is_split();
    prop::collection::vec(((0i32..=2, -2i32..=2, 0i32..=2, -2i32..=2), -4i64..=4), 1..4).prop_map(move |terms| {
        terms.into_iter().fold(HeckeElem::zero(group), |acc, ((a, b, c, d), k)| {
            let e = if split { [a, b, c, d] } else { [a, b, 0, 0] };
            acc.add(&HeckeElem::monomial(group, e, qf(k, 1)))
        })
    })
}

fn balanced(group: Group) -> impl Strategy<Value = HeckeElem> {
    prop::collection::vec(((0i32..=2, -1i32..=1, 0i32..=2), 1i64..=3), 1..3).prop_map(move |terms| {
        terms.into_iter().fold(HeckeElem::zero(group), |acc, ((a, b, c), k)| {
            // a + 2b = c + 2d, with c forced to the parity of a.
            let c = c - (c - a).rem_euclid(2);
            let d = (a + 2 * b - c) / 2;
            acc.add(&HeckeElem::monomial(group, [a, b, c, d], qf(k, 1)))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn satake_is_a_ring_homomorphism(x in elem(Group::InertF), y in elem(Group::InertF), u in elem(Group::SplitPair), v in elem(Group::SplitPair)) {
        for p in [3u64, 5] {
            prop_assert_eq!(satake(&x.mul(&y), p), satake(&x, p).mul(&satake(&y, p)));
            prop_assert_eq!(satake(&x.add(&y), p), satake(&x, p).add(&satake(&y, p)));
            prop_assert_eq!(satake(&u.mul(&v), p), satake(&u, p).mul(&satake(&v, p)));
        }
    }

    #[test]
    fn inverse_satake_round_trips(x in elem(Group::InertF), u in elem(Group::SplitPair)) {
        for p in [3u64, 5] {
            prop_assert_eq!(inv_satake(&satake(&x, p), Group::InertF, p).unwrap(), x.clone());
            prop_assert_eq!(inv_satake(&satake(&u, p), Group::SplitPair, p).unwrap(), u.clone());
        }
    }

    #[test]
    fn involution_has_order_two_and_inverts_parameters(x in elem(Group::InertF), u in elem(Group::SplitPair), y in elem(Group::InertF)) {
        prop_assert_eq!(involution(&involution(&x)), x.clone());
        prop_assert_eq!(involution(&involution(&u)), u.clone());
        prop_assert_eq!(involution(&x.mul(&y)), involution(&y).mul(&involution(&x)));
        for p in [3u64, 5] {
            prop_assert_eq!(satake(&involution(&x), p), invert_parameters(&satake(&x, p), false, p));
            prop_assert_eq!(satake(&involution(&u), p), invert_parameters(&satake(&u, p), true, p));
        }
    }

    #[test]
    fn iota_is_multiplicative_and_injective(a in balanced(Group::GstarSplit), b in balanced(Group::GstarSplit)) {
        let (ia, ib) = (iota_embed(&a).unwrap(), iota_embed(&b).unwrap());
        prop_assert_eq!(iota_embed(&a.mul(&b)).unwrap(), ia.mul(&ib));
        prop_assert_eq!(ia == ib, a == b);
    }
}
