use asai_core::exactnum::{q, residue_u64, QuadCtx};
use asai_core::gstar::{gstar_factor, ip_embed, star_group};
use asai_core::heckealg::{Group, HeckeElem};
use asai_core::heckemod::{
    act_on_generator, chain_check, local_factor, random_integral_vector, trace_level, vector_integrality, GroupElem,
    Level, RandomSpec, TestVector,
};
use asai_core::padicgrp::Mat2;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn local_factor_inverts_the_action_on_the_generator(a in 0i32..=2, b in -1i32..=1, split in any::<bool>(), c in 0i32..=1) {
        let (group, e) = if split { (Group::SplitPair, [a, b, c, 0]) } else { (Group::InertF, [a, b, 0, 0]) };
        let h = HeckeElem::monomial(group, e, q(1));
        prop_assert_eq!(local_factor(&act_on_generator(3, &h).unwrap()).unwrap(), h);
    }
}

fn draws(spec: RandomSpec, n: usize, seed: u64) -> Vec<TestVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| random_integral_vector(&spec, &mut rng).unwrap()).collect()
}

#[test]
fn chain_identity_at_five() {
    for v in draws(RandomSpec { max_cell_level: 1, ..RandomSpec::new(5, Group::InertF, Level::K) }, 3, 51) {
        let c = chain_check(5, &local_factor(&v).unwrap()).unwrap();
        assert!(c.holds, "{} vs {}", c.lhs, c.rhs);
    }
}

#[test]
fn traced_center_is_divisible_by_p_minus_one() {
    for v in draws(RandomSpec::new(3, Group::InertF, Level::Kp), 5, 33) {
        let c = chain_check(3, &local_factor(&trace_level(&v).unwrap()).unwrap()).unwrap();
        assert!(c.holds && c.center_divisible, "{:?}", c.coefficients);
    }
}

fn right_translate(v: &TestVector, k: &GroupElem) -> TestVector {
    let mut out = v.clone();
    for t in &mut out.terms {
        t.g = t.g.mul(k).unwrap();
    }
    out
}

#[test]
fn embedding_preserves_integrality_and_intertwines_traces() {
    let p = 3;
    let ctx = QuadCtx::new(p).unwrap();
    for (i, group) in [Group::InertF, Group::SplitPair].into_iter().enumerate() {
        let star = star_group(group).unwrap();
        // K*/K*[p] through determinants: diag(u, 1), diagonally on split pairs.
        let reps: Vec<GroupElem> = (1..p as i64)
            .map(|u| {
                let d = Mat2::diag(ctx.int(u), ctx.one());
                if group.is_split() { GroupElem::Split(d.clone(), d) } else { GroupElem::Inert(d) }
            })
            .collect();
        let dets: std::collections::BTreeSet<u64> =
            reps.iter().map(|k| residue_u64(&k.components()[0].det().a, p)).collect();
        assert_eq!(dets.len(), reps.len(), "representatives hit distinct classes of K/K[p]");
        for v in draws(RandomSpec { balanced: true, ..RandomSpec::new(p, group, Level::Kp) }, 5, 70 + i as u64) {
            let delta_star = v.with_group(star);
            let embedded = ip_embed(&delta_star).unwrap();
            assert!(vector_integrality(&embedded).unwrap().0);
            let f = gstar_factor(&delta_star).unwrap();
            for k in &reps {
                let moved = ip_embed(&right_translate(&delta_star, k)).unwrap();
                assert_eq!(local_factor(&trace_level(&moved).unwrap()).unwrap(), f.trace_factor);
            }
        }
    }
}
