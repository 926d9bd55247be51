use asai_core::exactnum::{pow_p, q, QuadCtx, QuadElem};
use asai_core::padicgrp::*;
use proptest::prelude::*;

fn entry(ctx: &QuadCtx, v: i64, x: i64, y: i64) -> QuadElem {
    ctx.elem(q(x), q(y)).scale(&pow_p(ctx.p, v))
}

fn matrix_strategy(vlo: i64, vhi: i64) -> impl Strategy<Value = [(i64, i64, i64); 4]> {
    let e = (vlo..=vhi, -4i64..=4, -4i64..=4);
    [e.clone(), e.clone(), e.clone(), e]
}

fn build(ctx: &QuadCtx, e: &[(i64, i64, i64); 4]) -> Mat2 {
    let m: Vec<QuadElem> = e.iter().map(|&(v, x, y)| entry(ctx, v, x, y)).collect();
    Mat2::new(m[0].clone(), m[1].clone(), m[2].clone(), m[3].clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]
    #[test]
    fn iwasawa_round_trip(e in matrix_strategy(-3, 3)) {
        let ctx = QuadCtx::new(3).unwrap();
        let g = build(&ctx, &e);
        prop_assume!(!g.det().is_zero());
        let parts = iwasawa(&ctx, &g).unwrap();
        prop_assert!(parts.kappa.in_maximal_compact(3));
        prop_assert_eq!(parts.reassemble(&ctx), g);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]
    #[test]
    fn pgk_label_is_unique(e in matrix_strategy(-2, 2)) {
        let ctx = QuadCtx::new(3).unwrap();
        let g = build(&ctx, &e);
        prop_assume!(!g.det().is_zero());
        let w = pgk_label(&ctx, &g).unwrap();
        prop_assert!(w.verify(&ctx, &g));
        let Label::Pgk { a, b } = w.label else { panic!() };
        prop_assert_eq!(pgk_all_labels(&ctx, &g).unwrap(), vec![(a, b)]);
    }

    #[test]
    fn gen_cartan_label_is_unique(e in matrix_strategy(-2, 2)) {
        let ctx = QuadCtx::new(3).unwrap();
        let g = build(&ctx, &e);
        prop_assume!(!g.det().is_zero());
        let w = gen_cartan_label(&ctx, &g).unwrap();
        prop_assert!(w.verify(&ctx, &g));
        let Label::Cell { nu2, nu1, nu } = w.label else { panic!() };
        prop_assert!(nu2 <= nu1 && nu >= 0);
        prop_assert_eq!(-(nu2 + nu1 + nu), g.det().val(3));
        prop_assert_eq!(gen_cartan_all_labels(&ctx, &g).unwrap(), vec![(nu2, nu1, nu)]);
    }
}
