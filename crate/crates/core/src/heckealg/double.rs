//! Satake images of double cosets computed from single-coset Whittaker sums.

use super::{inv_satake, Group, HeckeElem};
use crate::error::Result;
use crate::exactnum::{pow_p, MPoly, Rational, SymCoef};
use num_bigint::BigInt;
use num_traits::Zero;

/// Complete homogeneous symmetric polynomial s_n in (e1, e2) coordinates of slots (i, i+1).
pub fn s_n(n: i64, slot: usize) -> SymCoef {
    if n < 0 {
        return MPoly::zero();
    }
    let e1 = MPoly::var(slot);
    let e2 = MPoly::var(slot + 1);
    let (mut prev, mut cur) = (MPoly::zero(), MPoly::one());
    for _ in 0..n {
        let next = e1.mul(&cur).sub(&e2.mul(&prev));
        prev = cur;
        cur = next;
    }
    cur
}

/// Sum of psi(beta p^-k) over beta in (O/p^i) (units only when `units`),
/// for a character of conductor O with residue field of size `qf`.
pub fn char_sum(qf: &BigInt, i: u32, k: u32, units: bool) -> Rational {
    let qpow = |n: u32| Rational::from_integer(qf.pow(n));
    if k == 0 {
        return if units { qpow(i) - qpow(i - 1) } else { qpow(i) };
    }
    if units && k == 1 {
        return -qpow(i - 1);
    }
    Rational::zero()
}

/// Value of the normalized spherical Whittaker function at diag(p^i, p^j),
/// in symmetric coordinates of slots (slot, slot+1).
///
/// Inert: central character e2, W(diag(p^n,1)) = p^-n s_n.
/// Split, Hecke-normalized: central character e2/p, W(diag(p^n,1)) = p^-n s_n.
pub fn whittaker_torus(p: u64, i: i64, j: i64, split: bool, slot: usize) -> SymCoef {
    let n = i - j;
    if n < 0 {
        return MPoly::zero();
    }
    let omega = if split { MPoly::var(slot + 1).scale(&pow_p(p, -1)) } else { MPoly::var(slot + 1) };
    let central = if j >= 0 {
        omega.pow(j as u32)
    } else {
        omega.monomial_inverse().unwrap().pow((-j) as u32)
    };
    central.mul(&s_n(n, slot)).scale(&pow_p(p, -n))
}

/// Satake image of ch(K t(lambda, 0) K), summing W over its single cosets
/// [[p^i, beta], [0, p^(lambda-i)]].
pub fn double_coset_satake(p: u64, lambda: u32, split: bool, slot: usize) -> SymCoef {
    let qf = if split { BigInt::from(p) } else { BigInt::from(p * p) };
    let l = lambda as i64;
    if lambda == 0 {
        return MPoly::one();
    }
    // i = 0 is diag(1, p^lambda), where W vanishes.
    let mut total = MPoly::zero();
    for i in 1..=lambda {
        if 2 * i < lambda {
            continue;
        }
        let weight = char_sum(&qf, i, lambda - i, i < lambda);
        total = total.add(&whittaker_torus(p, i as i64, l - i as i64, split, slot).scale(&weight));
    }
    total
}

/// ch(K t(lambda, 0) K) as an element of the Hecke algebra (slots of pair `pair` for split).
pub fn double_coset_hecke(p: u64, lambda: u32, group: Group, pair: usize) -> Result<HeckeElem> {
    let split = group.is_split();
    let slot = 2 * pair;
    let sat = double_coset_satake(p, lambda, split, slot);
    inv_satake(&sat, group, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::q;
    use crate::heckealg::satake;

    #[test]
    fn hecke_operator_satake_images() {
        // inert T -> p(A+B)
        let t = double_coset_hecke(3, 1, Group::InertF, 0).unwrap();
        assert_eq!(t, HeckeElem::t(Group::InertF));
        // split T(p) -> u+v
        let t1 = double_coset_hecke(5, 1, Group::SplitPair, 0).unwrap();
        assert_eq!(t1, HeckeElem::t(Group::SplitPair));
    }

    #[test]
    fn t_p_squared_relation() {
        for p in [3u64, 5, 7] {
            for (group, qsz) in [(Group::SplitPair, p), (Group::InertF, p * p)] {
                let t = HeckeElem::t(group);
                let s = HeckeElem::s(group);
                let t2 = double_coset_hecke(p, 2, group, 0).unwrap();
                let expect = t.pow(2).sub(&s.scale(&q(qsz as i64 + 1)));
                assert_eq!(t2, expect, "p={p} {group:?}");
                assert_eq!(satake(&t2, p), double_coset_satake(p, 2, group.is_split(), 0));
            }
        }
    }
}
