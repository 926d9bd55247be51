//! The functions ch(P t_a n_b K) attached to a local factor, their Phi_c weights,
//! and the consistency check against the Whittaker-side values Lambda(a, b).

use super::local::single_cosets;
use crate::error::{Error, Result};
use crate::exactnum::{in_z_1_over_p, q, MPoly, QuadCtx, Rational, SymCoef};
use crate::heckealg::{involution, satake, Group, HeckeElem};
use crate::padicgrp::{mirabolic_member, pgk_bounds, pgk_rep, Mat2};
use crate::whitzeta::lambda_form;
use num_traits::Zero;
use serde::Serialize;
use std::collections::BTreeMap;

/// Coefficients on ch(P t_a n_b K) of ch(PK) * h, keyed by (a, b).
pub type PgkCoefficients = BTreeMap<(i64, i64), Rational>;

/// ch(PK) * h: the value at t_a n_b is the sum of the coefficients of the single
/// cosets z K of h with t_a n_b z in PK.
pub fn xi_chain(p: u64, factor: &HeckeElem) -> Result<PgkCoefficients> {
    if factor.group != Group::InertF {
        return Err(Error::Input("the P t_a n_b K basis is implemented for GL2(F)".into()));
    }
    let ctx = QuadCtx::new(p)?;
    let id = Mat2::identity(&ctx);
    let mut out = PgkCoefficients::new();
    for (z, c) in single_cosets(p, factor)? {
        let z = match z {
            super::GroupElem::Inert(m) => m,
            super::GroupElem::Split(..) => unreachable!("inert group"),
        };
        let ((alo, ahi), bmax) = pgk_bounds(&ctx, &z.inv()?)?;
        for a in alo..=ahi {
            for b in 0..=bmax {
                let x = pgk_rep(&ctx, a, b).mul(&z);
                if mirabolic_member(&ctx, &x, &id)?.is_some() {
                    *out.entry((a, b)).or_insert_with(Rational::zero) += &c;
                }
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    Ok(out)
}

/// vol(P(Z_p) cap n_b K n_b^-1)^-1, counted in P(Z/p^M) for M = max(1, b).
pub fn phi_c_weight(p: u64, b: u32) -> Result<Rational> {
    let ctx = QuadCtx::new(p)?;
    let m = b.max(1);
    let pm = p.pow(m) as i64;
    let n = Mat2::n_upper(&ctx, ctx.alpha().scale(&crate::exactnum::pow_p(p, -(b as i64))));
    let ni = n.inv()?;
    let (mut total, mut inside) = (0u64, 0u64);
    for x in 0..pm {
        if x % p as i64 == 0 {
            continue;
        }
        for y in 0..pm {
            total += 1;
            let elem = Mat2::from_rationals(&ctx, q(x), q(y), q(0), q(1));
            if ni.mul(&elem).mul(&n).is_integral(p) {
                inside += 1;
            }
        }
    }
    Ok(Rational::new(total.into(), inside.into()))
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainCheck {
    pub coefficients: Vec<ChainEntry>,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
    /// Coefficients at b = 0 all lie in (p - 1) Z[1/p].
    pub center_divisible: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainEntry {
    pub a: i64,
    pub b: i64,
    #[serde(with = "crate::exactnum::rational_str")]
    pub coeff: Rational,
    #[serde(with = "crate::exactnum::rational_str")]
    pub weight: Rational,
}

/// Sum of coeff * weight * Lambda(a, b) against the Satake image of P'(1 - S).
pub fn chain_check(p: u64, factor: &HeckeElem) -> Result<ChainCheck> {
    let coeffs = xi_chain(p, factor)?;
    let mut lhs = MPoly::zero();
    let mut entries = vec![];
    let mut weights: BTreeMap<i64, Rational> = BTreeMap::new();
    for (&(a, b), c) in &coeffs {
        let w = match weights.get(&b) {
            Some(w) => w.clone(),
            None => {
                let w = phi_c_weight(p, b as u32)?;
                weights.insert(b, w.clone());
                w
            }
        };
        lhs = lhs.add(&lambda_form(p, a, b as u32)?.scale(&(c * &w)));
        entries.push(ChainEntry { a, b, coeff: c.clone(), weight: w });
    }
    let g = factor.group;
    let rhs_h = involution(factor).mul(&HeckeElem::one(g).sub(&HeckeElem::s(g)));
    let rhs: SymCoef = satake(&rhs_h, p);
    let pm1 = q(p as i64 - 1);
    let center_divisible = coeffs.iter().filter(|((_, b), _)| *b == 0).all(|(_, c)| in_z_1_over_p(&(c / &pm1), p));
    let names = ["e1", "e2", "_", "_"];
    Ok(ChainCheck {
        coefficients: entries,
        lhs: lhs.render(names),
        rhs: rhs.render(names),
        holds: lhs == rhs,
        center_divisible,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heckealg::{euler_poly, EulerKind};

    #[test]
    fn weights_by_counting() {
        for p in [3u64, 5] {
            assert_eq!(phi_c_weight(p, 0).unwrap(), q(1));
            for b in 1..=3u32 {
                let expect = q((p as i64 - 1) * (p as i64).pow(b - 1));
                assert_eq!(phi_c_weight(p, b).unwrap(), expect, "p={p} b={b}");
            }
        }
    }

    #[test]
    fn generator_lands_on_the_identity_coset() {
        let c = xi_chain(3, &HeckeElem::one(Group::InertF)).unwrap();
        assert_eq!(c.into_iter().collect::<Vec<_>>(), vec![((0, 0), q(1))]);
    }

    #[test]
    fn central_operator_shifts_a() {
        let c = xi_chain(3, &HeckeElem::s(Group::InertF)).unwrap();
        assert_eq!(c.into_iter().collect::<Vec<_>>(), vec![((-1, 0), q(1))]);
    }

    #[test]
    fn chain_holds_on_generators_and_euler_factors() {
        let p = 3;
        let g = Group::InertF;
        let asai = euler_poly(EulerKind::AsaiInert, p).unwrap().at_one_involuted();
        for h in [HeckeElem::one(g), HeckeElem::t(g), HeckeElem::s(g), asai] {
            let c = chain_check(p, &h).unwrap();
            assert!(c.holds, "{h}: {} vs {}", c.lhs, c.rhs);
        }
    }
}
