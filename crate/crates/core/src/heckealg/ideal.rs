//! Certificates of membership in the ideals <p-1, Q> and <(p-1)(1-S), Q>.

use super::{Group, HeckeElem};
use crate::error::{Error, Result};
use crate::exactnum::{q, residue, LaurentPoly, MPoly, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdealKind {
    /// <p - 1, Q>
    PMinusOne,
    /// <(p - 1)(1 - S), Q>
    PMinusOneTimesOneMinusS,
}

/// P = gen1 * U + Q * V, where gen1 is p-1 or (p-1)(1-S).
#[derive(Debug, Clone, PartialEq)]
pub struct IdealCert {
    pub target: HeckeElem,
    pub kind: IdealKind,
    pub gen1: HeckeElem,
    pub q: HeckeElem,
    pub u: HeckeElem,
    pub v: HeckeElem,
    pub verified: bool,
}

impl IdealCert {
    pub fn reexpand(&self) -> HeckeElem {
        self.gen1.mul(&self.u).add(&self.q.mul(&self.v))
    }
}

/// Reduce Z[1/p] coefficients modulo m = p - 1 (where p is invertible and equal to 1).
fn reduce_mod(poly: &MPoly, m: &BigInt) -> Result<MPoly> {
    let mut out = MPoly::zero();
    for (e, c) in poly.terms() {
        let r = residue(c, m);
        out.add_term(*e, &Rational::from_integer(r));
    }
    Ok(out)
}

fn mod_coeffs(poly: &MPoly, m: &BigInt) -> MPoly {
    poly.map_coeffs(|c| Rational::from_integer(c.numer().mod_floor(m)))
}

fn top_degree(poly: &MPoly, slot: usize) -> Option<i32> {
    poly.exp_range(slot).map(|(_, hi)| hi)
}

/// Division by Q over (Z/m)[vars^{+-}] with `slot` as principal variable.
fn divide_mod(p_bar: &MPoly, q_bar: &MPoly, m: &BigInt, slot: usize) -> Result<(MPoly, MPoly)> {
    let d = top_degree(q_bar, slot).ok_or_else(|| Error::Input("zero divisor".into()))?;
    let lead: Vec<_> = q_bar.terms().filter(|(e, _)| e[slot] == d).collect();
    if lead.len() != 1 {
        return Err(Error::Input(format!("leading coefficient of {q_bar} in slot {slot} is not a monomial")));
    }
    let (lead_e, lead_c) = (*lead[0].0, lead[0].1.clone());
    let lead_inv = crate::exactnum::mod_inverse(lead_c.numer(), m)
        .ok_or_else(|| Error::Input("leading coefficient is not a unit modulo p-1".into()))?;
    let mut rest = p_bar.clone();
    let mut quot = MPoly::zero();
    while let Some(top) = top_degree(&rest, slot) {
        if top < d {
            break;
        }
        let tops: Vec<_> = rest.terms().filter(|(e, _)| e[slot] == top).map(|(e, c)| (*e, c.clone())).collect();
        for (e, c) in tops {
            let qe = [e[0] - lead_e[0], e[1] - lead_e[1], e[2] - lead_e[2], e[3] - lead_e[3]];
            let qc = Rational::from_integer((c.numer() * &lead_inv).mod_floor(m));
            let term = MPoly::monomial(qe, qc);
            quot = quot.add(&term);
            rest = mod_coeffs(&rest.sub(&term.mul(q_bar)), m);
        }
    }
    Ok((quot, rest))
}

fn lead_is_monomial(poly: &MPoly, slot: usize) -> bool {
    top_degree(poly, slot).is_some_and(|d| poly.terms().filter(|(e, _)| e[slot] == d).count() == 1)
}

/// w = (1 - S) v modulo m: each group of terms sharing the non-S exponents must
/// sum to 0 mod m; the sum is moved off one term and the rest divides exactly.
fn divide_one_minus_s_mod(w: &MPoly, m: &BigInt) -> Option<MPoly> {
    let mut sums: std::collections::BTreeMap<[i32; 4], ([i32; 4], BigInt)> = Default::default();
    for (e, c) in w.terms() {
        let entry = sums.entry([e[0], 0, e[2], e[3]]).or_insert((*e, BigInt::from(0)));
        entry.1 += c.numer();
    }
    let mut adjusted = w.clone();
    for (e, s) in sums.values() {
        if !(s % m).is_zero() {
            return None;
        }
        adjusted.add_term(*e, &-Rational::from_integer(s.clone()));
    }
    let v = divide_one_minus_s(&HeckeElem::new(Group::InertF, adjusted))?;
    Some(mod_coeffs(&v.poly, m))
}

fn principal_slot(_group: Group) -> usize {
    0
}

/// Certificate for P in <p-1, Q>.
fn cert_p_minus_one(p: u64, target: &HeckeElem, qq: &HeckeElem) -> Result<(HeckeElem, HeckeElem)> {
    let group = target.group;
    let m = BigInt::from(p - 1);
    let pm1 = q(p as i64 - 1);
    if m.is_one() {
        unreachable!("p is odd");
    }
    let p_bar = reduce_mod(&target.poly, &m)?;
    // Q = (1 - S)^k Q1 with Q1 of unit leading coefficient in T.
    let mut q1 = qq.clone();
    let mut k = 0;
    while !lead_is_monomial(&reduce_mod(&q1.poly, &m)?, principal_slot(group)) {
        q1 = divide_one_minus_s(&q1)
            .ok_or_else(|| Error::Input(format!("leading coefficient of {qq} is not a unit modulo p-1")))?;
        k += 1;
    }
    let q_bar = reduce_mod(&q1.poly, &m)?;
    let (mut w, rem) = divide_mod(&p_bar, &q_bar, &m, principal_slot(group))?;
    if !rem.is_zero() {
        return Err(Error::NotMember(rem.render(group.slot_names())));
    }
    for _ in 0..k {
        w = divide_one_minus_s_mod(&w, &m).ok_or_else(|| {
            Error::NotMember(format!("quotient {} is not divisible by 1 - S modulo p-1", w.render(group.slot_names())))
        })?;
    }
    let v = HeckeElem::new(group, w);
    let diff = target.sub(&qq.mul(&v));
    let u = diff.scale(&pm1.recip());
    if !u.is_integral(p) {
        return Err(Error::Internal("cofactor U is not in Z[1/p]".into()));
    }
    Ok((u, v))
}

/// Exact division by (1 - S) (slot 1), treating S as the variable.
fn divide_one_minus_s(h: &HeckeElem) -> Option<HeckeElem> {
    // Group by the exponents of the other slots.
    let mut by_rest: std::collections::BTreeMap<[i32; 4], LaurentPoly<Rational>> = Default::default();
    for (e, c) in h.poly.terms() {
        let key = [e[0], 0, e[2], e[3]];
        by_rest.entry(key).or_default().add_term(e[1] as i64, c);
    }
    let divisor = LaurentPoly::from_coeffs(vec![q(1), q(-1)]);
    let mut out = MPoly::zero();
    for (key, poly) in by_rest {
        let quot = poly.exact_div(&divisor).ok()?;
        for (k, c) in quot.terms() {
            out.add_term([key[0], *k as i32, key[2], key[3]], c);
        }
    }
    Some(HeckeElem::new(h.group, out))
}

/// Certificate of P in the given ideal, verified by re-expansion.
pub fn ideal_cert(p: u64, target: &HeckeElem, kind: IdealKind, qq: &HeckeElem) -> Result<IdealCert> {
    if !target.is_integral(p) || !qq.is_integral(p) {
        return Err(Error::Input("ideal_cert needs Z[1/p] coefficients".into()));
    }
    let group = target.group;
    let pm1 = HeckeElem::constant(group, q(p as i64 - 1));
    let (gen1, u, v) = match kind {
        IdealKind::PMinusOne => {
            let (u, v) = cert_p_minus_one(p, target, qq)?;
            (pm1, u, v)
        }
        IdealKind::PMinusOneTimesOneMinusS => {
            let one_minus_s = HeckeElem::one(group).sub(&HeckeElem::s(group));
            let q1 = divide_one_minus_s(qq)
                .ok_or_else(|| Error::Input("second generator is not divisible by 1 - S".into()))?;
            let p1 = divide_one_minus_s(target)
                .ok_or_else(|| Error::NotMember(format!("{target} is not divisible by 1 - S")))?;
            let (u, v) = cert_p_minus_one(p, &p1, &q1)?;
            (pm1.mul(&one_minus_s), u, v)
        }
    };
    let mut cert = IdealCert { target: target.clone(), kind, gen1, q: qq.clone(), u, v, verified: false };
    if cert.reexpand() != *target {
        return Err(Error::Internal("certificate does not re-expand".into()));
    }
    cert.verified = true;
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heckealg::{euler_poly, EulerKind};

    fn asai_prime(p: u64) -> HeckeElem {
        euler_poly(EulerKind::AsaiInert, p).unwrap().at_one_involuted()
    }

    fn standard_prime(p: u64) -> HeckeElem {
        euler_poly(EulerKind::StandardF, p).unwrap().at_one_involuted()
    }

    #[test]
    fn trivial_certificates() {
        let p = 5;
        let g = Group::InertF;
        let qq = standard_prime(p);
        let c = ideal_cert(p, &qq, IdealKind::PMinusOne, &qq).unwrap();
        assert!(c.u.is_zero() && c.v == HeckeElem::one(g));
        let s3 = HeckeElem::monomial(g, [0, -3, 0, 0], q(4));
        let c = ideal_cert(p, &s3, IdealKind::PMinusOne, &qq).unwrap();
        assert_eq!(c.u, HeckeElem::monomial(g, [0, -3, 0, 0], q(1)));
        assert!(c.v.is_zero());
    }

    #[test]
    fn recovers_constructed_cofactors() {
        let p = 3;
        let g = Group::InertF;
        let qq = standard_prime(p);
        let target = HeckeElem::t(g).scale(&q(2)).add(&qq.mul(&HeckeElem::s(g)));
        let c = ideal_cert(p, &target, IdealKind::PMinusOne, &qq).unwrap();
        assert!(c.verified);
        assert_eq!(c.reexpand(), target);
    }

    #[test]
    fn asai_generator_in_its_ideal() {
        for p in [3u64, 5, 7] {
            let qa = asai_prime(p);
            let c = ideal_cert(p, &qa, IdealKind::PMinusOneTimesOneMinusS, &qa).unwrap();
            assert!(c.verified);
            assert!(c.u.is_zero());
        }
    }

    #[test]
    fn non_member_reported() {
        let p = 7;
        let qq = standard_prime(p);
        let target = HeckeElem::one(Group::InertF);
        assert!(matches!(ideal_cert(p, &target, IdealKind::PMinusOne, &qq), Err(Error::NotMember(_))));
    }
}
