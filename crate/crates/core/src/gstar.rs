//! The subgroup G* of pairs (split) or matrices (inert) with determinant in Q_p^x
//! and equal determinants: its test vectors, Hecke algebra image, local factors
//! and the Frobenius grading by v_p(det).

use crate::error::{Error, Result};
use crate::exactnum::{QuadCtx, Rational};
use crate::heckealg::{euler_poly, ideal_cert, involution, iota_embed, EulerKind, Group, HeckeElem, IdealCert, IdealKind};
use crate::heckemod::{delta1, local_factor, trace_level, vector_integrality, Delta1Case, GroupElem, Level, TestVector};
use crate::padicgrp::{cartan, Mat2};
use serde::Serialize;
use std::collections::BTreeMap;

/// An element of G*(Q_p), checked on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct GStarElem(GroupElem);

impl GStarElem {
    pub fn new(g: GroupElem) -> Result<Self> {
        match &g {
            GroupElem::Split(a, b) => {
                if a.det() != b.det() {
                    return Err(Error::Input("G* pair with unequal determinants".into()));
                }
            }
            GroupElem::Inert(m) => {
                if !m.det().is_rational() {
                    return Err(Error::Input("G* element with determinant outside Q_p".into()));
                }
            }
        }
        Ok(GStarElem(g))
    }

    pub fn inner(&self) -> &GroupElem {
        &self.0
    }
}

/// The G* Hecke algebra tag for an ambient group, and back.
pub fn star_group(ambient: Group) -> Result<Group> {
    match ambient {
        Group::InertF => Ok(Group::GstarInert),
        Group::SplitPair => Ok(Group::GstarSplit),
        g => Err(Error::Input(format!("{g:?} has no G* counterpart"))),
    }
}

pub fn ambient_group(star: Group) -> Result<Group> {
    match star {
        Group::GstarInert => Ok(Group::InertF),
        Group::GstarSplit => Ok(Group::SplitPair),
        g => Err(Error::Input(format!("{g:?} is not a G* group"))),
    }
}

/// The vector phi (x) ch(g K*) or phi (x) ch(g K*[p]) viewed on the full group.
pub fn ip_embed(delta_star: &TestVector) -> Result<TestVector> {
    let ambient = ambient_group(delta_star.group)?;
    for t in &delta_star.terms {
        GStarElem::new(t.g.clone())?;
    }
    let v = delta_star.with_group(ambient);
    v.validate()?;
    Ok(v)
}

pub fn generator_star(p: u64, star: Group) -> Result<TestVector> {
    Ok(TestVector::generator(p, ambient_group(star)?)?.with_group(star))
}

pub fn delta1_star(p: u64, case: Delta1Case) -> Result<TestVector> {
    let v = delta1(p, case)?;
    Ok(v.with_group(star_group(v.group)?))
}

/// Solve iota(P*) = P for P* in the image of the G* algebra.
pub fn solve_iota(factor: &HeckeElem) -> Result<HeckeElem> {
    let star = star_group(factor.group)?;
    if star == Group::GstarSplit && !factor.is_balanced() {
        let stray = factor.sub(&factor.balanced_part());
        return Err(Error::NotInImage(format!("monomials with unequal determinant degree: {stray}")));
    }
    let p_star = factor.with_group(star);
    if iota_embed(&p_star)? != *factor {
        return Err(Error::Internal("re-embedding differs".into()));
    }
    Ok(p_star)
}

pub fn asai_star_prime(p: u64, star: Group) -> Result<HeckeElem> {
    let kind = match star {
        Group::GstarSplit => EulerKind::AsaiStarSplit,
        Group::GstarInert => EulerKind::AsaiStarInert,
        g => return Err(Error::Input(format!("{g:?} is not a G* group"))),
    };
    Ok(euler_poly(kind, p)?.at_one_involuted())
}

#[derive(Debug, Clone)]
pub struct GStarFactor {
    /// Local factor of the trace on the full group.
    pub trace_factor: HeckeElem,
    pub p_star: HeckeElem,
    pub certificate: IdealCert,
    /// The certificate after grading, checked as an identity in H[Frob^{+-1}].
    pub graded_certificate_ok: bool,
}

impl GStarFactor {
    pub fn verified(&self) -> bool {
        self.certificate.verified && self.graded_certificate_ok
    }

    pub fn to_json(&self) -> serde_json::Value {
        let c = &self.certificate;
        serde_json::json!({
            "trace_factor": self.trace_factor.render(),
            "p_star": self.p_star.render(),
            "certificate": {
                "kind": c.kind,
                "generators": [c.gen1.render(), c.q.render()],
                "u": c.u.render(),
                "v": c.v.render(),
                "verified": c.verified,
            },
            "graded": frob_grade(&self.p_star).to_json(),
            "graded_involuted": frob_grade(&involution(&self.p_star)).to_json(),
            "graded_certificate_ok": self.graded_certificate_ok,
        })
    }
}

/// P* with iota(P*) = P_Tr(delta) and its membership in <p - 1, P'_As*(1)>.
pub fn gstar_factor(delta_star: &TestVector) -> Result<GStarFactor> {
    let p = delta_star.p;
    if delta_star.level != Level::Kp {
        return Err(Error::Input("gstar_factor takes a vector at level K*[p]".into()));
    }
    let delta = ip_embed(delta_star)?;
    if !vector_integrality(&delta)?.0 {
        return Err(Error::Input("the vector is not integral at K*[p]".into()));
    }
    let trace_factor = local_factor(&trace_level(&delta)?)?;
    let p_star = solve_iota(&trace_factor)?;
    let qq = asai_star_prime(p, p_star.group)?;
    let mut cert = ideal_cert(p, &p_star, IdealKind::PMinusOne, &qq)?;
    if p_star.group == Group::GstarSplit {
        // The grading by determinant degree is multiplicative and p - 1 has degree 0.
        cert.u = cert.u.balanced_part();
        cert.v = cert.v.balanced_part();
        cert.verified = cert.reexpand() == p_star;
        if !cert.verified {
            return Err(Error::Internal("balanced projection of the certificate does not re-expand".into()));
        }
    }
    let lhs = frob_grade(&p_star);
    let rhs = frob_grade(&cert.gen1).mul(&frob_grade(&cert.u)).add(&frob_grade(&cert.q).mul(&frob_grade(&cert.v)));
    let graded_certificate_ok = lhs == rhs;
    Ok(GStarFactor { trace_factor, p_star, certificate: cert, graded_certificate_ok })
}

/// A polynomial in Frob^{+-1} with Hecke coefficients.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GradedFactor {
    #[serde(skip)]
    pub group: Group,
    #[serde(skip)]
    pub by_degree: BTreeMap<i64, HeckeElem>,
}

impl GradedFactor {
    pub fn zero(group: Group) -> Self {
        GradedFactor { group, by_degree: BTreeMap::new() }
    }

    fn insert(&mut self, e: i64, h: HeckeElem) {
        let slot = self.by_degree.entry(e).or_insert_with(|| HeckeElem::zero(h.group));
        *slot = slot.add(&h);
        if slot.is_zero() {
            self.by_degree.remove(&e);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, h) in &o.by_degree {
            out.insert(*e, h.clone());
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.group);
        for (a, x) in &self.by_degree {
            for (b, y) in &o.by_degree {
                out.insert(a + b, x.mul(y));
            }
        }
        out
    }

    /// Forget the grading by setting Frob = 1.
    pub fn at_frob_one(&self) -> HeckeElem {
        self.by_degree.values().fold(HeckeElem::zero(self.group), |acc, h| acc.add(h))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.by_degree
                .iter()
                .map(|(e, h)| serde_json::json!({"hecke": h.render(), "frob": e}))
                .collect(),
        )
    }
}

/// v_p(det) of the double coset behind a monomial: T has degree 1, S degree 2,
/// read off the first factor (both factors agree on G*).
pub fn det_degree(e: &[i32; 4]) -> i64 {
    e[0] as i64 + 2 * e[1] as i64
}

pub fn frob_grade(h: &HeckeElem) -> GradedFactor {
    let mut out = GradedFactor::zero(h.group);
    for (e, c) in h.poly.terms() {
        out.insert(det_degree(e), HeckeElem::monomial(h.group, *e, c.clone()));
    }
    out
}

/// P'(Frob^{-1}) built directly from the involuted coefficients of the Euler factor.
pub fn euler_at_inverse_frob(p: u64, star: Group) -> Result<GradedFactor> {
    let kind = if star == Group::GstarSplit { EulerKind::AsaiStarSplit } else { EulerKind::AsaiStarInert };
    let e = euler_poly(kind, p)?;
    let mut out = GradedFactor::zero(star);
    for (k, c) in e.coeffs.iter().enumerate() {
        out.insert(-(k as i64), involution(c));
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct StarCartanLabel {
    pub first: (i64, i64),
    /// Absent for the inert group.
    pub second: Option<(i64, i64)>,
}

fn unit_diag(ctx: &QuadCtx, u: crate::exactnum::QuadElem) -> Mat2 {
    Mat2::diag(u, ctx.one())
}

/// G*(Z_p) t G*(Z_p) label of g, with the compact factors adjusted to satisfy
/// the G*(Z_p) determinant condition and the product checked exactly.
pub fn star_cartan(ctx: &QuadCtx, g: &GStarElem) -> Result<StarCartanLabel> {
    let p = ctx.p;
    let in_star_compact = |ks: &[&Mat2]| -> Result<bool> {
        let mut ok = ks.iter().all(|k| k.in_maximal_compact(p));
        if ks.len() == 2 {
            ok &= ks[0].det() == ks[1].det();
        } else {
            ok &= ks[0].det().is_rational();
        }
        Ok(ok)
    };
    match g.inner() {
        GroupElem::Inert(m) => {
            let c = cartan(ctx, m)?;
            let d = c.k1.det();
            let k1 = c.k1.mul(&unit_diag(ctx, d.inv()?));
            let k2 = unit_diag(ctx, d).mul(&c.k2);
            let t = Mat2::t(ctx, c.l1, c.l2);
            if k1.mul(&t).mul(&k2) != *m || !in_star_compact(&[&k1])? || !in_star_compact(&[&k2])? {
                return Err(Error::Internal("G* Cartan witness failed".into()));
            }
            Ok(StarCartanLabel { first: (c.l1, c.l2), second: None })
        }
        GroupElem::Split(a, b) => {
            let ca = cartan(ctx, a)?;
            let cb = cartan(ctx, b)?;
            if ca.l1 + ca.l2 != cb.l1 + cb.l2 {
                return Err(Error::Internal("determinant degrees differ on G*".into()));
            }
            let u = cb.k1.det().div(&ca.k1.det())?;
            let ka1 = ca.k1.mul(&unit_diag(ctx, u.clone()));
            let ka2 = unit_diag(ctx, u.inv()?).mul(&ca.k2);
            let ta = Mat2::t(ctx, ca.l1, ca.l2);
            let tb = Mat2::t(ctx, cb.l1, cb.l2);
            let ok = ka1.mul(&ta).mul(&ka2) == *a
                && cb.k1.mul(&tb).mul(&cb.k2) == *b
                && in_star_compact(&[&ka1, &cb.k1])?
                && in_star_compact(&[&ka2, &cb.k2])?;
            if !ok {
                return Err(Error::Internal("G* Cartan witness failed".into()));
            }
            Ok(StarCartanLabel { first: (ca.l1, ca.l2), second: Some((cb.l1, cb.l2)) })
        }
    }
}

/// Coefficient-free helper for tests: the rational determinant of a base matrix pair.
pub fn det_pair(g: &GroupElem) -> Vec<Rational> {
    g.components().iter().map(|m| m.det().a.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{pow_p, q};
    use crate::heckealg::gstar_gens;
    use crate::heckemod::{delta1_expected, random_integral_vector, RandomSpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn embedding_examples() {
        let v = delta1_star(3, Delta1Case::Inert).unwrap();
        assert_eq!(ip_embed(&v).unwrap(), delta1(3, Delta1Case::Inert).unwrap());
        let g = generator_star(5, Group::GstarSplit).unwrap();
        assert_eq!(ip_embed(&g).unwrap(), TestVector::generator(5, Group::SplitPair).unwrap());
    }

    #[test]
    fn unequal_determinants_rejected() {
        let ctx = QuadCtx::new(3).unwrap();
        let g = GroupElem::Split(Mat2::t(&ctx, 1, 0), Mat2::identity(&ctx));
        assert!(GStarElem::new(g).is_err());
        let h = GroupElem::Inert(Mat2::diag(ctx.alpha(), ctx.one()));
        assert!(GStarElem::new(h).is_err());
    }

    #[test]
    fn unbalanced_factor_not_in_image() {
        let t1 = HeckeElem::var(Group::SplitPair, 0);
        assert!(matches!(solve_iota(&t1), Err(Error::NotInImage(_))));
    }

    #[test]
    fn delta1_star_factors() {
        for (p, case) in [(3, Delta1Case::Inert), (3, Delta1Case::Split)] {
            let f = gstar_factor(&delta1_star(p, case).unwrap()).unwrap();
            assert_eq!(f.trace_factor, delta1_expected(p, case).unwrap());
            assert_eq!(iota_embed(&f.p_star).unwrap(), f.trace_factor);
            assert!(f.verified());
        }
    }

    #[test]
    fn grading_examples() {
        let s = gstar_gens::s_star(true);
        assert_eq!(frob_grade(&s).by_degree.keys().copied().collect::<Vec<_>>(), vec![2]);
        let t = gstar_gens::t_star(false);
        assert_eq!(frob_grade(&t).by_degree.keys().copied().collect::<Vec<_>>(), vec![1]);
        let one = HeckeElem::one(Group::GstarInert);
        assert_eq!(frob_grade(&one).by_degree.keys().copied().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn grading_is_multiplicative() {
        let g = Group::GstarSplit;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let mut e = [0i32; 4];
            e[0] = rng.gen_range(0..3);
            e[1] = rng.gen_range(-2..3);
            e[2] = rng.gen_range(0..3);
            e[3] = (e[0] + 2 * e[1] - e[2]).div_euclid(2);
            let a = HeckeElem::monomial(g, e, q(2));
            let b = gstar_gens::t_star(true).mul(&gstar_gens::s_star(true).pow(2));
            assert_eq!(frob_grade(&a.mul(&b)), frob_grade(&a).mul(&frob_grade(&b)));
        }
    }

    #[test]
    fn involuted_euler_factor_grades_to_inverse_frobenius() {
        for star in [Group::GstarInert, Group::GstarSplit] {
            let graded = frob_grade(&asai_star_prime(5, star).unwrap());
            assert_eq!(graded, euler_at_inverse_frob(5, star).unwrap());
        }
    }

    #[test]
    fn random_inert_vector_certifies() {
        let spec = RandomSpec::new(3, Group::InertF, Level::Kp);
        let v = random_integral_vector(&spec, &mut ChaCha8Rng::seed_from_u64(99)).unwrap();
        let f = gstar_factor(&v.with_group(Group::GstarInert)).unwrap();
        assert!(f.verified());
    }

    #[test]
    fn cartan_labels_on_random_elements() {
        let ctx = QuadCtx::new(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..40 {
            let (i, j, k) = (rng.gen_range(-2..3), rng.gen_range(-2..3), rng.gen_range(-2..3));
            let u = ctx.rat(q(rng.gen_range(1..9)) * pow_p(3, -rng.gen_range(0..2)));
            let w = Mat2::n_lower(&ctx, ctx.rat(q(rng.gen_range(0..9))));
            let a = Mat2::t(&ctx, i, j).mul(&Mat2::n_upper(&ctx, u)).mul(&w);
            let b = Mat2::t(&ctx, k, i + j - k).mul(&Mat2::weyl(&ctx));
            let label = star_cartan(&ctx, &GStarElem::new(GroupElem::Split(a, b)).unwrap()).unwrap();
            let (n, m) = (label.first, label.second.unwrap());
            assert!(n.0 >= n.1 && m.0 >= m.1 && n.0 + n.1 == m.0 + m.1);
            let x = Mat2::t(&ctx, i, j).mul(&Mat2::n_upper(&ctx, ctx.alpha().scale(&pow_p(3, -1))));
            let l = star_cartan(&ctx, &GStarElem::new(GroupElem::Inert(x)).unwrap()).unwrap();
            assert!(l.first.0 >= l.first.1 && l.first.0 + l.first.1 == i + j);
        }
    }
}
