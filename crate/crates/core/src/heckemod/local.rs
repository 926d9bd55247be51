//! Local factors P_delta, traces to full level, and the double/single coset bookkeeping.

use super::{GroupElem, Level, TestVector};
use crate::error::{Error, Result};
use crate::exactnum::{pow_p, q, MPoly, QuadCtx, Rational, SymCoef};
use crate::heckealg::{double_coset_hecke, euler_poly, involution, inv_satake, satake, EulerKind, Group, HeckeElem};
use crate::padicgrp::{double_to_single, Field, Mat2};
use crate::whitzeta::{normalize, zeta_asai, zeta_rs_split, SchwartzFn, WhitParams, ZetaOptions, ZetaResult};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::HashMap;

/// coeff * S1^m1 T1(p^l1) (* S2^m2 T2(p^l2) when split), with T(p^l) = ch(K t(l, 0) K).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DoubleCoset {
    pub lambda: [u32; 2],
    pub shift: [i64; 2],
    #[serde(with = "crate::exactnum::rational_str")]
    pub coeff: Rational,
}

struct DoubleCosetCache {
    p: u64,
    group: Group,
    table: HashMap<(u32, usize), HeckeElem>,
}

impl DoubleCosetCache {
    fn get(&mut self, lambda: u32, pair: usize) -> Result<HeckeElem> {
        if let Some(h) = self.table.get(&(lambda, pair)) {
            return Ok(h.clone());
        }
        let h = double_coset_hecke(self.p, lambda, self.group, pair)?;
        self.table.insert((lambda, pair), h.clone());
        Ok(h)
    }
}

fn s_power(group: Group, slot: usize, m: i64) -> HeckeElem {
    let mut e = [0i32; 4];
    e[slot] = m as i32;
    HeckeElem::monomial(group, e, q(1))
}

/// Write h in the basis of double cosets by peeling off the top T-degree.
pub fn expand_double_cosets(p: u64, h: &HeckeElem) -> Result<Vec<DoubleCoset>> {
    let split = h.group.is_split();
    let mut cache = DoubleCosetCache { p, group: h.group, table: HashMap::new() };
    let mut rest = h.clone();
    let mut out = vec![];
    while !rest.is_zero() {
        let (e, c) = rest
            .poly
            .terms()
            .max_by_key(|(e, _)| (e[0], e[2]))
            .map(|(e, c)| (*e, c.clone()))
            .unwrap();
        if e[0] < 0 || e[2] < 0 {
            return Err(Error::NotInImage(format!("negative power of T in {h}")));
        }
        let mut basis = cache.get(e[0] as u32, 0)?.mul(&s_power(h.group, 1, e[1] as i64));
        let mut dc = DoubleCoset { lambda: [e[0] as u32, 0], shift: [e[1] as i64, 0], coeff: c.clone() };
        if split {
            basis = basis.mul(&cache.get(e[2] as u32, 1)?).mul(&s_power(h.group, 3, e[3] as i64));
            dc.lambda[1] = e[2] as u32;
            dc.shift[1] = e[3] as i64;
        }
        rest = rest.sub(&basis.scale(&c));
        out.push(dc);
    }
    Ok(out)
}

fn scaled_singles(ctx: &QuadCtx, lambda: u32, shift: i64, field: Field) -> Result<Vec<Mat2>> {
    let s = ctx.rat(pow_p(ctx.p, shift));
    Ok(double_to_single(ctx, lambda, field)?.into_iter().map(|x| x.scale(&s)).collect())
}

/// Single cosets x K with multiplicities making up h.
pub fn single_cosets(p: u64, h: &HeckeElem) -> Result<Vec<(GroupElem, Rational)>> {
    let ctx = QuadCtx::new(p)?;
    let mut out = vec![];
    for dc in expand_double_cosets(p, h)? {
        if h.group.is_split() {
            let first = scaled_singles(&ctx, dc.lambda[0], dc.shift[0], Field::Base)?;
            let second = scaled_singles(&ctx, dc.lambda[1], dc.shift[1], Field::Base)?;
            for x in &first {
                for y in &second {
                    out.push((GroupElem::Split(x.clone(), y.clone()), dc.coeff.clone()));
                }
            }
        } else {
            for x in scaled_singles(&ctx, dc.lambda[0], dc.shift[0], Field::Quadratic)? {
                out.push((GroupElem::Inert(x), dc.coeff.clone()));
            }
        }
    }
    Ok(out)
}

/// h acting on ch(Z_p^2) (x) ch(K); the right-translation action lands on the cosets of h'.
pub fn act_on_generator(p: u64, h: &HeckeElem) -> Result<TestVector> {
    ambient(h.group)?;
    let mut v = TestVector::new(p, h.group, Level::K);
    for (g, c) in single_cosets(p, &involution(h))? {
        v.push(SchwartzFn::lattice(p, 0), g, c)?;
    }
    Ok(v)
}

/// phi (x) ch(g K[p]) -> phi (x) ch(g K): the sum over K/K[p] of the translates
/// ch(g K[p] gamma^-1) is ch(g K).
pub fn trace_level(v: &TestVector) -> Result<TestVector> {
    if v.level != Level::Kp {
        return Err(Error::Input("trace_level expects a vector at level K[p]".into()));
    }
    Ok(TestVector { level: Level::K, ..v.clone() })
}

fn ambient(group: Group) -> Result<()> {
    match group {
        Group::InertF | Group::SplitPair => Ok(()),
        g => Err(Error::Input(format!("{g:?} vectors must be embedded before taking local factors"))),
    }
}

fn term_zeta(p: u64, phi: &SchwartzFn, g: &GroupElem, opts: &ZetaOptions) -> Result<ZetaResult> {
    match g {
        GroupElem::Inert(m) => zeta_asai(p, phi, m, opts),
        GroupElem::Split(a, b) => zeta_rs_split(p, phi, (a, b), opts),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LocalFactor {
    #[serde(serialize_with = "ser_hecke")]
    pub factor: HeckeElem,
    /// The normalized zeta value Z(delta), in symmetric coordinates.
    #[serde(serialize_with = "ser_sym")]
    pub zeta: SymCoef,
    /// Specialized points at which Z(delta) was recomputed and compared.
    pub spot_checks: Vec<SpotCheck>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpotCheck {
    pub params: WhitParams,
    #[serde(with = "crate::exactnum::rational_str")]
    pub value: Rational,
    pub matches: bool,
}

fn ser_hecke<S: serde::Serializer>(h: &HeckeElem, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&h.render())
}

fn ser_sym<S: serde::Serializer>(f: &SymCoef, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&f.render(["e1", "e2", "f1", "f2"]))
}

impl LocalFactor {
    pub fn verified(&self) -> bool {
        self.spot_checks.iter().all(|c| c.matches)
    }
}

/// P_delta: the Hecke element whose Satake image, after the involution, is Z(delta).
pub fn local_factor(v: &TestVector) -> Result<HeckeElem> {
    Ok(local_factor_checked(v, &ZetaOptions::default())?.factor)
}

fn random_params(rng: &mut ChaCha8Rng, split: bool) -> WhitParams {
    let mut r = || Rational::new(rng.gen_range(1..20i64).into(), rng.gen_range(21..40i64).into());
    if split {
        WhitParams::Split { u1: r(), v1: r(), u2: r(), v2: r() }
    } else {
        WhitParams::Inert { a: r(), b: r() }
    }
}

/// local_factor together with three independent specialized recomputations.
pub fn local_factor_checked(v: &TestVector, opts: &ZetaOptions) -> Result<LocalFactor> {
    v.validate()?;
    ambient(v.group)?;
    let p = v.p;
    let split = v.group.is_split();
    let zetas: Vec<Result<ZetaResult>> = opts.exec.map(&v.terms, |t| term_zeta(p, &t.phi, &t.g, opts));
    let zetas: Vec<ZetaResult> = zetas.into_iter().collect::<Result<_>>()?;
    let mut total = MPoly::zero();
    for (t, z) in v.terms.iter().zip(&zetas) {
        total = total.add(&normalize(p, z)?.scale(&t.coeff));
    }
    let factor = involution(&inv_satake(&total, v.group, p)?);
    let euler = euler_poly(if split { EulerKind::RsSplit } else { EulerKind::AsaiInert }, p)?.satake();
    let image = satake(&involution(&factor), p);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5a7a_6e01);
    let mut spot_checks = vec![];
    for _ in 0..3 {
        let params = random_params(&mut rng, split);
        let e1 = params.eval(&euler.at_one())?;
        let mut value = Rational::zero();
        for (t, z) in v.terms.iter().zip(&zetas) {
            let f = z.specialize(&params)?;
            value += &t.coeff * f.num.at_one() / f.den.at_one() * &e1;
        }
        let matches = params.eval(&image)? == value;
        spot_checks.push(SpotCheck { params, value, matches });
    }
    let out = LocalFactor { factor, zeta: total, spot_checks };
    if !out.verified() {
        return Err(Error::Internal("local factor disagrees with a specialized recomputation".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::qf;

    #[test]
    fn double_coset_expansion_round_trips() {
        let p = 3;
        for group in [Group::InertF, Group::SplitPair] {
            let t = HeckeElem::t(group);
            let s = HeckeElem::s(group);
            let h = t.pow(2).mul(&s.pow(3)).add(&t.scale(&qf(2, 3))).sub(&HeckeElem::one(group));
            let mut back = HeckeElem::zero(group);
            let mut cache = DoubleCosetCache { p, group, table: HashMap::new() };
            for dc in expand_double_cosets(p, &h).unwrap() {
                let mut b = cache.get(dc.lambda[0], 0).unwrap().mul(&s_power(group, 1, dc.shift[0]));
                if group.is_split() {
                    b = b.mul(&cache.get(dc.lambda[1], 1).unwrap()).mul(&s_power(group, 3, dc.shift[1]));
                }
                back = back.add(&b.scale(&dc.coeff));
            }
            assert_eq!(back, h);
        }
    }

    #[test]
    fn coset_counts() {
        // T has p^2 + 1 single cosets at an inert prime and p + 1 at a split one.
        let p = 3;
        assert_eq!(single_cosets(p, &HeckeElem::t(Group::InertF)).unwrap().len(), 10);
        assert_eq!(single_cosets(p, &HeckeElem::t(Group::SplitPair)).unwrap().len(), 4);
        let t1t2 = HeckeElem::monomial(Group::SplitPair, [1, 0, 1, 0], q(1));
        assert_eq!(single_cosets(p, &t1t2).unwrap().len(), 16);
    }

    #[test]
    fn generator_has_unit_factor() {
        for p in [3u64, 5] {
            for group in [Group::InertF, Group::SplitPair] {
                let v = TestVector::generator(p, group).unwrap();
                let lf = local_factor_checked(&v, &ZetaOptions::default()).unwrap();
                assert_eq!(lf.factor, HeckeElem::one(group));
                assert!(lf.verified());
            }
        }
    }

    #[test]
    fn central_translate_gives_inverse_central_operator() {
        let p = 3;
        let ctx = QuadCtx::new(p).unwrap();
        let mut v = TestVector::new(p, Group::InertF, Level::K);
        v.push(SchwartzFn::lattice(p, 0), GroupElem::Inert(Mat2::t(&ctx, 1, 1)), q(1)).unwrap();
        let s_inv = HeckeElem::monomial(Group::InertF, [0, -1, 0, 0], q(1));
        assert_eq!(local_factor(&v).unwrap(), s_inv);
    }

    #[test]
    fn freeness_on_small_monomials() {
        let p = 3;
        let g = Group::InertF;
        for (a, b) in [(0, 1), (1, 0), (1, -1), (2, -1), (0, -2)] {
            let h = HeckeElem::monomial(g, [a, b, 0, 0], q(1));
            let v = act_on_generator(p, &h).unwrap();
            assert_eq!(local_factor(&v).unwrap(), h, "T^{a} S^{b}");
        }
        let g = Group::SplitPair;
        for e in [[1, 0, 0, 0], [0, 0, 1, -1], [1, 0, 1, 0]] {
            let h = HeckeElem::monomial(g, e, q(1));
            assert_eq!(local_factor(&act_on_generator(p, &h).unwrap()).unwrap(), h, "{e:?}");
        }
    }

    #[test]
    fn trace_keeps_terms_and_changes_level() {
        let p = 3;
        let ctx = QuadCtx::new(p).unwrap();
        let mut v = TestVector::new(p, Group::InertF, Level::Kp);
        assert!(trace_level(&v).unwrap().is_empty());
        v.push(SchwartzFn::lattice(p, 0), GroupElem::Inert(Mat2::identity(&ctx)), q(1)).unwrap();
        let t = trace_level(&v).unwrap();
        assert_eq!(t.level, Level::K);
        assert_eq!(t.terms, v.terms);
        assert!(trace_level(&t).is_err());
        // Representative independence: g gamma with gamma in K gives the same local factor.
        let k = Mat2::new(ctx.int(2), ctx.alpha(), ctx.int(1), ctx.int(1));
        let mut w = TestVector::new(p, Group::InertF, Level::Kp);
        w.push(SchwartzFn::lattice(p, 0), GroupElem::Inert(k), q(1)).unwrap();
        assert_eq!(local_factor(&trace_level(&w).unwrap()).unwrap(), local_factor(&t).unwrap());
    }

    #[test]
    fn determinant_level_cosets_partition_the_compact() {
        // K = disjoint union of gamma K[p] over the representatives, so the
        // trace of ch(K[p]) is ch(K) with coefficient one.
        let p = 3;
        let ctx = QuadCtx::new(p).unwrap();
        let reps = crate::padicgrp::k_over_kp(&ctx).unwrap();
        assert_eq!(reps.len(), (p * p - 1) as usize);
        let mut seen = std::collections::HashSet::new();
        for r in &reps {
            let d = r.det();
            let key = (crate::exactnum::residue_u64(&d.a, p), crate::exactnum::residue_u64(&d.b, p));
            assert!(seen.insert(key));
        }
    }
}
