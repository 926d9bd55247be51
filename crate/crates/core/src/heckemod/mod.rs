//! Test vectors in the coinvariant modules, their integrality, traces and local factors.

mod certify;
mod delta1;
mod integrality;
mod local;
mod random;
mod xi;

pub use certify::{certify_ideal, part_generator, CertPart, Certificate};
pub use delta1::{delta1, delta1_expected, delta1_verify, godement_values, k1_volume, nu, phi_p2, Delta1Case, Delta1Report};
pub use integrality::{integrality_check, integrality_check_with, vector_integrality, Integrality, ENUMERATION_CAP};
pub use local::{
    act_on_generator, expand_double_cosets, local_factor, local_factor_checked, single_cosets, trace_level,
    DoubleCoset, LocalFactor,
};
pub use random::{random_integral_vector, RandomSpec};
pub use xi::{chain_check, phi_c_weight, xi_chain, ChainCheck, ChainEntry, PgkCoefficients};

use crate::error::{Error, Result};
use crate::exactnum::{fmt_rational, parse_rational, QuadCtx, QuadElem, Rational};
use crate::heckealg::Group;
use crate::padicgrp::Mat2;
use crate::whitzeta::SchwartzFn;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

/// Level subgroup: the maximal compact K or its determinant-level subgroup K[p].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Level {
    K,
    Kp,
}

/// A group element of GL2(F) (inert) or GL2(Q_p) x GL2(Q_p) (split).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElem {
    Inert(Mat2),
    Split(Mat2, Mat2),
}

impl GroupElem {
    pub fn identity(ctx: &QuadCtx, split: bool) -> Self {
        let id = Mat2::identity(ctx);
        if split {
            GroupElem::Split(id.clone(), id)
        } else {
            GroupElem::Inert(id)
        }
    }

    pub fn is_split(&self) -> bool {
        matches!(self, GroupElem::Split(..))
    }

    pub fn mul(&self, o: &GroupElem) -> Result<GroupElem> {
        match (self, o) {
            (GroupElem::Inert(a), GroupElem::Inert(b)) => Ok(GroupElem::Inert(a.mul(b))),
            (GroupElem::Split(a1, a2), GroupElem::Split(b1, b2)) => Ok(GroupElem::Split(a1.mul(b1), a2.mul(b2))),
            _ => Err(Error::Input("mixing inert and split group elements".into())),
        }
    }

    /// Left multiplication by an element of GL2(Q_p), embedded diagonally.
    pub fn left_mul_base(&self, h: &Mat2) -> GroupElem {
        match self {
            GroupElem::Inert(g) => GroupElem::Inert(h.mul(g)),
            GroupElem::Split(g1, g2) => GroupElem::Split(h.mul(g1), h.mul(g2)),
        }
    }

    pub fn components(&self) -> Vec<&Mat2> {
        match self {
            GroupElem::Inert(g) => vec![g],
            GroupElem::Split(g1, g2) => vec![g1, g2],
        }
    }

    /// The valuation of the determinant (summed over both factors when split).
    pub fn det_val(&self, p: u64) -> i64 {
        self.components().iter().map(|g| crate::exactnum::PVal::pval(&g.det(), p)).sum()
    }

    fn check(&self) -> Result<()> {
        for g in self.components() {
            if g.det().is_zero() {
                return Err(Error::Input(format!("singular group element {g}")));
            }
        }
        if let GroupElem::Split(g1, g2) = self {
            if !g1.is_base() || !g2.is_base() {
                return Err(Error::Input("split-prime components must have entries in Q_p".into()));
            }
        }
        Ok(())
    }
}

/// One summand coeff * phi (x) ch(g U).
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub phi: SchwartzFn,
    pub g: GroupElem,
    pub coeff: Rational,
}

/// A finite combination of pure tensors at a fixed level.
#[derive(Debug, Clone, PartialEq)]
pub struct TestVector {
    pub p: u64,
    pub group: Group,
    pub level: Level,
    pub terms: Vec<Term>,
}

impl TestVector {
    pub fn new(p: u64, group: Group, level: Level) -> Self {
        TestVector { p, group, level, terms: vec![] }
    }

    /// ch(Z_p^2) (x) ch(K), the cyclic generator.
    pub fn generator(p: u64, group: Group) -> Result<Self> {
        let ctx = QuadCtx::new(p)?;
        let mut v = TestVector::new(p, group, Level::K);
        v.push(SchwartzFn::lattice(p, 0), GroupElem::identity(&ctx, group.is_split()), Rational::from_integer(1.into()))?;
        Ok(v)
    }

    pub fn push(&mut self, phi: SchwartzFn, g: GroupElem, coeff: Rational) -> Result<()> {
        g.check()?;
        if g.is_split() != self.group.is_split() {
            return Err(Error::Input(format!("group element does not match {:?}", self.group)));
        }
        self.terms.push(Term { phi, g, coeff });
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        if self.p.is_multiple_of(2) {
            return Err(Error::Input("p must be odd".into()));
        }
        for t in &self.terms {
            t.g.check()?;
            if t.g.is_split() != self.group.is_split() {
                return Err(Error::Input("term does not match the vector's group".into()));
            }
        }
        Ok(())
    }

    /// Each term phi (x) ch(gU) with phi(0, 0) = 0.
    pub fn vanishes_at_origin(&self) -> bool {
        self.terms.iter().all(|t| t.phi.value_at_zero(self.p) == Rational::from_integer(0.into()))
    }

    pub fn with_group(&self, group: Group) -> Self {
        TestVector { group, ..self.clone() }
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|t| {
                json!({
                    "phi": serde_json::to_value(&t.phi).expect("schwartz serializes"),
                    "g": elem_to_json(&t.g),
                    "coeff": fmt_rational(&t.coeff),
                })
            })
            .collect();
        json!({ "p": self.p, "group": self.group, "level": self.level, "terms": terms })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Input(format!("test vector JSON: {m}"));
        let p = v["p"].as_u64().ok_or_else(|| bad("missing p"))?;
        let ctx = QuadCtx::new(p)?;
        let group: Group = serde_json::from_value(v["group"].clone()).map_err(|e| bad(&e.to_string()))?;
        let level: Level = serde_json::from_value(v["level"].clone()).map_err(|e| bad(&e.to_string()))?;
        let mut out = TestVector::new(p, group, level);
        for t in v["terms"].as_array().ok_or_else(|| bad("missing terms"))? {
            let phi: SchwartzFn = serde_json::from_value(t["phi"].clone()).map_err(|e| bad(&e.to_string()))?;
            let g = elem_from_json(&ctx, &t["g"])?;
            let coeff = match &t["coeff"] {
                Value::Null => Rational::from_integer(1.into()),
                c => parse_rational(c.as_str().ok_or_else(|| bad("coeff must be a string"))?)
                    .ok_or_else(|| bad("unparsable coeff"))?,
            };
            out.push(phi, g, coeff)?;
        }
        Ok(out)
    }
}

fn quad_to_json(x: &QuadElem) -> Value {
    if x.b == Rational::from_integer(0.into()) {
        Value::String(fmt_rational(&x.a))
    } else {
        json!([fmt_rational(&x.a), fmt_rational(&x.b)])
    }
}

fn quad_from_json(ctx: &QuadCtx, v: &Value) -> Result<QuadElem> {
    let parse = |s: &Value| -> Result<Rational> {
        s.as_str()
            .and_then(parse_rational)
            .ok_or_else(|| Error::Input(format!("matrix entry {s} is not a rational string")))
    };
    match v {
        Value::Array(xs) if xs.len() == 2 => Ok(ctx.elem(parse(&xs[0])?, parse(&xs[1])?)),
        s => Ok(ctx.rat(parse(s)?)),
    }
}

/// [[a, b], [c, d]] with entries "x" or ["x", "y"] meaning x + y sqrt(r).
pub fn mat_to_json(m: &Mat2) -> Value {
    json!([[quad_to_json(&m.a), quad_to_json(&m.b)], [quad_to_json(&m.c), quad_to_json(&m.d)]])
}

pub fn mat_from_json(ctx: &QuadCtx, v: &Value) -> Result<Mat2> {
    let e = |i: usize, j: usize| quad_from_json(ctx, &v[i][j]);
    if !v.is_array() {
        return Err(Error::Input(format!("matrix must be a nested array, got {v}")));
    }
    Ok(Mat2::new(e(0, 0)?, e(0, 1)?, e(1, 0)?, e(1, 1)?))
}

pub fn elem_to_json(g: &GroupElem) -> Value {
    match g {
        GroupElem::Inert(m) => json!({ "inert": mat_to_json(m) }),
        GroupElem::Split(a, b) => json!({ "split": [mat_to_json(a), mat_to_json(b)] }),
    }
}

pub fn elem_from_json(ctx: &QuadCtx, v: &Value) -> Result<GroupElem> {
    if let Some(m) = v.get("inert") {
        return Ok(GroupElem::Inert(mat_from_json(ctx, m)?));
    }
    if let Some(pair) = v.get("split") {
        return Ok(GroupElem::Split(mat_from_json(ctx, &pair[0])?, mat_from_json(ctx, &pair[1])?));
    }
    Err(Error::Input(format!("group element must have an `inert` or `split` key: {v}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{q, qf};

    #[test]
    fn json_round_trip() {
        let p = 3;
        let ctx = QuadCtx::new(p).unwrap();
        let mut v = TestVector::new(p, Group::InertF, Level::Kp);
        let n = Mat2::n_upper(&ctx, ctx.alpha().scale(&qf(1, 3)));
        v.push(SchwartzFn::indicator(p, (q(0), q(1)), 2, 2), GroupElem::Inert(n), q(-2)).unwrap();
        let back = TestVector::from_json(&v.to_json()).unwrap();
        assert_eq!(back, v);

        let mut s = TestVector::new(5, Group::SplitPair, Level::K);
        let ctx5 = QuadCtx::new(5).unwrap();
        s.push(SchwartzFn::lattice(5, 0), GroupElem::Split(Mat2::t(&ctx5, 1, 0), Mat2::identity(&ctx5)), q(1)).unwrap();
        assert_eq!(TestVector::from_json(&s.to_json()).unwrap(), s);
    }

    #[test]
    fn mismatched_terms_rejected() {
        let ctx = QuadCtx::new(3).unwrap();
        let mut v = TestVector::new(3, Group::SplitPair, Level::K);
        let err = v.push(SchwartzFn::lattice(3, 0), GroupElem::Inert(Mat2::identity(&ctx)), q(1));
        assert!(matches!(err, Err(Error::Input(_))));
        let sing = Mat2::from_rationals(&ctx, q(1), q(1), q(1), q(1));
        let mut w = TestVector::new(3, Group::InertF, Level::K);
        assert!(w.push(SchwartzFn::lattice(3, 0), GroupElem::Inert(sing), q(1)).is_err());
    }
}
