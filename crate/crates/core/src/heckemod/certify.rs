//! Integrality and ideal-membership certificates for local factors of integral vectors.

use super::integrality::vector_integrality;
use super::local::{local_factor, trace_level};
use super::{Level, TestVector};
use crate::error::{Error, Result};
use crate::heckealg::{euler_poly, ideal_cert, EulerKind, Group, HeckeElem, IdealCert, IdealKind};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertPart {
    /// P_delta has Z[1/p] coefficients (level K).
    One,
    /// P_Tr(delta) in <(p-1)(1-S), P'_As(1)> (level K[p], phi(0) = 0).
    Two,
    /// P_Tr(delta) in <p-1, P'_F(1)> (level K[p]).
    Three,
}

#[derive(Debug, Clone)]
pub struct Certificate {
    pub part: CertPart,
    pub factor: HeckeElem,
    /// Present for parts two and three.
    pub ideal: Option<IdealCert>,
    pub verified: bool,
}

impl Certificate {
    pub fn to_json(&self) -> serde_json::Value {
        let ideal = self.ideal.as_ref().map(|c| {
            serde_json::json!({
                "kind": c.kind,
                "generators": [c.gen1.render(), c.q.render()],
                "u": c.u.render(),
                "v": c.v.render(),
                "verified": c.verified,
            })
        });
        serde_json::json!({
            "part": self.part,
            "target": self.factor.render(),
            "ideal": ideal,
            "verified": self.verified,
        })
    }
}

/// The second generator for parts two and three.
pub fn part_generator(p: u64, group: Group, part: CertPart) -> Result<(IdealKind, HeckeElem)> {
    Ok(match (group, part) {
        (Group::InertF, CertPart::Two) => {
            (IdealKind::PMinusOneTimesOneMinusS, euler_poly(EulerKind::AsaiInert, p)?.at_one_involuted())
        }
        (Group::InertF, CertPart::Three) => (IdealKind::PMinusOne, euler_poly(EulerKind::StandardF, p)?.at_one_involuted()),
        (Group::SplitPair, CertPart::Two | CertPart::Three) => {
            (IdealKind::PMinusOne, euler_poly(EulerKind::RsSplit, p)?.at_one_involuted())
        }
        (g, part) => return Err(Error::Input(format!("no ideal attached to {part:?} for {g:?}"))),
    })
}

pub fn certify_ideal(delta: &TestVector, part: CertPart) -> Result<Certificate> {
    let p = delta.p;
    let (integral, _) = vector_integrality(delta)?;
    if !integral {
        return Err(Error::Input("the vector is not integral at its stated level".into()));
    }
    match part {
        CertPart::One => {
            if delta.level != Level::K {
                return Err(Error::Input("part one takes a vector at level K".into()));
            }
            let factor = local_factor(delta)?;
            if !factor.is_integral(p) {
                return Err(Error::NotMember(format!("P_delta = {factor} has coefficients outside Z[1/p]")));
            }
            Ok(Certificate { part, factor, ideal: None, verified: true })
        }
        CertPart::Two | CertPart::Three => {
            if delta.level != Level::Kp {
                return Err(Error::Input("parts two and three take a vector at level K[p]".into()));
            }
            if part == CertPart::Two && !delta.vanishes_at_origin() {
                return Err(Error::Input("part two needs phi(0, 0) = 0 in every term".into()));
            }
            let factor = local_factor(&trace_level(delta)?)?;
            let (kind, gen) = part_generator(p, delta.group, part)?;
            let cert = ideal_cert(p, &factor, kind, &gen)?;
            let verified = cert.verified && cert.reexpand() == factor;
            Ok(Certificate { part, factor, ideal: Some(cert), verified })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heckemod::{delta1, random_integral_vector, Delta1Case, RandomSpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generator_part_one() {
        let v = TestVector::generator(3, Group::InertF).unwrap();
        let c = certify_ideal(&v, CertPart::One).unwrap();
        assert_eq!(c.factor, HeckeElem::one(Group::InertF));
        assert!(c.verified);
    }

    #[test]
    fn delta1_part_two() {
        let v = delta1(3, Delta1Case::Inert).unwrap();
        let c = certify_ideal(&v, CertPart::Two).unwrap();
        let cert = c.ideal.unwrap();
        assert!(cert.u.is_zero());
        assert_eq!(cert.v, HeckeElem::one(Group::InertF));
    }

    #[test]
    fn random_vanishing_vectors_part_two() {
        let spec = RandomSpec { vanishing_at_zero: true, ..RandomSpec::new(3, Group::InertF, Level::Kp) };
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..3 {
            let v = random_integral_vector(&spec, &mut rng).unwrap();
            let c = certify_ideal(&v, CertPart::Two).unwrap();
            assert!(c.verified);
        }
    }

    #[test]
    fn non_integral_rejected() {
        let mut v = TestVector::generator(3, Group::InertF).unwrap();
        v.level = Level::Kp;
        assert!(matches!(certify_ideal(&v, CertPart::Three), Err(Error::Input(_))));
    }
}
