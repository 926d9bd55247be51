use super::{double_coset_hecke, gstar_gens, involution, satake, Group, HeckeElem};
use crate::error::Result;
use crate::exactnum::{pow_p, q, LaurentPoly, SymCoef};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EulerKind {
    AsaiInert,
    AsaiStarSplit,
    AsaiStarInert,
    StandardF,
    RsSplit,
}

/// How the generator T*(p^2) of the split G* algebra is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TStarReading {
    /// The single double coset of (t(2,0), t(2,0)).
    DoubleCoset,
    /// All integral pairs with determinant valuation 2 in each factor.
    AllIntegral,
}

/// Polynomial in X with Hecke algebra coefficients; coeffs[k] multiplies X^k.
#[derive(Debug, Clone, PartialEq)]
pub struct EulerPoly {
    pub kind: EulerKind,
    pub p: u64,
    pub coeffs: Vec<HeckeElem>,
}

impl EulerPoly {
    pub fn group(&self) -> Group {
        self.coeffs[0].group
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Value at X = 1.
    pub fn at_one(&self) -> HeckeElem {
        self.coeffs.iter().skip(1).fold(self.coeffs[0].clone(), |acc, c| acc.add(c))
    }

    /// Value at X = 1 followed by the involution.
    pub fn at_one_involuted(&self) -> HeckeElem {
        involution(&self.at_one())
    }

    /// Satake image coefficientwise, as a polynomial in X.
    pub fn satake(&self) -> LaurentPoly<SymCoef> {
        LaurentPoly::from_coeffs(self.coeffs.iter().map(|c| satake(c, self.p)).collect())
    }

    pub fn map(&self, f: impl Fn(&HeckeElem) -> HeckeElem) -> Self {
        EulerPoly { kind: self.kind, p: self.p, coeffs: self.coeffs.iter().map(f).collect() }
    }
}

/// T*(p^2) in split coordinates under the given reading.
pub fn t_star_p2(p: u64, reading: TStarReading) -> Result<HeckeElem> {
    let g = Group::GstarSplit;
    let t1 = double_coset_hecke(p, 2, g, 0)?;
    let t2 = double_coset_hecke(p, 2, g, 1)?;
    Ok(match reading {
        TStarReading::DoubleCoset => t1.mul(&t2),
        TStarReading::AllIntegral => {
            t1.add(&HeckeElem::var(g, 1)).mul(&t2.add(&HeckeElem::var(g, 3)))
        }
    })
}

pub fn euler_poly(kind: EulerKind, p: u64) -> Result<EulerPoly> {
    euler_poly_with(kind, p, TStarReading::AllIntegral)
}

pub fn euler_poly_with(kind: EulerKind, p: u64, reading: TStarReading) -> Result<EulerPoly> {
    let ip = pow_p(p, -1);
    let ip2 = pow_p(p, -2);
    let coeffs = match kind {
        EulerKind::AsaiInert | EulerKind::AsaiStarInert | EulerKind::StandardF => {
            let g = if kind == EulerKind::AsaiStarInert { Group::GstarInert } else { Group::InertF };
            let t = HeckeElem::t(g);
            let s = HeckeElem::s(g);
            let one = HeckeElem::one(g);
            let zero = HeckeElem::zero(g);
            let std = vec![one.clone(), t.scale(&-ip.clone()), s.clone()];
            if kind == EulerKind::StandardF {
                std
            } else {
                // (1 - p^-1 T X + S X^2)(1 - S X^2)
                let f2 = [one, zero.clone(), s.scale(&q(-1))];
                let mut out = vec![zero; 5];
                for (i, a) in std.iter().enumerate() {
                    for (j, b) in f2.iter().enumerate() {
                        out[i + j] = out[i + j].add(&a.mul(b));
                    }
                }
                out
            }
        }
        EulerKind::RsSplit => {
            let g = Group::SplitPair;
            let (t1, s1, t2, s2) =
                (HeckeElem::var(g, 0), HeckeElem::var(g, 1), HeckeElem::var(g, 2), HeckeElem::var(g, 3));
            vec![
                HeckeElem::one(g),
                t1.mul(&t2).scale(&-ip.clone()),
                t1.pow(2).mul(&s2).add(&s1.mul(&t2.pow(2))).scale(&ip).sub(&s1.mul(&s2).scale(&q(2))),
                s1.mul(&s2).mul(&t1).mul(&t2).scale(&-ip.clone()),
                s1.pow(2).mul(&s2.pow(2)),
            ]
        }
        EulerKind::AsaiStarSplit => {
            let t = gstar_gens::t_star(true);
            let s = gstar_gens::s_star(true);
            let tp2 = t_star_p2(p, reading)?;
            let g = Group::GstarSplit;
            vec![
                HeckeElem::one(g),
                t.scale(&-ip.clone()),
                t.pow(2).scale(&ip2).sub(&tp2.scale(&ip2)).sub(&s),
                s.mul(&t).scale(&-ip),
                s.pow(2),
            ]
        }
    };
    Ok(EulerPoly { kind, p, coeffs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{MPoly, Ring};
    use crate::heckealg::iota_embed;

    #[test]
    fn asai_at_one_factorizes() {
        let e = euler_poly(EulerKind::AsaiInert, 3).unwrap();
        let g = Group::InertF;
        let t = HeckeElem::t(g);
        let s = HeckeElem::s(g);
        let one = HeckeElem::one(g);
        let expect = one.sub(&t.scale(&pow_p(3, -1))).add(&s).mul(&one.sub(&s));
        assert_eq!(e.at_one(), expect);
    }

    #[test]
    fn asai_satake_is_l_factor_inverse() {
        for p in [3u64, 5] {
            let sat = euler_poly(EulerKind::AsaiInert, p).unwrap().satake();
            let one = MPoly::one();
            let e1 = MPoly::var(0);
            let e2 = MPoly::var(1);
            let std = LaurentPoly::from_coeffs(vec![one.clone(), e1.rneg(), e2.clone()]);
            let cen = LaurentPoly::from_coeffs(vec![one, MPoly::zero(), e2.rneg()]);
            assert_eq!(sat, std.mul(&cen));
        }
    }

    #[test]
    fn star_split_matches_rs_only_under_all_integral_reading() {
        for p in [3u64, 5] {
            let rs = euler_poly(EulerKind::RsSplit, p).unwrap();
            let good = euler_poly_with(EulerKind::AsaiStarSplit, p, TStarReading::AllIntegral).unwrap();
            let bad = euler_poly_with(EulerKind::AsaiStarSplit, p, TStarReading::DoubleCoset).unwrap();
            let embed = |e: &EulerPoly| e.coeffs.iter().map(|c| iota_embed(c).unwrap()).collect::<Vec<_>>();
            assert_eq!(embed(&good), rs.coeffs);
            assert_ne!(embed(&bad)[2], rs.coeffs[2]);
        }
    }

    #[test]
    fn star_inert_embeds_to_asai() {
        let a = euler_poly(EulerKind::AsaiInert, 5).unwrap();
        let s = euler_poly(EulerKind::AsaiStarInert, 5).unwrap();
        let embedded: Vec<_> = s.coeffs.iter().map(|c| iota_embed(c).unwrap()).collect();
        assert_eq!(embedded, a.coeffs);
    }
}
