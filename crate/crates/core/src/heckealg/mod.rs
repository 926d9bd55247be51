//! Spherical Hecke algebras as Laurent polynomial rings in T, S^{+-}.

mod double;
mod euler;
mod ideal;

pub use double::*;
pub use euler::*;
pub use ideal::*;

use crate::error::{Error, Result};
use crate::exactnum::{in_z_1_over_p, pow_p, q, sym_reduce_pair, MPoly, Rational, SymCoef};
use serde::{Deserialize, Serialize};

/// Which Hecke algebra an element belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Group {
    /// GL2 over the unramified quadratic extension: slots (T, S).
    #[serde(rename = "inert_F")]
    InertF,
    /// GL2 x GL2 over Q_p: slots (T1, S1, T2, S2).
    SplitPair,
    /// G* at a split prime, carried in split coordinates with balanced degree.
    GstarSplit,
    /// G* at an inert prime: slots (T*, S*).
    GstarInert,
}

impl Group {
    pub fn is_split(self) -> bool {
        matches!(self, Group::SplitPair | Group::GstarSplit)
    }

    pub fn slot_names(self) -> [&'static str; 4] {
        match self {
            Group::InertF => ["T", "S", "_", "_"],
            Group::GstarInert => ["T*", "S*", "_", "_"],
            _ => ["T1", "S1", "T2", "S2"],
        }
    }
}

/// An element of a spherical Hecke algebra with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HeckeElem {
    pub group: Group,
    pub poly: MPoly,
}

impl HeckeElem {
    pub fn new(group: Group, poly: MPoly) -> Self {
        HeckeElem { group, poly }
    }

    pub fn zero(group: Group) -> Self {
        Self::new(group, MPoly::zero())
    }

    pub fn one(group: Group) -> Self {
        Self::new(group, MPoly::one())
    }

    pub fn constant(group: Group, c: Rational) -> Self {
        Self::new(group, MPoly::constant(c))
    }

    /// T (inert) or T1 (split).
    pub fn t(group: Group) -> Self {
        Self::new(group, MPoly::var(0))
    }

    /// S (inert) or S1 (split).
    pub fn s(group: Group) -> Self {
        Self::new(group, MPoly::var(1))
    }

    pub fn var(group: Group, slot: usize) -> Self {
        Self::new(group, MPoly::var(slot))
    }

    pub fn monomial(group: Group, e: [i32; 4], c: Rational) -> Self {
        Self::new(group, MPoly::monomial(e, c))
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.group, self.poly.add(&o.poly))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(self.group, self.poly.sub(&o.poly))
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.group, self.poly.mul(&o.poly))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.group, self.poly.scale(c))
    }

    pub fn pow(&self, k: u32) -> Self {
        Self::new(self.group, self.poly.pow(k))
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// All coefficients lie in Z[1/p].
    pub fn is_integral(&self, p: u64) -> bool {
        self.poly.coeffs().all(|c| in_z_1_over_p(c, p))
    }

    /// For split coordinates: every monomial has T1^a S1^b T2^c S2^d with a + 2b = c + 2d.
    pub fn is_balanced(&self) -> bool {
        self.poly.terms().all(|(e, _)| e[0] + 2 * e[1] == e[2] + 2 * e[3])
    }

    /// The balanced part of a split-coordinate element.
    pub fn balanced_part(&self) -> Self {
        let mut out = MPoly::zero();
        for (e, c) in self.poly.terms() {
            if e[0] + 2 * e[1] == e[2] + 2 * e[3] {
                out.add_term(*e, c);
            }
        }
        Self::new(self.group, out)
    }

    pub fn with_group(&self, group: Group) -> Self {
        Self::new(group, self.poly.clone())
    }

    pub fn render(&self) -> String {
        self.poly.render(self.group.slot_names())
    }
}

impl std::fmt::Display for HeckeElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.render())
    }
}

/// Satake transform into symmetric coordinates.
///
/// Inert: T -> p e1, S -> e2. Split (Hecke-normalized parameters):
/// T_i -> u_i + v_i, S_i -> u_i v_i / p.
pub fn satake(h: &HeckeElem, p: u64) -> SymCoef {
    let pq = q(p as i64);
    let inv_p = pow_p(p, -1);
    let images: [MPoly; 4] = match h.group {
        Group::InertF | Group::GstarInert => [MPoly::var(0).scale(&pq), MPoly::var(1), MPoly::zero(), MPoly::zero()],
        Group::SplitPair | Group::GstarSplit => {
            [MPoly::var(0), MPoly::var(1).scale(&inv_p), MPoly::var(2), MPoly::var(3).scale(&inv_p)]
        }
    };
    h.poly.subst_poly(&images).expect("S images are monomials")
}

/// Inverse Satake transform from symmetric coordinates.
pub fn inv_satake(f: &SymCoef, group: Group, p: u64) -> Result<HeckeElem> {
    let pq = q(p as i64);
    let inv_p = pow_p(p, -1);
    for (e, _) in f.terms() {
        if e[0] < 0 || e[2] < 0 {
            return Err(Error::NotInImage(format!("negative power of a trace coordinate in {f}")));
        }
        if !group.is_split() && (e[2] != 0 || e[3] != 0) {
            return Err(Error::NotInImage(format!("second parameter pair at an inert prime in {f}")));
        }
    }
    let images: [MPoly; 4] = if group.is_split() {
        [MPoly::var(0), MPoly::var(1).scale(&pq), MPoly::var(2), MPoly::var(3).scale(&pq)]
    } else {
        [MPoly::var(0).scale(&inv_p), MPoly::var(1), MPoly::zero(), MPoly::zero()]
    };
    Ok(HeckeElem::new(group, f.subst_poly(&images)?))
}

/// Inverse Satake transform from a polynomial in the parameters themselves
/// (slots A, B or u1, v1, u2, v2).
pub fn inv_satake_params(f: &MPoly, group: Group, p: u64) -> Result<HeckeElem> {
    let notin = |_| Error::NotInImage(format!("{f} is not symmetric"));
    let mut s = sym_reduce_pair(f, 0, 1).map_err(notin)?;
    if group.is_split() {
        s = sym_reduce_pair(&s, 2, 3).map_err(notin)?;
    }
    inv_satake(&s, group, p)
}

/// The anti-involution xi -> xi(( - )^{-1}): T -> T S^{-1}, S -> S^{-1} per factor.
pub fn involution(h: &HeckeElem) -> HeckeElem {
    let images: [MPoly; 4] = [
        MPoly::monomial([1, -1, 0, 0], q(1)),
        MPoly::var_pow(1, -1),
        MPoly::monomial([0, 0, 1, -1], q(1)),
        MPoly::var_pow(3, -1),
    ];
    HeckeElem::new(h.group, h.poly.subst_poly(&images).expect("monomial images"))
}

/// Parameter inversion matching the involution on the Satake side, in
/// symmetric coordinates. Inert: (A, B) -> (1/A, 1/B). Split Hecke-normalized
/// parameters: u -> p/u.
pub fn invert_parameters(f: &SymCoef, split: bool, p: u64) -> SymCoef {
    let pq = q(p as i64);
    let images: [MPoly; 4] = if split {
        [
            MPoly::monomial([1, -1, 0, 0], pq.clone()),
            MPoly::monomial([0, -1, 0, 0], &pq * &pq),
            MPoly::monomial([0, 0, 1, -1], pq.clone()),
            MPoly::monomial([0, 0, 0, -1], &pq * &pq),
        ]
    } else {
        [MPoly::monomial([1, -1, 0, 0], q(1)), MPoly::var_pow(1, -1), MPoly::var(2), MPoly::var(3)]
    };
    f.subst_poly(&images).expect("monomial images")
}

/// The injective map from the G* Hecke algebra into the full one.
pub fn iota_embed(h: &HeckeElem) -> Result<HeckeElem> {
    match h.group {
        Group::GstarInert => Ok(h.with_group(Group::InertF)),
        Group::GstarSplit => {
            if !h.is_balanced() {
                return Err(Error::Input("G* element with unbalanced monomials".into()));
            }
            Ok(h.with_group(Group::SplitPair))
        }
        _ => Err(Error::Input("iota_embed expects a G* element".into())),
    }
}

/// Generators of the G* algebras expressed in their ambient coordinates.
pub mod gstar_gens {
    use super::*;

    pub fn t_star(split: bool) -> HeckeElem {
        if split {
            HeckeElem::monomial(Group::GstarSplit, [1, 0, 1, 0], q(1))
        } else {
            HeckeElem::t(Group::GstarInert)
        }
    }

    pub fn s_star(split: bool) -> HeckeElem {
        if split {
            HeckeElem::monomial(Group::GstarSplit, [0, 1, 0, 1], q(1))
        } else {
            HeckeElem::s(Group::GstarInert)
        }
    }
}
