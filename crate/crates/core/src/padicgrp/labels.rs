//! Double-coset labels: P(Q_p) t_a n_b G(O_F) and the generalized Cartan
//! cells G(Z_p) x G(O_F), each returned with verified witnesses.

use super::lattice::Lattice;
use super::{iwasawa, Mat2};
use crate::error::{Error, Result};
use crate::exactnum::{pow_p, val_q, QuadCtx, QuadElem, Rational};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Pgk { a: i64, b: i64 },
    Cell { nu2: i64, nu1: i64, nu: i64 },
}

/// left * canonical(label) * right equals the decomposed element.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CosetWitness {
    pub label: Label,
    pub left: Mat2,
    pub right: Mat2,
}

/// t_a n_b = diag(p^a, p^a) [[1, alpha p^-b], [0, 1]].
pub fn pgk_rep(ctx: &QuadCtx, a: i64, b: i64) -> Mat2 {
    Mat2::t(ctx, a, a).mul(&Mat2::n_upper(ctx, ctx.alpha().scale(&pow_p(ctx.p, -b))))
}

/// [[p^-nu2, alpha p^-nu1], [0, p^-(nu+nu1)]].
pub fn cell(ctx: &QuadCtx, nu2: i64, nu1: i64, nu: i64) -> Mat2 {
    let p = ctx.p;
    Mat2::new(
        ctx.rat(pow_p(p, -nu2)),
        ctx.alpha().scale(&pow_p(p, -nu1)),
        ctx.zero(),
        ctx.rat(pow_p(p, -nu - nu1)),
    )
}

pub fn canonical(ctx: &QuadCtx, label: Label) -> Mat2 {
    match label {
        Label::Pgk { a, b } => pgk_rep(ctx, a, b),
        Label::Cell { nu2, nu1, nu } => cell(ctx, nu2, nu1, nu),
    }
}

impl CosetWitness {
    /// Re-multiply and check subgroup membership of both witnesses.
    pub fn verify(&self, ctx: &QuadCtx, g: &Mat2) -> bool {
        let p = ctx.p;
        let left_ok = match self.label {
            Label::Pgk { .. } => self.left.in_mirabolic(),
            Label::Cell { .. } => self.left.is_base() && self.left.in_maximal_compact(p),
        };
        left_ok
            && self.right.in_maximal_compact(p)
            && self.left.mul(&canonical(ctx, self.label)).mul(&self.right) == *g
    }
}

/// Integrality forms for the entries of sum_k x_k M_k, split into Q_p coordinates.
fn entry_forms(mats: &[Mat2]) -> Vec<Vec<Rational>> {
    let mut forms = Vec::with_capacity(8);
    for pos in 0..4 {
        forms.push(mats.iter().map(|m| m.entries()[pos].a.clone()).collect());
        forms.push(mats.iter().map(|m| m.entries()[pos].b.clone()).collect());
    }
    forms
}

fn digits(mut idx: u64, p: u64, n: usize) -> Vec<i64> {
    (0..n)
        .map(|_| {
            let d = idx % p;
            idx /= p;
            d as i64
        })
        .collect()
}

fn elem_matrix(ctx: &QuadCtx, pos: usize, x: Rational) -> Mat2 {
    let mut e = [ctx.zero(), ctx.zero(), ctx.zero(), ctx.zero()];
    e[pos] = ctx.rat(x);
    let [a, b, c, d] = e;
    Mat2::new(a, b, c, d)
}

/// Decide g in P(Q_p) x G(O_F), returning witnesses (q, kappa) with g = q x kappa.
pub fn mirabolic_member(ctx: &QuadCtx, g: &Mat2, x: &Mat2) -> Result<Option<(Mat2, Mat2)>> {
    let p = ctx.p;
    let xi = x.inv()?;
    let gi = g.inv()?;
    let e = x.det().val(p) - g.det().val(p);
    let bound = (-(x.val(p) + gi.val(p))).max(0);
    // Q = [[p^e s, t], [0, w]], coordinates (s, t, w).
    let mats: Vec<Mat2> = [(0, pow_p(p, e)), (1, Rational::from_integer(1.into())), (3, Rational::from_integer(1.into()))]
        .into_iter()
        .map(|(pos, c)| xi.mul(&elem_matrix(ctx, pos, c)).mul(g))
        .collect();
    let mut lat = Lattice::scaled_standard(p, &[0, -bound, 0]);
    lat.restrict_all(&entry_forms(&mats));
    for idx in 0..p.pow(3) {
        let v = lat.combine(&digits(idx, p, 3));
        if val_q(&v[0], p) != 0 || val_q(&v[2], p) != 0 {
            continue;
        }
        let (s, t, w) = (&v[0] * pow_p(p, e), v[1].clone(), v[2].clone());
        let big_q = Mat2::from_rationals(ctx, s.clone(), t.clone(), Rational::zero(), w.clone());
        let kappa = xi.mul(&big_q).mul(g).scale(&ctx.rat(w.recip()));
        let q = Mat2::from_rationals(ctx, &w / &s, -(&t / &s), Rational::zero(), Rational::from_integer(1.into()));
        return Ok(Some((q, kappa)));
    }
    Ok(None)
}

/// Decide g in G(Z_p) x G(O_F), returning witnesses (k, kappa) with g = k x kappa.
pub fn cartan_cell_member(ctx: &QuadCtx, g: &Mat2, x: &Mat2) -> Result<Option<(Mat2, Mat2)>> {
    let p = ctx.p;
    if x.det().val(p) != g.det().val(p) {
        return Ok(None);
    }
    let xi = x.inv()?;
    let one = Rational::from_integer(1.into());
    let mats: Vec<Mat2> = (0..4).map(|pos| xi.mul(&elem_matrix(ctx, pos, one.clone())).mul(g)).collect();
    let mut lat = Lattice::scaled_standard(p, &[0, 0, 0, 0]);
    lat.restrict_all(&entry_forms(&mats));
    for idx in 0..p.pow(4) {
        let v = lat.combine(&digits(idx, p, 4));
        let det = &v[0] * &v[3] - &v[1] * &v[2];
        if val_q(&det, p) != 0 {
            continue;
        }
        let h = Mat2::from_rationals(ctx, v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone());
        let kappa = xi.mul(&h).mul(g);
        return Ok(Some((h.inv()?, kappa)));
    }
    Ok(None)
}

/// The label predicted by the Iwasawa decomposition.
fn pgk_predict(ctx: &QuadCtx, g: &Mat2) -> Result<(i64, i64)> {
    let p = ctx.p;
    let parts = iwasawa(ctx, g)?;
    let a = parts.f2.val(p);
    let c = parts.f1.val(p) - a;
    let ub = val_q(&parts.u.b, p);
    let b = if parts.u.b.is_zero() { 0 } else { (c - ub).max(0) };
    Ok((a, b))
}

/// Candidate box for pgk labels from entry valuations of g and g^-1.
pub fn pgk_bounds(ctx: &QuadCtx, g: &Mat2) -> Result<((i64, i64), i64)> {
    let p = ctx.p;
    let (v, vi) = (g.val(p), g.inv()?.val(p));
    Ok(((v, -vi), (-2 * (v + vi)).max(0)))
}

/// Every label in the candidate box whose coset contains g.
pub fn pgk_all_labels(ctx: &QuadCtx, g: &Mat2) -> Result<Vec<(i64, i64)>> {
    let ((alo, ahi), bmax) = pgk_bounds(ctx, g)?;
    let mut out = vec![];
    for a in alo..=ahi {
        for b in 0..=bmax {
            if mirabolic_member(ctx, g, &pgk_rep(ctx, a, b))?.is_some() {
                out.push((a, b));
            }
        }
    }
    Ok(out)
}

/// The unique (a, b) with g in P(Q_p) t_a n_b G(O_F).
///
/// The Iwasawa prediction is tried first; otherwise the candidate box is
/// scanned in lexicographic order.
pub fn pgk_label(ctx: &QuadCtx, g: &Mat2) -> Result<CosetWitness> {
    let (a, b) = pgk_predict(ctx, g)?;
    let mut candidates = vec![(a, b)];
    let ((alo, ahi), bmax) = pgk_bounds(ctx, g)?;
    for a in alo..=ahi {
        for b in 0..=bmax {
            candidates.push((a, b));
        }
    }
    for (a, b) in candidates {
        if let Some((q, kappa)) = mirabolic_member(ctx, g, &pgk_rep(ctx, a, b))? {
            let w = CosetWitness { label: Label::Pgk { a, b }, left: q, right: kappa };
            if !w.verify(ctx, g) {
                return Err(Error::Internal(format!("pgk witness failed for {g}")));
            }
            return Ok(w);
        }
    }
    Err(Error::Internal(format!("no P t_a n_b K label found for {g}")))
}

/// Candidate cells: the F-Cartan type (m1, m2) fixes nu2 = -m1 and
/// nu + nu1 = -m2, leaving nu1 - nu2 in [0, m1 - m2].
pub fn cell_candidates(ctx: &QuadCtx, g: &Mat2) -> Vec<(i64, i64, i64)> {
    let p = ctx.p;
    let m2 = g.val(p);
    let m1 = g.det().val(p) - m2;
    (0..=(m1 - m2)).map(|b| (-m1, -m1 + b, m1 - m2 - b)).collect()
}

pub fn gen_cartan_all_labels(ctx: &QuadCtx, g: &Mat2) -> Result<Vec<(i64, i64, i64)>> {
    let mut out = vec![];
    for (nu2, nu1, nu) in cell_candidates(ctx, g) {
        if cartan_cell_member(ctx, g, &cell(ctx, nu2, nu1, nu))?.is_some() {
            out.push((nu2, nu1, nu));
        }
    }
    Ok(out)
}

/// The cell of the generalized Cartan decomposition containing g.
pub fn gen_cartan_label(ctx: &QuadCtx, g: &Mat2) -> Result<CosetWitness> {
    g.inv()?;
    for (nu2, nu1, nu) in cell_candidates(ctx, g) {
        if let Some((k, kappa)) = cartan_cell_member(ctx, g, &cell(ctx, nu2, nu1, nu))? {
            let w = CosetWitness { label: Label::Cell { nu2, nu1, nu }, left: k, right: kappa };
            if !w.verify(ctx, g) {
                return Err(Error::Internal(format!("cell witness failed for {g}")));
            }
            return Ok(w);
        }
    }
    Err(Error::Internal(format!("no generalized Cartan cell found for {g}")))
}

/// Integral element of the maximal compact with small digits, used by samplers.
pub fn quad_from_digits(ctx: &QuadCtx, x: i64, y: i64) -> QuadElem {
    ctx.elem(Rational::from_integer(x.into()), Rational::from_integer(y.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::qf;

    #[test]
    fn pgk_of_basis_point() {
        let ctx = QuadCtx::new(3).unwrap();
        let g = pgk_rep(&ctx, 3, 2);
        let w = pgk_label(&ctx, &g).unwrap();
        assert_eq!(w.label, Label::Pgk { a: 3, b: 2 });
        assert_eq!(pgk_all_labels(&ctx, &g).unwrap(), vec![(3, 2)]);
    }

    #[test]
    fn pgk_of_identity_and_n_alpha_over_p() {
        let ctx = QuadCtx::new(5).unwrap();
        let id = Mat2::identity(&ctx);
        assert_eq!(pgk_label(&ctx, &id).unwrap().label, Label::Pgk { a: 0, b: 0 });
        let n = Mat2::n_upper(&ctx, ctx.alpha().scale(&qf(1, 5)));
        let w = pgk_label(&ctx, &n).unwrap();
        assert_eq!(w.label, Label::Pgk { a: 0, b: 1 });
        assert!(w.verify(&ctx, &n));
    }

    #[test]
    fn base_cell_and_central_shift() {
        let ctx = QuadCtx::new(3).unwrap();
        let base = cell(&ctx, 0, 0, 0);
        assert_eq!(gen_cartan_label(&ctx, &base).unwrap().label, Label::Cell { nu2: 0, nu1: 0, nu: 0 });
        let shifted = Mat2::t(&ctx, -1, -1).mul(&base);
        let w = gen_cartan_label(&ctx, &shifted).unwrap();
        assert_eq!(w.label, Label::Cell { nu2: 1, nu1: 1, nu: 0 });
        assert!(w.verify(&ctx, &shifted));
    }
}
