//! Volumes of Stab(phi) inside gUg^-1 by counting modulo a principal congruence subgroup.

use super::{GroupElem, Level};
use crate::error::{Error, Result};
use crate::exactnum::{in_z_1_over_p, pow_p, residue_u64, val_q, QuadCtx, QuadElem, Rational};
use crate::padicgrp::lattice::Lattice;
use crate::padicgrp::{gl2_order, Mat2};
use crate::par::Exec;
use crate::whitzeta::SchwartzFn;
use num_traits::Zero;
use serde::Serialize;
use std::collections::HashMap;

/// Upper bound on the number of residue classes scanned.
pub const ENUMERATION_CAP: u128 = 30_000_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Integrality {
    #[serde(with = "crate::exactnum::rational_str")]
    pub volume_inverse: Rational,
    pub is_integral: bool,
    /// Congruence level p^M at which the count was taken.
    pub modulus_exponent: u32,
    pub count: u128,
}

fn rational_part(ctx: &QuadCtx, m: &Mat2) -> Mat2 {
    Mat2::new(ctx.rat(m.a.a.clone()), ctx.rat(m.b.a.clone()), ctx.rat(m.c.a.clone()), ctx.rat(m.d.a.clone()))
}

fn sqrt_part(ctx: &QuadCtx, m: &Mat2) -> Mat2 {
    Mat2::new(ctx.rat(m.a.b.clone()), ctx.rat(m.b.b.clone()), ctx.rat(m.c.b.clone()), ctx.rat(m.d.b.clone()))
}

fn entry(m: &Mat2, i: usize, j: usize) -> &QuadElem {
    m.entries()[2 * i + j]
}

/// Rows spanning {x in Q_p^2 : x g in O^2} for every component g.
fn rational_lattice(ctx: &QuadCtx, g: &GroupElem) -> Result<Mat2> {
    let p = ctx.p;
    let comps = g.components();
    let mut shift = i64::MAX;
    for c in &comps {
        shift = shift.min(c.inv()?.val(p));
    }
    let pieces: Vec<Mat2> = match g {
        GroupElem::Inert(m) => vec![rational_part(ctx, m), sqrt_part(ctx, m)],
        GroupElem::Split(a, b) => vec![a.clone(), b.clone()],
    };
    let mut forms = vec![];
    for m in &pieces {
        for col in 0..2 {
            forms.push(vec![entry(m, 0, col).a.clone(), entry(m, 1, col).a.clone()]);
        }
    }
    let mut lat = Lattice::scaled_standard(p, &[shift, shift]);
    lat.restrict_all(&forms);
    let b = &lat.basis;
    Ok(Mat2::from_rationals(ctx, b[0][0].clone(), b[0][1].clone(), b[1][0].clone(), b[1][1].clone()))
}

/// Z_p-lattice of integral H with m^-1 H m integral for every m, in coordinates
/// (h00, h01, h10, h11), reduced to upper triangular form with pivots p^e.
fn conjugation_lattice(p: u64, ms: &[Mat2]) -> Result<Vec<(Vec<Rational>, u32)>> {
    let mut forms = vec![];
    for m in ms {
        let mi = m.inv()?;
        for k in 0..2 {
            for l in 0..2 {
                let coeffs: Vec<QuadElem> = (0..4).map(|idx| entry(&mi, k, idx / 2) * entry(m, idx % 2, l)).collect();
                forms.push(coeffs.iter().map(|c| c.a.clone()).collect::<Vec<_>>());
                forms.push(coeffs.iter().map(|c| c.b.clone()).collect::<Vec<_>>());
            }
        }
    }
    let mut lat = Lattice::scaled_standard(p, &[0, 0, 0, 0]);
    lat.restrict_all(&forms);
    let mut rows = lat.basis;
    let mut out = vec![];
    for col in 0..4 {
        let piv = (col..4).min_by_key(|&r| (val_q(&rows[r][col], p), r)).unwrap();
        rows.swap(col, piv);
        let v = val_q(&rows[col][col], p);
        if v == crate::exactnum::INF || v < 0 {
            return Err(Error::Internal("conjugation lattice is not of full rank in Z_p^4".into()));
        }
        let unit = pow_p(p, v) / &rows[col][col];
        for x in rows[col].iter_mut() {
            *x *= &unit;
        }
        for r in col + 1..4 {
            let ratio = &rows[r][col] / &rows[col][col];
            if ratio.is_zero() {
                continue;
            }
            let pivot_row = rows[col].clone();
            for (x, y) in rows[r].iter_mut().zip(&pivot_row) {
                *x -= &ratio * y;
            }
        }
        out.push((rows[col].clone(), v as u32));
    }
    Ok(out)
}

/// Cells of psi keyed by their scaled residues modulo p^d.
struct CellTable {
    modulus: u64,
    map: HashMap<(u64, u64), Rational>,
    keys: Vec<((u64, u64), Rational)>,
}

impl CellTable {
    fn new(p: u64, psi: &SchwartzFn) -> Option<Self> {
        let m_lo = psi.support_valuation(p);
        let d = psi.level as i64 - m_lo;
        if psi.cells.is_empty() || d <= 0 {
            return None;
        }
        let shift = pow_p(p, -m_lo);
        let modulus = p.pow(d as u32);
        let mut map = HashMap::new();
        let mut keys = vec![];
        for c in &psi.cells {
            let key = (residue_u64(&(&c.center.0 * &shift), modulus), residue_u64(&(&c.center.1 * &shift), modulus));
            map.insert(key, c.coef.clone());
            keys.push((key, c.coef.clone()));
        }
        Some(CellTable { modulus, map, keys })
    }

    /// psi(x H) = psi(x) for every cell, with H given by residues modulo a multiple of `modulus`.
    fn stabilized_by(&self, h: &[u64; 4]) -> bool {
        let m = self.modulus as u128;
        let h: Vec<u128> = h.iter().map(|x| *x as u128 % m).collect();
        self.keys.iter().all(|((x, y), coef)| {
            let (x, y) = (*x as u128, *y as u128);
            let nx = ((x * h[0] + y * h[2]) % m) as u64;
            let ny = ((x * h[1] + y * h[3]) % m) as u64;
            self.map.get(&(nx, ny)) == Some(coef)
        })
    }
}

/// vol(Stab(phi) cap g U g^-1)^-1 and whether phi is valued in that multiple of Z[1/p].
pub fn integrality_check(p: u64, phi: &SchwartzFn, g: &GroupElem, level: Level) -> Result<Integrality> {
    integrality_check_with(p, phi, g, level, Exec::default())
}

pub fn integrality_check_with(p: u64, phi: &SchwartzFn, g: &GroupElem, level: Level, exec: Exec) -> Result<Integrality> {
    let ctx = QuadCtx::new(p)?;
    let phi = phi.canonical(p);
    let gamma = rational_lattice(&ctx, g)?;
    let psi = phi.translate(p, &gamma)?;
    let ms: Vec<Mat2> = g.components().into_iter().map(|c| gamma.mul(c)).collect();
    let mut m_exp = 1i64;
    if !psi.cells.is_empty() {
        m_exp = m_exp.max(psi.level as i64 - psi.support_valuation(p));
    }
    for m in &ms {
        m_exp = m_exp.max(-(m.val(p) + m.inv()?.val(p)));
    }
    let m_exp = m_exp as u32;
    let basis = conjugation_lattice(p, &ms)?;
    let modulus = p.checked_pow(m_exp).filter(|x| *x < (1 << 31)).ok_or(Error::BoxOverflow {
        size: u128::MAX,
        cap: ENUMERATION_CAP,
    })?;
    let radices: Vec<u64> = basis.iter().map(|(_, e)| p.pow(m_exp.saturating_sub(*e))).collect();
    let total: u128 = radices.iter().map(|r| *r as u128).product();
    if total > ENUMERATION_CAP {
        return Err(Error::BoxOverflow { size: total, cap: ENUMERATION_CAP });
    }
    let rows: Vec<[u64; 4]> = basis
        .iter()
        .map(|(v, _)| [0, 1, 2, 3].map(|i| residue_u64(&v[i], modulus)))
        .collect();
    let table = CellTable::new(p, &psi);
    let need_det_one = level == Level::Kp;
    let chunks: Vec<(u128, u128)> = {
        let n = 64u128.min(total);
        (0..n).map(|i| (total * i / n, total * (i + 1) / n)).collect()
    };
    let counts = exec.map(&chunks, |&(lo, hi)| {
        let mut count = 0u128;
        for idx in lo..hi {
            let mut rest = idx;
            let mut h = [0u64; 4];
            for (row, &r) in rows.iter().zip(&radices) {
                let c = (rest % r as u128) as u64;
                rest /= r as u128;
                for (hk, rk) in h.iter_mut().zip(row) {
                    *hk = ((*hk as u128 + c as u128 * *rk as u128) % modulus as u128) as u64;
                }
            }
            let det = ((h[0] as u128 * h[3] as u128) % p as u128 + p as u128 - (h[1] as u128 * h[2] as u128) % p as u128)
                % p as u128;
            if det == 0 || (need_det_one && det != 1) {
                continue;
            }
            if table.as_ref().is_none_or(|t| t.stabilized_by(&h)) {
                count += 1;
            }
        }
        count
    });
    let count: u128 = counts.into_iter().sum();
    if count == 0 {
        return Err(Error::Internal("stabilizer count is zero; the identity must always survive".into()));
    }
    let volume_inverse = Rational::new(gl2_order(p, m_exp).into(), count.into());
    let is_integral = phi.cells.iter().all(|c| in_z_1_over_p(&(&c.coef / &volume_inverse), p));
    Ok(Integrality { volume_inverse, is_integral, modulus_exponent: m_exp, count })
}

/// Sum of terms is integral when every term is; the per-term reports are returned alongside.
pub fn vector_integrality(v: &super::TestVector) -> Result<(bool, Vec<Integrality>)> {
    let mut reports = vec![];
    for t in &v.terms {
        let phi = t.phi.scale(&t.coeff);
        reports.push(integrality_check(v.p, &phi, &t.g, v.level)?);
    }
    Ok((reports.iter().all(|r| r.is_integral), reports))
}
