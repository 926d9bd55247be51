use super::{central_factor, mono_pow, quadratic_factor, rs_factor, y_series_inert, y_series_split, SchwartzFn, WhitParams};
use crate::error::{Error, Result};
use crate::exactnum::{pow_p, q, ratfunc_exact_div, val_q, LaurentPoly, MPoly, QuadCtx, RatFunc, Rational, SymCoef};
use crate::heckealg::{euler_poly, EulerKind};
use crate::padicgrp::{iwasawa, p1_reps, Mat2};
use crate::par::Exec;
use num_traits::Zero;

#[derive(Debug, Clone, Copy)]
pub struct ZetaOptions {
    /// Discretization level; the computed stabilization level when None.
    pub level: Option<u32>,
    pub level_cap: u32,
    pub exec: Exec,
}

impl Default for ZetaOptions {
    fn default() -> Self {
        ZetaOptions { level: None, level_cap: 7, exec: Exec::default() }
    }
}

/// A zeta integral as a rational function of X = p^-s.
#[derive(Debug, Clone)]
pub struct ZetaResult {
    pub value: RatFunc<SymCoef>,
    pub level: u32,
    pub split: bool,
    pub note: String,
}

impl ZetaResult {
    pub fn to_json(&self) -> serde_json::Value {
        let names = if self.split { ["e1", "e2", "f1", "f2"] } else { ["e1", "e2", "_", "_"] };
        let render = |poly: &LaurentPoly<MPoly>| -> serde_json::Value {
            poly.terms().map(|(k, c)| (k.to_string(), serde_json::Value::String(c.render(names)))).collect()
        };
        serde_json::json!({
            "numerator": render(&self.value.num),
            "denominator": render(&self.value.den),
            "level": self.level,
            "note": self.note,
        })
    }

    pub fn specialize(&self, params: &WhitParams) -> Result<RatFunc<Rational>> {
        let map = |poly: &LaurentPoly<MPoly>| -> Result<LaurentPoly<Rational>> {
            let mut out = LaurentPoly::zero();
            for (k, c) in poly.terms() {
                out.add_term(*k, &params.eval(c)?);
            }
            Ok(out)
        };
        RatFunc::new(map(&self.value.num)?, map(&self.value.den)?)
    }
}

/// Level at which right translation by g no longer moves the integrand.
fn translation_level(p: u64, g: &Mat2) -> Result<i64> {
    Ok((-(g.val(p) + g.inv()?.val(p))).max(0))
}

fn choose_level(opts: &ZetaOptions, needed: i64) -> Result<u32> {
    let needed = needed.max(1) as u32;
    let level = match opts.level {
        Some(l) if l < needed => {
            return Err(Error::Input(format!("level {l} is below the stabilization level {needed}")));
        }
        Some(l) => l,
        None => needed,
    };
    if level > opts.level_cap {
        return Err(Error::PrecisionOverflow { needed: level, cap: opts.level_cap });
    }
    Ok(level)
}

/// z-integral of phi(z v) w(z) |z|^2s as a numerator over 1 - w X^2.
fn z_series(phi: &SchwartzFn, p: u64, m_lo: i64, row: (&Rational, &Rational), omega: &MPoly) -> LaurentPoly<MPoly> {
    let n = phi.level as i64;
    let cen = central_factor(omega);
    let mut head = LaurentPoly::zero();
    for m in m_lo..n {
        let c = phi.unit_shell_integral(p, m, row);
        if !c.is_zero() {
            head.add_term(2 * m, &mono_pow(omega, m).scale(&c));
        }
    }
    let tail = LaurentPoly::monomial(2 * n, mono_pow(omega, n).scale(&phi.value_at_zero(p)));
    head.mul(&cen).add(&tail)
}

/// Z(phi, R(g) W^sph, s) at an inert prime, exact in the symbolic parameters.
pub fn zeta_asai(p: u64, phi: &SchwartzFn, g: &Mat2, opts: &ZetaOptions) -> Result<ZetaResult> {
    let ctx = QuadCtx::new(p)?;
    let phi = phi.canonical(p);
    let m_lo = phi.support_valuation(p);
    let level = choose_level(opts, (phi.level as i64 - m_lo).max(translation_level(p, g)?))?;
    let reps = p1_reps(&ctx, level);
    let omega = MPoly::var(1);
    let parts = opts.exec.map(&reps, |k| -> Result<LaurentPoly<MPoly>> {
        let iw = iwasawa(&ctx, &k.mul(g))?;
        let c = iw.f1.val(p) - iw.f2.val(p);
        let y = y_series_inert(p, c, val_q(&iw.u.b, p));
        let z = z_series(&phi, p, m_lo, (&k.c.a, &k.d.a), &omega);
        Ok(y.mul(&z).scale(&mono_pow(&omega, iw.f2.val(p))))
    });
    let mut num = LaurentPoly::zero();
    for part in parts {
        num = num.add(&part?);
    }
    let num = num.scale(&MPoly::constant(Rational::from_integer((reps.len() as i64).into()).recip()));
    let den = quadratic_factor(0, &q(1)).mul(&central_factor(&omega));
    Ok(ZetaResult {
        value: RatFunc::new(num, den)?,
        level,
        split: false,
        note: format!("asai zeta integral at p={p}, {} cells, level {level}", phi.cells.len()),
    })
}

/// Rankin-Selberg zeta integral of W1 x W2 at a split prime, with the second
/// Whittaker model taken with respect to the inverse character.
pub fn zeta_rs_split(p: u64, phi: &SchwartzFn, g: (&Mat2, &Mat2), opts: &ZetaOptions) -> Result<ZetaResult> {
    let ctx = QuadCtx::new(p)?;
    if !g.0.is_base() || !g.1.is_base() {
        return Err(Error::Input("split-prime translates must have entries in Q_p".into()));
    }
    let phi = phi.canonical(p);
    let m_lo = phi.support_valuation(p);
    let needed = (phi.level as i64 - m_lo).max(translation_level(p, g.0)?).max(translation_level(p, g.1)?);
    let level = choose_level(opts, needed)?;
    let reps = p1_reps(&ctx, level);
    let inv_p = pow_p(p, -1);
    let omega1 = MPoly::var(1).scale(&inv_p);
    let omega2 = MPoly::var(3).scale(&inv_p);
    let omega = omega1.mul(&omega2);
    let parts = opts.exec.map(&reps, |k| -> Result<LaurentPoly<MPoly>> {
        let a = iwasawa(&ctx, &k.mul(g.0))?;
        let b = iwasawa(&ctx, &k.mul(g.1))?;
        let c1 = a.f1.val(p) - a.f2.val(p);
        let c2 = b.f1.val(p) - b.f2.val(p);
        let beta = &a.u.a - &b.u.a;
        let y = y_series_split(p, c1, c2, val_q(&beta, p));
        let z = z_series(&phi, p, m_lo, (&k.c.a, &k.d.a), &omega);
        let central = mono_pow(&omega1, a.f2.val(p)).mul(&mono_pow(&omega2, b.f2.val(p)));
        Ok(y.mul(&z).scale(&central))
    });
    let mut num = LaurentPoly::zero();
    for part in parts {
        num = num.add(&part?);
    }
    let num = num.scale(&MPoly::constant(Rational::from_integer((reps.len() as i64).into()).recip()));
    let den = rs_factor(p).mul(&central_factor(&omega));
    Ok(ZetaResult {
        value: RatFunc::new(num, den)?,
        level,
        split: true,
        note: format!("split Rankin-Selberg zeta integral at p={p}, {} cells, level {level}", phi.cells.len()),
    })
}

/// Divide by the L-factor and set s = 0: multiply by the Satake image of the
/// Euler polynomial and evaluate at X = 1.
pub fn normalize(p: u64, z: &ZetaResult) -> Result<SymCoef> {
    let kind = if z.split { EulerKind::RsSplit } else { EulerKind::AsaiInert };
    let euler = euler_poly(kind, p)?.satake();
    Ok(ratfunc_exact_div(&z.value, &euler)?.at_one())
}
