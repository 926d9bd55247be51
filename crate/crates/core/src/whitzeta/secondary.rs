//! The secondary integral over the mirabolic torus and the linear form built from it.

use super::{mono_pow, normalize, quadratic_factor, y_series_inert, ZetaResult};
use crate::error::{Error, Result};
use crate::exactnum::{pow_p, q, val_q, MPoly, QuadCtx, RatFunc, Rational, SymCoef};
use crate::heckealg::{euler_poly, inv_satake, s_n, satake, EulerKind, Group, HeckeElem};
use crate::padicgrp::{iwasawa, Mat2};

/// Integral of R(g) W^sph(diag(x, 1)) |x|^(s-1) over Q_p^x.
pub fn psi_general(p: u64, g: &Mat2) -> Result<ZetaResult> {
    let ctx = QuadCtx::new(p)?;
    let iw = iwasawa(&ctx, g)?;
    let c = iw.f1.val(p) - iw.f2.val(p);
    let num = y_series_inert(p, c, val_q(&iw.u.b, p)).scale(&mono_pow(&MPoly::var(1), iw.f2.val(p)));
    Ok(ZetaResult {
        value: RatFunc::new(num, quadratic_factor(0, &q(1)))?,
        level: 0,
        split: false,
        note: format!("secondary integral at p={p}"),
    })
}

/// The translate by diag(p^a, p^a) [[1, sqrt(r) p^-b], [0, 1]].
pub fn psi_secondary(p: u64, a: i64, b: u32) -> Result<ZetaResult> {
    let ctx = QuadCtx::new(p)?;
    let nb = Mat2::n_upper(&ctx, ctx.alpha().scale(&pow_p(p, -(b as i64))));
    let g = Mat2::t(&ctx, a, a).mul(&nb);
    let mut z = psi_general(p, &g)?;
    z.note = format!("secondary integral at p={p}, a={a}, b={b}");
    Ok(z)
}

pub fn psi_normalized(p: u64, a: i64, b: u32) -> Result<SymCoef> {
    normalize(p, &psi_secondary(p, a, b)?)
}

/// Coefficients eps_n with psi(0, b) - psi(0, 0) = sum_(n < b) eps_n s_n X^n.
pub fn epsilon_coefficients(p: u64, b: u32) -> Result<Vec<Rational>> {
    // Both share the denominator 1 - e1 X + e2 X^2.
    let zb = psi_secondary(p, 0, b)?.value;
    let z0 = psi_secondary(p, 0, 0)?.value;
    let poly = zb.num.sub(&z0.num).exact_div(&zb.den)?;
    let mut out = vec![];
    for n in 0..b as i64 {
        let c = poly.coeff(n);
        let s = s_n(n, 0);
        let eps = c.coeff(&[n as i32, 0, 0, 0]);
        if c != s.scale(&eps) {
            return Err(Error::Internal(format!("coefficient of X^{n} is not a multiple of s_{n}")));
        }
        out.push(eps);
    }
    if poly.terms().any(|(k, _)| *k < 0 || *k >= b as i64) {
        return Err(Error::Internal("difference has terms outside 0..b".into()));
    }
    Ok(out)
}

/// S^a (sum_n eps_n s_n(T, S)) P_As(1) + S^a (1 - S), with eps_n from `epsilon_coefficients`.
pub fn lambda_hecke(p: u64, a: i64, b: u32) -> Result<HeckeElem> {
    let g = Group::InertF;
    let eps = epsilon_coefficients(p, b)?;
    let mut sum = HeckeElem::zero(g);
    for (n, e) in eps.iter().enumerate() {
        sum = sum.add(&inv_satake(&s_n(n as i64, 0), g, p)?.scale(e));
    }
    let pas = euler_poly(EulerKind::AsaiInert, p)?.at_one();
    let sa = HeckeElem::new(g, mono_pow(&MPoly::var(1), a));
    let one_minus_s = HeckeElem::one(g).sub(&HeckeElem::s(g));
    Ok(sa.mul(&sum.mul(&pas).add(&one_minus_s)))
}

pub fn lambda_form(p: u64, a: i64, b: u32) -> Result<SymCoef> {
    Ok(satake(&lambda_hecke(p, a, b)?, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::qf;

    #[test]
    fn spherical_secondary_integral() {
        let z = psi_secondary(5, 0, 0).unwrap();
        assert_eq!(z.value.num.terms().count(), 1);
        assert_eq!(z.value.num.coeff(0), MPoly::one());
        let z2 = psi_secondary(5, 2, 0).unwrap();
        assert_eq!(z2.value.num.coeff(0), MPoly::var(1).pow(2));
    }

    #[test]
    fn epsilon_index_is_b_minus_one() {
        for p in [3u64, 5] {
            for b in 1..=4u32 {
                let eps = epsilon_coefficients(p, b).unwrap();
                for (n, e) in eps.iter().enumerate() {
                    let expect = if (n as u32) + 1 == b { qf(-(p as i64), p as i64 - 1) } else { q(-1) };
                    assert_eq!(*e, expect, "p={p} b={b} n={n}");
                }
            }
        }
    }

    #[test]
    fn lambda_on_spherical_vectors() {
        let one_minus_ab = MPoly::one().sub(&MPoly::var(1));
        assert_eq!(lambda_form(3, 0, 0).unwrap(), one_minus_ab);
        assert_eq!(lambda_form(3, 2, 0).unwrap(), one_minus_ab.mul(&MPoly::var(1).pow(2)));
        assert_eq!(lambda_form(3, -1, 0).unwrap(), one_minus_ab.mul(&MPoly::var_pow(1, -1)));
    }

    #[test]
    fn lambda_matches_normalized_secondary_integral() {
        for p in [3u64, 5] {
            for a in -2..=2 {
                for b in 0..=3 {
                    assert_eq!(lambda_form(p, a, b).unwrap(), psi_normalized(p, a, b).unwrap(), "p={p} a={a} b={b}");
                }
            }
        }
    }
}
