//! Spherical Whittaker functions and exact local zeta integrals.
//!
//! Additive characters are never evaluated at points. Every integral over a
//! shell v(y) = j goes through `gauss_shell`, so all results stay rational.

mod schwartz;
mod secondary;
mod zeta;

pub use schwartz::{Cell, SchwartzFn};
pub use secondary::{epsilon_coefficients, lambda_form, lambda_hecke, psi_general, psi_normalized, psi_secondary};
pub use zeta::{normalize, zeta_asai, zeta_rs_split, ZetaOptions, ZetaResult};

use crate::error::{Error, Result};
use crate::exactnum::{pow_p, q, rational_str, LaurentPoly, MPoly, QuadCtx, Rational, Ring, SymCoef, INF};
use crate::heckealg::{s_n, whittaker_torus};
use crate::padicgrp::{iwasawa, Mat2};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// Integral of psi(beta y) over v(y) = j, where v(beta) = vbeta, with vol(Z_p^x) = 1.
pub fn gauss_shell(p: u64, j: i64, vbeta: i64) -> Rational {
    if vbeta == INF {
        return Rational::one();
    }
    match j + vbeta {
        k if k >= 0 => Rational::one(),
        -1 => -Rational::one() / q(p as i64 - 1),
        _ => Rational::zero(),
    }
}

/// Unramified parameters, either kept symbolic or specialized to exact values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum WhitParams {
    Symbolic,
    Inert {
        #[serde(with = "rational_str")]
        a: Rational,
        #[serde(with = "rational_str")]
        b: Rational,
    },
    Split {
        #[serde(with = "rational_str")]
        u1: Rational,
        #[serde(with = "rational_str")]
        v1: Rational,
        #[serde(with = "rational_str")]
        u2: Rational,
        #[serde(with = "rational_str")]
        v2: Rational,
    },
}

impl WhitParams {
    /// Values of the symmetric coordinates (e1, e2, f1, f2).
    fn coordinates(&self) -> Result<[Rational; 4]> {
        match self {
            WhitParams::Symbolic => Err(Error::Input("symbolic parameters have no values".into())),
            WhitParams::Inert { a, b } => Ok([a + b, a * b, Rational::zero(), Rational::one()]),
            WhitParams::Split { u1, v1, u2, v2 } => Ok([u1 + v1, u1 * v1, u2 + v2, u2 * v2]),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Ok(c) = self.coordinates() {
            if c[1].is_zero() || c[3].is_zero() {
                return Err(Error::Input("parameters must be nonzero".into()));
            }
        }
        Ok(())
    }

    /// Trivial central character at an inert prime (AB = 1).
    pub fn trivial_central_character(&self) -> bool {
        matches!(self, WhitParams::Inert { a, b } if (a * b).is_one())
    }

    pub fn eval(&self, f: &SymCoef) -> Result<Rational> {
        let c = self.coordinates()?;
        let inv = c.clone().map(|x| if x.is_zero() { None } else { Some(x.recip()) });
        f.substitute(&c, &inv)
    }
}

/// Value of a right translate of the spherical Whittaker function at a point,
/// kept as an exact phase argument times a torus value.
#[derive(Debug, Clone, PartialEq)]
pub struct WhitValue {
    /// The value is psi(psi_arg) * torus, with psi the standard character of Q_p.
    pub psi_arg: Rational,
    pub torus: SymCoef,
}

/// W^sph(g). Over the quadratic field the phase is Tr(u sqrt(r)) = 2 r u_b.
pub fn wsph_value(ctx: &QuadCtx, g: &Mat2, split: bool) -> Result<WhitValue> {
    let iw = iwasawa(ctx, g)?;
    let p = ctx.p;
    let psi_arg = if split { iw.u.a.clone() } else { q(2 * ctx.r) * &iw.u.b };
    let torus = whittaker_torus(p, iw.f1.val(p), iw.f2.val(p), split, 0);
    Ok(WhitValue { psi_arg, torus })
}

/// m^k for a monomial m and any integer k.
pub(crate) fn mono_pow(m: &MPoly, k: i64) -> MPoly {
    if k >= 0 {
        m.pow(k as u32)
    } else {
        m.monomial_inverse().expect("monomial").pow((-k) as u32)
    }
}

/// 1 - e1 X + e2 X^2 in the slots (slot, slot + 1), with X replaced by c X.
pub(crate) fn quadratic_factor(slot: usize, c: &Rational) -> LaurentPoly<MPoly> {
    LaurentPoly::from_coeffs(vec![
        MPoly::one(),
        MPoly::var(slot).scale(&-c.clone()),
        MPoly::var(slot + 1).scale(&(c * c)),
    ])
}

/// prod over i, j of (1 - p^-1 u_i w_j X).
pub(crate) fn rs_factor(p: u64) -> LaurentPoly<MPoly> {
    let (e1, e2, f1, f2) = (MPoly::var(0), MPoly::var(1), MPoly::var(2), MPoly::var(3));
    let ip = |k: i64| pow_p(p, -k);
    LaurentPoly::from_coeffs(vec![
        MPoly::one(),
        e1.mul(&f1).scale(&-ip(1)),
        e1.pow(2).mul(&f2).add(&e2.mul(&f1.pow(2))).sub(&e2.mul(&f2).scale(&q(2))).scale(&ip(2)),
        e1.mul(&e2).mul(&f1).mul(&f2).scale(&-ip(3)),
        e2.pow(2).mul(&f2.pow(2)).scale(&ip(4)),
    ])
}

/// 1 - w X^2.
pub(crate) fn central_factor(omega: &MPoly) -> LaurentPoly<MPoly> {
    LaurentPoly::from_coeffs(vec![MPoly::one(), MPoly::zero(), omega.rneg()])
}

/// Numerator N with sum_{j >= start} a(j) X^j = N / den, valid when a(j)
/// satisfies the linear recurrence with characteristic polynomial den for j >= start.
pub(crate) fn recursive_tail(start: i64, den: &LaurentPoly<MPoly>, a: impl Fn(i64) -> MPoly) -> LaurentPoly<MPoly> {
    let d = den.high().unwrap_or(0);
    let head = LaurentPoly::from_coeffs((0..d.max(1)).map(|i| a(start + i)).collect());
    let full = den.mul(&head);
    let mut out = LaurentPoly::zero();
    for (k, c) in full.terms() {
        if *k < d.max(1) {
            out.add_term(*k + start, c);
        }
    }
    out
}

/// Numerator over `den` of sum_j gauss_shell(j, vbeta) a(j) X^j, where a(j)
/// vanishes for j < support and follows the recurrence of `den` from there on.
pub(crate) fn shell_series(
    p: u64,
    support: i64,
    vbeta: i64,
    den: &LaurentPoly<MPoly>,
    a: impl Fn(i64) -> MPoly,
) -> LaurentPoly<MPoly> {
    let mut start = support;
    let mut out = LaurentPoly::zero();
    if vbeta != INF {
        let j1 = -vbeta;
        if j1 > support {
            let w = gauss_shell(p, j1 - 1, vbeta);
            out = LaurentPoly::monomial(j1 - 1, a(j1 - 1).scale(&w)).mul(den);
        }
        start = start.max(j1);
    }
    out.add(&recursive_tail(start, den, a))
}

/// y-integral of one Whittaker function at an inert prime: sum over shells of
/// gauss_shell * p^-c s_(j+c) X^j, as a numerator over 1 - e1 X + e2 X^2.
pub(crate) fn y_series_inert(p: u64, c: i64, vbeta: i64) -> LaurentPoly<MPoly> {
    let den = quadratic_factor(0, &Rational::one());
    let scale = pow_p(p, -c);
    shell_series(p, -c, vbeta, &den, |j| s_n(j + c, 0).scale(&scale))
}

/// Split analogue with two Whittaker functions, over prod (1 - p^-1 u_i w_j X).
pub(crate) fn y_series_split(p: u64, c1: i64, c2: i64, vbeta: i64) -> LaurentPoly<MPoly> {
    let den = rs_factor(p);
    shell_series(p, (-c1).max(-c2), vbeta, &den, |j| {
        s_n(j + c1, 0).mul(&s_n(j + c2, 2)).scale(&pow_p(p, -c1 - c2 - j))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::qf;

    /// Average of exp(2 pi i x / p^k) over x in (Z/p^k)^x, computed numerically.
    fn root_of_unity_average(p: u64, k: u32) -> f64 {
        let n = p.pow(k);
        let (mut s, mut cnt) = (0.0, 0.0);
        for x in 0..n {
            if x % p != 0 {
                s += (2.0 * std::f64::consts::PI * x as f64 / n as f64).cos();
                cnt += 1.0;
            }
        }
        s / cnt
    }

    fn to_f64(x: &Rational) -> f64 {
        use num_traits::ToPrimitive;
        x.to_f64().unwrap()
    }

    #[test]
    fn gauss_shell_examples() {
        assert_eq!(gauss_shell(5, 0, 0), q(1));
        assert_eq!(gauss_shell(5, -1, 0), qf(-1, 4));
        assert_eq!(gauss_shell(5, -2, 0), q(0));
        assert_eq!(gauss_shell(5, -7, INF), q(1));
    }

    #[test]
    fn gauss_shell_matches_roots_of_unity() {
        for p in [3u64, 5, 7] {
            for k in 1..=3u32 {
                let exact = gauss_shell(p, -(k as i64), 0);
                assert!((to_f64(&exact) - root_of_unity_average(p, k)).abs() < 1e-9, "p={p} k={k}");
            }
        }
    }

    #[test]
    fn whittaker_on_torus() {
        let ctx = QuadCtx::new(3).unwrap();
        let w = wsph_value(&ctx, &Mat2::t(&ctx, 2, 0), false).unwrap();
        assert_eq!(w.torus, s_n(2, 0).scale(&pow_p(3, -2)));
        assert!(w.psi_arg.is_zero());
        assert!(wsph_value(&ctx, &Mat2::t(&ctx, 0, 1), false).unwrap().torus.is_zero());
        assert_eq!(wsph_value(&ctx, &Mat2::identity(&ctx), false).unwrap().torus, MPoly::one());
        let n = Mat2::n_upper(&ctx, ctx.alpha().scale(&pow_p(3, -1)));
        assert_eq!(wsph_value(&ctx, &n, false).unwrap().psi_arg, q(2 * ctx.r) * pow_p(3, -1));
    }

    #[test]
    fn recursive_tail_reproduces_series() {
        let den = quadratic_factor(0, &Rational::one());
        let tail = recursive_tail(3, &den, |j| s_n(j, 0));
        let mut expect = LaurentPoly::zero();
        for j in 3..12 {
            expect.add_term(j, &s_n(j, 0));
        }
        let diff = expect.mul(&den).sub(&tail);
        assert!(diff.terms().all(|(k, _)| *k >= 12));
    }

    #[test]
    fn params_evaluate() {
        let w = WhitParams::Inert { a: q(2), b: q(3) };
        assert_eq!(w.eval(&s_n(2, 0)).unwrap(), q(4 + 6 + 9));
        assert!(WhitParams::Inert { a: q(2), b: qf(1, 2) }.trivial_central_character());
    }
}
