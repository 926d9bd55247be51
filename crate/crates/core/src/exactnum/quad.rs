use super::{q, rational_str, smallest_nonresidue, is_qr, is_prime, val_q, Rational, INF};
use crate::error::{Error, Result};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

/// The prime p together with the non-residue r defining F = Q_p(sqrt r).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadCtx {
    pub p: u64,
    pub r: i64,
}

impl QuadCtx {
    /// Context with the smallest positive non-residue.
    pub fn new(p: u64) -> Result<Self> {
        if p == 2 || !is_prime(p) {
            return Err(Error::Input(format!("p = {p} must be an odd prime")));
        }
        Ok(QuadCtx { p, r: smallest_nonresidue(p) })
    }

    pub fn with_nonresidue(p: u64, r: i64) -> Result<Self> {
        Self::new(p)?;
        if r.rem_euclid(p as i64) == 0 || is_qr(r, p) {
            return Err(Error::Input(format!("{r} is not a quadratic non-residue mod {p}")));
        }
        Ok(QuadCtx { p, r })
    }

    pub fn zero(&self) -> QuadElem {
        QuadElem::from_q(q(0), self.r)
    }

    pub fn one(&self) -> QuadElem {
        QuadElem::from_q(q(1), self.r)
    }

    /// The generator alpha = sqrt r.
    pub fn alpha(&self) -> QuadElem {
        QuadElem::new(q(0), q(1), self.r)
    }

    pub fn elem(&self, a: Rational, b: Rational) -> QuadElem {
        QuadElem::new(a, b, self.r)
    }

    pub fn rat(&self, a: Rational) -> QuadElem {
        QuadElem::from_q(a, self.r)
    }

    pub fn int(&self, a: i64) -> QuadElem {
        QuadElem::from_q(q(a), self.r)
    }
}

/// a + b sqrt(r).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadElem {
    #[serde(with = "rational_str")]
    pub a: Rational,
    #[serde(with = "rational_str")]
    pub b: Rational,
    pub r: i64,
}

impl QuadElem {
    pub fn new(a: Rational, b: Rational, r: i64) -> Self {
        QuadElem { a, b, r }
    }

    pub fn from_q(a: Rational, r: i64) -> Self {
        QuadElem { a, b: Rational::zero(), r }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conj(&self) -> Self {
        QuadElem::new(self.a.clone(), -self.b.clone(), self.r)
    }

    pub fn norm(&self) -> Rational {
        &self.a * &self.a - q(self.r) * &self.b * &self.b
    }

    pub fn trace(&self) -> Rational {
        q(2) * &self.a
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        Ok(QuadElem::new(&self.a / &n, -(&self.b / &n), self.r))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        QuadElem::new(&self.a * c, &self.b * c, self.r)
    }

    /// min(v(a), v(b)); exact because F/Q_p is unramified and r is a unit.
    pub fn val(&self, p: u64) -> i64 {
        val_q(&self.a, p).min(val_q(&self.b, p))
    }

    pub fn is_integral(&self, p: u64) -> bool {
        self.is_zero() || self.val(p) >= 0
    }

    pub fn is_unit(&self, p: u64) -> bool {
        !self.is_zero() && self.val(p) == 0
    }

    fn r_of(&self, o: &Self) -> i64 {
        debug_assert!(self.r == o.r, "mixing quadratic contexts");
        self.r
    }
}

impl std::fmt::Display for QuadElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.r)
        }
    }
}

impl<'a> Add<&'a QuadElem> for &'a QuadElem {
    type Output = QuadElem;
    fn add(self, o: &QuadElem) -> QuadElem {
        QuadElem::new(&self.a + &o.a, &self.b + &o.b, self.r_of(o))
    }
}

impl<'a> Sub<&'a QuadElem> for &'a QuadElem {
    type Output = QuadElem;
    fn sub(self, o: &QuadElem) -> QuadElem {
        QuadElem::new(&self.a - &o.a, &self.b - &o.b, self.r_of(o))
    }
}

impl<'a> Mul<&'a QuadElem> for &'a QuadElem {
    type Output = QuadElem;
    fn mul(self, o: &QuadElem) -> QuadElem {
        let r = self.r_of(o);
        QuadElem::new(
            &self.a * &o.a + q(r) * &self.b * &o.b,
            &self.a * &o.b + &self.b * &o.a,
            r,
        )
    }
}

impl Neg for &QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        QuadElem::new(-self.a.clone(), -self.b.clone(), self.r)
    }
}

/// Valuation shorthand usable on both rationals and quadratic elements.
pub trait PVal {
    fn pval(&self, p: u64) -> i64;
}

impl PVal for Rational {
    fn pval(&self, p: u64) -> i64 {
        val_q(self, p)
    }
}

impl PVal for QuadElem {
    fn pval(&self, p: u64) -> i64 {
        if self.is_zero() {
            INF
        } else {
            self.val(p)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{pow_p, qf};

    #[test]
    fn inverse_of_sqrt_r() {
        let ctx = QuadCtx::new(5).unwrap();
        let inv = ctx.alpha().inv().unwrap();
        assert_eq!(inv, ctx.elem(q(0), qf(1, ctx.r)));
    }

    #[test]
    fn conjugate_product() {
        let ctx = QuadCtx::new(5).unwrap();
        let x = ctx.elem(q(1), q(1));
        assert_eq!(&x * &x.conj(), ctx.int(1 - ctx.r));
    }

    #[test]
    fn inverse_multiplies_back() {
        let x = QuadElem::new(q(2), q(3), 2);
        assert!((&x * &x.inv().unwrap()).is_one());
    }

    #[test]
    fn zero_has_no_inverse() {
        assert_eq!(QuadCtx::new(3).unwrap().zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn valuation_examples() {
        let ctx = QuadCtx::new(3).unwrap();
        assert_eq!(ctx.elem(qf(1, 3), q(1)).val(3), -1);
        assert_eq!(ctx.elem(q(3), q(1)).scale(&pow_p(3, 2)).val(3), 2);
        assert_eq!(ctx.zero().pval(3), INF);
    }

    #[test]
    fn context_rejects_residue_and_p2() {
        assert!(QuadCtx::new(2).is_err());
        assert!(QuadCtx::with_nonresidue(7, 2).is_err());
        assert!(QuadCtx::with_nonresidue(7, 5).is_ok());
    }
}
