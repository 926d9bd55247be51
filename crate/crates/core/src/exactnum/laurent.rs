use super::{q, Rational};
use crate::error::{Error, Result};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt::Debug;

/// Commutative ring operations needed by polynomial containers.
pub trait Ring: Clone + PartialEq + Debug + Send + Sync {
    fn rzero() -> Self;
    fn rone() -> Self;
    fn ris_zero(&self) -> bool;
    fn radd(&self, o: &Self) -> Self;
    fn rsub(&self, o: &Self) -> Self;
    fn rmul(&self, o: &Self) -> Self;
    fn rneg(&self) -> Self;
    fn from_rational(c: &Rational) -> Self;
    /// Multiplicative inverse when it exists in the ring.
    fn try_inv(&self) -> Option<Self>;

    fn rpow(&self, k: u32) -> Self {
        let mut r = Self::rone();
        for _ in 0..k {
            r = r.rmul(self);
        }
        r
    }
}

impl Ring for Rational {
    fn rzero() -> Self {
        Zero::zero()
    }
    fn rone() -> Self {
        One::one()
    }
    fn ris_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn radd(&self, o: &Self) -> Self {
        self + o
    }
    fn rsub(&self, o: &Self) -> Self {
        self - o
    }
    fn rmul(&self, o: &Self) -> Self {
        self * o
    }
    fn rneg(&self) -> Self {
        -self.clone()
    }
    fn from_rational(c: &Rational) -> Self {
        c.clone()
    }
    fn try_inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// Sparse Laurent polynomial in one variable X.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentPoly<C: Ring> {
    terms: BTreeMap<i64, C>,
}

impl<C: Ring> Default for LaurentPoly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Ring> LaurentPoly<C> {
    pub fn zero() -> Self {
        LaurentPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, C::rone())
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(k: i64, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.ris_zero() {
            terms.insert(k, c);
        }
        LaurentPoly { terms }
    }

    /// Build from coefficients of X^0, X^1, ...
    pub fn from_coeffs(cs: Vec<C>) -> Self {
        let mut p = Self::zero();
        for (k, c) in cs.into_iter().enumerate() {
            p.add_term(k as i64, &c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, k: i64) -> C {
        self.terms.get(&k).cloned().unwrap_or_else(C::rzero)
    }

    pub fn low(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn high(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn add_term(&mut self, k: i64, c: &C) {
        if c.ris_zero() {
            return;
        }
        let v = match self.terms.get(&k) {
            Some(old) => old.radd(c),
            None => c.clone(),
        };
        if v.ris_zero() {
            self.terms.remove(&k);
        } else {
            self.terms.insert(k, v);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (k, c) in &o.terms {
            r.add_term(*k, c);
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (k, c) in &o.terms {
            r.add_term(*k, &c.rneg());
        }
        r
    }

    pub fn neg(&self) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(k, c)| (*k, c.rneg())).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &o.terms {
                r.add_term(k1 + k2, &c1.rmul(c2));
            }
        }
        r
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut r = Self::zero();
        for (k, x) in &self.terms {
            r.add_term(*k, &x.rmul(c));
        }
        r
    }

    /// Multiply by X^s.
    pub fn shift(&self, s: i64) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(k, c)| (k + s, c.clone())).collect() }
    }

    /// Terms with exponent strictly below `n`.
    pub fn truncate_below(&self, n: i64) -> Self {
        LaurentPoly { terms: self.terms.range(..n).map(|(k, c)| (*k, c.clone())).collect() }
    }

    pub fn map<D: Ring>(&self, f: impl Fn(&C) -> D) -> LaurentPoly<D> {
        let mut r = LaurentPoly::zero();
        for (k, c) in &self.terms {
            r.add_term(*k, &f(c));
        }
        r
    }

    /// Value at X = 1, i.e. the sum of the coefficients.
    pub fn at_one(&self) -> C {
        self.terms.values().fold(C::rzero(), |acc, c| acc.radd(c))
    }

    /// Value at X = x; negative exponents need x invertible.
    pub fn eval(&self, x: &C) -> Result<C> {
        let mut total = C::rzero();
        let inv = x.try_inv();
        for (k, c) in &self.terms {
            let pw = if *k >= 0 {
                x.rpow(*k as u32)
            } else {
                inv.as_ref().ok_or(Error::DivisionByZero)?.rpow((-k) as u32)
            };
            total = total.radd(&c.rmul(&pw));
        }
        Ok(total)
    }

    /// Exact quotient self / d using ascending (X-adic) division.
    pub fn exact_div(&self, d: &Self) -> Result<Self> {
        let (dl, dh) = match (d.low(), d.high()) {
            (Some(l), Some(h)) => (l, h),
            _ => return Err(Error::DivisionByZero),
        };
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let lead_inv = d.terms[&dl]
            .try_inv()
            .ok_or_else(|| Error::NotDivisible("lowest coefficient of divisor is not invertible".into()))?;
        let max_q = self.high().unwrap() - dh;
        let mut rest = self.clone();
        let mut quot = Self::zero();
        while let Some(e) = rest.low() {
            let qe = e - dl;
            if qe > max_q {
                return Err(Error::NotDivisible(format!("remainder starting at X^{e}")));
            }
            let c = rest.terms[&e].rmul(&lead_inv);
            rest = rest.sub(&d.shift(qe).scale(&c));
            quot.add_term(qe, &c);
        }
        Ok(quot)
    }
}

impl LaurentPoly<Rational> {
    pub fn from_ints(cs: &[i64]) -> Self {
        Self::from_coeffs(cs.iter().map(|&c| q(c)).collect())
    }

    fn monic(&self) -> Self {
        match self.high() {
            Some(h) => self.scale(&self.terms[&h].recip()),
            None => self.clone(),
        }
    }

    /// Polynomial remainder (both arguments treated as polynomials in X).
    fn rem(&self, d: &Self) -> Self {
        let dh = d.high().unwrap();
        let lead = d.terms[&dh].clone();
        let mut r = self.clone();
        while let Some(h) = r.high() {
            if h < dh {
                break;
            }
            let c = &r.terms[&h] / &lead;
            r = r.sub(&d.shift(h - dh).scale(&c));
        }
        r
    }

    /// Monic gcd, ignoring powers of X.
    pub fn gcd(&self, o: &Self) -> Self {
        let norm = |p: &Self| p.shift(-p.low().unwrap_or(0));
        let (mut a, mut b) = (norm(self), norm(o));
        while !b.is_zero() {
            let r = norm(&a.rem(&b));
            a = b;
            b = r;
        }
        a.monic()
    }
}

impl<C: Ring + std::fmt::Display> std::fmt::Display for LaurentPoly<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(k, c)| format!("({c})*X^{k}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Quotient of two Laurent polynomials.
#[derive(Debug, Clone)]
pub struct RatFunc<C: Ring> {
    pub num: LaurentPoly<C>,
    pub den: LaurentPoly<C>,
}

impl<C: Ring> RatFunc<C> {
    pub fn new(num: LaurentPoly<C>, den: LaurentPoly<C>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFunc { num, den }.normalized())
    }

    pub fn from_poly(num: LaurentPoly<C>) -> Self {
        RatFunc { num, den: LaurentPoly::one() }
    }

    /// Scale so the denominator's constant term is 1 when that term is invertible.
    fn normalized(self) -> Self {
        if let Some(c0) = self.den.terms.get(&0).and_then(|c| c.try_inv()) {
            RatFunc { num: self.num.scale(&c0), den: self.den.scale(&c0) }
        } else {
            self
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return RatFunc { num: self.num.add(&o.num), den: self.den.clone() };
        }
        RatFunc { num: self.num.mul(&o.den).add(&o.num.mul(&self.den)), den: self.den.mul(&o.den) }
            .normalized()
    }

    pub fn mul(&self, o: &Self) -> Self {
        RatFunc { num: self.num.mul(&o.num), den: self.den.mul(&o.den) }.normalized()
    }

    pub fn mul_poly(&self, p: &LaurentPoly<C>) -> Self {
        RatFunc { num: self.num.mul(p), den: self.den.clone() }
    }

    /// Equality of the represented functions.
    pub fn equals(&self, o: &Self) -> bool {
        self.num.mul(&o.den) == o.num.mul(&self.den)
    }
}

impl RatFunc<Rational> {
    /// Cancel the common factor of numerator and denominator.
    pub fn reduce(&self) -> Self {
        if self.num.is_zero() {
            return RatFunc::from_poly(LaurentPoly::zero());
        }
        let g = self.num.gcd(&self.den);
        let num = self.num.exact_div(&g).expect("gcd divides numerator");
        let den = self.den.exact_div(&g).expect("gcd divides denominator");
        RatFunc { num, den }.normalized()
    }
}

/// The Laurent polynomial h with f = h / g.
pub fn ratfunc_exact_div<C: Ring>(f: &RatFunc<C>, g: &LaurentPoly<C>) -> Result<LaurentPoly<C>> {
    if g.is_zero() {
        return Err(Error::DivisionByZero);
    }
    f.num.mul(g).exact_div(&f.den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{MPoly, SymCoef};

    fn lp(cs: &[i64]) -> LaurentPoly<Rational> {
        LaurentPoly::from_ints(cs)
    }

    #[test]
    fn divides_out_product_of_factors() {
        let a = SymCoef::var(0);
        let b = SymCoef::var(1);
        let one = SymCoef::one();
        let f1 = LaurentPoly::from_coeffs(vec![one.clone(), a.neg()]);
        let f2 = LaurentPoly::from_coeffs(vec![one.clone(), b.neg()]);
        let g = f1.mul(&f2);
        let f = RatFunc::new(LaurentPoly::one(), g.clone()).unwrap();
        assert_eq!(ratfunc_exact_div(&f, &g).unwrap(), LaurentPoly::one());
        let _ = MPoly::zero();
    }

    #[test]
    fn one_plus_x_over_one_minus_x() {
        let f = RatFunc::new(lp(&[1, 1]), lp(&[1, -1])).unwrap();
        assert_eq!(ratfunc_exact_div(&f, &lp(&[1, -1])).unwrap(), lp(&[1, 1]));
    }

    #[test]
    fn quotient_by_one_minus_x_squared_is_polynomial() {
        // (1 - X^2) / (1 - X) = 1 + X exactly.
        let f = RatFunc::new(lp(&[1]), lp(&[1, -1])).unwrap();
        assert_eq!(ratfunc_exact_div(&f, &lp(&[1, 0, -1])).unwrap(), lp(&[1, 1]));
    }

    #[test]
    fn non_divisible_reported() {
        let f = RatFunc::new(lp(&[1]), lp(&[1, 0, -1])).unwrap();
        assert!(matches!(ratfunc_exact_div(&f, &lp(&[1, -1])), Err(Error::NotDivisible(_))));
    }

    #[test]
    fn gcd_reduction() {
        let f = RatFunc::new(lp(&[1, 0, -1]), lp(&[1, -2, 1])).unwrap().reduce();
        assert_eq!(f.num, lp(&[1, 1]));
        assert_eq!(f.den, lp(&[1, -1]));
    }

    #[test]
    fn evaluation_with_negative_powers() {
        let p = lp(&[0, 1]).add(&LaurentPoly::monomial(-1, q(2)));
        assert_eq!(p.eval(&q(2)).unwrap(), q(3));
        assert_eq!(p.at_one(), q(3));
    }
}
