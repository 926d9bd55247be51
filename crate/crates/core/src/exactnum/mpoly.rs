use super::{fmt_rational, q, Rational};
use crate::error::{Error, Result};
use num_traits::Zero;
use std::collections::BTreeMap;

/// Exponent vector over four variable slots.
pub type Exp = [i32; 4];

/// Sparse Laurent polynomial in four variables with rational coefficients.
///
/// The same type serves for Satake parameters (A, B) or (u1, v1, u2, v2),
/// for symmetric coordinates (e1, e2, f1, f2) and for Hecke generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MPoly {
    terms: BTreeMap<Exp, Rational>,
}

/// Polynomial in e1 = A+B, e2 = AB (slots 0, 1) and, for split primes,
/// f1 = u2+v2, f2 = u2 v2 (slots 2, 3).
pub type SymCoef = MPoly;

impl MPoly {
    pub fn zero() -> Self {
        MPoly { terms: BTreeMap::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial([0; 4], c)
    }

    pub fn one() -> Self {
        Self::constant(q(1))
    }

    pub fn monomial(e: Exp, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        MPoly { terms }
    }

    /// The variable in slot i.
    pub fn var(i: usize) -> Self {
        let mut e = [0; 4];
        e[i] = 1;
        Self::monomial(e, q(1))
    }

    pub fn var_pow(i: usize, k: i32) -> Self {
        let mut e = [0; 4];
        e[i] = k;
        Self::monomial(e, q(1))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &Exp) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&[0; 4]).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, e: Exp, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(*e, c);
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(*e, &-c.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        self.scale(&q(-1))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MPoly { terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e = [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3]];
                r.add_term(e, &(c1 * c2));
            }
        }
        r
    }

    /// Multiply by a monomial.
    pub fn shift(&self, e: Exp) -> Self {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(f, c)| ([f[0] + e[0], f[1] + e[1], f[2] + e[2], f[3] + e[3]], c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut r = Self::one();
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// Inverse of a single monomial.
    pub fn monomial_inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next().unwrap();
        Some(Self::monomial([-e[0], -e[1], -e[2], -e[3]], c.recip()))
    }

    /// Swap two slots.
    pub fn swap(&self, i: usize, j: usize) -> Self {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut f = *e;
                    f.swap(i, j);
                    (f, c.clone())
                })
                .collect(),
        }
    }

    /// Negate the exponents in the listed slots.
    pub fn invert_slots(&self, slots: &[usize]) -> Self {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut f = *e;
                    for &s in slots {
                        f[s] = -f[s];
                    }
                    (f, c.clone())
                })
                .collect(),
        }
    }

    /// Ring substitution: slot i maps to `images[i]`, negative powers to `inverses[i]`.
    pub fn substitute<R: super::Ring>(&self, images: &[R; 4], inverses: &[Option<R>; 4]) -> Result<R> {
        let mut total = R::rzero();
        for (e, c) in &self.terms {
            let mut t = R::from_rational(c);
            for i in 0..4 {
                let k = e[i];
                if k > 0 {
                    t = t.rmul(&images[i].rpow(k as u32));
                } else if k < 0 {
                    let inv = inverses[i]
                        .as_ref()
                        .ok_or_else(|| Error::Input(format!("negative power in slot {i}")))?;
                    t = t.rmul(&inv.rpow((-k) as u32));
                }
            }
            total = total.radd(&t);
        }
        Ok(total)
    }

    /// Substitution of MPoly images where negative powers use monomial inverses.
    pub fn subst_poly(&self, images: &[MPoly; 4]) -> Result<MPoly> {
        let inverses = [0, 1, 2, 3].map(|i| images[i].monomial_inverse());
        self.substitute(images, &inverses)
    }

    /// Min and max exponent in slot i.
    pub fn exp_range(&self, i: usize) -> Option<(i32, i32)> {
        let mut it = self.terms.keys().map(|e| e[i]);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), x| (lo.min(x), hi.max(x))))
    }

    pub fn map_coeffs(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        let mut r = Self::zero();
        for (e, c) in &self.terms {
            r.add_term(*e, &f(c));
        }
        r
    }

    pub fn coeffs(&self) -> impl Iterator<Item = &Rational> {
        self.terms.values()
    }

    /// Render with the given slot names.
    pub fn render(&self, names: [&str; 4]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut s = if c.is_integer() { c.numer().to_string() } else { fmt_rational(c) };
                for i in 0..4 {
                    match e[i] {
                        0 => {}
                        1 => s.push_str(&format!("*{}", names[i])),
                        k => s.push_str(&format!("*{}^{}", names[i], k)),
                    }
                }
                s
            })
            .collect();
        parts.join(" + ")
    }
}

impl std::fmt::Display for MPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.render(["x0", "x1", "x2", "x3"]))
    }
}

/// Rewrite a polynomial symmetric in slots (i, j) in terms of their
/// elementary symmetric functions, stored back in the same slots.
pub fn sym_reduce_pair(p: &MPoly, i: usize, j: usize) -> Result<MPoly> {
    if p.swap(i, j) != *p {
        return Err(Error::NotSymmetric);
    }
    // Clear negative powers with a power of the product.
    let k = p.exp_range(i).map(|(lo, _)| (-lo).max(0)).unwrap_or(0);
    let mut shift = [0; 4];
    shift[i] = k;
    shift[j] = k;
    let mut rest = p.shift(shift);
    let mut out = MPoly::zero();
    let e1 = MPoly::var(i).add(&MPoly::var(j));
    let e2 = MPoly::var(i).mul(&MPoly::var(j));
    while let Some((e, c)) = rest
        .terms
        .iter()
        .filter(|(e, _)| e[i] >= e[j])
        .max_by_key(|(e, _)| (e[i] + e[j], e[i]))
        .map(|(e, c)| (*e, c.clone()))
    {
        let (a, b) = (e[i], e[j]);
        let mut other = e;
        other[i] = 0;
        other[j] = 0;
        let expanded = e1.pow((a - b) as u32).mul(&e2.pow(b as u32)).shift(other).scale(&c);
        rest = rest.sub(&expanded);
        let mut te = other;
        te[i] = a - b;
        te[j] = b - k;
        out.add_term(te, &c);
    }
    if !rest.is_zero() {
        return Err(Error::NotSymmetric);
    }
    Ok(out)
}

/// Express a polynomial symmetric in (A, B) = slots (0, 1) through e1, e2.
pub fn sym_reduce(p: &MPoly) -> Result<SymCoef> {
    sym_reduce_pair(p, 0, 1)
}

/// Expand symmetric coordinates in slots (i, j) back into the variables.
pub fn sym_expand_pair(s: &MPoly, i: usize, j: usize) -> MPoly {
    let mut images = [0, 1, 2, 3].map(MPoly::var);
    images[i] = MPoly::var(i).add(&MPoly::var(j));
    images[j] = MPoly::var(i).mul(&MPoly::var(j));
    s.subst_poly(&images).expect("e2 is a monomial")
}

impl super::Ring for MPoly {
    fn rzero() -> Self {
        MPoly::zero()
    }
    fn rone() -> Self {
        MPoly::one()
    }
    fn ris_zero(&self) -> bool {
        MPoly::is_zero(self)
    }
    fn radd(&self, o: &Self) -> Self {
        MPoly::add(self, o)
    }
    fn rsub(&self, o: &Self) -> Self {
        MPoly::sub(self, o)
    }
    fn rmul(&self, o: &Self) -> Self {
        MPoly::mul(self, o)
    }
    fn rneg(&self) -> Self {
        MPoly::neg(self)
    }
    fn from_rational(c: &Rational) -> Self {
        MPoly::constant(c.clone())
    }
    fn try_inv(&self) -> Option<Self> {
        self.monomial_inverse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> MPoly {
        MPoly::var(0)
    }
    fn b() -> MPoly {
        MPoly::var(1)
    }

    #[test]
    fn newton_identity() {
        let p = a().pow(2).add(&b().pow(2));
        let expect = MPoly::var(0).pow(2).sub(&MPoly::var(1).scale(&q(2)));
        assert_eq!(sym_reduce(&p).unwrap(), expect);
    }

    #[test]
    fn complete_homogeneous_degree_two() {
        let p = a().pow(2).add(&a().mul(&b())).add(&b().pow(2));
        let expect = MPoly::var(0).pow(2).sub(&MPoly::var(1));
        assert_eq!(sym_reduce(&p).unwrap(), expect);
    }

    #[test]
    fn antisymmetric_rejected() {
        assert_eq!(sym_reduce(&a().sub(&b())), Err(Error::NotSymmetric));
    }

    #[test]
    fn laurent_symmetric_reduces() {
        // A^-1 + B^-1 = e1 / e2
        let p = MPoly::var_pow(0, -1).add(&MPoly::var_pow(1, -1));
        let s = sym_reduce(&p).unwrap();
        assert_eq!(s, MPoly::monomial([1, -1, 0, 0], q(1)));
        assert_eq!(sym_expand_pair(&s, 0, 1), p);
    }

    #[test]
    fn two_pairs_reduce_independently() {
        let p = a().add(&b()).mul(&MPoly::var(2).mul(&MPoly::var(3)));
        let s = sym_reduce_pair(&sym_reduce_pair(&p, 0, 1).unwrap(), 2, 3).unwrap();
        assert_eq!(s, MPoly::monomial([1, 0, 0, 1], q(1)));
    }
}
