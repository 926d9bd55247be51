//! Exact arithmetic: rationals with p-adic valuations, the unramified
//! quadratic extension, sparse Laurent polynomials and rational functions.

mod laurent;
mod mpoly;
mod quad;

pub use laurent::{ratfunc_exact_div, LaurentPoly, RatFunc, Ring};
pub use mpoly::{sym_expand_pair, sym_reduce, sym_reduce_pair, Exp, MPoly, SymCoef};
pub use quad::{PVal, QuadCtx, QuadElem};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

/// Valuation of zero.
pub const INF: i64 = i64::MAX;

pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// p^k as a rational, k of any sign.
pub fn pow_p(p: u64, k: i64) -> Rational {
    let base = BigInt::from(p).pow(k.unsigned_abs() as u32);
    if k >= 0 {
        Rational::from_integer(base)
    } else {
        Rational::new(BigInt::one(), base)
    }
}

fn val_int(n: &BigInt, p: u64) -> i64 {
    let pb = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (qt, r) = n.div_rem(&pb);
        if !r.is_zero() {
            return v;
        }
        n = qt;
        v += 1;
    }
}

/// p-adic valuation; `INF` for zero.
pub fn val_q(x: &Rational, p: u64) -> i64 {
    if x.is_zero() {
        return INF;
    }
    val_int(x.numer(), p) - val_int(x.denom(), p)
}

/// True when the denominator is a power of p.
pub fn in_z_1_over_p(x: &Rational, p: u64) -> bool {
    let mut d = x.denom().clone();
    let pb = BigInt::from(p);
    while (&d % &pb).is_zero() {
        d /= &pb;
    }
    d.is_one()
}

/// True when v_p(x) >= 0.
pub fn is_p_integral(x: &Rational, p: u64) -> bool {
    !(x.denom() % BigInt::from(p)).is_zero()
}

/// Residue of a p-integral rational modulo `modulus` (a power of p), in [0, modulus).
pub fn residue(x: &Rational, modulus: &BigInt) -> BigInt {
    let d = x.denom().mod_floor(modulus);
    let inv = mod_inverse(&d, modulus).expect("denominator must be a unit");
    (x.numer() * inv).mod_floor(modulus)
}

/// Residue as u64 for moduli that fit.
pub fn residue_u64(x: &Rational, modulus: u64) -> u64 {
    residue(x, &BigInt::from(modulus)).to_u64().unwrap()
}

pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Canonical representative of x modulo p^n Z_p: p^v * m with 0 <= m < p^(n-v), or 0.
pub fn reduce_mod_pn(x: &Rational, p: u64, n: i64) -> Rational {
    let v = val_q(x, p);
    if v >= n {
        return Rational::zero();
    }
    let unit = x / pow_p(p, v);
    let m = residue(&unit, &BigInt::from(p).pow((n - v) as u32));
    pow_p(p, v) * Rational::from_integer(m)
}

/// True when x is a square modulo the odd prime p (x a unit).
pub fn is_qr(x: i64, p: u64) -> bool {
    let pb = BigInt::from(p);
    let e = BigInt::from((p - 1) / 2);
    BigInt::from(x).mod_floor(&pb).modpow(&e, &pb).is_one()
}

pub fn smallest_nonresidue(p: u64) -> i64 {
    (2..p as i64).find(|&r| !is_qr(r, p)).expect("odd prime has a non-residue")
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

pub fn fmt_rational(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// Serde adapter storing a rational as the string "n/d".
pub mod rational_str {
    use super::{fmt_rational, parse_rational, Rational};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match &v {
            serde_json::Value::String(s) => {
                parse_rational(s).ok_or_else(|| D::Error::custom(format!("bad rational {s}")))
            }
            serde_json::Value::Number(n) if n.is_i64() => Ok(super::q(n.as_i64().unwrap())),
            _ => Err(D::Error::custom("rational must be a string \"n/d\" or an integer")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations_of_rationals() {
        assert_eq!(val_q(&qf(9, 4), 3), 2);
        assert_eq!(val_q(&qf(5, 27), 3), -3);
        assert_eq!(val_q(&q(0), 3), INF);
    }

    #[test]
    fn reduction_mod_power() {
        assert_eq!(reduce_mod_pn(&qf(1, 2), 3, 2), q(5));
        assert_eq!(reduce_mod_pn(&qf(10, 3), 3, 1), qf(1, 3));
        assert_eq!(reduce_mod_pn(&q(27), 3, 3), q(0));
    }

    #[test]
    fn nonresidues() {
        assert_eq!(smallest_nonresidue(3), 2);
        assert_eq!(smallest_nonresidue(5), 2);
        assert_eq!(smallest_nonresidue(7), 3);
        assert_eq!(smallest_nonresidue(17), 3);
    }

    #[test]
    fn rational_strings_round_trip() {
        let x = qf(-7, 12);
        assert_eq!(parse_rational(&fmt_rational(&x)), Some(x));
        assert_eq!(parse_rational("4"), Some(q(4)));
        assert_eq!(parse_rational("1/0"), None);
    }
}
