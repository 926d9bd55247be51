//! Hecke eigenvalue data of a quadratic Hilbert eigenform, its unramified Satake
//! data, Asai Artin factors, and the l-adic membership check for products of
//! local periods.
//!
//! Coefficient fields are Q or Q(sqrt d). Valuations are taken at one place above
//! l, normalized so that a uniformizer has valuation 1.

use crate::error::{Error, Result};
use crate::exactnum::{is_prime, is_qr, parse_rational, pow_p, q, val_q, QuadElem, Rational, SymCoef};
use crate::heckealg::{euler_poly, EulerKind, Group};
use crate::heckemod::{local_factor_checked, trace_level, vector_integrality, Level, TestVector};
use crate::whitzeta::ZetaOptions;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet};

pub const SCHEMA: &str = "eigenform/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoeffField {
    Rational,
    Quadratic { d: i64 },
}

fn squarefree(d: i64) -> bool {
    let n = d.unsigned_abs();
    (2..).take_while(|k| k * k <= n).all(|k| !n.is_multiple_of(k * k))
}

impl CoeffField {
    fn r(self) -> i64 {
        match self {
            CoeffField::Rational => 0,
            CoeffField::Quadratic { d } => d,
        }
    }

    pub fn elem(self, a: Rational, b: Rational) -> QuadElem {
        QuadElem::new(a, b, self.r())
    }

    pub fn rat(self, a: Rational) -> QuadElem {
        self.elem(a, Rational::zero())
    }

    /// Trace and norm in Z.
    pub fn is_integral(self, x: &QuadElem) -> bool {
        x.trace().is_integer() && x.norm().is_integer() && (self != CoeffField::Rational || x.a.is_integer())
    }

    pub fn render(self, x: &QuadElem) -> String {
        match self {
            CoeffField::Rational => x.a.to_string(),
            CoeffField::Quadratic { d } => {
                if x.b.is_zero() {
                    x.a.to_string()
                } else {
                    format!("{} + {}*sqrt({d})", x.a, x.b)
                }
            }
        }
    }

    fn parse(self, v: &Value) -> Result<QuadElem> {
        let part = |v: &Value| -> Result<Rational> {
            let s = match v {
                Value::String(s) => s.clone(),
                Value::Number(n) => n.to_string(),
                _ => return Err(Error::Input(format!("expected a rational, got {v}"))),
            };
            parse_rational(&s).ok_or_else(|| Error::Input(format!("bad rational {s:?}")))
        };
        match v {
            Value::Array(xs) if xs.len() == 2 => {
                if self == CoeffField::Rational {
                    return Err(Error::Input("quadratic entry in a rational coefficient field".into()));
                }
                Ok(self.elem(part(&xs[0])?, part(&xs[1])?))
            }
            _ => Ok(self.rat(part(v)?)),
        }
    }
}

/// A place of the coefficient field above l; `root` picks sqrt(d) mod l when l splits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Place {
    pub ell: u64,
    pub root: Option<i64>,
}

fn val_big(x: &BigInt, l: u64) -> i64 {
    let l = BigInt::from(l);
    let mut x = x.abs();
    let mut k = 0;
    while !x.is_zero() && (&x % &l).is_zero() {
        x /= &l;
        k += 1;
    }
    k
}

/// s with s^2 = d mod l^k, lifting s0 by Newton steps.
fn hensel_root(d: i64, s0: i64, l: u64, k: u32) -> BigInt {
    let m = BigInt::from(l).pow(k);
    let mut s = BigInt::from(s0);
    let two = BigInt::from(2);
    for _ in 0..=k {
        let f = (&s * &s - d).mod_floor(&m);
        let inv = crate::exactnum::mod_inverse(&(&two * &s), &m).expect("l odd and s a unit");
        s = (&s - f * inv).mod_floor(&m);
    }
    s
}

/// Splitting of l in the coefficient field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalType {
    Degree1,
    Inert,
    Ramified,
    Split { root: i64 },
}

impl CoeffField {
    pub fn local_type(self, place: &Place) -> Result<LocalType> {
        let l = place.ell;
        let d = match self {
            CoeffField::Rational => return Ok(LocalType::Degree1),
            CoeffField::Quadratic { d } => d,
        };
        if d.rem_euclid(l as i64) == 0 {
            return Ok(LocalType::Ramified);
        }
        if !is_qr(d, l) {
            return Ok(LocalType::Inert);
        }
        let dm = d.rem_euclid(l as i64);
        let root = match place.root {
            Some(r) => {
                if (r * r - dm).rem_euclid(l as i64) != 0 {
                    return Err(Error::Input(format!("{r} is not a square root of {d} mod {l}")));
                }
                r.rem_euclid(l as i64)
            }
            None => (1..l as i64).find(|s| (s * s - dm).rem_euclid(l as i64) == 0).expect("d is a residue"),
        };
        Ok(LocalType::Split { root })
    }

    /// Valuation at the place; None for zero.
    pub fn valuation(self, x: &QuadElem, place: &Place) -> Result<Option<i64>> {
        if x.is_zero() {
            return Ok(None);
        }
        let l = place.ell;
        Ok(Some(match self.local_type(place)? {
            LocalType::Degree1 => val_q(&x.a, l),
            LocalType::Inert => val_q(&x.norm(), l) / 2,
            LocalType::Ramified => val_q(&x.norm(), l),
            LocalType::Split { root } => {
                let den = x.a.denom().lcm(x.b.denom());
                let a = (&x.a * Rational::from_integer(den.clone())).to_integer();
                let b = (&x.b * Rational::from_integer(den.clone())).to_integer();
                let n = &a * &a - BigInt::from(self.r()) * &b * &b;
                let k = val_big(&n, l) as u32 + 1;
                let s = hensel_root(self.r(), root, l, k);
                let m = BigInt::from(l).pow(k);
                let y = (a + b * s).mod_floor(&m);
                let v = if y.is_zero() { k as i64 } else { val_big(&y, l) };
                v - val_big(&den, l)
            }
        }))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlaceEigen {
    /// Hecke eigenvalue lambda_u(f).
    pub lambda: QuadElem,
    /// Finite-order character value omega_f(uniformizer at u).
    pub omega: QuadElem,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrimeEigen {
    pub split: bool,
    pub places: Vec<PlaceEigen>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenformData {
    pub label: String,
    pub synthetic: bool,
    pub field_disc: u64,
    pub level_norm: u64,
    pub k: [u32; 2],
    pub t: [u32; 2],
    pub field: CoeffField,
    pub primes: BTreeMap<u64, PrimeEigen>,
}

impl EigenformData {
    /// w = k1 + 2 t1 = k2 + 2 t2.
    pub fn w(&self) -> i64 {
        (self.k[0] + 2 * self.t[0]) as i64
    }

    pub fn t_sum(&self) -> i64 {
        (self.t[0] + self.t[1]) as i64
    }

    /// Primes of Q where the base field E = Q(sqrt disc) splits.
    pub fn splits_in_e(&self, p: u64) -> bool {
        is_qr(self.field_disc as i64, p)
    }

    pub fn bad_primes(&self, ell: u64) -> BTreeSet<u64> {
        let mut s: BTreeSet<u64> = [2, ell].into_iter().collect();
        for n in [self.field_disc, self.level_norm] {
            let mut n = n;
            let mut f = 2;
            while f * f <= n {
                while n % f == 0 {
                    s.insert(f);
                    n /= f;
                }
                f += 1;
            }
            if n > 1 {
                s.insert(n);
            }
        }
        s
    }

    pub fn prime(&self, p: u64) -> Result<&PrimeEigen> {
        self.primes.get(&p).ok_or_else(|| Error::Input(format!("no eigenvalue data at p = {p}")))
    }
}

fn is_root_of_unity(field: CoeffField, x: &QuadElem) -> bool {
    let mut y = field.rat(q(1));
    for _ in 0..12 {
        y = &y * x;
    }
    y.is_one()
}

pub fn ingest(v: &Value) -> Result<EigenformData> {
    let bad = |m: &str| Error::Input(format!("eigenform data: {m}"));
    if v.get("schema").and_then(Value::as_str) != Some(SCHEMA) {
        return Err(bad(&format!("schema must be {SCHEMA:?}")));
    }
    let int = |key: &str| v.get(key).and_then(Value::as_u64).ok_or_else(|| bad(&format!("missing integer {key}")));
    let field_disc = int("field_disc")?;
    let level_norm = int("level_norm")?;
    let pair = |key: &str| -> Result<[u32; 2]> {
        let a = v
            .pointer(&format!("/weight/{key}"))
            .and_then(Value::as_array)
            .filter(|a| a.len() == 2)
            .ok_or_else(|| bad(&format!("weight.{key} must be a pair")))?;
        let x = |i: usize| a[i].as_u64().map(|x| x as u32).ok_or_else(|| bad("weights are non-negative integers"));
        Ok([x(0)?, x(1)?])
    };
    let (k, t) = (pair("k")?, pair("t")?);
    if k.iter().any(|&x| x < 2) {
        return Err(bad("weights k_i must be at least 2"));
    }
    if k[0] + 2 * t[0] != k[1] + 2 * t[1] {
        return Err(bad("k1 + 2 t1 != k2 + 2 t2"));
    }
    if field_disc < 5 || !is_prime_or_fundamental(field_disc) {
        return Err(bad("field_disc must be the discriminant of a real quadratic field"));
    }
    let field = match v.get("coefficient_field") {
        Some(Value::String(s)) if s == "Q" => CoeffField::Rational,
        Some(obj) => {
            let d = obj.get("d").and_then(Value::as_i64).ok_or_else(|| bad("coefficient_field needs d"))?;
            if d == 1 || d == 0 || !squarefree(d) {
                return Err(bad("coefficient field d must be squarefree and not 0 or 1"));
            }
            CoeffField::Quadratic { d }
        }
        None => return Err(bad("missing coefficient_field")),
    };
    let mut data = EigenformData {
        label: v.get("label").and_then(Value::as_str).unwrap_or("").to_string(),
        synthetic: v.get("synthetic").and_then(Value::as_bool).unwrap_or(false),
        field_disc,
        level_norm,
        k,
        t,
        field,
        primes: BTreeMap::new(),
    };
    let primes = v.get("primes").and_then(Value::as_object).ok_or_else(|| bad("missing primes"))?;
    for (key, entry) in primes {
        let p: u64 = key.parse().map_err(|_| bad(&format!("prime key {key:?}")))?;
        if !is_prime(p) || p == 2 {
            return Err(bad(&format!("{p} is not an odd prime")));
        }
        if field_disc % p == 0 || level_norm % p == 0 {
            return Err(bad(&format!("p = {p} divides the discriminant or the level")));
        }
        let split = match entry.get("type").and_then(Value::as_str) {
            Some("split") => true,
            Some("inert") => false,
            _ => return Err(bad(&format!("p = {p}: type must be split or inert"))),
        };
        if split != data.splits_in_e(p) {
            return Err(bad(&format!("p = {p}: type disagrees with the splitting in E")));
        }
        let places = entry.get("places").and_then(Value::as_array).ok_or_else(|| bad("missing places"))?;
        if places.len() != if split { 2 } else { 1 } {
            return Err(bad(&format!("p = {p}: wrong number of places")));
        }
        let mut out = vec![];
        for pl in places {
            let lambda = field.parse(pl.get("lambda").ok_or_else(|| bad("missing lambda"))?)?;
            let omega = field.parse(pl.get("omega").ok_or_else(|| bad("missing omega"))?)?;
            if !is_root_of_unity(field, &omega) {
                return Err(bad(&format!("p = {p}: omega is not of finite order")));
            }
            out.push(PlaceEigen { lambda, omega });
        }
        data.primes.insert(p, PrimeEigen { split, places: out });
    }
    Ok(data)
}

fn is_prime_or_fundamental(d: u64) -> bool {
    match d % 4 {
        1 => squarefree(d as i64),
        0 => {
            let m = d / 4;
            (m % 4 == 2 || m % 4 == 3) && squarefree(m as i64)
        }
        _ => false,
    }
}

/// Unramified data at p in the symmetric coordinates used by the Hecke algebra.
#[derive(Debug, Clone)]
pub struct SatakeData {
    pub p: u64,
    pub split: bool,
    /// Per place: (sum, product) of the roots of X^2 - lambda X + q^{w-1} eps.
    pub roots: Vec<(QuadElem, QuadElem)>,
    /// (e1, e2, f1, f2): inert (A + B, AB, 0, 1), split (u1 + v1, u1 v1, u2 + v2, u2 v2).
    pub coords: [QuadElem; 4],
    /// eps_f on the uniformizer of each place.
    pub eps: Vec<QuadElem>,
}

fn qpow(x: &QuadElem, k: u32, field: CoeffField) -> QuadElem {
    (0..k).fold(field.rat(q(1)), |acc, _| &acc * x)
}

pub fn satake_from_eigen(data: &EigenformData, p: u64) -> Result<SatakeData> {
    let pe = data.prime(p)?;
    let f = data.field;
    let w = data.w();
    let qu: i64 = if pe.split { p as i64 } else { (p * p) as i64 };
    let qw2 = q(qu).pow((w - 2) as i32);
    let qw1 = q(qu).pow((w - 1) as i32);
    let mut roots = vec![];
    let mut eps = vec![];
    for pl in &pe.places {
        let e = pl.omega.scale(&qw2);
        let s_eigen = e.scale(&qw2);
        if !f.is_integral(&pl.lambda) || !f.is_integral(&s_eigen) {
            return Err(Error::Input(format!("p = {p}: Hecke eigenvalues are not algebraic integers")));
        }
        roots.push((pl.lambda.clone(), e.scale(&qw1)));
        eps.push(e);
    }
    let coords = if pe.split {
        [roots[0].0.clone(), roots[0].1.clone(), roots[1].0.clone(), roots[1].1.clone()]
    } else {
        let pinv = pow_p(p, -1);
        [roots[0].0.scale(&pinv), roots[0].1.scale(&pow_p(p, -2)), f.rat(q(0)), f.rat(q(1))]
    };
    Ok(SatakeData { p, split: pe.split, roots, coords, eps })
}

/// Value of a symmetric-coordinate expression at the specialized coordinates.
pub fn eval_sym(f: &SymCoef, coords: &[QuadElem; 4], field: CoeffField) -> Result<QuadElem> {
    let mut total = field.rat(q(0));
    for (e, c) in f.terms() {
        let mut t = field.rat(c.clone());
        for i in 0..4 {
            let k = e[i];
            let base = if k >= 0 { coords[i].clone() } else { coords[i].inv()? };
            t = &t * &qpow(&base, k.unsigned_abs(), field);
        }
        total = &total + &t;
    }
    Ok(total)
}

#[derive(Debug, Clone)]
pub struct ArtinValue {
    /// det(1 - X Frob^{-1}) on the Asai representation at X = p^{-s0}, from Frobenius eigenvalues.
    pub artin: QuadElem,
    /// The representation-side Euler polynomial at p^{1 - (t1 + t2) - s0}.
    pub representation: QuadElem,
    pub shift_identity: bool,
}

/// Asai Artin factor from the Frobenius eigenvalues alpha, beta at each place,
/// twisted by t1 + t2.
fn artin_direct(data: &EigenformData, sd: &SatakeData, x: &Rational) -> QuadElem {
    let f = data.field;
    let c = pow_p(sd.p, -data.t_sum()) * x;
    let one = f.rat(q(1));
    if !sd.split {
        let (s, n) = &sd.roots[0];
        let c2 = &c * &c;
        let quad = &(&one - &s.scale(&c)) + &n.scale(&c2);
        let cen = &one - &n.scale(&c2);
        &quad * &cen
    } else {
        // prod over i, j of (1 - a_i b_j c) in terms of s_i = a_i + b_i, n_i = a_i b_i.
        let (s1, n1) = &sd.roots[0];
        let (s2, n2) = &sd.roots[1];
        let z = |k: i32| f.rat(c.pow(k));
        let c1 = &(s1 * s2) * &z(1);
        let c2 = &(&(&(&(s1 * s1) * n2) + &(&(s2 * s2) * n1)) - &(&(n1 * n2) * &f.rat(q(2)))) * &z(2);
        let c3 = &(&(&(n1 * n2) * s1) * s2) * &z(3);
        let c4 = &(&(n1 * n2) * &(n1 * n2)) * &z(4);
        &(&(&(&one - &c1) + &c2) - &c3) + &c4
    }
}

fn representation_euler(data: &EigenformData, sd: &SatakeData, y: &Rational) -> Result<QuadElem> {
    let kind = if sd.split { EulerKind::RsSplit } else { EulerKind::AsaiInert };
    let sat = euler_poly(kind, sd.p)?.satake();
    let f = data.field;
    let mut total = f.rat(q(0));
    for (k, c) in sat.terms() {
        total = &total + &eval_sym(c, &sd.coords, f)?.scale(&y.pow(*k as i32));
    }
    Ok(total)
}

pub fn asai_artin_value(data: &EigenformData, p: u64, s0: i64) -> Result<ArtinValue> {
    let sd = satake_from_eigen(data, p)?;
    let x = pow_p(p, -s0);
    let artin = artin_direct(data, &sd, &x);
    let y = pow_p(p, 1 - data.t_sum() - s0);
    let representation = representation_euler(data, &sd, &y)?;
    Ok(ArtinValue { shift_identity: artin == representation, artin, representation })
}

/// L_p(eps_f, 0)^{-1} = 1 - eps_f(p), and whether it equals
/// (1 - omega(p)) - (p^{2(w-2)} - 1) omega(p).
pub fn tate_inverse(data: &EigenformData, p: u64) -> Result<(QuadElem, bool)> {
    let sd = satake_from_eigen(data, p)?;
    let f = data.field;
    let one = f.rat(q(1));
    let eps_p = sd.eps.iter().fold(one.clone(), |acc, e| &acc * e);
    let omega_p = data.prime(p)?.places.iter().fold(one.clone(), |acc, pl| &acc * &pl.omega);
    let direct = &one - &eps_p;
    let factor = q(p as i64).pow(2 * (data.w() as i32 - 2)) - q(1);
    let via_omega = &(&one - &omega_p) - &omega_p.scale(&factor);
    Ok((direct.clone(), direct == via_omega))
}

#[derive(Debug, Clone, Serialize)]
pub struct PrimeLocalReport {
    pub p: u64,
    pub split: bool,
    pub in_s0: bool,
    pub level: Level,
    pub integral: bool,
    pub volume_inverses: Vec<String>,
    pub satake: Vec<String>,
    pub local_value: String,
    pub local_valuation: Option<i64>,
    pub tate_inverse: Option<String>,
    pub tate_identity: bool,
    pub l_inverse: String,
    pub l_inverse_valuation: Option<i64>,
    pub p_minus_one_valuation: i64,
    /// min(v(p - 1), v(L^{-1})) for p in S0, else 0.
    pub exponent: i64,
    pub shift_identity: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PeriodReport {
    pub label: String,
    pub ell: u64,
    pub place: Place,
    pub local_type: LocalType,
    pub s0: Vec<u64>,
    pub tate_applied: Vec<u64>,
    pub value: String,
    pub value_is_one: bool,
    pub valuation: Option<i64>,
    pub required: i64,
    pub preconditions_ok: bool,
    pub member: bool,
    pub primes: Vec<PrimeLocalReport>,
}

impl PeriodReport {
    pub fn holds(&self) -> bool {
        self.preconditions_ok && self.member
    }
}

#[derive(Default)]
pub struct PeriodOptions {
    /// The coprimality of l with h_E^+ #(O_E/n)^x, asserted by the caller; drops the Tate factors.
    pub class_number_coprime: bool,
    pub zeta: ZetaOptions,
}


pub fn period_ideal_check(
    data: &EigenformData,
    inputs: &[TestVector],
    s0: &BTreeSet<u64>,
    place: Place,
    opts: &PeriodOptions,
) -> Result<PeriodReport> {
    let ell = place.ell;
    if ell == 2 || !is_prime(ell) {
        return Err(Error::Input(format!("l = {ell} must be an odd prime (2 always lies in S)")));
    }
    if data.level_norm.is_multiple_of(ell) {
        return Err(Error::Input(format!("l = {ell} divides the norm of the level")));
    }
    let bad = data.bad_primes(ell);
    let f = data.field;
    let local_type = f.local_type(&place)?;
    let mut seen = BTreeSet::new();
    for v in inputs {
        if !seen.insert(v.p) {
            return Err(Error::Input(format!("two local inputs at p = {}", v.p)));
        }
        if bad.contains(&v.p) {
            return Err(Error::Input(format!("p = {} lies in the excluded set S", v.p)));
        }
        let want = if data.splits_in_e(v.p) { Group::SplitPair } else { Group::InertF };
        if v.group != want {
            return Err(Error::Input(format!("p = {}: vector group does not match the splitting in E", v.p)));
        }
    }
    for &p in s0 {
        if !seen.contains(&p) {
            return Err(Error::Input(format!("S0 prime {p} has no local input")));
        }
        if p % ell != 1 {
            return Err(Error::Input(format!("S0 prime {p} is not 1 mod l = {ell}")));
        }
    }

    let one = f.rat(q(1));
    let mut value = one.clone();
    let mut required = 0;
    let mut preconditions_ok = true;
    let mut tate_applied = vec![];
    let mut primes = vec![];
    for v in inputs {
        let p = v.p;
        let in_s0 = s0.contains(&p);
        let expected_level = if in_s0 { Level::Kp } else { Level::K };
        if v.level != expected_level {
            return Err(Error::Input(format!("p = {p}: expected level {expected_level:?}")));
        }
        let sd = satake_from_eigen(data, p)?;
        let (integral, reports) = vector_integrality(v)?;
        preconditions_ok &= integral;
        let at_k = if in_s0 { trace_level(v)? } else { v.clone() };
        let lf = local_factor_checked(&at_k, &opts.zeta)?;
        let local = eval_sym(&lf.zeta, &sd.coords, f)?;
        value = &value * &local;

        let (tate, tate_ok) = tate_inverse(data, p)?;
        let phi_at_zero = !v.vanishes_at_origin();
        let mut tate_out = None;
        if in_s0 && phi_at_zero {
            let eps_p = &one - &tate;
            if eps_p.is_one() {
                return Err(Error::Input(format!("p = {p}: eps_f(p) = 1 while Phi_p(0, 0) != 0")));
            }
            if !opts.class_number_coprime {
                value = &value * &tate;
                tate_applied.push(p);
            }
            tate_out = Some(f.render(&tate));
        }
        let artin = asai_artin_value(data, p, 1 - data.t_sum())?;
        let l_inv = artin.artin.clone();
        let l_val = f.valuation(&l_inv, &place)?;
        let pm1 = f.valuation(&f.rat(q(p as i64 - 1)), &place)?.expect("p - 1 != 0");
        let exponent = if in_s0 { l_val.map_or(pm1, |x| x.min(pm1)) } else { 0 };
        required += exponent;
        primes.push(PrimeLocalReport {
            p,
            split: sd.split,
            in_s0,
            level: v.level,
            integral,
            volume_inverses: reports.iter().map(|r| r.volume_inverse.to_string()).collect(),
            satake: sd.coords.iter().map(|c| f.render(c)).collect(),
            local_value: f.render(&local),
            local_valuation: f.valuation(&local, &place)?,
            tate_inverse: tate_out,
            tate_identity: tate_ok,
            l_inverse: f.render(&l_inv),
            l_inverse_valuation: l_val,
            p_minus_one_valuation: pm1,
            exponent,
            shift_identity: artin.shift_identity,
        });
    }
    let valuation = f.valuation(&value, &place)?;
    let member = valuation.is_none_or(|v| v >= required);
    Ok(PeriodReport {
        label: data.label.clone(),
        ell,
        place,
        local_type,
        s0: s0.iter().copied().collect(),
        tate_applied,
        value_is_one: value.is_one(),
        value: f.render(&value),
        valuation,
        required,
        preconditions_ok,
        member,
        primes,
    })
}

/// Local inputs file: {"inputs": [vector, ...]} with the vector JSON of the test-vector module.
pub fn parse_inputs(v: &Value) -> Result<Vec<TestVector>> {
    let list = v.get("inputs").and_then(Value::as_array).ok_or_else(|| Error::Input("missing inputs array".into()))?;
    list.iter().map(TestVector::from_json).collect()
}

pub fn inputs_to_json(inputs: &[TestVector]) -> Value {
    json!({"inputs": inputs.iter().map(TestVector::to_json).collect::<Vec<_>>()})
}

/// Integer-valued sanity helper used by reports: l-adic valuation of a rational.
pub fn rational_valuation(x: &Rational, ell: u64) -> Option<i64> {
    if x.is_zero() {
        None
    } else {
        Some(val_q(x, ell))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(weight: Value, field: Value, primes: Value) -> Value {
        json!({
            "schema": SCHEMA, "label": "t", "synthetic": true, "field_disc": 5, "level_norm": 1,
            "weight": weight, "coefficient_field": field, "primes": primes,
        })
    }

    fn basic() -> EigenformData {
        ingest(&form(
            json!({"k": [2, 2], "t": [0, 0]}),
            json!("Q"),
            json!({"3": {"type": "inert", "places": [{"lambda": "0", "omega": "1"}]},
                   "11": {"type": "split", "places": [{"lambda": "2", "omega": "1"}, {"lambda": "-4", "omega": "-1"}]}}),
        ))
        .unwrap()
    }

    #[test]
    fn ingest_examples() {
        basic();
        let bad_weight = form(json!({"k": [3, 2], "t": [0, 0]}), json!("Q"), json!({}));
        assert!(ingest(&bad_weight).is_err());
        let quad = form(
            json!({"k": [2, 2], "t": [0, 0]}),
            json!({"d": 5}),
            json!({"7": {"type": "inert", "places": [{"lambda": ["1", "1"], "omega": "1"}]}}),
        );
        assert_eq!(ingest(&quad).unwrap().field, CoeffField::Quadratic { d: 5 });
        let wrong_type = form(
            json!({"k": [2, 2], "t": [0, 0]}),
            json!("Q"),
            json!({"11": {"type": "inert", "places": [{"lambda": "1", "omega": "1"}]}}),
        );
        assert!(ingest(&wrong_type).is_err());
    }

    #[test]
    fn satake_examples() {
        let d = basic();
        let s = satake_from_eigen(&d, 3).unwrap();
        assert!(s.roots[0].0.is_zero());
        assert_eq!(s.roots[0].1, d.field.rat(q(9)));
        let s = satake_from_eigen(&d, 11).unwrap();
        assert_eq!(s.roots.len(), 2);
        let mut half = d.clone();
        half.primes.get_mut(&3).unwrap().places[0].lambda = d.field.rat(crate::exactnum::qf(1, 2));
        assert!(satake_from_eigen(&half, 3).is_err());
    }

    #[test]
    fn shift_identity_and_tate() {
        let d = basic();
        for p in [3, 11] {
            for s0 in -1..3 {
                assert!(asai_artin_value(&d, p, s0).unwrap().shift_identity);
            }
            assert!(tate_inverse(&d, p).unwrap().1);
        }
        // Trivial central character at an inert prime: the Asai factor vanishes at s = 0.
        assert!(asai_artin_value(&d, 3, 1).unwrap().artin.is_zero());
    }

    #[test]
    fn valuations_at_places() {
        let f = CoeffField::Quadratic { d: 5 };
        let x = f.elem(q(1), q(1)); // 1 + sqrt5, norm -4
        let at = |ell, root| f.valuation(&x, &Place { ell, root }).unwrap();
        assert_eq!(at(5, None), Some(0));
        let y = f.elem(q(0), q(1)); // sqrt5 ramified at 5
        assert_eq!(f.valuation(&y, &Place { ell: 5, root: None }).unwrap(), Some(1));
        // 11 splits: 4^2 = 5 mod 11. (4 + sqrt5)(4 - sqrt5) = 11.
        let z = f.elem(q(4), q(-1));
        let v4 = f.valuation(&z, &Place { ell: 11, root: Some(4) }).unwrap();
        let v7 = f.valuation(&z, &Place { ell: 11, root: Some(7) }).unwrap();
        assert_eq!((v4.unwrap(), v7.unwrap()), (1, 0));
        // 3 is inert in Q(sqrt5).
        assert_eq!(f.valuation(&f.rat(q(9)), &Place { ell: 3, root: None }).unwrap(), Some(2));
        assert_eq!(at(3, None), Some(0));
    }

    #[test]
    fn unramified_inputs_give_one() {
        let d = basic();
        let inputs = vec![
            TestVector::generator(3, Group::InertF).unwrap(),
            TestVector::generator(11, Group::SplitPair).unwrap(),
        ];
        let r = period_ideal_check(&d, &inputs, &BTreeSet::new(), Place { ell: 5, root: None }, &Default::default())
            .unwrap();
        assert!(r.value_is_one && r.holds());
        assert_eq!(r.required, 0);
    }

    #[test]
    fn ell_two_rejected() {
        let d = basic();
        let inputs = vec![TestVector::generator(3, Group::InertF).unwrap()];
        let s0 = [3].into_iter().collect();
        assert!(period_ideal_check(&d, &inputs, &s0, Place { ell: 2, root: None }, &Default::default()).is_err());
    }
}
