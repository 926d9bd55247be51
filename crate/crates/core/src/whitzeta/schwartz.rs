use crate::error::{Error, Result};
use crate::exactnum::{pow_p, q, rational_str, reduce_mod_pn, val_q, Rational};
use crate::padicgrp::Mat2;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

const TRANSLATE_BOX_CAP: u128 = 4_000_000;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
struct R(#[serde(with = "rational_str")] Rational);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct RawCell {
    c: [R; 2],
    coef: R,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct RawSchwartz {
    level: u32,
    cells: Vec<RawCell>,
}

/// coef * ch((x, y) + p^level Z_p^2)
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cell {
    pub center: (Rational, Rational),
    pub coef: Rational,
}

/// A finite combination of indicator functions of cells of side p^-level in Q_p^2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "RawSchwartz", into = "RawSchwartz")]
pub struct SchwartzFn {
    pub level: u32,
    pub cells: Vec<Cell>,
}

impl From<RawSchwartz> for SchwartzFn {
    fn from(r: RawSchwartz) -> Self {
        let cells = r
            .cells
            .into_iter()
            .map(|c| {
                let [x, y] = c.c;
                Cell { center: (x.0, y.0), coef: c.coef.0 }
            })
            .collect();
        SchwartzFn { level: r.level, cells }
    }
}

impl From<SchwartzFn> for RawSchwartz {
    fn from(s: SchwartzFn) -> Self {
        let cells = s
            .cells
            .into_iter()
            .map(|c| RawCell { c: [R(c.center.0), R(c.center.1)], coef: R(c.coef) })
            .collect();
        RawSchwartz { level: s.level, cells }
    }
}

fn in_cell(p: u64, x: &Rational, center: &Rational, level: u32) -> bool {
    val_q(&(x - center), p) >= level as i64
}

impl SchwartzFn {
    pub fn new(level: u32, cells: Vec<Cell>) -> Self {
        SchwartzFn { level, cells }
    }

    pub fn zero() -> Self {
        SchwartzFn { level: 0, cells: vec![] }
    }

    /// ch((cx + p^ax Z_p) x (cy + p^ay Z_p)).
    pub fn indicator(p: u64, center: (Rational, Rational), ax: i64, ay: i64) -> Self {
        let level = ax.max(ay).max(0);
        let spread = |c: &Rational, a: i64| -> Vec<Rational> {
            let n = p.pow((level - a) as u32) as i64;
            (0..n).map(|t| c + pow_p(p, a) * q(t)).collect()
        };
        let mut cells = vec![];
        for x in spread(&center.0, ax) {
            for y in spread(&center.1, ay) {
                cells.push(Cell { center: (x.clone(), y), coef: q(1) });
            }
        }
        SchwartzFn { level: level as u32, cells }.canonical(p)
    }

    /// ch(p^k Z_p^2).
    pub fn lattice(p: u64, k: i64) -> Self {
        Self::indicator(p, (q(0), q(0)), k, k)
    }

    /// Centers reduced modulo p^level, coincident cells merged, zero cells dropped.
    pub fn canonical(&self, p: u64) -> Self {
        let n = self.level as i64;
        let mut acc: BTreeMap<(Rational, Rational), Rational> = BTreeMap::new();
        for c in &self.cells {
            let key = (reduce_mod_pn(&c.center.0, p, n), reduce_mod_pn(&c.center.1, p, n));
            *acc.entry(key).or_insert_with(Rational::zero) += &c.coef;
        }
        let cells = acc.into_iter().filter(|(_, v)| !v.is_zero()).map(|(center, coef)| Cell { center, coef }).collect();
        SchwartzFn { level: self.level, cells }
    }

    /// The same function written with cells of level n >= self.level.
    pub fn refine(&self, p: u64, n: u32) -> Self {
        assert!(n >= self.level, "refine cannot coarsen");
        let steps = p.pow(n - self.level) as i64;
        let mut cells = vec![];
        for c in &self.cells {
            for i in 0..steps {
                for j in 0..steps {
                    let dx = pow_p(p, self.level as i64) * q(i);
                    let dy = pow_p(p, self.level as i64) * q(j);
                    cells.push(Cell { center: (&c.center.0 + dx, &c.center.1 + dy), coef: c.coef.clone() });
                }
            }
        }
        SchwartzFn { level: n, cells }.canonical(p)
    }

    pub fn eval(&self, p: u64, x: &Rational, y: &Rational) -> Rational {
        self.cells
            .iter()
            .filter(|c| in_cell(p, x, &c.center.0, self.level) && in_cell(p, y, &c.center.1, self.level))
            .fold(Rational::zero(), |s, c| s + &c.coef)
    }

    pub fn value_at_zero(&self, p: u64) -> Rational {
        self.eval(p, &Rational::zero(), &Rational::zero())
    }

    /// Every point of the support has both coordinates of valuation at least this.
    /// Never exceeds the level.
    pub fn support_valuation(&self, p: u64) -> i64 {
        self.cells
            .iter()
            .filter(|c| !c.coef.is_zero())
            .map(|c| val_q(&c.center.0, p).min(val_q(&c.center.1, p)))
            .fold(self.level as i64, i64::min)
    }

    pub fn add(&self, p: u64, o: &Self) -> Self {
        let n = self.level.max(o.level);
        let mut cells = self.refine(p, n).cells;
        cells.extend(o.refine(p, n).cells);
        SchwartzFn { level: n, cells }.canonical(p)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let cells = self.cells.iter().map(|x| Cell { center: x.center.clone(), coef: &x.coef * c }).collect();
        SchwartzFn { level: self.level, cells }
    }

    /// x -> phi(x gamma), for gamma in GL2(Q_p).
    pub fn translate(&self, p: u64, gamma: &Mat2) -> Result<Self> {
        if !gamma.is_base() {
            return Err(Error::Input("Schwartz functions are translated by GL2(Q_p)".into()));
        }
        let ginv = gamma.inv()?;
        let vg = gamma.val(p);
        let n_new = (self.level as i64 - vg).max(0);
        let m_lo = if self.cells.is_empty() { n_new } else { self.support_valuation(p) + ginv.val(p) };
        let m_lo = m_lo.min(n_new);
        let side = (p as u128).pow((n_new - m_lo) as u32);
        if side * side > TRANSLATE_BOX_CAP {
            return Err(Error::BoxOverflow { size: side * side, cap: TRANSLATE_BOX_CAP });
        }
        let step = pow_p(p, m_lo);
        let (a, b, c, d) = (&gamma.a.a, &gamma.b.a, &gamma.c.a, &gamma.d.a);
        let mut cells = vec![];
        for i in 0..side as i64 {
            for j in 0..side as i64 {
                let x = &step * q(i);
                let y = &step * q(j);
                let v = self.eval(p, &(&x * a + &y * c), &(&x * b + &y * d));
                if !v.is_zero() {
                    cells.push(Cell { center: (x, y), coef: v });
                }
            }
        }
        Ok(SchwartzFn { level: n_new as u32, cells }.canonical(p))
    }

    /// Measure of units e with e * p^m * v in the support, weighted by coefficients.
    /// `v` must be a primitive integral row and m < level.
    pub fn unit_shell_integral(&self, p: u64, m: i64, v: (&Rational, &Rational)) -> Rational {
        let n = self.level as i64;
        debug_assert!(m < n);
        let (pivot, other, swap) = if val_q(v.0, p) == 0 { (v.0, v.1, false) } else { (v.1, v.0, true) };
        let shell = Rational::from_integer(num_bigint::BigInt::from(p - 1) * num_bigint::BigInt::from(p).pow((n - m - 1) as u32));
        let mut total = Rational::zero();
        for c in &self.cells {
            let (cp, co) = if swap { (&c.center.1, &c.center.0) } else { (&c.center.0, &c.center.1) };
            let vc = val_q(cp, p);
            if vc != m {
                continue;
            }
            let e = cp / (pow_p(p, m) * pivot);
            if val_q(&(pow_p(p, m) * &e * other - co), p) >= n {
                total += &c.coef / &shell;
            }
        }
        total
    }
}

impl Default for SchwartzFn {
    fn default() -> Self {
        Self::zero()
    }
}
