//! Z_p-lattices in Q_p^n cut out by integrality of linear forms.

use crate::exactnum::{pow_p, val_q, Rational, INF};
use num_traits::Zero;

/// A full-rank Z_p-lattice given by basis vectors with rational coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    pub p: u64,
    pub basis: Vec<Vec<Rational>>,
}

fn dot(f: &[Rational], v: &[Rational]) -> Rational {
    f.iter().zip(v).fold(Rational::zero(), |acc, (a, b)| acc + a * b)
}

impl Lattice {
    /// The lattice spanned by p^{shift_i} e_i.
    pub fn scaled_standard(p: u64, shifts: &[i64]) -> Self {
        let n = shifts.len();
        let basis = (0..n)
            .map(|i| (0..n).map(|j| if i == j { pow_p(p, shifts[i]) } else { Rational::zero() }).collect())
            .collect();
        Lattice { p, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Intersect with {x : f(x) in Z_p}.
    pub fn restrict(&mut self, f: &[Rational]) {
        let vals: Vec<Rational> = self.basis.iter().map(|b| dot(f, b)).collect();
        let (piv, v0) = vals
            .iter()
            .enumerate()
            .map(|(i, c)| (i, val_q(c, self.p)))
            .min_by_key(|&(i, v)| (v, i))
            .unwrap();
        if v0 == INF || v0 >= 0 {
            return;
        }
        let pivot_val = vals[piv].clone();
        let pivot = self.basis[piv].clone();
        for (j, cj) in vals.iter().enumerate() {
            if j == piv || cj.is_zero() {
                continue;
            }
            let ratio = cj / &pivot_val;
            for (x, y) in self.basis[j].iter_mut().zip(&pivot) {
                *x -= &ratio * y;
            }
        }
        let s = pow_p(self.p, -v0);
        for x in self.basis[piv].iter_mut() {
            *x *= &s;
        }
    }

    pub fn restrict_all(&mut self, forms: &[Vec<Rational>]) {
        for f in forms {
            self.restrict(f);
        }
    }

    pub fn contains(&self, forms: &[Vec<Rational>]) -> bool {
        self.basis.iter().all(|b| forms.iter().all(|f| val_q(&dot(f, b), self.p) >= 0))
    }

    /// Sum of integer coefficients times basis vectors.
    pub fn combine(&self, coeffs: &[i64]) -> Vec<Rational> {
        let n = self.basis[0].len();
        let mut out = vec![Rational::zero(); n];
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if *c == 0 {
                continue;
            }
            let c = Rational::from_integer((*c).into());
            for (o, x) in out.iter_mut().zip(b) {
                *o += &c * x;
            }
        }
        out
    }

    /// Sum over basis vectors of the valuation of the basis determinant,
    /// i.e. log_p of the index [Z_p^n : L] when L is contained in Z_p^n.
    pub fn log_index(&self) -> i64 {
        let det = det(&self.basis);
        val_q(&det, self.p)
    }
}

/// Determinant by fraction-free elimination over Q.
pub fn det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut sign = Rational::from_integer(1.into());
    let mut d = Rational::from_integer(1.into());
    for col in 0..n {
        let Some(r) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if r != col {
            a.swap(r, col);
            sign = -sign;
        }
        let piv = a[col][col].clone();
        d *= &piv;
        for r in col + 1..n {
            let factor = &a[r][col] / &piv;
            if factor.is_zero() {
                continue;
            }
            for c in col..n {
                let t = &factor * &a[col][c];
                a[r][c] -= t;
            }
        }
    }
    sign * d
}
