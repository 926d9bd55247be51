//! Seeded random integral test vectors: random cells and translates, scaled by
//! the volume factor so that lattice membership holds by construction.

use super::integrality::integrality_check;
use super::{GroupElem, Level, TestVector};
use crate::error::{Error, Result};
use crate::exactnum::{pow_p, q, QuadCtx, QuadElem, Rational};
use crate::heckealg::Group;
use crate::padicgrp::Mat2;
use crate::whitzeta::{Cell, SchwartzFn};
use rand::Rng;

#[derive(Debug, Clone, Copy)]
pub struct RandomSpec {
    pub p: u64,
    pub group: Group,
    pub level: Level,
    /// Draw phi with phi(0, 0) = 0.
    pub vanishing_at_zero: bool,
    pub terms: usize,
    /// Largest cell level of phi.
    pub max_cell_level: u32,
    /// Split pairs with equal determinant valuations, so the vector also lives on G*.
    pub balanced: bool,
}

impl RandomSpec {
    pub fn new(p: u64, group: Group, level: Level) -> Self {
        RandomSpec { p, group, level, vanishing_at_zero: false, terms: 2, max_cell_level: 2, balanced: false }
    }
}

fn small_translate(ctx: &QuadCtx, rng: &mut impl Rng, quadratic: bool, diag: (i64, i64)) -> Mat2 {
    let p = ctx.p as i64;
    let k = rng.gen_range(0..=1);
    let x = q(rng.gen_range(0..p));
    let u = if quadratic { QuadElem::new(x, q(rng.gen_range(0..p)), ctx.r) } else { ctx.rat(x) };
    Mat2::t(ctx, diag.0, diag.1).mul(&Mat2::n_upper(ctx, u.scale(&pow_p(ctx.p, -k))))
}

fn random_elem(ctx: &QuadCtx, rng: &mut impl Rng, split: bool, balanced: bool) -> GroupElem {
    let mut d = || (rng.gen_range(-1..=1), rng.gen_range(-1..=1));
    let d1 = d();
    if !split {
        return GroupElem::Inert(small_translate(ctx, rng, true, d1));
    }
    let mut d2 = d();
    if balanced {
        d2.1 = d1.0 + d1.1 - d2.0;
    }
    GroupElem::Split(small_translate(ctx, rng, false, d1), small_translate(ctx, rng, false, d2))
}

fn random_phi(p: u64, rng: &mut impl Rng, max_level: u32, vanishing: bool) -> SchwartzFn {
    let level = rng.gen_range(1..=max_level.max(1));
    let side = p.pow(level) as i64;
    let ncells = rng.gen_range(1..=2);
    let mut cells: Vec<Cell> = vec![];
    while cells.len() < ncells {
        let (x, y) = (rng.gen_range(0..side), rng.gen_range(0..side));
        if vanishing && x == 0 && y == 0 {
            continue;
        }
        if cells.iter().any(|c| c.center == (q(x), q(y))) {
            continue;
        }
        let mut coef = rng.gen_range(-3..=3);
        if coef == 0 {
            coef = 1;
        }
        cells.push(Cell { center: (q(x), q(y)), coef: q(coef) });
    }
    SchwartzFn::new(level, cells)
}

/// A random element of the integral lattice at the requested level.
pub fn random_integral_vector(spec: &RandomSpec, rng: &mut impl Rng) -> Result<TestVector> {
    let ctx = QuadCtx::new(spec.p)?;
    let split = spec.group.is_split();
    let mut v = TestVector::new(spec.p, spec.group, spec.level);
    let mut attempts = 0;
    while v.terms.len() < spec.terms {
        attempts += 1;
        if attempts > 50 * spec.terms.max(1) {
            return Err(Error::Internal("could not draw an enumerable random term".into()));
        }
        let g = random_elem(&ctx, rng, split, spec.balanced);
        let phi = random_phi(spec.p, rng, spec.max_cell_level, spec.vanishing_at_zero);
        let report = match integrality_check(spec.p, &phi, &g, spec.level) {
            Ok(r) => r,
            Err(Error::BoxOverflow { .. }) => continue,
            Err(e) => return Err(e),
        };
        let scaled = phi.scale(&report.volume_inverse);
        v.push(scaled, g, Rational::from_integer(1.into()))?;
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heckemod::vector_integrality;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn draws_are_integral_and_reproducible() {
        let spec = RandomSpec { vanishing_at_zero: true, ..RandomSpec::new(3, Group::InertF, Level::Kp) };
        let a = random_integral_vector(&spec, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        let b = random_integral_vector(&spec, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        assert_eq!(a, b);
        assert!(a.vanishes_at_origin());
        assert!(vector_integrality(&a).unwrap().0);
    }

    #[test]
    fn balanced_split_draws() {
        let spec = RandomSpec { balanced: true, ..RandomSpec::new(3, Group::SplitPair, Level::K) };
        let v = random_integral_vector(&spec, &mut ChaCha8Rng::seed_from_u64(11)).unwrap();
        for t in &v.terms {
            let c = t.g.components();
            assert_eq!(c[0].det().val(3), c[1].det().val(3));
        }
    }
}
