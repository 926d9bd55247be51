use super::Mat2;
use crate::error::{Error, Result};
use crate::exactnum::{pow_p, PVal, QuadCtx, QuadElem};
use serde::{Deserialize, Serialize};

/// g = n(u) diag(f1, f2) kappa with kappa in the maximal compact subgroup.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IwasawaParts {
    pub u: QuadElem,
    pub f1: QuadElem,
    pub f2: QuadElem,
    pub kappa: Mat2,
}

impl IwasawaParts {
    pub fn reassemble(&self, ctx: &QuadCtx) -> Mat2 {
        Mat2::n_upper(ctx, self.u.clone())
            .mul(&Mat2::diag(self.f1.clone(), self.f2.clone()))
            .mul(&self.kappa)
    }
}

/// Iwasawa decomposition over F (or Q_p for base matrices).
pub fn iwasawa(ctx: &QuadCtx, g: &Mat2) -> Result<IwasawaParts> {
    let det = g.det();
    if det.is_zero() {
        return Err(Error::Singular);
    }
    let p = ctx.p;
    if g.c.pval(p) >= g.d.pval(p) {
        let dinv = g.d.inv()?;
        Ok(IwasawaParts {
            u: &g.b * &dinv,
            f1: &det * &dinv,
            f2: g.d.clone(),
            kappa: Mat2::n_lower(ctx, &g.c * &dinv),
        })
    } else {
        let cinv = g.c.inv()?;
        Ok(IwasawaParts {
            u: &g.a * &cinv,
            f1: &det * &cinv,
            f2: g.c.clone(),
            kappa: Mat2::new(ctx.zero(), ctx.int(-1), ctx.one(), &g.d * &cinv),
        })
    }
}

/// Cartan decomposition g = k1 t(l1, l2) k2 with l1 >= l2 and k1, k2 in the
/// maximal compact subgroup of the field containing the entries.
#[derive(Debug, Clone, PartialEq)]
pub struct CartanParts {
    pub k1: Mat2,
    pub l1: i64,
    pub l2: i64,
    pub k2: Mat2,
}

pub fn cartan(ctx: &QuadCtx, g: &Mat2) -> Result<CartanParts> {
    if g.det().is_zero() {
        return Err(Error::Singular);
    }
    let p = ctx.p;
    let id = Mat2::identity(ctx);
    let swap = Mat2::new(ctx.zero(), ctx.one(), ctx.one(), ctx.zero());
    let vals = g.entries().map(|e| e.pval(p));
    let pos = (0..4).min_by_key(|&i| (vals[i], i)).unwrap();
    let pl = if pos >= 2 { swap.clone() } else { id.clone() };
    let pr = if pos % 2 == 1 { swap.clone() } else { id.clone() };
    let h = pl.mul(g).mul(&pr);
    let piv = h.a.inv()?;
    let l = Mat2::n_lower(ctx, -&(&h.c * &piv));
    let r = Mat2::n_upper(ctx, -&(&h.b * &piv));
    let dg = l.mul(&h).mul(&r);
    let (x, y) = (dg.a.clone(), dg.d.clone());
    let (vx, vy) = (x.val(p), y.val(p));
    let ux = x.scale(&pow_p(p, -vx));
    let uy = y.scale(&pow_p(p, -vy));
    let units = Mat2::diag(ux, uy);
    // g = pl^-1 l^-1 diag(p^vx, p^vy) units r^-1 pr^-1 (swap is its own inverse)
    let mut k1 = pl.mul(&l.inv()?);
    let mut k2 = units.mul(&r.inv()?).mul(&pr);
    let (l1, l2) = if vx >= vy {
        (vx, vy)
    } else {
        k1 = k1.mul(&swap);
        k2 = swap.mul(&k2);
        (vy, vx)
    };
    Ok(CartanParts { k1, l1, l2, k2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{q, qf};

    #[test]
    fn identity_decomposes_trivially() {
        let ctx = QuadCtx::new(3).unwrap();
        let id = Mat2::identity(&ctx);
        let parts = iwasawa(&ctx, &id).unwrap();
        assert!(parts.u.is_zero() && parts.f1.is_one() && parts.f2.is_one());
        assert_eq!(parts.kappa, id);
    }

    #[test]
    fn lower_unipotent_with_negative_valuation() {
        let ctx = QuadCtx::new(3).unwrap();
        let c = ctx.rat(qf(1, 9));
        let g = Mat2::n_lower(&ctx, c.clone());
        let parts = iwasawa(&ctx, &g).unwrap();
        let ci = c.inv().unwrap();
        assert_eq!(parts.u, ci);
        assert_eq!(parts.f1, ci);
        assert_eq!(parts.f2, c);
        assert_eq!(parts.kappa, Mat2::new(ctx.zero(), ctx.int(-1), ctx.one(), ci));
        assert_eq!(parts.reassemble(&ctx), g);
    }

    #[test]
    fn upper_triangular_is_its_own_decomposition() {
        let ctx = QuadCtx::new(5).unwrap();
        let g = Mat2::new(ctx.int(5), ctx.alpha(), ctx.zero(), ctx.one());
        let parts = iwasawa(&ctx, &g).unwrap();
        assert_eq!(parts.u, ctx.alpha());
        assert_eq!(parts.f1, ctx.int(5));
        assert!(parts.f2.is_one());
        assert_eq!(parts.kappa, Mat2::identity(&ctx));
    }

    #[test]
    fn cartan_reassembles() {
        let ctx = QuadCtx::new(3).unwrap();
        let g = Mat2::new(ctx.elem(q(2), qf(1, 3)), ctx.int(9), ctx.alpha(), ctx.int(27));
        let c = cartan(&ctx, &g).unwrap();
        assert!(c.l1 >= c.l2);
        assert!(c.k1.in_maximal_compact(3) && c.k2.in_maximal_compact(3));
        assert_eq!(c.k1.mul(&Mat2::t(&ctx, c.l1, c.l2)).mul(&c.k2), g);
    }
}
