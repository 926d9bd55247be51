use super::Mat2;
use crate::error::{Error, Result};
use crate::exactnum::{pow_p, q, QuadCtx, QuadElem};

/// Which coefficient ring a coset enumeration lives over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Base,
    Quadratic,
}

/// Residues of Z_p (or O_F) modulo p^i.
pub fn residues(ctx: &QuadCtx, i: u32, field: Field) -> Vec<QuadElem> {
    let n = ctx.p.pow(i) as i64;
    match field {
        Field::Base => (0..n).map(|x| ctx.int(x)).collect(),
        Field::Quadratic => (0..n).flat_map(|y| (0..n).map(move |x| (x, y))).map(|(x, y)| ctx.elem(q(x), q(y))).collect(),
    }
}

/// Unit residues modulo p^i.
pub fn unit_residues(ctx: &QuadCtx, i: u32, field: Field) -> Vec<QuadElem> {
    residues(ctx, i, field).into_iter().filter(|x| x.is_unit(ctx.p)).collect()
}

/// |GL2(Z/p^L)|.
pub fn gl2_order(p: u64, l: u32) -> u128 {
    let p = p as u128;
    p.pow(4 * (l - 1)) * (p * p - 1) * (p * p - p)
}

/// Representatives of P^1(Z/p^L) as lower-unipotent or Weyl-type elements of G(Z_p).
pub fn p1_reps(ctx: &QuadCtx, l: u32) -> Vec<Mat2> {
    let n = ctx.p.pow(l) as i64;
    let mut out: Vec<Mat2> = (0..n).map(|c| Mat2::n_lower(ctx, ctx.int(c))).collect();
    for j in 0..n / ctx.p as i64 {
        out.push(Mat2::new(ctx.zero(), ctx.int(-1), ctx.one(), ctx.int(j * ctx.p as i64)));
    }
    out
}

/// All of G(Z/p^L) (base) or G(O_F/p^L) (quadratic) as integral lifts.
pub fn full_mod_pl(ctx: &QuadCtx, l: u32, field: Field) -> Result<Vec<Mat2>> {
    check_p(ctx)?;
    let res = residues(ctx, l, field);
    let total = (res.len() as u128).pow(4);
    if total > 50_000_000 {
        return Err(Error::BoxOverflow { size: total, cap: 50_000_000 });
    }
    let mut out = vec![];
    for a in &res {
        for b in &res {
            for c in &res {
                for d in &res {
                    let m = Mat2::new(a.clone(), b.clone(), c.clone(), d.clone());
                    if m.det().is_unit(ctx.p) {
                        out.push(m);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Representatives of G(O_F)/G(O_F)[p], where [p] is det = 1 mod p:
/// diag(u,1), diag(u,1)diag(alpha,1), diag(u,1)diag(alpha+u',1).
pub fn k_over_kp(ctx: &QuadCtx) -> Result<Vec<Mat2>> {
    check_p(ctx)?;
    let units: Vec<i64> = (1..ctx.p as i64).collect();
    let mut out = vec![];
    let d = |x: QuadElem| Mat2::diag(x, ctx.one());
    for &u in &units {
        out.push(d(ctx.int(u)));
    }
    for &u in &units {
        out.push(d(ctx.int(u)).mul(&d(ctx.alpha())));
    }
    for &u in &units {
        for &v in &units {
            out.push(d(ctx.int(u)).mul(&d(&ctx.alpha() + &ctx.int(v))));
        }
    }
    Ok(out)
}

/// Representatives of G(Z_p)^2 modulo the pairs with both determinants 1 mod p.
pub fn k_over_kp_split(ctx: &QuadCtx) -> Vec<(Mat2, Mat2)> {
    let mut out = vec![];
    for u in 1..ctx.p as i64 {
        for v in 1..ctx.p as i64 {
            out.push((Mat2::diag(ctx.int(u), ctx.one()), Mat2::diag(ctx.int(v), ctx.one())));
        }
    }
    out
}

/// Single cosets x K inside K t(lambda, 0) K, as [[p^i, beta], [0, p^(lambda-i)]].
pub fn double_to_single(ctx: &QuadCtx, lambda: u32, field: Field) -> Result<Vec<Mat2>> {
    check_p(ctx)?;
    let p = ctx.p;
    let l = lambda as i64;
    let upper = |i: i64, beta: QuadElem| {
        Mat2::new(ctx.rat(pow_p(p, i)), beta, ctx.zero(), ctx.rat(pow_p(p, l - i)))
    };
    if lambda == 0 {
        return Ok(vec![Mat2::identity(ctx)]);
    }
    let mut out = vec![upper(0, ctx.zero())];
    for i in 1..lambda {
        for beta in unit_residues(ctx, i, field) {
            out.push(upper(i as i64, beta));
        }
    }
    for beta in residues(ctx, lambda, field) {
        out.push(upper(l, beta));
    }
    Ok(out)
}

fn check_p(ctx: &QuadCtx) -> Result<()> {
    if ctx.p == 2 {
        Err(Error::Input("p = 2 is not supported".into()))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_over_kp_count_and_determinants() {
        let ctx = QuadCtx::new(3).unwrap();
        let reps = k_over_kp(&ctx).unwrap();
        assert_eq!(reps.len(), 8);
        // determinants are distinct modulo p
        let mut dets: Vec<(i64, i64)> = reps
            .iter()
            .map(|m| {
                let d = m.det();
                (crate::exactnum::residue_u64(&d.a, 3) as i64, crate::exactnum::residue_u64(&d.b, 3) as i64)
            })
            .collect();
        dets.sort();
        dets.dedup();
        assert_eq!(dets.len(), 8);
    }

    #[test]
    fn hecke_operator_cosets() {
        let ctx = QuadCtx::new(5).unwrap();
        assert_eq!(double_to_single(&ctx, 1, Field::Base).unwrap().len(), 6);
        assert_eq!(double_to_single(&ctx, 2, Field::Base).unwrap().len(), 30);
        assert_eq!(double_to_single(&ctx, 1, Field::Quadratic).unwrap().len(), 26);
    }

    #[test]
    fn gl2_f3() {
        let ctx = QuadCtx::new(3).unwrap();
        assert_eq!(full_mod_pl(&ctx, 1, Field::Base).unwrap().len(), 48);
        assert_eq!(gl2_order(3, 1), 48);
        assert_eq!(p1_reps(&ctx, 2).len(), 12);
    }

    #[test]
    fn p_two_rejected() {
        let ctx = QuadCtx { p: 2, r: 3 };
        assert!(double_to_single(&ctx, 1, Field::Base).is_err());
    }
}
