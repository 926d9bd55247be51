use crate::error::{Error, Result};
use crate::exactnum::{pow_p, PVal, QuadCtx, QuadElem, Rational, INF};
use serde::{Deserialize, Serialize};

/// 2x2 matrix over F (entries with zero sqrt(r)-part form the Q_p case).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mat2 {
    pub a: QuadElem,
    pub b: QuadElem,
    pub c: QuadElem,
    pub d: QuadElem,
}

impl Mat2 {
    pub fn new(a: QuadElem, b: QuadElem, c: QuadElem, d: QuadElem) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn from_rationals(ctx: &QuadCtx, a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        Mat2::new(ctx.rat(a), ctx.rat(b), ctx.rat(c), ctx.rat(d))
    }

    pub fn identity(ctx: &QuadCtx) -> Self {
        Self::diag(ctx.one(), ctx.one())
    }

    pub fn diag(x: QuadElem, y: QuadElem) -> Self {
        let z = x.scale(&Rational::from_integer(0.into()));
        Mat2::new(x, z.clone(), z, y)
    }

    /// t(i, j) = diag(p^i, p^j).
    pub fn t(ctx: &QuadCtx, i: i64, j: i64) -> Self {
        Self::diag(ctx.rat(pow_p(ctx.p, i)), ctx.rat(pow_p(ctx.p, j)))
    }

    /// Upper unipotent [[1, u], [0, 1]].
    pub fn n_upper(ctx: &QuadCtx, u: QuadElem) -> Self {
        Mat2::new(ctx.one(), u, ctx.zero(), ctx.one())
    }

    /// Lower unipotent [[1, 0], [c, 1]].
    pub fn n_lower(ctx: &QuadCtx, c: QuadElem) -> Self {
        Mat2::new(ctx.one(), ctx.zero(), c, ctx.one())
    }

    /// The Weyl element [[0, -1], [1, 0]].
    pub fn weyl(ctx: &QuadCtx) -> Self {
        Mat2::new(ctx.zero(), ctx.int(-1), ctx.one(), ctx.zero())
    }

    pub fn entries(&self) -> [&QuadElem; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2::new(
            &(&self.a * &o.a) + &(&self.b * &o.c),
            &(&self.a * &o.b) + &(&self.b * &o.d),
            &(&self.c * &o.a) + &(&self.d * &o.c),
            &(&self.c * &o.b) + &(&self.d * &o.d),
        )
    }

    pub fn det(&self) -> QuadElem {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn inv(&self) -> Result<Mat2> {
        let det = self.det();
        if det.is_zero() {
            return Err(Error::Singular);
        }
        let di = det.inv()?;
        Ok(Mat2::new(&self.d * &di, &(-&self.b) * &di, &(-&self.c) * &di, &self.a * &di))
    }

    pub fn scale(&self, x: &QuadElem) -> Mat2 {
        Mat2::new(&self.a * x, &self.b * x, &self.c * x, &self.d * x)
    }

    /// Minimum entry valuation.
    pub fn val(&self, p: u64) -> i64 {
        self.entries().iter().map(|e| e.pval(p)).min().unwrap_or(INF)
    }

    pub fn is_integral(&self, p: u64) -> bool {
        self.entries().iter().all(|e| e.is_integral(p))
    }

    /// Membership in G(O_F) (or G(Z_p) for base matrices).
    pub fn in_maximal_compact(&self, p: u64) -> bool {
        self.is_integral(p) && self.det().is_unit(p)
    }

    /// All entries lie in Q_p.
    pub fn is_base(&self) -> bool {
        self.entries().iter().all(|e| e.is_rational())
    }

    pub fn in_mirabolic(&self) -> bool {
        self.is_base() && self.c.is_zero() && self.d.is_one()
    }

    pub fn r(&self) -> i64 {
        self.a.r
    }
}

impl std::fmt::Display for Mat2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}
