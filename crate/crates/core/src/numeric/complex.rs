use alloc::string::String;

use super::{to_f64, Ctx, Real};

/// A complex number with big-float parts. Operations take the [`Ctx`]
/// that fixes their precision.
#[derive(Debug, Clone)]
pub struct BigComplex {
    pub re: Real,
    pub im: Real,
}

impl BigComplex {
    pub fn new(re: Real, im: Real) -> Self {
        Self { re, im }
    }

    pub fn zero(ctx: &Ctx) -> Self {
        Self::new(ctx.zero(), ctx.zero())
    }

    pub fn one(ctx: &Ctx) -> Self {
        Self::new(ctx.int(1), ctx.zero())
    }

    pub fn i(ctx: &Ctx) -> Self {
        Self::new(ctx.zero(), ctx.int(1))
    }

    pub fn real(ctx: &Ctx, re: Real) -> Self {
        Self::new(re, ctx.zero())
    }

    pub fn from_i64(ctx: &Ctx, n: i64) -> Self {
        Self::new(ctx.int(n), ctx.zero())
    }

    pub fn from_f64(ctx: &Ctx, re: f64, im: f64) -> Self {
        Self::new(ctx.f64(re), ctx.f64(im))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (to_f64(&self.re), to_f64(&self.im))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Self, ctx: &Ctx) -> Self {
        Self::new(ctx.add(&self.re, &o.re), ctx.add(&self.im, &o.im))
    }

    pub fn sub(&self, o: &Self, ctx: &Ctx) -> Self {
        Self::new(ctx.sub(&self.re, &o.re), ctx.sub(&self.im, &o.im))
    }

    pub fn neg(&self) -> Self {
        Self::new(self.re.neg(), self.im.neg())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), self.im.neg())
    }

    /// Multiplication by `i`.
    pub fn mul_i(&self) -> Self {
        Self::new(self.im.neg(), self.re.clone())
    }

    /// Multiplication by `i^k`.
    pub fn mul_i_pow(&self, k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => self.clone(),
            1 => self.mul_i(),
            2 => self.neg(),
            _ => self.mul_i().neg(),
        }
    }

    pub fn mul(&self, o: &Self, ctx: &Ctx) -> Self {
        let re = ctx.sub(&ctx.mul(&self.re, &o.re), &ctx.mul(&self.im, &o.im));
        let im = ctx.add(&ctx.mul(&self.re, &o.im), &ctx.mul(&self.im, &o.re));
        Self::new(re, im)
    }

    pub fn scale(&self, s: &Real, ctx: &Ctx) -> Self {
        Self::new(ctx.mul(&self.re, s), ctx.mul(&self.im, s))
    }

    pub fn scale_i64(&self, s: i64, ctx: &Ctx) -> Self {
        self.scale(&ctx.int(s), ctx)
    }

    pub fn square(&self, ctx: &Ctx) -> Self {
        self.mul(self, ctx)
    }

    pub fn norm_sqr(&self, ctx: &Ctx) -> Real {
        ctx.add(&ctx.mul(&self.re, &self.re), &ctx.mul(&self.im, &self.im))
    }

    pub fn abs(&self, ctx: &Ctx) -> Real {
        ctx.sqrt(&self.norm_sqr(ctx))
    }

    /// `|z|` as an `f64`, for pivoting and reporting.
    pub fn abs_f64(&self) -> f64 {
        let (a, b) = self.to_f64();
        libm::hypot(a, b)
    }

    pub fn recip(&self, ctx: &Ctx) -> Self {
        let n = self.norm_sqr(ctx);
        Self::new(ctx.div(&self.re, &n), ctx.div(&self.im, &n).neg())
    }

    pub fn div(&self, o: &Self, ctx: &Ctx) -> Self {
        let n = o.norm_sqr(ctx);
        let num = self.mul(&o.conj(), ctx);
        Self::new(ctx.div(&num.re, &n), ctx.div(&num.im, &n))
    }

    /// Principal square root (branch cut on the negative real axis, `Re ≥ 0`).
    pub fn sqrt(&self, ctx: &Ctx) -> Self {
        if self.is_zero() {
            return Self::zero(ctx);
        }
        let r = self.abs(ctx);
        let half = ctx.f64(0.5);
        if !self.re.is_negative() {
            let t = ctx.sqrt(&ctx.mul(&ctx.add(&r, &self.re), &half));
            let im = ctx.div(&self.im, &ctx.mul(&t, &ctx.int(2)));
            Self::new(t, im)
        } else {
            let t = ctx.sqrt(&ctx.mul(&ctx.sub(&r, &self.re), &half));
            let re = ctx.div(&self.im.abs(), &ctx.mul(&t, &ctx.int(2)));
            Self::new(re, if self.im.is_negative() { t.neg() } else { t })
        }
    }

    pub fn exp(&self, ctx: &Ctx) -> Self {
        let m = ctx.exp(&self.re);
        Self::new(ctx.mul(&m, &ctx.cos(&self.im)), ctx.mul(&m, &ctx.sin(&self.im)))
    }

    /// `exp(iπ·z)`.
    pub fn exp_i_pi(&self, ctx: &Ctx) -> Self {
        self.scale(&ctx.pi(), ctx).mul_i().exp(ctx)
    }

    pub fn powu(&self, mut n: u64, ctx: &Ctx) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(ctx);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base, ctx);
            }
            n >>= 1;
            if n > 0 {
                base = base.square(ctx);
            }
        }
        acc
    }

    pub fn powi(&self, n: i64, ctx: &Ctx) -> Self {
        let p = self.powu(n.unsigned_abs(), ctx);
        if n < 0 {
            p.recip(ctx)
        } else {
            p
        }
    }

    /// `log₂|z|`.
    pub fn log2_abs(&self, ctx: &Ctx) -> f64 {
        super::log2_abs(&self.abs(ctx))
    }

    pub fn format(&self, ctx: &Ctx) -> (String, String) {
        (ctx.format(&self.re), ctx.format(&self.im))
    }
}

/// `|a − b| / max(|a|, |b|)` as `log₂`; `-∞` when both vanish.
pub fn log2_rel_diff(a: &BigComplex, b: &BigComplex, ctx: &Ctx) -> f64 {
    let d = a.sub(b, ctx).log2_abs(ctx);
    let s = a.log2_abs(ctx).max(b.log2_abs(ctx));
    if s == f64::NEG_INFINITY {
        f64::NEG_INFINITY
    } else {
        d - s
    }
}
