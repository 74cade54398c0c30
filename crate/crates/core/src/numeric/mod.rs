//! Arbitrary-precision real and complex arithmetic on top of `astro-float`.
//!
//! A [`Ctx`] fixes the target precision `p` and carries the constants cache;
//! all arithmetic runs at `p` plus guard bits with round-to-nearest-even,
//! so results are bit-reproducible for a given `p`.

mod cmatrix;
mod complex;

use alloc::string::String;
use core::cell::RefCell;

pub use astro_float::BigFloat;
use astro_float::{Consts, Radix, RoundingMode, Sign};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

pub use cmatrix::CMatrix;
pub use complex::{log2_rel_diff, BigComplex};

use crate::rational::Rational;

pub type Real = BigFloat;

/// Extra working bits carried on top of the target precision.
pub const GUARD_BITS: usize = 64;

pub(crate) const RM: RoundingMode = RoundingMode::ToEven;

pub struct Ctx {
    bits: usize,
    work: usize,
    consts: RefCell<Consts>,
}

impl Ctx {
    pub fn new(bits: usize) -> Self {
        Self::with_guard(bits, GUARD_BITS)
    }

    pub fn with_guard(bits: usize, guard: usize) -> Self {
        Self { bits, work: bits + guard, consts: RefCell::new(Consts::new().expect("constants cache allocation")) }
    }

    /// Target precision in bits.
    pub fn bits(&self) -> usize {
        self.bits
    }

    /// Working precision in bits.
    pub fn work(&self) -> usize {
        self.work
    }

    fn cc<R>(&self, f: impl FnOnce(&mut Consts) -> R) -> R {
        f(&mut self.consts.borrow_mut())
    }

    pub fn pi(&self) -> Real {
        self.cc(|cc| cc.pi(self.work, RM))
    }

    pub fn zero(&self) -> Real {
        BigFloat::from_word(0, self.work)
    }

    pub fn int(&self, n: i64) -> Real {
        BigFloat::from_i64(n, self.work)
    }

    pub fn f64(&self, x: f64) -> Real {
        BigFloat::from_f64(x, self.work)
    }

    /// `2^e`, exact.
    pub fn pow2(&self, e: i64) -> Real {
        let mut x = self.int(1);
        x.set_exponent(i32::try_from(e + 1).expect("exponent in range"));
        x
    }

    pub fn bigint(&self, n: &BigInt) -> Real {
        if let Some(v) = n.to_i64() {
            return self.int(v);
        }
        let words: alloc::vec::Vec<u64> = n.magnitude().to_u64_digits();
        let mut acc = self.zero();
        let base = self.pow2(64);
        for w in words.iter().rev() {
            acc = self.add(&self.mul(&acc, &base), &BigFloat::from_u64(*w, self.work));
        }
        if n.is_negative() {
            acc.neg()
        } else {
            acc
        }
    }

    pub fn rational(&self, q: &Rational) -> Real {
        self.div(&self.bigint(q.numer()), &self.bigint(q.denom()))
    }

    /// Parses a decimal such as `-1.25`, `3e-4` or `7`; `None` on malformed input.
    pub fn parse(&self, s: &str) -> Option<Real> {
        let s = s.trim();
        if s.is_empty() || !s.chars().all(|c| c.is_ascii_digit() || "+-.eE".contains(c)) {
            return None;
        }
        let x = self.cc(|cc| BigFloat::parse(s, Radix::Dec, self.work, RM, cc));
        (!x.is_nan() && !x.is_inf()).then_some(x)
    }

    /// Decimal rendering with about `bits·log₁₀2` significant digits.
    pub fn format(&self, x: &Real) -> String {
        if x.is_zero() {
            return "0".into();
        }
        let digits = (self.bits as f64 * core::f64::consts::LOG10_2) as usize + 1;
        let mut r = x.clone();
        r.set_precision(self.bits.max(64), RM).expect("precision change");
        let s = self.cc(|cc| r.format(Radix::Dec, RM, cc)).expect("decimal formatting");
        trim_decimal(&s, digits)
    }

    pub fn add(&self, a: &Real, b: &Real) -> Real {
        a.add(b, self.work, RM)
    }

    pub fn sub(&self, a: &Real, b: &Real) -> Real {
        a.sub(b, self.work, RM)
    }

    pub fn mul(&self, a: &Real, b: &Real) -> Real {
        a.mul(b, self.work, RM)
    }

    pub fn div(&self, a: &Real, b: &Real) -> Real {
        a.div(b, self.work, RM)
    }

    pub fn sqrt(&self, a: &Real) -> Real {
        a.sqrt(self.work, RM)
    }

    pub fn exp(&self, a: &Real) -> Real {
        self.cc(|cc| a.exp(self.work, RM, cc))
    }

    pub fn ln(&self, a: &Real) -> Real {
        self.cc(|cc| a.ln(self.work, RM, cc))
    }

    pub fn sin(&self, a: &Real) -> Real {
        self.cc(|cc| a.sin(self.work, RM, cc))
    }

    pub fn cos(&self, a: &Real) -> Real {
        self.cc(|cc| a.cos(self.work, RM, cc))
    }

    /// `a^e` for a real exponent, `a > 0`.
    pub fn powf(&self, a: &Real, e: &Real) -> Real {
        self.cc(|cc| a.pow(e, self.work, RM, cc))
    }

    pub fn powi(&self, a: &Real, n: usize) -> Real {
        a.powi(n, self.work, RM)
    }
}

/// Truncates astro-float's `d.ddd…e±x` output to `digits` significant digits
/// (without rounding; the working value carries guard bits) and normalizes
/// the exponent marker.
fn trim_decimal(s: &str, digits: usize) -> String {
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], &s[i + 1..]),
        None => (s, "0"),
    };
    let (sign, mant) = mant.strip_prefix('-').map_or(("", mant), |m| ("-", m));
    let mut out = String::from(sign);
    let mut count = 0;
    for c in mant.chars() {
        if c.is_ascii_digit() {
            if count == digits {
                break;
            }
            count += 1;
        }
        out.push(c);
    }
    while out.contains('.') && (out.ends_with('0') || out.ends_with('.')) {
        out.pop();
    }
    let exp: i64 = exp.trim_start_matches('+').parse().unwrap_or(0);
    if exp != 0 {
        out.push('e');
        out.push_str(&alloc::format!("{exp}"));
    }
    out
}

/// Nearest `f64`, saturating to ±∞ and flushing tiny values to 0.
pub fn to_f64(x: &Real) -> f64 {
    let Some((words, _, sign, exp, _)) = x.as_raw_parts() else {
        return if x.is_inf_pos() {
            f64::INFINITY
        } else if x.is_inf_neg() {
            f64::NEG_INFINITY
        } else {
            f64::NAN
        };
    };
    if x.is_zero() {
        return 0.0;
    }
    // The mantissa is normalized with its top bit set: value = 0.m × 2^exp.
    let top = *words.last().expect("nonzero mantissa");
    let next = if words.len() > 1 { words[words.len() - 2] } else { 0 };
    let frac = (top as f64 + next as f64 / 18446744073709551616.0) / 18446744073709551616.0;
    let v = ldexp(frac, i64::from(exp));
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

fn ldexp(mut x: f64, mut e: i64) -> f64 {
    let step = |k: i64| f64::from_bits(((k + 1023) as u64) << 52);
    while e > 1000 {
        x *= step(1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= step(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * step(e)
}

/// `log₂|x|`, or `-∞` for zero.
pub fn log2_abs(x: &Real) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let e = x.exponent().map_or(0, i64::from);
    let mut m = x.abs();
    m.set_exponent(0);
    e as f64 + libm::log2(to_f64(&m))
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    let ctx = Ctx::with_guard(64, 0);
    to_f64(&ctx.rational(q))
}
