//! Arbitrary-precision reals with explicit decimal error accounting.
//!
//! An [`HPReal`] stores a value as `mantissa * 10^exponent` together with a
//! pessimistic bound on its absolute error. Exact values (integers, finite
//! decimals) carry no error at all; every inexact operation records a bound
//! no smaller than what its inputs and the operation justify. Rounding a
//! value whose uncertainty straddles a half-integer boundary is refused with
//! [`Error::AmbiguousRounding`] instead of silently guessing — one wrong
//! rounding corrupts every lattice built from it.

mod parse;
mod trig;

pub use parse::{bigint_string, bigint_vec_string, parse_hpreal};
pub use trig::{
    atan2, cos, cos_pi_rational, ln, log10, log10_bigint, pi, sin, sin_cos, sin_pi_rational, two_pi,
};

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;

/// Default number of significant decimal digits for evaluation-grade
/// arithmetic (error recomputation, challenge verification).
pub const DEFAULT_EVAL_DIGITS: u32 = 200;

/// Extra digits kept beyond any requested precision.
const COMPRESS_SLACK: i64 = 12;

/// Number of decimal digits of `|n|` (0 for n = 0).
pub fn digits10(n: &BigInt) -> u64 {
    if n.is_zero() {
        0
    } else {
        n.magnitude().to_str_radix(10).len() as u64
    }
}

/// `10^k` as a `BigInt`.
pub fn pow10(k: u64) -> BigInt {
    num_traits::pow(BigInt::from(10), k as usize)
}

/// Pessimistic absolute error bound `mul * 10^exp`, `1 <= mul <= 10_000`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct ErrBound {
    exp: i64,
    mul: u32,
}

impl ErrBound {
    pub(crate) fn ulp(exp: i64) -> Self {
        ErrBound { exp, mul: 1 }
    }

    fn canon(mut self) -> Self {
        while self.mul > 10_000 {
            self.mul = self.mul / 10 + 1;
            self.exp += 1;
        }
        self
    }

    pub(crate) fn add(self, other: ErrBound) -> ErrBound {
        let (hi, lo) = if self.exp >= other.exp {
            (self, other)
        } else {
            (other, self)
        };
        let diff = hi.exp - lo.exp;
        if diff > 9 {
            // the smaller bound is below one part in 10^9 of the larger
            ErrBound {
                exp: hi.exp,
                mul: hi.mul + 1,
            }
            .canon()
        } else {
            let scale = 10u64.pow(diff as u32);
            let carried = (lo.mul as u64).div_ceil(scale);
            ErrBound {
                exp: hi.exp,
                mul: hi.mul + carried as u32,
            }
            .canon()
        }
    }

    pub(crate) fn scale_pow10(self, k: i64) -> ErrBound {
        ErrBound {
            exp: self.exp + k,
            mul: self.mul,
        }
    }

    /// Smallest `t` with bound `<= 10^t`.
    pub(crate) fn eff_exp(self) -> i64 {
        let mut t = 0i64;
        let mut p = 1u64;
        while p < self.mul as u64 {
            p *= 10;
            t += 1;
        }
        self.exp + t
    }
}

/// An arbitrary-precision real: `mantissa * 10^exponent`, with an optional
/// absolute error bound. `err == None` means the value is exact.
#[derive(Debug, Clone)]
pub struct HPReal {
    mantissa: BigInt,
    exponent: i64,
    err: Option<ErrBound>,
}

impl HPReal {
    pub fn zero() -> Self {
        HPReal {
            mantissa: BigInt::zero(),
            exponent: 0,
            err: None,
        }
    }

    pub fn one() -> Self {
        HPReal::from_bigint(BigInt::from(1))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        HPReal {
            mantissa: n,
            exponent: 0,
            err: None,
        }
        .normalized()
    }

    pub fn from_i64(n: i64) -> Self {
        HPReal::from_bigint(BigInt::from(n))
    }

    /// Exact value `mantissa * 10^exponent`.
    pub fn from_parts(mantissa: BigInt, exponent: i64) -> Self {
        HPReal {
            mantissa,
            exponent,
            err: None,
        }
        .normalized()
    }

    pub(crate) fn with_err(mantissa: BigInt, exponent: i64, err: ErrBound) -> Self {
        HPReal {
            mantissa,
            exponent,
            err: Some(err),
        }
        .normalized()
        .compressed()
    }

    /// Strip trailing zeros of the mantissa into the exponent.
    fn normalized(mut self) -> Self {
        if self.mantissa.is_zero() {
            self.exponent = 0;
            return self;
        }
        let ten = BigInt::from(10);
        loop {
            let (q, r) = self.mantissa.div_rem(&ten);
            if r.is_zero() {
                self.mantissa = q;
                self.exponent += 1;
            } else {
                break;
            }
        }
        self
    }

    /// Drop stored digits far below the error bound.
    fn compressed(mut self) -> Self {
        let Some(err) = self.err else { return self };
        let cut = err.eff_exp() - COMPRESS_SLACK;
        if self.exponent < cut {
            let shift = (cut - self.exponent) as u64;
            if digits10(&self.mantissa) <= shift {
                self.mantissa = BigInt::zero();
            } else {
                self.mantissa = &self.mantissa / pow10(shift);
            }
            self.exponent = cut;
            self.err = Some(err.add(ErrBound::ulp(cut)));
            self = self.normalized();
        }
        self
    }

    pub fn is_exact(&self) -> bool {
        self.err.is_none()
    }

    /// True if the stored value is exactly zero (error bound ignored).
    pub fn is_zero_value(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative_value(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub(crate) fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub(crate) fn exponent(&self) -> i64 {
        self.exponent
    }

    pub(crate) fn err(&self) -> Option<ErrBound> {
        self.err
    }

    /// `floor(log10 |value|)`, `None` for a zero mantissa.
    pub fn mag_exp(&self) -> Option<i64> {
        if self.mantissa.is_zero() {
            None
        } else {
            Some(self.exponent + digits10(&self.mantissa) as i64 - 1)
        }
    }

    /// Effective error exponent: the error is `<= 10^k` for the returned `k`.
    /// `None` for exact values.
    pub fn err_exp(&self) -> Option<i64> {
        self.err.map(|e| e.eff_exp())
    }

    /// Exponent `u` with `|true value| <= 10^u`, `None` only for exact zero.
    pub(crate) fn mag_upper(&self) -> Option<i64> {
        match (self.mag_exp(), self.err_exp()) {
            (Some(m), Some(e)) => Some(m.max(e) + 1),
            (Some(m), None) => Some(m + 1),
            (None, Some(e)) => Some(e + 1),
            (None, None) => None,
        }
    }

    /// Guaranteed significant decimal digits, `None` for exact values.
    /// May be zero or negative when the value is smaller than its error.
    pub fn precision(&self) -> Option<i64> {
        match (self.mag_exp(), self.err_exp()) {
            (_, None) => None,
            (Some(m), Some(e)) => Some(m - e + 1),
            (None, Some(_)) => Some(0),
        }
    }

    /// Attach an error bound of `10^k` (keeps any larger existing bound).
    pub fn with_err_exp(mut self, k: i64) -> Self {
        let new = ErrBound::ulp(k);
        self.err = Some(match self.err {
            Some(e) if e.eff_exp() >= k => e,
            _ => new,
        });
        self.compressed()
    }

    pub fn neg(&self) -> HPReal {
        HPReal {
            mantissa: -&self.mantissa,
            exponent: self.exponent,
            err: self.err,
        }
    }

    pub fn abs(&self) -> HPReal {
        HPReal {
            mantissa: self.mantissa.abs(),
            exponent: self.exponent,
            err: self.err,
        }
    }

    fn combine_err(a: Option<ErrBound>, b: Option<ErrBound>) -> Option<ErrBound> {
        match (a, b) {
            (None, None) => None,
            (Some(x), None) => Some(x),
            (None, Some(y)) => Some(y),
            (Some(x), Some(y)) => Some(x.add(y)),
        }
    }

    pub fn add(&self, rhs: &HPReal) -> HPReal {
        let e = self.exponent.min(rhs.exponent);
        let ma = &self.mantissa * pow10((self.exponent - e) as u64);
        let mb = &rhs.mantissa * pow10((rhs.exponent - e) as u64);
        let out = HPReal {
            mantissa: ma + mb,
            exponent: e,
            err: Self::combine_err(self.err, rhs.err),
        };
        out.normalized().compressed()
    }

    pub fn sub(&self, rhs: &HPReal) -> HPReal {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &HPReal) -> HPReal {
        // multiplying by an exact zero yields an exact zero whatever the
        // other side's uncertainty
        if (self.mantissa.is_zero() && self.is_exact())
            || (rhs.mantissa.is_zero() && rhs.is_exact())
        {
            return HPReal::zero();
        }
        // err(xy) <= |x| err_y + |y| err_x + err_x err_y
        let mut err = None;
        if let (Some(eb), Some(u)) = (rhs.err, self.mag_upper()) {
            err = Self::combine_err(err, Some(eb.scale_pow10(u)));
        }
        if let (Some(ea), Some(u)) = (self.err, rhs.mag_upper()) {
            err = Self::combine_err(err, Some(ea.scale_pow10(u)));
        }
        if let (Some(ea), Some(eb)) = (self.err, rhs.err) {
            err = Self::combine_err(err, Some(ErrBound::ulp(ea.eff_exp() + eb.eff_exp())));
        }
        let out = HPReal {
            mantissa: &self.mantissa * &rhs.mantissa,
            exponent: self.exponent + rhs.exponent,
            err,
        };
        out.normalized().compressed()
    }

    /// Exact scaling by an integer; the error bound scales with it.
    pub fn mul_bigint(&self, k: &BigInt) -> HPReal {
        let err = self.err.map(|e| e.scale_pow10(digits10(k) as i64));
        HPReal {
            mantissa: &self.mantissa * k,
            exponent: self.exponent,
            err,
        }
        .normalized()
        .compressed()
    }

    pub fn mul_pow10(&self, k: i64) -> HPReal {
        HPReal {
            mantissa: self.mantissa.clone(),
            exponent: self.exponent + k,
            err: self.err.map(|e| e.scale_pow10(k)),
        }
    }

    /// Quotient accurate to `digits` significant decimal digits.
    pub fn div(&self, rhs: &HPReal, digits: u32) -> Result<HPReal> {
        if rhs.mantissa.is_zero() {
            return Err(if rhs.is_exact() {
                Error::InvalidInput("division by zero".into())
            } else {
                Error::insufficient("division by a value indistinguishable from zero")
            });
        }
        if self.mantissa.is_zero() && self.is_exact() {
            return Ok(match rhs.err {
                None => HPReal::zero(),
                // 0/b stays zero; no bound needed on an exact zero
                Some(_) => HPReal::zero(),
            });
        }
        let mag_b = rhs.mag_exp().expect("nonzero mantissa");
        let target = digits as i64 + 8;
        let da = digits10(&self.mantissa) as i64;
        let db = digits10(&rhs.mantissa) as i64;
        let shift = (target + db - da).max(0) as u64;
        let scaled = &self.mantissa * pow10(shift);
        let q = &scaled / &rhs.mantissa;
        let q_exp = self.exponent - rhs.exponent - shift as i64;
        let exact = (&scaled % &rhs.mantissa).is_zero();

        let mut err = if exact && self.is_exact() && rhs.is_exact() {
            None
        } else {
            Some(ErrBound::ulp(q_exp))
        };
        if let Some(ea) = self.err {
            err = Self::combine_err(err, Some(ea.scale_pow10(-mag_b)));
        }
        if let Some(eb) = rhs.err {
            let mag_a = self.mag_upper().unwrap_or(i64::MIN / 4);
            err = Self::combine_err(err, Some(eb.scale_pow10(mag_a - 2 * mag_b)));
        }
        Ok(HPReal {
            mantissa: q,
            exponent: q_exp,
            err,
        }
        .normalized()
        .compressed())
    }

    /// Square root accurate to `digits` significant decimal digits.
    pub fn sqrt(&self, digits: u32) -> Result<HPReal> {
        if self.mantissa.is_negative() {
            // tolerate tiny negative noise
            let mag = self.mag_exp().unwrap_or(i64::MIN / 4);
            match self.err_exp() {
                Some(e) if mag <= e => {
                    return Ok(HPReal::with_err(
                        BigInt::zero(),
                        0,
                        ErrBound::ulp(div_floor_i64(e, 2) + 1),
                    ));
                }
                _ => return Err(Error::InvalidInput("sqrt of a negative value".into())),
            }
        }
        if self.mantissa.is_zero() {
            return Ok(match self.err {
                None => HPReal::zero(),
                Some(e) => HPReal::with_err(
                    BigInt::zero(),
                    0,
                    ErrBound::ulp(div_floor_i64(e.eff_exp(), 2) + 1),
                ),
            });
        }
        let mut m = self.mantissa.clone();
        let mut e = self.exponent;
        if e.rem_euclid(2) != 0 {
            m *= 10;
            e -= 1;
        }
        let da = digits10(&m) as i64;
        let target = digits as i64 + 6;
        let mut t = target - (da + 1) / 2;
        if t < 0 {
            t = 0;
        }
        let scaled = &m * pow10(2 * t as u64);
        let root = scaled.sqrt();
        let r_exp = e / 2 - t;
        let exact = (&root * &root) == scaled && self.is_exact();
        let mut err = if exact {
            None
        } else {
            Some(ErrBound::ulp(r_exp))
        };
        if let Some(ea) = self.err {
            let mag = self.mag_exp().expect("nonzero");
            // 1/(2 sqrt a) <= 10^{-floor(mag/2)}
            err = Self::combine_err(err, Some(ea.scale_pow10(-div_floor_i64(mag, 2))));
        }
        Ok(HPReal {
            mantissa: root,
            exponent: r_exp,
            err,
        }
        .normalized()
        .compressed())
    }

    /// Integer power by repeated multiplication (exact inputs stay exact).
    pub fn powi(&self, k: u32) -> HPReal {
        let mut result = HPReal::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Exact value guaranteed `>=` the true value: stored value plus the
    /// error bound. Identity for exact values.
    pub fn upper_bound_value(&self) -> HPReal {
        match self.err {
            None => self.clone(),
            Some(e) => HPReal::from_parts(BigInt::from(e.mul), e.exp).add(&HPReal {
                mantissa: self.mantissa.clone(),
                exponent: self.exponent,
                err: None,
            }),
        }
    }

    /// Exact value guaranteed `<=` the true value.
    pub fn lower_bound_value(&self) -> HPReal {
        match self.err {
            None => self.clone(),
            Some(e) => HPReal {
                mantissa: self.mantissa.clone(),
                exponent: self.exponent,
                err: None,
            }
            .sub(&HPReal::from_parts(BigInt::from(e.mul), e.exp)),
        }
    }

    /// Compare stored values exactly (error bounds ignored).
    pub fn value_cmp(&self, rhs: &HPReal) -> Ordering {
        let sa = self.mantissa.sign();
        let sb = rhs.mantissa.sign();
        if sa != sb {
            return sa.cmp(&sb);
        }
        if self.mantissa.is_zero() {
            return Ordering::Equal;
        }
        // same nonzero sign: compare magnitudes, fast path on decade
        let ma = self.mag_exp().expect("nonzero");
        let mb = rhs.mag_exp().expect("nonzero");
        let negative = self.mantissa.is_negative();
        if ma != mb {
            let ord = ma.cmp(&mb);
            return if negative { ord.reverse() } else { ord };
        }
        let e = self.exponent.min(rhs.exponent);
        let va = &self.mantissa * pow10((self.exponent - e) as u64);
        let vb = &rhs.mantissa * pow10((rhs.exponent - e) as u64);
        va.cmp(&vb)
    }

    /// `|value| <= 10^k`, exact.
    pub fn abs_le_pow10(&self, k: i64) -> bool {
        match self.mag_exp() {
            None => true,
            Some(m) => {
                if m < k {
                    true
                } else if m > k {
                    false
                } else {
                    // |v| in [10^k, 10^{k+1}): <= only at exactly 10^k
                    let d = digits10(&self.mantissa);
                    self.mantissa.magnitude() == pow10(d - 1).magnitude()
                }
            }
        }
    }

    /// Nearest integer; ties round to even. Fails with `AmbiguousRounding`
    /// when the value's own uncertainty straddles a half-integer boundary.
    pub fn round_nearest(&self) -> Result<BigInt> {
        if self.exponent >= 0 {
            // integer-valued as stored
            if let Some(err) = self.err {
                // ambiguous when the error reaches 1/2
                if err.eff_exp() >= 0 || pow10((-err.eff_exp()) as u64) <= BigInt::from(2 * err.mul)
                {
                    return Err(Error::ambiguous(format!(
                        "integer-valued {} with error 10^{}",
                        self,
                        err.eff_exp()
                    )));
                }
            }
            return Ok(&self.mantissa * pow10(self.exponent as u64));
        }
        let scale = pow10((-self.exponent) as u64);
        let (n0, r) = self.mantissa.div_mod_floor(&scale);
        let twice = BigInt::from(2) * &r;
        let boundary_gap = (&twice - &scale).abs();
        if let Some(err) = self.err {
            let ee = err.eff_exp();
            let ambiguous = if boundary_gap.is_zero() {
                true
            } else {
                // |2r - scale| * 10^exponent <= 2 * mul * 10^{err.exp} ?
                let shift = self.exponent - err.exp;
                if shift >= 0 {
                    // only possible for modest shifts
                    shift <= 12 && boundary_gap * pow10(shift as u64) <= BigInt::from(2 * err.mul)
                } else {
                    boundary_gap <= BigInt::from(2 * err.mul) * pow10((-shift) as u64)
                }
            };
            if ambiguous {
                return Err(Error::ambiguous(format!("{} with error 10^{}", self, ee)));
            }
        }
        Ok(match twice.cmp(&scale) {
            Ordering::Less => n0,
            Ordering::Greater => n0 + 1,
            Ordering::Equal => {
                if n0.is_even() {
                    n0
                } else {
                    n0 + 1
                }
            }
        })
    }

    /// Distance to the nearest integer, in `[0, 1/2]`.
    pub fn frac_dist(&self) -> Result<HPReal> {
        let n = self.round_nearest()?;
        Ok(self.sub(&HPReal::from_bigint(n)).abs())
    }

    /// Signed fractional part relative to the nearest integer, in `[-1/2, 1/2]`.
    pub fn frac_signed(&self) -> Result<HPReal> {
        let n = self.round_nearest()?;
        Ok(self.sub(&HPReal::from_bigint(n)))
    }

    /// Smallest integer guaranteed `>= value` (accounts for the error bound).
    pub fn ceil_upper(&self) -> BigInt {
        let padded = match self.err {
            None => self.clone(),
            Some(e) => self.add(&HPReal::from_parts(BigInt::from(e.mul), e.exp)),
        };
        if padded.exponent >= 0 {
            return &padded.mantissa * pow10(padded.exponent as u64);
        }
        let scale = pow10((-padded.exponent) as u64);
        let (q, r) = padded.mantissa.div_mod_floor(&scale);
        if r.is_zero() {
            q
        } else {
            q + 1
        }
    }

    /// Nearest integer to the stored value, ignoring the error bound
    /// (ties toward even). Used where any nearby integer is acceptable.
    pub(crate) fn round_value(&self) -> BigInt {
        if self.exponent >= 0 {
            return &self.mantissa * pow10(self.exponent as u64);
        }
        let scale = pow10((-self.exponent) as u64);
        let (n0, r) = self.mantissa.div_mod_floor(&scale);
        let twice = BigInt::from(2) * r;
        match twice.cmp(&scale) {
            Ordering::Less => n0,
            Ordering::Greater => n0 + 1,
            Ordering::Equal => {
                if n0.is_even() {
                    n0
                } else {
                    n0 + 1
                }
            }
        }
    }

    /// Truncate the held mantissa to `digits` significant digits (used to
    /// derive fixed-point representations; error accounted).
    pub(crate) fn scaled_int(&self, scale_exp: i64) -> BigInt {
        // round(value * 10^{scale_exp})
        let shift = self.exponent + scale_exp;
        if shift >= 0 {
            &self.mantissa * pow10(shift as u64)
        } else {
            let scale = pow10((-shift) as u64);
            let (q, r) = self.mantissa.div_mod_floor(&scale);
            if BigInt::from(2) * r >= scale {
                q + 1
            } else {
                q
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        let s = format!("{}e{}", self.mantissa, self.exponent);
        s.parse::<f64>().unwrap_or(f64::NAN)
    }
}

pub(crate) fn div_floor_i64(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

impl PartialEq for HPReal {
    fn eq(&self, other: &Self) -> bool {
        self.mantissa == other.mantissa
            && self.exponent == other.exponent
            && self.err_exp() == other.err_exp()
    }
}

impl Eq for HPReal {}
