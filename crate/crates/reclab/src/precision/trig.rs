//! High-precision transcendental functions: pi, sin/cos with exact argument
//! reduction, atan2, natural and decimal logarithms.
//!
//! All series run in fixed-point `BigInt` arithmetic scaled by a power of
//! ten, with guard digits absorbing the per-term truncation drift.

use super::{pow10, ErrBound, HPReal};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::sync::Mutex;

static PI_CACHE: Mutex<Option<(u64, BigInt)>> = Mutex::new(None);
static LN2_CACHE: Mutex<Option<(u64, BigInt)>> = Mutex::new(None);
static LN10_CACHE: Mutex<Option<(u64, BigInt)>> = Mutex::new(None);

/// `sum_{k>=0} (-1)^k / ((2k+1) x^{2k+1})`, scaled by 10^scale (floor-ish).
fn atan_inv_scaled(x: u64, scale: u64) -> BigInt {
    let s = pow10(scale);
    let xx = BigInt::from(x) * BigInt::from(x);
    let mut power = &s / BigInt::from(x);
    let mut sum = power.clone();
    let mut k = 1u64;
    loop {
        power = &power / &xx;
        if power.is_zero() {
            break;
        }
        let term = &power / BigInt::from(2 * k + 1);
        if k % 2 == 1 {
            sum -= &term;
        } else {
            sum += &term;
        }
        k += 1;
    }
    sum
}

/// `atanh(1/x) = sum_{k>=0} 1 / ((2k+1) x^{2k+1})`, scaled by 10^scale.
fn atanh_inv_scaled(x: u64, scale: u64) -> BigInt {
    let s = pow10(scale);
    let xx = BigInt::from(x) * BigInt::from(x);
    let mut power = &s / BigInt::from(x);
    let mut sum = power.clone();
    let mut k = 1u64;
    loop {
        power = &power / &xx;
        if power.is_zero() {
            break;
        }
        sum += &power / BigInt::from(2 * k + 1);
        k += 1;
    }
    sum
}

/// `floor(pi * 10^p)` within 2 ulp, cached.
fn pi_scaled(p: u64) -> BigInt {
    let mut cache = PI_CACHE.lock().unwrap();
    if let Some((cp, cv)) = cache.as_ref() {
        if *cp >= p {
            return cv / pow10(cp - p);
        }
    }
    let w = p + 12;
    // Machin: pi = 16 atan(1/5) - 4 atan(1/239)
    let v = BigInt::from(16) * atan_inv_scaled(5, w) - BigInt::from(4) * atan_inv_scaled(239, w);
    let result = &v / pow10(12);
    *cache = Some((p, result.clone()));
    result
}

/// `floor(ln(2) * 10^p)` within 2 ulp, cached.
fn ln2_scaled(p: u64) -> BigInt {
    let mut cache = LN2_CACHE.lock().unwrap();
    if let Some((cp, cv)) = cache.as_ref() {
        if *cp >= p {
            return cv / pow10(cp - p);
        }
    }
    let w = p + 12;
    let v = BigInt::from(2) * atanh_inv_scaled(3, w);
    let result = &v / pow10(12);
    *cache = Some((p, result.clone()));
    result
}

/// `floor(ln(10) * 10^p)` within a few ulp, cached.
/// `ln 10 = 3 ln 2 + ln(5/4) = 3 ln 2 + 2 atanh(1/9)`.
fn ln10_scaled(p: u64) -> BigInt {
    let mut cache = LN10_CACHE.lock().unwrap();
    if let Some((cp, cv)) = cache.as_ref() {
        if *cp >= p {
            return cv / pow10(cp - p);
        }
    }
    let w = p + 12;
    let v = BigInt::from(3) * ln2_scaled(w) + BigInt::from(2) * atanh_inv_scaled(9, w);
    let result = &v / pow10(12);
    *cache = Some((p, result.clone()));
    result
}

/// Pi accurate to `digits` significant decimal digits.
pub fn pi(digits: u32) -> HPReal {
    let p = digits as u64 + 2;
    HPReal::with_err(
        pi_scaled(p),
        -(p as i64),
        ErrBound {
            exp: -(p as i64),
            mul: 2,
        },
    )
}

/// `2*pi` accurate to `digits` significant decimal digits.
pub fn two_pi(digits: u32) -> HPReal {
    let p = digits as u64 + 2;
    HPReal::with_err(
        BigInt::from(2) * pi_scaled(p),
        -(p as i64),
        ErrBound {
            exp: -(p as i64),
            mul: 4,
        },
    )
}

/// Reduce `x` to `theta = x - 2*pi*n` with `|theta| <~ 1.5*pi`.
fn reduce_mod_two_pi(x: &HPReal, digits: u32) -> Result<HPReal> {
    let mag = x.mag_upper().unwrap_or(0).max(0);
    if mag <= 1 && x.mag_exp().is_none_or(|m| m <= 0) {
        // |x| < 10: already small enough for the series
        return check_phase(x.clone(), digits);
    }
    let work = digits + mag as u32 + 15;
    let tau = two_pi(work);
    let u = x.div(&tau, work)?;
    if let Some(e) = u.err_exp() {
        if e > -1 {
            return Err(Error::insufficient(format!(
                "cannot place {} within a period (quotient error 10^{})",
                x, e
            )));
        }
    }
    let n = u.round_value();
    let theta = x.sub(&tau.mul_bigint(&n));
    check_phase(theta, digits)
}

fn check_phase(theta: HPReal, digits: u32) -> Result<HPReal> {
    if let Some(e) = theta.err_exp() {
        if e > -3 {
            return Err(Error::insufficient(format!(
                "phase mod 2*pi resolvable only to 10^{} (need {} digits)",
                e, digits
            )));
        }
    }
    Ok(theta)
}

/// Simultaneous sine and cosine of a reduced phase, via Taylor series in
/// fixed point at scale `10^p` (`|t| <= 5 * 10^p`).
fn sin_cos_series(t: &BigInt, p: u64) -> (BigInt, BigInt) {
    let scale_sq = pow10(2 * p);
    let t2 = t * t;

    let mut sin_sum = t.clone();
    let mut term = t.clone();
    let mut k = 1u64;
    loop {
        term = -(&term * &t2) / (&scale_sq * BigInt::from((2 * k) * (2 * k + 1)));
        if term.is_zero() {
            break;
        }
        sin_sum += &term;
        k += 1;
    }

    let mut cos_sum = pow10(p);
    let mut term = pow10(p);
    let mut k = 1u64;
    loop {
        term = -(&term * &t2) / (&scale_sq * BigInt::from((2 * k - 1) * (2 * k)));
        if term.is_zero() {
            break;
        }
        cos_sum += &term;
        k += 1;
    }
    (sin_sum, cos_sum)
}

/// Sine and cosine of `x` (any magnitude), accurate to `digits` significant
/// digits provided the argument itself carries enough precision.
pub fn sin_cos(x: &HPReal, digits: u32) -> Result<(HPReal, HPReal)> {
    if x.is_zero_value() && x.is_exact() {
        return Ok((HPReal::zero(), HPReal::one()));
    }
    let theta = reduce_mod_two_pi(x, digits)?;
    let p = digits as u64 + 8;
    let t = theta.scaled_int(p as i64);
    let (s, c) = sin_cos_series(&t, p);
    let series_err = ErrBound {
        exp: -(p as i64) + 3,
        mul: 1,
    };
    let err = match theta.err() {
        Some(e) => e.add(series_err),
        None => series_err,
    };
    Ok((
        HPReal::with_err(s, -(p as i64), err),
        HPReal::with_err(c, -(p as i64), err),
    ))
}

pub fn sin(x: &HPReal, digits: u32) -> Result<HPReal> {
    Ok(sin_cos(x, digits)?.0)
}

pub fn cos(x: &HPReal, digits: u32) -> Result<HPReal> {
    Ok(sin_cos(x, digits)?.1)
}

/// `sin(pi * i / d)` to `digits` significant decimal digits, by exact
/// rational symmetry reduction and a fixed-point Taylor series.
/// Exact at the lattice points (`0`, `±1`).
pub fn sin_pi_rational(i: u64, d: u64, digits: u32) -> Result<HPReal> {
    if i == 0 || d == 0 || digits == 0 {
        return Err(Error::InvalidInput(
            "sin_pi_rational requires i > 0, d > 0, digits >= 1".into(),
        ));
    }
    let mut m = i % (2 * d);
    let mut negative = false;
    if m >= d {
        negative = true;
        m -= d;
    }
    if 2 * m > d {
        m = d - m;
    }
    if m == 0 {
        return Ok(HPReal::zero());
    }
    if 2 * m == d {
        return Ok(if negative {
            HPReal::from_i64(-1)
        } else {
            HPReal::one()
        });
    }
    // theta = pi * m / d in (0, pi/2)
    let work = digits + 12;
    let theta = pi(work)
        .mul_bigint(&BigInt::from(m))
        .div(&HPReal::from_bigint(BigInt::from(d)), work)?;
    let p = digits as u64 + 8;
    let t = theta.scaled_int(p as i64);
    let (s, _) = sin_cos_series(&t, p);
    let err = ErrBound {
        exp: -(p as i64) + 3,
        mul: 1,
    };
    let signed = if negative { -s } else { s };
    Ok(HPReal::with_err(signed, -(p as i64), err))
}

/// `cos(pi * i / d)` via the reflection `cos(x) = sin(pi/2 - x)`.
pub fn cos_pi_rational(i: u64, d: u64, digits: u32) -> Result<HPReal> {
    if d == 0 || digits == 0 {
        return Err(Error::InvalidInput(
            "cos_pi_rational requires d > 0, digits >= 1".into(),
        ));
    }
    let i = i % (2 * d);
    let num = d as i128 - 2 * i as i128;
    if num == 0 {
        return Ok(HPReal::zero());
    }
    if num > 0 {
        sin_pi_rational(num as u64, 2 * d, digits)
    } else {
        Ok(sin_pi_rational((-num) as u64, 2 * d, digits)?.neg())
    }
}

/// Arctangent, `|result| < pi/2`.
fn atan(x: &HPReal, digits: u32) -> Result<HPReal> {
    if x.is_zero_value() {
        return Ok(x.clone());
    }
    let work = digits + 12;
    let one = HPReal::one();
    // |x| > 1: atan(x) = sign * pi/2 - atan(1/x)
    let abs = x.abs();
    if abs.value_cmp(&one) == std::cmp::Ordering::Greater {
        let inv = one.div(x, work)?;
        let inner = atan(&inv, digits)?;
        let half_pi = pi(work).mul_pow10(0).div(&HPReal::from_i64(2), work)?;
        let base = if x.is_negative_value() {
            half_pi.neg()
        } else {
            half_pi
        };
        return Ok(base.sub(&inner));
    }
    // halve the argument until |t| < 0.1
    let mut t = x.clone();
    let mut halvings = 0u32;
    let tenth = "0.1".parse::<HPReal>().expect("literal");
    while t.abs().value_cmp(&tenth) == std::cmp::Ordering::Greater {
        let denom = one.add(&one.add(&t.mul(&t)).sqrt(work)?);
        t = t.div(&denom, work)?;
        halvings += 1;
    }
    // series sum (-1)^k t^{2k+1}/(2k+1)
    let p = work as u64 + 4;
    let ts = t.scaled_int(p as i64);
    let scale_sq = pow10(2 * p);
    let t2 = &ts * &ts;
    let mut power = ts.clone();
    let mut sum = ts;
    let mut k = 1u64;
    loop {
        power = &power * &t2 / &scale_sq;
        if power.is_zero() {
            break;
        }
        let term = &power / BigInt::from(2 * k + 1);
        if k % 2 == 1 {
            sum -= &term;
        } else {
            sum += &term;
        }
        k += 1;
    }
    let series_err = ErrBound {
        exp: -(p as i64) + 3,
        mul: 1,
    };
    let err = match t.err() {
        Some(e) => e.add(series_err),
        None => series_err,
    };
    let small = HPReal::with_err(sum, -(p as i64), err);
    Ok(small.mul_bigint(&BigInt::from(1u64 << halvings)))
}

/// Angle of the point `(x, y)` normalized to `[0, 2*pi)`. Quadrant
/// classification uses the stored values directly.
pub fn atan2(y: &HPReal, x: &HPReal, digits: u32) -> Result<HPReal> {
    use std::cmp::Ordering::*;
    let work = digits + 8;
    let zero = HPReal::zero();
    let angle = match (x.value_cmp(&zero), y.value_cmp(&zero)) {
        (Equal, Equal) => zero.clone(),
        (Equal, Greater) => pi(work).div(&HPReal::from_i64(2), work)?,
        (Equal, Less) => pi(work).div(&HPReal::from_i64(-2), work)?,
        (Greater, _) => atan(&y.div(x, work)?, work)?,
        (Less, ord) => {
            let base = atan(&y.div(x, work)?, work)?;
            if ord == Less {
                base.sub(&pi(work))
            } else {
                base.add(&pi(work))
            }
        }
    };
    // normalize into [0, 2*pi)
    if angle.is_negative_value() {
        Ok(angle.add(&two_pi(work)))
    } else {
        Ok(angle)
    }
}

/// Natural logarithm (value must be positive).
pub fn ln(x: &HPReal, digits: u32) -> Result<HPReal> {
    if x.is_zero_value() || x.is_negative_value() {
        return Err(Error::InvalidInput("ln of a non-positive value".into()));
    }
    let work = digits + 10;
    let mag = x.mag_exp().expect("nonzero");
    let m = x.mul_pow10(-mag); // in [1, 10)
    let s = m.sqrt(work)?.sqrt(work)?; // in [1, 1.78)
    let one = HPReal::one();
    let u = s.sub(&one).div(&s.add(&one), work)?;
    // ln s = 2 atanh(u)
    let p = work as u64 + 4;
    let us = u.scaled_int(p as i64);
    let scale_sq = pow10(2 * p);
    let u2 = &us * &us;
    let mut power = us.clone();
    let mut sum = us;
    let mut k = 1u64;
    loop {
        power = &power * &u2 / &scale_sq;
        if power.is_zero() {
            break;
        }
        sum += &power / BigInt::from(2 * k + 1);
        k += 1;
    }
    let err = ErrBound {
        exp: -(p as i64) + 3,
        mul: 1,
    };
    let ln_m = HPReal::with_err(BigInt::from(8) * sum, -(p as i64), err.scale_pow10(1));
    let ln_ten = HPReal::with_err(
        ln10_scaled(p),
        -(p as i64),
        ErrBound {
            exp: -(p as i64),
            mul: 5,
        },
    );
    Ok(ln_m.add(&ln_ten.mul_bigint(&BigInt::from(mag))))
}

/// Base-10 logarithm.
pub fn log10(x: &HPReal, digits: u32) -> Result<HPReal> {
    let work = digits + 8;
    let n = ln(x, work)?;
    let d = HPReal::with_err(
        ln10_scaled(work as u64 + 4),
        -(work as i64 + 4),
        ErrBound {
            exp: -(work as i64 + 4),
            mul: 5,
        },
    );
    n.div(&d, digits)
}

/// `log10` of a positive big integer, to `digits` digits.
pub fn log10_bigint(n: &BigInt, digits: u32) -> Result<HPReal> {
    if !n.is_positive() {
        return Err(Error::InvalidInput(
            "log10 of a non-positive integer".into(),
        ));
    }
    log10(&HPReal::from_bigint(n.clone()), digits)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &HPReal, b: &str, tol_exp: i64) {
        let expected: HPReal = b.parse().unwrap();
        let d = a.sub(&expected).abs();
        assert!(d.abs_le_pow10(tol_exp), "{} vs {} (diff {})", a, b, d);
    }

    #[test]
    fn pi_digits() {
        close(
            &pi(50),
            "3.14159265358979323846264338327950288419716939937510",
            -48,
        );
    }

    #[test]
    fn sin_pi_rational_special_values() {
        assert_eq!(sin_pi_rational(1, 2, 10).unwrap(), HPReal::one());
        close(
            &sin_pi_rational(1, 4, 30).unwrap(),
            "0.7071067811865475244008443621",
            -27,
        );
        close(&sin_pi_rational(1, 6, 30).unwrap(), "0.5", -29);
        // periodicity and sign
        assert!(sin_pi_rational(7, 6, 30).unwrap().is_negative_value());
        assert_eq!(sin_pi_rational(2, 2, 30).unwrap(), HPReal::zero());
    }

    #[test]
    fn sin_pi_rational_resonance() {
        // sin(5 pi/12) = sin(pi/12) + sin(3 pi/12), exact identity
        let lhs = sin_pi_rational(5, 12, 40).unwrap();
        let rhs = sin_pi_rational(1, 12, 40)
            .unwrap()
            .add(&sin_pi_rational(3, 12, 40).unwrap());
        let d = lhs.sub(&rhs).abs();
        assert!(d.abs_le_pow10(-38), "diff {}", d);
    }

    #[test]
    fn pythagorean_identity() {
        for (i, d) in [(1u64, 7u64), (3, 11), (5, 12), (2, 9)] {
            let s = sin_pi_rational(i, d, 40).unwrap();
            let c = cos_pi_rational(i, d, 40).unwrap();
            let sum = s.mul(&s).add(&c.mul(&c));
            let diff = sum.sub(&HPReal::one()).abs();
            assert!(diff.abs_le_pow10(-37), "{}/{}: {}", i, d, diff);
        }
    }

    #[test]
    fn sin_cos_of_reduced_and_large_arguments() {
        // sin(1) = 0.8414709848078965066525023216...
        let one = HPReal::one();
        close(
            &sin(&one, 40).unwrap(),
            "0.8414709848078965066525023216302989996226",
            -37,
        );
        // sin(x + 2 pi k) == sin(x) for a large exact multiple
        let k = BigInt::from(10u64).pow(12u32);
        let big = one.add(&two_pi(80).mul_bigint(&k));
        let a = sin(&big, 40).unwrap();
        let b = sin(&one, 40).unwrap();
        assert!(a.sub(&b).abs().abs_le_pow10(-36));
    }

    #[test]
    fn insufficient_precision_is_reported() {
        // argument ~1e12 known only to ~6 digits cannot be reduced mod 2 pi
        let x: HPReal = "1.00000e12@6".parse().unwrap();
        assert!(matches!(
            sin(&x, 20),
            Err(Error::InsufficientPrecision { .. })
        ));
    }

    #[test]
    fn atan2_quadrants() {
        let one = HPReal::one();
        let zero = HPReal::zero();
        // atan2(1, 0) = pi/2
        close(
            &atan2(&one, &zero, 40).unwrap(),
            "1.570796326794896619231321691639751442",
            -34,
        );
        // atan2(1, 1) = pi/4
        close(
            &atan2(&one, &one, 40).unwrap(),
            "0.785398163397448309615660845819875721",
            -34,
        );
        // atan2(-1, 1) = -pi/4 -> normalized to 7pi/4
        close(
            &atan2(&one.neg(), &one, 40).unwrap(),
            "5.4977871437821381673096259207391300473",
            -33,
        );
    }

    #[test]
    fn log10_values() {
        close(&log10(&"1000".parse().unwrap(), 30).unwrap(), "3", -27);
        close(
            &log10(&"2".parse().unwrap(), 30).unwrap(),
            "0.301029995663981195213738894724",
            -27,
        );
        let huge = HPReal::from_bigint(num_traits::pow(BigInt::from(10), 35));
        close(&log10(&huge, 30).unwrap(), "35", -26);
    }

    use crate::error::Error;
}
