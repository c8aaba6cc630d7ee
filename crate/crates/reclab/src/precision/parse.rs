//! Decimal text form: `<decimal>[@<precision>]`.
//!
//! `1.41421356@9` is a value guaranteed accurate to 9 significant decimal
//! digits. Values without `@` are exact. Printing emits the full stored
//! mantissa (guard digits included) so that parsing a printed value
//! reconstructs it bit-for-bit.

use super::{ErrBound, HPReal};
use crate::error::Error;
use num_bigint::BigInt;
use num_traits::Zero;
use std::fmt;
use std::str::FromStr;

impl fmt::Display for HPReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mantissa.is_zero() {
            return match self.err_exp() {
                None => write!(f, "0"),
                Some(e) => write!(f, "0e{}@0", e),
            };
        }
        let digits = self.mantissa.magnitude().to_str_radix(10);
        let neg = self.mantissa.sign() == num_bigint::Sign::Minus;
        let mag = self.exponent + digits.len() as i64 - 1;
        let mut s = String::new();
        if neg {
            s.push('-');
        }
        if (-6..=20).contains(&mag) {
            // positional
            if mag >= digits.len() as i64 - 1 {
                // integer with possible trailing zeros
                s.push_str(&digits);
                for _ in 0..(mag - (digits.len() as i64 - 1)) {
                    s.push('0');
                }
            } else if mag >= 0 {
                s.push_str(&digits[..=mag as usize]);
                s.push('.');
                s.push_str(&digits[mag as usize + 1..]);
            } else {
                s.push_str("0.");
                for _ in 0..(-mag - 1) {
                    s.push('0');
                }
                s.push_str(&digits);
            }
        } else {
            s.push_str(&digits[..1]);
            if digits.len() > 1 {
                s.push('.');
                s.push_str(&digits[1..]);
            }
            s.push('e');
            s.push_str(&mag.to_string());
        }
        if let Some(e) = self.err_exp() {
            s.push('@');
            s.push_str(&(mag - e + 1).to_string());
        }
        f.write_str(&s)
    }
}

impl FromStr for HPReal {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self, Error> {
        parse_hpreal(input, 0)
    }
}

/// Parse an annotated decimal. `base_pos` offsets reported error positions
/// (used when the value is embedded in a larger expression).
pub fn parse_hpreal(input: &str, base_pos: usize) -> Result<HPReal, Error> {
    let b = input.as_bytes();
    let mut i = 0usize;
    let err_at = |i: usize, what: &str| Error::parse(base_pos + i, what.to_string());

    let mut neg = false;
    if i < b.len() && (b[i] == b'+' || b[i] == b'-') {
        neg = b[i] == b'-';
        i += 1;
    }
    let int_start = i;
    while i < b.len() && b[i].is_ascii_digit() {
        i += 1;
    }
    if i == int_start {
        return Err(err_at(i, "digit"));
    }
    let int_part = &input[int_start..i];

    let mut frac_part = "";
    if i < b.len() && b[i] == b'.' {
        i += 1;
        let fs = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        if i == fs {
            return Err(err_at(i, "digit after decimal point"));
        }
        frac_part = &input[fs..i];
    }

    let mut e10: i64 = 0;
    if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
        i += 1;
        let mut eneg = false;
        if i < b.len() && (b[i] == b'+' || b[i] == b'-') {
            eneg = b[i] == b'-';
            i += 1;
        }
        let es = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        if i == es {
            return Err(err_at(i, "exponent digits"));
        }
        e10 = input[es..i]
            .parse::<i64>()
            .map_err(|_| err_at(es, "exponent in range"))?;
        if eneg {
            e10 = -e10;
        }
    }

    let mut precision: Option<i64> = None;
    if i < b.len() && b[i] == b'@' {
        i += 1;
        let mut pneg = false;
        if i < b.len() && b[i] == b'-' {
            pneg = true;
            i += 1;
        }
        let ps = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        if i == ps {
            return Err(err_at(i, "precision digits after '@'"));
        }
        let mut p = input[ps..i]
            .parse::<i64>()
            .map_err(|_| err_at(ps, "precision in range"))?;
        if pneg {
            p = -p;
        }
        precision = Some(p);
    }

    if i != b.len() {
        return Err(err_at(i, "end of number"));
    }

    let digits_str = format!("{}{}", int_part, frac_part);
    let mut mantissa = BigInt::parse_bytes(digits_str.as_bytes(), 10)
        .ok_or_else(|| err_at(int_start, "decimal digits"))?;
    if neg {
        mantissa = -mantissa;
    }
    let exponent = e10 - frac_part.len() as i64;

    let v = HPReal::from_parts(mantissa, exponent);
    match precision {
        None => Ok(v),
        Some(p) => {
            if v.mantissa.is_zero() {
                // "0e<k>@0": the exponent field carries the error bound
                Ok(HPReal {
                    mantissa: BigInt::zero(),
                    exponent: 0,
                    err: Some(ErrBound::ulp(e10)),
                })
            } else {
                let mag = v.mag_exp().expect("nonzero");
                Ok(v.with_err_exp(mag - p + 1))
            }
        }
    }
}

impl serde::Serialize for HPReal {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for HPReal {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Serde helpers for `BigInt` fields as decimal strings.
pub mod bigint_string {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Serde helpers for `Vec<BigInt>` as decimal strings.
pub mod bigint_vec_string {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let strings: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        strings.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let strings: Vec<String> = Vec::deserialize(d)?;
        strings
            .into_iter()
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::super::HPReal;

    #[test]
    fn parse_annotated() {
        let x: HPReal = "1.41421356@9".parse().unwrap();
        assert_eq!(x.precision(), Some(9));
        assert_eq!(x.to_string(), "1.41421356@9");
    }

    #[test]
    fn parse_exact_round_trip() {
        for s in ["0", "1", "-2.5", "0.125", "1e35", "-3.25e-40"] {
            let x: HPReal = s.parse().unwrap();
            let y: HPReal = x.to_string().parse().unwrap();
            assert_eq!(x, y, "{}", s);
            assert!(x.is_exact());
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("".parse::<HPReal>().is_err());
        assert!("1.".parse::<HPReal>().is_err());
        assert!("1x".parse::<HPReal>().is_err());
        assert!("1@".parse::<HPReal>().is_err());
        assert!("e5".parse::<HPReal>().is_err());
    }

    #[test]
    fn uncertain_zero_round_trip() {
        let x: HPReal = "0e-150@0".parse().unwrap();
        assert!(x.is_zero_value());
        assert_eq!(x.err_exp(), Some(-150));
        let y: HPReal = x.to_string().parse().unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn display_uses_positional_in_human_range() {
        let x: HPReal = "98.99494936".parse().unwrap();
        assert_eq!(x.to_string(), "98.99494936");
        let y: HPReal = "1e35".parse().unwrap();
        assert_eq!(y.to_string(), "1e35");
        let z: HPReal = "1e-42".parse().unwrap();
        assert_eq!(z.to_string(), "1e-42");
    }
}
