//! Exact rational helpers.
//!
//! Witness constants are dyadic (`k - 1 + 2^-S`) and thresholds may differ by
//! `2^-S` with `S` in the tens, so everything that feeds a verdict in oracle
//! mode stays in [`Rational`]. Conversion to `f64` only happens when a value is
//! reported or mixed with shot statistics.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// `2^-exp`.
pub fn dyadic(exp: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << exp as usize)
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // numerator or denominator beyond f64 range
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// "num/den", or just "num" for integers.
pub fn format(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses a decimal ("0.25", "-1e-3"), fraction ("2/7") or integer literal
/// exactly.
pub fn parse(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::Parse(format!("not a number: {text:?}"));
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (ip, fp) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(bad());
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{ip}{fp}0").parse::<BigInt>().map_err(|_| bad())? / 10;
    let scale = exp - fp.len() as i32;
    let ten = BigInt::from(10);
    let mut r = Rational::from_integer(digits);
    if scale >= 0 {
        r *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -r } else { r })
}

/// Exact JSON form `{"num": .., "den": .., "text": "num/den"}`; components
/// that overflow `i64` are written as decimal strings. `text` is ignored on
/// input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalJson(pub Rational);

fn big_to_json(v: &BigInt) -> serde_json::Value {
    match v.to_i64() {
        Some(x) => serde_json::Value::from(x),
        None => serde_json::Value::from(v.to_string()),
    }
}

impl Serialize for RationalJson {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Rational", 3)?;
        st.serialize_field("num", &big_to_json(self.0.numer()))?;
        st.serialize_field("den", &big_to_json(self.0.denom()))?;
        st.serialize_field("text", &format(&self.0))?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for RationalJson {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            num: serde_json::Value,
            den: serde_json::Value,
        }
        fn big<E: serde::de::Error>(v: &serde_json::Value) -> std::result::Result<BigInt, E> {
            match v {
                serde_json::Value::Number(n) => n
                    .as_i64()
                    .map(BigInt::from)
                    .ok_or_else(|| E::custom("non-integer rational component")),
                serde_json::Value::String(s) => s.parse().map_err(E::custom),
                _ => Err(E::custom("rational component must be integer or string")),
            }
        }
        let raw = Raw::deserialize(d)?;
        let den = big(&raw.den)?;
        if den.is_zero() {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        Ok(RationalJson(Rational::new(big(&raw.num)?, den)))
    }
}

pub(crate) fn check_probability(p: &Rational) -> Result<()> {
    if p.is_negative() || *p > Rational::one() {
        return Err(Error::ProbabilityOutOfRange(format(p)));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse("2/7").unwrap(), ratio(2, 7));
        assert_eq!(parse("-1.5e-1").unwrap(), ratio(-3, 20));
        assert_eq!(parse("3").unwrap(), int(3));
        assert_eq!(parse(".5").unwrap(), ratio(1, 2));
        assert!(parse("abc").is_err());
        assert!(parse("1/0").is_err());
        assert!(parse(".").is_err());
    }

    #[test]
    fn dyadic_and_format() {
        assert_eq!(format(&(int(1) + dyadic(5))), "33/32");
        assert_eq!(format(&int(2)), "2");
        assert_eq!(to_f64(&dyadic(3)), 0.125);
    }

    #[test]
    fn json_round_trip() {
        let r = RationalJson(ratio(17, 16));
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(s, r#"{"num":17,"den":16,"text":"17/16"}"#);
        let back: RationalJson = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
        let huge = RationalJson(dyadic(80));
        let s = serde_json::to_string(&huge).unwrap();
        assert!(s.contains("\"1208925819614629174706176\""));
        assert_eq!(serde_json::from_str::<RationalJson>(&s).unwrap(), huge);
    }
}
