//! Exact rational numbers: parsing, canonical text form and display decimals.
//!
//! Every payoff, belief and LP quantity in this crate is a [`Rational`]. The
//! text grammar accepted by [`parse_rational`] is
//!
//! ```text
//! rational := sign? digits ( "/" digits )?
//! decimal  := sign? digits? ( "." digits )? ( ("e" | "E") sign? digits )?
//! ```
//!
//! where a `/` denominator must be nonzero. Decimals are converted exactly,
//! so `"0.25"` and `"1/4"` denote the same value.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

/// Number of significant digits used for display decimals.
pub const DISPLAY_DIGITS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed numeral {text:?}: {reason}")]
pub struct ParseRationalError {
    pub text: String,
    pub reason: &'static str,
}

fn malformed(text: &str, reason: &'static str) -> ParseRationalError {
    ParseRationalError {
        text: text.to_string(),
        reason,
    }
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses a rational string (`"-3/4"`) or an exact decimal (`"0.25"`, `"1e-3"`).
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(malformed(text, "empty"));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n = parse_signed_digits(num).ok_or_else(|| malformed(text, "bad numerator"))?;
        if den.is_empty() || !den.bytes().all(|b| b.is_ascii_digit()) {
            return Err(malformed(text, "bad denominator"));
        }
        let d: BigInt = den.parse().map_err(|_| malformed(text, "bad denominator"))?;
        if d.is_zero() {
            return Err(malformed(text, "zero denominator"));
        }
        return Ok(Rational::new(n, d));
    }
    parse_decimal(s).ok_or_else(|| malformed(text, "not a rational or decimal"))
}

fn parse_signed_digits(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.trim_start_matches('+').parse().ok()
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (negative, body) = match s.as_bytes()[0] {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(idx) => {
            let exp_text = &body[idx + 1..];
            let exp_digits = exp_text.strip_prefix(['+', '-']).unwrap_or(exp_text);
            if exp_digits.is_empty() || !exp_digits.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            (&body[..idx], exp_text.parse::<i64>().ok()?)
        }
        None => (body, 0),
    };
    let (whole, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{whole}{frac}");
    let mut value = Rational::from_integer(digits.parse::<BigInt>().ok()?);
    let shift = exponent - frac.len() as i64;
    if shift.unsigned_abs() > 10_000 {
        return None;
    }
    let ten = BigInt::from(10);
    let scale = Rational::from_integer(num_traits::pow(ten, shift.unsigned_abs() as usize));
    if shift >= 0 {
        value *= scale;
    } else {
        value /= scale;
    }
    Some(if negative { -value } else { value })
}

/// Canonical exact text form, always `p/q` (so zero prints as `0/1`).
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Decimal approximation rounded half away from zero to `digits` significant
/// digits, with trailing zeros removed. Display only.
pub fn to_decimal_string(q: &Rational, digits: usize) -> String {
    if q.is_zero() {
        return "0".to_string();
    }
    let digits = digits.max(1);
    let negative = q.is_negative();
    let abs = q.abs();
    let ten = BigInt::from(10);

    // exponent e with 10^e <= abs < 10^(e+1)
    let mut e = abs.numer().to_string().len() as i64 - abs.denom().to_string().len() as i64;
    let pow10 = |k: i64| -> Rational {
        let p = Rational::from_integer(num_traits::pow(ten.clone(), k.unsigned_abs() as usize));
        if k >= 0 {
            p
        } else {
            p.recip()
        }
    };
    while abs >= pow10(e + 1) {
        e += 1;
    }
    while abs < pow10(e) {
        e -= 1;
    }

    let scaled = &abs * pow10(digits as i64 - 1 - e);
    let (quot, rem) = scaled.numer().div_rem(scaled.denom());
    let mut mantissa = quot;
    if Rational::new(rem * 2, scaled.denom().clone()) >= Rational::one() {
        mantissa += 1;
    }
    if mantissa.to_string().len() > digits {
        mantissa /= 10;
        e += 1;
    }
    let mantissa = mantissa.to_string();

    // place the decimal point: value = 0.mantissa * 10^(e+1)
    let point = e + 1;
    let mut out = if point <= 0 {
        format!("0.{}{}", "0".repeat((-point) as usize), mantissa)
    } else if point as usize >= mantissa.len() {
        format!("{}{}", mantissa, "0".repeat(point as usize - mantissa.len()))
    } else {
        format!("{}.{}", &mantissa[..point as usize], &mantissa[point as usize..])
    };
    if out.contains('.') {
        while out.ends_with('0') {
            out.pop();
        }
        if out.ends_with('.') {
            out.pop();
        }
    }
    if negative {
        out.insert(0, '-');
    }
    out
}

pub fn display(q: &Rational) -> String {
    to_decimal_string(q, DISPLAY_DIGITS)
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // huge numerators/denominators: fall back on the decimal form
        display(q).parse().unwrap_or(f64::NAN)
    })
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn sum(values: &[Rational]) -> Rational {
    values.iter().fold(Rational::zero(), |acc, x| acc + x)
}

/// Serde adapters writing rationals as `{"exact": "p/q", "approx": "..."}`
/// and reading either that object, a rational string or a JSON number.
pub mod serde_exact {
    use super::{display, format_rational, Rational};
    use serde::de::Error as _;
    use serde::ser::SerializeStruct;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub(crate) struct Repr<'a>(pub &'a Rational);

    impl Serialize for Repr<'_> {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            let mut st = s.serialize_struct("Rational", 2)?;
            st.serialize_field("exact", &format_rational(self.0))?;
            st.serialize_field("approx", &display(self.0))?;
            st.end()
        }
    }

    pub(crate) struct Parsed(pub Rational);

    impl<'de> Deserialize<'de> for Parsed {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            let value = serde_json::Value::deserialize(d)?;
            super::from_json_value(&value)
                .map(Parsed)
                .map_err(|e| D::Error::custom(e.to_string()))
        }
    }

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        Repr(q).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        Parsed::deserialize(d).map(|p| p.0)
    }

    pub mod vec {
        use super::{Parsed, Repr};
        use crate::rational::Rational;
        use serde::{Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(v.iter().map(Repr))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            Ok(Vec::<Parsed>::deserialize(d)?.into_iter().map(|p| p.0).collect())
        }
    }

    pub mod option {
        use super::{Parsed, Repr};
        use crate::rational::Rational;
        use serde::{Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            match v {
                Some(q) => s.serialize_some(&Repr(q)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
            Ok(Option::<Parsed>::deserialize(d)?.map(|p| p.0))
        }
    }
}

/// Reads a JSON string or number as an exact rational.
pub fn from_json_value(value: &serde_json::Value) -> Result<Rational, ParseRationalError> {
    match value {
        serde_json::Value::String(s) => parse_rational(s),
        serde_json::Value::Number(n) => parse_rational(&n.to_string()),
        serde_json::Value::Object(map) => match map.get("exact") {
            Some(serde_json::Value::String(s)) => parse_rational(s),
            _ => Err(malformed(&value.to_string(), "object without an exact field")),
        },
        other => Err(malformed(&other.to_string(), "expected a string or number")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_rational_strings() {
        assert_eq!(parse_rational("3/4").unwrap(), ratio(3, 4));
        assert_eq!(parse_rational("-6/8").unwrap(), ratio(-3, 4));
        assert_eq!(parse_rational("+2").unwrap(), int(2));
        assert_eq!(parse_rational(" 7 ").unwrap(), int(7));
    }

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse_rational("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), ratio(-3, 2));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("1e-3").unwrap(), ratio(1, 1000));
        assert_eq!(parse_rational("2.5E2").unwrap(), int(250));
        assert_eq!(parse_rational("0.1").unwrap(), ratio(1, 10));
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["", "1/0", "1/", "/2", "1/-2", "a", "1.2.3", "1e", "--1", "1/2/3", "."] {
            assert!(parse_rational(bad).is_err(), "{bad:?} should fail");
        }
    }

    #[test]
    fn canonical_form_always_has_denominator() {
        assert_eq!(format_rational(&int(0)), "0/1");
        assert_eq!(format_rational(&ratio(2, 4)), "1/2");
        assert_eq!(format_rational(&ratio(-5, 1)), "-5/1");
    }

    #[test]
    fn decimal_display() {
        assert_eq!(display(&ratio(1, 2)), "0.5");
        assert_eq!(display(&ratio(-1099, 100000)), "-0.01099");
        assert_eq!(display(&int(1000)), "1000");
        assert_eq!(display(&ratio(1, 3)), "0.33333333333333333333");
        assert_eq!(display(&ratio(2, 3)), "0.66666666666666666667");
        assert_eq!(to_decimal_string(&ratio(999, 1000), 2), "1");
        assert_eq!(to_decimal_string(&ratio(12345, 1), 2), "12000");
    }

    #[test]
    fn json_numbers_keep_their_literal() {
        let v: serde_json::Value = serde_json::from_str("[0.25, \"1/3\", 2]").unwrap();
        let parsed: Vec<_> = v
            .as_array()
            .unwrap()
            .iter()
            .map(|x| from_json_value(x).unwrap())
            .collect();
        assert_eq!(parsed, vec![ratio(1, 4), ratio(1, 3), int(2)]);
    }

    proptest! {
        #[test]
        fn canonical_form_round_trips(n in -1_000_000i64..1_000_000, d in 1i64..1_000_000) {
            let q = ratio(n, d);
            prop_assert_eq!(parse_rational(&format_rational(&q)).unwrap(), q);
        }

        #[test]
        fn display_is_close(n in -1_000_000i64..1_000_000, d in 1i64..1_000_000) {
            let q = ratio(n, d);
            let shown: f64 = display(&q).parse().unwrap();
            prop_assert!((shown - n as f64 / d as f64).abs() <= 1e-12 * (1.0 + (n as f64 / d as f64).abs()));
        }
    }
}
