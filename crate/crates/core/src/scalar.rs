//! Numeric abstraction for costs and ratios.
//!
//! Network data, fleets, cost tables and solution costs are generic over
//! [`Scalar`]. Floating point types compare with a small tolerance; the
//! rational type is exact, which lets the example instance reproduce its
//! published costs without rounding.

use std::fmt::{Debug, Display};

use num_rational::Rational64;
use num_traits::{Num, Signed};

pub trait Scalar: Num + Signed + Copy + PartialOrd + Debug + Display + Send + Sync + 'static {
    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    /// Nearest value for a float input; rationals approximate to 1e-9.
    fn from_f64(x: f64) -> Self;

    fn to_f64(self) -> f64;

    /// Parses `12`, `-0.99`, `1.5e2` or `p/q`. Rationals keep decimals exactly.
    fn parse_decimal(text: &str) -> Option<Self>;

    /// Text that [`Scalar::parse_decimal`] reads back to the same value.
    fn to_text(self) -> String;

    fn ceil_i64(self) -> i64;

    /// Slack used by comparisons that must tolerate rounding.
    fn tolerance() -> Self;

    fn approx_le(self, other: Self) -> bool {
        self <= other + Self::tolerance()
    }

    fn approx_eq(self, other: Self) -> bool {
        (self - other).abs() <= Self::tolerance()
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

fn parse_fraction<S: Scalar>(text: &str) -> Option<S> {
    let (p, q) = text.split_once('/')?;
    let p: i64 = p.trim().parse().ok()?;
    let q: i64 = q.trim().parse().ok()?;
    (q != 0).then(|| S::from_ratio(p, q))
}

macro_rules! float_scalar {
    ($t:ty, $tol:expr) => {
        impl Scalar for $t {
            fn from_ratio(num: i64, den: i64) -> Self {
                (num as f64 / den as f64) as $t
            }

            fn from_f64(x: f64) -> Self {
                x as $t
            }

            fn to_f64(self) -> f64 {
                self as f64
            }

            fn parse_decimal(text: &str) -> Option<Self> {
                let text = text.trim();
                if text.contains('/') {
                    return parse_fraction(text);
                }
                text.parse::<$t>().ok().filter(|x| x.is_finite())
            }

            fn to_text(self) -> String {
                format!("{self}")
            }

            fn ceil_i64(self) -> i64 {
                self.ceil() as i64
            }

            fn tolerance() -> Self {
                $tol
            }
        }
    };
}

float_scalar!(f64, 1e-9);
float_scalar!(f32, 1e-4);

impl Scalar for Rational64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        Rational64::new(num, den)
    }

    fn from_f64(x: f64) -> Self {
        Rational64::approximate_float(x).unwrap_or_else(|| Rational64::new((x * 1e9).round() as i64, 1_000_000_000))
    }

    fn to_f64(self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }

    fn parse_decimal(text: &str) -> Option<Self> {
        let text = text.trim();
        if text.contains('/') {
            return parse_fraction(text);
        }
        let (mantissa, exp) = match text.find(['e', 'E']) {
            Some(k) => (&text[..k], text[k + 1..].parse::<i32>().ok()?),
            None => (text, 0),
        };
        let (neg, digits) = match mantissa.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
        };
        let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
        if int.is_empty() && frac.is_empty() {
            return None;
        }
        if !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
            return None;
        }
        let all: String = format!("{int}{frac}");
        let mut numer: i64 = if all.is_empty() { 0 } else { all.parse().ok()? };
        let mut denom: i64 = 10i64.checked_pow(frac.len() as u32)?;
        if exp >= 0 {
            numer = numer.checked_mul(10i64.checked_pow(exp as u32)?)?;
        } else {
            denom = denom.checked_mul(10i64.checked_pow((-exp) as u32)?)?;
        }
        if neg {
            numer = -numer;
        }
        Some(Rational64::new(numer, denom))
    }

    fn to_text(self) -> String {
        let (n, d) = (*self.numer(), *self.denom());
        if d == 1 {
            return n.to_string();
        }
        // Denominators of the form 2^a 5^b print as finite decimals.
        let (mut rest, mut twos, mut fives) = (d, 0u32, 0u32);
        while rest % 2 == 0 {
            rest /= 2;
            twos += 1;
        }
        while rest % 5 == 0 {
            rest /= 5;
            fives += 1;
        }
        let places = twos.max(fives);
        if rest == 1 && places <= 18 {
            if let Some(scale) = 10i64.checked_pow(places).and_then(|p| n.checked_mul(p / d)) {
                let sign = if scale < 0 { "-" } else { "" };
                let abs = scale.unsigned_abs();
                let div = 10u64.pow(places);
                let frac = format!("{:0width$}", abs % div, width = places as usize);
                return format!("{sign}{}.{}", abs / div, frac.trim_end_matches('0'));
            }
        }
        format!("{n}/{d}")
    }

    fn ceil_i64(self) -> i64 {
        self.ceil().to_integer()
    }

    fn tolerance() -> Self {
        Rational64::from_integer(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_decimals_are_exact() {
        let x = Rational64::parse_decimal("0.99").unwrap();
        assert_eq!(x, Rational64::new(99, 100));
        assert_eq!(Rational64::parse_decimal("1.5").unwrap(), Rational64::new(3, 2));
        assert_eq!(Rational64::parse_decimal("-2.5e-1").unwrap(), Rational64::new(-1, 4));
        assert_eq!(Rational64::parse_decimal("7/3").unwrap(), Rational64::new(7, 3));
        assert!(Rational64::parse_decimal("abc").is_none());
        assert!(Rational64::parse_decimal(".").is_none());
    }

    #[test]
    fn rational_text_round_trips() {
        for (n, d) in [(99, 100), (3, 2), (-1, 4), (7, 3), (5, 1), (0, 1), (-13, 8)] {
            let x = Rational64::new(n, d);
            assert_eq!(Rational64::parse_decimal(&x.to_text()), Some(x), "{}", x.to_text());
        }
        assert_eq!(Rational64::new(99, 100).to_text(), "0.99");
        assert_eq!(Rational64::new(7, 3).to_text(), "7/3");
    }

    #[test]
    fn float_text_round_trips() {
        for x in [0.99f64, 1.5, 1.0 / 3.0, 1e-12, 4.9] {
            assert_eq!(f64::parse_decimal(&x.to_text()), Some(x));
        }
        assert_eq!(f64::parse_decimal("1/4"), Some(0.25));
        assert_eq!(f32::parse_decimal("0.5"), Some(0.5));
    }

    #[test]
    fn ceil_rounds_up() {
        assert_eq!(Rational64::new(99, 100).ceil_i64(), 1);
        assert_eq!(2.01f64.ceil_i64(), 3);
        assert_eq!(Rational64::from_int(4).ceil_i64(), 4);
    }
}
