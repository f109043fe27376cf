//! Rational scalars and the linear-combination trait shared by every element type.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::FoundationError;

/// Exact scalar field. Always kept in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Formats as `p/q`, or `p` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn parse_rational(s: &str) -> Result<Rational, FoundationError> {
    let t = s.trim().replace('\u{2212}', "-");
    let bad = || FoundationError::RationalParse(s.to_string());
    match t.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => {
            let p: BigInt = t.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(p))
        }
    }
}

/// Writes `c·label` the way the reports print terms: `label`, `-label`, `3/2*label`.
pub(crate) fn write_term(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    c: &Rational,
    label: &dyn fmt::Display,
) -> fmt::Result {
    let neg = c.is_negative();
    let mag = c.abs();
    match (first, neg) {
        (true, true) => write!(f, "-")?,
        (true, false) => {}
        (false, true) => write!(f, " - ")?,
        (false, false) => write!(f, " + ")?,
    }
    if mag.is_one() {
        write!(f, "{label}")
    } else {
        write!(f, "{mag}*{label}")
    }
}

/// A finite-dimensional-style vector over the rationals.
///
/// Every algebra element in the crate (series coefficients, conformal elements,
/// matrix elements, Fock states) implements this; zero coefficients are never
/// stored, so structural equality is mathematical equality.
pub trait Vector: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add_scaled(&mut self, other: &Self, c: &Rational);

    fn scale(&mut self, c: &Rational) {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        *self = out;
    }

    fn scaled(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    fn add_assign_vec(&mut self, other: &Self) {
        self.add_scaled(other, &Rational::one());
    }

    fn sub_assign_vec(&mut self, other: &Self) {
        self.add_scaled(other, &-Rational::one());
    }

    fn minus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.sub_assign_vec(other);
        out
    }

    fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign_vec(other);
        out
    }
}

impl Vector for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_scaled(&mut self, other: &Self, c: &Rational) {
        *self += other * c;
    }
    fn scale(&mut self, c: &Rational) {
        *self *= c;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("6/4").unwrap(), ratio(3, 2));
        assert_eq!(parse_rational("−3").unwrap(), rat(-3));
        assert_eq!(format_rational(&ratio(-6, 4)), "-3/2");
        assert_eq!(format_rational(&rat(5)), "5");
        assert_eq!(format_rational(&rat(0)), "0");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn canonical_zero() {
        let z = ratio(0, 7);
        assert_eq!(z, rat(0));
        assert_eq!(z.denom(), &BigInt::from(1));
    }
}
