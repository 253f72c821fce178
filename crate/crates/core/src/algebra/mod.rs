//! Exact arithmetic: rationals, polynomials in ζ₁ and truncated series.

pub mod poly;
pub mod series;

pub use poly::{rational_string, Poly};
pub use series::{Series, SeriesError, Var};

pub type Rational = num_rational::BigRational;

/// Parses `"a/b"` or `"a"` into a rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let mut parts = s.trim().splitn(2, '/');
    let n: num_bigint::BigInt = parts.next()?.trim().parse().ok()?;
    let d: num_bigint::BigInt = match parts.next() {
        Some(d) => d.trim().parse().ok()?,
        None => 1.into(),
    };
    if num_traits::Zero::is_zero(&d) {
        return None;
    }
    Some(Rational::new(n, d))
}
