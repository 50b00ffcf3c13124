//! Exact nonnegative rationals used for every ratio the crate reports.

use num_rational::Ratio;
use serde::Serializer;

pub type Rational = Ratio<u128>;

/// `num/den` reduced; panics on a zero denominator.
pub fn rational(num: u128, den: u128) -> Rational {
    Ratio::new(num, den)
}

pub fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Renders `n` for integers and `n/d` otherwise.
pub fn render(r: &Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn serialize_rational<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&render(r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_reduced() {
        assert_eq!(render(&rational(18, 16)), "9/8");
        assert_eq!(render(&rational(4, 4)), "1");
        assert_eq!(to_f64(&rational(9, 8)), 1.125);
    }
}
