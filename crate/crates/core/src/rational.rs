//! Exact rationals at the JSON boundary and ℤ[1/a] membership.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::algebra::pisot::divides_power_of;

/// A rational serialized as `{"num": "...", "den": "..."}` with decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalJson(pub BigRational);

impl From<BigRational> for RationalJson {
    fn from(q: BigRational) -> Self {
        Self(q)
    }
}

impl Serialize for RationalJson {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Rational", 2)?;
        st.serialize_field("num", &self.0.numer().to_string())?;
        st.serialize_field("den", &self.0.denom().to_string())?;
        st.end()
    }
}

pub fn rationals_json(v: &[BigRational]) -> Vec<RationalJson> {
    v.iter().cloned().map(RationalJson).collect()
}

/// `p/q` written compactly: an integer when `q = 1`.
pub fn rational_display(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// True iff the reduced denominator of `q` divides some power of `a0`.
pub fn in_z_one_over_a0(q: &BigRational, a0: &BigInt) -> bool {
    divides_power_of(q.denom(), a0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn membership() {
        assert!(in_z_one_over_a0(&r(5, 27), &BigInt::from(-9)));
        assert!(!in_z_one_over_a0(&r(1, 2), &BigInt::from(-9)));
        assert!(in_z_one_over_a0(&r(-7, 1), &BigInt::from(2)));
        assert!(in_z_one_over_a0(&r(-7, 1), &BigInt::from(-1)));
    }

    #[test]
    fn json_shape() {
        let v = serde_json::to_string(&RationalJson(r(-6, 4))).unwrap();
        assert_eq!(v, r#"{"num":"-3","den":"2"}"#);
    }
}
