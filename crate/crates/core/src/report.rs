//! Serialization helpers: rationals are written as decimal strings.

use num_rational::BigRational;
use serde::ser::{SerializeStruct, Serializer};

pub fn rational<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    let mut st = s.serialize_struct("Rational", 2)?;
    st.serialize_field("num", &q.numer().to_string())?;
    st.serialize_field("den", &q.denom().to_string())?;
    st.end()
}

pub fn opt_rational<S: Serializer>(q: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
    match q {
        Some(q) => rational(q, s),
        None => s.serialize_none(),
    }
}

/// `p/q`, or `p` for integers.
pub fn rational_text(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
