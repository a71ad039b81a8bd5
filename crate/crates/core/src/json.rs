//! JSON helpers shared by the file formats: big integers become JSON
//! numbers when they fit in `i64` and decimal strings otherwise; rationals
//! are always strings (`"p/q"` or `"p"`).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::ser::{SerializeSeq, Serializer};
use serde_json::Value;

pub fn int_value(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::from(x.to_string()),
    }
}

pub fn int_vec_value(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(int_value).collect())
}

pub fn int_matrix_value(rows: &[Vec<BigInt>]) -> Value {
    Value::Array(rows.iter().map(|r| int_vec_value(r)).collect())
}

pub fn rational_value(x: &BigRational) -> Value {
    Value::from(x.to_string())
}

pub fn serialize_bigint<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match x.to_i64() {
        Some(v) => s.serialize_i64(v),
        None => s.serialize_str(&x.to_string()),
    }
}

pub fn serialize_bigint_vec<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&int_value(x))?;
    }
    seq.end()
}

pub fn serialize_rational_vec<S: Serializer>(xs: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}
