//! `serialize_with` helpers rendering scalars through [`Scalar::render`],
//! so rationals appear as `p/q` strings.

use serde::ser::{SerializeSeq, Serializer};

use crate::Scalar;

pub fn one<S: Serializer, T: Scalar>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.render())
}

pub fn many<S: Serializer, T: Scalar>(vs: &[T], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(vs.len()))?;
    for v in vs {
        seq.serialize_element(&v.render())?;
    }
    seq.end()
}

pub fn point3<S: Serializer, T: Scalar>(vs: &[T; 3], s: S) -> Result<S::Ok, S::Error> {
    many(vs, s)
}
