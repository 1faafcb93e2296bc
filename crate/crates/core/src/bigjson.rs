//! Serialize arbitrary-precision integers as plain JSON numbers.

use num_bigint::BigUint;
use serde::Serializer;

fn as_number<S: Serializer>(digits: String, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::Error;
    use serde::Serialize;
    let n: serde_json::Number = digits.parse().map_err(S::Error::custom)?;
    n.serialize(s)
}

pub fn biguint<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    as_number(v.to_string(), s)
}

pub fn biguint_vec<S: Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&Wrap(x))?;
    }
    seq.end()
}

struct Wrap<'a>(&'a BigUint);

impl serde::Serialize for Wrap<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        biguint(self.0, s)
    }
}
