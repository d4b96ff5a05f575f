//! Serialize `Complex64` as `{"re": .., "im": ..}`.

use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serializer};

pub fn serialize<S: Serializer>(z: &Complex64, serializer: S) -> Result<S::Ok, S::Error> {
    let mut s = serializer.serialize_struct("Complex", 2)?;
    s.serialize_field("re", &z.re)?;
    s.serialize_field("im", &z.im)?;
    s.end()
}

pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Complex64, D::Error> {
    #[derive(Deserialize)]
    struct Parts {
        re: f64,
        im: f64,
    }
    let p = Parts::deserialize(deserializer)?;
    Ok(Complex64::new(p.re, p.im))
}
