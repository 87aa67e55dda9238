//! JSON output helpers. Floats are written with 17 significant digits so
//! reports diff byte-for-byte across runs.

use serde::ser::{Error as _, Serialize, Serializer};
use serde_json::value::RawValue;

/// A float serialized as `d.dddddddddddddddde±x`; non-finite values become `null`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct F17(pub f64);

impl Serialize for F17 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return serializer.serialize_none();
        }
        let raw = RawValue::from_string(format!("{:.16e}", self.0)).map_err(S::Error::custom)?;
        raw.serialize(serializer)
    }
}

pub fn floats(values: &[f64]) -> Vec<F17> {
    values.iter().copied().map(F17).collect()
}

pub fn to_string<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serialization cannot fail")
}
