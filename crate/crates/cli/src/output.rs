use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

/// A float with 17 significant digits, so that it round-trips exactly.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Serializes a float as a JSON number with [`fmt_float`] formatting.
pub fn json_float<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if !x.is_finite() {
        return Err(serde::ser::Error::custom(format!("non-finite value {x}")));
    }
    let raw = RawValue::from_string(fmt_float(*x)).map_err(serde::ser::Error::custom)?;
    raw.serialize(s)
}

pub fn json_float_opt<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => json_float(v, s),
        None => s.serialize_none(),
    }
}

/// Standard output, or a buffered file when a path is given.
pub fn sink(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}
