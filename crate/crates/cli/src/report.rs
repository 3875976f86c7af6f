//! JSON report serialization.
//!
//! Reports are pretty-printed with struct field order preserved and every
//! float written with 17 significant digits, so identical runs produce
//! byte-identical files.

use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::error::{CliError, Result};

/// Pretty formatter that prints floats in `{:.16e}` form.
pub struct ExactFloats<'a>(PrettyFormatter<'a>);

impl Default for ExactFloats<'_> {
    fn default() -> Self {
        ExactFloats(PrettyFormatter::with_indent(b"  "))
    }
}

impl Formatter for ExactFloats<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(value))
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, ExactFloats::default());
    value
        .serialize(&mut ser)
        .map_err(|e| CliError::stage("output", e))?;
    buf.push(b'\n');
    String::from_utf8(buf).map_err(|e| CliError::stage("output", e))
}

/// Writes `text` to `path`, or to stdout when there is no path.
pub fn emit(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::stage("output", format!("{}: {e}", p.display()))),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::stage("output", e))
        }
    }
}

pub fn write_json<T: Serialize>(value: &T, path: Option<&Path>) -> Result<()> {
    emit(&to_json(value)?, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Sample {
        zeta: f64,
        alpha: Vec<f64>,
        count: usize,
    }

    #[test]
    fn floats_have_17_significant_digits_and_fields_keep_order() {
        let s = Sample {
            zeta: 0.1,
            alpha: vec![100.0, -2.5e-7],
            count: 3,
        };
        let json = to_json(&s).unwrap();
        assert_eq!(
            json,
            "{\n  \"zeta\": 1.0000000000000001e-1,\n  \"alpha\": [\n    1.0000000000000000e2,\n    -2.4999999999999999e-7\n  ],\n  \"count\": 3\n}\n"
        );
        let back: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(back["zeta"].as_f64(), Some(0.1));
    }
}
