//! CSV emission helpers. Floats are rendered with 12 significant digits in
//! plain decimal notation where reasonable, scientific otherwise, and output
//! is buffered so two runs with identical flags produce byte-identical files.

use std::io::{self, Write};
use std::path::Path;

/// Format with 12 significant digits, trimming trailing zeros.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", 11, x);
    let (_, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if !(-5..12).contains(&exp) {
        let (mant, _) = sci.split_once('e').unwrap();
        let mant = mant.trim_end_matches('0').trim_end_matches('.');
        format!("{mant}e{exp}")
    } else {
        let prec = (11 - exp).max(0) as usize;
        let dec = format!("{:.*}", prec, x);
        if dec.contains('.') {
            dec.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            dec
        }
    }
}

/// Write a header line plus data rows to `path`, or to stdout when `None`.
pub fn write_csv(path: Option<&Path>, header: &str, rows: &[String]) -> io::Result<()> {
    let mut buf = String::with_capacity(64 * (rows.len() + 1));
    buf.push_str(header);
    buf.push('\n');
    for row in rows {
        buf.push_str(row);
        buf.push('\n');
    }
    match path {
        Some(p) => std::fs::write(p, buf),
        None => io::stdout().write_all(buf.as_bytes()),
    }
}
