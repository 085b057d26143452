//! CSV tables with `#` metadata lines, number formatting and atomic writes.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// Significant digits of every number written to CSV.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Formats `x` with 12 significant digits, `%g` style: trailing zeros are
/// dropped and exponents outside `[-4, 12)` switch to scientific notation.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        format!(
            "{}e{}{:02}",
            trim_zeros(mantissa.to_owned()),
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_owned()
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CsvTable {
    metadata: Vec<(String, String)>,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|h| (*h).to_owned()).collect(),
            ..Self::default()
        }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.metadata.push((key.to_owned(), value.to_string()));
        self
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.header.len(), "row width must match header");
        self.rows.push(row);
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k}: {v}");
        }
        let _ = writeln!(out, "{}", self.header.join(","));
        for row in &self.rows {
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory, so a failed run never leaves a partial file. `None` writes to
/// standard output.
pub fn write_output(path: Option<&Path>, contents: &str) -> Result<()> {
    let Some(path) = path else {
        let mut stdout = std::io::stdout().lock();
        return stdout
            .write_all(contents.as_bytes())
            .and_then(|_| stdout.flush())
            .map_err(|e| Error::io("<stdout>", e));
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(contents.as_bytes())
        .map_err(|e| Error::io(tmp.path(), e))?;
    tmp.as_file().sync_all().map_err(|e| Error::io(tmp.path(), e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

/// Data rows of a rendered table: everything after the header that is not a
/// `#` comment.
pub fn data_rows(rendered: &str) -> Vec<&str> {
    rendered.lines().filter(|l| !l.starts_with('#')).skip(1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn printed_numbers_parse_back(m in -1.0f64..1.0, e in -30i32..30) {
            let x = m * 10f64.powi(e);
            let back: f64 = fmt_num(x).parse().unwrap();
            prop_assert!((back - x).abs() <= 5e-12 * x.abs());
            let digits = fmt_num(x).split('e').next().unwrap().chars().filter(char::is_ascii_digit).count();
            prop_assert!(digits <= SIGNIFICANT_DIGITS + 4);
        }
    }

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_num(0.576_001_546_722_525), "0.576001546723");
        assert_eq!(fmt_num(1.0), "1");
        assert_eq!(fmt_num(-2.5), "-2.5");
        assert_eq!(fmt_num(4.541_381_265_149_109), "4.54138126515");
        assert_eq!(fmt_num(123_456_789_012.4), "123456789012");
        assert_eq!(fmt_num(1.234_567_890_123_4e12), "1.23456789012e+12");
        assert_eq!(fmt_num(1.5e-5), "1.5e-05");
        assert_eq!(fmt_num(0.000_123), "0.000123");
        assert_eq!(fmt_num(f64::INFINITY), "inf");
        assert_eq!(fmt_num(0.0), "0");
        // rounding carries into the exponent
        assert_eq!(fmt_num(9.999_999_999_999_9), "10");
    }

    #[test]
    fn parse_back_within_precision() {
        for x in [std::f64::consts::PI, 1e-7 / 3.0, 6.02e23, -0.1 - 0.2] {
            let y: f64 = fmt_num(x).parse().unwrap();
            assert!((y - x).abs() <= 1e-11 * x.abs());
        }
    }

    #[test]
    fn render_and_rows() {
        let mut t = CsvTable::new(&["a", "b"]);
        t.meta("seed", 7);
        t.push(vec!["1".into(), "x".into()]);
        let s = t.render();
        assert_eq!(s, "# seed: 7\na,b\n1,x\n");
        assert_eq!(data_rows(&s), vec!["1,x"]);
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        write_output(Some(&path), "first\n").unwrap();
        write_output(Some(&path), "second\n").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "second\n");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
        assert!(write_output(Some(&dir.path().join("missing/out.csv")), "x").is_err());
    }
}
