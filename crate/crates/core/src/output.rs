//! Plain-text table output with C-style `%.12g` number formatting.

use std::fmt::Write;

/// Significant digits used for every number written to a table.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Formats `x` like C's `printf("%.{digits}g", x)`.
pub fn format_g(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let p = digits.max(1);
    let sci = format!("{:.*e}", p - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp).max(0) as usize;
        strip_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `format_g(x, 12)`.
pub fn g12(x: f64) -> String {
    format_g(x, SIGNIFICANT_DIGITS)
}

/// Comma-separated table with a header line and `\n` line endings.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CsvTable {
    text: String,
    columns: usize,
}

impl CsvTable {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        let mut t = Self {
            text: String::new(),
            columns: header.len(),
        };
        t.push_fields(header.iter().map(|h| h.as_ref().to_string()));
        t
    }

    fn push_fields<I: IntoIterator<Item = String>>(&mut self, fields: I) {
        let mut first = true;
        for f in fields {
            if !first {
                self.text.push(',');
            }
            first = false;
            self.text.push_str(&f);
        }
        self.text.push('\n');
    }

    /// Appends a row of numbers.
    pub fn push(&mut self, values: &[f64]) {
        debug_assert_eq!(values.len(), self.columns);
        self.push_fields(values.iter().map(|&v| g12(v)));
    }

    /// Appends a row of preformatted fields.
    pub fn push_raw<S: AsRef<str>>(&mut self, fields: &[S]) {
        self.push_fields(fields.iter().map(|f| f.as_ref().to_string()));
    }

    /// Appends a `# comment` line.
    pub fn comment(&mut self, text: &str) {
        let _ = writeln!(self.text, "# {text}");
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn into_string(self) -> String {
        self.text
    }
}
