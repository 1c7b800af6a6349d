use std::fmt::Write as _;

/// Round-trip formatting with 17 significant digits.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

/// Text without separators, for status columns.
pub fn text(s: &str) -> String {
    s.replace([',', '\n', '\r'], ";")
}

/// CSV document with the versioned comment line.
pub struct Table {
    out: String,
}

impl Table {
    pub fn new(command: &str, header: &[String]) -> Self {
        let mut out = String::new();
        let _ = writeln!(out, "# jfts-capacity v{} {command}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(out, "{}", header.join(","));
        Self { out }
    }

    pub fn row(&mut self, cells: &[String]) {
        let _ = writeln!(self.out, "{}", cells.join(","));
    }

    pub fn finish(self) -> String {
        self.out
    }
}
