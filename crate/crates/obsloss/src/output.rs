//! Numeric formatting and flat record rendering.
//!
//! All emitted numbers use the shortest representation that round-trips,
//! capped at 12 significant digits, so downstream tools can reproduce the
//! computed values from the text alone.

/// Shortest round-trip representation, capped at 12 significant digits.
pub fn format_float(x: f64) -> String {
    let shortest = format!("{x}");
    if significant_digits(&shortest) <= 12 {
        shortest
    } else {
        format!("{x:.11e}")
    }
}

fn significant_digits(s: &str) -> usize {
    let mantissa = s.split(['e', 'E']).next().unwrap_or(s);
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    digits.trim_start_matches('0').len()
}

/// An ordered list of named fields, renderable as a CSV header/row pair or a
/// JSON object. Field names are plain identifiers, so neither format needs
/// quoting or escaping beyond JSON string delimiters.
#[derive(Clone, Debug, Default)]
pub struct Record {
    fields: Vec<(String, Value)>,
}

#[derive(Clone, Debug)]
enum Value {
    Uint(u64),
    Float(f64),
    Text(String),
}

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn uint(mut self, name: &str, value: u64) -> Self {
        self.fields.push((name.to_string(), Value::Uint(value)));
        self
    }

    pub fn float(mut self, name: &str, value: f64) -> Self {
        self.fields.push((name.to_string(), Value::Float(value)));
        self
    }

    pub fn text(mut self, name: &str, value: &str) -> Self {
        self.fields
            .push((name.to_string(), Value::Text(value.to_string())));
        self
    }

    pub fn csv_header(&self) -> String {
        self.fields
            .iter()
            .map(|(name, _)| name.as_str())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn csv_row(&self) -> String {
        self.fields
            .iter()
            .map(|(_, value)| value.render())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Header line plus one row.
    pub fn to_csv(&self) -> String {
        format!("{}\n{}\n", self.csv_header(), self.csv_row())
    }

    pub fn to_json(&self) -> String {
        let body = self
            .fields
            .iter()
            .map(|(name, value)| format!("\"{}\":{}", json_escape(name), value.render_json()))
            .collect::<Vec<_>>()
            .join(",");
        format!("{{{body}}}\n")
    }
}

impl Value {
    fn render(&self) -> String {
        match self {
            Value::Uint(v) => v.to_string(),
            Value::Float(v) => format_float(*v),
            Value::Text(v) => v.clone(),
        }
    }

    fn render_json(&self) -> String {
        match self {
            Value::Uint(v) => v.to_string(),
            Value::Float(v) => format_float(*v),
            Value::Text(v) => format!("\"{}\"", json_escape(v)),
        }
    }
}

fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}
