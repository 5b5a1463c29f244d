use clap::ValueEnum;
use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Csv,
    Json,
}

/// `%g`-style rendering with `digits` significant digits and no trailing zeros.
pub fn significant(value: f64, digits: usize) -> String {
    if value == 0.0 || !value.is_finite() {
        return format!("{value}");
    }
    let digits = digits.max(1);
    let scientific = format!("{:.*e}", digits - 1, value);
    let (mantissa, exponent) = scientific.split_once('e').expect("exponent");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    if exponent < -5 || exponent >= digits as i32 {
        return format!("{}e{exponent}", trim_zeros(mantissa));
    }
    let decimals = (digits as i32 - 1 - exponent).max(0) as usize;
    trim_zeros(&format!("{value:.decimals$}")).to_string()
}

/// Scientific rendering of `e^ln_value`, for magnitudes below `f64` range.
pub fn significant_from_ln(ln_value: f64, digits: usize) -> String {
    if ln_value == f64::NEG_INFINITY {
        return "0".into();
    }
    let decade = ln_value / std::f64::consts::LN_10;
    let mut exponent = decade.floor();
    let mut mantissa = 10f64.powf(decade - exponent);
    let digits = digits.max(1);
    let mut text = format!("{:.*}", digits - 1, mantissa);
    if text.starts_with("10") {
        exponent += 1.0;
        mantissa /= 10.0;
        text = format!("{:.*}", digits - 1, mantissa);
    }
    format!("{}e{}", trim_zeros(&text), exponent as i64)
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// JSON number carrying exactly the given digits.
pub fn json_number_text(text: &str) -> Value {
    serde_json::from_str::<Number>(text)
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

pub fn json_number(value: f64, digits: usize) -> Value {
    json_number_text(&significant(value, digits))
}

pub fn object<const N: usize>(fields: [(&str, Value); N]) -> Value {
    Value::Object(
        fields
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect::<Map<_, _>>(),
    )
}

pub fn json_text(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    text
}

/// Numeric cells right-aligned, text left-aligned.
pub fn table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let mut out = String::new();
        for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
            if i > 0 {
                out.push_str("  ");
            }
            if cell.parse::<f64>().is_ok() {
                out.push_str(&format!("{cell:>w$}"));
            } else {
                out.push_str(&format!("{cell:<w$}"));
            }
        }
        out.trim_end().to_string() + "\n"
    };
    let mut out = line(headers.to_vec());
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    out.push_str(&line(rule.iter().map(String::as_str).collect()));
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}

pub fn csv(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(headers).expect("in-memory write");
    for row in rows {
        writer.write_record(row).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

/// `input` with a caret line under `start..end`.
pub fn caret(input: &str, start: usize, end: usize) -> String {
    let end = end.min(input.len());
    let start = start.min(end);
    let column = input.get(..start).map_or(start, |s| s.chars().count());
    let width = input
        .get(start..end)
        .map_or(1, |s| s.chars().count().max(1));
    format!("  {input}\n  {}{}\n", " ".repeat(column), "^".repeat(width))
}
