//! Table serialization: CSV (default) and JSON, with floats printed to 12
//! significant digits so output files are byte-stable across runs.

use std::io::Write;

/// One table cell.
#[derive(Debug, Clone)]
pub enum Cell {
    Str(String),
    Int(i64),
    Float(f64),
}

/// A rectangular table with a fixed header.
#[derive(Debug, Clone)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// Formats with at most 12 significant digits, dropping trailing zeros;
/// plain decimal notation inside a sane exponent range, scientific outside.
/// Every output is a valid JSON number token (NaN becomes "null").
pub fn fmt_sig(x: f64) -> String {
    if x.is_nan() {
        return "null".to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.11e}", x);
    let (mant, exp) = sci.split_once('e').expect("e-format always has an exponent");
    let k: i32 = exp.parse().expect("exponent is an integer");
    let neg = mant.starts_with('-');
    let digits: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };

    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if (-4..12).contains(&k) {
        if k >= 0 {
            let int_len = k as usize + 1;
            if digits.len() > int_len {
                out.push_str(&digits[..int_len]);
                out.push('.');
                out.push_str(&digits[int_len..]);
            } else {
                out.push_str(digits);
                out.push_str(&"0".repeat(int_len - digits.len()));
            }
        } else {
            out.push_str("0.");
            out.push_str(&"0".repeat((-k - 1) as usize));
            out.push_str(digits);
        }
    } else {
        out.push_str(&digits[..1]);
        if digits.len() > 1 {
            out.push('.');
            out.push_str(&digits[1..]);
        }
        out.push('e');
        out.push_str(&k.to_string());
    }
    out
}

fn csv_cell(cell: &Cell) -> String {
    match cell {
        Cell::Str(s) => s.clone(),
        Cell::Int(v) => v.to_string(),
        Cell::Float(x) => fmt_sig(*x),
    }
}

pub fn write_csv<W: Write>(table: &Table, w: &mut W) -> std::io::Result<()> {
    writeln!(w, "{}", table.header.join(","))?;
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(csv_cell).collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    Ok(())
}

fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

fn json_cell(cell: &Cell) -> String {
    match cell {
        Cell::Str(s) => format!("\"{}\"", json_escape(s)),
        Cell::Int(v) => v.to_string(),
        Cell::Float(x) => fmt_sig(*x),
    }
}

/// Rows as an array of objects keyed by the header.
pub fn write_json<W: Write>(table: &Table, w: &mut W) -> std::io::Result<()> {
    writeln!(w, "[")?;
    for (i, row) in table.rows.iter().enumerate() {
        let fields: Vec<String> = table
            .header
            .iter()
            .zip(row)
            .map(|(name, cell)| format!("\"{}\":{}", name, json_cell(cell)))
            .collect();
        let comma = if i + 1 < table.rows.len() { "," } else { "" };
        writeln!(w, "  {{{}}}{comma}", fields.join(","))?;
    }
    writeln!(w, "]")?;
    Ok(())
}
