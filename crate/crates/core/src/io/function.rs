//! Truth-table file formats: a complete-specification PLA subset and a
//! truth-vector format.
//!
//! Truth-vector files look like
//!
//! ```text
//! n=3 m=1
//! out0=10001111
//! ```
//!
//! with one `out<j>` line per output and rows in MSB-first order (`x1` is the
//! most significant bit of the row index).

use std::collections::BTreeMap;

use crate::boolfn::{BitColumn, TruthTable, MAX_INPUTS};
use crate::error::{Error, Result};

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

/// Parses a PLA file that lists every input row exactly once.
///
/// Supported directives: `.i`, `.o`, `.p`, `.ilb`, `.ob`, `.type f`, `.e` /
/// `.end`. Don't-care symbols are rejected.
pub fn parse_pla(text: &str) -> Result<TruthTable> {
    let mut n_inputs: Option<usize> = None;
    let mut n_outputs: Option<usize> = None;
    let mut declared_rows: Option<usize> = None;
    let mut seen: Option<Vec<bool>> = None;
    let mut columns: Vec<BitColumn> = Vec::new();
    let mut listed = 0usize;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let first = tokens.next().unwrap_or("");
        if let Some(directive) = first.strip_prefix('.') {
            let arg = tokens.next();
            let number = |what: &str| -> Result<usize> {
                arg.and_then(|a| a.parse().ok())
                    .ok_or_else(|| Error::parse(line_no, format!("`.{what}` needs a number")))
            };
            match directive {
                "i" => {
                    let n = number("i")?;
                    if n == 0 || n > MAX_INPUTS {
                        return Err(Error::parse(line_no, format!("input count must be 1..={MAX_INPUTS}")));
                    }
                    n_inputs = Some(n);
                }
                "o" => {
                    let m = number("o")?;
                    if m == 0 {
                        return Err(Error::parse(line_no, "output count must be positive"));
                    }
                    n_outputs = Some(m);
                }
                "p" => declared_rows = Some(number("p")?),
                "ilb" | "ob" => {}
                "type" => {
                    if arg != Some("f") {
                        return Err(Error::Incomplete(format!(
                            "line {line_no}: only `.type f` is supported"
                        )));
                    }
                }
                "e" | "end" => break,
                other => return Err(Error::parse(line_no, format!("unsupported directive .{other}"))),
            }
            continue;
        }

        let (n, m) = match (n_inputs, n_outputs) {
            (Some(n), Some(m)) => (n, m),
            _ => return Err(Error::parse(line_no, "row before `.i` and `.o` headers")),
        };
        let seen = seen.get_or_insert_with(|| {
            columns = vec![BitColumn::zeros(1 << n); m];
            vec![false; 1 << n]
        });
        let inputs = first;
        let outputs = tokens
            .next()
            .ok_or_else(|| Error::parse(line_no, "expected `<inputs> <outputs>`"))?;
        if tokens.next().is_some() {
            return Err(Error::parse(line_no, "trailing tokens after output part"));
        }
        if inputs.len() != n || outputs.len() != m {
            return Err(Error::parse(
                line_no,
                format!("expected {n} input and {m} output symbols"),
            ));
        }
        let mut row = 0usize;
        for c in inputs.chars() {
            row = (row << 1)
                | match c {
                    '0' => 0,
                    '1' => 1,
                    '-' | '~' | 'x' | 'X' => {
                        return Err(Error::Incomplete(format!(
                            "line {line_no}: don't-care in inputs {inputs}"
                        )))
                    }
                    _ => return Err(Error::parse(line_no, format!("bad input symbol {c:?}"))),
                };
        }
        if seen[row] {
            return Err(Error::parse(line_no, format!("duplicate row {inputs}")));
        }
        seen[row] = true;
        listed += 1;
        for (j, c) in outputs.chars().enumerate() {
            match c {
                '0' => {}
                '1' => columns[j].set(row, true),
                '-' | '~' => {
                    return Err(Error::Incomplete(format!(
                        "line {line_no}: don't-care in outputs {outputs}"
                    )))
                }
                _ => return Err(Error::parse(line_no, format!("bad output symbol {c:?}"))),
            }
        }
    }

    let (n, m) = match (n_inputs, n_outputs) {
        (Some(n), Some(m)) => (n, m),
        _ => return Err(Error::parse(0, "missing `.i` or `.o` header")),
    };
    let seen = seen.unwrap_or_default();
    if let Some(missing) = (0..1usize << n).find(|&r| !seen.get(r).copied().unwrap_or(false)) {
        return Err(Error::Incomplete(format!(
            "{} of {} rows missing, first missing row {}",
            (1usize << n) - listed,
            1usize << n,
            row_bits(missing, n)
        )));
    }
    if let Some(p) = declared_rows {
        if p != listed {
            return Err(Error::parse(0, format!("`.p {p}` but {listed} rows listed")));
        }
    }
    debug_assert_eq!(columns.len(), m);
    TruthTable::new(n, columns)
}

fn row_bits(row: usize, n: usize) -> String {
    (0..n)
        .map(|v| if (row >> (n - 1 - v)) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Writes every row of `tt` as a PLA file.
pub fn emit_pla(tt: &TruthTable) -> String {
    let n = tt.n_inputs();
    let mut out = format!(".i {n}\n.o {}\n.p {}\n", tt.n_outputs(), tt.n_rows());
    for row in 0..tt.n_rows() {
        out.push_str(&row_bits(row, n));
        out.push(' ');
        for col in tt.columns() {
            out.push(if col.get(row) { '1' } else { '0' });
        }
        out.push('\n');
    }
    out.push_str(".e\n");
    out
}

pub fn parse_truthvector(text: &str) -> Result<TruthTable> {
    let mut header: Option<(usize, usize)> = None;
    let mut outputs: BTreeMap<usize, BitColumn> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let Some((n, m)) = header else {
            let mut n = None;
            let mut m = None;
            for tok in line.split_whitespace() {
                match tok.split_once('=') {
                    Some(("n", v)) => n = v.parse().ok(),
                    Some(("m", v)) => m = v.parse().ok(),
                    _ => return Err(Error::parse(line_no, format!("unexpected header token {tok:?}"))),
                }
            }
            match (n, m) {
                (Some(n), Some(m)) if (1..=MAX_INPUTS).contains(&n) && m >= 1 => header = Some((n, m)),
                _ => return Err(Error::parse(line_no, "expected header `n=<inputs> m=<outputs>`")),
            }
            continue;
        };
        let (key, bits) = line
            .split_once('=')
            .ok_or_else(|| Error::parse(line_no, "expected `out<j>=<bits>`"))?;
        let j: usize = key
            .trim()
            .strip_prefix("out")
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::parse(line_no, format!("bad output name {key:?}")))?;
        if j >= m {
            return Err(Error::parse(line_no, format!("output index {j} but m={m}")));
        }
        let bits = bits.trim();
        let col = BitColumn::parse(bits)
            .ok_or_else(|| Error::parse(line_no, "truth vector must contain only 0 and 1"))?;
        if col.len() != 1 << n {
            return Err(Error::parse(
                line_no,
                format!("truth vector has {} bits, expected {}", col.len(), 1usize << n),
            ));
        }
        if outputs.insert(j, col).is_some() {
            return Err(Error::parse(line_no, format!("out{j} given twice")));
        }
    }
    let (n, m) = header.ok_or_else(|| Error::parse(0, "missing header `n=<inputs> m=<outputs>`"))?;
    if outputs.len() != m {
        let missing = (0..m).find(|j| !outputs.contains_key(j)).unwrap_or(0);
        return Err(Error::parse(0, format!("out{missing} missing")));
    }
    TruthTable::new(n, outputs.into_values().collect())
}

pub fn emit_truthvector(tt: &TruthTable) -> String {
    let mut out = format!("n={} m={}\n", tt.n_inputs(), tt.n_outputs());
    for (j, col) in tt.columns().iter().enumerate() {
        out.push_str(&format!("out{j}={col}\n"));
    }
    out
}

/// Picks the parser from the first meaningful line: PLA when it starts with a
/// `.` directive, truth-vector otherwise.
pub fn parse_function(text: &str) -> Result<TruthTable> {
    let first = text.lines().map(strip_comment).find(|l| !l.is_empty());
    match first {
        Some(l) if l.starts_with('.') => parse_pla(text),
        _ => parse_truthvector(text),
    }
}
