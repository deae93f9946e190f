//! Primitive gates, gate libraries, and per-gate information measures.
//!
//! A gate's truth vector uses the same row encoding as
//! [`TruthTable`](crate::boolfn::TruthTable): the first input is the most
//! significant index bit. Under that encoding NOT is `[10]`, AND `[0001]`,
//! OR `[0111]` and EXOR `[0110]`.

use std::collections::HashSet;
use std::fmt;

use crate::boolfn::{plogp, BitColumn, TruthTable};
use crate::error::{Error, Result};

/// Largest arity accepted for user-defined gates.
pub const MAX_ARITY: usize = 4;

/// Names of the built-in gates, in their canonical order.
pub const STANDARD_GATES: [&str; 4] = ["NOT", "AND", "OR", "EXOR"];

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GateKind {
    name: String,
    arity: usize,
    /// Bit `r` is the output on row `r`.
    truth: u16,
}

impl GateKind {
    /// Defines a gate from its truth vector, e.g. `"0001"` for AND.
    pub fn new(name: &str, truth_vector: &str) -> Result<Self> {
        let invalid = |reason: String| Error::InvalidGate {
            name: name.to_string(),
            reason,
        };
        if !is_identifier(name) {
            return Err(invalid("name must be alphanumeric".into()));
        }
        let rows = truth_vector.len();
        if !rows.is_power_of_two() || !(2..=1 << MAX_ARITY).contains(&rows) {
            return Err(invalid(format!(
                "truth vector length {rows} is not 2^k for 1 <= k <= {MAX_ARITY}"
            )));
        }
        let mut truth = 0u16;
        for (r, c) in truth_vector.chars().enumerate() {
            match c {
                '0' => {}
                '1' => truth |= 1 << r,
                _ => return Err(invalid(format!("non-binary character {c:?}"))),
            }
        }
        Ok(GateKind {
            name: name.to_string(),
            arity: rows.trailing_zeros() as usize,
            truth,
        })
    }

    /// One of NOT, AND, OR, EXOR (XOR accepted as an alias). Case-insensitive.
    pub fn standard(name: &str) -> Result<Self> {
        let (canon, vector) = match name.to_ascii_uppercase().as_str() {
            "NOT" => ("NOT", "10"),
            "AND" => ("AND", "0001"),
            "OR" => ("OR", "0111"),
            "EXOR" | "XOR" => ("EXOR", "0110"),
            _ => return Err(Error::UnknownGate(name.to_string())),
        };
        GateKind::new(canon, vector)
    }

    pub fn not() -> Self {
        Self::standard("NOT").unwrap()
    }

    pub fn and() -> Self {
        Self::standard("AND").unwrap()
    }

    pub fn or() -> Self {
        Self::standard("OR").unwrap()
    }

    pub fn exor() -> Self {
        Self::standard("EXOR").unwrap()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn rows(&self) -> usize {
        1 << self.arity
    }

    pub fn output(&self, row: usize) -> bool {
        (self.truth >> row) & 1 == 1
    }

    pub fn truth_vector(&self) -> String {
        (0..self.rows())
            .map(|r| if self.output(r) { '1' } else { '0' })
            .collect()
    }

    /// The gate as a one-output truth table over its own inputs.
    pub fn truth_table(&self) -> TruthTable {
        let col = BitColumn::from_bits((0..self.rows()).map(|r| self.output(r)));
        TruthTable::new(self.arity, vec![col]).expect("gate arity is within range")
    }

    /// Evaluates the gate on 64 rows at once. `inputs` holds one word per
    /// gate input, first input first.
    #[inline]
    pub fn eval_word(&self, inputs: &[u64]) -> u64 {
        let mut out = 0u64;
        for row in 0..self.rows() {
            if !self.output(row) {
                continue;
            }
            let mut term = u64::MAX;
            for (j, &w) in inputs[..self.arity].iter().enumerate() {
                let bit = (row >> (self.arity - 1 - j)) & 1;
                term &= if bit == 1 { w } else { !w };
            }
            out |= term;
        }
        out
    }
}

impl fmt::Debug for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.name, self.truth_vector())
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// `H(f)` of the gate under uniformly distributed inputs.
pub fn gate_output_entropy(g: &GateKind) -> f64 {
    let rows = g.rows() as f64;
    let ones = g.truth.count_ones() as f64;
    plogp(ones / rows) + plogp((rows - ones) / rows)
}

/// `I_gate = H(X) - H(f)`: the information the gate destroys.
pub fn gate_info_measure(g: &GateKind) -> f64 {
    g.arity as f64 - gate_output_entropy(g)
}

/// `H(f | x_input)` of the gate's function.
pub fn gate_transmission(g: &GateKind, input: usize) -> Result<f64> {
    if input >= g.arity {
        return Err(Error::GateInput {
            gate: g.name.clone(),
            index: input,
            arity: g.arity,
        });
    }
    let half = (g.rows() / 2) as f64;
    let shift = g.arity - 1 - input;
    let mut ones = [0usize; 2];
    for row in 0..g.rows() {
        if g.output(row) {
            ones[(row >> shift) & 1] += 1;
        }
    }
    Ok(ones
        .iter()
        .map(|&k| {
            let p = k as f64 / half;
            0.5 * (plogp(p) + plogp(1.0 - p))
        })
        .sum())
}

/// The cell set available to evolution.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GateLibrary {
    gates: Vec<GateKind>,
    allow_inverted_inputs: bool,
}

impl GateLibrary {
    pub fn new(gates: Vec<GateKind>, allow_inverted_inputs: bool) -> Result<Self> {
        if gates.is_empty() {
            return Err(Error::EmptyLibrary);
        }
        let mut seen = HashSet::new();
        for g in &gates {
            if !seen.insert(g.name.as_str()) {
                return Err(Error::DuplicateGate(g.name.clone()));
            }
        }
        Ok(GateLibrary {
            gates,
            allow_inverted_inputs,
        })
    }

    /// Builds a library of built-in gates from a comma-separated list such as
    /// `"NOT,AND,OR"`. Inverted inputs are allowed.
    pub fn from_names(list: &str) -> Result<Self> {
        let gates = list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(GateKind::standard)
            .collect::<Result<Vec<_>>>()?;
        Self::new(gates, true)
    }

    /// NOT, AND, OR, EXOR.
    pub fn standard() -> Self {
        Self::from_names("NOT,AND,OR,EXOR").unwrap()
    }

    /// Parses a library definition:
    ///
    /// ```text
    /// # comments and blank lines are ignored
    /// inverted_inputs = false    # optional, default true
    /// gates = NOT,AND            # optional, built-in gates
    /// MUX = 00110101             # user gate: NAME = truth vector
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut gates = Vec::new();
        let mut inverted = true;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| Error::parse(line_no, "expected `key = value`"))?;
            match key {
                "inverted_inputs" => {
                    inverted = parse_bool(value)
                        .ok_or_else(|| Error::parse(line_no, format!("expected true/false, got {value:?}")))?;
                }
                "gates" => {
                    for name in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                        gates.push(GateKind::standard(name).map_err(|e| Error::parse(line_no, e.to_string()))?);
                    }
                }
                name => {
                    gates.push(GateKind::new(name, value).map_err(|e| Error::parse(line_no, e.to_string()))?)
                }
            }
        }
        Self::new(gates, inverted)
    }

    /// Inverse of [`GateLibrary::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("inverted_inputs = {}\n", self.allow_inverted_inputs);
        for g in &self.gates {
            out.push_str(&format!("{} = {}\n", g.name, g.truth_vector()));
        }
        out
    }

    pub fn gates(&self) -> &[GateKind] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<&GateKind> {
        self.gates.get(index)
    }

    pub fn find(&self, name: &str) -> Option<&GateKind> {
        self.gates.iter().find(|g| g.name == name)
    }

    pub fn allow_inverted_inputs(&self) -> bool {
        self.allow_inverted_inputs
    }

    pub fn with_inverted_inputs(mut self, allow: bool) -> Self {
        self.allow_inverted_inputs = allow;
        self
    }

    pub fn max_arity(&self) -> usize {
        self.gates.iter().map(|g| g.arity).max().unwrap_or(0)
    }

    /// Whether any gate can combine two or more signals.
    pub fn has_multi_input_gate(&self) -> bool {
        self.max_arity() >= 2
    }

    pub fn names(&self) -> String {
        self.gates
            .iter()
            .map(|g| g.name.as_str())
            .collect::<Vec<_>>()
            .join(",")
    }
}

fn parse_bool(s: &str) -> Option<bool> {
    match s.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Some(true),
        "false" | "no" | "0" | "off" => Some(false),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn standard_vectors() {
        assert_eq!(GateKind::not().truth_vector(), "10");
        assert_eq!(GateKind::and().truth_vector(), "0001");
        assert_eq!(GateKind::or().truth_vector(), "0111");
        assert_eq!(GateKind::exor().truth_vector(), "0110");
        assert_eq!(GateKind::standard("xor").unwrap().name(), "EXOR");
        assert!(GateKind::standard("NAND").is_err());
    }

    #[test]
    fn tabulated_gate_measures() {
        let and = GateKind::and();
        assert!(close(gate_output_entropy(&and), 0.811278, 1e-6));
        assert!(close(gate_info_measure(&and), 1.188722, 1e-6));
        assert!(close(gate_transmission(&and, 0).unwrap(), 0.5, 1e-12));
        assert!(close(gate_transmission(&and, 1).unwrap(), 0.5, 1e-12));

        let exor = GateKind::exor();
        assert_eq!(gate_output_entropy(&exor), 1.0);
        assert_eq!(gate_info_measure(&exor), 1.0);
        assert_eq!(gate_transmission(&exor, 1).unwrap(), 1.0);

        let not = GateKind::not();
        assert_eq!(gate_output_entropy(&not), 1.0);
        assert_eq!(gate_info_measure(&not), 0.0);
        // Determined by its only input.
        assert_eq!(gate_transmission(&not, 0).unwrap(), 0.0);
        assert!(gate_transmission(&not, 1).is_err());
    }

    #[test]
    fn measures_agree_with_truth_table_route() {
        let lib = GateLibrary::parse("gates = NOT,AND,OR,EXOR\nMUX = 00110101\nMAJ = 00010111\n").unwrap();
        for g in lib.gates() {
            let tt = g.truth_table();
            let h = boolfn::entropy(&tt, 0).unwrap();
            assert!(close(gate_output_entropy(g), h, 1e-12), "{g:?}");
            assert!(close(gate_info_measure(g), g.arity() as f64 - h, 1e-12));
            for i in 0..g.arity() {
                let c = boolfn::conditional_entropy_on_var(&tt, 0, i).unwrap();
                assert!(close(gate_transmission(g, i).unwrap(), c, 1e-12), "{g:?} input {i}");
            }
        }
    }

    #[test]
    fn eval_word_matches_truth_vector() {
        let mux = GateKind::new("MUX", "00110101").unwrap();
        let cols: Vec<u64> = (0..3)
            .map(|v| TruthTable::input_column(3, v).words()[0])
            .collect();
        let out = mux.eval_word(&cols) & 0xff;
        for row in 0..8 {
            assert_eq!((out >> row) & 1 == 1, mux.output(row));
        }
    }

    #[test]
    fn library_validation() {
        assert_eq!(GateLibrary::new(vec![], true), Err(Error::EmptyLibrary));
        assert!(matches!(
            GateLibrary::from_names("AND,AND"),
            Err(Error::DuplicateGate(_))
        ));
        assert!(GateKind::new("bad name", "01").is_err());
        assert!(GateKind::new("G", "011").is_err());
        assert!(GateKind::new("G", "0").is_err());
        assert!(GateKind::new("G", "01x0").is_err());
        assert!(GateKind::new("G", &"0".repeat(32)).is_err());
    }

    #[test]
    fn library_file_round_trip() {
        let text = "# demo\ninverted_inputs = no\ngates = NOT, EXOR\nMUX = 00110101\n";
        let lib = GateLibrary::parse(text).unwrap();
        assert!(!lib.allow_inverted_inputs());
        assert_eq!(lib.names(), "NOT,EXOR,MUX");
        assert_eq!(lib.max_arity(), 3);
        assert_eq!(GateLibrary::parse(&lib.to_text()).unwrap(), lib);
        assert!(matches!(
            GateLibrary::parse("AND 0001"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            GateLibrary::parse("gates = NOT\ninverted_inputs = maybe"),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
