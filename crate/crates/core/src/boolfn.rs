//! Complete multi-output Boolean functions and their Shannon measures.
//!
//! Row `i` of a [`TruthTable`] is the input assignment whose bits, read from
//! the most significant end, are `x1 x2 .. xn`. Row 0 is the all-zero
//! assignment and flipping bit `n - k` of the index flips `x_k`. All
//! probabilities are taken over the uniform distribution of the `2^n` rows.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Largest input count representable exhaustively.
pub const MAX_INPUTS: usize = 20;

/// Fixed-length bit vector stored in 64-bit words. Bits past `len` are zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitColumn {
    words: Vec<u64>,
    len: usize,
}

impl BitColumn {
    pub fn zeros(len: usize) -> Self {
        BitColumn {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut words = Vec::new();
        let mut len = 0;
        for bit in bits {
            if len % 64 == 0 {
                words.push(0);
            }
            if bit {
                words[len / 64] |= 1 << (len % 64);
            }
            len += 1;
        }
        BitColumn { words, len }
    }

    /// Builds a column from raw words, clearing anything past `len`.
    pub fn from_words(mut words: Vec<u64>, len: usize) -> Self {
        words.resize(len.div_ceil(64), 0);
        let mut col = BitColumn { words, len };
        col.mask_tail();
        col
    }

    /// Parses a string of `0`/`1` characters.
    pub fn parse(bits: &str) -> Option<Self> {
        let mut out = Vec::with_capacity(bits.len());
        for c in bits.chars() {
            match c {
                '0' => out.push(false),
                '1' => out.push(true),
                _ => return None,
            }
        }
        Some(Self::from_bits(out))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range");
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range");
        if value {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of positions set in both columns.
    pub fn count_ones_and(&self, other: &BitColumn) -> usize {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Number of positions where the two columns differ.
    pub fn hamming_distance(&self, other: &BitColumn) -> usize {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    pub fn xor(&self, other: &BitColumn) -> BitColumn {
        debug_assert_eq!(self.len, other.len);
        BitColumn {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a ^ b).collect(),
            len: self.len,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    fn mask_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Display for BitColumn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for bit in self.iter() {
            f.write_str(if bit { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitColumn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

/// A completely specified function `{0,1}^n -> {0,1}^m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruthTable {
    n_inputs: usize,
    columns: Vec<BitColumn>,
}

impl TruthTable {
    pub fn new(n_inputs: usize, columns: Vec<BitColumn>) -> Result<Self> {
        check_input_count(n_inputs)?;
        if columns.is_empty() {
            return Err(Error::NoOutputs);
        }
        let rows = 1usize << n_inputs;
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::ColumnLength {
                    column: j,
                    got: col.len(),
                    expected: rows,
                });
            }
        }
        Ok(TruthTable { n_inputs, columns })
    }

    /// Builds a table from truth-vector strings such as `"10001111"`.
    pub fn from_vectors(n_inputs: usize, vectors: &[&str]) -> Result<Self> {
        let columns = vectors
            .iter()
            .enumerate()
            .map(|(j, v)| {
                BitColumn::parse(v).ok_or_else(|| Error::parse(j + 1, format!("non-binary truth vector {v:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n_inputs, columns)
    }

    /// Tabulates `f`, which receives the assignment `[x1, .., xn]`.
    pub fn from_fn<F>(n_inputs: usize, n_outputs: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(&[bool]) -> Vec<bool>,
    {
        check_input_count(n_inputs)?;
        if n_outputs == 0 {
            return Err(Error::NoOutputs);
        }
        let rows = 1usize << n_inputs;
        let mut columns = vec![BitColumn::zeros(rows); n_outputs];
        let mut assignment = vec![false; n_inputs];
        for row in 0..rows {
            for (v, slot) in assignment.iter_mut().enumerate() {
                *slot = input_bit(n_inputs, row, v);
            }
            let out = f(&assignment);
            assert_eq!(out.len(), n_outputs, "function returned wrong output count");
            for (col, bit) in columns.iter_mut().zip(out) {
                col.set(row, bit);
            }
        }
        Ok(TruthTable { n_inputs, columns })
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    pub fn n_outputs(&self) -> usize {
        self.columns.len()
    }

    pub fn n_rows(&self) -> usize {
        1 << self.n_inputs
    }

    pub fn columns(&self) -> &[BitColumn] {
        &self.columns
    }

    pub fn column(&self, out: usize) -> Result<&BitColumn> {
        self.columns.get(out).ok_or(Error::OutputIndex {
            index: out,
            count: self.columns.len(),
        })
    }

    /// Value of variable `var` (0-based, so `x1` is 0) in `row`.
    pub fn input_value(&self, row: usize, var: usize) -> bool {
        input_bit(self.n_inputs, row, var)
    }

    /// Column of the projection onto `var` over `n_inputs` variables.
    pub fn input_column(n_inputs: usize, var: usize) -> BitColumn {
        assert!(var < n_inputs);
        let rows = 1usize << n_inputs;
        let shift = n_inputs - 1 - var;
        if shift < 6 {
            // Pattern repeats inside every word.
            let mut pattern = 0u64;
            for b in 0..64.min(rows) {
                if (b >> shift) & 1 == 1 {
                    pattern |= 1 << b;
                }
            }
            BitColumn::from_words(vec![pattern; rows.div_ceil(64)], rows)
        } else {
            let words = (0..rows / 64)
                .map(|w| if ((w * 64) >> shift) & 1 == 1 { u64::MAX } else { 0 })
                .collect();
            BitColumn::from_words(words, rows)
        }
    }
}

#[inline]
fn input_bit(n_inputs: usize, row: usize, var: usize) -> bool {
    (row >> (n_inputs - 1 - var)) & 1 == 1
}

fn check_input_count(n: usize) -> Result<()> {
    if n == 0 || n > MAX_INPUTS {
        Err(Error::InputCount {
            got: n,
            max: MAX_INPUTS,
        })
    } else {
        Ok(())
    }
}

/// A finite probability distribution over labelled outcomes.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution<L> {
    outcomes: Vec<(L, f64)>,
}

impl<L> Distribution<L> {
    pub fn new(outcomes: Vec<(L, f64)>) -> Result<Self> {
        let sum: f64 = outcomes.iter().map(|(_, p)| p).sum();
        let in_range = outcomes.iter().all(|(_, p)| (0.0..=1.0).contains(p));
        if !in_range || (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidDistribution { sum });
        }
        Ok(Distribution { outcomes })
    }

    /// Normalises occurrence counts into probabilities.
    pub fn from_counts(counts: Vec<(L, usize)>) -> Result<Self> {
        let total: usize = counts.iter().map(|(_, c)| c).sum();
        if total == 0 {
            return Err(Error::InvalidDistribution { sum: 0.0 });
        }
        Self::new(
            counts
                .into_iter()
                .map(|(l, c)| (l, c as f64 / total as f64))
                .collect(),
        )
    }

    pub fn outcomes(&self) -> &[(L, f64)] {
        &self.outcomes
    }

    /// Shannon entropy in bits.
    pub fn entropy(&self) -> f64 {
        self.outcomes.iter().map(|&(_, p)| plogp(p)).sum()
    }
}

/// `-p log2 p` with the convention `0 log 0 = 0`.
#[inline]
pub fn plogp(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        -p * p.log2()
    }
}

/// Entropy of a Bernoulli(`p`) variable.
#[inline]
pub fn binary_entropy(p: f64) -> f64 {
    plogp(p) + plogp(1.0 - p)
}

/// Entropy of a binary column with `ones` set bits among `len`.
#[inline]
fn count_entropy(ones: usize, len: usize) -> f64 {
    if ones == 0 || ones == len {
        0.0
    } else {
        binary_entropy(ones as f64 / len as f64)
    }
}

/// `p(f_out = b)`: fraction of rows on which output `out` equals `b`.
pub fn output_probability(tt: &TruthTable, out: usize, b: bool) -> Result<f64> {
    let col = tt.column(out)?;
    let ones = col.count_ones();
    let k = if b { ones } else { col.len() - ones };
    Ok(k as f64 / col.len() as f64)
}

pub fn output_distribution(tt: &TruthTable, out: usize) -> Result<Distribution<bool>> {
    let col = tt.column(out)?;
    let ones = col.count_ones();
    Distribution::from_counts(vec![(false, col.len() - ones), (true, ones)])
}

/// `H(f)` of a single output, in bits.
pub fn entropy(tt: &TruthTable, out: usize) -> Result<f64> {
    let col = tt.column(out)?;
    Ok(count_entropy(col.count_ones(), col.len()))
}

/// Entropy of the joint `m`-bit output tuple.
pub fn joint_entropy(tt: &TruthTable) -> f64 {
    if tt.n_outputs() == 1 {
        return count_entropy(tt.columns[0].count_ones(), tt.n_rows());
    }
    let mut counts: HashMap<Vec<u64>, usize> = HashMap::new();
    let key_words = tt.n_outputs().div_ceil(64);
    for row in 0..tt.n_rows() {
        let mut key = vec![0u64; key_words];
        for (j, col) in tt.columns.iter().enumerate() {
            if col.get(row) {
                key[j / 64] |= 1 << (j % 64);
            }
        }
        *counts.entry(key).or_default() += 1;
    }
    let total = tt.n_rows() as f64;
    counts.values().map(|&c| plogp(c as f64 / total)).sum()
}

/// `H(X)` of `n` uniformly distributed inputs.
pub fn input_entropy(n_inputs: usize) -> Result<f64> {
    if n_inputs == 0 {
        return Err(Error::InputCount {
            got: 0,
            max: MAX_INPUTS,
        });
    }
    Ok(n_inputs as f64)
}

/// `H(f | x_var)`, the information about output `out` left after observing one
/// input.
pub fn conditional_entropy_on_var(tt: &TruthTable, out: usize, var: usize) -> Result<f64> {
    let col = tt.column(out)?;
    if var >= tt.n_inputs() {
        return Err(Error::VariableIndex {
            index: var,
            count: tt.n_inputs(),
        });
    }
    let half = tt.n_rows() / 2;
    let ones = col.count_ones();
    let ones_hi = col.count_ones_and(&TruthTable::input_column(tt.n_inputs(), var));
    let ones_lo = ones - ones_hi;
    Ok(0.5 * count_entropy(ones_lo, half) + 0.5 * count_entropy(ones_hi, half))
}

/// `H(f | x_S)` for an arbitrary set `S` of variables. Duplicates in `given`
/// are ignored.
pub fn conditional_entropy_general(tt: &TruthTable, out: usize, given: &[usize]) -> Result<f64> {
    let col = tt.column(out)?;
    let n = tt.n_inputs();
    let mut vars = given.to_vec();
    vars.sort_unstable();
    vars.dedup();
    if let Some(&bad) = vars.iter().find(|&&v| v >= n) {
        return Err(Error::VariableIndex { index: bad, count: n });
    }
    let cells = 1usize << vars.len();
    let mut ones = vec![0usize; cells];
    for row in 0..tt.n_rows() {
        if col.get(row) {
            ones[cofactor_index(n, row, &vars)] += 1;
        }
    }
    let cofactor_rows = tt.n_rows() / cells;
    let weight = 1.0 / cells as f64;
    Ok(ones
        .iter()
        .map(|&k| weight * count_entropy(k, cofactor_rows))
        .sum())
}

fn cofactor_index(n: usize, row: usize, vars: &[usize]) -> usize {
    vars.iter()
        .fold(0, |acc, &v| (acc << 1) | ((row >> (n - 1 - v)) & 1))
}
