use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::boolfn::{self, BitColumn, TruthTable};
use crate::error::{Error, Result};
use crate::gatelib::GateKind;
use crate::geometry::Cell;

use super::genotype::{Genotype, Source};

/// A signal inside a netlist.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NodeRef {
    Input(usize),
    Gate(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct NetSource {
    pub node: NodeRef,
    pub inverted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NetGate {
    pub kind: GateKind,
    pub sources: Vec<NetSource>,
    /// Array cell the gate was decoded from, if any.
    pub cell: Option<Cell>,
}

/// A feed-forward gate network. Gates only read inputs or earlier gates, and
/// every gate feeds some output.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Netlist {
    n_inputs: usize,
    gates: Vec<NetGate>,
    outputs: Vec<NodeRef>,
}

impl Netlist {
    pub fn new(n_inputs: usize, gates: Vec<NetGate>, outputs: Vec<NodeRef>) -> Result<Self> {
        if n_inputs == 0 || n_inputs > boolfn::MAX_INPUTS {
            return Err(Error::InputCount {
                got: n_inputs,
                max: boolfn::MAX_INPUTS,
            });
        }
        if outputs.is_empty() {
            return Err(Error::NoOutputs);
        }
        let check = |node: NodeRef, limit: usize, what: &str| match node {
            NodeRef::Input(i) if i >= n_inputs => Err(Error::Netlist(format!("{what} reads input {i} of {n_inputs}"))),
            NodeRef::Gate(g) if g >= limit => Err(Error::Netlist(format!("{what} reads gate {g} which is not earlier"))),
            _ => Ok(()),
        };
        for (i, gate) in gates.iter().enumerate() {
            if gate.sources.len() != gate.kind.arity() {
                return Err(Error::Netlist(format!(
                    "gate {i} ({}) has {} sources, expected {}",
                    gate.kind,
                    gate.sources.len(),
                    gate.kind.arity()
                )));
            }
            for s in &gate.sources {
                check(s.node, i, &format!("gate {i}"))?;
            }
        }
        for (j, &o) in outputs.iter().enumerate() {
            check(o, gates.len(), &format!("output {j}"))?;
        }
        let nl = Netlist {
            n_inputs,
            gates,
            outputs,
        };
        let live = nl.live_gates();
        if let Some(dead) = live.iter().position(|&l| !l) {
            return Err(Error::Netlist(format!("gate {dead} does not feed any output")));
        }
        Ok(nl)
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    pub fn n_outputs(&self) -> usize {
        self.outputs.len()
    }

    pub fn gates(&self) -> &[NetGate] {
        &self.gates
    }

    pub fn outputs(&self) -> &[NodeRef] {
        &self.outputs
    }

    pub fn active_gate_count(&self) -> usize {
        self.gates.len()
    }

    /// Array cells occupied by the gates.
    pub fn used_cells(&self) -> Vec<Cell> {
        self.gates.iter().filter_map(|g| g.cell).collect()
    }

    fn live_gates(&self) -> Vec<bool> {
        let mut live = vec![false; self.gates.len()];
        for o in &self.outputs {
            if let NodeRef::Gate(g) = *o {
                live[g] = true;
            }
        }
        for i in (0..self.gates.len()).rev() {
            if live[i] {
                for s in &self.gates[i].sources {
                    if let NodeRef::Gate(g) = s.node {
                        live[g] = true;
                    }
                }
            }
        }
        live
    }

    /// Full truth table of the network, 64 rows per step.
    pub fn simulate(&self) -> TruthTable {
        let rows = 1usize << self.n_inputs;
        let inputs: Vec<BitColumn> = (0..self.n_inputs)
            .map(|v| TruthTable::input_column(self.n_inputs, v))
            .collect();
        let words = rows.div_ceil(64);
        let mut values: Vec<Vec<u64>> = Vec::with_capacity(self.gates.len());
        let mut operands = [0u64; crate::gatelib::MAX_ARITY];
        for gate in &self.gates {
            let mut out = vec![0u64; words];
            for (w, slot) in out.iter_mut().enumerate() {
                for (k, s) in gate.sources.iter().enumerate() {
                    let v = match s.node {
                        NodeRef::Input(i) => inputs[i].words()[w],
                        NodeRef::Gate(g) => values[g][w],
                    };
                    operands[k] = if s.inverted { !v } else { v };
                }
                *slot = gate.kind.eval_word(&operands[..gate.sources.len()]);
            }
            values.push(out);
        }
        let columns = self
            .outputs
            .iter()
            .map(|&o| match o {
                NodeRef::Input(i) => inputs[i].clone(),
                NodeRef::Gate(g) => BitColumn::from_words(values[g].clone(), rows),
            })
            .collect();
        TruthTable::new(self.n_inputs, columns).expect("netlist shape is valid")
    }

    /// Evaluates one assignment `[x1, .., xn]` gate by gate.
    pub fn eval_row(&self, assignment: &[bool]) -> Vec<bool> {
        assert_eq!(assignment.len(), self.n_inputs);
        let mut values = Vec::with_capacity(self.gates.len());
        for gate in &self.gates {
            let row = gate.sources.iter().fold(0usize, |acc, s| {
                let v = match s.node {
                    NodeRef::Input(i) => assignment[i],
                    NodeRef::Gate(g) => values[g],
                };
                (acc << 1) | usize::from(v ^ s.inverted)
            });
            values.push(gate.kind.output(row));
        }
        self.outputs
            .iter()
            .map(|&o| match o {
                NodeRef::Input(i) => assignment[i],
                NodeRef::Gate(g) => values[g],
            })
            .collect()
    }
}

/// Extracts the gates reachable from the output genes, in level order.
pub fn decode(g: &Genotype) -> Netlist {
    let lib = g.library();
    let cells = g.cells();
    let mut active = vec![false; cells.len()];
    let mut stack: Vec<usize> = g
        .outputs()
        .iter()
        .filter_map(|s| match s {
            Source::Cell(c) => Some(g.cell_index(*c)),
            Source::Input(_) => None,
        })
        .collect();
    while let Some(i) = stack.pop() {
        if active[i] {
            continue;
        }
        active[i] = true;
        let arity = lib.gates()[cells[i].gate].arity();
        for conn in &cells[i].inputs[..arity] {
            if let Source::Cell(c) = conn.source {
                stack.push(g.cell_index(c));
            }
        }
    }

    let mut gate_of = vec![usize::MAX; cells.len()];
    let mut gates = Vec::new();
    let to_node = |src: Source, gate_of: &[usize]| match src {
        Source::Input(i) => NodeRef::Input(i),
        Source::Cell(c) => NodeRef::Gate(gate_of[g.cell_index(c)]),
    };
    for (i, genes) in cells.iter().enumerate() {
        if !active[i] {
            continue;
        }
        let kind = lib.gates()[genes.gate].clone();
        let sources = genes.inputs[..kind.arity()]
            .iter()
            .map(|conn| NetSource {
                node: to_node(conn.source, &gate_of),
                inverted: conn.inverted,
            })
            .collect();
        gate_of[i] = gates.len();
        gates.push(NetGate {
            kind,
            sources,
            cell: Some(g.cell_at(i)),
        });
    }
    let outputs = g.outputs().iter().map(|&s| to_node(s, &gate_of)).collect();
    Netlist {
        n_inputs: g.geometry().n_inputs(),
        gates,
        outputs,
    }
}

/// Truth table of `nl`, checking it has `n_inputs` inputs.
pub fn simulate(nl: &Netlist, n_inputs: usize) -> Result<TruthTable> {
    if nl.n_inputs() != n_inputs {
        return Err(Error::Netlist(format!(
            "netlist has {} inputs, asked to simulate {n_inputs}",
            nl.n_inputs()
        )));
    }
    Ok(nl.simulate())
}

/// Row-by-row check that `nl` computes `target` exactly.
pub fn verify(nl: &Netlist, target: &TruthTable) -> bool {
    if nl.n_inputs() != target.n_inputs() || nl.n_outputs() != target.n_outputs() {
        return false;
    }
    let mut assignment = vec![false; nl.n_inputs()];
    (0..target.n_rows()).all(|row| {
        for (v, slot) in assignment.iter_mut().enumerate() {
            *slot = target.input_value(row, v);
        }
        nl.eval_row(&assignment)
            .iter()
            .zip(target.columns())
            .all(|(&bit, col)| col.get(row) == bit)
    })
}

/// Two-stage fitness: correct output bits first, then fewer gates once every
/// bit is correct.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fitness {
    pub correct_bits: u64,
    pub total_bits: u64,
    pub active_gates: usize,
}

impl Fitness {
    pub fn functionality(&self) -> f64 {
        self.correct_bits as f64 / self.total_bits as f64
    }

    pub fn is_functional(&self) -> bool {
        self.correct_bits == self.total_bits
    }

    /// `Greater` means `self` is the better circuit.
    pub fn compare(&self, other: &Fitness) -> Ordering {
        self.correct_bits.cmp(&other.correct_bits).then_with(|| {
            if self.is_functional() && other.is_functional() {
                other.active_gates.cmp(&self.active_gates)
            } else {
                Ordering::Equal
            }
        })
    }
}

fn check_shape(nl: &Netlist, target: &TruthTable) -> Result<()> {
    if nl.n_inputs() != target.n_inputs() || nl.n_outputs() != target.n_outputs() {
        return Err(Error::ShapeMismatch {
            target_inputs: target.n_inputs(),
            target_outputs: target.n_outputs(),
            geom_inputs: nl.n_inputs(),
            geom_outputs: nl.n_outputs(),
        });
    }
    Ok(())
}

pub fn fitness(nl: &Netlist, target: &TruthTable) -> Result<Fitness> {
    check_shape(nl, target)?;
    let evolved = nl.simulate();
    let total = (target.n_rows() * target.n_outputs()) as u64;
    let wrong: usize = evolved
        .columns()
        .iter()
        .zip(target.columns())
        .map(|(a, b)| a.hamming_distance(b))
        .sum();
    Ok(Fitness {
        correct_bits: total - wrong as u64,
        total_bits: total,
        active_gates: nl.active_gate_count(),
    })
}

/// Sum over outputs of the entropy of the error column `target XOR evolved`.
/// Zero for an exact match, and also for an exact complement.
pub fn fitness_info(nl: &Netlist, target: &TruthTable) -> Result<f64> {
    check_shape(nl, target)?;
    let evolved = nl.simulate();
    let errors = evolved
        .columns()
        .iter()
        .zip(target.columns())
        .map(|(a, b)| a.xor(b))
        .collect();
    let err_tt = TruthTable::new(target.n_inputs(), errors)?;
    (0..err_tt.n_outputs())
        .map(|j| boolfn::entropy(&err_tt, j))
        .sum()
}
