//! Gate-level circuit evolution on a rectangular cell array.
//!
//! The default search is a (1+λ) strategy with neutral drift: each generation
//! the parent spawns λ mutants and is replaced by the best of them whenever
//! that mutant is at least as fit. Fitness ranks correct output bits first and,
//! once the circuit is fully functional, fewer active gates.

mod genotype;
mod netlist;

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::boolfn::{self, BitColumn, TruthTable};
use crate::error::{Error, Result};
use crate::gatelib::{gate_info_measure, GateLibrary, MAX_ARITY};
use crate::geometry::Geometry;

pub use genotype::{gene_count, random_genotype, CellGenes, Connection, Genotype, Source};
pub use netlist::{decode, fitness, fitness_info, simulate, verify, Fitness, NetGate, NetSource, Netlist, NodeRef};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvolutionParams {
    pub seed: u64,
    /// Offspring per generation.
    pub lambda: usize,
    /// Per-gene resampling probability.
    pub mutation_rate: f64,
    /// Evaluation budget, including the initial individual.
    pub max_evaluations: u64,
    /// Evaluations without a gate-count improvement after which a fully
    /// functional run stops.
    pub stagnation_window: u64,
    /// Accept offspring that tie with the parent.
    pub neutral_drift: bool,
    /// Cross each offspring with a sibling from the previous generation
    /// before mutating it (half the time).
    pub crossover: bool,
    /// Allow the level count to change during the run.
    pub resize: bool,
    /// Probability that an offspring is resized, when `resize` is on.
    pub resize_rate: f64,
    /// Upper bound on levels when resizing; defaults to twice the initial count.
    pub max_levels: Option<usize>,
}

impl Default for EvolutionParams {
    fn default() -> Self {
        EvolutionParams {
            seed: 0,
            lambda: 4,
            mutation_rate: 0.05,
            max_evaluations: 100_000,
            stagnation_window: 10_000,
            neutral_drift: true,
            crossover: false,
            resize: false,
            resize_rate: 0.02,
            max_levels: None,
        }
    }
}

impl EvolutionParams {
    pub fn with_seed(seed: u64) -> Self {
        EvolutionParams {
            seed,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.into()));
        if self.lambda == 0 {
            return bad("lambda must be at least 1");
        }
        if !(self.mutation_rate > 0.0 && self.mutation_rate <= 1.0) {
            return bad("mutation rate must lie in (0, 1]");
        }
        if self.stagnation_window == 0 {
            return bad("stagnation window must be positive");
        }
        if !(0.0..=1.0).contains(&self.resize_rate) {
            return bad("resize rate must lie in [0, 1]");
        }
        if self.max_levels == Some(0) {
            return bad("max levels must be positive");
        }
        Ok(())
    }
}

/// State of the search after one generation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerationRecord {
    pub generation: u64,
    /// Evaluations spent so far.
    pub evaluations: u64,
    pub functionality: f64,
    pub active_gates: usize,
    pub levels: usize,
    /// Joint output entropy of the current best circuit.
    pub best_entropy: f64,
    /// Least logical work among fully functional circuits evaluated in this
    /// generation.
    pub min_functional_work: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct EvolutionResult {
    pub best: Genotype,
    pub netlist: Netlist,
    pub fitness: Fitness,
    pub history: Vec<GenerationRecord>,
    pub evaluations: u64,
    /// Row-by-row re-check against the target; `None` when the best circuit
    /// is not fully functional.
    pub verified: Option<bool>,
}

impl EvolutionResult {
    /// Evaluations spent when full functionality was first reached.
    pub fn first_functional_evaluation(&self) -> Option<u64> {
        self.history
            .iter()
            .find(|r| r.functionality == 1.0)
            .map(|r| r.evaluations)
    }
}

/// Word-parallel evaluator reused across a run.
struct Evaluator {
    target: TruthTable,
    inputs: Vec<BitColumn>,
    words: usize,
    tail_mask: u64,
    values: Vec<u64>,
    active: Vec<bool>,
    stack: Vec<usize>,
    gate_work: Vec<f64>,
}

struct Evaluation {
    fitness: Fitness,
    /// Sum of active gate measures.
    work: f64,
}

impl Evaluator {
    fn new(target: &TruthTable, library: &GateLibrary) -> Self {
        let n = target.n_inputs();
        let rows = target.n_rows();
        let rem = rows % 64;
        Evaluator {
            target: target.clone(),
            inputs: (0..n).map(|v| TruthTable::input_column(n, v)).collect(),
            words: rows.div_ceil(64),
            tail_mask: if rem == 0 { u64::MAX } else { (1u64 << rem) - 1 },
            values: Vec::new(),
            active: Vec::new(),
            stack: Vec::new(),
            gate_work: library.gates().iter().map(gate_info_measure).collect(),
        }
    }

    fn mark_active(&mut self, g: &Genotype) {
        let cells = g.cells();
        let lib = g.library();
        self.active.clear();
        self.active.resize(cells.len(), false);
        self.stack.clear();
        for s in g.outputs() {
            if let Source::Cell(c) = s {
                self.stack.push(g.cell_index(*c));
            }
        }
        while let Some(i) = self.stack.pop() {
            if self.active[i] {
                continue;
            }
            self.active[i] = true;
            let arity = lib.gates()[cells[i].gate].arity();
            for conn in &cells[i].inputs[..arity] {
                if let Source::Cell(c) = conn.source {
                    self.stack.push(g.cell_index(c));
                }
            }
        }
    }

    fn source_word(&self, g: &Genotype, src: Source, w: usize) -> u64 {
        match src {
            Source::Input(i) => self.inputs[i].words()[w],
            Source::Cell(c) => self.values[g.cell_index(c) * self.words + w],
        }
    }

    /// Runs the circuit, leaving each active cell's column in `values`.
    fn run(&mut self, g: &Genotype) -> (usize, f64) {
        self.mark_active(g);
        let cells = g.cells();
        let lib = g.library();
        self.values.resize(cells.len() * self.words, 0);
        let mut operands = [0u64; MAX_ARITY];
        let mut gates = 0;
        let mut work = 0.0;
        #[allow(clippy::needless_range_loop)]
        for i in 0..cells.len() {
            if !self.active[i] {
                continue;
            }
            gates += 1;
            let genes = &cells[i];
            let kind = &lib.gates()[genes.gate];
            work += self.gate_work[genes.gate];
            for w in 0..self.words {
                for (k, conn) in genes.inputs[..kind.arity()].iter().enumerate() {
                    let v = self.source_word(g, conn.source, w);
                    operands[k] = if conn.inverted { !v } else { v };
                }
                self.values[i * self.words + w] = kind.eval_word(&operands[..kind.arity()]);
            }
        }
        (gates, work)
    }

    fn evaluate(&mut self, g: &Genotype) -> Evaluation {
        let (gates, work) = self.run(g);
        let mut wrong = 0u64;
        for (j, &src) in g.outputs().iter().enumerate() {
            let target = self.target.columns()[j].words();
            for (w, &t) in target.iter().enumerate() {
                let mask = if w + 1 == self.words { self.tail_mask } else { u64::MAX };
                wrong += ((self.source_word(g, src, w) ^ t) & mask).count_ones() as u64;
            }
        }
        let total = (self.target.n_rows() * self.target.n_outputs()) as u64;
        Evaluation {
            fitness: Fitness {
                correct_bits: total - wrong,
                total_bits: total,
                active_gates: gates,
            },
            work,
        }
    }

    /// Joint entropy of the circuit's outputs.
    fn output_entropy(&mut self, g: &Genotype) -> f64 {
        self.run(g);
        let rows = self.target.n_rows();
        let columns = g
            .outputs()
            .iter()
            .map(|&src| {
                let words = (0..self.words).map(|w| self.source_word(g, src, w)).collect();
                BitColumn::from_words(words, rows)
            })
            .collect();
        let tt = TruthTable::new(self.target.n_inputs(), columns).expect("shape matches target");
        boolfn::joint_entropy(&tt)
    }
}

/// Evolves a circuit for `target` on `geometry` over `library`.
pub fn evolve(
    target: &TruthTable,
    geometry: Geometry,
    library: Arc<GateLibrary>,
    params: &EvolutionParams,
) -> Result<EvolutionResult> {
    params.validate()?;
    if target.n_inputs() != geometry.n_inputs() || target.n_outputs() != geometry.n_outputs() {
        return Err(Error::ShapeMismatch {
            target_inputs: target.n_inputs(),
            target_outputs: target.n_outputs(),
            geom_inputs: geometry.n_inputs(),
            geom_outputs: geometry.n_outputs(),
        });
    }
    let max_levels = params.max_levels.unwrap_or(2 * geometry.levels()).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut eval = Evaluator::new(target, &library);

    let mut parent = Genotype::random(geometry, library, &mut rng);
    let first = eval.evaluate(&parent);
    let mut parent_fit = first.fitness;
    let mut evaluations = 1u64;
    let mut parent_entropy = eval.output_entropy(&parent);
    // Evaluation count at the last functional gate-count improvement.
    let mut last_improvement = parent_fit.is_functional().then_some(evaluations);

    let mut history = vec![GenerationRecord {
        generation: 0,
        evaluations,
        functionality: parent_fit.functionality(),
        active_gates: parent_fit.active_gates,
        levels: parent.geometry().levels(),
        best_entropy: parent_entropy,
        min_functional_work: parent_fit.is_functional().then_some(first.work),
    }];

    let mut siblings: Vec<Genotype> = Vec::new();
    let mut generation = 0u64;
    while evaluations < params.max_evaluations {
        if let Some(at) = last_improvement {
            if evaluations - at >= params.stagnation_window {
                break;
            }
        }
        generation += 1;
        let mut offspring = Vec::with_capacity(params.lambda);
        let mut best: Option<(usize, Fitness)> = None;
        let mut min_work: Option<f64> = None;
        for i in 0..params.lambda {
            if evaluations >= params.max_evaluations {
                break;
            }
            let mut child = parent.clone();
            if params.crossover && rng.gen_bool(0.5) {
                if let Some(other) = siblings.get(i) {
                    if let Ok(c) = parent.crossover(other, &mut rng) {
                        child = c;
                    }
                }
            }
            if params.resize && rng.gen_bool(params.resize_rate) {
                child = child.resize(max_levels, &mut rng);
            }
            let child = child.mutate(params.mutation_rate, &mut rng);
            let e = eval.evaluate(&child);
            evaluations += 1;
            if e.fitness.is_functional() {
                min_work = Some(min_work.map_or(e.work, |m: f64| m.min(e.work)));
            }
            if best.is_none_or(|(_, b)| e.fitness.compare(&b).is_gt()) {
                best = Some((offspring.len(), e.fitness));
            }
            offspring.push(child);
        }
        if let Some((idx, fit)) = best {
            let order = fit.compare(&parent_fit);
            if order.is_gt() || (params.neutral_drift && order.is_eq()) {
                let improved = fit.is_functional()
                    && (!parent_fit.is_functional() || fit.active_gates < parent_fit.active_gates);
                if improved {
                    last_improvement = Some(evaluations);
                }
                parent = offspring[idx].clone();
                parent_fit = fit;
                parent_entropy = eval.output_entropy(&parent);
            }
        }
        history.push(GenerationRecord {
            generation,
            evaluations,
            functionality: parent_fit.functionality(),
            active_gates: parent_fit.active_gates,
            levels: parent.geometry().levels(),
            best_entropy: parent_entropy,
            min_functional_work: min_work,
        });
        siblings = offspring;
    }

    let netlist = decode(&parent);
    let verified = parent_fit.is_functional().then(|| verify(&netlist, target));
    Ok(EvolutionResult {
        best: parent,
        netlist,
        fitness: parent_fit,
        history,
        evaluations,
        verified,
    })
}
