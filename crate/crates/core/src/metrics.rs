//! Information-engine measures of a synthesis run.
//!
//! Logical work of a netlist is the sum of `I_gate` over its active gates.
//! Information potential is the least logical work seen among fully
//! functional circuits, so it is an upper bound on the true infimum over all
//! networks. Vitality is potential per bit of output entropy.

use serde::{Deserialize, Serialize};

use crate::boolfn::{self, TruthTable};
use crate::error::{Error, Result};
use crate::evolve::{GenerationRecord, Netlist};
use crate::gatelib::gate_info_measure;

/// `I_NW = H(X) - H(f)`, using the joint output distribution.
pub fn network_information(target: &TruthTable) -> f64 {
    // Clamp rounding noise; the joint entropy cannot exceed n.
    (target.n_inputs() as f64 - boolfn::joint_entropy(target)).max(0.0)
}

pub fn logical_work(nl: &Netlist) -> f64 {
    nl.gates().iter().map(|g| gate_info_measure(&g.kind)).sum()
}

/// Least logical work among functional circuits recorded in `history`.
pub fn information_potential(history: &[GenerationRecord]) -> Option<f64> {
    history
        .iter()
        .filter_map(|r| r.min_functional_work)
        .reduce(f64::min)
}

/// Running information potential after each generation.
pub fn running_potential(history: &[GenerationRecord]) -> Vec<Option<f64>> {
    let mut best: Option<f64> = None;
    history
        .iter()
        .map(|r| {
            if let Some(w) = r.min_functional_work {
                best = Some(best.map_or(w, |b| b.min(w)));
            }
            best
        })
        .collect()
}

/// `T = Q / H(f)` with the joint output entropy of `target`.
pub fn vitality(potential: f64, target: &TruthTable) -> Result<f64> {
    let h = boolfn::joint_entropy(target);
    if h <= 0.0 {
        return Err(Error::ZeroEntropy);
    }
    Ok(potential / h)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkMetrics {
    pub network_information: f64,
    pub logical_work: f64,
    pub information_potential: Option<f64>,
    pub vitality: Option<f64>,
}

impl NetworkMetrics {
    pub fn compute(target: &TruthTable, netlist: &Netlist, history: &[GenerationRecord]) -> Self {
        let potential = information_potential(history);
        NetworkMetrics {
            network_information: network_information(target),
            logical_work: logical_work(netlist),
            information_potential: potential,
            vitality: potential.and_then(|q| vitality(q, target).ok()),
        }
    }
}

/// One point of the entropy/vitality trace.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub generation: u64,
    pub evaluations: u64,
    pub functionality: f64,
    pub active_gates: usize,
    pub h_best: f64,
    pub q_running: Option<f64>,
    pub t_running: Option<f64>,
}

pub fn ht_trace(history: &[GenerationRecord], target: &TruthTable) -> Vec<TracePoint> {
    history
        .iter()
        .zip(running_potential(history))
        .map(|(r, q)| TracePoint {
            generation: r.generation,
            evaluations: r.evaluations,
            functionality: r.functionality,
            active_gates: r.active_gates,
            h_best: r.best_entropy,
            q_running: q,
            t_running: q.and_then(|q| vitality(q, target).ok()),
        })
        .collect()
}
