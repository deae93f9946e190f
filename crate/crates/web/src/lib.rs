//! wasm-bindgen entry points for the browser demo in `www/`.
//!
//! Each export takes plain strings/numbers and returns a JSON string; errors
//! are thrown as JS strings. The `*_json` functions hold the logic so they can
//! be tested natively.

use std::sync::Arc;

use infosynth::boolfn;
use infosynth::geometry::{self, CapacityMode, Geometry, Precision};
use infosynth::metrics::{self, NetworkMetrics};
use infosynth::{io, EvolutionParams, GateLibrary};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

const MAX_SWEEP: usize = 16;
const MAX_EVALUATIONS: u64 = 2_000_000;

fn err(e: impl ToString) -> String {
    e.to_string()
}

/// Entropy of every output and its conditional entropy on each input.
pub fn measure_json(function_text: &str) -> Result<String, String> {
    let tt = io::parse_function(function_text).map_err(err)?;
    let mut outputs = Vec::new();
    for j in 0..tt.n_outputs() {
        let cond = (0..tt.n_inputs())
            .map(|v| boolfn::conditional_entropy_on_var(&tt, j, v))
            .collect::<Result<Vec<_>, _>>()
            .map_err(err)?;
        outputs.push(json!({
            "entropy": boolfn::entropy(&tt, j).map_err(err)?,
            "conditional": cond,
        }));
    }
    let v = json!({
        "inputs": tt.n_inputs(),
        "outputs": outputs,
        "joint_entropy": boolfn::joint_entropy(&tt),
        "input_entropy": boolfn::input_entropy(tt.n_inputs()).map_err(err)?,
        "network_information": metrics::network_information(&tt),
    });
    Ok(v.to_string())
}

/// Capacity of every `p x q` array with `1 <= p <= max_levels` and
/// `1 <= q <= max_gates`.
pub fn capacity_sweep_json(
    library: &str,
    max_levels: usize,
    max_gates: usize,
    mode: &str,
    exact: bool,
) -> Result<String, String> {
    if !(1..=MAX_SWEEP).contains(&max_levels) || !(1..=MAX_SWEEP).contains(&max_gates) {
        return Err(format!("sweep dimensions must be in 1..={MAX_SWEEP}"));
    }
    let lib = GateLibrary::from_names(library).map_err(err)?;
    let mode: CapacityMode = mode.parse().map_err(err)?;
    let precision = if exact { Precision::Exact } else { Precision::Tabulated };
    let mut grid = Vec::with_capacity(max_levels);
    for p in 1..=max_levels {
        let mut row = Vec::with_capacity(max_gates);
        for q in 1..=max_gates {
            let g = Geometry::array(p, q).map_err(err)?;
            row.push(geometry::geometry_capacity(&g, &lib, mode, precision).total);
        }
        grid.push(row);
    }
    let v = json!({
        "library": lib.names(),
        "library_capacity": geometry::library_capacity(&lib, precision),
        "cell_capacity": geometry::cell_capacity(&lib, precision),
        "mode": mode.to_string(),
        "grid": grid,
    });
    Ok(v.to_string())
}

/// Evolves a circuit for `function_text` on a `levels x gates` array and
/// returns the trace, metrics and netlist.
pub fn evolve_json(
    function_text: &str,
    levels: usize,
    gates: usize,
    library: &str,
    seed: u64,
    max_evaluations: u64,
) -> Result<String, String> {
    if max_evaluations > MAX_EVALUATIONS {
        return Err(format!("at most {MAX_EVALUATIONS} evaluations"));
    }
    let tt = io::parse_function(function_text).map_err(err)?;
    let lib = Arc::new(GateLibrary::from_names(library).map_err(err)?);
    let geom = Geometry::new(levels, gates, levels, tt.n_inputs(), tt.n_outputs()).map_err(err)?;
    let params = EvolutionParams {
        max_evaluations,
        ..EvolutionParams::with_seed(seed)
    };
    let result = infosynth::evolve(&tt, geom, lib.clone(), &params).map_err(err)?;
    let nm = NetworkMetrics::compute(&tt, &result.netlist, &result.history);
    let trace: Vec<Value> = metrics::ht_trace(&result.history, &tt)
        .iter()
        .map(|t| json!([t.evaluations, t.functionality, t.active_gates, t.h_best, t.t_running]))
        .collect();
    let effective = geometry::effective_capacity(&geom, &lib, result.netlist.used_cells(), Precision::Tabulated)
        .map_err(err)?;
    let v = json!({
        "evaluations": result.evaluations,
        "functionality": result.fitness.functionality(),
        "active_gates": result.fitness.active_gates,
        "verified": result.verified,
        "first_functional": result.first_functional_evaluation(),
        "network_information": nm.network_information,
        "logical_work": nm.logical_work,
        "information_potential": nm.information_potential,
        "vitality": nm.vitality,
        "effective_capacity": effective,
        "trace_columns": ["evaluations", "functionality", "active_gates", "H_best", "T_running"],
        "trace": trace,
        "netlist": io::emit_netlist(&result.netlist),
        "table": io::emit_truthvector(&result.netlist.simulate()),
    });
    Ok(v.to_string())
}

#[wasm_bindgen]
pub fn measure(function_text: &str) -> Result<String, JsValue> {
    measure_json(function_text).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn capacity_sweep(
    library: &str,
    max_levels: usize,
    max_gates: usize,
    mode: &str,
    exact: bool,
) -> Result<String, JsValue> {
    capacity_sweep_json(library, max_levels, max_gates, mode, exact).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn evolve_circuit(
    function_text: &str,
    levels: usize,
    gates: usize,
    library: &str,
    seed: u64,
    max_evaluations: u64,
) -> Result<String, JsValue> {
    evolve_json(function_text, levels, gates, library, seed, max_evaluations).map_err(|e| JsValue::from_str(&e))
}
