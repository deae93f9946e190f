//! Run configuration for synthesis.
//!
//! One `key = value` per line, `#` starts a comment:
//!
//! ```text
//! target = half_adder.pla        # required; PLA or truth-vector file
//! geometry = 2x2                 # required; levels x gates per level
//! levels_back = 2                # default: number of levels
//! library = NOT,AND,OR,EXOR      # built-in gates, or
//! library_file = gates.txt       # a library definition file
//! seed = 1                       # required
//! lambda = 4
//! mutation_rate = 0.05
//! max_evaluations = 100000
//! stagnation = 10000
//! polarity = true                # allow inverted cell inputs
//! crossover = false
//! resize = false
//! resize_rate = 0.02
//! max_levels = 4
//! capacity_mode = attenuated
//! netlist_out = best.json
//! history_out = history.csv
//! ```

use std::collections::HashSet;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::evolve::EvolutionParams;
use crate::geometry::{CapacityMode, Geometry};

#[derive(Clone, Debug, PartialEq)]
pub enum LibrarySpec {
    /// Comma-separated built-in gate names.
    Names(String),
    File(PathBuf),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub target: PathBuf,
    pub levels: usize,
    pub gates_per_level: usize,
    pub levels_back: usize,
    pub library: LibrarySpec,
    pub polarity: bool,
    pub params: EvolutionParams,
    pub capacity_mode: CapacityMode,
    pub netlist_out: Option<PathBuf>,
    pub history_out: Option<PathBuf>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut target = None;
        let mut dims = None;
        let mut levels_back = None;
        let mut library = None;
        let mut seed = None;
        let mut polarity = true;
        let mut params = EvolutionParams::default();
        let mut capacity_mode = CapacityMode::Attenuated;
        let mut netlist_out = None;
        let mut history_out = None;
        let mut seen = HashSet::new();

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
            if !seen.insert(key.to_string()) {
                return Err(Error::parse(line_no, format!("{key} given twice")));
            }
            let err = |m: String| Error::parse(line_no, format!("{key}: {m}"));
            let positive = |v: &str| -> Result<u64> {
                match v.parse::<u64>() {
                    Ok(n) if n > 0 => Ok(n),
                    _ => Err(err(format!("expected a positive integer, got {v:?}"))),
                }
            };
            let flag = |v: &str| -> Result<bool> {
                match v {
                    "true" | "yes" | "on" | "1" => Ok(true),
                    "false" | "no" | "off" | "0" => Ok(false),
                    _ => Err(err(format!("expected true or false, got {v:?}"))),
                }
            };
            let rate = |v: &str| -> Result<f64> {
                match v.parse::<f64>() {
                    Ok(r) if r > 0.0 && r <= 1.0 => Ok(r),
                    _ => Err(err(format!("expected a number in (0, 1], got {v:?}"))),
                }
            };
            match key {
                "target" => target = Some(PathBuf::from(value)),
                "geometry" => dims = Some(Geometry::parse_dims(value).map_err(|e| err(e.to_string()))?),
                "levels_back" => levels_back = Some(positive(value)? as usize),
                "library" => library = Some(LibrarySpec::Names(value.to_string())),
                "library_file" => library = Some(LibrarySpec::File(PathBuf::from(value))),
                "seed" => {
                    seed = Some(
                        value
                            .parse::<u64>()
                            .map_err(|_| err(format!("expected an unsigned integer, got {value:?}")))?,
                    )
                }
                "lambda" => params.lambda = positive(value)? as usize,
                "strategy" => {
                    let lambda = value
                        .strip_prefix("1+")
                        .and_then(|l| l.parse::<usize>().ok())
                        .filter(|&l| l > 0)
                        .ok_or_else(|| err(format!("expected `1+<lambda>`, got {value:?}")))?;
                    params.lambda = lambda;
                }
                "mutation_rate" => params.mutation_rate = rate(value)?,
                "max_evaluations" => params.max_evaluations = positive(value)?,
                "stagnation" => params.stagnation_window = positive(value)?,
                "polarity" => polarity = flag(value)?,
                "neutral_drift" => params.neutral_drift = flag(value)?,
                "crossover" => params.crossover = flag(value)?,
                "resize" => params.resize = flag(value)?,
                "resize_rate" => params.resize_rate = rate(value)?,
                "max_levels" => params.max_levels = Some(positive(value)? as usize),
                "capacity_mode" => capacity_mode = value.parse().map_err(|e: Error| err(e.to_string()))?,
                "netlist_out" => netlist_out = Some(PathBuf::from(value)),
                "history_out" => history_out = Some(PathBuf::from(value)),
                other => return Err(Error::parse(line_no, format!("unknown key {other}"))),
            }
        }

        let missing = |k: &str| Error::parse(0, format!("missing required key {k}"));
        let target = target.ok_or_else(|| missing("target"))?;
        let (levels, gates_per_level) = dims.ok_or_else(|| missing("geometry"))?;
        params.seed = seed.ok_or_else(|| missing("seed"))?;
        let levels_back = levels_back.unwrap_or(levels);
        if levels == 0 || gates_per_level == 0 || levels_back > levels {
            return Err(Error::InvalidGeometry(format!(
                "{levels}x{gates_per_level} with levels_back {levels_back}"
            )));
        }
        Ok(RunConfig {
            target,
            levels,
            gates_per_level,
            levels_back,
            library: library.unwrap_or_else(|| LibrarySpec::Names("NOT,AND,OR,EXOR".into())),
            polarity,
            params,
            capacity_mode,
            netlist_out,
            history_out,
        })
    }

    /// Geometry for a target with the given shape.
    pub fn geometry(&self, n_inputs: usize, n_outputs: usize) -> Result<Geometry> {
        Geometry::new(
            self.levels,
            self.gates_per_level,
            self.levels_back,
            n_inputs,
            n_outputs,
        )
    }
}
