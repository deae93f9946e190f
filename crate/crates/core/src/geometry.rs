//! Cell-array geometry and its information capacity.
//!
//! A geometry is `levels x gates_per_level` uncommitted cells. Level 0 sits
//! next to the primary inputs. In attenuated mode a cell on level `l`
//! contributes `I_G * 2^-l` bits, so each level further from the inputs
//! carries half the budget of the one before it.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gatelib::{gate_info_measure, GateKind, GateLibrary};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Geometry {
    levels: usize,
    gates_per_level: usize,
    levels_back: usize,
    n_inputs: usize,
    n_outputs: usize,
}

impl Geometry {
    pub fn new(
        levels: usize,
        gates_per_level: usize,
        levels_back: usize,
        n_inputs: usize,
        n_outputs: usize,
    ) -> Result<Self> {
        let g = Geometry {
            levels,
            gates_per_level,
            levels_back,
            n_inputs,
            n_outputs,
        };
        g.validate()?;
        Ok(g)
    }

    /// A `levels x gates_per_level` array with full levels-back, sized for the
    /// widest circuit it can host with 2-input cells: `2q` inputs and `q`
    /// outputs.
    pub fn array(levels: usize, gates_per_level: usize) -> Result<Self> {
        Self::new(
            levels,
            gates_per_level,
            levels.max(1),
            2 * gates_per_level.max(1),
            gates_per_level.max(1),
        )
    }

    /// Parses `PxQ` as levels x gates-per-level.
    pub fn parse_dims(s: &str) -> Result<(usize, usize)> {
        let bad = || Error::InvalidGeometry(format!("expected PxQ (levels x gates per level), got {s:?}"));
        let (p, q) = s.trim().split_once(['x', 'X']).ok_or_else(bad)?;
        let p = p.trim().parse().map_err(|_| bad())?;
        let q = q.trim().parse().map_err(|_| bad())?;
        Ok((p, q))
    }

    fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::InvalidGeometry(m));
        if self.levels == 0 || self.gates_per_level == 0 {
            return fail("levels and gates per level must be at least 1".into());
        }
        if self.levels_back == 0 || self.levels_back > self.levels {
            return fail(format!(
                "levels back must be in 1..={}, got {}",
                self.levels, self.levels_back
            ));
        }
        if self.n_inputs == 0 || self.n_outputs == 0 {
            return fail("a circuit needs at least one input and one output".into());
        }
        if self.n_outputs > self.cell_count() {
            return fail(format!(
                "{} outputs cannot be driven by {} cells",
                self.n_outputs,
                self.cell_count()
            ));
        }
        Ok(())
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn gates_per_level(&self) -> usize {
        self.gates_per_level
    }

    pub fn levels_back(&self) -> usize {
        self.levels_back
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    pub fn n_outputs(&self) -> usize {
        self.n_outputs
    }

    pub fn cell_count(&self) -> usize {
        self.levels * self.gates_per_level
    }

    pub fn contains(&self, cell: Cell) -> bool {
        cell.level < self.levels && cell.position < self.gates_per_level
    }

    /// Same array with a different level count; levels-back is clamped.
    pub(crate) fn with_levels(&self, levels: usize) -> Result<Self> {
        Self::new(
            levels,
            self.gates_per_level,
            self.levels_back.min(levels),
            self.n_inputs,
            self.n_outputs,
        )
    }
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.levels, self.gates_per_level)
    }
}

/// Cell coordinates, both 0-based. Level 0 is adjacent to the inputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub level: usize,
    pub position: usize,
}

impl Cell {
    pub fn new(level: usize, position: usize) -> Self {
        Cell { level, position }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CapacityMode {
    /// `p * q * I_G`.
    Flat,
    /// Per-cell capacity halves with every level away from the inputs.
    #[default]
    Attenuated,
}

impl CapacityMode {
    /// Multiplier applied to a cell on 0-based `level`.
    pub fn level_factor(self, level: usize) -> f64 {
        match self {
            CapacityMode::Flat => 1.0,
            CapacityMode::Attenuated => 0.5f64.powi(level as i32),
        }
    }
}

impl FromStr for CapacityMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "flat" => Ok(CapacityMode::Flat),
            "attenuated" => Ok(CapacityMode::Attenuated),
            _ => Err(Error::InvalidParameter(format!(
                "capacity mode must be flat or attenuated, got {s:?}"
            ))),
        }
    }
}

impl fmt::Display for CapacityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CapacityMode::Flat => "flat",
            CapacityMode::Attenuated => "attenuated",
        })
    }
}

/// How gate measures enter capacity sums.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    /// Full-precision `I_gate`.
    Exact,
    /// `I_gate` rounded to 0.01 bit, the resolution gate tables are published
    /// at (AND = 1.19 rather than 1.18872...).
    #[default]
    Tabulated,
}

impl Precision {
    pub fn apply(self, bits: f64) -> f64 {
        match self {
            Precision::Exact => bits,
            Precision::Tabulated => (bits * 100.0).round() / 100.0,
        }
    }
}

/// Capacity of one gate used as a cell.
pub fn gate_capacity(g: &GateKind, precision: Precision) -> f64 {
    precision.apply(gate_info_measure(g))
}

/// `I_L`: sum of gate capacities over the library.
pub fn library_capacity(lib: &GateLibrary, precision: Precision) -> f64 {
    lib.gates().iter().map(|g| gate_capacity(g, precision)).sum()
}

/// `I_G`: the largest gate capacity in the library.
pub fn cell_capacity(lib: &GateLibrary, precision: Precision) -> f64 {
    lib.gates()
        .iter()
        .map(|g| gate_capacity(g, precision))
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CapacityReport {
    pub mode: CapacityMode,
    pub precision: Precision,
    pub levels: usize,
    pub gates_per_level: usize,
    /// Not part of the capacity estimate; recorded for reference.
    pub levels_back: usize,
    pub library_capacity: f64,
    pub cell_capacity: f64,
    /// Capacity of a single cell on each level.
    pub level_cell_capacity: Vec<f64>,
    /// `gates_per_level * level_cell_capacity[l]`.
    pub level_contribution: Vec<f64>,
    pub total: f64,
}

pub fn geometry_capacity(
    geom: &Geometry,
    lib: &GateLibrary,
    mode: CapacityMode,
    precision: Precision,
) -> CapacityReport {
    let cell = cell_capacity(lib, precision);
    let q = geom.gates_per_level() as f64;
    let level_cell_capacity: Vec<f64> = (0..geom.levels())
        .map(|l| cell * mode.level_factor(l))
        .collect();
    let level_contribution: Vec<f64> = level_cell_capacity.iter().map(|c| q * c).collect();
    CapacityReport {
        mode,
        precision,
        levels: geom.levels(),
        gates_per_level: geom.gates_per_level(),
        levels_back: geom.levels_back(),
        library_capacity: library_capacity(lib, precision),
        cell_capacity: cell,
        total: level_contribution.iter().sum(),
        level_cell_capacity,
        level_contribution,
    }
}

/// Attenuated capacity summed over the cells a circuit actually occupies.
/// Repeated cells count once.
pub fn effective_capacity<I>(geom: &Geometry, lib: &GateLibrary, used: I, precision: Precision) -> Result<f64>
where
    I: IntoIterator<Item = Cell>,
{
    let cells: BTreeSet<Cell> = used.into_iter().collect();
    if let Some(bad) = cells.iter().find(|c| !geom.contains(**c)) {
        return Err(Error::CellOutOfBounds {
            level: bad.level,
            position: bad.position,
        });
    }
    let cell = cell_capacity(lib, precision);
    Ok(cells
        .iter()
        .map(|c| cell * CapacityMode::Attenuated.level_factor(c.level))
        .sum())
}

/// Input/output counts of the function to be evolved.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetShape {
    pub n_inputs: usize,
    pub n_outputs: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub geometry: Geometry,
    pub library: GateLibrary,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Advice {
    /// 1-based.
    pub rank: usize,
    pub candidate: Candidate,
    /// Attenuated capacity of the whole array.
    pub report: CapacityReport,
    /// Cells per level a circuit of the target shape is expected to occupy.
    pub utilized_per_level: usize,
    /// Attenuated capacity over the expected occupied cells; the ranking key.
    pub effective_capacity: f64,
    pub feasible: bool,
    pub notes: Vec<String>,
}

/// Cells per level a `target` circuit occupies: enough cells on the input
/// level to absorb every input through the widest gate, and one per output,
/// capped at the array width.
pub fn utilized_cells_per_level(target: TargetShape, geom: &Geometry, lib: &GateLibrary) -> usize {
    let arity = lib.max_arity().max(1);
    target
        .n_inputs
        .div_ceil(arity)
        .max(target.n_outputs)
        .min(geom.gates_per_level())
}

/// Ranks candidate geometries for a target shape, best first.
///
/// Infeasible candidates go last. The rest are ordered by effective capacity
/// (descending), then fewer cells, then smaller library.
pub fn advise(target: TargetShape, candidates: &[Candidate], precision: Precision) -> Result<Vec<Advice>> {
    if candidates.is_empty() {
        return Err(Error::NoCandidates);
    }
    let mut out: Vec<Advice> = candidates
        .iter()
        .map(|c| {
            let geom = &c.geometry;
            let mut notes = Vec::new();
            if target.n_outputs > geom.cell_count() {
                notes.push(format!(
                    "{} outputs exceed {} cells",
                    target.n_outputs,
                    geom.cell_count()
                ));
            }
            if target.n_inputs > 1 && !c.library.has_multi_input_gate() {
                notes.push("library has no gate with two or more inputs".into());
            }
            let report = geometry_capacity(geom, &c.library, CapacityMode::Attenuated, precision);
            let utilized = utilized_cells_per_level(target, geom, &c.library);
            let effective = effective_capacity(
                geom,
                &c.library,
                (0..geom.levels()).flat_map(|l| (0..utilized).map(move |p| Cell::new(l, p))),
                precision,
            )
            .expect("utilized cells lie inside the geometry");
            Advice {
                rank: 0,
                candidate: c.clone(),
                report,
                utilized_per_level: utilized,
                effective_capacity: effective,
                feasible: notes.is_empty(),
                notes,
            }
        })
        .collect();
    out.sort_by(compare_advice);
    for (i, a) in out.iter_mut().enumerate() {
        a.rank = i + 1;
    }
    Ok(out)
}

fn quantize(bits: f64) -> i64 {
    (bits * 1e9).round() as i64
}

fn compare_advice(a: &Advice, b: &Advice) -> Ordering {
    let (ga, gb) = (&a.candidate.geometry, &b.candidate.geometry);
    b.feasible
        .cmp(&a.feasible)
        .then(quantize(b.effective_capacity).cmp(&quantize(a.effective_capacity)))
        .then(ga.cell_count().cmp(&gb.cell_count()))
        .then(a.candidate.library.len().cmp(&b.candidate.library.len()))
        .then(ga.cmp(gb))
        .then_with(|| a.candidate.library.to_text().cmp(&b.candidate.library.to_text()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lib(names: &str) -> GateLibrary {
        GateLibrary::from_names(names).unwrap()
    }

    fn attenuated(p: usize, q: usize, names: &str) -> f64 {
        geometry_capacity(
            &Geometry::array(p, q).unwrap(),
            &lib(names),
            CapacityMode::Attenuated,
            Precision::Tabulated,
        )
        .total
    }

    #[test]
    fn geometry_validation() {
        assert!(Geometry::new(0, 2, 1, 2, 1).is_err());
        assert!(Geometry::new(2, 0, 1, 2, 1).is_err());
        assert!(Geometry::new(2, 2, 3, 2, 1).is_err());
        assert!(Geometry::new(2, 2, 0, 2, 1).is_err());
        assert!(Geometry::new(1, 1, 1, 2, 2).is_err());
        assert!(Geometry::new(2, 2, 2, 4, 4).is_ok());
        assert_eq!(Geometry::parse_dims("3x2").unwrap(), (3, 2));
        assert_eq!(Geometry::parse_dims(" 4X5 ").unwrap(), (4, 5));
        assert!(Geometry::parse_dims("3*3").is_err());
        assert!(Geometry::parse_dims("ax3").is_err());
    }

    #[test]
    fn library_and_cell_capacity() {
        let p = Precision::Tabulated;
        assert!((library_capacity(&lib("NOT,AND,OR"), p) - 2.38).abs() < 1e-12);
        assert_eq!(library_capacity(&lib("NOT"), p), 0.0);
        assert!((library_capacity(&lib("NOT,AND,OR,EXOR"), p) - 3.38).abs() < 1e-12);
        assert!((cell_capacity(&lib("NOT,AND,OR"), p) - 1.19).abs() < 1e-12);
        assert_eq!(cell_capacity(&lib("NOT,EXOR"), p), 1.0);
        assert_eq!(cell_capacity(&lib("NOT"), p), 0.0);
        let exact = library_capacity(&lib("NOT,AND,OR"), Precision::Exact);
        assert!((exact - 2.0 * 1.188722).abs() < 1e-6);
    }

    #[test]
    fn table_of_geometry_capacities() {
        assert!((attenuated(2, 2, "NOT,AND,OR") - 3.57).abs() < 1e-9);
        assert!((attenuated(2, 2, "NOT,EXOR") - 3.0).abs() < 1e-9);
        assert!((attenuated(2, 2, "NOT,AND,OR,EXOR") - 3.57).abs() < 1e-9);
        assert!((attenuated(3, 3, "NOT,AND,OR") - 6.2475).abs() < 1e-9);
        assert!((attenuated(3, 3, "NOT,EXOR") - 5.25).abs() < 1e-9);
        assert!((attenuated(3, 3, "NOT,AND,OR,EXOR") - 6.2475).abs() < 1e-9);
    }

    #[test]
    fn per_level_cells_halve() {
        let r = geometry_capacity(
            &Geometry::array(2, 2).unwrap(),
            &lib("NOT,AND,OR"),
            CapacityMode::Attenuated,
            Precision::Tabulated,
        );
        assert!((r.level_cell_capacity[0] - 1.19).abs() < 1e-12);
        assert!((r.level_cell_capacity[1] - 0.595).abs() < 1e-12);
        assert!((r.total - r.level_contribution.iter().sum::<f64>()).abs() < 1e-9);
    }

    #[test]
    fn single_cell_is_cell_capacity() {
        let g = Geometry::new(1, 1, 1, 1, 1).unwrap();
        for names in ["NOT", "NOT,AND,OR", "NOT,EXOR"] {
            let l = lib(names);
            for mode in [CapacityMode::Flat, CapacityMode::Attenuated] {
                let r = geometry_capacity(&g, &l, mode, Precision::Tabulated);
                assert_eq!(r.total, cell_capacity(&l, Precision::Tabulated));
            }
        }
    }

    #[test]
    fn flat_mode_is_p_q_cell() {
        let r = geometry_capacity(
            &Geometry::array(3, 3).unwrap(),
            &lib("NOT,AND,OR"),
            CapacityMode::Flat,
            Precision::Tabulated,
        );
        assert!((r.total - 9.0 * 1.19).abs() < 1e-9);
    }

    #[test]
    fn effective_capacity_cases() {
        let g = Geometry::array(3, 3).unwrap();
        let l = lib("NOT,EXOR");
        let two_per_level = (0..3).flat_map(|lv| (0..2).map(move |p| Cell::new(lv, p)));
        let e = effective_capacity(&g, &l, two_per_level, Precision::Tabulated).unwrap();
        assert!((e - 3.5).abs() < 1e-12);
        assert_eq!(effective_capacity(&g, &l, [], Precision::Tabulated).unwrap(), 0.0);
        let dup = [Cell::new(0, 0), Cell::new(0, 0)];
        assert_eq!(effective_capacity(&g, &l, dup, Precision::Tabulated).unwrap(), 1.0);
        assert_eq!(
            effective_capacity(&g, &l, [Cell::new(3, 0)], Precision::Tabulated),
            Err(Error::CellOutOfBounds { level: 3, position: 0 })
        );
    }

    #[test]
    fn advise_prefers_smaller_geometry_with_richer_cells() {
        let target = TargetShape {
            n_inputs: 4,
            n_outputs: 2,
        };
        let cands = vec![
            Candidate {
                geometry: Geometry::array(3, 3).unwrap(),
                library: lib("NOT,EXOR"),
            },
            Candidate {
                geometry: Geometry::array(2, 2).unwrap(),
                library: lib("NOT,AND,OR"),
            },
        ];
        let ranked = advise(target, &cands, Precision::Tabulated).unwrap();
        assert_eq!(ranked[0].candidate, cands[1]);
        assert!((ranked[0].effective_capacity - 3.57).abs() < 1e-9);
        assert!((ranked[1].effective_capacity - 3.5).abs() < 1e-9);
        assert_eq!(ranked[1].utilized_per_level, 2);
        assert_eq!(ranked[1].rank, 2);
    }

    #[test]
    fn advise_ties_break_on_library_size() {
        let target = TargetShape {
            n_inputs: 6,
            n_outputs: 3,
        };
        let big = Candidate {
            geometry: Geometry::array(3, 3).unwrap(),
            library: lib("NOT,AND,OR,EXOR"),
        };
        let small = Candidate {
            geometry: Geometry::array(3, 3).unwrap(),
            library: lib("NOT,AND,OR"),
        };
        let ranked = advise(target, &[big.clone(), small.clone()], Precision::Tabulated).unwrap();
        assert!((ranked[0].effective_capacity - 6.2475).abs() < 1e-9);
        assert_eq!(ranked[0].candidate, small);
        assert_eq!(ranked[1].candidate, big);
    }

    #[test]
    fn advise_flags_not_only_library() {
        let target = TargetShape {
            n_inputs: 2,
            n_outputs: 1,
        };
        let cands = vec![
            Candidate {
                geometry: Geometry::array(4, 4).unwrap(),
                library: lib("NOT"),
            },
            Candidate {
                geometry: Geometry::array(1, 1).unwrap(),
                library: lib("AND"),
            },
        ];
        let ranked = advise(target, &cands, Precision::Tabulated).unwrap();
        assert!(ranked[0].feasible);
        assert!(!ranked[1].feasible);
        assert_eq!(ranked[1].candidate.library.names(), "NOT");
        assert_eq!(advise(target, &[], Precision::Tabulated), Err(Error::NoCandidates));
    }

    #[test]
    fn single_candidate_ranks_first() {
        let c = Candidate {
            geometry: Geometry::array(2, 2).unwrap(),
            library: lib("AND"),
        };
        let ranked = advise(
            TargetShape {
                n_inputs: 2,
                n_outputs: 1,
            },
            std::slice::from_ref(&c),
            Precision::Exact,
        )
        .unwrap();
        assert_eq!(ranked.len(), 1);
        assert_eq!(ranked[0].rank, 1);
        assert_eq!(ranked[0].candidate, c);
    }
}
