use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gatelib::GateLibrary;
use crate::geometry::{Cell, Geometry};

/// Where a cell input or circuit output is taken from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Source {
    Input(usize),
    Cell(Cell),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Connection {
    pub source: Source,
    pub inverted: bool,
}

impl Connection {
    pub fn new(source: Source) -> Self {
        Connection {
            source,
            inverted: false,
        }
    }

    pub fn inverted(source: Source) -> Self {
        Connection {
            source,
            inverted: true,
        }
    }
}

/// Genes of one cell. There is one connection per input of the widest
/// library gate; a gate reads only the first `arity` of them.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CellGenes {
    pub gate: usize,
    pub inputs: Vec<Connection>,
}

/// A chromosome over a fixed geometry and library.
///
/// Cells are stored level by level. A cell on level `l` may read primary
/// inputs or cells on levels `l - levels_back ..= l - 1`; outputs may read any
/// input or cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Genotype {
    geometry: Geometry,
    library: Arc<GateLibrary>,
    cells: Vec<CellGenes>,
    outputs: Vec<Source>,
}

impl Genotype {
    /// Assembles and validates a genotype from explicit genes.
    pub fn from_parts(
        geometry: Geometry,
        library: Arc<GateLibrary>,
        cells: Vec<CellGenes>,
        outputs: Vec<Source>,
    ) -> Result<Self> {
        let g = Genotype {
            geometry,
            library,
            cells,
            outputs,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn random<R: Rng + ?Sized>(geometry: Geometry, library: Arc<GateLibrary>, rng: &mut R) -> Self {
        let arity = library.max_arity();
        let mut cells = Vec::with_capacity(geometry.cell_count());
        for level in 0..geometry.levels() {
            for _ in 0..geometry.gates_per_level() {
                let inputs = (0..arity)
                    .map(|_| Connection {
                        source: random_cell_source(&geometry, level, rng),
                        inverted: random_polarity(&library, rng),
                    })
                    .collect();
                cells.push(CellGenes {
                    gate: rng.gen_range(0..library.len()),
                    inputs,
                });
            }
        }
        let outputs = (0..geometry.n_outputs())
            .map(|_| random_output_source(&geometry, rng))
            .collect();
        Genotype {
            geometry,
            library,
            cells,
            outputs,
        }
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn library(&self) -> &Arc<GateLibrary> {
        &self.library
    }

    pub fn cells(&self) -> &[CellGenes] {
        &self.cells
    }

    pub fn outputs(&self) -> &[Source] {
        &self.outputs
    }

    pub fn cell_index(&self, cell: Cell) -> usize {
        cell.level * self.geometry.gates_per_level() + cell.position
    }

    pub fn cell_at(&self, index: usize) -> Cell {
        let q = self.geometry.gates_per_level();
        Cell::new(index / q, index % q)
    }

    pub fn cell(&self, cell: Cell) -> &CellGenes {
        &self.cells[self.cell_index(cell)]
    }

    /// Number of genes, a function of geometry and library alone.
    pub fn gene_count(&self) -> usize {
        gene_count(&self.geometry, &self.library)
    }

    pub fn validate(&self) -> Result<()> {
        let geom = &self.geometry;
        let bad = |m: String| Err(Error::InvalidParameter(format!("invalid genotype: {m}")));
        if self.cells.len() != geom.cell_count() {
            return bad(format!("{} cells for a {geom} geometry", self.cells.len()));
        }
        if self.outputs.len() != geom.n_outputs() {
            return bad(format!("{} output genes, expected {}", self.outputs.len(), geom.n_outputs()));
        }
        let arity = self.library.max_arity();
        for (i, genes) in self.cells.iter().enumerate() {
            let cell = self.cell_at(i);
            if genes.gate >= self.library.len() {
                return bad(format!("cell {cell:?} uses gate {} of {}", genes.gate, self.library.len()));
            }
            if genes.inputs.len() != arity {
                return bad(format!("cell {cell:?} has {} connection genes, expected {arity}", genes.inputs.len()));
            }
            for conn in &genes.inputs {
                if !cell_source_allowed(geom, cell.level, conn.source) {
                    return bad(format!("cell {cell:?} cannot read {:?}", conn.source));
                }
                if conn.inverted && !self.library.allow_inverted_inputs() {
                    return bad(format!("cell {cell:?} inverts an input but the library forbids it"));
                }
            }
        }
        for src in &self.outputs {
            if !output_source_allowed(geom, *src) {
                return bad(format!("output reads {src:?}"));
            }
        }
        Ok(())
    }

    /// Resamples every gene independently with probability `rate`.
    ///
    /// # Panics
    /// If `rate` is not in `(0, 1]`.
    pub fn mutate<R: Rng + ?Sized>(&self, rate: f64, rng: &mut R) -> Genotype {
        assert!(rate > 0.0 && rate <= 1.0, "mutation rate {rate} not in (0, 1]");
        let mut child = self.clone();
        let polarity = self.library.allow_inverted_inputs();
        let q = self.geometry.gates_per_level();
        for (i, genes) in child.cells.iter_mut().enumerate() {
            let level = i / q;
            if rng.gen_bool(rate) {
                genes.gate = rng.gen_range(0..self.library.len());
            }
            for conn in &mut genes.inputs {
                if rng.gen_bool(rate) {
                    conn.source = random_cell_source(&self.geometry, level, rng);
                }
                if polarity && rng.gen_bool(rate) {
                    conn.inverted = rng.gen_bool(0.5);
                }
            }
        }
        for src in &mut child.outputs {
            if rng.gen_bool(rate) {
                *src = random_output_source(&self.geometry, rng);
            }
        }
        child
    }

    /// Uniform crossover of whole cell blocks and output genes.
    pub fn crossover<R: Rng + ?Sized>(&self, other: &Genotype, rng: &mut R) -> Result<Genotype> {
        if self.geometry != other.geometry || self.library != other.library {
            return Err(Error::IncompatibleParents);
        }
        let mut child = self.clone();
        for (mine, theirs) in child.cells.iter_mut().zip(&other.cells) {
            if rng.gen_bool(0.5) {
                mine.clone_from(theirs);
            }
        }
        for (mine, theirs) in child.outputs.iter_mut().zip(&other.outputs) {
            if rng.gen_bool(0.5) {
                *mine = *theirs;
            }
        }
        Ok(child)
    }

    /// Appends a level of random cells after the last one. Existing genes are
    /// kept as they are.
    pub fn grow<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Genotype> {
        let geometry = self.geometry.with_levels(self.geometry.levels() + 1)?;
        let level = self.geometry.levels();
        let arity = self.library.max_arity();
        let mut cells = self.cells.clone();
        for _ in 0..geometry.gates_per_level() {
            cells.push(CellGenes {
                gate: rng.gen_range(0..self.library.len()),
                inputs: (0..arity)
                    .map(|_| Connection {
                        source: random_cell_source(&geometry, level, rng),
                        inverted: random_polarity(&self.library, rng),
                    })
                    .collect(),
            });
        }
        Ok(Genotype {
            geometry,
            library: Arc::clone(&self.library),
            cells,
            outputs: self.outputs.clone(),
        })
    }

    /// Removes `level`. Readers of a removed cell are rewired to the cell at
    /// the same position one level closer to the inputs, or to a primary input
    /// when the first level is removed.
    pub fn shrink(&self, level: usize) -> Result<Genotype> {
        let levels = self.geometry.levels();
        if levels <= 1 {
            return Err(Error::CannotShrink);
        }
        assert!(level < levels, "level {level} outside a {levels}-level geometry");
        let geometry = self
            .geometry
            .with_levels(levels - 1)
            .map_err(|_| Error::CannotShrink)?;
        let n_inputs = self.geometry.n_inputs();
        let remap = |src: Source| match src {
            Source::Input(_) => src,
            Source::Cell(c) if c.level < level => src,
            Source::Cell(c) if c.level == level => {
                if level == 0 {
                    Source::Input(c.position % n_inputs)
                } else {
                    Source::Cell(Cell::new(level - 1, c.position))
                }
            }
            Source::Cell(c) => Source::Cell(Cell::new(c.level - 1, c.position)),
        };
        let cells = self
            .cells
            .iter()
            .enumerate()
            .filter(|(i, _)| self.cell_at(*i).level != level)
            .map(|(_, genes)| CellGenes {
                gate: genes.gate,
                inputs: genes
                    .inputs
                    .iter()
                    .map(|c| Connection {
                        source: remap(c.source),
                        inverted: c.inverted,
                    })
                    .collect(),
            })
            .collect();
        Ok(Genotype {
            geometry,
            library: Arc::clone(&self.library),
            cells,
            outputs: self.outputs.iter().map(|&s| remap(s)).collect(),
        })
    }

    /// Grows or shrinks by one level with equal odds, within
    /// `1..=max_levels` levels. Returns an unchanged copy when neither move is
    /// possible.
    pub fn resize<R: Rng + ?Sized>(&self, max_levels: usize, rng: &mut R) -> Genotype {
        let levels = self.geometry.levels();
        let can_grow = levels < max_levels;
        let can_shrink = levels > 1;
        let grow = match (can_grow, can_shrink) {
            (true, true) => rng.gen_bool(0.5),
            (true, false) => true,
            (false, true) => false,
            (false, false) => return self.clone(),
        };
        let result = if grow {
            self.grow(rng)
        } else {
            let level = rng.gen_range(0..levels);
            self.shrink(level)
        };
        result.unwrap_or_else(|_| self.clone())
    }
}

/// Genes in a chromosome for `geometry` over `library`.
pub fn gene_count(geometry: &Geometry, library: &GateLibrary) -> usize {
    let arity = library.max_arity();
    let polarity = if library.allow_inverted_inputs() { arity } else { 0 };
    geometry.cell_count() * (1 + arity + polarity) + geometry.n_outputs()
}

/// Seeded convenience wrapper around [`Genotype::random`].
pub fn random_genotype(geometry: Geometry, library: Arc<GateLibrary>, seed: u64) -> Genotype {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Genotype::random(geometry, library, &mut rng)
}

fn random_polarity<R: Rng + ?Sized>(library: &GateLibrary, rng: &mut R) -> bool {
    library.allow_inverted_inputs() && rng.gen_bool(0.5)
}

fn reachable_levels(geom: &Geometry, level: usize) -> usize {
    level.min(geom.levels_back())
}

fn random_cell_source<R: Rng + ?Sized>(geom: &Geometry, level: usize, rng: &mut R) -> Source {
    let back = reachable_levels(geom, level);
    let q = geom.gates_per_level();
    let k = rng.gen_range(0..geom.n_inputs() + back * q);
    if k < geom.n_inputs() {
        Source::Input(k)
    } else {
        let k = k - geom.n_inputs();
        Source::Cell(Cell::new(level - back + k / q, k % q))
    }
}

fn random_output_source<R: Rng + ?Sized>(geom: &Geometry, rng: &mut R) -> Source {
    let q = geom.gates_per_level();
    let k = rng.gen_range(0..geom.n_inputs() + geom.cell_count());
    if k < geom.n_inputs() {
        Source::Input(k)
    } else {
        let k = k - geom.n_inputs();
        Source::Cell(Cell::new(k / q, k % q))
    }
}

fn cell_source_allowed(geom: &Geometry, level: usize, src: Source) -> bool {
    match src {
        Source::Input(i) => i < geom.n_inputs(),
        Source::Cell(c) => {
            geom.contains(c) && c.level < level && level - c.level <= geom.levels_back()
        }
    }
}

fn output_source_allowed(geom: &Geometry, src: Source) -> bool {
    match src {
        Source::Input(i) => i < geom.n_inputs(),
        Source::Cell(c) => geom.contains(c),
    }
}
