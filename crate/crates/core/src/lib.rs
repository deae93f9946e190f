//! Information measures for gate-level circuit synthesis.
//!
//! - [`boolfn`]: truth tables, entropy and conditional entropy.
//! - [`gatelib`]: primitive gates, libraries and per-gate measures.
//! - [`geometry`]: cell-array geometry, capacity estimates and a priori
//!   geometry ranking.
//! - [`evolve`]: (1+λ) evolution of circuits on a levels-back cell array.
//! - [`metrics`]: network information, logical work, information potential and
//!   vitality of a run.
//! - [`io`]: PLA / truth-vector / netlist JSON / CSV / config formats.

pub mod boolfn;
pub mod error;
pub mod evolve;
pub mod gatelib;
pub mod geometry;
pub mod io;
pub mod metrics;

pub use boolfn::{BitColumn, Distribution, TruthTable};
pub use error::{Error, Result};
pub use evolve::{evolve, EvolutionParams, EvolutionResult, Fitness, Genotype, Netlist};
pub use gatelib::{GateKind, GateLibrary};
pub use geometry::{CapacityMode, CapacityReport, Cell, Geometry, Precision};
pub use metrics::NetworkMetrics;
