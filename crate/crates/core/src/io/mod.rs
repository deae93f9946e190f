//! File formats: truth tables, netlists, history traces and run configs.

mod config;
mod function;
mod netlist_json;
mod trace_csv;

pub use config::{LibrarySpec, RunConfig};
pub use function::{emit_pla, emit_truthvector, parse_function, parse_pla, parse_truthvector};
pub use netlist_json::{emit_netlist, parse_netlist};
pub use trace_csv::{emit_trace_csv, TRACE_HEADER};
