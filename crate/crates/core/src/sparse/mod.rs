//! Sparse networks: chordal completion, partial path consistency, variable
//! elimination with scenario reconstruction, and a benchmark harness.

mod bench;
mod elim;
mod graph;
mod ppc;

pub use bench::{run_bench, write_bench_csv, BenchConfig, BenchRow, BENCH_COLUMNS};
pub use elim::{eliminate_variables, reconstruct_scenario, solve_elimination, Elimination, EliminationOrder, EliminationRecord};
pub use graph::{triangulate, verify_chordal, ChordalStructure, ConstraintGraph, Heuristic};
pub use ppc::{enforce_ppc, ppc_pc_difference, search_ppc_gap};
