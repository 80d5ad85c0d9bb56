use std::io::Write;
use std::time::Instant;

use crate::calculi;
use crate::error::{Error, Result};
use crate::network::{enforce_pc, random_qcn, SolveOutcome, Verdict};
use crate::subalgebra::named_subalgebra;

use super::elim::{eliminate_variables, EliminationOrder};
use super::graph::{triangulate, ConstraintGraph, Heuristic};
use super::ppc::enforce_ppc;

/// A benchmark grid: every `(n, density)` cell gets `repetitions` random
/// networks.
#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub calculus: String,
    /// Subalgebra name or file, as accepted by
    /// [`named_subalgebra`](crate::subalgebra::named_subalgebra).
    pub pool: String,
    pub sizes: Vec<usize>,
    pub densities: Vec<f64>,
    pub repetitions: usize,
    pub seed: u64,
    pub heuristic: Heuristic,
}

/// One solver run on one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub calculus: String,
    pub pool: String,
    pub n: usize,
    pub density: f64,
    pub solver: &'static str,
    pub seed: u64,
    pub verdict: Verdict,
    pub wall_ms: f64,
    pub refinements: u64,
    pub fill_edges: usize,
}

pub const BENCH_COLUMNS: [&str; 10] =
    ["calculus", "pool", "n", "density", "solver", "seed", "verdict", "wall_ms", "refinements", "fill_edges"];

/// Runs PC, PPC on a triangulation, and variable elimination on every
/// instance. Stops with `VerdictMismatch` at the first disagreement.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    let calc = calculi::by_name(&cfg.calculus)?;
    let pool = named_subalgebra(&calc, &cfg.pool)?;
    let mut rows = Vec::new();
    let mut instance = 0u64;
    for &n in &cfg.sizes {
        for &density in &cfg.densities {
            for _ in 0..cfg.repetitions {
                let seed = cfg.seed.wrapping_add(instance);
                instance += 1;
                let q = random_qcn(&calc, n, density, &pool, seed)?;
                let complete = n * n.saturating_sub(1) / 2;
                let edges = q.constraint_edges().len();

                let pc = enforce_pc(&q);
                // triangulation is part of the PPC pipeline and is timed with it
                let tri_start = Instant::now();
                let cs = triangulate(&ConstraintGraph::of_network(&q), cfg.heuristic);
                let tri = tri_start.elapsed();
                let mut ppc = enforce_ppc(&q, &cs)?;
                ppc.stats.wall += tri;
                let ve = eliminate_variables(&q, &EliminationOrder::MinDegree)?;

                for (name, out) in [("ppc", &ppc), ("ve", &ve.outcome)] {
                    if out.verdict != pc.verdict {
                        return Err(Error::VerdictMismatch(format!(
                            "{} on {} n={n} density={density} seed={seed}: pc {}, {name} {}",
                            cfg.pool,
                            calc.name(),
                            pc.verdict,
                            out.verdict
                        )));
                    }
                }
                let row = |solver: &'static str, out: &SolveOutcome, fill: usize| BenchRow {
                    calculus: calc.name().to_string(),
                    pool: cfg.pool.clone(),
                    n,
                    density,
                    solver,
                    seed,
                    verdict: out.verdict,
                    wall_ms: out.stats.wall.as_secs_f64() * 1e3,
                    refinements: out.stats.refinements,
                    fill_edges: fill,
                };
                rows.push(row("pc", &pc, complete - edges));
                rows.push(row("ppc", &ppc, cs.fill_edges));
                rows.push(row("ve", &ve.outcome, ve.fill_edges));
            }
        }
    }
    Ok(rows)
}

/// Writes rows as CSV with a header line.
pub fn write_bench_csv<W: Write>(rows: &[BenchRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(BENCH_COLUMNS)?;
    for r in rows {
        w.write_record([
            r.calculus.clone(),
            r.pool.clone(),
            r.n.to_string(),
            r.density.to_string(),
            r.solver.to_string(),
            r.seed.to_string(),
            r.verdict.to_string(),
            format!("{:.3}", r.wall_ms),
            r.refinements.to_string(),
            r.fill_edges.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(densities: Vec<f64>) -> BenchConfig {
        BenchConfig {
            calculus: "IA".into(),
            pool: "SIA".into(),
            sizes: vec![12],
            densities,
            repetitions: 3,
            seed: 5,
            heuristic: Heuristic::MinFill,
        }
    }

    #[test]
    fn rows_and_csv() {
        let rows = run_bench(&cfg(vec![0.2, 1.0])).unwrap();
        assert_eq!(rows.len(), 2 * 3 * 3);
        for r in rows.iter().filter(|r| r.density == 1.0) {
            assert_eq!(r.fill_edges, 0, "{}", r.solver);
        }
        let mut buf = Vec::new();
        write_bench_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("calculus,pool,n,density,solver,seed,verdict,wall_ms,refinements,fill_edges\n"));
        assert_eq!(text.lines().count(), rows.len() + 1);
    }

    #[test]
    fn runs_are_repeatable() {
        let a = run_bench(&cfg(vec![0.3])).unwrap();
        let b = run_bench(&cfg(vec![0.3])).unwrap();
        let strip = |rows: &[BenchRow]| rows.iter().map(|r| (r.seed, r.solver, r.verdict, r.refinements)).collect::<Vec<_>>();
        assert_eq!(strip(&a), strip(&b));
    }
}
