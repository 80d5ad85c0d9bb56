use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::network::{enforce_pc, random_qcn, Propagator, Qcn, SolveOutcome, Verdict};
use crate::relset::RelationSet;

use super::graph::{triangulate, ChordalStructure, ConstraintGraph, Heuristic};

/// Path consistency restricted to the triangles of a chordal cover. Only
/// entries on edges of `cs` change.
pub fn enforce_ppc(q: &Qcn, cs: &ChordalStructure) -> Result<SolveOutcome> {
    let start = Instant::now();
    if cs.graph.n() != q.n() {
        return Err(Error::InvalidArgument(format!(
            "graph has {} vertices, network has {}",
            cs.graph.n(),
            q.n()
        )));
    }
    if let Some((i, j)) = q.constraint_edges().into_iter().find(|&(i, j)| !cs.graph.has_edge(i, j)) {
        return Err(Error::EdgeCoverViolation(i, j));
    }
    let mut work = q.clone();
    let adj: Vec<Vec<usize>> = (0..q.n()).map(|v| cs.graph.neighbours(v).iter().copied().collect()).collect();
    let mut prop = Propagator::on_graph(adj);
    let ok = !work.has_empty_entry() && {
        for (i, j) in cs.graph.edges() {
            prop.push(i, j);
        }
        prop.run(&mut work)
    };
    let mut stats = prop.stats;
    stats.wall = start.elapsed();
    Ok(SolveOutcome {
        verdict: if ok { Verdict::Consistent } else { Verdict::Inconsistent },
        refined: ok.then_some(work),
        scenario: None,
        stats,
    })
}

/// First common edge where the PPC and full-PC refinements of `q` differ,
/// as `(i, j, ppc entry, pc entry)`. `None` when they agree everywhere on
/// the cover, or both report inconsistency.
pub fn ppc_pc_difference(
    q: &Qcn,
    cs: &ChordalStructure,
) -> Result<Option<(usize, usize, crate::Relation, crate::Relation)>> {
    let ppc = enforce_ppc(q, cs)?;
    let pc = enforce_pc(q);
    match (ppc.refined, pc.refined) {
        (Some(a), Some(b)) => Ok(cs
            .graph
            .edges()
            .into_iter()
            .find(|&(i, j)| a.get(i, j) != b.get(i, j))
            .map(|(i, j)| (i, j, a.get(i, j), b.get(i, j)))),
        (None, None) => Ok(None),
        (a, _) => Err(Error::VerdictMismatch(format!(
            "PPC says {}, PC says {}",
            if a.is_some() { "consistent" } else { "inconsistent" },
            pc.verdict
        ))),
    }
}

/// Random search for a network whose PPC and PC refinements agree on the
/// verdict but differ on a common edge. Useful over non-distributive pools
/// only.
pub fn search_ppc_gap(
    calc: &std::sync::Arc<crate::Calculus>,
    pool: &RelationSet,
    n: usize,
    density: f64,
    seed: u64,
    attempts: usize,
) -> Result<Option<Qcn>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..attempts {
        let q = random_qcn(calc, n, density, pool, rng.gen())?;
        let cs = triangulate(&ConstraintGraph::of_network(&q), Heuristic::MinFill);
        match ppc_pc_difference(&q, &cs) {
            Ok(Some(_)) => return Ok(Some(q)),
            Ok(None) | Err(Error::VerdictMismatch(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}
