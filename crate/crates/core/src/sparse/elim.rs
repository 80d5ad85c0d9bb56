use std::collections::BTreeSet;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::network::{
    enforce_pc, extend_variable, extract_scenario_distributive, is_path_consistent, Propagator, Qcn, Scenario, SolveOutcome,
    SolveStats, Verdict,
};
use crate::relation::Relation;

/// What was known about a variable when it was removed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationRecord {
    pub vertex: usize,
    pub neighbours: Vec<usize>,
    /// `R_{vertex, neighbours[t]}` at removal time.
    pub constraints: Vec<Relation>,
}

/// How [`eliminate_variables`] picks the next vertex.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum EliminationOrder {
    /// Current minimum degree, smallest index on ties.
    #[default]
    MinDegree,
    /// This sequence, stopping once two variables remain.
    Given(Vec<usize>),
}

/// Output of [`eliminate_variables`].
#[derive(Debug, Clone)]
pub struct Elimination {
    /// `refined` holds the working network: entries among the residual
    /// variables are final, the rest are as they stood when removed.
    pub outcome: SolveOutcome,
    /// In elimination order.
    pub records: Vec<EliminationRecord>,
    /// Variables left at the end, ascending.
    pub residual: Vec<usize>,
    /// Edges created by the neighbour updates.
    pub fill_edges: usize,
}

/// Removes variables one at a time. Before `v` goes, every pair of its
/// neighbours is tightened with `R_ij ∩ (R_iv ⋄ R_vj)`. Stops at two
/// variables or at the first empty entry. If a [`EliminationOrder::Given`]
/// sequence runs out earlier, the remaining variables are made path
/// consistent.
pub fn eliminate_variables(q: &Qcn, order: &EliminationOrder) -> Result<Elimination> {
    let start = Instant::now();
    let n = q.n();
    if let EliminationOrder::Given(seq) = order {
        let mut seen = vec![false; n];
        for &v in seq {
            if v >= n {
                return Err(Error::IndexOutOfRange { index: v, n });
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidArgument(format!("vertex {v} appears twice in the order")));
            }
        }
    }
    let calc = q.calculus().clone();
    let u = calc.universal();
    let mut w = q.clone();
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for (i, j) in q.constraint_edges() {
        adj[i].insert(j);
        adj[j].insert(i);
    }
    let mut alive: BTreeSet<usize> = (0..n).collect();
    let mut records = Vec::new();
    let mut stats = SolveStats::default();
    let mut fill_edges = 0;
    let mut consistent = !q.has_empty_entry();
    let mut step = 0;
    while consistent && alive.len() > 2 {
        let v = match order {
            EliminationOrder::MinDegree => *alive.iter().min_by_key(|&&v| adj[v].len()).expect("nonempty"),
            EliminationOrder::Given(seq) => match seq.get(step) {
                Some(&v) => v,
                None => break,
            },
        };
        step += 1;
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        'pairs: for (a, &i) in nb.iter().enumerate() {
            for &j in &nb[a + 1..] {
                stats.queue_ops += 1;
                let old = w.get(i, j);
                let new = old & calc.compose(&w.get(i, v), &w.get(v, j));
                if new != old {
                    stats.refinements += 1;
                    w.set_unchecked(i, j, new);
                    if new.is_empty() {
                        consistent = false;
                        break 'pairs;
                    }
                    if old == u && adj[i].insert(j) {
                        adj[j].insert(i);
                        fill_edges += 1;
                    }
                }
            }
        }
        records.push(EliminationRecord {
            vertex: v,
            constraints: nb.iter().map(|&i| w.get(v, i)).collect(),
            neighbours: nb,
        });
        for (i, a) in adj.iter_mut().enumerate() {
            if i != v {
                a.remove(&v);
            }
        }
        adj[v].clear();
        alive.remove(&v);
    }
    if consistent && alive.len() > 2 {
        // a short explicit order leaves a larger residual; settle it by PC
        let residual: Vec<usize> = alive.iter().copied().collect();
        let out = enforce_pc(&w.restrict(&residual)?);
        stats.absorb(&out.stats);
        match out.refined {
            None => consistent = false,
            Some(r) => {
                for (a, b) in r.pairs() {
                    w.set_unchecked(residual[a], residual[b], r.get(a, b));
                }
            }
        }
    }
    stats.wall = start.elapsed();
    Ok(Elimination {
        outcome: SolveOutcome {
            verdict: if consistent { Verdict::Consistent } else { Verdict::Inconsistent },
            refined: consistent.then_some(w),
            scenario: None,
            stats,
        },
        records,
        residual: alive.into_iter().collect(),
        fill_edges,
    })
}

/// Rebuilds a scenario of the whole network from a scenario of the
/// residual variables (numbered in `elim.residual` order).
///
/// Variables return in reverse elimination order. Each one is first
/// joined to the placed variables by its recorded constraints (universal
/// to non-neighbours) and propagated, which fixes its relations to the
/// non-neighbours through the placed scenario; the atoms are then chosen
/// by the same construction as [`extract_scenario_distributive`].
pub fn reconstruct_scenario(elim: &Elimination, base: &Scenario) -> Result<Scenario> {
    let Some(w) = elim.outcome.refined.as_ref() else {
        return Err(Error::InvalidArgument("cannot reconstruct an inconsistent network".into()));
    };
    if base.n() != elim.residual.len() {
        return Err(Error::InvalidArgument(format!(
            "base scenario has {} variables, residual has {}",
            base.n(),
            elim.residual.len()
        )));
    }
    let calc = w.calculus().clone();
    let n = w.n();
    let mut out = Qcn::new(calc.clone(), n);
    let mut placed: Vec<usize> = elim.residual.clone();
    for a in 0..placed.len() {
        for b in a + 1..placed.len() {
            out.set_unchecked(placed[a], placed[b], Relation::singleton(base.atom(a, b)));
        }
    }
    for rec in elim.records.iter().rev() {
        let k = placed.len();
        let mut local = Qcn::new(calc.clone(), k + 1);
        for a in 0..k {
            for b in a + 1..k {
                local.set_unchecked(a, b, out.get(placed[a], placed[b]));
            }
        }
        for (t, &p) in placed.iter().enumerate() {
            if let Some(pos) = rec.neighbours.iter().position(|&x| x == p) {
                local.set_unchecked(k, t, rec.constraints[pos]);
            }
        }
        let mut prop = Propagator::new();
        for t in 0..k {
            prop.push(t, k);
        }
        if !prop.run(&mut local) {
            return Err(Error::ConstructionFailure(format!("variable {} cannot rejoin the scenario", rec.vertex)));
        }
        for a in 0..k {
            for b in a + 1..k {
                if local.get(a, b) != out.get(placed[a], placed[b]) {
                    return Err(Error::ConstructionFailure(format!(
                        "re-inserting variable {} changes the placed scenario",
                        rec.vertex
                    )));
                }
            }
        }
        let row: Vec<Relation> = (0..k).map(|t| local.get(k, t)).collect();
        let local_ids: Vec<usize> = (0..k).collect();
        let atoms = extend_variable(&calc, &row, &local_ids, |a, b| {
            local.get(a, b).first().expect("placed pair is atomic")
        })?;
        for (&p, a) in placed.iter().zip(atoms) {
            out.set_unchecked(rec.vertex, p, Relation::singleton(a));
        }
        placed.push(rec.vertex);
    }
    if placed.len() != n {
        return Err(Error::InvalidArgument("elimination records do not cover every variable".into()));
    }
    if !is_path_consistent(&out) {
        return Err(Error::ConstructionFailure("the rebuilt scenario is not path consistent".into()));
    }
    Scenario::new(out)
}

/// Variable elimination followed by reconstruction. The residual scenario
/// comes from the extraction construction on the (at most two) remaining
/// variables.
pub fn solve_elimination(q: &Qcn, order: &EliminationOrder) -> Result<(Elimination, Option<Scenario>)> {
    let elim = eliminate_variables(q, order)?;
    let scenario = match &elim.outcome.refined {
        None => None,
        Some(w) => {
            let residual = w.restrict(&elim.residual)?;
            let base = extract_scenario_distributive(&residual, None)?;
            Some(reconstruct_scenario(&elim, &base)?)
        }
    };
    Ok((elim, scenario))
}
