use std::collections::BTreeSet;
use std::time::Instant;

use super::{Qcn, SolveOutcome, SolveStats, Verdict};

/// Pair worklist for the path-consistency rule. Pairs are stored as
/// `(i, j)` with `i < j` and popped smallest first.
///
/// With a graph attached, only triangles of that graph are visited.
pub(crate) struct Propagator {
    queue: BTreeSet<(usize, usize)>,
    graph: Option<(Vec<Vec<usize>>, Vec<bool>)>,
    pub(crate) stats: SolveStats,
}

impl Propagator {
    pub(crate) fn new() -> Self {
        Propagator { queue: BTreeSet::new(), graph: None, stats: SolveStats::default() }
    }

    /// Restricts propagation to triangles whose three edges are in `adj`.
    pub(crate) fn on_graph(adj: Vec<Vec<usize>>) -> Self {
        let n = adj.len();
        let mut mask = vec![false; n * n];
        for (i, a) in adj.iter().enumerate() {
            for &j in a {
                mask[i * n + j] = true;
            }
        }
        Propagator { queue: BTreeSet::new(), graph: Some((adj, mask)), stats: SolveStats::default() }
    }

    pub(crate) fn push(&mut self, i: usize, j: usize) {
        self.queue.insert(if i < j { (i, j) } else { (j, i) });
    }

    pub(crate) fn push_all(&mut self, q: &Qcn) {
        for p in q.pairs() {
            self.queue.insert(p);
        }
    }

    /// Runs to a fixpoint. Returns `false` as soon as an entry empties.
    pub(crate) fn run(&mut self, q: &mut Qcn) -> bool {
        let calc = q.calculus().clone();
        let n = q.n();
        let mut thirds: Vec<usize> = Vec::with_capacity(n);
        while let Some((i, j)) = self.queue.pop_first() {
            self.stats.queue_ops += 1;
            thirds.clear();
            match &self.graph {
                None => thirds.extend((0..n).filter(|&k| k != i && k != j)),
                Some((adj, mask)) => thirds.extend(adj[i].iter().copied().filter(|&k| k != j && mask[j * n + k])),
            }
            let rij = q.get(i, j);
            for &k in &thirds {
                // R_ik ⊆ R_ij ⋄ R_jk
                let old = q.get(i, k);
                let new = old & calc.compose(&rij, &q.get(j, k));
                if new != old {
                    q.set_unchecked(i, k, new);
                    self.stats.refinements += 1;
                    if new.is_empty() {
                        return false;
                    }
                    self.push(i, k);
                }
                // R_kj ⊆ R_ki ⋄ R_ij
                let old = q.get(k, j);
                let new = old & calc.compose(&q.get(k, i), &rij);
                if new != old {
                    q.set_unchecked(k, j, new);
                    self.stats.refinements += 1;
                    if new.is_empty() {
                        return false;
                    }
                    self.push(k, j);
                }
            }
        }
        true
    }
}

/// Enforces path consistency with the rule `R_ij ← R_ij ∩ (R_ik ⋄ R_kj)`.
pub fn enforce_pc(n: &Qcn) -> SolveOutcome {
    let start = Instant::now();
    let mut q = n.clone();
    let mut prop = Propagator::new();
    let ok = !q.has_empty_entry() && {
        prop.push_all(&q);
        prop.run(&mut q)
    };
    let mut stats = prop.stats;
    stats.wall = start.elapsed();
    SolveOutcome {
        verdict: if ok { Verdict::Consistent } else { Verdict::Inconsistent },
        refined: ok.then_some(q),
        scenario: None,
        stats,
    }
}

/// `∅ ≠ R_ij ⊆ R_ik ⋄ R_kj` for all distinct `i, j, k`.
pub fn is_path_consistent(q: &Qcn) -> bool {
    let calc = q.calculus();
    let n = q.n();
    if q.has_empty_entry() {
        return false;
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let rij = q.get(i, j);
            for k in 0..n {
                if k != i && k != j && !rij.is_subset(&calc.compose(&q.get(i, k), &q.get(k, j))) {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculi;

    fn pa_net(edges: &[(usize, usize, &[&str])], n: usize) -> Qcn {
        let mut q = Qcn::new(calculi::pa(), n);
        for &(i, j, atoms) in edges {
            q.set_atoms(i, j, atoms).unwrap();
        }
        q
    }

    #[test]
    fn chain_refines_to_less() {
        let q = pa_net(&[(0, 1, &["<"]), (1, 2, &["<"])], 3);
        assert!(!is_path_consistent(&q));
        let out = enforce_pc(&q);
        assert_eq!(out.verdict, Verdict::Consistent);
        let r = out.refined.unwrap();
        assert_eq!(r.get(0, 2), calculi::pa().rel_from_atoms(&["<"]).unwrap());
        assert!(is_path_consistent(&r));
        assert!(r.refines(&q));
    }

    #[test]
    fn cycle_is_inconsistent() {
        let q = pa_net(&[(0, 1, &["<"]), (1, 2, &["<"]), (2, 0, &["<"])], 3);
        let out = enforce_pc(&q);
        assert_eq!(out.verdict, Verdict::Inconsistent);
        assert!(out.refined.is_none());
    }

    #[test]
    fn fixpoint_is_stable() {
        let q = pa_net(&[(0, 1, &["<", "="]), (1, 2, &["<", "="]), (0, 2, &["<", "="])], 3);
        assert!(is_path_consistent(&q));
        let out = enforce_pc(&q);
        assert_eq!(out.refined.unwrap(), q);
        assert_eq!(out.stats.refinements, 0);
        assert!(is_path_consistent(&Qcn::new(calculi::ia(), 1)));
    }
}
