use std::collections::HashSet;
use std::time::Instant;

use crate::calculus::Calculus;
use crate::error::{Error, Result};
use crate::relation::{AtomId, Relation};
use crate::relset::RelationSet;

use super::pc::{enforce_pc, is_path_consistent, Propagator};
use super::{Qcn, Scenario, SolveOutcome, SolveStats, Verdict};

/// Default bound on the number of candidate labellings
/// [`enumerate_scenarios`] is willing to search.
pub const DEFAULT_ENUMERATION_GUARD: u128 = 10_000_000;

/// Places one new variable `v` against the variables in `placed`, whose
/// scenario is given by `delta`. `row[t]` is `R_{v, placed[t]}`.
///
/// First `R̂_{v,i} = ⋂_j R_{v,j} ⋄ δ_{j,i}` is computed for every placed
/// `i`; then `δ_{v,p₀}` is the lowest atom of `R̂_{v,p₀}` and each later
/// `δ_{v,p_{t}}` is the lowest atom of
/// `R̂_{v,p_t} ∩ ⋂_{s<t} δ_{v,p_s} ⋄ δ_{p_s,p_t}`.
pub(crate) fn extend_variable(
    calc: &Calculus,
    row: &[Relation],
    placed: &[usize],
    delta: impl Fn(usize, usize) -> AtomId,
) -> Result<Vec<AtomId>> {
    let k = placed.len();
    debug_assert_eq!(row.len(), k);
    let id = calc.identity_atom();
    let d = |a: usize, b: usize| if placed[a] == placed[b] { id } else { delta(placed[a], placed[b]) };
    let mut rhat = row.to_vec();
    for (i, slot) in rhat.iter_mut().enumerate() {
        for (j, rvj) in row.iter().enumerate() {
            if j != i {
                *slot &= calc.compose(rvj, &Relation::singleton(d(j, i)));
            }
        }
    }
    let mut chosen: Vec<AtomId> = Vec::with_capacity(k);
    for t in 0..k {
        let mut cand = rhat[t];
        for (s, &ds) in chosen.iter().enumerate() {
            cand &= calc.atom_compose(ds, d(s, t));
        }
        let atom = cand
            .first()
            .ok_or_else(|| Error::ConstructionFailure(format!("no atom left for the pair with variable {}", placed[t])))?;
        chosen.push(atom);
    }
    Ok(chosen)
}

/// Builds a scenario of a path-consistent network over a distributive
/// subalgebra, one variable at a time, without search.
///
/// With `pool` given, every entry must belong to it.
pub fn extract_scenario_distributive(q: &Qcn, pool: Option<&RelationSet>) -> Result<Scenario> {
    if let Some(pool) = pool {
        if let Some((i, j)) = q.pairs().find(|&(i, j)| !pool.contains(&q.get(i, j))) {
            return Err(Error::InvalidArgument(format!(
                "entry ({i}, {j}) = {{{}}} is not in the supplied subalgebra",
                q.calculus().format_relation(&q.get(i, j))
            )));
        }
    }
    if !is_path_consistent(q) {
        return Err(Error::NotPathConsistent);
    }
    let calc = q.calculus().clone();
    let mut out = Qcn::new(calc.clone(), q.n());
    let mut placed: Vec<usize> = Vec::with_capacity(q.n());
    for v in 0..q.n() {
        let row: Vec<Relation> = placed.iter().map(|&p| q.get(v, p)).collect();
        let atoms = extend_variable(&calc, &row, &placed, |a, b| out.get(a, b).first().expect("placed pair is atomic"))?;
        for (&p, a) in placed.iter().zip(atoms) {
            out.set_unchecked(v, p, Relation::singleton(a));
        }
        placed.push(v);
    }
    if !is_path_consistent(&out) {
        return Err(Error::ConstructionFailure("the assembled scenario is not path consistent".into()));
    }
    Scenario::new(out)
}

fn backtrack(q: Qcn, stats: &mut SolveStats) -> Option<Qcn> {
    let pick = q
        .pairs()
        .filter(|&(i, j)| q.get(i, j).len() > 1)
        .min_by_key(|&(i, j)| (q.get(i, j).len(), i, j));
    let Some((i, j)) = pick else {
        return Some(q);
    };
    for a in q.get(i, j).iter() {
        let mut child = q.clone();
        child.set_unchecked(i, j, Relation::singleton(a));
        let mut prop = Propagator::new();
        prop.push(i, j);
        let ok = prop.run(&mut child);
        stats.absorb(&prop.stats);
        if ok {
            if let Some(found) = backtrack(child, stats) {
                return Some(found);
            }
        } else {
            stats.backtracks += 1;
        }
    }
    None
}

/// Depth-first search over atoms with path consistency as look-ahead. An
/// atomic path-consistent network is taken to be consistent.
pub fn solve_backtrack(q: &Qcn) -> SolveOutcome {
    let start = Instant::now();
    let first = enforce_pc(q);
    let mut stats = first.stats;
    let (verdict, scenario) = match &first.refined {
        None => (Verdict::Inconsistent, None),
        Some(r) => match backtrack(r.clone(), &mut stats) {
            Some(s) => (Verdict::Consistent, Some(Scenario::new(s).expect("search ends on atomic networks"))),
            None => (Verdict::Inconsistent, None),
        },
    };
    stats.wall = start.elapsed();
    SolveOutcome { verdict, refined: first.refined, scenario, stats }
}

/// Order in which [`enumerate_scenarios_with`] visits pairs and atoms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Traversal {
    /// Pairs in lexicographic order, atoms ascending.
    #[default]
    Forward,
    /// Pairs in reverse lexicographic order, atoms descending.
    Reverse,
}

#[derive(Debug, Clone, Copy)]
pub struct EnumerateOptions {
    /// Stop after this many scenarios.
    pub limit: Option<usize>,
    /// Refuse networks with more candidate labellings than this.
    pub guard: Option<u128>,
    pub traversal: Traversal,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions { limit: None, guard: Some(DEFAULT_ENUMERATION_GUARD), traversal: Traversal::Forward }
    }
}

struct Enumerator<'a> {
    calc: &'a Calculus,
    q: &'a Qcn,
    pairs: Vec<(usize, usize)>,
    /// For step `t`, the third vertices whose two edges are assigned
    /// before `t`.
    closing: Vec<Vec<usize>>,
    cur: Vec<Option<AtomId>>,
    atoms_desc: bool,
    limit: usize,
    out: Vec<Scenario>,
}

impl Enumerator<'_> {
    fn atom(&self, i: usize, j: usize) -> AtomId {
        let n = self.q.n();
        if i == j {
            return self.calc.identity_atom();
        }
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        let x = self.cur[a * n + b].expect("assigned");
        if i < j {
            x
        } else {
            self.calc.atom_converse(x)
        }
    }

    fn triangle_ok(&self, i: usize, j: usize, k: usize) -> bool {
        let c = self.calc;
        let (ij, jk, ik) = (self.atom(i, j), self.atom(j, k), self.atom(i, k));
        c.atom_compose(ij, jk).contains(ik)
            && c.atom_compose(ik, self.atom(k, j)).contains(ij)
            && c.atom_compose(self.atom(j, i), ik).contains(jk)
    }

    fn dfs(&mut self, t: usize) {
        if self.out.len() >= self.limit {
            return;
        }
        let n = self.q.n();
        if t == self.pairs.len() {
            let mut s = Qcn::new(self.q.calculus().clone(), n);
            for &(i, j) in &self.pairs {
                s.set_unchecked(i, j, Relation::singleton(self.atom(i, j)));
            }
            self.out.push(Scenario::new(s).expect("complete assignment"));
            return;
        }
        let (i, j) = self.pairs[t];
        let mut atoms: Vec<AtomId> = self.q.get(i, j).iter().collect();
        if self.atoms_desc {
            atoms.reverse();
        }
        for a in atoms {
            self.cur[i * n + j] = Some(a);
            if self.closing[t].iter().all(|&k| self.triangle_ok(i, j, k)) {
                self.dfs(t + 1);
                if self.out.len() >= self.limit {
                    break;
                }
            }
        }
        self.cur[i * n + j] = None;
    }
}

/// All path-consistent atomic refinements of `q`, with default options.
pub fn enumerate_scenarios(q: &Qcn, limit: Option<usize>) -> Result<Vec<Scenario>> {
    enumerate_scenarios_with(q, &EnumerateOptions { limit, ..EnumerateOptions::default() })
}

/// Brute-force scenario enumeration. Every triangle is checked in all
/// three orientations once its last edge is assigned.
pub fn enumerate_scenarios_with(q: &Qcn, opts: &EnumerateOptions) -> Result<Vec<Scenario>> {
    let space = q.labelling_count();
    if let Some(g) = opts.guard {
        if space > g {
            return Err(Error::SearchSpaceTooLarge(space));
        }
    }
    if space == 0 {
        return Ok(Vec::new());
    }
    let n = q.n();
    let mut pairs: Vec<(usize, usize)> = q.pairs().collect();
    if opts.traversal == Traversal::Reverse {
        pairs.reverse();
    }
    let mut pos = vec![usize::MAX; n * n];
    for (t, &(i, j)) in pairs.iter().enumerate() {
        pos[i * n + j] = t;
        pos[j * n + i] = t;
    }
    let closing = pairs
        .iter()
        .enumerate()
        .map(|(t, &(i, j))| {
            (0..n)
                .filter(|&k| k != i && k != j && pos[i * n + k] < t && pos[j * n + k] < t)
                .collect()
        })
        .collect();
    let calc = q.calculus().clone();
    let mut e = Enumerator {
        calc: &calc,
        q,
        pairs,
        closing,
        cur: vec![None; n * n],
        atoms_desc: opts.traversal == Traversal::Reverse,
        limit: opts.limit.unwrap_or(usize::MAX),
        out: Vec::new(),
    };
    e.dfs(0);
    Ok(e.out)
}

/// Outcome of [`check_minimal`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Minimality {
    pub minimal: bool,
    /// `(i, j, atom)` with `i < j` for every atom no scenario uses.
    pub infeasible: Vec<(usize, usize, AtomId)>,
}

/// Checks that every atom of every entry occurs in some scenario.
pub fn check_minimal(q: &Qcn) -> Result<Minimality> {
    let space = q.labelling_count();
    if space > DEFAULT_ENUMERATION_GUARD {
        return Err(Error::SearchSpaceTooLarge(space));
    }
    let mut seen: HashSet<(usize, usize, AtomId)> = HashSet::new();
    let mut infeasible = Vec::new();
    for (i, j) in q.pairs() {
        for a in q.get(i, j).iter() {
            if seen.contains(&(i, j, a)) {
                continue;
            }
            let mut probe = q.clone();
            probe.set_unchecked(i, j, Relation::singleton(a));
            let found = match enforce_pc(&probe).refined {
                None => None,
                Some(r) => enumerate_scenarios(&r, Some(1))?.into_iter().next(),
            };
            match found {
                Some(s) => {
                    for (x, y) in q.pairs() {
                        seen.insert((x, y, s.atom(x, y)));
                    }
                }
                None => infeasible.push((i, j, a)),
            }
        }
    }
    Ok(Minimality { minimal: infeasible.is_empty(), infeasible })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculi;
    use crate::subalgebra::named_subalgebra;

    #[test]
    fn pa_two_variables_has_three_scenarios() {
        let q = Qcn::new(calculi::pa(), 2);
        assert_eq!(enumerate_scenarios(&q, None).unwrap().len(), 3);
        assert!(check_minimal(&q).unwrap().minimal);
    }

    #[test]
    fn ia_three_variables_both_orders_agree() {
        let q = Qcn::new(calculi::ia(), 3);
        let fwd: HashSet<Scenario> = enumerate_scenarios(&q, None).unwrap().into_iter().collect();
        let rev: HashSet<Scenario> = enumerate_scenarios_with(
            &q,
            &EnumerateOptions { traversal: Traversal::Reverse, ..Default::default() },
        )
        .unwrap()
        .into_iter()
        .collect();
        assert_eq!(fwd, rev);
        // every atomic labelling counted by an independent triple loop
        let ia = calculi::ia();
        let mut count = 0;
        for a in ia.atoms() {
            for b in ia.atoms() {
                count += ia.atom_compose(a, b).len();
            }
        }
        assert_eq!(fwd.len(), count);
    }

    #[test]
    fn guard_trips() {
        let q = Qcn::new(calculi::ia(), 8);
        assert!(matches!(enumerate_scenarios(&q, Some(1)), Err(Error::SearchSpaceTooLarge(_))));
        let opts = EnumerateOptions { limit: Some(1), guard: None, traversal: Traversal::Forward };
        assert_eq!(enumerate_scenarios_with(&q, &opts).unwrap().len(), 1);
    }

    #[test]
    fn extraction_on_pa_chain() {
        let pa = calculi::pa();
        let mut q = Qcn::new(pa.clone(), 3);
        for (i, j) in [(0, 1), (1, 2), (0, 2)] {
            q.set_atoms(i, j, &["<", "="]).unwrap();
        }
        let cpa = named_subalgebra(&pa, "CPA").unwrap();
        let s = extract_scenario_distributive(&q, Some(&cpa)).unwrap();
        assert!(s.as_qcn().refines(&q));
        assert!(is_path_consistent(s.as_qcn()));
        assert!(enumerate_scenarios(&q, None).unwrap().contains(&s));
    }

    #[test]
    fn extraction_rejects_non_pc_input() {
        let mut q = Qcn::new(calculi::pa(), 3);
        q.set_atoms(0, 1, &["<"]).unwrap();
        q.set_atoms(1, 2, &["<"]).unwrap();
        assert!(matches!(extract_scenario_distributive(&q, None), Err(Error::NotPathConsistent)));
    }

    #[test]
    fn basic_network_extracts_to_itself() {
        let mut q = Qcn::new(calculi::ia(), 3);
        q.set_atoms(0, 1, &["m"]).unwrap();
        q.set_atoms(1, 2, &["b"]).unwrap();
        q.set_atoms(0, 2, &["b"]).unwrap();
        let s = extract_scenario_distributive(&q, None).unwrap();
        assert_eq!(s.as_qcn(), &q);
        let out = solve_backtrack(&q);
        assert_eq!(out.scenario.unwrap().as_qcn(), &q);
    }

    #[test]
    fn backtracking_finds_cycle_inconsistent() {
        let mut q = Qcn::new(calculi::pa(), 3);
        for (i, j) in [(0, 1), (1, 2), (2, 0)] {
            q.set_atoms(i, j, &["<"]).unwrap();
        }
        assert_eq!(solve_backtrack(&q).verdict, Verdict::Inconsistent);
    }

    #[test]
    fn spurious_atom_is_reported() {
        let pa = calculi::pa();
        let mut q = Qcn::new(pa.clone(), 3);
        q.set_atoms(0, 1, &["<"]).unwrap();
        q.set_atoms(1, 2, &["<"]).unwrap();
        q.set_atoms(0, 2, &["<", "="]).unwrap();
        let m = check_minimal(&q).unwrap();
        assert!(!m.minimal);
        assert_eq!(m.infeasible, vec![(0, 2, pa.atom("=").unwrap())]);
    }
}
