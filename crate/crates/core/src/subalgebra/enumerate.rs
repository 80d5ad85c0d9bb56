//! Enumeration of maximal distributive subalgebras.
//!
//! Small calculi are searched by brute force over all relations. A relation
//! `R` outside `B̂` is a *d-candidate* when `⟨B̂ ∪ {R}⟩` is distributive
//! (tested as Helly, which is equivalent on subalgebras). Two paths:
//!
//! * clique path (PA, IA, RCC5, RCC8): candidates that pairwise generate a
//!   distributive closure must split into exactly two cliques;
//! * seed path (CRA): the distinct closures `⟨B̂ ∪ {R}⟩` are the seeds, the
//!   seeds contained in no other seed are the candidates, and three
//!   pairwise facts about unions of seeds certify the candidates maximal.
//!
//! Large product calculi (RA) are not searched; the products of the
//! factors' maximal subalgebras are built and validated directly.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::calculi::{self, convex_relations, project_relation};
use crate::calculus::Calculus;
use crate::error::{Error, Result};
use crate::relation::Relation;
use crate::relset::RelationSet;

use super::checks::{is_distributive, product_subalgebra};
use super::closure::{closure, closure_helly, Growth};

/// Largest atom count searched by brute force.
pub const BRUTE_FORCE_MAX_ATOMS: usize = 13;

/// Random Helly triples drawn per product subalgebra.
pub const PRODUCT_HELLY_SAMPLES: usize = 100_000;

/// Random operand pairs drawn per product subalgebra for the closure check.
pub const PRODUCT_CLOSURE_SAMPLES: usize = 5_000;

/// How the maximal subalgebras were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    TwoCliques,
    SeedCandidates,
    Products,
}

/// Everything computed while enumerating, for inspection and auditing.
#[derive(Debug, Clone)]
pub struct MaximalReport {
    pub calculus: String,
    pub method: Method,
    /// `⟨B⟩`, the closure of the atoms.
    pub bhat: RelationSet,
    /// Relations outside `B̂` whose single-relation closure is distributive.
    pub candidates: Vec<Relation>,
    /// Distinct distributive closures met during the search, including
    /// the single-relation closures and the pairwise ones.
    pub distributive_closures: Vec<RelationSet>,
    /// CRA-style seeds (empty on the other paths).
    pub seeds: Vec<RelationSet>,
    pub maximal: Vec<RelationSet>,
}

/// The maximal distributive subalgebras of `calc`.
pub fn enumerate_maximal_distributive(calc: &Calculus) -> Result<Vec<RelationSet>> {
    Ok(maximal_report(calc)?.maximal.clone())
}

fn is_builtin(calc: &Calculus) -> bool {
    calculi::by_name(calc.name())
        .map(|b| std::ptr::eq(&*b, calc))
        .unwrap_or(false)
}

/// Full report; results for the shared built-in calculi are computed once
/// per process.
pub fn maximal_report(calc: &Calculus) -> Result<Arc<MaximalReport>> {
    static CACHE: OnceLock<Mutex<HashMap<String, Arc<MaximalReport>>>> = OnceLock::new();
    if !is_builtin(calc) {
        return compute(calc).map(Arc::new);
    }
    let cache = CACHE.get_or_init(Default::default);
    if let Some(r) = cache.lock().unwrap().get(calc.name()) {
        return Ok(r.clone());
    }
    let report = Arc::new(compute(calc)?);
    cache.lock().unwrap().insert(calc.name().to_string(), report.clone());
    Ok(report)
}

fn compute(calc: &Calculus) -> Result<MaximalReport> {
    let n = calc.atom_count();
    match (n <= BRUTE_FORCE_MAX_ATOMS, calc.factors().is_some()) {
        (true, false) => two_cliques(calc),
        (true, true) => seed_candidates(calc),
        (false, true) => products(calc),
        (false, false) => Err(Error::InvalidArgument(format!(
            "{} has {n} atoms; brute-force enumeration handles at most {BRUTE_FORCE_MAX_ATOMS}",
            calc.name()
        ))),
    }
}

fn helly_closed(calc: &Calculus, seed: &[Relation]) -> Result<Option<RelationSet>> {
    Ok(closure_helly(calc, seed, None)?.into_closed())
}

/// `B̂` plus every relation `R ∉ B̂` with `⟨B̂ ∪ {R}⟩` distributive, paired
/// with that closure.
fn single_closures(calc: &Calculus) -> Result<(RelationSet, Vec<(Relation, RelationSet)>)> {
    let bhat = closure(calc, &RelationSet::new(), None)?;
    let base: Vec<Relation> = bhat.iter().copied().collect();
    let n = calc.atom_count();
    let found: Result<Vec<Option<(Relation, RelationSet)>>> = (1u64..(1u64 << n))
        .into_par_iter()
        .map(|bits| {
            let r = Relation::from_u64(bits);
            if bhat.contains(&r) {
                return Ok(None);
            }
            let mut seed = base.clone();
            seed.push(r);
            Ok(helly_closed(calc, &seed)?.map(|c| (r, c)))
        })
        .collect();
    Ok((bhat, found?.into_iter().flatten().collect()))
}

fn dedup_sets(sets: impl IntoIterator<Item = RelationSet>) -> Vec<RelationSet> {
    let mut v: Vec<RelationSet> = sets.into_iter().collect();
    v.sort_by(|a, b| a.as_slice().cmp(b.as_slice()));
    v.dedup();
    v
}

fn union_closure(calc: &Calculus, a: &RelationSet, b: &RelationSet) -> Result<Growth> {
    closure_helly(calc, a.iter().chain(b.iter()), None)
}

fn two_cliques(calc: &Calculus) -> Result<MaximalReport> {
    let (bhat, singles) = single_closures(calc)?;
    let k = singles.len();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
    let results: Result<Vec<Option<RelationSet>>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (ri, ci) = &singles[i];
            let (rj, cj) = &singles[j];
            // One relation already generates the other: the pair closure is the larger one.
            if ci.contains(rj) || cj.contains(ri) {
                return Ok(None);
            }
            Ok(union_closure(calc, ci, cj)?.into_closed())
        })
        .collect();
    let results = results?;
    let mut d = vec![vec![false; k]; k];
    let mut pair_closures = Vec::new();
    for (&(i, j), res) in pairs.iter().zip(results) {
        let related = if singles[i].1.contains(&singles[j].0) || singles[j].1.contains(&singles[i].0) {
            true
        } else if let Some(c) = res {
            pair_closures.push(c);
            true
        } else {
            false
        };
        d[i][j] = related;
        d[j][i] = related;
    }

    if k == 0 {
        return Err(Error::StructureViolation(format!(
            "{}: no relation extends B̂ distributively",
            calc.name()
        )));
    }
    let x: Vec<usize> = (0..k).filter(|&j| j == 0 || d[0][j]).collect();
    let y: Vec<usize> = (0..k).filter(|&j| j != 0 && !d[0][j]).collect();
    let clique = |part: &[usize]| part.iter().all(|&a| part.iter().all(|&b| a == b || d[a][b]));
    let separated = x.iter().all(|&a| y.iter().all(|&b| !d[a][b]));
    if y.is_empty() || !clique(&x) || !clique(&y) || !separated {
        return Err(Error::StructureViolation(format!(
            "{}: d-relation graph on {k} candidates is not two disjoint cliques",
            calc.name()
        )));
    }

    let mut maximal = Vec::with_capacity(2);
    for part in [&x, &y] {
        let seed: Vec<Relation> = bhat.iter().copied().chain(part.iter().map(|&i| singles[i].0)).collect();
        let closed = helly_closed(calc, &seed)?.ok_or_else(|| {
            Error::StructureViolation(format!("{}: a clique does not generate a distributive subalgebra", calc.name()))
        })?;
        maximal.push(closed);
    }
    order_pair(calc, &mut maximal)?;

    let candidates = singles.iter().map(|(r, _)| *r).collect();
    let distributive_closures =
        dedup_sets(singles.into_iter().map(|(_, c)| c).chain(pair_closures).chain(maximal.iter().cloned()));
    Ok(MaximalReport {
        calculus: calc.name().to_string(),
        method: Method::TwoCliques,
        bhat,
        candidates,
        distributive_closures,
        seeds: Vec::new(),
        maximal,
    })
}

/// Puts the subalgebra holding every convex relation first when the
/// calculus has a neighbourhood order; otherwise larger first, ties broken
/// by canonical text.
fn order_pair(calc: &Calculus, sets: &mut [RelationSet]) -> Result<()> {
    sort_by_size(calc, sets);
    if calc.cng().is_some() {
        let convex = convex_relations(calc)?;
        if let Some(pos) = sets.iter().position(|s| convex.is_subset(s)) {
            sets[..=pos].rotate_right(1);
        }
    }
    Ok(())
}

fn sort_by_size(calc: &Calculus, sets: &mut [RelationSet]) {
    sets.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.to_canonical(calc).cmp(&b.to_canonical(calc))));
}

/// Orders product subalgebras by the positions of their projections in the
/// factors' own maximal lists.
fn order_products(calc: &Calculus, sets: &mut Vec<RelationSet>) -> Result<()> {
    let (c1, c2) = calc.factors().expect("product calculus");
    let m1 = enumerate_maximal_distributive(c1)?;
    let m2 = enumerate_maximal_distributive(c2)?;
    let key = |s: &RelationSet| -> Result<(usize, usize)> {
        let px: RelationSet = s.iter().map(|r| project_relation(calc, r, 0)).collect::<Result<_>>()?;
        let py: RelationSet = s.iter().map(|r| project_relation(calc, r, 1)).collect::<Result<_>>()?;
        let ix = m1.iter().position(|m| *m == px).unwrap_or(usize::MAX);
        let iy = m2.iter().position(|m| *m == py).unwrap_or(usize::MAX);
        Ok((ix, iy))
    };
    let mut keyed: Vec<((usize, usize), RelationSet)> =
        sets.drain(..).map(|s| Ok((key(&s)?, s))).collect::<Result<_>>()?;
    keyed.sort_by_key(|a| a.0);
    sets.extend(keyed.into_iter().map(|(_, s)| s));
    Ok(())
}

fn seed_candidates(calc: &Calculus) -> Result<MaximalReport> {
    let (bhat, singles) = single_closures(calc)?;
    let candidates_rel: Vec<Relation> = singles.iter().map(|(r, _)| *r).collect();
    let seeds = dedup_sets(singles.into_iter().map(|(_, c)| c));
    let is_candidate: Vec<bool> = (0..seeds.len())
        .map(|i| !(0..seeds.len()).any(|j| j != i && seeds[i].is_subset(&seeds[j])))
        .collect();
    let cand: Vec<usize> = (0..seeds.len()).filter(|&i| is_candidate[i]).collect();
    let non: Vec<usize> = (0..seeds.len()).filter(|&i| !is_candidate[i]).collect();

    let fail = |msg: String| Error::StructureViolation(format!("{}: {msg}", calc.name()));
    let mut pair_closures = Vec::new();
    // Fact 1: two different candidates never combine distributively.
    for (a, &i) in cand.iter().enumerate() {
        for &j in &cand[a + 1..] {
            if union_closure(calc, &seeds[i], &seeds[j])?.is_closed() {
                return Err(fail(format!("candidates {i} and {j} combine distributively")));
            }
        }
    }
    // Fact 2: two non-candidates combine into a candidate or not at all.
    for (a, &i) in non.iter().enumerate() {
        for &j in &non[a + 1..] {
            if let Growth::Closed(c) = union_closure(calc, &seeds[i], &seeds[j])? {
                if !cand.iter().any(|&k| seeds[k] == c) {
                    return Err(fail(format!("seeds {i} and {j} combine into a non-candidate")));
                }
                pair_closures.push(c);
            }
        }
    }
    // Fact 3: a candidate absorbs no non-candidate it does not already contain.
    for &i in &cand {
        for &j in &non {
            if seeds[j].is_subset(&seeds[i]) {
                continue;
            }
            if union_closure(calc, &seeds[i], &seeds[j])?.is_closed() {
                return Err(fail(format!("candidate {i} extends distributively by seed {j}")));
            }
        }
    }
    let mut maximal: Vec<RelationSet> = cand.iter().map(|&i| seeds[i].clone()).collect();
    order_products(calc, &mut maximal)?;
    let distributive_closures = dedup_sets(seeds.iter().cloned().chain(pair_closures));
    Ok(MaximalReport {
        calculus: calc.name().to_string(),
        method: Method::SeedCandidates,
        bhat,
        candidates: candidates_rel,
        distributive_closures,
        seeds,
        maximal,
    })
}

fn products(calc: &Calculus) -> Result<MaximalReport> {
    let (c1, c2) = calc.factors().expect("product calculus");
    let m1 = enumerate_maximal_distributive(c1)?;
    let m2 = enumerate_maximal_distributive(c2)?;
    for (c, ms) in [(c1, &m1), (c2, &m2)] {
        for m in ms.iter() {
            if !is_distributive(c, m)?.holds {
                return Err(Error::StructureViolation(format!("{} factor set is not distributive", c.name())));
            }
        }
    }
    let mut maximal = Vec::new();
    for a in &m1 {
        for b in &m2 {
            let p = product_subalgebra(calc, a, b)?;
            validate_by_sampling(calc, &p, (maximal.len() as u64) + 1)?;
            maximal.push(p);
        }
    }
    let bhat = {
        let b1 = closure(c1, &RelationSet::new(), None)?;
        let b2 = closure(c2, &RelationSet::new(), None)?;
        product_subalgebra(calc, &b1, &b2)?
    };
    Ok(MaximalReport {
        calculus: calc.name().to_string(),
        method: Method::Products,
        bhat,
        candidates: Vec::new(),
        distributive_closures: maximal.clone(),
        seeds: Vec::new(),
        maximal,
    })
}

/// Randomised evidence that a large set is a Helly subalgebra: sampled
/// triples satisfy the Helly condition and sampled operands stay inside.
pub fn validate_by_sampling(calc: &Calculus, set: &RelationSet, seed: u64) -> Result<()> {
    let v = set.as_slice();
    if v.is_empty() {
        return Err(Error::NotASubalgebra("empty set".into()));
    }
    if !set.contains_all_atoms(calc) {
        return Err(Error::NotASubalgebra("missing a basic relation".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fail = |what: &str, rels: &[&Relation]| {
        let shown: Vec<String> = rels.iter().map(|r| format!("{{{}}}", calc.format_relation(r))).collect();
        Error::StructureViolation(format!("{}: sampled {what} fails at {}", calc.name(), shown.join(", ")))
    };
    for _ in 0..PRODUCT_HELLY_SAMPLES {
        let (a, b, c) = (&v[rng.gen_range(0..v.len())], &v[rng.gen_range(0..v.len())], &v[rng.gen_range(0..v.len())]);
        if a.intersects(b) && a.intersects(c) && b.intersects(c) && (*a & *b & *c).is_empty() {
            return Err(fail("Helly triple", &[a, b, c]));
        }
    }
    for _ in 0..PRODUCT_CLOSURE_SAMPLES {
        let (a, b) = (&v[rng.gen_range(0..v.len())], &v[rng.gen_range(0..v.len())]);
        if !set.contains(&calc.converse(a)) {
            return Err(fail("converse", &[a]));
        }
        let meet = *a & *b;
        if !meet.is_empty() && !set.contains(&meet) {
            return Err(fail("intersection", &[a, b]));
        }
        if !set.contains(&calc.compose(a, b)) {
            return Err(fail("composition", &[a, b]));
        }
    }
    Ok(())
}
