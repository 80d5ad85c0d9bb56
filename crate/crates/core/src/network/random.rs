use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::calculus::Calculus;
use crate::error::{Error, Result};
use crate::relation::Relation;
use crate::relset::RelationSet;

use super::Qcn;

/// A random network: each pair `i < j` (in lexicographic order) is
/// constrained with probability `density` by a label drawn uniformly from
/// the non-universal members of `pool`.
pub fn random_qcn(calc: &Arc<Calculus>, n: usize, density: f64, pool: &RelationSet, seed: u64) -> Result<Qcn> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidArgument(format!("density {density} is outside [0, 1]")));
    }
    if pool.iter().any(|r| !calc.owns(r)) {
        return Err(Error::CalculusMismatch(calc.name().to_string()));
    }
    let u = calc.universal();
    let labels: Vec<Relation> = pool.iter().copied().filter(|r| *r != u).collect();
    if labels.is_empty() {
        return Err(Error::EmptyPool);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q = Qcn::new(calc.clone(), n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                let r = labels[rng.gen_range(0..labels.len())];
                q.set_unchecked(i, j, r);
            }
        }
    }
    Ok(q)
}
