//! Subalgebras: closure, the Helly and distributivity tests, and maximal
//! distributive subalgebras.

mod checks;
mod closure;
mod enumerate;

use std::path::Path;

use crate::calculi::convex_relations;
use crate::calculus::Calculus;
use crate::error::{Error, Result};
use crate::relset::RelationSet;

pub use checks::{
    distributivity_witness_at, helly_equals_distributive_check, is_distributive, is_helly, product_subalgebra,
    DistributivityCheck, DistributivityWitness, HellyCheck, Side,
};
pub use closure::{closure, closure_cap_from_env, closure_helly, Growth, CLOSURE_CAP_ENV, DEFAULT_CLOSURE_CAP};
pub use enumerate::{
    enumerate_maximal_distributive, maximal_report, validate_by_sampling, MaximalReport, Method,
    BRUTE_FORCE_MAX_ATOMS, PRODUCT_CLOSURE_SAMPLES, PRODUCT_HELLY_SAMPLES,
};

/// Resolves a subalgebra name for `calc`.
///
/// * `ALL`: every nonempty relation (calculi with at most 20 atoms).
/// * `BHAT`: closure of the atoms.
/// * `CONVEX`: the order-interval relations (calculi with a neighbourhood
///   order).
/// * `MAX<k>`: the k-th maximal distributive subalgebra, counting from 0.
/// * `CPA`, `SPA`, `CIA`, `SIA`: the two maximal subalgebras of PA and IA.
/// * `D841`, `D514`: the maximal subalgebras of RCC8 and RCC5 with 41 and
///   14 relations.
/// * anything else is read as a relation-set file.
pub fn named_subalgebra(calc: &Calculus, name: &str) -> Result<RelationSet> {
    let upper = name.trim().to_ascii_uppercase();
    let want = |calc_name: &str| -> Result<()> {
        if calc.name().eq_ignore_ascii_case(calc_name) {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("subalgebra {name} belongs to {calc_name}, not {}", calc.name())))
        }
    };
    let nth_max = |k: usize| -> Result<RelationSet> {
        let m = enumerate_maximal_distributive(calc)?;
        m.get(k)
            .cloned()
            .ok_or_else(|| Error::InvalidArgument(format!("{} has {} maximal subalgebras", calc.name(), m.len())))
    };
    let by_size = |size: usize| -> Result<RelationSet> {
        enumerate_maximal_distributive(calc)?
            .into_iter()
            .find(|m| m.len() == size)
            .ok_or_else(|| Error::InvalidArgument(format!("no maximal subalgebra of {} has {size} relations", calc.name())))
    };
    match upper.as_str() {
        "ALL" => RelationSet::all(calc),
        "BHAT" => closure(calc, &RelationSet::new(), None),
        "CONVEX" => convex_relations(calc),
        "CPA" | "SPA" => {
            want("PA")?;
            nth_max(usize::from(upper == "SPA"))
        }
        "CIA" | "SIA" => {
            want("IA")?;
            nth_max(usize::from(upper == "SIA"))
        }
        "D841" => {
            want("RCC8")?;
            by_size(41)
        }
        "D514" => {
            want("RCC5")?;
            by_size(14)
        }
        s if s.starts_with("MAX") && s.len() > 3 && s[3..].chars().all(|c| c.is_ascii_digit()) => {
            nth_max(s[3..].parse().map_err(|_| Error::InvalidArgument(name.to_string()))?)
        }
        _ => {
            let path = Path::new(name);
            if !path.exists() {
                return Err(Error::InvalidArgument(format!("unknown subalgebra `{name}` (no such file)")));
            }
            RelationSet::parse(calc, &std::fs::read_to_string(path)?)
        }
    }
}
