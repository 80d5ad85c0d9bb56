//! Dimension, convexity and pre-convexity over a conceptual neighbourhood
//! order.

use crate::calculus::{Calculus, CngOrder};
use crate::error::{Error, Result};
use crate::relation::Relation;
use crate::relset::RelationSet;

fn cng_of(calc: &Calculus) -> Result<&CngOrder> {
    calc.cng().ok_or_else(|| Error::NoCngOrder(calc.name().to_string()))
}

/// Largest atom dimension in `r`.
pub fn dimension(calc: &Calculus, r: &Relation) -> Result<u8> {
    let dims = calc
        .dimension_map()
        .ok_or_else(|| Error::NoDimensionMap(calc.name().to_string()))?;
    if r.is_empty() {
        return Err(Error::EmptyRelation);
    }
    if !calc.owns(r) {
        return Err(Error::CalculusMismatch(calc.name().to_string()));
    }
    Ok(r.iter().map(|a| dims[a.index()]).max().unwrap_or(0))
}

/// Every nonempty order interval `[lo, hi]` of the CNG order.
pub fn convex_relations(calc: &Calculus) -> Result<RelationSet> {
    let cng = cng_of(calc)?;
    let mut out = Vec::new();
    for lo in calc.atoms() {
        for hi in cng.up_set(lo).iter() {
            out.push(cng.interval(lo, hi));
        }
    }
    Ok(out.into_iter().collect())
}

/// Smallest convex relation containing `r`: the intersection of every order
/// interval that covers it.
pub fn convex_hull(calc: &Calculus, r: &Relation) -> Result<Relation> {
    let cng = cng_of(calc)?;
    if r.is_empty() {
        return Err(Error::EmptyRelation);
    }
    if !calc.owns(r) {
        return Err(Error::CalculusMismatch(calc.name().to_string()));
    }
    let universe = calc.universal();
    let mut lower = universe;
    let mut upper = universe;
    for a in r.iter() {
        lower &= cng.down_set(a);
        upper &= cng.up_set(a);
    }
    if lower.is_empty() || upper.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "no order interval of {} covers the relation",
            calc.name()
        )));
    }
    let mut hull = universe;
    for lo in lower.iter() {
        hull &= cng.up_set(lo);
    }
    for hi in upper.iter() {
        hull &= cng.down_set(hi);
    }
    Ok(hull)
}

/// `r` is its convex hull minus atoms of strictly lower dimension.
pub fn is_preconvex(calc: &Calculus, r: &Relation) -> Result<bool> {
    let dim = dimension(calc, r)?;
    let hull = convex_hull(calc, r)?;
    let dims = calc.dimension_map().expect("checked by dimension");
    Ok((hull - *r).iter().all(|a| dims[a.index()] < dim))
}
