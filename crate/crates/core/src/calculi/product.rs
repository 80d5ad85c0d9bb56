//! Product calculi: CRA = PA × PA and RA = IA × IA.
//!
//! Atom `(α, β)` has index `α * n₂ + β` and is named `α*β`. Converse and
//! composition act componentwise.

use std::sync::Arc;

use crate::calculus::{Calculus, CngOrder};
use crate::error::{Error, Result};
use crate::relation::{AtomId, Relation};

use super::ia::{classify_intervals, IA_ATOMS};

fn factors_of(prod: &Calculus) -> Result<(&Arc<Calculus>, &Arc<Calculus>)> {
    prod.factors()
        .ok_or_else(|| Error::InvalidArgument(format!("{} is not a product calculus", prod.name())))
}

/// All pairs of atoms `R ⊗ S` as atoms of a product with `n2` atoms in
/// its second factor.
fn tensor(r: &Relation, s: &Relation, n2: usize) -> Relation {
    let mut out = Relation::empty();
    for a in r.iter() {
        for b in s.iter() {
            out.insert(AtomId::from(a.index() * n2 + b.index()));
        }
    }
    out
}

/// The product calculus `c1 × c2`.
pub fn product(c1: &Arc<Calculus>, c2: &Arc<Calculus>, name: &str) -> Calculus {
    let (n1, n2) = (c1.atom_count(), c2.atom_count());
    let n = n1 * n2;
    let pair = |i: usize| (AtomId::from(i / n2), AtomId::from(i % n2));

    let mut names = Vec::with_capacity(n);
    let mut converse = Vec::with_capacity(n);
    for i in 0..n {
        let (a, b) = pair(i);
        names.push(format!("{}*{}", c1.atom_name(a), c2.atom_name(b)));
        converse.push(AtomId::from(c1.atom_converse(a).index() * n2 + c2.atom_converse(b).index()));
    }
    let mut table = Vec::with_capacity(n * n);
    for i in 0..n {
        let (a, b) = pair(i);
        for j in 0..n {
            let (a2, b2) = pair(j);
            table.push(tensor(&c1.atom_compose(a, a2), &c2.atom_compose(b, b2), n2));
        }
    }
    let identity = AtomId::from(c1.identity_atom().index() * n2 + c2.identity_atom().index());
    let mut calc = Calculus::from_table(name, names, converse, table, identity)
        .expect("product of valid calculi is structurally valid");

    if let (Some(d1), Some(d2)) = (c1.dimension_map(), c2.dimension_map()) {
        let dims = (0..n).map(|i| d1[i / n2] + d2[i % n2]).collect();
        calc = calc.with_dimension(dims).expect("dimension length");
    }
    if let (Some(o1), Some(o2)) = (c1.cng(), c2.cng()) {
        let mut covers = Vec::new();
        for &(lo, hi) in o1.covers() {
            for b in 0..n2 {
                covers.push((AtomId::from(lo.index() * n2 + b), AtomId::from(hi.index() * n2 + b)));
            }
        }
        for &(lo, hi) in o2.covers() {
            for a in 0..n1 {
                covers.push((AtomId::from(a * n2 + lo.index()), AtomId::from(a * n2 + hi.index())));
            }
        }
        let cng = CngOrder::new(n, covers).expect("product of partial orders");
        calc = calc.with_cng(cng).expect("cng size");
    }
    calc.with_factors(c1.clone(), c2.clone())
}

/// The product atom `(a, b)`.
pub fn product_atom(prod: &Calculus, a: AtomId, b: AtomId) -> Result<AtomId> {
    let (c1, c2) = factors_of(prod)?;
    if a.index() >= c1.atom_count() {
        return Err(Error::InvalidAtom(a.index()));
    }
    if b.index() >= c2.atom_count() {
        return Err(Error::InvalidAtom(b.index()));
    }
    Ok(AtomId::from(a.index() * c2.atom_count() + b.index()))
}

/// Inverse of [`product_atom`].
pub fn split_atom(prod: &Calculus, atom: AtomId) -> Result<(AtomId, AtomId)> {
    let (_, c2) = factors_of(prod)?;
    if atom.index() >= prod.atom_count() {
        return Err(Error::InvalidAtom(atom.index()));
    }
    let n2 = c2.atom_count();
    Ok((AtomId::from(atom.index() / n2), AtomId::from(atom.index() % n2)))
}

/// `R ⊗ S`: every pair of an atom of `r` with an atom of `s`.
pub fn product_relation(prod: &Calculus, r: &Relation, s: &Relation) -> Result<Relation> {
    let (c1, c2) = factors_of(prod)?;
    if !c1.owns(r) || !c2.owns(s) {
        return Err(Error::CalculusMismatch(prod.name().to_string()));
    }
    Ok(tensor(r, s, c2.atom_count()))
}

/// Projection of a product relation onto one axis (0 = first factor,
/// 1 = second).
pub fn project_relation(prod: &Calculus, r: &Relation, axis: usize) -> Result<Relation> {
    let (_, c2) = factors_of(prod)?;
    if axis > 1 {
        return Err(Error::InvalidArgument(format!("axis {axis} (expected 0 or 1)")));
    }
    if !prod.owns(r) {
        return Err(Error::CalculusMismatch(prod.name().to_string()));
    }
    let n2 = c2.atom_count();
    Ok(r.iter()
        .map(|a| AtomId::from(if axis == 0 { a.index() / n2 } else { a.index() % n2 }))
        .collect())
}

type Rect = ((i64, i64), (i64, i64));

fn classify_rects(p: Rect, q: Rect) -> AtomId {
    let x = classify_intervals(p.0, q.0).expect("nondegenerate");
    let y = classify_intervals(p.1, q.1).expect("nondegenerate");
    AtomId::from(x.index() * IA_ATOMS.len() + y.index())
}

/// Composition of two RA atoms computed from concrete rectangles: every
/// placement of three axis-parallel rectangles with corners on a 6×6 grid
/// is classified, and the relations realised between the outer pair are
/// collected.
pub fn rectangle_composition_oracle(alpha: AtomId, beta: AtomId) -> Result<Relation> {
    let n = IA_ATOMS.len() * IA_ATOMS.len();
    for a in [alpha, beta] {
        if a.index() >= n {
            return Err(Error::InvalidAtom(a.index()));
        }
    }
    let intervals: Vec<(i64, i64)> = (0..6).flat_map(|s| (s + 1..6).map(move |e| (s, e))).collect();
    let rects: Vec<Rect> = intervals
        .iter()
        .flat_map(|&x| intervals.iter().map(move |&y| (x, y)))
        .collect();
    let mut out = Relation::empty();
    for &y in &rects {
        let lefts: Vec<Rect> = rects.iter().copied().filter(|&x| classify_rects(x, y) == alpha).collect();
        if lefts.is_empty() {
            continue;
        }
        for &z in rects.iter().filter(|&&z| classify_rects(y, z) == beta) {
            for &x in &lefts {
                out.insert(classify_rects(x, z));
            }
        }
    }
    Ok(out)
}
