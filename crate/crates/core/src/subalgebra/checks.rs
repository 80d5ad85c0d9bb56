use crate::calculi::product_relation;
use crate::calculus::Calculus;
use crate::error::{Error, Result};
use crate::relation::Relation;
use crate::relset::RelationSet;

/// Which distributivity equation a witness breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `R ⋄ (S ∩ T) ≠ (R ⋄ S) ∩ (R ⋄ T)`
    Left,
    /// `(S ∩ T) ⋄ R ≠ (S ⋄ R) ∩ (T ⋄ R)`
    Right,
}

/// A counterexample to distributivity: `S ∩ T ≠ ∅` and `lhs ≠ rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistributivityWitness {
    pub r: Relation,
    pub s: Relation,
    pub t: Relation,
    pub side: Side,
    pub lhs: Relation,
    pub rhs: Relation,
}

impl DistributivityWitness {
    pub fn describe(&self, calc: &Calculus) -> String {
        let f = |r: &Relation| format!("{{{}}}", calc.format_relation(r));
        let (l, rr) = match self.side {
            Side::Left => ("R⋄(S∩T)", "(R⋄S)∩(R⋄T)"),
            Side::Right => ("(S∩T)⋄R", "(S⋄R)∩(T⋄R)"),
        };
        format!(
            "R={} S={} T={}: {l}={} but {rr}={}",
            f(&self.r),
            f(&self.s),
            f(&self.t),
            f(&self.lhs),
            f(&self.rhs)
        )
    }
}

/// Outcome of [`is_helly`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HellyCheck {
    pub holds: bool,
    /// Pairwise-intersecting triple with empty common intersection.
    pub witness: Option<[Relation; 3]>,
}

/// Outcome of [`is_distributive`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistributivityCheck {
    pub holds: bool,
    pub witness: Option<DistributivityWitness>,
}

/// Relations sorted the way they are printed, so witnesses are stable and
/// small relations are tried first.
fn canonical_order(set: &RelationSet) -> Vec<Relation> {
    let mut v: Vec<Relation> = set.iter().copied().collect();
    v.sort_by_key(|r| (r.len(), r.iter().map(|a| a.0).collect::<Vec<_>>()));
    v
}

/// Helly test over all triples of distinct members.
pub fn is_helly(set: &RelationSet) -> HellyCheck {
    let v = canonical_order(set);
    for (i, a) in v.iter().enumerate() {
        for (j, b) in v.iter().enumerate().skip(i + 1) {
            if !a.intersects(b) {
                continue;
            }
            let ab = *a & *b;
            for c in &v[j + 1..] {
                if a.intersects(c) && b.intersects(c) && !ab.intersects(c) {
                    return HellyCheck { holds: false, witness: Some([*a, *b, *c]) };
                }
            }
        }
    }
    HellyCheck { holds: true, witness: None }
}

/// Checks both distributivity equations at one triple.
pub fn distributivity_witness_at(
    calc: &Calculus,
    r: &Relation,
    s: &Relation,
    t: &Relation,
) -> Option<DistributivityWitness> {
    let st = *s & *t;
    if st.is_empty() {
        return None;
    }
    let lhs = calc.compose(r, &st);
    let rhs = calc.compose(r, s) & calc.compose(r, t);
    if lhs != rhs {
        return Some(DistributivityWitness { r: *r, s: *s, t: *t, side: Side::Left, lhs, rhs });
    }
    let lhs = calc.compose(&st, r);
    let rhs = calc.compose(s, r) & calc.compose(t, r);
    if lhs != rhs {
        return Some(DistributivityWitness { r: *r, s: *s, t: *t, side: Side::Right, lhs, rhs });
    }
    None
}

/// Distributivity of composition over nonempty intersections, both sides.
pub fn is_distributive(calc: &Calculus, set: &RelationSet) -> Result<DistributivityCheck> {
    set.require_subalgebra(calc)?;
    let v = canonical_order(set);
    for (i, s) in v.iter().enumerate() {
        for t in &v[i + 1..] {
            if !s.intersects(t) {
                continue;
            }
            for r in &v {
                if let Some(w) = distributivity_witness_at(calc, r, s, t) {
                    return Ok(DistributivityCheck { holds: false, witness: Some(w) });
                }
            }
        }
    }
    Ok(DistributivityCheck { holds: true, witness: None })
}

/// True iff the Helly and distributivity tests agree on `set`.
pub fn helly_equals_distributive_check(calc: &Calculus, set: &RelationSet) -> Result<bool> {
    let d = is_distributive(calc, set)?;
    Ok(is_helly(set).holds == d.holds)
}

/// `S1 ⊗ S2 = {R ⊗ S : R ∈ S1, S ∈ S2}` over the product calculus `prod`.
pub fn product_subalgebra(prod: &Calculus, s1: &RelationSet, s2: &RelationSet) -> Result<RelationSet> {
    let (c1, c2) = prod
        .factors()
        .ok_or_else(|| Error::InvalidArgument(format!("{} is not a product calculus", prod.name())))?;
    s1.require_subalgebra(c1)?;
    s2.require_subalgebra(c2)?;
    let mut out = Vec::with_capacity(s1.len() * s2.len());
    for r in s1 {
        for s in s2 {
            out.push(product_relation(prod, r, s)?);
        }
    }
    Ok(out.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculi;
    use crate::subalgebra::closure;

    fn pa_set(rels: &[&[&str]]) -> RelationSet {
        let pa = calculi::pa();
        rels.iter().map(|r| pa.rel_from_atoms(r).unwrap()).collect()
    }

    #[test]
    fn helly_witness_in_pa() {
        let pa = calculi::pa();
        let s = pa_set(&[&["<"], &["="], &[">"], &["<", "=", ">"], &["<", "="], &["=", ">"], &["<", ">"]]);
        let check = is_helly(&s);
        assert!(!check.holds);
        let mut w = check.witness.unwrap().to_vec();
        w.sort();
        let mut expected = vec![
            pa.rel_from_atoms(&["<", "="]).unwrap(),
            pa.rel_from_atoms(&["=", ">"]).unwrap(),
            pa.rel_from_atoms(&["<", ">"]).unwrap(),
        ];
        expected.sort();
        assert_eq!(w, expected);
        assert!(is_helly(&pa_set(&[&["<"], &[">"]])).holds);
    }

    #[test]
    fn full_pa_is_not_distributive() {
        let pa = calculi::pa();
        let all = RelationSet::all(&pa).unwrap();
        let check = is_distributive(&pa, &all).unwrap();
        let w = check.witness.unwrap();
        assert!(!(w.s & w.t).is_empty());
        assert_ne!(w.lhs, w.rhs);
        // the textbook witness is genuine too
        let ne = pa.rel_from_atoms(&["<", ">"]).unwrap();
        let le = pa.rel_from_atoms(&["<", "="]).unwrap();
        let ge = pa.rel_from_atoms(&["=", ">"]).unwrap();
        let w = distributivity_witness_at(&pa, &ne, &le, &ge).unwrap();
        assert_eq!(w.lhs, ne);
        assert_eq!(w.rhs, pa.universal());
        assert!(helly_equals_distributive_check(&pa, &all).unwrap());
    }

    #[test]
    fn distributivity_requires_subalgebra() {
        let pa = calculi::pa();
        let s = pa_set(&[&["<"], &["="], &[">"], &["<", "="]]);
        assert!(matches!(is_distributive(&pa, &s), Err(Error::NotASubalgebra(_))));
    }

    #[test]
    fn bhat_is_distributive() {
        for calc in [calculi::pa(), calculi::ia(), calculi::rcc5(), calculi::rcc8(), calculi::cra()] {
            let bhat = closure(&calc, &RelationSet::new(), None).unwrap();
            assert!(is_distributive(&calc, &bhat).unwrap().holds, "{}", calc.name());
            assert!(is_helly(&bhat).holds);
        }
    }

    #[test]
    fn product_of_convex_pa() {
        let cra = calculi::cra();
        let pa = calculi::pa();
        let c = pa_set(&[&["<"], &["="], &[">"], &["<", "=", ">"], &["<", "="], &["=", ">"]]);
        let p = product_subalgebra(&cra, &c, &c).unwrap();
        assert_eq!(p.len(), 36);
        assert!(p.is_subalgebra(&cra));
        assert!(is_distributive(&cra, &p).unwrap().holds);
        let bhat = closure(&pa, &RelationSet::new(), None).unwrap();
        let bb = product_subalgebra(&cra, &bhat, &bhat).unwrap();
        assert!(bb.is_subset(&p));
    }
}
