//! RCC8 and its coarsening RCC5.
//!
//! RCC8 has no finite point model to enumerate, so its weak-composition
//! table is the standard published one, embedded as data. It is gated by
//! the relation-algebra axiom suite.

use crate::calculus::{Calculus, CngOrder};
use crate::error::{Error, Result};
use crate::relation::{AtomId, Relation};

pub const RCC8_ATOMS: [&str; 8] = ["DC", "EC", "PO", "TPP", "NTPP", "TPPi", "NTPPi", "EQ"];
pub const RCC5_ATOMS: [&str; 5] = ["DR", "PO", "EQ", "PP", "PPi"];

/// Row `a`, column `b` holds `a ⋄ b`; `*` is the universal relation.
#[rustfmt::skip]
const RCC8_TABLE: [[&str; 8]; 8] = [
    // DC
    ["*", "DC EC PO TPP NTPP", "DC EC PO TPP NTPP", "DC EC PO TPP NTPP", "DC EC PO TPP NTPP", "DC", "DC", "DC"],
    // EC
    ["DC EC PO TPPi NTPPi", "DC EC PO TPP TPPi EQ", "DC EC PO TPP NTPP", "EC PO TPP NTPP", "PO TPP NTPP", "DC EC", "DC", "EC"],
    // PO
    ["DC EC PO TPPi NTPPi", "DC EC PO TPPi NTPPi", "*", "PO TPP NTPP", "PO TPP NTPP", "DC EC PO TPPi NTPPi", "DC EC PO TPPi NTPPi", "PO"],
    // TPP
    ["DC", "DC EC", "DC EC PO TPP NTPP", "TPP NTPP", "NTPP", "DC EC PO TPP TPPi EQ", "DC EC PO TPPi NTPPi", "TPP"],
    // NTPP
    ["DC", "DC", "DC EC PO TPP NTPP", "NTPP", "NTPP", "DC EC PO TPP NTPP", "*", "NTPP"],
    // TPPi
    ["DC EC PO TPPi NTPPi", "EC PO TPPi NTPPi", "PO TPPi NTPPi", "PO TPP TPPi EQ", "PO TPP NTPP", "TPPi NTPPi", "NTPPi", "TPPi"],
    // NTPPi
    ["DC EC PO TPPi NTPPi", "PO TPPi NTPPi", "PO TPPi NTPPi", "PO TPPi NTPPi", "PO TPP NTPP TPPi NTPPi EQ", "NTPPi", "NTPPi", "NTPPi"],
    // EQ
    ["DC", "EC", "PO", "TPP", "NTPP", "TPPi", "NTPPi", "EQ"],
];

pub fn build_rcc8() -> Calculus {
    let idx = |name: &str| AtomId::from(RCC8_ATOMS.iter().position(|&a| a == name).expect("RCC8 atom"));
    let mut table = Vec::with_capacity(64);
    for row in RCC8_TABLE.iter() {
        for cell in row.iter() {
            let r = if *cell == "*" {
                Relation::full(8)
            } else {
                cell.split_whitespace().map(idx).collect()
            };
            table.push(r);
        }
    }
    let converse = ["DC", "EC", "PO", "TPPi", "NTPPi", "TPP", "NTPP", "EQ"]
        .iter()
        .map(|n| idx(n))
        .collect();
    Calculus::from_table(
        "RCC8",
        RCC8_ATOMS.iter().map(|s| s.to_string()).collect(),
        converse,
        table,
        idx("EQ"),
    )
    .expect("RCC8 table is well formed")
}

/// RCC5 atoms as unions of RCC8 atoms, in [`RCC5_ATOMS`] order.
fn rcc5_blocks(rcc8: &Calculus) -> Result<Vec<Relation>> {
    [
        &["DC", "EC"][..],
        &["PO"][..],
        &["EQ"][..],
        &["TPP", "NTPP"][..],
        &["TPPi", "NTPPi"][..],
    ]
    .iter()
    .map(|names| rcc8.rel_from_atoms(names))
    .collect()
}

/// Smallest RCC5 relation covering an RCC8 relation, provided the latter
/// never splits a block.
fn project(blocks: &[Relation], r: &Relation, rcc8: &Calculus) -> Result<Relation> {
    let mut out = Relation::empty();
    for (i, block) in blocks.iter().enumerate() {
        let meet = *block & *r;
        if meet == *block {
            out.insert(AtomId::from(i));
        } else if !meet.is_empty() {
            return Err(Error::ProjectionFailure(format!("{{{}}}", rcc8.format_relation(r))));
        }
    }
    Ok(out)
}

/// RCC5 as the coarsening of RCC8 by the five part-whole blocks.
pub fn build_rcc5(rcc8: &Calculus) -> Result<Calculus> {
    let blocks = rcc5_blocks(rcc8)?;
    let n = blocks.len();
    let mut table = Vec::with_capacity(n * n);
    for a in &blocks {
        for b in &blocks {
            table.push(project(&blocks, &rcc8.compose(a, b), rcc8)?);
        }
    }
    let mut converse = Vec::with_capacity(n);
    for b in &blocks {
        let c = project(&blocks, &rcc8.converse(b), rcc8)?;
        if !c.is_atomic() {
            return Err(Error::ProjectionFailure("converse of a block".into()));
        }
        converse.push(c.first().unwrap());
    }
    let idx = |name: &str| AtomId::from(RCC5_ATOMS.iter().position(|&a| a == name).unwrap());
    let cng = CngOrder::new(
        n,
        vec![
            (idx("DR"), idx("PO")),
            (idx("PO"), idx("PP")),
            (idx("PO"), idx("PPi")),
            (idx("PP"), idx("EQ")),
            (idx("PPi"), idx("EQ")),
        ],
    )?;
    Calculus::from_table(
        "RCC5",
        RCC5_ATOMS.iter().map(|s| s.to_string()).collect(),
        converse,
        table,
        idx("EQ"),
    )?
    .with_cng(cng)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rcc8_examples() {
        let c = build_rcc8();
        let rel = |n: &[&str]| c.rel_from_atoms(n).unwrap();
        assert_eq!(c.compose(&rel(&["EQ"]), &rel(&["TPP"])), rel(&["TPP"]));
        assert_eq!(c.compose(&rel(&["NTPP"]), &rel(&["NTPP"])), rel(&["NTPP"]));
        assert!(c.verify_relation_algebra().passed());
    }

    #[test]
    fn rcc5_examples() {
        let rcc8 = build_rcc8();
        let c = build_rcc5(&rcc8).unwrap();
        let rel = |n: &[&str]| c.rel_from_atoms(n).unwrap();
        assert_eq!(c.compose(&rel(&["EQ"]), &rel(&["PP"])), rel(&["PP"]));
        assert_eq!(c.converse(&rel(&["PP"])), rel(&["PPi"]));
        assert_eq!(c.compose(&rel(&["PP"]), &rel(&["PP"])), rel(&["PP"]));
        assert_eq!(c.compose(&rel(&["PP"]), &rel(&["DR"])), rel(&["DR"]));
        assert!(c.verify_relation_algebra().passed());
    }

    #[test]
    fn projection_detects_split_blocks() {
        let rcc8 = build_rcc8();
        let blocks = rcc5_blocks(&rcc8).unwrap();
        let dc_only = rcc8.rel_from_atoms(&["DC"]).unwrap();
        assert!(matches!(project(&blocks, &dc_only, &rcc8), Err(Error::ProjectionFailure(_))));
    }
}
