use std::cmp::Ordering;

use crate::calculus::{Calculus, CngOrder};
use crate::error::{Error, Result};
use crate::relation::{AtomId, Relation};

/// PA atoms in index order.
pub const PA_ATOMS: [&str; 3] = ["<", "=", ">"];

const LT: u8 = 0;
const EQ: u8 = 1;
const GT: u8 = 2;

/// The PA atom relating `x` to `y`.
pub fn classify_points(x: i64, y: i64) -> AtomId {
    AtomId(match x.cmp(&y) {
        Ordering::Less => LT,
        Ordering::Equal => EQ,
        Ordering::Greater => GT,
    })
}

/// Composition of two PA atoms by enumerating every ordering of three
/// points `x, y, z` (values 0..3 realise all weak orders).
pub fn pa_atom_composition_oracle(a: AtomId, b: AtomId) -> Result<Relation> {
    for atom in [a, b] {
        if atom.index() >= 3 {
            return Err(Error::InvalidAtom(atom.index()));
        }
    }
    let mut out = Relation::empty();
    for x in 0..3 {
        for y in 0..3 {
            for z in 0..3 {
                if classify_points(x, y) == a && classify_points(y, z) == b {
                    out.insert(classify_points(x, z));
                }
            }
        }
    }
    Ok(out)
}

pub fn build_pa() -> Calculus {
    let r = |atoms: &[u8]| Relation::from_atoms(atoms.iter().map(|&a| AtomId(a)));
    let all = r(&[LT, EQ, GT]);
    #[rustfmt::skip]
    let table = vec![
        // <            =          >
        r(&[LT]),       r(&[LT]),  all,
        r(&[LT]),       r(&[EQ]),  r(&[GT]),
        all,            r(&[GT]),  r(&[GT]),
    ];
    let cng = CngOrder::new(3, vec![(AtomId(LT), AtomId(EQ)), (AtomId(EQ), AtomId(GT))])
        .expect("PA order");
    Calculus::from_table(
        "PA",
        PA_ATOMS.iter().map(|s| s.to_string()).collect(),
        vec![AtomId(GT), AtomId(EQ), AtomId(LT)],
        table,
        AtomId(EQ),
    )
    .and_then(|c| c.with_cng(cng))
    .expect("PA tables are well formed")
}
