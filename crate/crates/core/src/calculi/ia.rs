//! Allen's interval algebra.
//!
//! The composition table is derived, not transcribed: `γ ∈ α ⋄ β` iff the
//! atomic point-algebra network over the six endpoints of `x, y, z` induced
//! by `α(x,y)`, `β(y,z)` and `γ(x,z)` is path consistent.
//! [`ia_atom_composition_oracle`] reaches the same table by a different
//! route, enumerating concrete endpoint assignments and classifying them
//! with the endpoint definitions of each atom.

use crate::calculus::{Calculus, CngOrder};
use crate::error::{Error, Result};
use crate::relation::{AtomId, Relation};

use super::pa::build_pa;

/// IA atoms in index order. Converse of atom `i` is atom `12 - i`.
pub const IA_ATOMS: [&str; 13] = [
    "b", "m", "o", "s", "d", "f", "eq", "fi", "di", "si", "oi", "mi", "bi",
];

const DIMENSIONS: [u8; 13] = [2, 1, 2, 1, 2, 1, 0, 1, 2, 1, 2, 1, 2];

// PA atom indices.
const LT: u8 = 0;
const EQ: u8 = 1;
const GT: u8 = 2;

/// Endpoint relations implied by each atom `θ(x, y)`:
/// `[x⁻ ? y⁻, x⁻ ? y⁺, x⁺ ? y⁻, x⁺ ? y⁺]`.
#[rustfmt::skip]
const ENDPOINTS: [[u8; 4]; 13] = [
    [LT, LT, LT, LT], // b
    [LT, LT, EQ, LT], // m
    [LT, LT, GT, LT], // o
    [EQ, LT, GT, LT], // s
    [GT, LT, GT, LT], // d
    [GT, LT, GT, EQ], // f
    [EQ, LT, GT, EQ], // eq
    [LT, LT, GT, EQ], // fi
    [LT, LT, GT, GT], // di
    [EQ, LT, GT, GT], // si
    [GT, LT, GT, GT], // oi
    [GT, EQ, GT, GT], // mi
    [GT, GT, GT, GT], // bi
];

/// PA atoms for `[x⁻ ? y⁻, x⁻ ? y⁺, x⁺ ? y⁻, x⁺ ? y⁺]` under the IA atom
/// `θ(x, y)`.
pub fn ia_endpoint_relations(theta: AtomId) -> Result<[AtomId; 4]> {
    let e = ENDPOINTS.get(theta.index()).ok_or(Error::InvalidAtom(theta.index()))?;
    Ok(e.map(AtomId))
}

/// Cover edges of the conceptual neighbourhood lattice, bottom-up.
const CNG_COVERS: [(&str, &str); 15] = [
    ("b", "m"),
    ("m", "o"),
    ("o", "s"),
    ("o", "fi"),
    ("s", "d"),
    ("s", "eq"),
    ("fi", "eq"),
    ("fi", "di"),
    ("d", "f"),
    ("eq", "f"),
    ("eq", "si"),
    ("di", "si"),
    ("f", "oi"),
    ("si", "oi"),
    ("oi", "mi"),
];

/// The IA atom relating intervals `x = [x.0, x.1]` and `y = [y.0, y.1]`,
/// straight from the endpoint definitions. `None` if an interval is
/// degenerate.
pub fn classify_intervals(x: (i64, i64), y: (i64, i64)) -> Option<AtomId> {
    let ((xs, xe), (ys, ye)) = (x, y);
    if xs >= xe || ys >= ye {
        return None;
    }
    let basic = |xs: i64, xe: i64, ys: i64, ye: i64| -> Option<&'static str> {
        if xe < ys {
            Some("b")
        } else if xe == ys {
            Some("m")
        } else if xs < ys && ys < xe && xe < ye {
            Some("o")
        } else if xs == ys && xe < ye {
            Some("s")
        } else if ys < xs && xe < ye {
            Some("d")
        } else if ys < xs && xe == ye {
            Some("f")
        } else if xs == ys && xe == ye {
            Some("eq")
        } else {
            None
        }
    };
    let name = match basic(xs, xe, ys, ye) {
        Some(n) => n.to_string(),
        None => {
            let n = basic(ys, ye, xs, xe)?;
            match n {
                "eq" => "eq".to_string(),
                other => format!("{other}i"),
            }
        }
    };
    IA_ATOMS.iter().position(|&a| a == name).map(AtomId::from)
}

fn interval_pairs(values: i64) -> impl Iterator<Item = (i64, i64)> + Clone {
    (0..values).flat_map(move |s| (s + 1..values).map(move |e| (s, e)))
}

/// `α ⋄ β` by enumerating every placement of the six endpoints of `x, y, z`
/// on six values (enough to realise every weak order) and collecting the
/// realised `γ(x, z)`.
pub fn ia_atom_composition_oracle(alpha: AtomId, beta: AtomId) -> Result<Relation> {
    for a in [alpha, beta] {
        if a.index() >= IA_ATOMS.len() {
            return Err(Error::InvalidAtom(a.index()));
        }
    }
    let mut out = Relation::empty();
    for y in interval_pairs(6) {
        for x in interval_pairs(6) {
            if classify_intervals(x, y) != Some(alpha) {
                continue;
            }
            for z in interval_pairs(6) {
                if classify_intervals(y, z) == Some(beta) {
                    out.insert(classify_intervals(x, z).expect("nondegenerate"));
                }
            }
        }
    }
    Ok(out)
}

/// The whole 13×13 table by the enumeration route, indexed `[α][β]`.
pub fn ia_composition_by_enumeration() -> Vec<Vec<Relation>> {
    let mut table = vec![vec![Relation::empty(); 13]; 13];
    let pairs: Vec<(i64, i64)> = interval_pairs(6).collect();
    for &x in &pairs {
        for &y in &pairs {
            let a = classify_intervals(x, y).unwrap();
            for &z in &pairs {
                let b = classify_intervals(y, z).unwrap();
                let g = classify_intervals(x, z).unwrap();
                table[a.index()][b.index()].insert(g);
            }
        }
    }
    table
}

/// Checks an atomic PA network over six endpoints for path consistency.
fn endpoints_path_consistent(pa: &Calculus, alpha: usize, beta: usize, gamma: usize) -> bool {
    // x⁻ x⁺ y⁻ y⁺ z⁻ z⁺ = 0..6
    let mut m = [[EQ; 6]; 6];
    let mut set = |i: usize, j: usize, a: u8| {
        m[i][j] = a;
        m[j][i] = 2 - a;
    };
    for v in 0..3 {
        set(2 * v, 2 * v + 1, LT);
    }
    for (atom, (p, q)) in [(alpha, (0, 2)), (beta, (2, 4)), (gamma, (0, 4))] {
        let e = ENDPOINTS[atom];
        set(p, q, e[0]);
        set(p, q + 1, e[1]);
        set(p + 1, q, e[2]);
        set(p + 1, q + 1, e[3]);
    }
    for i in 0..6 {
        for j in 0..6 {
            for k in 0..6 {
                let via = pa.atom_compose(AtomId(m[i][k]), AtomId(m[k][j]));
                if !via.contains(AtomId(m[i][j])) {
                    return false;
                }
            }
        }
    }
    true
}

pub fn build_ia() -> Calculus {
    let pa = build_pa();
    let n = IA_ATOMS.len();
    let mut table = vec![Relation::empty(); n * n];
    for a in 0..n {
        for b in 0..n {
            for g in 0..n {
                if endpoints_path_consistent(&pa, a, b, g) {
                    table[a * n + b].insert(AtomId::from(g));
                }
            }
        }
    }
    let idx = |name: &str| AtomId::from(IA_ATOMS.iter().position(|&a| a == name).unwrap());
    let mut covers: Vec<(AtomId, AtomId)> = CNG_COVERS.iter().map(|&(a, b)| (idx(a), idx(b))).collect();
    covers.push((idx("mi"), idx("bi")));
    let cng = CngOrder::new(n, covers).expect("IA lattice");
    Calculus::from_table(
        "IA",
        IA_ATOMS.iter().map(|s| s.to_string()).collect(),
        (0..n).map(|i| AtomId::from(n - 1 - i)).collect(),
        table,
        idx("eq"),
    )
    .and_then(|c| c.with_dimension(DIMENSIONS.to_vec()))
    .and_then(|c| c.with_cng(cng))
    .expect("IA tables are well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(name: &str) -> AtomId {
        AtomId::from(IA_ATOMS.iter().position(|&a| a == name).unwrap())
    }

    #[test]
    fn classification_matches_definitions() {
        assert_eq!(classify_intervals((0, 1), (2, 3)), Some(atom("b")));
        assert_eq!(classify_intervals((0, 1), (1, 2)), Some(atom("m")));
        assert_eq!(classify_intervals((0, 2), (1, 3)), Some(atom("o")));
        assert_eq!(classify_intervals((0, 1), (0, 2)), Some(atom("s")));
        assert_eq!(classify_intervals((1, 2), (0, 3)), Some(atom("d")));
        assert_eq!(classify_intervals((1, 2), (0, 2)), Some(atom("f")));
        assert_eq!(classify_intervals((0, 2), (0, 2)), Some(atom("eq")));
        assert_eq!(classify_intervals((2, 3), (0, 1)), Some(atom("bi")));
        assert_eq!(classify_intervals((0, 3), (1, 2)), Some(atom("di")));
        assert_eq!(classify_intervals((1, 1), (0, 2)), None);
    }

    #[test]
    fn oracle_examples() {
        let eq = atom("eq");
        let d = atom("d");
        assert_eq!(ia_atom_composition_oracle(eq, d).unwrap(), Relation::singleton(d));
        assert_eq!(
            ia_atom_composition_oracle(atom("m"), atom("m")).unwrap(),
            Relation::singleton(atom("b"))
        );
        let o_oi = ia_atom_composition_oracle(atom("o"), atom("oi")).unwrap();
        assert!(o_oi.len() > 1);
        assert!(o_oi.contains(eq));
        assert!(matches!(ia_atom_composition_oracle(AtomId(13), eq), Err(Error::InvalidAtom(13))));
    }

    #[test]
    fn converse_and_dimensions() {
        let ia = build_ia();
        assert_eq!(ia.atom_converse(atom("s")), atom("si"));
        let dims = ia.dimension_map().unwrap();
        assert_eq!(dims[atom("eq").index()], 0);
        assert_eq!(dims[atom("m").index()], 1);
        assert_eq!(dims[atom("o").index()], 2);
        let b = Relation::singleton(atom("b"));
        assert_eq!(ia.compose(&b, &b), b);
    }

    #[test]
    fn jepd_over_all_placements() {
        let pairs: Vec<_> = interval_pairs(4).collect();
        for &x in &pairs {
            for &y in &pairs {
                assert!(classify_intervals(x, y).is_some());
            }
        }
    }
}
