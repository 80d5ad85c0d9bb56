use std::fmt::Write as _;

use crate::calculi::{classify_intervals, classify_points, ia_endpoint_relations, split_atom};
use crate::error::{Error, Result};
use crate::relation::AtomId;

use super::pc::is_path_consistent;
use super::Scenario;

/// Integer coordinates satisfying a scenario.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Realization {
    /// PA: one point per variable.
    Points(Vec<i64>),
    /// IA: `(start, end)` per variable.
    Intervals(Vec<(i64, i64)>),
    /// CRA: `(x, y)` per variable.
    Points2D(Vec<(i64, i64)>),
    /// RA: `[x-interval, y-interval]` per variable.
    Rectangles(Vec<[(i64, i64); 2]>),
}

impl Realization {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match self {
            Realization::Points(v) => {
                for (i, x) in v.iter().enumerate() {
                    let _ = writeln!(out, "{i}: {x}");
                }
            }
            Realization::Intervals(v) => {
                for (i, (s, e)) in v.iter().enumerate() {
                    let _ = writeln!(out, "{i}: [{s}, {e}]");
                }
            }
            Realization::Points2D(v) => {
                for (i, (x, y)) in v.iter().enumerate() {
                    let _ = writeln!(out, "{i}: ({x}, {y})");
                }
            }
            Realization::Rectangles(v) => {
                for (i, [(xs, xe), (ys, ye)]) in v.iter().enumerate() {
                    let _ = writeln!(out, "{i}: [{xs}, {xe}] x [{ys}, {ye}]");
                }
            }
        }
        out
    }
}

const LT: AtomId = AtomId(0);

/// Ranks points under a PA atom matrix. Counting the points strictly below
/// each one orders them correctly whenever the matrix is a total preorder;
/// equal points share a count, and the distinct counts are then packed
/// into `0, 1, 2, ...`. Callers re-classify to confirm.
fn rank_points(n: usize, pa: impl Fn(usize, usize) -> AtomId) -> Vec<i64> {
    let below: Vec<usize> = (0..n).map(|v| (0..n).filter(|&u| u != v && pa(u, v) == LT).count()).collect();
    let mut levels = below.clone();
    levels.sort_unstable();
    levels.dedup();
    below.iter().map(|b| levels.binary_search(b).expect("own level") as i64).collect()
}

fn realize_pa_axis(n: usize, atom: impl Fn(usize, usize) -> AtomId) -> Result<Vec<i64>> {
    let pts = rank_points(n, &atom);
    for i in 0..n {
        for j in 0..n {
            if i != j && classify_points(pts[i], pts[j]) != atom(i, j) {
                return Err(Error::ConstructionFailure(format!("points {i} and {j} do not re-classify")));
            }
        }
    }
    Ok(pts)
}

fn realize_ia_axis(n: usize, atom: impl Fn(usize, usize) -> AtomId) -> Result<Vec<(i64, i64)>> {
    // endpoint 2v is v⁻, 2v + 1 is v⁺
    let mut ep = vec![AtomId(1); 4 * n * n];
    let m = 2 * n;
    for v in 0..n {
        ep[(2 * v) * m + 2 * v + 1] = AtomId(0);
        ep[(2 * v + 1) * m + 2 * v] = AtomId(2);
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let e = ia_endpoint_relations(atom(i, j))?;
            for (k, (a, b)) in [(0, 0), (0, 1), (1, 0), (1, 1)].into_iter().enumerate() {
                ep[(2 * i + a) * m + 2 * j + b] = e[k];
            }
        }
    }
    let pts = rank_points(m, |a, b| if a == b { AtomId(1) } else { ep[a * m + b] });
    let iv: Vec<(i64, i64)> = (0..n).map(|v| (pts[2 * v], pts[2 * v + 1])).collect();
    for i in 0..n {
        for j in 0..n {
            if i != j && classify_intervals(iv[i], iv[j]) != Some(atom(i, j)) {
                return Err(Error::ConstructionFailure(format!("intervals {i} and {j} do not re-classify")));
            }
        }
    }
    Ok(iv)
}

/// Integer coordinates for a scenario over PA, IA, CRA or RA. Product
/// calculi are realised one axis at a time. The result is checked by
/// re-classifying every pair.
pub fn realize_solution(s: &Scenario) -> Result<Realization> {
    let q = s.as_qcn();
    let calc = q.calculus();
    let n = q.n();
    let name = calc.name().to_ascii_uppercase();
    if !matches!(name.as_str(), "PA" | "IA" | "CRA" | "RA") {
        return Err(Error::UnsupportedCalculus(calc.name().to_string()));
    }
    if !is_path_consistent(q) {
        return Err(Error::NotPathConsistent);
    }
    let atom = |i: usize, j: usize| s.atom(i, j);
    let axis = |k: usize| {
        move |i: usize, j: usize| {
            let (a, b) = split_atom(calc, atom(i, j)).expect("product atom");
            if k == 0 {
                a
            } else {
                b
            }
        }
    };
    Ok(match name.as_str() {
        "PA" => Realization::Points(realize_pa_axis(n, atom)?),
        "IA" => Realization::Intervals(realize_ia_axis(n, atom)?),
        "CRA" => {
            let xs = realize_pa_axis(n, axis(0))?;
            let ys = realize_pa_axis(n, axis(1))?;
            Realization::Points2D(xs.into_iter().zip(ys).collect())
        }
        _ => {
            let xs = realize_ia_axis(n, axis(0))?;
            let ys = realize_ia_axis(n, axis(1))?;
            Realization::Rectangles(xs.into_iter().zip(ys).map(|(x, y)| [x, y]).collect())
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculi;
    use crate::network::Qcn;

    #[test]
    fn pa_chain_gets_ranks() {
        let mut q = Qcn::new(calculi::pa(), 3);
        q.set_atoms(0, 1, &["<"]).unwrap();
        q.set_atoms(1, 2, &["<"]).unwrap();
        q.set_atoms(0, 2, &["<"]).unwrap();
        let r = realize_solution(&Scenario::new(q).unwrap()).unwrap();
        assert_eq!(r, Realization::Points(vec![0, 1, 2]));
    }

    #[test]
    fn ia_meets() {
        let mut q = Qcn::new(calculi::ia(), 2);
        q.set_atoms(0, 1, &["m"]).unwrap();
        let r = realize_solution(&Scenario::new(q).unwrap()).unwrap();
        assert_eq!(r, Realization::Intervals(vec![(0, 1), (1, 2)]));
    }

    #[test]
    fn ra_rectangles_reclassify() {
        let mut q = Qcn::new(calculi::ra(), 2);
        q.set_atoms(0, 1, &["b*o"]).unwrap();
        let Realization::Rectangles(r) = realize_solution(&Scenario::new(q).unwrap()).unwrap() else {
            panic!("RA gives rectangles");
        };
        assert_eq!(classify_intervals(r[0][0], r[1][0]), Some(calculi::ia().atom("b").unwrap()));
        assert_eq!(classify_intervals(r[0][1], r[1][1]), Some(calculi::ia().atom("o").unwrap()));
    }

    #[test]
    fn rcc_is_unsupported() {
        let mut q = Qcn::new(calculi::rcc8(), 2);
        q.set_atoms(0, 1, &["EC"]).unwrap();
        let err = realize_solution(&Scenario::new(q).unwrap()).unwrap_err();
        assert_eq!(err.to_string(), "realization unsupported for RCC8");
    }
}
