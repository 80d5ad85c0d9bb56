use std::fmt::Write as _;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::calculi;
use crate::calculus::Calculus;
use crate::error::{Error, Result};
use crate::relation::{AtomId, Relation};
use crate::relset::RelationSet;

/// A qualitative constraint network: `n` variables and a complete matrix
/// of relations. The diagonal holds the identity and `R_ji` is always the
/// converse of `R_ij`.
#[derive(Clone)]
pub struct Qcn {
    calc: Arc<Calculus>,
    n: usize,
    m: Vec<Relation>,
}

impl std::fmt::Debug for Qcn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Qcn({}, n={})\n{}", self.calc.name(), self.n, self.to_text())
    }
}

impl PartialEq for Qcn {
    fn eq(&self, other: &Self) -> bool {
        self.calc.name() == other.calc.name() && self.n == other.n && self.m == other.m
    }
}

impl Eq for Qcn {}

impl Hash for Qcn {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.m.hash(state);
    }
}

impl Qcn {
    /// Network with every pair unconstrained.
    pub fn new(calc: Arc<Calculus>, n: usize) -> Self {
        let u = calc.universal();
        let id = calc.identity();
        let mut m = vec![u; n * n];
        for i in 0..n {
            m[i * n + i] = id;
        }
        Qcn { calc, n, m }
    }

    pub fn calculus(&self) -> &Arc<Calculus> {
        &self.calc
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Relation {
        self.m[i * self.n + j]
    }

    fn check_pair(&self, i: usize, j: usize) -> Result<()> {
        for index in [i, j] {
            if index >= self.n {
                return Err(Error::IndexOutOfRange { index, n: self.n });
            }
        }
        if i == j {
            return Err(Error::InvalidArgument(format!("diagonal entry ({i}, {i}) is fixed")));
        }
        Ok(())
    }

    /// Sets `R_ij = r` and `R_ji = r⁻¹`.
    pub fn set(&mut self, i: usize, j: usize, r: Relation) -> Result<()> {
        self.check_pair(i, j)?;
        if !self.calc.owns(&r) {
            return Err(Error::CalculusMismatch(self.calc.name().to_string()));
        }
        self.set_unchecked(i, j, r);
        Ok(())
    }

    #[inline]
    pub(crate) fn set_unchecked(&mut self, i: usize, j: usize, r: Relation) {
        let n = self.n;
        self.m[i * n + j] = r;
        self.m[j * n + i] = self.calc.converse(&r);
    }

    /// Sets `R_ij` from atom names.
    pub fn set_atoms<S: AsRef<str>>(&mut self, i: usize, j: usize, names: &[S]) -> Result<()> {
        let r = self.calc.rel_from_atoms(names)?;
        self.set(i, j, r)
    }

    /// Intersects `R_ij` with `r`; returns whether the entry shrank.
    pub fn constrain(&mut self, i: usize, j: usize, r: Relation) -> Result<bool> {
        self.check_pair(i, j)?;
        let new = self.get(i, j) & r;
        let changed = new != self.get(i, j);
        self.set_unchecked(i, j, new);
        Ok(changed)
    }

    /// Unordered pairs `i < j`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
    }

    pub fn has_empty_entry(&self) -> bool {
        self.pairs().any(|(i, j)| self.get(i, j).is_empty())
    }

    /// Every off-diagonal entry is a single atom.
    pub fn is_atomic(&self) -> bool {
        self.pairs().all(|(i, j)| self.get(i, j).is_atomic())
    }

    /// `self` refines `other`: same size and every entry is a subset.
    pub fn refines(&self, other: &Qcn) -> bool {
        self.n == other.n && self.pairs().all(|(i, j)| self.get(i, j).is_subset(&other.get(i, j)))
    }

    /// Every off-diagonal entry belongs to `set`.
    pub fn entries_in(&self, set: &RelationSet) -> bool {
        self.pairs().all(|(i, j)| set.contains(&self.get(i, j)))
    }

    /// Edges `{i, j}` whose constraint is not universal.
    pub fn constraint_edges(&self) -> Vec<(usize, usize)> {
        let u = self.calc.universal();
        self.pairs().filter(|&(i, j)| self.get(i, j) != u).collect()
    }

    /// The restriction `N↓V′` to `vars`, renumbered in the given order.
    pub fn restrict(&self, vars: &[usize]) -> Result<Qcn> {
        let mut out = Qcn::new(self.calc.clone(), vars.len());
        for (a, &i) in vars.iter().enumerate() {
            if i >= self.n {
                return Err(Error::IndexOutOfRange { index: i, n: self.n });
            }
            for (b, &j) in vars.iter().enumerate().skip(a + 1) {
                if j >= self.n {
                    return Err(Error::IndexOutOfRange { index: j, n: self.n });
                }
                if i == j {
                    return Err(Error::InvalidArgument(format!("variable {i} listed twice")));
                }
                out.set_unchecked(a, b, self.get(i, j));
            }
        }
        Ok(out)
    }

    /// Product of the entry sizes over unordered pairs (saturating).
    pub fn labelling_count(&self) -> u128 {
        self.pairs()
            .map(|(i, j)| self.get(i, j).len() as u128)
            .fold(1u128, |acc, c| acc.saturating_mul(c))
    }

    /// Text form; unconstrained pairs are omitted.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "calculus: {}", self.calc.name());
        let _ = writeln!(out, "n: {}", self.n);
        let u = self.calc.universal();
        for (i, j) in self.pairs() {
            let r = self.get(i, j);
            if r == u {
                continue;
            }
            if r.is_empty() {
                let _ = writeln!(out, "{i} {j} :");
            } else {
                let _ = writeln!(out, "{i} {j} : {}", self.calc.format_relation(&r));
            }
        }
        out
    }

    /// Parses the text form. `calculus:` must come first and `n:` before
    /// any constraint; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Qcn> {
        let perr = |line: usize, reason: String| Error::Parse { line, reason };
        let mut calc: Option<Arc<Calculus>> = None;
        let mut net: Option<Qcn> = None;
        let mut given: Vec<Option<Relation>> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let lower = line.to_ascii_lowercase();
            if let Some(rest) = lower.strip_prefix("calculus:") {
                if calc.is_some() {
                    return Err(perr(lineno, "duplicate calculus line".into()));
                }
                let name = &line[line.len() - rest.len()..];
                calc = Some(calculi::by_name(name.trim())?);
                continue;
            }
            let Some(c) = calc.as_ref() else {
                return Err(perr(lineno, "expected `calculus: NAME` first".into()));
            };
            if let Some(rest) = lower.strip_prefix("n:") {
                if net.is_some() {
                    return Err(perr(lineno, "duplicate n line".into()));
                }
                let n: usize = rest.trim().parse().map_err(|_| perr(lineno, format!("bad variable count `{}`", rest.trim())))?;
                net = Some(Qcn::new(c.clone(), n));
                given = vec![None; n * n];
                continue;
            }
            let Some(q) = net.as_mut() else {
                return Err(perr(lineno, "expected `n: COUNT` before constraints".into()));
            };
            let (lhs, rhs) = line
                .split_once(':')
                .ok_or_else(|| perr(lineno, "expected `i j : atoms`".into()))?;
            let idx: Vec<&str> = lhs.split_whitespace().collect();
            if idx.len() != 2 {
                return Err(perr(lineno, "expected two variable indices".into()));
            }
            let parse_idx = |s: &str| s.parse::<usize>().map_err(|_| perr(lineno, format!("bad index `{s}`")));
            let (i, j) = (parse_idx(idx[0])?, parse_idx(idx[1])?);
            for index in [i, j] {
                if index >= q.n {
                    return Err(Error::IndexOutOfRange { index, n: q.n });
                }
            }
            if i == j {
                return Err(perr(lineno, format!("constraint on the diagonal ({i}, {i})")));
            }
            let r = c.parse_relation(rhs)?;
            let (key, canon) = if i < j { ((i, j), r) } else { ((j, i), c.converse(&r)) };
            let slot = &mut given[key.0 * q.n + key.1];
            if let Some(prev) = slot {
                if *prev != canon {
                    return Err(perr(lineno, format!("contradicts an earlier constraint on ({}, {})", key.0, key.1)));
                }
            }
            *slot = Some(canon);
            q.set_unchecked(key.0, key.1, canon);
        }
        match (calc, net) {
            (None, _) => Err(perr(0, "missing `calculus:` line".into())),
            (Some(_), None) => Err(perr(0, "missing `n:` line".into())),
            (Some(_), Some(q)) => Ok(q),
        }
    }
}

/// An atomic network.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scenario(Qcn);

impl Scenario {
    pub fn new(qcn: Qcn) -> Result<Self> {
        if !qcn.is_atomic() {
            return Err(Error::NotAtomic);
        }
        Ok(Scenario(qcn))
    }

    pub fn as_qcn(&self) -> &Qcn {
        &self.0
    }

    pub fn into_qcn(self) -> Qcn {
        self.0
    }

    pub fn n(&self) -> usize {
        self.0.n
    }

    /// The atom `δ_ij` (the identity on the diagonal).
    pub fn atom(&self, i: usize, j: usize) -> AtomId {
        self.0.get(i, j).first().expect("scenario entries are atoms")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_basic() {
        let q = Qcn::parse("calculus: PA\nn: 3\n0 1 : < =\n").unwrap();
        let pa = calculi::pa();
        assert_eq!(q.get(0, 1), pa.rel_from_atoms(&["<", "="]).unwrap());
        assert_eq!(q.get(1, 0), pa.rel_from_atoms(&[">", "="]).unwrap());
        assert_eq!(q.get(0, 2), pa.universal());
        assert_eq!(q.get(2, 2), pa.identity());
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            Qcn::parse("calculus: IA\nn: 2\n0 1 : DC EC\n"),
            Err(Error::UnknownAtomName(_))
        ));
        assert!(matches!(Qcn::parse("calculus: PA\nn: 2\n0 5 : <\n"), Err(Error::IndexOutOfRange { index: 5, n: 2 })));
        assert!(matches!(Qcn::parse("n: 2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            Qcn::parse("calculus: PA\nn: 2\n0 1 : <\n1 0 : <\n"),
            Err(Error::Parse { line: 4, .. })
        ));
        // the same constraint written from the other side is fine
        assert!(Qcn::parse("calculus: PA\nn: 2\n0 1 : <\n1 0 : >\n").is_ok());
        assert!(matches!(Qcn::parse("calculus: XY\nn: 2\n"), Err(Error::UnknownCalculus(_))));
    }

    #[test]
    fn round_trip_with_aliases_and_empty() {
        let q = Qcn::parse("# cardinal directions\ncalculus: CRA\nn: 3\n0 1 : NW N\n1 2 :\n").unwrap();
        let cra = calculi::cra();
        assert_eq!(q.get(0, 1), cra.rel_from_atoms(&["<*>", "=*>"]).unwrap());
        assert!(q.get(1, 2).is_empty());
        let text = q.to_text();
        assert_eq!(Qcn::parse(&text).unwrap(), q);
    }

    #[test]
    fn restriction_renumbers() {
        let mut q = Qcn::new(calculi::pa(), 3);
        q.set_atoms(0, 2, &["<"]).unwrap();
        let r = q.restrict(&[2, 0]).unwrap();
        assert_eq!(r.get(0, 1), calculi::pa().rel_from_atoms(&[">"]).unwrap());
    }
}
