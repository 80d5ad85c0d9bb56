//! Finite sets of relations (subalgebras, closures, label pools).

use std::fmt::Write as _;

use crate::calculus::Calculus;
use crate::error::{Error, Result};
use crate::relation::Relation;

/// A deduplicated set of nonempty relations of one calculus.
///
/// Relations are kept sorted by their bit pattern so membership is a binary
/// search; the empty relation is never a member.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct RelationSet {
    rels: Vec<Relation>,
}

impl RelationSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Every singleton atom relation of `calc`.
    pub fn atoms(calc: &Calculus) -> Self {
        calc.atoms().map(Relation::singleton).collect()
    }

    /// All nonempty relations of `calc` (small calculi only).
    pub fn all(calc: &Calculus) -> Result<Self> {
        let n = calc.atom_count();
        if n > 20 {
            return Err(Error::InvalidArgument(format!(
                "refusing to materialise all 2^{n} relations of {}",
                calc.name()
            )));
        }
        Ok((1u64..(1u64 << n)).map(Relation::from_u64).collect())
    }

    pub fn insert(&mut self, r: Relation) -> bool {
        if r.is_empty() {
            return false;
        }
        match self.rels.binary_search(&r) {
            Ok(_) => false,
            Err(pos) => {
                self.rels.insert(pos, r);
                true
            }
        }
    }

    pub fn contains(&self, r: &Relation) -> bool {
        self.rels.binary_search(r).is_ok()
    }

    pub fn len(&self) -> usize {
        self.rels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rels.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Relation> {
        self.rels.iter()
    }

    pub fn as_slice(&self) -> &[Relation] {
        &self.rels
    }

    pub fn is_subset(&self, other: &RelationSet) -> bool {
        self.rels.iter().all(|r| other.contains(r))
    }

    pub fn union(&self, other: &RelationSet) -> RelationSet {
        self.rels.iter().chain(other.rels.iter()).copied().collect()
    }

    pub fn contains_all_atoms(&self, calc: &Calculus) -> bool {
        calc.atoms().all(|a| self.contains(&Relation::singleton(a)))
    }

    /// Closed under converse, composition and nonempty intersection.
    pub fn is_closed(&self, calc: &Calculus) -> bool {
        self.closure_violation(calc).is_none()
    }

    /// First operation result that escapes the set, if any.
    pub fn closure_violation(&self, calc: &Calculus) -> Option<Relation> {
        for r in &self.rels {
            let c = calc.converse(r);
            if !self.contains(&c) {
                return Some(c);
            }
            for s in &self.rels {
                let comp = calc.compose(r, s);
                if !comp.is_empty() && !self.contains(&comp) {
                    return Some(comp);
                }
                let meet = *r & *s;
                if !meet.is_empty() && !self.contains(&meet) {
                    return Some(meet);
                }
            }
        }
        None
    }

    /// Subalgebra: contains every atom and is closed.
    pub fn is_subalgebra(&self, calc: &Calculus) -> bool {
        self.contains_all_atoms(calc) && self.is_closed(calc)
    }

    pub fn require_subalgebra(&self, calc: &Calculus) -> Result<()> {
        if !self.contains_all_atoms(calc) {
            return Err(Error::NotASubalgebra("missing a basic relation".into()));
        }
        if let Some(r) = self.closure_violation(calc) {
            return Err(Error::NotASubalgebra(format!(
                "not closed: {{{}}} is missing",
                calc.format_relation(&r)
            )));
        }
        Ok(())
    }

    /// Canonical text form: one relation per line, atoms in calculus order,
    /// lines sorted by cardinality then lexicographically by atom names.
    pub fn to_canonical(&self, calc: &Calculus) -> String {
        let mut lines: Vec<(usize, Vec<&str>)> = self
            .rels
            .iter()
            .map(|r| (r.len(), r.iter().map(|a| calc.atom_name(a)).collect()))
            .collect();
        lines.sort();
        let mut out = String::new();
        for (_, names) in lines {
            let _ = writeln!(out, "{}", names.join(" "));
        }
        out
    }

    /// Parses one relation per line. Blank lines and `#` comments are
    /// skipped; a `calculus: NAME` header line is ignored here.
    pub fn parse(calc: &Calculus, text: &str) -> Result<RelationSet> {
        let mut set = RelationSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() || line.to_ascii_lowercase().starts_with("calculus:") {
                continue;
            }
            let r = calc.parse_relation(line).map_err(|e| Error::Parse {
                line: i + 1,
                reason: e.to_string(),
            })?;
            set.insert(r);
        }
        Ok(set)
    }
}

impl FromIterator<Relation> for RelationSet {
    fn from_iter<I: IntoIterator<Item = Relation>>(iter: I) -> Self {
        let mut rels: Vec<Relation> = iter.into_iter().filter(|r| !r.is_empty()).collect();
        rels.sort_unstable();
        rels.dedup();
        RelationSet { rels }
    }
}

impl<'a> IntoIterator for &'a RelationSet {
    type Item = &'a Relation;
    type IntoIter = std::slice::Iter<'a, Relation>;
    fn into_iter(self) -> Self::IntoIter {
        self.rels.iter()
    }
}
