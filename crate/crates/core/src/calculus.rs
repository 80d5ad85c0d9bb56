//! Qualitative calculi as finite relation algebras.
//!
//! A [`Calculus`] owns the atom names, the converse permutation and the
//! weak-composition table over atoms. Composition of arbitrary relations is
//! the union of the table entries over all atom pairs; calculi with at most
//! [`FAST_TABLE_MAX_ATOMS`] atoms additionally precompute `atom ⋄ relation`
//! for every relation, which turns a composition into at most `atom_count`
//! word ORs.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::relation::{AtomId, Relation, MAX_ATOMS};

/// Calculi up to this size get full `atom ⋄ relation` lookup tables.
pub const FAST_TABLE_MAX_ATOMS: usize = 13;

/// Partial order over atoms given by its cover edges (a conceptual
/// neighbourhood graph read bottom-up).
#[derive(Debug, Clone)]
pub struct CngOrder {
    covers: Vec<(AtomId, AtomId)>,
    /// `up[a]` = every `b` with `a ⪯ b`.
    up: Vec<Relation>,
    /// `down[a]` = every `b` with `b ⪯ a`.
    down: Vec<Relation>,
}

impl CngOrder {
    pub fn new(atom_count: usize, covers: Vec<(AtomId, AtomId)>) -> Result<Self> {
        let mut up: Vec<Relation> = (0..atom_count).map(|a| Relation::singleton(AtomId::from(a))).collect();
        for &(lo, hi) in &covers {
            if lo.index() >= atom_count || hi.index() >= atom_count {
                return Err(Error::InvalidCalculus("cover edge references unknown atom".into()));
            }
            up[lo.index()].insert(hi);
        }
        // Transitive closure (Warshall on bit rows).
        for k in 0..atom_count {
            let row_k = up[k];
            for row in up.iter_mut() {
                if row.contains(AtomId::from(k)) {
                    *row |= row_k;
                }
            }
        }
        for a in 0..atom_count {
            for b in up[a].iter() {
                if b.index() != a && up[b.index()].contains(AtomId::from(a)) {
                    return Err(Error::InvalidCalculus("conceptual neighbourhood order has a cycle".into()));
                }
            }
        }
        let mut down = vec![Relation::empty(); atom_count];
        for (a, row) in up.iter().enumerate() {
            for b in row.iter() {
                down[b.index()].insert(AtomId::from(a));
            }
        }
        Ok(CngOrder { covers, up, down })
    }

    pub fn covers(&self) -> &[(AtomId, AtomId)] {
        &self.covers
    }

    #[inline]
    pub fn leq(&self, a: AtomId, b: AtomId) -> bool {
        self.up[a.index()].contains(b)
    }

    /// Atoms `θ` with `a ⪯ θ`.
    pub fn up_set(&self, a: AtomId) -> Relation {
        self.up[a.index()]
    }

    /// Atoms `θ` with `θ ⪯ a`.
    pub fn down_set(&self, a: AtomId) -> Relation {
        self.down[a.index()]
    }

    /// Atoms `θ` with `lo ⪯ θ ⪯ hi`.
    pub fn interval(&self, lo: AtomId, hi: AtomId) -> Relation {
        self.up[lo.index()] & self.down[hi.index()]
    }

    pub fn atom_count(&self) -> usize {
        self.up.len()
    }
}

/// Boolean operation selector for [`Calculus::set_op`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetOp {
    Intersect,
    Union,
    Difference,
    Complement,
}

/// One line of a [`ValidationReport`].
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Outcome of [`Calculus::verify_relation_algebra`].
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub calculus: String,
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let mark = if c.passed { "ok" } else { "FAIL" };
            write!(f, "{}: {} {}", self.calculus, c.name, mark)?;
            if !c.detail.is_empty() {
                write!(f, " ({})", c.detail)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

struct FastTables {
    /// `compose[(a << n) | s]` = `a ⋄ s` (low word).
    compose: Vec<u64>,
    converse: Vec<u64>,
}

/// An immutable qualitative calculus.
pub struct Calculus {
    name: String,
    atom_names: Vec<String>,
    name_index: HashMap<String, AtomId>,
    converse: Vec<AtomId>,
    table: Vec<Relation>,
    identity: AtomId,
    dimension: Option<Vec<u8>>,
    cng: Option<CngOrder>,
    factors: Option<(Arc<Calculus>, Arc<Calculus>)>,
    fast: Option<FastTables>,
}

impl fmt::Debug for Calculus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Calculus")
            .field("name", &self.name)
            .field("atoms", &self.atom_names.len())
            .finish()
    }
}

impl Calculus {
    /// Builds a calculus from raw tables. `table[a * n + b]` is `a ⋄ b`.
    ///
    /// Structural checks only (sizes, permutation, index ranges); the
    /// algebraic axioms are checked by [`Calculus::verify_relation_algebra`].
    pub fn from_table(
        name: impl Into<String>,
        atom_names: Vec<String>,
        converse: Vec<AtomId>,
        table: Vec<Relation>,
        identity: AtomId,
    ) -> Result<Self> {
        let name = name.into();
        let n = atom_names.len();
        if n == 0 || n > MAX_ATOMS {
            return Err(Error::InvalidCalculus(format!("atom count {n} out of range")));
        }
        if converse.len() != n || table.len() != n * n {
            return Err(Error::InvalidCalculus("table dimensions do not match atom count".into()));
        }
        let mut seen = vec![false; n];
        for c in &converse {
            if c.index() >= n || std::mem::replace(&mut seen[c.index()], true) {
                return Err(Error::InvalidCalculus("converse is not a permutation".into()));
            }
        }
        if identity.index() >= n {
            return Err(Error::InvalidAtom(identity.index()));
        }
        let universe = Relation::full(n);
        if table.iter().any(|r| !r.is_subset(&universe)) {
            return Err(Error::InvalidCalculus("composition entry outside the atom range".into()));
        }
        let mut name_index = HashMap::with_capacity(n);
        for (i, a) in atom_names.iter().enumerate() {
            if name_index.insert(a.clone(), AtomId::from(i)).is_some() {
                return Err(Error::InvalidCalculus(format!("duplicate atom name `{a}`")));
            }
        }
        let mut calc = Calculus {
            name,
            atom_names,
            name_index,
            converse,
            table,
            identity,
            dimension: None,
            cng: None,
            factors: None,
            fast: None,
        };
        if n <= FAST_TABLE_MAX_ATOMS {
            calc.fast = Some(calc.build_fast_tables());
        }
        Ok(calc)
    }

    pub fn with_dimension(mut self, dims: Vec<u8>) -> Result<Self> {
        if dims.len() != self.atom_count() {
            return Err(Error::InvalidCalculus("dimension map has wrong length".into()));
        }
        self.dimension = Some(dims);
        Ok(self)
    }

    pub fn with_cng(mut self, cng: CngOrder) -> Result<Self> {
        if cng.atom_count() != self.atom_count() {
            return Err(Error::InvalidCalculus("CNG order has wrong atom count".into()));
        }
        self.cng = Some(cng);
        Ok(self)
    }

    pub(crate) fn with_factors(mut self, a: Arc<Calculus>, b: Arc<Calculus>) -> Self {
        self.factors = Some((a, b));
        self
    }

    /// Registers an extra spelling for an atom (e.g. `NW` for `<*>`).
    pub fn with_alias(mut self, alias: &str, atom: AtomId) -> Self {
        self.name_index.insert(alias.to_string(), atom);
        self
    }

    fn build_fast_tables(&self) -> FastTables {
        let n = self.atom_count();
        let size = 1usize << n;
        let mut compose = vec![0u64; n * size];
        for a in 0..n {
            let base = a << n;
            // Grow subsets from their lowest bit: f(s) = f(s without low bit) | table[a][low].
            for s in 1..size {
                let low = s.trailing_zeros() as usize;
                compose[base | s] = compose[base | (s & (s - 1))] | self.table[a * n + low].low_word();
            }
        }
        let mut converse = vec![0u64; size];
        for s in 1..size {
            let low = s.trailing_zeros() as usize;
            converse[s] = converse[s & (s - 1)] | 1u64 << self.converse[low].index();
        }
        FastTables { compose, converse }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn atom_count(&self) -> usize {
        self.atom_names.len()
    }

    pub fn atom_names(&self) -> &[String] {
        &self.atom_names
    }

    pub fn atom_name(&self, a: AtomId) -> &str {
        &self.atom_names[a.index()]
    }

    pub fn atoms(&self) -> impl Iterator<Item = AtomId> {
        (0..self.atom_count()).map(AtomId::from)
    }

    pub fn atom(&self, name: &str) -> Result<AtomId> {
        self.name_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownAtomName(name.to_string()))
    }

    #[inline]
    pub fn identity_atom(&self) -> AtomId {
        self.identity
    }

    #[inline]
    pub fn identity(&self) -> Relation {
        Relation::singleton(self.identity)
    }

    #[inline]
    pub fn universal(&self) -> Relation {
        Relation::full(self.atom_count())
    }

    pub fn dimension_map(&self) -> Option<&[u8]> {
        self.dimension.as_deref()
    }

    pub fn cng(&self) -> Option<&CngOrder> {
        self.cng.as_ref()
    }

    /// The two factor calculi when this calculus is a product.
    pub fn factors(&self) -> Option<(&Arc<Calculus>, &Arc<Calculus>)> {
        self.factors.as_ref().map(|(a, b)| (a, b))
    }

    /// True iff every atom of `r` lies inside this calculus.
    #[inline]
    pub fn owns(&self, r: &Relation) -> bool {
        r.span() <= self.atom_count()
    }

    /// Relation made of the named atoms. Duplicates collapse.
    pub fn rel_from_atoms<S: AsRef<str>>(&self, names: &[S]) -> Result<Relation> {
        names.iter().map(|n| self.atom(n.as_ref())).collect()
    }

    /// Parses a whitespace-separated list of atom names.
    pub fn parse_relation(&self, text: &str) -> Result<Relation> {
        text.split_whitespace().map(|n| self.atom(n)).collect()
    }

    /// Atom names of `r` in index order, space separated.
    pub fn format_relation(&self, r: &Relation) -> String {
        let names: Vec<&str> = r.iter().map(|a| self.atom_name(a)).collect();
        names.join(" ")
    }

    #[inline]
    pub fn atom_converse(&self, a: AtomId) -> AtomId {
        self.converse[a.index()]
    }

    #[inline]
    pub fn atom_compose(&self, a: AtomId, b: AtomId) -> Relation {
        self.table[a.index() * self.atom_count() + b.index()]
    }

    pub fn converse(&self, r: &Relation) -> Relation {
        if let Some(fast) = &self.fast {
            return Relation::from_u64(fast.converse[r.low_word() as usize]);
        }
        r.iter().map(|a| self.converse[a.index()]).collect()
    }

    /// Weak composition `r ⋄ s`.
    #[inline]
    pub fn compose(&self, r: &Relation, s: &Relation) -> Relation {
        if let Some(fast) = &self.fast {
            let n = self.atom_count();
            let s = s.low_word() as usize;
            let mut acc = 0u64;
            for a in r.iter() {
                acc |= fast.compose[(a.index() << n) | s];
            }
            return Relation::from_u64(acc);
        }
        let n = self.atom_count();
        let universe = self.universal();
        let mut acc = Relation::empty();
        for a in r.iter() {
            let row = &self.table[a.index() * n..(a.index() + 1) * n];
            for b in s.iter() {
                acc |= row[b.index()];
            }
            if acc == universe {
                break;
            }
        }
        acc
    }

    /// Boolean operation on two relations of this calculus. `Complement`
    /// ignores `s`.
    pub fn set_op(&self, r: &Relation, s: &Relation, op: SetOp) -> Result<Relation> {
        if !self.owns(r) || (op != SetOp::Complement && !self.owns(s)) {
            return Err(Error::CalculusMismatch(self.name.clone()));
        }
        Ok(match op {
            SetOp::Intersect => *r & *s,
            SetOp::Union => *r | *s,
            SetOp::Difference => *r - *s,
            SetOp::Complement => r.complement(self.atom_count()),
        })
    }

    /// `(r⋄s)∩t ≠ ∅ ⇔ (r⁻¹⋄t)∩s ≠ ∅ ⇔ (t⋄s⁻¹)∩r ≠ ∅`.
    pub fn cycle_law_holds(&self, r: &Relation, s: &Relation, t: &Relation) -> bool {
        let a = self.compose(r, s).intersects(t);
        let b = self.compose(&self.converse(r), t).intersects(s);
        let c = self.compose(t, &self.converse(s)).intersects(r);
        a == b && b == c
    }

    /// Checks the relation-algebra axioms exhaustively at atom level.
    ///
    /// Since composition distributes over union, associativity and the
    /// cycle law over atoms imply them over all relations.
    pub fn verify_relation_algebra(&self) -> ValidationReport {
        let n = self.atom_count();
        let atoms: Vec<AtomId> = self.atoms().collect();
        let mut checks = Vec::new();

        let bad_inv = atoms
            .iter()
            .find(|&&a| self.atom_converse(self.atom_converse(a)) != a);
        checks.push(CheckResult {
            name: "converse-involution",
            passed: bad_inv.is_none(),
            detail: bad_inv.map(|a| format!("atom {}", self.atom_name(*a))).unwrap_or_default(),
        });

        let id = self.identity;
        checks.push(CheckResult {
            name: "identity-self-converse",
            passed: self.atom_converse(id) == id,
            detail: String::new(),
        });

        let bad_id = atoms.iter().find(|&&a| {
            let s = Relation::singleton(a);
            self.atom_compose(id, a) != s || self.atom_compose(a, id) != s
        });
        checks.push(CheckResult {
            name: "identity-law",
            passed: bad_id.is_none(),
            detail: bad_id.map(|a| format!("atom {}", self.atom_name(*a))).unwrap_or_default(),
        });

        let mut bad_sym = None;
        'sym: for &a in &atoms {
            for &b in &atoms {
                let lhs = self.converse(&self.atom_compose(a, b));
                let rhs = self.atom_compose(self.atom_converse(b), self.atom_converse(a));
                if lhs != rhs {
                    bad_sym = Some((a, b));
                    break 'sym;
                }
            }
        }
        checks.push(CheckResult {
            name: "converse-composition",
            passed: bad_sym.is_none(),
            detail: bad_sym
                .map(|(a, b)| format!("({}, {})", self.atom_name(a), self.atom_name(b)))
                .unwrap_or_default(),
        });

        let bad_assoc = atoms.par_iter().find_map_first(|&a| {
            for &b in &atoms {
                let ab = self.atom_compose(a, b);
                for &c in &atoms {
                    let mut left = Relation::empty();
                    for x in ab.iter() {
                        left |= self.atom_compose(x, c);
                    }
                    let mut right = Relation::empty();
                    for y in self.atom_compose(b, c).iter() {
                        right |= self.atom_compose(a, y);
                    }
                    if left != right {
                        return Some((a, b, c));
                    }
                }
            }
            None
        });
        checks.push(CheckResult {
            name: "associativity",
            passed: bad_assoc.is_none(),
            detail: bad_assoc
                .map(|(a, b, c)| {
                    format!("({}, {}, {})", self.atom_name(a), self.atom_name(b), self.atom_name(c))
                })
                .unwrap_or_default(),
        });

        let bad_cycle = atoms.par_iter().find_map_first(|&a| {
            let ai = self.atom_converse(a);
            for &b in &atoms {
                let bi = self.atom_converse(b);
                let ab = self.atom_compose(a, b);
                for &c in &atoms {
                    let x = ab.contains(c);
                    let y = self.atom_compose(ai, c).contains(b);
                    let z = self.atom_compose(c, bi).contains(a);
                    if x != y || y != z {
                        return Some((a, b, c));
                    }
                }
            }
            None
        });
        checks.push(CheckResult {
            name: "cycle-law",
            passed: bad_cycle.is_none(),
            detail: bad_cycle
                .map(|(a, b, c)| {
                    format!("({}, {}, {})", self.atom_name(a), self.atom_name(b), self.atom_name(c))
                })
                .unwrap_or_default(),
        });

        debug_assert_eq!(atoms.len(), n);
        ValidationReport { calculus: self.name.clone(), checks }
    }

    /// A copy of this calculus with one composition entry replaced. Used to
    /// exercise the axiom checks on deliberately broken tables.
    pub fn with_table_entry(&self, a: AtomId, b: AtomId, value: Relation) -> Result<Calculus> {
        let n = self.atom_count();
        let mut table = self.table.clone();
        table[a.index() * n + b.index()] = value;
        let mut calc = Calculus::from_table(
            format!("{}*", self.name),
            self.atom_names.clone(),
            self.converse.clone(),
            table,
            self.identity,
        )?;
        calc.dimension = self.dimension.clone();
        calc.cng = self.cng.clone();
        Ok(calc)
    }
}
