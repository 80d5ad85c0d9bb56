use std::collections::HashSet;

use crate::calculus::Calculus;
use crate::error::{Error, Result};
use crate::relation::Relation;
use crate::relset::RelationSet;

/// Default bound on closure size.
pub const DEFAULT_CLOSURE_CAP: usize = 4096;

/// Environment variable overriding [`DEFAULT_CLOSURE_CAP`].
pub const CLOSURE_CAP_ENV: &str = "QSTR_CLOSURE_CAP";

/// The closure cap from `QSTR_CLOSURE_CAP`, falling back to the default.
pub fn closure_cap_from_env() -> Result<usize> {
    match std::env::var(CLOSURE_CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("{CLOSURE_CAP_ENV}={v} is not a count"))),
        Err(_) => Ok(DEFAULT_CLOSURE_CAP),
    }
}

/// Result of growing a closure with the Helly test switched on.
#[derive(Debug, Clone)]
pub enum Growth {
    /// The closure completed and satisfies the Helly condition.
    Closed(RelationSet),
    /// Growth stopped at the first violating triple; `size` is the number
    /// of relations collected so far.
    NotHelly { witness: [Relation; 3], size: usize },
}

impl Growth {
    pub fn is_closed(&self) -> bool {
        matches!(self, Growth::Closed(_))
    }

    pub fn into_closed(self) -> Option<RelationSet> {
        match self {
            Growth::Closed(s) => Some(s),
            Growth::NotHelly { .. } => None,
        }
    }
}

struct Grower<'a> {
    calc: &'a Calculus,
    members: Vec<Relation>,
    seen: HashSet<Relation>,
    cap: usize,
    helly: bool,
}

impl Grower<'_> {
    /// Adds `x` if new. With the Helly test on, every triple made of `x`
    /// and two earlier members is checked.
    fn push(&mut self, x: Relation) -> Result<Option<[Relation; 3]>> {
        if x.is_empty() || !self.seen.insert(x) {
            return Ok(None);
        }
        if self.helly {
            let meeting: Vec<Relation> = self.members.iter().copied().filter(|a| a.intersects(&x)).collect();
            for (i, a) in meeting.iter().enumerate() {
                let ax = *a & x;
                for b in &meeting[i + 1..] {
                    if a.intersects(b) && !ax.intersects(b) {
                        return Ok(Some([*a, *b, x]));
                    }
                }
            }
        }
        self.members.push(x);
        if self.members.len() > self.cap {
            return Err(Error::CapExceeded(self.cap));
        }
        Ok(None)
    }

    fn run(mut self, start: impl IntoIterator<Item = Relation>) -> Result<Growth> {
        let atoms: Vec<Relation> = self.calc.atoms().map(Relation::singleton).collect();
        for r in atoms.into_iter().chain(start) {
            if let Some(w) = self.push(r)? {
                return Ok(self.violation(w));
            }
        }
        let mut i = 0;
        while i < self.members.len() {
            let r = self.members[i];
            if let Some(w) = self.push(self.calc.converse(&r))? {
                return Ok(self.violation(w));
            }
            for j in 0..=i {
                let s = self.members[j];
                for x in [self.calc.compose(&r, &s), self.calc.compose(&s, &r), r & s] {
                    if let Some(w) = self.push(x)? {
                        return Ok(self.violation(w));
                    }
                }
            }
            i += 1;
        }
        Ok(Growth::Closed(self.members.into_iter().collect()))
    }

    fn violation(&self, witness: [Relation; 3]) -> Growth {
        Growth::NotHelly { witness, size: self.members.len() }
    }
}

fn check_owned<'a>(calc: &Calculus, rels: impl IntoIterator<Item = &'a Relation>) -> Result<()> {
    for r in rels {
        if !calc.owns(r) {
            return Err(Error::CalculusMismatch(calc.name().to_string()));
        }
    }
    Ok(())
}

/// `⟨X⟩`: the least set containing `seed` and every atom, closed under
/// converse, composition and nonempty intersection. `cap = None` means
/// unbounded.
pub fn closure(calc: &Calculus, seed: &RelationSet, cap: Option<usize>) -> Result<RelationSet> {
    check_owned(calc, seed)?;
    let grower = Grower {
        calc,
        members: Vec::new(),
        seen: HashSet::new(),
        cap: cap.unwrap_or(usize::MAX),
        helly: false,
    };
    Ok(grower
        .run(seed.iter().copied())?
        .into_closed()
        .expect("no Helly test requested"))
}

/// Closure that stops at the first Helly violation.
///
/// Any superset of a set violating the Helly condition violates it too, so
/// stopping early never hides a distributive closure.
pub fn closure_helly<'a>(
    calc: &Calculus,
    seed: impl IntoIterator<Item = &'a Relation>,
    cap: Option<usize>,
) -> Result<Growth> {
    let seed: Vec<Relation> = seed.into_iter().copied().collect();
    check_owned(calc, &seed)?;
    let grower = Grower {
        calc,
        members: Vec::new(),
        seen: HashSet::new(),
        cap: cap.unwrap_or(usize::MAX),
        helly: true,
    };
    grower.run(seed)
}
