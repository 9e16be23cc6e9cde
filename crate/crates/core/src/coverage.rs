//! Coverages: per-element families of covering subsets.
//!
//! Builtin families are never materialized. Membership is decided directly
//! (the arrow relation for dense and tight covers) and covers are enumerated
//! on demand with an explicit size cap.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::elemset::{for_each_subset, ElemSet};
use crate::error::{Error, Result};
use crate::semigroup::{ElementId, InvSemigroup};

/// Subsets of `a↓` above this size are not enumerated exhaustively.
pub const EXACT_LIMIT: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoverageKind {
    Trivial,
    Join,
    Dense,
    Tight,
    Custom,
}

impl CoverageKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CoverageKind::Trivial => "trivial",
            CoverageKind::Join => "join",
            CoverageKind::Dense => "dense",
            CoverageKind::Tight => "tight",
            CoverageKind::Custom => "custom",
        }
    }
}

/// `a → B`: every nonzero `x ≤ a` shares a nonzero lower bound with some `b ∈ B`.
pub fn arrow(s: &InvSemigroup, a: ElementId, b: &ElemSet) -> bool {
    let mut reach = s.down_closure(b);
    let mut below = s.down(a);
    if let Some(z) = s.zero() {
        reach.remove(z);
        below.remove(z);
    }
    below.iter().all(|x| s.down(x).intersects(&reach))
}

#[derive(Clone, Debug)]
pub struct Coverage<'a> {
    s: &'a InvSemigroup,
    kind: CoverageKind,
    custom: Vec<Vec<ElemSet>>,
}

#[derive(Deserialize)]
struct CustomFile {
    covers: BTreeMap<String, Vec<Vec<usize>>>,
}

impl<'a> Coverage<'a> {
    pub fn builtin(s: &'a InvSemigroup, kind: CoverageKind) -> Result<Self> {
        match kind {
            CoverageKind::Custom => return Err(Error::UnsupportedKind("custom".into())),
            CoverageKind::Join if !s.is_distributive() => return Err(Error::NotDistributive),
            CoverageKind::Dense | CoverageKind::Tight => {
                s.require_zero()?;
            }
            _ => {}
        }
        Ok(Coverage {
            s,
            kind,
            custom: Vec::new(),
        })
    }

    /// An explicit family; every member must lie in `a↓`.
    pub fn custom(s: &'a InvSemigroup, mut covers: Vec<Vec<ElemSet>>) -> Result<Self> {
        covers.resize(s.n(), Vec::new());
        for (a, fam) in covers.iter_mut().enumerate() {
            if let Some(x) = fam.iter().find(|x| !x.is_subset(&s.down(a))) {
                return Err(Error::Parse(format!("cover {x:?} of {a} is not below {a}")));
            }
            fam.sort();
            fam.dedup();
        }
        Ok(Coverage {
            s,
            kind: CoverageKind::Custom,
            custom: covers,
        })
    }

    /// Reads `{"covers": {"a": [[ids...], ...]}}`.
    pub fn from_json(s: &'a InvSemigroup, text: &str) -> Result<Self> {
        let f: CustomFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut covers = vec![Vec::new(); s.n()];
        for (key, fam) in f.covers {
            let a: usize = key
                .parse()
                .map_err(|_| Error::Parse(format!("bad element key {key}")))?;
            if a >= s.n() || fam.iter().flatten().any(|&x| x >= s.n()) {
                return Err(Error::Parse(format!("element out of range near key {key}")));
            }
            covers[a] = fam.into_iter().map(|x| x.into_iter().collect()).collect();
        }
        Self::custom(s, covers)
    }

    pub fn semigroup(&self) -> &'a InvSemigroup {
        self.s
    }

    pub fn kind(&self) -> CoverageKind {
        self.kind
    }

    pub fn is_cover(&self, a: ElementId, x: &ElemSet) -> bool {
        let s = self.s;
        if !x.is_subset(&s.down(a)) {
            return false;
        }
        match self.kind {
            CoverageKind::Trivial => *x == ElemSet::singleton(a),
            CoverageKind::Join => s.lub(x) == Some(a),
            CoverageKind::Dense | CoverageKind::Tight => arrow(s, a, x),
            CoverageKind::Custom => self.custom[a].binary_search(x).is_ok(),
        }
    }

    /// Covers of `a` with at most `max` members, by size then lexicographically.
    pub fn covers(&self, a: ElementId, max: usize) -> Vec<ElemSet> {
        match self.kind {
            CoverageKind::Trivial => vec![ElemSet::singleton(a)],
            CoverageKind::Custom => self.custom[a]
                .iter()
                .filter(|x| x.len() <= max)
                .copied()
                .collect(),
            _ => {
                let items: Vec<usize> = self.s.down(a).iter().collect();
                let mut out = Vec::new();
                for_each_subset(&items, max, |x| {
                    if self.is_cover(a, &x) {
                        out.push(x);
                    }
                    true
                });
                out
            }
        }
    }

    /// Inclusion-minimal covers of `a` with at most `max` members.
    pub fn minimal_covers(&self, a: ElementId, max: usize) -> Vec<ElemSet> {
        let mut out: Vec<ElemSet> = Vec::new();
        for x in self.covers(a, max) {
            if !out.iter().any(|m| m.is_subset(&x)) {
                out.push(x);
            }
        }
        out
    }

    /// Whether enlarging a cover of `a` inside `a↓` keeps it a cover, decided
    /// over all subsets; `None` when `a↓` is too large to enumerate.
    pub fn upward_closed_at(&self, a: ElementId) -> Option<bool> {
        let below = self.s.down(a);
        if below.len() > EXACT_LIMIT {
            return None;
        }
        let items: Vec<usize> = below.iter().collect();
        let mut ok = true;
        for_each_subset(&items, items.len(), |x| {
            if self.is_cover(a, &x) {
                ok = (below - x).iter().all(|y| self.is_cover(a, &x.with(y)));
            }
            ok
        });
        Some(ok)
    }

    /// A filter meets some member of every cover of each of its elements.
    pub fn is_c_filter(&self, carrier: &ElemSet) -> bool {
        let s = self.s;
        match self.kind {
            CoverageKind::Trivial => true,
            CoverageKind::Custom => carrier
                .iter()
                .all(|x| self.custom[x].iter().all(|c| c.intersects(carrier))),
            _ => carrier
                .iter()
                .all(|x| !self.is_cover(x, &(s.down(x) - *carrier))),
        }
    }

    /// `C(a) ∩ C(b) ≠ ∅`.
    pub fn equivalent(&self, a: ElementId, b: ElementId) -> bool {
        match self.kind {
            CoverageKind::Trivial => a == b,
            CoverageKind::Custom => self.custom[a]
                .iter()
                .any(|x| self.custom[b].binary_search(x).is_ok()),
            _ => {
                let common = self.s.down(a) & self.s.down(b);
                self.is_cover(a, &common) && self.is_cover(b, &common)
            }
        }
    }

    pub fn is_separated(&self) -> bool {
        let n = self.s.n();
        (0..n).all(|a| (a + 1..n).all(|b| !self.equivalent(a, b)))
    }

    /// A cover made of idempotents forces its element to be idempotent.
    pub fn is_idempotent_pure(&self) -> bool {
        let s = self.s;
        s.elements().filter(|&a| !s.is_idempotent(a)).all(|a| {
            let e_below = s.down(a) & s.idempotents();
            match self.kind {
                CoverageKind::Trivial => true,
                CoverageKind::Custom => self.custom[a].iter().all(|x| !x.is_subset(&e_below)),
                _ => !self.is_cover(a, &e_below),
            }
        })
    }

    /// `x ∈ Ā` iff some `X ⊆ A` lies in `C(x)`.
    pub fn closure(&self, a: &ElemSet) -> ElemSet {
        let s = self.s;
        s.elements()
            .filter(|&x| match self.kind {
                CoverageKind::Trivial => a.contains(x),
                CoverageKind::Custom => self.custom[x].iter().any(|c| c.is_subset(a)),
                _ => self.is_cover(x, &(*a & s.down(x))),
            })
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomViolation {
    pub axiom: &'static str,
    pub elements: Vec<usize>,
    pub witness: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub kind: CoverageKind,
    pub cap: usize,
    pub passed: bool,
    /// (R) and (I) were checked over every cover, not only capped ones.
    pub exact_r_i: bool,
    /// (MS) and (T) ranged over minimal covers, after upward closure was verified.
    pub minimal_reduction: bool,
    pub violation: Option<AxiomViolation>,
}

fn ids(x: &ElemSet) -> Vec<usize> {
    x.iter().collect()
}

/// Checks (R), (I), (MS) and (T); products range over covers with at most `cap` members.
pub fn check_axioms(cov: &Coverage, cap: usize) -> AxiomReport {
    let s = cov.semigroup();
    let n = s.n();
    let upward = (0..n).all(|a| cov.upward_closed_at(a) == Some(true));
    let mut report = AxiomReport {
        kind: cov.kind(),
        cap,
        passed: true,
        exact_r_i: true,
        minimal_reduction: upward,
        violation: None,
    };
    let fail = |axiom, elements: Vec<usize>, witness: Vec<Vec<usize>>| AxiomViolation {
        axiom,
        elements,
        witness,
    };
    let violation = (|| {
        for a in 0..n {
            if !cov.is_cover(a, &ElemSet::singleton(a)) {
                return Some(fail("R", vec![a], vec![vec![a]]));
            }
        }
        for a in 0..n {
            let max = if s.down(a).len() > EXACT_LIMIT {
                report.exact_r_i = false;
                cap
            } else {
                n
            };
            for x in cov.covers(a, max) {
                if !cov.is_cover(s.inv(a), &s.set_inv(&x)) {
                    return Some(fail("I", vec![a], vec![ids(&x)]));
                }
            }
        }
        let fam: Vec<Vec<ElemSet>> = (0..n)
            .map(|a| {
                if upward {
                    cov.minimal_covers(a, cap)
                } else {
                    cov.covers(a, cap)
                }
            })
            .collect();
        for a in 0..n {
            for b in 0..n {
                let ab = s.mul(a, b);
                for x in &fam[a] {
                    for y in &fam[b] {
                        if !cov.is_cover(ab, &s.set_mul(x, y)) {
                            return Some(fail("MS", vec![a, b], vec![ids(x), ids(y)]));
                        }
                    }
                }
            }
        }
        for a in 0..n {
            for x in &fam[a] {
                let members: Vec<usize> = x.iter().collect();
                let mut choice = vec![0usize; members.len()];
                if members.iter().any(|&m| fam[m].is_empty()) {
                    continue;
                }
                loop {
                    let union = members
                        .iter()
                        .zip(&choice)
                        .fold(ElemSet::new(), |acc, (&m, &c)| acc | fam[m][c]);
                    if !cov.is_cover(a, &union) {
                        let mut w = vec![ids(x)];
                        w.extend(members.iter().zip(&choice).map(|(&m, &c)| ids(&fam[m][c])));
                        return Some(fail("T", vec![a], w));
                    }
                    let mut i = 0;
                    while i < members.len() {
                        choice[i] += 1;
                        if choice[i] < fam[members[i]].len() {
                            break;
                        }
                        choice[i] = 0;
                        i += 1;
                    }
                    if i == members.len() {
                        break;
                    }
                }
            }
        }
        None
    })();
    report.passed = violation.is_none();
    report.violation = violation;
    report
}

/// Quotient of a semigroup by `a ≡ b ⟺ C(a) ∩ C(b) ≠ ∅`.
#[derive(Clone, Debug)]
pub struct SeparativeQuotient {
    /// Classes ordered by least member, which is the representative.
    pub classes: Vec<ElemSet>,
    pub quotient: InvSemigroup,
    /// Class index of each element.
    pub sigma: Vec<usize>,
}

impl SeparativeQuotient {
    pub fn rep(&self, class: usize) -> ElementId {
        self.classes[class].first().expect("classes are nonempty")
    }

    pub fn image(&self, a: &ElemSet) -> ElemSet {
        a.iter().map(|x| self.sigma[x]).collect()
    }
}

pub fn separative_quotient(cov: &Coverage) -> Result<SeparativeQuotient> {
    if !matches!(cov.kind(), CoverageKind::Dense | CoverageKind::Tight) {
        return Err(Error::UnsupportedKind(cov.kind().as_str().into()));
    }
    let s = cov.semigroup();
    let n = s.n();
    let mut sigma = vec![usize::MAX; n];
    let mut classes: Vec<ElemSet> = Vec::new();
    for a in 0..n {
        if sigma[a] != usize::MAX {
            continue;
        }
        let class: ElemSet = (a..n).filter(|&b| cov.equivalent(a, b)).collect();
        for b in class.iter() {
            if sigma[b] != usize::MAX {
                return Err(Error::CheckFailed(format!(
                    "relation is not transitive at {b}"
                )));
            }
            sigma[b] = classes.len();
        }
        classes.push(class);
    }
    let k = classes.len();
    let reps: Vec<usize> = classes.iter().map(|c| c.first().unwrap()).collect();
    let mut table = vec![vec![0; k]; k];
    for a in 0..n {
        for b in 0..n {
            let c = sigma[s.mul(a, b)];
            let (p, q) = (sigma[a], sigma[b]);
            if a == reps[p] && b == reps[q] {
                table[p][q] = c;
            } else if sigma[s.mul(reps[p], reps[q])] != c {
                return Err(Error::CheckFailed(format!("not a congruence at ({a},{b})")));
            }
        }
    }
    let zero = s.zero().map(|z| sigma[z]);
    let labels = reps.iter().map(|&r| s.label(r).to_string()).collect();
    let quotient = InvSemigroup::verify(table, zero)?.with_labels(labels);
    Ok(SeparativeQuotient {
        classes,
        quotient,
        sigma,
    })
}
