//! Finite inverse semigroups given by multiplication tables.
//!
//! An [`InvSemigroup`] is built only through [`InvSemigroup::verify`], so every
//! value in circulation satisfies the axioms. The natural partial order,
//! inverses, idempotents and compatibility are derived once at construction.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::elemset::{ElemSet, MAX_ELEMS};
use crate::error::{Error, Result};

/// Dense index of an element, in `0..n`.
pub type ElementId = usize;

#[derive(Clone, Debug)]
pub struct InvSemigroup {
    n: usize,
    table: Vec<ElementId>,
    zero: Option<ElementId>,
    one: Option<ElementId>,
    inv: Vec<ElementId>,
    idempotents: ElemSet,
    down: Vec<ElemSet>,
    up: Vec<ElemSet>,
    compat: Vec<ElemSet>,
    labels: Vec<String>,
    cache: Cache,
}

#[derive(Clone, Debug, Default)]
struct Cache {
    distributive: OnceLock<bool>,
    meet: OnceLock<bool>,
    e_boolean: OnceLock<bool>,
}

/// On-disk table format.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SemigroupFile {
    pub n: usize,
    pub zero: Option<usize>,
    pub one: Option<usize>,
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

/// Structural predicates of a semigroup with zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Predicates {
    pub is_distributive: bool,
    pub is_meet_semigroup: bool,
    pub is_weakly_boolean: bool,
    pub is_boolean: bool,
    pub is_pseudogroup: bool,
    pub has_weak_meet: bool,
}

impl InvSemigroup {
    /// Validates a multiplication table.
    ///
    /// Checks run in the order: shape, associativity, zero, inverses. When
    /// `zero` is `None` an absorbing element, if any, is detected and used.
    pub fn verify(table: Vec<Vec<ElementId>>, zero: Option<ElementId>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::BadTable("empty table".into()));
        }
        if n > MAX_ELEMS {
            return Err(Error::TooLarge {
                what: "semigroup".into(),
                count: n,
                limit: MAX_ELEMS,
            });
        }
        let mut flat = Vec::with_capacity(n * n);
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::BadTable(format!("row {i} has length {}", row.len())));
            }
            for &x in row {
                if x >= n {
                    return Err(Error::BadTable(format!(
                        "entry {x} out of range in row {i}"
                    )));
                }
                flat.push(x);
            }
        }
        let m = |a: usize, b: usize| flat[a * n + b];
        for a in 0..n {
            for b in 0..n {
                let ab = m(a, b);
                for c in 0..n {
                    if m(ab, c) != m(a, m(b, c)) {
                        return Err(Error::NotAssociative { a, b, c });
                    }
                }
            }
        }
        let absorbing = |z: usize| (0..n).all(|s| m(z, s) == z && m(s, z) == z);
        let zero = match zero {
            Some(z) if z >= n || !absorbing(z) => return Err(Error::BadZero(z)),
            Some(z) => Some(z),
            None => (0..n).find(|&z| absorbing(z)),
        };
        let idempotents: ElemSet = (0..n).filter(|&e| m(e, e) == e).collect();
        for e in idempotents.iter() {
            for f in idempotents.iter() {
                if m(e, f) != m(f, e) {
                    return Err(Error::NotInverse(format!(
                        "idempotents {e} and {f} do not commute"
                    )));
                }
            }
        }
        let mut inv = vec![0; n];
        for s in 0..n {
            let cands: Vec<usize> = (0..n)
                .filter(|&t| m(m(s, t), s) == s && m(m(t, s), t) == t)
                .collect();
            if cands.len() != 1 {
                return Err(Error::NotInverse(format!(
                    "element {s} has {} generalized inverses",
                    cands.len()
                )));
            }
            inv[s] = cands[0];
        }
        let one = (0..n).find(|&u| (0..n).all(|s| m(u, s) == s && m(s, u) == s));
        let mut down = vec![ElemSet::new(); n];
        let mut up = vec![ElemSet::new(); n];
        for t in 0..n {
            for s in 0..n {
                if m(t, m(inv[s], s)) == s {
                    down[t].insert(s);
                    up[s].insert(t);
                }
            }
        }
        let mut compat = vec![ElemSet::new(); n];
        for s in 0..n {
            for t in 0..n {
                if idempotents.contains(m(inv[s], t)) && idempotents.contains(m(s, inv[t])) {
                    compat[s].insert(t);
                }
            }
        }
        Ok(InvSemigroup {
            n,
            table: flat,
            zero,
            one,
            inv,
            idempotents,
            down,
            up,
            compat,
            labels: (0..n).map(|i| i.to_string()).collect(),
            cache: Cache::default(),
        })
    }

    pub fn from_file(f: &SemigroupFile) -> Result<Self> {
        if f.table.len() != f.n {
            return Err(Error::BadTable(format!(
                "n = {} but table has {} rows",
                f.n,
                f.table.len()
            )));
        }
        let s = Self::verify(f.table.clone(), f.zero)?;
        if let Some(u) = f.one {
            if s.one != Some(u) {
                return Err(Error::BadTable(format!("{u} is not a monoid identity")));
            }
        }
        match &f.labels {
            Some(l) if l.len() != f.n => Err(Error::BadTable("label count differs from n".into())),
            Some(l) => Ok(s.with_labels(l.clone())),
            None => Ok(s),
        }
    }

    pub fn to_file(&self) -> SemigroupFile {
        SemigroupFile {
            n: self.n,
            zero: self.zero,
            one: self.one,
            table: self.rows(),
            labels: Some(self.labels.clone()),
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.n);
        self.labels = labels;
        self
    }

    pub fn rows(&self) -> Vec<Vec<ElementId>> {
        self.table.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> std::ops::Range<ElementId> {
        0..self.n
    }

    pub fn all(&self) -> ElemSet {
        ElemSet::full(self.n)
    }

    #[inline]
    pub fn mul(&self, a: ElementId, b: ElementId) -> ElementId {
        self.table[a * self.n + b]
    }

    #[inline]
    pub fn inv(&self, a: ElementId) -> ElementId {
        self.inv[a]
    }

    /// `d(a) = a⁻¹a`.
    #[inline]
    pub fn d(&self, a: ElementId) -> ElementId {
        self.mul(self.inv[a], a)
    }

    /// `r(a) = aa⁻¹`.
    #[inline]
    pub fn r(&self, a: ElementId) -> ElementId {
        self.mul(a, self.inv[a])
    }

    pub fn zero(&self) -> Option<ElementId> {
        self.zero
    }

    pub fn one(&self) -> Option<ElementId> {
        self.one
    }

    pub fn require_zero(&self) -> Result<ElementId> {
        self.zero.ok_or(Error::NoZero)
    }

    pub fn label(&self, a: ElementId) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    #[inline]
    pub fn is_idempotent(&self, a: ElementId) -> bool {
        self.idempotents.contains(a)
    }

    pub fn idempotents(&self) -> ElemSet {
        self.idempotents
    }

    /// Natural partial order: `a ≤ b` iff `a = b·d(a)`.
    #[inline]
    pub fn leq(&self, a: ElementId, b: ElementId) -> bool {
        self.down[b].contains(a)
    }

    /// `a↓`.
    #[inline]
    pub fn down(&self, a: ElementId) -> ElemSet {
        self.down[a]
    }

    /// `a↑`.
    #[inline]
    pub fn up(&self, a: ElementId) -> ElemSet {
        self.up[a]
    }

    /// `a↓` without `a`.
    pub fn strictly_below(&self, a: ElementId) -> ElemSet {
        self.down[a].without(a)
    }

    #[inline]
    pub fn compatible(&self, a: ElementId, b: ElementId) -> bool {
        self.compat[a].contains(b)
    }

    /// Elements compatible with `a`.
    pub fn compatible_with(&self, a: ElementId) -> ElemSet {
        self.compat[a]
    }

    /// `a↓ ∩ b↓ = {0}`.
    pub fn orthogonal(&self, a: ElementId, b: ElementId) -> bool {
        match self.zero {
            Some(z) => (self.down[a] & self.down[b]) == ElemSet::singleton(z),
            None => false,
        }
    }

    /// `a↓ ∩ b↓` contains a nonzero element.
    #[inline]
    pub fn meets(&self, a: ElementId, b: ElementId) -> bool {
        let common = self.down[a] & self.down[b];
        match self.zero {
            Some(z) => !common.without(z).is_empty(),
            None => !common.is_empty(),
        }
    }

    pub fn is_compatible_set(&self, a: &ElemSet) -> bool {
        a.iter().all(|x| a.is_subset(&self.compat[x]))
    }

    /// First incompatible pair of `a`, if any.
    pub fn incompatible_pair(&self, a: &ElemSet) -> Option<(ElementId, ElementId)> {
        for x in a.iter() {
            if let Some(y) = (*a - self.compat[x]).first() {
                return Some((x.min(y), x.max(y)));
            }
        }
        None
    }

    pub fn set_mul(&self, a: &ElemSet, b: &ElemSet) -> ElemSet {
        let mut out = ElemSet::new();
        for x in a.iter() {
            for y in b.iter() {
                out.insert(self.mul(x, y));
            }
        }
        out
    }

    pub fn set_inv(&self, a: &ElemSet) -> ElemSet {
        a.iter().map(|x| self.inv[x]).collect()
    }

    pub fn down_closure(&self, a: &ElemSet) -> ElemSet {
        a.iter().fold(ElemSet::new(), |acc, x| acc | self.down[x])
    }

    pub fn up_closure(&self, a: &ElemSet) -> ElemSet {
        a.iter().fold(ElemSet::new(), |acc, x| acc | self.up[x])
    }

    /// Common lower bounds of `a`; all elements when `a` is empty.
    pub fn lower_bounds(&self, a: &ElemSet) -> ElemSet {
        a.iter().fold(self.all(), |acc, x| acc & self.down[x])
    }

    pub fn upper_bounds(&self, a: &ElemSet) -> ElemSet {
        a.iter().fold(self.all(), |acc, x| acc & self.up[x])
    }

    /// Maximal elements of `a`.
    pub fn maximal(&self, a: &ElemSet) -> ElemSet {
        a.iter()
            .filter(|&x| (self.up[x] & *a) == ElemSet::singleton(x))
            .collect()
    }

    /// Greatest element of `a`, if any.
    pub fn greatest(&self, a: &ElemSet) -> Option<ElementId> {
        a.iter().find(|&m| a.is_subset(&self.down[m]))
    }

    /// Least element of `a`, if any.
    pub fn least(&self, a: &ElemSet) -> Option<ElementId> {
        a.iter().find(|&m| a.is_subset(&self.up[m]))
    }

    pub fn meet(&self, a: ElementId, b: ElementId) -> Option<ElementId> {
        self.greatest(&(self.down[a] & self.down[b]))
    }

    /// Least upper bound of an arbitrary set, ignoring compatibility.
    pub fn lub(&self, a: &ElemSet) -> Option<ElementId> {
        if a.is_empty() {
            return self.zero;
        }
        self.least(&self.upper_bounds(a))
    }

    /// Join of a compatible set; `Ok(None)` when it does not exist.
    pub fn join(&self, a: &ElemSet) -> Result<Option<ElementId>> {
        if let Some((x, y)) = self.incompatible_pair(a) {
            return Err(Error::NotCompatible(x, y));
        }
        Ok(self.lub(a))
    }

    pub fn join2(&self, a: ElementId, b: ElementId) -> Option<ElementId> {
        if !self.compatible(a, b) {
            return None;
        }
        self.lub(&ElemSet::singleton(a).with(b))
    }

    /// All compatible pairs have joins and multiplication distributes over them.
    ///
    /// Binary joins suffice: n-ary joins and their distributivity follow by
    /// induction once multiplication distributes over binary joins.
    pub fn is_distributive(&self) -> bool {
        *self
            .cache
            .distributive
            .get_or_init(|| self.compute_distributive())
    }

    fn compute_distributive(&self) -> bool {
        for a in 0..self.n {
            for b in self.compat[a].iter().filter(|&b| b > a) {
                let Some(j) = self.join2(a, b) else {
                    return false;
                };
                for s in 0..self.n {
                    let l = ElemSet::singleton(self.mul(s, a)).with(self.mul(s, b));
                    if self.lub(&l) != Some(self.mul(s, j)) {
                        return false;
                    }
                    let r = ElemSet::singleton(self.mul(a, s)).with(self.mul(b, s));
                    if self.lub(&r) != Some(self.mul(j, s)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn is_meet_semigroup(&self) -> bool {
        *self
            .cache
            .meet
            .get_or_init(|| (0..self.n).all(|a| (a..self.n).all(|b| self.meet(a, b).is_some())))
    }

    /// Every `e↓ ∩ E(S)` is a boolean algebra: relative complements exist.
    pub fn idempotents_boolean(&self) -> bool {
        *self
            .cache
            .e_boolean
            .get_or_init(|| self.compute_idempotents_boolean())
    }

    fn compute_idempotents_boolean(&self) -> bool {
        let Some(z) = self.zero else {
            return false;
        };
        let e_set = self.idempotents;
        e_set.iter().all(|e| {
            let below = self.down[e] & e_set;
            below.iter().all(|f| {
                below.iter().any(|g| {
                    self.mul(g, f) == z && self.lub(&ElemSet::singleton(f).with(g)) == Some(e)
                })
            })
        })
    }

    /// `a↓ ∩ b↓` is generated by finitely many elements (always true here).
    pub fn has_weak_meet(&self) -> bool {
        (0..self.n).all(|a| {
            (0..self.n).all(|b| {
                let common = self.down[a] & self.down[b];
                self.down_closure(&self.maximal(&common)) == common
            })
        })
    }

    pub fn predicates(&self) -> Result<Predicates> {
        self.require_zero()?;
        let is_distributive = self.is_distributive();
        let is_meet_semigroup = self.is_meet_semigroup();
        let is_weakly_boolean = is_distributive && self.idempotents_boolean();
        Ok(Predicates {
            is_distributive,
            is_meet_semigroup,
            is_weakly_boolean,
            is_boolean: is_weakly_boolean && is_meet_semigroup,
            is_pseudogroup: is_distributive && self.one.is_some(),
            has_weak_meet: self.has_weak_meet(),
        })
    }

    pub fn is_weakly_boolean(&self) -> bool {
        self.zero.is_some() && self.is_distributive() && self.idempotents_boolean()
    }

    pub fn is_boolean(&self) -> bool {
        self.is_weakly_boolean() && self.is_meet_semigroup()
    }

    pub fn is_pseudogroup(&self) -> bool {
        self.zero.is_some() && self.one.is_some() && self.is_distributive()
    }

    /// `a \ b` for `b ≤ a` in a weakly boolean semigroup.
    pub fn relative_complement(&self, a: ElementId, b: ElementId) -> Result<ElementId> {
        if !self.is_weakly_boolean() {
            return Err(Error::NotWeaklyBoolean);
        }
        self.relative_complement_unchecked(a, b)
    }

    /// As [`relative_complement`](Self::relative_complement) but trusts that
    /// the semigroup is weakly boolean.
    pub fn relative_complement_unchecked(&self, a: ElementId, b: ElementId) -> Result<ElementId> {
        if !self.leq(b, a) {
            return Err(Error::NotBelow(b, a));
        }
        let z = self.require_zero()?;
        let (da, db) = (self.d(a), self.d(b));
        let e = (self.down[da] & self.idempotents)
            .iter()
            .find(|&g| {
                self.mul(g, db) == z && self.lub(&ElemSet::singleton(g).with(db)) == Some(da)
            })
            .ok_or(Error::NotWeaklyBoolean)?;
        let c = self.mul(a, e);
        let cands: Vec<_> = self.down[a]
            .iter()
            .filter(|&x| self.orthogonal(x, b) && self.join2(x, b) == Some(a))
            .collect();
        if cands != [c] {
            return Err(Error::NotWeaklyBoolean);
        }
        Ok(c)
    }

    /// `S⁰`: a fresh zero with id `n`.
    pub fn adjoin_zero(&self) -> Result<Self> {
        if let Some(z) = self.zero {
            return Err(Error::AlreadyHasZero(z));
        }
        let n = self.n;
        let mut rows = self.rows();
        for row in rows.iter_mut() {
            row.push(n);
        }
        rows.push(vec![n; n + 1]);
        let mut labels = self.labels.clone();
        labels.push("0".into());
        Ok(Self::verify(rows, Some(n))?.with_labels(labels))
    }

    /// Relabels elements: old id `i` becomes `perm[i]`.
    pub fn permuted(&self, perm: &[ElementId]) -> Result<Self> {
        let n = self.n;
        let mut rows = vec![vec![0; n]; n];
        let mut labels = vec![String::new(); n];
        for a in 0..n {
            labels[perm[a]] = self.labels[a].clone();
            for b in 0..n {
                rows[perm[a]][perm[b]] = perm[self.mul(a, b)];
            }
        }
        Ok(Self::verify(rows, self.zero.map(|z| perm[z]))?.with_labels(labels))
    }

    /// Idempotents strictly below `e` with nothing in between.
    pub fn one_step_restrictions(&self, e: ElementId) -> ElemSet {
        let below = self.strictly_below(e) & self.idempotents;
        below
            .iter()
            .filter(|&f| (below & self.up[f]) == ElemSet::singleton(f))
            .collect()
    }
}
