//! Homomorphisms between finite inverse semigroups: checking, isomorphism
//! search, and exhaustive enumeration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::semigroup::{ElementId, InvSemigroup, SemigroupFile};

#[derive(Clone, Debug)]
pub struct Morphism {
    pub source: InvSemigroup,
    pub target: InvSemigroup,
    pub map: Vec<ElementId>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MorphismFile {
    pub source: SemigroupFile,
    pub target: SemigroupFile,
    pub map: Vec<ElementId>,
}

/// First pair `(s, t)` with `θ(st) ≠ θ(s)θ(t)`.
pub fn hom_violation(
    s: &InvSemigroup,
    t: &InvSemigroup,
    map: &[ElementId],
) -> Option<(ElementId, ElementId)> {
    s.elements()
        .flat_map(|a| s.elements().map(move |b| (a, b)))
        .find(|&(a, b)| map[s.mul(a, b)] != t.mul(map[a], map[b]))
}

impl Morphism {
    pub fn new(source: InvSemigroup, target: InvSemigroup, map: Vec<ElementId>) -> Result<Self> {
        if map.len() != source.n() || map.iter().any(|&y| y >= target.n()) {
            return Err(Error::NotHomomorphism("map has the wrong shape".into()));
        }
        if let Some((a, b)) = hom_violation(&source, &target, &map) {
            return Err(Error::NotHomomorphism(format!(
                "θ({}·{}) ≠ θ({})·θ({})",
                source.label(a),
                source.label(b),
                source.label(a),
                source.label(b)
            )));
        }
        Ok(Morphism {
            source,
            target,
            map,
        })
    }

    pub fn identity(s: &InvSemigroup) -> Self {
        Morphism {
            source: s.clone(),
            target: s.clone(),
            map: s.elements().collect(),
        }
    }

    pub fn from_file(f: &MorphismFile) -> Result<Self> {
        let source = InvSemigroup::from_file(&f.source)?;
        let target = InvSemigroup::from_file(&f.target)?;
        Morphism::new(source, target, f.map.clone())
    }

    pub fn to_file(&self) -> MorphismFile {
        MorphismFile {
            source: self.source.to_file(),
            target: self.target.to_file(),
            map: self.map.clone(),
        }
    }

    pub fn apply(&self, a: ElementId) -> ElementId {
        self.map[a]
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.n()];
        self.map
            .iter()
            .all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target.n()];
        for &y in &self.map {
            seen[y] = true;
        }
        seen.into_iter().all(|b| b)
    }

    pub fn preserves_zero(&self) -> bool {
        match (self.source.zero(), self.target.zero()) {
            (Some(a), Some(b)) => self.map[a] == b,
            (None, _) => true,
            _ => false,
        }
    }

    /// `θ(s ∨ t) = θ(s) ∨ θ(t)` for every compatible pair with a join.
    pub fn preserves_joins(&self) -> bool {
        let (s, t) = (&self.source, &self.target);
        s.elements().all(|a| {
            s.compatible_with(a).iter().all(|b| match s.join2(a, b) {
                Some(j) => t.join2(self.map[a], self.map[b]) == Some(self.map[j]),
                None => true,
            })
        })
    }

    pub fn compose(&self, next: &Morphism) -> Result<Morphism> {
        let map = self.map.iter().map(|&y| next.map[y]).collect();
        Morphism::new(self.source.clone(), next.target.clone(), map)
    }
}

/// Mutually inverse bijective homomorphisms.
#[derive(Clone, Debug)]
pub struct Isomorphism {
    pub forward: Morphism,
    pub inverse: Morphism,
}

impl Isomorphism {
    pub fn from_bijection(a: &InvSemigroup, b: &InvSemigroup, map: Vec<ElementId>) -> Result<Self> {
        let forward = Morphism::new(a.clone(), b.clone(), map)?;
        if !forward.is_injective() || !forward.is_surjective() {
            return Err(Error::CheckFailed("map is not a bijection".into()));
        }
        let mut inv = vec![0; b.n()];
        for (x, &y) in forward.map.iter().enumerate() {
            inv[y] = x;
        }
        let inverse = Morphism::new(b.clone(), a.clone(), inv)?;
        Ok(Isomorphism { forward, inverse })
    }
}

/// Which homomorphisms an enumeration keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomKind {
    Any,
    /// Zero goes to zero.
    Zero,
    /// Zero to zero and existing binary compatible joins to joins.
    Distributive,
    /// Bijective.
    Iso,
}

fn powers_profile(s: &InvSemigroup, a: ElementId) -> (usize, usize) {
    let mut seen = vec![a];
    let mut x = a;
    loop {
        x = s.mul(x, a);
        if let Some(i) = seen.iter().position(|&y| y == x) {
            return (i, seen.len() - i);
        }
        seen.push(x);
    }
}

fn signature(s: &InvSemigroup, a: ElementId) -> [usize; 8] {
    let (index, period) = powers_profile(s, a);
    [
        s.is_idempotent(a) as usize,
        s.down(a).len(),
        s.up(a).len(),
        s.compatible_with(a).len(),
        (s.down(a) & s.idempotents()).len(),
        (s.down(s.d(a))).len(),
        index,
        period,
    ]
}

struct Search<'a> {
    s: &'a InvSemigroup,
    t: &'a InvSemigroup,
    kind: HomKind,
    candidates: Vec<Vec<ElementId>>,
    limit: usize,
    found: Vec<Vec<ElementId>>,
}

impl Search<'_> {
    /// Assigns `x ↦ y` and everything it forces; `false` on a clash.
    fn propagate(
        &self,
        map: &mut [Option<ElementId>],
        used: &mut [bool],
        x: ElementId,
        y: ElementId,
    ) -> bool {
        let (s, t) = (self.s, self.t);
        let mut queue = vec![(x, y)];
        while let Some((x, y)) = queue.pop() {
            match map[x] {
                Some(z) if z == y => continue,
                Some(_) => return false,
                None => {}
            }
            if self.kind == HomKind::Iso {
                if used[y] || !self.candidates[x].contains(&y) {
                    return false;
                }
                used[y] = true;
            }
            map[x] = Some(y);
            queue.push((s.inv(x), t.inv(y)));
            for a in s.elements() {
                if let Some(b) = map[a] {
                    queue.push((s.mul(x, a), t.mul(y, b)));
                    queue.push((s.mul(a, x), t.mul(b, y)));
                }
            }
        }
        true
    }

    fn run(&mut self, map: Vec<Option<ElementId>>, used: Vec<bool>) {
        if self.found.len() >= self.limit {
            return;
        }
        let next = (0..self.s.n())
            .filter(|&x| map[x].is_none())
            .min_by_key(|&x| self.candidates[x].len());
        let Some(x) = next else {
            let m: Vec<ElementId> = map.iter().map(|y| y.expect("complete")).collect();
            if self.accept(&m) {
                self.found.push(m);
            }
            return;
        };
        for y in self.candidates[x].clone() {
            let mut m = map.clone();
            let mut u = used.clone();
            if self.propagate(&mut m, &mut u, x, y) {
                self.run(m, u);
                if self.found.len() >= self.limit {
                    return;
                }
            }
        }
    }

    fn accept(&self, m: &[ElementId]) -> bool {
        debug_assert!(hom_violation(self.s, self.t, m).is_none());
        match self.kind {
            HomKind::Any | HomKind::Iso => true,
            HomKind::Zero => self.s.zero().map(|z| m[z]) == self.t.zero(),
            HomKind::Distributive => {
                self.s.zero().map(|z| m[z]) == self.t.zero()
                    && self.s.elements().all(|a| {
                        self.s
                            .compatible_with(a)
                            .iter()
                            .all(|b| match self.s.join2(a, b) {
                                Some(j) => self.t.join2(m[a], m[b]) == Some(m[j]),
                                None => true,
                            })
                    })
            }
        }
    }
}

/// Homomorphisms `S → T` of the given kind extending `fixed`, in
/// lexicographic order of branch choices; stops after `limit`.
pub fn enumerate_homs(
    s: &InvSemigroup,
    t: &InvSemigroup,
    kind: HomKind,
    fixed: &[(ElementId, ElementId)],
    limit: usize,
) -> Vec<Vec<ElementId>> {
    let candidates: Vec<Vec<ElementId>> = if kind == HomKind::Iso {
        let sig_t: Vec<[usize; 8]> = t.elements().map(|b| signature(t, b)).collect();
        s.elements()
            .map(|a| {
                let sa = signature(s, a);
                t.elements().filter(|&b| sig_t[b] == sa).collect()
            })
            .collect()
    } else {
        s.elements()
            .map(|a| {
                if s.is_idempotent(a) {
                    t.idempotents().iter().collect()
                } else {
                    t.elements().collect()
                }
            })
            .collect()
    };
    let mut search = Search {
        s,
        t,
        kind,
        candidates,
        limit,
        found: Vec::new(),
    };
    let mut map = vec![None; s.n()];
    let mut used = vec![false; t.n()];
    let mut start = fixed.to_vec();
    if matches!(kind, HomKind::Zero | HomKind::Distributive | HomKind::Iso) {
        if let (Some(a), Some(b)) = (s.zero(), t.zero()) {
            start.push((a, b));
        }
    }
    for (x, y) in start {
        if !search.propagate(&mut map, &mut used, x, y) {
            return Vec::new();
        }
    }
    search.run(map, used);
    search.found
}

/// An isomorphism `a → b`, if there is one.
pub fn find_isomorphism(a: &InvSemigroup, b: &InvSemigroup) -> Option<Vec<ElementId>> {
    if a.n() != b.n() || a.idempotents().len() != b.idempotents().len() {
        return None;
    }
    enumerate_homs(a, b, HomKind::Iso, &[], 1).pop()
}

pub fn isomorphism(a: &InvSemigroup, b: &InvSemigroup) -> Result<Isomorphism> {
    let map = find_isomorphism(a, b).ok_or_else(|| Error::CheckFailed("not isomorphic".into()))?;
    Isomorphism::from_bijection(a, b, map)
}
