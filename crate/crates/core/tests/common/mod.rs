//! Brute-force oracles. Everything here works from raw multiplication tables
//! and the bare definitions, never from the library's derived structure.

#![allow(dead_code)]

use std::collections::BTreeSet;

use ncstone::InvSemigroup;

pub type Set = BTreeSet<usize>;

/// A table with the definitional operations recomputed from scratch.
pub struct Raw {
    pub n: usize,
    pub t: Vec<Vec<usize>>,
    pub zero: Option<usize>,
    pub inv: Vec<usize>,
    le: Vec<Vec<bool>>,
    meet: Vec<Vec<bool>>,
}

impl Raw {
    pub fn of(s: &InvSemigroup) -> Raw {
        let t = s.rows();
        let n = t.len();
        let zero = (0..n).find(|&z| (0..n).all(|x| t[z][x] == z && t[x][z] == z));
        let inv = (0..n)
            .map(|a| {
                (0..n)
                    .find(|&b| t[t[a][b]][a] == a && t[t[b][a]][b] == b)
                    .expect("inverse")
            })
            .collect();
        // a ≤ b iff a = e·b for some idempotent e
        let le: Vec<Vec<bool>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| (0..n).any(|e| t[e][e] == e && t[e][b] == a))
                    .collect()
            })
            .collect();
        let meet = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| (0..n).any(|x| Some(x) != zero && le[x][a] && le[x][b]))
                    .collect()
            })
            .collect();
        Raw {
            n,
            t,
            zero,
            inv,
            le,
            meet,
        }
    }

    pub fn m(&self, a: usize, b: usize) -> usize {
        self.t[a][b]
    }

    pub fn idem(&self, a: usize) -> bool {
        self.t[a][a] == a
    }

    pub fn d(&self, a: usize) -> usize {
        self.m(self.inv[a], a)
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.le[a][b]
    }

    pub fn nonzero(&self) -> Vec<usize> {
        (0..self.n).filter(|&x| Some(x) != self.zero).collect()
    }

    pub fn compatible(&self, a: usize, b: usize) -> bool {
        self.idem(self.m(self.inv[a], b)) && self.idem(self.m(a, self.inv[b]))
    }

    pub fn up(&self, a: usize) -> Set {
        (0..self.n).filter(|&b| self.leq(a, b)).collect()
    }

    pub fn down(&self, a: usize) -> Set {
        (0..self.n).filter(|&b| self.leq(b, a)).collect()
    }

    pub fn is_zero(&self, a: usize) -> bool {
        Some(a) == self.zero
    }

    /// Some nonzero element below both.
    pub fn meets(&self, a: usize, b: usize) -> bool {
        self.meet[a][b]
    }

    /// Least upper bound of `a` in the natural order, if it exists.
    pub fn lub(&self, a: &Set) -> Option<usize> {
        let ubs: Vec<usize> = (0..self.n)
            .filter(|&u| a.iter().all(|&x| self.leq(x, u)))
            .collect();
        ubs.iter()
            .copied()
            .find(|&u| ubs.iter().all(|&v| self.leq(u, v)))
    }

    /// Greatest lower bound, if it exists.
    pub fn glb(&self, a: &Set) -> Option<usize> {
        let lbs: Vec<usize> = (0..self.n)
            .filter(|&l| a.iter().all(|&x| self.leq(l, x)))
            .collect();
        lbs.iter()
            .copied()
            .find(|&l| lbs.iter().all(|&v| self.leq(v, l)))
    }

    /// Join of a compatible pair, if it exists.
    pub fn join2(&self, a: usize, b: usize) -> Option<usize> {
        if !self.compatible(a, b) {
            return None;
        }
        self.lub(&[a, b].into_iter().collect())
    }

    pub fn set_mul(&self, a: &Set, b: &Set) -> Set {
        a.iter()
            .flat_map(|&x| b.iter().map(move |&y| (x, y)))
            .map(|(x, y)| self.m(x, y))
            .collect()
    }

    pub fn down_closure(&self, a: &Set) -> Set {
        (0..self.n)
            .filter(|&y| a.iter().any(|&x| self.leq(y, x)))
            .collect()
    }

    /// Every finite compatible subset has a join and products distribute.
    pub fn distributive(&self) -> bool {
        let Some(z) = self.zero else { return false };
        for a in 0..self.n {
            for b in 0..self.n {
                if !self.compatible(a, b) {
                    continue;
                }
                let Some(j) = self.join2(a, b) else {
                    return false;
                };
                for c in 0..self.n {
                    if self.join2(self.m(c, a), self.m(c, b)) != Some(self.m(c, j))
                        || self.join2(self.m(a, c), self.m(b, c)) != Some(self.m(j, c))
                    {
                        return false;
                    }
                }
            }
        }
        let _ = z;
        true
    }

    /// Distributive and every idempotent has a complement in each larger one.
    pub fn weakly_boolean(&self) -> bool {
        if !self.distributive() {
            return false;
        }
        let z = self.zero.unwrap();
        let idems: Vec<usize> = (0..self.n).filter(|&e| self.idem(e)).collect();
        idems.iter().all(|&e| {
            idems.iter().filter(|&&f| self.leq(f, e)).all(|&f| {
                idems
                    .iter()
                    .any(|&g| self.leq(g, e) && self.m(f, g) == z && self.join2(f, g) == Some(e))
            })
        })
    }

    /// Weakly boolean with binary meets of arbitrary pairs.
    pub fn boolean(&self) -> bool {
        self.weakly_boolean()
            && (0..self.n)
                .all(|a| (0..self.n).all(|b| self.glb(&[a, b].into_iter().collect()).is_some()))
    }
}

/// All subsets of `items`.
pub fn subsets(items: &[usize]) -> Vec<Set> {
    assert!(items.len() < 24, "oracle subset blow-up");
    (0u32..1 << items.len())
        .map(|mask| {
            items
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &x)| x)
                .collect()
        })
        .collect()
}

/// Every proper filter: nonempty, zero-free, up-closed, down-directed.
/// Enumerated as up-closures of antichains of nonzero elements.
pub fn filters(r: &Raw) -> Vec<Set> {
    let nz = r.nonzero();
    let mut out = BTreeSet::new();
    let mut stack: Vec<(usize, Vec<usize>)> = vec![(0, Vec::new())];
    while let Some((i, chosen)) = stack.pop() {
        if i == nz.len() {
            if chosen.is_empty() {
                continue;
            }
            let up: Set = nz
                .iter()
                .copied()
                .filter(|&y| chosen.iter().any(|&x| r.leq(x, y)))
                .collect();
            let directed = up.iter().all(|&a| {
                up.iter()
                    .all(|&b| up.iter().any(|&c| r.leq(c, a) && r.leq(c, b)))
            });
            if directed {
                out.insert(up);
            }
            continue;
        }
        let x = nz[i];
        stack.push((i + 1, chosen.clone()));
        if chosen.iter().all(|&c| !r.leq(c, x) && !r.leq(x, c)) {
            let mut more = chosen;
            more.push(x);
            stack.push((i + 1, more));
        }
    }
    out.into_iter().collect()
}

/// Filters maximal under inclusion among proper filters.
pub fn ultrafilters(r: &Raw) -> Vec<Set> {
    let fs = filters(r);
    fs.iter()
        .filter(|f| !fs.iter().any(|g| g != *f && f.is_subset(g)))
        .cloned()
        .collect()
}

/// Every two members have a common nonzero lower bound, and so does every
/// finite subfamily.
pub fn consistent(r: &Raw, a: &Set) -> bool {
    (0..r.n).any(|l| !r.is_zero(l) && a.iter().all(|&x| r.leq(l, x)))
}

/// Maximal consistent subsets, by exhaustion over all subsets.
pub fn maximal_consistent(r: &Raw) -> Vec<Set> {
    let cons: Vec<Set> = subsets(&r.nonzero())
        .into_iter()
        .filter(|a| !a.is_empty() && consistent(r, a))
        .collect();
    let mut out: Vec<Set> = cons
        .iter()
        .filter(|a| !cons.iter().any(|b| b != *a && a.is_subset(b)))
        .cloned()
        .collect();
    out.sort();
    out
}

/// `a ∨ b ∈ F` forces `a ∈ F` or `b ∈ F`.
pub fn prime(r: &Raw, f: &Set) -> bool {
    (0..r.n).all(|a| {
        (0..r.n).all(|b| match r.join2(a, b) {
            Some(j) if f.contains(&j) => f.contains(&a) || f.contains(&b),
            _ => true,
        })
    })
}

/// `a → X`: each nonzero `x ≤ a` meets some member of `X`.
pub fn arrow(r: &Raw, a: usize, x: &Set) -> bool {
    r.down(a)
        .into_iter()
        .filter(|&y| !r.is_zero(y))
        .all(|y| x.iter().any(|&b| r.meets(y, b)))
}

/// For each `a ∈ F` and each `X ⊆ a↓` with `a → X`, `F` meets `X`.
pub fn tight(r: &Raw, f: &Set) -> bool {
    f.iter().all(|&a| {
        let below: Vec<usize> = r.down(a).into_iter().collect();
        subsets(&below)
            .iter()
            .all(|x| !arrow(r, a, x) || x.iter().any(|y| f.contains(y)))
    })
}

/// Patch basic sets: filters containing `x` and avoiding every member of `X`.
pub fn patch_closure(r: &Raw, fs: &[Set], inside: &[bool]) -> Vec<bool> {
    let mut nbhds: Vec<Vec<usize>> = Vec::new();
    for x in 0..r.n {
        let below: Vec<usize> = r.down(x).into_iter().filter(|&y| y != x).collect();
        for avoid in subsets(&below) {
            let members: Vec<usize> = (0..fs.len())
                .filter(|&i| fs[i].contains(&x) && avoid.iter().all(|y| !fs[i].contains(y)))
                .collect();
            if !members.is_empty() {
                nbhds.push(members);
            }
        }
    }
    (0..fs.len())
        .map(|p| {
            nbhds
                .iter()
                .filter(|u| u.contains(&p))
                .all(|u| u.iter().any(|&q| inside[q]))
        })
        .collect()
}

/// Error class an axiom check should report, scanning the definitions in
/// order: shape, associativity, the declared zero, idempotents commuting,
/// unique inverses.
pub fn verdict(t: &[Vec<usize>], zero: Option<usize>) -> &'static str {
    let n = t.len();
    if n == 0
        || t.iter()
            .any(|row| row.len() != n || row.iter().any(|&x| x >= n))
    {
        return "BadTable";
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if t[t[a][b]][c] != t[a][t[b][c]] {
                    return "NotAssociative";
                }
            }
        }
    }
    if let Some(z) = zero {
        if z >= n || (0..n).any(|x| t[z][x] != z || t[x][z] != z) {
            return "BadZero";
        }
    }
    let idems: Vec<usize> = (0..n).filter(|&e| t[e][e] == e).collect();
    for &e in &idems {
        for &f in &idems {
            if t[e][f] != t[f][e] {
                return "NotInverse";
            }
        }
    }
    for a in 0..n {
        let k = (0..n)
            .filter(|&b| t[t[a][b]][a] == a && t[t[b][a]][b] == b)
            .count();
        if k != 1 {
            return "NotInverse";
        }
    }
    "ok"
}

fn hom_ok(s: &Raw, t: &Raw, map: &[Option<usize>], x: usize) -> bool {
    let y = map[x].unwrap();
    (0..s.n).all(|a| match map[a] {
        None => true,
        Some(b) => {
            let chk = |p: usize, q: usize, pq: usize| match map[pq] {
                Some(v) => v == t.m(p, q),
                None => true,
            };
            chk(y, b, s.m(x, a)) && chk(b, y, s.m(a, x))
        }
    })
}

/// All homomorphisms `s → t` extending `fixed`, by plain backtracking
/// in element order.
pub fn homs(s: &Raw, t: &Raw, fixed: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut map = vec![None; s.n];
    for &(x, y) in fixed {
        if map[x].is_some_and(|v| v != y) {
            return Vec::new();
        }
        map[x] = Some(y);
    }
    for &(x, _) in fixed {
        if !hom_ok(s, t, &map, x) {
            return Vec::new();
        }
    }
    let mut out = Vec::new();
    fn go(s: &Raw, t: &Raw, map: &mut Vec<Option<usize>>, i: usize, out: &mut Vec<Vec<usize>>) {
        if i == s.n {
            out.push(map.iter().map(|y| y.unwrap()).collect());
            return;
        }
        if map[i].is_some() {
            return go(s, t, map, i + 1, out);
        }
        for y in 0..t.n {
            map[i] = Some(y);
            if hom_ok(s, t, map, i) {
                go(s, t, map, i + 1, out);
            }
        }
        map[i] = None;
    }
    go(s, t, &mut map, 0, &mut out);
    out
}

/// Zero to zero and binary compatible joins to joins.
pub fn is_distributive_hom(s: &Raw, t: &Raw, map: &[usize]) -> bool {
    if s.zero.map(|z| map[z]) != t.zero {
        return false;
    }
    (0..s.n).all(|a| {
        (0..s.n).all(|b| match s.join2(a, b) {
            Some(j) => t.join2(map[a], map[b]) == Some(map[j]),
            None => true,
        })
    })
}

/// A bijective homomorphism `a → b` by exhaustive search.
pub fn isomorphic(a: &Raw, b: &Raw) -> Option<Vec<usize>> {
    if a.n != b.n {
        return None;
    }
    let mut map: Vec<Option<usize>> = vec![None; a.n];
    let mut used = vec![false; b.n];
    fn go(a: &Raw, b: &Raw, map: &mut Vec<Option<usize>>, used: &mut Vec<bool>, i: usize) -> bool {
        if i == a.n {
            return true;
        }
        for y in 0..b.n {
            if used[y] || a.idem(i) != b.idem(y) {
                continue;
            }
            map[i] = Some(y);
            used[y] = true;
            if hom_ok(a, b, map, i) && go(a, b, map, used, i + 1) {
                return true;
            }
            used[y] = false;
        }
        map[i] = None;
        false
    }
    go(a, b, &mut map, &mut used, 0).then(|| map.into_iter().map(|y| y.unwrap()).collect())
}

/// Bijective homomorphism check for a given map.
pub fn is_iso(a: &Raw, b: &Raw, map: &[usize]) -> bool {
    let image: Set = map.iter().copied().collect();
    map.len() == a.n
        && image.len() == b.n
        && (0..a.n).all(|x| (0..a.n).all(|y| map[a.m(x, y)] == b.m(map[x], map[y])))
}

/// Compatible order ideals of `r`, by exhaustion over subsets.
pub fn compatible_ideals(r: &Raw) -> Vec<Set> {
    let all: Vec<usize> = (0..r.n).collect();
    subsets(&all)
        .into_iter()
        .filter(|a| r.zero.is_none_or(|z| a.contains(&z)))
        .filter(|a| r.down_closure(a) == *a)
        .filter(|a| a.iter().all(|&x| a.iter().all(|&y| r.compatible(x, y))))
        .collect()
}

/// Smallest superset closed under joins of compatible pairs and down-closed.
pub fn vee_closure(r: &Raw, a: &Set) -> Set {
    let mut cur = r.down_closure(a);
    loop {
        let mut next = cur.clone();
        for &x in &cur {
            for &y in &cur {
                if let Some(j) = r.join2(x, y) {
                    next.insert(j);
                }
            }
        }
        let next = r.down_closure(&next);
        if next == cur {
            return cur;
        }
        cur = next;
    }
}
