//! Finite topologies given by bases, and topological groupoids over them.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::elemset::{ElemSet, MAX_ELEMS};
use crate::error::{Error, Result};
use crate::filters::FilterGroupoid;
use crate::groupoid::Groupoid;
use crate::semigroup::{ElementId, InvSemigroup};

/// Most points for which the open-set lattice is materialized.
pub const LATTICE_POINTS: usize = 20;

/// Most bisections visited while enumerating open bisections.
pub const BISECTION_LIMIT: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Topology {
    points: usize,
    basis: Vec<ElemSet>,
    nbhd: Vec<ElemSet>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TopologyJson {
    pub points: usize,
    pub basis: Vec<String>,
}

impl Topology {
    /// Checks that `basis` covers the points and that intersections of basis
    /// sets are unions of basis sets.
    pub fn new(points: usize, basis: impl IntoIterator<Item = ElemSet>) -> Result<Self> {
        let basis: Vec<ElemSet> = basis
            .into_iter()
            .filter(|b| !b.is_empty())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let all = ElemSet::full(points);
        let mut nbhd = vec![all; points];
        let mut covered = ElemSet::new();
        for b in &basis {
            if !b.is_subset(&all) {
                return Err(Error::CheckFailed(format!(
                    "basis set {b:?} has stray points"
                )));
            }
            covered = covered | *b;
            for p in b.iter() {
                nbhd[p] = nbhd[p] & *b;
            }
        }
        if covered != all {
            return Err(Error::CheckFailed("basis does not cover the points".into()));
        }
        let t = Topology {
            points,
            basis,
            nbhd,
        };
        for (i, a) in t.basis.iter().enumerate() {
            for b in &t.basis[i + 1..] {
                let c = *a & *b;
                if !t.is_open(&c) {
                    return Err(Error::CheckFailed(format!(
                        "{a:?} ∩ {b:?} is not a union of basis sets"
                    )));
                }
            }
        }
        Ok(t)
    }

    pub fn discrete(points: usize) -> Self {
        Self::new(points, (0..points).map(ElemSet::singleton)).expect("singletons form a basis")
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn basis(&self) -> &[ElemSet] {
        &self.basis
    }

    pub fn all(&self) -> ElemSet {
        ElemSet::full(self.points)
    }

    /// Smallest open set containing `p`.
    pub fn nbhd(&self, p: usize) -> ElemSet {
        self.nbhd[p]
    }

    pub fn is_open(&self, a: &ElemSet) -> bool {
        a.iter().all(|p| self.nbhd[p].is_subset(a))
    }

    pub fn interior(&self, a: &ElemSet) -> ElemSet {
        a.iter().filter(|&p| self.nbhd[p].is_subset(a)).collect()
    }

    /// Points every neighbourhood of which meets `a`.
    pub fn closure(&self, a: &ElemSet) -> ElemSet {
        (0..self.points)
            .filter(|&p| self.nbhd[p].intersects(a))
            .collect()
    }

    pub fn is_closed(&self, a: &ElemSet) -> bool {
        self.closure(a) == *a
    }

    pub fn is_discrete(&self) -> bool {
        (0..self.points).all(|p| self.nbhd[p].len() == 1)
    }

    /// Every open set of `self` is open in `other`.
    pub fn is_coarser_than(&self, other: &Topology) -> bool {
        self.points == other.points && self.basis.iter().all(|b| other.is_open(b))
    }

    pub fn is_t0(&self) -> bool {
        (0..self.points).all(|p| (p + 1..self.points).all(|q| self.nbhd[p] != self.nbhd[q]))
    }

    /// Distinct points of `within` have disjoint neighbourhoods there.
    pub fn is_hausdorff_on(&self, within: &ElemSet) -> bool {
        within.iter().all(|p| {
            within
                .iter()
                .filter(|&q| q > p)
                .all(|q| (self.nbhd[p] & self.nbhd[q] & *within).is_empty())
        })
    }

    pub fn is_hausdorff(&self) -> bool {
        self.is_hausdorff_on(&self.all())
    }

    /// Subspace topology, with the old id of each new point.
    pub fn subspace(&self, within: &ElemSet) -> (Topology, Vec<usize>) {
        let ids: Vec<usize> = within.iter().collect();
        let pos: HashMap<usize, usize> = ids.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let restrict =
            |b: &ElemSet| -> ElemSet { (*b & *within).iter().map(|p| pos[&p]).collect() };
        let t = Topology::new(ids.len(), self.basis.iter().map(restrict))
            .expect("restricted basis is a basis");
        (t, ids)
    }

    /// All open sets, ascending as bitmasks.
    pub fn open_sets(&self) -> Result<Vec<ElemSet>> {
        if self.points > LATTICE_POINTS {
            return Err(Error::LatticeTooLarge(self.points));
        }
        let mut seen: BTreeSet<ElemSet> = BTreeSet::new();
        seen.insert(ElemSet::new());
        let mut frontier = vec![ElemSet::new()];
        while let Some(u) = frontier.pop() {
            for p in 0..self.points {
                let v = u | self.nbhd[p];
                if seen.insert(v) {
                    frontier.push(v);
                }
            }
        }
        Ok(seen.into_iter().collect())
    }

    /// Completely prime filters of the frame of opens, each given by its
    /// least member; in a finite frame these are the join-irreducible opens.
    pub fn completely_prime_opens(&self) -> Result<Vec<ElemSet>> {
        let opens = self.open_sets()?;
        let mut out = Vec::new();
        for u in &opens {
            if u.is_empty() {
                continue;
            }
            // every open strictly inside u is a union of neighbourhoods
            // strictly inside u
            let below: ElemSet = u
                .iter()
                .map(|p| self.nbhd[p])
                .filter(|n| n != u)
                .fold(ElemSet::new(), |acc, n| acc | n);
            if below != *u {
                out.push(*u);
            }
        }
        Ok(out)
    }

    /// Every completely prime filter of opens is the neighbourhood filter of
    /// exactly one point.
    pub fn is_sober(&self) -> Result<bool> {
        let primes = self.completely_prime_opens()?;
        let mut hits = vec![0usize; primes.len()];
        for p in 0..self.points {
            match primes.iter().position(|u| *u == self.nbhd[p]) {
                Some(i) => hits[i] += 1,
                None => return Ok(false),
            }
        }
        Ok(hits.iter().all(|&h| h == 1))
    }

    pub fn to_json(&self) -> TopologyJson {
        TopologyJson {
            points: self.points,
            basis: self
                .basis
                .iter()
                .map(|b| b.to_bitstring(self.points))
                .collect(),
        }
    }
}

/// A finite groupoid with a topology on its arrows.
#[derive(Clone, Debug)]
pub struct TopGroupoid {
    pub groupoid: Groupoid,
    pub topology: Topology,
    /// Filter groupoid the arrows come from, if any.
    pub filters: Option<FilterGroupoid>,
}

impl TopGroupoid {
    pub fn new(groupoid: Groupoid, topology: Topology) -> Result<Self> {
        if groupoid.n() != topology.points() {
            return Err(Error::CheckFailed(
                "topology and groupoid differ in size".into(),
            ));
        }
        let tg = TopGroupoid {
            groupoid,
            topology,
            filters: None,
        };
        if let Some(w) = tg.continuity_violation() {
            return Err(Error::CheckFailed(w));
        }
        Ok(tg)
    }

    pub fn discrete(groupoid: Groupoid) -> Self {
        let t = Topology::discrete(groupoid.n());
        TopGroupoid::new(groupoid, t).expect("discrete groupoids are topological")
    }

    /// First point at which multiplication or inversion fails to be continuous.
    pub fn continuity_violation(&self) -> Option<String> {
        let g = &self.groupoid;
        let t = &self.topology;
        for x in 0..g.n() {
            if !g.set_inv(&t.nbhd(x)).is_subset(&t.nbhd(g.inv(x))) {
                return Some(format!("inversion at {}", g.label(x)));
            }
            for y in 0..g.n() {
                if let Some(xy) = g.mul(x, y) {
                    if !g.set_mul(&t.nbhd(x), &t.nbhd(y)).is_subset(&t.nbhd(xy)) {
                        return Some(format!(
                            "multiplication at ({}, {})",
                            g.label(x),
                            g.label(y)
                        ));
                    }
                }
            }
        }
        None
    }

    /// Identities open, minimal neighbourhoods are bisections, and products of
    /// open sets are open.
    pub fn is_etale(&self) -> bool {
        let g = &self.groupoid;
        let t = &self.topology;
        if !t.is_open(&g.identities()) {
            return false;
        }
        if !(0..g.n()).all(|x| g.is_bisection(&t.nbhd(x))) {
            return false;
        }
        (0..g.n()).all(|x| (0..g.n()).all(|y| t.is_open(&g.set_mul(&t.nbhd(x), &t.nbhd(y)))))
    }

    pub fn is_hausdorff(&self) -> bool {
        self.topology.is_hausdorff()
    }

    pub fn is_sober(&self) -> Result<bool> {
        self.topology.is_sober()
    }

    /// Sobriety of the space of identities.
    pub fn identities_sober(&self) -> Result<bool> {
        self.topology
            .subspace(&self.groupoid.identities())
            .0
            .is_sober()
    }

    /// Étale and sober; compact-open bisections are all open bisections here,
    /// so they form a basis closed under products and intersections.
    pub fn is_coherent(&self) -> Result<bool> {
        Ok(self.is_etale() && self.is_sober()?)
    }

    /// Hausdorff étale with a finite hausdorff (so boolean) identity space.
    pub fn is_boolean_groupoid(&self) -> bool {
        self.is_etale() && self.is_hausdorff()
    }

    /// Coherent with a hausdorff identity space.
    pub fn is_weakly_boolean_groupoid(&self) -> Result<bool> {
        Ok(self.is_coherent()? && self.topology.is_hausdorff_on(&self.groupoid.identities()))
    }

    /// Minimal open set containing an arrow.
    pub fn nbhd(&self, x: usize) -> ElemSet {
        self.topology.nbhd(x)
    }

    /// `{"objects", "arrows": [{id,d,r}], "product"}` with product entries
    /// `-1` where undefined.
    pub fn to_json(&self) -> serde_json::Value {
        let g = &self.groupoid;
        let objects: Vec<usize> = g.identities().iter().collect();
        let arrows: Vec<serde_json::Value> = (0..g.n())
            .map(|x| {
                serde_json::json!({
                    "id": x, "label": g.label(x), "d": g.d(x), "r": g.r(x)
                })
            })
            .collect();
        let product: Vec<Vec<i64>> = (0..g.n())
            .map(|x| {
                (0..g.n())
                    .map(|y| g.mul(x, y).map_or(-1, |z| z as i64))
                    .collect()
            })
            .collect();
        serde_json::json!({
            "objects": objects,
            "arrows": arrows,
            "product": product,
            "topology": self.topology.to_json(),
        })
    }

    /// Objects as nodes and non-identity arrows as labelled edges.
    pub fn to_dot(&self) -> String {
        let g = &self.groupoid;
        let mut out = String::from("digraph groupoid {\n");
        for e in g.identities().iter() {
            out.push_str(&format!("  n{e} [label=\"{}\"];\n", escape(g.label(e))));
        }
        for x in (0..g.n()).filter(|&x| !g.is_identity(x)) {
            out.push_str(&format!(
                "  n{} -> n{} [label=\"{}\"];\n",
                g.d(x),
                g.r(x),
                escape(g.label(x))
            ));
        }
        out.push_str("}\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Topology generated by `Z_s`, `s ≠ 0`, with `Z_s Z_t = Z_{st}` and
/// `Z_s⁻¹ = Z_{s⁻¹}` checked.
pub fn basic_topology(s: &InvSemigroup, fg: FilterGroupoid) -> Result<TopGroupoid> {
    let z = s.zero();
    let nonzero = s.elements().filter(|&x| Some(x) != z);
    let sets: Vec<ElemSet> = s.elements().map(|x| fg.containing(s, x)).collect();
    let g = &fg.groupoid;
    for a in s.elements() {
        if g.set_inv(&sets[a]) != sets[s.inv(a)] {
            return Err(Error::CheckFailed(format!("Z_{}⁻¹ differs", s.label(a))));
        }
        for b in s.elements() {
            if g.set_mul(&sets[a], &sets[b]) != sets[s.mul(a, b)] {
                return Err(Error::CheckFailed(format!(
                    "Z_{} Z_{} differs from Z_st",
                    s.label(a),
                    s.label(b)
                )));
            }
        }
    }
    let topology = Topology::new(g.n(), nonzero.map(|x| sets[x]))?;
    let mut tg = TopGroupoid::new(fg.groupoid.clone(), topology)?;
    tg.filters = Some(fg);
    Ok(tg)
}

/// `U_{x;X} = Z_x ∖ ⋃_{y∈X} Z_y` over antichains `X` of nonzero elements
/// strictly below `x`.
pub fn patch_sets(s: &InvSemigroup, fg: &FilterGroupoid) -> Result<Vec<ElemSet>> {
    let z = s.zero();
    let mut out = BTreeSet::new();
    for x in s.elements().filter(|&x| Some(x) != z) {
        let below: Vec<usize> = s
            .strictly_below(x)
            .iter()
            .filter(|&y| Some(y) != z)
            .collect();
        if below.len() > LATTICE_POINTS {
            return Err(Error::TooLarge {
                what: "patch parameters".into(),
                count: below.len(),
                limit: LATTICE_POINTS,
            });
        }
        let zx = fg.containing(s, x);
        fn rec(
            s: &InvSemigroup,
            fg: &FilterGroupoid,
            below: &[usize],
            start: usize,
            chosen: ElemSet,
            cur: ElemSet,
            out: &mut BTreeSet<ElemSet>,
        ) {
            if !cur.is_empty() {
                out.insert(cur);
            }
            for i in start..below.len() {
                let y = below[i];
                if chosen.intersects(&s.down(y)) || chosen.intersects(&s.up(y)) {
                    continue;
                }
                rec(
                    s,
                    fg,
                    below,
                    i + 1,
                    chosen.with(y),
                    cur - fg.containing(s, y),
                    out,
                );
            }
        }
        rec(s, fg, &below, 0, ElemSet::new(), zx, &mut out);
    }
    Ok(out.into_iter().collect())
}

pub fn patch_topology(s: &InvSemigroup, fg: FilterGroupoid) -> Result<TopGroupoid> {
    let basic = basic_topology(s, fg)?;
    let fg = basic.filters.clone().expect("built from filters");
    let topology = Topology::new(fg.groupoid.n(), patch_sets(s, &fg)?)?;
    if !basic.topology.is_coarser_than(&topology) {
        return Err(Error::CheckFailed(
            "patch topology does not refine the basic one".into(),
        ));
    }
    let mut tg = TopGroupoid::new(fg.groupoid.clone(), topology)?;
    tg.filters = Some(fg);
    Ok(tg)
}

/// Open bisections under subset product.
#[derive(Clone, Debug)]
pub struct Bisections {
    pub sets: Vec<ElemSet>,
    pub semigroup: InvSemigroup,
}

impl Bisections {
    pub fn index_of(&self, a: &ElemSet) -> Option<usize> {
        self.sets.binary_search(a).ok()
    }
}

/// `B(G)`, or `KB(G)` with `compact_only`; on a finite space every open set
/// is compact, so both give the same semigroup.
pub fn bisection_semigroup(tg: &TopGroupoid, _compact_only: bool) -> Result<Bisections> {
    let g = &tg.groupoid;
    let mut sets = Vec::new();
    let mut visited = 0usize;
    fn rec(
        tg: &TopGroupoid,
        start: usize,
        cur: ElemSet,
        ds: ElemSet,
        rs: ElemSet,
        sets: &mut Vec<ElemSet>,
        visited: &mut usize,
    ) -> Result<()> {
        *visited += 1;
        if *visited > BISECTION_LIMIT {
            return Err(Error::TooLarge {
                what: "bisections".into(),
                count: *visited,
                limit: BISECTION_LIMIT,
            });
        }
        if tg.topology.is_open(&cur) {
            sets.push(cur);
            if sets.len() > MAX_ELEMS {
                return Err(Error::TooLarge {
                    what: "open bisections".into(),
                    count: sets.len(),
                    limit: MAX_ELEMS,
                });
            }
        }
        let g = &tg.groupoid;
        for x in start..g.n() {
            if !ds.contains(g.d(x)) && !rs.contains(g.r(x)) {
                rec(
                    tg,
                    x + 1,
                    cur.with(x),
                    ds.with(g.d(x)),
                    rs.with(g.r(x)),
                    sets,
                    visited,
                )?;
            }
        }
        Ok(())
    }
    rec(
        tg,
        0,
        ElemSet::new(),
        ElemSet::new(),
        ElemSet::new(),
        &mut sets,
        &mut visited,
    )?;
    sets.sort();
    let index: HashMap<ElemSet, usize> = sets.iter().enumerate().map(|(i, a)| (*a, i)).collect();
    let k = sets.len();
    let mut table = vec![vec![0; k]; k];
    for i in 0..k {
        for j in 0..k {
            let p = g.set_mul(&sets[i], &sets[j]);
            table[i][j] = *index.get(&p).ok_or_else(|| {
                Error::CheckFailed("product of open bisections is not open".into())
            })?;
        }
    }
    let labels = sets
        .iter()
        .map(|a| {
            let names: Vec<&str> = a.iter().map(|x| g.label(x)).collect();
            format!("{{{}}}", names.join(","))
        })
        .collect();
    let semigroup = InvSemigroup::verify(table, Some(0))?.with_labels(labels);
    if !semigroup.is_distributive() {
        return Err(Error::CheckFailed(
            "bisection semigroup is not distributive".into(),
        ));
    }
    Ok(Bisections { sets, semigroup })
}

/// Arrows of a filter groupoid whose filter contains `s`, indexed by element.
pub fn basic_sets(s: &InvSemigroup, fg: &FilterGroupoid) -> Vec<ElemSet> {
    s.elements().map(|x| fg.containing(s, x)).collect()
}

/// Image of a set of elements under a point map.
pub fn map_set(map: &[ElementId], a: &ElemSet) -> ElemSet {
    a.iter().map(|x| map[x]).collect()
}
