//! Finite groupoids as partial multiplication tables.
//!
//! Arrows are dense ids; an identity is an arrow `x` with `d(x) = x`.

use crate::elemset::{ElemSet, MAX_ELEMS};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Groupoid {
    n: usize,
    d: Vec<usize>,
    r: Vec<usize>,
    inv: Vec<usize>,
    mul: Vec<Option<usize>>,
    labels: Vec<String>,
}

impl Groupoid {
    /// Builds a groupoid from its partial product and checks (G1)–(G4).
    pub fn new(mul: Vec<Vec<Option<usize>>>, labels: Vec<String>) -> Result<Self> {
        let n = mul.len();
        if n > MAX_ELEMS {
            return Err(Error::TooLarge {
                what: "groupoid".into(),
                count: n,
                limit: MAX_ELEMS,
            });
        }
        if labels.len() != n || mul.iter().any(|row| row.len() != n) {
            return Err(Error::NotGroupoid("table shape".into()));
        }
        let m = |x: usize, y: usize| mul[x][y];
        if mul.iter().flatten().any(|v| v.is_some_and(|v| v >= n)) {
            return Err(Error::NotGroupoid("entry out of range".into()));
        }
        let is_id = |e: usize| m(e, e) == Some(e);
        let mut d = vec![0; n];
        let mut r = vec![0; n];
        for x in 0..n {
            let ds: Vec<usize> = (0..n).filter(|&e| is_id(e) && m(x, e) == Some(x)).collect();
            let rs: Vec<usize> = (0..n).filter(|&e| is_id(e) && m(e, x) == Some(x)).collect();
            if ds.len() != 1 || rs.len() != 1 {
                return Err(Error::NotGroupoid(format!(
                    "arrow {x} lacks a unique domain or range"
                )));
            }
            d[x] = ds[0];
            r[x] = rs[0];
        }
        let mut inv = vec![0; n];
        for x in 0..n {
            let c: Vec<usize> = (0..n)
                .filter(|&y| m(x, y) == Some(r[x]) && m(y, x) == Some(d[x]))
                .collect();
            if c.len() != 1 {
                return Err(Error::NotGroupoid(format!(
                    "arrow {x} lacks a unique inverse"
                )));
            }
            inv[x] = c[0];
        }
        for x in 0..n {
            for y in 0..n {
                if m(x, y).is_some() != (d[x] == r[y]) {
                    return Err(Error::NotGroupoid(format!(
                        "product {x}*{y} defined wrongly"
                    )));
                }
                if let Some(xy) = m(x, y) {
                    if d[xy] != d[y] || r[xy] != r[x] {
                        return Err(Error::NotGroupoid(format!(
                            "product {x}*{y} has wrong ends"
                        )));
                    }
                    for z in 0..n {
                        if let Some(yz) = m(y, z) {
                            if m(xy, z) != m(x, yz) {
                                return Err(Error::NotGroupoid(format!(
                                    "({x}*{y})*{z} != {x}*({y}*{z})"
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(Groupoid {
            n,
            d,
            r,
            inv,
            mul: mul.into_iter().flatten().collect(),
            labels,
        })
    }

    /// Pair groupoid on `k` objects; arrow `(i, j)` goes from `j` to `i`.
    ///
    /// Identities come first, then `(i, j)` lexicographically.
    pub fn pair(k: usize) -> Result<Self> {
        let mut arrows: Vec<(usize, usize)> = (0..k).map(|i| (i, i)).collect();
        for i in 0..k {
            for j in 0..k {
                if i != j {
                    arrows.push((i, j));
                }
            }
        }
        Self::from_pairs(&arrows)
    }

    /// Groupoid whose arrows `(i, j)` (target, source) form an equivalence
    /// relation listed in `arrows`.
    pub fn from_pairs(arrows: &[(usize, usize)]) -> Result<Self> {
        let n = arrows.len();
        let mut mul = vec![vec![None; n]; n];
        for (x, &(i, j)) in arrows.iter().enumerate() {
            for (y, &(p, q)) in arrows.iter().enumerate() {
                if j == p {
                    let pos = arrows.iter().position(|&a| a == (i, q));
                    let pos = pos.ok_or_else(|| Error::NotGroupoid("not transitive".into()))?;
                    mul[x][y] = Some(pos);
                }
            }
        }
        let labels = arrows.iter().map(|(i, j)| format!("{i}<-{j}")).collect();
        Self::new(mul, labels)
    }

    /// Disjoint union of pair groupoids with the given object counts.
    pub fn discrete(components: &[usize]) -> Result<Self> {
        let mut arrows = Vec::new();
        let mut base = 0;
        for &k in components {
            arrows.extend((base..base + k).map(|i| (i, i)));
            base += k;
        }
        base = 0;
        for &k in components {
            for i in base..base + k {
                for j in base..base + k {
                    if i != j {
                        arrows.push((i, j));
                    }
                }
            }
            base += k;
        }
        Self::from_pairs(&arrows)
    }

    /// A group seen as a one-object groupoid.
    pub fn from_group(table: &[Vec<usize>]) -> Result<Self> {
        let mul = table
            .iter()
            .map(|row| row.iter().map(|&x| Some(x)).collect())
            .collect();
        Self::new(mul, (0..table.len()).map(|i| format!("g{i}")).collect())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn d(&self, x: usize) -> usize {
        self.d[x]
    }

    #[inline]
    pub fn r(&self, x: usize) -> usize {
        self.r[x]
    }

    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.inv[x]
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> Option<usize> {
        self.mul[x * self.n + y]
    }

    pub fn is_identity(&self, x: usize) -> bool {
        self.d[x] == x
    }

    pub fn identities(&self) -> ElemSet {
        (0..self.n).filter(|&x| self.is_identity(x)).collect()
    }

    pub fn all(&self) -> ElemSet {
        ElemSet::full(self.n)
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn set_mul(&self, a: &ElemSet, b: &ElemSet) -> ElemSet {
        let mut out = ElemSet::new();
        for x in a.iter() {
            for y in b.iter() {
                if let Some(z) = self.mul(x, y) {
                    out.insert(z);
                }
            }
        }
        out
    }

    pub fn set_inv(&self, a: &ElemSet) -> ElemSet {
        a.iter().map(|x| self.inv[x]).collect()
    }

    /// `A⁻¹A` and `AA⁻¹` consist of identities.
    pub fn is_bisection(&self, a: &ElemSet) -> bool {
        let ai = self.set_inv(a);
        let ids = self.identities();
        self.set_mul(&ai, a).is_subset(&ids) && self.set_mul(a, &ai).is_subset(&ids)
    }

    /// Arrows with domain `e`.
    pub fn star(&self, e: usize) -> ElemSet {
        (0..self.n).filter(|&x| self.d[x] == e).collect()
    }
}
