//! Completions built from compatible order ideals.
//!
//! `C(S)` holds every nonempty compatible order ideal under subset product,
//! `Idl(S)` the ∨-closed ones, and `C(S, C)` those fixed by a coverage
//! closure. The tight completion and the dense pseudogroup run the closed
//! construction on the separative quotient.

use std::collections::HashMap;

use serde::Serialize;

use crate::coverage::{
    separative_quotient, Coverage, CoverageKind, SeparativeQuotient, EXACT_LIMIT,
};
use crate::elemset::{for_each_subset, ElemSet, MAX_ELEMS};
use crate::error::{Error, Result};
use crate::semigroup::{ElementId, InvSemigroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Closure {
    Ideal,
    VeeClosed,
    CClosed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    Schein,
    Idl,
    Dist,
    Closed,
    Tight,
    DensePseudogroup,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompletionElem {
    pub carrier: ElemSet,
    pub closure: Closure,
}

#[derive(Clone, Debug)]
pub struct CompletionSemigroup {
    pub flavor: Flavor,
    /// Semigroup the carriers are subsets of.
    pub parent: InvSemigroup,
    pub elems: Vec<CompletionElem>,
    pub semigroup: InvSemigroup,
    /// Image of each element of the original semigroup.
    pub iota: Vec<ElementId>,
}

impl CompletionSemigroup {
    pub fn index_of(&self, carrier: &ElemSet) -> Option<usize> {
        self.elems.binary_search_by(|e| e.carrier.cmp(carrier)).ok()
    }

    pub fn carrier(&self, i: usize) -> ElemSet {
        self.elems[i].carrier
    }
}

/// Every nonempty compatible order ideal, ascending as bitmasks.
pub fn compatible_ideals(s: &InvSemigroup) -> Result<Vec<ElemSet>> {
    let n = s.n();
    let mut out = Vec::new();
    // ideals correspond to their antichains of maximal elements
    fn rec(s: &InvSemigroup, start: usize, cur: ElemSet, out: &mut Vec<ElemSet>) -> Result<()> {
        if !cur.is_empty() {
            out.push(s.down_closure(&cur));
            if out.len() > MAX_ELEMS {
                return Err(Error::TooLarge {
                    what: "compatible order ideals".into(),
                    count: out.len(),
                    limit: MAX_ELEMS,
                });
            }
        }
        for x in start..s.n() {
            let ok = cur.is_subset(&s.compatible_with(x))
                && !cur.intersects(&s.down(x))
                && !cur.intersects(&s.up(x));
            if ok {
                rec(s, x + 1, cur.with(x), out)?;
            }
        }
        Ok(())
    }
    rec(s, 0, ElemSet::new(), &mut out)?;
    debug_assert!(out.iter().all(|a| a.iter().all(|x| x < n)));
    out.sort();
    Ok(out)
}

/// Smallest superset of an ideal closed under existing binary joins and `↓`.
pub fn vee_closure(s: &InvSemigroup, a: &ElemSet) -> ElemSet {
    let mut cur = s.down_closure(a);
    loop {
        let mut next = cur;
        for x in cur.iter() {
            for y in (cur & s.compatible_with(x)).iter().filter(|&y| y > x) {
                if let Some(j) = s.join2(x, y) {
                    next.insert(j);
                }
            }
        }
        next = s.down_closure(&next);
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

fn label_of(s: &InvSemigroup, a: &ElemSet) -> String {
    let tops: Vec<&str> = s.maximal(a).iter().map(|x| s.label(x)).collect();
    format!("[{}]", tops.join(","))
}

/// Assembles a completion from its carriers and product closure.
fn assemble(
    parent: &InvSemigroup,
    mut carriers: Vec<ElemSet>,
    closure: Closure,
    close: &dyn Fn(ElemSet) -> ElemSet,
    iota: &dyn Fn(ElementId) -> ElemSet,
    flavor: Flavor,
) -> Result<CompletionSemigroup> {
    carriers.sort();
    carriers.dedup();
    if carriers.len() > MAX_ELEMS {
        return Err(Error::TooLarge {
            what: "completion".into(),
            count: carriers.len(),
            limit: MAX_ELEMS,
        });
    }
    let index: HashMap<ElemSet, usize> =
        carriers.iter().enumerate().map(|(i, c)| (*c, i)).collect();
    let k = carriers.len();
    let mut table = vec![vec![0; k]; k];
    for i in 0..k {
        for j in 0..k {
            let prod = close(parent.set_mul(&carriers[i], &carriers[j]));
            table[i][j] = *index.get(&prod).ok_or_else(|| {
                Error::CheckFailed(format!(
                    "product {prod:?} is not an element of the completion"
                ))
            })?;
        }
    }
    let zero = parent
        .zero()
        .and_then(|z| index.get(&ElemSet::singleton(z)).copied());
    let labels = carriers.iter().map(|c| label_of(parent, c)).collect();
    let semigroup = InvSemigroup::verify(table, zero)?.with_labels(labels);
    let iota = parent
        .elements()
        .map(|x| {
            index
                .get(&iota(x))
                .copied()
                .ok_or_else(|| Error::CheckFailed(format!("image of {x} is not an element")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CompletionSemigroup {
        flavor,
        parent: parent.clone(),
        elems: carriers
            .into_iter()
            .map(|carrier| CompletionElem { carrier, closure })
            .collect(),
        semigroup,
        iota,
    })
}

/// `C(S)` with `ι(s) = s↓`.
pub fn schein_completion(s: &InvSemigroup) -> Result<CompletionSemigroup> {
    let ideals = compatible_ideals(s)?;
    let c = assemble(
        s,
        ideals.clone(),
        Closure::Ideal,
        &|p| p,
        &|x| s.down(x),
        Flavor::Schein,
    )?;
    for a in &ideals {
        for b in &ideals {
            let p = s.set_mul(a, b);
            if s.down_closure(&p) != p || !s.is_compatible_set(&p) {
                return Err(Error::CheckFailed(format!(
                    "{a:?}{b:?} is not a compatible ideal"
                )));
            }
        }
    }
    Ok(c)
}

/// `D(S)`: the finitely generated compatible order ideals, which at finite
/// scale are all of them.
pub fn distributive_completion(s: &InvSemigroup) -> Result<CompletionSemigroup> {
    let mut c = schein_completion(s)?;
    c.flavor = Flavor::Dist;
    Ok(c)
}

/// `Idl(S)` for distributive `S`, with product `(AB)^∨`.
pub fn idl_completion(s: &InvSemigroup) -> Result<CompletionSemigroup> {
    if !s.is_distributive() {
        return Err(Error::NotDistributive);
    }
    let carriers: Vec<ElemSet> = compatible_ideals(s)?
        .into_iter()
        .filter(|a| vee_closure(s, a) == *a)
        .collect();
    assemble(
        s,
        carriers,
        Closure::VeeClosed,
        &|p| vee_closure(s, &p),
        &|x| s.down(x),
        Flavor::Idl,
    )
}

/// Finite (compact) elements of a finite completion.
///
/// Every compatible family in a finite semigroup is finite and is its own
/// finite subfamily, so the covering condition holds for every element.
pub fn finite_elements(p: &CompletionSemigroup) -> ElemSet {
    p.semigroup.all()
}

/// Elements of the form `t↓`.
pub fn principal_elements(p: &CompletionSemigroup) -> ElemSet {
    (0..p.elems.len())
        .filter(|&i| {
            let c = p.carrier(i);
            p.parent.greatest(&c).is_some_and(|t| p.parent.down(t) == c)
        })
        .collect()
}

/// Result of checking (N1)–(N4) for a closure on `C(S)`.
#[derive(Clone, Debug, Serialize)]
pub struct NucleusReport {
    pub passed: bool,
    pub violation: Option<String>,
}

/// (N1)–(N4) for `ν` over every pair of compatible order ideals.
pub fn check_nucleus(
    s: &InvSemigroup,
    ideals: &[ElemSet],
    nu: &dyn Fn(&ElemSet) -> ElemSet,
) -> NucleusReport {
    let fail = |v: String| NucleusReport {
        passed: false,
        violation: Some(v),
    };
    let img: Vec<ElemSet> = ideals.iter().map(nu).collect();
    for (a, na) in ideals.iter().zip(&img) {
        if !a.is_subset(na) {
            return fail(format!("N1 at {a:?}"));
        }
        if nu(na) != *na {
            return fail(format!("N3 at {a:?}"));
        }
    }
    for (a, na) in ideals.iter().zip(&img) {
        for (b, nb) in ideals.iter().zip(&img) {
            if a.is_subset(b) && !na.is_subset(nb) {
                return fail(format!("N2 at {a:?} <= {b:?}"));
            }
            if !s.set_mul(na, nb).is_subset(&nu(&s.set_mul(a, b))) {
                return fail(format!("N4 at {a:?}, {b:?}"));
            }
        }
    }
    NucleusReport {
        passed: true,
        violation: None,
    }
}

/// `C(S, C)`: ideals equal to their closure, with product `ν(AB)`.
pub fn closed_completion(cov: &Coverage) -> Result<CompletionSemigroup> {
    if !cov.is_idempotent_pure() {
        return Err(Error::NotIdempotentPure(cov.kind().as_str().into()));
    }
    let s = cov.semigroup();
    let ideals = compatible_ideals(s)?;
    let nu = |a: &ElemSet| cov.closure(a);
    let rep = check_nucleus(s, &ideals, &nu);
    if let Some(v) = rep.violation {
        return Err(Error::CheckFailed(format!("closure is not a nucleus: {v}")));
    }
    let carriers: Vec<ElemSet> = ideals.iter().filter(|a| nu(a) == **a).copied().collect();
    assemble(
        s,
        carriers,
        Closure::CClosed,
        &|p| cov.closure(&p),
        &|x| cov.closure(&s.down(x)),
        Flavor::Closed,
    )
}

/// Tight completion together with the quotient it is built on.
#[derive(Clone, Debug)]
pub struct QuotientCompletion {
    pub quotient: SeparativeQuotient,
    /// Carriers are subsets of the quotient; `iota` maps original elements.
    pub completion: CompletionSemigroup,
}

fn quotient_pipeline(
    s: &InvSemigroup,
    kind: CoverageKind,
    flavor: Flavor,
) -> Result<QuotientCompletion> {
    let cov = Coverage::builtin(s, kind)?;
    let quotient = separative_quotient(&cov)?;
    let qcov = Coverage::builtin(&quotient.quotient, kind)?;
    let mut completion = closed_completion(&qcov)?;
    completion.iota = s
        .elements()
        .map(|a| completion.iota[quotient.sigma[a]])
        .collect();
    completion.flavor = flavor;
    let k = finite_elements(&completion);
    if k.len() != completion.semigroup.n() {
        return Err(Error::CheckFailed(
            "completion has non-finite elements".into(),
        ));
    }
    check_cover_to_join(s, &cov, &completion)?;
    Ok(QuotientCompletion {
        quotient,
        completion,
    })
}

/// `δ(a) = ⋁ δ(X)` for every cover `X` of `a`; minimal covers suffice since
/// the families are upward closed and `δ` is monotone.
fn check_cover_to_join(s: &InvSemigroup, cov: &Coverage, c: &CompletionSemigroup) -> Result<()> {
    let t = &c.semigroup;
    for a in s.elements() {
        let max = s.down(a).len().min(EXACT_LIMIT);
        for x in cov.minimal_covers(a, max) {
            let img: ElemSet = x.iter().map(|y| c.iota[y]).collect();
            if t.lub(&img) != Some(c.iota[a]) {
                return Err(Error::CheckFailed(format!(
                    "cover {x:?} of {a} does not map to a join"
                )));
            }
        }
    }
    Ok(())
}

/// `D_t(S)` with `δ = ι∘σ`.
pub fn tight_completion(s: &InvSemigroup) -> Result<QuotientCompletion> {
    quotient_pipeline(s, CoverageKind::Tight, Flavor::Tight)
}

/// `P_d(S)`, which must be boolean.
pub fn dense_pseudogroup(s: &InvSemigroup) -> Result<QuotientCompletion> {
    let d = quotient_pipeline(s, CoverageKind::Dense, Flavor::DensePseudogroup)?;
    let t = tight_completion(s)?;
    if d.completion.elems != t.completion.elems || d.completion.iota != t.completion.iota {
        return Err(Error::CheckFailed(
            "dense and tight pipelines disagree".into(),
        ));
    }
    if !d.completion.semigroup.is_boolean() {
        return Err(Error::CheckFailed(
            "dense pseudogroup is not boolean".into(),
        ));
    }
    Ok(d)
}

/// `e* = ⋁ {f ∈ E : f ∧ e = 0}`.
pub fn pseudo_complement(p: &InvSemigroup, e: ElementId) -> Option<ElementId> {
    let z = p.zero()?;
    let fs: ElemSet = p
        .idempotents()
        .iter()
        .filter(|&f| p.mul(f, e) == z)
        .collect();
    p.lub(&fs)
}

/// `L∨(S)`: order ideals closed under compatible joins, ordered by inclusion.
#[derive(Clone, Debug)]
pub struct EnvelopingQuantale {
    pub ideals: Vec<ElemSet>,
    pub top: usize,
    pub bottom: usize,
}

/// Closes an order ideal under existing joins of compatible pairs.
pub fn join_closure(s: &InvSemigroup, a: &ElemSet) -> ElemSet {
    vee_closure(s, a)
}

pub fn enveloping_quantale(s: &InvSemigroup) -> Result<EnvelopingQuantale> {
    if !s.is_pseudogroup() {
        return Err(Error::FlavorMismatch(
            "enveloping quantale needs a pseudogroup".into(),
        ));
    }
    let mut downsets = Vec::new();
    fn rec(s: &InvSemigroup, start: usize, cur: ElemSet, out: &mut Vec<ElemSet>) -> Result<()> {
        if !cur.is_empty() {
            out.push(s.down_closure(&cur));
            if out.len() > 1 << 16 {
                return Err(Error::TooLarge {
                    what: "order ideals".into(),
                    count: out.len(),
                    limit: 1 << 16,
                });
            }
        }
        for x in start..s.n() {
            if !cur.intersects(&s.down(x)) && !cur.intersects(&s.up(x)) {
                rec(s, x + 1, cur.with(x), out)?;
            }
        }
        Ok(())
    }
    rec(s, 0, ElemSet::new(), &mut downsets)?;
    let mut ideals: Vec<ElemSet> = downsets
        .into_iter()
        .filter(|a| join_closure(s, a) == *a)
        .collect();
    ideals.sort();
    let all = s.all();
    let top = ideals.iter().position(|a| *a == all).expect("S is closed");
    let bottom = 0;
    Ok(EnvelopingQuantale {
        ideals,
        top,
        bottom,
    })
}

impl EnvelopingQuantale {
    pub fn index_of(&self, a: &ElemSet) -> Option<usize> {
        self.ideals.binary_search(a).ok()
    }

    pub fn join(&self, s: &InvSemigroup, a: usize, b: usize) -> usize {
        let j = join_closure(s, &(self.ideals[a] | self.ideals[b]));
        self.index_of(&j).expect("closed under joins")
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.index_of(&(self.ideals[a] & self.ideals[b]))
            .expect("closed under intersections")
    }
}

/// Subsets of a compatible ideal, for exhaustive closure-law checks.
pub fn ideal_subsets(a: &ElemSet, max: usize) -> Vec<ElemSet> {
    let items: Vec<usize> = a.iter().collect();
    let mut out = Vec::new();
    for_each_subset(&items, max, |x| {
        out.push(x);
        true
    });
    out
}
