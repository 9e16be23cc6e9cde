//! The universal groupoid: ultrafilters inside the patch topology, the
//! compactness condition, coarse-grained semigroups, and the patch algebra on
//! prime filters of `D(S)`.

use serde::Serialize;

use crate::completion::{distributive_completion, tight_completion};
use crate::coverage::{arrow, Coverage, CoverageKind};
use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::filters::{filter_groupoid, is_tight, is_ultrafilter, FilterClass};
use crate::semigroup::{ElementId, InvSemigroup};
use crate::topology::{basic_sets, patch_sets, patch_topology, TopGroupoid};

fn universal(s: &InvSemigroup) -> Result<TopGroupoid> {
    s.require_zero()?;
    patch_topology(s, filter_groupoid(s, FilterClass::All)?)
}

fn mins_of(tg: &TopGroupoid, a: &ElemSet) -> Vec<ElementId> {
    let fg = tg.filters.as_ref().expect("filter groupoid");
    a.iter().map(|i| fg.mins[i]).collect()
}

/// An ultrafilter inside the smallest patch-open set around a tight filter.
#[derive(Clone, Debug, Serialize)]
pub struct NearbyUltrafilter {
    pub filter: ElementId,
    pub ultrafilter: ElementId,
}

/// A patch-open `U_{x;X}` around a non-tight filter missing every ultrafilter.
#[derive(Clone, Debug, Serialize)]
pub struct Separation {
    pub filter: ElementId,
    pub x: ElementId,
    pub excluded: Vec<ElementId>,
    pub open: Vec<ElementId>,
}

/// Filters are named by their minimum element.
#[derive(Clone, Debug, Serialize)]
pub struct TightClosureReport {
    pub ultra: Vec<ElementId>,
    pub tight: Vec<ElementId>,
    pub closure: Vec<ElementId>,
    pub equal: bool,
    pub nearby: Vec<NearbyUltrafilter>,
    pub separations: Vec<Separation>,
}

/// Closure of the ultrafilters in the universal groupoid against the tight
/// filters, with a witness for every filter.
pub fn tight_closure_check(s: &InvSemigroup) -> Result<TightClosureReport> {
    let gu = universal(s)?;
    let fg = gu.filters.as_ref().expect("filter groupoid");
    let cov = Coverage::builtin(s, CoverageKind::Tight)?;
    let n = fg.mins.len();
    let ultra: ElemSet = (0..n)
        .filter(|&i| is_ultrafilter(s, &fg.filter(s, i)))
        .collect();
    let tight: ElemSet = (0..n)
        .filter(|&i| is_tight(&fg.filter(s, i), &cov))
        .collect();
    let closure = gu.topology.closure(&ultra);
    let basis = patch_sets(s, fg)?;
    let mut nearby = Vec::new();
    let mut separations = Vec::new();
    for i in 0..n {
        let f = fg.filter(s, i);
        if tight.contains(i) {
            if let Some(b) = basis
                .iter()
                .find(|b| b.contains(i) && !b.intersects(&ultra))
            {
                return Err(Error::CheckFailed(format!(
                    "tight filter {} has an ultrafilter-free neighbourhood {b:?}",
                    s.label(f.min)
                )));
            }
            let u = (gu.nbhd(i) & ultra).first().ok_or_else(|| {
                Error::CheckFailed(format!("no ultrafilter near {}", s.label(f.min)))
            })?;
            nearby.push(NearbyUltrafilter {
                filter: f.min,
                ultrafilter: fg.mins[u],
            });
        } else {
            let (x, rest) = f
                .carrier
                .iter()
                .map(|x| (x, s.down(x) - f.carrier))
                .find(|(x, rest)| arrow(s, *x, rest))
                .ok_or_else(|| {
                    Error::CheckFailed(format!("no cover witnesses {} not tight", s.label(f.min)))
                })?;
            let excluded = s.maximal(&rest);
            let open = excluded
                .iter()
                .fold(fg.containing(s, x), |acc, y| acc - fg.containing(s, y));
            if !open.contains(i) || open.intersects(&ultra) || !gu.topology.is_open(&open) {
                return Err(Error::CheckFailed(format!(
                    "separating set for {} is wrong",
                    s.label(f.min)
                )));
            }
            separations.push(Separation {
                filter: f.min,
                x,
                excluded: excluded.iter().collect(),
                open: mins_of(&gu, &open),
            });
        }
    }
    Ok(TightClosureReport {
        ultra: mins_of(&gu, &ultra),
        tight: mins_of(&gu, &tight),
        closure: mins_of(&gu, &closure),
        equal: closure == tight,
        nearby,
        separations,
    })
}

/// The six equivalent forms of the compactness condition, each evaluated on
/// its own.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CompactnessReport {
    pub ultra_closed: bool,
    pub tight_is_ultra: bool,
    pub idempotent_tight_is_ultra: bool,
    pub identity_ultra_closed: bool,
    pub v_decomposition: bool,
    pub tight_completion_weakly_boolean: bool,
    pub agree: bool,
}

impl CompactnessReport {
    pub fn all(&self) -> bool {
        self.agree && self.tight_is_ultra
    }
}

pub fn compactness_condition(s: &InvSemigroup) -> Result<CompactnessReport> {
    let gu = universal(s)?;
    let fg = gu.filters.as_ref().expect("filter groupoid");
    let cov = Coverage::builtin(s, CoverageKind::Tight)?;
    let n = fg.mins.len();
    let ultra: ElemSet = (0..n)
        .filter(|&i| is_ultrafilter(s, &fg.filter(s, i)))
        .collect();
    let tight: ElemSet = (0..n)
        .filter(|&i| is_tight(&fg.filter(s, i), &cov))
        .collect();
    let ids = fg.groupoid.identities();

    let ultra_closed = gu.topology.is_closed(&ultra);
    let tight_is_ultra = tight == ultra;
    let idempotent_tight_is_ultra = (tight & ids) == (ultra & ids);
    let identity_ultra_closed = (gu.topology.closure(&(ultra & ids)) & ids) == (ultra & ids);

    let sets = basic_sets(s, fg);
    let v = |x: ElementId| sets[x] & ultra;
    let z = s.require_zero()?;
    let es = s.idempotents();
    let mut v_decomposition = true;
    'outer: for e in es.iter().filter(|&e| e != z) {
        for f in (s.down(e) & es).iter() {
            let target = v(e) - v(f);
            if target.is_empty() {
                continue;
            }
            let union = (s.down(e) & es)
                .iter()
                .filter(|&g| g != z && v(g).is_subset(&target))
                .fold(ElemSet::new(), |acc, g| acc | v(g));
            if union != target {
                v_decomposition = false;
                break 'outer;
            }
        }
    }

    let tight_completion_weakly_boolean = tight_completion(s)?
        .completion
        .semigroup
        .is_weakly_boolean();
    let flags = [
        ultra_closed,
        tight_is_ultra,
        idempotent_tight_is_ultra,
        identity_ultra_closed,
        v_decomposition,
        tight_completion_weakly_boolean,
    ];
    Ok(CompactnessReport {
        ultra_closed,
        tight_is_ultra,
        idempotent_tight_is_ultra,
        identity_ultra_closed,
        v_decomposition,
        tight_completion_weakly_boolean,
        agree: flags.iter().all(|&b| b == flags[0]),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct OneStep {
    pub e: ElementId,
    pub f: ElementId,
    pub complemented: bool,
    /// One-step restrictions of `e` orthogonal to `f`.
    pub witnesses: Vec<ElementId>,
    /// A nonzero `g ≤ e` with `g ∧ f = 0` below no witness.
    pub counterexample: Option<ElementId>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoarseGrainedReport {
    /// Every idempotent has finitely many one-step restrictions.
    pub locally_finite: bool,
    pub finite_depth: bool,
    /// Steps in the longest chain of idempotents from the top down to 0.
    pub depth: usize,
    pub restrictions: Vec<OneStep>,
    pub coarse_grained: bool,
}

/// One-step restrictions are weakly complemented when every nonzero `g ≤ e`
/// with `g ∧ f = 0` lies below a one-step restriction of `e` orthogonal to
/// `f`; restrictions to `0` are left out.
pub fn coarse_grained_check(s: &InvSemigroup) -> Result<CoarseGrainedReport> {
    let z = s.require_zero()?;
    let es = s.idempotents();
    let mut height = vec![0usize; s.n()];
    let mut order: Vec<ElementId> = es.iter().collect();
    order.sort_by_key(|&e| (s.down(e) & es).len());
    for &e in &order {
        height[e] = s
            .one_step_restrictions(e)
            .iter()
            .map(|f| height[f] + 1)
            .max()
            .unwrap_or(0);
    }
    let depth = es.iter().map(|e| height[e]).max().unwrap_or(0);
    let mut restrictions = Vec::new();
    for e in es.iter().filter(|&e| e != z) {
        let steps = s.one_step_restrictions(e);
        for f in steps.iter().filter(|&f| f != z) {
            let witnesses: ElemSet = steps
                .iter()
                .filter(|&x| x != z && s.mul(x, f) == z)
                .collect();
            let counterexample = (s.down(e) & es)
                .iter()
                .filter(|&g| g != z && s.mul(g, f) == z)
                .find(|&g| !witnesses.iter().any(|w| s.leq(g, w)));
            restrictions.push(OneStep {
                e,
                f,
                complemented: counterexample.is_none(),
                witnesses: witnesses.iter().collect(),
                counterexample,
            });
        }
    }
    let coarse_grained = restrictions.iter().all(|r| r.complemented);
    Ok(CoarseGrainedReport {
        locally_finite: true,
        finite_depth: true,
        depth,
        restrictions,
        coarse_grained,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PatchAlgebraReport {
    pub products: usize,
    pub inverses: usize,
    pub joins: usize,
    pub violation: Option<String>,
}

impl PatchAlgebraReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// On prime filters of `D(S)` with `Y_{s;t} = Y_s ∖ Y_t` (`t ≤ s`):
/// `Y_{s;t} Y_{u;v} = Y_{su; sv∨tu∨tv}`, `Y_{s;t}⁻¹ = Y_{s⁻¹;t⁻¹}`, and
/// `Y_{s∨t; u∨v} = Y_{s;(u∨v)d(s)} ∪ Y_{t;(u∨v)d(t)}`.
pub fn patch_algebra_check(s: &InvSemigroup) -> Result<PatchAlgebraReport> {
    let d = distributive_completion(s)?;
    let t = &d.semigroup;
    let fg = filter_groupoid(t, FilterClass::Prime)?;
    let g = &fg.groupoid;
    let y = basic_sets(t, &fg);
    let ys = |a: ElementId, b: ElementId| y[a] - y[b];
    let mut rep = PatchAlgebraReport {
        products: 0,
        inverses: 0,
        joins: 0,
        violation: None,
    };
    let lub = |xs: &[ElementId]| t.lub(&xs.iter().copied().collect());
    for a in t.elements() {
        for b in t.down(a).iter() {
            rep.inverses += 1;
            if g.set_inv(&ys(a, b)) != ys(t.inv(a), t.inv(b)) {
                rep.violation = Some(format!("inverse law at ({a},{b})"));
                return Ok(rep);
            }
            for u in t.elements() {
                for v in t.down(u).iter() {
                    rep.products += 1;
                    let j = lub(&[t.mul(a, v), t.mul(b, u), t.mul(b, v)]);
                    let ok =
                        j.is_some_and(|j| g.set_mul(&ys(a, b), &ys(u, v)) == ys(t.mul(a, u), j));
                    if !ok {
                        rep.violation = Some(format!("product law at ({a},{b},{u},{v})"));
                        return Ok(rep);
                    }
                }
            }
        }
    }
    for a in t.elements() {
        for b in t.compatible_with(a).iter() {
            let Some(ab) = t.join2(a, b) else { continue };
            for u in t.down(ab).iter() {
                for v in (t.down(ab) & t.compatible_with(u)).iter() {
                    let Some(uv) = t.join2(u, v) else { continue };
                    rep.joins += 1;
                    let lhs = ys(ab, uv);
                    let rhs = ys(a, t.mul(uv, t.d(a))) | ys(b, t.mul(uv, t.d(b)));
                    if lhs != rhs {
                        rep.violation = Some(format!("join law at ({a},{b},{u},{v})"));
                        return Ok(rep);
                    }
                }
            }
        }
    }
    Ok(rep)
}
