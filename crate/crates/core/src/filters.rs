//! Proper filters of a finite inverse semigroup and the groupoids they form.
//!
//! On a finite semigroup every filter is principal, so a filter is stored as
//! its minimum `a` together with the carrier `a↑`.

use serde::{Deserialize, Serialize};

use crate::coverage::{Coverage, CoverageKind};
use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::groupoid::Groupoid;
use crate::semigroup::{ElementId, InvSemigroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Filter {
    pub min: ElementId,
    pub carrier: ElemSet,
}

impl Filter {
    /// `a↑` for nonzero `a`.
    pub fn principal(s: &InvSemigroup, a: ElementId) -> Filter {
        debug_assert!(Some(a) != s.zero());
        Filter {
            min: a,
            carrier: s.up(a),
        }
    }

    pub fn contains(&self, x: ElementId) -> bool {
        self.carrier.contains(x)
    }

    fn check(&self, s: &InvSemigroup) -> Result<()> {
        if self.min >= s.n() || s.up(self.min) != self.carrier || s.zero() == Some(self.min) {
            return Err(Error::DifferentParents);
        }
        Ok(())
    }
}

/// Recognizes an arbitrary subset as a proper filter.
pub fn filter_from_set(s: &InvSemigroup, a: &ElemSet) -> Option<Filter> {
    if a.is_empty() || s.zero().is_some_and(|z| a.contains(z)) {
        return None;
    }
    if s.up_closure(a) != *a {
        return None;
    }
    for x in a.iter() {
        for y in a.iter() {
            if !s.lower_bounds(&ElemSet::singleton(x).with(y)).intersects(a) {
                return None;
            }
        }
    }
    let min = s.least(a)?;
    Some(Filter { min, carrier: *a })
}

/// All proper filters, sorted by minimum.
pub fn all_filters(s: &InvSemigroup) -> Result<Vec<Filter>> {
    let z = s.require_zero()?;
    Ok(s.elements()
        .filter(|&a| a != z)
        .map(|a| Filter::principal(s, a))
        .collect())
}

pub fn filter_inv(s: &InvSemigroup, f: &Filter) -> Result<Filter> {
    f.check(s)?;
    Ok(Filter::principal(s, s.inv(f.min)))
}

/// `d(F) = (F⁻¹F)↑`.
pub fn filter_d(s: &InvSemigroup, f: &Filter) -> Result<Filter> {
    f.check(s)?;
    Ok(Filter::principal(s, s.d(f.min)))
}

/// `r(F) = (FF⁻¹)↑`.
pub fn filter_r(s: &InvSemigroup, f: &Filter) -> Result<Filter> {
    f.check(s)?;
    Ok(Filter::principal(s, s.r(f.min)))
}

/// `A·B = (AB)↑`, defined exactly when `d(A) = r(B)`.
pub fn filter_mul(s: &InvSemigroup, a: &Filter, b: &Filter) -> Result<Option<Filter>> {
    a.check(s)?;
    b.check(s)?;
    if s.d(a.min) != s.r(b.min) {
        return Ok(None);
    }
    Ok(Some(Filter::principal(s, s.mul(a.min, b.min))))
}

/// Maximal among proper filters: the minimum is an atom.
pub fn is_ultrafilter(s: &InvSemigroup, f: &Filter) -> bool {
    let z = s.zero();
    let by_max = s.strictly_below(f.min).iter().all(|b| Some(b) == z);
    debug_assert_eq!(by_max, ultra_by_meeting(s, f));
    by_max
}

/// `F` contains every `b` whose down-set meets the down-set of each member.
pub fn ultra_by_meeting(s: &InvSemigroup, f: &Filter) -> bool {
    s.elements()
        .filter(|&b| f.carrier.iter().all(|a| s.meets(a, b)))
        .all(|b| f.contains(b))
}

/// Some nonzero element lies below every member.
pub fn is_consistent(s: &InvSemigroup, a: &ElemSet) -> bool {
    let lb = s.lower_bounds(a);
    match s.zero() {
        Some(z) => !lb.without(z).is_empty(),
        None => !lb.is_empty(),
    }
}

/// Maximal consistent sets containing `a`, sorted.
pub fn maximal_consistent_supersets(s: &InvSemigroup, a: &ElemSet) -> Vec<ElemSet> {
    let mut lb = s.lower_bounds(a);
    if let Some(z) = s.zero() {
        lb.remove(z);
    }
    let cands: Vec<ElemSet> = lb.iter().map(|b| s.up(b)).collect();
    let mut out: Vec<ElemSet> = cands
        .iter()
        .filter(|c| !cands.iter().any(|d| c != &d && c.is_subset(d)))
        .copied()
        .collect();
    out.sort();
    out.dedup();
    out
}

fn require_distributive(s: &InvSemigroup) -> Result<()> {
    s.require_zero()?;
    if s.is_distributive() {
        Ok(())
    } else {
        Err(Error::NotDistributive)
    }
}

/// `a ∨ b ∈ F` implies `a ∈ F` or `b ∈ F`.
pub fn is_prime(s: &InvSemigroup, f: &Filter) -> Result<bool> {
    require_distributive(s)?;
    let prime = is_prime_unchecked(s, f);
    debug_assert_eq!(prime, completely_prime_unchecked(s, f));
    Ok(prime)
}

fn is_prime_unchecked(s: &InvSemigroup, f: &Filter) -> bool {
    for a in s.elements().filter(|&a| !f.contains(a)) {
        for b in s.compatible_with(a).iter().filter(|&b| !f.contains(b)) {
            if s.join2(a, b).is_some_and(|j| f.contains(j)) {
                return false;
            }
        }
    }
    true
}

/// `⋁ aᵢ ∈ F` implies some `aᵢ ∈ F`, over all nonempty compatible families.
pub fn is_completely_prime(s: &InvSemigroup, f: &Filter) -> Result<bool> {
    require_distributive(s)?;
    Ok(completely_prime_unchecked(s, f))
}

fn completely_prime_unchecked(s: &InvSemigroup, f: &Filter) -> bool {
    // a family with join x lies in x↓, and enlarging it inside x↓ keeps the join
    f.carrier.iter().all(|x| {
        let outside = s.down(x) - f.carrier;
        outside.is_empty() || s.lub(&outside) != Some(x)
    })
}

pub fn is_tight(f: &Filter, cov: &Coverage) -> bool {
    cov.is_c_filter(&f.carrier)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FilterClass {
    All,
    Ultra,
    Prime,
    Tight,
    Dense,
}

impl FilterClass {
    pub fn as_str(self) -> &'static str {
        match self {
            FilterClass::All => "all",
            FilterClass::Ultra => "ultra",
            FilterClass::Prime => "prime",
            FilterClass::Tight => "tight",
            FilterClass::Dense => "dense",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => FilterClass::All,
            "ultra" => FilterClass::Ultra,
            "prime" => FilterClass::Prime,
            "tight" => FilterClass::Tight,
            "dense" => FilterClass::Dense,
            _ => return Err(Error::Parse(format!("unknown filter class {s}"))),
        })
    }
}

/// Minimum elements of the filters in a class, ascending.
pub fn class_mins(s: &InvSemigroup, class: FilterClass) -> Result<Vec<ElementId>> {
    let fs = all_filters(s)?;
    let keep: Box<dyn Fn(&Filter) -> bool> = match class {
        FilterClass::All => Box::new(|_| true),
        FilterClass::Ultra => Box::new(|f| is_ultrafilter(s, f)),
        FilterClass::Prime => {
            require_distributive(s)?;
            Box::new(|f| is_prime_unchecked(s, f))
        }
        FilterClass::Tight | FilterClass::Dense => {
            let kind = if class == FilterClass::Tight {
                CoverageKind::Tight
            } else {
                CoverageKind::Dense
            };
            let cov = Coverage::builtin(s, kind)?;
            return Ok(fs
                .iter()
                .filter(|f| is_tight(f, &cov))
                .map(|f| f.min)
                .collect());
        }
    };
    Ok(fs.iter().filter(|f| keep(f)).map(|f| f.min).collect())
}

/// A class of filters under `A·B = (AB)↑`.
#[derive(Clone, Debug)]
pub struct FilterGroupoid {
    pub class: FilterClass,
    /// Minimum of each arrow.
    pub mins: Vec<ElementId>,
    /// Arrow of each element's principal filter, when it is in the class.
    pub index: Vec<Option<usize>>,
    pub groupoid: Groupoid,
}

impl FilterGroupoid {
    /// Arrows containing `s`: the basic set `Z_s`.
    pub fn containing(&self, sg: &InvSemigroup, s: ElementId) -> ElemSet {
        self.mins
            .iter()
            .enumerate()
            .filter(|&(_, &m)| sg.leq(m, s))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn filter(&self, sg: &InvSemigroup, arrow: usize) -> Filter {
        Filter::principal(sg, self.mins[arrow])
    }
}

pub fn filter_groupoid(s: &InvSemigroup, class: FilterClass) -> Result<FilterGroupoid> {
    let mins = class_mins(s, class)?;
    groupoid_on(s, class, mins)
}

/// The groupoid on an explicit set of filter minima.
pub fn groupoid_on(
    s: &InvSemigroup,
    class: FilterClass,
    mins: Vec<ElementId>,
) -> Result<FilterGroupoid> {
    let mut index = vec![None; s.n()];
    for (i, &m) in mins.iter().enumerate() {
        index[m] = Some(i);
    }
    let lookup = |a: ElementId, what: &str| {
        index[a].ok_or_else(|| {
            Error::ClassNotClosed(format!("{}: {what} {}", class.as_str(), s.label(a)))
        })
    };
    let k = mins.len();
    let mut mul = vec![vec![None; k]; k];
    for (i, &a) in mins.iter().enumerate() {
        lookup(s.inv(a), "inverse of")?;
        lookup(s.d(a), "domain of")?;
        for (j, &b) in mins.iter().enumerate() {
            if s.d(a) == s.r(b) {
                mul[i][j] = Some(lookup(s.mul(a, b), "product")?);
            }
        }
    }
    let labels = mins.iter().map(|&m| s.label(m).to_string()).collect();
    let groupoid = Groupoid::new(mul, labels)?;
    Ok(FilterGroupoid {
        class,
        mins,
        index,
        groupoid,
    })
}
