//! The maps `ε: S → B(G(S))` and `η: G → G(B(G))`, duality round trips,
//! booleanizations, and predicates on morphisms.

use serde::Serialize;

use crate::completion::{distributive_completion, enveloping_quantale, join_closure};
use crate::coverage::{Coverage, CoverageKind, EXACT_LIMIT};
use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::filters::{
    class_mins, filter_from_set, filter_groupoid, is_prime, Filter, FilterClass, FilterGroupoid,
};
use crate::morphism::{enumerate_homs, HomKind, Isomorphism, Morphism};
use crate::semigroup::{ElementId, InvSemigroup};
use crate::topology::{
    basic_sets, basic_topology, bisection_semigroup, map_set, patch_topology, Bisections,
    TopGroupoid,
};

/// Largest `|S|` and `|T|` at which uniqueness is decided by enumeration.
pub const UNIQUENESS_SCALE: (usize, usize) = (6, 12);

#[derive(Clone, Debug)]
pub struct Epsilon {
    pub groupoid: TopGroupoid,
    pub bisections: Bisections,
    pub morphism: Morphism,
}

/// `s ↦ X_s` into the open bisections of the groupoid of a filter class,
/// checked to be multiplicative and to preserve existing meets and joins.
pub fn epsilon_into(s: &InvSemigroup, class: FilterClass) -> Result<Epsilon> {
    let fg = filter_groupoid(s, class)?;
    let groupoid = basic_topology(s, fg)?;
    let fg = groupoid.filters.as_ref().expect("filter groupoid");
    let bisections = bisection_semigroup(&groupoid, true)?;
    let sets = basic_sets(s, fg);
    let map = sets
        .iter()
        .enumerate()
        .map(|(x, a)| {
            bisections.index_of(a).ok_or_else(|| {
                Error::CheckFailed(format!("X_{} is not an open bisection", s.label(x)))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    for a in s.elements() {
        for b in s.elements() {
            if let Some(m) = s.meet(a, b) {
                if sets[m] != sets[a] & sets[b] {
                    return Err(Error::CheckFailed(format!("ε fails to preserve {a} ∧ {b}")));
                }
            }
            if let Some(j) = s.compatible(a, b).then(|| s.join2(a, b)).flatten() {
                if sets[j] != sets[a] | sets[b] {
                    return Err(Error::CheckFailed(format!("ε fails to preserve {a} ∨ {b}")));
                }
            }
        }
    }
    let morphism = Morphism::new(s.clone(), bisections.semigroup.clone(), map)?;
    Ok(Epsilon {
        groupoid,
        bisections,
        morphism,
    })
}

/// `ε: S → KB(G_P(S))` for distributive `S`.
pub fn epsilon(s: &InvSemigroup) -> Result<Epsilon> {
    if !s.is_distributive() {
        return Err(Error::NotDistributive);
    }
    epsilon_into(s, FilterClass::Prime)
}

#[derive(Clone, Debug, Serialize)]
pub struct PrimeSeparation {
    pub b: ElementId,
    pub a: ElementId,
    /// Minimum of a prime filter containing `b` and omitting `a`.
    pub filter: ElementId,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpatialReport {
    pub spatial: bool,
    pub separations: Vec<PrimeSeparation>,
    /// A pair `b ≰ a` no prime filter separates.
    pub unseparated: Option<(ElementId, ElementId)>,
}

/// `ε` injective, cross-checked against separating prime filters.
pub fn is_spatial(s: &InvSemigroup) -> Result<SpatialReport> {
    let eps = epsilon(s)?;
    let spatial = eps.morphism.is_injective();
    let primes = class_mins(s, FilterClass::Prime)?;
    let mut separations = Vec::new();
    let mut unseparated = None;
    for b in s.elements() {
        for a in s.elements().filter(|&a| !s.leq(b, a)) {
            match primes.iter().find(|&&m| s.leq(m, b) && !s.leq(m, a)) {
                Some(&filter) => separations.push(PrimeSeparation { b, a, filter }),
                None => {
                    unseparated.get_or_insert((b, a));
                }
            }
        }
    }
    if spatial != unseparated.is_none() {
        return Err(Error::CheckFailed(
            "spatiality and prime separation disagree".into(),
        ));
    }
    Ok(SpatialReport {
        spatial,
        separations,
        unseparated,
    })
}

/// A functor between groupoids given on arrows.
fn functor_violation(
    src: &crate::groupoid::Groupoid,
    dst: &crate::groupoid::Groupoid,
    map: &[usize],
) -> Option<String> {
    for x in 0..src.n() {
        for y in 0..src.n() {
            if let Some(xy) = src.mul(x, y) {
                if dst.mul(map[x], map[y]) != Some(map[xy]) {
                    return Some(format!("product of {} and {}", src.label(x), src.label(y)));
                }
            }
        }
    }
    None
}

/// For each identity `e`, arrows out of `e` map bijectively onto arrows out
/// of its image.
fn is_covering(
    src: &crate::groupoid::Groupoid,
    dst: &crate::groupoid::Groupoid,
    map: &[usize],
) -> bool {
    src.identities().iter().all(|e| {
        let image = map_set(map, &src.star(e));
        image.len() == src.star(e).len() && image == dst.star(map[e])
    })
}

#[derive(Clone, Debug)]
pub struct Eta {
    pub bisections: Bisections,
    /// `G_P(B(G))` with its basic topology.
    pub target: TopGroupoid,
    pub map: Vec<usize>,
    pub injective: bool,
    pub surjective: bool,
    pub covering: bool,
}

/// `g ↦ F_g`, the open bisections containing `g`; its least member is the
/// smallest open set around `g`.
pub fn eta(tg: &TopGroupoid) -> Result<Eta> {
    let g = &tg.groupoid;
    let bisections = bisection_semigroup(tg, false)?;
    let b = &bisections.semigroup;
    let fg = filter_groupoid(b, FilterClass::Prime)?;
    let target = basic_topology(b, fg)?;
    let fg = target.filters.as_ref().expect("filter groupoid");
    let mut map = Vec::with_capacity(g.n());
    for x in 0..g.n() {
        let n = tg.nbhd(x);
        let m = bisections.index_of(&n).ok_or_else(|| {
            Error::CheckFailed(format!("no least open bisection around {}", g.label(x)))
        })?;
        let f = Filter::principal(b, m);
        let expected: ElemSet = (0..b.n())
            .filter(|&i| bisections.sets[i].contains(x))
            .collect();
        if f.carrier != expected {
            return Err(Error::CheckFailed(format!(
                "F_{} is not principal",
                g.label(x)
            )));
        }
        if !is_prime(b, &f)? {
            return Err(Error::CheckFailed(format!(
                "F_{} is not completely prime",
                g.label(x)
            )));
        }
        map.push(fg.index[m].expect("prime filters are arrows"));
    }
    if let Some(w) = functor_violation(g, &fg.groupoid, &map) {
        return Err(Error::CheckFailed(format!("η is not a functor at {w}")));
    }
    // η⁻¹(X_A) = A for every open bisection A
    for (i, a) in bisections.sets.iter().enumerate() {
        let xa = fg.containing(b, i);
        let pre: ElemSet = (0..g.n()).filter(|&x| xa.contains(map[x])).collect();
        if pre != *a {
            return Err(Error::CheckFailed("η is not continuous".into()));
        }
    }
    let image = map_set(&map, &g.all());
    let injective = image.len() == g.n();
    let surjective = image == fg.groupoid.all();
    let covering = is_covering(g, &fg.groupoid, &map);
    Ok(Eta {
        bisections,
        target,
        map,
        injective,
        surjective,
        covering,
    })
}

#[derive(Clone, Debug)]
pub struct Roundtrip {
    pub epsilon: Epsilon,
    pub iso: Isomorphism,
}

/// `ε: S ≅ KB(G_P(S))` for boolean `S`, with `G_P(S) = G_M(S)`.
pub fn boolean_duality_roundtrip(s: &InvSemigroup) -> Result<Roundtrip> {
    if !s.is_boolean() {
        return Err(Error::NotBoolean);
    }
    weakly_boolean_roundtrip(s)
}

/// The same round trip for weakly boolean `S`.
pub fn weakly_boolean_roundtrip(s: &InvSemigroup) -> Result<Roundtrip> {
    if !s.is_weakly_boolean() {
        return Err(Error::NotWeaklyBoolean);
    }
    if class_mins(s, FilterClass::Prime)? != class_mins(s, FilterClass::Ultra)? {
        return Err(Error::CheckFailed(
            "prime filters differ from ultrafilters".into(),
        ));
    }
    let epsilon = epsilon(s)?;
    let iso = Isomorphism::from_bijection(
        &epsilon.morphism.source,
        &epsilon.morphism.target,
        epsilon.morphism.map.clone(),
    )?;
    Ok(Roundtrip { epsilon, iso })
}

/// `η: G ≅ G_P(KB(G))` as groupoids and spaces, for boolean groupoids.
pub fn groupoid_roundtrip(tg: &TopGroupoid) -> Result<Eta> {
    if !tg.is_boolean_groupoid() {
        return Err(Error::CheckFailed("groupoid is not boolean".into()));
    }
    let e = eta(tg)?;
    if !(e.injective && e.surjective && e.covering) {
        return Err(Error::CheckFailed("η is not bijective".into()));
    }
    for x in 0..tg.groupoid.n() {
        if map_set(&e.map, &tg.nbhd(x)) != e.target.nbhd(e.map[x]) {
            return Err(Error::CheckFailed("η is not a homeomorphism".into()));
        }
    }
    Ok(e)
}

#[derive(Clone, Debug)]
pub struct Booleanization {
    /// `G_u(S)`: all filters with the patch topology.
    pub universal: TopGroupoid,
    pub bisections: Bisections,
    /// `β(s) = U_s`.
    pub beta: Morphism,
    /// `G_P(D(S))` with the patch topology.
    pub prime_groupoid: TopGroupoid,
    /// `a↑ ↦` the prime filter of `D(S)` with least member `a↓`.
    pub point_map: Vec<usize>,
}

/// `B(S) = KB(G_u(S))`, with `G_u(S) ≅ G_P(D(S))` checked as groupoids and
/// as spaces.
pub fn first_booleanization(s: &InvSemigroup) -> Result<Booleanization> {
    s.require_zero()?;
    let universal = patch_topology(s, filter_groupoid(s, FilterClass::All)?)?;
    let fu = universal.filters.as_ref().expect("filter groupoid");
    let bisections = bisection_semigroup(&universal, true)?;
    let beta_map = basic_sets(s, fu)
        .iter()
        .map(|u| {
            bisections
                .index_of(u)
                .ok_or_else(|| Error::CheckFailed("U_s is not an open bisection".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let beta = Morphism::new(s.clone(), bisections.semigroup.clone(), beta_map)?;

    let d = distributive_completion(s)?;
    let t = &d.semigroup;
    let prime_groupoid = patch_topology(t, filter_groupoid(t, FilterClass::Prime)?)?;
    let fp = prime_groupoid.filters.as_ref().expect("filter groupoid");
    let point_map = fu
        .mins
        .iter()
        .map(|&a| {
            fp.index[d.iota[a]]
                .ok_or_else(|| Error::CheckFailed(format!("{}↓ is not prime", s.label(a))))
        })
        .collect::<Result<Vec<_>>>()?;
    let image = map_set(&point_map, &universal.groupoid.all());
    if image.len() != point_map.len() || image != prime_groupoid.groupoid.all() {
        return Err(Error::CheckFailed("point map is not a bijection".into()));
    }
    if let Some(w) = functor_violation(&universal.groupoid, &prime_groupoid.groupoid, &point_map) {
        return Err(Error::CheckFailed(format!(
            "point map is not a functor at {w}"
        )));
    }
    for x in 0..point_map.len() {
        if map_set(&point_map, &universal.nbhd(x)) != prime_groupoid.nbhd(point_map[x]) {
            return Err(Error::CheckFailed(
                "point map is not a homeomorphism".into(),
            ));
        }
    }
    Ok(Booleanization {
        universal,
        bisections,
        beta,
        prime_groupoid,
        point_map,
    })
}

#[derive(Clone, Debug)]
pub struct Universality {
    pub booleanization: Booleanization,
    /// `θ̄: B(S) → T` with `θ̄β = θ`.
    pub bar: Morphism,
    /// Number of distributive extensions of `θ` along `β`, when enumerated.
    pub extensions: Option<usize>,
}

/// Builds `θ̄` from `θ̄({a↑}) = θ(a) ∖ ⋁θ(a↓ ∖ {a})`, extended over unions.
pub fn second_booleanization_universality(
    s: &InvSemigroup,
    t: &InvSemigroup,
    theta: &[ElementId],
) -> Result<Universality> {
    if !t.is_weakly_boolean() {
        return Err(Error::NotWeaklyBoolean);
    }
    let theta_m = Morphism::new(s.clone(), t.clone(), theta.to_vec())?;
    for p in class_mins(t, FilterClass::Prime)? {
        let carrier = t.up(p);
        let pre: ElemSet = s
            .elements()
            .filter(|&x| carrier.contains(theta[x]))
            .collect();
        if !pre.is_empty() && filter_from_set(s, &pre).is_none() {
            return Err(Error::PreimageNotFilter(pre.iter().collect()));
        }
    }
    let b = first_booleanization(s)?;
    let fu = b.universal.filters.as_ref().expect("filter groupoid");
    let tz = t.require_zero()?;
    let z = s.require_zero()?;
    let point_value = |a: ElementId| -> Result<ElementId> {
        let below: ElemSet = s.strictly_below(a).iter().filter(|&x| x != z).collect();
        let image: ElemSet = below.iter().map(|x| theta[x]).collect();
        let j = t
            .join(&image)?
            .ok_or_else(|| Error::CheckFailed("images below a point have no join".into()))?;
        t.relative_complement(theta[a], j)
    };
    let singles = fu
        .mins
        .iter()
        .map(|&a| point_value(a))
        .collect::<Result<Vec<_>>>()?;
    let mut map = Vec::with_capacity(b.bisections.sets.len());
    for a in &b.bisections.sets {
        let parts: ElemSet = a.iter().map(|p| singles[p]).collect();
        let v = if parts.is_empty() {
            tz
        } else {
            t.join(&parts)
                .map_err(|e| Error::CheckFailed(format!("pieces of θ̄ are not compatible: {e}")))?
                .ok_or_else(|| Error::CheckFailed("pieces of θ̄ have no join".into()))?
        };
        map.push(v);
    }
    let bar = Morphism::new(b.bisections.semigroup.clone(), t.clone(), map)?;
    if !bar.preserves_zero() || !bar.preserves_joins() {
        return Err(Error::CheckFailed(
            "θ̄ is not a morphism of distributive semigroups".into(),
        ));
    }
    let factored = b.beta.compose(&bar)?;
    if factored.map != theta_m.map {
        return Err(Error::CheckFailed("θ̄β ≠ θ".into()));
    }
    let extensions = (s.n() <= UNIQUENESS_SCALE.0 && t.n() <= UNIQUENESS_SCALE.1).then(|| {
        let fixed: Vec<(usize, usize)> = s.elements().map(|x| (b.beta.map[x], theta[x])).collect();
        enumerate_homs(&b.bisections.semigroup, t, HomKind::Distributive, &fixed, 2).len()
    });
    Ok(Universality {
        booleanization: b,
        bar,
        extensions,
    })
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct MorphismPredicates {
    pub is_meet_morphism: bool,
    pub is_callitic: Option<bool>,
    pub is_hypercallitic: Option<bool>,
    /// `[θ(S)↓]^∨ = T` in the enveloping quantales.
    pub quantale_top_preserved: Option<bool>,
    pub is_idempotent_pure: bool,
    pub is_tight_map: Option<bool>,
    pub is_dense_map: Option<bool>,
    pub satisfies_dc1: Option<bool>,
    pub satisfies_dc2: Option<bool>,
}

/// `θ(a) = ⋁θ(X)` for every cover `X` of `a`.
pub fn is_cover_to_join(theta: &Morphism, cov: &Coverage) -> bool {
    let (s, t) = (&theta.source, &theta.target);
    s.elements().all(|a| {
        let max = s.down(a).len().min(EXACT_LIMIT);
        cov.minimal_covers(a, max).iter().all(|x| {
            let img: ElemSet = x.iter().map(|y| theta.map[y]).collect();
            t.lub(&img) == Some(theta.map[a])
        })
    })
}

fn meet_morphism(theta: &Morphism) -> bool {
    let (s, t) = (&theta.source, &theta.target);
    s.elements().all(|a| {
        s.elements().all(|b| match s.meet(a, b) {
            Some(m) => t.meet(theta.map[a], theta.map[b]) == Some(theta.map[m]),
            None => true,
        })
    })
}

fn hypercallitic(theta: &Morphism) -> bool {
    let (s, t) = (&theta.source, &theta.target);
    t.elements().all(|x| {
        let parts: ElemSet = s
            .elements()
            .filter_map(|a| t.meet(x, theta.map[a]))
            .collect();
        t.lub(&parts) == Some(x)
    })
}

fn quantale_top(theta: &Morphism) -> Result<bool> {
    let (s, t) = (&theta.source, &theta.target);
    let qs = enveloping_quantale(s)?;
    let qt = enveloping_quantale(t)?;
    let top = qs.ideals[qs.top];
    let image = t.down_closure(&map_set(&theta.map, &top));
    Ok(join_closure(t, &image) == qt.ideals[qt.top])
}

/// Evaluates each predicate by its quantifiers, then checks that
/// hypercallitic maps are callitic, callitic maps into spatial targets are
/// hypercallitic, and hypercallitic matches the quantale criterion.
pub fn morphism_predicates(theta: &Morphism) -> Result<MorphismPredicates> {
    let (s, t) = (&theta.source, &theta.target);
    if !t.is_distributive() {
        return Err(Error::FlavorMismatch("target is not distributive".into()));
    }
    let is_meet_morphism = meet_morphism(theta);
    let is_idempotent_pure = s
        .elements()
        .all(|a| !t.is_idempotent(theta.map[a]) || s.is_idempotent(a));
    let t_primes = class_mins(t, FilterClass::Prime)?;
    let image = map_set(&theta.map, &s.all());
    let meets_every_prime = t_primes.iter().all(|&p| t.up(p).intersects(&image));
    let pseudogroups = s.is_pseudogroup() && t.is_pseudogroup();
    let pseudo_morphism = theta.preserves_zero() && theta.preserves_joins();
    let is_callitic =
        pseudogroups.then_some(is_meet_morphism && pseudo_morphism && meets_every_prime);
    let is_hypercallitic = pseudogroups.then(|| hypercallitic(theta));
    let quantale_top_preserved = if pseudogroups {
        match quantale_top(theta) {
            Ok(b) => Some(b),
            Err(Error::TooLarge { .. }) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let dist = s.is_distributive();
    let satisfies_dc1 = dist.then(|| {
        t.elements().all(|x| {
            s.elements().all(|a| {
                s.elements().all(|b| {
                    !(t.leq(x, theta.map[a]) && t.leq(x, theta.map[b]))
                        || (s.down(a) & s.down(b))
                            .iter()
                            .any(|c| t.leq(x, theta.map[c]))
                })
            })
        })
    });
    let satisfies_dc2 = dist.then_some(meets_every_prime);
    let (is_tight_map, is_dense_map) = if s.zero().is_some() {
        let tight = Coverage::builtin(s, CoverageKind::Tight)?;
        let dense = Coverage::builtin(s, CoverageKind::Dense)?;
        (
            Some(is_cover_to_join(theta, &tight)),
            Some(is_cover_to_join(theta, &dense)),
        )
    } else {
        (None, None)
    };
    if let (Some(c), Some(h)) = (is_callitic, is_hypercallitic) {
        let pseudo_meet = is_meet_morphism && pseudo_morphism;
        if pseudo_meet && h && !c {
            return Err(Error::CheckFailed(
                "hypercallitic map is not callitic".into(),
            ));
        }
        if c && !h && epsilon(t)?.morphism.is_injective() {
            return Err(Error::CheckFailed(
                "callitic map into a spatial target is not hypercallitic".into(),
            ));
        }
        if let Some(q) = quantale_top_preserved {
            if pseudo_morphism && q != h {
                return Err(Error::CheckFailed(
                    "quantale criterion disagrees with hypercallitic".into(),
                ));
            }
        }
    }
    Ok(MorphismPredicates {
        is_meet_morphism,
        is_callitic,
        is_hypercallitic,
        quantale_top_preserved,
        is_idempotent_pure,
        is_tight_map,
        is_dense_map,
        satisfies_dc1,
        satisfies_dc2,
    })
}

#[derive(Clone, Debug)]
pub struct Pullback {
    /// `G_P(T)`.
    pub source: FilterGroupoid,
    /// `G_P(S)`.
    pub target: FilterGroupoid,
    /// `F ↦ θ⁻¹(F)` on arrows.
    pub map: Vec<usize>,
}

/// `θ⁻¹: G_P(T) → G_P(S)`, a continuous covering functor for callitic `θ`.
pub fn pullback_functor(theta: &Morphism) -> Result<Pullback> {
    let (s, t) = (&theta.source, &theta.target);
    if !s.is_distributive() {
        return Err(Error::FlavorMismatch("source is not distributive".into()));
    }
    let p = morphism_predicates(theta)?;
    let callitic = p
        .is_callitic
        .unwrap_or(p.satisfies_dc1 == Some(true) && p.satisfies_dc2 == Some(true));
    if !callitic {
        return Err(Error::NotCallitic);
    }
    let source = filter_groupoid(t, FilterClass::Prime)?;
    let target = filter_groupoid(s, FilterClass::Prime)?;
    let mut map = Vec::with_capacity(source.mins.len());
    for &m in &source.mins {
        let carrier = t.up(m);
        let pre: ElemSet = s
            .elements()
            .filter(|&x| carrier.contains(theta.map[x]))
            .collect();
        let f = filter_from_set(s, &pre).ok_or_else(|| {
            Error::CheckFailed(format!("preimage of {}↑ is not a filter", t.label(m)))
        })?;
        let arrow = target.index[f.min].ok_or_else(|| {
            Error::CheckFailed(format!("preimage of {}↑ is not prime", t.label(m)))
        })?;
        map.push(arrow);
    }
    if let Some(w) = functor_violation(&source.groupoid, &target.groupoid, &map) {
        return Err(Error::CheckFailed(format!("θ⁻¹ is not a functor at {w}")));
    }
    if !is_covering(&source.groupoid, &target.groupoid, &map) {
        return Err(Error::CheckFailed("θ⁻¹ is not a covering functor".into()));
    }
    for x in s.elements() {
        let pre: ElemSet = (0..map.len())
            .filter(|&i| target.containing(s, x).contains(map[i]))
            .collect();
        if pre != source.containing(t, theta.map[x]) {
            return Err(Error::CheckFailed("θ⁻¹ is not continuous".into()));
        }
    }
    Ok(Pullback {
        source,
        target,
        map,
    })
}

#[derive(Clone, Debug)]
pub struct NucleusFromMorphism {
    /// `ν = θ*θ` on elements of `S`.
    pub nu: Vec<ElementId>,
    /// Fixed points of `ν`, ascending; element `i` of the quotient is `fixed[i]`.
    pub fixed: Vec<ElementId>,
    pub iso: Isomorphism,
}

/// `θ*(t) = ⋁{s : θ(s) ≤ t}` and `ν = θ*θ`, with (N1)–(N4) and `S_ν ≅ T`.
pub fn nucleus_from_morphism(theta: &Morphism) -> Result<NucleusFromMorphism> {
    let (s, t) = (&theta.source, &theta.target);
    if !s.is_distributive() || !t.is_distributive() {
        return Err(Error::FlavorMismatch(
            "nuclei need distributive semigroups".into(),
        ));
    }
    if !theta.is_surjective() {
        return Err(Error::NotSurjective);
    }
    if let Some(a) = s
        .elements()
        .find(|&a| t.is_idempotent(theta.map[a]) && !s.is_idempotent(a))
    {
        return Err(Error::NotIdempotentPure(format!(
            "θ({}) is idempotent",
            s.label(a)
        )));
    }
    let star = |x: ElementId| -> Result<ElementId> {
        let below: ElemSet = s.elements().filter(|&a| t.leq(theta.map[a], x)).collect();
        s.join(&below)?
            .ok_or_else(|| Error::CheckFailed("θ* has no value".into()))
    };
    let nu = s
        .elements()
        .map(|a| star(theta.map[a]))
        .collect::<Result<Vec<_>>>()?;
    for a in s.elements() {
        if !s.leq(a, nu[a]) || nu[nu[a]] != nu[a] {
            return Err(Error::CheckFailed(format!(
                "ν fails N1 or N3 at {}",
                s.label(a)
            )));
        }
        for b in s.elements() {
            if s.leq(a, b) && !s.leq(nu[a], nu[b]) {
                return Err(Error::CheckFailed("ν fails N2".into()));
            }
            if !s.leq(s.mul(nu[a], nu[b]), nu[s.mul(a, b)]) {
                return Err(Error::CheckFailed("ν fails N4".into()));
            }
        }
    }
    let fixed: Vec<ElementId> = s.elements().filter(|&a| nu[a] == a).collect();
    let pos = |a: ElementId| fixed.binary_search(&a).expect("fixed point");
    let table = fixed
        .iter()
        .map(|&a| fixed.iter().map(|&b| pos(nu[s.mul(a, b)])).collect())
        .collect();
    let zero = s.zero().map(|z| pos(nu[z]));
    let labels = fixed.iter().map(|&a| s.label(a).to_string()).collect();
    let quotient = InvSemigroup::verify(table, zero)?.with_labels(labels);
    let map = fixed.iter().map(|&a| theta.map[a]).collect();
    let iso = Isomorphism::from_bijection(&quotient, t, map)?;
    Ok(NucleusFromMorphism { nu, fixed, iso })
}
