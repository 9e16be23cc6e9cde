//! The twelve acceptance criteria. Each prints one PASS/FAIL line; the
//! process exits nonzero if any fails.

mod common;

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use common::{Raw, Set};
use ncstone::completion::{
    check_nucleus, compatible_ideals, dense_pseudogroup, finite_elements, idl_completion,
    pseudo_complement, tight_completion, vee_closure,
};
use ncstone::coverage::{check_axioms, Coverage, CoverageKind};
use ncstone::duality::{
    boolean_duality_roundtrip, first_booleanization, groupoid_roundtrip,
    second_booleanization_universality,
};
use ncstone::filters::{
    all_filters, class_mins, is_ultrafilter, maximal_consistent_supersets, ultra_by_meeting,
    FilterClass,
};
use ncstone::gen::{self, CORPUS};
use ncstone::groupoid::Groupoid;
use ncstone::topology::TopGroupoid;
use ncstone::universal::{
    coarse_grained_check, compactness_condition, patch_algebra_check, tight_closure_check,
};
use ncstone::{ElemSet, InvSemigroup};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

fn to_set(a: &ElemSet) -> Set {
    a.iter().collect()
}

fn to_elems(a: &Set) -> ElemSet {
    a.iter().copied().collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn corpus() -> Vec<(String, InvSemigroup)> {
    gen::test_corpus()
}

fn axiom_suite() -> Outcome {
    let names = [
        "sym_inv:2",
        "sym_inv:3",
        "brandt:2",
        "brandt:3",
        "chain:2",
        "chain:3",
        "chain:4",
        "chain:5",
        "boolean:1",
        "boolean:2",
        "boolean:3",
    ];
    let tables: Vec<(Vec<Vec<usize>>, Option<usize>)> = names
        .iter()
        .map(|n| {
            let s = gen::by_name(n).unwrap();
            (s.rows(), s.zero())
        })
        .collect();
    for (name, (t, z)) in names.iter().zip(&tables) {
        ensure(common::verdict(t, *z) == "ok", || {
            format!("oracle rejects {name}")
        })?;
        InvSemigroup::verify(t.clone(), *z).map_err(|e| format!("{name}: {e}"))?;
    }
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut rejected = 0;
    let mut tries = 0;
    while rejected < 20 {
        tries += 1;
        ensure(tries < 10_000, || {
            "could not find 20 invalid mutations".into()
        })?;
        let k = rng.gen_range(0..tables.len());
        let (mut t, z) = tables[k].clone();
        let n = t.len();
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let v = (t[i][j] + rng.gen_range(1..n.max(2))) % n;
        if v == t[i][j] {
            continue;
        }
        t[i][j] = v;
        let expect = common::verdict(&t, z);
        if expect == "ok" {
            continue;
        }
        match InvSemigroup::verify(t, z) {
            Ok(_) => return Err(format!("{} mutated at ({i},{j}) was accepted", names[k])),
            Err(e) if e.kind() != expect => {
                return Err(format!(
                    "{} mutated at ({i},{j}): got {}, oracle says {expect}",
                    names[k],
                    e.kind()
                ))
            }
            Err(_) => rejected += 1,
        }
    }
    Ok(format!("{} accepted, 20 mutations rejected", names.len()))
}

fn filter_structure() -> Outcome {
    let mut checked = 0;
    for (name, s) in corpus().into_iter().filter(|(_, s)| s.n() <= 30) {
        let r = Raw::of(&s);
        let lib: BTreeSet<Set> = all_filters(&s)
            .map_err(|e| e.to_string())?
            .iter()
            .map(|f| to_set(&f.carrier))
            .collect();
        let oracle: BTreeSet<Set> = common::filters(&r).into_iter().collect();
        ensure(lib == oracle, || format!("{name}: filter lists differ"))?;

        let ultra: BTreeSet<Set> = common::ultrafilters(&r).into_iter().collect();
        let maxcons: BTreeSet<Set> = common::maximal_consistent(&r).into_iter().collect();
        ensure(maxcons == ultra, || {
            format!("{name}: maximal consistent sets are not the ultrafilters")
        })?;
        let lib_max: BTreeSet<Set> = maximal_consistent_supersets(&s, &ElemSet::new())
            .iter()
            .map(to_set)
            .collect();
        ensure(lib_max == maxcons, || {
            format!("{name}: maximal consistent sets disagree with the oracle")
        })?;
        for f in all_filters(&s).map_err(|e| e.to_string())? {
            let u = ultra.contains(&to_set(&f.carrier));
            ensure(is_ultrafilter(&s, &f) == u, || {
                format!("{name}: ultrafilter test wrong at {}", s.label(f.min))
            })?;
            ensure(ultra_by_meeting(&s, &f) == u, || {
                format!("{name}: meeting criterion wrong at {}", s.label(f.min))
            })?;
        }
        checked += 1;
    }
    Ok(format!("{checked} semigroups"))
}

fn mins_of(r: &Raw, sets: &[Set]) -> Vec<usize> {
    let mut out: Vec<usize> = sets
        .iter()
        .map(|f| {
            *f.iter()
                .find(|&&a| f.iter().all(|&b| r.leq(a, b)))
                .expect("principal")
        })
        .collect();
    out.sort();
    out
}

fn prime_ultra_boolean() -> Outcome {
    let mut checked = 0;
    for (name, s) in corpus() {
        let r = Raw::of(&s);
        if !(0..r.n).all(|a| r.idem(a)) || !r.distributive() {
            continue;
        }
        let fs = common::filters(&r);
        let ultra = common::ultrafilters(&r);
        let primes: Vec<Set> = fs
            .iter()
            .filter(|f| common::prime(&r, f))
            .cloned()
            .collect();
        ensure(ultra.iter().all(|u| primes.contains(u)), || {
            format!("{name}: an ultrafilter is not prime")
        })?;
        let lib_prime = class_mins(&s, FilterClass::Prime).map_err(|e| e.to_string())?;
        let lib_ultra = class_mins(&s, FilterClass::Ultra).map_err(|e| e.to_string())?;
        ensure(lib_prime == mins_of(&r, &primes), || {
            format!("{name}: prime filters disagree with the oracle")
        })?;
        ensure(lib_ultra == mins_of(&r, &ultra), || {
            format!("{name}: ultrafilters disagree with the oracle")
        })?;
        ensure((primes == ultra) == s.is_boolean(), || {
            format!("{name}: prime = ultra does not match booleanness")
        })?;
        ensure(s.is_boolean() == r.boolean(), || {
            format!("{name}: boolean predicate disagrees with the oracle")
        })?;
        if name == "chain:3" {
            ensure(primes.len() > ultra.len(), || {
                "chain:3 has prime = ultra".into()
            })?;
        }
        if name.starts_with("boolean:") {
            ensure(primes == ultra, || format!("{name} has prime ≠ ultra"))?;
        }
        checked += 1;
    }
    Ok(format!("{checked} distributive semilattices"))
}

fn coverage_axioms() -> Outcome {
    let mut checked = 0;
    for (name, s) in corpus() {
        let r = Raw::of(&s);
        for kind in [
            CoverageKind::Trivial,
            CoverageKind::Join,
            CoverageKind::Dense,
            CoverageKind::Tight,
        ] {
            if kind == CoverageKind::Join && !r.distributive() {
                continue;
            }
            let cov = Coverage::builtin(&s, kind).map_err(|e| format!("{name}: {e}"))?;
            let rep = check_axioms(&cov, 4);
            ensure(rep.passed, || {
                format!("{name} {}: {:?}", kind.as_str(), rep.violation)
            })?;
            checked += 1;
        }
        let dense = Coverage::builtin(&s, CoverageKind::Dense).map_err(|e| e.to_string())?;
        let tight = Coverage::builtin(&s, CoverageKind::Tight).map_err(|e| e.to_string())?;
        for a in s.elements() {
            let below: Vec<usize> = s.down(a).iter().collect();
            if below.len() > 12 {
                ensure(dense.covers(a, 4) == tight.covers(a, 4), || {
                    format!("{name}: dense and tight differ at {}", s.label(a))
                })?;
                continue;
            }
            for x in common::subsets(&below) {
                let e = to_elems(&x);
                let want = common::arrow(&r, a, &x);
                ensure(
                    tight.is_cover(a, &e) == want && dense.is_cover(a, &e) == want,
                    || format!("{name}: cover test wrong at {} with {x:?}", s.label(a)),
                )?;
            }
        }
    }
    Ok(format!("{checked} (semigroup, coverage) pairs"))
}

/// `x ∈ ν(A)` iff `x → A ∩ x↓`.
fn tight_closure_oracle(r: &Raw, a: &Set) -> Set {
    (0..r.n)
        .filter(|&x| {
            let part: Set = r.down(x).intersection(a).copied().collect();
            common::arrow(r, x, &part)
        })
        .collect()
}

fn nucleus_laws(r: &Raw, ideals: &[Set], nu: &dyn Fn(&Set) -> Set) -> Result<(), String> {
    let img: Vec<Set> = ideals.iter().map(nu).collect();
    for (a, na) in ideals.iter().zip(&img) {
        ensure(a.is_subset(na), || format!("N1 fails at {a:?}"))?;
        ensure(nu(na) == *na, || format!("N3 fails at {a:?}"))?;
        for (b, nb) in ideals.iter().zip(&img) {
            ensure(!a.is_subset(b) || na.is_subset(nb), || {
                format!("N2 fails at {a:?}, {b:?}")
            })?;
            ensure(r.set_mul(na, nb).is_subset(&nu(&r.set_mul(a, b))), || {
                format!("N4 fails at {a:?}, {b:?}")
            })?;
        }
    }
    Ok(())
}

fn nucleus_completion() -> Outcome {
    let mut checked = 0;
    let mut k_checked = 0;
    for (name, s) in corpus().into_iter().filter(|(_, s)| s.n() <= 8) {
        let r = Raw::of(&s);
        let oracle_ideals = common::compatible_ideals(&r);
        let lib_ideals: Vec<Set> = compatible_ideals(&s)
            .map_err(|e| e.to_string())?
            .iter()
            .map(to_set)
            .collect();
        let a: BTreeSet<&Set> = oracle_ideals.iter().collect();
        let b: BTreeSet<&Set> = lib_ideals.iter().collect();
        ensure(a == b, || format!("{name}: compatible ideals differ"))?;
        let distributive = r.distributive();
        for a in &oracle_ideals {
            let av = common::vee_closure(&r, a);
            ensure(to_set(&vee_closure(&s, &to_elems(a))) == av, || {
                format!("{name}: ∨-closure of {a:?} differs")
            })?;
            ensure(a.is_subset(&av), || format!("{name}: Cl1 at {a:?}"))?;
            ensure(common::vee_closure(&r, &av) == av, || {
                format!("{name}: Cl3 at {a:?}")
            })?;
            for b in &oracle_ideals {
                let bv = common::vee_closure(&r, b);
                ensure(!a.is_subset(b) || av.is_subset(&bv), || {
                    format!("{name}: Cl2 at {a:?}, {b:?}")
                })?;
                if distributive {
                    let lhs = r.set_mul(&av, &bv);
                    let rhs = common::vee_closure(&r, &r.set_mul(a, b));
                    ensure(lhs == rhs, || format!("{name}: Cl4 at {a:?}, {b:?}"))?;
                }
            }
        }
        if r.zero.is_some() {
            let cov = Coverage::builtin(&s, CoverageKind::Tight).map_err(|e| e.to_string())?;
            for a in &oracle_ideals {
                ensure(
                    to_set(&cov.closure(&to_elems(a))) == tight_closure_oracle(&r, a),
                    || format!("{name}: tight closure of {a:?} differs"),
                )?;
            }
            if cov.is_idempotent_pure() {
                nucleus_laws(&r, &oracle_ideals, &|a| tight_closure_oracle(&r, a))
                    .map_err(|e| format!("{name}: {e}"))?;
                let lib_ideals: Vec<ElemSet> = oracle_ideals.iter().map(to_elems).collect();
                let rep = check_nucleus(&s, &lib_ideals, &|a| cov.closure(a));
                ensure(rep.passed, || format!("{name}: {:?}", rep.violation))?;
            }
            if distributive {
                nucleus_laws(&r, &oracle_ideals, &|a| common::vee_closure(&r, a))
                    .map_err(|e| format!("{name}: ∨-closure {e}"))?;
            }
        }
        checked += 1;
    }
    for (name, t) in corpus() {
        let r = Raw::of(&t);
        if !r.distributive() || t.n() > 12 {
            continue;
        }
        let idl = idl_completion(&t).map_err(|e| format!("{name}: {e}"))?;
        let k = finite_elements(&idl);
        let p = &idl.semigroup;
        let pr = Raw::of(p);
        // compact: below a finite join whenever below any join
        for x in p.elements() {
            let compact = (0..pr.n).all(|y| !pr.leq(x, y) || pr.down(y).contains(&x));
            ensure(compact == k.contains(x), || {
                format!("{name}: finite elements wrong at {}", p.label(x))
            })?;
        }
        ensure(
            common::is_iso(&r, &pr, &idl.iota) && k.len() == p.n(),
            || format!("{name}: ι is not an isomorphism onto K(Idl)"),
        )?;
        k_checked += 1;
    }
    Ok(format!(
        "closures on {checked} semigroups, K(Idl(T)) ≅ T on {k_checked}"
    ))
}

fn tight_completion_criterion() -> Outcome {
    let mut checked = 0;
    for (name, s) in corpus() {
        let t = tight_completion(&s).map_err(|e| format!("{name}: {e}"))?;
        let tr = Raw::of(&t.completion.semigroup);
        ensure(tr.weakly_boolean(), || {
            format!("{name}: D_t(S) is not weakly boolean")
        })?;
        let d = dense_pseudogroup(&s).map_err(|e| format!("{name}: {e}"))?;
        let p = &d.completion.semigroup;
        let pr = Raw::of(p);
        ensure(pr.boolean(), || {
            format!("{name}: dense pseudogroup is not boolean")
        })?;
        let z = pr.zero.unwrap();
        for e in (0..pr.n).filter(|&e| pr.idem(e)) {
            let orth: Set = (0..pr.n)
                .filter(|&f| pr.idem(f) && pr.m(f, e) == z)
                .collect();
            let star = pr.lub(&orth).ok_or("no pseudo-complement")?;
            ensure(pseudo_complement(p, e) == Some(star), || {
                format!("{name}: e* wrong at {}", p.label(e))
            })?;
            let orth2: Set = (0..pr.n)
                .filter(|&f| pr.idem(f) && pr.m(f, star) == z)
                .collect();
            ensure(pr.lub(&orth2) == Some(e), || {
                format!("{name}: e** ≠ e at {}", p.label(e))
            })?;
        }
        checked += 1;
    }
    Ok(format!("{checked} semigroups"))
}

fn discrete_groupoids() -> Vec<(String, Groupoid)> {
    let parts: &[&[usize]] = &[
        &[1],
        &[2],
        &[1, 1],
        &[3],
        &[2, 1],
        &[1, 1, 1],
        &[4],
        &[3, 1],
        &[2, 2],
        &[2, 1, 1],
        &[1, 1, 1, 1],
    ];
    let mut out: Vec<(String, Groupoid)> = parts
        .iter()
        .map(|p| (format!("pairs{p:?}"), Groupoid::discrete(p).unwrap()))
        .collect();
    for k in [2, 3] {
        let table: Vec<Vec<usize>> = (0..k)
            .map(|i| (0..k).map(|j| (i + j) % k).collect())
            .collect();
        out.push((format!("z{k}"), Groupoid::from_group(&table).unwrap()));
    }
    out
}

fn groupoid_iso(g: &Groupoid, h: &Groupoid, map: &[usize]) -> bool {
    let image: Set = map.iter().copied().collect();
    map.len() == g.n()
        && image.len() == h.n()
        && (0..g.n())
            .all(|x| (0..g.n()).all(|y| g.mul(x, y).map(|xy| map[xy]) == h.mul(map[x], map[y])))
}

fn duality_round_trips() -> Outcome {
    let mut names = Vec::new();
    for (name, s) in corpus() {
        let r = Raw::of(&s);
        if !r.boolean() {
            ensure(name != "boolean:2", || "boolean:2 is not boolean".into())?;
            continue;
        }
        let rt = boolean_duality_roundtrip(&s).map_err(|e| format!("{name}: {e}"))?;
        let kb = Raw::of(&rt.epsilon.bisections.semigroup);
        ensure(common::is_iso(&r, &kb, &rt.iso.forward.map), || {
            format!("{name}: ε witness is not an isomorphism")
        })?;
        ensure(common::is_iso(&kb, &r, &rt.iso.inverse.map), || {
            format!("{name}: ε⁻¹ witness is not an isomorphism")
        })?;
        names.push(name);
    }
    for required in ["boolean:1", "boolean:2", "boolean:3", "sym_inv:2"] {
        ensure(names.iter().any(|n| n == required), || {
            format!("{required} not covered")
        })?;
    }
    let gs = discrete_groupoids();
    for (name, g) in &gs {
        let tg = TopGroupoid::discrete(g.clone());
        let e = groupoid_roundtrip(&tg).map_err(|e| format!("{name}: {e}"))?;
        ensure(groupoid_iso(g, &e.target.groupoid, &e.map), || {
            format!("{name}: η witness is not an isomorphism")
        })?;
        let arrows: Vec<usize> = (0..g.n()).collect();
        let bis = common::subsets(&arrows)
            .into_iter()
            .filter(|a| {
                a.iter().all(|&x| {
                    a.iter()
                        .all(|&y| x == y || (g.d(x) != g.d(y) && g.r(x) != g.r(y)))
                })
            })
            .count();
        ensure(bis == e.bisections.sets.len(), || {
            format!(
                "{name}: {} bisections, oracle counts {bis}",
                e.bisections.sets.len()
            )
        })?;
    }
    Ok(format!(
        "ε on {}, η on {} groupoids",
        names.join(" "),
        gs.len()
    ))
}

fn booleanization_criterion() -> Outcome {
    let b2 = gen::by_name("brandt:2").unwrap();
    let i2 = gen::by_name("sym_inv:2").unwrap();
    let b = first_booleanization(&b2).map_err(|e| e.to_string())?;
    let kb = Raw::of(&b.bisections.semigroup);
    ensure(kb.n == 7, || format!("KB(G_u(B2)) has {} elements", kb.n))?;
    common::isomorphic(&kb, &Raw::of(&i2)).ok_or("KB(G_u(B2)) is not I2")?;

    let sources = ["chain:2", "chain:3", "brandt:2", "boolean:2", "group0:z2"];
    let targets = ["boolean:1", "boolean:2", "boolean:3", "sym_inv:2"];
    let mut triples = 0;
    for sn in sources {
        let s = gen::by_name(sn).unwrap();
        let sr = Raw::of(&s);
        for tn in targets {
            let t = gen::by_name(tn).unwrap();
            let tr = Raw::of(&t);
            ensure(tr.weakly_boolean(), || {
                format!("{tn} is not weakly boolean")
            })?;
            let fixed = [(sr.zero.unwrap(), tr.zero.unwrap())];
            for theta in common::homs(&sr, &tr, &fixed) {
                let u = match second_booleanization_universality(&s, &t, &theta) {
                    Ok(u) => u,
                    Err(e) if e.kind() == "PreimageNotFilter" => continue,
                    Err(e) => return Err(format!("{sn} → {tn} via {theta:?}: {e}")),
                };
                let bs = Raw::of(&u.booleanization.bisections.semigroup);
                let beta = &u.booleanization.beta.map;
                let fixed: Vec<(usize, usize)> = (0..sr.n).map(|x| (beta[x], theta[x])).collect();
                let ext: Vec<Vec<usize>> = common::homs(&bs, &tr, &fixed)
                    .into_iter()
                    .filter(|m| common::is_distributive_hom(&bs, &tr, m))
                    .collect();
                ensure(ext.len() == 1 && ext[0] == u.bar.map, || {
                    format!("{sn} → {tn} via {theta:?}: {} extensions", ext.len())
                })?;
                ensure(u.extensions.is_none_or(|k| k == 1), || {
                    format!("{sn} → {tn}: library counts {:?} extensions", u.extensions)
                })?;
                triples += 1;
            }
        }
    }
    ensure(triples >= 3, || format!("only {triples} triples"))?;
    Ok(format!(
        "KB(G_u(B2)) ≅ I2, unique factorization on {triples} triples"
    ))
}

fn tight_closure_criterion() -> Outcome {
    let mut witnesses = 0;
    for (name, s) in corpus() {
        let r = Raw::of(&s);
        let rep = tight_closure_check(&s).map_err(|e| format!("{name}: {e}"))?;
        let fs = common::filters(&r);
        let mins = mins_of(&r, &fs);
        let by_min: Vec<Set> = {
            let mut v: Vec<(usize, Set)> = fs
                .iter()
                .map(|f| (mins_of(&r, std::slice::from_ref(f))[0], f.clone()))
                .collect();
            v.sort();
            v.into_iter().map(|(_, f)| f).collect()
        };
        let ultra: Vec<bool> = by_min
            .iter()
            .map(|f| !by_min.iter().any(|g| g != f && f.is_subset(g)))
            .collect();
        let tight: Vec<bool> = by_min.iter().map(|f| common::tight(&r, f)).collect();
        let closure = common::patch_closure(&r, &by_min, &ultra);
        let pick = |v: &[bool]| -> Vec<usize> {
            (0..v.len()).filter(|&i| v[i]).map(|i| mins[i]).collect()
        };
        ensure(rep.ultra == pick(&ultra), || {
            format!("{name}: ultrafilters differ")
        })?;
        ensure(rep.tight == pick(&tight), || {
            format!("{name}: tight filters differ")
        })?;
        ensure(rep.closure == pick(&closure), || {
            format!("{name}: closures differ")
        })?;
        ensure(closure == tight && rep.equal, || {
            format!("{name}: closure of ultrafilters ≠ tight filters")
        })?;
        for sep in &rep.separations {
            let members: Vec<usize> = (0..by_min.len())
                .filter(|&i| {
                    by_min[i].contains(&sep.x)
                        && sep.excluded.iter().all(|y| !by_min[i].contains(y))
                })
                .collect();
            let open: Vec<usize> = members.iter().map(|&i| mins[i]).collect();
            ensure(open == sep.open, || {
                format!("{name}: separating open recorded wrongly")
            })?;
            ensure(open.contains(&sep.filter), || {
                format!("{name}: separation misses its filter")
            })?;
            ensure(members.iter().all(|&i| !ultra[i]), || {
                format!("{name}: separation contains an ultrafilter")
            })?;
        }
        for nb in &rep.nearby {
            let i = mins
                .binary_search(&nb.ultrafilter)
                .map_err(|_| "bad witness")?;
            ensure(ultra[i], || format!("{name}: nearby witness is not ultra"))?;
        }
        ensure(
            rep.nearby.len() + rep.separations.len() >= fs.len() - rep.ultra.len(),
            || format!("{name}: witnesses missing"),
        )?;
        witnesses += rep.nearby.len() + rep.separations.len();
    }
    Ok(format!("{witnesses} witnesses recorded"))
}

fn compactness_criterion() -> Outcome {
    let mut coarse = Vec::new();
    for (name, s) in corpus() {
        let r = Raw::of(&s);
        let rep = compactness_condition(&s).map_err(|e| format!("{name}: {e}"))?;
        ensure(rep.all(), || format!("{name}: {rep:?}"))?;
        let fs = common::filters(&r);
        let ultra = common::ultrafilters(&r);
        ensure(
            fs.iter()
                .all(|f| !common::tight(&r, f) || ultra.contains(f)),
            || format!("{name}: oracle finds a tight filter that is not ultra"),
        )?;
        let t = tight_completion(&s).map_err(|e| e.to_string())?;
        ensure(
            Raw::of(&t.completion.semigroup).weakly_boolean()
                == rep.tight_completion_weakly_boolean,
            || format!("{name}: weak booleanness of D_t(S) misreported"),
        )?;
        let cg = coarse_grained_check(&s).map_err(|e| format!("{name}: {e}"))?;
        if cg.coarse_grained {
            coarse.push(name);
        }
    }
    ensure(!coarse.is_empty(), || {
        "no coarse-grained semigroup in the corpus".into()
    })?;
    Ok(format!("coarse-grained: {}", coarse.join(" ")))
}

/// `(F·G)↑` when `d(F) = r(G)`.
fn filter_mul(r: &Raw, f: &Set, g: &Set) -> Option<Set> {
    let up = |a: &Set| -> Set {
        (0..r.n)
            .filter(|&y| a.iter().any(|&x| r.leq(x, y)))
            .collect()
    };
    let inv = |a: &Set| -> Set { a.iter().map(|&x| r.inv[x]).collect() };
    let d = up(&r.set_mul(&inv(f), f));
    let rg = up(&r.set_mul(g, &inv(g)));
    (d == rg).then(|| up(&r.set_mul(f, g)))
}

fn patch_algebra_criterion() -> Outcome {
    let mut checked = 0;
    for (name, s) in corpus().into_iter().filter(|(_, s)| s.n() <= 6) {
        if s.zero().is_none() {
            continue;
        }
        let rep = patch_algebra_check(&s).map_err(|e| format!("{name}: {e}"))?;
        ensure(rep.passed(), || format!("{name}: {:?}", rep.violation))?;
        let d = ncstone::completion::distributive_completion(&s).map_err(|e| e.to_string())?;
        let r = Raw::of(&d.semigroup);
        let primes: Vec<Set> = common::filters(&r)
            .into_iter()
            .filter(|f| common::prime(&r, f))
            .collect();
        let y = |a: usize, b: usize| -> BTreeSet<usize> {
            (0..primes.len())
                .filter(|&i| primes[i].contains(&a) && !primes[i].contains(&b))
                .collect()
        };
        let product = |a: &BTreeSet<usize>, b: &BTreeSet<usize>| -> BTreeSet<usize> {
            let mut out = BTreeSet::new();
            for &i in a {
                for &j in b {
                    if let Some(p) = filter_mul(&r, &primes[i], &primes[j]) {
                        out.insert(primes.iter().position(|q| *q == p).expect("prime product"));
                    }
                }
            }
            out
        };
        let join = |xs: &[usize]| -> usize {
            xs.iter()
                .copied()
                .reduce(|a, b| r.join2(a, b).expect("join below a common bound"))
                .unwrap()
        };
        let pairs: Vec<(usize, usize)> = (0..r.n)
            .flat_map(|a| (0..r.n).map(move |b| (a, b)))
            .filter(|&(a, b)| r.leq(b, a))
            .collect();
        for &(s1, t1) in &pairs {
            for &(u1, v1) in &pairs {
                let lhs = product(&y(s1, t1), &y(u1, v1));
                let k = join(&[r.m(s1, v1), r.m(t1, u1), r.m(t1, v1)]);
                ensure(lhs == y(r.m(s1, u1), k), || {
                    format!("{name}: product identity fails")
                })?;
                checked += 1;
                if r.compatible(s1, u1) {
                    let (top, bot) = (join(&[s1, u1]), join(&[t1, v1]));
                    let left = y(top, bot);
                    let right: BTreeSet<usize> = y(s1, r.m(bot, r.d(s1)))
                        .union(&y(u1, r.m(bot, r.d(u1))))
                        .copied()
                        .collect();
                    ensure(left == right, || format!("{name}: join identity fails"))?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} identities"))
}

fn cli_commands() -> Vec<Vec<String>> {
    let mut cmds: Vec<Vec<&str>> = vec![vec!["gen"], vec!["verify"]];
    for class in ["all", "ultra", "prime", "tight", "dense"] {
        cmds.push(vec!["filters", "--class", class]);
    }
    for kind in [
        "schein",
        "idl",
        "dist",
        "tight",
        "dense-pseudogroup",
        "booleanization",
    ] {
        cmds.push(vec!["complete", "--kind", kind]);
        cmds.push(vec!["complete", "--kind", kind, "--map"]);
    }
    for topology in ["basic", "patch"] {
        for emit in ["json", "dot"] {
            cmds.push(vec!["groupoid", "--topology", topology, "--emit", emit]);
        }
    }
    cmds.push(vec!["groupoid", "--class", "ultra", "--topology", "basic"]);
    for check in ["spatial", "sober", "roundtrip", "compactness", "coarse"] {
        cmds.push(vec!["duality", "--check", check]);
    }
    for coverage in ["tight", "dense"] {
        cmds.push(vec!["quotient", "--coverage", coverage]);
        cmds.push(vec!["quotient", "--coverage", coverage, "--map"]);
    }
    cmds.into_iter()
        .map(|c| c.into_iter().map(String::from).collect())
        .collect()
}

fn determinism() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_ncstone");
    let run = |args: &[String]| -> (Vec<u8>, Option<i32>) {
        let out = Command::new(exe).args(args).output().expect("spawn");
        (out.stdout, out.status.code())
    };
    let mut runs = 0;
    for name in CORPUS {
        for cmd in cli_commands() {
            let mut args = vec![cmd[0].clone(), name.to_string()];
            args.extend(cmd[1..].iter().cloned());
            let first = run(&args);
            let second = run(&args);
            ensure(first == second, || {
                format!("`{}` differs between runs", args.join(" "))
            })?;
            ensure(!first.0.is_empty(), || {
                format!("`{}` printed nothing", args.join(" "))
            })?;
            runs += 1;
        }
    }
    Ok(format!("{runs} commands run twice"))
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 12] = [
        ("axiom suite", Duration::from_secs(1), axiom_suite),
        ("filter structure", Duration::from_secs(5), filter_structure),
        (
            "prime/ultra/boolean",
            Duration::from_secs(1),
            prime_ultra_boolean,
        ),
        ("coverage axioms", Duration::from_secs(10), coverage_axioms),
        (
            "nucleus/completion",
            Duration::from_secs(30),
            nucleus_completion,
        ),
        (
            "tight completion",
            Duration::from_secs(30),
            tight_completion_criterion,
        ),
        (
            "duality round trips",
            Duration::from_secs(30),
            duality_round_trips,
        ),
        (
            "booleanization",
            Duration::from_secs(60),
            booleanization_criterion,
        ),
        (
            "tight closure",
            Duration::from_secs(5),
            tight_closure_criterion,
        ),
        (
            "compactness condition",
            Duration::from_secs(10),
            compactness_criterion,
        ),
        (
            "patch algebra",
            Duration::from_secs(10),
            patch_algebra_criterion,
        ),
        ("determinism", Duration::MAX, determinism),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let took = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if took <= *limit => (true, d),
            Ok(d) => (false, format!("{d}; took {took:.2?}, limit {limit:.0?}")),
            Err(e) => (false, e),
        };
        failed += usize::from(!ok);
        println!(
            "criterion {:>2} {:<22} {} ({:.2?}) {}",
            i + 1,
            name,
            if ok { "PASS" } else { "FAIL" },
            took,
            detail
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
