//! Builtin families of finite inverse semigroups with canonical element order.
//!
//! Every generator lists idempotents first, then the remaining elements by
//! rank and chart, so the tables it produces are reproducible byte for byte.

use serde::Deserialize;

use crate::elemset::MAX_ELEMS;
use crate::error::{Error, Result};
use crate::semigroup::InvSemigroup;

fn too_large(what: &str, count: usize, limit: usize) -> Error {
    Error::TooLarge {
        what: what.into(),
        count,
        limit,
    }
}

/// Symmetric inverse monoid `I_n` of partial bijections of `{1..n}`.
///
/// Product `ab` applies `b` first. Labels list images, `-` for undefined.
pub fn sym_inv(n: usize) -> Result<InvSemigroup> {
    if n > 4 {
        return Err(too_large("sym_inv degree", n, 4));
    }
    const UNDEF: u8 = u8::MAX;
    let mut maps: Vec<Vec<u8>> = Vec::new();
    fn extend(cur: &mut Vec<u8>, used: u32, n: usize, out: &mut Vec<Vec<u8>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        cur.push(UNDEF);
        extend(cur, used, n, out);
        cur.pop();
        for img in 0..n as u8 {
            if used >> img & 1 == 0 {
                cur.push(img);
                extend(cur, used | 1 << img, n, out);
                cur.pop();
            }
        }
    }
    extend(&mut Vec::new(), 0, n, &mut maps);
    let idem = |m: &Vec<u8>| {
        m.iter()
            .enumerate()
            .all(|(i, &x)| x == UNDEF || x as usize == i)
    };
    let rank = |m: &Vec<u8>| m.iter().filter(|&&x| x != UNDEF).count();
    maps.sort_by_key(|m| (!idem(m), rank(m), m.clone()));
    let idx = |m: &Vec<u8>| maps.iter().position(|x| x == m).unwrap();
    let k = maps.len();
    let mut table = vec![vec![0; k]; k];
    for (a, ma) in maps.iter().enumerate() {
        for (b, mb) in maps.iter().enumerate() {
            let prod: Vec<u8> = mb
                .iter()
                .map(|&x| if x == UNDEF { UNDEF } else { ma[x as usize] })
                .collect();
            table[a][b] = idx(&prod);
        }
    }
    let labels = maps
        .iter()
        .map(|m| {
            m.iter()
                .map(|&x| {
                    if x == UNDEF {
                        '-'
                    } else {
                        char::from(b'1' + x)
                    }
                })
                .collect()
        })
        .collect();
    Ok(InvSemigroup::verify(table, Some(0))?.with_labels(labels))
}

/// Combinatorial Brandt semigroup `B_n`: zero plus matrix units `e_ij`.
pub fn brandt(n: usize) -> Result<InvSemigroup> {
    if n == 0 || n * n + 1 > MAX_ELEMS {
        return Err(too_large("brandt degree", n, 15));
    }
    let mut units: Vec<(usize, usize)> = (0..n).map(|i| (i, i)).collect();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                units.push((i, j));
            }
        }
    }
    let k = units.len() + 1;
    let id = |u: (usize, usize)| 1 + units.iter().position(|&x| x == u).unwrap();
    let mut table = vec![vec![0; k]; k];
    for (a, &(i, j)) in units.iter().enumerate() {
        for (b, &(p, q)) in units.iter().enumerate() {
            if j == p {
                table[a + 1][b + 1] = id((i, q));
            }
        }
    }
    let sep = if n >= 10 { "_" } else { "" };
    let mut labels = vec!["0".to_string()];
    labels.extend(
        units
            .iter()
            .map(|(i, j)| format!("e{}{sep}{}", i + 1, j + 1)),
    );
    Ok(InvSemigroup::verify(table, Some(0))?.with_labels(labels))
}

/// Chain `0 < c1 < … < 1` with `n` elements under min.
pub fn chain(n: usize) -> Result<InvSemigroup> {
    if n == 0 || n > MAX_ELEMS {
        return Err(too_large("chain length", n, MAX_ELEMS));
    }
    let table = (0..n).map(|a| (0..n).map(|b| a.min(b)).collect()).collect();
    let labels = (0..n)
        .map(|i| match i {
            0 => "0".to_string(),
            i if i + 1 == n => "1".to_string(),
            i => format!("c{i}"),
        })
        .collect();
    Ok(InvSemigroup::verify(table, Some(0))?.with_labels(labels))
}

/// Boolean algebra of subsets of `{1..n}` under intersection.
pub fn boolean(n: usize) -> Result<InvSemigroup> {
    if n > 8 {
        return Err(too_large("boolean rank", n, 8));
    }
    let mut masks: Vec<usize> = (0..1usize << n).collect();
    masks.sort_by_key(|&m| (m.count_ones(), m));
    let mut pos = vec![0; masks.len()];
    for (i, &m) in masks.iter().enumerate() {
        pos[m] = i;
    }
    let table = masks
        .iter()
        .map(|&a| masks.iter().map(|&b| pos[a & b]).collect())
        .collect();
    let full = (1usize << n) - 1;
    let labels = masks
        .iter()
        .map(|&m| match m {
            0 => "0".to_string(),
            m if m == full => "1".to_string(),
            m => {
                let parts: Vec<String> = (0..n)
                    .filter(|i| m >> i & 1 == 1)
                    .map(|i| (i + 1).to_string())
                    .collect();
                format!("{{{}}}", parts.join(","))
            }
        })
        .collect();
    Ok(InvSemigroup::verify(table, Some(0))?.with_labels(labels))
}

/// A finite poset given by generating pairs `i ≤ j`.
#[derive(Clone, Debug, Deserialize)]
pub struct PosetFile {
    pub n: usize,
    pub leq: Vec<[usize; 2]>,
    #[serde(default)]
    pub labels: Option<Vec<String>>,
}

/// The meet semilattice of a poset; fails unless all binary meets exist.
pub fn semilattice(p: &PosetFile) -> Result<InvSemigroup> {
    let n = p.n;
    if n == 0 || n > MAX_ELEMS {
        return Err(too_large("poset", n, MAX_ELEMS));
    }
    let mut le = vec![vec![false; n]; n];
    for (i, row) in le.iter_mut().enumerate() {
        row[i] = true;
    }
    for &[i, j] in &p.leq {
        if i >= n || j >= n {
            return Err(Error::BadTable(format!("pair ({i},{j}) out of range")));
        }
        le[i][j] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if le[i][k] && le[k][j] {
                    le[i][j] = true;
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && le[i][j] && le[j][i] {
                return Err(Error::BadTable(format!("{i} and {j} violate antisymmetry")));
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| ((0..n).filter(|&j| le[j][i]).count(), i));
    let mut pos = vec![0; n];
    for (k, &i) in order.iter().enumerate() {
        pos[i] = k;
    }
    let mut table = vec![vec![0; n]; n];
    for a in 0..n {
        for b in 0..n {
            let lower: Vec<usize> = (0..n).filter(|&c| le[c][a] && le[c][b]).collect();
            let m = lower
                .iter()
                .copied()
                .find(|&c| lower.iter().all(|&x| le[x][c]))
                .ok_or_else(|| Error::BadTable(format!("{a} and {b} have no meet")))?;
            table[pos[a]][pos[b]] = pos[m];
        }
    }
    let s = InvSemigroup::verify(table, None)?;
    let labels = match &p.labels {
        Some(l) if l.len() == n => order.iter().map(|&i| l[i].clone()).collect(),
        _ => order.iter().map(|i| i.to_string()).collect(),
    };
    Ok(s.with_labels(labels))
}

/// A group multiplication table.
#[derive(Clone, Debug, Deserialize)]
pub struct GroupFile {
    pub n: usize,
    pub table: Vec<Vec<usize>>,
    #[serde(default)]
    pub labels: Option<Vec<String>>,
}

/// `G⁰`: a group with an adjoined zero, ordered zero, identity, rest.
pub fn group0(g: &GroupFile) -> Result<InvSemigroup> {
    if g.table.len() != g.n {
        return Err(Error::BadTable("row count differs from n".into()));
    }
    let grp = InvSemigroup::verify(g.table.clone(), None)?;
    let e = grp
        .one()
        .ok_or_else(|| Error::BadTable("no identity".into()))?;
    if grp.idempotents().len() != 1 {
        return Err(Error::BadTable("not a group".into()));
    }
    let labels = match &g.labels {
        Some(l) if l.len() == g.n => l.clone(),
        _ => (0..g.n).map(|i| format!("g{i}")).collect(),
    };
    if grp.n() == 1 {
        // the trivial group is absorbing, so adjoin_zero would refuse it
        let t = vec![vec![0, 0], vec![0, 1]];
        let l = vec!["0".into(), labels[0].clone()];
        return Ok(InvSemigroup::verify(t, Some(0))?.with_labels(l));
    }
    let with_zero = grp.with_labels(labels).adjoin_zero()?;
    let n = g.n;
    let mut perm = vec![0; n + 1];
    perm[n] = 0;
    perm[e] = 1;
    let mut next = 2;
    for (i, p) in perm.iter_mut().enumerate().take(n) {
        if i != e {
            *p = next;
            next += 1;
        }
    }
    with_zero.permuted(&perm)
}

/// Cyclic group `Z_n` as a table.
pub fn cyclic_group(n: usize) -> GroupFile {
    GroupFile {
        n,
        table: (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect(),
        labels: None,
    }
}

/// `S¹`: a fresh identity with id `n`.
pub fn adjoin_identity(s: &InvSemigroup) -> Result<InvSemigroup> {
    let n = s.n();
    let mut rows = s.rows();
    for (a, row) in rows.iter_mut().enumerate() {
        row.push(a);
    }
    rows.push((0..=n).collect());
    let mut labels = s.labels().to_vec();
    labels.push("1".into());
    Ok(InvSemigroup::verify(rows, s.zero())?.with_labels(labels))
}

/// Parses a generator name such as `sym_inv:3`.
///
/// `semilattice:` takes `v`, `m3`, `n5` or a poset file, `group0:` takes `zN`
/// or a group file, and a trailing `+1` adjoins an identity.
pub fn by_name(name: &str) -> Result<InvSemigroup> {
    if let Some(base) = name.strip_suffix("+1") {
        return adjoin_identity(&by_name(base)?);
    }
    let (family, arg) = name
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("expected family:arg, got {name}")))?;
    let num = |a: &str| {
        a.parse::<usize>()
            .map_err(|_| Error::Parse(format!("bad size {a}")))
    };
    let read = || std::fs::read_to_string(arg).map_err(|e| Error::Parse(format!("{arg}: {e}")));
    match family {
        "sym_inv" => sym_inv(num(arg)?),
        "brandt" => brandt(num(arg)?),
        "chain" => chain(num(arg)?),
        "boolean" => boolean(num(arg)?),
        "semilattice" => match arg {
            "v" => semilattice(&poset(3, &[[0, 1], [0, 2]], &["0", "a", "b"])),
            "m3" => semilattice(&poset(
                5,
                &[[0, 1], [0, 2], [0, 3], [1, 4], [2, 4], [3, 4]],
                &["0", "a", "b", "c", "1"],
            )),
            "n5" => semilattice(&poset(
                5,
                &[[0, 1], [1, 2], [0, 3], [2, 4], [3, 4]],
                &["0", "a", "b", "c", "1"],
            )),
            _ => {
                let p: PosetFile =
                    serde_json::from_str(&read()?).map_err(|e| Error::Parse(e.to_string()))?;
                semilattice(&p)
            }
        },
        "group0" => match arg.strip_prefix('z').map(num) {
            Some(k) => group0(&cyclic_group(k?)),
            None => {
                let g: GroupFile =
                    serde_json::from_str(&read()?).map_err(|e| Error::Parse(e.to_string()))?;
                group0(&g)
            }
        },
        _ => Err(Error::Parse(format!("unknown family {family}"))),
    }
}

fn poset(n: usize, leq: &[[usize; 2]], labels: &[&str]) -> PosetFile {
    PosetFile {
        n,
        leq: leq.to_vec(),
        labels: Some(labels.iter().map(|s| s.to_string()).collect()),
    }
}

/// Names of the semigroups every cross-check in the test suite runs over.
pub const CORPUS: &[&str] = &[
    "chain:2",
    "chain:3",
    "chain:4",
    "chain:5",
    "boolean:1",
    "boolean:2",
    "boolean:3",
    "brandt:2",
    "brandt:3",
    "sym_inv:2",
    "sym_inv:3",
    "group0:z2",
    "group0:z3",
    "semilattice:v",
    "semilattice:m3",
    "semilattice:n5",
    "brandt:2+1",
];

pub fn test_corpus() -> Vec<(String, InvSemigroup)> {
    CORPUS
        .iter()
        .map(|&n| (n.to_string(), by_name(n).expect("corpus generator")))
        .collect()
}
