//! Brute-force reference implementations, independent of the library's
//! union-find and closure engines. Shared with the acceptance suite.

#![allow(dead_code)]

use std::collections::BTreeSet;

use unialg::lattice::{Partition, Subset};
use unialg::FiniteAlgebra;

/// Every partition of `{0..n-1}`, via restricted growth strings.
pub fn all_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(i: usize, n: usize, cur: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max + 1 {
            cur.push(b);
            go(i + 1, n, cur, max.max(b), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
    } else {
        let mut cur = vec![0];
        go(1, n, &mut cur, 0, &mut out);
    }
    out
}

fn args_iter(n: usize, arity: usize) -> Vec<Vec<u8>> {
    let mut all = vec![Vec::new()];
    for _ in 0..arity {
        all = all
            .into_iter()
            .flat_map(|prefix| {
                (0..n as u8).map(move |x| {
                    let mut p = prefix.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    all
}

/// Compatibility checked by comparing every pair of related argument
/// vectors, straight from the definition.
pub fn is_congruence_labels(a: &FiniteAlgebra, labels: &[usize]) -> bool {
    let n = a.size();
    a.ops().iter().all(|op| {
        let all = args_iter(n, op.arity());
        all.iter().all(|x| {
            all.iter().all(|y| {
                let related = x
                    .iter()
                    .zip(y)
                    .all(|(&p, &q)| labels[p as usize] == labels[q as usize]);
                !related || labels[op.apply(x) as usize] == labels[op.apply(y) as usize]
            })
        })
    })
}

pub fn labels_to_partition(labels: &[usize]) -> Partition {
    let k = labels.iter().copied().max().map_or(0, |m| m + 1);
    let mut blocks = vec![Vec::new(); k];
    for (x, &b) in labels.iter().enumerate() {
        blocks[b].push(x);
    }
    Partition::from_blocks(labels.len(), &blocks).expect("valid blocks")
}

pub fn brute_congruences(a: &FiniteAlgebra) -> BTreeSet<Partition> {
    all_partitions(a.size())
        .into_iter()
        .filter(|l| is_congruence_labels(a, l))
        .map(|l| labels_to_partition(&l))
        .collect()
}

/// The least congruence containing `pairs`: meet of all congruences
/// containing them, taken as the one with the most blocks.
pub fn brute_cg(a: &FiniteAlgebra, pairs: &[(usize, usize)]) -> Partition {
    all_partitions(a.size())
        .into_iter()
        .filter(|l| pairs.iter().all(|&(x, y)| l[x] == l[y]) && is_congruence_labels(a, l))
        .max_by_key(|l| l.iter().copied().max().unwrap_or(0))
        .map(|l| labels_to_partition(&l))
        .expect("the full relation always qualifies")
}

pub fn brute_is_subuniverse(a: &FiniteAlgebra, elems: &[usize]) -> bool {
    let n = a.size();
    a.ops().iter().all(|op| {
        args_iter(n, op.arity())
            .iter()
            .filter(|x| x.iter().all(|&v| elems.contains(&(v as usize))))
            .all(|x| elems.contains(&(op.apply(x) as usize)))
    })
}

pub fn brute_subuniverses(a: &FiniteAlgebra) -> BTreeSet<Subset> {
    let n = a.size();
    (0u32..1 << n)
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>())
        .filter(|elems| brute_is_subuniverse(a, elems))
        .map(|elems| Subset::from_elems(n, elems).expect("in range"))
        .collect()
}

/// Derived subgroup of a group algebra with `+`, `-`, `0`: closure of all
/// commutators `-x - y + x + y` under `+`.
pub fn derived_subgroup(g: &FiniteAlgebra) -> BTreeSet<u8> {
    let n = g.size() as u8;
    let mul = |x: u8, y: u8| g.eval_op("+", &[x, y]).unwrap();
    let inv = |x: u8| g.eval_op("-", &[x]).unwrap();
    let mut set: BTreeSet<u8> = BTreeSet::new();
    set.insert(g.eval_op("0", &[]).unwrap());
    for x in 0..n {
        for y in 0..n {
            set.insert(mul(mul(inv(x), inv(y)), mul(x, y)));
        }
    }
    loop {
        let products: Vec<u8> = set
            .iter()
            .flat_map(|&x| set.iter().map(move |&y| (x, y)))
            .map(|(x, y)| mul(x, y))
            .collect();
        let before = set.len();
        set.extend(products);
        if set.len() == before {
            return set;
        }
    }
}
