//! Built-in algebras and the small test corpus.

use crate::algebra::{Elem, FiniteAlgebra};
use crate::error::{Error, Result};

/// Pure group signature: binary `+`, unary `-`, nullary `0`.
pub const GROUP_SIGNATURE: [(&str, usize); 3] = [("+", 2), ("-", 1), ("0", 0)];

/// Names accepted by [`builtin`] besides the `cyclic-<k>` family.
pub const BUILTIN_NAMES: [&str; 8] = [
    "paper-z6",
    "paper-b",
    "klein4",
    "sym3",
    "dihedral-4",
    "quaternion",
    "z2xz4",
    "z2xz2xz2",
];

pub fn builtin(name: &str) -> Result<FiniteAlgebra> {
    match name {
        "paper-z6" => Ok(paper_z6()),
        "paper-b" => Ok(paper_b()),
        "klein4" => Ok(cyclic(2).product(&cyclic(2))?.with_name("klein4")),
        "sym3" => Ok(symmetric3()),
        "dihedral-4" => Ok(dihedral4()),
        "quaternion" => Ok(quaternion()),
        "z2xz4" => Ok(cyclic(2).product(&cyclic(4))?.with_name("z2xz4")),
        "z2xz2xz2" => Ok(cyclic(2)
            .product(&cyclic(2))?
            .product(&cyclic(2))?
            .with_name("z2xz2xz2")),
        _ => match name.strip_prefix("cyclic-").map(str::parse::<usize>) {
            Some(Ok(k)) if (1..=64).contains(&k) => Ok(cyclic(k)),
            _ => Err(Error::UnknownBuiltin(name.to_string())),
        },
    }
}

/// `Z_6` with addition, the unary `s` and the constant `c = 3`.
pub fn paper_z6() -> FiniteAlgebra {
    const S: [Elem; 6] = [0, 3, 3, 0, 3, 3];
    FiniteAlgebra::from_fn(
        "paper-z6",
        6,
        &[("+", 2), ("s", 1), ("c", 0)],
        |op, args| match op {
            0 => (args[0] + args[1]) % 6,
            1 => S[args[0] as usize],
            _ => 3,
        },
    )
    .expect("valid tables")
}

/// The subalgebra on `{0, 3}` of [`paper_z6`], re-indexed so `3 -> 1`.
pub fn paper_b() -> FiniteAlgebra {
    FiniteAlgebra::from_fn(
        "paper-b",
        2,
        &[("+", 2), ("s", 1), ("c", 0)],
        |op, args| match op {
            0 => args[0] ^ args[1],
            1 => 0,
            _ => 1,
        },
    )
    .expect("valid tables")
}

/// `Z_k` with `+`, `-`, `0`.
pub fn cyclic(k: usize) -> FiniteAlgebra {
    group_from_mul(&format!("cyclic-{k}"), k, |a, b| (a + b) % k)
}

/// A group given by its multiplication on `{0..n-1}`; inverses and the
/// identity are derived from the table.
pub fn group_from_mul(name: &str, n: usize, mul: impl Fn(usize, usize) -> usize) -> FiniteAlgebra {
    let identity = (0..n)
        .find(|&e| (0..n).all(|x| mul(e, x) == x && mul(x, e) == x))
        .expect("group has an identity");
    let inverse: Vec<usize> = (0..n)
        .map(|x| {
            (0..n)
                .find(|&y| mul(x, y) == identity)
                .expect("group element has an inverse")
        })
        .collect();
    FiniteAlgebra::from_fn(name, n, &GROUP_SIGNATURE, |op, args| match op {
        0 => mul(args[0] as usize, args[1] as usize) as Elem,
        1 => inverse[args[0] as usize] as Elem,
        _ => identity as Elem,
    })
    .expect("valid tables")
}

fn symmetric3() -> FiniteAlgebra {
    // permutations of {0,1,2} in lexicographic order; index 0 is the identity
    let perms: Vec<[usize; 3]> = vec![
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    group_from_mul("sym3", 6, |a, b| {
        let (p, q) = (perms[a], perms[b]);
        let composed = [p[q[0]], p[q[1]], p[q[2]]];
        perms.iter().position(|r| *r == composed).unwrap()
    })
}

fn dihedral4() -> FiniteAlgebra {
    // r^a s^b encoded as 2a + b
    group_from_mul("dihedral-4", 8, |x, y| {
        let (a1, b1) = (x / 2, x % 2);
        let (a2, b2) = (y / 2, y % 2);
        let a = if b1 == 0 { a1 + a2 } else { a1 + 4 - a2 } % 4;
        2 * a + (b1 ^ b2)
    })
}

fn quaternion() -> FiniteAlgebra {
    // units 1, i, j, k; element = 4 * sign + unit
    const UNIT: [[(usize, usize); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    group_from_mul("quaternion", 8, |x, y| {
        let (s1, u1) = (x / 4, x % 4);
        let (s2, u2) = (y / 4, y % 4);
        let (s, u) = UNIT[u1][u2];
        4 * (s1 ^ s2 ^ s) + u
    })
}

/// Every group of order at most 8, up to isomorphism, as pure group algebras.
pub fn small_groups() -> Vec<FiniteAlgebra> {
    let mut groups: Vec<FiniteAlgebra> = (1..=8).map(cyclic).collect();
    for name in [
        "klein4",
        "sym3",
        "z2xz4",
        "z2xz2xz2",
        "dihedral-4",
        "quaternion",
    ] {
        groups.push(builtin(name).expect("builtin"));
    }
    groups
}

/// All algebras on `n` elements with `symbols` unary operations named
/// `f0, f1, ..`, in lexicographic order of their tables.
pub fn unary_algebras(n: usize, symbols: usize) -> impl Iterator<Item = FiniteAlgebra> {
    let maps = n.pow(n as u32);
    let total = maps.pow(symbols as u32);
    (0..total).map(move |mut code| {
        let mut ops = Vec::with_capacity(symbols);
        let mut digits = Vec::with_capacity(symbols);
        for _ in 0..symbols {
            digits.push(code % maps);
            code /= maps;
        }
        for (s, &map) in digits.iter().rev().enumerate() {
            let mut m = map;
            let mut table = vec![0 as Elem; n];
            for slot in table.iter_mut().rev() {
                *slot = (m % n) as Elem;
                m /= n;
            }
            ops.push((format!("f{s}"), 1, table));
        }
        let name = format!(
            "unary-{n}-{symbols}-{}",
            ops.iter()
                .map(|(_, _, t)| { t.iter().map(|v| v.to_string()).collect::<String>() })
                .collect::<Vec<_>>()
                .join("-")
        );
        FiniteAlgebra::new(name, n, ops).expect("valid tables")
    })
}
