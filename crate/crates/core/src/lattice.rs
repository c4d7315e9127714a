//! Partitions, congruences and subuniverses.

use std::cmp::Reverse;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rustc_hash::FxHashSet;

use crate::algebra::{Elem, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::par::{self, Parallelism};
use crate::subpower::{self, Budget, Subpower};

/// Largest algebra whose congruence lattice is computed by default.
pub const DEFAULT_CON_BOUND: usize = 64;
/// Largest algebra whose subuniverses are enumerated by default.
pub const DEFAULT_SUB_BOUND: usize = 12;

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns true when two distinct classes were merged.
    pub(crate) fn union(&mut self, x: usize, y: usize) -> bool {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx == ry {
            return false;
        }
        // keep the smaller root so roots are class minima
        if rx < ry {
            self.parent[ry] = rx;
        } else {
            self.parent[rx] = ry;
        }
        true
    }

    pub(crate) fn into_partition(mut self) -> Partition {
        let n = self.parent.len();
        let ids = (0..n).map(|x| self.find(x)).collect();
        Partition { ids }
    }
}

/// An equivalence relation on `{0..n-1}`, stored as the minimum element of
/// each element's block.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    ids: Vec<usize>,
}

impl Partition {
    /// The identity relation (all singletons).
    pub fn zero(n: usize) -> Self {
        Partition {
            ids: (0..n).collect(),
        }
    }

    /// The full relation (one block).
    pub fn one(n: usize) -> Self {
        Partition { ids: vec![0; n] }
    }

    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut seen = vec![false; n];
        let mut uf = UnionFind::new(n);
        for block in blocks {
            for &x in block {
                if x >= n {
                    return Err(Error::ElementOutOfRange { value: x, size: n });
                }
                if std::mem::replace(&mut seen[x], true) {
                    return Err(Error::InvalidArgument(format!("element {x} listed twice")));
                }
                uf.union(block[0], x);
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidArgument(format!(
                "element {missing} not covered"
            )));
        }
        Ok(uf.into_partition())
    }

    /// Equivalence relation generated by `pairs` (no compatibility closure).
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut uf = UnionFind::new(n);
        for &(x, y) in pairs {
            check_range(x, n)?;
            check_range(y, n)?;
            uf.union(x, y);
        }
        Ok(uf.into_partition())
    }

    pub fn size(&self) -> usize {
        self.ids.len()
    }

    /// The least element of `x`'s block.
    pub fn block_id(&self, x: usize) -> usize {
        self.ids[x]
    }

    pub fn related(&self, x: usize, y: usize) -> bool {
        self.ids[x] == self.ids[y]
    }

    pub fn num_blocks(&self) -> usize {
        self.ids
            .iter()
            .enumerate()
            .filter(|&(i, &id)| i == id)
            .count()
    }

    /// Minimal block representatives, ascending.
    pub fn representatives(&self) -> Vec<usize> {
        self.ids
            .iter()
            .enumerate()
            .filter(|&(i, &id)| i == id)
            .map(|(i, _)| i)
            .collect()
    }

    /// Blocks sorted by minimum element, each ascending.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let reps = self.representatives();
        let mut blocks = vec![Vec::new(); reps.len()];
        for (x, id) in self.ids.iter().enumerate() {
            let b = reps
                .binary_search(id)
                .expect("block id is a representative");
            blocks[b].push(x);
        }
        blocks
    }

    /// Related pairs `(x, y)` with `x < y`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for block in self.blocks() {
            for (i, &x) in block.iter().enumerate() {
                out.extend(block[i + 1..].iter().map(|&y| (x, y)));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.ids.iter().enumerate().all(|(i, &id)| i == id)
    }

    pub fn is_one(&self) -> bool {
        self.ids.iter().all(|&id| id == 0)
    }

    /// `self ≤ other`: every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        self.size() == other.size() && (0..self.size()).all(|x| other.related(x, self.ids[x]))
    }

    pub fn join(&self, other: &Partition) -> Result<Partition> {
        same_size(self.size(), other.size())?;
        let mut uf = UnionFind::new(self.size());
        for x in 0..self.size() {
            uf.union(x, self.ids[x]);
            uf.union(x, other.ids[x]);
        }
        Ok(uf.into_partition())
    }

    pub fn meet(&self, other: &Partition) -> Result<Partition> {
        same_size(self.size(), other.size())?;
        let n = self.size();
        let mut first = rustc_hash::FxHashMap::default();
        let ids = (0..n)
            .map(|x| *first.entry((self.ids[x], other.ids[x])).or_insert(x))
            .collect();
        Ok(Partition { ids })
    }

    /// Whether `self ∘ other` is the full relation, i.e. every block of
    /// `self` meets every block of `other`.
    pub fn permutes_to_one(&self, other: &Partition) -> bool {
        let a = self.representatives();
        let b = other.representatives();
        let mut met = FxHashSet::default();
        for x in 0..self.size() {
            met.insert((self.ids[x], other.ids[x]));
        }
        met.len() == a.len() * b.len()
    }

    /// Canonical lattice order: finer partitions first, ties broken by the
    /// block-id vector.
    pub fn lattice_key(&self) -> (Reverse<usize>, &[usize]) {
        (Reverse(self.num_blocks()), &self.ids)
    }

    /// Parses the text form, requiring it to cover exactly `{0..n-1}`.
    pub fn parse_sized(text: &str, n: usize) -> Result<Self> {
        let p: Partition = text.parse()?;
        same_size(p.size(), n)?;
        Ok(p)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .blocks()
            .iter()
            .map(|b| {
                b.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        f.write_str(&blocks.join("|"))
    }
}

impl serde::Serialize for Partition {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses `"0 3|1 4|2 5"`.
    fn from_str(s: &str) -> Result<Self> {
        let mut blocks = Vec::new();
        for block in s.split('|') {
            let elems = block
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::InvalidArgument(format!("bad element `{t}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            if elems.is_empty() {
                return Err(Error::InvalidArgument(format!("empty block in `{s}`")));
            }
            blocks.push(elems);
        }
        let n = blocks.iter().map(Vec::len).sum();
        Partition::from_blocks(n, &blocks)
    }
}

/// A subset of the universe `{0..n-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subset {
    mask: Vec<bool>,
}

impl Subset {
    pub fn empty(n: usize) -> Self {
        Subset {
            mask: vec![false; n],
        }
    }

    pub fn full(n: usize) -> Self {
        Subset {
            mask: vec![true; n],
        }
    }

    pub fn from_elems(n: usize, elems: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut s = Subset::empty(n);
        for e in elems {
            check_range(e, n)?;
            s.mask[e] = true;
        }
        Ok(s)
    }

    /// Parses `"0,3"` or `"{0,3}"`; the empty string is the empty set.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let inner = text.trim().trim_start_matches('{').trim_end_matches('}');
        let elems = inner
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::InvalidArgument(format!("bad element `{t}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Subset::from_elems(n, elems)
    }

    pub fn universe_size(&self) -> usize {
        self.mask.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.mask.get(x).copied().unwrap_or(false)
    }

    pub fn insert(&mut self, x: usize) {
        self.mask[x] = true;
    }

    pub fn elems(&self) -> Vec<usize> {
        (0..self.mask.len()).filter(|&i| self.mask[i]).collect()
    }

    pub fn len(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.mask.iter().any(|&m| m)
    }

    pub fn is_full(&self) -> bool {
        self.mask.iter().all(|&m| m)
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        self.mask.len() == other.mask.len()
            && self.mask.iter().zip(&other.mask).all(|(&a, &b)| !a || b)
    }
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.len(), self.elems()).cmp(&(other.len(), other.elems()))
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let elems: Vec<String> = self.elems().iter().map(|e| e.to_string()).collect();
        write!(f, "{{{}}}", elems.join(","))
    }
}

impl serde::Serialize for Subset {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.elems())
    }
}

fn check_range(x: usize, n: usize) -> Result<()> {
    if x < n {
        Ok(())
    } else {
        Err(Error::ElementOutOfRange { value: x, size: n })
    }
}

fn same_size(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::SizeMismatch { left, right })
    }
}

/// For each operation and argument position, the table offsets of every
/// frame (all other arguments fixed) with the free position set to zero.
fn frame_offsets(a: &FiniteAlgebra) -> Vec<Vec<(usize, Vec<usize>)>> {
    let n = a.size();
    a.ops()
        .iter()
        .map(|op| {
            let strides = op.strides();
            (0..op.arity())
                .map(|pos| {
                    let mut offsets = vec![0usize];
                    for (q, &stride) in strides.iter().enumerate() {
                        if q == pos {
                            continue;
                        }
                        offsets = offsets
                            .iter()
                            .flat_map(|&base| (0..n).map(move |v| base + v * stride))
                            .collect();
                    }
                    (strides[pos], offsets)
                })
                .collect()
        })
        .collect()
}

pub fn is_congruence(a: &FiniteAlgebra, theta: &Partition) -> Result<bool> {
    same_size(a.size(), theta.size())?;
    let n = a.size();
    for (op, positions) in a.ops().iter().zip(frame_offsets(a)) {
        let table = op.table();
        for (stride, offsets) in positions {
            for base in offsets {
                for x in 0..n {
                    let rep = theta.block_id(x);
                    if rep == x {
                        continue;
                    }
                    let fx = table[base + x * stride] as usize;
                    let fr = table[base + rep * stride] as usize;
                    if !theta.related(fx, fr) {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// The least congruence containing `pairs`.
pub fn congruence_generated(a: &FiniteAlgebra, pairs: &[(usize, usize)]) -> Result<Partition> {
    let frames = frame_offsets(a);
    congruence_generated_with(a, &frames, pairs)
}

fn congruence_generated_with(
    a: &FiniteAlgebra,
    frames: &[Vec<(usize, Vec<usize>)>],
    pairs: &[(usize, usize)],
) -> Result<Partition> {
    let n = a.size();
    let mut uf = UnionFind::new(n);
    let mut work = Vec::new();
    for &(x, y) in pairs {
        check_range(x, n)?;
        check_range(y, n)?;
        if uf.union(x, y) {
            work.push((x, y));
        }
    }
    while let Some((x, y)) = work.pop() {
        for (op, positions) in a.ops().iter().zip(frames) {
            let table = op.table();
            for (stride, offsets) in positions {
                for &base in offsets {
                    let fx = table[base + x * stride] as usize;
                    let fy = table[base + y * stride] as usize;
                    if uf.union(fx, fy) {
                        work.push((fx, fy));
                    }
                }
            }
        }
    }
    Ok(uf.into_partition())
}

/// All principal congruences `Cg(x, y)` for `x < y`, deduplicated and in
/// canonical order.
pub fn principal_congruences(a: &FiniteAlgebra, mode: Parallelism) -> Vec<Partition> {
    let n = a.size();
    let frames = frame_offsets(a);
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
        .collect();
    let principals = par::map_slice(&pairs, mode, |&pair| {
        congruence_generated_with(a, &frames, &[pair]).expect("pairs in range")
    });
    let mut unique: Vec<Partition> = principals
        .into_iter()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    unique.sort_by(|p, q| p.lattice_key().cmp(&q.lattice_key()));
    unique
}

pub fn congruence_lattice(a: &FiniteAlgebra) -> Result<Vec<Partition>> {
    congruence_lattice_with(a, DEFAULT_CON_BOUND, Parallelism::default())
}

/// Join closure of the principal congruences together with `0`, sorted
/// canonically (finest first).
pub fn congruence_lattice_with(
    a: &FiniteAlgebra,
    bound: usize,
    mode: Parallelism,
) -> Result<Vec<Partition>> {
    let n = a.size();
    if n > bound {
        return Err(Error::TooLarge {
            what: "algebra",
            size: n,
            bound,
        });
    }
    let principals = principal_congruences(a, mode);
    let mut seen: FxHashSet<Partition> = FxHashSet::default();
    seen.insert(Partition::zero(n));
    let mut frontier: Vec<Partition> = Vec::new();
    for p in &principals {
        if seen.insert(p.clone()) {
            frontier.push(p.clone());
        }
    }
    while !frontier.is_empty() {
        let joins: Vec<Vec<Partition>> = par::map_slice(&frontier, mode, |x| {
            principals
                .iter()
                .map(|p| x.join(p).expect("equal sizes"))
                .collect()
        });
        frontier = Vec::new();
        for j in joins.into_iter().flatten() {
            if !seen.contains(&j) {
                seen.insert(j.clone());
                frontier.push(j);
            }
        }
    }
    let mut lattice: Vec<Partition> = seen.into_iter().collect();
    lattice.sort_by(|p, q| p.lattice_key().cmp(&q.lattice_key()));
    Ok(lattice)
}

/// The least subuniverse containing `s` (and every constant).
pub fn subuniverse_closure(a: &FiniteAlgebra, s: &Subset) -> Result<Subset> {
    same_size(a.size(), s.universe_size())?;
    let generators: Vec<Vec<Elem>> = s.elems().into_iter().map(|e| vec![e as Elem]).collect();
    let closed = subpower::generate_with(
        a,
        1,
        &generators,
        &subpower::ClosureConfig {
            budget: Budget::default(),
            parallelism: Parallelism::Sequential,
        },
        &mut |_, _| std::ops::ControlFlow::Continue(()),
    )?;
    Subset::from_elems(a.size(), closed.tuples().map(|t| t[0] as usize))
}

pub fn is_subuniverse(a: &FiniteAlgebra, s: &Subset) -> Result<bool> {
    Ok(subuniverse_closure(a, s)? == *s)
}

pub fn all_subuniverses(a: &FiniteAlgebra) -> Result<Vec<Subset>> {
    all_subuniverses_with(a, DEFAULT_SUB_BOUND, Parallelism::default())
}

/// Closures of every subset, deduplicated and sorted by size then elements.
/// The empty set appears only for signatures without constants.
pub fn all_subuniverses_with(
    a: &FiniteAlgebra,
    bound: usize,
    mode: Parallelism,
) -> Result<Vec<Subset>> {
    let n = a.size();
    if n > bound || n >= usize::BITS as usize {
        return Err(Error::TooLarge {
            what: "algebra",
            size: n,
            bound,
        });
    }
    let closures = par::map_indexed(1usize << n, mode, |mask| {
        let s = Subset::from_elems(n, (0..n).filter(|&i| mask >> i & 1 == 1)).expect("in range");
        subuniverse_closure(a, &s).expect("sizes match")
    });
    Ok(closures
        .into_iter()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect())
}

/// Union of the `theta`-classes that meet `b`.
pub fn saturation(a: &FiniteAlgebra, b: &Subset, theta: &Partition) -> Result<Subset> {
    same_size(a.size(), b.universe_size())?;
    if !is_congruence(a, theta)? {
        return Err(Error::NotCongruence);
    }
    let hit: FxHashSet<usize> = b.elems().into_iter().map(|x| theta.block_id(x)).collect();
    Subset::from_elems(
        a.size(),
        (0..a.size()).filter(|&x| hit.contains(&theta.block_id(x))),
    )
}

/// Every coordinate projection of `d` is the whole universe.
pub fn is_subdirect(a: &FiniteAlgebra, d: &Subpower) -> bool {
    let n = a.size();
    (0..d.arity()).all(|i| {
        let mut seen = vec![false; n];
        for t in d.tuples() {
            seen[t[i] as usize] = true;
        }
        seen.iter().all(|&s| s)
    })
}

/// Number of `q`-blocks inside each `p`-block when that number is uniform.
pub fn class_index(p: &Partition, q: &Partition) -> Result<Option<usize>> {
    if !q.refines(p) {
        return Err(Error::NotRefinement);
    }
    let mut counts = rustc_hash::FxHashMap::default();
    for rep in q.representatives() {
        *counts.entry(p.block_id(rep)).or_insert(0usize) += 1;
    }
    let mut values = counts.values().copied();
    let first = values.next().unwrap_or(1);
    Ok(values.all(|c| c == first).then_some(first))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decomposition {
    Indecomposable,
    /// A pair of nontrivial complementary permuting congruences.
    Factors(Partition, Partition),
}

impl Decomposition {
    pub fn is_indecomposable(&self) -> bool {
        matches!(self, Decomposition::Indecomposable)
    }
}

pub fn is_directly_indecomposable(a: &FiniteAlgebra) -> Result<Decomposition> {
    let lattice = congruence_lattice(a)?;
    let n = a.size();
    let proper: Vec<&Partition> = lattice
        .iter()
        .filter(|p| !p.is_zero() && !p.is_one())
        .collect();
    for (i, alpha) in proper.iter().enumerate() {
        for beta in &proper[i + 1..] {
            if alpha.meet(beta)? == Partition::zero(n)
                && alpha.join(beta)?.is_one()
                && alpha.permutes_to_one(beta)
            {
                return Ok(Decomposition::Factors((*alpha).clone(), (*beta).clone()));
            }
        }
    }
    Ok(Decomposition::Indecomposable)
}
