//! Subalgebras of finite powers `A^k`, generated by worklist closure.
//!
//! Tuples are interned into a dense id space. Each tuple packs into a
//! `u128` key (`k * ceil(log2 n) <= 128` bits), which doubles as the hash
//! key of the store.
//!
//! Closure order is fixed: tuples are processed by ascending id; for the
//! tuple with id `i`, every operation (in signature order) is applied to
//! every argument combination over ids `0..=i` that uses `i` at least once,
//! in lexicographic order of the id vectors. Every combination is therefore
//! considered exactly once, when its largest id is processed. With
//! [`Parallelism::Parallel`] the results of a window of combinations are
//! computed on the thread pool and then interned sequentially in the same
//! order, so stores, ids, observer calls and budget accounting match the
//! sequential run exactly.

use std::fmt;
use std::ops::ControlFlow;

use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::algebra::{increment, Elem, FiniteAlgebra, Operation};
use crate::error::{Error, Result};
use crate::par::{self, Parallelism};

pub type TupleId = u32;

/// Limits on a single closure run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Budget {
    pub max_insertions: u64,
    pub max_op_applications: u64,
}

impl Budget {
    pub const DEFAULT_INSERTIONS: u64 = 10_000_000;
    pub const DEFAULT_OP_APPLICATIONS: u64 = 1_000_000_000;

    pub fn new(max_insertions: u64, max_op_applications: u64) -> Result<Self> {
        if max_insertions == 0 || max_op_applications == 0 {
            return Err(Error::InvalidArgument("budgets must be positive".into()));
        }
        Ok(Budget {
            max_insertions,
            max_op_applications,
        })
    }

    pub fn insertions(max_insertions: u64) -> Result<Self> {
        Budget::new(max_insertions, Self::DEFAULT_OP_APPLICATIONS)
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_insertions: Self::DEFAULT_INSERTIONS,
            max_op_applications: Self::DEFAULT_OP_APPLICATIONS,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClosureConfig {
    pub budget: Budget,
    pub parallelism: Parallelism,
}

impl ClosureConfig {
    pub fn sequential() -> Self {
        ClosureConfig {
            budget: Budget::default(),
            parallelism: Parallelism::Sequential,
        }
    }

    pub fn with_budget(budget: Budget) -> Self {
        ClosureConfig {
            budget,
            ..Default::default()
        }
    }
}

/// Why a closure run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    /// Natural termination: the store is closed under every operation.
    Closed,
    InsertionBudget,
    OpBudget,
    ObserverStopped,
    /// Built from an explicit tuple list, closure not established.
    Assembled,
}

impl Termination {
    pub fn budget_exhausted(self) -> bool {
        matches!(self, Termination::InsertionBudget | Termination::OpBudget)
    }
}

/// Bit packing of tuples over `{0..n-1}` into `u128` keys.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Packer {
    bits: u32,
    arity: usize,
}

impl Packer {
    pub fn new(base_size: usize, arity: usize) -> Result<Self> {
        let bits = (usize::BITS - (base_size.max(2) - 1).leading_zeros()).max(1);
        if arity == 0 || arity * bits as usize > 128 {
            return Err(Error::TupleTooWide {
                arity,
                size: base_size,
            });
        }
        Ok(Packer { bits, arity })
    }

    #[inline]
    pub fn pack(&self, tuple: &[Elem]) -> u128 {
        let mut key = 0u128;
        for (c, &v) in tuple.iter().enumerate() {
            key |= (v as u128) << (c as u32 * self.bits);
        }
        key
    }

    #[inline]
    pub fn unpack_into(&self, key: u128, out: &mut Vec<Elem>) {
        let mask = (1u128 << self.bits) - 1;
        for c in 0..self.arity {
            out.push(((key >> (c as u32 * self.bits)) & mask) as Elem);
        }
    }
}

/// An interned, insertion-ordered set of `k`-tuples over an algebra.
#[derive(Debug, Clone)]
pub struct Subpower {
    base_size: usize,
    arity: usize,
    packer: Packer,
    data: Vec<Elem>,
    index: FxHashMap<u128, TupleId>,
    generators: usize,
    termination: Termination,
    insertions: u64,
    op_applications: u64,
}

impl PartialEq for Subpower {
    /// Equality of the tuple lists in id order.
    fn eq(&self, other: &Self) -> bool {
        self.base_size == other.base_size && self.arity == other.arity && self.data == other.data
    }
}

impl Subpower {
    fn empty(base_size: usize, arity: usize) -> Result<Self> {
        Ok(Subpower {
            base_size,
            arity,
            packer: Packer::new(base_size, arity)?,
            data: Vec::new(),
            index: FxHashMap::default(),
            generators: 0,
            termination: Termination::Assembled,
            insertions: 0,
            op_applications: 0,
        })
    }

    /// A store holding exactly `tuples` (deduplicated, first occurrence
    /// order). Closure is not checked.
    pub fn from_tuples<'t>(
        base_size: usize,
        arity: usize,
        tuples: impl IntoIterator<Item = &'t [Elem]>,
    ) -> Result<Self> {
        let mut s = Subpower::empty(base_size, arity)?;
        for t in tuples {
            s.check_tuple(t)?;
            s.push(s.packer.pack(t), t);
        }
        s.generators = s.len();
        Ok(s)
    }

    fn check_tuple(&self, t: &[Elem]) -> Result<()> {
        if t.len() != self.arity {
            return Err(Error::MixedArity);
        }
        match t.iter().find(|&&v| v as usize >= self.base_size) {
            Some(&v) => Err(Error::ElementOutOfRange {
                value: v as usize,
                size: self.base_size,
            }),
            None => Ok(()),
        }
    }

    /// Inserts when absent; returns the id of a new tuple.
    fn push(&mut self, key: u128, t: &[Elem]) -> Option<TupleId> {
        let next = self.index.len() as TupleId;
        match self.index.entry(key) {
            std::collections::hash_map::Entry::Occupied(_) => None,
            std::collections::hash_map::Entry::Vacant(v) => {
                v.insert(next);
                self.data.extend_from_slice(t);
                self.insertions += 1;
                Some(next)
            }
        }
    }

    pub fn base_size(&self) -> usize {
        self.base_size
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.termination == Termination::Closed
    }

    pub fn termination(&self) -> Termination {
        self.termination
    }

    pub fn insertions_used(&self) -> u64 {
        self.insertions
    }

    pub fn op_applications(&self) -> u64 {
        self.op_applications
    }

    /// Number of distinct generators, stored first.
    pub fn generator_count(&self) -> usize {
        self.generators
    }

    pub fn packer(&self) -> Packer {
        self.packer
    }

    pub fn tuple(&self, id: TupleId) -> &[Elem] {
        let start = id as usize * self.arity;
        &self.data[start..start + self.arity]
    }

    /// Tuples in id order.
    pub fn tuples(&self) -> impl ExactSizeIterator<Item = &[Elem]> + '_ {
        self.data.chunks_exact(self.arity)
    }

    pub fn id_of(&self, t: &[Elem]) -> Option<TupleId> {
        if t.len() != self.arity || t.iter().any(|&v| v as usize >= self.base_size) {
            return None;
        }
        self.index.get(&self.packer.pack(t)).copied()
    }

    pub fn contains(&self, t: &[Elem]) -> Result<bool> {
        if t.len() != self.arity {
            return Err(Error::MixedArity);
        }
        Ok(self.id_of(t).is_some())
    }

    /// Tuples sorted lexicographically.
    pub fn sorted_tuples(&self) -> Vec<Vec<Elem>> {
        let mut v: Vec<Vec<Elem>> = self.tuples().map(<[Elem]>::to_vec).collect();
        v.sort();
        v
    }

    /// Projection onto `coords`, deduplicated in first-occurrence order.
    /// Closed exactly when `self` is.
    pub fn project(&self, coords: &[usize]) -> Result<Subpower> {
        if let Some(&index) = coords.iter().find(|&&c| c >= self.arity) {
            return Err(Error::BadCoordinate {
                index,
                arity: self.arity,
            });
        }
        let mut out = Subpower::empty(self.base_size, coords.len())?;
        let mut buf = Vec::with_capacity(coords.len());
        for t in self.tuples() {
            buf.clear();
            buf.extend(coords.iter().map(|&c| t[c]));
            out.push(out.packer.pack(&buf), &buf);
        }
        out.generators = out.len();
        out.termination = match self.termination {
            Termination::Closed => Termination::Closed,
            Termination::Assembled => Termination::Assembled,
            other => other,
        };
        Ok(out)
    }

    /// The subpower as an abstract algebra on its tuple ids.
    pub fn to_algebra(&self, a: &FiniteAlgebra, name: &str) -> Result<FiniteAlgebra> {
        if !self.is_closed() {
            return Err(Error::NotClosed);
        }
        let m = self.len();
        let signature: Vec<(&str, usize)> =
            a.ops().iter().map(|op| (op.name(), op.arity())).collect();
        let mut column = Vec::new();
        let mut result = Vec::with_capacity(self.arity);
        FiniteAlgebra::from_fn(name, m, &signature, |i, args| {
            let op = &a.ops()[i];
            result.clear();
            for c in 0..self.arity {
                column.clear();
                if op.arity() == 0 {
                    result.push(op.apply(&[]));
                    continue;
                }
                column.extend(args.iter().map(|&id| self.tuple(id as TupleId)[c]));
                result.push(op.apply(&column));
            }
            self.id_of(&result).expect("closed subpower") as Elem
        })
    }

    /// Exhaustive check that every operation maps members to members.
    pub fn audit_closure(&self, a: &FiniteAlgebra) -> bool {
        let m = self.len();
        let mut result = Vec::with_capacity(self.arity);
        let mut column = Vec::new();
        for op in a.ops() {
            let r = op.arity();
            if r > 0 && m == 0 {
                continue;
            }
            let mut ids = vec![0usize; r];
            loop {
                result.clear();
                for c in 0..self.arity {
                    column.clear();
                    column.extend(ids.iter().map(|&id| self.tuple(id as TupleId)[c]));
                    result.push(op.apply(&column));
                }
                if self.id_of(&result).is_none() {
                    return false;
                }
                if !odometer(&mut ids, m) {
                    break;
                }
            }
        }
        true
    }

    /// Text form: a header line, then one tuple per line in id order.
    pub fn serialize(&self) -> String {
        let mut out = format!(
            "subpower k={} size={} closed={}\n",
            self.arity,
            self.len(),
            self.is_closed()
        );
        for t in self.tuples() {
            let line: Vec<String> = t.iter().map(|v| v.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Subpower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

fn odometer(ids: &mut [usize], m: usize) -> bool {
    for slot in ids.iter_mut().rev() {
        if *slot + 1 < m {
            *slot += 1;
            return true;
        }
        *slot = 0;
    }
    false
}

/// Generates the subpower of `A^k` from `generators`.
pub fn generate(
    a: &FiniteAlgebra,
    k: usize,
    generators: &[Vec<Elem>],
    budget: Budget,
) -> Result<Subpower> {
    generate_with(
        a,
        k,
        generators,
        &ClosureConfig::with_budget(budget),
        &mut |_, _| ControlFlow::Continue(()),
    )
}

/// Generates with an observer invoked once per newly interned tuple, in id
/// order. Returning `Break` stops the run (flagged not closed).
pub fn generate_with(
    a: &FiniteAlgebra,
    k: usize,
    generators: &[Vec<Elem>],
    config: &ClosureConfig,
    observer: &mut dyn FnMut(TupleId, &[Elem]) -> ControlFlow<()>,
) -> Result<Subpower> {
    let store = Subpower::empty(a.size(), k)?;
    let mut distinct = rustc_hash::FxHashSet::default();
    for g in generators {
        store.check_tuple(g)?;
        distinct.insert(store.packer.pack(g));
    }
    if distinct.len() as u64 > config.budget.max_insertions {
        return Err(Error::BudgetBelowGenerators {
            generators: distinct.len(),
            budget: config.budget.max_insertions,
        });
    }
    let mut engine = Engine {
        a,
        config,
        store,
        observer,
        keys: Vec::new(),
        scratch: Vec::with_capacity(k),
    };
    let termination = engine.run(generators);
    let mut store = engine.store;
    store.termination = termination;
    Ok(store)
}

/// Combinations per parallel window.
const WINDOW: usize = 1 << 16;
/// Combinations per task inside a window.
const CHUNK: usize = 2048;

struct Engine<'a, 'o> {
    a: &'a FiniteAlgebra,
    config: &'a ClosureConfig,
    store: Subpower,
    observer: &'o mut dyn FnMut(TupleId, &[Elem]) -> ControlFlow<()>,
    keys: Vec<u128>,
    scratch: Vec<Elem>,
}

impl Engine<'_, '_> {
    fn intern(&mut self, key: u128) -> ControlFlow<Termination> {
        if self.store.index.contains_key(&key) {
            return ControlFlow::Continue(());
        }
        if self.store.insertions >= self.config.budget.max_insertions {
            return ControlFlow::Break(Termination::InsertionBudget);
        }
        self.scratch.clear();
        self.store.packer.unpack_into(key, &mut self.scratch);
        let id = self
            .store
            .push(key, &self.scratch)
            .expect("absent key inserts");
        match (self.observer)(id, &self.scratch) {
            ControlFlow::Continue(()) => ControlFlow::Continue(()),
            ControlFlow::Break(()) => ControlFlow::Break(Termination::ObserverStopped),
        }
    }

    fn apply_counted(&mut self, key: u128) -> ControlFlow<Termination> {
        if self.store.op_applications >= self.config.budget.max_op_applications {
            return ControlFlow::Break(Termination::OpBudget);
        }
        self.store.op_applications += 1;
        self.intern(key)
    }

    fn run(&mut self, generators: &[Vec<Elem>]) -> Termination {
        match self.run_inner(generators) {
            ControlFlow::Continue(()) => Termination::Closed,
            ControlFlow::Break(t) => t,
        }
    }

    fn run_inner(&mut self, generators: &[Vec<Elem>]) -> ControlFlow<Termination> {
        for g in generators {
            let key = self.store.packer.pack(g);
            self.intern(key)?;
        }
        self.store.generators = self.store.len();

        let a = self.a;
        let k = self.store.arity;
        for op in a.ops().iter().filter(|op| op.arity() == 0) {
            let key = self.store.packer.pack(&vec![op.apply(&[]); k]);
            self.apply_counted(key)?;
        }

        let mut i = 0usize;
        while i < self.store.len() {
            for op in a.ops().iter().filter(|op| op.arity() > 0) {
                let total = combination_count(i, op.arity());
                let mut lo = 0u128;
                while lo < total {
                    let width = (total - lo).min(WINDOW as u128) as usize;
                    self.compute_window(op, i, lo, width);
                    let keys = std::mem::take(&mut self.keys);
                    let outcome = keys.iter().try_for_each(|&key| self.apply_counted(key));
                    self.keys = keys;
                    outcome?;
                    lo += width as u128;
                }
            }
            i += 1;
        }
        ControlFlow::Continue(())
    }

    /// Fills `self.keys` with the packed results of combinations
    /// `lo..lo + width` for the tuple with id `i`.
    fn compute_window(&mut self, op: &Operation, i: usize, lo: u128, width: usize) {
        self.keys.clear();
        self.keys.resize(width, 0);
        let store = &self.store;
        let mode = if width > CHUNK {
            self.config.parallelism
        } else {
            Parallelism::Sequential
        };
        par::fill_chunks(&mut self.keys, CHUNK, mode, |start, out| {
            let mut ids = vec![0usize; op.arity()];
            for (j, slot) in out.iter_mut().enumerate() {
                unrank(i, lo + (start + j) as u128, &mut ids);
                *slot = apply_packed(store, op, &ids);
            }
        });
    }
}

#[inline]
fn apply_packed(store: &Subpower, op: &Operation, ids: &[usize]) -> u128 {
    let k = store.arity;
    let bits = store.packer.bits;
    let table = op.table();
    let strides = op.strides();
    let data = &store.data;
    let mut key = 0u128;
    for c in 0..k {
        let mut index = 0usize;
        for (&id, &stride) in ids.iter().zip(strides) {
            index += data[id * k + c] as usize * stride;
        }
        key |= (table[index] as u128) << (c as u32 * bits);
    }
    key
}

/// Number of id vectors in `{0..=i}^r` that contain `i`.
fn combination_count(i: usize, r: usize) -> u128 {
    let i = i as u128;
    (i + 1).pow(r as u32) - i.pow(r as u32)
}

/// The `rank`-th (lexicographic) id vector in `{0..=i}^r` containing `i`.
#[allow(clippy::needless_range_loop)]
fn unrank(i: usize, mut rank: u128, ids: &mut [usize]) {
    let r = ids.len();
    if r == 1 {
        ids[0] = i;
        return;
    }
    if r == 2 {
        let i128 = i as u128;
        if rank < i128 {
            ids[0] = rank as usize;
            ids[1] = i;
        } else {
            ids[0] = i;
            ids[1] = (rank - i128) as usize;
        }
        return;
    }
    let base = i as u128 + 1;
    let mut must = true;
    for p in 0..r {
        let rem = (r - p - 1) as u32;
        if must {
            let block = base.pow(rem) - (i as u128).pow(rem);
            if rank < i as u128 * block {
                ids[p] = (rank / block) as usize;
                rank %= block;
            } else {
                ids[p] = i;
                rank -= i as u128 * block;
                must = false;
            }
        } else {
            let block = base.pow(rem);
            ids[p] = (rank / block) as usize;
            rank %= block;
        }
    }
}

/// All constant tuples of arity `k`.
pub fn diagonal_generators(n: usize, k: usize) -> Vec<Vec<Elem>> {
    (0..n).map(|v| vec![v as Elem; k]).collect()
}

/// Every tuple of `{0..n-1}^k` in lexicographic order.
pub fn all_tuples(n: usize, k: usize) -> Vec<Vec<Elem>> {
    let mut out = Vec::with_capacity(n.pow(k as u32));
    let mut t = vec![0 as Elem; k];
    loop {
        out.push(t.clone());
        if !increment(&mut t, n) {
            break;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::{builtin, cyclic};

    fn brute_combos(i: usize, r: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut ids = vec![0usize; r];
        loop {
            if ids.contains(&i) {
                out.push(ids.clone());
            }
            if !odometer(&mut ids, i + 1) {
                break;
            }
        }
        out
    }

    #[test]
    fn unranking_is_lexicographic() {
        for r in 1..=4 {
            for i in 0..5 {
                let expected = brute_combos(i, r);
                assert_eq!(combination_count(i, r), expected.len() as u128);
                let mut ids = vec![0; r];
                for (rank, want) in expected.iter().enumerate() {
                    unrank(i, rank as u128, &mut ids);
                    assert_eq!(&ids, want, "r={r} i={i} rank={rank}");
                }
            }
        }
    }

    #[test]
    fn single_generator_generates_universe() {
        let a = builtin("paper-z6").unwrap();
        let s = generate(&a, 1, &[vec![1]], Budget::default()).unwrap();
        assert!(s.is_closed());
        assert_eq!(s.len(), 6);
        assert_eq!(s.tuple(0), &[1]);
        // generator first, then the constant, then closure in id order
        assert_eq!(s.tuple(1), &[3]);
    }

    #[test]
    fn diagonal_is_closed() {
        let a = builtin("paper-z6").unwrap();
        let s = generate(&a, 5, &diagonal_generators(6, 5), Budget::default()).unwrap();
        assert!(s.is_closed());
        assert_eq!(s.len(), 6);
        assert!(s.audit_closure(&a));
    }

    #[test]
    fn insertion_budget_is_respected() {
        let a = cyclic(5);
        let budget = Budget::insertions(7).unwrap();
        let s = generate(&a, 2, &[vec![1, 0], vec![0, 1]], budget).unwrap();
        assert_eq!(s.termination(), Termination::InsertionBudget);
        assert_eq!(s.len(), 7);
        assert!(s.contains(&[1, 0]).unwrap() && s.contains(&[0, 1]).unwrap());
        assert_eq!(
            generate(
                &a,
                2,
                &[vec![1, 0], vec![0, 1]],
                Budget::insertions(1).unwrap()
            )
            .unwrap_err(),
            Error::BudgetBelowGenerators {
                generators: 2,
                budget: 1
            }
        );
        let ops = generate(&a, 2, &[vec![1, 0]], Budget::new(100, 3).unwrap()).unwrap();
        assert_eq!(ops.termination(), Termination::OpBudget);
        assert_eq!(ops.op_applications(), 3);
    }

    #[test]
    fn observer_can_stop() {
        let a = cyclic(7);
        let mut seen = Vec::new();
        let s = generate_with(
            &a,
            2,
            &[vec![1, 2]],
            &ClosureConfig::default(),
            &mut |id, t| {
                seen.push((id, t.to_vec()));
                if id == 3 {
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            },
        )
        .unwrap();
        assert_eq!(s.termination(), Termination::ObserverStopped);
        assert_eq!(s.len(), 4);
        assert_eq!(
            seen.iter().map(|(id, _)| *id).collect::<Vec<_>>(),
            vec![0, 1, 2, 3]
        );
    }

    #[test]
    fn projections_and_membership() {
        let a = builtin("paper-z6").unwrap();
        let diag = generate(&a, 3, &diagonal_generators(6, 3), Budget::default()).unwrap();
        let p = diag.project(&[0]).unwrap();
        assert_eq!(p.len(), 6);
        assert!(p.is_closed());
        assert_eq!(diag.project(&[0, 1, 2]).unwrap(), diag);
        assert_eq!(
            diag.project(&[3]).unwrap_err(),
            Error::BadCoordinate { index: 3, arity: 3 }
        );
        assert!(!diag.contains(&[0, 1, 0]).unwrap());
        assert!(diag.contains(&[0, 1]).is_err());
    }

    #[test]
    fn serialization_header() {
        let a = cyclic(2);
        let s = generate(&a, 2, &[vec![0, 1]], Budget::default()).unwrap();
        let text = s.serialize();
        assert!(text.starts_with("subpower k=2 size=2 closed=true\n0 1\n0 0\n"));
    }

    #[test]
    fn abstract_algebra_of_subpower() {
        let a = builtin("paper-z6").unwrap();
        let d = generate(&a, 2, &[vec![1, 5]], Budget::default()).unwrap();
        assert_eq!(d.len(), 6);
        let alg = d.to_algebra(&a, "D").unwrap();
        assert_eq!(alg.size(), 6);
        let c = alg.eval_op("c", &[]).unwrap();
        assert_eq!(d.tuple(c as TupleId), &[3, 3]);
    }

    #[test]
    fn parallel_matches_sequential() {
        let a = builtin("paper-z6").unwrap();
        let gens = vec![vec![0, 1, 0, 1], vec![2, 2, 5, 5], vec![1, 4, 4, 1]];
        let seq = generate_with(&a, 4, &gens, &ClosureConfig::sequential(), &mut |_, _| {
            ControlFlow::Continue(())
        })
        .unwrap();
        let par = generate_with(
            &a,
            4,
            &gens,
            &ClosureConfig {
                budget: Budget::default(),
                parallelism: Parallelism::Parallel,
            },
            &mut |_, _| ControlFlow::Continue(()),
        )
        .unwrap();
        assert_eq!(seq, par);
        assert_eq!(seq.op_applications(), par.op_applications());
    }
}
