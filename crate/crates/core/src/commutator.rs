//! Hypercube subpowers `M(θ_0, .., θ_{k-1}) ≤ A^{2^k}`, the 2-term higher
//! commutator, supernilpotence, and the term-condition commutator.
//!
//! A coordinate of `A^{2^k}` has an address in `{0,1}^k`. Address places
//! are read as a binary numeral with place 0 most significant, and that
//! number is the coordinate's position in a tuple. The last coordinate is
//! the all-ones address, position `2^k - 1`; all others are "earlier".

use std::ops::ControlFlow;

use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::algebra::{Elem, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::lattice::{self, Partition};
use crate::subpower::{self, ClosureConfig, Packer, Subpower, Termination, TupleId};

/// Largest cube dimension accepted (tuples of arity `2^k`).
pub const MAX_DIMENSION: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CubeAddress {
    dim: usize,
    index: usize,
}

impl CubeAddress {
    pub fn new(dim: usize, index: usize) -> Result<Self> {
        if index >= 1 << dim {
            return Err(Error::BadCoordinate {
                index,
                arity: 1 << dim,
            });
        }
        Ok(CubeAddress { dim, index })
    }

    pub fn from_places(places: &[bool]) -> Self {
        let index = places.iter().fold(0, |acc, &b| acc << 1 | b as usize);
        CubeAddress {
            dim: places.len(),
            index,
        }
    }

    pub fn last(dim: usize) -> Self {
        CubeAddress {
            dim,
            index: (1 << dim) - 1,
        }
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Value of place `j` (direction `j`).
    pub fn place(&self, j: usize) -> bool {
        self.index >> (self.dim - 1 - j) & 1 == 1
    }

    pub fn is_last(&self) -> bool {
        self.index == (1 << self.dim) - 1
    }

    pub fn hamming(&self, other: &CubeAddress) -> u32 {
        (self.index ^ other.index).count_ones()
    }

    pub fn all(dim: usize) -> impl Iterator<Item = CubeAddress> {
        (0..1 << dim).map(move |index| CubeAddress { dim, index })
    }
}

/// The tuple that is `u` on the `place j = 0` hyperface and `v` on the
/// `place j = 1` hyperface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct StandardGenerator {
    pub dim: usize,
    pub direction: usize,
    pub u: Elem,
    pub v: Elem,
}

impl StandardGenerator {
    pub fn expand(&self) -> Vec<Elem> {
        CubeAddress::all(self.dim)
            .map(|addr| {
                if addr.place(self.direction) {
                    self.v
                } else {
                    self.u
                }
            })
            .collect()
    }
}

fn check_thetas(a: &FiniteAlgebra, thetas: &[Partition]) -> Result<()> {
    if thetas.is_empty() || thetas.len() > MAX_DIMENSION {
        return Err(Error::InvalidArgument(format!(
            "cube dimension must lie in 1..={MAX_DIMENSION}, got {}",
            thetas.len()
        )));
    }
    for theta in thetas {
        if !lattice::is_congruence(a, theta)? {
            return Err(Error::NotCongruence);
        }
    }
    Ok(())
}

/// Standard generators in every direction, ordered by direction, then `u`,
/// then `v`. Constant tuples appear once per direction.
pub fn standard_generators(
    a: &FiniteAlgebra,
    thetas: &[Partition],
) -> Result<Vec<StandardGenerator>> {
    check_thetas(a, thetas)?;
    let dim = thetas.len();
    let n = a.size();
    let mut out = Vec::new();
    for (direction, theta) in thetas.iter().enumerate() {
        for u in 0..n {
            for v in (0..n).filter(|&v| theta.related(u, v)) {
                out.push(StandardGenerator {
                    dim,
                    direction,
                    u: u as Elem,
                    v: v as Elem,
                });
            }
        }
    }
    Ok(out)
}

pub fn standard_generator_tuples(
    a: &FiniteAlgebra,
    thetas: &[Partition],
) -> Result<Vec<Vec<Elem>>> {
    Ok(standard_generators(a, thetas)?
        .iter()
        .map(StandardGenerator::expand)
        .collect())
}

/// `M(θ_0, .., θ_{k-1})`.
pub fn cube(a: &FiniteAlgebra, thetas: &[Partition], config: &ClosureConfig) -> Result<Subpower> {
    let generators = standard_generator_tuples(a, thetas)?;
    subpower::generate_with(a, 1 << thetas.len(), &generators, config, &mut |_, _| {
        ControlFlow::Continue(())
    })
}

/// Two cube members that agree at every earlier coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub s: Vec<Elem>,
    pub t: Vec<Elem>,
}

impl Witness {
    pub fn s_last(&self) -> Elem {
        *self.s.last().expect("nonempty tuple")
    }

    pub fn t_last(&self) -> Elem {
        *self.t.last().expect("nonempty tuple")
    }

    /// Equal prefixes and distinct last entries.
    pub fn has_collision_shape(&self) -> bool {
        let k = self.s.len();
        k == self.t.len()
            && k >= 2
            && self.s[..k - 1] == self.t[..k - 1]
            && self.s_last() != self.t_last()
    }
}

/// Online detector of tuples whose earlier coordinates repeat with a new
/// last value. The prefix packs exactly into a `u128`, so equal keys mean
/// equal prefixes.
pub(crate) struct PrefixIndex {
    packer: Packer,
    first: FxHashMap<u128, (TupleId, Elem)>,
}

impl PrefixIndex {
    pub(crate) fn new(base_size: usize, arity: usize) -> Result<Self> {
        Ok(PrefixIndex {
            packer: Packer::new(base_size, arity - 1)?,
            first: FxHashMap::default(),
        })
    }

    /// Records `t`; returns the earlier tuple with the same prefix and a
    /// different last entry, if any.
    pub(crate) fn observe(&mut self, id: TupleId, t: &[Elem]) -> Option<TupleId> {
        let (prefix, last) = t.split_at(t.len() - 1);
        let key = self.packer.pack(prefix);
        match self.first.entry(key) {
            std::collections::hash_map::Entry::Occupied(e) => {
                let (first_id, first_last) = *e.get();
                (first_last != last[0]).then_some(first_id)
            }
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert((id, last[0]));
                None
            }
        }
    }

    pub(crate) fn lookup(&self, prefix: &[Elem]) -> Option<Elem> {
        self.first
            .get(&self.packer.pack(prefix))
            .map(|&(_, last)| last)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decided {
    Exact,
    ZeroTestOnly,
    UnknownBudget,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Exact,
    ZeroTest,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommutatorResult {
    pub value: Partition,
    pub witnesses: Vec<Witness>,
    pub decided: Decided,
    pub cube_size: usize,
    pub termination: Termination,
}

/// The least congruence containing `(s_last, t_last)` for every pair of
/// cube members that agree at all earlier coordinates.
///
/// In [`Mode::ZeroTest`] generation stops at the first such pair. In
/// [`Mode::Exact`] one witness is kept per distinct pair of last values.
pub fn two_term_higher_commutator(
    a: &FiniteAlgebra,
    thetas: &[Partition],
    mode: Mode,
    config: &ClosureConfig,
) -> Result<CommutatorResult> {
    if thetas.len() < 2 {
        return Err(Error::InvalidArgument(
            "higher commutator needs at least two congruences".into(),
        ));
    }
    let generators = standard_generator_tuples(a, thetas)?;
    let arity = 1 << thetas.len();
    let mut index = PrefixIndex::new(a.size(), arity)?;
    let mut collisions: Vec<(TupleId, TupleId)> = Vec::new();
    let mut seen_pairs = rustc_hash::FxHashSet::default();
    let mut last_of: Vec<Elem> = Vec::new();
    let store = subpower::generate_with(a, arity, &generators, config, &mut |id, t| {
        last_of.push(t[arity - 1]);
        if let Some(first) = index.observe(id, t) {
            let (x, y) = (last_of[first as usize], t[arity - 1]);
            if seen_pairs.insert((x.min(y), x.max(y))) {
                collisions.push((first, id));
            }
            if mode == Mode::ZeroTest {
                return ControlFlow::Break(());
            }
        }
        ControlFlow::Continue(())
    })?;

    let witnesses: Vec<Witness> = collisions
        .iter()
        .map(|&(s, t)| Witness {
            s: store.tuple(s).to_vec(),
            t: store.tuple(t).to_vec(),
        })
        .collect();
    let pairs: Vec<(usize, usize)> = witnesses
        .iter()
        .map(|w| (w.s_last() as usize, w.t_last() as usize))
        .collect();
    let value = lattice::congruence_generated(a, &pairs)?;
    let decided = match store.termination() {
        Termination::Closed => Decided::Exact,
        Termination::ObserverStopped => Decided::ZeroTestOnly,
        _ if mode == Mode::ZeroTest && !witnesses.is_empty() => Decided::ZeroTestOnly,
        _ => Decided::UnknownBudget,
    };
    Ok(CommutatorResult {
        value,
        witnesses,
        decided,
        cube_size: store.len(),
        termination: store.termination(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "answer", content = "witness")]
pub enum Supernilpotence {
    Yes,
    No(Witness),
    Unknown,
}

/// Zero test of the `(cls + 1)`-fold higher commutator of `(θ, .., θ)`.
pub fn is_supernilpotent(
    a: &FiniteAlgebra,
    theta: &Partition,
    cls: usize,
    config: &ClosureConfig,
) -> Result<Supernilpotence> {
    if cls == 0 {
        return Err(Error::InvalidArgument("class must be at least 1".into()));
    }
    let thetas = vec![theta.clone(); cls + 1];
    let result = two_term_higher_commutator(a, &thetas, Mode::ZeroTest, config)?;
    Ok(
        match (result.witnesses.into_iter().next(), result.decided) {
            (Some(w), _) => Supernilpotence::No(w),
            (None, Decided::Exact) => Supernilpotence::Yes,
            (None, _) => Supernilpotence::Unknown,
        },
    )
}

/// Independent re-check of a witness: both tuples are regenerated as cube
/// members (`None` if the budget runs out first), prefixes agree and last
/// entries differ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WitnessCheck {
    pub members: Option<bool>,
    pub prefix_equal: bool,
    pub last_distinct: bool,
}

impl WitnessCheck {
    pub fn passed(&self) -> bool {
        self.members == Some(true) && self.prefix_equal && self.last_distinct
    }
}

pub fn verify_witness(
    a: &FiniteAlgebra,
    thetas: &[Partition],
    witness: &Witness,
    config: &ClosureConfig,
) -> Result<WitnessCheck> {
    let arity = 1 << thetas.len();
    let k = witness.s.len();
    let prefix_equal =
        k == witness.t.len() && k == arity && witness.s[..k - 1] == witness.t[..k - 1];
    let last_distinct = witness.s.last() != witness.t.last();
    let members = cube_contains_all(a, thetas, &[&witness.s, &witness.t], config)?;
    Ok(WitnessCheck {
        members,
        prefix_equal,
        last_distinct,
    })
}

/// Regenerates the cube until every target is found. `Some(false)` when the
/// closure finishes without one of them, `None` when the budget runs out.
pub fn cube_contains_all(
    a: &FiniteAlgebra,
    thetas: &[Partition],
    targets: &[&[Elem]],
    config: &ClosureConfig,
) -> Result<Option<bool>> {
    let generators = standard_generator_tuples(a, thetas)?;
    let arity = 1 << thetas.len();
    if targets.iter().any(|t| t.len() != arity) {
        return Ok(Some(false));
    }
    let mut missing: Vec<&[Elem]> = targets.to_vec();
    missing.dedup();
    let store = subpower::generate_with(a, arity, &generators, config, &mut |_, t| {
        missing.retain(|m| *m != t);
        if missing.is_empty() {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(match store.termination() {
        Termination::ObserverStopped => Some(true),
        Termination::Closed => Some(missing.is_empty()),
        _ => None,
    })
}

/// The term-condition commutator `[α, β]`, symmetrized: the least `δ` such
/// that every `m ∈ M(α, β)` (entries `m00, m01, m10, m11`) satisfies
/// `m00 δ m01 ⇒ m10 δ m11` and `m00 δ m10 ⇒ m01 δ m11`.
pub fn tc_commutator(a: &FiniteAlgebra, alpha: &Partition, beta: &Partition) -> Result<Partition> {
    tc_commutator_with(a, alpha, beta, &ClosureConfig::default())
}

pub fn tc_commutator_with(
    a: &FiniteAlgebra,
    alpha: &Partition,
    beta: &Partition,
    config: &ClosureConfig,
) -> Result<Partition> {
    let m = cube(a, &[alpha.clone(), beta.clone()], config)?;
    if !m.is_closed() {
        return Err(Error::BudgetExhausted);
    }
    let n = a.size();
    let mut delta = Partition::zero(n);
    loop {
        let mut forced = Vec::new();
        for t in m.tuples() {
            let [m00, m01, m10, m11] = [t[0], t[1], t[2], t[3]].map(usize::from);
            if delta.related(m00, m01) && !delta.related(m10, m11) {
                forced.push((m10, m11));
            }
            if delta.related(m00, m10) && !delta.related(m01, m11) {
                forced.push((m01, m11));
            }
        }
        if forced.is_empty() {
            return Ok(delta);
        }
        forced.extend(delta.pairs());
        delta = lattice::congruence_generated(a, &forced)?;
    }
}

pub fn is_abelian(a: &FiniteAlgebra) -> Result<bool> {
    let one = Partition::one(a.size());
    Ok(tc_commutator(a, &one, &one)?.is_zero())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NilpotenceClass {
    Class(usize),
    ExceedsMax,
}

/// Least `c` with `γ_{c+1} = 0` in the lower central series
/// `γ_1 = 1`, `γ_{i+1} = [1, γ_i]`.
pub fn nilpotence_class(a: &FiniteAlgebra, max_cls: usize) -> Result<NilpotenceClass> {
    if max_cls == 0 {
        return Err(Error::InvalidArgument(
            "max class must be at least 1".into(),
        ));
    }
    let one = Partition::one(a.size());
    let mut gamma = one.clone();
    for cls in 1..=max_cls {
        let next = tc_commutator(a, &one, &gamma)?;
        if next.is_zero() {
            return Ok(NilpotenceClass::Class(cls));
        }
        if next == gamma {
            break;
        }
        gamma = next;
    }
    Ok(NilpotenceClass::ExceedsMax)
}

/// Whether {diagonal, off-diagonal} is a congruence of `A(θ) ≤ A²`.
pub fn verify_delta_centrality(a: &FiniteAlgebra, theta: &Partition) -> Result<bool> {
    if !lattice::is_congruence(a, theta)? {
        return Err(Error::NotCongruence);
    }
    let generators: Vec<Vec<Elem>> = (0..a.size())
        .flat_map(|x| (0..a.size()).map(move |y| (x, y)))
        .filter(|&(x, y)| theta.related(x, y))
        .map(|(x, y)| vec![x as Elem, y as Elem])
        .collect();
    let pairs = subpower::generate_with(
        a,
        2,
        &generators,
        &ClosureConfig::sequential(),
        &mut |_, _| ControlFlow::Continue(()),
    )?;
    let algebra = pairs.to_algebra(a, "A(theta)")?;
    let mut diagonal = None;
    let mut off = None;
    let mut links = Vec::new();
    for (id, t) in pairs.tuples().enumerate() {
        let slot = if t[0] == t[1] {
            &mut diagonal
        } else {
            &mut off
        };
        match *slot {
            Some(first) => links.push((first, id)),
            None => *slot = Some(id),
        }
    }
    let delta = Partition::from_pairs(pairs.len(), &links)?;
    lattice::is_congruence(&algebra, &delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::{builtin, cyclic, unary_algebras};
    use crate::subpower::Budget;

    fn theta6() -> Partition {
        "0 3|1 4|2 5".parse().unwrap()
    }

    #[test]
    fn addresses() {
        let a = CubeAddress::from_places(&[true, false, true]);
        assert_eq!(a.index(), 5);
        assert!(a.place(0) && !a.place(1) && a.place(2));
        assert!(CubeAddress::last(3).is_last());
        assert_eq!(CubeAddress::last(3).index(), 7);
        assert_eq!(a.hamming(&CubeAddress::last(3)), 1);
        assert!(CubeAddress::new(2, 4).is_err());
    }

    #[test]
    fn generator_layout() {
        let a = builtin("paper-z6").unwrap();
        let gens = standard_generators(&a, &[theta6(), theta6()]).unwrap();
        let find = |dir: usize| {
            gens.iter()
                .find(|g| g.direction == dir && g.u == 1 && g.v == 4)
                .unwrap()
                .expand()
        };
        assert_eq!(find(0), vec![1, 1, 4, 4]);
        assert_eq!(find(1), vec![1, 4, 1, 4]);

        let zero =
            standard_generator_tuples(&a, &[Partition::zero(6), Partition::zero(6)]).unwrap();
        assert_eq!(zero.len(), 12);
        let distinct: std::collections::BTreeSet<_> = zero.into_iter().collect();
        assert_eq!(distinct.len(), 6);

        let two = cyclic(2);
        let one = Partition::one(2);
        assert_eq!(
            standard_generators(&two, &[one.clone(), one.clone(), one])
                .unwrap()
                .len(),
            12
        );
        assert_eq!(
            standard_generators(&a, &["0 1|2 3|4 5".parse().unwrap()]),
            Err(Error::NotCongruence)
        );
    }

    #[test]
    fn trivial_cubes() {
        let a = builtin("paper-z6").unwrap();
        let zeros = vec![Partition::zero(6); 3];
        let m = cube(&a, &zeros, &ClosureConfig::default()).unwrap();
        assert_eq!(m.len(), 6);
        let r =
            two_term_higher_commutator(&a, &zeros, Mode::Exact, &ClosureConfig::default()).unwrap();
        assert!(r.value.is_zero() && r.witnesses.is_empty());
        assert_eq!(r.decided, Decided::Exact);
        assert_eq!(
            is_supernilpotent(&a, &Partition::zero(6), 3, &ClosureConfig::default()).unwrap(),
            Supernilpotence::Yes
        );
    }

    #[test]
    fn cube_contains_diagonal() {
        let a = builtin("paper-z6").unwrap();
        let m = cube(
            &a,
            &[Partition::one(6), Partition::one(6)],
            &ClosureConfig::default(),
        )
        .unwrap();
        assert!(m.is_closed());
        assert!(m.len() <= 1296);
        for v in 0..6 {
            assert!(m.contains(&[v; 4]).unwrap());
        }
        assert!(m.audit_closure(&a));
    }

    #[test]
    fn abelian_group_is_supernilpotent_class_one() {
        let z2 = cyclic(2);
        assert_eq!(
            is_supernilpotent(&z2, &Partition::one(2), 1, &ClosureConfig::default()).unwrap(),
            Supernilpotence::Yes
        );
    }

    #[test]
    fn unary_cubes_keep_patterns() {
        // every member is a unary term applied to a generator, so each
        // member is constant on one of the two hyperface splits
        for a in unary_algebras(3, 2).step_by(13) {
            let one = Partition::one(3);
            let m = cube(&a, &[one.clone(), one], &ClosureConfig::sequential()).unwrap();
            for t in m.tuples() {
                assert!((t[0] == t[1] && t[2] == t[3]) || (t[0] == t[2] && t[1] == t[3]));
            }
        }
    }

    #[test]
    fn tc_commutators_of_z6_expansion() {
        let a = builtin("paper-z6").unwrap();
        let one = Partition::one(6);
        let zero = Partition::zero(6);
        assert!(tc_commutator(&a, &one, &theta6()).unwrap().is_zero());
        assert_eq!(tc_commutator(&a, &one, &one).unwrap(), theta6());
        assert!(tc_commutator(&a, &zero, &one).unwrap().is_zero());
        assert!(tc_commutator(&a, &one, &zero).unwrap().is_zero());
        assert_eq!(nilpotence_class(&a, 4).unwrap(), NilpotenceClass::Class(2));
        assert_eq!(
            nilpotence_class(&a, 1).unwrap(),
            NilpotenceClass::ExceedsMax
        );
        assert_eq!(
            nilpotence_class(&cyclic(4), 3).unwrap(),
            NilpotenceClass::Class(1)
        );
        assert_eq!(
            nilpotence_class(&cyclic(1), 3).unwrap(),
            NilpotenceClass::Class(1)
        );
        assert_eq!(
            nilpotence_class(&builtin("sym3").unwrap(), 5).unwrap(),
            NilpotenceClass::ExceedsMax
        );
    }

    #[test]
    fn delta_centrality() {
        let a = builtin("paper-z6").unwrap();
        assert!(verify_delta_centrality(&a, &theta6()).unwrap());
        assert!(!verify_delta_centrality(&a, &Partition::one(6)).unwrap());
        assert!(verify_delta_centrality(&a, &Partition::zero(6)).unwrap());
    }

    #[test]
    fn tiny_budget_is_unknown() {
        let a = builtin("paper-z6").unwrap();
        let config = ClosureConfig::with_budget(Budget::insertions(200).unwrap());
        let one = Partition::one(6);
        let answer = is_supernilpotent(&a, &one, 2, &config).unwrap();
        assert!(matches!(
            answer,
            Supernilpotence::Unknown | Supernilpotence::No(_)
        ));
    }
}
