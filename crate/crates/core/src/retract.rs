//! Representing a subalgebra `B ≤ A` as a retract of a finite subdirect
//! power of `A`.
//!
//! Given a congruence `θ` whose saturation of `B` is all of `A` and which is
//! supernilpotent of class `cls`, let `Γ` be the standard generators of
//! `M(θ, .., θ) ≤ A^{2^{cls+1}}` whose last entry lies in `B`, and
//! `μ = ⟨Γ⟩`. Then `μ` is the graph of a map from its projection `D` onto
//! the earlier coordinates onto `B`; `D` is subdirect, and the diagonal
//! embedding `b ↦ (b, .., b)` is a right inverse of that map.

use std::ops::ControlFlow;

use serde::Serialize;

use crate::algebra::{Elem, FiniteAlgebra};
use crate::commutator::{
    self, CubeAddress, PrefixIndex, StandardGenerator, Supernilpotence, Witness,
};
use crate::error::{Error, Result};
use crate::lattice::{self, Partition, Subset};
use crate::subpower::{self, ClosureConfig, Subpower, Termination, TupleId};

/// Largest class tried by [`theorem_main`] unless overridden.
pub const DEFAULT_MAX_CLS: usize = 3;

/// Homomorphism checks are skipped above this many argument frames.
pub const HOM_FRAME_LIMIT: u64 = 4_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GammaSpec {
    pub dim: usize,
    pub generators: Vec<StandardGenerator>,
}

impl GammaSpec {
    pub fn tuples(&self) -> Vec<Vec<Elem>> {
        self.generators
            .iter()
            .map(StandardGenerator::expand)
            .collect()
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

fn check_inputs(a: &FiniteAlgebra, b: &Subset, theta: &Partition) -> Result<()> {
    if b.universe_size() != a.size() {
        return Err(Error::SizeMismatch {
            left: a.size(),
            right: b.universe_size(),
        });
    }
    if !lattice::is_subuniverse(a, b)? {
        return Err(Error::NotSubuniverse);
    }
    if !lattice::is_congruence(a, theta)? {
        return Err(Error::NotCongruence);
    }
    Ok(())
}

/// Standard generators of `M(θ, .., θ)` (dimension `cls + 1`) whose last
/// entry lies in `B`.
pub fn build_gamma(
    a: &FiniteAlgebra,
    b: &Subset,
    theta: &Partition,
    cls: usize,
) -> Result<GammaSpec> {
    if cls == 0 {
        return Err(Error::InvalidArgument("class must be at least 1".into()));
    }
    check_inputs(a, b, theta)?;
    let thetas = vec![theta.clone(); cls + 1];
    let generators = commutator::standard_generators(a, &thetas)?
        .into_iter()
        .filter(|g| b.contains(g.v as usize))
        .collect();
    Ok(GammaSpec {
        dim: cls + 1,
        generators,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GammaReport {
    /// Every tuple of `Γ` ends in `B`.
    pub last_in_b: bool,
    /// Every `b ∈ B` ends some tuple of `Γ`.
    pub every_b_last: bool,
    /// Every `a ∈ A` appears at every earlier coordinate of some tuple.
    pub coverage: bool,
    pub failures: Vec<String>,
}

impl GammaReport {
    pub fn passed(&self) -> bool {
        self.last_in_b && self.every_b_last && self.coverage
    }
}

pub fn verify_gamma_claims(
    a: &FiniteAlgebra,
    b: &Subset,
    theta: &Partition,
    gamma: &GammaSpec,
) -> Result<GammaReport> {
    check_inputs(a, b, theta)?;
    let tuples = gamma.tuples();
    let last = (1 << gamma.dim) - 1;
    let mut failures = Vec::new();

    let last_in_b = tuples.iter().all(|t| b.contains(t[last] as usize));
    if !last_in_b {
        failures.push("a tuple of gamma ends outside B".to_string());
    }
    let mut every_b_last = true;
    for x in b.elems() {
        if !tuples.iter().any(|t| t[last] as usize == x) {
            every_b_last = false;
            failures.push(format!("no tuple of gamma ends in {x}"));
        }
    }

    // Coverage goes through the hyperface split: for an earlier address σ
    // pick a direction j with σ_j = 0 (the last address has σ_j = 1) and use
    // the direction-j generator (a, b) with b ∈ B θ-related to a.
    let mut coverage = true;
    for x in 0..a.size() {
        let partner = b.elems().into_iter().find(|&y| theta.related(x, y));
        let Some(y) = partner else {
            coverage = false;
            failures.push(format!("{x} is not related by theta to any element of B"));
            continue;
        };
        for sigma in CubeAddress::all(gamma.dim).filter(|s| !s.is_last()) {
            let j = (0..gamma.dim)
                .find(|&j| !sigma.place(j))
                .expect("earlier address");
            let wanted = StandardGenerator {
                dim: gamma.dim,
                direction: j,
                u: x as Elem,
                v: y as Elem,
            };
            if !gamma.generators.contains(&wanted) || wanted.expand()[sigma.index()] as usize != x {
                coverage = false;
                failures.push(format!(
                    "no split generator puts {x} at coordinate {}",
                    sigma.index()
                ));
            }
        }
    }
    Ok(GammaReport {
        last_in_b,
        every_b_last,
        coverage,
        failures,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Valid,
    Invalid,
    Undecided,
}

/// Outcome of the supernilpotence test at one class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassEvidence {
    pub cls: usize,
    pub answer: Supernilpotence,
}

#[derive(Debug, Clone, Serialize)]
pub struct RetractCertificate {
    pub verdict: Verdict,
    pub cls: usize,
    pub dim: usize,
    pub subalgebra: Subset,
    pub gamma_size: usize,
    pub mu_size: usize,
    pub functional: Option<bool>,
    pub functional_witness: Option<Witness>,
    pub image_of_last: Option<Subset>,
    pub d_size: usize,
    pub subdirect: Option<bool>,
    pub retraction_verified: Option<bool>,
    /// `None` when `D` is too large for the exhaustive check.
    pub homomorphism: Option<bool>,
    pub termination: Option<Termination>,
    pub supernilpotence: Vec<ClassEvidence>,
    #[serde(skip)]
    pub mu: Option<Subpower>,
    #[serde(skip)]
    pub d: Option<Subpower>,
}

impl RetractCertificate {
    fn undecided(b: &Subset, cls: usize, evidence: Vec<ClassEvidence>) -> Self {
        RetractCertificate {
            verdict: Verdict::Undecided,
            cls,
            dim: cls + 1,
            subalgebra: b.clone(),
            gamma_size: 0,
            mu_size: 0,
            functional: None,
            functional_witness: None,
            image_of_last: None,
            d_size: 0,
            subdirect: None,
            retraction_verified: None,
            homomorphism: None,
            termination: None,
            supernilpotence: evidence,
            mu: None,
            d: None,
        }
    }

    /// Re-derives every claim from the stored `μ` without the online index.
    pub fn recheck(&self, a: &FiniteAlgebra) -> Result<RecheckReport> {
        let mu = self.mu.as_ref().ok_or(Error::NotClosed)?;
        if !mu.is_closed() {
            return Err(Error::NotClosed);
        }
        let k = mu.arity();
        let mut sorted = mu.sorted_tuples();
        sorted.dedup();
        let functional = sorted
            .windows(2)
            .all(|w| w[0][..k - 1] != w[1][..k - 1] || w[0][k - 1] == w[1][k - 1]);
        let image = Subset::from_elems(a.size(), sorted.iter().map(|t| t[k - 1] as usize))?;
        let d = mu.project(&(0..k - 1).collect::<Vec<_>>())?;
        let subdirect = lattice::is_subdirect(a, &d);
        let map = |prefix: &[Elem]| -> Option<Elem> {
            sorted
                .binary_search_by(|t| t[..k - 1].cmp(prefix))
                .ok()
                .map(|i| sorted[i][k - 1])
        };
        let retraction = self.subalgebra.elems().into_iter().all(|x| {
            let diag = vec![x as Elem; k - 1];
            d.contains(&diag).unwrap_or(false) && map(&diag) == Some(x as Elem)
        });
        let homomorphism = check_homomorphism(a, &d, map);
        Ok(RecheckReport {
            functional,
            image_is_b: image == self.subalgebra,
            subdirect,
            retraction,
            homomorphism,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RecheckReport {
    pub functional: bool,
    pub image_is_b: bool,
    pub subdirect: bool,
    pub retraction: bool,
    pub homomorphism: Option<bool>,
}

impl RecheckReport {
    pub fn passed(&self) -> bool {
        self.functional
            && self.image_is_b
            && self.subdirect
            && self.retraction
            && self.homomorphism == Some(true)
    }
}

/// For every operation and every frame of members of `d`, the map commutes
/// with the operation. `None` when the frame count exceeds the limit.
fn check_homomorphism(
    a: &FiniteAlgebra,
    d: &Subpower,
    map: impl Fn(&[Elem]) -> Option<Elem>,
) -> Option<bool> {
    let m = d.len() as u64;
    let frames: u64 = a
        .ops()
        .iter()
        .map(|op| m.saturating_pow(op.arity() as u32))
        .fold(0u64, u64::saturating_add);
    if frames > HOM_FRAME_LIMIT {
        return None;
    }
    let images: Vec<Option<Elem>> = d.tuples().map(&map).collect();
    let k = d.arity();
    let mut result = Vec::with_capacity(k);
    let mut column = Vec::new();
    let mut image_args = Vec::new();
    for op in a.ops() {
        let r = op.arity();
        if r > 0 && m == 0 {
            continue;
        }
        let mut ids = vec![0usize; r];
        loop {
            result.clear();
            for c in 0..k {
                column.clear();
                column.extend(ids.iter().map(|&id| d.tuple(id as TupleId)[c]));
                result.push(op.apply(&column));
            }
            image_args.clear();
            for &id in &ids {
                match images[id] {
                    Some(v) => image_args.push(v),
                    None => return Some(false),
                }
            }
            if map(&result) != Some(op.apply(&image_args)) {
                return Some(false);
            }
            let mut more = false;
            for slot in ids.iter_mut().rev() {
                if (*slot as u64) + 1 < m {
                    *slot += 1;
                    more = true;
                    break;
                }
                *slot = 0;
            }
            if !more {
                break;
            }
        }
    }
    Some(true)
}

/// Runs the construction for a fixed `θ` and class.
pub fn build_retract(
    a: &FiniteAlgebra,
    b: &Subset,
    theta: &Partition,
    cls: usize,
    config: &ClosureConfig,
) -> Result<RetractCertificate> {
    let gamma = build_gamma(a, b, theta, cls)?;
    if !lattice::saturation(a, b, theta)?.is_full() {
        return Err(Error::PreconditionFailed(
            "the saturation of B by theta is not the whole universe".into(),
        ));
    }
    let dim = gamma.dim;
    let arity = 1 << dim;
    let mut index = PrefixIndex::new(a.size(), arity)?;
    let mut collision: Option<(TupleId, TupleId)> = None;
    let mu = subpower::generate_with(a, arity, &gamma.tuples(), config, &mut |id, t| match index
        .observe(id, t)
    {
        Some(first) => {
            collision = Some((first, id));
            ControlFlow::Break(())
        }
        None => ControlFlow::Continue(()),
    })?;

    let mut cert = RetractCertificate::undecided(b, cls, Vec::new());
    cert.gamma_size = gamma.len();
    cert.mu_size = mu.len();
    cert.termination = Some(mu.termination());

    if let Some((s, t)) = collision {
        cert.verdict = Verdict::Invalid;
        cert.functional = Some(false);
        cert.functional_witness = Some(Witness {
            s: mu.tuple(s).to_vec(),
            t: mu.tuple(t).to_vec(),
        });
        cert.mu = Some(mu);
        return Ok(cert);
    }
    if !mu.is_closed() {
        cert.mu = Some(mu);
        return Ok(cert);
    }

    cert.functional = Some(true);
    let image = Subset::from_elems(a.size(), mu.tuples().map(|t| t[arity - 1] as usize))?;
    let d = mu.project(&(0..arity - 1).collect::<Vec<_>>())?;
    let subdirect = lattice::is_subdirect(a, &d);
    let retraction = b.elems().into_iter().all(|x| {
        let diag = vec![x as Elem; arity - 1];
        d.contains(&diag).unwrap_or(false) && index.lookup(&diag) == Some(x as Elem)
    });
    let homomorphism = check_homomorphism(a, &d, |prefix| index.lookup(prefix));

    cert.verdict = if image == *b && subdirect && retraction {
        Verdict::Valid
    } else {
        Verdict::Invalid
    };
    cert.image_of_last = Some(image);
    cert.d_size = d.len();
    cert.subdirect = Some(subdirect);
    cert.retraction_verified = Some(retraction);
    cert.homomorphism = homomorphism;
    cert.mu = Some(mu);
    cert.d = Some(d);
    Ok(cert)
}

/// Finds the least class `cls ≤ max_cls` at which the full congruence is
/// supernilpotent and runs [`build_retract`] with `θ = 1`.
pub fn theorem_main(
    a: &FiniteAlgebra,
    b: &Subset,
    max_cls: usize,
    config: &ClosureConfig,
) -> Result<RetractCertificate> {
    let one = Partition::one(a.size());
    check_inputs(a, b, &one)?;
    if b.is_empty() {
        return Err(Error::PreconditionFailed("B must be nonempty".into()));
    }
    let mut evidence = Vec::new();
    for cls in 1..=max_cls {
        let answer = commutator::is_supernilpotent(a, &one, cls, config)?;
        let found = answer == Supernilpotence::Yes;
        evidence.push(ClassEvidence { cls, answer });
        if found {
            let mut cert = build_retract(a, b, &one, cls, config)?;
            cert.supernilpotence = evidence;
            return Ok(cert);
        }
    }
    Ok(RetractCertificate::undecided(b, max_cls, evidence))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::{builtin, cyclic};

    fn subset(n: usize, elems: &[usize]) -> Subset {
        Subset::from_elems(n, elems.iter().copied()).unwrap()
    }

    #[test]
    fn gamma_sizes() {
        let z4 = cyclic(4);
        let one = Partition::one(4);
        let g = build_gamma(&z4, &subset(4, &[0, 2]), &one, 1).unwrap();
        assert_eq!(g.len(), 16);

        let a = builtin("paper-z6").unwrap();
        let g = build_gamma(&a, &Subset::full(6), &Partition::zero(6), 1).unwrap();
        let distinct: std::collections::BTreeSet<_> = g.tuples().into_iter().collect();
        assert_eq!(distinct.len(), 6);

        let theta: Partition = "0 3|1 4|2 5".parse().unwrap();
        let g = build_gamma(&a, &subset(6, &[0, 3]), &theta, 1).unwrap();
        assert!(g
            .generators
            .iter()
            .all(|s| (s.v == 0 || s.v == 3) && theta.related(s.u as usize, s.v as usize)));
        assert_eq!(g.len(), 8);

        assert_eq!(
            build_gamma(&a, &subset(6, &[1]), &theta, 1),
            Err(Error::NotSubuniverse)
        );
    }

    #[test]
    fn gamma_claims() {
        let a = builtin("paper-z6").unwrap();
        let theta: Partition = "0 3|1 4|2 5".parse().unwrap();
        let b = subset(6, &[0, 3]);
        let g = build_gamma(&a, &b, &theta, 1).unwrap();
        let r = verify_gamma_claims(&a, &b, &theta, &g).unwrap();
        assert!(r.last_in_b && r.every_b_last && !r.coverage);
        assert!(r.failures[0].starts_with("1 is not related"));

        let z4 = cyclic(4);
        let b = subset(4, &[0, 2]);
        let one = Partition::one(4);
        let g = build_gamma(&z4, &b, &one, 1).unwrap();
        assert!(verify_gamma_claims(&z4, &b, &one, &g).unwrap().passed());

        let full = Subset::full(6);
        let one6 = Partition::one(6);
        let g = build_gamma(&a, &full, &one6, 2).unwrap();
        assert!(verify_gamma_claims(&a, &full, &one6, &g).unwrap().passed());
    }

    #[test]
    fn z4_retract_is_valid() {
        let z4 = cyclic(4);
        let b = subset(4, &[0, 2]);
        let cert =
            build_retract(&z4, &b, &Partition::one(4), 1, &ClosureConfig::default()).unwrap();
        assert_eq!(cert.verdict, Verdict::Valid);
        assert_eq!(cert.image_of_last.as_ref(), Some(&b));
        assert_eq!(cert.d.as_ref().unwrap().arity(), 3);
        assert_eq!(cert.homomorphism, Some(true));
        assert!(cert.recheck(&z4).unwrap().passed());
    }

    #[test]
    fn saturation_precondition() {
        let a = builtin("paper-z6").unwrap();
        let theta: Partition = "0 3|1 4|2 5".parse().unwrap();
        let err = build_retract(
            &a,
            &subset(6, &[0, 3]),
            &theta,
            1,
            &ClosureConfig::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::PreconditionFailed(_)));
    }

    #[test]
    fn paper_algebra_is_not_functional() {
        let a = builtin("paper-z6").unwrap();
        let b = subset(6, &[0, 3]);
        let one = Partition::one(6);
        let config = ClosureConfig::default();
        let cert = build_retract(&a, &b, &one, 2, &config).unwrap();
        assert_eq!(cert.verdict, Verdict::Invalid);
        let w = cert.functional_witness.unwrap();
        assert!(w.has_collision_shape());
        assert!(matches!(
            commutator::is_supernilpotent(&a, &one, 2, &config).unwrap(),
            Supernilpotence::No(_)
        ));
    }

    #[test]
    fn theorem_main_on_small_cases() {
        let klein = builtin("klein4").unwrap();
        for b in lattice::all_subuniverses(&klein).unwrap() {
            let cert =
                theorem_main(&klein, &b, DEFAULT_MAX_CLS, &ClosureConfig::default()).unwrap();
            assert_eq!(cert.verdict, Verdict::Valid);
            assert_eq!(cert.cls, 1);
        }
        let one = cyclic(1);
        let cert = theorem_main(&one, &Subset::full(1), 1, &ClosureConfig::default()).unwrap();
        assert_eq!(cert.verdict, Verdict::Valid);

        let a = builtin("paper-z6").unwrap();
        let cert = theorem_main(&a, &subset(6, &[0, 3]), 2, &ClosureConfig::default()).unwrap();
        assert_eq!(cert.verdict, Verdict::Undecided);
        assert_eq!(cert.supernilpotence.len(), 2);
    }
}
