//! Replay of the nilpotent, non-supernilpotent expansion of `Z_6`
//! ([`crate::builtin::paper_z6`]) and of the argument that its subalgebra on
//! `{0, 3}` is not a homomorphic image of any finite subdirect power.
//!
//! The key computation: for a subdirect `D ≤ A^n`, the 3-part
//! `V_3(D) = e(D)` with `e(x) = 4x` splits as `{0} ∪ P ∪ -P`, and
//! `Σ_{d ∈ P} s(d)` is the constant tuple `c`. Hence any ideal containing
//! `V_3(D)` contains `c`, and every 2-element quotient satisfies `c = 0`.

use std::fmt;

use serde::Serialize;

use crate::algebra::{Elem, FiniteAlgebra};
use crate::commutator::{self, NilpotenceClass, Supernilpotence};
use crate::error::{Error, Result};
use crate::lattice::{self, Partition, Subset};
use crate::par::Parallelism;
use crate::subpower::{self, Budget, ClosureConfig, Subpower};

/// The Sylow 3-subgroup of `Z_6`.
pub const V3: [Elem; 3] = [0, 2, 4];

/// Default bound on `|D|` for the congruence computation.
pub const DEFAULT_OBSTRUCTION_BOUND: usize = 64;

/// Generator sets of the sampled subdirect subpowers of `A²`.
pub const SAMPLE_GENERATORS: [&[[Elem; 2]]; 2] = [&[[1, 5]], &[[1, 1], [0, 3]]];

/// Table indices of `+`, `s` and `c`.
#[derive(Debug, Clone, Copy)]
struct Z6Ops {
    plus: usize,
    s: usize,
    c: usize,
}

fn z6_ops(a: &FiniteAlgebra) -> Result<Z6Ops> {
    if a.size() != 6 {
        return Err(Error::Incompatible(format!("size {} is not 6", a.size())));
    }
    let find = |name: &str, arity: usize| {
        a.op_index(name)
            .filter(|&i| a.ops()[i].arity() == arity)
            .ok_or_else(|| Error::Incompatible(format!("missing operation {name}/{arity}")))
    };
    let ops = Z6Ops {
        plus: find("+", 2)?,
        s: find("s", 1)?,
        c: find("c", 0)?,
    };
    let plus = &a.ops()[ops.plus];
    for x in 0..6u8 {
        for y in 0..6u8 {
            if plus.apply(&[x, y]) != (x + y) % 6 {
                return Err(Error::Incompatible("`+` is not addition modulo 6".into()));
            }
        }
    }
    Ok(ops)
}

fn add(a: &FiniteAlgebra, ops: Z6Ops, x: &[Elem], y: &[Elem]) -> Vec<Elem> {
    let plus = &a.ops()[ops.plus];
    x.iter()
        .zip(y)
        .map(|(&p, &q)| plus.apply(&[p, q]))
        .collect()
}

/// `e(x) = x + x + x + x`, computed through the `+` table.
fn e(a: &FiniteAlgebra, ops: Z6Ops, x: &[Elem]) -> Vec<Elem> {
    let two = add(a, ops, x, x);
    add(a, ops, &two, &two)
}

/// `-x = 5x`.
fn neg(a: &FiniteAlgebra, ops: Z6Ops, x: &[Elem]) -> Vec<Elem> {
    let four = e(a, ops, x);
    add(a, ops, &four, x)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SylowSlice {
    pub arity: usize,
    /// `e(D)`, sorted lexicographically.
    pub members: Vec<Vec<Elem>>,
    /// `|V_3(D)| = 3^dim`.
    pub dim: usize,
    /// Every coordinate projection is all of `{0, 2, 4}`.
    pub subdirect: bool,
}

impl SylowSlice {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

pub fn sylow3(a: &FiniteAlgebra, d: &Subpower) -> Result<SylowSlice> {
    let ops = z6_ops(a)?;
    let mut members: Vec<Vec<Elem>> = d.tuples().map(|t| e(a, ops, t)).collect();
    members.sort();
    members.dedup();
    let mut dim = 0;
    let mut size = 1;
    while size < members.len() {
        size *= 3;
        dim += 1;
    }
    if size != members.len() {
        return Err(Error::Incompatible(format!(
            "|e(D)| = {} is not a power of 3",
            members.len()
        )));
    }
    let subdirect = (0..d.arity()).all(|i| V3.iter().all(|&v| members.iter().any(|t| t[i] == v)));
    Ok(SylowSlice {
        arity: d.arity(),
        members,
        dim,
        subdirect,
    })
}

/// Checks that `e` is idempotent on `D`, that `e(D) ⊆ D`, and that `e(D)`
/// is a subgroup of `{0, 2, 4}^n`.
pub fn check_sylow_slice(a: &FiniteAlgebra, d: &Subpower, slice: &SylowSlice) -> Result<bool> {
    let ops = z6_ops(a)?;
    let idempotent = d.tuples().all(|t| {
        let once = e(a, ops, t);
        e(a, ops, &once) == once
    });
    let inside = slice.members.iter().all(|t| d.id_of(t).is_some());
    let in_v3 = slice.members.iter().flatten().all(|v| V3.contains(v));
    let member = |t: &Vec<Elem>| slice.members.binary_search(t).is_ok();
    let zero = vec![0; slice.arity];
    let subgroup = member(&zero)
        && slice.members.iter().all(|x| member(&neg(a, ops, x)))
        && slice
            .members
            .iter()
            .all(|x| slice.members.iter().all(|y| member(&add(a, ops, x, y))));
    Ok(idempotent && inside && in_v3 && subgroup)
}

/// Which element of each orbit `{d, -d}` joins `P`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Polarity {
    LexSmaller,
    LexLarger,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlusMinusSplit {
    pub zero: Vec<Elem>,
    pub plus: Vec<Vec<Elem>>,
    pub minus: Vec<Vec<Elem>>,
}

pub fn plus_minus_split(
    a: &FiniteAlgebra,
    slice: &SylowSlice,
    polarity: Polarity,
) -> Result<PlusMinusSplit> {
    let ops = z6_ops(a)?;
    let zero = vec![0 as Elem; slice.arity];
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for d in slice.members.iter().filter(|d| **d != zero) {
        let negated = neg(a, ops, d);
        let chosen = match polarity {
            Polarity::LexSmaller => *d < negated,
            Polarity::LexLarger => *d > negated,
        };
        if chosen {
            plus.push(d.clone());
        } else {
            minus.push(d.clone());
        }
    }
    Ok(PlusMinusSplit { zero, plus, minus })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SumIdentityReport {
    pub arity: usize,
    pub v3_size: usize,
    pub dim: usize,
    pub polarity: Polarity,
    pub plus_size: usize,
    pub sum: Vec<Elem>,
    pub expected: Vec<Elem>,
    pub holds: bool,
    /// `|V_3(D) \ ker π_i|` for each coordinate `i`.
    pub nonkernel_counts: Vec<usize>,
    /// `2 · 3^(dim - 1)`.
    pub expected_count: usize,
    pub counts_hold: bool,
}

impl SumIdentityReport {
    pub fn passed(&self) -> bool {
        self.holds && self.counts_hold
    }
}

/// Computes `Σ_{d ∈ P} s(d)` and compares it with the constant tuple `c`.
pub fn verify_sum_identity(
    a: &FiniteAlgebra,
    d: &Subpower,
    polarity: Polarity,
) -> Result<SumIdentityReport> {
    let ops = z6_ops(a)?;
    if !lattice::is_subdirect(a, d) {
        return Err(Error::NotSubdirect);
    }
    let slice = sylow3(a, d)?;
    let split = plus_minus_split(a, &slice, polarity)?;
    let s = &a.ops()[ops.s];
    let c = a.ops()[ops.c].apply(&[]);
    let mut sum = split.zero.clone();
    for t in &split.plus {
        let image: Vec<Elem> = t.iter().map(|&x| s.apply(&[x])).collect();
        sum = add(a, ops, &sum, &image);
    }
    let expected = vec![c; d.arity()];
    let nonkernel_counts: Vec<usize> = (0..d.arity())
        .map(|i| slice.members.iter().filter(|t| t[i] != 0).count())
        .collect();
    let expected_count = if slice.dim == 0 {
        0
    } else {
        2 * 3usize.pow(slice.dim as u32 - 1)
    };
    Ok(SumIdentityReport {
        arity: d.arity(),
        v3_size: slice.len(),
        dim: slice.dim,
        polarity,
        plus_size: split.plus.len(),
        holds: sum == expected,
        sum,
        expected,
        counts_hold: nonkernel_counts.iter().all(|&n| n == expected_count),
        nonkernel_counts,
        expected_count,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObstructionReport {
    pub d_size: usize,
    pub con_size: usize,
    /// Congruences of `D` with exactly two classes.
    pub index_two: usize,
    /// Those whose 0-class contains `V_3(D)`.
    pub relevant: usize,
    /// Relevant congruences whose 0-class misses the constant tuple `c`.
    pub violations: usize,
    /// Every relevant two-element quotient interprets `c` and `c + c` alike.
    pub quotients_satisfy_c_eq_zero: bool,
}

impl ObstructionReport {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.quotients_satisfy_c_eq_zero
    }

    pub fn vacuous(&self) -> bool {
        self.relevant == 0
    }
}

/// Exhaustive check over `Con(D)`: every index-2 ideal containing `V_3(D)`
/// contains `c`.
pub fn verify_ideal_obstruction(
    a: &FiniteAlgebra,
    d: &Subpower,
    bound: usize,
) -> Result<ObstructionReport> {
    let ops = z6_ops(a)?;
    if d.len() > bound {
        return Err(Error::TooLarge {
            what: "subpower",
            size: d.len(),
            bound,
        });
    }
    if !lattice::is_subdirect(a, d) {
        return Err(Error::NotSubdirect);
    }
    let algebra = d.to_algebra(a, "D")?;
    let con = lattice::congruence_lattice_with(&algebra, bound, Parallelism::default())?;
    let slice = sylow3(a, d)?;
    let zero_id = d.id_of(&vec![0; d.arity()]).ok_or(Error::NotClosed)? as usize;
    let c = a.ops()[ops.c].apply(&[]);
    let c_id = d.id_of(&vec![c; d.arity()]).ok_or(Error::NotClosed)? as usize;
    let v3_ids: Vec<usize> = slice
        .members
        .iter()
        .map(|t| d.id_of(t).map(|id| id as usize).ok_or(Error::NotClosed))
        .collect::<Result<_>>()?;

    let mut report = ObstructionReport {
        d_size: d.len(),
        con_size: con.len(),
        index_two: 0,
        relevant: 0,
        violations: 0,
        quotients_satisfy_c_eq_zero: true,
    };
    for delta in con.iter().filter(|p| p.num_blocks() == 2) {
        report.index_two += 1;
        if !v3_ids.iter().all(|&id| delta.related(id, zero_id)) {
            continue;
        }
        report.relevant += 1;
        if !delta.related(c_id, zero_id) {
            report.violations += 1;
        }
        let q = algebra.quotient(delta)?;
        let qc = q.eval_op("c", &[])?;
        if q.eval_op("+", &[qc, qc])? != qc {
            report.quotients_satisfy_c_eq_zero = false;
        }
    }
    Ok(report)
}

/// The sampled subdirect subpowers: `A` itself, the diagonal of `A²`, the
/// two generated samples, and `A²`.
pub fn sample_subpowers(a: &FiniteAlgebra) -> Result<Vec<(String, Subpower)>> {
    let budget = Budget::default();
    let mut out = vec![
        (
            "A".to_string(),
            subpower::generate(a, 1, &[vec![1]], budget)?,
        ),
        (
            "diagonal of A^2".to_string(),
            subpower::generate(a, 2, &subpower::diagonal_generators(6, 2), budget)?,
        ),
    ];
    for gens in SAMPLE_GENERATORS {
        let tuples: Vec<Vec<Elem>> = gens.iter().map(|g| g.to_vec()).collect();
        let label = gens
            .iter()
            .map(|g| format!("({},{})", g[0], g[1]))
            .collect::<Vec<_>>()
            .join(",");
        out.push((
            format!("<{label}>"),
            subpower::generate(a, 2, &tuples, budget)?,
        ));
    }
    out.push((
        "A^2".to_string(),
        subpower::generate(a, 2, &subpower::all_tuples(6, 2), budget)?,
    ));
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Undecided,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Undecided => "UNDECIDED",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckLine {
    pub status: Status,
    pub check: String,
    pub evidence: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Section {
    pub title: String,
    pub checks: Vec<CheckLine>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExampleReport {
    pub sections: Vec<Section>,
}

impl ExampleReport {
    /// No check failed, and an undecided direct search is backed by the
    /// structural certificate.
    pub fn passed(&self) -> bool {
        let all = || self.sections.iter().flat_map(|s| &s.checks);
        all().all(|c| c.status != Status::Fail)
            && (all().all(|c| c.status != Status::Undecided)
                || all()
                    .filter(|c| c.check.starts_with("structural"))
                    .all(|c| c.status == Status::Pass))
    }

    pub fn find(&self, prefix: &str) -> Option<&CheckLine> {
        self.sections
            .iter()
            .flat_map(|s| &s.checks)
            .find(|c| c.check.starts_with(prefix))
    }
}

impl fmt::Display for ExampleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for section in &self.sections {
            writeln!(f, "[{}]", section.title)?;
            for c in &section.checks {
                writeln!(f, "{:<9} {}: {}", c.status.to_string(), c.check, c.evidence)?;
            }
        }
        write!(
            f,
            "overall: {}",
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

struct SectionBuilder {
    section: Section,
}

impl SectionBuilder {
    fn new(title: &str) -> Self {
        SectionBuilder {
            section: Section {
                title: title.to_string(),
                checks: Vec::new(),
            },
        }
    }

    fn check(&mut self, ok: bool, check: &str, evidence: impl Into<String>) {
        self.push(
            if ok { Status::Pass } else { Status::Fail },
            check,
            evidence,
        );
    }

    fn push(&mut self, status: Status, check: &str, evidence: impl Into<String>) {
        self.section.checks.push(CheckLine {
            status,
            check: check.to_string(),
            evidence: evidence.into(),
        });
    }
}

pub fn is_prime_power(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let p = (2..=n)
        .find(|&p| n.is_multiple_of(p))
        .expect("n has a prime factor");
    let mut m = n;
    while m.is_multiple_of(p) {
        m /= p;
    }
    m == 1
}

fn join_display<T: fmt::Display>(items: &[T], sep: &str) -> String {
    items
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

/// Runs every computational claim about the `Z_6` expansion.
pub fn verify_theorem_example(config: &ClosureConfig) -> Result<ExampleReport> {
    let a = crate::builtin::paper_z6();
    let n = a.size();
    let theta: Partition = "0 3|1 4|2 5".parse()?;
    let zero = Partition::zero(n);
    let one = Partition::one(n);
    let mut sections = Vec::new();

    let mut s = SectionBuilder::new("a: subalgebras and congruences");
    let con = lattice::congruence_lattice(&a)?;
    s.check(
        con == vec![zero.clone(), theta.clone(), one.clone()],
        "Con(A) is the chain 0 < theta < 1",
        join_display(&con, " ; "),
    );
    let sub = lattice::all_subuniverses(&a)?;
    s.check(
        sub == vec![Subset::from_elems(n, [0, 3])?, Subset::full(n)],
        "Sub(A) = {B, A} with B = {0,3}",
        join_display(&sub, " ; "),
    );
    let top = lattice::class_index(&one, &theta)?;
    let bottom = lattice::class_index(&theta, &zero)?;
    s.check(
        top == Some(3) && bottom == Some(2),
        "indices [1:theta] = 3, [theta:0] = 2",
        format!("{top:?}, {bottom:?}"),
    );
    sections.push(s.section);

    let mut s = SectionBuilder::new("b: nilpotence");
    let one_theta = commutator::tc_commutator_with(&a, &one, &theta, config)?;
    s.check(one_theta.is_zero(), "[1,theta] = 0", one_theta.to_string());
    let one_one = commutator::tc_commutator_with(&a, &one, &one, config)?;
    s.check(one_one == theta, "[1,1] = theta", one_one.to_string());
    let class = commutator::nilpotence_class(&a, 4)?;
    s.check(
        class == NilpotenceClass::Class(2),
        "nilpotence class is 2",
        format!("{class:?}"),
    );
    let delta = commutator::verify_delta_centrality(&a, &theta)?;
    s.check(
        delta,
        "diagonal/off-diagonal is a congruence of A(theta)",
        format!("{delta}"),
    );
    let q = a.quotient(&theta)?;
    let q_abelian = commutator::is_abelian(&q)?;
    let q_is_z3 =
        (0..3u8).all(|x| (0..3u8).all(|y| q.eval_op("+", &[x, y]).ok() == Some((x + y) % 3)));
    s.check(
        q.size() == 3 && q_abelian && q_is_z3,
        "A/theta has 3 elements, is abelian, + is addition mod 3",
        format!("size {}, abelian {q_abelian}", q.size()),
    );
    sections.push(s.section);

    let mut s = SectionBuilder::new("c: structural certificate");
    let indecomposable = lattice::is_directly_indecomposable(&a)?.is_indecomposable();
    s.check(
        indecomposable && !is_prime_power(n),
        "structural: directly indecomposable and 6 is not a prime power",
        format!(
            "indecomposable {indecomposable}, prime power {}",
            is_prime_power(n)
        ),
    );
    sections.push(s.section);

    let mut s = SectionBuilder::new("d: direct non-supernilpotence search");
    let thetas = vec![one.clone(); 3];
    match commutator::is_supernilpotent(&a, &one, 2, config)? {
        Supernilpotence::No(w) => {
            let check = commutator::verify_witness(&a, &thetas, &w, config)?;
            s.check(
                check.passed(),
                "is_supernilpotent(A, 1, 2) = no, witness re-verified",
                format!(
                    "s = {} / t = {}",
                    join_display(&w.s, " "),
                    join_display(&w.t, " ")
                ),
            );
        }
        Supernilpotence::Unknown => s.push(
            Status::Undecided,
            "is_supernilpotent(A, 1, 2)",
            "budget exhausted without a collision",
        ),
        Supernilpotence::Yes => s.check(
            false,
            "is_supernilpotent(A, 1, 2) = no",
            "closure found no collision",
        ),
    }
    sections.push(s.section);

    let mut s = SectionBuilder::new("e: ideal obstruction");
    let b = crate::builtin::paper_b();
    let bc = b.eval_op("c", &[])?;
    s.check(
        b.eval_op("+", &[bc, bc])? != bc,
        "B fails the identity c = c + c",
        format!("c = {bc}"),
    );
    for (label, d) in sample_subpowers(&a)? {
        let slice = sylow3(&a, &d)?;
        let slice_ok = check_sylow_slice(&a, &d, &slice)?;
        s.check(
            slice_ok && slice.subdirect == lattice::is_subdirect(&a, &d),
            &format!("V3 of {label} is a subdirect subgroup"),
            format!("|V3| = 3^{}", slice.dim),
        );
        for polarity in [Polarity::LexSmaller, Polarity::LexLarger] {
            let r = verify_sum_identity(&a, &d, polarity)?;
            s.check(
                r.passed(),
                &format!("sum identity on {label} ({polarity:?})"),
                format!(
                    "|P| = {}, sum = ({}), nonkernel counts {:?} vs {}",
                    r.plus_size,
                    join_display(&r.sum, ","),
                    r.nonkernel_counts,
                    r.expected_count
                ),
            );
        }
        let r = verify_ideal_obstruction(&a, &d, DEFAULT_OBSTRUCTION_BOUND)?;
        s.check(
            r.passed(),
            &format!("ideal obstruction on {label}"),
            format!(
                "|D| = {}, |Con(D)| = {}, index-2 = {}, relevant = {}{}",
                r.d_size,
                r.con_size,
                r.index_two,
                r.relevant,
                if r.vacuous() { " (vacuous)" } else { "" }
            ),
        );
    }
    sections.push(s.section);

    Ok(ExampleReport { sections })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::{builtin, cyclic};

    fn z6a() -> FiniteAlgebra {
        builtin("paper-z6").unwrap()
    }

    fn gen(a: &FiniteAlgebra, k: usize, gens: &[&[Elem]]) -> Subpower {
        let g: Vec<Vec<Elem>> = gens.iter().map(|t| t.to_vec()).collect();
        subpower::generate(a, k, &g, Budget::default()).unwrap()
    }

    #[test]
    fn sylow_slices() {
        let a = z6a();
        let d = gen(&a, 1, &[&[1]]);
        let slice = sylow3(&a, &d).unwrap();
        assert_eq!(slice.members, vec![vec![0], vec![2], vec![4]]);
        assert_eq!(slice.dim, 1);
        assert!(check_sylow_slice(&a, &d, &slice).unwrap());

        let diag = gen(&a, 2, &[&[0, 0], &[1, 1]]);
        let slice = sylow3(&a, &diag).unwrap();
        assert_eq!(slice.members, vec![vec![0, 0], vec![2, 2], vec![4, 4]]);

        let d = gen(&a, 2, &[&[1, 5]]);
        let slice = sylow3(&a, &d).unwrap();
        assert!(slice.subdirect);
        assert!(check_sylow_slice(&a, &d, &slice).unwrap());

        assert!(matches!(
            sylow3(&cyclic(6), &d),
            Err(Error::Incompatible(_))
        ));
    }

    #[test]
    fn splits() {
        let a = z6a();
        let d = gen(&a, 1, &[&[1]]);
        let slice = sylow3(&a, &d).unwrap();
        let split = plus_minus_split(&a, &slice, Polarity::LexSmaller).unwrap();
        assert_eq!(split.plus, vec![vec![2]]);
        assert_eq!(split.minus, vec![vec![4]]);

        let trivial = SylowSlice {
            arity: 1,
            members: vec![vec![0]],
            dim: 0,
            subdirect: false,
        };
        assert!(plus_minus_split(&a, &trivial, Polarity::LexSmaller)
            .unwrap()
            .plus
            .is_empty());

        let full =
            subpower::generate(&a, 2, &subpower::all_tuples(6, 2), Budget::default()).unwrap();
        let slice = sylow3(&a, &full).unwrap();
        assert_eq!(slice.len(), 9);
        let split = plus_minus_split(&a, &slice, Polarity::LexLarger).unwrap();
        assert_eq!(split.plus.len(), 4);
        assert_eq!(split.minus.len(), 4);
    }

    #[test]
    fn sum_identity() {
        let a = z6a();
        let d = gen(&a, 1, &[&[1]]);
        for polarity in [Polarity::LexSmaller, Polarity::LexLarger] {
            let r = verify_sum_identity(&a, &d, polarity).unwrap();
            assert_eq!(r.sum, vec![3]);
            assert!(r.passed());
        }
        let full =
            subpower::generate(&a, 2, &subpower::all_tuples(6, 2), Budget::default()).unwrap();
        let r = verify_sum_identity(&a, &full, Polarity::LexSmaller).unwrap();
        assert_eq!((r.v3_size, r.plus_size, r.sum.clone()), (9, 4, vec![3, 3]));
        assert_eq!(r.nonkernel_counts, vec![6, 6]);
        assert!(r.passed());

        let not_subdirect = gen(&a, 2, &[&[3, 3]]);
        assert_eq!(
            verify_sum_identity(&a, &not_subdirect, Polarity::LexSmaller),
            Err(Error::NotSubdirect)
        );
    }

    #[test]
    fn obstruction_on_a_is_vacuous() {
        let a = z6a();
        let d = gen(&a, 1, &[&[1]]);
        let r = verify_ideal_obstruction(&a, &d, DEFAULT_OBSTRUCTION_BOUND).unwrap();
        assert_eq!(r.con_size, 3);
        assert_eq!(r.index_two, 0);
        assert!(r.passed() && r.vacuous());
    }

    #[test]
    fn prime_powers() {
        assert!(!is_prime_power(6));
        assert!(is_prime_power(8) && is_prime_power(9) && is_prime_power(2));
        assert!(!is_prime_power(1) && !is_prime_power(12));
    }
}
