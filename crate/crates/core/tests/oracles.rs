mod oracle;

use std::collections::BTreeSet;

use unialg::builtin::{builtin, small_groups, unary_algebras, BUILTIN_NAMES};
use unialg::commutator::{self, Supernilpotence};
use unialg::lattice::{self, Partition};
use unialg::{ClosureConfig, FiniteAlgebra};

fn small_corpus() -> Vec<FiniteAlgebra> {
    let mut algebras: Vec<FiniteAlgebra> = BUILTIN_NAMES
        .iter()
        .map(|n| builtin(n).unwrap())
        .chain(small_groups())
        .filter(|a| a.size() <= 4)
        .collect();
    algebras.extend(unary_algebras(2, 2));
    algebras.extend(unary_algebras(3, 1));
    algebras
}

#[test]
fn congruence_lattice_matches_brute_force() {
    for a in small_corpus() {
        let fast: BTreeSet<Partition> = lattice::congruence_lattice(&a)
            .unwrap()
            .into_iter()
            .collect();
        assert_eq!(fast, oracle::brute_congruences(&a), "{}", a.name());
    }
}

#[test]
fn subuniverses_match_brute_force() {
    for a in small_corpus() {
        let fast: BTreeSet<_> = lattice::all_subuniverses(&a).unwrap().into_iter().collect();
        assert_eq!(fast, oracle::brute_subuniverses(&a), "{}", a.name());
    }
}

#[test]
fn principal_congruences_match_brute_force() {
    for a in small_corpus() {
        let n = a.size();
        for x in 0..n {
            for y in x + 1..n {
                assert_eq!(
                    lattice::congruence_generated(&a, &[(x, y)]).unwrap(),
                    oracle::brute_cg(&a, &[(x, y)]),
                    "{} Cg({x},{y})",
                    a.name()
                );
            }
        }
    }
}

#[test]
fn commutator_of_full_congruence_is_derived_subgroup() {
    for g in small_groups() {
        let one = Partition::one(g.size());
        let c = commutator::tc_commutator(&g, &one, &one).unwrap();
        let identity = g.eval_op("0", &[]).unwrap() as usize;
        let class: BTreeSet<u8> = (0..g.size())
            .filter(|&x| c.related(x, identity))
            .map(|x| x as u8)
            .collect();
        assert_eq!(class, oracle::derived_subgroup(&g), "{}", g.name());
    }
}

#[test]
fn unary_algebras_are_supernilpotent_of_class_one() {
    let config = ClosureConfig::sequential();
    for n in 1..=3 {
        for symbols in 1..=2 {
            for a in unary_algebras(n, symbols) {
                let one = Partition::one(n);
                assert_eq!(
                    commutator::is_supernilpotent(&a, &one, 1, &config).unwrap(),
                    Supernilpotence::Yes,
                    "{}",
                    a.name()
                );
            }
        }
    }
}
