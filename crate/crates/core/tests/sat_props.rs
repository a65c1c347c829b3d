use std::collections::HashSet;

use pea_core::quant::{evaluate, Binder, Domain, QuantifiedFormula, Total, Verdict};
use pea_core::random::random_cnf;
use pea_core::sat::{
    check_tautology, dpll_oracle, enumerate_assignments, parse_dimacs, solve_sat, Assignment, CnfFormula,
    SatVerdict, TautologyVerdict,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn holds(f: &CnfFormula, values: &[bool]) -> bool {
    f.clauses()
        .iter()
        .all(|c| c.iter().any(|l| values[l.var() as usize - 1] != l.is_negated()))
}

fn quantified(f: &CnfFormula, exists: bool) -> Verdict<bool> {
    let prefix = (1..=f.num_vars())
        .map(|i| {
            let d = Domain::boolean(format!("x{i}"));
            if exists {
                Binder::exists(format!("x{i}"), d)
            } else {
                Binder::forall(format!("x{i}"), d)
            }
        })
        .collect();
    let formula = QuantifiedFormula::new(prefix, Total(|t: &[bool]| holds(f, t))).unwrap();
    evaluate(&formula).unwrap()
}

fn random_instances(seed: u64, count: usize) -> Vec<CnfFormula> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=10);
            let m = rng.gen_range(1..=5 * n as usize);
            random_cnf(&mut rng, n, m, 3)
        })
        .collect()
}

#[test]
fn brute_force_matches_dpll() {
    let mut sat = 0;
    for f in random_instances(7, 500) {
        let ours = solve_sat(&f);
        let oracle = dpll_oracle(&f);
        assert_eq!(ours.is_sat(), oracle.is_sat(), "{}", f.to_dimacs());
        for verdict in [&ours, &oracle] {
            if let SatVerdict::Sat(a) = verdict {
                assert!(holds(&f, a.values()));
            }
        }
        sat += ours.is_sat() as usize;
    }
    // the generator must exercise both answers
    assert!(sat > 50 && sat < 450, "{sat} satisfiable");
}

#[test]
fn sat_is_existential_quantification() {
    for f in random_instances(11, 200) {
        let expected = match quantified(&f, true) {
            Verdict::Valid { witness } => SatVerdict::Sat(Assignment(witness.unwrap())),
            Verdict::Invalid { .. } => SatVerdict::Unsat,
        };
        assert_eq!(solve_sat(&f), expected);
    }
}

#[test]
fn tautology_is_universal_quantification() {
    for f in random_instances(13, 200) {
        let expected = match quantified(&f, false) {
            Verdict::Valid { .. } => TautologyVerdict::Valid,
            Verdict::Invalid { counterexample } => TautologyVerdict::Invalid {
                counterexample: Assignment(counterexample.unwrap()),
            },
        };
        let got = check_tautology(&f);
        if let TautologyVerdict::Invalid { counterexample } = &got {
            assert!(!holds(&f, counterexample.values()));
        }
        assert_eq!(got, expected);
    }
}

#[test]
fn assignments_are_distinct() {
    for n in [0u32, 1, 5, 16] {
        let all: HashSet<Vec<bool>> = enumerate_assignments(n).map(|a| a.0).collect();
        assert_eq!(all.len(), 1usize << n);
    }
}

#[test]
fn dimacs_round_trip_random() {
    for f in random_instances(17, 50) {
        assert_eq!(parse_dimacs(&f.to_dimacs()).unwrap(), f);
    }
}
