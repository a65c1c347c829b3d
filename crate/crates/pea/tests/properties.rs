use pea::bench::{InstanceResult, Outcome, Tallies};
use pea::judge::Claim;
use pea::synthesis::normalize_answer;
use proptest::prelude::*;

fn outcome() -> impl Strategy<Value = (Outcome, Option<Claim>)> {
    prop_oneof![
        Just((Outcome::Correct, Some(Claim::Satisfiable))),
        Just((Outcome::Correct, Some(Claim::Unsatisfiable))),
        Just((Outcome::Incorrect, None)),
        Just((Outcome::Timeout, None)),
        Just((Outcome::Error, None)),
    ]
}

proptest! {
    #[test]
    fn normalization_is_idempotent(text in "[ \\ta-zA-Z0-9_;\\n\\[\\],]{0,40}") {
        let once = normalize_answer(&text);
        prop_assert_eq!(normalize_answer(&once), once);
    }

    #[test]
    fn plan_spacing_does_not_matter(steps in prop::collection::vec("[a-z_0-9]{1,8}( [a-z_0-9]{1,8}){0,3}", 1..6)) {
        let tight = steps.join("\n");
        let loose = steps.iter().map(|s| format!("  {}  ", s.replace(' ', "   "))).collect::<Vec<_>>().join(" ;\n");
        prop_assert_eq!(normalize_answer(&tight), normalize_answer(&loose));
    }

    #[test]
    fn tallies_partition_the_results(outcomes in prop::collection::vec(outcome(), 0..60)) {
        let results: Vec<InstanceResult> = outcomes
            .iter()
            .enumerate()
            .map(|(i, (outcome, claim))| InstanceResult {
                id: i.to_string(),
                outcome: *outcome,
                wall_seconds: 0.0,
                answer: None,
                claim: *claim,
                detail: None,
            })
            .collect();
        let t = Tallies::from_results(&results);
        prop_assert_eq!(t.total(), results.len());
        prop_assert_eq!(t.correct + t.incorrect + t.timeout + t.error, results.len());
        prop_assert_eq!(t.sat_correct + t.unsat_correct, t.correct);
    }
}
