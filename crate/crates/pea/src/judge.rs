//! Task-specific answer checking.

use pea_core::blocksworld;
use pea_core::game24::{self, Rational};
use pea_core::logistics;
use pea_core::plan::{PlanCheck, SearchLimits};
use pea_core::sat::{self, SatVerdict};
use serde::{Deserialize, Serialize};

use crate::task::{Instance, Payload};

/// What a correct answer asserted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Claim {
    Satisfiable,
    Unsatisfiable,
    Expression,
    Impossible,
    Plan,
}

/// `Ok(claim)` when `answer` is correct for `instance`, otherwise the
/// reason it is not.
///
/// An UNSAT claim is checked with the DPLL procedure and a `cannot` claim
/// with the exhaustive expression search. A Blocksworld plan must be valid
/// and as short as the plan shipped with the instance, or as the
/// breadth-first plan when none was shipped. Logistics plans only need to
/// be valid.
pub fn judge(instance: &Instance, answer: &str) -> Result<Claim, String> {
    let answer = answer.trim();
    match &instance.payload {
        Payload::Sat(f) => match sat::parse_sat_answer(answer).map_err(|e| e.to_string())? {
            SatVerdict::Sat(a) => {
                if a.len() != f.num_vars() as usize {
                    return Err(format!("assignment has {} values, expected {}", a.len(), f.num_vars()));
                }
                if sat::eval_formula(f, &a).map_err(|e| e.to_string())? {
                    Ok(Claim::Satisfiable)
                } else {
                    Err("assignment does not satisfy the formula".into())
                }
            }
            SatVerdict::Unsat => match sat::dpll_oracle(f) {
                SatVerdict::Unsat => Ok(Claim::Unsatisfiable),
                SatVerdict::Sat(_) => Err("formula is satisfiable".into()),
            },
        },
        Payload::G24(nums) => {
            let target = Rational::from_int(24);
            match game24::parse_g24_answer(answer).map_err(|e| e.to_string())? {
                Some(tree) => {
                    if !game24::uses_exactly(&tree, nums) {
                        return Err("expression does not use each input number exactly once".into());
                    }
                    match game24::eval_expr(&tree) {
                        Ok(v) if v == target => Ok(Claim::Expression),
                        Ok(v) => Err(format!("expression evaluates to {v}")),
                        Err(e) => Err(e.to_string()),
                    }
                }
                None => match game24::solve24(*nums, target) {
                    Ok(v) if v.is_found() => Err(format!("a solution exists: {v}")),
                    Ok(_) => Ok(Claim::Impossible),
                    Err(e) => Err(e.to_string()),
                },
            }
        }
        Payload::Bw {
            initial,
            goal,
            reference_len,
        } => {
            let plan = blocksworld::parse_bw_plan(answer).map_err(|e| e.to_string())?;
            if let PlanCheck::Invalid { step, reason } = blocksworld::verify(initial, goal, &plan) {
                return Err(format!("plan fails at step {step}: {reason}"));
            }
            let optimum = match reference_len {
                Some(n) => *n,
                None => blocksworld::solve_optimal(initial, goal, SearchLimits::default())
                    .plan()
                    .map(|p| p.len())
                    .ok_or("reference search found no plan")?,
            };
            if plan.len() > optimum {
                Err(format!("plan takes {} minutes, the optimum is {optimum}", plan.len()))
            } else {
                Ok(Claim::Plan)
            }
        }
        Payload::Logi { world, initial, goal } => {
            let plan = logistics::parse_logi_plan(answer).map_err(|e| e.to_string())?;
            match logistics::verify(world, initial, goal, &plan) {
                PlanCheck::Valid => Ok(Claim::Plan),
                PlanCheck::Invalid { step, reason } => Err(format!("plan fails at step {step}: {reason}")),
            }
        }
    }
}
