use pea_core::game24::{
    enumerate_expressions, eval_expr, evaluates_to, parse_expr, render, solve24, solve24_f64, uses_exactly,
    ExprTree, G24Verdict, Rational, EXPRESSIONS_PER_INPUT,
};
use pea_core::quant::{evaluate, Binder, Domain, QuantifiedFormula, Total, Verdict};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Fractions as reduced (numerator, denominator) pairs.
fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn frac(n: i128, d: i128) -> (i128, i128) {
    let g = gcd(n, d).max(1);
    let s = if d < 0 { -1 } else { 1 };
    (s * n / g, s * d / g)
}

/// Whether some arithmetic combination of `nums` reaches 24, by merging
/// any two numbers until one remains.
fn reachable(nums: &[(i128, i128)]) -> bool {
    if nums.len() == 1 {
        return nums[0] == (24, 1);
    }
    for i in 0..nums.len() {
        for j in 0..nums.len() {
            if i == j {
                continue;
            }
            let rest: Vec<_> = (0..nums.len()).filter(|&k| k != i && k != j).map(|k| nums[k]).collect();
            let ((a, b), (c, d)) = (nums[i], nums[j]);
            let mut options = vec![frac(a * d + c * b, b * d), frac(a * d - c * b, b * d), frac(a * c, b * d)];
            if c != 0 {
                options.push(frac(a * d, b * c));
            }
            for o in options {
                let mut next = rest.clone();
                next.push(o);
                if reachable(&next) {
                    return true;
                }
            }
        }
    }
    false
}

fn float_value(t: &ExprTree) -> Option<f64> {
    match t {
        ExprTree::Leaf(v) => Some(v.to_f64()),
        ExprTree::Node { op, left, right } => {
            let (a, b) = (float_value(left)?, float_value(right)?);
            match op.symbol() {
                '+' => Some(a + b),
                '-' => Some(a - b),
                '*' => Some(a * b),
                _ => (b != 0.0).then(|| a / b),
            }
        }
    }
}

fn random_hands(seed: u64, count: usize) -> Vec<[i64; 4]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| [0; 4].map(|_| rng.gen_range(1..=13))).collect()
}

fn rationals(h: [i64; 4]) -> [Rational; 4] {
    h.map(Rational::from_int)
}

#[test]
fn exact_solver_matches_pairwise_oracle() {
    for hand in random_hands(3, 200) {
        let verdict = solve24(rationals(hand), Rational::from_int(24)).unwrap();
        let oracle = reachable(&hand.map(|n| (n as i128, 1)));
        assert_eq!(verdict.is_found(), oracle, "{hand:?}");
        if let G24Verdict::Found { expression, rendered } = verdict {
            assert_eq!(eval_expr(&expression).unwrap(), Rational::from_int(24));
            assert!(uses_exactly(&expression, &rationals(hand)));
            assert_eq!(eval_expr(&parse_expr(&rendered).unwrap()).unwrap(), Rational::from_int(24));
        }
    }
}

#[test]
fn float_search_agrees_except_on_rounding() {
    for hand in random_hands(5, 200) {
        let exact = solve24(rationals(hand), Rational::from_int(24)).unwrap();
        let float = solve24_f64(rationals(hand), 24.0);
        match (&exact, &float) {
            (G24Verdict::Found { .. }, Some(_)) | (G24Verdict::Impossible, None) => {}
            (G24Verdict::Impossible, Some(t)) => {
                // a near miss accepted by the tolerance
                assert!(!evaluates_to(t, Rational::from_int(24)).unwrap(), "{hand:?}");
            }
            (G24Verdict::Found { expression, .. }, None) => {
                // exact hit lost to rounding
                let v = float_value(expression);
                assert!(v.map_or(true, |v| (v - 24.0).abs() >= 1e-6), "{hand:?}");
            }
        }
    }
}

#[test]
fn eight_thirds_times_nine() {
    // 8/3 is not representable in binary floating point
    let e = parse_expr("8/3*9").unwrap();
    assert_eq!(eval_expr(&e).unwrap(), Rational::from_int(24));
}

#[test]
fn stream_length_is_fixed() {
    for hand in random_hands(9, 20) {
        assert_eq!(enumerate_expressions(rationals(hand)).count(), EXPRESSIONS_PER_INPUT);
    }
    assert_eq!(enumerate_expressions(rationals([1, 1, 1, 1])).count(), 7680);
}

#[test]
fn solver_is_existential_quantification() {
    for hand in random_hands(21, 40) {
        let nums = rationals(hand);
        let all: Vec<ExprTree> = enumerate_expressions(nums).collect();
        let domain = Domain::new("E", (0..all.len()).collect()).unwrap();
        let formula = QuantifiedFormula::new(
            vec![Binder::exists("e", domain)],
            Total(|t: &[usize]| evaluates_to(&all[t[0]], Rational::from_int(24)).unwrap()),
        )
        .unwrap();
        let expected = match evaluate(&formula).unwrap() {
            Verdict::Valid { witness } => Some(render(&all[witness.unwrap()[0]])),
            Verdict::Invalid { .. } => None,
        };
        let got = match solve24(nums, Rational::from_int(24)).unwrap() {
            G24Verdict::Found { rendered, .. } => Some(rendered),
            G24Verdict::Impossible => None,
        };
        assert_eq!(got, expected);
    }
}
