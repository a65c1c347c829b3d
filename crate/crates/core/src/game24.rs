//! Game of 24: exhaustive search over arithmetic expressions on four numbers.
//!
//! Every candidate is a permutation of the inputs placed as leaves of one of
//! the five binary tree shapes over four leaves, with one of `+ - * /` at
//! each internal node: `4! · 5 · 4³ = 7680` expressions. Evaluation is exact
//! over rationals, so `8 / 3 * 9` is 24 and not 23.999…

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use thiserror::Error;

/// Expressions per four-number input.
pub const EXPRESSIONS_PER_INPUT: usize = 24 * 5 * 64;

/// Number of distinct binary tree shapes over four ordered leaves.
pub const SHAPES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivByZero,
    #[error("rational arithmetic overflow")]
    Overflow,
}

/// An exact fraction in lowest terms with a positive denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rational {
    num: i128,
    den: i128,
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Rational {
    pub const ZERO: Rational = Rational { num: 0, den: 1 };

    pub fn new(num: i128, den: i128) -> Result<Self, ArithError> {
        if den == 0 {
            return Err(ArithError::DivByZero);
        }
        let g = gcd(num.unsigned_abs(), den.unsigned_abs());
        // g >= 1 since den != 0; g divides both, so the quotients fit
        let g = i128::try_from(g).map_err(|_| ArithError::Overflow)?;
        let (mut num, mut den) = (num / g, den / g);
        if den < 0 {
            num = num.checked_neg().ok_or(ArithError::Overflow)?;
            den = den.checked_neg().ok_or(ArithError::Overflow)?;
        }
        Ok(Rational { num, den })
    }

    pub fn from_int(n: i64) -> Self {
        Rational {
            num: i128::from(n),
            den: 1,
        }
    }

    pub fn numer(self) -> i128 {
        self.num
    }

    pub fn denom(self) -> i128 {
        self.den
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    pub fn is_integer(self) -> bool {
        self.den == 1
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn checked_add(self, rhs: Self) -> Result<Self, ArithError> {
        let a = self.num.checked_mul(rhs.den).ok_or(ArithError::Overflow)?;
        let b = rhs.num.checked_mul(self.den).ok_or(ArithError::Overflow)?;
        let num = a.checked_add(b).ok_or(ArithError::Overflow)?;
        let den = self.den.checked_mul(rhs.den).ok_or(ArithError::Overflow)?;
        Rational::new(num, den)
    }

    pub fn checked_sub(self, rhs: Self) -> Result<Self, ArithError> {
        let neg = Rational {
            num: rhs.num.checked_neg().ok_or(ArithError::Overflow)?,
            den: rhs.den,
        };
        self.checked_add(neg)
    }

    pub fn checked_mul(self, rhs: Self) -> Result<Self, ArithError> {
        let num = self.num.checked_mul(rhs.num).ok_or(ArithError::Overflow)?;
        let den = self.den.checked_mul(rhs.den).ok_or(ArithError::Overflow)?;
        Rational::new(num, den)
    }

    pub fn checked_div(self, rhs: Self) -> Result<Self, ArithError> {
        if rhs.is_zero() {
            return Err(ArithError::DivByZero);
        }
        let num = self.num.checked_mul(rhs.den).ok_or(ArithError::Overflow)?;
        let den = self.den.checked_mul(rhs.num).ok_or(ArithError::Overflow)?;
        Rational::new(num, den)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        // denominators are positive; widen through i128 checked products and
        // fall back to floating comparison only if they would overflow
        match (self.num.checked_mul(other.den), other.num.checked_mul(self.den)) {
            (Some(a), Some(b)) => a.cmp(&b),
            _ => self
                .to_f64()
                .partial_cmp(&other.to_f64())
                .unwrap_or(Ordering::Equal),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    pub const ALL: [BinOp; 4] = [BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div];

    pub fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
        }
    }

    pub fn apply(self, a: Rational, b: Rational) -> Result<Rational, ArithError> {
        match self {
            BinOp::Add => a.checked_add(b),
            BinOp::Sub => a.checked_sub(b),
            BinOp::Mul => a.checked_mul(b),
            BinOp::Div => a.checked_div(b),
        }
    }

    fn apply_f64(self, a: f64, b: f64) -> Option<f64> {
        match self {
            BinOp::Add => Some(a + b),
            BinOp::Sub => Some(a - b),
            BinOp::Mul => Some(a * b),
            BinOp::Div if b == 0.0 => None,
            BinOp::Div => Some(a / b),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExprTree {
    Leaf(Rational),
    Node {
        op: BinOp,
        left: Box<ExprTree>,
        right: Box<ExprTree>,
    },
}

impl ExprTree {
    pub fn leaf(value: impl Into<Rational>) -> Self {
        ExprTree::Leaf(value.into())
    }

    pub fn node(op: BinOp, left: ExprTree, right: ExprTree) -> Self {
        ExprTree::Node {
            op,
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    /// Leaf values, left to right.
    pub fn leaves(&self) -> Vec<Rational> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<Rational>) {
        match self {
            ExprTree::Leaf(v) => out.push(*v),
            ExprTree::Node { left, right, .. } => {
                left.collect_leaves(out);
                right.collect_leaves(out);
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            ExprTree::Leaf(_) => 3,
            ExprTree::Node { op, .. } => op.precedence(),
        }
    }

    fn eval_f64(&self) -> Option<f64> {
        match self {
            ExprTree::Leaf(v) => Some(v.to_f64()),
            ExprTree::Node { op, left, right } => op.apply_f64(left.eval_f64()?, right.eval_f64()?),
        }
    }
}

/// Exact value of the expression.
pub fn eval_expr(tree: &ExprTree) -> Result<Rational, ArithError> {
    match tree {
        ExprTree::Leaf(v) => Ok(*v),
        ExprTree::Node { op, left, right } => op.apply(eval_expr(left)?, eval_expr(right)?),
    }
}

/// Infix rendering with the fewest parentheses that keep the tree shape:
/// a left operand is wrapped when it binds looser than its parent, a right
/// operand when it binds looser or equally. `parse_expr` reads the output
/// back into the same tree. Negative and fractional leaves are wrapped,
/// e.g. `(-3)` and `(1/2)`; the latter reads back as a division node.
pub fn render(tree: &ExprTree) -> String {
    let mut out = String::new();
    write_expr(tree, &mut out);
    out
}

fn write_expr(tree: &ExprTree, out: &mut String) {
    match tree {
        ExprTree::Leaf(v) => {
            if v.is_integer() && v.numer() >= 0 {
                out.push_str(&v.to_string());
            } else {
                out.push('(');
                out.push_str(&v.to_string());
                out.push(')');
            }
        }
        ExprTree::Node { op, left, right } => {
            let p = op.precedence();
            write_operand(left, left.precedence() < p, out);
            out.push(op.symbol());
            write_operand(right, right.precedence() <= p, out);
        }
    }
}

fn write_operand(tree: &ExprTree, wrap: bool, out: &mut String) {
    if wrap {
        out.push('(');
        write_expr(tree, out);
        out.push(')');
    } else {
        write_expr(tree, out);
    }
}

impl fmt::Display for ExprTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseExprError {
    #[error("unexpected character `{0}` at byte {1}")]
    UnexpectedChar(char, usize),
    #[error("unexpected end of expression")]
    UnexpectedEnd,
    #[error("trailing input at byte {0}")]
    Trailing(usize),
    #[error("number too large at byte {0}")]
    NumberTooLarge(usize),
}

/// Parses infix arithmetic over integers with `+ - * /` (also `×`, `÷`),
/// parentheses, and unary minus on numbers. Operators are left-associative.
pub fn parse_expr(text: &str) -> Result<ExprTree, ParseExprError> {
    let mut p = ExprParser {
        chars: text.char_indices().collect(),
        pos: 0,
    };
    let tree = p.expr()?;
    p.skip_ws();
    match p.peek() {
        None => Ok(tree),
        Some((at, _)) => Err(ParseExprError::Trailing(at)),
    }
}

struct ExprParser {
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl ExprParser {
    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|(_, c)| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<(usize, char)> {
        self.chars.get(self.pos).copied()
    }

    fn op_at(&mut self, level: u8) -> Option<BinOp> {
        self.skip_ws();
        let (_, c) = self.peek()?;
        let op = match c {
            '+' => BinOp::Add,
            '-' | '−' => BinOp::Sub,
            '*' | '×' | 'x' => BinOp::Mul,
            '/' | '÷' => BinOp::Div,
            _ => return None,
        };
        (op.precedence() == level).then(|| {
            self.pos += 1;
            op
        })
    }

    fn expr(&mut self) -> Result<ExprTree, ParseExprError> {
        let mut lhs = self.term()?;
        while let Some(op) = self.op_at(1) {
            let rhs = self.term()?;
            lhs = ExprTree::node(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<ExprTree, ParseExprError> {
        let mut lhs = self.factor()?;
        while let Some(op) = self.op_at(2) {
            let rhs = self.factor()?;
            lhs = ExprTree::node(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<ExprTree, ParseExprError> {
        self.skip_ws();
        let (at, c) = self.peek().ok_or(ParseExprError::UnexpectedEnd)?;
        match c {
            '(' => {
                self.pos += 1;
                let inner = self.expr()?;
                self.skip_ws();
                match self.peek() {
                    Some((_, ')')) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    Some((at, c)) => Err(ParseExprError::UnexpectedChar(c, at)),
                    None => Err(ParseExprError::UnexpectedEnd),
                }
            }
            '-' | '−' => {
                self.pos += 1;
                self.skip_ws();
                match self.peek() {
                    Some((_, d)) if d.is_ascii_digit() => {
                        let n = self.number()?;
                        Ok(ExprTree::Leaf(Rational::from_int(-n)))
                    }
                    Some((at, c)) => Err(ParseExprError::UnexpectedChar(c, at)),
                    None => Err(ParseExprError::UnexpectedEnd),
                }
            }
            d if d.is_ascii_digit() => Ok(ExprTree::Leaf(Rational::from_int(self.number()?))),
            other => Err(ParseExprError::UnexpectedChar(other, at)),
        }
    }

    fn number(&mut self) -> Result<i64, ParseExprError> {
        let start = self.peek().map(|(at, _)| at).unwrap_or(0);
        let mut n: i64 = 0;
        while let Some((_, d)) = self.peek().filter(|(_, d)| d.is_ascii_digit()) {
            n = n
                .checked_mul(10)
                .and_then(|n| n.checked_add(i64::from(d as u8 - b'0')))
                .ok_or(ParseExprError::NumberTooLarge(start))?;
            self.pos += 1;
        }
        Ok(n)
    }
}

fn build_shape(shape: usize, leaves: [Rational; 4], ops: [BinOp; 3]) -> ExprTree {
    let [a, b, c, d] = leaves.map(ExprTree::Leaf);
    let [o1, o2, o3] = ops;
    use ExprTree as E;
    match shape {
        0 => E::node(o3, E::node(o2, E::node(o1, a, b), c), d),
        1 => E::node(o3, E::node(o1, a, E::node(o2, b, c)), d),
        2 => E::node(o2, E::node(o1, a, b), E::node(o3, c, d)),
        3 => E::node(o1, a, E::node(o3, E::node(o2, b, c), d)),
        4 => E::node(o1, a, E::node(o2, b, E::node(o3, c, d))),
        _ => unreachable!("shape index out of range"),
    }
}

/// Index permutations of `0..4` in lexicographic order.
fn index_permutations() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in (0..4).filter(|&b| b != a) {
            for c in (0..4).filter(|&c| c != a && c != b) {
                let d = 6 - a - b - c;
                out.push([a, b, c, d]);
            }
        }
    }
    out
}

/// Streams every candidate expression. Order: leaf permutation (lexicographic
/// over input positions), then tree shape, then operators with the leftmost
/// operator varying slowest. Repeated inputs yield repeated expressions.
pub struct Expressions {
    numbers: [Rational; 4],
    perms: Vec<[usize; 4]>,
    index: usize,
}

pub fn enumerate_expressions(numbers: [Rational; 4]) -> Expressions {
    Expressions {
        numbers,
        perms: index_permutations(),
        index: 0,
    }
}

impl Iterator for Expressions {
    type Item = ExprTree;

    fn next(&mut self) -> Option<ExprTree> {
        if self.index >= EXPRESSIONS_PER_INPUT {
            return None;
        }
        let i = self.index;
        self.index += 1;
        let perm = self.perms[i / (SHAPES * 64)];
        let shape = (i / 64) % SHAPES;
        let code = i % 64;
        let ops = [BinOp::ALL[code / 16], BinOp::ALL[(code / 4) % 4], BinOp::ALL[code % 4]];
        Some(build_shape(shape, perm.map(|p| self.numbers[p]), ops))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = EXPRESSIONS_PER_INPUT - self.index;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Expressions {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum G24Verdict {
    Found { expression: ExprTree, rendered: String },
    Impossible,
}

impl G24Verdict {
    pub fn is_found(&self) -> bool {
        matches!(self, G24Verdict::Found { .. })
    }
}

/// Answer line: `[expression]` or `cannot`.
impl fmt::Display for G24Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            G24Verdict::Found { rendered, .. } => write!(f, "[{rendered}]"),
            G24Verdict::Impossible => f.write_str("cannot"),
        }
    }
}

/// Whether the expression is exactly `target`. Division by zero is a
/// non-match; overflow is reported.
pub fn evaluates_to(tree: &ExprTree, target: Rational) -> Result<bool, ArithError> {
    match eval_expr(tree) {
        Ok(v) => Ok(v == target),
        Err(ArithError::DivByZero) => Ok(false),
        Err(e) => Err(e),
    }
}

/// First expression in enumeration order that equals `target` exactly.
pub fn solve24(numbers: [Rational; 4], target: Rational) -> Result<G24Verdict, ArithError> {
    for expression in enumerate_expressions(numbers) {
        if evaluates_to(&expression, target)? {
            let rendered = render(&expression);
            return Ok(G24Verdict::Found { expression, rendered });
        }
    }
    Ok(G24Verdict::Impossible)
}

/// Same search in `f64`, accepting `|value - target| < 1e-6`.
pub fn solve24_f64(numbers: [Rational; 4], target: f64) -> Option<ExprTree> {
    enumerate_expressions(numbers).find(|e| e.eval_f64().is_some_and(|v| (v - target).abs() < 1e-6))
}

/// Whether the leaves of `tree` are exactly the multiset `numbers`.
pub fn uses_exactly(tree: &ExprTree, numbers: &[Rational]) -> bool {
    let mut leaves = tree.leaves();
    let mut expected = numbers.to_vec();
    leaves.sort();
    expected.sort();
    leaves == expected
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum G24InputError {
    #[error("expected 4 integers, found {0} fields")]
    WrongCount(usize),
    #[error("`{0}` is not an integer")]
    NotANumber(String),
    #[error("{0} is outside the supported range ±2^30")]
    OutOfRange(i64),
}

const INPUT_LIMIT: i64 = 1 << 30;

/// Parses one instance: four whitespace-separated integers. Magnitudes are
/// capped at 2^30, which keeps every four-leaf evaluation inside `i128`.
pub fn parse_g24_instance(line: &str) -> Result<[Rational; 4], G24InputError> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != 4 {
        return Err(G24InputError::WrongCount(fields.len()));
    }
    let mut out = [Rational::ZERO; 4];
    for (slot, field) in out.iter_mut().zip(&fields) {
        let n: i64 = field
            .parse()
            .map_err(|_| G24InputError::NotANumber((*field).into()))?;
        if n.abs() > INPUT_LIMIT {
            return Err(G24InputError::OutOfRange(n));
        }
        *slot = Rational::from_int(n);
    }
    Ok(out)
}

/// A parsed answer line: `Some(tree)` for `[expr]`, `None` for a refusal.
pub fn parse_g24_answer(text: &str) -> Result<Option<ExprTree>, ParseExprError> {
    let t = text.trim();
    let lower = t.to_ascii_lowercase();
    if lower.contains("cannot") || lower.contains("impossible") {
        return Ok(None);
    }
    let inner = t
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .unwrap_or(t);
    // `a = 24` style answers keep only the left side
    let inner = inner.split('=').next().unwrap_or(inner);
    parse_expr(inner).map(Some)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;
    use alloc::vec;

    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn nums(a: [i64; 4]) -> [Rational; 4] {
        a.map(r)
    }

    #[test]
    fn rational_canonical() {
        let x = Rational::new(6, -4).unwrap();
        assert_eq!((x.numer(), x.denom()), (-3, 2));
        assert_eq!(Rational::new(1, 0), Err(ArithError::DivByZero));
        assert_eq!(Rational::new(0, -5).unwrap(), Rational::ZERO);
        assert!(r(1) < Rational::new(3, 2).unwrap());
    }

    #[test]
    fn rational_overflow_is_reported() {
        let big = Rational::new(i128::MAX, 1).unwrap();
        assert_eq!(big.checked_add(big), Err(ArithError::Overflow));
        assert_eq!(big.checked_mul(r(2)), Err(ArithError::Overflow));
    }

    #[test]
    fn eval_examples() {
        use BinOp::*;
        let e = ExprTree::node(
            Add,
            ExprTree::leaf(6),
            ExprTree::node(Mul, ExprTree::leaf(2), ExprTree::node(Add, ExprTree::leaf(4), ExprTree::leaf(5))),
        );
        assert_eq!(eval_expr(&e), Ok(r(24)));
        assert_eq!(render(&e), "6+2*(4+5)");

        let e = ExprTree::node(Div, ExprTree::leaf(1), ExprTree::node(Sub, ExprTree::leaf(2), ExprTree::leaf(2)));
        assert_eq!(eval_expr(&e), Err(ArithError::DivByZero));

        let e = ExprTree::node(Mul, ExprTree::node(Div, ExprTree::leaf(8), ExprTree::leaf(3)), ExprTree::leaf(9));
        assert_eq!(eval_expr(&e), Ok(r(24)));
        assert_eq!(render(&e), "8/3*9");
    }

    #[test]
    fn render_leaf_and_associativity() {
        use BinOp::*;
        assert_eq!(render(&ExprTree::leaf(7)), "7");
        let right_nested = ExprTree::node(Sub, ExprTree::leaf(9), ExprTree::node(Sub, ExprTree::leaf(4), ExprTree::leaf(1)));
        assert_eq!(render(&right_nested), "9-(4-1)");
        assert_eq!(parse_expr("9-(4-1)").unwrap(), right_nested);
        assert_eq!(parse_expr("9-4-1").unwrap().leaves(), vec![r(9), r(4), r(1)]);
        assert_eq!(eval_expr(&parse_expr("9-4-1").unwrap()), Ok(r(4)));
        assert_eq!(render(&ExprTree::leaf(-3)), "(-3)");
        assert_eq!(parse_expr("(-3)").unwrap(), ExprTree::leaf(-3));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_expr("1+"), Err(ParseExprError::UnexpectedEnd)));
        assert!(matches!(parse_expr("(1+2"), Err(ParseExprError::UnexpectedEnd)));
        assert!(matches!(parse_expr("1 2"), Err(ParseExprError::Trailing(_))));
        assert!(matches!(parse_expr("a"), Err(ParseExprError::UnexpectedChar('a', 0))));
        assert_eq!(eval_expr(&parse_expr("6 × (4 ÷ 2)").unwrap()), Ok(r(12)));
    }

    #[test]
    fn shape_count() {
        let trees: BTreeSet<String> = (0..SHAPES)
            .map(|s| render(&build_shape(s, nums([1, 2, 3, 4]), [BinOp::Sub; 3])))
            .collect();
        assert_eq!(trees.len(), 5);
    }

    #[test]
    fn enumeration_cardinality() {
        assert_eq!(enumerate_expressions(nums([1, 2, 3, 4])).count(), 7680);
        assert_eq!(enumerate_expressions(nums([1, 1, 1, 1])).count(), 7680);
        let distinct: BTreeSet<String> = enumerate_expressions(nums([1, 2, 3, 4])).map(|e| render(&e)).collect();
        assert_eq!(distinct.len(), 7680);
    }

    #[test]
    fn solve_examples() {
        let v = solve24(nums([6, 2, 4, 5]), r(24)).unwrap();
        let G24Verdict::Found { expression, rendered } = &v else {
            panic!("expected a solution");
        };
        assert_eq!(eval_expr(expression), Ok(r(24)));
        assert!(uses_exactly(expression, &nums([6, 2, 4, 5])));
        assert_eq!(eval_expr(&parse_expr(rendered).unwrap()), Ok(r(24)));

        assert!(solve24(nums([24, 1, 1, 1]), r(24)).unwrap().is_found());
        assert_eq!(solve24(nums([1, 1, 1, 1]), r(24)).unwrap(), G24Verdict::Impossible);
        assert_eq!(G24Verdict::Impossible.to_string(), "cannot");
    }

    #[test]
    fn rational_beats_float_on_three_eights() {
        // 3 3 8 8: 8/(3-8/3) is the only solution
        let v = solve24(nums([3, 3, 8, 8]), r(24)).unwrap();
        assert!(v.is_found());
        assert!(solve24_f64(nums([3, 3, 8, 8]), 24.0).is_some());
    }

    #[test]
    fn answers() {
        assert_eq!(parse_g24_answer("cannot").unwrap(), None);
        let t = parse_g24_answer("[6+2*(4+5)]").unwrap().unwrap();
        assert_eq!(eval_expr(&t), Ok(r(24)));
        let t = parse_g24_answer("(6+2*(4+5)) = 24").unwrap().unwrap();
        assert_eq!(eval_expr(&t), Ok(r(24)));
    }

    #[test]
    fn instance_lines() {
        assert_eq!(parse_g24_instance("1 1 4 6").unwrap(), nums([1, 1, 4, 6]));
        assert_eq!(parse_g24_instance("1 2 3"), Err(G24InputError::WrongCount(3)));
        assert!(matches!(parse_g24_instance("1 2 3 x"), Err(G24InputError::NotANumber(_))));
        assert!(matches!(
            parse_g24_instance("1 2 3 99999999999"),
            Err(G24InputError::OutOfRange(_))
        ));
    }
}
