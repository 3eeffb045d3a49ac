//! Torsion characters on the complement of an arrangement, stored as
//! exponent vectors modulo `d`, triangle cycles in the incidence graph, and
//! the inner-cyclic test.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::combinatorics::{Combinatorics, Permutation};

/// A character of order dividing `d`: `xi(alpha_i) = zeta_d^{e_i}` where
/// `alpha_i` is the meridian class of line `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    order: u32,
    exponents: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CharError {
    ZeroOrder,
    LengthMismatch { expected: usize, got: usize },
    /// Exponent sum not divisible by the order; the meridian classes satisfy
    /// one global relation, so the product of all values must be 1.
    SumNotZero { sum: u32 },
    BadCycle(String),
}

impl fmt::Display for CharError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CharError::ZeroOrder => write!(f, "character order must be positive"),
            CharError::LengthMismatch { expected, got } => {
                write!(f, "expected {expected} exponents, got {got}")
            }
            CharError::SumNotZero { sum } => {
                write!(f, "exponent sum is {sum}, not 0 mod the order")
            }
            CharError::BadCycle(s) => write!(f, "invalid cycle: {s}"),
        }
    }
}

impl core::error::Error for CharError {}

impl Character {
    pub fn new(order: u32, exponents: Vec<u32>) -> Result<Character, CharError> {
        if order == 0 {
            return Err(CharError::ZeroOrder);
        }
        Ok(Character {
            order,
            exponents: exponents.into_iter().map(|e| e % order).collect(),
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// Exponent for a 1-based line label.
    pub fn exponent(&self, line: usize) -> u32 {
        self.exponents[line - 1]
    }

    /// Reindex along a permutation: `xi'(alpha_{phi(i)}) = xi(alpha_i)`.
    pub fn pushforward(&self, phi: &Permutation) -> Character {
        let mut exps = self.exponents.clone();
        for (i, &e) in self.exponents.iter().enumerate() {
            exps[phi.image(i + 1) - 1] = e;
        }
        Character { order: self.order, exponents: exps }
    }
}

/// The order-5 character used throughout: exponents
/// `(1, 4, 3, 2, 0, 0, 1, 2, 3, 4, 0)` on eleven lines.
pub fn standard_character() -> Character {
    Character::new(5, alloc::vec![1, 4, 3, 2, 0, 0, 1, 2, 3, 4, 0]).unwrap()
}

/// A 3-cycle in the incidence graph through the pairwise intersection points
/// of three lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TriangleCycle {
    pub r: usize,
    pub s: usize,
    pub t: usize,
}

impl TriangleCycle {
    pub fn new(r: usize, s: usize, t: usize) -> Result<TriangleCycle, CharError> {
        if r == s || s == t || r == t || r == 0 || s == 0 || t == 0 {
            return Err(CharError::BadCycle(alloc::format!("({r}, {s}, {t})")));
        }
        Ok(TriangleCycle { r, s, t })
    }

    pub fn labels(&self) -> [usize; 3] {
        [self.r, self.s, self.t]
    }

    pub fn relabel(&self, phi: &Permutation) -> TriangleCycle {
        TriangleCycle {
            r: phi.image(self.r),
            s: phi.image(self.s),
            t: phi.image(self.t),
        }
    }
}

/// Check `xi` against `c`: length match and exponent sum 0 mod order.
pub fn validate_character(c: &Combinatorics, xi: &Character) -> Result<(), CharError> {
    if xi.exponents.len() != c.n_lines() {
        return Err(CharError::LengthMismatch {
            expected: c.n_lines(),
            got: xi.exponents.len(),
        });
    }
    let sum: u32 = xi.exponents.iter().sum::<u32>() % xi.order;
    if sum != 0 {
        return Err(CharError::SumNotZero { sum });
    }
    Ok(())
}

/// One failed condition of the inner-cyclic test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InnerCyclicFailure {
    /// Condition 1: a cycle line has a nonzero exponent.
    LineNotTrivial { line: usize, exponent: u32 },
    /// Condition 2: a line through one of the three cycle points has a
    /// nonzero exponent.
    PointNotTrivial { point: Vec<usize>, line: usize, exponent: u32 },
    /// Condition 3: a point on a cycle line whose exponent sum is nonzero.
    SumNotTrivial { line: usize, point: Vec<usize>, sum: u32 },
}

impl fmt::Display for InnerCyclicFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InnerCyclicFailure::LineNotTrivial { line, exponent } => write!(
                f,
                "condition 1: line {line} on the cycle has exponent {exponent}"
            ),
            InnerCyclicFailure::PointNotTrivial { point, line, exponent } => write!(
                f,
                "condition 2: line {line} through cycle point {point:?} has exponent {exponent}"
            ),
            InnerCyclicFailure::SumNotTrivial { line, point, sum } => write!(
                f,
                "condition 3: point {point:?} on cycle line {line} has exponent sum {sum}"
            ),
        }
    }
}

/// Result of the inner-cyclic test; `failures` is empty iff the triple is
/// inner-cyclic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InnerCyclicReport {
    pub failures: Vec<InnerCyclicFailure>,
}

impl InnerCyclicReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The three conditions, checked literally and independently:
///
/// 1. the exponents of the cycle lines `r, s, t` vanish;
/// 2. every line through one of the three cycle points `P_rs, P_st, P_rt`
///    has vanishing exponent;
/// 3. for every point on a cycle line, the exponents of the lines through it
///    sum to 0 mod the order.
pub fn is_inner_cyclic(
    c: &Combinatorics,
    xi: &Character,
    gamma: &TriangleCycle,
) -> Result<InnerCyclicReport, CharError> {
    validate_character(c, xi)?;
    let mut failures = Vec::new();
    for line in gamma.labels() {
        let e = xi.exponent(line);
        if e != 0 {
            failures.push(InnerCyclicFailure::LineNotTrivial { line, exponent: e });
        }
    }
    let pairs = [
        (gamma.r, gamma.s),
        (gamma.s, gamma.t),
        (gamma.r, gamma.t),
    ];
    for (a, b) in pairs {
        let point = gamma_point(c, a, b)?;
        for &line in &point {
            let e = xi.exponent(line);
            if e != 0 {
                failures.push(InnerCyclicFailure::PointNotTrivial {
                    point: point.clone(),
                    line,
                    exponent: e,
                });
            }
        }
    }
    for line in gamma.labels() {
        for point in c.points_on_line(line) {
            let sum: u32 = point.iter().map(|&l| xi.exponent(l)).sum::<u32>() % xi.order;
            if sum != 0 {
                failures.push(InnerCyclicFailure::SumNotTrivial {
                    line,
                    point: point.clone(),
                    sum,
                });
            }
        }
    }
    failures.dedup();
    Ok(InnerCyclicReport { failures })
}

fn gamma_point(c: &Combinatorics, a: usize, b: usize) -> Result<Vec<usize>, CharError> {
    c.point_through(a, b)
        .cloned()
        .ok_or_else(|| CharError::BadCycle(alloc::format!("lines {a} and {b} never meet")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::builtin_k;
    use alloc::vec;

    fn gamma() -> TriangleCycle {
        TriangleCycle::new(5, 6, 11).unwrap()
    }

    #[test]
    fn standard_character_is_valid() {
        let k = builtin_k();
        let xi = standard_character();
        assert_eq!(xi.exponents().iter().sum::<u32>(), 20);
        assert!(validate_character(&k, &xi).is_ok());
    }

    #[test]
    fn zero_character_is_valid() {
        let k = builtin_k();
        let xi = Character::new(5, vec![0; 11]).unwrap();
        assert!(validate_character(&k, &xi).is_ok());
    }

    #[test]
    fn nonzero_sum_rejected() {
        let k = builtin_k();
        let mut exps = vec![0; 11];
        exps[0] = 1;
        let xi = Character::new(5, exps).unwrap();
        assert_eq!(
            validate_character(&k, &xi),
            Err(CharError::SumNotZero { sum: 1 })
        );
    }

    #[test]
    fn length_mismatch_rejected() {
        let k = builtin_k();
        let xi = Character::new(5, vec![0; 10]).unwrap();
        assert!(matches!(
            validate_character(&k, &xi),
            Err(CharError::LengthMismatch { expected: 11, got: 10 })
        ));
    }

    #[test]
    fn standard_triple_is_inner_cyclic() {
        let rep = is_inner_cyclic(&builtin_k(), &standard_character(), &gamma()).unwrap();
        assert!(rep.holds(), "{:?}", rep.failures);
    }

    #[test]
    fn bad_cycle_fails_condition_one() {
        let g = TriangleCycle::new(1, 2, 3).unwrap();
        let rep = is_inner_cyclic(&builtin_k(), &standard_character(), &g).unwrap();
        assert!(!rep.holds());
        assert!(rep
            .failures
            .contains(&InnerCyclicFailure::LineNotTrivial { line: 1, exponent: 1 }));
    }

    #[test]
    fn zero_character_always_inner_cyclic() {
        let k = builtin_k();
        let xi = Character::new(5, vec![0; 11]).unwrap();
        for (r, s, t) in [(5, 6, 11), (1, 2, 3), (7, 8, 9)] {
            let g = TriangleCycle::new(r, s, t).unwrap();
            assert!(is_inner_cyclic(&k, &xi, &g).unwrap().holds());
        }
    }

    #[test]
    fn pushforward_roundtrip() {
        let xi = standard_character();
        let sigma =
            Permutation::from_cycles(11, &[&[1, 3, 2, 4], &[5, 6], &[7, 9, 10, 8]]).unwrap();
        let pushed = xi.pushforward(&sigma);
        assert_eq!(pushed.exponent(3), 1);
        assert_eq!(pushed.exponent(1), xi.exponent(4));
        assert_eq!(pushed.pushforward(&sigma.inverse()), xi);
        assert_eq!(xi.pushforward(&Permutation::identity(11)), xi);
    }

    #[test]
    fn inner_cyclic_is_equivariant() {
        let k = builtin_k();
        let xi = standard_character();
        let phi = Permutation::from_cycles(11, &[&[2, 9, 4], &[5, 11]]).unwrap();
        let verdict = is_inner_cyclic(&k, &xi, &gamma()).unwrap().holds();
        let moved = is_inner_cyclic(
            &k.relabel(&phi),
            &xi.pushforward(&phi),
            &gamma().relabel(&phi),
        )
        .unwrap()
        .holds();
        assert_eq!(verdict, moved);
    }

    #[test]
    fn condition_two_detects_nontrivial_point_line() {
        // gamma (5, 8, 9): lines 5, 8, 9 meet at one triple point, but line 8
        // has exponent 2 so conditions 1 and 2 both fire.
        let g = TriangleCycle::new(5, 8, 9).unwrap();
        let rep = is_inner_cyclic(&builtin_k(), &standard_character(), &g).unwrap();
        assert!(rep
            .failures
            .iter()
            .any(|f| matches!(f, InnerCyclicFailure::PointNotTrivial { line: 8, .. })));
    }

    #[test]
    fn degenerate_cycle_rejected() {
        assert!(TriangleCycle::new(5, 5, 11).is_err());
    }
}
