//! Rational blow-down arithmetic.
//!
//! `C_{p,q}` is the linear plumbing whose framings are the negated
//! Hirzebruch–Jung expansion of `p²/(pq-1)`. Its boundary is the lens space
//! `L(p², pq-1)`, which also bounds a rational ball `B_{p,q}`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg;
use crate::topo::CharNumbersDelta;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RbdError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("not a plumbing chain: {0}")]
    NotAChain(String),
    #[error("evaluation vector has length {got}, chain has length {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("chain {0} is not of the form C_(p,q)")]
    Unidentifiable(String),
}

/// A linear plumbing of spheres, listed by self-intersection (each `≤ -2`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct PlumbingChain(Vec<i64>);

impl PlumbingChain {
    pub fn new(coefficients: Vec<i64>) -> Result<PlumbingChain, RbdError> {
        if coefficients.is_empty() {
            return Err(RbdError::NotAChain("empty chain".into()));
        }
        if let Some(c) = coefficients.iter().find(|&&c| c > -2) {
            return Err(RbdError::NotAChain(format!("coefficient {c} is greater than -2")));
        }
        Ok(PlumbingChain(coefficients))
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Space-separated list, e.g. `-18 -2 -2`.
    pub fn to_list_string(&self) -> String {
        self.0.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
    }
}

impl TryFrom<Vec<i64>> for PlumbingChain {
    type Error = RbdError;

    fn try_from(v: Vec<i64>) -> Result<Self, RbdError> {
        PlumbingChain::new(v)
    }
}

impl From<PlumbingChain> for Vec<i64> {
    fn from(c: PlumbingChain) -> Vec<i64> {
        c.0
    }
}

/// Runs of equal entries are written `c ×k`, e.g. `-18 -2 ×14`.
impl fmt::Display for PlumbingChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let j = self.0[i..].iter().take_while(|&&c| c == self.0[i]).count() + i;
            if j - i > 1 {
                parts.push(format!("{} ×{}", self.0[i], j - i));
            } else {
                parts.push(self.0[i].to_string());
            }
            i = j;
        }
        write!(f, "{}", parts.join(" "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawCpq")]
pub struct CpqLabel {
    p: u64,
    q: u64,
}

#[derive(Deserialize)]
struct RawCpq {
    p: u64,
    q: u64,
}

impl TryFrom<RawCpq> for CpqLabel {
    type Error = RbdError;

    fn try_from(r: RawCpq) -> Result<CpqLabel, RbdError> {
        CpqLabel::new(r.p, r.q)
    }
}

impl CpqLabel {
    pub fn new(p: u64, q: u64) -> Result<CpqLabel, RbdError> {
        if p < 2 || q < 1 || q >= p {
            return Err(RbdError::InvalidInput(format!("need p >= 2 and 1 <= q < p, got ({p}, {q})")));
        }
        if p.gcd(&q) != 1 {
            return Err(RbdError::InvalidInput(format!("p = {p} and q = {q} are not coprime")));
        }
        Ok(CpqLabel { p, q })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }
}

impl fmt::Display for CpqLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C({},{})", self.p, self.q)
    }
}

/// Hirzebruch–Jung expansion `n/d = c₁ - 1/(c₂ - 1/(… - 1/c_k))`, all `cᵢ ≥ 2`.
pub fn hj_expansion(numerator: u64, denominator: u64) -> Result<Vec<u64>, RbdError> {
    if denominator < 1 || numerator <= denominator {
        return Err(RbdError::InvalidInput(format!(
            "need numerator > denominator >= 1, got {numerator}/{denominator}"
        )));
    }
    if numerator.gcd(&denominator) != 1 {
        return Err(RbdError::InvalidInput(format!("{numerator}/{denominator} is not reduced")));
    }
    let (mut n, mut d) = (numerator as u128, denominator as u128);
    let mut out = Vec::new();
    while d > 0 {
        let c = n.div_ceil(d);
        out.push(c as u64);
        (n, d) = (d, c * d - n);
    }
    Ok(out)
}

/// Value of `c₁ - 1/(c₂ - 1/(… - 1/c_k))` as a reduced fraction `(N, D)`.
pub fn hj_fraction(coefficients: &[i64]) -> Option<(BigInt, BigInt)> {
    let (last, rest) = coefficients.split_last()?;
    let mut num = BigInt::from(*last);
    let mut den = BigInt::one();
    for &c in rest.iter().rev() {
        if num.is_zero() {
            return None;
        }
        let next = BigInt::from(c) * &num - &den;
        den = num;
        num = next;
    }
    let g = num.gcd(&den);
    if g.is_zero() {
        return None;
    }
    if den.is_negative() {
        num = -num;
        den = -den;
    }
    Some((num / &g, den / &g))
}

/// The chain of `C_{p,q}`: the negated expansion of `p²/(pq-1)`.
pub fn cpq_chain(label: CpqLabel) -> Result<PlumbingChain, RbdError> {
    let (p, q) = (label.p, label.q);
    let num = p.checked_mul(p).ok_or_else(|| RbdError::InvalidInput(format!("p = {p} too large")))?;
    let expansion = hj_expansion(num, p * q - 1)?;
    PlumbingChain::new(expansion.into_iter().map(|c| -(c as i64)).collect())
}

/// Recognises `C_{p,q}` from its chain: the fraction `N/D` of the negated
/// chain must have `N = p²` and `D = pq - 1`.
pub fn identify_cpq(chain: &PlumbingChain) -> Option<CpqLabel> {
    let negated: Vec<i64> = chain.0.iter().map(|c| -c).collect();
    let (num, den) = hj_fraction(&negated)?;
    if !num.is_positive() {
        return None;
    }
    let p = num.sqrt();
    if &p * &p != num {
        return None;
    }
    let (q, r) = (den + 1u32).div_rem(&p);
    if !r.is_zero() {
        return None;
    }
    CpqLabel::new(p.to_u64()?, q.to_u64()?).ok()
}

/// Intersection matrix of the plumbing: tridiagonal with the framings on the
/// diagonal and 1 off the diagonal.
pub fn chain_matrix(chain: &PlumbingChain) -> Vec<Vec<i64>> {
    let n = chain.len();
    let mut m = vec![vec![0i64; n]; n];
    for (i, &c) in chain.0.iter().enumerate() {
        m[i][i] = c;
        if i + 1 < n {
            m[i][i + 1] = 1;
            m[i + 1][i] = 1;
        }
    }
    m
}

/// Descent test for one chain, with the inverse intersection form cached as
/// an integer adjugate.
///
/// A class descends when it is characteristic on the chain and its
/// restriction has square `-len`, i.e. `vᵀ·adj·v = -len · det`.
#[derive(Debug, Clone)]
pub struct DescentCriterion {
    chain: PlumbingChain,
    adjugate: Vec<Vec<BigInt>>,
    det: BigInt,
}

impl DescentCriterion {
    pub fn new(chain: &PlumbingChain) -> DescentCriterion {
        let m = chain_matrix(chain);
        // chains with entries <= -2 are negative definite, hence invertible
        let (adjugate, det) = linalg::adjugate(&m).expect("plumbing chain matrix is nonsingular");
        DescentCriterion { chain: chain.clone(), adjugate, det }
    }

    pub fn chain(&self) -> &PlumbingChain {
        &self.chain
    }

    pub fn adjugate(&self) -> &[Vec<BigInt>] {
        &self.adjugate
    }

    pub fn determinant(&self) -> &BigInt {
        &self.det
    }

    /// Target value of `vᵀ·adj·v`.
    pub fn target(&self) -> BigInt {
        -BigInt::from(self.chain.len()) * &self.det
    }

    pub fn is_characteristic(&self, evaluations: &[i64]) -> bool {
        evaluations.iter().zip(&self.chain.0).all(|(v, c)| (v - c).rem_euclid(2) == 0)
    }

    pub fn scaled_square(&self, evaluations: &[i64]) -> BigInt {
        let mut total = BigInt::zero();
        for (i, &vi) in evaluations.iter().enumerate() {
            if vi == 0 {
                continue;
            }
            let row: BigInt = self.adjugate[i]
                .iter()
                .zip(evaluations)
                .filter(|(_, &vj)| vj != 0)
                .map(|(a, &vj)| a * vj)
                .sum();
            total += row * vi;
        }
        total
    }

    pub fn check(&self, evaluations: &[i64]) -> Result<bool, RbdError> {
        if evaluations.len() != self.chain.len() {
            return Err(RbdError::LengthMismatch { expected: self.chain.len(), got: evaluations.len() });
        }
        Ok(self.is_characteristic(evaluations) && self.scaled_square(evaluations) == self.target())
    }
}

/// `vᵀ·M⁻¹·v` by an exact rational solve of `M·x = v`.
pub fn restriction_square(chain: &PlumbingChain, evaluations: &[i64]) -> Result<BigRational, RbdError> {
    if evaluations.len() != chain.len() {
        return Err(RbdError::LengthMismatch { expected: chain.len(), got: evaluations.len() });
    }
    let x = linalg::solve(&chain_matrix(chain), evaluations).expect("plumbing chain matrix is nonsingular");
    Ok(x.iter()
        .zip(evaluations)
        .map(|(xi, &vi)| xi * BigRational::from_integer(BigInt::from(vi)))
        .sum())
}

/// Whether a class with the given evaluations on the chain spheres survives
/// the rational blow-down.
pub fn descends(chain: &PlumbingChain, evaluations: &[i64]) -> Result<bool, RbdError> {
    if evaluations.len() != chain.len() {
        return Err(RbdError::LengthMismatch { expected: chain.len(), got: evaluations.len() });
    }
    let characteristic = evaluations.iter().zip(&chain.0).all(|(v, c)| (v - c).rem_euclid(2) == 0);
    if !characteristic {
        return Ok(false);
    }
    let square = restriction_square(chain, evaluations)?;
    Ok(square == BigRational::from_integer(-BigInt::from(chain.len())))
}

/// Replacing a negative-definite `C_{p,q}` (rank = chain length) by a rational
/// ball with `e = 1`, `σ = 0`.
pub fn blow_down_char_effect(chain: &PlumbingChain) -> Result<CharNumbersDelta, RbdError> {
    identify_cpq(chain).ok_or_else(|| RbdError::Unidentifiable(chain.to_string()))?;
    let len = chain.len() as i64;
    Ok(CharNumbersDelta { e: -len, sigma: len, b2_plus: 0, b2_minus: -len })
}
