//! Monodromy factorizations of genus-1 Lefschetz fibrations.
//!
//! A positive word in `a`, `b` is rewritten as `a^N` followed by conjugates
//! `x·b^m·x⁻¹`. Each conjugate is a singular fiber of type `I_m` whose
//! vanishing cycle is the image of `b`'s curve under `x`; the `a^N` part is a
//! single `I_N` fiber along `a`'s curve.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::sl2::Sl2Matrix;
use crate::word::{eval_word, GenLetter, Word, WordError};

/// A primitive homology class on the torus, up to sign.
///
/// The first nonzero coordinate is kept positive, so equality of values is
/// isotopy of the underlying simple closed curves.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VanishingCycle {
    p: BigInt,
    q: BigInt,
}

impl VanishingCycle {
    pub fn new(p: BigInt, q: BigInt) -> Result<VanishingCycle, WordError> {
        if p.is_zero() && q.is_zero() {
            return Err(WordError::InvalidArgument("vanishing cycle cannot be zero".into()));
        }
        if !p.gcd(&q).is_one() {
            return Err(WordError::InvalidArgument(format!("({p}, {q}) is not primitive")));
        }
        let flip = p.is_negative() || (p.is_zero() && q.is_negative());
        Ok(if flip {
            VanishingCycle { p: -p, q: -q }
        } else {
            VanishingCycle { p, q }
        })
    }

    pub fn from_i64(p: i64, q: i64) -> Result<VanishingCycle, WordError> {
        VanishingCycle::new(BigInt::from(p), BigInt::from(q))
    }

    pub fn coords(&self) -> (&BigInt, &BigInt) {
        (&self.p, &self.q)
    }
}

impl fmt::Display for VanishingCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

impl Serialize for VanishingCycle {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        [crate::laurent::bigint_json(&self.p), crate::laurent::bigint_json(&self.q)].serialize(serializer)
    }
}

/// Curve of the Dehn twist `x·b·x⁻¹`: the image of `(0, 1)` under `x`.
pub fn vanishing_cycle_of_conjugate(conjugator: &Word) -> VanishingCycle {
    let [p, q] = eval_word(conjugator).apply(&[BigInt::zero(), BigInt::one()]);
    VanishingCycle::new(p, q).expect("SL(2,Z) maps primitive vectors to primitive vectors")
}

/// One block `x·b^m·x⁻¹` of a factorization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberBlock {
    conjugator: Word,
    multiplicity: u64,
    cycle: VanishingCycle,
}

impl FiberBlock {
    pub fn new(conjugator: Word, multiplicity: u64) -> Result<FiberBlock, WordError> {
        if multiplicity == 0 {
            return Err(WordError::InvalidArgument("block multiplicity must be positive".into()));
        }
        let cycle = vanishing_cycle_of_conjugate(&conjugator);
        Ok(FiberBlock { conjugator, multiplicity, cycle })
    }

    pub fn conjugator(&self) -> &Word {
        &self.conjugator
    }

    pub fn multiplicity(&self) -> u64 {
        self.multiplicity
    }

    pub fn cycle(&self) -> &VanishingCycle {
        &self.cycle
    }

    pub fn word(&self) -> Word {
        self.conjugator
            .concat(&Word::b().pow(self.multiplicity as i64))
            .concat(&self.conjugator.inverse())
    }
}

/// Singular fiber of type `I_k`; `I_1` is a fishtail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiberType {
    k: u64,
}

impl FiberType {
    pub fn new(k: u64) -> Result<FiberType, WordError> {
        if k == 0 {
            return Err(WordError::InvalidArgument("fiber type I_k needs k >= 1".into()));
        }
        Ok(FiberType { k })
    }

    pub fn k(self) -> u64 {
        self.k
    }

    pub fn is_fishtail(self) -> bool {
        self.k == 1
    }
}

impl fmt::Display for FiberType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "I_{}", self.k)
    }
}

impl Serialize for FiberType {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// `a^{a_power}` followed by the blocks, in order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorization {
    a_power: u64,
    blocks: Vec<FiberBlock>,
}

impl Factorization {
    pub fn new(a_power: u64, blocks: Vec<FiberBlock>) -> Factorization {
        Factorization { a_power, blocks }
    }

    pub fn a_power(&self) -> u64 {
        self.a_power
    }

    pub fn blocks(&self) -> &[FiberBlock] {
        &self.blocks
    }

    pub fn reassemble(&self) -> Word {
        self.blocks
            .iter()
            .fold(Word::a_pow(self.a_power as i64), |acc, blk| acc.concat(&blk.word()))
    }

    pub fn evaluate(&self) -> Sl2Matrix {
        eval_word(&self.reassemble())
    }

    pub fn twist_count(&self) -> u64 {
        self.a_power + self.blocks.iter().map(|b| b.multiplicity).sum::<u64>()
    }

    pub fn fiber_types(&self) -> Vec<FiberType> {
        fiber_decomposition(self)
    }

    pub fn perturb(&self, block_index: usize, k1: u64) -> Result<Factorization, WordError> {
        perturb_ik(self, block_index, k1)
    }
}

/// Moves every power of `a` to the front by conjugation.
///
/// A maximal run `b^m` with `t` letters `a` to its right becomes the block
/// `a^{-t}·b^m·a^{t}`, so the reassembled word is freely equal to `w`.
pub fn collect_a_powers(w: &Word) -> Result<Factorization, WordError> {
    if !w.is_positive() {
        return Err(WordError::UnsupportedInput(format!(
            "collect_a_powers needs a positive word, got {}",
            w.to_compact()
        )));
    }
    let total = w.a_exponent();
    let mut seen_a = 0i64;
    let mut blocks = Vec::new();
    let letters = w.letters();
    let mut i = 0;
    while i < letters.len() {
        match letters[i] {
            GenLetter::APos => {
                seen_a += 1;
                i += 1;
            }
            GenLetter::BPos => {
                let start = i;
                while i < letters.len() && letters[i] == GenLetter::BPos {
                    i += 1;
                }
                let t = total - seen_a;
                blocks.push(FiberBlock::new(Word::a_pow(-t), (i - start) as u64)?);
            }
            _ => unreachable!("positivity checked above"),
        }
    }
    Ok(Factorization::new(total as u64, blocks))
}

/// Singular fibers: one `I_N` for `a^N` (when `N ≥ 1`), then one `I_m` per block.
pub fn fiber_decomposition(f: &Factorization) -> Vec<FiberType> {
    let mut out = Vec::with_capacity(f.blocks.len() + 1);
    if f.a_power >= 1 {
        out.push(FiberType { k: f.a_power });
    }
    out.extend(f.blocks.iter().map(|b| FiberType { k: b.multiplicity }));
    out
}

/// Splits block `block_index` (an `I_k`) into adjacent `I_{k1}` and `I_{k-k1}`
/// with the same conjugator.
pub fn perturb_ik(f: &Factorization, block_index: usize, k1: u64) -> Result<Factorization, WordError> {
    let blk = f.blocks.get(block_index).ok_or(WordError::IndexOutOfRange {
        index: block_index,
        len: f.blocks.len(),
    })?;
    if k1 == 0 || k1 >= blk.multiplicity {
        return Err(WordError::InvalidSplit { multiplicity: blk.multiplicity, k1 });
    }
    let first = FiberBlock { multiplicity: k1, ..blk.clone() };
    let second = FiberBlock { multiplicity: blk.multiplicity - k1, ..blk.clone() };
    let mut blocks = f.blocks.clone();
    blocks.splice(block_index..=block_index, [first, second]);
    Ok(Factorization::new(f.a_power, blocks))
}

/// Euler characteristic of the total space over S²: the number of Dehn twists.
pub fn euler_from_twists(f: &Factorization) -> u64 {
    f.twist_count()
}
