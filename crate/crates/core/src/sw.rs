//! Formal Seiberg–Witten functions.
//!
//! A Seiberg–Witten function `Σ SW(K)·exp(K)` is kept as a product of
//! Laurent polynomials over pairwise disjoint variable sets, one variable per
//! lattice basis label (the fiber class and the exceptional classes). Knot
//! surgery multiplies the factor holding the fiber variable by `Δ(exp(2T))`,
//! each blow-up adds a factor `exp(E) + exp(-E)`, and a rational blow-down
//! keeps the classes that pass the chain's descent criterion.
//!
//! Keeping the product unexpanded lets 20+ blow-ups stay cheap: expansion is
//! only done for the handful of classes that survive a blow-down.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::lattice::{HomClass, Lattice, LatticeError};
use crate::laurent::{bigint_json, LaurentPoly, PolyError};
use crate::rbd::{DescentCriterion, PlumbingChain};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SwError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("no fiber variable designated")]
    MissingFiberVariable,
    #[error("variable '{0}' is already in use")]
    VariableInUse(String),
    #[error("polynomial is not conjugation symmetric")]
    NotSymmetric,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("{count} basic classes exceed the expansion limit {limit}")]
    TooLarge { count: u128, limit: u128 },
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Sign relating `SW(-K)` to `SW(K)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConjugationSign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl ConjugationSign {
    pub fn as_i8(self) -> i8 {
        match self {
            ConjugationSign::Plus => 1,
            ConjugationSign::Minus => -1,
        }
    }

    fn times(self, other: ConjugationSign) -> ConjugationSign {
        if self == other {
            ConjugationSign::Plus
        } else {
            ConjugationSign::Minus
        }
    }
}

fn detect_sign(p: &LaurentPoly) -> Option<ConjugationSign> {
    if p.is_conjugation_symmetric(1) {
        Some(ConjugationSign::Plus)
    } else if p.is_conjugation_symmetric(-1) {
        Some(ConjugationSign::Minus)
    } else {
        None
    }
}

/// Expansion limit for [`SwFunction::expand`].
pub const EXPANSION_LIMIT: u128 = 1 << 20;

#[derive(Debug, Clone)]
pub struct SwFunction {
    factors: Vec<LaurentPoly>,
    fiber: Option<String>,
    sign: ConjugationSign,
}

impl SwFunction {
    /// A single-factor function; the conjugation sign is read off the
    /// polynomial.
    pub fn new(poly: LaurentPoly, fiber: Option<&str>) -> Result<SwFunction, SwError> {
        let sign = if poly.is_zero() { ConjugationSign::Plus } else { detect_sign(&poly).ok_or(SwError::NotSymmetric)? };
        if let Some(f) = fiber {
            if !poly.vars().iter().any(|v| v == f) {
                return Err(SwError::InvalidArgument(format!("fiber variable '{f}' is not a variable")));
            }
        }
        Ok(SwFunction { factors: vec![poly], fiber: fiber.map(String::from), sign })
    }

    /// The function `1`, e.g. the K3 surface, with fiber variable `fiber`.
    pub fn unit(fiber: &str) -> SwFunction {
        let poly = LaurentPoly::constant(vec![fiber.into()], 1).expect("one variable");
        SwFunction { factors: vec![poly], fiber: Some(fiber.into()), sign: ConjugationSign::Plus }
    }

    pub fn fiber_var(&self) -> Option<&str> {
        self.fiber.as_deref()
    }

    pub fn factors(&self) -> &[LaurentPoly] {
        &self.factors
    }

    pub fn conjugation_sign(&self) -> ConjugationSign {
        self.sign
    }

    pub fn vars(&self) -> Vec<String> {
        self.factors.iter().flat_map(|f| f.vars().iter().cloned()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.factors.iter().any(|f| f.is_zero())
    }

    /// Number of basic classes.
    pub fn basic_class_count(&self) -> u128 {
        self.factors.iter().map(|f| f.len() as u128).product()
    }

    /// `SW` at the class with these exponents (ordered as [`SwFunction::vars`]).
    pub fn value(&self, exps: &[i64]) -> Result<BigInt, SwError> {
        let total: usize = self.factors.iter().map(|f| f.vars().len()).sum();
        if exps.len() != total {
            return Err(SwError::DimensionMismatch(format!("expected {total} exponents, got {}", exps.len())));
        }
        let mut offset = 0;
        let mut value = BigInt::one();
        for f in &self.factors {
            let n = f.vars().len();
            value *= f.coefficient(&exps[offset..offset + n]);
            offset += n;
        }
        Ok(value)
    }

    /// Value at the lexicographically largest basic class.
    pub fn top_value(&self) -> Option<BigInt> {
        self.factors
            .iter()
            .map(|f| f.leading_term().map(|(_, c)| c.clone()))
            .try_fold(BigInt::one(), |acc, c| c.map(|c| acc * c))
    }

    /// The product as one polynomial.
    pub fn expand(&self) -> Result<LaurentPoly, SwError> {
        let count = self.basic_class_count();
        if count > EXPANSION_LIMIT {
            return Err(SwError::TooLarge { count, limit: EXPANSION_LIMIT });
        }
        let mut iter = self.factors.iter();
        let first = iter.next().cloned().unwrap_or_else(|| LaurentPoly::constant(vec![], 1).unwrap());
        Ok(iter.fold(first, |acc, f| acc.mul(f)))
    }

    /// Basic classes with their values, in lexicographic order.
    pub fn basic_classes(&self) -> Result<Vec<(Vec<i64>, BigInt)>, SwError> {
        let p = self.expand()?;
        let vars = self.vars();
        let p = p.with_vars(&vars)?;
        Ok(p.terms().map(|(e, c)| (e.clone(), c.clone())).collect())
    }

    /// Checks `SW(-K) = sign·SW(K)` on every factor, with the factor signs
    /// multiplying to the stored sign.
    pub fn is_conjugation_symmetric(&self) -> bool {
        if self.is_zero() {
            return true;
        }
        let mut total = ConjugationSign::Plus;
        for f in &self.factors {
            match detect_sign(f) {
                Some(s) => total = total.times(s),
                None => return false,
            }
        }
        total == self.sign
    }

    fn ensure_fresh(&self, var: &str) -> Result<(), SwError> {
        if self.factors.iter().any(|f| f.vars().iter().any(|v| v == var)) {
            return Err(SwError::VariableInUse(var.into()));
        }
        Ok(())
    }

    /// Knot surgery along the fiber: multiplies by `Δ` with `t ↦ u²`, `u` the
    /// fiber variable.
    pub fn knot_surgery(&self, delta: &LaurentPoly) -> Result<SwFunction, SwError> {
        let fiber = self.fiber.as_deref().ok_or(SwError::MissingFiberVariable)?;
        let [t] = delta.vars() else {
            return Err(SwError::InvalidArgument("Alexander polynomial must be univariate".into()));
        };
        if !delta.is_conjugation_symmetric(1) {
            return Err(SwError::InvalidArgument("Alexander polynomial must be symmetric".into()));
        }
        if !delta.eval_at_one().is_one() {
            return Err(SwError::InvalidArgument("Alexander polynomial must satisfy Δ(1) = 1".into()));
        }
        let doubled = delta.substitute(t, fiber, 2)?;
        let mut factors = self.factors.clone();
        match factors.iter().position(|f| f.vars().iter().any(|v| v == fiber)) {
            Some(i) => {
                let vars = factors[i].vars().to_vec();
                factors[i] = factors[i].mul(&doubled).with_vars(&vars)?;
            }
            None => factors.push(doubled),
        }
        Ok(SwFunction { factors, fiber: self.fiber.clone(), sign: self.sign })
    }

    /// Blow-up formula: one factor `exp(E) + exp(-E)` per new label.
    pub fn blow_up(&self, labels: &[&str]) -> Result<SwFunction, SwError> {
        let mut out = self.clone();
        for &label in labels {
            out.ensure_fresh(label)?;
            out.factors.push(LaurentPoly::univariate(label, &[(1, 1), (-1, 1)]));
        }
        Ok(out)
    }

    /// Rewrites the values on the conjugate half so that `SW(-K) = sign·SW(K)`.
    /// A class `K` is in the conjugate half when its first nonzero exponent is
    /// negative. Expands the function.
    pub fn with_conjugation_sign(&self, sign: ConjugationSign) -> Result<SwFunction, SwError> {
        if sign == self.sign {
            return Ok(self.clone());
        }
        let p = self.expand()?.with_vars(&self.vars())?;
        let mut terms = Vec::with_capacity(p.len());
        for (e, c) in p.terms() {
            match e.iter().find(|&&x| x != 0) {
                None => {
                    if sign == ConjugationSign::Minus {
                        return Err(SwError::InvalidArgument(
                            "the zero class has a nonzero value, so SW(-K) = -SW(K) is impossible".into(),
                        ));
                    }
                    terms.push((e.clone(), c.clone()));
                }
                Some(&x) if x > 0 => terms.push((e.clone(), c.clone())),
                Some(_) => {
                    let neg: Vec<i64> = e.iter().map(|x| -x).collect();
                    let mirror = p.coefficient(&neg);
                    terms.push((e.clone(), if sign == ConjugationSign::Minus { -mirror } else { mirror }));
                }
            }
        }
        let poly = LaurentPoly::from_terms(p.vars().to_vec(), terms)?;
        Ok(SwFunction { factors: vec![poly], fiber: self.fiber.clone(), sign })
    }

    /// Keeps the basic classes `K` whose evaluations `⟨K, Sᵢ⟩` on the chain
    /// spheres pass [`DescentCriterion`]. Every variable must be a basis
    /// label of `lattice`. Values are unchanged; the result is expanded over
    /// the variables that occur in some surviving class.
    pub fn rational_blowdown(
        &self,
        chain: &PlumbingChain,
        sphere_classes: &[HomClass],
        lattice: &Lattice,
    ) -> Result<SwFunction, SwError> {
        if sphere_classes.len() != chain.len() {
            return Err(SwError::DimensionMismatch(format!(
                "{} sphere classes for a chain of length {}",
                sphere_classes.len(),
                chain.len()
            )));
        }
        let criterion = DescentCriterion::new(chain);
        let search = DescentSearch::new(&criterion)?;

        // per-factor evaluation images
        let mut groups: Vec<Group> = Vec::new();
        for f in &self.factors {
            let columns = f
                .vars()
                .iter()
                .map(|v| {
                    let b = lattice.basis(v)?;
                    sphere_classes.iter().map(|s| lattice.pairing(&b, s)).collect::<Result<Vec<i64>, _>>()
                })
                .collect::<Result<Vec<_>, LatticeError>>()?;
            let mut images: BTreeMap<Vec<i64>, Vec<Partial>> = BTreeMap::new();
            for (e, c) in f.terms() {
                let mut v = vec![0i64; chain.len()];
                for (x, col) in e.iter().zip(&columns) {
                    for (vi, ci) in v.iter_mut().zip(col) {
                        *vi += x * ci;
                    }
                }
                images.entry(v).or_default().push(Partial { exps: e.clone(), coef: c.clone() });
            }
            let group = Group { images: images.into_iter().collect() };
            match groups.last_mut() {
                Some(last)
                    if last.images.len() * group.images.len() <= MERGE_CAP
                        && last.partials() * group.partials() <= PARTIAL_CAP =>
                {
                    *last = last.merge(&group);
                }
                _ => groups.push(group),
            }
        }

        let survivors = search.run(&groups);
        let vars = self.vars();
        let mut terms: Vec<(Vec<i64>, BigInt)> = Vec::new();
        for choice in survivors {
            let mut partial = vec![Partial { exps: Vec::new(), coef: BigInt::one() }];
            for (g, &idx) in groups.iter().zip(&choice) {
                let mut next = Vec::with_capacity(partial.len() * g.images[idx].1.len());
                for a in &partial {
                    for b in &g.images[idx].1 {
                        let mut exps = a.exps.clone();
                        exps.extend_from_slice(&b.exps);
                        next.push(Partial { exps, coef: &a.coef * &b.coef });
                    }
                }
                partial = next;
            }
            terms.extend(partial.into_iter().map(|p| (p.exps, p.coef)));
        }
        let full = LaurentPoly::from_terms(vars.clone(), terms)?;
        let kept: Vec<String> = vars
            .iter()
            .enumerate()
            .filter(|&(i, _)| full.terms().any(|(e, _)| e[i] != 0))
            .map(|(_, v)| v.clone())
            .collect();
        let poly = full.with_vars(&kept)?;
        let fiber = self.fiber.clone().filter(|f| kept.contains(f));
        Ok(SwFunction { factors: vec![poly], fiber, sign: self.sign })
    }

    /// Multiset of nonzero values.
    pub fn fingerprint(&self) -> Fingerprint {
        if self.is_zero() {
            return Fingerprint::default();
        }
        let mut counts: BTreeMap<BigInt, u128> = BTreeMap::new();
        counts.insert(BigInt::one(), 1);
        for f in &self.factors {
            let mut next: BTreeMap<BigInt, u128> = BTreeMap::new();
            for (v, n) in &counts {
                for (_, c) in f.terms() {
                    *next.entry(v * c).or_insert(0) += n;
                }
            }
            counts = next;
        }
        Fingerprint(counts)
    }
}

/// Equality as functions (after expansion when the factorisations differ).
impl PartialEq for SwFunction {
    fn eq(&self, other: &SwFunction) -> bool {
        if self.factors == other.factors {
            return true;
        }
        match (self.expand(), other.expand()) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        }
    }
}

impl Serialize for SwFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("SwFunction", 4)?;
        st.serialize_field("fiber", &self.fiber)?;
        st.serialize_field("conjugation_sign", &self.sign)?;
        st.serialize_field("basic_class_count", &self.basic_class_count().to_string())?;
        st.serialize_field("factors", &self.factors)?;
        st.end()
    }
}

/// Sorted multiset of nonzero SW values, as `value → multiplicity`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Fingerprint(pub BTreeMap<BigInt, u128>);

impl Fingerprint {
    pub fn total(&self) -> u128 {
        self.0.values().sum()
    }

    /// Every value listed with repetition; `None` past `limit` entries.
    pub fn values(&self, limit: usize) -> Option<Vec<BigInt>> {
        if self.total() > limit as u128 {
            return None;
        }
        Some(self.0.iter().flat_map(|(v, &n)| std::iter::repeat_n(v.clone(), n as usize)).collect())
    }
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = match self.values(16) {
            Some(vals) => vals.iter().map(|v| v.to_string()).collect(),
            None => self.0.iter().map(|(v, n)| format!("{v} ×{n}")).collect(),
        };
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl Serialize for Fingerprint {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let entries: Vec<serde_json::Value> = self
            .0
            .iter()
            .map(|(v, n)| serde_json::json!({ "value": bigint_json(v), "count": n.to_string() }))
            .collect();
        entries.serialize(serializer)
    }
}

/// Alexander polynomial of the `n`-twist knot: `n·t - (2n-1) + n·t⁻¹`.
pub fn alexander_twist(n: u64) -> Result<LaurentPoly, SwError> {
    if n < 1 {
        return Err(SwError::InvalidArgument("twist knot needs n >= 1".into()));
    }
    let n = i64::try_from(n).map_err(|_| SwError::Overflow("n too large".into()))?;
    Ok(LaurentPoly::univariate("t", &[(1, n), (0, -(2 * n - 1)), (-1, n)]))
}

pub fn knot_surgery(sw: &SwFunction, delta: &LaurentPoly) -> Result<SwFunction, SwError> {
    sw.knot_surgery(delta)
}

/// Blows up `count` times with fresh labels `E1, E2, …` (skipping used ones).
pub fn blow_up_sw(sw: &SwFunction, count: usize) -> Result<SwFunction, SwError> {
    let used = sw.vars();
    let labels: Vec<String> = (1..)
        .map(|k| format!("E{k}"))
        .filter(|l| !used.contains(l))
        .take(count)
        .collect();
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    sw.blow_up(&refs)
}

pub fn rational_blowdown_sw(
    sw: &SwFunction,
    chain: &PlumbingChain,
    sphere_classes: &[HomClass],
    lattice: &Lattice,
) -> Result<SwFunction, SwError> {
    sw.rational_blowdown(chain, sphere_classes, lattice)
}

pub fn fingerprint(sw: &SwFunction) -> Fingerprint {
    sw.fingerprint()
}

const MERGE_CAP: usize = 1024;
const PARTIAL_CAP: usize = 1 << 12;

#[derive(Debug, Clone)]
struct Partial {
    exps: Vec<i64>,
    coef: BigInt,
}

/// Terms of one or more consecutive factors, bucketed by their evaluation
/// vector on the chain.
#[derive(Debug, Clone)]
struct Group {
    images: Vec<(Vec<i64>, Vec<Partial>)>,
}

impl Group {
    fn partials(&self) -> usize {
        self.images.iter().map(|(_, p)| p.len()).sum()
    }

    fn merge(&self, other: &Group) -> Group {
        let mut images: BTreeMap<Vec<i64>, Vec<Partial>> = BTreeMap::new();
        for (va, pa) in &self.images {
            for (vb, pb) in &other.images {
                let v: Vec<i64> = va.iter().zip(vb).map(|(x, y)| x + y).collect();
                let bucket = images.entry(v).or_default();
                for a in pa {
                    for b in pb {
                        let mut exps = a.exps.clone();
                        exps.extend_from_slice(&b.exps);
                        bucket.push(Partial { exps, coef: &a.coef * &b.coef });
                    }
                }
            }
        }
        Group { images: images.into_iter().collect() }
    }
}

/// Depth-first search over one image per group, tracking `v`, `adj·v` and
/// `vᵀ·adj·v` incrementally in `i128`. The group with the most images is
/// visited last, where only the quadratic value is updated (from the sparse
/// image) and parity is checked on a match.
struct DescentSearch {
    adj: Vec<Vec<i128>>,
    target: i128,
    parity: Vec<i64>,
}

struct Image {
    nonzero: Vec<(usize, i64)>,
    adj_v: Vec<i128>,
    quad: i128,
}

struct State {
    v: Vec<i64>,
    adj_v: Vec<i128>,
    quad: i128,
}

impl State {
    fn cross(&self, img: &Image) -> i128 {
        img.nonzero.iter().map(|&(i, x)| x as i128 * self.adj_v[i]).sum()
    }

    fn push(&mut self, img: &Image) {
        self.quad += 2 * self.cross(img) + img.quad;
        for &(i, x) in &img.nonzero {
            self.v[i] += x;
        }
        for (a, b) in self.adj_v.iter_mut().zip(&img.adj_v) {
            *a += b;
        }
    }

    fn pop(&mut self, img: &Image) {
        for &(i, x) in &img.nonzero {
            self.v[i] -= x;
        }
        for (a, b) in self.adj_v.iter_mut().zip(&img.adj_v) {
            *a -= b;
        }
        self.quad -= 2 * self.cross(img) + img.quad;
    }
}

impl DescentSearch {
    fn new(criterion: &DescentCriterion) -> Result<DescentSearch, SwError> {
        let to_i128 = |x: &BigInt| x.to_i128().ok_or_else(|| SwError::Overflow("adjugate entry exceeds i128".into()));
        let adj = criterion
            .adjugate()
            .iter()
            .map(|r| r.iter().map(to_i128).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(DescentSearch {
            adj,
            target: to_i128(&criterion.target())?,
            parity: criterion.chain().coefficients().to_vec(),
        })
    }

    fn image(&self, v: &[i64]) -> Image {
        let adj_v: Vec<i128> = self
            .adj
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, &x)| a * x as i128).sum())
            .collect();
        let quad = adj_v.iter().zip(v).map(|(a, &x)| a * x as i128).sum();
        let nonzero = v.iter().enumerate().filter(|&(_, &x)| x != 0).map(|(i, &x)| (i, x)).collect();
        Image { nonzero, adj_v, quad }
    }

    fn characteristic(&self, v: &[i64], extra: Option<&Image>) -> bool {
        let mut v = v.to_vec();
        if let Some(img) = extra {
            for &(i, x) in &img.nonzero {
                v[i] += x;
            }
        }
        v.iter().zip(&self.parity).all(|(v, c)| (v - c).rem_euclid(2) == 0)
    }

    /// Returns, per surviving combination, the chosen image index of every
    /// group (in the original group order), sorted.
    fn run(&self, groups: &[Group]) -> Vec<Vec<usize>> {
        let n = self.parity.len();
        let mut state = State { v: vec![0; n], adj_v: vec![0; n], quad: 0 };
        let mut found = Vec::new();
        if groups.is_empty() {
            if state.quad == self.target && self.characteristic(&state.v, None) {
                found.push(Vec::new());
            }
            return found;
        }
        let images: Vec<Vec<Image>> =
            groups.iter().map(|g| g.images.iter().map(|(v, _)| self.image(v)).collect()).collect();
        let last = (0..groups.len()).max_by_key(|&g| (images[g].len(), g)).unwrap_or(0);
        let mut order: Vec<usize> = (0..groups.len()).filter(|&g| g != last).collect();
        order.push(last);
        let mut choice = vec![0; groups.len()];
        self.descend(&images, &order, &mut state, &mut choice, &mut found);
        found.sort();
        found
    }

    fn descend(
        &self,
        images: &[Vec<Image>],
        order: &[usize],
        state: &mut State,
        choice: &mut Vec<usize>,
        found: &mut Vec<Vec<usize>>,
    ) {
        let (&g, rest) = order.split_first().expect("order is never empty here");
        if rest.is_empty() {
            for (idx, img) in images[g].iter().enumerate() {
                if state.quad + 2 * state.cross(img) + img.quad == self.target
                    && self.characteristic(&state.v, Some(img))
                {
                    choice[g] = idx;
                    found.push(choice.clone());
                }
            }
            return;
        }
        for (idx, img) in images[g].iter().enumerate() {
            state.push(img);
            choice[g] = idx;
            self.descend(images, rest, state, choice, found);
            state.pop(img);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z_n(n: u64) -> SwFunction {
        let delta = alexander_twist(n).unwrap();
        let mut sw = SwFunction::unit("T");
        for _ in 0..3 {
            sw = sw.knot_surgery(&delta).unwrap();
        }
        sw
    }

    #[test]
    fn twist_knot_polynomials() {
        assert_eq!(alexander_twist(1).unwrap(), LaurentPoly::univariate("t", &[(1, 1), (0, -1), (-1, 1)]));
        assert_eq!(alexander_twist(2).unwrap(), LaurentPoly::univariate("t", &[(1, 2), (0, -3), (-1, 2)]));
        for n in 1..=100 {
            let d = alexander_twist(n).unwrap();
            assert!(d.eval_at_one().is_one());
            assert!(d.is_conjugation_symmetric(1));
        }
        assert!(alexander_twist(0).is_err());
    }

    #[test]
    fn triple_surgery_n1() {
        let sw = z_n(1);
        let p = sw.expand().unwrap();
        let coeffs: Vec<i64> =
            [6, 4, 2, 0, -2, -4, -6].iter().map(|&k| p.coefficient(&[k]).to_i64().unwrap()).collect();
        assert_eq!(coeffs, vec![1, -3, 6, -7, 6, -3, 1]);
    }

    #[test]
    fn triple_surgery_general_n() {
        for n in 1..=20u64 {
            let p = z_n(n).expand().unwrap();
            let n = BigInt::from(n);
            assert_eq!(p.coefficient(&[6]), &n * &n * &n);
            assert!(p.is_conjugation_symmetric(1));
        }
    }

    #[test]
    fn unknot_surgery_is_identity() {
        let sw = z_n(2);
        let unknot = LaurentPoly::univariate("t", &[(0, 1)]);
        assert_eq!(sw.knot_surgery(&unknot).unwrap(), sw);
    }

    #[test]
    fn surgery_validation() {
        let sw = z_n(1);
        assert!(sw.knot_surgery(&LaurentPoly::univariate("t", &[(1, 1)])).is_err());
        assert!(sw.knot_surgery(&LaurentPoly::univariate("t", &[(1, 1), (-1, 1)])).is_err());
        let no_fiber = SwFunction::new(LaurentPoly::constant(vec!["x".into()], 1).unwrap(), None).unwrap();
        assert_eq!(no_fiber.knot_surgery(&alexander_twist(1).unwrap()), Err(SwError::MissingFiberVariable));
    }

    #[test]
    fn blow_ups_double_classes() {
        let sw = z_n(2);
        assert_eq!(sw.basic_class_count(), 7);
        let b1 = blow_up_sw(&sw, 1).unwrap();
        assert_eq!(b1.basic_class_count(), 14);
        let b5 = blow_up_sw(&sw, 5).unwrap();
        assert_eq!(b5.basic_class_count(), 7 * 32);
        assert_eq!(b5.vars(), ["T", "E1", "E2", "E3", "E4", "E5"]);
        assert_eq!(b5.value(&[6, 1, 1, 1, 1, 1]).unwrap(), BigInt::from(8));
        for signs in 0..32 {
            let mut e = vec![6];
            e.extend((0..5).map(|i| if signs >> i & 1 == 1 { 1 } else { -1 }));
            assert_eq!(b5.value(&e).unwrap(), BigInt::from(8));
        }
        assert_eq!(b5.top_value(), Some(BigInt::from(8)));
        assert!(b5.is_conjugation_symmetric());
        assert!(matches!(b5.blow_up(&["E1"]), Err(SwError::VariableInUse(_))));
    }

    #[test]
    fn fingerprint_of_blown_up_function() {
        let fp = blow_up_sw(&z_n(1), 2).unwrap().fingerprint();
        // values of (u² - 1 + u⁻²)³ times four sign choices
        assert_eq!(fp.total(), 28);
        assert_eq!(fp.0.get(&BigInt::from(-7)), Some(&4));
        assert_eq!(Fingerprint::default().to_string(), "{}");
    }

    #[test]
    fn conjugation_sign_rewrite() {
        let p = LaurentPoly::univariate("T", &[(1, 5), (-1, 5)]);
        let sw = SwFunction::new(p, Some("T")).unwrap();
        let flipped = sw.with_conjugation_sign(ConjugationSign::Minus).unwrap();
        assert_eq!(flipped.value(&[1]).unwrap(), BigInt::from(5));
        assert_eq!(flipped.value(&[-1]).unwrap(), BigInt::from(-5));
        assert!(flipped.is_conjugation_symmetric());
        assert_eq!(flipped.fingerprint().to_string(), "{-5, 5}");
        assert!(SwFunction::unit("T").with_conjugation_sign(ConjugationSign::Minus).is_err());
        assert!(SwFunction::new(LaurentPoly::univariate("T", &[(1, 1)]), None).is_err());
    }
}
