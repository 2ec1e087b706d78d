//! Sparse multivariate Laurent polynomials with integer coefficients.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("exponent vector has length {got}, expected {expected}")]
    Arity { expected: usize, got: usize },
    #[error("duplicate variable '{0}'")]
    DuplicateVariable(String),
    #[error("variable '{0}' is not available in the target variable list")]
    MissingVariable(String),
}

/// `Σ c_v · x^v` over an ordered list of variable labels. Zero coefficients
/// are never stored; terms iterate in lexicographic exponent order.
#[derive(Debug, Clone)]
pub struct LaurentPoly {
    vars: Vec<String>,
    terms: BTreeMap<Vec<i64>, BigInt>,
}

fn check_distinct(vars: &[String]) -> Result<(), PolyError> {
    for (i, v) in vars.iter().enumerate() {
        if vars[..i].contains(v) {
            return Err(PolyError::DuplicateVariable(v.clone()));
        }
    }
    Ok(())
}

impl LaurentPoly {
    pub fn zero(vars: Vec<String>) -> Result<LaurentPoly, PolyError> {
        check_distinct(&vars)?;
        Ok(LaurentPoly { vars, terms: BTreeMap::new() })
    }

    pub fn constant(vars: Vec<String>, c: impl Into<BigInt>) -> Result<LaurentPoly, PolyError> {
        let exps = vec![0; vars.len()];
        LaurentPoly::from_terms(vars, [(exps, c.into())])
    }

    /// Sums the given terms; repeated exponents accumulate.
    pub fn from_terms<I>(vars: Vec<String>, terms: I) -> Result<LaurentPoly, PolyError>
    where
        I: IntoIterator<Item = (Vec<i64>, BigInt)>,
    {
        let mut p = LaurentPoly::zero(vars)?;
        for (exps, c) in terms {
            if exps.len() != p.vars.len() {
                return Err(PolyError::Arity { expected: p.vars.len(), got: exps.len() });
            }
            p.add_term(exps, c);
        }
        Ok(p)
    }

    /// Univariate `Σ c_k t^k` from `(k, c_k)` pairs.
    pub fn univariate(var: &str, terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(vec![var.into()], terms.iter().map(|&(k, c)| (vec![k], BigInt::from(c))))
            .expect("single variable")
    }

    fn add_term(&mut self, exps: Vec<i64>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[i64]) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Re-indexes onto `target`, which must contain every variable that has a
    /// nonzero exponent somewhere.
    pub fn with_vars(&self, target: &[String]) -> Result<LaurentPoly, PolyError> {
        check_distinct(target)?;
        let mut slot = Vec::with_capacity(self.vars.len());
        for (i, v) in self.vars.iter().enumerate() {
            match target.iter().position(|t| t == v) {
                Some(j) => slot.push(Some(j)),
                None if self.terms.keys().all(|e| e[i] == 0) => slot.push(None),
                None => return Err(PolyError::MissingVariable(v.clone())),
            }
        }
        let terms = self.terms.iter().map(|(e, c)| {
            let mut out = vec![0; target.len()];
            for (i, s) in slot.iter().enumerate() {
                if let Some(j) = s {
                    out[*j] = e[i];
                }
            }
            (out, c.clone())
        });
        LaurentPoly::from_terms(target.to_vec(), terms)
    }

    fn union_vars(&self, other: &LaurentPoly) -> Vec<String> {
        let mut vars = self.vars.clone();
        for v in &other.vars {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
        vars
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let vars = self.union_vars(other);
        let a = self.with_vars(&vars).expect("superset");
        let b = other.with_vars(&vars).expect("superset");
        LaurentPoly::from_terms(vars, a.terms.into_iter().chain(b.terms)).expect("aligned")
    }

    /// Product; variables are the union, in first-appearance order.
    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let vars = self.union_vars(other);
        let a = self.with_vars(&vars).expect("superset");
        let b = other.with_vars(&vars).expect("superset");
        let mut acc: HashMap<Vec<i64>, BigInt> = HashMap::new();
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Vec<i64> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                *acc.entry(e).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        LaurentPoly::from_terms(vars, acc).expect("aligned")
    }

    pub fn pow(&self, k: u32) -> LaurentPoly {
        let one = LaurentPoly::constant(self.vars.clone(), 1).expect("distinct");
        (0..k).fold(one, |acc, _| acc.mul(self))
    }

    /// Substitutes `var ↦ new_var^scale`.
    pub fn substitute(&self, var: &str, new_var: &str, scale: i64) -> Result<LaurentPoly, PolyError> {
        let i = self.vars.iter().position(|v| v == var).ok_or_else(|| PolyError::MissingVariable(var.into()))?;
        let mut vars = self.vars.clone();
        vars[i] = new_var.into();
        let terms = self.terms.iter().map(|(e, c)| {
            let mut e = e.clone();
            e[i] *= scale;
            (e, c.clone())
        });
        LaurentPoly::from_terms(vars, terms)
    }

    /// Value with every variable set to 1.
    pub fn eval_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Whether `c(-v) = sign · c(v)` for every exponent vector `v`.
    pub fn is_conjugation_symmetric(&self, sign: i8) -> bool {
        self.terms.iter().all(|(e, c)| {
            let neg: Vec<i64> = e.iter().map(|x| -x).collect();
            let expected = if sign >= 0 { c.clone() } else { -c };
            self.coefficient(&neg) == expected
        })
    }

    /// Terms keyed by `(variable, exponent)` pairs with zero exponents
    /// dropped, variables sorted. Independent of variable order.
    pub fn canonical_terms(&self) -> BTreeMap<Vec<(String, i64)>, BigInt> {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut key: Vec<(String, i64)> = self
                    .vars
                    .iter()
                    .zip(e)
                    .filter(|(_, &x)| x != 0)
                    .map(|(v, &x)| (v.clone(), x))
                    .collect();
                key.sort();
                (key, c.clone())
            })
            .collect()
    }

    /// Largest term in lexicographic exponent order.
    pub fn leading_term(&self) -> Option<(&Vec<i64>, &BigInt)> {
        self.terms.iter().next_back()
    }
}

/// Equality as functions: variable order and unused variables do not matter.
impl PartialEq for LaurentPoly {
    fn eq(&self, other: &LaurentPoly) -> bool {
        self.canonical_terms() == other.canonical_terms()
    }
}

impl Eq for LaurentPoly {}

pub(crate) fn bigint_json(x: &BigInt) -> serde_json::Value {
    match x.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(x.to_string()),
    }
}

struct TermList<'a>(&'a BTreeMap<Vec<i64>, BigInt>);

impl Serialize for TermList<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
        for (e, c) in self.0 {
            seq.serialize_element(&(e, bigint_json(c)))?;
        }
        seq.end()
    }
}

/// `{"vars": [...], "terms": [[exponents, coefficient], ...]}` in
/// lexicographic exponent order.
impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("LaurentPoly", 2)?;
        st.serialize_field("vars", &self.vars)?;
        st.serialize_field("terms", &TermList(&self.terms))?;
        st.end()
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = self
                .vars
                .iter()
                .zip(e)
                .filter(|(_, &x)| x != 0)
                .map(|(v, &x)| if x == 1 { v.clone() } else { format!("{v}^{x}") })
                .collect();
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", mono.join("·"))?;
            } else {
                write!(f, "{mag}·{}", mono.join("·"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t_poly(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::univariate("t", terms)
    }

    #[test]
    fn zero_terms_are_dropped() {
        let p = t_poly(&[(1, 1), (1, -1), (0, 3)]);
        assert_eq!(p.len(), 1);
        assert_eq!(p.coefficient(&[0]), BigInt::from(3));
        let q = p.add(&t_poly(&[(0, -3)]));
        assert!(q.is_zero());
    }

    #[test]
    fn multiplication_aligns_variables() {
        let p = t_poly(&[(1, 1), (-1, 1)]);
        let e = LaurentPoly::univariate("e", &[(1, 1), (-1, 1)]);
        let prod = p.mul(&e);
        assert_eq!(prod.vars(), ["t", "e"]);
        assert_eq!(prod.len(), 4);
        assert_eq!(prod, e.mul(&p));
    }

    #[test]
    fn cube_of_twist_factor() {
        // (t² - 1 + t⁻²)³
        let p = t_poly(&[(2, 1), (0, -1), (-2, 1)]).pow(3);
        let coeffs: Vec<i64> = [6, 4, 2, 0, -2, -4, -6].iter().map(|&k| p.coefficient(&[k]).to_i64().unwrap()).collect();
        assert_eq!(coeffs, vec![1, -3, 6, -7, 6, -3, 1]);
        assert!(p.is_conjugation_symmetric(1));
        assert_eq!(p.eval_at_one(), BigInt::one());
    }

    #[test]
    fn substitution_scales_exponents() {
        let p = t_poly(&[(1, 2), (0, -3), (-1, 2)]).substitute("t", "T", 2).unwrap();
        assert_eq!(p.vars(), ["T"]);
        assert_eq!(p.coefficient(&[2]), BigInt::from(2));
        assert_eq!(p.coefficient(&[1]), BigInt::zero());
        assert!(p.substitute("x", "y", 1).is_err());
    }

    #[test]
    fn arity_and_duplicates() {
        assert!(LaurentPoly::from_terms(vec!["x".into()], [(vec![1, 2], BigInt::one())]).is_err());
        assert!(LaurentPoly::zero(vec!["x".into(), "x".into()]).is_err());
        let p = LaurentPoly::from_terms(vec!["x".into(), "y".into()], [(vec![1, 0], BigInt::one())]).unwrap();
        assert!(p.with_vars(&["x".into()]).is_ok());
        assert!(p.with_vars(&["y".into()]).is_err());
    }

    #[test]
    fn display_and_json() {
        let p = t_poly(&[(1, 2), (0, -3), (-1, 2)]);
        assert_eq!(p.to_string(), "2·t - 3 + 2·t^-1");
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"{"vars":["t"],"terms":[[[-1],2],[[0],-3],[[1],2]]}"#);
    }
}
