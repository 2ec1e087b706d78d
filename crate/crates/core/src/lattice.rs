//! Integer lattices with a symmetric pairing, and configurations of
//! (possibly immersed) spheres whose classes live in one growable lattice.
//!
//! Geometric input (a class is carried by a sphere with `d` positive double
//! points) is declared data; everything here checks its arithmetic. Blow-ups
//! extend the lattice by an orthogonal `(-1)` vector, so earlier classes
//! embed by zero padding.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg;
use crate::rbd::PlumbingChain;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("invalid gram matrix: {0}")]
    InvalidGram(String),
    #[error("class of dimension {got} does not fit a lattice of rank {rank}")]
    LatticeMismatch { rank: usize, got: usize },
    #[error("unknown basis label '{0}'")]
    UnknownLabel(String),
    #[error("duplicate label '{0}'")]
    DuplicateLabel(String),
    #[error("unknown sphere '{0}'")]
    UnknownSphere(String),
    #[error("sphere index {index} out of range ({len} spheres)")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("invalid operation: {0}")]
    InvalidOperation(String),
    #[error("spheres {0} and {1} do not intersect")]
    NothingToSeparate(String, String),
    #[error("declared {declared} intersections but the classes pair to {pairing}")]
    InconsistentIntersections { declared: i64, pairing: i64 },
    #[error("declared self-intersection {declared} but the class has square {square}")]
    InconsistentSquare { declared: i64, square: i64 },
    #[error("not a linear chain: {0}")]
    NotAChain(String),
}

/// A homology class, as coordinates in a lattice basis. Missing trailing
/// coordinates are zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HomClass {
    coords: Vec<i64>,
}

impl HomClass {
    pub fn new(coords: Vec<i64>) -> HomClass {
        HomClass { coords }
    }

    pub fn zero() -> HomClass {
        HomClass::default()
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> i64 {
        self.coords.get(i).copied().unwrap_or(0)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn padded(&self, rank: usize) -> HomClass {
        let mut coords = self.coords.clone();
        coords.resize(rank.max(coords.len()), 0);
        HomClass { coords }
    }

    fn zip_with(&self, other: &HomClass, f: impl Fn(i64, i64) -> i64) -> HomClass {
        let n = self.dim().max(other.dim());
        HomClass { coords: (0..n).map(|i| f(self.coord(i), other.coord(i))).collect() }
    }

    pub fn add(&self, other: &HomClass) -> HomClass {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &HomClass) -> HomClass {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, k: i64) -> HomClass {
        HomClass { coords: self.coords.iter().map(|c| c * k).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lattice {
    labels: Vec<String>,
    gram: Vec<Vec<i64>>,
}

impl Lattice {
    pub fn new(labels: Vec<String>, gram: Vec<Vec<i64>>) -> Result<Lattice, LatticeError> {
        let n = labels.len();
        if gram.len() != n || gram.iter().any(|r| r.len() != n) {
            return Err(LatticeError::InvalidGram(format!("expected a {n}×{n} matrix")));
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(LatticeError::InvalidGram(format!("not symmetric at ({i}, {j})")));
                }
            }
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(LatticeError::DuplicateLabel(l.clone()));
            }
        }
        Ok(Lattice { labels, gram })
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn basis(&self, label: &str) -> Result<HomClass, LatticeError> {
        let i = self.index_of(label).ok_or_else(|| LatticeError::UnknownLabel(label.into()))?;
        let mut coords = vec![0; i + 1];
        coords[i] = 1;
        Ok(HomClass::new(coords))
    }

    /// `Σ coef·basis(label)`.
    pub fn class_from_terms<'a, I>(&self, terms: I) -> Result<HomClass, LatticeError>
    where
        I: IntoIterator<Item = (&'a str, i64)>,
    {
        let mut coords = vec![0; self.rank()];
        for (label, coef) in terms {
            let i = self.index_of(label).ok_or_else(|| LatticeError::UnknownLabel(label.into()))?;
            coords[i] += coef;
        }
        Ok(HomClass::new(coords))
    }

    fn check_dim(&self, x: &HomClass) -> Result<(), LatticeError> {
        if x.dim() > self.rank() {
            return Err(LatticeError::LatticeMismatch { rank: self.rank(), got: x.dim() });
        }
        Ok(())
    }

    /// `xᵀ·gram·y`.
    pub fn pairing(&self, x: &HomClass, y: &HomClass) -> Result<i64, LatticeError> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        let mut total = 0;
        for (i, &xi) in x.coords.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            let row = &self.gram[i];
            let s: i64 = y.coords.iter().enumerate().map(|(j, &yj)| row[j] * yj).sum();
            total += xi * s;
        }
        Ok(total)
    }

    pub fn square(&self, x: &HomClass) -> Result<i64, LatticeError> {
        self.pairing(x, x)
    }

    /// Adds an orthogonal basis vector of the given square; returns its index.
    pub fn extend(&mut self, label: &str, square: i64) -> Result<usize, LatticeError> {
        if self.index_of(label).is_some() {
            return Err(LatticeError::DuplicateLabel(label.into()));
        }
        for row in self.gram.iter_mut() {
            row.push(0);
        }
        let mut row = vec![0; self.labels.len()];
        row.push(square);
        self.gram.push(row);
        self.labels.push(label.into());
        Ok(self.labels.len() - 1)
    }

    pub fn determinant(&self) -> BigInt {
        linalg::determinant(&self.gram)
    }
}

/// A sphere with `double_points` positive transverse self-intersections;
/// embedded when there are none.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ImmersedSphere {
    pub name: String,
    pub class: HomClass,
    pub double_points: u32,
}

impl ImmersedSphere {
    pub fn new(name: impl Into<String>, class: HomClass, double_points: u32) -> ImmersedSphere {
        ImmersedSphere { name: name.into(), class, double_points }
    }

    pub fn is_embedded(&self) -> bool {
        self.double_points == 0
    }
}

/// Smooths `intersections` transverse points between two spheres. One point
/// joins the spheres; each further point becomes a double point.
pub fn resolve_spheres(
    lattice: &Lattice,
    s1: &ImmersedSphere,
    s2: &ImmersedSphere,
    intersections: u32,
    name: &str,
) -> Result<ImmersedSphere, LatticeError> {
    if intersections == 0 {
        return Err(LatticeError::InvalidOperation("resolving needs at least one intersection".into()));
    }
    let pairing = lattice.pairing(&s1.class, &s2.class)?;
    if pairing != intersections as i64 {
        return Err(LatticeError::InconsistentIntersections { declared: intersections as i64, pairing });
    }
    Ok(ImmersedSphere {
        name: name.into(),
        class: s1.class.add(&s2.class),
        double_points: s1.double_points + s2.double_points + intersections - 1,
    })
}

/// Spheres over one shared lattice. The lattice only ever grows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Configuration {
    lattice: Lattice,
    spheres: Vec<ImmersedSphere>,
}

impl Configuration {
    pub fn new(lattice: Lattice) -> Configuration {
        Configuration { lattice, spheres: Vec::new() }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn spheres(&self) -> &[ImmersedSphere] {
        &self.spheres
    }

    pub fn sphere(&self, i: usize) -> Result<&ImmersedSphere, LatticeError> {
        self.spheres.get(i).ok_or(LatticeError::IndexOutOfRange { index: i, len: self.spheres.len() })
    }

    pub fn index_of(&self, name: &str) -> Result<usize, LatticeError> {
        self.spheres
            .iter()
            .position(|s| s.name == name)
            .ok_or_else(|| LatticeError::UnknownSphere(name.into()))
    }

    pub fn add_sphere(&mut self, sphere: ImmersedSphere) -> Result<usize, LatticeError> {
        self.lattice.check_dim(&sphere.class)?;
        if self.spheres.iter().any(|s| s.name == sphere.name) {
            return Err(LatticeError::DuplicateLabel(sphere.name));
        }
        self.spheres.push(sphere);
        Ok(self.spheres.len() - 1)
    }

    pub fn self_intersection(&self, i: usize) -> Result<i64, LatticeError> {
        self.lattice.square(&self.sphere(i)?.class)
    }

    pub fn pairing(&self, i: usize, j: usize) -> Result<i64, LatticeError> {
        self.lattice.pairing(&self.sphere(i)?.class, &self.sphere(j)?.class)
    }

    /// Replaces sphere `i` by its resolution with sphere `j`; `j` is consumed.
    /// Returns the new index of the result.
    pub fn resolve(&mut self, i: usize, j: usize, intersections: u32, name: &str) -> Result<usize, LatticeError> {
        if i == j {
            return Err(LatticeError::InvalidOperation("cannot resolve a sphere with itself".into()));
        }
        let merged = resolve_spheres(&self.lattice, self.sphere(i)?, self.sphere(j)?, intersections, name)?;
        if self.spheres.iter().enumerate().any(|(k, s)| k != i && k != j && s.name == name) {
            return Err(LatticeError::DuplicateLabel(name.into()));
        }
        self.spheres[i] = merged;
        self.spheres.remove(j);
        Ok(if j < i { i - 1 } else { i })
    }

    /// Blows up one double point of sphere `i`, adding the exceptional class
    /// `label`. The proper transform is `class - 2E`.
    pub fn blow_up_double_point(&mut self, i: usize, label: &str) -> Result<(), LatticeError> {
        let s = self.sphere(i)?;
        if s.double_points == 0 {
            return Err(LatticeError::InvalidOperation(format!("sphere '{}' is embedded", s.name)));
        }
        let e = self.lattice.extend(label, -1)?;
        let s = &mut self.spheres[i];
        s.class = s.class.padded(e + 1);
        s.class.coords[e] -= 2;
        s.double_points -= 1;
        Ok(())
    }

    /// Blows up an intersection point of embedded spheres `i` and `j`. Both
    /// proper transforms lose the exceptional class once; the exceptional
    /// sphere `label` is appended and its index returned.
    pub fn blow_up_at_intersection(&mut self, i: usize, j: usize, label: &str) -> Result<usize, LatticeError> {
        if i == j {
            return Err(LatticeError::InvalidOperation("need two distinct spheres".into()));
        }
        let (si, sj) = (self.sphere(i)?, self.sphere(j)?);
        if !si.is_embedded() || !sj.is_embedded() {
            return Err(LatticeError::InvalidOperation("both spheres must be embedded".into()));
        }
        if self.lattice.pairing(&si.class, &sj.class)? < 1 {
            return Err(LatticeError::NothingToSeparate(si.name.clone(), sj.name.clone()));
        }
        if self.spheres.iter().any(|s| s.name == label) {
            return Err(LatticeError::DuplicateLabel(label.into()));
        }
        let e = self.lattice.extend(label, -1)?;
        for k in [i, j] {
            let s = &mut self.spheres[k];
            s.class = s.class.padded(e + 1);
            s.class.coords[e] -= 1;
        }
        let mut coords = vec![0; e + 1];
        coords[e] = 1;
        self.spheres.push(ImmersedSphere::new(label, HomClass::new(coords), 0));
        Ok(self.spheres.len() - 1)
    }

    /// Self-intersections along `path`, which must be a linear chain of
    /// embedded spheres: consecutive pairings 1, all other pairings 0.
    pub fn extract_linear_chain(&self, path: &[usize]) -> Result<PlumbingChain, LatticeError> {
        if path.is_empty() {
            return Err(LatticeError::NotAChain("empty selection".into()));
        }
        let mut squares = Vec::with_capacity(path.len());
        for (a, &i) in path.iter().enumerate() {
            let s = self.sphere(i)?;
            if !s.is_embedded() {
                return Err(LatticeError::NotAChain(format!("'{}' has double points", s.name)));
            }
            for &j in &path[a + 1..] {
                if j == i {
                    return Err(LatticeError::NotAChain(format!("'{}' repeated", s.name)));
                }
            }
            for (b, &j) in path.iter().enumerate().skip(a + 1) {
                let expected = if b == a + 1 { 1 } else { 0 };
                let got = self.pairing(i, j)?;
                if got != expected {
                    return Err(LatticeError::NotAChain(format!(
                        "'{}'·'{}' = {got}, expected {expected}",
                        s.name,
                        self.spheres[j].name
                    )));
                }
            }
            squares.push(self.self_intersection(i)?);
        }
        PlumbingChain::new(squares).map_err(|e| LatticeError::NotAChain(e.to_string()))
    }

    /// Finds a path starting at `start` whose squares read off `target` and
    /// which passes [`Configuration::extract_linear_chain`]. Neighbours are
    /// tried in index order, so the result is deterministic.
    pub fn find_chain_path(&self, start: usize, target: &PlumbingChain) -> Result<Option<Vec<usize>>, LatticeError> {
        let n = self.spheres.len();
        let mut squares = Vec::with_capacity(n);
        let mut pair = vec![vec![0i64; n]; n];
        for i in 0..n {
            squares.push(self.self_intersection(i)?);
            for j in 0..i {
                let p = self.pairing(i, j)?;
                pair[i][j] = p;
                pair[j][i] = p;
            }
        }
        let target = target.coefficients();
        let usable = |i: usize, k: usize| self.spheres[i].is_embedded() && squares[i] == target[k];
        if start >= n || !usable(start, 0) {
            return Ok(None);
        }
        let mut path = vec![start];
        fn extend(
            path: &mut Vec<usize>,
            target: &[i64],
            pair: &[Vec<i64>],
            usable: &dyn Fn(usize, usize) -> bool,
        ) -> bool {
            let k = path.len();
            if k == target.len() {
                return true;
            }
            let last = *path.last().unwrap();
            for next in 0..pair.len() {
                if path.contains(&next) || pair[last][next] != 1 || !usable(next, k) {
                    continue;
                }
                if path[..k - 1].iter().any(|&p| pair[p][next] != 0) {
                    continue;
                }
                path.push(next);
                if extend(path, target, pair, usable) {
                    return true;
                }
                path.pop();
            }
            false
        }
        if extend(&mut path, target, &pair, &usable) {
            self.extract_linear_chain(&path)?;
            Ok(Some(path))
        } else {
            Ok(None)
        }
    }

    pub fn to_doc(&self) -> ConfigurationDoc {
        ConfigurationDoc {
            labels: self.lattice.labels.clone(),
            gram: self.lattice.gram.clone(),
            spheres: self
                .spheres
                .iter()
                .map(|s| SphereDoc {
                    name: s.name.clone(),
                    class: ClassSpec::Dense(s.class.padded(self.lattice.rank()).coords),
                    double_points: s.double_points,
                    self_intersection: None,
                })
                .collect(),
        }
    }
}

/// A class given densely or as `{label: coefficient}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ClassSpec {
    Dense(Vec<i64>),
    Sparse(BTreeMap<String, i64>),
}

impl ClassSpec {
    pub fn resolve(&self, lattice: &Lattice) -> Result<HomClass, LatticeError> {
        match self {
            ClassSpec::Dense(v) => {
                let c = HomClass::new(v.clone());
                lattice.check_dim(&c)?;
                Ok(c)
            }
            ClassSpec::Sparse(m) => lattice.class_from_terms(m.iter().map(|(k, &v)| (k.as_str(), v))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphereDoc {
    pub name: String,
    pub class: ClassSpec,
    #[serde(default)]
    pub double_points: u32,
    /// Checked against the lattice when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub self_intersection: Option<i64>,
}

impl SphereDoc {
    pub fn to_sphere(&self, lattice: &Lattice) -> Result<ImmersedSphere, LatticeError> {
        let class = self.class.resolve(lattice)?;
        if let Some(declared) = self.self_intersection {
            let square = lattice.square(&class)?;
            if square != declared {
                return Err(LatticeError::InconsistentSquare { declared, square });
            }
        }
        Ok(ImmersedSphere::new(self.name.clone(), class, self.double_points))
    }
}

/// JSON form of a configuration: basis labels, dense gram matrix, spheres.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigurationDoc {
    pub labels: Vec<String>,
    pub gram: Vec<Vec<i64>>,
    #[serde(default)]
    pub spheres: Vec<SphereDoc>,
}

impl ConfigurationDoc {
    pub fn build(&self) -> Result<Configuration, LatticeError> {
        let lattice = Lattice::new(self.labels.clone(), self.gram.clone())?;
        let mut config = Configuration::new(lattice);
        for s in &self.spheres {
            let sphere = s.to_sphere(&config.lattice)?;
            config.add_sphere(sphere)?;
        }
        Ok(config)
    }
}

/// One step of an infinitely-close blow-up sequence: the two spheres whose
/// intersection is blown up, and the new exceptional label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowUpStep {
    pub at: (String, String),
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlowUpPlan {
    pub steps: Vec<BlowUpStep>,
    /// Sphere names along the realised chain.
    pub chain_path: Vec<String>,
}

/// Bounded search for `steps` infinitely close blow-ups realising `target`
/// as a chain starting at sphere `start`.
///
/// The first blow-up is at `first.0 ∩ first.1`; every later one is at the
/// point where the newest exceptional sphere meets one of the two spheres it
/// separated. Branches are cut once more spheres fall below `-2` than the
/// target can absorb. Returns every plan that works, in search order.
pub fn search_infinitely_close(
    config: &Configuration,
    first: (usize, usize),
    steps: usize,
    target: &PlumbingChain,
    start: usize,
    label_prefix: &str,
    first_label_index: usize,
) -> Result<Vec<BlowUpPlan>, LatticeError> {
    let budget = target.coefficients().iter().filter(|&&c| c < -2).count();
    let mut found = Vec::new();
    let mut trail = Vec::new();

    #[allow(clippy::too_many_arguments)]
    fn go(
        config: &Configuration,
        pair: (usize, usize),
        remaining: usize,
        target: &PlumbingChain,
        start: usize,
        label: &dyn Fn(usize) -> String,
        step_no: usize,
        budget: usize,
        trail: &mut Vec<BlowUpStep>,
        found: &mut Vec<BlowUpPlan>,
    ) -> Result<(), LatticeError> {
        let mut next = config.clone();
        let name = label(step_no);
        let e = next.blow_up_at_intersection(pair.0, pair.1, &name)?;
        trail.push(BlowUpStep {
            at: (config.spheres[pair.0].name.clone(), config.spheres[pair.1].name.clone()),
            label: name,
        });
        let below = (0..next.spheres.len())
            .map(|i| next.self_intersection(i))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .filter(|&s| s < -2)
            .count();
        if below <= budget {
            if remaining == 1 {
                if let Some(path) = next.find_chain_path(start, target)? {
                    found.push(BlowUpPlan {
                        steps: trail.clone(),
                        chain_path: path.iter().map(|&i| next.spheres[i].name.clone()).collect(),
                    });
                }
            } else {
                for side in [pair.0, pair.1] {
                    go(&next, (side, e), remaining - 1, target, start, label, step_no + 1, budget, trail, found)?;
                }
            }
        }
        trail.pop();
        Ok(())
    }

    if steps == 0 {
        return Ok(found);
    }
    let label = |k: usize| format!("{label_prefix}{}", first_label_index + k);
    go(config, first, steps, target, start, &label, 0, budget, &mut trail, &mut found)?;
    Ok(found)
}
