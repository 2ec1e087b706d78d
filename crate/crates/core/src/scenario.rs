//! Declarative construction pipelines.
//!
//! A scenario is a JSON document with a name, an optional initial state, an
//! ordered list of steps and a list of expectations. Steps run in order over
//! one evolving state (word, factorization, sphere configuration, SW
//! function, characteristic numbers). Each step produces a JSON output;
//! expectations compare values inside those outputs by dotted path.
//!
//! Facts that are not computed enter through `axiom` steps, which are listed
//! in the report's axiom ledger and never count as verified.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::fibration::{collect_a_powers, Factorization};
use crate::lattice::{BlowUpStep, Configuration, ConfigurationDoc, HomClass, SphereDoc};
use crate::laurent::{bigint_json, LaurentPoly};
use crate::rbd::{blow_down_char_effect, identify_cpq, CpqLabel, PlumbingChain};
use crate::sw::{alexander_twist, ConjugationSign, Fingerprint, SwFunction};
use crate::topo::{
    apply_blow_up, apply_knot_surgery, apply_rational_blowdown, elliptic_surface_numbers, freedman_classify,
    CharNumbers, Classification, SimplyConnected,
};
use crate::word::{eval_word, standard_fibration_word, words_equivalent, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScenarioError {
    #[error("schema error: {0}")]
    Schema(String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default)]
    pub description: Option<String>,
    #[serde(default)]
    pub initial: Initial,
    #[serde(default)]
    pub steps: Vec<StepSpec>,
    #[serde(default)]
    pub expectations: Vec<Expectation>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Initial {
    /// Lattice and declared spheres.
    #[serde(default)]
    pub configuration: Option<ConfigurationDoc>,
    /// Starts the SW function at `1` with this fiber variable.
    #[serde(default)]
    pub sw_fiber: Option<String>,
}

/// A step plus an optional id used by expectation paths.
#[derive(Debug, Clone)]
pub struct StepSpec {
    pub id: Option<String>,
    pub step: Step,
}

impl<'de> Deserialize<'de> for StepSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<StepSpec, D::Error> {
        let mut map = Map::deserialize(deserializer)?;
        let id = match map.remove("id") {
            None => None,
            Some(Value::String(s)) => Some(s),
            Some(other) => return Err(D::Error::custom(format!("step id must be a string, got {other}"))),
        };
        let step = Step::deserialize(Value::Object(map)).map_err(D::Error::custom)?;
        Ok(StepSpec { id, step })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AxiomCategory {
    Pi1,
    PseudoSection,
    RationalBall,
    H1,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CharOp {
    Elliptic,
    KnotSurgery,
    BlowUp,
    RationalBlowdown,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Step {
    /// Loads a word (or `(ab)^{6n}` via `standard`) and optionally compares it
    /// with another.
    Word {
        #[serde(default)]
        word: Option<Word>,
        #[serde(default)]
        standard: Option<u64>,
        #[serde(default)]
        compare: Option<Word>,
    },
    Collect {},
    /// Splits each listed block into `k1` and `k - k1`.
    Perturb { blocks: Vec<usize>, k1: u64 },
    /// Knot surgery on the SW function with a twist knot or an explicit
    /// Alexander polynomial given as `[exponent, coefficient]` pairs.
    KnotSurgery {
        #[serde(default)]
        twist: Option<u64>,
        #[serde(default)]
        alexander: Option<Vec<(i64, i64)>>,
        #[serde(default = "one")]
        count: u32,
    },
    Axiom {
        category: AxiomCategory,
        citation: String,
        fact: String,
        #[serde(default)]
        sphere: Option<SphereDoc>,
        #[serde(default)]
        simply_connected: Option<SimplyConnected>,
        #[serde(default)]
        rational_ball: Option<CpqLabel>,
    },
    Resolve { spheres: (String, String), intersections: u32, name: String },
    /// Blows up double points of one sphere, one label per point. The SW
    /// function (when present) is blown up with the same labels.
    BlowUpDp { sphere: String, labels: Vec<String> },
    /// Blows up intersection points in order, also on the SW function.
    BlowUpIc { steps: Vec<BlowUpStep> },
    /// Reads a linear chain along `path`, or searches one from `start` that
    /// realises `target`.
    ExtractChain {
        #[serde(default)]
        path: Option<Vec<String>>,
        #[serde(default)]
        start: Option<String>,
        #[serde(default)]
        target: Option<PlumbingChain>,
    },
    IdentifyCpq {},
    SwBlowdown {
        #[serde(default)]
        conjugation_sign: Option<ConjugationSign>,
    },
    CharApply {
        op: CharOp,
        #[serde(default)]
        n: Option<u64>,
        #[serde(default)]
        k: Option<u64>,
    },
    Classify {},
    Fingerprint {},
}

impl Step {
    pub fn kind(&self) -> &'static str {
        match self {
            Step::Word { .. } => "word",
            Step::Collect {} => "collect",
            Step::Perturb { .. } => "perturb",
            Step::KnotSurgery { .. } => "knot-surgery",
            Step::Axiom { .. } => "axiom",
            Step::Resolve { .. } => "resolve",
            Step::BlowUpDp { .. } => "blow-up-dp",
            Step::BlowUpIc { .. } => "blow-up-ic",
            Step::ExtractChain { .. } => "extract-chain",
            Step::IdentifyCpq {} => "identify-cpq",
            Step::SwBlowdown { .. } => "sw-blowdown",
            Step::CharApply { .. } => "char-apply",
            Step::Classify {} => "classify",
            Step::Fingerprint {} => "fingerprint",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectation {
    pub path: String,
    pub equals: Value,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Scenario, ScenarioError> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| ScenarioError::Schema(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<(), ScenarioError> {
        let mut ids = BTreeSet::new();
        for (i, spec) in self.steps.iter().enumerate() {
            let key = step_key(i, spec);
            if key == "final" || !ids.insert(key.clone()) {
                return Err(ScenarioError::Schema(format!("step id '{key}' is reserved or repeated")));
            }
            if let Step::Axiom { citation, fact, .. } = &spec.step {
                if citation.trim().is_empty() || fact.trim().is_empty() {
                    return Err(ScenarioError::Schema(format!("axiom step {i} needs a citation and a fact")));
                }
            }
        }
        for e in &self.expectations {
            if e.path.is_empty() {
                return Err(ScenarioError::Schema("expectation with empty path".into()));
            }
        }
        Ok(())
    }
}

fn step_key(index: usize, spec: &StepSpec) -> String {
    spec.id.clone().unwrap_or_else(|| index.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepReport {
    pub index: usize,
    pub id: String,
    pub kind: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomRecord {
    pub step: usize,
    pub category: AxiomCategory,
    pub citation: String,
    pub fact: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpectationResult {
    pub path: String,
    pub expected: Value,
    pub actual: Option<Value>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub scenario: String,
    pub verdict: Verdict,
    pub steps: Vec<StepReport>,
    pub axioms: Vec<AxiomRecord>,
    pub expectations: Vec<ExpectationResult>,
    #[serde(rename = "final")]
    pub final_state: Value,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report values are plain JSON")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "scenario: {}", self.scenario);
        for s in &self.steps {
            match (&s.output, &s.error) {
                (_, Some(err)) => {
                    let _ = writeln!(out, "  [{}] {} ({}): ERROR {err}", s.index, s.kind, s.id);
                }
                (Some(v), None) => {
                    let _ = writeln!(out, "  [{}] {} ({}): {}", s.index, s.kind, s.id, summarize(v));
                }
                (None, None) => {
                    let _ = writeln!(out, "  [{}] {} ({}): {}", s.index, s.kind, s.id, s.status);
                }
            }
        }
        if !self.axioms.is_empty() {
            let _ = writeln!(out, "axioms (asserted, not computed):");
            for a in &self.axioms {
                let category = serde_json::to_value(a.category).unwrap_or(Value::Null);
                let _ = writeln!(
                    out,
                    "  - step {} [{}] {} ({})",
                    a.step,
                    category.as_str().unwrap_or("?"),
                    a.fact,
                    a.citation
                );
            }
        }
        if !self.expectations.is_empty() {
            let _ = writeln!(out, "expectations:");
            for e in &self.expectations {
                let actual = e.actual.as_ref().map_or("<missing>".to_string(), |v| v.to_string());
                let _ = writeln!(
                    out,
                    "  {} {} = {} (got {actual})",
                    if e.pass { "PASS" } else { "FAIL" },
                    e.path,
                    e.expected
                );
            }
        }
        if let Some(c) = self.final_state.get("char_numbers").filter(|v| !v.is_null()) {
            let _ = writeln!(out, "characteristic numbers: {}", summarize(c));
        }
        if let Some(c) = self.final_state.get("classification").and_then(Value::as_str) {
            let _ = writeln!(out, "classification: {c}");
        }
        let _ = writeln!(out, "verdict: {}", if self.passed() { "PASS" } else { "FAIL" });
        out
    }
}

fn summarize(v: &Value) -> String {
    let s = v.to_string();
    if s.chars().count() > 160 {
        let cut: String = s.chars().take(157).collect();
        format!("{cut}...")
    } else {
        s
    }
}

#[derive(Debug, Clone)]
struct ChainState {
    chain: PlumbingChain,
    names: Vec<String>,
    classes: Vec<HomClass>,
}

#[derive(Debug, Default)]
struct State {
    word: Option<Word>,
    factorization: Option<Factorization>,
    config: Option<Configuration>,
    sw: Option<SwFunction>,
    chain: Option<ChainState>,
    cpq: Option<CpqLabel>,
    chars: Option<CharNumbers>,
    classification: Option<Classification>,
    fingerprint: Option<Fingerprint>,
    rational_balls: BTreeSet<CpqLabel>,
}

type StepResult = Result<Value, String>;

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn need<'a, T>(x: &'a Option<T>, what: &str) -> Result<&'a T, String> {
    x.as_ref().ok_or_else(|| format!("no {what} in the current state"))
}

fn need_mut<'a, T>(x: &'a mut Option<T>, what: &str) -> Result<&'a mut T, String> {
    x.as_mut().ok_or_else(|| format!("no {what} in the current state"))
}

fn fingerprint_json(fp: &Fingerprint) -> Value {
    let values = fp.values(64).map(|vs| vs.iter().map(bigint_json).collect::<Vec<_>>());
    json!({
        "values": values,
        "total": fp.total().to_string(),
        "counts": serde_json::to_value(fp).unwrap_or(Value::Null),
    })
}

fn factorization_json(f: &Factorization) -> Value {
    let cycles: Vec<Value> = f.blocks().iter().map(|b| serde_json::to_value(b.cycle()).unwrap()).collect();
    let distinct: BTreeSet<String> = cycles.iter().map(Value::to_string).collect();
    json!({
        "a_power": f.a_power(),
        "multiplicities": f.blocks().iter().map(|b| b.multiplicity()).collect::<Vec<_>>(),
        "conjugator_exponents": f.blocks().iter().map(|b| -b.conjugator().a_exponent()).collect::<Vec<_>>(),
        "cycles": cycles,
        "distinct_cycles": distinct.len(),
        "fiber_types": f.fiber_types().iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        "twist_count": f.twist_count(),
    })
}

impl State {
    fn new(initial: &Initial) -> Result<State, ScenarioError> {
        let mut st = State::default();
        if let Some(doc) = &initial.configuration {
            st.config = Some(doc.build().map_err(|e| ScenarioError::Schema(format!("initial configuration: {e}")))?);
        }
        if let Some(f) = &initial.sw_fiber {
            st.sw = Some(SwFunction::unit(f));
        }
        Ok(st)
    }

    fn apply(&mut self, index: usize, step: &Step) -> StepResult {
        match step {
            Step::Word { word, standard, compare } => {
                let w = match (word, standard) {
                    (Some(w), None) => w.clone(),
                    (None, Some(n)) => standard_fibration_word(*n).map_err(err)?,
                    _ => return Err("give exactly one of 'word' and 'standard'".into()),
                };
                let m = eval_word(&w);
                let mut out = json!({
                    "word": w.to_compact(),
                    "length": w.len(),
                    "matrix": m,
                    "is_identity": m.is_identity(),
                });
                if let Some(c) = compare {
                    out["compare"] = json!(c.to_compact());
                    out["equivalent"] = json!(words_equivalent(&w, c));
                }
                self.word = Some(w);
                Ok(out)
            }
            Step::Collect {} => {
                let w = need(&self.word, "word")?;
                let f = collect_a_powers(w).map_err(err)?;
                let mut out = factorization_json(&f);
                out["evaluation_preserved"] = json!(f.evaluate() == eval_word(w));
                out["reassembled_is_identity"] = json!(f.evaluate().is_identity());
                self.factorization = Some(f);
                Ok(out)
            }
            Step::Perturb { blocks, k1 } => {
                let f = need(&self.factorization, "factorization")?;
                let mut order = blocks.clone();
                order.sort_unstable();
                order.dedup();
                if order.len() != blocks.len() {
                    return Err("repeated block index".into());
                }
                let mut g = f.clone();
                // splitting from the back keeps earlier indices valid
                for &b in order.iter().rev() {
                    g = g.perturb(b, *k1).map_err(err)?;
                }
                let mut isotopic = true;
                for (shift, &b) in order.iter().enumerate() {
                    let at = b + shift;
                    isotopic &= g.blocks()[at].cycle() == g.blocks()[at + 1].cycle();
                }
                let mut out = factorization_json(&g);
                out["evaluation_preserved"] = json!(g.evaluate() == f.evaluate());
                out["split_pairs_isotopic"] = json!(isotopic);
                self.factorization = Some(g);
                Ok(out)
            }
            Step::KnotSurgery { twist, alexander, count } => {
                let delta = match (twist, alexander) {
                    (Some(n), None) => alexander_twist(*n).map_err(err)?,
                    (None, Some(terms)) => LaurentPoly::univariate("t", terms),
                    _ => return Err("give exactly one of 'twist' and 'alexander'".into()),
                };
                let sw = need_mut(&mut self.sw, "SW function")?;
                for _ in 0..*count {
                    *sw = sw.knot_surgery(&delta).map_err(err)?;
                }
                Ok(json!({
                    "alexander": delta.to_string(),
                    "basic_class_count": sw.basic_class_count().to_string(),
                    "top_value": sw.top_value().map(|v| bigint_json(&v)),
                }))
            }
            Step::Axiom { category, sphere, simply_connected, rational_ball, .. } => {
                let mut out = json!({ "category": category });
                if let Some(doc) = sphere {
                    let config = need_mut(&mut self.config, "configuration")?;
                    let s = doc.to_sphere(config.lattice()).map_err(err)?;
                    let square = config.lattice().square(&s.class).map_err(err)?;
                    config.add_sphere(s).map_err(err)?;
                    out["sphere"] = json!({ "name": doc.name, "square": square, "double_points": doc.double_points });
                }
                if let Some(flag) = simply_connected {
                    let c = need(&self.chars, "characteristic numbers")?;
                    self.chars = Some(c.with_simply_connected(*flag).map_err(err)?);
                    out["simply_connected"] = json!(flag);
                }
                if let Some(label) = rational_ball {
                    self.rational_balls.insert(*label);
                    out["rational_ball"] = json!([label.p(), label.q()]);
                }
                let _ = index;
                Ok(out)
            }
            Step::Resolve { spheres, intersections, name } => {
                let config = need_mut(&mut self.config, "configuration")?;
                let i = config.index_of(&spheres.0).map_err(err)?;
                let j = config.index_of(&spheres.1).map_err(err)?;
                let r = config.resolve(i, j, *intersections, name).map_err(err)?;
                let s = config.sphere(r).map_err(err)?;
                Ok(json!({
                    "name": name,
                    "square": config.self_intersection(r).map_err(err)?,
                    "double_points": s.double_points,
                }))
            }
            Step::BlowUpDp { sphere, labels } => {
                let config = need_mut(&mut self.config, "configuration")?;
                let i = config.index_of(sphere).map_err(err)?;
                for l in labels {
                    config.blow_up_double_point(i, l).map_err(err)?;
                }
                let s = config.sphere(i).map_err(err)?;
                let out = json!({
                    "sphere": sphere,
                    "square": config.self_intersection(i).map_err(err)?,
                    "double_points": s.double_points,
                    "embedded": s.is_embedded(),
                    "rank": config.lattice().rank(),
                });
                self.blow_up_sw(labels)?;
                Ok(out)
            }
            Step::BlowUpIc { steps } => {
                let config = need_mut(&mut self.config, "configuration")?;
                for s in steps {
                    let i = config.index_of(&s.at.0).map_err(err)?;
                    let j = config.index_of(&s.at.1).map_err(err)?;
                    config.blow_up_at_intersection(i, j, &s.label).map_err(err)?;
                }
                let mut squares = BTreeMap::new();
                for s in steps {
                    for name in [&s.at.0, &s.at.1, &s.label] {
                        let i = config.index_of(name).map_err(err)?;
                        squares.insert(name.clone(), config.self_intersection(i).map_err(err)?);
                    }
                }
                let out = json!({ "count": steps.len(), "squares": squares, "rank": config.lattice().rank() });
                let labels: Vec<String> = steps.iter().map(|s| s.label.clone()).collect();
                self.blow_up_sw(&labels)?;
                Ok(out)
            }
            Step::ExtractChain { path, start, target } => {
                let config = need(&self.config, "configuration")?;
                let indices = match (path, start, target) {
                    (Some(p), None, None) => {
                        p.iter().map(|n| config.index_of(n)).collect::<Result<Vec<_>, _>>().map_err(err)?
                    }
                    (None, Some(s), Some(t)) => {
                        let i = config.index_of(s).map_err(err)?;
                        config
                            .find_chain_path(i, t)
                            .map_err(err)?
                            .ok_or_else(|| format!("no chain realising {t} starts at '{s}'"))?
                    }
                    _ => return Err("give either 'path', or 'start' with 'target'".into()),
                };
                let chain = config.extract_linear_chain(&indices).map_err(err)?;
                let names: Vec<String> = indices.iter().map(|&i| config.spheres()[i].name.clone()).collect();
                let classes: Vec<HomClass> = indices.iter().map(|&i| config.spheres()[i].class.clone()).collect();
                let det = crate::linalg::determinant(&crate::rbd::chain_matrix(&chain));
                let out = json!({
                    "chain": chain.coefficients(),
                    "display": chain.to_string(),
                    "length": chain.len(),
                    "path": names,
                    "determinant": bigint_json(&det),
                });
                self.chain = Some(ChainState { chain, names, classes });
                self.cpq = None;
                Ok(out)
            }
            Step::IdentifyCpq {} => {
                let c = need(&self.chain, "chain")?;
                let label = identify_cpq(&c.chain).ok_or_else(|| format!("chain {} is not a C(p,q)", c.chain))?;
                self.cpq = Some(label);
                Ok(json!({ "p": label.p(), "q": label.q(), "label": label.to_string() }))
            }
            Step::SwBlowdown { conjugation_sign } => {
                let label = self.rational_ball_label()?;
                let chain = need(&self.chain, "chain")?;
                let config = need(&self.config, "configuration")?;
                let sw = need(&self.sw, "SW function")?;
                let before = sw.basic_class_count();
                let mut out_sw = sw.rational_blowdown(&chain.chain, &chain.classes, config.lattice()).map_err(err)?;
                if let Some(sign) = conjugation_sign {
                    out_sw = out_sw.with_conjugation_sign(*sign).map_err(err)?;
                }
                let vars = out_sw.vars();
                let lattice = config.lattice();
                let mut classes = Vec::new();
                for (exps, value) in out_sw.basic_classes().map_err(err)? {
                    let mut class = HomClass::zero();
                    let mut terms = BTreeMap::new();
                    for (v, &x) in vars.iter().zip(&exps) {
                        class = class.add(&lattice.basis(v).map_err(err)?.scale(x));
                        if x != 0 {
                            terms.insert(v.clone(), x);
                        }
                    }
                    let evaluations = chain
                        .classes
                        .iter()
                        .map(|s| lattice.pairing(&class, s))
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(err)?;
                    classes.push(json!({ "class": terms, "value": bigint_json(&value), "evaluations": evaluations }));
                }
                let fp = out_sw.fingerprint();
                let out = json!({
                    "blown_down_along": label.to_string(),
                    "chain_spheres": chain.names,
                    "classes_before": before.to_string(),
                    "classes_after": classes.len(),
                    "basic_classes": classes,
                    "fingerprint": fingerprint_json(&fp),
                    "conjugation_sign": out_sw.conjugation_sign(),
                });
                self.sw = Some(out_sw);
                Ok(out)
            }
            Step::CharApply { op, n, k } => {
                let next = match op {
                    CharOp::Elliptic => {
                        let n = n.ok_or("char-apply elliptic needs 'n'")?;
                        elliptic_surface_numbers(n).map_err(err)?
                    }
                    CharOp::KnotSurgery => {
                        let c = need(&self.chars, "characteristic numbers")?;
                        let times = k.unwrap_or(1);
                        (0..times).fold(*c, |c, _| apply_knot_surgery(&c))
                    }
                    CharOp::BlowUp => {
                        let c = need(&self.chars, "characteristic numbers")?;
                        apply_blow_up(c, k.ok_or("char-apply blow-up needs 'k'")?).map_err(err)?
                    }
                    CharOp::RationalBlowdown => {
                        self.rational_ball_label()?;
                        let c = need(&self.chars, "characteristic numbers")?;
                        let chain = need(&self.chain, "chain")?;
                        let delta = blow_down_char_effect(&chain.chain).map_err(err)?;
                        apply_rational_blowdown(c, &delta).map_err(err)?
                    }
                };
                self.chars = Some(next);
                self.classification = None;
                Ok(serde_json::to_value(next).map_err(err)?)
            }
            Step::Classify {} => {
                let c = need(&self.chars, "characteristic numbers")?;
                let cls = freedman_classify(c);
                let out = json!({ "label": cls.to_string(), "simply_connected": c.simply_connected() });
                self.classification = Some(cls);
                Ok(out)
            }
            Step::Fingerprint {} => {
                let sw = need(&self.sw, "SW function")?;
                let fp = sw.fingerprint();
                let out = json!({
                    "fingerprint": fingerprint_json(&fp),
                    "display": fp.to_string(),
                    "top_value": sw.top_value().map(|v| bigint_json(&v)),
                });
                self.fingerprint = Some(fp);
                Ok(out)
            }
        }
    }

    fn blow_up_sw(&mut self, labels: &[String]) -> Result<(), String> {
        if let Some(sw) = &self.sw {
            let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
            self.sw = Some(sw.blow_up(&refs).map_err(err)?);
        }
        Ok(())
    }

    /// The identified chain's label, provided a rational ball for it was
    /// recorded as an axiom.
    fn rational_ball_label(&self) -> Result<CpqLabel, String> {
        let label = self.cpq.ok_or("the chain has not been identified (run identify-cpq first)")?;
        if !self.rational_balls.contains(&label) {
            return Err(format!("no rational-ball axiom for {label}"));
        }
        Ok(label)
    }

    fn final_json(&self) -> Value {
        json!({
            "word": self.word.as_ref().map(Word::to_compact),
            "factorization": self.factorization.as_ref().map(factorization_json),
            "spheres": self.config.as_ref().map(|c| {
                c.spheres()
                    .iter()
                    .enumerate()
                    .map(|(i, s)| json!({
                        "name": s.name,
                        "square": c.self_intersection(i).ok(),
                        "double_points": s.double_points,
                    }))
                    .collect::<Vec<_>>()
            }),
            "lattice_rank": self.config.as_ref().map(|c| c.lattice().rank()),
            "chain": self.chain.as_ref().map(|c| c.chain.coefficients().to_vec()),
            "cpq": self.cpq.map(|l| json!([l.p(), l.q()])),
            "sw_basic_classes": self.sw.as_ref().map(|s| s.basic_class_count().to_string()),
            "fingerprint": self.fingerprint.as_ref().map(fingerprint_json),
            "char_numbers": self.chars,
            "classification": self.classification.as_ref().map(|c| c.to_string()),
        })
    }
}

/// Looks up `path` (dot separated; numeric segments index arrays).
pub fn lookup<'a>(root: &'a Value, path: &str) -> Option<&'a Value> {
    path.split('.').try_fold(root, |v, seg| match v {
        Value::Object(m) => m.get(seg),
        Value::Array(a) => seg.parse::<usize>().ok().and_then(|i| a.get(i)),
        _ => None,
    })
}

/// Runs every step in order. The first failing step stops the run and is
/// reported with its index; later steps are listed as skipped.
pub fn run_scenario(s: &Scenario) -> Result<Report, ScenarioError> {
    let mut state = State::new(&s.initial)?;
    let mut steps = Vec::with_capacity(s.steps.len());
    let mut axioms = Vec::new();
    let mut outputs = Map::new();
    let mut failed = false;
    for (index, spec) in s.steps.iter().enumerate() {
        let id = step_key(index, spec);
        let kind = spec.step.kind().to_string();
        if failed {
            steps.push(StepReport { index, id, kind, status: "skipped".into(), output: None, error: None });
            continue;
        }
        match state.apply(index, &spec.step) {
            Ok(output) => {
                if let Step::Axiom { category, citation, fact, .. } = &spec.step {
                    axioms.push(AxiomRecord { step: index, category: *category, citation: citation.clone(), fact: fact.clone() });
                }
                outputs.insert(id.clone(), output.clone());
                steps.push(StepReport { index, id, kind, status: "ok".into(), output: Some(output), error: None });
            }
            Err(e) => {
                failed = true;
                steps.push(StepReport {
                    index,
                    id,
                    kind,
                    status: "error".into(),
                    output: None,
                    error: Some(format!("step {index}: {e}")),
                });
            }
        }
    }
    let final_state = state.final_json();
    outputs.insert("final".into(), final_state.clone());
    let root = Value::Object(outputs);
    let expectations: Vec<ExpectationResult> = s
        .expectations
        .iter()
        .map(|e| {
            let actual = lookup(&root, &e.path).cloned();
            let pass = actual.as_ref() == Some(&e.equals);
            ExpectationResult { path: e.path.clone(), expected: e.equals.clone(), actual, pass }
        })
        .collect();
    let verdict = if failed || expectations.iter().any(|e| !e.pass) { Verdict::Fail } else { Verdict::Pass };
    Ok(Report { scenario: s.name.clone(), verdict, steps, axioms, expectations, final_state })
}
