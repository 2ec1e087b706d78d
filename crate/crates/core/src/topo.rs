//! Characteristic numbers of closed oriented 4-manifolds and the
//! homeomorphism classification of simply connected ones.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TopoError {
    #[error("inconsistent characteristic numbers: {0}")]
    InconsistentState(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// How much is known about `π₁ = 1`.
///
/// `Asserted` marks a fact supplied by a geometric argument rather than
/// computed here; `Unknown` means nothing has been established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimplyConnected {
    Yes,
    No,
    Asserted,
    Unknown,
}

impl SimplyConnected {
    pub fn holds(self) -> bool {
        matches!(self, SimplyConnected::Yes | SimplyConnected::Asserted)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawCharNumbers")]
pub struct CharNumbers {
    e: i64,
    sigma: i64,
    b1: u64,
    b2_plus: u64,
    b2_minus: u64,
    parity: Parity,
    simply_connected: SimplyConnected,
}

#[derive(Deserialize)]
struct RawCharNumbers {
    e: i64,
    sigma: i64,
    b1: u64,
    b2_plus: u64,
    b2_minus: u64,
    parity: Parity,
    simply_connected: SimplyConnected,
}

impl TryFrom<RawCharNumbers> for CharNumbers {
    type Error = TopoError;

    fn try_from(r: RawCharNumbers) -> Result<CharNumbers, TopoError> {
        CharNumbers::new(r.e, r.sigma, r.b1, r.b2_plus, r.b2_minus, r.parity, r.simply_connected)
    }
}

impl CharNumbers {
    /// Validates `e = 2 - 2b₁ + b₂⁺ + b₂⁻` and `σ = b₂⁺ - b₂⁻`.
    pub fn new(
        e: i64,
        sigma: i64,
        b1: u64,
        b2_plus: u64,
        b2_minus: u64,
        parity: Parity,
        simply_connected: SimplyConnected,
    ) -> Result<CharNumbers, TopoError> {
        let expected_e = 2 - 2 * b1 as i64 + b2_plus as i64 + b2_minus as i64;
        if e != expected_e {
            return Err(TopoError::InconsistentState(format!(
                "e = {e} but 2 - 2·{b1} + {b2_plus} + {b2_minus} = {expected_e}"
            )));
        }
        let expected_sigma = b2_plus as i64 - b2_minus as i64;
        if sigma != expected_sigma {
            return Err(TopoError::InconsistentState(format!(
                "sigma = {sigma} but {b2_plus} - {b2_minus} = {expected_sigma}"
            )));
        }
        if simply_connected.holds() && b1 != 0 {
            return Err(TopoError::InconsistentState("simply connected with b1 > 0".into()));
        }
        Ok(CharNumbers { e, sigma, b1, b2_plus, b2_minus, parity, simply_connected })
    }

    pub fn e(&self) -> i64 {
        self.e
    }

    pub fn sigma(&self) -> i64 {
        self.sigma
    }

    pub fn b1(&self) -> u64 {
        self.b1
    }

    pub fn b2_plus(&self) -> u64 {
        self.b2_plus
    }

    pub fn b2_minus(&self) -> u64 {
        self.b2_minus
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn simply_connected(&self) -> SimplyConnected {
        self.simply_connected
    }

    pub fn with_simply_connected(self, flag: SimplyConnected) -> Result<CharNumbers, TopoError> {
        CharNumbers::new(self.e, self.sigma, self.b1, self.b2_plus, self.b2_minus, self.parity, flag)
    }
}

impl fmt::Display for CharNumbers {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "e={} sigma={} b1={} b2+={} b2-={} parity={:?} pi1={:?}",
            self.e, self.sigma, self.b1, self.b2_plus, self.b2_minus, self.parity, self.simply_connected
        )
    }
}

/// Change in characteristic numbers caused by a rational blow-down.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharNumbersDelta {
    pub e: i64,
    pub sigma: i64,
    pub b2_plus: i64,
    pub b2_minus: i64,
}

/// E(n): `e = 12n`, `σ = -8n`, even exactly when `n` is even.
pub fn elliptic_surface_numbers(n: u64) -> Result<CharNumbers, TopoError> {
    if n < 1 {
        return Err(TopoError::InvalidArgument("E(n) needs n >= 1".into()));
    }
    let n = n as i64;
    // b2+ = 2n - 1, b2- = 10n - 1
    let parity = if n % 2 == 0 { Parity::Even } else { Parity::Odd };
    CharNumbers::new(12 * n, -8 * n, 0, (2 * n - 1) as u64, (10 * n - 1) as u64, parity, SimplyConnected::Yes)
}

/// Knot surgery along a fiber leaves every number unchanged. Simple
/// connectivity is no longer computed, only asserted.
pub fn apply_knot_surgery(c: &CharNumbers) -> CharNumbers {
    let flag = match c.simply_connected {
        SimplyConnected::Yes | SimplyConnected::Asserted => SimplyConnected::Asserted,
        other => other,
    };
    CharNumbers { simply_connected: flag, ..*c }
}

/// `X # k·CP²bar`.
pub fn apply_blow_up(c: &CharNumbers, k: u64) -> Result<CharNumbers, TopoError> {
    if k < 1 {
        return Err(TopoError::InvalidArgument("blow-up count must be positive".into()));
    }
    CharNumbers::new(
        c.e + k as i64,
        c.sigma - k as i64,
        c.b1,
        c.b2_plus,
        c.b2_minus + k,
        Parity::Odd,
        c.simply_connected,
    )
}

/// Applies a blow-down delta. Simple connectivity of the result is unknown
/// until a pipeline axiom states otherwise.
pub fn apply_rational_blowdown(c: &CharNumbers, delta: &CharNumbersDelta) -> Result<CharNumbers, TopoError> {
    let shift = |x: u64, d: i64, name: &str| -> Result<u64, TopoError> {
        u64::try_from(x as i64 + d)
            .map_err(|_| TopoError::InconsistentState(format!("{name} would become negative")))
    };
    let b2_plus = shift(c.b2_plus, delta.b2_plus, "b2+")?;
    let b2_minus = shift(c.b2_minus, delta.b2_minus, "b2-")?;
    CharNumbers::new(
        c.e + delta.e,
        c.sigma + delta.sigma,
        c.b1,
        b2_plus,
        b2_minus,
        c.parity,
        SimplyConnected::Unknown,
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Classification {
    /// `m CP² # n CP²bar`.
    Odd { m: u64, n: u64 },
    /// Even intersection form; named only, not classified further.
    Even { b2_plus: u64, b2_minus: u64 },
    NotApplicable,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::Odd { m, n } => write!(f, "{m}CP² # {n}CP²bar"),
            Classification::Even { b2_plus, b2_minus } => {
                write!(f, "even form (b2+={b2_plus}, b2-={b2_minus})")
            }
            Classification::NotApplicable => write!(f, "not-applicable"),
        }
    }
}

/// Freedman's classification read off the numbers. Needs `π₁ = 1` to be at
/// least asserted.
pub fn freedman_classify(c: &CharNumbers) -> Classification {
    if !c.simply_connected.holds() || c.b1 > 0 {
        return Classification::NotApplicable;
    }
    if c.b2_plus == 0 && c.b2_minus == 0 {
        return Classification::Odd { m: 0, n: 0 };
    }
    match c.parity {
        Parity::Odd => Classification::Odd { m: c.b2_plus, n: c.b2_minus },
        Parity::Even => Classification::Even { b2_plus: c.b2_plus, b2_minus: c.b2_minus },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> CharNumbers {
        elliptic_surface_numbers(2).unwrap()
    }

    #[test]
    fn elliptic_surfaces() {
        let c = k3();
        assert_eq!((c.e(), c.sigma(), c.b2_plus(), c.b2_minus()), (24, -16, 3, 19));
        assert_eq!(c.parity(), Parity::Even);
        let c1 = elliptic_surface_numbers(1).unwrap();
        assert_eq!((c1.e(), c1.sigma(), c1.parity()), (12, -8, Parity::Odd));
        assert!(elliptic_surface_numbers(0).is_err());
    }

    #[test]
    fn constructor_rejects_inconsistency() {
        assert!(CharNumbers::new(14, -6, 0, 3, 9, Parity::Odd, SimplyConnected::Yes).is_ok());
        assert!(CharNumbers::new(15, -6, 0, 3, 9, Parity::Odd, SimplyConnected::Yes).is_err());
        assert!(CharNumbers::new(14, -5, 0, 3, 9, Parity::Odd, SimplyConnected::Yes).is_err());
        assert!(CharNumbers::new(0, 0, 1, 0, 0, Parity::Even, SimplyConnected::Yes).is_err());
    }

    #[test]
    fn knot_surgery_keeps_numbers() {
        let c = apply_knot_surgery(&k3());
        assert_eq!((c.e(), c.sigma()), (24, -16));
        assert_eq!(c.simply_connected(), SimplyConnected::Asserted);
        let thrice = apply_knot_surgery(&apply_knot_surgery(&c));
        assert_eq!(thrice, c);
    }

    #[test]
    fn blow_ups() {
        let c = apply_blow_up(&k3(), 5).unwrap();
        assert_eq!((c.e(), c.sigma(), c.b2_minus(), c.parity()), (29, -21, 24, Parity::Odd));
        let c = apply_blow_up(&k3(), 22).unwrap();
        assert_eq!((c.e(), c.sigma(), c.b2_minus()), (46, -38, 41));
        assert!(apply_blow_up(&k3(), 0).is_err());
    }

    #[test]
    fn blowdown_deltas() {
        let z5 = apply_blow_up(&apply_knot_surgery(&k3()), 5).unwrap();
        let d = CharNumbersDelta { e: -15, sigma: 15, b2_plus: 0, b2_minus: -15 };
        let x = apply_rational_blowdown(&z5, &d).unwrap();
        assert_eq!((x.e(), x.sigma(), x.b2_plus(), x.b2_minus()), (14, -6, 3, 9));
        assert_eq!(x.simply_connected(), SimplyConnected::Unknown);
        assert_eq!(freedman_classify(&x), Classification::NotApplicable);
        let x = x.with_simply_connected(SimplyConnected::Asserted).unwrap();
        assert_eq!(freedman_classify(&x).to_string(), "3CP² # 9CP²bar");

        let too_much = CharNumbersDelta { e: -30, sigma: 30, b2_plus: 0, b2_minus: -30 };
        assert!(matches!(apply_rational_blowdown(&z5, &too_much), Err(TopoError::InconsistentState(_))));
    }

    #[test]
    fn rank_one_blowdown_undoes_blow_up() {
        let c = k3();
        let up = apply_blow_up(&c, 1).unwrap();
        let d = CharNumbersDelta { e: -1, sigma: 1, b2_plus: 0, b2_minus: -1 };
        let down = apply_rational_blowdown(&up, &d).unwrap();
        assert_eq!((down.e(), down.sigma()), (c.e(), c.sigma()));
    }

    #[test]
    fn classification_cases() {
        let s4 = CharNumbers::new(2, 0, 0, 0, 0, Parity::Even, SimplyConnected::Yes).unwrap();
        assert_eq!(freedman_classify(&s4), Classification::Odd { m: 0, n: 0 });
        assert_eq!(freedman_classify(&k3()).to_string(), "even form (b2+=3, b2-=19)");
        let y = CharNumbers::new(13, -5, 0, 3, 8, Parity::Odd, SimplyConnected::Unknown).unwrap();
        assert_eq!(freedman_classify(&y), Classification::NotApplicable);
        let no = y.with_simply_connected(SimplyConnected::No).unwrap();
        assert_eq!(freedman_classify(&no), Classification::NotApplicable);
    }

    #[test]
    fn json_is_flat_and_validated() {
        let json = serde_json::to_string(&k3()).unwrap();
        assert_eq!(
            json,
            r#"{"e":24,"sigma":-16,"b1":0,"b2_plus":3,"b2_minus":19,"parity":"even","simply_connected":"yes"}"#
        );
        let back: CharNumbers = serde_json::from_str(&json).unwrap();
        assert_eq!(back, k3());
        let bad = json.replace("\"e\":24", "\"e\":25");
        assert!(serde_json::from_str::<CharNumbers>(&bad).is_err());
    }
}
