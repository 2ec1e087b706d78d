//! Exact computations for elliptic fibrations over SL(2, Z) words, sphere
//! configurations in intersection lattices, rational blow-downs and formal
//! Seiberg–Witten functions.

pub mod fibration;
pub mod lattice;
pub mod laurent;
pub mod linalg;
pub mod rbd;
pub mod scenario;
pub mod sl2;
pub mod sw;
pub mod topo;
pub mod word;

pub use fibration::{
    collect_a_powers, euler_from_twists, fiber_decomposition, perturb_ik, Factorization, FiberBlock, FiberType,
    VanishingCycle,
};
pub use lattice::{Configuration, ConfigurationDoc, HomClass, ImmersedSphere, Lattice, LatticeError};
pub use laurent::LaurentPoly;
pub use rbd::{cpq_chain, descends, hj_expansion, identify_cpq, CpqLabel, DescentCriterion, PlumbingChain, RbdError};
pub use scenario::{run_scenario, Report, Scenario, ScenarioError, Verdict};
pub use sl2::Sl2Matrix;
pub use sw::{alexander_twist, blow_up_sw, rational_blowdown_sw, ConjugationSign, Fingerprint, SwError, SwFunction};
pub use topo::{freedman_classify, CharNumbers, Classification, Parity, SimplyConnected, TopoError};
pub use word::{eval_word, standard_fibration_word, words_equivalent, GenLetter, Word, WordError};
