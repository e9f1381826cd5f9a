//! Computational engine for the affine symmetric group: window-notation
//! element arithmetic, strong Bruhat order, exact Kazhdan-Lusztig
//! polynomials with memoization, fully commutative elements with string and
//! star operations, and a polynomial-free decision procedure for the leading
//! coefficient mu(x, w) when x is fully commutative.

pub mod decide;
pub mod error;
pub mod fc;
pub mod group;
pub mod kl;
pub mod order;
pub mod poly;

pub use decide::{
    decide_mu, decide_mu_with_options, replay_decision, verify_theorem, DecideOptions,
    FailureKind, MuDecision, Side, TraceStep, VerifyFailure, VerifyReport,
};
pub use error::{Error, Result};
pub use fc::{
    alternating_generator_set, alternating_product, classify_fc, enumerate_fc_by_length,
    is_fully_commutative, left_star, recognize_alternating, right_star, shi_sequence,
    string_position, FcCaseTag, FcClassification, StarPair, StringCase, StringPosition,
};
pub use group::{AffinePermutation, Caps, DescentSet, GroupContext, Word, MAX_RANK};
pub use kl::{degree_bound_check, DescentChoice, KlCache};
pub use order::{bruhat_leq, enumerate_by_length, enumerate_interval};
pub use poly::IntPolynomial;
