//! Exact simulation of affine finite automata with nondeterministic classical
//! control, used as Arthur-Merlin verifiers.
//!
//! The crate is generic over the [`Scalar`] type: [`Rational`] for exact runs
//! and [`RationalInterval`] for runs with certified enclosures. The aliases
//! below fix the scalar for the common cases.

pub mod affine;
pub mod error;
pub mod gadgets;
pub mod interval;
pub mod machine;
pub mod oracles;
pub mod protocols;
pub mod rational;
pub mod scalar;

pub use affine::{validate_operator, AffineOperator, AffineVector};
pub use error::Error;
pub use gadgets::PolynomialSpec;
pub use interval::RationalInterval;
pub use rational::Rational;
pub use scalar::{Certainty, Scalar};

pub type ExactVector = AffineVector<Rational>;
pub type IntervalVector = AffineVector<RationalInterval>;
pub type ExactOperator = AffineOperator<Rational>;
pub type IntervalOperator = AffineOperator<RationalInterval>;

pub type ExactMachine = machine::MachineSpec<Rational>;
pub type IntervalMachine = machine::MachineSpec<RationalInterval>;
pub type ExactResult = machine::VerificationResult<Rational>;
pub type IntervalResult = machine::VerificationResult<RationalInterval>;
