//! Builders for complete verifier machines.
//!
//! * [`build_subsetsum_verifier`]: `S#B_1#…#B_k` over `{0,1,#}`.
//! * [`build_usquare_verifier`], [`build_upoly_verifier`]: `0^l` with
//!   `l = i²` or `l = P(i)`.
//! * [`build_unary_verifier`]: any unary language over `{a}`, with its
//!   membership bits packed into one affine entry.

use std::fmt;

use crate::error::ParameterError;
use crate::rational::Rational;

mod polynomial;
mod subsetsum;
mod unary;

pub use polynomial::{build_upoly_verifier, build_usquare_verifier};
pub use subsetsum::build_subsetsum_verifier;
pub use unary::{
    alpha_exact, alpha_interval, build_unary_verifier, default_k, error_target, LanguageBackend,
    Membership, UnaryGrowthPruner, UnaryLanguageSpec, UnaryVerifier, UnaryVerifierConfig,
    DEFAULT_BASE, DEFAULT_TRUNCATION,
};

/// The amplification parameter `t ≥ 1`; non-members are accepted with
/// probability at most `1/(2t+1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AmplificationParam(u64);

impl AmplificationParam {
    pub fn new(t: u64) -> Result<Self, ParameterError> {
        if t == 0 {
            return Err(ParameterError("amplification t must be at least 1".into()));
        }
        Ok(AmplificationParam(t))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn as_rational(self) -> Rational {
        Rational::from(num_bigint::BigInt::from(self.0))
    }

    /// `1/(2t+1)`.
    pub fn error_bound(self) -> Rational {
        (&Rational::from_integer(2) * &self.as_rational() + Rational::from_integer(1)).recip()
    }

    /// Acceptance probability `1/(1 + 2t·gap)` of a path that misses by `gap`.
    pub fn path_probability(self, gap: &num_bigint::BigInt) -> Rational {
        let gap = Rational::from(gap.clone()).abs();
        (&(&Rational::from_integer(2) * &self.as_rational()) * &gap + Rational::from_integer(1))
            .recip()
    }
}

impl fmt::Display for AmplificationParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
