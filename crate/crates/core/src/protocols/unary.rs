//! Verifier for an arbitrary unary language over `{a}`.
//!
//! The membership bits `b_0 b_1 …` are packed into the real number
//! `α[j] = Σ_i b_{j+i} / B^{i+1}`. The left marker writes `(1, α[0], −α[0])`,
//! and on every symbol the verifier guesses the next bit `g` and applies
//! `A_g`, which maps `α[j]` to `B·α[j] − g`. A correct guess yields `α[j+1]`;
//! a wrong one pushes `|e2|` close to 1, after which it only grows. The guess
//! also sets the classical state (`s2` iff `g = 1`), and `A_$(k)` scales e2 and
//! e3 by `k` before weighting.
//!
//! For eventually periodic languages α is rational and the machine is exact;
//! otherwise α is enclosed in an interval from a truncated bit sum.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, Zero};

use crate::affine::AffineOperator;
use crate::error::{FormatError, ParameterError};
use crate::gadgets::PolynomialSpec;
use crate::interval::RationalInterval;
use crate::machine::{
    Configuration, MachineBuilder, MachineSpec, PruneHook, LEFT_MARKER, RIGHT_MARKER,
};
use crate::rational::Rational;
use crate::scalar::Scalar;

pub const DEFAULT_BASE: u32 = 32;
/// Bits summed for α when the language is given by a predicate.
pub const DEFAULT_TRUNCATION: u32 = 32;

/// A membership predicate on lengths.
#[derive(Clone)]
pub enum Membership {
    /// Perfect squares.
    Squares,
    /// Values `P(i)`, `i ≥ 0`.
    Poly(PolynomialSpec),
    /// An eventually periodic bit sequence.
    Bits { preperiod: Vec<bool>, period: Vec<bool> },
    Custom(Arc<dyn Fn(u64) -> bool + Send + Sync>),
}

impl fmt::Debug for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Membership::Squares => f.write_str("Squares"),
            Membership::Poly(p) => write!(f, "Poly({p})"),
            Membership::Bits { preperiod, period } => {
                write!(f, "Bits({}, {})", bit_string(preperiod), bit_string(period))
            }
            Membership::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

fn periodic_bit(preperiod: &[bool], period: &[bool], i: u64) -> bool {
    match usize::try_from(i) {
        Ok(i) if i < preperiod.len() => preperiod[i],
        _ => period[((i - preperiod.len() as u64) % period.len() as u64) as usize],
    }
}

impl Membership {
    pub fn contains(&self, n: u64) -> bool {
        match self {
            Membership::Squares => {
                let r = n.sqrt();
                r * r == n
            }
            Membership::Poly(p) => {
                let target = BigInt::from(n);
                // P(i) ≥ i, so no i beyond n can hit n
                (0..=n)
                    .map(|i| p.eval(i))
                    .take_while(|v| *v <= target)
                    .any(|v| v == target)
            }
            Membership::Bits { preperiod, period } => periodic_bit(preperiod, period, n),
            Membership::Custom(f) => f(n),
        }
    }
}

#[derive(Clone, Debug)]
pub enum LanguageBackend {
    Periodic { preperiod: Vec<bool>, period: Vec<bool> },
    Oracle { membership: Membership, truncation: u32 },
}

/// A unary language `L ⊆ a*` together with the base used to encode it.
#[derive(Clone, Debug)]
pub struct UnaryLanguageSpec {
    backend: LanguageBackend,
    base: u32,
}

fn check_base(base: u32) -> Result<(), ParameterError> {
    if base < 32 {
        return Err(ParameterError(format!("base {base} must be at least 32")));
    }
    Ok(())
}

fn parse_bits(text: &str) -> Result<Vec<bool>, ParameterError> {
    text.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(ParameterError(format!("`{other}` is not a bit"))),
        })
        .collect()
}

fn bit_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

impl UnaryLanguageSpec {
    pub fn periodic(preperiod: Vec<bool>, period: Vec<bool>, base: u32) -> Result<Self, ParameterError> {
        check_base(base)?;
        if period.is_empty() {
            return Err(ParameterError("period must be non-empty".into()));
        }
        Ok(UnaryLanguageSpec {
            backend: LanguageBackend::Periodic { preperiod, period },
            base,
        })
    }

    /// Periodic language from bit strings such as `"01"`.
    pub fn from_bits(preperiod: &str, period: &str, base: u32) -> Result<Self, ParameterError> {
        Self::periodic(parse_bits(preperiod)?, parse_bits(period)?, base)
    }

    pub fn oracle(membership: Membership, truncation: u32, base: u32) -> Result<Self, ParameterError> {
        check_base(base)?;
        if truncation == 0 {
            return Err(ParameterError("truncation depth must be at least 1".into()));
        }
        if let Membership::Bits { period, .. } = &membership {
            if period.is_empty() {
                return Err(ParameterError("period must be non-empty".into()));
            }
        }
        Ok(UnaryLanguageSpec {
            backend: LanguageBackend::Oracle {
                membership,
                truncation,
            },
            base,
        })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn backend(&self) -> &LanguageBackend {
        &self.backend
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self.backend, LanguageBackend::Periodic { .. })
    }

    pub fn truncation(&self) -> Option<u32> {
        match self.backend {
            LanguageBackend::Oracle { truncation, .. } => Some(truncation),
            LanguageBackend::Periodic { .. } => None,
        }
    }

    /// Replaces the truncation depth of an oracle-backed language.
    pub fn with_truncation(&self, truncation: u32) -> Result<Self, ParameterError> {
        match &self.backend {
            LanguageBackend::Oracle { membership, .. } => {
                Self::oracle(membership.clone(), truncation, self.base)
            }
            LanguageBackend::Periodic { .. } => Err(ParameterError(
                "truncation applies only to oracle-backed languages".into(),
            )),
        }
    }

    /// The same language behind a membership predicate, so α is only known
    /// up to `truncation` bits.
    pub fn as_oracle(&self, truncation: u32) -> Result<Self, ParameterError> {
        match &self.backend {
            LanguageBackend::Periodic { preperiod, period } => Self::oracle(
                Membership::Bits {
                    preperiod: preperiod.clone(),
                    period: period.clone(),
                },
                truncation,
                self.base,
            ),
            LanguageBackend::Oracle { .. } => self.with_truncation(truncation),
        }
    }

    /// `b_n`: whether `a^n` is in the language.
    pub fn contains(&self, n: u64) -> bool {
        match &self.backend {
            LanguageBackend::Periodic { preperiod, period } => periodic_bit(preperiod, period, n),
            LanguageBackend::Oracle { membership, .. } => membership.contains(n),
        }
    }

    /// Spec-file text, or `None` for custom predicates.
    pub fn to_text(&self) -> Option<String> {
        let mut out = format!("base {}\n", self.base);
        match &self.backend {
            LanguageBackend::Periodic { preperiod, period } => {
                if !preperiod.is_empty() {
                    out += &format!("preperiod {}\n", bit_string(preperiod));
                }
                out += &format!("period {}\n", bit_string(period));
            }
            LanguageBackend::Oracle {
                membership,
                truncation,
            } => {
                match membership {
                    Membership::Squares => out += "oracle squares\n",
                    Membership::Poly(p) => out += &format!("oracle poly {}\n", p.to_text()),
                    Membership::Bits { .. } | Membership::Custom(_) => return None,
                }
                out += &format!("truncation {truncation}\n");
            }
        }
        Some(out)
    }

    /// Reads a language spec file:
    ///
    /// ```text
    /// base 32            # optional, default 32
    /// preperiod 1        # optional
    /// period 10
    /// ```
    ///
    /// or `oracle squares` / `oracle poly c0,c1,…` with an optional
    /// `truncation <T>` (default 32).
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let mut base = None;
        let mut preperiod = None;
        let mut period = None;
        let mut oracle = None;
        let mut truncation = None;
        let mut last = 0;
        for (i, raw) in text.lines().enumerate() {
            let ln = i + 1;
            last = ln;
            let line = raw.split('#').next().unwrap_or("").trim();
            let words: Vec<&str> = line.split_whitespace().collect();
            let Some((&head, args)) = words.split_first() else {
                continue;
            };
            let syntax = |m: String| FormatError::Syntax { line: ln, message: m };
            let param = |e: ParameterError| syntax(e.0);
            let dup = |set: bool| {
                if set {
                    Err(syntax(format!("duplicate `{head}` directive")))
                } else {
                    Ok(())
                }
            };
            let number = |args: &[&str]| -> Result<u32, FormatError> {
                match args {
                    [n] => n.parse().map_err(|_| syntax(format!("invalid number `{n}`"))),
                    _ => Err(syntax(format!("expected `{head} <number>`"))),
                }
            };
            match head {
                "base" => {
                    dup(base.is_some())?;
                    base = Some(number(args)?);
                }
                "truncation" => {
                    dup(truncation.is_some())?;
                    truncation = Some(number(args)?);
                }
                "preperiod" | "period" => {
                    let bits = match args {
                        [] => Vec::new(),
                        [b] => parse_bits(b).map_err(param)?,
                        _ => return Err(syntax(format!("expected `{head} <bits>`"))),
                    };
                    let slot = if head == "period" { &mut period } else { &mut preperiod };
                    dup(slot.is_some())?;
                    *slot = Some(bits);
                }
                "oracle" => {
                    dup(oracle.is_some())?;
                    oracle = Some(match args {
                        ["squares"] => Membership::Squares,
                        ["poly", coeffs] => {
                            Membership::Poly(PolynomialSpec::parse(coeffs).map_err(param)?)
                        }
                        _ => {
                            return Err(syntax(
                                "expected `oracle squares` or `oracle poly <c0,c1,...>`".into(),
                            ))
                        }
                    });
                }
                other => return Err(syntax(format!("unknown directive `{other}`"))),
            }
        }
        let base = base.unwrap_or(DEFAULT_BASE);
        let at_end = |e: ParameterError| FormatError::Syntax {
            line: last.max(1),
            message: e.0,
        };
        match (oracle, period) {
            (Some(_), Some(_)) => Err(at_end(ParameterError(
                "`oracle` and `period` are mutually exclusive".into(),
            ))),
            (Some(m), None) => {
                if preperiod.is_some() {
                    return Err(at_end(ParameterError(
                        "`preperiod` requires `period`, not `oracle`".into(),
                    )));
                }
                Self::oracle(m, truncation.unwrap_or(DEFAULT_TRUNCATION), base).map_err(at_end)
            }
            (None, Some(p)) => {
                if truncation.is_some() {
                    return Err(at_end(ParameterError(
                        "`truncation` applies only to `oracle` languages".into(),
                    )));
                }
                Self::periodic(preperiod.unwrap_or_default(), p, base).map_err(at_end)
            }
            (None, None) => Err(FormatError::Missing("period")),
        }
    }
}

fn big(n: u64) -> BigInt {
    BigInt::from(n)
}

/// Exact `α[j]` of an eventually periodic language.
pub fn alpha_exact(lang: &UnaryLanguageSpec, j: u64) -> Result<Rational, ParameterError> {
    let LanguageBackend::Periodic { preperiod, period } = &lang.backend else {
        return Err(ParameterError(
            "exact α needs an eventually periodic language".into(),
        ));
    };
    let b = big(lang.base as u64);
    let q = period.len();
    let u = preperiod.len() as u64;
    // purely periodic tail starting at period offset `o`:
    // (Σ_i c_{o+i} B^{q−1−i}) / (B^q − 1)
    let tail = |o: usize| -> Rational {
        let num = (0..q).fold(BigInt::zero(), |acc, i| {
            acc * &b + u32::from(period[(o + i) % q])
        });
        Rational::from_bigints(num, b.pow(q as u32) - 1u32)
    };
    if j >= u {
        return Ok(tail(((j - u) % q as u64) as usize));
    }
    // head bits j..u, then the tail scaled by B^{−(u−j)}
    let n = (u - j) as usize;
    let head = preperiod[j as usize..]
        .iter()
        .fold(BigInt::zero(), |acc, &bit| acc * &b + u32::from(bit));
    let scale = Rational::from_bigints(BigInt::one(), b.pow(n as u32));
    Ok(&(&Rational::from(head) + &tail(0)) * &scale)
}

/// Enclosure of `α[j]` from the `truncation` bits `b_j … b_{j+T−1}`:
/// `[s, s + 1/((B−1)·B^T)]` where `s` is their weighted sum.
pub fn alpha_interval(lang: &UnaryLanguageSpec, j: u64, truncation: u32) -> RationalInterval {
    let b = big(lang.base as u64);
    let num = (0..truncation as u64).fold(BigInt::zero(), |acc, i| {
        acc * &b + u32::from(lang.contains(j + i))
    });
    let denom = b.pow(truncation);
    let lo = Rational::from_bigints(num.clone(), denom.clone());
    let hi = Rational::from_bigints(num * (&b - 1u32) + 1u32, denom * (&b - 1u32));
    RationalInterval::new(lo, hi).expect("lo ≤ hi")
}

fn sqrt_at_least(m: u64, n: u64, scale: u64) -> bool {
    // n/scale ≥ 1/(1+√m)  ⟺  n·√m ≥ scale − n
    n >= scale || big(n).pow(2) * m >= big(scale - n).pow(2)
}

/// Error target `ε_B`: `1/(1+√(B−2))` rounded up to three decimals
/// (0.155 for B = 32).
pub fn error_target(base: u32) -> Rational {
    let m = base as u64 - 2;
    let n = (1..=1000)
        .find(|&n| sqrt_at_least(m, n, 1000))
        .expect("n = 1000 always qualifies");
    Rational::new(n as i64, 1000)
}

/// `k* = (B−1)/(2√(B−2))`, which balances the two bounds, rounded to the
/// nearest hundredth (283/100 for B = 32).
///
/// When that rounding misses the window allowed by the error target, more
/// decimals are used; when `B−2` is a perfect square `k*` is rational and is
/// returned as is (then it is the only admissible value).
pub fn default_k(base: u32) -> Rational {
    let m = base as u64 - 2;
    let b1 = big(base as u64 - 1);
    let s = m.sqrt();
    if s * s == m {
        return Rational::from_bigints(b1, big(2 * s));
    }
    let eps = error_target(base);
    (2u32..)
        .map(|d| {
            let scale = big(10).pow(d);
            // (scale·k*)² = scale²(B−1)²/(4m)
            let target = &scale * &scale * &b1 * &b1;
            let mut j = (&target / (4 * m)).sqrt();
            while (&j + 1u32).pow(2) * (4 * m) <= target {
                j += 1u32;
            }
            // round half up: scale·k* ≥ j + 1/2  ⟺  scale²(B−1)² ≥ m(2j+1)²
            if target >= (big(2) * &j + 1u32).pow(2) * m {
                j += 1u32;
            }
            Rational::from_bigints(j, scale)
        })
        .find(|k| admissible(base, k, &eps))
        .expect("k* lies strictly inside the admissible window")
}

fn completeness_bound(base: u32, k: &Rational) -> Rational {
    let b1 = Rational::from_integer(base as i64 - 1);
    (Rational::one() + &(&Rational::from_integer(2) * k) / &b1).recip()
}

fn soundness_bound(base: u32, k: &Rational) -> Rational {
    let b = base as i64;
    let ratio = Rational::new(b - 2, b - 1);
    (Rational::one() + &(&Rational::from_integer(2) * k) * &ratio).recip()
}

fn admissible(base: u32, k: &Rational, eps: &Rational) -> bool {
    completeness_bound(base, k) >= &Rational::one() - eps && &soundness_bound(base, k) <= eps
}

/// A language, the base-derived error targets, and the end-marker factor `k`.
#[derive(Clone, Debug)]
pub struct UnaryVerifierConfig {
    language: UnaryLanguageSpec,
    k: Rational,
}

impl UnaryVerifierConfig {
    /// Checks both bound inequalities for `k`.
    pub fn new(language: UnaryLanguageSpec, k: Rational) -> Result<Self, ParameterError> {
        let cfg = UnaryVerifierConfig { language, k };
        cfg.check()?;
        Ok(cfg)
    }

    pub fn with_default_k(language: UnaryLanguageSpec) -> Result<Self, ParameterError> {
        let k = default_k(language.base);
        Self::new(language, k)
    }

    fn check(&self) -> Result<(), ParameterError> {
        if !self.k.is_positive() {
            return Err(ParameterError(format!("k = {} must be positive", self.k)));
        }
        let (lo, hi) = (self.completeness_bound(), self.soundness_bound());
        let (want_lo, want_hi) = (self.completeness_target(), self.soundness_target());
        let b = self.language.base;
        if lo < want_lo {
            return Err(ParameterError(format!(
                "k = {} fails the completeness inequality 1/(1+2k/{}) = {lo} ≥ {want_lo}",
                self.k,
                b - 1
            )));
        }
        if hi > want_hi {
            return Err(ParameterError(format!(
                "k = {} fails the soundness inequality 1/(1+2k·{}/{}) = {hi} ≤ {want_hi}",
                self.k,
                b - 2,
                b - 1
            )));
        }
        Ok(())
    }

    pub fn language(&self) -> &UnaryLanguageSpec {
        &self.language
    }

    pub fn k(&self) -> &Rational {
        &self.k
    }

    pub fn base(&self) -> u32 {
        self.language.base
    }

    /// Worst member acceptance on the correct path: `1/(1 + 2k/(B−1))`.
    pub fn completeness_bound(&self) -> Rational {
        completeness_bound(self.base(), &self.k)
    }

    /// Best non-member acceptance: `1/(1 + 2k(B−2)/(B−1))`.
    pub fn soundness_bound(&self) -> Rational {
        soundness_bound(self.base(), &self.k)
    }

    pub fn soundness_target(&self) -> Rational {
        error_target(self.base())
    }

    pub fn completeness_target(&self) -> Rational {
        Rational::one() - error_target(self.base())
    }
}

/// The built machine: exact for periodic languages, interval-valued for
/// oracle-backed ones.
#[derive(Clone, Debug)]
pub enum UnaryVerifier {
    Exact(MachineSpec<Rational>),
    Interval(MachineSpec<RationalInterval>),
}

impl UnaryVerifier {
    pub fn name(&self) -> &str {
        match self {
            UnaryVerifier::Exact(m) => m.name(),
            UnaryVerifier::Interval(m) => m.name(),
        }
    }
}

fn rows(r: [[Rational; 3]; 3]) -> AffineOperator<Rational> {
    AffineOperator::from_rows(r.into_iter().map(Vec::from).collect())
        .expect("verifier operator has unit column sums")
}

/// `A_g`: e2 ↦ B·e2 − g, keeping the form (1, x, −x).
fn guess(base: u32, g: i64) -> AffineOperator<Rational> {
    let z = Rational::zero;
    let b = Rational::from_integer(base as i64);
    let m = Rational::from_integer(1 - base as i64);
    rows([
        [Rational::one(), m.clone(), m],
        [Rational::from_integer(-g), b.clone(), z()],
        [Rational::from_integer(g), z(), b],
    ])
}

fn end_marker(k: &Rational) -> AffineOperator<Rational> {
    let z = Rational::zero;
    let u = &Rational::one() - k;
    rows([
        [Rational::one(), u.clone(), u],
        [z(), k.clone(), z()],
        [z(), z(), k.clone()],
    ])
}

fn load<S: Scalar>(alpha: &S) -> AffineOperator<S> {
    let (o, z) = (S::one(), S::zero());
    AffineOperator::from_rows(vec![
        vec![o.clone(), z.clone(), z.clone()],
        vec![alpha.clone(), o.clone(), z.clone()],
        vec![alpha.neg_ref(), z, o],
    ])
    .expect("column sums contain 1")
}

fn assemble<S: Scalar>(cfg: &UnaryVerifierConfig, alpha: S) -> MachineSpec<S> {
    let lift = |op: AffineOperator<Rational>| op.map(S::from_rational);
    let base = cfg.base();
    let load = load(&alpha);
    let (a0, a1) = (lift(guess(base, 0)), lift(guess(base, 1)));
    let start0 = a0.compose(&load).expect("dimension 3");
    let start1 = a1.compose(&load).expect("dimension 3");

    let mut b = MachineBuilder::new(format!("unary-b{base}"), 3);
    let s1 = b.state("s1");
    let s2 = b.state("s2");
    b.alphabet(['a']);
    let mut op = |name: &str, m| b.operator(name, m).expect("dimension 3, unique names");
    let (start0, start1) = (op("Start0", start0), op("Start1", start1));
    let (a0, a1) = (op("A0", a0), op("A1", a1));
    let end = op("End", lift(end_marker(&cfg.k)));
    b.transition(s1, LEFT_MARKER, s1, start0)
        .transition(s1, LEFT_MARKER, s2, start1);
    for s in [s1, s2] {
        b.transition(s, 'a', s1, a0)
            .transition(s, 'a', s2, a1)
            .transition(s, RIGHT_MARKER, s, end);
    }
    b.initial(s1, 0).accept(s2, [0]);
    b.build().expect("well-formed verifier")
}

pub fn build_unary_verifier(cfg: &UnaryVerifierConfig) -> Result<UnaryVerifier, ParameterError> {
    cfg.check()?;
    Ok(match &cfg.language.backend {
        LanguageBackend::Periodic { .. } => {
            UnaryVerifier::Exact(assemble(cfg, alpha_exact(&cfg.language, 0)?))
        }
        LanguageBackend::Oracle { truncation, .. } => UnaryVerifier::Interval(assemble(
            cfg,
            alpha_interval(&cfg.language, 0, *truncation),
        )),
    })
}

/// Cuts paths of the exact unary verifier that have already made a wrong
/// guess.
///
/// Once `|e2| ≥ (B−2)/(B−1)`, each further symbol maps `x ↦ |B·x − g| ≥ B·x − 1`,
/// so with `r` symbols left the final acceptance is at most `1/(1 + 2k·x_r)`.
/// A path is cut when at least one symbol remains and that bound is at most
/// `epsilon`; the bound is reported as its probability. Paths whose guesses
/// are right up to the last symbol are never cut, so the maximum and minimum
/// over all paths are unchanged.
#[derive(Clone, Debug)]
pub struct UnaryGrowthPruner {
    base: Rational,
    threshold: Rational,
    two_k: Rational,
    epsilon: Rational,
}

impl UnaryGrowthPruner {
    pub fn new(cfg: &UnaryVerifierConfig, epsilon: Rational) -> Self {
        let b = cfg.base() as i64;
        UnaryGrowthPruner {
            base: Rational::from_integer(b),
            threshold: Rational::new(b - 2, b - 1),
            two_k: &Rational::from_integer(2) * cfg.k(),
            epsilon,
        }
    }
}

impl PruneHook<Rational> for UnaryGrowthPruner {
    fn certify(&self, config: &Configuration<Rational>, next: usize, marked: &[char]) -> Option<Rational> {
        let remaining = marked.len().checked_sub(next + 1)?;
        if remaining == 0 {
            return None;
        }
        let v = config.affine.entries();
        if v.len() != 3 || !v[0].is_one() || v[2] != -&v[1] {
            return None;
        }
        let mut x = v[1].abs();
        if x < self.threshold {
            return None;
        }
        let one = Rational::one();
        for _ in 0..remaining {
            x = &(&self.base * &x) - &one;
        }
        let bound = (one + &self.two_k * &x).recip();
        (bound <= self.epsilon).then_some(bound)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{
        emit_machine, enumerate_paths, trace_path, EnumerateOptions, PathOutcome,
    };

    fn even() -> UnaryLanguageSpec {
        UnaryLanguageSpec::from_bits("", "10", 32).unwrap()
    }

    fn exact(cfg: &UnaryVerifierConfig) -> MachineSpec<Rational> {
        match build_unary_verifier(cfg).unwrap() {
            UnaryVerifier::Exact(m) => m,
            UnaryVerifier::Interval(_) => panic!("periodic language builds an exact machine"),
        }
    }

    fn outcomes(m: &MachineSpec<Rational>, l: usize) -> Vec<PathOutcome<Rational>> {
        enumerate_paths(m, &"a".repeat(l), &EnumerateOptions::default(), None)
            .unwrap()
            .outcomes(m)
    }

    #[test]
    fn alpha_examples() {
        let zero = UnaryLanguageSpec::from_bits("", "0", 32).unwrap();
        let ones = UnaryLanguageSpec::from_bits("", "1", 32).unwrap();
        for j in 0..5 {
            assert_eq!(alpha_exact(&zero, j).unwrap(), Rational::zero());
            assert_eq!(alpha_exact(&ones, j).unwrap(), Rational::new(1, 31));
        }
        assert_eq!(alpha_exact(&even(), 0).unwrap(), Rational::new(32, 1023));
        assert_eq!(alpha_exact(&even(), 1).unwrap(), Rational::new(1, 1023));
    }

    #[test]
    fn alpha_recurrence_and_range() {
        let lang = UnaryLanguageSpec::from_bits("0110100", "1101", 40).unwrap();
        let b = Rational::from_integer(40);
        let top = Rational::new(1, 39);
        for j in 0..30 {
            let a = alpha_exact(&lang, j).unwrap();
            assert!(a >= Rational::zero() && a <= top);
            let bit = Rational::from_integer(lang.contains(j) as i64);
            assert_eq!(alpha_exact(&lang, j + 1).unwrap(), &(&b * &a) - &bit, "j = {j}");
        }
    }

    #[test]
    fn alpha_interval_nesting_and_containment() {
        let squares = UnaryLanguageSpec::oracle(Membership::Squares, 4, 32).unwrap();
        let none = UnaryLanguageSpec::oracle(Membership::Custom(Arc::new(|_| false)), 4, 32).unwrap();
        assert_eq!(
            alpha_interval(&none, 3, 5),
            RationalInterval::new(Rational::zero(), Rational::new(1, 31 * 32i64.pow(5))).unwrap()
        );
        let lang = UnaryLanguageSpec::from_bits("1", "011", 32).unwrap();
        let oracle = lang.as_oracle(8).unwrap();
        for j in 0..6 {
            let exact = alpha_exact(&lang, j).unwrap();
            let mut prev: Option<RationalInterval> = None;
            for t in 1..12 {
                let iv = alpha_interval(&oracle, j, t);
                assert!(iv.contains(&exact));
                if let Some(p) = prev {
                    assert!(p.encloses(&iv));
                    assert_eq!(p.width(), &iv.width() * &Rational::from_integer(32));
                }
                prev = Some(iv);
            }
        }
        // bits 1, 1, 0 for lengths 0, 1, 2
        assert_eq!(alpha_interval(&squares, 0, 3).lo(), &Rational::new(33, 1024));
    }

    #[test]
    fn targets_and_default_k() {
        assert_eq!(error_target(32), Rational::new(155, 1000));
        assert_eq!(error_target(64), Rational::new(113, 1000));
        assert_eq!(default_k(32), Rational::new(283, 100));
        assert_eq!(default_k(64), Rational::from_integer(4));
        assert_eq!(default_k(51), Rational::new(25, 7));
        let cfg = UnaryVerifierConfig::with_default_k(even()).unwrap();
        assert_eq!(cfg.completeness_bound(), Rational::new(1550, 1833));
        assert_eq!(cfg.soundness_bound(), Rational::new(3100, 20080));
        for base in 32..=200 {
            let lang = UnaryLanguageSpec::from_bits("", "1", base).unwrap();
            assert!(UnaryVerifierConfig::with_default_k(lang).is_ok(), "base {base}");
        }
    }

    #[test]
    fn bad_k_names_the_inequality() {
        let err = UnaryVerifierConfig::new(even(), Rational::from_integer(4)).unwrap_err();
        assert!(err.0.contains("completeness"), "{err}");
        let err = UnaryVerifierConfig::new(even(), Rational::from_integer(2)).unwrap_err();
        assert!(err.0.contains("soundness"), "{err}");
        assert!(UnaryVerifierConfig::new(even(), Rational::from_integer(-1)).is_err());
    }

    #[test]
    fn even_language_bounds() {
        let cfg = UnaryVerifierConfig::with_default_k(even()).unwrap();
        let m = exact(&cfg);
        let member = outcomes(&m, 2);
        assert_eq!(member.len(), 8);
        let best = member.iter().map(|o| o.probability.clone()).max().unwrap();
        assert!(best >= Rational::new(1550, 1833));
        assert!(best > Rational::new(845, 1000));
        let non = outcomes(&m, 1);
        assert_eq!(non.len(), 4);
        assert!(non.iter().all(|o| o.probability <= Rational::new(3100, 20080)));
    }

    #[test]
    fn all_zero_language() {
        let lang = UnaryLanguageSpec::from_bits("", "0", 32).unwrap();
        let cfg = UnaryVerifierConfig::with_default_k(lang).unwrap();
        let m = exact(&cfg);
        for l in 0..5usize {
            let correct = vec![0u8; l + 2];
            let trace = trace_path(&m, &"a".repeat(l), &correct).unwrap();
            assert_eq!(trace.last().unwrap().state, m.state_id("s1").unwrap());
            let all = outcomes(&m, l);
            assert!(all.iter().all(|o| o.probability <= cfg.soundness_bound()));
        }
    }

    #[test]
    fn correct_path_tracks_alpha() {
        let lang = UnaryLanguageSpec::from_bits("01", "001", 32).unwrap();
        let cfg = UnaryVerifierConfig::with_default_k(lang.clone()).unwrap();
        let m = exact(&cfg);
        let l = 7;
        let mut choices: Vec<u8> = (0..=l).map(|i| lang.contains(i) as u8).collect();
        choices.push(0);
        let trace = trace_path(&m, &"a".repeat(l as usize), &choices).unwrap();
        for j in 1..=l + 1 {
            assert_eq!(trace[j as usize].affine.get(1), &alpha_exact(&lang, j).unwrap());
        }
    }

    #[test]
    fn pruning_keeps_extremes() {
        let lang = UnaryLanguageSpec::from_bits("1", "100", 32).unwrap();
        let cfg = UnaryVerifierConfig::with_default_k(lang).unwrap();
        let m = exact(&cfg);
        let hook = UnaryGrowthPruner::new(&cfg, cfg.soundness_target());
        for l in 0..7 {
            let input = "a".repeat(l);
            let full = outcomes(&m, l);
            let cut = enumerate_paths(&m, &input, &EnumerateOptions::default(), Some(&hook))
                .unwrap()
                .outcomes(&m);
            let ext = |v: &[PathOutcome<Rational>]| {
                let ps = v.iter().map(|o| o.probability.clone());
                (ps.clone().max().unwrap(), ps.min().unwrap())
            };
            assert_eq!(ext(&full), ext(&cut), "l = {l}");
            if l >= 2 {
                assert!(cut.iter().any(|o| o.pruned_at.is_some()));
            }
        }
    }

    #[test]
    fn interval_backend_contains_exact() {
        let lang = UnaryLanguageSpec::from_bits("", "110", 32).unwrap();
        let cfg = UnaryVerifierConfig::with_default_k(lang.clone()).unwrap();
        let m = exact(&cfg);
        let icfg = UnaryVerifierConfig::new(lang.as_oracle(10).unwrap(), cfg.k().clone()).unwrap();
        let UnaryVerifier::Interval(im) = build_unary_verifier(&icfg).unwrap() else {
            panic!("oracle language builds an interval machine");
        };
        assert!(emit_machine(&im).is_err());
        for l in 0..4 {
            let input = "a".repeat(l);
            let e = outcomes(&m, l);
            let i = enumerate_paths(&im, &input, &EnumerateOptions::default(), None)
                .unwrap()
                .outcomes(&im);
            assert_eq!(e.len(), i.len());
            for (x, y) in e.iter().zip(&i) {
                assert_eq!(x.choices, y.choices);
                assert!(y.probability.contains(&x.probability));
            }
        }
    }

    #[test]
    fn spec_files() {
        let lang = UnaryLanguageSpec::parse("# evens\nbase 40\nperiod 10\n").unwrap();
        assert_eq!(lang.base(), 40);
        assert!(lang.contains(4) && !lang.contains(5));
        let sq = UnaryLanguageSpec::parse("oracle squares\ntruncation 12").unwrap();
        assert_eq!(sq.truncation(), Some(12));
        assert!(sq.contains(49) && !sq.contains(50));
        let p = UnaryLanguageSpec::parse("oracle poly 1,1,1").unwrap();
        assert_eq!(p.truncation(), Some(DEFAULT_TRUNCATION));
        assert!(p.contains(1) && p.contains(3) && p.contains(7) && !p.contains(4));
        let text = "base 32\npreperiod 011\nperiod 1\n";
        assert_eq!(UnaryLanguageSpec::parse(text).unwrap().to_text().unwrap(), text);

        assert_eq!(UnaryLanguageSpec::parse("base 32").unwrap_err(), FormatError::Missing("period"));
        assert!(matches!(
            UnaryLanguageSpec::parse("period 10\nbase 16"),
            Err(FormatError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            UnaryLanguageSpec::parse("period 1x"),
            Err(FormatError::Syntax { line: 1, .. })
        ));
        assert!(UnaryLanguageSpec::parse("period 1\noracle squares").is_err());
        assert!(UnaryLanguageSpec::parse("period").is_err());
    }
}
