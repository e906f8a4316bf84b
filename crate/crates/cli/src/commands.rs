use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use afav_core::gadgets::{
    binary_encoding, counting_method1, counting_method2, polynomial_gadget, square_gadget,
    Gadget,
};
use afav_core::machine::{
    decide, emit_machine, enumerate_paths, parse_machine, DeadEndPruner, EnumerateOptions,
    MachineSpec, PruneHook, VerificationResult, DEFAULT_BUDGET,
};
use afav_core::oracles::{
    perfect_square, poly_image_member, poly_min_gap, square_min_gap, subsetsum_membership,
    subsetsum_min_gap, SubsetSumInstance,
};
use afav_core::protocols::{
    build_subsetsum_verifier, build_unary_verifier, build_upoly_verifier, build_usquare_verifier,
    error_target, AmplificationParam, UnaryGrowthPruner, UnaryLanguageSpec, UnaryVerifier,
    UnaryVerifierConfig,
};
use afav_core::{AffineVector, PolynomialSpec, Rational, Scalar};
use num_bigint::BigInt;

use crate::error::{core, CliError};
use crate::report::{verdict, OracleVerdict, RunReport};
use crate::{EmitTarget, GadgetKind, RunFlags};

type Outcome = Result<i32, CliError>;

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn options(flags: &RunFlags) -> EnumerateOptions {
    EnumerateOptions {
        dedup: !flags.no_dedup,
        budget: flags.budget.unwrap_or(DEFAULT_BUDGET),
        threads: flags.threads,
        ..EnumerateOptions::default()
    }
}

/// Runs, decides, prints, and returns the decision's exit code.
fn execute<S: Scalar>(
    machine: &MachineSpec<S>,
    input: &str,
    epsilon: &Rational,
    flags: &RunFlags,
    prune: Option<&dyn PruneHook<S>>,
    oracle: impl FnOnce(&VerificationResult<S>) -> Result<Option<OracleVerdict>, CliError>,
) -> Outcome {
    let start = Instant::now();
    let run = enumerate_paths(machine, input, &options(flags), prune).map_err(core)?;
    let result = decide(run.outcomes(machine), epsilon).map_err(core)?;
    let mut report = RunReport::new(machine, input, &result, flags.list_paths, start.elapsed());
    if let Some(v) = oracle(&result)? {
        report = report.with_oracle(v);
    }
    print!("{}", if flags.json { report.to_json() } else { report.to_text() });
    eprintln!("elapsed {:.3}s", report.elapsed.as_secs_f64());
    Ok(report.exit_code())
}

fn amplification(t: u64) -> Result<AmplificationParam, CliError> {
    AmplificationParam::new(t).map_err(core)
}

pub fn run(file: &Path, input: &str, epsilon: &Rational, flags: &RunFlags) -> Outcome {
    let machine = parse_machine(&read(file)?).map_err(core)?;
    let dead_end = DeadEndPruner::new(&machine, input);
    let prune = flags.prune.then_some(&dead_end as &dyn PruneHook<Rational>);
    execute(&machine, input, epsilon, flags, prune, |_| Ok(None))
}

pub fn subsetsum(t: u64, input: &str, epsilon: Option<Rational>, check: bool, flags: &RunFlags) -> Outcome {
    let t = amplification(t)?;
    let machine = build_subsetsum_verifier(t);
    let epsilon = epsilon.unwrap_or_else(|| t.error_bound());
    let dead_end = DeadEndPruner::new(&machine, input);
    let prune = flags.prune.then_some(&dead_end as &dyn PruneHook<Rational>);
    execute(&machine, input, &epsilon, flags, prune, |result| {
        if !check {
            return Ok(None);
        }
        let instance = SubsetSumInstance::parse(input).map_err(core)?;
        let member = subsetsum_membership(&instance);
        let gap = subsetsum_min_gap(&instance).map_err(core)?;
        let expected = t.path_probability(&BigInt::from(gap));
        Ok(Some(verdict(result, member, Some(expected))))
    })
}

/// USQUARE when `coeffs` is `None`, UPOLY otherwise.
pub fn polynomial(
    coeffs: Option<Vec<u64>>,
    t: u64,
    n: u64,
    epsilon: Option<Rational>,
    check: bool,
    flags: &RunFlags,
) -> Outcome {
    let t = amplification(t)?;
    let p = match &coeffs {
        Some(c) => Some(PolynomialSpec::new(c.clone()).map_err(core)?),
        None => None,
    };
    let machine = match &p {
        Some(p) => build_upoly_verifier(p, t),
        None => build_usquare_verifier(t),
    };
    let input = "0".repeat(n as usize);
    let epsilon = epsilon.unwrap_or_else(|| t.error_bound());
    let dead_end = DeadEndPruner::new(&machine, &input);
    let prune = flags.prune.then_some(&dead_end as &dyn PruneHook<Rational>);
    execute(&machine, &input, &epsilon, flags, prune, |result| {
        if !check {
            return Ok(None);
        }
        // the empty input is accepted outright unless the constant term forks it
        let c0 = p.as_ref().map_or(0, |p| p.constant());
        let (member, gap) = match &p {
            _ if n == 0 && c0 == 0 => (true, Some(BigInt::from(0))),
            None => (perfect_square(n), square_min_gap(n).map(BigInt::from)),
            Some(p) => {
                let from = if c0 > 0 { 0 } else { 1 };
                (poly_image_member(p, n), poly_min_gap(p, n, from).map(BigInt::from))
            }
        };
        let expected = gap.map(|g| t.path_probability(&g));
        Ok(Some(verdict(result, member, expected)))
    })
}

pub fn unary(
    lang: &Path,
    k: Option<Rational>,
    n: u64,
    epsilon: Option<Rational>,
    precision: Option<u32>,
    check: bool,
    flags: &RunFlags,
) -> Outcome {
    let mut language = UnaryLanguageSpec::parse(&read(lang)?).map_err(core)?;
    if let Some(t) = precision {
        language = language.as_oracle(t).map_err(core)?;
    }
    let config = match k {
        Some(k) => UnaryVerifierConfig::new(language.clone(), k),
        None => UnaryVerifierConfig::with_default_k(language.clone()),
    }
    .map_err(core)?;
    let epsilon = epsilon.unwrap_or_else(|| error_target(language.base()));
    let input = "a".repeat(n as usize);
    let oracle = |result: &VerificationResult<_>| {
        Ok(check.then(|| verdict(result, language.contains(n), None)))
    };
    match build_unary_verifier(&config).map_err(core)? {
        UnaryVerifier::Exact(machine) => {
            let pruner = UnaryGrowthPruner::new(&config, epsilon.clone());
            let prune = flags.prune.then_some(&pruner as &dyn PruneHook<Rational>);
            execute(&machine, &input, &epsilon, flags, prune, oracle)
        }
        UnaryVerifier::Interval(machine) => {
            if flags.prune {
                return Err(core(afav_core::error::ParameterError(
                    "--prune needs an exact (periodic) language".into(),
                )));
            }
            execute(&machine, &input, &epsilon, flags, None, |result| {
                Ok(check.then(|| verdict(result, language.contains(n), None)))
            })
        }
    }
}

fn show_vector(v: &AffineVector<Rational>) -> String {
    let parts: Vec<String> = v.entries().iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn report_gadget(name: &str, detail: &str, state: AffineVector<Rational>, closed: AffineVector<Rational>, value: Option<&Rational>) -> Outcome {
    let mut out = format!("gadget={name} {detail}\nstate={}\n", show_vector(&state));
    if let Some(v) = value {
        let _ = writeln!(out, "value={v}");
    }
    let agree = state == closed;
    let _ = writeln!(
        out,
        "closed-form={} match={}",
        show_vector(&closed),
        if agree { "yes" } else { "no" }
    );
    print!("{out}");
    if agree {
        Ok(0)
    } else {
        Err(CliError::GadgetMismatch(name.to_string()))
    }
}

fn repeated(name: &str, g: &Gadget, steps: u64) -> Outcome {
    let state = g.state_after(steps as usize);
    let value = state.get(g.value_index).clone();
    report_gadget(name, &format!("steps={steps}"), state, g.closed_form(steps), Some(&value))
}

pub fn gadget(kind: GadgetKind) -> Outcome {
    match kind {
        GadgetKind::Binary { w } => {
            let enc = binary_encoding();
            let state = enc.run(&w).map_err(core)?;
            let closed = enc.closed_form(&w).map_err(core)?;
            report_gadget("binary", &format!("w={w}"), state, closed, None)
        }
        GadgetKind::Count1 { steps } => repeated("count1", &counting_method1(), steps),
        GadgetKind::Count2 { steps } => repeated("count2", &counting_method2(), steps),
        GadgetKind::Square { steps, variant } => {
            repeated(&format!("square-{}", variant.name()), &square_gadget(variant), steps)
        }
        GadgetKind::Poly { coeffs, steps } => {
            let p = PolynomialSpec::new(coeffs).map_err(core)?;
            repeated(&format!("poly({p})"), &polynomial_gadget(&p), steps)
        }
    }
}

pub fn emit(target: EmitTarget, output: Option<&Path>) -> Outcome {
    let text = match target {
        EmitTarget::Subsetsum { t } => emit_machine(&build_subsetsum_verifier(amplification(t)?)),
        EmitTarget::Usquare { t } => emit_machine(&build_usquare_verifier(amplification(t)?)),
        EmitTarget::Upoly { coeffs, t } => {
            let p = PolynomialSpec::new(coeffs).map_err(core)?;
            emit_machine(&build_upoly_verifier(&p, amplification(t)?))
        }
        EmitTarget::Unary { lang, k } => {
            let language = UnaryLanguageSpec::parse(&read(&lang)?).map_err(core)?;
            let config = match k {
                Some(k) => UnaryVerifierConfig::new(language, k),
                None => UnaryVerifierConfig::with_default_k(language),
            }
            .map_err(core)?;
            match build_unary_verifier(&config).map_err(core)? {
                UnaryVerifier::Exact(m) => emit_machine(&m),
                UnaryVerifier::Interval(m) => emit_machine(&m),
            }
        }
    }
    .map_err(core)?;
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e))?,
        None => print!("{text}"),
    }
    Ok(0)
}
