//! Exact verification of the acceptance chains.
//!
//! For every index on the proposal path the probability encoded by the
//! sampler's ratio tests is compared with `RB̄(i) / RF(i)` (below the mode)
//! or `RF(i) / RB̄(i)` (from the mode on), where both ratios are rebuilt
//! from the factorial expressions of the counts and the proposal weights.

use std::fmt;

use majorant_core::{
    FibonacciOracle, MotzkinInstance, RatioOracle, Regime, SchroderOracle, Side, Which,
};
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::exact::{
    extended_form, fibonacci_form, fraction, motzkin_form, schroder_form, CorrectedMajorant, ExactRational,
    FactorialForm,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Structure {
    Fib,
    Schroder,
    Motzkin,
}

impl Structure {
    pub fn name(self) -> &'static str {
        match self {
            Structure::Fib => "fib",
            Structure::Schroder => "schroder",
            Structure::Motzkin => "motzkin",
        }
    }

    /// Smallest size with a rejection chain.
    pub fn first_chain_size(self) -> u64 {
        match self {
            Structure::Fib => 3,
            Structure::Schroder => 2,
            Structure::Motzkin => 0,
        }
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One verified property of one instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub structure: Structure,
    pub n: u64,
    /// Final height, Motzkin only.
    pub h: Option<u64>,
    pub check: &'static str,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

struct Subject {
    structure: Structure,
    n: u64,
    h: Option<u64>,
}

impl Subject {
    fn report(&self, check: &'static str, outcome: Result<(), String>) -> CheckReport {
        CheckReport {
            structure: self.structure,
            n: self.n,
            h: self.h,
            check,
            pass: outcome.is_ok(),
            detail: outcome.err(),
        }
    }
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::Below => "below",
        Side::Above => "above",
    }
}

fn chain_indices<O: RatioOracle + ?Sized>(oracle: &O) -> impl Iterator<Item = (u64, Side)> {
    let mode = oracle.mode();
    let top = oracle.proposal_max().min(oracle.domain_max());
    (0..mode).map(|i| (i, Side::Below)).chain((mode..top).map(|i| (i, Side::Above)))
}

/// Every ratio test is proper and the encoded probability equals the exact
/// quotient of ratios.
fn step_exactness<O: RatioOracle + ?Sized>(
    oracle: &O,
    target: &FactorialForm,
    majorant: &CorrectedMajorant,
) -> Result<(), String> {
    for (i, side) in chain_indices(oracle) {
        let step = oracle.step_test(i, side);
        if let Some(t) = step.tests().find(|t| !t.is_proper()) {
            return Err(format!("i={i} {}: threshold {} above trials {:?}", side_name(side), t.threshold, t.trials));
        }
        let (num, den) = step.probability().ok_or_else(|| format!("i={i}: probability overflows u128"))?;
        let encoded = fraction(num, den);
        let quotient = majorant.ratio(i as i64) / target.ratio(i as i64);
        let expected = match side {
            Side::Below => quotient,
            Side::Above => quotient.recip(),
        };
        if encoded != expected {
            return Err(format!("i={i} {}: encoded {encoded}, expected {expected}", side_name(side)));
        }
    }
    Ok(())
}

/// `RB̄(i) < RF(i)` exactly for `i < M` on the proposal path.
fn sign_pattern<O: RatioOracle + ?Sized>(
    oracle: &O,
    target: &FactorialForm,
    majorant: &CorrectedMajorant,
) -> Result<(), String> {
    for (i, side) in chain_indices(oracle) {
        let below = majorant.ratio(i as i64) < target.ratio(i as i64);
        if below != (side == Side::Below) {
            return Err(format!("i={i}: majorant ratio {} the target ratio", if below { "below" } else { "not below" }));
        }
    }
    Ok(())
}

/// `M` is the first maximiser of `F`: `RF(M - 1) > 1 >= RF(M)`.
fn mode_check<O: RatioOracle + ?Sized>(oracle: &O, target: &FactorialForm) -> Result<(), String> {
    let m = oracle.mode() as i64;
    let one = ExactRational::one();
    if m >= 1 && target.ratio(m - 1) <= one {
        return Err(format!("F(M) <= F(M-1) at M={m}"));
    }
    if (m as u64) < oracle.domain_max() && target.ratio(m) > one {
        return Err(format!("F(M+1) > F(M) at M={m}"));
    }
    Ok(())
}

fn chain_reports<O: RatioOracle + ?Sized>(
    subject: &Subject,
    oracle: &O,
    target: &FactorialForm,
    majorant: &CorrectedMajorant,
) -> Vec<CheckReport> {
    vec![
        subject.report("mode", mode_check(oracle, target)),
        subject.report("step_exactness", step_exactness(oracle, target, majorant)),
        subject.report("sign_pattern", sign_pattern(oracle, target, majorant)),
    ]
}

fn binomial_majorant(mode: u64) -> CorrectedMajorant {
    CorrectedMajorant::new(extended_form(mode, 1, 0), mode)
}

pub fn verify_fibonacci(n: u64) -> Vec<CheckReport> {
    let subject = Subject { structure: Structure::Fib, n, h: None };
    match FibonacciOracle::new(n) {
        Ok(o) => chain_reports(&subject, &o, &fibonacci_form(n), &binomial_majorant(o.mode())),
        Err(e) => vec![subject.report("construction", Err(e.to_string()))],
    }
}

pub fn verify_schroder(n: u64) -> Vec<CheckReport> {
    let subject = Subject { structure: Structure::Schroder, n, h: None };
    match SchroderOracle::new(n) {
        Ok(o) => chain_reports(&subject, &o, &schroder_form(n), &binomial_majorant(o.mode())),
        Err(e) => vec![subject.report("construction", Err(e.to_string()))],
    }
}

/// The two inequalities next to the mode that make the extended chain
/// valid, in integers.
pub fn motzkin_boundary(inst: &MotzkinInstance) -> Option<Result<(), String>> {
    let p = inst.params()?;
    let (n, h, m) = (i128::from(inst.n()), i128::from(inst.h()), i128::from(inst.mode()));
    let (k, alpha) = (i128::from(p.k()), i128::from(p.alpha()));
    let outcome = match p.which() {
        Which::AtPlus1 => {
            let lhs = k * (n + 3 - h - 2 * m) * (n + 2 - h - 2 * m);
            let rhs = (m + h) * (k * m + alpha);
            if lhs > rhs {
                Ok(())
            } else {
                Err(format!("k(n+3-h-2M)(n+2-h-2M) = {lhs} <= (M+h)(kM+a) = {rhs}"))
            }
        }
        Which::AtMinus1 => {
            let lhs = k * (n + 1 - h - 2 * m) * (n - h - 2 * m);
            let rhs = (m + 1 + h) * (k * m + 1 + alpha);
            if lhs <= rhs {
                Ok(())
            } else {
                Err(format!("k(n+1-h-2M)(n-h-2M) = {lhs} > (M+1+h)(kM+1+a) = {rhs}"))
            }
        }
    };
    Some(outcome)
}

pub fn verify_motzkin(n: u64, h_prime: u64) -> Vec<CheckReport> {
    let subject = Subject { structure: Structure::Motzkin, n, h: Some(h_prime) };
    let inst = match MotzkinInstance::new(n, h_prime) {
        Ok(inst) => inst,
        Err(e) => return vec![subject.report("construction", Err(e.to_string()))],
    };
    let majorant = match inst.regime() {
        Regime::Extended { params, .. } => {
            CorrectedMajorant::new(extended_form(inst.mode(), params.k(), params.alpha()), inst.mode())
        }
        Regime::Basic { .. } => CorrectedMajorant::flat(),
    };
    let mut reports = chain_reports(&subject, &inst, &motzkin_form(n, inst.h()), &majorant);
    if let Some(outcome) = motzkin_boundary(&inst) {
        reports.push(subject.report("boundary_inequalities", outcome));
    }
    reports
}

/// All checks for every size from the first one with a chain up to
/// `max_n` (and, for Motzkin, every final height), in order of size.
pub fn verify_sweep(structure: Structure, max_n: u64) -> Vec<CheckReport> {
    let sizes = structure.first_chain_size()..=max_n;
    let mut reports: Vec<Vec<CheckReport>> = match structure {
        Structure::Fib => sizes.into_par_iter().map(verify_fibonacci).collect(),
        Structure::Schroder => sizes.into_par_iter().map(verify_schroder).collect(),
        Structure::Motzkin => sizes
            .into_par_iter()
            .flat_map_iter(|n| (0..=n).map(move |hp| verify_motzkin(n, hp)))
            .collect(),
    };
    reports.iter_mut().flat_map(std::mem::take).collect()
}
