//! Registry of named, hypothesis-checked verifiers for the eigenvalue
//! inequality catalog, plus seeded instance generation and a batch suite
//! runner.
//!
//! Each [`TheoremId`] maps to one statement: an eigenvalue-count claim plus
//! an ordered inequality chain (or, for a few entries, simplicity or
//! sign-dichotomy assertions). [`check_theorem`] verifies the statement's
//! hypotheses on a concrete instance, solves every spectrum the chain needs,
//! and evaluates the chain exactly as displayed, including the conditional
//! tail clauses. [`generate_instance`] draws instances inside the hypothesis
//! region with a safety margin from excluded boundaries, and [`run_suite`]
//! drives many seeded trials per id, in parallel when the `parallel` feature
//! is enabled.

mod chains;
mod sampler;

use crate::slp::{CanonicalBC, Equation};
use crate::spectrum::SpectrumError;
use num_complex::Complex64;
use serde::Serialize;
use std::fmt;
use thiserror::Error;

pub use sampler::generate_instance;

/// Default absolute tolerance on eigenvalue comparisons.
pub const DEFAULT_TOL: f64 = 1e-8;

macro_rules! theorem_ids {
    ($(($variant:ident, $name:literal)),+ $(,)?) => {
        /// Closed registry of checkable statements. Variant names mirror
        /// the id strings of the registry.
        #[allow(non_camel_case_types)]
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
        pub enum TheoremId {
            $($variant),+
        }

        impl TheoremId {
            pub const ALL: &'static [TheoremId] = &[$(TheoremId::$variant),+];

            pub fn as_str(&self) -> &'static str {
                match self {
                    $(TheoremId::$variant => $name),+
                }
            }

            pub fn parse(s: &str) -> Option<TheoremId> {
                match s {
                    $($name => Some(TheoremId::$variant),)+
                    _ => None,
                }
            }
        }
    };
}

theorem_ids![
    (T3_1_I, "T3.1i"),
    (T3_1_II, "T3.1ii"),
    (T3_1_III, "T3.1iii"),
    (T3_1_IV, "T3.1iv"),
    (C3_1_I, "C3.1.i"),
    (C3_1_II, "C3.1.ii"),
    (C3_1_III, "C3.1.iii"),
    (C3_1_IV, "C3.1.iv"),
    (C3_1_V, "C3.1.v"),
    (C3_1_VI, "C3.1.vi"),
    (C3_1_VII, "C3.1.vii"),
    (T3_2_I, "T3.2i"),
    (T3_2_II, "T3.2ii"),
    (T3_3, "T3.3"),
    (T3_4_I, "T3.4i"),
    (T3_4_II, "T3.4ii"),
    (T3_4_III, "T3.4iii"),
    (T3_4_IV, "T3.4iv"),
    (T3_5, "T3.5"),
    (T3_6_I, "T3.6i"),
    (T3_6_II, "T3.6ii"),
    (T3_7_I, "T3.7i"),
    (T3_7_II, "T3.7ii"),
    (C3_2, "C3.2"),
    (C3_3, "C3.3"),
    (T3_8_I, "T3.8i"),
    (T3_8_II, "T3.8ii"),
    (T3_8_III, "T3.8iii"),
    (T3_8_IV, "T3.8iv"),
    (T3_9, "T3.9"),
    (T3_10, "T3.10"),
    (T3_11, "T3.11"),
    (T3_12_I, "T3.12i"),
    (T3_12_II, "T3.12ii"),
    (T4_1_I, "T4.1i"),
    (T4_1_II, "T4.1ii"),
    (T4_1_III, "T4.1iii"),
    (C4_1_I, "C4.1i"),
    (C4_1_II, "C4.1ii"),
    (L4_2, "L4.2"),
];

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CheckError {
    #[error("unknown theorem id {0:?}")]
    UnknownTheorem(String),
    #[error("instance parameters do not match {id}: expected {expected}")]
    SpecShapeMismatch {
        id: TheoremId,
        expected: &'static str,
    },
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Bc(#[from] crate::slp::BcError),
}

/// Which sub-shape of a four-case loop theorem an instance exercises.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum QuadCase {
    /// `b`-coordinate fixed at its degenerate value, two `a` sweeps.
    FixedBPair,
    /// `b`-coordinate fixed elsewhere, four `a` values around the threshold.
    FixedBQuad,
    /// `a`-coordinate fixed at its degenerate value, two `b` sweeps.
    FixedAPair,
    /// `a`-coordinate fixed elsewhere, four `b` values around the threshold.
    FixedAQuad,
}

/// Weight-vector ordering regime for the fixed-condition comparisons.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum WeightRegime {
    /// `w^(1) >= w^(2)` componentwise; comparisons fire where `λ_n^(1) > 0`.
    Decreasing,
    /// `w^(1) <= w^(2)` componentwise; comparisons fire where `λ_n^(1) <= 0`.
    Increasing,
}

/// Theorem-specific parameters attached to an instance.
#[derive(Clone, Debug, Serialize)]
pub enum TheoremParams {
    /// Four ordered angles straddling the critical angle, and a fixed `β`.
    AlphaQuad { alphas: [f64; 4], beta0: f64 },
    /// A fixed `α` and two ordered `β` values.
    BetaPair { alpha0: f64, betas: [f64; 2] },
    /// A single separated condition.
    SeparatedPoint { alpha0: f64, beta0: f64 },
    /// Four `a12` values around `1/f0` on an O14 loop with fixed `b21`.
    O14AlphaQuad {
        z: Complex64,
        b21: f64,
        a_values: [f64; 4],
    },
    /// Two `b21` values on an O14 loop with fixed `a12`.
    O14BetaPair {
        z: Complex64,
        a12: f64,
        b_values: [f64; 2],
    },
    /// Both O24 sub-chains: four `a11` values at fixed `b21`, and two `b21`
    /// values at fixed `a11`.
    O24Combo {
        z: Complex64,
        b21: f64,
        a_values: [f64; 4],
        a11: f64,
        b_values: [f64; 2],
    },
    /// One sub-case of an O23 loop theorem.
    O23Case {
        z: Complex64,
        fixed: f64,
        values: Vec<f64>,
    },
    /// One sub-case of an O13 loop theorem.
    O13Case {
        z: Complex64,
        case: QuadCase,
        fixed: f64,
        values: Vec<f64>,
    },
    /// A coupling matrix and phase.
    CoupledFamily { k: [[f64; 2]; 2], gamma: f64 },
    /// A second equation sharing one boundary condition, with the condition
    /// index of the statement and the weight regime.
    EquationPair {
        eq2: Equation,
        bc: CanonicalBC,
        condition: u8,
        regime: WeightRegime,
    },
    /// Two O14 conditions and a second equation.
    O14Pair {
        z: Complex64,
        a12: [f64; 2],
        b21: [f64; 2],
        eq2: Equation,
        condition: u8,
        regime: WeightRegime,
    },
    /// A fixed condition and a family of weight vectors.
    WeightFamily {
        bc: CanonicalBC,
        weights: Vec<Vec<f64>>,
    },
}

/// A generated or hand-built instance: the base equation plus the theorem's
/// parameters. Parameters must satisfy the theorem's hypotheses exactly;
/// [`check_theorem`] verifies rather than assumes this.
#[derive(Clone, Debug, Serialize)]
pub struct InstanceSpec {
    pub eq: Equation,
    pub params: TheoremParams,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LinkKind {
    /// Non-strict `lhs <= rhs`: violated when `rhs - lhs < -tol`.
    Le,
    /// Strict `lhs < rhs`: violated on order inversion beyond tolerance
    /// (`rhs - lhs < -tol`); gaps at or below `10 tol` are flagged tight,
    /// surfacing near-equalities that double precision cannot certify as
    /// strict.
    Lt,
    /// Exact integer equality (eigenvalue counts, multiplicities).
    EqInt,
    /// Sign dichotomy: `lhs` is a minimum and `rhs` a maximum over a family;
    /// violated when `lhs < -tol` and `rhs > tol` simultaneously.
    SignDichotomy,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainEntry {
    pub label: String,
    pub value: f64,
}

/// One comparison between two chain entries.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Link {
    pub lhs: usize,
    pub rhs: usize,
    pub kind: LinkKind,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Violation {
    /// Index into the link list.
    pub position: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
}

/// Result of checking one statement on one instance.
#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub id: TheoremId,
    pub hypotheses_met: bool,
    /// Values actually compared, in chain order.
    pub chain: Vec<ChainEntry>,
    /// The comparisons made between chain entries.
    pub links: Vec<Link>,
    pub violations: Vec<Violation>,
    /// Link positions where a strict inequality was within `10 tol` of
    /// equality.
    pub strictness_flags: Vec<usize>,
    pub passed: bool,
    /// Diagnostics: failed hypothesis clauses, recorded or-branches.
    pub notes: Vec<String>,
}

pub(crate) struct ChainBuilder {
    tol: f64,
    chain: Vec<ChainEntry>,
    links: Vec<Link>,
    notes: Vec<String>,
}

impl ChainBuilder {
    pub fn new(tol: f64) -> Self {
        Self {
            tol,
            chain: Vec::new(),
            links: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, label: impl Into<String>, value: f64) -> usize {
        self.chain.push(ChainEntry {
            label: label.into(),
            value,
        });
        self.chain.len() - 1
    }

    pub fn le(&mut self, lhs: usize, rhs: usize) {
        self.links.push(Link {
            lhs,
            rhs,
            kind: LinkKind::Le,
        });
    }

    pub fn lt(&mut self, lhs: usize, rhs: usize) {
        self.links.push(Link {
            lhs,
            rhs,
            kind: LinkKind::Lt,
        });
    }

    pub fn count_eq(&mut self, label: &str, actual: usize, expected: usize) {
        let a = self.push(format!("count({label})"), actual as f64);
        let e = self.push(format!("expected_count({label})"), expected as f64);
        self.links.push(Link {
            lhs: a,
            rhs: e,
            kind: LinkKind::EqInt,
        });
    }

    pub fn mult_eq(&mut self, label: String, actual: usize, expected: usize) {
        let a = self.push(label.clone(), actual as f64);
        let e = self.push(format!("expected_{label}"), expected as f64);
        self.links.push(Link {
            lhs: a,
            rhs: e,
            kind: LinkKind::EqInt,
        });
    }

    pub fn sign_dichotomy(&mut self, lhs: usize, rhs: usize) {
        self.links.push(Link {
            lhs,
            rhs,
            kind: LinkKind::SignDichotomy,
        });
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    /// Chain the given entries with consecutive links of one kind.
    pub fn run(&mut self, kind: LinkKind, entries: &[usize]) {
        for pair in entries.windows(2) {
            self.links.push(Link {
                lhs: pair[0],
                rhs: pair[1],
                kind,
            });
        }
    }

    pub fn finish(self, id: TheoremId) -> TheoremReport {
        let tol = self.tol;
        let mut violations = Vec::new();
        let mut tight = Vec::new();
        for (pos, link) in self.links.iter().enumerate() {
            let lhs = self.chain[link.lhs].value;
            let rhs = self.chain[link.rhs].value;
            let gap = rhs - lhs;
            match link.kind {
                LinkKind::Le => {
                    if gap < -tol {
                        violations.push(Violation {
                            position: pos,
                            lhs,
                            rhs,
                            gap,
                        });
                    }
                }
                LinkKind::Lt => {
                    if gap < -tol {
                        violations.push(Violation {
                            position: pos,
                            lhs,
                            rhs,
                            gap,
                        });
                    } else if gap <= 10.0 * tol {
                        tight.push(pos);
                    }
                }
                LinkKind::EqInt => {
                    if lhs != rhs {
                        violations.push(Violation {
                            position: pos,
                            lhs,
                            rhs,
                            gap,
                        });
                    }
                }
                LinkKind::SignDichotomy => {
                    if lhs < -tol && rhs > tol {
                        violations.push(Violation {
                            position: pos,
                            lhs,
                            rhs,
                            gap,
                        });
                    }
                }
            }
        }
        let passed = violations.is_empty();
        TheoremReport {
            id,
            hypotheses_met: true,
            chain: self.chain,
            links: self.links,
            violations,
            strictness_flags: tight,
            passed,
            notes: self.notes,
        }
    }
}

pub(crate) fn hypotheses_failed(id: TheoremId, notes: Vec<String>) -> TheoremReport {
    TheoremReport {
        id,
        hypotheses_met: false,
        chain: Vec::new(),
        links: Vec::new(),
        violations: Vec::new(),
        strictness_flags: Vec::new(),
        passed: false,
        notes,
    }
}

/// Verifies one statement on one instance at absolute tolerance `tol`.
///
/// Hypotheses are checked first; when they fail the report carries
/// `hypotheses_met = false`, an empty chain and `passed = false`. Otherwise
/// the full displayed inequality chain is evaluated from solved spectra,
/// strict links requiring `rhs - lhs > tol` (tight-flagged within `10 tol`)
/// and non-strict links requiring `rhs - lhs >= -tol`, with every
/// eigenvalue-count claim checked exactly.
pub fn check_theorem(
    id: TheoremId,
    spec: &InstanceSpec,
    tol: f64,
) -> Result<TheoremReport, CheckError> {
    chains::dispatch(id, spec, tol)
}

#[derive(Clone, Debug, Serialize)]
pub struct FailureRecord {
    pub trial: usize,
    pub size: usize,
    pub report: TheoremReport,
    pub instance: InstanceSpec,
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremOutcome {
    pub id: TheoremId,
    pub trials: usize,
    pub passed: usize,
    pub failed: usize,
    /// Total tight strictness flags across all trials.
    pub tight_links: usize,
    pub failures: Vec<FailureRecord>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteSummary {
    pub seed: u64,
    pub trials: usize,
    pub tol: f64,
    pub theorems: Vec<TheoremOutcome>,
}

impl SuiteSummary {
    pub fn all_passed(&self) -> bool {
        self.theorems.iter().all(|t| t.failed == 0)
    }
}

pub(crate) fn mix(a: u64, b: u64) -> u64 {
    let mut z = a ^ b.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn run_trial(id: TheoremId, seed: u64, trial: usize, tol: f64) -> (usize, Option<FailureRecord>) {
    let trial_seed = mix(seed, mix(id_index(id) as u64, trial as u64));
    let size = 2 + (mix(trial_seed, 0xA5A5) % 11) as usize;
    let spec = generate_instance(id, trial_seed, size);
    match check_theorem(id, &spec, tol) {
        Ok(report) => {
            let tight = report.strictness_flags.len();
            if report.passed {
                (tight, None)
            } else {
                (
                    tight,
                    Some(FailureRecord {
                        trial,
                        size,
                        report,
                        instance: spec,
                    }),
                )
            }
        }
        Err(e) => {
            let mut report = hypotheses_failed(id, vec![format!("checker error: {e}")]);
            report.hypotheses_met = true;
            (
                0,
                Some(FailureRecord {
                    trial,
                    size,
                    report,
                    instance: spec,
                }),
            )
        }
    }
}

fn id_index(id: TheoremId) -> usize {
    TheoremId::ALL.iter().position(|&x| x == id).unwrap()
}

fn collect_outcome(
    id: TheoremId,
    trials: usize,
    results: Vec<(usize, Option<FailureRecord>)>,
) -> TheoremOutcome {
    let mut tight_links = 0;
    let mut failures = Vec::new();
    for (tight, failure) in results {
        tight_links += tight;
        if let Some(f) = failure {
            failures.push(f);
        }
    }
    let failed = failures.len();
    TheoremOutcome {
        id,
        trials,
        passed: trials - failed,
        failed,
        tight_links,
        failures,
    }
}

/// Runs `trials` generated instances for each id. Deterministic in `seed`:
/// each trial derives its generator state from `(seed, id, trial index)` and
/// results are merged by trial index, so the parallel and sequential paths
/// produce identical summaries.
#[cfg(feature = "parallel")]
pub fn run_suite(ids: &[TheoremId], trials: usize, seed: u64, tol: f64) -> SuiteSummary {
    use rayon::prelude::*;
    let theorems = ids
        .iter()
        .map(|&id| {
            let results: Vec<_> = (0..trials)
                .into_par_iter()
                .map(|t| run_trial(id, seed, t, tol))
                .collect();
            collect_outcome(id, trials, results)
        })
        .collect();
    SuiteSummary {
        seed,
        trials,
        tol,
        theorems,
    }
}

#[cfg(not(feature = "parallel"))]
pub fn run_suite(ids: &[TheoremId], trials: usize, seed: u64, tol: f64) -> SuiteSummary {
    run_suite_seq(ids, trials, seed, tol)
}

/// Sequential twin of [`run_suite`]; always available, used by the bench
/// suite as the comparison baseline.
pub fn run_suite_seq(ids: &[TheoremId], trials: usize, seed: u64, tol: f64) -> SuiteSummary {
    let theorems = ids
        .iter()
        .map(|&id| {
            let results: Vec<_> = (0..trials).map(|t| run_trial(id, seed, t, tol)).collect();
            collect_outcome(id, trials, results)
        })
        .collect();
    SuiteSummary {
        seed,
        trials,
        tol,
        theorems,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn id_roundtrip() {
        assert_eq!(TheoremId::ALL.len(), 40);
        for &id in TheoremId::ALL {
            assert_eq!(TheoremId::parse(id.as_str()), Some(id));
        }
        assert_eq!(TheoremId::parse("T9.9"), None);
    }

    #[test]
    fn builder_tolerance_semantics() {
        let tol = 1e-8;
        let mut b = ChainBuilder::new(tol);
        let x = b.push("x", 0.0);
        let y = b.push("y", 5.0 * tol);
        let z = b.push("z", 20.0 * tol);
        b.lt(x, y); // strict but tight
        b.lt(y, z); // strict, comfortable: gap 15 tol > 10 tol
        b.le(z, x); // violated: gap -20 tol
        b.lt(z, y); // strict order inversion: violated
        let r = b.finish(TheoremId::T3_1_I);
        assert_eq!(r.strictness_flags, vec![0]);
        assert_eq!(r.violations.len(), 2);
        assert_eq!(r.violations[0].position, 2);
        assert_eq!(r.violations[1].position, 3);
        assert!(!r.passed);
    }
}
