//! Reduction certificates: the machine-checkable record that a cycle bounds.
//!
//! A certificate carries the input chain and one record per pipeline stage.
//! The defining identity, re-checkable from the stored chains alone, is
//!
//!   residual_before - residual_after = boundary(constructed)
//!
//! so the sum of the constructed chains bounds `input - final_residual`, and
//! the verdict is OK exactly when the final residual vanishes on the trusted
//! region and no stage reported an interior failure.

use crate::chain::Chain;
use crate::coeff::{format_coeff, Coeff};
use crate::complex::Window;
use crate::product::{ProductComplex, Region};

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Verdict {
    Ok,
    Fail,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Ok => "ok",
            Verdict::Fail => "fail",
        })
    }
}

#[derive(Clone, Debug)]
pub struct StageRecord {
    pub name: String,
    /// Degree (input degree + 1) chain with residual_after = before - d(constructed).
    pub constructed: Chain,
    pub residual_after: Chain,
    /// Region on which this stage's postconditions are asserted.
    pub region: Region,
    pub warnings: Vec<String>,
    pub failures: Vec<String>,
    pub max_tail_multiplicity: Option<u64>,
}

impl StageRecord {
    pub fn constructed_norm(&self) -> Coeff {
        self.constructed.sup_norm()
    }

    pub fn distinct_values(&self) -> usize {
        self.constructed.distinct_values()
    }

    pub fn residual_norm_on(&self, pc: &ProductComplex, region: Region) -> Coeff {
        self.residual_after.restrict_region(pc, region).sup_norm()
    }
}

#[derive(Clone, Debug)]
pub struct ReductionCertificate {
    pub pipeline: String,
    pub window: Window,
    pub input: Chain,
    pub stages: Vec<StageRecord>,
    /// Final verdict region (never vacuously larger than the stage regions).
    pub interior: Region,
    pub failures: Vec<String>,
    pub verdict: Verdict,
}

impl ReductionCertificate {
    pub fn failed(
        pipeline: &str,
        window: Window,
        input: Chain,
        interior: Region,
        failure: String,
    ) -> Self {
        ReductionCertificate {
            pipeline: pipeline.to_string(),
            window,
            input,
            stages: Vec::new(),
            interior,
            failures: vec![failure],
            verdict: Verdict::Fail,
        }
    }

    pub fn final_residual(&self) -> &Chain {
        self.stages
            .last()
            .map(|s| &s.residual_after)
            .unwrap_or(&self.input)
    }

    pub fn all_warnings(&self) -> Vec<String> {
        self.stages.iter().flat_map(|s| s.warnings.clone()).collect()
    }

    /// Independent re-check of the certificate algebra, from the stored chains
    /// alone: per-stage exactness, interior residual, verdict consistency.
    pub fn verify(&self, pc: &ProductComplex) -> Result<(), String> {
        let mut before = self.input.clone();
        for stage in &self.stages {
            let recomputed = if stage.constructed.is_empty() {
                before.clone()
            } else {
                let db = stage
                    .constructed
                    .boundary()
                    .map_err(|e| format!("stage {}: {e}", stage.name))?;
                before
                    .sub(&db)
                    .map_err(|e| format!("stage {}: {e}", stage.name))?
            };
            if recomputed != stage.residual_after {
                return Err(format!(
                    "stage {}: residual_before - d(constructed) != residual_after",
                    stage.name
                ));
            }
            before = stage.residual_after.clone();
        }
        let interior_norm = before.restrict_region(pc, self.interior).sup_norm();
        let clean = interior_norm == crate::coeff::int(0);
        let no_failures =
            self.failures.is_empty() && self.stages.iter().all(|s| s.failures.is_empty());
        let expect = if clean && no_failures { Verdict::Ok } else { Verdict::Fail };
        if expect != self.verdict {
            return Err(format!(
                "verdict {} inconsistent with residual norm {} / failures",
                self.verdict,
                format_coeff(&interior_norm)
            ));
        }
        Ok(())
    }
}

/// Computes the verdict from stage data: interior residual zero and no failures.
pub(crate) fn settle_verdict(
    pc: &ProductComplex,
    input: &Chain,
    stages: &[StageRecord],
    interior: Region,
    failures: &[String],
) -> Verdict {
    let residual = stages.last().map(|s| &s.residual_after).unwrap_or(input);
    let clean = residual.restrict_region(pc, interior).is_zero();
    let no_failures = failures.is_empty() && stages.iter().all(|s| s.failures.is_empty());
    if clean && no_failures {
        Verdict::Ok
    } else {
        Verdict::Fail
    }
}
