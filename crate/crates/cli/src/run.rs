//! Running a job: witnesses, oracles and reports.

use crate::job::{JobSpec, SetSpec};
use aag_core::growth::{aag_growth_consistency, growth_table, GrowthReport};
use aag_core::verify::{
    compare_report, exact_kappa, nathanson_bound, verify_composition_level, verify_finite, verify_window, Evidence,
    Verification, WitnessReport,
};
use aag_core::witness::{asymptotic_witness, witness_semilinear_free, WitnessInput};
use aag_core::{ElementSet, Error};
use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use std::time::Instant;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimedReport {
    #[serde(flatten)]
    pub report: WitnessReport,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JobReport {
    pub kind: String,
    pub k: u64,
    pub threshold: u64,
    pub reports: Vec<TimedReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub growth: Option<GrowthReport>,
    /// Bound violations and failed verifications, one line each.
    pub failures: Vec<String>,
    pub elapsed_ms: f64,
}

impl JobReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

pub(crate) fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn input_of(job: &JobSpec) -> Result<WitnessInput> {
    Ok(match &job.set {
        SetSpec::Finite(elements) => WitnessInput::Finite {
            group: job.group.clone(),
            elements: elements.clone(),
        },
        SetSpec::Semilinear { .. } => WitnessInput::Semilinear(job.semilinear()?.expect("semilinear job")),
    })
}

/// Runs every requested construction and check. Verification failures are
/// collected in [`JobReport::failures`]; malformed or oversized requests
/// are errors.
pub fn run(job: &JobSpec) -> Result<JobReport> {
    job.validate()?;
    let start = Instant::now();
    let aw = asymptotic_witness(input_of(job)?, job.r)?;
    let mut reports = Vec::new();
    let mut failures = Vec::new();

    for h in job.h_range() {
        let t0 = Instant::now();
        let w = match aw.at(h) {
            Ok(w) => w,
            Err(e @ Error::BoundViolation { .. }) => {
                failures.push(format!("h = {h}: {e}"));
                continue;
            }
            Err(e) => return Err(e).with_context(|| format!("witness for h = {h}")),
        };
        let evidence = match aw.input() {
            WitnessInput::Finite { group, elements } => {
                let check = verify_finite(group, elements, &w)?;
                let mut ev = Evidence::from_check(Verification::Exact, &check);
                if let Some(limit) = job.checks.exact_kappa_limit {
                    let set: ElementSet = elements.iter().cloned().collect();
                    let rh = job.r.checked_mul(h).context("rh overflows")?;
                    let big = group.iterated_sumset(&set, rh)?;
                    let small = group.iterated_sumset(&set, h)?;
                    ev.minimal_kappa = Some(
                        exact_kappa(group, &big, &small, limit).with_context(|| format!("exact kappa for h = {h}"))?,
                    );
                }
                if job.checks.nathanson {
                    let n0 = group.torsion_subgroup_order(elements)?;
                    ev.nathanson_bound = Some(nathanson_bound(job.r, aw.k(), n0)?);
                }
                ev
            }
            WitnessInput::Semilinear(b) => {
                let k = aw.k() as usize;
                let l: Vec<usize> = b.components().iter().map(|c| c.dimension()).collect();
                let mut inclusion = Ok(());
                if job.checks.composition {
                    let vs = witness_semilinear_free(k, &l, job.r, h)?;
                    let check = verify_composition_level(k, job.r, h, &vs)?;
                    inclusion = Evidence::from_check(Verification::Exact, &check).inclusion;
                }
                if let (Some(cap), Ok(())) = (job.checks.window_cap, &inclusion) {
                    let check = verify_window(b, &w, cap)?;
                    inclusion = Evidence::from_check(Verification::Exact, &check).inclusion;
                }
                let verification = if job.checks.composition {
                    Verification::CompositionLevel {
                        window_cap: job.checks.window_cap,
                    }
                } else {
                    Verification::Window {
                        cap: job.checks.window_cap.expect("validated"),
                    }
                };
                Evidence {
                    verification,
                    inclusion,
                    minimal_kappa: None,
                    nathanson_bound: None,
                }
            }
        };
        match compare_report(&w, evidence) {
            Ok(report) => reports.push(TimedReport {
                report,
                elapsed_ms: ms(t0),
            }),
            Err(e) => failures.push(format!("h = {h}: {e}")),
        }
    }

    let growth = match (&job.checks.growth, &job.set) {
        (Some(g), SetSpec::Finite(elements)) => {
            let table = growth_table(&job.group, elements, g.length)?;
            let rep = aag_growth_consistency(&table, job.r, g.l, g.h0)?;
            if !rep.consistent {
                failures.push(format!(
                    "growth: ratio violations at {:?}, bound violations at {:?}",
                    rep.ratio_violations, rep.bound_violations
                ));
            }
            Some(rep)
        }
        _ => None,
    };

    Ok(JobReport {
        kind: if job.is_finite() { "finite" } else { "semilinear" }.into(),
        k: aw.k(),
        threshold: aw.threshold(),
        reports,
        growth,
        failures,
        elapsed_ms: ms(start),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finite_job_is_exact() {
        let job = JobSpec::from_json(
            r#"{"group": {"free_rank": 1}, "set": {"finite": [{"free": [0]}, {"free": [1]}]}, "r": 2, "h": 5,
                "checks": {"exact_kappa_limit": 40, "nathanson": true}}"#,
        )
        .unwrap();
        let rep = run(&job).unwrap();
        assert!(rep.ok());
        let w = &rep.reports[0].report;
        assert_eq!(w.verified, Verification::Exact);
        assert_eq!(w.minimal_kappa, Some(2));
        assert_eq!(w.bound, 256);
        assert_eq!(w.nathanson_bound, Some(4));
    }

    #[test]
    fn oversized_kappa_is_an_error() {
        let job = JobSpec::from_json(
            r#"{"group": {"free_rank": 1}, "set": {"finite": [{"free": [0]}, {"free": [1]}]}, "r": 3, "h": 20,
                "checks": {"exact_kappa_limit": 40}}"#,
        )
        .unwrap();
        let err = run(&job).unwrap_err();
        assert!(format!("{err:#}").contains("too large"));
    }

    #[test]
    fn inconsistent_growth_is_a_failure() {
        // |2hA| is roughly 4|hA| for a triangle in the plane
        let job = JobSpec::from_json(
            r#"{"group": {"free_rank": 2}, "set": {"finite": [{"free": [0, 0]}, {"free": [1, 0]}, {"free": [0, 1]}]}, "r": 2,
                "checks": {"growth": {"length": 16, "l": 2}}}"#,
        )
        .unwrap();
        let rep = run(&job).unwrap();
        assert!(!rep.ok());
        assert!(rep.reports.is_empty());
    }
}
