//! The JSON job format.

use aag_core::json_int;
use aag_core::{GroupElement, GroupSpec, LinearSet, SemilinearSet};
use anyhow::{bail, ensure, Context, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub group: GroupSpec,
    pub set: SetSpec,
    #[serde(with = "json_int::u64")]
    pub r: u64,
    /// First `h` of the range; may be omitted for growth-only jobs.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "json_int::opt_u64")]
    pub h: Option<u64>,
    /// Last `h` of the range, inclusive. Defaults to `h`.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "json_int::opt_u64")]
    pub h_max: Option<u64>,
    #[serde(default)]
    pub checks: Checks,
}

/// Exactly one kind of set per job.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SetSpec {
    Finite(Vec<GroupElement>),
    Semilinear { components: Vec<LinearSet> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Checks {
    /// Brute-force `rhA ⊆ X + hA` (finite sets).
    #[serde(default = "yes")]
    pub exact: bool,
    /// Composition-level check (semilinear sets).
    #[serde(default = "yes")]
    pub composition: bool,
    /// Window check with this coefficient cap (semilinear sets).
    #[serde(default, skip_serializing_if = "Option::is_none", with = "json_int::opt_u64")]
    pub window_cap: Option<u64>,
    /// Compute `κ(rhA, hA)` when `|rhA|` is at most this.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_kappa_limit: Option<usize>,
    #[serde(default)]
    pub nathanson: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub growth: Option<GrowthCheck>,
}

fn yes() -> bool {
    true
}

fn one() -> u64 {
    1
}

impl Default for Checks {
    fn default() -> Self {
        Checks {
            exact: true,
            composition: true,
            window_cap: None,
            exact_kappa_limit: None,
            nathanson: false,
            growth: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrowthCheck {
    /// Table length `H`.
    #[serde(with = "json_int::u64")]
    pub length: u64,
    /// Ratio constant `L`.
    #[serde(with = "json_int::u64")]
    pub l: u64,
    #[serde(default = "one", with = "json_int::u64")]
    pub h0: u64,
}

impl JobSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let job: JobSpec = serde_json::from_str(text).context("malformed job")?;
        job.validate()?;
        Ok(job)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("job serialises")
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.set, SetSpec::Finite(_))
    }

    /// The `h` values to run, none for growth-only jobs.
    pub fn h_range(&self) -> Vec<u64> {
        match self.h {
            Some(h) => (h..=self.h_max.unwrap_or(h)).collect(),
            None => Vec::new(),
        }
    }

    pub fn semilinear(&self) -> Result<Option<SemilinearSet>> {
        match &self.set {
            SetSpec::Finite(_) => Ok(None),
            SetSpec::Semilinear { components } => Ok(Some(
                SemilinearSet::new(self.group.clone(), components.clone()).context("set.semilinear")?,
            )),
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure!(self.r >= 1, "r: must be positive");
        if let Some(h) = self.h {
            ensure!(h >= 1, "h: must be positive");
            if let Some(hm) = self.h_max {
                ensure!(hm >= h, "h_max: {hm} is below h = {h}");
            }
        } else {
            ensure!(self.h_max.is_none(), "h_max: given without h");
            ensure!(
                self.checks.growth.is_some(),
                "h: required unless the job only asks for a growth table"
            );
        }
        match &self.set {
            SetSpec::Finite(elements) => {
                ensure!(!elements.is_empty(), "set.finite: empty");
                for (i, g) in elements.iter().enumerate() {
                    ensure!(
                        self.group.contains(g),
                        "set.finite[{i}]: {g} is not a canonical element of the group"
                    );
                }
                let mut sorted = elements.clone();
                sorted.sort();
                sorted.dedup();
                ensure!(sorted.len() == elements.len(), "set.finite: repeated elements");
                if self.h.is_some() {
                    ensure!(
                        self.checks.exact,
                        "checks.exact: finite sets are always verified exactly"
                    );
                }
            }
            SetSpec::Semilinear { .. } => {
                let b = self.semilinear()?.expect("semilinear");
                let k = b.decompose_bounded().context("set.semilinear")?.components().len() as u64;
                let threshold = 2 * k + 1;
                if let Some(h) = self.h {
                    ensure!(
                        h >= threshold,
                        "h: {h} is below the threshold 2k + 1 = {threshold} for k = {k}"
                    );
                }
                ensure!(
                    self.checks.composition || self.checks.window_cap.is_some(),
                    "checks: a semilinear job needs composition or window_cap"
                );
                if self.checks.exact_kappa_limit.is_some() {
                    bail!("checks.exact_kappa_limit: only finite sets have finite S1");
                }
                if self.checks.nathanson {
                    bail!("checks.nathanson: the comparison is defined for finite sets");
                }
                if self.checks.growth.is_some() {
                    bail!("checks.growth: growth tables need a finite set");
                }
            }
        }
        if let Some(g) = &self.checks.growth {
            ensure!(g.length >= 1, "checks.growth.length: must be positive");
            ensure!(self.r >= 2 && g.l >= 2, "checks.growth: r and l must be at least 2");
            ensure!(g.h0 >= 1, "checks.growth.h0: must be positive");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn finite_job() -> JobSpec {
        JobSpec {
            group: GroupSpec::integers(),
            set: SetSpec::Finite(vec![GroupElement::free(vec![0]), GroupElement::free(vec![1])]),
            r: 2,
            h: Some(5),
            h_max: None,
            checks: Checks::default(),
        }
    }

    #[test]
    fn parses_minimal_jobs() {
        let job = JobSpec::from_json(
            r#"{"group": {"free_rank": 1}, "set": {"finite": [{"free": [0]}, {"free": [1]}]}, "r": 2, "h": 5}"#,
        )
        .unwrap();
        assert_eq!(job, finite_job());
        let big = JobSpec::from_json(
            r#"{"group": {"free_rank": 1}, "set": {"finite": [{"free": ["9007199254740993"]}]}, "r": 2, "h": "5"}"#,
        )
        .unwrap();
        assert_eq!(big.h, Some(5));
    }

    #[test]
    fn rejects_bad_jobs() {
        let both =
            r#"{"group": {"free_rank": 1}, "set": {"finite": [], "semilinear": {"components": []}}, "r": 2, "h": 5}"#;
        assert!(JobSpec::from_json(both).is_err());
        let unknown = r#"{"group": {"free_rank": 1}, "set": {"finite": [{"free": [0]}]}, "r": 2, "h": 5, "x": 1}"#;
        assert!(JobSpec::from_json(unknown).is_err());
        let low = r#"{"group": {"free_rank": 1}, "set": {"semilinear": {"components": [{"base": {"free": [1]}, "steps": [{"free": [1]}]}]}}, "r": 2, "h": 2}"#;
        let err = JobSpec::from_json(low).unwrap_err();
        assert!(format!("{err:#}").contains("threshold"));
        let wrong_shape = r#"{"group": {"free_rank": 1}, "set": {"finite": [{"free": [0, 1]}]}, "r": 2, "h": 5}"#;
        assert!(format!("{:#}", JobSpec::from_json(wrong_shape).unwrap_err()).contains("set.finite[0]"));
        let syntax = "{\n  \"group\": {\"free_rank\": 1},\n  \"r\": }";
        assert!(format!("{:#}", JobSpec::from_json(syntax).unwrap_err()).contains("line 3"));
    }

    fn arb_element() -> impl Strategy<Value = GroupElement> {
        (proptest::collection::vec(any::<i64>(), 2), 0i64..6).prop_map(|(f, t)| GroupElement {
            free: f,
            torsion: vec![t],
        })
    }

    fn arb_job() -> impl Strategy<Value = JobSpec> {
        let set = prop_oneof![
            proptest::collection::vec(arb_element(), 1..4).prop_map(SetSpec::Finite),
            proptest::collection::vec(
                (
                    arb_element(),
                    proptest::collection::vec(arb_element(), 0..3),
                    any::<bool>(),
                    0u64..1 << 60
                ),
                1..3
            )
            .prop_map(|cs| SetSpec::Semilinear {
                components: cs
                    .into_iter()
                    .map(|(b, s, bounded, m)| {
                        let bounds = bounded.then(|| s.iter().map(|_| Some(m)).collect());
                        LinearSet::new(b, s, bounds).unwrap()
                    })
                    .collect()
            }),
        ];
        (
            set,
            any::<u64>(),
            proptest::option::of(any::<u64>()),
            proptest::option::of(any::<u64>()),
            (
                any::<bool>(),
                any::<bool>(),
                proptest::option::of(any::<u64>()),
                proptest::option::of(0usize..100),
                any::<bool>(),
            ),
            proptest::option::of((any::<u64>(), any::<u64>(), any::<u64>())),
        )
            .prop_map(
                |(set, r, h, h_max, (exact, composition, window_cap, exact_kappa_limit, nathanson), growth)| JobSpec {
                    group: GroupSpec::new(2, vec![6]).unwrap(),
                    set,
                    r,
                    h,
                    h_max,
                    checks: Checks {
                        exact,
                        composition,
                        window_cap,
                        exact_kappa_limit,
                        nathanson,
                        growth: growth.map(|(length, l, h0)| GrowthCheck { length, l, h0 }),
                    },
                },
            )
    }

    proptest! {
        #[test]
        fn job_round_trips(job in arb_job()) {
            let text = serde_json::to_string(&job).unwrap();
            let back: JobSpec = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(&back, &job);
            let pretty = job.to_json();
            let back: JobSpec = serde_json::from_str(&pretty).unwrap();
            prop_assert_eq!(back, job);
        }
    }
}
