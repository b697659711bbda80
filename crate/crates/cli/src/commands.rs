//! One function per subcommand. Each returns the JSON document to emit and
//! whether every check passed.

use crate::job::{Checks, GrowthCheck, JobSpec, SetSpec};
use crate::run::{ms, run, JobReport};
use aag_core::growth::{aag_growth_consistency, growth_table};
use aag_core::lattice::{
    certify_simplex_cover, cover_unit_simplex, enumerate_simplex_lattice, lattice_cover, RationalVector,
};
use aag_core::verify::{check_inclusion, exact_kappa, FreeLattice, DEFAULT_KAPPA_LIMIT};
use aag_core::witness::{asymptotic_witness, covering_bound, WitnessInput};
use aag_core::{ElementSet, GroupElement, GroupSpec};
use anyhow::{bail, ensure, Context, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::collections::BTreeSet;
use std::time::Instant;

pub struct Outcome {
    pub document: Value,
    pub ok: bool,
}

/// Command-line values that replace the corresponding job fields.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub r: Option<u64>,
    pub h: Option<u64>,
    pub h_max: Option<u64>,
    pub cap: Option<u64>,
    pub exact_kappa_limit: Option<usize>,
}

impl Overrides {
    pub fn apply(&self, mut job: JobSpec) -> Result<JobSpec> {
        if let Some(r) = self.r {
            job.r = r;
        }
        if let Some(h) = self.h {
            job.h = Some(h);
            if self.h_max.is_none() && job.h_max.is_some_and(|m| m < h) {
                job.h_max = None;
            }
        }
        if let Some(m) = self.h_max {
            job.h_max = Some(m);
        }
        if let Some(cap) = self.cap {
            job.checks.window_cap = Some(cap);
        }
        if let Some(limit) = self.exact_kappa_limit {
            job.checks.exact_kappa_limit = Some(limit);
        }
        job.validate()?;
        Ok(job)
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialise")
}

pub fn witness(job: &JobSpec) -> Result<Outcome> {
    let input = match &job.set {
        SetSpec::Finite(elements) => WitnessInput::Finite {
            group: job.group.clone(),
            elements: elements.clone(),
        },
        SetSpec::Semilinear { .. } => WitnessInput::Semilinear(job.semilinear()?.expect("semilinear")),
    };
    let aw = asymptotic_witness(input, job.r)?;
    let mut witnesses = Vec::new();
    for h in job.h_range() {
        witnesses.push(aw.at(h)?);
    }
    Ok(Outcome {
        document: json!({
            "threshold": aw.threshold(),
            "k": aw.k(),
            "witnesses": to_value(&witnesses),
        }),
        ok: true,
    })
}

pub fn verify(job: &JobSpec) -> Result<Outcome> {
    let report = run(job)?;
    Ok(Outcome {
        ok: report.ok(),
        document: to_value(&report),
    })
}

/// Parameters of the randomised finite-set suite.
#[derive(Debug, Clone)]
pub struct Trials {
    pub seed: u64,
    pub trials: usize,
    pub k: usize,
    pub r: u64,
    pub h: u64,
    pub h_max: u64,
    pub group: GroupSpec,
}

/// Random finite sets of size `k`, each run through the full finite pipeline.
pub fn random_trials(t: &Trials) -> Result<Outcome> {
    ensure!(t.k >= 1, "--k must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(t.seed);
    let span = 4 * t.k as i64 + 4;
    let mut reports: Vec<(Vec<GroupElement>, JobReport)> = Vec::new();
    for _ in 0..t.trials {
        let mut seen = BTreeSet::new();
        let mut elements = Vec::new();
        let mut attempts = 0;
        while elements.len() < t.k {
            attempts += 1;
            if attempts > 10_000 {
                bail!("the group has fewer than {} elements in the sampling range", t.k);
            }
            let free: Vec<i64> = (0..t.group.free_rank()).map(|_| rng.gen_range(-span..=span)).collect();
            let torsion: Vec<i64> = t.group.torsion_orders().iter().map(|&n| rng.gen_range(0..n)).collect();
            let g = t.group.element(free, torsion)?;
            if seen.insert(g.clone()) {
                elements.push(g);
            }
        }
        let job = JobSpec {
            group: t.group.clone(),
            set: SetSpec::Finite(elements.clone()),
            r: t.r,
            h: Some(t.h),
            h_max: Some(t.h_max.max(t.h)),
            checks: Checks {
                exact_kappa_limit: None,
                nathanson: true,
                ..Checks::default()
            },
        };
        reports.push((elements, run(&job)?));
    }
    let ok = reports.iter().all(|(_, r)| r.ok());
    let trials: Vec<Value> = reports
        .iter()
        .map(|(a, r)| json!({ "set": to_value(a), "report": to_value(r) }))
        .collect();
    Ok(Outcome {
        document: json!({ "seed": t.seed, "trials": trials }),
        ok,
    })
}

fn rational_strings(v: &RationalVector) -> Vec<String> {
    v.coords.iter().map(|q| q.to_string()).collect()
}

pub fn cover_simplex(k: usize, r: u64) -> Result<Outcome> {
    let start = Instant::now();
    let ts = cover_unit_simplex(k, r)?;
    let bound = (2 * r as u128 * k as u128)
        .checked_pow(k as u32)
        .context("(2rk)^k overflows")?;
    let cert = certify_simplex_cover(k, r, &ts)?;
    let ok = cert.is_ok() && ts.len() as u128 <= bound;
    Ok(Outcome {
        document: json!({
            "k": k,
            "r": r,
            "count": ts.len(),
            "bound": bound.to_string(),
            "certified": cert.is_ok(),
            "uncovered_cell": cert.err().map(|c| rational_strings(&c)),
            "translates": ts.iter().map(rational_strings).collect::<Vec<_>>(),
            "elapsed_ms": ms(start),
        }),
        ok,
    })
}

pub fn lattice_cover_cmd(k: usize, r: u64, h: u64, verify: bool) -> Result<Outcome> {
    let start = Instant::now();
    let ws = lattice_cover(k, r, h)?;
    let bound = covering_bound(r, k as u64)?;
    let mut ok = ws.len() as u128 <= bound;
    let mut verified = Value::Null;
    if verify {
        let big = enumerate_simplex_lattice(k, r * h, false);
        let small = enumerate_simplex_lattice(k, h, true);
        let check = check_inclusion(&FreeLattice { rank: k }, &big, &ws, &small)?;
        ok &= check.holds();
        verified = json!({ "holds": check.holds(), "checked": check.checked, "counterexample": to_value(&check.counterexample) });
    }
    Ok(Outcome {
        document: json!({
            "k": k,
            "r": r,
            "h": h,
            "count": ws.len(),
            "bound": to_value(&aag_core::json_int::JsonU128(bound)),
            "translates": to_value(&ws),
            "verified": verified,
            "elapsed_ms": ms(start),
        }),
        ok,
    })
}

pub fn kappa(job: &JobSpec) -> Result<Outcome> {
    let SetSpec::Finite(elements) = &job.set else {
        bail!("kappa needs a finite set");
    };
    let limit = job.checks.exact_kappa_limit.unwrap_or(DEFAULT_KAPPA_LIMIT);
    let aw = asymptotic_witness(
        WitnessInput::Finite {
            group: job.group.clone(),
            elements: elements.clone(),
        },
        job.r,
    )?;
    let set: ElementSet = elements.iter().cloned().collect();
    let mut rows = Vec::new();
    let mut ok = true;
    for h in job.h_range() {
        let start = Instant::now();
        let rh = job.r.checked_mul(h).context("rh overflows")?;
        let big = job.group.iterated_sumset(&set, rh)?;
        let small = job.group.iterated_sumset(&set, h)?;
        let kappa = exact_kappa(&job.group, &big, &small, limit)?;
        let w = aw.at(h)?;
        ok &= kappa as usize <= w.size();
        rows.push(json!({
            "h": h,
            "rh_size": big.len(),
            "h_size": small.len(),
            "kappa": kappa,
            "witness_size": w.size(),
            "bound": to_value(&aag_core::json_int::JsonU128(w.bound)),
            "elapsed_ms": ms(start),
        }));
    }
    Ok(Outcome {
        document: json!({ "r": job.r, "limit": limit, "rows": rows }),
        ok,
    })
}

pub fn growth(job: &JobSpec, length: Option<u64>, l: Option<u64>, h0: Option<u64>) -> Result<Outcome> {
    let SetSpec::Finite(elements) = &job.set else {
        bail!("growth needs a finite set");
    };
    let base = job.checks.growth.clone();
    let g = GrowthCheck {
        length: length
            .or(base.as_ref().map(|g| g.length))
            .context("table length: pass --h-max or set checks.growth")?,
        l: l.or(base.as_ref().map(|g| g.l))
            .context("ratio constant: pass --l or set checks.growth")?,
        h0: h0.or(base.as_ref().map(|g| g.h0)).unwrap_or(1),
    };
    let start = Instant::now();
    let table = growth_table(&job.group, elements, g.length)?;
    let report = aag_growth_consistency(&table, job.r, g.l, g.h0)?;
    Ok(Outcome {
        ok: report.consistent,
        document: json!({ "table": to_value(&table), "report": to_value(&report), "elapsed_ms": ms(start) }),
    })
}

pub fn decompose(job: &JobSpec) -> Result<Outcome> {
    let b = job.semilinear()?.context("decompose needs a semilinear set")?;
    let d = b.decompose_bounded()?;
    Ok(Outcome {
        document: json!({ "k": d.components().len(), "threshold": 2 * d.components().len() + 1, "set": to_value(&d) }),
        ok: true,
    })
}
