//! Independent oracles: brute-force inclusion checks, minimal covering
//! numbers by exhaustive set cover, and the comparison report.

use crate::abelian::{ElementSet, GroupElement, GroupSpec};
use crate::error::{Error, Result};
use crate::lattice::{compositions, LatticePoint};
use crate::semilinear::SemilinearSet;
use crate::witness::{BasisSplit, CoveringWitness};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::Debug;
use std::hash::Hash;

/// Default size limit for [`exact_kappa`].
pub const DEFAULT_KAPPA_LIMIT: usize = 40;

/// Anything in which translates can be compared: `s ∈ x + S` iff `s - x ∈ S`.
pub trait AdditiveSpace {
    type Elem: Clone + Ord + Hash + Debug;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
}

impl AdditiveSpace for GroupSpec {
    type Elem = GroupElement;
    fn sub(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        GroupSpec::sub(self, a, b)
    }
}

/// `Z^rank` with lattice points as elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FreeLattice {
    pub rank: usize,
}

impl AdditiveSpace for FreeLattice {
    type Elem = LatticePoint;
    fn sub(&self, a: &LatticePoint, b: &LatticePoint) -> Result<LatticePoint> {
        if a.dim() != self.rank {
            return Err(Error::Shape(format!("point {a} is not in Z^{}", self.rank)));
        }
        a.checked_sub(b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InclusionCheck<E> {
    /// Number of elements of `S1` examined.
    pub checked: usize,
    /// The first element of `S1` (in iteration order) not covered.
    pub counterexample: Option<E>,
}

impl<E> InclusionCheck<E> {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Decides `S1 ⊆ ∪_{x ∈ X} (x + S2)`.
pub fn check_inclusion<'a, S, I>(
    space: &S,
    s1: I,
    xs: &[S::Elem],
    s2: &BTreeSet<S::Elem>,
) -> Result<InclusionCheck<S::Elem>>
where
    S: AdditiveSpace,
    S::Elem: 'a,
    I: IntoIterator<Item = &'a S::Elem>,
{
    let lookup: HashSet<&S::Elem> = s2.iter().collect();
    let mut checked = 0;
    for s in s1 {
        checked += 1;
        let mut covered = false;
        for x in xs {
            if lookup.contains(&space.sub(s, x)?) {
                covered = true;
                break;
            }
        }
        if !covered {
            return Ok(InclusionCheck {
                checked,
                counterexample: Some(s.clone()),
            });
        }
    }
    Ok(InclusionCheck {
        checked,
        counterexample: None,
    })
}

/// Minimum number of translates of `S2` needed to cover `S1`.
///
/// Only translates from the difference set `S1 - S2` are considered. This
/// loses nothing: if `t + S2` meets `S1`, say `s1 = t + s2`, then `t` itself
/// lies in `S1 - S2`, and a translate missing `S1` entirely is never needed.
/// The search is an exact branch and bound over coverage bitmasks.
pub fn exact_kappa<S: AdditiveSpace>(
    space: &S,
    s1: &BTreeSet<S::Elem>,
    s2: &BTreeSet<S::Elem>,
    limit: usize,
) -> Result<u64> {
    if s1.is_empty() || s2.is_empty() {
        return Err(Error::Domain("exact_kappa needs non-empty sets".into()));
    }
    let limit = limit.min(128);
    if s1.len() > limit {
        return Err(Error::TooLarge {
            what: "S1 for exact_kappa",
            size: s1.len(),
            limit,
        });
    }
    let points: Vec<&S::Elem> = s1.iter().collect();
    let index: HashMap<&S::Elem, usize> = points.iter().enumerate().map(|(i, p)| (*p, i)).collect();

    // coverage mask of every candidate translate t = s1 - s2
    let mut masks: HashMap<S::Elem, u128> = HashMap::new();
    for (i, a) in points.iter().enumerate() {
        for b in s2 {
            let t = space.sub(a, b)?;
            *masks.entry(t).or_insert(0) |= 1u128 << i;
        }
    }
    let mut sets: Vec<u128> = masks.into_values().collect::<BTreeSet<_>>().into_iter().collect();
    // drop candidates dominated by another candidate
    sets.sort_by_key(|m| std::cmp::Reverse(m.count_ones()));
    let mut kept: Vec<u128> = Vec::new();
    for m in sets {
        if !kept.iter().any(|k| k & m == m) {
            kept.push(m);
        }
    }
    drop(index);

    let full: u128 = if points.len() == 128 {
        u128::MAX
    } else {
        (1u128 << points.len()) - 1
    };
    let max_cover = kept.iter().map(|m| m.count_ones()).max().unwrap_or(1).max(1);

    // greedy upper bound
    let mut best = {
        let mut covered = 0u128;
        let mut n = 0u64;
        while covered != full {
            let m = kept
                .iter()
                .max_by_key(|m| (**m & !covered).count_ones())
                .copied()
                .unwrap_or(0);
            covered |= m;
            n += 1;
        }
        n
    };

    fn search(covered: u128, full: u128, depth: u64, best: &mut u64, sets: &[u128], max_cover: u32) {
        if covered == full {
            *best = (*best).min(depth);
            return;
        }
        let remaining = (full & !covered).count_ones();
        let lower = depth + remaining.div_ceil(max_cover) as u64;
        if lower >= *best {
            return;
        }
        // branch on the uncovered point with the fewest covering candidates
        let mut pick = None;
        let mut fewest = usize::MAX;
        let mut bits = full & !covered;
        while bits != 0 {
            let i = bits.trailing_zeros();
            bits &= bits - 1;
            let n = sets.iter().filter(|m| *m >> i & 1 == 1).count();
            if n < fewest {
                fewest = n;
                pick = Some(i);
            }
        }
        let i = pick.expect("uncovered point");
        let mut options: Vec<u128> = sets.iter().copied().filter(|m| m >> i & 1 == 1).collect();
        options.sort_by_key(|m| std::cmp::Reverse((m & !covered).count_ones()));
        for m in options {
            search(covered | m, full, depth + 1, best, sets, max_cover);
        }
    }
    search(0, full, 0, &mut best, &kept, max_cover);
    Ok(best)
}

/// `C(n, k)` with checked arithmetic.
pub fn binomial(n: u64, k: u64) -> Result<u128> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128).ok_or(Error::Overflow("binomial"))? / (i as u128 + 1);
    }
    Ok(acc)
}

/// `n0 · k · b(r, k)` with `b(r, k) = C((r+1)(k-1) - 1, k - 1)`; `b(r, 1)`
/// is taken to be 1 (binomial with lower index 0).
pub fn nathanson_bound(r: u64, k: u64, n0: u64) -> Result<u128> {
    if r == 0 || k == 0 || n0 == 0 {
        return Err(Error::Domain("r, k and n0 must be positive".into()));
    }
    let b = if k == 1 {
        1
    } else {
        let top = (r + 1).checked_mul(k - 1).ok_or(Error::Overflow("nathanson bound"))? - 1;
        binomial(top, k - 1)?
    };
    (n0 as u128)
        .checked_mul(k as u128)
        .and_then(|x| x.checked_mul(b))
        .ok_or(Error::Overflow("nathanson bound"))
}

/// Brute force `rhA ⊆ X + hA` for a finite set `A`.
pub fn verify_finite(
    group: &GroupSpec,
    a: &[GroupElement],
    w: &CoveringWitness,
) -> Result<InclusionCheck<GroupElement>> {
    let set: ElementSet = a.iter().cloned().collect();
    let rh = w.r.checked_mul(w.h).ok_or(Error::Overflow("rh"))?;
    let h_a = group.iterated_sumset(&set, w.h)?;
    let rh_a = group.iterated_sumset(&set, rh)?;
    check_inclusion(group, &rh_a, &w.translates, &h_a)
}

/// Exact check of the composition-level covering: every composition of
/// `rh` over `k` parts is a translate plus a strictly positive composition
/// of `h`. Only the first `k` coordinates of each translate are used; the
/// remaining ones must be zero.
pub fn verify_composition_level(
    k: usize,
    r: u64,
    h: u64,
    translates: &[LatticePoint],
) -> Result<InclusionCheck<LatticePoint>> {
    let mut f_block = Vec::with_capacity(translates.len());
    for t in translates {
        if t.dim() < k || t.0[k..].iter().any(|&c| c != 0) {
            return Err(Error::Shape(format!("translate {t} is not in the f block of rank {k}")));
        }
        f_block.push(LatticePoint(t.0[..k].to_vec()));
    }
    let rh = r.checked_mul(h).ok_or(Error::Overflow("rh"))?;
    let lhs = compositions(rh, k, false);
    let rhs: BTreeSet<LatticePoint> = compositions(h, k, true).into_iter().collect();
    check_inclusion(&FreeLattice { rank: k }, &lhs, &f_block, &rhs)
}

/// Window check for a union `B` of unbounded linear sets:
/// `W(rhB, cap) ⊆ X + W(hB, cap)`, where `W(hB, cap)` is `hB` written as a
/// union of linear sets (one per composition) with every step coefficient
/// bounded by `cap`.
pub fn verify_window(b: &SemilinearSet, w: &CoveringWitness, cap: u64) -> Result<InclusionCheck<GroupElement>> {
    let rh = w.r.checked_mul(w.h).ok_or(Error::Overflow("rh"))?;
    let lhs = b.power(rh)?.window(cap)?;
    let rhs = b.power(w.h)?.window(cap)?;
    check_inclusion(b.group(), &lhs, &w.translates, &rhs)
}

/// The same window check for the standard configuration in `Z^{k+l}`,
/// decided fibre by fibre instead of by enumeration.
///
/// Over a fixed `f` part `n`, the window of `rhA` is the box with sides
/// `[0, cap]` in the `e` directions of components with `n_i > 0` and `{0}`
/// elsewhere; a translate `x` contributes the box of `m = n - x_f` shifted
/// by `x_e`. A fibre is accepted when one translated box contains it, and
/// otherwise its points are enumerated (up to `enumeration_limit`).
pub fn verify_window_free(
    split: &BasisSplit,
    r: u64,
    h: u64,
    cap: u64,
    translates: &[LatticePoint],
    enumeration_limit: usize,
) -> Result<InclusionCheck<LatticePoint>> {
    let k = split.k;
    let rank = split.rank();
    if let Some(t) = translates.iter().find(|t| t.dim() != rank) {
        return Err(Error::Shape(format!("translate {t} is not in Z^{rank}")));
    }
    let cap_i = i64::try_from(cap).map_err(|_| Error::Overflow("cap"))?;
    let h_i = i64::try_from(h).map_err(|_| Error::Overflow("h"))?;
    let rh = r.checked_mul(h).ok_or(Error::Overflow("rh"))?;
    // per e coordinate: owning component
    let owner: Vec<usize> = (0..k).flat_map(|i| std::iter::repeat_n(i, split.l[i])).collect();

    let mut checked = 0;
    for n in compositions(rh, k, false) {
        let upper: Vec<i64> = owner.iter().map(|&i| if n.0[i] > 0 { cap_i } else { 0 }).collect();
        // candidate boxes over this fibre: (lower, upper) per e coordinate
        let mut boxes = Vec::new();
        for x in translates {
            let m: Vec<i64> = n.0.iter().zip(&x.0[..k]).map(|(a, b)| a - b).collect();
            if m.iter().any(|&c| c < 0) || m.iter().sum::<i64>() != h_i {
                continue;
            }
            let lo: Vec<i64> = x.0[k..].to_vec();
            let hi: Vec<i64> = owner
                .iter()
                .zip(&lo)
                .map(|(&i, &l)| l + if m[i] > 0 { cap_i } else { 0 })
                .collect();
            boxes.push((lo, hi));
        }
        let contained = boxes
            .iter()
            .any(|(lo, hi)| lo.iter().all(|&l| l <= 0) && hi.iter().zip(&upper).all(|(&h, &u)| u <= h));
        if contained {
            checked += 1;
            continue;
        }
        let fibre_size = upper.iter().try_fold(1usize, |acc, &u| acc.checked_mul(u as usize + 1));
        match fibre_size {
            Some(size) if size <= enumeration_limit => {}
            other => {
                return Err(Error::TooLarge {
                    what: "window fibre",
                    size: other.unwrap_or(usize::MAX),
                    limit: enumeration_limit,
                })
            }
        }
        let mut point = vec![0i64; upper.len()];
        loop {
            checked += 1;
            let inside = boxes.iter().any(|(lo, hi)| {
                point
                    .iter()
                    .zip(lo.iter().zip(hi))
                    .all(|(&p, (&l, &h))| l <= p && p <= h)
            });
            if !inside {
                let mut full = n.0.clone();
                full.extend(&point);
                return Ok(InclusionCheck {
                    checked,
                    counterexample: Some(LatticePoint(full)),
                });
            }
            let mut pos = point.len();
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                if point[pos] < upper[pos] {
                    point[pos] += 1;
                    break;
                }
                point[pos] = 0;
            }
            if point.iter().all(|&c| c == 0) {
                break;
            }
        }
    }
    Ok(InclusionCheck {
        checked,
        counterexample: None,
    })
}

/// How a witness was verified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verification {
    /// Brute-force `rhA ⊆ X + hA` on the finite sets.
    Exact,
    /// Inclusion checked on a finite window only.
    Window { cap: u64 },
    /// Exact at the level of compositions; optionally also on a window.
    CompositionLevel { window_cap: Option<u64> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub r: u64,
    pub h: u64,
    pub k: u64,
    pub witness_size: usize,
    #[serde(with = "crate::json_int::u128")]
    pub bound: u128,
    pub verified: Verification,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minimal_kappa: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "crate::json_int::opt_u128")]
    pub nathanson_bound: Option<u128>,
}

/// Oracle results gathered for one witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evidence {
    pub verification: Verification,
    /// `Err` carries a description of the first uncovered element.
    pub inclusion: std::result::Result<(), String>,
    pub minimal_kappa: Option<u64>,
    pub nathanson_bound: Option<u128>,
}

impl Evidence {
    pub fn from_check<E: Debug>(verification: Verification, check: &InclusionCheck<E>) -> Self {
        Evidence {
            verification,
            inclusion: match &check.counterexample {
                None => Ok(()),
                Some(c) => Err(format!("{c:?} is not covered")),
            },
            minimal_kappa: None,
            nathanson_bound: None,
        }
    }
}

/// Assembles the report. A bound violation, a failed inclusion or a
/// minimal covering number above the witness size is a hard error.
pub fn compare_report(w: &CoveringWitness, evidence: Evidence) -> Result<WitnessReport> {
    if w.size() as u128 > w.bound {
        return Err(Error::BoundViolation {
            size: w.size(),
            bound: w.bound,
        });
    }
    if let Err(msg) = evidence.inclusion {
        return Err(Error::VerificationFailed(format!("r = {}, h = {}: {msg}", w.r, w.h)));
    }
    if let Some(kappa) = evidence.minimal_kappa {
        if kappa as usize > w.size() {
            return Err(Error::VerificationFailed(format!(
                "minimal covering number {kappa} exceeds the witness size {}",
                w.size()
            )));
        }
    }
    Ok(WitnessReport {
        r: w.r,
        h: w.h,
        k: w.k,
        witness_size: w.size(),
        bound: w.bound,
        verified: evidence.verification,
        minimal_kappa: evidence.minimal_kappa,
        nathanson_bound: evidence.nathanson_bound,
    })
}
