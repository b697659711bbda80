//! Construction of covering witnesses `X_h` with `rhA ⊆ X_h + hA` and
//! `|X_h| ≤ (4rk)^k`.
//!
//! The free-abelian covers live in `Z^k` and are pushed forward along the
//! homomorphism that sends the standard basis to the generators of `A`
//! (finite case) or to the bases and steps of the linear sets (semilinear
//! case).

use crate::abelian::{GroupElement, GroupSpec, Homomorphism};
use crate::error::{Error, Result};
use crate::lattice::{checked_pow, compositions, lattice_cover, LatticePoint};
use crate::semilinear::{LinearSet, SemilinearSet};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Which branch of the free-abelian construction produced the translates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FreeCover {
    /// `k = 1`: the single translate `(r - 1)h`.
    RankOne,
    /// `h ≤ 2k`: every point of `rhB` minus the anchor `h·e_1`.
    Enumeration,
    /// `h > 2k`: lattice cover of `Δ_{k-1}(rh)` lifted affinely to `Z^k`.
    LatticeLift,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "source", content = "branch", rename_all = "snake_case")]
pub enum Construction {
    FiniteSet(FreeCover),
    Semilinear(FreeCover),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringWitness {
    pub translates: Vec<GroupElement>,
    pub r: u64,
    pub h: u64,
    pub k: u64,
    #[serde(with = "crate::json_int::u128")]
    pub bound: u128,
    pub construction: Construction,
}

impl CoveringWitness {
    pub fn size(&self) -> usize {
        self.translates.len()
    }
}

/// `(4rk)^k`.
pub fn covering_bound(r: u64, k: u64) -> Result<u128> {
    let base = r
        .checked_mul(k)
        .and_then(|x| x.checked_mul(4))
        .ok_or(Error::Overflow("covering bound"))?;
    checked_pow(base, k)
}

fn check_rk(r: u64, k: usize) -> Result<()> {
    if r == 0 || k == 0 {
        return Err(Error::Domain(format!("r and k must be positive (r = {r}, k = {k})")));
    }
    Ok(())
}

/// Translates `t_1, …, t_N ∈ Z^k`, `N ≤ (4rk)^k`, such that every
/// composition of `rh` into `k` non-negative parts is `t_i` plus a
/// composition of `h` into `k` positive parts. Requires `h > 2k`.
pub fn cover_positive(k: usize, r: u64, h: u64) -> Result<Vec<LatticePoint>> {
    check_rk(r, k)?;
    if h <= 2 * k as u64 {
        return Err(Error::Precondition(format!(
            "cover_positive needs h > 2k, got h = {h}, k = {k}"
        )));
    }
    let rh = r.checked_mul(h).ok_or(Error::Overflow("rh"))?;
    let rh = i64::try_from(rh).map_err(|_| Error::Overflow("rh"))?;
    let h_i = h as i64;
    if k == 1 {
        return Ok(vec![LatticePoint(vec![rh - h_i])]);
    }
    // y ↦ (y, rh - Σy) maps Δ_{k-1}(rh) ∩ Z^{k-1} onto rhB, and
    // f(v + y) = (f(v) - h·e_k) + (y, h - Σy) with (y, h - Σy) strictly positive.
    lattice_cover(k - 1, r, h)?
        .into_iter()
        .map(|v| {
            let sum: i64 = v.0.iter().sum();
            let mut t = v.0;
            t.push(rh - sum - h_i);
            Ok(LatticePoint(t))
        })
        .collect()
}

/// Translates `Y ⊆ Z^k` with `rhB ⊆ Y + hB` and `|Y| ≤ (4rk)^k`, for every
/// positive `h`.
pub fn cover_free(k: usize, r: u64, h: u64) -> Result<(Vec<LatticePoint>, FreeCover)> {
    check_rk(r, k)?;
    if h == 0 {
        return Err(Error::Domain("h must be positive".into()));
    }
    if h > 2 * k as u64 {
        let branch = if k == 1 {
            FreeCover::RankOne
        } else {
            FreeCover::LatticeLift
        };
        return Ok((cover_positive(k, r, h)?, branch));
    }
    let rh = r.checked_mul(h).ok_or(Error::Overflow("rh"))?;
    let mut anchor = LatticePoint::zero(k);
    anchor.0[0] = h as i64;
    let translates = compositions(rh, k, false)
        .iter()
        .map(|u| u.checked_sub(&anchor))
        .collect::<Result<Vec<_>>>()?;
    let branch = if k == 1 {
        FreeCover::RankOne
    } else {
        FreeCover::Enumeration
    };
    Ok((translates, branch))
}

fn dedup_in_order(items: impl IntoIterator<Item = GroupElement>) -> Vec<GroupElement> {
    let mut seen = BTreeSet::new();
    items.into_iter().filter(|x| seen.insert(x.clone())).collect()
}

/// Witness for a finite set `A` of `k` distinct elements: `X = π(Y)` where
/// `π(e_i) = A[i]` and `Y = cover_free(k, r, h)`.
pub fn witness_finite(group: &GroupSpec, a: &[GroupElement], r: u64, h: u64) -> Result<CoveringWitness> {
    if a.is_empty() {
        return Err(Error::Domain("the set A is empty".into()));
    }
    let distinct: BTreeSet<_> = a.iter().collect();
    if distinct.len() != a.len() {
        return Err(Error::Domain("the elements of A must be distinct".into()));
    }
    let k = a.len();
    let pi = Homomorphism::new(group.clone(), a.to_vec())?;
    let (ys, branch) = cover_free(k, r, h)?;
    let translates = dedup_in_order(ys.iter().map(|y| pi.apply(&y.0)).collect::<Result<Vec<_>>>()?);
    finish(translates, r, h, k as u64, Construction::FiniteSet(branch))
}

fn finish(
    translates: Vec<GroupElement>,
    r: u64,
    h: u64,
    k: u64,
    construction: Construction,
) -> Result<CoveringWitness> {
    let bound = covering_bound(r, k)?;
    if translates.len() as u128 > bound {
        return Err(Error::BoundViolation {
            size: translates.len(),
            bound,
        });
    }
    Ok(CoveringWitness {
        translates,
        r,
        h,
        k,
        bound,
        construction,
    })
}

/// How the coordinates of `Z^{k+l}` split into the `f` block and the
/// per-component `e` blocks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisSplit {
    pub k: usize,
    pub l: Vec<usize>,
}

impl BasisSplit {
    pub fn rank(&self) -> usize {
        self.k + self.l.iter().sum::<usize>()
    }

    /// Coordinate index of `f_i`.
    pub fn f(&self, i: usize) -> usize {
        i
    }

    /// Coordinate index of `e_{i,j}`.
    pub fn e(&self, i: usize, j: usize) -> usize {
        self.k + self.l[..i].iter().sum::<usize>() + j
    }
}

/// The union `P(f_1; e_{1,1}, …, e_{1,l_1}) ∪ … ∪ P(f_k; e_{k,1}, …)` in
/// `Z^{k+Σl_i}`. An entry `l_i = 0` gives the singleton `{f_i}`.
pub fn standard_config(k: usize, l: &[usize]) -> Result<(SemilinearSet, BasisSplit)> {
    if k == 0 {
        return Err(Error::Domain("k must be positive".into()));
    }
    if l.len() != k {
        return Err(Error::Shape(format!("{} step counts given for k = {k}", l.len())));
    }
    let split = BasisSplit { k, l: l.to_vec() };
    let n = split.rank();
    let unit = |idx: usize| {
        let mut v = vec![0; n];
        v[idx] = 1;
        GroupElement::free(v)
    };
    let components = (0..k)
        .map(|i| LinearSet::unbounded(unit(split.f(i)), (0..l[i]).map(|j| unit(split.e(i, j))).collect()))
        .collect();
    Ok((SemilinearSet::new(GroupSpec::free_abelian(n), components)?, split))
}

/// Translates in the `f` block of `Z^{k+l}` (last `Σl_i` coordinates zero)
/// such that every composition of `rh` over `f_1, …, f_k` is a translate
/// plus a strictly positive composition of `h`. Requires `h > 2k`.
pub fn witness_semilinear_free(k: usize, l: &[usize], r: u64, h: u64) -> Result<Vec<LatticePoint>> {
    if l.len() != k {
        return Err(Error::Shape(format!("{} step counts given for k = {k}", l.len())));
    }
    let pad = l.iter().sum::<usize>();
    Ok(cover_positive(k, r, h)?
        .into_iter()
        .map(|mut v| {
            v.0.extend(std::iter::repeat_n(0, pad));
            v
        })
        .collect())
}

/// Witness for a union `B` of `k` unbounded linear sets, `h ≥ 2k + 1`.
pub fn witness_semilinear(b: &SemilinearSet, r: u64, h: u64) -> Result<CoveringWitness> {
    if let Some(index) = b.components().iter().position(|c| !c.is_unbounded()) {
        return Err(Error::BoundedComponent { index });
    }
    let k = b.components().len();
    let l: Vec<usize> = b.components().iter().map(LinearSet::dimension).collect();
    let split = BasisSplit { k, l: l.clone() };
    let mut images = vec![b.group().identity(); split.rank()];
    for (i, c) in b.components().iter().enumerate() {
        images[split.f(i)] = c.base().clone();
        for (j, s) in c.steps().iter().enumerate() {
            images[split.e(i, j)] = s.clone();
        }
    }
    let pi = Homomorphism::new(b.group().clone(), images)?;
    let vs = witness_semilinear_free(k, &l, r, h)?;
    let branch = if k == 1 {
        FreeCover::RankOne
    } else {
        FreeCover::LatticeLift
    };
    let translates = dedup_in_order(vs.iter().map(|v| pi.apply(&v.0)).collect::<Result<Vec<_>>>()?);
    finish(translates, r, h, k as u64, Construction::Semilinear(branch))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessInput {
    Finite {
        group: GroupSpec,
        elements: Vec<GroupElement>,
    },
    Semilinear(SemilinearSet),
}

/// A threshold `h_0` and a per-`h` witness generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsymptoticWitness {
    input: WitnessInput,
    r: u64,
    threshold: u64,
    k: u64,
}

impl AsymptoticWitness {
    pub fn threshold(&self) -> u64 {
        self.threshold
    }

    /// Number of generators (finite case) or unbounded components after
    /// decomposition (semilinear case).
    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn bound(&self) -> Result<u128> {
        covering_bound(self.r, self.k)
    }

    /// The input after bounded components were decomposed.
    pub fn input(&self) -> &WitnessInput {
        &self.input
    }

    pub fn at(&self, h: u64) -> Result<CoveringWitness> {
        if h < self.threshold {
            return Err(Error::Precondition(format!(
                "h = {h} is below the threshold {}",
                self.threshold
            )));
        }
        match &self.input {
            WitnessInput::Finite { group, elements } => witness_finite(group, elements, self.r, h),
            WitnessInput::Semilinear(b) => witness_semilinear(b, self.r, h),
        }
    }
}

/// Finite sets need no threshold (`h_0 = 1`); a semilinear set is first
/// decomposed into `k` unbounded components and gets `h_0 = 2k + 1`.
pub fn asymptotic_witness(input: WitnessInput, r: u64) -> Result<AsymptoticWitness> {
    if r == 0 {
        return Err(Error::Domain("r must be positive".into()));
    }
    let (input, threshold, k) = match input {
        WitnessInput::Finite { group, elements } => {
            let k = elements.len() as u64;
            (WitnessInput::Finite { group, elements }, 1, k)
        }
        WitnessInput::Semilinear(b) => {
            let d = b.decompose_bounded()?;
            let k = d.components().len() as u64;
            (WitnessInput::Semilinear(d), 2 * k + 1, k)
        }
    };
    Ok(AsymptoticWitness { input, r, threshold, k })
}
