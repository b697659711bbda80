//! Exact-rational simplices and cubes in `R^k`, the two covering lemmas
//! behind the finite-set construction, and lattice-point enumeration.
//!
//! Conventions:
//! * `Δ_k(ρ)` is `{v ≥ 0 : Σ v_i ≤ ρ}`; its open variant `Δ_k(ρ)°` is
//!   `{v : v_i > 0, Σ v_i < ρ}`.
//! * `C_k(ρ)` is `[0, ρ]^k`; its open variant `C_k(ρ)°` is `[0, ρ)^k`
//!   (non-negative coordinates, strict upper bound).

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalVector {
    pub coords: Vec<BigRational>,
}

impl RationalVector {
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn scaled(&self, factor: &BigRational) -> RationalVector {
        RationalVector {
            coords: self.coords.iter().map(|c| c * factor).collect(),
        }
    }

    /// Componentwise floor.
    pub fn floor(&self) -> Result<LatticePoint> {
        self.coords
            .iter()
            .map(|c| c.floor().to_integer().to_i64().ok_or(Error::Overflow("floor")))
            .collect::<Result<Vec<_>>>()
            .map(LatticePoint)
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// A point of `Z^k`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticePoint(#[serde(with = "crate::json_int::vec_i64")] pub Vec<i64>);

impl LatticePoint {
    pub fn zero(k: usize) -> Self {
        LatticePoint(vec![0; k])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn checked_add(&self, other: &LatticePoint) -> Result<LatticePoint> {
        self.zip_with(other, i64::checked_add)
    }

    pub fn checked_sub(&self, other: &LatticePoint) -> Result<LatticePoint> {
        self.zip_with(other, i64::checked_sub)
    }

    fn zip_with(&self, other: &LatticePoint, op: fn(i64, i64) -> Option<i64>) -> Result<LatticePoint> {
        if self.dim() != other.dim() {
            return Err(Error::Shape(format!(
                "lattice points of rank {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| op(a, b).ok_or(Error::Overflow("lattice arithmetic")))
            .collect::<Result<Vec<_>>>()
            .map(LatticePoint)
    }
}

impl From<Vec<i64>> for LatticePoint {
    fn from(v: Vec<i64>) -> Self {
        LatticePoint(v)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplexSpec {
    pub dimension: usize,
    pub radius: BigRational,
    pub open: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubeSpec {
    pub dimension: usize,
    pub side: BigRational,
    pub open: bool,
}

fn check_non_negative(rho: &BigRational, what: &str) -> Result<()> {
    if rho.is_negative() {
        Err(Error::Domain(format!("{what} {rho} is negative")))
    } else {
        Ok(())
    }
}

impl SimplexSpec {
    pub fn new(dimension: usize, radius: BigRational, open: bool) -> Result<Self> {
        check_non_negative(&radius, "simplex radius")?;
        Ok(SimplexSpec {
            dimension,
            radius,
            open,
        })
    }

    pub fn contains(&self, v: &RationalVector) -> bool {
        if v.dim() != self.dimension {
            return false;
        }
        let sum: BigRational = v.coords.iter().sum();
        if self.open {
            v.coords.iter().all(|c| c.is_positive()) && sum < self.radius
        } else {
            v.coords.iter().all(|c| !c.is_negative()) && sum <= self.radius
        }
    }
}

impl CubeSpec {
    pub fn new(dimension: usize, side: BigRational, open: bool) -> Result<Self> {
        check_non_negative(&side, "cube side")?;
        Ok(CubeSpec { dimension, side, open })
    }

    pub fn contains(&self, v: &RationalVector) -> bool {
        v.dim() == self.dimension
            && v.coords
                .iter()
                .all(|c| !c.is_negative() && if self.open { *c < self.side } else { *c <= self.side })
    }

    /// Whether the closed box `[lo, lo + width]^k` lies inside `shift + self`.
    pub fn translate_contains_box(&self, shift: &RationalVector, lo: &RationalVector, width: &BigRational) -> bool {
        if shift.dim() != self.dimension || lo.dim() != self.dimension {
            return false;
        }
        shift.coords.iter().zip(&lo.coords).all(|(t, a)| {
            let low = a - t;
            let high = &low + width;
            !low.is_negative() && if self.open { high < self.side } else { high <= self.side }
        })
    }
}

/// Scaling `ρ ∗ Y`. Negative factors are rejected.
pub trait Dilate: Sized {
    fn dilate(&self, factor: &BigRational) -> Result<Self>;
}

impl Dilate for SimplexSpec {
    fn dilate(&self, factor: &BigRational) -> Result<Self> {
        check_non_negative(factor, "dilation factor")?;
        SimplexSpec::new(self.dimension, &self.radius * factor, self.open)
    }
}

impl Dilate for CubeSpec {
    fn dilate(&self, factor: &BigRational) -> Result<Self> {
        check_non_negative(factor, "dilation factor")?;
        CubeSpec::new(self.dimension, &self.side * factor, self.open)
    }
}

pub(crate) fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn require_positive(name: &str, v: u64) -> Result<()> {
    if v == 0 {
        Err(Error::Domain(format!("{name} must be positive")))
    } else {
        Ok(())
    }
}

/// Visits every index vector in `{0, …, n-1}^k` in lexicographic order
/// (last coordinate fastest).
fn for_each_index(k: usize, n: usize, mut f: impl FnMut(&[usize]) -> Result<()>) -> Result<()> {
    if n == 0 {
        return Ok(());
    }
    let mut idx = vec![0usize; k];
    loop {
        f(&idx)?;
        let mut pos = k;
        loop {
            if pos == 0 {
                return Ok(());
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < n {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// `(base)^exp` as `u128`, with overflow reported.
pub fn checked_pow(base: u64, exp: u64) -> Result<u128> {
    let exp = u32::try_from(exp).map_err(|_| Error::Overflow("power"))?;
    (base as u128).checked_pow(exp).ok_or(Error::Overflow("power"))
}

/// Translates `t_1, …, t_N` with `N = (2rk)^k` such that
/// `Δ_k(r) ⊆ ∪ (t_i + C_k(1/k)°)`.
///
/// Every closed grid cell `[g, g + 1/(2k)]^k` with `g ∈ {0, 1/(2k), …,
/// (2rk-1)/(2k)}^k` is paired with the translate `g - 1/(4k)·(1, …, 1)`,
/// which leaves a margin of `1/(4k)` on both sides of the cell inside the
/// open cube of side `1/k`.
pub fn cover_unit_simplex(k: usize, r: u64) -> Result<Vec<RationalVector>> {
    require_positive("k", k as u64)?;
    require_positive("r", r)?;
    let k_i = i64::try_from(k).map_err(|_| Error::Overflow("cover_unit_simplex"))?;
    let per_axis = 2 * r as usize * k;
    let denom = 2 * k_i;
    let margin = rat(1, 4 * k_i);
    let mut out = Vec::with_capacity(per_axis.pow(k as u32));
    for_each_index(k, per_axis, |idx| {
        out.push(RationalVector {
            coords: idx.iter().map(|&i| rat(i as i64, denom) - &margin).collect(),
        });
        Ok(())
    })?;
    Ok(out)
}

/// Certifies `Δ_k(r) ⊆ ∪ (t + C_k(1/k)°)` by tiling `C_k(r) ⊇ Δ_k(r)` with
/// closed cells of side `1/(2k)` and checking that every cell meeting
/// `Δ_k(r)` lies inside at least one translate. Returns the first uncovered
/// cell corner on failure.
pub fn certify_simplex_cover(
    k: usize,
    r: u64,
    translates: &[RationalVector],
) -> Result<std::result::Result<(), RationalVector>> {
    require_positive("k", k as u64)?;
    require_positive("r", r)?;
    let k_i = k as i64;
    let cube = CubeSpec::new(k, rat(1, k_i), true)?;
    let width = rat(1, 2 * k_i);
    let radius = BigRational::from_integer(BigInt::from(r));
    let per_axis = 2 * r as usize * k;
    let mut uncovered = None;
    for_each_index(k, per_axis, |idx| {
        if uncovered.is_some() {
            return Ok(());
        }
        let lo = RationalVector {
            coords: idx.iter().map(|&i| rat(i as i64, 2 * k_i)).collect(),
        };
        // cells whose lowest corner is outside Δ_k(r) do not meet it
        let corner_sum: BigRational = lo.coords.iter().sum();
        if corner_sum > radius {
            return Ok(());
        }
        if !translates.iter().any(|t| cube.translate_contains_box(t, &lo, &width)) {
            uncovered = Some(lo);
        }
        Ok(())
    })?;
    Ok(match uncovered {
        None => Ok(()),
        Some(c) => Err(c),
    })
}

/// Integer translates `w_1, …, w_N`, `N ≤ (4rk)^k`, with
/// `Δ_k(rh) ∩ Z^k ⊆ ∪ (w_j + (Δ_k(h)° ∩ Z^k))`. Requires `h > 2k`.
///
/// Each rational translate `v` of [`cover_unit_simplex`] is dilated to `h·v`
/// and replaced by the `2^k` integer points `floor(h·v) + ε`,
/// `ε ∈ {0,1}^k`. Duplicates are dropped, first occurrence kept.
pub fn lattice_cover(k: usize, r: u64, h: u64) -> Result<Vec<LatticePoint>> {
    require_positive("k", k as u64)?;
    require_positive("r", r)?;
    if h <= 2 * k as u64 {
        return Err(Error::Precondition(format!(
            "lattice_cover needs h > 2k, got h = {h}, k = {k}"
        )));
    }
    let scale = BigRational::from_integer(BigInt::from(h));
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for v in cover_unit_simplex(k, r)? {
        let base = v.scaled(&scale).floor()?;
        for_each_index(k, 2, |eps| {
            let w: Vec<i64> = base.0.iter().zip(eps).map(|(&b, &e)| b + e as i64).collect();
            let w = LatticePoint(w);
            if seen.insert(w.clone()) {
                out.push(w);
            }
            Ok(())
        })?;
    }
    Ok(out)
}

/// All lattice points of `Δ_k(ρ)` (closed) or `Δ_k(ρ)°` (open).
pub fn enumerate_simplex_lattice(k: usize, rho: u64, open: bool) -> BTreeSet<LatticePoint> {
    let mut out = BTreeSet::new();
    let (min, budget) = if open {
        // v_i ≥ 1 and Σ v_i ≤ ρ - 1
        if rho == 0 {
            return out;
        }
        (1u64, rho - 1)
    } else {
        (0u64, rho)
    };
    let mut current = Vec::with_capacity(k);
    fn rec(k: usize, min: u64, budget: u64, current: &mut Vec<i64>, out: &mut BTreeSet<LatticePoint>) {
        if current.len() == k {
            out.insert(LatticePoint(current.clone()));
            return;
        }
        let mut v = min;
        while v <= budget {
            current.push(v as i64);
            rec(k, min, budget - v, current, out);
            current.pop();
            v += 1;
        }
    }
    rec(k, min, budget, &mut current, &mut out);
    out
}

/// All `(n_1, …, n_k)` with `Σ n_i = h`, entries `≥ 0` (or `≥ 1` when
/// `strictly_positive`), ordered with the first coordinate descending.
/// The strict variant with `h < k` is empty.
pub fn compositions(h: u64, k: usize, strictly_positive: bool) -> Vec<LatticePoint> {
    let mut out = Vec::new();
    if k == 0 {
        if h == 0 {
            out.push(LatticePoint(Vec::new()));
        }
        return out;
    }
    let min = u64::from(strictly_positive);
    if h < min * k as u64 {
        return out;
    }
    let mut current = Vec::with_capacity(k);
    fn rec(k: usize, min: u64, remaining: u64, current: &mut Vec<i64>, out: &mut Vec<LatticePoint>) {
        let left = k - current.len();
        if left == 1 {
            current.push(remaining as i64);
            out.push(LatticePoint(current.clone()));
            current.pop();
            return;
        }
        let reserve = min * (left as u64 - 1);
        let mut v = remaining - reserve;
        loop {
            current.push(v as i64);
            rec(k, min, remaining - v, current, out);
            current.pop();
            if v == min {
                break;
            }
            v -= 1;
        }
    }
    rec(k, min, h, &mut current, &mut out);
    out
}

/// Whether an integer vector lies in `Δ_k(ρ)` / `Δ_k(ρ)°`.
pub fn in_simplex(p: &[i64], rho: i64, open: bool) -> bool {
    let sum: i128 = p.iter().map(|&x| x as i128).sum();
    if open {
        p.iter().all(|&x| x > 0) && sum < rho as i128
    } else {
        p.iter().all(|&x| x >= 0) && sum <= rho as i128
    }
}
