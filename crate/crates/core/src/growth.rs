//! Growth of iterated sumsets: ratio tests and polynomial upper bounds.
//!
//! Every result here is a statement about the finite table `f(1..=H)` only.

use crate::abelian::{ElementSet, GroupElement, GroupSpec};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// The sequence `f(h) = |hA|` for `h = 1..=H`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthTable {
    /// `values[h - 1] = f(h)`.
    pub values: Vec<u64>,
    pub source: String,
    pub monotone: bool,
}

impl GrowthTable {
    pub fn from_values(values: Vec<u64>, source: impl Into<String>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("growth table is empty".into()));
        }
        if values.contains(&0) {
            return Err(Error::Domain("growth table values must be positive".into()));
        }
        let monotone = values.windows(2).all(|w| w[0] <= w[1]);
        Ok(GrowthTable {
            values,
            source: source.into(),
            monotone,
        })
    }

    /// `H`, the last tabulated argument.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `f(h)` for `1 <= h <= H`.
    pub fn f(&self, h: u64) -> Option<u64> {
        h.checked_sub(1).and_then(|i| self.values.get(i as usize)).copied()
    }
}

pub fn growth_table(group: &GroupSpec, a: &[GroupElement], big_h: u64) -> Result<GrowthTable> {
    if a.is_empty() {
        return Err(Error::Domain("A must be non-empty".into()));
    }
    if big_h == 0 {
        return Err(Error::Domain("H must be positive".into()));
    }
    let set: ElementSet = a.iter().map(|g| group.reduce(g)).collect::<Result<_>>()?;
    let mut current = set.clone();
    let mut values = vec![current.len() as u64];
    for _ in 1..big_h {
        current = group.sumset(&current, &set)?;
        values.push(current.len() as u64);
    }
    let source = format!(
        "|hA| for A = {{{}}}",
        set.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(", ")
    );
    GrowthTable::from_values(values, source)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioCheck {
    pub passed: bool,
    /// Every `h` with `rh <= H` and `f(rh) >= L f(h)`.
    pub violations: Vec<u64>,
}

/// Strict test `f(rh) < L f(h)` over every `h` with `rh <= H`.
pub fn ratio_check(t: &GrowthTable, r: u64, l: u64) -> Result<RatioCheck> {
    ratio_scan(t, r, l, 1, true)
}

fn ratio_scan(t: &GrowthTable, r: u64, l: u64, from: u64, strict: bool) -> Result<RatioCheck> {
    check_params(r, l)?;
    let mut violations = Vec::new();
    let mut h = from.max(1);
    while let Some(rh) = h.checked_mul(r) {
        let Some(big) = t.f(rh) else { break };
        let small = t.f(h).expect("h <= rh is tabulated") as u128;
        let limit = l as u128 * small;
        let ok = if strict {
            (big as u128) < limit
        } else {
            big as u128 <= limit
        };
        if !ok {
            violations.push(h);
        }
        h += 1;
    }
    Ok(RatioCheck {
        passed: violations.is_empty(),
        violations,
    })
}

fn check_params(r: u64, l: u64) -> Result<()> {
    if r < 2 || l < 2 {
        return Err(Error::Domain(format!(
            "r and L must be at least 2 (got r = {r}, L = {l})"
        )));
    }
    Ok(())
}

/// Smallest `d` with `r^d >= n`, i.e. `⌈log_r n⌉` for `n >= 1`.
pub fn ceil_log(r: u64, n: u64) -> u32 {
    assert!(r >= 2 && n >= 1);
    let mut d = 0;
    let mut p: u128 = 1;
    while p < n as u128 {
        p *= r as u128;
        d += 1;
    }
    d
}

/// A polynomial bound `f(h) <= constant · h^exponent`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyBound {
    /// `⌈log_r L⌉`.
    pub degree: u32,
    #[serde(with = "crate::json_int::u128")]
    pub constant: u128,
    /// `log_r L = 1 / log_L r`, for display.
    pub exponent: f64,
}

impl PolyBound {
    pub fn evaluate(&self, h: u64) -> f64 {
        self.constant as f64 * (h as f64).powf(self.exponent)
    }
}

pub fn poly_bound(r: u64, l: u64, f1: u64) -> Result<PolyBound> {
    check_params(r, l)?;
    if f1 == 0 {
        return Err(Error::Domain("f(1) must be positive".into()));
    }
    Ok(PolyBound {
        degree: ceil_log(r, l),
        constant: l as u128 * f1 as u128,
        exponent: (l as f64).ln() / (r as f64).ln(),
    })
}

/// Growth-consistency report, certified on `1..=H` only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub consistent: bool,
    pub certified_up_to: u64,
    pub r: u64,
    pub l: u64,
    pub h0: u64,
    /// `h >= h0` with `f(rh) > L f(h)`.
    pub ratio_violations: Vec<u64>,
    /// `max f(h)` over `1 <= h <= r^⌈log_r h0⌉`.
    pub m: u64,
    pub bound: PolyBound,
    /// `h` with `f(h) > L^j M`, `j = max(⌈log_r h⌉ - ⌈log_r h0⌉, 0)`.
    pub bound_violations: Vec<u64>,
}

/// Strict ratio test plus the polynomial bound `L f(1) h^{log_r L}`.
///
/// The bound is checked in its integer form `f(h) <= L^{⌈log_r h⌉} f(1)`,
/// which implies the real one since `L^{⌈x⌉} < L · L^x`.
pub fn certify_polynomial(t: &GrowthTable, r: u64, l: u64) -> Result<GrowthReport> {
    let strict = ratio_check(t, r, l)?;
    let mut report = aag_growth_consistency(t, r, l, 1)?;
    report.ratio_violations = strict.violations;
    report.consistent = report.ratio_violations.is_empty() && report.bound_violations.is_empty();
    Ok(report)
}

/// Checks `f(rh) <= L f(h)` for `h >= h0` and the thresholded bound
/// `f(h) <= L^j M` at every tabulated `h`.
///
/// The reported polynomial is `L · M · h^{log_r L}`: `L^j M` is below it,
/// while `M h^{log_r L}` alone can be exceeded when `log_r h` is not an integer.
pub fn aag_growth_consistency(t: &GrowthTable, r: u64, l: u64, h0: u64) -> Result<GrowthReport> {
    check_params(r, l)?;
    if h0 == 0 {
        return Err(Error::Domain("h0 must be positive".into()));
    }
    if !t.monotone {
        return Err(Error::Precondition(
            "the polynomial bound needs a monotone table".into(),
        ));
    }
    let base_exp = ceil_log(r, h0);
    let needed =
        u64::try_from(crate::lattice::checked_pow(r, base_exp as u64)?).map_err(|_| Error::Overflow("r^⌈log_r h0⌉"))?;
    if needed > t.len() as u64 {
        return Err(Error::TableTooShort { needed, len: t.len() });
    }
    let ratio = ratio_scan(t, r, l, h0, false)?;
    let m = t.values[..needed as usize].iter().copied().max().expect("non-empty");
    let mut bound_violations = Vec::new();
    for h in 1..=t.len() as u64 {
        let j = ceil_log(r, h).saturating_sub(base_exp);
        let cap = (l as u128).checked_pow(j).and_then(|p| p.checked_mul(m as u128));
        if let Some(cap) = cap {
            if t.f(h).expect("tabulated") as u128 > cap {
                bound_violations.push(h);
            }
        }
    }
    let mut bound = poly_bound(r, l, m)?;
    bound.constant = l as u128 * m as u128;
    Ok(GrowthReport {
        consistent: ratio.passed && bound_violations.is_empty(),
        certified_up_to: t.len() as u64,
        r,
        l,
        h0,
        ratio_violations: ratio.violations,
        m,
        bound,
        bound_violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn zs(xs: &[i64]) -> Vec<GroupElement> {
        xs.iter().map(|&x| GroupElement::free(vec![x])).collect()
    }

    fn binom(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn table_examples() {
        let t = growth_table(&GroupSpec::integers(), &zs(&[0, 1]), 8).unwrap();
        assert_eq!(t.values, (2..=9).collect::<Vec<u64>>());
        assert!(t.monotone);
        let t = growth_table(&GroupSpec::integers(), &zs(&[1]), 5).unwrap();
        assert_eq!(t.values, vec![1; 5]);

        let z2 = GroupSpec::free_abelian(2);
        let a = vec![
            GroupElement::free(vec![0, 0]),
            GroupElement::free(vec![1, 0]),
            GroupElement::free(vec![0, 1]),
        ];
        let t = growth_table(&z2, &a, 5).unwrap();
        let oracle: Vec<u64> = (1..=5).map(|h| binom(h + 2, 2)).collect();
        assert_eq!(t.values, oracle);
        assert_eq!(t.values, vec![3, 6, 10, 15, 21]);
    }

    #[test]
    fn ratio_examples() {
        let linear = GrowthTable::from_values((2..=65).collect(), "h + 1").unwrap();
        assert!(ratio_check(&linear, 2, 3).unwrap().passed);

        let exp = GrowthTable::from_values((1..=10).map(|h| 1u64 << h).collect(), "2^h").unwrap();
        let res = ratio_check(&exp, 2, 3).unwrap();
        assert!(!res.passed);
        assert_eq!(res.violations, vec![2, 3, 4, 5]);

        let constant = GrowthTable::from_values(vec![7; 20], "7").unwrap();
        for r in 2..5 {
            for l in 2..5 {
                assert!(ratio_check(&constant, r, l).unwrap().passed);
            }
        }
    }

    #[test]
    fn poly_bound_examples() {
        let b = poly_bound(2, 3, 5).unwrap();
        assert_eq!((b.degree, b.constant), (2, 15));
        assert!((b.exponent - 3f64.log2()).abs() < 1e-12);
        for r in 2..10 {
            assert_eq!(poly_bound(r, r, 1).unwrap().degree, 1);
        }
        assert_eq!(poly_bound(4, 2, 1).unwrap().degree, 1);
        assert_eq!(poly_bound(2, 9, 1).unwrap().degree, 4);
        assert_eq!(poly_bound(3, 9, 1).unwrap().degree, 2);
    }

    #[test]
    fn consistency_examples() {
        let t = growth_table(&GroupSpec::integers(), &zs(&[0, 1]), 32).unwrap();
        let rep = aag_growth_consistency(&t, 2, 3, 1).unwrap();
        assert!(rep.consistent);
        assert_eq!(rep.m, 2);
        let rep = certify_polynomial(&t, 2, 3).unwrap();
        assert!(rep.consistent);
        for h in 1..=32 {
            assert!((t.f(h).unwrap() as f64) <= rep.bound.evaluate(h));
        }

        let exp = GrowthTable::from_values((1..=16).map(|h| 1u64 << h).collect(), "2^h").unwrap();
        let rep = aag_growth_consistency(&exp, 2, 3, 1).unwrap();
        assert!(!rep.consistent);
        assert!(!rep.ratio_violations.is_empty());
        assert!(!rep.bound_violations.is_empty());

        let short = GrowthTable::from_values(vec![1, 2, 3], "short").unwrap();
        assert_eq!(
            aag_growth_consistency(&short, 2, 3, 5).unwrap_err(),
            Error::TableTooShort { needed: 8, len: 3 }
        );

        let wobbly = GrowthTable::from_values(vec![3, 2, 4, 5], "wobbly").unwrap();
        assert!(!wobbly.monotone);
        assert!(ratio_check(&wobbly, 2, 3).is_ok());
        assert!(matches!(certify_polynomial(&wobbly, 2, 3), Err(Error::Precondition(_))));
    }

    #[test]
    fn threshold_uses_max_over_prefix() {
        // f(rh) <= L f(h) only from h0 = 3 on
        let values = vec![1, 1, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18];
        let t = GrowthTable::from_values(values, "synthetic").unwrap();
        assert!(!ratio_check(&t, 2, 2).unwrap().passed);
        let rep = aag_growth_consistency(&t, 2, 2, 3).unwrap();
        assert_eq!(rep.m, 10);
        assert!(rep.consistent);
    }

    proptest! {
        #[test]
        fn degree_ignores_scaling(r in 2u64..20, l in 2u64..500, c in 1u64..1000) {
            prop_assert_eq!(poly_bound(r, l, 1).unwrap().degree, poly_bound(r, l, c).unwrap().degree);
        }

        #[test]
        fn degree_is_ceil_log(r in 2u64..20, l in 2u64..10_000) {
            let d = poly_bound(r, l, 1).unwrap().degree;
            prop_assert!((r as u128).pow(d) >= l as u128);
            prop_assert!((r as u128).pow(d - 1) < l as u128);
        }

        #[test]
        fn ratio_check_monotone_in_l(
            steps in proptest::collection::vec(0u64..5, 1..40),
            r in 2u64..4,
            l in 2u64..6,
            extra in 0u64..4,
        ) {
            let values: Vec<u64> = steps.iter().scan(1u64, |acc, s| { *acc += s; Some(*acc) }).collect();
            let t = GrowthTable::from_values(values, "random").unwrap();
            if ratio_check(&t, r, l).unwrap().passed {
                prop_assert!(ratio_check(&t, r, l + extra).unwrap().passed);
            }
        }

        #[test]
        fn passing_tables_meet_the_polynomial(
            steps in proptest::collection::vec(0u64..3, 1..64),
            r in 2u64..4,
            l in 3u64..6,
        ) {
            let values: Vec<u64> = steps.iter().scan(1u64, |acc, s| { *acc += s; Some(*acc) }).collect();
            let t = GrowthTable::from_values(values, "random").unwrap();
            let rep = certify_polynomial(&t, r, l).unwrap();
            if rep.ratio_violations.is_empty() {
                prop_assert!(rep.bound_violations.is_empty());
                for h in 1..=t.len() as u64 {
                    prop_assert!(t.f(h).unwrap() as f64 <= rep.bound.evaluate(h) * (1.0 + 1e-12));
                }
            }
        }
    }
}
