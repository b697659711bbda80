//! Linear sets (generalised arithmetic progressions), finite unions of
//! them, and finite windows onto their iterated sumsets.

use crate::abelian::{ElementSet, GroupElement, GroupSpec};
use crate::error::{Error, Result};
use crate::json_int::JsonU128;
use crate::lattice::compositions;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};

/// `P(a; b_1, …, b_d) = { a + Σ n_i b_i }` with `n_i ≥ 0`, and
/// `n_i ≤ bounds[i]` in every bounded direction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "LinearSetRepr", into = "LinearSetRepr")]
pub struct LinearSet {
    base: GroupElement,
    steps: Vec<GroupElement>,
    bounds: Vec<Option<u64>>,
}

#[derive(Serialize, Deserialize)]
struct LinearSetRepr {
    base: GroupElement,
    #[serde(default)]
    steps: Vec<GroupElement>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bounds: Option<Vec<Option<JsonU128>>>,
}

impl TryFrom<LinearSetRepr> for LinearSet {
    type Error = Error;
    fn try_from(r: LinearSetRepr) -> Result<Self> {
        let bounds = r
            .bounds
            .map(|bs| {
                bs.into_iter()
                    .map(|b| {
                        b.map(|v| u64::try_from(v.0).map_err(|_| Error::Overflow("linear set bound")))
                            .transpose()
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .transpose()?;
        LinearSet::new(r.base, r.steps, bounds)
    }
}

impl From<LinearSet> for LinearSetRepr {
    fn from(l: LinearSet) -> Self {
        let bounds = if l.is_unbounded() {
            None
        } else {
            Some(l.bounds.iter().map(|b| b.map(|v| JsonU128(v as u128))).collect())
        };
        LinearSetRepr {
            base: l.base,
            steps: l.steps,
            bounds,
        }
    }
}

impl LinearSet {
    /// `bounds = None` means every direction is unbounded; inside `Some`,
    /// a `None` entry marks a single unbounded direction.
    pub fn new(base: GroupElement, steps: Vec<GroupElement>, bounds: Option<Vec<Option<u64>>>) -> Result<Self> {
        let bounds = match bounds {
            None => vec![None; steps.len()],
            Some(b) if b.len() == steps.len() => b,
            Some(b) => {
                return Err(Error::Shape(format!(
                    "linear set has {} steps but {} bounds",
                    steps.len(),
                    b.len()
                )))
            }
        };
        Ok(LinearSet { base, steps, bounds })
    }

    pub fn unbounded(base: GroupElement, steps: Vec<GroupElement>) -> Self {
        let bounds = vec![None; steps.len()];
        LinearSet { base, steps, bounds }
    }

    pub fn bounded(base: GroupElement, steps: Vec<GroupElement>, bounds: Vec<u64>) -> Result<Self> {
        Self::new(base, steps, Some(bounds.into_iter().map(Some).collect()))
    }

    pub fn singleton(base: GroupElement) -> Self {
        Self::unbounded(base, Vec::new())
    }

    pub fn base(&self) -> &GroupElement {
        &self.base
    }

    pub fn steps(&self) -> &[GroupElement] {
        &self.steps
    }

    pub fn bounds(&self) -> &[Option<u64>] {
        &self.bounds
    }

    pub fn dimension(&self) -> usize {
        self.steps.len()
    }

    pub fn is_unbounded(&self) -> bool {
        self.bounds.iter().all(Option::is_none)
    }

    fn check_group(&self, group: &GroupSpec) -> Result<()> {
        for g in std::iter::once(&self.base).chain(&self.steps) {
            if !group.contains(g) {
                return Err(Error::Shape(format!("linear set element {g} is not in {group}")));
            }
        }
        Ok(())
    }

    /// Splits off every bounded direction: `P_{m}(a; b)` becomes the `m + 1`
    /// sets `P(a + n b)` for `n ∈ [0, m]`, unbounded directions are kept as
    /// steps. The enumeration runs the first bounded direction slowest.
    pub fn decompose_bounded(&self, group: &GroupSpec) -> Result<Vec<LinearSet>> {
        self.check_group(group)?;
        if self.is_unbounded() {
            return Ok(vec![self.clone()]);
        }
        let free_steps: Vec<GroupElement> = self
            .steps
            .iter()
            .zip(&self.bounds)
            .filter(|(_, b)| b.is_none())
            .map(|(s, _)| s.clone())
            .collect();
        let bounded: Vec<(&GroupElement, u64)> = self
            .steps
            .iter()
            .zip(&self.bounds)
            .filter_map(|(s, b)| b.map(|m| (s, m)))
            .collect();
        let mut bases = vec![self.base.clone()];
        for (step, m) in bounded {
            let mut next = Vec::with_capacity(bases.len() * (m as usize + 1));
            for b in &bases {
                let mut cur = b.clone();
                next.push(cur.clone());
                for _ in 0..m {
                    cur = group.add(&cur, step)?;
                    next.push(cur.clone());
                }
            }
            bases = next;
        }
        Ok(bases
            .into_iter()
            .map(|b| LinearSet::unbounded(b, free_steps.clone()))
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SemilinearRepr", into = "SemilinearRepr")]
pub struct SemilinearSet {
    group: GroupSpec,
    components: Vec<LinearSet>,
}

#[derive(Serialize, Deserialize)]
struct SemilinearRepr {
    group: GroupSpec,
    components: Vec<LinearSet>,
}

impl TryFrom<SemilinearRepr> for SemilinearSet {
    type Error = Error;
    fn try_from(r: SemilinearRepr) -> Result<Self> {
        SemilinearSet::new(r.group, r.components)
    }
}

impl From<SemilinearSet> for SemilinearRepr {
    fn from(s: SemilinearSet) -> Self {
        SemilinearRepr {
            group: s.group,
            components: s.components,
        }
    }
}

impl SemilinearSet {
    pub fn new(group: GroupSpec, components: Vec<LinearSet>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Domain("a semilinear set needs at least one component".into()));
        }
        for c in &components {
            c.check_group(&group)?;
        }
        Ok(SemilinearSet { group, components })
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn components(&self) -> &[LinearSet] {
        &self.components
    }

    pub fn is_unbounded(&self) -> bool {
        self.components.iter().all(LinearSet::is_unbounded)
    }

    /// Replaces every bounded component by its unbounded pieces.
    pub fn decompose_bounded(&self) -> Result<SemilinearSet> {
        let mut parts = Vec::new();
        for c in &self.components {
            parts.extend(c.decompose_bounded(&self.group)?);
        }
        SemilinearSet::new(self.group.clone(), parts)
    }

    /// The semilinear representation of `hA` for unbounded `A`: one
    /// component per composition `m` of `h` over the components, with base
    /// `Σ m_i a_i` and the steps of every component that is used at least
    /// once. Summing `m_i ≥ 1` copies of an unbounded cone gives the cone
    /// back, so this is exactly `hA`.
    pub fn power(&self, h: u64) -> Result<SemilinearSet> {
        if h == 0 {
            return Err(Error::Domain("power with h = 0".into()));
        }
        if let Some(index) = self.components.iter().position(|c| !c.is_unbounded()) {
            return Err(Error::BoundedComponent { index });
        }
        let g = &self.group;
        let mut parts = Vec::new();
        for m in compositions(h, self.components.len(), false) {
            let mut base = g.identity();
            let mut steps = Vec::new();
            for (&mi, c) in m.0.iter().zip(&self.components) {
                if mi > 0 {
                    base = g.add(&base, &g.times(mi, &c.base)?)?;
                    steps.extend(c.steps.iter().cloned());
                }
            }
            parts.push(LinearSet::unbounded(base, steps));
        }
        SemilinearSet::new(g.clone(), parts)
    }

    /// Every element of a single component with all step coefficients at
    /// most `cap` (and within the component's own bounds).
    fn one_term_window(&self, cap: u64) -> Result<ElementSet> {
        let g = &self.group;
        let mut boxes: HashMap<Vec<(GroupElement, u64)>, ElementSet> = HashMap::new();
        let mut out = BTreeSet::new();
        for c in &self.components {
            let key: Vec<(GroupElement, u64)> = c
                .steps
                .iter()
                .zip(&c.bounds)
                .map(|(s, b)| (s.clone(), b.map_or(cap, |m| m.min(cap))))
                .collect();
            if !boxes.contains_key(&key) {
                let b = box_sum(g, &key)?;
                boxes.insert(key.clone(), b);
            }
            for x in &boxes[&key] {
                out.insert(g.add(&c.base, x)?);
            }
        }
        Ok(out)
    }

    /// Sums of `h` terms drawn from the components, where each term uses
    /// step coefficients at most `cap`. A subset of `hA`, equal to it when
    /// every component is bounded by `cap`. Requires `cap ≥ h`.
    pub fn truncated_enum(&self, h: u64, cap: u64) -> Result<ElementSet> {
        if h == 0 {
            return Err(Error::Domain("truncated_enum with h = 0".into()));
        }
        if cap < h {
            return Err(Error::Precondition(format!("cap {cap} is smaller than h = {h}")));
        }
        let window = self.one_term_window(cap)?;
        self.group.iterated_sumset(&window, h)
    }

    /// Whether `x` lies in `truncated_enum(h, cap)`. `false` only means "not
    /// found within the window".
    pub fn member_iterated(&self, h: u64, x: &GroupElement, cap: u64) -> Result<bool> {
        if !self.group.contains(x) {
            return Err(Error::Shape(format!("{x} is not an element of {}", self.group)));
        }
        Ok(self.truncated_enum(h, cap)?.contains(x))
    }

    /// The window `{ a + Σ n_j b_j : n_j ≤ cap }` over all components of
    /// `self` taken as one-term sets; applied to `self.power(h)` this
    /// truncates `hA` by bounding the total coefficient of every step.
    pub fn window(&self, cap: u64) -> Result<ElementSet> {
        self.one_term_window(cap)
    }
}

/// `Σ_j {0, s_j, 2 s_j, …, L_j s_j}`.
fn box_sum(g: &GroupSpec, steps: &[(GroupElement, u64)]) -> Result<ElementSet> {
    let mut acc: ElementSet = [g.identity()].into();
    for (step, limit) in steps {
        let mut next = acc.clone();
        let mut layer = acc;
        for _ in 0..*limit {
            layer = layer.iter().map(|x| g.add(x, step)).collect::<Result<_>>()?;
            let before = next.len();
            next.extend(layer.iter().cloned());
            // zero or torsion steps cycle; stop once nothing new appears
            if next.len() == before {
                break;
            }
        }
        acc = next;
    }
    Ok(acc)
}
