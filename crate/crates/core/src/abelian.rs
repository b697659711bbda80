//! Finitely generated abelian groups `Z^d ⊕ Z/n_1 ⊕ … ⊕ Z/n_t`, their
//! elements, homomorphisms out of free abelian groups, and iterated sumsets.
//!
//! Elements are always kept in canonical form: every torsion coordinate is a
//! residue in `[0, n_i)`. Equality, hashing and ordering are therefore plain
//! componentwise comparisons. Free coordinates use checked `i64` arithmetic
//! and report [`Error::Overflow`] instead of wrapping.

use crate::error::{Error, Result};
use crate::json_int;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashSet};
use std::fmt;

/// Finite sets of group elements. Ordered so that every derived output
/// (witness lists, counterexamples, reports) is deterministic.
pub type ElementSet = BTreeSet<GroupElement>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GroupSpecRepr", into = "GroupSpecRepr")]
pub struct GroupSpec {
    free_rank: usize,
    torsion_orders: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct GroupSpecRepr {
    free_rank: usize,
    #[serde(default, with = "json_int::vec_i64")]
    torsion: Vec<i64>,
}

impl TryFrom<GroupSpecRepr> for GroupSpec {
    type Error = Error;
    fn try_from(r: GroupSpecRepr) -> Result<Self> {
        GroupSpec::new(r.free_rank, r.torsion)
    }
}

impl From<GroupSpec> for GroupSpecRepr {
    fn from(g: GroupSpec) -> Self {
        GroupSpecRepr {
            free_rank: g.free_rank,
            torsion: g.torsion_orders,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GroupElement {
    #[serde(with = "json_int::vec_i64")]
    pub free: Vec<i64>,
    #[serde(default, with = "json_int::vec_i64")]
    pub torsion: Vec<i64>,
}

impl GroupElement {
    /// An element of a torsion-free group `Z^d`.
    pub fn free(coords: impl Into<Vec<i64>>) -> Self {
        GroupElement {
            free: coords.into(),
            torsion: Vec::new(),
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        let mut first = true;
        for x in self.free.iter().chain(self.torsion.iter()) {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "{x}")?;
        }
        if self.torsion.is_empty() {
            write!(f, ")")
        } else {
            write!(f, " | torsion {})", self.torsion.len())
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            d => parts.push(format!("Z^{d}")),
        }
        parts.extend(self.torsion_orders.iter().map(|n| format!("Z/{n}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl GroupSpec {
    /// Builds `Z^free_rank ⊕ ⊕ Z/n_i`. Factors of order 1 are dropped;
    /// orders below 1 are rejected.
    pub fn new(free_rank: usize, torsion_orders: impl Into<Vec<i64>>) -> Result<Self> {
        let mut orders = torsion_orders.into();
        if let Some(bad) = orders.iter().find(|&&n| n < 1) {
            return Err(Error::Domain(format!("torsion order {bad} is not a positive integer")));
        }
        orders.retain(|&n| n != 1);
        Ok(GroupSpec {
            free_rank,
            torsion_orders: orders,
        })
    }

    pub fn integers() -> Self {
        Self::free_abelian(1)
    }

    pub fn free_abelian(rank: usize) -> Self {
        GroupSpec {
            free_rank: rank,
            torsion_orders: Vec::new(),
        }
    }

    pub fn cyclic(n: i64) -> Result<Self> {
        Self::new(0, vec![n])
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion_orders(&self) -> &[i64] {
        &self.torsion_orders
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion_orders.is_empty()
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            free: vec![0; self.free_rank],
            torsion: vec![0; self.torsion_orders.len()],
        }
    }

    /// Builds an element, reducing the torsion coordinates.
    pub fn element(&self, free: impl Into<Vec<i64>>, torsion: impl Into<Vec<i64>>) -> Result<GroupElement> {
        self.reduce(&GroupElement {
            free: free.into(),
            torsion: torsion.into(),
        })
    }

    /// Shorthand for elements of `Z`.
    pub fn int(&self, n: i64) -> Result<GroupElement> {
        self.element(vec![n], Vec::new())
    }

    fn check_shape(&self, g: &GroupElement) -> Result<()> {
        if g.free.len() != self.free_rank || g.torsion.len() != self.torsion_orders.len() {
            return Err(Error::Shape(format!(
                "element {g} does not belong to {self} (expected {} free and {} torsion coordinates)",
                self.free_rank,
                self.torsion_orders.len()
            )));
        }
        Ok(())
    }

    /// True iff `g` has the right shape and is already in canonical form.
    pub fn contains(&self, g: &GroupElement) -> bool {
        self.check_shape(g).is_ok()
            && g.torsion
                .iter()
                .zip(&self.torsion_orders)
                .all(|(&x, &n)| (0..n).contains(&x))
    }

    /// Canonical form of `g`: torsion coordinates reduced into `[0, n_i)`.
    pub fn reduce(&self, g: &GroupElement) -> Result<GroupElement> {
        self.check_shape(g)?;
        Ok(GroupElement {
            free: g.free.clone(),
            torsion: g
                .torsion
                .iter()
                .zip(&self.torsion_orders)
                .map(|(&x, &n)| x.rem_euclid(n))
                .collect(),
        })
    }

    fn member(&self, g: &GroupElement) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            self.check_shape(g)?;
            Err(Error::Shape(format!("element {g} is not in canonical form for {self}")))
        }
    }

    pub fn add(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.member(g)?;
        self.member(h)?;
        let free = g
            .free
            .iter()
            .zip(&h.free)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow("add")))
            .collect::<Result<Vec<_>>>()?;
        let torsion = g
            .torsion
            .iter()
            .zip(&h.torsion)
            .zip(&self.torsion_orders)
            .map(|((&a, &b), &n)| ((a as i128 + b as i128) % n as i128) as i64)
            .collect();
        Ok(GroupElement { free, torsion })
    }

    pub fn neg(&self, g: &GroupElement) -> Result<GroupElement> {
        self.times(-1, g)
    }

    pub fn sub(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.add(g, &self.neg(h)?)
    }

    /// The `n`-fold sum `g + … + g`; `scale(0, g)` is the identity.
    pub fn scale(&self, n: u64, g: &GroupElement) -> Result<GroupElement> {
        let n = i64::try_from(n).map_err(|_| Error::Overflow("scale"))?;
        self.times(n, g)
    }

    /// Integer multiple `c·g` for any sign of `c`.
    pub fn times(&self, c: i64, g: &GroupElement) -> Result<GroupElement> {
        self.member(g)?;
        let free = g
            .free
            .iter()
            .map(|&a| a.checked_mul(c).ok_or(Error::Overflow("times")))
            .collect::<Result<Vec<_>>>()?;
        let torsion = g
            .torsion
            .iter()
            .zip(&self.torsion_orders)
            .map(|(&a, &n)| ((a as i128 * c as i128).rem_euclid(n as i128)) as i64)
            .collect();
        Ok(GroupElement { free, torsion })
    }

    /// `S + T = { s + t }`, deduplicated.
    pub fn sumset(&self, s: &ElementSet, t: &ElementSet) -> Result<ElementSet> {
        if s.is_empty() || t.is_empty() {
            return Err(Error::Domain("sumset of an empty set".into()));
        }
        let mut out = HashSet::with_capacity(s.len().max(t.len()));
        for a in s {
            for b in t {
                out.insert(self.add(a, b)?);
            }
        }
        Ok(out.into_iter().collect())
    }

    /// The h-fold sumset `hA`. `h = 0` is rejected: no convention for `0A`
    /// is fixed here.
    pub fn iterated_sumset(&self, a: &ElementSet, h: u64) -> Result<ElementSet> {
        if h == 0 {
            return Err(Error::Domain("iterated sumset with h = 0".into()));
        }
        if a.is_empty() {
            return Err(Error::Domain("iterated sumset of an empty set".into()));
        }
        let mut acc = a.clone();
        for _ in 1..h {
            acc = self.sumset(&acc, a)?;
        }
        Ok(acc)
    }
}

impl GroupSpec {
    /// Order of the torsion subgroup of `<A>`, the subgroup generated by `a`.
    ///
    /// An element `Σ c_i a_i` is torsion exactly when `Σ c_i free(a_i) = 0`,
    /// so the torsion subgroup is generated by the torsion parts of a basis
    /// of that relation lattice. The basis comes from unimodular column
    /// reduction of the matrix of free parts.
    pub fn torsion_subgroup_order(&self, a: &[GroupElement]) -> Result<u64> {
        for g in a {
            self.member(g)?;
        }
        let total: u64 = self
            .torsion_orders
            .iter()
            .try_fold(1u64, |acc, &n| acc.checked_mul(n as u64))
            .ok_or(Error::Overflow("torsion order"))?;
        const LIMIT: u64 = 1 << 24;
        if total > LIMIT {
            return Err(Error::TooLarge {
                what: "torsion part",
                size: total as usize,
                limit: LIMIT as usize,
            });
        }
        let torsion_part = GroupSpec {
            free_rank: 0,
            torsion_orders: self.torsion_orders.clone(),
        };
        let images: Vec<GroupElement> = a
            .iter()
            .map(|g| GroupElement {
                free: vec![],
                torsion: g.torsion.clone(),
            })
            .collect();
        let pi = Homomorphism::new(torsion_part.clone(), images)?;
        let mut gens = Vec::new();
        for rel in relation_basis(a, self.free_rank)? {
            let c: Vec<i64> = rel
                .iter()
                .map(|&x| i64::try_from(x).map_err(|_| Error::Overflow("relation lattice")))
                .collect::<Result<_>>()?;
            gens.push(pi.apply(&c)?);
        }
        let mut seen: HashSet<GroupElement> = HashSet::new();
        let mut queue = vec![torsion_part.identity()];
        seen.insert(torsion_part.identity());
        while let Some(x) = queue.pop() {
            for g in &gens {
                let y = torsion_part.add(&x, g)?;
                if seen.insert(y.clone()) {
                    queue.push(y);
                }
            }
        }
        Ok(seen.len() as u64)
    }
}

/// Basis of `{ c ∈ Z^k : Σ c_i free(a_i) = 0 }`.
fn relation_basis(a: &[GroupElement], rank: usize) -> Result<Vec<Vec<i128>>> {
    let k = a.len();
    let overflow = || Error::Overflow("relation lattice");
    // columns of m are the free parts; u tracks the column operations
    let mut m: Vec<Vec<i128>> = a.iter().map(|g| g.free.iter().map(|&x| x as i128).collect()).collect();
    let mut u: Vec<Vec<i128>> = (0..k).map(|i| (0..k).map(|j| i128::from(i == j)).collect()).collect();
    let mut pivot = 0;
    for row in 0..rank {
        if pivot == k {
            break;
        }
        // repeatedly reduce by the smallest non-zero entry of this row
        while let Some(best) = (pivot..k)
            .filter(|&c| m[c][row] != 0)
            .min_by_key(|&c| m[c][row].unsigned_abs())
        {
            m.swap(pivot, best);
            u.swap(pivot, best);
            let (pm, pu) = (m[pivot].clone(), u[pivot].clone());
            let mut done = true;
            for c in pivot + 1..k {
                let q = m[c][row] / pm[row];
                if q != 0 {
                    for (col, piv) in [(&mut m[c], &pm), (&mut u[c], &pu)] {
                        for (x, &p) in col.iter_mut().zip(piv) {
                            *x = x
                                .checked_sub(q.checked_mul(p).ok_or_else(overflow)?)
                                .ok_or_else(overflow)?;
                        }
                    }
                }
                if m[c][row] != 0 {
                    done = false;
                }
            }
            if done {
                pivot += 1;
                break;
            }
        }
    }
    Ok(u.split_off(pivot))
}

/// A homomorphism `Z^m -> G` determined by the images of the standard basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homomorphism {
    target: GroupSpec,
    images: Vec<GroupElement>,
}

impl Homomorphism {
    pub fn new(target: GroupSpec, images: Vec<GroupElement>) -> Result<Self> {
        for g in &images {
            target.member(g)?;
        }
        Ok(Homomorphism { target, images })
    }

    pub fn source_rank(&self) -> usize {
        self.images.len()
    }

    pub fn target(&self) -> &GroupSpec {
        &self.target
    }

    pub fn images(&self) -> &[GroupElement] {
        &self.images
    }

    /// `Σ u_i · images[i]`. Coordinates of `u` may be negative.
    pub fn apply(&self, u: &[i64]) -> Result<GroupElement> {
        if u.len() != self.images.len() {
            return Err(Error::Shape(format!(
                "vector of length {} applied to a homomorphism from Z^{}",
                u.len(),
                self.images.len()
            )));
        }
        let mut acc = self.target.identity();
        for (&c, g) in u.iter().zip(&self.images) {
            if c != 0 {
                acc = self.target.add(&acc, &self.target.times(c, g)?)?;
            }
        }
        Ok(acc)
    }

    pub fn image_set<'a, I>(&self, vectors: I) -> Result<ElementSet>
    where
        I: IntoIterator<Item = &'a [i64]>,
    {
        vectors.into_iter().map(|u| self.apply(u)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z() -> GroupSpec {
        GroupSpec::integers()
    }

    fn zset(xs: &[i64]) -> ElementSet {
        xs.iter().map(|&x| GroupElement::free(vec![x])).collect()
    }

    #[test]
    fn torsion_subgroup_examples() {
        let g = GroupSpec::new(1, vec![6]).unwrap();
        let a = vec![
            g.element(vec![1], vec![1]).unwrap(),
            g.element(vec![1], vec![0]).unwrap(),
        ];
        assert_eq!(g.torsion_subgroup_order(&a).unwrap(), 6);
        let a = vec![
            g.element(vec![2], vec![3]).unwrap(),
            g.element(vec![1], vec![0]).unwrap(),
        ];
        assert_eq!(g.torsion_subgroup_order(&a).unwrap(), 2);
        let a = vec![g.element(vec![1], vec![2]).unwrap()];
        assert_eq!(g.torsion_subgroup_order(&a).unwrap(), 1);
        assert_eq!(z().torsion_subgroup_order(&[GroupElement::free(vec![3])]).unwrap(), 1);
        let c = GroupSpec::new(0, vec![4, 6]).unwrap();
        let a = vec![
            c.element(vec![], vec![2, 0]).unwrap(),
            c.element(vec![], vec![0, 3]).unwrap(),
        ];
        assert_eq!(c.torsion_subgroup_order(&a).unwrap(), 4);
    }

    #[test]
    fn order_one_factors_are_dropped() {
        let g = GroupSpec::new(1, vec![1, 3, 1]).unwrap();
        assert_eq!(g.torsion_orders(), &[3]);
        assert!(GroupSpec::new(0, vec![0]).is_err());
        assert!(GroupSpec::new(0, vec![-2]).is_err());
        let trivial = GroupSpec::new(0, vec![]).unwrap();
        assert_eq!(trivial.identity(), GroupElement::free(vec![]));
    }

    #[test]
    fn addition_examples() {
        let g = GroupSpec::new(1, vec![3]).unwrap();
        let a = g.element(vec![2], vec![2]).unwrap();
        let b = g.element(vec![1], vec![2]).unwrap();
        assert_eq!(g.add(&a, &b).unwrap(), g.element(vec![3], vec![1]).unwrap());
        assert_eq!(g.add(&a, &g.identity()).unwrap(), a);

        let z2 = GroupSpec::free_abelian(2);
        let s = z2
            .add(&GroupElement::free(vec![1, 0]), &GroupElement::free(vec![0, 1]))
            .unwrap();
        assert_eq!(s, GroupElement::free(vec![1, 1]));
    }

    #[test]
    fn mismatched_shapes_are_rejected() {
        let g = GroupSpec::new(1, vec![3]).unwrap();
        let bad = GroupElement::free(vec![1, 2]);
        assert!(matches!(g.add(&bad, &g.identity()), Err(Error::Shape(_))));
        // unreduced residue
        let unreduced = GroupElement {
            free: vec![0],
            torsion: vec![5],
        };
        assert!(matches!(g.add(&unreduced, &g.identity()), Err(Error::Shape(_))));
    }

    #[test]
    fn scale_examples() {
        let g = GroupSpec::new(1, vec![2]).unwrap();
        let x = g.element(vec![1], vec![1]).unwrap();
        assert_eq!(g.scale(0, &x).unwrap(), g.identity());
        assert_eq!(g.scale(3, &x).unwrap(), g.element(vec![3], vec![1]).unwrap());
        assert_eq!(z().scale(5, &z().int(2).unwrap()).unwrap(), z().int(10).unwrap());
    }

    #[test]
    fn overflow_is_reported() {
        let big = z().int(i64::MAX).unwrap();
        assert_eq!(z().add(&big, &big), Err(Error::Overflow("add")));
        assert_eq!(z().scale(2, &big), Err(Error::Overflow("times")));
    }

    #[test]
    fn sumset_examples() {
        assert_eq!(z().sumset(&zset(&[0]), &zset(&[0])).unwrap(), zset(&[0]));
        assert_eq!(z().sumset(&zset(&[0, 1]), &zset(&[0, 1])).unwrap(), zset(&[0, 1, 2]));
        assert_eq!(
            z().sumset(&zset(&[0, 1, 3]), &zset(&[0, 1, 3])).unwrap(),
            zset(&[0, 1, 2, 3, 4, 6])
        );
        assert!(matches!(z().sumset(&zset(&[]), &zset(&[0])), Err(Error::Domain(_))));
    }

    #[test]
    fn iterated_sumset_examples() {
        let a = zset(&[0, 1, 3]);
        assert_eq!(z().iterated_sumset(&a, 1).unwrap(), a);
        assert_eq!(
            z().iterated_sumset(&zset(&[0, 1]), 5).unwrap(),
            zset(&[0, 1, 2, 3, 4, 5])
        );
        assert_eq!(z().iterated_sumset(&a, 3).unwrap(), zset(&[0, 1, 2, 3, 4, 5, 6, 7, 9]));
        assert!(matches!(z().iterated_sumset(&a, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn homomorphism_examples() {
        let pi = Homomorphism::new(z(), vec![z().int(2).unwrap(), z().int(3).unwrap()]).unwrap();
        assert_eq!(pi.apply(&[1, 0]).unwrap(), z().int(2).unwrap());
        assert_eq!(pi.apply(&[0, 0]).unwrap(), z().identity());
        assert_eq!(pi.apply(&[1, 1]).unwrap(), z().int(5).unwrap());
        assert!(matches!(pi.apply(&[1]), Err(Error::Shape(_))));

        let zero: &[i64] = &[0, 0];
        assert_eq!(pi.image_set([zero]).unwrap(), [z().identity()].into());

        let z_mod_2 = GroupSpec::cyclic(2).unwrap();
        let parity = Homomorphism::new(z_mod_2.clone(), vec![z_mod_2.element(vec![], vec![1]).unwrap()]).unwrap();
        let us: Vec<Vec<i64>> = (0..4).map(|i| vec![i]).collect();
        let img = parity.image_set(us.iter().map(Vec::as_slice)).unwrap();
        assert_eq!(img.len(), 2);

        let proj = Homomorphism::new(z(), vec![z().int(1).unwrap(), z().int(1).unwrap()]).unwrap();
        let us = [vec![0, 1], vec![1, 0]];
        let img = proj.image_set(us.iter().map(Vec::as_slice)).unwrap();
        assert_eq!(img, zset(&[1]));
    }

    fn small_group() -> impl Strategy<Value = GroupSpec> {
        (0usize..3, proptest::collection::vec(2i64..8, 0..3)).prop_map(|(d, t)| GroupSpec::new(d, t).unwrap())
    }

    fn element_of(g: GroupSpec) -> impl Strategy<Value = GroupElement> {
        let d = g.free_rank();
        let t = g.torsion_orders().len();
        (
            proptest::collection::vec(-20i64..20, d),
            proptest::collection::vec(-50i64..50, t),
        )
            .prop_map(move |(f, tor)| g.element(f, tor).unwrap())
    }

    proptest! {
        #[test]
        fn torsion_order_matches_search(
            rank in 1usize..3,
            raw in proptest::collection::vec((proptest::collection::vec(-3i64..4, 2), 0i64..6, 0i64..4), 1..4),
        ) {
            let g = GroupSpec::new(rank, vec![6, 4]).unwrap();
            let a: Vec<GroupElement> = raw
                .iter()
                .map(|(f, t6, t4)| g.element(f[..rank].to_vec(), vec![*t6, *t4]).unwrap())
                .collect();
            // every relation with coefficients in [-18, 18] (a kernel basis fits by
            // Cramer's rule: minors of a 2 x 3 matrix with entries in [-3, 3]),
            // closed under addition
            let t = GroupSpec::new(0, vec![6, 4]).unwrap();
            let k = a.len();
            let mut found = vec![t.identity()];
            let mut c = vec![-18i64; k];
            loop {
                let mut free = vec![0i64; rank];
                let mut tor = t.identity();
                for (ci, x) in c.iter().zip(&a) {
                    for (acc, v) in free.iter_mut().zip(&x.free) {
                        *acc += ci * v;
                    }
                    let part = GroupElement { free: vec![], torsion: x.torsion.clone() };
                    tor = t.add(&tor, &t.times(*ci, &part).unwrap()).unwrap();
                }
                if free.iter().all(|&x| x == 0) {
                    found.push(tor);
                }
                let mut i = 0;
                while i < k && c[i] == 18 {
                    c[i] = -18;
                    i += 1;
                }
                if i == k {
                    break;
                }
                c[i] += 1;
            }
            let mut closure: HashSet<GroupElement> = found.iter().cloned().collect();
            loop {
                let before = closure.len();
                let items: Vec<_> = closure.iter().cloned().collect();
                for x in &items {
                    for y in &found {
                        closure.insert(t.add(x, y).unwrap());
                    }
                }
                if closure.len() == before {
                    break;
                }
            }
            prop_assert_eq!(g.torsion_subgroup_order(&a).unwrap(), closure.len() as u64);
        }
    }

    proptest! {
        #[test]
        fn hom_apply_is_linear(
            (g, images) in small_group().prop_flat_map(|g| {
                let imgs = proptest::collection::vec(element_of(g.clone()), 1..4);
                (Just(g), imgs)
            }),
            seed in proptest::collection::vec((-10i64..10, -10i64..10), 3),
        ) {
            let m = images.len();
            let pi = Homomorphism::new(g.clone(), images.clone()).unwrap();
            let u: Vec<i64> = seed.iter().take(m).map(|p| p.0).collect();
            let v: Vec<i64> = seed.iter().take(m).map(|p| p.1).collect();
            let uv: Vec<i64> = u.iter().zip(&v).map(|(a, b)| a + b).collect();
            let lhs = pi.apply(&uv).unwrap();
            let rhs = g.add(&pi.apply(&u).unwrap(), &pi.apply(&v).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            for (i, img) in images.iter().enumerate() {
                let mut e = vec![0; m];
                e[i] = 1;
                prop_assert_eq!(&pi.apply(&e).unwrap(), img);
            }
        }

        #[test]
        fn reduce_is_idempotent(x in small_group().prop_flat_map(|g| (Just(g.clone()), element_of(g)))) {
            let (g, e) = x;
            let once = g.reduce(&e).unwrap();
            prop_assert_eq!(&once, &e);
            prop_assert_eq!(g.reduce(&once).unwrap(), once);
        }

        #[test]
        fn iterated_sumset_is_associative(
            x in small_group().prop_flat_map(|g| {
                let set = proptest::collection::btree_set(element_of(g.clone()), 1..=4);
                (Just(g), set)
            }),
            h1 in 1u64..=6,
            h2 in 1u64..=6,
        ) {
            let (g, a) = x;
            let lhs = g.iterated_sumset(&a, h1 + h2).unwrap();
            let rhs = g.sumset(&g.iterated_sumset(&a, h1).unwrap(), &g.iterated_sumset(&a, h2).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn projection_preserves_covering(
            images in proptest::collection::vec(-4i64..5, 2),
            s2 in proptest::collection::btree_set(proptest::collection::vec(0i64..4, 2), 1..5),
            ys in proptest::collection::vec(proptest::collection::vec(-3i64..4, 2), 1..4),
        ) {
            // S1 := Y + S2 is covered by construction; its image must be covered by the images.
            let g = GroupSpec::new(1, vec![5]).unwrap();
            let imgs = vec![
                g.element(vec![images[0]], vec![images[1]]).unwrap(),
                g.element(vec![images[1]], vec![images[0]]).unwrap(),
            ];
            let pi = Homomorphism::new(g.clone(), imgs).unwrap();
            let s1: Vec<Vec<i64>> = ys.iter()
                .flat_map(|y| s2.iter().map(move |s| vec![y[0] + s[0], y[1] + s[1]]))
                .collect();
            let img_s1 = pi.image_set(s1.iter().map(Vec::as_slice)).unwrap();
            let img_s2 = pi.image_set(s2.iter().map(Vec::as_slice)).unwrap();
            let img_y = pi.image_set(ys.iter().map(Vec::as_slice)).unwrap();
            for p in &img_s1 {
                let covered = img_y.iter().any(|x| img_s2.contains(&g.sub(p, x).unwrap()));
                prop_assert!(covered);
            }
        }
    }
}
