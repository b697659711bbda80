//! Covering witnesses for asymptotic approximate groups.
//!
//! For a finite set or a semilinear set `A` in a finitely generated abelian
//! group and integers `r, h`, the crate builds an explicit set `X` with
//! `rhA ⊆ X + hA` and `|X| <= (4rk)^k`, where `k` is the number of elements
//! (finite case) or linear components (semilinear case). Independent
//! oracles check the inclusion, compute minimal covering numbers on small
//! instances, and test growth tables for polynomial behaviour.

pub mod abelian;
pub mod error;
pub mod growth;
pub mod json_int;
pub mod lattice;
pub mod semilinear;
pub mod verify;
pub mod witness;

pub use abelian::{ElementSet, GroupElement, GroupSpec, Homomorphism};
pub use error::{Error, Result};
pub use growth::{
    aag_growth_consistency, certify_polynomial, growth_table, poly_bound, ratio_check, GrowthReport, GrowthTable,
    PolyBound, RatioCheck,
};
pub use lattice::{
    certify_simplex_cover, compositions, cover_unit_simplex, lattice_cover, CubeSpec, Dilate, LatticePoint,
    RationalVector, SimplexSpec,
};
pub use semilinear::{LinearSet, SemilinearSet};
pub use verify::{
    check_inclusion, compare_report, exact_kappa, nathanson_bound, Evidence, FreeLattice, InclusionCheck, Verification,
    WitnessReport,
};
pub use witness::{
    asymptotic_witness, covering_bound, witness_finite, witness_semilinear, AsymptoticWitness, Construction,
    CoveringWitness, FreeCover, WitnessInput,
};
