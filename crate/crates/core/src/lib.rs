//! Core library for building and checking collections of three Steiner
//! triple systems that pairwise intersect in the same block set, part of
//! which is a common flower (all blocks through one point).
//!
//! Everything in here is pure, deterministic combinatorics on integer
//! labels: triple systems, Latin squares, pairwise balanced and group
//! divisible designs, recursive constructions that assemble large
//! witnesses from small ones, a catalog of published small systems, and
//! exhaustive/randomized search oracles. File formats, I/O and the
//! command line live in the companion `triplex` crate.
//!
//! The crate is `no_std` (with `alloc`): all state is explicit and all
//! randomized procedures take a seed, so results are reproducible.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod catalog;
pub mod constructions;
pub mod design;
pub mod latin;
pub mod pbd;
pub mod planner;
pub mod rng;
pub mod search;
pub mod spectrum;

pub use design::{Flower, Permutation, StsTriple, TripleSystem};
pub use design::{FlowerCertificate, OneFactorization};
pub use latin::{DiagonalLatinTriple, LatinSquare, LatinTriple};
pub use planner::{plan_and_realize, PlanError, PlanNode, Planner, RealizationPlan};
pub use search::SearchConfig;
