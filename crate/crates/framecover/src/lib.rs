//! Binary codes whose coalitions cannot frame each other, and the
//! combinatorial objects they are equivalent to.
//!
//! A code is a set of binary words. A coalition of traitors holding
//! some of the words can forge any word that agrees with one of theirs
//! in every position where they all agree; the set of such forgeries is
//! the coalition's feasible set. A code is r-separating when no two
//! disjoint coalitions of size at most r can both have produced the
//! same forgery, so a recovered word always pins the guilty side.
//!
//! The library is built around three interchangeable views of that
//! property and the maps between them:
//!
//! - [`codes`]: the words themselves, with direct verification of the
//!   separating property by feasible-set reasoning.
//! - [`covers`]: coverings of the disjointness graph on r-subsets by
//!   complete bipartite subgraphs; an r-separating code of length v is
//!   exactly a 1-cover of size v.
//! - [`cff`]: families of columns where every r-block stays uncovered
//!   by every disjoint w-block at least d times; these bound cover
//!   sizes from both sides.
//!
//! [`transforms`] holds the constructive equivalences, [`constructors`]
//! builds covers (randomized, greedy, exact, and star-based),
//! [`hadamard`] derives optimal covers of complete and matching-deleted
//! bipartite targets from Hadamard matrices, and [`io`] reads and
//! writes every object in plain text or JSON.
//!
//! Ground-set elements, code users, and family rows are 1-based
//! everywhere; vertex ids inside materialized graphs are 0-based.

pub mod cff;
pub mod codes;
pub mod combinatorics;
pub mod constructors;
pub mod covers;
pub mod error;
pub mod hadamard;
pub mod io;
pub mod transforms;

pub use cff::{exact_min_n, verify_cff, CffReport, CoverFreeFamily, MinNResult};
pub use codes::{BinaryCode, FpcVerdict, SfpcMode, SfpcVerdict};
pub use combinatorics::{
    binomial, covering_number, enumerate_ksubsets, GraphFamily, LabeledGraph, SearchBudget, Side,
    SubsetMask, Vertex,
};
pub use constructors::{
    c4_free_bc1, exact_bc, greedy_cover, halving_pool, maximal_bicliques, random_cover, sfpc_bound,
    star_cover, ExactCoverResult, RandomCoverConfig, RandomCoverOutcome, SfpcBound,
};
pub use covers::{
    bc_lower_bound, ensure_cover, verify_cover, Biclique, BicliqueCover, CoverBiclique,
    CoverReport, GroundPairBiclique,
};
pub use error::{Error, Result};
pub use hadamard::{k8d_cover, k8d_lower_bound, kmm_lower_bound, kmm_minus_cover, HadamardMatrix};
pub use transforms::{
    cff_to_cover, cff_to_intersection_cover, cff_to_kmm_cover, code_to_cover, cover_to_cff,
    cover_to_cff_one_sided, cover_to_code, kneser_phi, preimage_evidence, preimage_subgraph,
    project_cover, push_cover, CheckMode, OneSidedCff, PreimageEvidence, Projection,
    ProjectionOutcome, PushOutcome,
};
