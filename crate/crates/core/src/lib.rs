//! Fundamental groups of complements of solenoids embedded in the 3-sphere as
//! nested closed braids, together with the number-theoretic invariants that
//! classify the solenoids themselves.
//!
//! The pipeline: an [`EmbeddingScheme`] assigns a braid and a framing word to
//! every level; [`truncate`] presents the complement of the `L`-th solid torus;
//! [`tietze_reduce`], [`dyadic_form`] and [`abelianize`] simplify and
//! summarize it; [`search_homs`] and [`verify_hom`] certify non-Abelian
//! quotients.

pub mod braid;
pub mod embedding;
pub mod error;
pub mod homcheck;
pub mod perm;
pub mod presentation;
pub mod qsub;
pub mod sequence;
pub mod smith;
pub mod word;

pub use braid::{reference_braid, BraidWord, ReferenceBraid, Strand, REFERENCE_BRAIDS};
pub use embedding::{merge_to_avoid_2, validate_scheme, Diagnostic, EmbeddingScheme, LevelSpec, Severity};
pub use error::{Error, ParseError, Result};
pub use homcheck::{alternating_witness, search_homs, verify_hom, HomAssignment, SearchResult};
pub use perm::Permutation;
pub use presentation::{
    abelianize, dyadic_form, h1_scaling, piece_presentation, tietze_reduce, tietze_reduce_traced, truncate,
    AbelianInvariants, GroupPresentation,
};
pub use qsub::{limit_member, HeightDescriptor};
pub use sequence::{Count, DefiningSequence, EventuallyPeriodic};
pub use smith::smith_normal_form;
pub use word::{FreeWord, Symbol};
