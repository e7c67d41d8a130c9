//! Classification of strongly quadrangular (0,1)-matrices of small degree.
//!
//! * [`matrix`]: the bit-row matrix type and its combinatorial predicates.
//! * [`equivalence`]: canonical forms, automorphism counts and S/T flags.
//! * [`enumeration`]: exhaustive census by degree and filter.
//! * [`forbidden`]: block embeddings that rule out unitary support.
//! * [`witness`]: Fourier and Diţă constructions and a numerical witness search.

pub mod enumeration;
pub mod equivalence;
pub mod error;
pub mod fixtures;
pub mod forbidden;
pub mod matrix;
pub mod witness;

pub use enumeration::{count_table, enumerate_classes, enumerate_regular_classes, CensusFilter, CensusTable, CountTable};
pub use equivalence::{
    aut_group_order, are_equivalent, canonical_form, class_size, is_symmetric_equivalent,
    is_transpose_equivalent, ClassRecord, PermPair,
};
pub use error::{Error, Result};
pub use forbidden::{detect_cond, detect_newcond, verify_embedding, zero_lower_bound, BlockEmbedding, BlockKind};
pub use matrix::{
    has_zero_line, is_indecomposable, is_quadrangular, is_regular, is_row_strongly_quadrangular,
    is_strongly_quadrangular, row_sum_multiset, BinMatrix, RowSumMultiset,
};
pub use witness::{
    dita_compose, dita_row_compose, find_witness, fourier_matrix, is_unitary, search_witness, support, verify_witness,
    ComplexMatrix, WitnessBudget, WitnessResult, WitnessStatus,
};
