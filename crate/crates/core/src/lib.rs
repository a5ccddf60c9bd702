//! Executable finite content of S-adic symbolic dynamics: substitutions and
//! directive sequences, exact factor languages, recognizability tests, codes,
//! finite semigroups with Green's relations, frequency matrices, Rees matrix
//! models of free completely simple semigroups over elementary abelian
//! p-groups, and a certificate engine that turns checked premises into
//! verdicts about recognizability and saturation.

pub mod certify;
pub mod codes;
pub mod directive;
pub mod error;
pub mod matrices;
pub mod recognizability;
pub mod semigroup;
pub mod substitution;
pub mod words;

pub use error::{Error, Result};
pub use substitution::{Substitution, SubstitutionProperties};
pub use words::{Alphabet, Letter, Word};
