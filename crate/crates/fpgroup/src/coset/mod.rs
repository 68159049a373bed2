//! Coset tables and Todd-Coxeter enumeration.

mod enumerate;
mod table;

pub use enumerate::{
    coset_enumerate, coset_enumerate_with, DefinitionStrategy, EnumerationError,
    EnumerationOptions, DEFAULT_MAX_COSETS,
};
pub use table::{perm_order, CosetTable, Perm, SubgroupSpec, TableError};
