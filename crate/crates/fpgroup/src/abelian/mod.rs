//! Integer matrix Smith normal form and finitely generated abelian groups:
//! abelianizations, invariant factors, and order-four quotient enumeration.

mod invariants;
mod matrix;
mod order4;
mod snf;

pub use invariants::{
    abelianization, relator_matrix, torsion_u64, AbelianInvariants, GroupParseError,
    InvariantError,
};
pub use matrix::IntMatrix;
pub use order4::{
    count_order4_quotients, enumerate_order4_quotients, QuotientDescriptor, QuotientType,
};
pub use snf::{smith_normal_form, SmithDecomposition};
