//! Computational toolkit for finitely presented groups: a presentation
//! DSL, Todd-Coxeter coset enumeration, low-index subgroup search,
//! Reidemeister-Schreier rewriting, Smith normal form with abelian
//! invariants, and the canonical-degree arithmetic for surfaces covered
//! by these groups.

pub mod abelian;
pub mod coset;
pub mod lowindex;
pub mod numerics;
pub mod presentation;
pub mod rewriting;
pub mod word;

pub use abelian::{abelianization, count_order4_quotients, AbelianInvariants};
pub use coset::{coset_enumerate, CosetTable, SubgroupSpec};
pub use lowindex::{conjugacy_classes, low_index_subgroups, SearchMode};
pub use presentation::{parse_presentation, ParseError, Presentation};
pub use rewriting::{has_finite_abelianization, schreier_presentation, subgroup_abelianization};
pub use word::Word;
