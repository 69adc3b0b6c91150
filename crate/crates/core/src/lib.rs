//! Mod-p cohomology of compact Lie groups and obstructions to the
//! surjectivity of the Thom morphism `MU^*(G) -> H^*(G; Z)`.
//!
//! The pieces, bottom up:
//!
//! - [`fpalg`]: graded-commutative `F_p`-algebras with truncation relations.
//! - [`linalg`]: dense `F_p` linear algebra.
//! - [`steenrod`]: Steenrod squares, reduced powers, `β` and `Q_1` via Cartan.
//! - [`bockstein`]: Bockstein cohomology and the integral summand pattern.
//! - [`liegroups`]: the catalog of groups with their presentations and tables.
//! - [`thom`]: obstruction search, surjectivity scans and multiplier bounds.
//! - [`cellular`]: the integral cellular chain complex of `SO(n)`.

pub mod bockstein;
pub mod cellular;
pub mod fpalg;
pub mod liegroups;
pub mod linalg;
pub mod par;
pub mod steenrod;
pub mod thom;
