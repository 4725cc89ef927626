//! The finite universe: groups given by Cayley tables, with exhaustive
//! oracles for subgroups and endomorphisms.

pub mod catalog;
pub mod dynamics;
pub mod enumerate;
pub mod group;
pub mod ops;
pub mod universe;

pub use catalog::{alternating4, catalog, catalog_group, dicyclic, dihedral, CatalogEntry, CATALOG_NAMES};
pub use dynamics::{dynamics_subgroups, iterate_tidy_family, Dynamics};
pub use enumerate::{enumerate_endos, EndoEnumeration, ENDO_CAP};
pub use group::FiniteGroup;
pub use ops::{all_subgroups, closure, endo_from_map, is_normal, quotient, FiniteEndo, FiniteSubgroup};
pub use universe::FiniteUniverse;
