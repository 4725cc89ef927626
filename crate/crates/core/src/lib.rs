//! Scale functions, tidy subgroups and the tidying procedure for
//! endomorphisms, computed exactly over two universes: finite groups given by
//! Cayley tables, and the Laurent sequence space `F_p((t))` with banded
//! eventually periodic linear endomorphisms.

pub mod certificate;
pub mod cli;
pub mod engine;
pub mod error;
pub mod finite;
pub mod fixtures;
pub mod gf;
pub mod index;
pub mod properties;
pub mod schema;
pub mod seq;

pub use certificate::{CertKind, Certificate};
pub use error::{Error, Result};
pub use index::{Index, IndexResult};
