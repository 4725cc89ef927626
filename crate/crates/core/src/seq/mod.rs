//! The sequence universe: compact and open subgroups of `F_p((t))` under
//! banded, eventually periodic endomorphisms.

pub mod compose;
pub mod endo;
pub mod epc;
pub mod preimage;
pub mod recognize;
pub mod universe;
pub mod vector;

pub use compose::{compose, power};
pub use endo::{BandedEndo, Tail};
pub use epc::{EpcSubgroup, Periodic};
pub use universe::SeqUniverse;
pub use vector::{RowFunctional, SeqVector, Sparse};
