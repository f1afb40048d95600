pub mod bits;
pub mod bounds;
pub mod constructions;
pub mod decomp;
pub mod error;
pub mod gf;
pub mod parity;
pub mod plane;
pub mod rng;
pub mod search;
pub mod suites;
pub mod witness;

pub use bits::{BitSet, LineSet, PointSet};
pub use error::{Error, Result};
pub use gf::{FieldSpec, FieldTables};
pub use plane::Plane;
pub use witness::{Evaluation, Witness};
