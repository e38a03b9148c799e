pub mod brackets;
pub mod chevalley;
pub mod error;
pub mod invariants;
pub mod levi;
pub mod linalg;
pub mod multivec;
pub mod roots;
pub mod scalar;
pub mod weyl;

pub use error::{Error, Result};
pub use scalar::Scalar;
