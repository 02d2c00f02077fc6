//! Topological and monodromy zeta functions computed exactly from the
//! combinatorial data of a log resolution, together with the non-resonance
//! and order-one machinery for generic hyperplane sections.

pub mod algebra;
pub mod asymptotics;
pub mod datasets;
pub mod error;
pub mod exec;
pub mod genericity;
pub mod model;
pub mod monodromy;
pub mod synth;
pub mod topzeta;

pub use error::{Error, Result};
pub use exec::Exec;
