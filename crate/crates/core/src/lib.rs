//! Hermitian self-orthogonal generalized Reed-Solomon codes over F_{q^2}
//! built from unions of multiplicative cosets, and the quantum MDS codes
//! they give through the Hermitian construction.
//!
//! Layers, bottom up: [`gf`] (log/Zech field arithmetic), [`mat`] (linear
//! algebra over the field), [`grs`] (codes and their checks),
//! [`families`] (the four coset constructions and the catalog),
//! [`oracle`] (independent reference computations) and [`artifact`]
//! (JSON and CSV output).

pub mod artifact;
pub mod families;
pub mod gf;
pub mod grs;
pub mod mat;
pub mod oracle;

pub use families::{construct, validate, Construction, ConstructionParams, Family, ParamsRequest};
pub use gf::{FieldContext, FieldElement};
pub use grs::{GrsCode, QuantumParams};
