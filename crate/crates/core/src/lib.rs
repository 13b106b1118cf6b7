//! Exact finite constructions for MV-algebras and their product and scalar expansions.
//!
//! Algebras are finite carriers of `[0,1] ∩ ℚ`-valued functions on a labeled point
//! set ([`FiniteAlgebra`]). On top of them sit the semisimple tensor product
//! ([`tensor()`]), the truncated tensor PMV tower ([`Tower`]), amalgamation, the
//! unit-interval bridge to lattice-ordered groups ([`bridge`]) and term functions on
//! rational grids ([`terms`]).
//!
//! ```
//! use std::sync::Arc;
//! use mvtensor::{chain, iso_check, tensor};
//!
//! let t = tensor(&Arc::new(chain(2)), &Arc::new(chain(3)), 1000).unwrap();
//! assert!(iso_check(&t.algebra, &Arc::new(chain(6))).is_some());
//! ```

pub mod bridge;
pub mod error;
pub mod json;
pub mod mv;
pub mod tensor;
pub mod terms;
pub mod tower;

pub use error::{Error, Result};
pub use mv::algebra::{
    boolean, chain, generate_subalgebra, interval_algebra, scalar_extension, FiniteAlgebra, Signature,
};
pub use mv::amalgam::{amalgamate_mv, amalgamate_pmv, Amalgam};
pub use mv::axioms::{check_axioms, AxiomReport, AxiomResult};
pub use mv::morphism::{check_bimorphism, check_linear, extend_from_generators, extend_hom, Bimorphism, Hom};
pub use mv::points::{PointFunction, PointSet};
pub use mv::rational::Rational01;
pub use mv::spectrum::{has_infinitesimal, iso_check, spectral_decomposition, Spectrum};
pub use tensor::{associativity_witness, commutativity_witness, extend_bimorphism, scalar_tower, tensor, TensorResult};
pub use tower::{build_tower, Tower, TowerElement};

/// Default closure cap used by the command line front end.
pub const DEFAULT_CAP: usize = 20_000;
