//! Modified Glimm random-choice scheme for two-dimensional steady potential flow past a
//! slender wedge, written in the scaled variables of the hypersonic similarity law.
//!
//! The core is generic over the scalar type ([`Real`], implemented for `f32` and `f64`);
//! the `*F64` aliases below name the double-precision instantiations used by the
//! harnesses and the command-line front end.

pub mod diagnostics;
pub mod error;
pub mod glimm;
pub mod io;
pub(crate) mod numerics;
pub mod params;
pub mod probe;
pub mod real;
pub mod riemann;
pub mod similarity;
pub mod state;
pub mod waves;

pub use error::{Error, Result};
pub use params::{GasParams, PhysicalSetup};
pub use real::Real;
pub use state::{FlowState, InvariantPair};

pub type GasParamsF64 = GasParams<f64>;
pub type FlowStateF64 = FlowState<f64>;
pub type InvariantPairF64 = InvariantPair<f64>;
