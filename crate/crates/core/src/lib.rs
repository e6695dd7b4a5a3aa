//! p-curvature, formal horizontal sections, modular constants and
//! algebraicity certificates for connections on punctured curves.
//!
//! The crate is organized bottom-up:
//!
//! - [`exactmath`]: fields, places, polynomials, rational functions, series;
//! - [`connection`]: connections on the three supported curves, p-curvature,
//!   horizontal sections and p-adic radius estimates;
//! - [`gaussmanin`]: the Gauss–Manin connection of the Legendre family;
//! - [`modular`]: theta constants, eta, λ and CM constants at high precision;
//! - [`hyperbolic`]: the disc model, the Γ(2) domain and the capacity bound;
//! - [`certificate`]: prime sums, André and Arakelov verdicts, heights;
//! - [`registry`]: the named example connections.

pub mod certificate;
pub mod connection;
pub mod error;
pub mod exactmath;
pub mod gaussmanin;
pub mod hyperbolic;
pub mod modular;
pub mod registry;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/exactmath.md")]
    mod exactmath {}
    #[doc = include_str!("../../../book/src/connections.md")]
    mod connections {}
    #[doc = include_str!("../../../book/src/horizontal.md")]
    mod horizontal {}
    #[doc = include_str!("../../../book/src/gaussmanin.md")]
    mod gaussmanin {}
    #[doc = include_str!("../../../book/src/modular.md")]
    mod modular {}
    #[doc = include_str!("../../../book/src/hyperbolic.md")]
    mod hyperbolic {}
    #[doc = include_str!("../../../book/src/certificates.md")]
    mod certificates {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
