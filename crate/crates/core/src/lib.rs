//! Response of an Unruh-DeWitt detector held in a superposition of two static
//! locations, coupled to a (2+1)-dimensional massless scalar field, and its
//! read-out through heterodyne detection of a laser probing a pancake-shaped
//! Bose-Einstein condensate.
//!
//! * [`response`]: Wightman functions, closed-form and numerical response
//!   functions, finite-window transition probabilities.
//! * [`analog`]: condensate and laser parameters, sound speed and coupling.
//! * [`detection`]: added-noise budget, standard quantum limit, squeezing,
//!   power spectral densities, SNR and the superposition witness.
//! * [`sim`]: Gaussian time-domain synthesis and Welch spectral estimation
//!   used to validate the analytic spectra.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analog;
pub mod detection;
pub mod error;
pub mod quadrature;
pub mod response;
pub mod sim;
pub mod special;

pub use error::{Error, Result};
pub use special::bessel_j0;
