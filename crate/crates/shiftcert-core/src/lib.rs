//! Exact-arithmetic kernels for certifying hyponormality properties of
//! unilateral weighted shifts.
//!
//! Everything in this crate is exact: scalars are arbitrary-precision
//! rationals, matrices are decided positive semidefinite (or refuted with a
//! rational witness) by congruence elimination, and parametric thresholds
//! are extracted with Sturm sequences.  The only floating values live in
//! [`oracle`], which cross-checks the exact machinery with fixed-point
//! big-float evaluation of the underlying quadratic forms.
//!
//! The crate is `no_std` (with `alloc`); IO, file formats and the CLI live
//! in the companion `shiftcert` crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod cert;
pub mod khypo;
pub mod matrix;
pub mod oracle;
pub mod poly;
pub mod quartic;
pub mod rat;
pub mod rng;
pub mod roots;
pub mod shifts;
pub mod upoly;
