//! Positivity of divisor classes on Del Pezzo surfaces `S_r`, `1 <= r <= 8`.
//!
//! Everything is exact integer arithmetic on `Pic(S_r) = Z^{r+1}`:
//!
//! * [`lattice`]: classes, the intersection form, canonical class, genus;
//! * [`enumerate`]: exceptional classes, null classes and their splittings;
//! * [`positivity`]: effectivity, nefness, k-very ampleness and the
//!   per-rank inequality families;
//! * [`reider`]: brute-force search for obstruction divisors, used to
//!   cross-check the k-very ampleness criterion;
//! * [`literal`], [`report`], [`tables`], [`cli`]: text formats and the
//!   command-line front end.

pub mod cli;
pub mod enumerate;
pub mod error;
pub mod lattice;
pub mod literal;
pub mod positivity;
pub mod reider;
pub mod report;
pub mod surface;
pub mod tables;

pub use error::{Error, Result};
pub use lattice::{anticanonical_class, canonical_class, PicardClass, Rank, TypePattern};
pub use surface::SurfaceContext;
