//! Quality measures for finite sampling point sets on bounded convex domains.
//!
//! The crate is `no_std` (it needs `alloc`) and contains every numerical
//! routine of the toolkit:
//!
//! | Module | Purpose |
//! |--------|---------|
//! | [`geometry`] | convex domains, membership, volume, uniform sampling, cone parameters |
//! | [`points`] | point sets and the uniform-bucket nearest-neighbour index |
//! | [`distance`] | `dist(·,P)`, certified `L_γ` norms, covering radius, greedy separated subsets |
//! | [`cover`] | good-cube coverings with disjoint empty balls |
//! | [`mls`] | moving least squares sampling operator and error measurement |
//! | [`fooling`] | bump-function lower bounds on the worst-case error |
//! | [`quadrature`] | optimal kernel quadrature in Sobolev spaces of order `s` |
//!
//! Parallel drivers, file formats and the command line live in the
//! `scatterqual` crate; everything here is single threaded and pure.
#![no_std]
#![forbid(unsafe_code)]
// `num_traits::Float` supplies float methods without std; when std is linked
// (dev builds) the inherent methods take over and the import looks unused.
#![allow(unused_imports)]
// NaN-rejecting guards are written as `!(x > 0.0)`.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

pub mod cover;
pub mod distance;
mod error;
pub mod fooling;
pub mod functions;
pub mod geometry;
pub mod linalg;
pub mod mesh;
pub mod mls;
pub mod points;
pub mod poly;
pub mod quadrature;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
pub use geometry::{ConeParameters, ConvexDomain};
pub use points::{GridIndex, PointSet};
