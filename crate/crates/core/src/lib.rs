//! Grid-scale numerics for supremal functionals
//! `F(u) = ess sup_x f(x, Du(x))` on 1-D and 2-D domains.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is pure
//! computation; file formats, configuration and the command line live in the
//! companion `supremal` crate.
//!
//! Module map:
//!
//! - [`domain`]: discretized domains, geodesic distance, the domain constant.
//! - [`supremand`]: supremands `f(x, ξ)`, sublevel sections, support functions.
//! - [`envelope`]: level-convex envelopes of sampled profiles.
//! - [`field`]: grid functions, discrete gradients, `F(u)`, Lipschitz seminorms.
//! - [`distance`]: the pseudo-distances `d^λ_F`.
//! - [`relax`]: difference quotients, relaxed envelopes and lattice checks.
//! - [`represent`]: the level-convex representation supremand.
#![no_std]
// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod catalog;
pub mod distance;
pub mod domain;
pub mod envelope;
pub mod expr;
pub mod field;
pub mod graph;
pub mod hull;
pub mod num;
pub mod region;
pub mod relax;
pub mod represent;
pub mod supremand;

pub use distance::{DistanceError, LevelGraph, Method, PseudoDistanceField};
pub use domain::{DomainError, DomainSpec, GridDomain, Obstacle, Stencil};
pub use expr::{Expr, ParseError};
pub use field::{FieldError, GridFunction};
pub use region::Region;
pub use relax::{EnvelopeResult, RelaxError, RelaxSettings, Witness};
pub use supremand::{GradientWindow, Piece, Support, Supremand, SupremandError};
