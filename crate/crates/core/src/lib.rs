//! Metric measure spaces with prescribed distance distributions.
//!
//! Given a target law `θ` on `[0, ∞)`, build a space `(S, d, μ)` such that
//! `d(X, Y) ~ θ` for independent `X, Y ~ μ`:
//!
//! * discrete `θ` with an atom at 0 (or atoms accumulating at 0) are realized
//!   exactly by nested [`selection`] spaces, with exact rational laws;
//! * densities on `[0, 1]` bounded above and away from 0 are realized by a
//!   [`subadditive`] transform of a power-law base space.
//!
//! [`verify`] checks the results and [`fixtures`] holds classical examples.

pub mod bernoulli;
pub mod distributions;
pub mod document;
pub mod error;
pub mod fixtures;
pub mod rational;
pub mod selection;
pub mod stream;
pub mod subadditive;
pub mod verify;

pub use bernoulli::BernoulliSpace;
pub use distributions::{parse_spec, Atom, DensitySpec, DiscreteSpec, GeometricDyadic, Spec};
pub use document::{canonical_json, parse_document, Document};
pub use error::{Error, Result};
pub use rational::Rational;
pub use selection::{
    build_dyadic_space, build_interval_space, exact_distance_distribution, SelectionConstruction,
    SpacePoint,
};
pub use stream::StreamFactory;
pub use subadditive::{build_transform, sample_theta, PowerLawBase, TransformRecord};
pub use verify::{CheckRecord, VerificationReport};
