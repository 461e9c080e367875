//! Orbits, shift tables, predicted polygons and Hasse polynomials.

pub mod hasse;
pub mod orbits;
pub mod polygons;
pub mod tables;

pub use hasse::{hasse_additive_eval, hasse_full_eval, hasse_twisted_eval, PowerCache};
pub use orbits::{Orbit, OrbitDecomposition};
pub use polygons::{additive_slopes, gnp_power, gnp_twisted, gnp_twisted_with_m, hs_power, hs_twisted};
pub use tables::{kappa_sequence, sign, ShiftTable, TwistCombinatorics, DEFAULT_SIGMA_CAP};
