//! Decide whether homogeneous spaces `G/H` of split simple real Lie groups
//! admit proper actions of subgroups locally isomorphic to `SL(2,R)`.
//!
//! The crate is organised bottom-up:
//!
//! - [`rootsys`]: root systems of types A–G up to rank 8, Weyl-group
//!   reflections, orbit enumeration and the longest element.
//! - [`chevalley`]: Chevalley bases with integral structure constants and the
//!   grading of the algebra by a Cartan element.
//! - [`nilporb`]: weighted Dynkin diagrams of nilpotent orbits, found by a
//!   density scan and cross-checked against partition oracles.
//! - [`realform`]: Satake diagrams, real ranks and a-hyperbolic ranks.
//! - [`embed`]: Cartan embeddings `a_h -> a` and the pair-database format.
//! - [`proper`]: rank triage (classes L0–L3) and the Weyl-orbit test of
//!   Kobayashi's properness criterion.
//!
//! All arithmetic is exact. Cartan vectors are written in fundamental-coweight
//! coordinates, so coordinate `i` of `x` is `alpha_i(x)` and a weighted Dynkin
//! diagram *is* its Cartan vector.

pub mod arith;
pub mod chevalley;
pub mod embed;
pub mod error;
pub mod nilporb;
pub mod proper;
pub mod realform;
pub mod rootsys;

pub use error::{Error, Result};
