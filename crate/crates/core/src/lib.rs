//! Exact verification of the automorphism orbits and varieties of lines on the
//! general codimension-2 linear sections `G(1,4) ∩ H²` and `G(1,5) ∩ H²`.

pub mod algebra;
pub mod aut;
pub mod error;
pub mod fano;
pub mod lines;
pub mod pencil;
pub mod projective;
pub mod schubert;
pub mod section;
pub mod verify;

pub use error::{Error, Result};

/// The rng used for every seeded computation.
pub fn seeded_rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}
