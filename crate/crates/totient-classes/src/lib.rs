//! Decide, for a residue class `a (mod M)`, whether it contains infinitely
//! many values of Euler's function, exactly one, or none.
//!
//! The decision rests on the solvability of the congruence
//! `x^k - x^(k-1) ≡ a (mod m)` over units `x` of the odd part `m` of `M`,
//! together with the classical fact that a class containing a multiple of 4
//! contains infinitely many totients and that 1 is the only odd totient.
//!
//! Layout:
//! - [`modmath`]: exact integer/modular kernel (factoring, CRT, Hensel lifting)
//! - [`valueset`]: attainable-value tables `V_{q,j} = { x^j (x-1) mod q }`
//! - [`classifier`]: the three-way decision procedure with witnesses
//! - [`oracle`]: totient sieve ground truth and cross-validation
//! - [`constructions`]: moduli with mostly totient-free classes
//! - [`goodness`]: good/forbidden odd moduli and the per-prime solver

pub mod classifier;
pub mod constructions;
pub mod error;
pub mod goodness;
pub mod modmath;
pub mod oracle;
pub mod valueset;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
