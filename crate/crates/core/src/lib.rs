//! Verifiable computation over quadratic arithmetic programs.
//!
//! The crate walks from plain polynomial identity checks up to a
//! pairing-based, zero-knowledge, non-interactive argument for arithmetic
//! circuits:
//!
//! * [`algebra`]: prime-field scalars and polynomials.
//! * [`group`]: an opaque bilinear group. The only backend simulates the
//!   group in the exponent and is **not hiding**; it exists to make every
//!   algebraic identity exactly testable.
//! * [`kop`]: proofs of knowledge of a polynomial with a known factor.
//! * [`ceremony`]: multi-party generation of encrypted powers.
//! * [`circuit`]: a small arithmetic language compiled to R1CS.
//! * [`qap`]: the R1CS to QAP reduction.
//! * [`pinocchio`]: key generation, proving and verification, plus the
//!   weakened protocol variants and the attacks that break them.

pub mod algebra;
pub mod ceremony;
pub mod circuit;
pub mod codec;
pub mod group;
pub mod kop;
pub mod pinocchio;
pub mod qap;

mod toxic;

pub use toxic::Toxic;
