//! Knowledge of a polynomial with a prescribed factor `t(x)`.
//!
//! The module follows the protocol from its plaintext form (the verifier
//! reveals the evaluation point) to the non-interactive version built on
//! encrypted powers, the `alpha` restriction and `delta` randomization. The
//! forgery that works when the restriction check is missing is implemented
//! as well, so tests can show exactly which check stops it.

use rand::Rng;
use thiserror::Error;

use crate::algebra::{AlgebraError, FieldElement, Polynomial};
use crate::group::{Backend, GroupElement, GroupError};
#[cfg(feature = "test-hooks")]
use crate::Toxic;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KopError {
    #[error("reference string degree {crs} is below the target degree {target}")]
    DegreeTooSmall { crs: usize, target: usize },
    #[error("polynomial degree {poly} exceeds the reference string degree {crs}")]
    DegreeTooLarge { poly: usize, crs: usize },
    #[error("polynomial is not divisible by the target (remainder {0})")]
    NotDivisible(Polynomial),
    #[error("target polynomial must be non-constant")]
    ConstantTarget,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Values exchanged by one round of the plaintext protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlainRound {
    pub t: FieldElement,
    pub p: FieldElement,
    pub h: FieldElement,
}

/// Plaintext round at the verifier-chosen point `r`. `None` when the prover
/// has no exact cofactor and therefore cannot answer honestly.
pub fn interactive_round(p: &Polynomial, t: &Polynomial, r: FieldElement) -> Option<PlainRound> {
    let (h, rem) = p.divrem(t).ok()?;
    if !rem.is_zero() {
        return None;
    }
    Some(PlainRound {
        t: t.eval(r),
        p: p.eval(r),
        h: h.eval(r),
    })
}

/// Verifier's acceptance in the plaintext protocol: `p = t * h` at `r`.
pub fn interactive_check(p: &Polynomial, t: &Polynomial, r: FieldElement) -> bool {
    interactive_round(p, t, r).is_some_and(|round| round.p == round.t * round.h)
}

/// Reference string for proving knowledge of a polynomial of degree `<= d`
/// divisible by `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyCrs {
    /// `g^(s^i)` for `i` in `0..=d`
    pub powers: Vec<GroupElement>,
    /// `g^(alpha * s^i)` for `i` in `0..=d`
    pub alpha_powers: Vec<GroupElement>,
    pub g_alpha: GroupElement,
    pub g_t: GroupElement,
}

impl PolyCrs {
    pub fn degree(&self) -> usize {
        self.powers.len() - 1
    }

    pub fn backend(&self) -> Backend {
        self.powers[0].backend()
    }

    pub fn generator(&self) -> GroupElement {
        self.backend().generator()
    }

    /// Builds the string from already-encrypted powers (for instance the
    /// output of a ceremony), computing `g^t(s)` homomorphically.
    pub fn from_powers(
        t: &Polynomial,
        powers: Vec<GroupElement>,
        alpha_powers: Vec<GroupElement>,
        g_alpha: GroupElement,
    ) -> Result<Self, KopError> {
        let backend = powers
            .first()
            .ok_or(GroupError::InsufficientPowers {
                needed: 1,
                available: 0,
            })?
            .backend();
        let target = t.degree().ok_or(KopError::ConstantTarget)?;
        if target == 0 {
            return Err(KopError::ConstantTarget);
        }
        if powers.len() <= target {
            return Err(KopError::DegreeTooSmall {
                crs: powers.len() - 1,
                target,
            });
        }
        let g_t = backend.eval_encrypted_poly(t.coeffs(), &powers)?;
        Ok(PolyCrs {
            powers,
            alpha_powers,
            g_alpha,
            g_t,
        })
    }
}

/// Secrets behind a [`PolyCrs`].
#[derive(Debug, Clone, Copy)]
pub struct PolyTrapdoor {
    pub s: FieldElement,
    pub alpha: FieldElement,
}

fn crs_from_secrets(
    backend: Backend,
    t: &Polynomial,
    d: usize,
    s: FieldElement,
    alpha: FieldElement,
) -> Result<PolyCrs, KopError> {
    let mut powers = Vec::with_capacity(d + 1);
    let mut alpha_powers = Vec::with_capacity(d + 1);
    let mut si = backend.scalar_field().one();
    for _ in 0..=d {
        powers.push(backend.encrypt(si));
        alpha_powers.push(backend.encrypt(alpha * si));
        si *= s;
    }
    PolyCrs::from_powers(t, powers, alpha_powers, backend.encrypt(alpha))
}

/// Samples `s` and `alpha`, publishes their encryptions and forgets them.
pub fn poly_setup<R: Rng + ?Sized>(
    backend: Backend,
    t: &Polynomial,
    d: usize,
    rng: &mut R,
) -> Result<PolyCrs, KopError> {
    let f = backend.scalar_field();
    crs_from_secrets(backend, t, d, f.random_nonzero(rng), f.random_nonzero(rng))
}

#[cfg(feature = "test-hooks")]
pub fn poly_setup_with_trapdoor<R: Rng + ?Sized>(
    backend: Backend,
    t: &Polynomial,
    d: usize,
    rng: &mut R,
) -> Result<(PolyCrs, Toxic<PolyTrapdoor>), KopError> {
    let f = backend.scalar_field();
    let trapdoor = PolyTrapdoor {
        s: f.random_nonzero(rng),
        alpha: f.random_nonzero(rng),
    };
    let crs = crs_from_secrets(backend, t, d, trapdoor.s, trapdoor.alpha)?;
    Ok((crs, Toxic::new(trapdoor)))
}

#[cfg(feature = "test-hooks")]
pub fn poly_crs_from_trapdoor(
    backend: Backend,
    t: &Polynomial,
    d: usize,
    trapdoor: &PolyTrapdoor,
) -> Result<PolyCrs, KopError> {
    crs_from_secrets(backend, t, d, trapdoor.s, trapdoor.alpha)
}

/// `(g^(delta p(s)), g^(delta h(s)), g^(delta alpha p(s)))`
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolyProof {
    pub g_p: GroupElement,
    pub g_h: GroupElement,
    pub g_p_shift: GroupElement,
}

impl PolyProof {
    /// Raises all three elements to a common exponent; verification still holds.
    pub fn rerandomize(&self, kappa: FieldElement) -> PolyProof {
        PolyProof {
            g_p: self.g_p.scale(kappa),
            g_h: self.g_h.scale(kappa),
            g_p_shift: self.g_p_shift.scale(kappa),
        }
    }
}

pub fn poly_prove<R: Rng + ?Sized>(
    crs: &PolyCrs,
    p: &Polynomial,
    t: &Polynomial,
    rng: &mut R,
) -> Result<PolyProof, KopError> {
    let delta = crs.backend().scalar_field().random_nonzero(rng);
    poly_prove_with_delta(crs, p, t, delta)
}

pub fn poly_prove_with_delta(
    crs: &PolyCrs,
    p: &Polynomial,
    t: &Polynomial,
    delta: FieldElement,
) -> Result<PolyProof, KopError> {
    if let Some(deg) = p.degree() {
        if deg > crs.degree() {
            return Err(KopError::DegreeTooLarge {
                poly: deg,
                crs: crs.degree(),
            });
        }
    }
    let (h, rem) = p.divrem(t)?;
    if !rem.is_zero() {
        return Err(KopError::NotDivisible(rem));
    }
    let backend = crs.backend();
    let g_p = backend.eval_encrypted_poly(p.coeffs(), &crs.powers)?;
    let g_h = backend.eval_encrypted_poly(h.coeffs(), &crs.powers)?;
    let g_p_shift = backend.eval_encrypted_poly(p.coeffs(), &crs.alpha_powers)?;
    Ok(PolyProof {
        g_p: g_p.scale(delta),
        g_h: g_h.scale(delta),
        g_p_shift: g_p_shift.scale(delta),
    })
}

/// `e(g^p', g) = e(g^p, g^alpha)`
pub fn restriction_holds(crs: &PolyCrs, proof: &PolyProof) -> bool {
    let b = crs.backend();
    b.try_pairing(&proof.g_p_shift, &crs.generator()).ok()
        == b.try_pairing(&proof.g_p, &crs.g_alpha).ok()
}

/// `e(g^p, g) = e(g^t(s), g^h)`
pub fn cofactor_holds(crs: &PolyCrs, g_p: &GroupElement, g_h: &GroupElement) -> bool {
    let b = crs.backend();
    match (
        b.try_pairing(g_p, &crs.generator()),
        b.try_pairing(&crs.g_t, g_h),
    ) {
        (Ok(lhs), Ok(rhs)) => lhs == rhs,
        _ => false,
    }
}

pub fn poly_verify(crs: &PolyCrs, proof: &PolyProof) -> bool {
    restriction_holds(crs, proof) && cofactor_holds(crs, &proof.g_p, &proof.g_h)
}

/// A pair that satisfies the cofactor check without any polynomial behind it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Forgery {
    pub z_p: GroupElement,
    pub z_h: GroupElement,
}

/// Picks a random `rho` and answers `z_h = g^rho`, `z_p = (g^t(s))^rho`,
/// using only the plain encrypted powers.
pub fn forge_without_alpha<R: Rng + ?Sized>(
    powers: &[GroupElement],
    t: &Polynomial,
    rng: &mut R,
) -> Result<Forgery, KopError> {
    let rho = t.field().random_nonzero(rng);
    forge_without_alpha_with(powers, t, rho)
}

pub fn forge_without_alpha_with(
    powers: &[GroupElement],
    t: &Polynomial,
    rho: FieldElement,
) -> Result<Forgery, KopError> {
    let backend = powers
        .first()
        .ok_or(GroupError::InsufficientPowers {
            needed: 1,
            available: 0,
        })?
        .backend();
    let g_t = backend.eval_encrypted_poly(t.coeffs(), powers)?;
    Ok(Forgery {
        z_p: g_t.scale(rho),
        z_h: backend.generator().scale(rho),
    })
}
