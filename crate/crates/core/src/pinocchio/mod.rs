//! Pairing-based zero-knowledge proofs of correct computation over a QAP.
//!
//! [`Variant::Final`] is the protocol meant for use: generators
//! `g_l = g^rho_l`, `g_r = g^rho_r`, `g_o = g^(rho_l rho_r)`, per-operand
//! `alpha` shifts, a single `beta` masked by `gamma`, and `delta` shifts for
//! zero knowledge. The other variants reproduce weaker historical
//! constructions (plain generator, fewer secrets) and exist so the attacks
//! in [`attacks`] have something to succeed against.
//!
//! Variables `1..=m` are public and supplied by the verifier together with
//! the constant one at index 0; the prover only commits to `m+1..=n`.

pub mod attacks;
mod codec;

use rand::Rng;
use thiserror::Error;

use crate::algebra::{FieldElement, Polynomial};
use crate::circuit::Witness;
use crate::group::{Backend, GroupElement, GroupError};
use crate::qap::{cofactor, Qap, QapError};
#[cfg(feature = "test-hooks")]
use crate::Toxic;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PinocchioError {
    #[error("QAP has constant-only variable polynomials for prover variables {0:?}")]
    DegenerateQap(Vec<usize>),
    #[error("public variable count {m} must be below the variable count {n}")]
    PublicCountOutOfRange { m: usize, n: usize },
    #[error("expected {expected} public inputs, got {found}")]
    PublicInputLengthMismatch { expected: usize, found: usize },
    #[error("key does not match the QAP: {0}")]
    ShapeMismatch(String),
    #[error(transparent)]
    Qap(#[from] QapError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Plain generator, one `alpha` for all operands, no consistency check.
    NaiveAlpha,
    /// Plain generator, per-operand `alpha`, no consistency check.
    OperandAlpha,
    /// Per-operand `alpha`, one unmasked `beta` for all operands.
    SharedBeta,
    /// Per-operand `alpha` and `beta`, with `g^beta_*` published.
    UnmaskedBeta,
    Final,
}

impl Variant {
    pub const ALL: [Variant; 5] = [
        Variant::NaiveAlpha,
        Variant::OperandAlpha,
        Variant::SharedBeta,
        Variant::UnmaskedBeta,
        Variant::Final,
    ];
}

/// Setup secrets. Unused ones are one (or zero for absent `beta`s).
#[derive(Debug, Clone, Copy)]
pub struct Trapdoor {
    /// `None` when the powers came from a ceremony.
    pub s: Option<FieldElement>,
    pub rho_l: FieldElement,
    pub rho_r: FieldElement,
    pub alpha_l: FieldElement,
    pub alpha_r: FieldElement,
    pub alpha_o: FieldElement,
    pub beta_l: FieldElement,
    pub beta_r: FieldElement,
    pub beta_o: FieldElement,
    pub gamma: FieldElement,
}

impl Trapdoor {
    pub fn rho_o(&self) -> FieldElement {
        self.rho_l * self.rho_r
    }

    fn sample<R: Rng + ?Sized>(variant: Variant, backend: Backend, rng: &mut R) -> Trapdoor {
        let f = backend.scalar_field();
        let mut nz = || f.random_nonzero(rng);
        let s = nz();
        let (rho_l, rho_r) = match variant {
            Variant::Final => (nz(), nz()),
            _ => (f.one(), f.one()),
        };
        let (alpha_l, alpha_r, alpha_o) = match variant {
            Variant::NaiveAlpha => {
                let a = nz();
                (a, a, a)
            }
            _ => (nz(), nz(), nz()),
        };
        let (beta_l, beta_r, beta_o) = match variant {
            Variant::NaiveAlpha | Variant::OperandAlpha => (f.zero(), f.zero(), f.zero()),
            Variant::SharedBeta | Variant::Final => {
                let b = nz();
                (b, b, b)
            }
            Variant::UnmaskedBeta => (nz(), nz(), nz()),
        };
        let gamma = match variant {
            Variant::Final => nz(),
            _ => f.one(),
        };
        Trapdoor {
            s: Some(s),
            rho_l,
            rho_r,
            alpha_l,
            alpha_r,
            alpha_o,
            beta_l,
            beta_r,
            beta_o,
            gamma,
        }
    }
}

/// Encrypted `t(s)` multiples the prover uses for its `delta` shifts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZkTerms {
    pub l_t: GroupElement,
    pub r_t: GroupElement,
    pub o_t: GroupElement,
    pub l_alpha_t: GroupElement,
    pub r_alpha_t: GroupElement,
    pub o_alpha_t: GroupElement,
    pub l_beta_t: GroupElement,
    pub r_beta_t: GroupElement,
    pub o_beta_t: GroupElement,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProvingKey {
    pub variant: Variant,
    pub m: usize,
    /// `g^(s^k)` for `k` in `0..=d`
    pub powers: Vec<GroupElement>,
    /// `g_l^(l_i(s))` for every variable, likewise `r` and `o`.
    pub l: Vec<GroupElement>,
    pub r: Vec<GroupElement>,
    pub o: Vec<GroupElement>,
    /// Shifted terms for prover variables `m+1..=n` only.
    pub l_alpha: Vec<GroupElement>,
    pub r_alpha: Vec<GroupElement>,
    pub o_alpha: Vec<GroupElement>,
    /// `g_l^(beta l_i(s)) g_r^(beta r_i(s)) g_o^(beta o_i(s))`, prover variables only.
    pub z: Vec<GroupElement>,
    pub zk: ZkTerms,
}

impl ProvingKey {
    pub fn backend(&self) -> Backend {
        self.powers[0].backend()
    }

    pub fn d(&self) -> usize {
        self.powers.len() - 1
    }

    pub fn n(&self) -> usize {
        self.l.len() - 1
    }
}

/// Material for the variable-consistency check, by variant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConsistencyKey {
    None,
    Shared {
        g_beta: GroupElement,
    },
    PerOperand {
        g_beta_l: GroupElement,
        g_beta_r: GroupElement,
        g_beta_o: GroupElement,
    },
    Masked {
        g_gamma: GroupElement,
        g_beta_gamma: GroupElement,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationKey {
    pub variant: Variant,
    pub g: GroupElement,
    /// `g_o^(t(s))`
    pub g_o_t: GroupElement,
    /// Public slots `0..=m`.
    pub l: Vec<GroupElement>,
    pub r: Vec<GroupElement>,
    pub o: Vec<GroupElement>,
    pub g_alpha_l: GroupElement,
    pub g_alpha_r: GroupElement,
    pub g_alpha_o: GroupElement,
    pub consistency: ConsistencyKey,
}

impl VerificationKey {
    pub fn backend(&self) -> Backend {
        self.g.backend()
    }

    pub fn m(&self) -> usize {
        self.l.len() - 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Proof {
    pub l: GroupElement,
    pub r: GroupElement,
    pub o: GroupElement,
    pub h: GroupElement,
    pub l_alpha: GroupElement,
    pub r_alpha: GroupElement,
    pub o_alpha: GroupElement,
    pub z: GroupElement,
}

impl Proof {
    pub fn elements(&self) -> [GroupElement; 8] {
        [
            self.l,
            self.r,
            self.o,
            self.h,
            self.l_alpha,
            self.r_alpha,
            self.o_alpha,
            self.z,
        ]
    }

    pub fn from_elements(e: [GroupElement; 8]) -> Proof {
        Proof {
            l: e[0],
            r: e[1],
            o: e[2],
            h: e[3],
            l_alpha: e[4],
            r_alpha: e[5],
            o_alpha: e[6],
            z: e[7],
        }
    }
}

fn keys_from_powers(
    variant: Variant,
    qap: &Qap,
    m: usize,
    powers: &[GroupElement],
    td: &Trapdoor,
) -> Result<(ProvingKey, VerificationKey), PinocchioError> {
    if m >= qap.n {
        return Err(PinocchioError::PublicCountOutOfRange { m, n: qap.n });
    }
    if variant == Variant::Final {
        let owned: Vec<usize> = qap.hazards.iter().copied().filter(|&i| i > m).collect();
        if !owned.is_empty() {
            return Err(PinocchioError::DegenerateQap(owned));
        }
    }
    if powers.len() <= qap.d {
        return Err(GroupError::InsufficientPowers {
            needed: qap.d + 1,
            available: powers.len(),
        }
        .into());
    }
    let powers = powers[..=qap.d].to_vec();
    let backend = powers[0].backend();
    let enc = |p: &Polynomial| backend.eval_encrypted_poly(p.coeffs(), &powers);
    let rho_o = td.rho_o();

    let mut l = Vec::with_capacity(qap.n + 1);
    let mut r = Vec::with_capacity(qap.n + 1);
    let mut o = Vec::with_capacity(qap.n + 1);
    for i in 0..=qap.n {
        l.push(enc(&qap.l[i])?.scale(td.rho_l));
        r.push(enc(&qap.r[i])?.scale(td.rho_r));
        o.push(enc(&qap.o[i])?.scale(rho_o));
    }
    let owned = m + 1..=qap.n;
    let l_alpha = l[owned.clone()]
        .iter()
        .map(|x| x.scale(td.alpha_l))
        .collect();
    let r_alpha = r[owned.clone()]
        .iter()
        .map(|x| x.scale(td.alpha_r))
        .collect();
    let o_alpha = o[owned.clone()]
        .iter()
        .map(|x| x.scale(td.alpha_o))
        .collect();
    let z = owned
        .map(|i| l[i].scale(td.beta_l) * r[i].scale(td.beta_r) * o[i].scale(td.beta_o))
        .collect();

    let g_t = enc(&qap.t)?;
    let (l_t, r_t, o_t) = (g_t.scale(td.rho_l), g_t.scale(td.rho_r), g_t.scale(rho_o));
    let zk = ZkTerms {
        l_t,
        r_t,
        o_t,
        l_alpha_t: l_t.scale(td.alpha_l),
        r_alpha_t: r_t.scale(td.alpha_r),
        o_alpha_t: o_t.scale(td.alpha_o),
        l_beta_t: l_t.scale(td.beta_l),
        r_beta_t: r_t.scale(td.beta_r),
        o_beta_t: o_t.scale(td.beta_o),
    };

    let g = backend.generator();
    let consistency = match variant {
        Variant::NaiveAlpha | Variant::OperandAlpha => ConsistencyKey::None,
        Variant::SharedBeta => ConsistencyKey::Shared {
            g_beta: g.scale(td.beta_l),
        },
        Variant::UnmaskedBeta => ConsistencyKey::PerOperand {
            g_beta_l: g.scale(td.beta_l),
            g_beta_r: g.scale(td.beta_r),
            g_beta_o: g.scale(td.beta_o),
        },
        Variant::Final => ConsistencyKey::Masked {
            g_gamma: g.scale(td.gamma),
            g_beta_gamma: g.scale(td.beta_l * td.gamma),
        },
    };
    let vk = VerificationKey {
        variant,
        g,
        g_o_t: o_t,
        l: l[..=m].to_vec(),
        r: r[..=m].to_vec(),
        o: o[..=m].to_vec(),
        g_alpha_l: g.scale(td.alpha_l),
        g_alpha_r: g.scale(td.alpha_r),
        g_alpha_o: g.scale(td.alpha_o),
        consistency,
    };
    let pk = ProvingKey {
        variant,
        m,
        powers,
        l,
        r,
        o,
        l_alpha,
        r_alpha,
        o_alpha,
        z,
        zk,
    };
    Ok((pk, vk))
}

fn powers_of(backend: Backend, s: FieldElement, d: usize) -> Vec<GroupElement> {
    let mut out = Vec::with_capacity(d + 1);
    let mut sk = backend.scalar_field().one();
    for _ in 0..=d {
        out.push(backend.encrypt(sk));
        sk *= s;
    }
    out
}

fn setup_inner<R: Rng + ?Sized>(
    variant: Variant,
    backend: Backend,
    qap: &Qap,
    m: usize,
    rng: &mut R,
) -> Result<(ProvingKey, VerificationKey, Trapdoor), PinocchioError> {
    if backend.scalar_field() != qap.field {
        return Err(PinocchioError::ShapeMismatch(
            "QAP field differs from the group order".into(),
        ));
    }
    let td = Trapdoor::sample(variant, backend, rng);
    let powers = powers_of(backend, td.s.expect("sampled"), qap.d);
    let (pk, vk) = keys_from_powers(variant, qap, m, &powers, &td)?;
    Ok((pk, vk, td))
}

/// Samples all secrets, publishes the keys and drops the secrets.
pub fn setup<R: Rng + ?Sized>(
    backend: Backend,
    qap: &Qap,
    m: usize,
    rng: &mut R,
) -> Result<(ProvingKey, VerificationKey), PinocchioError> {
    setup_variant(Variant::Final, backend, qap, m, rng)
}

pub fn setup_variant<R: Rng + ?Sized>(
    variant: Variant,
    backend: Backend,
    qap: &Qap,
    m: usize,
    rng: &mut R,
) -> Result<(ProvingKey, VerificationKey), PinocchioError> {
    let (pk, vk, _) = setup_inner(variant, backend, qap, m, rng)?;
    Ok((pk, vk))
}

#[cfg(feature = "test-hooks")]
pub fn setup_with_trapdoor<R: Rng + ?Sized>(
    variant: Variant,
    backend: Backend,
    qap: &Qap,
    m: usize,
    rng: &mut R,
) -> Result<(ProvingKey, VerificationKey, Toxic<Trapdoor>), PinocchioError> {
    let (pk, vk, td) = setup_inner(variant, backend, qap, m, rng)?;
    Ok((pk, vk, Toxic::new(td)))
}

/// Final-protocol setup over externally generated powers `g^(s^k)`, such
/// as the output of a ceremony. The remaining secrets are sampled here.
pub fn setup_from_powers<R: Rng + ?Sized>(
    qap: &Qap,
    m: usize,
    powers: &[GroupElement],
    rng: &mut R,
) -> Result<(ProvingKey, VerificationKey), PinocchioError> {
    let backend = powers
        .first()
        .ok_or(GroupError::InsufficientPowers {
            needed: qap.d + 1,
            available: 0,
        })?
        .backend();
    if backend.scalar_field() != qap.field {
        return Err(PinocchioError::ShapeMismatch(
            "QAP field differs from the group order".into(),
        ));
    }
    let mut td = Trapdoor::sample(Variant::Final, backend, rng);
    td.s = None;
    keys_from_powers(Variant::Final, qap, m, powers, &td)
}

fn check_shape(pk: &ProvingKey, qap: &Qap, w: &Witness) -> Result<(), PinocchioError> {
    if pk.d() != qap.d || pk.n() != qap.n {
        return Err(PinocchioError::ShapeMismatch(format!(
            "key is for d={}, n={}, QAP has d={}, n={}",
            pk.d(),
            pk.n(),
            qap.d,
            qap.n
        )));
    }
    if w.values.len() != qap.n + 1 {
        return Err(QapError::LengthMismatch {
            expected: qap.n + 1,
            found: w.values.len(),
        }
        .into());
    }
    Ok(())
}

/// Honest prover. With `zk` the three `delta`s are sampled uniformly,
/// otherwise they are zero.
pub fn prove<R: Rng + ?Sized>(
    pk: &ProvingKey,
    qap: &Qap,
    w: &Witness,
    rng: &mut R,
    zk: bool,
) -> Result<Proof, PinocchioError> {
    let f = qap.field;
    let deltas = if zk {
        [f.random(rng), f.random(rng), f.random(rng)]
    } else {
        [f.zero(); 3]
    };
    prove_with_deltas(pk, qap, w, deltas)
}

/// Prover with explicit `(delta_l, delta_r, delta_o)`.
pub fn prove_with_deltas(
    pk: &ProvingKey,
    qap: &Qap,
    w: &Witness,
    deltas: [FieldElement; 3],
) -> Result<Proof, PinocchioError> {
    check_shape(pk, qap, w)?;
    let [dl, dr, d_o] = deltas;
    let backend = pk.backend();
    let (l, r, o) = qap.assemble(w)?;
    let mut h = cofactor(&l, &r, &o, &qap.t)?;
    h.add_scaled(&l, dr);
    h.add_scaled(&r, dl);
    h.add_scaled(&qap.t, dl * dr);
    h.add_scaled(&Polynomial::constant(qap.field.one()), -d_o);

    let owned = &w.values[pk.m + 1..];
    let me = |bases: &[GroupElement]| backend.multi_exp(bases, owned);
    let zk = &pk.zk;
    Ok(Proof {
        l: me(&pk.l[pk.m + 1..])? * zk.l_t.scale(dl),
        r: me(&pk.r[pk.m + 1..])? * zk.r_t.scale(dr),
        o: me(&pk.o[pk.m + 1..])? * zk.o_t.scale(d_o),
        h: backend.eval_encrypted_poly(h.coeffs(), &pk.powers)?,
        l_alpha: me(&pk.l_alpha)? * zk.l_alpha_t.scale(dl),
        r_alpha: me(&pk.r_alpha)? * zk.r_alpha_t.scale(dr),
        o_alpha: me(&pk.o_alpha)? * zk.o_alpha_t.scale(d_o),
        z: me(&pk.z)? * zk.l_beta_t.scale(dl) * zk.r_beta_t.scale(dr) * zk.o_beta_t.scale(d_o),
    })
}

/// Outcome of each verifier check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyReport {
    /// `alpha` restriction for the left, right and output operands.
    pub restriction: [bool; 3],
    pub consistency: bool,
    pub operation: bool,
}

impl VerifyReport {
    pub fn accepted(&self) -> bool {
        self.restriction.iter().all(|&b| b) && self.consistency && self.operation
    }
}

pub fn verify_report(
    vk: &VerificationKey,
    proof: &Proof,
    public: &[FieldElement],
) -> Result<VerifyReport, PinocchioError> {
    let m = vk.m();
    if public.len() != m {
        return Err(PinocchioError::PublicInputLengthMismatch {
            expected: m,
            found: public.len(),
        });
    }
    let b = vk.backend();
    for e in proof.elements() {
        if e.backend() != b {
            return Err(GroupError::BackendMismatch(b.id(), e.backend().id()).into());
        }
    }
    let e = |x: &GroupElement, y: &GroupElement| b.pairing(x, y);
    let g = vk.g;

    let restriction = [
        e(&proof.l, &vk.g_alpha_l) == e(&proof.l_alpha, &g),
        e(&proof.r, &vk.g_alpha_r) == e(&proof.r_alpha, &g),
        e(&proof.o, &vk.g_alpha_o) == e(&proof.o_alpha, &g),
    ];

    let consistency = match &vk.consistency {
        ConsistencyKey::None => true,
        ConsistencyKey::Shared { g_beta } => {
            e(&(proof.l * proof.r * proof.o), g_beta) == e(&proof.z, &g)
        }
        ConsistencyKey::PerOperand {
            g_beta_l,
            g_beta_r,
            g_beta_o,
        } => {
            e(&proof.l, g_beta_l) * e(&proof.r, g_beta_r) * e(&proof.o, g_beta_o) == e(&proof.z, &g)
        }
        ConsistencyKey::Masked {
            g_gamma,
            g_beta_gamma,
        } => e(&(proof.l * proof.r * proof.o), g_beta_gamma) == e(&proof.z, g_gamma),
    };

    let public_part = |keys: &[GroupElement]| -> Result<GroupElement, GroupError> {
        Ok(keys[0] * b.multi_exp(&keys[1..], public)?)
    };
    let l_v = public_part(&vk.l)?;
    let r_v = public_part(&vk.r)?;
    let o_v = public_part(&vk.o)?;
    let operation =
        e(&(proof.l * l_v), &(proof.r * r_v)) == e(&vk.g_o_t, &proof.h) * e(&(proof.o * o_v), &g);

    Ok(VerifyReport {
        restriction,
        consistency,
        operation,
    })
}

pub fn verify(
    vk: &VerificationKey,
    proof: &Proof,
    public: &[FieldElement],
) -> Result<bool, PinocchioError> {
    Ok(verify_report(vk, proof, public)?.accepted())
}
