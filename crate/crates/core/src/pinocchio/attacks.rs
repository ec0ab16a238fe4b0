//! Forgeries against the weakened variants.
//!
//! Every attack only uses published key material. Each one succeeds against
//! its matching weak variant and is rejected by [`Variant::Final`]. Against
//! the final keys the attacker substitutes the closest available element
//! (for instance `g^(beta gamma)` where it would need `g^beta_r`).

use thiserror::Error;

use super::{ConsistencyKey, PinocchioError, Proof, ProvingKey, VerificationKey};
use crate::algebra::{FieldElement, Polynomial};
use crate::group::{GroupElement, GroupError};
use crate::qap::{cofactor, Qap, QapError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AttackError {
    #[error("attack precondition not met: {0}")]
    Precondition(String),
    #[error("forged operand polynomials leave a remainder")]
    NotDivisible,
    #[error(transparent)]
    Protocol(#[from] PinocchioError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    L,
    R,
    O,
}

/// One operand slot of a forged proof: which key terms fill it, with which
/// values, plus a constant added through the plain generator.
struct Slot {
    side: Side,
    values: Vec<FieldElement>,
    shift: FieldElement,
}

struct Forgery {
    left: Slot,
    right: Slot,
    output: Slot,
    /// Values used for the consistency term `Z`.
    beta: Vec<FieldElement>,
    public: Vec<FieldElement>,
}

fn side_polys(qap: &Qap, side: Side) -> &[Polynomial] {
    match side {
        Side::L => &qap.l,
        Side::R => &qap.r,
        Side::O => &qap.o,
    }
}

fn side_keys(pk: &ProvingKey, side: Side) -> (&[GroupElement], &[GroupElement]) {
    match side {
        Side::L => (&pk.l, &pk.l_alpha),
        Side::R => (&pk.r, &pk.r_alpha),
        Side::O => (&pk.o, &pk.o_alpha),
    }
}

fn beta_material(vk: &VerificationKey, position: Side) -> Option<GroupElement> {
    match &vk.consistency {
        ConsistencyKey::None => None,
        ConsistencyKey::Shared { g_beta } => Some(*g_beta),
        ConsistencyKey::PerOperand {
            g_beta_l,
            g_beta_r,
            g_beta_o,
        } => Some(match position {
            Side::L => *g_beta_l,
            Side::R => *g_beta_r,
            Side::O => *g_beta_o,
        }),
        ConsistencyKey::Masked { g_beta_gamma, .. } => Some(*g_beta_gamma),
    }
}

fn forge(
    pk: &ProvingKey,
    vk: &VerificationKey,
    qap: &Qap,
    fg: Forgery,
) -> Result<Proof, AttackError> {
    let m = pk.m;
    let f = qap.field;
    let backend = pk.backend();
    let g = backend.generator();
    if fg.public.len() != m {
        return Err(AttackError::Precondition(
            "public value count differs from m".into(),
        ));
    }
    for v in [
        &fg.left.values,
        &fg.right.values,
        &fg.output.values,
        &fg.beta,
    ] {
        if v.len() != qap.n + 1 {
            let e = QapError::LengthMismatch {
                expected: qap.n + 1,
                found: v.len(),
            };
            return Err(PinocchioError::from(e).into());
        }
    }

    // polynomial the verifier will effectively see in each slot
    let slot_poly = |slot: &Slot, position: Side| {
        let own = side_polys(qap, slot.side);
        let public = side_polys(qap, position);
        let mut acc = public[0].clone();
        for (i, &v) in fg.public.iter().enumerate() {
            acc.add_scaled(&public[i + 1], v);
        }
        for (p, &v) in own.iter().zip(&slot.values).skip(m + 1) {
            acc.add_scaled(p, v);
        }
        acc.add_scaled(&Polynomial::constant(f.one()), slot.shift);
        acc
    };
    let lp = slot_poly(&fg.left, Side::L);
    let rp = slot_poly(&fg.right, Side::R);
    let op = slot_poly(&fg.output, Side::O);
    let h = match cofactor(&lp, &rp, &op, &qap.t) {
        Ok(h) => h,
        Err(QapError::UnsatisfiedConstraints(_)) => return Err(AttackError::NotDivisible),
        Err(e) => return Err(PinocchioError::from(e).into()),
    };

    let alpha_of = |position| match position {
        Side::L => vk.g_alpha_l,
        Side::R => vk.g_alpha_r,
        Side::O => vk.g_alpha_o,
    };
    let slot_elements =
        |slot: &Slot, position: Side| -> Result<(GroupElement, GroupElement), GroupError> {
            let (keys, shifted) = side_keys(pk, slot.side);
            let owned = &slot.values[m + 1..];
            let base = backend.multi_exp(&keys[m + 1..], owned)? * g.scale(slot.shift);
            let alpha = backend.multi_exp(shifted, owned)? * alpha_of(position).scale(slot.shift);
            Ok((base, alpha))
        };
    let (l, l_alpha) = slot_elements(&fg.left, Side::L)?;
    let (r, r_alpha) = slot_elements(&fg.right, Side::R)?;
    let (o, o_alpha) = slot_elements(&fg.output, Side::O)?;

    let mut z = backend.multi_exp(&pk.z, &fg.beta[m + 1..])?;
    for (slot, position) in [
        (&fg.left, Side::L),
        (&fg.right, Side::R),
        (&fg.output, Side::O),
    ] {
        if let Some(b) = beta_material(vk, position) {
            z = z * b.scale(slot.shift);
        }
    }

    Ok(Proof {
        l,
        r,
        o,
        h: backend.eval_encrypted_poly(h.coeffs(), &pk.powers)?,
        l_alpha,
        r_alpha,
        o_alpha,
        z,
    })
}

fn honest_slot(side: Side, values: &[FieldElement]) -> Slot {
    Slot {
        side,
        values: values.to_vec(),
        shift: values[0].field().zero(),
    }
}

fn public_of(pk: &ProvingKey, values: &[FieldElement]) -> Vec<FieldElement> {
    values[1..=pk.m].to_vec()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperandSwap {
    Identity,
    /// Left-operand key terms go in the output slot and vice versa.
    LeftOutput,
}

/// Proves the swapped statement `O x R = L`: `values` must satisfy it at
/// every constraint. Returns the proof and the public values to verify it
/// against.
pub fn attack_swap_operands(
    pk: &ProvingKey,
    vk: &VerificationKey,
    qap: &Qap,
    values: &[FieldElement],
    swap: OperandSwap,
) -> Result<(Proof, Vec<FieldElement>), AttackError> {
    let (left, output) = match swap {
        OperandSwap::Identity => (Side::L, Side::O),
        OperandSwap::LeftOutput => (Side::O, Side::L),
    };
    let public = public_of(pk, values);
    let proof = forge(
        pk,
        vk,
        qap,
        Forgery {
            left: honest_slot(left, values),
            right: honest_slot(Side::R, values),
            output: honest_slot(output, values),
            beta: values.to_vec(),
            public: public.clone(),
        },
    )?;
    Ok((proof, public))
}

/// Gives variable `var` the value `2 v_o - v_r` as a left operand and `v_r`
/// as a right operand, where `v_o = values[var]` is its output value. With a
/// single `beta` and `l_var = r_var` the consistency sum is unchanged.
/// `values` must already hold whatever downstream values make the
/// operations hold.
pub fn attack_inconsistent_variable(
    pk: &ProvingKey,
    vk: &VerificationKey,
    qap: &Qap,
    values: &[FieldElement],
    var: usize,
    v_r: FieldElement,
) -> Result<(Proof, Vec<FieldElement>), AttackError> {
    if var <= pk.m || var > qap.n {
        return Err(AttackError::Precondition(format!(
            "variable {} is not prover-owned",
            var
        )));
    }
    if qap.l[var] != qap.r[var] {
        return Err(AttackError::Precondition(format!(
            "variable {} has different left and right polynomials",
            var
        )));
    }
    let v_o = values[var];
    let mut left = values.to_vec();
    let mut right = values.to_vec();
    left[var] = v_o + v_o - v_r;
    right[var] = v_r;
    let public = public_of(pk, values);
    let proof = forge(
        pk,
        vk,
        qap,
        Forgery {
            left: honest_slot(Side::L, &left),
            right: honest_slot(Side::R, &right),
            output: honest_slot(Side::O, values),
            beta: values.to_vec(),
            public: public.clone(),
        },
    )?;
    Ok((proof, public))
}

/// Adds the constant `shift` to the right operand polynomial using `g`,
/// `g^alpha_r` and the published `beta` material, then proves the
/// resulting statement. `values` is the assignment with unshifted right
/// operands.
pub fn attack_beta_malleate(
    pk: &ProvingKey,
    vk: &VerificationKey,
    qap: &Qap,
    values: &[FieldElement],
    shift: FieldElement,
) -> Result<(Proof, Vec<FieldElement>), AttackError> {
    let public = public_of(pk, values);
    let proof = forge(
        pk,
        vk,
        qap,
        Forgery {
            left: honest_slot(Side::L, values),
            right: Slot {
                side: Side::R,
                values: values.to_vec(),
                shift,
            },
            output: honest_slot(Side::O, values),
            beta: values.to_vec(),
            public: public.clone(),
        },
    )?;
    Ok((proof, public))
}
