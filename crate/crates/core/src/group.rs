//! Opaque bilinear group written multiplicatively: `E(v) = g^v`, with a
//! symmetric pairing `e(g^a, g^b) = e(g, g)^(ab)`.
//!
//! The only backend today is [`BackendKind::Simulated`], which represents
//! `g^v` by `v` itself. It is exact and fast, and it hides nothing: it is
//! meant for desk-scale experiments and tests, and every identifier it emits
//! says `insecure`. Discrete logs are not reachable through the public API;
//! the `test-hooks` feature adds [`GroupElement::exponent`] for white-box
//! tests.
//!
//! Pairing outputs live in a separate type, so they cannot be paired again:
//!
//! ```compile_fail
//! use qapsnark::algebra::Field;
//! use qapsnark::group::Backend;
//! let b = Backend::simulated(Field::default());
//! let t = b.pairing(&b.generator(), &b.generator());
//! b.pairing(&t, &b.generator());
//! ```

use std::fmt;
use std::ops::{Div, Mul};
use std::str::FromStr;

use thiserror::Error;

use crate::algebra::{Field, FieldElement};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("group elements come from different backends ({0} vs {1})")]
    BackendMismatch(BackendId, BackendId),
    #[error("need {needed} encrypted powers, only {available} supplied")]
    InsufficientPowers { needed: usize, available: usize },
    #[error("unknown backend id {0:?}")]
    UnknownBackend(String),
    #[error("malformed group element encoding {0:?}")]
    Malformed(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BackendKind {
    /// Group elements are their own discrete logs. Not hiding.
    Simulated,
}

/// Identifies a backend instance: its kind plus the group order.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct BackendId {
    kind: BackendKind,
    order: u64,
}

impl fmt::Display for BackendId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            BackendKind::Simulated => write!(f, "insecure-sim-{:016x}", self.order),
        }
    }
}

impl fmt::Debug for BackendId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for BackendId {
    type Err = GroupError;
    fn from_str(s: &str) -> Result<Self, GroupError> {
        let hex = s
            .strip_prefix("insecure-sim-")
            .filter(|h| h.len() == 16)
            .ok_or_else(|| GroupError::UnknownBackend(s.to_string()))?;
        let order =
            u64::from_str_radix(hex, 16).map_err(|_| GroupError::UnknownBackend(s.to_string()))?;
        Ok(BackendId {
            kind: BackendKind::Simulated,
            order,
        })
    }
}

/// A bilinear group context. Cheap to copy; read-only after construction.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Backend {
    kind: BackendKind,
    scalars: Field,
}

impl Backend {
    /// Exponent-simulation backend whose group order is the field modulus.
    pub fn simulated(scalars: Field) -> Self {
        Backend {
            kind: BackendKind::Simulated,
            scalars,
        }
    }

    pub fn from_id(id: BackendId) -> Result<Self, GroupError> {
        let field = Field::new(id.order).map_err(|_| GroupError::UnknownBackend(id.to_string()))?;
        Ok(Backend {
            kind: id.kind,
            scalars: field,
        })
    }

    pub fn id(&self) -> BackendId {
        BackendId {
            kind: self.kind,
            order: self.scalars.modulus(),
        }
    }

    pub fn kind(&self) -> BackendKind {
        self.kind
    }

    /// Scalar field of the exponents; its modulus is the group order.
    pub fn scalar_field(&self) -> Field {
        self.scalars
    }

    pub fn generator(&self) -> GroupElement {
        self.encrypt(self.scalars.one())
    }

    pub fn identity(&self) -> GroupElement {
        self.encrypt(self.scalars.zero())
    }

    /// `E(v) = g^v`
    pub fn encrypt(&self, v: FieldElement) -> GroupElement {
        assert_eq!(v.field(), self.scalars, "scalar from a foreign field");
        GroupElement {
            backend: *self,
            exp: v,
        }
    }

    pub fn pairing(&self, a: &GroupElement, b: &GroupElement) -> TargetElement {
        self.try_pairing(a, b).expect("pairing across backends")
    }

    pub fn try_pairing(
        &self,
        a: &GroupElement,
        b: &GroupElement,
    ) -> Result<TargetElement, GroupError> {
        self.same(&a.backend)?;
        self.same(&b.backend)?;
        Ok(TargetElement {
            backend: *self,
            exp: a.exp * b.exp,
        })
    }

    /// `e(g, g)^v`
    pub fn target_exp(&self, v: FieldElement) -> TargetElement {
        assert_eq!(v.field(), self.scalars, "scalar from a foreign field");
        TargetElement {
            backend: *self,
            exp: v,
        }
    }

    /// `prod powers[i]^coeffs[i]`; with honest powers `g^(s^i)` this is
    /// `g^(p(s))`. Trailing zero coefficients need no power.
    pub fn eval_encrypted_poly(
        &self,
        coeffs: &[FieldElement],
        powers: &[GroupElement],
    ) -> Result<GroupElement, GroupError> {
        let used = coeffs
            .iter()
            .rposition(|c| !c.is_zero())
            .map_or(0, |k| k + 1);
        if used > powers.len() {
            return Err(GroupError::InsufficientPowers {
                needed: used,
                available: powers.len(),
            });
        }
        self.multi_exp(&powers[..used], &coeffs[..used])
    }

    /// `prod bases[i]^scalars[i]` over the shorter of the two slices.
    pub fn multi_exp(
        &self,
        bases: &[GroupElement],
        scalars: &[FieldElement],
    ) -> Result<GroupElement, GroupError> {
        let mut acc = self.scalars.zero();
        for (b, &k) in bases.iter().zip(scalars) {
            self.same(&b.backend)?;
            if !k.is_zero() {
                acc += b.exp * k;
            }
        }
        Ok(GroupElement {
            backend: *self,
            exp: acc,
        })
    }

    /// Parses the tagged hex form produced by [`GroupElement::to_tagged_hex`],
    /// rejecting elements of any other backend.
    pub fn parse_element(&self, s: &str) -> Result<GroupElement, GroupError> {
        let (id, hex) = s
            .rsplit_once(':')
            .ok_or_else(|| GroupError::Malformed(s.to_string()))?;
        let id: BackendId = id.parse()?;
        if id != self.id() {
            return Err(GroupError::BackendMismatch(self.id(), id));
        }
        if hex.len() != 16 {
            return Err(GroupError::Malformed(s.to_string()));
        }
        let exp = FieldElement::from_hex(self.scalars, hex)
            .map_err(|_| GroupError::Malformed(s.to_string()))?;
        Ok(self.encrypt(exp))
    }

    /// Decodes the 8-byte big-endian form produced by [`GroupElement::to_bytes`].
    pub fn element_from_bytes(&self, bytes: &[u8]) -> Result<GroupElement, GroupError> {
        let raw: [u8; 8] = bytes
            .try_into()
            .map_err(|_| GroupError::Malformed(format!("{} bytes", bytes.len())))?;
        let v = u64::from_be_bytes(raw);
        if v >= self.scalars.modulus() {
            return Err(GroupError::Malformed(format!("{v:#x} out of range")));
        }
        Ok(self.encrypt(self.scalars.elem(v)))
    }

    fn same(&self, other: &Backend) -> Result<(), GroupError> {
        if self != other {
            return Err(GroupError::BackendMismatch(self.id(), other.id()));
        }
        Ok(())
    }
}

/// An "encrypted" value `g^v`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupElement {
    backend: Backend,
    exp: FieldElement,
}

impl GroupElement {
    pub fn backend(&self) -> Backend {
        self.backend
    }

    /// Group operation: `g^x * g^y = g^(x+y)`.
    pub fn try_mul(&self, other: &GroupElement) -> Result<GroupElement, GroupError> {
        self.backend.same(&other.backend)?;
        Ok(GroupElement {
            backend: self.backend,
            exp: self.exp + other.exp,
        })
    }

    /// `(g^x)^k = g^(xk)`
    pub fn scale(&self, k: FieldElement) -> GroupElement {
        assert_eq!(
            k.field(),
            self.backend.scalars,
            "scalar from a foreign field"
        );
        GroupElement {
            backend: self.backend,
            exp: self.exp * k,
        }
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            backend: self.backend,
            exp: -self.exp,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.exp.is_zero()
    }

    pub fn to_bytes(&self) -> [u8; 8] {
        self.exp.value().to_be_bytes()
    }

    /// `<backend id>:<16 hex digits>`
    pub fn to_tagged_hex(&self) -> String {
        format!("{}:{}", self.backend.id(), self.exp.to_hex())
    }

    /// Discrete log of this element. White-box testing only.
    #[cfg(feature = "test-hooks")]
    pub fn exponent(&self) -> FieldElement {
        self.exp
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G({})", self.exp.to_hex())
    }
}

impl Mul for GroupElement {
    type Output = GroupElement;
    fn mul(self, rhs: GroupElement) -> GroupElement {
        self.try_mul(&rhs).expect("group operation across backends")
    }
}

impl Div for GroupElement {
    type Output = GroupElement;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: GroupElement) -> GroupElement {
        self * rhs.inverse()
    }
}

/// An element of the pairing target group. Supports the group operation and
/// exponentiation, but is not accepted as pairing input.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct TargetElement {
    backend: Backend,
    exp: FieldElement,
}

impl TargetElement {
    pub fn pow(&self, k: FieldElement) -> TargetElement {
        TargetElement {
            backend: self.backend,
            exp: self.exp * k,
        }
    }

    pub fn try_mul(&self, other: &TargetElement) -> Result<TargetElement, GroupError> {
        self.backend.same(&other.backend)?;
        Ok(TargetElement {
            backend: self.backend,
            exp: self.exp + other.exp,
        })
    }

    #[cfg(feature = "test-hooks")]
    pub fn exponent(&self) -> FieldElement {
        self.exp
    }
}

impl fmt::Debug for TargetElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GT({})", self.exp.to_hex())
    }
}

impl Mul for TargetElement {
    type Output = TargetElement;
    fn mul(self, rhs: TargetElement) -> TargetElement {
        self.try_mul(&rhs)
            .expect("target operation across backends")
    }
}
