use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use rand::Rng;

use super::AlgebraError;

/// 2^61 - 1, a Mersenne prime. Large enough that every small integer used in
/// the worked examples embeds without wrapping.
pub const DEFAULT_MODULUS: u64 = (1 << 61) - 1;

/// A prime field `Z/pZ`. The modulus is validated once, at construction.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Field {
    modulus: u64,
}

impl Field {
    pub fn new(modulus: u64) -> Result<Self, AlgebraError> {
        if !is_prime(modulus) {
            return Err(AlgebraError::NotPrime(modulus));
        }
        Ok(Field { modulus })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            value: 0,
            field: *self,
        }
    }

    pub fn one(&self) -> FieldElement {
        self.elem(1)
    }

    pub fn elem(&self, v: u64) -> FieldElement {
        FieldElement {
            value: v % self.modulus,
            field: *self,
        }
    }

    /// Negative integers map to `p - |v|`.
    pub fn from_i64(&self, v: i64) -> FieldElement {
        self.from_i128(v as i128)
    }

    pub fn from_i128(&self, v: i128) -> FieldElement {
        let p = self.modulus as i128;
        FieldElement {
            value: v.rem_euclid(p) as u64,
            field: *self,
        }
    }

    /// `num / den` lifted into the field.
    pub fn rational(&self, num: i64, den: i64) -> Result<FieldElement, AlgebraError> {
        Ok(self.from_i64(num) * self.from_i64(den).inverse()?)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        self.elem(rng.gen_range(0..self.modulus))
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        self.elem(rng.gen_range(1..self.modulus))
    }

    /// Number of bits needed to write `p - 1`.
    pub fn bits(&self) -> u32 {
        64 - (self.modulus - 1).leading_zeros()
    }
}

impl Default for Field {
    fn default() -> Self {
        Field {
            modulus: DEFAULT_MODULUS,
        }
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.modulus)
    }
}

/// An element of a [`Field`], always kept in `[0, p)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    field: Field,
}

impl FieldElement {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn is_one(&self) -> bool {
        self.value == 1
    }

    pub fn inverse(&self) -> Result<FieldElement, AlgebraError> {
        if self.value == 0 {
            return Err(AlgebraError::ZeroInverse);
        }
        // extended Euclid on (value, p)
        let p = self.field.modulus as i128;
        let (mut old_r, mut r) = (self.value as i128, p);
        let (mut old_s, mut s) = (1i128, 0i128);
        while r != 0 {
            let q = old_r / r;
            (old_r, r) = (r, old_r - q * r);
            (old_s, s) = (s, old_s - q * s);
        }
        debug_assert_eq!(old_r, 1);
        Ok(self.field.from_i128(old_s))
    }

    /// Square-and-multiply.
    pub fn pow(&self, mut exp: u64) -> FieldElement {
        let mut base = *self;
        let mut acc = self.field.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc *= base;
            }
            base *= base;
            exp >>= 1;
        }
        acc
    }

    /// Fixed-width (16 digit) lowercase big-endian hex of the canonical value.
    pub fn to_hex(&self) -> String {
        format!("{:016x}", self.value)
    }

    pub fn from_hex(field: Field, s: &str) -> Result<FieldElement, AlgebraError> {
        let v = u64::from_str_radix(s, 16).map_err(|_| AlgebraError::Parse(s.to_string()))?;
        if v >= field.modulus {
            return Err(AlgebraError::OutOfRange(v));
        }
        Ok(field.elem(v))
    }

    /// Signed representative in `(-p/2, p/2]`; handy for printing small negatives.
    pub fn to_signed(&self) -> i128 {
        let p = self.field.modulus as i128;
        let v = self.value as i128;
        if v > p / 2 {
            v - p
        } else {
            v
        }
    }

    fn check(&self, other: &FieldElement) {
        assert_eq!(
            self.field, other.field,
            "field elements from different fields"
        );
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_signed())
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        self.check(&rhs);
        let p = self.field.modulus;
        let s = self.value as u128 + rhs.value as u128;
        FieldElement {
            value: (s % p as u128) as u64,
            field: self.field,
        }
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        self.check(&rhs);
        let p = self.field.modulus;
        let value = if self.value >= rhs.value {
            self.value - rhs.value
        } else {
            p - (rhs.value - self.value)
        };
        FieldElement {
            value,
            field: self.field,
        }
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        self.check(&rhs);
        let p = self.field.modulus as u128;
        FieldElement {
            value: ((self.value as u128 * rhs.value as u128) % p) as u64,
            field: self.field,
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        if self.value == 0 {
            self
        } else {
            FieldElement {
                value: self.field.modulus - self.value,
                field: self.field,
            }
        }
    }
}

impl AddAssign for FieldElement {
    fn add_assign(&mut self, rhs: FieldElement) {
        *self = *self + rhs;
    }
}

impl SubAssign for FieldElement {
    fn sub_assign(&mut self, rhs: FieldElement) {
        *self = *self - rhs;
    }
}

impl MulAssign for FieldElement {
    fn mul_assign(&mut self, rhs: FieldElement) {
        *self = *self * rhs;
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; these bases cover every 64-bit integer.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
