use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{AlgebraError, Field, FieldElement};

/// Dense univariate polynomial; `coeffs[k]` is the coefficient of `x^k`.
///
/// Trailing zeros are always stripped, so the zero polynomial has no
/// coefficients and equality is structural.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    field: Field,
    coeffs: Vec<FieldElement>,
}

impl Polynomial {
    pub fn new(field: Field, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { field, coeffs }
    }

    pub fn zero(field: Field) -> Self {
        Polynomial {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(c: FieldElement) -> Self {
        Polynomial::new(c.field(), vec![c])
    }

    /// `c * x^k`
    pub fn monomial(c: FieldElement, k: usize) -> Self {
        let mut coeffs = vec![c.field().zero(); k + 1];
        coeffs[k] = c;
        Polynomial::new(c.field(), coeffs)
    }

    /// Small integer coefficients, lowest degree first.
    pub fn from_i64s(field: Field, coeffs: &[i64]) -> Self {
        Polynomial::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<FieldElement> {
        self.coeffs
    }

    /// `None` stands for the degree of the zero polynomial (negative infinity).
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<FieldElement> {
        self.coeffs.last().copied()
    }

    /// Coefficient of `x^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> FieldElement {
        self.coeffs.get(k).copied().unwrap_or(self.field.zero())
    }

    /// Horner evaluation.
    pub fn eval(&self, x: FieldElement) -> FieldElement {
        self.coeffs
            .iter()
            .rev()
            .fold(self.field.zero(), |acc, &c| acc * x + c)
    }

    pub fn scale(&self, k: FieldElement) -> Polynomial {
        if k.is_zero() {
            return Polynomial::zero(self.field);
        }
        Polynomial {
            field: self.field,
            coeffs: self.coeffs.iter().map(|&c| c * k).collect(),
        }
    }

    /// `self += k * other`, without reallocating when `self` is long enough.
    pub fn add_scaled(&mut self, other: &Polynomial, k: FieldElement) {
        if k.is_zero() || other.is_zero() {
            return;
        }
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), self.field.zero());
        }
        for (a, &b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b * k;
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    /// Long division: returns `(q, r)` with `self = q * den + r` and
    /// `deg(r) < deg(den)`.
    pub fn divrem(&self, den: &Polynomial) -> Result<(Polynomial, Polynomial), AlgebraError> {
        let den_deg = den.degree().ok_or(AlgebraError::DivisionByZeroPolynomial)?;
        let num_len = self.coeffs.len();
        if num_len <= den_deg {
            return Ok((Polynomial::zero(self.field), self.clone()));
        }
        let lead_inv = den.coeffs[den_deg].inverse()?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![self.field.zero(); num_len - den_deg];
        for k in (0..quot.len()).rev() {
            let c = rem[k + den_deg] * lead_inv;
            quot[k] = c;
            if c.is_zero() {
                continue;
            }
            for (j, &d) in den.coeffs.iter().enumerate() {
                rem[k + j] -= c * d;
            }
        }
        rem.truncate(den_deg);
        Ok((
            Polynomial::new(self.field, quot),
            Polynomial::new(self.field, rem),
        ))
    }

    /// Synthetic division by `(x - root)`, discarding the remainder.
    fn div_linear(&self, root: FieldElement) -> Polynomial {
        let n = self.coeffs.len();
        if n <= 1 {
            return Polynomial::zero(self.field);
        }
        let mut out = vec![self.field.zero(); n - 1];
        let mut carry = self.field.zero();
        for k in (1..n).rev() {
            carry = carry * root + self.coeffs[k];
            out[k - 1] = carry;
        }
        Polynomial::new(self.field, out)
    }

    /// `(x - r_1)(x - r_2)...(x - r_n)`
    pub fn from_roots(field: Field, roots: &[FieldElement]) -> Polynomial {
        let mut coeffs = vec![field.one()];
        for &r in roots {
            let mut next = vec![field.zero(); coeffs.len() + 1];
            for (k, &c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * r;
            }
            coeffs = next;
        }
        Polynomial::new(field, coeffs)
    }
}

/// Monic `(x - 1)(x - 2)...(x - d)`.
pub fn vanishing_poly(field: Field, d: usize) -> Polynomial {
    let roots: Vec<_> = (1..=d as u64).map(|j| field.elem(j)).collect();
    Polynomial::from_roots(field, &roots)
}

/// Lagrange basis polynomials for the given abscissas: `basis[i](xs[j]) = [i == j]`.
pub fn lagrange_basis(field: Field, xs: &[FieldElement]) -> Result<Vec<Polynomial>, AlgebraError> {
    for (i, a) in xs.iter().enumerate() {
        if xs[..i].contains(a) {
            return Err(AlgebraError::DuplicateAbscissa(a.value()));
        }
    }
    let full = Polynomial::from_roots(field, xs);
    xs.iter()
        .map(|&x| {
            let numer = full.div_linear(x);
            let denom = numer.eval(x).inverse()?;
            Ok(numer.scale(denom))
        })
        .collect()
}

/// Unique polynomial of degree `< n` through `n` points with distinct x.
pub fn interpolate(
    field: Field,
    points: &[(FieldElement, FieldElement)],
) -> Result<Polynomial, AlgebraError> {
    if points.is_empty() {
        return Err(AlgebraError::NoPoints);
    }
    let xs: Vec<_> = points.iter().map(|p| p.0).collect();
    let basis = lagrange_basis(field, &xs)?;
    let mut acc = Polynomial::zero(field);
    for (b, &(_, y)) in basis.iter().zip(points) {
        acc.add_scaled(b, y);
    }
    Ok(acc)
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out.add_scaled(rhs, self.field.one());
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out.add_scaled(rhs, -self.field.one());
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(-self.field.one())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero(self.field);
        }
        // schoolbook
        let mut out = vec![self.field.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(self.field, out)
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let v = c.to_signed();
            let sign = if v < 0 { "-" } else { "+" };
            let mag = v.unsigned_abs();
            if first {
                if v < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", sign)?;
            }
            first = false;
            match (k, mag) {
                (0, m) => write!(f, "{}", m)?,
                (1, 1) => write!(f, "x")?,
                (1, m) => write!(f, "{}x", m)?,
                (k, 1) => write!(f, "x^{}", k)?,
                (k, m) => write!(f, "{}x^{}", m, k)?,
            }
        }
        Ok(())
    }
}
