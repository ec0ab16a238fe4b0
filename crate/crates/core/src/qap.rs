//! Quadratic arithmetic programs: per-variable operand polynomials
//! interpolated over the constraint indices `1..=d`.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{lagrange_basis, vanishing_poly, AlgebraError, Field, Polynomial};
use crate::circuit::{R1cs, Witness};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QapError {
    #[error("constraint system has no constraints")]
    NoConstraints,
    #[error("{0} constraints do not fit below the field modulus")]
    TooManyConstraints(usize),
    #[error("witness has {found} values, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("L*R - O is not divisible by t (remainder {0})")]
    UnsatisfiedConstraints(Polynomial),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Qap {
    pub field: Field,
    pub d: usize,
    /// Variable count without the constant one; polynomials run `0..=n`.
    pub n: usize,
    pub l: Vec<Polynomial>,
    pub r: Vec<Polynomial>,
    pub o: Vec<Polynomial>,
    pub t: Polynomial,
    /// Variables whose only non-zero polynomial is a constant. Their
    /// consistency term would publish `g^beta` times a known constant.
    pub hazards: Vec<usize>,
    pub var_names: Vec<String>,
}

pub fn build_qap(r1cs: &R1cs) -> Result<Qap, QapError> {
    let f = r1cs.field;
    let d = r1cs.d();
    if d == 0 {
        return Err(QapError::NoConstraints);
    }
    if d as u64 >= f.modulus() {
        return Err(QapError::TooManyConstraints(d));
    }
    let xs: Vec<_> = (1..=d as u64).map(|j| f.elem(j)).collect();
    let basis = lagrange_basis(f, &xs)?;
    let zero = Polynomial::zero(f);
    let mut l = vec![zero.clone(); r1cs.n + 1];
    let mut r = l.clone();
    let mut o = l.clone();
    for (j, c) in r1cs.constraints.iter().enumerate() {
        for (i, k) in c.l.terms() {
            l[i].add_scaled(&basis[j], k);
        }
        for (i, k) in c.r.terms() {
            r[i].add_scaled(&basis[j], k);
        }
        for (i, k) in c.o.terms() {
            o[i].add_scaled(&basis[j], k);
        }
    }
    let hazards = (0..=r1cs.n)
        .filter(|&i| {
            let polys = [&l[i], &r[i], &o[i]];
            let constant = polys.iter().filter(|p| p.degree() == Some(0)).count();
            let zero = polys.iter().filter(|p| p.is_zero()).count();
            constant == 1 && zero == 2
        })
        .collect();
    Ok(Qap {
        field: f,
        d,
        n: r1cs.n,
        l,
        r,
        o,
        t: vanishing_poly(f, d),
        hazards,
        var_names: r1cs.var_names.clone(),
    })
}

impl Qap {
    /// `(L, R, O)` with `L = sum v_i l_i` over all variables, index 0 included.
    pub fn assemble(&self, w: &Witness) -> Result<(Polynomial, Polynomial, Polynomial), QapError> {
        if w.values.len() != self.n + 1 {
            return Err(QapError::LengthMismatch {
                expected: self.n + 1,
                found: w.values.len(),
            });
        }
        let combine = |polys: &[Polynomial]| {
            let mut acc = Polynomial::zero(self.field);
            for (p, &v) in polys.iter().zip(&w.values) {
                acc.add_scaled(p, v);
            }
            acc
        };
        Ok((combine(&self.l), combine(&self.r), combine(&self.o)))
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Entry {
            l: Vec<String>,
            o: Vec<String>,
            r: Vec<String>,
        }
        let hex = |p: &Polynomial| p.coeffs().iter().map(|c| c.to_hex()).collect();
        let mut doc = BTreeMap::new();
        for (i, name) in self.var_names.iter().enumerate() {
            doc.insert(
                name.clone(),
                Entry {
                    l: hex(&self.l[i]),
                    o: hex(&self.o[i]),
                    r: hex(&self.r[i]),
                },
            );
        }
        let t: Vec<String> = hex(&self.t);
        let mut s = serde_json::to_string_pretty(&serde_json::json!({ "t": t, "variables": doc }))
            .expect("qap serializes");
        s.push('\n');
        s
    }
}

/// `h = (L R - O) / t`, refusing when the division leaves a remainder.
pub fn cofactor(
    l: &Polynomial,
    r: &Polynomial,
    o: &Polynomial,
    t: &Polynomial,
) -> Result<Polynomial, QapError> {
    let p = &(l * r) - o;
    let (h, rem) = p.divrem(t)?;
    if rem.is_zero() {
        Ok(h)
    } else {
        Err(QapError::UnsatisfiedConstraints(rem))
    }
}
