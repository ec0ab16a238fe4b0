//! Front end: a tiny single-assignment language compiled to rank-1
//! constraints.
//!
//! ```text
//! def calc(pub w, a, b) -> v {
//!     m = a * b;
//!     v = w * (m - a - b) + a + b;
//!     assert_bool(w);
//! }
//! ```
//!
//! Parameters are private unless marked `pub`; outputs are always public.
//! Variable index 0 is the constant one, followed by public parameters,
//! outputs, private parameters and then intermediates in creation order.
//! The constant one cannot be named in source; literals refer to it.

mod compile;
mod interpret;
mod parser;
mod r1cs;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::algebra::{Field, FieldElement};

pub use compile::{flatten, witness, Circuit};
pub use interpret::interpret;
pub use parser::parse;
pub use r1cs::{Constraint, LinComb, R1cs, Witness};

/// Input assignment by parameter name.
pub type Inputs = BTreeMap<String, FieldElement>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Visibility {
    Public,
    Private,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Param {
    pub name: String,
    pub vis: Visibility,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Const(u128),
    Var(String, Span),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, Span),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stmt {
    Assign {
        target: String,
        expr: Expr,
        span: Span,
    },
    AssertBool {
        var: String,
        span: Span,
    },
    AssertRange {
        var: String,
        bits: u32,
        span: Span,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    pub name: String,
    pub params: Vec<Param>,
    pub outputs: Vec<String>,
    pub stmts: Vec<Stmt>,
}

impl Program {
    pub fn public_params(&self) -> impl Iterator<Item = &Param> {
        self.params.iter().filter(|p| p.vis == Visibility::Public)
    }

    pub fn private_params(&self) -> impl Iterator<Item = &Param> {
        self.params.iter().filter(|p| p.vis == Visibility::Private)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CircuitError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("{name:?} assigned more than once (at {line}:{col})")]
    DuplicateAssignment {
        name: String,
        line: usize,
        col: usize,
    },
    #[error("{name:?} used before assignment (at {line}:{col})")]
    UndefinedVariable {
        name: String,
        line: usize,
        col: usize,
    },
    #[error("output {0:?} listed twice")]
    DuplicateOutput(String),
    #[error("output {0:?} is never assigned")]
    UnassignedOutput(String),
    #[error("division by an expression that is identically zero (at {line}:{col})")]
    NonQuadratic { line: usize, col: usize },
    #[error("range of {bits} bits is not supported by this field (at {line}:{col})")]
    InvalidRange { bits: u32, line: usize, col: usize },
    #[error("missing input {0:?}")]
    MissingInput(String),
    #[error("unknown input {0:?}")]
    UnknownInput(String),
    #[error("division by zero while computing {0:?}")]
    DivisionByZero(String),
    #[error("assertion failed: {0}")]
    AssertionFailed(String),
    #[error("malformed constraint system: {0}")]
    Malformed(String),
}

pub(crate) fn literal(field: Field, v: u128) -> FieldElement {
    field.elem((v % field.modulus() as u128) as u64)
}
