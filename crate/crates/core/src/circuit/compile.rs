use std::collections::HashMap;

use super::r1cs::{Constraint, LinComb, R1cs, Witness};
use super::{literal, CircuitError, Expr, Inputs, Program, Span, Stmt};
use crate::algebra::{Field, FieldElement};

const ONE: usize = 0;

enum NonLin {
    /// `k * a * b`
    Mul {
        k: FieldElement,
        a: LinComb,
        b: LinComb,
    },
    /// `k * num / den`
    Div {
        k: FieldElement,
        num: LinComb,
        den: LinComb,
    },
}

/// An expression as a linear part plus pending non-linear terms.
struct Lowered {
    lin: LinComb,
    nl: Vec<NonLin>,
}

impl Lowered {
    fn lin(lin: LinComb) -> Self {
        Lowered {
            lin,
            nl: Vec::new(),
        }
    }

    fn constant(&self, field: Field) -> Option<FieldElement> {
        if self.nl.is_empty() {
            self.lin.constant_value(field)
        } else {
            None
        }
    }

    fn scale(mut self, c: FieldElement) -> Self {
        self.lin = self.lin.scaled(c);
        for t in &mut self.nl {
            match t {
                NonLin::Mul { k, .. } | NonLin::Div { k, .. } => *k *= c,
            }
        }
        self
    }

    fn plus(mut self, other: Lowered, sign: FieldElement) -> Self {
        self.lin.add_scaled(&other.lin, sign);
        self.nl.extend(other.scale(sign).nl);
        self
    }
}

/// How the witness generator fills one variable.
#[derive(Debug, Clone)]
enum Step {
    /// `x = lin`
    Lin {
        x: usize,
        lin: LinComb,
    },
    /// `x = k * a * b + lin`
    Mul {
        x: usize,
        k: FieldElement,
        a: LinComb,
        b: LinComb,
        lin: LinComb,
    },
    /// `x = k * num / den + lin`
    Div {
        x: usize,
        k: FieldElement,
        num: LinComb,
        den: LinComb,
        lin: LinComb,
        origin: String,
    },
    Bool {
        x: usize,
    },
    Bits {
        x: usize,
        bits: Vec<usize>,
    },
}

struct Builder {
    field: Field,
    names: Vec<String>,
    index: HashMap<String, usize>,
    constraints: Vec<Constraint>,
    steps: Vec<Step>,
    temps: usize,
}

impl Builder {
    fn alloc(&mut self, name: String) -> usize {
        let i = self.names.len();
        self.index.insert(name.clone(), i);
        self.names.push(name);
        i
    }

    fn temp(&mut self) -> usize {
        let name = format!("$t{}", self.temps);
        self.temps += 1;
        self.alloc(name)
    }

    fn var(&self, i: usize) -> LinComb {
        LinComb::var(i, self.field)
    }

    fn constrain(&mut self, l: LinComb, r: LinComb, o: LinComb) {
        self.constraints.push(Constraint { l, r, o });
    }

    fn lower(&mut self, e: &Expr, origin: &str) -> Result<Lowered, CircuitError> {
        let f = self.field;
        Ok(match e {
            Expr::Const(v) => {
                let mut lc = LinComb::new();
                lc.add_term(ONE, literal(f, *v));
                Lowered::lin(lc)
            }
            Expr::Var(name, _) => Lowered::lin(self.var(self.index[name])),
            Expr::Neg(a) => self.lower(a, origin)?.scale(-f.one()),
            Expr::Add(a, b) => {
                let a = self.lower(a, origin)?;
                let b = self.lower(b, origin)?;
                a.plus(b, f.one())
            }
            Expr::Sub(a, b) => {
                let a = self.lower(a, origin)?;
                let b = self.lower(b, origin)?;
                a.plus(b, -f.one())
            }
            Expr::Mul(a, b) => {
                let a = self.lower(a, origin)?;
                let b = self.lower(b, origin)?;
                if let Some(c) = a.constant(f) {
                    b.scale(c)
                } else if let Some(c) = b.constant(f) {
                    a.scale(c)
                } else {
                    let a = self.materialize(a, origin);
                    let b = self.materialize(b, origin);
                    Lowered {
                        lin: LinComb::new(),
                        nl: vec![NonLin::Mul { k: f.one(), a, b }],
                    }
                }
            }
            Expr::Div(a, b, span) => {
                let a = self.lower(a, origin)?;
                let b = self.lower(b, origin)?;
                match b.constant(f) {
                    Some(c) if c.is_zero() => return Err(non_quadratic(*span)),
                    Some(c) => a.scale(c.inverse().expect("nonzero")),
                    None => {
                        let num = self.materialize(a, origin);
                        let den = self.materialize(b, origin);
                        Lowered {
                            lin: LinComb::new(),
                            nl: vec![NonLin::Div {
                                k: f.one(),
                                num,
                                den,
                            }],
                        }
                    }
                }
            }
        })
    }

    /// Linear combination equal to `e`, introducing a temporary when `e`
    /// still has non-linear terms.
    fn materialize(&mut self, e: Lowered, origin: &str) -> LinComb {
        if e.nl.is_empty() {
            return e.lin;
        }
        let t = self.temp();
        self.assign(t, e, origin);
        self.var(t)
    }

    /// Emits constraints defining `x = e`. One non-linear term is folded
    /// into the assignment's own constraint; any others get temporaries.
    fn assign(&mut self, x: usize, e: Lowered, origin: &str) {
        let f = self.field;
        let mut lin = e.lin;
        let mut terms = e.nl.into_iter();
        let first = terms.next();
        for term in terms {
            let t = self.temp();
            let k = match term {
                NonLin::Mul { k, a, b } => {
                    self.constrain(a.clone(), b.clone(), self.var(t));
                    self.steps.push(Step::Mul {
                        x: t,
                        k: f.one(),
                        a,
                        b,
                        lin: LinComb::new(),
                    });
                    k
                }
                NonLin::Div { k, num, den } => {
                    self.constrain(den.clone(), self.var(t), num.clone());
                    self.steps.push(Step::Div {
                        x: t,
                        k: f.one(),
                        num,
                        den,
                        lin: LinComb::new(),
                        origin: origin.to_string(),
                    });
                    k
                }
            };
            lin.add_term(t, k);
        }
        let mut x_minus_lin = self.var(x);
        x_minus_lin.add_scaled(&lin, -f.one());
        match first {
            None => {
                if lin.is_empty() {
                    self.constrain(self.var(x), self.var(ONE), LinComb::new());
                } else {
                    self.constrain(lin.clone(), self.var(ONE), self.var(x));
                }
                self.steps.push(Step::Lin { x, lin });
            }
            Some(NonLin::Mul { k, a, b }) => {
                self.constrain(a.clone(), b.scaled(k), x_minus_lin);
                self.steps.push(Step::Mul { x, k, a, b, lin });
            }
            Some(NonLin::Div { k, num, den }) => {
                self.constrain(den.clone(), x_minus_lin, num.scaled(k));
                self.steps.push(Step::Div {
                    x,
                    k,
                    num,
                    den,
                    lin,
                    origin: origin.to_string(),
                });
            }
        }
    }
}

fn non_quadratic(span: Span) -> CircuitError {
    CircuitError::NonQuadratic {
        line: span.line,
        col: span.col,
    }
}

/// A compiled program: its constraint system plus the recipe for filling a
/// witness.
#[derive(Debug, Clone)]
pub struct Circuit {
    program: Program,
    r1cs: R1cs,
    steps: Vec<Step>,
}

impl Circuit {
    pub fn compile(program: &Program, field: Field) -> Result<Circuit, CircuitError> {
        let mut b = Builder {
            field,
            names: Vec::new(),
            index: HashMap::new(),
            constraints: Vec::new(),
            steps: Vec::new(),
            temps: 0,
        };
        b.alloc("$one".into());
        for p in program.public_params() {
            b.alloc(p.name.clone());
        }
        for o in &program.outputs {
            b.alloc(o.clone());
        }
        let m = b.names.len() - 1;
        for p in program.private_params() {
            b.alloc(p.name.clone());
        }

        for stmt in &program.stmts {
            match stmt {
                Stmt::Assign { target, expr, .. } => {
                    let lowered = b.lower(expr, target)?;
                    let x = match b.index.get(target) {
                        Some(&i) => i,
                        None => b.alloc(target.clone()),
                    };
                    b.assign(x, lowered, target);
                }
                Stmt::AssertBool { var, .. } => {
                    let x = b.index[var];
                    let v = b.var(x);
                    b.constrain(v.clone(), v.clone(), v);
                    b.steps.push(Step::Bool { x });
                }
                Stmt::AssertRange { var, bits, span } => {
                    if *bits == 0 || *bits >= field.bits() {
                        return Err(CircuitError::InvalidRange {
                            bits: *bits,
                            line: span.line,
                            col: span.col,
                        });
                    }
                    let x = b.index[var];
                    let bit_vars: Vec<usize> = (0..*bits)
                        .map(|i| b.alloc(format!("{}$b{}", var, i)))
                        .collect();
                    let mut sum = LinComb::new();
                    let mut pow = field.one();
                    for &bit in &bit_vars {
                        sum.add_term(bit, pow);
                        pow = pow + pow;
                    }
                    b.constrain(b.var(x), b.var(ONE), sum);
                    for &bit in &bit_vars {
                        let v = b.var(bit);
                        b.constrain(v.clone(), v.clone(), v);
                    }
                    b.steps.push(Step::Bits { x, bits: bit_vars });
                }
            }
        }

        let r1cs = R1cs {
            field,
            n: b.names.len() - 1,
            m,
            constraints: b.constraints,
            var_names: b.names,
        };
        Ok(Circuit {
            program: program.clone(),
            r1cs,
            steps: b.steps,
        })
    }

    pub fn from_source(src: &str, field: Field) -> Result<Circuit, CircuitError> {
        Circuit::compile(&super::parse(src)?, field)
    }

    pub fn program(&self) -> &Program {
        &self.program
    }

    pub fn r1cs(&self) -> &R1cs {
        &self.r1cs
    }

    pub fn field(&self) -> Field {
        self.r1cs.field
    }

    /// Names of the public slots `1..=m`, in index order.
    pub fn public_names(&self) -> &[String] {
        &self.r1cs.var_names[1..=self.r1cs.m]
    }

    pub fn public_values(&self, w: &Witness) -> Vec<FieldElement> {
        w.values[1..=self.r1cs.m].to_vec()
    }

    pub fn value_of(&self, w: &Witness, name: &str) -> Option<FieldElement> {
        self.r1cs.index_of(name).map(|i| w.values[i])
    }

    /// Runs the program on `inputs`, filling every variable including
    /// temporaries and range bits.
    pub fn witness(&self, inputs: &Inputs) -> Result<Witness, CircuitError> {
        let f = self.field();
        check_inputs(&self.program, inputs)?;
        let mut values = vec![f.zero(); self.r1cs.n + 1];
        values[ONE] = f.one();
        for p in &self.program.params {
            let i = self.r1cs.index_of(&p.name).expect("parameter allocated");
            values[i] = inputs[&p.name];
        }
        let name = |i: usize| self.r1cs.var_names[i].clone();
        for step in &self.steps {
            match step {
                Step::Lin { x, lin } => values[*x] = lin.eval(&values, f),
                Step::Mul { x, k, a, b, lin } => {
                    values[*x] = *k * a.eval(&values, f) * b.eval(&values, f) + lin.eval(&values, f)
                }
                Step::Div {
                    x,
                    k,
                    num,
                    den,
                    lin,
                    origin,
                } => {
                    let d = den
                        .eval(&values, f)
                        .inverse()
                        .map_err(|_| CircuitError::DivisionByZero(origin.clone()))?;
                    values[*x] = *k * num.eval(&values, f) * d + lin.eval(&values, f);
                }
                Step::Bool { x } => {
                    let v = values[*x];
                    if !(v.is_zero() || v.is_one()) {
                        return Err(CircuitError::AssertionFailed(format!(
                            "{} = {} is not boolean",
                            name(*x),
                            v
                        )));
                    }
                }
                Step::Bits { x, bits } => {
                    let v = values[*x].value();
                    if bits.len() < 64 && v >> bits.len() != 0 {
                        return Err(CircuitError::AssertionFailed(format!(
                            "{} = {} does not fit in {} bits",
                            name(*x),
                            v,
                            bits.len()
                        )));
                    }
                    for (i, &bit) in bits.iter().enumerate() {
                        values[bit] = f.elem((v >> i) & 1);
                    }
                }
            }
        }
        Ok(Witness { values })
    }
}

pub(crate) fn check_inputs(program: &Program, inputs: &Inputs) -> Result<(), CircuitError> {
    for name in inputs.keys() {
        if !program.params.iter().any(|p| &p.name == name) {
            return Err(CircuitError::UnknownInput(name.clone()));
        }
    }
    for p in &program.params {
        if !inputs.contains_key(&p.name) {
            return Err(CircuitError::MissingInput(p.name.clone()));
        }
    }
    Ok(())
}

pub fn flatten(program: &Program, field: Field) -> Result<R1cs, CircuitError> {
    Ok(Circuit::compile(program, field)?.r1cs)
}

pub fn witness(program: &Program, field: Field, inputs: &Inputs) -> Result<Witness, CircuitError> {
    Circuit::compile(program, field)?.witness(inputs)
}
