#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;

use qapsnark::algebra::Field;
use qapsnark::circuit::{Circuit, CircuitError, Inputs, Witness};
use qapsnark::group::Backend;
use qapsnark::qap::{build_qap, Qap};

pub const CALC: &str = "
def calc(pub w, a, b) -> v {
    m = a * b;
    v = w * (m - a - b) + a + b;
    assert_bool(w);
}
";

/// `b = a^2`, `c = b^2`: `a` and `b` each appear identically as left and
/// right operand.
pub const SQUARES: &str = "def sq(a) -> c { b = a * a; c = b * b; }";

pub fn field() -> Field {
    Field::default()
}

pub fn backend() -> Backend {
    Backend::simulated(field())
}

pub fn inputs(pairs: &[(&str, i64)]) -> Inputs {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), field().from_i64(*v)))
        .collect()
}

pub fn compile(src: &str) -> (Circuit, Qap) {
    let c = Circuit::from_source(src, field()).unwrap();
    let q = build_qap(c.r1cs()).unwrap();
    (c, q)
}

/// A random program plus what is needed to draw valid inputs for it.
#[derive(Debug, Clone)]
pub struct GenProgram {
    pub src: String,
    pub params: Vec<String>,
    pub booleans: Vec<String>,
    pub ranges: Vec<(String, u32)>,
}

impl GenProgram {
    pub fn random_inputs<R: Rng>(&self, rng: &mut R) -> Inputs {
        let f = field();
        self.params
            .iter()
            .map(|p| {
                let v = if self.booleans.contains(p) {
                    rng.gen_range(0..2)
                } else if let Some((_, bits)) = self.ranges.iter().find(|(n, _)| n == p) {
                    rng.gen_range(0..1u64 << bits)
                } else if rng.gen_bool(0.5) {
                    rng.gen_range(0..20)
                } else {
                    f.random(rng).value()
                };
                (p.clone(), f.elem(v))
            })
            .collect()
    }
}

fn random_expr<R: Rng>(rng: &mut R, vars: &[String], depth: u32) -> String {
    if depth == 0 || rng.gen_bool(0.3) {
        return if rng.gen_bool(0.8) {
            vars.choose(rng).unwrap().clone()
        } else {
            rng.gen_range(1..6).to_string()
        };
    }
    let a = random_expr(rng, vars, depth - 1);
    let b = random_expr(rng, vars, depth - 1);
    let op = ["+", "-", "*", "*", "/"].choose(rng).unwrap();
    format!("({} {} {})", a, op, b)
}

/// Random source text: 1 to 3 parameters with random visibility, 1 to 4
/// assignments, optional boolean and range assertions on parameters.
pub fn random_program<R: Rng>(rng: &mut R) -> GenProgram {
    let nparams = rng.gen_range(1..=3);
    let params: Vec<String> = (0..nparams).map(|i| format!("p{}", i)).collect();
    let decl: Vec<String> = params
        .iter()
        .map(|p| {
            if rng.gen_bool(0.4) {
                format!("pub {}", p)
            } else {
                p.clone()
            }
        })
        .collect();
    let mut vars = params.clone();
    let mut body = Vec::new();
    let nstmts = rng.gen_range(1..=4);
    for k in 0..nstmts {
        let name = format!("x{}", k);
        body.push(format!("    {} = {};", name, random_expr(rng, &vars, 2)));
        vars.push(name);
    }
    let mut booleans = Vec::new();
    let mut ranges = Vec::new();
    if rng.gen_bool(0.3) {
        let p = params.choose(rng).unwrap().clone();
        body.push(format!("    assert_bool({});", p));
        booleans.push(p);
    } else if rng.gen_bool(0.2) {
        let p = params.choose(rng).unwrap().clone();
        body.push(format!("    assert_range({}, 2);", p));
        ranges.push((p, 2));
    }
    let out = format!("x{}", nstmts - 1);
    let src = format!(
        "def gen({}) -> {} {{\n{}\n}}\n",
        decl.join(", "),
        out,
        body.join("\n")
    );
    GenProgram {
        src,
        params,
        booleans,
        ranges,
    }
}

/// A compiled random program with a satisfying witness, within the size
/// bounds. `accept` can veto further (for example degenerate QAPs).
pub fn random_instance<R: Rng>(
    rng: &mut R,
    max_constraints: usize,
    max_vars: usize,
    accept: impl Fn(&Circuit, &Qap) -> bool,
) -> (GenProgram, Circuit, Qap, Witness) {
    loop {
        let g = random_program(rng);
        let c = match Circuit::from_source(&g.src, field()) {
            Ok(c) => c,
            Err(CircuitError::NonQuadratic { .. }) => continue,
            Err(e) => panic!("generator produced invalid source: {}\n{}", e, g.src),
        };
        let r = c.r1cs();
        if r.d() == 0 || r.d() > max_constraints || r.n > max_vars {
            continue;
        }
        let q = build_qap(r).unwrap();
        if !accept(&c, &q) {
            continue;
        }
        for _ in 0..5 {
            match c.witness(&g.random_inputs(rng)) {
                Ok(w) => return (g, c, q, w),
                Err(CircuitError::DivisionByZero(_)) => continue,
                Err(e) => panic!("unexpected witness error {}\n{}", e, g.src),
            }
        }
    }
}

/// Setup succeeds: at least one prover variable and no prover-owned
/// constant-only polynomial.
pub fn provable(c: &Circuit, q: &Qap) -> bool {
    let m = c.r1cs().m;
    m < q.n && q.hazards.iter().all(|&i| i <= m)
}
