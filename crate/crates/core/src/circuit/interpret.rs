use std::collections::BTreeMap;

use super::compile::check_inputs;
use super::{literal, CircuitError, Expr, Inputs, Program, Stmt};
use crate::algebra::{Field, FieldElement};

/// Direct evaluation of the program over the field, independent of the
/// constraint compiler. Returns every named variable.
pub fn interpret(
    program: &Program,
    field: Field,
    inputs: &Inputs,
) -> Result<BTreeMap<String, FieldElement>, CircuitError> {
    check_inputs(program, inputs)?;
    let mut env: BTreeMap<String, FieldElement> = inputs.clone();
    for stmt in &program.stmts {
        match stmt {
            Stmt::Assign { target, expr, .. } => {
                let v = eval(expr, field, &env, target)?;
                env.insert(target.clone(), v);
            }
            Stmt::AssertBool { var, .. } => {
                let v = env[var];
                if !(v.is_zero() || v.is_one()) {
                    return Err(CircuitError::AssertionFailed(format!(
                        "{} = {} is not boolean",
                        var, v
                    )));
                }
            }
            Stmt::AssertRange { var, bits, .. } => {
                let v = env[var].value();
                if *bits < 64 && v >> bits != 0 {
                    return Err(CircuitError::AssertionFailed(format!(
                        "{} = {} does not fit in {} bits",
                        var, v, bits
                    )));
                }
            }
        }
    }
    Ok(env)
}

fn eval(
    e: &Expr,
    f: Field,
    env: &BTreeMap<String, FieldElement>,
    target: &str,
) -> Result<FieldElement, CircuitError> {
    Ok(match e {
        Expr::Const(v) => literal(f, *v),
        Expr::Var(name, _) => env[name],
        Expr::Neg(a) => -eval(a, f, env, target)?,
        Expr::Add(a, b) => eval(a, f, env, target)? + eval(b, f, env, target)?,
        Expr::Sub(a, b) => eval(a, f, env, target)? - eval(b, f, env, target)?,
        Expr::Mul(a, b) => eval(a, f, env, target)? * eval(b, f, env, target)?,
        Expr::Div(a, b, _) => {
            let num = eval(a, f, env, target)?;
            let den = eval(b, f, env, target)?
                .inverse()
                .map_err(|_| CircuitError::DivisionByZero(target.to_string()))?;
            num * den
        }
    })
}
