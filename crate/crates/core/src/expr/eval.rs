//! Floating-point evaluation.

use std::collections::HashMap;

use thiserror::Error;

use super::{rat_to_f64, Expr, Node};

/// A numeric binding of symbols.
pub type Point = HashMap<String, f64>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("unbound symbol `{0}`")]
    UnboundSymbol(String),
    #[error("domain error: {0}")]
    DomainError(String),
}

fn sech(x: f64) -> f64 {
    let e = (-x.abs()).exp();
    2.0 * e / (1.0 + e * e)
}

fn finite(v: f64, what: &str) -> Result<f64, EvalError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(EvalError::DomainError(format!("non-finite value in {what}")))
    }
}

fn powi(b: f64, n: i64) -> Result<f64, EvalError> {
    if n < 0 && b == 0.0 {
        return Err(EvalError::DomainError("pole: zero raised to a negative power".into()));
    }
    finite(b.powi(n as i32), "power")
}

fn sqrt(x: f64) -> Result<f64, EvalError> {
    if x < 0.0 {
        return Err(EvalError::DomainError(format!("square root of negative number {x}")));
    }
    Ok(x.sqrt())
}

/// Evaluate `e` at `point`.
pub fn eval_numeric(e: &Expr, point: &Point) -> Result<f64, EvalError> {
    match e.node() {
        Node::Num(r) => Ok(rat_to_f64(r)),
        Node::Sym(s) => point.get(&**s).copied().ok_or_else(|| EvalError::UnboundSymbol(s.to_string())),
        Node::Add(ts) => {
            let mut acc = 0.0;
            for t in ts {
                acc += eval_numeric(t, point)?;
            }
            finite(acc, "sum")
        }
        Node::Mul(fs) => {
            let mut acc = 1.0;
            for f in fs {
                acc *= eval_numeric(f, point)?;
            }
            finite(acc, "product")
        }
        Node::Pow(b, n) => powi(eval_numeric(b, point)?, *n),
        Node::Exp(a) => finite(eval_numeric(a, point)?.exp(), "exp"),
        Node::Tanh(a) => Ok(eval_numeric(a, point)?.tanh()),
        Node::Sech(a) => Ok(sech(eval_numeric(a, point)?)),
        Node::Cosh(a) => finite(eval_numeric(a, point)?.cosh(), "cosh"),
        Node::Sqrt(a) => sqrt(eval_numeric(a, point)?),
    }
}

#[derive(Clone, Debug)]
enum Op {
    Const(f64),
    Var(usize),
    Add(Vec<Op>),
    Mul(Vec<Op>),
    Pow(Box<Op>, i64),
    Exp(Box<Op>),
    Tanh(Box<Op>),
    Sech(Box<Op>),
    Cosh(Box<Op>),
    Sqrt(Box<Op>),
}

/// An expression pre-resolved against a fixed variable ordering, for fast
/// repeated evaluation on grids.
#[derive(Clone, Debug)]
pub struct CompiledExpr {
    vars: Vec<String>,
    op: Op,
}

impl CompiledExpr {
    /// Compile `e`; every free symbol must appear in `vars`.
    pub fn new(e: &Expr, vars: &[&str]) -> Result<CompiledExpr, EvalError> {
        let op = compile(e, vars)?;
        Ok(CompiledExpr { vars: vars.iter().map(|s| s.to_string()).collect(), op })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn eval(&self, values: &[f64]) -> Result<f64, EvalError> {
        run(&self.op, values)
    }
}

fn compile(e: &Expr, vars: &[&str]) -> Result<Op, EvalError> {
    let bx = |a: &Expr| compile(a, vars).map(Box::new);
    Ok(match e.node() {
        Node::Num(r) => Op::Const(rat_to_f64(r)),
        Node::Sym(s) => Op::Var(
            vars.iter()
                .position(|v| *v == &**s)
                .ok_or_else(|| EvalError::UnboundSymbol(s.to_string()))?,
        ),
        Node::Add(ts) => Op::Add(ts.iter().map(|t| compile(t, vars)).collect::<Result<_, _>>()?),
        Node::Mul(fs) => Op::Mul(fs.iter().map(|t| compile(t, vars)).collect::<Result<_, _>>()?),
        Node::Pow(b, n) => Op::Pow(bx(b)?, *n),
        Node::Exp(a) => Op::Exp(bx(a)?),
        Node::Tanh(a) => Op::Tanh(bx(a)?),
        Node::Sech(a) => Op::Sech(bx(a)?),
        Node::Cosh(a) => Op::Cosh(bx(a)?),
        Node::Sqrt(a) => Op::Sqrt(bx(a)?),
    })
}

fn run(op: &Op, v: &[f64]) -> Result<f64, EvalError> {
    match op {
        Op::Const(c) => Ok(*c),
        Op::Var(i) => Ok(v[*i]),
        Op::Add(ts) => {
            let mut acc = 0.0;
            for t in ts {
                acc += run(t, v)?;
            }
            finite(acc, "sum")
        }
        Op::Mul(fs) => {
            let mut acc = 1.0;
            for f in fs {
                acc *= run(f, v)?;
            }
            finite(acc, "product")
        }
        Op::Pow(b, n) => powi(run(b, v)?, *n),
        Op::Exp(a) => finite(run(a, v)?.exp(), "exp"),
        Op::Tanh(a) => Ok(run(a, v)?.tanh()),
        Op::Sech(a) => Ok(sech(run(a, v)?)),
        Op::Cosh(a) => finite(run(a, v)?.cosh(), "cosh"),
        Op::Sqrt(a) => sqrt(run(a, v)?),
    }
}
