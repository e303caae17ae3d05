//! Parenthesized prefix syntax.
//!
//! ```text
//! expr  := number | symbol | "(" op expr* ")"
//! op    := + | * | - | / | pow | exp | tanh | sech | cosh | sinh | sqrt
//! number:= -?[0-9]+ ("/" [0-9]+)?
//! ```
//!
//! The printer emits only `+ * pow exp tanh sech cosh sqrt`, and parsing a
//! printed canonical expression rebuilds the identical tree.

use thiserror::Error;

use super::{parse_rational, Expr, Node};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("unexpected end of input")]
    UnexpectedEof,
    #[error("unexpected token `{0}` at offset {1}")]
    UnexpectedToken(String, usize),
    #[error("unknown operator `{0}`")]
    UnknownOperator(String),
    #[error("operator `{op}` expects {expected} argument(s), got {got}")]
    Arity { op: String, expected: &'static str, got: usize },
    #[error("invalid number `{0}`")]
    BadNumber(String),
    #[error("trailing input at offset {0}")]
    Trailing(usize),
}

#[derive(Debug, Clone)]
enum Tok {
    Open(usize),
    Close(usize),
    Atom(String, usize),
}

fn tokenize(s: &str) -> Vec<Tok> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | ')' => {
                if !cur.is_empty() {
                    out.push(Tok::Atom(std::mem::take(&mut cur), start));
                }
                out.push(if c == '(' { Tok::Open(i) } else { Tok::Close(i) });
            }
            c if c.is_whitespace() => {
                if !cur.is_empty() {
                    out.push(Tok::Atom(std::mem::take(&mut cur), start));
                }
            }
            c => {
                if cur.is_empty() {
                    start = i;
                }
                cur.push(c);
            }
        }
    }
    if !cur.is_empty() {
        out.push(Tok::Atom(cur, start));
    }
    out
}

/// Parse prefix syntax into a canonical expression.
pub fn parse(s: &str) -> Result<Expr, ParseError> {
    let toks = tokenize(s);
    let mut pos = 0;
    let e = parse_expr(&toks, &mut pos)?;
    if pos < toks.len() {
        let off = match &toks[pos] {
            Tok::Open(i) | Tok::Close(i) | Tok::Atom(_, i) => *i,
        };
        return Err(ParseError::Trailing(off));
    }
    Ok(e)
}

fn atom(a: &str) -> Result<Expr, ParseError> {
    let first = a.chars().next().unwrap();
    if first.is_ascii_digit() || ((first == '-' || first == '+') && a.len() > 1) {
        return parse_rational(a).map(Expr::num).ok_or_else(|| ParseError::BadNumber(a.to_string()));
    }
    if a.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'') {
        Ok(Expr::sym(a))
    } else {
        Err(ParseError::BadNumber(a.to_string()))
    }
}

fn parse_expr(toks: &[Tok], pos: &mut usize) -> Result<Expr, ParseError> {
    let t = toks.get(*pos).ok_or(ParseError::UnexpectedEof)?;
    *pos += 1;
    match t {
        Tok::Atom(a, _) => atom(a),
        Tok::Close(i) => Err(ParseError::UnexpectedToken(")".into(), *i)),
        Tok::Open(_) => {
            let op = match toks.get(*pos).ok_or(ParseError::UnexpectedEof)? {
                Tok::Atom(a, _) => a.clone(),
                Tok::Open(i) => return Err(ParseError::UnexpectedToken("(".into(), *i)),
                Tok::Close(i) => return Err(ParseError::UnexpectedToken(")".into(), *i)),
            };
            *pos += 1;
            let mut args = Vec::new();
            loop {
                match toks.get(*pos).ok_or(ParseError::UnexpectedEof)? {
                    Tok::Close(_) => {
                        *pos += 1;
                        break;
                    }
                    _ => args.push(parse_expr(toks, pos)?),
                }
            }
            build(&op, args)
        }
    }
}

fn one(op: &str, mut args: Vec<Expr>) -> Result<Expr, ParseError> {
    if args.len() != 1 {
        return Err(ParseError::Arity { op: op.into(), expected: "1", got: args.len() });
    }
    Ok(args.pop().unwrap())
}

fn build(op: &str, args: Vec<Expr>) -> Result<Expr, ParseError> {
    match op {
        "+" => Ok(Expr::add(args)),
        "*" => Ok(Expr::mul(args)),
        "-" => match args.len() {
            1 => Ok(-&args[0]),
            2 => Ok(&args[0] - &args[1]),
            n => Err(ParseError::Arity { op: "-".into(), expected: "1 or 2", got: n }),
        },
        "/" => {
            if args.len() != 2 {
                return Err(ParseError::Arity { op: "/".into(), expected: "2", got: args.len() });
            }
            Ok(&args[0] / &args[1])
        }
        "pow" => {
            if args.len() != 2 {
                return Err(ParseError::Arity { op: "pow".into(), expected: "2", got: args.len() });
            }
            let n = args[1]
                .as_rational()
                .filter(|r| r.is_integer())
                .and_then(|r| num_traits::ToPrimitive::to_i64(r.numer()))
                .ok_or_else(|| ParseError::BadNumber(args[1].to_prefix()))?;
            Ok(Expr::pow(args[0].clone(), n))
        }
        "exp" => Ok(Expr::exp(one(op, args)?)),
        "tanh" => Ok(Expr::tanh(one(op, args)?)),
        "sech" => Ok(Expr::sech(one(op, args)?)),
        "cosh" => Ok(Expr::cosh(one(op, args)?)),
        "sinh" => Ok(Expr::sinh(one(op, args)?)),
        "sqrt" => Ok(Expr::sqrt(one(op, args)?)),
        _ => Err(ParseError::UnknownOperator(op.to_string())),
    }
}

pub(super) fn write_prefix(e: &Expr, out: &mut String) {
    let list = |out: &mut String, op: &str, items: &[&Expr]| {
        out.push('(');
        out.push_str(op);
        for i in items {
            out.push(' ');
            write_prefix(i, out);
        }
        out.push(')');
    };
    match e.node() {
        Node::Num(r) => {
            if r.is_integer() {
                out.push_str(&r.numer().to_string());
            } else {
                out.push_str(&format!("{}/{}", r.numer(), r.denom()));
            }
        }
        Node::Sym(s) => out.push_str(s),
        Node::Add(ts) => list(out, "+", &ts.iter().collect::<Vec<_>>()),
        Node::Mul(fs) => list(out, "*", &fs.iter().collect::<Vec<_>>()),
        Node::Pow(b, n) => {
            out.push_str("(pow ");
            write_prefix(b, out);
            out.push_str(&format!(" {n})"));
        }
        Node::Exp(a) => list(out, "exp", &[a]),
        Node::Tanh(a) => list(out, "tanh", &[a]),
        Node::Sech(a) => list(out, "sech", &[a]),
        Node::Cosh(a) => list(out, "cosh", &[a]),
        Node::Sqrt(a) => list(out, "sqrt", &[a]),
    }
}
