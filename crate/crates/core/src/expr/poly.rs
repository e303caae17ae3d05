//! Coefficient extraction with respect to chosen symbols.

use std::collections::BTreeMap;

use super::expand::{expand, terms_of};
use super::{Expr, Node};

/// An expanded expression viewed as a Laurent polynomial in `vars` with
/// coefficients free of `vars`. Keys are exponent vectors aligned with `vars`.
#[derive(Clone, Debug, PartialEq)]
pub struct Collected {
    pub vars: Vec<String>,
    pub terms: BTreeMap<Vec<i64>, Expr>,
}

impl Collected {
    pub fn coefficient(&self, exps: &[i64]) -> Expr {
        self.terms.get(exps).cloned().unwrap_or_else(Expr::zero)
    }
}

/// Expand `e` and group its terms by monomials in `vars`.
///
/// Returns `None` when one of `vars` occurs non-polynomially (inside a
/// function argument or a power of a sum).
pub fn coefficients_in(e: &Expr, vars: &[&str]) -> Option<Collected> {
    let ex = expand(e);
    let mut terms: BTreeMap<Vec<i64>, Vec<Expr>> = BTreeMap::new();
    for t in terms_of(&ex) {
        let factors: Vec<Expr> = match t.node() {
            Node::Mul(fs) => fs.clone(),
            _ => vec![t.clone()],
        };
        let mut key = vec![0i64; vars.len()];
        let mut rest = Vec::new();
        for f in factors {
            let (base, n) = match f.node() {
                Node::Pow(b, n) => (b.clone(), *n),
                _ => (f.clone(), 1),
            };
            if let Some(s) = base.as_symbol() {
                if let Some(i) = vars.iter().position(|v| *v == s) {
                    key[i] += n;
                    continue;
                }
            }
            if vars.iter().any(|v| f.contains_symbol(v)) {
                return None;
            }
            rest.push(f);
        }
        terms.entry(key).or_default().push(Expr::mul(rest));
    }
    let terms = terms
        .into_iter()
        .map(|(k, v)| (k, Expr::add(v)))
        .filter(|(_, c)| !c.is_zero())
        .collect();
    Some(Collected { vars: vars.iter().map(|s| s.to_string()).collect(), terms })
}

/// Highest power of `var` in the expansion of `e` (`None` if non-polynomial).
pub fn degree_in(e: &Expr, var: &str) -> Option<i64> {
    let c = coefficients_in(e, &[var])?;
    Some(c.terms.keys().map(|k| k[0]).max().unwrap_or(0))
}
