//! Polynomial invariants of the adjoint action.
//!
//! For `U = Σ a_j e_j` and `W = Σ b_i e_i` the first-order action is
//! `a ↦ a − ε θ(a, b)` with `θ_k = Σ_ij b_i a_j c_ijk`.  An invariant `φ(a)`
//! must satisfy `Σ_k θ_k ∂φ/∂a_k = 0` for every `b`, i.e. it is annihilated by
//! the linear fields `X_i = Σ_k (Σ_j c_ijk a_j) ∂/∂a_k`.  The system is solved
//! exactly on a polynomial ansatz, degree by degree.

use serde::Serialize;

use crate::expr::{coefficients_in, differentiate, expand, substitute_one, Expr, Rational};
use crate::linalg::QMatrix;

use super::StructureConstants;

/// Result of an invariant computation.
#[derive(Debug, Clone, Serialize)]
pub struct InvariantSet {
    /// Coordinates still free (`a1..a4` minus a fixed one).
    pub variables: Vec<String>,
    /// The annihilating fields, as `coefficient·∂/∂a_k` text.
    pub system: Vec<String>,
    /// Generators of the invariant ring within the ansatz.
    #[serde(serialize_with = "ser_exprs")]
    pub generators: Vec<Expr>,
    /// A maximal functionally independent subset of the generators.
    #[serde(serialize_with = "ser_exprs")]
    pub basic: Vec<Expr>,
    pub max_degree: usize,
}

fn ser_exprs<S: serde::Serializer>(v: &[Expr], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|e| e.to_string()))
}

fn coord(i: usize) -> String {
    format!("a{}", i + 1)
}

fn monomials(nvars: usize, degree: usize) -> Vec<Vec<u32>> {
    if nvars == 0 {
        return if degree == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=degree as u32).rev() {
        for mut rest in monomials(nvars - 1, degree - first as usize) {
            let mut m = vec![first];
            m.append(&mut rest);
            out.push(m);
        }
    }
    out
}

fn monomial(vars: &[String], m: &[u32]) -> Expr {
    Expr::mul(vars.iter().zip(m).map(|(v, &e)| Expr::sym(v).powi(e as i64)).collect())
}

/// Invariants of the algebra's action; `a1_fixed` restricts to the slice
/// `a₁ = value` (the first coordinate is then no longer a variable).
pub fn invariants(sc: &StructureConstants, a1_fixed: Option<Rational>, max_degree: usize) -> InvariantSet {
    let n = sc.dim;
    // X_i = Σ_k (Σ_j c_ijk a_j) ∂_k
    let mut fields: Vec<Vec<Expr>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|k| {
                    expand(&Expr::add(
                        (0..n).map(|j| Expr::num(sc.c[i][j][k].clone()) * Expr::sym(&coord(j))).collect(),
                    ))
                })
                .collect()
        })
        .collect();
    let mut vars: Vec<String> = (0..n).map(coord).collect();
    if let Some(v) = &a1_fixed {
        for f in fields.iter_mut() {
            for c in f.iter_mut() {
                *c = expand(&substitute_one(c, "a1", &Expr::num(v.clone())));
            }
            f.remove(0);
        }
        vars.remove(0);
    }
    fields.retain(|f| f.iter().any(|c| !c.is_zero()));
    let system = fields
        .iter()
        .map(|f| {
            let parts: Vec<String> = f
                .iter()
                .zip(&vars)
                .filter(|(c, _)| !c.is_zero())
                .map(|(c, v)| format!("({c})·d/d{v}"))
                .collect();
            parts.join(" + ")
        })
        .collect();

    let apply = |f: &[Expr], e: &Expr| -> Expr {
        expand(&Expr::add(f.iter().zip(&vars).map(|(c, v)| c * differentiate(e, v)).collect()))
    };
    let var_refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    let homogeneous = a1_fixed.as_ref().map(|v| *v == Rational::from_integer(0.into())).unwrap_or(true);

    let mut generators: Vec<Expr> = Vec::new();
    let mut by_degree: Vec<Vec<Expr>> = vec![vec![]; max_degree + 1];
    let degree_sets: Vec<Vec<usize>> =
        if homogeneous { (1..=max_degree).map(|d| vec![d]).collect() } else { vec![(1..=max_degree).collect()] };
    for degs in degree_sets {
        let monos: Vec<Vec<u32>> = degs.iter().flat_map(|&d| monomials(vars.len(), d)).collect();
        let basis: Vec<Expr> = monos.iter().map(|m| monomial(&vars, m)).collect();
        // rows: coefficient of each output monomial in X_i(m_c)
        let mut rows: std::collections::BTreeMap<(usize, Vec<i64>), Vec<Rational>> = Default::default();
        for (ci, b) in basis.iter().enumerate() {
            for (fi, f) in fields.iter().enumerate() {
                let img = apply(f, b);
                let coll = coefficients_in(&img, &var_refs).expect("polynomial");
                for (k, c) in coll.terms {
                    let row = rows.entry((fi, k)).or_insert_with(|| vec![Rational::from_integer(0.into()); basis.len()]);
                    row[ci] = c.as_rational().expect("rational coefficients").clone();
                }
            }
        }
        let null = if rows.is_empty() {
            (0..basis.len())
                .map(|i| {
                    (0..basis.len())
                        .map(|j| Rational::from_integer(i64::from(i == j).into()))
                        .collect::<Vec<_>>()
                })
                .collect()
        } else {
            QMatrix::from_rows(rows.into_values().collect()).null_space()
        };
        let mut inv: Vec<Expr> = null
            .iter()
            .map(|v| expand(&Expr::add(v.iter().zip(&basis).map(|(c, b)| Expr::num(c.clone()) * b).collect())))
            .collect();
        inv.sort_by_key(|e| (e.free_symbols().len(), e.size()));
        let d = *degs.last().unwrap();
        // products of lower-degree invariants already account for part of the space
        let mut span: Vec<Expr> = Vec::new();
        if homogeneous {
            for e in 1..d {
                for g in generators.iter().filter(|g| total_degree(g, &var_refs) == e) {
                    for h in &by_degree[d - e] {
                        span.push(expand(&(g * h)));
                    }
                }
            }
        }
        for cand in inv {
            let mut trial = span.clone();
            trial.push(cand.clone());
            if rank_of(&trial, &var_refs) > rank_of(&span, &var_refs) {
                span.push(cand.clone());
                generators.push(cand.clone());
            }
            by_degree[d].push(cand);
        }
    }

    // functional independence by Jacobian rank at a generic rational point
    let point: Vec<Rational> = (0..vars.len()).map(|i| Rational::new((2 * i as i64 + 3).into(), (3 * i as i64 + 7).into())).collect();
    let mut basic: Vec<Expr> = Vec::new();
    let mut jac: Vec<Vec<Rational>> = Vec::new();
    for g in &generators {
        let row: Vec<Rational> = vars
            .iter()
            .map(|v| {
                let mut d = differentiate(g, v);
                for (w, p) in vars.iter().zip(&point) {
                    d = substitute_one(&d, w, &Expr::num(p.clone()));
                }
                expand(&d).as_rational().cloned().unwrap_or_else(|| Rational::from_integer(0.into()))
            })
            .collect();
        let mut trial = jac.clone();
        trial.push(row.clone());
        if QMatrix::from_rows(trial.clone()).rank() > jac.len() {
            jac = trial;
            basic.push(g.clone());
        }
    }
    InvariantSet { variables: vars, system, generators, basic, max_degree }
}

fn total_degree(e: &Expr, vars: &[&str]) -> usize {
    coefficients_in(e, vars)
        .map(|c| c.terms.keys().map(|k| k.iter().sum::<i64>()).max().unwrap_or(0) as usize)
        .unwrap_or(0)
}

fn rank_of(polys: &[Expr], vars: &[&str]) -> usize {
    if polys.is_empty() {
        return 0;
    }
    let colls: Vec<_> = polys.iter().map(|p| coefficients_in(p, vars).expect("polynomial")).collect();
    let mut keys: Vec<Vec<i64>> = colls.iter().flat_map(|c| c.terms.keys().cloned()).collect();
    keys.sort();
    keys.dedup();
    let rows = colls
        .iter()
        .map(|c| keys.iter().map(|k| c.coefficient(k).as_rational().cloned().unwrap_or_default()).collect())
        .collect();
    QMatrix::from_rows(rows).rank()
}
