//! Lie point symmetries.
//!
//! [`symmetry_condition`] applies the prolonged field to the equation
//! (linearized condition) and restricts to solutions by eliminating `u_yy`.
//! [`solve_determining`] bounds the search space with a polynomial ansatz in
//! `(x, y, t, u)`, splits the condition over all jet monomials and solves the
//! resulting homogeneous linear system exactly.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::expr::{coefficients_in, expand, substitute_one, Expr, Rational};
use crate::jet::{prolongation, u, JetError, MultiIndex, VectorField};
use crate::kpbbm::{equation_terms, residual, residual_jet, Params};
use crate::linalg::QMatrix;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SymmetryError {
    /// `k = 0`: `u_yy` cannot be eliminated; the off-shell condition is attached.
    #[error("k = 0: on-shell elimination of u_yy is undefined")]
    KZero { off_shell: Expr },
    #[error("ansatz degree must be between 1 and {max}", max = MAX_DEGREE)]
    BadDegree(usize),
    #[error("vector field components must be polynomial in x, y, t, u")]
    NotPolynomial,
    #[error(transparent)]
    Jet(#[from] JetError),
}

pub const MAX_DEGREE: usize = 3;

/// Base coordinates of the point fields.
pub const COORDS: [&str; 4] = ["x", "y", "t", "u"];

/// `pr v (Δ)` before restriction to solutions.
pub fn symmetry_condition_off_shell(v: &VectorField, p: &Params) -> Result<Expr, JetError> {
    let mut cache: HashMap<MultiIndex, Expr> = HashMap::new();
    let mut eta = |m: &MultiIndex| -> Result<Expr, JetError> {
        if let Some(e) = cache.get(m) {
            return Ok(e.clone());
        }
        let e = prolongation(v, m)?;
        cache.insert(*m, e.clone());
        Ok(e)
    };
    let mut out = Vec::new();
    for term in equation_terms(p) {
        for (i, f) in term.factors.iter().enumerate() {
            let mut prod = vec![term.coeff.clone(), eta(f)?];
            for (k, g) in term.factors.iter().enumerate() {
                if k != i {
                    prod.push(u(&g.word()));
                }
            }
            out.push(Expr::mul(prod));
        }
    }
    Ok(expand(&Expr::add(out)))
}

/// `u_yy` expressed through the equation (requires `k ≠ 0`).
pub fn u_yy_on_shell(p: &Params) -> Option<Expr> {
    if p.k == Rational::from_integer(0.into()) {
        return None;
    }
    let rest = residual_jet(p) - p.k() * u("yy");
    Some(expand(&(-rest * p.k().recip())))
}

/// The linearized symmetry condition restricted to solutions.
pub fn symmetry_condition(v: &VectorField, p: &Params) -> Result<Expr, SymmetryError> {
    let off = symmetry_condition_off_shell(v, p)?;
    match u_yy_on_shell(p) {
        Some(s) => Ok(expand(&substitute_one(&off, "u_yy", &s))),
        None => Err(SymmetryError::KZero { off_shell: off }),
    }
}

/// Polynomial ansatz of total degree ≤ `degree` in `(x, y, t, u)` for each
/// of `ξ, γ, τ, η`.
#[derive(Debug, Clone)]
pub struct SymmetryAnsatz {
    pub degree: usize,
    /// Coefficient names `c_<component>_<monomial>`.
    pub unknowns: Vec<String>,
    monomials: Vec<[u32; 4]>,
}

const COMPONENTS: [&str; 4] = ["xi", "gamma", "tau", "eta"];

fn monomials(degree: usize) -> Vec<[u32; 4]> {
    let mut out = Vec::new();
    let d = degree as u32;
    for total in 0..=d {
        for a in (0..=total).rev() {
            for b in (0..=total - a).rev() {
                for c in (0..=total - a - b).rev() {
                    out.push([a, b, c, total - a - b - c]);
                }
            }
        }
    }
    out
}

fn monomial_expr(m: &[u32; 4]) -> Expr {
    Expr::mul(COORDS.iter().zip(m).map(|(s, &e)| Expr::sym(s).powi(e as i64)).collect())
}

fn monomial_name(m: &[u32; 4]) -> String {
    let s: String = COORDS
        .iter()
        .zip(m)
        .flat_map(|(s, &e)| std::iter::repeat(*s).take(e as usize))
        .collect();
    if s.is_empty() {
        "1".into()
    } else {
        s
    }
}

impl SymmetryAnsatz {
    pub fn new(degree: usize) -> Result<SymmetryAnsatz, SymmetryError> {
        if !(1..=MAX_DEGREE).contains(&degree) {
            return Err(SymmetryError::BadDegree(degree));
        }
        let monomials = monomials(degree);
        let unknowns = COMPONENTS
            .iter()
            .flat_map(|c| monomials.iter().map(move |m| format!("c_{c}_{}", monomial_name(m))))
            .collect();
        Ok(SymmetryAnsatz { degree, unknowns, monomials })
    }

    pub fn len(&self) -> usize {
        self.unknowns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.unknowns.is_empty()
    }

    /// The field obtained by setting one unknown to 1 and the rest to 0.
    pub fn unit_field(&self, i: usize) -> VectorField {
        let n = self.monomials.len();
        let (comp, m) = (i / n, &self.monomials[i % n]);
        let mut parts = [Expr::zero(), Expr::zero(), Expr::zero(), Expr::zero()];
        parts[comp] = monomial_expr(m);
        let [a, b, c, d] = parts;
        VectorField::new(a, b, c, d)
    }

    /// The field with the given coefficient vector.
    pub fn field(&self, coeffs: &[Rational]) -> VectorField {
        let mut acc = VectorField::zero();
        for (i, c) in coeffs.iter().enumerate() {
            if c != &Rational::from_integer(0.into()) {
                acc = acc.add(&self.unit_field(i).scale(&Expr::num(c.clone())));
            }
        }
        acc
    }

    /// The symbolic general field `Σ c_i · (unit field i)`.
    pub fn general_field(&self) -> VectorField {
        let mut acc = VectorField::zero();
        for (i, name) in self.unknowns.iter().enumerate() {
            acc = acc.add(&self.unit_field(i).scale(&Expr::sym(name)));
        }
        acc
    }
}

/// Determining system of an ansatz: one row per jet monomial, one column per
/// unknown.
pub fn determining_matrix(p: &Params, ansatz: &SymmetryAnsatz) -> Result<QMatrix, SymmetryError> {
    let mut columns: Vec<BTreeMap<String, Rational>> = Vec::new();
    let mut keys: BTreeSet<String> = BTreeSet::new();
    for i in 0..ansatz.len() {
        let cond = symmetry_condition(&ansatz.unit_field(i), p)?;
        let col = split_monomials(&cond).ok_or(SymmetryError::NotPolynomial)?;
        keys.extend(col.keys().cloned());
        columns.push(col);
    }
    let keys: Vec<String> = keys.into_iter().collect();
    let mut m = QMatrix::zeros(keys.len(), ansatz.len());
    for (j, col) in columns.iter().enumerate() {
        for (i, k) in keys.iter().enumerate() {
            if let Some(v) = col.get(k) {
                m.data[i * ansatz.len() + j] = v.clone();
            }
        }
    }
    Ok(m)
}

/// Split an expanded polynomial over all of its symbols; the key is the
/// monomial in prefix syntax, the value its rational coefficient.
fn split_monomials(e: &Expr) -> Option<BTreeMap<String, Rational>> {
    let syms: Vec<String> = e.free_symbols().into_iter().collect();
    let vars: Vec<&str> = syms.iter().map(|s| s.as_str()).collect();
    let coll = coefficients_in(e, &vars)?;
    let mut out = BTreeMap::new();
    for (exps, c) in coll.terms {
        let key = vars
            .iter()
            .zip(&exps)
            .filter(|(_, &n)| n != 0)
            .map(|(v, n)| format!("{v}^{n}"))
            .collect::<Vec<_>>()
            .join("*");
        out.insert(key, c.as_rational()?.clone());
    }
    Some(out)
}

/// Basis of the point symmetries within the ansatz (reduced echelon form of
/// the null space, so the result is canonical).
pub fn solve_determining(p: &Params, ansatz: &SymmetryAnsatz) -> Result<Vec<VectorField>, SymmetryError> {
    let m = determining_matrix(p, ansatz)?;
    let ns = m.null_space();
    if ns.is_empty() {
        return Ok(vec![]);
    }
    let mut basis = QMatrix::from_rows(ns);
    basis.rref();
    let r = basis.rank();
    Ok((0..r).map(|i| ansatz.field(basis.row(i))).collect())
}

/// Coordinates of polynomial fields on the monomial × component basis.
pub fn field_coordinates(fields: &[VectorField]) -> Result<QMatrix, SymmetryError> {
    let mut rows: Vec<BTreeMap<(usize, Vec<i64>), Rational>> = Vec::new();
    let mut keys = BTreeSet::new();
    for f in fields {
        let mut row = BTreeMap::new();
        for (ci, comp) in f.components().iter().enumerate() {
            let coll = coefficients_in(comp, &COORDS).ok_or(SymmetryError::NotPolynomial)?;
            for (exps, c) in coll.terms {
                let c = c.as_rational().ok_or(SymmetryError::NotPolynomial)?.clone();
                keys.insert((ci, exps.clone()));
                row.insert((ci, exps), c);
            }
        }
        rows.push(row);
    }
    let keys: Vec<_> = keys.into_iter().collect();
    let data = rows
        .iter()
        .map(|r| keys.iter().map(|k| r.get(k).cloned().unwrap_or_else(|| Rational::from_integer(0.into()))).collect())
        .collect();
    Ok(QMatrix::from_rows(data))
}

/// Rank of the combined coefficient matrix of several field lists.
pub fn combined_rank(lists: &[&[VectorField]]) -> Result<usize, SymmetryError> {
    let all: Vec<VectorField> = lists.iter().flat_map(|l| l.iter().cloned()).collect();
    Ok(field_coordinates(&all)?.rank())
}

/// `span(a) ⊆ span(b)`.
pub fn span_contains(b: &[VectorField], a: &[VectorField]) -> Result<bool, SymmetryError> {
    Ok(combined_rank(&[b, a])? == combined_rank(&[b])?)
}

/// `span(a) = span(b)`.
pub fn same_span(a: &[VectorField], b: &[VectorField]) -> Result<bool, SymmetryError> {
    let r = combined_rank(&[a, b])?;
    Ok(r == combined_rank(&[a])? && r == combined_rank(&[b])?)
}

/// The generators as printed (`Γ₁` scaling, `Γ₂ = ∂x`, `Γ₃ = ∂t`, `Γ₄ = ∂y`).
pub fn printed_generators(p: &Params) -> Vec<VectorField> {
    let (x, y, t, uu) = (Expr::sym("x"), Expr::sym("y"), Expr::sym("t"), Expr::sym("u"));
    vec![
        VectorField::new(x, y, Expr::int(-2) * t, uu + (Expr::int(2) * p.a()).recip()),
        VectorField::new(Expr::one(), Expr::zero(), Expr::zero(), Expr::zero()),
        VectorField::new(Expr::zero(), Expr::zero(), Expr::one(), Expr::zero()),
        VectorField::new(Expr::zero(), Expr::one(), Expr::zero(), Expr::zero()),
    ]
}

/// The scaling symmetry actually admitted: `y∂y + 2t∂t − (2u + 1/a)∂u`.
pub fn scaling_generator(p: &Params) -> VectorField {
    VectorField::new(
        Expr::zero(),
        Expr::sym("y"),
        Expr::int(2) * Expr::sym("t"),
        -(Expr::int(2) * Expr::sym("u") + p.a().recip()),
    )
}

/// Translations plus the admitted scaling, in the printed ordering.
pub fn admitted_generators(p: &Params) -> Vec<VectorField> {
    let mut g = printed_generators(p);
    g[0] = scaling_generator(p);
    g
}

/// First-order flow check: for an exact solution `u(x, y, t)` the
/// characteristic flow `u + ε·Q`, `Q = η − ξu_x − γu_y − τu_t`, has residual
/// `O(ε²)`.  Returns the maximal sampled residual magnitude.
pub fn flow_residual(
    v: &VectorField,
    sol: &Expr,
    p: &Params,
    eps: f64,
    points: &[[f64; 3]],
) -> Result<f64, SymmetryError> {
    let at_sol = |e: &Expr| -> Expr {
        let b: HashMap<String, Expr> = [("u".to_string(), sol.clone())].into_iter().collect();
        crate::expr::substitute(e, &b)
    };
    let d = |w: &str| crate::kpbbm::partial(sol, &MultiIndex::parse(w).unwrap());
    let q = at_sol(&v.eta) - at_sol(&v.xi) * d("x") - at_sol(&v.gamma) * d("y") - at_sol(&v.tau) * d("t");
    let e = Expr::sym("eps");
    let moved = sol + e * q;
    let res = residual(&moved, p);
    let f = crate::expr::CompiledExpr::new(&res, &["x", "y", "t", "eps"]).map_err(|_| SymmetryError::NotPolynomial)?;
    let mut worst = 0.0f64;
    for pt in points {
        let r = f.eval(&[pt[0], pt[1], pt[2], eps]).map_err(|_| SymmetryError::NotPolynomial)?;
        worst = worst.max(r.abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests;
