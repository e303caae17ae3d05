//! Finite-dimensional Lie algebras given by structure constants, realized on
//! point vector fields.
//!
//! Provides commutators, closure, derived series, the adjoint representation
//! with exact exponential entries, polynomial invariants of the coadjoint-like
//! action used for classification, and the optimal-system classifier for the
//! four-dimensional symmetry algebra.

use thiserror::Error;

use crate::expr::{expand, rat_to_f64, substitute, Expr, Point, Rational};
use crate::jet::VectorField;
use crate::kpbbm::Params;
use crate::linalg::QMatrix;
use crate::symmetry::{field_coordinates, printed_generators, SymmetryError};

mod classify;
mod invariants;

pub use classify::{adjoint_image_exact, classify, orbit_residual, OptimalRepresentative, Tag};
pub use invariants::{invariants, InvariantSet};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LieError {
    #[error("commutator [{0}, {1}] is not in the span of the basis")]
    NotClosed(usize, usize),
    #[error("basis fields are linearly dependent")]
    DependentBasis,
    #[error("basis index {0} out of range 1..={1}")]
    BadIndex(usize, usize),
    #[error("ad of basis element {0} is neither nilpotent nor diagonal; no closed-form exponential")]
    NotExponentiable(usize),
    #[error("the zero element spans no subalgebra")]
    ZeroElement,
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
}

fn zero() -> Rational {
    Rational::from_integer(0.into())
}

/// Lie bracket of point fields: `[v, w]^i = v(w^i) − w(v^i)`.
pub fn commutator_fields(v: &VectorField, w: &VectorField) -> VectorField {
    let c = |a: &Expr, b: &Expr| expand(&(v.apply(b) - w.apply(a)));
    VectorField::new(c(&v.xi, &w.xi), c(&v.gamma, &w.gamma), c(&v.tau, &w.tau), c(&v.eta, &w.eta))
}

/// `[e_i, e_j] = Σ_k c[i][j][k] e_k` (0-based indices internally).
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants {
    pub dim: usize,
    pub c: Vec<Vec<Vec<Rational>>>,
}

impl StructureConstants {
    pub fn new(c: Vec<Vec<Vec<Rational>>>) -> StructureConstants {
        StructureConstants { dim: c.len(), c }
    }

    pub fn from_ints(dim: usize, entries: &[(usize, usize, usize, i64)]) -> StructureConstants {
        let mut c = vec![vec![vec![zero(); dim]; dim]; dim];
        for &(i, j, k, v) in entries {
            c[i][j][k] = Rational::from_integer(v.into());
            c[j][i][k] = -Rational::from_integer(v.into());
        }
        StructureConstants { dim, c }
    }

    pub fn abelian(dim: usize) -> StructureConstants {
        StructureConstants { dim, c: vec![vec![vec![zero(); dim]; dim]; dim] }
    }

    /// Structure constants of a list of fields (must close).
    pub fn from_fields(basis: &[VectorField]) -> Result<StructureConstants, LieError> {
        let n = basis.len();
        let coords = field_coordinates(basis)?;
        if coords.rank() < n {
            return Err(LieError::DependentBasis);
        }
        let mut c = vec![vec![vec![zero(); n]; n]; n];
        for i in 0..n {
            for j in 0..n {
                let br = commutator_fields(&basis[i], &basis[j]);
                let mut all = basis.to_vec();
                all.push(br);
                let m = field_coordinates(&all)?;
                // solve Σ_k x_k · row_k = row_n
                let a = QMatrix::from_rows((0..n).map(|k| m.row(k).to_vec()).collect()).transpose();
                let x = a.solve(m.row(n)).ok_or(LieError::NotClosed(i + 1, j + 1))?;
                c[i][j] = x;
            }
        }
        Ok(StructureConstants { dim: n, c })
    }

    /// Bracket of coordinate vectors.
    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let mut out = vec![zero(); self.dim];
        for i in 0..self.dim {
            if x[i] == zero() {
                continue;
            }
            for j in 0..self.dim {
                if y[j] == zero() {
                    continue;
                }
                let s = &x[i] * &y[j];
                for (k, o) in out.iter_mut().enumerate() {
                    *o += &s * &self.c[i][j][k];
                }
            }
        }
        out
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| (0..self.dim).all(|k| self.c[i][j][k] == -&self.c[j][i][k])))
    }

    /// Largest absolute Jacobi defect (exactly zero for a Lie algebra).
    pub fn jacobi_defect(&self) -> Rational {
        let n = self.dim;
        let mut worst = zero();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for m in 0..n {
                        let mut s = zero();
                        for l in 0..n {
                            s += &self.c[i][j][l] * &self.c[l][k][m];
                            s += &self.c[j][k][l] * &self.c[l][i][m];
                            s += &self.c[k][i][l] * &self.c[l][j][m];
                        }
                        let a = if s < zero() { -s } else { s };
                        if a > worst {
                            worst = a;
                        }
                    }
                }
            }
        }
        worst
    }

    /// Matrix of `ad_{e_i}` acting on coordinate rows: `M[j][k] = c[i][j][k]`.
    pub fn ad(&self, i: usize) -> QMatrix {
        QMatrix::from_rows(self.c[i].clone())
    }

    /// Bracket table as expressions in the basis names.
    pub fn table(&self, names: &[&str]) -> Vec<Vec<String>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| format_combination(&self.c[i][j], names)).collect())
            .collect()
    }
}

/// `Σ x_k name_k` in compact text form.
pub fn format_combination(x: &[Rational], names: &[&str]) -> String {
    let mut parts = Vec::new();
    for (v, n) in x.iter().zip(names) {
        if *v == zero() {
            continue;
        }
        let one = Rational::from_integer(1.into());
        let s = if *v == one {
            n.to_string()
        } else if *v == -one {
            format!("-{n}")
        } else {
            format!("{}{n}", crate::expr::fmt_rational(v))
        };
        parts.push(s);
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ").replace("+ -", "- ")
    }
}

fn span_basis(vectors: Vec<Vec<Rational>>, dim: usize) -> Vec<Vec<Rational>> {
    if vectors.is_empty() {
        return vec![];
    }
    let mut m = QMatrix::from_rows(vectors);
    let r = m.rref().len();
    debug_assert_eq!(m.cols, dim);
    (0..r).map(|i| m.row(i).to_vec()).collect()
}

/// Dimensions of `V ⊇ [V,V] ⊇ …`, stopping at 0 or when the series
/// stabilizes; the algebra is solvable iff the last entry is 0.
pub fn derived_series(sc: &StructureConstants) -> (Vec<usize>, bool) {
    let n = sc.dim;
    let mut cur: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::from_integer(1.into()) } else { zero() }).collect())
        .collect();
    let mut dims = vec![n];
    loop {
        let mut brs = Vec::new();
        for x in &cur {
            for y in &cur {
                brs.push(sc.bracket(x, y));
            }
        }
        let next = span_basis(brs, n);
        let d = next.len();
        let stalled = d == *dims.last().unwrap();
        dims.push(d);
        if d == 0 || stalled {
            return (dims, d == 0);
        }
        cur = next;
    }
}

/// The printed four-dimensional algebra, basis `(Γ₁, Γ₂, Γ₃, Γ₄)`.
pub fn reference_algebra() -> StructureConstants {
    StructureConstants::from_fields(&printed_generators(&Params::ints(1, 1, 1))).expect("printed generators close")
}

pub const BASIS_NAMES: [&str; 4] = ["G1", "G2", "G3", "G4"];

/// `4×4` (or `n×n`) matrix of expressions; rows act on coordinate row vectors:
/// `ã = a · A`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjointMatrix {
    pub entries: Vec<Vec<Expr>>,
}

impl AdjointMatrix {
    pub fn identity(n: usize) -> AdjointMatrix {
        AdjointMatrix {
            entries: (0..n).map(|i| (0..n).map(|j| if i == j { Expr::one() } else { Expr::zero() }).collect()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn mul(&self, o: &AdjointMatrix) -> AdjointMatrix {
        let n = self.dim();
        AdjointMatrix {
            entries: (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| expand(&Expr::add((0..n).map(|k| &self.entries[i][k] * &o.entries[k][j]).collect())))
                        .collect()
                })
                .collect(),
        }
    }

    /// `a · A` for a row of expressions.
    pub fn apply(&self, a: &[Expr]) -> Vec<Expr> {
        let n = self.dim();
        (0..n).map(|j| expand(&Expr::add((0..n).map(|i| &a[i] * &self.entries[i][j]).collect()))).collect()
    }

    pub fn substitute(&self, vals: &[(&str, Expr)]) -> AdjointMatrix {
        let b = vals.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
        AdjointMatrix {
            entries: self.entries.iter().map(|r| r.iter().map(|e| expand(&substitute(e, &b))).collect()).collect(),
        }
    }

    pub fn eval(&self, vals: &[(&str, f64)]) -> Vec<Vec<f64>> {
        let pt: Point = vals.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        self.entries
            .iter()
            .map(|r| r.iter().map(|e| crate::expr::eval_numeric(e, &pt).expect("adjoint entries are entire")).collect())
            .collect()
    }

    /// Entries rendered in infix form.
    pub fn rows_text(&self) -> Vec<Vec<String>> {
        self.entries.iter().map(|r| r.iter().map(|e| e.to_string()).collect()).collect()
    }
}

fn is_nilpotent(m: &QMatrix) -> Option<Vec<QMatrix>> {
    let n = m.rows;
    let mut powers = vec![QMatrix::identity(n)];
    for _ in 0..n {
        let next = powers.last().unwrap().mul(m);
        if next.data.iter().all(|x| *x == zero()) {
            return Some(powers);
        }
        powers.push(next);
    }
    None
}

/// `Ad_{exp(ε e_i)} = exp(−ε · ad_{e_i})` with `i` 1-based; `eps` may be any
/// expression (typically a symbol).
pub fn adjoint_matrix(sc: &StructureConstants, i: usize, eps: &Expr) -> Result<AdjointMatrix, LieError> {
    if i == 0 || i > sc.dim {
        return Err(LieError::BadIndex(i, sc.dim));
    }
    let m = sc.ad(i - 1);
    let n = sc.dim;
    if let Some(powers) = is_nilpotent(&m) {
        // Σ_k (−ε)^k / k! · M^k, terminating
        let mut entries = vec![vec![Expr::zero(); n]; n];
        let mut fact = Rational::from_integer(1.into());
        for (k, pk) in powers.iter().enumerate() {
            if k > 0 {
                fact *= Rational::from_integer((k as i64).into());
            }
            let coef = (-eps).powi(k as i64) * Expr::num(Rational::from_integer(1.into()) / &fact);
            for r in 0..n {
                for c in 0..n {
                    if pk[(r, c)] != zero() {
                        entries[r][c] = &entries[r][c] + &coef * Expr::num(pk[(r, c)].clone());
                    }
                }
            }
        }
        let entries = entries.into_iter().map(|r| r.into_iter().map(|e| expand(&e)).collect()).collect();
        return Ok(AdjointMatrix { entries });
    }
    let diagonal = (0..n).all(|r| (0..n).all(|c| r == c || m[(r, c)] == zero()));
    if diagonal {
        let entries = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| if r == c { Expr::exp(-(Expr::num(m[(r, r)].clone()) * eps)) } else { Expr::zero() })
                    .collect()
            })
            .collect();
        return Ok(AdjointMatrix { entries });
    }
    Err(LieError::NotExponentiable(i))
}

/// Truncated numeric Lie series `Σ_{k≤terms} (−ε)^k/k! · ad^k` (independent of
/// the closed forms above).
pub fn lie_series_numeric(sc: &StructureConstants, i: usize, eps: f64, terms: usize) -> Vec<Vec<f64>> {
    let n = sc.dim;
    let m: Vec<Vec<f64>> = sc.c[i - 1].iter().map(|r| r.iter().map(rat_to_f64).collect()).collect();
    let mut acc = vec![vec![0.0; n]; n];
    let mut term: Vec<Vec<f64>> = (0..n).map(|r| (0..n).map(|c| if r == c { 1.0 } else { 0.0 }).collect()).collect();
    for k in 0..=terms {
        for r in 0..n {
            for c in 0..n {
                acc[r][c] += term[r][c];
            }
        }
        // term ← term · M · (−ε)/(k+1)
        let mut next = vec![vec![0.0; n]; n];
        for r in 0..n {
            for c in 0..n {
                let mut s = 0.0;
                for l in 0..n {
                    s += term[r][l] * m[l][c];
                }
                next[r][c] = s * (-eps) / (k as f64 + 1.0);
            }
        }
        term = next;
    }
    acc
}

/// Symbols used for the global adjoint parameters.
pub const EPS: [&str; 4] = ["eps1", "eps2", "eps3", "eps4"];

/// `A = A₁(ε₁)·A₂(ε₂)·…·A_n(ε_n)`.
pub fn global_adjoint(sc: &StructureConstants) -> Result<AdjointMatrix, LieError> {
    let mut acc = AdjointMatrix::identity(sc.dim);
    for i in 1..=sc.dim {
        let name = format!("eps{i}");
        acc = acc.mul(&adjoint_matrix(sc, i, &Expr::sym(&name))?);
    }
    Ok(acc)
}

/// Numeric global adjoint action on a coordinate row.
pub fn apply_global(global: &AdjointMatrix, eps: &[f64], a: &[f64]) -> Vec<f64> {
    let names: Vec<String> = (1..=eps.len()).map(|i| format!("eps{i}")).collect();
    let vals: Vec<(&str, f64)> = names.iter().map(|s| s.as_str()).zip(eps.iter().copied()).collect();
    let m = global.eval(&vals);
    let n = a.len();
    (0..n).map(|j| (0..n).map(|i| a[i] * m[i][j]).sum()).collect()
}

#[cfg(test)]
mod tests;
