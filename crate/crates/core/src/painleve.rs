//! WTC singular-manifold analysis.
//!
//! The solution is expanded as `u = Σ_j u_j φ^{j−2}` about the movable
//! manifold `φ = 0`.  Substituting into the equation term list (see
//! [`crate::kpbbm::TERMS`]) and collecting `φ^{j−6}` gives, for each `j`,
//!
//! ```text
//! P(j) · u_j + R_j(u_0, …, u_{j−1}) = 0
//! ```
//!
//! The expansion is carried out by a small Laurent-series engine whose
//! coefficients are jet expressions.  Two manifolds are supported:
//!
//! * [`ManifoldKind::General`] — `φ(x, y, t)` and `u_j(x, y, t)` arbitrary;
//! * [`ManifoldKind::Kruskal`] — `φ = x + ψ(y, t)`, `u_j = u_j(y, t)`.
//!
//! Resonances are the roots of `P`, recovered by exact interpolation in `j`;
//! at a resonance the remainder `R_j` must vanish identically for the
//! expansion to be consistent (compatibility condition).

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::expr::{
    differentiate, expand, substitute, substitute_one, zero_test, Expr, Rational, ZeroTestConfig,
    ZeroVerdict,
};
use crate::jet::{jet, Dir, JetError, JetSpace, MultiIndex};
use crate::kpbbm::{equation_terms, residual, Params, PdeTerm};
use crate::linalg::QPoly;

/// Largest recursion index handled (the highest resonance is 6).
pub const J_MAX: usize = 6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PainleveError {
    #[error("no dominant balance: the fourth-order dispersion term is absent (b = 0)")]
    DegenerateBalance,
    #[error("index {0} is a resonance; u_{0} cannot be solved for")]
    ResonantIndex(i64),
    #[error("lower coefficients are required before recursion step {0}")]
    RecursionIncomplete(i64),
    #[error("index {0} is not a compatibility resonance (expected 4, 5 or 6)")]
    NotApplicable(i64),
    #[error("index {0} is outside the supported range 0..={max}", max = J_MAX)]
    OutOfRange(i64),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error("resonance polynomial is not rational in j: {0}")]
    NonPolynomial(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ManifoldKind {
    General,
    Kruskal,
}

/// Coefficient space of the expansion.
#[derive(Debug, Clone)]
pub struct Manifold {
    pub kind: ManifoldKind,
    space: JetSpace,
}

/// Name of the j-th expansion coefficient as a jet base.
pub fn coeff_base(j: usize) -> String {
    format!("u{j}")
}

impl Manifold {
    pub fn new(kind: ManifoldKind) -> Manifold {
        let (base, deps): (&str, &[Dir]) = match kind {
            ManifoldKind::General => ("phi", &Dir::ALL),
            ManifoldKind::Kruskal => ("psi", &[Dir::Y, Dir::T]),
        };
        let mut space = JetSpace::new().with(base, deps);
        for j in 0..=J_MAX + 2 {
            space = space.with(&coeff_base(j), deps);
        }
        Manifold { kind, space }
    }

    pub fn general() -> Manifold {
        Manifold::new(ManifoldKind::General)
    }

    pub fn kruskal() -> Manifold {
        Manifold::new(ManifoldKind::Kruskal)
    }

    pub fn space(&self) -> &JetSpace {
        &self.space
    }

    /// `φ_J` expressed in this manifold's coordinates.
    pub fn phi(&self, word: &str) -> Expr {
        let m = MultiIndex::parse(word).expect("valid word");
        match self.kind {
            ManifoldKind::General => jet("phi", &m),
            ManifoldKind::Kruskal => {
                if m.count(Dir::X) == 0 {
                    if m.order() == 0 {
                        Expr::sym("x") + Expr::sym("psi")
                    } else {
                        jet("psi", &m)
                    }
                } else if m.order() == 1 {
                    Expr::one()
                } else {
                    Expr::zero()
                }
            }
        }
    }

    /// The manifold function itself as an expression (for display).
    pub fn manifold_expr(&self) -> Expr {
        self.phi("")
    }

    fn grad(&self, d: Dir) -> Expr {
        self.phi(d.name())
    }

    fn d(&self, e: &Expr, d: Dir) -> Result<Expr, JetError> {
        self.space.total_derivative(e, d)
    }
}

/// Laurent series `Σ_n c_n φ^n` with coefficients known for `lo ≤ n ≤ hi`.
#[derive(Debug, Clone)]
struct Series {
    lo: i64,
    c: Vec<Expr>,
}

impl Series {
    fn hi(&self) -> i64 {
        self.lo + self.c.len() as i64 - 1
    }

    fn at(&self, n: i64) -> Expr {
        if n < self.lo || n > self.hi() {
            Expr::zero()
        } else {
            self.c[(n - self.lo) as usize].clone()
        }
    }

    /// `D_d` of the series, keeping orders `≤ upto`.
    fn deriv(&self, m: &Manifold, d: Dir, upto: i64) -> Result<Series, JetError> {
        let lo = self.lo - 1;
        let hi = self.hi().min(upto);
        let g = m.grad(d);
        let mut c = Vec::new();
        for n in lo..=hi {
            // D c_n φ^n + (n+1) c_{n+1} φ_d φ^n
            let mut terms = Vec::new();
            let cn = self.at(n);
            if !cn.is_zero() {
                terms.push(m.d(&cn, d)?);
            }
            let cn1 = self.at(n + 1);
            if !cn1.is_zero() && n + 1 != 0 {
                terms.push(Expr::int(n + 1) * &cn1 * &g);
            }
            c.push(Expr::add(terms));
        }
        Ok(Series { lo, c })
    }
}

/// Coefficient of `φ^n` in the equation applied to the series `u`.
fn equation_coefficient(terms: &[PdeTerm], m: &Manifold, u: &Series, n: i64) -> Result<Expr, JetError> {
    let mut cache: HashMap<MultiIndex, Series> = HashMap::new();
    let mut get = |idx: &MultiIndex| -> Result<Series, JetError> {
        if let Some(s) = cache.get(idx) {
            return Ok(s.clone());
        }
        let mut s = u.clone();
        for d in Dir::ALL {
            for _ in 0..idx.count(d) {
                // orders above n + 6 never reach φ^n
                s = s.deriv(m, d, n + 6)?;
            }
        }
        cache.insert(*idx, s.clone());
        Ok(s)
    };
    let mut out = Vec::new();
    for t in terms {
        match t.factors.len() {
            1 => out.push(&t.coeff * get(&t.factors[0])?.at(n)),
            2 => {
                let (a, b) = (get(&t.factors[0])?, get(&t.factors[1])?);
                let mut s = Vec::new();
                for i in a.lo..=a.hi() {
                    let bj = b.at(n - i);
                    if bj.is_zero() {
                        continue;
                    }
                    s.push(a.at(i) * bj);
                }
                out.push(&t.coeff * Expr::add(s));
            }
            _ => unreachable!("the equation is at most quadratic"),
        }
    }
    Ok(Expr::add(out))
}

/// Exponents and coefficient degrees of each term at leading order.
fn dominant_alpha(terms: &[PdeTerm]) -> Option<i64> {
    let live: Vec<(i64, i64)> = terms
        .iter()
        .filter(|t| !t.coeff.is_zero())
        .map(|t| (t.factors.len() as i64, t.factors.iter().map(|f| f.order() as i64).sum()))
        .collect();
    // φ-exponent of a term under u ~ φ^α is deg·α − order
    let mut best: Option<i64> = None;
    for &(d1, o1) in &live {
        for &(d2, o2) in &live {
            if d1 <= d2 {
                continue;
            }
            // d1 α − o1 = d2 α − o2
            let num = o1 - o2;
            let den = d1 - d2;
            if num % den != 0 {
                continue;
            }
            let alpha = num / den;
            if alpha >= 0 {
                continue;
            }
            let e = d1 * alpha - o1;
            if live.iter().all(|&(d, o)| d * alpha - o >= e) && best.map(|b| alpha < b).unwrap_or(true) {
                best = Some(alpha);
            }
        }
    }
    best
}

/// `(α, u₀)`: dominant balance and the leading coefficient on the general manifold.
pub fn leading_order(p: &Params) -> Result<(i64, Expr), PainleveError> {
    leading_order_on(p, &Manifold::general())
}

pub fn leading_order_on(p: &Params, m: &Manifold) -> Result<(i64, Expr), PainleveError> {
    let terms = equation_terms(p);
    let alpha = dominant_alpha(&terms).ok_or(PainleveError::DegenerateBalance)?;
    if alpha != -2 {
        return Err(PainleveError::DegenerateBalance);
    }
    let u0 = Expr::sym("u0");
    let s = Series { lo: alpha, c: vec![u0.clone()] };
    let e = equation_coefficient(&terms, m, &s, 4 * alpha + 2)?;
    // e = u0·(c1 + c2·u0)
    let e = expand(&e);
    let quad = expand(&(differentiate(&differentiate(&e, "u0"), "u0") * Expr::frac(1, 2)));
    let lin = expand(&substitute_one(&differentiate(&e, "u0"), "u0", &Expr::zero()));
    if quad.is_zero() {
        return Err(PainleveError::DegenerateBalance);
    }
    Ok((alpha, expand(&(-lin * quad.recip()))))
}

/// A truncated singular expansion.
#[derive(Debug, Clone)]
pub struct SingularExpansion {
    pub alpha: i64,
    /// `u_0, u_1, …` (resonant coefficients stay as the free symbols `u4`, …).
    pub coefficients: Vec<Expr>,
    pub manifold: Manifold,
}

impl SingularExpansion {
    /// Start an expansion with `u_0` filled in.
    pub fn start(p: &Params, manifold: Manifold) -> Result<SingularExpansion, PainleveError> {
        let (alpha, u0) = leading_order_on(p, &manifold)?;
        Ok(SingularExpansion { alpha, coefficients: vec![u0], manifold })
    }
}

/// Result of a recursion step.
#[derive(Debug, Clone, PartialEq)]
pub enum Step {
    /// Non-resonant index: the solved coefficient.
    Solved(Expr),
    /// Resonant index: the remainder that must vanish.
    Constraint(Expr),
}

fn split_linear(e: &Expr, var: &str) -> (Expr, Expr) {
    let e = expand(e);
    let coeff = expand(&differentiate(&e, var));
    let rest = expand(&substitute_one(&e, var, &Expr::zero()));
    (coeff, rest)
}

/// `(P_j, R_j)` from collecting `φ^{j−6}` with the coefficients known so far
/// and `u_j` left as a symbol.
pub fn recursion_parts(j: usize, exp: &SingularExpansion, p: &Params) -> Result<(Expr, Expr), PainleveError> {
    if exp.coefficients.len() < j {
        return Err(PainleveError::RecursionIncomplete(j as i64));
    }
    let mut c: Vec<Expr> = exp.coefficients[..j].to_vec();
    let uj = coeff_base(j);
    c.push(Expr::sym(&uj));
    let s = Series { lo: exp.alpha, c };
    let e = equation_coefficient(&equation_terms(p), &exp.manifold, &s, j as i64 - 6)?;
    Ok(split_linear(&e, &uj))
}

/// One step of the recursion.
pub fn recursion_step(j: i64, exp: &SingularExpansion, p: &Params) -> Result<Step, PainleveError> {
    if !(0..=J_MAX as i64).contains(&j) {
        return Err(PainleveError::OutOfRange(j));
    }
    if j == 0 {
        return Ok(Step::Solved(leading_order_on(p, &exp.manifold)?.1));
    }
    let (pj, rest) = recursion_parts(j as usize, exp, p)?;
    if pj.is_zero() {
        return Ok(Step::Constraint(rest));
    }
    Ok(Step::Solved(expand(&(-rest * pj.recip()))))
}

/// Solve branch only: resonant indices are an error.
pub fn solve_coefficient(j: i64, exp: &SingularExpansion, p: &Params) -> Result<Expr, PainleveError> {
    match recursion_step(j, exp, p)? {
        Step::Solved(e) => Ok(e),
        Step::Constraint(_) => Err(PainleveError::ResonantIndex(j)),
    }
}

/// Run the recursion up to and including `jmax`, leaving resonant
/// coefficients as free symbols.  Returns the expansion and the constraints.
pub fn expand_to(
    jmax: usize,
    p: &Params,
    manifold: Manifold,
) -> Result<(SingularExpansion, BTreeMap<usize, Expr>), PainleveError> {
    let mut exp = SingularExpansion::start(p, manifold)?;
    let mut constraints = BTreeMap::new();
    for j in 1..=jmax {
        match recursion_step(j as i64, &exp, p)? {
            Step::Solved(e) => exp.coefficients.push(e),
            Step::Constraint(r) => {
                constraints.insert(j, r);
                exp.coefficients.push(Expr::sym(&coeff_base(j)));
            }
        }
    }
    Ok((exp, constraints))
}

/// `P(j)` as an exact polynomial in `j`, normalized by `b·φ_x³·φ_t`, and its
/// rational roots.
#[derive(Debug, Clone, Serialize)]
pub struct ResonancePolynomial {
    /// Normalized polynomial coefficients, lowest degree first.
    pub coefficients: Vec<String>,
    /// `P(j)` as an expression in `j` and the manifold jets.
    pub expression: String,
    pub roots: Vec<i64>,
    #[serde(skip)]
    pub poly: QPoly,
    #[serde(skip)]
    pub factor: Expr,
}

impl ResonancePolynomial {
    pub fn eval(&self, j: i64) -> Expr {
        Expr::num(self.poly.eval(&Rational::from_integer(j.into()))) * &self.factor
    }
}

/// Coefficient of `u_j` for a single `j ≥ 1` (lower coefficients other than
/// `u_0` do not affect it).
pub fn resonance_coefficient(j: usize, p: &Params, m: &Manifold) -> Result<Expr, PainleveError> {
    let (alpha, u0) = leading_order_on(p, m)?;
    let mut c = vec![u0];
    c.extend((1..j).map(|_| Expr::zero()));
    let uj = coeff_base(j);
    c.push(Expr::sym(&uj));
    let s = Series { lo: alpha, c };
    let e = equation_coefficient(&equation_terms(p), m, &s, j as i64 - 6)?;
    Ok(split_linear(&e, &uj).0)
}

pub fn resonance_polynomial(p: &Params) -> Result<ResonancePolynomial, PainleveError> {
    if p.b == Rational::from_integer(0.into()) {
        return Err(PainleveError::DegenerateBalance);
    }
    let m = Manifold::general();
    let factor = p.b() * m.phi("x").powi(3) * m.phi("t");
    let mut pts = Vec::new();
    for j in 1..=9usize {
        let c = expand(&(resonance_coefficient(j, p, &m)? * factor.recip()));
        let r = c.as_rational().cloned().ok_or_else(|| PainleveError::NonPolynomial(c.to_string()))?;
        pts.push((Rational::from_integer((j as i64).into()), r));
    }
    // interpolate through the first five points, verify on the rest
    let poly = lagrange(&pts[..5]);
    for (x, y) in &pts[5..] {
        if &poly.eval(x) != y {
            return Err(PainleveError::NonPolynomial(format!("value at j={x} off the quartic")));
        }
    }
    let roots: Vec<i64> = poly
        .rational_roots()
        .iter()
        .filter(|r| r.is_integer())
        .map(|r| num_traits::ToPrimitive::to_i64(r.numer()).unwrap())
        .collect();
    let j = Expr::sym("j");
    let expression = Expr::add(
        poly.coeffs.iter().enumerate().map(|(i, c)| Expr::num(c.clone()) * j.powi(i as i64)).collect(),
    ) * &factor;
    Ok(ResonancePolynomial {
        coefficients: poly.coeffs.iter().map(crate::expr::fmt_rational).collect(),
        expression: expression.to_string(),
        roots,
        poly,
        factor,
    })
}

fn lagrange(pts: &[(Rational, Rational)]) -> QPoly {
    let mut acc = QPoly::new(vec![]);
    for (i, (xi, yi)) in pts.iter().enumerate() {
        let mut basis = QPoly::new(vec![Rational::from_integer(1.into())]);
        let mut denom = Rational::from_integer(1.into());
        for (k, (xk, _)) in pts.iter().enumerate() {
            if k == i {
                continue;
            }
            basis = basis.mul(&QPoly::new(vec![-xk.clone(), Rational::from_integer(1.into())]));
            denom *= xi - xk;
        }
        let scale = yi / denom;
        let scaled = QPoly::new(basis.coeffs.iter().map(|c| c * &scale).collect());
        let n = acc.coeffs.len().max(scaled.coeffs.len());
        let mut sum = vec![Rational::from_integer(0.into()); n];
        for (k, c) in acc.coeffs.iter().enumerate() {
            sum[k] += c;
        }
        for (k, c) in scaled.coeffs.iter().enumerate() {
            sum[k] += c;
        }
        acc = QPoly::new(sum);
    }
    acc
}

/// Outcome of a compatibility check.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Compatibility {
    Satisfied { evidence: ZeroVerdict },
    Violated { witness: BTreeMap<String, f64>, value: f64 },
}

impl Compatibility {
    pub fn is_satisfied(&self) -> bool {
        matches!(self, Compatibility::Satisfied { .. })
    }
}

/// Decide a remainder expression with the two-tier zero test.
pub fn decide(constraint: &Expr, cfg: &ZeroTestConfig) -> Compatibility {
    match zero_test(constraint, cfg) {
        ZeroVerdict::Nonzero { witness, value } => Compatibility::Violated { witness, value },
        v => Compatibility::Satisfied { evidence: v },
    }
}

/// Compatibility at a resonance `j ∈ {4, 5, 6}` under the Kruskal gauge.
pub fn compatibility_check(j: i64, p: &Params, cfg: &ZeroTestConfig) -> Result<Compatibility, PainleveError> {
    if !(4..=6).contains(&j) {
        return Err(PainleveError::NotApplicable(j));
    }
    let (_, constraints) = expand_to(j as usize, p, Manifold::kruskal())?;
    let c = constraints.get(&(j as usize)).ok_or(PainleveError::NotApplicable(j))?;
    Ok(decide(c, cfg))
}

/// Compatibility with the lower coefficients supplied by the caller.
pub fn compatibility_check_with(
    j: i64,
    exp: &SingularExpansion,
    p: &Params,
    cfg: &ZeroTestConfig,
) -> Result<Compatibility, PainleveError> {
    if !(4..=6).contains(&j) {
        return Err(PainleveError::NotApplicable(j));
    }
    match recursion_step(j, exp, p)? {
        Step::Constraint(c) => Ok(decide(&c, cfg)),
        Step::Solved(_) => Err(PainleveError::NotApplicable(j)),
    }
}

/// Replace Kruskal jet symbols (`psi_J`, `u{m}_J`) by derivatives of concrete
/// functions of `(y, t)`.
pub fn instantiate_kruskal(e: &Expr, psi: &Expr, coeffs: &BTreeMap<usize, Expr>) -> Expr {
    let sp = Manifold::kruskal().space;
    let mut b = HashMap::new();
    for s in e.free_symbols() {
        if let Some((base, idx)) = sp.parse_jet(&s) {
            let f = if base == "psi" {
                psi.clone()
            } else {
                let m: usize = base[1..].parse().unwrap();
                match coeffs.get(&m) {
                    Some(f) => f.clone(),
                    None => continue,
                }
            };
            b.insert(s.clone(), crate::kpbbm::partial(&f, &idx));
        }
    }
    substitute(e, &b)
}

/// Term-level comparison between the derived remainder and a transcription of
/// the printed recursion.
#[derive(Debug, Clone, Serialize)]
pub struct CrossCheck {
    pub j: usize,
    pub manifold: ManifoldKind,
    pub agrees: bool,
    /// Terms of (derived − printed), in prefix syntax.
    pub difference_terms: Vec<String>,
}

/// The printed recursion's right-hand bracket `[…]`, transcribed verbatim;
/// `u0` and its jets are replaced by the leading-order formula.
pub fn printed_bracket(j: i64, p: &Params, m: &Manifold) -> Result<Expr, PainleveError> {
    let (_, u0) = leading_order_on(p, m)?;
    let kr = m.kind == ManifoldKind::Kruskal;
    let uu = |i: i64, w: &str| -> Result<Expr, PainleveError> {
        if i < 0 {
            return Ok(Expr::zero());
        }
        let idx = MultiIndex::parse(w).unwrap();
        if kr && idx.count(Dir::X) > 0 {
            return Ok(Expr::zero());
        }
        if i == 0 {
            return Ok(m.space().total_derivative_multi(&u0, &idx)?);
        }
        if i as usize >= j as usize {
            // not yet known: the printed bracket only involves u_{<j}
            return Ok(jet(&coeff_base(i as usize), &idx));
        }
        Ok(jet(&coeff_base(i as usize), &idx))
    };
    let f = |w: &str| m.phi(w);
    let n = |v: i64| Expr::int(v);
    let (a, b, k) = (p.a(), p.b(), p.k());
    let j5 = j - 5;
    let j45 = (j - 4) * (j - 5);
    let j345 = (j - 3) * (j - 4) * (j - 5);
    let mut lin = vec![
        uu(j - 4, "xt")?,
        n(j5) * uu(j - 3, "x")? * f("t"),
        n(j5) * uu(j - 3, "t")? * f("x"),
        n(j45) * uu(j - 2, "")? * f("x") * f("t"),
        n(j5) * uu(j - 3, "")? * f("xt"),
        uu(j - 4, "xx")?,
        n(2 * j5) * uu(j - 3, "x")? * f("x"),
        n(j45) * uu(j - 2, "")? * f("x").powi(2),
        n(j5) * uu(j - 3, "")? * f("xx"),
    ];
    let bb = vec![
        uu(j - 4, "xxxt")?,
        n(j5) * uu(j - 3, "xxx")? * f("t"),
        n(3 * j5) * uu(j - 3, "xxt")? * f("x"),
        n(3 * j45) * uu(j - 2, "xx")? * f("x") * f("t"),
        n(3 * j5) * uu(j - 3, "xx")? * f("xt"),
        n(3 * j45) * uu(j - 2, "xt")? * f("x").powi(2),
        n(3 * j345) * uu(j - 1, "x")? * f("x").powi(2) * f("t"),
        n(6 * j45) * uu(j - 2, "x")? * f("x") * f("xt"),
        n(2 * j5) * uu(j - 3, "xt")? * f("xx"),
        n(3 * j45) * uu(j - 2, "x")? * f("xx") * f("t"),
        n(3 * j5) * uu(j - 3, "x")? * f("xxt"),
        n(j345) * uu(j - 1, "t")? * f("x").powi(3),
        n(3 * j345) * uu(j - 1, "")? * f("x").powi(2) * f("xt"),
        n(3 * j45) * uu(j - 2, "t")? * f("x") * f("xx"),
        n(3 * j345) * uu(j - 1, "")? * f("x") * f("xx") * f("t"),
        n(3 * j45) * uu(j - 2, "")? * f("xt") * f("xx"),
        n(3 * j45) * uu(j - 2, "")? * f("x") * f("xxt"),
        n(j5) * uu(j - 3, "xt")? * f("xx"),
        n(j5) * uu(j - 3, "t")? * f("xxx"),
        n(j45) * uu(j - 2, "")? * f("xxx") * f("t"),
        n(j5) * uu(j - 3, "")? * f("xxxt"),
    ];
    lin.push(&b * Expr::add(bb));
    let kk = vec![
        uu(j - 4, "yy")?,
        n(2 * j5) * uu(j - 3, "y")? * f("y"),
        n(j45) * uu(j - 2, "")? * f("y").powi(2),
        n(j5) * uu(j - 3, "")? * f("yy"),
    ];
    lin.push(&k * Expr::add(kk));
    let mut sum = Vec::new();
    for r in 1..j {
        sum.push(uu(j - r, "x")? * uu(r - 2, "x")?);
        sum.push(n(j - r - 2) * uu(j - r, "")? * uu(r - 1, "x")? * f("x"));
        sum.push(n(r - 3) * uu(j - r, "x")? * uu(r - 1, "")? * f("x"));
        sum.push(n((j - r - 2) * (r - 2)) * uu(j - r, "")? * uu(r, "")? * f("x").powi(2));
        sum.push(uu(j - r, "")? * uu(r - 2, "xx")?);
        sum.push(n(2 * (r - 3)) * uu(j - r, "")? * uu(r - 1, "x")? * f("x"));
        sum.push(n((r - 2) * (r - 3)) * uu(j - r, "")? * uu(r, "")? * f("x").powi(2));
        sum.push(n(r - 3) * uu(j - r, "")? * uu(r - 1, "")? * f("xx"));
    }
    lin.push(Expr::int(2) * &a * Expr::add(sum));
    let tail = vec![
        uu(0, "x")? * uu(j - 2, "x")?,
        n(-2) * uu(0, "")? * uu(j - 1, "x")? * f("x"),
        n(j - 3) * uu(0, "x")? * uu(j - 1, "")? * f("x"),
        uu(0, "")? * uu(j - 2, "xx")?,
        n(2 * (j - 3)) * uu(0, "")? * uu(j - 1, "x")? * f("x"),
        n(j - 3) * uu(0, "")? * uu(j - 1, "")? * f("xx"),
    ];
    lin.push(Expr::int(2) * a * Expr::add(tail));
    Ok(Expr::add(lin))
}

/// Compare `R_j` (derived, lower coefficients symbolic) with the printed bracket.
pub fn cross_check(j: usize, p: &Params, m: &Manifold) -> Result<CrossCheck, PainleveError> {
    let (alpha, u0) = leading_order_on(p, m)?;
    let mut coeffs = vec![u0];
    coeffs.extend((1..j).map(|i| Expr::sym(&coeff_base(i))));
    let exp = SingularExpansion { alpha, coefficients: coeffs, manifold: m.clone() };
    let (_, rest) = recursion_parts(j, &exp, p)?;
    let printed = printed_bracket(j as i64, p, m)?;
    let diff = expand(&(rest - printed));
    Ok(CrossCheck { j, manifold: m.kind, agrees: diff.is_zero(), difference_terms: term_list(&diff) })
}

fn term_list(e: &Expr) -> Vec<String> {
    match e.node() {
        crate::expr::Node::Add(ts) => ts.iter().map(|t| t.to_string()).collect(),
        _ if e.is_zero() => vec![],
        _ => vec![e.to_string()],
    }
}

/// Machine-readable summary of the analysis.
#[derive(Debug, Clone, Serialize)]
pub struct PainleveReport {
    pub params: Params,
    pub alpha: i64,
    pub u0: String,
    pub resonance_polynomial: ResonancePolynomial,
    pub resonances: Vec<i64>,
    pub gauge: String,
    pub coefficients: BTreeMap<usize, String>,
    pub compatibility: BTreeMap<i64, Compatibility>,
    pub passes: bool,
}

/// Full analysis: leading order, resonances and compatibility at 4, 5, 6.
pub fn analyze(p: &Params, cfg: &ZeroTestConfig) -> Result<PainleveReport, PainleveError> {
    let (alpha, u0) = leading_order(p)?;
    let rp = resonance_polynomial(p)?;
    let (exp, constraints) = expand_to(J_MAX, p, Manifold::kruskal())?;
    let mut compat = BTreeMap::new();
    for (j, c) in &constraints {
        compat.insert(*j as i64, decide(c, cfg));
    }
    let coefficients =
        exp.coefficients.iter().enumerate().map(|(i, c)| (i, c.to_prefix())).collect::<BTreeMap<_, _>>();
    let passes = compat.values().all(|c| c.is_satisfied());
    Ok(PainleveReport {
        params: p.clone(),
        alpha,
        u0: u0.to_prefix(),
        resonances: rp.roots.clone(),
        resonance_polynomial: rp,
        gauge: "Kruskal: phi = x + psi(y,t), u_j = u_j(y,t)".into(),
        coefficients,
        compatibility: compat,
        passes,
    })
}

/// Numeric log-slope of |residual| against the distance `δ` to the manifold,
/// for the explicit truncated expansion `Σ_{j≤jmax} u_j φ^{j−2}` with a
/// concrete `ψ(y, t)`.  Returns the fitted exponent.
pub fn truncation_slope(p: &Params, psi: &Expr, jmax: usize, y0: f64, t0: f64) -> Result<f64, PainleveError> {
    let (exp, _) = expand_to(jmax, p, Manifold::kruskal())?;
    let phi = Expr::sym("x") + psi;
    let mut parts = Vec::new();
    let none = BTreeMap::new();
    for (j, c) in exp.coefficients.iter().enumerate() {
        let cj = instantiate_kruskal(c, psi, &none);
        parts.push(cj * phi.powi(j as i64 - 2));
    }
    let u = Expr::add(parts);
    let res = residual(&u, p);
    let psi0 = {
        let pt: crate::expr::Point = [("y".to_string(), y0), ("t".to_string(), t0)].into_iter().collect();
        crate::expr::eval_numeric(psi, &pt).map_err(|e| PainleveError::NonPolynomial(e.to_string()))?
    };
    let compiled = crate::expr::CompiledExpr::new(&res, &["x", "y", "t"])
        .map_err(|e| PainleveError::NonPolynomial(e.to_string()))?;
    let deltas = [0.08, 0.04, 0.02];
    let mut logs = Vec::new();
    for d in deltas {
        let v = compiled.eval(&[-psi0 + d, y0, t0]).map_err(|e| PainleveError::NonPolynomial(e.to_string()))?;
        logs.push((f64::ln(d), f64::ln(v.abs())));
    }
    let n = logs.len() as f64;
    let mx = logs.iter().map(|l| l.0).sum::<f64>() / n;
    let my = logs.iter().map(|l| l.1).sum::<f64>() / n;
    let sxy: f64 = logs.iter().map(|l| (l.0 - mx) * (l.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|l| (l.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

/// Substitute concrete rational values for named jet symbols.
pub fn eval_jets(e: &Expr, values: &[(&str, Rational)]) -> Expr {
    let mut b = HashMap::new();
    for (k, v) in values {
        b.insert(k.to_string(), Expr::num(v.clone()));
    }
    substitute(e, &b)
}
