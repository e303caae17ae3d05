//! One-dimensional optimal system of the four-dimensional algebra.
//!
//! The decision tree branches on the invariant `a₁` and, when `a₁ = 0`, on
//! `Δ₁ = a₂²a₃` and `Δ₂ = a₄²a₃`.  For every input the classifier records the
//! adjoint parameters `ε` and the projective scale `λ` it used, and measures
//! how close `λ · (a · A(ε))` lands to the chosen representative — the orbit
//! residual — through the global adjoint matrix (not through the formulas
//! used to pick `ε`).

use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use crate::expr::{rat_to_f64, Expr, Rational};

use super::{global_adjoint, reference_algebra, AdjointMatrix, LieError};

/// The ten classes of the optimal list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Tag {
    G1,
    G2,
    G3,
    G4,
    G2PlusG4,
    G2MinusG4,
    G3PlusG4,
    G3MinusG4,
    G2PlusG3PlusSqrtCG4,
    MinusG2PlusG3PlusSqrtCG4,
}

impl Tag {
    pub const ALL: [Tag; 10] = [
        Tag::G1,
        Tag::G2,
        Tag::G3,
        Tag::G4,
        Tag::G2PlusG4,
        Tag::G2MinusG4,
        Tag::G3PlusG4,
        Tag::G3MinusG4,
        Tag::G2PlusG3PlusSqrtCG4,
        Tag::MinusG2PlusG3PlusSqrtCG4,
    ];

    /// Coordinates of the representative (`c` only used by the last two).
    pub fn coords(self, c: f64) -> [f64; 4] {
        let s = c.sqrt();
        match self {
            Tag::G1 => [1.0, 0.0, 0.0, 0.0],
            Tag::G2 => [0.0, 1.0, 0.0, 0.0],
            Tag::G3 => [0.0, 0.0, 1.0, 0.0],
            Tag::G4 => [0.0, 0.0, 0.0, 1.0],
            Tag::G2PlusG4 => [0.0, 1.0, 0.0, 1.0],
            Tag::G2MinusG4 => [0.0, 1.0, 0.0, -1.0],
            Tag::G3PlusG4 => [0.0, 0.0, 1.0, 1.0],
            Tag::G3MinusG4 => [0.0, 0.0, 1.0, -1.0],
            Tag::G2PlusG3PlusSqrtCG4 => [0.0, 1.0, 1.0, s],
            Tag::MinusG2PlusG3PlusSqrtCG4 => [0.0, -1.0, 1.0, s],
        }
    }

    pub fn has_parameter(self) -> bool {
        matches!(self, Tag::G2PlusG3PlusSqrtCG4 | Tag::MinusG2PlusG3PlusSqrtCG4)
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tag::G1 => "G1",
            Tag::G2 => "G2",
            Tag::G3 => "G3",
            Tag::G4 => "G4",
            Tag::G2PlusG4 => "G2+G4",
            Tag::G2MinusG4 => "G2-G4",
            Tag::G3PlusG4 => "G3+G4",
            Tag::G3MinusG4 => "G3-G4",
            Tag::G2PlusG3PlusSqrtCG4 => "G2+G3+sqrt(c)G4",
            Tag::MinusG2PlusG3PlusSqrtCG4 => "-G2+G3+sqrt(c)G4",
        };
        f.write_str(s)
    }
}

/// Classification of one element.
#[derive(Debug, Clone, Serialize)]
pub struct OptimalRepresentative {
    #[serde(serialize_with = "ser_rats")]
    pub input: Vec<Rational>,
    pub tag: Tag,
    /// Branch of the decision tree, e.g. `"2.3.2(viii)"`.
    pub case: String,
    /// Signed representative named by the branch before projective
    /// identification (e.g. `-G2` for a class listed as `G2`).
    pub branch_representative: String,
    #[serde(serialize_with = "ser_opt_rat")]
    pub c: Option<Rational>,
    /// Orbit invariant not captured by the tag: `a₄/|a₂|` after normalization
    /// (Subcase 2.1) or `a₄/a₂` (Subsubcase 2.3.2 with both nonzero).
    #[serde(serialize_with = "ser_opt_rat")]
    pub orbit_parameter: Option<Rational>,
    pub epsilons: [f64; 4],
    #[serde(skip)]
    pub epsilons_exact: Option<[Rational; 4]>,
    /// Projective scale applied to the transformed element.
    pub scale: f64,
    /// `scale · (input · A(ε))`.
    pub reached: [f64; 4],
    pub orbit_residual: f64,
}

fn ser_rats<S: serde::Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(crate::expr::fmt_rational))
}

fn ser_opt_rat<S: serde::Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_some(&crate::expr::fmt_rational(r)),
        None => s.serialize_none(),
    }
}

fn global() -> &'static AdjointMatrix {
    static G: OnceLock<AdjointMatrix> = OnceLock::new();
    G.get_or_init(|| global_adjoint(&reference_algebra()).expect("closed-form adjoint"))
}

fn sgn(r: &Rational) -> i64 {
    use num_traits::Signed;
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

fn abs(r: &Rational) -> Rational {
    use num_traits::Signed;
    r.abs()
}

fn zero() -> Rational {
    Rational::from_integer(0.into())
}

/// `min_{s=±1} ‖s·reached − rep‖_∞` (one-dimensional subalgebras are projective).
pub fn orbit_residual(reached: &[f64; 4], rep: &[f64; 4]) -> f64 {
    [1.0, -1.0]
        .iter()
        .map(|s| reached.iter().zip(rep).map(|(r, p)| (s * r - p).abs()).fold(0.0, f64::max))
        .fold(f64::INFINITY, f64::min)
}

/// Classify `Σ a_i Γ_i` into the optimal list.
pub fn classify(a: &[Rational; 4]) -> Result<OptimalRepresentative, LieError> {
    if a.iter().all(|x| *x == zero()) {
        return Err(LieError::ZeroElement);
    }
    let [a1, a2, a3, a4] = a;
    let af: Vec<f64> = a.iter().map(rat_to_f64).collect();
    let mut c = None;
    let mut orbit_parameter = None;
    let mut eps_exact = None;
    let (tag, case, branch, eps, scale): (Tag, String, String, [f64; 4], f64);

    if *a1 != zero() {
        // Case 1: scale to a₁ = 1, then ε = (0, a₂, −a₃/2, a₄)
        let (b2, b3, b4) = (a2 / a1, a3 / a1, a4 / a1);
        let ex = [zero(), b2, -b3 / Rational::from_integer(2.into()), b4];
        eps = [0.0, rat_to_f64(&ex[1]), rat_to_f64(&ex[2]), rat_to_f64(&ex[3])];
        eps_exact = Some(ex);
        scale = rat_to_f64(&(Rational::from_integer(1.into()) / a1));
        tag = Tag::G1;
        case = "1".into();
        branch = "G1".into();
    } else {
        let d1 = a2 * a2 * a3;
        let d2 = a4 * a4 * a3;
        if d1 != zero() {
            // Subcase 2.1: λ e^{ε₁}|a₂| = 1, λ e^{−2ε₁}|a₃| = 1 with sign(λ) = sign(a₃)
            let sigma = sgn(a3) as f64;
            let e1 = (rat_to_f64(&abs(a3)) / rat_to_f64(&abs(a2))).ln() / 3.0;
            let mu = (-e1).exp() / rat_to_f64(&abs(a2));
            eps = [e1, 0.0, 0.0, 0.0];
            scale = sigma * mu;
            let cc = (a4 * a4) / (a2 * a2);
            orbit_parameter = Some(Rational::from_integer(sgn(a3).into()) * a4 / abs(a2));
            c = Some(cc);
            if sgn(a2) * sgn(a3) > 0 {
                tag = Tag::G2PlusG3PlusSqrtCG4;
                case = "2.1.1".into();
                branch = "G2+G3+sqrt(c)G4".into();
            } else {
                tag = Tag::MinusG2PlusG3PlusSqrtCG4;
                case = "2.1.2".into();
                branch = "-G2+G3+sqrt(c)G4".into();
            }
        } else if d2 != zero() {
            // Subcase 2.2: a₂ = 0, a₃a₄ ≠ 0
            let sigma = sgn(a3) as f64;
            let e1 = (rat_to_f64(&abs(a3)) / rat_to_f64(&abs(a4))).ln() / 3.0;
            let mu = (-e1).exp() / rat_to_f64(&abs(a4));
            eps = [e1, 0.0, 0.0, 0.0];
            scale = sigma * mu;
            if sgn(a3) * sgn(a4) > 0 {
                tag = Tag::G3PlusG4;
                case = "2.2.1".into();
                branch = "G3+G4".into();
            } else {
                tag = Tag::G3MinusG4;
                case = "2.2.2".into();
                branch = "G3-G4".into();
            }
        } else if *a3 != zero() {
            // Subsubcase 2.3.1
            eps = [0.0; 4];
            scale = 1.0 / af[2].abs();
            tag = Tag::G3;
            case = "2.3.1".into();
            branch = if sgn(a3) > 0 { "G3".into() } else { "-G3".into() };
        } else {
            // Subsubcase 2.3.2: a₃ = 0, only projective scaling is used
            eps = [0.0; 4];
            let (s2, s4) = (sgn(a2), sgn(a4));
            scale = if s2 != 0 { 1.0 / af[1].abs() } else { 1.0 / af[3].abs() };
            if s2 != 0 && s4 != 0 {
                orbit_parameter = Some(a4 / a2);
            }
            let (t, roman, b) = match (s2, s4) {
                (1, 0) => (Tag::G2, "i", "G2"),
                (-1, 0) => (Tag::G2, "ii", "-G2"),
                (0, 1) => (Tag::G4, "iii", "G4"),
                (0, -1) => (Tag::G4, "iv", "-G4"),
                (1, 1) => (Tag::G2PlusG4, "v", "G2+G4"),
                (1, -1) => (Tag::G2MinusG4, "vi", "G2-G4"),
                (-1, 1) => (Tag::G2MinusG4, "vii", "-G2+G4"),
                (-1, -1) => (Tag::G2MinusG4, "viii", "G2-G4"),
                _ => unreachable!("nonzero element"),
            };
            tag = t;
            case = format!("2.3.2({roman})");
            branch = b.into();
        }
    }

    let moved = super::apply_global(global(), &eps, &af);
    let reached = [scale * moved[0], scale * moved[1], scale * moved[2], scale * moved[3]];
    let cf = c.as_ref().map(rat_to_f64).unwrap_or(0.0);
    let orbit_residual = orbit_residual(&reached, &tag.coords(cf));
    Ok(OptimalRepresentative {
        input: a.to_vec(),
        tag,
        case,
        branch_representative: branch,
        c,
        orbit_parameter,
        epsilons: eps,
        epsilons_exact: eps_exact,
        scale,
        reached,
        orbit_residual,
    })
}

/// Exact image `a · A(ε)` for rational `ε₂..ε₄` and `e^{ε₁} = q > 0`.
pub fn adjoint_image_exact(a: &[Rational; 4], q: &Rational, eps: [&Rational; 3]) -> [Rational; 4] {
    let g = global();
    let vals: Vec<(&str, Expr)> = vec![
        ("eps2", Expr::num(eps[0].clone())),
        ("eps3", Expr::num(eps[1].clone())),
        ("eps4", Expr::num(eps[2].clone())),
    ];
    let m = g.substitute(&vals);
    // replace exp(m·eps1) by q^m
    let m = AdjointMatrix {
        entries: m
            .entries
            .iter()
            .map(|row| row.iter().map(|e| crate::expr::expand(&replace_exp(e, q))).collect())
            .collect(),
    };
    let row: Vec<Expr> = a.iter().map(|x| Expr::num(x.clone())).collect();
    let out = m.apply(&row);
    let r = |e: &Expr| e.as_rational().cloned().expect("rational image");
    [r(&out[0]), r(&out[1]), r(&out[2]), r(&out[3])]
}

fn replace_exp(e: &Expr, q: &Rational) -> Expr {
    use crate::expr::Node;
    e.map_bottom_up(&mut |n: &Expr| match n.node() {
        Node::Exp(arg) => {
            // arg = m·eps1 with integer m
            let m = crate::expr::differentiate(arg, "eps1");
            m.as_rational()
                .filter(|r| r.is_integer())
                .and_then(|r| num_traits::ToPrimitive::to_i64(r.numer()))
                .map(|m| Expr::num(q.clone()).powi(m))
        }
        _ => None,
    })
}
