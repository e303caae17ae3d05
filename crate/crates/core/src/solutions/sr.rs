//! Plane solitary waves of the three similarity reductions.
//!
//! Each reduction `u = F(α, β)` admits profiles `F = f(α + λβ)`, i.e. plane
//! waves along `c = ∇α + λ∇β`. The profile equation along `c` is computed by
//! [`phase_ode`], and its `sech²` solution by [`sech2_constants`]. The
//! commonly quoted closed forms are kept verbatim in [`printed_sr`] and
//! attached as a [`Discrepancy`] whenever they differ from the verified wave.

use std::collections::BTreeMap;

use crate::expr::{expand, is_identically_zero, rat, zero_test, Expr, Rational, ZeroTestConfig};
use crate::kpbbm::{residual, Params, Reduction};

use super::{phase_ode, rtext, sech2_constants, Discrepancy, Family, SolutionError, SolutionSpec, WaveShape};

fn reduction(f: Family) -> Result<Reduction, SolutionError> {
    match f {
        Family::Sr1 => Ok(Reduction::R1),
        Family::Sr2 => Ok(Reduction::R2),
        Family::Sr3 => Ok(Reduction::R3),
        other => Err(SolutionError::TermStructure(format!("{other} is not a similarity-reduction family"))),
    }
}

fn invalid(lambda: &Rational, reason: &str) -> SolutionError {
    SolutionError::InvalidLambda { lambda: rtext(lambda), reason: reason.to_string() }
}

pub(super) fn phase_direction(r: Reduction, lambda: &Rational) -> [Rational; 3] {
    let (ga, gb) = r.gradients();
    std::array::from_fn(|i| Rational::from_integer(ga[i].into()) + lambda * Rational::from_integer(gb[i].into()))
}

/// The closed forms as usually quoted: `(amplitude, 4κ², direction)` with the
/// wave `A sech²(½√(4κ²) · direction·(x, y, t))`.
pub fn printed_sr(family: Family, lambda: &Rational, p: &Params) -> Result<(Rational, Rational, [Rational; 3]), SolutionError> {
    let (l, a, b, k) = (lambda.clone(), p.a.clone(), p.b.clone(), p.k.clone());
    let one = rat(1, 1);
    let two = rat(2, 1);
    let three = rat(3, 1);
    Ok(match family {
        Family::Sr1 => {
            let m = (&l - &one) * (&k * &l - &k - &one);
            (&three * &m / (&two * &a), &m / (&b * &l), [one.clone(), &l - &one, -l.clone()])
        }
        Family::Sr2 => {
            let m = &two + &k + &l - &l * &l;
            let s = &one + &l;
            (
                -(&three * &m) / (&two * &a * &s * &s),
                &m / (&b * &l * &s * &s * &s),
                [s.clone(), -one.clone(), -l.clone()],
            )
        }
        Family::Sr3 => {
            let m = &k * &l * &l - &l;
            (&three * &m / (&two * &a), &m / (&b * (&l + &one)), [one.clone(), l.clone(), -(&l + &one)])
        }
        other => return Err(SolutionError::TermStructure(format!("{other} has no printed similarity form"))),
    })
}

fn sech2_wave(amp: Expr, radicand: &Rational, dir: &[Rational; 3]) -> WaveShape {
    let kappa = Expr::frac(1, 2) * Expr::sqrt(Expr::num(radicand.clone()));
    WaveShape {
        background: Expr::zero(),
        amplitude: amp,
        phase: std::array::from_fn(|i| expand(&(&kappa * Expr::num(dir[i].clone())))),
        offset: Expr::zero(),
    }
}

/// Build the plane solitary wave of reduction `family` with slope `λ`.
///
/// Returns the verified wave; if the printed closed form differs from it, the
/// printed form and its residual verdict are attached as a discrepancy.
pub fn build_sr_solution(family: Family, lambda: &Rational, p: &Params) -> Result<SolutionSpec, SolutionError> {
    let r = reduction(family)?;
    let zero = Rational::from_integer(0.into());
    if p.b == zero {
        return Err(SolutionError::ZeroDispersion);
    }
    if matches!(family, Family::Sr2 | Family::Sr3) && *lambda == rat(-1, 1) {
        return Err(invalid(lambda, "λ = −1 is excluded for this reduction"));
    }
    let dir = phase_direction(r, lambda);
    let c: [Expr; 3] = std::array::from_fn(|i| Expr::num(dir[i].clone()));
    let ode = phase_ode(&c, p)?;
    let q = ode.fourth.as_rational().cloned().expect("rational phase");
    let n = ode.quadratic.as_rational().cloned().expect("rational phase");
    if q == zero {
        return Err(invalid(lambda, "the phase direction carries no dispersion"));
    }
    if n == zero {
        return Err(invalid(lambda, "the phase direction carries no nonlinearity"));
    }

    let mut free = BTreeMap::new();
    free.insert("lambda".to_string(), rtext(lambda));
    let mut notes = Vec::new();
    let l = ode.second.as_rational().cloned().expect("rational phase");
    let (amp, kappa2) = sech2_constants(&ode);
    let radicand = kappa2.as_rational().cloned().expect("rational") * rat(4, 1);
    free.insert("width_radicand".to_string(), rtext(&radicand));

    let (expression, wave) = if l == zero {
        notes.push("the linear coefficient vanishes; the wave degenerates to u ≡ 0".to_string());
        (Expr::zero(), None)
    } else {
        if radicand <= zero {
            return Err(SolutionError::ComplexWidth(rtext(&radicand)));
        }
        let w = sech2_wave(amp, &radicand, &dir);
        (w.expression(), Some(w))
    };

    let (pa, pr, pdir) = printed_sr(family, lambda, p)?;
    let printed_expr = if pr > zero {
        Some(sech2_wave(Expr::num(pa.clone()), &pr, &pdir).expression())
    } else if pa == zero {
        Some(Expr::zero())
    } else {
        None
    };
    let agrees = printed_expr.as_ref().map(|e| is_identically_zero(&(e - &expression))).unwrap_or(false);
    let discrepancy = if agrees {
        None
    } else {
        let verdict = printed_expr.as_ref().map(|e| zero_test(&residual(e, p), &ZeroTestConfig::default()));
        let note = match &printed_expr {
            Some(_) => format!(
                "printed form (amplitude {}, width radicand {}) differs from the verified wave (amplitude {}, radicand {})",
                rtext(&pa),
                rtext(&pr),
                wave.as_ref().map(|w| w.amplitude.to_string()).unwrap_or_else(|| "0".into()),
                rtext(&radicand)
            ),
            None => format!("printed width radicand {} is not positive", rtext(&pr)),
        };
        Some(Discrepancy { printed_expression: printed_expr, printed_amplitude: Expr::num(pa), printed_verdict: verdict, note })
    };

    Ok(SolutionSpec { family, params: p.clone(), free, expression, wave, discrepancy, notes })
}
