use super::*;
use crate::expr::{is_identically_zero, rat};
use crate::kpbbm::residual;
use proptest::prelude::*;

fn p111() -> Params {
    Params::ints(1, 1, 1)
}

fn translations() -> [VectorField; 3] {
    let g = printed_generators(&p111());
    [g[1].clone(), g[2].clone(), g[3].clone()]
}

#[test]
fn translations_are_symmetries() {
    for v in translations() {
        assert!(symmetry_condition(&v, &p111()).unwrap().is_zero(), "{v}");
    }
}

#[test]
fn pure_shift_leaves_dispersionless_term() {
    let shift = VectorField::new(Expr::zero(), Expr::zero(), Expr::zero(), Expr::one());
    assert_eq!(symmetry_condition(&shift, &p111()).unwrap(), Expr::int(2) * u("xx"));
    let p = Params::ints(3, 2, -1);
    assert_eq!(symmetry_condition(&shift, &p).unwrap(), Expr::int(6) * u("xx"));
}

#[test]
fn admitted_scaling_is_a_symmetry() {
    for p in [p111(), Params::ints(6, 1, 1), Params::ints(-2, 3, 5)] {
        assert!(symmetry_condition(&scaling_generator(&p), &p).unwrap().is_zero());
    }
}

#[test]
fn printed_scaling_is_not_a_symmetry() {
    let g1 = &printed_generators(&p111())[0];
    let c = symmetry_condition(g1, &p111()).unwrap();
    assert!(!is_identically_zero(&c));
}

#[test]
fn zero_dispersion_in_y_reports_off_shell() {
    let p = Params::ints(1, 1, 0);
    match symmetry_condition(&translations()[0], &p) {
        Err(SymmetryError::KZero { off_shell }) => assert!(off_shell.is_zero()),
        other => panic!("{other:?}"),
    }
}

#[test]
fn ansatz_sizes() {
    assert_eq!(SymmetryAnsatz::new(1).unwrap().len(), 4 * 5);
    assert_eq!(SymmetryAnsatz::new(2).unwrap().len(), 4 * 15);
    assert_eq!(SymmetryAnsatz::new(3).unwrap().len(), 4 * 35);
    assert!(matches!(SymmetryAnsatz::new(0), Err(SymmetryError::BadDegree(0))));
    assert!(matches!(SymmetryAnsatz::new(4), Err(SymmetryError::BadDegree(4))));
}

#[test]
fn degree_one_basis() {
    let p = p111();
    let basis = solve_determining(&p, &SymmetryAnsatz::new(1).unwrap()).unwrap();
    assert_eq!(basis.len(), 4);
    for v in &basis {
        assert!(symmetry_condition(v, &p).unwrap().is_zero());
    }
    assert!(same_span(&basis, &admitted_generators(&p)).unwrap());
    // the printed list spans a different space
    assert_eq!(combined_rank(&[&basis, &printed_generators(&p)]).unwrap(), 5);
}

#[test]
fn degree_one_basis_other_coupling() {
    let p = Params::ints(6, 1, 1);
    let basis = solve_determining(&p, &SymmetryAnsatz::new(1).unwrap()).unwrap();
    let scaling = basis.iter().find(|v| !v.eta.is_zero()).unwrap();
    // η ∝ u + 1/12
    let expected = crate::expr::expand(&(Expr::int(-2) * (Expr::sym("u") + Expr::frac(1, 12))));
    assert_eq!(scaling.eta, expected);
}

#[test]
fn higher_degrees_add_nothing() {
    let p = p111();
    let mut prev = solve_determining(&p, &SymmetryAnsatz::new(1).unwrap()).unwrap();
    for d in 2..=3 {
        let cur = solve_determining(&p, &SymmetryAnsatz::new(d).unwrap()).unwrap();
        assert_eq!(cur.len(), 4, "degree {d}");
        assert!(span_contains(&cur, &prev).unwrap());
        prev = cur;
    }
}

#[test]
fn determining_matrix_kills_solutions() {
    let p = Params::ints(2, -1, 3);
    let a = SymmetryAnsatz::new(1).unwrap();
    let m = determining_matrix(&p, &a).unwrap();
    assert_eq!(m.cols, 20);
    assert_eq!(m.rank(), 16);
}

fn sample_solution() -> Expr {
    // traveling wave at a = b = k = λ = 1: ω = 2/5, amplitude −12/5
    let z = Expr::sym("x") - Expr::sym("y") - Expr::frac(2, 5) * Expr::sym("t");
    Expr::frac(-12, 5) * Expr::sech(z).powi(2)
}

const PTS: [[f64; 3]; 4] = [[0.3, -0.2, 0.1], [-0.7, 0.4, 0.5], [1.1, 0.9, -0.3], [0.05, 0.25, 0.75]];

#[test]
fn sample_solution_is_exact() {
    let r = residual(&sample_solution(), &p111());
    assert!(is_identically_zero(&r));
}

/// Independent route: transport an exact solution along the flow and measure
/// the order of the residual in ε.
#[test]
fn first_order_flow() {
    let p = p111();
    let sol = sample_solution();
    let order = |v: &VectorField| {
        let r1 = flow_residual(v, &sol, &p, 1e-3, &PTS).unwrap();
        let r2 = flow_residual(v, &sol, &p, 5e-4, &PTS).unwrap();
        (r1 / r2).log2()
    };
    for v in admitted_generators(&p) {
        let o = order(&v);
        assert!(o > 1.8 || flow_residual(&v, &sol, &p, 1e-3, &PTS).unwrap() < 1e-9, "{v}: order {o}");
    }
    let o = order(&printed_generators(&p)[0]);
    assert!((o - 1.0).abs() < 0.2, "printed scaling: order {o}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn degree_one_span_for_any_parameters(a in -4i64..=4, b in 1i64..=4, k in -4i64..=4) {
        prop_assume!(a != 0 && k != 0);
        let p = Params::new(rat(a, 1), rat(b, 2), rat(k, 1)).unwrap();
        let basis = solve_determining(&p, &SymmetryAnsatz::new(1).unwrap()).unwrap();
        prop_assert_eq!(basis.len(), 4);
        prop_assert!(same_span(&basis, &admitted_generators(&p)).unwrap());
        for v in &basis {
            prop_assert!(symmetry_condition(v, &p).unwrap().is_zero());
        }
    }
}
