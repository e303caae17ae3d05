use super::classify::adjoint_image_exact;
use super::*;
use crate::expr::{parse, rat};
use crate::symmetry::{admitted_generators, solve_determining, SymmetryAnsatz};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn r(n: i64) -> Rational {
    rat(n, 1)
}

fn e(s: &str) -> Expr {
    parse(s).unwrap()
}

#[test]
fn commutator_table_of_printed_fields() {
    let sc = reference_algebra();
    let expected = [
        ["0", "-G2", "2G3", "-G4"],
        ["G2", "0", "0", "0"],
        ["-2G3", "0", "0", "0"],
        ["G4", "0", "0", "0"],
    ];
    let table = sc.table(&BASIS_NAMES);
    for i in 0..4 {
        for j in 0..4 {
            assert_eq!(table[i][j], expected[i][j], "[G{}, G{}]", i + 1, j + 1);
        }
    }
}

#[test]
fn commutator_of_fields_directly() {
    let g = crate::symmetry::printed_generators(&crate::kpbbm::Params::ints(1, 1, 1));
    assert_eq!(commutator_fields(&g[0], &g[1]), g[1].scale(&Expr::int(-1)));
    assert_eq!(commutator_fields(&g[0], &g[2]), g[2].scale(&Expr::int(2)));
    assert_eq!(commutator_fields(&g[1], &g[3]), VectorField::zero());
}

#[test]
fn structure_constants_are_lie() {
    let sc = reference_algebra();
    assert!(sc.is_antisymmetric());
    assert_eq!(sc.jacobi_defect(), r(0));
}

#[test]
fn derived_series_fixtures() {
    assert_eq!(derived_series(&reference_algebra()), (vec![4, 3, 0], true));
    assert_eq!(derived_series(&StructureConstants::abelian(4)), (vec![4, 0], true));
    // sl2: [h,e] = 2e, [h,f] = −2f, [e,f] = h
    let sl2 = StructureConstants::from_ints(3, &[(0, 1, 1, 2), (0, 2, 2, -2), (1, 2, 0, 1)]);
    assert_eq!(sl2.jacobi_defect(), r(0));
    let (dims, solvable) = derived_series(&sl2);
    assert_eq!(dims, vec![3, 3]);
    assert!(!solvable);
}

#[test]
fn solved_symmetries_close() {
    let p = crate::kpbbm::Params::ints(1, 1, 1);
    let basis = solve_determining(&p, &SymmetryAnsatz::new(1).unwrap()).unwrap();
    let sc = StructureConstants::from_fields(&basis).unwrap();
    assert_eq!(sc.jacobi_defect(), r(0));
    let adm = StructureConstants::from_fields(&admitted_generators(&p)).unwrap();
    // the scaling that is actually admitted commutes with ∂x
    assert_eq!(derived_series(&adm), (vec![4, 2, 0], true));
}

#[test]
fn adjoint_matrices_match_printed() {
    let sc = reference_algebra();
    let eps = Expr::sym("eps");
    let a = |i| adjoint_matrix(&sc, i, &eps).unwrap().entries;
    let printed = |rows: [[&str; 4]; 4]| -> Vec<Vec<Expr>> { rows.iter().map(|r| r.iter().map(|s| e(s)).collect()).collect() };
    assert_eq!(
        a(1),
        printed([
            ["1", "0", "0", "0"],
            ["0", "(exp eps)", "0", "0"],
            ["0", "0", "(exp (* -2 eps))", "0"],
            ["0", "0", "0", "(exp eps)"]
        ])
    );
    assert_eq!(
        a(2),
        printed([["1", "(* -1 eps)", "0", "0"], ["0", "1", "0", "0"], ["0", "0", "1", "0"], ["0", "0", "0", "1"]])
    );
    assert_eq!(
        a(3),
        printed([["1", "0", "(* 2 eps)", "0"], ["0", "1", "0", "0"], ["0", "0", "1", "0"], ["0", "0", "0", "1"]])
    );
    assert_eq!(
        a(4),
        printed([["1", "0", "0", "(* -1 eps)"], ["0", "1", "0", "0"], ["0", "0", "1", "0"], ["0", "0", "0", "1"]])
    );
    assert!(matches!(adjoint_matrix(&sc, 5, &eps), Err(LieError::BadIndex(5, 4))));
}

#[test]
fn adjoint_table_entries() {
    let sc = reference_algebra();
    let eps = Expr::sym("eps");
    // Ad_{exp(εΓ₁)}Γ₃ = e^{−2ε}Γ₃
    let a1 = adjoint_matrix(&sc, 1, &eps).unwrap();
    assert_eq!(a1.entries[2], vec![Expr::zero(), Expr::zero(), e("(exp (* -2 eps))"), Expr::zero()]);
    // Ad_{exp(εΓ₃)}Γ₁ = Γ₁ + 2εΓ₃
    let a3 = adjoint_matrix(&sc, 3, &eps).unwrap();
    assert_eq!(a3.entries[0], vec![Expr::one(), Expr::zero(), e("(* 2 eps)"), Expr::zero()]);
    // ε = 0 is the identity
    let a2 = adjoint_matrix(&sc, 2, &Expr::zero()).unwrap();
    assert_eq!(a2, AdjointMatrix::identity(4));
}

#[test]
fn adjoint_is_a_one_parameter_group() {
    let sc = reference_algebra();
    let (x, y) = (Expr::sym("x"), Expr::sym("y"));
    for i in 1..=4 {
        let lhs = adjoint_matrix(&sc, i, &x).unwrap().mul(&adjoint_matrix(&sc, i, &y).unwrap());
        let rhs = adjoint_matrix(&sc, i, &(&x + &y)).unwrap();
        assert_eq!(lhs, rhs, "i={i}");
    }
}

#[test]
fn closed_form_matches_lie_series() {
    let sc = reference_algebra();
    for i in 1..=4 {
        for eps in [-0.7, 0.3, 1.1] {
            let closed = adjoint_matrix(&sc, i, &Expr::sym("eps")).unwrap().eval(&[("eps", eps)]);
            let series = lie_series_numeric(&sc, i, eps, 40);
            for rr in 0..4 {
                for cc in 0..4 {
                    assert!((closed[rr][cc] - series[rr][cc]).abs() < 1e-12, "i={i} ε={eps}");
                }
            }
        }
    }
}

#[test]
fn global_adjoint_matches_printed() {
    let g = global_adjoint(&reference_algebra()).unwrap();
    let printed = [
        ["1", "(* -1 eps2)", "(* 2 eps3)", "(* -1 eps4)"],
        ["0", "(exp eps1)", "0", "0"],
        ["0", "0", "(exp (* -2 eps1))", "0"],
        ["0", "0", "0", "(exp eps1)"],
    ];
    for i in 0..4 {
        for j in 0..4 {
            assert_eq!(g.entries[i][j], e(printed[i][j]), "({i},{j})");
        }
    }
    // transformation equation written out
    let a: Vec<Expr> = ["a1", "a2", "a3", "a4"].iter().map(|s| Expr::sym(s)).collect();
    let img = g.apply(&a);
    let expected = [
        "a1",
        "(+ (* -1 eps2 a1) (* (exp eps1) a2))",
        "(+ (* 2 eps3 a1) (* (exp (* -2 eps1)) a3))",
        "(+ (* -1 eps4 a1) (* (exp eps1) a4))",
    ];
    for (i, s) in expected.iter().enumerate() {
        assert_eq!(img[i], crate::expr::expand(&e(s)));
    }
    let zero = g.substitute(&[("eps1", Expr::zero()), ("eps2", Expr::zero()), ("eps3", Expr::zero()), ("eps4", Expr::zero())]);
    assert_eq!(zero, AdjointMatrix::identity(4));
}

#[test]
fn exact_adjoint_images() {
    // ε₁ = log 2
    let img = adjoint_image_exact(&[r(0), r(1), r(1), r(0)], &r(2), [&r(0), &r(0), &r(0)]);
    assert_eq!(img, [r(0), r(2), rat(1, 4), r(0)]);
    // Case 1 parameters send Γ₁ + a₂Γ₂ + a₃Γ₃ + a₄Γ₄ to Γ₁
    let (a2, a3, a4) = (rat(3, 7), r(-5), rat(2, 3));
    let img = adjoint_image_exact(&[r(1), a2.clone(), a3.clone(), a4.clone()], &r(1), [&a2, &(-a3 / r(2)), &a4]);
    assert_eq!(img, [r(1), r(0), r(0), r(0)]);
}

#[test]
fn first_coordinate_is_invariant() {
    let g = global_adjoint(&reference_algebra()).unwrap();
    for i in 0..4 {
        assert_eq!(g.entries[i][0], if i == 0 { Expr::one() } else { Expr::zero() });
    }
}

#[test]
fn invariants_full_and_sliced() {
    let sc = reference_algebra();
    let full = invariants(&sc, None, 4);
    assert_eq!(full.generators, vec![Expr::sym("a1")]);
    assert_eq!(full.basic, vec![Expr::sym("a1")]);

    let sliced = invariants(&sc, Some(r(0)), 4);
    let d1 = e("(* (pow a2 2) a3)");
    let d2 = e("(* (pow a4 2) a3)");
    assert!(sliced.generators.contains(&d1) && sliced.generators.contains(&d2));
    assert_eq!(sliced.basic, vec![d1, d2]);
    // the mixed invariant a₂a₃a₄ (sign information) is also polynomial
    assert!(sliced.generators.contains(&e("(* a2 a3 a4)")));
    assert_eq!(sliced.generators.len(), 3);

    let off = invariants(&sc, Some(r(1)), 3);
    assert!(off.generators.is_empty());
}

#[test]
fn sliced_invariants_constant_on_orbits() {
    let g = global_adjoint(&reference_algebra()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let a = [0.0, rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
        let eps: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let b = apply_global(&g, &eps, &a);
        let d1 = |v: &[f64]| v[1] * v[1] * v[2];
        let d2 = |v: &[f64]| v[3] * v[3] * v[2];
        assert!((d1(&a) - d1(&b)).abs() <= 1e-12);
        assert!((d2(&a) - d2(&b)).abs() <= 1e-12);
    }
}

#[test]
fn classify_worked_cases() {
    let c = classify(&[r(1), r(5), r(-3), r(2)]).unwrap();
    assert_eq!(c.tag, Tag::G1);
    assert_eq!(c.epsilons_exact, Some([r(0), r(5), rat(3, 2), r(2)]));
    assert_eq!(c.orbit_residual, 0.0);

    let c = classify(&[r(0), r(0), r(1), r(1)]).unwrap();
    assert_eq!((c.tag, c.case.as_str()), (Tag::G3PlusG4, "2.2.1"));

    let c = classify(&[r(0), r(1), r(1), r(1)]).unwrap();
    assert_eq!((c.tag, c.c.clone()), (Tag::G2PlusG3PlusSqrtCG4, Some(r(1))));
    assert!(c.orbit_residual < 1e-12);

    let c = classify(&[r(0), r(-2), r(0), r(0)]).unwrap();
    assert_eq!((c.tag, c.branch_representative.as_str(), c.case.as_str()), (Tag::G2, "-G2", "2.3.2(ii)"));
    assert!(c.orbit_residual < 1e-12);

    assert!(matches!(classify(&[r(0), r(0), r(0), r(0)]), Err(LieError::ZeroElement)));
}

#[test]
fn classify_reports_unreachable_representatives() {
    // a₄/a₂ is invariant when a₁ = 0, so the sign of the Γ₄ part survives
    let c = classify(&[r(0), r(1), r(1), r(-1)]).unwrap();
    assert_eq!(c.orbit_parameter, Some(r(-1)));
    assert!((c.orbit_residual - 2.0).abs() < 1e-12);
    // Γ₂ + 3Γ₄ cannot be scaled to Γ₂ ± Γ₄
    let c = classify(&[r(0), r(1), r(0), r(3)]).unwrap();
    assert_eq!(c.tag, Tag::G2PlusG4);
    assert!((c.orbit_residual - 2.0).abs() < 1e-12);
}

#[test]
fn classify_report_serializes() {
    let c = classify(&[r(0), r(2), r(8), r(-1)]).unwrap();
    let js = serde_json::to_value(&c).unwrap();
    assert_eq!(js["input"][2], "8");
    assert_eq!(js["c"], "1/4");
    assert!(js["orbit_residual"].is_number());
}

fn small_rat() -> impl Strategy<Value = Rational> {
    prop_oneof![Just(r(0)), (-9i64..=9, 1i64..=5).prop_map(|(n, d)| rat(n, d))]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn classification_is_orbit_invariant(
        a in proptest::array::uniform4(small_rat()),
        q in 1i64..=4, qd in 1i64..=3,
        e2 in -5i64..=5, e3 in -5i64..=5, e4 in -5i64..=5,
    ) {
        prop_assume!(a.iter().any(|x| *x != r(0)));
        let before = classify(&a).unwrap();
        let moved = adjoint_image_exact(&a, &rat(q, qd), [&r(e2), &r(e3), &r(e4)]);
        let after = classify(&moved).unwrap();
        prop_assert_eq!(before.tag, after.tag);
        match (&before.c, &after.c) {
            (Some(x), Some(y)) => prop_assert!((rat_to_f64(x) - rat_to_f64(y)).abs() < 1e-10),
            (None, None) => {}
            _ => prop_assert!(false, "c presence differs"),
        }
        prop_assert!((before.orbit_residual - after.orbit_residual).abs() < 1e-9);
    }

    #[test]
    fn adjoint_preserves_brackets(i in 1usize..=4, eps in -3i64..=3) {
        // Ad is an automorphism: [xA, yA] = [x, y]A for nilpotent generators
        prop_assume!(i > 1);
        let sc = reference_algebra();
        let m = adjoint_matrix(&sc, i, &Expr::int(eps)).unwrap();
        let to_q = |v: Vec<Expr>| -> Vec<Rational> { v.iter().map(|x| x.as_rational().unwrap().clone()).collect() };
        for x in 0..4 {
            for y in 0..4 {
                let ex: Vec<Expr> = (0..4).map(|k| Expr::int((k == x) as i64)).collect();
                let ey: Vec<Expr> = (0..4).map(|k| Expr::int((k == y) as i64)).collect();
                let lhs = sc.bracket(&to_q(m.apply(&ex)), &to_q(m.apply(&ey)));
                let b: Vec<Expr> = sc.bracket(&to_q(ex.clone()), &to_q(ey.clone())).into_iter().map(Expr::num).collect();
                prop_assert_eq!(lhs, to_q(m.apply(&b)));
            }
        }
    }
}
