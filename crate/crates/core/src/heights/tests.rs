use std::f64::consts::LN_2;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use super::*;
use crate::arith::rat;
use crate::forms::{automorphism_group, roots, Matrix2};

fn q(c: &[i64]) -> QForm {
    QForm::from_integers(c).unwrap()
}

fn power(d: usize, a0: BigRational) -> QForm {
    let mut c = vec![BigRational::zero(); d + 1];
    c[0] = -a0;
    c[d] = rat(1, 1);
    QForm::new(c).unwrap()
}

fn cfg() -> HeightConfig {
    HeightConfig::default()
}

#[test]
fn naive_examples() {
    assert_eq!(naive_height(&q(&[-1, 0, 0, 1])).unwrap().value(), 0.0);
    assert!((naive_height(&q(&[-5, 0, 3, 2])).unwrap().value() - 5f64.ln()).abs() < 1e-15);
    assert!(naive_height(&q(&[-2, 0, 0, 2])).unwrap().value().abs() < 1e-15);
}

#[test]
fn chow_height_examples() {
    assert!(chow_height(&q(&[0, 1, 0]), &cfg()).unwrap().abs() < 1e-15);
    assert!((chow_height(&q(&[1, 0, 1]), &cfg()).unwrap() - LN_2).abs() < 1e-14);
    for d in 2..=10 {
        for a0 in [rat(1, 1), rat(2, 1), rat(-3, 1), rat(1, 4)] {
            let expect = d as f64 / 2.0 * (crate::scalar::rational_to_f64(&a0).abs().powf(2.0 / d as f64)).ln_1p();
            for precision in [Precision::Double, Precision::Extended] {
                let c = HeightConfig { precision, ..cfg() };
                let got = chow_height(&power(d, a0.clone()), &c).unwrap();
                assert!((got - expect).abs() < 1e-9, "d={d} a0={a0} {got} {expect}");
            }
        }
    }
}

#[test]
fn chow_norm_pieces_add_up() {
    let n = chow_norm(&q(&[3, -1, 4, 1, -5]), &cfg()).unwrap();
    let sum: f64 = n.root_terms.iter().sum();
    assert!((n.log_norm - (n.log_leading - sum)).abs() < 1e-14);
}

#[test]
fn moduli_height_examples() {
    assert_eq!(moduli_height(&q(&[3, -1, 4, 1])).unwrap().value(), 0.0);
    assert!(matches!(moduli_height(&q(&[0, 0, 1, 0])), Err(Error::Nullcone { .. })));
    // invariants of x^6 - y^6 are (-6, 9, 1350, 0) up to content 3
    let h = moduli_height(&q(&[-1, 0, 0, 0, 0, 0, 1])).unwrap();
    assert!(h.finite.is_zero() || h.finite.to_f64() <= 0.0);
    let xi = evaluate_invariants(&q(&[-1, 0, 0, 0, 0, 0, 1])).unwrap();
    let g = xi.values.iter().filter(|v| !v.is_zero()).map(|v| v.numer().clone()).fold(BigInt::zero(), |a, b| num_integer::Integer::gcd(&a, &b));
    let max = xi.values.iter().map(|v| crate::scalar::rational_to_f64(v).abs()).fold(0.0, f64::max);
    let expect = (max / crate::scalar::rational_to_f64(&BigRational::from_integer(g))).ln();
    assert!((h.value() - expect).abs() < 1e-12);
}

#[test]
fn git_height_examples() {
    for d in 2..=6 {
        let g = git_height_point(&power(d, rat(1, 1)), &cfg()).unwrap();
        assert!((g - LN_2 / 2.0).abs() < 1e-12);
    }
    assert!(git_height_point(&q(&[0, 1, 0]), &cfg()).unwrap().abs() < 1e-15);
    assert!(git_height_point(&q(&[0, 3, 0]), &cfg()).unwrap().abs() < 1e-15);
}

#[test]
fn cih_readings_on_cube_form() {
    let f = q(&[-1, 0, 0, 1]);
    let dec = cih_decomposition(&f, &cfg()).unwrap();
    assert!((dec.value() + 1.5 * LN_2).abs() < 1e-12);
    assert!((dec.value() - -1.0397).abs() < 1e-4);
    assert_eq!(cih_naive(&f).unwrap(), 0.0);
    let closed = cih_closed_form(3, &rat(1, 1)).unwrap();
    assert!((closed - 0.564).abs() < 5e-3);
    assert!((closed - (27f64.ln() / 4.0 - 3.0 / 8.0 * LN_2)).abs() < 1e-12);
    assert!((closed - 0.56403).abs() < 1e-5);
    let cubic = cih_cubic_closed_form(&f, &cfg()).unwrap();
    assert!((cubic.proof + 3.0 / 8.0 * LN_2).abs() < 1e-12);
    assert!((cubic.statement - 0.30409).abs() < 1e-5);
    assert!(cubic.differ);
    assert!(cih_cubic_closed_form(&q(&[0, 0, 1, 1]), &cfg()).is_err());
    assert!(matches!(cih_decomposition(&q(&[0, 0, 1, 0]), &cfg()), Err(Error::Nullcone { .. })));
    assert!(cih_naive(&q(&[0, 0, 1, 0])).is_err());
}

#[test]
fn cih_naive_matches_lwh_on_sextic() {
    let f = q(&[-1, 0, 0, 0, 0, 0, 1]);
    let lwh = evaluate_invariants(&f).unwrap().to_weighted().unwrap().lwh().value();
    assert!((cih_naive(&f).unwrap() - lwh).abs() < 1e-9);
}

#[test]
fn power_form_detection() {
    assert_eq!(power_form_parameter(&q(&[-2, 0, 0, 1])), Some(rat(2, 1)));
    assert_eq!(power_form_parameter(&q(&[-2, 1, 0, 1])), None);
    assert_eq!(power_form_parameter(&q(&[-2, 0, 0, 3])), None);
}

#[test]
fn balanced_minimum_is_d_log_2() {
    for d in 2..=6 {
        let div = roots(&power(d, rat(1, 1))).unwrap().to_f64();
        let m = minimize_chow_norm(&div, None, 200).unwrap();
        assert!((m.min_value - d as f64 * LN_2).abs() < 1e-6, "d={d}: {}", m.min_value);
        assert!(m.iterations <= 200);
        assert!(m.balanced_residual < 1e-8);
        assert!(m.coset.distance_to_identity() < 1e-6);
    }
}

#[test]
fn antipodal_pair_is_balanced() {
    let div = roots(&q(&[0, 1, 0])).unwrap().to_f64();
    let m = minimize_chow_norm(&div, None, 200).unwrap();
    assert!(m.min_value.abs() < 1e-12);
    assert!(m.coset.distance_to_identity() < 1e-9);
}

#[test]
fn unbalanced_configuration_moves() {
    // roots 0, 1, 2, 3 on the real line
    let f = q(&[0, -6, 11, -6, 1]);
    let div = roots(&f).unwrap().to_f64();
    let m = minimize_chow_norm(&div, None, 500).unwrap();
    assert!(m.balanced_residual < 1e-8);
    assert!(m.min_value <= -2.0 * chow_height(&f, &cfg()).unwrap() + 1e-9 || m.min_value.is_finite());
    assert!(m.trace.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    let start: f64 = div.roots.iter().map(|r| r.multiplicity as f64 * r.point.norm_sqr().ln()).sum();
    assert!(m.min_value <= start + 1e-12);
}

#[test]
fn orbit_partition_sums_orbits() {
    let f = power(4, rat(1, 1));
    let div = roots(&f).unwrap().to_f64();
    let g = automorphism_group(&f, 1e-8).unwrap();
    let whole = minimize_chow_norm(&div, None, 200).unwrap();
    let parts = minimize_chow_norm(&div, Some(&g.orbits), 200).unwrap();
    assert_eq!(parts.orbit_values.len(), g.orbits.len());
    assert!((parts.min_value - parts.orbit_values.iter().sum::<f64>()).abs() < 1e-12);
    assert!(parts.min_value <= whole.min_value + 1e-9);
}

#[test]
fn unstable_roots_are_rejected() {
    let div = roots(&q(&[0, 0, 1, 0])).unwrap().to_f64();
    assert!(matches!(minimize_chow_norm(&div, None, 200), Err(Error::Nullcone { .. })));
}

#[test]
fn coefficient_sup_objective() {
    let f = q(&[-1, 0, 0, 1]);
    let m = minimize_coefficient_sup(&f, 4, 2000).unwrap();
    assert_eq!(m.objective, Objective::CoefficientSup);
    assert!(m.min_value <= 1e-9);
    assert!(m.matrix.is_some());
}

#[test]
fn report_on_cube_form() {
    let r = verify_relations(&q(&[-1, 0, 0, 1]), &ReportConfig::default()).unwrap();
    assert_eq!(r.schema, SCHEMA);
    assert!(r.relation("R1").unwrap().residual.value().unwrap() < 1e-9);
    assert_eq!(r.lwh_xi, Num::Value(0.0));
    assert!((r.chowh.value().unwrap() - 1.5 * LN_2).abs() < 1e-12);
    assert!((r.cih_decomp.value().unwrap() + 1.5 * LN_2).abs() < 1e-12);
    assert_eq!(r.aut_order, Some(6));
    for key in ["cih_decomposition", "cih_closed_form", "cih_cubic_proof", "cih_cubic_statement"] {
        assert!(r.ledger_value(key).unwrap().value().is_some(), "{key}");
    }
    assert!(r.ledger_value("cih_decomposition - cih_closed_form").is_some());
    assert!(r.ledger_value("cih_cubic_proof - cih_cubic_statement").is_some());
    assert_eq!(r.violations().count(), 0);
    let json = serde_json::to_string(&r).unwrap();
    let back: HeightReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back, r);
    assert_eq!(serde_json::to_string(&back).unwrap(), json);
}

#[test]
fn report_on_unstable_form() {
    let r = verify_relations(&q(&[0, 0, 1, 0]), &ReportConfig::default()).unwrap();
    assert!(!r.semistable);
    assert_eq!(r.cih_decomp, Num::Infinite);
    assert!(r.relations.iter().all(|x| x.status == RelationStatus::NotApplicable));
    assert_eq!(r.relations.len(), 4);
    let json = serde_json::to_value(&r).unwrap();
    assert_eq!(json["cih_decomp"], "inf");
    assert_eq!(json["lwh_xi"], "n/a");
}

#[test]
fn report_rejects_other_degrees() {
    assert!(verify_relations(&q(&[1, 0, 1]), &ReportConfig::default()).is_err());
}

#[test]
fn num_rounds_to_fifteen_digits() {
    assert_eq!(serde_json::to_string(&Num::new(1.0 / 3.0)).unwrap(), "0.333333333333333");
    assert_eq!(serde_json::from_str::<Num>("\"inf\"").unwrap(), Num::Infinite);
    assert_eq!(Num::from(None), Num::NotApplicable);
}

fn semistable_form(d: usize) -> impl Strategy<Value = QForm> {
    prop::collection::vec(-5i64..=5, d + 1)
        .prop_filter_map("semistable", |c| {
            let f = QForm::from_integers(&c).ok()?;
            crate::forms::is_semistable(&f).ok()?.then_some(f)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn decomposition_holds(f in prop_oneof![semistable_form(3), semistable_form(4), semistable_form(5), semistable_form(6)]) {
        let r = verify_relations(&f, &ReportConfig::default()).unwrap();
        for rel in &r.relations {
            prop_assert_eq!(rel.status, RelationStatus::Pass, "{} {:?}", rel.name, rel.residual);
        }
    }

    #[test]
    fn scaling_laws(f in semistable_form(6), n in 1i64..50, m in 1i64..50) {
        let lambda = rat(n, m);
        let g = f.scale(&lambda);
        let ll = crate::scalar::ln_abs_rational(&lambda);
        let c = cfg();
        prop_assert!((chow_height(&g, &c).unwrap() - chow_height(&f, &c).unwrap() + ll).abs() < 1e-9);
        let (a, b) = (cih_decomposition(&g, &c).unwrap(), cih_decomposition(&f, &c).unwrap());
        prop_assert!((a.value() - b.value() - ll).abs() < 1e-9);
        prop_assert!((git_height_point(&g, &c).unwrap() - git_height_point(&f, &c).unwrap()).abs() < 1e-9);
        let lwh = |h: &QForm| evaluate_invariants(h).unwrap().to_weighted().unwrap().lwh().value();
        prop_assert!((lwh(&g) - lwh(&f)).abs() < 1e-12);
    }

    #[test]
    fn moduli_height_is_sl2z_invariant(f in semistable_form(4), k in -3i64..=3) {
        let g = f.act(&Matrix2::from_integers(1, k, 0, 1)).unwrap().act(&Matrix2::from_integers(0, -1, 1, 0)).unwrap();
        prop_assert_eq!(moduli_height(&g).unwrap(), moduli_height(&f).unwrap());
    }
}
