mod common;

use extremal::ordering::enumerate;
use extremal::projector::*;
use extremal::rational::{q, qf};
use extremal::taylor::Relations;

fn engine(name: &str) -> ClassicalEngine {
    classical_engine(&name.parse().unwrap(), None, RhoMode::Standard).unwrap()
}

#[test]
fn su2_coefficient_forms_agree() {
    let generic = su2_generic_specialized(10).unwrap();
    let closed = su2_closed_form(10);
    let ansatz = shapiro_ansatz_solve(10);
    assert_eq!(generic, closed);
    assert_eq!(closed, ansatz);
    for two_j in 0..=10i64 {
        let j = qf(two_j, 2);
        for (n, c) in closed.iter().enumerate() {
            let n = n as i64;
            let value = (1..=n).fold(q(1), |acc, k| acc / (q(k) * q(two_j + 1 + k)));
            let value = if n % 2 == 1 { -value } else { value };
            assert_eq!(c.evaluate(&[j.clone()]).unwrap(), value, "2j = {two_j}, n = {n}");
        }
    }
}

#[test]
fn su2_factor_against_verma_oracle() {
    let e = engine("A1");
    let rs = e.rel.system();
    let coeffs = factor_coefficients(rs, &rs.reduced[0], 8, RhoMode::Standard);
    for mu in [q(0), q(1), q(5), qf(1, 3), qf(-7, 2)] {
        let oracle = common::verma_su2_coefficients(8, &mu);
        for (c, o) in coeffs.iter().zip(&oracle) {
            assert_eq!(&c.evaluate(&[mu.clone()]).unwrap(), o, "mu = {mu}");
        }
    }
}

#[test]
fn extremal_equations_small_grades() {
    for (name, grade) in [("A1", 6), ("A2", 3), ("B2", 2), ("G2", 2), ("A1xA1", 3), ("A3", 2), ("C3", 1), ("D4", 1), ("gl(2|1)", 3), ("gl(1|2)", 3)] {
        let e = engine(name);
        let p = build(&e, grade, RhoMode::Standard).unwrap();
        let r = verify(&e, &p).unwrap();
        assert!(r.passed, "{name}: {}", report_text(&r));
    }
}

#[test]
fn gl11_grey_projector_is_exact() {
    let e = engine("gl(1|1)");
    let low = build(&e, 1, RhoMode::Standard).unwrap();
    let high = build(&e, 5, RhoMode::Standard).unwrap();
    assert_eq!(low.terms, high.terms);
    assert_eq!(high.len(), 2);
    assert_eq!(square(&e, &high).unwrap().terms, high.terms);
    let rs = e.rel.system();
    let g = &rs.simple[0].coords;
    let neg: Vec<i64> = g.iter().map(|c| -c).collect();
    assert!(e.multiply(&e.root_vector(g, 5).unwrap(), &high).unwrap().is_zero());
    assert!(e.multiply(&high, &e.root_vector(&neg, 5).unwrap()).unwrap().is_zero());
    assert!(verify(&e, &high).unwrap().passed);
}

#[test]
fn osp12_dark_projector() {
    let e = engine("osp(1|2)");
    let p = build(&e, 6, RhoMode::Standard).unwrap();
    let r = verify(&e, &p).unwrap();
    assert!(r.passed, "{}", report_text(&r));
}

fn ordering_independence(name: &str, grade: u32, mode: RhoMode) {
    let canon = classical_engine(&name.parse().unwrap(), None, mode).unwrap();
    let reference = build(&canon, grade, mode).unwrap();
    let orderings = enumerate(canon.rel.system()).unwrap();
    assert!(orderings.len() >= 2);
    for o in orderings {
        let e = classical_engine(&name.parse().unwrap(), Some(o.clone()), mode).unwrap();
        let p = build(&e, grade, mode).unwrap();
        let moved = canon.import(&e, &p).unwrap();
        assert_eq!(moved.terms, reference.terms, "{name} {:?}", o.roots);
    }
}

#[test]
fn rank_two_orderings_agree() {
    ordering_independence("A2", 3, RhoMode::Standard);
    ordering_independence("B2", 2, RhoMode::Standard);
    ordering_independence("G2", 2, RhoMode::Standard);
}

#[test]
fn rank_two_identities_with_free_rho() {
    ordering_independence("A1xA1", 3, RhoMode::Symbolic);
    ordering_independence("A2", 3, RhoMode::Symbolic);
    ordering_independence("B2", 2, RhoMode::Symbolic);
    ordering_independence("G2", 2, RhoMode::Symbolic);
}

#[test]
fn free_rho_is_not_a_projector() {
    let e = classical_engine(&"A2".parse().unwrap(), None, RhoMode::Symbolic).unwrap();
    let p = build(&e, 2, RhoMode::Symbolic).unwrap();
    assert!(!verify(&e, &p).unwrap().passed);
}

#[test]
fn perturbations_fail_at_their_grade() {
    for (name, grade, all) in [("A1", 4, true), ("A2", 2, true), ("B2", 2, false), ("osp(1|2)", 3, true), ("gl(2|1)", 2, false)] {
        let e = engine(name);
        let p = build(&e, grade, RhoMode::Standard).unwrap();
        for g in 0..=grade {
            let count = p.terms.keys().filter(|m| e.grade_of(m) == g).count();
            let picks: Vec<usize> = if all { (0..count).collect() } else { vec![0, count - 1] };
            for i in picks {
                let bad = perturb(&e, &p, g, i).unwrap();
                let r = verify(&e, &bad).unwrap();
                assert!(!r.passed, "{name} grade {g} term {i}");
                let lowest = r.residuals.iter().map(|x| x.grade).min().unwrap();
                assert_eq!(lowest, g, "{name} grade {g} term {i}");
            }
        }
    }
}

#[test]
fn json_round_trip() {
    let e = engine("B2");
    let p = build(&e, 2, RhoMode::Standard).unwrap();
    let v = e.to_json(&p);
    assert_eq!(v["schema"], 1);
    let back = e.from_json(&v).unwrap();
    assert_eq!(back.terms, p.terms);
    let text = serde_json::to_string(&verify(&e, &p).unwrap()).unwrap();
    assert!(text.contains("\"passed\":true"));
}
