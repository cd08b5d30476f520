use extremal::modules::ModuleKind;
use extremal::ordering::enumerate;
use extremal::projector::verify;
use extremal::qpoly::URational;
use extremal::quantum::*;
use extremal::rational::q;
use extremal::coeff::Coefficient;
use extremal::taylor::Relations;
use extremal::Error;

fn engine(name: &str) -> QuantumEngine {
    q_cartan_weyl(&name.parse().unwrap(), None).unwrap()
}

fn boxed(k: ModuleKind) -> Box<ModuleKind> {
    Box::new(k)
}

#[test]
fn extremal_equations() {
    for (name, grade) in [("sl2", 6), ("sl3", 3), ("osp(1|2)", 4)] {
        let e = engine(name);
        let p = q_build(&e, grade).unwrap();
        let r = verify(&e, &p).unwrap();
        assert!(r.passed, "{name}: {:?}", r.residuals);
    }
}

#[test]
fn both_sl3_orderings_verify() {
    let spec = "sl3".parse().unwrap();
    let e = engine("sl3");
    for o in enumerate(e.rel.system()).unwrap() {
        let e = q_cartan_weyl(&spec, Some(o)).unwrap();
        assert!(serre_failures(&e, 3).unwrap().is_empty());
        assert!(e.rel.a_values().iter().all(|a| a.as_urational() == Some(URational::one())));
        let r = verify(&e, &q_build(&e, 3).unwrap()).unwrap();
        assert!(r.passed, "{:?}", r.residuals);
    }
}

#[test]
fn perturbed_quantum_projector_fails() {
    let e = engine("sl2");
    let p = q_build(&e, 3).unwrap();
    for g in 1..=3 {
        let m = p.terms.keys().find(|m| e.grade_of(m) == g).unwrap().clone();
        let mut bad = p.clone();
        let c = Coefficient::add(&bad.terms[&m], &Coefficient::one());
        bad.terms.insert(m, c);
        let r = verify(&e, &bad).unwrap();
        assert!(!r.passed);
        assert_eq!(r.residuals.iter().map(|x| x.grade).min(), Some(g));
    }
}

fn module_equations(e: &QuantumEngine, p: &QElement, m: &QModule) {
    let (pm, singular) = q_apply_partial(e, p, m).unwrap();
    let cols: Vec<usize> = singular.iter().map(|(c, _)| *c).collect();
    let restrict = |x: &QMatrix| {
        let mut y = x.clone();
        for c in &cols {
            for r in 0..m.dim() {
                y.set(r, *c, URational::zero());
            }
        }
        y
    };
    for i in 0..m.raise.len() {
        assert!(m.raise[i].mul(&pm).is_zero());
        let pf = restrict(&pm.mul(&restrict(&m.lower[i])));
        assert!(pf.is_zero());
    }
    let pp = restrict(&pm.mul(&pm));
    assert_eq!(pp, pm);
}

/// `[E_i, F_j] = δ_ij (K_i − K_i^{−1})/(q − q^{−1})` on the module.
fn chevalley_relations(m: &QModule) -> bool {
    let n = m.dim();
    let qq = URational::q_power(q(1), 1).sub(&URational::q_power(q(1), -1));
    for i in 0..m.raise.len() {
        for j in 0..m.raise.len() {
            let lhs = m.raise[i].mul(&m.lower[j]).add(&m.lower[j].mul(&m.raise[i]).scale(&URational::constant(q(-1))));
            let mut rhs = QMatrix::zeros(n);
            if i == j {
                for (r, w) in m.weights.iter().enumerate() {
                    let k = URational::q_power(q(1), w[i]).sub(&URational::q_power(q(1), -w[i]));
                    rhs.set(r, r, k.div(&qq));
                }
            }
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

#[test]
fn modules_satisfy_quantum_relations() {
    assert!(chevalley_relations(&q_spin(4)));
    assert!(chevalley_relations(&q_tensor(&q_spin(1), &q_spin(2))));
    assert!(chevalley_relations(&q_defining_sl3()));
    let mut bad = q_spin(2);
    bad.raise[0].set(0, 1, URational::one());
    assert!(!chevalley_relations(&bad));
}

#[test]
fn projector_on_modules() {
    let e = engine("sl2");
    let p = q_build(&e, 6).unwrap();
    for m in [q_spin(1), q_spin(3), q_spin(6), q_tensor(&q_spin(1), &q_spin(2)), q_tensor(&q_tensor(&q_spin(1), &q_spin(1)), &q_spin(1))] {
        module_equations(&e, &p, &m);
    }
    let e = engine("sl3");
    let p = q_build(&e, 3).unwrap();
    module_equations(&e, &p, &q_defining_sl3());
    module_equations(&e, &p, &q_tensor(&q_defining_sl3(), &q_defining_sl3()));
}

#[test]
fn sl3_orderings_act_alike() {
    let spec = "sl3".parse().unwrap();
    let m = q_tensor(&q_defining_sl3(), &q_defining_sl3());
    let mats: Vec<QMatrix> = enumerate(engine("sl3").rel.system())
        .unwrap()
        .into_iter()
        .map(|o| {
            let e = q_cartan_weyl(&spec, Some(o)).unwrap();
            q_apply_partial(&e, &q_build(&e, 3).unwrap(), &m).unwrap().0
        })
        .collect();
    assert_eq!(mats.len(), 2);
    assert_eq!(mats[0], mats[1]);
}

#[test]
fn classical_limits() {
    let cases = [
        ("sl2", ModuleKind::Spin(1), 2, true),
        ("sl2", ModuleKind::Spin(2), 4, false),
        ("sl2", ModuleKind::Spin(3), 4, false),
        ("sl2", ModuleKind::Tensor(boxed(ModuleKind::Spin(1)), boxed(ModuleKind::Spin(2))), 4, false),
        ("sl3", ModuleKind::Defining, 3, true),
        ("sl3", ModuleKind::Tensor(boxed(ModuleKind::Defining), boxed(ModuleKind::Defining)), 3, false),
    ];
    for (name, kind, grade, clean) in cases {
        let r = limit_report(&name.parse().unwrap(), &kind, grade).unwrap();
        assert!(r.passed, "{name} {kind:?}: {r:?}");
        assert_eq!(r.singular_columns.is_empty(), clean, "{name} {kind:?}");
        assert_eq!(r.compared.len() + r.singular_columns.len(), r.dim);
    }
}

#[test]
fn unsupported_algebras() {
    assert!(matches!(q_cartan_weyl(&"A3".parse().unwrap(), None), Err(Error::UnsupportedRank(_))));
    assert!(matches!(q_cartan_weyl(&"G2".parse().unwrap(), None), Err(Error::UnsupportedAlgebra(_))));
    assert!(matches!(q_cartan_weyl(&"gl(1|1)".parse().unwrap(), None), Err(Error::UnsupportedAlgebra(_))));
}
