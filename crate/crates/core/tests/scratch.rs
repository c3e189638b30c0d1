use painleve_core::confluence::*;
use painleve_core::maps::{confluence_substitution, EquivalenceId};
use painleve_core::ratexpr::{substitute, RationalExpr};

#[test]
fn roundtrip() {
    let sub = confluence_substitution();
    let inv = inverse_substitution(&sub).unwrap();
    for idx in 0..sub.eps_table.len() {
        let img = substitute(&inv[idx], &sub.old_in_new).unwrap();
        let expect = RationalExpr::sym(&sub.eps_table, sub.eps_table.name(idx)).unwrap();
        assert!(img.rat_equal(&expect), "roundtrip fails for {}", sub.eps_table.name(idx));
    }
    for idx in 0..sub.d6_table.len() {
        let img = substitute(&sub.old_in_new[idx], &inv).unwrap();
        let expect = RationalExpr::sym(&sub.d6_table, sub.d6_table.name(idx)).unwrap();
        assert!(img.rat_equal(&expect), "reverse roundtrip fails for {}", sub.d6_table.name(idx));
    }
    println!("roundtrip ok");
}

#[test]
fn limit() {
    let r = check_confluence_limit().unwrap();
    println!("{:?} {:?} ({} ms)", r.status, r.witness, r.millis);
    assert!(r.passed());
}

#[test]
fn planar() {
    let r = check_planar_degeneration().unwrap();
    println!("{:?} {:?} ({} ms)", r.status, r.witness, r.millis);
    assert!(r.passed());
}

#[test]
fn equiv_b6a() {
    let r = check_equivalence(EquivalenceId::D6ToB6A).unwrap();
    println!("{:?} {:?} ({} ms)", r.status, r.witness, r.millis);
    assert!(r.passed());
}

#[test]
fn equiv_rest() {
    for id in [EquivalenceId::D6ToB6B, EquivalenceId::D6ToD72] {
        let r = check_equivalence(id).unwrap();
        println!("{} {:?} {:?} ({} ms)", r.subject, r.status, r.witness, r.millis);
        assert!(r.passed());
    }
}

#[test]
fn subgroup() {
    let r = check_subgroup_convergence().unwrap();
    println!("{:?} {:?} ({} ms)", r.status, r.witness, r.millis);
    assert!(r.passed());
}
